//! Tuning a drive period so the `n^2` phase cancels, then following a
//! coherent packet stroboscopically: it stays coherent and its overlap
//! follows `exp[2|z|^2 (cos k nu1 - 1)]`. Without the tuning, cats appear.
//!
//! ```bash
//! cargo run --release --example strobe_cancellation
//! ```

use num_complex::Complex64;
use revivals::berry::{berry_phases, fit_phase_profile, tune_period, Grid, ParameterLoop};
use revivals::strobe::{cat_overlap, nu_from, strobe_correlation, strobe_evolve};
use revivals::{coherent_packet, correlation};

fn main() -> revivals::Result<()> {
    let hbar = 1.0;
    let lp = ParameterLoop::rectangle((0.6, 0.8), (0.0, 1.0), 6.0, 64, 1.0)?;
    let gammas = berry_phases(&lp, 3, hbar, &Grid::default(), 9)?;
    let profile = fit_phase_profile(&gammas.iter().copied().enumerate().collect::<Vec<_>>())?;

    let untuned = nu_from(&profile, &lp.coefficient_trajectories(hbar)?, hbar, lp.period())?;
    let (tuned_loop, tuned_profile) = tune_period(&lp, &profile, hbar)?;
    let tuned = nu_from(&tuned_profile, &tuned_loop.coefficient_trajectories(hbar)?, hbar, tuned_loop.period())?;
    println!("T = 1:      nu = {:?}", untuned.nu);
    println!("T = {:.4}: nu = {:?}", tuned_loop.period(), tuned.nu);

    let z = Complex64::new(2.0, 0.0);
    let psi = coherent_packet(z, 1e-14, None)?;
    let pops = psi.populations();
    for k in [1u64, 10, 100, 1000, 10_000] {
        let c = correlation(&psi, &strobe_evolve(&psi, &tuned, k));
        let best_cat = cat_overlap(&pops, &untuned, k, 8);
        println!(
            "k = {k:>5}: tuned C = {c:.12} (closed form {:.12}); untuned best cat overlap {:.4} {:?}",
            strobe_correlation(z, tuned.nu1(), k),
            best_cat.0,
            best_cat.1
        );
    }
    Ok(())
}
