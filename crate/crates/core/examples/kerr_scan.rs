//! Autocorrelation scan for a coherent packet in a Kerr medium: full revivals
//! at `t = π` and `2π`, the cat at `π/2`, and no exact return when `c1/c2` is
//! irrational.
//!
//! ```bash
//! cargo run --release --example kerr_scan
//! ```

use num_complex::Complex64;
use revivals::evolution::{autocorrelation_scan, first_revival, linear_grid, revival_peaks};
use revivals::{coherent_packet, QuadraticSpectrum};

fn main() -> revivals::Result<()> {
    let kerr = QuadraticSpectrum::kerr(1.0, 1.0)?;
    let psi = coherent_packet(Complex64::new(2.0, 0.0), 1e-12, None)?;

    let series = autocorrelation_scan(&psi, &kerr, &linear_grid(0.0, std::f64::consts::TAU, 4096))?;
    println!("revival peaks (C > 1 - 1e-9): {:?}", revival_peaks(&series, 1.0 - 1e-9));
    println!("C(π/2) = {:.6}", series[1024].1);
    println!(
        "first revival found by scanning (the generic formula gives 2π): {:?}",
        first_revival(&psi, &kerr, std::f64::consts::TAU, 4096, 1.0 - 1e-9)?
    );

    let irr = QuadraticSpectrum::new(0.0, 2f64.sqrt(), 1.0, 1.0)?;
    let scan = autocorrelation_scan(&psi, &irr, &linear_grid(0.0, 100.0, 100_000)[1..])?;
    let best = scan.iter().copied().fold((0.0, 0.0), |m, p| if p.1 > m.1 { p } else { m });
    println!("c1/c2 = sqrt 2: best return on (0, 100] is C = {:.8} at t = {:.4}", best.1, best.0);
    Ok(())
}
