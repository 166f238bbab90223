//! Quadratic spectra: Kerr, a raw quadratic, and the finite Pöschl-Teller
//! ladder with its negative `c2`, plus the revival regime each one falls in.
//!
//! ```bash
//! cargo run --example spectra_levels
//! ```

use revivals::evolution::classify_revivals;
use revivals::{PoschlTellerParams, QuadraticSpectrum};

fn main() -> revivals::Result<()> {
    let kerr = QuadraticSpectrum::kerr(1.0, 1.0)?;
    let irrational = QuadraticSpectrum::new(0.0, 2f64.sqrt(), 1.0, 1.0)?;
    let pt = PoschlTellerParams::new(1.0, 6.0, 1.0);

    println!("Kerr E_n = n(n-1):   {:?}", (0..6).map(|n| kerr.energy(n)).collect::<Result<Vec<_>, _>>()?);
    let ladder = pt.spectrum()?;
    println!("Pöschl-Teller A=1, C=6: eta = {}, levels {:?}", ladder.eta, ladder.levels);
    let q = pt.quadratic()?;
    println!("  as c0 + c1 n + c2 n^2: ({}, {}, {}), top level {:?}", q.c0, q.c1, q.c2, q.n_max);
    match q.energy(3) {
        Err(e) => println!("  level 3: {e}"),
        Ok(e) => println!("  level 3: {e}"),
    }

    for (name, spec) in [("kerr", kerr), ("sqrt2", irrational), ("poschl-teller", q)] {
        let c = classify_revivals(&spec, 1e-12, 1_000_000)?;
        println!("{name:>14}: {:?}, T_rev = {:?}, c1/c2 = {:?}, sign(c2) = {}", c.case, c.t_rev, c.r_over_s, c.c2_sign);
    }
    Ok(())
}
