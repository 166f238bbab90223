//! Fractional revivals: the Gauss-sum weights at `t* = π hbar r / (|c2| s)`,
//! the resulting cat of rotated coherent packets, and its distance from
//! direct evolution.
//!
//! ```bash
//! cargo run --example fractional_cats
//! ```

use num_complex::Complex64;
use revivals::fractional::{decompose, verify_decomposition};
use revivals::QuadraticSpectrum;

fn main() -> revivals::Result<()> {
    let kerr = QuadraticSpectrum::kerr(1.0, 1.0)?;
    let z = Complex64::new(2.0, 0.0);
    for (r, s) in [(1, 2), (1, 3), (1, 4), (3, 5)] {
        let dec = decompose(r, s, &kerr)?;
        println!("(r, s) = ({r}, {s}): t* = {:.6}, l = {}, sum |a_p|^2 = {:.15}", dec.t_star, dec.l, dec.weight_norm());
        for c in dec.components() {
            println!("    p = {}: |a_p| = {:.6}, theta_p = {:.6}", c.p, c.re_a.hypot(c.im_a), c.theta);
        }
        println!("    || cat - U(t*)|z> || = {:.2e}", verify_decomposition(z, r, s, &kerr, 1e-14)?);
    }
    if let Err(e) = decompose(2, 4, &kerr) {
        println!("(2, 4): {e}");
    }
    Ok(())
}
