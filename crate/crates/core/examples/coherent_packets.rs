//! Coherent and Gaussian packets over the level basis: truncation, reported
//! tail mass, and the coherent-state overlap `exp(-|z - w|^2)`.
//!
//! ```bash
//! cargo run --example coherent_packets
//! ```

use num_complex::Complex64;
use revivals::{coherent_packet, correlation, gaussian_packet};

fn main() -> revivals::Result<()> {
    for z in [0.5, 2.0, 6.0] {
        let psi = coherent_packet(Complex64::new(z, 0.0), 1e-12, None)?;
        println!("|z| = {z}: levels 0..={}, tail mass {:.2e}", psi.n_trunc(), psi.tail_mass());
    }

    // a cap inside the Poisson tail is honoured and the cut reported
    let capped = coherent_packet(Complex64::new(2.0, 0.0), 1e-12, Some(8))?;
    println!("capped at n = 8: tail mass {:.3e}", capped.tail_mass());
    if let Err(e) = coherent_packet(Complex64::new(2.0, 0.0), 1e-12, Some(2)) {
        println!("capped at n = 2: {e}");
    }

    let z = Complex64::new(1.0, 0.5);
    let w = Complex64::new(-0.5, 1.0);
    let (a, b) = (coherent_packet(z, 1e-14, None)?, coherent_packet(w, 1e-14, None)?);
    println!("|<z|w>|^2 = {:.15}, exp(-|z-w|^2) = {:.15}", correlation(&a, &b), (-(z - w).norm_sqr()).exp());

    let g = gaussian_packet(10.0, 2.0, 1e-12, None)?;
    let mean: f64 = g.populations().iter().enumerate().map(|(n, p)| n as f64 * p).sum();
    println!("Gaussian n0 = 10, sigma = 2: mean level {mean:.6}");
    Ok(())
}
