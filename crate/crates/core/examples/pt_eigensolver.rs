//! Finite-difference bound states of `A p^2 - C sech^2 x` against the closed
//! form, and the error ratio when the grid spacing is halved.
//!
//! ```bash
//! cargo run --release --example pt_eigensolver
//! ```

use revivals::berry::{diagonalize_pt, Grid};
use revivals::PoschlTellerParams;

fn main() -> revivals::Result<()> {
    let grid = Grid::default();
    for (a, c) in [(1.0, 2.0), (1.0, 6.0), (1.0, 30.0)] {
        let exact = PoschlTellerParams::new(a, c, 1.0).spectrum()?.levels;
        let coarse = diagonalize_pt(a, c, 1.0, &grid)?;
        let fine = diagonalize_pt(a, c, 1.0, &grid.refined())?;
        println!("A = {a}, C = {c}: {} bound states", exact.len());
        for (n, e) in exact.iter().enumerate() {
            let (e1, e2) = ((coarse.energies[n] - e).abs(), (fine.energies[n] - e).abs());
            println!("    n = {n}: exact {e:>10.6}, error {e1:.3e} -> {e2:.3e} (ratio {:.3})", e1 / e2);
        }
        println!(
            "    <ln cosh x>_n: {:?}",
            (0..exact.len()).map(|n| coarse.f_expectation(n)).collect::<Result<Vec<_>, _>>()?
        );
    }
    Ok(())
}
