//! Near revivals of the cancelled dynamics: returns of the rotation
//! `theta -> theta + nu1` to an arc of length `eps`. The gaps take at most
//! three values and average `2π / eps` steps.
//!
//! ```bash
//! cargo run --release --example three_gap
//! ```

use revivals::recurrence::{gap_statistics, golden_rotation, mean_recurrence, near_revivals, three_gap_trials};

fn main() -> revivals::Result<()> {
    for eps in [0.02, 0.1, 0.5] {
        let rec = near_revivals(0.0, golden_rotation(), eps, 1_000_000)?;
        let stats = gap_statistics(&rec)?;
        let mean = mean_recurrence(&rec, 1.0)?;
        println!(
            "eps = {eps}: {} returns, gaps {:?} x {:?}, mean {:.4} (2π/eps = {:.4})",
            rec.indices.len(),
            stats.distinct_gaps,
            stats.frequencies,
            mean.empirical_mean,
            mean.ergodic_prediction
        );
    }

    let trials = three_gap_trials(7, 20, 200_000, &[0.02, 0.1, 0.5], &[1.0])?;
    let ok = trials.iter().filter(|t| t.three_gap_ok).count();
    println!("{ok} of {} random rotations obey the three-gap law", trials.len());
    for t in trials.iter().take(5) {
        println!(
            "    nu1 = {:.6}, eps = {}: gaps {:?}, min C = {:.6}",
            t.nu1, t.epsilon, t.distinct_gaps, t.min_correlation[0]
        );
    }
    Ok(())
}
