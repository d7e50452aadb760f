//! Closed-form acquisition-time statistics of the adaptive spiral scheme:
//! subscan event probabilities, mean, CCDF, and the density surface.
//!
//! ```bash
//! cargo run --release --example adaptive_spiral_times
//! ```

use fso_acq::adaptive_spiral::{event_probs, SpiralTimeStats};
use fso_acq::region::{LocationModel, Partition, ScanGeometry};

fn main() -> fso_acq::Result<()> {
    let geom = ScanGeometry::new(0.2, 1e-4, 15.0, 50.0)?;
    let model = LocationModel::truncated(&geom);
    let pd = 0.05;

    println!("{:>3} {:>12} {:>12}", "N", "mean [s]", "P(T > 80 s)");
    for n in 1..=7 {
        let partition = Partition::uniform(n, &geom)?;
        let probs = event_probs(&partition, pd, &model)?;
        let stats = SpiralTimeStats::new(&partition, &probs, &geom)?;
        println!("{n:>3} {:>12.4} {:>12.6}", stats.mean_s(), stats.ccdf(80.0));
    }

    let partition = Partition::uniform(7, &geom)?;
    let probs = event_probs(&partition, pd, &model)?;
    println!("\nN = 7 subscan detection probabilities:");
    for (k, e) in probs.per_subscan.iter().enumerate() {
        println!("  subscan {}: {e:.6}", k + 1);
    }
    let total: f64 = probs.per_subscan.iter().sum::<f64>() + probs.p_fail;
    println!("  scan failure: {:.6}  (total {total:.12})", probs.p_fail);

    let stats = SpiralTimeStats::new(&partition, &probs, &geom)?;
    println!("\none full scan lasts {:.4} s", stats.scan_duration());
    let (loc, mass) = stats.v_atom();
    println!("single-scan failure atom: mass {mass:.4} at {loc:.4} s");
    println!("density of T at 10 s: {:.6} 1/s", stats.density_t(10.0));
    Ok(())
}
