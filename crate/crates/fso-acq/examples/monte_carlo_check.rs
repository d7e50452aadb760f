//! Validate the closed forms of both schemes against the discrete-event
//! simulator.
//!
//! ```bash
//! cargo run --release --example monte_carlo_check
//! ```

use fso_acq::adaptive_spiral::{ccdf, event_probs, mean_acq_time};
use fso_acq::montecarlo::{simulate_adaptive_spiral, simulate_shotgun, McConfig};
use fso_acq::region::{LocationModel, Partition, ScanGeometry};
use fso_acq::shotgun::{self, FiringDistribution};

fn main() -> fso_acq::Result<()> {
    let geom = ScanGeometry::new(0.2, 1e-4, 15.0, 50.0)?;
    let pd = 0.05;
    let cfg = McConfig {
        trials: 100_000,
        seed: 2024,
        ..McConfig::default()
    };

    println!("adaptive spiral, N = 7, evenly spaced radii:");
    let model = LocationModel::truncated(&geom);
    let partition = Partition::uniform(7, &geom)?;
    let probs = event_probs(&partition, pd, &model)?;
    let closed_mean = mean_acq_time(&partition, &probs, &geom)?;
    let closed_tail = ccdf(80.0, &partition, &probs, &geom)?;
    let sim = simulate_adaptive_spiral(&partition, &geom, pd, &model, &cfg)?;
    println!(
        "  mean: closed {closed_mean:.4} s vs simulated {:.4} +- {:.4} s",
        sim.empirical_mean, sim.mean_stderr
    );
    let pt = &sim.ccdf_points[0];
    println!(
        "  P(T > 80): closed {closed_tail:.5} vs simulated {:.5} +- {:.5}",
        pt.estimate, pt.stderr
    );

    println!("\nshotgun at the mean-optimal spread:");
    let firing = FiringDistribution::new(shotgun::optimal_sigma0_mean(geom.sigma))?;
    let unbounded = LocationModel::untruncated(&geom);
    let closed_mean = shotgun::mean_acq_time(&firing, &geom, pd)?;
    let closed_tail = shotgun::ccdf(80.0, &firing, &geom, pd, 1e-12)?;
    let sim = simulate_shotgun(&firing, &geom, pd, &unbounded, &cfg)?;
    println!(
        "  mean: closed {closed_mean:.4} s vs simulated {:.4} +- {:.4} s",
        sim.empirical_mean, sim.mean_stderr
    );
    let pt = &sim.ccdf_points[0];
    println!(
        "  P(T > 80): closed {closed_tail:.5} vs simulated {:.5} +- {:.5}",
        pt.estimate, pt.stderr
    );

    println!("\nphoton-level detection (Poisson draws over a count threshold):");
    let det = fso_acq::detection::threshold_for_pfa(13.0, 1e-12)?;
    let photon_cfg = McConfig {
        photon_level: Some(fso_acq::montecarlo::PhotonDetection {
            mean_count: 38.0,
            count_threshold: det.count_threshold,
        }),
        ..cfg
    };
    let pd_from_counts = fso_acq::detection::poisson_tail(det.count_threshold, 38.0)?;
    let sim = simulate_adaptive_spiral(&partition, &geom, pd_from_counts, &model, &photon_cfg)?;
    let probs = event_probs(&partition, pd_from_counts, &model)?;
    let closed = mean_acq_time(&partition, &probs, &geom)?;
    println!("  implied P_D = {pd_from_counts:.5}: closed {closed:.4} s vs photon-level {:.4} +- {:.4} s", sim.empirical_mean, sim.mean_stderr);
    Ok(())
}
