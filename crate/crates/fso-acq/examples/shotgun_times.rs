//! Shotgun-search statistics: mean time over the firing spread, the two
//! optimal spreads, and the agreement between the binomial-sum CCDF and its
//! quadrature cross-check.
//!
//! ```bash
//! cargo run --release --example shotgun_times
//! ```

use fso_acq::region::ScanGeometry;
use fso_acq::shotgun::{
    ccdf, ccdf_quadrature, mean_acq_time, optimal_sigma0_ccdf, optimal_sigma0_mean,
    FiringDistribution,
};

fn main() -> fso_acq::Result<()> {
    let geom = ScanGeometry::new(0.2, 1e-4, 15.0, 50.0)?;
    let pd = 0.05;

    println!("{:>10} {:>12}", "sigma0 [m]", "mean [s]");
    for s0 in [16.0, 18.0, 21.2132, 25.0, 30.0, 40.0, 60.0] {
        let firing = FiringDistribution::new(s0)?;
        println!("{s0:>10.4} {:>12.4}", mean_acq_time(&firing, &geom, pd)?);
    }

    let best = optimal_sigma0_mean(geom.sigma);
    let firing = FiringDistribution::new(best)?;
    println!(
        "\nmean-optimal spread sqrt(2) sigma = {best:.4} m -> {:.4} s",
        mean_acq_time(&firing, &geom, pd)?
    );

    let tail = optimal_sigma0_ccdf(80.0, &geom, pd)?;
    println!(
        "ccdf-optimal spread at tau = 80 s: {:.4} m -> P(T > 80) = {:.6}",
        tail.sigma0, tail.objective
    );

    println!("\nbinomial sum vs quadrature cross-check:");
    for tau in [20.0, 80.0, 160.0] {
        let b = ccdf(tau, &firing, &geom, pd, 1e-12)?;
        let q = ccdf_quadrature(tau, &firing, &geom, pd)?;
        println!(
            "  tau {tau:>5}: {b:.9} vs {q:.9}  (diff {:.1e})",
            (b - q).abs()
        );
    }
    Ok(())
}
