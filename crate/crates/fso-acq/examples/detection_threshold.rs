//! Pick count thresholds for a false-alarm target and tabulate the resulting
//! detection probabilities across the photon-limited operating range.
//!
//! ```bash
//! cargo run --release --example detection_threshold
//! ```

use fso_acq::detection::{poisson_tail, threshold_for_pfa};

fn main() -> fso_acq::Result<()> {
    let signal_count = 25.0;
    let pfa_target = 1e-12;

    println!("signal count {signal_count}, false-alarm target {pfa_target:.0e}");
    println!("{:>5} {:>7} {:>13} {:>10}", "mu0", "gamma0", "P_FA", "P_D");
    for noise in 13..=24 {
        let mu0 = noise as f64;
        let det = threshold_for_pfa(mu0, pfa_target)?;
        let pfa = poisson_tail(det.count_threshold, mu0)?;
        let pd = poisson_tail(det.count_threshold, mu0 + signal_count)?;
        println!(
            "{mu0:>5.0} {:>7} {pfa:>13.3e} {pd:>10.5}",
            det.count_threshold
        );
    }

    // the threshold reacts to the target: a lax target accepts every count
    let lax = threshold_for_pfa(13.0, 0.999999)?;
    println!(
        "\nlax target 0.999999 at mu0 = 13 -> threshold {}",
        lax.count_threshold
    );
    Ok(())
}
