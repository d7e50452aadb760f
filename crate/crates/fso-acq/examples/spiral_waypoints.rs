//! Generate the Archimedean scan spiral and check its coverage bookkeeping.
//!
//! ```bash
//! cargo run --release --example spiral_waypoints
//! ```

use fso_acq::region::{spiral_waypoints, ScanGeometry};

fn main() -> fso_acq::Result<()> {
    let geom = ScanGeometry::new(0.2, 1e-4, 15.0, 50.0)?;
    let out_radius = 10.0;
    let wps = spiral_waypoints(&geom, out_radius)?;

    println!(
        "spiral to {out_radius} m with beam radius {} m",
        geom.beam_radius
    );
    println!("waypoints: {}", wps.len());
    let predicted = std::f64::consts::PI * out_radius * out_radius
        / (4.0 * geom.beam_radius * geom.beam_radius);
    println!("area estimate pi R^2 / (4 rho^2) = {predicted:.0}");

    println!("\nfirst turns (index, radius, angle, x, y):");
    for (i, w) in wps.iter().enumerate().take(8) {
        let (x, y) = w.xy();
        println!(
            "{i:>4} {:>8.4} {:>9.4} {x:>8.4} {y:>8.4}",
            w.radius, w.angle
        );
    }
    let last = wps.last().unwrap();
    println!("rim waypoint radius: {:.4} m", last.radius);

    // dwell bookkeeping: walking every waypoint costs about the quadratic
    // scan-time model
    let walk_s = wps.len() as f64 * geom.dwell_time;
    let model_s = geom.scan_time(out_radius)?;
    println!("walk time {walk_s:.3} s vs continuous model {model_s:.3} s");
    Ok(())
}
