//! Reproduce a figure's data through the experiment runner: writes the CSV
//! and a manifest that can replay the run byte for byte.
//!
//! ```bash
//! cargo run --release --example figure_data [preset] [out_dir]
//! ```

use fso_acq::experiment::{preset_task, rerun_manifest, run_task};

fn main() -> fso_acq::Result<()> {
    let mut args = std::env::args().skip(1);
    let preset = args.next().unwrap_or_else(|| "fig8".to_string());
    let out_dir = std::path::PathBuf::from(args.next().unwrap_or_else(|| format!("out-{preset}")));

    let task = preset_task(&preset)?;
    let artifacts = run_task(&task, Some(&preset), &out_dir)?;
    for p in &artifacts.csv_paths {
        println!("wrote {}", p.display());
    }
    println!("wrote {}", artifacts.manifest_path.display());

    // prove reproducibility: replay from the manifest and compare bytes
    let replay_dir = out_dir.join("replay");
    let replay = rerun_manifest(&artifacts.manifest_path, &replay_dir)?;
    for (a, b) in artifacts.csv_paths.iter().zip(&replay.csv_paths) {
        let original = std::fs::read(a)?;
        let replayed = std::fs::read(b)?;
        assert_eq!(original, replayed, "replay must be byte-identical");
    }
    println!("replay in {} is byte-identical", replay_dir.display());
    Ok(())
}
