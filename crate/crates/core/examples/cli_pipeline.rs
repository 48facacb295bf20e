//! The command-line workflow driven in-process: synthesize a short sequence,
//! register it, and evaluate the result, all inside a temporary directory.
//!
//! cargo run --release --example cli_pipeline

use linereg::cli;

fn run(args: &[&str]) -> i32 {
    println!("$ linereg {}", args.join(" "));
    cli::run(std::iter::once("linereg").chain(args.iter().copied()))
}

fn main() -> std::io::Result<()> {
    let dir = tempfile::tempdir()?;
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let (data, out) = (path("box_room"), path("run"));

    let steps: [Vec<String>; 4] = [
        vec!["synth", "--scene", "box_room", "--frames", "4", "--noise", "0.005", "--seed", "2", "--out", &data],
        vec!["register", &data, "--seed", "2", "--out", &out],
        vec!["fit", &format!("{data}/frame_000000.png"), "--out", &path("frame0.ply")],
        vec![
            "eval",
            "--est",
            &format!("{out}/trajectory_tum.txt"),
            "--gt",
            &format!("{data}/groundtruth_tum.txt"),
            "--rpe",
        ],
    ]
    .map(|s| s.iter().map(|a| a.to_string()).collect());

    for step in &steps {
        let args: Vec<&str> = step.iter().map(String::as_str).collect();
        let code = run(&args);
        if code != cli::EXIT_OK {
            eprintln!("exit code {code}");
            std::process::exit(code);
        }
    }
    println!("outputs:");
    for entry in std::fs::read_dir(dir.path().join("run"))? {
        println!("  {}", entry?.path().display());
    }
    Ok(())
}
