//! Run every stage on the toy corpus with the mock backend, the same as
//! `aise --config fixtures/toy/config.toml --mock all`.
//!
//!     cargo run --example full_pipeline [out_dir]

use std::path::{Path, PathBuf};

use aise::pipeline::{Overrides, Pipeline, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out_dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("aise-toy-run"));
    let config_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/toy/config.toml");
    let config = RunConfig::resolve(
        Some(&config_path),
        Overrides {
            out_dir: Some(out_dir),
            mock: true,
            ..Overrides::default()
        },
    )?;
    let summary = Pipeline::new(config).run_all()?;
    println!("{summary}");
    Ok(())
}
