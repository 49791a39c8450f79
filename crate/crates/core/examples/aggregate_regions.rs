//! Employment-weighted exposure by sector and the two-stage county
//! projection.
//!
//!     cargo run --example aggregate_regions

use std::fs::File;

use aise::aggregate::{county_projection, group_exposure, GroupKind};
use aise::corpus::{load_employment, EmploymentKind};
use aise::exposure::{read_scores_csv, IndexKind, RunMetadata};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/county");
    let scores = read_scores_csv(
        File::open(format!("{dir}/scores.csv"))?,
        RunMetadata::new(IndexKind::Aise),
    )?;
    let national = load_employment(
        format!("{dir}/national_sector_occupation.csv"),
        EmploymentKind::SectorOccupation,
    )?;
    let counties = load_employment(format!("{dir}/county_sector.csv"), EmploymentKind::AreaSector)?;

    let sectors = group_exposure(&scores, &national, GroupKind::Sector)?;
    for (key, e) in &sectors.entries {
        println!("sector {key} ({}) {}", e.group_title, e.score);
    }
    let projected = county_projection(&scores, &national, &counties)?;
    for (key, e) in &projected.entries {
        println!("county {key} ({}) {}", e.group_title, e.score);
    }
    Ok(())
}
