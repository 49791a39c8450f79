//! Load the bundled toy corpus and print its validation report.
//!
//!     cargo run --example load_corpus

use aise::corpus::{
    load_ability_ratings, load_job_zones, load_occupations, load_startups, validate_corpus,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/toy");
    let zones = load_job_zones(format!("{dir}/job_zones.tsv"))?;
    let occupations = load_occupations(format!("{dir}/occupations.tsv"))?.with_job_zones(&zones);
    let startups = load_startups(format!("{dir}/startups.jsonl"))?;
    let abilities = load_ability_ratings(format!("{dir}/abilities.tsv"))?;

    let report = validate_corpus(&occupations, &startups, Some(&abilities), Some(&zones));
    println!("{}", serde_json::to_string_pretty(&report)?);

    for occ in occupations.iter().take(3) {
        let zone = occ.job_zone.map_or("-".to_string(), |z| z.to_string());
        println!("{}  zone {zone}  {}", occ.soc_code, occ.title);
    }
    Ok(())
}
