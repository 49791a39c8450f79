//! Ability-based exposure from the relatedness matrix and ability ratings.
//!
//!     cargo run --example aioe_index

use aise::corpus::{load_ability_ratings, load_relatedness_matrix};
use aise::exposure::{ability_exposure, compute_aioe};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/aioe_two_ability");
    let a = ability_exposure(&load_relatedness_matrix(format!("{dir}/relatedness.csv"))?);
    let ratings = load_ability_ratings(format!("{dir}/abilities.tsv"))?;
    let scores = compute_aioe(&a, &ratings)?;
    // Two abilities carry weight: (2*35 + 4*1) / 36.
    for (code, score) in scores.iter() {
        println!("{code} {score} (74/36 = {})", 74.0 / 36.0);
    }

    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/toy");
    let a = ability_exposure(&load_relatedness_matrix(format!("{dir}/relatedness.csv"))?);
    let scores = compute_aioe(&a, &load_ability_ratings(format!("{dir}/abilities.tsv"))?)?;
    for (code, score) in scores.iter() {
        println!("{code} {score:.4}");
    }
    Ok(())
}
