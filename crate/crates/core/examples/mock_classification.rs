//! Classify the toy corpus with the offline mock backend, twice. The second
//! pass is served from the cache.
//!
//!     cargo run --example mock_classification

use aise::corpus::{filter_by_tags, load_occupations, load_startups, TagFilter};
use aise::gateway::{
    run_classification, Classifier, ClassifierConfig, MockBackend, PromptVariant, VerdictCache,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/toy");
    let occupations = load_occupations(format!("{dir}/occupations.tsv"))?;
    let startups = filter_by_tags(&load_startups(format!("{dir}/startups.jsonl"))?, &TagFilter::ai());

    let backend = MockBackend::default();
    let cache = VerdictCache::in_memory();
    for pass in 1..=2 {
        let classifier = Classifier::new(&backend, &cache, ClassifierConfig::default());
        let matrix = run_classification(&classifier, PromptVariant::ReplaceDetailed, &startups, &occupations, 4)?;
        let stats = classifier.stats();
        println!(
            "pass {pass}: coverage {:.2}, {} cache hits, {} backend requests",
            matrix.coverage(),
            stats.cache_hits,
            stats.backend_requests
        );
        if pass == 2 {
            for (i, code) in matrix.occupations().iter().enumerate() {
                let row: String = matrix.row(i).iter().map(|a| a.code()).collect();
                println!("  {code} {row}");
            }
        }
    }
    println!("mock calls in total: {}", backend.calls());
    Ok(())
}
