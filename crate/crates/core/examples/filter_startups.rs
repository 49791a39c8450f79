//! Select AI and robotics startups by exact tag match.
//!
//!     cargo run --example filter_startups

use aise::corpus::{filter_by_tags, load_startups, TagFilter};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/tag_sample/startups.jsonl");
    let startups = load_startups(path)?;

    for filter in [TagFilter::ai(), TagFilter::robotics()] {
        let picked = filter_by_tags(&startups, &filter);
        println!("{}: {} of {}", filter.name(), picked.len(), startups.len());
        for s in &picked {
            let tags: Vec<&str> = s.tags.iter().map(String::as_str).collect();
            println!("  {} {:?}", s.startup_id, tags);
        }
    }

    // "AI-powered marketing" is not one of the thirteen tags.
    let custom = TagFilter::new("marketing", ["AI-powered marketing"])?;
    println!("custom: {}", filter_by_tags(&startups, &custom).len());
    Ok(())
}
