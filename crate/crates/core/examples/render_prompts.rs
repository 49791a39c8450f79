//! Print the prompt each variant sends for one startup/occupation pair.
//!
//!     cargo run --example render_prompts

use std::collections::BTreeSet;

use aise::corpus::{Occupation, Startup};
use aise::gateway::{cache_key, render_prompt, PromptVariant};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let startup = Startup {
        startup_id: "s01".into(),
        name: "ClerkBot".into(),
        short_desc: "Automates office data entry and filing.".into(),
        long_desc: "ClerkBot automates office clerical work: data entry, filing records and weekly reports.".into(),
        year: Some(2023),
        tags: BTreeSet::from(["ai".to_string()]),
    };
    let occupation = Occupation {
        soc_code: "43-9061.00".into(),
        title: "Office Clerks, General".into(),
        description: "Perform duties too varied and diverse to be classified in any specific office clerical occupation.".into(),
        job_zone: None,
    };

    for variant in PromptVariant::ALL {
        let prompt = render_prompt(variant, &startup, &occupation)?;
        let key = cache_key(
            "llama3-8b",
            variant,
            variant.startup_description(&startup),
            &occupation.description,
        );
        println!("== {variant} (cache key {}...)", &key[..12]);
        println!("system: {}", prompt.system);
        println!("user:   {}\n", prompt.user);
    }
    Ok(())
}
