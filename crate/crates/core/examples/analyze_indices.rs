//! Correlations, tertile regions and rankings on a small hand-made pair of
//! score sets.
//!
//!     cargo run --example analyze_indices

use aise::analytics::{
    assign_regions, compare_indices, kendall_tau_b, pearson, rank_occupations, CSplit, Direction,
    Region,
};
use aise::exposure::{ExposureScores, IndexKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("pearson  {:.6}", pearson(&[1.0, 2.0, 3.0], &[1.0, 2.0, 4.0])?);
    println!("tau-b    {:.6}", kendall_tau_b(&[1.0, 1.0, 2.0, 3.0], &[1.0, 2.0, 2.0, 3.0])?);

    let codes: Vec<String> = (1..=12).map(|i| format!("00-00{i:02}.00")).collect();
    let aioe = ExposureScores::from_scores(
        IndexKind::Aioe,
        codes.iter().enumerate().map(|(i, c)| (c.clone(), i as f64)),
    );
    let aise = ExposureScores::from_scores(
        IndexKind::Aise,
        codes.iter().enumerate().map(|(i, c)| (c.clone(), ((i * 7) % 12) as f64 / 12.0)),
    );

    let report = compare_indices(&aise, &aioe)?;
    println!("n={} pearson={:?} tau-b={:?}", report.n_common, report.pearson, report.kendall_tau_b);

    let regions = assign_regions(&aioe, &aise)?;
    for r in [Region::A, Region::B, Region::C] {
        println!("{r}: {:?}", regions.members(r));
    }
    for s in CSplit::ALL {
        println!("{s}: {:?}", regions.split_members(s));
    }
    for r in rank_occupations(&aise, None, 3, Direction::Top) {
        println!("#{} {} {:.3}", r.rank, r.soc_code, r.score);
    }
    Ok(())
}
