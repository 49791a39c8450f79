use aise::analytics::{
    assign_regions, crucial_skill_frequency, kendall_tau_b, nearest_rank, pearson,
    rank_occupations, BoxStats, CSplit, Direction, Region,
};
use aise::corpus::{SkillRating, SkillRatings};
use aise::exposure::{ExposureScores, IndexKind};
use proptest::prelude::*;

fn tied_values(n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec((0i32..6).prop_map(f64::from), n)
}

fn paired(n: std::ops::Range<usize>) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    n.prop_flat_map(|len| {
        (
            proptest::collection::vec(-100.0f64..100.0, len),
            proptest::collection::vec(-100.0f64..100.0, len),
        )
    })
}

fn scores(kind: IndexKind, values: &[f64]) -> ExposureScores {
    ExposureScores::from_scores(
        kind,
        values.iter().enumerate().map(|(i, v)| (format!("{i:03}"), *v)),
    )
}

proptest! {
    #[test]
    fn tau_survives_increasing_transforms(
        x in tied_values(2..40),
        seed in tied_values(40..41),
        shift in -5.0f64..5.0,
        scale in 0.1f64..10.0,
    ) {
        let y: Vec<f64> = seed[..x.len()].to_vec();
        let Ok(t) = kendall_tau_b(&x, &y) else { return Ok(()) };
        prop_assert!((-1.0..=1.0).contains(&t));
        let fx: Vec<f64> = x.iter().map(|v| (v * scale + shift).exp()).collect();
        let gy: Vec<f64> = y.iter().map(|v| v.powi(3) - 2.0).collect();
        prop_assert_eq!(kendall_tau_b(&fx, &gy).unwrap(), t);
        prop_assert_eq!(kendall_tau_b(&y, &x).unwrap(), t);
    }

    #[test]
    fn pearson_is_affine_invariant(
        (x, y) in paired(3..60),
        a in 0.1f64..10.0,
        b in -50.0f64..50.0,
        flip in any::<bool>(),
    ) {
        let Ok(r) = pearson(&x, &y) else { return Ok(()) };
        prop_assert!((-1.0..=1.0).contains(&r));
        let sign = if flip { -1.0 } else { 1.0 };
        let ax: Vec<f64> = x.iter().map(|v| sign * a * v + b).collect();
        let r2 = pearson(&ax, &y).unwrap();
        prop_assert!((r2 - sign * r).abs() < 1e-12, "{r} vs {r2}");
    }

    #[test]
    fn regions_are_balanced_and_ordered(
        aioe in proptest::collection::vec(0.0f64..10.0, 3..80),
        aise in proptest::collection::vec(tied_values(1..2).prop_map(|v| v[0] / 5.0), 80),
        extra in 0usize..5,
    ) {
        let n = aioe.len();
        let aioe_scores = scores(IndexKind::Aioe, &aioe);
        // a few AISE-only occupations beyond the AIOE range
        let aise_scores = scores(IndexKind::Aise, &aise[..(n + extra).min(80)]);
        let r = assign_regions(&aioe_scores, &aise_scores).unwrap();

        let sizes: Vec<usize> = [Region::A, Region::B, Region::C].iter().map(|g| r.members(*g).len()).collect();
        prop_assert_eq!(sizes.iter().sum::<usize>(), n);
        prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        prop_assert_eq!(r.members(Region::NotAvailable).len(), (n + extra).min(80) - n);

        let max_of = |g: Region| r.members(g).iter().map(|c| aioe_scores.get(c).unwrap()).fold(f64::NEG_INFINITY, f64::max);
        let min_of = |g: Region| r.members(g).iter().map(|c| aioe_scores.get(c).unwrap()).fold(f64::INFINITY, f64::min);
        prop_assert!(max_of(Region::A) <= min_of(Region::B));
        prop_assert!(max_of(Region::B) <= min_of(Region::C));

        let c = r.members(Region::C).len();
        let splits: Vec<usize> = CSplit::ALL.iter().map(|s| r.split_members(*s).len()).collect();
        prop_assert_eq!(splits.iter().sum::<usize>(), c);
        prop_assert!(splits[0] <= c / 4 + 1 && splits[2] <= c / 4 + 1);
        prop_assert!(splits[2] + 1 >= c / 4 && splits[0] + 1 >= c / 4);

        // relabeling codes in reverse does not change which scores land where
        let rev = |v: &[f64]| ExposureScores::from_scores(
            IndexKind::Aioe,
            v.iter().enumerate().map(|(i, s)| (format!("{:03}", 999 - i), *s)),
        );
        let r2 = assign_regions(&rev(&aioe), &rev(&aise[..(n + extra).min(80)])).unwrap();
        for g in [Region::A, Region::B, Region::C] {
            let mut a: Vec<f64> = r.members(g).iter().map(|c| aioe_scores.get(c).unwrap()).collect();
            let mut b: Vec<f64> = r2.members(g).iter().map(|c| aioe[999 - c.parse::<usize>().unwrap()]).collect();
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn skill_frequency_is_a_share_and_falls_with_threshold(
        values in proptest::collection::vec(1.0f64..=5.0, 4..40),
        t1 in 1.0f64..5.0,
        dt in 0.0f64..2.0,
    ) {
        let ratings = SkillRatings::from_ratings(values.iter().enumerate().map(|(i, v)| SkillRating {
            soc_code: format!("o{}", i / 4),
            skill_id: format!("S{}", i % 4),
            skill_name: String::new(),
            importance: *v,
        }));
        let members: Vec<String> = (0..values.len().div_ceil(4)).map(|i| format!("o{i}")).collect();
        let lo = crucial_skill_frequency(members.iter().map(String::as_str), &ratings, t1).unwrap();
        let hi = crucial_skill_frequency(members.iter().map(String::as_str), &ratings, t1 + dt).unwrap();
        for (skill, f) in &lo {
            prop_assert!((0.0..=1.0).contains(f));
            prop_assert!(hi[skill] <= *f);
        }
    }

    #[test]
    fn top_and_bottom_lists_are_disjoint(values in proptest::collection::vec(0.0f64..1.0, 0..40), k in 1usize..15) {
        let s = scores(IndexKind::Aise, &values);
        let top = rank_occupations(&s, None, k, Direction::Top);
        let bottom = rank_occupations(&s, None, k, Direction::Bottom);
        prop_assert_eq!(top.len(), k.min(values.len()));
        if 2 * k <= values.len() {
            prop_assert!(top.iter().all(|t| bottom.iter().all(|b| b.soc_code != t.soc_code)));
        }
        prop_assert!(top.windows(2).all(|w| w[0].score >= w[1].score));
        prop_assert!(bottom.windows(2).all(|w| w[0].score <= w[1].score));
    }

    #[test]
    fn box_stats_are_ordered(values in proptest::collection::vec(-10.0f64..10.0, 1..50)) {
        let points: Vec<(String, f64)> = values.iter().enumerate().map(|(i, v)| (i.to_string(), *v)).collect();
        let b = BoxStats::from_points(&points).unwrap();
        prop_assert!(b.min <= b.whisker_low && b.whisker_low <= b.q1);
        prop_assert!(b.q1 <= b.median && b.median <= b.q3);
        prop_assert!(b.q3 <= b.whisker_high && b.whisker_high <= b.max);
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);
        prop_assert!(sorted.contains(&nearest_rank(&sorted, 0.37)));
    }
}
