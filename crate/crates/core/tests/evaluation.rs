mod common;

use std::collections::HashSet;

use groupdiff::evaluation::{
    cumulative_rs_curve, evaluate, mean_rs, ranking_score, split, sweep, SweepFamily, Weighting,
};
use groupdiff::recommend::{BlendNormalization, ScoreVector};
use groupdiff::{Algorithm, CoupledDataset, NodeId, Result};
use proptest::prelude::*;
use rand::Rng;

fn constant(train: &CoupledDataset, user: NodeId) -> Result<ScoreVector> {
    let mut sv = Algorithm::Md.score(train, user)?;
    sv.scores.iter_mut().for_each(|s| *s = 1.0);
    Ok(sv)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn split_partitions_the_edges(seed in any::<u64>(), fraction in 0.05f64..0.95) {
        let mut rng = common::rng(seed);
        let ds = common::random_coupled(&mut rng, 20, 25, 4, 0.2, 0.15);
        let sp = split(&ds, fraction, seed).unwrap();
        let all: HashSet<_> = ds.user_object().edges().collect();
        let train: HashSet<_> = sp.train.user_object().edges().collect();
        let probe: HashSet<_> = sp.probe.iter().map(|p| (p.user, p.object)).collect();
        prop_assert_eq!(probe.len(), sp.probe.len());
        prop_assert!(train.is_disjoint(&probe));
        prop_assert_eq!(train.union(&probe).cloned().collect::<HashSet<_>>(), all.clone());
        prop_assert_eq!(train.len(), (fraction * all.len() as f64).round() as usize);
        prop_assert_eq!(sp.train.user_group(), ds.user_group());
        prop_assert!(sp.probe.windows(2).all(|w| (w[0].user, w[0].object) < (w[1].user, w[1].object)));
        for p in &sp.probe {
            prop_assert_eq!(p.scorable, sp.train.user_object().right_degree(p.object.index()) > 0);
        }
    }

    #[test]
    fn ranking_score_bounds_and_monotonicity(
        scores in prop::collection::vec(0u8..6, 2..40),
        collected_mask in any::<u64>(),
        pick in any::<prop::sample::Index>(),
    ) {
        let n = scores.len();
        let collected: Vec<bool> = (0..n).map(|i| collected_mask >> (i % 64) & 1 == 1).collect();
        let free: Vec<usize> = (0..n).filter(|&i| !collected[i]).collect();
        prop_assume!(!free.is_empty());
        let probe = free[pick.index(free.len())];
        let mut sv = ScoreVector {
            target: NodeId(0),
            scores: scores.iter().map(|&s| s as f64).collect(),
            collected,
        };
        let before = ranking_score(&sv, NodeId::from(probe)).unwrap().value;
        prop_assert!(before > 0.0 && before <= 1.0);
        sv.scores[probe] += 0.5;
        let after = ranking_score(&sv, NodeId::from(probe)).unwrap().value;
        prop_assert!(after <= before);
    }
}

#[test]
fn worked_example_is_exact() {
    let mut sv = ScoreVector { target: NodeId(0), scores: vec![0.0; 1003], collected: vec![false; 1003] };
    for c in 1000..1003 {
        sv.collected[c] = true;
        sv.scores[c] = 1e9;
    }
    for (i, s) in sv.scores.iter_mut().take(1000).enumerate() {
        *s = (1000 - i) as f64;
    }
    assert_eq!(ranking_score(&sv, NodeId(29)).unwrap().value, 0.03);
    assert!(ranking_score(&sv, NodeId(1001)).is_err());
}

#[test]
fn constant_scorer_sits_at_the_middle() {
    let mut rng = common::rng(5);
    let ds = common::random_coupled(&mut rng, 60, 80, 6, 0.1, 0.1);
    let sp = split(&ds, 0.8, 1).unwrap();
    let res = evaluate(&constant, &sp).unwrap();
    for r in &res.links {
        let free = sp.train.user_object().right_count() - sp.train.user_object().left_degree(r.user.index());
        assert_eq!(r.value, (free as f64 + 1.0) / 2.0 / free as f64);
    }
}

#[test]
fn random_scorer_averages_one_half() {
    let mut rng = common::rng(6);
    let ds = common::random_coupled(&mut rng, 500, 400, 10, 0.15, 0.05);
    let sp = split(&ds, 0.6, 2).unwrap();
    let random = |train: &CoupledDataset, user: NodeId| -> Result<ScoreVector> {
        let mut sv = Algorithm::Md.score(train, user)?;
        let mut r = common::rng(user.index() as u64);
        sv.scores.iter_mut().for_each(|s| *s = r.random());
        Ok(sv)
    };
    let res = evaluate(&random, &sp).unwrap();
    assert!(res.links.len() >= 10_000, "{}", res.links.len());
    assert!((res.mean() - 0.5).abs() < 0.05, "{}", res.mean());
}

#[test]
fn evaluation_is_deterministic_and_hdh_one_is_md() {
    let mut rng = common::rng(7);
    let ds = common::random_coupled(&mut rng, 80, 60, 8, 0.12, 0.1);
    let sp = split(&ds, 0.9, 3).unwrap();
    let md = evaluate(&Algorithm::Md, &sp).unwrap();
    assert_eq!(md, evaluate(&Algorithm::Md, &split(&ds, 0.9, 3).unwrap()).unwrap());
    assert_eq!(md, evaluate(&Algorithm::Hdh { lambda: 1.0 }, &sp).unwrap());
    let curve = cumulative_rs_curve(&md.links, &sp.train, Weighting::Link).unwrap();
    assert_eq!(curve.last().unwrap().cumulative_rs, mean_rs(&md.links));
    assert_eq!(curve.last().unwrap().n, md.links.len());
    assert!(curve.windows(2).all(|w| w[0].degree < w[1].degree && w[0].n <= w[1].n));
    let by_user = cumulative_rs_curve(&md.links, &sp.train, Weighting::User).unwrap();
    let users: HashSet<_> = md.links.iter().map(|r| r.user).collect();
    assert_eq!(by_user.last().unwrap().n, users.len());
}

#[test]
fn sweep_shares_splits_and_reports_spread() {
    let mut rng = common::rng(8);
    let ds = common::random_coupled(&mut rng, 70, 50, 6, 0.12, 0.1);
    let family = SweepFamily::BlendBeta { lambda: 0.4, normalization: BlendNormalization::UnitSum };
    let res = sweep(family, &ds, &[0.0, 1.0, 3.0], 5, 100, 0.9).unwrap();
    let hdh = sweep(SweepFamily::HdhLambda, &ds, &[0.4], 5, 100, 0.9).unwrap();
    assert_eq!(res.rows[0].mean_rs, hdh.rows[0].mean_rs);
    assert_eq!(res.rows[0].stddev_rs, hdh.rows[0].stddev_rs);
    assert!(res.rows.iter().all(|r| r.n_splits == 5 && r.stddev_rs >= 0.0));
    let best = res.rows.iter().map(|r| r.mean_rs).fold(f64::INFINITY, f64::min);
    assert_eq!(res.rows.iter().find(|r| r.mean_rs == best).unwrap().parameter, res.argmin);
    let one = sweep(SweepFamily::HdhLambda, &ds, &[0.4], 1, 100, 0.9).unwrap();
    assert_eq!(one.rows[0].stddev_rs, 0.0);
}
