//! Offline evaluation: random train/probe splits of the user–object links,
//! ranking scores of held-out objects, degree-cohort curves, and parameter
//! sweeps over repeated splits.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, CoupledDataset, NodeId};
use crate::recommend::{Algorithm, BlendNormalization, ScoreVector};

/// Anything that scores all objects for a target user on training data.
pub trait Recommender: Sync {
    fn score(&self, train: &CoupledDataset, target: NodeId) -> Result<ScoreVector>;
}

impl Recommender for Algorithm {
    fn score(&self, train: &CoupledDataset, target: NodeId) -> Result<ScoreVector> {
        Algorithm::score(self, train, target)
    }
}

impl<F> Recommender for F
where
    F: Fn(&CoupledDataset, NodeId) -> Result<ScoreVector> + Sync,
{
    fn score(&self, train: &CoupledDataset, target: NodeId) -> Result<ScoreVector> {
        self(train, target)
    }
}

/// A held-out user–object link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProbeLink {
    pub user: NodeId,
    pub object: NodeId,
    /// `false` when the object has no training links and so cannot be ranked
    /// above the tie floor by any diffusion or CF method.
    pub scorable: bool,
}

#[derive(Debug, Clone)]
pub struct SplitPair {
    pub train: CoupledDataset,
    /// Sorted by (user, object).
    pub probe: Vec<ProbeLink>,
    pub fraction: f64,
    pub seed: u64,
}

impl SplitPair {
    pub fn unscorable_count(&self) -> usize {
        self.probe.iter().filter(|p| !p.scorable).count()
    }
}

/// Randomly partitions the user–object links so that `round(fraction · |E|)`
/// land in training. The user–group graph is copied unchanged.
pub fn split(dataset: &CoupledDataset, fraction: f64, seed: u64) -> Result<SplitPair> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidArgument(format!("split fraction must lie in (0, 1), got {fraction}")));
    }
    let uo = dataset.user_object();
    if uo.edge_count() == 0 {
        return Err(Error::InvalidArgument("dataset has no user-object links to split".into()));
    }
    let mut edges: Vec<(NodeId, NodeId)> = uo.edges().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    edges.shuffle(&mut rng);
    let n_train = (fraction * edges.len() as f64).round() as usize;
    let (train_edges, probe_edges) = edges.split_at(n_train);
    let train_graph = BipartiteGraph::from_edges(uo.left_count(), uo.right_count(), train_edges.iter().copied())?;
    let mut probe: Vec<ProbeLink> = probe_edges
        .iter()
        .map(|&(user, object)| ProbeLink { user, object, scorable: train_graph.right_degree(object.index()) > 0 })
        .collect();
    probe.sort_unstable_by_key(|p| (p.user, p.object));
    Ok(SplitPair { train: dataset.with_user_object(train_graph)?, probe, fraction, seed })
}

/// Relative position of a held-out object among the target's uncollected
/// objects; lower is better.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankingScore {
    pub user: NodeId,
    pub object: NodeId,
    pub value: f64,
}

/// Mid-rank of `probe_object` among uncollected objects divided by their
/// number: `(#greater + (#equal + 1) / 2) / #uncollected`, where `#equal`
/// includes the probe object itself.
pub fn ranking_score(scores: &ScoreVector, probe_object: NodeId) -> Result<RankingScore> {
    let p = probe_object.index();
    if p >= scores.len() {
        return Err(Error::Index { side: crate::graph::Side::Right, index: p, count: scores.len() });
    }
    if scores.collected[p] {
        return Err(Error::Protocol(format!(
            "probe object {probe_object} is in the training collection of user {}",
            scores.target
        )));
    }
    let s = scores.scores[p];
    let (mut greater, mut equal, mut total) = (0usize, 0usize, 0usize);
    for (&v, &c) in scores.scores.iter().zip(&scores.collected) {
        if c {
            continue;
        }
        total += 1;
        if v > s {
            greater += 1;
        } else if v == s {
            equal += 1;
        }
    }
    let rank = greater as f64 + (equal as f64 + 1.0) / 2.0;
    Ok(RankingScore { user: scores.target, object: probe_object, value: rank / total as f64 })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationResult {
    /// One entry per scorable probe link, ordered by (user, object).
    pub links: Vec<RankingScore>,
    pub unscorable: usize,
}

impl EvaluationResult {
    /// `⟨RS⟩` averaged over probe links.
    pub fn mean(&self) -> f64 {
        mean_rs(&self.links)
    }
}

/// Plain mean of ranking-score values, summed in slice order.
pub fn mean_rs(results: &[RankingScore]) -> f64 {
    let sum: f64 = results.iter().map(|r| r.value).sum();
    sum / results.len() as f64
}

/// Scores every probe user once and ranks each of their scorable probe objects.
pub fn evaluate<R: Recommender + ?Sized>(recommender: &R, split: &SplitPair) -> Result<EvaluationResult> {
    let mut by_user: Vec<(NodeId, Vec<NodeId>)> = Vec::new();
    let mut unscorable = 0;
    for p in &split.probe {
        if !p.scorable {
            unscorable += 1;
            continue;
        }
        match by_user.last_mut() {
            Some((u, objs)) if *u == p.user => objs.push(p.object),
            _ => by_user.push((p.user, vec![p.object])),
        }
    }
    let per_user: Vec<Vec<RankingScore>> = by_user
        .par_iter()
        .map(|(user, objects)| {
            let scores = recommender.score(&split.train, *user)?;
            objects.iter().map(|&o| ranking_score(&scores, o)).collect()
        })
        .collect::<Result<_>>()?;
    Ok(EvaluationResult { links: per_user.into_iter().flatten().collect(), unscorable })
}

/// How ranking scores enter a cohort average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    /// Every probe link counts once.
    #[default]
    Link,
    /// Each user's links are averaged first; users count once.
    User,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CumulativePoint {
    pub degree: usize,
    pub cumulative_rs: f64,
    /// contributing links (or users, under [`Weighting::User`])
    pub n: usize,
}

/// For each distinct training degree `d`, the mean ranking score over users
/// with `k^(o) ≤ d`. Each point re-sums in result order, so the last point
/// equals [`mean_rs`] of the whole slice exactly (link weighting).
pub fn cumulative_rs_curve(
    results: &[RankingScore],
    train: &CoupledDataset,
    weighting: Weighting,
) -> Result<Vec<CumulativePoint>> {
    if results.is_empty() {
        return Err(Error::InvalidArgument("no ranking scores to aggregate".into()));
    }
    let uo = train.user_object();
    let samples: Vec<(usize, f64)> = match weighting {
        Weighting::Link => results.iter().map(|r| (uo.left_degree(r.user.index()), r.value)).collect(),
        Weighting::User => {
            let mut per_user: std::collections::BTreeMap<NodeId, (f64, usize)> = Default::default();
            for r in results {
                let e = per_user.entry(r.user).or_default();
                e.0 += r.value;
                e.1 += 1;
            }
            per_user
                .into_iter()
                .map(|(u, (sum, n))| (uo.left_degree(u.index()), sum / n as f64))
                .collect()
        }
    };
    let mut degrees: Vec<usize> = samples.iter().map(|&(d, _)| d).collect();
    degrees.sort_unstable();
    degrees.dedup();
    Ok(degrees
        .into_iter()
        .map(|d| {
            let (sum, n) = samples
                .iter()
                .filter(|&&(k, _)| k <= d)
                .fold((0.0, 0usize), |(s, n), &(_, v)| (s + v, n + 1));
            CumulativePoint { degree: d, cumulative_rs: sum / n as f64, n }
        })
        .collect())
}

/// Mean ranking score of probe links whose user has training degree ≤ `max_degree`.
pub fn cohort_mean(results: &[RankingScore], train: &CoupledDataset, max_degree: usize) -> Option<f64> {
    let uo = train.user_object();
    let (sum, n) = results
        .iter()
        .filter(|r| uo.left_degree(r.user.index()) <= max_degree)
        .fold((0.0, 0usize), |(s, n), r| (s + r.value, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Which algorithm parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SweepFamily {
    /// HDH with λ from the grid.
    HdhLambda,
    /// SD+HDH blend with β from the grid and a fixed HDH λ.
    BlendBeta { lambda: f64, normalization: BlendNormalization },
}

impl SweepFamily {
    pub fn algorithm(&self, parameter: f64) -> Result<Algorithm> {
        let algo = match *self {
            SweepFamily::HdhLambda => Algorithm::Hdh { lambda: parameter },
            SweepFamily::BlendBeta { lambda, normalization } => {
                Algorithm::Blend { beta: parameter, lambda, normalization }
            }
        };
        algo.validate()?;
        Ok(algo)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub parameter: f64,
    pub mean_rs: f64,
    /// population standard deviation of per-split ⟨RS⟩
    pub stddev_rs: f64,
    pub n_splits: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// Grid value with the lowest mean ⟨RS⟩ (first one on ties).
    pub argmin: f64,
}

/// Evaluates every grid value on `n_splits` splits seeded
/// `base_seed, base_seed + 1, ...`. All grid values share the same splits.
pub fn sweep(
    family: SweepFamily,
    dataset: &CoupledDataset,
    grid: &[f64],
    n_splits: usize,
    base_seed: u64,
    fraction: f64,
) -> Result<SweepResult> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("parameter grid is empty".into()));
    }
    if n_splits == 0 {
        return Err(Error::InvalidArgument("n_splits must be at least 1".into()));
    }
    let algorithms: Vec<Algorithm> = grid.iter().map(|&p| family.algorithm(p)).collect::<Result<_>>()?;
    let splits: Vec<SplitPair> = (0..n_splits as u64)
        .map(|s| split(dataset, fraction, base_seed.wrapping_add(s)))
        .collect::<Result<_>>()?;
    let cells: Vec<(usize, usize)> = (0..grid.len()).flat_map(|p| (0..n_splits).map(move |s| (p, s))).collect();
    let means: Vec<f64> = cells
        .par_iter()
        .map(|&(p, s)| evaluate(&algorithms[p], &splits[s]).map(|r| r.mean()))
        .collect::<Result<_>>()?;
    let rows: Vec<SweepRow> = grid
        .iter()
        .enumerate()
        .map(|(p, &parameter)| {
            let vals = &means[p * n_splits..(p + 1) * n_splits];
            let (mean_rs, stddev_rs) = mean_std(vals);
            SweepRow { parameter, mean_rs, stddev_rs, n_splits }
        })
        .collect();
    let argmin = rows
        .iter()
        .fold(None::<&SweepRow>, |best, r| match best {
            Some(b) if b.mean_rs <= r.mean_rs => Some(b),
            _ => Some(r),
        })
        .map(|r| r.parameter)
        .unwrap_or(grid[0]);
    Ok(SweepResult { rows, argmin })
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recommend::md_scores;

    fn toy() -> CoupledDataset {
        let uo = BipartiteGraph::from_edges(
            3,
            4,
            [(0, 0), (0, 1), (1, 0), (1, 2), (2, 1), (2, 2), (2, 3)].map(|(u, o)| (NodeId(u), NodeId(o))),
        )
        .unwrap();
        let ug = BipartiteGraph::from_edges(3, 2, [(0, 0), (1, 0), (1, 1), (2, 1)].map(|(u, c)| (NodeId(u), NodeId(c))))
            .unwrap();
        CoupledDataset::unlabeled(uo, ug).unwrap()
    }

    fn chain(users: usize, objects: usize, edges: usize) -> CoupledDataset {
        let pairs = (0..edges).map(|e| (NodeId::from(e % users), NodeId::from((e / users + e) % objects)));
        let uo = BipartiteGraph::from_edges(users, objects, pairs).unwrap();
        assert_eq!(uo.edge_count(), edges);
        CoupledDataset::unlabeled(uo, BipartiteGraph::empty(users, 1)).unwrap()
    }

    #[test]
    fn split_sizes() {
        let ds = chain(50, 40, 1000);
        let sp = split(&ds, 0.8, 3).unwrap();
        assert_eq!(sp.train.user_object().edge_count(), 800);
        assert_eq!(sp.probe.len(), 200);
        let five = chain(5, 5, 5);
        let sp = split(&five, 0.8, 3).unwrap();
        assert_eq!((sp.train.user_object().edge_count(), sp.probe.len()), (4, 1));
    }

    #[test]
    fn split_is_deterministic_and_keeps_groups() {
        let ds = toy();
        let a = split(&ds, 0.8, 11).unwrap();
        let b = split(&ds, 0.8, 11).unwrap();
        assert_eq!(a.train, b.train);
        assert_eq!(a.probe, b.probe);
        assert_eq!(a.train.user_group(), ds.user_group());
    }

    #[test]
    fn split_rejects_bad_fraction() {
        let ds = toy();
        for f in [0.0, 1.0, -0.2, 1.5, f64::NAN] {
            assert!(matches!(split(&ds, f, 1), Err(Error::InvalidArgument(_))), "{f}");
        }
        let empty = CoupledDataset::unlabeled(BipartiteGraph::empty(2, 2), BipartiteGraph::empty(2, 1)).unwrap();
        assert!(split(&empty, 0.8, 1).is_err());
    }

    fn vector(scores: Vec<f64>, collected: Vec<bool>) -> ScoreVector {
        ScoreVector { target: NodeId(0), scores, collected }
    }

    #[test]
    fn ranking_score_thirtieth_of_thousand() {
        let scores: Vec<f64> = (0..1000).map(|i| 1000.0 - i as f64).collect();
        let rs = ranking_score(&vector(scores, vec![false; 1000]), NodeId(29)).unwrap();
        assert_eq!(rs.value, 0.03);
    }

    #[test]
    fn ranking_score_full_tie_is_mid_rank() {
        let n = 7;
        let rs = ranking_score(&vector(vec![0.5; n], vec![false; n]), NodeId(3)).unwrap();
        assert_eq!(rs.value, (n as f64 + 1.0) / (2.0 * n as f64));
    }

    #[test]
    fn ranking_score_unique_max() {
        let sv = vector(vec![0.1, 9.0, 0.2, 0.3, 5.0], vec![false, true, false, false, false]);
        assert_eq!(ranking_score(&sv, NodeId(4)).unwrap().value, 0.25);
        assert!(matches!(ranking_score(&sv, NodeId(1)), Err(Error::Protocol(_))));
    }

    #[test]
    fn md_toy_probe_link() {
        // the toy itself is the training set; (u0, o2) is an uncollected probe
        let ds = toy();
        let sp = SplitPair {
            train: ds.clone(),
            probe: vec![ProbeLink { user: NodeId(0), object: NodeId(2), scorable: true }],
            fraction: 0.8,
            seed: 0,
        };
        let res = evaluate(&Algorithm::Md, &sp).unwrap();
        assert_eq!(res.links.len(), 1);
        assert_eq!(res.links[0].value, 0.5);
        let direct = ranking_score(&md_scores(&ds, NodeId(0)).unwrap(), NodeId(2)).unwrap();
        assert_eq!(res.links[0], direct);
    }

    #[test]
    fn perfect_oracle_scores_one_over_uncollected() {
        let ds = chain(20, 30, 200);
        let sp = split(&ds, 0.8, 5).unwrap();
        let probe = sp.probe.clone();
        let oracle = move |train: &CoupledDataset, target: NodeId| -> Result<ScoreVector> {
            let mut sv = ScoreVector::zeros(train, target);
            for p in probe.iter().filter(|p| p.user == target) {
                sv.scores[p.object.index()] = 1.0;
            }
            Ok(sv)
        };
        let res = evaluate(&oracle, &sp).unwrap();
        for r in &res.links {
            let n_probe = sp.probe.iter().filter(|p| p.user == r.user).count() as f64;
            let uncollected = (30 - sp.train.user_object().left_degree(r.user.index())) as f64;
            // all of the user's probe objects tie at the top
            assert_eq!(r.value, ((n_probe + 1.0) / 2.0) / uncollected);
        }
    }

    #[test]
    fn cumulative_curve_end_is_overall_mean() {
        let ds = chain(20, 30, 200);
        let sp = split(&ds, 0.8, 5).unwrap();
        let res = evaluate(&Algorithm::Md, &sp).unwrap();
        let curve = cumulative_rs_curve(&res.links, &sp.train, Weighting::Link).unwrap();
        let last = curve.last().unwrap();
        assert_eq!(last.cumulative_rs, res.mean());
        assert_eq!(last.n, res.links.len());
        assert!(curve.windows(2).all(|w| w[0].degree < w[1].degree && w[0].n <= w[1].n));
        assert!(curve.iter().all(|p| p.n >= 1));
        let by_user = cumulative_rs_curve(&res.links, &sp.train, Weighting::User).unwrap();
        assert_eq!(by_user.last().unwrap().degree, last.degree);
        assert!(cumulative_rs_curve(&[], &sp.train, Weighting::Link).is_err());
    }

    #[test]
    fn cumulative_curve_single_user() {
        let ds = toy();
        let links = vec![
            RankingScore { user: NodeId(1), object: NodeId(1), value: 0.2 },
            RankingScore { user: NodeId(1), object: NodeId(3), value: 0.6 },
        ];
        let curve = cumulative_rs_curve(&links, &ds, Weighting::Link).unwrap();
        assert_eq!(curve.len(), 1);
        assert_eq!(curve[0].degree, 2);
        assert!((curve[0].cumulative_rs - 0.4).abs() < 1e-15);
    }

    #[test]
    fn sweep_single_split_has_zero_stddev() {
        let ds = chain(20, 30, 200);
        let res = sweep(SweepFamily::HdhLambda, &ds, &[0.2, 1.0], 1, 7, 0.8).unwrap();
        assert_eq!(res.rows.len(), 2);
        assert!(res.rows.iter().all(|r| r.stddev_rs == 0.0 && r.n_splits == 1));
        let md = evaluate(&Algorithm::Md, &split(&ds, 0.8, 7).unwrap()).unwrap();
        assert_eq!(res.rows[1].mean_rs, md.mean());
        assert!(sweep(SweepFamily::HdhLambda, &ds, &[], 1, 7, 0.8).is_err());
        assert!(sweep(SweepFamily::HdhLambda, &ds, &[0.5], 0, 7, 0.8).is_err());
        assert!(sweep(SweepFamily::HdhLambda, &ds, &[1.5], 1, 7, 0.8).is_err());
    }

    #[test]
    fn mean_std_population() {
        assert_eq!(mean_std(&[1.0, 3.0]), (2.0, 1.0));
        assert_eq!(mean_std(&[4.0]), (4.0, 0.0));
    }
}
