//! Synthetic coupled user–object / user–group networks with planted tastes.
//!
//! Every user belongs to one taste cluster. Objects and groups are dealt
//! round-robin into clusters and carry power-law attachment weights
//! `w_r ∝ (r + 1)^(−1/(γ − 1))`, which yields a degree distribution with tail
//! exponent `γ`. A user's object picks come from its own cluster's pool with
//! probability `object_taste_strength` and from the whole catalogue
//! otherwise; group picks do the same with `group_taste_alignment`. So at
//! alignment 0 memberships carry no information about object choices.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, CoupledDataset, NodeId};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SynthConfig {
    pub n_users: usize,
    pub n_objects: usize,
    pub n_groups: usize,
    pub object_degree_exponent: f64,
    pub group_degree_exponent: f64,
    pub n_taste_clusters: usize,
    /// Probability that a group pick comes from the user's own cluster.
    pub group_taste_alignment: f64,
    /// Probability that an object pick comes from the user's own cluster.
    pub object_taste_strength: f64,
    /// Users' object degrees follow a truncated power law on `[min, max]`.
    pub user_degree_min: usize,
    pub user_degree_max: usize,
    pub user_degree_exponent: f64,
    /// Users' group counts follow a truncated power law on `[min, max]`.
    pub user_groups_min: usize,
    pub user_groups_max: usize,
    pub user_groups_exponent: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_users: 2000,
            n_objects: 1000,
            n_groups: 100,
            object_degree_exponent: 2.5,
            group_degree_exponent: 2.5,
            n_taste_clusters: 10,
            group_taste_alignment: 0.9,
            object_taste_strength: 0.8,
            user_degree_min: 1,
            user_degree_max: 60,
            user_degree_exponent: 1.8,
            user_groups_min: 1,
            user_groups_max: 6,
            user_groups_exponent: 2.0,
            seed: 42,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if self.n_users == 0 || self.n_objects == 0 || self.n_groups == 0 || self.n_taste_clusters == 0 {
            return bad("user, object, group and cluster counts must be at least 1".into());
        }
        if self.n_taste_clusters > self.n_groups || self.n_taste_clusters > self.n_objects {
            return bad(format!(
                "{} taste clusters need at least as many groups ({}) and objects ({})",
                self.n_taste_clusters, self.n_groups, self.n_objects
            ));
        }
        for (name, p) in [
            ("group_taste_alignment", self.group_taste_alignment),
            ("object_taste_strength", self.object_taste_strength),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} must lie in [0, 1], got {p}"));
            }
        }
        for (name, g) in [
            ("object_degree_exponent", self.object_degree_exponent),
            ("group_degree_exponent", self.group_degree_exponent),
        ] {
            if !(g > 1.0 && g.is_finite()) {
                return bad(format!("{name} must be > 1, got {g}"));
            }
        }
        for (name, e) in [
            ("user_degree_exponent", self.user_degree_exponent),
            ("user_groups_exponent", self.user_groups_exponent),
        ] {
            if !(e > 0.0 && e.is_finite()) {
                return bad(format!("{name} must be > 0, got {e}"));
            }
        }
        if self.user_degree_min == 0 || self.user_degree_min > self.user_degree_max {
            return bad("user degree range must satisfy 1 <= min <= max".into());
        }
        if self.user_groups_min == 0 || self.user_groups_min > self.user_groups_max {
            return bad("user group range must satisfy 1 <= min <= max".into());
        }
        Ok(())
    }
}

/// Draws an integer from `p(k) ∝ k^(−exponent)` on `[min, max]` by inverting
/// the continuous law on `[min, max + 1)`.
fn truncated_power_law<R: Rng>(rng: &mut R, min: usize, max: usize, exponent: f64) -> usize {
    let (lo, hi) = (min as f64, (max + 1) as f64);
    let u: f64 = rng.random();
    let x = if (exponent - 1.0).abs() < 1e-12 {
        lo * (hi / lo).powf(u)
    } else {
        let e = 1.0 - exponent;
        (lo.powf(e) + u * (hi.powf(e) - lo.powf(e))).powf(1.0 / e)
    };
    (x.floor() as usize).clamp(min, max)
}

/// Attachment weights for `count` items with tail exponent `gamma`, dealt into
/// `clusters` pools round-robin after a seeded shuffle of the ranks.
struct Catalogue {
    global: WeightedIndex<f64>,
    pools: Vec<(Vec<usize>, WeightedIndex<f64>)>,
}

impl Catalogue {
    fn new<R: Rng>(rng: &mut R, count: usize, clusters: usize, gamma: f64) -> Self {
        let mut weights: Vec<f64> = (0..count).map(|r| ((r + 1) as f64).powf(-1.0 / (gamma - 1.0))).collect();
        weights.shuffle(rng);
        let global = WeightedIndex::new(&weights).expect("positive weights");
        let pools = (0..clusters)
            .map(|c| {
                let items: Vec<usize> = (c..count).step_by(clusters).collect();
                let dist = WeightedIndex::new(items.iter().map(|&i| weights[i])).expect("nonempty pool");
                (items, dist)
            })
            .collect();
        Catalogue { global, pools }
    }

    /// Picks `k` distinct items, each from `cluster` with probability `affinity`.
    fn pick<R: Rng>(&self, rng: &mut R, cluster: usize, affinity: f64, k: usize, out: &mut Vec<usize>) {
        out.clear();
        let (items, local) = &self.pools[cluster];
        let mut attempts = 0usize;
        while out.len() < k {
            attempts += 1;
            let in_cluster = attempts < 64 * k && rng.random::<f64>() < affinity;
            let item = if in_cluster { items[local.sample(rng)] } else { self.global.sample(rng) };
            if !out.contains(&item) {
                out.push(item);
            }
        }
    }
}

/// Generates a coupled dataset. Deterministic for a given config.
pub fn synth_generate(config: &SynthConfig) -> Result<CoupledDataset> {
    config.validate()?;
    let c = config;
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let objects = Catalogue::new(&mut rng, c.n_objects, c.n_taste_clusters, c.object_degree_exponent);
    let groups = Catalogue::new(&mut rng, c.n_groups, c.n_taste_clusters, c.group_degree_exponent);

    let mut object_edges = Vec::new();
    let mut group_edges = Vec::new();
    let mut picks = Vec::new();
    for u in 0..c.n_users {
        let cluster = rng.random_range(0..c.n_taste_clusters);
        let max_k = c.user_degree_max.min(c.n_objects.div_ceil(2));
        let k = truncated_power_law(&mut rng, c.user_degree_min.min(max_k), max_k, c.user_degree_exponent);
        objects.pick(&mut rng, cluster, c.object_taste_strength, k, &mut picks);
        object_edges.extend(picks.iter().map(|&o| (NodeId::from(u), NodeId::from(o))));

        let max_g = c.user_groups_max.min(c.n_groups);
        let g = truncated_power_law(&mut rng, c.user_groups_min.min(max_g), max_g, c.user_groups_exponent);
        groups.pick(&mut rng, cluster, c.group_taste_alignment, g, &mut picks);
        group_edges.extend(picks.iter().map(|&g| (NodeId::from(u), NodeId::from(g))));
    }
    let uo = BipartiteGraph::from_edges(c.n_users, c.n_objects, object_edges)?;
    let ug = BipartiteGraph::from_edges(c.n_users, c.n_groups, group_edges)?;
    CoupledDataset::unlabeled(uo, ug)
}
