//! Recommendation scorers over a training [`CoupledDataset`].
//!
//! Every scorer maps `(train, target)` to a dense [`ScoreVector`] over all
//! objects. Collected objects keep whatever score the method gives them; they
//! are only removed when a list is extracted with [`recommend_top`] or when a
//! ranking score is computed.

mod blend;
mod cf;
mod diffusion;

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{CoupledDataset, NodeId, Side};

pub use blend::{blend_scores, BlendConfig, BlendNormalization};
pub use cf::{icf_scores, ucf_scores};
pub use diffusion::{hdh_scores, md_scores, sd_scores, sd_scores_with_leakage, SocialDiffusion};

/// Scores of every object for one target user.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    pub target: NodeId,
    pub scores: Vec<f64>,
    /// `true` for objects the target collected in the training data
    pub collected: Vec<bool>,
}

impl ScoreVector {
    pub(crate) fn zeros(train: &CoupledDataset, target: NodeId) -> Self {
        let n = train.object_count();
        let mut collected = vec![false; n];
        for &o in train.user_object().left_neighbors(target.index()) {
            collected[o.index()] = true;
        }
        ScoreVector { target, scores: vec![0.0; n], collected }
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn uncollected_count(&self) -> usize {
        self.collected.iter().filter(|&&c| !c).count()
    }

    pub fn total(&self) -> f64 {
        self.scores.iter().sum()
    }
}

pub(crate) fn check_target(train: &CoupledDataset, target: NodeId) -> Result<()> {
    train.user_object().degree(Side::Left, target).map(|_| ())
}

/// Uncollected objects by descending score, ties by ascending index,
/// truncated to `length`.
pub fn recommend_top(scores: &ScoreVector, length: usize) -> Vec<(NodeId, f64)> {
    let mut items: Vec<(NodeId, f64)> = scores
        .scores
        .iter()
        .enumerate()
        .filter(|&(i, _)| !scores.collected[i])
        .map(|(i, &s)| (NodeId::from(i), s))
        .collect();
    let order = |a: &(NodeId, f64), b: &(NodeId, f64)| -> Ordering {
        b.1.total_cmp(&a.1).then(a.0.cmp(&b.0))
    };
    if length < items.len() {
        if length == 0 {
            return Vec::new();
        }
        items.select_nth_unstable_by(length - 1, order);
        items.truncate(length);
    }
    items.sort_unstable_by(order);
    items
}

/// A scoring method with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Algorithm {
    Md,
    Hdh { lambda: f64 },
    Ucf,
    Icf,
    Sd,
    Blend { beta: f64, lambda: f64, normalization: BlendNormalization },
}

impl Algorithm {
    /// Resolves a method by name. `lambda` is used by `hdh` and `blend`,
    /// `beta` by `blend`.
    pub fn from_name(name: &str, lambda: f64, beta: f64) -> Result<Self> {
        let algo = match name.to_ascii_lowercase().as_str() {
            "md" => Algorithm::Md,
            "hdh" => Algorithm::Hdh { lambda },
            "ucf" => Algorithm::Ucf,
            "icf" => Algorithm::Icf,
            "sd" => Algorithm::Sd,
            "blend" | "sd+hdh" => Algorithm::Blend { beta, lambda, normalization: BlendNormalization::UnitSum },
            _ => return Err(Error::UnknownAlgorithm(name.to_owned())),
        };
        algo.validate()?;
        Ok(algo)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Md => "md",
            Algorithm::Hdh { .. } => "hdh",
            Algorithm::Ucf => "ucf",
            Algorithm::Icf => "icf",
            Algorithm::Sd => "sd",
            Algorithm::Blend { .. } => "blend",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Algorithm::Hdh { lambda } => diffusion::check_lambda(lambda),
            Algorithm::Blend { beta, lambda, .. } => {
                diffusion::check_lambda(lambda)?;
                blend::check_beta(beta)
            }
            _ => Ok(()),
        }
    }

    pub fn score(&self, train: &CoupledDataset, target: NodeId) -> Result<ScoreVector> {
        match *self {
            Algorithm::Md => md_scores(train, target),
            Algorithm::Hdh { lambda } => hdh_scores(train, target, lambda),
            Algorithm::Ucf => ucf_scores(train, target),
            Algorithm::Icf => icf_scores(train, target),
            Algorithm::Sd => sd_scores(train, target),
            Algorithm::Blend { beta, lambda, normalization } => {
                let config = BlendConfig::for_training(train, beta, lambda)?.with_normalization(normalization);
                blend_scores(train, target, &config)
            }
        }
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use crate::graph::{BipartiteGraph, CoupledDataset, NodeId};

    pub fn graph(users: usize, objects: usize, edges: &[(u32, u32)]) -> BipartiteGraph {
        BipartiteGraph::from_edges(users, objects, edges.iter().map(|&(u, o)| (NodeId(u), NodeId(o)))).unwrap()
    }

    /// u1={o1,o2}, u2={o1,o3}, u3={o2,o3,o4} (zero-based), groups c1={u1,u2}, c2={u2,u3}.
    pub fn toy() -> CoupledDataset {
        let uo = graph(3, 4, &[(0, 0), (0, 1), (1, 0), (1, 2), (2, 1), (2, 2), (2, 3)]);
        let ug = graph(3, 2, &[(0, 0), (1, 0), (1, 1), (2, 1)]);
        CoupledDataset::unlabeled(uo, ug).unwrap()
    }

    pub fn toy_without_groups() -> CoupledDataset {
        let ds = toy();
        CoupledDataset::unlabeled(ds.user_object().clone(), BipartiteGraph::empty(3, 2)).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn top_list_excludes_collected() {
        let ds = toy();
        let sv = md_scores(&ds, NodeId(0)).unwrap();
        let top = recommend_top(&sv, 2);
        assert_eq!(top.len(), 2);
        assert_eq!(top[0].0, NodeId(2));
        assert!((top[0].1 - 5.0 / 12.0).abs() < 1e-12);
        assert_eq!(top[1].0, NodeId(3));
        assert!((top[1].1 - 1.0 / 6.0).abs() < 1e-12);
        assert!(recommend_top(&sv, 0).is_empty());
        assert_eq!(recommend_top(&sv, 10).len(), 2);
    }

    #[test]
    fn zero_scores_fall_back_to_index_order() {
        let sv = ScoreVector { target: NodeId(0), scores: vec![0.0; 5], collected: vec![false, true, false, false, false] };
        let ids: Vec<u32> = recommend_top(&sv, 3).iter().map(|(o, _)| o.0).collect();
        assert_eq!(ids, vec![0, 2, 3]);
    }

    #[test]
    fn single_user_single_object() {
        let ds = CoupledDataset::unlabeled(graph(1, 1, &[(0, 0)]), BipartiteGraph::empty(1, 0)).unwrap();
        let sv = md_scores(&ds, NodeId(0)).unwrap();
        assert_eq!(sv.scores, vec![1.0]);
        assert!(recommend_top(&sv, 5).is_empty());
    }

    #[test]
    fn algorithm_names() {
        assert_eq!(Algorithm::from_name("MD", 0.5, 1.0).unwrap(), Algorithm::Md);
        assert!(matches!(Algorithm::from_name("pagerank", 0.5, 1.0), Err(Error::UnknownAlgorithm(_))));
        assert!(matches!(Algorithm::from_name("hdh", 1.5, 1.0), Err(Error::InvalidArgument(_))));
        assert!(matches!(Algorithm::from_name("blend", 0.5, -1.0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn target_out_of_range() {
        let ds = toy();
        for name in ["md", "hdh", "ucf", "icf", "sd", "blend"] {
            let algo = Algorithm::from_name(name, 0.5, 1.0).unwrap();
            assert!(matches!(algo.score(&ds, NodeId(3)), Err(Error::Index { .. })), "{name}");
        }
    }

    use crate::graph::BipartiteGraph;
}
