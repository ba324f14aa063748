//! Pairwise node similarities over bipartite graphs.
//!
//! All measures return 0 when either profile is empty.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, CoupledDataset, NodeId, Side};

/// Size of the intersection of two ascending, duplicate-free lists.
pub(crate) fn intersection_len(a: &[NodeId], b: &[NodeId]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Jaccard index of the neighbor sets of two nodes on the same side.
pub fn jaccard(graph: &BipartiteGraph, side: Side, i: NodeId, j: NodeId) -> Result<f64> {
    let a = graph.neighbors(side, i)?;
    let b = graph.neighbors(side, j)?;
    let common = intersection_len(a, b);
    let union = a.len() + b.len() - common;
    Ok(if union == 0 { 0.0 } else { common as f64 / union as f64 })
}

/// Jaccard similarity of two users (left nodes). Applied to the user–object
/// graph this compares collected objects; applied to the user–group graph it
/// compares memberships.
pub fn jaccard_users(graph: &BipartiteGraph, i: NodeId, j: NodeId) -> Result<f64> {
    jaccard(graph, Side::Left, i, j)
}

/// Salton (binary cosine) index of two nodes on the same side.
pub fn salton(graph: &BipartiteGraph, side: Side, i: NodeId, j: NodeId) -> Result<f64> {
    let a = graph.neighbors(side, i)?;
    let b = graph.neighbors(side, j)?;
    if a.is_empty() || b.is_empty() {
        return Ok(0.0);
    }
    Ok(salton_from_counts(intersection_len(a, b), a.len(), b.len()))
}

#[inline]
pub(crate) fn salton_from_counts(common: usize, ki: usize, kj: usize) -> f64 {
    common as f64 / ((ki * kj) as f64).sqrt()
}

pub fn salton_users(user_object: &BipartiteGraph, i: NodeId, j: NodeId) -> Result<f64> {
    salton(user_object, Side::Left, i, j)
}

pub fn salton_items(user_object: &BipartiteGraph, alpha: NodeId, beta: NodeId) -> Result<f64> {
    salton(user_object, Side::Right, alpha, beta)
}

/// One user pair with its object-based and group-based Jaccard similarities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimilarityPairSample {
    pub user_i: NodeId,
    pub user_j: NodeId,
    pub s_object: f64,
    pub s_group: f64,
}

/// Samples `sample_size` distinct users with a seeded generator and returns
/// every unordered pair among them, in sampling order.
pub fn similarity_correlation_sample(
    dataset: &CoupledDataset,
    sample_size: usize,
    seed: u64,
) -> Result<Vec<SimilarityPairSample>> {
    let m = dataset.user_count();
    if sample_size > m {
        return Err(Error::InvalidArgument(format!(
            "sample size {sample_size} exceeds user count {m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let users: Vec<NodeId> = index::sample(&mut rng, m, sample_size)
        .into_iter()
        .map(NodeId::from)
        .collect();
    let mut out = Vec::with_capacity(sample_size * sample_size.saturating_sub(1) / 2);
    for (a, &i) in users.iter().enumerate() {
        for &j in &users[a + 1..] {
            out.push(SimilarityPairSample {
                user_i: i,
                user_j: j,
                s_object: jaccard_users(dataset.user_object(), i, j)?,
                s_group: jaccard_users(dataset.user_group(), i, j)?,
            });
        }
    }
    Ok(out)
}
