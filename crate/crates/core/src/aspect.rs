//! Group influence on object selection, estimated with an aspect model in
//! which a user's observed groups stand in for latent classes:
//!
//! ```text
//! p(o, u) = Σ_{c ∋ u} p(o | c) · p(c | u) · p(u)
//! p(o | c) = (# members of c that collected o) / (Σ_{members} k^(o))
//! p(c | u) = 1 / k_u^(c),   p(u) = 1
//! ```
//!
//! With `p(u) = 1` each `p(·, u)` is a distribution over objects.

use std::collections::HashMap;

use serde::Serialize;

use crate::binning::{binned_mean, CurvePoint, LogBase, SqrtLogBins};
use crate::error::{Error, Result};
use crate::graph::{CoupledDataset, NodeId, Side};

/// Object-selection counts pooled over one group's members.
#[derive(Debug, Clone, Default)]
struct GroupProfile {
    /// (object, number of members who collected it), ascending by object
    counts: Vec<(NodeId, u32)>,
    /// Σ over members of their object degree
    total: u64,
}

impl GroupProfile {
    fn build(dataset: &CoupledDataset, group: usize) -> Self {
        let uo = dataset.user_object();
        let mut counts: HashMap<NodeId, u32> = HashMap::new();
        let mut total = 0u64;
        for &member in dataset.user_group().right_neighbors(group) {
            let objects = uo.left_neighbors(member.index());
            total += objects.len() as u64;
            for &o in objects {
                *counts.entry(o).or_default() += 1;
            }
        }
        let mut counts: Vec<(NodeId, u32)> = counts.into_iter().collect();
        counts.sort_unstable();
        GroupProfile { counts, total }
    }

    fn probability(&self, object: NodeId) -> Option<f64> {
        if self.total == 0 {
            return None;
        }
        let n = match self.counts.binary_search_by_key(&object, |&(o, _)| o) {
            Ok(pos) => self.counts[pos].1,
            Err(_) => 0,
        };
        Some(n as f64 / self.total as f64)
    }
}

/// `p(o|c)` for one object and one group.
pub fn p_object_given_group(dataset: &CoupledDataset, object: NodeId, group: NodeId) -> Result<f64> {
    dataset.user_object().degree(Side::Right, object)?;
    dataset.user_group().degree(Side::Right, group)?;
    GroupProfile::build(dataset, group.index())
        .probability(object)
        .ok_or(Error::UndefinedDistribution { group: group.index() })
}

/// `p(o,u)` for a single pair. See [`InfluenceModel`] for bulk use.
pub fn influence(dataset: &CoupledDataset, user: NodeId, object: NodeId) -> Result<Influence> {
    dataset.user_object().degree(Side::Right, object)?;
    let groups = dataset.user_group().neighbors(Side::Left, user)?;
    if groups.is_empty() {
        return Err(Error::NoMembership { user: user.index() });
    }
    let weight = 1.0 / groups.len() as f64;
    let mut value = 0.0;
    let mut empty_groups = 0;
    for &c in groups {
        match GroupProfile::build(dataset, c.index()).probability(object) {
            Some(p) => value += p * weight,
            None => empty_groups += 1,
        }
    }
    Ok(Influence { value, empty_groups })
}

/// `⟨p(o,u)⟩` over the user's collected objects.
pub fn mean_influence(dataset: &CoupledDataset, user: NodeId) -> Result<f64> {
    InfluenceModel::new(dataset).mean_influence(user).map(|i| i.value)
}

/// Binned `⟨p(o,u)⟩` against object degree, using `a = 0.5 ln 5`.
pub fn influence_curve(dataset: &CoupledDataset) -> InfluenceCurve {
    InfluenceModel::new(dataset).curve(&SqrtLogBins::new(LogBase::Natural))
}

/// An influence value plus the number of the user's groups that carried no
/// object mass (and so contributed nothing).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Influence {
    pub value: f64,
    pub empty_groups: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfluenceCurve {
    pub points: Vec<CurvePoint>,
    /// users with k^(o) = 0 or k^(c) = 0
    pub excluded_users: usize,
    /// (user, group) memberships skipped because the group had no selections
    pub empty_group_memberships: usize,
}

/// Precomputed group profiles for evaluating influence over many users.
pub struct InfluenceModel<'a> {
    dataset: &'a CoupledDataset,
    profiles: Vec<GroupProfile>,
}

impl<'a> InfluenceModel<'a> {
    pub fn new(dataset: &'a CoupledDataset) -> Self {
        let profiles = (0..dataset.group_count())
            .map(|c| GroupProfile::build(dataset, c))
            .collect();
        InfluenceModel { dataset, profiles }
    }

    pub fn p_object_given_group(&self, object: NodeId, group: NodeId) -> Result<f64> {
        self.dataset.user_object().degree(Side::Right, object)?;
        self.dataset.user_group().degree(Side::Right, group)?;
        self.profiles[group.index()]
            .probability(object)
            .ok_or(Error::UndefinedDistribution { group: group.index() })
    }

    pub fn influence(&self, user: NodeId, object: NodeId) -> Result<Influence> {
        self.dataset.user_object().degree(Side::Right, object)?;
        let groups = self.dataset.user_group().neighbors(Side::Left, user)?;
        if groups.is_empty() {
            return Err(Error::NoMembership { user: user.index() });
        }
        let weight = 1.0 / groups.len() as f64;
        let mut value = 0.0;
        let mut empty_groups = 0;
        for &c in groups {
            match self.profiles[c.index()].probability(object) {
                Some(p) => value += p * weight,
                None => empty_groups += 1,
            }
        }
        Ok(Influence { value, empty_groups })
    }

    pub fn mean_influence(&self, user: NodeId) -> Result<Influence> {
        let objects = self.dataset.user_object().neighbors(Side::Left, user)?;
        let groups = self.dataset.user_group().left_neighbors(user.index());
        if objects.is_empty() {
            return Err(Error::ExcludedUser { user: user.index(), reason: "no collected objects" });
        }
        if groups.is_empty() {
            return Err(Error::ExcludedUser { user: user.index(), reason: "no group memberships" });
        }
        let mut sum = 0.0;
        for &o in objects {
            sum += self.influence(user, o)?.value;
        }
        let empty_groups = groups
            .iter()
            .filter(|c| self.profiles[c.index()].total == 0)
            .count();
        Ok(Influence { value: sum / objects.len() as f64, empty_groups })
    }

    /// Per-user `(k^(o), ⟨p(o,u)⟩)` for every eligible user, by user index.
    pub fn user_means(&self) -> (Vec<(NodeId, usize, f64)>, usize, usize) {
        let uo = self.dataset.user_object();
        let mut out = Vec::new();
        let mut excluded = 0;
        let mut empty = 0;
        for u in 0..self.dataset.user_count() {
            match self.mean_influence(NodeId::from(u)) {
                Ok(inf) => {
                    empty += inf.empty_groups;
                    out.push((NodeId::from(u), uo.left_degree(u), inf.value));
                }
                Err(_) => excluded += 1,
            }
        }
        (out, excluded, empty)
    }

    pub fn curve(&self, bins: &SqrtLogBins) -> InfluenceCurve {
        let (means, excluded_users, empty_group_memberships) = self.user_means();
        let points = binned_mean(bins, means.iter().map(|&(_, k, v)| (k, v)));
        InfluenceCurve { points, excluded_users, empty_group_memberships }
    }
}
