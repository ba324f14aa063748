//! Resource-spreading scorers: mass diffusion, the heat-conduction hybrid, and
//! social diffusion. All of them run as two sparse passes per target instead
//! of materializing the object-object transition matrix.

use crate::error::{Error, Result};
use crate::graph::{CoupledDataset, NodeId};

use super::{check_target, ScoreVector};

pub(super) fn check_lambda(lambda: f64) -> Result<()> {
    if (0.0..=1.0).contains(&lambda) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("lambda must lie in [0, 1], got {lambda}")))
    }
}

/// Per-user resource accumulated during the object → user step.
struct UserResource {
    values: Vec<f64>,
    touched: Vec<usize>,
}

impl UserResource {
    fn new(users: usize) -> Self {
        UserResource { values: vec![0.0; users], touched: Vec::new() }
    }

    #[inline]
    fn add(&mut self, user: usize, amount: f64) {
        if self.values[user] == 0.0 {
            self.touched.push(user);
        }
        self.values[user] += amount;
    }

    /// Users with nonzero resource, in ascending index order.
    fn settle(&mut self) {
        self.touched.sort_unstable();
        self.touched.dedup();
    }
}

/// Sends `weight(k_β)` from each collected object β to each of its users.
fn objects_to_users(train: &CoupledDataset, target: NodeId, weight: impl Fn(usize) -> f64, res: &mut UserResource) {
    let uo = train.user_object();
    for &beta in uo.left_neighbors(target.index()) {
        let users = uo.right_neighbors(beta.index());
        let share = weight(users.len());
        for &j in users {
            res.add(j.index(), share);
        }
    }
}

/// Each user splits its resource equally over its objects. Returns the
/// resource held by users with no objects, which cannot be forwarded.
fn users_to_objects(train: &CoupledDataset, res: &mut UserResource, scores: &mut [f64]) -> f64 {
    res.settle();
    let uo = train.user_object();
    let mut leaked = 0.0;
    for &j in &res.touched {
        let objects = uo.left_neighbors(j);
        if objects.is_empty() {
            leaked += res.values[j];
            continue;
        }
        let share = res.values[j] / objects.len() as f64;
        for &alpha in objects {
            scores[alpha.index()] += share;
        }
    }
    leaked
}

/// Mass diffusion: one unit per collected object, split equally to users and
/// back to objects. Scores sum to the target's object degree.
pub fn md_scores(train: &CoupledDataset, target: NodeId) -> Result<ScoreVector> {
    hdh_scores(train, target, 1.0)
}

/// Heat-conduction / mass-diffusion hybrid,
/// `w_αβ = k_α^(λ−1) k_β^(−λ) Σ_i a_iα a_iβ / k_i`, applied to the target's
/// binary object vector. `λ = 1` is mass diffusion, `λ = 0` heat conduction.
/// Objects with no users score 0.
pub fn hdh_scores(train: &CoupledDataset, target: NodeId, lambda: f64) -> Result<ScoreVector> {
    check_lambda(lambda)?;
    check_target(train, target)?;
    let mut out = ScoreVector::zeros(train, target);
    let mut res = UserResource::new(train.user_count());
    if lambda == 1.0 {
        objects_to_users(train, target, |k| 1.0 / k as f64, &mut res);
    } else {
        objects_to_users(train, target, |k| (k as f64).powf(-lambda), &mut res);
    }
    users_to_objects(train, &mut res, &mut out.scores);
    if lambda != 1.0 {
        let uo = train.user_object();
        for (alpha, s) in out.scores.iter_mut().enumerate() {
            let k = uo.right_degree(alpha);
            if k > 0 {
                *s *= (k as f64).powf(lambda - 1.0);
            }
        }
    }
    Ok(out)
}

/// Social diffusion result with the resource lost on users that have
/// memberships but no collected objects.
#[derive(Debug, Clone, PartialEq)]
pub struct SocialDiffusion {
    pub scores: ScoreVector,
    pub leaked: f64,
}

/// Social diffusion: mass diffusion where users additionally receive `1/k_c`
/// from every group `c` the target joined, before the return step.
pub fn sd_scores(train: &CoupledDataset, target: NodeId) -> Result<ScoreVector> {
    sd_scores_with_leakage(train, target).map(|sd| sd.scores)
}

pub fn sd_scores_with_leakage(train: &CoupledDataset, target: NodeId) -> Result<SocialDiffusion> {
    check_target(train, target)?;
    let mut out = ScoreVector::zeros(train, target);
    let mut res = UserResource::new(train.user_count());
    objects_to_users(train, target, |k| 1.0 / k as f64, &mut res);
    let ug = train.user_group();
    for &c in ug.left_neighbors(target.index()) {
        let members = ug.right_neighbors(c.index());
        let share = 1.0 / members.len() as f64;
        for &j in members {
            res.add(j.index(), share);
        }
    }
    let leaked = users_to_objects(train, &mut res, &mut out.scores);
    Ok(SocialDiffusion { scores: out, leaked })
}
