//! User-based and item-based collaborative filtering with Salton similarity.

use crate::error::Result;
use crate::graph::{CoupledDataset, NodeId};
use crate::similarity::salton_from_counts;

use super::{check_target, ScoreVector};

/// `p_iα = Σ_{j≠i} s_ij a_jα` with `s_ij` the Salton index of user profiles.
pub fn ucf_scores(train: &CoupledDataset, target: NodeId) -> Result<ScoreVector> {
    check_target(train, target)?;
    let uo = train.user_object();
    let mut out = ScoreVector::zeros(train, target);
    let t = target.index();
    let kt = uo.left_degree(t);
    if kt == 0 {
        return Ok(out);
    }
    let mut common = vec![0u32; train.user_count()];
    let mut touched = Vec::new();
    for &o in uo.left_neighbors(t) {
        for &j in uo.right_neighbors(o.index()) {
            let j = j.index();
            if j != t {
                if common[j] == 0 {
                    touched.push(j);
                }
                common[j] += 1;
            }
        }
    }
    touched.sort_unstable();
    for j in touched {
        let objects = uo.left_neighbors(j);
        let s = salton_from_counts(common[j] as usize, kt, objects.len());
        for &alpha in objects {
            out.scores[alpha.index()] += s;
        }
    }
    Ok(out)
}

/// `p_iα = Σ_β s_αβ a_iβ` with `s_αβ` the Salton index of object audiences.
pub fn icf_scores(train: &CoupledDataset, target: NodeId) -> Result<ScoreVector> {
    check_target(train, target)?;
    let uo = train.user_object();
    let mut out = ScoreVector::zeros(train, target);
    let mut common = vec![0u32; train.object_count()];
    let mut touched = Vec::new();
    for &beta in uo.left_neighbors(target.index()) {
        let users = uo.right_neighbors(beta.index());
        for &i in users {
            for &alpha in uo.left_neighbors(i.index()) {
                let a = alpha.index();
                if common[a] == 0 {
                    touched.push(a);
                }
                common[a] += 1;
            }
        }
        touched.sort_unstable();
        for &a in &touched {
            out.scores[a] += salton_from_counts(common[a] as usize, uo.right_degree(a), users.len());
            common[a] = 0;
        }
        touched.clear();
    }
    Ok(out)
}
