//! Degree-personalized blend of the hybrid (HDH) and social diffusion (SD)
//! scorers: `f = λ_i · h + (1 − λ_i) · g` with
//! `λ_i = (k_i / max_k)^β`. Heavy users lean on HDH, light users on SD.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{CoupledDataset, NodeId};

use super::diffusion::{check_lambda, hdh_scores, sd_scores};
use super::{check_target, ScoreVector};

pub(super) fn check_beta(beta: f64) -> Result<()> {
    if beta >= 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("beta must be a finite value >= 0, got {beta}")))
    }
}

/// How the two score vectors are put on a common scale before mixing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlendNormalization {
    /// Each vector rescaled to sum 1 over all objects.
    #[default]
    UnitSum,
    /// Raw scores mixed as they are.
    Raw,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlendConfig {
    pub beta: f64,
    pub lambda_hdh: f64,
    /// Largest object degree among training users.
    pub max_object_degree: usize,
    pub normalization: BlendNormalization,
}

impl BlendConfig {
    pub fn new(beta: f64, lambda_hdh: f64, max_object_degree: usize) -> Result<Self> {
        check_beta(beta)?;
        check_lambda(lambda_hdh)?;
        Ok(BlendConfig { beta, lambda_hdh, max_object_degree, normalization: BlendNormalization::UnitSum })
    }

    /// Config whose degree ceiling comes from the training data.
    pub fn for_training(train: &CoupledDataset, beta: f64, lambda_hdh: f64) -> Result<Self> {
        Self::new(beta, lambda_hdh, train.user_object().max_degree(crate::graph::Side::Left))
    }

    pub fn with_normalization(mut self, normalization: BlendNormalization) -> Self {
        self.normalization = normalization;
        self
    }

    /// `λ_i` for a user of object degree `k`, with `0⁰ = 1`.
    pub fn weight(&self, k: usize) -> Result<f64> {
        if k > self.max_object_degree {
            return Err(Error::InvalidArgument(format!(
                "user degree {k} exceeds max_object_degree {}",
                self.max_object_degree
            )));
        }
        if self.beta == 0.0 {
            return Ok(1.0);
        }
        if k == 0 {
            return Ok(0.0);
        }
        Ok((k as f64 / self.max_object_degree as f64).powf(self.beta))
    }
}

fn unit_sum(scores: &mut [f64]) {
    let total: f64 = scores.iter().sum();
    if total > 0.0 {
        for s in scores.iter_mut() {
            *s /= total;
        }
    }
}

pub fn blend_scores(train: &CoupledDataset, target: NodeId, config: &BlendConfig) -> Result<ScoreVector> {
    check_beta(config.beta)?;
    check_target(train, target)?;
    let weight = config.weight(train.user_object().left_degree(target.index()))?;
    // A pure endpoint is returned unscaled: dividing by the total can round
    // two distinct scores onto one value and reorder the list.
    if weight == 1.0 {
        return hdh_scores(train, target, config.lambda_hdh);
    }
    if weight == 0.0 {
        return sd_scores(train, target);
    }
    let mut h = hdh_scores(train, target, config.lambda_hdh)?;
    let mut g = sd_scores(train, target)?;
    if config.normalization == BlendNormalization::UnitSum {
        unit_sum(&mut h.scores);
        unit_sum(&mut g.scores);
    }
    for (hs, gs) in h.scores.iter_mut().zip(&g.scores) {
        *hs = weight * *hs + (1.0 - weight) * gs;
    }
    Ok(h)
}
