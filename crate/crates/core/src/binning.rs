//! Degree binning for averaged curves.
//!
//! Bin `x = 1, 2, 3, ...` covers degrees in the half-open interval
//! `(a(x² − x), a(x² + x)]`. Consecutive bins share endpoints, so the bins
//! partition the positive axis and bin widths grow linearly in `x`.

use serde::Serialize;

/// Logarithm used for the bin scale constant `a = 0.5 · log 5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    Natural,
    Ten,
}

impl LogBase {
    /// `0.5 · log 5` in this base.
    pub fn scale(self) -> f64 {
        match self {
            LogBase::Natural => 0.5 * 5f64.ln(),
            LogBase::Ten => 0.5 * 5f64.log10(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqrtLogBins {
    scale: f64,
}

impl SqrtLogBins {
    pub fn new(base: LogBase) -> Self {
        SqrtLogBins { scale: base.scale() }
    }

    pub fn with_scale(scale: f64) -> Self {
        assert!(scale > 0.0 && scale.is_finite(), "bin scale must be positive");
        SqrtLogBins { scale }
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `(low, high)` bounds of bin `x` (x ≥ 1).
    pub fn bounds(&self, x: usize) -> (f64, f64) {
        let x = x as f64;
        (self.scale * (x * x - x), self.scale * (x * x + x))
    }

    /// Bin index containing `value`, or `None` for values ≤ 0.
    pub fn bin_of(&self, value: f64) -> Option<usize> {
        if value.is_nan() || value <= 0.0 {
            return None;
        }
        // smallest x with a(x² + x) ≥ value
        let r = value / self.scale;
        let mut x = (((1.0 + 4.0 * r).sqrt() - 1.0) / 2.0).ceil().max(1.0) as usize;
        while self.bounds(x).1 < value {
            x += 1;
        }
        while x > 1 && self.bounds(x - 1).1 >= value {
            x -= 1;
        }
        Some(x)
    }
}

/// Averaged value for one bin of a curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub bin_index: usize,
    pub x_low: f64,
    pub x_high: f64,
    pub mean: f64,
    pub count: usize,
}

/// Bins `(degree, value)` samples and averages each nonempty bin.
/// Samples are summed in input order; empty bins are omitted.
pub fn binned_mean<I>(bins: &SqrtLogBins, samples: I) -> Vec<CurvePoint>
where
    I: IntoIterator<Item = (usize, f64)>,
{
    let mut acc: Vec<(f64, usize)> = Vec::new();
    for (degree, value) in samples {
        let Some(x) = bins.bin_of(degree as f64) else { continue };
        if acc.len() < x {
            acc.resize(x, (0.0, 0));
        }
        acc[x - 1].0 += value;
        acc[x - 1].1 += 1;
    }
    acc.into_iter()
        .enumerate()
        .filter(|(_, (_, n))| *n > 0)
        .map(|(i, (sum, count))| {
            let (x_low, x_high) = bins.bounds(i + 1);
            CurvePoint { bin_index: i + 1, x_low, x_high, mean: sum / count as f64, count }
        })
        .collect()
}

/// Averages values per exact integer degree. Each point's interval is
/// `(d − 1, d]`.
pub fn per_degree_mean<I>(samples: I) -> Vec<CurvePoint>
where
    I: IntoIterator<Item = (usize, f64)>,
{
    let mut acc: std::collections::BTreeMap<usize, (f64, usize)> = Default::default();
    for (degree, value) in samples {
        let e = acc.entry(degree).or_insert((0.0, 0));
        e.0 += value;
        e.1 += 1;
    }
    acc.into_iter()
        .map(|(d, (sum, count))| CurvePoint {
            bin_index: d,
            x_low: d as f64 - 1.0,
            x_high: d as f64,
            mean: sum / count as f64,
            count,
        })
        .collect()
}
