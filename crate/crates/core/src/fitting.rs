//! Binned least-squares fitting.
//!
//! A [`FitModel`] predicts the expected count in a bin from its parameters
//! and the bin center. [`ChiSquare`] turns a model and a [`BinnedDataset`]
//! into an [`Objective`] over the parameters, so the multistart optimizer
//! and its dual-number gradients apply unchanged.

use alloc::vec::Vec;
use core::fmt;

use crate::error::DomainError;
use crate::objectives::Objective;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum DatasetError {
    TooFewEdges,
    LengthMismatch { bins: usize, found: usize },
    EdgesNotAscending(usize),
    NegativeCount(usize),
    NonPositiveSigma(usize),
}

impl fmt::Display for DatasetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DatasetError::TooFewEdges => write!(f, "a dataset needs at least one bin"),
            DatasetError::LengthMismatch { bins, found } => {
                write!(f, "expected {bins} per-bin values, found {found}")
            }
            DatasetError::EdgesNotAscending(i) => write!(f, "bin edges not ascending at bin {i}"),
            DatasetError::NegativeCount(i) => write!(f, "negative or non-finite count in bin {i}"),
            DatasetError::NonPositiveSigma(i) => write!(f, "non-positive uncertainty in bin {i}"),
        }
    }
}

impl core::error::Error for DatasetError {}

/// Observed counts on a binning, with per-bin uncertainties.
#[derive(Debug, Clone, PartialEq)]
pub struct BinnedDataset {
    edges: Vec<f64>,
    counts: Vec<f64>,
    sigma: Vec<f64>,
}

/// `√max(N_obs, 1)`.
pub fn default_sigma(count: f64) -> f64 {
    libm::sqrt(if count > 1.0 { count } else { 1.0 })
}

impl BinnedDataset {
    /// `edges` has one more entry than `counts`. Missing uncertainties
    /// default to [`default_sigma`].
    pub fn new(edges: Vec<f64>, counts: Vec<f64>, sigma: Option<Vec<f64>>) -> Result<Self, DatasetError> {
        if edges.len() < 2 {
            return Err(DatasetError::TooFewEdges);
        }
        let bins = edges.len() - 1;
        if counts.len() != bins {
            return Err(DatasetError::LengthMismatch {
                bins,
                found: counts.len(),
            });
        }
        if let Some(i) = edges.windows(2).position(|w| !(w[0] < w[1])) {
            return Err(DatasetError::EdgesNotAscending(i));
        }
        if let Some(i) = counts.iter().position(|&c| !(c >= 0.0) || !c.is_finite()) {
            return Err(DatasetError::NegativeCount(i));
        }
        let sigma = match sigma {
            Some(s) => {
                if s.len() != bins {
                    return Err(DatasetError::LengthMismatch { bins, found: s.len() });
                }
                if let Some(i) = s.iter().position(|&v| !(v > 0.0) || !v.is_finite()) {
                    return Err(DatasetError::NonPositiveSigma(i));
                }
                s
            }
            None => counts.iter().map(|&c| default_sigma(c)).collect(),
        };
        Ok(Self { edges, counts, sigma })
    }

    /// Build from contiguous bins given as `(low, high, count, sigma)` rows.
    pub fn from_rows(rows: &[(f64, f64, f64, Option<f64>)]) -> Result<Self, DatasetError> {
        let Some(first) = rows.first() else {
            return Err(DatasetError::TooFewEdges);
        };
        let mut edges = Vec::with_capacity(rows.len() + 1);
        edges.push(first.0);
        for (i, r) in rows.iter().enumerate() {
            if i > 0 && r.0 != rows[i - 1].1 {
                return Err(DatasetError::EdgesNotAscending(i));
            }
            edges.push(r.1);
        }
        let counts = rows.iter().map(|r| r.2).collect();
        let sigma = if rows.iter().all(|r| r.3.is_some()) {
            Some(rows.iter().filter_map(|r| r.3).collect())
        } else {
            None
        };
        Self::new(edges, counts, sigma)
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn counts(&self) -> &[f64] {
        &self.counts
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn center(&self, bin: usize) -> f64 {
        0.5 * (self.edges[bin] + self.edges[bin + 1])
    }

    pub fn centers(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.bins()).map(|b| self.center(b))
    }
}

/// Parametric prediction of the expected count in a bin.
pub trait FitModel {
    fn parameter_count(&self) -> usize;

    fn predict<S: Scalar>(&self, params: &[S], center: f64) -> S;
}

impl<M: FitModel + ?Sized> FitModel for &M {
    fn parameter_count(&self) -> usize {
        (**self).parameter_count()
    }

    fn predict<S: Scalar>(&self, params: &[S], center: f64) -> S {
        (**self).predict(params, center)
    }
}

/// `p₀ + p₁·c`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LinearModel;

impl FitModel for LinearModel {
    fn parameter_count(&self) -> usize {
        2
    }

    fn predict<S: Scalar>(&self, params: &[S], center: f64) -> S {
        params[0] + params[1] * center
    }
}

/// Smoothly falling spectrum `A·p₀·(1 − x)^p₁ / x^p₂` with `x = c / mass_scale`.
///
/// Evaluated as `A·p₀·exp(p₁ ln(1 − x) − p₂ ln x)`; the logarithms only see
/// the fixed bin center, so every parameter vector is in the domain as long
/// as all centers satisfy `0 < x < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FallingSpectrum {
    /// Normalization factor `A`.
    pub scale: f64,
    pub mass_scale: f64,
}

impl FitModel for FallingSpectrum {
    fn parameter_count(&self) -> usize {
        3
    }

    fn predict<S: Scalar>(&self, params: &[S], center: f64) -> S {
        let x = center / self.mass_scale;
        let log_one_minus = libm::log(1.0 - x);
        let log_x = libm::log(x);
        let shape = (params[1] * log_one_minus - params[2] * log_x).exp();
        params[0] * shape * self.scale
    }
}

/// `χ²(θ) = Σ_b ((N_obs,b − N_pred,b(θ)) / σ_b)²`.
#[derive(Debug, Clone, Copy)]
pub struct ChiSquare<'a, M: ?Sized> {
    model: &'a M,
    data: &'a BinnedDataset,
}

pub fn chi_square_objective<'a, M: FitModel + ?Sized>(model: &'a M, data: &'a BinnedDataset) -> ChiSquare<'a, M> {
    ChiSquare { model, data }
}

impl<'a, M: FitModel + ?Sized> ChiSquare<'a, M> {
    /// Value with non-finite predictions reported as errors.
    pub fn try_value(&self, params: &[f64]) -> Result<f64, DomainError> {
        let mut acc = 0.0;
        for b in 0..self.data.bins() {
            let pred = self.model.predict(params, self.data.center(b));
            if !pred.is_finite() {
                return Err(DomainError::NonFinite { coordinate: None });
            }
            let r = (pred - self.data.counts[b]) / self.data.sigma[b];
            acc += r * r;
        }
        Ok(acc)
    }
}

impl<'a, M: FitModel + ?Sized> Objective for ChiSquare<'a, M> {
    fn dim(&self) -> usize {
        self.model.parameter_count()
    }

    fn eval<S: Scalar>(&self, params: &[S]) -> S {
        let mut acc = S::constant(0.0);
        for b in 0..self.data.bins() {
            let pred = self.model.predict(params, self.data.center(b));
            let r = (pred - self.data.counts[b]) / self.data.sigma[b];
            acc = acc + r * r;
        }
        acc
    }
}

/// Per-bin residuals `(N_obs − N_pred) / σ`.
pub fn pulls<M: FitModel + ?Sized>(model: &M, params: &[f64], data: &BinnedDataset) -> Vec<f64> {
    (0..data.bins())
        .map(|b| (data.counts[b] - model.predict(params, data.center(b))) / data.sigma[b])
        .collect()
}

/// Noise-free dataset whose counts equal the model prediction.
pub fn expected_dataset<M: FitModel + ?Sized>(
    model: &M,
    params: &[f64],
    edges: Vec<f64>,
) -> Result<BinnedDataset, DatasetError> {
    let bins = edges.len().saturating_sub(1);
    let counts = (0..bins)
        .map(|b| model.predict(params, 0.5 * (edges[b] + edges[b + 1])))
        .collect();
    BinnedDataset::new(edges, counts, None)
}
