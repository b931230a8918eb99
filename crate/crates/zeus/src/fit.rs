//! Dataset files, synthetic spectra and fit reports.

use std::fmt::Write as _;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::Serialize;
use zeus_core::fitting::{
    chi_square_objective, expected_dataset, pulls, BinnedDataset, DatasetError, FallingSpectrum, FitModel,
};
use zeus_core::{ConfigError, ZeusConfig};

use crate::driver::zeus_run;
use crate::error::{Error, Result};

/// Parse a delimited dataset: one row per bin with columns
/// `edge_low, edge_high, count[, sigma]`, separated by commas, semicolons
/// or whitespace. Blank lines and `#` comments are skipped, and a
/// non-numeric first row is taken as a header.
pub fn parse_dataset(text: &str, label: &Path) -> Result<BinnedDataset> {
    let bad = |line: usize, message: String| Error::Format {
        path: label.to_path_buf(),
        message: format!("line {line}: {message}"),
    };
    let mut rows = Vec::new();
    let mut seen_row = false;
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c == ',' || c == ';' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        let parsed: Result<Vec<f64>, _> = fields.iter().map(|s| s.parse::<f64>()).collect();
        let values = match parsed {
            Ok(v) => v,
            Err(_) if !seen_row => {
                seen_row = true;
                continue;
            }
            Err(e) => return Err(bad(n + 1, e.to_string())),
        };
        seen_row = true;
        match values[..] {
            [lo, hi, count] => rows.push((lo, hi, count, None)),
            [lo, hi, count, sigma] => rows.push((lo, hi, count, Some(sigma))),
            _ => return Err(bad(n + 1, format!("expected 3 or 4 columns, found {}", values.len()))),
        }
    }
    if rows.iter().any(|r| r.3.is_some()) && rows.iter().any(|r| r.3.is_none()) {
        return Err(bad(0, "sigma column must be given for every bin or none".into()));
    }
    Ok(BinnedDataset::from_rows(&rows)?)
}

pub fn read_dataset(path: &Path) -> Result<BinnedDataset> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_dataset(&text, path)
}

pub fn format_dataset(data: &BinnedDataset) -> String {
    let mut out = String::from("edge_low,edge_high,count,sigma\n");
    for b in 0..data.bins() {
        let e = data.edges();
        writeln!(out, "{},{},{},{}", e[b], e[b + 1], data.counts()[b], data.sigma()[b]).unwrap();
    }
    out
}

pub fn write_dataset(path: &Path, data: &BinnedDataset) -> Result<()> {
    std::fs::write(path, format_dataset(data)).map_err(|e| Error::io(path, e))
}

/// Replace every count by a Poisson draw with that mean. Uncertainties are
/// recomputed from the drawn counts.
pub fn poisson_fluctuate(expected: &BinnedDataset, seed: u64) -> Result<BinnedDataset, DatasetError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let counts = expected
        .counts()
        .iter()
        .map(|&mean| match Poisson::new(mean) {
            Ok(p) => p.sample(&mut rng),
            Err(_) => 0.0,
        })
        .collect();
    BinnedDataset::new(expected.edges().to_vec(), counts, None)
}

/// Illustrative falling spectrum: 60 bins between 100 and 600 mass units,
/// `mass_scale = 1000`, normalization 1000.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumDemo {
    pub model: FallingSpectrum,
    pub truth: [f64; 3],
    pub edges: Vec<f64>,
}

impl Default for SpectrumDemo {
    fn default() -> Self {
        let bins = 60;
        let edges = (0..=bins).map(|i| 100.0 + 500.0 * i as f64 / bins as f64).collect();
        Self {
            model: FallingSpectrum {
                scale: 1000.0,
                mass_scale: 1000.0,
            },
            truth: [1.0, 4.0, 2.0],
            edges,
        }
    }
}

impl SpectrumDemo {
    pub fn expected(&self) -> BinnedDataset {
        expected_dataset(&self.model, &self.truth, self.edges.clone()).expect("demo binning is valid")
    }

    pub fn fluctuated(&self, seed: u64) -> BinnedDataset {
        poisson_fluctuate(&self.expected(), seed).expect("demo binning is valid")
    }
}

/// Driver settings for fits: parameters searched in `[0, 8]`, 256 starts,
/// `Θ = 1e-6`, 1000 iterations per run. Near the minimum the χ² gradient
/// sits on a rounding floor of roughly 1e-8 to 1e-5, so tighter thresholds
/// only spend the iteration cap.
pub fn fit_config(parameters: usize, seed: u64) -> ZeusConfig {
    ZeusConfig {
        particles: 256,
        dim: parameters,
        lower: 0.0,
        upper: 8.0,
        pso: Default::default(),
        bfgs_iterations: 1000,
        line_search: Default::default(),
        theta: 1e-6,
        required_convergences: 16,
        seed,
        workers: 0,
        deterministic: false,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinReport {
    pub edge_low: f64,
    pub edge_high: f64,
    pub observed: f64,
    pub predicted: f64,
    pub sigma: f64,
    pub pull: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    pub parameters: Vec<f64>,
    pub chi2: f64,
    pub ndf: isize,
    pub status: &'static str,
    pub grad_norm: f64,
    pub converged_runs: usize,
    pub wall_time_s: f64,
    /// Fraction of pulls with magnitude at most 2.
    pub pulls_within_2: f64,
    pub bins: Vec<BinReport>,
}

impl FitReport {
    pub fn pulls(&self) -> Vec<f64> {
        self.bins.iter().map(|b| b.pull).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Minimize χ² for `model` on `data` with the multistart driver.
pub fn fit_dataset<M>(model: &M, data: &BinnedDataset, cfg: &ZeusConfig) -> Result<FitReport>
where
    M: FitModel + Sync + ?Sized,
{
    if cfg.dim != model.parameter_count() {
        return Err(ConfigError::DimensionMismatch {
            expected: model.parameter_count(),
            found: cfg.dim,
        }
        .into());
    }
    let objective = chi_square_objective(model, data);
    let result = zeus_run(&objective, cfg)?;
    let params = result.best.x_final.clone();
    let chi2 = objective.try_value(&params).map_err(|_| Error::AllRunsFailed)?;
    let pull = pulls(model, &params, data);
    let bins = (0..data.bins())
        .map(|b| BinReport {
            edge_low: data.edges()[b],
            edge_high: data.edges()[b + 1],
            observed: data.counts()[b],
            predicted: model.predict(&params, data.center(b)),
            sigma: data.sigma()[b],
            pull: pull[b],
        })
        .collect();
    let within = pull.iter().filter(|p| p.abs() <= 2.0).count();
    Ok(FitReport {
        ndf: data.bins() as isize - params.len() as isize,
        parameters: params,
        chi2,
        status: result.best.status.as_str(),
        grad_norm: result.best.grad_norm,
        converged_runs: result.converged_count,
        wall_time_s: result.wall_time,
        pulls_within_2: within as f64 / data.bins() as f64,
        bins,
    })
}
