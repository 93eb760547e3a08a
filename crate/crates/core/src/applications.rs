//! Consequences of the spectral results: the ε floor for real-valued
//! t-designs, asymptotic copy counts for distinguishing, the imaginarity
//! functional with its exact Haar law, and the imaginarity-tester copy bound.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{rat, Rat};
use crate::distances::{schatten_distance_real_vs_complex, PNorm};
use crate::error::{Error, Result};
use crate::moments::sample_complex_haar_state;

/// Lower bound on the approximation parameter ε of ANY real-valued
/// ε-approximate t-design: half the trace norm ‖ρ_R − ρ_C‖₁, exactly.
/// The orthogonal twirl maps any real-valued moment operator onto ρ_R and is
/// contractive for every Schatten norm, so no real ensemble can sit closer to
/// ρ_C than ρ_R does.
pub fn design_epsilon_floor(d: u64, t: u64) -> Result<Rat> {
    let report = schatten_distance_real_vs_complex(d, t, PNorm::Finite(1.0))?;
    Ok(report.exact.expect("p = 1 always carries the exact value") / rat(2, 1))
}

/// Copies after which the optimal measurement distinguishes any real-valued
/// ensemble from complex Haar with success probability p:
/// t = √(2 ln(1/(2(1−p))) d). Valid for 1/2 < p < 1 with the induced
/// α = √(2 ln(1/(2(1−p)))) inside the α ≤ √2 window.
pub fn copies_to_distinguish(d: u64, p: f64) -> Result<f64> {
    if !(p > 0.5) {
        return Err(Error::Domain(format!(
            "success probability must exceed 1/2, got {p}"
        )));
    }
    if !(p < 1.0) {
        return Err(Error::Domain(format!(
            "success probability must be strictly below 1, got {p}"
        )));
    }
    let alpha_sq = 2.0 * (1.0 / (2.0 * (1.0 - p))).ln();
    if alpha_sq > 2.0 + 1e-12 {
        return Err(Error::UnsupportedRegime(format!(
            "p = {p} needs α = {:.4} > √2; the constant-regime asymptotics only cover α ≤ √2 \
             (p ≤ 1 − e⁻¹/2 ≈ 0.8161)",
            alpha_sq.sqrt()
        )));
    }
    Ok((alpha_sq * d as f64).sqrt())
}

/// Imaginarity I(ψ) = 1 − |⟨ψ̄|ψ⟩|² = 1 − |Σ_i ψ_i²|², in [0, 1].
pub fn imaginarity(state: &[Complex64]) -> Result<f64> {
    let norm: f64 = state.iter().map(|z| z.norm_sqr()).sum();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!(
            "state must be normalized to within 1e-9, got ‖ψ‖² = {norm}"
        )));
    }
    let overlap: Complex64 = state.iter().map(|z| z * z).sum();
    Ok((1.0 - overlap.norm_sqr()).clamp(0.0, 1.0))
}

/// Exact distribution of imaginarity under complex Haar.
///
/// I(ψ) follows a Beta((d−1)/2, 1) law, so P[I ≤ δ] = δ^{(d−1)/2} and the
/// mean is 1 − 2/(d+1).
#[derive(Debug, Clone, Copy)]
pub struct ImaginarityModel {
    pub d: u64,
}

impl ImaginarityModel {
    pub fn new(d: u64) -> Result<Self> {
        if d < 2 {
            return Err(Error::Domain(format!("dimension must be >= 2, got {d}")));
        }
        Ok(ImaginarityModel { d })
    }

    pub fn cdf(&self, delta: f64) -> f64 {
        imaginarity_cdf(self.d, delta)
    }

    pub fn mean(&self) -> Rat {
        imaginarity_mean(self.d)
    }

    pub fn variance(&self) -> f64 {
        let a = (self.d as f64 - 1.0) / 2.0;
        a / ((a + 1.0) * (a + 1.0) * (a + 2.0))
    }
}

/// P[I(ψ) ≤ δ] = δ^{(d−1)/2} for complex-Haar ψ.
pub fn imaginarity_cdf(d: u64, delta: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&delta));
    delta.powf((d as f64 - 1.0) / 2.0)
}

/// E[I(ψ)] = 1 − 2/(d+1), exactly.
pub fn imaginarity_mean(d: u64) -> Rat {
    rat(1, 1) - rat(2, d as i64 + 1)
}

/// Copy lower bound for any imaginarity tester with soundness threshold δ:
/// t = √(2 ln(1/(2/3 + δ^{(d−1)/2})) d).
///
/// The argument goes through only while δ^{(d−1)/2} < 1/3, i.e.
/// δ < 3^{−2/(d−1)}; that inequality from the proof is the one enforced here,
/// and is stricter than the 3^{−2/(d+1)} that appears in the bound's
/// statement.
pub fn tester_copy_lower_bound(d: u64, delta: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::Domain(format!("threshold must lie in [0, 1), got {delta}")));
    }
    let limit = 3f64.powf(-2.0 / (d as f64 - 1.0));
    if delta >= limit {
        return Err(Error::Precondition(format!(
            "δ = {delta} is too large: the bound requires δ < 3^(-2/(d-1)) = {limit:.6} (the \
             stated 3^(-2/(d+1)) threshold is weaker than what the derivation actually uses)"
        )));
    }
    let arg = 2.0 / 3.0 + imaginarity_cdf(d, delta);
    Ok((2.0 * (1.0 / arg).ln() * d as f64).sqrt())
}

/// One-sample Kolmogorov–Smirnov statistic: the sup-norm distance between the
/// empirical CDF of sorted samples and a reference CDF on [0, 1].
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Domain("KS statistic needs at least one sample".into()));
    }
    if samples.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Domain("samples must be sorted ascending".into()));
    }
    if samples.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
        return Err(Error::Domain("samples must lie in [0, 1]".into()));
    }
    let n = samples.len() as f64;
    let mut sup = 0.0f64;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        sup = sup.max(f - i as f64 / n).max((i as f64 + 1.0) / n - f);
    }
    Ok(sup)
}

/// Asymptotic 1% critical value c(0.01)/√n with c(0.01) = 1.628.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}

/// Imaginarity of `samples` complex-Haar states, drawn from ChaCha12 streams
/// partitioned across workers exactly like the moment estimator; the output
/// order is worker-major and fully determined by (seed, workers, samples).
pub fn sample_imaginarity(d: u64, samples: u64, seed: u64, workers: u64) -> Result<Vec<f64>> {
    if samples == 0 || workers == 0 {
        return Err(Error::Precondition("need samples >= 1 and workers >= 1".into()));
    }
    ImaginarityModel::new(d)?;
    let base = samples / workers;
    let extra = samples % workers;
    let chunks: Vec<Vec<f64>> = (0..workers)
        .into_par_iter()
        .map(|w| {
            let quota = base + u64::from(w < extra);
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.set_stream(w);
            (0..quota)
                .map(|_| {
                    let psi = sample_complex_haar_state(d, &mut rng);
                    imaginarity(&psi).expect("sampler produces unit states")
                })
                .collect()
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

/// Parameter a bound was computed for.
#[derive(Debug, Clone, Copy)]
pub enum BoundParameter {
    SuccessProbability(f64),
    ImaginarityThreshold(f64),
}

/// Copy-count and ε-floor outputs for the design and imaginarity applications.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub d: u64,
    pub t: Option<u64>,
    pub parameter: Option<BoundParameter>,
    pub copies: Option<f64>,
    pub epsilon_floor: Option<Rat>,
    pub notes: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct BoundReportJson {
    pub d: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameter: Option<BoundParameterJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub copies: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub copies_ceil: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon_floor: Option<[String; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon_floor_float: Option<f64>,
    pub notes: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct BoundParameterJson {
    pub kind: &'static str,
    pub value: f64,
}

impl BoundReport {
    pub fn to_json(&self) -> BoundReportJson {
        BoundReportJson {
            d: self.d,
            t: self.t,
            parameter: self.parameter.map(|p| match p {
                BoundParameter::SuccessProbability(v) => {
                    BoundParameterJson { kind: "success_probability", value: v }
                }
                BoundParameter::ImaginarityThreshold(v) => {
                    BoundParameterJson { kind: "imaginarity_threshold", value: v }
                }
            }),
            copies: self.copies,
            copies_ceil: self.copies.map(|c| c.ceil() as u64),
            epsilon_floor: self
                .epsilon_floor
                .as_ref()
                .map(|e| [e.numer().to_string(), e.denom().to_string()]),
            epsilon_floor_float: self
                .epsilon_floor
                .as_ref()
                .map(crate::combinatorics::rat_to_f64),
            notes: self.notes.clone(),
        }
    }
}
