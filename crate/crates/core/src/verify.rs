//! Named self-check suites behind the CLI `verify` subcommand: exact-oracle
//! checks (trace powers, eigenvectors, identities, ranks, projectors) and
//! seeded Monte Carlo checks (moment estimates, Gaussian moments, the
//! imaginarity law, float twirling).

use num_traits::{Signed, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use crate::applications::{
    imaginarity_mean, ks_critical_1pct, ks_statistic, sample_imaginarity, ImaginarityModel,
};
use crate::combinatorics::{
    eval_df_binomial_identity, eval_nested_df_identity, rat, rat_to_f64, Rat,
};
use crate::distances::{
    binary_phase_trace_distance, closed_form_condition, closed_form_trace_distance,
    schatten_distance_real_vs_complex, PNorm,
};
use crate::error::Result;
use crate::harmonic::{build_pi_plus, eigenbasis_for_level};
use crate::moments::{
    build_binary_phase_matrix, build_real_moment_matrix, build_sym_projector,
    estimate_moment_operator, gaussian_direction_moment, sample_orthogonal, Ensemble,
};
use crate::spectra::{binary_phase_spectrum, complex_haar_eigenvalue, real_haar_spectrum};
use rand::Rng;

/// Result of a single named check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Knobs for the verification suites.
#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    /// Densest exact matrix side length the exact suite may build.
    pub max_dim: usize,
    pub seed: u64,
    /// Sample count for each Monte Carlo check.
    pub mc_samples: u64,
    pub workers: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { max_dim: 256, seed: 0xC0FFEE, mc_samples: 200_000, workers: 4 }
    }
}

fn check(name: &str, run: impl FnOnce() -> Result<(bool, String)>) -> CheckOutcome {
    match run() {
        Ok((passed, detail)) => CheckOutcome { name: name.into(), passed, detail },
        Err(e) => CheckOutcome { name: name.into(), passed: false, detail: format!("error: {e}") },
    }
}

fn small_pairs(max_dim: usize) -> Vec<(u64, u64)> {
    [(2u64, 2u64), (2, 3), (2, 4), (3, 2), (3, 3), (3, 4), (4, 2), (4, 3)]
        .into_iter()
        .filter(|&(d, t)| (d as usize).pow(t as u32) <= max_dim)
        .collect()
}

/// Exact-arithmetic oracle suite.
pub fn run_exact_suite(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let mut out = Vec::new();

    out.push(check("spectrum-invariants", || {
        for d in 2..=6u64 {
            for t in 1..=8u64 {
                real_haar_spectrum(d, t)?.validate()?;
            }
        }
        Ok((true, "d in 2..6, t in 1..8: unit trace, full rank, strict monotone".into()))
    }));

    out.push(check("eigenvalue-ratio-recurrence", || {
        for d in 2..=6u64 {
            for t in 2..=8u64 {
                let s = real_haar_spectrum(d, t)?;
                for w in s.lines.windows(2) {
                    let k = w[0].k;
                    let expected = rat((d + 2 * t - 2 * k - 2) as i64, (2 * k + 2) as i64);
                    if &w[1].eigenvalue / &w[0].eigenvalue != expected {
                        return Ok((false, format!("ratio mismatch at d={d} t={t} k={k}")));
                    }
                }
            }
        }
        Ok((true, "λ_{k+1}/λ_k = (d+2t−2k−2)/(2k+2) on the full grid".into()))
    }));

    out.push(check("trace-powers", || {
        for (d, t) in small_pairs(cfg.max_dim) {
            let rho = build_real_moment_matrix(d, t, cfg.max_dim)?;
            let s = real_haar_spectrum(d, t)?;
            for m in 1..=3u32 {
                if rho.trace_power(m) != s.spectral_moment(m) {
                    return Ok((false, format!("tr(ρ^{m}) mismatch at d={d} t={t}")));
                }
            }
        }
        Ok((true, "tr(ρ^m) = Σ α_k λ_k^m for m = 1..3".into()))
    }));

    out.push(check("eigenvectors", || {
        for (d, t) in small_pairs(cfg.max_dim) {
            let rho = build_real_moment_matrix(d, t, cfg.max_dim)?;
            let s = real_haar_spectrum(d, t)?;
            for line in &s.lines {
                for v in eigenbasis_for_level(d, t, line.k, cfg.max_dim)? {
                    let image = rho.mul_vec(&v.coefficients);
                    let scaled: Vec<Rat> =
                        v.coefficients.iter().map(|c| c * &line.eigenvalue).collect();
                    if image != scaled {
                        return Ok((false, format!("ρv ≠ λv at d={d} t={t} k={}", line.k)));
                    }
                }
            }
        }
        Ok((true, "every constructed eigenvector satisfies ρv = λ_k v exactly".into()))
    }));

    out.push(check("projector-structure", || {
        for (d, t) in small_pairs(cfg.max_dim.min(81)) {
            let pi = build_sym_projector(d, t, cfg.max_dim)?;
            let rho = build_real_moment_matrix(d, t, cfg.max_dim)?;
            if pi.mul(&pi) != pi {
                return Ok((false, format!("Π² ≠ Π at d={d} t={t}")));
            }
            if pi.mul(&rho) != rho.mul(&pi) {
                return Ok((false, format!("[Π, ρ] ≠ 0 at d={d} t={t}")));
            }
            if pi.mul(&rho).mul(&pi) != rho {
                return Ok((false, format!("ΠρΠ ≠ ρ at d={d} t={t}")));
            }
        }
        Ok((true, "Π idempotent, commutes with ρ, and ΠρΠ = ρ".into()))
    }));

    out.push(check("pi-plus-structure", || {
        for (d, t) in [(2u64, 2u64), (2, 3), (3, 2), (3, 3)] {
            let pi = build_pi_plus(d, t, cfg.max_dim)?;
            if pi.mul(&pi) != pi || !pi.is_symmetric() {
                return Ok((false, format!("Π₊ not an orthogonal projector at d={d} t={t}")));
            }
            let s = real_haar_spectrum(d, t)?;
            let mu = complex_haar_eigenvalue(d, t);
            let expected: Rat = s
                .lines
                .iter()
                .filter(|l| l.eigenvalue > mu)
                .map(|l| Rat::from(num_bigint::BigInt::from(l.multiplicity.clone())))
                .sum();
            if pi.trace() != expected {
                return Ok((false, format!("tr Π₊ mismatch at d={d} t={t}")));
            }
        }
        Ok((true, "Π₊ idempotent, symmetric, trace = Σ_{λ>μ} α_k".into()))
    }));

    out.push(check("df-identities", || {
        let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
        for _ in 0..100 {
            let (n, p, q) =
                (rng.random_range(0..=12u64), rng.random_range(0..=12u64), rng.random_range(0..=12u64));
            let (lhs, rhs) = eval_df_binomial_identity(n, p, q);
            if lhs != rhs {
                return Ok((false, format!("lemma fails at n={n} p={p} q={q}")));
            }
        }
        for _ in 0..50 {
            let (d, k0, p, q) = (
                rng.random_range(2..=5u64),
                rng.random_range(0..=8u64),
                rng.random_range(0..=8u64),
                rng.random_range(0..=8u64),
            );
            let (lhs, rhs) = eval_nested_df_identity(d, k0, p, q)?;
            if lhs != rhs {
                return Ok((false, format!("corollary fails at d={d} k0={k0} p={p} q={q}")));
            }
        }
        Ok((true, "150 random identity instances exact-equal".into()))
    }));

    out.push(check("closed-form-vs-spectral", || {
        let mut covered = 0;
        for d in 2..=30u64 {
            for t in 1..=10u64 {
                if !closed_form_condition(d, t) {
                    continue;
                }
                covered += 1;
                let closed = closed_form_trace_distance(d, t)?;
                let spectral = schatten_distance_real_vs_complex(d, t, PNorm::Finite(1.0))?
                    .exact
                    .unwrap()
                    / rat(2, 1);
                if closed != spectral {
                    return Ok((false, format!("mismatch at d={d} t={t}")));
                }
            }
        }
        Ok((true, format!("closed form = half spectral sum on {covered} valid grid points")))
    }));

    out.push(check("binary-phase-rank-and-distance", || {
        for d in 2..=4u64 {
            for t in 1..=d.min(3) {
                let spectrum = binary_phase_spectrum(d, t)?;
                spectrum.validate()?;
                let matrix = build_binary_phase_matrix(d, t, cfg.max_dim)?;
                if matrix.rank() != spectrum.rank().to_usize().unwrap() {
                    return Ok((false, format!("rank mismatch at d={d} t={t}")));
                }
                let mu = complex_haar_eigenvalue(d, t);
                let half_sum: Rat = spectrum
                    .entries
                    .iter()
                    .map(|(e, m)| {
                        Rat::from(num_bigint::BigInt::from(m.clone()))
                            * (e - &mu).abs()
                    })
                    .sum::<Rat>()
                    + Rat::from(num_bigint::BigInt::from(spectrum.zero_multiplicity.clone())) * &mu;
                if binary_phase_trace_distance(d, t)? != half_sum / rat(2, 1) {
                    return Ok((false, format!("trace-distance mismatch at d={d} t={t}")));
                }
            }
        }
        Ok((true, "rank = Σ C(d, t−2k) and formula = brute-force half-sum".into()))
    }));

    out
}

/// Seeded Monte Carlo suite.
pub fn run_montecarlo_suite(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let tol = 5.0 / (cfg.mc_samples as f64).sqrt();

    out.push(check("mc-real-moment", || {
        let exact = build_real_moment_matrix(3, 3, cfg.max_dim.max(27))?;
        let est = estimate_moment_operator(
            3,
            3,
            cfg.mc_samples,
            cfg.seed,
            cfg.workers,
            Ensemble::RealHaar,
            cfg.max_dim.max(27),
        )?;
        let dev = est.max_abs_deviation(&exact);
        Ok((dev <= tol, format!("max entry deviation {dev:.2e} (tolerance {tol:.2e})")))
    }));

    out.push(check("mc-binary-phase", || {
        let exact = build_binary_phase_matrix(2, 2, cfg.max_dim.max(4))?;
        let est = estimate_moment_operator(
            2,
            2,
            cfg.mc_samples,
            cfg.seed,
            cfg.workers,
            Ensemble::BinaryPhase,
            cfg.max_dim.max(4),
        )?;
        let dev = est.max_abs_deviation(&exact);
        Ok((dev <= tol, format!("max entry deviation {dev:.2e} (tolerance {tol:.2e})")))
    }));

    out.push(check("mc-complex-moment", || {
        let exact = build_sym_projector(2, 2, cfg.max_dim.max(4))?;
        let mu = rat_to_f64(&complex_haar_eigenvalue(2, 2));
        let est = estimate_moment_operator(
            2,
            2,
            cfg.mc_samples,
            cfg.seed,
            cfg.workers,
            Ensemble::ComplexHaar,
            cfg.max_dim.max(4),
        )?;
        let mut dev = 0.0f64;
        for i in 0..est.n {
            for j in 0..est.n {
                dev = dev.max((est.at(i, j) - mu * rat_to_f64(exact.at(i, j))).abs());
            }
        }
        Ok((dev <= tol, format!("max entry deviation {dev:.2e} (tolerance {tol:.2e})")))
    }));

    out.push(check("mc-gaussian-direction-moment", || {
        use rand_distr::StandardNormal;
        let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
        let exact = rat_to_f64(&gaussian_direction_moment(&[2, 2, 0]));
        let n = cfg.mc_samples;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..n {
            let w: Vec<f64> = (0..3).map(|_| rng.sample(StandardNormal)).collect();
            let norm_sq: f64 = w.iter().map(|x| x * x).sum();
            let v = w[0] * w[0] * w[1] * w[1] / (norm_sq * norm_sq);
            sum += v;
            sum_sq += v * v;
        }
        let mean = sum / n as f64;
        let sigma = ((sum_sq / n as f64 - mean * mean) / n as f64).sqrt();
        let ok = (mean - exact).abs() <= 3.0 * sigma.max(1e-12);
        Ok((ok, format!("E[x0²x1²] on S²: {mean:.6} vs exact {exact:.6} (3σ = {:.1e})", 3.0 * sigma)))
    }));

    out.push(check("imaginarity-law", || {
        let n = cfg.mc_samples.min(100_000);
        for d in [2u64, 3, 5] {
            let model = ImaginarityModel::new(d)?;
            let mut samples = sample_imaginarity(d, n, cfg.seed, cfg.workers)?;
            samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let ks = ks_statistic(&samples, |x| model.cdf(x))?;
            let crit = ks_critical_1pct(samples.len());
            if ks >= crit {
                return Ok((false, format!("KS {ks:.2e} >= {crit:.2e} at d={d}")));
            }
            let mean: f64 = samples.iter().sum::<f64>() / samples.len() as f64;
            let expected = rat_to_f64(&imaginarity_mean(d));
            let sigma = (model.variance() / samples.len() as f64).sqrt();
            if (mean - expected).abs() > 4.0 * sigma {
                return Ok((false, format!("mean {mean:.5} vs {expected:.5} beyond 4σ at d={d}")));
            }
        }
        Ok((true, "KS below the 1% critical value and mean within 4σ for d = 2, 3, 5".into()))
    }));

    out.push(check("float-twirl-invariance", || {
        let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
        for (d, t) in [(2u64, 3u64), (3, 2)] {
            let rho = build_real_moment_matrix(d, t, cfg.max_dim.max(27))?.to_dmatrix();
            let pi = build_sym_projector(d, t, cfg.max_dim.max(27))?.to_dmatrix();
            let mu = rat_to_f64(&complex_haar_eigenvalue(d, t));
            let rho_c = pi * mu;
            for _ in 0..5 {
                let o = sample_orthogonal(d, &mut rng);
                let mut o_t = nalgebra::DMatrix::<f64>::identity(1, 1);
                for _ in 0..t {
                    o_t = o_t.kronecker(&o);
                }
                let comm = (&o_t * &rho) - (&rho * &o_t);
                if comm.iter().any(|v| v.abs() > 1e-9) {
                    return Ok((false, format!("[O^t, ρ_R] too large at d={d} t={t}")));
                }
                let twirled = &o_t * &rho_c * o_t.transpose();
                if (&twirled - &rho_c).iter().any(|v| v.abs() > 1e-9) {
                    return Ok((false, format!("twirl moved ρ_C at d={d} t={t}")));
                }
            }
        }
        Ok((true, "O^{⊗t} commutes with ρ_R and fixes ρ_C to 1e−9".into()))
    }));

    out
}

/// Runs the requested suites and returns all outcomes.
pub fn run(cfg: &VerifyConfig, exact: bool, montecarlo: bool) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    if exact {
        out.extend(run_exact_suite(cfg));
    }
    if montecarlo {
        out.extend(run_montecarlo_suite(cfg));
    }
    out
}
