//! Schatten distances between the moment operators: the exact spectral sum,
//! the gated closed form with its exact validity condition, the log-gamma
//! evaluation for large dimensions, the three asymptotic regimes, and the
//! binary-phase trace distance.

use num_traits::{One, Signed};
use serde::Serialize;

use crate::combinatorics::{
    big_ln, binomial, df, factorial, log_double_factorial, log_factorial, rat, rat_from_nats,
    rat_ln_abs, rat_to_f64, BigNat, Rat,
};
use crate::error::{Error, Result};
use crate::spectra::{complex_haar_eigenvalue, real_haar_spectrum, symmetric_dimension};

/// Order of a Schatten norm, p ∈ [1, ∞].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PNorm {
    Finite(f64),
    Infinity,
}

impl PNorm {
    pub fn validate(self) -> Result<Self> {
        if let PNorm::Finite(p) = self {
            if !(p >= 1.0) {
                return Err(Error::Domain(format!("Schatten order must satisfy p >= 1, got {p}")));
            }
        }
        Ok(self)
    }

    pub fn label(self) -> String {
        match self {
            PNorm::Finite(p) => format!("{p}"),
            PNorm::Infinity => "inf".into(),
        }
    }
}

impl std::str::FromStr for PNorm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" | "infinity" | "oo" => Ok(PNorm::Infinity),
            other => other
                .parse::<f64>()
                .map_err(|_| Error::Domain(format!("cannot parse Schatten order '{other}'")))
                .and_then(|p| PNorm::Finite(p).validate()),
        }
    }
}

/// How a reported distance was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    SpectralSum,
    ClosedForm,
    Asymptotic,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::SpectralSum => "spectral_sum",
            Method::ClosedForm => "closed_form",
            Method::Asymptotic => "asymptotic",
        }
    }
}

/// Reporting label for the asymptotic behaviour of the trace distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Vanishing,
    Constant,
    Saturating,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Vanishing => "vanishing",
            Regime::Constant => "constant",
            Regime::Saturating => "saturating",
        }
    }
}

/// A Schatten-norm value ‖ρ_R − ρ_C‖_p together with its provenance. The
/// stored value is the norm itself; trace distance is half the p = 1 value.
#[derive(Debug, Clone)]
pub struct DistanceReport {
    pub d: u64,
    pub t: u64,
    pub p: PNorm,
    pub exact: Option<Rat>,
    pub float: f64,
    pub method: Method,
    pub regime: Option<Regime>,
}

#[derive(Debug, Serialize)]
pub struct DistanceReportJson {
    pub d: u64,
    pub t: u64,
    pub p: String,
    pub exact: Option<[String; 2]>,
    pub float: f64,
    pub method: &'static str,
    pub regime: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_distance: Option<[String; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_distance_float: Option<f64>,
}

impl DistanceReport {
    pub fn to_json(&self) -> DistanceReportJson {
        let is_p1 = matches!(self.p, PNorm::Finite(p) if p == 1.0);
        let half = self.exact.as_ref().filter(|_| is_p1).map(|e| {
            let h = e / rat(2, 1);
            [h.numer().to_string(), h.denom().to_string()]
        });
        DistanceReportJson {
            d: self.d,
            t: self.t,
            p: self.p.label(),
            exact: self
                .exact
                .as_ref()
                .map(|e| [e.numer().to_string(), e.denom().to_string()]),
            float: self.float,
            method: self.method.name(),
            regime: self.regime.map(Regime::name),
            trace_distance: half,
            trace_distance_float: is_p1.then_some(self.float / 2.0),
        }
    }
}

/// ‖ρ_R − ρ_C‖_p = (Σ_k α_k |λ_k − μ|^p)^{1/p}, from the closed-form spectra.
///
/// Exact rationals are attached for p = 1 and p = ∞; other orders are
/// evaluated in log space so huge multiplicities cannot overflow.
pub fn schatten_distance_real_vs_complex(d: u64, t: u64, p: PNorm) -> Result<DistanceReport> {
    p.validate()?;
    let spectrum = real_haar_spectrum(d, t)?;
    let mu = complex_haar_eigenvalue(d, t);
    let (exact, float) = match p {
        PNorm::Finite(order) if order == 1.0 => {
            let sum: Rat = spectrum
                .lines
                .iter()
                .map(|l| {
                    rat_from_nats(l.multiplicity.clone(), BigNat::one())
                        * (&l.eigenvalue - &mu).abs()
                })
                .sum();
            let f = rat_to_f64(&sum);
            (Some(sum), f)
        }
        PNorm::Infinity => {
            let top = &spectrum.lines.last().unwrap().eigenvalue - &mu;
            let bottom = &mu - &spectrum.lines[0].eigenvalue;
            let value = top.max(bottom);
            let f = rat_to_f64(&value);
            (Some(value), f)
        }
        PNorm::Finite(order) => {
            let mut sum = 0.0f64;
            for l in &spectrum.lines {
                let gap = (&l.eigenvalue - &mu).abs();
                if let Some(ln_gap) = rat_ln_abs(&gap) {
                    sum += (big_ln(&l.multiplicity) + order * ln_gap).exp();
                }
            }
            (None, sum.powf(1.0 / order))
        }
    };
    Ok(DistanceReport { d, t, p, exact, float, method: Method::SpectralSum, regime: None })
}

/// Exact validity test for the closed-form trace distance:
/// t!(d−2)!!/(2(d+2t−4)!!) ≥ C(d+t−1, t)^{−1}.
pub fn closed_form_condition(d: u64, t: u64) -> bool {
    debug_assert!(d >= 2 && t >= 1);
    let lhs = rat_from_nats(
        factorial(t) * df(d as i64 - 2),
        BigNat::from(2u32) * df((d + 2 * t - 4) as i64),
    );
    lhs >= complex_haar_eigenvalue(d, t)
}

/// Log-space version of `closed_form_condition` for dimensions where the
/// exact integers are impractical.
pub fn closed_form_condition_f64(d: u64, t: u64) -> bool {
    let lhs = log_factorial(t) + log_double_factorial(d - 2)
        - std::f64::consts::LN_2
        - log_double_factorial(d + 2 * t - 4);
    let rhs = -(log_factorial(d + t - 1) - log_factorial(t) - log_factorial(d - 1));
    lhs >= rhs
}

/// Closed-form trace distance
/// (1 − t(t−1)/((d+t−1)(d+t−2))) (1 − (d+t−1)!/((d−1)!!(d+2t−2)!!)),
/// valid exactly when `closed_form_condition` holds. Equals half the p = 1
/// spectral sum on its validity region.
pub fn closed_form_trace_distance(d: u64, t: u64) -> Result<Rat> {
    if !closed_form_condition(d, t) {
        return Err(Error::Precondition(format!(
            "closed form needs t!(d-2)!!/(2(d+2t-4)!!) >= 1/C(d+t-1,t); not satisfied at d = {d}, \
             t = {t} — use the spectral sum instead"
        )));
    }
    let first = Rat::one()
        - rat_from_nats(
            BigNat::from(t * (t - 1)),
            BigNat::from((d + t - 1) * (d + t - 2)),
        );
    let second = Rat::one()
        - rat_from_nats(
            factorial(d + t - 1),
            df(d as i64 - 1) * df((d + 2 * t - 2) as i64),
        );
    Ok(first * second)
}

/// The closed form evaluated through log-gamma, for dimensions far beyond the
/// exact-integer range. Relative error stays within ~1e−10.
pub fn closed_form_trace_distance_f64(d: u64, t: u64) -> f64 {
    let first = 1.0 - (t as f64 * (t as f64 - 1.0)) / ((d + t - 1) as f64 * (d + t - 2) as f64);
    let log_ratio =
        log_factorial(d + t - 1) - log_double_factorial(d - 1) - log_double_factorial(d + 2 * t - 2);
    first * (1.0 - log_ratio.exp())
}

/// Upper end of the copy range in which the closed form is guaranteed to hold
/// for large d: (5 + √(9 + 8 d ln(d/2)))/2.
pub fn asymptotic_validity_window(d: u64) -> f64 {
    let df64 = d as f64;
    (5.0 + (9.0 + 8.0 * df64 * (df64 / 2.0).ln()).sqrt()) / 2.0
}

/// Leading-order trace distance 1 − e^{−t(t−1)/(2d)} with a regime label:
/// vanishing for t ≤ d^0.45, constant for t/√d ∈ [0.1, √2], saturating
/// beyond (where the value is pinned to 1). The labels are reporting aids
/// only and never feed back into any computation.
pub fn asymptotic_trace_distance(d: u64, t: u64) -> Result<(f64, Regime)> {
    let window = asymptotic_validity_window(d);
    if (t as f64) >= window {
        return Err(Error::UnsupportedRegime(format!(
            "t = {t} lies outside the validity window t < {window:.2} at d = {d}"
        )));
    }
    let df64 = d as f64;
    let tf64 = t as f64;
    let ratio = tf64 / df64.sqrt();
    let regime = if tf64 <= df64.powf(0.45) {
        Regime::Vanishing
    } else if (0.1..=std::f64::consts::SQRT_2).contains(&ratio) {
        Regime::Constant
    } else {
        Regime::Saturating
    };
    let value = match regime {
        Regime::Saturating => 1.0,
        _ => 1.0 - (-tf64 * (tf64 - 1.0) / (2.0 * df64)).exp(),
    };
    Ok((value, regime))
}

/// Exact trace distance between the binary-phase and complex-Haar moment
/// operators: 1 − C(d+t−1, t)^{−1} Σ_k C(d, t−2k). Valid for t ≤ d.
pub fn binary_phase_trace_distance(d: u64, t: u64) -> Result<Rat> {
    if d < 2 || t < 1 {
        return Err(Error::Domain(format!("need d >= 2 and t >= 1, got d = {d}, t = {t}")));
    }
    if t > d {
        return Err(Error::UnsupportedRegime(format!(
            "binary-phase trace distance requires t <= d (got t = {t}, d = {d})"
        )));
    }
    let rank: BigNat = (0..=t / 2).map(|k| binomial(d as i64, t - 2 * k)).sum();
    Ok(Rat::one() - rat_from_nats(rank, symmetric_dimension(d, t)))
}
