//! Closed-form spectra of the t-copy moment operators: the real-Haar
//! eigenvalue/multiplicity ladder, the flat complex-Haar spectrum, the
//! binary-phase equivalence-class spectrum, and harmonic-subspace dimensions.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::combinatorics::{binomial, df, factorial, rat_from_nats, rat_recip, BigNat, Rat};
use crate::error::{Error, Result};

/// One eigenspace of the real-Haar moment operator: level index k,
/// eigenvalue λ_k, multiplicity α_k.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralLine {
    pub k: u64,
    pub eigenvalue: Rat,
    pub multiplicity: BigNat,
}

/// Full spectrum of the t-copy real-Haar moment operator, levels ordered by
/// k = 0 … ⌊t/2⌋. Eigenvalues strictly increase with k.
#[derive(Debug, Clone, PartialEq)]
pub struct RealHaarSpectrum {
    pub d: u64,
    pub t: u64,
    pub lines: Vec<SpectralLine>,
}

/// Spectrum of a moment operator that is not full-rank on the symmetric
/// subspace: positive (eigenvalue, multiplicity) entries plus the dimension
/// of the kernel inside the ambient symmetric subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpectrum {
    pub d: u64,
    pub t: u64,
    pub entries: Vec<(Rat, BigNat)>,
    pub ambient_dim: BigNat,
    pub zero_multiplicity: BigNat,
}

/// Dimension of the symmetric subspace, C(d+t−1, t).
pub fn symmetric_dimension(d: u64, t: u64) -> BigNat {
    binomial((d + t - 1) as i64, t)
}

/// The flat complex-Haar eigenvalue 1/C(d+t−1, t).
pub fn complex_haar_eigenvalue(d: u64, t: u64) -> Rat {
    rat_recip(symmetric_dimension(d, t))
}

fn check_d_t(d: u64, t: u64) -> Result<()> {
    if d < 2 {
        return Err(Error::Domain(format!("dimension d must be >= 2, got {d}")));
    }
    if t < 1 {
        return Err(Error::Domain(format!("copy count t must be >= 1, got {t}")));
    }
    Ok(())
}

/// Eigenvalue of level k:  λ_k = t!(d−2)!! / ((2k)!! (d+2t−2k−2)!!).
pub fn real_haar_eigenvalue(d: u64, t: u64, k: u64) -> Rat {
    let num = factorial(t) * df(d as i64 - 2);
    let den = df(2 * k as i64) * df((d + 2 * t - 2 * k - 2) as i64);
    rat_from_nats(num, den)
}

/// Multiplicity of level k:  α_k = C(d+t−2k−1, d−1) − C(d+t−2k−3, d−1).
pub fn real_haar_multiplicity(d: u64, t: u64, k: u64) -> BigNat {
    harmonic_dimension(d, t - 2 * k)
}

/// dim H_d^m = C(d+m−1, d−1) − C(d+m−3, d−1), with the C(−1, 1) = 0
/// convention supplied by `binomial`.
pub fn harmonic_dimension(d: u64, m: u64) -> BigNat {
    binomial((d + m) as i64 - 1, d - 1) - binomial((d + m) as i64 - 3, d - 1)
}

/// Complete spectrum of the t-copy real-Haar moment operator.
///
/// The level index runs over the inclusive range k = 0 … ⌊t/2⌋; that range is
/// the one under which the eigenvalue-weighted multiplicities sum to exactly 1.
pub fn real_haar_spectrum(d: u64, t: u64) -> Result<RealHaarSpectrum> {
    check_d_t(d, t)?;
    let lines = (0..=t / 2)
        .map(|k| SpectralLine {
            k,
            eigenvalue: real_haar_eigenvalue(d, t, k),
            multiplicity: real_haar_multiplicity(d, t, k),
        })
        .collect();
    Ok(RealHaarSpectrum { d, t, lines })
}

/// Spectrum of the t-copy complex-Haar moment operator: the single eigenvalue
/// 1/C(d+t−1, t) with multiplicity C(d+t−1, t).
pub fn complex_haar_spectrum(d: u64, t: u64) -> Result<EnsembleSpectrum> {
    check_d_t(d, t)?;
    let dim = symmetric_dimension(d, t);
    Ok(EnsembleSpectrum {
        d,
        t,
        entries: vec![(rat_recip(dim.clone()), dim.clone())],
        ambient_dim: dim,
        zero_multiplicity: BigNat::zero(),
    })
}

/// Matrices over [d]^t switch to the closed-form class-size count above this
/// many basis tuples.
const CLASS_ENUMERATION_LIMIT: u64 = 1 << 16;

/// Spectrum of the t-copy binary-phase moment operator, obtained from the
/// equivalence classes of [d]^t under the all-even-counts relation. Each class
/// with odd-profile size s = t−2k contributes eigenvalue |class|/d^t with
/// multiplicity C(d, s). Requires t ≤ d: the class analysis (in particular the
/// size-t! smallest class) assumes every profile fits inside the alphabet.
pub fn binary_phase_spectrum(d: u64, t: u64) -> Result<EnsembleSpectrum> {
    check_d_t(d, t)?;
    if t > d {
        return Err(Error::UnsupportedRegime(format!(
            "binary-phase spectrum requires t <= d (got t = {t}, d = {d})"
        )));
    }
    let dt = BigNat::from(d).pow(t as u32);
    let use_enumeration = (d as f64).powi(t as i32) <= CLASS_ENUMERATION_LIMIT as f64;
    let mut entries: Vec<(Rat, BigNat)> = Vec::new();
    for k in 0..=t / 2 {
        let s = t - 2 * k;
        let size = if use_enumeration {
            BigNat::from(binary_class_size_enumerated(d, t, s))
        } else {
            binary_class_size(d, t, s)
        };
        let eig = rat_from_nats(size, dt.clone());
        let mult = binomial(d as i64, s);
        entries.push((eig, mult));
    }
    entries.sort_by(|a, b| b.0.cmp(&a.0));
    let mut merged: Vec<(Rat, BigNat)> = Vec::new();
    for (eig, mult) in entries {
        match merged.last_mut() {
            Some(last) if last.0 == eig => last.1 += mult,
            _ => merged.push((eig, mult)),
        }
    }
    let ambient = symmetric_dimension(d, t);
    let rank: BigNat = merged.iter().map(|(_, m)| m.clone()).sum();
    Ok(EnsembleSpectrum {
        d,
        t,
        zero_multiplicity: &ambient - rank,
        entries: merged,
        ambient_dim: ambient,
    })
}

/// Size of the equivalence class whose odd-count symbols are exactly
/// {0, …, s−1}, counted by direct enumeration of [d]^t. This is the oracle
/// of record for class sizes; `binary_class_size` is the scalable route.
pub fn binary_class_size_enumerated(d: u64, t: u64, s: u64) -> u64 {
    let mut count = 0u64;
    let mut tuple = vec![0u64; t as usize];
    loop {
        let mut parity = vec![false; d as usize];
        for &z in &tuple {
            parity[z as usize] = !parity[z as usize];
        }
        let odd_matches = parity.iter().enumerate().all(|(i, &p)| p == ((i as u64) < s));
        if odd_matches {
            count += 1;
        }
        // lexicographic successor
        let mut pos = t as usize;
        while pos > 0 {
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < d {
                break;
            }
            tuple[pos] = 0;
            if pos == 0 {
                return count;
            }
        }
        if t == 0 {
            return count;
        }
    }
}

/// Closed-form count of t-tuples over [d] whose odd-count symbols are exactly
/// a fixed s-element set:
///
///   t! [z^t] (sinh z)^s (cosh z)^{d−s}
///     = 2^{−d} Σ_{i≤s} Σ_{j≤d−s} C(s,i) C(d−s,j) (−1)^{s−i} (2i+2j−d)^t .
pub fn binary_class_size(d: u64, t: u64, s: u64) -> BigNat {
    let mut total = BigInt::zero();
    for i in 0..=s {
        for j in 0..=(d - s) {
            let base = BigInt::from(2 * (i + j) as i64 - d as i64);
            let mut term = BigInt::from(binomial(s as i64, i)) * BigInt::from(binomial((d - s) as i64, j));
            term *= base.pow(t as u32);
            if (s - i) % 2 == 1 {
                total -= term;
            } else {
                total += term;
            }
        }
    }
    debug_assert!(!total.is_negative());
    let total = total.to_biguint().unwrap();
    let denom = BigNat::one() << d;
    debug_assert!((&total % &denom).is_zero());
    total / denom
}

impl RealHaarSpectrum {
    pub fn ambient_dim(&self) -> BigNat {
        symmetric_dimension(self.d, self.t)
    }

    /// The complex-Haar eigenvalue μ the levels are compared against.
    pub fn mu(&self) -> Rat {
        complex_haar_eigenvalue(self.d, self.t)
    }

    /// Σ_k α_k λ_k^m, the exact m-th spectral moment.
    pub fn spectral_moment(&self, m: u32) -> Rat {
        self.lines
            .iter()
            .map(|l| Rat::from(BigInt::from(l.multiplicity.clone())) * pow_rat(&l.eigenvalue, m))
            .sum()
    }

    /// Checks every structural invariant; returns a description of the first
    /// violation, if any.
    pub fn validate(&self) -> Result<()> {
        let one = Rat::one();
        if self.spectral_moment(1) != one {
            return Err(Error::Precondition("spectrum does not have unit trace".into()));
        }
        let rank: BigNat = self.lines.iter().map(|l| l.multiplicity.clone()).sum();
        if rank != self.ambient_dim() {
            return Err(Error::Precondition(
                "multiplicities do not sum to the symmetric-subspace dimension".into(),
            ));
        }
        for w in self.lines.windows(2) {
            if w[0].eigenvalue >= w[1].eigenvalue {
                return Err(Error::Precondition("eigenvalues not strictly increasing in k".into()));
            }
        }
        for l in &self.lines {
            if !l.eigenvalue.is_positive() || l.multiplicity.is_zero() {
                return Err(Error::Precondition("non-positive line".into()));
            }
        }
        if self.t >= 2 && self.lines[0].eigenvalue >= self.mu() {
            return Err(Error::Precondition("λ_0 must lie strictly below 1/C(d+t−1,t)".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> SpectrumJson {
        SpectrumJson {
            d: self.d,
            t: self.t,
            lines: self
                .lines
                .iter()
                .map(|l| LineJson {
                    k: l.k,
                    eig_num: l.eigenvalue.numer().to_string(),
                    eig_den: l.eigenvalue.denom().to_string(),
                    mult: l.multiplicity.to_string(),
                })
                .collect(),
            ambient_dim: self.ambient_dim().to_string(),
            zero_multiplicity: None,
        }
    }
}

impl EnsembleSpectrum {
    /// Σ eigenvalue·multiplicity, which must be exactly 1 for a density matrix.
    pub fn trace(&self) -> Rat {
        self.entries
            .iter()
            .map(|(e, m)| e * Rat::from(BigInt::from(m.clone())))
            .sum()
    }

    pub fn rank(&self) -> BigNat {
        self.entries.iter().map(|(_, m)| m.clone()).sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.trace() != Rat::one() {
            return Err(Error::Precondition("ensemble spectrum does not have unit trace".into()));
        }
        if self.rank() + self.zero_multiplicity.clone() != self.ambient_dim {
            return Err(Error::Precondition(
                "rank plus kernel dimension must equal the ambient dimension".into(),
            ));
        }
        Ok(())
    }

    pub fn to_json(&self) -> SpectrumJson {
        SpectrumJson {
            d: self.d,
            t: self.t,
            lines: self
                .entries
                .iter()
                .enumerate()
                .map(|(i, (e, m))| LineJson {
                    k: i as u64,
                    eig_num: e.numer().to_string(),
                    eig_den: e.denom().to_string(),
                    mult: m.to_string(),
                })
                .collect(),
            ambient_dim: self.ambient_dim.to_string(),
            zero_multiplicity: Some(self.zero_multiplicity.to_string()),
        }
    }
}

fn pow_rat(r: &Rat, m: u32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..m {
        acc *= r;
    }
    acc
}

/// Serialized form shared by all spectra.
#[derive(Debug, Serialize)]
pub struct SpectrumJson {
    pub d: u64,
    pub t: u64,
    pub lines: Vec<LineJson>,
    pub ambient_dim: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero_multiplicity: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct LineJson {
    pub k: u64,
    pub eig_num: String,
    pub eig_den: String,
    pub mult: String,
}
