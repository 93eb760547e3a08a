//! Brute-force and Monte Carlo oracles for the moment operators: exact
//! d^t × d^t rational matrices built entry-by-entry, Gaussian direction
//! moments, Haar state samplers, and empirical moment estimation.
//!
//! Every matrix and vector in the crate shares one basis convention: the
//! tuples of [d]^t in lexicographic order with the leftmost tensor factor
//! most significant, so |x_1…x_t⟩ sits at index Σ x_i d^(t−1−i).

use nalgebra::DMatrix;
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{df, rat_from_nats, rat_to_f64, BigNat, Rat};
use crate::error::{Error, Result};
use crate::ratlin;

/// Default cap on the side length d^t of dense exact matrices.
pub const DEFAULT_MATRIX_CAP: usize = 4096;

/// The seeded generator used everywhere randomness appears: ChaCha12, with
/// the worker index as the stream id so partitioned runs stay reproducible.
pub const RNG_ALGORITHM: &str = "ChaCha12 (rand_chacha), worker index as stream id";

/// The ensembles whose t-copy moment operators this crate handles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ensemble {
    RealHaar,
    ComplexHaar,
    BinaryPhase,
}

impl Ensemble {
    pub fn name(self) -> &'static str {
        match self {
            Ensemble::RealHaar => "real_haar",
            Ensemble::ComplexHaar => "complex_haar",
            Ensemble::BinaryPhase => "binary_phase",
        }
    }
}

/// Lexicographic index of a tuple in [d]^t.
pub fn lex_index(x: &[u64], d: u64) -> usize {
    x.iter().fold(0usize, |acc, &v| acc * d as usize + v as usize)
}

/// Tuple at a lexicographic index.
pub fn lex_tuple(mut index: usize, d: u64, t: u64) -> Vec<u64> {
    let mut x = vec![0u64; t as usize];
    for i in (0..t as usize).rev() {
        x[i] = (index % d as usize) as u64;
        index /= d as usize;
    }
    x
}

/// Visits every tuple of [d]^t in lexicographic order.
pub(crate) fn for_each_tuple(d: u64, t: u64, mut f: impl FnMut(usize, &[u64])) {
    let n = (d as usize).pow(t as u32);
    let mut x = vec![0u64; t as usize];
    for idx in 0..n {
        f(idx, &x);
        for i in (0..t as usize).rev() {
            x[i] += 1;
            if x[i] < d {
                break;
            }
            x[i] = 0;
        }
    }
}

/// Per-symbol occurrence counts in the concatenation of two tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddCountProfile {
    pub counts: Vec<u64>,
}

/// n_i(x, y): the number of times each symbol of [d] appears in x‖y.
pub fn odd_count_profile(x: &[u64], y: &[u64], d: u64) -> Result<OddCountProfile> {
    let mut counts = vec![0u64; d as usize];
    for &v in x.iter().chain(y.iter()) {
        if v >= d {
            return Err(Error::Domain(format!("symbol {v} outside [{d}]")));
        }
        counts[v as usize] += 1;
    }
    Ok(OddCountProfile { counts })
}

/// x ∼ y iff no symbol appears an odd number of times in the concatenation.
pub fn equivalent(x: &[u64], y: &[u64]) -> bool {
    debug_assert_eq!(x.len(), y.len());
    let d = x.iter().chain(y.iter()).max().map_or(0, |&m| m + 1);
    let mut parity = vec![false; d as usize];
    for &v in x.iter().chain(y.iter()) {
        parity[v as usize] = !parity[v as usize];
    }
    parity.iter().all(|&p| !p)
}

/// Dense symmetric matrix with exact rational entries over the lexicographic
/// basis of [d]^t.
#[derive(Debug, Clone, PartialEq)]
pub struct RatMatrix {
    n: usize,
    entries: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(n: usize) -> Self {
        RatMatrix { n, entries: vec![Rat::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            *m.at_mut(i, i) = Rat::one();
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i * self.n + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Rat {
        &mut self.entries[i * self.n + j]
    }

    pub fn trace(&self) -> Rat {
        (0..self.n).map(|i| self.at(i, i).clone()).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.at(i, j) == self.at(j, i)))
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.n, other.n);
        let mut out = RatMatrix::zeros(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..self.n {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        *out.at_mut(i, j) += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.at(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn sub(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.n, other.n);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        RatMatrix { n: self.n, entries }
    }

    pub fn kron(&self, other: &RatMatrix) -> RatMatrix {
        let n = self.n * other.n;
        let mut out = RatMatrix::zeros(n);
        for i in 0..self.n {
            for j in 0..self.n {
                let a = self.at(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.n {
                    for l in 0..other.n {
                        let b = other.at(k, l);
                        if !b.is_zero() {
                            *out.at_mut(i * other.n + k, j * other.n + l) = a * b;
                        }
                    }
                }
            }
        }
        out
    }

    /// Exact tr(M^m). The matrix is rescaled to a common denominator first so
    /// the powering runs over integers.
    pub fn trace_power(&self, m: u32) -> Rat {
        assert!(m >= 1);
        if m == 1 {
            return self.trace();
        }
        let mut lcm = BigUint::one();
        for e in &self.entries {
            lcm = lcm.lcm(&e.denom().to_biguint().unwrap());
        }
        let lcm_int = BigInt::from(lcm.clone());
        let scaled: Vec<BigInt> = self
            .entries
            .iter()
            .map(|e| e.numer() * (&lcm_int / e.denom()))
            .collect();
        let mut power = scaled.clone();
        for _ in 2..m {
            power = int_mat_mul(&power, &scaled, self.n);
        }
        // tr(P·S) without materializing the final product.
        let mut tr = BigInt::zero();
        for i in 0..self.n {
            for k in 0..self.n {
                tr += &power[i * self.n + k] * &scaled[k * self.n + i];
            }
        }
        let denom = BigInt::from(lcm).pow(m);
        Rat::new(tr, denom)
    }

    /// Rank over the rationals by exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<Rat>> = (0..self.n)
            .map(|i| self.entries[i * self.n..(i + 1) * self.n].to_vec())
            .collect();
        ratlin::rank(rows, self.n)
    }

    /// Exact inverse; `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        let rows: Vec<Vec<Rat>> = (0..self.n)
            .map(|i| self.entries[i * self.n..(i + 1) * self.n].to_vec())
            .collect();
        let inv = ratlin::invert(rows)?;
        let entries = inv.into_iter().flatten().collect();
        Some(RatMatrix { n: self.n, entries })
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| rat_to_f64(self.at(i, j)))
    }

    pub fn to_json(&self) -> RatMatrixJson {
        RatMatrixJson {
            n: self.n,
            basis: "lex",
            entries: self
                .entries
                .iter()
                .map(|e| [e.numer().to_string(), e.denom().to_string()])
                .collect(),
        }
    }
}

fn int_mat_mul(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let v = &a[i * n + k];
            if v.is_zero() {
                continue;
            }
            for j in 0..n {
                let w = &b[k * n + j];
                if !w.is_zero() {
                    out[i * n + j] += v * w;
                }
            }
        }
    }
    out
}

#[derive(Debug, Serialize)]
pub struct RatMatrixJson {
    pub n: usize,
    pub basis: &'static str,
    pub entries: Vec<[String; 2]>,
}

/// Empirical moment matrix: double-precision entries plus the sample count
/// that produced them.
#[derive(Debug, Clone)]
pub struct FloatMatrix {
    pub n: usize,
    pub entries: Vec<f64>,
    pub sample_count: u64,
}

impl FloatMatrix {
    pub fn zeros(n: usize) -> Self {
        FloatMatrix { n, entries: vec![0.0; n * n], sample_count: 0 }
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn symmetrize(&mut self) {
        for i in 0..self.n {
            for j in i + 1..self.n {
                let avg = 0.5 * (self.entries[i * self.n + j] + self.entries[j * self.n + i]);
                self.entries[i * self.n + j] = avg;
                self.entries[j * self.n + i] = avg;
            }
        }
    }

    /// Largest |empirical − exact| over all entries.
    pub fn max_abs_deviation(&self, exact: &RatMatrix) -> f64 {
        assert_eq!(self.n, exact.n());
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                worst = worst.max((self.at(i, j) - rat_to_f64(exact.at(i, j))).abs());
            }
        }
        worst
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.at(i, j))
    }

    /// Row-major CSV: a header of column labels, then one line per row.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = (0..self.n).map(|j| format!("c{j}")).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| format!("{}", self.at(i, j))).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

fn check_cap(d: u64, t: u64, cap: usize) -> Result<usize> {
    let n = (d as f64).powi(t as i32);
    if !(n <= cap as f64) {
        return Err(Error::ResourceCap { requested: n as usize, cap });
    }
    Ok((d as usize).pow(t as u32))
}

/// Exact t-copy real-Haar moment matrix: entry (x, y) is
/// (d−2)!!/(d+2t−2)!! · Π_i (n_i(x,y)−1)!! when x ∼ y and 0 otherwise.
pub fn build_real_moment_matrix(d: u64, t: u64, cap: usize) -> Result<RatMatrix> {
    let n = check_cap(d, t, cap)?;
    let prefactor = rat_from_nats(df(d as i64 - 2), df((d + 2 * t - 2) as i64));
    let tuples = all_tuples(d, t, n);
    let mut m = RatMatrix::zeros(n);
    for (i, x) in tuples.iter().enumerate() {
        for (j, y) in tuples.iter().enumerate().skip(i) {
            let counts = odd_count_profile(x, y, d)?.counts;
            if counts.iter().any(|&c| c % 2 == 1) {
                continue;
            }
            let mut num = BigNat::one();
            for &c in &counts {
                num *= df(c as i64 - 1);
            }
            let value = &prefactor * rat_from_nats(num, BigNat::one());
            *m.at_mut(i, j) = value.clone();
            if j != i {
                *m.at_mut(j, i) = value;
            }
        }
    }
    Ok(m)
}

/// Projector onto the symmetric subspace, assembled as (1/t!) Σ_π P_π over
/// all t! permutation operators. The enumeration bounds t at 8.
pub fn build_sym_projector(d: u64, t: u64, cap: usize) -> Result<RatMatrix> {
    let n = check_cap(d, t, cap)?;
    if t > 8 {
        return Err(Error::Precondition(format!(
            "symmetric projector enumerates t! permutations and requires t <= 8, got {t}"
        )));
    }
    use itertools::Itertools;
    let t_fact = crate::combinatorics::factorial(t);
    let weight = rat_from_nats(BigNat::one(), t_fact);
    let mut m = RatMatrix::zeros(n);
    let tuples = all_tuples(d, t, n);
    let mut permuted = vec![0u64; t as usize];
    for (j, x) in tuples.iter().enumerate() {
        for perm in (0..t as usize).permutations(t as usize) {
            for (slot, &src) in perm.iter().enumerate() {
                permuted[slot] = x[src];
            }
            let i = lex_index(&permuted, d);
            *m.at_mut(i, j) += &weight;
        }
    }
    Ok(m)
}

/// Exact t-copy binary-phase moment matrix: entry (x, y) = 1/d^t when x ∼ y.
pub fn build_binary_phase_matrix(d: u64, t: u64, cap: usize) -> Result<RatMatrix> {
    let n = check_cap(d, t, cap)?;
    let value = rat_from_nats(BigNat::one(), BigNat::from(d).pow(t as u32));
    let tuples = all_tuples(d, t, n);
    let mut m = RatMatrix::zeros(n);
    for (i, x) in tuples.iter().enumerate() {
        for (j, y) in tuples.iter().enumerate().skip(i) {
            if equivalent(x, y) {
                *m.at_mut(i, j) = value.clone();
                *m.at_mut(j, i) = value.clone();
            }
        }
    }
    Ok(m)
}

fn all_tuples(d: u64, t: u64, n: usize) -> Vec<Vec<u64>> {
    let mut tuples = Vec::with_capacity(n);
    for_each_tuple(d, t, |_, x| tuples.push(x.to_vec()));
    tuples
}

/// E[Π_i (W_i/‖W‖)^{n_i}] for a standard Gaussian W in R^d:
/// (d−2)!!/(d+N−2)!! · Π_i (n_i−1)!! when every exponent is even, else 0.
pub fn gaussian_direction_moment(profile: &[u64]) -> Rat {
    if profile.iter().any(|&n| n % 2 == 1) {
        return Rat::zero();
    }
    let d = profile.len() as u64;
    let total: u64 = profile.iter().sum();
    let mut num = df(d as i64 - 2);
    for &n in profile {
        num *= df(n as i64 - 1);
    }
    rat_from_nats(num, df((d + total - 2) as i64))
}

/// Unit vector distributed as the first column of a Haar orthogonal matrix:
/// a normalized standard Gaussian vector.
pub fn sample_real_haar_state<R: Rng + ?Sized>(d: u64, rng: &mut R) -> Vec<f64> {
    let mut v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    v
}

/// Haar random complex state (A + iB)/√(‖A‖² + ‖B‖²) with independent
/// standard Gaussian A, B.
pub fn sample_complex_haar_state<R: Rng + ?Sized>(d: u64, rng: &mut R) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..d)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= norm);
    v
}

/// Binary phase state (1/√d) Σ_x (−1)^{f(x)} |x⟩ for a uniformly random f.
pub fn sample_binary_phase_state<R: Rng + ?Sized>(d: u64, rng: &mut R) -> Vec<f64> {
    let scale = 1.0 / (d as f64).sqrt();
    (0..d)
        .map(|_| if rng.random::<bool>() { -scale } else { scale })
        .collect()
}

/// Haar orthogonal matrix via QR of a Gaussian matrix, with the R diagonal
/// sign-fixed so the factorization is unique.
pub fn sample_orthogonal<R: Rng + ?Sized>(d: u64, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::from_fn(d as usize, d as usize, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d as usize {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// t-fold tensor power of a vector, in the shared lexicographic basis.
pub fn tensor_power_f64(v: &[f64], t: u64) -> Vec<f64> {
    let mut out = vec![1.0];
    for _ in 0..t {
        let mut next = Vec::with_capacity(out.len() * v.len());
        for &a in &out {
            for &b in v {
                next.push(a * b);
            }
        }
        out = next;
    }
    out
}

fn tensor_power_c64(v: &[Complex64], t: u64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(1.0, 0.0)];
    for _ in 0..t {
        let mut next = Vec::with_capacity(out.len() * v.len());
        for &a in &out {
            for &b in v {
                next.push(a * b);
            }
        }
        out = next;
    }
    out
}

/// Empirical t-copy moment operator: the average of (|ψ⟩⟨ψ|)^{⊗t} over
/// `samples` draws, symmetrized. For the complex ensemble the real part is
/// returned; the exact complex-Haar moment operator is real symmetric, so
/// nothing is lost in expectation and the imaginary plane averages to zero.
///
/// Work is split across `workers` independent ChaCha12 streams (stream id =
/// worker index) and merged in worker order, so the result is a pure function
/// of (seed, workers, samples) no matter how the work is scheduled.
pub fn estimate_moment_operator(
    d: u64,
    t: u64,
    samples: u64,
    seed: u64,
    workers: u64,
    ensemble: Ensemble,
    cap: usize,
) -> Result<FloatMatrix> {
    let n = check_cap(d, t, cap)?;
    if samples == 0 {
        return Err(Error::Precondition("sample count must be >= 1".into()));
    }
    if workers == 0 {
        return Err(Error::Precondition("worker count must be >= 1".into()));
    }
    let base = samples / workers;
    let extra = samples % workers;
    let partials: Vec<Vec<f64>> = (0..workers)
        .into_par_iter()
        .map(|w| {
            let quota = base + u64::from(w < extra);
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.set_stream(w);
            accumulate_samples(d, t, n, quota, ensemble, &mut rng)
        })
        .collect();
    let mut sum = vec![0.0f64; n * n];
    for p in partials {
        for (s, v) in sum.iter_mut().zip(p) {
            *s += v;
        }
    }
    let inv = 1.0 / samples as f64;
    sum.iter_mut().for_each(|v| *v *= inv);
    let mut m = FloatMatrix { n, entries: sum, sample_count: samples };
    m.symmetrize();
    Ok(m)
}

fn accumulate_samples(
    d: u64,
    t: u64,
    n: usize,
    quota: u64,
    ensemble: Ensemble,
    rng: &mut ChaCha12Rng,
) -> Vec<f64> {
    let mut acc = vec![0.0f64; n * n];
    for _ in 0..quota {
        match ensemble {
            Ensemble::RealHaar | Ensemble::BinaryPhase => {
                let psi = match ensemble {
                    Ensemble::RealHaar => sample_real_haar_state(d, rng),
                    _ => sample_binary_phase_state(d, rng),
                };
                let v = tensor_power_f64(&psi, t);
                for i in 0..n {
                    let vi = v[i];
                    if vi == 0.0 {
                        continue;
                    }
                    for j in 0..n {
                        acc[i * n + j] += vi * v[j];
                    }
                }
            }
            Ensemble::ComplexHaar => {
                let psi = sample_complex_haar_state(d, rng);
                let v = tensor_power_c64(&psi, t);
                for i in 0..n {
                    let vi = v[i];
                    for j in 0..n {
                        // Re(v_i conj(v_j))
                        acc[i * n + j] += vi.re * v[j].re + vi.im * v[j].im;
                    }
                }
            }
        }
    }
    acc
}
