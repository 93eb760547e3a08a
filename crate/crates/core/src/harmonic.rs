//! Homogeneous polynomial algebra over d variables: the Bombieri inner
//! product, Laplacian kernels (harmonic subspaces), the isometric isomorphism
//! onto the symmetric subspace, explicit eigenvectors of the real-Haar moment
//! operator per level, and the optimal distinguishing projector Π₊.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_traits::{One, Zero};

use crate::combinatorics::{factorial, rat_from_nats, rat_to_f64, BigNat, Rat};
use crate::error::{Error, Result};
use crate::moments::{for_each_tuple, RatMatrix};
use crate::ratlin;
use crate::spectra::{complex_haar_eigenvalue, real_haar_spectrum};

/// Exponent vector of a monomial X_0^{a_0} … X_{d-1}^{a_{d-1}}.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial {
    pub exponents: Vec<u64>,
}

impl Monomial {
    pub fn new(exponents: Vec<u64>) -> Self {
        Monomial { exponents }
    }

    pub fn degree(&self) -> u64 {
        self.exponents.iter().sum()
    }
}

/// Homogeneous polynomial with exact rational coefficients, stored sparsely.
/// Zero coefficients are never kept, so equality is structural.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    d: usize,
    degree: u64,
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    /// The zero polynomial, tagged with the degree its context expects.
    pub fn zero(d: usize, degree: u64) -> Self {
        Poly { d, degree, terms: BTreeMap::new() }
    }

    /// Single-term polynomial c · X^a.
    pub fn monomial(d: usize, exponents: Vec<u64>, coeff: Rat) -> Self {
        assert_eq!(exponents.len(), d);
        let m = Monomial::new(exponents);
        let degree = m.degree();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(m, coeff);
        }
        Poly { d, degree, terms }
    }

    /// q = Σ_i X_i², the squared-radius quadratic.
    pub fn q(d: usize) -> Self {
        let mut p = Poly::zero(d, 2);
        for i in 0..d {
            let mut e = vec![0u64; d];
            e[i] = 2;
            p.add_term(Monomial::new(e), Rat::one());
        }
        p
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        debug_assert_eq!(m.exponents.len(), self.d);
        debug_assert_eq!(m.degree(), self.degree);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scaled(&self, c: &Rat) -> Poly {
        let mut out = Poly::zero(self.d, self.degree);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (m, v) in &other.terms {
            out.add_term(m.clone(), v.clone());
        }
        out
    }
}

/// Product of two homogeneous polynomials; degrees add.
pub fn multiply(p: &Poly, q: &Poly) -> Poly {
    assert_eq!(p.d, q.d);
    let mut out = Poly::zero(p.d, p.degree + q.degree);
    for (ma, ca) in &p.terms {
        for (mb, cb) in &q.terms {
            let exps: Vec<u64> = ma
                .exponents
                .iter()
                .zip(&mb.exponents)
                .map(|(a, b)| a + b)
                .collect();
            out.add_term(Monomial::new(exps), ca * cb);
        }
    }
    out
}

/// P · q^k.
pub fn q_power_multiply(p: &Poly, k: u64) -> Poly {
    let mut out = p.clone();
    let q = Poly::q(p.d);
    for _ in 0..k {
        out = multiply(&out, &q);
    }
    out
}

/// Bombieri inner product: monomial-diagonal with ⟨X^a, X^a⟩ = Π a_i!/t!.
pub fn bombieri_inner(p: &Poly, q: &Poly) -> Result<Rat> {
    if p.degree != q.degree {
        return Err(Error::Domain(format!(
            "Bombieri inner product needs equal degrees, got {} and {}",
            p.degree, q.degree
        )));
    }
    let t_fact = factorial(p.degree);
    let mut acc = Rat::zero();
    for (m, ca) in &p.terms {
        if let Some(cb) = q.terms.get(m) {
            let mut num = BigNat::one();
            for &a in &m.exponents {
                num *= factorial(a);
            }
            acc += ca * cb * rat_from_nats(num, t_fact.clone());
        }
    }
    Ok(acc)
}

/// Σ_i ∂²P/∂X_i², homogeneous of degree deg P − 2 (zero when deg P < 2).
pub fn laplacian(p: &Poly) -> Poly {
    let degree = p.degree.saturating_sub(2);
    let mut out = Poly::zero(p.d, degree);
    if p.degree < 2 {
        return out;
    }
    for (m, c) in &p.terms {
        for i in 0..p.d {
            let a = m.exponents[i];
            if a >= 2 {
                let mut e = m.exponents.clone();
                e[i] -= 2;
                let factor = rat_from_nats(BigNat::from(a * (a - 1)), BigNat::one());
                out.add_term(Monomial::new(e), c * factor);
            }
        }
    }
    out
}

/// All degree-m monomials over d variables, in lexicographic exponent order.
pub fn monomials_of_degree(d: usize, m: u64) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = vec![0u64; d];
    fill_monomials(&mut current, 0, m, &mut out);
    out
}

fn fill_monomials(current: &mut Vec<u64>, pos: usize, remaining: u64, out: &mut Vec<Monomial>) {
    if pos == current.len() - 1 {
        current[pos] = remaining;
        out.push(Monomial::new(current.clone()));
        return;
    }
    for v in 0..=remaining {
        current[pos] = v;
        fill_monomials(current, pos + 1, remaining - v, out);
    }
    current[pos] = 0;
}

/// Exact basis of the harmonic subspace H_d^m = ker Δ within the degree-m
/// homogeneous polynomials, from Gaussian elimination of the Laplacian in the
/// monomial basis. The basis is not canonical; consumers must stay
/// basis-independent.
pub fn harmonic_basis(d: u64, m: u64, cap: usize) -> Result<Vec<Poly>> {
    let source = monomials_of_degree(d as usize, m);
    if source.len() > cap {
        return Err(Error::ResourceCap { requested: source.len(), cap });
    }
    let target = if m >= 2 {
        monomials_of_degree(d as usize, m - 2)
    } else {
        Vec::new()
    };
    let target_index: BTreeMap<&Monomial, usize> =
        target.iter().enumerate().map(|(i, mo)| (mo, i)).collect();
    // One column per source monomial: its Laplacian in the target basis.
    let mut rows = vec![vec![Rat::zero(); source.len()]; target.len()];
    for (j, mono) in source.iter().enumerate() {
        let image = laplacian(&Poly::monomial(d as usize, mono.exponents.clone(), Rat::one()));
        for (tm, c) in image.terms() {
            rows[target_index[tm]][j] = c.clone();
        }
    }
    let kernel = ratlin::kernel_basis(rows, source.len());
    Ok(kernel
        .into_iter()
        .map(|coeffs| {
            let mut p = Poly::zero(d as usize, m);
            for (j, c) in coeffs.into_iter().enumerate() {
                p.add_term(source[j].clone(), c);
            }
            p
        })
        .collect())
}

/// Exact vector in the symmetric subspace of (R^d)^{⊗t}, over the shared
/// lexicographic basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SymVector {
    pub d: u64,
    pub t: u64,
    pub coefficients: Vec<Rat>,
}

impl SymVector {
    pub fn inner(&self, other: &SymVector) -> Rat {
        assert_eq!(self.coefficients.len(), other.coefficients.len());
        self.coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm_squared(&self) -> Rat {
        self.inner(self)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coefficients.iter().map(rat_to_f64).collect()
    }

    pub fn to_json(&self) -> SymVectorJson {
        SymVectorJson {
            d: self.d,
            t: self.t,
            basis: "lex",
            coefficients: self
                .coefficients
                .iter()
                .map(|c| [c.numer().to_string(), c.denom().to_string()])
                .collect(),
        }
    }
}

#[derive(Debug, serde::Serialize)]
pub struct SymVectorJson {
    pub d: u64,
    pub t: u64,
    pub basis: &'static str,
    pub coefficients: Vec<[String; 2]>,
}

#[derive(Debug, serde::Serialize)]
pub struct PolyJson {
    pub terms: Vec<PolyTermJson>,
}

#[derive(Debug, serde::Serialize)]
pub struct PolyTermJson {
    pub exponents: Vec<u64>,
    pub num: String,
    pub den: String,
}

impl Poly {
    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| PolyTermJson {
                    exponents: m.exponents.clone(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
    }
}

/// Image of a degree-t polynomial under the isomorphism
/// X^a ↦ Π_sym |0^{a_0}, …, (d−1)^{a_{d-1}}⟩: every rearrangement of the
/// canonical tuple picks up the coefficient c · Π a_i!/t!. The map is an
/// isometry from the Bombieri inner product.
pub fn poly_to_symvector(p: &Poly, cap: usize) -> Result<SymVector> {
    let d = p.d as u64;
    let t = p.degree;
    let n = (d as f64).powi(t as i32);
    if !(n <= cap as f64) {
        return Err(Error::ResourceCap { requested: n as usize, cap });
    }
    let t_fact = factorial(t);
    // Per-term coefficient for each rearrangement of the exponent profile.
    let weights: BTreeMap<&Monomial, Rat> = p
        .terms
        .iter()
        .map(|(m, c)| {
            let mut num = BigNat::one();
            for &a in &m.exponents {
                num *= factorial(a);
            }
            (m, c * rat_from_nats(num, t_fact.clone()))
        })
        .collect();
    let mut coefficients = vec![Rat::zero(); n as usize];
    for_each_tuple(d, t, |idx, x| {
        let mut exps = vec![0u64; p.d];
        for &v in x {
            exps[v as usize] += 1;
        }
        let profile = Monomial::new(exps);
        if let Some(w) = weights.get(&profile) {
            coefficients[idx] = (*w).clone();
        }
    });
    Ok(SymVector { d, t, coefficients })
}

/// Homogeneous polynomial with double-precision coefficients; the image of a
/// rational polynomial under a float orthogonal substitution.
#[derive(Debug, Clone)]
pub struct FloatPoly {
    d: usize,
    degree: u64,
    terms: BTreeMap<Monomial, f64>,
}

impl FloatPoly {
    fn zero(d: usize, degree: u64) -> Self {
        FloatPoly { d, degree, terms: BTreeMap::new() }
    }

    fn add_term(&mut self, m: Monomial, c: f64) {
        *self.terms.entry(m).or_insert(0.0) += c;
    }

    pub fn coeff(&self, exponents: &[u64]) -> f64 {
        self.terms
            .get(&Monomial::new(exponents.to_vec()))
            .copied()
            .unwrap_or(0.0)
    }

    fn multiply(&self, other: &FloatPoly) -> FloatPoly {
        let mut out = FloatPoly::zero(self.d, self.degree + other.degree);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let exps: Vec<u64> = ma
                    .exponents
                    .iter()
                    .zip(&mb.exponents)
                    .map(|(a, b)| a + b)
                    .collect();
                out.add_term(Monomial::new(exps), ca * cb);
            }
        }
        out
    }

    /// Float counterpart of `poly_to_symvector`.
    pub fn to_symvector(&self, cap: usize) -> Result<Vec<f64>> {
        let d = self.d as u64;
        let t = self.degree;
        let n = (d as f64).powi(t as i32);
        if !(n <= cap as f64) {
            return Err(Error::ResourceCap { requested: n as usize, cap });
        }
        let t_fact: f64 = (1..=t).map(|v| v as f64).product();
        let weights: BTreeMap<&Monomial, f64> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let fact: f64 = m
                    .exponents
                    .iter()
                    .map(|&a| (1..=a).map(|v| v as f64).product::<f64>())
                    .product();
                (m, c * fact / t_fact)
            })
            .collect();
        let mut coefficients = vec![0.0; n as usize];
        for_each_tuple(d, t, |idx, x| {
            let mut exps = vec![0u64; self.d];
            for &v in x {
                exps[v as usize] += 1;
            }
            if let Some(w) = weights.get(&Monomial::new(exps)) {
                coefficients[idx] = *w;
            }
        });
        Ok(coefficients)
    }
}

/// Coefficients of P(OᵀX): each X_j is substituted by the linear form
/// Σ_i O_{ij} X_i. O must be orthogonal to within 1e−10.
pub fn apply_orthogonal(p: &Poly, o: &DMatrix<f64>) -> Result<FloatPoly> {
    let d = p.d;
    if o.nrows() != d || o.ncols() != d {
        return Err(Error::Domain(format!(
            "matrix is {}x{} but the polynomial has {d} variables",
            o.nrows(),
            o.ncols()
        )));
    }
    let gram = o.transpose() * o;
    for i in 0..d {
        for j in 0..d {
            let expected = if i == j { 1.0 } else { 0.0 };
            if (gram[(i, j)] - expected).abs() > 1e-10 {
                return Err(Error::Domain("matrix is not orthogonal to within 1e-10".into()));
            }
        }
    }
    let linear_forms: Vec<FloatPoly> = (0..d)
        .map(|j| {
            let mut f = FloatPoly::zero(d, 1);
            for i in 0..d {
                let mut e = vec![0u64; d];
                e[i] = 1;
                f.add_term(Monomial::new(e), o[(i, j)]);
            }
            f
        })
        .collect();
    let mut out = FloatPoly::zero(d, p.degree);
    for (m, c) in &p.terms {
        let mut term = FloatPoly::zero(d, 0);
        term.add_term(Monomial::new(vec![0; d]), rat_to_f64(c));
        for (j, &a) in m.exponents.iter().enumerate() {
            for _ in 0..a {
                term = term.multiply(&linear_forms[j]);
            }
        }
        for (mono, v) in term.terms {
            out.add_term(mono, v);
        }
    }
    Ok(out)
}

/// Eigenvectors of the real-Haar moment operator at level k: the images of
/// {q^k · h : h ∈ basis of H_d^{t−2k}}. Unnormalized; every returned vector v
/// satisfies ρ v = λ_k v exactly.
pub fn eigenbasis_for_level(d: u64, t: u64, k: u64, cap: usize) -> Result<Vec<SymVector>> {
    if k > t / 2 {
        return Err(Error::Domain(format!("level k = {k} exceeds ⌊t/2⌋ = {}", t / 2)));
    }
    let harmonics = harmonic_basis(d, t - 2 * k, cap)?;
    harmonics
        .iter()
        .map(|h| poly_to_symvector(&q_power_multiply(h, k), cap))
        .collect()
}

/// Orthogonal projector onto the eigenspaces of the real-Haar moment operator
/// whose eigenvalue lies strictly above the complex-Haar eigenvalue
/// 1/C(d+t−1, t). An exact tie is excluded from the projector and reported
/// through a warning.
pub fn build_pi_plus(d: u64, t: u64, cap: usize) -> Result<RatMatrix> {
    let n = (d as f64).powi(t as i32);
    if !(n <= cap as f64) {
        return Err(Error::ResourceCap { requested: n as usize, cap });
    }
    let n = n as usize;
    let spectrum = real_haar_spectrum(d, t)?;
    let mu = complex_haar_eigenvalue(d, t);
    let mut projector = RatMatrix::zeros(n);
    for line in &spectrum.lines {
        if line.eigenvalue == mu {
            log::warn!(
                "level k = {} has eigenvalue exactly equal to 1/C(d+t-1,t); excluded from Π₊",
                line.k
            );
            continue;
        }
        if line.eigenvalue < mu {
            continue;
        }
        let vectors = eigenbasis_for_level(d, t, line.k, cap)?;
        let r = vectors.len();
        let mut gram = RatMatrix::zeros(r);
        for a in 0..r {
            for b in a..r {
                let v = vectors[a].inner(&vectors[b]);
                *gram.at_mut(a, b) = v.clone();
                *gram.at_mut(b, a) = v;
            }
        }
        let gram_inv = gram
            .inverse()
            .expect("Gram matrix of a linearly independent eigenbasis is invertible");
        // W = V G⁻¹, then Π += W Vᵀ.
        let mut w = vec![vec![Rat::zero(); r]; n];
        for i in 0..n {
            for b in 0..r {
                let mut s = Rat::zero();
                for a in 0..r {
                    if !vectors[a].coefficients[i].is_zero() {
                        s += &vectors[a].coefficients[i] * gram_inv.at(a, b);
                    }
                }
                w[i][b] = s;
            }
        }
        for i in 0..n {
            for j in 0..n {
                let mut s = Rat::zero();
                for b in 0..r {
                    if !w[i][b].is_zero() && !vectors[b].coefficients[j].is_zero() {
                        s += &w[i][b] * &vectors[b].coefficients[j];
                    }
                }
                if !s.is_zero() {
                    *projector.at_mut(i, j) += s;
                }
            }
        }
    }
    Ok(projector)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::rat;
    use crate::moments::DEFAULT_MATRIX_CAP;
    use crate::spectra::harmonic_dimension;
    use num_traits::ToPrimitive;

    fn x_power(d: usize, var: usize, power: u64) -> Poly {
        let mut e = vec![0u64; d];
        e[var] = power;
        Poly::monomial(d, e, Rat::one())
    }

    #[test]
    fn bombieri_examples() {
        let x0sq = x_power(2, 0, 2);
        let x1sq = x_power(2, 1, 2);
        let x0x1 = Poly::monomial(2, vec![1, 1], Rat::one());
        assert_eq!(bombieri_inner(&x0sq, &x0sq).unwrap(), rat(1, 1));
        assert_eq!(bombieri_inner(&x0x1, &x0x1).unwrap(), rat(1, 2));
        assert_eq!(bombieri_inner(&x0sq, &x1sq).unwrap(), rat(0, 1));
        assert!(bombieri_inner(&x0sq, &x_power(2, 0, 3)).is_err());
    }

    #[test]
    fn laplacian_examples() {
        let d = 2;
        let p = x_power(d, 0, 2).add(&x_power(d, 1, 2).scaled(&rat(-1, 1)));
        assert!(laplacian(&p).is_zero());
        for dd in 2..5usize {
            let lq = laplacian(&Poly::q(dd));
            assert_eq!(lq.coeff(&Monomial::new(vec![0; dd])), rat(2 * dd as i64, 1));
            assert_eq!(lq.terms().count(), 1);
        }
        let cube = x_power(2, 0, 3);
        let l = laplacian(&cube);
        assert_eq!(l.coeff(&Monomial::new(vec![1, 0])), rat(6, 1));
    }

    #[test]
    fn multiplication_examples() {
        let x0 = x_power(2, 0, 1);
        let x1 = x_power(2, 1, 1);
        let prod = multiply(&x0, &x1);
        assert_eq!(prod.coeff(&Monomial::new(vec![1, 1])), rat(1, 1));
        assert_eq!(prod.terms().count(), 1);

        let one = Poly::monomial(2, vec![0, 0], Rat::one());
        assert_eq!(q_power_multiply(&one, 1), Poly::q(2));

        let q2 = q_power_multiply(&Poly::q(2), 1);
        assert_eq!(q2.coeff(&Monomial::new(vec![4, 0])), rat(1, 1));
        assert_eq!(q2.coeff(&Monomial::new(vec![2, 2])), rat(2, 1));
        assert_eq!(q2.coeff(&Monomial::new(vec![0, 4])), rat(1, 1));
    }

    #[test]
    fn harmonic_basis_dimensions_match_closed_form() {
        for d in 2..=4u64 {
            for m in 0..=5u64 {
                let basis = harmonic_basis(d, m, DEFAULT_MATRIX_CAP).unwrap();
                assert_eq!(
                    basis.len() as u64,
                    harmonic_dimension(d, m).to_u64().unwrap(),
                    "d={d} m={m}"
                );
                for h in &basis {
                    assert!(laplacian(h).is_zero());
                }
            }
        }
    }

    #[test]
    fn harmonic_basis_2_2_spans_expected_space() {
        let basis = harmonic_basis(2, 2, DEFAULT_MATRIX_CAP).unwrap();
        assert_eq!(basis.len(), 2);
        // X0² − X1² and X0X1 must lie in the span: stacking them onto the
        // basis coefficients must not increase the rank.
        let monos = monomials_of_degree(2, 2);
        let mut rows: Vec<Vec<Rat>> = basis
            .iter()
            .map(|p| monos.iter().map(|m| p.coeff(m)).collect())
            .collect();
        let targets = [
            x_power(2, 0, 2).add(&x_power(2, 1, 2).scaled(&rat(-1, 1))),
            Poly::monomial(2, vec![1, 1], Rat::one()),
        ];
        for tgt in &targets {
            rows.push(monos.iter().map(|m| tgt.coeff(m)).collect());
        }
        assert_eq!(crate::ratlin::rank(rows, monos.len()), 2);
    }

    #[test]
    fn degree_zero_harmonics_are_constants() {
        let basis = harmonic_basis(3, 0, DEFAULT_MATRIX_CAP).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].coeff(&Monomial::new(vec![0, 0, 0])), rat(1, 1));
    }

    #[test]
    fn symvector_images() {
        let img = poly_to_symvector(&x_power(2, 0, 2), DEFAULT_MATRIX_CAP).unwrap();
        assert_eq!(img.coefficients, vec![rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1)]);

        let x0x1 = Poly::monomial(2, vec![1, 1], Rat::one());
        let img = poly_to_symvector(&x0x1, DEFAULT_MATRIX_CAP).unwrap();
        assert_eq!(img.coefficients, vec![rat(0, 1), rat(1, 2), rat(1, 2), rat(0, 1)]);
        assert_eq!(img.norm_squared(), rat(1, 2));

        let img = poly_to_symvector(&Poly::q(2), DEFAULT_MATRIX_CAP).unwrap();
        assert_eq!(img.coefficients, vec![rat(1, 1), rat(0, 1), rat(0, 1), rat(1, 1)]);
    }

    #[test]
    fn apply_orthogonal_identity_fixes_polynomials() {
        let p = x_power(2, 0, 2).add(&Poly::monomial(2, vec![1, 1], rat(3, 7)));
        let id = DMatrix::identity(2, 2);
        let out = apply_orthogonal(&p, &id).unwrap();
        assert!((out.coeff(&[2, 0]) - 1.0).abs() < 1e-14);
        assert!((out.coeff(&[1, 1]) - 3.0 / 7.0).abs() < 1e-14);
        assert!(out.coeff(&[0, 2]).abs() < 1e-14);
    }

    #[test]
    fn apply_orthogonal_worked_rotation() {
        // O = [[1,1],[-1,1]]/√2 sends aX0² + bX0X1 + cX1² to
        // ½(a+b+c)X0² + (c−a)X0X1 + ½(a−b+c)X1².
        let (a, b, c) = (2.0, 5.0, -3.0);
        let p = x_power(2, 0, 2)
            .scaled(&rat(2, 1))
            .add(&Poly::monomial(2, vec![1, 1], rat(5, 1)))
            .add(&x_power(2, 1, 2).scaled(&rat(-3, 1)));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let o = DMatrix::from_row_slice(2, 2, &[s, s, -s, s]);
        let out = apply_orthogonal(&p, &o).unwrap();
        assert!((out.coeff(&[2, 0]) - 0.5 * (a + b + c)).abs() < 1e-12);
        assert!((out.coeff(&[1, 1]) - (c - a)).abs() < 1e-12);
        assert!((out.coeff(&[0, 2]) - 0.5 * (a - b + c)).abs() < 1e-12);
    }

    #[test]
    fn apply_orthogonal_rejects_non_orthogonal() {
        let p = x_power(2, 0, 2);
        let bad = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.5, 1.0]);
        assert!(apply_orthogonal(&p, &bad).is_err());
    }

    #[test]
    fn top_level_eigenvector_2_2() {
        let vectors = eigenbasis_for_level(2, 2, 1, DEFAULT_MATRIX_CAP).unwrap();
        assert_eq!(vectors.len(), 1);
        assert_eq!(
            vectors[0].coefficients,
            vec![rat(1, 1), rat(0, 1), rat(0, 1), rat(1, 1)]
        );
    }

    #[test]
    fn pi_plus_2_2_is_rank_one_cat_projector() {
        let p = build_pi_plus(2, 2, DEFAULT_MATRIX_CAP).unwrap();
        assert_eq!(*p.at(0, 0), rat(1, 2));
        assert_eq!(*p.at(0, 3), rat(1, 2));
        assert_eq!(*p.at(3, 3), rat(1, 2));
        assert_eq!(*p.at(1, 1), rat(0, 1));
        assert_eq!(p.mul(&p), p);
        assert_eq!(p.trace(), rat(1, 1));
    }

    #[test]
    fn pi_plus_single_copy_is_zero() {
        for d in 2..5 {
            let p = build_pi_plus(d, 1, DEFAULT_MATRIX_CAP).unwrap();
            assert_eq!(p, RatMatrix::zeros(d as usize));
        }
    }
}
