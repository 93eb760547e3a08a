//! Cross-module consistency: every closed-form quantity checked against an
//! independently constructed brute-force or Monte Carlo oracle.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use haarspec::applications::design_epsilon_floor;
use haarspec::combinatorics::{rat, rat_to_f64, Rat};
use haarspec::distances::{binary_phase_trace_distance, schatten_distance_real_vs_complex, PNorm};
use haarspec::harmonic::{
    bombieri_inner, build_pi_plus, eigenbasis_for_level, multiply, poly_to_symvector, Poly,
};
use haarspec::moments::{
    build_binary_phase_matrix, build_real_moment_matrix, build_sym_projector,
    estimate_moment_operator, sample_real_haar_state, tensor_power_f64, Ensemble, RatMatrix,
    DEFAULT_MATRIX_CAP,
};
use haarspec::spectra::{
    binary_phase_spectrum, complex_haar_eigenvalue, real_haar_spectrum, symmetric_dimension,
};

/// Every (d, t) with t ≥ 2 and d^t ≤ 256.
fn dense_grid() -> Vec<(u64, u64)> {
    let mut pairs = Vec::new();
    for d in 2..=16u64 {
        for t in 2..=8u64 {
            if (d as f64).powi(t as i32) <= 256.0 {
                pairs.push((d, t));
            }
        }
    }
    pairs
}

#[test]
fn trace_powers_match_spectral_moments() {
    for (d, t) in dense_grid() {
        let rho = build_real_moment_matrix(d, t, DEFAULT_MATRIX_CAP).unwrap();
        let spectrum = real_haar_spectrum(d, t).unwrap();
        for m in 1..=3u32 {
            assert_eq!(
                rho.trace_power(m),
                spectrum.spectral_moment(m),
                "tr(rho^{m}) disagrees with the closed-form spectrum at d={d} t={t}"
            );
        }
    }
}

#[test]
fn moment_matrix_lives_on_symmetric_subspace() {
    for (d, t) in [(2u64, 2u64), (2, 3), (3, 2), (2, 4), (3, 3)] {
        let rho = build_real_moment_matrix(d, t, DEFAULT_MATRIX_CAP).unwrap();
        let pi = build_sym_projector(d, t, DEFAULT_MATRIX_CAP).unwrap();
        assert_eq!(pi.mul(&rho), rho.mul(&pi), "[Π, ρ] != 0 at d={d} t={t}");
        assert_eq!(pi.mul(&rho).mul(&pi), rho, "ΠρΠ != ρ at d={d} t={t}");
    }
}

#[test]
fn eigenlevels_are_orthogonal_and_complete() {
    for d in 2..=3u64 {
        for t in 2..=4u64 {
            let levels: Vec<Vec<_>> = (0..=t / 2)
                .map(|k| eigenbasis_for_level(d, t, k, DEFAULT_MATRIX_CAP).unwrap())
                .collect();
            for (ka, a) in levels.iter().enumerate() {
                for (kb, b) in levels.iter().enumerate() {
                    if ka == kb {
                        continue;
                    }
                    for va in a {
                        for vb in b {
                            assert!(
                                va.inner(vb).is_zero(),
                                "levels {ka} and {kb} not orthogonal at d={d} t={t}"
                            );
                        }
                    }
                }
            }
            // The union of all levels must span the symmetric subspace: its
            // Gram matrix must have full rank.
            let all: Vec<_> = levels.into_iter().flatten().collect();
            let dim = symmetric_dimension(d, t).to_usize().unwrap();
            assert_eq!(all.len(), dim);
            let mut gram = RatMatrix::zeros(dim);
            for i in 0..dim {
                for j in i..dim {
                    let v = all[i].inner(&all[j]);
                    *gram.at_mut(i, j) = v.clone();
                    *gram.at_mut(j, i) = v;
                }
            }
            assert_eq!(gram.rank(), dim, "eigenbasis union is degenerate at d={d} t={t}");
        }
    }
}

#[test]
fn superprojector_absorbs_factor_projectors() {
    for (d, t, k) in [(2u64, 1u64, 1u64), (2, 2, 1), (3, 1, 1)] {
        let big = build_sym_projector(d, t + k, DEFAULT_MATRIX_CAP).unwrap();
        let left = build_sym_projector(d, t, DEFAULT_MATRIX_CAP).unwrap();
        let right = build_sym_projector(d, k, DEFAULT_MATRIX_CAP).unwrap();
        assert_eq!(big.mul(&left.kron(&right)), big, "(d,t,k)=({d},{t},{k})");
    }
}

fn random_monomial(rng: &mut ChaCha12Rng, d: usize, degree: u64) -> Poly {
    let mut exps = vec![0u64; d];
    for _ in 0..degree {
        exps[rng.random_range(0..d)] += 1;
    }
    Poly::monomial(d, exps, Rat::one())
}

fn random_poly(rng: &mut ChaCha12Rng, d: usize, degree: u64) -> Poly {
    let mut p = Poly::zero(d, degree);
    for _ in 0..rng.random_range(1..=3) {
        let c = rat(rng.random_range(-9..=9), rng.random_range(1..=9));
        p = p.add(&random_monomial(rng, d, degree).scaled(&c));
    }
    p
}

fn kron_rat(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

#[test]
fn product_rule_through_the_isomorphism() {
    let mut rng = ChaCha12Rng::seed_from_u64(2024);
    for _ in 0..25 {
        let d = rng.random_range(2..=3usize);
        let ta = rng.random_range(1..=2u64);
        let tb = rng.random_range(1..=2u64);
        let p = random_monomial(&mut rng, d, ta);
        let q = random_monomial(&mut rng, d, tb);
        let image_product =
            poly_to_symvector(&multiply(&p, &q), DEFAULT_MATRIX_CAP).unwrap();
        let ip = poly_to_symvector(&p, DEFAULT_MATRIX_CAP).unwrap();
        let iq = poly_to_symvector(&q, DEFAULT_MATRIX_CAP).unwrap();
        let pi = build_sym_projector(d as u64, ta + tb, DEFAULT_MATRIX_CAP).unwrap();
        let projected = pi.mul_vec(&kron_rat(&ip.coefficients, &iq.coefficients));
        assert_eq!(image_product.coefficients, projected);
    }
}

#[test]
fn bombieri_isometry_on_random_polynomials() {
    let mut rng = ChaCha12Rng::seed_from_u64(77);
    for _ in 0..60 {
        let d = rng.random_range(2..=3usize);
        let degree = rng.random_range(1..=4u64);
        let p = random_poly(&mut rng, d, degree);
        let q = random_poly(&mut rng, d, degree);
        let lhs = bombieri_inner(&p, &q).unwrap();
        let rhs = poly_to_symvector(&p, DEFAULT_MATRIX_CAP)
            .unwrap()
            .inner(&poly_to_symvector(&q, DEFAULT_MATRIX_CAP).unwrap());
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn spectral_p1_distance_matches_float_eigensolver() {
    for d in 2..=20u64 {
        for t in 2..=8u64 {
            if (d as f64).powi(t as i32) > 256.0 {
                continue;
            }
            let exact = schatten_distance_real_vs_complex(d, t, PNorm::Finite(1.0))
                .unwrap()
                .exact
                .unwrap();
            let rho = build_real_moment_matrix(d, t, DEFAULT_MATRIX_CAP).unwrap();
            let pi = build_sym_projector(d, t, DEFAULT_MATRIX_CAP).unwrap();
            let mu = rat_to_f64(&complex_haar_eigenvalue(d, t));
            let diff = rho.to_dmatrix() - pi.to_dmatrix() * mu;
            let eig = nalgebra::SymmetricEigen::new(diff);
            let norm1: f64 = eig.eigenvalues.iter().map(|v| v.abs()).sum();
            assert!(
                (norm1 - rat_to_f64(&exact)).abs() < 1e-9,
                "float eigensolver route disagrees at d={d} t={t}: {norm1} vs {exact}"
            );
        }
    }
}

#[test]
fn trace_distance_monotone_in_copies() {
    for d in [10u64, 50] {
        let mut prev = Rat::zero();
        for t in 1..=8u64 {
            let current = schatten_distance_real_vs_complex(d, t, PNorm::Finite(1.0))
                .unwrap()
                .exact
                .unwrap();
            assert!(current >= prev, "distance decreased at d={d} t={t}");
            prev = current;
        }
    }
}

#[test]
fn binary_phase_rank_matches_class_count() {
    for d in 2..=4u64 {
        for t in 1..=d.min(3) {
            let spectrum = binary_phase_spectrum(d, t).unwrap();
            let matrix = build_binary_phase_matrix(d, t, DEFAULT_MATRIX_CAP).unwrap();
            assert_eq!(
                matrix.rank(),
                spectrum.rank().to_usize().unwrap(),
                "rank mismatch at d={d} t={t}"
            );
        }
    }
}

#[test]
fn epsilon_floor_is_below_binary_phase_distance() {
    for d in 2..=4u64 {
        for t in 1..=d.min(3) {
            let floor = design_epsilon_floor(d, t).unwrap();
            let binary = binary_phase_trace_distance(d, t).unwrap();
            assert!(
                floor <= binary,
                "real-Haar floor exceeds the binary-phase distance at d={d} t={t}"
            );
        }
    }
}

#[test]
fn monte_carlo_matches_exact_matrices_2_2() {
    let n = 200_000;
    let real = estimate_moment_operator(2, 2, n, 17, 4, Ensemble::RealHaar, DEFAULT_MATRIX_CAP)
        .unwrap();
    let exact = build_real_moment_matrix(2, 2, DEFAULT_MATRIX_CAP).unwrap();
    assert!(real.max_abs_deviation(&exact) < 0.01);

    let binary =
        estimate_moment_operator(2, 2, n, 17, 4, Ensemble::BinaryPhase, DEFAULT_MATRIX_CAP)
            .unwrap();
    let exact = build_binary_phase_matrix(2, 2, DEFAULT_MATRIX_CAP).unwrap();
    assert!(binary.max_abs_deviation(&exact) < 0.01);
}

#[test]
fn gaussian_direction_moment_against_monte_carlo() {
    use rand_distr::StandardNormal;
    let mut rng = ChaCha12Rng::seed_from_u64(99);
    let exact = rat_to_f64(&haarspec::moments::gaussian_direction_moment(&[2, 2, 0]));
    let n = 1_000_000u64;
    let (mut sum, mut sum_sq) = (0.0f64, 0.0f64);
    for _ in 0..n {
        let w: Vec<f64> = (0..3).map(|_| rng.sample(StandardNormal)).collect();
        let norm_sq: f64 = w.iter().map(|x| x * x).sum();
        let v = (w[0] * w[0] * w[1] * w[1]) / (norm_sq * norm_sq);
        sum += v;
        sum_sq += v * v;
    }
    let mean = sum / n as f64;
    let sigma = ((sum_sq / n as f64 - mean * mean) / n as f64).sqrt();
    assert!(
        (mean - exact).abs() <= 3.0 * sigma,
        "MC mean {mean} vs exact {exact} (3σ = {})",
        3.0 * sigma
    );
}

#[test]
fn real_sampler_moments() {
    let mut rng = ChaCha12Rng::seed_from_u64(5);
    let d = 3u64;
    let n = 100_000;
    let mut mean = vec![0.0f64; d as usize];
    let mut mean_sq = vec![0.0f64; d as usize];
    for _ in 0..n {
        let v = sample_real_haar_state(d, &mut rng);
        for i in 0..d as usize {
            mean[i] += v[i];
            mean_sq[i] += v[i] * v[i];
        }
    }
    for i in 0..d as usize {
        mean[i] /= n as f64;
        mean_sq[i] /= n as f64;
        // Var(x_i) = 1/d, Var(x_i²) = 3/(d(d+2)) − 1/d².
        let sigma_mean = (1.0 / d as f64 / n as f64).sqrt();
        assert!(mean[i].abs() < 4.0 * sigma_mean, "E[x_{i}] = {}", mean[i]);
        let var_sq = 3.0 / (d as f64 * (d as f64 + 2.0)) - 1.0 / (d as f64 * d as f64);
        let sigma_sq = (var_sq / n as f64).sqrt();
        assert!(
            (mean_sq[i] - 1.0 / d as f64).abs() < 4.0 * sigma_sq,
            "E[x_{i}²] = {}",
            mean_sq[i]
        );
    }
}

#[test]
fn pi_plus_acceptance_is_state_independent() {
    let (d, t) = (2u64, 3u64);
    let pi = build_pi_plus(d, t, DEFAULT_MATRIX_CAP).unwrap().to_dmatrix();
    let spectrum = real_haar_spectrum(d, t).unwrap();
    let mu = complex_haar_eigenvalue(d, t);
    let expected: f64 = spectrum
        .lines
        .iter()
        .filter(|l| l.eigenvalue > mu)
        .map(|l| {
            rat_to_f64(&(Rat::from(BigInt::from(l.multiplicity.clone())) * &l.eigenvalue))
        })
        .sum();
    let mut rng = ChaCha12Rng::seed_from_u64(31);
    for _ in 0..100 {
        let psi = sample_real_haar_state(d, &mut rng);
        let v = DMatrix::from_vec(8, 1, tensor_power_f64(&psi, t));
        let value = (v.transpose() * &pi * &v)[(0, 0)];
        assert!((value - expected).abs() < 1e-9, "got {value}, expected {expected}");
    }
}
