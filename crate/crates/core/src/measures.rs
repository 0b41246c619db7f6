//! Entanglement quantifiers for two qubits.
//!
//! Exact values ([`negativity_exact`], [`concurrence_wootters`]) are computed
//! from full spectra. The estimators ([`negativity_normalized`],
//! [`concurrence_pure`], [`concurrence_quasi`], [`ls_upper_bound`]) need only
//! the minimum eigenvalue μ_min of the SPA-PT state, which in turn follows
//! from the measured average fidelity through [`mu_from_favg`].
//!
//! For two qubits the partial transpose has at most one negative eigenvalue,
//! so N^D = max(0, 4 − 18·μ_min) holds exactly and the estimator satisfies
//! N^N = N^D(338 + N^D)/339. Its bias N^D(1 − N^D)/339 never exceeds 1/1356.

use serde::Serialize;

use crate::error::{check_range, Error, Result};
use crate::qmat::{
    herm_eigen, herm_eigen_dense, identity4, kron, partial_transpose_b, pauli, psd_sqrt, vec_norm, CMatrix, C64, ZERO,
};
use crate::spa::{spa_pt_affine, MU_MIN_LOWER, MU_MIN_UPPER, MU_SEPARABLE};
use crate::states::{family_quasi, DensityMatrix};

/// Slack allowed on μ_min and similar inputs that come out of eigensolvers.
pub const RANGE_SLACK: f64 = 1e-10;
/// States with N^D at or below this are reported as PPT.
pub const PPT_TOL: f64 = 1e-10;
/// Tolerance for recognizing the pure and quasi-distillable special cases.
pub const FAMILY_MATCH_TOL: f64 = 1e-9;

/// F_avg at μ_min = 1/6 (maximal entanglement).
pub const FAVG_MIN: f64 = 59.0 / 135.0;
/// F_avg at μ_min = 1/4 (maximally mixed).
pub const FAVG_MAX: f64 = 65.0 / 135.0;

const NN_SCALE: f64 = 108.0 / 113.0;

/// N^D(ρ) = 2 Σ max(0, −λ_i(ρ^{T_B})).
pub fn negativity_exact(rho: &DensityMatrix) -> f64 {
    let pt = partial_transpose_b(rho.matrix()).expect("4x4");
    let spec = herm_eigen(&pt).expect("partial transpose of a Hermitian matrix");
    2.0 * spec.values.iter().map(|&l| (-l).max(0.0)).sum::<f64>()
}

/// Number of partial-transpose eigenvalues below −`tol`.
pub fn negative_pt_eigenvalues(rho: &DensityMatrix, tol: f64) -> usize {
    let pt = partial_transpose_b(rho.matrix()).expect("4x4");
    herm_eigen(&pt).expect("Hermitian").count_below(tol)
}

fn check_mu(mu: f64) -> Result<()> {
    check_range("mu_min", mu, MU_MIN_LOWER, MU_MIN_UPPER, RANGE_SLACK)
}

/// 4 − 18·μ_min; negative values measure the distance into the separable region.
pub fn negativity_lower_bound(mu_min: f64) -> Result<f64> {
    check_mu(mu_min)?;
    Ok(4.0 - 18.0 * mu_min)
}

fn nn_formula(mu: f64) -> f64 {
    if mu >= MU_SEPARABLE {
        return 0.0;
    }
    (NN_SCALE * (MU_SEPARABLE - mu) * (19.0 - mu)).min(1.0)
}

/// N^N = (108/113)(2/9 − μ)(19 − μ) for μ < 2/9, and 0 from 2/9 upward.
pub fn negativity_normalized(mu_min: f64) -> Result<f64> {
    check_mu(mu_min)?;
    Ok(nn_formula(mu_min))
}

/// Systematic gap N^D − N^N = N^D(1 − N^D)/339 of the estimator.
pub fn estimator_bias(nd: f64) -> f64 {
    let nd = nd.clamp(0.0, 1.0);
    nd * (1.0 - nd) / 339.0
}

/// N^D(338 + N^D)/339: the estimator value implied by an exact negativity.
pub fn nn_from_nd(nd: f64) -> f64 {
    nd * (338.0 + nd) / 339.0
}

/// Wootters concurrence max(0, λ₁ − λ₂ − λ₃ − λ₄).
///
/// The λ_i are the singular values of B = √ρ·(σ_y⊗σ_y)·√ρ*, because
/// B·B† = √ρ·ρ̃·√ρ with ρ̃ = (σ_y⊗σ_y)ρ*(σ_y⊗σ_y). They are read off the
/// Hermitian dilation [[0, B], [B†, 0]], whose spectrum is ±λ_i.
pub fn concurrence_wootters(rho: &DensityMatrix) -> f64 {
    let lambdas = wootters_lambdas(rho);
    (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0)
}

/// λ_i in descending order.
pub fn wootters_lambdas(rho: &DensityMatrix) -> [f64; 4] {
    let sqrt_rho = psd_sqrt(rho.matrix()).expect("validated state is PSD");
    let yy = kron(&pauli(2), &pauli(2)).expect("2x2 factors");
    let b = sqrt_rho * yy * sqrt_rho.conj();

    let mut dilation = vec![ZERO; 64];
    for i in 0..4 {
        for j in 0..4 {
            dilation[i * 8 + 4 + j] = b[(i, j)];
            dilation[(4 + j) * 8 + i] = b[(i, j)].conj();
        }
    }
    let spec = herm_eigen_dense(8, &dilation).expect("Hermitian dilation");
    let mut out = [0.0; 4];
    for (k, v) in spec.values.iter().rev().take(4).enumerate() {
        out[k] = v.max(0.0);
    }
    out
}

/// Concurrence of a pure state from its μ_min; numerically the same curve as N^N.
pub fn concurrence_pure(mu_min: f64) -> Result<f64> {
    negativity_normalized(mu_min)
}

/// C = −N + √(2N(N + 1)) for rank-2 quasi-distillable states.
pub fn concurrence_quasi(n: f64) -> Result<f64> {
    check_range("N", n, 0.0, 1.0, RANGE_SLACK)?;
    let n = n.clamp(0.0, 1.0);
    Ok((-n + (2.0 * n * (n + 1.0)).sqrt()).clamp(0.0, 1.0))
}

/// Lower bound √((1 − C)² + C²) − (1 − C) on the negativity at concurrence C.
pub fn verstraete_rhs(c: f64) -> Result<f64> {
    check_range("C", c, 0.0, 1.0, RANGE_SLACK)?;
    let c = c.clamp(0.0, 1.0);
    Ok(((1.0 - c).powi(2) + c * c).sqrt() - (1.0 - c))
}

/// An entanglement witness W = |φ⟩⟨φ| − (2/9)I and its SPA image W̃ = (2/9)W + (7/36)I.
#[derive(Debug, Clone)]
pub struct WitnessPair {
    pub w: CMatrix,
    pub w_tilde: CMatrix,
    pub phi: [C64; 4],
}

impl WitnessPair {
    /// Tr(W·x).
    pub fn witness_value(&self, x: &CMatrix) -> f64 {
        (self.w * *x).trace().re
    }

    /// Tr(W̃·x).
    pub fn approximated_value(&self, x: &CMatrix) -> f64 {
        (self.w_tilde * *x).trace().re
    }
}

pub fn witness_pair(phi: &[C64; 4]) -> Result<WitnessPair> {
    let norm = vec_norm(phi);
    if (norm - 1.0).abs() > 1e-9 || norm.is_nan() {
        return Err(Error::Unnormalized { norm });
    }
    let id = identity4();
    let w = CMatrix::outer(phi, phi)? - id * (2.0 / 9.0);
    let w_tilde = w * (2.0 / 9.0) + id * (7.0 / 36.0);
    Ok(WitnessPair { w, w_tilde, phi: *phi })
}

/// F_avg = (μ + 47/72)·8/15.
pub fn favg_from_mu(mu: f64) -> Result<f64> {
    check_mu(mu)?;
    Ok((mu + 47.0 / 72.0) * 8.0 / 15.0)
}

/// μ_min = (15/8)·F_avg − 47/72.
pub fn mu_from_favg(f: f64) -> Result<f64> {
    check_range("F_avg", f, FAVG_MIN, FAVG_MAX, RANGE_SLACK)?;
    Ok(mu_from_favg_unchecked(f))
}

pub(crate) fn mu_from_favg_unchecked(f: f64) -> f64 {
    15.0 / 8.0 * f - 47.0 / 72.0
}

/// Convexity bound C(ρ) ≤ (1 − λ)·C(ψ) for ρ = λρ_s + (1 − λ)|ψ⟩⟨ψ|, where
/// `mu_min_of_pure_part` is μ_min of the SPA-PT of |ψ⟩.
pub fn ls_upper_bound(lambda: f64, mu_min_of_pure_part: f64) -> Result<f64> {
    check_range("lambda", lambda, 0.0, 1.0, 0.0)?;
    check_range("mu_min", mu_min_of_pure_part, MU_MIN_LOWER, MU_SEPARABLE, RANGE_SLACK)?;
    Ok((1.0 - lambda) * nn_formula(mu_min_of_pure_part))
}

/// Every quantity the crate computes for one state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglementReport {
    /// Exact negativity from the partial-transpose spectrum.
    pub nd: f64,
    /// Estimator from μ_min.
    pub nn: f64,
    /// nd(1 − nd)/339.
    pub bias: f64,
    pub lower_bound: f64,
    pub mu_min: f64,
    pub concurrence: f64,
    pub ppt: bool,
    /// μ_min-based concurrence, present when ρ is pure.
    pub concurrence_pure: Option<f64>,
    /// N^N-based concurrence, present when ρ is a quasi-distillable state.
    pub concurrence_quasi: Option<f64>,
    /// Convexity bound; for a pure state the decomposition is λ = 0.
    pub ls_bound: Option<f64>,
}

fn is_pure(rho: &DensityMatrix) -> bool {
    rho.spectrum().values[2] <= FAMILY_MATCH_TOL
}

fn is_quasi(rho: &DensityMatrix) -> bool {
    let c = 2.0 * rho.matrix()[(0, 0)].re;
    (-FAMILY_MATCH_TOL..=1.0 + FAMILY_MATCH_TOL).contains(&c)
        && family_quasi(c.clamp(0.0, 1.0)).is_ok_and(|q| q.matrix().max_abs_diff(rho.matrix()) <= FAMILY_MATCH_TOL)
}

pub fn full_report(rho: &DensityMatrix) -> EntanglementReport {
    let spa = spa_pt_affine(rho);
    let mu = spa.mu_min.clamp(MU_MIN_LOWER, MU_MIN_UPPER);
    let nd = negativity_exact(rho);
    let ppt = nd <= PPT_TOL;
    let nn = if ppt { 0.0 } else { nn_formula(mu) };
    let pure = is_pure(rho);
    let concurrence_pure = pure.then(|| nn_formula(mu));
    let ls_bound = (pure && mu <= MU_SEPARABLE).then(|| nn_formula(mu));
    let concurrence_quasi = is_quasi(rho).then(|| concurrence_quasi(nn).expect("nn in [0, 1]"));
    EntanglementReport {
        nd,
        nn,
        bias: estimator_bias(nd),
        lower_bound: 4.0 - 18.0 * spa.mu_min,
        mu_min: spa.mu_min,
        concurrence: concurrence_wootters(rho),
        ppt,
        concurrence_pure,
        concurrence_quasi,
        ls_bound,
    }
}

/// Residual ‖Mv − λv‖ of the worst eigenpair, used by self-checks.
pub fn max_eigen_residual(m: &CMatrix) -> f64 {
    let spec = herm_eigen(m).expect("Hermitian");
    spec.values
        .iter()
        .zip(&spec.vectors)
        .map(|(l, v)| {
            let mv = m.apply(v);
            mv.iter()
                .zip(v)
                .map(|(a, b)| (a - b * l).norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::test_support::{char_poly, poly_roots};
    use crate::qmat::ONE;
    use crate::states::{
        bell, family_horodecki, family_pure_m, pure_from_vector, random_mixed, random_pure, sample_rng, validate,
    };
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn real(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn exact_negativity_cases() {
        assert_abs_diff_eq!(negativity_exact(&bell(0).unwrap()), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(negativity_exact(&DensityMatrix::maximally_mixed()), 0.0);
        assert_abs_diff_eq!(negativity_exact(&family_pure_m(0.5).unwrap()), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(negativity_exact(&family_pure_m(0.2).unwrap()), 0.8, epsilon = 1e-14);
        let h = negativity_exact(&family_horodecki(0.5).unwrap());
        assert_abs_diff_eq!(h, 0.5f64.sqrt() - 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(h, 0.207107, epsilon = 1e-6);
        assert_abs_diff_eq!(negativity_exact(&family_horodecki(1.0).unwrap()), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(negativity_exact(&family_horodecki(0.0).unwrap()), 0.0);
    }

    #[test]
    fn lower_bound_values() {
        assert_abs_diff_eq!(negativity_lower_bound(1.0 / 6.0).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(negativity_lower_bound(2.0 / 9.0).unwrap(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(negativity_lower_bound(0.25).unwrap(), -0.5, epsilon = 1e-14);
        assert!(negativity_lower_bound(0.1).is_err());
        assert!(negativity_lower_bound(0.3).is_err());
    }

    #[test]
    fn normalized_negativity_values() {
        // (108/113)(1/18)(113/6) = 1.
        assert_abs_diff_eq!(negativity_normalized(1.0 / 6.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(negativity_normalized(2.0 / 9.0).unwrap(), 0.0);
        assert_eq!(negativity_normalized(0.24).unwrap(), 0.0);
        assert!(negativity_normalized(0.0).is_err());
        assert!(negativity_normalized(f64::NAN).is_err());

        // Horodecki p = 1/2: μ_min from the closed form, then N^N; cross-check with N^D(338 + N^D)/339.
        let p: f64 = 0.5;
        let mu = 5.0 / 18.0 - p / 18.0 - (1.0 - 2.0 * p + 2.0 * p * p).sqrt() / 18.0;
        assert_abs_diff_eq!(mu, 0.2107163, epsilon = 1e-7);
        let nn = negativity_normalized(mu).unwrap();
        let nd = 0.5f64.sqrt() - 0.5;
        assert_abs_diff_eq!(nn, nd * (338.0 + nd) / 339.0, epsilon = 1e-14);
        assert_abs_diff_eq!(nn, 0.2066224, epsilon = 1e-7);
    }

    #[test]
    fn normalized_negativity_is_strictly_decreasing() {
        let mut prev = f64::INFINITY;
        for k in 0..=1000 {
            let mu = MU_MIN_LOWER + (MU_SEPARABLE - MU_MIN_LOWER) * k as f64 / 1000.0;
            let v = negativity_normalized(mu).unwrap();
            if k < 1000 {
                assert!(v < prev);
            }
            prev = v;
        }
    }

    #[test]
    fn wootters_cases() {
        assert_abs_diff_eq!(concurrence_wootters(&bell(0).unwrap()), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(concurrence_wootters(&bell(3).unwrap()), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(concurrence_wootters(&DensityMatrix::maximally_mixed()), 0.0);
        for k in 1..=10 {
            let c = k as f64 / 10.0;
            assert_abs_diff_eq!(concurrence_wootters(&family_quasi(c).unwrap()), c, epsilon = 1e-10);
        }
        assert_abs_diff_eq!(concurrence_wootters(&family_quasi(0.5).unwrap()), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(
            concurrence_wootters(&family_horodecki(1.0).unwrap()),
            1.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn wootters_vanishes_on_product_states() {
        for i in 0..200 {
            let mut rng = sample_rng(71, i);
            let a = random_pure(&mut rng);
            let b = random_pure(&mut rng);
            // Take the first qubit's marginal amplitudes from two independent random states.
            let qa = crate::qmat::partial_trace(a.matrix(), crate::qmat::Subsystem::B).unwrap();
            let qb = crate::qmat::partial_trace(b.matrix(), crate::qmat::Subsystem::A).unwrap();
            let va = herm_eigen(&qa).unwrap().vectors[1].clone();
            let vb = herm_eigen(&qb).unwrap().vectors[1].clone();
            let v: [C64; 4] = std::array::from_fn(|k| va[k / 2] * vb[k % 2]);
            let rho = pure_from_vector(&v).unwrap();
            assert!(concurrence_wootters(&rho) < 1e-9);
        }
    }

    #[test]
    fn wootters_rank_one_formula() {
        // For (α, 0, 0, β) the spin-flipped overlap gives C = 2|αβ|.
        for k in 0..=20 {
            let theta = k as f64 * std::f64::consts::PI / 40.0;
            let (a, b) = (theta.cos(), C64::from_polar(theta.sin(), 0.7));
            let rho = pure_from_vector(&[real(a), ZERO, ZERO, b]).unwrap();
            assert_abs_diff_eq!(concurrence_wootters(&rho), 2.0 * (a * b.norm()).abs(), epsilon = 1e-9);
        }
    }

    #[test]
    fn wootters_lambdas_match_characteristic_polynomial() {
        // Oracle: roots of det(x − ρ(σy⊗σy)ρ*(σy⊗σy)), square-rooted.
        let yy = kron(&pauli(2), &pauli(2)).unwrap();
        for i in 0..200 {
            let rho = random_mixed(&mut sample_rng(73, i), 4).unwrap();
            let r = *rho.matrix() * yy * rho.matrix().conj() * yy;
            let mut roots: Vec<f64> = poly_roots(&char_poly(&r))
                .iter()
                .map(|z| z.re.max(0.0).sqrt())
                .collect();
            roots.sort_by(|a, b| b.total_cmp(a));
            let lam = wootters_lambdas(&rho);
            for (a, b) in lam.iter().zip(&roots) {
                assert!((a - b).abs() < 1e-7, "{lam:?} vs {roots:?}");
            }
        }
    }

    #[test]
    fn pure_and_quasi_concurrence() {
        assert_abs_diff_eq!(concurrence_pure(1.0 / 6.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(concurrence_pure(2.0 / 9.0).unwrap(), 0.0);
        let mu = 2.0 / 9.0 - 0.1875f64.sqrt() / 9.0;
        let via_state = concurrence_pure(spa_pt_affine(&family_pure_m(0.25).unwrap()).mu_min).unwrap();
        assert_abs_diff_eq!(via_state, negativity_normalized(mu).unwrap(), epsilon = 1e-14);

        assert_eq!(concurrence_quasi(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(concurrence_quasi(1.0).unwrap(), 1.0, epsilon = 1e-15);
        let n = verstraete_rhs(0.5).unwrap();
        assert_abs_diff_eq!(n, 0.5f64.sqrt() - 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(concurrence_quasi(n).unwrap(), 0.5, epsilon = 1e-12);
        assert!(concurrence_quasi(1.5).is_err());
    }

    #[test]
    fn verstraete_values() {
        assert_eq!(verstraete_rhs(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(verstraete_rhs(1.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(verstraete_rhs(0.5).unwrap(), 0.207107, epsilon = 1e-6);
        assert!(verstraete_rhs(-0.5).is_err());
    }

    #[test]
    fn witness_pair_invariants() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi = [real(s), ZERO, ZERO, real(s)];
        let pair = witness_pair(&phi).unwrap();
        let spec = herm_eigen(&pair.w_tilde).unwrap().values;
        let expect = [47.0 / 324.0, 47.0 / 324.0, 47.0 / 324.0, 119.0 / 324.0];
        for (a, b) in spec.iter().zip(expect) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(pair.w_tilde.trace().re, 65.0 / 81.0, epsilon = 1e-12);
        assert!(witness_pair(&[ONE, ONE, ZERO, ZERO]).is_err());

        for i in 0..100 {
            let mut rng = sample_rng(79, i);
            let phi_state = random_pure(&mut rng);
            let v = phi_state.spectrum().vectors[3].clone();
            let phi: [C64; 4] = std::array::from_fn(|k| v[k]);
            let pair = witness_pair(&phi).unwrap();
            let outer = CMatrix::outer(&phi, &phi).unwrap();
            assert!(pair.w.max_abs_diff(&(outer - identity4() * (2.0 / 9.0))) < 1e-14);
            assert!(
                pair.w_tilde
                    .max_abs_diff(&(pair.w * (2.0 / 9.0) + identity4() * (7.0 / 36.0)))
                    < 1e-14
            );
            assert_abs_diff_eq!(pair.w_tilde.trace().re, 65.0 / 81.0, epsilon = 1e-12);

            let rho = random_mixed(&mut rng, 4).unwrap();
            let rt = spa_pt_affine(&rho).rho_tilde;
            let lhs = pair.approximated_value(&rt);
            let rhs = 2.0 / 9.0 * (outer * rt).trace().re + (7.0 / 36.0 - 4.0 / 81.0);
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-13);
        }
    }

    #[test]
    fn witness_is_nonnegative_on_separable_mixtures() {
        for i in 0..300 {
            let mut rng = sample_rng(83, i);
            // Convex combination of four random product states.
            let mut mix = CMatrix::zeros(4).unwrap();
            let weights: Vec<f64> = (0..4).map(|_| rand::Rng::random::<f64>(&mut rng)).collect();
            let total: f64 = weights.iter().sum();
            for w in &weights {
                let a = random_pure(&mut rng);
                let b = random_pure(&mut rng);
                let qa = crate::qmat::partial_trace(a.matrix(), crate::qmat::Subsystem::B).unwrap();
                let qb = crate::qmat::partial_trace(b.matrix(), crate::qmat::Subsystem::B).unwrap();
                mix = mix + kron(&qa, &qb).unwrap() * (w / total);
            }
            let rho = validate(mix).unwrap();
            let rt = spa_pt_affine(&rho).rho_tilde;
            let phi_state = random_pure(&mut rng);
            let v = phi_state.spectrum().vectors[3].clone();
            let pair = witness_pair(&std::array::from_fn(|k| v[k])).unwrap();
            assert!(pair.witness_value(&rt) >= -1e-12);
            // Tr(Wρ̃) = ⟨φ|ρ^{T_B}|φ⟩/9.
            let pt = partial_transpose_b(rho.matrix()).unwrap();
            assert_abs_diff_eq!(
                pair.witness_value(&rt),
                pt.expectation(&pair.phi).re / 9.0,
                epsilon = 1e-13
            );
        }
    }

    #[test]
    fn fidelity_conversion() {
        assert_abs_diff_eq!(favg_from_mu(1.0 / 6.0).unwrap(), 59.0 / 135.0, epsilon = 1e-15);
        assert_abs_diff_eq!(favg_from_mu(2.0 / 9.0).unwrap(), 7.0 / 15.0, epsilon = 1e-15);
        assert_abs_diff_eq!(favg_from_mu(0.25).unwrap(), 65.0 / 135.0, epsilon = 1e-15);
        for k in 0..=100 {
            let mu = MU_MIN_LOWER + (MU_MIN_UPPER - MU_MIN_LOWER) * k as f64 / 100.0;
            let back = mu_from_favg(favg_from_mu(mu).unwrap()).unwrap();
            assert!((back - mu).abs() <= 1e-15);
        }
        assert!(mu_from_favg(0.5).is_err());
        assert!(favg_from_mu(0.3).is_err());
    }

    #[test]
    fn ls_bound_values() {
        assert_eq!(ls_upper_bound(1.0, 1.0 / 6.0).unwrap(), 0.0);
        assert_abs_diff_eq!(ls_upper_bound(0.0, 1.0 / 6.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ls_upper_bound(0.5, 1.0 / 6.0).unwrap(), 0.5, epsilon = 1e-15);
        let mu = 0.2;
        assert_eq!(ls_upper_bound(0.0, mu).unwrap(), concurrence_pure(mu).unwrap());
        assert!(ls_upper_bound(1.5, 0.2).is_err());
        assert!(ls_upper_bound(0.5, 0.24).is_err());
    }

    #[test]
    fn ls_bound_dominates_concurrence_of_mixtures() {
        // ρ = λ·(separable) + (1 − λ)|ψ⟩⟨ψ| with a known decomposition.
        for i in 0..200 {
            let mut rng = sample_rng(89, i);
            let psi = random_pure(&mut rng);
            let lambda: f64 = rand::Rng::random(&mut rng);
            let mu = spa_pt_affine(&psi).mu_min.min(MU_SEPARABLE);
            let sep = DensityMatrix::maximally_mixed();
            let rho = validate(*sep.matrix() * lambda + *psi.matrix() * (1.0 - lambda)).unwrap();
            let bound = ls_upper_bound(lambda, mu).unwrap();
            assert!(concurrence_wootters(&rho) <= bound + 1e-9);
        }
    }

    #[test]
    fn reports_at_endpoints() {
        let r = full_report(&bell(0).unwrap());
        assert_abs_diff_eq!(r.nd, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.nn, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.concurrence, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.mu_min, 1.0 / 6.0, epsilon = 1e-12);
        assert!(!r.ppt);
        assert!(r.concurrence_pure.is_some());
        assert!(r.concurrence_quasi.is_some());

        let r = full_report(&DensityMatrix::maximally_mixed());
        assert_eq!((r.nd, r.nn, r.concurrence, r.ppt), (0.0, 0.0, 0.0, true));
        assert_abs_diff_eq!(r.mu_min, 0.25, epsilon = 1e-15);
        assert!(r.concurrence_pure.is_none());

        let r = full_report(&family_horodecki(0.5).unwrap());
        assert_abs_diff_eq!(r.nd, 0.207107, epsilon = 1e-6);
        assert_abs_diff_eq!(r.nn, 0.2066224, epsilon = 1e-7);
        assert_abs_diff_eq!(r.mu_min, 0.2107163, epsilon = 1e-7);
        assert_abs_diff_eq!(r.bias, r.nd - r.nn, epsilon = 1e-12);
    }

    #[test]
    fn report_quasi_specialization() {
        for k in 1..=10 {
            let c = k as f64 / 10.0;
            let r = full_report(&family_quasi(c).unwrap());
            // The estimator's N^N differs slightly from N^D, so the recovered C is approximate.
            let cq = r.concurrence_quasi.unwrap();
            assert!((cq - c).abs() < 2e-3, "c = {c}, got {cq}");
        }
    }

    #[test]
    fn tightness_and_universal_relation_on_random_states() {
        for i in 0..2000 {
            let rho = random_mixed(&mut sample_rng(97, i), 4).unwrap();
            let r = full_report(&rho);
            assert!((r.nd - (4.0 - 18.0 * r.mu_min).max(0.0)).abs() <= 1e-10);
            assert!((r.nn - nn_from_nd(r.nd)).abs() <= 1e-10);
            assert!(r.nd - r.nn >= -1e-12 && r.nd - r.nn <= 1.0 / 1356.0 + 1e-12);
            assert_eq!(r.ppt, r.nd <= PPT_TOL);
            if r.ppt {
                assert_eq!(r.nn, 0.0);
            }
            assert!(r.nd >= verstraete_rhs(r.concurrence).unwrap() - 1e-10);
        }
    }

    #[test]
    fn pure_state_concurrence_equals_negativity() {
        for i in 0..2000 {
            let rho = random_pure(&mut sample_rng(101, i));
            assert!((concurrence_wootters(&rho) - negativity_exact(&rho)).abs() <= 1e-9);
        }
    }

    proptest! {
        #[test]
        fn concurrence_quasi_inverts_verstraete(c in 0.0f64..=1.0) {
            let n = verstraete_rhs(c).unwrap();
            prop_assert!((concurrence_quasi(n).unwrap() - c).abs() <= 1e-12);
        }

        #[test]
        fn concurrence_quasi_is_monotone(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(concurrence_quasi(lo).unwrap() <= concurrence_quasi(hi).unwrap() + 1e-15);
        }

        #[test]
        fn fidelity_round_trip(mu in MU_MIN_LOWER..=MU_MIN_UPPER) {
            prop_assert!((mu_from_favg(favg_from_mu(mu).unwrap()).unwrap() - mu).abs() <= 1e-15);
        }

        #[test]
        fn estimator_bias_is_bounded(nd in 0.0f64..=1.0) {
            let mu = MU_SEPARABLE - nd / 18.0;
            let nn = negativity_normalized(mu).unwrap();
            prop_assert!((nd - nn - estimator_bias(nd)).abs() < 1e-14);
            prop_assert!(estimator_bias(nd) <= 1.0 / 1356.0 + 1e-16);
        }
    }
}
