//! Dense complex matrices of dimension 2 and 4.
//!
//! Basis order for 4×4 operators is |00⟩, |01⟩, |10⟩, |11⟩, i.e. index
//! `2a + b` for qubit A in state `a` and qubit B in state `b`. Eigenproblems
//! are solved with cyclic complex Jacobi rotations, which also back the 8×8
//! and 16×16 Hermitian problems used elsewhere in the crate.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Hermiticity tolerance for validation (max entrywise |M − M†|).
pub const VALIDATE_TOL: f64 = 1e-9;
/// Eigenpair residual and orthonormality tolerance.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Eigenvalues above −PSD_CLAMP are treated as zero when a PSD operator is required.
pub const PSD_CLAMP: f64 = 1e-10;

const JACOBI_OFF_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Subsystem selector for partial traces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// A square complex matrix of dimension 2 or 4 stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: [C64; 16],
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  {}", row.join("  "))?;
        }
        write!(f, "]")
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 4 {
        Ok(())
    } else {
        Err(Error::Dimension {
            expected: "2 or 4".into(),
            got: dim.to_string(),
        })
    }
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { dim, data: [ZERO; 16] })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        Ok(m)
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        Ok(m)
    }

    /// Builds a matrix from rows; every row must have as many entries as there are rows.
    pub fn from_rows<R: AsRef<[C64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        check_dim(dim)?;
        for r in rows {
            if r.as_ref().len() != dim {
                return Err(Error::Dimension {
                    expected: format!("{dim} columns"),
                    got: format!("{} columns", r.as_ref().len()),
                });
            }
        }
        Self::from_fn(dim, |i, j| rows[i].as_ref()[j])
    }

    pub fn from_real_diag(diag: &[f64]) -> Result<Self> {
        let dim = diag.len();
        Self::from_fn(dim, |i, j| if i == j { C64::new(diag[i], 0.0) } else { ZERO })
    }

    /// Outer product |u⟩⟨v|.
    pub fn outer(u: &[C64], v: &[C64]) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::Dimension {
                expected: format!("vectors of equal length {}", u.len()),
                got: v.len().to_string(),
            });
        }
        Self::from_fn(u.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        self.map_indexed(|m, i, j| m[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        self.map_indexed(|m, i, j| m[(j, i)])
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        self.map_indexed(|m, i, j| m[(i, j)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map_indexed(|m, i, j| m[(i, j)] * s)
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise |M − M†|.
    pub fn hermitian_asymmetry(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// (M + M†)/2.
    pub fn hermitian_part(&self) -> Self {
        self.map_indexed(|m, i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5)
    }

    /// Row-major view of the `dim × dim` entries.
    pub fn entries(&self) -> &[C64] {
        &self.data[..self.dim * self.dim]
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// ⟨v|M|v⟩.
    pub fn expectation(&self, v: &[C64]) -> C64 {
        let mv = self.apply(v);
        v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum()
    }

    fn map_indexed(&self, f: impl Fn(&Self, usize, usize) -> C64) -> Self {
        let mut out = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(i, j)] = f(self, i, j);
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.dim && j < self.dim);
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.dim && j < self.dim);
        &mut self.data[i * self.dim + j]
    }
}

impl Add for CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        self.map_indexed(|m, i, j| m[(i, j)] + rhs[(i, j)])
    }
}

impl Sub for CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        self.map_indexed(|m, i, j| m[(i, j)] - rhs[(i, j)])
    }
}

impl Neg for CMatrix {
    type Output = CMatrix;

    fn neg(self) -> CMatrix {
        self.scale(-ONE)
    }
}

impl Mul for CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = CMatrix {
            dim: n,
            data: [ZERO; 16],
        };
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Mul<f64> for CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: f64) -> CMatrix {
        self.scale(C64::new(rhs, 0.0))
    }
}

impl Mul<C64> for CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: C64) -> CMatrix {
        self.scale(rhs)
    }
}

/// Pauli matrix σ_i for i = 0 (identity), 1 (x), 2 (y), 3 (z).
pub fn pauli(i: usize) -> CMatrix {
    let rows: [[C64; 2]; 2] = match i {
        0 => [[ONE, ZERO], [ZERO, ONE]],
        1 => [[ZERO, ONE], [ONE, ZERO]],
        2 => [[ZERO, -I], [I, ZERO]],
        3 => [[ONE, ZERO], [ZERO, -ONE]],
        _ => panic!("Pauli index {i} out of range"),
    };
    CMatrix::from_rows(&rows).expect("2x2")
}

pub fn identity2() -> CMatrix {
    pauli(0)
}

pub fn identity4() -> CMatrix {
    CMatrix::identity(4).expect("4x4")
}

/// Kronecker product of two 2×2 matrices.
pub fn kron(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if a.dim != 2 || b.dim != 2 {
        return Err(Error::Dimension {
            expected: "two 2x2 factors".into(),
            got: format!("{}x{} and {}x{}", a.dim, a.dim, b.dim, b.dim),
        });
    }
    CMatrix::from_fn(4, |r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

fn require_dim4(m: &CMatrix) -> Result<()> {
    if m.dim != 4 {
        return Err(Error::Dimension {
            expected: "4x4".into(),
            got: format!("{}x{}", m.dim, m.dim),
        });
    }
    Ok(())
}

/// Transposes the second tensor factor: ⟨a b|M^{T_B}|a' b'⟩ = ⟨a b'|M|a' b⟩.
pub fn partial_transpose_b(m: &CMatrix) -> Result<CMatrix> {
    require_dim4(m)?;
    CMatrix::from_fn(4, |r, c| {
        let (a, b) = (r / 2, r % 2);
        let (ap, bp) = (c / 2, c % 2);
        m[(2 * a + bp, 2 * ap + b)]
    })
}

/// Traces out `subsystem`, returning the 2×2 reduced operator on the other qubit.
pub fn partial_trace(m: &CMatrix, subsystem: Subsystem) -> Result<CMatrix> {
    require_dim4(m)?;
    CMatrix::from_fn(2, |x, y| match subsystem {
        Subsystem::B => m[(2 * x, 2 * y)] + m[(2 * x + 1, 2 * y + 1)],
        Subsystem::A => m[(x, y)] + m[(2 + x, 2 + y)],
    })
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// `vectors[i]` is the unit eigenvector belonging to `values[i]`.
    pub vectors: Vec<Vec<C64>>,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Number of eigenvalues strictly below `-tol`.
    pub fn count_below(&self, tol: f64) -> usize {
        self.values.iter().filter(|&&v| v < -tol).count()
    }
}

/// Eigen-decomposition of a Hermitian 2×2 or 4×4 matrix.
pub fn herm_eigen(m: &CMatrix) -> Result<Spectrum> {
    let asym = m.hermitian_asymmetry();
    if asym > VALIDATE_TOL || asym.is_nan() {
        return Err(Error::NotHermitian { max_asymmetry: asym });
    }
    herm_eigen_dense(m.dim, m.entries())
}

/// Eigen-decomposition of a dense Hermitian `n × n` matrix given row-major.
///
/// Cyclic Jacobi: each rotation first removes the phase of the pivot `a_pq`
/// with a diagonal unitary, then applies a real Givens rotation that zeroes it.
pub fn herm_eigen_dense(n: usize, entries: &[C64]) -> Result<Spectrum> {
    assert_eq!(entries.len(), n * n, "entry count does not match dimension");
    let mut a: Vec<C64> = entries.to_vec();
    // Symmetrize so rounding in the input cannot break the rotations' assumptions.
    for i in 0..n {
        a[i * n + i] = C64::new(a[i * n + i].re, 0.0);
        for j in (i + 1)..n {
            let h = (a[i * n + j] + a[j * n + i].conj()) * 0.5;
            a[i * n + j] = h;
            a[j * n + i] = h.conj();
        }
    }
    let mut v = vec![ZERO; n * n];
    for i in 0..n {
        v[i * n + i] = ONE;
    }

    let off_norm = |a: &[C64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off_norm(&a) > JACOBI_OFF_TOL {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off_norm(&a),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let g = apq.norm();
                if g < f64::MIN_POSITIVE {
                    continue;
                }
                let phase = apq / g;
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let theta = (aqq - app) / (2.0 * g);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // U = diag(1, conj(phase)) on (p, q) followed by [[c, s], [-s, c]].
                let u_pp = C64::new(c, 0.0);
                let u_pq = C64::new(s, 0.0);
                let u_qp = phase.conj() * (-s);
                let u_qq = phase.conj() * c;

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * u_pp + akq * u_qp;
                    a[k * n + q] = akp * u_pq + akq * u_qq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = u_pp.conj() * apk + u_qp.conj() * aqk;
                    a[q * n + k] = u_pq.conj() * apk + u_qq.conj() * aqk;
                }
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
                a[p * n + p] = C64::new(app - t * g, 0.0);
                a[q * n + q] = C64::new(aqq + t * g, 0.0);

                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * u_pp + vkq * u_qp;
                    v[k * n + q] = vkp * u_pq + vkq * u_qq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let values = order.iter().map(|&i| a[i * n + i].re).collect();
    let vectors = order
        .iter()
        .map(|&col| (0..n).map(|row| v[row * n + col]).collect())
        .collect();
    Ok(Spectrum { values, vectors })
}

/// Rebuilds Σ f(λ_i)|v_i⟩⟨v_i| from a spectrum of a `dim`-dimensional operator.
pub(crate) fn spectral_function(spec: &Spectrum, f: impl Fn(f64) -> f64) -> CMatrix {
    let dim = spec.values.len();
    let mut out = CMatrix::zeros(dim).expect("spectrum of a 2x2 or 4x4 matrix");
    for (lambda, vec) in spec.values.iter().zip(&spec.vectors) {
        let w = f(*lambda);
        if w == 0.0 {
            continue;
        }
        for i in 0..dim {
            for j in 0..dim {
                out[(i, j)] += vec[i] * vec[j].conj() * w;
            }
        }
    }
    out
}

/// Principal square root of a positive semidefinite Hermitian matrix.
pub fn psd_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let spec = herm_eigen(m)?;
    if spec.min() < -PSD_CLAMP {
        return Err(Error::NotPsd { eigenvalue: spec.min() });
    }
    Ok(spectral_function(&spec, |l| l.max(0.0).sqrt()))
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
