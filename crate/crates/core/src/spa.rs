//! Structural physical approximation of the partial transpose (SPA-PT).
//!
//! Three constructions of ρ̃ are provided:
//!
//! * [`spa_pt_affine`]: ρ̃ = ρ^{T_B}/9 + (2/9)·I₄. This is the form fixed by
//!   the trace relation Tr(Pρ^{T_B}) = 9·Tr(Pρ̃) − 2 for every rank-one P and
//!   serves as the reference implementation.
//! * [`spa_pt_compositional`]: ⅓(id ⊗ T̃) + ⅔(Θ̃ ⊗ D) built from the
//!   measure-and-prepare transpose T̃ over a four-outcome SIC-type POVM.
//! * [`spa_pt_entry_table`]: the published closed-form entry table, kept
//!   verbatim. Its off-diagonal phases differ from the affine map; the
//!   minimum eigenvalue agrees on the worked families but not in general.

use std::sync::OnceLock;

use crate::error::{Error, Result, Violation};
use crate::qmat::{
    herm_eigen, herm_eigen_dense, identity2, identity4, kron, partial_transpose_b, pauli, CMatrix, Spectrum, C64, I,
    ONE, ZERO,
};
use crate::states::{violations, DensityMatrix};

/// Minimum-eigenvalue bounds of ρ̃ over all two-qubit states.
pub const MU_MIN_LOWER: f64 = 1.0 / 6.0;
pub const MU_MIN_UPPER: f64 = 0.25;
/// μ_min below this value certifies entanglement.
pub const MU_SEPARABLE: f64 = 2.0 / 9.0;

/// POVM completeness residual above which T̃ falls back to (xᵀ + Tr(x)·I)/3.
pub const COMPLETENESS_TOL: f64 = 1e-10;

const CP_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaMethod {
    Affine,
    Compositional,
    EntryTable,
}

/// How T̃ is realized inside the compositional construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransposeRealization {
    /// Σ_k Tr(M_k x)|s_k⟩⟨s_k| over the SIC-type POVM.
    Measurement,
    /// (xᵀ + Tr(x)·I)/3, used when the POVM is not complete.
    ClosedForm,
}

#[derive(Debug, Clone)]
pub struct SpaOutcome {
    pub rho_tilde: CMatrix,
    pub spectrum: Spectrum,
    pub mu_min: f64,
    pub min_eigvec: Vec<C64>,
    pub method: SpaMethod,
    /// Density-matrix violations of `rho_tilde`; empty for the affine and
    /// compositional methods.
    pub diagnostics: Vec<Violation>,
}

impl SpaOutcome {
    fn from_matrix(rho_tilde: CMatrix, method: SpaMethod) -> Result<Self> {
        let spectrum = herm_eigen(&rho_tilde.hermitian_part())?;
        let diagnostics = violations(&rho_tilde)?;
        Ok(SpaOutcome {
            rho_tilde,
            mu_min: spectrum.min(),
            min_eigvec: spectrum.vectors[0].clone(),
            spectrum,
            method,
            diagnostics,
        })
    }

    pub fn is_valid_state(&self) -> bool {
        self.diagnostics.is_empty()
    }

    pub fn as_state(&self) -> Option<DensityMatrix> {
        self.is_valid_state()
            .then(|| DensityMatrix::new_unchecked(self.rho_tilde))
    }
}

/// Constants of the SIC-type measurement behind T̃.
#[derive(Debug, Clone)]
pub struct SpaConstants {
    pub b1: C64,
    pub b2: C64,
    /// Prepared states |s_k⟩.
    pub s: [[C64; 2]; 4],
    /// Measured states |s_k*⟩.
    pub s_conj: [[C64; 2]; 4],
    /// Effects M_k = ½|s_k*⟩⟨s_k*|.
    pub povm: [CMatrix; 4],
}

impl SpaConstants {
    fn compute() -> Self {
        let w = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let w_bar = w.conj();
        let b1 = I * w / (I + w_bar);
        let b2 = I * w / (I - w_bar);
        let ket = |b: C64, sign: f64| {
            let n = (1.0 + b.norm_sqr()).sqrt();
            [ONE / n, b.conj() * sign / n]
        };
        let s_conj = [ket(b1, 1.0), ket(b1, -1.0), ket(b2, 1.0), ket(b2, -1.0)];
        let s = s_conj.map(|v| [v[0].conj(), v[1].conj()]);
        let povm = s_conj.map(|v| CMatrix::outer(&v, &v).expect("2-vectors") * 0.5);
        SpaConstants {
            b1,
            b2,
            s,
            s_conj,
            povm,
        }
    }

    /// Process-wide constants, computed on first use.
    pub fn get() -> &'static SpaConstants {
        static CONSTANTS: OnceLock<SpaConstants> = OnceLock::new();
        CONSTANTS.get_or_init(Self::compute)
    }

    /// max |Σ_k M_k − I₂|.
    pub fn completeness_residual(&self) -> f64 {
        let sum = self
            .povm
            .iter()
            .fold(CMatrix::zeros(2).expect("2x2"), |acc, m| acc + *m);
        sum.max_abs_diff(&identity2())
    }

    pub fn realization(&self) -> TransposeRealization {
        if self.completeness_residual() <= COMPLETENESS_TOL {
            TransposeRealization::Measurement
        } else {
            TransposeRealization::ClosedForm
        }
    }
}

/// ρ̃ = ρ^{T_B}/9 + (2/9)·I₄.
pub fn spa_pt_affine(rho: &DensityMatrix) -> SpaOutcome {
    let out = affine_map(rho.matrix());
    SpaOutcome::from_matrix(out, SpaMethod::Affine).expect("affine SPA of a valid state is Hermitian")
}

/// Linear extension of the affine map: X ↦ X^{T_B}/9 + (2/9)·Tr(X)·I₄.
pub fn affine_map(x: &CMatrix) -> CMatrix {
    partial_transpose_b(x).expect("4x4") * (1.0 / 9.0) + identity4() * (x.trace() * (2.0 / 9.0))
}

/// Measure-and-prepare approximate transpose Σ_k Tr(M_k x)|s_k⟩⟨s_k|.
pub fn spa_transpose_tilde(x: &CMatrix) -> Result<CMatrix> {
    require_dim2(x)?;
    let k = SpaConstants::get();
    let mut out = CMatrix::zeros(2)?;
    for (m, s) in k.povm.iter().zip(&k.s) {
        out = out + CMatrix::outer(s, s)? * (*m * *x).trace();
    }
    Ok(out)
}

/// (xᵀ + Tr(x)·I)/3, the closed form T̃ takes for a complete SIC-type POVM.
pub fn transpose_tilde_closed_form(x: &CMatrix) -> Result<CMatrix> {
    require_dim2(x)?;
    Ok((x.transpose() + identity2() * x.trace()) * (1.0 / 3.0))
}

fn transpose_tilde(x: &CMatrix) -> CMatrix {
    match SpaConstants::get().realization() {
        TransposeRealization::Measurement => spa_transpose_tilde(x),
        TransposeRealization::ClosedForm => transpose_tilde_closed_form(x),
    }
    .expect("2x2")
}

/// Θ̃(x) = σ_y T̃(x) σ_y.
pub fn spa_theta(x: &CMatrix) -> Result<CMatrix> {
    require_dim2(x)?;
    let y = pauli(2);
    Ok(y * transpose_tilde(x) * y)
}

/// D(x) = ¼ Σ_{i=0,x,y,z} σ_i x σ_i.
pub fn depol_d(x: &CMatrix) -> Result<CMatrix> {
    require_dim2(x)?;
    let mut out = CMatrix::zeros(2)?;
    for i in 0..4 {
        let s = pauli(i);
        out = out + s * *x * s;
    }
    Ok(out * 0.25)
}

fn require_dim2(x: &CMatrix) -> Result<()> {
    if x.dim() != 2 {
        return Err(Error::Dimension {
            expected: "2x2".into(),
            got: format!("{0}x{0}", x.dim()),
        });
    }
    Ok(())
}

/// Linear map ⅓(id ⊗ T̃) + ⅔(Θ̃ ⊗ D) applied through the Pauli product basis.
pub fn compositional_map(x: &CMatrix) -> CMatrix {
    let paulis: [CMatrix; 4] = std::array::from_fn(pauli);
    let t_tilde: [CMatrix; 4] = std::array::from_fn(|j| transpose_tilde(&paulis[j]));
    let theta: [CMatrix; 4] = std::array::from_fn(|i| spa_theta(&paulis[i]).expect("2x2"));
    let depol: [CMatrix; 4] = std::array::from_fn(|j| depol_d(&paulis[j]).expect("2x2"));

    let mut out = CMatrix::zeros(4).expect("4x4");
    for i in 0..4 {
        for j in 0..4 {
            let basis = kron(&paulis[i], &paulis[j]).expect("2x2 factors");
            // Pauli products are orthogonal with Tr(P_ij P_kl) = 4δ.
            let coeff = (basis * *x).trace() * 0.25;
            if coeff.norm() == 0.0 {
                continue;
            }
            let first = kron(&paulis[i], &t_tilde[j]).expect("2x2 factors") * (1.0 / 3.0);
            let second = kron(&theta[i], &depol[j]).expect("2x2 factors") * (2.0 / 3.0);
            out = out + (first + second) * coeff;
        }
    }
    out
}

/// ρ̃ from the local-channel composition; the result must be a valid state.
pub fn spa_pt_compositional(rho: &DensityMatrix) -> Result<SpaOutcome> {
    let out = SpaOutcome::from_matrix(compositional_map(rho.matrix()), SpaMethod::Compositional)?;
    if !out.is_valid_state() {
        let detail = out
            .diagnostics
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("; ");
        return Err(Error::ConstructionInconsistency {
            spectrum: out.spectrum.values,
            detail,
        });
    }
    Ok(out)
}

/// ρ̃ assembled from the published entry table E_ij(t); returned as is, with
/// any density-matrix violations listed in `diagnostics`.
pub fn spa_pt_entry_table(rho: &DensityMatrix) -> SpaOutcome {
    let m = rho.matrix();
    let t = |i: usize, j: usize| m[(i - 1, j - 1)];
    let ninth = 1.0 / 9.0;
    let two = C64::new(2.0, 0.0);

    let mut e = CMatrix::zeros(4).expect("4x4");
    e[(0, 0)] = (two + t(1, 1)) * ninth;
    e[(1, 1)] = (two + t(2, 2)) * ninth;
    e[(2, 2)] = (two + t(3, 3)) * ninth;
    e[(3, 3)] = (two + t(4, 4)) * ninth;
    e[(0, 1)] = (-I * t(1, 2) + t(1, 2).conj()) * ninth;
    e[(0, 2)] = (t(1, 3) - I * (t(1, 3).conj() + t(2, 4).conj())) * ninth;
    e[(0, 3)] = (-I * t(1, 4) + t(2, 3)) * ninth;
    e[(1, 2)] = (t(1, 4) + I * t(2, 3)) * ninth;
    e[(1, 3)] = -I * (t(1, 3).conj() + t(2, 4).conj()) * ninth;
    e[(2, 3)] = (-I * t(3, 4) + t(3, 4).conj()) * ninth;
    for i in 0..4 {
        for j in (i + 1)..4 {
            e[(j, i)] = e[(i, j)].conj();
        }
    }
    SpaOutcome::from_matrix(e, SpaMethod::EntryTable).expect("entry table is Hermitian by construction")
}

/// Two-qubit linear maps whose Choi operators can be certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    Affine,
    Compositional,
    PartialTranspose,
    Identity,
}

impl ChannelKind {
    pub fn apply(self, x: &CMatrix) -> CMatrix {
        match self {
            ChannelKind::Affine => affine_map(x),
            ChannelKind::Compositional => compositional_map(x),
            ChannelKind::PartialTranspose => partial_transpose_b(x).expect("4x4"),
            ChannelKind::Identity => *x,
        }
    }
}

/// Choi operator Σ_{ij} |i⟩⟨j| ⊗ Φ(|i⟩⟨j|), stored as a 4×4 grid of 4×4 blocks.
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    /// `blocks[i][j]` = Φ(|i⟩⟨j|).
    pub blocks: [[CMatrix; 4]; 4],
}

impl ChoiMatrix {
    pub fn dense(&self) -> Vec<C64> {
        let mut out = vec![ZERO; 256];
        for (i, row) in self.blocks.iter().enumerate() {
            for (j, block) in row.iter().enumerate() {
                for r in 0..4 {
                    for c in 0..4 {
                        out[(4 * i + r) * 16 + 4 * j + c] = block[(r, c)];
                    }
                }
            }
        }
        out
    }

    pub fn spectrum(&self) -> Spectrum {
        herm_eigen_dense(16, &self.dense()).expect("Choi operator of a Hermiticity-preserving map")
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.spectrum().min()
    }

    /// Complete positivity: the Choi operator is PSD within 1e-10.
    pub fn is_cp(&self) -> bool {
        self.min_eigenvalue() >= -CP_TOL
    }
}

pub fn choi_matrix(kind: ChannelKind) -> ChoiMatrix {
    let blocks = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut e = CMatrix::zeros(4).expect("4x4");
            e[(i, j)] = ONE;
            kind.apply(&e)
        })
    });
    ChoiMatrix { blocks }
}
