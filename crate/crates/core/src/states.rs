//! Validated two-qubit density matrices and the state families used by the
//! sweeps and studies.
//!
//! The Horodecki family uses |ψ⁺⟩ = (|01⟩ + |10⟩)/√2. With that choice the
//! SPA-PT output of `family_horodecki(p)` has its (1,1) entry equal to
//! (3 − p)/9 and the p/18 coherence in the |00⟩/|11⟩ corner.

use std::fmt;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result, Violation};
use crate::qmat::{herm_eigen, vec_norm, CMatrix, Spectrum, C64, PSD_CLAMP, VALIDATE_TOL, ZERO};

const NORMALIZE_TOL: f64 = 1e-6;

/// A 4×4 Hermitian, unit-trace, positive semidefinite operator.
#[derive(Clone, Copy, PartialEq)]
pub struct DensityMatrix(CMatrix);

impl fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DensityMatrix({:?})", self.0)
    }
}

impl DensityMatrix {
    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn spectrum(&self) -> Spectrum {
        herm_eigen(&self.0).expect("validated state is Hermitian")
    }

    /// I/4.
    pub fn maximally_mixed() -> Self {
        DensityMatrix(crate::qmat::identity4() * 0.25)
    }

    /// Wraps a matrix the caller has already checked.
    pub(crate) fn new_unchecked(m: CMatrix) -> Self {
        DensityMatrix(m)
    }
}

/// Lists every violated density-matrix invariant of `m`.
pub fn violations(m: &CMatrix) -> Result<Vec<Violation>> {
    if m.dim() != 4 {
        return Err(Error::Dimension {
            expected: "4x4".into(),
            got: format!("{0}x{0}", m.dim()),
        });
    }
    let mut out = Vec::new();
    let asym = m.hermitian_asymmetry();
    if asym > VALIDATE_TOL || asym.is_nan() {
        out.push(Violation::NonHermitian { max_asymmetry: asym });
    }
    let trace = m.trace().re;
    if (trace - 1.0).abs() > VALIDATE_TOL || trace.is_nan() {
        out.push(Violation::Trace {
            trace,
            deviation: (trace - 1.0).abs(),
        });
    }
    let herm = m.hermitian_part();
    if herm.entries().iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        let min = herm_eigen(&herm)?.min();
        if min < -PSD_CLAMP {
            out.push(Violation::NotPsd { min_eigenvalue: min });
        }
    } else {
        out.push(Violation::NotPsd {
            min_eigenvalue: f64::NAN,
        });
    }
    Ok(out)
}

/// Accepts `m` as a density matrix or reports every violated invariant.
pub fn validate(m: CMatrix) -> Result<DensityMatrix> {
    let v = violations(&m)?;
    if v.is_empty() {
        Ok(DensityMatrix(m))
    } else {
        Err(Error::InvalidState { violations: v })
    }
}

/// Rank-one projector |v⟩⟨v|; inputs within 1e-6 of unit norm are normalized.
pub fn pure_from_vector(v: &[C64; 4]) -> Result<DensityMatrix> {
    let norm = vec_norm(v);
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    if (norm - 1.0).abs() > NORMALIZE_TOL || norm.is_nan() {
        return Err(Error::Unnormalized { norm });
    }
    let u: Vec<C64> = v.iter().map(|z| z / norm).collect();
    Ok(DensityMatrix(CMatrix::outer(&u, &u)?))
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// M|01⟩⟨01| + √(M(1−M))(|01⟩⟨10| + |10⟩⟨01|) + (1−M)|10⟩⟨10|.
pub fn family_pure_m(m: f64) -> Result<DensityMatrix> {
    check_range("M", m, 0.0, 1.0, 0.0)?;
    let mut mat = CMatrix::zeros(4)?;
    let coh = (m * (1.0 - m)).sqrt();
    mat[(1, 1)] = real(m);
    mat[(2, 2)] = real(1.0 - m);
    mat[(1, 2)] = real(coh);
    mat[(2, 1)] = real(coh);
    Ok(DensityMatrix(mat))
}

/// p|ψ⁺⟩⟨ψ⁺| + (1−p)|00⟩⟨00| with |ψ⁺⟩ = (|01⟩ + |10⟩)/√2.
pub fn family_horodecki(p: f64) -> Result<DensityMatrix> {
    check_range("p", p, 0.0, 1.0, 0.0)?;
    let mut mat = CMatrix::zeros(4)?;
    mat[(0, 0)] = real(1.0 - p);
    for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        mat[(i, j)] = real(p / 2.0);
    }
    Ok(DensityMatrix(mat))
}

/// Rank-2 quasi-distillable state whose concurrence is `c`.
pub fn family_quasi(c: f64) -> Result<DensityMatrix> {
    check_range("C", c, 0.0, 1.0, 0.0)?;
    let mut mat = CMatrix::zeros(4)?;
    for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        mat[(i, j)] = real(c / 2.0);
    }
    mat[(1, 1)] = real(1.0 - c);
    Ok(DensityMatrix(mat))
}

/// Bell projector: 0 = Φ⁺, 1 = Φ⁻, 2 = Ψ⁺, 3 = Ψ⁻.
pub fn bell(index: u8) -> Result<DensityMatrix> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let v = match index {
        0 => [real(s), ZERO, ZERO, real(s)],
        1 => [real(s), ZERO, ZERO, real(-s)],
        2 => [ZERO, real(s), real(s), ZERO],
        3 => [ZERO, real(s), real(-s), ZERO],
        _ => {
            return Err(Error::OutOfRange {
                name: "bell index",
                value: index as f64,
                lo: 0.0,
                hi: 3.0,
            })
        }
    };
    pure_from_vector(&v)
}

/// Generator for the `stream`-th independent sample derived from `seed`.
///
/// ChaCha20 keyed by `seed` (through `SeedableRng::seed_from_u64`) with the
/// stream id set to `stream`. Sample `i` of any ensemble or trial `i` of a
/// shot simulation uses stream `i`, so results do not depend on the order or
/// thread in which samples are drawn.
pub fn sample_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn complex_normal(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state: four complex standard normals, normalized.
pub fn random_pure(rng: &mut impl Rng) -> DensityMatrix {
    loop {
        let v: [C64; 4] = std::array::from_fn(|_| complex_normal(rng));
        let norm = vec_norm(&v);
        if norm > 0.0 {
            let u: Vec<C64> = v.iter().map(|z| z / norm).collect();
            return DensityMatrix(CMatrix::outer(&u, &u).expect("4-vectors"));
        }
    }
}

/// Ginibre-random mixed state G·G†/Tr(G·G†) with G a 4 × `rank` complex Gaussian matrix.
pub fn random_mixed(rng: &mut impl Rng, rank: usize) -> Result<DensityMatrix> {
    if !(1..=4).contains(&rank) {
        return Err(Error::OutOfRange {
            name: "rank",
            value: rank as f64,
            lo: 1.0,
            hi: 4.0,
        });
    }
    let g: Vec<[C64; 4]> = (0..4)
        .map(|_| {
            let mut row = [ZERO; 4];
            for z in row.iter_mut().take(rank) {
                *z = complex_normal(rng);
            }
            row
        })
        .collect();
    let mut m = CMatrix::from_fn(4, |i, j| (0..rank).map(|k| g[i][k] * g[j][k].conj()).sum())?;
    let tr = m.trace().re;
    m = m * (1.0 / tr);
    // Exact Hermitian symmetry; the products above agree only to rounding.
    m = m.hermitian_part();
    Ok(DensityMatrix(m))
}

/// A state source: a parametric family member or a matrix stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Raw { path: PathBuf },
    PureM(f64),
    Horodecki(f64),
    Quasi(f64),
    Bell(u8),
    MaximallyMixed,
}

impl StateSpec {
    pub fn resolve(&self) -> Result<DensityMatrix> {
        match self {
            StateSpec::Raw { path } => load_state(path),
            StateSpec::PureM(m) => family_pure_m(*m),
            StateSpec::Horodecki(p) => family_horodecki(*p),
            StateSpec::Quasi(c) => family_quasi(*c),
            StateSpec::Bell(i) => bell(*i),
            StateSpec::MaximallyMixed => Ok(DensityMatrix::maximally_mixed()),
        }
    }
}

/// On-disk layout: real and imaginary parts as separate row-major 4×4 arrays.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl StateFile {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let n = m.dim();
        let part = |f: fn(&C64) -> f64| (0..n).map(|i| (0..n).map(|j| f(&m[(i, j)])).collect()).collect();
        StateFile {
            re: part(|z| z.re),
            im: part(|z| z.im),
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == 4 && rows.iter().all(|r| r.len() == 4);
        if !shape_ok(&self.re) || !shape_ok(&self.im) {
            return Err(Error::Format("\"re\" and \"im\" must both be 4x4 arrays".into()));
        }
        CMatrix::from_fn(4, |i, j| C64::new(self.re[i][j], self.im[i][j]))
    }
}

/// Parses a state file's JSON text without validating the matrix.
pub fn parse_state_matrix(text: &str) -> Result<CMatrix> {
    let file: StateFile = serde_json::from_str(text)?;
    file.to_matrix()
}

pub fn load_state(path: &Path) -> Result<DensityMatrix> {
    let text = std::fs::read_to_string(path)?;
    validate(parse_state_matrix(&text)?)
}

pub fn state_to_json(rho: &DensityMatrix) -> String {
    serde_json::to_string_pretty(&StateFile::from_matrix(rho.matrix())).expect("plain numbers serialize")
}

pub fn save_state(path: &Path, rho: &DensityMatrix) -> Result<()> {
    std::fs::write(path, state_to_json(rho) + "\n")?;
    Ok(())
}
