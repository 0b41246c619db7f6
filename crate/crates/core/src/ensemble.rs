//! Batch evaluation over seeded random-state ensembles.

use serde::Serialize;

use crate::error::Result;
use crate::exec::Execution;
use crate::measures::{full_report, negative_pt_eigenvalues, nn_from_nd, verstraete_rhs};
use crate::spa::spa_pt_affine;
use crate::states::{random_mixed, random_pure, sample_rng, DensityMatrix};

/// PT eigenvalues below −NEG_EIG_TOL count as negative.
pub const NEG_EIG_TOL: f64 = 1e-10;

/// Which ensemble to draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ensemble {
    /// Haar-random pure states.
    Pure,
    /// Ginibre mixed states of the given rank (1..=4).
    Mixed(usize),
}

impl Ensemble {
    pub fn rank(self) -> usize {
        match self {
            Ensemble::Pure => 1,
            Ensemble::Mixed(r) => r,
        }
    }

    /// Sample `index` of the ensemble seeded by `seed`.
    pub fn sample(self, seed: u64, index: u64) -> Result<DensityMatrix> {
        let mut rng = sample_rng(seed, index);
        match self {
            Ensemble::Pure => Ok(random_pure(&mut rng)),
            Ensemble::Mixed(rank) => random_mixed(&mut rng, rank),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleRow {
    pub seed_index: u64,
    pub rank: usize,
    pub nd: f64,
    pub nn: f64,
    pub mu_min: f64,
    pub concurrence: f64,
    pub ppt: bool,
    pub neg_pt_eigs: usize,
    /// |N^D − max(0, 4 − 18 μ_min)|.
    pub tightness_violation: f64,
    /// |N^N − N^D(338 + N^D)/339|.
    pub universal_violation: f64,
    /// max(0, rhs(C) − N^D) for the negativity–concurrence lower bound.
    pub verstraete_violation: f64,
    /// False if the affine SPA output failed density-matrix validation.
    pub spa_valid: bool,
}

pub fn evaluate_state(rho: &DensityMatrix, seed_index: u64, rank: usize) -> EnsembleRow {
    let report = full_report(rho);
    let spa = spa_pt_affine(rho);
    EnsembleRow {
        seed_index,
        rank,
        nd: report.nd,
        nn: report.nn,
        mu_min: report.mu_min,
        concurrence: report.concurrence,
        ppt: report.ppt,
        neg_pt_eigs: negative_pt_eigenvalues(rho, NEG_EIG_TOL),
        tightness_violation: (report.nd - (4.0 - 18.0 * report.mu_min).max(0.0)).abs(),
        universal_violation: (report.nn - nn_from_nd(report.nd)).abs(),
        verstraete_violation: (verstraete_rhs(report.concurrence).expect("C in [0, 1]") - report.nd).max(0.0),
        spa_valid: spa.is_valid_state(),
    }
}

/// Evaluates samples `0..count`; row order is the sample order in every mode.
pub fn evaluate(ensemble: Ensemble, count: u64, seed: u64, exec: Execution) -> Result<Vec<EnsembleRow>> {
    exec.map_range(count, |i| {
        ensemble
            .sample(seed, i)
            .map(|rho| evaluate_state(&rho, i, ensemble.rank()))
    })
    .into_iter()
    .collect()
}

/// Worst-case invariant deviations over a set of rows.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct EnsembleSummary {
    pub rows: u64,
    pub max_tightness_violation: f64,
    pub max_universal_violation: f64,
    pub max_verstraete_violation: f64,
    pub rows_with_multiple_negative_pt_eigs: u64,
    pub invalid_spa_outputs: u64,
    pub entangled: u64,
}

impl EnsembleSummary {
    pub fn from_rows(rows: &[EnsembleRow]) -> Self {
        rows.iter().fold(EnsembleSummary::default(), |mut s, r| {
            s.rows += 1;
            s.max_tightness_violation = s.max_tightness_violation.max(r.tightness_violation);
            s.max_universal_violation = s.max_universal_violation.max(r.universal_violation);
            s.max_verstraete_violation = s.max_verstraete_violation.max(r.verstraete_violation);
            s.rows_with_multiple_negative_pt_eigs += u64::from(r.neg_pt_eigs >= 2);
            s.invalid_spa_outputs += u64::from(!r.spa_valid);
            s.entangled += u64::from(!r.ppt);
            s
        })
    }
}
