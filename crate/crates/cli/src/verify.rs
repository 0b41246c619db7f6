//! Plain-text audit of the SPA-PT constructions.

use std::fmt::Write;

use spa_negativity::qmat::partial_transpose_b;
use spa_negativity::spa::{
    choi_matrix, spa_pt_affine, spa_pt_compositional, spa_pt_entry_table, ChannelKind, SpaConstants,
    TransposeRealization, MU_MIN_LOWER, MU_MIN_UPPER,
};
use spa_negativity::states::{family_horodecki, family_pure_m, random_mixed, random_pure, sample_rng};
use spa_negativity::{DensityMatrix, Result};

pub const INVARIANT_TOL: f64 = 1e-10;
const CHOI_TOL: f64 = 1e-12;
const CLOSED_FORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub count: u64,
    pub seed: u64,
    pub points: usize,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub text: String,
    /// False when an invariant of the affine construction failed.
    pub affine_ok: bool,
    pub compositional_deviation: f64,
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn grid(points: usize) -> impl Iterator<Item = f64> {
    (0..points).map(move |k| k as f64 / (points - 1) as f64)
}

struct RandomAudit {
    compositional_deviation: f64,
    compositional_failures: u64,
    trace_residual: f64,
    invalid_outputs: u64,
    mu_lo: f64,
    mu_hi: f64,
    literal_entry_deviation: f64,
    literal_mu_deviation: f64,
}

fn audit_random(cfg: VerifyConfig) -> Result<RandomAudit> {
    let mut a = RandomAudit {
        compositional_deviation: 0.0,
        compositional_failures: 0,
        trace_residual: 0.0,
        invalid_outputs: 0,
        mu_lo: f64::INFINITY,
        mu_hi: f64::NEG_INFINITY,
        literal_entry_deviation: 0.0,
        literal_mu_deviation: 0.0,
    };
    for i in 0..cfg.count {
        let mut rng = sample_rng(cfg.seed, i);
        let rho = random_mixed(&mut rng, 4)?;
        let p = random_pure(&mut rng);
        let affine = spa_pt_affine(&rho);

        match spa_pt_compositional(&rho) {
            Ok(c) => {
                a.compositional_deviation = a
                    .compositional_deviation
                    .max(c.rho_tilde.max_abs_diff(&affine.rho_tilde))
            }
            Err(_) => a.compositional_failures += 1,
        }

        let pt = partial_transpose_b(rho.matrix())?;
        let lhs = (*p.matrix() * pt).trace().re;
        let rhs = 9.0 * (*p.matrix() * affine.rho_tilde).trace().re - 2.0;
        a.trace_residual = a.trace_residual.max((lhs - rhs).abs());

        a.invalid_outputs += u64::from(!affine.is_valid_state());
        a.mu_lo = a.mu_lo.min(affine.mu_min);
        a.mu_hi = a.mu_hi.max(affine.mu_min);

        let literal = spa_pt_entry_table(&rho);
        a.literal_entry_deviation = a
            .literal_entry_deviation
            .max(literal.rho_tilde.max_abs_diff(&affine.rho_tilde));
        a.literal_mu_deviation = a.literal_mu_deviation.max((literal.mu_min - affine.mu_min).abs());
    }
    Ok(a)
}

/// Writes a table of the entry-table construction against the affine map and
/// a closed-form μ_min; returns the worst closed-form mismatch.
fn literal_family_table(
    out: &mut String,
    title: &str,
    points: usize,
    family: fn(f64) -> Result<DensityMatrix>,
    closed_form: fn(f64) -> f64,
) -> Result<f64> {
    writeln!(out, "[entry-table construction: {title}]").unwrap();
    writeln!(
        out,
        "{:>6}  {:>22}  {:>22}  {:>22}  {:>10}  {:>10}",
        "param", "mu_entry_table", "mu_closed_form", "mu_affine", "|dmu|", "max|dR|"
    )
    .unwrap();
    let mut worst: f64 = 0.0;
    for x in grid(points) {
        let rho = family(x)?;
        let literal = spa_pt_entry_table(&rho);
        let affine = spa_pt_affine(&rho);
        let mu_cf = closed_form(x);
        let dmu = (literal.mu_min - mu_cf).abs();
        worst = worst.max(dmu);
        writeln!(
            out,
            "{x:>6.3}  {:>22.16e}  {mu_cf:>22.16e}  {:>22.16e}  {dmu:>10.2e}  {:>10.2e}",
            literal.mu_min,
            affine.mu_min,
            literal.rho_tilde.max_abs_diff(&affine.rho_tilde)
        )
        .unwrap();
    }
    writeln!(
        out,
        "max |mu_entry_table - mu_closed_form| = {worst:.3e} (tolerance {CLOSED_FORM_TOL:e}) {}\n",
        verdict(worst <= CLOSED_FORM_TOL)
    )
    .unwrap();
    Ok(worst)
}

pub fn spa_verify(cfg: VerifyConfig) -> Result<VerifyReport> {
    let mut out = String::new();
    let k = SpaConstants::get();
    let residual = k.completeness_residual();
    let realization = k.realization();

    writeln!(out, "SPA-PT verification report").unwrap();
    writeln!(
        out,
        "seed = {}, random states = {}, grid points = {}\n",
        cfg.seed, cfg.count, cfg.points
    )
    .unwrap();

    writeln!(out, "[measurement constants]").unwrap();
    writeln!(out, "b1 = {:.16e} {:+.16e}i", k.b1.re, k.b1.im).unwrap();
    writeln!(out, "b2 = {:.16e} {:+.16e}i", k.b2.re, k.b2.im).unwrap();
    writeln!(
        out,
        "povm completeness residual = {residual:.3e} (tolerance {:e})",
        INVARIANT_TOL
    )
    .unwrap();
    let realization_text = match realization {
        TransposeRealization::Measurement => "measure-and-prepare over the complete POVM",
        TransposeRealization::ClosedForm => "closed form (x^T + Tr(x) I)/3, POVM incomplete",
    };
    writeln!(out, "transpose realization = {realization_text}\n").unwrap();

    let audit = audit_random(cfg)?;

    writeln!(out, "[compositional vs affine]").unwrap();
    let comp_ok = audit.compositional_failures == 0 && audit.compositional_deviation <= INVARIANT_TOL;
    writeln!(
        out,
        "max entry deviation = {:.3e} over {} states (tolerance {:e}) {}",
        audit.compositional_deviation,
        cfg.count,
        INVARIANT_TOL,
        verdict(comp_ok)
    )
    .unwrap();
    writeln!(
        out,
        "invalid compositional outputs = {}\n",
        audit.compositional_failures
    )
    .unwrap();

    writeln!(out, "[affine invariants]").unwrap();
    let trace_ok = audit.trace_residual <= INVARIANT_TOL;
    writeln!(
        out,
        "trace relation max residual = {:.3e} (tolerance {:e}) {}",
        audit.trace_residual,
        INVARIANT_TOL,
        verdict(trace_ok)
    )
    .unwrap();
    let valid_ok = audit.invalid_outputs == 0;
    writeln!(
        out,
        "invalid outputs = {}/{} {}",
        audit.invalid_outputs,
        cfg.count,
        verdict(valid_ok)
    )
    .unwrap();
    let range_ok =
        cfg.count == 0 || (audit.mu_lo >= MU_MIN_LOWER - INVARIANT_TOL && audit.mu_hi <= MU_MIN_UPPER + INVARIANT_TOL);
    writeln!(
        out,
        "mu_min range = [{:.16e}, {:.16e}] within [1/6, 1/4] {}\n",
        audit.mu_lo,
        audit.mu_hi,
        verdict(range_ok)
    )
    .unwrap();

    literal_family_table(&mut out, "pure_m", cfg.points, family_pure_m, |m| {
        2.0 / 9.0 - (m * (1.0 - m)).sqrt() / 9.0
    })?;
    literal_family_table(&mut out, "horodecki", cfg.points, family_horodecki, |p| {
        5.0 / 18.0 - p / 18.0 - (1.0 - 2.0 * p + 2.0 * p * p).sqrt() / 18.0
    })?;
    writeln!(out, "[entry-table construction: random states]").unwrap();
    writeln!(
        out,
        "max entry deviation from affine = {:.3e}",
        audit.literal_entry_deviation
    )
    .unwrap();
    writeln!(
        out,
        "max |mu_min deviation| from affine = {:.3e}\n",
        audit.literal_mu_deviation
    )
    .unwrap();

    writeln!(out, "[Choi certification]").unwrap();
    let mut choi_ok = true;
    for (name, kind, expect_cp) in [
        ("affine", ChannelKind::Affine, true),
        ("compositional", ChannelKind::Compositional, true),
        ("partial transpose", ChannelKind::PartialTranspose, false),
        ("identity", ChannelKind::Identity, true),
    ] {
        let min = choi_matrix(kind).min_eigenvalue();
        let cp = min >= -CHOI_TOL;
        writeln!(
            out,
            "{name:<18} min eigenvalue = {:+.6e}  {}",
            min,
            if cp { "CP" } else { "not CP" }
        )
        .unwrap();
        if matches!(kind, ChannelKind::Affine | ChannelKind::PartialTranspose) {
            choi_ok &= cp == expect_cp;
        }
    }

    let affine_ok = trace_ok && valid_ok && range_ok && choi_ok;
    writeln!(out, "\naffine invariants: {}", verdict(affine_ok)).unwrap();

    Ok(VerifyReport {
        text: out,
        affine_ok,
        compositional_deviation: audit.compositional_deviation,
    })
}
