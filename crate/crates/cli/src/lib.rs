//! Certification runs over the models of `gq-core`: each run compares the
//! computed invariants against a versioned table of expected values and
//! emits a deterministic report.

pub mod checks;
pub mod config;
pub mod expected;
pub mod report;

use gq_core::cohomology::{
    deformation_number, hodge_linear_section, hodge_q1_model, quotient_invariants,
    DeformationReport, NumericalInvariants, ZeroLocus,
};
use gq_core::exactfield::{Field, PrimeField, Rationals};
use gq_core::models::*;
use gq_core::symmetry::invariant_q1_family;
use serde::Serialize;
use thiserror::Error;

pub use checks::Runner;
pub use config::{ModelName, OutputFormat, RunConfig, Toggles};
pub use expected::ExpectedTable;
pub use report::{CertificationReport, Check, Stage, Verdict};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("no expected value for check {0}")]
    MissingExpectation(String),
    #[error("{0}")]
    Compute(String),
}

/// Runs the pipeline of `config.model` (and its upstream models with `full`).
pub fn run(config: &RunConfig) -> Result<CertificationReport, CliError> {
    run_models(config, &Runner::pipeline(config.model, config.full))
}

/// Runs the given models in order, each check at most once.
pub fn run_models(
    config: &RunConfig,
    models: &[ModelName],
) -> Result<CertificationReport, CliError> {
    config.validate()?;
    let table = ExpectedTable::builtin();
    let mut runner = Runner::new(config, &table);
    for &m in models {
        runner.run_model(m);
    }
    if config.toggles.properties {
        runner.run_properties();
    }
    Ok(CertificationReport::new(
        config.clone(),
        &table.version,
        runner.finish(),
    ))
}

/// Every model, plus the property suites.
pub fn full_report(config: &RunConfig) -> Result<CertificationReport, CliError> {
    let mut cfg = config.clone();
    cfg.toggles.properties = true;
    run_models(&cfg, &ModelName::ALL)
}

/// Resolves the alias `D7` to the dihedral action of `model`.
pub fn resolve_group(model: ModelName, group: Option<&str>) -> Result<String, CliError> {
    match group {
        None => Ok(model.default_group().into()),
        Some("D7") => {
            let g = model.default_group();
            if g.starts_with("D7") {
                Ok(g.into())
            } else {
                Err(CliError::Config(format!(
                    "model {} carries no D7 action",
                    model.as_str()
                )))
            }
        }
        Some(g) => Ok(g.into()),
    }
}

fn compute(e: impl std::fmt::Display) -> CliError {
    CliError::Compute(e.to_string())
}

fn export_over<F: Field>(
    f: &F,
    model: ModelName,
    seed: u64,
    primes: &[u64],
) -> Result<ModelExport, CliError> {
    let c = generic_integers_for(seed, 6, primes);
    let h = generic_integers_for(seed + 100, 6, primes);
    let (h1, h2) = ([h[0], h[1], h[2]], [h[3], h[4], h[5]]);
    let s = Some(seed);
    let m = match model {
        ModelName::Z => build_z(f, &c, s),
        ModelName::WZ => build_w_z(f, &c, &h1, s),
        ModelName::SZ => build_s_z(f, &c, &h1, &h2, s),
        ModelName::SFmt => build_s_format_from_hyperplanes(f, &c, &h1, &h2, s),
        ModelName::T36 => build_t_gr36(f, &symmetric_alpha(seed), s),
        ModelName::Y => {
            let fam = invariant_q1_family(f).map_err(compute)?;
            let vals: Vec<F::Elem> = fam
                .parameters
                .iter()
                .map(|n| f.from_i64(Z_PARAMETERS.iter().position(|p| p == n).map_or(1, |i| c[i])))
                .collect();
            let lambda = fam.section(f, &vals).map_err(compute)?;
            build_y_quadrics(f, &lambda, s)
        }
        ModelName::Dual => build_dual(f, &c, &h1, s).map(|d| d.wdual),
        ModelName::Campedelli => build_dual(f, &c, &h1, s).map(|d| d.slice),
        ModelName::AppA1 => build_appendix_a_models(f, seed).map(|m| m.0),
        ModelName::AppA2 => build_appendix_a_models(f, seed).map(|m| m.1),
    };
    Ok(m.map_err(compute)?.export())
}

/// The model's equations over `F_p`, or over `Q` without a prime.
pub fn build_export(
    model: ModelName,
    seed: u64,
    prime: Option<u64>,
) -> Result<ModelExport, CliError> {
    match prime {
        Some(p) => export_over(&PrimeField::new(p).map_err(compute)?, model, seed, &[p]),
        None => export_over(&Rationals, model, seed, &[]),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HodgeOutput {
    pub grassmannian: (usize, usize),
    pub codim: usize,
    pub invariants: NumericalInvariants,
    pub diamond_rows: Vec<Vec<i64>>,
    /// Injectivity of `H^0(T_G) → H^0(N)` is assumed here.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deformations: Option<DeformationReport>,
}

/// Hodge numbers of a linear section of `Gr(k,n)`, or of the `Q*(1)` model
/// cut by `codim - 6` hyperplanes when `q1` is set.
pub fn hodge_command(k: usize, n: usize, codim: usize, q1: bool) -> Result<HodgeOutput, CliError> {
    let inv = if q1 {
        if (k, n) != (2, 6) || codim < 6 {
            return Err(CliError::Config(
                "the Q*(1) model lives on Gr(2,6) with codim >= 6".into(),
            ));
        }
        hodge_q1_model(codim - 6)
    } else {
        hodge_linear_section(k, n, codim)
    }
    .map_err(compute)?;
    let deformations = if q1 {
        None
    } else {
        deformation_number(&ZeroLocus::linear_section(k, n, codim), None).ok()
    };
    Ok(HodgeOutput {
        grassmannian: (k, n),
        codim,
        diamond_rows: inv.diamond.rows(),
        invariants: inv,
        deformations,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct QuotientOutput {
    pub cover: NumericalInvariants,
    pub order: i64,
    pub quotient: NumericalInvariants,
    pub diamond_rows: Vec<Vec<i64>>,
}

/// Invariants of the free quotient by a group of order `order`.
pub fn quotient_command(
    k: usize,
    n: usize,
    codim: usize,
    order: i64,
    h11: Option<i64>,
) -> Result<QuotientOutput, CliError> {
    let cover = hodge_linear_section(k, n, codim).map_err(compute)?;
    let quotient = quotient_invariants(&cover, order, true, h11).map_err(compute)?;
    Ok(QuotientOutput {
        order,
        diamond_rows: quotient.diamond.rows(),
        cover,
        quotient,
    })
}

/// Markdown rendering of centered diamond rows.
pub fn diamond_markdown(title: &str, rows: &[Vec<i64>]) -> String {
    let width = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut s = format!("## {title}\n\n```\n");
    for r in rows {
        let pad = (width - r.len()) * 3;
        let cells: Vec<String> = r.iter().map(|x| format!("{x:>5}")).collect();
        s.push_str(&" ".repeat(pad));
        s.push_str(cells.join(" ").trim_end());
        s.push('\n');
    }
    s.push_str("```\n");
    s
}
