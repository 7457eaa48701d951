//! The five subcommand bodies.
//!
//! Every body returns a fully rendered payload plus the all-pass verdict;
//! writing the payload and choosing the exit code stay in `main`. Grid
//! cells and suite cases run on an explicitly sized worker pool, and the
//! results are reassembled in the fixed cell order, so identical flags
//! always produce identical bytes.

use rayon::prelude::*;
use serde::Serialize;
use supercontact::verify::{self, CaseResult};
use supercontact::{
    basis_of, classify, h1_dimension, scan_constraint_variety, structure_constants, Algebra,
    GeneratorId, H1Report, HKind, MuRule, Scalar, Variables, VarietyCell,
};

use crate::config::{AlgebraOpt, AxisSpec, CliError, Format, OpTypeOpt, RunConfig};
use crate::render;

/// A finished run: the rendered report and whether every case passed.
pub struct Outcome {
    pub payload: String,
    pub all_pass: bool,
}

fn make_pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Config(format!("cannot build a {jobs}-worker pool: {e}")))
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError::Io(format!("report serialization failed: {e}")))
}

/// The level of the opposite-weight resonance `(-k/2, k/2)` at this cell,
/// when the cell is of that shape.
fn resonance_level(lambda: &Scalar, mu: &Scalar) -> Option<i64> {
    let sum = lambda + mu;
    let diff = mu - lambda;
    if sum.is_zero() && diff.is_integer() && !diff.is_negative() && !diff.is_zero() {
        diff.to_i64()
    } else {
        None
    }
}

/// The dimension table: what the first cohomology of the second-order
/// operator module must be at a weight cell, absolutely or relative to the
/// five-generator subalgebra.
fn expected_h1(lambda: &Scalar, mu: &Scalar, relative: bool) -> u32 {
    let resonant = resonance_level(lambda, mu).is_some();
    if relative {
        if lambda == mu {
            u32::from(!lambda.is_zero())
        } else if resonant {
            1
        } else {
            0
        }
    } else if lambda == mu {
        2
    } else if resonant {
        3
    } else {
        0
    }
}

fn dimension_case(cfg: &RunConfig, lambda: &Scalar, mu: &Scalar) -> CaseResult {
    let id = format!(
        "{}dimension-grid lambda={lambda} mu={mu}",
        if cfg.relative { "relative-" } else { "" }
    );
    let window = cfg.window_for(lambda, mu);
    let report = match h1_dimension(
        lambda,
        mu,
        Algebra::Osp22,
        Variables::TwoTheta,
        cfg.relative,
        Some(window),
    ) {
        Ok(r) => r,
        Err(e) => {
            return CaseResult {
                id,
                pass: false,
                certificate: None,
                witness: Some(format!("engine error: {e}")),
            }
        }
    };
    let expected = expected_h1(lambda, mu, cfg.relative);
    if report.h1_dim == expected && report.plateau {
        CaseResult {
            id,
            pass: true,
            certificate: Some(format!(
                "h1_dim = {} (z1_dim = {}, b1_dim = {}); matches the dimension table; \
                 stable window at order {}, degree {}",
                report.h1_dim,
                report.z1_dim,
                report.b1_dim,
                report.truncation.order,
                report.truncation.degree
            )),
            witness: None,
        }
    } else if report.h1_dim != expected {
        CaseResult {
            id,
            pass: false,
            certificate: None,
            witness: Some(format!(
                "h1_dim = {} but the dimension table expects {}",
                report.h1_dim, expected
            )),
        }
    } else {
        CaseResult {
            id,
            pass: false,
            certificate: None,
            witness: Some(format!(
                "h1_dim = {} matches the table, but the window (order {}, degree {}) \
                 is not yet stable",
                report.h1_dim, report.truncation.order, report.truncation.degree
            )),
        }
    }
}

/// `verify`: the full suite, plus one dimension case per requested grid
/// cell. Exit 0 exactly when every case passes.
pub fn run_verify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let pool = make_pool(cfg.jobs)?;
    let suite = verify::checks();
    let mut cases: Vec<CaseResult> =
        pool.install(|| suite.par_iter().map(|(_, check)| check()).collect());
    if let Some((lambdas, mus)) = cfg.weight_grid(false) {
        let cells: Vec<(Scalar, Scalar)> = lambdas
            .iter()
            .flat_map(|l| mus.iter().map(move |m| (l.clone(), m.clone())))
            .collect();
        let extra: Vec<CaseResult> = pool.install(|| {
            cells
                .par_iter()
                .map(|(l, m)| dimension_case(cfg, l, m))
                .collect()
        });
        cases.extend(extra);
    }
    let mut report = verify::report_from_cases(cases);
    if let Some(n) = cfg.order {
        report.truncation_order_rule = format!("order = {n}");
    }
    if let Some(m) = cfg.degree {
        report.truncation_degree = m;
    }
    let all_pass = report.failed == 0;
    let payload = match cfg.format {
        Format::Json => to_json(&report)?,
        Format::Text => render::verify_text(&report),
    };
    Ok(Outcome { payload, all_pass })
}

/// `scan`: one dimension report per grid cell, in row-major cell order.
pub fn run_scan(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (lambdas, mus) = cfg
        .weight_grid(true)
        .expect("a scan grid always resolves");
    let cells: Vec<(Scalar, Scalar)> = lambdas
        .iter()
        .flat_map(|l| mus.iter().map(move |m| (l.clone(), m.clone())))
        .collect();
    let pool = make_pool(cfg.jobs)?;
    let computed: Vec<supercontact::Result<H1Report>> = pool.install(|| {
        cells
            .par_iter()
            .map(|(l, m)| {
                h1_dimension(
                    l,
                    m,
                    Algebra::Osp22,
                    Variables::TwoTheta,
                    cfg.relative,
                    Some(cfg.window_for(l, m)),
                )
            })
            .collect()
    });
    let mut reports = Vec::with_capacity(computed.len());
    for ((l, m), result) in cells.iter().zip(computed) {
        reports.push(result.map_err(|e| {
            CliError::Config(format!(
                "cell (lambda, mu) = ({l}, {m}) is not computable: {e}"
            ))
        })?);
    }
    let payload = match cfg.format {
        Format::Json => to_json(&reports)?,
        Format::Text => render::scan_text(&reports),
    };
    Ok(Outcome {
        payload,
        all_pass: true,
    })
}

/// One summand of a bracket, expanded in the generator basis.
#[derive(Serialize)]
pub struct BracketTerm {
    pub generator: GeneratorId,
    pub coefficient: Scalar,
}

/// `[left, right]` expanded in the generator basis.
#[derive(Serialize)]
pub struct BracketRow {
    pub left: GeneratorId,
    pub right: GeneratorId,
    pub bracket: Vec<BracketTerm>,
}

/// All brackets of basis pairs, rows in basis-by-basis order.
#[derive(Serialize)]
pub struct BracketTable {
    pub basis: Vec<GeneratorId>,
    pub rows: Vec<BracketRow>,
}

/// `bracket-table`: the 8-by-8 bracket table of the maximal finite
/// subalgebra.
pub fn run_bracket_table(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let constants = structure_constants(Algebra::Osp22)
        .map_err(|e| CliError::Config(format!("bracket table refused: {e}")))?;
    let basis = basis_of(Algebra::Osp22);
    let mut rows = Vec::with_capacity(basis.len() * basis.len());
    for &left in &basis {
        for &right in &basis {
            let bracket = constants
                .get(&(left, right))
                .map(|terms| {
                    terms
                        .iter()
                        .map(|(g, c)| BracketTerm {
                            generator: *g,
                            coefficient: c.clone(),
                        })
                        .collect()
                })
                .unwrap_or_default();
            rows.push(BracketRow {
                left,
                right,
                bracket,
            });
        }
    }
    let table = BracketTable { basis, rows };
    let payload = match cfg.format {
        Format::Json => to_json(&table)?,
        Format::Text => render::bracket_text(&table),
    };
    Ok(Outcome {
        payload,
        all_pass: true,
    })
}

fn rule_of(ty: OpTypeOpt) -> MuRule {
    match ty {
        OpTypeOpt::HalfStep => MuRule::HalfStep,
        OpTypeOpt::IntegerStep => MuRule::IntegerStep,
    }
}

fn scan_cells(
    algebra: Algebra,
    source: HKind,
    grid: &[Scalar],
    k_max: u32,
) -> Result<Vec<VarietyCell>, CliError> {
    scan_constraint_variety(algebra, source, grid, k_max)
        .map_err(|e| CliError::Config(format!("variety scan refused: {e}")))
}

/// `invariant-ops`: one exact classification at `--lambda`, or a
/// constraint-variety scan over a `--lambda-min/--lambda-max` axis.
pub fn run_invariant_ops(
    cfg: &RunConfig,
    algebra: AlgebraOpt,
    op_type: Option<OpTypeOpt>,
) -> Result<Outcome, CliError> {
    match &cfg.lambda {
        AxisSpec::Single(lambda) => {
            let ty = op_type.unwrap_or(OpTypeOpt::HalfStep);
            let (alg, source) = match (algebra, ty) {
                (AlgebraOpt::Sl2, OpTypeOpt::HalfStep) => (Algebra::Sl2, HKind::H0),
                (AlgebraOpt::Sl2, OpTypeOpt::IntegerStep) => (Algebra::Sl2, HKind::H1),
                (AlgebraOpt::Osp12, _) => (Algebra::Osp12, HKind::Full),
            };
            let result = classify(alg, source, lambda, cfg.k.unwrap_or(0), Some(rule_of(ty)))
                .map_err(|e| CliError::Config(format!("classification refused: {e}")))?;
            let payload = match cfg.format {
                Format::Json => to_json(&result)?,
                Format::Text => render::classification_text(&result),
            };
            Ok(Outcome {
                payload,
                all_pass: true,
            })
        }
        AxisSpec::Range(grid) => {
            let k_max = cfg.k.unwrap_or(4);
            let mut cells = Vec::new();
            match algebra {
                AlgebraOpt::Sl2 => {
                    cells.extend(scan_cells(Algebra::Sl2, HKind::H0, grid, k_max)?);
                    cells.extend(scan_cells(Algebra::Sl2, HKind::H1, grid, k_max)?);
                }
                AlgebraOpt::Osp12 => {
                    cells.extend(scan_cells(Algebra::Osp12, HKind::Full, grid, k_max)?);
                }
            }
            if let Some(ty) = op_type {
                let rule = rule_of(ty);
                cells.retain(|c| c.rule == rule);
            }
            let payload = match cfg.format {
                Format::Json => to_json(&cells)?,
                Format::Text => render::variety_text(&cells),
            };
            Ok(Outcome {
                payload,
                all_pass: true,
            })
        }
        AxisSpec::Unset => Err(CliError::Config(
            "invariant-ops needs --lambda (one classification) or \
             --lambda-min/--lambda-max (a variety scan)"
                .into(),
        )),
    }
}

/// One listed family: either a distinguished cocycle family or a family of
/// coboundary generators, with the weight cells it lives on.
#[derive(Serialize)]
pub struct CatalogRow {
    pub name: &'static str,
    pub role: &'static str,
    pub weights: &'static str,
    pub variables: &'static str,
    pub scope: &'static str,
    pub parity: &'static str,
    pub description: &'static str,
}

/// The built-in families, in catalog order.
pub fn catalog_rows() -> Vec<CatalogRow> {
    vec![
        CatalogRow {
            name: "diagonal_multiplier",
            role: "cocycle family",
            weights: "lambda = mu, any rational",
            variables: "two_theta",
            scope: "osp22",
            parity: "even",
            description: "value on the field of G is right multiplication by G'; \
                          nontrivial at every equal-weight cell",
        },
        CatalogRow {
            name: "diagonal_twisted",
            role: "cocycle family",
            weights: "lambda = mu, any rational",
            variables: "two_theta",
            scope: "osp22",
            parity: "even",
            description: "eta-twisted companion of diagonal_multiplier; vanishes on the \
                          five-generator subalgebra exactly when the weight is nonzero",
        },
        CatalogRow {
            name: "resonant_multiplier",
            role: "cocycle family",
            weights: "(-k/2, k/2), integer k >= 1",
            variables: "two_theta",
            scope: "osp22",
            parity: "even",
            description: "multiplication-type class at the opposite-weight cells",
        },
        CatalogRow {
            name: "resonant_twisted",
            role: "cocycle family",
            weights: "(-k/2, k/2), integer k >= 1",
            variables: "two_theta",
            scope: "osp22",
            parity: "even",
            description: "eta-twisted class; restricts to the relative representative \
                          at the opposite-weight cells",
        },
        CatalogRow {
            name: "resonant_mixed",
            role: "cocycle family",
            weights: "(-k/2, k/2), integer k >= 1",
            variables: "two_theta",
            scope: "osp22",
            parity: "even",
            description: "third independent class at the opposite-weight cells",
        },
        CatalogRow {
            name: "reduced_diagonal",
            role: "cocycle family",
            weights: "lambda = mu, any rational",
            variables: "one_theta",
            scope: "osp12",
            parity: "even",
            description: "equal-weight class on the one-odd-variable operator module",
        },
        CatalogRow {
            name: "reduced_resonant",
            role: "cocycle family",
            weights: "((1-k)/2, k/2), integer k >= 1",
            variables: "one_theta",
            scope: "osp12",
            parity: "odd",
            description: "resonant class on the one-odd-variable operator module",
        },
        CatalogRow {
            name: "reduced_resonant_twisted",
            role: "cocycle family",
            weights: "((1-k)/2, k/2), integer k >= 1",
            variables: "one_theta",
            scope: "osp12",
            parity: "odd",
            description: "eta-twisted resonant class on the one-odd-variable operator \
                          module",
        },
        CatalogRow {
            name: "equal_weight_coboundaries",
            role: "coboundary generators",
            weights: "lambda = mu, any rational",
            variables: "two_theta",
            scope: "osp22",
            parity: "even",
            description: "operators whose differentials span the even relative \
                          coboundaries at equal weights: two generators at weight zero, \
                          one otherwise",
        },
        CatalogRow {
            name: "resonant_even_coboundaries",
            role: "coboundary generators",
            weights: "(-k/2, k/2), integer k >= 1",
            variables: "two_theta",
            scope: "osp22",
            parity: "even",
            description: "single generator spanning the even relative coboundaries at \
                          the opposite-weight cells",
        },
        CatalogRow {
            name: "resonant_odd_coboundaries",
            role: "coboundary generators",
            weights: "((1-k)/2, k/2), integer k >= 1",
            variables: "two_theta",
            scope: "osp22",
            parity: "odd",
            description: "generators whose differentials span the whole odd relative \
                          cocycle space at the up-shifted resonant cells, witnessing \
                          that no odd class survives there",
        },
        CatalogRow {
            name: "resonant_odd_mirror_coboundaries",
            role: "coboundary generators",
            weights: "(-k/2, (k-1)/2), integer k >= 1",
            variables: "two_theta",
            scope: "osp22",
            parity: "odd",
            description: "mirror family of resonant_odd_coboundaries at the \
                          down-shifted resonant cells",
        },
        CatalogRow {
            name: "half_step_up_coboundaries",
            role: "coboundary generators",
            weights: "mu - lambda = 1/2, any lambda",
            variables: "two_theta",
            scope: "osp22",
            parity: "odd",
            description: "single generator covering the odd relative cocycles half a \
                          step up from the diagonal",
        },
        CatalogRow {
            name: "half_step_down_coboundaries",
            role: "coboundary generators",
            weights: "mu - lambda = -1/2, any lambda",
            variables: "two_theta",
            scope: "osp22",
            parity: "odd",
            description: "single generator covering the odd relative cocycles half a \
                          step down from the diagonal",
        },
    ]
}

/// `catalog`: the list of built-in families.
pub fn run_catalog(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let rows = catalog_rows();
    let payload = match cfg.format {
        Format::Json => to_json(&rows)?,
        Format::Text => render::catalog_text(&rows),
    };
    Ok(Outcome {
        payload,
        all_pass: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64, d: i64) -> Scalar {
        Scalar::new(n, d)
    }

    #[test]
    fn the_dimension_table_matches_the_three_case_pattern() {
        // Absolute: 2 on the diagonal, 3 at the opposite-weight resonances,
        // 0 elsewhere.
        assert_eq!(expected_h1(&s(1, 1), &s(1, 1), false), 2);
        assert_eq!(expected_h1(&s(0, 1), &s(0, 1), false), 2);
        assert_eq!(expected_h1(&s(-1, 1), &s(1, 1), false), 3);
        assert_eq!(expected_h1(&s(-3, 2), &s(3, 2), false), 3);
        assert_eq!(expected_h1(&s(-1, 2), &s(1, 2), false), 3);
        // Half-integer difference with zero sum is not a resonance.
        assert_eq!(expected_h1(&s(-1, 4), &s(1, 4), false), 0);
        assert_eq!(expected_h1(&s(1, 2), &s(2, 1), false), 0);
        assert_eq!(expected_h1(&s(0, 1), &s(1, 1), false), 0);
        assert_eq!(expected_h1(&s(1, 1), &s(-1, 1), false), 0);

        // Relative: at most 1; zero at the origin and off the pattern.
        assert_eq!(expected_h1(&s(1, 1), &s(1, 1), true), 1);
        assert_eq!(expected_h1(&s(0, 1), &s(0, 1), true), 0);
        assert_eq!(expected_h1(&s(-2, 1), &s(2, 1), true), 1);
        assert_eq!(expected_h1(&s(-1, 2), &s(1, 2), true), 1);
        assert_eq!(expected_h1(&s(0, 1), &s(2, 1), true), 0);
        assert_eq!(expected_h1(&s(1, 2), &s(1, 1), true), 0);
    }

    #[test]
    fn the_catalog_names_at_least_ten_families() {
        let rows = catalog_rows();
        assert!(rows.len() >= 10, "only {} catalog rows", rows.len());
        let names: std::collections::BTreeSet<&str> = rows.iter().map(|r| r.name).collect();
        assert_eq!(names.len(), rows.len(), "duplicate catalog names");
    }

    #[test]
    fn resonance_levels_are_the_positive_integers_with_zero_sum() {
        assert_eq!(resonance_level(&s(-1, 2), &s(1, 2)), Some(1));
        assert_eq!(resonance_level(&s(-2, 1), &s(2, 1)), Some(4));
        assert_eq!(resonance_level(&s(0, 1), &s(0, 1)), None);
        assert_eq!(resonance_level(&s(1, 2), &s(-1, 2)), None);
        assert_eq!(resonance_level(&s(-1, 4), &s(1, 4)), None);
        assert_eq!(resonance_level(&s(-1, 1), &s(2, 1)), None);
    }
}
