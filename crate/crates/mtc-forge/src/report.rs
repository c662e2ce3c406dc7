//! Verification reports: one section per suite, canonical JSON and a text
//! summary.
//!
//! The JSON form is canonical (sorted keys, no wall-clock data), so reports
//! produced from identical inputs are byte-identical irrespective of the
//! parallelism degree.  The text form adds per-section timings and renders
//! worst tuples for failing sections.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::Tolerance;
use crate::catalog::{Catalog, CatalogError, Precision};
use crate::modular::quantum_dims;
use crate::transport::{
    full_field_gram, reflection_positivity_check, verify_positivity, verify_rigidity,
    verify_twist_compat,
};

/// The verification suites, in canonical execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Ring,
    Modular,
    Pentagon,
    Hexagon,
    Braid,
    Transport,
    Rigidity,
    Twist,
    Reflection,
    FullField,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Ring,
        Suite::Modular,
        Suite::Pentagon,
        Suite::Hexagon,
        Suite::Braid,
        Suite::Transport,
        Suite::Rigidity,
        Suite::Twist,
        Suite::Reflection,
        Suite::FullField,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Ring => "ring",
            Suite::Modular => "modular",
            Suite::Pentagon => "pentagon",
            Suite::Hexagon => "hexagon",
            Suite::Braid => "braid",
            Suite::Transport => "transport",
            Suite::Rigidity => "rigidity",
            Suite::Twist => "twist",
            Suite::Reflection => "reflection",
            Suite::FullField => "fullfield",
        }
    }

    pub fn parse(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }
}

/// Resolve CLI suite names: `all` expands, duplicates collapse, and the
/// result is in canonical order (so the report layout never depends on the
/// order flags were passed in).  An empty selection means `all`.
pub fn parse_suites(names: &[String]) -> Result<Vec<Suite>, String> {
    if names.is_empty() {
        return Ok(Suite::ALL.to_vec());
    }
    let mut picked = Vec::new();
    for name in names {
        if name == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        match Suite::parse(name) {
            Some(s) => picked.push(s),
            None => {
                return Err(format!(
                    "unknown suite `{name}` (expected one of: {}, all)",
                    Suite::ALL.map(Suite::name).join(", ")
                ))
            }
        }
    }
    picked.sort();
    picked.dedup();
    Ok(picked)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SectionStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionResult {
    pub suite: String,
    pub status: SectionStatus,
    /// Largest residual observed; absent for skipped sections and for
    /// failures with no finite residual (assembly errors).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_residual: Option<f64>,
    /// Index tuple at which the worst residual occurred.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub worst: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Wall clock; never serialized (reports must be byte-stable).
    #[serde(skip)]
    pub seconds: f64,
}

impl SectionResult {
    fn skipped(suite: Suite, why: &str) -> Self {
        SectionResult {
            suite: suite.name().into(),
            status: SectionStatus::Skipped,
            max_residual: None,
            worst: None,
            detail: Some(why.into()),
            seconds: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub catalog: String,
    pub content_hash: String,
    pub tolerance: Tolerance,
    pub precision: Precision,
    pub sections: Vec<SectionResult>,
    /// AND over the verdicts of every section that actually ran.
    pub overall: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Text,
}

/// Non-finite residuals cannot live in JSON; drop them to `None` (the
/// section status already carries the failure).
fn finite_or_none(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn pass_fail(ok: bool) -> SectionStatus {
    if ok {
        SectionStatus::Pass
    } else {
        SectionStatus::Fail
    }
}

struct SectionBody {
    ok: bool,
    max_residual: f64,
    worst: Option<Vec<usize>>,
    detail: Option<String>,
}

fn run_section(suite: Suite, cat: &Catalog, tol: &Tolerance, sum: crate::algebra::SumMode) -> SectionResult {
    let started = std::time::Instant::now();
    let body = section_body(suite, cat, tol, sum);
    let seconds = started.elapsed().as_secs_f64();
    match body {
        None => {
            let why = match suite {
                Suite::Ring => unreachable!("ring section always runs"),
                Suite::Modular => "no modular data in catalog",
                Suite::Twist => "catalog lacks skeletal or modular data",
                _ => "no skeletal data in catalog",
            };
            let mut s = SectionResult::skipped(suite, why);
            s.seconds = seconds;
            s
        }
        Some(body) => SectionResult {
            suite: suite.name().into(),
            status: pass_fail(body.ok),
            max_residual: finite_or_none(body.max_residual),
            worst: body.worst,
            detail: body.detail,
            seconds,
        },
    }
}

fn section_body(
    suite: Suite,
    cat: &Catalog,
    tol: &Tolerance,
    sum: crate::algebra::SumMode,
) -> Option<SectionBody> {
    let skeletal = cat.skeletal.as_ref();
    let modular = cat.modular.as_ref();
    let gate = tol.gate(1.0);
    match suite {
        Suite::Ring => {
            let rep = crate::ring::verify_ring(&cat.ring);
            let worst = rep
                .worst_assoc
                .map(|(i, j, k, l)| vec![i, j, k, l])
                .or(rep.worst_commutative.map(|(i, j, k)| vec![i, j, k]))
                .or(rep.worst_frobenius.map(|(i, j, k)| vec![i, j, k]));
            Some(SectionBody {
                ok: rep.ok(),
                max_residual: rep.max_assoc_defect as f64,
                worst,
                detail: rep.structural_detail,
            })
        }
        Suite::Modular => {
            let md = modular?;
            Some(match crate::modular::verify_modular(&cat.ring, md, tol, sum) {
                Ok(rep) => SectionBody {
                    ok: rep.ok(),
                    max_residual: rep.max_residual(),
                    worst: rep.worst_verlinde.map(|(i, j, k)| vec![i, j, k]),
                    detail: rep.verlinde_detail,
                },
                Err(e) => SectionBody {
                    ok: false,
                    max_residual: f64::INFINITY,
                    worst: None,
                    detail: Some(e.to_string()),
                },
            })
        }
        Suite::Pentagon => {
            let rep = skeletal?.verify_pentagon(sum);
            Some(SectionBody {
                ok: rep.ok(tol),
                max_residual: rep.max_residual,
                worst: rep.worst.clone(),
                detail: Some(format!("{} instances", rep.instances)),
            })
        }
        Suite::Hexagon => {
            let rep = skeletal?.verify_hexagon(sum);
            let worse =
                if rep.plus.max_residual >= rep.minus.max_residual { &rep.plus } else { &rep.minus };
            Some(SectionBody {
                ok: rep.ok(tol),
                max_residual: rep.max_residual(),
                worst: worse.worst.clone(),
                detail: Some(format!("{} instances per chirality", rep.plus.instances)),
            })
        }
        Suite::Braid => {
            let rep = skeletal?.verify_braid_relations(tol, sum);
            let checks = [
                ("assembly", &rep.assembly),
                ("inverse", &rep.inverse),
                ("conjugation", &rep.conjugation),
                ("star", &rep.star_symmetry),
                ("unitarity", &rep.unitarity),
                ("f-compatibility", &rep.f_compat),
                ("r-modulus", &rep.r_modulus),
            ];
            let failing: Vec<&str> = checks
                .iter()
                .filter(|(name, c)| {
                    if *name == "assembly" { c.instances > 0 } else { !c.ok(tol) }
                })
                .map(|&(name, _)| name)
                .collect();
            let worst = checks
                .iter()
                .filter(|(name, _)| *name != "assembly")
                .max_by(|a, b| a.1.max_residual.total_cmp(&b.1.max_residual))
                .and_then(|(_, c)| c.worst.clone());
            Some(SectionBody {
                ok: rep.ok(tol),
                max_residual: rep.max_residual(),
                worst,
                detail: (!failing.is_empty()).then(|| format!("failing: {}", failing.join(", "))),
            })
        }
        Suite::Transport => {
            let data = skeletal?;
            let n = cat.ring.len();
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
            let sweeps: Vec<_> =
                pairs.par_iter().map(|&(i, j)| verify_positivity(data, i, j, tol)).collect();
            let mut ok = true;
            let mut max_residual = 0.0f64;
            let mut worst = None;
            let mut min_eig = f64::INFINITY;
            let mut failed_triple = None;
            for cert in sweeps.iter().flatten() {
                let res = cert.route_agreement_residual.max(cert.hermitian_residual);
                if worst.is_none() || res > max_residual {
                    max_residual = res;
                    worst = Some(vec![cert.triple.0, cert.triple.1, cert.triple.2]);
                }
                if let Some(e) = cert.min_eigenvalue {
                    min_eig = min_eig.min(e);
                }
                if !cert.verdict && failed_triple.is_none() {
                    failed_triple = Some(cert.triple);
                }
                ok &= cert.verdict;
            }
            let detail = match failed_triple {
                Some(t) => format!("first failing certificate at {t:?}"),
                None => format!("min eigenvalue {min_eig:.6e} over {} pairs", pairs.len()),
            };
            if let Some(t) = failed_triple {
                worst = Some(vec![t.0, t.1, t.2]);
            }
            Some(SectionBody { ok, max_residual, worst, detail: Some(detail) })
        }
        Suite::Rigidity => {
            let data = skeletal?;
            let s_dims = modular.map(|md| quantum_dims(&md.s, tol));
            let mut ok = true;
            let mut max_residual = 0.0f64;
            let mut worst = None;
            let mut detail = None;
            for i in 0..cat.ring.len() {
                let (res, label_ok) = match verify_rigidity(data, i, tol) {
                    Ok(rep) => {
                        let mut r = rep.max_residual();
                        let mut lok = rep.ok(tol);
                        match &s_dims {
                            Some(Ok(dims)) => {
                                let dres = (rep.d_i_value - dims[i]).abs();
                                r = r.max(dres);
                                lok &= dres <= tol.gate(rep.d_i_value.max(1.0));
                            }
                            Some(Err(e)) => {
                                lok = false;
                                detail = Some(format!("S-ratio dimensions unavailable: {e}"));
                            }
                            None => {}
                        }
                        (r, lok)
                    }
                    Err(e) => {
                        detail = Some(e.to_string());
                        (f64::INFINITY, false)
                    }
                };
                if worst.is_none() || res > max_residual {
                    max_residual = res;
                    worst = Some(vec![i]);
                }
                ok &= label_ok;
            }
            Some(SectionBody { ok, max_residual, worst, detail })
        }
        Suite::Twist => {
            let (data, md) = skeletal.zip(modular)?;
            Some(match verify_twist_compat(data, md, tol) {
                Ok(rep) => {
                    let parts =
                        [("eq149", &rep.eq149), ("eq150", &rep.eq150), ("ribbon", &rep.ribbon)];
                    let worse = parts
                        .iter()
                        .max_by(|a, b| a.1.max_residual.total_cmp(&b.1.max_residual))
                        .unwrap();
                    SectionBody {
                        ok: rep.ok(tol),
                        max_residual: rep.max_residual(),
                        worst: worse.1.worst.clone(),
                        detail: (!rep.ok(tol)).then(|| format!("worst check: {}", worse.0)),
                    }
                }
                Err(e) => SectionBody {
                    ok: false,
                    max_residual: f64::INFINITY,
                    worst: None,
                    detail: Some(e.to_string()),
                },
            })
        }
        Suite::Reflection => {
            let data = skeletal?;
            Some(match reflection_positivity_check(data, tol) {
                Ok(rep) => SectionBody {
                    ok: rep.ok(tol),
                    max_residual: rep.gram_relation.max_residual,
                    worst: rep.gram_relation.worst.clone(),
                    detail: None,
                },
                Err(e) => SectionBody {
                    ok: false,
                    max_residual: f64::INFINITY,
                    worst: None,
                    detail: Some(e.to_string()),
                },
            })
        }
        Suite::FullField => {
            let data = skeletal?;
            Some(match full_field_gram(data, tol) {
                Ok(gram) => SectionBody {
                    ok: gram.pd,
                    max_residual: gram.hermitian_residual,
                    worst: None,
                    detail: Some(match gram.min_eigenvalue {
                        Some(e) => format!(
                            "min eigenvalue {e:.6e} over {} blocks (gate {gate:.1e})",
                            gram.triples.len()
                        ),
                        None => "no admissible triples".into(),
                    }),
                },
                Err(e) => SectionBody {
                    ok: false,
                    max_residual: f64::INFINITY,
                    worst: None,
                    detail: Some(e.to_string()),
                },
            })
        }
    }
}

/// Run the requested suites against a catalog.  Sections appear in canonical
/// order; suites that need absent data are marked `SKIPPED` and excluded
/// from the overall verdict.
pub fn run_suites(
    cat: &Catalog,
    suites: &[Suite],
    tol: &Tolerance,
    precision: Precision,
) -> Result<VerificationReport, CatalogError> {
    let sum = precision.sum_mode();
    let sections: Vec<SectionResult> =
        suites.iter().map(|&s| run_section(s, cat, tol, sum)).collect();
    let overall = sections
        .iter()
        .filter(|s| s.status != SectionStatus::Skipped)
        .all(|s| s.status == SectionStatus::Pass);
    Ok(VerificationReport {
        catalog: cat.name.clone(),
        content_hash: cat.content_hash()?,
        tolerance: *tol,
        precision,
        sections,
        overall,
    })
}

/// Serialize a report: canonical JSON (machine form) or a text table with
/// timings (human form).
pub fn emit_report(report: &VerificationReport, format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Json => {
            let value = serde_json::to_value(report).expect("reports contain only finite values");
            let mut bytes =
                serde_json::to_vec_pretty(&value).expect("canonical serialization is infallible");
            bytes.push(b'\n');
            bytes
        }
        ReportFormat::Text => {
            let mut out = String::new();
            out.push_str(&format!("catalog:   {}\n", report.catalog));
            out.push_str(&format!("hash:      {}\n", report.content_hash));
            out.push_str(&format!(
                "tolerance: abs {:.1e}, rel {:.1e}   precision: {}\n\n",
                report.tolerance.abs_eps,
                report.tolerance.rel_eps,
                match report.precision {
                    Precision::Double => "double",
                    Precision::Extended => "extended",
                }
            ));
            out.push_str(&format!(
                "{:<12} {:<8} {:<14} {:<10} {}\n",
                "SUITE", "STATUS", "MAX RESIDUAL", "TIME", "WORST / DETAIL"
            ));
            for s in &report.sections {
                let status = match s.status {
                    SectionStatus::Pass => "PASS",
                    SectionStatus::Fail => "FAIL",
                    SectionStatus::Skipped => "SKIPPED",
                };
                let residual =
                    s.max_residual.map_or_else(|| "-".into(), |r| format!("{r:.3e}"));
                let mut tail = String::new();
                if let Some(w) = &s.worst {
                    let rendered: Vec<String> = w.iter().map(usize::to_string).collect();
                    tail.push_str(&format!("({})", rendered.join(", ")));
                }
                if let Some(d) = &s.detail {
                    if !tail.is_empty() {
                        tail.push_str("  ");
                    }
                    tail.push_str(d);
                }
                out.push_str(&format!(
                    "{:<12} {:<8} {:<14} {:<10} {}\n",
                    s.suite,
                    status,
                    residual,
                    format!("{:.3}s", s.seconds),
                    tail
                ));
            }
            out.push_str(&format!(
                "\nOVERALL: {}\n",
                if report.overall { "PASS" } else { "FAIL" }
            ));
            out.into_bytes()
        }
    }
}
