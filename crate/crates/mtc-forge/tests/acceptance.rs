//! The eight acceptance criteria, one test (and one printed verdict line)
//! per criterion.  Tolerances are the contract values, not the crate
//! defaults, so loosening a default can never silently weaken acceptance.

use std::f64::consts::PI;
use std::panic::{catch_unwind, resume_unwind, UnwindSafe};
use std::process::Command;

use mtc_forge::algebra::{SumMode, Tolerance};
use mtc_forge::catalog::{self, save_catalog, Precision};
use mtc_forge::families::{bpz_fusion, minimal_model, su2_data};
use mtc_forge::modular::quantum_dims;
use mtc_forge::report::{run_suites, SectionStatus, Suite};
use mtc_forge::skeletal::{ising_skeletal, SkeletalData};
use mtc_forge::transport::{
    full_field_gram, reflection_positivity_check, verify_positivity, verify_rigidity,
};

const EPS: f64 = 1e-9;

fn tol() -> Tolerance {
    Tolerance::uniform(EPS)
}

fn criterion(n: u32, what: &str, body: impl FnOnce() + UnwindSafe) {
    match catch_unwind(body) {
        Ok(()) => println!("acceptance criterion {n} ({what}): PASS"),
        Err(cause) => {
            println!("acceptance criterion {n} ({what}): FAIL");
            resume_unwind(cause);
        }
    }
}

#[test]
fn criterion_1_family_self_consistency() {
    criterion(1, "SU(2)_k self-consistency, k = 1..6", || {
        for k in 1..=6 {
            let fam = su2_data(k).unwrap();
            let pentagon = fam.skeletal.verify_pentagon(SumMode::Plain);
            assert!(pentagon.max_residual < EPS, "level {k} pentagon: {pentagon:?}");
            let hexagon = fam.skeletal.verify_hexagon(SumMode::Plain);
            assert!(hexagon.plus.max_residual < EPS, "level {k} hexagon+: {hexagon:?}");
            assert!(hexagon.minus.max_residual < EPS, "level {k} hexagon-: {hexagon:?}");
            let unitarity = fam.skeletal.verify_f_unitarity(&tol());
            assert!(unitarity.max_residual < EPS, "level {k} F-unitarity: {unitarity:?}");
        }
    });
}

#[test]
fn criterion_2_braid_identities() {
    criterion(2, "braid relations, SU(2)_1..4 and Ising", || {
        let mut subjects: Vec<(String, SkeletalData)> =
            (1..=4).map(|k| (format!("su2({k})"), su2_data(k).unwrap().skeletal)).collect();
        subjects.push(("ising".into(), ising_skeletal()));
        for (name, data) in &subjects {
            let rep = data.verify_braid_relations(&tol(), SumMode::Plain);
            assert_eq!(rep.assembly.instances, 0, "{name}: assembly errors");
            for (check, poly) in [
                ("inverse", &rep.inverse),
                ("conjugation", &rep.conjugation),
                ("star", &rep.star_symmetry),
                ("unitarity", &rep.unitarity),
                ("f-compatibility", &rep.f_compat),
            ] {
                assert!(
                    poly.max_residual < EPS,
                    "{name} braid {check}: residual {} at {:?}",
                    poly.max_residual,
                    poly.worst
                );
            }
        }
    });
}

#[test]
fn criterion_3_headline_positivity() {
    criterion(3, "transport positivity, SU(2)_1..6 and Ising", || {
        let mut subjects: Vec<(String, SkeletalData)> =
            (1..=6).map(|k| (format!("su2({k})"), su2_data(k).unwrap().skeletal)).collect();
        subjects.push(("ising".into(), ising_skeletal()));
        for (name, data) in &subjects {
            let n = data.ring().len();
            for i in 0..n {
                for j in 0..n {
                    for cert in verify_positivity(data, i, j, &tol()) {
                        assert!(cert.verdict, "{name}: {cert:?}");
                        assert!(
                            cert.route_agreement_residual < EPS,
                            "{name}: route disagreement {cert:?}"
                        );
                        if let Some(e) = cert.min_eigenvalue {
                            assert!(e > EPS, "{name}: eigenvalue not positive {cert:?}");
                        }
                    }
                }
            }
        }
    });
}

#[test]
fn criterion_4_quantum_dimensions() {
    criterion(4, "quantum dimensions: rigidity vs S-matrix", || {
        let mut catalogs = vec![catalog::ising(), catalog::trivial()];
        for k in 1..=6 {
            catalogs.push(catalog::su2(k).unwrap());
        }
        for cat in &catalogs {
            let data = cat.skeletal.as_ref().unwrap();
            let s_dims = quantum_dims(&cat.modular.as_ref().unwrap().s, &tol()).unwrap();
            for i in 0..cat.ring.len() {
                let rep = verify_rigidity(data, i, &tol()).unwrap();
                assert!(
                    (rep.d_i_value - s_dims[i]).abs() < EPS,
                    "{}: label {i} rigidity d = {} vs S-ratio {}",
                    cat.name,
                    rep.d_i_value,
                    s_dims[i]
                );
                assert!(rep.dual_dim_residual < EPS, "{}: {rep:?}", cat.name);
            }
        }
        let ising = ising_skeletal();
        let d_sigma = verify_rigidity(&ising, 1, &tol()).unwrap().d_i_value;
        assert!((d_sigma - 2f64.sqrt()).abs() < EPS, "d_sigma = {d_sigma}");
        let fib = su2_data(3).unwrap().skeletal;
        let d_one = verify_rigidity(&fib, 1, &tol()).unwrap().d_i_value;
        assert!((d_one - 2.0 * (PI / 5.0).cos()).abs() < EPS, "d_1 = {d_one}");
    });
}

#[test]
fn criterion_5_minimal_model_family() {
    criterion(5, "minimal models M(m, m+1), m = 3..8", || {
        for m in 3..=8 {
            let model = minimal_model(m).unwrap();
            assert_eq!(model.table.labels.len(), m * (m - 1) / 2, "m = {m} label count");
            let expected_c = 1.0 - 6.0 / (m * (m + 1)) as f64;
            assert_eq!(model.modular.central_charge, expected_c, "m = {m} central charge");

            let n = model.ring.len();
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let verlinde = model.ring.mult(i, j, k);
                        let bpz = bpz_fusion(
                            m,
                            model.table.labels[i],
                            model.table.labels[j],
                            model.table.labels[k],
                        );
                        assert_eq!(
                            verlinde, bpz,
                            "m = {m}: fusion mismatch at ({i}, {j}, {k})"
                        );
                    }
                }
            }
            let verlinde =
                mtc_forge::modular::verlinde_fusion(&model.modular.s, &tol(), SumMode::Plain)
                    .unwrap();
            assert!(verlinde.max_residual < EPS, "m = {m} integrality: {}", verlinde.max_residual);
        }
        let mut weights = minimal_model(3).unwrap().table.weights;
        weights.sort_by(f64::total_cmp);
        let expected = [0.0, 1.0 / 16.0, 0.5];
        assert_eq!(weights.len(), expected.len());
        for (w, e) in weights.iter().zip(expected) {
            assert!((w - e).abs() < 1e-12, "m = 3 weights {weights:?}");
        }
    });
}

#[test]
fn criterion_6_reflection_positivity() {
    criterion(6, "reflection positivity and full-field Gram", || {
        let subjects = [("ising".to_string(), ising_skeletal()), {
            let fam = su2_data(3).unwrap();
            ("su2(3)".to_string(), fam.skeletal)
        }];
        for (name, data) in &subjects {
            let reflection = reflection_positivity_check(data, &tol()).unwrap();
            assert!(
                reflection.gram_relation.max_residual < EPS,
                "{name}: {reflection:?}"
            );
            let gram = full_field_gram(data, &tol()).unwrap();
            assert!(gram.pd, "{name}: {gram:?}");
            assert!(gram.min_eigenvalue.unwrap() > EPS, "{name}: {gram:?}");
        }
    });
}

#[test]
fn criterion_7_negative_controls() {
    criterion(7, "negative controls flip the designated suite", || {
        let base = catalog::ising();
        let data = base.skeletal.as_ref().unwrap();
        let statuses = |cat: &catalog::Catalog| {
            let report = run_suites(cat, &Suite::ALL, &tol(), Precision::Double).unwrap();
            report
                .sections
                .iter()
                .map(|s| (s.suite.clone(), s.status))
                .collect::<std::collections::BTreeMap<_, _>>()
        };

        // Negated F entry: pentagon fails, upstream ring/modular pass.
        let mut f = data.f_blocks().clone();
        let block = f.get_mut(&(1, 1, 1, 1)).unwrap();
        block.mat[(0, 0)] = -block.mat[(0, 0)];
        let mut bad = base.clone();
        bad.skeletal = Some(
            SkeletalData::new(
                data.ring().clone(),
                f,
                data.r_symbols().clone(),
                data.ev_norms().to_vec(),
            )
            .unwrap(),
        );
        let s = statuses(&bad);
        assert_eq!(s["ring"], SectionStatus::Pass, "negated F: ring");
        assert_eq!(s["modular"], SectionStatus::Pass, "negated F: modular");
        assert_eq!(s["pentagon"], SectionStatus::Fail, "negated F: pentagon");

        // Conjugated R phase: hexagon fails, pentagon (upstream) passes.
        let mut r = data.r_symbols().clone();
        let v = r.get_mut(&(1, 1, 2)).unwrap();
        *v = v.conj();
        let mut bad = base.clone();
        bad.skeletal = Some(
            SkeletalData::new(
                data.ring().clone(),
                data.f_blocks().clone(),
                r,
                data.ev_norms().to_vec(),
            )
            .unwrap(),
        );
        let s = statuses(&bad);
        assert_eq!(s["ring"], SectionStatus::Pass, "conjugated R: ring");
        assert_eq!(s["modular"], SectionStatus::Pass, "conjugated R: modular");
        assert_eq!(s["pentagon"], SectionStatus::Pass, "conjugated R: pentagon");
        assert_eq!(s["hexagon"], SectionStatus::Fail, "conjugated R: hexagon");

        // Corrupted fusion tensor: the ring suite itself fails.
        let mut bad = base.clone();
        bad.skeletal = None;
        bad.modular = None;
        bad.ring = mtc_forge::ring::FusionRing::from_fn(
            base.ring.labels().iter().map(|l| l.name.clone()).collect(),
            base.ring.dual_map().to_vec(),
            |i, j, k| if (i, j, k) == (1, 1, 2) { 0 } else { base.ring.mult(i, j, k) },
        )
        .unwrap();
        let s = statuses(&bad);
        assert_eq!(s["ring"], SectionStatus::Fail, "corrupted N: ring");

        // Non-unit twist: modular fails, ring passes.
        let mut bad = base.clone();
        bad.modular.as_mut().unwrap().theta[2] *= 1.25;
        let s = statuses(&bad);
        assert_eq!(s["ring"], SectionStatus::Pass, "non-unit twist: ring");
        assert_eq!(s["modular"], SectionStatus::Fail, "non-unit twist: modular");
    });
}

#[test]
fn criterion_8_determinism_across_jobs() {
    criterion(8, "byte-identical reports for --jobs 1 and --jobs 8", || {
        let bin = env!("CARGO_BIN_EXE_mtc-forge");
        let dir = tempfile::tempdir().unwrap();

        let mut paths = Vec::new();
        for (name, cat) in [("ising", catalog::ising()), ("trivial", catalog::trivial())] {
            let path = dir.path().join(format!("{name}.json"));
            std::fs::write(&path, save_catalog(&cat).unwrap()).unwrap();
            paths.push(path);
        }
        for k in 1..=6 {
            let path = dir.path().join(format!("su2_{k}.json"));
            std::fs::write(&path, save_catalog(&catalog::su2(k).unwrap()).unwrap()).unwrap();
            paths.push(path);
        }
        for m in 3..=8 {
            let path = dir.path().join(format!("minimal_{m}.json"));
            std::fs::write(&path, save_catalog(&catalog::minimal(m).unwrap()).unwrap()).unwrap();
            paths.push(path);
        }

        for path in &paths {
            let run = |jobs: &str| {
                let out = Command::new(bin)
                    .args(["verify"])
                    .arg(path)
                    .args(["--format", "json", "--jobs", jobs])
                    .env_remove("MTC_FORGE_JOBS")
                    .output()
                    .unwrap();
                assert!(
                    out.status.success(),
                    "{}: verify --jobs {jobs} exited {:?}: {}",
                    path.display(),
                    out.status.code(),
                    String::from_utf8_lossy(&out.stderr)
                );
                out.stdout
            };
            assert_eq!(run("1"), run("8"), "{}: reports differ across --jobs", path.display());
        }
    });
}
