//! Generators for the shipped example families.
//!
//! Two families are built here: the Virasoro minimal models `M(m, m+1)`
//! (modular data plus the Kac table of conformal weights) and the affine
//! `SU(2)_k` models (full skeletal F/R data in the Kirillov–Reshetikhin
//! unitary gauge, plus modular data).  Every generator re-verifies its own
//! output before returning it: a failed pentagon/hexagon/Verlinde gate is a
//! transcription bug in the closed forms, not a user error, and surfaces as
//! [`FamilyError::SelfCheck`].

use std::collections::BTreeMap;
use std::f64::consts::PI;

use thiserror::Error;

use crate::algebra::{phase, re, Matrix, SumMode, Tolerance};
use crate::modular::{quantum_dims, verify_modular, verlinde_fusion, ModularData, ModularError};
use crate::ring::{verify_ring, FusionRing, RingError};
use crate::skeletal::{
    expected_cols, expected_rows, trivial_skeletal, FBlock, SkeletalData, SkeletalError,
};

/// Residual gate applied to every generation-time self-check.
fn gen_tol() -> Tolerance {
    Tolerance::uniform(1e-9)
}

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("minimal models require m >= 2, got m = {0}")]
    BadM(usize),
    #[error("Kac label (r, s) = ({r}, {s}) outside 1..={} x 1..={m} for m = {m}", m - 1)]
    KacRange { m: usize, r: usize, s: usize },
    #[error("affine SU(2) level must be >= 1, got k = {0}")]
    BadLevel(usize),
    #[error("label {a} outside 0..={k} for SU(2) level {k}")]
    BadLabel { k: usize, a: usize },
    #[error("generated data failed its self-check: {0}")]
    SelfCheck(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Modular(#[from] ModularError),
    #[error(transparent)]
    Skeletal(#[from] SkeletalError),
}

// ---------------------------------------------------------------------------
// Virasoro minimal models M(m, m+1)
// ---------------------------------------------------------------------------

/// Central charge `c = 1 − 6/(m(m+1))` of `M(m, m+1)`.
pub fn central_charge(m: usize) -> Result<f64, FamilyError> {
    if m < 2 {
        return Err(FamilyError::BadM(m));
    }
    Ok(1.0 - 6.0 / (m * (m + 1)) as f64)
}

/// Conformal weight `h_{r,s} = (((m+1)r − ms)² − 1) / (4m(m+1))`.
pub fn kac_weight(m: usize, r: usize, s: usize) -> Result<f64, FamilyError> {
    if m < 2 {
        return Err(FamilyError::BadM(m));
    }
    if r < 1 || r > m - 1 || s < 1 || s > m {
        return Err(FamilyError::KacRange { m, r, s });
    }
    let num = kac_index(m, r, s).pow(2) - 1;
    Ok(num as f64 / (4 * m * (m + 1)) as f64)
}

/// `(m+1)r − ms`; `|·|` is a complete invariant of the Kac label class.
fn kac_index(m: usize, r: usize, s: usize) -> i64 {
    (m as i64 + 1) * r as i64 - m as i64 * s as i64
}

/// The Kac table of `M(m, m+1)`: one entry per label class of the
/// identification `(r, s) ~ (m−r, m+1−s)`, keyed by the lexicographically
/// least representative, sorted ascending (the vacuum `(1,1)` is index 0).
#[derive(Debug, Clone)]
pub struct KacTable {
    pub m: usize,
    pub c: f64,
    /// Class representatives `(r, s)`, sorted; index = ring label.
    pub labels: Vec<(usize, usize)>,
    /// Conformal weights aligned with `labels`.
    pub weights: Vec<f64>,
}

impl KacTable {
    pub fn new(m: usize) -> Result<Self, FamilyError> {
        let c = central_charge(m)?;
        let mut labels: Vec<(usize, usize)> = Vec::new();
        for r in 1..m {
            for s in 1..=m {
                if Self::representative(m, r, s) == (r, s) {
                    labels.push((r, s));
                }
            }
        }
        labels.sort_unstable();
        let expected = m * (m - 1) / 2;
        if labels.len() != expected {
            return Err(FamilyError::SelfCheck(format!(
                "Kac table for m = {m} has {} classes, expected {expected}",
                labels.len()
            )));
        }
        let weights = labels
            .iter()
            .map(|&(r, s)| kac_weight(m, r, s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(KacTable { m, c, labels, weights })
    }

    /// Lexicographically least element of `{(r,s), (m−r, m+1−s)}`.
    pub fn representative(m: usize, r: usize, s: usize) -> (usize, usize) {
        (r, s).min((m - r, m + 1 - s))
    }

    /// Ring label of the class containing `(r, s)`.
    pub fn class_of(&self, r: usize, s: usize) -> Result<usize, FamilyError> {
        if r < 1 || r > self.m - 1 || s < 1 || s > self.m {
            return Err(FamilyError::KacRange { m: self.m, r, s });
        }
        let rep = Self::representative(self.m, r, s);
        self.labels
            .binary_search(&rep)
            .map_err(|_| FamilyError::KacRange { m: self.m, r, s })
    }
}

/// BPZ fusion multiplicity of `M(m, m+1)` on Kac classes, computed from the
/// truncated `r`/`s` ranges.  Independent of the Verlinde formula — this is
/// the oracle the generated S-matrix is gated against.
pub fn bpz_fusion(
    m: usize,
    a: (usize, usize),
    b: (usize, usize),
    c: (usize, usize),
) -> u32 {
    // One factor of the rule: x3 ∈ {|x1−x2|+1, |x1−x2|+3, …, min(x1+x2−1, 2q−1−x1−x2)}.
    let in_range = |x1: usize, x2: usize, x3: usize, q: usize| -> bool {
        let lo = x1.abs_diff(x2) + 1;
        let hi = (x1 + x2 - 1).min(2 * q - 1 - x1 - x2);
        (lo..=hi).contains(&x3) && (x1 + x2 + x3) % 2 == 1
    };
    let raw = |(r3, s3): (usize, usize)| -> bool {
        in_range(a.0, b.0, r3, m) && in_range(a.1, b.1, s3, m + 1)
    };
    // The double truncation lists exactly one member of each fused class
    // (parity of m forbids both), so folding is a plain union.
    (raw(c) || raw((m - c.0, m + 1 - c.1))) as u32
}

/// A generated minimal model: Kac table, fusion ring, and modular data.
#[derive(Debug, Clone)]
pub struct MinimalModel {
    pub table: KacTable,
    pub ring: FusionRing,
    pub modular: ModularData,
}

/// Build `M(m, m+1)` at modular-data level.  The S-matrix comes from the
/// standard closed form; the fusion ring from the Verlinde formula applied to
/// it; and generation fails unless that ring matches [`bpz_fusion`]
/// label-for-label and the full modular report passes.
pub fn minimal_model(m: usize) -> Result<MinimalModel, FamilyError> {
    let table = KacTable::new(m)?;
    let n = table.labels.len();
    let tol = gen_tol();

    // Distinct weights per class: |(m+1)r − ms| separates classes.
    let mut indices: Vec<i64> =
        table.labels.iter().map(|&(r, s)| kac_index(m, r, s).abs()).collect();
    indices.sort_unstable();
    indices.dedup();
    if indices.len() != n {
        return Err(FamilyError::SelfCheck(format!(
            "conformal weights collide across Kac classes for m = {m}"
        )));
    }

    // S_{(r,s),(ρ,σ)} = 2 √(2/(m(m+1))) (−1)^{1+sρ+rσ} sin(π(m+1)rρ/m) sin(πm·sσ/(m+1)).
    // Integer phase arguments are reduced mod the sine period to keep the
    // matrix exactly symmetric and fully precise.
    let norm = 2.0 * (2.0 / (m * (m + 1)) as f64).sqrt();
    let sin_frac = |num: usize, den: usize| (PI * (num % (2 * den)) as f64 / den as f64).sin();
    let s_mat = Matrix::from_fn(n, n, |a, b| {
        let (ra, sa) = table.labels[a];
        let (rb, sb) = table.labels[b];
        let sign = if (1 + sa * rb + ra * sb) % 2 == 0 { 1.0 } else { -1.0 };
        re(norm * sign * sin_frac((m + 1) * ra * rb, m) * sin_frac(m * sa * sb, m + 1))
    });

    let verlinde = verlinde_fusion(&s_mat, &tol, SumMode::Plain)?;
    let dual: Vec<usize> = (0..n)
        .map(|a| {
            let mut duals = (0..n).filter(|&b| verlinde.mult(a, b, 0) > 0);
            match (duals.next(), duals.next()) {
                (Some(d), None) => Ok(d),
                _ => Err(FamilyError::SelfCheck(format!(
                    "label {a} of M({m},{}) has no unique dual",
                    m + 1
                ))),
            }
        })
        .collect::<Result<_, _>>()?;
    let names = table.labels.iter().map(|&(r, s)| format!("({r},{s})")).collect();
    let ring = FusionRing::from_fn(names, dual, |i, j, k| verlinde.mult(i, j, k))?;

    let ring_report = verify_ring(&ring);
    if !ring_report.ok() {
        return Err(FamilyError::SelfCheck(format!(
            "Verlinde ring of M({m},{}) is not a fusion ring: {ring_report:?}",
            m + 1
        )));
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let oracle = bpz_fusion(m, table.labels[a], table.labels[b], table.labels[c]);
                if ring.mult(a, b, c) != oracle {
                    return Err(FamilyError::SelfCheck(format!(
                        "Verlinde fusion N^{}_{{{},{}}} = {} disagrees with the BPZ rule {} for m = {m}",
                        ring.name(c),
                        ring.name(a),
                        ring.name(b),
                        ring.mult(a, b, c),
                        oracle
                    )));
                }
            }
        }
    }

    let dims = quantum_dims(&s_mat, &tol)?;
    let t = (0..n)
        .map(|a| phase(2.0 * PI * (table.weights[a] - table.c / 24.0)))
        .collect();
    let theta = (0..n).map(|a| phase(2.0 * PI * table.weights[a])).collect();
    let modular =
        ModularData { s: s_mat, t, theta, dims, central_charge: table.c };

    let report = verify_modular(&ring, &modular, &tol, SumMode::Plain)?;
    if !report.ok() {
        return Err(FamilyError::SelfCheck(format!(
            "modular data of M({m},{}) failed verification: max residual {:.3e}",
            m + 1,
            report.max_residual()
        )));
    }

    Ok(MinimalModel { table, ring, modular })
}

// ---------------------------------------------------------------------------
// SU(2)_k
// ---------------------------------------------------------------------------

/// Quantum integers and factorials at `q = e^{iπ/(k+2)}`:
/// `[n] = sin(nπ/(k+2)) / sin(π/(k+2))`, tabulated for `0 ≤ n ≤ k+1` (every
/// factorial a truncated Racah sum needs stays in this strictly positive
/// range).
struct QNumbers {
    int: Vec<f64>,
    fact: Vec<f64>,
}

impl QNumbers {
    fn new(k: usize) -> QNumbers {
        let denom = (PI / (k + 2) as f64).sin();
        let int: Vec<f64> =
            (0..=k + 1).map(|n| (PI * n as f64 / (k + 2) as f64).sin() / denom).collect();
        let mut fact = vec![1.0; k + 2];
        for n in 1..=k + 1 {
            fact[n] = fact[n - 1] * int[n];
        }
        QNumbers { int, fact }
    }
}

/// Twice-spin triple admissible at level `k`.
fn su2_admissible(k: usize, a: usize, b: usize, c: usize) -> bool {
    (a + b + c) % 2 == 0 && a.abs_diff(b) <= c && c <= a + b && a + b + c <= 2 * k
}

/// Kirillov–Reshetikhin q-deformed 6j symbol `{a b m; c d n}` at level `k`
/// (twice-spin labels, unitary normalization).  Zero when any of the four
/// triads `(a,b,m)`, `(m,c,d)`, `(b,c,n)`, `(a,n,d)` is inadmissible.
pub fn q6j(
    k: usize,
    a: usize,
    b: usize,
    m: usize,
    c: usize,
    d: usize,
    n: usize,
) -> Result<f64, FamilyError> {
    if k < 1 {
        return Err(FamilyError::BadLevel(k));
    }
    for &x in &[a, b, m, c, d, n] {
        if x > k {
            return Err(FamilyError::BadLabel { k, a: x });
        }
    }
    let q = QNumbers::new(k);
    Ok(q6j_inner(k, &q, a, b, m, c, d, n))
}

fn q6j_inner(k: usize, q: &QNumbers, a: usize, b: usize, m: usize, c: usize, d: usize, n: usize) -> f64 {
    let triads = [(a, b, m), (m, c, d), (b, c, n), (a, n, d)];
    if triads.iter().any(|&(x, y, z)| !su2_admissible(k, x, y, z)) {
        return 0.0;
    }
    let delta = |(x, y, z): (usize, usize, usize)| -> f64 {
        ((q.fact[(x + y - z) / 2] * q.fact[(x + z - y) / 2] * q.fact[(y + z - x) / 2])
            / q.fact[(x + y + z) / 2 + 1])
            .sqrt()
    };
    let t = [triads[0], triads[1], triads[2], triads[3]].map(|(x, y, z)| (x + y + z) / 2);
    let quads = [(a + b + c + d) / 2, (a + m + c + n) / 2, (b + m + d + n) / 2];
    let z_lo = t.into_iter().max().unwrap_or(0);
    // Terms with z ≥ k+1 carry [k+2]! = 0 in the numerator and vanish
    // identically; clamping keeps the truncation exact.
    let z_hi = quads.into_iter().min().unwrap_or(0).min(k);
    let mut sum = 0.0;
    for z in z_lo..=z_hi {
        let sign = if z % 2 == 0 { 1.0 } else { -1.0 };
        let mut term = sign * q.fact[z + 1];
        for ti in t {
            term /= q.fact[z - ti];
        }
        for qi in quads {
            term /= q.fact[qi - z];
        }
        sum += term;
    }
    triads.into_iter().map(delta).product::<f64>() * sum
}

/// A generated `SU(2)_k` model: skeletal F/R data plus modular data.
#[derive(Debug, Clone)]
pub struct Su2Data {
    pub k: usize,
    pub skeletal: SkeletalData,
    pub modular: ModularData,
}

/// Build `SU(2)_k` with labels `a = 0..k` (twice the spin), fusion by the
/// truncated Clebsch–Gordan rule, F-symbols from the Kirillov–Reshetikhin
/// q-6j closed form, and `R^{ab}_c = (−1)^{(a+b−c)/2} q^{(c(c+2)−a(a+2)−b(b+2))/4}`.
/// Pentagon, hexagon, F-unitarity, unit-gauge, and Verlinde agreement are all
/// re-checked before the data is returned.
pub fn su2_data(k: usize) -> Result<Su2Data, FamilyError> {
    if k < 1 {
        return Err(FamilyError::BadLevel(k));
    }
    let n = k + 1;
    let tol = gen_tol();

    let names = (0..n).map(|a| a.to_string()).collect();
    let ring = FusionRing::from_fn(names, (0..n).collect(), |a, b, c| {
        su2_admissible(k, a, b, c) as u32
    })?;
    let ring_report = verify_ring(&ring);
    if !ring_report.ok() {
        return Err(FamilyError::SelfCheck(format!(
            "truncated Clebsch–Gordan ring at level {k} is inconsistent: {ring_report:?}"
        )));
    }

    let q = QNumbers::new(k);
    let mut f = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let rows = expected_rows(&ring, a, b, c, d);
                    let cols = expected_cols(&ring, a, b, c, d);
                    if rows.is_empty() || cols.is_empty() {
                        continue;
                    }
                    // Row/col nonempty forces a+b+c+d even.
                    let sign = if (a + b + c + d) / 2 % 2 == 0 { 1.0 } else { -1.0 };
                    let mat = Matrix::from_fn(rows.len(), cols.len(), |p, v| {
                        let (row, col) = (rows[p], cols[v]);
                        re(sign
                            * (q.int[col + 1] * q.int[row + 1]).sqrt()
                            * q6j_inner(k, &q, a, b, col, c, d, row))
                    });
                    f.insert((a, b, c, d), FBlock { rows, cols, mat });
                }
            }
        }
    }

    let mut r = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if su2_admissible(k, a, b, c) {
                    let casimir =
                        (c * (c + 2)) as i64 - (a * (a + 2)) as i64 - (b * (b + 2)) as i64;
                    let sign = ((a + b - c) / 2 % 2) as f64;
                    r.insert(
                        (a, b, c),
                        phase(PI * (sign + casimir as f64 / (4 * (k + 2)) as f64)),
                    );
                }
            }
        }
    }

    let skeletal = SkeletalData::with_unit_ev(ring.clone(), f, r)?;

    // Unit-gauge convention: every F-block touching the vacuum is identity.
    for (&(a, b, c, d), block) in skeletal.f_blocks() {
        if a != 0 && b != 0 && c != 0 {
            continue;
        }
        let residual = block.mat.max_diff(&Matrix::identity(block.mat.nrows())).unwrap_or(f64::INFINITY);
        if residual > tol.gate(1.0) {
            return Err(FamilyError::SelfCheck(format!(
                "SU(2)_{k} block F^({a},{b},{c};{d}) violates the unit gauge by {residual:.3e}"
            )));
        }
    }
    let pentagon = skeletal.verify_pentagon(SumMode::Plain);
    if !pentagon.ok(&tol) {
        return Err(FamilyError::SelfCheck(format!(
            "SU(2)_{k} pentagon residual {:.3e} at {:?}",
            pentagon.max_residual, pentagon.worst
        )));
    }
    let hexagon = skeletal.verify_hexagon(SumMode::Plain);
    if !hexagon.ok(&tol) {
        return Err(FamilyError::SelfCheck(format!(
            "SU(2)_{k} hexagon residual {:.3e}",
            hexagon.max_residual()
        )));
    }
    let f_unitarity = skeletal.verify_f_unitarity(&tol);
    if !f_unitarity.ok(&tol) {
        return Err(FamilyError::SelfCheck(format!(
            "SU(2)_{k} F-unitarity residual {:.3e} at {:?}",
            f_unitarity.max_residual, f_unitarity.worst
        )));
    }

    // Modular data: S_{ab} = √(2/(k+2)) sin(π(a+1)(b+1)/(k+2)), h_a = a(a+2)/(4(k+2)).
    let s_norm = (2.0 / (k + 2) as f64).sqrt();
    let s_mat = Matrix::from_fn(n, n, |a, b| {
        let num = ((a + 1) * (b + 1)) % (2 * (k + 2));
        re(s_norm * (PI * num as f64 / (k + 2) as f64).sin())
    });
    let central = 3.0 * k as f64 / (k + 2) as f64;
    let weight = |a: usize| (a * (a + 2)) as f64 / (4 * (k + 2)) as f64;
    let modular = ModularData {
        dims: quantum_dims(&s_mat, &tol)?,
        t: (0..n).map(|a| phase(2.0 * PI * (weight(a) - central / 24.0))).collect(),
        theta: (0..n).map(|a| phase(2.0 * PI * weight(a))).collect(),
        s: s_mat,
        central_charge: central,
    };
    let report = verify_modular(&ring, &modular, &tol, SumMode::Plain)?;
    if !report.ok() {
        return Err(FamilyError::SelfCheck(format!(
            "SU(2)_{k} modular data failed verification: max residual {:.3e}",
            report.max_residual()
        )));
    }
    // F-derived quantum dimensions must agree with the S-matrix ratios.
    for a in 0..n {
        let from_f = skeletal.quantum_dim(a)?;
        if (from_f - modular.dims[a]).abs() > tol.gate(modular.dims[a]) {
            return Err(FamilyError::SelfCheck(format!(
                "SU(2)_{k} label {a}: F-derived dimension {from_f} vs S-ratio {}",
                modular.dims[a]
            )));
        }
    }

    Ok(Su2Data { k, skeletal, modular })
}

/// The trivial (vacuum-only) model, for smoke tests and the CLI.
pub fn trivial() -> (SkeletalData, ModularData) {
    let skeletal = trivial_skeletal();
    let modular = ModularData {
        s: Matrix::identity(1),
        t: vec![re(1.0)],
        theta: vec![re(1.0)],
        dims: vec![1.0],
        central_charge: 0.0,
    };
    (skeletal, modular)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::tests::ising_ring;

    fn assert_close(x: f64, y: f64, eps: f64) {
        assert!((x - y).abs() < eps, "{x} vs {y}");
    }

    #[test]
    fn central_charge_values() {
        assert_close(central_charge(2).unwrap(), 0.0, 1e-15);
        assert_close(central_charge(3).unwrap(), 0.5, 1e-15);
        assert_close(central_charge(4).unwrap(), 0.7, 1e-15);
        assert!(matches!(central_charge(1), Err(FamilyError::BadM(1))));
    }

    #[test]
    fn kac_weight_values_and_symmetry() {
        assert_close(kac_weight(3, 1, 1).unwrap(), 0.0, 1e-15);
        assert_close(kac_weight(3, 2, 2).unwrap(), 1.0 / 16.0, 1e-15);
        // The printed formula puts h_{1,2} = ((4−6)²−1)/48 = 1/16 — the same
        // class as (2,2) — and h_{1,3} = 1/2.
        assert_close(kac_weight(3, 1, 2).unwrap(), 1.0 / 16.0, 1e-15);
        assert_close(kac_weight(3, 1, 3).unwrap(), 0.5, 1e-15);
        for m in 2..=8 {
            for r in 1..m {
                for s in 1..=m {
                    assert_close(
                        kac_weight(m, r, s).unwrap(),
                        kac_weight(m, m - r, m + 1 - s).unwrap(),
                        1e-14,
                    );
                }
            }
        }
        assert!(matches!(kac_weight(3, 3, 1), Err(FamilyError::KacRange { .. })));
        assert!(matches!(kac_weight(3, 1, 4), Err(FamilyError::KacRange { .. })));
        assert!(matches!(kac_weight(3, 0, 1), Err(FamilyError::KacRange { .. })));
    }

    #[test]
    fn kac_table_m3_is_ising_ordered() {
        let table = KacTable::new(3).unwrap();
        assert_eq!(table.labels, vec![(1, 1), (1, 2), (1, 3)]);
        assert_close(table.weights[0], 0.0, 1e-15);
        assert_close(table.weights[1], 1.0 / 16.0, 1e-15);
        assert_close(table.weights[2], 0.5, 1e-15);
        assert_eq!(table.class_of(2, 3).unwrap(), 0);
        assert_eq!(table.class_of(2, 2).unwrap(), 1);
        assert_eq!(table.class_of(2, 1).unwrap(), 2);
    }

    #[test]
    fn minimal_model_m3_matches_ising() {
        let mm = minimal_model(3).unwrap();
        let ising = ising_ring();
        assert_eq!(mm.ring.len(), 3);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert_eq!(mm.ring.mult(i, j, k), ising.mult(i, j, k));
                }
            }
        }
        assert_close(mm.modular.central_charge, 0.5, 1e-15);
        assert_close(mm.modular.dims[0], 1.0, 1e-12);
        assert_close(mm.modular.dims[1], 2f64.sqrt(), 1e-12);
        assert_close(mm.modular.dims[2], 1.0, 1e-12);
    }

    #[test]
    fn minimal_model_m4_weights() {
        let mm = minimal_model(4).unwrap();
        assert_eq!(mm.table.labels.len(), 6);
        let has = |h: f64| mm.table.weights.iter().any(|&w| (w - h).abs() < 1e-12);
        assert!(has(1.5), "missing h = 3/2 in {:?}", mm.table.weights);
        assert!(has(7.0 / 16.0), "missing h = 7/16 in {:?}", mm.table.weights);
    }

    #[test]
    fn minimal_model_m2_is_trivial() {
        let mm = minimal_model(2).unwrap();
        assert_eq!(mm.ring.len(), 1);
        assert_close(mm.modular.central_charge, 0.0, 1e-15);
        assert_close(mm.modular.s[(0, 0)].re, 1.0, 1e-12);
    }

    #[test]
    fn minimal_model_family_sweep() {
        for m in 2..=8 {
            let mm = minimal_model(m).unwrap_or_else(|e| panic!("m = {m}: {e}"));
            assert_eq!(mm.ring.len(), m * (m - 1) / 2);
            assert_close(mm.modular.central_charge, central_charge(m).unwrap(), 1e-15);
        }
        assert!(matches!(minimal_model(1), Err(FamilyError::BadM(1))));
    }

    #[test]
    fn bpz_oracle_spot_values() {
        // Ising σ×σ = 1 + ψ, σ×ψ = σ, ψ×ψ = 1.
        assert_eq!(bpz_fusion(3, (1, 2), (1, 2), (1, 1)), 1);
        assert_eq!(bpz_fusion(3, (1, 2), (1, 2), (1, 3)), 1);
        assert_eq!(bpz_fusion(3, (1, 2), (1, 2), (1, 2)), 0);
        assert_eq!(bpz_fusion(3, (1, 2), (1, 3), (1, 2)), 1);
        assert_eq!(bpz_fusion(3, (1, 3), (1, 3), (1, 1)), 1);
        assert_eq!(bpz_fusion(3, (1, 3), (1, 3), (1, 3)), 0);
        // Representatives of the same class give the same number.
        assert_eq!(bpz_fusion(3, (2, 2), (1, 2), (1, 1)), 1);
        // Tricritical Ising: (2,2)×(2,2) = (1,1)+(1,2)+(1,3)+(1,4).
        for s in 1..=4 {
            assert_eq!(bpz_fusion(4, (2, 2), (2, 2), (1, s)), 1, "s = {s}");
        }
        assert_eq!(bpz_fusion(4, (2, 2), (2, 2), (2, 2)), 0);
    }

    #[test]
    fn q6j_basics() {
        assert_close(q6j(2, 0, 0, 0, 0, 0, 0).unwrap(), 1.0, 1e-15);
        // Inadmissible triad → 0.
        assert_eq!(q6j(2, 1, 1, 1, 1, 1, 1).unwrap(), 0.0);
        assert!(matches!(q6j(2, 3, 0, 0, 0, 0, 0), Err(FamilyError::BadLabel { k: 2, a: 3 })));
        // σ-analog entries at k = 2 have modulus [F^{111}_1] = 1/√2 after the
        // √([m+1][n+1]) normalization.
        let sym = q6j(2, 1, 1, 0, 1, 1, 0).unwrap();
        assert_close(sym.abs(), 1.0 / 2f64.sqrt(), 1e-12);
    }

    #[test]
    fn su2_level_1_and_2() {
        let lvl1 = su2_data(1).unwrap();
        assert_eq!(lvl1.skeletal.ring().len(), 2);
        assert_eq!(lvl1.skeletal.ring().fuse(1, 1).unwrap(), vec![(0, 1)]);
        assert_close(lvl1.modular.dims[1], 1.0, 1e-12);

        let lvl2 = su2_data(2).unwrap();
        assert_eq!(lvl2.skeletal.ring().len(), 3);
        assert_close(lvl2.modular.dims[1], 2f64.sqrt(), 1e-12);
        let block = lvl2.skeletal.f_block(1, 1, 1, 1).unwrap();
        for p in 0..2 {
            for q in 0..2 {
                assert_close(block.mat[(p, q)].norm(), 1.0 / 2f64.sqrt(), 1e-12);
            }
        }
        assert!(matches!(su2_data(0), Err(FamilyError::BadLevel(0))));
    }

    #[test]
    fn su2_level_4_fusion_example() {
        let lvl4 = su2_data(4).unwrap();
        assert_eq!(
            lvl4.skeletal.ring().fuse(2, 2).unwrap(),
            vec![(0, 1), (2, 1), (4, 1)]
        );
    }

    #[test]
    fn su2_golden_ratio_dimension() {
        let lvl3 = su2_data(3).unwrap();
        assert_close(lvl3.modular.dims[1], 2.0 * (PI / 5.0).cos(), 1e-12);
        assert_close(lvl3.skeletal.quantum_dim(1).unwrap(), 2.0 * (PI / 5.0).cos(), 1e-12);
    }

    #[test]
    fn su2_residuals_tight_at_small_levels() {
        for k in 1..=3 {
            let data = su2_data(k).unwrap();
            assert!(data.skeletal.verify_pentagon(SumMode::Plain).max_residual < 1e-12);
            assert!(data.skeletal.verify_hexagon(SumMode::Plain).max_residual() < 1e-12);
        }
    }

    #[test]
    fn su2_matches_minimal_m3() {
        let mm = minimal_model(3).unwrap();
        let lvl2 = su2_data(2).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert_eq!(mm.ring.mult(i, j, k), lvl2.skeletal.ring().mult(i, j, k));
                }
            }
        }
        for a in 0..3 {
            assert_close(mm.modular.dims[a], lvl2.modular.dims[a], 1e-12);
        }
    }

    #[test]
    fn trivial_family_verifies() {
        let (skeletal, modular) = trivial();
        let report =
            verify_modular(skeletal.ring(), &modular, &gen_tol(), SumMode::Plain).unwrap();
        assert!(report.ok(), "{report:?}");
    }
}
