//! Fusion rings: finitely many labels, a dual involution, and non-negative
//! integer structure constants `N^k_{ij}` with the vacuum as unit.
//!
//! All ring checks are exact integer arithmetic; floating point only enters
//! once modular data is attached.

use thiserror::Error;

/// Index of the vacuum label in every ring.
pub const VACUUM: usize = 0;

#[derive(Debug, Error)]
pub enum RingError {
    #[error("label id {id} out of range (ring has {len} labels)")]
    InvalidLabel { id: usize, len: usize },
    #[error("ring shape invalid: {0}")]
    Shape(String),
    #[error("ring invariant `{invariant}` violated: {detail}")]
    Invariant { invariant: String, detail: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Label {
    pub id: usize,
    pub name: String,
}

/// Fusion ring with dense multiplicity storage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionRing {
    labels: Vec<Label>,
    dual: Vec<usize>,
    mult: Vec<u32>,
}

impl FusionRing {
    /// Build a ring from a multiplicity closure. Shape checks happen here;
    /// the semantic laws are the business of [`verify_ring`].
    pub fn from_fn(
        names: Vec<String>,
        dual: Vec<usize>,
        mult: impl Fn(usize, usize, usize) -> u32,
    ) -> Result<Self, RingError> {
        let n = names.len();
        if n == 0 {
            return Err(RingError::Shape("ring must contain the vacuum label".into()));
        }
        if dual.len() != n {
            return Err(RingError::Shape(format!("dual map has {} entries for {} labels", dual.len(), n)));
        }
        if let Some(&bad) = dual.iter().find(|&&d| d >= n) {
            return Err(RingError::InvalidLabel { id: bad, len: n });
        }
        let labels = names.into_iter().enumerate().map(|(id, name)| Label { id, name }).collect();
        let mut table = vec![0u32; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    table[(i * n + j) * n + k] = mult(i, j, k);
                }
            }
        }
        Ok(FusionRing { labels, dual, mult: table })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn name(&self, i: usize) -> &str {
        &self.labels[i].name
    }

    pub fn dual(&self, i: usize) -> usize {
        self.dual[i]
    }

    pub fn dual_map(&self) -> &[usize] {
        &self.dual
    }

    pub fn mult(&self, i: usize, j: usize, k: usize) -> u32 {
        let n = self.len();
        self.mult[(i * n + j) * n + k]
    }

    pub fn check_label(&self, i: usize) -> Result<(), RingError> {
        if i < self.len() {
            Ok(())
        } else {
            Err(RingError::InvalidLabel { id: i, len: self.len() })
        }
    }

    /// Decomposition of `i ⊗ j` as `(label, multiplicity)` pairs, ascending.
    pub fn fuse(&self, i: usize, j: usize) -> Result<Vec<(usize, u32)>, RingError> {
        self.check_label(i)?;
        self.check_label(j)?;
        Ok((0..self.len()).filter_map(|k| match self.mult(i, j, k) {
            0 => None,
            m => Some((k, m)),
        }).collect())
    }

    /// Channels of `i ⊗ j` (labels with nonzero multiplicity), ascending.
    pub fn channels(&self, i: usize, j: usize) -> Vec<usize> {
        (0..self.len()).filter(|&k| self.mult(i, j, k) > 0).collect()
    }

    pub fn admissible(&self, i: usize, j: usize, k: usize) -> bool {
        self.mult(i, j, k) > 0
    }

    pub fn multiplicity_free(&self) -> bool {
        self.mult.iter().all(|&m| m <= 1)
    }

    /// Cheap structural laws checked when a catalog is loaded: dual
    /// involution, unit law, and uniqueness of the vacuum channel.
    pub fn structural_check(&self) -> Result<(), RingError> {
        let n = self.len();
        if self.dual[VACUUM] != VACUUM {
            return Err(RingError::Invariant {
                invariant: "vacuum self-dual".into(),
                detail: format!("dual(0) = {}", self.dual[VACUUM]),
            });
        }
        for i in 0..n {
            if self.dual[self.dual[i]] != i {
                return Err(RingError::Invariant {
                    invariant: "dual involution".into(),
                    detail: format!("dual(dual({i})) = {}", self.dual[self.dual[i]]),
                });
            }
        }
        for i in 0..n {
            for j in 0..n {
                let unit_left = self.mult(VACUUM, i, j);
                let unit_right = self.mult(i, VACUUM, j);
                let expect = u32::from(i == j);
                if unit_left != expect || unit_right != expect {
                    return Err(RingError::Invariant {
                        invariant: "unit law".into(),
                        detail: format!(
                            "N[0,{i},{j}] = {unit_left}, N[{i},0,{j}] = {unit_right}"
                        ),
                    });
                }
                let vac = self.mult(i, j, VACUUM);
                let expect = u32::from(j == self.dual[i]);
                if vac != expect {
                    return Err(RingError::Invariant {
                        invariant: "vacuum channel multiplicity".into(),
                        detail: format!("N[{i},{j},0] = {vac}, expected {expect}"),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Result of the full ring verification.
#[derive(Debug, Clone)]
pub struct RingReport {
    pub structural_ok: bool,
    pub structural_detail: Option<String>,
    pub commutative_ok: bool,
    pub associative_ok: bool,
    pub frobenius_ok: bool,
    /// Largest integer defect over all associativity quadruples.
    pub max_assoc_defect: u64,
    /// Lexicographically first quadruple `(i,j,k,l)` with an associativity
    /// defect, if any.
    pub worst_assoc: Option<(usize, usize, usize, usize)>,
    pub worst_commutative: Option<(usize, usize, usize)>,
    pub worst_frobenius: Option<(usize, usize, usize)>,
}

impl RingReport {
    pub fn ok(&self) -> bool {
        self.structural_ok && self.commutative_ok && self.associative_ok && self.frobenius_ok
    }
}

/// Check unit/dual structure, commutativity, associativity, and the
/// Frobenius symmetry `N^k_{ij} = N^{k̄}_{j̄ ī}`.
pub fn verify_ring(ring: &FusionRing) -> RingReport {
    let n = ring.len();
    let structural = ring.structural_check();
    let mut report = RingReport {
        structural_ok: structural.is_ok(),
        structural_detail: structural.err().map(|e| e.to_string()),
        commutative_ok: true,
        associative_ok: true,
        frobenius_ok: true,
        max_assoc_defect: 0,
        worst_assoc: None,
        worst_commutative: None,
        worst_frobenius: None,
    };
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if ring.mult(i, j, k) != ring.mult(j, i, k) && report.worst_commutative.is_none() {
                    report.commutative_ok = false;
                    report.worst_commutative = Some((i, j, k));
                }
                let (di, dj, dk) = (ring.dual(i), ring.dual(j), ring.dual(k));
                if ring.mult(i, j, k) != ring.mult(dj, di, dk) && report.worst_frobenius.is_none() {
                    report.frobenius_ok = false;
                    report.worst_frobenius = Some((i, j, k));
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let left: u64 = (0..n)
                        .map(|s| u64::from(ring.mult(i, j, s)) * u64::from(ring.mult(s, k, l)))
                        .sum();
                    let right: u64 = (0..n)
                        .map(|t| u64::from(ring.mult(j, k, t)) * u64::from(ring.mult(i, t, l)))
                        .sum();
                    let defect = left.abs_diff(right);
                    if defect > 0 {
                        report.associative_ok = false;
                        if defect > report.max_assoc_defect {
                            report.max_assoc_defect = defect;
                        }
                        if report.worst_assoc.is_none() {
                            report.worst_assoc = Some((i, j, k, l));
                        }
                    }
                }
            }
        }
    }
    report
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn trivial() -> FusionRing {
        FusionRing::from_fn(vec!["0".into()], vec![0], |_, _, _| 1).unwrap()
    }

    /// Ising-type ring: labels 0 (vacuum), 1 (sigma), 2 (psi).
    pub fn ising_ring() -> FusionRing {
        FusionRing::from_fn(
            vec!["1".into(), "sigma".into(), "psi".into()],
            vec![0, 1, 2],
            ising_mult,
        )
        .unwrap()
    }

    fn ising_mult(i: usize, j: usize, k: usize) -> u32 {
        // Truncated spin-half rule at level 2, written out by hand.
        let table: [[&[usize]; 3]; 3] = [
            [&[0], &[1], &[2]],
            [&[1], &[0, 2], &[1]],
            [&[2], &[1], &[0]],
        ];
        u32::from(table[i][j].contains(&k))
    }

    /// Independent oracle: Verlinde sums over the level-2 truncated `su(2)`
    /// S-matrix, evaluated directly from the sine formula.
    fn verlinde_oracle_level2(i: usize, j: usize, k: usize) -> u32 {
        let s = |a: usize, b: usize| -> f64 {
            (2.0f64 / 4.0).sqrt()
                * (std::f64::consts::PI * ((a + 1) * (b + 1)) as f64 / 4.0).sin()
        };
        let mut acc = 0.0;
        for m in 0..3 {
            acc += s(i, m) * s(j, m) * s(k, m) / s(0, m);
        }
        acc.round() as u32
    }

    #[test]
    fn ising_matches_verlinde_oracle() {
        let ring = ising_ring();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert_eq!(
                        ring.mult(i, j, k),
                        verlinde_oracle_level2(i, j, k),
                        "triple ({i},{j},{k})"
                    );
                }
            }
        }
    }

    #[test]
    fn fuse_decomposes_sigma_squared() {
        let ring = ising_ring();
        assert_eq!(ring.fuse(1, 1).unwrap(), vec![(0, 1), (2, 1)]);
        assert_eq!(ring.fuse(0, 2).unwrap(), vec![(2, 1)]);
        assert_eq!(ring.fuse(2, 1).unwrap(), vec![(1, 1)]);
    }

    #[test]
    fn fuse_rejects_out_of_range_labels() {
        let ring = trivial();
        assert!(matches!(ring.fuse(0, 1), Err(RingError::InvalidLabel { .. })));
    }

    #[test]
    fn trivial_and_ising_rings_verify() {
        assert!(verify_ring(&trivial()).ok());
        let report = verify_ring(&ising_ring());
        assert!(report.ok(), "{report:?}");
        assert_eq!(report.max_assoc_defect, 0);
    }

    #[test]
    fn corrupted_multiplicity_breaks_associativity() {
        // Drop the psi channel from sigma ⊗ sigma. (Adding a sigma channel
        // instead would give the perfectly associative Rep(S3) ring, so that
        // corruption is useless as a control.)
        let ring = FusionRing::from_fn(
            vec!["1".into(), "sigma".into(), "psi".into()],
            vec![0, 1, 2],
            |i, j, k| {
                if (i, j, k) == (1, 1, 2) {
                    0
                } else {
                    ising_mult(i, j, k)
                }
            },
        )
        .unwrap();
        let report = verify_ring(&ring);
        assert!(!report.associative_ok);
        assert_eq!(report.worst_assoc, Some((1, 1, 2, 0)));
        assert_eq!(report.max_assoc_defect, 1);
        assert!(report.structural_ok && report.commutative_ok && report.frobenius_ok);
    }

    #[test]
    fn rep_s3_style_extra_channel_stays_associative() {
        // N^sigma_{sigma,sigma} = 1 turns the Ising ring into Rep(S3)'s
        // fusion ring, which is associative; a useful reminder that not
        // every multiplicity edit is an associativity violation.
        let ring = FusionRing::from_fn(
            vec!["1".into(), "sigma".into(), "psi".into()],
            vec![0, 1, 2],
            |i, j, k| {
                if (i, j, k) == (1, 1, 1) {
                    1
                } else {
                    ising_mult(i, j, k)
                }
            },
        )
        .unwrap();
        let report = verify_ring(&ring);
        assert!(report.ok(), "{report:?}");
    }

    #[test]
    fn vacuum_pairing_violation_is_structural() {
        let ring = FusionRing::from_fn(
            vec!["1".into(), "sigma".into(), "psi".into()],
            vec![0, 1, 2],
            |i, j, k| if (i, j, k) == (1, 1, 0) { 2 } else { ising_mult(i, j, k) },
        )
        .unwrap();
        let err = ring.structural_check().unwrap_err();
        assert!(err.to_string().contains("vacuum channel multiplicity"));
    }

    #[test]
    fn frobenius_violation_detected() {
        // Break N^k_{ij} = N^{k̄}_{j̄ī} with an artificial non-self-dual pair.
        let ring = FusionRing::from_fn(
            vec!["0".into(), "a".into(), "abar".into()],
            vec![0, 2, 1],
            |i, j, k| {
                u32::from(match (i, j, k) {
                    (0, x, y) | (x, 0, y) => x == y,
                    (1, 2, 0) | (2, 1, 0) => true,
                    (1, 1, 2) => true, // missing the mirror (2,2,1)
                    _ => false,
                })
            },
        )
        .unwrap();
        let report = verify_ring(&ring);
        assert!(!report.frobenius_ok);
        assert!(report.worst_frobenius.is_some());
    }
}
