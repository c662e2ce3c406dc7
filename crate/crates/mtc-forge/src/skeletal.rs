//! Skeletal category data: F-blocks and R-symbols over a multiplicity-free
//! fusion ring, plus the polynomial-equation verifiers (pentagon, hexagons,
//! braid relations) and gauge transforms.
//!
//! Conventions, fixed once for the whole crate:
//!
//! * `F^{abc}_d` is the matrix of the associator in the skeletal basis. Its
//!   columns are indexed by left-tree channels `m` (`m ∈ i⊗j` with
//!   `N^d_{mc} > 0`), its rows by right-tree channels `n` (`n ∈ b⊗c` with
//!   `N^d_{an} > 0`), and it expands left trees in right trees:
//!   `e^L_m = Σ_n F[n,m] · e^R_n`.
//! * `R^{ab}_c` is the braiding eigenvalue on the channel `c` of `a⊗b`:
//!   `[ba→c] ∘ σ_{a,b} = R^{ab}_c · [ab→c]`.
//! * `B_+` braids counterclockwise and is built from `R`; `B_-` uses `R⁻¹`.
//!   A chain `(charge c: u → v)` is the skeletal vertex `[c u → v]`.

use crate::algebra::{
    is_unitary, re, sum_scalars, Matrix, Scalar, SumMode, Tolerance, ONE, ZERO,
};
use crate::ring::{FusionRing, RingError, VACUUM};
use rayon::prelude::*;
use std::collections::BTreeMap;
use thiserror::Error;

pub type FKey = (usize, usize, usize, usize);
pub type RKey = (usize, usize, usize);

#[derive(Debug, Error)]
pub enum SkeletalError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Algebra(#[from] crate::algebra::AlgebraError),
    #[error("skeletal data requires a multiplicity-free ring")]
    NotMultiplicityFree,
    #[error("missing F-block {0:?}")]
    MissingFBlock(FKey),
    #[error("F-block {0:?} is not admissible")]
    UnexpectedFBlock(FKey),
    #[error("F-block {key:?} invalid: {detail}")]
    BadFBlock { key: FKey, detail: String },
    #[error("channel pair (row {n}, col {m}) absent from F-block {key:?}")]
    ChannelLookup { key: FKey, n: usize, m: usize },
    #[error("missing R-symbol {0:?}")]
    MissingRSymbol(RKey),
    #[error("R-symbol {0:?} is not admissible")]
    UnexpectedRSymbol(RKey),
    #[error("R-symbol {key:?} invalid: {detail}")]
    BadRSymbol { key: RKey, detail: String },
    #[error("ev norm for label {label} must be a positive finite real, got {value}")]
    BadEvNorm { label: usize, value: f64 },
    #[error("triple ({i}, {j}; {k}) is not admissible")]
    InadmissibleTriple { i: usize, j: usize, k: usize },
    #[error("gauge scalar at ({a}, {b}; {c}) is zero or not finite")]
    GaugeZero { a: usize, b: usize, c: usize },
}

/// One associator block with its explicit row/column channel labels.
#[derive(Debug, Clone, PartialEq)]
pub struct FBlock {
    /// Right-tree channels `n ∈ b⊗c` with `N^d_{an} > 0`, ascending.
    pub rows: Vec<usize>,
    /// Left-tree channels `m ∈ a⊗b` with `N^d_{mc} > 0`, ascending.
    pub cols: Vec<usize>,
    pub mat: Matrix,
}

impl FBlock {
    pub fn row_of(&self, n: usize) -> Option<usize> {
        self.rows.binary_search(&n).ok()
    }

    pub fn col_of(&self, m: usize) -> Option<usize> {
        self.cols.binary_search(&m).ok()
    }

    pub fn entry(&self, n: usize, m: usize) -> Option<Scalar> {
        Some(self.mat[(self.row_of(n)?, self.col_of(m)?)])
    }
}

/// F/R data over a fusion ring, with per-label ev normalizations μ_i.
#[derive(Debug, Clone)]
pub struct SkeletalData {
    ring: FusionRing,
    f: BTreeMap<FKey, FBlock>,
    r: BTreeMap<RKey, Scalar>,
    ev_norms: Vec<f64>,
}

/// Row labels the convention assigns to `F^{abc}_d`.
pub fn expected_rows(ring: &FusionRing, a: usize, b: usize, c: usize, d: usize) -> Vec<usize> {
    ring.channels(b, c).into_iter().filter(|&n| ring.admissible(a, n, d)).collect()
}

/// Column labels the convention assigns to `F^{abc}_d`.
pub fn expected_cols(ring: &FusionRing, a: usize, b: usize, c: usize, d: usize) -> Vec<usize> {
    ring.channels(a, b).into_iter().filter(|&m| ring.admissible(m, c, d)).collect()
}

impl SkeletalData {
    pub fn new(
        ring: FusionRing,
        f: BTreeMap<FKey, FBlock>,
        r: BTreeMap<RKey, Scalar>,
        ev_norms: Vec<f64>,
    ) -> Result<Self, SkeletalError> {
        ring.structural_check()?;
        if !ring.multiplicity_free() {
            return Err(SkeletalError::NotMultiplicityFree);
        }
        let n = ring.len();
        if ev_norms.len() != n {
            return Err(SkeletalError::BadEvNorm { label: ev_norms.len().min(n), value: f64::NAN });
        }
        for (label, &mu) in ev_norms.iter().enumerate() {
            if !(mu.is_finite() && mu > 0.0) {
                return Err(SkeletalError::BadEvNorm { label, value: mu });
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let rows = expected_rows(&ring, a, b, c, d);
                        let cols = expected_cols(&ring, a, b, c, d);
                        let key = (a, b, c, d);
                        match f.get(&key) {
                            None if rows.is_empty() && cols.is_empty() => {}
                            None => return Err(SkeletalError::MissingFBlock(key)),
                            Some(_) if rows.is_empty() && cols.is_empty() => {
                                return Err(SkeletalError::UnexpectedFBlock(key))
                            }
                            Some(block) => {
                                if block.rows != rows || block.cols != cols {
                                    return Err(SkeletalError::BadFBlock {
                                        key,
                                        detail: format!(
                                            "channel lists {:?}/{:?} do not match the convention's {rows:?}/{cols:?}",
                                            block.rows, block.cols
                                        ),
                                    });
                                }
                                if block.mat.nrows() != rows.len() || block.mat.ncols() != cols.len() {
                                    return Err(SkeletalError::BadFBlock {
                                        key,
                                        detail: format!(
                                            "matrix is {}x{} for {} rows and {} cols",
                                            block.mat.nrows(),
                                            block.mat.ncols(),
                                            rows.len(),
                                            cols.len()
                                        ),
                                    });
                                }
                                if block.mat.check_finite().is_err() {
                                    return Err(SkeletalError::BadFBlock {
                                        key,
                                        detail: "non-finite entry".into(),
                                    });
                                }
                            }
                        }
                        if rows.is_empty() != cols.is_empty() {
                            // Shapes like 0×2 only arise from non-associative
                            // rings; flag them here instead of panicking later.
                            return Err(SkeletalError::BadFBlock {
                                key,
                                detail: "row/col channel sets disagree on emptiness".into(),
                            });
                        }
                    }
                }
            }
        }
        if let Some((&key, _)) = f.iter().find(|(k, _)| {
            k.0 >= n || k.1 >= n || k.2 >= n || k.3 >= n
        }) {
            return Err(SkeletalError::UnexpectedFBlock(key));
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let key = (i, j, k);
                    match (ring.admissible(i, j, k), r.get(&key)) {
                        (true, None) => return Err(SkeletalError::MissingRSymbol(key)),
                        (false, Some(_)) => return Err(SkeletalError::UnexpectedRSymbol(key)),
                        (true, Some(v)) => {
                            if !(v.re.is_finite() && v.im.is_finite()) || v.norm() == 0.0 {
                                return Err(SkeletalError::BadRSymbol {
                                    key,
                                    detail: format!("value {v} must be finite and nonzero"),
                                });
                            }
                        }
                        (false, None) => {}
                    }
                }
            }
        }
        if let Some((&key, _)) = r.iter().find(|(k, _)| k.0 >= n || k.1 >= n || k.2 >= n) {
            return Err(SkeletalError::UnexpectedRSymbol(key));
        }
        Ok(SkeletalData { ring, f, r, ev_norms })
    }

    pub fn with_unit_ev(
        ring: FusionRing,
        f: BTreeMap<FKey, FBlock>,
        r: BTreeMap<RKey, Scalar>,
    ) -> Result<Self, SkeletalError> {
        let n = ring.len();
        Self::new(ring, f, r, vec![1.0; n])
    }

    pub fn ring(&self) -> &FusionRing {
        &self.ring
    }

    pub fn ev_norm(&self, i: usize) -> f64 {
        self.ev_norms[i]
    }

    pub fn ev_norms(&self) -> &[f64] {
        &self.ev_norms
    }

    pub fn f_blocks(&self) -> &BTreeMap<FKey, FBlock> {
        &self.f
    }

    pub fn r_symbols(&self) -> &BTreeMap<RKey, Scalar> {
        &self.r
    }

    pub fn f_block(&self, a: usize, b: usize, c: usize, d: usize) -> Result<&FBlock, SkeletalError> {
        self.f.get(&(a, b, c, d)).ok_or(SkeletalError::MissingFBlock((a, b, c, d)))
    }

    /// Strict entry lookup; errors if the block or channel pair is absent.
    pub fn f_entry(
        &self,
        a: usize,
        b: usize,
        c: usize,
        d: usize,
        n: usize,
        m: usize,
    ) -> Result<Scalar, SkeletalError> {
        let block = self.f_block(a, b, c, d)?;
        block.entry(n, m).ok_or(SkeletalError::ChannelLookup { key: (a, b, c, d), n, m })
    }

    /// Zero-extended entry lookup, the convention the pentagon and hexagon
    /// sums use for inadmissible internal channels.
    pub fn f_get(&self, a: usize, b: usize, c: usize, d: usize, n: usize, m: usize) -> Scalar {
        self.f
            .get(&(a, b, c, d))
            .and_then(|block| block.entry(n, m))
            .unwrap_or(ZERO)
    }

    pub fn r_symbol(&self, i: usize, j: usize, k: usize) -> Result<Scalar, SkeletalError> {
        self.r.get(&(i, j, k)).copied().ok_or(SkeletalError::MissingRSymbol((i, j, k)))
    }

    /// `d_i = 1 / |F^{i ī i}_i[0,0]|`, the quantum dimension read off the
    /// vacuum entry of the self-duality associator.
    pub fn quantum_dim(&self, i: usize) -> Result<f64, SkeletalError> {
        let f00 = self.vacuum_f(i)?;
        Ok(1.0 / f00.norm())
    }

    /// Pivotal phase `t_i = d_i · F^{i ī i}_i[0,0]`; equals the
    /// Frobenius–Schur indicator `κ_i` on self-dual labels.
    pub fn pivotal_phase(&self, i: usize) -> Result<Scalar, SkeletalError> {
        let f00 = self.vacuum_f(i)?;
        Ok(f00 / re(f00.norm()))
    }

    fn vacuum_f(&self, i: usize) -> Result<Scalar, SkeletalError> {
        let ibar = self.ring.dual(i);
        let f00 = self.f_entry(i, ibar, i, i, VACUUM, VACUUM)?;
        if f00.norm() < 1e-300 {
            return Err(SkeletalError::BadFBlock {
                key: (i, ibar, i, i),
                detail: "vacuum entry vanishes; quantum dimension undefined".into(),
            });
        }
        Ok(f00)
    }

    /// Coefficient `c` of the adjoint chain: the dagger map sends the vertex
    /// `[i j → k]` to `c · [ī k → j]`, with
    /// `c = t_i · √d_i · F^{ī i j}_j[k, 0]`.
    pub fn dagger_coefficient(&self, i: usize, j: usize, k: usize) -> Result<Scalar, SkeletalError> {
        if !self.ring.admissible(i, j, k) {
            return Err(SkeletalError::InadmissibleTriple { i, j, k });
        }
        let ibar = self.ring.dual(i);
        let t = self.pivotal_phase(i)?;
        let d = self.quantum_dim(i)?;
        Ok(t * re(d.sqrt()) * self.f_entry(ibar, i, j, j, k, VACUUM)?)
    }

    /// Matrix of the dagger map on the (≤1-dimensional) coupling space of
    /// `(i, j; k)`; empty when the triple is inadmissible.
    pub fn dagger_map(&self, i: usize, j: usize, k: usize) -> Result<Matrix, SkeletalError> {
        if !self.ring.admissible(i, j, k) {
            return Ok(Matrix::zeros(0, 0));
        }
        Ok(Matrix::scalar(self.dagger_coefficient(i, j, k)?))
    }

    /// Every admissible `(i, j, k)` triple in lexicographic order.
    pub fn admissible_triples(&self) -> Vec<(usize, usize, usize)> {
        self.r.keys().copied().collect()
    }

    pub fn verify_pentagon(&self, sum: SumMode) -> PolyReport {
        let n = self.ring.len();
        let ring = &self.ring;
        let per_a: Vec<PolyReport> = (0..n)
            .into_par_iter()
            .map(|a| {
                let mut acc = PolyReport::default();
                for b in 0..n {
                    for &x in &ring.channels(a, b) {
                        for c in 0..n {
                            for &y in &ring.channels(x, c) {
                                for d in 0..n {
                                    for &e in &ring.channels(y, d) {
                                        for &z in &ring.channels(c, d) {
                                            for &w in &ring.channels(b, z) {
                                                if !ring.admissible(a, w, e) {
                                                    continue;
                                                }
                                                let lhs = self.f_get(x, c, d, e, z, y)
                                                    * self.f_get(a, b, z, e, w, x);
                                                let rhs = sum_scalars(
                                                    sum,
                                                    ring.channels(b, c).into_iter().map(|v| {
                                                        self.f_get(a, b, c, y, v, x)
                                                            * self.f_get(a, v, d, e, w, y)
                                                            * self.f_get(b, c, d, w, z, v)
                                                    }),
                                                );
                                                acc.record(
                                                    (lhs - rhs).norm(),
                                                    vec![a, b, c, d, e, x, y, z, w],
                                                );
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
                acc
            })
            .collect();
        per_a.into_iter().fold(PolyReport::default(), PolyReport::merge)
    }

    /// Hexagon residuals for both chiralities. `H₊` moves `a` counter-
    /// clockwise across `b⊗c` with `R`; `H₋` is the clockwise mirror with
    /// `R⁻¹`.
    pub fn verify_hexagon(&self, sum: SumMode) -> HexagonReport {
        let n = self.ring.len();
        let ring = &self.ring;
        let per_a: Vec<HexagonReport> = (0..n)
            .into_par_iter()
            .map(|a| {
                let mut acc = HexagonReport::default();
                for b in 0..n {
                    for c in 0..n {
                        for d in 0..n {
                            for &x in &ring.channels(a, b) {
                                if !ring.admissible(x, c, d) {
                                    continue;
                                }
                                for &y in &ring.channels(a, c) {
                                    if !ring.admissible(b, y, d) {
                                        continue;
                                    }
                                    let site = vec![a, b, c, d, x, y];
                                    let zs: Vec<usize> = ring
                                        .channels(b, c)
                                        .into_iter()
                                        .filter(|&z| ring.admissible(a, z, d))
                                        .collect();
                                    let f_mid = self.f_get(b, a, c, d, y, x);
                                    let plus_lhs = self.r_get(b, a, x) * f_mid * self.r_get(c, a, y);
                                    let plus_rhs = sum_scalars(
                                        sum,
                                        zs.iter().map(|&z| {
                                            self.f_get(b, c, a, d, y, z)
                                                * self.r_get(z, a, d)
                                                * self.f_get(a, b, c, d, z, x)
                                        }),
                                    );
                                    acc.plus.record((plus_lhs - plus_rhs).norm(), site.clone());
                                    let minus_lhs =
                                        f_mid / (self.r_get(a, b, x) * self.r_get(a, c, y));
                                    let minus_rhs = sum_scalars(
                                        sum,
                                        zs.iter().map(|&z| {
                                            self.f_get(b, c, a, d, y, z)
                                                * self.f_get(a, b, c, d, z, x)
                                                / self.r_get(a, z, d)
                                        }),
                                    );
                                    acc.minus.record((minus_lhs - minus_rhs).norm(), site);
                                }
                            }
                        }
                    }
                }
                acc
            })
            .collect();
        per_a.into_iter().fold(HexagonReport::default(), HexagonReport::merge)
    }

    /// R-symbol lookup that substitutes 1 for missing (inadmissible) keys so
    /// hexagon terms guarded by admissible F-entries stay well-defined.
    fn r_get(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.r.get(&(i, j, k)).copied().unwrap_or(ONE)
    }

    /// Unitarity residual of every F-block.
    pub fn verify_f_unitarity(&self, tol: &Tolerance) -> PolyReport {
        let mut acc = PolyReport::default();
        for (key, block) in &self.f {
            let verdict = match is_unitary(&block.mat, *tol) {
                Ok(v) => v.residual,
                Err(_) => f64::INFINITY,
            };
            acc.record(verdict, vec![key.0, key.1, key.2, key.3]);
        }
        acc
    }

    /// Braid block `B±_{ij}` for a fixed source and target: columns are
    /// indexed by the in-chain internal label `s` (`source --j--> s --i-->
    /// target`), rows by the out-chain internal `s'` (`source --i--> s'
    /// --j--> target`).
    pub fn braid_matrix(
        &self,
        sign: BraidSign,
        i: usize,
        j: usize,
        source: usize,
        target: usize,
    ) -> Result<BraidBlock, SkeletalError> {
        let ring = &self.ring;
        let rows: Vec<usize> = ring
            .channels(i, source)
            .into_iter()
            .filter(|&s| ring.admissible(j, s, target))
            .collect();
        let cols: Vec<usize> = ring
            .channels(j, source)
            .into_iter()
            .filter(|&s| ring.admissible(i, s, target))
            .collect();
        if rows.is_empty() || cols.is_empty() {
            return Ok(BraidBlock { rows, cols, mat: Matrix::zeros(0, 0) });
        }
        let f_out = self.f_block(j, i, source, target)?;
        let f_in = self.f_block(i, j, source, target)?;
        let mids = &f_out.cols;
        let mut diag = Matrix::zeros(mids.len(), mids.len());
        for (p, &m) in mids.iter().enumerate() {
            diag[(p, p)] = match sign {
                BraidSign::Plus => self.r_symbol(j, i, m)?,
                BraidSign::Minus => ONE / self.r_symbol(i, j, m)?,
            };
        }
        let mat = f_out
            .mat
            .mul(&diag, SumMode::Plain)?
            .mul(&f_in.mat.inverse()?, SumMode::Plain)?;
        Ok(BraidBlock { rows, cols, mat })
    }

    /// The braid-relation suite: inversion, conjugation and star symmetries,
    /// unitarity, compatibility with F, and unit-modulus R.
    pub fn verify_braid_relations(&self, tol: &Tolerance, sum: SumMode) -> BraidReport {
        let n = self.ring.len();
        let ring = &self.ring;
        let mut report = BraidReport::default();

        let mut blocks: BTreeMap<(u8, usize, usize, usize, usize), BraidBlock> = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                for source in 0..n {
                    for target in 0..n {
                        for (tag, sign) in [(0u8, BraidSign::Plus), (1u8, BraidSign::Minus)] {
                            match self.braid_matrix(sign, i, j, source, target) {
                                Ok(block) if !block.mat.is_empty() => {
                                    blocks.insert((tag, i, j, source, target), block);
                                }
                                Ok(_) => {}
                                Err(_) => report.assembly.record(
                                    f64::INFINITY,
                                    vec![tag as usize, i, j, source, target],
                                ),
                            }
                        }
                    }
                }
            }
        }

        let lookup = |tag: u8, i: usize, j: usize, s0: usize, t: usize, row: usize, col: usize| {
            blocks.get(&(tag, i, j, s0, t)).and_then(|b| {
                let p = b.rows.iter().position(|&v| v == row)?;
                let q = b.cols.iter().position(|&v| v == col)?;
                Some(b.mat[(p, q)])
            })
        };

        // The starred chains of the symmetry relations are adjoint
        // intertwiners; each carries the dagger coefficient of its vertex.
        let mut dagger: BTreeMap<RKey, Scalar> = BTreeMap::new();
        for &(i, j, k) in self.r.keys() {
            match self.dagger_coefficient(i, j, k) {
                Ok(c) => {
                    dagger.insert((i, j, k), c);
                }
                Err(_) => report.assembly.record(f64::INFINITY, vec![i, j, k]),
            }
        }

        for (&(tag, i, j, s0, t), block) in &blocks {
            let site = vec![tag as usize, i, j, s0, t];
            let other = 1 - tag;

            // (B±)_{ij} · (B∓)_{ji} = 1 on each block.
            if let Some(inv) = blocks.get(&(other, j, i, s0, t)) {
                match block.mat.mul(&inv.mat, sum) {
                    Ok(prod) => {
                        let res = prod
                            .max_diff(&Matrix::identity(prod.nrows()))
                            .unwrap_or(f64::INFINITY);
                        report.inverse.record(res, site.clone());
                    }
                    Err(_) => report.inverse.record(f64::INFINITY, site.clone()),
                }
            } else {
                report.inverse.record(f64::INFINITY, site.clone());
            }

            // Unitarity of each block.
            let res = match is_unitary(&block.mat, *tol) {
                Ok(v) => v.residual,
                Err(_) => f64::INFINITY,
            };
            report.unitarity.record(res, site.clone());

            for (p, &sp) in block.rows.iter().enumerate() {
                for (q, &s) in block.cols.iter().enumerate() {
                    let val = block.mat[(p, q)];
                    let entry_site = vec![tag as usize, i, j, s0, t, sp, s];

                    // Dagger coefficients of the four chain vertices:
                    // α = [i s → t], β = [j s₀ → s], α' = [i s₀ → s'],
                    // β' = [j s' → t].
                    let cs = [
                        dagger.get(&(i, s, t)),
                        dagger.get(&(j, s0, s)),
                        dagger.get(&(i, s0, sp)),
                        dagger.get(&(j, sp, t)),
                    ];
                    let [Some(&ca), Some(&cb), Some(&cap), Some(&cbp)] = cs else {
                        report.conjugation.record(f64::INFINITY, entry_site.clone());
                        report.star_symmetry.record(f64::INFINITY, entry_site);
                        continue;
                    };

                    // conj (B±)^{β'α'}_{αβ} = (B∓)^{α'* β'*}_{β* α*}: the
                    // fully starred block of (j̄, ī) with source and target
                    // exchanged; each starred chain contributes the dagger
                    // coefficients of its two vertices.
                    let starred =
                        lookup(other, ring.dual(j), ring.dual(i), t, s0, sp, s);
                    report.conjugation.record(
                        starred.map_or(f64::INFINITY, |v| {
                            (val.conj() - v * ca * cb / (cap * cbp)).norm()
                        }),
                        entry_site.clone(),
                    );

                    // (B±)^{β'α'}_{αβ} = (B∓)^{α*β'}_{βα'*} — the in/out
                    // chains trade their first legs, so the block of
                    // (j, ī) rooted at s' targets s, with internal t / s₀;
                    // only the α legs are starred.
                    let swapped = lookup(other, j, ring.dual(i), sp, s, t, s0);
                    let r1 =
                        swapped.map_or(f64::INFINITY, |v| (val - v * cap / ca).norm());

                    // (B±)^{β'α'}_{αβ} = (B±)^{β*α*}_{α'*β'*}: full star,
                    // block of (ī, j̄) from t to s₀ with internals swapped.
                    let full_star =
                        lookup(tag, ring.dual(i), ring.dual(j), t, s0, s, sp);
                    let r2 = full_star.map_or(f64::INFINITY, |v| {
                        (val - v * cap * cbp / (ca * cb)).norm()
                    });
                    report.star_symmetry.record(r1.max(r2), entry_site);
                }
            }
        }

        // (d) F-compatibility: the inverse associator is the braid block in
        // braided-chain coordinates,
        // (F^{ijk}_t)⁻¹[s, m] = (B₊)_{ik}^{(j,t)}[s, m] · R^{kj}_m / R^{ks}_t.
        for (&(i, j, k, t), block) in &self.f {
            if block.mat.is_empty() {
                continue;
            }
            let finv = match block.mat.inverse() {
                Ok(m) => m,
                Err(_) => {
                    report.f_compat.record(f64::INFINITY, vec![i, j, k, t]);
                    continue;
                }
            };
            for (q, &s) in block.cols.iter().enumerate() {
                for (p, &m) in block.rows.iter().enumerate() {
                    let lhs = finv[(q, p)];
                    let rhs = lookup(0, i, k, j, t, s, m).and_then(|b| {
                        let rm = self.r.get(&(k, j, m))?;
                        let rs = self.r.get(&(k, s, t))?;
                        Some(b * rm / rs)
                    });
                    report.f_compat.record(
                        rhs.map_or(f64::INFINITY, |v| (lhs - v).norm()),
                        vec![i, j, k, t, s, m],
                    );
                }
            }
        }

        // (e) |R| = 1: braided single-vertex bases stay orthonormal.
        for (&(i, j, k), &v) in &self.r {
            report.r_modulus.record((v.norm() - 1.0).abs(), vec![i, j, k]);
        }

        report
    }

    /// Rescale every skeletal vertex `[a b → c]` by `u(a, b, c)`.
    pub fn gauge_transform(
        &self,
        u: &dyn Fn(usize, usize, usize) -> Scalar,
    ) -> Result<SkeletalData, SkeletalError> {
        let gauge = |a: usize, b: usize, c: usize| -> Result<Scalar, SkeletalError> {
            let v = u(a, b, c);
            if v.re.is_finite() && v.im.is_finite() && v.norm() > 0.0 {
                Ok(v)
            } else {
                Err(SkeletalError::GaugeZero { a, b, c })
            }
        };
        let mut f = BTreeMap::new();
        for (&(a, b, c, d), block) in &self.f {
            let mut mat = block.mat.clone();
            for (p, &n) in block.rows.iter().enumerate() {
                for (q, &m) in block.cols.iter().enumerate() {
                    let factor = gauge(a, b, m)? * gauge(m, c, d)?
                        / (gauge(b, c, n)? * gauge(a, n, d)?);
                    mat[(p, q)] *= factor;
                }
            }
            f.insert((a, b, c, d), FBlock { rows: block.rows.clone(), cols: block.cols.clone(), mat });
        }
        let mut r = BTreeMap::new();
        for (&(a, b, c), &v) in &self.r {
            r.insert((a, b, c), v * gauge(b, a, c)? / gauge(a, b, c)?);
        }
        SkeletalData::new(self.ring.clone(), f, r, self.ev_norms.clone())
    }

    /// Replace the ev normalizations (μ rescaling tests).
    pub fn with_ev_norms(&self, ev_norms: Vec<f64>) -> Result<SkeletalData, SkeletalError> {
        SkeletalData::new(self.ring.clone(), self.f.clone(), self.r.clone(), ev_norms)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BraidSign {
    Plus,
    Minus,
}

#[derive(Debug, Clone)]
pub struct BraidBlock {
    /// Out-chain internal labels `s' ∈ i⊗source` with `N^target_{j s'} > 0`.
    pub rows: Vec<usize>,
    /// In-chain internal labels `s ∈ j⊗source` with `N^target_{i s} > 0`.
    pub cols: Vec<usize>,
    pub mat: Matrix,
}

/// Max-residual accumulator with the first (lexicographically smallest in
/// iteration order) tuple attaining the maximum.
#[derive(Debug, Clone, Default)]
pub struct PolyReport {
    pub instances: u64,
    pub max_residual: f64,
    pub worst: Option<Vec<usize>>,
}

impl PolyReport {
    pub fn record(&mut self, residual: f64, site: Vec<usize>) {
        self.instances += 1;
        if self.worst.is_none() || residual > self.max_residual {
            self.max_residual = residual;
            self.worst = Some(site);
        }
    }

    /// Order-preserving merge: `self` precedes `other` in iteration order.
    pub fn merge(mut self, other: PolyReport) -> PolyReport {
        self.instances += other.instances;
        if let Some(site) = other.worst {
            if self.worst.is_none() || other.max_residual > self.max_residual {
                self.max_residual = other.max_residual;
                self.worst = Some(site);
            }
        }
        self
    }

    pub fn ok(&self, tol: &Tolerance) -> bool {
        self.max_residual <= tol.gate(1.0)
    }
}

#[derive(Debug, Clone, Default)]
pub struct HexagonReport {
    pub plus: PolyReport,
    pub minus: PolyReport,
}

impl HexagonReport {
    fn merge(self, other: HexagonReport) -> HexagonReport {
        HexagonReport { plus: self.plus.merge(other.plus), minus: self.minus.merge(other.minus) }
    }

    pub fn max_residual(&self) -> f64 {
        self.plus.max_residual.max(self.minus.max_residual)
    }

    pub fn ok(&self, tol: &Tolerance) -> bool {
        self.plus.ok(tol) && self.minus.ok(tol)
    }
}

#[derive(Debug, Clone, Default)]
pub struct BraidReport {
    pub assembly: PolyReport,
    pub inverse: PolyReport,
    pub conjugation: PolyReport,
    pub star_symmetry: PolyReport,
    pub unitarity: PolyReport,
    pub f_compat: PolyReport,
    pub r_modulus: PolyReport,
}

impl BraidReport {
    pub fn max_residual(&self) -> f64 {
        [
            &self.inverse,
            &self.conjugation,
            &self.star_symmetry,
            &self.unitarity,
            &self.f_compat,
            &self.r_modulus,
        ]
        .into_iter()
        .map(|c| c.max_residual)
        .fold(if self.assembly.instances > 0 { f64::INFINITY } else { 0.0 }, f64::max)
    }

    pub fn ok(&self, tol: &Tolerance) -> bool {
        self.max_residual() <= tol.gate(1.0)
    }
}

/// Ising-type skeletal data in the standard unitary gauge; the crate's
/// hand-checkable fixture.
pub fn ising_skeletal() -> SkeletalData {
    let ring = ising_ring();
    let n = ring.len();
    let s = 1.0 / std::f64::consts::SQRT_2;
    let mut f = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let rows = expected_rows(&ring, a, b, c, d);
                    let cols = expected_cols(&ring, a, b, c, d);
                    if rows.is_empty() {
                        continue;
                    }
                    let mat = match (a, b, c, d) {
                        (1, 1, 1, 1) => Matrix::from_rows(&[
                            vec![re(s), re(s)],
                            vec![re(s), re(-s)],
                        ]),
                        (2, 1, 2, 1) | (1, 2, 1, 2) => Matrix::scalar(re(-1.0)),
                        _ => Matrix::from_fn(rows.len(), cols.len(), |_, _| ONE),
                    };
                    f.insert((a, b, c, d), FBlock { rows, cols, mat });
                }
            }
        }
    }
    let mut r = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if !ring.admissible(i, j, k) {
                    continue;
                }
                let pi = std::f64::consts::PI;
                let v = match (i, j, k) {
                    (1, 1, 0) => crate::algebra::phase(-pi / 8.0),
                    (1, 1, 2) => crate::algebra::phase(3.0 * pi / 8.0),
                    (2, 2, 0) => re(-1.0),
                    (1, 2, 1) | (2, 1, 1) => Scalar::new(0.0, -1.0),
                    _ => ONE,
                };
                r.insert((i, j, k), v);
            }
        }
    }
    SkeletalData::with_unit_ev(ring, f, r).expect("fixture data is structurally valid")
}

/// One-object skeletal data (the trivial category).
pub fn trivial_skeletal() -> SkeletalData {
    let ring = FusionRing::from_fn(vec!["0".into()], vec![0], |_, _, _| 1).unwrap();
    let mut f = BTreeMap::new();
    f.insert((0, 0, 0, 0), FBlock { rows: vec![0], cols: vec![0], mat: Matrix::scalar(ONE) });
    let mut r = BTreeMap::new();
    r.insert((0, 0, 0), ONE);
    SkeletalData::with_unit_ev(ring, f, r).unwrap()
}

fn ising_ring() -> FusionRing {
    FusionRing::from_fn(
        vec!["1".into(), "sigma".into(), "psi".into()],
        vec![0, 1, 2],
        |i, j, k| {
            let table: [[&[usize]; 3]; 3] =
                [[&[0], &[1], &[2]], [&[1], &[0, 2], &[1]], [&[2], &[1], &[0]]];
            u32::from(table[i][j].contains(&k))
        },
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::phase;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn trivial_passes_everything() {
        let data = trivial_skeletal();
        assert_eq!(data.verify_pentagon(SumMode::Plain).max_residual, 0.0);
        assert_eq!(data.verify_hexagon(SumMode::Plain).max_residual(), 0.0);
        let braid = data.verify_braid_relations(&tol(), SumMode::Plain);
        assert_eq!(braid.max_residual(), 0.0, "{braid:?}");
    }

    #[test]
    fn ising_pentagon_holds() {
        let data = ising_skeletal();
        let report = data.verify_pentagon(SumMode::Plain);
        assert!(report.instances > 50, "instances = {}", report.instances);
        assert!(report.max_residual < 1e-12, "{report:?}");
    }

    #[test]
    fn ising_hexagons_hold() {
        let data = ising_skeletal();
        let report = data.verify_hexagon(SumMode::Plain);
        assert!(report.max_residual() < 1e-12, "{report:?}");
    }

    #[test]
    fn ising_f_blocks_unitary() {
        let data = ising_skeletal();
        let report = data.verify_f_unitarity(&tol());
        assert!(report.max_residual < 1e-12, "{report:?}");
    }

    #[test]
    fn ising_braid_relations_hold() {
        let data = ising_skeletal();
        let report = data.verify_braid_relations(&tol(), SumMode::Plain);
        assert!(report.max_residual() < 1e-12, "{report:?}");
    }

    #[test]
    fn ising_dims_and_phases() {
        let data = ising_skeletal();
        assert!((data.quantum_dim(0).unwrap() - 1.0).abs() < 1e-12);
        assert!((data.quantum_dim(1).unwrap() - std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!((data.quantum_dim(2).unwrap() - 1.0).abs() < 1e-12);
        for i in 0..3 {
            assert!((data.pivotal_phase(i).unwrap() - ONE).norm() < 1e-12);
        }
    }

    #[test]
    fn dagger_coefficients_match_hand_values() {
        let data = ising_skeletal();
        // Vacuum charge acts trivially.
        assert!((data.dagger_coefficient(0, 2, 2).unwrap() - ONE).norm() < 1e-12);
        // (σ, σ; 1): coefficient modulus d_σ^{-1/2}.
        let c = data.dagger_coefficient(1, 1, 0).unwrap();
        assert!((c.norm() - 2f64.powf(-0.25)).abs() < 1e-12, "c = {c}");
        // Double dagger is a unit-modulus phase on every admissible triple.
        for &(i, j, k) in &data.admissible_triples() {
            let c1 = data.dagger_coefficient(i, j, k).unwrap();
            let ring = data.ring();
            let c2 = data.dagger_coefficient(ring.dual(i), k, j).unwrap();
            assert!(((c1 * c2).norm() - 1.0).abs() < 1e-12, "triple ({i},{j},{k})");
        }
        assert!(data.dagger_map(1, 0, 2).unwrap().is_empty());
    }

    #[test]
    fn sigma_braid_block_is_unitary_and_matches_r() {
        let data = ising_skeletal();
        // Single-vertex block: source vacuum, so B+ reduces to one R-symbol.
        let b = data.braid_matrix(BraidSign::Plus, 1, 1, 0, 2).unwrap();
        assert_eq!((b.rows.as_slice(), b.cols.as_slice()), (&[1usize][..], &[1usize][..]));
        assert!((b.mat[(0, 0)] - phase(3.0 * std::f64::consts::PI / 8.0)).norm() < 1e-12);
        // Two-dimensional block: source σ, target σ.
        let b = data.braid_matrix(BraidSign::Plus, 1, 1, 1, 1).unwrap();
        assert_eq!(b.rows, vec![0, 2]);
        let verdict = is_unitary(&b.mat, tol()).unwrap();
        assert!(verdict.unitary, "residual {}", verdict.residual);
    }

    #[test]
    fn negated_f_entry_breaks_pentagon_only() {
        let data = ising_skeletal();
        let mut f = data.f_blocks().clone();
        let block = f.get_mut(&(1, 1, 1, 1)).unwrap();
        block.mat[(0, 0)] = -block.mat[(0, 0)];
        let bad = SkeletalData::new(
            data.ring().clone(),
            f,
            data.r_symbols().clone(),
            data.ev_norms().to_vec(),
        )
        .unwrap();
        let report = bad.verify_pentagon(SumMode::Plain);
        assert!(report.max_residual > 0.5, "{report:?}");
        assert!(report.worst.is_some());
    }

    #[test]
    fn conjugated_r_breaks_hexagon_not_pentagon() {
        let data = ising_skeletal();
        let mut r = data.r_symbols().clone();
        let v = r.get_mut(&(1, 1, 2)).unwrap();
        *v = v.conj();
        let bad = SkeletalData::new(
            data.ring().clone(),
            data.f_blocks().clone(),
            r,
            data.ev_norms().to_vec(),
        )
        .unwrap();
        assert!(bad.verify_pentagon(SumMode::Plain).max_residual < 1e-12);
        let hex = bad.verify_hexagon(SumMode::Plain);
        assert!(hex.max_residual() > 0.1, "{hex:?}");
    }

    #[test]
    fn unit_modulus_gauge_preserves_residuals() {
        let data = ising_skeletal();
        // Unit-modulus gauge fixing the unit vertices `[0 a → a]` and
        // `[a 0 → a]` (the convention every catalog adopts); vertices with
        // vacuum output are still moved, so the evaluation data changes.
        let gauged = data
            .gauge_transform(&|a, b, c| {
                if a == VACUUM || b == VACUUM {
                    ONE
                } else {
                    phase(
                        0.37 * a as f64
                            + 1.21 * b as f64
                            + 2.03 * c as f64
                            + 0.5 * (a * b + c) as f64,
                    )
                }
            })
            .unwrap();
        assert!(gauged.verify_pentagon(SumMode::Plain).max_residual < 1e-12);
        assert!(gauged.verify_hexagon(SumMode::Plain).max_residual() < 1e-12);
        assert!(gauged.verify_f_unitarity(&tol()).max_residual < 1e-12);
        let braid = gauged.verify_braid_relations(&tol(), SumMode::Plain);
        assert!(braid.max_residual() < 1e-12, "{braid:?}");
    }

    #[test]
    fn non_unit_gauge_breaks_f_unitarity_not_pentagon() {
        let data = ising_skeletal();
        let gauged = data
            .gauge_transform(&|a, b, c| {
                if (a, b, c) == (1, 1, 2) {
                    re(2.0)
                } else {
                    ONE
                }
            })
            .unwrap();
        assert!(gauged.verify_pentagon(SumMode::Plain).max_residual < 1e-12);
        assert!(gauged.verify_f_unitarity(&tol()).max_residual > 0.5);
    }

    #[test]
    fn zero_gauge_rejected() {
        let data = ising_skeletal();
        let err = data.gauge_transform(&|a, b, c| {
            if (a, b, c) == (1, 1, 0) {
                ZERO
            } else {
                ONE
            }
        });
        assert!(matches!(err, Err(SkeletalError::GaugeZero { a: 1, b: 1, c: 0 })));
    }

    #[test]
    fn constructor_rejects_malformed_data() {
        let data = ising_skeletal();
        let mut f = data.f_blocks().clone();
        f.remove(&(1, 1, 1, 1));
        assert!(matches!(
            SkeletalData::with_unit_ev(data.ring().clone(), f, data.r_symbols().clone()),
            Err(SkeletalError::MissingFBlock((1, 1, 1, 1)))
        ));

        let mut r = data.r_symbols().clone();
        r.insert((2, 2, 2), ONE);
        assert!(matches!(
            SkeletalData::with_unit_ev(data.ring().clone(), data.f_blocks().clone(), r),
            Err(SkeletalError::UnexpectedRSymbol((2, 2, 2)))
        ));

        assert!(matches!(
            data.with_ev_norms(vec![1.0, -2.0, 1.0]),
            Err(SkeletalError::BadEvNorm { label: 1, .. })
        ));
    }
}
