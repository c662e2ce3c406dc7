//! Transport matrices Λ and the positivity-flavored identity checks.
//!
//! The transport matrix of a triple `(i, j, k)` expands the scaled vacuum
//! coupling `μ_i (ev_{ī,i} ⊗ id_j)` in the basis `Y_{k*} ∘ (id_ī ⊗ Y_k)`,
//! where `Y_k = W_k · [i j → k]` carries the vacuum weight `W_k` (√d_i on
//! the vacuum channel, 1 elsewhere) and `Y_{k*}` is its adjoint.  Three
//! independent routes compute it:
//!
//! * `f_move` — expand the left tree through `F^{ī i j}_j` directly;
//! * `gram` — invert the Gram matrix of the `Y_k` under the dagger pairing;
//! * a braided route (the analytic "version 3"), which pushes the expansion
//!   through a braid block and is folded into the route-agreement residual.
//!
//! All routes coincide with `μ_i / |W_k|²` on coherent unitary-gauge data;
//! positive-definiteness, Hermiticity, and route agreement are measured, not
//! assumed.  The same vertex normalizations drive the rigidity zig-zags,
//! twist compatibility, reflection positivity, and the diagonal full-field
//! Gram assembled here.

use thiserror::Error;

use crate::algebra::{re, AlgebraError, Matrix, Scalar, Tolerance, ONE, ZERO};
use crate::modular::{ModularData, ModularError};
use crate::ring::VACUUM;
use crate::skeletal::{BraidSign, PolyReport, SkeletalData, SkeletalError};

#[derive(Debug, Error)]
pub enum TransportError {
    #[error(transparent)]
    Skeletal(#[from] SkeletalError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Modular(#[from] ModularError),
    #[error("transport data error at {triple:?}: {detail}")]
    Data { triple: (usize, usize, usize), detail: String },
}

/// Which computation produced a [`TransportMatrix`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    FMove,
    Gram,
}

/// The transport matrix Λ of one triple, `N^k_{ij} × N^k_{ij}`.
#[derive(Debug, Clone)]
pub struct TransportMatrix {
    pub triple: (usize, usize, usize),
    pub lambda: Matrix,
    pub route: Route,
    pub mu: Scalar,
}

/// Per-triple positivity verdict.
#[derive(Debug, Clone)]
pub struct PositivityCertificate {
    pub triple: (usize, usize, usize),
    /// `None` when the coupling space is empty (vacuously positive).
    pub min_eigenvalue: Option<f64>,
    pub hermitian_residual: f64,
    pub route_agreement_residual: f64,
    pub verdict: bool,
}

/// Vacuum weight `W(i, j, k)`: the canonical vacuum coupling `Y⁰` has
/// norm² = d_i, every other basis coupling is unit-normalized.
fn vacuum_weight(data: &SkeletalData, i: usize, k: usize) -> Result<f64, TransportError> {
    Ok(if k == VACUUM { data.quantum_dim(i)?.sqrt() } else { 1.0 })
}

/// `μ_i t_i √d_i`, the coefficient of the scaled evaluation on the left side
/// of the transport formula.
fn ev_coefficient(data: &SkeletalData, i: usize, mu: Scalar) -> Result<Scalar, TransportError> {
    let t = data.pivotal_phase(i)?;
    let d = data.quantum_dim(i)?;
    Ok(mu * t * re(d.sqrt()))
}

/// f_move route: Λ_k = μ_i t_i √d_i F^{ī i j}_j[k, 0] / (|W_k|² c_k).
fn lambda_f_move(
    data: &SkeletalData,
    i: usize,
    j: usize,
    k: usize,
    mu: Scalar,
) -> Result<Scalar, TransportError> {
    let ibar = data.ring().dual(i);
    let f = data.f_entry(ibar, i, j, j, k, VACUUM)?;
    let c = data.dagger_coefficient(i, j, k)?;
    let w = vacuum_weight(data, i, k)?;
    if c.norm() == 0.0 {
        return Err(TransportError::Data {
            triple: (i, j, k),
            detail: "vanishing dagger coefficient".into(),
        });
    }
    Ok(ev_coefficient(data, i, mu)? * f / (re(w * w) * c))
}

/// Gram matrix entry of the weighted coupling `Y_k` under the dagger
/// pairing: `G_k = |W_k|² √d_i conj(F^{i ī k}_k[j, 0]) c_k`.
fn gram_entry(
    data: &SkeletalData,
    i: usize,
    j: usize,
    k: usize,
) -> Result<Scalar, TransportError> {
    let ibar = data.ring().dual(i);
    let f = data.f_entry(i, ibar, k, k, j, VACUUM)?;
    let c = data.dagger_coefficient(i, j, k)?;
    let d = data.quantum_dim(i)?;
    let w = vacuum_weight(data, i, k)?;
    Ok(re(w * w * d.sqrt()) * f.conj() * c)
}

/// gram route: Λ = μ_i G⁻¹.
fn lambda_gram(
    data: &SkeletalData,
    i: usize,
    j: usize,
    k: usize,
    mu: Scalar,
) -> Result<Scalar, TransportError> {
    let g = gram_entry(data, i, j, k)?;
    if g.norm() == 0.0 {
        return Err(TransportError::Data {
            triple: (i, j, k),
            detail: "singular Gram matrix".into(),
        });
    }
    Ok(mu / g)
}

/// Braided route (transport formula version 3): solve
/// `Σ_k R^{ji}_k Λ_k |W_k|² c_k (B₊)_{ī j}^{(i → j)}[n, k] = μ_i t_i √d_i δ_{n,0}`
/// for all channels of `(i, j)` jointly.  Reordering the coupling chain
/// `[i j → k]` into the block's column basis `[j i → s]` costs `R^{ji}_k`;
/// the composite braid then slides `j` past the vacuum-fused `ī ⊗ i` pair by
/// naturality, so the right-hand side is the bare vacuum coupling and the
/// solve inverts the braided change of basis.
fn lambda_v3_family(
    data: &SkeletalData,
    i: usize,
    j: usize,
    mu: Scalar,
) -> Result<Vec<(usize, Scalar)>, TransportError> {
    let ring = data.ring();
    let ibar = ring.dual(i);
    let block = data.braid_matrix(BraidSign::Plus, ibar, j, i, j)?;
    if block.mat.is_empty() {
        return Ok(Vec::new());
    }
    let Some(vac_row) = block.rows.iter().position(|&n| n == VACUUM) else {
        return Err(TransportError::Data {
            triple: (i, j, VACUUM),
            detail: "braid block lacks the vacuum out-chain".into(),
        });
    };
    let mut rhs = vec![ZERO; block.rows.len()];
    rhs[vac_row] = ev_coefficient(data, i, mu)?;
    let x = block.mat.solve(&rhs)?;
    let mut out = Vec::with_capacity(block.cols.len());
    for (idx, &k) in block.cols.iter().enumerate() {
        let c = data.dagger_coefficient(i, j, k)?;
        let r = data.r_symbol(j, i, k)?;
        let w = vacuum_weight(data, i, k)?;
        if c.norm() == 0.0 {
            return Err(TransportError::Data {
                triple: (i, j, k),
                detail: "vanishing dagger coefficient".into(),
            });
        }
        out.push((k, x[idx] / (re(w * w) * c * r)));
    }
    Ok(out)
}

fn data_mu(data: &SkeletalData, i: usize) -> Scalar {
    re(data.ev_norm(i))
}

/// Transport matrix via the F-move route.
pub fn transport_matrix(
    data: &SkeletalData,
    i: usize,
    j: usize,
    k: usize,
) -> Result<TransportMatrix, TransportError> {
    let mu = data_mu(data, i);
    let lambda = if data.ring().admissible(i, j, k) {
        Matrix::scalar(lambda_f_move(data, i, j, k, mu)?)
    } else {
        Matrix::zeros(0, 0)
    };
    Ok(TransportMatrix { triple: (i, j, k), lambda, route: Route::FMove, mu })
}

/// Transport matrix via the Gram-inverse route.
pub fn transport_matrix_gram(
    data: &SkeletalData,
    i: usize,
    j: usize,
    k: usize,
) -> Result<TransportMatrix, TransportError> {
    let mu = data_mu(data, i);
    let lambda = if data.ring().admissible(i, j, k) {
        Matrix::scalar(lambda_gram(data, i, j, k, mu)?)
    } else {
        Matrix::zeros(0, 0)
    };
    Ok(TransportMatrix { triple: (i, j, k), lambda, route: Route::Gram, mu })
}

/// One certificate per channel `k` of `i ⊗ j`, inadmissible channels
/// included as vacuous passes.  `mu` overrides the catalog's `μ_i`; the
/// public wrapper fixes it to `ev_norms[i]`.
fn verify_positivity_scaled(
    data: &SkeletalData,
    i: usize,
    j: usize,
    tol: &Tolerance,
    mu: Scalar,
) -> Vec<PositivityCertificate> {
    let n = data.ring().len();
    let gate = tol.gate(1.0);
    let v3: Vec<(usize, Scalar)> = match lambda_v3_family(data, i, j, mu) {
        Ok(v) => v,
        Err(_) => Vec::new(),
    };
    (0..n)
        .map(|k| {
            if !data.ring().admissible(i, j, k) {
                return PositivityCertificate {
                    triple: (i, j, k),
                    min_eigenvalue: None,
                    hermitian_residual: 0.0,
                    route_agreement_residual: 0.0,
                    verdict: true,
                };
            }
            let routes = (|| -> Result<_, TransportError> {
                let f = lambda_f_move(data, i, j, k, mu)?;
                let g = lambda_gram(data, i, j, k, mu)?;
                let b = v3
                    .iter()
                    .find(|&&(ch, _)| ch == k)
                    .map(|&(_, v)| v)
                    .ok_or_else(|| TransportError::Data {
                        triple: (i, j, k),
                        detail: "braided route missing the channel".into(),
                    })?;
                Ok((f, g, b))
            })();
            match routes {
                Ok((f, g, b)) => {
                    let hermitian_residual = g.im.abs().max(f.im.abs());
                    let route_agreement_residual = (g - f).norm().max((b - f).norm());
                    let min_eigenvalue = g.re;
                    PositivityCertificate {
                        triple: (i, j, k),
                        min_eigenvalue: Some(min_eigenvalue),
                        hermitian_residual,
                        route_agreement_residual,
                        verdict: min_eigenvalue > gate
                            && hermitian_residual <= gate
                            && route_agreement_residual <= gate,
                    }
                }
                Err(_) => PositivityCertificate {
                    triple: (i, j, k),
                    min_eigenvalue: None,
                    hermitian_residual: f64::INFINITY,
                    route_agreement_residual: f64::INFINITY,
                    verdict: false,
                },
            }
        })
        .collect()
}

pub fn verify_positivity(
    data: &SkeletalData,
    i: usize,
    j: usize,
    tol: &Tolerance,
) -> Vec<PositivityCertificate> {
    verify_positivity_scaled(data, i, j, tol, data_mu(data, i))
}

/// Rigidity data for a single label.
#[derive(Debug, Clone)]
pub struct RigidityReport {
    pub label: usize,
    /// `|d_i t_i (F^{i ī i}_i)⁻¹[0,0] − 1|`: the zig-zag
    /// `(id_i ⊗ ev_{ī,i}) ∘ (coev_{i,ī} ⊗ id_i) = id_i`.
    pub zigzag_residual_147: f64,
    /// `|d_i conj(t_i) (F^{ī i ī}_ī)⁻¹[0,0] − 1|`: the mirrored zig-zag.
    pub zigzag_residual_148: f64,
    /// `d_i` read off `ev ∘ coev`.
    pub d_i_value: f64,
    /// `|d_ī − d_i|`.
    pub dual_dim_residual: f64,
    /// `|μ_i / Λ(i, ī, 0) − d_i|`: the Λ-derived norm of the vacuum coupling.
    pub transport_dim_residual: f64,
    /// Worst deviation of `|c_α c_{α*}|` from 1 over couplings of `i`
    /// (applying the dagger twice preserves norms).
    pub double_dagger_residual: f64,
}

impl RigidityReport {
    pub fn max_residual(&self) -> f64 {
        self.zigzag_residual_147
            .max(self.zigzag_residual_148)
            .max(self.dual_dim_residual)
            .max(self.transport_dim_residual)
            .max(self.double_dagger_residual)
    }

    pub fn ok(&self, tol: &Tolerance) -> bool {
        self.max_residual() <= tol.gate(self.d_i_value) && self.d_i_value >= 1.0 - tol.gate(1.0)
    }
}

/// Evaluate both zig-zags of label `i`, extract `d_i`, and cross-check it
/// against the dual label and the vacuum-channel transport.
pub fn verify_rigidity(
    data: &SkeletalData,
    i: usize,
    _tol: &Tolerance,
) -> Result<RigidityReport, TransportError> {
    let ring = data.ring();
    ring.check_label(i).map_err(SkeletalError::from)?;
    let ibar = ring.dual(i);
    let d = data.quantum_dim(i)?;
    let t = data.pivotal_phase(i)?;

    let zig = |a: usize, b: usize, phase: Scalar| -> Result<f64, TransportError> {
        let block = data.f_block(a, b, a, a)?;
        let inv = block.mat.inverse()?;
        let p = block
            .rows
            .iter()
            .position(|&n| n == VACUUM)
            .zip(block.cols.iter().position(|&m| m == VACUUM));
        let Some((row, col)) = p else {
            return Err(TransportError::Data {
                triple: (a, b, a),
                detail: "self-duality block lacks the vacuum channel".into(),
            });
        };
        // Inverse entries are indexed (col, row) relative to the block.
        Ok((re(d) * phase * inv[(col, row)] - ONE).norm())
    };
    let zigzag_residual_147 = zig(i, ibar, t)?;
    let zigzag_residual_148 = zig(ibar, i, t.conj())?;

    let dual_dim_residual = (data.quantum_dim(ibar)? - d).abs();

    let mu = data_mu(data, i);
    let vac = lambda_gram(data, i, ibar, VACUUM, mu)?;
    let transport_dim_residual = (mu / vac - re(d)).norm();

    let mut double_dagger_residual = 0.0f64;
    for &(a, b, c) in data.admissible_triples().iter().filter(|&&(a, _, _)| a == i) {
        let fwd = data.dagger_coefficient(a, b, c)?;
        let back = data.dagger_coefficient(ring.dual(a), c, b)?;
        double_dagger_residual = double_dagger_residual.max(((fwd * back).norm() - 1.0).abs());
    }

    Ok(RigidityReport {
        label: i,
        zigzag_residual_147,
        zigzag_residual_148,
        d_i_value: d,
        dual_dim_residual,
        transport_dim_residual,
        double_dagger_residual,
    })
}

/// Twist compatibility of skeletal data with the twists of `md`.
#[derive(Debug, Clone, Default)]
pub struct TwistReport {
    /// `|t_i R^{i ī}_0 θ_i − 1|` per label: the twist–evaluation
    /// compatibility `ev_{i,ī} = ev_{ī,i} ∘ σ_{i,ī} ∘ (θ_i ⊗ id_ī)`.
    pub eq149: PolyReport,
    /// `|R^{ī i}_0 θ_ī − t_i|` per label (the mirrored compatibility).
    pub eq150: PolyReport,
    /// `|R^{ij}_k R^{ji}_k − θ_k/(θ_i θ_j)|` per admissible triple.
    pub ribbon: PolyReport,
}

impl TwistReport {
    pub fn max_residual(&self) -> f64 {
        self.eq149.max_residual.max(self.eq150.max_residual).max(self.ribbon.max_residual)
    }

    pub fn ok(&self, tol: &Tolerance) -> bool {
        self.eq149.ok(tol) && self.eq150.ok(tol) && self.ribbon.ok(tol)
    }
}

pub fn verify_twist_compat(
    data: &SkeletalData,
    md: &ModularData,
    _tol: &Tolerance,
) -> Result<TwistReport, TransportError> {
    let ring = data.ring();
    let n = ring.len();
    md.shape_check(n)?;
    let mut report = TwistReport::default();
    for i in 0..n {
        let ibar = ring.dual(i);
        let t = data.pivotal_phase(i)?;
        let r_fwd = data.r_symbol(i, ibar, VACUUM)?;
        let r_bwd = data.r_symbol(ibar, i, VACUUM)?;
        report.eq149.record((t * r_fwd * md.theta[i] - ONE).norm(), vec![i]);
        report.eq150.record((r_bwd * md.theta[ibar] - t).norm(), vec![i]);
    }
    for &(i, j, k) in &data.admissible_triples() {
        let lhs = data.r_symbol(i, j, k)? * data.r_symbol(j, i, k)?;
        let rhs = md.theta[k] / (md.theta[i] * md.theta[j]);
        report.ribbon.record((lhs - rhs).norm(), vec![i, j, k]);
    }
    Ok(report)
}

/// Reflection positivity: the contragredient-rotated coupling `Cα = α*`
/// satisfies `Gram(Cα, Cβ) = (d_k/d_j) Gram(α, β)` on every admissible
/// triple.
#[derive(Debug, Clone, Default)]
pub struct ReflectionReport {
    pub gram_relation: PolyReport,
}

impl ReflectionReport {
    pub fn ok(&self, tol: &Tolerance) -> bool {
        self.gram_relation.ok(tol)
    }
}

pub fn reflection_positivity_check(
    data: &SkeletalData,
    _tol: &Tolerance,
) -> Result<ReflectionReport, TransportError> {
    let ring = data.ring();
    let mut report = ReflectionReport::default();
    for &(i, j, k) in &data.admissible_triples() {
        let ibar = ring.dual(i);
        // Cα = conj(W_{ijk}) c_k · [ī k → j]  =  u · Y_{(ī,k,j)}.
        let u = re(vacuum_weight(data, i, k)?) * data.dagger_coefficient(i, j, k)?
            / re(vacuum_weight(data, ibar, j)?);
        let starred = re(u.norm_sqr()) * gram_entry(data, ibar, k, j)?;
        let ratio = re(data.quantum_dim(k)? / data.quantum_dim(j)?);
        let original = gram_entry(data, i, j, k)?;
        report.gram_relation.record((starred - ratio * original).norm(), vec![i, j, k]);
    }
    Ok(report)
}

/// Gram of the diagonal full-field pairing: one block per admissible
/// `(i, j, k)`, scaled by `d_i^{-1}`, with a global PD verdict.
#[derive(Debug, Clone)]
pub struct FullFieldGram {
    pub triples: Vec<(usize, usize, usize)>,
    pub min_eigenvalue: Option<f64>,
    pub hermitian_residual: f64,
    pub pd: bool,
}

/// Assemble the diagonal pairing on `⊕_i W_i ⊗ W_ī`: the `(i, j, k)` block
/// couples `Y_{ijk}` with the conjugate-sector `Y_{ī j̄ k̄}` and carries a
/// `d_i⁻¹` weight.
pub fn full_field_gram(
    data: &SkeletalData,
    tol: &Tolerance,
) -> Result<FullFieldGram, TransportError> {
    let ring = data.ring();
    let mut triples = Vec::new();
    let mut min_eigenvalue: Option<f64> = None;
    let mut hermitian_residual = 0.0f64;
    for &(i, j, k) in &data.admissible_triples() {
        let here = gram_entry(data, i, j, k)?;
        let conj_sector = gram_entry(data, ring.dual(i), ring.dual(j), ring.dual(k))?;
        let block = here * conj_sector.conj() / re(data.quantum_dim(i)?);
        triples.push((i, j, k));
        hermitian_residual = hermitian_residual.max(block.im.abs());
        min_eigenvalue = Some(min_eigenvalue.map_or(block.re, |m: f64| m.min(block.re)));
    }
    let gate = tol.gate(1.0);
    let pd = min_eigenvalue.is_some_and(|m| m > gate) && hermitian_residual <= gate;
    Ok(FullFieldGram { triples, min_eigenvalue, hermitian_residual, pd })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::phase;
    use crate::families::su2_data;
    use crate::modular::ising_modular;
    use crate::skeletal::ising_skeletal;
    use std::f64::consts::PI;

    fn tol() -> Tolerance {
        Tolerance::uniform(1e-9)
    }

    #[test]
    fn vacuum_charge_transport_is_identity() {
        let data = ising_skeletal();
        for j in 0..3 {
            let tm = transport_matrix(&data, 0, j, j).unwrap();
            assert_eq!(tm.lambda.nrows(), 1);
            assert!((tm.lambda[(0, 0)] - ONE).norm() < 1e-12, "{:?}", tm.lambda);
        }
    }

    #[test]
    fn ising_routes_agree_and_are_positive() {
        let data = ising_skeletal();
        for i in 0..3 {
            for j in 0..3 {
                for cert in verify_positivity(&data, i, j, &tol()) {
                    assert!(cert.verdict, "{cert:?}");
                    assert!(cert.route_agreement_residual < 1e-12, "{cert:?}");
                }
            }
        }
        // The vacuum-channel transport reproduces 1/d_σ.
        let tm = transport_matrix(&data, 1, 1, 0).unwrap();
        assert!((tm.lambda[(0, 0)].re - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        assert!(tm.lambda[(0, 0)].im.abs() < 1e-15);
    }

    #[test]
    fn inadmissible_triple_is_empty_and_passes() {
        let data = ising_skeletal();
        let tm = transport_matrix(&data, 1, 1, 1).unwrap();
        assert!(tm.lambda.is_empty());
        let certs = verify_positivity(&data, 1, 1, &tol());
        assert!(certs[1].verdict && certs[1].min_eigenvalue.is_none());
    }

    #[test]
    fn su2_small_levels_positive() {
        for k in 1..=3 {
            let fam = su2_data(k).unwrap();
            let n = fam.skeletal.ring().len();
            for i in 0..n {
                for j in 0..n {
                    for cert in verify_positivity(&fam.skeletal, i, j, &tol()) {
                        assert!(cert.verdict, "level {k}: {cert:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn mu_scaling_covariance() {
        let data = ising_skeletal();
        let scaled = data.with_ev_norms(vec![1.0, 2.5, 1.0]).unwrap();
        let base = transport_matrix(&data, 1, 1, 0).unwrap();
        let big = transport_matrix(&scaled, 1, 1, 0).unwrap();
        assert!((big.lambda[(0, 0)] - base.lambda[(0, 0)] * re(2.5)).norm() < 1e-12);
        for cert in verify_positivity(&scaled, 1, 1, &tol()) {
            assert!(cert.verdict, "{cert:?}");
        }
    }

    #[test]
    fn complex_mu_breaks_hermiticity() {
        let data = ising_skeletal();
        let certs = verify_positivity_scaled(&data, 1, 1, &tol(), phase(0.3));
        let vac = &certs[0];
        assert!(!vac.verdict, "{vac:?}");
        assert!(vac.hermitian_residual > 0.1);
    }

    #[test]
    fn conjugated_r_breaks_route_agreement() {
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
        let flagged = (0..3).any(|j| {
            verify_positivity(&bad, 1, j, &tol())
                .iter()
                .any(|c| !c.verdict || c.route_agreement_residual > 1e-9)
        });
        assert!(flagged);
    }

    #[test]
    fn rigidity_values() {
        let data = ising_skeletal();
        let sigma = verify_rigidity(&data, 1, &tol()).unwrap();
        assert!((sigma.d_i_value - 2f64.sqrt()).abs() < 1e-12, "{sigma:?}");
        assert!(sigma.max_residual() < 1e-12, "{sigma:?}");
        let vacuum = verify_rigidity(&data, 0, &tol()).unwrap();
        assert!((vacuum.d_i_value - 1.0).abs() < 1e-15);
        assert!(vacuum.max_residual() < 1e-12);

        let fib = su2_data(3).unwrap();
        let rep = verify_rigidity(&fib.skeletal, 1, &tol()).unwrap();
        assert!((rep.d_i_value - 2.0 * (PI / 5.0).cos()).abs() < 1e-12);
        assert!(rep.max_residual() < 1e-12, "{rep:?}");
    }

    #[test]
    fn twist_compat_ising_and_su2() {
        let data = ising_skeletal();
        let md = ising_modular();
        let report = verify_twist_compat(&data, &md, &tol()).unwrap();
        assert!(report.ok(&tol()), "{report:?}");

        let fam = su2_data(2).unwrap();
        let report = verify_twist_compat(&fam.skeletal, &fam.modular, &tol()).unwrap();
        assert!(report.ok(&tol()), "{report:?}");
    }

    #[test]
    fn unit_twists_fail_compat() {
        let data = ising_skeletal();
        let mut md = ising_modular();
        md.theta[1] = ONE;
        let report = verify_twist_compat(&data, &md, &tol()).unwrap();
        assert!(!report.ok(&tol()));
        assert!(report.eq149.max_residual > 0.1, "{report:?}");
    }

    #[test]
    fn reflection_positivity_holds() {
        let data = ising_skeletal();
        let report = reflection_positivity_check(&data, &tol()).unwrap();
        assert!(report.ok(&tol()), "{report:?}");

        let fam = su2_data(3).unwrap();
        let report = reflection_positivity_check(&fam.skeletal, &tol()).unwrap();
        assert!(report.ok(&tol()), "{report:?}");
    }

    #[test]
    fn full_field_gram_pd() {
        let data = ising_skeletal();
        let gram = full_field_gram(&data, &tol()).unwrap();
        assert!(gram.pd, "{gram:?}");
        assert!(gram.min_eigenvalue.unwrap() > 0.1);

        let fam = su2_data(4).unwrap();
        let gram = full_field_gram(&fam.skeletal, &tol()).unwrap();
        assert!(gram.pd, "{gram:?}");
    }

    #[test]
    fn gauge_covariance_of_certificates() {
        let data = ising_skeletal();
        let gauged = data
            .gauge_transform(&|a, b, c| {
                if a == VACUUM || b == VACUUM {
                    ONE
                } else {
                    phase(0.91 * a as f64 - 0.44 * b as f64 + 1.57 * c as f64)
                }
            })
            .unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let base = verify_positivity(&data, i, j, &tol());
                let moved = verify_positivity(&gauged, i, j, &tol());
                for (b, m) in base.iter().zip(&moved) {
                    assert_eq!(b.verdict, m.verdict, "{b:?} vs {m:?}");
                    if let (Some(x), Some(y)) = (b.min_eigenvalue, m.min_eigenvalue) {
                        assert!((x - y).abs() < 1e-8, "{x} vs {y}");
                    }
                }
            }
        }
    }
}
