//! Modular data attached to a fusion ring: S and T matrices, twists,
//! quantum dimensions, and the Verlinde reconstruction of the ring.

use crate::algebra::{re, Matrix, Scalar, SumMode, Tolerance, UnitaryVerdict, ZERO};
use crate::ring::FusionRing;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModularError {
    #[error("modular data shape invalid: {0}")]
    Shape(String),
    #[error("S-matrix is not modular: {detail} (worst triple {worst:?}, residual {residual:.3e})")]
    NotModular {
        detail: String,
        worst: (usize, usize, usize),
        residual: f64,
    },
    #[error("quantum dimension of label {label} is not a real number >= 1: {value}")]
    BadDimension { label: usize, value: Scalar },
}

/// S, T, twists, quantum dimensions, and the central charge of a theory.
#[derive(Debug, Clone)]
pub struct ModularData {
    pub s: Matrix,
    /// Diagonal of the T matrix, `t_i = exp(2πi (h_i - c/24))`.
    pub t: Vec<Scalar>,
    /// Topological twists `θ_i = exp(2πi h_i)`.
    pub theta: Vec<Scalar>,
    pub dims: Vec<f64>,
    pub central_charge: f64,
}

impl ModularData {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn shape_check(&self, n: usize) -> Result<(), ModularError> {
        if self.s.nrows() != n || self.s.ncols() != n {
            return Err(ModularError::Shape(format!(
                "S is {}x{} for {} labels",
                self.s.nrows(),
                self.s.ncols(),
                n
            )));
        }
        for (what, len) in [("t", self.t.len()), ("theta", self.theta.len()), ("dims", self.dims.len())] {
            if len != n {
                return Err(ModularError::Shape(format!("{what} has {len} entries for {n} labels")));
            }
        }
        Ok(())
    }

    pub fn t_matrix(&self) -> Matrix {
        Matrix::from_fn(self.len(), self.len(), |i, j| if i == j { self.t[i] } else { ZERO })
    }
}

/// Quantum dimensions as S-matrix ratios `d_i = S_{0i} / S_{00}`.
pub fn quantum_dims(s: &Matrix, tol: &Tolerance) -> Result<Vec<f64>, ModularError> {
    let n = s.nrows();
    let s00 = s[(0, 0)];
    (0..n)
        .map(|i| {
            let d = s[(0, i)] / s00;
            if d.im.abs() > tol.gate(1.0) || d.re < 1.0 - tol.gate(1.0) {
                Err(ModularError::BadDimension { label: i, value: d })
            } else {
                Ok(d.re)
            }
        })
        .collect()
}

/// Fusion multiplicities reconstructed from S via the Verlinde formula.
#[derive(Debug, Clone)]
pub struct VerlindeFusion {
    pub n: usize,
    /// Flattened `(i*n + j)*n + k` multiplicity table.
    pub mult: Vec<u32>,
    /// Largest distance of any Verlinde sum from its nearest integer.
    pub max_residual: f64,
    pub worst: (usize, usize, usize),
}

impl VerlindeFusion {
    pub fn mult(&self, i: usize, j: usize, k: usize) -> u32 {
        self.mult[(i * self.n + j) * self.n + k]
    }
}

/// Evaluate `N^k_{ij} = Σ_m S_{im} S_{jm} S̄_{km} / S_{0m}` and round to
/// integers. Sums farther than `10 * tol.abs_eps` from an integer (or a
/// vanishing `S_{0m}`) make the matrix fail as modular input.
pub fn verlinde_fusion(s: &Matrix, tol: &Tolerance, sum: SumMode) -> Result<VerlindeFusion, ModularError> {
    let n = s.nrows();
    let threshold = tol.abs_eps * 10.0;
    for m in 0..n {
        if s[(0, m)].norm() <= threshold {
            return Err(ModularError::NotModular {
                detail: format!("vanishing S_0{m} in Verlinde denominator"),
                worst: (0, 0, m),
                residual: s[(0, m)].norm(),
            });
        }
    }
    let mut mult = vec![0u32; n * n * n];
    let mut max_residual = 0.0f64;
    let mut worst = (0, 0, 0);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let value = crate::algebra::sum_scalars(
                    sum,
                    (0..n).map(|m| s[(i, m)] * s[(j, m)] * s[(k, m)].conj() / s[(0, m)]),
                );
                let rounded = value.re.round();
                let residual = (value.re - rounded).abs().max(value.im.abs());
                if residual > max_residual {
                    max_residual = residual;
                    worst = (i, j, k);
                }
                if residual > threshold || rounded < -0.5 {
                    return Err(ModularError::NotModular {
                        detail: format!(
                            "Verlinde sum {value} at ({i},{j},{k}) is not a non-negative integer"
                        ),
                        worst: (i, j, k),
                        residual,
                    });
                }
                mult[(i * n + j) * n + k] = rounded as u32;
            }
        }
    }
    Ok(VerlindeFusion { n, mult, max_residual, worst })
}

#[derive(Debug, Clone)]
pub struct ModularReport {
    pub s_symmetry_residual: f64,
    pub s_unitary: UnitaryVerdict,
    /// `max |S² − C|` with `C` the charge-conjugation permutation.
    pub charge_residual: f64,
    /// `max |(ST)³ − λ S²|`; λ is reported, not pinned.
    pub st_cubed_residual: f64,
    pub lambda: Scalar,
    pub verlinde_ok: bool,
    pub verlinde_max_residual: f64,
    pub verlinde_detail: Option<String>,
    pub worst_verlinde: Option<(usize, usize, usize)>,
    /// `max_{i,j} |d_i d_j − Σ_k N^k_{ij} d_k|`.
    pub dims_hom_residual: f64,
    /// `max_i |stored dims − S-ratio dims|`.
    pub dims_match_residual: f64,
    /// `max_i | |θ_i| − 1 |`.
    pub theta_modulus_residual: f64,
    pub tol: Tolerance,
}

impl ModularReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.s_symmetry_residual,
            self.s_unitary.residual,
            self.charge_residual,
            self.st_cubed_residual,
            self.dims_hom_residual,
            self.dims_match_residual,
            self.theta_modulus_residual,
        ]
        .into_iter()
        .fold(self.verlinde_max_residual, f64::max)
    }

    pub fn ok(&self) -> bool {
        let gate = self.tol.gate(1.0);
        self.s_symmetry_residual <= gate
            && self.s_unitary.unitary
            && self.charge_residual <= gate
            && self.st_cubed_residual <= gate
            && self.verlinde_ok
            && self.dims_hom_residual <= self.tol.gate(10.0)
            && self.dims_match_residual <= gate
            && self.theta_modulus_residual <= gate
    }
}

/// Run every modular consistency check against the ring.
///
/// `θ` is only held to unit modulus here; its compatibility with braiding
/// and duality data belongs to the twist suite.
pub fn verify_modular(
    ring: &FusionRing,
    data: &ModularData,
    tol: &Tolerance,
    sum: SumMode,
) -> Result<ModularReport, ModularError> {
    let n = ring.len();
    data.shape_check(n)?;
    let s = &data.s;

    let mut s_symmetry_residual = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            s_symmetry_residual = s_symmetry_residual.max((s[(i, j)] - s[(j, i)]).norm());
        }
    }
    let s_unitary = crate::algebra::is_unitary(s, *tol).map_err(|e| ModularError::Shape(e.to_string()))?;

    let charge = Matrix::from_fn(n, n, |i, j| re(f64::from(u8::from(j == ring.dual(i)))));
    let s2 = s.mul(s, sum).map_err(|e| ModularError::Shape(e.to_string()))?;
    let charge_residual = s2.max_diff(&charge).map_err(|e| ModularError::Shape(e.to_string()))?;

    let st = s.mul(&data.t_matrix(), sum).map_err(|e| ModularError::Shape(e.to_string()))?;
    let st2 = st.mul(&st, sum).map_err(|e| ModularError::Shape(e.to_string()))?;
    let st3 = st2.mul(&st, sum).map_err(|e| ModularError::Shape(e.to_string()))?;
    // If S² = C then (ST)³ C = λ I, so λ falls out of the trace.
    let st3c = st3.mul(&charge, sum).map_err(|e| ModularError::Shape(e.to_string()))?;
    let lambda = (0..n).map(|i| st3c[(i, i)]).sum::<Scalar>() / re(n as f64);
    let st_cubed_residual = st3.max_diff(&s2.scale(lambda)).map_err(|e| ModularError::Shape(e.to_string()))?;

    let (verlinde_ok, verlinde_max_residual, verlinde_detail, worst_verlinde) =
        match verlinde_fusion(s, tol, sum) {
            Ok(v) => {
                let mismatch = (0..n)
                    .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
                    .find(|&(i, j, k)| v.mult(i, j, k) != ring.mult(i, j, k));
                match mismatch {
                    None => (true, v.max_residual, None, Some(v.worst)),
                    Some((i, j, k)) => (
                        false,
                        v.max_residual,
                        Some(format!(
                            "Verlinde multiplicity {} != ring multiplicity {} at ({i},{j},{k})",
                            v.mult(i, j, k),
                            ring.mult(i, j, k)
                        )),
                        Some((i, j, k)),
                    ),
                }
            }
            Err(e) => {
                let (worst, residual) = match &e {
                    ModularError::NotModular { worst, residual, .. } => (*worst, *residual),
                    _ => ((0, 0, 0), f64::INFINITY),
                };
                (false, residual, Some(e.to_string()), Some(worst))
            }
        };

    let ratio_dims = quantum_dims(s, tol)?;
    let mut dims_match_residual = 0.0f64;
    for i in 0..n {
        dims_match_residual = dims_match_residual.max((ratio_dims[i] - data.dims[i]).abs());
    }
    let mut dims_hom_residual = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let rhs: f64 = (0..n).map(|k| f64::from(ring.mult(i, j, k)) * ratio_dims[k]).sum();
            dims_hom_residual = dims_hom_residual.max((ratio_dims[i] * ratio_dims[j] - rhs).abs());
        }
    }

    let mut theta_modulus_residual = 0.0f64;
    for th in &data.theta {
        theta_modulus_residual = theta_modulus_residual.max((th.norm() - 1.0).abs());
    }

    Ok(ModularReport {
        s_symmetry_residual,
        s_unitary,
        charge_residual,
        st_cubed_residual,
        lambda,
        verlinde_ok,
        verlinde_max_residual,
        verlinde_detail,
        worst_verlinde,
        dims_hom_residual,
        dims_match_residual,
        theta_modulus_residual,
        tol: *tol,
    })
}

/// Modular data of the Ising-type theory, matching the skeletal fixture.
pub fn ising_modular() -> ModularData {
    let r = std::f64::consts::SQRT_2;
    let s = Matrix::from_rows(&[
        vec![re(0.5), re(0.5 * r), re(0.5)],
        vec![re(0.5 * r), ZERO, re(-0.5 * r)],
        vec![re(0.5), re(-0.5 * r), re(0.5)],
    ]);
    let c = 0.5;
    let h = [0.0, 1.0 / 16.0, 0.5];
    ModularData {
        s,
        t: h.iter().map(|hi| crate::algebra::phase(2.0 * std::f64::consts::PI * (hi - c / 24.0))).collect(),
        theta: h.iter().map(|hi| crate::algebra::phase(2.0 * std::f64::consts::PI * hi)).collect(),
        dims: vec![1.0, r, 1.0],
        central_charge: c,
    }
}
