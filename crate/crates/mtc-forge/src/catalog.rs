//! Versioned catalog serialization and the bundled fixture builders.
//!
//! A catalog is one theory's worth of data — fusion ring, optionally modular
//! data, optionally skeletal F/R data — in a canonical JSON form: schema
//! version `"1"`, sorted keys, shortest round-trip decimals, complex numbers
//! as `[re, im]` pairs.  Canonical bytes are injective on valid catalogs, so
//! the SHA-256 of the bytes serves as a content hash for report attribution.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::algebra::{Matrix, Scalar, SumMode};
use crate::families::FamilyError;
use crate::modular::{ModularData, ModularError};
use crate::ring::{FusionRing, RingError};
use crate::skeletal::{FBlock, FKey, RKey, SkeletalData, SkeletalError};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("catalog is not valid UTF-8: {0}")]
    Utf8(#[from] std::str::Utf8Error),
    #[error("parse error at `{path}`: {detail}")]
    Parse { path: String, detail: String },
    #[error("unsupported schema version {found:?} (this build reads version \"1\")")]
    Version { found: String },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("non-finite value in {0}; catalogs must be finite")]
    NonFinite(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Modular(#[from] ModularError),
    #[error(transparent)]
    Skeletal(#[from] SkeletalError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("serialization failed: {0}")]
    Json(#[from] serde_json::Error),
}

/// Numeric mode requested by a catalog; `extended` swaps the compensated
/// accumulator into every verification sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    #[default]
    Double,
    Extended,
}

impl Precision {
    pub fn sum_mode(self) -> SumMode {
        match self {
            Precision::Double => SumMode::Plain,
            Precision::Extended => SumMode::Compensated,
        }
    }
}

/// Which generator produced a catalog, or `external` for hand-built data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Generator {
    Su2 { level: usize },
    Minimal { m: usize },
    Trivial,
    External,
}

#[derive(Debug, Clone)]
pub struct Catalog {
    pub name: String,
    pub generator: Generator,
    pub precision: Precision,
    pub ring: FusionRing,
    pub modular: Option<ModularData>,
    pub skeletal: Option<SkeletalData>,
}

impl Catalog {
    /// SHA-256 of the canonical bytes, hex-encoded.
    pub fn content_hash(&self) -> Result<String, CatalogError> {
        Ok(content_hash(&save_catalog(self)?))
    }
}

pub fn content_hash(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

// ---------------------------------------------------------------------------
// Wire format.

type CWire = [f64; 2];

fn c_to_wire(z: Scalar) -> CWire {
    [z.re, z.im]
}

fn c_from_wire(w: CWire) -> Scalar {
    Scalar::new(w[0], w[1])
}

fn mat_to_wire(m: &Matrix) -> Vec<Vec<CWire>> {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| c_to_wire(m[(r, c)])).collect()).collect()
}

fn mat_from_wire(rows: &[Vec<CWire>], what: &str) -> Result<Matrix, CatalogError> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(CatalogError::Validation(format!("{what}: ragged matrix rows")));
    }
    Ok(Matrix::from_fn(r, c, |i, j| c_from_wire(rows[i][j])))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RingFile {
    labels: Vec<String>,
    dual: Vec<usize>,
    /// Nonzero multiplicities as `[i, j, k, N]`, sorted lexicographically.
    fusion: Vec<(usize, usize, usize, u32)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModularFile {
    s: Vec<Vec<CWire>>,
    t: Vec<CWire>,
    theta: Vec<CWire>,
    dims: Vec<f64>,
    central_charge: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FBlockFile {
    key: FKey,
    rows: Vec<usize>,
    cols: Vec<usize>,
    mat: Vec<Vec<CWire>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RSymbolFile {
    key: RKey,
    value: CWire,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SkeletalFile {
    ev_norms: Vec<f64>,
    f_blocks: Vec<FBlockFile>,
    r_symbols: Vec<RSymbolFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogFile {
    version: String,
    name: String,
    generator: Generator,
    precision: Precision,
    ring: RingFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    modular_data: Option<ModularFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    skeletal_data: Option<SkeletalFile>,
}

// ---------------------------------------------------------------------------
// Save.

fn require_finite_slice(xs: &[f64], what: &str) -> Result<(), CatalogError> {
    if xs.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(CatalogError::NonFinite(what.into()))
    }
}

fn require_finite_matrix(m: &Matrix, what: &str) -> Result<(), CatalogError> {
    m.check_finite().map_err(|_| CatalogError::NonFinite(what.into()))
}

/// Serialize to canonical bytes: sorted keys, two-space indentation, one
/// trailing newline.  Refuses non-finite values.
pub fn save_catalog(c: &Catalog) -> Result<Vec<u8>, CatalogError> {
    let n = c.ring.len();
    let mut fusion = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let m = c.ring.mult(i, j, k);
                if m > 0 {
                    fusion.push((i, j, k, m));
                }
            }
        }
    }
    let ring = RingFile {
        labels: c.ring.labels().iter().map(|l| l.name.clone()).collect(),
        dual: c.ring.dual_map().to_vec(),
        fusion,
    };

    let modular_data = match &c.modular {
        None => None,
        Some(md) => {
            require_finite_matrix(&md.s, "modular_data.s")?;
            require_finite_slice(&md.dims, "modular_data.dims")?;
            require_finite_slice(&[md.central_charge], "modular_data.central_charge")?;
            for (what, zs) in [("modular_data.t", &md.t), ("modular_data.theta", &md.theta)] {
                if zs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return Err(CatalogError::NonFinite(what.into()));
                }
            }
            Some(ModularFile {
                s: mat_to_wire(&md.s),
                t: md.t.iter().copied().map(c_to_wire).collect(),
                theta: md.theta.iter().copied().map(c_to_wire).collect(),
                dims: md.dims.clone(),
                central_charge: md.central_charge,
            })
        }
    };

    let skeletal_data = match &c.skeletal {
        None => None,
        Some(sk) => {
            require_finite_slice(sk.ev_norms(), "skeletal_data.ev_norms")?;
            let mut f_blocks = Vec::new();
            for (&key, block) in sk.f_blocks() {
                require_finite_matrix(&block.mat, &format!("skeletal_data.f_blocks{key:?}"))?;
                f_blocks.push(FBlockFile {
                    key,
                    rows: block.rows.clone(),
                    cols: block.cols.clone(),
                    mat: mat_to_wire(&block.mat),
                });
            }
            let mut r_symbols = Vec::new();
            for (&key, &value) in sk.r_symbols() {
                if !value.re.is_finite() || !value.im.is_finite() {
                    return Err(CatalogError::NonFinite(format!(
                        "skeletal_data.r_symbols{key:?}"
                    )));
                }
                r_symbols.push(RSymbolFile { key, value: c_to_wire(value) });
            }
            Some(SkeletalFile { ev_norms: sk.ev_norms().to_vec(), f_blocks, r_symbols })
        }
    };

    let file = CatalogFile {
        version: SCHEMA_VERSION.to_string(),
        name: c.name.clone(),
        generator: c.generator.clone(),
        precision: c.precision,
        ring,
        modular_data,
        skeletal_data,
    };
    // Round-tripping through `Value` sorts every object key (serde_json maps
    // are BTree-backed), which fixes the canonical form.
    let value = serde_json::to_value(&file)?;
    let mut bytes = serde_json::to_vec_pretty(&value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

// ---------------------------------------------------------------------------
// Load.

/// Parse and fully validate catalog bytes; every structural invariant of the
/// contained types is checked before the catalog is returned.
pub fn load_catalog(bytes: &[u8]) -> Result<Catalog, CatalogError> {
    let text = std::str::from_utf8(bytes)?;
    let mut de = serde_json::Deserializer::from_str(text);
    let file: CatalogFile = serde_path_to_error::deserialize(&mut de)
        .map_err(|e| CatalogError::Parse {
            path: e.path().to_string(),
            detail: e.inner().to_string(),
        })?;
    if file.version != SCHEMA_VERSION {
        return Err(CatalogError::Version { found: file.version });
    }

    let n = file.ring.labels.len();
    let mut table: BTreeMap<(usize, usize, usize), u32> = BTreeMap::new();
    for &(i, j, k, m) in &file.ring.fusion {
        if i >= n || j >= n || k >= n {
            return Err(CatalogError::Validation(format!(
                "fusion entry ({i}, {j}, {k}) out of range for {n} labels"
            )));
        }
        if table.insert((i, j, k), m).is_some() {
            return Err(CatalogError::Validation(format!(
                "duplicate fusion entry ({i}, {j}, {k})"
            )));
        }
    }
    let ring = FusionRing::from_fn(file.ring.labels, file.ring.dual, |i, j, k| {
        table.get(&(i, j, k)).copied().unwrap_or(0)
    })?;
    ring.structural_check()?;

    let modular = match file.modular_data {
        None => None,
        Some(md) => {
            let s = mat_from_wire(&md.s, "modular_data.s")?;
            let data = ModularData {
                s,
                t: md.t.into_iter().map(c_from_wire).collect(),
                theta: md.theta.into_iter().map(c_from_wire).collect(),
                dims: md.dims,
                central_charge: md.central_charge,
            };
            data.shape_check(n)?;
            require_finite_matrix(&data.s, "modular_data.s")?;
            require_finite_slice(&data.dims, "modular_data.dims")?;
            require_finite_slice(&[data.central_charge], "modular_data.central_charge")?;
            Some(data)
        }
    };

    let skeletal = match file.skeletal_data {
        None => None,
        Some(sk) => {
            let mut f: BTreeMap<FKey, FBlock> = BTreeMap::new();
            for fb in sk.f_blocks {
                let mat = mat_from_wire(&fb.mat, &format!("skeletal_data.f_blocks{:?}", fb.key))?;
                if mat.nrows() != fb.rows.len() || mat.ncols() != fb.cols.len() {
                    return Err(CatalogError::Validation(format!(
                        "F-block {:?}: matrix is {}×{} but has {} row and {} column labels",
                        fb.key,
                        mat.nrows(),
                        mat.ncols(),
                        fb.rows.len(),
                        fb.cols.len()
                    )));
                }
                if f.insert(fb.key, FBlock { rows: fb.rows, cols: fb.cols, mat }).is_some() {
                    return Err(CatalogError::Validation(format!(
                        "duplicate F-block key {:?}",
                        fb.key
                    )));
                }
            }
            let mut r: BTreeMap<RKey, Scalar> = BTreeMap::new();
            for rs in sk.r_symbols {
                if r.insert(rs.key, c_from_wire(rs.value)).is_some() {
                    return Err(CatalogError::Validation(format!(
                        "duplicate R-symbol key {:?}",
                        rs.key
                    )));
                }
            }
            Some(SkeletalData::new(ring.clone(), f, r, sk.ev_norms)?)
        }
    };

    Ok(Catalog {
        name: file.name,
        generator: file.generator,
        precision: file.precision,
        ring,
        modular,
        skeletal,
    })
}

// ---------------------------------------------------------------------------
// Builders for the shipped catalogs.

/// The bundled Ising fixture: authored F/R values in the unitary gauge (not
/// produced by a generator, hence `external`).
pub fn ising() -> Catalog {
    let skeletal = crate::skeletal::ising_skeletal();
    Catalog {
        name: "ising".into(),
        generator: Generator::External,
        precision: Precision::Double,
        ring: skeletal.ring().clone(),
        modular: Some(crate::modular::ising_modular()),
        skeletal: Some(skeletal),
    }
}

/// The one-object trivial theory.
pub fn trivial() -> Catalog {
    let (skeletal, modular) = crate::families::trivial();
    Catalog {
        name: "trivial".into(),
        generator: Generator::Trivial,
        precision: Precision::Double,
        ring: skeletal.ring().clone(),
        modular: Some(modular),
        skeletal: Some(skeletal),
    }
}

/// Generated SU(2)_k catalog with both modular and skeletal data.
pub fn su2(level: usize) -> Result<Catalog, CatalogError> {
    let fam = crate::families::su2_data(level)?;
    Ok(Catalog {
        name: format!("su2_level_{level}"),
        generator: Generator::Su2 { level },
        precision: Precision::Double,
        ring: fam.skeletal.ring().clone(),
        modular: Some(fam.modular),
        skeletal: Some(fam.skeletal),
    })
}

/// Generated minimal-model catalog `M(m, m+1)`; modular data only.
pub fn minimal(m: usize) -> Result<Catalog, CatalogError> {
    let model = crate::families::minimal_model(m)?;
    Ok(Catalog {
        name: format!("minimal_m_{m}"),
        generator: Generator::Minimal { m },
        precision: Precision::Double,
        ring: model.ring,
        modular: Some(model.modular),
        skeletal: None,
    })
}
