//! JSON file format for modular data and tensor-functor data.
//!
//! Complex numbers are `[re, im]` pairs. Labels are referred to by name
//! everywhere, so files stay valid when the vacuum is moved to index 0.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use braidmono::scalar::C;
use braidmono::{
    BlockMorphism, CMatrix, CatalogModel, ConjugateDeformation, FusionRing, Label, Matrix, ModularData64,
    SemisimpleObject, TensorFunctorData, Violation,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::json;

pub const FORMAT_VERSION: u32 = 1;

type Pair = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryFile {
    pub format_version: u32,
    #[serde(default)]
    pub metadata: Metadata,
    pub ring: RingBlock,
    pub modular: ModularBlock,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingBlock {
    pub labels: Vec<String>,
    /// Defaults to the first label.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vacuum: Option<String>,
    /// `dual[i]` names the dual of `labels[i]`; derived from `N_{ab}^0` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual: Option<Vec<String>>,
    /// Nonzero `N_{ab}^c` as `[a, b, c, n]`.
    pub fusion: Vec<(String, String, String, u32)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModularBlock {
    pub s: Vec<Vec<Pair>>,
    pub theta: Vec<Pair>,
    /// Computed by power iteration on the fusion matrices when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LoadError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    /// Syntax, type, or structural problem; `location` is `file:line:col` and/or a field path.
    #[error("{location}: {message}")]
    Parse { location: String, message: String },
    #[error("{name}: validation failed: {}", .violations.iter().map(|v| format!("{}: {}", v.check, v.detail)).collect::<Vec<_>>().join("; "))]
    Invalid { name: String, violations: Vec<Violation> },
}

impl LoadError {
    /// CLI exit code: invalid data is 1, unreadable input is 3.
    pub fn exit_code(&self) -> i32 {
        match self {
            LoadError::Invalid { .. } => 1,
            _ => 3,
        }
    }

    fn at(location: impl Into<String>, message: impl Into<String>) -> Self {
        LoadError::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}

fn read(path: &Path) -> Result<String, LoadError> {
    std::fs::read_to_string(path).map_err(|e| LoadError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Deserializes with both a line/column and a field path in errors.
fn parse_json<'de, D: Deserialize<'de>>(text: &'de str, origin: &str) -> Result<D, LoadError> {
    let mut de = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let mut location = format!("{origin}:{}:{}", inner.line(), inner.column());
        if path != "." {
            location.push_str(&format!(" at {path}"));
        }
        LoadError::at(location, inner.to_string())
    })
}

/// Parses a category file without validating the result.
pub fn parse_category(text: &str, origin: &str) -> Result<ModularData64, LoadError> {
    let file: CategoryFile = parse_json(text, origin)?;
    file.to_modular_data(origin)
}

/// Reads, parses and (non-strictly) validates a category file.
pub fn load_category(path: &Path) -> Result<ModularData64, LoadError> {
    let origin = path.display().to_string();
    let md = parse_category(&read(path)?, &origin)?;
    check_valid(md, &origin)
}

pub(crate) fn check_valid(md: ModularData64, name: &str) -> Result<ModularData64, LoadError> {
    let report = md.validate(false);
    if report.is_valid() {
        Ok(md)
    } else {
        Err(LoadError::Invalid {
            name: name.to_string(),
            violations: report.violations,
        })
    }
}

/// Catalog spec or path. An argument naming an existing file, or ending in
/// `.json`, is read from disk; anything else goes to the catalog parser.
pub fn resolve_category(arg: &str, base: Option<&Path>) -> Result<(ModularData64, String), LoadError> {
    let path = match base {
        Some(dir) if Path::new(arg).is_relative() => dir.join(arg),
        _ => PathBuf::from(arg),
    };
    if path.is_file() || arg.ends_with(".json") {
        let md = load_category(&path)?;
        return Ok((md, path.display().to_string()));
    }
    let model = CatalogModel::parse(arg).map_err(|e| LoadError::at(arg, format!("no such file, and {e}")))?;
    let md = model.build().map_err(|e| LoadError::at(arg, e.to_string()))?;
    Ok((md, model.to_string()))
}

impl CategoryFile {
    /// Snapshot of `md` with every value at full precision, dims included.
    pub fn from_modular_data(md: &ModularData64, name: Option<&str>, provenance: Option<&str>) -> Self {
        let ring = md.ring();
        let r = ring.rank();
        let names = ring.names();
        let mut fusion = Vec::new();
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    let n = ring.n(a, b, c);
                    if n > 0 {
                        fusion.push((names[a].clone(), names[b].clone(), names[c].clone(), n));
                    }
                }
            }
        }
        let pair = |z: &C<f64>| [z.re, z.im];
        CategoryFile {
            format_version: FORMAT_VERSION,
            metadata: Metadata {
                name: name.map(str::to_string),
                provenance: provenance.map(str::to_string),
            },
            ring: RingBlock {
                labels: names.to_vec(),
                vacuum: None,
                dual: Some(ring.duals().iter().map(|&d| names[d].clone()).collect()),
                fusion,
            },
            modular: ModularBlock {
                s: (0..r).map(|a| (0..r).map(|b| pair(&md.s()[(a, b)])).collect()).collect(),
                theta: md.theta().iter().map(pair).collect(),
                dims: Some(md.dims().to_vec()),
                tolerance: None,
            },
        }
    }

    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("category file serializes");
        json::to_pretty(&value) + "\n"
    }

    pub fn to_modular_data(&self, origin: &str) -> Result<ModularData64, LoadError> {
        let at = |field: &str| format!("{origin} at {field}");
        if self.format_version != FORMAT_VERSION {
            return Err(LoadError::at(
                at("format_version"),
                format!("unsupported format version {} (expected {FORMAT_VERSION})", self.format_version),
            ));
        }
        let labels = &self.ring.labels;
        let r = labels.len();
        if r == 0 {
            return Err(LoadError::at(at("ring.labels"), "at least the vacuum label is required"));
        }
        let mut index = HashMap::with_capacity(r);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.as_str(), i).is_some() {
                return Err(LoadError::at(at(&format!("ring.labels[{i}]")), format!("duplicate label {l:?}")));
            }
        }
        let lookup = |name: &str, field: String| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| LoadError::at(at(&field), format!("unknown label {name:?}")))
        };
        // perm[new] = old, vacuum first, remaining order kept
        let vac = match &self.ring.vacuum {
            Some(v) => lookup(v, "ring.vacuum".into())?,
            None => 0,
        };
        let perm: Vec<usize> = std::iter::once(vac).chain((0..r).filter(|&i| i != vac)).collect();
        let mut pos = vec![0; r];
        for (new, &old) in perm.iter().enumerate() {
            pos[old] = new;
        }

        let mut seen = HashMap::new();
        let mut triples = Vec::with_capacity(self.ring.fusion.len());
        for (i, (a, b, c, n)) in self.ring.fusion.iter().enumerate() {
            let field = format!("ring.fusion[{i}]");
            let key = (lookup(a, field.clone())?, lookup(b, field.clone())?, lookup(c, field.clone())?);
            if let Some(j) = seen.insert(key, i) {
                return Err(LoadError::at(at(&field), format!("repeats entry ring.fusion[{j}] for ({a}, {b}, {c})")));
            }
            triples.push((pos[key.0], pos[key.1], pos[key.2], *n));
        }
        let dual = match &self.ring.dual {
            None => None,
            Some(d) if d.len() != r => {
                return Err(LoadError::at(at("ring.dual"), format!("{} entries for {r} labels", d.len())))
            }
            Some(d) => {
                let mut out = vec![0; r];
                for (i, name) in d.iter().enumerate() {
                    out[pos[i]] = pos[lookup(name, format!("ring.dual[{i}]"))?];
                }
                Some(out)
            }
        };
        let new_names: Vec<String> = perm.iter().map(|&old| labels[old].clone()).collect();
        let derived = dual.is_none();
        let ring = FusionRing::from_triples(new_names, dual, &triples).map_err(|e| {
            if derived {
                LoadError::at(at("ring.dual"), format!("absent and not derivable from the vacuum channel: {e}"))
            } else {
                LoadError::at(at("ring"), e.to_string())
            }
        })?;

        let m = &self.modular;
        if m.s.len() != r {
            return Err(LoadError::at(at("modular.s"), format!("{} rows for {r} labels", m.s.len())));
        }
        for (i, row) in m.s.iter().enumerate() {
            if row.len() != r {
                return Err(LoadError::at(at(&format!("modular.s[{i}]")), format!("{} entries for {r} labels", row.len())));
            }
        }
        if m.theta.len() != r {
            return Err(LoadError::at(at("modular.theta"), format!("{} entries for {r} labels", m.theta.len())));
        }
        if let Some(d) = &m.dims {
            if d.len() != r {
                return Err(LoadError::at(at("modular.dims"), format!("{} entries for {r} labels", d.len())));
            }
        }
        let cx = |p: &Pair| C::new(p[0], p[1]);
        let s: CMatrix<f64> = Matrix::from_fn(r, r, |i, j| cx(&m.s[perm[i]][perm[j]]));
        let theta = perm.iter().map(|&old| cx(&m.theta[old])).collect();
        let dims = m.dims.as_ref().map(|d| perm.iter().map(|&old| d[old]).collect());
        let md = ModularData64::new(Arc::new(ring), s, theta, dims).map_err(|e| LoadError::at(at("modular"), e.to_string()))?;
        Ok(match m.tolerance {
            Some(t) if !(t > 0.0) => return Err(LoadError::at(at("modular.tolerance"), "must be positive")),
            Some(t) => md.with_tolerance(t),
            None => md,
        })
    }
}

/// A category given by catalog name, path (relative to the referring file), or inline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CategoryRef {
    Named(String),
    Inline(Box<CategoryFile>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorFile {
    pub format_version: u32,
    #[serde(default)]
    pub metadata: Metadata,
    pub source: CategoryRef,
    pub target: CategoryRef,
    /// `m[source label][target label]`; omitted entries are zero.
    pub m: BTreeMap<String, BTreeMap<String, u32>>,
    /// Deformation `T` on `F(τ_ζ)`: source label → target label → square block.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub deformations: BTreeMap<String, BTreeMap<String, Vec<Vec<Pair>>>>,
}

pub fn load_functor(path: &Path) -> Result<TensorFunctorData<f64>, LoadError> {
    let origin = path.display().to_string();
    let file: FunctorFile = parse_json(&read(path)?, &origin)?;
    file.resolve(&origin, path.parent())
}

impl FunctorFile {
    pub fn resolve(&self, origin: &str, base: Option<&Path>) -> Result<TensorFunctorData<f64>, LoadError> {
        let at = |field: &str| format!("{origin} at {field}");
        if self.format_version != FORMAT_VERSION {
            return Err(LoadError::at(
                at("format_version"),
                format!("unsupported format version {} (expected {FORMAT_VERSION})", self.format_version),
            ));
        }
        let side = |r: &CategoryRef, field: &str| -> Result<ModularData64, LoadError> {
            match r {
                CategoryRef::Named(name) => resolve_category(name, base).map(|(md, _)| md),
                CategoryRef::Inline(file) => check_valid(file.to_modular_data(&at(field))?, &at(field)),
            }
        };
        let source = side(&self.source, "source")?;
        let target = side(&self.target, "target")?;
        let (sr, tr) = (source.ring(), target.ring());
        let label = |ring: &FusionRing, name: &str, field: String| {
            ring.label(name).map_err(|_| LoadError::at(at(&field), format!("unknown label {name:?}")))
        };
        let mut m = Matrix::<u32>::zeros(source.rank(), target.rank());
        for (z, row) in &self.m {
            let zi = label(sr, z, format!("m.{z}"))?;
            for (a, &n) in row {
                let ai = label(tr, a, format!("m.{z}.{a}"))?;
                m[(zi.0, ai.0)] = n;
            }
        }
        let mut fd = TensorFunctorData::new(source, target, m).map_err(|e| LoadError::at(at("m"), e.to_string()))?;
        for (z, blocks) in &self.deformations {
            let field = format!("deformations.{z}");
            let zi = label(fd.source().ring(), z, field.clone())?;
            let obj = fd.image_object(zi).map_err(|e| LoadError::at(at(&field), e.to_string()))?;
            let def = deformation(&obj, blocks, &|f| at(&format!("{field}{f}")))?;
            fd = fd.with_deformation(zi, def).map_err(|e| LoadError::at(at(&field), e.to_string()))?;
        }
        Ok(fd)
    }
}

fn deformation(
    obj: &SemisimpleObject,
    blocks: &BTreeMap<String, Vec<Vec<Pair>>>,
    at: &dyn Fn(&str) -> String,
) -> Result<ConjugateDeformation<f64>, LoadError> {
    let ring = obj.ring();
    let mut out: Vec<Option<CMatrix<f64>>> = vec![None; ring.rank()];
    for (a, rows) in blocks {
        let Label(ai) = ring.label(a).map_err(|_| LoadError::at(at(&format!(".{a}")), format!("unknown label {a:?}")))?;
        let n = obj.n(ai);
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(LoadError::at(
                at(&format!(".{a}")),
                format!("block must be {n}x{n}, the multiplicity of {a} in the image"),
            ));
        }
        out[ai] = Some(Matrix::from_fn(n, n, |i, j| C::new(rows[i][j][0], rows[i][j][1])));
    }
    let mut full = Vec::with_capacity(out.len());
    for (a, block) in out.into_iter().enumerate() {
        match block {
            Some(b) => full.push(b),
            None if obj.n(a) == 0 => full.push(Matrix::zeros(0, 0)),
            None => {
                return Err(LoadError::at(at(""), format!("missing block for {} (multiplicity {})", ring.name(a), obj.n(a))))
            }
        }
    }
    let t = BlockMorphism::endo(obj, full).map_err(|e| LoadError::at(at(""), e.to_string()))?;
    ConjugateDeformation::new(t).map_err(|e| LoadError::at(at(""), e.to_string()))
}
