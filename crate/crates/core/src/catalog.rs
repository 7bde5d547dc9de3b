//! Standard small anyon models with closed-form data.
//!
//! Model names accepted by [`CatalogModel::parse`]:
//!
//! | name | notes |
//! |------|-------|
//! | `trivial` | rank 1 |
//! | `toric_code_zN` / `toric_code_zn(N)` | quantum double of `Z_N`, `2 ≤ N ≤ 8` |
//! | `semion` | `Z_2`, `θ_s = i` |
//! | `double_semion` | semion ⊠ anti-semion |
//! | `fibonacci` / `fibonacci(1)` | `θ_τ = e^{4πi/5}`; parameter 1 selects the conjugate |
//! | `ising` / `ising(1)` | `θ_σ = e^{iπ/8}`; parameter 1 selects the conjugate |
//! | `decohered_toric_code` | the `{1, e}` subcategory of the toric code; degenerate `S` |
//! | `product(A,B)` | Deligne product of two catalog models |

use std::fmt;
use std::sync::Arc;

use crate::error::{input, Result};
use crate::fusion::FusionRing;
use crate::modular::ModularData;
use crate::scalar::{c, re, root_of_unity, Real, C};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogModel {
    Trivial,
    ToricCode(u32),
    Semion,
    DoubleSemion,
    Fibonacci { conjugate: bool },
    Ising { conjugate: bool },
    DecoheredToricCode,
    Product(Box<CatalogModel>, Box<CatalogModel>),
}

impl CatalogModel {
    /// One representative of every family, in listing order.
    pub fn standard() -> Vec<CatalogModel> {
        use CatalogModel::*;
        vec![
            Trivial,
            ToricCode(2),
            ToricCode(3),
            Semion,
            DoubleSemion,
            Fibonacci { conjugate: false },
            Ising { conjugate: false },
            DecoheredToricCode,
            Product(Box::new(Semion), Box::new(Fibonacci { conjugate: false })),
        ]
    }

    /// Name/params form: `catalog_model("toric_code_zn", &[3])`.
    pub fn from_name(name: &str, params: &[i64]) -> Result<Self> {
        let flag = |p: &[i64]| -> Result<bool> {
            match p {
                [] | [0] => Ok(false),
                [1] => Ok(true),
                _ => Err(input(format!("{name} takes one optional parameter 0 or 1"))),
            }
        };
        let none = |p: &[i64], m: CatalogModel| -> Result<CatalogModel> {
            if p.is_empty() {
                Ok(m)
            } else {
                Err(input(format!("{name} takes no parameters")))
            }
        };
        match name {
            "trivial" => none(params, CatalogModel::Trivial),
            "semion" => none(params, CatalogModel::Semion),
            "double_semion" => none(params, CatalogModel::DoubleSemion),
            "decohered_toric_code" => none(params, CatalogModel::DecoheredToricCode),
            "toric_code" if params.is_empty() => Ok(CatalogModel::ToricCode(2)),
            "toric_code" | "toric_code_zn" => match params {
                [n] if (2..=8).contains(n) => Ok(CatalogModel::ToricCode(*n as u32)),
                _ => Err(input("toric_code_zn takes one parameter N with 2 ≤ N ≤ 8")),
            },
            "fibonacci" => Ok(CatalogModel::Fibonacci { conjugate: flag(params)? }),
            "ising" => Ok(CatalogModel::Ising { conjugate: flag(params)? }),
            other => {
                if let Some(n) = other.strip_prefix("toric_code_z") {
                    let n: i64 = n
                        .parse()
                        .map_err(|_| input(format!("unknown catalog model {other:?}")))?;
                    return CatalogModel::from_name("toric_code_zn", &[n]);
                }
                Err(input(format!("unknown catalog model {other:?}")))
            }
        }
    }

    /// Parses `name`, `name(p, …)`, or `product(A,B)`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let Some(open) = spec.find('(') else {
            return Self::from_name(spec, &[]);
        };
        if !spec.ends_with(')') {
            return Err(input(format!("unbalanced parentheses in {spec:?}")));
        }
        let name = spec[..open].trim();
        let inner = &spec[open + 1..spec.len() - 1];
        if name == "product" {
            let (a, b) = split_top_level(inner)
                .ok_or_else(|| input(format!("product needs two models: {spec:?}")))?;
            return Ok(CatalogModel::Product(
                Box::new(Self::parse(a)?),
                Box::new(Self::parse(b)?),
            ));
        }
        let params = inner
            .split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|p| {
                p.trim()
                    .parse::<i64>()
                    .map_err(|_| input(format!("bad parameter {p:?} in {spec:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_name(name, &params)
    }

    /// Whether the model's `S` is nondegenerate.
    pub fn is_modular(&self) -> bool {
        match self {
            CatalogModel::DecoheredToricCode => false,
            CatalogModel::Product(a, b) => a.is_modular() && b.is_modular(),
            _ => true,
        }
    }

    /// Whether every simple is invertible.
    pub fn is_pointed(&self) -> bool {
        match self {
            CatalogModel::Fibonacci { .. } | CatalogModel::Ising { .. } => false,
            CatalogModel::Product(a, b) => a.is_pointed() && b.is_pointed(),
            _ => true,
        }
    }

    pub fn build<T: Real>(&self) -> Result<ModularData<T>> {
        match self {
            CatalogModel::Trivial => {
                let ring = FusionRing::group_ring(&[], vec!["1".into()])?;
                let s = ModularData::s_from_fn(1, |_, _| c(1.0, 0.0));
                ModularData::new(Arc::new(ring), s, vec![c(1.0, 0.0)], Some(vec![T::one()]))
            }
            CatalogModel::ToricCode(n) => toric_code(*n),
            CatalogModel::Semion => {
                let ring = FusionRing::group_ring(&[2], names(&["1", "s"]))?;
                let s = ModularData::s_from_fn(2, |a, b| c(if a * b == 1 { -1.0 } else { 1.0 }, 0.0));
                ModularData::new(Arc::new(ring), s, vec![c(1.0, 0.0), c(0.0, 1.0)], Some(ones(2)))
            }
            CatalogModel::DoubleSemion => {
                // index = a + 2b for s^a s̄^b
                let ring = FusionRing::group_ring(&[2, 2], names(&["1", "s", "s̄", "ss̄"]))?;
                let s = ModularData::s_from_fn(4, |x, y| {
                    let parity = (x & 1) * (y & 1) + (x >> 1) * (y >> 1);
                    c(if parity % 2 == 1 { -1.0 } else { 1.0 }, 0.0)
                });
                let theta = vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(1.0, 0.0)];
                ModularData::new(Arc::new(ring), s, theta, Some(ones(4)))
            }
            CatalogModel::Fibonacci { conjugate } => {
                let ring = FusionRing::from_triples(
                    names(&["1", "τ"]),
                    Some(vec![0, 1]),
                    &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 0, 1), (1, 1, 1, 1)],
                )?;
                let phi = (T::one() + T::lit(5.0).sqrt()) / T::lit(2.0);
                let s = crate::matrix::Matrix::from_rows(vec![
                    vec![re(T::one()), re(phi)],
                    vec![re(phi), re(-T::one())],
                ])
                .expect("2x2");
                let twist = root_of_unity(if *conjugate { -2 } else { 2 }, 5);
                ModularData::new(Arc::new(ring), s, vec![re(T::one()), twist], Some(vec![T::one(), phi]))
            }
            CatalogModel::Ising { conjugate } => {
                let ring = FusionRing::from_triples(
                    names(&["1", "σ", "ψ"]),
                    Some(vec![0, 1, 2]),
                    &[
                        (0, 0, 0, 1),
                        (0, 1, 1, 1),
                        (1, 0, 1, 1),
                        (0, 2, 2, 1),
                        (2, 0, 2, 1),
                        (1, 1, 0, 1),
                        (1, 1, 2, 1),
                        (1, 2, 1, 1),
                        (2, 1, 1, 1),
                        (2, 2, 0, 1),
                    ],
                )?;
                let r2 = T::lit(2.0).sqrt();
                let s = crate::matrix::Matrix::from_rows(vec![
                    vec![re(T::one()), re(r2), re(T::one())],
                    vec![re(r2), re(T::zero()), re(-r2)],
                    vec![re(T::one()), re(-r2), re(T::one())],
                ])
                .expect("3x3");
                let sigma = root_of_unity(if *conjugate { -1 } else { 1 }, 16);
                let theta = vec![re(T::one()), sigma, re(-T::one())];
                ModularData::new(Arc::new(ring), s, theta, Some(vec![T::one(), r2, T::one()]))
            }
            CatalogModel::DecoheredToricCode => {
                let ring = FusionRing::group_ring(&[2], names(&["1", "e"]))?;
                let s = ModularData::s_from_fn(2, |_, _| c(1.0, 0.0));
                ModularData::new(Arc::new(ring), s, vec![c(1.0, 0.0), c(1.0, 0.0)], Some(ones(2)))
            }
            CatalogModel::Product(a, b) => a.build::<T>()?.product(&b.build::<T>()?),
        }
    }
}

impl fmt::Display for CatalogModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogModel::Trivial => write!(f, "trivial"),
            CatalogModel::ToricCode(n) => write!(f, "toric_code_z{n}"),
            CatalogModel::Semion => write!(f, "semion"),
            CatalogModel::DoubleSemion => write!(f, "double_semion"),
            CatalogModel::Fibonacci { conjugate: false } => write!(f, "fibonacci"),
            CatalogModel::Fibonacci { conjugate: true } => write!(f, "fibonacci(1)"),
            CatalogModel::Ising { conjugate: false } => write!(f, "ising"),
            CatalogModel::Ising { conjugate: true } => write!(f, "ising(1)"),
            CatalogModel::DecoheredToricCode => write!(f, "decohered_toric_code"),
            CatalogModel::Product(a, b) => write!(f, "product({a},{b})"),
        }
    }
}

/// Functional form of [`CatalogModel::from_name`] followed by `build`.
pub fn catalog_model<T: Real>(name: &str, params: &[i64]) -> Result<ModularData<T>> {
    CatalogModel::from_name(name, params)?.build()
}

fn split_top_level(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn ones<T: Real>(n: usize) -> Vec<T> {
    vec![T::one(); n]
}

/// `D(Z_N)`: label `(j, k) = e^j m^k` at index `j + N k`,
/// `θ = ω^{jk}`, `S = ω^{jk' + kj'}` with `ω = e^{2πi/N}`.
fn toric_code<T: Real>(n: u32) -> Result<ModularData<T>> {
    let nn = n as usize;
    let label_name = |idx: usize| -> String {
        let (j, k) = (idx % nn, idx / nn);
        if n == 2 && j == 1 && k == 1 {
            return "f".into();
        }
        let part = |sym: &str, p: usize| match p {
            0 => String::new(),
            1 => sym.to_string(),
            p => format!("{sym}^{p}"),
        };
        let s = format!("{}{}", part("e", j), part("m", k));
        if s.is_empty() {
            "1".into()
        } else {
            s
        }
    };
    let rank = nn * nn;
    let ring = FusionRing::group_ring(&[n, n], (0..rank).map(label_name).collect())?;
    let s = ModularData::s_from_fn(rank, |x, y| {
        let (j, k) = ((x % nn) as i64, (x / nn) as i64);
        let (jp, kp) = ((y % nn) as i64, (y / nn) as i64);
        root_of_unity(j * kp + k * jp, n as i64)
    });
    let theta: Vec<C<T>> = (0..rank)
        .map(|x| root_of_unity(((x % nn) * (x / nn)) as i64, n as i64))
        .collect();
    ModularData::new(Arc::new(ring), s, theta, Some(ones(rank)))
}
