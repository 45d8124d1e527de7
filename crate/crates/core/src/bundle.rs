//! On-disk formats: category bundles and algebra bundles (JSON) and
//! coupling matrices (whitespace-separated integer grids).

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::alpha::{AlgebraObject, CouplingMatrix};
use crate::category::CategoryModel;
use crate::error::{Error, Result};
use crate::fusion::{FusionData, Label};
use crate::linalg::{c, C64};

pub const CATEGORY_FORMAT: &str = "ctps-category/1";
pub const ALGEBRA_FORMAT: &str = "ctps-algebra/1";

/// One F-symbol entry. `row = [e, μ, ν]` names the tree
/// `(ab→e;μ)(ec→d;ν)`, `col = [f, κ, λ]` the tree `(bc→f;κ)(af→d;λ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FEntry {
    pub block: [Label; 4],
    pub row: [usize; 3],
    pub col: [usize; 3],
    pub value: [f64; 2],
}

/// `R^{ab}_c[row, col]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct REntry {
    pub block: [Label; 3],
    pub row: usize,
    pub col: usize,
    pub value: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CategoryBundle {
    pub format: String,
    pub name: String,
    #[serde(default)]
    pub provenance: Vec<String>,
    pub labels: Vec<String>,
    pub dual: Vec<Label>,
    /// `(λ, μ, ν, N^ν_{λμ})` for the non-zero multiplicities.
    pub fusion: Vec<[usize; 4]>,
    #[serde(default)]
    pub qdims: Option<Vec<f64>>,
    pub unitary: bool,
    pub braided: bool,
    /// Entries of the blocks with no unit among `a, b, c`; the others are
    /// fixed by normalisation. Missing entries are zero.
    pub f: Vec<FEntry>,
    #[serde(default)]
    pub r: Vec<REntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraBundle {
    pub format: String,
    pub category: String,
    #[serde(default)]
    pub provenance: Vec<String>,
    pub multiplicities: Vec<usize>,
    /// `(l, m, n, v, value)`: coefficient of the multiplication from tree
    /// `v` of `Hom(λ_n, λ_l λ_m)`, indices into the summands of Θ.
    pub mult: Vec<(usize, usize, usize, usize, [f64; 2])>,
}

fn pair(z: C64) -> [f64; 2] {
    // Adding zero turns -0.0 into 0.0.
    [z.re + 0.0, z.im + 0.0]
}

/// JSON with one top-level key per line and one list element per line.
fn to_text<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    let serde_json::Value::Object(map) = v else {
        return Ok(serde_json::to_string(&v)? + "\n");
    };
    let mut out = String::from("{\n");
    let n = map.len();
    for (i, (k, v)) in map.iter().enumerate() {
        out += &format!("  {}: ", serde_json::to_string(k)?);
        match v {
            serde_json::Value::Array(items) if items.iter().any(|x| x.is_array() || x.is_object() || x.is_string()) => {
                out += "[\n";
                for (j, x) in items.iter().enumerate() {
                    out += &format!(
                        "    {}{}\n",
                        serde_json::to_string(x)?,
                        if j + 1 < items.len() { "," } else { "" }
                    );
                }
                out += "  ]";
            }
            _ => out += &serde_json::to_string(v)?,
        }
        out += if i + 1 < n { ",\n" } else { "\n" };
    }
    out += "}\n";
    Ok(out)
}

fn complex(v: [f64; 2]) -> C64 {
    c(v[0], v[1])
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

impl CategoryBundle {
    pub fn from_model(model: &CategoryModel, provenance: &[&str]) -> CategoryBundle {
        let fus = &model.fusion;
        let n = fus.rank();
        let mut fusion = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for x in 0..n {
                    let k = fus.n(a, b, x);
                    if k > 0 {
                        fusion.push([a, b, x, k]);
                    }
                }
            }
        }
        let mut keys: Vec<_> = model
            .f_blocks()
            .map(|(k, _)| *k)
            .filter(|&(a, b, c, _)| a != 0 && b != 0 && c != 0)
            .collect();
        keys.sort_unstable();
        let mut f = Vec::new();
        for (a, b, cc, d) in keys {
            let blk = model.f_block(a, b, cc, d).expect("listed block");
            for (i, l) in blk.left.iter().enumerate() {
                for (j, r) in blk.right.iter().enumerate() {
                    let v = blk.mat[(i, j)];
                    if v != c(0.0, 0.0) {
                        f.push(FEntry {
                            block: [a, b, cc, d],
                            row: [l.0, l.1, l.2],
                            col: [r.0, r.1, r.2],
                            value: pair(v),
                        });
                    }
                }
            }
        }
        let mut r = Vec::new();
        if model.is_braided() {
            for a in 0..n {
                for b in 0..n {
                    for x in fus.channels(a, b) {
                        let m = model.r_block(a, b, x).expect("braided model has every R block");
                        for i in 0..m.nrows() {
                            for j in 0..m.ncols() {
                                r.push(REntry {
                                    block: [a, b, x],
                                    row: i,
                                    col: j,
                                    value: pair(m[(i, j)]),
                                });
                            }
                        }
                    }
                }
            }
        }
        CategoryBundle {
            format: CATEGORY_FORMAT.into(),
            name: model.name.clone(),
            provenance: provenance.iter().map(|s| s.to_string()).collect(),
            labels: fus.labels.iter().map(|l| l.name.clone()).collect(),
            dual: fus.dual.clone(),
            fusion,
            qdims: Some(fus.qdim.clone()),
            unitary: true,
            braided: model.is_braided(),
            f,
            r,
        }
    }

    pub fn to_model(&self) -> Result<CategoryModel> {
        if self.format != CATEGORY_FORMAT {
            return Err(parse_err(format!(
                "expected format {CATEGORY_FORMAT:?}, found {:?}",
                self.format
            )));
        }
        if !self.unitary {
            return Err(Error::Unsupported("only unitary categories are supported".into()));
        }
        let n = self.labels.len();
        if n == 0 {
            return Err(parse_err("category has no labels"));
        }
        let mut mult = vec![0u32; n * n * n];
        for &[a, b, x, k] in &self.fusion {
            if a >= n || b >= n || x >= n {
                return Err(parse_err(format!("fusion entry ({a},{b},{x}) out of range")));
            }
            mult[(a * n + b) * n + x] = u32::try_from(k).map_err(|_| parse_err("fusion multiplicity too large"))?;
        }
        let fusion = FusionData::from_flat(self.labels.clone(), self.dual.clone(), mult, self.qdims.clone())?;

        let mut f_map = HashMap::new();
        for e in &self.f {
            let [a, b, cc, d] = e.block;
            let blk_ok = [a, b, cc, d].iter().all(|&x| x < n);
            if !blk_ok || a == 0 || b == 0 || cc == 0 {
                return Err(parse_err(format!(
                    "F entry for block {:?} is out of range or fixed by normalisation",
                    e.block
                )));
            }
            let key = (
                a,
                b,
                cc,
                d,
                (e.row[0], e.row[1], e.row[2]),
                (e.col[0], e.col[1], e.col[2]),
            );
            if f_map.insert(key, complex(e.value)).is_some() {
                return Err(parse_err(format!(
                    "duplicate F entry {:?} {:?} {:?}",
                    e.block, e.row, e.col
                )));
            }
        }
        let r_map: Option<HashMap<_, _>> = if self.braided {
            let mut m = HashMap::new();
            for e in &self.r {
                let [a, b, x] = e.block;
                if a >= n || b >= n || x >= n {
                    return Err(parse_err(format!("R entry for block {:?} is out of range", e.block)));
                }
                m.insert((a, b, x, e.row, e.col), complex(e.value));
            }
            Some(m)
        } else {
            if !self.r.is_empty() {
                return Err(parse_err("R entries given for an unbraided category"));
            }
            None
        };

        let zero = c(0.0, 0.0);
        let model = CategoryModel::from_fn(
            &self.name,
            fusion,
            |a, b, cc, d, l, r| f_map.get(&(a, b, cc, d, l, r)).copied().unwrap_or(zero),
            r_map
                .as_ref()
                .map(|m| move |a, b, x, i, j| m.get(&(a, b, x, i, j)).copied().unwrap_or(zero)),
        )?;
        // Every listed F entry must name a real tree pair of its block.
        for e in &self.f {
            let [a, b, cc, d] = e.block;
            let known = model.f_block(a, b, cc, d).is_some_and(|blk| {
                blk.left.contains(&(e.row[0], e.row[1], e.row[2]))
                    && blk.right.contains(&(e.col[0], e.col[1], e.col[2]))
            });
            if !known {
                return Err(parse_err(format!(
                    "F entry {:?} {:?} {:?} names no fusion tree",
                    e.block, e.row, e.col
                )));
            }
        }
        Ok(model)
    }
}

pub fn read_category(path: &Path) -> Result<CategoryModel> {
    let text = read_text(path)?;
    let bundle: CategoryBundle = serde_json::from_str(&text)?;
    bundle.to_model()
}

pub fn write_category(path: &Path, model: &CategoryModel, provenance: &[&str]) -> Result<()> {
    std::fs::write(path, to_text(&CategoryBundle::from_model(model, provenance))?)?;
    Ok(())
}

impl AlgebraBundle {
    pub fn from_algebra(model: &CategoryModel, alg: &AlgebraObject, provenance: &[&str]) -> AlgebraBundle {
        AlgebraBundle {
            format: ALGEBRA_FORMAT.into(),
            category: model.name.clone(),
            provenance: provenance.iter().map(|s| s.to_string()).collect(),
            multiplicities: alg.q.theta.multiplicities.clone(),
            mult: alg
                .mult_entries(model)
                .into_iter()
                .map(|(l, m, n, v, z)| (l, m, n, v, pair(z)))
                .collect(),
        }
    }

    pub fn to_algebra(&self, model: &CategoryModel) -> Result<AlgebraObject> {
        if self.format != ALGEBRA_FORMAT {
            return Err(parse_err(format!(
                "expected format {ALGEBRA_FORMAT:?}, found {:?}",
                self.format
            )));
        }
        if self.category != model.name {
            return Err(Error::InvalidInput(format!(
                "algebra is over {:?} but the category is {:?}",
                self.category, model.name
            )));
        }
        let entries: HashMap<_, _> = self
            .mult
            .iter()
            .map(|&(l, m, n, v, z)| ((l, m, n, v), complex(z)))
            .collect();
        AlgebraObject::from_mult(model, self.multiplicities.clone(), |l, m, n, v| {
            entries.get(&(l, m, n, v)).copied().unwrap_or(c(0.0, 0.0))
        })
    }
}

pub fn read_algebra(path: &Path, model: &CategoryModel) -> Result<AlgebraObject> {
    let text = read_text(path)?;
    let bundle: AlgebraBundle = serde_json::from_str(&text)?;
    bundle.to_algebra(model)
}

pub fn write_algebra(path: &Path, model: &CategoryModel, alg: &AlgebraObject, provenance: &[&str]) -> Result<()> {
    std::fs::write(path, to_text(&AlgebraBundle::from_algebra(model, alg, provenance))?)?;
    Ok(())
}

/// Parses an integer grid; `#` starts a comment.
pub fn parse_matrix(text: &str) -> Result<CouplingMatrix> {
    let mut z = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|e| parse_err(format!("line {}: {t:?}: {e}", k + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        z.push(row);
    }
    if z.is_empty() || z.iter().any(|r| r.len() != z[0].len()) {
        return Err(parse_err("matrix rows must be non-empty and of equal length"));
    }
    Ok(CouplingMatrix { z })
}

pub fn read_matrix(path: &Path) -> Result<CouplingMatrix> {
    parse_matrix(&read_text(path)?)
}

pub fn format_matrix(z: &CouplingMatrix) -> String {
    z.z.iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("\n")
        + "\n"
}

/// Exact equality of fusion data, F and R symbols.
pub fn same_model(a: &CategoryModel, b: &CategoryModel) -> bool {
    if a.name != b.name || a.fusion != b.fusion || a.is_braided() != b.is_braided() {
        return false;
    }
    let n = a.rank();
    let f_same = a.f_blocks().count() == b.f_blocks().count()
        && a.f_blocks().all(|(&(p, q, r, s), blk)| {
            b.f_block(p, q, r, s)
                .is_some_and(|o| o.left == blk.left && o.right == blk.right && o.mat == blk.mat)
        });
    let r_same = (0..n).all(|x| {
        (0..n).all(|y| {
            a.fusion
                .channels(x, y)
                .all(|z| a.r_block(x, y, z) == b.r_block(x, y, z))
        })
    });
    f_same && r_same
}
