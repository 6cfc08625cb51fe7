use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::expr::parse_radical_expr;
use crate::builder::Engine;
use crate::combinatorics::Partition;
use crate::error::{Error, Result};
use crate::exact::{Radical, RadicalSum, Rational};
use crate::wordspace::{antisymmetrize_set, symmetrize_set, Word, WordVector};

/// Word-space state with radical coefficients.
pub type RadicalState = BTreeMap<Word, RadicalSum>;

pub fn radical_state(v: &WordVector, scale: &Radical) -> RadicalState {
    v.terms().map(|(w, c)| (*w, RadicalSum::from(&(scale * c)))).filter(|(_, c)| !c.is_zero()).collect()
}

pub fn state_inner(a: &RadicalState, b: &RadicalState) -> RadicalSum {
    let mut acc = RadicalSum::zero();
    for (w, x) in a {
        if let Some(y) = b.get(w) {
            acc += &(x * y);
        }
    }
    acc
}

/// ⟨a, v⟩ for a rational word vector v.
pub fn state_inner_vector(a: &RadicalState, v: &WordVector) -> RadicalSum {
    let mut acc = RadicalSum::zero();
    for (w, x) in a {
        let c = v.coeff(w);
        if !c.is_zero() {
            acc += &x.mul_radical(&Radical::from_rational(c));
        }
    }
    acc
}

fn tensor(a: &RadicalState, b: &RadicalState) -> RadicalState {
    let mut out = RadicalState::new();
    for (wa, x) in a {
        for (wb, y) in b {
            out.insert(wa.concat(wb), x * y);
        }
    }
    out
}

fn add_scaled(acc: &mut RadicalState, v: &RadicalState, c: &Radical) {
    for (w, x) in v {
        let e = acc.entry(*w).or_insert_with(RadicalSum::zero);
        *e += &x.mul_radical(c);
    }
    acc.retain(|_, x| !x.is_zero());
}

/// Scales to unit norm; the squared norm must be a positive rational.
fn normalize(v: RadicalState, what: &str) -> Result<RadicalState> {
    let n2 = state_inner(&v, &v);
    let r = n2
        .as_rational()
        .filter(|r| r > &Rational::zero())
        .ok_or_else(|| Error::RowAlign(format!("{what}: squared norm {n2} is not a positive rational")))?;
    let s = Radical::canonicalize(Rational::one(), r.recip())?;
    Ok(v.into_iter().map(|(w, x)| (w, x.mul_radical(&s))).collect())
}

/// One slot group of a row descriptor.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Group {
    Label(u8),
    /// `{a,b,…}`: symmetric over the labels.
    Sym(Vec<u8>),
    /// `[a,b,…]`: antisymmetric, the listed order taken with sign +1.
    Anti(Vec<u8>),
    /// `k(a,b,…)`: component k (1-based) of the parent shape, canonical
    /// label i replaced by the i-th listed label.
    Component(usize, Vec<u8>),
}

impl Group {
    pub fn len(&self) -> usize {
        match self {
            Group::Label(_) => 1,
            Group::Sym(l) | Group::Anti(l) | Group::Component(_, l) => l.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Slot groups laid out left to right, written `g1|g2|…`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Descriptor {
    pub groups: Vec<Group>,
}

fn parse_labels(s: &str, at: usize) -> Result<Vec<u8>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u8>()
                .ok()
                .filter(|&l| (1..=16).contains(&l))
                .ok_or_else(|| Error::parse(at, format!("bad label {t:?}")))
        })
        .collect()
}

impl std::str::FromStr for Descriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Descriptor> {
        let mut groups = Vec::new();
        let mut at = 0;
        for part in s.split('|') {
            let t = part.trim();
            let g = if let Some(inner) = t.strip_prefix('{').and_then(|x| x.strip_suffix('}')) {
                Group::Sym(parse_labels(inner, at)?)
            } else if let Some(inner) = t.strip_prefix('[').and_then(|x| x.strip_suffix(']')) {
                Group::Anti(parse_labels(inner, at)?)
            } else if let Some(open) = t.find('(') {
                let k: usize = t[..open].trim().parse().map_err(|_| Error::parse(at, "bad component index"))?;
                let inner =
                    t[open + 1..].strip_suffix(')').ok_or_else(|| Error::parse(at + t.len(), "expected ')'"))?;
                if k == 0 {
                    return Err(Error::parse(at, "components are numbered from 1"));
                }
                Group::Component(k, parse_labels(inner, at)?)
            } else {
                let l = parse_labels(t, at)?;
                if l.len() != 1 {
                    return Err(Error::parse(at, "bare group must be one label"));
                }
                Group::Label(l[0])
            };
            groups.push(g);
            at += part.len() + 1;
        }
        Ok(Descriptor { groups })
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |l: &[u8]| l.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        for (i, g) in self.groups.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            match g {
                Group::Label(l) => write!(f, "{l}")?,
                Group::Sym(l) => write!(f, "{{{}}}", list(l))?,
                Group::Anti(l) => write!(f, "[{}]", list(l))?,
                Group::Component(k, l) => write!(f, "{k}({})", list(l))?,
            }
        }
        Ok(())
    }
}

/// Orthonormal components of the parent shape, given over descriptors of
/// its own product basis.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ParentBasisJson {
    pub rows: Vec<String>,
    /// entries[r][k]
    pub entries: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BlockJson {
    pub target: String,
    pub copies: usize,
    pub width: usize,
}

/// On-disk reference table.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ReferenceJson {
    pub n: usize,
    pub f1: String,
    pub f2: String,
    pub moved: usize,
    #[serde(default)]
    pub caption: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub known_issue: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errata: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent_basis: Option<ParentBasisJson>,
    pub rows: Vec<String>,
    pub blocks: Vec<BlockJson>,
    pub entries: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RefBlock {
    pub target: Partition,
    pub copies: usize,
    pub width: usize,
    pub start: usize,
}

#[derive(Clone, Debug)]
pub struct ParentBasis {
    pub rows: Vec<Descriptor>,
    pub entries: Vec<Vec<Radical>>,
}

/// A transcribed (or exported) table with parsed entries.
#[derive(Clone, Debug)]
pub struct ReferenceTable {
    pub n: usize,
    pub f1: Partition,
    pub f2: Partition,
    pub moved: usize,
    pub caption: String,
    pub known_issue: Option<String>,
    pub errata: Vec<String>,
    pub parent_basis: Option<ParentBasis>,
    pub rows: Vec<Descriptor>,
    pub blocks: Vec<RefBlock>,
    /// entries[r][c]
    pub entries: Vec<Vec<Radical>>,
}

fn parse_grid(grid: &[Vec<String>], what: &str) -> Result<Vec<Vec<Radical>>> {
    let width = grid.first().map(|r| r.len()).unwrap_or(0);
    grid.iter()
        .enumerate()
        .map(|(i, row)| {
            if row.len() != width {
                return Err(Error::parse(
                    0,
                    format!("{what}: row {} has {} entries, expected {width}", i + 1, row.len()),
                ));
            }
            row.iter()
                .enumerate()
                .map(|(j, s)| {
                    parse_radical_expr(s).map_err(|e| match e {
                        Error::Parse { pos, msg } => {
                            Error::parse(pos, format!("{what}[{}][{}] {s:?}: {msg}", i + 1, j + 1))
                        }
                        e => e,
                    })
                })
                .collect()
        })
        .collect()
}

fn parse_partition(s: &str) -> Result<Partition> {
    s.parse().map_err(|_| Error::parse(0, format!("bad partition {s:?}")))
}

impl ReferenceTable {
    pub fn from_json_value(j: &ReferenceJson) -> Result<ReferenceTable> {
        let f1 = parse_partition(&j.f1)?;
        let f2 = parse_partition(&j.f2)?;
        if f1.n() + f2.n() != j.n || f2.n() != j.moved {
            return Err(Error::KeyMismatch(format!("n={} does not fit {} x {} moving {}", j.n, j.f1, j.f2, j.moved)));
        }
        let rows: Vec<Descriptor> = j.rows.iter().map(|s| s.parse()).collect::<Result<_>>()?;
        let entries = parse_grid(&j.entries, "entries")?;
        if entries.len() != rows.len() {
            return Err(Error::parse(0, format!("{} rows of entries for {} descriptors", entries.len(), rows.len())));
        }
        let mut blocks = Vec::new();
        let mut start = 0;
        for b in &j.blocks {
            blocks.push(RefBlock {
                target: parse_partition(&b.target)?,
                copies: b.copies.max(1),
                width: b.width,
                start,
            });
            start += b.width;
        }
        let cols = entries.first().map(|r| r.len()).unwrap_or(0);
        if start != cols {
            return Err(Error::parse(0, format!("block widths sum to {start}, table has {cols} columns")));
        }
        let parent_basis = match &j.parent_basis {
            Some(pb) => Some(ParentBasis {
                rows: pb.rows.iter().map(|s| s.parse()).collect::<Result<_>>()?,
                entries: parse_grid(&pb.entries, "parent_basis")?,
            }),
            None => None,
        };
        Ok(ReferenceTable {
            n: j.n,
            f1,
            f2,
            moved: j.moved,
            caption: j.caption.clone(),
            known_issue: j.known_issue.clone(),
            errata: j.errata.clone(),
            parent_basis,
            rows,
            blocks,
            entries,
        })
    }

    pub fn from_json(text: &str) -> Result<ReferenceTable> {
        let j: ReferenceJson = serde_json::from_str(text).map_err(|e| Error::parse(e.column(), e.to_string()))?;
        ReferenceTable::from_json_value(&j)
    }

    pub fn load(path: &Path) -> Result<ReferenceTable> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        ReferenceTable::from_json(&text)
    }

    pub fn key(&self) -> String {
        format!("n{}_{}_x_{}", self.n, self.f1, self.f2)
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map(|r| r.len()).unwrap_or(0)
    }

    /// Unit-norm word-space states of the reference rows.
    pub fn realize_rows(&self, engine: &Engine) -> Result<Vec<RadicalState>> {
        let comps = self.parent_components(engine)?;
        self.rows
            .iter()
            .map(|d| {
                let size: usize = d.groups.iter().map(Group::len).sum();
                if size != self.n {
                    return Err(Error::RowAlign(format!(
                        "descriptor {d} covers {size} labels, table has n={}",
                        self.n
                    )));
                }
                realize(d, Some(&comps)).and_then(|s| normalize(s, &d.to_string()))
            })
            .collect()
    }

    /// Parent components on canonical labels 1..n1.
    fn parent_components(&self, engine: &Engine) -> Result<Vec<RadicalState>> {
        if self.f1.is_row() || self.f1.is_column() {
            return Ok(Vec::new());
        }
        match &self.parent_basis {
            Some(pb) => {
                let rows: Vec<RadicalState> = pb
                    .rows
                    .iter()
                    .map(|d| realize(d, None).and_then(|s| normalize(s, &d.to_string())))
                    .collect::<Result<_>>()?;
                let k = pb.entries.first().map(|r| r.len()).unwrap_or(0);
                (0..k)
                    .map(|c| {
                        let mut acc = RadicalState::new();
                        for (row, e) in rows.iter().zip(&pb.entries) {
                            add_scaled(&mut acc, row, &e[c]);
                        }
                        Ok(acc)
                    })
                    .collect()
            }
            None => {
                let b = engine.basis(&self.f1)?;
                b.vectors
                    .iter()
                    .map(|v| Ok(radical_state(v, &Radical::canonicalize(Rational::one(), v.norm2().recip())?)))
                    .collect()
            }
        }
    }
}

fn realize(d: &Descriptor, comps: Option<&[RadicalState]>) -> Result<RadicalState> {
    let mut labels: Vec<u8> = d
        .groups
        .iter()
        .flat_map(|g| match g {
            Group::Label(l) => vec![*l],
            Group::Sym(l) | Group::Anti(l) | Group::Component(_, l) => l.clone(),
        })
        .collect();
    labels.sort_unstable();
    if labels.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::RowAlign(format!("descriptor {d} repeats a label")));
    }
    let one = Radical::from_rational(Rational::one());
    let mut acc: RadicalState = [(Word::new(&[])?, RadicalSum::from(&one))].into_iter().collect();
    for g in &d.groups {
        let part = match g {
            Group::Label(l) => radical_state(&WordVector::from_word(Word::new(&[*l])?), &one),
            Group::Sym(l) => radical_state(&symmetrize_set(l)?, &one),
            Group::Anti(l) => radical_state(&antisymmetrize_set(l)?, &one),
            Group::Component(k, l) => {
                let comps =
                    comps.ok_or_else(|| Error::RowAlign(format!("component group in {d} needs a parent shape")))?;
                let c = comps.get(k - 1).ok_or_else(|| Error::RowAlign(format!("{d}: parent has no component {k}")))?;
                let mut out = RadicalState::new();
                for (w, x) in c {
                    if w.len() != l.len() || w.labels().iter().any(|&x| x as usize > l.len()) {
                        return Err(Error::RowAlign(format!("{d}: component spans {} labels", w.len())));
                    }
                    out.insert(w.relabel(l), x.clone());
                }
                out
            }
        };
        acc = tensor(&acc, &part);
    }
    Ok(acc)
}

/// Corpus directory: `SN_DATA_DIR` if set, else the data bundled with the
/// crate.
pub fn data_dir() -> PathBuf {
    std::env::var_os("SN_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data")))
}

/// Every `*.json` reference under `dir`, sorted by file name. Symlinks that
/// resolve to an already listed file are skipped.
pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().map(|x| x == "json").unwrap_or(false))
        .collect();
    files.sort();
    let mut seen = std::collections::BTreeSet::new();
    files.retain(|p| seen.insert(std::fs::canonicalize(p).unwrap_or_else(|_| p.clone())));
    Ok(files)
}
