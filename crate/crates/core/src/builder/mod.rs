//! Recursive construction of irreducible bases and fractional-parentage
//! tables. The irreducible basis of [f] on n labels is the [f] block of the
//! table parent(f) ⊗ [1], so bases and tables are built together through the
//! shared [`Engine`] cache.

mod product;
mod reduce;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{Signed, Zero};

pub use product::{attach_sets, parent_relabel, ProductBasis, RowDescriptor};
pub use reduce::{
    closure, complement, eigensplit, fillings, gram_dot, is_eigenvector, orthogonalize, p_matrix, resolve_degeneracy,
    transposition_matrix, Block, Eigenspace, Span,
};

use crate::combinatorics::{conjugate, dimension, lambda_eigenvalue, partitions, Partition};
use crate::error::{Error, Result};
use crate::exact::{Radical, Rational, RationalMatrix};
use crate::wordspace::{Word, WordVector, MAX_SLOTS};

/// Largest n accepted when a task runs in strict mode.
pub const STRICT_MAX_N: usize = 6;

/// One copy of [f] on labels 1..n, slots 1..n. Vectors are unnormalized,
/// pairwise orthogonal, with primitive integer coefficients.
#[derive(Clone, Debug)]
pub struct IrrepBasis {
    pub f: Partition,
    pub vectors: Vec<WordVector>,
}

impl IrrepBasis {
    pub fn n(&self) -> usize {
        self.f.n()
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn norm(&self, i: usize) -> &Rational {
        self.vectors[i].norm2()
    }

    /// Matrix of a label permutation (perm[l-1] = image) in unnormalized
    /// coordinates: R_ij = ⟨v_i, g v_j⟩ / N_i.
    pub fn action_matrix(&self, perm: &[u8]) -> RationalMatrix {
        let d = self.dim();
        let mut r = RationalMatrix::zeros(d, d);
        for j in 0..d {
            let img = crate::wordspace::apply_permutation(&self.vectors[j], perm);
            for i in 0..d {
                let x = crate::wordspace::inner(&self.vectors[i], &img);
                if !x.is_zero() {
                    r.set(i, j, x / self.norm(i));
                }
            }
        }
        r
    }

    /// Trace of a label permutation on this copy.
    pub fn character(&self, perm: &[u8]) -> Rational {
        (0..self.dim())
            .map(|i| {
                let img = crate::wordspace::apply_permutation(&self.vectors[i], perm);
                crate::wordspace::inner(&self.vectors[i], &img) / self.norm(i)
            })
            .sum()
    }
}

/// The reduction f1 ⊗ attach on n = |f1| + |attach| labels.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ReductionTask {
    pub f1: Partition,
    pub attach: Partition,
    /// Reject n above [`STRICT_MAX_N`].
    pub strict: bool,
}

impl ReductionTask {
    pub fn new(f1: Partition, attach: Partition) -> Self {
        ReductionTask { f1, attach, strict: true }
    }

    pub fn n(&self) -> usize {
        self.f1.n() + self.attach.n()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Column {
    pub target: Partition,
    pub copy: usize,
    pub component: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BlockInfo {
    pub target: Partition,
    pub lambda: i64,
    pub copies: usize,
    pub start: usize,
    pub width: usize,
}

/// Orthonormal change of basis from the product basis (rows) to target
/// components (columns).
#[derive(Clone, Debug)]
pub struct CfpTable {
    pub n: usize,
    pub f1: Partition,
    pub attach: Partition,
    pub rows: Vec<RowDescriptor>,
    pub row_states: Vec<WordVector>,
    pub columns: Vec<Column>,
    /// Column coefficient vectors over the rows, primitive integers.
    pub coeffs: Vec<Vec<Rational>>,
    /// Σ_r c_r² N_r for each column.
    pub col_norms: Vec<Rational>,
    /// entries[r][c]
    pub entries: Vec<Vec<Radical>>,
    pub blocks: Vec<BlockInfo>,
    /// (Λ, eigenspace dimension), descending Λ.
    pub spectrum: Vec<(i64, usize)>,
}

impl CfpTable {
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn row_norm(&self, r: usize) -> &Rational {
        self.row_states[r].norm2()
    }

    /// Unnormalized word-space state of column c; its squared norm is
    /// col_norms[c].
    pub fn column_state(&self, c: usize) -> WordVector {
        let mut acc = crate::wordspace::Accumulator::new(self.n);
        for (state, x) in self.row_states.iter().zip(&self.coeffs[c]) {
            acc.add_vector(state, x);
        }
        acc.finish()
    }

    pub fn block(&self, target: &Partition, copy: usize) -> Option<std::ops::Range<usize>> {
        let b = self.blocks.iter().find(|b| &b.target == target)?;
        if copy >= b.copies {
            return None;
        }
        let d = b.width / b.copies;
        Some(b.start + copy * d..b.start + (copy + 1) * d)
    }

    /// Eigenvalues with multiplicity, descending.
    pub fn eigenvalues(&self) -> Vec<i64> {
        self.spectrum.iter().flat_map(|&(l, d)| std::iter::repeat(l).take(d)).collect()
    }
}

impl fmt::Display for CfpTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} x {} (n={})", self.f1, self.attach, self.n)?;
        let heads: Vec<String> = self
            .columns
            .iter()
            .map(|c| {
                let b = self.blocks.iter().find(|b| b.target == c.target).unwrap();
                if b.copies > 1 {
                    format!("{}#{}_{}", c.target, c.copy + 1, c.component + 1)
                } else {
                    format!("{}_{}", c.target, c.component + 1)
                }
            })
            .collect();
        let cells: Vec<Vec<String>> = self.entries.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        let lw = self.rows.iter().map(|r| r.to_string().len()).max().unwrap_or(0);
        let widths: Vec<usize> = (0..heads.len())
            .map(|c| cells.iter().map(|r| r[c].len()).chain([heads[c].len()]).max().unwrap_or(0))
            .collect();
        write!(f, "{:lw$}", "")?;
        for (h, w) in heads.iter().zip(&widths) {
            write!(f, "  {h:>w$}")?;
        }
        writeln!(f)?;
        for (row, cs) in self.rows.iter().zip(&cells) {
            write!(f, "{:lw$}", row.to_string())?;
            for (x, w) in cs.iter().zip(&widths) {
                write!(f, "  {x:>w$}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Parent used to build [f]: drop the last box of the last row when
/// f ≥ f̃ lexicographically, otherwise the bottom box of the last column.
pub fn parent(f: &Partition) -> Partition {
    let mut parts = f.parts().to_vec();
    if f.parts() >= conjugate(f).parts() {
        *parts.last_mut().unwrap() -= 1;
    } else {
        let top = parts[0];
        let i = parts.iter().rposition(|&p| p == top).unwrap();
        parts[i] -= 1;
    }
    parts.retain(|&p| p > 0);
    Partition::from_parts(&parts)
}

type Slot<T> = Arc<OnceLock<Result<Arc<T>>>>;
type BasisSet = Arc<BTreeMap<Partition, IrrepBasis>>;

/// Shared cache of irreducible bases (per n) and reduction tables. Safe for
/// concurrent use; each entry is computed once.
pub struct Engine {
    bases: Vec<OnceLock<Result<BasisSet>>>,
    tables: Mutex<HashMap<(Partition, Partition), Slot<CfpTable>>>,
}

impl Default for Engine {
    fn default() -> Self {
        Self::new()
    }
}

impl Engine {
    pub fn new() -> Self {
        Engine { bases: (0..=MAX_SLOTS).map(|_| OnceLock::new()).collect(), tables: Mutex::new(HashMap::new()) }
    }

    pub fn shared() -> &'static Engine {
        static ENGINE: OnceLock<Engine> = OnceLock::new();
        ENGINE.get_or_init(Engine::new)
    }

    /// Bases for every partition of n.
    pub fn bases(&self, n: usize) -> Result<Arc<BTreeMap<Partition, IrrepBasis>>> {
        if n == 0 || n > MAX_SLOTS {
            return Err(Error::Size(format!("n={n} outside 1..={MAX_SLOTS}")));
        }
        self.bases[n].get_or_init(|| build_irrep_bases_with(self, n).map(Arc::new)).clone()
    }

    pub fn basis(&self, f: &Partition) -> Result<IrrepBasis> {
        let all = self.bases(f.n())?;
        Ok(all[f].clone())
    }

    pub fn table(&self, task: &ReductionTask) -> Result<Arc<CfpTable>> {
        let n = task.n();
        if task.f1.is_empty() || task.attach.is_empty() {
            return Err(Error::Size("both factors need at least one box".into()));
        }
        if task.strict && n > STRICT_MAX_N {
            return Err(Error::Size(format!("n={n} exceeds {STRICT_MAX_N} in strict mode")));
        }
        if n > MAX_SLOTS {
            return Err(Error::Size(format!("n={n} exceeds {MAX_SLOTS}")));
        }
        let slot = {
            let mut map = self.tables.lock().expect("table cache poisoned");
            map.entry((task.f1.clone(), task.attach.clone())).or_default().clone()
        };
        slot.get_or_init(|| extract_cfp_table_with(self, task).map(Arc::new)).clone()
    }
}

/// Bases for every partition of n, using the shared engine.
pub fn build_irrep_bases(n: usize) -> Result<Arc<BTreeMap<Partition, IrrepBasis>>> {
    Engine::shared().bases(n)
}

fn build_irrep_bases_with(engine: &Engine, n: usize) -> Result<BTreeMap<Partition, IrrepBasis>> {
    let mut out = BTreeMap::new();
    if n == 1 {
        let f = Partition::row(1);
        out.insert(f.clone(), IrrepBasis { f, vectors: vec![WordVector::from_word(Word::new(&[1])?)] });
        return Ok(out);
    }
    for f in partitions(n) {
        let mut task = ReductionTask::new(parent(&f), Partition::row(1));
        task.strict = false;
        let table = engine.table(&task)?;
        let range = table.block(&f, 0).expect("target present in its parent reduction");
        let mut vectors: Vec<WordVector> = range.map(|c| primitive_vector(&table.column_state(c))).collect();
        if vectors.len() == 1 {
            let id = Word::new(&(1..=n as u8).collect::<Vec<_>>())?;
            if vectors[0].coeff(&id).is_negative() {
                vectors[0] = vectors[0].scale(&crate::exact::q(-1));
            }
        }
        out.insert(f.clone(), IrrepBasis { f, vectors });
    }
    Ok(out)
}

fn primitive_vector(v: &WordVector) -> WordVector {
    let (words, coeffs): (Vec<Word>, Vec<Rational>) = v.terms().map(|(w, c)| (*w, c.clone())).unzip();
    let p = crate::exact::primitive(&coeffs);
    WordVector::from_terms(v.n(), words.into_iter().zip(p))
}

/// Rows of f1 ⊗ attach in the canonical order: parent component outermost,
/// attach component next, attach set innermost.
pub fn assemble_product_basis(task: &ReductionTask) -> Result<ProductBasis> {
    assemble_with(Engine::shared(), task)
}

fn assemble_with(engine: &Engine, task: &ReductionTask) -> Result<ProductBasis> {
    let n = task.n();
    if task.strict && n > STRICT_MAX_N {
        return Err(Error::Size(format!("n={n} exceeds {STRICT_MAX_N} in strict mode")));
    }
    let pb = engine.basis(&task.f1)?;
    let ab = engine.basis(&task.attach)?;
    let n1 = task.f1.n();
    let n2 = task.attach.n();
    let sets = attach_sets(n, n2);
    let mut rows = Vec::new();
    let mut states = Vec::new();
    for (pc, pv) in pb.vectors.iter().enumerate() {
        for (ac, av) in ab.vectors.iter().enumerate() {
            for set in &sets {
                let plabels = parent_relabel(n, set);
                let mut pmap: Vec<u8> = (1..=MAX_SLOTS as u8).collect();
                pmap[..n1].copy_from_slice(&plabels);
                let mut amap: Vec<u8> = (1..=MAX_SLOTS as u8).collect();
                amap[..n2].copy_from_slice(set);
                let left = crate::wordspace::apply_permutation(pv, &pmap);
                let right = crate::wordspace::apply_permutation(av, &amap);
                states.push(left.tensor(&right));
                rows.push(RowDescriptor {
                    parent_shape: task.f1.clone(),
                    parent_component: pc,
                    parent_labels: plabels,
                    attach_shape: task.attach.clone(),
                    attach_component: ac,
                    attach_labels: set.clone(),
                });
            }
        }
    }
    Ok(ProductBasis { n, f1: task.f1.clone(), attach: task.attach.clone(), rows, states })
}

/// Builds the table through the shared engine cache.
pub fn extract_cfp_table(task: &ReductionTask) -> Result<Arc<CfpTable>> {
    Engine::shared().table(task)
}

fn adjacent_generators(basis: &ProductBasis) -> Vec<RationalMatrix> {
    (1..basis.n as u8).map(|k| transposition_matrix(basis, k, k + 1)).collect()
}

fn extract_cfp_table_with(engine: &Engine, task: &ReductionTask) -> Result<CfpTable> {
    let basis = assemble_with(engine, task)?;
    let (m, norms) = p_matrix(&basis);
    let spaces = eigensplit(&basis, &m, &norms)?;
    let needs_generators = spaces.iter().any(|s| s.targets.len() > 1 || s.targets[0].1 > 1);
    let generators = if needs_generators { adjacent_generators(&basis) } else { Vec::new() };

    let mut columns = Vec::new();
    let mut coeffs = Vec::new();
    let mut col_norms = Vec::new();
    let mut blocks_info = Vec::new();
    let mut spectrum = Vec::new();
    for space in &spaces {
        spectrum.push((space.lambda, space.vectors.len()));
        let blocks = if space.targets.len() == 1 && space.targets[0].1 == 1 {
            let f = &space.targets[0].0;
            if space.vectors.len() != dimension(f) as usize {
                return Err(Error::BlockDim(format!(
                    "{}⊗{}: Λ={} space has dimension {}, expected {}",
                    task.f1,
                    task.attach,
                    space.lambda,
                    space.vectors.len(),
                    dimension(f)
                )));
            }
            vec![Block { target: f.clone(), copy: 0, vectors: space.vectors.clone() }]
        } else {
            resolve_degeneracy(&basis, space, &norms, &generators)?
        };
        let mut ordered: Vec<&Block> = blocks.iter().collect();
        ordered.sort_by(|a, b| a.target.canonical_cmp(&b.target).then(a.copy.cmp(&b.copy)));
        for block in ordered {
            if block.copy == 0 {
                let copies = space.targets.iter().find(|(f, _)| f == &block.target).map(|t| t.1).unwrap();
                blocks_info.push(BlockInfo {
                    target: block.target.clone(),
                    lambda: space.lambda,
                    copies,
                    start: columns.len(),
                    width: copies * dimension(&block.target) as usize,
                });
            }
            for (k, (v, nv)) in orthogonalize(&block.vectors, &norms)?.into_iter().enumerate() {
                columns.push(Column { target: block.target.clone(), copy: block.copy, component: k });
                coeffs.push(v);
                col_norms.push(nv);
            }
        }
    }
    let size = basis.len();
    let mut entries = vec![vec![Radical::zero(); size]; size];
    for (c, (v, nv)) in coeffs.iter().zip(&col_norms).enumerate() {
        for r in 0..size {
            entries[r][c] = Radical::canonicalize(v[r].clone(), &norms[r] / nv)?;
        }
    }
    Ok(CfpTable {
        n: basis.n,
        f1: basis.f1,
        attach: basis.attach,
        rows: basis.rows,
        row_states: basis.states,
        columns,
        coeffs,
        col_norms,
        entries,
        blocks: blocks_info,
        spectrum,
    })
}

/// Λ of every target column, in column order.
pub fn column_lambdas(table: &CfpTable) -> Vec<i64> {
    table.columns.iter().map(|c| lambda_eigenvalue(&c.target)).collect()
}
