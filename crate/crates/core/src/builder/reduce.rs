use std::collections::BTreeMap;

use num_traits::Zero;

use super::product::ProductBasis;
use crate::combinatorics::{enumerate_syt, lambda_eigenvalue, outer_decompose, Partition};
use crate::error::{Error, Result};
use crate::exact::{kernel, normalize_sign, primitive, Rational, RationalMatrix};
use crate::wordspace::{class_sum_apply, inner, young_operator_apply};

/// Unnormalized P matrix M_ij = ⟨row_i, P row_j⟩ and the row norms N_i.
/// The matrix on normalized rows is M_ij/√(N_i N_j).
pub fn p_matrix(basis: &ProductBasis) -> (RationalMatrix, Vec<Rational>) {
    let images: Vec<_> = basis.states.iter().map(class_sum_apply).collect();
    let k = basis.len();
    let mut m = RationalMatrix::zeros(k, k);
    for i in 0..k {
        for (j, img) in images.iter().enumerate() {
            m.set(i, j, inner(&basis.states[i], img));
        }
    }
    let norms = (0..k).map(|i| basis.norm(i).clone()).collect();
    (m, norms)
}

/// Matrix of the label transposition (a,b) in row coordinates:
/// T_ij = ⟨row_i, (a b) row_j⟩ / N_i.
pub fn transposition_matrix(basis: &ProductBasis, a: u8, b: u8) -> RationalMatrix {
    let k = basis.len();
    let mut t = RationalMatrix::zeros(k, k);
    for j in 0..k {
        let img = basis.states[j].map_words(|w| w.swap_labels(a, b));
        for i in 0..k {
            let x = inner(&basis.states[i], &img);
            if !x.is_zero() {
                t.set(i, j, x / basis.norm(i));
            }
        }
    }
    t
}

/// Eigenspace for one Λ together with the targets it must contain.
#[derive(Clone, Debug)]
pub struct Eigenspace {
    pub lambda: i64,
    pub vectors: Vec<Vec<Rational>>,
    /// (target, multiplicity) in canonical order.
    pub targets: Vec<(Partition, usize)>,
}

/// Splits the row space of `basis` by the eigenvalues predicted for the
/// outer product, in descending Λ.
pub fn eigensplit(basis: &ProductBasis, m: &RationalMatrix, norms: &[Rational]) -> Result<Vec<Eigenspace>> {
    let mut by_lambda: BTreeMap<i64, Vec<(Partition, usize)>> = BTreeMap::new();
    for (f, mult) in outer_decompose(&basis.f1, &basis.attach).entries() {
        by_lambda.entry(lambda_eigenvalue(&f)).or_default().push((f, mult));
    }
    let mut out = Vec::new();
    let mut total = 0;
    for (lambda, targets) in by_lambda.into_iter().rev() {
        let mut shifted = m.clone();
        for (i, n) in norms.iter().enumerate() {
            let v = shifted.get(i, i) - Rational::from_integer(lambda.into()) * n;
            shifted.set(i, i, v);
        }
        let vectors = kernel(&shifted);
        total += vectors.len();
        out.push(Eigenspace { lambda, vectors, targets });
    }
    if total != basis.len() {
        return Err(Error::UnexplainedEigenvalue(format!(
            "{}⊗{}: candidate eigenspaces cover {} of {} dimensions",
            basis.f1,
            basis.attach,
            total,
            basis.len()
        )));
    }
    Ok(out)
}

/// Incrementally grown span kept in echelon form (each stored vector is zero
/// at the pivots of the earlier ones).
#[derive(Clone, Debug, Default)]
pub struct Span {
    vectors: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Span {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.vectors
    }

    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut v = v.to_vec();
        for (b, &p) in self.vectors.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let c = &v[p] / &b[p];
                for (x, y) in v.iter_mut().zip(b) {
                    if !y.is_zero() {
                        *x -= &c * y;
                    }
                }
            }
        }
        v
    }

    /// Adds v if it is independent; returns whether it was added.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let r = self.reduce(v);
        match r.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.vectors.push(primitive(&r));
                self.pivots.push(p);
                true
            }
            None => false,
        }
    }
}

/// Smallest subspace containing `seeds` and stable under the given matrices.
pub fn closure(seeds: &[Vec<Rational>], generators: &[RationalMatrix]) -> Span {
    let mut span = Span::new();
    let mut queue: Vec<Vec<Rational>> = Vec::new();
    for s in seeds {
        if span.insert(s) {
            queue.push(span.vectors.last().unwrap().clone());
        }
    }
    while let Some(v) = queue.pop() {
        for g in generators {
            let w = g.mul_vec(&v);
            if span.insert(&w) {
                queue.push(span.vectors.last().unwrap().clone());
            }
        }
    }
    span
}

/// Vectors in span(space) orthogonal to every vector of `against` under the
/// diagonal Gram matrix `norms`.
pub fn complement(space: &[Vec<Rational>], against: &[Vec<Rational>], norms: &[Rational]) -> Vec<Vec<Rational>> {
    if against.is_empty() {
        return space.to_vec();
    }
    let g = RationalMatrix::from_rows(
        against.iter().map(|b| space.iter().map(|e| gram_dot(b, e, norms)).collect()).collect(),
    );
    kernel(&g)
        .into_iter()
        .map(|a| {
            let mut x = vec![Rational::zero(); norms.len()];
            for (ak, e) in a.iter().zip(space) {
                if !ak.is_zero() {
                    for (xi, ei) in x.iter_mut().zip(e) {
                        *xi += ak * ei;
                    }
                }
            }
            primitive(&x)
        })
        .collect()
}

pub fn gram_dot(a: &[Rational], b: &[Rational], norms: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for ((x, y), n) in a.iter().zip(b).zip(norms) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y * n;
        }
    }
    acc
}

/// Removes from v its Gram-orthogonal projection onto the span of the
/// mutually orthogonal vectors `basis`.
fn project_out(v: &[Rational], basis: &[(Vec<Rational>, Rational)], norms: &[Rational]) -> Vec<Rational> {
    let mut u = v.to_vec();
    for (b, nb) in basis {
        let c = gram_dot(v, b, norms) / nb;
        if !c.is_zero() {
            for (x, y) in u.iter_mut().zip(b) {
                *x -= &c * y;
            }
        }
    }
    u
}

/// Fillings tried, in order, for the Young operator of `f`: the fixed choices
/// for the degenerate S_6 cases first, then every standard tableau.
pub fn fillings(f: &Partition) -> Vec<Vec<Vec<u8>>> {
    let fixed: &[(&[usize], &[&[u8]])] = &[
        (&[3, 3], &[&[1, 2, 3], &[4, 5, 6]]),
        (&[4, 1, 1], &[&[1, 2, 3, 6], &[4], &[5]]),
        (&[2, 2, 2], &[&[1, 3], &[2, 5], &[4, 6]]),
        (&[3, 1, 1, 1], &[&[1, 2, 6], &[3], &[4], &[5]]),
    ];
    let mut out: Vec<Vec<Vec<u8>>> = Vec::new();
    for (shape, rows) in fixed {
        if f.parts() == *shape {
            out.push(rows.iter().map(|r| r.to_vec()).collect());
        }
    }
    for y in enumerate_syt(f) {
        let t: Vec<Vec<u8>> = y.tableau().iter().map(|r| r.iter().map(|&l| l as u8).collect()).collect();
        if !out.contains(&t) {
            out.push(t);
        }
    }
    out
}

/// Row coordinates of Y·v for each v, dropping zero images.
fn young_images(
    basis: &ProductBasis,
    f: &Partition,
    filling: &[Vec<u8>],
    vectors: &[Vec<Rational>],
) -> Result<Vec<Vec<Rational>>> {
    let mut out = Vec::new();
    for v in vectors {
        let state = basis.realize(v);
        let y = young_operator_apply(f, filling, &state)?;
        if !y.is_zero() {
            out.push(primitive(&basis.coordinates(&y)));
        }
    }
    Ok(out)
}

/// One resolved block: a single copy of `target`, as row-coordinate vectors.
#[derive(Clone, Debug)]
pub struct Block {
    pub target: Partition,
    pub copy: usize,
    pub vectors: Vec<Vec<Rational>>,
}

/// Splits an eigenspace into one block per copy of each target. Targets
/// other than the last are found as the transposition closure of their Young
/// operator image; the last target takes the orthogonal complement.
pub fn resolve_degeneracy(
    basis: &ProductBasis,
    space: &Eigenspace,
    norms: &[Rational],
    generators: &[RationalMatrix],
) -> Result<Vec<Block>> {
    let mut blocks = Vec::new();
    let mut found: Vec<Vec<Rational>> = Vec::new();
    let last = space.targets.len() - 1;
    for (t, (f, mult)) in space.targets.iter().enumerate() {
        let want = mult * crate::combinatorics::dimension(f) as usize;
        let iso: Vec<Vec<Rational>> = if t == last {
            complement(&space.vectors, &found, norms)
        } else {
            let mut span = None;
            for filling in fillings(f) {
                let imgs = young_images(basis, f, &filling, &space.vectors)?;
                if !imgs.is_empty() {
                    span = Some(closure(&imgs, generators));
                    break;
                }
            }
            let span = span.ok_or_else(|| {
                Error::ProjectionNull(format!("every Young operator of {f} kills the Λ={} space", space.lambda))
            })?;
            span.vectors().to_vec()
        };
        if iso.len() != want {
            return Err(Error::BlockDim(format!(
                "{}⊗{}: block {f} has dimension {}, expected {want}",
                basis.f1,
                basis.attach,
                iso.len()
            )));
        }
        found.extend(iso.iter().cloned());
        if *mult == 1 {
            blocks.push(Block { target: f.clone(), copy: 0, vectors: iso });
        } else {
            blocks.extend(split_copies(basis, f, *mult, &iso, norms, generators)?);
        }
    }
    Ok(blocks)
}

/// Separates an isotypic block holding `mult` copies of f into mutually
/// orthogonal irreducible copies.
fn split_copies(
    basis: &ProductBasis,
    f: &Partition,
    mult: usize,
    iso: &[Vec<Rational>],
    norms: &[Rational],
    generators: &[RationalMatrix],
) -> Result<Vec<Block>> {
    let dim = crate::combinatorics::dimension(f) as usize;
    let mut out = Vec::new();
    let mut done: Vec<(Vec<Rational>, Rational)> = Vec::new();
    let mut done_vectors: Vec<Vec<Rational>> = Vec::new();
    for copy in 0..mult {
        let rest = complement(iso, &done_vectors, norms);
        let vectors = if copy + 1 == mult {
            rest
        } else {
            let mut seed = None;
            'search: for filling in fillings(f) {
                for img in young_images(basis, f, &filling, &rest)? {
                    let p = project_out(&img, &done, norms);
                    if p.iter().any(|x| !x.is_zero()) {
                        seed = Some(primitive(&p));
                        break 'search;
                    }
                }
            }
            let seed =
                seed.ok_or_else(|| Error::ProjectionNull(format!("no Young image left for copy {} of {f}", copy + 1)))?;
            closure(&[seed], generators).vectors().to_vec()
        };
        if vectors.len() != dim {
            return Err(Error::BlockDim(format!(
                "copy {} of {f} has dimension {}, expected {dim}",
                copy + 1,
                vectors.len()
            )));
        }
        for (v, n) in crate::exact::gram_schmidt_with(&vectors, |a, b| gram_dot(a, b, norms))? {
            done_vectors.push(v.clone());
            done.push((v, n));
        }
        out.push(Block { target: f.clone(), copy, vectors });
    }
    Ok(out)
}

/// Orthogonal basis of a block in the row Gram metric, each vector scaled to
/// a primitive integer vector whose first nonzero entry is positive.
pub fn orthogonalize(vectors: &[Vec<Rational>], norms: &[Rational]) -> Result<Vec<(Vec<Rational>, Rational)>> {
    let mut out = crate::exact::gram_schmidt_with(vectors, |a, b| gram_dot(a, b, norms))?;
    for (v, _) in out.iter_mut() {
        normalize_sign(v);
    }
    Ok(out)
}

/// M c = λ N c, checked exactly.
pub fn is_eigenvector(m: &RationalMatrix, norms: &[Rational], c: &[Rational], lambda: i64) -> bool {
    let mc = m.mul_vec(c);
    let l = Rational::from_integer(lambda.into());
    mc.iter().zip(c).zip(norms).all(|((x, y), n)| *x == &l * y * n)
}
