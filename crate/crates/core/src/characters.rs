//! Characters of S_n, Kronecker multiplicities, isotypic projectors over the
//! word space and inner-product Clebsch-Gordan coefficients.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::builder::{Engine, IrrepBasis};
use crate::combinatorics::{dimension, factorial, partitions, DecompositionMultiset, Partition};
use crate::error::{Error, Result};
use crate::exact::{kernel, primitive, Radical, RadicalSum, Rational, RationalMatrix};
use crate::wordspace::{inner, permutations_of, Word, WordVector};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConjugacyClass {
    pub cycle_type: Partition,
    pub size: u128,
}

/// Classes of S_n starting from the identity, i.e. reverse canonical order
/// of cycle types: (1³),(2,1),(3) for n=3.
pub fn conjugacy_classes(n: usize) -> Vec<ConjugacyClass> {
    let mut ps = partitions(n);
    ps.reverse();
    ps.into_iter()
        .map(|c| {
            let size = factorial(n) / centralizer_order(&c);
            ConjugacyClass { cycle_type: c, size }
        })
        .collect()
}

fn centralizer_order(c: &Partition) -> u128 {
    let mut counts: BTreeMap<usize, u32> = BTreeMap::new();
    for &p in c.parts() {
        *counts.entry(p).or_default() += 1;
    }
    counts.iter().map(|(&k, &m)| (k as u128).pow(m) * factorial(m as usize)).product()
}

/// A permutation (image list, perm[l-1]) with the given cycle type, cycles on
/// consecutive labels.
pub fn class_representative(c: &Partition) -> Vec<u8> {
    let mut perm = Vec::with_capacity(c.n());
    let mut start = 1u8;
    for &len in c.parts() {
        for k in 0..len as u8 {
            perm.push(if k + 1 == len as u8 { start } else { start + k + 1 });
        }
        start += len as u8;
    }
    perm
}

pub fn cycle_type(perm: &[u8]) -> Partition {
    let mut seen = vec![false; perm.len()];
    let mut parts = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut k = s;
        while !seen[k] {
            seen[k] = true;
            k = perm[k] as usize - 1;
            len += 1;
        }
        parts.push(len);
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Partition::new(parts).expect("cycle lengths form a partition")
}

/// χ_f on the class `c` by Murnaghan-Nakayama on the beta-set of f.
pub fn mn_character(f: &Partition, c: &Partition) -> i64 {
    assert_eq!(f.n(), c.n(), "shape and class must have the same n");
    let len = f.len();
    let beta: Vec<usize> = (0..len).map(|i| f.part(i) + len - 1 - i).collect();
    mn_rec(&beta, c.parts())
}

fn mn_rec(beta: &[usize], cycles: &[usize]) -> i64 {
    let Some((&r, rest)) = cycles.split_first() else { return 1 };
    let mut total = 0;
    for (i, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let between = beta.iter().filter(|&&x| x > b - r && x < b).count();
        let mut next = beta.to_vec();
        next[i] = b - r;
        let sign = if between % 2 == 0 { 1 } else { -1 };
        total += sign * mn_rec(&next, rest);
    }
    total
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CharacterTable {
    pub n: usize,
    pub classes: Vec<ConjugacyClass>,
    /// Characters in class order, keyed by irrep.
    pub rows: BTreeMap<Partition, Vec<i64>>,
}

impl CharacterTable {
    pub fn chi(&self, f: &Partition, class: usize) -> i64 {
        self.rows[f][class]
    }

    pub fn class_index(&self, c: &Partition) -> Option<usize> {
        self.classes.iter().position(|k| &k.cycle_type == c)
    }

    /// CSV keyed by cycle type; irreps in canonical order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("irrep");
        for c in &self.classes {
            out.push_str(&format!(",\"{}\"", c.cycle_type));
        }
        out.push('\n');
        for f in partitions(self.n) {
            out.push_str(&format!("\"{f}\""));
            for x in &self.rows[&f] {
                out.push_str(&format!(",{x}"));
            }
            out.push('\n');
        }
        out
    }
}

pub fn character_table(n: usize) -> CharacterTable {
    let classes = conjugacy_classes(n);
    let rows = partitions(n)
        .into_iter()
        .map(|f| {
            let r = classes.iter().map(|c| mn_character(&f, &c.cycle_type)).collect();
            (f, r)
        })
        .collect();
    CharacterTable { n, classes, rows }
}

/// Characters as exact traces of class representatives on the builder bases.
pub fn trace_character_table(engine: &Engine, n: usize) -> Result<CharacterTable> {
    let classes = conjugacy_classes(n);
    let bases = engine.bases(n)?;
    let mut rows = BTreeMap::new();
    for f in partitions(n) {
        let b = &bases[&f];
        let mut r = Vec::new();
        for c in &classes {
            let t = b.character(&class_representative(&c.cycle_type));
            assert!(t.is_integer(), "trace of a permutation is an integer");
            r.push(t.to_integer().to_i64().expect("small character"));
        }
        rows.insert(f, r);
    }
    Ok(CharacterTable { n, classes, rows })
}

/// g(f1,f2,f) = (1/n!) Σ_classes size·χ_f1·χ_f2·χ_f, as a multiset over f.
pub fn kronecker_multiplicities(f1: &Partition, f2: &Partition) -> Result<DecompositionMultiset> {
    if f1.n() != f2.n() {
        return Err(Error::SizeMismatch(format!("{f1} and {f2} have different n")));
    }
    let t = character_table(f1.n());
    let mut out = DecompositionMultiset::new();
    for f in partitions(f1.n()) {
        let g = kronecker_coefficient_in(&t, f1, f2, &f);
        if g > 0 {
            out.add(f, g as usize);
        }
    }
    Ok(out)
}

pub fn kronecker_coefficient(f1: &Partition, f2: &Partition, f: &Partition) -> u64 {
    kronecker_coefficient_in(&character_table(f1.n()), f1, f2, f)
}

fn kronecker_coefficient_in(t: &CharacterTable, f1: &Partition, f2: &Partition, f: &Partition) -> u64 {
    let mut sum: i128 = 0;
    for (k, c) in t.classes.iter().enumerate() {
        sum += c.size as i128 * (t.chi(f1, k) * t.chi(f2, k) * t.chi(f, k)) as i128;
    }
    let nf = factorial(t.n) as i128;
    assert!(sum >= 0 && sum % nf == 0, "Kronecker sum must be a nonnegative multiple of n!");
    (sum / nf) as u64
}

/// Dense action of S_n on the n! words of 1..n: act[g][w] is the index of
/// g·w, with g and w both indexed by position in lexicographic order.
struct WordGroup {
    words: Vec<Word>,
    index: BTreeMap<Word, usize>,
    act: Vec<Vec<u16>>,
    class_of: Vec<usize>,
}

impl WordGroup {
    fn new(n: usize, classes: &[ConjugacyClass]) -> Self {
        let labels: Vec<u8> = (1..=n as u8).collect();
        let perms = permutations_of(&labels);
        let words: Vec<Word> = perms.iter().map(|p| Word::new(p).unwrap()).collect();
        let index: BTreeMap<Word, usize> = words.iter().enumerate().map(|(i, w)| (*w, i)).collect();
        let act = perms.iter().map(|g| words.iter().map(|w| index[&w.relabel(g)] as u16).collect()).collect();
        let class_of = perms
            .iter()
            .map(|g| {
                let c = cycle_type(g);
                classes.iter().position(|k| k.cycle_type == c).unwrap()
            })
            .collect();
        WordGroup { words, index, act, class_of }
    }
}

/// Σ_g χ(g) g·v for a vector with integer coefficients.
fn character_sum(group: &WordGroup, chi: &[i64], v: &[(usize, BigInt)]) -> Vec<BigInt> {
    // i128 fast path; any overflow falls back to big integers.
    let small: Option<Vec<(usize, i128)>> = v.iter().map(|(w, c)| c.to_i128().map(|x| (*w, x))).collect();
    if let Some(small) = small {
        let mut acc = vec![0i128; group.words.len()];
        let mut ok = true;
        'outer: for (g, row) in group.act.iter().enumerate() {
            let x = chi[group.class_of[g]] as i128;
            if x == 0 {
                continue;
            }
            for (w, c) in &small {
                let t = &mut acc[row[*w] as usize];
                match c.checked_mul(x).and_then(|y| t.checked_add(y)) {
                    Some(y) => *t = y,
                    None => {
                        ok = false;
                        break 'outer;
                    }
                }
            }
        }
        if ok {
            return acc.into_iter().map(BigInt::from).collect();
        }
    }
    let mut acc = vec![BigInt::zero(); group.words.len()];
    for (g, row) in group.act.iter().enumerate() {
        let x = BigInt::from(chi[group.class_of[g]]);
        if x.is_zero() {
            continue;
        }
        for (w, c) in v {
            acc[row[*w] as usize] += c * &x;
        }
    }
    acc
}

/// Applies Π_f = (dim f / n!) Σ_g χ_f(g) g to word-space vectors.
pub struct IsotypicProjector {
    n: usize,
    f: Partition,
    chi: Vec<i64>,
    group: WordGroup,
}

impl IsotypicProjector {
    pub fn new(f: &Partition) -> Self {
        let t = character_table(f.n());
        let chi = t.rows[f].clone();
        IsotypicProjector { n: f.n(), f: f.clone(), chi, group: WordGroup::new(f.n(), &t.classes) }
    }

    pub fn shape(&self) -> &Partition {
        &self.f
    }

    pub fn apply(&self, v: &WordVector) -> Result<WordVector> {
        if v.n() != self.n || v.label_set() != (1..=self.n as u8).collect::<Vec<_>>() && !v.is_zero() {
            return Err(Error::SizeMismatch(format!("projector for S_{} applied to a {}-slot vector", self.n, v.n())));
        }
        let coeffs: Vec<Rational> = v.terms().map(|(_, c)| c.clone()).collect();
        let ints = primitive(&coeffs);
        let scale = if coeffs.is_empty() { Rational::one() } else { &coeffs[0] / &ints[0] };
        let items: Vec<(usize, BigInt)> =
            v.terms().zip(&ints).map(|((w, _), c)| (self.group.index[w], c.to_integer())).collect();
        let sum = character_sum(&self.group, &self.chi, &items);
        let factor = scale * Rational::new(BigInt::from(dimension(&self.f)), BigInt::from(factorial(self.n)));
        Ok(WordVector::from_terms(
            self.n,
            sum.into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (self.group.words[i], Rational::from_integer(c) * &factor)),
        ))
    }
}

/// Matrix of Π_f on the span of pairwise-orthogonal `space` vectors, in
/// their unnormalized coordinates: entry (i,j) is the coefficient of v_i in
/// Π v_j. Errors if Π v_j leaves the span.
pub fn isotypic_projector(f: &Partition, space: &[WordVector]) -> Result<RationalMatrix> {
    let proj = IsotypicProjector::new(f);
    projector_matrix(&proj, space)
}

pub fn projector_matrix(proj: &IsotypicProjector, space: &[WordVector]) -> Result<RationalMatrix> {
    let k = space.len();
    for i in 0..k {
        for j in i + 1..k {
            if !inner(&space[i], &space[j]).is_zero() {
                return Err(Error::ShapeMismatch(format!("space vectors {i} and {j} are not orthogonal")));
            }
        }
    }
    let mut m = RationalMatrix::zeros(k, k);
    for j in 0..k {
        let img = proj.apply(&space[j])?;
        let mut back = crate::wordspace::Accumulator::new(proj.n);
        for i in 0..k {
            let c = inner(&space[i], &img) / space[i].norm2();
            back.add_vector(&space[i], &c);
            m.set(i, j, c);
        }
        if back.finish() != img {
            return Err(Error::NotClosed(format!("Π{} maps vector {j} outside the span", proj.f)));
        }
    }
    Ok(m)
}

/// One orthonormal intertwiner per copy of f in f1 ⊗ f2. Rows index the
/// product components (i of f1, j of f2) as i·dim f2 + j; columns the
/// components of f.
#[derive(Clone, Debug)]
pub struct InnerCg {
    pub f1: Partition,
    pub f2: Partition,
    pub f: Partition,
    pub copies: Vec<Vec<Vec<Radical>>>,
}

fn kron(a: &RationalMatrix, b: &RationalMatrix) -> RationalMatrix {
    let mut out = RationalMatrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    let y = b.get(k, l);
                    if !y.is_zero() {
                        out.set(i * b.rows() + k, j * b.cols() + l, x * y);
                    }
                }
            }
        }
    }
    out
}

fn adjacent(n: usize, k: usize) -> Vec<u8> {
    let mut p: Vec<u8> = (1..=n as u8).collect();
    p.swap(k - 1, k);
    p
}

/// Inner Clebsch-Gordan coefficients from the intertwiner equations
/// ρ_{f1⊗f2}(s) K = K ρ_f(s) over adjacent transpositions, solved exactly in
/// unnormalized coordinates and then normalized.
pub fn inner_cg(engine: &Engine, f1: &Partition, f2: &Partition, f: &Partition) -> Result<InnerCg> {
    if f1.n() != f2.n() || f1.n() != f.n() {
        return Err(Error::SizeMismatch("inner product needs partitions of the same n".into()));
    }
    let n = f.n();
    let mult = kronecker_coefficient(f1, f2, f);
    if mult == 0 {
        return Err(Error::ZeroMult(format!("{f} does not occur in {f1} x {f2}")));
    }
    let b1 = engine.basis(f1)?;
    let b2 = engine.basis(f2)?;
    let bf = engine.basis(f)?;
    let (d12, d) = (b1.dim() * b2.dim(), bf.dim());
    // Unknown K[a][b] sits at a*d + b.
    let mut eqs: Vec<Vec<Rational>> = Vec::new();
    for k in 1..n {
        let s = adjacent(n, k);
        let r12 = kron(&b1.action_matrix(&s), &b2.action_matrix(&s));
        let rf = bf.action_matrix(&s);
        for a in 0..d12 {
            for b in 0..d {
                let mut row = vec![Rational::zero(); d12 * d];
                for c in 0..d12 {
                    let x = r12.get(a, c);
                    if !x.is_zero() {
                        row[c * d + b] += x;
                    }
                }
                for c in 0..d {
                    let x = rf.get(c, b);
                    if !x.is_zero() {
                        row[a * d + c] -= x;
                    }
                }
                eqs.push(row);
            }
        }
    }
    let sols = kernel(&RationalMatrix::from_rows(eqs));
    if sols.len() as u64 != mult {
        return Err(Error::BlockDim(format!("intertwiner space has dimension {}, expected {mult}", sols.len())));
    }
    let w12: Vec<Rational> = (0..d12).map(|a| b1.norm(a / b2.dim()) * b2.norm(a % b2.dim())).collect();
    let wf: Vec<Rational> = (0..d).map(|b| bf.norm(b).clone()).collect();
    // Frobenius inner product of the normalized intertwiners.
    let frob = |x: &[Rational], y: &[Rational]| -> Rational {
        let mut acc = Rational::zero();
        for a in 0..d12 {
            for b in 0..d {
                let (p, q) = (&x[a * d + b], &y[a * d + b]);
                if !p.is_zero() && !q.is_zero() {
                    acc += p * q * &w12[a] / &wf[b];
                }
            }
        }
        acc
    };
    let ortho = crate::exact::gram_schmidt_with(&sols, frob)?;
    let mut copies = Vec::new();
    for (k, total) in ortho {
        // KᵀK = (total/d)·I for an intertwiner between irreducibles.
        let c = total / Rational::from_integer(BigInt::from(d));
        let mut sol = k;
        crate::exact::normalize_sign(&mut sol);
        let mut m = vec![vec![Radical::zero(); d]; d12];
        for a in 0..d12 {
            for b in 0..d {
                m[a][b] = Radical::canonicalize(sol[a * d + b].clone(), &w12[a] / &wf[b] / &c)?;
            }
        }
        copies.push(m);
    }
    Ok(InnerCg { f1: f1.clone(), f2: f2.clone(), f: f.clone(), copies })
}

/// Inner Clebsch-Gordan coefficients for a multiplicity-one target from the
/// transfer operators P_ba = (dim f/n!) Σ_g D^f_ba(g) D^{f1}(g)⊗D^{f2}(g):
/// column b is P_ba e_k / |P_aa e_k| for the first product component k with
/// P_aa e_k ≠ 0, taking a = 0. Independent of [`inner_cg`].
pub fn inner_cg_projection(
    engine: &Engine,
    f1: &Partition,
    f2: &Partition,
    f: &Partition,
) -> Result<Vec<Vec<Radical>>> {
    if f1.n() != f2.n() || f1.n() != f.n() {
        return Err(Error::SizeMismatch("inner product needs partitions of the same n".into()));
    }
    match kronecker_coefficient(f1, f2, f) {
        0 => return Err(Error::ZeroMult(format!("{f} does not occur in {f1} x {f2}"))),
        1 => {}
        m => return Err(Error::BlockDim(format!("{f} occurs {m} times in {f1} x {f2}; projection needs one copy"))),
    }
    let n = f.n();
    let (b1, b2, bf) = (engine.basis(f1)?, engine.basis(f2)?, engine.basis(f)?);
    let (d2, d12, d) = (b2.dim(), b1.dim() * b2.dim(), bf.dim());
    // p[b][i][k] accumulates Σ_g D^f_b0(g) (D1⊗D2)(g)_ik.
    let mut p = vec![vec![vec![RadicalSum::zero(); d12]; d12]; d];
    let labels: Vec<u8> = (1..=n as u8).collect();
    for g in permutations_of(&labels) {
        let (o1, o2, of) = (orthogonal_matrix(&b1, &g)?, orthogonal_matrix(&b2, &g)?, orthogonal_matrix(&bf, &g)?);
        for (b, pb) in p.iter_mut().enumerate() {
            let w = &of[b][0];
            if w.is_zero() {
                continue;
            }
            for (i, row) in pb.iter_mut().enumerate() {
                for (k, acc) in row.iter_mut().enumerate() {
                    let x = &o1[i / d2][k / d2] * &o2[i % d2][k % d2];
                    if !x.is_zero() {
                        acc.add_radical(&(w * &x));
                    }
                }
            }
        }
    }
    let scale = Radical::from_rational(Rational::new(BigInt::from(d), BigInt::from(factorial(n))));
    let k = (0..d12)
        .find(|&k| !p[0][k][k].is_zero())
        .ok_or_else(|| Error::ProjectionNull(format!("transfer operator of {f} vanishes on {f1} x {f2}")))?;
    let norm2 =
        p[0][k][k].mul_radical(&scale).as_rational().ok_or_else(|| Error::NegRadicand("irrational norm".into()))?;
    let inv = Radical::canonicalize(Rational::one(), norm2.recip())?;
    (0..d12)
        .map(|i| {
            (0..d)
                .map(|b| {
                    p[b][i][k]
                        .mul_radical(&scale)
                        .mul_radical(&inv)
                        .as_radical()
                        .ok_or_else(|| Error::NegRadicand(format!("coefficient of {f} is not a single radical")))
                })
                .collect()
        })
        .collect()
}

/// Normalized representation matrix of a permutation as radicals:
/// D^{1/2} R D^{-1/2}.
pub fn orthogonal_matrix(basis: &IrrepBasis, perm: &[u8]) -> Result<Vec<Vec<Radical>>> {
    let r = basis.action_matrix(perm);
    let d = basis.dim();
    let mut out = vec![vec![Radical::zero(); d]; d];
    for i in 0..d {
        for j in 0..d {
            out[i][j] = Radical::canonicalize(r.get(i, j).clone(), basis.norm(i) / basis.norm(j))?;
        }
    }
    Ok(out)
}
