//! Exact vectors over words: assignments of distinct particle labels to
//! orbital slots. Permutations act on the labels.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::combinatorics::Partition;
use crate::error::{Error, Result};
use crate::exact::Rational;

pub const MAX_SLOTS: usize = 16;

/// Up to 16 slots packed four bits each, slot 0 in the most significant
/// nibble so that integer order is lexicographic order of the slots.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    packed: u64,
    len: u8,
}

impl Word {
    pub fn new(labels: &[u8]) -> Result<Word> {
        if labels.len() > MAX_SLOTS {
            return Err(Error::Size(format!("{} slots exceed {}", labels.len(), MAX_SLOTS)));
        }
        let mut seen = 0u32;
        let mut packed = 0u64;
        for (k, &l) in labels.iter().enumerate() {
            if l == 0 || l as usize > MAX_SLOTS {
                return Err(Error::LabelRange(format!("label {l} outside 1..={MAX_SLOTS}")));
            }
            if seen & (1 << l) != 0 {
                return Err(Error::LabelRange(format!("label {l} repeated")));
            }
            seen |= 1 << l;
            packed |= ((l - 1) as u64) << (4 * (15 - k));
        }
        Ok(Word { packed, len: labels.len() as u8 })
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn label_at(&self, slot: usize) -> u8 {
        ((self.packed >> (4 * (15 - slot))) & 0xf) as u8 + 1
    }

    pub fn labels(&self) -> Vec<u8> {
        (0..self.len()).map(|k| self.label_at(k)).collect()
    }

    /// Slot (0-based) holding `label`, if any.
    pub fn slot_of(&self, label: u8) -> Option<usize> {
        (0..self.len()).find(|&k| self.label_at(k) == label)
    }

    pub fn swap_labels(&self, i: u8, j: u8) -> Word {
        let (a, b) = ((i - 1) as u64, (j - 1) as u64);
        let mut packed = self.packed;
        for k in 0..self.len() {
            let shift = 4 * (15 - k);
            let v = (packed >> shift) & 0xf;
            if v == a {
                packed = (packed & !(0xf << shift)) | (b << shift);
            } else if v == b {
                packed = (packed & !(0xf << shift)) | (a << shift);
            }
        }
        Word { packed, len: self.len }
    }

    pub fn swap_slots(&self, s: usize, t: usize) -> Word {
        let mut labels = self.labels();
        labels.swap(s, t);
        Word::new(&labels).expect("slot swap keeps a valid word")
    }

    /// Applies a label map given as map[label-1] = new label.
    pub fn relabel(&self, map: &[u8]) -> Word {
        let labels: Vec<u8> = self.labels().iter().map(|&l| map[l as usize - 1]).collect();
        Word::new(&labels).expect("relabel must be injective")
    }

    /// Concatenation: `other` occupies the slots after `self`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut labels = self.labels();
        labels.extend(other.labels());
        Word::new(&labels).expect("factors must use disjoint labels")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.labels().iter().map(|l| l.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Rational combination of words with the same number of slots. The squared
/// norm is cached and kept exact.
#[derive(Clone, PartialEq, Eq)]
pub struct WordVector {
    n: usize,
    terms: BTreeMap<Word, Rational>,
    norm2: Rational,
}

impl WordVector {
    pub fn zero(n: usize) -> WordVector {
        WordVector { n, terms: BTreeMap::new(), norm2: Rational::zero() }
    }

    pub fn from_word(w: Word) -> WordVector {
        let mut terms = BTreeMap::new();
        terms.insert(w, Rational::one());
        WordVector { n: w.len(), terms, norm2: Rational::one() }
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Word, Rational)>) -> WordVector {
        let mut acc = Accumulator::new(n);
        for (w, c) in terms {
            acc.add(w, &c);
        }
        acc.finish()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn norm2(&self) -> &Rational {
        &self.norm2
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    /// Labels occurring in the vector (sorted).
    pub fn label_set(&self) -> Vec<u8> {
        let mut v = self.terms.keys().next().map(|w| w.labels()).unwrap_or_default();
        v.sort();
        v
    }

    pub fn scale(&self, c: &Rational) -> WordVector {
        if c.is_zero() {
            return WordVector::zero(self.n);
        }
        WordVector {
            n: self.n,
            terms: self.terms.iter().map(|(w, x)| (*w, x * c)).collect(),
            norm2: &self.norm2 * c * c,
        }
    }

    pub fn add_scaled(&self, other: &WordVector, c: &Rational) -> Result<WordVector> {
        check_same(self, other)?;
        let mut acc = Accumulator::from_vector(self);
        acc.add_vector(other, c);
        Ok(acc.finish())
    }

    pub fn map_words(&self, f: impl Fn(&Word) -> Word) -> WordVector {
        let mut acc = Accumulator::new(self.n);
        for (w, c) in &self.terms {
            acc.add(f(w), c);
        }
        acc.finish()
    }

    pub fn tensor(&self, other: &WordVector) -> WordVector {
        let mut acc = Accumulator::new(self.n + other.n);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                acc.add(a.concat(b), &(x * y));
            }
        }
        acc.finish()
    }

    /// Recomputes ⟨v,v⟩; used to check the cache.
    pub fn recomputed_norm2(&self) -> Rational {
        self.terms.values().map(|c| c * c).sum()
    }
}

impl fmt::Display for WordVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}{}", c, w)?;
        }
        Ok(())
    }
}

impl fmt::Debug for WordVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Mutable sum used to build vectors without recomputing norms per step.
pub struct Accumulator {
    n: usize,
    terms: BTreeMap<Word, Rational>,
}

impl Accumulator {
    pub fn new(n: usize) -> Self {
        Accumulator { n, terms: BTreeMap::new() }
    }

    pub fn from_vector(v: &WordVector) -> Self {
        Accumulator { n: v.n, terms: v.terms.clone() }
    }

    pub fn add(&mut self, w: Word, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    pub fn add_vector(&mut self, v: &WordVector, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (w, x) in &v.terms {
            self.add(*w, &(x * c));
        }
    }

    pub fn finish(self) -> WordVector {
        let norm2 = self.terms.values().map(|c| c * c).sum();
        WordVector { n: self.n, terms: self.terms, norm2 }
    }
}

fn check_same(u: &WordVector, v: &WordVector) -> Result<()> {
    if u.n != v.n {
        return Err(Error::SizeMismatch(format!("{} slots vs {} slots", u.n, v.n)));
    }
    Ok(())
}

fn check_label(v: &WordVector, l: u8) -> Result<()> {
    if l == 0 || l as usize > v.n.max(1) && !v.label_set().contains(&l) {
        return Err(Error::LabelRange(format!("label {l} not in 1..={}", v.n)));
    }
    Ok(())
}

pub fn apply_transposition(v: &WordVector, i: u8, j: u8) -> Result<WordVector> {
    check_label(v, i)?;
    check_label(v, j)?;
    if i == j {
        return Err(Error::LabelRange(format!("transposition ({i},{j}) needs distinct labels")));
    }
    Ok(v.map_words(|w| w.swap_labels(i, j)))
}

/// Applies the label permutation perm[label-1] = image.
pub fn apply_permutation(v: &WordVector, perm: &[u8]) -> WordVector {
    v.map_words(|w| w.relabel(perm))
}

/// Σ over all transpositions of the labels present in v.
pub fn class_sum_apply(v: &WordVector) -> WordVector {
    let labels = v.label_set();
    let mut acc = Accumulator::new(v.n);
    for a in 0..labels.len() {
        for b in a + 1..labels.len() {
            for (w, c) in &v.terms {
                acc.add(w.swap_labels(labels[a], labels[b]), c);
            }
        }
    }
    acc.finish()
}

pub fn inner_product(u: &WordVector, v: &WordVector) -> Result<Rational> {
    check_same(u, v)?;
    Ok(inner(u, v))
}

/// Inner product without the size check, iterating the smaller vector.
pub fn inner(u: &WordVector, v: &WordVector) -> Rational {
    let (small, large) = if u.terms.len() <= v.terms.len() { (u, v) } else { (v, u) };
    let mut acc = Rational::zero();
    for (w, c) in &small.terms {
        if let Some(d) = large.terms.get(w) {
            acc += c * d;
        }
    }
    acc
}

/// All orderings of `labels` (sorted first), Heap-free lexicographic order.
pub fn permutations_of(labels: &[u8]) -> Vec<Vec<u8>> {
    let mut base = labels.to_vec();
    base.sort();
    let mut out = vec![base.clone()];
    // Next lexicographic permutation.
    while let Some(i) = (0..base.len().saturating_sub(1)).rev().find(|&i| base[i] < base[i + 1]) {
        let j = (i + 1..base.len()).rev().find(|&j| base[j] > base[i]).unwrap();
        base.swap(i, j);
        base[i + 1..].reverse();
        out.push(base.clone());
    }
    out
}

/// Sign of the permutation taking `from` to `to` (same label set).
pub fn permutation_sign(from: &[u8], to: &[u8]) -> i64 {
    let pos: Vec<usize> = to.iter().map(|l| from.iter().position(|m| m == l).unwrap()).collect();
    let mut seen = vec![false; pos.len()];
    let mut sign = 1;
    for s in 0..pos.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut k = s;
        while !seen[k] {
            seen[k] = true;
            k = pos[k];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Σ over all assignments of `labels` to consecutive orbitals, unnormalized.
pub fn symmetrize_set(labels: &[u8]) -> Result<WordVector> {
    let mut acc = Accumulator::new(labels.len());
    for p in permutations_of(labels) {
        acc.add(Word::new(&p)?, &Rational::one());
    }
    Ok(acc.finish())
}

/// Signed sum; the word listing `labels` in the given order has coefficient +1.
pub fn antisymmetrize_set(labels: &[u8]) -> Result<WordVector> {
    let mut acc = Accumulator::new(labels.len());
    for p in permutations_of(labels) {
        acc.add(Word::new(&p)?, &crate::exact::q(permutation_sign(labels, &p)));
    }
    Ok(acc.finish())
}

/// Σ_{σ in Sym(set)} sign^σ σ applied to every word (left action on labels).
fn apply_set_symmetrizer(v: &WordVector, set: &[u8], signed: bool) -> WordVector {
    if set.len() < 2 {
        return v.clone();
    }
    let perms = permutations_of(set);
    let base: Vec<u8> = perms[0].clone();
    let mut acc = Accumulator::new(v.n);
    for p in &perms {
        let sign = if signed { permutation_sign(&base, p) } else { 1 };
        let mut map: Vec<u8> = (1..=MAX_SLOTS as u8).collect();
        for (a, b) in base.iter().zip(p) {
            map[*a as usize - 1] = *b;
        }
        let c = crate::exact::q(sign);
        for (w, x) in &v.terms {
            acc.add(w.relabel(&map), &(x * &c));
        }
    }
    acc.finish()
}

/// Y = Q·P: row symmetrizers first, then column antisymmetrizers.
pub fn young_operator_apply(f: &Partition, filling: &[Vec<u8>], v: &WordVector) -> Result<WordVector> {
    let shape: Vec<usize> = filling.iter().map(|r| r.len()).collect();
    if shape != f.parts() {
        return Err(Error::ShapeMismatch(format!("filling shape {:?} is not {}", shape, f)));
    }
    let mut all: Vec<u8> = filling.iter().flatten().copied().collect();
    all.sort();
    if all.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::ShapeMismatch("filling repeats a label".into()));
    }
    let present = v.label_set();
    if !v.is_zero() && all.iter().any(|l| !present.contains(l)) {
        return Err(Error::ShapeMismatch("filling uses labels absent from the vector".into()));
    }
    let mut out = v.clone();
    for row in filling {
        out = apply_set_symmetrizer(&out, row, false);
    }
    for j in 0..f.part(0) {
        let col: Vec<u8> = filling.iter().filter_map(|r| r.get(j).copied()).collect();
        out = apply_set_symmetrizer(&out, &col, true);
    }
    Ok(out)
}

/// Words for every ordering of 1..n.
pub fn all_words(n: usize) -> Vec<Word> {
    let labels: Vec<u8> = (1..=n as u8).collect();
    permutations_of(&labels).iter().map(|p| Word::new(p).unwrap()).collect()
}
