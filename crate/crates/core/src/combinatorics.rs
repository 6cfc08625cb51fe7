//! Partitions, standard tableaux, Yamanouchi symbols, dimensions and
//! outer-product (Littlewood-Richardson) decompositions.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A Young diagram, parts weakly decreasing. The empty partition has n = 0.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Partition> {
        if parts.contains(&0) {
            return Err(Error::parse(0, "partition parts must be positive"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::parse(0, "partition parts must be weakly decreasing"));
        }
        Ok(Partition { parts })
    }

    /// Builds from parts known to be valid. Panics otherwise.
    pub fn from_parts(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).expect("invalid partition")
    }

    pub fn row(k: usize) -> Partition {
        Partition { parts: vec![k] }
    }

    pub fn column(k: usize) -> Partition {
        Partition { parts: vec![1; k] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_row(&self) -> bool {
        self.parts.len() == 1
    }

    pub fn is_column(&self) -> bool {
        self.parts.iter().all(|&p| p == 1) && !self.parts.is_empty()
    }

    /// Part i (0-based), zero past the end.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn contains(&self, other: &Partition) -> bool {
        other.parts.len() <= self.parts.len() && other.parts.iter().zip(&self.parts).all(|(a, b)| a <= b)
    }

    /// Order used for listing irreps: reverse lexicographic, so [n] first and
    /// [1^n] last.
    pub fn canonical_cmp(&self, other: &Partition) -> Ordering {
        other.parts.cmp(&self.parts)
    }
}

impl fmt::Display for Partition {
    /// Bracket syntax with exponents for repeated parts, e.g. `[2,1^2]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        let mut first = true;
        let mut i = 0;
        while i < self.parts.len() {
            let p = self.parts[i];
            let mut j = i;
            while j < self.parts.len() && self.parts[j] == p {
                j += 1;
            }
            if !first {
                write!(f, ",")?;
            }
            first = false;
            if j - i > 1 {
                write!(f, "{}^{}", p, j - i)?;
            } else {
                write!(f, "{}", p)?;
            }
            i = j;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Partition> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::parse(0, format!("expected [..] around partition, got {s:?}")))?;
        let offset = s.find('[').unwrap_or(0) + 1;
        let mut parts = Vec::new();
        if inner.trim().is_empty() {
            return Ok(Partition { parts });
        }
        let mut pos = offset;
        for item in inner.split(',') {
            let item_trim = item.trim();
            let num = |txt: &str, at: usize| -> Result<usize> {
                txt.trim().parse::<usize>().map_err(|_| Error::parse(at, format!("bad integer {txt:?}")))
            };
            match item_trim.split_once('^') {
                Some((base, exp)) => {
                    let b = num(base, pos)?;
                    let e = num(exp, pos + base.len() + 1)?;
                    parts.extend(std::iter::repeat(b).take(e));
                }
                None => parts.push(num(item_trim, pos)?),
            }
            pos += item.len() + 1;
        }
        Partition::new(parts).map_err(|_| Error::parse(offset, format!("not a partition: {s:?}")))
    }
}

/// All partitions of n in canonical order ([n] first).
pub fn partitions(n: usize) -> Vec<Partition> {
    fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

pub fn conjugate(f: &Partition) -> Partition {
    let cols = f.part(0);
    let parts = (0..cols).map(|j| f.parts.iter().filter(|&&p| p > j).count()).collect();
    Partition { parts }
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Hook-length formula.
pub fn dimension(f: &Partition) -> u128 {
    let conj = conjugate(f);
    let mut hooks: u128 = 1;
    for (i, &row) in f.parts.iter().enumerate() {
        for j in 0..row {
            let arm = row - j - 1;
            let leg = conj.parts[j] - i - 1;
            hooks *= (arm + leg + 1) as u128;
        }
    }
    factorial(f.n()) / hooks
}

/// Λ(f) = Σ C(f_i,2) − Σ C(f̃_j,2), the eigenvalue of the transposition class sum.
pub fn lambda_eigenvalue(f: &Partition) -> i64 {
    let c2 = |p: &usize| (p * p.saturating_sub(1) / 2) as i64;
    let rows: i64 = f.parts.iter().map(c2).sum();
    let cols: i64 = conjugate(f).parts.iter().map(c2).sum();
    rows - cols
}

/// Row index (1-based) of every label 1..n, stored in label order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YamanouchiSymbol {
    rows: Vec<u8>,
}

impl YamanouchiSymbol {
    pub fn from_rows_by_label(rows: Vec<u8>) -> YamanouchiSymbol {
        YamanouchiSymbol { rows }
    }

    /// Row (1-based) of label (1-based).
    pub fn row_of(&self, label: usize) -> usize {
        self.rows[label - 1] as usize
    }

    pub fn rows_by_label(&self) -> &[u8] {
        &self.rows
    }

    pub fn shape(&self) -> Partition {
        let mut counts: Vec<usize> = Vec::new();
        for &r in &self.rows {
            let r = r as usize;
            if counts.len() < r {
                counts.resize(r, 0);
            }
            counts[r - 1] += 1;
        }
        Partition { parts: counts }
    }

    /// Every prefix (labels 1..m) has weakly decreasing row counts.
    pub fn is_valid(&self) -> bool {
        let mut counts = vec![0usize; self.rows.len() + 1];
        for &r in &self.rows {
            let r = r as usize;
            if r == 0 {
                return false;
            }
            counts[r] += 1;
            if r > 1 && counts[r] > counts[r - 1] {
                return false;
            }
        }
        true
    }

    /// Standard tableau as rows of labels.
    pub fn tableau(&self) -> Vec<Vec<usize>> {
        let mut t: Vec<Vec<usize>> = Vec::new();
        for (i, &r) in self.rows.iter().enumerate() {
            let r = r as usize;
            if t.len() < r {
                t.resize(r, Vec::new());
            }
            t[r - 1].push(i + 1);
        }
        t
    }
}

impl fmt::Display for YamanouchiSymbol {
    /// Written r_n … r_1, highest label first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in self.rows.iter().rev() {
            write!(f, "{}", r)?;
        }
        Ok(())
    }
}

impl fmt::Debug for YamanouchiSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Standard tableaux of shape f, ordered by (r_1, …, r_n) ascending.
pub fn enumerate_syt(f: &Partition) -> Vec<YamanouchiSymbol> {
    fn rec(f: &Partition, counts: &mut Vec<usize>, cur: &mut Vec<u8>, out: &mut Vec<YamanouchiSymbol>) {
        if cur.len() == f.n() {
            out.push(YamanouchiSymbol { rows: cur.clone() });
            return;
        }
        for r in 0..f.len() {
            let ok = counts[r] < f.parts[r] && (r == 0 || counts[r] < counts[r - 1]);
            if ok {
                counts[r] += 1;
                cur.push(r as u8 + 1);
                rec(f, counts, cur, out);
                cur.pop();
                counts[r] -= 1;
            }
        }
    }
    let mut out = Vec::new();
    rec(f, &mut vec![0; f.len()], &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// A multiset of irreps of one S_n, kept in canonical partition order.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct DecompositionMultiset {
    entries: BTreeMap<Partition, usize>,
}

impl DecompositionMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, f: Partition, mult: usize) {
        if mult > 0 {
            *self.entries.entry(f).or_insert(0) += mult;
        }
    }

    pub fn multiplicity(&self, f: &Partition) -> usize {
        self.entries.get(f).copied().unwrap_or(0)
    }

    /// (partition, multiplicity) in canonical order.
    pub fn entries(&self) -> Vec<(Partition, usize)> {
        let mut v: Vec<_> = self.entries.iter().map(|(p, &m)| (p.clone(), m)).collect();
        v.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        v
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_dimension(&self) -> u128 {
        self.entries.iter().map(|(p, &m)| m as u128 * dimension(p)).sum()
    }
}

impl fmt::Display for DecompositionMultiset {
    /// `[4]+[3,1]+2[2,2]`: prefixes are multiplicities.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (p, m) in self.entries() {
            if !first {
                write!(f, "+")?;
            }
            first = false;
            if m > 1 {
                write!(f, "{}", m)?;
            }
            write!(f, "{}", p)?;
        }
        Ok(())
    }
}

impl fmt::Debug for DecompositionMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn horizontal_strips(f: &Partition, k: usize) -> Vec<Partition> {
    // g ⊇ f with |g/f| = k and f_{i} ≥ g_{i+1}.
    let len = f.len() + 1;
    let mut out = Vec::new();
    let mut g = vec![0usize; len];
    fn rec(i: usize, rem: usize, f: &Partition, g: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if i == g.len() {
            if rem == 0 {
                let parts: Vec<usize> = g.iter().copied().filter(|&x| x > 0).collect();
                out.push(Partition { parts });
            }
            return;
        }
        let lo = f.part(i);
        let hi = if i == 0 { lo + rem } else { (lo + rem).min(f.part(i - 1)) };
        for gi in lo..=hi {
            g[i] = gi;
            rec(i + 1, rem - (gi - lo), f, g, out);
        }
    }
    rec(0, k, f, &mut g, &mut out);
    out
}

/// Pieri rule: strip must be a single row [k] or a single column [1^k].
pub fn pieri_decompose(f1: &Partition, strip: &Partition) -> Result<DecompositionMultiset> {
    let k = strip.n();
    let mut out = DecompositionMultiset::new();
    if strip.is_row() {
        for g in horizontal_strips(f1, k) {
            out.add(g, 1);
        }
    } else if strip.is_column() {
        for g in horizontal_strips(&conjugate(f1), k) {
            out.add(conjugate(&g), 1);
        }
    } else {
        return Err(Error::StripShape(format!("{strip} is neither a row nor a column")));
    }
    Ok(out)
}

/// Number of Littlewood-Richardson tableaux of shape lam/mu with content nu.
pub fn lr_coefficient(lam: &Partition, mu: &Partition, nu: &Partition) -> usize {
    if !lam.contains(mu) || lam.n() != mu.n() + nu.n() {
        return 0;
    }
    // Cells of the skew shape in reading order: rows top to bottom, right to left.
    let mut cells = Vec::new();
    for i in 0..lam.len() {
        for j in (mu.part(i)..lam.part(i)).rev() {
            cells.push((i, j));
        }
    }
    let rows = lam.len();
    let width = lam.part(0);
    let mut grid = vec![vec![0usize; width]; rows];
    let mut content = vec![0usize; nu.len() + 1];
    fn rec(
        idx: usize,
        cells: &[(usize, usize)],
        grid: &mut Vec<Vec<usize>>,
        content: &mut Vec<usize>,
        mu: &Partition,
        nu: &Partition,
    ) -> usize {
        if idx == cells.len() {
            return 1;
        }
        let (i, j) = cells[idx];
        let mut total = 0;
        for v in 1..=nu.len() {
            if content[v] >= nu.part(v - 1) {
                continue;
            }
            // Lattice condition on the reading word so far.
            if v > 1 && content[v] >= content[v - 1] {
                continue;
            }
            // Rows weakly increase left to right: cell to the right already filled.
            if j + 1 < grid[i].len() && grid[i][j + 1] != 0 && grid[i][j + 1] < v {
                continue;
            }
            // Columns strictly increase downwards.
            if i > 0 && j >= mu.part(i - 1) && grid[i - 1][j] >= v {
                continue;
            }
            grid[i][j] = v;
            content[v] += 1;
            total += rec(idx + 1, cells, grid, content, mu, nu);
            content[v] -= 1;
            grid[i][j] = 0;
        }
        total
    }
    rec(0, &cells, &mut grid, &mut content, mu, nu)
}

/// Outer product f1 ∘ f2 decomposed by Littlewood-Richardson enumeration.
pub fn outer_decompose(f1: &Partition, f2: &Partition) -> DecompositionMultiset {
    let n = f1.n() + f2.n();
    let mut out = DecompositionMultiset::new();
    for lam in partitions(n) {
        if lam.contains(f1) {
            out.add(lam.clone(), lr_coefficient(&lam, f1, f2));
        }
    }
    out
}
