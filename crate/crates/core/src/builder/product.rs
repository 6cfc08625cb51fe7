use std::fmt;

use crate::combinatorics::Partition;
use crate::exact::Rational;
use crate::wordspace::WordVector;

/// One product-basis state: a parent component relabeled onto the complement
/// of the attach set, times an attach component on the attach set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RowDescriptor {
    pub parent_shape: Partition,
    pub parent_component: usize,
    /// parent_labels[i] is the label taken by canonical parent label i+1.
    pub parent_labels: Vec<u8>,
    pub attach_shape: Partition,
    pub attach_component: usize,
    /// Ascending.
    pub attach_labels: Vec<u8>,
}

fn write_group(f: &mut fmt::Formatter<'_>, shape: &Partition, component: usize, labels: &[u8]) -> fmt::Result {
    let list: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
    let list = list.join(",");
    if labels.len() == 1 {
        write!(f, "{list}")
    } else if shape.is_row() {
        write!(f, "{{{list}}}")
    } else if shape.is_column() {
        write!(f, "[{list}]")
    } else {
        write!(f, "{}({list})", component + 1)
    }
}

impl fmt::Display for RowDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_group(f, &self.parent_shape, self.parent_component, &self.parent_labels)?;
        write!(f, "|")?;
        write_group(f, &self.attach_shape, self.attach_component, &self.attach_labels)
    }
}

/// Product basis for f1 ⊗ attach on labels 1..n. States are unnormalized and
/// pairwise orthogonal.
#[derive(Clone, Debug)]
pub struct ProductBasis {
    pub n: usize,
    pub f1: Partition,
    pub attach: Partition,
    pub rows: Vec<RowDescriptor>,
    pub states: Vec<WordVector>,
}

impl ProductBasis {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn norm(&self, i: usize) -> &Rational {
        self.states[i].norm2()
    }

    /// Word-space state for coefficient vector c over the rows.
    pub fn realize(&self, c: &[Rational]) -> WordVector {
        let mut acc = crate::wordspace::Accumulator::new(self.n);
        for (state, x) in self.states.iter().zip(c) {
            acc.add_vector(state, x);
        }
        acc.finish()
    }

    /// Row coordinates of a state lying in the span of the rows.
    pub fn coordinates(&self, v: &WordVector) -> Vec<Rational> {
        self.states.iter().map(|s| crate::wordspace::inner(s, v) / s.norm2()).collect()
    }
}

/// k-subsets of 1..n, ordered by largest element descending, then the next
/// largest descending, and so on: (5,6),(4,6),…,(1,6),(4,5),…
pub fn attach_sets(n: usize, k: usize) -> Vec<Vec<u8>> {
    fn rec(max: u8, k: usize, suffix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if k == 0 {
            let mut s = suffix.clone();
            s.reverse();
            out.push(s);
            return;
        }
        for top in (k as u8..=max).rev() {
            suffix.push(top);
            rec(top - 1, k - 1, suffix, out);
            suffix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n as u8, k, &mut Vec::new(), &mut out);
    out
}

/// Canonical parent labels 1..n1 mapped onto the complement of `attach`:
/// labels outside the attach set stay put, vacated ones take the free labels
/// above n1 in ascending order.
pub fn parent_relabel(n: usize, attach: &[u8]) -> Vec<u8> {
    let n1 = n - attach.len();
    let mut free = (n1 as u8 + 1..=n as u8).filter(|l| !attach.contains(l));
    (1..=n1 as u8).map(|l| if attach.contains(&l) { free.next().unwrap() } else { l }).collect()
}
