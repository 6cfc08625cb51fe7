use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{primitive, Rational};
use crate::error::{Error, Result};

/// Dense rational matrix, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        RationalMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| super::q(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        (0..self.rows).map(|i| super::dot(self.row(i), v)).collect()
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = RationalMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut out = RationalMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// self − λ·I (square only).
    pub fn shift(&self, lambda: &Rational) -> RationalMatrix {
        assert_eq!(self.rows, self.cols);
        let mut out = self.clone();
        for i in 0..self.rows {
            let v = out.get(i, i) - lambda;
            out.set(i, i, v);
        }
        out
    }
}

/// Result of fraction-free forward elimination.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// Integer rows after elimination (row-cleared copy of the input).
    pub rows: Vec<Vec<BigInt>>,
    /// Pivot (row, column) pairs in order.
    pub pivots: Vec<(usize, usize)>,
    /// Largest absolute value of any entry seen during elimination.
    pub max_entry: BigInt,
    pub cols: usize,
}

/// Bareiss elimination after clearing each row's denominators. Pivots are
/// the first nonzero entry scanning columns left to right and rows top down.
pub fn bareiss_echelon(m: &RationalMatrix) -> Echelon {
    let cols = m.cols();
    let mut a: Vec<Vec<BigInt>> = (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let mut l = BigInt::one();
            for x in row {
                l = l.lcm(x.denom());
            }
            row.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    let mut max_entry = a.iter().flatten().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero);
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for i in r + 1..a.len() {
            let factor = a[i][c].clone();
            for j in c + 1..cols {
                let v = (&piv * &a[i][j] - &factor * &a[r][j]) / &prev;
                if v.abs() > max_entry {
                    max_entry = v.abs();
                }
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = piv;
        pivots.push((r, c));
        r += 1;
    }
    Echelon { rows: a, pivots, max_entry, cols }
}

pub fn rank(m: &RationalMatrix) -> usize {
    bareiss_echelon(m).pivots.len()
}

/// Right null space of m as primitive integer vectors, one per free column
/// in increasing column order.
pub fn kernel(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    let e = bareiss_echelon(m);
    let cols = m.cols();
    let pivot_cols: Vec<usize> = e.pivots.iter().map(|&(_, c)| c).collect();
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivot_cols.contains(c)) {
        let mut x = vec![Rational::zero(); cols];
        x[free] = Rational::one();
        for &(r, c) in e.pivots.iter().rev() {
            let mut s = Rational::zero();
            for j in c + 1..cols {
                if !e.rows[r][j].is_zero() && !x[j].is_zero() {
                    s += Rational::from_integer(e.rows[r][j].clone()) * &x[j];
                }
            }
            x[c] = -s / Rational::from_integer(e.rows[r][c].clone());
        }
        out.push(primitive(&x));
    }
    out
}

/// Sequential Gram-Schmidt under an arbitrary inner product. Outputs are
/// rescaled to primitive integer vectors (positive factor) and carry their
/// exact squared norms.
pub fn gram_schmidt_with<F>(vectors: &[Vec<Rational>], inner: F) -> Result<Vec<(Vec<Rational>, Rational)>>
where
    F: Fn(&[Rational], &[Rational]) -> Rational,
{
    let mut out: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for (idx, v) in vectors.iter().enumerate() {
        let mut u = v.clone();
        for (w, nw) in &out {
            let c = inner(v, w) / nw;
            if !c.is_zero() {
                for (ui, wi) in u.iter_mut().zip(w) {
                    *ui -= &c * wi;
                }
            }
        }
        let u = primitive(&u);
        let n = inner(&u, &u);
        if n.is_zero() {
            return Err(Error::Dependent(idx));
        }
        out.push((u, n));
    }
    Ok(out)
}

pub fn gram_schmidt(vectors: &[Vec<Rational>], gram: &RationalMatrix) -> Result<Vec<(Vec<Rational>, Rational)>> {
    gram_schmidt_with(vectors, |a, b| super::dot(a, &gram.mul_vec(b)))
}
