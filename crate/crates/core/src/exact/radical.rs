use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// Splits m = k²·s with s squarefree; returns (k, s).
///
/// Trial division runs only up to the cube root: whatever cofactor remains is
/// either a perfect square or squarefree.
pub fn squarefree_decompose(m: &BigUint) -> (BigUint, BigUint) {
    if m.is_zero() {
        return (BigUint::zero(), BigUint::one());
    }
    let mut rest = m.clone();
    let mut k = BigUint::one();
    let mut s = BigUint::one();
    let limit = rest.cbrt() + 1u32;
    let mut p = BigUint::from(2u32);
    while p <= limit && p.clone() * &p <= rest {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            k *= &p;
        }
        if e % 2 == 1 {
            s *= &p;
        }
        p += if p == BigUint::from(2u32) { 1u32 } else { 2u32 };
    }
    let r = rest.sqrt();
    if &r * &r == rest {
        k *= r;
    } else {
        s *= rest;
    }
    (k, s)
}

/// coeff·√radicand, radicand squarefree; zero is 0·√1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Radical {
    coeff: Rational,
    radicand: BigUint,
}

impl Radical {
    pub fn zero() -> Radical {
        Radical { coeff: Rational::zero(), radicand: BigUint::one() }
    }

    pub fn from_rational(r: Rational) -> Radical {
        Radical { coeff: r, radicand: BigUint::one() }
    }

    /// c·√(p/q) = (c/q)·√(pq), then square factors pulled out.
    pub fn canonicalize(coeff: Rational, radicand: Rational) -> Result<Radical> {
        if coeff.is_zero() {
            return Ok(Radical::zero());
        }
        if radicand.is_negative() {
            return Err(Error::NegRadicand(format!("{coeff}*sqrt({radicand})")));
        }
        if radicand.is_zero() {
            return Ok(Radical::zero());
        }
        let num = radicand.numer().to_biguint().expect("positive");
        let den = radicand.denom().to_biguint().expect("positive");
        let (k, s) = squarefree_decompose(&(num * &den));
        let c = coeff * Rational::new(BigInt::from(k), BigInt::from(den));
        Ok(Radical { coeff: c, radicand: s })
    }

    /// √r for r ≥ 0.
    pub fn sqrt(r: &Rational) -> Result<Radical> {
        Radical::canonicalize(Rational::one(), r.clone())
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn radicand(&self) -> &BigUint {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// The exact rational value of the square, with sign: sgn·r²·s.
    pub fn signed_square(&self) -> Rational {
        let sq = &self.coeff * &self.coeff * Rational::from_integer(BigInt::from(self.radicand.clone()));
        if self.coeff.is_negative() {
            -sq
        } else {
            sq
        }
    }

    pub fn recip(&self) -> Option<Radical> {
        if self.is_zero() {
            return None;
        }
        let s = Rational::from_integer(BigInt::from(self.radicand.clone()));
        Some(Radical { coeff: (&self.coeff * &s).recip(), radicand: self.radicand.clone() })
    }

    pub fn to_f64(&self) -> f64 {
        self.coeff.to_f64().unwrap_or(f64::NAN) * self.radicand.to_f64().unwrap_or(f64::NAN).sqrt()
    }

    /// Adds two radicals with the same radicand; unequal radicands are only
    /// representable as a `RadicalSum`.
    pub fn checked_add(&self, other: &Radical) -> Option<Radical> {
        if self.is_zero() {
            return Some(other.clone());
        }
        if other.is_zero() {
            return Some(self.clone());
        }
        if self.radicand != other.radicand {
            return None;
        }
        let c = &self.coeff + &other.coeff;
        if c.is_zero() {
            Some(Radical::zero())
        } else {
            Some(Radical { coeff: c, radicand: self.radicand.clone() })
        }
    }
}

impl Mul for &Radical {
    type Output = Radical;

    fn mul(self, rhs: &Radical) -> Radical {
        if self.is_zero() || rhs.is_zero() {
            return Radical::zero();
        }
        // √s1·√s2 = g·√((s1/g)(s2/g)) with g = gcd(s1, s2); the product stays squarefree.
        let g = self.radicand.gcd(&rhs.radicand);
        let s = (&self.radicand / &g) * (&rhs.radicand / &g);
        let coeff = &self.coeff * &rhs.coeff * Rational::from_integer(BigInt::from(g));
        Radical { coeff, radicand: s }
    }
}

impl Mul for Radical {
    type Output = Radical;
    fn mul(self, rhs: Radical) -> Radical {
        &self * &rhs
    }
}

impl Mul<&Rational> for &Radical {
    type Output = Radical;
    fn mul(self, rhs: &Rational) -> Radical {
        if rhs.is_zero() {
            return Radical::zero();
        }
        Radical { coeff: &self.coeff * rhs, radicand: self.radicand.clone() }
    }
}

impl Neg for Radical {
    type Output = Radical;
    fn neg(self) -> Radical {
        Radical { coeff: -self.coeff, radicand: self.radicand }
    }
}

impl Neg for &Radical {
    type Output = Radical;
    fn neg(self) -> Radical {
        -self.clone()
    }
}

fn fmt_rational(r: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Radical {
    /// Canonical text: `r` or `r*sqrt(s)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_rational(&self.coeff, f)?;
        if !self.radicand.is_one() {
            write!(f, "*sqrt({})", self.radicand)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Finite sum of radicals keyed by squarefree radicand.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RadicalSum {
    terms: BTreeMap<BigUint, Rational>,
}

impl RadicalSum {
    pub fn zero() -> RadicalSum {
        RadicalSum::default()
    }

    pub fn from_rational(r: Rational) -> RadicalSum {
        let mut s = RadicalSum::zero();
        s.add_radical(&Radical::from_rational(r));
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &Rational)> {
        self.terms.iter()
    }

    pub fn add_radical(&mut self, r: &Radical) {
        if r.is_zero() {
            return;
        }
        let e = self.terms.entry(r.radicand.clone()).or_insert_with(Rational::zero);
        *e += &r.coeff;
        if e.is_zero() {
            self.terms.remove(&r.radicand);
        }
    }

    /// Some(r) when the sum collapses to one term (or zero).
    pub fn as_radical(&self) -> Option<Radical> {
        match self.terms.len() {
            0 => Some(Radical::zero()),
            1 => {
                let (s, c) = self.terms.iter().next().unwrap();
                Some(Radical { coeff: c.clone(), radicand: s.clone() })
            }
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.as_radical() {
            Some(r) if r.radicand.is_one() => Some(r.coeff),
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().map(|r| r.is_one()).unwrap_or(false)
    }

    pub fn mul_radical(&self, r: &Radical) -> RadicalSum {
        let mut out = RadicalSum::zero();
        for (s, c) in &self.terms {
            out.add_radical(&(&Radical { coeff: c.clone(), radicand: s.clone() } * r));
        }
        out
    }

    pub fn to_f64(&self) -> f64 {
        self.terms.iter().map(|(s, c)| Radical { coeff: c.clone(), radicand: s.clone() }.to_f64()).sum()
    }
}

impl AddAssign<&RadicalSum> for RadicalSum {
    fn add_assign(&mut self, rhs: &RadicalSum) {
        for (s, c) in &rhs.terms {
            self.add_radical(&Radical { coeff: c.clone(), radicand: s.clone() });
        }
    }
}

impl Add for &RadicalSum {
    type Output = RadicalSum;
    fn add(self, rhs: &RadicalSum) -> RadicalSum {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Mul for &RadicalSum {
    type Output = RadicalSum;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &RadicalSum) -> RadicalSum {
        let mut out = RadicalSum::zero();
        for (s, c) in &rhs.terms {
            out += &self.mul_radical(&Radical { coeff: c.clone(), radicand: s.clone() });
        }
        out
    }
}

impl Neg for &RadicalSum {
    type Output = RadicalSum;
    fn neg(self) -> RadicalSum {
        RadicalSum { terms: self.terms.iter().map(|(s, c)| (s.clone(), -c.clone())).collect() }
    }
}

impl From<&Radical> for RadicalSum {
    fn from(r: &Radical) -> RadicalSum {
        let mut s = RadicalSum::zero();
        s.add_radical(r);
        s
    }
}

impl fmt::Display for RadicalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, c)) in self.terms.iter().enumerate() {
            let r = Radical { coeff: c.clone(), radicand: s.clone() };
            if i > 0 && !c.is_negative() {
                write!(f, "+")?;
            }
            write!(f, "{}", r)?;
        }
        Ok(())
    }
}

impl fmt::Debug for RadicalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, qf};

    fn bu(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree_decompose(&bu(72)), (bu(6), bu(2)));
        assert_eq!(squarefree_decompose(&bu(1)), (bu(1), bu(1)));
        assert_eq!(squarefree_decompose(&bu(49)), (bu(7), bu(1)));
        // Cofactor that is a square of a prime above the cube root.
        assert_eq!(squarefree_decompose(&bu(3 * 1009 * 1009)), (bu(1009), bu(3)));
        assert_eq!(squarefree_decompose(&bu(1009 * 1013)), (bu(1), bu(1009 * 1013)));
    }

    #[test]
    fn canonical_examples() {
        let r = Radical::canonicalize(q(1), qf(1, 5)).unwrap();
        assert_eq!(r.to_string(), "1/5*sqrt(5)");
        let r = Radical::canonicalize(q(0), qf(7, 3)).unwrap();
        assert_eq!(r, Radical::zero());
        assert_eq!(r.to_string(), "0");
        let r = Radical::canonicalize(qf(151, 4), qf(15, 852734)).unwrap();
        assert_eq!(r.signed_square(), qf(151 * 151, 16) * qf(15, 852734));
        assert!(matches!(Radical::canonicalize(q(1), q(-2)), Err(Error::NegRadicand(_))));
    }

    #[test]
    fn products_and_sums() {
        let a = Radical::sqrt(&q(6)).unwrap();
        let b = Radical::sqrt(&q(10)).unwrap();
        assert_eq!((&a * &b).to_string(), "2*sqrt(15)");
        let h = Radical::sqrt(&qf(1, 2)).unwrap();
        assert_eq!(&h * &h, Radical::from_rational(qf(1, 2)));
        assert!(a.checked_add(&b).is_none());
        let mut s = RadicalSum::from(&a);
        s += &RadicalSum::from(&b);
        s += &(-&RadicalSum::from(&a));
        assert_eq!(s.as_radical(), Some(b.clone()));
        s += &(-&RadicalSum::from(&b));
        assert!(s.is_zero());
    }
}
