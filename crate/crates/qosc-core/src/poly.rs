//! Laurent polynomials in `w` with integer coefficients.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A finite sum `sum_k c_k w^k` with `c_k` integers.
///
/// Stored densely from the lowest exponent `lo`. The first and last stored
/// coefficients are nonzero; the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    lo: i32,
    coeffs: Vec<BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { lo: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_i64(c: i64) -> Self {
        Self::constant(BigInt::from(c))
    }

    /// `c * w^e`.
    pub fn monomial(c: BigInt, e: i32) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { lo: e, coeffs: vec![c] }
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents are summed.
    pub fn from_terms<I: IntoIterator<Item = (i32, BigInt)>>(terms: I) -> Self {
        let terms: Vec<(i32, BigInt)> = terms.into_iter().collect();
        if terms.is_empty() {
            return Self::zero();
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += c;
        }
        Self::normalized(lo, coeffs)
    }

    fn normalized(mut lo: i32, mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead_zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros == coeffs.len() {
            return Self::zero();
        }
        if lead_zeros > 0 {
            coeffs.drain(..lead_zeros);
            lo += lead_zeros as i32;
        }
        LaurentPoly { lo, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.lo == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// True for `c * w^e` (including constants).
    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    /// Lowest exponent with nonzero coefficient (0 for the zero polynomial).
    pub fn low_exp(&self) -> i32 {
        self.lo
    }

    /// Highest exponent with nonzero coefficient (0 for the zero polynomial).
    pub fn high_exp(&self) -> i32 {
        if self.is_zero() {
            0
        } else {
            self.lo + self.coeffs.len() as i32 - 1
        }
    }

    pub fn coeff(&self, e: i32) -> BigInt {
        if e < self.lo {
            return BigInt::zero();
        }
        self.coeffs.get((e - self.lo) as usize).cloned().unwrap_or_default()
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigInt)> + '_ {
        let lo = self.lo;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (lo + k as i32, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.high_exp().max(other.high_exp());
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.lo - lo) as usize + k] += c;
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            coeffs[(other.lo - lo) as usize + k] += c;
        }
        Self::normalized(lo, coeffs)
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { lo: self.lo, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if other.is_monomial() {
            return self.mul_monomial(&other.coeffs[0], other.lo);
        }
        if self.is_monomial() {
            return other.mul_monomial(&self.coeffs[0], self.lo);
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::normalized(self.lo + other.lo, coeffs)
    }

    fn mul_monomial(&self, c: &BigInt, e: i32) -> Self {
        if c.is_one() {
            return self.shift(e);
        }
        LaurentPoly { lo: self.lo + e, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiplication by `w^e`.
    pub fn shift(&self, e: i32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentPoly { lo: self.lo + e, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        self.mul_monomial(c, 0)
    }

    /// Exact division of every coefficient by `c`.
    pub fn div_exact_int(&self, c: &BigInt) -> Self {
        LaurentPoly { lo: self.lo, coeffs: self.coeffs.iter().map(|a| a / c).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// The involution `w -> w^{-1}`.
    pub fn bar(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        LaurentPoly { lo: -self.high_exp(), coeffs }
    }

    /// Nonnegative gcd of all coefficients.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// The same polynomial with `lo = 0`.
    fn to_poly(&self) -> Self {
        self.shift(-self.lo)
    }

    fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading_coeff().is_negative() {
            c = -c;
        }
        self.div_exact_int(&c)
    }

    /// Pseudo-remainder of ordinary polynomials (`lo = 0` for both).
    fn prem(a: &Self, b: &Self) -> Self {
        let db = b.degree();
        let lb = b.leading_coeff();
        let mut r = a.coeffs.clone();
        while r.len() > db && !r.is_empty() {
            let lr = r.last().unwrap().clone();
            let shift = r.len() - 1 - db;
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (k, bc) in b.coeffs.iter().enumerate() {
                r[shift + k] -= &lr * bc;
            }
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        Self::normalized(0, r)
    }

    /// Greatest common divisor up to units of `Z[w, w^{-1}]`: primitive, lowest
    /// exponent 0, positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.to_poly().primitive();
        }
        if other.is_zero() {
            return self.to_poly().primitive();
        }
        let cont = self.content().gcd(&other.content());
        let mut a = self.to_poly().primitive();
        let mut b = other.to_poly().primitive();
        if a.degree() < b.degree() {
            core::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.degree() == 0 {
                a = Self::one();
                break;
            }
            let r = Self::prem(&a, &b).to_poly();
            a = b;
            b = r.primitive();
        }
        a.primitive().scale(&cont)
    }

    /// Exact quotient `self / d`; `None` when `d` does not divide `self` in `Z[w, w^{-1}]`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let a = self.to_poly();
        let b = d.to_poly();
        if a.degree() < b.degree() {
            return None;
        }
        let lb = b.leading_coeff();
        let mut r = a.coeffs.clone();
        let mut q = vec![BigInt::zero(); a.degree() - b.degree() + 1];
        for k in (0..q.len()).rev() {
            let top = r[k + b.degree()].clone();
            if top.is_zero() {
                continue;
            }
            let (qc, rem) = top.div_rem(&lb);
            if !rem.is_zero() {
                return None;
            }
            for (j, bc) in b.coeffs.iter().enumerate() {
                r[k + j] -= &qc * bc;
            }
            q[k] = qc;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::normalized(self.lo - d.lo, q))
    }
}

impl Default for LaurentPoly {
    fn default() -> Self {
        Self::zero()
    }
}

impl PartialOrd for LaurentPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An arbitrary but total order, used only for deterministic containers.
impl Ord for LaurentPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lo
            .cmp(&other.lo)
            .then(self.coeffs.len().cmp(&other.coeffs.len()))
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

/// Text form with descending exponents, e.g. `w^2 - 1 + 3w^-2`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mut s = String::new();
            if e == 0 {
                s = alloc::format!("{mag}");
            } else {
                if !mag.is_one() {
                    s.push_str(&alloc::format!("{mag}*"));
                }
                if e == 1 {
                    s.push('w');
                } else {
                    s.push_str(&alloc::format!("w^{e}"));
                }
            }
            f.write_str(&s)?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn p(terms: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(e, c)| (e, BigInt::from(c))))
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (w^2 - 1)(w + 2) and (w^2 - 1)(w - 3)
        let f = p(&[(2, 1), (0, -1)]);
        let a = f.mul(&p(&[(1, 1), (0, 2)]));
        let b = f.mul(&p(&[(1, 1), (0, -3)]));
        assert_eq!(a.gcd(&b), f);
    }

    #[test]
    fn exact_division() {
        let f = p(&[(2, 1), (0, -1)]);
        let g = p(&[(-1, 2), (1, 5)]);
        assert_eq!(f.mul(&g).div_exact(&g), Some(f.clone()));
        assert_eq!(f.div_exact(&p(&[(1, 1), (0, 2)])), None);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[(2, 1), (-2, -1)]).to_string(), "w^2 - w^-2");
        assert_eq!(p(&[(0, -3), (1, 2)]).to_string(), "2*w - 3");
    }
}
