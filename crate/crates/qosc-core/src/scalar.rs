//! The coefficient field `Q(w)`, with `q = -w^2`, `v = w` and `q~ = -q^{-1} = w^{-2}`.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::Error;
use crate::poly::LaurentPoly;

/// A reduced fraction of Laurent polynomials in `w`.
///
/// Canonical form: `gcd(num, den)` is a unit, the integer contents are
/// coprime, `den` has lowest exponent 0 and a positive leading coefficient.
/// Equality is therefore structural.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn from_i64(c: i64) -> Self {
        Self::from_poly(LaurentPoly::from_i64(c))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Scalar { num: p, den: LaurentPoly::one() }
    }

    /// `c * w^e`.
    pub fn monomial(c: i64, e: i32) -> Self {
        Self::from_poly(LaurentPoly::monomial(BigInt::from(c), e))
    }

    /// `w^e`.
    pub fn w_pow(e: i32) -> Self {
        Self::monomial(1, e)
    }

    pub fn q() -> Self {
        Self::q_pow(1)
    }

    /// `q^k = (-1)^k w^{2k}`.
    pub fn q_pow(k: i32) -> Self {
        Self::monomial(if k.rem_euclid(2) == 0 { 1 } else { -1 }, 2 * k)
    }

    /// `q~^k = w^{-2k}`.
    pub fn qt_pow(k: i32) -> Self {
        Self::w_pow(-2 * k)
    }

    /// The quantum integer `[m]` in `q`.
    pub fn qint(m: i64) -> Self {
        Self::from_poly(qint(m))
    }

    /// Builds `num / den` in canonical form.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, Error> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (mut num, mut den) = if den.is_monomial() {
            let s = den.low_exp();
            (num.shift(-s), den.shift(-s))
        } else {
            let g = num.gcd(&den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
            }
        };
        let s = den.low_exp();
        if s != 0 {
            num = num.shift(-s);
            den = den.shift(-s);
        }
        let c = num.content().gcd(&den.content());
        let c = if den.leading_coeff().is_negative() { -c } else { c };
        if !c.is_one() {
            num = num.div_exact_int(&c);
            den = den.div_exact_int(&c);
        }
        Scalar { num, den }
    }

    pub fn numer(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denom(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// `e` with `self = q^e`, if there is one.
    pub fn q_exponent(&self) -> Option<i32> {
        if !self.num.is_monomial() || !self.den.is_monomial() {
            return None;
        }
        let e = self.num.low_exp() - self.den.low_exp();
        if e % 2 != 0 {
            return None;
        }
        (*self == Scalar::q_pow(e / 2)).then_some(e / 2)
    }

    /// True when the denominator is 1.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            if self.den.is_one() {
                return Self::from_poly(self.num.add(&o.num));
            }
            return Self::reduce(self.num.add(&o.num), self.den.clone());
        }
        Self::reduce(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn neg(&self) -> Self {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return Self::from_poly(self.num.mul(&o.num));
        }
        Self::reduce(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Self) -> Result<Self, Error> {
        let inv = o.inv().ok_or(Error::DivisionByZero)?;
        Ok(self.mul(&inv))
    }

    pub fn pow(&self, k: i32) -> Self {
        let base = if k < 0 { self.inv().expect("nonzero base for negative power") } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// The involution `w -> w^{-1}` (so `q -> q^{-1}`).
    pub fn bar(&self) -> Self {
        Self::reduce(self.num.bar(), self.den.bar())
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<i64> for Scalar {
    fn from(c: i64) -> Self {
        Self::from_i64(c)
    }
}

/// `[m] = (q^m - q^{-m}) / (q - q^{-1})` as a Laurent polynomial in `w`.
pub fn qint(m: i64) -> LaurentPoly {
    if m == 0 {
        return LaurentPoly::zero();
    }
    let a = m.abs();
    let sign = if m < 0 { -1 } else { 1 };
    // [a] = sum_{j=0}^{a-1} q^{a-1-2j}
    LaurentPoly::from_terms((0..a).map(|j| {
        let k = (a - 1 - 2 * j) as i32;
        let s = if k.rem_euclid(2) == 0 { sign } else { -sign };
        (2 * k, BigInt::from(s))
    }))
}

/// `[m]! = [1][2]...[m]`.
pub fn qfact(m: u32) -> LaurentPoly {
    (1..=m as i64).fold(LaurentPoly::one(), |acc, j| acc.mul(&qint(j)))
}

/// The quantum binomial coefficient in `q`.
pub fn qbinom(m: i64, k: i64) -> Result<LaurentPoly, Error> {
    if m < 0 || k < 0 || k > m {
        return Err(Error::Domain("binomial index out of range"));
    }
    // Pascal rule keeps everything polynomial.
    let mut row: Vec<LaurentPoly> = alloc::vec![LaurentPoly::one()];
    for mm in 1..=m {
        let mut next = Vec::with_capacity(row.len() + 1);
        for kk in 0..=mm {
            let left = if kk < mm { row[kk as usize].mul(&Scalar::q_pow(kk as i32).num) } else { LaurentPoly::zero() };
            let right = if kk > 0 {
                row[(kk - 1) as usize].mul(&Scalar::q_pow((kk - mm) as i32).num)
            } else {
                LaurentPoly::zero()
            };
            next.push(left.add(&right));
        }
        row = next;
    }
    Ok(row[k as usize].clone())
}

/// The quantum binomial coefficient with `q` replaced by an arbitrary base `t`.
pub fn tbinom(m: i64, k: i64, t: &Scalar) -> Result<Scalar, Error> {
    if m < 0 || k < 0 || k > m {
        return Err(Error::Domain("binomial index out of range"));
    }
    let mut num = Scalar::one();
    let mut den = Scalar::one();
    for j in 0..k {
        num = num.mul(&tint(m - j, t));
        den = den.mul(&tint(j + 1, t));
    }
    num.div(&den)
}

/// `[m]_t` for an arbitrary base `t`.
pub fn tint(m: i64, t: &Scalar) -> Scalar {
    let a = m.abs();
    let mut acc = Scalar::zero();
    for j in 0..a {
        acc = acc.add(&t.pow((a - 1 - 2 * j) as i32));
    }
    if m < 0 {
        acc.neg()
    } else {
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qint_small() {
        assert!(qint(0).is_zero());
        assert_eq!(Scalar::qint(2), Scalar::q().add(&Scalar::q_pow(-1)));
        let three = Scalar::q_pow(2).add(&Scalar::one()).add(&Scalar::q_pow(-2));
        assert_eq!(Scalar::qint(-3), three.neg());
    }

    #[test]
    fn qint_matches_quotient() {
        let q = Scalar::q();
        let d = q.sub(&q.inv().unwrap());
        for m in -6..=6 {
            let expect = q.pow(m).sub(&q.pow(-m)).div(&d).unwrap();
            assert_eq!(Scalar::qint(m as i64), expect, "m = {m}");
        }
    }

    #[test]
    fn qbinom_four_two() {
        let lhs = Scalar::from_poly(qbinom(4, 2).unwrap());
        let rhs = Scalar::from_poly(qint(4).mul(&qint(3))).div(&Scalar::from_poly(qint(2))).unwrap();
        assert_eq!(lhs, rhs);
        assert!(qbinom(2, 3).is_err());
    }

    #[test]
    fn canonical_form() {
        let a = Scalar::new(LaurentPoly::from_i64(-2), LaurentPoly::monomial(BigInt::from(-4), 3)).unwrap();
        assert_eq!(a, Scalar::monomial(1, -3).div(&Scalar::from_i64(2)).unwrap());
        assert_eq!(a.denom(), &LaurentPoly::from_i64(2));
        let q = Scalar::q();
        let x = q.add(&Scalar::one()).mul(&q.sub(&Scalar::one()));
        let y = x.div(&q.sub(&Scalar::one())).unwrap();
        assert_eq!(y, q.add(&Scalar::one()));
        assert!(y.is_laurent());
    }

    #[test]
    fn bar_of_q() {
        assert_eq!(Scalar::q().bar(), Scalar::q_pow(-1));
        assert_eq!(Scalar::w_pow(3).bar(), Scalar::w_pow(-3));
        assert_eq!(Scalar::qint(5).bar(), Scalar::qint(5));
    }

    #[test]
    fn v_squared_is_minus_q() {
        assert_eq!(Scalar::w_pow(2), Scalar::q().neg());
        assert_eq!(Scalar::qt_pow(1), Scalar::q().inv().unwrap().neg());
    }
}
