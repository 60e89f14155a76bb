//! Spectral coefficients: Laurent polynomials in two variables over `Q(w)`
//! and univariate rational functions in `z` over `Q(w)`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;

use crate::coeff::{Coeff, Field};
use crate::error::Error;
use crate::scalar::Scalar;

/// `sum c_{a,b} x1^a x2^b` with `c_{a,b}` in `Q(w)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SPoly {
    terms: BTreeMap<(i32, i32), Scalar>,
}

impl SPoly {
    pub fn monomial(c: Scalar, a: i32, b: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((a, b), c);
        }
        SPoly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i32, i32), &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, a: i32, b: i32) -> Scalar {
        self.terms.get(&(a, b)).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, k: (i32, i32), c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(v) => {
                *v = v.add(&c);
                if v.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    /// Substitutes `x2 = 1`, leaving a Laurent polynomial in `x1`.
    pub fn to_ratfn(&self) -> RatFn {
        let mut acc = RatFn::zero();
        for (&(a, _), c) in &self.terms {
            acc = acc.add(&RatFn::z_pow(a).scale(c));
        }
        acc
    }

    /// Substitutes scalar values for both variables.
    pub fn eval(&self, x1: &Scalar, x2: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for (&(a, b), c) in &self.terms {
            acc = acc.add(&c.mul(&x1.pow(a)).mul(&x2.pow(b)));
        }
        acc
    }
}

impl Coeff for SPoly {
    fn zero() -> Self {
        SPoly::default()
    }
    fn one() -> Self {
        Self::monomial(Scalar::one(), 0, 0)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(*k, c.clone());
        }
        r
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn neg(&self) -> Self {
        SPoly { terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect() }
    }
    fn mul(&self, o: &Self) -> Self {
        let mut r = SPoly::default();
        for (ka, a) in &self.terms {
            for (kb, b) in &o.terms {
                r.add_term((ka.0 + kb.0, ka.1 + kb.1), a.mul(b));
            }
        }
        r
    }
    fn from_scalar(s: Scalar) -> Self {
        Self::monomial(s, 0, 0)
    }
    fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return SPoly::default();
        }
        SPoly { terms: self.terms.iter().map(|(k, c)| (*k, c.mul(s))).collect() }
    }
    fn var_pow(idx: usize, e: i32) -> Option<Self> {
        match idx {
            0 => Some(Self::monomial(Scalar::one(), e, 0)),
            1 => Some(Self::monomial(Scalar::one(), 0, e)),
            _ => None,
        }
    }
}

impl fmt::Display for SPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&(a, b), c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            if a != 0 {
                write!(f, "*x1^{a}")?;
            }
            if b != 0 {
                write!(f, "*x2^{b}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A polynomial in `z` over `Q(w)`, dense from degree 0, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ZPoly {
    c: Vec<Scalar>,
}

impl ZPoly {
    pub fn from_coeffs(mut c: Vec<Scalar>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        ZPoly { c }
    }

    pub fn constant(s: Scalar) -> Self {
        Self::from_coeffs(vec![s])
    }

    /// `z^k`, `k >= 0`.
    pub fn z_pow(k: usize) -> Self {
        let mut c = vec![Scalar::zero(); k + 1];
        c[k] = Scalar::one();
        ZPoly { c }
    }

    /// `z - a`.
    pub fn linear(a: &Scalar) -> Self {
        Self::from_coeffs(vec![a.neg(), Scalar::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.c
    }

    pub fn leading(&self) -> Scalar {
        self.c.last().cloned().unwrap_or_default()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.c.get(k);
            let b = o.c.get(k);
            c.push(match (a, b) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => Scalar::zero(),
            });
        }
        Self::from_coeffs(c)
    }

    pub fn neg(&self) -> Self {
        ZPoly { c: self.c.iter().map(|x| x.neg()).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return ZPoly::default();
        }
        let mut c = vec![Scalar::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] = c[i + j].add(&a.mul(b));
                }
            }
        }
        Self::from_coeffs(c)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self::from_coeffs(self.c.iter().map(|x| x.mul(s)).collect())
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return ZPoly::default();
        }
        let mut c = vec![Scalar::zero(); k];
        c.extend(self.c.iter().cloned());
        ZPoly { c }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return ZPoly::default();
        }
        let l = self.leading().inv().expect("nonzero leading coefficient");
        self.scale(&l)
    }

    /// Euclidean division.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self), Error> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let linv = d.leading().inv().ok_or(Error::DivisionByZero)?;
        let mut r = self.c.clone();
        if r.len() <= dd {
            return Ok((ZPoly::default(), self.clone()));
        }
        let mut q = vec![Scalar::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let top = r[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            let t = top.mul(&linv);
            for (j, b) in d.c.iter().enumerate() {
                if !b.is_zero() {
                    r[k + j] = r[k + j].sub(&t.mul(b));
                }
            }
            q[k] = t;
        }
        r.truncate(dd);
        Ok((Self::from_coeffs(q), Self::from_coeffs(r)))
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.c.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Number of leading zero coefficients (the power of `z` dividing `self`).
    pub fn z_valuation(&self) -> usize {
        self.c.iter().take_while(|x| x.is_zero()).count()
    }

    /// Splits off factors `(z - q^k)` for `|k| <= bound`, returning the
    /// exponents with multiplicity and the cofactor.
    pub fn factor_q_powers(&self, bound: i32) -> (Vec<i32>, ZPoly) {
        let mut rest = self.clone();
        let mut found = Vec::new();
        if rest.is_zero() {
            return (found, rest);
        }
        for k in -bound..=bound {
            let root = Scalar::q_pow(k);
            loop {
                if rest.degree().unwrap_or(0) == 0 || !rest.eval(&root).is_zero() {
                    break;
                }
                let (quo, r) = rest.div_rem(&ZPoly::linear(&root)).expect("monic divisor");
                debug_assert!(r.is_zero());
                rest = quo;
                found.push(k);
            }
        }
        (found, rest)
    }

    fn fmt_with(&self, var: &str) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        let mut s = String::new();
        let mut first = true;
        for (k, c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                s.push_str(" + ");
            }
            first = false;
            let _ = write!(s, "{c}");
            match k {
                0 => {}
                1 => {
                    let _ = write!(s, "*{var}");
                }
                _ => {
                    let _ = write!(s, "*{var}^{k}");
                }
            }
        }
        s
    }
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with("z"))
    }
}

impl fmt::Debug for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An element of `Q(w)(z)`: reduced `num / den` with `den` monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: ZPoly,
    den: ZPoly,
}

impl RatFn {
    pub fn zero() -> Self {
        RatFn { num: ZPoly::default(), den: ZPoly::constant(Scalar::one()) }
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(s: Scalar) -> Self {
        RatFn { num: ZPoly::constant(s), den: ZPoly::constant(Scalar::one()) }
    }

    pub fn z() -> Self {
        Self::z_pow(1)
    }

    pub fn z_pow(k: i32) -> Self {
        if k >= 0 {
            RatFn { num: ZPoly::z_pow(k as usize), den: ZPoly::constant(Scalar::one()) }
        } else {
            RatFn { num: ZPoly::constant(Scalar::one()), den: ZPoly::z_pow((-k) as usize) }
        }
    }

    pub fn from_poly(p: ZPoly) -> Self {
        RatFn { num: p, den: ZPoly::constant(Scalar::one()) }
    }

    pub fn new(num: ZPoly, den: ZPoly) -> Result<Self, Error> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: ZPoly, den: ZPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if den.degree() == Some(0) {
            let inv = den.leading().inv().expect("nonzero");
            return RatFn { num: num.scale(&inv), den: ZPoly::constant(Scalar::one()) };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_rem(&g).expect("gcd").0, den.div_rem(&g).expect("gcd").0)
        };
        let l = den.leading().inv().expect("nonzero");
        RatFn { num: num.scale(&l), den: den.scale(&l) }
    }

    pub fn numer(&self) -> &ZPoly {
        &self.num
    }

    pub fn denom(&self) -> &ZPoly {
        &self.den
    }

    /// `(num, den)` as plain polynomials.
    pub fn parts(&self) -> (ZPoly, ZPoly) {
        (self.num.clone(), self.den.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.degree() == Some(0) && self.num == self.den
    }

    /// The value if `self` does not depend on `z`.
    pub fn to_constant(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        (self.den.degree() == Some(0) && self.num.degree() == Some(0)).then(|| self.num.leading().clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Self::reduce(self.num.add(&o.num), self.den.clone());
        }
        Self::reduce(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn neg(&self) -> Self {
        RatFn { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        Self::reduce(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        RatFn { num: self.num.scale(s), den: self.den.clone() }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Self) -> Result<Self, Error> {
        Ok(self.mul(&o.inv().ok_or(Error::DivisionByZero)?))
    }

    pub fn pow(&self, k: i32) -> Self {
        let base = if k < 0 { self.inv().expect("nonzero base") } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// Substitutes `z = c`.
    pub fn specialize(&self, c: &Scalar) -> Result<Scalar, Error> {
        let d = self.den.eval(c);
        if d.is_zero() {
            let (ks, _) = self.den.factor_q_powers(64);
            let factor = ks
                .iter()
                .find(|&&k| Scalar::q_pow(k) == *c)
                .map(|k| alloc::format!("z - q^{k}"))
                .unwrap_or_else(|| alloc::format!("{}", self.den));
            return Err(Error::Pole { point: alloc::format!("{c}"), factor });
        }
        self.num.eval(c).div(&d)
    }

    /// Substitutes `z -> 1/z`.
    pub fn invert_variable(&self) -> Self {
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        let rev = |p: &ZPoly, d: usize| -> ZPoly {
            let mut c = p.c.clone();
            c.resize(d + 1, Scalar::zero());
            c.reverse();
            ZPoly::from_coeffs(c)
        };
        let mut n = rev(&self.num, dn);
        let mut d = rev(&self.den, dd);
        if dn > dd {
            d = d.shift(dn - dd);
        } else {
            n = n.shift(dd - dn);
        }
        Self::reduce(n, d)
    }

    /// Exponents `k` of the denominator factors `(z - q^k)`, with the leftover
    /// cofactor (a constant when the denominator splits completely).
    pub fn pole_exponents(&self, bound: i32) -> (Vec<i32>, ZPoly) {
        self.den.factor_q_powers(bound)
    }
}

impl Coeff for RatFn {
    fn zero() -> Self {
        RatFn::zero()
    }
    fn one() -> Self {
        RatFn::one()
    }
    fn is_zero(&self) -> bool {
        RatFn::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        RatFn::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RatFn::sub(self, o)
    }
    fn neg(&self) -> Self {
        RatFn::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        RatFn::mul(self, o)
    }
    fn from_scalar(s: Scalar) -> Self {
        RatFn::constant(s)
    }
    fn scale(&self, s: &Scalar) -> Self {
        RatFn::scale(self, s)
    }
    fn var_pow(idx: usize, e: i32) -> Option<Self> {
        (idx == 0).then(|| RatFn::z_pow(e))
    }
}

impl Field for RatFn {
    fn inv(&self) -> Option<Self> {
        RatFn::inv(self)
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]/[{}]", self.num, self.den)
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `(1 - q^k z) / (z - q^k)`.
pub fn mobius(k: i32) -> RatFn {
    let qk = Scalar::q_pow(k);
    let num = ZPoly::from_coeffs(vec![Scalar::one(), qk.neg()]);
    RatFn::new(num, ZPoly::linear(&qk)).expect("nonzero denominator")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specialize_at_one() {
        let r = mobius(2);
        assert_eq!(r.specialize(&Scalar::one()).unwrap(), Scalar::one());
        assert!(matches!(r.specialize(&Scalar::q_pow(2)), Err(Error::Pole { .. })));
        assert_eq!(RatFn::z().specialize(&Scalar::q_pow(4)).unwrap(), Scalar::q_pow(4));
    }

    #[test]
    fn q_power_factoring() {
        let d = ZPoly::linear(&Scalar::q_pow(2)).mul(&ZPoly::linear(&Scalar::q_pow(6)));
        let (ks, rest) = d.factor_q_powers(10);
        assert_eq!(ks, vec![2, 6]);
        assert_eq!(rest.degree(), Some(0));
        let d2 = ZPoly::linear(&Scalar::q_pow(2)).mul(&ZPoly::linear(&Scalar::q_pow(2)));
        assert_eq!(d2.factor_q_powers(10).0, vec![2, 2]);
        assert!(ZPoly::constant(Scalar::one()).factor_q_powers(10).0.is_empty());
    }

    #[test]
    fn mobius_unitarity() {
        for k in [-3, 2, 5] {
            let r = mobius(k);
            assert!(r.mul(&r.invert_variable()).is_one());
        }
    }

    #[test]
    fn reduction_cancels() {
        let a = ZPoly::linear(&Scalar::q());
        let b = ZPoly::linear(&Scalar::from_i64(3));
        let r = RatFn::new(a.mul(&b), b.scale(&Scalar::from_i64(5))).unwrap();
        assert_eq!(r, RatFn::from_poly(a.scale(&Scalar::from_i64(5).inv().unwrap())));
    }
}
