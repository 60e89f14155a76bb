//! The sequence `epsilon`, the weight lattice `P = Z Lambda + sum Z delta_i`,
//! its bilinear form, simple roots and the pairing `q(mu, nu)`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_rational::Ratio;

use crate::error::Error;
use crate::scalar::Scalar;

/// Shape of an `epsilon` sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    /// `(1,0,1,...,0,1)` of odd length.
    Alternating,
    /// `(0,1,0,...,1,0)` of odd length.
    AlternatingPrime,
    AllZero,
    AllOne,
    Generic,
}

/// A 0/1 sequence `(eps_1, ..., eps_n)` with `n >= 4`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Epsilon {
    bits: Vec<u8>,
}

impl Epsilon {
    pub fn new(bits: Vec<u8>) -> Result<Self, Error> {
        if bits.len() < 4 {
            return Err(Error::Domain("epsilon must have length at least 4"));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Domain("epsilon entries must be 0 or 1"));
        }
        Ok(Epsilon { bits })
    }

    /// `(1,0,1,...,0,1)` with `n = 2m+1`.
    pub fn alternating(m: usize) -> Self {
        Epsilon { bits: (0..2 * m + 1).map(|k| if k % 2 == 0 { 1 } else { 0 }).collect() }
    }

    /// `(0,1,0,...,1,0)` with `n = 2m+1`.
    pub fn alternating_prime(m: usize) -> Self {
        Epsilon { bits: (0..2 * m + 1).map(|k| if k % 2 == 0 { 0 } else { 1 }).collect() }
    }

    pub fn n(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// `eps_i` for `1 <= i <= n`.
    pub fn bit(&self, i: usize) -> u8 {
        self.bits[i - 1]
    }

    pub fn flavor(&self) -> Flavor {
        let n = self.n();
        let alt = |start: u8| n % 2 == 1 && self.bits.iter().enumerate().all(|(k, &b)| b == if k % 2 == 0 { start } else { 1 - start });
        if alt(1) {
            Flavor::Alternating
        } else if alt(0) {
            Flavor::AlternatingPrime
        } else if self.bits.iter().all(|&b| b == 0) {
            Flavor::AllZero
        } else if self.bits.iter().all(|&b| b == 1) {
            Flavor::AllOne
        } else {
            Flavor::Generic
        }
    }

    /// `q_i`: `q` when `eps_i = 0`, `q~ = -q^{-1}` when `eps_i = 1`.
    pub fn q_i(&self, i: usize) -> Scalar {
        self.q_i_pow(i, 1)
    }

    pub fn q_i_pow(&self, i: usize, k: i32) -> Scalar {
        if self.bit(i) == 0 {
            Scalar::q_pow(k)
        } else {
            Scalar::qt_pow(k)
        }
    }

    /// `(-1)^{eps_i}`.
    pub fn sign(&self, i: usize) -> i64 {
        if self.bit(i) == 0 {
            1
        } else {
            -1
        }
    }

    pub fn delta(&self, i: usize) -> Weight {
        Weight::delta(self.n(), i)
    }

    pub fn lambda(&self) -> Weight {
        Weight::lambda(self.n())
    }

    /// The simple root `alpha_i`, `i` in `{0, ..., n}`.
    pub fn simple_root(&self, i: usize) -> Result<Weight, Error> {
        let n = self.n();
        let d = |a| Weight::delta(n, a);
        match i {
            0 => Ok(d(1) + d(2)),
            i if i < n => Ok(d(i + 1) - d(i)),
            i if i == n => Ok(-(d(n - 1) + d(n))),
            _ => Err(Error::Domain("root index out of range")),
        }
    }

    pub fn root(&self, i: usize) -> Weight {
        self.simple_root(i).expect("index in range")
    }

    /// True when `(alpha_i | alpha_i) = 0`.
    pub fn is_odd(&self, i: usize) -> bool {
        let a = self.root(i);
        self.bilinear(&a, &a) == Ratio::from_integer(0)
    }

    /// The symmetric form with `(delta_i|delta_j) = (-1)^{eps_i} delta_ij`,
    /// `(delta_i|Lambda) = -1/2` and `(Lambda|Lambda) = sum (-1)^{eps_i} / 4`.
    pub fn bilinear(&self, mu: &Weight, nu: &Weight) -> Ratio<i64> {
        let mut acc = Ratio::from_integer(0i64);
        for i in 1..=self.n() {
            acc += Ratio::from_integer(self.sign(i) * mu.d(i) as i64 * nu.d(i) as i64);
        }
        let smu: i64 = mu.delta.iter().map(|&x| x as i64).sum();
        let snu: i64 = nu.delta.iter().map(|&x| x as i64).sum();
        acc -= Ratio::new(mu.lam as i64 * snu + nu.lam as i64 * smu, 2);
        let sgn: i64 = (1..=self.n()).map(|i| self.sign(i)).sum();
        acc += Ratio::new(mu.lam as i64 * nu.lam as i64 * sgn, 4);
        acc
    }

    /// `q(mu, nu) = v^{sum_j (l' mu_j + l nu_j)} prod_i q_i^{mu_i nu_i}`.
    pub fn qpair(&self, mu: &Weight, nu: &Weight) -> Scalar {
        let mut wexp: i32 = 0;
        let mut sign_odd = false;
        for j in 1..=self.n() {
            wexp += nu.lam * mu.d(j) + mu.lam * nu.d(j);
            let k = mu.d(j) * nu.d(j);
            if self.bit(j) == 0 {
                wexp += 2 * k;
                sign_odd ^= k.rem_euclid(2) == 1;
            } else {
                wexp -= 2 * k;
            }
        }
        Scalar::monomial(if sign_odd { -1 } else { 1 }, wexp)
    }

    /// `varpi_i` for `1 <= i <= n`, dual to `alpha_1, ..., alpha_n`.
    pub fn fundamental_weight(&self, i: usize) -> Weight {
        let n = self.n();
        let td = |a| Weight::delta(n, a).scaled(self.sign(a) as i32);
        let lam = Weight::lambda(n);
        if i == n {
            lam
        } else if i == n - 1 {
            lam + td(n)
        } else {
            let mut w = lam.scaled(2);
            for a in (i + 1)..=n {
                w = w + td(a);
            }
            w
        }
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, b) in self.bits.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// `lam * Lambda + sum_i delta[i-1] * delta_i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Weight {
    pub lam: i32,
    pub delta: Vec<i32>,
}

impl Weight {
    pub fn zero(n: usize) -> Self {
        Weight { lam: 0, delta: vec![0; n] }
    }

    pub fn lambda(n: usize) -> Self {
        Weight { lam: 1, delta: vec![0; n] }
    }

    pub fn delta(n: usize, i: usize) -> Self {
        let mut w = Self::zero(n);
        w.delta[i - 1] = 1;
        w
    }

    pub fn new(lam: i32, delta: Vec<i32>) -> Self {
        Weight { lam, delta }
    }

    pub fn n(&self) -> usize {
        self.delta.len()
    }

    /// Coefficient of `delta_i`.
    pub fn d(&self, i: usize) -> i32 {
        self.delta[i - 1]
    }

    pub fn scaled(&self, k: i32) -> Self {
        Weight { lam: self.lam * k, delta: self.delta.iter().map(|x| x * k).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.lam == 0 && self.delta.iter().all(|&x| x == 0)
    }

    /// Sum of the `delta` coefficients.
    pub fn degree(&self) -> i32 {
        self.delta.iter().sum()
    }

    /// True when the `delta` coefficients vanish outside `kept` (1-based positions).
    pub fn supported_on(&self, kept: &[usize]) -> bool {
        (1..=self.n()).all(|i| kept.contains(&i) || self.d(i) == 0)
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, o: Weight) -> Weight {
        &self + &o
    }
}

impl<'a> Add<&'a Weight> for &'a Weight {
    type Output = Weight;
    fn add(self, o: &Weight) -> Weight {
        Weight { lam: self.lam + o.lam, delta: self.delta.iter().zip(&o.delta).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, o: Weight) -> Weight {
        &self - &o
    }
}

impl<'a> Sub<&'a Weight> for &'a Weight {
    type Output = Weight;
    fn sub(self, o: &Weight) -> Weight {
        Weight { lam: self.lam - o.lam, delta: self.delta.iter().zip(&o.delta).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        self.scaled(-1)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*L", self.lam)?;
        for (k, c) in self.delta.iter().enumerate() {
            write!(f, " + {}*d{}", c, k + 1)?;
        }
        Ok(())
    }
}

/// Coordinates with respect to a linearly independent family of roots.
#[derive(Clone, Debug)]
pub struct RootBasis {
    roots: Vec<Weight>,
}

impl RootBasis {
    pub fn new(roots: Vec<Weight>) -> Self {
        RootBasis { roots }
    }

    pub fn roots(&self) -> &[Weight] {
        &self.roots
    }

    /// Coordinates of `w`, if it lies in the span.
    pub fn coords(&self, w: &Weight) -> Option<Vec<Ratio<i64>>> {
        let r = self.roots.len();
        let dim = w.n() + 1;
        let mut m: Vec<Vec<Ratio<i64>>> = (0..dim)
            .map(|row| {
                let mut v: Vec<Ratio<i64>> = (0..r)
                    .map(|c| {
                        let x = &self.roots[c];
                        Ratio::from_integer(if row == 0 { x.lam } else { x.delta[row - 1] } as i64)
                    })
                    .collect();
                v.push(Ratio::from_integer(if row == 0 { w.lam } else { w.delta[row - 1] } as i64));
                v
            })
            .collect();
        let zero = Ratio::from_integer(0);
        let mut prow = 0;
        let mut piv = Vec::new();
        for col in 0..r {
            let Some(p) = (prow..dim).find(|&i| m[i][col] != zero) else { continue };
            m.swap(prow, p);
            let inv = Ratio::from_integer(1) / m[prow][col];
            for x in m[prow].iter_mut() {
                *x *= inv;
            }
            for i in 0..dim {
                if i != prow && m[i][col] != zero {
                    let f = m[i][col];
                    for c in 0..=r {
                        let v = m[prow][c];
                        m[i][c] -= f * v;
                    }
                }
            }
            piv.push(col);
            prow += 1;
        }
        if (prow..dim).any(|i| m[i][r] != zero) {
            return None;
        }
        let mut out = vec![zero; r];
        for (row, &col) in piv.iter().enumerate() {
            out[col] = m[row][r];
        }
        Some(out)
    }

    /// True when `w` is a nonnegative integer combination of the roots.
    pub fn in_cone(&self, w: &Weight) -> bool {
        match self.coords(w) {
            Some(c) => c.iter().all(|x| x.is_integer() && *x >= Ratio::from_integer(0)),
            None => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_and_pairing() {
        let e = Epsilon::alternating(2);
        assert_eq!(e.root(0), e.delta(1) + e.delta(2));
        assert_eq!(e.root(1), e.delta(2) - e.delta(1));
        assert_eq!(e.root(5), -(e.delta(4) + e.delta(5)));
        assert_eq!(e.bilinear(&e.delta(1), &e.delta(1)), Ratio::from_integer(-1));
        assert_eq!(e.qpair(&e.lambda(), &e.delta(3)), Scalar::w_pow(1));
        for i in 1..=5 {
            assert_eq!(e.qpair(&e.delta(i), &e.delta(i)), e.q_i(i));
        }
    }

    #[test]
    fn fundamental_weights_are_dual() {
        for e in [Epsilon::alternating(2), Epsilon::alternating_prime(3), Epsilon::new(vec![0, 0, 1, 1, 0, 1]).unwrap()] {
            for i in 1..=e.n() {
                for j in 1..=e.n() {
                    let v = e.bilinear(&e.fundamental_weight(i), &e.root(j));
                    assert_eq!(v, Ratio::from_integer(if i == j { 1 } else { 0 }), "{e} {i} {j}");
                }
            }
        }
    }

    #[test]
    fn flavors() {
        assert_eq!(Epsilon::alternating(2).flavor(), Flavor::Alternating);
        assert_eq!(Epsilon::alternating_prime(2).flavor(), Flavor::AlternatingPrime);
        assert_eq!(Epsilon::new(vec![0; 5]).unwrap().flavor(), Flavor::AllZero);
        assert!(Epsilon::new(vec![0, 1]).is_err());
    }

    #[test]
    fn cone_membership() {
        let e = Epsilon::alternating(2);
        let rb = RootBasis::new((1..=5).map(|i| e.root(i)).collect());
        assert!(rb.in_cone(&(e.root(1) + e.root(2))));
        assert!(!rb.in_cone(&(e.root(1) - e.root(2))));
    }
}
