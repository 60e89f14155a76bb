//! Coefficient rings for module computations.

use core::fmt;

use crate::error::Error;
use crate::scalar::Scalar;

/// A commutative ring containing `Q(w)`, possibly with spectral variables.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn from_scalar(s: Scalar) -> Self;
    fn scale(&self, s: &Scalar) -> Self;
    /// `x_idx^e` when the ring carries spectral variable `idx`.
    fn var_pow(idx: usize, e: i32) -> Option<Self>;
}

/// A coefficient ring that is a field.
pub trait Field: Coeff {
    fn inv(&self) -> Option<Self>;
}

/// A spectral parameter attached to a tensor factor: a fixed value or a variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Param {
    Value(Scalar),
    Var(usize),
}

impl Param {
    pub fn one() -> Self {
        Param::Value(Scalar::one())
    }

    /// `p^e` in the ring `C`.
    pub fn pow<C: Coeff>(&self, e: i32) -> Result<C, Error> {
        match self {
            Param::Value(s) => {
                if s.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(C::from_scalar(s.pow(e)))
            }
            Param::Var(i) => C::var_pow(*i, e).ok_or(Error::Symbolic(*i)),
        }
    }
}

impl Coeff for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        Scalar::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Scalar::sub(self, o)
    }
    fn neg(&self) -> Self {
        Scalar::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        Scalar::mul(self, o)
    }
    fn from_scalar(s: Scalar) -> Self {
        s
    }
    fn scale(&self, s: &Scalar) -> Self {
        Scalar::mul(self, s)
    }
    fn var_pow(_: usize, _: i32) -> Option<Self> {
        None
    }
}

impl Field for Scalar {
    fn inv(&self) -> Option<Self> {
        Scalar::inv(self)
    }
}
