//! Noncommutative words in the generators and their evaluation on modules.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::coeff::Coeff;
use crate::fock::{FockVector, Gen, Rep};
use crate::scalar::{qfact, Scalar};

/// An element of the algebra as an expression tree.
#[derive(Clone, Debug, PartialEq)]
pub enum Word {
    One,
    Atom(Gen),
    /// `g^k / [k]!`.
    DivPow(Gen, u32),
    /// Product, applied right to left.
    Prod(Vec<Word>),
    Lin(Vec<(Scalar, Word)>),
    /// `A B - t B A`.
    Comm(Box<Word>, Box<Word>, Scalar),
}

impl Word {
    pub fn e(i: usize) -> Self {
        Word::Atom(Gen::E(i))
    }

    pub fn f(i: usize) -> Self {
        Word::Atom(Gen::F(i))
    }

    /// Product of `e_{i_1} e_{i_2} ...` given by indices.
    pub fn es(idx: &[usize]) -> Self {
        Word::Prod(idx.iter().map(|&i| Word::e(i)).collect())
    }

    pub fn fs(idx: &[usize]) -> Self {
        Word::Prod(idx.iter().map(|&i| Word::f(i)).collect())
    }

    pub fn prod(ws: Vec<Word>) -> Self {
        Word::Prod(ws)
    }

    pub fn lin(ts: Vec<(Scalar, Word)>) -> Self {
        Word::Lin(ts)
    }

    pub fn scaled(self, s: Scalar) -> Self {
        Word::Lin(vec![(s, self)])
    }

    /// `[a, b]_t = a b - t b a`.
    pub fn comm(a: Word, b: Word, t: Scalar) -> Self {
        Word::Comm(Box::new(a), Box::new(b), t)
    }

    /// Swaps `e` and `f` throughout, keeping coefficients.
    pub fn mirror(&self) -> Self {
        match self {
            Word::One => Word::One,
            Word::Atom(g) => Word::Atom(mirror_gen(g)),
            Word::DivPow(g, k) => Word::DivPow(mirror_gen(g), *k),
            Word::Prod(ws) => Word::Prod(ws.iter().map(Word::mirror).collect()),
            Word::Lin(ts) => Word::Lin(ts.iter().map(|(s, w)| (s.clone(), w.mirror())).collect()),
            Word::Comm(a, b, t) => Word::comm(a.mirror(), b.mirror(), t.clone()),
        }
    }

    /// Applies the word to `v`.
    pub fn eval<C: Coeff>(&self, rep: &dyn Rep<C>, v: &FockVector<C>) -> FockVector<C> {
        if v.is_zero() {
            return v.clone();
        }
        match self {
            Word::One => v.clone(),
            Word::Atom(g) => rep.apply(g, v),
            Word::DivPow(g, k) => {
                let mut r = v.clone();
                for _ in 0..*k {
                    r = rep.apply(g, &r);
                }
                let d = Scalar::from_poly(qfact(*k)).inv().expect("nonzero factorial");
                r.scaled_scalar(&d)
            }
            Word::Prod(ws) => {
                let mut r = v.clone();
                for w in ws.iter().rev() {
                    r = w.eval(rep, &r);
                    if r.is_zero() {
                        break;
                    }
                }
                r
            }
            Word::Lin(ts) => {
                let mut r = FockVector::new();
                for (s, w) in ts {
                    if s.is_zero() {
                        continue;
                    }
                    r.add_scaled(&w.eval(rep, v), &C::from_scalar(s.clone()));
                }
                r
            }
            Word::Comm(a, b, t) => {
                let ab = a.eval(rep, &b.eval(rep, v));
                let ba = b.eval(rep, &a.eval(rep, v));
                let mut r = ab;
                r.add_scaled(&ba, &C::from_scalar(t.neg()));
                r
            }
        }
    }
}

fn mirror_gen(g: &Gen) -> Gen {
    match g {
        Gen::E(i) => Gen::F(*i),
        Gen::F(i) => Gen::E(*i),
        Gen::K(w) => Gen::K(w.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Param;
    use crate::fock::{label_of, WRep};
    use crate::lattice::Epsilon;

    #[test]
    fn comm_expands() {
        let eps = Epsilon::alternating(2);
        let rep: WRep<Scalar> = WRep::new(eps, &Param::one()).unwrap();
        let v = FockVector::basis(label_of(&[&[0, 2, 0, 1, 1]]));
        let t = Scalar::q();
        let c = Word::comm(Word::e(1), Word::e(2), t.clone()).eval(&rep, &v);
        let direct = Word::es(&[1, 2]).eval(&rep, &v).sub(&Word::es(&[2, 1]).eval(&rep, &v).scaled(&t));
        assert_eq!(c, direct);
    }

    #[test]
    fn mirror_is_involutive() {
        let w = Word::comm(Word::e(0), Word::DivPow(Gen::F(2), 2), Scalar::q());
        assert_eq!(w.mirror().mirror(), w);
    }
}
