//! Truncation homomorphisms from quantum affine algebras of types C and D
//! into `U(eps)` for the alternating sequences, and the truncated modules.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::coeff::Coeff;
use crate::error::Error;
use crate::fock::{label_supported_on, FockVector, Gen, Rep};
use crate::lattice::{Epsilon, Flavor, Weight};
use crate::relations::Relation;
use crate::scalar::{tbinom, Scalar};
use crate::word::Word;

/// Which embedded algebra: the type-C side or the type-D side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    /// `eps_` (underline): even positions for `(1,0,...,0,1)`, odd positions for `(0,1,...,1,0)`.
    Lower,
    /// `eps^-` (overline).
    Upper,
}

/// Choice parameter of the embedding: `eta` for the hat maps, `d` exponent for the check maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Choice {
    Plus,
    Minus,
}

impl Choice {
    pub fn sign(self) -> i32 {
        match self {
            Choice::Plus => 1,
            Choice::Minus => -1,
        }
    }
}

/// The images of target generators as words in the ambient algebra.
#[derive(Clone, Debug)]
pub struct PhiMap {
    pub eps: Epsilon,
    pub side: Side,
    pub e: Vec<Word>,
    pub f: Vec<Word>,
    /// Ambient weight of `k_i` for each target index.
    pub k: Vec<Weight>,
    /// Deformation parameter of the target (`q` or `q~`).
    pub t: Scalar,
    /// `+1` when `t = q`, `-1` when `t = q~`.
    pub t_sign: i64,
    /// Ambient positions kept by truncation.
    pub kept: Vec<usize>,
    /// Parity of every kept position.
    pub target_bit: u8,
}

impl PhiMap {
    /// Builds the map for an alternating `eps` of either flavor.
    pub fn new(eps: &Epsilon, side: Side, choice: Choice) -> Result<Self, Error> {
        let n = eps.n();
        let m = (n - 1) / 2;
        let flavor = eps.flavor();
        let q = Scalar::q;
        let e = Word::e;
        let f = Word::f;
        let c = |a: usize, b: usize, t: Scalar| Word::comm(e(a), e(b), t);
        let cf = |a: usize, b: usize, t: Scalar| Word::comm(f(a), f(b), t);
        let two_inv = Scalar::qint(2).inv().expect("nonzero");
        let root = |a: usize, b: usize| eps.root(a) + eps.root(b);
        let (mut ew, mut fw, mut kw) = (Vec::new(), Vec::new(), Vec::new());
        let eta = choice.sign();
        let (t, t_sign, kept, target_bit);
        match (flavor, side) {
            (Flavor::Alternating, Side::Lower) => {
                for i in 0..=m {
                    let end = i == 0 || i == m;
                    let ci = if end { Scalar::q_pow(2 * eta).neg() } else { Scalar::q_pow(eta).neg() };
                    let s = if end { two_inv.clone() } else { Scalar::one() };
                    let ci_inv = ci.inv().expect("monomial");
                    ew.push(c(2 * i, 2 * i + 1, ci).scaled(s.clone()));
                    fw.push(cf(2 * i + 1, 2 * i, ci_inv).scaled(s));
                    kw.push(root(2 * i, 2 * i + 1));
                }
                t = q();
                t_sign = 1;
                kept = (1..=m).map(|j| 2 * j).collect();
                target_bit = 0;
            }
            (Flavor::Alternating, Side::Upper) => {
                let d = Scalar::q_pow(eta);
                let di = d.inv().expect("monomial");
                let mut pairs = vec![(0, 2)];
                pairs.extend((1..=m).map(|j| (2 * j - 1, 2 * j)));
                pairs.push((2 * m - 1, 2 * m + 1));
                for (a, b) in pairs {
                    ew.push(c(a, b, d.clone()));
                    fw.push(cf(b, a, di.clone()));
                    kw.push(root(a, b));
                }
                t = Scalar::qt_pow(1);
                t_sign = -1;
                kept = (0..=m).map(|j| 2 * j + 1).collect();
                target_bit = 1;
            }
            (Flavor::AlternatingPrime, Side::Upper) => {
                let mhalf = two_inv.neg();
                for i in 0..=m {
                    let end = i == 0 || i == m;
                    let ci = if end { Scalar::q_pow(2 * eta).neg() } else { Scalar::q_pow(eta) };
                    let s = if end { mhalf.clone() } else { Scalar::one() };
                    let ci_inv = ci.inv().expect("monomial");
                    ew.push(c(2 * i + 1, 2 * i, ci).scaled(s.clone()));
                    fw.push(cf(2 * i, 2 * i + 1, ci_inv).scaled(s));
                    kw.push(root(2 * i, 2 * i + 1));
                }
                t = Scalar::qt_pow(1);
                t_sign = -1;
                kept = (1..=m).map(|j| 2 * j).collect();
                target_bit = 1;
            }
            (Flavor::AlternatingPrime, Side::Lower) => {
                let d = Scalar::q_pow(eta).neg();
                let di = d.inv().expect("monomial");
                let mut pairs = vec![(2, 0)];
                pairs.extend((1..=m).map(|j| (2 * j, 2 * j - 1)));
                pairs.push((2 * m + 1, 2 * m - 1));
                for (a, b) in pairs {
                    ew.push(c(a, b, d.clone()));
                    fw.push(cf(b, a, di.clone()));
                    kw.push(root(a, b));
                }
                t = q();
                t_sign = 1;
                kept = (0..=m).map(|j| 2 * j + 1).collect();
                target_bit = 0;
            }
            _ => return Err(Error::Domain("truncation maps need an alternating epsilon")),
        }
        Ok(PhiMap { eps: eps.clone(), side, e: ew, f: fw, k: kw, t, t_sign, kept, target_bit })
    }

    /// Largest target index.
    pub fn rank(&self) -> usize {
        self.e.len() - 1
    }

    /// Symmetrized Cartan matrix `B_ij = s (k_i | k_j)` in the ambient form.
    pub fn b_matrix(&self) -> Vec<Vec<i64>> {
        let r = self.rank();
        (0..=r)
            .map(|i| {
                (0..=r)
                    .map(|j| {
                        let v = self.eps.bilinear(&self.k[i], &self.k[j]);
                        assert!(v.is_integer(), "integral pairing of embedded roots");
                        self.t_sign * v.to_integer()
                    })
                    .collect()
            })
            .collect()
    }

    /// Cartan type of the target, for reports.
    pub fn target_name(&self) -> alloc::string::String {
        let r = self.rank();
        if self.b_matrix()[0][0] == 4 {
            format!("C_{r}^(1)")
        } else {
            format!("D_{r}^(1)")
        }
    }

    /// The truncated `epsilon` as a sequence of kept bits.
    pub fn target_bits(&self) -> Vec<u8> {
        vec![self.target_bit; self.kept.len()]
    }
}

/// A module seen through a truncation map.
pub struct PhiRep<C: Coeff> {
    inner: Arc<dyn Rep<C>>,
    map: PhiMap,
}

impl<C: Coeff> PhiRep<C> {
    pub fn new(inner: Arc<dyn Rep<C>>, map: PhiMap) -> Result<Self, Error> {
        if inner.eps() != &map.eps {
            return Err(Error::Domain("module and truncation map use different epsilon"));
        }
        Ok(PhiRep { inner, map })
    }

    pub fn map(&self) -> &PhiMap {
        &self.map
    }
}

impl<C: Coeff> Rep<C> for PhiRep<C> {
    fn eps(&self) -> &Epsilon {
        self.inner.eps()
    }
    fn kets(&self) -> usize {
        self.inner.kets()
    }
    fn rank(&self) -> usize {
        self.map.rank()
    }
    fn k_weight(&self, i: usize) -> Weight {
        self.map.k[i].clone()
    }
    fn act_basis(&self, i: usize, raise: bool, b: &[u8], coef: &C, out: &mut FockVector<C>) {
        let mut v = FockVector::new();
        v.add_term(b.into(), coef.clone());
        let w = if raise { &self.map.e[i] } else { &self.map.f[i] };
        out.add_scaled(&w.eval(self.inner.as_ref(), &v), &C::one());
    }
}

/// Defining relations of the target quantum affine algebra in its own generators.
pub fn target_relations(map: &PhiMap) -> Vec<Relation> {
    let r = map.rank();
    let b = map.b_matrix();
    let t = &map.t;
    let kk = |w: &Weight| Word::Atom(Gen::K(w.clone()));
    let mut out = Vec::new();
    for i in 0..=r {
        for j in 0..=r {
            let c = t.pow(b[i][j] as i32);
            let ki = &map.k[i];
            out.push(Relation {
                name: format!("k{i} E{j} k{i}^-1"),
                lhs: Word::prod(vec![kk(ki), Word::e(j), kk(&-ki.clone())]),
                rhs: Word::e(j).scaled(c.clone()),
            });
            out.push(Relation {
                name: format!("k{i} F{j} k{i}^-1"),
                lhs: Word::prod(vec![kk(ki), Word::f(j), kk(&-ki.clone())]),
                rhs: Word::f(j).scaled(c.inv().expect("monomial")),
            });
            let ti = t.pow((b[i][i] / 2) as i32);
            let d = ti.sub(&ti.inv().expect("monomial"));
            let lhs = Word::lin(vec![
                (d.clone(), Word::prod(vec![Word::e(i), Word::f(j)])),
                (d.neg(), Word::prod(vec![Word::f(j), Word::e(i)])),
            ]);
            let rhs = if i == j {
                Word::lin(vec![(Scalar::one(), kk(ki)), (Scalar::from_i64(-1), kk(&-ki.clone()))])
            } else {
                Word::Lin(Vec::new())
            };
            out.push(Relation { name: format!("[E{i},F{j}]"), lhs, rhs });
            if i == j {
                continue;
            }
            let a = 2 * b[i][j] / b[i][i];
            let top = 1 - a;
            let mut terms = Vec::new();
            for k in 0..=top {
                let sgn = if k % 2 == 0 { Scalar::one() } else { Scalar::from_i64(-1) };
                let coef = sgn.mul(&tbinom(top, k, &ti).expect("in range"));
                let mut idx = vec![i; (top - k) as usize];
                idx.push(j);
                idx.extend(core::iter::repeat(i).take(k as usize));
                terms.push((coef, Word::es(&idx)));
            }
            let serre = Word::lin(terms);
            out.push(Relation { name: format!("serre E{i}^{top} E{j}"), lhs: serre.clone(), rhs: Word::Lin(Vec::new()) });
            out.push(Relation { name: format!("serre F{i}^{top} F{j}"), lhs: serre.mirror(), rhs: Word::Lin(Vec::new()) });
        }
    }
    out
}

/// True when every ket of `l` is supported on the kept positions of `map`.
pub fn in_truncation(map: &PhiMap, l: &[u8]) -> bool {
    label_supported_on(l, map.eps.n(), &map.kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Param;
    use crate::fock::{ModuleSpec, Tensor};
    use crate::relations::check_all;

    fn check(eps: Epsilon, w2: bool, side: Side, choice: Choice, cutoff: u32) {
        let x = Param::Value(Scalar::w_pow(5));
        let spec = if w2 { ModuleSpec::w2(eps.clone(), x, cutoff) } else { ModuleSpec::w(eps.clone(), x, cutoff) }.unwrap();
        let map = PhiMap::new(&eps, side, choice).unwrap();
        let rels = target_relations(&map);
        let rep = PhiRep::new(spec.rep::<Scalar>().unwrap(), map).unwrap();
        for r in check_all(&rep, &rels, &spec.basis(None)) {
            assert!(r.ok(), "{:?} {:?}: {} failed at {:?}", side, choice, r.name, r.first_failure);
        }
    }

    #[test]
    fn embedded_roots() {
        let eps = Epsilon::alternating(2);
        let lo = PhiMap::new(&eps, Side::Lower, Choice::Plus).unwrap();
        assert_eq!(lo.k[0], Weight::delta(5, 2).scaled(2));
        assert_eq!(lo.b_matrix()[0][0], 4);
        assert_eq!(lo.target_name(), "C_2^(1)");
        let up = PhiMap::new(&eps, Side::Upper, Choice::Plus).unwrap();
        assert_eq!(up.k[0], Weight::delta(5, 1) + Weight::delta(5, 3));
        assert_eq!(up.target_name(), "D_3^(1)");
    }

    #[test]
    fn type_c_lower() {
        for ch in [Choice::Plus, Choice::Minus] {
            check(Epsilon::alternating(2), false, Side::Lower, ch, 3);
        }
    }

    #[test]
    fn type_c_upper() {
        for ch in [Choice::Plus, Choice::Minus] {
            check(Epsilon::alternating(2), false, Side::Upper, ch, 3);
        }
    }

    #[test]
    fn type_d_both() {
        for side in [Side::Lower, Side::Upper] {
            for ch in [Choice::Plus, Choice::Minus] {
                check(Epsilon::alternating_prime(2), true, side, ch, 2);
            }
        }
    }

    #[test]
    fn tensor_of_phi_reps_builds() {
        let eps = Epsilon::alternating(2);
        let map = PhiMap::new(&eps, Side::Lower, Choice::Plus).unwrap();
        let spec = ModuleSpec::w(eps.clone(), Param::one(), 2).unwrap();
        let a: Arc<dyn Rep<Scalar>> = Arc::new(PhiRep::new(spec.rep().unwrap(), map.clone()).unwrap());
        let t = Tensor::new(vec![a.clone(), a]).unwrap();
        assert_eq!(t.rank(), 2);
    }
}
