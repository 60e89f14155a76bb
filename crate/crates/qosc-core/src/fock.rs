//! The modules `W(x)` and `W^{(x)2}(x)` on their ket bases, tensor products
//! through the coproduct, and window enumeration of bases.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;

use smallvec::SmallVec;

use crate::coeff::{Coeff, Param};
use crate::error::Error;
use crate::lattice::{Epsilon, Weight};
use crate::scalar::Scalar;

/// Concatenated kets of a basis vector, `n` entries per ket.
pub type Label = SmallVec<[u8; 32]>;

/// A finite linear combination of basis labels.
#[derive(Clone, PartialEq)]
pub struct FockVector<C> {
    terms: BTreeMap<Label, C>,
    overflow: bool,
}

impl<C: Coeff> Default for FockVector<C> {
    fn default() -> Self {
        FockVector { terms: BTreeMap::new(), overflow: false }
    }
}

impl<C: Coeff> FockVector<C> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn basis(label: Label) -> Self {
        let mut v = Self::new();
        v.terms.insert(label, C::one());
        v
    }

    pub fn from_terms<I: IntoIterator<Item = (Label, C)>>(it: I) -> Self {
        let mut v = Self::new();
        for (l, c) in it {
            v.add_term(l, c);
        }
        v
    }

    pub fn add_term(&mut self, label: Label, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&label) {
            Some(x) => {
                *x = x.add(&c);
                if x.is_zero() {
                    self.terms.remove(&label);
                }
            }
            None => {
                self.terms.insert(label, c);
            }
        }
    }

    pub fn add_scaled(&mut self, o: &Self, c: &C) {
        if c.is_zero() {
            return;
        }
        for (l, x) in &o.terms {
            self.add_term(l.clone(), x.mul(c));
        }
        self.overflow |= o.overflow;
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_scaled(o, &C::one());
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_scaled(o, &C::one().neg());
        r
    }

    pub fn scaled(&self, c: &C) -> Self {
        let mut r = Self::new();
        r.add_scaled(self, c);
        r
    }

    pub fn scaled_scalar(&self, s: &Scalar) -> Self {
        self.scaled(&C::from_scalar(s.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, l: &[u8]) -> Option<&C> {
        self.terms.get(l)
    }

    pub fn coeff(&self, l: &[u8]) -> C {
        self.terms.get(l).cloned().unwrap_or_else(C::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Label, &C)> {
        self.terms.iter()
    }

    pub fn labels(&self) -> impl Iterator<Item = &Label> {
        self.terms.keys()
    }

    /// True when some term was dropped by a windowed action.
    pub fn overflowed(&self) -> bool {
        self.overflow
    }

    pub fn set_overflow(&mut self) {
        self.overflow = true;
    }

    pub fn retain<F: FnMut(&Label) -> bool>(&mut self, mut f: F) {
        self.terms.retain(|l, _| f(l));
    }

    pub fn map_coeffs<D: Coeff, F: FnMut(&C) -> D>(&self, mut f: F) -> FockVector<D> {
        let mut r = FockVector::new();
        for (l, c) in &self.terms {
            r.add_term(l.clone(), f(c));
        }
        r.overflow = self.overflow;
        r
    }

    /// Largest total degree of a label in the support.
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|l| label_degree(l)).max()
    }
}

impl<C: Coeff> fmt::Display for FockVector<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (l, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{{{c}}}{}", LabelDisplay(l, 0))?;
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for FockVector<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sum of all ket entries.
pub fn label_degree(l: &[u8]) -> u32 {
    l.iter().map(|&x| x as u32).sum()
}

/// Formats a label as `[m1,...,mn]` kets joined by `(x)`; `n = 0` means one ket.
pub struct LabelDisplay<'a>(pub &'a [u8], pub usize);

impl fmt::Display for LabelDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_label(self.0, self.1))
    }
}

/// Text form of a label with kets of length `n` (`n = 0`: a single ket).
pub fn format_label(l: &[u8], n: usize) -> String {
    let n = if n == 0 { l.len().max(1) } else { n };
    let mut s = String::new();
    for (k, ket) in l.chunks(n).enumerate() {
        if k > 0 {
            s.push_str("(x)");
        }
        s.push('[');
        for (j, x) in ket.iter().enumerate() {
            if j > 0 {
                s.push(',');
            }
            let _ = write!(s, "{x}");
        }
        s.push(']');
    }
    s
}

/// A generator of the algebra acting on a module.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    E(usize),
    F(usize),
    K(Weight),
}

/// A representation on a ket basis.
///
/// Generators are indexed `0..=rank()`. Cartan elements act through the
/// ambient `epsilon`: `k_mu` is `q(wt, mu)` on a label of weight `wt`.
pub trait Rep<C: Coeff>: Send + Sync {
    fn eps(&self) -> &Epsilon;
    /// Number of kets in each label.
    fn kets(&self) -> usize;
    fn rank(&self) -> usize;
    /// Weight (in the ambient lattice) with `k_i = k_{k_weight(i)}`.
    fn k_weight(&self, i: usize) -> Weight;
    /// Adds `coef * x_i(b)` to `out`, where `x_i = e_i` if `raise` else `f_i`.
    fn act_basis(&self, i: usize, raise: bool, b: &[u8], coef: &C, out: &mut FockVector<C>);

    fn weight(&self, b: &[u8]) -> Weight {
        label_weight(self.eps().n(), b)
    }

    fn k_eigen(&self, mu: &Weight, b: &[u8]) -> Scalar {
        self.eps().qpair(&self.weight(b), mu)
    }

    fn apply(&self, g: &Gen, v: &FockVector<C>) -> FockVector<C> {
        let mut out = FockVector::new();
        for (b, c) in v.iter() {
            match g {
                Gen::E(i) => self.act_basis(*i, true, b, c, &mut out),
                Gen::F(i) => self.act_basis(*i, false, b, c, &mut out),
                Gen::K(mu) => out.add_term(b.clone(), c.scale(&self.k_eigen(mu, b))),
            }
        }
        out.overflow = v.overflow;
        out
    }

    /// Applies `g` and drops labels above `cutoff`, flagging the result.
    fn apply_windowed(&self, g: &Gen, v: &FockVector<C>, cutoff: u32) -> FockVector<C> {
        let mut r = self.apply(g, v);
        let before = r.len();
        r.retain(|l| label_degree(l) <= cutoff);
        if r.len() != before {
            r.overflow = true;
        }
        r
    }
}

/// `kets * Lambda + sum of all entries` as a weight.
pub fn label_weight(n: usize, b: &[u8]) -> Weight {
    let mut w = Weight::zero(n);
    w.lam = (b.len() / n) as i32;
    for (k, &x) in b.iter().enumerate() {
        w.delta[k % n] += x as i32;
    }
    w
}

/// True when the ket lies in `Z^n_+(eps)`.
pub fn ket_valid(eps: &Epsilon, ket: &[u8]) -> bool {
    ket.iter().enumerate().all(|(k, &x)| eps.bits()[k] == 0 || x <= 1)
}

/// Applies `(position, change)` shifts to ket `which` of `b`; `None` if outside `Z^n_+(eps)`.
fn shift(eps: &Epsilon, b: &[u8], which: usize, changes: &[(usize, i8)]) -> Option<Label> {
    let n = eps.n();
    let mut l: Label = SmallVec::from_slice(b);
    for &(pos, d) in changes {
        let idx = which * n + pos - 1;
        let v = l[idx] as i16 + d as i16;
        if v < 0 || (eps.bit(pos) == 1 && v > 1) || v > u8::MAX as i16 {
            return None;
        }
        l[idx] = v as u8;
    }
    Some(l)
}

fn qi(m: u8) -> Scalar {
    Scalar::qint(m as i64)
}

/// `W(x)` for `eps_1 = eps_n = 1`.
pub struct WRep<C: Coeff> {
    eps: Epsilon,
    xp: C,
    xm: C,
    e0_sign: i64,
}

impl<C: Coeff> WRep<C> {
    pub fn new(eps: Epsilon, x: &Param) -> Result<Self, Error> {
        if eps.bit(1) != 1 || eps.bit(eps.n()) != 1 {
            return Err(Error::Domain("W(x) needs eps_1 = eps_n = 1"));
        }
        Ok(WRep { eps, xp: x.pow(1)?, xm: x.pow(-1)?, e0_sign: 1 })
    }

    /// A deliberately wrong variant with `e_0` negated, for negative controls.
    pub fn with_e0_sign_flip(mut self) -> Self {
        self.e0_sign = -self.e0_sign;
        self
    }
}

impl<C: Coeff> Rep<C> for WRep<C> {
    fn eps(&self) -> &Epsilon {
        &self.eps
    }
    fn kets(&self) -> usize {
        1
    }
    fn rank(&self) -> usize {
        self.eps.n()
    }
    fn k_weight(&self, i: usize) -> Weight {
        self.eps.root(i)
    }
    fn act_basis(&self, i: usize, raise: bool, b: &[u8], coef: &C, out: &mut FockVector<C>) {
        let e = &self.eps;
        let n = e.n();
        let m = |a: usize| b[a - 1];
        let (target, scal, x): (Option<Label>, Scalar, Option<&C>) = match (i, raise) {
            (0, true) => (shift(e, b, 0, &[(1, 1), (2, 1)]), Scalar::from_i64(self.e0_sign), Some(&self.xp)),
            (0, false) => (shift(e, b, 0, &[(1, -1), (2, -1)]), qi(m(2)), Some(&self.xm)),
            (i, true) if i < n => (shift(e, b, 0, &[(i, -1), (i + 1, 1)]), qi(m(i)), None),
            (i, false) if i < n => (shift(e, b, 0, &[(i, 1), (i + 1, -1)]), qi(m(i + 1)), None),
            (_, true) => (shift(e, b, 0, &[(n - 1, -1), (n, -1)]), qi(m(n - 1)), None),
            (_, false) => (shift(e, b, 0, &[(n - 1, 1), (n, 1)]), Scalar::one(), None),
        };
        if let Some(t) = target {
            if scal.is_zero() {
                return;
            }
            let mut c = coef.scale(&scal);
            if let Some(x) = x {
                c = c.mul(x);
            }
            out.add_term(t, c);
        }
    }
}

/// `W^{(x)2}(x)` for `eps_1 = eps_n = 0`.
pub struct W2Rep<C: Coeff> {
    eps: Epsilon,
    xp: C,
    xm: C,
}

impl<C: Coeff> W2Rep<C> {
    pub fn new(eps: Epsilon, x: &Param) -> Result<Self, Error> {
        if eps.bit(1) != 0 || eps.bit(eps.n()) != 0 {
            return Err(Error::Domain("W2(x) needs eps_1 = eps_n = 0"));
        }
        Ok(W2Rep { eps, xp: x.pow(1)?, xm: x.pow(-1)? })
    }
}

impl<C: Coeff> Rep<C> for W2Rep<C> {
    fn eps(&self) -> &Epsilon {
        &self.eps
    }
    fn kets(&self) -> usize {
        2
    }
    fn rank(&self) -> usize {
        self.eps.n()
    }
    fn k_weight(&self, i: usize) -> Weight {
        self.eps.root(i)
    }
    fn act_basis(&self, i: usize, raise: bool, b: &[u8], coef: &C, out: &mut FockVector<C>) {
        let e = &self.eps;
        let n = e.n();
        let m = |a: usize| b[a - 1] as i32;
        let mp = |a: usize| b[n + a - 1] as i32;
        let qp = |a: usize, k: i32| e.q_i_pow(a, k);
        let mut emit = |t: Option<Label>, s: Scalar, x: Option<&C>| {
            if let Some(t) = t {
                if s.is_zero() {
                    return;
                }
                let mut c = coef.scale(&s);
                if let Some(x) = x {
                    c = c.mul(x);
                }
                out.add_term(t, c);
            }
        };
        let both = |a: &[(usize, i8)], bb: &[(usize, i8)]| shift(e, b, 0, a).and_then(|l| shift(e, &l, 1, bb));
        match (i, raise) {
            (0, true) => {
                emit(both(&[(1, 1)], &[(2, 1)]), Scalar::one(), Some(&self.xp));
                let s = qp(1, -m(1)).mul(&qp(2, -mp(2))).mul(&Scalar::q_pow(-1)).neg();
                emit(both(&[(2, 1)], &[(1, 1)]), s, Some(&self.xp));
            }
            (0, false) => {
                let s = qp(1, mp(1))
                    .mul(&qp(2, m(2)))
                    .mul(&Scalar::q())
                    .mul(&Scalar::qint(m(1) as i64))
                    .mul(&Scalar::qint(mp(2) as i64))
                    .neg();
                emit(both(&[(1, -1)], &[(2, -1)]), s, Some(&self.xm));
                let s = Scalar::qint(mp(1) as i64).mul(&Scalar::qint(m(2) as i64));
                emit(both(&[(2, -1)], &[(1, -1)]), s, Some(&self.xm));
            }
            (i, true) if i < n => {
                let s = qp(i, mp(i)).mul(&qp(i + 1, -mp(i + 1))).mul(&Scalar::qint(m(i) as i64));
                emit(shift(e, b, 0, &[(i, -1), (i + 1, 1)]), s, None);
                emit(shift(e, b, 1, &[(i, -1), (i + 1, 1)]), Scalar::qint(mp(i) as i64), None);
            }
            (i, false) if i < n => {
                emit(shift(e, b, 0, &[(i, 1), (i + 1, -1)]), Scalar::qint(m(i + 1) as i64), None);
                let s = qp(i, -m(i)).mul(&qp(i + 1, m(i + 1))).mul(&Scalar::qint(mp(i + 1) as i64));
                emit(shift(e, b, 1, &[(i, 1), (i + 1, -1)]), s, None);
            }
            (_, true) => {
                let s = qp(n - 1, mp(n - 1))
                    .mul(&qp(n, m(n)))
                    .mul(&Scalar::q())
                    .mul(&Scalar::qint(m(n - 1) as i64))
                    .mul(&Scalar::qint(mp(n) as i64))
                    .neg();
                emit(both(&[(n - 1, -1)], &[(n, -1)]), s, None);
                let s = Scalar::qint(mp(n - 1) as i64).mul(&Scalar::qint(m(n) as i64));
                emit(both(&[(n, -1)], &[(n - 1, -1)]), s, None);
            }
            (_, false) => {
                emit(both(&[(n - 1, 1)], &[(n, 1)]), Scalar::one(), None);
                let s = qp(n - 1, -m(n - 1)).mul(&qp(n, -mp(n))).mul(&Scalar::q_pow(-1)).neg();
                emit(both(&[(n, 1)], &[(n - 1, 1)]), s, None);
            }
        }
    }
}

/// The tensor product of representations sharing generators and Cartan data,
/// with `Delta(e) = 1 (x) e + e (x) k^{-1}` and `Delta(f) = f (x) 1 + k (x) f`.
pub struct Tensor<C: Coeff> {
    parts: Vec<Arc<dyn Rep<C>>>,
    offsets: Vec<usize>,
    kets: usize,
}

impl<C: Coeff> Tensor<C> {
    pub fn new(parts: Vec<Arc<dyn Rep<C>>>) -> Result<Self, Error> {
        if parts.is_empty() {
            return Err(Error::Domain("empty tensor product"));
        }
        let r = parts[0].rank();
        let eps = parts[0].eps().clone();
        if parts.iter().any(|p| p.rank() != r || p.eps() != &eps) {
            return Err(Error::Domain("tensor factors must share generators"));
        }
        for i in 0..=r {
            let w = parts[0].k_weight(i);
            if parts.iter().any(|p| p.k_weight(i) != w) {
                return Err(Error::Domain("tensor factors must share Cartan data"));
            }
        }
        let mut offsets = Vec::new();
        let mut acc = 0;
        for p in &parts {
            offsets.push(acc);
            acc += p.kets();
        }
        Ok(Tensor { parts, offsets, kets: acc })
    }

    pub fn parts(&self) -> &[Arc<dyn Rep<C>>] {
        &self.parts
    }

    fn span(&self, j: usize) -> (usize, usize) {
        let n = self.parts[0].eps().n();
        (self.offsets[j] * n, (self.offsets[j] + self.parts[j].kets()) * n)
    }
}

impl<C: Coeff> Rep<C> for Tensor<C> {
    fn eps(&self) -> &Epsilon {
        self.parts[0].eps()
    }
    fn kets(&self) -> usize {
        self.kets
    }
    fn rank(&self) -> usize {
        self.parts[0].rank()
    }
    fn k_weight(&self, i: usize) -> Weight {
        self.parts[0].k_weight(i)
    }
    fn act_basis(&self, i: usize, raise: bool, b: &[u8], coef: &C, out: &mut FockVector<C>) {
        let kw = self.k_weight(i);
        let kinv = -kw.clone();
        let r = self.parts.len();
        for j in 0..r {
            // Cartan factor from the other tensor slots
            let mut s = Scalar::one();
            let others: Box<dyn Iterator<Item = usize>> = if raise { Box::new(j + 1..r) } else { Box::new(0..j) };
            for l in others {
                let (a, z) = self.span(l);
                let mu = if raise { &kinv } else { &kw };
                s = s.mul(&self.parts[l].k_eigen(mu, &b[a..z]));
            }
            let (a, z) = self.span(j);
            let mut local = FockVector::new();
            self.parts[j].act_basis(i, raise, &b[a..z], &coef.scale(&s), &mut local);
            for (l, c) in local.iter() {
                let mut full: Label = SmallVec::from_slice(&b[..a]);
                full.extend_from_slice(l);
                full.extend_from_slice(&b[z..]);
                out.add_term(full, c.clone());
            }
        }
    }
}

/// The atomic module kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorKind {
    W,
    W2,
}

impl FactorKind {
    pub fn kets(self) -> usize {
        match self {
            FactorKind::W => 1,
            FactorKind::W2 => 2,
        }
    }
}

/// One tensor factor: its kind, spectral parameter and optional parity of `|m|`.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorSpec {
    pub kind: FactorKind,
    pub param: Param,
    pub parity: Option<u8>,
}

/// A tensor product of `W(x)` or `W^{(x)2}(x)` factors with a degree cutoff.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleSpec {
    pub eps: Epsilon,
    pub factors: Vec<FactorSpec>,
    pub cutoff: u32,
}

impl ModuleSpec {
    pub fn new(eps: Epsilon, factors: Vec<FactorSpec>, cutoff: u32) -> Result<Self, Error> {
        if factors.is_empty() {
            return Err(Error::Domain("module needs at least one factor"));
        }
        for f in &factors {
            let need = match f.kind {
                FactorKind::W => 1,
                FactorKind::W2 => 0,
            };
            if eps.bit(1) != need || eps.bit(eps.n()) != need {
                return Err(Error::Domain("factor kind inconsistent with the ends of epsilon"));
            }
            if f.parity.is_some() && f.kind == FactorKind::W2 {
                return Err(Error::Domain("parity restriction applies to W factors only"));
            }
        }
        Ok(ModuleSpec { eps, factors, cutoff })
    }

    /// Single factor `W(x)`.
    pub fn w(eps: Epsilon, x: Param, cutoff: u32) -> Result<Self, Error> {
        Self::new(eps, alloc::vec![FactorSpec { kind: FactorKind::W, param: x, parity: None }], cutoff)
    }

    /// Single factor `W^{(x)2}(x)`.
    pub fn w2(eps: Epsilon, x: Param, cutoff: u32) -> Result<Self, Error> {
        Self::new(eps, alloc::vec![FactorSpec { kind: FactorKind::W2, param: x, parity: None }], cutoff)
    }

    pub fn kets(&self) -> usize {
        self.factors.iter().map(|f| f.kind.kets()).sum()
    }

    /// The representation on this module.
    pub fn rep<C: Coeff>(&self) -> Result<Arc<dyn Rep<C>>, Error> {
        let mut parts: Vec<Arc<dyn Rep<C>>> = Vec::new();
        for f in &self.factors {
            parts.push(match f.kind {
                FactorKind::W => Arc::new(WRep::new(self.eps.clone(), &f.param)?),
                FactorKind::W2 => Arc::new(W2Rep::new(self.eps.clone(), &f.param)?),
            });
        }
        if parts.len() == 1 {
            Ok(parts.pop().unwrap())
        } else {
            Ok(Arc::new(Tensor::new(parts)?))
        }
    }

    /// Basis labels of total degree at most the cutoff, optionally restricted
    /// to kets supported on `kept` positions, ordered by (degree, entries).
    pub fn basis(&self, kept: Option<&[usize]>) -> Vec<Label> {
        let kets = kets_up_to(&self.eps, self.cutoff, kept);
        let mut out: Vec<Label> = Vec::new();
        let shapes: Vec<(usize, Option<u8>)> =
            self.factors.iter().flat_map(|f| (0..f.kind.kets()).map(move |k| (k, f.parity))).collect();
        let mut cur: Label = SmallVec::new();
        fn rec(
            shapes: &[(usize, Option<u8>)],
            kets: &[(u32, Label)],
            budget: u32,
            cur: &mut Label,
            out: &mut Vec<Label>,
        ) {
            let Some(&(_, parity)) = shapes.first() else {
                out.push(cur.clone());
                return;
            };
            for (d, k) in kets {
                if *d > budget {
                    break;
                }
                if let Some(p) = parity {
                    if (*d % 2) as u8 != p {
                        continue;
                    }
                }
                let len = cur.len();
                cur.extend_from_slice(k);
                rec(&shapes[1..], kets, budget - d, cur, out);
                cur.truncate(len);
            }
        }
        rec(&shapes, &kets, self.cutoff, &mut cur, &mut out);
        out.sort_by(|a, b| label_degree(a).cmp(&label_degree(b)).then_with(|| a.cmp(b)));
        out
    }

    /// The basis grouped into weight blocks.
    pub fn weight_blocks(&self, kept: Option<&[usize]>) -> BTreeMap<Weight, Vec<Label>> {
        let n = self.eps.n();
        let mut m: BTreeMap<Weight, Vec<Label>> = BTreeMap::new();
        for l in self.basis(kept) {
            m.entry(label_weight(n, &l)).or_default().push(l);
        }
        m
    }

    /// Basis labels of weight `lambda` within the window.
    pub fn weight_block(&self, lambda: &Weight, kept: Option<&[usize]>) -> Vec<Label> {
        let n = self.eps.n();
        self.basis(kept).into_iter().filter(|l| &label_weight(n, l) == lambda).collect()
    }
}

/// All kets of `Z^n_+(eps)` with degree at most `cutoff`, sorted by (degree, entries).
pub fn kets_up_to(eps: &Epsilon, cutoff: u32, kept: Option<&[usize]>) -> Vec<(u32, Label)> {
    let n = eps.n();
    let mut out = Vec::new();
    let mut cur: Label = SmallVec::new();
    fn rec(eps: &Epsilon, n: usize, kept: Option<&[usize]>, budget: u32, cur: &mut Label, out: &mut Vec<(u32, Label)>) {
        let pos = cur.len() + 1;
        if pos > n {
            out.push((label_degree(cur), cur.clone()));
            return;
        }
        let mut top = if eps.bit(pos) == 1 { 1 } else { budget };
        if let Some(k) = kept {
            if !k.contains(&pos) {
                top = 0;
            }
        }
        for x in 0..=top.min(budget) {
            cur.push(x as u8);
            rec(eps, n, kept, budget - x, cur, out);
            cur.pop();
        }
    }
    rec(eps, n, kept, cutoff, &mut cur, &mut out);
    out.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    out
}

/// True when every ket in `l` vanishes outside the `kept` positions.
pub fn label_supported_on(l: &[u8], n: usize, kept: &[usize]) -> bool {
    l.iter().enumerate().all(|(k, &x)| x == 0 || kept.contains(&(k % n + 1)))
}

/// Keeps only the terms supported on `kept` positions.
pub fn truncate_vector<C: Coeff>(v: &FockVector<C>, n: usize, kept: &[usize]) -> FockVector<C> {
    let mut r = v.clone();
    r.retain(|l| label_supported_on(l, n, kept));
    r
}

/// Parity of `|m|` for a single ket.
pub fn ket_parity(ket: &[u8]) -> u8 {
    (label_degree(ket) % 2) as u8
}

/// Builds a label from kets.
pub fn label_of(kets: &[&[u8]]) -> Label {
    let mut l: Label = SmallVec::new();
    for k in kets {
        l.extend_from_slice(k);
    }
    l
}
