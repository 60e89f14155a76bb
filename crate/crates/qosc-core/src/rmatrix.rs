//! Spectral decomposition of R-matrices `A(z) (x) B(1) -> B(1) (x) A(z)`.
//!
//! `R` is the unique map commuting with the algebra that acts on each
//! component `V^lambda` by `rho_lambda(z)` times the canonical isomorphism
//! `P_lambda`. The ratios of the `rho` are forced by `e_0` and `f_0`: for a
//! highest weight vector `v_lambda`, writing `e_0 v_lambda` in component
//! coordinates on both sides gives `rho_mu y_b = rho_lambda y'_b` for every
//! coordinate `b` lying in component `mu`.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::coeff::{Coeff, Param};
use crate::decomp::{
    apply_lowering, decompose, hw_vectors, hw_weight, index_order, lower_spans, ring_roots, Classical, LabelSpace, Multiplicity, Partition,
    Space,
};
use crate::error::Error;
use crate::fock::{FactorKind, FactorSpec, FockVector, Gen, Label, ModuleSpec, Rep, Tensor, W2Rep, WRep};
use crate::lattice::{Epsilon, Weight};
use crate::phi::{Choice, PhiMap, PhiRep, Side};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::spectral::{mobius, RatFn, SPoly};

/// The data of an R-matrix problem.
pub struct Pair {
    pub src: Arc<dyn Rep<Scalar>>,
    /// The source with the spectral parameter `z` as variable 0.
    pub src_z: Arc<dyn Rep<SPoly>>,
    pub tgt: Arc<dyn Rep<Scalar>>,
    pub tgt_z: Arc<dyn Rep<SPoly>>,
    pub src_space: Box<dyn Space>,
    pub tgt_space: Box<dyn Space>,
    /// Indices of the finite-type subalgebra.
    pub ring: Vec<usize>,
    /// Largest total degree of the window.
    pub cutoff: i32,
}

/// How the target highest weight vectors are scaled.
pub enum Normalization {
    /// Use the kernel vectors as computed.
    AsComputed,
    /// Rescale so every `rho(1) = 1`.
    UnitAtOne,
    /// `P_lambda(u) = u'` for each `(lambda, u, u')`, then all coefficients
    /// are divided by the one at the normalizing component.
    Reference(Vec<(Partition, FockVector<Scalar>, FockVector<Scalar>)>),
}

#[derive(Clone, Debug)]
pub struct Component {
    pub nu: Partition,
    pub weight: Weight,
    pub v_src: FockVector<Scalar>,
    pub v_tgt: FockVector<Scalar>,
}

/// Coordinates with respect to a fixed family of vectors.
#[derive(Clone, Debug)]
pub struct Coordinates {
    pivots: Vec<Label>,
    inv: Matrix<Scalar>,
    vecs: Vec<FockVector<Scalar>>,
}

impl Coordinates {
    pub fn new(vecs: Vec<FockVector<Scalar>>) -> Result<Self, Error> {
        let mut labels: Vec<Label> = vecs.iter().flat_map(|v| v.labels().cloned()).collect();
        labels.sort();
        labels.dedup();
        let col: BTreeMap<&Label, usize> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
        let mut m = Matrix::zeros(vecs.len(), labels.len());
        for (r, v) in vecs.iter().enumerate() {
            for (l, c) in v.iter() {
                m.set(r, col[l], c.clone());
            }
        }
        let piv = m.clone().rref();
        if piv.len() != vecs.len() {
            return Err(Error::Invalid(format!("{} vectors of rank {}", vecs.len(), piv.len())));
        }
        let pivots: Vec<Label> = piv.iter().map(|&c| labels[c].clone()).collect();
        let k = vecs.len();
        let mut sq = Matrix::zeros(k, k);
        for (j, v) in vecs.iter().enumerate() {
            for (i, p) in pivots.iter().enumerate() {
                sq.set(i, j, v.coeff(p));
            }
        }
        Ok(Coordinates { pivots, inv: sq.inverse()?, vecs })
    }

    pub fn len(&self) -> usize {
        self.vecs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vecs.is_empty()
    }

    pub fn vectors(&self) -> &[FockVector<Scalar>] {
        &self.vecs
    }

    /// `y` with `v = sum y_j vecs_j`; fails when `v` is outside the span.
    pub fn of<C: Coeff>(&self, v: &FockVector<C>) -> Result<Vec<C>, Error> {
        let k = self.vecs.len();
        let at: Vec<C> = self.pivots.iter().map(|p| v.coeff(p)).collect();
        let y: Vec<C> = (0..k)
            .map(|j| (0..k).fold(C::zero(), |acc, i| acc.add(&at[i].scale(self.inv.get(j, i)))))
            .collect();
        let mut res = v.clone();
        for (c, b) in y.iter().zip(&self.vecs) {
            if !c.is_zero() {
                res.add_scaled(&b.map_coeffs(|s| C::from_scalar(s.clone())), &c.neg());
            }
        }
        if !res.is_zero() {
            return Err(Error::Window(format!("vector not in span ({} stray terms)", res.len())));
        }
        Ok(y)
    }
}

/// Component-adapted bases of one weight block on both sides.
#[derive(Clone, Debug)]
pub struct BlockBasis {
    /// `(component, lowering word)` per basis vector.
    pub items: Vec<(usize, Vec<usize>)>,
    pub src: Coordinates,
    pub tgt: Coordinates,
}

/// A solved R-matrix.
pub struct RMatrix {
    pub pair: Pair,
    pub components: Vec<Component>,
    pub rho: Vec<RatFn>,
    /// Number of independent two-term equations used.
    pub equations: usize,
    bases: BTreeMap<Weight, BlockBasis>,
}

/// Candidates with no highest weight vector in the window are dropped.
fn find_components(pair: &Pair, cands: &[(Partition, Weight)]) -> Result<Vec<Component>, Error> {
    let mut out = Vec::new();
    for (nu, w) in cands {
        if w.degree() > pair.cutoff {
            continue;
        }
        let a = hw_vectors(pair.src.as_ref(), &pair.ring, &pair.src_space.block(w));
        let b = hw_vectors(pair.tgt.as_ref(), &pair.ring, &pair.tgt_space.block(w));
        match (a.len(), b.len()) {
            (0, 0) => continue,
            (1, 1) => out.push(Component {
                nu: nu.clone(),
                weight: w.clone(),
                v_src: a.into_iter().next().expect("one"),
                v_tgt: b.into_iter().next().expect("one"),
            }),
            (x, y) => {
                return Err(Error::Invalid(format!("component {nu}: multiplicities {x} and {y}")));
            }
        }
    }
    Ok(out)
}

impl RMatrix {
    /// Finds the components among `cands`, then solves for `rho` with
    /// `rho_{lambda0} = 1` before normalization.
    pub fn solve(
        pair: Pair,
        cands: &[(Partition, Weight)],
        lambda0: &Partition,
        norm: Normalization,
    ) -> Result<Self, Error> {
        let components = find_components(&pair, cands)?;
        let root = components
            .iter()
            .position(|c| &c.nu == lambda0)
            .ok_or_else(|| Error::Invalid(format!("{lambda0} is not a component in the window")))?;
        let mut rm = RMatrix { pair, components, rho: Vec::new(), equations: 0, bases: BTreeMap::new() };
        let eqs = rm.equations()?;
        rm.equations = eqs.len();
        let k = rm.components.len();
        let mut rho: Vec<Option<RatFn>> = vec![None; k];
        rho[root] = Some(RatFn::one());
        loop {
            let mut changed = false;
            for (lam, mu, a, b) in &eqs {
                // a * rho_mu = b * rho_lam
                match (&rho[*lam], &rho[*mu]) {
                    (Some(rl), None) if !a.is_zero() => {
                        rho[*mu] = Some(b.mul(rl).div(a)?);
                        changed = true;
                    }
                    (None, Some(rm_)) if !b.is_zero() => {
                        rho[*lam] = Some(a.mul(rm_).div(b)?);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                break;
            }
        }
        let missing = rho.iter().filter(|r| r.is_none()).count();
        if missing > 0 {
            return Err(Error::Underdetermined(missing));
        }
        let rho: Vec<RatFn> = rho.into_iter().map(|r| r.expect("solved")).collect();
        for (lam, mu, a, b) in &eqs {
            if !a.mul(&rho[*mu]).sub(&b.mul(&rho[*lam])).is_zero() {
                return Err(Error::Inconsistent);
            }
        }
        rm.rho = rho;
        rm.normalize(norm, root)?;
        Ok(rm)
    }

    fn alpha0(&self) -> Weight {
        self.pair.src.k_weight(0)
    }

    /// Component-adapted bases for the block of weight `w`.
    pub fn block_basis(&mut self, w: &Weight) -> Result<BlockBasis, Error> {
        if let Some(b) = self.bases.get(w) {
            return Ok(b.clone());
        }
        let cone = ring_roots(self.pair.src.as_ref(), &self.pair.ring);
        let mut items = Vec::new();
        let mut sv = Vec::new();
        let mut tv = Vec::new();
        for (ci, c) in self.components.iter().enumerate() {
            if !cone.in_cone(&(&c.weight - w)) {
                continue;
            }
            let spans = lower_spans(self.pair.src.as_ref(), &self.pair.ring, &c.v_src, &c.weight, &[w.clone()]);
            for (word, v) in spans.get(w).cloned().unwrap_or_default() {
                tv.push(apply_lowering(self.pair.tgt.as_ref(), &word, &c.v_tgt));
                sv.push(v);
                items.push((ci, word));
            }
        }
        let dim = self.pair.src_space.block(w).len();
        if sv.len() != dim {
            return Err(Error::Window(format!("block {w}: components span {} of {dim}", sv.len())));
        }
        let b = BlockBasis { items, src: Coordinates::new(sv)?, tgt: Coordinates::new(tv)? };
        self.bases.insert(w.clone(), b.clone());
        Ok(b)
    }

    /// Two-term equations `(lambda, mu, a, b)` meaning `a rho_mu = b rho_lambda`.
    fn equations(&mut self) -> Result<Vec<(usize, usize, RatFn, RatFn)>, Error> {
        let a0 = self.alpha0();
        let mut out = Vec::new();
        for ci in 0..self.components.len() {
            let c = self.components[ci].clone();
            for (g, w) in [(Gen::E(0), &c.weight + &a0), (Gen::F(0), &c.weight - &a0)] {
                if w.degree() > self.pair.cutoff || w.degree() < 0 {
                    continue;
                }
                let xs = self.pair.src_z.apply(&g, &lift(&c.v_src));
                let xt = self.pair.tgt_z.apply(&g, &lift(&c.v_tgt));
                if xs.is_zero() && xt.is_zero() {
                    continue;
                }
                let bb = self.block_basis(&w)?;
                let ys = bb.src.of(&xs)?;
                let yt = bb.tgt.of(&xt)?;
                for (((mu, _), a), b) in bb.items.iter().zip(ys).zip(yt) {
                    if a.is_zero() && b.is_zero() {
                        continue;
                    }
                    out.push((ci, *mu, a.to_ratfn(), b.to_ratfn()));
                }
            }
        }
        Ok(out)
    }

    fn normalize(&mut self, norm: Normalization, root: usize) -> Result<(), Error> {
        match norm {
            Normalization::AsComputed => {}
            Normalization::UnitAtOne => {
                for (ci, r) in self.rho.iter_mut().enumerate() {
                    let k = r.specialize(&Scalar::one())?;
                    if k.is_zero() {
                        return Err(Error::Invalid(format!("rho of {} vanishes at z = 1", self.components[ci].nu)));
                    }
                    *r = r.scale(&k.inv().expect("nonzero"));
                    self.components[ci].v_tgt = self.components[ci].v_tgt.scaled(&k);
                }
            }
            Normalization::Reference(refs) => {
                for (nu, u, ut) in refs {
                    let Some(ci) = self.components.iter().position(|c| c.nu == nu) else {
                        continue;
                    };
                    let w = weight_of_vector(self.pair.src.as_ref(), &u)?;
                    let bb = self.block_basis(&w)?;
                    let y = bb.src.of(&u)?;
                    let mut pu = FockVector::new();
                    for (((c, _), yb), t) in bb.items.iter().zip(&y).zip(bb.tgt.vectors()) {
                        if *c == ci {
                            pu.add_scaled(t, yb);
                        } else if !yb.is_zero() {
                            return Err(Error::Invalid(format!("reference for {nu} leaves the component")));
                        }
                    }
                    let k = proportionality(&pu, &ut)
                        .ok_or_else(|| Error::Invalid(format!("reference for {nu} is not proportional")))?;
                    // P(u) = k u', so v_tgt / k is the normalized target vector.
                    let ki = k.inv().ok_or(Error::DivisionByZero)?;
                    self.components[ci].v_tgt = self.components[ci].v_tgt.scaled(&ki);
                    self.rho[ci] = self.rho[ci].scale(&k);
                }
                // The normalizing component keeps rho = 1 with u -> k u'.
                let k0 = self.rho[root].to_constant().ok_or(Error::Invalid(String::from("rho at the normalizing component is not constant")))?;
                let ki = k0.inv().ok_or(Error::DivisionByZero)?;
                for r in &mut self.rho {
                    *r = r.scale(&ki);
                }
            }
        }
        self.bases.clear();
        Ok(())
    }

    pub fn rho_of(&self, nu: &Partition) -> Option<&RatFn> {
        self.components.iter().position(|c| &c.nu == nu).map(|i| &self.rho[i])
    }

    /// `R` on a source vector of weight `w`.
    pub fn apply(&mut self, w: &Weight, v: &FockVector<SPoly>) -> Result<FockVector<RatFn>, Error> {
        let bb = self.block_basis(w)?;
        let y = bb.src.of(v)?;
        let mut out = FockVector::new();
        for (((ci, _), yb), t) in bb.items.iter().zip(&y).zip(bb.tgt.vectors()) {
            if yb.is_zero() {
                continue;
            }
            let c = yb.to_ratfn().mul(&self.rho[*ci]);
            out.add_scaled(&t.map_coeffs(|s| RatFn::constant(s.clone())), &c);
        }
        Ok(out)
    }

    /// Checks `R x = x R` for every generator on every block of degree at
    /// most `max_degree`, returning the number of checks.
    pub fn check_intertwining(&mut self, max_degree: i32) -> Result<usize, Error> {
        let weights: Vec<Weight> =
            self.pair.src_space.weights().into_iter().filter(|w| w.degree() <= max_degree).collect();
        let rank = self.pair.src.rank();
        let mut checks = 0;
        for w in &weights {
            let basis = self.pair.src_space.block(w);
            for i in 0..=rank {
                for g in [Gen::E(i), Gen::F(i)] {
                    let a = self.pair.src.k_weight(i);
                    let w2 = if matches!(g, Gen::E(_)) { w + &a } else { w - &a };
                    if w2.degree() > self.pair.cutoff || w2.degree() < 0 {
                        continue;
                    }
                    for s in &basis {
                        let gs = self.pair.src_z.apply(&g, &lift(s));
                        let lhs = if gs.is_zero() { FockVector::new() } else { self.apply(&w2, &gs)? };
                        let rs = self.apply(w, &lift(s))?;
                        let rhs = apply_ratfn(self.pair.tgt_z.as_ref(), &g, &rs);
                        if !lhs.sub(&rhs).is_zero() {
                            return Err(Error::Invalid(format!("R fails to commute with {g:?} on block {w}")));
                        }
                        checks += 1;
                    }
                }
            }
        }
        Ok(checks)
    }
}

/// Applies a generator of an `SPoly` representation to a vector with
/// rational coefficients in `z` (variable 0, with `x2 = 1`).
pub fn apply_ratfn(rep: &dyn Rep<SPoly>, g: &Gen, v: &FockVector<RatFn>) -> FockVector<RatFn> {
    let mut out = FockVector::new();
    for (l, c) in v.iter() {
        let img = rep.apply(g, &FockVector::basis(l.clone()));
        for (l2, p) in img.iter() {
            out.add_term(l2.clone(), p.to_ratfn().mul(c));
        }
    }
    out
}

pub fn lift(v: &FockVector<Scalar>) -> FockVector<SPoly> {
    v.map_coeffs(|s| SPoly::from_scalar(s.clone()))
}

/// The common weight of the labels of `v`.
pub fn weight_of_vector(rep: &dyn Rep<Scalar>, v: &FockVector<Scalar>) -> Result<Weight, Error> {
    let mut it = v.labels().map(|l| rep.weight(l));
    let w = it.next().ok_or_else(|| Error::Invalid("zero vector has no weight".into()))?;
    if it.any(|x| x != w) {
        return Err(Error::Invalid("vector is not a weight vector".into()));
    }
    Ok(w)
}

/// `k` with `a = k b`, if any.
pub fn proportionality(a: &FockVector<Scalar>, b: &FockVector<Scalar>) -> Option<Scalar> {
    let (l, c) = b.iter().next()?;
    let k = a.coeff(l).div(c).ok()?;
    if a.sub(&b.scaled(&k)).is_zero() && !k.is_zero() {
        Some(k)
    } else {
        None
    }
}

/// Sign pairs `sigma = (sigma_1, sigma_2)` for `W^{sigma_1} (x) W^{sigma_2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// Parity of `|m|` on `W^sigma`.
    pub fn parity(self) -> u8 {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl core::str::FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            o => Err(Error::Invalid(format!("bad sign {o:?}"))),
        }
    }
}

/// The components of `W^{s1} (x) W^{s2}` of type C as partitions of length at most 2.
pub fn components_c(s1: Sign, s2: Sign, max: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    match (s1, s2) {
        (Sign::Plus, Sign::Plus) => {
            out.extend((0..=max / 2).map(|k| Partition::new(vec![2 * k]).expect("partition")));
        }
        (Sign::Minus, Sign::Minus) => {
            if max >= 2 {
                out.push(Partition::new(vec![1, 1]).expect("partition"));
            }
            out.extend((1..=max / 2).map(|k| Partition::new(vec![2 * k]).expect("partition")));
        }
        _ => {
            out.extend((0..).map(|k| 2 * k + 1).take_while(|&p| p <= max).map(|p| Partition::new(vec![p]).expect("partition")));
        }
    }
    out
}

/// The normalizing component for type C.
pub fn lambda0_c(s1: Sign, s2: Sign) -> Partition {
    match (s1, s2) {
        (Sign::Plus, Sign::Plus) => Partition::empty(),
        (Sign::Minus, Sign::Minus) => Partition::new(vec![1, 1]).expect("partition"),
        _ => Partition::new(vec![1]).expect("partition"),
    }
}

/// Closed form of `rho_lambda(z)` for type C.
pub fn closed_rho_c(s1: Sign, s2: Sign, nu: &Partition) -> Result<RatFn, Error> {
    let mixed = s1 != s2;
    if nu.len() == 2 {
        if !mixed && s1 == Sign::Minus && nu.parts() == [1, 1] {
            return Ok(RatFn::one());
        }
        return Err(Error::Invalid(format!("{nu} is not a component")));
    }
    let p = nu.part(0);
    if (p % 2 == 1) != mixed || (s1 == Sign::Minus && !mixed && p == 0) {
        return Err(Error::Invalid(format!("{nu} is not a component")));
    }
    let k = (p / 2) as i32;
    let mut r = RatFn::one();
    for j in 1..=k {
        r = r.mul(&mobius(if mixed { 4 * j } else { 4 * j - 2 }));
    }
    Ok(r)
}

/// Pole exponents `a` (poles at `z = q^a`) of the type C family, up to `bound`.
pub fn poles_c(s1: Sign, s2: Sign, bound: i32) -> Vec<i32> {
    let start = if s1 == s2 { 2 } else { 4 };
    (0..).map(|a| start + 4 * a).take_while(|&x| x <= bound).collect()
}

/// The renormalizing polynomial that clears the poles of `rho` for rank `m`.
pub fn renormalizer_c(s1: Sign, s2: Sign, m: usize) -> RatFn {
    let (d, off) = if s1 == s2 { ((m + 1) / 2, 2) } else { (m / 2, 0) };
    let mut r = RatFn::one();
    for i in 1..=d as i32 {
        let a = Scalar::q_pow(4 * i - off);
        let num = crate::spectral::ZPoly::linear(&a);
        let den = Scalar::one().sub(&a);
        r = r.mul(&RatFn::from_poly(num).scale(&den.inv().expect("nonzero")));
    }
    r
}

/// Closed form of `rho` for type D on `W_{l1}(z) (x) W_{l2}(1)` at the
/// component `(l1 + l2 + r - s, r + s)`, normalized at `(max, min)`.
pub fn closed_rho_d(l1: u32, l2: u32, r: u32, s: u32) -> Result<RatFn, Error> {
    let mn = l1.min(l2);
    if s > mn {
        return Err(Error::Invalid(format!("s = {s} exceeds min(l1, l2) = {mn}")));
    }
    let (l1, l2) = (l1 as i64, l2 as i64);
    let mut rho = RatFn::one();
    for k in 1..=r as i64 {
        let c = Scalar::q_pow((l1 - l2) as i32)
            .mul(&Scalar::qint(l2 + k + 1))
            .div(&Scalar::qint(l1 + k + 1))?;
        rho = rho.mul(&mobius((l1 + l2 + 2 * k + 2) as i32).scale(&c));
    }
    for sp in (s as i64 + 1)..=mn as i64 {
        // rho_{0,sp} = c_sp rho_{0,sp-1}, run downward from s = min.
        let c = Scalar::q_pow((l2 - l1) as i32)
            .mul(&Scalar::qint(l2 - sp + 1))
            .div(&Scalar::qint(l1 - sp + 1))?;
        let step = mobius((-l1 - l2 - 2 + 2 * sp) as i32).scale(&c);
        rho = rho.div(&step)?;
    }
    Ok(rho)
}

/// Pole exponents of the type D family up to `bound`.
pub fn poles_d(l1: u32, l2: u32, bound: i32) -> Vec<i32> {
    let d = (l1 as i32 - l2 as i32).abs();
    let mut v: Vec<i32> = (1..).map(|k| d + 2 * k).take_while(|&x| x <= bound).collect();
    v.extend((1..).map(|k| (l1 + l2) as i32 + 2 * k + 2).take_while(|&x| x <= bound));
    v.sort();
    v.dedup();
    v
}

/// Which algebra the computation is carried out for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    /// The ambient algebra for `eps`.
    Full,
    /// The target of a truncation map.
    Truncated(Side, Choice),
}

impl Level {
    pub fn map(self, eps: &Epsilon) -> Result<Option<PhiMap>, Error> {
        match self {
            Level::Full => Ok(None),
            Level::Truncated(s, c) => Ok(Some(PhiMap::new(eps, s, c)?)),
        }
    }
}

/// `inner` seen through `map`, if any.
pub fn wrap<C: Coeff>(inner: Arc<dyn Rep<C>>, map: &Option<PhiMap>) -> Result<Arc<dyn Rep<C>>, Error> {
    Ok(match map {
        None => inner,
        Some(m) => Arc::new(PhiRep::new(inner, m.clone())?),
    })
}

/// `X(x1) (x) X(x2)` at the given level, each factor truncated separately.
pub fn tensor_at<C: Coeff>(
    eps: &Epsilon,
    kind: FactorKind,
    params: [&Param; 2],
    map: &Option<PhiMap>,
) -> Result<Arc<dyn Rep<C>>, Error> {
    let mut parts: Vec<Arc<dyn Rep<C>>> = Vec::new();
    for p in params {
        let inner: Arc<dyn Rep<C>> = match kind {
            FactorKind::W => Arc::new(WRep::new(eps.clone(), p)?),
            FactorKind::W2 => Arc::new(W2Rep::new(eps.clone(), p)?),
        };
        parts.push(wrap(inner, map)?);
    }
    Ok(Arc::new(Tensor::new(parts)?))
}

/// Ring indices and kept positions at a level.
pub fn level_data(eps: &Epsilon, map: &Option<PhiMap>) -> (Vec<usize>, Option<Vec<usize>>) {
    match map {
        None => ((1..=eps.n()).collect(), None),
        Some(m) => ((1..=m.rank()).collect(), Some(m.kept.clone())),
    }
}

/// The type C problem `W^{s1}(z) (x) W^{s2}(1) -> W^{s2}(1) (x) W^{s1}(z)`
/// for the alternating `eps` of rank `m`, with its candidate components.
pub fn pair_c(
    m: usize,
    level: Level,
    s1: Sign,
    s2: Sign,
    cutoff: u32,
) -> Result<(Pair, Vec<(Partition, Weight)>), Error> {
    let eps = Epsilon::alternating(m);
    let map = level.map(&eps)?;
    let (ring, kept) = level_data(&eps, &map);
    let one = Param::one();
    let z = Param::Var(0);
    let spec = |a: Sign, b: Sign| {
        ModuleSpec::new(
            eps.clone(),
            vec![
                FactorSpec { kind: FactorKind::W, param: one.clone(), parity: Some(a.parity()) },
                FactorSpec { kind: FactorKind::W, param: one.clone(), parity: Some(b.parity()) },
            ],
            cutoff,
        )
    };
    let src_space = LabelSpace::new(&spec(s1, s2)?, kept.as_deref());
    let tgt_space = LabelSpace::new(&spec(s2, s1)?, kept.as_deref());
    let pair = Pair {
        src: tensor_at(&eps, FactorKind::W, [&one, &one], &map)?,
        src_z: tensor_at(&eps, FactorKind::W, [&z, &one], &map)?,
        tgt: tensor_at(&eps, FactorKind::W, [&one, &one], &map)?,
        tgt_z: tensor_at(&eps, FactorKind::W, [&one, &z], &map)?,
        src_space: Box::new(src_space),
        tgt_space: Box::new(tgt_space),
        ring,
        cutoff: cutoff as i32,
    };
    let idx = index_order(&eps, kept.as_deref());
    let cands = components_c(s1, s2, cutoff)
        .into_iter()
        .filter(|nu| Classical::O2.contains(nu))
        .filter_map(|nu| hw_weight(eps.n(), &idx, &nu, 1, 2).map(|w| (nu, w)))
        .collect();
    Ok((pair, cands))
}

/// Highest weight multiplicities of `W^{s1} (x) W^{s2}` at a level for every
/// partition in the labelling set of the level with `|nu| <= cutoff`.
pub fn decompose_c(m: usize, level: Level, s1: Sign, s2: Sign, cutoff: u32) -> Result<Vec<Multiplicity>, Error> {
    let eps = Epsilon::alternating(m);
    let map = level.map(&eps)?;
    let (ring, kept) = level_data(&eps, &map);
    let one = Param::one();
    let spec = ModuleSpec::new(
        eps.clone(),
        vec![
            FactorSpec { kind: FactorKind::W, param: one.clone(), parity: Some(s1.parity()) },
            FactorSpec { kind: FactorKind::W, param: one.clone(), parity: Some(s2.parity()) },
        ],
        cutoff,
    )?;
    let space = LabelSpace::new(&spec, kept.as_deref());
    let rep = tensor_at::<Scalar>(&eps, FactorKind::W, [&one, &one], &map)?;
    let idx = index_order(&eps, kept.as_deref());
    let cands: Vec<(Partition, Weight)> = Partition::all_up_to(cutoff, eps.n())
        .into_iter()
        .filter_map(|nu| hw_weight(eps.n(), &idx, &nu, 1, 2).map(|w| (nu, w)))
        .collect();
    Ok(decompose(rep.as_ref(), &ring, &space, &cands))
}

/// Solves the type C problem with the normalization used for the closed forms.
pub fn solve_c(m: usize, level: Level, s1: Sign, s2: Sign, cutoff: u32) -> Result<RMatrix, Error> {
    let (pair, cands) = pair_c(m, level, s1, s2, cutoff)?;
    let norm = if s1 == s2 { Normalization::AsComputed } else { Normalization::UnitAtOne };
    RMatrix::solve(pair, &cands, &lambda0_c(s1, s2), norm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinates_roundtrip() {
        let a = FockVector::from_terms([(Label::from_slice(&[1]), Scalar::one()), (Label::from_slice(&[2]), Scalar::q())]);
        let b = FockVector::basis(Label::from_slice(&[2]));
        let c = Coordinates::new(vec![a.clone(), b.clone()]).unwrap();
        let v = a.scaled(&Scalar::from_i64(3)).add(&b);
        assert_eq!(c.of(&v).unwrap(), vec![Scalar::from_i64(3), Scalar::one()]);
        assert!(c.of(&FockVector::<Scalar>::basis(Label::from_slice(&[5]))).is_err());
    }

    #[test]
    fn closed_d_normalized() {
        assert!(closed_rho_d(1, 2, 0, 1).unwrap().is_one());
        assert!(closed_rho_d(2, 2, 0, 2).unwrap().is_one());
    }

    #[test]
    fn type_c_plus_plus_full() {
        let mut r = solve_c(2, Level::Full, Sign::Plus, Sign::Plus, 6).unwrap();
        for (c, rho) in r.components.iter().zip(&r.rho) {
            assert_eq!(rho, &closed_rho_c(Sign::Plus, Sign::Plus, &c.nu).unwrap(), "{}", c.nu);
        }
        assert!(r.check_intertwining(3).unwrap() > 0);
    }
}

#[cfg(test)]
mod levels {
    use super::*;

    #[test]
    fn decomposition_sets() {
        let levels = [
            Level::Full,
            Level::Truncated(Side::Lower, Choice::Plus),
            Level::Truncated(Side::Upper, Choice::Plus),
        ];
        for level in levels {
            for (s1, s2) in [(Sign::Plus, Sign::Plus), (Sign::Minus, Sign::Minus), (Sign::Plus, Sign::Minus), (Sign::Minus, Sign::Plus)] {
                let want = components_c(s1, s2, 8);
                for mu in decompose_c(2, level, s1, s2, 8).unwrap() {
                    assert_eq!(mu.mult, usize::from(want.contains(&mu.nu)), "{level:?} {s1:?}{s2:?} {}", mu.nu);
                }
            }
        }
    }

    #[test]
    fn closed_form_on_every_level() {
        let levels = [
            Level::Full,
            Level::Truncated(Side::Lower, Choice::Plus),
            Level::Truncated(Side::Upper, Choice::Plus),
        ];
        for (s1, s2) in [(Sign::Plus, Sign::Plus), (Sign::Minus, Sign::Minus), (Sign::Plus, Sign::Minus), (Sign::Minus, Sign::Plus)] {
            let mut seen: BTreeMap<Partition, RatFn> = BTreeMap::new();
            for level in levels {
                let r = solve_c(2, level, s1, s2, 6).unwrap();
                assert!(!r.components.is_empty());
                for (c, rho) in r.components.iter().zip(&r.rho) {
                    assert_eq!(rho, &closed_rho_c(s1, s2, &c.nu).unwrap(), "{level:?} {s1:?}{s2:?} {}", c.nu);
                    if let Some(prev) = seen.insert(c.nu.clone(), rho.clone()) {
                        assert_eq!(&prev, rho);
                    }
                }
            }
        }
    }
}
