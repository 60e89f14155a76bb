//! Partitions, the tableaux `H^eps_lambda`, highest weights and highest weight
//! vectors in windowed subspaces.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::coeff::Coeff;
use crate::error::Error;
use crate::fock::{label_weight, FockVector, Gen, Label, ModuleSpec, Rep};
use crate::lattice::{Epsilon, RootBasis, Weight};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// A partition with weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Trailing zeros are dropped; other parts must be weakly decreasing.
    pub fn new(mut parts: Vec<u32>) -> Result<Self, Error> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Invalid(alloc::format!("{parts:?} is not a partition")));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Part `i` (0-based), zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn conjugate(&self) -> Self {
        let w = self.part(0) as usize;
        Partition((0..w).map(|c| self.0.iter().filter(|&&p| p as usize > c).count() as u32).collect())
    }

    /// All partitions of size at most `max` with at most `rows` parts.
    pub fn all_up_to(max: u32, rows: usize) -> Vec<Partition> {
        fn rec(left: u32, cap: u32, rows: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            out.push(Partition(cur.clone()));
            if rows == 0 {
                return;
            }
            for p in (1..=cap.min(left)).rev() {
                cur.push(p);
                rec(left - p, p, rows - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(max, max, rows, &mut Vec::new(), &mut out);
        out.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| b.0.cmp(&a.0)));
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

impl core::str::FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        if t.trim().is_empty() {
            return Ok(Partition::empty());
        }
        let parts = t
            .split(',')
            .map(|x| x.trim().parse::<u32>().map_err(|_| Error::Invalid(alloc::format!("bad partition {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Partition::new(parts)
    }
}

/// Fills `nu` by the indices of `idx` (listed with their parities in
/// decreasing index order): parity 0 fills the first remaining row, parity 1
/// the first remaining column. Returns `(index, boxes)` per step, or `None`
/// when the indices run out first.
pub fn tableau(idx: &[(usize, u8)], nu: &Partition) -> Option<Vec<(usize, u32)>> {
    let rows = nu.len();
    let mut eta = vec![0u32; rows];
    let mut out = Vec::new();
    let mut it = idx.iter();
    loop {
        let Some(r0) = (0..rows).find(|&r| eta[r] < nu.part(r)) else {
            return Some(out);
        };
        let &(i, bit) = it.next()?;
        let boxes = if bit == 0 {
            let b = nu.part(r0) - eta[r0];
            eta[r0] = nu.part(r0);
            b
        } else {
            // Leftmost column with free boxes is column eta[r0] of the lowest such row set.
            let c = (0..rows).filter(|&r| eta[r] < nu.part(r)).map(|r| eta[r]).min().expect("nonempty");
            let mut b = 0;
            for r in 0..rows {
                if eta[r] == c && nu.part(r) > c {
                    eta[r] += 1;
                    b += 1;
                }
            }
            b
        };
        out.push((i, boxes));
    }
}

/// `(index, parity)` pairs of `eps` restricted to `kept`, in decreasing index order.
pub fn index_order(eps: &Epsilon, kept: Option<&[usize]>) -> Vec<(usize, u8)> {
    (1..=eps.n()).rev().filter(|i| kept.map_or(true, |k| k.contains(i))).map(|i| (i, eps.bit(i))).collect()
}

/// True when the tableau for `nu` exists.
pub fn in_p_eps(idx: &[(usize, u8)], nu: &Partition) -> bool {
    tableau(idx, nu).is_some()
}

/// `r * ell * Lambda + sum_i m_i delta_i` where `m_i` counts the boxes
/// filled with `i`; `None` when the tableau is undefined.
pub fn hw_weight(n: usize, idx: &[(usize, u8)], nu: &Partition, ell: u32, r: u32) -> Option<Weight> {
    let t = tableau(idx, nu)?;
    let mut w = Weight::zero(n);
    w.lam = (ell * r) as i32;
    for (i, b) in t {
        w.delta[i - 1] += b as i32;
    }
    Some(w)
}

/// The classical groups appearing in the dualities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classical {
    O1,
    O2,
    Sp2,
}

impl Classical {
    /// Membership in the labelling set of irreducible representations.
    pub fn contains(self, nu: &Partition) -> bool {
        let c = nu.conjugate();
        match self {
            Classical::O1 => c.part(0) + c.part(1) <= 1,
            Classical::O2 => c.part(0) + c.part(1) <= 2,
            Classical::Sp2 => c.part(0) <= 1,
        }
    }

    /// Dimension of the irreducible representation labelled by `nu`.
    pub fn dim(self, nu: &Partition) -> Result<u32, Error> {
        if !self.contains(nu) {
            return Err(Error::Invalid(alloc::format!("{nu} does not label an irreducible")));
        }
        Ok(match self {
            Classical::O1 => 1,
            Classical::O2 => {
                if nu.len() == 1 {
                    2
                } else {
                    1
                }
            }
            Classical::Sp2 => nu.part(0) + 1,
        })
    }
}

/// A windowed subspace of a Fock-type module, given block by block.
pub trait Space: Send + Sync {
    fn weights(&self) -> Vec<Weight>;
    /// A basis of the weight block (empty when absent).
    fn block(&self, w: &Weight) -> Vec<FockVector<Scalar>>;
}

/// All labels of a module within its window.
pub struct LabelSpace {
    blocks: BTreeMap<Weight, Vec<Label>>,
}

impl LabelSpace {
    pub fn new(spec: &ModuleSpec, kept: Option<&[usize]>) -> Self {
        LabelSpace { blocks: spec.weight_blocks(kept) }
    }
}

impl Space for LabelSpace {
    fn weights(&self) -> Vec<Weight> {
        self.blocks.keys().cloned().collect()
    }
    fn block(&self, w: &Weight) -> Vec<FockVector<Scalar>> {
        self.blocks.get(w).map(|v| v.iter().cloned().map(FockVector::basis).collect()).unwrap_or_default()
    }
}

/// An explicit list of basis vectors per weight.
#[derive(Default)]
pub struct VecSpace {
    pub blocks: BTreeMap<Weight, Vec<FockVector<Scalar>>>,
}

impl Space for VecSpace {
    fn weights(&self) -> Vec<Weight> {
        self.blocks.keys().cloned().collect()
    }
    fn block(&self, w: &Weight) -> Vec<FockVector<Scalar>> {
        self.blocks.get(w).cloned().unwrap_or_default()
    }
}

/// The tensor product of two subspaces, truncated by total degree.
pub struct ProductSpace {
    pub a: Box<dyn Space>,
    pub b: Box<dyn Space>,
    pub cutoff: i32,
}

impl Space for ProductSpace {
    fn weights(&self) -> Vec<Weight> {
        let wb = self.b.weights();
        let mut out: Vec<Weight> = Vec::new();
        for x in self.a.weights() {
            for y in &wb {
                let s = &x + y;
                if s.degree() <= self.cutoff {
                    out.push(s);
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }
    fn block(&self, w: &Weight) -> Vec<FockVector<Scalar>> {
        let mut out = Vec::new();
        for x in self.a.weights() {
            let y = w - &x;
            if y.lam < 0 {
                continue;
            }
            let bb = self.b.block(&y);
            if bb.is_empty() {
                continue;
            }
            for u in self.a.block(&x) {
                for v in &bb {
                    out.push(tensor_vectors(&u, v));
                }
            }
        }
        out
    }
}

/// `u (x) v` on concatenated labels.
pub fn tensor_vectors<C: Coeff>(u: &FockVector<C>, v: &FockVector<C>) -> FockVector<C> {
    let mut r = FockVector::new();
    for (a, x) in u.iter() {
        for (b, y) in v.iter() {
            let mut l = a.clone();
            l.extend_from_slice(b);
            r.add_term(l, x.mul(y));
        }
    }
    r
}

/// Incremental row reduction of vectors keyed by label.
#[derive(Clone, Default)]
pub struct Echelon {
    rows: Vec<(Label, FockVector<Scalar>)>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows.
    pub fn reduce(&self, v: &FockVector<Scalar>) -> FockVector<Scalar> {
        let mut r = v.clone();
        for (p, row) in &self.rows {
            let c = r.coeff(p);
            if !c.is_zero() {
                r.add_scaled(row, &c.neg());
            }
        }
        r
    }

    /// Adds `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: &FockVector<Scalar>) -> bool {
        let r = self.reduce(v);
        let Some((p, c)) = r.iter().next().map(|(l, c)| (l.clone(), c.clone())) else {
            return false;
        };
        let r = r.scaled(&c.inv().expect("nonzero"));
        for (_, row) in self.rows.iter_mut() {
            let d = row.coeff(&p);
            if !d.is_zero() {
                row.add_scaled(&r, &d.neg());
            }
        }
        self.rows.push((p, r));
        true
    }

    pub fn contains(&self, v: &FockVector<Scalar>) -> bool {
        self.reduce(v).is_zero()
    }

    /// The reduced basis rows.
    pub fn vectors(&self) -> Vec<FockVector<Scalar>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }
}

/// Vectors in the span of `basis` killed by every `e_i`, `i` in `ring`.
pub fn hw_vectors(rep: &dyn Rep<Scalar>, ring: &[usize], basis: &[FockVector<Scalar>]) -> Vec<FockVector<Scalar>> {
    if basis.is_empty() {
        return Vec::new();
    }
    let mut row_of: BTreeMap<(usize, Label), usize> = BTreeMap::new();
    let mut entries: Vec<(usize, usize, Scalar)> = Vec::new();
    for (col, b) in basis.iter().enumerate() {
        for &i in ring {
            for (l, c) in rep.apply(&Gen::E(i), b).iter() {
                let next = row_of.len();
                let r = *row_of.entry((i, l.clone())).or_insert(next);
                entries.push((r, col, c.clone()));
            }
        }
    }
    let mut m: Matrix<Scalar> = Matrix::zeros(row_of.len(), basis.len());
    for (r, c, v) in entries {
        let cur = m.get(r, c).add(&v);
        m.set(r, c, cur);
    }
    let ker = if row_of.is_empty() { (0..basis.len()).map(|j| unit(basis.len(), j)).collect() } else { m.kernel() };
    ker.into_iter()
        .map(|k| {
            let mut v = FockVector::new();
            for (c, b) in k.iter().zip(basis) {
                if !c.is_zero() {
                    v.add_scaled(b, c);
                }
            }
            v
        })
        .collect()
}

fn unit(n: usize, j: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[j] = Scalar::one();
    v
}

/// One row of a decomposition report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multiplicity {
    pub nu: Partition,
    pub weight: Weight,
    pub mult: usize,
}

/// Dimensions of the highest weight spaces at the weights of `candidates`.
pub fn decompose(
    rep: &dyn Rep<Scalar>,
    ring: &[usize],
    space: &dyn Space,
    candidates: &[(Partition, Weight)],
) -> Vec<Multiplicity> {
    candidates
        .iter()
        .map(|(nu, w)| Multiplicity {
            nu: nu.clone(),
            weight: w.clone(),
            mult: hw_vectors(rep, ring, &space.block(w)).len(),
        })
        .collect()
}

/// Ambient weights of the positive roots `k_weight(i)`, `i` in `ring`.
pub fn ring_roots(rep: &dyn Rep<Scalar>, ring: &[usize]) -> RootBasis {
    RootBasis::new(ring.iter().map(|&i| rep.k_weight(i)).collect())
}

/// Lowering closure: spans of `f_{i_k}...f_{i_1} v` for words in `ring`,
/// restricted to weights `mu` with `top - mu` and `mu - floor` in the cone for
/// some floor. Each returned vector carries the word that produced it
/// (indices in application order).
pub fn lower_spans(
    rep: &dyn Rep<Scalar>,
    ring: &[usize],
    v: &FockVector<Scalar>,
    top: &Weight,
    floors: &[Weight],
) -> BTreeMap<Weight, Vec<(Vec<usize>, FockVector<Scalar>)>> {
    let cone = ring_roots(rep, ring);
    let reach = |w: &Weight| floors.iter().any(|f| cone.in_cone(&(w - f)));
    let mut out: BTreeMap<Weight, Vec<(Vec<usize>, FockVector<Scalar>)>> = BTreeMap::new();
    let mut ech: BTreeMap<Weight, Echelon> = BTreeMap::new();
    if !reach(top) || v.is_zero() {
        return out;
    }
    let mut e = Echelon::new();
    e.insert(v);
    ech.insert(top.clone(), e);
    out.insert(top.clone(), vec![(Vec::new(), v.clone())]);
    // Weights are processed in order of height below the top.
    let mut frontier: Vec<Weight> = vec![top.clone()];
    let mut seen: BTreeMap<Weight, ()> = BTreeMap::new();
    seen.insert(top.clone(), ());
    while !frontier.is_empty() {
        let mut next: BTreeMap<Weight, ()> = BTreeMap::new();
        for w in &frontier {
            let items = out.get(w).cloned().unwrap_or_default();
            for &i in ring {
                let nw = w - &rep.k_weight(i);
                if !reach(&nw) {
                    continue;
                }
                for (word, x) in &items {
                    let y = rep.apply(&Gen::F(i), x);
                    if y.is_zero() {
                        continue;
                    }
                    let e = ech.entry(nw.clone()).or_default();
                    if e.insert(&y) {
                        let mut wd = word.clone();
                        wd.push(i);
                        out.entry(nw.clone()).or_default().push((wd, y));
                        next.insert(nw.clone(), ());
                    }
                }
            }
        }
        frontier = next.into_keys().filter(|w| seen.insert(w.clone(), ()).is_none()).collect();
    }
    out
}

/// Applies `f_{word[0]}` first, then `f_{word[1]}`, and so on.
pub fn apply_lowering<C: Coeff>(rep: &dyn Rep<C>, word: &[usize], v: &FockVector<C>) -> FockVector<C> {
    let mut r = v.clone();
    for &i in word {
        r = rep.apply(&Gen::F(i), &r);
    }
    r
}

/// Weight of a label as seen by `rep`.
pub fn weight_of(rep: &dyn Rep<Scalar>, l: &[u8]) -> Weight {
    label_weight(rep.eps().n(), l)
}

/// Human-readable summary.
pub fn format_multiplicities(ms: &[Multiplicity]) -> String {
    let mut s = String::new();
    for m in ms {
        s.push_str(&alloc::format!("{} {} x{}\n", m.nu, m.weight, m.mult));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Param;
    use crate::fock::{FactorKind, FactorSpec};

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn tableau_examples() {
        assert!(tableau(&[(2, 0), (1, 0)], &p(&[1, 1, 1])).is_none());
        let w = hw_weight(3, &[(3, 1), (2, 0), (1, 1)], &p(&[1]), 1, 1).unwrap();
        assert_eq!(w, Weight::new(1, vec![0, 0, 1]));
        // Alternating eps, (3,1): column of 5 then row of 4.
        let e = Epsilon::alternating(2);
        let t = tableau(&index_order(&e, None), &p(&[3, 1])).unwrap();
        assert_eq!(t, vec![(5, 2), (4, 2)]);
    }

    #[test]
    fn conjugate_and_groups() {
        assert_eq!(p(&[3, 1]).conjugate(), p(&[2, 1, 1]));
        assert!(Classical::O2.contains(&p(&[1, 1])));
        assert!(!Classical::O2.contains(&p(&[2, 1])));
        assert!(Classical::Sp2.contains(&p(&[4])));
        assert_eq!(Classical::Sp2.dim(&p(&[4])).unwrap(), 5);
        assert_eq!(Classical::O2.dim(&p(&[3])).unwrap(), 2);
        assert_eq!(Partition::all_up_to(4, 2).len(), 9);
        assert_eq!("(2,1)".parse::<Partition>().unwrap(), p(&[2, 1]));
    }

    #[test]
    fn single_w_is_two_components() {
        let eps = Epsilon::alternating(2);
        let spec = ModuleSpec::w(eps.clone(), Param::one(), 5).unwrap();
        let rep = spec.rep::<Scalar>().unwrap();
        let space = LabelSpace::new(&spec, None);
        let idx = index_order(&eps, None);
        let ring: Vec<usize> = (1..=5).collect();
        let cands: Vec<_> = Partition::all_up_to(3, 3)
            .into_iter()
            .filter_map(|nu| hw_weight(5, &idx, &nu, 1, 1).map(|w| (nu, w)))
            .collect();
        let ms = decompose(rep.as_ref(), &ring, &space, &cands);
        for m in ms {
            let expect = usize::from(m.nu.len() <= 1 && m.nu.part(0) <= 1);
            assert_eq!(m.mult, expect, "{}", m.nu);
        }
    }

    #[test]
    fn lowering_spans_match_block_dims() {
        let eps = Epsilon::alternating(2);
        let spec = ModuleSpec::new(
            eps.clone(),
            vec![FactorSpec { kind: FactorKind::W, param: Param::one(), parity: Some(0) }],
            6,
        )
        .unwrap();
        let rep = spec.rep::<Scalar>().unwrap();
        let ring: Vec<usize> = (1..=5).collect();
        let top = Weight::lambda(5);
        let v = FockVector::basis(crate::fock::label_of(&[&[0, 0, 0, 0, 0]]));
        let blocks = spec.weight_blocks(None);
        let floors: Vec<Weight> = blocks.keys().cloned().collect();
        let spans = lower_spans(rep.as_ref(), &ring, &v, &top, &floors);
        for (w, labels) in &blocks {
            if w.degree() <= 4 {
                assert_eq!(spans.get(w).map_or(0, |s| s.len()), labels.len(), "{w}");
            }
        }
    }
}
