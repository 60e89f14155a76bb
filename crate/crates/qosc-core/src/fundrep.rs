//! Fundamental representations `W_{l,k}(x)` inside `W^{(x)2}` for the
//! alternating-prime flavor, their highest weight vectors `u_{r,s}` and the
//! operators used to relate them.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::coeff::{Coeff, Param};
use crate::decomp::{
    apply_lowering, decompose, hw_vectors, hw_weight, index_order, lower_spans, tensor_vectors, Echelon, Partition, ProductSpace,
    LabelSpace, Multiplicity, Space, VecSpace,
};
use crate::error::Error;
use crate::fock::{label_of, label_weight, FockVector, Gen, Label, ModuleSpec, Rep, W2Rep};
use crate::lattice::{Epsilon, Weight};
use crate::phi::{Choice, PhiMap, Side};
use crate::rmatrix::{level_data, tensor_at, Coordinates, Level, Normalization, Pair, RMatrix};
use crate::fock::FactorKind;
use crate::scalar::Scalar;
use crate::spectral::SPoly;
use crate::word::Word;

/// `v_{l,k} = |k e_n> (x) |(l-k) e_n>`.
pub fn v_lk(n: usize, l: u32, k: u32) -> Label {
    let mut a = vec![0u8; n];
    let mut b = vec![0u8; n];
    a[n - 1] = k as u8;
    b[n - 1] = (l - k) as u8;
    label_of(&[&a, &b])
}

/// `W^{(x)2}(x)` at a level, as a single representation.
pub fn w2_at<C: Coeff>(eps: &Epsilon, x: &Param, map: &Option<PhiMap>) -> Result<Arc<dyn Rep<C>>, Error> {
    let inner: Arc<dyn Rep<C>> = Arc::new(W2Rep::new(eps.clone(), x)?);
    Ok(match map {
        None => inner,
        Some(m) => Arc::new(crate::phi::PhiRep::new(inner, m.clone())?),
    })
}

/// A windowed basis of `W_{l,k}` with its closure census.
pub struct Fundamental {
    pub l: u32,
    pub k: u32,
    pub top: Weight,
    pub space: VecSpace,
    /// `(block, basis words)` in generation order.
    pub words: BTreeMap<Weight, Vec<Vec<usize>>>,
    /// Number of generator applications verified to stay inside.
    pub closure_checks: usize,
}

impl Fundamental {
    pub fn block_dims(&self) -> BTreeMap<Weight, usize> {
        self.space.blocks.iter().map(|(w, v)| (w.clone(), v.len())).collect()
    }
}

/// All weights of `W^{(x)2}` within the window at a level.
fn window_weights(eps: &Epsilon, kept: Option<&[usize]>, cutoff: u32) -> Result<Vec<Weight>, Error> {
    let spec = ModuleSpec::w2(eps.clone(), Param::one(), cutoff)?;
    Ok(spec.weight_blocks(kept).into_keys().collect())
}

/// Generates `W_{l,k}` from `v_{l,k}` by lowering, then checks that every
/// generator (including index 0) maps each block into the generated span.
pub fn build_fundamental(eps: &Epsilon, level: Level, l: u32, k: u32, cutoff: u32) -> Result<Fundamental, Error> {
    if k > l {
        return Err(Error::Invalid(format!("k = {k} exceeds l = {l}")));
    }
    if eps.bit(1) != 0 || eps.bit(eps.n()) != 0 {
        return Err(Error::Domain("fundamental modules need eps_1 = eps_n = 0"));
    }
    if l + 2 > cutoff {
        return Err(Error::Window(format!("cutoff {cutoff} below l + 2 = {}", l + 2)));
    }
    let map = level.map(eps)?;
    let (ring, kept) = level_data(eps, &map);
    let rep: Arc<dyn Rep<Scalar>> = w2_at(eps, &Param::one(), &map)?;
    let v = FockVector::basis(v_lk(eps.n(), l, k));
    if let Some(kp) = &kept {
        if !crate::fock::label_supported_on(&v_lk(eps.n(), l, k), eps.n(), kp) {
            return Err(Error::Invalid("v_{l,k} is not in the truncated space".into()));
        }
    }
    let top = label_weight(eps.n(), &v_lk(eps.n(), l, k));
    let floors = window_weights(eps, kept.as_deref(), cutoff)?;
    let spans = lower_spans(rep.as_ref(), &ring, &v, &top, &floors);
    let mut space = VecSpace::default();
    let mut words = BTreeMap::new();
    for (w, items) in spans {
        if w.degree() > cutoff as i32 {
            continue;
        }
        words.insert(w.clone(), items.iter().map(|(wd, _)| wd.clone()).collect());
        space.blocks.insert(w, items.into_iter().map(|(_, x)| x).collect());
    }
    let mut fund = Fundamental { l, k, top, space, words, closure_checks: 0 };
    let mut gens: Vec<usize> = ring.clone();
    gens.push(0);
    let ech: BTreeMap<Weight, Echelon> = fund
        .space
        .blocks
        .iter()
        .map(|(w, vs)| {
            let mut e = Echelon::new();
            for x in vs {
                e.insert(x);
            }
            (w.clone(), e)
        })
        .collect();
    for (w, vs) in &fund.space.blocks {
        for &i in &gens {
            let a = rep.k_weight(i);
            for (g, w2) in [(Gen::E(i), w + &a), (Gen::F(i), w - &a)] {
                if w2.degree() > cutoff as i32 {
                    continue;
                }
                for x in vs {
                    let y = rep.apply(&g, x);
                    let inside = match ech.get(&w2) {
                        Some(e) => e.contains(&y),
                        None => y.is_zero(),
                    };
                    if !inside {
                        return Err(Error::Invalid(format!("W_{{{l},{k}}} not stable under {g:?} at {w}")));
                    }
                    fund.closure_checks += 1;
                }
            }
        }
    }
    Ok(fund)
}

/// `x^{-1} e_0 v_{l,k} = |e_1 + k e_n> (x) |e_2 + (l-k) e_n> - q^{-1} |e_2 + k e_n> (x) |e_1 + (l-k) e_n>`.
pub fn e0_expansion(n: usize, l: u32, k: u32) -> FockVector<Scalar> {
    let ket = |a: usize, c: u32| {
        let mut v = vec![0u8; n];
        v[a - 1] += 1;
        v[n - 1] += c as u8;
        v
    };
    let mut r = FockVector::new();
    r.add_term(label_of(&[&ket(1, k), &ket(2, l - k)]), Scalar::one());
    r.add_term(label_of(&[&ket(2, k), &ket(1, l - k)]), Scalar::q_pow(-1).neg());
    r
}

/// `(1/[l+1]) { (f_2..f_{n-2}) f_{n-1} (f_1..f_{n-2}) f_n
///  - (f_2..f_{n-2}) f_n (f_1..f_{n-2}) f_{n-1} }`.
pub fn e0_lowering_word(n: usize, l: u32) -> Word {
    let a: Vec<usize> = (2..=n - 2).collect();
    let b: Vec<usize> = (1..=n - 2).collect();
    let mk = |mid: usize, last: usize| {
        let mut idx = a.clone();
        idx.push(mid);
        idx.extend(&b);
        idx.push(last);
        Word::fs(&idx)
    };
    let c = Scalar::qint(l as i64 + 1).inv().expect("nonzero");
    Word::lin(vec![(c.clone(), mk(n - 1, n)), (c.neg(), mk(n, n - 1))])
}

/// Report of the isomorphism `W_{l,k} -> W_{l,k'}` matching the words.
#[derive(Clone, Debug)]
pub struct IsoReport {
    pub dims_agree: bool,
    pub checks: usize,
    pub failures: usize,
}

/// Sends `X v_{l,k}` to `X v_{l,k'}` and checks commutation with `e_0`, `f_0`.
pub fn iso_between_k(eps: &Epsilon, l: u32, k: u32, k2: u32, cutoff: u32) -> Result<IsoReport, Error> {
    let a = build_fundamental(eps, Level::Full, l, k, cutoff)?;
    let b = build_fundamental(eps, Level::Full, l, k2, cutoff)?;
    let dims_agree = a.block_dims() == b.block_dims();
    let rep: Arc<dyn Rep<Scalar>> = w2_at(eps, &Param::one(), &None)?;
    let va = FockVector::basis(v_lk(eps.n(), l, k));
    let vb = FockVector::basis(v_lk(eps.n(), l, k2));
    let mut coords: BTreeMap<Weight, (Coordinates, Vec<FockVector<Scalar>>)> = BTreeMap::new();
    for (w, ws) in &a.words {
        let sa: Vec<_> = ws.iter().map(|wd| apply_lowering(rep.as_ref(), wd, &va)).collect();
        let sb: Vec<_> = ws.iter().map(|wd| apply_lowering(rep.as_ref(), wd, &vb)).collect();
        coords.insert(w.clone(), (Coordinates::new(sa)?, sb));
    }
    let (mut checks, mut failures) = (0, 0);
    let a0 = rep.k_weight(0);
    for (w, ws) in &a.words {
        for (g, w2) in [(Gen::E(0), w + &a0), (Gen::F(0), w - &a0)] {
            if w2.degree() > cutoff as i32 {
                continue;
            }
            for wd in ws {
                let x = rep.apply(&g, &apply_lowering(rep.as_ref(), wd, &va));
                let y = rep.apply(&g, &apply_lowering(rep.as_ref(), wd, &vb));
                let image = match coords.get(&w2) {
                    Some((c, sb)) => {
                        let t = c.of(&x)?;
                        let mut r = FockVector::new();
                        for (tc, v) in t.iter().zip(sb) {
                            r.add_scaled(v, tc);
                        }
                        r
                    }
                    None => FockVector::new(),
                };
                checks += 1;
                if !image.sub(&y).is_zero() {
                    failures += 1;
                }
            }
        }
    }
    Ok(IsoReport { dims_agree, checks, failures })
}

/// The truncation map used for `u_{r,s}` (lower side of the alternating-prime flavor).
pub fn lower_map(m: usize, choice: Choice) -> Result<PhiMap, Error> {
    PhiMap::new(&Epsilon::alternating_prime(m), Side::Lower, choice)
}

/// `f_{m+1}^{(i)} f_m^{(j)} v_l` in one factor, target indices.
fn f_pair(rep: &dyn Rep<Scalar>, m: usize, l: u32, i: u32, j: u32) -> FockVector<Scalar> {
    let n = rep.eps().n();
    let v = FockVector::basis(v_lk(n, l, l));
    let w = Word::prod(vec![Word::DivPow(Gen::F(m + 1), i), Word::DivPow(Gen::F(m), j)]);
    w.eval(rep, &v)
}

/// Sign convention for the `j` factors of `u_{r,s}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JSign {
    /// `(-1)^j`.
    Minus,
    /// `(-q)^j`.
    MinusQ,
}

/// Index ranges of the components `u^{i,j}_{r,s}`.
pub fn u_in_range(l1: u32, l2: u32, r: i64, s: i64, i: i64, j: i64) -> bool {
    let _ = (l1, l2);
    0 <= i && i <= r && 0 <= j && j <= s
}

/// `u^{i,j}_{r,s}`, zero out of range.
pub fn u_ij(rep: &dyn Rep<Scalar>, m: usize, l1: u32, l2: u32, r: i64, s: i64, i: i64, j: i64) -> FockVector<Scalar> {
    if !u_in_range(l1, l2, r, s, i, j) {
        return FockVector::new();
    }
    let a = f_pair(rep, m, l1, i as u32, j as u32);
    let b = f_pair(rep, m, l2, (r - i) as u32, (s - j) as u32);
    tensor_vectors(&a, &b)
}

/// The coefficient of `u^{i,j}_{r,s}` in `u_{r,s}`.
pub fn u_coeff(l1: u32, l2: u32, r: u32, s: u32, i: u32, j: u32, js: JSign) -> Scalar {
    let (l1, l2, r, s) = (l1 as i64, l2 as i64, r as i64, s as i64);
    let qi = |x: i64| Scalar::qint(x);
    let mut c = Scalar::one();
    for k in 1..=i as i64 {
        c = c.mul(&Scalar::q_pow((2 * k - 2 - l2 - 2 * r) as i32)).mul(&qi(r + l2 - k + 2)).div(&qi(l1 + k + 1)).expect("nonzero");
        c = c.neg();
    }
    for k in 1..=j as i64 {
        c = c.mul(&Scalar::q_pow((2 * k + l2 - 2 * s) as i32)).mul(&qi(l2 - s + k)).div(&qi(l1 - k + 1)).expect("nonzero");
        c = match js {
            JSign::Minus => c.neg(),
            JSign::MinusQ => c.mul(&Scalar::q()).neg(),
        };
    }
    c
}

/// Builds the single-factor representation used for `u_{r,s}`.
pub fn factor_rep(m: usize, choice: Choice) -> Result<Arc<dyn Rep<Scalar>>, Error> {
    let map = lower_map(m, choice)?;
    w2_at(&map.eps.clone(), &Param::one(), &Some(map))
}

/// `u_{r,s}` as a vector in `W_{l1} (x) W_{l2}` (truncated labels).
pub fn u_rs(m: usize, choice: Choice, l1: u32, l2: u32, r: u32, s: u32, js: JSign) -> Result<FockVector<Scalar>, Error> {
    if s > l1.min(l2) {
        return Err(Error::Invalid(format!("s = {s} exceeds min(l1, l2)")));
    }
    let rep = factor_rep(m, choice)?;
    let mut out = FockVector::new();
    for i in 0..=r {
        for j in 0..=s {
            let c = u_coeff(l1, l2, r, s, i, j, js);
            out.add_scaled(&u_ij(rep.as_ref(), m, l1, l2, r as i64, s as i64, i as i64, j as i64), &c);
        }
    }
    Ok(out)
}

/// The component label `(l1 + l2 + r - s, r + s)`.
pub fn component_d(l1: u32, l2: u32, r: u32, s: u32) -> Partition {
    Partition::new(vec![l1 + l2 + r - s, r + s]).expect("partition")
}

/// The four operators relating highest weight vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bold {
    Em,
    Em1,
    Fm,
    Fm1,
}

impl core::str::FromStr for Bold {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "Em" | "E_m" => Ok(Bold::Em),
            "Em1" | "E_m+1" => Ok(Bold::Em1),
            "Fm" | "F_m" => Ok(Bold::Fm),
            "Fm1" | "F_m+1" => Ok(Bold::Fm1),
            o => Err(Error::Invalid(format!("unknown operator {o:?}"))),
        }
    }
}

/// Atoms of the bold operator, leftmost first (applied right to left).
pub fn bold_indices(which: Bold, m: usize) -> Result<(bool, Vec<usize>), Error> {
    if m < 2 {
        return Err(Error::Domain("bold operators need m >= 2"));
    }
    let desc = |a: usize, b: usize| -> Vec<usize> { (b..=a).rev().collect() };
    let asc = |a: usize, b: usize| -> Vec<usize> { (a..=b).collect() };
    let (raise, mid) = match which {
        Bold::Fm => (true, m + 1),
        Bold::Fm1 => (true, m),
        Bold::Em => (false, m + 1),
        Bold::Em1 => (false, m),
    };
    let mut idx = Vec::new();
    if raise {
        idx.extend(desc(m - 1, 1));
        idx.push(mid);
        idx.extend(desc(m - 1, 2));
        idx.push(0);
    } else {
        idx.push(0);
        idx.extend(asc(2, m - 1));
        idx.push(mid);
        idx.extend(asc(1, m - 1));
    }
    Ok((raise, idx))
}

pub fn bold_word(which: Bold, m: usize) -> Result<Word, Error> {
    let (raise, idx) = bold_indices(which, m)?;
    Ok(if raise { Word::es(&idx) } else { Word::fs(&idx) })
}

/// Text form such as `e1 e3 e0`.
pub fn bold_text(which: Bold, m: usize) -> Result<String, Error> {
    let (raise, idx) = bold_indices(which, m)?;
    let c = if raise { 'e' } else { 'f' };
    Ok(idx.iter().map(|i| format!("{c}{i}")).collect::<Vec<_>>().join(" "))
}

/// `W_{l1}(x1) (x) W_{l2}(x2)` at the lower level of the alternating-prime
/// flavor with symbolic `x1`, `x2`.
pub fn symbolic_pair(m: usize, choice: Choice) -> Result<Arc<dyn Rep<SPoly>>, Error> {
    let map = Some(lower_map(m, choice)?);
    let eps = Epsilon::alternating_prime(m);
    tensor_at(&eps, FactorKind::W2, [&Param::Var(0), &Param::Var(1)], &map)
}

fn lift(v: &FockVector<Scalar>) -> FockVector<SPoly> {
    v.map_coeffs(|s| SPoly::from_scalar(s.clone()))
}

fn x1(e: i32) -> SPoly {
    SPoly::monomial(Scalar::one(), e, 0)
}

fn x2(e: i32) -> SPoly {
    SPoly::monomial(Scalar::one(), 0, e)
}

fn qint(x: i64) -> Scalar {
    Scalar::qint(x)
}

/// Outcome of a batch of exact identity checks.
#[derive(Clone, Debug, Default)]
pub struct IdentityReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl IdentityReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.checked > 0
    }

    fn record(&mut self, name: String, lhs: &FockVector<SPoly>, rhs: &FockVector<SPoly>) {
        self.checked += 1;
        if lhs != rhs {
            self.failures.push(name);
        }
    }
}

/// Checks the four action identities and the vanishing statement for
/// `0 <= i <= r <= rmax`, `0 <= j <= s <= smax`.
pub fn verify_ef_identities(
    m: usize,
    choice: Choice,
    l1: u32,
    l2: u32,
    rmax: u32,
    smax: u32,
) -> Result<IdentityReport, Error> {
    let rep = symbolic_pair(m, choice)?;
    let one = factor_rep(m, choice)?;
    let u = |r: i64, s: i64, i: i64, j: i64| lift(&u_ij(one.as_ref(), m, l1, l2, r, s, i, j));
    let word = |b| bold_word(b, m);
    let (fm, fm1, em, em1) = (word(Bold::Fm)?, word(Bold::Fm1)?, word(Bold::Em)?, word(Bold::Em1)?);
    let (a1, a2) = (l1 as i64, l2 as i64);
    let mut rep_out = IdentityReport::default();
    let smax = smax.min(l1.min(l2)) as i64;
    for r in 0..=rmax as i64 {
        for s in 0..=smax {
            for i in 0..=r {
                for j in 0..=s {
                    let base = u(r, s, i, j);
                    if r == 0 {
                        let lhs = fm.eval(rep.as_ref(), &base);
                        let mut rhs = u(0, s + 1, 0, j + 1).scaled(&x1(1).scale(&Scalar::q_pow((a2 - 2 * s + 2 * j) as i32).mul(&qint(j + 1))));
                        rhs.add_scaled(&u(0, s + 1, 0, j), &x2(1).scale(&qint(s - j + 1)));
                        rep_out.record(format!("F_m u^(0,{j})_(0,{s})"), &lhs, &rhs);
                        let lhs = em.eval(rep.as_ref(), &base);
                        let mut rhs = u(0, s - 1, 0, j - 1).scaled(&x1(-1).scale(&qint(a1 - j + 1)));
                        rhs.add_scaled(
                            &u(0, s - 1, 0, j),
                            &x2(-1).scale(&Scalar::q_pow((2 * j - a1) as i32).mul(&qint(a2 - s + j + 1))),
                        );
                        rep_out.record(format!("E_m u^(0,{j})_(0,{s})"), &lhs, &rhs);
                    }
                    let lhs = fm1.eval(rep.as_ref(), &base);
                    let mut rhs = u(r + 1, s, i + 1, j)
                        .scaled(&x1(1).scale(&Scalar::q_pow((2 * i - 2 * r - a2 - 2) as i32).mul(&qint(i + 1))));
                    rhs.add_scaled(&u(r + 1, s, i, j), &x2(1).scale(&qint(r - i + 1)));
                    rep_out.record(format!("F_m+1 u^({i},{j})_({r},{s})"), &lhs, &rhs);
                    let lhs = em1.eval(rep.as_ref(), &base);
                    let mut rhs = u(r - 1, s, i - 1, j).scaled(&x1(-1).scale(&qint(a1 + i + 1)).neg());
                    rhs.add_scaled(
                        &u(r - 1, s, i, j),
                        &x2(-1).scale(&Scalar::q_pow((a1 + 2 * i + 2) as i32).mul(&qint(a2 + r - i + 1))).neg(),
                    );
                    rep_out.record(format!("E_m+1 u^({i},{j})_({r},{s})"), &lhs, &rhs);
                    let mut idx = vec![0];
                    idx.extend(2..m);
                    idx.extend(1..m);
                    let lhs = Word::fs(&idx).eval(rep.as_ref(), &base);
                    rep_out.record(format!("vanishing u^({i},{j})_({r},{s})"), &lhs, &FockVector::new());
                }
            }
        }
    }
    Ok(rep_out)
}

/// Checks that `u_{r,s}` is killed by every raising operator of the finite
/// part and has the expected weight.
pub fn check_u_highest(m: usize, choice: Choice, l1: u32, l2: u32, r: u32, s: u32, js: JSign) -> Result<bool, Error> {
    let u = u_rs(m, choice, l1, l2, r, s, js)?;
    let eps = Epsilon::alternating_prime(m);
    let map = Some(lower_map(m, choice)?);
    let rep: Arc<dyn Rep<Scalar>> = tensor_at(&eps, FactorKind::W2, [&Param::one(), &Param::one()], &map)?;
    let killed = (1..=m + 1).all(|i| rep.apply(&Gen::E(i), &u).is_zero());
    let kept = map.as_ref().map(|mm| mm.kept.clone()).unwrap_or_default();
    let nu = component_d(l1, l2, r, s);
    let w = hw_weight(eps.n(), &index_order(&eps, Some(&kept)), &nu, 2, 2);
    let weight_ok = u.labels().all(|l| Some(label_weight(eps.n(), l)) == w);
    Ok(killed && weight_ok && !u.is_zero())
}

/// Result of expanding `F_{m+1} u_{r,s}`.
#[derive(Clone, Debug)]
pub struct LoweringCoefficients {
    /// `e_{m+1}^2 F_{m+1} u_{r,s}` equals `[l2+r+1][2](x2 q^{-l2-2r} - x1 q^{l1+2}) u_{r-1,s}`.
    pub identity_ok: bool,
    /// `lambda` with `e_{m+1} f_{m+1} u_{r,s} = [lambda] u_{r,s}`.
    pub pairing: Option<i64>,
    pub c00: SPoly,
    pub c10: SPoly,
    pub c20: Option<SPoly>,
    /// The coefficient formulas read literally, with the `x`-free leading
    /// terms of `C_{1,0}` and denominators `[L+2]`, `[L][L+1]`.
    pub displayed_c10: SPoly,
    pub displayed_c20: Option<SPoly>,
    /// The same formulas with `x1`, `x2` attached and the denominators taken
    /// from the measured pairing `-(L+4)`.
    pub closed_c10: SPoly,
    pub closed_c20: Option<SPoly>,
}

impl LoweringCoefficients {
    pub fn closed_ok(&self) -> bool {
        self.identity_ok && !self.c00.is_zero() && self.c10 == self.closed_c10 && self.c20 == self.closed_c20
    }

    pub fn displayed_ok(&self) -> bool {
        self.c10 == self.displayed_c10 && self.c20 == self.displayed_c20
    }
}

/// `C_{2,0}` with denominator `[L+d][L+d+1]`, `L = l1 + l2 + 2r`.
fn c20_form(l1: i64, l2: i64, r: i64, d: i64) -> Option<SPoly> {
    let bracket = SPoly::monomial(Scalar::q_pow((-l2 - 2 * r) as i32), 0, 1)
        .sub(&SPoly::monomial(Scalar::q_pow((l1 + 2) as i32), 1, 0));
    let big = l1 + l2 + 2 * r;
    (r > 0).then(|| {
        let k = qint(l2 + r + 1).mul(&qint(2)).div(&qint(big + d).mul(&qint(big + d + 1))).expect("nonzero");
        bracket.scale(&k)
    })
}

/// `C_{1,0}`; `d` shifts both denominators, `with_x` attaches `x1`, `x2` to
/// the leading terms.
fn c10_form(l1: i64, l2: i64, r: i64, d: i64, with_x: bool) -> SPoly {
    let big = l1 + l2 + 2 * r;
    let a = qint(l1 + 2);
    let b = qint(r + 1).mul(&qint(l2 + r + 2)).sub(&Scalar::q_pow(2).mul(&qint(r)).mul(&qint(l2 + r + 1)));
    let lead = if with_x {
        SPoly::monomial(a, 1, 0).add(&SPoly::monomial(b, 0, 1))
    } else {
        SPoly::from_scalar(a.add(&b))
    };
    let tail = if r > 0 {
        SPoly::monomial(Scalar::q_pow((-big - 2) as i32), 0, 1)
            .sub(&SPoly::monomial(Scalar::one(), 1, 0))
            .scale(&qint(2).mul(&qint(l2 + r + 1)).mul(&qint(r)).div(&qint(big + d - 2)).expect("nonzero"))
    } else {
        SPoly::zero()
    };
    lead.sub(&tail).scale(&qint(big + d).inv().expect("nonzero"))
}

/// `lambda` with `e_i f_i v = [lambda] v`, searched in `-bound..=bound`.
pub fn pairing_of(rep: &dyn Rep<Scalar>, i: usize, v: &FockVector<Scalar>, bound: i64) -> Option<i64> {
    let ef = Word::Prod(vec![Word::es(&[i]), Word::fs(&[i])]).eval(rep, v);
    if ef.is_zero() {
        return Some(0);
    }
    let k = crate::rmatrix::proportionality(&ef, v)?;
    (-bound..=bound).find(|&n| k == qint(n))
}

/// Expands `F_{m+1} u_{r,s}` over `{u_{r+1,s}, f_{m+1} u_{r,s}, f_{m+1}^{(2)} u_{r-1,s}}`.
pub fn verify_lowering_coefficients(m: usize, choice: Choice, l1: u32, l2: u32, r: u32, s: u32) -> Result<LoweringCoefficients, Error> {
    let rep = symbolic_pair(m, choice)?;
    let js = JSign::Minus;
    let u = |rr: u32| -> Result<FockVector<Scalar>, Error> { u_rs(m, choice, l1, l2, rr, s, js) };
    let f1 = Word::fs(&[m + 1]);
    let f2 = Word::DivPow(Gen::F(m + 1), 2);
    let fu = bold_word(Bold::Fm1, m)?.eval(rep.as_ref(), &lift(&u(r)?));
    let (a1, a2, rr) = (l1 as i64, l2 as i64, r as i64);
    let mut basis = vec![lift(&u(r + 1)?), f1.eval(rep.as_ref(), &lift(&u(r)?))];
    if r > 0 {
        basis.push(f2.eval(rep.as_ref(), &lift(&u(r - 1)?)));
    }
    // Basis vectors have scalar coefficients (the lowering operators carry no x).
    let sb: Vec<FockVector<Scalar>> = basis.iter().map(|v| v.map_coeffs(|c| c.coeff(0, 0))).collect();
    let coords = Coordinates::new(sb)?;
    let y = coords.of(&fu)?;
    let identity_ok = if r > 0 {
        let bracket = SPoly::monomial(Scalar::q_pow((-a2 - 2 * rr) as i32), 0, 1)
            .sub(&SPoly::monomial(Scalar::q_pow((a1 + 2) as i32), 1, 0));
        let e2 = Word::es(&[m + 1, m + 1]);
        let lhs = e2.eval(rep.as_ref(), &fu);
        let rhs = lift(&u(r - 1)?).scaled(&bracket.scale(&qint(a2 + rr + 1).mul(&qint(2))));
        lhs == rhs
    } else {
        true
    };
    let plain = {
        let fr = factor_rep(m, choice)?;
        crate::fock::Tensor::new(vec![fr.clone(), fr])?
    };
    Ok(LoweringCoefficients {
        identity_ok,
        pairing: pairing_of(&plain, m + 1, &u(r)?, 64),
        c00: y[0].clone(),
        c10: y[1].clone(),
        c20: y.get(2).cloned(),
        displayed_c10: c10_form(a1, a2, rr, 2, false),
        displayed_c20: c20_form(a1, a2, rr, 0),
        closed_c10: c10_form(a1, a2, rr, 4, true),
        closed_c20: c20_form(a1, a2, rr, 2),
    })
}

/// Weight-block census of a truncation of `W_l`.
#[derive(Clone, Debug)]
pub struct TruncationReport {
    pub l: u32,
    pub full_dims: BTreeMap<Weight, usize>,
    pub truncated_dims: BTreeMap<Weight, usize>,
    pub equal: bool,
    pub total: usize,
}

/// Compares the truncation of `W_l` at the full level with the module built
/// directly at the lower level, block by block.
pub fn check_lower_truncation(m: usize, choice: Choice, l: u32, cutoff: u32) -> Result<TruncationReport, Error> {
    let eps = Epsilon::alternating_prime(m);
    let full = build_fundamental(&eps, Level::Full, l, l, cutoff)?;
    let low = build_fundamental(&eps, Level::Truncated(Side::Lower, choice), l, l, cutoff)?;
    let kept = lower_map(m, choice)?.kept;
    let mut full_dims = BTreeMap::new();
    let mut equal = true;
    for (w, vs) in &full.space.blocks {
        if !w.supported_on(&kept) {
            continue;
        }
        full_dims.insert(w.clone(), vs.len());
        let other = low.space.blocks.get(w).cloned().unwrap_or_default();
        let mut e = Echelon::new();
        for x in &other {
            e.insert(x);
        }
        equal &= other.len() == vs.len() && vs.iter().all(|x| e.contains(x));
    }
    let truncated_dims = low.block_dims();
    equal &= truncated_dims.keys().all(|w| full_dims.contains_key(w));
    let total = full_dims.values().sum();
    Ok(TruncationReport { l, full_dims, truncated_dims, equal, total })
}

/// Total dimension of the upper truncation of `W_l` (all of its weights have
/// degree at most `2m` there).
pub fn upper_truncation_dim(m: usize, l: u32) -> Result<usize, Error> {
    let eps = Epsilon::alternating_prime(m);
    let kept: Vec<usize> = (1..=m).map(|j| 2 * j).collect();
    let cutoff = (l + 2).max(2 * m as u32 + 2);
    let full = build_fundamental(&eps, Level::Full, l, l, cutoff)?;
    Ok(full.space.blocks.iter().filter(|(w, _)| w.supported_on(&kept)).map(|(_, v)| v.len()).sum())
}

/// Dimension of the fundamental representation `V(varpi_k)` of type `C_m`
/// (`k = 0` is the trivial one): `C(2m, k) - C(2m, k - 2)`.
pub fn dim_fundamental_c(m: usize, k: usize) -> usize {
    let binom = |n: usize, r: usize| -> usize {
        if r > n {
            return 0;
        }
        (0..r).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
    };
    binom(2 * m, k) - if k >= 2 { binom(2 * m, k - 2) } else { 0 }
}

/// `W_{l1}(z) (x) W_{l2}(1) -> W_{l2}(1) (x) W_{l1}(z)` at the full or lower level.
pub fn pair_d(m: usize, level: Level, l1: u32, l2: u32, cutoff: u32) -> Result<(Pair, Vec<(Partition, Weight)>), Error> {
    let eps = Epsilon::alternating_prime(m);
    let map = level.map(&eps)?;
    let (ring, kept) = level_data(&eps, &map);
    let one = Param::one();
    let z = Param::Var(0);
    let fund = |l: u32| -> Result<VecSpace, Error> {
        Ok(build_fundamental(&eps, level, l, l, cutoff)?.space)
    };
    let space = |a: u32, b: u32| -> Result<Box<dyn Space>, Error> {
        Ok(Box::new(ProductSpace { a: Box::new(fund(a)?), b: Box::new(fund(b)?), cutoff: cutoff as i32 }))
    };
    let pair = Pair {
        src: tensor_at(&eps, FactorKind::W2, [&one, &one], &map)?,
        src_z: tensor_at(&eps, FactorKind::W2, [&z, &one], &map)?,
        tgt: tensor_at(&eps, FactorKind::W2, [&one, &one], &map)?,
        tgt_z: tensor_at(&eps, FactorKind::W2, [&one, &z], &map)?,
        src_space: space(l1, l2)?,
        tgt_space: space(l2, l1)?,
        ring,
        cutoff: cutoff as i32,
    };
    let idx = index_order(&eps, kept.as_deref());
    let mut cands = Vec::new();
    for r in 0..=cutoff {
        for s in 0..=l1.min(l2) {
            let nu = component_d(l1, l2, r, s);
            if nu.size() as i32 > cutoff as i32 {
                continue;
            }
            if let Some(w) = hw_weight(eps.n(), &idx, &nu, 2, 2) {
                cands.push((nu, w));
            }
        }
    }
    Ok((pair, cands))
}

/// Highest weight multiplicities of `W^{(x)2}` on the alternating-prime
/// flavor for every partition in its labelling set with `|nu| <= cutoff`.
pub fn decompose_w2(m: usize, level: Level, cutoff: u32) -> Result<Vec<Multiplicity>, Error> {
    let eps = Epsilon::alternating_prime(m);
    let map = level.map(&eps)?;
    let (ring, kept) = level_data(&eps, &map);
    let spec = ModuleSpec::w2(eps.clone(), Param::one(), cutoff)?;
    let rep = crate::rmatrix::wrap(spec.rep::<Scalar>()?, &map)?;
    let space = LabelSpace::new(&spec, kept.as_deref());
    let idx = index_order(&eps, kept.as_deref());
    let cands: Vec<(Partition, Weight)> = Partition::all_up_to(cutoff, eps.n())
        .into_iter()
        .filter_map(|nu| hw_weight(eps.n(), &idx, &nu, 2, 1).map(|w| (nu, w)))
        .collect();
    Ok(decompose(rep.as_ref(), &ring, &space, &cands))
}

/// Solves the type D problem, normalizing each component so that `u_{r,s}`
/// maps to the corresponding vector with `l1`, `l2` exchanged.
pub fn solve_d(m: usize, level: Level, choice: Choice, l1: u32, l2: u32, cutoff: u32) -> Result<RMatrix, Error> {
    let (pair, cands) = pair_d(m, level, l1, l2, cutoff)?;
    let mut refs = Vec::new();
    for (nu, _) in &cands {
        let (r, s) = rs_of(l1, l2, nu);
        let u = u_rs(m, choice, l1, l2, r, s, JSign::Minus)?;
        let ut = u_rs(m, choice, l2, l1, r, s, JSign::Minus)?;
        refs.push((nu.clone(), u, ut));
    }
    let lambda0 = component_d(l1, l2, 0, l1.min(l2));
    RMatrix::solve(pair, &cands, &lambda0, Normalization::Reference(refs))
}

/// `(r, s)` with `nu = (l1 + l2 + r - s, r + s)`.
pub fn rs_of(l1: u32, l2: u32, nu: &Partition) -> (u32, u32) {
    let (a, b) = (nu.part(0) as i64, nu.part(1) as i64);
    let l = (l1 + l2) as i64;
    let r = (a + b - l) / 2;
    ((r) as u32, (b - r) as u32)
}

/// Highest weight vectors of `W_{l1} (x) W_{l2}` found by kernel computation
/// at the weight of each `u_{r,s}`, compared with `u_{r,s}` up to scale.
pub fn hw_matches_u(m: usize, choice: Choice, l1: u32, l2: u32, rmax: u32, cutoff: u32) -> Result<bool, Error> {
    let (pair, cands) = pair_d(m, Level::Truncated(Side::Lower, choice), l1, l2, cutoff)?;
    for (nu, w) in &cands {
        let (r, s) = rs_of(l1, l2, nu);
        if r > rmax {
            continue;
        }
        let hw = hw_vectors(pair.src.as_ref(), &pair.ring, &pair.src_space.block(w));
        let u = u_rs(m, choice, l1, l2, r, s, JSign::Minus)?;
        if hw.len() != 1 || crate::rmatrix::proportionality(&hw[0], &u).is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bold_words_have_length_2m_minus_1() {
        for m in 2..5 {
            for b in [Bold::Em, Bold::Em1, Bold::Fm, Bold::Fm1] {
                assert_eq!(bold_indices(b, m).unwrap().1.len(), 2 * m - 1);
            }
        }
        assert_eq!(bold_text(Bold::Fm, 3).unwrap(), "e2 e1 e4 e2 e0");
        assert_eq!(bold_text(Bold::Em1, 3).unwrap(), "f0 f2 f3 f1 f2");
    }

    #[test]
    fn e0_on_v_lk() {
        let eps = Epsilon::alternating_prime(2);
        let n = eps.n();
        let rep: W2Rep<Scalar> = W2Rep::new(eps, &Param::one()).unwrap();
        for l in 0..4 {
            for k in 0..=l {
                let v = FockVector::basis(v_lk(n, l, k));
                let e0v = rep.apply(&Gen::E(0), &v);
                assert_eq!(e0v, e0_expansion(n, l, k), "l={l} k={k}");
                assert_eq!(e0_lowering_word(n, l).eval(&rep, &v), e0v, "l={l} k={k}");
            }
        }
    }

    #[test]
    fn fundamentals_are_stable() {
        let eps = Epsilon::alternating_prime(2);
        let f = build_fundamental(&eps, Level::Full, 0, 0, 4).unwrap();
        assert_eq!(f.space.blocks[&Weight::lambda(5).scaled(2)].len(), 1);
        let f = build_fundamental(&eps, Level::Full, 2, 1, 6).unwrap();
        assert!(f.closure_checks > 0);
    }

    #[test]
    fn u_rs_highest() {
        for choice in [Choice::Plus, Choice::Minus] {
            for (l1, l2) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
                for r in 0..3 {
                    for s in 0..=l1.min(l2) {
                        assert!(check_u_highest(2, choice, l1, l2, r, s, JSign::Minus).unwrap(), "{choice:?} {l1} {l2} {r} {s}");
                    }
                }
            }
        }
    }

    #[test]
    fn fundamental_c_dims() {
        assert_eq!(dim_fundamental_c(2, 1), 4);
        assert_eq!(dim_fundamental_c(2, 2), 5);
        assert_eq!(dim_fundamental_c(3, 3), 14);
    }
}

#[cfg(test)]
mod checks {
    use super::*;
    use crate::rmatrix::closed_rho_d;

    #[test]
    fn ef_identities() {
        for choice in [Choice::Plus, Choice::Minus] {
            for (l1, l2) in [(1, 1), (1, 2)] {
                let r = verify_ef_identities(2, choice, l1, l2, 1, 1).unwrap();
                assert!(r.checked > 0);
                assert!(r.failures.is_empty(), "{choice:?} ({l1},{l2}) {:?}", r.failures);
            }
        }
    }

    #[test]
    fn lowering_identity_and_corrected_forms() {
        for choice in [Choice::Plus, Choice::Minus] {
            for (l1, l2, r, s) in [(1, 1, 1, 0), (1, 2, 0, 1)] {
                let a = verify_lowering_coefficients(2, choice, l1, l2, r, s).unwrap();
                assert!(a.identity_ok, "{choice:?} {l1}{l2}{r}{s}");
                assert!(a.closed_ok(), "{choice:?} {l1}{l2}{r}{s}");
                assert_eq!(a.pairing, Some(-((l1 + l2 + 2 * r) as i64) - 4));
            }
        }
    }

    #[test]
    fn truncations() {
        for l in 0..3 {
            let t = check_lower_truncation(2, Choice::Plus, l, l + 4).unwrap();
            assert!(t.equal && t.total > 0, "l={l}");
        }
        let dims: Vec<usize> = (0..4).map(|l| upper_truncation_dim(2, l).unwrap()).collect();
        assert_eq!(dims, [5, 4, 1, 0]);
    }

    #[test]
    fn w2_multiplicities() {
        for mu in decompose_w2(2, Level::Full, 6).unwrap() {
            let want = if mu.nu.len() <= 1 { mu.nu.part(0) as usize + 1 } else { 0 };
            assert_eq!(mu.mult, want, "{}", mu.nu);
        }
    }

    #[test]
    fn solve_d_lower_matches_closed() {
        let level = Level::Truncated(Side::Lower, Choice::Plus);
        for (l1, l2, cutoff) in [(1, 1, 5), (1, 2, 6)] {
            let r = solve_d(2, level, Choice::Plus, l1, l2, cutoff).unwrap();
            assert!(!r.components.is_empty());
            for (c, rho) in r.components.iter().zip(&r.rho) {
                let (a, b) = rs_of(l1, l2, &c.nu);
                assert_eq!(rho, &closed_rho_d(l1, l2, a, b).unwrap(), "({l1},{l2}) {}", c.nu);
            }
            assert!(hw_matches_u(2, Choice::Plus, l1, l2, 2, cutoff).unwrap());
        }
    }
}
