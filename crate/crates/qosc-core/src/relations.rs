//! Defining relations of `U(eps)` and their check on a module.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::coeff::Coeff;
use crate::fock::{FockVector, Gen, Label, Rep};
use crate::lattice::{Epsilon, Weight};
use crate::scalar::Scalar;
use crate::word::Word;

/// A relation `lhs = rhs`.
#[derive(Clone, Debug)]
pub struct Relation {
    pub name: String,
    pub lhs: Word,
    pub rhs: Word,
}

impl Relation {
    fn zero(name: String, lhs: Word) -> Self {
        Relation { name, lhs, rhs: Word::Lin(Vec::new()) }
    }

    /// The relation with `e` and `f` exchanged.
    pub fn mirror(&self) -> Self {
        Relation { name: mirror_name(&self.name), lhs: self.lhs.mirror(), rhs: self.rhs.mirror() }
    }
}

fn mirror_name(s: &str) -> String {
    s.chars().map(|c| if c == 'e' { 'f' } else { c }).collect()
}

/// Outcome of checking one relation on a set of basis vectors.
#[derive(Clone, Debug)]
pub struct RelationReport {
    pub name: String,
    pub checked: usize,
    pub failures: usize,
    pub first_failure: Option<Label>,
}

impl RelationReport {
    pub fn ok(&self) -> bool {
        self.failures == 0
    }
}

fn two() -> Scalar {
    Scalar::qint(2)
}

fn sgn(eps: &Epsilon, i: usize) -> Scalar {
    Scalar::from_i64(eps.sign(i))
}

/// `x_i^2 x_j - s [2] x_i x_j x_i + x_j x_i^2`.
fn quad(i: usize, j: usize, s: Scalar) -> Word {
    Word::lin(vec![
        (Scalar::one(), Word::es(&[i, i, j])),
        (s.mul(&two()).neg(), Word::es(&[i, j, i])),
        (Scalar::one(), Word::es(&[j, i, i])),
    ])
}

fn sum(terms: &[(Scalar, &[usize])]) -> Word {
    Word::lin(terms.iter().map(|(s, w)| (s.clone(), Word::es(w))).collect())
}

/// The `e`-side relations other than Cartan and `[e, f]`; each is `= 0`.
pub fn upper_relations(eps: &Epsilon) -> Vec<Relation> {
    let n = eps.n();
    let b = |i| eps.bit(i);
    let one = Scalar::one;
    let m1 = || Scalar::from_i64(-1);
    let mut out = Vec::new();
    for i in 0..=n {
        if eps.is_odd(i) {
            out.push(Relation::zero(format!("e{i}^2"), Word::es(&[i, i])));
        }
    }
    for i in 0..=n {
        for j in (i + 1)..=n {
            let p = eps.bilinear(&eps.root(i), &eps.root(j));
            if *p.numer() == 0 {
                out.push(Relation::zero(
                    format!("e{i}e{j} - e{j}e{i}"),
                    Word::lin(vec![(one(), Word::es(&[i, j])), (m1(), Word::es(&[j, i]))]),
                ));
            }
        }
    }
    if b(1) == b(2) {
        out.push(Relation::zero("serre e0^2e2".into(), quad(0, 2, sgn(eps, 1))));
    }
    if b(2) == b(3) {
        out.push(Relation::zero("serre e2^2e0".into(), quad(2, 0, sgn(eps, 2))));
    }
    for i in 1..n {
        if b(i) != b(i + 1) {
            continue;
        }
        for j in [i.wrapping_sub(1), i + 1] {
            if (1..n).contains(&j) {
                out.push(Relation::zero(format!("serre e{i}^2e{j}"), quad(i, j, sgn(eps, i))));
            }
        }
    }
    if b(n - 2) == b(n - 1) {
        out.push(Relation::zero(format!("serre e{}^2e{n}", n - 2), quad(n - 2, n, sgn(eps, n - 2))));
    }
    if b(n - 1) == b(n) {
        out.push(Relation::zero(format!("serre e{n}^2e{}", n - 2), quad(n, n - 2, sgn(eps, n - 1))));
    }
    let t2 = |i: usize| sgn(eps, i).mul(&two());
    if b(1) != b(2) {
        let s = t2(2);
        out.push(Relation::zero(
            "long e0e1e2".into(),
            sum(&[
                (one(), &[0, 1, 2]),
                (m1(), &[1, 0, 2]),
                (s.clone(), &[1, 2, 0]),
                (s.neg(), &[0, 2, 1]),
                (one(), &[2, 0, 1]),
                (m1(), &[2, 1, 0]),
            ]),
        ));
    }
    if b(2) != b(3) {
        out.push(Relation::zero(
            "long e0e2e3e2".into(),
            sum(&[
                (one(), &[0, 2, 3, 2]),
                (m1(), &[3, 2, 0, 2]),
                (t2(3), &[2, 3, 0, 2]),
                (m1(), &[2, 0, 2, 3]),
                (one(), &[2, 3, 2, 0]),
            ]),
        ));
    }
    for i in 2..=n - 2 {
        if b(i) == b(i + 1) {
            continue;
        }
        out.push(Relation::zero(
            format!("long e{i}e{}e{i}e{}", i - 1, i + 1),
            sum(&[
                (one(), &[i, i - 1, i, i + 1]),
                (m1(), &[i, i + 1, i, i - 1]),
                (t2(i), &[i, i - 1, i + 1, i]),
                (m1(), &[i - 1, i, i + 1, i]),
                (one(), &[i + 1, i, i - 1, i]),
            ]),
        ));
    }
    if b(n - 2) != b(n - 1) {
        let (a, c) = (n - 2, n - 3);
        out.push(Relation::zero(
            format!("long e{a}e{c}e{a}e{n}"),
            sum(&[
                (one(), &[a, c, a, n]),
                (m1(), &[a, n, a, c]),
                (t2(a), &[a, c, n, a]),
                (m1(), &[c, a, n, a]),
                (one(), &[n, a, c, a]),
            ]),
        ));
    }
    if b(n - 1) != b(n) {
        let (a, c) = (n - 2, n - 1);
        let s = t2(n - 1);
        out.push(Relation::zero(
            format!("long e{a}e{n}e{c}"),
            sum(&[
                (one(), &[a, n, c]),
                (m1(), &[a, c, n]),
                (s.clone(), &[c, a, n]),
                (s.neg(), &[n, a, c]),
                (one(), &[n, c, a]),
                (m1(), &[c, n, a]),
            ]),
        ));
    }
    out
}

/// Cartan relations for `k_mu` with `mu` in `{Lambda, delta_1, ..., delta_n}`.
pub fn cartan_relations(eps: &Epsilon) -> Vec<Relation> {
    let n = eps.n();
    let mut mus: Vec<(String, Weight)> = vec![("L".into(), eps.lambda())];
    for a in 1..=n {
        mus.push((format!("d{a}"), eps.delta(a)));
    }
    let mut out = Vec::new();
    for (nm, mu) in &mus {
        for i in 0..=n {
            let c = eps.qpair(mu, &eps.root(i));
            let k = |w: &Weight| Word::Atom(Gen::K(w.clone()));
            out.push(Relation {
                name: format!("k_{nm} e{i} k_-{nm}"),
                lhs: Word::prod(vec![k(mu), Word::e(i), k(&-mu.clone())]),
                rhs: Word::e(i).scaled(c.clone()),
            });
            out.push(Relation {
                name: format!("k_{nm} f{i} k_-{nm}"),
                lhs: Word::prod(vec![k(mu), Word::f(i), k(&-mu.clone())]),
                rhs: Word::f(i).scaled(c.inv().expect("monomial")),
            });
        }
    }
    out
}

/// `(q - q^{-1})(e_i f_j - f_j e_i) = delta_ij (k_i - k_i^{-1})`.
pub fn ef_relations(eps: &Epsilon) -> Vec<Relation> {
    let n = eps.n();
    let d = Scalar::q().sub(&Scalar::q_pow(-1));
    let mut out = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            let lhs = Word::lin(vec![
                (d.clone(), Word::prod(vec![Word::e(i), Word::f(j)])),
                (d.neg(), Word::prod(vec![Word::f(j), Word::e(i)])),
            ]);
            let rhs = if i == j {
                let a = eps.root(i);
                Word::lin(vec![
                    (Scalar::one(), Word::Atom(Gen::K(a.clone()))),
                    (Scalar::from_i64(-1), Word::Atom(Gen::K(-a))),
                ])
            } else {
                Word::Lin(Vec::new())
            };
            out.push(Relation { name: format!("[e{i},f{j}]"), lhs, rhs });
        }
    }
    out
}

/// Every defining relation, with the `f` mirrors of the upper ones.
pub fn all_relations(eps: &Epsilon) -> Vec<Relation> {
    let mut out = cartan_relations(eps);
    out.extend(ef_relations(eps));
    let up = upper_relations(eps);
    out.extend(up.iter().map(Relation::mirror));
    let mut r = up;
    r.extend(out);
    r
}

/// Checks `rel` on each basis vector.
pub fn check_relation<C: Coeff>(rep: &dyn Rep<C>, rel: &Relation, basis: &[Label]) -> RelationReport {
    let mut failures = 0;
    let mut first = None;
    for b in basis {
        let v = FockVector::basis(b.clone());
        let l = rel.lhs.eval(rep, &v);
        let r = rel.rhs.eval(rep, &v);
        if l != r {
            failures += 1;
            if first.is_none() {
                first = Some(b.clone());
            }
        }
    }
    RelationReport { name: rel.name.clone(), checked: basis.len(), failures, first_failure: first }
}

/// Checks each relation on each basis vector.
pub fn check_all<C: Coeff>(rep: &dyn Rep<C>, rels: &[Relation], basis: &[Label]) -> Vec<RelationReport> {
    rels.iter().map(|r| check_relation(rep, r, basis)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Param;
    use crate::fock::{ModuleSpec, WRep, W2Rep};

    #[test]
    fn w_satisfies_all_relations() {
        let eps = Epsilon::alternating(2);
        let spec = ModuleSpec::w(eps.clone(), Param::Value(Scalar::w_pow(3)), 4).unwrap();
        let rep: WRep<Scalar> = WRep::new(eps.clone(), &Param::Value(Scalar::w_pow(3))).unwrap();
        let basis = spec.basis(None);
        for r in check_all(&rep, &all_relations(&eps), &basis) {
            assert!(r.ok(), "{} failed at {:?}", r.name, r.first_failure);
        }
    }

    #[test]
    fn w2_satisfies_all_relations() {
        let eps = Epsilon::alternating_prime(2);
        let x = Param::Value(Scalar::from_i64(2));
        let spec = ModuleSpec::w2(eps.clone(), x.clone(), 3).unwrap();
        let rep: W2Rep<Scalar> = W2Rep::new(eps.clone(), &x).unwrap();
        let basis = spec.basis(None);
        for r in check_all(&rep, &all_relations(&eps), &basis) {
            assert!(r.ok(), "{} failed at {:?}", r.name, r.first_failure);
        }
    }

    #[test]
    fn flipped_e0_breaks_a_relation() {
        let eps = Epsilon::alternating(2);
        let spec = ModuleSpec::w(eps.clone(), Param::one(), 3).unwrap();
        let rep: WRep<Scalar> = WRep::new(eps.clone(), &Param::one()).unwrap().with_e0_sign_flip();
        let basis = spec.basis(None);
        assert!(check_all(&rep, &all_relations(&eps), &basis).iter().any(|r| !r.ok()));
    }
}

#[cfg(test)]
mod generic_eps {
    use super::*;
    use crate::coeff::Param;
    use crate::fock::ModuleSpec;

    fn run(bits: Vec<u8>, w2: bool, cutoff: u32) -> Vec<String> {
        let eps = Epsilon::new(bits).unwrap();
        let x = Param::Value(Scalar::from_i64(3));
        let spec = if w2 { ModuleSpec::w2(eps.clone(), x, cutoff) } else { ModuleSpec::w(eps.clone(), x, cutoff) }.unwrap();
        let rep = spec.rep::<Scalar>().unwrap();
        let basis = spec.basis(None);
        check_all(rep.as_ref(), &all_relations(&eps), &basis).into_iter().filter(|r| !r.ok()).map(|r| r.name).collect()
    }

    #[test]
    fn other_parities_satisfy_relations() {
        for (b, w2) in [
            (vec![1, 1, 0, 0, 1], false),
            (vec![1, 0, 0, 1, 1], false),
            (vec![1, 0, 0, 0, 1], false),
            (vec![1, 1, 1, 1, 1], false),
            (vec![1, 1, 0, 1, 1, 1], false),
            (vec![0, 1, 1, 0, 0], true),
            (vec![0, 0, 0, 0, 0], true),
            (vec![0, 0, 1, 1, 0], true),
            (vec![0, 1, 0, 1, 0, 0], true),
        ] {
            let f = run(b.clone(), w2, 3);
            assert!(f.is_empty(), "{b:?}: {f:?}");
        }
    }
}
