//! The acceptance battery, one function per criterion.

use std::collections::BTreeMap;

use qosc_core::decomp::Partition;
use qosc_core::fusion::{FusionParams, Labels};
use qosc_core::phi::{Choice, Side};
use qosc_core::rmatrix::{Level, Sign};
use qosc_core::{Epsilon, RatFn, Scalar};
use serde::Serialize;

use crate::checks::{self, ModuleKind};
use crate::report::Check;

/// Window sizes for the battery.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    /// The sizes named by the acceptance criteria.
    Full,
    /// Small windows for smoke runs.
    Quick,
}

impl Scale {
    fn pick(self, full: u32, quick: u32) -> u32 {
        match self {
            Scale::Full => full,
            Scale::Quick => quick,
        }
    }
}

/// Checks whose failure is a documented conflict in the source formulas
/// rather than a defect: the coefficient forms of `F_{m+1} u_{r,s}` read
/// literally contain `x`-free terms, which the operator cannot produce.
pub const KNOWN_CONFLICTS: &[&str] = &["displayed forms"];

pub fn is_known_conflict(c: &Check) -> bool {
    KNOWN_CONFLICTS.iter().any(|k| c.name.contains(k))
}

#[derive(Clone, Debug, Serialize)]
pub struct Criterion {
    pub id: u32,
    pub title: &'static str,
    pub pass: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Criterion {
    fn new(id: u32, title: &'static str, checks: Vec<Check>, notes: Vec<String>) -> Self {
        let pass = !checks.is_empty() && checks.iter().all(|c| c.pass);
        Criterion { id, title, pass, checks, notes }
    }

    /// Passes apart from documented conflicts.
    pub fn pass_modulo_conflicts(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass || is_known_conflict(c))
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn line(&self) -> String {
        let failed = self.failures().count();
        format!(
            "criterion {}: {} - {} ({} checks, {} failed)",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.title,
            self.checks.len(),
            failed
        )
    }
}

fn generic_x() -> Scalar {
    Scalar::w_pow(3)
}

/// Defining relations on `W(x)` for `n = 5, 7` and on `W^{(x)2}(x)`.
pub fn criterion1(scale: Scale) -> Criterion {
    let mut out = Vec::new();
    let cw = scale.pick(8, 3);
    let cw2 = scale.pick(6, 3);
    for (eps, kind, cutoff) in [
        (Epsilon::alternating(2), ModuleKind::W, cw),
        (Epsilon::alternating(3), ModuleKind::W, cw),
        (Epsilon::alternating_prime(2), ModuleKind::W2, cw2),
    ] {
        match checks::relations(&eps, kind, &generic_x(), cutoff, false) {
            Ok((c, s)) => {
                let tag = format!("{kind:?} eps={eps} cutoff {cutoff}");
                out.push(Check::with_detail(
                    format!("{tag}: all relations"),
                    s.failed_relations == 0 && s.relations > 0,
                    format!("{} relations on {} labels", s.relations, s.labels),
                ));
                out.extend(c.into_iter().filter(|c| !c.pass));
            }
            Err(e) => out.push(Check::with_detail(format!("{kind:?} eps={eps}"), false, e.to_string())),
        }
    }
    Criterion::new(1, "defining relations vanish on W and W2 windows", out, Vec::new())
}

/// Target relations for the truncation maps, both sides, both choices.
pub fn criterion2(scale: Scale) -> Criterion {
    let mut out = Vec::new();
    let cw = scale.pick(8, 3);
    let cw2 = scale.pick(6, 2);
    let mut node0 = 0;
    for (eps, kind, cutoff) in [(Epsilon::alternating(2), ModuleKind::W, cw), (Epsilon::alternating_prime(2), ModuleKind::W2, cw2)] {
        for side in [Side::Lower, Side::Upper] {
            for choice in [Choice::Plus, Choice::Minus] {
                match checks::phi_relations(&eps, kind, side, choice, &generic_x(), cutoff) {
                    Ok((c, s)) => {
                        node0 += c.iter().filter(|c| checks::is_node0_serre(&c.name) && c.pass).count();
                        out.push(Check::with_detail(
                            format!("eps={eps} {side:?}/{}: target relations", checks::choice_name(choice)),
                            s.failed_relations == 0 && s.relations > 0,
                            format!("{} relations on {} labels", s.relations, s.labels),
                        ));
                        out.extend(c.into_iter().filter(|c| !c.pass));
                    }
                    Err(e) => out.push(Check::with_detail(format!("eps={eps} {side:?}"), false, e.to_string())),
                }
            }
        }
    }
    out.push(Check::with_detail("node-0 quantum Serre identities checked", node0 > 0, format!("{node0} passing")));
    let notes = vec![format!("windows: W cutoff {cw}, W2 cutoff {cw2}")];
    Criterion::new(2, "truncation maps are homomorphisms", out, notes)
}

/// Truncation functor checks and the dimensions of truncated fundamentals.
pub fn criterion3(scale: Scale) -> Criterion {
    let mut out = Vec::new();
    let c1 = scale.pick(7, 3);
    let c2 = scale.pick(5, 2);
    for side in [Side::Lower, Side::Upper] {
        for choice in [Choice::Plus, Choice::Minus] {
            out.extend(checks::truncation(&Epsilon::alternating(2), side, choice, 1, c1));
            out.extend(checks::truncation(&Epsilon::alternating(2), side, choice, 2, c2));
            out.extend(checks::truncation(&Epsilon::alternating_prime(2), side, choice, 1, c2));
        }
    }
    out.extend(checks::truncation(&Epsilon::alternating_prime(2), Side::Lower, Choice::Plus, 2, scale.pick(4, 2)));
    let (c, _) = checks::fundamental_truncation_dims(2);
    out.extend(c);
    Criterion::new(3, "truncation is equivariant, idempotent, monoidal; truncated fundamentals", out, Vec::new())
}

const SIGMAS: [(Sign, Sign); 4] = [(Sign::Plus, Sign::Plus), (Sign::Minus, Sign::Minus), (Sign::Plus, Sign::Minus), (Sign::Minus, Sign::Plus)];

fn levels() -> [Level; 3] {
    [Level::Full, Level::Truncated(Side::Lower, Choice::Plus), Level::Truncated(Side::Upper, Choice::Plus)]
}

/// Highest weight multiplicities of the two-factor products.
pub fn criterion4(scale: Scale) -> Criterion {
    let mut out = Vec::new();
    let cutoff = scale.pick(8, 5);
    for level in levels() {
        for (s1, s2) in SIGMAS {
            out.extend(checks::decomposition_c(2, level, s1, s2, cutoff).0);
        }
    }
    out.extend(checks::decomposition_w2(2, scale.pick(6, 4)).0);
    Criterion::new(4, "decomposition multiplicities", out, Vec::new())
}

/// Type C spectral coefficients on every level, equal across levels.
pub fn criterion5(scale: Scale) -> Criterion {
    let mut out = Vec::new();
    let cutoff = scale.pick(6, 4);
    for (s1, s2) in SIGMAS {
        let mut seen: BTreeMap<Partition, (String, RatFn)> = BTreeMap::new();
        let mut consistent = true;
        for level in levels() {
            let deg = (level == Level::Full && scale == Scale::Full).then_some(3);
            let (c, r) = checks::rmatrix_c(2, level, s1, s2, cutoff, deg);
            out.extend(c);
            if let Some((r, _)) = r {
                for (comp, rho) in r.components.iter().zip(&r.rho) {
                    if let Some((_, prev)) = seen.get(&comp.nu) {
                        consistent &= prev == rho;
                    } else {
                        seen.insert(comp.nu.clone(), (checks::level_name(level), rho.clone()));
                    }
                }
            }
        }
        let comps: Vec<String> = seen.keys().map(|p| p.to_string()).collect();
        out.push(Check::with_detail(format!("R {} equal across levels", checks::sigma_name(s1, s2)), consistent, comps.join(" ")));
        if s1 == s2 {
            let want: Vec<u32> = (0..=cutoff / 2).map(|k| 2 * k).collect();
            let have = want.iter().filter(|&&p| seen.keys().any(|nu| nu.len() <= 1 && nu.part(0) == p && (p > 0 || s1 == Sign::Plus))).count();
            let expect = want.len() - usize::from(s1 == Sign::Minus);
            out.push(Check::with_detail(format!("R {} covers (2k) for 2k <= {cutoff}", checks::sigma_name(s1, s2)), have == expect, format!("{have} of {expect}")));
        }
    }
    Criterion::new(5, "type C spectral decomposition", out, Vec::new())
}

/// Type D spectral coefficients.
pub fn criterion6(scale: Scale) -> Criterion {
    let mut out = Vec::new();
    let lower = Level::Truncated(Side::Lower, Choice::Plus);
    // (l1, l2, cutoff, intertwining degrees above the lowest block)
    let cases: Vec<(u32, u32, u32, i32)> = match scale {
        Scale::Full => vec![(1, 1, 5, 2), (1, 2, 6, 1), (2, 2, 7, 0)],
        Scale::Quick => vec![(1, 1, 4, 1), (1, 2, 4, 0)],
    };
    for (l1, l2, cutoff, deg) in cases {
        out.extend(checks::rmatrix_d(2, lower, Choice::Plus, l1, l2, cutoff, Some(deg)).0);
    }
    let deg = scale.pick(1, 0) as i32;
    out.extend(checks::rmatrix_d(2, Level::Full, Choice::Plus, 1, 1, scale.pick(5, 4), Some(deg)).0);
    let notes = vec!["full-level type D solves are limited to W1 W1 by runtime".to_string()];
    Criterion::new(6, "type D spectral decomposition", out, notes)
}

/// Highest weight vectors `u_{r,s}` and the raising/lowering identities.
pub fn criterion7(scale: Scale) -> Criterion {
    let mut out = Vec::new();
    let rmax = scale.pick(2, 1);
    for choice in [Choice::Plus, Choice::Minus] {
        for (l1, l2) in [(1, 1), (2, 1), (2, 3)] {
            out.extend(checks::u_highest(2, choice, l1, l2, rmax, 2));
        }
        for (l1, l2) in [(1, 1), (1, 2)] {
            out.push(checks::ef_identities(2, choice, l1, l2, rmax, 1));
        }
        for (l1, l2, r, s) in [(1, 1, 1, 0), (1, 2, 0, 1), (2, 2, 1, 1), (1, 1, 2, 1)] {
            if scale == Scale::Quick && r > 1 {
                continue;
            }
            out.extend(checks::lowering_coefficients(2, choice, l1, l2, r, s));
        }
    }
    let notes = vec![
        "the coefficient forms read literally fail: C10 has x-free leading terms and the denominators use e f u = -[L+2] u; \
         the operator gives -[L+4]. The corrected forms and the second-order identity hold exactly."
            .to_string(),
    ];
    Criterion::new(7, "highest weight vectors and lowering identities", out, notes)
}

/// Fusion images, their truncations, cyclicity and admissibility.
pub fn criterion8(scale: Scale) -> Criterion {
    let mut out = Vec::new();
    let cutoff = scale.pick(4, 3);
    let trunc = [Level::Truncated(Side::Lower, Choice::Plus), Level::Truncated(Side::Upper, Choice::Plus)];
    for l in [1u32, 2] {
        let want: Vec<Partition> = (0..=l / 2).map(|i| Partition::new(vec![l - 2 * i]).expect("partition")).collect();
        out.extend(checks::fusion(2, &FusionParams::fundamental(l), cutoff, Some(&want), &trunc).0);
    }
    if scale == Scale::Full {
        let p = FusionParams::new(Labels::D(vec![1, 1]), vec![Scalar::q_pow(-6), Scalar::one()]).expect("valid");
        let want = [Partition::new(vec![2]).expect("partition"), Partition::new(vec![1, 1]).expect("partition")];
        out.extend(checks::fusion(2, &p, 5, Some(&want), &[Level::Truncated(Side::Lower, Choice::Plus)]).0);
    }
    let bad = FusionParams::new(Labels::C(vec![Sign::Plus, Sign::Plus]), vec![Scalar::q_pow(2), Scalar::one()]).expect("valid");
    out.push(checks::rejected(&bad));
    let notes = vec!["odd l uses sigma = (+,-): with (+,+) the ratio q^{-2l-2} is not a zero of any coefficient and R is invertible".to_string()];
    Criterion::new(8, "fusion", out, notes)
}

/// Negative controls.
pub fn criterion9(scale: Scale) -> Criterion {
    let mut out = Vec::new();
    let cutoff = scale.pick(4, 3);
    match checks::relations(&Epsilon::alternating(2), ModuleKind::W, &generic_x(), cutoff, true) {
        Ok((c, s)) => {
            let first = c.iter().find(|c| !c.pass);
            out.push(Check::with_detail(
                "perturbed e0 breaks a relation",
                s.failed_relations > 0 && first.and_then(|c| c.detail.as_ref()).is_some_and(|d| d.contains("first at")),
                first.map(|c| format!("{}: {}", c.name, c.detail.clone().unwrap_or_default())).unwrap_or_else(|| "no failure".into()),
            ));
        }
        Err(e) => out.push(Check::with_detail("perturbed e0", false, e.to_string())),
    }
    for p in [
        FusionParams::new(Labels::C(vec![Sign::Plus, Sign::Plus]), vec![Scalar::q_pow(6), Scalar::one()]).expect("valid"),
        FusionParams::new(Labels::C(vec![Sign::Plus, Sign::Minus]), vec![Scalar::q_pow(4), Scalar::one()]).expect("valid"),
        FusionParams::new(Labels::D(vec![1, 2]), vec![Scalar::q_pow(3), Scalar::one()]).expect("valid"),
    ] {
        out.push(checks::rejected(&p));
    }
    Criterion::new(9, "negative controls", out, Vec::new())
}

pub fn criterion(id: u32, scale: Scale) -> Option<Criterion> {
    Some(match id {
        1 => criterion1(scale),
        2 => criterion2(scale),
        3 => criterion3(scale),
        4 => criterion4(scale),
        5 => criterion5(scale),
        6 => criterion6(scale),
        7 => criterion7(scale),
        8 => criterion8(scale),
        9 => criterion9(scale),
        _ => return None,
    })
}
