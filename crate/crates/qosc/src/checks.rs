//! Check batteries shared by the subcommands and the acceptance suite.

use std::collections::BTreeMap;
use std::sync::Arc;

use qosc_core::decomp::{Multiplicity, Partition};
use qosc_core::fock::{format_label, FactorKind, ModuleSpec, Rep, W2Rep, WRep};
use qosc_core::fundrep::{
    build_fundamental, check_lower_truncation, check_u_highest, decompose_w2, dim_fundamental_c, hw_matches_u,
    iso_between_k, rs_of, solve_d, upper_truncation_dim, verify_ef_identities, verify_lowering_coefficients, JSign,
};
use qosc_core::fusion::{check_fusion_truncation, cyclicity, fuse, FusionParams};
use qosc_core::phi::{target_relations, Choice, PhiMap, PhiRep, Side};
use qosc_core::relations::{all_relations, check_relation, Relation};
use qosc_core::rmatrix::{closed_rho_c, closed_rho_d, decompose_c, components_c, poles_c, poles_d, solve_c, Level, RMatrix, Sign};
use qosc_core::truncation::check_truncation;
use qosc_core::{Epsilon, Error, Param, RatFn, Scalar};
use rayon::prelude::*;
use serde::Serialize;

use crate::report::Check;

pub fn level_name(level: Level) -> String {
    match level {
        Level::Full => "full".into(),
        Level::Truncated(Side::Lower, c) => format!("lower/{}", choice_name(c)),
        Level::Truncated(Side::Upper, c) => format!("upper/{}", choice_name(c)),
    }
}

pub fn choice_name(c: Choice) -> &'static str {
    match c {
        Choice::Plus => "plus",
        Choice::Minus => "minus",
    }
}

pub fn sigma_name(s1: Sign, s2: Sign) -> String {
    format!("{}{}", s1.symbol(), s2.symbol())
}

fn err_check(name: impl Into<String>, e: &Error) -> Check {
    Check::with_detail(name, false, e.to_string())
}

/// A module on which relations are checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuleKind {
    W,
    W2,
}

impl ModuleKind {
    pub fn factor(self) -> FactorKind {
        match self {
            ModuleKind::W => FactorKind::W,
            ModuleKind::W2 => FactorKind::W2,
        }
    }
}

/// Counts of a relation battery.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RelationSummary {
    pub relations: usize,
    pub labels: usize,
    pub failed_relations: usize,
}

fn run_relations(rep: &dyn Rep<Scalar>, rels: &[Relation], spec: &ModuleSpec, prefix: &str) -> (Vec<Check>, RelationSummary) {
    let basis = spec.basis(None);
    let n = spec.eps.n();
    let reports: Vec<_> = rels.par_iter().map(|r| check_relation(rep, r, &basis)).collect();
    let mut summary = RelationSummary { relations: rels.len(), labels: basis.len(), failed_relations: 0 };
    let checks = reports
        .into_iter()
        .map(|r| {
            let name = format!("{prefix}{}", r.name);
            if r.ok() {
                Check::new(name, true)
            } else {
                summary.failed_relations += 1;
                let at = r.first_failure.as_ref().map(|l| format_label(l, n)).unwrap_or_default();
                Check::with_detail(name, false, format!("fails on {} of {} labels, first at {at}", r.failures, r.checked))
            }
        })
        .collect();
    (checks, summary)
}

/// Every defining relation on the window of `W(x)` or `W^{(x)2}(x)`.
/// `perturb` flips the sign of `e_0` on `W(x)` (a negative control).
pub fn relations(eps: &Epsilon, kind: ModuleKind, x: &Scalar, cutoff: u32, perturb: bool) -> Result<(Vec<Check>, RelationSummary), Error> {
    let p = Param::Value(x.clone());
    let spec = match kind {
        ModuleKind::W => ModuleSpec::w(eps.clone(), p.clone(), cutoff)?,
        ModuleKind::W2 => ModuleSpec::w2(eps.clone(), p.clone(), cutoff)?,
    };
    let rep: Arc<dyn Rep<Scalar>> = match (kind, perturb) {
        (ModuleKind::W, false) => Arc::new(WRep::new(eps.clone(), &p)?),
        (ModuleKind::W, true) => Arc::new(WRep::new(eps.clone(), &p)?.with_e0_sign_flip()),
        (ModuleKind::W2, false) => Arc::new(W2Rep::new(eps.clone(), &p)?),
        (ModuleKind::W2, true) => return Err(Error::Invalid("the perturbed table is only available for W".into())),
    };
    Ok(run_relations(rep.as_ref(), &all_relations(eps), &spec, ""))
}

/// The target relations for the images of the truncation map.
pub fn phi_relations(eps: &Epsilon, kind: ModuleKind, side: Side, choice: Choice, x: &Scalar, cutoff: u32) -> Result<(Vec<Check>, RelationSummary), Error> {
    let p = Param::Value(x.clone());
    let spec = match kind {
        ModuleKind::W => ModuleSpec::w(eps.clone(), p, cutoff)?,
        ModuleKind::W2 => ModuleSpec::w2(eps.clone(), p, cutoff)?,
    };
    let map = PhiMap::new(eps, side, choice)?;
    let rels = target_relations(&map);
    let prefix = format!("{} {:?}/{}: ", map.target_name(), side, choice_name(choice)).to_lowercase();
    let rep = PhiRep::new(spec.rep::<Scalar>()?, map)?;
    Ok(run_relations(&rep, &rels, &spec, &prefix))
}

/// Names of the node-0 quantum Serre relations of the target, which are the
/// identities that need the extra bracket computations by hand.
pub fn is_node0_serre(name: &str) -> bool {
    name.contains("serre") && (name.contains("E0^") || name.contains("F0^") || name.ends_with("E0") || name.ends_with("F0"))
}

/// Equivariance, idempotence and monoidality of the truncation.
pub fn truncation(eps: &Epsilon, side: Side, choice: Choice, factors: usize, cutoff: u32) -> Vec<Check> {
    let name = format!("truncation {eps} {side:?}/{} x{factors}", choice_name(choice));
    match check_truncation(eps, side, choice, factors, cutoff) {
        Ok(r) => {
            let detail = format!("{} labels, {} kept", r.checked, r.kept_labels);
            let mut v = vec![
                Check::with_detail(format!("{name} equivariant"), r.equivariant, r.first_failure.clone().unwrap_or(detail.clone())),
                Check::new(format!("{name} idempotent"), r.idempotent),
            ];
            if factors == 2 {
                v.push(Check::new(format!("{name} monoidal"), r.monoidal));
            }
            v.push(Check::with_detail(format!("{name} nonempty"), r.kept_labels > 0 && r.kept_labels < r.checked, detail));
            v
        }
        Err(e) => vec![err_check(name, &e)],
    }
}

/// Dimension of the upper truncation of `W_l` against `dim V(varpi_{m-l})`.
pub fn fundamental_truncation_dims(m: usize) -> (Vec<Check>, BTreeMap<u32, usize>) {
    let mut checks = Vec::new();
    let mut dims = BTreeMap::new();
    for l in 0..=(m as u32 + 1) {
        let want = if (l as usize) <= m { dim_fundamental_c(m, m - l as usize) } else { 0 };
        match upper_truncation_dim(m, l) {
            Ok(d) => {
                dims.insert(l, d);
                checks.push(Check::with_detail(format!("upper truncation of W_{l} has dim {want}"), d == want, format!("got {d}")));
            }
            Err(e) => checks.push(err_check(format!("upper truncation of W_{l}"), &e)),
        }
    }
    (checks, dims)
}

/// A row of a multiplicity table.
#[derive(Clone, Debug, Serialize)]
pub struct MultRow {
    pub lambda: Vec<u32>,
    pub mult: usize,
}

pub fn mult_rows(ms: &[Multiplicity]) -> Vec<MultRow> {
    ms.iter().filter(|m| m.mult > 0).map(|m| MultRow { lambda: m.nu.parts().to_vec(), mult: m.mult }).collect()
}

/// Highest weight multiplicities of `W^{s1} (x) W^{s2}` against the component set.
pub fn decomposition_c(m: usize, level: Level, s1: Sign, s2: Sign, cutoff: u32) -> (Vec<Check>, Vec<MultRow>) {
    let name = format!("decompose {} {}", sigma_name(s1, s2), level_name(level));
    match decompose_c(m, level, s1, s2, cutoff) {
        Ok(ms) => {
            let want = components_c(s1, s2, cutoff);
            let bad: Vec<String> =
                ms.iter().filter(|x| x.mult != usize::from(want.contains(&x.nu))).map(|x| format!("{}x{}", x.nu, x.mult)).collect();
            let detail = if bad.is_empty() { format!("{} candidates", ms.len()) } else { format!("unexpected {}", bad.join(" ")) };
            (vec![Check::with_detail(name, bad.is_empty(), detail)], mult_rows(&ms))
        }
        Err(e) => (vec![err_check(name, &e)], Vec::new()),
    }
}

/// `W^{(x)2}` has multiplicity `l+1` on `(l)` and nothing else.
pub fn decomposition_w2(m: usize, cutoff: u32) -> (Vec<Check>, Vec<MultRow>) {
    match decompose_w2(m, Level::Full, cutoff) {
        Ok(ms) => {
            let checks = ms
                .iter()
                .filter(|x| x.nu.len() <= 1 || x.mult > 0)
                .map(|x| {
                    let want = if x.nu.len() <= 1 { x.nu.part(0) as usize + 1 } else { 0 };
                    Check::with_detail(format!("W2 multiplicity of {}", x.nu), x.mult == want, format!("got {}, expected {want}", x.mult))
                })
                .collect();
            (checks, mult_rows(&ms))
        }
        Err(e) => (vec![err_check("decompose W2", &e)], Vec::new()),
    }
}

/// One computed spectral coefficient.
#[derive(Clone, Debug, Serialize)]
pub struct RhoRow {
    pub lambda: Vec<u32>,
    pub rho: String,
    pub closed_form_match: bool,
    pub poles: Vec<i32>,
}

fn pole_check(name: &str, rho: &RatFn, allowed: &[i32], bound: i32) -> Check {
    let (exps, rest) = rho.pole_exponents(bound);
    let ok = exps.iter().all(|e| allowed.contains(e)) && rest.degree() == Some(0);
    Check::with_detail(format!("{name} poles"), ok, format!("{exps:?}"))
}

fn rho_rows(r: &RMatrix, closed: impl Fn(&Partition) -> Option<RatFn>) -> Vec<RhoRow> {
    r.components
        .iter()
        .zip(&r.rho)
        .map(|(c, rho)| {
            let (e, _) = rho.pole_exponents(64);
            RhoRow {
                lambda: c.nu.parts().to_vec(),
                rho: rho.to_string(),
                closed_form_match: closed(&c.nu).as_ref() == Some(rho),
                poles: e,
            }
        })
        .collect()
}

/// Type C spectral decomposition at one level.
pub fn rmatrix_c(m: usize, level: Level, s1: Sign, s2: Sign, cutoff: u32, intertwining: Option<i32>) -> (Vec<Check>, Option<(RMatrix, Vec<RhoRow>)>) {
    let tag = format!("R {} {}", sigma_name(s1, s2), level_name(level));
    let mut r = match solve_c(m, level, s1, s2, cutoff) {
        Ok(r) => r,
        Err(e) => return (vec![err_check(tag, &e)], None),
    };
    let allowed = poles_c(s1, s2, 64);
    let mut checks = Vec::new();
    for (c, rho) in r.components.iter().zip(&r.rho) {
        let name = format!("{tag} rho{}", c.nu);
        match closed_rho_c(s1, s2, &c.nu) {
            Ok(cl) => checks.push(Check::with_detail(name.clone(), &cl == rho, rho.to_string())),
            Err(e) => checks.push(err_check(name.clone(), &e)),
        }
        checks.push(pole_check(&name, rho, &allowed, 64));
    }
    checks.push(Check::new(format!("{tag} components found"), !r.components.is_empty()));
    if let Some(d) = intertwining {
        checks.push(match r.check_intertwining(d) {
            Ok(k) => Check::with_detail(format!("{tag} intertwines"), k > 0, format!("{k} checks")),
            Err(e) => err_check(format!("{tag} intertwines"), &e),
        });
    }
    let rows = rho_rows(&r, |nu| closed_rho_c(s1, s2, nu).ok());
    (checks, Some((r, rows)))
}

/// Type D spectral decomposition.
pub fn rmatrix_d(m: usize, level: Level, choice: Choice, l1: u32, l2: u32, cutoff: u32, intertwining: Option<i32>) -> (Vec<Check>, Vec<RhoRow>) {
    let tag = format!("R W{l1} W{l2} {}", level_name(level));
    let mut r = match solve_d(m, level, choice, l1, l2, cutoff) {
        Ok(r) => r,
        Err(e) => return (vec![err_check(tag, &e)], Vec::new()),
    };
    let allowed = poles_d(l1, l2, 64);
    let mut checks = Vec::new();
    for (c, rho) in r.components.iter().zip(&r.rho) {
        let (a, b) = rs_of(l1, l2, &c.nu);
        let name = format!("{tag} rho{}", c.nu);
        match closed_rho_d(l1, l2, a, b) {
            Ok(cl) => checks.push(Check::with_detail(name.clone(), &cl == rho, rho.to_string())),
            Err(e) => checks.push(err_check(name.clone(), &e)),
        }
        checks.push(pole_check(&name, rho, &allowed, 64));
    }
    checks.push(Check::new(format!("{tag} components found"), !r.components.is_empty()));
    if let Some(d) = intertwining {
        // the lowest block of W_l1 (x) W_l2 has degree l1 + l2
        checks.push(match r.check_intertwining((l1 + l2) as i32 + d) {
            Ok(k) => Check::with_detail(format!("{tag} intertwines"), k > 0, format!("{k} checks")),
            Err(e) => err_check(format!("{tag} intertwines"), &e),
        });
    }
    let rows = rho_rows(&r, |nu| {
        let (a, b) = rs_of(l1, l2, nu);
        closed_rho_d(l1, l2, a, b).ok()
    });
    (checks, rows)
}

/// Highest weight property of `u_{r,s}` for `r <= rmax`, `s <= min(smax, l1, l2)`.
pub fn u_highest(m: usize, choice: Choice, l1: u32, l2: u32, rmax: u32, smax: u32) -> Vec<Check> {
    let mut out = Vec::new();
    for r in 0..=rmax {
        for s in 0..=smax.min(l1).min(l2) {
            let name = format!("u_{{{r},{s}}} ({l1},{l2}) {} highest", choice_name(choice));
            out.push(match check_u_highest(m, choice, l1, l2, r, s, JSign::Minus) {
                Ok(b) => Check::new(name, b),
                Err(e) => err_check(name, &e),
            });
        }
    }
    out
}

/// The four raising/lowering identities with symbolic parameters.
pub fn ef_identities(m: usize, choice: Choice, l1: u32, l2: u32, rmax: u32, smax: u32) -> Check {
    let name = format!("EF identities ({l1},{l2}) {} r<={rmax} s<={smax}", choice_name(choice));
    match verify_ef_identities(m, choice, l1, l2, rmax, smax) {
        Ok(r) => {
            let d = if r.failures.is_empty() { format!("{} checks", r.checked) } else { r.failures.join("; ") };
            Check::with_detail(name, r.ok(), d)
        }
        Err(e) => err_check(name, &e),
    }
}

/// Coefficients of `F_{m+1} u_{r,s}`: the second-order identity, the
/// corrected closed forms, and the forms read literally.
pub fn lowering_coefficients(m: usize, choice: Choice, l1: u32, l2: u32, r: u32, s: u32) -> Vec<Check> {
    let tag = format!("F u_{{{r},{s}}} ({l1},{l2}) {}", choice_name(choice));
    match verify_lowering_coefficients(m, choice, l1, l2, r, s) {
        Ok(a) => {
            let big = (l1 + l2 + 2 * r) as i64;
            vec![
                Check::with_detail(format!("{tag} e^2 F identity"), a.identity_ok, format!("C00 = {}", a.c00)),
                Check::with_detail(
                    format!("{tag} pairing"),
                    a.pairing == Some(-(big + 4)),
                    format!("e f u = [{:?}] u, L = {big}", a.pairing),
                ),
                Check::with_detail(format!("{tag} C10, C20 closed forms"), a.closed_ok(), format!("C10 = {}", a.c10)),
                Check::with_detail(
                    format!("{tag} C10, C20 displayed forms"),
                    a.displayed_ok(),
                    format!("displayed C10 = {}", a.displayed_c10),
                ),
            ]
        }
        Err(e) => vec![err_check(tag, &e)],
    }
}

/// Generation, closure, `k`-independence and truncation of `W_l`.
pub fn fundamental(m: usize, l: u32, k: u32, cutoff: u32, what: &str) -> (Vec<Check>, BTreeMap<String, usize>) {
    let eps = Epsilon::alternating_prime(m);
    let all = what == "all";
    let mut checks = Vec::new();
    let mut dims = BTreeMap::new();
    if all || what == "closure" {
        match build_fundamental(&eps, Level::Full, l, k, cutoff) {
            Ok(f) => {
                for (w, d) in f.block_dims() {
                    dims.insert(w.to_string(), d);
                }
                checks.push(Check::with_detail(format!("W_{l},{k} closed under e0, f0, e_i"), f.closure_checks > 0, format!("{} checks", f.closure_checks)));
            }
            Err(e) => checks.push(err_check(format!("W_{l},{k}"), &e)),
        }
    }
    if all || what == "iso" {
        for k2 in 0..=l {
            if k2 == k {
                continue;
            }
            checks.push(match iso_between_k(&eps, l, k, k2, cutoff) {
                Ok(r) => Check::with_detail(
                    format!("W_{l},{k} ~ W_{l},{k2}"),
                    r.dims_agree && r.failures == 0 && r.checks > 0,
                    format!("{} checks, {} failures", r.checks, r.failures),
                ),
                Err(e) => err_check(format!("W_{l},{k} ~ W_{l},{k2}"), &e),
            });
        }
    }
    if all || what == "truncation" {
        for choice in [Choice::Plus, Choice::Minus] {
            checks.push(match check_lower_truncation(m, choice, l, cutoff) {
                Ok(t) => Check::with_detail(format!("lower truncation of W_{l} {}", choice_name(choice)), t.equal, format!("{} vectors", t.total)),
                Err(e) => err_check(format!("lower truncation of W_{l}"), &e),
            });
        }
        let want = if (l as usize) <= m { dim_fundamental_c(m, m - l as usize) } else { 0 };
        checks.push(match upper_truncation_dim(m, l) {
            Ok(d) => Check::with_detail(format!("upper truncation of W_{l} has dim {want}"), d == want, format!("got {d}")),
            Err(e) => err_check(format!("upper truncation of W_{l}"), &e),
        });
    }
    if all || what == "hw" {
        for l2 in 1..=l.max(1) {
            checks.push(match hw_matches_u(m, Choice::Plus, l, l2, 2, cutoff) {
                Ok(b) => Check::new(format!("hw vectors of W_{l} W_{l2} are the u_rs"), b),
                Err(e) => err_check(format!("hw vectors of W_{l} W_{l2}"), &e),
            });
        }
    }
    (checks, dims)
}

/// Summary of one fused image.
#[derive(Clone, Debug, Serialize)]
pub struct FusionRow {
    pub level: String,
    pub total_dim: usize,
    pub hw_content: Vec<String>,
    pub skipped_blocks: usize,
}

/// Fusion with the expected hw content, cyclicity and truncation compatibility.
pub fn fusion(
    m: usize,
    params: &FusionParams,
    cutoff: u32,
    expect: Option<&[Partition]>,
    truncation_levels: &[Level],
) -> (Vec<Check>, Option<FusionRow>) {
    let tag = format!("fuse {:?} c={}", params.labels, params.c.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","));
    if let Err(e) = params.check_admissible() {
        return (vec![err_check(format!("{tag} admissible"), &e)], None);
    }
    let img = match fuse(m, Level::Full, params, cutoff) {
        Ok(i) => i,
        Err(e) => return (vec![err_check(tag, &e)], None),
    };
    let mut checks = vec![Check::new(format!("{tag} admissible"), true), Check::with_detail(format!("{tag} nonzero"), img.is_nonzero(), format!("dim {}", img.total_dim()))];
    let hw = img.hw_components();
    let names: Vec<String> = hw.iter().map(|p| p.to_string()).collect();
    if let Some(want) = expect {
        let mut w = want.to_vec();
        w.sort();
        checks.push(Check::with_detail(format!("{tag} hw content"), hw == w, names.join(" ")));
    }
    checks.push(match cyclicity(&img, cutoff as i32 - 2) {
        Ok(c) => Check::with_detail(
            format!("{tag} cyclic"),
            c.stable && c.cyclic && c.blocks_compared > 0,
            format!("stable={} cyclic={} blocks={}", c.stable, c.cyclic, c.blocks_compared),
        ),
        Err(e) => err_check(format!("{tag} cyclic"), &e),
    });
    for &level in truncation_levels {
        checks.push(match check_fusion_truncation(m, level, params, cutoff) {
            Ok(t) => Check::with_detail(
                format!("{tag} truncation {}", level_name(level)),
                t.equal && t.blocks_compared > 0,
                format!("{} blocks, dims {} = {}", t.blocks_compared, t.full_dim, t.truncated_dim),
            ),
            Err(e) => err_check(format!("{tag} truncation {}", level_name(level)), &e),
        });
    }
    let row = FusionRow { level: "full".into(), total_dim: img.total_dim(), hw_content: names, skipped_blocks: img.skipped.len() };
    (checks, Some(row))
}

/// A fusion parameter that must be rejected by the admissibility gate.
pub fn rejected(params: &FusionParams) -> Check {
    let tag = format!("fuse {:?} c={} rejected", params.labels, params.c.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","));
    match fuse(2, Level::Full, params, 3) {
        Err(e @ Error::NotAdmissible { .. }) => Check::with_detail(tag, true, e.to_string()),
        Err(e) => Check::with_detail(tag, false, format!("other error: {e}")),
        Ok(_) => Check::with_detail(tag, false, "accepted"),
    }
}
