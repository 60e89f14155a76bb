//! Fused modules: images of R matrices specialized at admissible spectral
//! parameters, with their highest weight content and window diagnostics.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::coeff::Param;
use crate::decomp::{hw_vectors, Echelon, Partition, Space, VecSpace};
use crate::error::Error;
use crate::fock::{FactorKind, FactorSpec, FockVector, Gen, ModuleSpec, Rep, W2Rep, WRep};
use crate::fundrep::{build_fundamental, solve_d};
use crate::lattice::{Epsilon, Weight};
use crate::phi::Choice;
use crate::rmatrix::{level_data, lift, solve_c, tensor_at, wrap, Level, RMatrix, Sign};
use crate::scalar::Scalar;

/// Factor labels of a fused module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Labels {
    /// Spin-type factors `W^sigma` on the alternating flavor.
    C(Vec<Sign>),
    /// Fundamental factors `W_l` on the alternating-prime flavor.
    D(Vec<u32>),
}

impl Labels {
    pub fn len(&self) -> usize {
        match self {
            Labels::C(v) => v.len(),
            Labels::D(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn epsilon(&self, m: usize) -> Epsilon {
        match self {
            Labels::C(_) => Epsilon::alternating(m),
            Labels::D(_) => Epsilon::alternating_prime(m),
        }
    }

    /// Whether `q^e` is a pole of the R matrix between factors `i` and `j`.
    pub fn is_pole(&self, i: usize, j: usize, e: i32) -> bool {
        match self {
            Labels::C(s) => {
                if s[i] == s[j] {
                    e >= 2 && (e - 2) % 4 == 0
                } else {
                    e >= 4 && e % 4 == 0
                }
            }
            Labels::D(l) => {
                let d = (l[i] as i32 - l[j] as i32).abs();
                e >= d + 2 && (e - d) % 2 == 0
            }
        }
    }
}

/// Labels with spectral parameters `c`.
#[derive(Clone, Debug)]
pub struct FusionParams {
    pub labels: Labels,
    pub c: Vec<Scalar>,
}

impl FusionParams {
    pub fn new(labels: Labels, c: Vec<Scalar>) -> Result<Self, Error> {
        if labels.is_empty() || labels.len() != c.len() {
            return Err(Error::Invalid(format!("{} labels for {} parameters", labels.len(), c.len())));
        }
        if c.iter().any(|x| x.is_zero()) {
            return Err(Error::Invalid("spectral parameters must be nonzero".into()));
        }
        Ok(FusionParams { labels, c })
    }

    /// The fundamental family: `((+,+), (q^{-2l-2}, 1))` for even `l`,
    /// `((+,-), (q^{-2l-2}, 1))` for odd `l`.
    pub fn fundamental(l: u32) -> Self {
        let s2 = if l % 2 == 0 { Sign::Plus } else { Sign::Minus };
        FusionParams { labels: Labels::C(vec![Sign::Plus, s2]), c: vec![Scalar::q_pow(-2 * l as i32 - 2), Scalar::one()] }
    }

    /// Rejects parameters where some `c_i / c_j` (`i < j`) is a pole.
    pub fn check_admissible(&self) -> Result<(), Error> {
        for i in 0..self.c.len() {
            for j in i + 1..self.c.len() {
                let r = self.c[i].div(&self.c[j])?;
                if let Some(e) = r.q_exponent() {
                    if self.labels.is_pole(i, j, e) {
                        return Err(Error::NotAdmissible { i: i + 1, j: j + 1, exponent: e });
                    }
                }
            }
        }
        Ok(())
    }
}

/// A highest weight line count in the image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HwLine {
    pub weight: Weight,
    pub component: Option<Partition>,
    pub mult: usize,
}

/// The windowed image of a specialized R matrix.
pub struct FusedImage {
    pub level: Level,
    pub params: FusionParams,
    pub cutoff: u32,
    /// Image basis per weight block, in the target tensor order.
    pub blocks: BTreeMap<Weight, Vec<FockVector<Scalar>>>,
    pub source_dims: BTreeMap<Weight, usize>,
    /// Blocks whose component bases are cut off by the window.
    pub skipped: Vec<Weight>,
    pub hw: Vec<HwLine>,
    /// The image as a module: the target tensor product at the specialized parameters.
    pub module: Arc<dyn Rep<Scalar>>,
    pub ring: Vec<usize>,
}

impl FusedImage {
    pub fn is_nonzero(&self) -> bool {
        self.blocks.values().any(|b| !b.is_empty())
    }

    pub fn dims(&self) -> BTreeMap<Weight, usize> {
        self.blocks.iter().map(|(w, b)| (w.clone(), b.len())).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.blocks.values().map(Vec::len).sum()
    }

    /// Components met by the image, with multiplicity.
    pub fn hw_components(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        for h in &self.hw {
            if let Some(p) = &h.component {
                for _ in 0..h.mult {
                    out.push(p.clone());
                }
            }
        }
        out.sort();
        out
    }

    fn echelon(&self, w: &Weight) -> Echelon {
        let mut e = Echelon::new();
        for v in self.blocks.get(w).into_iter().flatten() {
            e.insert(v);
        }
        e
    }
}

fn single_rep(eps: &Epsilon, labels: &Labels, c: &Scalar, map: &Option<crate::phi::PhiMap>) -> Result<Arc<dyn Rep<Scalar>>, Error> {
    let p = Param::Value(c.clone());
    let inner: Arc<dyn Rep<Scalar>> = match labels {
        Labels::C(_) => Arc::new(WRep::new(eps.clone(), &p)?),
        Labels::D(_) => Arc::new(W2Rep::new(eps.clone(), &p)?),
    };
    wrap(inner, map)
}

/// Image of `R(c1/c2)` on the window, or the whole module for one factor.
pub fn fuse(m: usize, level: Level, params: &FusionParams, cutoff: u32) -> Result<FusedImage, Error> {
    params.check_admissible()?;
    let eps = params.labels.epsilon(m);
    let map = level.map(&eps)?;
    let (ring, kept) = level_data(&eps, &map);
    match params.labels.len() {
        1 => {
            let module = single_rep(&eps, &params.labels, &params.c[0], &map)?;
            let space: VecSpace = match &params.labels {
                Labels::C(s) => {
                    let spec = ModuleSpec::new(
                        eps.clone(),
                        vec![FactorSpec { kind: FactorKind::W, param: Param::one(), parity: Some(s[0].parity()) }],
                        cutoff,
                    )?;
                    VecSpace {
                        blocks: spec
                            .weight_blocks(kept.as_deref())
                            .into_iter()
                            .map(|(w, ls)| (w, ls.into_iter().map(FockVector::basis).collect()))
                            .collect(),
                    }
                }
                Labels::D(l) => build_fundamental(&eps, level, l[0], l[0], cutoff)?.space,
            };
            let mut blocks = BTreeMap::new();
            let mut source_dims = BTreeMap::new();
            let mut hw = Vec::new();
            for w in space.weights() {
                let b = space.block(&w);
                let h = hw_vectors(module.as_ref(), &ring, &b);
                if !h.is_empty() {
                    hw.push(HwLine { weight: w.clone(), component: None, mult: h.len() });
                }
                source_dims.insert(w.clone(), b.len());
                blocks.insert(w, b);
            }
            Ok(FusedImage { level, params: params.clone(), cutoff, blocks, source_dims, skipped: Vec::new(), hw, module, ring })
        }
        2 => {
            let mut rm: RMatrix = match &params.labels {
                Labels::C(s) => solve_c(m, level, s[0], s[1], cutoff)?,
                Labels::D(l) => {
                    let choice = match level {
                        Level::Truncated(_, ch) => ch,
                        Level::Full => Choice::Plus,
                    };
                    solve_d(m, level, choice, l[0], l[1], cutoff)?
                }
            };
            let z0 = params.c[0].div(&params.c[1])?;
            let kind = match params.labels {
                Labels::C(_) => FactorKind::W,
                Labels::D(_) => FactorKind::W2,
            };
            let module = tensor_at::<Scalar>(&eps, kind, [&Param::one(), &Param::Value(z0.clone())], &map)?;
            let comp_of: BTreeMap<Weight, Partition> =
                rm.components.iter().map(|c| (c.weight.clone(), c.nu.clone())).collect();
            let mut blocks = BTreeMap::new();
            let mut source_dims = BTreeMap::new();
            let mut skipped = Vec::new();
            let mut hw = Vec::new();
            for w in rm.pair.src_space.weights() {
                let basis = rm.pair.src_space.block(&w);
                source_dims.insert(w.clone(), basis.len());
                let mut e = Echelon::new();
                let mut ok = true;
                for b in &basis {
                    match rm.apply(&w, &lift(b)) {
                        Ok(v) => {
                            let mut s = FockVector::new();
                            for (l, c) in v.iter() {
                                s.add_term(l.clone(), c.specialize(&z0)?);
                            }
                            e.insert(&s);
                        }
                        Err(Error::Window(_)) => {
                            ok = false;
                            break;
                        }
                        Err(x) => return Err(x),
                    }
                }
                if !ok {
                    skipped.push(w);
                    continue;
                }
                let img = e.vectors();
                let h = hw_vectors(rm.pair.tgt.as_ref(), &rm.pair.ring, &img);
                if !h.is_empty() {
                    hw.push(HwLine { weight: w.clone(), component: comp_of.get(&w).cloned(), mult: h.len() });
                }
                blocks.insert(w, img);
            }
            Ok(FusedImage { level, params: params.clone(), cutoff, blocks, source_dims, skipped, hw, module, ring })
        }
        k => Err(Error::Invalid(format!("fusion of {k} factors is not supported (at most 2)"))),
    }
}

/// Submodule and cyclicity diagnostics of a fused image.
#[derive(Clone, Debug)]
pub struct Cyclicity {
    /// Every generator maps image vectors into the image (inside the window).
    pub stable: bool,
    /// Blocks of degree at most `max_degree` compared.
    pub blocks_compared: usize,
    /// The span generated from the seed equals the image on compared blocks.
    pub cyclic: bool,
    pub max_degree: i32,
}

/// Generates from the highest weight vector of the top component using all
/// generators of the algebra at the level, staying inside the window, and
/// compares with the image on blocks of degree at most `max_degree`.
pub fn cyclicity(img: &FusedImage, max_degree: i32) -> Result<Cyclicity, Error> {
    let rep = img.module.as_ref();
    let rank = rep.rank();
    let seed = img
        .hw
        .iter()
        .filter_map(|h| {
            let b = img.blocks.get(&h.weight)?;
            hw_vectors(rep, &img.ring, b).into_iter().next().map(|v| (h.weight.clone(), v))
        })
        .next();
    let Some((sw, seed)) = seed else {
        return Ok(Cyclicity { stable: true, blocks_compared: 0, cyclic: !img.is_nonzero(), max_degree });
    };
    let images: BTreeMap<&Weight, Echelon> = img.blocks.keys().map(|w| (w, img.echelon(w))).collect();
    let mut stable = true;
    let mut span: BTreeMap<Weight, Echelon> = BTreeMap::new();
    span.entry(sw).or_default().insert(&seed);
    let mut queue = vec![seed];
    while let Some(v) = queue.pop() {
        for i in 0..=rank {
            for g in [Gen::E(i), Gen::F(i)] {
                let x = rep.apply(&g, &v);
                if x.is_zero() {
                    continue;
                }
                let w = crate::rmatrix::weight_of_vector(rep, &x)?;
                if w.degree() > img.cutoff as i32 || img.skipped.contains(&w) {
                    continue;
                }
                match images.get(&w) {
                    Some(e) if e.contains(&x) => {}
                    _ => {
                        stable = false;
                        continue;
                    }
                }
                if span.entry(w).or_default().insert(&x) {
                    queue.push(x);
                }
            }
        }
    }
    let mut compared = 0;
    let mut cyclic = true;
    for (w, b) in &img.blocks {
        if w.degree() > max_degree {
            continue;
        }
        compared += 1;
        let got = span.get(w).map(Echelon::rank).unwrap_or(0);
        cyclic &= got == b.len();
    }
    Ok(Cyclicity { stable, blocks_compared: compared, cyclic, max_degree })
}

/// Comparison of a truncated-level image with the full-level image.
#[derive(Clone, Debug)]
pub struct TruncationCompare {
    pub blocks_compared: usize,
    pub equal: bool,
    pub full_dim: usize,
    pub truncated_dim: usize,
}

/// The weight blocks of the full-level image supported on the kept
/// positions against the image computed directly at `level`.
pub fn check_fusion_truncation(m: usize, level: Level, params: &FusionParams, cutoff: u32) -> Result<TruncationCompare, Error> {
    let full = fuse(m, Level::Full, params, cutoff)?;
    let low = fuse(m, level, params, cutoff)?;
    let eps = params.labels.epsilon(m);
    let kept = level.map(&eps)?.map(|p| p.kept).unwrap_or_default();
    let mut weights: Vec<Weight> = full.blocks.keys().filter(|w| w.supported_on(&kept)).cloned().collect();
    weights.extend(low.blocks.keys().cloned());
    weights.sort();
    weights.dedup();
    let (mut equal, mut compared, mut fd, mut td) = (true, 0, 0, 0);
    for w in weights {
        if full.skipped.contains(&w) || low.skipped.contains(&w) {
            continue;
        }
        let a = full.blocks.get(&w).cloned().unwrap_or_default();
        let b = low.blocks.get(&w).cloned().unwrap_or_default();
        let (ea, eb) = (full.echelon(&w), low.echelon(&w));
        equal &= a.len() == b.len() && a.iter().all(|v| eb.contains(v)) && b.iter().all(|v| ea.contains(v));
        compared += 1;
        fd += a.len();
        td += b.len();
    }
    Ok(TruncationCompare { blocks_compared: compared, equal, full_dim: fd, truncated_dim: td })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phi::Side;

    fn names(img: &FusedImage) -> Vec<alloc::string::String> {
        img.hw_components().iter().map(|p| format!("{p}")).collect()
    }

    #[test]
    fn pole_sets() {
        let c = Labels::C(vec![Sign::Plus, Sign::Plus]);
        assert!(c.is_pole(0, 1, 2) && c.is_pole(0, 1, 6) && !c.is_pole(0, 1, 4) && !c.is_pole(0, 1, -2));
        let c = Labels::C(vec![Sign::Plus, Sign::Minus]);
        assert!(c.is_pole(0, 1, 4) && !c.is_pole(0, 1, 2));
        let d = Labels::D(vec![1, 2]);
        assert!(d.is_pole(0, 1, 3) && d.is_pole(0, 1, 5) && !d.is_pole(0, 1, 4) && !d.is_pole(0, 1, 1));
    }

    #[test]
    fn inadmissible_rejected() {
        let bad = FusionParams::new(Labels::C(vec![Sign::Plus, Sign::Plus]), vec![Scalar::q_pow(2), Scalar::one()]).unwrap();
        assert!(matches!(fuse(2, Level::Full, &bad, 3), Err(Error::NotAdmissible { i: 1, j: 2, exponent: 2 })));
        assert!(FusionParams::new(Labels::D(vec![1]), vec![Scalar::one(), Scalar::one()]).is_err());
    }

    #[test]
    fn fundamental_family_c() {
        for (l, want) in [(1u32, vec!["(1)"]), (2, vec!["()", "(2)"])] {
            let p = FusionParams::fundamental(l);
            let img = fuse(2, Level::Full, &p, 4).unwrap();
            assert!(img.is_nonzero());
            assert!(img.skipped.is_empty());
            assert_eq!(names(&img), want, "l={l}");
            let cy = cyclicity(&img, 2).unwrap();
            assert!(cy.stable && cy.cyclic && cy.blocks_compared > 0);
            let t = check_fusion_truncation(2, Level::Truncated(Side::Lower, Choice::Plus), &p, 4).unwrap();
            assert!(t.equal && t.blocks_compared > 0);
        }
    }

    #[test]
    fn single_factor_is_whole_module() {
        let p = FusionParams::new(Labels::C(vec![Sign::Plus]), vec![Scalar::one()]).unwrap();
        let img = fuse(2, Level::Full, &p, 3).unwrap();
        assert_eq!(img.skipped.len(), 0);
        assert_eq!(img.total_dim(), img.source_dims.values().sum::<usize>());
    }
}
