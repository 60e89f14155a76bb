//! The truncation functor on windows: stability of the kept subspace under
//! the truncated generators, idempotence and compatibility with tensor products.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::coeff::Param;
use crate::error::Error;
use crate::fock::{truncate_vector, FactorKind, FactorSpec, FockVector, Gen, Label, ModuleSpec, Rep, Tensor};
use crate::lattice::Epsilon;
use crate::phi::{Choice, PhiMap, PhiRep, Side};
use crate::scalar::Scalar;

/// Outcome of the truncation checks on one window.
#[derive(Clone, Debug, Default)]
pub struct TruncationCheck {
    /// Basis labels tested.
    pub checked: usize,
    /// Labels kept by the truncation.
    pub kept_labels: usize,
    /// `tr(x b) = x tr(b)` for every target generator `x` and basis label `b`.
    pub equivariant: bool,
    pub idempotent: bool,
    /// For tensor windows, the truncated action of the product agrees with the
    /// product of the truncated actions. Always true on single factors.
    pub monoidal: bool,
    pub first_failure: Option<String>,
}

impl TruncationCheck {
    pub fn ok(&self) -> bool {
        self.equivariant && self.idempotent && self.monoidal
    }
}

/// Runs the truncation checks on `factors` copies of the flavor module of
/// `eps` (1 or 2), with distinct generic parameters, up to `cutoff`.
pub fn check_truncation(eps: &Epsilon, side: Side, choice: Choice, factors: usize, cutoff: u32) -> Result<TruncationCheck, Error> {
    if !(1..=2).contains(&factors) {
        return Err(Error::Invalid(format!("truncation checks take 1 or 2 factors, got {factors}")));
    }
    let kind = match eps.flavor() {
        crate::lattice::Flavor::AlternatingPrime => FactorKind::W2,
        _ => FactorKind::W,
    };
    let map = PhiMap::new(eps, side, choice)?;
    let params = [Param::Value(Scalar::w_pow(3)), Param::Value(Scalar::w_pow(-5))];
    let spec = ModuleSpec::new(
        eps.clone(),
        (0..factors).map(|j| FactorSpec { kind, param: params[j].clone(), parity: None }).collect(),
        cutoff,
    )?;
    let inner = spec.rep::<Scalar>()?;
    let whole = PhiRep::new(inner, map.clone())?;
    let product: Option<Tensor<Scalar>> = if factors == 2 {
        let parts: Vec<Arc<dyn Rep<Scalar>>> = params
            .iter()
            .map(|p| -> Result<Arc<dyn Rep<Scalar>>, Error> {
                let s = ModuleSpec::new(eps.clone(), vec![FactorSpec { kind, param: p.clone(), parity: None }], cutoff)?;
                Ok(Arc::new(PhiRep::new(s.rep::<Scalar>()?, map.clone())?))
            })
            .collect::<Result<_, _>>()?;
        Some(Tensor::new(parts)?)
    } else {
        None
    };
    let n = eps.n();
    let tr = |v: &FockVector<Scalar>| truncate_vector(v, n, &map.kept);
    let basis: Vec<Label> = spec.basis(None);
    let mut out = TruncationCheck { checked: basis.len(), equivariant: true, idempotent: true, monoidal: true, ..Default::default() };
    let gens: Vec<Gen> = (0..=map.rank()).flat_map(|i| [Gen::E(i), Gen::F(i)]).collect();
    for b in &basis {
        let v = FockVector::basis(b.clone());
        let tv = tr(&v);
        if !tv.is_zero() {
            out.kept_labels += 1;
        }
        if tr(&tv) != tv {
            out.idempotent = false;
        }
        for g in &gens {
            let xv = whole.apply(g, &v);
            let lhs = tr(&xv);
            let rhs = whole.apply(g, &tv);
            if lhs != rhs {
                out.equivariant = false;
                out.first_failure.get_or_insert_with(|| format!("{g:?} at {}", crate::fock::format_label(b, n)));
            }
            if tr(&lhs) != lhs {
                out.idempotent = false;
            }
            if let Some(p) = &product {
                if !tv.is_zero() && p.apply(g, &tv) != rhs {
                    out.monoidal = false;
                    out.first_failure.get_or_insert_with(|| format!("product {g:?} at {}", crate::fock::format_label(b, n)));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternating_both_sides() {
        let eps = Epsilon::alternating(2);
        for side in [Side::Lower, Side::Upper] {
            for factors in [1, 2] {
                let r = check_truncation(&eps, side, Choice::Plus, factors, 3).unwrap();
                assert!(r.ok(), "{side:?} {factors}: {:?}", r.first_failure);
                assert!(r.kept_labels > 0 && r.kept_labels < r.checked);
            }
        }
    }

    #[test]
    fn alternating_prime_lower() {
        let eps = Epsilon::alternating_prime(2);
        let r = check_truncation(&eps, Side::Lower, Choice::Minus, 1, 3).unwrap();
        assert!(r.ok(), "{:?}", r.first_failure);
    }
}
