//! Jet algebras, total derivatives, and prolongation.
//!
//! A jet algebra on `m` fields is the free `D`-algebra on `m` degree-0
//! generators: the derivative decoration `∂^α · φ` *is* the jet coordinate
//! `φ_α`, and the total derivative in direction `k` is the action of `∂_k`.

use crate::algebra::{AlgElem, OGen};
use crate::dga::Dga;
use crate::error::Error;
use crate::gens::{GenId, GenKind};
use crate::multiindex::MultiIndex;
use crate::Result;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Base dimension, number of fields, and the jet-order window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JetSpec {
    pub base_dim: usize,
    pub num_fields: usize,
    pub order: u32,
}

/// The field generators `φ^1, …, φ^m`: even, degree 0, zero differential.
pub fn field_gens(spec: &JetSpec) -> Vec<GenId> {
    (0..spec.num_fields)
        .map(|i| GenId::named(GenKind::Sphere, 0, i as u32, &format!("phi{}", i + 1)))
        .collect()
}

/// The free commutative `D`-algebra on the fields, concentrated in degree 0
/// with zero differential. Jet coordinates `φ^i_α` exist for `|α| ≤ order`
/// (enforced at enumeration and differentiation time, not structurally).
pub fn jet_algebra(spec: &JetSpec) -> Result<Arc<Dga>> {
    let gens = field_gens(spec);
    let diff: BTreeMap<GenId, AlgElem> = gens
        .iter()
        .map(|g| (g.clone(), AlgElem::zero(spec.base_dim)))
        .collect();
    Ok(Arc::new(Dga::new(spec.base_dim, gens, diff, Vec::new())?))
}

/// The jet coordinate `φ^i_α` as an algebra element.
pub fn jet_coordinate(spec: &JetSpec, field: usize, alpha: MultiIndex) -> AlgElem {
    let g = field_gens(spec)[field].clone();
    AlgElem::letter(spec.base_dim, OGen { gen: g, deco: alpha })
}

/// The maximal jet/operator order appearing in an element.
pub fn jet_order(e: &AlgElem) -> u32 {
    e.terms()
        .flat_map(|(m, _)| m.letters().iter().map(|l| l.deco.total()))
        .max()
        .unwrap_or(0)
}

fn has_antifield(e: &AlgElem) -> bool {
    e.support()
        .any(|g| matches!(g.kind, GenKind::Antifield(_)))
}

/// The total derivative `D_{x^k}` as the action of `∂_k`. In the extended
/// form antifields are carried along on an equal footing with the fields;
/// with `extended = false` the input must lie in the jet subalgebra. Errors
/// with a window exit when the result's jet order would exceed `order_bound`
/// (the derivative strictly raises the order, so silent truncation would
/// corrupt `d² = 0`).
pub fn total_derivative(
    dga: &Dga,
    k: usize,
    e: &AlgElem,
    extended: bool,
    order_bound: u32,
) -> Result<AlgElem> {
    if !extended && has_antifield(e) {
        return Err(Error::InvalidArgument(
            "non-extended total derivative applied to an antifield element".into(),
        ));
    }
    if k >= dga.dim() {
        return Err(Error::InvalidArgument(format!(
            "direction {} out of range for base dimension {}",
            k + 1,
            dga.dim()
        )));
    }
    let out = dga.theta(k, e)?;
    let order = jet_order(&out);
    if order > order_bound {
        return Err(Error::WindowExit {
            what: format!("total derivative of {}", e),
            found: order,
            bound: order_bound,
        });
    }
    Ok(out)
}

/// All prolongations `D^α F` for `|α| ≤ up_to`, in lexicographic order of
/// `α` (the order-0 entry is `F` itself).
pub fn prolong(dga: &Dga, f: &AlgElem, up_to: u32, order_bound: u32) -> Result<Vec<AlgElem>> {
    let mut out = Vec::new();
    for alpha in MultiIndex::all_up_to(dga.dim(), up_to) {
        let mut cur = f.clone();
        for i in 0..dga.dim() {
            for _ in 0..alpha.get(i) {
                cur = total_derivative(dga, i, &cur, true, order_bound)?;
            }
        }
        out.push(cur);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    fn spec1() -> JetSpec {
        JetSpec {
            base_dim: 1,
            num_fields: 1,
            order: 4,
        }
    }

    #[test]
    fn coordinate_chain_rule() {
        let spec = spec1();
        let j = jet_algebra(&spec).unwrap();
        let phi = jet_coordinate(&spec, 0, MultiIndex::zero(1));
        let d = total_derivative(&j, 0, &phi, false, 4).unwrap();
        assert_eq!(d, jet_coordinate(&spec, 0, MultiIndex::new(vec![1])));
    }

    #[test]
    fn leibniz_on_products() {
        // D_t(t·φ) = φ + t·φ₁
        let spec = spec1();
        let j = jet_algebra(&spec).unwrap();
        let phi = jet_coordinate(&spec, 0, MultiIndex::zero(1));
        let t_phi = phi.scale_poly(&Poly::var(1, 0));
        let out = total_derivative(&j, 0, &t_phi, false, 4).unwrap();
        let phi1 = jet_coordinate(&spec, 0, MultiIndex::new(vec![1]));
        assert_eq!(out, phi.add(&phi1.scale_poly(&Poly::var(1, 0))));
        // D_t(φ·φ₁) = φ₁² + φ·φ₂
        let prod = j.mul(&phi, &phi1);
        let out = total_derivative(&j, 0, &prod, false, 4).unwrap();
        let phi2 = jet_coordinate(&spec, 0, MultiIndex::new(vec![2]));
        let expect = j.mul(&phi1, &phi1).add(&j.mul(&phi, &phi2));
        assert_eq!(out, expect);
    }

    #[test]
    fn window_exit_reported() {
        let spec = spec1();
        let j = jet_algebra(&spec).unwrap();
        let phi4 = jet_coordinate(&spec, 0, MultiIndex::new(vec![4]));
        let err = total_derivative(&j, 0, &phi4, false, 4);
        assert!(matches!(err, Err(Error::WindowExit { .. })));
    }

    #[test]
    fn prolongation_lists() {
        let spec = spec1();
        let j = jet_algebra(&spec).unwrap();
        let phi2 = jet_coordinate(&spec, 0, MultiIndex::new(vec![2]));
        let pro = prolong(&j, &phi2, 1, 4).unwrap();
        assert_eq!(pro.len(), 2);
        assert_eq!(pro[0], phi2);
        assert_eq!(pro[1], jet_coordinate(&spec, 0, MultiIndex::new(vec![3])));
        assert_eq!(prolong(&j, &phi2, 0, 4).unwrap(), vec![phi2]);
    }

    #[test]
    fn total_derivatives_commute() {
        let spec = JetSpec {
            base_dim: 2,
            num_fields: 1,
            order: 3,
        };
        let j = jet_algebra(&spec).unwrap();
        let phi = jet_coordinate(&spec, 0, MultiIndex::zero(2));
        let f = j
            .mul(&phi, &phi)
            .scale_poly(&Poly::var(2, 0))
            .add(&jet_coordinate(&spec, 0, MultiIndex::new(vec![1, 0])));
        let d01 = total_derivative(&j, 1, &total_derivative(&j, 0, &f, false, 3).unwrap(), false, 3)
            .unwrap();
        let d10 = total_derivative(&j, 0, &total_derivative(&j, 1, &f, false, 3).unwrap(), false, 3)
            .unwrap();
        assert_eq!(d01, d10);
    }
}
