//! The classical Koszul resolution and the Koszul-Tate complex with
//! antifields.

use crate::algebra::{AlgElem, Degree, Monomial, OGen};
use crate::dga::{Dga, RewriteRule};
use crate::error::Error;
use crate::factorization::{cof_trivfib, EnumerationBudget, FactorizationResult};
use crate::gens::{GenId, GenKind};
use crate::homology::{
    enumerate_basis, matrix_of_d_with, HomologyReport, Slice, TruncatedComplex, Truncation,
};
use crate::jet::{field_gens, jet_algebra, jet_order, JetSpec};
use crate::morphism::DgaMorphism;
use crate::multiindex::MultiIndex;
use crate::weyl::WeylOp;
use crate::Result;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

/// The equations `F_i = 0` cutting out the stationary locus, as degree-0
/// elements of the jet algebra.
#[derive(Clone, Debug)]
pub struct EquationSystem {
    pub equations: Vec<AlgElem>,
}

/// One Noether identity: coefficients `G^i_α` with `Σ G^i_α D^α F_i = 0`.
#[derive(Clone, Debug)]
pub struct NoetherIdentity {
    pub coeffs: Vec<(usize, MultiIndex, AlgElem)>,
}

/// A family of Noether identities, verified symbolically at construction.
#[derive(Clone, Debug, Default)]
pub struct NoetherSet {
    pub identities: Vec<NoetherIdentity>,
}

/// The Koszul-Tate complex: jet coordinates in degree 0, equation antifields
/// `φ*_i` in degree 1, Noether antifields `C*_j` in degree 2, with
/// `δ(∂^α φ*_i) = D^α F_i` and `δ(∂^β C*_j) = D^β Σ G^i_α ∂^α φ*_i` by
/// `D`-linearity.
#[derive(Clone, Debug)]
pub struct KtComplex {
    pub dga: Arc<Dga>,
    pub spec: JetSpec,
    pub equations: Vec<AlgElem>,
    pub antifields: Vec<GenId>,
    pub noether_gens: Vec<GenId>,
    pub antifield_order: u32,
}

/// The classical Koszul resolution of a sequence of degree-0 elements: one
/// odd degree-1 generator `φ^{a*}` per listed element with `δ(φ^{a*}) = x^a`,
/// extended as a derivation. The antifields span `O`-modules (no derivative
/// decorations), matching the classical complex.
pub fn koszul_resolution(dim: usize, generators: &[AlgElem]) -> Result<Arc<Dga>> {
    let mut gens = Vec::new();
    let mut diff = BTreeMap::new();
    let mut caps = Vec::new();
    for (a, x) in generators.iter().enumerate() {
        if x.dim() != dim {
            return Err(Error::DimensionMismatch(dim, x.dim()));
        }
        match x.degree() {
            Degree::Zero | Degree::Homogeneous(0) => {}
            other => {
                return Err(Error::DegreeMismatch {
                    what: format!("Koszul generator {}", a + 1),
                    expected: "0".into(),
                    found: format!("{:?}", other),
                });
            }
        }
        let g = GenId::named(
            GenKind::Antifield(1),
            1,
            a as u32,
            &format!("phi{}*", a + 1),
        );
        diff.insert(g.clone(), x.clone());
        caps.push(g.clone());
        gens.push(g);
    }
    let mut dga = Dga::new(dim, gens, diff, Vec::new())?;
    for g in caps {
        dga.set_deco_cap(g, 0);
    }
    Ok(Arc::new(dga))
}

/// The Noether residue `Σ G^i_α D^α F_i` of one identity.
pub fn noether_residue(
    jet: &Dga,
    equations: &[AlgElem],
    id: &NoetherIdentity,
) -> Result<AlgElem> {
    let mut residue = AlgElem::zero(jet.dim());
    for (i, alpha, g) in &id.coeffs {
        let f = equations
            .get(*i)
            .ok_or_else(|| Error::InvalidArgument(format!("equation index {} out of range", i)))?;
        let df = jet.weyl_action(&WeylOp::d_pow(alpha.clone()), f)?;
        residue = residue.add(&jet.mul(g, &df));
    }
    Ok(residue)
}

/// Builds the Koszul-Tate complex. Every Noether identity is verified
/// symbolically before construction; `δ² = 0` on the Noether antifields is
/// equivalent to those identities.
pub fn koszul_tate(
    spec: &JetSpec,
    eqs: &EquationSystem,
    noether: &NoetherSet,
    antifield_order: u32,
) -> Result<KtComplex> {
    let dim = spec.base_dim;
    let jet = jet_algebra(spec)?;
    for (i, f) in eqs.equations.iter().enumerate() {
        jet.check_element(f)?;
        match f.degree() {
            Degree::Zero | Degree::Homogeneous(0) => {}
            other => {
                return Err(Error::DegreeMismatch {
                    what: format!("equation {}", i + 1),
                    expected: "0".into(),
                    found: format!("{:?}", other),
                });
            }
        }
        if jet_order(f) > spec.order {
            return Err(Error::WindowExit {
                what: format!("equation {}", i + 1),
                found: jet_order(f),
                bound: spec.order,
            });
        }
    }
    for (j, id) in noether.identities.iter().enumerate() {
        let residue = noether_residue(&jet, &eqs.equations, id)?;
        if !residue.is_zero() {
            return Err(Error::NoetherFailure {
                index: j,
                residue: residue.to_string(),
            });
        }
    }
    let mut gens = field_gens(spec);
    let mut diff: BTreeMap<GenId, AlgElem> = gens
        .iter()
        .map(|g| (g.clone(), AlgElem::zero(dim)))
        .collect();
    let mut antifields = Vec::new();
    for (i, f) in eqs.equations.iter().enumerate() {
        let g = GenId::named(
            GenKind::Antifield(1),
            1,
            i as u32,
            &format!("phi{}*", i + 1),
        );
        diff.insert(g.clone(), f.clone());
        antifields.push(g.clone());
        gens.push(g);
    }
    let mut noether_gens = Vec::new();
    for (j, id) in noether.identities.iter().enumerate() {
        let g = GenId::named(GenKind::Antifield(2), 2, j as u32, &format!("C{}*", j + 1));
        let mut value = AlgElem::zero(dim);
        for (i, alpha, coeff) in &id.coeffs {
            if alpha.total() > antifield_order {
                return Err(Error::WindowExit {
                    what: format!("Noether identity {} uses D^{}", j + 1, alpha),
                    found: alpha.total(),
                    bound: antifield_order,
                });
            }
            let letter = AlgElem::letter(
                dim,
                OGen {
                    gen: antifields[*i].clone(),
                    deco: alpha.clone(),
                },
            );
            value = value.add(&letter.free_mul(coeff));
        }
        diff.insert(g.clone(), value);
        noether_gens.push(g.clone());
        gens.push(g);
    }
    let mut dga = Dga::new(dim, gens, diff, Vec::new())?;
    for g in antifields.iter().chain(&noether_gens) {
        dga.set_deco_cap(g.clone(), antifield_order);
    }
    Ok(KtComplex {
        dga: Arc::new(dga),
        spec: *spec,
        equations: eqs.equations.clone(),
        antifields,
        noether_gens,
        antifield_order,
    })
}

/// Comparison of `H_0` against the quotient of the jet algebra by the
/// prolonged equations, dimension-wise per polynomial-degree cutoff. Only
/// available when each equation has a solitary leading jet coordinate;
/// otherwise the comparison is skipped with a reason.
#[derive(Clone, Debug, Serialize)]
pub struct QuotientComparison {
    pub per_cutoff: Vec<CutoffComparison>,
    pub skipped: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CutoffComparison {
    pub poly_cutoff: u32,
    pub h0_dim: usize,
    pub quotient_dim: usize,
    pub matches: bool,
    pub flagged: bool,
}

impl QuotientComparison {
    pub fn all_match(&self) -> bool {
        self.skipped.is_none() && self.per_cutoff.iter().all(|c| c.matches || c.flagged)
    }
}

/// The leading jet coordinate of an equation, if solitary: a term that is a
/// single undecorated-coefficient jet letter of strictly maximal order.
fn solitary_leading(f: &AlgElem) -> Option<(GenId, MultiIndex)> {
    let mut best: Option<(GenId, MultiIndex)> = None;
    for (m, p) in f.terms() {
        if m.len() == 1 && p.terms().count() == 1 {
            let (alpha, _) = p.terms().next().unwrap();
            if alpha.is_zero() {
                let letter = &m.letters()[0];
                let better = match &best {
                    None => true,
                    Some((_, deco)) => letter.deco.total() > deco.total(),
                };
                if better {
                    best = Some((letter.gen.clone(), letter.deco.clone()));
                }
            }
        }
    }
    let (gen, deco) = best?;
    // leading means strictly maximal order among all letters of f
    for (m, _) in f.terms() {
        for l in m.letters() {
            if !(l.gen == gen && l.deco == deco) && l.deco.total() >= deco.total() {
                return None;
            }
        }
    }
    Some((gen, deco))
}

/// Homology of the Koszul-Tate complex within the window, with the `H_0`
/// quotient-dimension comparison.
pub fn kt_verify(kt: &KtComplex, t: &Truncation) -> Result<(HomologyReport, QuotientComparison)> {
    let report = TruncatedComplex::from_dga(&kt.dga, t)?.homology();
    // the exclusion oracle
    let mut leading: Vec<(GenId, MultiIndex)> = Vec::new();
    let mut skipped = None;
    for (i, f) in kt.equations.iter().enumerate() {
        match solitary_leading(f) {
            Some(l) => leading.push(l),
            None => {
                skipped = Some(format!(
                    "equation {} has no solitary leading jet coordinate",
                    i + 1
                ));
                break;
            }
        }
    }
    if skipped.is_some() {
        return Ok((
            report,
            QuotientComparison {
                per_cutoff: Vec::new(),
                skipped,
            },
        ));
    }
    let jet = jet_algebra(&kt.spec)?;
    let mut per_cutoff = Vec::new();
    for w in 0..=t.max_poly_degree {
        let tw = t.with_poly_degree(w);
        // degree-0 slice and the rank of δ_1 into it
        let slice0 = Slice::new(enumerate_basis(&kt.dga, 0, &tw));
        let slice1 = Slice::new(enumerate_basis(&kt.dga, 1, &tw));
        let (d1, leak) = matrix_of_d_with(&kt.dga, &slice1, &slice0)?;
        let h0 = slice0.dim() - d1.rank();
        // monomial-exclusion count: jet monomials free of prolonged leading
        // coordinates
        let mut count = 0usize;
        'labels: for label in enumerate_basis(&jet, 0, &tw) {
            for l in label.letters.letters() {
                for (g, deco) in &leading {
                    if l.gen == *g && deco.divides(&l.deco) {
                        continue 'labels;
                    }
                }
            }
            count += 1;
        }
        per_cutoff.push(CutoffComparison {
            poly_cutoff: w,
            h0_dim: h0,
            quotient_dim: count,
            matches: h0 == count,
            flagged: leak,
        });
    }
    Ok((
        report,
        QuotientComparison {
            per_cutoff,
            skipped: None,
        },
    ))
}

/// The quotient of the jet algebra by the prolonged equations, presented by
/// rewriting the leading coordinates. Requires every equation to have a
/// solitary leading jet coordinate.
pub fn prolonged_quotient(
    spec: &JetSpec,
    eqs: &EquationSystem,
) -> Result<Arc<Dga>> {
    let jet = jet_algebra(spec)?;
    let dim = spec.base_dim;
    let mut rules = Vec::new();
    for (i, f) in eqs.equations.iter().enumerate() {
        let Some((gen, deco)) = solitary_leading(f) else {
            return Err(Error::Precondition(format!(
                "equation {} has no solitary leading jet coordinate; cannot present the quotient by rewriting",
                i + 1
            )));
        };
        let lead_coeff = f
            .coeff(&Monomial::single(OGen {
                gen: gen.clone(),
                deco: deco.clone(),
            }))
            .coeff(&MultiIndex::zero(dim));
        // lower part: F = c·φ_lead + L  ⇒  φ_lead → -(1/c)·L
        let lead_elem = AlgElem::letter(
            dim,
            OGen {
                gen: gen.clone(),
                deco: deco.clone(),
            },
        )
        .scale(&lead_coeff);
        let lower = f.sub(&lead_elem);
        // prolong the rule to every order representable in the window
        for beta in MultiIndex::all_up_to(dim, spec.order.saturating_sub(deco.total())) {
            let head = OGen {
                gen: gen.clone(),
                deco: deco.add(&beta),
            };
            let rhs = jet
                .weyl_action(&WeylOp::d_pow(beta.clone()), &lower)?
                .scale(&(-&lead_coeff.inv()));
            rules.push(RewriteRule::new(
                Monomial::single(head),
                MultiIndex::zero(dim),
                rhs,
            )?);
        }
    }
    let gens = field_gens(spec);
    let diff: BTreeMap<GenId, AlgElem> = gens
        .iter()
        .map(|g| (g.clone(), AlgElem::zero(dim)))
        .collect();
    Ok(Arc::new(Dga::new(dim, gens, diff, rules)?))
}

/// The cofibrant replacement of the on-shell algebra in the coslice under
/// the jet algebra: the staged factorization of the quotient morphism
/// `J → J/(prolonged equations)`. The left morphism has the jet algebra as
/// its source, so the middle algebra has the shape `J ⊗ S(V)`.
pub fn kt_as_undercategory_replacement(
    spec: &JetSpec,
    eqs: &EquationSystem,
    budget: &EnumerationBudget,
) -> Result<(FactorizationResult, Arc<Dga>)> {
    let jet = jet_algebra(spec)?;
    let quotient = prolonged_quotient(spec, eqs)?;
    let assign = jet
        .gens()
        .iter()
        .map(|g| (g.clone(), AlgElem::gen(spec.base_dim, g.clone())))
        .collect();
    let phi = DgaMorphism::new(jet, quotient.clone(), assign)?;
    let fact = cof_trivfib(&phi, budget)?;
    Ok((fact, quotient))
}
