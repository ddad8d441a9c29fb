//! Morphisms of differential graded `D`-algebras, given by generator
//! assignments and extended multiplicatively and `D`-linearly.

use crate::algebra::{AlgElem, Degree, OGen};
use crate::dga::Dga;
use crate::error::Error;
use crate::gens::GenId;

use crate::weyl::WeylOp;
use crate::Result;
use std::collections::BTreeMap;
use std::sync::Arc;

/// A morphism of differential graded `D`-algebras. The generator assignment
/// commutes with the differentials; the unique extension respects products,
/// units, and the `D`-action.
#[derive(Clone, Debug)]
pub struct DgaMorphism {
    pub source: Arc<Dga>,
    pub target: Arc<Dga>,
    assign: BTreeMap<GenId, AlgElem>,
}

impl DgaMorphism {
    /// Builds the unique extension of a degree 0 generator assignment,
    /// verifying degrees and the chain-map condition on every generator.
    pub fn new(
        source: Arc<Dga>,
        target: Arc<Dga>,
        assign: BTreeMap<GenId, AlgElem>,
    ) -> Result<Self> {
        let m = DgaMorphism::new_unchecked(source, target, assign)?;
        for g in m.source.gens() {
            let lhs = m.target.apply_d(&m.assign[g])?;
            let rhs = m.apply(&m.source.diff_of(g))?;
            let residue = lhs.sub(&rhs);
            if !residue.is_zero() {
                return Err(Error::ChainMap {
                    gen: g.to_string(),
                    residue: residue.to_string(),
                });
            }
        }
        Ok(m)
    }

    /// Validates degrees and membership but not the chain-map condition.
    pub fn new_unchecked(
        source: Arc<Dga>,
        target: Arc<Dga>,
        assign: BTreeMap<GenId, AlgElem>,
    ) -> Result<Self> {
        let mut normalized = BTreeMap::new();
        for g in source.gens() {
            let img = assign
                .get(g)
                .ok_or_else(|| Error::MissingAssignment(g.to_string()))?;
            target.check_element(img)?;
            let img = target.reduce(img);
            match img.degree() {
                Degree::Zero => {}
                Degree::Homogeneous(d) if d == g.degree => {}
                Degree::Homogeneous(d) => {
                    return Err(Error::DegreeMismatch {
                        what: format!("image of {}", g),
                        expected: format!("{}", g.degree),
                        found: format!("{}", d),
                    });
                }
                Degree::Mixed => {
                    return Err(Error::Inhomogeneous(format!("image of {}", g)));
                }
            }
            normalized.insert(g.clone(), img);
        }
        Ok(DgaMorphism {
            source,
            target,
            assign: normalized,
        })
    }

    /// The identity morphism.
    pub fn identity(a: Arc<Dga>) -> Result<Self> {
        let assign = a
            .gens()
            .iter()
            .map(|g| (g.clone(), AlgElem::gen(a.dim(), g.clone())))
            .collect();
        DgaMorphism::new(a.clone(), a, assign)
    }

    /// The unique morphism out of the initial algebra `O`.
    pub fn from_initial(target: Arc<Dga>) -> Result<Self> {
        DgaMorphism::new(
            Arc::new(Dga::initial(target.dim())),
            target,
            BTreeMap::new(),
        )
    }

    pub fn assigned(&self, g: &GenId) -> Option<&AlgElem> {
        self.assign.get(g)
    }

    pub fn assignment(&self) -> &BTreeMap<GenId, AlgElem> {
        &self.assign
    }

    /// Image of a decorated letter: `f(∂^β · v) = ∂^β · f(v)`.
    fn apply_letter(&self, l: &OGen) -> Result<AlgElem> {
        let img = self
            .assign
            .get(&l.gen)
            .ok_or_else(|| Error::MissingAssignment(l.gen.to_string()))?;
        if l.deco.is_zero() {
            return Ok(img.clone());
        }
        self.target
            .weyl_action(&WeylOp::d_pow(l.deco.clone()), img)
    }

    pub fn apply(&self, e: &AlgElem) -> Result<AlgElem> {
        let mut out = AlgElem::zero(self.target.dim());
        for (m, p) in e.terms() {
            let mut acc = AlgElem::from_poly(p.clone());
            for l in m.letters() {
                acc = self.target.mul(&acc, &self.apply_letter(l)?);
                if acc.is_zero() {
                    break;
                }
            }
            out = out.add(&acc);
        }
        Ok(self.target.reduce(&out))
    }

    /// Composition `other ∘ self`.
    pub fn then(&self, other: &DgaMorphism) -> Result<DgaMorphism> {
        let mut assign = BTreeMap::new();
        for (g, img) in &self.assign {
            assign.insert(g.clone(), other.apply(img)?);
        }
        DgaMorphism::new_unchecked(self.source.clone(), other.target.clone(), assign)
    }

    /// Checks `self == other` on all generators of the common source.
    pub fn agrees_with(&self, other: &DgaMorphism) -> Result<bool> {
        for g in self.source.gens() {
            let a = self
                .assign
                .get(g)
                .ok_or_else(|| Error::MissingAssignment(g.to_string()))?;
            let b = other
                .assign
                .get(g)
                .ok_or_else(|| Error::MissingAssignment(g.to_string()))?;
            if self.target.reduce(a) != other.target.reduce(b) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Lemma-style unique extension: checks the preconditions and returns the
/// extension, reporting the offending generator on failure.
pub fn extend_morphism(
    assign: BTreeMap<GenId, AlgElem>,
    source: Arc<Dga>,
    target: Arc<Dga>,
) -> Result<DgaMorphism> {
    DgaMorphism::new(source, target, assign)
}

/// The generator named by a single-letter image under a tensor inclusion.
fn inclusion_image_gen(e: &AlgElem) -> Option<GenId> {
    let mut terms = e.terms();
    let (m, p) = terms.next()?;
    if terms.next().is_some() || m.len() != 1 || !p.is_one() {
        return None;
    }
    let letter = &m.letters()[0];
    if !letter.deco.is_zero() {
        return None;
    }
    Some(letter.gen.clone())
}

/// The morphism `A ⊗ B → C` determined by `χ(a ⊗ b) = φ(a) ⋆ ψ(b)` for
/// morphisms `φ: A → C`, `ψ: B → C` with common target. The tensor product
/// is addressed through its two inclusions (which carry the generator
/// renaming, if any).
pub fn product_morphism(
    incl_a: &DgaMorphism,
    incl_b: &DgaMorphism,
    phi: &DgaMorphism,
    psi: &DgaMorphism,
) -> Result<DgaMorphism> {
    if !Arc::ptr_eq(&phi.target, &psi.target) && phi.target != psi.target {
        return Err(Error::TargetMismatch);
    }
    let tensor = incl_a.target.clone();
    let mut assign = BTreeMap::new();
    for (incl, side) in [(incl_a, phi), (incl_b, psi)] {
        for g in side.source.gens() {
            let img = incl
                .assigned(g)
                .ok_or_else(|| Error::MissingAssignment(g.to_string()))?;
            let tg = inclusion_image_gen(img).ok_or_else(|| {
                Error::Precondition(format!("inclusion image of {} is not a generator", g))
            })?;
            assign.insert(
                tg,
                side.assigned(g)
                    .ok_or_else(|| Error::MissingAssignment(g.to_string()))?
                    .clone(),
            );
        }
    }
    DgaMorphism::new(tensor, phi.target.clone(), assign)
}

/// The tensor product `A ⊗ B` in the category of differential graded
/// `D`-algebras: the algebra on the disjoint union of generators with the
/// split differential. Returns the two canonical inclusions. Generators of
/// `B` that collide with generators of `A` are re-labelled with fresh
/// ordinals.
pub fn tensor_algebra(a: &Dga, b: &Dga) -> Result<(Arc<Dga>, DgaMorphism, DgaMorphism)> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let dim = a.dim();
    let mut gens = a.gens().to_vec();
    let mut rename: BTreeMap<GenId, GenId> = BTreeMap::new();
    let mut max_ordinal: u32 = a
        .gens()
        .iter()
        .chain(b.gens().iter())
        .map(|g| g.ordinal)
        .max()
        .unwrap_or(0);
    for g in b.gens() {
        let fresh = if a.contains_gen(g) {
            max_ordinal += 1;
            GenId::new(g.kind, g.degree, max_ordinal, g.payload.clone())
        } else {
            g.clone()
        };
        rename.insert(g.clone(), fresh.clone());
        gens.push(fresh);
    }
    let rename_elem = |e: &AlgElem| -> AlgElem {
        let mut out = AlgElem::zero(dim);
        for (m, p) in e.terms() {
            let letters: Vec<OGen> = m
                .letters()
                .iter()
                .map(|l| OGen {
                    gen: rename.get(&l.gen).cloned().unwrap_or_else(|| l.gen.clone()),
                    deco: l.deco.clone(),
                })
                .collect();
            if let Some((mono, neg)) = crate::algebra::Monomial::from_letters(letters) {
                out.add_term(mono, if neg { -&p.clone() } else { p.clone() });
            }
        }
        out
    };
    let mut diff = BTreeMap::new();
    for g in a.gens() {
        diff.insert(g.clone(), a.diff_of(g));
    }
    for g in b.gens() {
        diff.insert(rename[g].clone(), rename_elem(&b.diff_of(g)));
    }
    let mut relations = a.relations().to_vec();
    for r in b.relations() {
        relations.push(crate::dga::RewriteRule {
            lhs_letters: {
                let letters: Vec<OGen> = r
                    .lhs_letters
                    .letters()
                    .iter()
                    .map(|l| OGen {
                        gen: rename.get(&l.gen).cloned().unwrap_or_else(|| l.gen.clone()),
                        deco: l.deco.clone(),
                    })
                    .collect();
                crate::algebra::Monomial::from_letters(letters)
                    .expect("rule head stays a normal form")
                    .0
            },
            lhs_base: r.lhs_base.clone(),
            rhs: rename_elem(&r.rhs),
        });
    }
    let mut tensor = Dga::new(dim, gens, diff, relations)?;
    for g in a.gens() {
        if let Some(c) = a.deco_cap(g) {
            tensor.set_deco_cap(g.clone(), c);
        }
    }
    for g in b.gens() {
        if let Some(c) = b.deco_cap(g) {
            tensor.set_deco_cap(rename[g].clone(), c);
        }
    }
    let tensor = Arc::new(tensor);
    let incl_a = DgaMorphism::new(
        Arc::new(a.clone()),
        tensor.clone(),
        a.gens()
            .iter()
            .map(|g| (g.clone(), AlgElem::gen(dim, g.clone())))
            .collect(),
    )?;
    let incl_b = DgaMorphism::new(
        Arc::new(b.clone()),
        tensor.clone(),
        b.gens()
            .iter()
            .map(|g| (g.clone(), AlgElem::gen(dim, rename[g].clone())))
            .collect(),
    )?;
    Ok((tensor, incl_a, incl_b))
}

/// Extension data of a relative Sullivan algebra step: `T ⊗ S(V)` with the
/// differential of each new generator a prescribed cycle of `T`.
pub fn rsda_extend_differential(
    t: &Dga,
    new_gens: &[GenId],
    dvals: &BTreeMap<GenId, AlgElem>,
) -> Result<Dga> {
    let dim = t.dim();
    let mut gens = t.gens().to_vec();
    let mut diff: BTreeMap<GenId, AlgElem> = t
        .gens()
        .iter()
        .map(|g| (g.clone(), t.diff_of(g)))
        .collect();
    for g in new_gens {
        if t.contains_gen(g) {
            return Err(Error::Precondition(format!(
                "generator {} already present in the base algebra",
                g
            )));
        }
        let dv = dvals
            .get(g)
            .cloned()
            .unwrap_or_else(|| AlgElem::zero(dim));
        // the value must lie in T …
        for h in dv.support() {
            if !t.contains_gen(h) {
                return Err(Error::NotInBase {
                    gen: g.to_string(),
                    unknown: h.to_string(),
                });
            }
        }
        // … have the right degree …
        match dv.degree() {
            Degree::Zero => {}
            Degree::Homogeneous(d) if g.degree > 0 && d == g.degree - 1 => {}
            _ => {
                return Err(Error::DegreeMismatch {
                    what: format!("d({})", g),
                    expected: if g.degree == 0 {
                        "zero".into()
                    } else {
                        format!("{}", g.degree - 1)
                    },
                    found: format!("{:?}", dv.degree()),
                });
            }
        }
        // … and be a d_T-cycle
        let ddv = t.apply_d(&dv)?;
        if !ddv.is_zero() {
            return Err(Error::NotACycle {
                gen: g.to_string(),
                residue: ddv.to_string(),
            });
        }
        gens.push(g.clone());
        diff.insert(g.clone(), dv);
    }
    let mut out = Dga::new(dim, gens, diff, t.relations().to_vec())?;
    for g in t.gens() {
        if let Some(c) = t.deco_cap(g) {
            out.set_deco_cap(g.clone(), c);
        }
    }
    Ok(out)
}

/// Extends a morphism `p: T → B` over `T ⊗ S(V)` by generator values `q(g)`
/// with `d_B q(g) = p(d g)`.
pub fn rsda_extend_morphism(
    extended: Arc<Dga>,
    p: &DgaMorphism,
    qvals: &BTreeMap<GenId, AlgElem>,
) -> Result<DgaMorphism> {
    let b = p.target.clone();
    let mut assign: BTreeMap<GenId, AlgElem> = p.assignment().clone();
    for g in extended.gens() {
        if p.source.contains_gen(g) {
            continue;
        }
        let qg = qvals
            .get(g)
            .ok_or_else(|| Error::MissingAssignment(g.to_string()))?;
        b.check_element(qg)?;
        match b.reduce(qg).degree() {
            Degree::Zero => {}
            Degree::Homogeneous(d) if d == g.degree => {}
            _ => {
                return Err(Error::DegreeMismatch {
                    what: format!("q({})", g),
                    expected: format!("{}", g.degree),
                    found: format!("{:?}", qg.degree()),
                });
            }
        }
        // chain condition relative to p
        let dg = extended.diff_of(g);
        let pd = p.apply(&dg)?;
        let dq = b.apply_d(qg)?;
        let residue = dq.sub(&pd);
        if !residue.is_zero() {
            return Err(Error::ChainMap {
                gen: g.to_string(),
                residue: residue.to_string(),
            });
        }
        assign.insert(g.clone(), qg.clone());
    }
    DgaMorphism::new(extended, b, assign)
}

/// A conservative check that `f` maps each generator of its source to the
/// corresponding generator of its target (an inclusion `a ↦ a ⊗ 1`).
pub fn is_canonical_inclusion(f: &DgaMorphism) -> bool {
    f.source.gens().iter().all(|g| {
        f.assigned(g)
            .map(|img| *img == AlgElem::gen(f.target.dim(), g.clone()))
            .unwrap_or(false)
    })
}
