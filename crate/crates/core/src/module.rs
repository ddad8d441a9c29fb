//! Free non-negatively graded `D`-modules with well-ordered homogeneous
//! bases, their differentials, and the disc/sphere building blocks.

use crate::error::Error;
use crate::gens::{canonical_well_order, GenId, GenKind};
use crate::weyl::WeylOp;
use crate::Result;
use std::collections::BTreeMap;
use std::fmt;

/// An element `Σ D_α · v_α` of a free `D`-module.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModElem {
    dim: usize,
    terms: BTreeMap<GenId, WeylOp>,
}

impl ModElem {
    pub fn zero(dim: usize) -> Self {
        ModElem {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn gen(dim: usize, g: GenId) -> Self {
        ModElem::term(g, WeylOp::one(dim))
    }

    pub fn term(g: GenId, op: WeylOp) -> Self {
        let dim = op.dim();
        let mut terms = BTreeMap::new();
        if !op.is_zero() {
            terms.insert(g, op);
        }
        ModElem { dim, terms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GenId, &WeylOp)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, g: GenId, op: WeylOp) {
        if op.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(g)
            .or_insert_with(|| WeylOp::zero(self.dim));
        *entry = &*entry + &op;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &ModElem) -> ModElem {
        let mut out = self.clone();
        for (g, op) in &other.terms {
            out.add_term(g.clone(), op.clone());
        }
        out
    }

    pub fn neg(&self) -> ModElem {
        ModElem {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(g, op)| (g.clone(), op.scale(&crate::scalar::Scalar::from_int(-1))))
                .collect(),
        }
    }

    /// Left action of a Weyl operator.
    pub fn act(&self, op: &WeylOp) -> Result<ModElem> {
        let mut out = ModElem::zero(self.dim);
        for (g, d) in &self.terms {
            out.add_term(g.clone(), op.checked_mul(d)?);
        }
        Ok(out)
    }

    /// The common degree of all terms; `None` for zero.
    pub fn degree(&self) -> Result<Option<u32>> {
        let mut deg = None;
        for g in self.terms.keys() {
            match deg {
                None => deg = Some(g.degree),
                Some(d) if d == g.degree => {}
                Some(d) => {
                    return Err(Error::Inhomogeneous(format!(
                        "module element mixes degrees {} and {}",
                        d, g.degree
                    )))
                }
            }
        }
        Ok(deg)
    }
}

impl fmt::Display for ModElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(g, op)| {
                if op.is_one() {
                    format!("{}", g)
                } else {
                    format!("({})*{}", op, g)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A free non-negatively graded `D`-module with an ordered homogeneous basis
/// and a degree `-1` differential with `d² = 0` on every generator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FreeDgModule {
    dim: usize,
    gens: Vec<GenId>,
    diff: BTreeMap<GenId, ModElem>,
}

impl FreeDgModule {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gens(&self) -> &[GenId] {
        &self.gens
    }

    pub fn diff(&self, g: &GenId) -> ModElem {
        self.diff
            .get(g)
            .cloned()
            .unwrap_or_else(|| ModElem::zero(self.dim))
    }

    /// `D`-linear extension of the differential.
    pub fn apply_d(&self, e: &ModElem) -> Result<ModElem> {
        let mut out = ModElem::zero(self.dim);
        for (g, op) in e.terms() {
            let dg = self.diff(g);
            out = out.add(&dg.act(op)?);
        }
        Ok(out)
    }
}

/// The `n`-disc: generators `I` in degree `n` and `s⁻¹I` in degree `n-1` with
/// `d(I) = s⁻¹I`. For `n = 0` this is defined to be the `0`-sphere.
pub fn disc(dim: usize, n: i64) -> Result<FreeDgModule> {
    if n < 0 {
        return Err(Error::InvalidArgument(format!("disc degree {} < 0", n)));
    }
    if n == 0 {
        return sphere(dim, 0);
    }
    let name = format!("D{}", n);
    let top = GenId::named(GenKind::DiscTop, n as u32, 0, &name);
    let bottom = GenId::named(GenKind::DiscBottom, (n - 1) as u32, 0, &name);
    let mut assignment = BTreeMap::new();
    assignment.insert(top.clone(), ModElem::gen(dim, bottom.clone()));
    assignment.insert(bottom.clone(), ModElem::zero(dim));
    extend_differential(dim, vec![top, bottom], assignment)
}

/// The `n`-sphere: one generator in degree `n` with zero differential. For
/// `n = -1` this is the zero module.
pub fn sphere(dim: usize, n: i64) -> Result<FreeDgModule> {
    if n < -1 {
        return Err(Error::InvalidArgument(format!("sphere degree {} < -1", n)));
    }
    if n == -1 {
        return Ok(FreeDgModule {
            dim,
            gens: Vec::new(),
            diff: BTreeMap::new(),
        });
    }
    let g = GenId::named(GenKind::Sphere, n as u32, 0, &format!("S{}", n));
    let mut assignment = BTreeMap::new();
    assignment.insert(g.clone(), ModElem::zero(dim));
    extend_differential(dim, vec![g], assignment)
}

/// Extends a degree `-1` generator assignment to the unique `D`-linear
/// differential, after checking homogeneity and `d² = 0` on every generator.
pub fn extend_differential(
    dim: usize,
    gens: Vec<GenId>,
    assignment: BTreeMap<GenId, ModElem>,
) -> Result<FreeDgModule> {
    let gens = canonical_well_order(gens);
    for g in &gens {
        let dv = assignment
            .get(g)
            .ok_or_else(|| Error::MissingAssignment(g.to_string()))?;
        if let Some(d) = dv.degree()? {
            if g.degree == 0 || d != g.degree - 1 {
                return Err(Error::DegreeMismatch {
                    what: format!("d({})", g),
                    expected: if g.degree == 0 {
                        "zero".into()
                    } else {
                        format!("{}", g.degree - 1)
                    },
                    found: format!("{}", d),
                });
            }
        }
        for h in dv.terms().map(|(h, _)| h) {
            if !gens.contains(h) {
                return Err(Error::UnknownGenerator(h.to_string()));
            }
        }
    }
    let module = FreeDgModule {
        dim,
        gens,
        diff: assignment,
    };
    for g in &module.gens {
        let dd = module.apply_d(&module.diff(g))?;
        if !dd.is_zero() {
            return Err(Error::DSquared {
                gen: g.to_string(),
                residue: dd.to_string(),
            });
        }
    }
    Ok(module)
}

/// A degree 0 chain map between free `D`-modules, given by its values on the
/// source generators.
#[derive(Clone, Debug)]
pub struct ModMorphism {
    pub source: FreeDgModule,
    pub target: FreeDgModule,
    pub assign: BTreeMap<GenId, ModElem>,
}

impl ModMorphism {
    pub fn new(
        source: FreeDgModule,
        target: FreeDgModule,
        assign: BTreeMap<GenId, ModElem>,
    ) -> Result<Self> {
        for g in source.gens() {
            let img = assign
                .get(g)
                .ok_or_else(|| Error::MissingAssignment(g.to_string()))?;
            if let Some(d) = img.degree()? {
                if d != g.degree {
                    return Err(Error::DegreeMismatch {
                        what: format!("f({})", g),
                        expected: format!("{}", g.degree),
                        found: format!("{}", d),
                    });
                }
            }
        }
        let m = ModMorphism {
            source,
            target,
            assign,
        };
        for g in m.source.gens() {
            let lhs = m.apply(&m.source.diff(g))?;
            let rhs = m.target.apply_d(&m.assign[g])?;
            let residue = lhs.add(&rhs.neg());
            if !residue.is_zero() {
                return Err(Error::ChainMap {
                    gen: g.to_string(),
                    residue: residue.to_string(),
                });
            }
        }
        Ok(m)
    }

    pub fn apply(&self, e: &ModElem) -> Result<ModElem> {
        let mut out = ModElem::zero(self.target.dim());
        for (g, op) in e.terms() {
            let img = self
                .assign
                .get(g)
                .ok_or_else(|| Error::MissingAssignment(g.to_string()))?;
            out = out.add(&img.act(op)?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gens::GenKind;

    #[test]
    fn disc_shape() {
        let d1 = disc(1, 1).unwrap();
        assert_eq!(d1.gens().len(), 2);
        let degrees: Vec<u32> = d1.gens().iter().map(|g| g.degree).collect();
        assert_eq!(degrees, vec![0, 1]);
        let top = d1.gens()[1].clone();
        assert_eq!(d1.diff(&top), ModElem::gen(1, d1.gens()[0].clone()));
    }

    #[test]
    fn disc_zero_is_sphere_zero() {
        let d0 = disc(2, 0).unwrap();
        let s0 = sphere(2, 0).unwrap();
        assert_eq!(d0, s0);
    }

    #[test]
    fn d_squared_on_disc() {
        let d3 = disc(1, 3).unwrap();
        for g in d3.gens() {
            assert!(d3.apply_d(&d3.diff(g)).unwrap().is_zero());
        }
    }

    #[test]
    fn sphere_edges() {
        assert!(sphere(1, -1).unwrap().gens().is_empty());
        let s2 = sphere(0, 2).unwrap();
        assert_eq!(s2.gens().len(), 1);
        assert!(s2.diff(&s2.gens()[0]).is_zero());
        assert!(sphere(0, -2).is_err());
        assert!(disc(0, -1).is_err());
    }

    #[test]
    fn forced_d_squared_failure() {
        // d(g) = h, d(h) = k, d(k) = 0 forces d²(g) = k ≠ 0
        let g = GenId::named(GenKind::Sphere, 2, 0, "g");
        let h = GenId::named(GenKind::Sphere, 1, 0, "h");
        let k = GenId::named(GenKind::Sphere, 0, 0, "k");
        let mut assignment = BTreeMap::new();
        assignment.insert(g.clone(), ModElem::gen(0, h.clone()));
        assignment.insert(h.clone(), ModElem::gen(0, k.clone()));
        assignment.insert(k.clone(), ModElem::zero(0));
        let err = extend_differential(0, vec![g, h, k], assignment);
        assert!(matches!(err, Err(Error::DSquared { .. })));
    }

    #[test]
    fn all_zero_assignment() {
        let g = GenId::named(GenKind::Sphere, 1, 0, "g");
        let mut assignment = BTreeMap::new();
        assignment.insert(g.clone(), ModElem::zero(1));
        let m = extend_differential(1, vec![g.clone()], assignment).unwrap();
        assert!(m.diff(&g).is_zero());
    }
}
