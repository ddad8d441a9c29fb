//! Finitely presented differential graded `D`-algebras: free algebras on
//! decorated generators, optional monomial-headed rewrite rules, and the
//! derivation/`D`-linear extension machinery of their differentials.

use crate::algebra::{AlgElem, Degree, Monomial, OGen};
use crate::error::Error;
use crate::gens::{canonical_well_order, GenId, PayloadElem};
use crate::module::FreeDgModule;
use crate::multiindex::MultiIndex;
use crate::poly::Poly;

use crate::weyl::WeylOp;
use crate::Result;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

/// A rewrite rule `lhs → rhs` presenting a quotient. The left-hand side is a
/// full monomial (generator letters times a base monomial `x^α`); the rule
/// must strictly decrease the degree-lexicographic monomial order, which
/// guarantees termination of reduction. Confluence is the caller's
/// responsibility.
#[derive(Clone, PartialEq, Debug)]
pub struct RewriteRule {
    pub lhs_letters: Monomial,
    pub lhs_base: MultiIndex,
    pub rhs: AlgElem,
}

/// Order key for full monomials: total size first (base degree plus letters
/// with their decorations), then the letter word, then the base exponent.
fn monomial_key(m: &Monomial, base: &MultiIndex) -> (u32, Vec<OGen>, MultiIndex) {
    let total = base.total()
        + m.letters()
            .iter()
            .map(|l| 1 + l.deco.total())
            .sum::<u32>();
    (total, m.letters().to_vec(), base.clone())
}

impl RewriteRule {
    pub fn new(lhs_letters: Monomial, lhs_base: MultiIndex, rhs: AlgElem) -> Result<Self> {
        let lhs_key = monomial_key(&lhs_letters, &lhs_base);
        if lhs_key.0 == 0 {
            return Err(Error::NonTerminatingRule(
                "left-hand side is the unit monomial".into(),
            ));
        }
        // rules present a homogeneous quotient: both sides carry one degree
        match rhs.degree() {
            crate::algebra::Degree::Zero => {}
            crate::algebra::Degree::Homogeneous(d) if d == lhs_letters.degree() => {}
            other => {
                return Err(Error::DegreeMismatch {
                    what: format!("rewrite rule {} -> {}", lhs_letters, rhs),
                    expected: format!("{}", lhs_letters.degree()),
                    found: format!("{:?}", other),
                });
            }
        }
        for (m, p) in rhs.terms() {
            for (alpha, _) in p.terms() {
                if monomial_key(m, alpha) >= lhs_key {
                    return Err(Error::NonTerminatingRule(format!(
                        "{} * {} does not decrease below the head",
                        m, alpha
                    )));
                }
            }
        }
        Ok(RewriteRule {
            lhs_letters,
            lhs_base,
            rhs,
        })
    }

    /// Kills the base variable `x_{i+1}`.
    pub fn kill_var(dim: usize, i: usize) -> Self {
        RewriteRule {
            lhs_letters: Monomial::unit(),
            lhs_base: MultiIndex::unit(dim, i),
            rhs: AlgElem::zero(dim),
        }
    }

    /// Rewrites a single decorated generator letter to `rhs`.
    pub fn rewrite_letter(letter: OGen, rhs: AlgElem) -> Result<Self> {
        let dim = rhs.dim();
        RewriteRule::new(Monomial::single(letter), MultiIndex::zero(dim), rhs)
    }
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = self.lhs_base.display_with("x");
        if base.is_empty() {
            write!(f, "{} -> {}", self.lhs_letters, self.rhs)
        } else if self.lhs_letters.is_unit() {
            write!(f, "{} -> {}", base, self.rhs)
        } else {
            write!(f, "{}*{} -> {}", base, self.lhs_letters, self.rhs)
        }
    }
}

/// A finitely presented differential graded `D`-algebra. The differential is
/// stored on generators and extended as a degree `-1` graded derivation,
/// `D`-linearly over decorations; `d² = 0` is checked on every generator at
/// construction time.
#[derive(Clone, PartialEq, Debug)]
pub struct Dga {
    dim: usize,
    gens: Vec<GenId>,
    gen_set: BTreeSet<GenId>,
    diff: BTreeMap<GenId, AlgElem>,
    relations: Vec<RewriteRule>,
    /// Decoration caps: a generator mapped to `0` spans only an `O`-module
    /// (no derivative decorations), as in classical Koszul complexes.
    deco_caps: BTreeMap<GenId, u32>,
}

impl Dga {
    /// The initial algebra `O` (no generators).
    pub fn initial(dim: usize) -> Self {
        Dga {
            dim,
            gens: Vec::new(),
            gen_set: BTreeSet::new(),
            diff: BTreeMap::new(),
            relations: Vec::new(),
            deco_caps: BTreeMap::new(),
        }
    }

    pub fn new(
        dim: usize,
        gens: Vec<GenId>,
        diff: BTreeMap<GenId, AlgElem>,
        relations: Vec<RewriteRule>,
    ) -> Result<Self> {
        let gens = canonical_well_order(gens);
        let gen_set: BTreeSet<GenId> = gens.iter().cloned().collect();
        let mut dga = Dga {
            dim,
            gens,
            gen_set,
            diff: BTreeMap::new(),
            relations,
            deco_caps: BTreeMap::new(),
        };
        // normalize differentials against the relations, then validate
        for g in dga.gens.clone() {
            let raw = diff
                .get(&g)
                .cloned()
                .unwrap_or_else(|| AlgElem::zero(dim));
            let dv = dga.reduce(&raw);
            for h in dv.support() {
                if !dga.gen_set.contains(h) {
                    return Err(Error::UnknownGenerator(h.to_string()));
                }
            }
            match dv.degree() {
                Degree::Zero => {}
                Degree::Homogeneous(d) if g.degree > 0 && d == g.degree - 1 => {}
                Degree::Homogeneous(d) => {
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
                Degree::Mixed => return Err(Error::Inhomogeneous(format!("d({})", g))),
            }
            dga.diff.insert(g, dv);
        }
        for g in &dga.gens {
            let dd = dga.apply_d(&dga.diff[g])?;
            if !dd.is_zero() {
                return Err(Error::DSquared {
                    gen: g.to_string(),
                    residue: dd.to_string(),
                });
            }
        }
        Ok(dga)
    }

    /// The free differential graded `D`-algebra `S(V)` on a free module.
    pub fn free_algebra(v: &FreeDgModule) -> Result<Self> {
        let dim = v.dim();
        let mut diff = BTreeMap::new();
        for g in v.gens() {
            diff.insert(g.clone(), mod_elem_to_alg(dim, &v.diff(g))?);
        }
        Dga::new(dim, v.gens().to_vec(), diff, Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gens(&self) -> &[GenId] {
        &self.gens
    }

    pub fn contains_gen(&self, g: &GenId) -> bool {
        self.gen_set.contains(g)
    }

    pub fn relations(&self) -> &[RewriteRule] {
        &self.relations
    }

    pub fn deco_cap(&self, g: &GenId) -> Option<u32> {
        self.deco_caps.get(g).copied()
    }

    pub fn set_deco_cap(&mut self, g: GenId, cap: u32) {
        self.deco_caps.insert(g, cap);
    }

    pub fn diff_of(&self, g: &GenId) -> AlgElem {
        self.diff
            .get(g)
            .cloned()
            .unwrap_or_else(|| AlgElem::zero(self.dim))
    }

    /// Checks that an element only uses generators of this algebra.
    pub fn check_element(&self, e: &AlgElem) -> Result<()> {
        if e.dim() != self.dim {
            return Err(Error::DimensionMismatch(self.dim, e.dim()));
        }
        for g in e.support() {
            if !self.gen_set.contains(g) {
                return Err(Error::UnknownGenerator(g.to_string()));
            }
        }
        Ok(())
    }

    /// Reduces an element to normal form modulo the relations. Rules are
    /// applied first-rule-first, leftmost term first; termination is
    /// guaranteed by the strict order decrease of every rule.
    pub fn reduce(&self, e: &AlgElem) -> AlgElem {
        if self.relations.is_empty() {
            return e.clone();
        }
        let mut out = AlgElem::zero(self.dim);
        let mut work: Vec<(Monomial, Poly)> =
            e.terms().map(|(m, p)| (m.clone(), p.clone())).collect();
        while let Some((mono, poly)) = work.pop() {
            // split the polynomial coefficient per exponent so rules can
            // consume base variables
            let mut irreducible = Poly::zero(self.dim);
            for (alpha, c) in poly.terms() {
                let mut applied = false;
                for rule in &self.relations {
                    if let Some(rest_base) = alpha.checked_sub(&rule.lhs_base) {
                        if let Some((rest, negative)) = mono.extract(&rule.lhs_letters) {
                            let mut c = c.clone();
                            if negative {
                                c = -c;
                            }
                            let cofactor = AlgElem::term(
                                self.dim,
                                rest,
                                Poly::monomial(rest_base, c),
                            );
                            // the extraction sign moved the head to the
                            // front, so the replacement multiplies from the
                            // left
                            let replaced = rule.rhs.free_mul(&cofactor);
                            work.extend(
                                replaced.terms().map(|(m, p)| (m.clone(), p.clone())),
                            );
                            applied = true;
                            break;
                        }
                    }
                }
                if !applied {
                    irreducible.add_term(alpha.clone(), c.clone());
                }
            }
            out.add_term(mono, irreducible);
        }
        out
    }

    /// Graded-commutative product in this algebra (reduced).
    pub fn mul(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        self.reduce(&a.free_mul(b))
    }

    pub fn mul_all(&self, factors: &[AlgElem]) -> AlgElem {
        let mut acc = AlgElem::one(self.dim);
        for f in factors {
            acc = self.mul(&acc, f);
        }
        acc
    }

    /// The action of the vector field `∂_{i+1}` as a degree 0 derivation:
    /// on polynomial coefficients as the partial derivative, on decorated
    /// letters by bumping the decoration.
    pub fn theta(&self, i: usize, e: &AlgElem) -> Result<AlgElem> {
        let mut out = AlgElem::zero(self.dim);
        for (m, p) in e.terms() {
            out.add_term(m.clone(), p.derivative(i));
            for pos in 0..m.letters().len() {
                let letter = &m.letters()[pos];
                if let Some(cap) = self.deco_cap(&letter.gen) {
                    if letter.deco.total() + 1 > cap {
                        return Err(Error::WindowExit {
                            what: format!("theta action on {}", letter),
                            found: letter.deco.total() + 1,
                            bound: cap,
                        });
                    }
                }
                let bumped = OGen {
                    gen: letter.gen.clone(),
                    deco: letter.deco.bump(i),
                };
                let mut letters = m.letters().to_vec();
                letters[pos] = bumped;
                if let Some((mono, negative)) = Monomial::from_letters(letters) {
                    out.add_term(mono, if negative { -p } else { p.clone() });
                }
            }
        }
        Ok(self.reduce(&out))
    }

    /// The action of a full Weyl operator, decomposed into `x`-multiplications
    /// and iterated vector-field actions.
    pub fn weyl_action(&self, op: &WeylOp, e: &AlgElem) -> Result<AlgElem> {
        if op.dim() != self.dim {
            return Err(Error::DimensionMismatch(self.dim, op.dim()));
        }
        let mut out = AlgElem::zero(self.dim);
        for ((alpha, beta), c) in op.terms() {
            let mut cur = e.clone();
            for i in 0..self.dim {
                for _ in 0..beta.get(i) {
                    cur = self.theta(i, &cur)?;
                }
            }
            let scaled = cur.scale_poly(&Poly::monomial(alpha.clone(), c.clone()));
            out = out.add(&scaled);
        }
        Ok(self.reduce(&out))
    }

    /// Differential of a decorated letter: `d(∂^β · v) = ∂^β · d(v)`.
    fn d_letter(&self, l: &OGen) -> Result<AlgElem> {
        let dv = self.diff_of(&l.gen);
        if dv.is_zero() {
            return Ok(dv);
        }
        self.weyl_action(&WeylOp::d_pow(l.deco.clone()), &dv)
    }

    /// The differential, extended as a degree `-1` graded derivation and
    /// `D`-linearly over decorations.
    pub fn apply_d(&self, e: &AlgElem) -> Result<AlgElem> {
        let mut out = AlgElem::zero(self.dim);
        for (m, p) in e.terms() {
            let letters = m.letters();
            let mut sign_neg = false;
            for pos in 0..letters.len() {
                let dl = self.d_letter(&letters[pos])?;
                if !dl.is_zero() {
                    let prefix = Monomial::from_letters(letters[..pos].to_vec())
                        .expect("prefix of a normal form is a normal form")
                        .0;
                    let suffix = Monomial::from_letters(letters[pos + 1..].to_vec())
                        .expect("suffix of a normal form is a normal form")
                        .0;
                    let mut term = AlgElem::term(self.dim, prefix, p.clone());
                    term = term.free_mul(&dl);
                    term = term.free_mul(&AlgElem::term(
                        self.dim,
                        suffix,
                        Poly::one(self.dim),
                    ));
                    out = out.add(&if sign_neg { term.neg() } else { term });
                }
                if letters[pos].is_odd() {
                    sign_neg = !sign_neg;
                }
            }
        }
        Ok(self.reduce(&out))
    }

    /// Freezes the normal form of an element into a content-addressed payload.
    pub fn intern(&self, e: &AlgElem) -> Arc<PayloadElem> {
        let n = self.reduce(e);
        PayloadElem::new(n.canonical_bytes(), n.to_string())
    }
}

/// Injects a free-module element `Σ D_α · v_α` into the free algebra: each
/// `c · x^α ∂^β · v` becomes the monomial `∂^β(v)` with coefficient `c x^α`.
pub fn mod_elem_to_alg(dim: usize, e: &crate::module::ModElem) -> Result<AlgElem> {
    let mut out = AlgElem::zero(dim);
    for (g, op) in e.terms() {
        for ((alpha, beta), c) in op.terms() {
            let letter = OGen {
                gen: g.clone(),
                deco: beta.clone(),
            };
            out.add_term(
                Monomial::single(letter),
                Poly::monomial(alpha.clone(), c.clone()),
            );
        }
    }
    Ok(out)
}

/// Graded-commutative product of two elements of the same ambient algebra.
pub fn sym_mul(ambient: &Dga, a: &AlgElem, b: &AlgElem) -> Result<AlgElem> {
    ambient.check_element(a)?;
    ambient.check_element(b)?;
    Ok(ambient.mul(a, b))
}

/// The action of a differential operator on an algebra element: vector-field
/// factors act as degree-0 derivations, function factors multiply.
pub fn theta_action(ambient: &Dga, op: &WeylOp, a: &AlgElem) -> Result<AlgElem> {
    ambient.check_element(a)?;
    ambient.weyl_action(op, a)
}
