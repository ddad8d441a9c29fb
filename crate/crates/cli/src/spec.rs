//! Problem-specification format: a single JSON document describing the
//! coefficient configuration, objects, morphisms, budgets, and truncation.
//! Unknown fields are rejected so that fixtures stay in sync with the tool.

use crate::expr::{parse_elem, parse_monomial_head, ParseError, Symbols};
use dgda::factorization::EnumerationBudget;
use dgda::gens::{GenId, GenKind};
use dgda::homology::Truncation;
use dgda::jet::JetSpec;
use dgda::koszul::{EquationSystem, NoetherIdentity, NoetherSet};
use dgda::module::{disc, sphere};
use dgda::morphism::DgaMorphism;
use dgda::multiindex::MultiIndex;
use dgda::{AlgElem, Dga, RewriteRule};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub config: Config,
    pub truncation: TruncationSpec,
    #[serde(default)]
    pub objects: BTreeMap<String, ObjectSpec>,
    #[serde(default)]
    pub morphisms: BTreeMap<String, MorphismSpec>,
    #[serde(default)]
    pub budget: Option<BudgetSpec>,
    #[serde(default)]
    pub budget2: Option<BudgetSpec>,
    #[serde(default)]
    pub jet: Option<JetSpecInput>,
    #[serde(default)]
    pub equations: Vec<String>,
    #[serde(default)]
    pub noether: Vec<NoetherInput>,
    #[serde(default)]
    pub koszul: Vec<String>,
    #[serde(default)]
    pub pushout: Option<PushoutSpec>,
    #[serde(default)]
    pub square: Option<SquareSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub base_dim: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationSpec {
    pub degree: u32,
    pub poly_degree: u32,
    pub order: u32,
    pub word_length: u32,
}

impl TruncationSpec {
    pub fn to_truncation(&self) -> Truncation {
        Truncation::new(self.degree, self.poly_degree, self.order, self.word_length)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, tag = "type", rename_all = "kebab-case")]
pub enum ObjectSpec {
    /// The initial algebra `O` (no generators).
    Initial,
    /// The free algebra on one disc.
    FreeDisc { degree: i64 },
    /// The free algebra on one sphere.
    FreeSphere { degree: i64 },
    /// A presented algebra.
    Dga {
        #[serde(default)]
        generators: Vec<GeneratorSpec>,
        #[serde(default)]
        relations: Vec<RelationSpec>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: u32,
    #[serde(default)]
    pub differential: Option<String>,
    #[serde(default)]
    pub deco_cap: Option<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationSpec {
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpec {
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub assign: BTreeMap<String, String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetSpec {
    /// enumerate everything within the window from the target algebra
    #[serde(default)]
    pub auto: bool,
    #[serde(default)]
    pub elements: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub cycles: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub stages: u32,
    #[serde(default = "default_true")]
    pub auto_pairs: bool,
    /// window for budget enumeration; defaults to the spec truncation
    #[serde(default)]
    pub truncation: Option<TruncationSpec>,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JetSpecInput {
    pub fields: usize,
    pub order: u32,
    #[serde(default)]
    pub antifield_order: Option<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoetherInput {
    pub terms: Vec<NoetherTerm>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoetherTerm {
    pub eq: usize,
    #[serde(default)]
    pub deriv: Vec<u32>,
    pub coeff: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PushoutSpec {
    pub degree: u32,
    pub base: String,
    pub kappa: String,
    #[serde(default)]
    pub i_prime: Option<String>,
    #[serde(default)]
    pub j_prime: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SquareSpec {
    pub u: String,
    pub v: String,
    pub phi: String,
    pub phi2: String,
}

/// Everything resolved: built objects and morphisms keyed by name.
pub struct ResolvedSpec {
    pub dim: usize,
    pub truncation: Truncation,
    pub objects: BTreeMap<String, Arc<Dga>>,
    pub symbols: BTreeMap<String, Symbols>,
    pub morphisms: BTreeMap<String, DgaMorphism>,
    pub raw: ProblemSpec,
}

#[derive(Debug)]
pub enum SpecError {
    Parse(String),
    Engine(dgda::Error),
}

impl std::fmt::Display for SpecError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpecError::Parse(m) => write!(f, "parse error: {}", m),
            SpecError::Engine(e) => write!(f, "precondition failed: {}", e),
        }
    }
}

impl From<ParseError> for SpecError {
    fn from(e: ParseError) -> Self {
        SpecError::Parse(e.to_string())
    }
}

impl From<dgda::Error> for SpecError {
    fn from(e: dgda::Error) -> Self {
        SpecError::Engine(e)
    }
}

fn build_object(
    name: &str,
    spec: &ObjectSpec,
    dim: usize,
) -> Result<(Arc<Dga>, Symbols), SpecError> {
    match spec {
        ObjectSpec::Initial => Ok((Arc::new(Dga::initial(dim)), Symbols::new(dim))),
        ObjectSpec::FreeDisc { degree } => {
            let d = disc(dim, *degree)?;
            let dga = Dga::free_algebra(&d)?;
            let mut symbols = Symbols::new(dim);
            for g in dga.gens() {
                let key = if g.kind == GenKind::DiscTop {
                    "top".to_string()
                } else {
                    "bottom".to_string()
                };
                symbols.gens.insert(key, g.clone());
            }
            Ok((Arc::new(dga), symbols))
        }
        ObjectSpec::FreeSphere { degree } => {
            let s = sphere(dim, *degree)?;
            let dga = Dga::free_algebra(&s)?;
            let mut symbols = Symbols::new(dim);
            if let Some(g) = dga.gens().first() {
                symbols.gens.insert("gen".to_string(), g.clone());
            }
            Ok((Arc::new(dga), symbols))
        }
        ObjectSpec::Dga {
            generators,
            relations,
        } => {
            let mut symbols = Symbols::new(dim);
            let mut gens = Vec::new();
            for (ord, g) in generators.iter().enumerate() {
                if symbols.gens.contains_key(&g.name) {
                    return Err(SpecError::Parse(format!(
                        "object {}: duplicate generator name {}",
                        name, g.name
                    )));
                }
                let gid = GenId::named(GenKind::Sphere, g.degree, ord as u32, &g.name);
                symbols.gens.insert(g.name.clone(), gid.clone());
                gens.push(gid);
            }
            let mut diff = BTreeMap::new();
            for g in generators {
                let gid = symbols.gens[&g.name].clone();
                let value = match &g.differential {
                    Some(src) => parse_elem(src, &symbols)?,
                    None => AlgElem::zero(dim),
                };
                diff.insert(gid, value);
            }
            let mut rules = Vec::new();
            for r in relations {
                let (letters, base) = parse_monomial_head(&r.lhs, &symbols)?;
                let rhs = parse_elem(&r.rhs, &symbols)?;
                rules.push(RewriteRule::new(letters, base, rhs)?);
            }
            let mut dga = Dga::new(dim, gens, diff, rules)?;
            for g in generators {
                if let Some(cap) = g.deco_cap {
                    dga.set_deco_cap(symbols.gens[&g.name].clone(), cap);
                }
            }
            Ok((Arc::new(dga), symbols))
        }
    }
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<ProblemSpec, SpecError> {
        serde_json::from_str(text).map_err(|e| SpecError::Parse(e.to_string()))
    }

    /// Builds a single named object, surfacing engine errors (used by the
    /// `d-squared` check, which reports construction failures as findings
    /// rather than aborting).
    pub fn build_single_object(&self, name: &str) -> Result<(Arc<Dga>, Symbols), SpecError> {
        let ospec = self
            .objects
            .get(name)
            .ok_or_else(|| SpecError::Parse(format!("unknown object {}", name)))?;
        build_object(name, ospec, self.config.base_dim)
    }

    pub fn resolve(self) -> Result<ResolvedSpec, SpecError> {
        let dim = self.config.base_dim;
        let truncation = self.truncation.to_truncation();
        let mut objects = BTreeMap::new();
        let mut symbols = BTreeMap::new();
        for (name, ospec) in &self.objects {
            let (dga, syms) = build_object(name, ospec, dim)?;
            objects.insert(name.clone(), dga);
            symbols.insert(name.clone(), syms);
        }
        let mut morphisms = BTreeMap::new();
        for (name, mspec) in &self.morphisms {
            let source = objects
                .get(&mspec.source)
                .ok_or_else(|| {
                    SpecError::Parse(format!("morphism {}: unknown source {}", name, mspec.source))
                })?
                .clone();
            let target = objects
                .get(&mspec.target)
                .ok_or_else(|| {
                    SpecError::Parse(format!("morphism {}: unknown target {}", name, mspec.target))
                })?
                .clone();
            let src_syms = &symbols[&mspec.source];
            let tgt_syms = &symbols[&mspec.target];
            let mut assign = BTreeMap::new();
            for (gname, expr) in &mspec.assign {
                let gid = src_syms.gens.get(gname).ok_or_else(|| {
                    SpecError::Parse(format!(
                        "morphism {}: unknown source generator {}",
                        name, gname
                    ))
                })?;
                assign.insert(gid.clone(), parse_elem(expr, tgt_syms)?);
            }
            // unassigned generators are rejected by the engine with a clear
            // message; zero-fill only absent maps for the initial source
            morphisms.insert(name.clone(), DgaMorphism::new(source, target, assign)?);
        }
        Ok(ResolvedSpec {
            dim,
            truncation,
            objects,
            symbols,
            morphisms,
            raw: self,
        })
    }
}

impl ResolvedSpec {
    pub fn object(&self, name: &str) -> Result<&Arc<Dga>, SpecError> {
        self.objects
            .get(name)
            .ok_or_else(|| SpecError::Parse(format!("unknown object {}", name)))
    }

    pub fn morphism(&self, name: &str) -> Result<&DgaMorphism, SpecError> {
        self.morphisms
            .get(name)
            .ok_or_else(|| SpecError::Parse(format!("unknown morphism {}", name)))
    }

    /// Builds the enumeration budget for a factorization of a morphism into
    /// the named target object.
    pub fn build_budget(
        &self,
        spec: Option<&BudgetSpec>,
        target_name: &str,
        target: &Arc<Dga>,
        stages_override: Option<u32>,
    ) -> Result<EnumerationBudget, SpecError> {
        let t = spec
            .and_then(|b| b.truncation.as_ref())
            .map(|t| t.to_truncation())
            .unwrap_or(self.truncation);
        let mut budget = match spec {
            Some(b) if b.auto => EnumerationBudget::default_for(target, t, b.stages)?,
            Some(b) => {
                let syms = self.symbols.get(target_name).ok_or_else(|| {
                    SpecError::Parse(format!("unknown object {}", target_name))
                })?;
                let mut budget = EnumerationBudget::empty(t);
                budget.stages = b.stages;
                budget.auto_pairs = b.auto_pairs;
                for (deg, list) in &b.elements {
                    let n: u32 = deg
                        .parse()
                        .map_err(|_| SpecError::Parse(format!("bad budget degree {}", deg)))?;
                    let elems: Result<Vec<AlgElem>, ParseError> =
                        list.iter().map(|s| parse_elem(s, syms)).collect();
                    budget.elements.insert(n, elems?);
                }
                for (deg, list) in &b.cycles {
                    let n: u32 = deg
                        .parse()
                        .map_err(|_| SpecError::Parse(format!("bad budget degree {}", deg)))?;
                    let elems: Result<Vec<AlgElem>, ParseError> =
                        list.iter().map(|s| parse_elem(s, syms)).collect();
                    budget.cycles.insert(n, elems?);
                }
                budget
            }
            None => EnumerationBudget::empty(t),
        };
        if let Some(k) = stages_override {
            budget.stages = k;
        }
        Ok(budget)
    }

    pub fn jet_spec(&self) -> Result<JetSpec, SpecError> {
        let j = self
            .raw
            .jet
            .as_ref()
            .ok_or_else(|| SpecError::Parse("missing jet section".into()))?;
        Ok(JetSpec {
            base_dim: self.dim,
            num_fields: j.fields,
            order: j.order,
        })
    }

    /// Parses the equation list against the jet algebra's field symbols.
    pub fn equation_system(&self) -> Result<(EquationSystem, Symbols), SpecError> {
        let spec = self.jet_spec()?;
        let mut syms = Symbols::new(self.dim);
        for g in dgda::jet::field_gens(&spec) {
            let name = match &g.payload {
                dgda::gens::Payload::Name(n) => n.to_string(),
                _ => unreachable!("field generators are named"),
            };
            syms.gens.insert(name, g);
        }
        let equations: Result<Vec<AlgElem>, ParseError> = self
            .raw
            .equations
            .iter()
            .map(|s| parse_elem(s, &syms))
            .collect();
        Ok((
            EquationSystem {
                equations: equations?,
            },
            syms,
        ))
    }

    pub fn noether_set(&self, syms: &Symbols) -> Result<NoetherSet, SpecError> {
        let mut identities = Vec::new();
        for input in &self.raw.noether {
            let mut coeffs = Vec::new();
            for term in &input.terms {
                if term.deriv.len() != self.dim {
                    return Err(SpecError::Parse(format!(
                        "noether term derivative has length {}, base dimension is {}",
                        term.deriv.len(),
                        self.dim
                    )));
                }
                coeffs.push((
                    term.eq,
                    MultiIndex::new(term.deriv.clone()),
                    parse_elem(&term.coeff, syms)?,
                ));
            }
            identities.push(NoetherIdentity { coeffs });
        }
        Ok(NoetherSet { identities })
    }
}
