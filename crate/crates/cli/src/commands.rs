//! Command implementations: each builds a [`RunReport`] or fails with a
//! [`SpecError`].

use crate::expr::parse_elem;
use crate::report::{ObjectSummary, RunReport, Status};
use crate::spec::{ProblemSpec, ResolvedSpec, SpecError};
use dgda::factorization::{
    cof_trivfib, cofibrant_replacement, functorial_square, minimal_variant, pushout_gen_cof,
    pushout_universal, trivcof_fib, verify_rsda, FactorizationResult,
};
use dgda::homology::{
    homology, is_fibration, is_weak_equivalence, ConeDegreeStatus, TruncatedComplex,
};
use dgda::koszul::{koszul_resolution, koszul_tate, kt_verify};
use dgda::morphism::DgaMorphism;
use dgda::Dga;


#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    TrivCofFib,
    CofTrivFib,
    Minimal,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ResolveKind {
    Koszul,
    KoszulTate,
    Cofibrant,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CheckKind {
    Rsda,
    Pushout,
    Square,
    DSquared,
}

/// Weight assignment for a Koszul complex: each generator weighs the total
/// degree of its (pure polynomial, homogeneous) differential value. `None`
/// when some value is not weight-homogeneous.
fn koszul_weights(
    k: &Dga,
) -> Option<std::collections::BTreeMap<dgda::GenId, u32>> {
    let mut weights = std::collections::BTreeMap::new();
    for g in k.gens() {
        let dv = k.diff_of(g);
        let mut weight = None;
        for (m, p) in dv.terms() {
            if !m.is_unit() {
                return None;
            }
            for (alpha, _) in p.terms() {
                match weight {
                    None => weight = Some(alpha.total()),
                    Some(w) if w == alpha.total() => {}
                    _ => return None,
                }
            }
        }
        weights.insert(g.clone(), weight.unwrap_or(0));
    }
    Some(weights)
}

fn summarize(report: &mut RunReport, name: &str, dga: &Dga) {
    report.objects.push(ObjectSummary {
        name: name.to_string(),
        generators: dga.gens().len(),
        relations: dga.relations().len(),
    });
}

/// The shared post-checks of a factorization: composite restriction, the
/// Sullivan recognizer on the left leg, surjectivity of the right leg, and
/// the homological class of the appropriate leg.
fn factorization_checks(
    report: &mut RunReport,
    resolved: &ResolvedSpec,
    phi: &DgaMorphism,
    fact: &FactorizationResult,
    mode: Mode,
) -> Result<(), SpecError> {
    let t = &resolved.truncation;
    let composite = fact.left.then(&fact.right)?;
    report.check_bool(
        "composite-restricts-to-phi",
        composite.agrees_with(phi)?,
        "right ∘ left = φ on generators",
    );
    let rsda = verify_rsda(&fact.left);
    report.check_bool(
        "left-is-rsda",
        rsda.passed(),
        format!(
            "base inclusion {}, well-ordered {}, lowering violations {}",
            rsda.base_inclusion_ok,
            rsda.well_ordered,
            rsda.lowering_violations.len()
        ),
    );
    let (surjective, fib) = is_fibration(&fact.right, t)?;
    let detail: Vec<String> = fib
        .per_degree
        .iter()
        .map(|d| format!("deg {}: rank {}/{}", d.degree, d.rank, d.target_dim))
        .collect();
    report.check_bool("right-is-fibration", surjective, detail.join(", "));
    match mode {
        Mode::TrivCofFib => {
            let (we, rep) = is_weak_equivalence(&fact.left, t)?;
            let inconclusive = rep
                .per_degree
                .iter()
                .any(|(_, s)| *s == ConeDegreeStatus::Inconclusive);
            let status = if !we {
                Status::Fail
            } else if inconclusive {
                Status::Inconclusive
            } else {
                Status::Pass
            };
            report.check(
                "left-is-weak-equivalence",
                status,
                format!("{:?}", rep.per_degree),
            );
        }
        Mode::CofTrivFib | Mode::Minimal => {
            let cone = TruncatedComplex::cone(&fact.right, t)?;
            let h = cone.homology();
            let mut failed = false;
            let mut inconclusive = false;
            let mut detail = Vec::new();
            for n in 0..t.max_degree {
                let d = h.at(n);
                if d.flagged {
                    inconclusive = true;
                    detail.push(format!("deg {}: ?", n));
                } else if d.h != 0 {
                    failed = true;
                    detail.push(format!("deg {}: H = {}", n, d.h));
                } else {
                    detail.push(format!("deg {}: 0", n));
                }
            }
            let status = if failed {
                Status::Fail
            } else if inconclusive {
                Status::Inconclusive
            } else {
                Status::Pass
            };
            report.check("right-cone-acyclic", status, detail.join(", "));
        }
    }
    report.stage_log = Some(fact.stage_log_json());
    Ok(())
}

pub fn cmd_factorize(
    resolved: &ResolvedSpec,
    mode: Mode,
    morphism: &str,
    stages: Option<u32>,
) -> Result<RunReport, SpecError> {
    let mode_name = match mode {
        Mode::TrivCofFib => "trivcof-fib",
        Mode::CofTrivFib => "cof-trivfib",
        Mode::Minimal => "minimal",
    };
    let mut report = RunReport::new(format!(
        "factorize --mode {} --morphism {}",
        mode_name, morphism
    ));
    let phi = resolved.morphism(morphism)?.clone();
    let target_name = &resolved.raw.morphisms[morphism].target;
    summarize(&mut report, target_name, &phi.target);
    let budget = resolved.build_budget(
        resolved.raw.budget.as_ref(),
        target_name,
        &phi.target,
        stages,
    )?;
    let fact = match mode {
        Mode::TrivCofFib => trivcof_fib(&phi, &budget)?,
        Mode::CofTrivFib => cof_trivfib(&phi, &budget)?,
        Mode::Minimal => minimal_variant(&phi, &budget)?,
    };
    summarize(&mut report, "middle", &fact.middle);
    factorization_checks(&mut report, resolved, &phi, &fact, mode)?;
    Ok(report)
}

pub fn cmd_homology(resolved: &ResolvedSpec, object: &str) -> Result<RunReport, SpecError> {
    let mut report = RunReport::new(format!("homology --object {}", object));
    let dga = resolved.object(object)?;
    summarize(&mut report, object, dga);
    let h = homology(dga, &resolved.truncation)?;
    let flagged = h.degrees.iter().any(|d| d.flagged);
    report.check(
        "window-complete",
        if flagged {
            Status::Inconclusive
        } else {
            Status::Pass
        },
        if flagged {
            "some degrees leak out of the window"
        } else {
            "no truncation leakage"
        },
    );
    report.homology = Some(h.to_json());
    Ok(report)
}

pub fn cmd_resolve(
    resolved: &ResolvedSpec,
    kind: ResolveKind,
    object: Option<&str>,
    stages: Option<u32>,
) -> Result<RunReport, SpecError> {
    match kind {
        ResolveKind::Koszul => {
            let mut report = RunReport::new("resolve --kind koszul".into());
            let syms = crate::expr::Symbols::new(resolved.dim);
            let gens: Result<Vec<_>, _> = resolved
                .raw
                .koszul
                .iter()
                .map(|s| parse_elem(s, &syms))
                .collect();
            let gens = gens?;
            if gens.is_empty() {
                return Err(SpecError::Parse("empty koszul generator list".into()));
            }
            let k = koszul_resolution(resolved.dim, &gens)?;
            summarize(&mut report, "koszul", &k);
            report.pass("d-squared", "δ² = 0 on all generators");
            // grade each antifield by the total degree of its equation; the
            // differential then preserves the weight and every block up to
            // the polynomial window is leak-free
            let weights = koszul_weights(&k);
            match weights {
                Some(weights) => {
                    let t = resolved.truncation;
                    let mut per_degree: Vec<(usize, usize, usize, bool)> =
                        vec![(0, 0, 0, false); t.max_degree as usize + 1];
                    for w in 0..=t.max_poly_degree {
                        let h = dgda::homology::homology_weighted(&k, &t, &weights, w)?;
                        for d in &h.degrees {
                            let slot = &mut per_degree[d.degree as usize];
                            slot.0 += d.ker;
                            slot.1 += d.im;
                            slot.2 += d.h;
                            slot.3 |= d.flagged;
                        }
                    }
                    let mut map = serde_json::Map::new();
                    let mut any_flag = false;
                    for (n, (ker, im, h, flagged)) in per_degree.iter().enumerate() {
                        any_flag |= flagged;
                        map.insert(
                            n.to_string(),
                            serde_json::json!({
                                "ker": ker, "im": im, "h": h, "flagged": flagged,
                            }),
                        );
                    }
                    report.check(
                        "window-complete",
                        if any_flag {
                            Status::Inconclusive
                        } else {
                            Status::Pass
                        },
                        "graded by total weight",
                    );
                    report.homology = Some(serde_json::Value::Object(map));
                }
                None => {
                    let h = homology(&k, &resolved.truncation)?;
                    let flagged = h.degrees.iter().any(|d| d.flagged);
                    report.check(
                        "window-complete",
                        if flagged {
                            Status::Inconclusive
                        } else {
                            Status::Pass
                        },
                        "ungraded window",
                    );
                    report.homology = Some(h.to_json());
                }
            }
            Ok(report)
        }
        ResolveKind::KoszulTate => {
            let mut report = RunReport::new("resolve --kind koszul-tate".into());
            let spec = resolved.jet_spec()?;
            let (eqs, syms) = resolved.equation_system()?;
            let noether = resolved.noether_set(&syms)?;
            let antifield_order = resolved
                .raw
                .jet
                .as_ref()
                .and_then(|j| j.antifield_order)
                .unwrap_or(spec.order);
            let kt = koszul_tate(&spec, &eqs, &noether, antifield_order)?;
            summarize(&mut report, "koszul-tate", &kt.dga);
            report.pass(
                "noether-identities",
                format!("{} identities verified", noether.identities.len()),
            );
            report.pass("d-squared", "δ² = 0 on all generators");
            let (h, cmp) = kt_verify(&kt, &resolved.truncation)?;
            let status = if cmp.skipped.is_some() {
                Status::Inconclusive
            } else if cmp.all_match() {
                Status::Pass
            } else {
                Status::Fail
            };
            report.check(
                "h0-matches-quotient",
                status,
                cmp.skipped.clone().unwrap_or_else(|| {
                    cmp.per_cutoff
                        .iter()
                        .map(|c| format!("d_x≤{}: {}={}", c.poly_cutoff, c.h0_dim, c.quotient_dim))
                        .collect::<Vec<_>>()
                        .join(", ")
                }),
            );
            let d1 = h.at(1);
            report.check(
                "h1-vanishes",
                if d1.flagged {
                    Status::Inconclusive
                } else if d1.h == 0 {
                    Status::Pass
                } else {
                    Status::Fail
                },
                format!("H_1 = {}{}", d1.h, if d1.flagged { " (flagged)" } else { "" }),
            );
            report.homology = Some(h.to_json());
            report.comparison = Some(serde_json::to_value(&cmp).expect("serializes"));
            Ok(report)
        }
        ResolveKind::Cofibrant => {
            let object = object.ok_or_else(|| {
                SpecError::Parse("--object is required for --kind cofibrant".into())
            })?;
            let mut report = RunReport::new(format!("resolve --kind cofibrant --object {}", object));
            let b = resolved.object(object)?.clone();
            summarize(&mut report, object, &b);
            let budget =
                resolved.build_budget(resolved.raw.budget.as_ref(), object, &b, stages)?;
            let fact = cofibrant_replacement(b, &budget)?;
            summarize(&mut report, "replacement", &fact.middle);
            let phi = DgaMorphism::from_initial(fact.right.target.clone())?;
            factorization_checks(&mut report, resolved, &phi, &fact, Mode::CofTrivFib)?;
            Ok(report)
        }
    }
}

pub fn cmd_verify(
    raw: ProblemSpec,
    check: CheckKind,
    morphism: Option<&str>,
    object: Option<&str>,
    stages: Option<u32>,
) -> Result<RunReport, SpecError> {
    // d-squared intercepts construction failures as check results
    if check == CheckKind::DSquared {
        let object =
            object.ok_or_else(|| SpecError::Parse("--check d-squared needs --object".into()))?;
        let mut report = RunReport::new(format!("verify --check d-squared --object {}", object));
        match raw.build_single_object(object) {
            Ok((dga, _)) => {
                summarize(&mut report, object, &dga);
                report.pass("d-squared", "d² = 0 on all generators");
            }
            Err(SpecError::Engine(dgda::Error::DSquared { gen, residue })) => {
                report.check(
                    "d-squared",
                    Status::Fail,
                    format!("d²({}) = {}", gen, residue),
                );
            }
            Err(other) => return Err(other),
        }
        return Ok(report);
    }
    let resolved = raw.resolve()?;
    match check {
        CheckKind::Rsda => {
            let morphism = morphism
                .ok_or_else(|| SpecError::Parse("--check rsda needs --morphism".into()))?;
            let mut report = RunReport::new(format!("verify --check rsda --morphism {}", morphism));
            let iota = resolved.morphism(morphism)?;
            let r = verify_rsda(iota);
            report.check_bool("base-inclusion", r.base_inclusion_ok, "");
            report.check_bool("well-ordered", r.well_ordered, "");
            report.check_bool(
                "lowering",
                r.lowering_violations.is_empty(),
                r.lowering_violations
                    .iter()
                    .map(|v| format!("d({}) uses {}", v.gen, v.uses))
                    .collect::<Vec<_>>()
                    .join(", "),
            );
            Ok(report)
        }
        CheckKind::Pushout => {
            let p = resolved
                .raw
                .pushout
                .as_ref()
                .ok_or_else(|| SpecError::Parse("missing pushout section".into()))?;
            let mut report = RunReport::new(format!(
                "verify --check pushout --degree {} --base {}",
                p.degree, p.base
            ));
            let base = resolved.object(&p.base)?.clone();
            summarize(&mut report, &p.base, &base);
            let kappa = parse_elem(&p.kappa, &resolved.symbols[&p.base])?;
            let data = pushout_gen_cof(p.degree, &base, &kappa)?;
            summarize(&mut report, "pushout", &data.middle);
            report.pass("d-squared", "differential of the pushout squares to zero");
            let i_prime = match &p.i_prime {
                Some(name) => resolved.morphism(name)?.clone(),
                None => data.incl.clone(),
            };
            let j_prime = match &p.j_prime {
                Some(name) => resolved.morphism(name)?.clone(),
                None => data.disc_map.clone(),
            };
            let chi = pushout_universal(&data, &i_prime, &j_prime)?;
            report.pass("universal-chi", "χ∘i = i' and χ∘j = j' on generators");
            let chi2 = pushout_universal(&data, &i_prime, &j_prime)?;
            report.check_bool("determinism", chi.agrees_with(&chi2)?, "two runs agree");
            Ok(report)
        }
        CheckKind::Square => {
            let s = resolved
                .raw
                .square
                .as_ref()
                .ok_or_else(|| SpecError::Parse("missing square section".into()))?;
            let mut report = RunReport::new(format!(
                "verify --check square --phi {} --phi2 {}",
                s.phi, s.phi2
            ));
            let u = resolved.morphism(&s.u)?.clone();
            let v = resolved.morphism(&s.v)?.clone();
            let phi = resolved.morphism(&s.phi)?.clone();
            let phi2 = resolved.morphism(&s.phi2)?.clone();
            let tname = &resolved.raw.morphisms[&s.phi].target;
            let tname2 = &resolved.raw.morphisms[&s.phi2].target;
            let budget =
                resolved.build_budget(resolved.raw.budget.as_ref(), tname, &phi.target, stages)?;
            let budget2 = resolved.build_budget(
                resolved
                    .raw
                    .budget2
                    .as_ref()
                    .or(resolved.raw.budget.as_ref()),
                tname2,
                &phi2.target,
                stages,
            )?;
            let f = cof_trivfib(&phi, &budget)?;
            let f2 = cof_trivfib(&phi2, &budget2)?;
            let omega = functorial_square(&u, &v, &f, &f2)?;
            report.pass("square-commutes", "ω∘j = j'∘u and q'∘ω = v∘q on generators");
            summarize(&mut report, "omega-source", &omega.source);
            summarize(&mut report, "omega-target", &omega.target);
            Ok(report)
        }
        CheckKind::DSquared => unreachable!(),
    }
}
