use std::collections::{BTreeMap, BTreeSet};

use gq_core::cohomology::{
    bott_cohomology, deformation_number, hodge_linear_section, hodge_q1_model, involution_quotient,
    normal_map_rank, omega_decompose, quotient_invariants, surface_from_hilbert, CohomologyError,
    FixedDatum, NumericalInvariants, ZeroLocus,
};
use gq_core::exactfield::{Cyclotomic, ExactMatrix, Field, PrimeField, Rationals};
use gq_core::geometry::{
    certify_free_action, classify_singularity, fixed_locus, fixed_locus_involution,
    model_invariance, plane_census, sigma_regularity, singular_planes, skew_forms, smooth_at,
    FixedLocusSummary, LocusKind, Verdict as Smoothness,
};
use gq_core::grassmann::{hilbert_numerator, plucker_ideal, plucker_point, plucker_ring};
use gq_core::models::*;
use gq_core::multilinear::{induced_action, WedgeSpace};
use gq_core::polyring::{buchberger, numeric_pfaffian, span_dimension, SparsePoly};
use gq_core::symmetry::{
    dihedral_involution, gr36_eigenvalue_classes, invariant_q1_family, make_group,
    section_equivariant, transform_poly,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{ModelName, RunConfig};
use crate::expected::ExpectedTable;
use crate::report::{Check, Reproducibility, Stage, Verdict};

/// What a check computed.
#[derive(Debug, Clone, Default)]
pub struct Observation {
    pub observed: Value,
    pub evidence: Value,
    pub note: Option<String>,
    /// Set when the data is incomplete, e.g. a fixed locus that did not resolve.
    pub inconclusive: bool,
}

impl Observation {
    fn new(observed: Value, evidence: Value) -> Self {
        Observation {
            observed,
            evidence,
            ..Default::default()
        }
    }

    fn note(mut self, s: impl Into<String>) -> Self {
        self.note = Some(s.into());
        self
    }
}

type Outcome = Result<Observation, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn field_name(p: Option<u64>) -> String {
    p.map_or("Q".into(), |p| format!("F_{p}"))
}

fn fp(p: u64) -> Result<PrimeField, String> {
    PrimeField::new(p).map_err(err)
}

/// Parameters `c` and the two hyperplane triples of `S_Z`, generic modulo `primes`.
fn sz_parameters(seed: u64, primes: &[u64]) -> (Vec<i64>, [i64; 3], [i64; 3]) {
    let c = generic_integers_for(seed, 6, primes);
    let h = generic_integers_for(seed + 100, 6, primes);
    (c, [h[0], h[1], h[2]], [h[3], h[4], h[5]])
}

fn same_span<F: Field>(a: &[SparsePoly<F>], b: &[SparsePoly<F>]) -> bool {
    let all: Vec<_> = a.iter().chain(b).cloned().collect();
    let r = span_dimension(&all);
    r == span_dimension(a) && r == span_dimension(b)
}

fn span_preserved<F: Field>(
    polys: &[SparsePoly<F>],
    gens: &[(String, ExactMatrix<F>)],
) -> Result<Vec<(String, bool)>, String> {
    gens.iter()
        .map(|(name, m)| {
            let moved: Vec<_> = polys
                .iter()
                .map(|p| transform_poly(p, m))
                .collect::<Result<_, _>>()
                .map_err(err)?;
            Ok((name.clone(), same_span(polys, &moved)))
        })
        .collect()
}

/// Signed terms sorted, so that term order does not matter.
pub fn canonical_equation(s: &str) -> String {
    let mut terms = Vec::new();
    let mut cur = String::new();
    let mut depth = 0;
    for ch in s.chars().filter(|c| !c.is_whitespace()) {
        match ch {
            '{' => depth += 1,
            '}' => depth -= 1,
            '+' | '-' if depth == 0 && !cur.is_empty() => {
                terms.push(std::mem::take(&mut cur));
            }
            _ => {}
        }
        cur.push(ch);
    }
    if !cur.is_empty() {
        terms.push(cur);
    }
    let mut signed: Vec<String> = terms
        .into_iter()
        .map(|t| {
            if t.starts_with('+') || t.starts_with('-') {
                t
            } else {
                format!("+{t}")
            }
        })
        .collect();
    signed.sort();
    signed.concat()
}

fn tau<F: Field>(f: &F) -> Result<ExactMatrix<F>, String> {
    let g = make_group("D7_rho7", f).map_err(err)?;
    let gens = g.coordinate_generators().map_err(err)?;
    gens.into_iter()
        .find(|(n, _)| n == "tau")
        .map(|x| x.1)
        .ok_or_else(|| "D7_rho7 has no generator tau".into())
}

/// `(h^0, h^1, ...)` of `Ω^p(t)` on `Gr(2,7)` as a degree map.
fn omega_cohomology(p: usize, t: i64) -> Result<BTreeMap<usize, i64>, String> {
    let mut out = BTreeMap::new();
    for (b, m) in omega_decompose(p, 2, 7, t).map_err(err)? {
        for (d, h) in bott_cohomology(&b).map_err(err)? {
            *out.entry(d).or_insert(0) += h * m as i64;
        }
    }
    Ok(out)
}

fn curve_value(fl: &FixedLocusSummary) -> Value {
    let curves: Vec<Value> = fl
        .curves()
        .iter()
        .map(|c| json!({"degree": c.degree, "genus": c.arithmetic_genus, "span": c.span_dim}))
        .collect();
    match curves.len() {
        1 => curves[0].clone(),
        _ => Value::Array(curves),
    }
}

/// The common value when all entries agree, else the whole map.
fn agree(m: &BTreeMap<u64, Value>) -> Value {
    let mut vals = m.values();
    match vals.next() {
        Some(first) if vals.all(|v| v == first) => first.clone(),
        _ => json!(m
            .iter()
            .map(|(p, v)| (p.to_string(), v.clone()))
            .collect::<BTreeMap<_, _>>()),
    }
}

/// σ fixed loci on `S_Z` at each census prime.
#[derive(Debug, Clone)]
struct SigmaRun {
    params: (Vec<i64>, [i64; 3], [i64; 3]),
    loci: BTreeMap<u64, Result<FixedLocusSummary, String>>,
}

pub struct Runner<'a> {
    cfg: &'a RunConfig,
    table: &'a ExpectedTable,
    checks: Vec<Check>,
    done: BTreeSet<String>,
    sigma: Option<SigmaRun>,
}

impl<'a> Runner<'a> {
    pub fn new(cfg: &'a RunConfig, table: &'a ExpectedTable) -> Self {
        Runner {
            cfg,
            table,
            checks: Vec::new(),
            done: BTreeSet::new(),
            sigma: None,
        }
    }

    pub fn finish(self) -> Vec<Check> {
        self.checks
    }

    /// The configured group for the model under test, the model's own group otherwise.
    fn group_for(&self, model: ModelName) -> String {
        if model == self.cfg.model {
            self.cfg.group.clone()
        } else {
            model.default_group().to_string()
        }
    }

    fn repro(&self, primes: &[u64], field: impl Into<String>) -> Reproducibility {
        Reproducibility {
            seed: self.cfg.seed,
            primes: primes.to_vec(),
            field: field.into(),
        }
    }

    /// Compares against the expected table and stores the check.
    fn record(&mut self, id: &str, stage: Stage, repro: Reproducibility, outcome: Outcome) {
        if !self.done.insert(id.to_string()) {
            return;
        }
        let (claim, expected) = match self.table.get(id) {
            Ok(e) => (e.claim.clone(), e.value.clone()),
            Err(e) => (String::new(), json!(e.to_string())),
        };
        let check = match outcome {
            Ok(obs) => {
                let verdict = if obs.inconclusive {
                    Verdict::Inconclusive
                } else if expected.is_null() || obs.observed == expected {
                    Verdict::Pass
                } else {
                    Verdict::Fail
                };
                Check {
                    id: id.into(),
                    stage,
                    claim,
                    verdict,
                    expected,
                    observed: obs.observed,
                    evidence: obs.evidence,
                    reproducibility: repro,
                    note: obs.note,
                }
            }
            Err(e) => Check {
                id: id.into(),
                stage,
                claim,
                verdict: Verdict::Inconclusive,
                expected,
                observed: Value::Null,
                evidence: Value::Null,
                reproducibility: repro,
                note: Some(e),
            },
        };
        self.checks.push(check);
    }

    fn on(&self, stage: Stage) -> bool {
        let t = &self.cfg.toggles;
        match stage {
            Stage::Build => true,
            Stage::Invariance => t.invariance,
            Stage::Smoothness => t.smoothness,
            Stage::FixedLoci => t.fixed_loci,
            Stage::Freeness => t.freeness,
            Stage::Hodge => t.hodge,
            Stage::Quotient => t.quotient,
            Stage::Duality => t.duality,
            Stage::Properties => t.properties,
        }
    }

    /// Models whose checks a run of `model` includes.
    pub fn pipeline(model: ModelName, full: bool) -> Vec<ModelName> {
        use ModelName::*;
        let upstream: &[ModelName] = match model {
            Z => &[Y],
            WZ => &[Y, Z],
            SZ => &[Y, Z, WZ],
            SFmt => &[Y, Z, WZ, SZ],
            Campedelli => &[Dual],
            _ => &[],
        };
        let mut out: Vec<ModelName> = if full { upstream.to_vec() } else { vec![] };
        if full && model == SFmt {
            // the format model certifies the S_Z surface, so its own checks come first
            out.insert(0, SFmt);
        } else {
            out.push(model);
        }
        out.dedup();
        out
    }

    pub fn run_model(&mut self, model: ModelName) {
        match model {
            ModelName::Y => self.run_y(),
            ModelName::Z => self.run_z(),
            ModelName::WZ => self.run_w_z(),
            ModelName::SZ => self.run_s_z(),
            ModelName::SFmt => self.run_s_fmt(),
            ModelName::T36 => self.run_t36(),
            ModelName::AppA1 => self.run_a1(),
            ModelName::AppA2 => self.run_a2(),
            ModelName::Dual => self.run_dual(),
            ModelName::Campedelli => self.run_campedelli(),
        }
    }

    fn run_y(&mut self) {
        let q = Cyclotomic::new(7);
        let fam = invariant_q1_family(&q).map_err(err);
        let repro = self.repro(&[], "Q(zeta7)");
        let params = fam.clone().map(|f| {
            let mut names = f.parameters.clone();
            names.sort();
            Observation::new(
                json!(names),
                json!({"model": f.model, "count": f.parameters.len()}),
            )
        });
        self.record("family.parameters", Stage::Build, repro.clone(), params);
        let slots = fam.clone().map(|f| {
            let pattern: Vec<Value> = f
                .slots
                .iter()
                .map(|s| json!([s.i, s.jk.0, s.jk.1, f.parameters[s.parameter]]))
                .collect();
            Observation::new(json!(pattern), Value::Null)
        });
        self.record("family.slots", Stage::Build, repro.clone(), slots);
        if self.on(Stage::Invariance) {
            let seed = self.cfg.seed;
            let eq = fam.and_then(|fam| {
                let group = make_group("D7_rho6", &q).map_err(err)?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let vals: Vec<_> = fam.parameters.iter().map(|_| q.random(&mut rng)).collect();
                let lambda = fam.section(&q, &vals).map_err(err)?;
                let mut ok = 0;
                for _ in 0..100 {
                    let a: Vec<_> = (0..6).map(|_| q.random(&mut rng)).collect();
                    let b: Vec<_> = (0..6).map(|_| q.random(&mut rng)).collect();
                    ok += usize::from(section_equivariant(&q, &group, &lambda, &a, &b).map_err(err)?);
                }
                Ok(Observation::new(
                    json!({"pairs": 100, "equivariant": ok}),
                    json!({"group": "D7_rho6", "generators": group.generators.iter().map(|g| g.name.clone()).collect::<Vec<_>>()}),
                ))
            });
            self.record("family.equivariance", Stage::Invariance, repro, eq);
        }
        if self.on(Stage::Hodge) {
            let h = hodge_q1_model(0).map_err(err).map(|z| {
                Observation::new(
                    json!({"h11": z.h(1, 1), "h13": z.h(1, 3), "h22": z.h(2, 2)}),
                    json!(z.diamond.rows()),
                )
                .note("computed from the zero locus of the Q*(1) section on Gr(2,6)")
            });
            self.record("hodge.z", Stage::Hodge, self.repro(&[], "combinatorial"), h);
        }
    }

    fn run_z(&mut self) {
        let derived = z_equation_templates();
        let expected: Vec<String> = self
            .table
            .get("z.equations")
            .ok()
            .and_then(|e| serde_json::from_value(e.value.clone()).ok())
            .unwrap_or_default();
        // canonical forms agree: report the expected strings when they do
        let observed: Vec<String> = derived
            .iter()
            .map(|d| {
                let c = canonical_equation(d);
                expected
                    .iter()
                    .find(|e| canonical_equation(e) == c)
                    .cloned()
                    .unwrap_or_else(|| d.clone())
            })
            .collect();
        let canon: Vec<String> = derived.iter().map(|d| canonical_equation(d)).collect();
        self.record(
            "z.equations",
            Stage::Build,
            self.repro(&[], "symbolic"),
            Ok(Observation::new(
                json!(observed),
                json!({"derived": derived, "canonical": canon}),
            )),
        );
        let weights: Vec<Value> = z_structure()
            .iter()
            .map(|e| {
                let w: Vec<usize> = e.terms.iter().map(|&(_, (i, j))| (i + j + 5) % 7).collect();
                json!({"m": e.m, "weight": e.weight(), "term_weights": w})
            })
            .collect();
        let homogeneous = z_structure().iter().all(|e| {
            e.terms
                .iter()
                .all(|&(_, (i, j))| (i + j + 5) % 7 == e.weight())
        });
        self.record(
            "z.homogeneous",
            Stage::Build,
            self.repro(&[], "symbolic"),
            Ok(Observation::new(json!(homogeneous), json!(weights))),
        );
        if self.on(Stage::Invariance) {
            let group = self.group_for(ModelName::Z);
            let p = self.cfg.free_primes[0];
            let seed = self.cfg.seed;
            let out = (|| {
                let f = fp(p)?;
                let z =
                    build_z(&f, &generic_integers_for(seed, 6, &[p]), Some(seed)).map_err(err)?;
                let g = make_group(&group, &f).map_err(err)?;
                let r = span_preserved(&z.linear, &g.coordinate_generators().map_err(err)?)?;
                Ok(Observation::new(json!(r.iter().all(|x| x.1)), json!(r)))
            })();
            self.record(
                "z.invariance",
                Stage::Invariance,
                self.repro(&[p], field_name(Some(p))),
                out,
            );
        }
        if self.on(Stage::Smoothness) {
            let seed = self.cfg.seed;
            let q = Rationals;
            let z = build_z(&q, &generic_integers(seed, 6), None).map_err(err);
            let reg = z.clone().and_then(|z| {
                let forms = skew_forms(&z).map_err(err)?;
                let unit = |terms: &[(usize, i64)]| {
                    let mut w = vec![q.zero(); 7];
                    for &(i, x) in terms {
                        w[i - 1] = q.from_i64(x);
                    }
                    w
                };
                let special = vec![
                    ("p_3_6".to_string(), unit(&[(3, 1), (6, 2)])),
                    ("p_2_7".to_string(), unit(&[(2, 1), (7, -3)])),
                    ("p_4_5".to_string(), unit(&[(4, 5), (5, 1)])),
                ];
                let r = sigma_regularity(&q, &forms, 100, seed, &special).map_err(err)?;
                let dims: Vec<i64> = r.probes.iter().map(|p| p.h + 1).collect();
                Ok(Observation::new(json!(dims), json!(r))
                    .note("H(w) reported as a vector dimension"))
            });
            self.record(
                "z.regularity_special",
                Stage::Smoothness,
                self.repro(&[], "Q"),
                reg,
            );
            let smooth = z.and_then(|z| {
                let mut verdicts = Vec::new();
                let mut certs = Vec::new();
                for name in ["x_3_6", "x_2_7", "x_4_5"] {
                    let i = z.ring.index_of(name).ok_or("missing coordinate")?;
                    let mut pt = vec![q.zero(); z.nvars()];
                    pt[i] = q.one();
                    let c = smooth_at(&z, &pt).map_err(err)?;
                    verdicts.push(if c.verdict == Smoothness::Smooth { "smooth" } else { "singular" });
                    certs.push(json!({"point": name, "chart": c.chart, "jacobian_rank": c.jacobian_rank, "expected_rank": c.expected_rank}));
                }
                Ok(Observation::new(json!(verdicts), json!(certs)))
            });
            self.record(
                "z.smooth_points",
                Stage::Smoothness,
                self.repro(&[], "Q"),
                smooth,
            );
        }
        if self.on(Stage::FixedLoci) {
            let p = self.cfg.free_primes.first().copied().unwrap_or(29);
            let seed = self.cfg.seed;
            let out = (|| {
                let f = fp(p)?;
                let z =
                    build_z(&f, &generic_integers_for(seed, 6, &[p]), Some(seed)).map_err(err)?;
                let fl = fixed_locus(&z, "tau", &tau(&f)?, 7, seed).map_err(err)?;
                let mut hit = Vec::new();
                for c in fl.components.iter().filter(|c| c.kind == LocusKind::Points) {
                    for pt in c
                        .points
                        .as_ref()
                        .map(|p| p.rational.clone())
                        .unwrap_or_default()
                    {
                        let nz: Vec<usize> = (0..pt.len()).filter(|&i| pt[i] != 0).collect();
                        hit.push(if nz.len() == 1 {
                            z.ring.names[nz[0]].clone()
                        } else {
                            format!("{pt:?}")
                        });
                    }
                }
                hit.sort();
                let geometric = fl.isolated_points();
                let mut obs = Observation::new(json!(hit), json!(fl));
                obs.inconclusive = !fl.is_resolved() || geometric != hit.len();
                Ok(obs)
            })();
            self.record(
                "z.tau_fixed_points",
                Stage::FixedLoci,
                self.repro(&[p], field_name(Some(p))),
                out,
            );
        }
        if self.on(Stage::Hodge) {
            let h = hodge_linear_section(2, 7, 6).map_err(err).map(|z| {
                Observation::new(
                    json!({"h11": z.h(1, 1), "h13": z.h(1, 3), "h22": z.h(2, 2)}),
                    json!(z.diamond.rows()),
                )
            });
            self.record("hodge.z", Stage::Hodge, self.repro(&[], "combinatorial"), h);
        }
    }

    fn freeness(&mut self, id: &str, surface: bool) {
        let seed = self.cfg.seed;
        let primes = self.cfg.free_primes.clone();
        let out = (|| {
            let mut free = BTreeMap::new();
            let mut certs = Vec::new();
            for &p in &primes {
                let f = fp(p)?;
                let (c, h1, h2) = sz_parameters(seed, &[p]);
                let m = if surface {
                    build_s_z(&f, &c, &h1, &h2, Some(seed))
                } else {
                    build_w_z(&f, &c, &h1, Some(seed))
                }
                .map_err(err)?;
                let t = tau(&f)?;
                let mut elements = Vec::new();
                let mut g = t.clone();
                for k in 1..7 {
                    elements.push((format!("tau^{k}"), g.clone(), 7));
                    g = g.mul(&t).map_err(err)?;
                }
                let cert = certify_free_action(&m, &elements[..1], seed).map_err(err)?;
                let support: Vec<Value> = cert.elements[0]
                    .components
                    .iter()
                    .map(|c| json!({"eigenvalue": c.eigenvalue, "kind": c.kind, "support": c.support}))
                    .collect();
                free.insert(p, json!(cert.free));
                certs.push(json!({"p": p, "parameters": {"c": c, "h1": h1, "h2": h2}, "free": cert.free, "transcript": support}));
            }
            Ok(Observation::new(agree(&free), json!(certs))
                .note("tau generates Z/7, so a free tau makes every nontrivial power free"))
        })();
        self.record(id, Stage::Freeness, self.repro(&primes, "F_p"), out);
    }

    fn run_w_z(&mut self) {
        if self.on(Stage::Freeness) {
            self.freeness("w_z.free", false);
        }
        if self.on(Stage::Hodge) {
            let h = hodge_linear_section(2, 7, 7).map_err(err).map(|w| {
                Observation::new(
                    json!({"h11": w.h(1, 1), "h21": w.h(2, 1)}),
                    json!(w.diamond.rows()),
                )
            });
            self.record("hodge.w", Stage::Hodge, self.repro(&[], "combinatorial"), h);
        }
        if self.on(Stage::Quotient) {
            let out = hodge_linear_section(2, 7, 7)
                .and_then(|w| quotient_invariants(&w, 7, true, Some(1)))
                .map_err(err)
                .map(|wt| {
                    Observation::new(
                        json!({"e": wt.e_top, "h11": wt.h(1, 1), "h12": wt.h(1, 2)}),
                        json!(wt.diamond.rows()),
                    )
                });
            self.record(
                "quotient.w",
                Stage::Quotient,
                self.repro(&[], "combinatorial"),
                out,
            );
        }
    }

    fn sigma_run(&mut self) -> SigmaRun {
        if let Some(s) = &self.sigma {
            return s.clone();
        }
        let seed = self.cfg.seed;
        let primes = self.cfg.census_primes.clone();
        let params = sz_parameters(seed, &primes);
        let mut loci = BTreeMap::new();
        for &p in &primes {
            let r = (|| {
                let f = fp(p)?;
                let (c, h1, h2) = &params;
                let s = build_s_z(&f, c, h1, h2, Some(seed)).map_err(err)?;
                let g = dihedral_involution("D7_rho7", &f).map_err(err)?;
                fixed_locus_involution(&s, "sigma", &g, seed).map_err(err)
            })();
            loci.insert(p, r);
        }
        let run = SigmaRun { params, loci };
        self.sigma = Some(run.clone());
        run
    }

    fn run_s_z(&mut self) {
        let seed = self.cfg.seed;
        let q = Rationals;
        let (c, h1, h2) = sz_parameters(seed, &[]);
        if self.on(Stage::Invariance) {
            let group = self.group_for(ModelName::SZ);
            let p = self.cfg.free_primes[0];
            let out = (|| {
                let f = fp(p)?;
                let (c, h1, h2) = sz_parameters(seed, &[p]);
                let s = build_s_z(&f, &c, &h1, &h2, Some(seed)).map_err(err)?;
                let g = make_group(&group, &f).map_err(err)?;
                let r = span_preserved(&s.linear, &g.coordinate_generators().map_err(err)?)?;
                Ok(Observation::new(json!(r.iter().all(|x| x.1)), json!(r)))
            })();
            self.record(
                "s_z.invariance",
                Stage::Invariance,
                self.repro(&[p], &field_name(Some(p))),
                out,
            );
        }
        if self.on(Stage::Smoothness) {
            let out = (|| {
                let s = build_s_z(&q, &c, &h1, &h2, Some(seed)).map_err(err)?;
                let forms = skew_forms(&s).map_err(err)?;
                let r = sigma_regularity(&q, &forms, 100, seed, &[]).map_err(err)?;
                Ok(Observation::new(
                    json!({"generic": r.generic, "random_jumps": r.random_jumps}),
                    json!(r),
                ))
            })();
            self.record(
                "s_z.regularity_generic",
                Stage::Smoothness,
                self.repro(&[], "Q"),
                out,
            );
            let primes = self.cfg.census_primes.clone();
            let out = (|| {
                let mut per = BTreeMap::new();
                let mut ev = Vec::new();
                for &p in &primes {
                    let f = fp(p)?;
                    let h = generic_integers_for(seed + 100, 6, &[p]);
                    let s = build_s_z(
                        &f,
                        &[1; 6],
                        &[h[0], h[1], h[2]],
                        &[h[3], h[4], h[5]],
                        Some(seed),
                    )
                    .map_err(err)?;
                    let census = plane_census(&s).map_err(err)?;
                    let sing = singular_planes(&s, &census).map_err(err)?;
                    let mut node = !sing.is_empty();
                    for cert in &sing {
                        let pt: Vec<u64> =
                            cert.point.iter().map(|x| x.parse().unwrap_or(0)).collect();
                        node &= classify_singularity(&s, &pt).map_err(err)?.node;
                    }
                    per.insert(p, json!({"singular_planes": sing.len(), "node": node}));
                    ev.push(json!({"p": p, "planes": census.count(), "singular": sing}));
                }
                Ok(Observation::new(agree(&per), json!(ev)))
            })();
            self.record(
                "s_z.nodal_member",
                Stage::Smoothness,
                self.repro(&primes, "F_p"),
                out,
            );
        }
        if self.on(Stage::Freeness) {
            self.freeness("s_z.free", true);
        }
        if self.on(Stage::FixedLoci) {
            self.sigma_checks();
        }
        if self.on(Stage::Hodge) {
            let h = hodge_linear_section(2, 7, 8).map_err(err).map(|s| {
                Observation::new(
                    json!({"p_g": s.p_g(), "q": s.q(), "h11": s.h(1, 1), "k2": s.k_power}),
                    json!({"diamond": s.diamond.rows(), "e": s.e_top, "chi": s.chi_o}),
                )
            });
            self.record("hodge.s", Stage::Hodge, self.repro(&[], "combinatorial"), h);
            self.deformations();
        }
        if self.on(Stage::Quotient) {
            let out = hodge_linear_section(2, 7, 8).and_then(|s| quotient_invariants(&s, 7, true, None)).map_err(err).map(|st| {
                Observation::new(
                    json!({"chi": st.chi_o, "k2": st.k_power, "e": st.e_top, "p_g": st.p_g(), "q": st.q(), "h11": st.h(1, 1)}),
                    json!(st.diamond.rows()),
                )
            });
            self.record(
                "quotient.s",
                Stage::Quotient,
                self.repro(&[], "combinatorial"),
                out,
            );
            self.sigma_quotient();
        }
    }

    fn sigma_checks(&mut self) {
        let run = self.sigma_run();
        let primes: Vec<u64> = run.loci.keys().copied().collect();
        let repro = self.repro(&primes, "F_p");
        let failed: Vec<String> = run
            .loci
            .iter()
            .filter_map(|(p, r)| r.as_ref().err().map(|e| format!("p = {p}: {e}")))
            .collect();
        let ok: BTreeMap<u64, &FixedLocusSummary> = run
            .loci
            .iter()
            .filter_map(|(p, r)| r.as_ref().ok().map(|s| (*p, s)))
            .collect();
        let unresolved = ok.values().any(|s| !s.is_resolved());
        let depth = self.cfg.extension_depth;
        let summarize = |f: &dyn Fn(&FixedLocusSummary) -> Value| -> Outcome {
            if ok.is_empty() {
                return Err(failed.join("; "));
            }
            let per: BTreeMap<u64, Value> = ok.iter().map(|(p, s)| (*p, f(s))).collect();
            let mut obs = Observation::new(
                agree(&per),
                json!(per
                    .iter()
                    .map(|(p, v)| (p.to_string(), v.clone()))
                    .collect::<BTreeMap<_, _>>()),
            );
            if !failed.is_empty() {
                obs = obs.note(format!("bad reduction: {}", failed.join("; ")));
                obs.inconclusive = true;
            }
            obs.inconclusive |= unresolved;
            Ok(obs)
        };
        let hp = summarize(&|s| json!(s.hilbert_polynomial()));
        let curve = summarize(&curve_value);
        let iso = summarize(&|s| json!(s.isolated_points()));
        let mut iso = iso.map(|mut o| {
            let counts: BTreeMap<String, Vec<usize>> = ok
                .iter()
                .map(|(p, s)| {
                    (
                        p.to_string(),
                        s.isolated_counts().into_iter().take(depth).collect(),
                    )
                })
                .collect();
            o.evidence = json!({"isolated": o.evidence, "counts_over_extensions": counts});
            o
        });
        if let Ok(o) = &mut iso {
            o.evidence["parameters"] =
                json!({"c": run.params.0, "h1": run.params.1, "h2": run.params.2});
        }
        self.record("s_z.sigma_hilbert", Stage::FixedLoci, repro.clone(), hp);
        self.record("s_z.sigma_curve", Stage::FixedLoci, repro.clone(), curve);
        self.record("s_z.sigma_isolated", Stage::FixedLoci, repro.clone(), iso);
        let indep = if failed.is_empty() && !unresolved && ok.len() >= 2 {
            let sig: BTreeMap<u64, Value> = ok
                .iter()
                .map(|(p, s)| {
                    (
                        *p,
                        json!([s.hilbert_polynomial(), curve_value(s), s.isolated_points()]),
                    )
                })
                .collect();
            let first = sig.values().next().cloned();
            Ok(Observation::new(
                json!(sig.values().all(|v| Some(v) == first.as_ref())),
                Value::Null,
            ))
        } else if ok.len() < 2 && failed.is_empty() {
            Err("needs at least two census primes".to_string())
        } else {
            Err(format!("not every prime resolved: {}", failed.join("; ")))
        };
        self.record(
            "s_z.sigma_prime_independent",
            Stage::FixedLoci,
            repro,
            indep,
        );
    }

    fn deformations(&mut self) {
        let seed = self.cfg.seed;
        let q = Rationals;
        let (c, h1, h2) = sz_parameters(seed, &[]);
        let out = (|| {
            let models = [
                build_z(&q, &c, None).map_err(err)?,
                build_w_z(&q, &c, &h1, None).map_err(err)?,
                build_s_z(&q, &c, &h1, &h2, None).map_err(err)?,
            ];
            let mut h1s = Vec::new();
            let mut ev = Vec::new();
            for (m, r) in models.iter().zip([6, 7, 8]) {
                let rank = normal_map_rank(m).map_err(err)?;
                let d = deformation_number(&ZeroLocus::linear_section(2, 7, r), Some(rank))
                    .map_err(err)?;
                h1s.push(d.h1);
                ev.push(json!({"model": m.name, "report": d}));
            }
            Ok(Observation::new(json!(h1s), json!(ev)))
        })();
        self.record("deformations", Stage::Hodge, self.repro(&[], "Q"), out);
        let out = (|| {
            let d = deformation_number(&ZeroLocus::linear_section(2, 7, 8), None).map_err(err)?;
            let o7 = omega_cohomology(9, 7)?;
            let o6 = omega_cohomology(9, 6)?;
            let get = |m: &BTreeMap<usize, i64>, k| m.get(&k).copied().unwrap_or(0);
            Ok(Observation::new(
                json!({"h2_t_s": d.h2, "h2_omega9_7": get(&o7, 2), "h3_omega9_6": get(&o6, 3)}),
                json!({"report": d, "omega9_7": o7, "omega9_6": o6}),
            )
            .note(format!(
                "h^2(T_G|S) = {} is not zero; H^2(T_S) = 0 because H^2(T_G|S) maps onto H^2(N_S) = {}",
                d.tangent_restricted[2], d.normal[2]
            )))
        })();
        self.record(
            "deformations.s_h2",
            Stage::Hodge,
            self.repro(&[], "combinatorial"),
            out,
        );
    }

    fn sigma_quotient(&mut self) {
        let run = self.sigma_run();
        let Some((&p, Ok(fl))) = run
            .loci
            .iter()
            .find(|(_, r)| r.as_ref().is_ok_and(|s| s.is_resolved()))
        else {
            self.record(
                "involution.sigma",
                Stage::Quotient,
                self.repro(&self.cfg.census_primes.clone(), "F_p"),
                Err("no resolved sigma fixed locus".into()),
            );
            return;
        };
        let out = (|| {
            let curves = fl.curves();
            let [c] = curves.as_slice() else {
                return Err(format!("{} fixed curves", curves.len()));
            };
            // K_S = O(1), so K.C is the degree of C
            let datum = FixedDatum::from_adjunction(
                c.degree,
                1 - c.arithmetic_genus,
                fl.isolated_points() as i64,
            );
            let st =
                quotient_invariants(&hodge_linear_section(2, 7, 8).map_err(err)?, 7, true, None)
                    .map_err(err)?;
            let iq = involution_quotient(&st, &datum).map_err(err)?;
            Ok(Observation::new(
                json!({"c2": datum.c_squared, "k2": iq.k_squared, "e": iq.e_top, "e_resolution": iq.resolution_e_top, "p_g": iq.resolution_pg_q.0, "q": iq.resolution_pg_q.1}),
                json!({"fixed_datum": datum, "quotient": iq}),
            ))
        })();
        self.record(
            "involution.sigma",
            Stage::Quotient,
            self.repro(&[p], field_name(Some(p))),
            out,
        );
    }

    fn run_s_fmt(&mut self) {
        let seed = self.cfg.seed;
        let p = self.cfg.free_primes.first().copied().unwrap_or(29);
        let seeds = [seed, seed + 1, seed + 2];
        let out = (|| {
            let f = fp(p)?;
            let q = Rationals;
            let mut spans = Vec::new();
            let mut agree_all = true;
            let mut ev = Vec::new();
            for s in seeds {
                let (c, h1, h2) = sz_parameters(s, &[p]);
                let fmt =
                    build_s_format_from_hyperplanes(&f, &c, &h1, &h2, Some(s)).map_err(err)?;
                let pipe = s_format_pipeline_quadrics(&f, &c, &h1, &h2).map_err(err)?;
                let fq = build_s_format_from_hyperplanes(&q, &c, &h1, &h2, Some(s)).map_err(err)?;
                let pq = s_format_pipeline_quadrics(&q, &c, &h1, &h2).map_err(err)?;
                let (a, b) = (
                    same_span(&fmt.nonlinear, &pipe),
                    same_span(&fq.nonlinear, &pq),
                );
                spans.push(span_dimension(&fmt.nonlinear));
                spans.push(span_dimension(&fq.nonlinear));
                agree_all &= a && b;
                ev.push(json!({"seed": s, "c": c, "h1": h1, "h2": h2, "agrees_mod_p": a, "agrees_over_q": b}));
            }
            Ok((spans, agree_all, ev))
        })();
        let repro = self.repro(&[p], format!("F_{p} and Q"));
        let span = out.clone().map(|(spans, _, _)| {
            let first = spans[0];
            let v = if spans.iter().all(|&s| s == first) {
                json!(first)
            } else {
                json!(spans)
            };
            Observation::new(v, json!(spans))
        });
        self.record("s_fmt.quadric_span", Stage::Build, repro.clone(), span);
        self.record(
            "s_fmt.matches_pipeline",
            Stage::Build,
            repro,
            out.map(|(_, a, ev)| Observation::new(json!(a), json!(ev))),
        );
        if self.on(Stage::Invariance) {
            let out = (|| {
                let f = fp(p)?;
                let (c, h1, h2) = sz_parameters(seed, &[p]);
                let fmt =
                    build_s_format_from_hyperplanes(&f, &c, &h1, &h2, Some(seed)).map_err(err)?;
                let g = s_format_action(&f).map_err(err)?;
                let r = span_preserved(&fmt.nonlinear, &g.coordinate_generators().map_err(err)?)?;
                Ok(Observation::new(json!(r.iter().all(|x| x.1)), json!(r)))
            })();
            self.record(
                "s_fmt.invariance",
                Stage::Invariance,
                self.repro(&[p], field_name(Some(p))),
                out,
            );
        }
    }

    fn run_t36(&mut self) {
        let classes = gr36_eigenvalue_classes();
        let counts: BTreeMap<String, usize> = classes
            .iter()
            .map(|(r, v)| (r.to_string(), v.len()))
            .collect();
        self.record(
            "gr36.classes",
            Stage::Build,
            self.repro(&[], "combinatorial"),
            Ok(Observation::new(json!(counts), json!(classes))),
        );
        let out = (|| {
            let a = hilbert_numerator(3, 6, 30).map_err(err)?;
            let b = hilbert_numerator(2, 7, 30).map_err(err)?;
            let same = a.reduced_numerator == b.reduced_numerator;
            Ok(Observation::new(
                json!({"same": same, "degree": a.degree}),
                json!({"gr36": a, "gr27": b}),
            ))
        })();
        self.record(
            "gr36.hilbert_numerators",
            Stage::Build,
            self.repro(&[], "combinatorial"),
            out,
        );
        let seed = self.cfg.seed;
        // the elliptic census needs the smallest prime to stay under the census limit
        let p = self.cfg.census_primes.iter().copied().min().unwrap_or(11);
        if self.on(Stage::Invariance) {
            let group = self.group_for(ModelName::T36);
            let out = (|| {
                let f = fp(29)?;
                let t = build_t_gr36(&f, &symmetric_alpha(seed), Some(seed)).map_err(err)?;
                let g = make_group(&group, &f).map_err(err)?;
                let r = span_preserved(&t.linear, &g.coordinate_generators().map_err(err)?)?;
                Ok(Observation::new(json!(r.iter().all(|x| x.1)), json!(r)))
            })();
            self.record(
                "t36.invariance",
                Stage::Invariance,
                self.repro(&[29], "F_29"),
                out,
            );
        }
        let mut datum = None;
        if self.on(Stage::FixedLoci) || self.on(Stage::Quotient) {
            let out = (|| {
                let f = fp(p)?;
                let g = dihedral_involution("D7_gr36", &f).map_err(err)?;
                let mut skipped = Vec::new();
                // a seed is usable when its parameters are nonzero mod p and the fixed points stay reduced
                for s in seed..seed + 20 {
                    let t = match build_t_gr36(&f, &symmetric_alpha(s), Some(s)) {
                        Ok(t) => t,
                        Err(e) => {
                            skipped.push(json!({"seed": s, "reason": e.to_string()}));
                            continue;
                        }
                    };
                    let fl = match fixed_locus_involution(&t, "sigma", &g, s) {
                        Ok(fl) => fl,
                        Err(e) => {
                            skipped.push(json!({"seed": s, "reason": e.to_string()}));
                            continue;
                        }
                    };
                    let pts: Vec<_> = fl
                        .components
                        .iter()
                        .filter_map(|c| c.points.as_ref())
                        .collect();
                    if !fl.is_resolved() || pts.iter().any(|p| !p.reduced) {
                        skipped.push(json!({"seed": s, "reason": "non-reduced fixed points (bad reduction)"}));
                        continue;
                    }
                    return Ok((s, fl, skipped));
                }
                Err(format!(
                    "no seed in {seed}..{} has good reduction at {p}",
                    seed + 20
                ))
            })();
            let obs = out.map(|(s, fl, skipped)| {
                let curves = fl.curves();
                let v = match curves.as_slice() {
                    [c] => {
                        datum = Some(FixedDatum::from_adjunction(c.degree, 1 - c.arithmetic_genus, fl.isolated_points() as i64));
                        json!({"degree": c.degree, "genus": c.arithmetic_genus, "hasse": c.hasse_bound, "points": fl.isolated_points()})
                    }
                    _ => json!({"curves": curves.len(), "points": fl.isolated_points()}),
                };
                let mut o = Observation::new(v, json!({"alpha_seed": s, "skipped": skipped, "locus": fl}));
                if s != seed {
                    o = o.note(format!("alpha seed {s} used; earlier seeds have bad reduction at {p}"));
                }
                o
            });
            if self.on(Stage::FixedLoci) {
                self.record(
                    "t36.sigma",
                    Stage::FixedLoci,
                    self.repro(&[p], field_name(Some(p))),
                    obs,
                );
            }
        }
        if self.on(Stage::Quotient) {
            let cy =
                hodge_linear_section(3, 6, 6).map_err(err).map(|cy| {
                    match quotient_invariants(&cy, 7, true, None) {
                        Err(CohomologyError::NotDivisible { what, value, order }) => {
                            Observation::new(
                                json!("not_divisible"),
                                json!({"what": what, "value": value, "order": order}),
                            )
                        }
                        Err(e) => Observation::new(json!(e.to_string()), Value::Null),
                        Ok(q) => Observation::new(json!("divisible"), json!(q.diamond.rows())),
                    }
                });
            self.record(
                "quotient.cy36",
                Stage::Quotient,
                self.repro(&[], "combinatorial"),
                cy,
            );
            let out = match datum {
                None => Err("no resolved sigma fixed locus on T".to_string()),
                Some(d) => (|| {
                    let tt = quotient_invariants(
                        &hodge_linear_section(3, 6, 7).map_err(err)?,
                        7,
                        true,
                        None,
                    )
                    .map_err(err)?;
                    let iq = involution_quotient(&tt, &d).map_err(err)?;
                    Ok(Observation::new(
                        json!(iq.k_squared),
                        json!({"fixed_datum": d, "quotient": iq}),
                    ))
                })(),
            };
            self.record(
                "involution.t",
                Stage::Quotient,
                self.repro(&[p], field_name(Some(p))),
                out,
            );
        }
    }

    fn a_prime(&self) -> Result<u64, String> {
        self.cfg
            .free_primes
            .iter()
            .copied()
            .find(|p| p % 21 == 1)
            .ok_or_else(|| {
                "the appendix models need a prime p = 1 mod 21 among the freeness primes".into()
            })
    }

    fn run_a1(&mut self) {
        let seed = self.cfg.seed;
        let p = match self.a_prime() {
            Ok(p) => p,
            Err(e) => {
                for id in [
                    "a1.f21_relations",
                    "a1.stated_relation",
                    "a1.printed_invariant",
                    "a1.corrected_invariant",
                    "a1.g42_invariant",
                    "a1.f21_fixed_points",
                ] {
                    self.record(
                        id,
                        Stage::Invariance,
                        self.repro(&[], "F_p"),
                        Err(e.clone()),
                    );
                }
                return;
            }
        };
        let repro = self.repro(&[p], field_name(Some(p)));
        let f = match fp(p) {
            Ok(f) => f,
            Err(e) => return self.record("a1.f21_relations", Stage::Build, repro, Err(e)),
        };
        let f21 = make_group(&self.group_for(ModelName::AppA1), &f).map_err(err);
        let rel = f21.clone().and_then(|g| {
            let r = g.check_relations().map_err(err)?;
            Ok(Observation::new(
                json!(r.iter().all(|x| x.holds) && g.order().map_err(err)? == 21),
                json!(r),
            ))
        });
        self.record("a1.f21_relations", Stage::Build, repro.clone(), rel);
        let stated = f21.clone().and_then(|g| {
            let r = g.check_stated_relations().map_err(err)?;
            let holds = r.iter().all(|x| x.holds);
            let mut o = Observation::new(json!(holds), json!({"stated": r, "used": g.check_relations().map_err(err)?}));
            if !holds {
                o = o.note("the stated relation fails for the matrices of a and b; the group is still F21 with the relation listed under `used`");
            }
            Ok(o)
        });
        self.record("a1.stated_relation", Stage::Build, repro.clone(), stated);
        if self.on(Stage::Invariance) {
            let lambda = reid_orbit_lambda(seed);
            for (id, variant) in [
                ("a1.printed_invariant", ReidVariant::Printed),
                ("a1.corrected_invariant", ReidVariant::Corrected),
            ] {
                let out = f21.clone().and_then(|g| {
                    let m = build_appendix_a1(&f, &lambda, variant, Some(seed)).map_err(err)?;
                    let r = span_preserved(&m.nonlinear, &g.coordinate_generators().map_err(err)?)?;
                    let inv = r.iter().all(|x| x.1);
                    let mut o = Observation::new(json!(inv), json!({"lambda": lambda, "generators": r}));
                    if !inv {
                        o = o.note("the printed matrix is not invariant; replacing z by -z at position (3,6) restores invariance");
                    }
                    Ok(o)
                });
                self.record(id, Stage::Invariance, repro.clone(), out);
            }
            let out = (|| {
                let g = make_group("G42", &f).map_err(err)?;
                let m =
                    build_appendix_a1(&f, &[5; 6], ReidVariant::Corrected, None).map_err(err)?;
                let r =
                    model_invariance(&m, &g.coordinate_generators().map_err(err)?).map_err(err)?;
                Ok(Observation::new(
                    json!(r.iter().all(|x| x.invariant)),
                    json!(r),
                ))
            })();
            self.record("a1.g42_invariant", Stage::Invariance, repro.clone(), out);
        }
        if self.on(Stage::FixedLoci) {
            let out = f21.and_then(|g| {
                let b = g.coordinate_generators().map_err(err)?.into_iter().find(|x| x.0 == "b").ok_or("no generator b")?.1;
                let mut skipped = Vec::new();
                for s in seed..seed + 20 {
                    let (a1, _) = build_appendix_a_models(&f, s).map_err(err)?;
                    let fl = fixed_locus(&a1, "b", &b, 3, s).map_err(err)?;
                    let pts: Vec<_> = fl.components.iter().filter_map(|c| c.points.as_ref()).collect();
                    if fl.is_resolved() && pts.iter().any(|p| !p.reduced) {
                        skipped.push(json!({"seed": s, "reason": "non-reduced fixed points (bad reduction)"}));
                        continue;
                    }
                    let per: Vec<usize> = fl.components.iter().map(|c| c.points.as_ref().map_or(0, |p| p.geometric)).collect();
                    let mut note = format!("{} fixed points in total over the {} eigenspaces of b", fl.isolated_points(), fl.components.len());
                    if s != seed {
                        note.push_str(&format!("; model seed {s} used, earlier seeds have bad reduction at {p}"));
                    }
                    let mut o = Observation::new(json!(per), json!({"model_seed": s, "skipped": skipped, "locus": fl})).note(note);
                    o.inconclusive = !fl.is_resolved();
                    return Ok(o);
                }
                Err(format!("no seed in {seed}..{} has good reduction at {p}", seed + 20))
            });
            self.record("a1.f21_fixed_points", Stage::FixedLoci, repro, out);
        }
    }

    fn run_a2(&mut self) {
        let seed = self.cfg.seed;
        let group = self.group_for(ModelName::AppA2);
        let out = self.a_prime().and_then(|p| {
            let f = fp(p)?;
            let (_, a2) = build_appendix_a_models(&f, seed).map_err(err)?;
            let g = make_group(&group, &f).map_err(err)?;
            let r = model_invariance(&a2, &g.coordinate_generators().map_err(err)?).map_err(err)?;
            let inv = r.iter().all(|x| x.invariant);
            let linear = r.iter().all(|x| x.degrees.first().is_some_and(|d| d.1));
            let mut o = Observation::new(json!(inv), json!({"p": p, "generators": r}));
            if !inv {
                o = o.note(if linear {
                    "flagged discrepancy: the hyperplane is preserved but the quadric span is not"
                } else {
                    "flagged discrepancy: the hyperplane is not preserved"
                });
            }
            Ok(o)
        });
        let p = self.a_prime().ok();
        self.record(
            "a2.invariant",
            Stage::Invariance,
            self.repro(&p.into_iter().collect::<Vec<_>>(), field_name(p)),
            out,
        );
    }

    fn dual_model(&self, p: u64) -> Result<DualModel<PrimeField>, String> {
        let seed = self.cfg.seed;
        let f = fp(p)?;
        let (c, h1, _) = sz_parameters(seed, &[p]);
        build_dual(&f, &c, &h1, Some(seed)).map_err(err)
    }

    fn run_dual(&mut self) {
        let p = self.cfg.free_primes.first().copied().unwrap_or(29);
        let repro = self.repro(&[p], field_name(Some(p)));
        let d = self.dual_model(p);
        let ann = d.as_ref().map_err(Clone::clone).and_then(|d| {
            let f = fp(p)?;
            Ok(Observation::new(
                json!(d.datum.annihilator.len()),
                json!({"pairing_vanishes": d.datum.pairing_vanishes(&f)}),
            ))
        });
        self.record("dual.annihilator", Stage::Duality, repro.clone(), ann);
        let cub = d.as_ref().map_err(Clone::clone).map(|d| {
            Observation::new(
                json!(span_dimension(&d.wdual.nonlinear)),
                json!({"generators": d.wdual.nonlinear.len(), "coordinates": d.wdual.ring.names}),
            )
        });
        self.record("dual.cubics", Stage::Duality, repro.clone(), cub);
        if self.on(Stage::Invariance) {
            let inv = d.as_ref().map_err(Clone::clone).and_then(|d| {
                let f = fp(p)?;
                let weights = dual_weights();
                let ok = cubic_span_invariant(&f, &d.wdual.nonlinear, &weights).map_err(err)?;
                Ok(Observation::new(json!(ok), json!({"weights": weights})))
            });
            self.record("dual.invariance", Stage::Invariance, repro.clone(), inv);
        }
        self.campedelli(p, d.as_ref().map_err(Clone::clone));
        let diff = d.map(|d| {
            let cells: Vec<[usize; 2]> = d.diff.mismatches.iter().map(|m| [m.0 .0, m.0 .1]).collect();
            Observation::new(json!(cells), json!({"compared": d.diff.compared, "mismatches": d.diff.mismatches, "printed_order": d.printed_order}))
                .note(format!("{} of {} cells differ from the printed matrix", d.diff.mismatches.len(), d.diff.compared))
        });
        self.record("dual.diff", Stage::Duality, repro, diff);
    }

    fn run_campedelli(&mut self) {
        let p = self.cfg.free_primes.first().copied().unwrap_or(29);
        let d = self.dual_model(p);
        self.campedelli(p, d.as_ref().map_err(Clone::clone));
    }

    fn campedelli(&mut self, p: u64, d: Result<&DualModel<PrimeField>, String>) {
        let repro = self.repro(&[p], field_name(Some(p)));
        let cover = d.and_then(|d| {
            let h = buchberger(&d.slice.nonlinear)
                .map_err(err)?
                .hilbert
                .ok_or("inhomogeneous slice")?;
            let s = surface_from_hilbert("campedelli cover", &h, 1).map_err(err)?;
            let f = fp(p)?;
            // Z/7 acts on the slice coordinates through the dual weights
            let z = f.root_of_unity(7).map_err(err)?;
            let w = dual_weights();
            let mut g = ExactMatrix::zeros(&f, 6, 6);
            for i in 0..6 {
                g.set(i, i, f.pow(&z, w[i]));
            }
            let free =
                certify_free_action(&d.slice, &[("g".into(), g, 7)], self.cfg.seed).map_err(err)?;
            Ok((s, h, free.free))
        });
        let obs = cover.clone().map(|(s, h, free)| {
            Observation::new(
                json!({"p_g": s.p_g(), "q": s.q(), "k2": s.k_power}),
                json!({"hilbert_polynomial": h.polynomial.to_string(), "degree": h.degree, "chi": s.chi_o, "free": free}),
            )
        });
        self.record("campedelli.cover", Stage::Duality, repro.clone(), obs);
        let quot = cover.and_then(|(s, _, free): (NumericalInvariants, _, bool)| {
            let q = quotient_invariants(&s, 7, free, None).map_err(err)?;
            Ok(Observation::new(
                json!({"p_g": q.p_g(), "q": q.q(), "k2": q.k_power}),
                json!({"chi": q.chi_o, "e": q.e_top}),
            ))
        });
        self.record("campedelli.invariants", Stage::Duality, repro, quot);
    }

    pub fn run_properties(&mut self) {
        let seed = self.cfg.seed;
        let out = (|| {
            let f = fp(101)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut agree = 0;
            let mut sizes = BTreeMap::new();
            for i in 0..200 {
                let n = 2 + i % 5;
                let mut m = ExactMatrix::zeros(&f, n, n);
                for a in 0..n {
                    for b in a + 1..n {
                        let x = f.random(&mut rng);
                        m.set(a, b, x);
                        m.set(b, a, f.neg(&x));
                    }
                }
                let pf = numeric_pfaffian(&m);
                agree += usize::from(f.mul(&pf, &pf) == m.det().map_err(err)?);
                *sizes.entry(n).or_insert(0) += 1;
            }
            Ok(Observation::new(
                json!({"matrices": 200, "agree": agree}),
                json!({"sizes": sizes}),
            ))
        })();
        self.record(
            "props.pfaffian",
            Stage::Properties,
            self.repro(&[101], "F_101"),
            out,
        );
        let out = (|| {
            let f = fp(31)?;
            let ring = plucker_ring(&f, 2, 7).map_err(err)?;
            let ideal = plucker_ideal(&ring, 2, 7).map_err(err)?;
            let space = WedgeSpace::new(2, 7).map_err(err)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (mut tested, mut vanish) = (0, 0);
            while tested < 1000 {
                let data = (0..14).map(|_| f.random(&mut rng)).collect();
                let plane = ExactMatrix::new(&f, 2, 7, data).map_err(err)?;
                let Ok(pt) = plucker_point(&plane) else {
                    continue;
                };
                let v = pt.to_dense(&f, &space);
                vanish += usize::from(ideal.iter().all(|q| q.eval(&v).is_ok_and(|x| x == 0)));
                tested += 1;
            }
            Ok(Observation::new(
                json!({"planes": tested, "vanishing": vanish}),
                json!({"quadrics": ideal.len()}),
            ))
        })();
        self.record(
            "props.plucker",
            Stage::Properties,
            self.repro(&[31], "F_31"),
            out,
        );
        let out = (|| {
            let f = fp(29)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let random_gl = |rng: &mut ChaCha8Rng| loop {
                let data = (0..36).map(|_| f.random(rng)).collect();
                let m = ExactMatrix::new(&f, 6, 6, data).expect("square");
                if m.det().is_ok_and(|d| d != 0) {
                    return m;
                }
            };
            let mut ok = 0;
            for i in 0..100 {
                let k = 2 + i % 2;
                let g = random_gl(&mut rng);
                let h = random_gl(&mut rng);
                let lhs = induced_action(&g.mul(&h).map_err(err)?, k).map_err(err)?;
                let rhs = induced_action(&g, k)
                    .map_err(err)?
                    .mul(&induced_action(&h, k).map_err(err)?)
                    .map_err(err)?;
                ok += usize::from(lhs == rhs);
            }
            Ok(Observation::new(
                json!({"pairs": 100, "homomorphic": ok}),
                json!({"n": 6, "k": [2, 3]}),
            ))
        })();
        self.record(
            "props.induced_action",
            Stage::Properties,
            self.repro(&[29], "F_29"),
            out,
        );
    }
}

/// `τ_7` weights of the dual coordinates.
fn dual_weights() -> Vec<u64> {
    DUAL_REPRESENTATIVES
        .iter()
        .map(|n| {
            let v: Vec<u64> = n[2..].split('_').filter_map(|s| s.parse().ok()).collect();
            (v[0] + v[1] + 5) % 7
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_equations_ignore_term_order() {
        assert_eq!(
            canonical_equation("x_{1,5}-c_{4,6}x_{2,4}-c_{1,2}x_{6,7}"),
            canonical_equation("x_{1,5}-c_{1,2}x_{6,7}-c_{4,6}x_{2,4}")
        );
        assert_ne!(
            canonical_equation("x_{1,5}-c_{4,6}x_{2,4}"),
            canonical_equation("x_{1,5}+c_{4,6}x_{2,4}")
        );
        assert_eq!(canonical_equation("a + b"), "+a+b");
    }

    #[test]
    fn pipelines() {
        use ModelName::*;
        assert_eq!(Runner::pipeline(SZ, false), vec![SZ]);
        assert_eq!(Runner::pipeline(SZ, true), vec![Y, Z, WZ, SZ]);
        assert_eq!(Runner::pipeline(SFmt, true), vec![SFmt, Y, Z, WZ, SZ]);
    }

    #[test]
    fn agreement_collapses_equal_values() {
        let m: BTreeMap<u64, Value> = [(11, json!(1)), (13, json!(1))].into_iter().collect();
        assert_eq!(agree(&m), json!(1));
        let m: BTreeMap<u64, Value> = [(11, json!(1)), (13, json!(2))].into_iter().collect();
        assert_eq!(agree(&m), json!({"11": 1, "13": 2}));
    }
}
