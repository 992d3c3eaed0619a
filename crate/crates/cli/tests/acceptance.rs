use gq_cli::{full_report, CertificationReport, ModelName, RunConfig, Verdict};

/// Check ids making up each acceptance criterion. Equality with the expected
/// table is exact for every entry.
const CRITERIA: [(u32, &str, &[&str]); 13] = [
    (
        1,
        "invariant family",
        &[
            "family.parameters",
            "family.slots",
            "family.equivariance",
            "z.invariance",
        ],
    ),
    (2, "equations of Z", &["z.equations", "z.homogeneous"]),
    (
        3,
        "format consistency",
        &[
            "s_fmt.quadric_span",
            "s_fmt.matches_pipeline",
            "s_fmt.invariance",
        ],
    ),
    (
        4,
        "smoothness evidence",
        &[
            "s_z.regularity_generic",
            "z.regularity_special",
            "z.smooth_points",
            "s_z.nodal_member",
        ],
    ),
    (
        5,
        "freeness",
        &["s_z.free", "w_z.free", "z.tau_fixed_points"],
    ),
    (
        6,
        "involution fixed locus",
        &[
            "s_z.sigma_hilbert",
            "s_z.sigma_curve",
            "s_z.sigma_isolated",
            "s_z.sigma_prime_independent",
        ],
    ),
    (
        7,
        "Hodge diamonds",
        &[
            "hodge.z",
            "hodge.w",
            "hodge.s",
            "deformations",
            "deformations.s_h2",
        ],
    ),
    (
        8,
        "quotients",
        &["quotient.s", "quotient.w", "quotient.cy36"],
    ),
    (
        9,
        "involution quotient",
        &["involution.sigma", "involution.t"],
    ),
    (
        10,
        "Gr(3,6)",
        &[
            "gr36.classes",
            "gr36.hilbert_numerators",
            "t36.invariance",
            "t36.sigma",
        ],
    ),
    (
        11,
        "appendix A",
        &[
            "a1.f21_relations",
            "a1.stated_relation",
            "a1.printed_invariant",
            "a1.corrected_invariant",
            "a1.g42_invariant",
            "a1.f21_fixed_points",
            "a2.invariant",
        ],
    ),
    (
        12,
        "duality",
        &[
            "dual.annihilator",
            "dual.cubics",
            "dual.invariance",
            "campedelli.cover",
            "campedelli.invariants",
            "dual.diff",
        ],
    ),
    (
        13,
        "property suites",
        &[
            "props.pfaffian",
            "props.plucker",
            "props.induced_action",
            "s_z.sigma_prime_independent",
        ],
    ),
];

/// Checks whose verdict only has to be reported with a certificate.
const REPORTED_ONLY: [&str; 1] = ["a2.invariant"];

/// Criteria known not to hold, and the checks responsible.
const KNOWN_FAILURES: [(u32, &[&str]); 1] = [(11, &["a1.stated_relation", "a1.printed_invariant"])];

fn failing(report: &CertificationReport, ids: &[&str]) -> Vec<String> {
    ids.iter()
        .filter_map(|id| match report.check(id) {
            None => Some(format!("{id}: missing")),
            Some(c)
                if REPORTED_ONLY.contains(id)
                    && c.verdict != Verdict::Inconclusive
                    && !c.evidence.is_null() =>
            {
                None
            }
            Some(c) if c.verdict == Verdict::Pass => None,
            Some(c) => Some(format!(
                "{id}: {} (observed {})",
                c.verdict.as_str(),
                c.observed
            )),
        })
        .collect()
}

fn main() {
    let cfg = RunConfig::new(ModelName::SZ);
    let report = full_report(&cfg).expect("report runs");
    let again = full_report(&cfg).expect("report runs");
    let deterministic = report.to_json() == again.to_json();

    let mut unexpected = Vec::new();
    for (n, name, ids) in CRITERIA {
        let mut bad = failing(&report, ids);
        if n == 13 && !deterministic {
            bad.push("report JSON differs between two runs".into());
        }
        if bad.is_empty() {
            println!("criterion {n:>2} PASS {name}");
        } else {
            println!("criterion {n:>2} FAIL {name}: {}", bad.join("; "));
        }
        let known: Vec<&str> = KNOWN_FAILURES
            .iter()
            .find(|k| k.0 == n)
            .map_or(vec![], |k| k.1.to_vec());
        let culprits: Vec<&str> = bad
            .iter()
            .map(|b| b.split(':').next().unwrap_or(""))
            .collect();
        if culprits != known {
            unexpected.push(format!("criterion {n}: {bad:?}"));
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected acceptance results: {unexpected:#?}");
        std::process::exit(1);
    }
}
