use gq_core::exactfield::{ExactMatrix, Field, PrimeField, Rationals};
use gq_core::geometry::*;
use gq_core::models::*;
use gq_core::polyring::SparsePoly;
use gq_core::symmetry::*;

fn fp(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn s_z_at(p: u64, c: &[i64]) -> VarietyModel<PrimeField> {
    let f = fp(p);
    let h = generic_integers_for(101, 6, &[p]);
    build_s_z(&f, c, &[h[0], h[1], h[2]], &[h[3], h[4], h[5]], Some(1)).unwrap()
}

fn unit<F: Field>(f: &F, n: usize, terms: &[(usize, i64)]) -> Vec<F::Elem> {
    let mut w = vec![f.zero(); n];
    for &(i, x) in terms {
        w[i - 1] = f.from_i64(x);
    }
    w
}

fn tau(f: &PrimeField) -> ExactMatrix<PrimeField> {
    make_group("D7_rho7", f)
        .unwrap()
        .coordinate_generators()
        .unwrap()[0]
        .1
        .clone()
}

// Oracle for H(w): solve Ω_k(w, b) = 0 by hand-built rows aᵢ = Σ_j w_j Ω_k[j][i].
fn h_oracle(
    q: &Rationals,
    forms: &[ExactMatrix<Rationals>],
    w: &[num_rational::BigRational],
) -> i64 {
    let n = w.len();
    let rows: Vec<Vec<_>> = forms
        .iter()
        .map(|om| {
            (0..n)
                .map(|i| (0..n).fold(q.zero(), |acc, j| q.add(&acc, &q.mul(&w[j], om.get(j, i)))))
                .collect()
        })
        .collect();
    n as i64 - ExactMatrix::from_rows(q, rows).unwrap().rank() as i64 - 1
}

#[test]
fn regularity_of_the_linear_systems() {
    let q = Rationals;
    let c = generic_integers(1, 6);
    let z = build_z(&q, &c, None).unwrap();
    let s = build_s_z(&q, &c, &[3, -5, 7], &[2, 9, -4], None).unwrap();
    let special = vec![
        ("p36".to_string(), unit(&q, 7, &[(3, 1), (6, 2)])),
        ("p27".to_string(), unit(&q, 7, &[(2, 1), (7, -3)])),
        ("p45".to_string(), unit(&q, 7, &[(4, 5), (5, 1)])),
        ("e3".to_string(), unit(&q, 7, &[(3, 1)])),
    ];
    let zf = skew_forms(&z).unwrap();
    let rz = sigma_regularity(&q, &zf, 100, 7, &special).unwrap();
    assert_eq!((rz.forms, rz.generic, rz.random_jumps), (6, 0, 0));
    // one extra projective dimension on the three special planes: H(w) is 2-dimensional as a vector space
    for label in ["p36", "p27", "p45", "e3"] {
        assert_eq!(rz.probe(label), Some(1), "{label}");
    }
    assert_eq!(rz.probes[0].h, h_oracle(&q, &zf, &special[0].1));

    let sf = skew_forms(&s).unwrap();
    let rs = sigma_regularity(&q, &sf, 100, 7, &special).unwrap();
    assert_eq!(
        (rs.forms, rs.generic, rs.random_jumps, rs.random_probes),
        (8, 0, 0, 100)
    );
    assert!(rs.probes.iter().all(|p| p.h == 0));

    let one = sigma_regularity(&q, &sf[..1], 100, 3, &[]).unwrap();
    assert_eq!(one.generic, 5);
    let w = unit(&q, 7, &[(1, 2), (2, -1), (4, 3), (7, 1)]);
    assert_eq!(h_dimension(&q, &sf, &w).unwrap(), h_oracle(&q, &sf, &w));

    assert_eq!(
        sigma_regularity(&q, &[], 10, 1, &[]),
        Err(GeometryError::EmptySystem)
    );
}

#[test]
fn smoothness_on_z_and_the_grassmannian() {
    let q = Rationals;
    let c = generic_integers(1, 6);
    let z = build_z(&q, &c, None).unwrap();
    let names = ["x_3_6", "x_2_7", "x_4_5"];
    for name in names {
        let i = z.ring.index_of(name).unwrap();
        let mut pt = vec![q.zero(); 21];
        pt[i] = q.one();
        let cert = smooth_at(&z, &pt).unwrap();
        assert_eq!(cert.verdict, Verdict::Smooth, "{name}");
        assert_eq!(cert.jacobian_rank, cert.expected_rank);
    }
    let mut off = vec![q.zero(); 21];
    off[0] = q.one();
    off[20] = q.one();
    assert_eq!(smooth_at(&z, &off), Err(GeometryError::PointNotOnModel));
    assert_eq!(
        smooth_at(&z, &vec![q.zero(); 21]),
        Err(GeometryError::NoChartContains)
    );

    let g = VarietyModel {
        name: "Gr(2,7)".into(),
        ambient: Ambient::Plucker {
            k: 2,
            n: 7,
            codim: 0,
        },
        linear: vec![],
        nonlinear: gq_core::grassmann::plucker_ideal(&z.ring, 2, 7).unwrap(),
        ring: z.ring.clone(),
        params: ParameterRecord::default(),
        expected: z.expected.clone(),
        group: None,
    };
    let mut pt = vec![q.zero(); 21];
    pt[0] = q.one();
    pt[6] = q.from_i64(3);
    pt[1] = q.from_i64(-2);
    assert_eq!(smooth_at(&g, &pt).unwrap().verdict, Verdict::Smooth);
}

fn node_point(q: &Rationals) -> Vec<num_rational::BigRational> {
    [
        0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 0, -1, -1, 0, -1, 0, 1, -1, 1, -1, -1,
    ]
    .iter()
    .map(|&v| q.from_i64(v))
    .collect()
}

#[test]
fn unit_parameters_give_a_node() {
    let q = Rationals;
    let pt = node_point(&q);
    for (h1, h2) in [([3, -5, 7], [2, 9, -4]), ([1, 4, -2], [-6, 5, 11])] {
        let s = build_s_z(&q, &[1; 6], &h1, &h2, None).unwrap();
        let cert = smooth_at(&s, &pt).unwrap();
        assert_eq!(cert.verdict, Verdict::Singular);
        assert_eq!((cert.jacobian_rank, cert.expected_rank), (7, 8));
        let rep = classify_singularity(&s, &pt).unwrap();
        assert_eq!((rep.tangent_dim, rep.hessian_rank), (3, Some(3)));
        assert!(rep.node);
    }
    let generic = build_s_z(&q, &generic_integers(1, 6), &[3, -5, 7], &[2, 9, -4], None).unwrap();
    assert_eq!(
        smooth_at(&generic, &pt),
        Err(GeometryError::PointNotOnModel)
    );
}

#[test]
fn plane_census_locates_the_node() {
    let p = 11;
    let s = s_z_at(p, &[1; 6]);
    let census = plane_census(&s).unwrap();
    assert_eq!(census.count(), 159);
    let sing = singular_planes(&s, &census).unwrap();
    assert_eq!(sing.len(), 1);
    let f = fp(p);
    let node: Vec<String> = node_point(&Rationals)
        .iter()
        .map(|x| f.format(&f.from_i64(x.numer().try_into().unwrap())))
        .collect();
    let first = sing[0].point.iter().position(|c| c != "0").unwrap();
    // normalize the census point to the node's scale
    let scale = f.from_i64(node[first].parse::<i64>().unwrap());
    let found: Vec<String> = sing[0]
        .point
        .iter()
        .map(|c| f.format(&f.mul(&f.from_i64(c.parse::<i64>().unwrap()), &scale)))
        .collect();
    assert_eq!(found, node);

    for (label, c) in [
        ("generic", generic_integers_for(1, 6, &[13])),
        ("unit", vec![1; 6]),
    ] {
        let s = s_z_at(13, &c);
        let census = plane_census(&s).unwrap();
        let sing = singular_planes(&s, &census).unwrap();
        assert_eq!(sing.len(), usize::from(label == "unit"), "{label}");
    }
}

#[test]
fn tau_acts_freely_on_the_surface() {
    for p in [29, 43] {
        let f = fp(p);
        let c = generic_integers_for(1, 6, &[p]);
        let h = generic_integers_for(101, 6, &[p]);
        let t = tau(&f);
        let z = build_z(&f, &c, None).unwrap();
        let fz = fixed_locus(&z, "tau", &t, 7, 3).unwrap();
        assert!(fz.is_resolved());
        assert_eq!(fz.isolated_points(), 3);
        let with_points: Vec<&EigenComponent> = fz
            .components
            .iter()
            .filter(|c| c.kind == LocusKind::Points)
            .collect();
        assert_eq!(with_points.len(), 1);
        let comp = with_points[0];
        assert_eq!(comp.hilbert.as_deref(), Some("3"));
        assert_eq!(
            comp.support,
            vec!["x_2_7*x_3_6", "x_2_7*x_4_5", "x_3_6*x_4_5"]
        );
        let names = &z.ring.names;
        let mut hit: Vec<&str> = comp
            .points
            .as_ref()
            .unwrap()
            .rational
            .iter()
            .map(|pt| {
                let nz: Vec<usize> = (0..21).filter(|&i| pt[i] != 0).collect();
                assert_eq!(nz.len(), 1);
                names[nz[0]].as_str()
            })
            .collect();
        hit.sort();
        assert_eq!(hit, vec!["x_2_7", "x_3_6", "x_4_5"]);
        // other weight classes: every support pattern is killed by a monomial quadric
        for c in fz.components.iter().filter(|c| c.kind == LocusKind::Empty) {
            assert!(!c.support.is_empty(), "{}", c.eigenvalue);
        }

        let w = build_w_z(&f, &c, &[h[0], h[1], h[2]], None).unwrap();
        let s = build_s_z(&f, &c, &[h[0], h[1], h[2]], &[h[3], h[4], h[5]], None).unwrap();
        for m in [&w, &s] {
            let cert = certify_free_action(m, &[("tau".into(), t.clone(), 7)], 5).unwrap();
            assert!(cert.free, "{} at {p}", m.name);
        }
    }
}

#[test]
fn powers_of_tau_are_free_on_w_z() {
    let p = 29;
    let f = fp(p);
    let c = generic_integers_for(1, 6, &[p]);
    let h = generic_integers_for(101, 6, &[p]);
    let w = build_w_z(&f, &c, &[h[0], h[1], h[2]], None).unwrap();
    let t = tau(&f);
    let mut elements = Vec::new();
    let mut g = t.clone();
    for k in 1..7 {
        elements.push((format!("tau^{k}"), g.clone(), 7));
        g = g.mul(&t).unwrap();
    }
    let cert = certify_free_action(&w, &elements, 2).unwrap();
    assert!(cert.free);
    assert_eq!(cert.elements.len(), 6);
}

#[test]
fn sigma_on_the_surface_fixes_a_conic_and_ten_points() {
    let p = 13;
    let f = fp(p);
    let s = s_z_at(p, &generic_integers_for(1, 6, &[p]));
    let g = dihedral_involution("D7_rho7", &f).unwrap();
    let fl = fixed_locus_involution(&s, "sigma", &g, 5).unwrap();
    assert!(fl.is_resolved());
    let minus = fl.components.iter().find(|c| c.eigenvalue == "-1").unwrap();
    let plus = fl.components.iter().find(|c| c.eigenvalue == "+1").unwrap();
    assert_eq!(minus.kind, LocusKind::Curve);
    let conic = minus.curve.as_ref().unwrap();
    assert_eq!(
        (conic.degree, conic.arithmetic_genus, conic.span_dim),
        (2, 0, Some(2))
    );
    assert_eq!(conic.hilbert, "2t+1");
    assert_eq!(conic.rational_points, Some(p as usize + 1));
    assert_eq!(minus.isolated.as_ref().map_or(0, |i| i.geometric), 0);

    assert_eq!(plus.kind, LocusKind::Points);
    let pts = plus.points.as_ref().unwrap();
    assert!(pts.reduced);
    assert_eq!((pts.length, pts.geometric), (10, 10));
    assert_eq!(pts.degrees, vec![2, 3, 5]);
    assert_eq!(pts.counts, vec![0, 2, 3, 2, 5, 5]);
    assert_eq!(fl.isolated_points(), 10);
    assert_eq!(fl.hilbert_polynomial().as_deref(), Some("2t+11"));
}

#[test]
fn sigma_classification_agrees_at_eleven_and_thirteen() {
    // parameters distinct and nonzero modulo both primes
    let c = generic_integers_for(1, 6, &[11, 13]);
    let h = generic_integers_for(101, 6, &[11, 13]);
    let mut seen = Vec::new();
    for p in [11, 13] {
        let f = fp(p);
        let s = build_s_z(&f, &c, &[h[0], h[1], h[2]], &[h[3], h[4], h[5]], Some(1)).unwrap();
        let g = dihedral_involution("D7_rho7", &f).unwrap();
        let fl = fixed_locus_involution(&s, "sigma", &g, 5).unwrap();
        assert!(fl.is_resolved());
        let curves: Vec<_> = fl
            .curves()
            .iter()
            .map(|c| (c.degree, c.arithmetic_genus, c.span_dim))
            .collect();
        seen.push((fl.hilbert_polynomial(), curves, fl.isolated_points()));
    }
    assert_eq!(seen[0], seen[1]);
    assert_eq!(
        seen[0],
        (Some("2t+11".to_string()), vec![(2, 0, Some(2))], 10)
    );
}

#[test]
fn sigma_on_the_gr36_model_fixes_an_elliptic_sextic() {
    let p = 11;
    let f = fp(p);
    let t = build_t_gr36(&f, &symmetric_alpha(5), Some(5)).unwrap();
    let g = dihedral_involution("D7_gr36", &f).unwrap();
    let fl = fixed_locus_involution(&t, "sigma", &g, 5).unwrap();
    let plus = fl.components.iter().find(|c| c.eigenvalue == "+1").unwrap();
    let minus = fl.components.iter().find(|c| c.eigenvalue == "-1").unwrap();
    let e = plus.curve.as_ref().unwrap();
    assert_eq!((e.degree, e.arithmetic_genus, e.span_dim), (6, 1, Some(5)));
    assert_eq!(e.hilbert, "6t");
    assert_eq!(e.hasse_bound, Some(true));
    assert_eq!(plus.isolated.as_ref().map_or(0, |i| i.geometric), 0);
    let pts = minus.points.as_ref().unwrap();
    assert_eq!((pts.geometric, pts.reduced), (6, true));
    assert_eq!(fl.isolated_points(), 6);
}

#[test]
fn fixed_locus_errors() {
    let f = fp(13);
    let s = s_z_at(13, &generic_integers_for(1, 6, &[13]));
    let fake = ExactMatrix::identity(&f, 21);
    assert_eq!(
        fixed_locus_involution(&s, "id", &fake, 1).err(),
        Some(GeometryError::NotInvolution)
    );
    let mut scaled = ExactMatrix::identity(&f, 21);
    scaled.set(0, 0, f.from_i64(3));
    assert_eq!(
        fixed_locus_involution(&s, "diag", &scaled, 1).err(),
        Some(GeometryError::NotInvolution)
    );
    let mut perm = ExactMatrix::zeros(&f, 21, 21);
    for i in 0..21 {
        perm.set(i, (i + 1) % 21, f.one());
    }
    let mut cube = ExactMatrix::identity(&f, 21);
    for _ in 0..3 {
        cube = cube.mul(&perm).unwrap();
    }
    // order 7 element over a field without ζ7
    assert_eq!(
        fixed_locus(&s, "shift3", &cube, 7, 1).err(),
        Some(GeometryError::FieldLacksRoot { order: 7, p: 13 })
    );
}

#[test]
fn invariance_checks() {
    let f = fp(43);
    let (a1, a2) = build_appendix_a_models(&f, 3).unwrap();
    let f21 = make_group("F21", &f).unwrap();
    let rep = model_invariance(&a1, &f21.coordinate_generators().unwrap()).unwrap();
    assert!(rep.iter().all(|r| r.invariant));

    let g42 = make_group("G42", &f).unwrap();
    let m = build_appendix_a1(&f, &[5; 6], ReidVariant::Corrected, None).unwrap();
    assert!(model_invariance(&m, &g42.coordinate_generators().unwrap())
        .unwrap()
        .iter()
        .all(|r| r.invariant));

    // the permutation model keeps its linear forms but not its quadrics
    let d7 = make_group("D7_perm", &f).unwrap();
    let rep = model_invariance(&a2, &d7.coordinate_generators().unwrap()).unwrap();
    assert!(rep.iter().all(|r| r.degrees[0] == (1, true)));
    assert!(rep.iter().all(|r| !r.invariant));

    // change of basis recovered exactly
    let b = f21.coordinate_generators().unwrap()[1].1.clone();
    let a = ideal_invariance(&a1.nonlinear, &b).unwrap().unwrap();
    let moved: Vec<SparsePoly<PrimeField>> = a1
        .nonlinear
        .iter()
        .map(|p| transform_poly(p, &b).unwrap())
        .collect();
    for (i, m) in moved.iter().enumerate() {
        let mut comb = SparsePoly::zero(&a1.ring);
        for (j, q) in a1.nonlinear.iter().enumerate() {
            comb = comb.add(&q.scale(a.get(i, j)));
        }
        assert_eq!(&comb, m);
    }

    let mut perturbed = a1.nonlinear.clone();
    let x0 = SparsePoly::var(&a1.ring, 0);
    let x1 = SparsePoly::var(&a1.ring, 1);
    perturbed[0] = perturbed[0].add(&x0.mul(&x1));
    assert_eq!(ideal_invariance(&perturbed, &b).unwrap(), None);
    let mixed = vec![a1.nonlinear[0].clone(), x0];
    assert_eq!(
        ideal_invariance(&mixed, &b),
        Err(GeometryError::MixedDegrees)
    );
}

#[test]
fn frobenius_element_has_three_fixed_points_per_eigenspace() {
    let f = fp(43);
    let (a1, _) = build_appendix_a_models(&f, 3).unwrap();
    let b = make_group("F21", &f)
        .unwrap()
        .coordinate_generators()
        .unwrap()[1]
        .1
        .clone();
    let fl = fixed_locus(&a1, "b", &b, 3, 1).unwrap();
    assert!(fl.is_resolved());
    assert_eq!(fl.components.len(), 3);
    for c in &fl.components {
        assert_eq!(c.kind, LocusKind::Points, "{}", c.eigenvalue);
        assert_eq!(c.points.as_ref().unwrap().geometric, 3, "{}", c.eigenvalue);
    }
    let one = fl.components.iter().find(|c| c.eigenvalue == "1").unwrap();
    assert_eq!(one.points.as_ref().unwrap().rational.len(), 3);
    assert_eq!(one.eigenspace_dim, 5);
}

#[test]
fn eigenspace_decomposition() {
    let f = fp(29);
    let t = tau(&f);
    let spaces = eigenspaces(&t, 7).unwrap();
    assert_eq!(spaces.len(), 7);
    assert_eq!(spaces.iter().map(|s| s.1.len()).sum::<usize>(), 21);
    assert!(spaces.iter().all(|s| s.1.len() == 3));
    assert_eq!(
        eigenspaces(&dihedral_involution("D7_rho7", &fp(13)).unwrap(), 7).err(),
        Some(GeometryError::FieldLacksRoot { order: 7, p: 13 })
    );
}
