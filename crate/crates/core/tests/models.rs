use gq_core::exactfield::{Field, PrimeField, Rationals};
use gq_core::grassmann::GrassmannianSpec;
use gq_core::models::*;
use gq_core::polyring::{coefficient_matrix, span_dimension, SparsePoly};
use gq_core::symmetry::{invariant_q1_family, make_group, transform_poly};

const PRINTED_EQUATIONS: [&str; 6] = [
    "x_{1,7}-c_{2,6}x_{2,6}-c_{3,5}x_{3,5}",
    "x_{1,6}-c_{3,6}x_{2,5}-c_{4,5}x_{3,4}",
    "x_{1,5}-c_{4,6}x_{2,4}-c_{1,2}x_{6,7}",
    "x_{1,4}-c_{1,2}x_{2,3}-c_{4,6}x_{5,7}",
    "x_{1,3}-c_{3,6}x_{4,7}-c_{4,5}x_{5,6}",
    "x_{1,2}-c_{2,6}x_{3,7}-c_{3,5}x_{4,6}",
];

fn same_span<F: Field>(a: &[SparsePoly<F>], b: &[SparsePoly<F>]) -> bool {
    let all: Vec<_> = a.iter().chain(b).cloned().collect();
    let r = span_dimension(&all);
    r == span_dimension(a) && r == span_dimension(b)
}

#[test]
fn z_equations_match_the_derived_family() {
    let derived = z_equation_templates();
    // Same set of equations; the third and fourth list their terms in the other order.
    for (d, p) in derived.iter().zip(PRINTED_EQUATIONS) {
        let mut dt: Vec<&str> = d.split('-').collect();
        let mut pt: Vec<&str> = p.split('-').collect();
        dt.sort_unstable();
        pt.sort_unstable();
        assert_eq!(dt, pt, "{d} vs {p}");
    }
    for e in z_structure() {
        for &(_, (i, j)) in &e.terms {
            assert_eq!(
                (i + j + 5) % 7,
                e.weight(),
                "equation {} is not homogeneous",
                e.m
            );
        }
    }
}

#[test]
fn coordinate_points_lie_on_z() {
    let f = PrimeField::new(29).unwrap();
    let c = generic_integers_for(1, 6, &[29]);
    let z = build_z(&f, &c, Some(1)).unwrap();
    for name in ["x_2_7", "x_3_6", "x_4_5"] {
        let mut pt = vec![0u64; 21];
        pt[z.ring.index_of(name).unwrap()] = 1;
        assert!(z.contains(&pt).unwrap(), "{name}");
    }
    let mut pt = vec![0u64; 21];
    pt[z.ring.index_of("x_2_3").unwrap()] = 1;
    assert!(!z.contains(&pt).unwrap());
}

#[test]
fn z_is_invariant() {
    let f = PrimeField::new(29).unwrap();
    let c = generic_integers_for(4, 6, &[29]);
    let h1 = [3, -5, 7];
    let h2 = [2, 9, -4];
    let s = build_s_z(&f, &c, &h1, &h2, Some(4)).unwrap();
    let g = make_group("D7_rho7", &f).unwrap();
    for (name, m) in g.coordinate_generators().unwrap() {
        let moved: Vec<_> = s
            .linear
            .iter()
            .map(|l| transform_poly(l, &m).unwrap())
            .collect();
        assert!(same_span(&s.linear, &moved), "{name}");
    }
}

#[test]
fn format_matches_pipeline() {
    let p29 = PrimeField::new(29).unwrap();
    for seed in [1u64, 2, 3] {
        let c = generic_integers_for(seed, 6, &[29]);
        let h = generic_integers_for(seed + 100, 6, &[29]);
        let h1 = [h[0], h[1], h[2]];
        let h2 = [h[3], h[4], h[5]];
        let fmt = build_s_format_from_hyperplanes(&p29, &c, &h1, &h2, Some(seed)).unwrap();
        let pipe = s_format_pipeline_quadrics(&p29, &c, &h1, &h2).unwrap();
        assert_eq!(span_dimension(&fmt.nonlinear), 35);
        assert!(same_span(&fmt.nonlinear, &pipe), "seed {seed}");
        let pq = build_s_format_from_hyperplanes(&Rationals, &c, &h1, &h2, Some(seed)).unwrap();
        let pipeq = s_format_pipeline_quadrics(&Rationals, &c, &h1, &h2).unwrap();
        assert!(same_span(&pq.nonlinear, &pipeq), "seed {seed} over Q");
    }
}

#[test]
fn format_action_preserves_pfaffians() {
    let f = PrimeField::new(29).unwrap();
    let c = generic_integers_for(7, 6, &[29]);
    let fmt = build_s_format_from_hyperplanes(&f, &c, &[1, 2, 3], &[4, -1, 6], None).unwrap();
    let g = s_format_action(&f).unwrap();
    for (name, m) in g.coordinate_generators().unwrap() {
        let moved: Vec<_> = fmt
            .nonlinear
            .iter()
            .map(|q| transform_poly(q, &m).unwrap())
            .collect();
        assert!(same_span(&fmt.nonlinear, &moved), "{name}");
    }
}

#[test]
fn builder_errors() {
    let q = Rationals;
    assert_eq!(
        build_z(&q, &[1, 2, 0, 4, 5, 6], None).unwrap_err(),
        ModelsError::ZeroParameter("c_3_6".into())
    );
    let f = PrimeField::new(7).unwrap();
    assert!(matches!(
        build_z(&f, &[1, 2, 14, 4, 5, 6], None),
        Err(ModelsError::ZeroParameter(_))
    ));
    assert_eq!(
        build_s_z(&q, &[1; 6], &[1, 2, 3], &[2, 4, 5], None).unwrap_err(),
        ModelsError::DegenerateHyperplanes
    );
    let mut alpha = symmetric_alpha(3);
    let key = *alpha.keys().next().unwrap();
    *alpha.get_mut(&key).unwrap() += 1;
    assert!(matches!(
        build_t_gr36(&q, &alpha, None),
        Err(ModelsError::AsymmetricAlpha(_))
    ));
}

#[test]
fn t_model_is_invariant() {
    let f = PrimeField::new(29).unwrap();
    let t = build_t_gr36(&f, &symmetric_alpha(5), Some(5)).unwrap();
    assert_eq!(t.linear.len(), 7);
    let residue0 = t
        .linear
        .iter()
        .find(|l| l.variables().iter().any(|&v| t.ring.names[v] == "x_1_2_4"))
        .unwrap();
    let names: Vec<&str> = residue0
        .variables()
        .iter()
        .map(|&v| t.ring.names[v].as_str())
        .collect();
    assert!(names.contains(&"x_3_5_6"));
    let g = make_group("D7_gr36", &f).unwrap();
    for (name, m) in g.coordinate_generators().unwrap() {
        let moved: Vec<_> = t
            .linear
            .iter()
            .map(|l| transform_poly(l, &m).unwrap())
            .collect();
        assert!(same_span(&t.linear, &moved), "{name}");
    }
}

#[test]
fn dual_threefold() {
    let f = PrimeField::new(29).unwrap();
    let c = generic_integers_for(2, 6, &[29]);
    let d = build_dual(&f, &c, &[2, -3, 5], Some(2)).unwrap();
    assert_eq!(d.datum.annihilator.len(), 14);
    assert!(d.datum.pairing_vanishes(&f));
    assert_eq!(d.wdual.nonlinear.len(), 7);
    assert_eq!(span_dimension(&d.wdual.nonlinear), 7);
    let weights: Vec<u64> = DUAL_REPRESENTATIVES
        .iter()
        .map(|n| {
            let v: Vec<u64> = n[2..].split('_').map(|s| s.parse().unwrap()).collect();
            (v[0] + v[1] + 5) % 7
        })
        .collect();
    assert!(cubic_span_invariant(&f, &d.wdual.nonlinear, &weights).unwrap());
    assert_eq!(d.printed_order, vec![1, 2, 4, 3, 7, 5, 6]);
    let cells: Vec<(usize, usize)> = d.diff.mismatches.iter().map(|m| m.0).collect();
    assert_eq!(cells, vec![(3, 4), (3, 5), (3, 7), (4, 5), (5, 6)]);
}

#[test]
fn reid_sign_correction() {
    let f = PrimeField::new(43).unwrap();
    let g = make_group("F21", &f).unwrap();
    let b = g
        .coordinate_generators()
        .unwrap()
        .into_iter()
        .find(|(n, _)| n == "b")
        .unwrap()
        .1;
    let lambda = reid_orbit_lambda(3);
    let invariant = |variant| {
        let m = build_appendix_a1(&f, &lambda, variant, None).unwrap();
        let moved: Vec<_> = m
            .nonlinear
            .iter()
            .map(|q| transform_poly(q, &b).unwrap())
            .collect();
        same_span(&m.nonlinear, &moved)
    };
    assert!(!invariant(ReidVariant::Printed));
    assert!(invariant(ReidVariant::Corrected));
}

#[test]
fn y_transfers_into_z() {
    let f = PrimeField::new(29).unwrap();
    let fam = invariant_q1_family(&f).unwrap();
    let c = generic_integers_for(9, 6, &[29]);
    let vals: Vec<u64> = fam
        .parameters
        .iter()
        .map(|n| f.from_i64(c[Z_PARAMETERS.iter().position(|p| p == n).unwrap()]))
        .collect();
    let lambda = fam.section(&f, &vals).unwrap();
    assert_eq!(
        z_parameters_from_section(&f, &lambda),
        vals_in_z_order(&f, &c)
    );
    let y = build_y_quadrics(&f, &lambda, None).unwrap();
    let z = build_z(&f, &c, None).unwrap();
    let spec = GrassmannianSpec::new(&f, 2, 6).unwrap();
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(11);
    let mut found = 0;
    // Random planes: λ(a,b) ∈ ⟨a,b⟩ exactly when the Y quadrics vanish.
    for _ in 0..50 {
        let a: Vec<u64> = (0..6).map(|_| f.random(&mut rng)).collect();
        let b: Vec<u64> = (0..6).map(|_| f.random(&mut rng)).collect();
        let p = plucker(&f, &a, &b);
        let on_y = y.contains(&p).unwrap();
        let img = lambda.eval(&f, &a, &b);
        let in_span =
            gq_core::exactfield::ExactMatrix::from_rows(&f, vec![a.clone(), b.clone(), img])
                .unwrap()
                .rank()
                <= 2;
        assert_eq!(on_y, in_span);
        assert!(spec.contains(&p).unwrap());
        if on_y {
            found += 1;
        }
    }
    assert_eq!(found, 0, "random planes are not on Y");
    // Points of Y: b an eigenvector of b ↦ λ(a,b) gives λ(a,b) ∈ ⟨b⟩.
    let mut hits = 0;
    for _ in 0..20 {
        let a: Vec<u64> = (0..6).map(|_| f.random(&mut rng)).collect();
        let part = lambda.partial(&f, &a);
        for t in 1..29u64 {
            let shifted = part
                .sub(&gq_core::exactfield::ExactMatrix::identity(&f, 6).scale(&t))
                .unwrap();
            for b in shifted.kernel_basis() {
                let p = plucker(&f, &a, &b);
                assert!(y.contains(&p).unwrap());
                let q = transfer_y_to_z(&f, &lambda, &p).unwrap();
                assert!(z.contains(&q).unwrap());
                hits += 1;
            }
        }
    }
    assert!(hits > 0);
}

fn vals_in_z_order(f: &PrimeField, c: &[i64]) -> Vec<u64> {
    c.iter().map(|x| f.from_i64(*x)).collect()
}

fn plucker(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = Vec::new();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            out.push(f.sub(&f.mul(&a[i], &b[j]), &f.mul(&a[j], &b[i])));
        }
    }
    out
}

#[test]
fn export_is_canonical() {
    let c = generic_integers(1, 6);
    let z = build_z(&Rationals, &c, Some(1)).unwrap();
    let e = z.export();
    assert_eq!(e.linear.len(), 6);
    assert_eq!(e.nonlinear.len(), 35);
    let again = build_z(&Rationals, &c, Some(1)).unwrap().export();
    assert_eq!(
        serde_json::to_string(&e).unwrap(),
        serde_json::to_string(&again).unwrap()
    );
    let (m, _) = coefficient_matrix(&z.linear);
    assert_eq!(m.rank(), 6);
}

#[test]
fn campedelli_slice_invariants() {
    use gq_core::cohomology::{quotient_invariants, surface_from_hilbert};
    use gq_core::polyring::buchberger;
    let f = PrimeField::new(29).unwrap();
    let c = generic_integers_for(2, 6, &[29]);
    let d = build_dual(&f, &c, &[2, -3, 5], Some(2)).unwrap();
    assert_eq!(d.slice.nonlinear.len(), 7);
    let h = buchberger(&d.slice.nonlinear).unwrap().hilbert.unwrap();
    assert_eq!(h.projective_dim, 2);
    assert_eq!(h.degree, 14);
    assert_eq!(h.polynomial.to_string(), "7t^2-7t+7");
    let s = surface_from_hilbert("campedelli cover", &h, 1).unwrap();
    assert_eq!((s.p_g(), s.q(), s.chi_o, s.k_power), (6, 0, 7, Some(14)));
    let quot = quotient_invariants(&s, 7, true, None).unwrap();
    assert_eq!(
        (quot.p_g(), quot.q(), quot.chi_o, quot.k_power, quot.e_top),
        (0, 0, 1, Some(2), 10)
    );
}
