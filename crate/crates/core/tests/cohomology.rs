use gq_core::cohomology::*;
use gq_core::exactfield::{PrimeField, Rationals};
use gq_core::models::*;
use proptest::prelude::*;

// Weights differing by a multiple of (1,…,1) give the same bundle: det V is trivial.
fn same_bundle(a: &WeightedBundle, b: &WeightedBundle) -> bool {
    let (x, y) = (a.gl_weight(), b.gl_weight());
    x.iter().zip(&y).all(|(u, v)| u - v == x[0] - y[0])
}

fn binom(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn bott_examples() {
    assert_eq!(
        bott_cohomology(&WeightedBundle::line(2, 7, 0)).unwrap(),
        vec![(0, 1)]
    );
    assert_eq!(
        bott_cohomology(&WeightedBundle::line(2, 7, -7)).unwrap(),
        vec![(10, 1)]
    );
    assert_eq!(
        bott_cohomology(&WeightedBundle::line(2, 7, 1)).unwrap(),
        vec![(0, 21)]
    );
    for t in -6..0 {
        assert!(bott_cohomology(&WeightedBundle::line(2, 7, t))
            .unwrap()
            .is_empty());
    }
    // T = Ω^9(7) on Gr(2,7)
    let om9 = omega_decompose(9, 2, 7, 7).unwrap();
    assert_eq!(om9.len(), 1);
    assert!(same_bundle(&om9[0].0, &WeightedBundle::tangent(2, 7)));
    let tan = bott_cohomology(&om9[0].0).unwrap();
    assert_eq!(tan, vec![(0, 48)]);
    assert!(bott_cohomology(&om9[0].0.twisted(-1))
        .unwrap()
        .iter()
        .all(|&(d, _)| d != 3));
    assert!(tan.iter().all(|&(d, _)| d != 2));
    assert!(matches!(
        WeightedBundle::new(2, 7, vec![0, 1], vec![0; 5], 0),
        Err(CohomologyError::BadWeight(_))
    ));
    assert!(matches!(
        WeightedBundle::new(2, 7, vec![0], vec![0; 5], 0),
        Err(CohomologyError::BadWeight(_))
    ));
}

#[test]
fn cotangent_decomposition() {
    let p0 = omega_decompose(0, 2, 7, 0).unwrap();
    assert_eq!(p0, vec![(WeightedBundle::line(2, 7, 0), 1)]);
    let p1 = omega_decompose(1, 2, 7, 0).unwrap();
    assert_eq!(p1.len(), 1);
    assert_eq!(p1[0].0.rank().unwrap(), 10);
    for p in 0..=10 {
        let total: i64 = omega_decompose(p, 2, 7, 0)
            .unwrap()
            .iter()
            .map(|(b, m)| b.rank().unwrap() * *m as i64)
            .sum();
        assert_eq!(total, binom(10, p as i64), "p = {p}");
    }
    assert_eq!(
        omega_decompose(11, 2, 7, 0),
        Err(CohomologyError::BadRange { p: 11, dim: 10 })
    );
    // Hodge numbers of the Grassmannian itself
    for p in 0..=10 {
        let h: Vec<(usize, i64)> = omega_decompose(p, 2, 7, 0)
            .unwrap()
            .iter()
            .flat_map(|(b, _)| bott_cohomology(b).unwrap())
            .collect();
        let total: i64 = h.iter().map(|x| x.1).sum();
        assert!(h.iter().all(|&(d, _)| d == p));
        assert_eq!(total, box_partitions(p, 2, 7) as i64);
    }
}

#[test]
fn hodge_numbers_of_the_tower() {
    let z = hodge_linear_section(2, 7, 6).unwrap();
    assert_eq!(
        (
            z.h(1, 3),
            z.h(3, 1),
            z.h(2, 2),
            z.h(1, 1),
            z.h(2, 0),
            z.h(4, 0)
        ),
        (6, 6, 57, 1, 0, 0)
    );
    assert_eq!(z.e_top, 73);
    let w = hodge_linear_section(2, 7, 7).unwrap();
    assert_eq!((w.h(1, 1), w.h(2, 1), w.h(3, 0)), (1, 50, 1));
    assert_eq!(w.e_top, -98);
    assert_eq!(w.e_top, 2 * (w.h(1, 1) - w.h(1, 2)));
    let s = hodge_linear_section(2, 7, 8).unwrap();
    assert_eq!(
        (s.p_g(), s.q(), s.h(1, 1), s.e_top, s.k_power, s.chi_o),
        (13, 0, 98, 126, Some(42), 14)
    );
    assert_eq!(s.e_top, 12 * s.chi_o - s.k_power.unwrap());
    assert_eq!(
        s.e_top,
        s.diamond.betti(0) - s.diamond.betti(1) + s.diamond.betti(2) - s.diamond.betti(3)
            + s.diamond.betti(4)
    );
    let cy = hodge_linear_section(3, 6, 6).unwrap();
    assert_eq!((cy.h(1, 1), cy.h(1, 2), cy.e_top), (1, 49, -96));
    for inv in [&z, &w, &s, &cy] {
        assert!(inv.diamond.is_symmetric(), "{}", inv.label);
    }
    assert!(matches!(
        hodge_linear_section(2, 7, 9),
        Err(CohomologyError::BadRange { .. })
    ));
}

#[test]
fn the_q1_tower_matches_the_linear_sections() {
    for a in 0..3 {
        let y = hodge_q1_model(a).unwrap();
        let z = hodge_linear_section(2, 7, 6 + a).unwrap();
        assert_eq!(y.diamond, z.diamond, "a = {a}");
    }
    assert_eq!(hodge_q1_model(2).unwrap().k_power, Some(42));
    // ∧^4(Q*(-1)) = O(-5) on Gr(2,6)
    let x = ZeroLocus::q1_model(0);
    let top = x.koszul_term(&WeightedBundle::line(2, 6, 0), 4);
    assert_eq!(top.len(), 1);
    assert!(same_bundle(&top[0].0, &WeightedBundle::line(2, 6, -5)));
    assert_eq!(x.canonical_twist(), -1);
    assert_eq!(ZeroLocus::q1_model(2).canonical_twist(), 1);
}

#[test]
fn staircase_rows_and_failures() {
    let z = ZeroLocus::linear_section(2, 7, 6);
    assert_eq!(
        staircase_omega(&z, 0)
            .unwrap()
            .into_iter()
            .collect::<Vec<_>>(),
        vec![(0, 1)]
    );
    assert_eq!(
        staircase_omega(&z, 1)
            .unwrap()
            .into_iter()
            .collect::<Vec<_>>(),
        vec![(1, 1), (3, 6)]
    );
    assert!(matches!(
        staircase_omega(&z, 2),
        Err(CohomologyError::AmbiguousExtension(_))
    ));
    // the Euler characteristics survive either way
    assert_eq!(
        (0..=4)
            .map(|p| chi_omega(&z, p, 0).unwrap())
            .collect::<Vec<_>>(),
        vec![1, -7, 57, -7, 1]
    );
}

#[test]
fn deformation_numbers() {
    let q = Rationals;
    let c = generic_integers(1, 6);
    let models = [
        build_z(&q, &c, None).unwrap(),
        build_w_z(&q, &c, &[3, -5, 7], None).unwrap(),
        build_s_z(&q, &c, &[3, -5, 7], &[2, 9, -4], None).unwrap(),
    ];
    let expected = [(6, 42, 0), (7, 50, 1), (8, 56, 0)];
    for (m, (r, h1, h2)) in models.iter().zip(expected) {
        let rank = normal_map_rank(m).unwrap();
        assert_eq!(rank, 48, "{}", m.name);
        let d = deformation_number(&ZeroLocus::linear_section(2, 7, r), Some(rank)).unwrap();
        assert_eq!((d.h0, d.h1, d.h2), (0, h1, h2), "{}", m.name);
        assert_eq!(d.h1, (r * (21 - r)) as i64 - 48);
    }
    let s = deformation_number(&ZeroLocus::linear_section(2, 7, 8), None).unwrap();
    assert_eq!((s.tangent_restricted, s.normal), ([48, 0, 8], [104, 0, 8]));
    assert!(s.rank_assumed);
    assert_eq!(expected_moduli(2, 6), 8);
    let f = PrimeField::new(13).unwrap();
    let s13 = build_s_z(
        &f,
        &generic_integers_for(1, 6, &[13]),
        &[3, -5, 7],
        &[2, 9, -4],
        None,
    )
    .unwrap();
    assert_eq!(normal_map_rank(&s13).unwrap(), 48);
}

#[test]
fn free_quotients() {
    let s = hodge_linear_section(2, 7, 8).unwrap();
    let st = quotient_invariants(&s, 7, true, None).unwrap();
    assert_eq!(
        (st.chi_o, st.k_power, st.e_top, st.p_g(), st.q(), st.h(1, 1)),
        (2, Some(6), 18, 1, 0, 14)
    );
    assert_eq!(st.diamond.rows()[2], vec![1, 14, 1]);
    let w = hodge_linear_section(2, 7, 7).unwrap();
    let wt = quotient_invariants(&w, 7, true, Some(1)).unwrap();
    assert_eq!((wt.e_top, wt.h(1, 1), wt.h(1, 2)), (-14, 1, 8));
    assert_eq!(wt.diamond.rows()[3], vec![1, 8, 8, 1]);
    let cy = hodge_linear_section(3, 6, 6).unwrap();
    assert!(matches!(
        quotient_invariants(&cy, 7, true, None),
        Err(CohomologyError::NotDivisible {
            value: -96,
            order: 7,
            ..
        })
    ));
    assert_eq!(
        quotient_invariants(&s, 7, false, None),
        Err(CohomologyError::NotFree)
    );
}

#[test]
fn involution_quotients() {
    let st = quotient_invariants(&hodge_linear_section(2, 7, 8).unwrap(), 7, true, None).unwrap();
    let conic = FixedDatum::from_adjunction(2, 1, 10);
    assert_eq!(conic.c_squared, -4);
    let sigma = involution_quotient(&st, &conic).unwrap();
    assert_eq!(
        (sigma.k_squared, sigma.e_top, sigma.resolution_e_top),
        (-1, 15, 25)
    );
    assert_eq!((sigma.resolution_chi_o, sigma.resolution_pg_q), (2, (1, 0)));

    let tt = quotient_invariants(&hodge_linear_section(3, 6, 7).unwrap(), 7, true, None).unwrap();
    let elliptic = FixedDatum::from_adjunction(6, 0, 6);
    assert_eq!(elliptic.c_squared, -6);
    assert_eq!(involution_quotient(&tt, &elliptic).unwrap().k_squared, -6);

    let bad = FixedDatum {
        c_squared: -3,
        k_dot_c: 2,
        chi_oc: 1,
        isolated_points: 10,
    };
    assert_eq!(
        involution_quotient(&st, &bad),
        Err(CohomologyError::AdjunctionViolated { defect: 1 })
    );
}

fn weight(k: usize, n: usize) -> impl Strategy<Value = WeightedBundle> {
    (
        prop::collection::vec(-4i64..5, k),
        prop::collection::vec(-4i64..5, n - k),
        -8i64..8,
    )
        .prop_map(move |(mut a, mut b, t)| {
            a.sort_unstable_by(|x, y| y.cmp(x));
            b.sort_unstable_by(|x, y| y.cmp(x));
            WeightedBundle::new(k, n, a, b, t).unwrap()
        })
}

fn grassmannian() -> impl Strategy<Value = WeightedBundle> {
    prop_oneof![weight(2, 7), weight(3, 6), weight(2, 6), weight(2, 5)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn serre_duality(b in grassmannian()) {
        let dim = b.grassmannian_dim();
        let dual = b.dual().twisted(-(b.n as i64));
        let lhs = bott_cohomology(&b).unwrap();
        let rhs: Vec<(usize, i64)> = bott_cohomology(&dual).unwrap().into_iter().map(|(d, h)| (dim - d, h)).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn euler_characteristic_two_ways(b in grassmannian()) {
        prop_assert_eq!(euler_characteristic(&b).unwrap(), weyl_character_euler(&b).unwrap());
        prop_assert!(bott_cohomology(&b).unwrap().len() <= 1);
    }

    #[test]
    fn restriction_preserves_euler_additivity(t in -3i64..4, r in 1usize..8) {
        let x = ZeroLocus::linear_section(2, 7, r);
        let f = WeightedBundle::line(2, 7, t);
        let direct: i64 = (0..=r as i64).map(|j| {
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * binom(r as i64, j) * weyl_character_euler(&f.twisted(-j)).unwrap()
        }).sum();
        prop_assert_eq!(restricted_euler(&x, &f).unwrap(), direct);
    }
}
