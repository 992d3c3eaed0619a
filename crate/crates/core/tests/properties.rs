use gq_core::exactfield::*;
use gq_core::geometry::plane_census;
use gq_core::grassmann::*;
use gq_core::models::*;
use gq_core::multilinear::*;
use gq_core::polyring::*;
use gq_core::symmetry::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Rank as the largest size of a nonvanishing minor.
fn rank_by_minors(m: &ExactMatrix<PrimeField>) -> usize {
    let f = m.field();
    for r in (1..=m.rows().min(m.cols())).rev() {
        for rows in subsets(m.rows(), r) {
            for cols in subsets(m.cols(), r) {
                if !f.is_zero(&m.select(&rows, &cols).det().unwrap()) {
                    return r;
                }
            }
        }
    }
    0
}

fn random_matrix(
    f: &PrimeField,
    rows: usize,
    cols: usize,
    rng: &mut ChaCha8Rng,
) -> ExactMatrix<PrimeField> {
    // small entries make rank drops frequent
    let data = (0..rows * cols)
        .map(|_| f.from_i64(rng.gen_range(0..3)))
        .collect();
    ExactMatrix::new(f, rows, cols, data).unwrap()
}

fn uniform(
    f: &PrimeField,
    rows: usize,
    cols: usize,
    rng: &mut ChaCha8Rng,
) -> ExactMatrix<PrimeField> {
    let data = (0..rows * cols).map(|_| f.random(rng)).collect();
    ExactMatrix::new(f, rows, cols, data).unwrap()
}

fn check_axioms<F: Field>(f: &F, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..20 {
        let (a, b, c) = (f.random(&mut rng), f.random(&mut rng), f.random(&mut rng));
        assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
        assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
        assert_eq!(
            f.mul(&a, &f.add(&b, &c)),
            f.add(&f.mul(&a, &b), &f.mul(&a, &c))
        );
        assert_eq!(f.add(&a, &f.neg(&a)), f.zero());
        assert_eq!(f.sub(&a, &b), f.add(&a, &f.neg(&b)));
        assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
        match f.inv(&a) {
            Some(i) => assert!(f.is_one(&f.mul(&a, &i))),
            None => assert!(f.is_zero(&a)),
        }
    }
}

fn random_skew(f: &PrimeField, n: usize, rng: &mut ChaCha8Rng) -> ExactMatrix<PrimeField> {
    let mut m = ExactMatrix::zeros(f, n, n);
    for i in 0..n {
        for j in i + 1..n {
            let x = f.random(rng);
            m.set(i, j, x.clone());
            m.set(j, i, f.neg(&x));
        }
    }
    m
}

fn s_poly<F: Field>(a: &SparsePoly<F>, b: &SparsePoly<F>) -> SparsePoly<F> {
    let f = a.field();
    let (la, lb) = (a.leading_monomial().unwrap(), b.leading_monomial().unwrap());
    let l = la.lcm(lb);
    let ca = f.inv(a.leading_coeff().unwrap()).unwrap();
    let cb = f.inv(b.leading_coeff().unwrap()).unwrap();
    a.mul_term(&l.div(la), &ca)
        .sub(&b.mul_term(&l.div(lb), &cb))
}

fn invertible(f: &PrimeField, n: usize, rng: &mut ChaCha8Rng) -> ExactMatrix<PrimeField> {
    loop {
        let m = uniform(f, n, n, rng);
        if !f.is_zero(&m.det().unwrap()) {
            return m;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pfaffian_squares_to_determinant(seed in any::<u64>(), n in 2usize..7) {
        let f = PrimeField::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_skew(&f, n, &mut rng);
        let pf = numeric_pfaffian(&m);
        prop_assert_eq!(f.mul(&pf, &pf), m.det().unwrap());
        if n >= 2 {
            let i = rng.gen_range(0..n);
            let j = (i + 1 + rng.gen_range(0..n - 1)) % n;
            let mut perm: Vec<usize> = (0..n).collect();
            perm.swap(i, j);
            let swapped = ExactMatrix::from_fn(&f, n, n, |a, b| m.get(perm[a], perm[b]).clone());
            prop_assert_eq!(numeric_pfaffian(&swapped), f.neg(&pf));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_by_elimination_matches_minors(seed in any::<u64>(), rows in 1usize..5, cols in 1usize..5) {
        let f = PrimeField::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrix(&f, rows, cols, &mut rng);
        prop_assert_eq!(m.rank(), rank_by_minors(&m));
    }

    #[test]
    fn field_axioms(seed in any::<u64>()) {
        check_axioms(&PrimeField::new(13).unwrap(), seed);
        check_axioms(&Rationals, seed);
        check_axioms(&Cyclotomic::new(7), seed);
        check_axioms(&ExtensionField::search(3, 4, MODULUS_SEED).unwrap(), seed);
    }

    #[test]
    fn groebner_bases_pass_the_s_pair_test(seed in any::<u64>(), count in 1usize..4) {
        let f = PrimeField::new(7).unwrap();
        let ring = PolyRing::new(&f, vec!["x".into(), "y".into(), "z".into()]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mons: Vec<Monomial> = (0..3).flat_map(|i| (i..3).map(move |j| Monomial::var(i).mul(&Monomial::var(j)))).collect();
        let gens: Vec<SparsePoly<PrimeField>> = (0..count)
            .map(|_| SparsePoly::from_terms(&ring, mons.iter().map(|m| (m.clone(), f.from_i64(rng.gen_range(-2..3)))).collect()))
            .filter(|p| !p.is_zero())
            .collect();
        prop_assume!(!gens.is_empty());
        let gb = buchberger(&gens).unwrap();
        for a in &gb.basis {
            for b in &gb.basis {
                prop_assert!(reduce(&s_poly(a, b), &gb.basis).is_zero());
            }
        }
        for g in &gens {
            prop_assert!(gb.contains(g));
        }
        // the Hilbert function sees the ideal, not the order of the generators
        let mut rev = gens.clone();
        rev.reverse();
        let gb2 = buchberger(&rev).unwrap();
        let (h1, h2) = (gb.hilbert.unwrap(), gb2.hilbert.unwrap());
        for d in 0..6 {
            prop_assert_eq!(h1.hilbert_function(d), h2.hilbert_function(d));
        }
    }

    #[test]
    fn induced_action_is_a_homomorphism(seed in any::<u64>(), k in 2usize..4) {
        let f = PrimeField::new(29).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 6;
        let g = invertible(&f, n, &mut rng);
        let h = invertible(&f, n, &mut rng);
        let lhs = induced_action(&g.mul(&h).unwrap(), k).unwrap();
        let rhs = induced_action(&g, k).unwrap().mul(&induced_action(&h, k).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        // images of decomposable tensors stay decomposable
        let spec = GrassmannianSpec::new(&f, k, n).unwrap();
        let plane = uniform(&f, k, n, &mut rng);
        let Ok(pt) = plucker_point(&plane) else { return Ok(()) };
        let v = pt.to_dense(&f, &spec.space);
        let moved = induced_action(&g, k).unwrap().mul_vec(&v).unwrap();
        prop_assert!(spec.contains(&moved).unwrap());
    }

    #[test]
    fn accepted_sections_are_contracted_to_zero(seed in any::<u64>()) {
        let f = PrimeField::new(29).unwrap();
        let fam = invariant_q1_family(&f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vals: Vec<u64> = fam.parameters.iter().map(|_| f.random(&mut rng)).collect();
        let lambda = fam.section(&f, &vals).unwrap();
        let c = contraction_matrix(&f, 6).unwrap();
        prop_assert!(c.mul_vec(&lambda.to_dense(&f)).unwrap().iter().all(|x| *x == 0));
    }
}

#[test]
fn random_planes_satisfy_the_plucker_ideal() {
    let f = PrimeField::new(31).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (k, n, count) in [(2, 7, 1000), (3, 6, 500)] {
        let ring = plucker_ring(&f, k, n).unwrap();
        let ideal = plucker_ideal(&ring, k, n).unwrap();
        let space = WedgeSpace::new(k, n).unwrap();
        let mut tested = 0;
        while tested < count {
            let plane = uniform(&f, k, n, &mut rng);
            let Ok(pt) = plucker_point(&plane) else {
                continue;
            };
            let v = pt.to_dense(&f, &space);
            assert!(ideal.iter().all(|q| q.eval(&v).unwrap() == 0));
            tested += 1;
        }
    }
}

#[test]
fn quadric_spaces_agree() {
    let q = Rationals;
    let ring = plucker_ring(&q, 2, 7).unwrap();
    let pf = plucker_ideal(&ring, 2, 7).unwrap();
    let sh = shuffle_relations(&ring, 2, 7).unwrap();
    let both: Vec<_> = pf.iter().chain(&sh).cloned().collect();
    assert_eq!(span_dimension(&pf), 35);
    assert_eq!(span_dimension(&sh), 35);
    assert_eq!(span_dimension(&both), 35);
}

#[test]
fn hilbert_numerators_are_positive() {
    for (k, n, d) in [(2, 7, 42), (3, 6, 42), (2, 6, 14), (2, 5, 5)] {
        let s = gq_core::grassmann::hilbert_numerator(k, n, 40).unwrap();
        assert!(s.reduced_numerator.iter().all(|&c| c >= 0));
        assert_eq!(s.reduced_numerator.iter().sum::<i64>(), d);
        assert_eq!(s.degree, d);
        assert_eq!(grassmannian_degree(k, n), d.into());
    }
}

#[test]
fn groups_satisfy_their_relations() {
    let f = PrimeField::new(43).unwrap();
    for name in [
        "D7_rho6", "D7_gr36", "D7_rho7", "Z7", "F21", "G42", "D7_perm",
    ] {
        let g = make_group(name, &f).unwrap();
        assert!(
            g.check_relations().unwrap().iter().all(|r| r.holds),
            "{name}"
        );
        assert_eq!(g.order().unwrap(), g.expected_order, "{name}");
        let mats: Vec<_> = g
            .coordinate_generators()
            .unwrap()
            .into_iter()
            .map(|x| x.1)
            .collect();
        for v in invariant_subspace(&f, &mats).unwrap() {
            for m in &mats {
                assert_eq!(m.mul_vec(&v).unwrap(), v, "{name}");
            }
        }
    }
}

#[test]
fn invariant_family_is_equivariant() {
    let f = PrimeField::new(29).unwrap();
    let fam = invariant_q1_family(&f).unwrap();
    let group = make_group("D7_rho6", &f).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let vals: Vec<u64> = fam.parameters.iter().map(|_| f.random(&mut rng)).collect();
    let lambda = fam.section(&f, &vals).unwrap();
    for _ in 0..100 {
        let a: Vec<u64> = (0..6).map(|_| f.random(&mut rng)).collect();
        let b: Vec<u64> = (0..6).map(|_| f.random(&mut rng)).collect();
        assert!(section_equivariant(&f, &group, &lambda, &a, &b).unwrap());
    }
}

#[test]
fn census_points_lie_on_the_model() {
    let p = 11;
    let f = PrimeField::new(p).unwrap();
    let h = generic_integers_for(101, 6, &[p]);
    let s = build_s_z(
        &f,
        &generic_integers_for(1, 6, &[p]),
        &[h[0], h[1], h[2]],
        &[h[3], h[4], h[5]],
        None,
    )
    .unwrap();
    let census = plane_census(&s).unwrap();
    assert!(census.count() > 0);
    for pt in &census.planes {
        assert!(s.equations().iter().all(|e| e.eval(pt).unwrap() == 0));
    }
}

#[test]
fn zeta_seven_sums_to_zero() {
    let c = Cyclotomic::new(7);
    let z = c.zeta();
    let total = (0..7).fold(c.zero(), |acc, i| c.add(&acc, &c.pow(&z, i)));
    assert!(c.is_zero(&total));
    let f = PrimeField::new(29).unwrap();
    let e = f.root_of_unity(7).unwrap();
    assert_eq!((0..7).fold(0, |acc, i| f.add(&acc, &f.pow(&e, i))), 0);
}
