//! Randomized invariants across the library.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use oddtors::elliptic::WeierstrassCurve;
use oddtors::jacobian::{group_structure_jac, FfCurve as HyperFf, Jacobian};
use oddtors::modcurves::{self, point_keys, search_points, sign_obstruction};
use oddtors::poly::factor::{factor_over_field, roots_in_field, roots_in_field_from};
use oddtors::poly::gcd::modular_gcd;
use oddtors::poly::multi::parse_mpoly;
use oddtors::poly::sturm::sturm_real_roots;
use oddtors::qfield::CLASS_NUMBER_ONE;
use oddtors::{Fq, PolyRing, QPoly, QuadElem, QuadField, Rationals, Ring};

const SMALL_PRIMES: [u64; 12] = [5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43];

fn field() -> impl Strategy<Value = QuadField> {
    prop::sample::select(CLASS_NUMBER_ONE.to_vec()).prop_map(|d| QuadField::imaginary(d).unwrap())
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn elem(k: &QuadField, (a, b, c): (i64, i64, i64)) -> QuadElem {
    k.elem(q(a, c), q(b, c))
}

fn coords() -> impl Strategy<Value = (i64, i64, i64)> {
    (-50i64..50, -50i64..50, 1i64..6)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn norm_is_multiplicative(k in field(), u in coords(), v in coords()) {
        let (u, v) = (elem(&k, u), elem(&k, v));
        prop_assert_eq!(k.norm(&k.mul(&u, &v)), k.norm(&u) * k.norm(&v));
        prop_assert!(!k.norm(&u).is_negative());
        prop_assert_eq!(k.norm(&u).is_zero(), u.is_zero());
        prop_assert_eq!(k.mul(&u, &u.conj()), QuadElem::from_rational(k.norm(&u)));
    }

    #[test]
    fn square_roots_are_exact(k in field(), v in coords()) {
        let v = elem(&k, v);
        let sq = k.mul(&v, &v);
        let s = k.sqrt(&sq).expect("a square has a root");
        prop_assert_eq!(k.mul(&s, &s), sq);
    }

    #[test]
    fn square_class_is_idempotent_and_square_invariant(k in field(), v in coords(), s in coords()) {
        let v = elem(&k, v);
        let s = elem(&k, s);
        prop_assume!(!v.is_zero() && !s.is_zero());
        let c = k.square_class(&v).unwrap();
        prop_assert_eq!(k.square_class(&c).unwrap(), c.clone());
        prop_assert_eq!(k.square_class(&k.mul(&v, &k.mul(&s, &s))).unwrap(), c);
    }

    #[test]
    fn integral_factorization_reassembles(k in field(), a in -3000i64..3000, b in -3000i64..3000) {
        let v = k.from_basis_coords(&a.into(), &b.into());
        prop_assume!(!v.is_zero());
        let f = k.factor_integral(&v).unwrap();
        let mut prod = k.from_i64(f.unit);
        for (p, e) in &f.factors {
            for _ in 0..*e {
                prod = k.mul(&prod, &p.pi);
            }
        }
        prop_assert_eq!(prod, v);
    }

    #[test]
    fn primes_above_have_norm_p(k in field(), p in prop::sample::select(vec![3u64, 5, 7, 11, 13, 101, 997, 4999, 9973])) {
        for pr in k.primes_above(p) {
            if pr.residue_degree() == 1 {
                prop_assert_eq!(k.norm(&pr.pi), BigRational::from_integer(p.into()));
            }
        }
    }

    #[test]
    fn factorizations_over_k_reassemble(k in field(), rs in prop::collection::vec(coords(), 1..4), extra in (-5i64..5, -5i64..5)) {
        let r = PolyRing::new(k.clone());
        let mut f = r.from_coeffs(vec![elem(&k, (extra.0, extra.1, 1)), k.zero(), k.one()]);
        for c in &rs {
            f = r.mul(&f, &r.linear(&elem(&k, *c)));
        }
        // factorization expects squarefree input
        let f = r.monic(&r.squarefree_part(&f));
        let factors = factor_over_field(&k, &f).unwrap();
        let prod = factors.iter().fold(r.one(), |acc, g| r.mul(&acc, g));
        prop_assert_eq!(r.monic(&prod), f.clone());
        let roots = roots_in_field(&k, &f);
        for x in &roots {
            prop_assert!(k.is_zero(&r.eval(&f, x)));
        }
        // a different auxiliary prime finds the same roots, possibly reordered
        let again = roots_in_field_from(&k, &f, 1 << 24);
        prop_assert_eq!(roots.len(), again.len());
        prop_assert!(again.iter().all(|x| roots.contains(x)));
    }

    #[test]
    fn sturm_ignores_x2_plus_1(cs in prop::collection::vec(-9i64..9, 2..7)) {
        let r = PolyRing::new(Rationals);
        let f: QPoly = r.from_coeffs(cs.iter().map(|c| BigRational::from_integer((*c).into())).collect());
        prop_assume!(f.degree().unwrap_or(0) >= 1);
        let g = r.mul(&f, &r.from_coeffs(vec![BigRational::one(), BigRational::zero(), BigRational::one()]));
        prop_assert_eq!(sturm_real_roots(&g), sturm_real_roots(&r.squarefree_part(&f)));
    }

    #[test]
    fn gcd_extracts_common_factor(k in field(), a in coords(), b in coords(), c in coords()) {
        let r = PolyRing::new(k.clone());
        let (fa, fb, h) = (elem(&k, a), elem(&k, b), elem(&k, c));
        prop_assume!(fa != fb && fa != h && fb != h);
        let f = r.from_coeffs(vec![fa, k.zero(), k.one()]);
        let g = r.from_coeffs(vec![fb, k.one()]);
        let hh = r.linear(&h);
        let lhs = modular_gcd(&k, &r.mul(&f, &hh), &r.mul(&g, &hh));
        let rhs = r.monic(&r.mul(&hh, &modular_gcd(&k, &f, &g)));
        prop_assert_eq!(r.monic(&lhs), rhs);
    }
}

fn random_ff_curve(p: u64, a4: u64, a6: u64) -> Option<WeierstrassCurve<Fq>> {
    WeierstrassCurve::new(Fq::prime(p), [0, 0, 0, a4 % p, a6 % p]).ok()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn group_law_over_fp(p in prop::sample::select(SMALL_PRIMES.to_vec()), a4 in 0u64..50, a6 in 0u64..50, seed in any::<u64>()) {
        let Some(e) = random_ff_curve(p, a4, a6) else { return Ok(()) };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let (a, b, c) = (e.random_point(&mut rng), e.random_point(&mut rng), e.random_point(&mut rng));
            prop_assert_eq!(e.add(&e.add(&a, &b), &c), e.add(&a, &e.add(&b, &c)));
            prop_assert_eq!(e.add(&a, &b), e.add(&b, &a));
            prop_assert!(e.contains(&e.add(&a, &b)));
            prop_assert_eq!(e.mul(6, &a), e.mul(2, &e.mul(3, &a)));
        }
    }

    #[test]
    fn naive_and_bsgs_counts_agree(p in prop::sample::select(vec![101u64, 499, 1009, 4999, 9973]), a4 in 0u64..10_000, a6 in 0u64..10_000) {
        let Some(e) = random_ff_curve(p, a4, a6) else { return Ok(()) };
        prop_assert_eq!(e.count_points_naive(), e.count_points_bsgs(3).unwrap());
    }

    #[test]
    fn twists_keep_j(k in field(), a4 in -20i64..20, a6 in -20i64..20, d in coords()) {
        let Ok(e) = WeierstrassCurve::from_i64s(k.clone(), [0, 0, 0, a4, a6]) else { return Ok(()) };
        let d = elem(&k, d);
        prop_assume!(!d.is_zero());
        prop_assert_eq!(e.quadratic_twist(&d).unwrap().j_invariant(), e.j_invariant());
    }

    #[test]
    fn division_polynomials_have_expected_shape(k in field(), a4 in -9i64..9, a6 in -9i64..9, n in prop::sample::select(vec![3usize, 5, 7])) {
        let Ok(e) = WeierstrassCurve::from_i64s(k.clone(), [0, 0, 0, a4, a6]) else { return Ok(()) };
        let psi = e.division_polynomial(n);
        prop_assert_eq!(psi.degree(), Some((n * n - 1) / 2));
        prop_assert_eq!(psi.lc().cloned(), Some(k.from_i64(n as i64)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn hyperelliptic_jacobian_laws(p in prop::sample::select(vec![3u64, 5, 7, 11]), cs in prop::collection::vec(0u64..11, 6), seed in any::<u64>()) {
        let mut f: Vec<u64> = cs.iter().map(|c| c % p).collect();
        f.push(1);
        let Ok(fc) = HyperFf::new(Fq::prime(p), f) else { return Ok(()) };
        let lp = fc.l_polynomial().unwrap();
        prop_assert!(lp.functional_equation_holds());
        let Ok(st) = group_structure_jac(&fc) else { return Ok(()) };
        prop_assert_eq!(st.order, lp.jacobian_order());
        prop_assert_eq!(st.invariants.iter().product::<u64>(), st.order);
        let Ok(jac) = Jacobian::new(fc) else { return Ok(()) };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..10 {
            let a = jac.random_element(&st.generators, st.order, &mut rng);
            let b = jac.random_element(&st.generators, st.order, &mut rng);
            let c = jac.random_element(&st.generators, st.order, &mut rng);
            prop_assert!(jac.is_valid(&a));
            prop_assert_eq!(jac.add(&jac.add(&a, &b), &c), jac.add(&a, &jac.add(&b, &c)));
            prop_assert!(jac.is_zero(&jac.mul(&a, st.order as i64)));
        }
    }

    #[test]
    fn search_is_monotone_in_height(h in 2u64..12, extra in 1u64..8, name in prop::sample::select(vec!["X0(35)", "X0(77)+", "Ctilde", "X0(33)"])) {
        let m = modcurves::model(name).unwrap();
        let low = point_keys(&search_points(m, None, h).unwrap().points);
        let high = point_keys(&search_points(m, None, h + extra).unwrap().points);
        prop_assert!(low.is_subset(&high));
    }

    #[test]
    fn sign_obstruction_means_no_points(g in prop::collection::vec(-4i64..4, 1..4), c in 1i64..20, d in prop::sample::select(vec![-1i64, -2, -7, -11, -43])) {
        // f = g² + c has no real root; also try f itself for mixed signs
        let r = PolyRing::new(Rationals);
        let gp: QPoly = r.from_coeffs(g.iter().map(|x| BigRational::from_integer((*x).into())).collect());
        let f = r.add(&r.mul(&gp, &gp), &r.from_coeffs(vec![BigRational::from_integer(c.into())]));
        if sign_obstruction(&f, d) {
            // d·y² = f(x) has no solution with x of height ≤ 50
            for num in -50i64..=50 {
                for den in 1i64..=50 {
                    let x = q(num, den);
                    let v = r.eval(&f, &x) / BigRational::from_integer(d.into());
                    prop_assert!(v.is_negative());
                }
            }
        }
    }

    #[test]
    fn parsed_polynomials_evaluate_like_their_text(a in -9i64..9, b in -9i64..9, x in -5i64..5, y in -5i64..5) {
        let vars = vec!["x".to_string(), "y".to_string()];
        let text = format!("({a})x^2y + ({b})y^3 - 7 = x - ({a})");
        let p = parse_mpoly(&text, &vars).unwrap();
        let (xq, yq) = (BigRational::from_integer(x.into()), BigRational::from_integer(y.into()));
        let want = BigRational::from_integer((a * x * x * y + b * y * y * y - 7 - x + a).into());
        prop_assert_eq!(p.eval(&Rationals, |c| c.clone(), &[xq, yq]), want);
    }
}

#[test]
fn psi_roots_match_brute_force_on_fixed_curves() {
    let (ok, details, _) = oddtors::suite::division_polynomial_oracle(11, 4).unwrap();
    assert!(ok, "{details:?}");
}

#[test]
fn affine_points_from_search_lie_on_models() {
    for name in ["X0(35)", "X0(77)+", "Ctilde"] {
        let m = modcurves::model(name).unwrap();
        let c = m.curve().unwrap();
        for pt in search_points(m, None, 10).unwrap().points {
            let [x, y, z]: [BigRational; 3] =
                pt.coords.iter().map(|s| s.parse::<QuadElem>().unwrap().a).collect::<Vec<_>>().try_into().unwrap();
            assert!(c.point_from_weighted(&x, &y, &z).is_ok(), "{name} {:?}", pt.coords);
        }
    }
}
