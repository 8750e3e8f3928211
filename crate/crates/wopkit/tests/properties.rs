use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wopkit::exactnum::{fmt_rat, int, parse_rat, rat, similar, Matrix, Polynomial, Rat};
use wopkit::gmfam::{product_identity, random_orthogonal_family};
use wopkit::orbits::{centralizer_dim, induce_orbit, Levi, OrbitDatum, Partition};
use wopkit::paracomb::{enumerate_parabolics, ParaKind, Parabolic, Perm};
use wopkit::suites::random_levi;
use wopkit::weights::{iwasawa, iwasawa_hp, random_g, random_k};
use wopkit::SurdPoly;

fn rat_s() -> impl Strategy<Value = Rat> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn qmat(n: usize) -> impl Strategy<Value = Matrix<Rat>> {
    proptest::collection::vec(rat_s(), n * n).prop_map(move |v| Matrix::from_vec(n, n, v))
}

fn fmat(n: usize) -> impl Strategy<Value = Matrix<f64>> {
    proptest::collection::vec(-4.0f64..4.0, n * n).prop_map(move |v| Matrix::from_vec(n, n, v))
}

fn qpoly(max_deg: usize) -> impl Strategy<Value = Polynomial<Rat>> {
    proptest::collection::vec(rat_s(), 1..=max_deg + 1).prop_map(Polynomial::new)
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-8 * (1.0 + a.abs().max(b.abs()))
}

fn surd_s() -> impl Strategy<Value = SurdPoly> {
    proptest::collection::vec((rat_s(), prop::sample::select(vec![1u64, 2, 3, 6]), 0u32..3), 0..4).prop_map(|ts| {
        ts.into_iter().fold(SurdPoly::zero(), |acc, (c, r, d)| &acc + &SurdPoly::term(c, r, d))
    })
}

fn partition_s(max_n: usize) -> impl Strategy<Value = Partition> {
    (1..=max_n).prop_flat_map(|n| prop::sample::select(Partition::all(n)))
}

proptest! {
    // ------------------------------------------------------------- exactnum

    #[test]
    fn rational_det_is_multiplicative((a, b) in (1usize..4).prop_flat_map(|n| (qmat(n), qmat(n)))) {
        prop_assert_eq!((&a * &b).det(), &a.det() * &b.det());
        prop_assert_eq!((&a * &b).transpose(), &b.transpose() * &a.transpose());
    }

    #[test]
    fn cayley_hamilton(a in qmat(3)) {
        prop_assert!(a.charpoly().eval_matrix(&a).is_zero());
    }

    #[test]
    fn inverse_and_similarity(a in qmat(3), seed in any::<u64>()) {
        let g = random_g(3, 3, &mut ChaCha8Rng::seed_from_u64(seed));
        let b = &(&g * &a) * &g.inverse().unwrap();
        prop_assert!(similar(&a, &b));
        if let Some(inv) = a.inverse() {
            prop_assert_eq!(&a * &inv, Matrix::identity(3));
        } else {
            prop_assert_eq!(a.det(), int(0));
        }
    }

    #[test]
    fn float_matrices_follow_the_same_algebra(a in fmat(3), b in fmat(3)) {
        prop_assert!(close((&a * &b).det(), a.det() * b.det()));
        // diagonally dominant, hence invertible
        let d = &a + &Matrix::diag(&[20.0, 20.0, 20.0]);
        let prod = &d * &d.inverse().unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!(close(prod[(i, j)], want));
            }
        }
        prop_assert!(close(a.trace(), -a.charpoly().coeff(2)));
    }

    #[test]
    fn float_polynomials_evaluate_homomorphically(
        p in proptest::collection::vec(-3.0f64..3.0, 1..5),
        q in proptest::collection::vec(-3.0f64..3.0, 1..5),
        x in -2.0f64..2.0,
    ) {
        let (p, q) = (Polynomial::new(p), Polynomial::new(q));
        prop_assert!(close((&p * &q).eval(&x), p.eval(&x) * q.eval(&x)));
        prop_assert!(close((&p + &q).eval(&x), p.eval(&x) + q.eval(&x)));
    }

    #[test]
    fn polynomial_division(a in qpoly(5), d in qpoly(3)) {
        prop_assume!(!d.is_zero());
        let (q, r) = a.divrem(&d);
        prop_assert_eq!(&(&q * &d) + &r, a.clone());
        prop_assert!(r.is_zero() || r.degree() < d.degree());
        let g = a.gcd(&d);
        prop_assert!(a.divrem(&g).1.is_zero() && d.divrem(&g).1.is_zero());
    }

    #[test]
    fn rationals_print_and_parse(x in rat_s()) {
        prop_assert_eq!(parse_rat(&fmt_rat(&x)).unwrap(), x);
    }

    #[test]
    fn surd_polys_form_a_ring(a in surd_s(), b in surd_s(), c in surd_s()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert!(close((&a * &b).to_f64(0.7), a.to_f64(0.7) * b.to_f64(0.7)));
        prop_assert_eq!(SurdPoly::from_coeff_strings(&a.coeff_strings()).unwrap(), a);
    }

    // --------------------------------------------------------------- orbits

    #[test]
    fn transpose_is_an_involution(l in partition_s(8)) {
        prop_assert_eq!(l.transpose().transpose(), l.clone());
        prop_assert_eq!(l.transpose().size(), l.size());
    }

    #[test]
    fn induction_preserves_codimension(parts in proptest::collection::vec(partition_s(3), 1..4)) {
        let sizes: Vec<usize> = parts.iter().map(Partition::size).collect();
        let m = Levi::standard(&sizes);
        let orbits: Vec<OrbitDatum> = parts.into_iter().map(|l| OrbitDatum::nilpotent(5, l)).collect();
        let ind = induce_orbit(&m, &orbits).unwrap();
        prop_assert_eq!(centralizer_dim(&ind), orbits.iter().map(centralizer_dim).sum::<usize>());
        let json = serde_json::to_string(&ind).unwrap();
        prop_assert_eq!(serde_json::from_str::<OrbitDatum>(&json).unwrap(), ind);
    }

    // ------------------------------------------------------------- paracomb

    #[test]
    fn parabolic_conjugation_and_json(n in 1usize..5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_levi(n, &mut rng);
        let pars = enumerate_parabolics(&m, ParaKind::P, None);
        let p = &pars[(seed as usize) % pars.len()];
        let perms = Perm::all(n);
        let w = &perms[(seed as usize / 7) % perms.len()];
        prop_assert_eq!(p.conjugate(w).conjugate(&w.inverse()), p.clone());
        prop_assert_eq!(p.opposite().opposite(), p.clone());
        prop_assert!(p.contains_levi(&m));
        let back: Parabolic = serde_json::from_str(&serde_json::to_string(p).unwrap()).unwrap();
        prop_assert_eq!(&back, p);
    }

    // -------------------------------------------------------------- weights

    #[test]
    fn hp_is_right_k_invariant(n in 1usize..4, pi in 0usize..3, seed in any::<u64>()) {
        let p = [2u64, 3, 5][pi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pars = enumerate_parabolics(&Levi::torus(n), ParaKind::F, None);
        let par = &pars[(seed as usize) % pars.len()];
        let g = random_g(n, p, &mut rng);
        let k = random_k(n, p, &mut rng);
        prop_assert_eq!(iwasawa_hp(&(&g * &k), par, p).unwrap(), iwasawa_hp(&g, par, p).unwrap());
        let iw = iwasawa(&g, par, p).unwrap();
        prop_assert_eq!(&iw.b * &iw.k, g);
    }

    // ---------------------------------------------------------------- gmfam

    #[test]
    fn product_formula(n in 2usize..4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_levi(n, &mut rng);
        let c = random_orthogonal_family(&m, &mut rng);
        let d = random_orthogonal_family(&m, &mut rng);
        let r = product_identity(&c, &d).unwrap();
        prop_assert_eq!(r.lhs, r.rhs);
    }
}
