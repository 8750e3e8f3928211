use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wopkit::exactnum::{int, is_integral_matrix, min_valuation, pow_p, rat, valuation, Matrix, Polynomial, Rat};
use wopkit::integrals::*;
use wopkit::orbits::{standard_representative, Levi, OrbitDatum, Partition};
use wopkit::paracomb::Parabolic;
use wopkit::weights::{random_k, WeightContext};
use wopkit::SurdPoly;

fn split(p: u64, a: Rat, b: Rat) -> OrbitDatum {
    let one = Partition::new(vec![1]).unwrap();
    OrbitDatum::new(p, vec![(Polynomial::linear_root(a), one.clone()), (Polynomial::linear_root(b), one)]).unwrap()
}

fn unipotent(p: u64, a: Rat) -> OrbitDatum {
    OrbitDatum::linear(p, a, Partition::new(vec![2]).unwrap())
}

/// Tree distance between the lattice classes of g Z_p^2 and h Z_p^2.
fn tree_distance(g: &Matrix<Rat>, h: &Matrix<Rat>, p: u64) -> i64 {
    let m = &g.inverse().unwrap() * h;
    let e0 = min_valuation(&m, p).unwrap();
    valuation(&m.det(), p).unwrap() - 2 * e0
}

/// Vertices within distance r of the standard vertex whose nearest
/// apartment vertex is the standard one, as HNF bases.
fn vertices_over_origin(p: u64, r: i64) -> Vec<Matrix<Rat>> {
    let mut out = Vec::new();
    for a in 0..=r {
        for b in 0..=(r - a) {
            for x in 0..p.pow(a as u32) as i64 {
                let g = Matrix::from_rows(vec![vec![pow_p(p, a), int(x)], vec![int(0), pow_p(p, b)]]);
                if a >= 1 && b >= 1 && (x == 0 || x % p as i64 == 0) {
                    continue; // not primitive
                }
                let d0 = tree_distance(&Matrix::identity(2), &g, p);
                let nearest = (-r - 1..=r + 1)
                    .filter(|&i| i != 0)
                    .all(|i| tree_distance(&Matrix::diag(&[pow_p(p, i), int(1)]), &g, p) > d0);
                if nearest {
                    out.push(g);
                }
            }
        }
    }
    out
}

#[test]
fn split_matches_tree_oracle() {
    for p in [2u64, 3] {
        let ctx = NormalizationContext::new(p);
        let verts = vertices_over_origin(p, 4);
        for (a, b) in [(int(1), int(1 + p as i64)), (int(0), pow_p(p, 3)), (int(2), int(3)), (int(0), pow_p(p, 2) * int(5))] {
            let d = split(p, a.clone(), b.clone());
            let x = standard_representative(&d);
            let wc = WeightContext::new(&d, None).unwrap();
            let mut count = Rat::from_integer(0.into());
            let mut weighted = SurdPoly::zero();
            for g in &verts {
                if is_integral_matrix(&(&(&g.inverse().unwrap() * &x) * g), p) {
                    count += int(1);
                    let w = wc.weight(&Levi::torus(2), &Parabolic::full(2), g).unwrap();
                    weighted = &weighted + &w;
                }
            }
            let scale = ctx.unit() * pow_p(p, -valuation(&(&a - &b), p).unwrap());
            let tr = TruncationSpec::new(6).unwrap();
            let u = orbital_integral_gl2(&d, &WeightSpec::Unweighted, &tr, &ctx).unwrap();
            assert_eq!(u.value, SurdPoly::from_rat(&count * &scale));
            assert!(u.tail.is_zero());
            let w = orbital_integral_gl2(&d, &WeightSpec::torus(), &tr, &ctx).unwrap();
            assert_eq!(w.value, weighted.scale(&scale));
        }
    }
}

#[test]
fn split_value_independent_of_valuation() {
    // normalized integral of a split regular integral element is 1 + 1/p
    let ctx = NormalizationContext::new(3);
    let tr = TruncationSpec::new(8).unwrap();
    for v in 0..6 {
        let d = split(3, int(2), int(2) + pow_p(3, v));
        let u = orbital_integral_gl2(&d, &WeightSpec::Unweighted, &tr, &ctx).unwrap();
        assert_eq!(u.value, SurdPoly::from_rat(rat(4, 3)));
    }
    let d = split(3, rat(1, 3), int(0));
    assert!(orbital_integral_gl2(&d, &WeightSpec::Unweighted, &tr, &ctx).unwrap().value.is_zero());
}

#[test]
fn unipotent_closed_forms() {
    for p in [2u64, 3, 5] {
        let ctx = NormalizationContext::new(p);
        let tr = TruncationSpec::new(12).unwrap();
        let u = orbital_integral_gl2(&unipotent(p, int(0)), &WeightSpec::Unweighted, &tr, &ctx).unwrap();
        let exact = SurdPoly::from_rat(ctx.unit());
        assert!(u.agrees_with(&exact, &SurdPoly::zero()));
        let w = orbital_integral_gl2(&unipotent(p, int(0)), &WeightSpec::torus(), &tr, &ctx).unwrap();
        // (1 + 1/p) sum_m (1 - 1/p) p^-m (-sqrt(2) m l) = -(1 + 1/p) sqrt(2) l / (p - 1)
        let pm1 = Rat::from_integer((p as i64 - 1).into());
        let exact = SurdPoly::term(-ctx.unit() / pm1, 2, 1);
        assert!(w.agrees_with(&exact, &SurdPoly::zero()));
        let off = orbital_integral_gl2(&unipotent(p, rat(1, p as i64)), &WeightSpec::torus(), &tr, &ctx).unwrap();
        assert!(off.value.is_zero());
    }
}

#[test]
fn conjugation_invariance_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for p in [2u64, 3] {
        let ctx = NormalizationContext::new(p);
        let tr = TruncationSpec::new(8).unwrap();
        for d in [split(p, int(1), int(1 + p as i64)), unipotent(p, int(0)), unipotent(p, int(3))] {
            let x = standard_representative(&d);
            for w in [WeightSpec::Unweighted, WeightSpec::torus()] {
                let base = evaluate(&d, &x, &w, &tr, &ctx, None).unwrap().value;
                for _ in 0..3 {
                    let k = random_k(2, p, &mut rng);
                    let moved = evaluate(&d, &x, &w, &tr, &ctx, Some(&k)).unwrap().value;
                    assert_eq!(base, moved);
                }
            }
        }
    }
}

#[test]
fn depth_monotone() {
    for p in [2u64, 3] {
        let ctx = NormalizationContext::new(p);
        for w in [WeightSpec::Unweighted, WeightSpec::torus()] {
            let d = unipotent(p, int(0));
            let a = orbital_integral_gl2(&d, &w, &TruncationSpec::new(12).unwrap(), &ctx).unwrap();
            let b = orbital_integral_gl2(&d, &w, &TruncationSpec::new(16).unwrap(), &ctx).unwrap();
            assert!(a.agrees_with(&b.value, &SurdPoly::zero()));
            assert!(b.tail.dominated_by(&a.tail) && b.tail != a.tail);
        }
    }
}

#[test]
fn tolerance_enforced() {
    let ctx = NormalizationContext::new(2);
    let tr = TruncationSpec::new(2).unwrap().with_tolerance(1e-6);
    let r = orbital_integral_gl2(&unipotent(2, int(0)), &WeightSpec::torus(), &tr, &ctx);
    assert!(matches!(r, Err(IntegralError::DepthTooSmall { .. })));
    assert!(TruncationSpec::new(0).is_err());
}

#[test]
fn limit_homogeneity_descent() {
    for p in [2u64, 3] {
        let ctx = NormalizationContext::new(p);
        let tr = TruncationSpec::new(12).unwrap();
        for y in [(int(0), int(0)), (int(2), int(2)), (int(1), int(1 + p as i64))] {
            let r = arthur_limit_check(&y, &tr, &ctx).unwrap();
            assert!(r.geometric && r.agrees, "{y:?} {r:?}");
        }
        let regular = arthur_limit_check(&(int(0), int(p as i64)), &tr, &ctx).unwrap();
        assert!(regular.sequence.iter().all(|s| *s == regular.direct.value));
        for t in [int(1), int(p as i64), int((p * p) as i64), rat(1, p as i64)] {
            let h = homogeneity_check(&t, &tr, &ctx).unwrap();
            assert!(h.agrees);
            if t != int(1) {
                assert_eq!(h.kappa, SurdPoly::term(int(-1), 2, 0));
            }
        }
        for z in [(int(0), int(0)), (int(1), int(1 + p as i64))] {
            assert!(descent_check(&z, &tr, &ctx).unwrap().agrees);
        }
        let (nil, seq) = centralizer_measure_check(&int(0), &[4, 8, 12], &tr, &ctx).unwrap();
        for s in seq {
            assert!(nil.agrees_with(&s.value, &s.tail));
        }
    }
}

#[test]
fn elliptic_is_reported_unsupported() {
    let d = OrbitDatum::new(3, vec![(Polynomial::new(vec![int(1), int(0), int(1)]), Partition::new(vec![1]).unwrap())]).unwrap();
    let ctx = NormalizationContext::new(3);
    let r = orbital_integral_gl2(&d, &WeightSpec::Unweighted, &TruncationSpec::new(4).unwrap(), &ctx);
    assert!(matches!(r, Err(IntegralError::Unsupported(_))));
}
