use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wopkit::exactnum::{int, pow_p, rat, similar, valuation, Matrix, Polynomial, Rat};
use wopkit::gmfam::{cl_limit, coroot, AVector};
use wopkit::orbits::{levi_embed, standard_representative, Levi, OrbitDatum, Partition};
use wopkit::paracomb::{enumerate_levis, enumerate_parabolics, ParaKind, Parabolic};
use wopkit::weights::*;
use wopkit::SurdPoly;

fn part(v: &[usize]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}

fn nilpotent_classes(n: usize, p: u64) -> Vec<OrbitDatum> {
    Partition::all(n).into_iter().map(|l| OrbitDatum::nilpotent(p, l)).collect()
}

fn mixed_classes() -> Vec<OrbitDatum> {
    let quad = Polynomial::new(vec![int(1), int(0), int(1)]);
    let lin = |a: i64| Polynomial::linear_root(int(a));
    vec![
        OrbitDatum::new(3, vec![(lin(0), part(&[2])), (lin(1), part(&[1]))]).unwrap(),
        OrbitDatum::new(3, vec![(lin(0), part(&[2, 1])), (lin(1), part(&[1]))]).unwrap(),
        OrbitDatum::new(3, vec![(lin(0), part(&[1])), (quad, part(&[2]))]).unwrap(),
        OrbitDatum::new(2, vec![(lin(2), part(&[1, 1])), (lin(1), part(&[2]))]).unwrap(),
    ]
}

fn all_parabolics(n: usize) -> Vec<Parabolic> {
    enumerate_parabolics(&Levi::torus(n), ParaKind::F, None)
}

fn random_levi_element(par: &Parabolic, p: u64, rng: &mut ChaCha8Rng) -> Matrix<Rat> {
    let levi = par.levi();
    let mats: Vec<Matrix<Rat>> = levi.blocks().iter().map(|b| random_g(b.len(), p, rng)).collect();
    levi_embed(&levi, &mats)
}

fn random_unipotent(par: &Parabolic, p: u64, rng: &mut ChaCha8Rng) -> Matrix<Rat> {
    let n = par.n();
    let s = par.steps();
    let mut u = Matrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            if s[i] < s[j] {
                u[(i, j)] = int(rng.gen_range(-3..=3)) * pow_p(p, rng.gen_range(-2..=2));
            }
        }
    }
    u
}

fn add(a: &[Rat], b: &[Rat]) -> AVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

#[test]
fn hp_invariance_and_equivariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..150 {
        let n = rng.gen_range(1..=4);
        let p = [2u64, 3, 5][rng.gen_range(0..3)];
        let pars = all_parabolics(n);
        let par = &pars[rng.gen_range(0..pars.len())];
        let g = random_g(n, p, &mut rng);
        let h = iwasawa_hp(&g, par, p).unwrap();
        let k = random_k(n, p, &mut rng);
        assert_eq!(iwasawa_hp(&(&g * &k), par, p).unwrap(), h);
        let m = random_levi_element(par, p, &mut rng);
        let hm = iwasawa_hp(&m, par, p).unwrap();
        assert_eq!(iwasawa_hp(&(&m * &g), par, p).unwrap(), add(&hm, &h));
        let u = random_unipotent(par, p, &mut rng);
        assert_eq!(iwasawa_hp(&(&u * &g), par, p).unwrap(), h);
        let iw = iwasawa(&g, par, p).unwrap();
        assert!(par.contains_matrix(&iw.b));
        assert_eq!(&iw.b * &iw.k, g);
    }
}

#[test]
fn richardson_twist_matches_r_map() {
    for d in nilpotent_classes(3, 2).into_iter().chain(mixed_classes()) {
        let ctx = WeightContext::new(&d, None).unwrap();
        for q in enumerate_parabolics(ctx.m_r(), ParaKind::P, None) {
            let w = ctx.richardson().w(&q).unwrap();
            let wm = w.matrix();
            let conj = q.conjugate(&w.inverse());
            assert_eq!(conj, ctx.richardson().r_map(&q).unwrap());
            // w^{-1} Q w = (Ad w^{-1}) Q, checked on matrix units
            let n = d.n();
            for i in 0..n {
                for j in 0..n {
                    let e = Matrix::unit(n, i, j);
                    let c = &(&wm.inverse().unwrap() * &e) * &wm;
                    assert_eq!(q.contains_matrix(&e), conj.contains_matrix(&c));
                }
            }
        }
    }
}

#[test]
fn family_orthogonal_and_weights_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut classes: Vec<OrbitDatum> = (1..=4).flat_map(|n| nilpotent_classes(n, 3)).collect();
    classes.extend(mixed_classes());
    let mut count = 0;
    while count < 80 {
        let d = &classes[rng.gen_range(0..classes.len())];
        let ctx = WeightContext::new(d, None).unwrap();
        let n = d.n();
        let p = d.p();
        let g = random_g(n, p, &mut rng);
        let h = ctx.random_centralizer(&mut rng);
        let k = random_k(n, p, &mut rng);
        let g2 = &(&h * &g) * &k;
        // R_P(h g k) - R_P(g) is the same vector for every P
        let mut shift = None;
        for q in enumerate_parabolics(ctx.m_r(), ParaKind::P, None) {
            let diff: AVector = ctx
                .rp(&q, &g2)
                .unwrap()
                .iter()
                .zip(ctx.rp(&q, &g).unwrap())
                .map(|(a, b)| a - b)
                .collect();
            match &shift {
                None => shift = Some(diff),
                Some(s) => assert_eq!(s, &diff),
            }
        }
        let f1 = ctx.family(&g).unwrap();
        let f2 = ctx.family(&g2).unwrap();
        for l in enumerate_levis(ctx.m_r(), None) {
            for q in enumerate_parabolics(&l, ParaKind::F, None) {
                assert_eq!(cl_limit(&f1, &l, &q).unwrap(), cl_limit(&f2, &l, &q).unwrap());
            }
        }
        count += 1;
    }
}

#[test]
fn normalizer_equivariance() {
    // R_Q(g) = w.R_{(Ad w^{-1})Q}(g) with the representatives chosen by the context
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for d in nilpotent_classes(3, 2).into_iter().chain(mixed_classes()) {
        let ctx = WeightContext::new(&d, None).unwrap();
        let g = random_g(d.n(), d.p(), &mut rng);
        for q in enumerate_parabolics(ctx.m_r(), ParaKind::P, None) {
            let w = ctx.richardson().w(&q).unwrap();
            let lhs = ctx.rp(&q, &g).unwrap();
            let rhs = iwasawa_hp(&(&w.matrix() * &g), &q, d.p()).unwrap();
            assert_eq!(lhs, rhs);
            // coset independence: change w by an element of W^{M_R, X}
            for u in wopkit::paracomb::Perm::all(d.n()) {
                if !ctx.richardson().in_weyl_gx(&u) {
                    continue;
                }
                let stays = ctx.m_r().blocks().iter().all(|b| {
                    let img: Vec<usize> = b.iter().map(|&i| u.apply(i)).collect();
                    ctx.m_r().blocks().iter().any(|c| {
                        let mut s = img.clone();
                        s.sort_unstable();
                        &s == c
                    })
                });
                let tilde = ctx.richardson().r_map(&q).unwrap();
                if stays && tilde.conjugate(&u) == tilde {
                    let w2 = w.compose(&u);
                    assert_eq!(ctx.rp_with(&q, &w2, &g).unwrap(), lhs);
                }
            }
        }
    }
}

#[test]
fn gl2_weight_example() {
    // regular nilpotent of gl_2, g = diag(1, p^-k): v = sqrt(2) k l
    for p in [2u64, 3] {
        let d = OrbitDatum::nilpotent(p, part(&[2]));
        let ctx = WeightContext::new(&d, None).unwrap();
        let m = ctx.m_r().clone();
        let g_full = Parabolic::full(2);
        for k in 0..4i64 {
            let g = Matrix::diag(&[int(1), pow_p(p, -k)]);
            let v = ctx.weight(&m, &g_full, &g).unwrap();
            assert_eq!(v, SurdPoly::term(int(k), 2, 1));
        }
        let t = Matrix::from_rows(vec![vec![int(1), rat(1, p as i64)], vec![int(0), int(1)]]);
        assert!(ctx.weight(&m, &g_full, &t).unwrap().is_zero());
    }
}

#[test]
fn adjacent_identity_exhaustive_small() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut checked = 0;
    for n in 1..=3 {
        for d in nilpotent_classes(n, 2) {
            let ctx = WeightContext::new(&d, None).unwrap();
            let pars = enumerate_parabolics(ctx.m_r(), ParaKind::P, None);
            for p1 in &pars {
                for p2 in &pars {
                    if p1.adjacency(p2).is_none() {
                        continue;
                    }
                    for _ in 0..4 {
                        let g = random_g(n, 2, &mut rng);
                        let r = adjacent_difference(&ctx, p1, p2, &g).unwrap();
                        assert!(r.holds(), "{p1:?} {p2:?} {:?}", r);
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 20);
}

#[test]
fn adjacent_gl2_example() {
    let d = OrbitDatum::nilpotent(3, part(&[2]));
    let ctx = WeightContext::new(&d, None).unwrap();
    let up = Parabolic::upper_borel(2);
    let low = Parabolic::lower_borel(2);
    let g = Matrix::diag(&[int(1), int(3)]);
    let r = adjacent_difference(&ctx, &up, &low, &g).unwrap();
    assert!(r.holds());
    assert_eq!(valuation(&r.u13.det(), 3), Some(1));
    let av = coroot(2, &[0], &[1]);
    assert_eq!(r.rhs, av.iter().map(|x| -x).collect::<AVector>());
}

#[test]
fn rho_values() {
    for n in [2usize, 3] {
        let m = Levi::torus(n);
        for a in all_roots(&m) {
            let r = rho(a, &m, &Matrix::zeros(n, n), 3, 8).unwrap();
            assert_eq!(r.rho, int(1));
            assert!(r.stable_from <= 2);
        }
    }
    // blocks with coprime characteristic polynomials
    let m = Levi::standard(&[1, 2]);
    let y = levi_embed(&m, &[Matrix::diag(&[int(1)]), standard_representative(&mixed_classes()[2].semisimple_part()).select(&[1, 2], &[1, 2])]);
    for a in all_roots(&m) {
        assert_eq!(rho(a, &m, &y, 3, 8).unwrap().rho, int(0));
    }
}

#[test]
fn r_v_w_and_cocycle() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for n in [2usize, 3] {
        let m = Levi::torus(n);
        let zero = Matrix::zeros(n, n);
        let rhos = rho_all(&m, &zero, 3, 8).unwrap();
        let pars = enumerate_parabolics(&m, ParaKind::P, None);
        for _ in 0..6 {
            let a: AVector = (0..n).map(|_| int(rng.gen_range(-9..=9)) * pow_p(3, rng.gen_range(0..3))).collect();
            if !is_regular(&a, &zero, &m) {
                continue;
            }
            let pb = &pars[rng.gen_range(0..pars.len())];
            let mut v = random_unipotent(pb, 3, &mut rng);
            v = &v - &Matrix::identity(n);
            let rep = r_v_w_identity(&rhos, &a, &zero, &v, pb, 3).unwrap();
            assert!(rep.holds(), "{:?} vs {:?}", rep.lhs, rep.rhs);
            let p2 = &pars[rng.gen_range(0..pars.len())];
            assert!(cocycle_check(&rhos, &a, &zero, &v, pb, p2, 3).unwrap().is_ok());
        }
    }
}

#[test]
fn comparison_exhaustive_gl3() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for d in nilpotent_classes(3, 2) {
        let ctx = WeightContext::new(&d, None).unwrap();
        for pb in enumerate_parabolics(ctx.m_r(), ParaKind::P, None) {
            let v = loop {
                let v = &random_unipotent(&pb, 2, &mut rng) - &Matrix::identity(3);
                if similar(&v, ctx.x()) {
                    break v;
                }
            };
            let k = random_k(3, 2, &mut rng);
            let rep = weight_compare(&ctx, &pb, &v, Some(&k), 8).unwrap();
            assert!(rep.holds(), "{d:?} {pb:?} {:?}", rep.sides);
        }
    }
}

#[test]
fn r_descent_mixed_gl3() {
    let m = Levi::standard(&[1, 2]);
    let quad = standard_representative(&mixed_classes()[2].semisimple_part()).select(&[1, 2], &[1, 2]);
    let ys = vec![
        levi_embed(&m, &[Matrix::diag(&[int(0)]), Matrix::diag(&[int(0), int(0)])]),
        levi_embed(&m, &[Matrix::diag(&[int(1)]), quad.clone()]),
        levi_embed(&m, &[Matrix::diag(&[int(2)]), Matrix::diag(&[int(2), int(2)])]),
    ];
    let a: AVector = vec![int(0), int(3), int(3)];
    for y in &ys {
        assert!(r_descent_equal(&m, y, &a, 3, 8).unwrap());
    }
    let t = Levi::torus(3);
    let y: Matrix<Rat> = Matrix::diag(&[int(1), int(1), int(4)]);
    let rhos: BTreeMap<_, _> = rho_all_descent(&t, &y, 3, 8).unwrap();
    assert_eq!(rhos[&(0, 1)], int(1));
    assert_eq!(rhos[&(0, 2)], int(0));
    assert!(r_descent_equal(&t, &y, &[int(0), int(9), int(1)], 3, 8).unwrap());
}
