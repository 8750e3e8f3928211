use wopkit::exactnum::{int, Polynomial};
use wopkit::orbits::{OrbitDatum, Partition};
use wopkit::paracomb::*;

fn nilpotent_classes(max_n: usize) -> Vec<OrbitDatum> {
    (1..=max_n)
        .flat_map(|n| Partition::all(n).into_iter().map(|l| OrbitDatum::nilpotent(2, l)))
        .collect()
}

fn mixed_classes() -> Vec<OrbitDatum> {
    let part = |v: &[usize]| Partition::new(v.to_vec()).unwrap();
    let quad = Polynomial::new(vec![int(1), int(0), int(1)]);
    vec![
        OrbitDatum::new(3, vec![(Polynomial::linear_root(int(0)), part(&[2])), (Polynomial::linear_root(int(1)), part(&[1]))]).unwrap(),
        OrbitDatum::new(3, vec![(Polynomial::linear_root(int(0)), part(&[2, 1])), (Polynomial::linear_root(int(1)), part(&[1]))]).unwrap(),
        OrbitDatum::new(3, vec![(Polynomial::linear_root(int(0)), part(&[1])), (quad.clone(), part(&[2]))]).unwrap(),
        OrbitDatum::new(3, vec![(Polynomial::linear_root(int(2)), part(&[1, 1])), (Polynomial::linear_root(int(1)), part(&[2]))]).unwrap(),
    ]
}

#[test]
fn richardson_matches_brute_force() {
    for d in nilpotent_classes(5).into_iter().chain(mixed_classes()) {
        let mut rs = richardson_set(&d);
        rs.sort();
        let bf = brute::r_set(&d);
        assert_eq!(rs, bf, "class {d:?}");
    }
}

#[test]
fn ls_contains_richardson_and_w_lands_in_ls() {
    for d in nilpotent_classes(4).into_iter().chain(mixed_classes()) {
        let ls = brute::ls_set(&d);
        let rs = richardson_set(&d);
        for q in &ls {
            assert!(rs.iter().any(|p| q.contains(p)), "{d:?} {q:?}");
        }
        for m in richardson_levis(&d) {
            let ctx = RichardsonContext::new(&d, &m).unwrap();
            for q in enumerate_parabolics(&m, ParaKind::F, None) {
                let w = ctx.w(&q).unwrap();
                assert!(ctx.in_weyl_gx(&w), "{d:?} {q:?} {w:?}");
                let qt = ctx.ls_map(&q).unwrap();
                assert!(ls.contains(&qt), "{d:?} {q:?} -> {qt:?}");
            }
        }
    }
}
