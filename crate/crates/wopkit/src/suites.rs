//! Randomized and exhaustive invariant suites shared by `wopkit selftest`
//! and the acceptance tests. Every suite is seeded, so reruns are
//! reproducible.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exactnum::{int, pow_p, rat, similar, Matrix, Polynomial, Rat};
use crate::gmfam::{
    cl_limit, descent_identity, prime_identity, product_identity, random_orthogonal_family, splitting_identity,
    AVector, ExpPolyFamily,
};
use crate::integrals::{
    arthur_limit_check, descent_check, homogeneity_check, orbital_integral_gl2, NormalizationContext, TruncationSpec,
    WeightSpec,
};
use crate::orbits::{
    centralizer_dim, induce_orbit, levi_embed, orbit_codim, Levi, OrbitDatum, Partition,
};
use crate::paracomb::{
    brute, enumerate_levis, enumerate_parabolics, epsilon_set, richardson_levis, richardson_set, sr_action, ParaKind,
    Parabolic, Perm, RichardsonContext,
};
use crate::weights::{
    adjacent_difference, all_roots, hp_minors, hp_reduction, is_regular, iwasawa, iwasawa_hp, r_descent_equal, random_g,
    random_k, rho, weight_compare, WeightContext, DEFAULT_DEPTH,
};
use crate::SurdPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

impl Level {
    fn pick(self, quick: usize, full: usize) -> usize {
        match self {
            Level::Quick => quick,
            Level::Full => full,
        }
    }
}

impl std::str::FromStr for Level {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            _ => Err(format!("unknown level {s:?}")),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    /// The first few failures, for diagnosis.
    pub failures: Vec<String>,
    pub elapsed_ms: u128,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failed == 0 && self.passed > 0
    }
}

const MAX_FAILURES: usize = 10;

struct Tally {
    name: &'static str,
    passed: usize,
    failed: usize,
    failures: Vec<String>,
    start: Instant,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, passed: 0, failed: 0, failures: Vec::new(), start: Instant::now() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.fail(what());
        }
    }

    fn fail(&mut self, msg: String) {
        self.failed += 1;
        if self.failures.len() < MAX_FAILURES {
            self.failures.push(msg);
        }
    }

    /// Errors count as failures.
    fn check_res<T, E: std::fmt::Debug>(&mut self, r: Result<T, E>, ctx: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.fail(format!("{}: error {e:?}", ctx()));
                None
            }
        }
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            name: self.name.to_string(),
            passed: self.passed,
            failed: self.failed,
            failures: self.failures,
            elapsed_ms: self.start.elapsed().as_millis(),
        }
    }
}

// ------------------------------------------------------------ sample data

pub fn nilpotent_classes(n: usize, p: u64) -> Vec<OrbitDatum> {
    Partition::all(n).into_iter().map(|l| OrbitDatum::nilpotent(p, l)).collect()
}

/// A few classes of gl_3 and gl_2 with several characteristic factors.
pub fn mixed_classes() -> Vec<OrbitDatum> {
    let part = |v: &[usize]| Partition::new(v.to_vec()).unwrap();
    let quad = Polynomial::new(vec![int(1), int(0), int(1)]);
    let lin = |a: i64| Polynomial::linear_root(int(a));
    vec![
        OrbitDatum::new(3, vec![(lin(0), part(&[2])), (lin(1), part(&[1]))]).unwrap(),
        OrbitDatum::new(3, vec![(lin(0), part(&[2, 1])), (lin(1), part(&[1]))]).unwrap(),
        OrbitDatum::new(3, vec![(lin(0), part(&[1])), (quad, part(&[2]))]).unwrap(),
        OrbitDatum::new(2, vec![(lin(2), part(&[1, 1])), (lin(1), part(&[2]))]).unwrap(),
    ]
}

fn quad_block() -> Matrix<Rat> {
    Matrix::from_rows(vec![vec![int(0), int(-1)], vec![int(1), int(0)]])
}

/// A random Levi of gl_n (random set partition of the coordinates).
pub fn random_levi(n: usize, rng: &mut impl Rng) -> Levi {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let mut blocks = Vec::new();
    let mut cur = Vec::new();
    for (k, &i) in perm.iter().enumerate() {
        cur.push(i);
        if k + 1 == n || rng.gen_bool(0.6) {
            blocks.push(std::mem::take(&mut cur));
        }
    }
    Levi::new(n, blocks).unwrap()
}

fn random_family(m: &Levi, rng: &mut impl Rng) -> ExpPolyFamily {
    let a = random_orthogonal_family(m, rng);
    if rng.gen_bool(0.5) {
        a.sum(&random_orthogonal_family(m, rng))
    } else {
        a
    }
}

fn random_levi_element(par: &Parabolic, p: u64, rng: &mut impl Rng) -> Matrix<Rat> {
    let levi = par.levi();
    let mats: Vec<Matrix<Rat>> = levi.blocks().iter().map(|b| random_g(b.len(), p, rng)).collect();
    levi_embed(&levi, &mats)
}

/// 1 + (random element of the nilradical of `par`).
fn random_unipotent(par: &Parabolic, p: u64, rng: &mut impl Rng) -> Matrix<Rat> {
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

fn all_parabolics(n: usize) -> Vec<Parabolic> {
    enumerate_parabolics(&Levi::torus(n), ParaKind::F, None)
}

/// Tuples with one entry of `choices[b]` for each b.
fn cartesian<T: Clone>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for c in choices {
        out = out
            .into_iter()
            .flat_map(|pre| {
                c.iter().map(move |x| {
                    let mut v = pre.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect();
    }
    out
}

// ------------------------------------------------------------------ suites

/// Ind_L^G Ind_M^L = Ind_M^G and codimension preservation, over every
/// semistandard Levi and every tuple of nilpotent classes.
pub fn induction(level: Level) -> SuiteReport {
    let mut t = Tally::new("induction");
    let max_n = level.pick(4, 5);
    for n in 1..=max_n {
        for m in Levi::torus(n).overgroups() {
            let choices: Vec<Vec<OrbitDatum>> = m.blocks().iter().map(|b| nilpotent_classes(b.len(), 2)).collect();
            for orbits in cartesian(&choices) {
                let Some(ind) = t.check_res(induce_orbit(&m, &orbits), || format!("{m:?}")) else { continue };
                t.check(centralizer_dim(&ind) == orbit_codim(&orbits), || format!("codim {m:?} {orbits:?}"));
                for l in m.overgroups() {
                    let stepwise = induce_in_stages(&m, &l, &orbits);
                    t.check(stepwise.as_ref() == Some(&ind), || format!("transitivity {m:?} < {l:?} {orbits:?}"));
                }
            }
        }
    }
    t.finish()
}

/// Ind_L^G(Ind_M^L(o)), inducing inside each block of L first.
pub fn induce_in_stages(m: &Levi, l: &Levi, orbits: &[OrbitDatum]) -> Option<OrbitDatum> {
    let mut mid = Vec::new();
    for big in l.blocks() {
        let pos = |i: usize| big.iter().position(|&j| j == i).unwrap();
        let inside: Vec<usize> = (0..m.blocks().len()).filter(|&b| big.contains(&m.blocks()[b][0])).collect();
        let sub_blocks: Vec<Vec<usize>> =
            inside.iter().map(|&b| m.blocks()[b].iter().map(|&i| pos(i)).collect()).collect();
        let sub = Levi::new(big.len(), sub_blocks.clone()).ok()?;
        let sub_orbits: Vec<OrbitDatum> = sub
            .blocks()
            .iter()
            .map(|sb| {
                let k = sub_blocks.iter().position(|c| {
                    let mut c = c.clone();
                    c.sort_unstable();
                    &c == sb
                });
                orbits[inside[k.unwrap()]].clone()
            })
            .collect();
        mid.push(induce_orbit(&sub, &sub_orbits).ok()?);
    }
    induce_orbit(l, &mid).ok()
}

/// Richardson sets against brute force, the S_r action on epsilon tables,
/// and the fibers of the map (R).
pub fn richardson(level: Level) -> SuiteReport {
    let mut t = Tally::new("richardson");
    let max_n = level.pick(4, 5);
    let mut classes: Vec<OrbitDatum> = (1..=max_n).flat_map(|n| nilpotent_classes(n, 2)).collect();
    classes.extend(mixed_classes());
    for d in &classes {
        let mut rs = richardson_set(d);
        rs.sort();
        t.check(rs == brute::r_set(d), || format!("R set {d:?}"));
        if !d.is_nilpotent() {
            continue;
        }
        let Some(tables) = t.check_res(epsilon_set(d, 0), || format!("{d:?}")) else { continue };
        t.check(tables.len() == rs.len(), || format!("|E| {} vs {} for {d:?}", tables.len(), rs.len()));
        // transitivity of the S_r action
        let all: BTreeSet<_> = tables.iter().cloned().collect();
        let mut orbit = BTreeSet::new();
        for sigma in Perm::all(tables[0].r) {
            if let Some(e) = t.check_res(sr_action(&sigma, &tables[0]), || format!("S_r {d:?}")) {
                orbit.insert(e);
            }
        }
        t.check(orbit == all, || format!("S_r orbit {d:?}"));
        for m in richardson_levis(d) {
            fiber_check(&mut t, d, &m);
        }
    }
    t.finish()
}

fn fiber_check(t: &mut Tally, d: &OrbitDatum, m: &Levi) {
    let Some(ctx) = t.check_res(RichardsonContext::new(d, m), || format!("{d:?} {m:?}")) else { return };
    let mut fibers: BTreeMap<Parabolic, Vec<Parabolic>> = BTreeMap::new();
    for q in enumerate_parabolics(m, ParaKind::P, None) {
        if let Some(r) = t.check_res(ctx.r_map(&q), || format!("r_map {q:?}")) {
            fibers.entry(r).or_default().push(q);
        }
    }
    let normalizes = |u: &Perm| {
        m.blocks().iter().all(|b| {
            let mut img: Vec<usize> = b.iter().map(|&i| u.apply(i)).collect();
            img.sort_unstable();
            m.blocks().contains(&img)
        })
    };
    for fiber in fibers.values() {
        t.check(fiber.len() == ctx.predicted_fiber_size(), || {
            format!("fiber size {} vs {} for {d:?}", fiber.len(), ctx.predicted_fiber_size())
        });
        let Some(w1) = t.check_res(ctx.w(&fiber[0]), || format!("w {:?}", fiber[0])) else { continue };
        let mut seen = BTreeSet::new();
        for q in fiber {
            let Some(w2) = t.check_res(ctx.w(q), || format!("w {q:?}")) else { continue };
            let u = w2.compose(&w1.inverse());
            let ok = ctx.in_weyl_gx(&u) && normalizes(&u) && fiber[0].conjugate(&u) == *q;
            t.check(ok, || format!("torsor element {u:?} for {d:?}"));
            seen.insert(u.images().to_vec());
        }
        t.check(seen.len() == fiber.len(), || format!("free action {d:?}"));
    }
}

/// H_P: right K invariance, left M equivariance, left N invariance and
/// agreement of the two computation routes.
pub fn iwasawa_suite(level: Level) -> SuiteReport {
    let mut t = Tally::new("iwasawa");
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a5a);
    for _ in 0..level.pick(60, 500) {
        let n = rng.gen_range(1..=4);
        let p = [2u64, 3, 5][rng.gen_range(0..3)];
        let pars = all_parabolics(n);
        let par = &pars[rng.gen_range(0..pars.len())];
        let g = random_g(n, p, &mut rng);
        let ctx = || format!("n={n} p={p} {par:?}");
        let (Some(a), Some(b)) = (t.check_res(hp_minors(&g, par, p), ctx), t.check_res(hp_reduction(&g, par, p), ctx))
        else {
            continue;
        };
        t.check(a == b, || format!("routes {}", ctx()));
        let k = random_k(n, p, &mut rng);
        let m = random_levi_element(par, p, &mut rng);
        let u = random_unipotent(par, p, &mut rng);
        let (Some(hk), Some(hm), Some(hmg), Some(hu)) = (
            t.check_res(iwasawa_hp(&(&g * &k), par, p), ctx),
            t.check_res(iwasawa_hp(&m, par, p), ctx),
            t.check_res(iwasawa_hp(&(&m * &g), par, p), ctx),
            t.check_res(iwasawa_hp(&(&u * &g), par, p), ctx),
        ) else {
            continue;
        };
        t.check(hk == a, || format!("right K {}", ctx()));
        t.check(hmg == add(&hm, &a), || format!("left M {}", ctx()));
        t.check(hu == a, || format!("left N {}", ctx()));
        if let Some(iw) = t.check_res(iwasawa(&g, par, p), ctx) {
            t.check(par.contains_matrix(&iw.b) && &iw.b * &iw.k == g, || format!("g = b k {}", ctx()));
        }
    }
    t.finish()
}

/// The family -R_P(g) is orthogonal, and v_{L,X}^Q(g) is invariant under
/// g -> h g k with h in G_X(F) and k in K.
pub fn orthogonality(level: Level) -> SuiteReport {
    let mut t = Tally::new("orthogonality");
    let mut rng = ChaCha8Rng::seed_from_u64(0x0a7);
    let mut classes: Vec<OrbitDatum> = (1..=4).flat_map(|n| nilpotent_classes(n, 3)).collect();
    classes.extend(mixed_classes());
    let contexts: Vec<WeightContext> = classes.iter().map(|d| WeightContext::new(d, None).unwrap()).collect();
    for _ in 0..level.pick(20, 200) {
        let ctx = &contexts[rng.gen_range(0..contexts.len())];
        let d = ctx.datum();
        let (n, p) = (d.n(), d.p());
        let g = random_g(n, p, &mut rng);
        let h = ctx.random_centralizer(&mut rng);
        let k = random_k(n, p, &mut rng);
        let g2 = &(&h * &g) * &k;
        let (Some(f1), Some(f2)) =
            (t.check_res(ctx.family(&g), || format!("{d:?}")), t.check_res(ctx.family(&g2), || format!("{d:?}")))
        else {
            continue;
        };
        let levis = enumerate_levis(ctx.m_r(), None);
        let l = &levis[rng.gen_range(0..levis.len())];
        let qs = enumerate_parabolics(l, ParaKind::F, None);
        let q = &qs[rng.gen_range(0..qs.len())];
        let same = match (cl_limit(&f1, l, q), cl_limit(&f2, l, q)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        };
        t.check(same, || format!("invariance {d:?} L={l:?} Q={q:?}"));
    }
    t.finish()
}

/// -R_{P1}(g) + R_{P2}(g) = log|det U_13| alpha^vee for adjacent P1, P2.
pub fn adjacent(level: Level) -> SuiteReport {
    let mut t = Tally::new("adjacent");
    let mut rng = ChaCha8Rng::seed_from_u64(0xad1);
    let reps = level.pick(1, 3);
    for n in 1..=3 {
        for d in nilpotent_classes(n, 2) {
            let ctx = WeightContext::new(&d, None).unwrap();
            let pars = enumerate_parabolics(ctx.m_r(), ParaKind::P, None);
            for p1 in &pars {
                for p2 in pars.iter().filter(|p2| p1.adjacency(p2).is_some()) {
                    for _ in 0..reps {
                        let g = random_g(n, 2, &mut rng);
                        adjacent_one(&mut t, &ctx, p1, p2, &g);
                    }
                }
            }
        }
    }
    let big: Vec<WeightContext> =
        nilpotent_classes(4, 3).iter().map(|d| WeightContext::new(d, None).unwrap()).collect();
    let mut done = 0;
    while done < level.pick(10, 60) {
        let ctx = &big[rng.gen_range(0..big.len())];
        let pars = enumerate_parabolics(ctx.m_r(), ParaKind::P, None);
        let p1 = &pars[rng.gen_range(0..pars.len())];
        let adj: Vec<&Parabolic> = pars.iter().filter(|p2| p1.adjacency(p2).is_some()).collect();
        if adj.is_empty() {
            continue;
        }
        let p2 = adj[rng.gen_range(0..adj.len())];
        let g = random_g(4, 3, &mut rng);
        adjacent_one(&mut t, ctx, p1, p2, &g);
        done += 1;
    }
    t.finish()
}

fn adjacent_one(t: &mut Tally, ctx: &WeightContext, p1: &Parabolic, p2: &Parabolic, g: &Matrix<Rat>) {
    let what = || format!("{:?} {p1:?} {p2:?}", ctx.datum());
    if let Some(r) = t.check_res(adjacent_difference(ctx, p1, p2, g), what) {
        t.check(r.holds(), || format!("{} lhs {:?} rhs {:?}", what(), r.lhs, r.rhs));
    }
}

/// The weight comparison on every nilpotent class of gl_3 and every base
/// parabolic, and r_M^L(A, Y) = r_M^L[A, Y] on random mixed data of gl_3.
pub fn comparison(level: Level) -> SuiteReport {
    let mut t = Tally::new("comparison");
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0);
    for d in nilpotent_classes(3, 2) {
        let ctx = WeightContext::new(&d, None).unwrap();
        for pb in enumerate_parabolics(ctx.m_r(), ParaKind::P, None) {
            for _ in 0..level.pick(1, 2) {
                let v = loop {
                    let v = &random_unipotent(&pb, 2, &mut rng) - &Matrix::identity(3);
                    if similar(&v, ctx.x()) {
                        break v;
                    }
                };
                let k = random_k(3, 2, &mut rng);
                let what = || format!("{d:?} {pb:?}");
                if let Some(r) = t.check_res(weight_compare(&ctx, &pb, &v, Some(&k), DEFAULT_DEPTH), what) {
                    t.check(r.holds(), || format!("{} {:?}", what(), r.sides));
                }
            }
        }
    }
    let levis = [Levi::torus(3), Levi::standard(&[1, 2]), Levi::standard(&[2, 1]), Levi::new(3, vec![vec![0, 2], vec![1]]).unwrap()];
    let mut done = 0;
    while done < level.pick(6, 24) {
        let m = &levis[rng.gen_range(0..levis.len())];
        let y = random_semisimple_in(m, &mut rng);
        let a = random_a(m, 3, &mut rng);
        if !is_regular(&a, &y, m) {
            continue;
        }
        let what = || format!("{m:?} Y={y:?} A={a:?}");
        if let Some(eq) = t.check_res(r_descent_equal(m, &y, &a, 3, DEFAULT_DEPTH), what) {
            t.check(eq, what);
        }
        done += 1;
    }
    t.finish()
}

/// Semisimple Y in the Levi: scalar or split diagonal blocks, or a
/// companion of x^2 + 1 on blocks of size 2.
pub fn random_semisimple_in(m: &Levi, rng: &mut impl Rng) -> Matrix<Rat> {
    let mats: Vec<Matrix<Rat>> = m
        .blocks()
        .iter()
        .map(|b| {
            let k = b.len();
            match rng.gen_range(0..3) {
                0 => Matrix::diag(&vec![int(rng.gen_range(0..3)); k]),
                1 if k == 2 => quad_block(),
                _ => Matrix::diag(&(0..k).map(|_| int(rng.gen_range(0..3))).collect::<Vec<_>>()),
            }
        })
        .collect();
    levi_embed(m, &mats)
}

/// A in a_M with p-power entries, constant on blocks.
pub fn random_a(m: &Levi, p: u64, rng: &mut impl Rng) -> AVector {
    let mut a = vec![Rat::from_integer(0.into()); m.n()];
    for b in m.blocks() {
        let v = int(rng.gen_range(-2..=2)) * pow_p(p, rng.gen_range(0..3));
        for &i in b {
            a[i] = v.clone();
        }
    }
    a
}

/// rho = 1 for the zero orbit of the torus of gl_2 and gl_3, rho = 0 on
/// the regular locus, slope stable by depth 3.
pub fn rho_suite(level: Level) -> SuiteReport {
    let mut t = Tally::new("rho");
    let mut rng = ChaCha8Rng::seed_from_u64(0x40);
    for p in [2u64, 3] {
        for n in [2usize, 3] {
            let m = Levi::torus(n);
            for a in all_roots(&m) {
                let what = || format!("torus n={n} p={p} {a:?}");
                if let Some(r) = t.check_res(rho(a, &m, &Matrix::zeros(n, n), p, DEFAULT_DEPTH), what) {
                    t.check(r.rho == int(1) && r.stable_from <= 3, || format!("{} {r:?}", what()));
                }
            }
        }
    }
    let levis = [Levi::torus(2), Levi::torus(3), Levi::standard(&[1, 2]), Levi::standard(&[2, 1])];
    let mut done = 0;
    while done < level.pick(6, 20) {
        let m = &levis[rng.gen_range(0..levis.len())];
        let y = random_semisimple_in(m, &mut rng);
        let zero = vec![Rat::from_integer(0.into()); m.n()];
        if !is_regular(&zero, &y, m) {
            continue;
        }
        for a in all_roots(m) {
            let what = || format!("{m:?} Y={y:?} {a:?}");
            if let Some(r) = t.check_res(rho(a, m, &y, 3, DEFAULT_DEPTH), what) {
                t.check(r.rho == int(0) && r.stable_from <= 3, || format!("{} {r:?}", what()));
            }
        }
        done += 1;
    }
    t.finish()
}

/// GL_2 evaluator: limit definition, homogeneity, descent and depth
/// monotonicity at depth 12 (and 16).
pub fn gl2(level: Level) -> SuiteReport {
    let mut t = Tally::new("gl2");
    let depth = level.pick(10, 12);
    for p in [2u64, 3] {
        let ctx = NormalizationContext::new(p);
        let tr = TruncationSpec::new(depth).unwrap();
        for y in [(int(0), int(0)), (int(2), int(2)), (int(1), int(1 + p as i64)), (int(0), int(p as i64))] {
            if let Some(r) = t.check_res(arthur_limit_check(&y, &tr, &ctx), || format!("limit p={p} {y:?}")) {
                t.check(r.agrees, || format!("limit p={p} {y:?} {r:?}"));
            }
        }
        for s in [int(1), int(p as i64), int((p * p) as i64), rat(1, p as i64)] {
            if let Some(h) = t.check_res(homogeneity_check(&s, &tr, &ctx), || format!("homogeneity p={p} t={s}")) {
                t.check(h.agrees, || format!("homogeneity p={p} t={s} {h:?}"));
            }
        }
        for z in [(int(0), int(0)), (int(1), int(1 + p as i64))] {
            if let Some(r) = t.check_res(descent_check(&z, &tr, &ctx), || format!("descent p={p} {z:?}")) {
                t.check(r.agrees, || format!("descent p={p} {z:?} {r:?}"));
            }
        }
        if level == Level::Full {
            let d = OrbitDatum::nilpotent(p, Partition::new(vec![2]).unwrap());
            for w in [WeightSpec::Unweighted, WeightSpec::torus()] {
                let a = orbital_integral_gl2(&d, &w, &TruncationSpec::new(12).unwrap(), &ctx);
                let b = orbital_integral_gl2(&d, &w, &TruncationSpec::new(16).unwrap(), &ctx);
                match (a, b) {
                    (Ok(a), Ok(b)) => t.check(
                        a.agrees_with(&b.value, &SurdPoly::zero()) && b.tail.dominated_by(&a.tail) && b.tail != a.tail,
                        || format!("depth 12 -> 16 p={p} {a:?} {b:?}"),
                    ),
                    (a, b) => t.fail(format!("depth 12 -> 16 p={p}: {a:?} {b:?}")),
                }
            }
        }
    }
    t.finish()
}

/// Product, descent, splitting and prime identities on random families.
pub fn families(level: Level) -> SuiteReport {
    let mut t = Tally::new("families");
    let mut rng = ChaCha8Rng::seed_from_u64(0xfa);
    for trial in 0..level.pick(25, 120) {
        let n = 2 + trial % 3;
        let m = random_levi(n, &mut rng);
        let c = random_family(&m, &mut rng);
        let d = random_family(&m, &mut rng);
        let e = random_family(&m, &mut rng);
        if let Some(r) = t.check_res(product_identity(&c, &d), || format!("product {m:?}")) {
            t.check(r.holds(), || format!("product {m:?}: {} vs {}", r.lhs, r.rhs));
        }
        for l in enumerate_levis(&m, None) {
            if let Some(r) = t.check_res(descent_identity(&c, &l), || format!("descent {m:?} {l:?}")) {
                t.check(r.holds(), || format!("descent {m:?} {l:?}: {} vs {}", r.lhs, r.rhs));
            }
        }
        if let Some(r) = t.check_res(splitting_identity(&[c.clone(), d.clone(), e]), || format!("splitting {m:?}")) {
            t.check(r.holds(), || format!("splitting {m:?}: {} vs {}", r.lhs, r.rhs));
        }
        if let Some(r) = t.check_res(prime_identity(&c, &d), || format!("prime {m:?}")) {
            t.check(r.holds(), || format!("prime {m:?}: {} vs {}", r.lhs, r.rhs));
        }
    }
    t.finish()
}

pub const SUITE_NAMES: [&str; 9] =
    ["induction", "richardson", "iwasawa", "orthogonality", "adjacent", "comparison", "rho", "gl2", "families"];

pub fn run(name: &str, level: Level) -> Option<SuiteReport> {
    Some(match name {
        "induction" => induction(level),
        "richardson" => richardson(level),
        "iwasawa" => iwasawa_suite(level),
        "orthogonality" => orthogonality(level),
        "adjacent" => adjacent(level),
        "comparison" => comparison(level),
        "rho" => rho_suite(level),
        "gl2" => gl2(level),
        "families" => families(level),
        _ => return None,
    })
}

pub fn all(level: Level) -> Vec<SuiteReport> {
    SUITE_NAMES.iter().map(|s| run(s, level).unwrap()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stages_agree_on_a_small_case() {
        let m = Levi::new(3, vec![vec![0, 2], vec![1]]).unwrap();
        let o = vec![OrbitDatum::zero(2, 2), OrbitDatum::zero(2, 1)];
        let direct = induce_orbit(&m, &o).unwrap();
        for l in m.overgroups() {
            assert_eq!(induce_in_stages(&m, &l, &o).unwrap(), direct);
        }
        assert_eq!(direct, OrbitDatum::nilpotent(2, Partition::new(vec![2, 1]).unwrap()));
    }

    #[test]
    fn level_parses() {
        assert_eq!("quick".parse::<Level>().unwrap(), Level::Quick);
        assert!("slow".parse::<Level>().is_err());
    }
}
