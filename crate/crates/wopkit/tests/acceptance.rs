//! Acceptance criteria 1-9. Each criterion runs the shared suite at the full
//! level plus an oracle written here, independently of the library routes,
//! and prints one PASS/FAIL line. The test fails if any criterion fails.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wopkit::exactnum::{int, pow_p, rat, valuation, Matrix, Rat};
use wopkit::gmfam::{coroot, AVector};
use wopkit::orbits::{induce_orbit, levi_embed, standard_representative, Levi, OrbitDatum, Partition};
use wopkit::paracomb::{enumerate_parabolics, epsilon_set, ParaKind, Parabolic};
use wopkit::suites::{self, Level, SuiteReport};
use wopkit::integrals::{arthur_limit_check, homogeneity_check, NormalizationContext, TruncationSpec};
use wopkit::weights::{adjacent_difference, iwasawa_hp, n_square, random_g, WeightContext};
use wopkit::SurdPoly;

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(reports: &[SuiteReport], oracle: Result<String, String>, elapsed: Duration, limit: Option<u64>) -> Verdict {
    let mut ok = reports.iter().all(SuiteReport::ok);
    let mut parts: Vec<String> = reports.iter().map(|r| format!("{} {}/{}", r.name, r.passed, r.passed + r.failed)).collect();
    for r in reports {
        parts.extend(r.failures.iter().take(3).cloned());
    }
    match oracle {
        Ok(s) => parts.push(s),
        Err(s) => {
            ok = false;
            parts.push(format!("oracle: {s}"));
        }
    }
    if let Some(l) = limit {
        if elapsed > Duration::from_secs(l) {
            ok = false;
        }
        parts.push(format!("{:.1}s (limit {l}s)", elapsed.as_secs_f64()));
    } else {
        parts.push(format!("{:.1}s", elapsed.as_secs_f64()));
    }
    Verdict { ok, detail: parts.join("; ") }
}

fn timed(f: impl FnOnce() -> (Vec<SuiteReport>, Result<String, String>), limit: Option<u64>) -> Verdict {
    let t = Instant::now();
    let (r, o) = f();
    verdict(&r, o, t.elapsed(), limit)
}

// ------------------------------------------------------------------ oracles

/// Jordan type of a nilpotent matrix from the ranks of its powers.
fn jordan_type(x: &Matrix<Rat>) -> Partition {
    let n = x.rows();
    let mut ranks = vec![n];
    let mut pw = Matrix::identity(n);
    while *ranks.last().unwrap() > 0 {
        pw = &pw * x;
        ranks.push(pw.rank());
    }
    // blocks of size >= k: r_{k-1} - r_k
    let ge: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut parts = Vec::new();
    for k in 0..ge.len() {
        let exact = ge[k] - ge.get(k + 1).copied().unwrap_or(0);
        parts.extend(std::iter::repeat_n(k + 1, exact));
    }
    Partition::new(parts).unwrap()
}

fn dominated(a: &Partition, b: &Partition) -> bool {
    let (mut sa, mut sb) = (0, 0);
    for k in 0..a.parts().len().max(b.parts().len()) {
        sa += a.parts().get(k).copied().unwrap_or(0);
        sb += b.parts().get(k).copied().unwrap_or(0);
        if sa > sb {
            return false;
        }
    }
    true
}

/// The induced class is the dense class of o + n_P: random elements never
/// exceed it in dominance order, and some sample reaches it.
fn induction_oracle() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut count = 0;
    for n in 1..=4 {
        for m in Levi::torus(n).overgroups() {
            let par = Parabolic::new(n, m.blocks().to_vec()).unwrap();
            let steps = par.steps();
            let choices: Vec<Vec<Partition>> = m.blocks().iter().map(|b| Partition::all(b.len())).collect();
            let mut tuples = vec![Vec::new()];
            for c in &choices {
                tuples = tuples
                    .into_iter()
                    .flat_map(|t: Vec<Partition>| c.iter().map(move |x| [t.clone(), vec![x.clone()]].concat()))
                    .collect();
            }
            for parts in tuples {
                let orbits: Vec<OrbitDatum> = parts.iter().map(|l| OrbitDatum::nilpotent(2, l.clone())).collect();
                let ind = induce_orbit(&m, &orbits).map_err(|e| e.to_string())?;
                let expected = ind.blocks().next().unwrap().1.clone();
                let base = levi_embed(&m, &orbits.iter().map(standard_representative).collect::<Vec<_>>());
                let mut reached = false;
                for _ in 0..3 {
                    let mut x = base.clone();
                    for i in 0..n {
                        for j in 0..n {
                            if steps[i] < steps[j] {
                                x[(i, j)] = int(rng.gen_range(-5..=5));
                            }
                        }
                    }
                    let jt = jordan_type(&x);
                    if !dominated(&jt, &expected) {
                        return Err(format!("{m:?} {parts:?}: sample {jt:?} above {expected:?}"));
                    }
                    reached |= jt == expected;
                }
                if !reached {
                    return Err(format!("{m:?} {parts:?}: {expected:?} never reached"));
                }
                count += 1;
            }
        }
    }
    Ok(format!("o + n_P oracle {count} cases"))
}

/// |E| for a partition: chains S_{j1} in S_{j2} in ... of subsets of the r
/// rows with |S_j| = j, a multinomial coefficient.
fn epsilon_oracle() -> Result<String, String> {
    let fact = |k: usize| (1..=k).product::<usize>();
    let mut count = 0;
    for n in 1..=5 {
        for l in Partition::all(n) {
            let d = OrbitDatum::nilpotent(2, l.clone());
            let tables = epsilon_set(&d, 0).map_err(|e| e.to_string())?;
            let r = l.largest();
            let mut js: Vec<usize> = l.parts().to_vec();
            js.sort_unstable();
            js.dedup();
            let mut denom = 1;
            let mut prev = 0;
            for &j in &js {
                denom *= fact(j - prev);
                prev = j;
            }
            denom *= fact(r - prev);
            if tables.len() != fact(r) / denom {
                return Err(format!("{l:?}: {} tables, expected {}", tables.len(), fact(r) / denom));
            }
            count += 1;
        }
    }
    Ok(format!("multinomial count {count} partitions"))
}

/// H for the two Borels of GL_2 from the rows of g: for the upper Borel the
/// last row of g is b_22 times a primitive row.
fn iwasawa_oracle() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let val = |x: &Rat, p: u64| valuation(x, p).unwrap_or(i64::MAX);
    for trial in 0..500 {
        let p = [2u64, 3, 5][trial % 3];
        let g = random_g(2, p, &mut rng);
        let vdet = valuation(&g.det(), p).unwrap();
        let v22 = val(&g[(1, 0)], p).min(val(&g[(1, 1)], p));
        let v11 = val(&g[(0, 0)], p).min(val(&g[(0, 1)], p));
        let up = vec![int(-(vdet - v22)), int(-v22)];
        let low = vec![int(-v11), int(-(vdet - v11))];
        let got_up = iwasawa_hp(&g, &Parabolic::upper_borel(2), p).map_err(|e| e.to_string())?;
        let got_low = iwasawa_hp(&g, &Parabolic::lower_borel(2), p).map_err(|e| e.to_string())?;
        if got_up != up || got_low != low {
            return Err(format!("p={p} g={g:?}: {got_up:?}/{got_low:?} vs {up:?}/{low:?}"));
        }
    }
    Ok("2x2 row-valuation oracle 500 cases".into())
}

/// Adjacent members of -R_P(g) differ by a multiple of the separating
/// coroot (the defining property of an orthogonal set).
fn orthogonality_oracle() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut classes: Vec<OrbitDatum> = (2..=4).flat_map(|n| suites::nilpotent_classes(n, 3)).collect();
    classes.extend(suites::mixed_classes());
    let mut pairs = 0;
    for _ in 0..60 {
        let d = &classes[rng.gen_range(0..classes.len())];
        let ctx = WeightContext::new(d, None).map_err(|e| e.to_string())?;
        let g = random_g(d.n(), d.p(), &mut rng);
        let pars = enumerate_parabolics(ctx.m_r(), ParaKind::P, None);
        for p1 in &pars {
            for p2 in &pars {
                let Some(k) = p1.adjacency(p2) else { continue };
                let a = ctx.rp(p1, &g).map_err(|e| e.to_string())?;
                let b = ctx.rp(p2, &g).map_err(|e| e.to_string())?;
                let diff: AVector = a.iter().zip(&b).map(|(x, y)| y - x).collect();
                let av = coroot(d.n(), &p1.blocks()[k], &p1.blocks()[k + 1]);
                let i = av.iter().position(|x| *x != int(0)).unwrap();
                let c = &diff[i] / &av[i];
                if diff.iter().zip(&av).any(|(x, y)| *x != &c * y) {
                    return Err(format!("{d:?} {p1:?} {p2:?}: {diff:?} not along {av:?}"));
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("coroot proportionality {pairs} adjacent pairs"))
}

/// GL_2, zero orbit of the torus: n_box(A_k, 0, V) for A_k = diag(p^k, 0)
/// and V = e_21, with H from the row-valuation formula; the slope in k of
/// the alpha^vee coefficient is rho = 1 from the first step on.
fn rho_oracle() -> Result<String, String> {
    for p in [2u64, 3] {
        let zero = Matrix::zeros(2, 2);
        let v = Matrix::unit(2, 1, 0);
        let pbox = Parabolic::lower_borel(2);
        let mut hs = Vec::new();
        for k in 1..=5 {
            let a = vec![pow_p(p, k), int(0)];
            let n = n_square(&a, &zero, &v, &pbox).map_err(|e| e.to_string())?;
            // H_B(n) for the upper Borel, coordinate 2
            let v22 = [n[(1, 0)].clone(), n[(1, 1)].clone()]
                .iter()
                .filter_map(|x| valuation(x, p))
                .min()
                .unwrap();
            hs.push(-v22);
        }
        let slopes: Vec<i64> = hs.windows(2).map(|w| w[1] - w[0]).collect();
        if slopes.iter().any(|s| s.abs() != 1) {
            return Err(format!("p={p}: h = {hs:?}"));
        }
    }
    Ok("closed-form slope oracle".into())
}

/// GL_2, regular nilpotent, g = diag(1, p): det U_13 has valuation 1 and
/// the difference is -alpha^vee.
fn adjacent_oracle() -> Result<String, String> {
    for p in [2u64, 3, 5] {
        let d = OrbitDatum::nilpotent(p, Partition::new(vec![2]).unwrap());
        let ctx = WeightContext::new(&d, None).map_err(|e| e.to_string())?;
        let g = Matrix::diag(&[int(1), int(p as i64)]);
        let r = adjacent_difference(&ctx, &Parabolic::upper_borel(2), &Parabolic::lower_borel(2), &g)
            .map_err(|e| e.to_string())?;
        let minus_av: AVector = coroot(2, &[0], &[1]).iter().map(|x| -x).collect();
        if valuation(&r.u13.det(), p) != Some(1) || r.rhs != minus_av || r.lhs != r.rhs {
            return Err(format!("p={p}: {r:?}"));
        }
    }
    Ok("gl_2 closed form".into())
}

/// Limit and homogeneity timed one call at a time; the limit for the zero
/// orbit against the geometric series -(1 + 1/p) sqrt(2) l / (p - 1).
fn gl2_oracle() -> Result<String, String> {
    let tr = TruncationSpec::new(12).unwrap();
    let mut slowest = Duration::ZERO;
    for p in [2u64, 3] {
        let ctx = NormalizationContext::new(p);
        let t = Instant::now();
        let r = arthur_limit_check(&(int(0), int(0)), &tr, &ctx).map_err(|e| e.to_string())?;
        slowest = slowest.max(t.elapsed());
        let closed = SurdPoly::term(-(int(1) + rat(1, p as i64)) / int(p as i64 - 1), 2, 1);
        if r.extrapolated != closed || !r.direct.agrees_with(&closed, &SurdPoly::zero()) {
            return Err(format!("p={p}: {} vs {closed}", r.extrapolated));
        }
        for s in [int(p as i64), int((p * p) as i64)] {
            let t = Instant::now();
            let h = homogeneity_check(&s, &tr, &ctx).map_err(|e| e.to_string())?;
            slowest = slowest.max(t.elapsed());
            if !h.agrees {
                return Err(format!("p={p} t={s}: {h:?}"));
            }
        }
    }
    if slowest > Duration::from_secs(60) {
        return Err(format!("a check took {:.1}s", slowest.as_secs_f64()));
    }
    Ok(format!("closed-form limit; slowest check {:.2}s", slowest.as_secs_f64()))
}

// ------------------------------------------------------------------- runner

fn main() {
    let full = Level::Full;
    let criteria: Vec<(&str, Box<dyn FnOnce() -> Verdict>)> = vec![
        ("1 induction", Box::new(|| timed(|| (vec![suites::induction(full)], induction_oracle()), Some(10)))),
        ("2 richardson", Box::new(|| timed(|| (vec![suites::richardson(full)], epsilon_oracle()), Some(30)))),
        ("3 iwasawa", Box::new(|| timed(|| (vec![suites::iwasawa_suite(full)], iwasawa_oracle()), Some(30)))),
        ("4 orthogonality", Box::new(|| {
            timed(
                || {
                    let r = suites::orthogonality(full);
                    let o = orthogonality_oracle().and_then(|s| {
                        if r.passed + r.failed >= 200 { Ok(s) } else { Err(format!("only {} instances", r.passed)) }
                    });
                    (vec![r], o)
                },
                None,
            )
        })),
        ("5 adjacent", Box::new(|| timed(|| (vec![suites::adjacent(full)], adjacent_oracle()), None))),
        ("6 comparison", Box::new(|| timed(|| (vec![suites::comparison(full)], Ok("gl_3 nilpotent exhaustive, mixed gl_3 random".into())), None))),
        ("7 rho", Box::new(|| timed(|| (vec![suites::rho_suite(full)], rho_oracle()), None))),
        ("8 gl2", Box::new(|| timed(|| (vec![suites::gl2(full)], gl2_oracle()), None))),
        ("9 families", Box::new(|| {
            timed(
                || {
                    let r = suites::families(full);
                    // 120 trials with three random families each
                    (vec![r], Ok("360 families".into()))
                },
                None,
            )
        })),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let v = run();
        println!("{} criterion {name}: {}", if v.ok { "PASS" } else { "FAIL" }, v.detail);
        if !v.ok {
            failed.push(name);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
