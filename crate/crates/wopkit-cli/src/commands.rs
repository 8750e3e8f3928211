use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use wopkit::exactnum::{parse_rat, serde_rat, Polynomial};
use wopkit::integrals::{self, Gl2Value, NormalizationContext, TruncationSpec, WeightSpec};
use wopkit::orbits::{induce_orbit, orbit_codim, standard_representative, Levi, OrbitDatum, Partition};
use wopkit::paracomb::{brute, epsilon_set, richardson_levis, richardson_elements, Parabolic};
use wopkit::suites::{self, Level};
use wopkit::weights::{self, all_roots, iwasawa, n_square, weight_compare, WeightContext, DEFAULT_DEPTH};
use wopkit::{MatQ, Matrix, Rat};

use crate::render::{ell_vec, mat, rat, rats, surd};
use crate::{Check, CliError, EvalArgs, Outcome, SelftestArgs};

type Res = Result<Outcome, CliError>;

#[derive(Deserialize)]
#[serde(transparent)]
struct Mat(#[serde(with = "serde_rat::mat")] Vec<Vec<Rat>>);

impl Mat {
    fn matrix(&self) -> Result<MatQ, CliError> {
        let n = self.0.len();
        if self.0.iter().any(|r| r.len() != n) {
            return Err(CliError::new("schema", "matrices must be square"));
        }
        Ok(Matrix::from_rows(self.0.clone()))
    }
}

#[derive(Deserialize)]
#[serde(transparent)]
struct Vector(#[serde(with = "serde_rat::vec")] Vec<Rat>);

fn parse<T: DeserializeOwned>(v: &Value) -> Result<T, CliError> {
    serde_json::from_value(v.clone()).map_err(|e| CliError::new("schema", e))
}

fn err(kind: &'static str) -> impl Fn(&dyn std::fmt::Display) -> CliError {
    move |e| CliError::new(kind, e)
}

fn context(orbit: &OrbitDatum, m_r: Option<&Levi>) -> Result<WeightContext, CliError> {
    WeightContext::new(orbit, m_r).map_err(|e| err("weights")(&e))
}

fn depth_default(fallback: usize) -> Result<usize, CliError> {
    match std::env::var("WOPKIT_DEPTH") {
        Ok(s) => s.trim().parse().map_err(|_| CliError::new("schema", format!("WOPKIT_DEPTH={s:?} is not a depth"))),
        Err(_) => Ok(fallback),
    }
}

// ------------------------------------------------------------------ orbits

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InduceReq {
    levi: Option<Levi>,
    sizes: Option<Vec<usize>>,
    orbits: Option<Vec<OrbitDatum>>,
    p: Option<u64>,
}

pub fn induce(v: &Value) -> Res {
    let r: InduceReq = parse(v)?;
    let levi = match (r.levi, r.sizes) {
        (Some(l), None) => l,
        (None, Some(s)) if !s.is_empty() && s.iter().all(|&k| k > 0) => Levi::standard(&s),
        _ => return Err(CliError::new("schema", "give exactly one of \"levi\" or \"sizes\" (positive)")),
    };
    let orbits = match r.orbits {
        Some(o) => o,
        None => levi.blocks().iter().map(|b| OrbitDatum::zero(r.p.unwrap_or(2), b.len())).collect(),
    };
    let ind = induce_orbit(&levi, &orbits).map_err(|e| err("orbits")(&e))?;
    let partitions: Vec<Value> = ind.blocks().map(|(_, l)| json!(l)).collect();
    Ok(json!({
        "levi": levi,
        "sizes": levi.sizes(),
        "orbit": ind,
        "partitions": partitions,
        "codim": orbit_codim(&orbits),
    })
    .into())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OrbitReq {
    orbit: OrbitDatum,
}

pub fn standard_rep(v: &Value) -> Res {
    let r: OrbitReq = parse(v)?;
    Ok(json!({ "orbit": r.orbit, "matrix": mat(&standard_representative(&r.orbit)) }).into())
}

// --------------------------------------------------------------- paracomb

pub fn richardson(v: &Value) -> Res {
    let r: OrbitReq = parse(v)?;
    let d = &r.orbit;
    let elements: Vec<Value> = richardson_elements(d)
        .iter()
        .map(|e| json!({ "flag": e.parabolic, "sizes": e.parabolic.sizes(), "word": e.word, "tables": e.tables }))
        .collect();
    let mut eps = Vec::new();
    for i in 0..d.polys().len() {
        eps.push(json!(epsilon_set(d, i).map_err(|e| err("paracomb")(&e))?));
    }
    Ok(json!({
        "count": elements.len(),
        "parabolics": elements,
        "levis": richardson_levis(d),
        "epsilon": eps,
    })
    .into())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LsReq {
    orbit: OrbitDatum,
    q: Parabolic,
    m_r: Option<Levi>,
}

pub fn ls_map(v: &Value, with_image: bool) -> Res {
    let r: LsReq = parse(v)?;
    let ctx = context(&r.orbit, r.m_r.as_ref())?;
    let rc = ctx.richardson();
    let w = rc.w(&r.q).map_err(|e| err("paracomb")(&e))?;
    let mut out = json!({ "q": r.q, "m_r": ctx.m_r(), "w": w });
    if with_image {
        let ls = rc.ls_map(&r.q).map_err(|e| err("paracomb")(&e))?;
        out["in_ls_set"] = json!(brute::is_ls(&r.orbit, &ls));
        out["sizes"] = json!(ls.sizes());
        out["ls"] = json!(ls);
    }
    Ok(out.into())
}

// ---------------------------------------------------------------- weights

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HpReq {
    g: Mat,
    parabolic: Parabolic,
    p: u64,
}

pub fn hp(v: &Value) -> Res {
    let r: HpReq = parse(v)?;
    let g = r.g.matrix()?;
    let iw = iwasawa(&g, &r.parabolic, r.p).map_err(|e| err("weights")(&e))?;
    let h = weights::iwasawa_hp(&g, &r.parabolic, r.p).map_err(|e| err("weights")(&e))?;
    Ok(json!({ "hp": ell_vec(&h, r.p), "b": mat(&iw.b), "k": mat(&iw.k) }).into())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RpReq {
    orbit: OrbitDatum,
    parabolic: Parabolic,
    g: Mat,
    m_r: Option<Levi>,
}

pub fn rp(v: &Value) -> Res {
    let r: RpReq = parse(v)?;
    let ctx = context(&r.orbit, r.m_r.as_ref())?;
    let g = r.g.matrix()?;
    let rp = ctx.rp(&r.parabolic, &g).map_err(|e| err("weights")(&e))?;
    let w = ctx.richardson().w(&r.parabolic).map_err(|e| err("paracomb")(&e))?;
    Ok(json!({ "rp": ell_vec(&rp, ctx.p()), "w": w }).into())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightReq {
    orbit: OrbitDatum,
    g: Mat,
    levi: Option<Levi>,
    q: Option<Parabolic>,
    m_r: Option<Levi>,
}

pub fn weight(v: &Value) -> Res {
    let r: WeightReq = parse(v)?;
    let ctx = context(&r.orbit, r.m_r.as_ref())?;
    let g = r.g.matrix()?;
    let p = ctx.p();
    let l = r.levi.unwrap_or_else(|| ctx.m_r().clone());
    let q = r.q.unwrap_or_else(|| Parabolic::full(l.n()));
    let w = ctx.weight(&l, &q, &g).map_err(|e| err("weights")(&e))?;
    let fam = ctx.family(&g).map_err(|e| err("weights")(&e))?;
    let members: Vec<Value> = fam
        .members()
        .iter()
        .map(|(par, terms)| json!({ "parabolic": par, "exp": ell_vec(&terms[0].exp, p) }))
        .collect();
    Ok(json!({
        "levi": l,
        "q": q,
        "weight": surd(&w, p),
        "weight_poly_in_l": w.coeff_strings(),
        "family": { "m": ctx.m_r(), "members": members },
    })
    .into())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NsqReq {
    a: Vector,
    y: Mat,
    v: Mat,
    pbox: Parabolic,
}

pub fn nsquare(v: &Value) -> Res {
    let r: NsqReq = parse(v)?;
    let n = n_square(&r.a.0, &r.y.matrix()?, &r.v.matrix()?, &r.pbox).map_err(|e| err("weights")(&e))?;
    Ok(json!({ "n_square": mat(&n) }).into())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RhoReq {
    levi: Levi,
    p: u64,
    y: Option<Mat>,
    /// 1-based block indices (a, b) of the root e_a - e_b.
    alpha: Option<(usize, usize)>,
    depth: Option<usize>,
}

pub fn rho(v: &Value) -> Res {
    let r: RhoReq = parse(v)?;
    let n = r.levi.n();
    let y = match &r.y {
        Some(y) => y.matrix()?,
        None => Matrix::zeros(n, n),
    };
    let depth = match r.depth {
        Some(d) => d,
        None => depth_default(DEFAULT_DEPTH)?,
    };
    let roots = match r.alpha {
        Some((a, b)) => {
            let k = r.levi.blocks().len();
            if a == 0 || b == 0 || a > k || b > k || a == b {
                return Err(CliError::new("schema", "alpha must be two distinct 1-based block indices"));
            }
            vec![(a - 1, b - 1)]
        }
        None => all_roots(&r.levi),
    };
    let mut out = Vec::new();
    for alpha in roots {
        let res = weights::rho(alpha, &r.levi, &y, r.p, depth).map_err(|e| err("weights")(&e))?;
        out.push(json!({
            "alpha": [alpha.0 + 1, alpha.1 + 1],
            "rho": rat(&res.rho),
            "stable_from": res.stable_from,
            "witness": rats(&res.witness),
        }));
    }
    Ok(json!({ "levi": r.levi, "roots": out }).into())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CompareReq {
    orbit: OrbitDatum,
    pbox: Parabolic,
    v: Mat,
    k: Option<Mat>,
    depth: Option<usize>,
}

pub fn compare(v: &Value) -> Res {
    let r: CompareReq = parse(v)?;
    let ctx = context(&r.orbit, None)?;
    let k = r.k.as_ref().map(Mat::matrix).transpose()?;
    let depth = match r.depth {
        Some(d) => d,
        None => depth_default(DEFAULT_DEPTH)?,
    };
    let rep = weight_compare(&ctx, &r.pbox, &r.v.matrix()?, k.as_ref(), depth).map_err(|e| err("weights")(&e))?;
    let p = ctx.p();
    let sides: Vec<Value> = rep
        .sides
        .iter()
        .map(|(par, (a, b))| json!({ "parabolic": par, "w_exponent": ell_vec(a, p), "r_difference": ell_vec(b, p) }))
        .collect();
    let ok = rep.holds();
    Ok(Outcome { value: json!({ "holds": ok, "g": mat(&rep.g), "sides": sides }), ok })
}

// -------------------------------------------------------------- integrals

/// The class and, when it is induced from the torus, the pair (a, b).
fn gl2_orbit(spec: &str, p: u64) -> Result<(OrbitDatum, Option<(Rat, Rat)>), CliError> {
    let num = |s: &str| parse_rat(s.trim()).map_err(|e| CliError::new("schema", format!("{s:?}: {e:?}")));
    let one = || Partition::new(vec![1]).unwrap();
    if let Some(rest) = spec.strip_prefix("diag:") {
        let (a, b) = rest.split_once(',').ok_or_else(|| CliError::new("schema", "diag:a,b expected"))?;
        let (a, b) = (num(a)?, num(b)?);
        let d = if a == b {
            OrbitDatum::linear(p, a.clone(), Partition::new(vec![1, 1]).unwrap())
        } else {
            OrbitDatum::new(p, vec![(Polynomial::linear_root(a.clone()), one()), (Polynomial::linear_root(b.clone()), one())])
                .map_err(|e| err("orbits")(&e))?
        };
        return Ok((d, Some((a, b))));
    }
    if let Some(rest) = spec.strip_prefix("nil:") {
        let a = num(rest)?;
        return Ok((OrbitDatum::linear(p, a.clone(), Partition::new(vec![2]).unwrap()), Some((a.clone(), a))));
    }
    let d: OrbitDatum = serde_json::from_str(spec).map_err(|e| CliError::new("schema", e))?;
    if d.p() != p {
        return Err(CliError::new("schema", "orbit prime differs from --p"));
    }
    Ok((d, None))
}

fn gl2_value(v: &Gl2Value, p: u64) -> Value {
    json!({ "value": surd(&v.value, p), "tail": surd(&v.tail, p), "depth": v.depth, "shells": v.shells })
}

pub fn eval_gl2(a: &EvalArgs) -> Res {
    let p = a.p;
    if p < 2 || !(2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d)) {
        return Err(CliError::new("schema", "--p must be prime"));
    }
    let depth = match a.depth {
        Some(d) => d,
        None => depth_default(12)?,
    };
    let ie = err("integrals");
    let mut tr = TruncationSpec::new(depth).map_err(|e| ie(&e))?;
    if let Some(t) = a.tolerance {
        tr = tr.with_tolerance(t);
    }
    let ctx = NormalizationContext::new(p);
    let (d, pair) = gl2_orbit(&a.orbit, p)?;
    let need_pair = || pair.clone().ok_or_else(|| CliError::new("schema", "this check needs --orbit diag:a,b or nil:a"));
    let head = json!({ "p": p, "depth": depth, "ell": ctx.ell() });
    let (body, ok) = match a.check {
        None => {
            let w = if a.weighted { WeightSpec::torus() } else { WeightSpec::Unweighted };
            let v = integrals::orbital_integral_gl2(&d, &w, &tr, &ctx).map_err(|e| ie(&e))?;
            (json!({ "orbit": d, "weighted": a.weighted, "result": gl2_value(&v, p) }), true)
        }
        Some(Check::Limit) => {
            let y = need_pair()?;
            let r = integrals::arthur_limit_check(&y, &tr, &ctx).map_err(|e| ie(&e))?;
            let seq: Vec<Value> = r.sequence.iter().map(|s| surd(s, p)).collect();
            let v = json!({
                "check": "limit",
                "y": [rat(&y.0), rat(&y.1)],
                "ks": r.ks,
                "sequence": seq,
                "extrapolated": surd(&r.extrapolated, p),
                "geometric": r.geometric,
                "direct": gl2_value(&r.direct, p),
                "agrees": r.agrees,
            });
            (v, r.agrees)
        }
        Some(Check::Homogeneity) => {
            let t = parse_rat(a.t.trim()).map_err(|e| CliError::new("schema", format!("--t: {e:?}")))?;
            let h = integrals::homogeneity_check(&t, &tr, &ctx).map_err(|e| ie(&e))?;
            let v = json!({
                "check": "homogeneity",
                "t": rat(&h.t),
                "lhs": gl2_value(&h.lhs, p),
                "j1": gl2_value(&h.j1, p),
                "jg": gl2_value(&h.jg, p),
                "kappa": surd(&h.kappa, p),
                "rhs": surd(&h.rhs, p),
                "agrees": h.agrees,
            });
            (v, h.agrees)
        }
        Some(Check::Descent) => {
            let z = need_pair()?;
            let r = integrals::descent_check(&z, &tr, &ctx).map_err(|e| ie(&e))?;
            let terms: Vec<Value> = r
                .terms
                .iter()
                .map(|(l, c, v)| json!({ "levi": l, "coefficient": surd(c, p), "value": gl2_value(v, p) }))
                .collect();
            let v = json!({
                "check": "descent",
                "z": [rat(&z.0), rat(&z.1)],
                "lhs": gl2_value(&r.lhs, p),
                "terms": terms,
                "rhs": surd(&r.rhs, p),
                "agrees": r.agrees,
            });
            (v, r.agrees)
        }
    };
    let mut out = head;
    for (k, x) in body.as_object().unwrap() {
        out[k] = x.clone();
    }
    Ok(Outcome { value: out, ok })
}

// ---------------------------------------------------------------- selftest

pub fn selftest(a: &SelftestArgs) -> Res {
    let level: Level = a.level.parse().map_err(|e: String| CliError::new("schema", e))?;
    let reports = match &a.suite {
        Some(name) => vec![suites::run(name, level).ok_or_else(|| {
            CliError::new("schema", format!("unknown suite {name:?}; known: {}", suites::SUITE_NAMES.join(", ")))
        })?],
        None => suites::all(level),
    };
    let ok = reports.iter().all(|r| r.ok());
    let rows: Vec<Value> = reports
        .iter()
        .map(|r| {
            let mut v = json!({
                "suite": r.name,
                "status": if r.ok() { "pass" } else { "FAIL" },
                "passed": r.passed,
                "failed": r.failed,
            });
            if !r.failures.is_empty() {
                v["failures"] = json!(r.failures);
            }
            if a.timings {
                v["elapsed_ms"] = json!(r.elapsed_ms as u64);
            }
            v
        })
        .collect();
    let value = json!({
        "level": level,
        "suites": rows,
        "passed": reports.iter().map(|r| r.passed).sum::<usize>(),
        "failed": reports.iter().map(|r| r.failed).sum::<usize>(),
        "ok": ok,
    });
    Ok(Outcome { value, ok })
}
