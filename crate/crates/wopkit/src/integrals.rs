//! Desk-scale evaluator for GL_2(Q_p) and f = 1 on gl_2(Z_p).
//!
//! Integrals over G_X \ G are written as sums over double cosets
//! G_X \ G / K ("shells"), each with an exact volume. Every shell is
//! evaluated on an explicit matrix representative: the integrand test is an
//! integrality check and the weight comes from the Iwasawa engine. Values
//! are polynomials in l with surd coefficients; tails are coefficientwise
//! bounds on the omitted shells.
//!
//! Measures: vol(gl_2(Z_p)) = 1 for dX, dg = dX / |det|^2 on G so that
//! vol(K) = (1 - 1/p)(1 - 1/p^2); the split torus and the centre carry
//! dt = dT / |det| (self-dual for the trace form and an unramified
//! character), the unipotent radical has vol(N(Z_p)) = 1. With dk of total
//! mass vol(K), dg = gamma(B) dt dn dk for g = t n k.

use num_traits::{One, Signed, Zero};

use crate::exactnum::{is_integral_matrix, pow_p, valuation, Matrix, Rat};
use crate::gmfam::{cm, dmg_section};
use crate::orbits::{standard_representative, Levi, OrbitDatum};
use crate::paracomb::{enumerate_levis, Parabolic};
use crate::weights::{r_family, rho_all, WeightContext, WeightError};
use crate::SurdPoly;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IntegralError {
    #[error("the evaluator only handles gl_2")]
    NotGl2,
    #[error("unsupported class: {0}")]
    Unsupported(String),
    #[error("depth {depth} leaves a tail of {tail} above the tolerance {tol}")]
    DepthTooSmall { depth: usize, tail: f64, tol: f64 },
    #[error("depth must be at least 1")]
    BadDepth,
    #[error("A + Y is not regular")]
    NotRegular,
    #[error("weight is not linear along the shells: {0}")]
    NonLinearWeight(String),
    #[error("limit sequence did not settle: {0}")]
    NoConvergence(String),
    #[error(transparent)]
    Weight(#[from] WeightError),
}

type Result<T> = std::result::Result<T, IntegralError>;

/// Measure constants for GL_2(Q_p).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormalizationContext {
    pub p: u64,
}

impl NormalizationContext {
    pub fn new(p: u64) -> Self {
        NormalizationContext { p }
    }

    fn inv_p(&self) -> Rat {
        Rat::new(1.into(), (self.p as i64).into())
    }

    /// vol(GL_2(Z_p)) = (1 - 1/p)(1 - 1/p^2).
    pub fn vol_k(&self) -> Rat {
        let x = self.inv_p();
        (Rat::one() - &x) * (Rat::one() - &x * &x)
    }

    /// vol(T(Z_p)) = (1 - 1/p)^2.
    pub fn vol_t(&self) -> Rat {
        let x = Rat::one() - self.inv_p();
        &x * &x
    }

    /// gamma(B): dg = gamma(B) dt dn dk.
    pub fn gamma_b(&self) -> Rat {
        Rat::one() / self.vol_t()
    }

    /// gamma(B) vol(K) = 1 + 1/p.
    pub fn unit(&self) -> Rat {
        self.gamma_b() * self.vol_k()
    }

    /// l = log p as a float.
    pub fn ell(&self) -> f64 {
        (self.p as f64).ln()
    }
}

/// How many shells to sum, and an optional bound on the tail at l = log p.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationSpec {
    pub depth: usize,
    pub tolerance: Option<f64>,
}

impl TruncationSpec {
    pub fn new(depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(IntegralError::BadDepth);
        }
        Ok(TruncationSpec { depth, tolerance: None })
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = Some(tol);
        self
    }
}

/// Which weight to integrate against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightSpec {
    Unweighted,
    /// v_{L,X}^Q.
    Levi(Levi, Parabolic),
}

impl WeightSpec {
    /// L = torus, Q = G.
    pub fn torus() -> Self {
        WeightSpec::Levi(Levi::torus(2), Parabolic::full(2))
    }
}

/// A truncated value with a coefficientwise tail bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gl2Value {
    pub value: SurdPoly,
    pub tail: SurdPoly,
    pub depth: usize,
    pub shells: usize,
}

impl Gl2Value {
    fn exact(value: SurdPoly) -> Self {
        Gl2Value { value, tail: SurdPoly::zero(), depth: 0, shells: 1 }
    }

    /// |self - other| <= tail + other.tail + slack, coefficientwise.
    pub fn agrees_with(&self, other: &SurdPoly, slack: &SurdPoly) -> bool {
        let diff = (&self.value - other).abs_coeffwise();
        diff.dominated_by(&(&self.tail + slack))
    }

    pub fn to_f64(&self, ctx: &NormalizationContext) -> f64 {
        self.value.to_f64(ctx.ell())
    }

    pub fn tail_f64(&self, ctx: &NormalizationContext) -> f64 {
        self.tail.to_f64(ctx.ell())
    }
}

/// Classes of gl_2(Q) handled here.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gl2Class {
    /// diag(a, b), a != b.
    Split(Rat, Rat),
    /// a I.
    Central(Rat),
    /// a I + regular nilpotent.
    Unipotent(Rat),
}

impl Gl2Class {
    pub fn of(d: &OrbitDatum) -> Result<Self> {
        if d.n() != 2 {
            return Err(IntegralError::NotGl2);
        }
        let roots: Vec<Option<Rat>> = d.polys().iter().map(|q| q.linear_root()).collect();
        if roots.iter().any(Option::is_none) {
            return Err(IntegralError::Unsupported("elliptic class".into()));
        }
        let roots: Vec<Rat> = roots.into_iter().flatten().collect();
        Ok(match roots.len() {
            2 => Gl2Class::Split(roots[0].clone(), roots[1].clone()),
            _ => {
                let part = d.partition(&d.polys()[0]).unwrap();
                if part.parts().len() == 2 {
                    Gl2Class::Central(roots[0].clone())
                } else {
                    Gl2Class::Unipotent(roots[0].clone())
                }
            }
        })
    }

    /// |D^g(X)|^{1/2}.
    pub fn discriminant_factor(&self, p: u64) -> Rat {
        match self {
            Gl2Class::Split(a, b) => pow_p(p, -valuation(&(a - b), p).unwrap()),
            _ => Rat::one(),
        }
    }
}

/// One double coset: representative, volume (already times |D|^{1/2}).
#[derive(Clone, Debug)]
pub struct Shell {
    pub index: i64,
    pub g: Matrix<Rat>,
    pub volume: Rat,
}

fn split_shell(p: u64, d: i64) -> Matrix<Rat> {
    let mut g = Matrix::identity(2);
    if d > 0 {
        g[(0, 1)] = pow_p(p, -d);
    }
    g
}

/// Shell representative m for the unipotent classes: diag(p^-m, 1) when
/// the nilpotent entry is above the diagonal, diag(1, p^-m) otherwise.
fn unipotent_shell(p: u64, m: i64, upper: bool) -> Matrix<Rat> {
    if upper {
        Matrix::diag(&[pow_p(p, -m), Rat::one()])
    } else {
        Matrix::diag(&[Rat::one(), pow_p(p, -m)])
    }
}

/// The shells of G_X \ G / K for a split or unipotent class, with their
/// volumes, in the range the truncation asks for.
pub fn shells(class: &Gl2Class, x: &Matrix<Rat>, trunc: &TruncationSpec, ctx: &NormalizationContext) -> Vec<Shell> {
    let p = ctx.p;
    let u = ctx.unit();
    let dfac = class.discriminant_factor(p);
    let depth = trunc.depth as i64;
    match class {
        Gl2Class::Split(..) => (0..=depth)
            .map(|d| {
                // {x : val x = -d} has volume (p - 1) p^(d-1)
                let mu = if d == 0 { Rat::one() } else { pow_p(p, d) - pow_p(p, d - 1) };
                Shell { index: d, g: split_shell(p, d), volume: &u * &mu * &dfac }
            })
            .collect(),
        Gl2Class::Unipotent(_) => {
            let upper = !x[(0, 1)].is_zero();
            let s = Rat::one() - ctx.inv_p();
            (-depth..=depth)
                .map(|m| Shell { index: m, g: unipotent_shell(p, m, upper), volume: &u * &s * pow_p(p, -m) })
                .collect()
        }
        Gl2Class::Central(_) => vec![Shell { index: 0, g: Matrix::identity(2), volume: Rat::one() }],
    }
}

/// Detailed evaluation: the shell contributions and the tail.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub value: Gl2Value,
    pub contributions: Vec<(i64, SurdPoly)>,
}

/// J_L^Q(o, 1_{gl_2(Z_p)}), or the unweighted orbital integral, of the
/// class `d` (an induced class when weighted).
pub fn orbital_integral_gl2(
    d: &OrbitDatum,
    weight: &WeightSpec,
    trunc: &TruncationSpec,
    ctx: &NormalizationContext,
) -> Result<Gl2Value> {
    let x = standard_representative(d);
    Ok(evaluate(d, &x, weight, trunc, ctx, None)?.value)
}

/// As [`orbital_integral_gl2`], with `x` (an element of the class) used in
/// the integrand while the weight stays the one of the standard
/// representative, and with each shell representative g replaced by g k
/// when `right` is given.
pub fn evaluate(
    d: &OrbitDatum,
    x: &Matrix<Rat>,
    weight: &WeightSpec,
    trunc: &TruncationSpec,
    ctx: &NormalizationContext,
    right: Option<&Matrix<Rat>>,
) -> Result<Evaluation> {
    let class = Gl2Class::of(d)?;
    let p = ctx.p;
    if let Gl2Class::Central(a) = &class {
        if *weight != WeightSpec::Unweighted {
            return Err(IntegralError::Unsupported("central class is not induced from the torus".into()));
        }
        let v = if crate::exactnum::is_p_integral(a, p) { Rat::one() } else { Rat::zero() };
        let v = SurdPoly::from_rat(v);
        return Ok(Evaluation { value: Gl2Value::exact(v.clone()), contributions: vec![(0, v)] });
    }
    let wctx = match weight {
        WeightSpec::Unweighted => None,
        WeightSpec::Levi(..) => Some(WeightContext::new(d, None)?),
    };
    let shells = shells(&class, x, trunc, ctx);
    let mut total = SurdPoly::zero();
    let mut contributions = Vec::new();
    let mut weights = Vec::new();
    for sh in &shells {
        let g = match right {
            Some(k) => &sh.g * k,
            None => sh.g.clone(),
        };
        let y = &(&g.inverse().unwrap() * x) * &g;
        let w = match (weight, &wctx) {
            (WeightSpec::Levi(l, q), Some(c)) => c.weight(l, q, &g)?,
            _ => SurdPoly::one(),
        };
        weights.push((sh.index, w.clone()));
        if is_integral_matrix(&y, p) {
            let c = w.scale(&sh.volume);
            total = &total + &c;
            contributions.push((sh.index, c));
        }
    }
    let slope = linear_slope(&weights, weight)?;
    let tail = tail_bound(&class, x, trunc, ctx, &slope);
    let value = Gl2Value { value: total, tail, depth: trunc.depth, shells: shells.len() };
    if let Some(tol) = trunc.tolerance {
        let t = value.tail_f64(ctx);
        if t > tol {
            return Err(IntegralError::DepthTooSmall { depth: trunc.depth, tail: t, tol });
        }
    }
    Ok(Evaluation { value, contributions })
}

/// The weights are affine in the shell index for these classes; returns a
/// coefficientwise bound C with |v(shell m)| <= C (|m| + 1), after checking
/// exact linearity on every computed shell.
fn linear_slope(weights: &[(i64, SurdPoly)], spec: &WeightSpec) -> Result<SurdPoly> {
    if *spec == WeightSpec::Unweighted || weights.len() < 2 {
        return Ok(SurdPoly::one());
    }
    let (i0, w0) = &weights[0];
    let (i1, w1) = &weights[1];
    let step = (w1 - w0).scale(&Rat::new(1.into(), (i1 - i0).into()));
    for (i, w) in weights {
        let pred = w0 + &step.scale(&Rat::from_integer((i - i0).into()));
        if &pred != w {
            return Err(IntegralError::NonLinearWeight(format!("shell {i}: {w} vs {pred}")));
        }
    }
    let at0 = w0 + &step.scale(&Rat::from_integer((-i0).into()));
    Ok(&step.abs_coeffwise() + &at0.abs_coeffwise())
}

/// Bound on the shells beyond the truncation.
fn tail_bound(
    class: &Gl2Class,
    x: &Matrix<Rat>,
    trunc: &TruncationSpec,
    ctx: &NormalizationContext,
    slope: &SurdPoly,
) -> SurdPoly {
    let p = ctx.p;
    let depth = trunc.depth as i64;
    let integral_diag = (0..2).all(|i| crate::exactnum::is_p_integral(&x[(i, i)], p));
    if !integral_diag {
        // the diagonal of g^-1 X g is the diagonal of X on every shell
        return SurdPoly::zero();
    }
    match class {
        Gl2Class::Split(a, b) => {
            // shell d survives only if d <= val(a - b)
            let v = valuation(&(a - b), p).unwrap();
            if v <= depth {
                return SurdPoly::zero();
            }
            let mut t = Rat::zero();
            for d in depth + 1..=v {
                t += (pow_p(p, d) - pow_p(p, d - 1)) * Rat::from_integer((d + 1).into());
            }
            slope.scale(&(t * ctx.unit() * class.discriminant_factor(p)))
        }
        Gl2Class::Unipotent(_) => {
            let upper = !x[(0, 1)].is_zero();
            let e = if upper { &x[(0, 1)] } else { &x[(1, 0)] };
            // shells m < -val(e) fail the integrality test
            if -valuation(e, p).unwrap() < -depth {
                return SurdPoly::zero();
            }
            // sum_{m > D} (1 - 1/p) p^-m (m + 1), and the lower side would
            // need D < val(e): report it as unbounded-by-this-method
            let xr = ctx.inv_p();
            let n = depth + 1;
            let pw = pow_p(p, -n);
            // sum_{m >= n} (m + 1) x^m (1 - x) = x^n (n + 1 - n x) / (1 - x)
            let s = &pw * (Rat::from_integer((n + 1).into()) - Rat::from_integer(n.into()) * &xr)
                / (Rat::one() - &xr);
            slope.scale(&(s * ctx.unit()))
        }
        Gl2Class::Central(_) => SurdPoly::zero(),
    }
}

/// Rejects truncations whose lower unipotent shells do not cover the support.
fn check_lower_support(x: &Matrix<Rat>, trunc: &TruncationSpec, p: u64) -> Result<()> {
    let e = if !x[(0, 1)].is_zero() { &x[(0, 1)] } else { &x[(1, 0)] };
    if let Some(v) = valuation(e, p) {
        if v > trunc.depth as i64 {
            return Err(IntegralError::DepthTooSmall { depth: trunc.depth, tail: f64::INFINITY, tol: 0.0 });
        }
    }
    Ok(())
}

// ------------------------------------------------------------------ data

fn split_datum(p: u64, a: &Rat, b: &Rat) -> OrbitDatum {
    use crate::exactnum::Polynomial;
    use crate::orbits::Partition;
    let one = Partition::new(vec![1]).unwrap();
    OrbitDatum::new(p, vec![(Polynomial::linear_root(a.clone()), one.clone()), (Polynomial::linear_root(b.clone()), one)])
        .unwrap()
}

fn induced_datum(p: u64, y: &(Rat, Rat)) -> OrbitDatum {
    if y.0 == y.1 {
        OrbitDatum::linear(p, y.0.clone(), crate::orbits::Partition::new(vec![2]).unwrap())
    } else {
        split_datum(p, &y.0, &y.1)
    }
}

// ------------------------------------------------------- the limit formula

/// The right side of the limit formula along A_k = diag(p^k, 0).
#[derive(Clone, Debug)]
pub struct LimitReport {
    pub ks: Vec<i64>,
    pub sequence: Vec<SurdPoly>,
    /// Geometric extrapolation (p R(k+1) - R(k)) / (p - 1) from the last two.
    pub extrapolated: SurdPoly,
    /// Consecutive differences shrink by exactly 1/p (or vanish).
    pub geometric: bool,
    pub direct: Gl2Value,
    pub agrees: bool,
}

/// J_T^G(Y) directly against lim_A sum_L r_T^L(A, Y) J_L^G(A + Y), M = torus,
/// Y = diag(y0, y1).
pub fn arthur_limit_check(y: &(Rat, Rat), trunc: &TruncationSpec, ctx: &NormalizationContext) -> Result<LimitReport> {
    let p = ctx.p;
    let t = Levi::torus(2);
    let ym = Matrix::diag(&[y.0.clone(), y.1.clone()]);
    let rhos = rho_all(&t, &ym, p, 8)?;
    let direct = orbital_integral_gl2(&induced_datum(p, y), &WeightSpec::torus(), trunc, ctx)?;
    let depth = trunc.depth as i64;
    let base = if y.0 == y.1 { 0 } else { valuation(&(&y.0 - &y.1), p).unwrap().max(0) + 1 };
    let k0 = (depth - 3).max(base).max(1);
    let ks: Vec<i64> = (k0..k0 + 4).collect();
    if ks[3] > depth {
        return Err(IntegralError::NoConvergence(format!("depth {depth} below the needed {}", ks[3])));
    }
    let mut seq = Vec::new();
    for &k in &ks {
        let a = vec![pow_p(p, k), Rat::zero()];
        let ay = (&y.0 + &a[0], y.1.clone());
        if ay.0 == ay.1 {
            return Err(IntegralError::NotRegular);
        }
        let dat = split_datum(p, &ay.0, &ay.1);
        let jt = orbital_integral_gl2(&dat, &WeightSpec::torus(), trunc, ctx)?;
        let jg = orbital_integral_gl2(&dat, &WeightSpec::Unweighted, trunc, ctx)?;
        let r = cm(&r_family(&t, &rhos, &a, p)?).map_err(WeightError::from)?;
        seq.push(&jt.value + &(&r * &jg.value));
    }
    let pr = Rat::from_integer((p as i64).into());
    let diffs: Vec<SurdPoly> = seq.windows(2).map(|w| &w[1] - &w[0]).collect();
    let geometric = diffs.windows(2).all(|w| w[0] == w[1].scale(&pr));
    let n = seq.len();
    let extrapolated = (&seq[n - 1].scale(&pr) - &seq[n - 2]).scale(&(Rat::one() / (&pr - Rat::one())));
    let slack = if geometric { SurdPoly::zero() } else { diffs.last().unwrap().abs_coeffwise() };
    let agrees = direct.agrees_with(&extrapolated, &slack);
    Ok(LimitReport { ks, sequence: seq, extrapolated, geometric, direct, agrees })
}

// ------------------------------------------------------------ homogeneity

/// J_T^G(0)_t against |t|^-1 J_T^G(0)_1 + kappa |t|^-1 log|t| J_G^G(Ind 0).
#[derive(Clone, Debug)]
pub struct HomogeneityReport {
    pub t: Rat,
    pub lhs: Gl2Value,
    pub j1: Gl2Value,
    pub jg: Gl2Value,
    /// (v(diag(t,1) g) - v(g)) / log|t|; the weights are normalized by the
    /// coroot length, so this is -sqrt(2) rather than 1.
    pub kappa: SurdPoly,
    pub rhs: SurdPoly,
    pub agrees: bool,
}

pub fn homogeneity_check(t: &Rat, trunc: &TruncationSpec, ctx: &NormalizationContext) -> Result<HomogeneityReport> {
    let p = ctx.p;
    if t.is_zero() {
        return Err(IntegralError::Unsupported("t = 0".into()));
    }
    let d = OrbitDatum::nilpotent(p, crate::orbits::Partition::new(vec![2]).unwrap());
    let x1 = standard_representative(&d);
    let mut xt = x1.clone();
    xt[(0, 1)] = &xt[(0, 1)] * t;
    check_lower_support(&xt, trunc, p)?;
    let w = WeightSpec::torus();
    let lhs = evaluate(&d, &xt, &w, trunc, ctx, None)?.value;
    let j1 = evaluate(&d, &x1, &w, trunc, ctx, None)?.value;
    let jg = evaluate(&d, &x1, &WeightSpec::Unweighted, trunc, ctx, None)?.value;
    let tau = valuation(t, p).unwrap();
    let abs_t_inv = pow_p(p, tau);
    let wc = WeightContext::new(&d, None)?;
    let (l, q) = (Levi::torus(2), Parabolic::full(2));
    let dt = Matrix::diag(&[t.clone(), Rat::one()]);
    let kappa = if tau == 0 {
        SurdPoly::zero()
    } else {
        let shift = &wc.weight(&l, &q, &dt)? - &wc.weight(&l, &q, &Matrix::identity(2))?;
        // log|t| = -tau l
        shift.l_coeff(1).scale(&Rat::from_integer((-tau).into()).recip())
    };
    let log_t = SurdPoly::term(Rat::from_integer((-tau).into()), 1, 1);
    let rhs = &j1.value.scale(&abs_t_inv) + &(&(&kappa * &log_t) * &jg.value).scale(&abs_t_inv);
    let slack = &j1.tail.scale(&abs_t_inv) + &(&(&kappa * &log_t).abs_coeffwise() * &jg.tail).scale(&abs_t_inv);
    let agrees = lhs.agrees_with(&rhs, &slack);
    Ok(HomogeneityReport { t: t.clone(), lhs, j1, jg, kappa, rhs, agrees })
}

// --------------------------------------------------------------- descent

/// J_G^G(Ind_T^G Z) against sum_{M1} d_T^G(G, M1) J_T^{Q_{M1}}(Z).
#[derive(Clone, Debug)]
pub struct DescentReport {
    pub lhs: Gl2Value,
    pub terms: Vec<(Levi, SurdPoly, Gl2Value)>,
    pub rhs: SurdPoly,
    pub agrees: bool,
}

pub fn descent_check(z: &(Rat, Rat), trunc: &TruncationSpec, ctx: &NormalizationContext) -> Result<DescentReport> {
    let p = ctx.p;
    let dat = induced_datum(p, z);
    let lhs = orbital_integral_gl2(&dat, &WeightSpec::Unweighted, trunc, ctx)?;
    let t = Levi::torus(2);
    let g = Levi::full(2);
    let mut terms = Vec::new();
    let mut rhs = SurdPoly::zero();
    let mut slack = SurdPoly::zero();
    for m1 in enumerate_levis(&t, None) {
        let dd = dmg_section(&t, &g, &m1);
        if dd.d.is_zero() {
            continue;
        }
        let (_, q) = dd.s.clone().expect("section exists when d != 0");
        let j = orbital_integral_gl2(&dat, &WeightSpec::Levi(t.clone(), q), trunc, ctx)?;
        rhs = &rhs + &(&dd.d * &j.value);
        slack = &slack + &(&dd.d.abs_coeffwise() * &j.tail);
        terms.push((m1, dd.d, j));
    }
    let agrees = lhs.agrees_with(&rhs, &slack);
    Ok(DescentReport { lhs, terms, rhs, agrees })
}

// ------------------------------------------------- centralizer measure

/// The measure on G_X for X = a + regular nilpotent is defined by a limit
/// over regular A; this compares the Iwasawa evaluation with dz dn on
/// G_X = Z N against that limit, evaluated at A = diag(p^k, 0) for the
/// given k (the split values are exact once k <= depth).
pub fn centralizer_measure_check(
    a: &Rat,
    ks: &[i64],
    trunc: &TruncationSpec,
    ctx: &NormalizationContext,
) -> Result<(Gl2Value, Vec<Gl2Value>)> {
    let p = ctx.p;
    let d = induced_datum(p, &(a.clone(), a.clone()));
    let nil = orbital_integral_gl2(&d, &WeightSpec::Unweighted, trunc, ctx)?;
    let mut seq = Vec::new();
    for &k in ks {
        let dat = split_datum(p, &(a + pow_p(p, k)), a);
        seq.push(orbital_integral_gl2(&dat, &WeightSpec::Unweighted, trunc, ctx)?);
    }
    Ok((nil, seq))
}

/// Decimal rendering with l = log p.
pub fn decimal(v: &SurdPoly, ctx: &NormalizationContext) -> f64 {
    v.to_f64(ctx.ell())
}

/// True when the value has no negative rational coefficient in degree 0.
pub fn is_nonnegative_constant(v: &SurdPoly) -> bool {
    v.as_rat().is_some_and(|r| !r.is_negative())
}
