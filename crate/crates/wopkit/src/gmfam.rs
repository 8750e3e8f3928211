//! Root data of type A on a_M, (G,M)-families given as exponential
//! polynomials, their limits c_M^Q and c'_Q, and the descent data
//! d_M^G and s.
//!
//! Vectors of a_M are stored as full coordinate vectors in Q^n, constant on
//! the blocks of M. The inner product is the Euclidean one on coordinates.
//! Exponents are measured in units of l = log q.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactnum::{Matrix, Rat, Surd, SurdPoly};
use crate::orbits::Levi;
use crate::paracomb::{enumerate_levis, enumerate_parabolics, ParaKind, Parabolic};

pub type AVector = Vec<Rat>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GmError {
    #[error("family is missing the parabolic {0:?}")]
    Missing(Vec<Vec<usize>>),
    #[error("adjacency condition fails between {0:?} and {1:?}")]
    NotAFamily(Vec<Vec<usize>>, Vec<Vec<usize>>),
    #[error("exponent is not in a_M")]
    BadExponent,
    #[error("limit depends on lambda: {0} vs {1}")]
    LambdaDependent(String, String),
    #[error("parabolic does not contain M")]
    NotContaining,
}

// ----------------------------------------------------------------- vectors

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sub(a: &[Rat], b: &[Rat]) -> AVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn axpy(c: &Rat, x: &[Rat], y: &mut [Rat]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += c * xi;
    }
}

/// Orthogonal projection onto a_L: averages over the blocks of L.
pub fn proj_levi(v: &[Rat], l: &Levi) -> AVector {
    let mut out = vec![Rat::zero(); v.len()];
    for b in l.blocks() {
        let avg = b.iter().map(|&i| v[i].clone()).sum::<Rat>() / Rat::from_integer(b.len().into());
        for &i in b {
            out[i] = avg.clone();
        }
    }
    out
}

/// Is v constant on every block of L?
pub fn in_a_levi(v: &[Rat], l: &Levi) -> bool {
    l.blocks().iter().all(|b| b.iter().all(|&i| v[i] == v[b[0]]))
}

/// The indicator vector of a coordinate set, divided by its size.
fn block_avg(n: usize, b: &[usize]) -> AVector {
    let mut v = vec![Rat::zero(); n];
    let c = Rat::new(One::one(), b.len().into());
    for &i in b {
        v[i] = c.clone();
    }
    v
}

/// Coroot of the root between coordinate blocks a and b of a Levi: the
/// projection of e_i - e_j to a_M.
pub fn coroot(n: usize, a: &[usize], b: &[usize]) -> AVector {
    sub(&block_avg(n, a), &block_avg(n, b))
}

/// <alpha, beta^vee> for alpha the root (a, b): value of beta^vee on a minus on b.
pub fn root_pairing(a: &[usize], b: &[usize], v: &[Rat]) -> Rat {
    &v[a[0]] - &v[b[0]]
}

/// Roots of (G, A_M) as ordered pairs of block indices.
pub fn roots(m: &Levi) -> Vec<(usize, usize)> {
    let k = m.blocks().len();
    (0..k).flat_map(|a| (0..k).filter(move |&b| b != a).map(move |b| (a, b))).collect()
}

/// Roots of P: pairs (earlier step, later step).
pub fn positive_roots(p: &Parabolic) -> Vec<(usize, usize)> {
    let k = p.blocks().len();
    (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).collect()
}

/// Gram determinant of a list of vectors (1 for the empty list).
pub fn gram_det(vs: &[AVector]) -> Rat {
    if vs.is_empty() {
        return Rat::one();
    }
    let g = Matrix::from_rows(vs.iter().map(|u| vs.iter().map(|v| dot(u, v)).collect()).collect());
    g.det()
}

/// Simple coroots of P relative to Q (consecutive steps of P inside one
/// step of Q), together with the step pairs.
fn simple_coroots(p: &Parabolic, q: &Parabolic) -> Vec<(usize, usize, AVector)> {
    let qs = q.steps();
    let b = p.blocks();
    (0..b.len().saturating_sub(1))
        .filter(|&k| qs[b[k][0]] == qs[b[k + 1][0]])
        .map(|k| (k, k + 1, coroot(p.n(), &b[k], &b[k + 1])))
        .collect()
}

/// theta_P^Q(lambda) = vol(a_M^Q / Z(Delta_P^Q coroots))^{-1} prod lambda(alpha^vee).
pub fn theta(p: &Parabolic, q: &Parabolic, lambda: &[Rat]) -> Surd {
    let cs = simple_coroots(p, q);
    let vecs: Vec<AVector> = cs.iter().map(|c| c.2.clone()).collect();
    let g = gram_det(&vecs);
    let prod: Rat = cs.iter().map(|c| dot(lambda, &c.2)).product();
    // prod / sqrt(g) = prod * sqrt(g) / g
    SurdPoly::sqrt(&g).scale(&(prod / g))
}

/// Convenience for the G case.
pub fn theta_eval(p: &Parabolic, lambda: &[Rat]) -> Surd {
    theta(p, &Parabolic::full(p.n()), lambda)
}

/// 1/theta_P^Q(lambda) as a surd, or None on a wall.
fn theta_inv(p: &Parabolic, q: &Parabolic, lambda: &[Rat]) -> Option<Surd> {
    let cs = simple_coroots(p, q);
    let vecs: Vec<AVector> = cs.iter().map(|c| c.2.clone()).collect();
    let prod: Rat = cs.iter().map(|c| dot(lambda, &c.2)).product();
    if prod.is_zero() {
        return None;
    }
    Some(SurdPoly::sqrt(&gram_det(&vecs)).scale(&(Rat::one() / prod)))
}

/// Coweights of Q relative to R: the basis of a_Q^R dual to the simple
/// roots of Q inside R.
pub fn coweights(q: &Parabolic, r: &Parabolic) -> Vec<AVector> {
    let cs = simple_coroots(q, r);
    let k = cs.len();
    if k == 0 {
        return Vec::new();
    }
    let b = q.blocks();
    // A[j][i] = alpha_j(alpha_i^vee)
    let a = Matrix::from_rows(
        (0..k)
            .map(|j| (0..k).map(|i| root_pairing(&b[cs[j].0], &b[cs[j].1], &cs[i].2)).collect())
            .collect(),
    );
    let inv = a.inverse().expect("Cartan matrix invertible");
    (0..k)
        .map(|l| {
            let mut v = vec![Rat::zero(); q.n()];
            for i in 0..k {
                axpy(&inv[(i, l)], &cs[i].2, &mut v);
            }
            v
        })
        .collect()
}

/// hat theta_Q^R(lambda)^{-1}, or None on a wall.
fn theta_hat_inv(q: &Parabolic, r: &Parabolic, lambda: &[Rat]) -> Option<Surd> {
    let ws = coweights(q, r);
    let prod: Rat = ws.iter().map(|w| dot(lambda, w)).product();
    if prod.is_zero() {
        return None;
    }
    Some(SurdPoly::sqrt(&gram_det(&ws)).scale(&(Rat::one() / prod)))
}

// ----------------------------------------------------------------- families

/// coef * exp(<lambda, exp> l).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coef: SurdPoly,
    pub exp: AVector,
}

/// A (G,M)-family: for each P in P(M), a finite exponential polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpPolyFamily {
    m: Levi,
    members: BTreeMap<Parabolic, Vec<Term>>,
}

impl ExpPolyFamily {
    /// Checks exponents and the adjacency condition.
    pub fn new(m: &Levi, members: BTreeMap<Parabolic, Vec<Term>>) -> Result<Self, GmError> {
        let ps = enumerate_parabolics(m, ParaKind::P, None);
        for p in &ps {
            let terms = members.get(p).ok_or_else(|| GmError::Missing(p.clone().into()))?;
            if terms.iter().any(|t| t.exp.len() != m.n() || !in_a_levi(&t.exp, m)) {
                return Err(GmError::BadExponent);
            }
        }
        let fam = ExpPolyFamily { m: m.clone(), members };
        for p in &ps {
            for q in &ps {
                if let Some(k) = p.adjacency(q) {
                    if p < q && !fam.agree_on_wall(p, q, k) {
                        return Err(GmError::NotAFamily(p.clone().into(), q.clone().into()));
                    }
                }
            }
        }
        Ok(fam)
    }

    /// exp(<lambda, Y_P> l) for an orthogonal family (Y_P).
    pub fn from_points(m: &Levi, y: impl Fn(&Parabolic) -> AVector) -> Result<Self, GmError> {
        let members = enumerate_parabolics(m, ParaKind::P, None)
            .into_iter()
            .map(|p| {
                let e = y(&p);
                (p, vec![Term { coef: SurdPoly::one(), exp: e }])
            })
            .collect();
        Self::new(m, members)
    }

    pub fn constant(m: &Levi, c: SurdPoly) -> Self {
        let zero = vec![Rat::zero(); m.n()];
        let members = enumerate_parabolics(m, ParaKind::P, None)
            .into_iter()
            .map(|p| (p, vec![Term { coef: c.clone(), exp: zero.clone() }]))
            .collect();
        ExpPolyFamily { m: m.clone(), members }
    }

    pub fn levi(&self) -> &Levi {
        &self.m
    }

    pub fn member(&self, p: &Parabolic) -> &[Term] {
        &self.members[p]
    }

    pub fn members(&self) -> &BTreeMap<Parabolic, Vec<Term>> {
        &self.members
    }

    /// Pointwise product.
    pub fn product(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m);
        let members = self
            .members
            .iter()
            .map(|(p, a)| {
                let b = &other.members[p];
                let mut out = Vec::new();
                for s in a {
                    for t in b {
                        let e: AVector = s.exp.iter().zip(&t.exp).map(|(x, y)| x + y).collect();
                        out.push(Term { coef: &s.coef * &t.coef, exp: e });
                    }
                }
                (p.clone(), simplify(out))
            })
            .collect();
        ExpPolyFamily { m: self.m.clone(), members }
    }

    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m);
        let members = self
            .members
            .iter()
            .map(|(p, a)| {
                let mut v = a.clone();
                v.extend(other.members[p].iter().cloned());
                (p.clone(), simplify(v))
            })
            .collect();
        ExpPolyFamily { m: self.m.clone(), members }
    }

    /// The induced (G,L)-family c_R(lambda) = c_P(lambda), lambda in a_L^*,
    /// P in P(M) inside R.
    pub fn restrict(&self, l: &Levi) -> Result<Self, GmError> {
        if !l.contains(&self.m) {
            return Err(GmError::NotContaining);
        }
        let members = enumerate_parabolics(l, ParaKind::P, None)
            .into_iter()
            .map(|r| {
                let p = crate::paracomb::some_p_inside(&r, &self.m).unwrap();
                let terms = self.members[&p]
                    .iter()
                    .map(|t| Term { coef: t.coef.clone(), exp: proj_levi(&t.exp, l) })
                    .collect();
                (r, simplify(terms))
            })
            .collect();
        Ok(ExpPolyFamily { m: l.clone(), members })
    }

    fn agree_on_wall(&self, p: &Parabolic, q: &Parabolic, k: usize) -> bool {
        let b = p.blocks();
        let beta = coroot(p.n(), &b[k], &b[k + 1]);
        let bb = dot(&beta, &beta);
        let reduce = |terms: &[Term]| -> BTreeMap<Vec<Rat>, SurdPoly> {
            let mut acc: BTreeMap<Vec<Rat>, SurdPoly> = BTreeMap::new();
            for t in terms {
                let mut e = t.exp.clone();
                axpy(&(-dot(&e, &beta) / &bb), &beta, &mut e);
                let slot = acc.entry(e).or_default();
                *slot = &*slot + &t.coef;
            }
            acc.retain(|_, c| !c.is_zero());
            acc
        };
        reduce(&self.members[p]) == reduce(&self.members[q])
    }
}

fn simplify(terms: Vec<Term>) -> Vec<Term> {
    let mut acc: BTreeMap<Vec<Rat>, SurdPoly> = BTreeMap::new();
    for t in terms {
        let slot = acc.entry(t.exp).or_default();
        *slot = &*slot + &t.coef;
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(exp, coef)| Term { coef, exp }).collect()
}

/// Block-constant generic vectors from a fixed-seed stream; `count` of them.
pub fn generic_lambdas(m: &Levi, count: usize) -> Vec<AVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a3b_da00 + m.n() as u64);
    (0..count)
        .map(|_| {
            let vals: Vec<Rat> = m
                .blocks()
                .iter()
                .map(|_| Rat::new(rng.gen_range(-997i64..=997).into(), rng.gen_range(1i64..=61).into()))
                .collect();
            let mut v = vec![Rat::zero(); m.n()];
            for (b, x) in m.blocks().iter().zip(vals) {
                for &i in b {
                    v[i] = x.clone();
                }
            }
            v
        })
        .collect()
}

fn factorial(k: usize) -> Rat {
    Rat::from_integer((1..=k).product::<usize>().into())
}

/// <lambda, y>^k l^k summed against coefficients.
fn derivative_at_zero(terms: &[Term], lambda: &[Rat], k: usize) -> SurdPoly {
    let mut acc = SurdPoly::zero();
    for t in terms {
        let x = dot(lambda, &t.exp);
        let xk = (0..k).fold(Rat::one(), |a, _| a * &x);
        acc = &acc + &t.coef.scale(&xk).mul_ell_pow(k as u32);
    }
    acc
}

/// c_M^Q at one lambda; None if lambda meets a wall.
fn cm_at(fam: &ExpPolyFamily, q: &Parabolic, lambda: &[Rat]) -> Option<SurdPoly> {
    let m = &fam.m;
    // remove the a_Q component
    let lq: AVector = sub(lambda, &proj_levi(lambda, &q.levi()));
    let p = m.blocks().len() - q.blocks().len();
    let mut acc = SurdPoly::zero();
    for r in enumerate_parabolics(m, ParaKind::P, Some(q)) {
        let ti = theta_inv(&r, q, &lq)?;
        acc = &acc + &(&derivative_at_zero(&fam.members[&r], &lq, p) * &ti);
    }
    Some(acc.scale(&(Rat::one() / factorial(p))))
}

/// c_M^Q for Q in F(M), from two generic lambdas that must agree.
pub fn cm_limit(fam: &ExpPolyFamily, q: &Parabolic) -> Result<SurdPoly, GmError> {
    if !q.contains_levi(&fam.m) {
        return Err(GmError::NotContaining);
    }
    let vals: Vec<SurdPoly> =
        generic_lambdas(&fam.m, 6).iter().filter_map(|l| cm_at(fam, q, l)).take(2).collect();
    if vals[0] != vals[1] {
        return Err(GmError::LambdaDependent(vals[0].to_string(), vals[1].to_string()));
    }
    Ok(vals[0].clone())
}

/// c_M = c_M^G.
pub fn cm(fam: &ExpPolyFamily) -> Result<SurdPoly, GmError> {
    cm_limit(fam, &Parabolic::full(fam.m.n()))
}

/// c_L^Q for L containing M and Q in F(L).
pub fn cl_limit(fam: &ExpPolyFamily, l: &Levi, q: &Parabolic) -> Result<SurdPoly, GmError> {
    cm_limit(&fam.restrict(l)?, q)
}

fn cq_prime_at(fam: &ExpPolyFamily, q: &Parabolic, lambda: &[Rat]) -> Option<SurdPoly> {
    let m = &fam.m;
    let n = m.n();
    let g = Parabolic::full(n);
    let lg: AVector = sub(lambda, &proj_levi(lambda, &Levi::full(n)));
    let qdim = q.blocks().len() - 1;
    let mut acc = SurdPoly::zero();
    for r in enumerate_parabolics(m, ParaKind::F, None) {
        if !r.contains(q) {
            continue;
        }
        let sign = if (q.blocks().len() - r.blocks().len()).is_multiple_of(2) { Rat::one() } else { -Rat::one() };
        let th = theta_hat_inv(q, &r, &lg)?;
        let ti = theta_inv(&r, &g, &lg)?;
        // c_R(t lambda) with lambda restricted to a_R: exponents projected
        let lr = r.levi();
        let p = crate::paracomb::some_p_inside(&r, m).unwrap();
        let terms: Vec<Term> = fam.members[&p]
            .iter()
            .map(|t| Term { coef: t.coef.clone(), exp: proj_levi(&t.exp, &lr) })
            .collect();
        let dv = derivative_at_zero(&terms, &lg, qdim);
        acc = &acc + &(&(&th * &dv) * &ti).scale(&sign);
    }
    Some(acc.scale(&(Rat::one() / factorial(qdim))))
}

/// d'_Q for Q in F(M).
pub fn cq_prime(fam: &ExpPolyFamily, q: &Parabolic) -> Result<SurdPoly, GmError> {
    if !q.contains_levi(&fam.m) {
        return Err(GmError::NotContaining);
    }
    let vals: Vec<SurdPoly> =
        generic_lambdas(&fam.m, 8).iter().filter_map(|l| cq_prime_at(fam, q, l)).take(2).collect();
    if vals[0] != vals[1] {
        return Err(GmError::LambdaDependent(vals[0].to_string(), vals[1].to_string()));
    }
    Ok(vals[0].clone())
}

// ----------------------------------------------------------- descent data

/// Basis of a_M^L: differences of block averages of M inside each block of L.
pub fn basis_a_m_l(m: &Levi, l: &Levi) -> Vec<AVector> {
    let n = m.n();
    let mut out = Vec::new();
    for lb in l.blocks() {
        let inner: Vec<&Vec<usize>> = m.blocks().iter().filter(|b| lb.contains(&b[0])).collect();
        for b in inner.iter().skip(1) {
            out.push(coroot(n, inner[0], b));
        }
    }
    out
}

/// d_M^G(L_1, ..., L_k): volume of the parallelotope spanned by orthonormal
/// bases of the a_M^{L_v}, zero unless they add up directly to a_M^G.
pub fn d_multi(m: &Levi, ls: &[Levi]) -> Surd {
    let bases: Vec<Vec<AVector>> = ls.iter().map(|l| basis_a_m_l(m, l)).collect();
    let total: usize = bases.iter().map(Vec::len).sum();
    if total != m.rank() {
        return SurdPoly::zero();
    }
    let all: Vec<AVector> = bases.iter().flatten().cloned().collect();
    let num = gram_det(&all);
    if num.is_zero() {
        return SurdPoly::zero();
    }
    let den: Rat = bases.iter().map(|b| gram_det(b)).product();
    SurdPoly::sqrt(&(num / den))
}

pub fn d_mg(m: &Levi, l1: &Levi, l2: &Levi) -> Surd {
    d_multi(m, &[l1.clone(), l2.clone()])
}

/// Basis of a_L^G: differences of block averages of L.
fn basis_a_l_g(l: &Levi) -> Vec<AVector> {
    basis_a_m_l(l, &Levi::full(l.n()))
}

/// Orders the blocks of L by decreasing value of a vector of a_L.
fn chamber_of(l: &Levi, v: &[Rat]) -> Option<Parabolic> {
    let mut blocks: Vec<Vec<usize>> = l.blocks().to_vec();
    blocks.sort_by(|a, b| v[b[0]].cmp(&v[a[0]]));
    if blocks.windows(2).any(|w| v[w[0][0]] == v[w[1][0]]) {
        return None;
    }
    Some(Parabolic::new(l.n(), blocks).unwrap())
}

/// Fixed generic points of a_M^G, one per place.
pub fn default_xis(m: &Levi, k: usize) -> Vec<AVector> {
    generic_lambdas(m, k + 1)[1..]
        .iter()
        .map(|v| sub(v, &proj_levi(v, &Levi::full(m.n()))))
        .collect()
}

/// The section s at the points (xi_v): the unique H in a_M^G with
/// H + xi_v in a_{L_v}^G for every v, and Q_v the chamber of H + xi_v in
/// P(L_v). None when d = 0 or a point falls on a wall.
pub fn section_at(m: &Levi, ls: &[Levi], xis: &[AVector]) -> Option<Vec<Parabolic>> {
    if d_multi(m, ls).is_zero() {
        return None;
    }
    let src = basis_a_l_g(m);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (l, xi) in ls.iter().zip(xis) {
        for u in basis_a_m_l(m, l) {
            rows.push(src.iter().map(|b| dot(&u, b)).collect::<Vec<Rat>>());
            rhs.push(-dot(&u, xi));
        }
    }
    let h = solve(&Matrix::from_rows(rows), &rhs);
    let mut hv = vec![Rat::zero(); m.n()];
    for (c, b) in h.iter().zip(&src) {
        axpy(c, b, &mut hv);
    }
    ls.iter()
        .zip(xis)
        .map(|(l, xi)| {
            let x: AVector = hv.iter().zip(xi).map(|(a, b)| a + b).collect();
            debug_assert!(in_a_levi(&x, l));
            chamber_of(l, &x)
        })
        .collect()
}

fn solve(a: &Matrix<Rat>, b: &[Rat]) -> Vec<Rat> {
    if b.is_empty() {
        return Vec::new();
    }
    let inv = a.inverse().expect("direct sum");
    (0..b.len()).map(|i| (0..b.len()).map(|j| &inv[(i, j)] * &b[j]).sum()).collect()
}

/// Descent data for a pair of Levis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentData {
    pub d: Surd,
    pub s: Option<(Parabolic, Parabolic)>,
}

pub fn dmg_section(m: &Levi, l1: &Levi, l2: &Levi) -> DescentData {
    let s = section_at(m, &[l1.clone(), l2.clone()], &default_xis(m, 2)).map(|v| (v[0].clone(), v[1].clone()));
    DescentData { d: d_mg(m, l1, l2), s }
}

// ------------------------------------------------------------- identities

/// Both sides of an identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub lhs: SurdPoly,
    pub rhs: SurdPoly,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// (cd)_M against sum over (L1, L2) of d_M^G(L1,L2) c_M^{Q1} d_M^{Q2}.
pub fn product_identity(c: &ExpPolyFamily, d: &ExpPolyFamily) -> Result<IdentityReport, GmError> {
    splitting_identity(&[c.clone(), d.clone()])
}

/// c_M against sum over tuples (L_v) of d_M^G((L_v)) prod c_{v,M}^{Q_v},
/// for the product family c_P = prod_v c_{v,P}.
pub fn splitting_identity(fams: &[ExpPolyFamily]) -> Result<IdentityReport, GmError> {
    let m = fams[0].levi().clone();
    let prod = fams[1..].iter().fold(fams[0].clone(), |a, f| a.product(f));
    let lhs = cm(&prod)?;
    let xis = default_xis(&m, fams.len());
    let levis = enumerate_levis(&m, None);
    let mut rhs = SurdPoly::zero();
    let mut tuple = vec![0usize; fams.len()];
    loop {
        let ls: Vec<Levi> = tuple.iter().map(|&i| levis[i].clone()).collect();
        let dv = d_multi(&m, &ls);
        if !dv.is_zero() {
            let qs = section_at(&m, &ls, &xis).expect("generic xi");
            let mut term = dv;
            for (f, q) in fams.iter().zip(&qs) {
                term = &term * &cm_limit(f, q)?;
            }
            rhs = &rhs + &term;
        }
        let mut pos = 0;
        while pos < tuple.len() {
            tuple[pos] += 1;
            if tuple[pos] < levis.len() {
                break;
            }
            tuple[pos] = 0;
            pos += 1;
        }
        if pos == tuple.len() {
            break;
        }
    }
    Ok(IdentityReport { lhs, rhs })
}

/// c_L against sum over L' of d_M^G(L, L') c_M^{Q'}.
pub fn descent_identity(c: &ExpPolyFamily, l: &Levi) -> Result<IdentityReport, GmError> {
    let m = c.levi().clone();
    let lhs = cl_limit(c, l, &Parabolic::full(m.n()))?;
    let xis = default_xis(&m, 2);
    let mut rhs = SurdPoly::zero();
    for l2 in enumerate_levis(&m, None) {
        let dv = d_mg(&m, l, &l2);
        if dv.is_zero() {
            continue;
        }
        let qs = section_at(&m, &[l.clone(), l2], &xis).expect("generic xi");
        rhs = &rhs + &(&dv * &cm_limit(c, &qs[1])?);
    }
    Ok(IdentityReport { lhs, rhs })
}

/// (cd)_M against sum over Q in F(M) of c_M^Q d'_Q.
pub fn prime_identity(c: &ExpPolyFamily, d: &ExpPolyFamily) -> Result<IdentityReport, GmError> {
    let m = c.levi().clone();
    let lhs = cm(&c.product(d))?;
    let mut rhs = SurdPoly::zero();
    for q in enumerate_parabolics(&m, ParaKind::F, None) {
        rhs = &rhs + &(&cm_limit(c, &q)? * &cq_prime(d, &q)?);
    }
    Ok(IdentityReport { lhs, rhs })
}

/// A random orthogonal family Y_P = x + sum over roots alpha of P of
/// c_alpha alpha^vee, with small integer data, times a random coefficient.
pub fn random_orthogonal_family(m: &Levi, rng: &mut impl Rng) -> ExpPolyFamily {
    let n = m.n();
    let k = m.blocks().len();
    let mut x = vec![Rat::zero(); n];
    for b in m.blocks() {
        let v = Rat::from_integer(rng.gen_range(-3i64..=3).into());
        for &i in b {
            x[i] = v.clone();
        }
    }
    let mut c = vec![vec![Rat::zero(); k]; k];
    for row in c.iter_mut() {
        for e in row.iter_mut() {
            *e = Rat::from_integer(rng.gen_range(-3i64..=3).into());
        }
    }
    let blocks = m.blocks().to_vec();
    let index = |b: &Vec<usize>| blocks.iter().position(|c| c == b).unwrap();
    let coef = SurdPoly::from_rat(Rat::from_integer(rng.gen_range(1i64..=3).into()));
    let fam = ExpPolyFamily::from_points(m, |p| {
        let mut y = x.clone();
        for (a, b) in positive_roots(p) {
            let (ia, ib) = (index(&p.blocks()[a]), index(&p.blocks()[b]));
            axpy(&c[ia][ib], &coroot(n, &p.blocks()[a], &p.blocks()[b]), &mut y);
        }
        y
    })
    .expect("orthogonal by construction");
    fam.product(&ExpPolyFamily::constant(m, coef))
}

/// Magnitude guard used by callers comparing with tolerances.
pub fn max_abs_coeff(s: &SurdPoly) -> Rat {
    s.terms().map(|(_, _, c)| c.abs()).max().unwrap_or_else(Rat::zero)
}
