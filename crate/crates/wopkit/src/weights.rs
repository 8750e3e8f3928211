//! The Harish-Chandra map H_P over Q_p, the twisted family R_P = H_P(w_P g),
//! the weights v_{L,X}^Q, the elements n_box(A, Y, V), the numbers
//! rho(alpha, o) and the r- and w-families built from them.
//!
//! Vectors of a_M are in units of l = log q with coordinates equal to minus
//! valuations, so <H, chi> = log|chi|.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::Rng;

use crate::exactnum::{conjugator, int, in_gl_zp, pow_p, similar, valuation, Matrix, Rat};
use crate::gmfam::{
    axpy, cl_limit, cm, cm_limit, coroot, dot, AVector, ExpPolyFamily, GmError, IdentityReport,
};
use crate::orbits::{ad_matrix, semisimple_part, standard_representative, Levi, OrbitDatum};
use crate::paracomb::{
    enumerate_levis, enumerate_parabolics, some_p_inside, ParaError, ParaKind, Parabolic, Perm,
    RichardsonContext,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeightError {
    #[error("matrix is singular")]
    Singular,
    #[error("size mismatch")]
    Size,
    #[error(transparent)]
    Para(#[from] ParaError),
    #[error(transparent)]
    Gm(#[from] GmError),
    #[error("A is not in the regular locus of the orbit")]
    NotRegular,
    #[error("V is not in the nilradical of the base parabolic")]
    NotInNilradical,
    #[error("Y or A is not in the Levi")]
    NotInLevi,
    #[error("slope did not stabilize within the depth bound; values {0:?}")]
    NoSlope(Vec<String>),
    #[error("limit at A = 0 did not stabilize within the depth bound")]
    NoLimit,
    #[error("parabolics are not adjacent")]
    NotAdjacent,
    #[error("the class has more than one characteristic polynomial factor")]
    NotElliptic,
    #[error("V is not conjugate to X")]
    NotConjugate,
    #[error("extraction of U_13 failed: {0}")]
    Extraction(String),
    #[error("Iwasawa routes disagree: {0:?} vs {1:?}")]
    RouteMismatch(Vec<String>, Vec<String>),
}

type Result<T> = std::result::Result<T, WeightError>;

/// Default number of depths tried by the slope and limit detectors.
pub const DEFAULT_DEPTH: usize = 8;

// ------------------------------------------------------------------ Iwasawa

/// val det of the Levi blocks of m in g = m n k, by maximal minors: the
/// rows of the trailing steps T of P satisfy g_T = (mn)_T k_T, and the
/// maximal minors of k_T have minimum valuation zero.
pub fn block_valuations_minors(g: &Matrix<Rat>, par: &Parabolic, p: u64) -> Result<Vec<i64>> {
    check_invertible(g, par)?;
    let n = g.rows();
    let r = par.blocks().len();
    let mut mu = vec![0i64; r + 1];
    for k in (0..r).rev() {
        let rows: Vec<usize> = par.blocks()[k..].iter().flatten().copied().collect();
        mu[k] = combinations(n, rows.len())
            .iter()
            .filter_map(|cols| valuation(&g.select(&rows, cols).det(), p))
            .min()
            .ok_or(WeightError::Singular)?;
    }
    Ok((0..r).map(|k| mu[k] - mu[k + 1]).collect())
}

/// An Iwasawa decomposition g = b k with b in P and k in GL_n(Z_p).
#[derive(Clone, Debug)]
pub struct Iwasawa {
    pub b: Matrix<Rat>,
    pub k: Matrix<Rat>,
}

impl Iwasawa {
    /// Splits b = m n with m block diagonal along P and n in N_P.
    pub fn levi_part(&self, par: &Parabolic) -> (Matrix<Rat>, Matrix<Rat>) {
        let n = self.b.rows();
        let s = par.steps();
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if s[i] == s[j] {
                    m[(i, j)] = self.b[(i, j)].clone();
                }
            }
        }
        let u = &m.inverse().expect("Levi part invertible") * &self.b;
        (m, u)
    }
}

/// Column reduction with valuation pivoting: for the steps of P from the
/// last one up, each row picks the free column of least valuation and
/// clears the other free columns. All column operations are integral with
/// unit pivots, so the accumulated transformation lies in GL_n(Z_p).
pub fn iwasawa(g: &Matrix<Rat>, par: &Parabolic, p: u64) -> Result<Iwasawa> {
    check_invertible(g, par)?;
    let n = g.rows();
    let mut a = g.clone();
    let mut kc = Matrix::<Rat>::identity(n);
    let mut free: Vec<usize> = (0..n).collect();
    let mut pivots: Vec<Vec<usize>> = vec![Vec::new(); par.blocks().len()];
    for (bi, block) in par.blocks().iter().enumerate().rev() {
        for &i in block {
            let (pos, &c) = free
                .iter()
                .enumerate()
                .filter(|(_, &c)| !a[(i, c)].is_zero())
                .min_by_key(|(_, &c)| valuation(&a[(i, c)], p).unwrap())
                .ok_or(WeightError::Singular)?;
            for &c2 in &free {
                if c2 == c || a[(i, c2)].is_zero() {
                    continue;
                }
                let x = &a[(i, c2)] / &a[(i, c)];
                col_axpy(&mut a, c2, c, &x);
                col_axpy(&mut kc, c2, c, &x);
            }
            free.remove(pos);
            pivots[bi].push(c);
        }
    }
    // move the pivot columns of each step onto that step's coordinates
    let mut order = vec![0; n];
    for (block, piv) in par.blocks().iter().zip(&pivots) {
        let mut piv = piv.clone();
        piv.sort_unstable();
        for (&t, &s) in block.iter().zip(&piv) {
            order[t] = s;
        }
    }
    let all: Vec<usize> = (0..n).collect();
    let b = a.select(&all, &order);
    let kc = kc.select(&all, &order);
    debug_assert!(par.contains_matrix(&b));
    debug_assert!(in_gl_zp(&kc, p));
    let k = kc.inverse().ok_or(WeightError::Singular)?;
    Ok(Iwasawa { b, k })
}

fn col_axpy(m: &mut Matrix<Rat>, dst: usize, src: usize, x: &Rat) {
    for r in 0..m.rows() {
        let v = &m[(r, src)] * x;
        m[(r, dst)] -= v;
    }
}

fn hp_from_vals(par: &Parabolic, vals: &[i64]) -> AVector {
    let mut h = vec![Rat::zero(); par.n()];
    for (b, &v) in par.blocks().iter().zip(vals) {
        let c = Rat::new((-v).into(), (b.len() as i64).into());
        for &i in b {
            h[i] = c.clone();
        }
    }
    h
}

/// H_P(g) by the minor-valuation method.
pub fn hp_minors(g: &Matrix<Rat>, par: &Parabolic, p: u64) -> Result<AVector> {
    Ok(hp_from_vals(par, &block_valuations_minors(g, par, p)?))
}

/// H_P(g) from an explicit decomposition g = b k.
pub fn hp_reduction(g: &Matrix<Rat>, par: &Parabolic, p: u64) -> Result<AVector> {
    let iw = iwasawa(g, par, p)?;
    let vals: Vec<i64> = par
        .blocks()
        .iter()
        .map(|b| valuation(&iw.b.select(b, b).det(), p).expect("invertible block"))
        .collect();
    Ok(hp_from_vals(par, &vals))
}

/// H_P(g) in a_{M_P}: the minor method, cross-checked by column reduction.
pub fn iwasawa_hp(g: &Matrix<Rat>, par: &Parabolic, p: u64) -> Result<AVector> {
    let h1 = hp_minors(g, par, p)?;
    let h2 = hp_reduction(g, par, p)?;
    if h1 != h2 {
        return Err(WeightError::RouteMismatch(show(&h1), show(&h2)));
    }
    Ok(h1)
}

fn check_invertible(g: &Matrix<Rat>, par: &Parabolic) -> Result<()> {
    if !g.is_square() || g.rows() != par.n() {
        return Err(WeightError::Size);
    }
    if g.det().is_zero() {
        return Err(WeightError::Singular);
    }
    Ok(())
}

fn combinations(n: usize, t: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, t: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == t {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, t, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, t, &mut Vec::new(), &mut out);
    out
}

pub fn show(v: &[Rat]) -> Vec<String> {
    v.iter().map(crate::exactnum::fmt_rat).collect()
}

// ------------------------------------------------------------------- R_P

/// A standard class together with a Richardson Levi and a prime.
pub struct WeightContext {
    rc: RichardsonContext,
    x: Matrix<Rat>,
    p: u64,
}

impl WeightContext {
    /// With `m_r = None` the Levi of the first Richardson parabolic is used.
    pub fn new(d: &OrbitDatum, m_r: Option<&Levi>) -> Result<Self> {
        let rc = match m_r {
            Some(m) => RichardsonContext::new(d, m)?,
            None => RichardsonContext::first(d),
        };
        Ok(WeightContext { rc, x: standard_representative(d), p: d.p() })
    }

    pub fn datum(&self) -> &OrbitDatum {
        self.rc.datum()
    }

    pub fn x(&self) -> &Matrix<Rat> {
        &self.x
    }

    pub fn m_r(&self) -> &Levi {
        self.rc.m_r()
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn richardson(&self) -> &RichardsonContext {
        &self.rc
    }

    /// R_Q(g) = H_Q(w_Q g) for Q in F(M_R).
    pub fn rp(&self, q: &Parabolic, g: &Matrix<Rat>) -> Result<AVector> {
        let w = self.rc.w(q)?;
        self.rp_with(q, &w, g)
    }

    /// H_Q(w g) for a given representative w.
    pub fn rp_with(&self, q: &Parabolic, w: &Perm, g: &Matrix<Rat>) -> Result<AVector> {
        iwasawa_hp(&(&w.matrix() * g), q, self.p)
    }

    /// The (G, M_R)-family v_{P,X}(lambda, g) = exp <lambda, -R_P(g)>.
    pub fn family(&self, g: &Matrix<Rat>) -> Result<ExpPolyFamily> {
        let m = self.m_r().clone();
        let mut pts = BTreeMap::new();
        for p in enumerate_parabolics(&m, ParaKind::P, None) {
            let r = self.rp(&p, g)?;
            pts.insert(p, r.into_iter().map(|x| -x).collect::<AVector>());
        }
        Ok(ExpPolyFamily::from_points(&m, |p| pts[p].clone())?)
    }

    /// v_{L,X}^Q(g) for L containing M_R and Q in F(L).
    pub fn weight(&self, l: &Levi, q: &Parabolic, g: &Matrix<Rat>) -> Result<crate::SurdPoly> {
        Ok(cl_limit(&self.family(g)?, l, q)?)
    }

    /// A random element of G_X(F) with small entries.
    pub fn random_centralizer(&self, rng: &mut impl Rng) -> Matrix<Rat> {
        random_centralizer(&self.x, self.p, rng)
    }
}

/// A random invertible element of the centralizer of x.
pub fn random_centralizer(x: &Matrix<Rat>, p: u64, rng: &mut impl Rng) -> Matrix<Rat> {
    let n = x.rows();
    let basis = ad_matrix(x).kernel();
    loop {
        let mut h = Matrix::<Rat>::zeros(n, n);
        for v in &basis {
            let c = int(rng.gen_range(-3..=3)) * pow_p(p, rng.gen_range(-1..=1));
            for (idx, e) in v.iter().enumerate() {
                if !e.is_zero() {
                    h[(idx / n, idx % n)] += &c * e;
                }
            }
        }
        if !h.det().is_zero() {
            return h;
        }
    }
}

/// A random element of GL_n(Z_p).
pub fn random_k(n: usize, p: u64, rng: &mut impl Rng) -> Matrix<Rat> {
    loop {
        let rows: Vec<Vec<Rat>> =
            (0..n).map(|_| (0..n).map(|_| int(rng.gen_range(-4..=4))).collect()).collect();
        let k = Matrix::from_rows(rows);
        if in_gl_zp(&k, p) {
            return k;
        }
    }
}

/// A random element of GL_n(Q) with entries c p^e, |e| <= 2.
pub fn random_g(n: usize, p: u64, rng: &mut impl Rng) -> Matrix<Rat> {
    loop {
        let rows: Vec<Vec<Rat>> = (0..n)
            .map(|_| {
                (0..n).map(|_| int(rng.gen_range(-3..=3)) * pow_p(p, rng.gen_range(-2..=2))).collect()
            })
            .collect();
        let g = Matrix::from_rows(rows);
        if !g.det().is_zero() {
            return g;
        }
    }
}

/// The natural action of a permutation on a_M: (w.H)_{w(i)} = H_i.
pub fn act(w: &Perm, h: &[Rat]) -> AVector {
    let mut out = vec![Rat::zero(); h.len()];
    for (i, x) in h.iter().enumerate() {
        out[w.apply(i)] = x.clone();
    }
    out
}

// ------------------------------------------------------------------ n_box

/// Coordinates (i, j) of n_P.
fn nil_coords(par: &Parabolic) -> Vec<(usize, usize)> {
    let s = par.steps();
    let n = par.n();
    let mut v = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if s[i] < s[j] {
                v.push((i, j));
            }
        }
    }
    v
}

fn a_matrix(a: &[Rat]) -> Matrix<Rat> {
    Matrix::diag(a)
}

fn check_levi_data(a: &[Rat], y: &Matrix<Rat>, m: &Levi) -> Result<()> {
    if a.len() != m.n() || y.rows() != m.n() || !y.is_square() {
        return Err(WeightError::Size);
    }
    if !crate::gmfam::in_a_levi(a, m) {
        return Err(WeightError::NotInLevi);
    }
    for i in 0..m.n() {
        for j in 0..m.n() {
            if m.block_of(i) != m.block_of(j) && !y[(i, j)].is_zero() {
                return Err(WeightError::NotInLevi);
            }
        }
    }
    Ok(())
}

/// Is A + Y regular, i.e. ad(A + Y) invertible off the blocks of M?
pub fn is_regular(a: &[Rat], y: &Matrix<Rat>, m: &Levi) -> bool {
    let z = &a_matrix(a) + y;
    let n = m.n();
    let coords: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| m.block_of(i) != m.block_of(j))
        .collect();
    !ad_on(&z, &coords).det().is_zero()
}

/// The matrix of u -> z u - u z on the span of the given matrix units,
/// assumed stable.
fn ad_on(z: &Matrix<Rat>, coords: &[(usize, usize)]) -> Matrix<Rat> {
    let n = z.rows();
    let idx: BTreeMap<(usize, usize), usize> = coords.iter().enumerate().map(|(t, &c)| (c, t)).collect();
    let mut s = Matrix::zeros(coords.len(), coords.len());
    for (col, &(k, l)) in coords.iter().enumerate() {
        // z E_kl - E_kl z
        for i in 0..n {
            if !z[(i, k)].is_zero() {
                if let Some(&r) = idx.get(&(i, l)) {
                    s[(r, col)] += &z[(i, k)];
                }
            }
        }
        for j in 0..n {
            if !z[(l, j)].is_zero() {
                if let Some(&r) = idx.get(&(k, j)) {
                    s[(r, col)] -= &z[(l, j)];
                }
            }
        }
    }
    s
}

/// The unique n in N_box with n^{-1} (A + Y) n = A + Y + V. Writing
/// n = 1 + u this is ad(A+Y) u = V + u V, solved by iterating along the
/// nilpotency filtration.
pub fn n_square(a: &[Rat], y: &Matrix<Rat>, v: &Matrix<Rat>, pbox: &Parabolic) -> Result<Matrix<Rat>> {
    let m = pbox.levi();
    check_levi_data(a, y, &m)?;
    if !pbox.nilradical_contains(v) {
        return Err(WeightError::NotInNilradical);
    }
    let n = m.n();
    let z = &a_matrix(a) + y;
    let coords = nil_coords(pbox);
    let inv = ad_on(&z, &coords).inverse().ok_or(WeightError::NotRegular)?;
    let mut u = Matrix::<Rat>::zeros(n, n);
    for _ in 0..=pbox.blocks().len() {
        let rhs = v + &(&u * v);
        let w: Vec<Rat> = coords.iter().map(|&(i, j)| rhs[(i, j)].clone()).collect();
        let mut next = Matrix::zeros(n, n);
        for (r, &(i, j)) in coords.iter().enumerate() {
            next[(i, j)] = (0..coords.len()).map(|c| &inv[(r, c)] * &w[c]).sum();
        }
        if next == u {
            break;
        }
        u = next;
    }
    let nn = &Matrix::identity(n) + &u;
    let lhs = &(&nn.inverse().unwrap() * &z) * &nn;
    assert_eq!(lhs, &z + v, "n_box does not solve its defining equation");
    Ok(nn)
}

// -------------------------------------------------------------------- rho

/// A root of A_M: e_a - e_b for blocks a != b of M (canonical order).
pub type Root = (usize, usize);

pub fn all_roots(m: &Levi) -> Vec<Root> {
    let r = m.blocks().len();
    (0..r).flat_map(|a| (0..r).filter(move |&b| b != a).map(move |b| (a, b))).collect()
}

/// alpha^vee in a_M.
pub fn root_coroot(m: &Levi, alpha: Root) -> AVector {
    coroot(m.n(), &m.blocks()[alpha.0], &m.blocks()[alpha.1])
}

/// alpha(A) for A in a_M.
pub fn root_value(m: &Levi, alpha: Root, a: &[Rat]) -> Rat {
    &a[m.blocks()[alpha.0][0]] - &a[m.blocks()[alpha.1][0]]
}

/// Sigma(P; A_M): the roots e_a - e_b with a before b in P.
pub fn roots_of(m: &Levi, par: &Parabolic) -> Vec<Root> {
    let order: Vec<usize> = par.blocks().iter().map(|b| m.block_of(b[0])).collect();
    let mut v = Vec::new();
    for x in 0..order.len() {
        for y in x + 1..order.len() {
            v.push((order[x], order[y]));
        }
    }
    v
}

/// Base parabolic with b before a (so -alpha lies in it) and the
/// parabolic with a before b; the remaining blocks follow in order.
fn rho_parabolics(m: &Levi, alpha: Root) -> (Parabolic, Parabolic) {
    let bl = m.blocks();
    let rest: Vec<Vec<usize>> =
        (0..bl.len()).filter(|&c| c != alpha.0 && c != alpha.1).map(|c| bl[c].clone()).collect();
    let mk = |first: usize, second: usize| {
        let mut v = vec![bl[first].clone(), bl[second].clone()];
        v.extend(rest.iter().cloned());
        Parabolic::new(m.n(), v).unwrap()
    };
    (mk(alpha.1, alpha.0), mk(alpha.0, alpha.1))
}

/// Where V ranges when computing rho(alpha).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RhoSpace {
    /// n_box cap m_alpha.
    Full,
    /// n_box cap m_alpha cap g_{Y_ss} (the descent to the centralizer).
    Centralizer,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoResult {
    pub alpha: Root,
    pub rho: Rat,
    /// h_k with H_P(n_box(A_k, Y, V)) = -h_k alpha^vee, k = 1, 2, ...
    pub witness: Vec<Rat>,
    /// First depth from which the slope is constant.
    pub stable_from: usize,
}

/// A_k: u p^k on block a (u a unit), 0 on block b, and fixed generic values elsewhere
/// chosen so that A_k + Y is regular for every k tried.
fn rho_points(m: &Levi, alpha: Root, y: &Matrix<Rat>, p: u64, depth: usize) -> Option<Vec<AVector>> {
    let units = (1..40i64).filter(|u| u % p as i64 != 0).flat_map(|u| [u, -u]);
    let tries = units.flat_map(|u| (1..20i64).map(move |s| (u, s)));
    for (u, s) in tries {
        let pts: Vec<AVector> = (1..=depth)
            .map(|k| {
                let mut a = vec![Rat::zero(); m.n()];
                for (c, b) in m.blocks().iter().enumerate() {
                    let val = if c == alpha.0 {
                        int(u) * pow_p(p, k as i64)
                    } else if c == alpha.1 {
                        Rat::zero()
                    } else {
                        Rat::new((s * 7 + c as i64 * 13).into(), 3.into()) / pow_p(p, 1)
                    };
                    for &i in b {
                        a[i] = val.clone();
                    }
                }
                a
            })
            .collect();
        if pts.iter().all(|a| is_regular(a, y, m)) {
            return Some(pts);
        }
    }
    None
}

/// A fixed generic V in the chosen space, or None if the space is zero.
fn rho_v(m: &Levi, alpha: Root, y: &Matrix<Rat>, space: RhoSpace) -> Option<Matrix<Rat>> {
    let n = m.n();
    let rows = &m.blocks()[alpha.1];
    let cols = &m.blocks()[alpha.0];
    let mut v = Matrix::zeros(n, n);
    match space {
        RhoSpace::Full => {
            let mut c = 1i64;
            for &i in rows {
                for &j in cols {
                    v[(i, j)] = int(c);
                    c = c % 5 + 2;
                }
            }
        }
        RhoSpace::Centralizer => {
            let s = semisimple_part(y);
            let coords: Vec<(usize, usize)> =
                rows.iter().flat_map(|&i| cols.iter().map(move |&j| (i, j))).collect();
            // [s, V] restricted to Hom(block a, block b) stays there
            let ker = ad_on(&s, &coords).kernel();
            if ker.is_empty() {
                return None;
            }
            for (t, kv) in ker.iter().enumerate() {
                let c = int(t as i64 + 1);
                for (r, &(i, j)) in coords.iter().enumerate() {
                    v[(i, j)] += &c * &kv[r];
                }
            }
        }
    }
    Some(v)
}

/// rho(alpha, o) by slope detection along A_k with val alpha(A_k) = k.
pub fn rho(alpha: Root, m: &Levi, y: &Matrix<Rat>, p: u64, depth: usize) -> Result<RhoResult> {
    rho_in(alpha, m, y, p, depth, RhoSpace::Full).map(|r| r.expect("full space is nonzero"))
}

/// As [`rho`], with V restricted to `space`; None when that space is zero.
pub fn rho_in(
    alpha: Root,
    m: &Levi,
    y: &Matrix<Rat>,
    p: u64,
    depth: usize,
    space: RhoSpace,
) -> Result<Option<RhoResult>> {
    let zero = vec![Rat::zero(); m.n()];
    check_levi_data(&zero, y, m)?;
    let depth = depth.max(4);
    let v = match rho_v(m, alpha, y, space) {
        Some(v) => v,
        None => return Ok(None),
    };
    let (pbox, par) = rho_parabolics(m, alpha);
    let pts = rho_points(m, alpha, y, p, depth).ok_or(WeightError::NotRegular)?;
    let av = root_coroot(m, alpha);
    let aa = dot(&av, &av);
    let mut h = Vec::new();
    for a in &pts {
        let nb = n_square(a, y, &v, &pbox)?;
        let hp = iwasawa_hp(&nb, &par, p)?;
        let c = -dot(&hp, &av) / &aa;
        let mut rest = hp.clone();
        axpy(&c, &av, &mut rest);
        debug_assert!(rest.iter().all(Zero::is_zero), "H_P(n_box) off the coroot line");
        h.push(c);
    }
    let diffs: Vec<Rat> = h.windows(2).map(|w| &w[1] - &w[0]).collect();
    let last = diffs.last().unwrap().clone();
    let stable_from = diffs.iter().rposition(|d| *d != last).map_or(0, |i| i + 1);
    if diffs.len() - stable_from < 3 {
        return Err(WeightError::NoSlope(show(&h)));
    }
    Ok(Some(RhoResult { alpha, rho: last, witness: h, stable_from }))
}

/// rho(alpha) for every root of A_M.
pub fn rho_all(m: &Levi, y: &Matrix<Rat>, p: u64, depth: usize) -> Result<BTreeMap<Root, Rat>> {
    all_roots(m).into_iter().map(|a| Ok((a, rho(a, m, y, p, depth)?.rho))).collect()
}

/// rho computed inside the centralizer of Y_ss; roots whose root space
/// misses g_{Y_ss} get 0.
pub fn rho_all_descent(m: &Levi, y: &Matrix<Rat>, p: u64, depth: usize) -> Result<BTreeMap<Root, Rat>> {
    all_roots(m)
        .into_iter()
        .map(|a| {
            let r = rho_in(a, m, y, p, depth, RhoSpace::Centralizer)?;
            Ok((a, r.map_or_else(Rat::zero, |r| r.rho)))
        })
        .collect()
}

// ------------------------------------------------------------ r and w families

/// sum over roots of c_alpha (-val alpha(A)) alpha^vee.
fn root_sum(m: &Levi, roots: &[Root], coef: impl Fn(Root) -> Rat, a: &[Rat], p: u64) -> Result<AVector> {
    let mut out = vec![Rat::zero(); m.n()];
    for &al in roots {
        let c = coef(al);
        if c.is_zero() {
            continue;
        }
        let v = valuation(&root_value(m, al, a), p).ok_or(WeightError::NotRegular)?;
        axpy(&(c * int(-v)), &root_coroot(m, al), &mut out);
    }
    Ok(out)
}

/// r_P(lambda, A, Y) = prod over Sigma(P) of r_alpha(lambda/2, A, Y).
pub fn r_family(m: &Levi, rhos: &BTreeMap<Root, Rat>, a: &[Rat], p: u64) -> Result<ExpPolyFamily> {
    let mut pts = BTreeMap::new();
    let half = Rat::new(1.into(), 2.into());
    for par in enumerate_parabolics(m, ParaKind::P, None) {
        let y = root_sum(m, &roots_of(m, &par), |al| &rhos[&al] * &half, a, p)?;
        pts.insert(par, y);
    }
    Ok(ExpPolyFamily::from_points(m, |q| pts[q].clone())?)
}

/// Points of w_{P|P_box}(lambda, A, Y, V).
fn w_points(
    rhos: &BTreeMap<Root, Rat>,
    a: &[Rat],
    y: &Matrix<Rat>,
    v: &Matrix<Rat>,
    pbox: &Parabolic,
    p: u64,
) -> Result<BTreeMap<Parabolic, AVector>> {
    let m = pbox.levi();
    let nb = n_square(a, y, v, pbox)?;
    let base: Vec<Root> = roots_of(&m, pbox);
    let mut pts = BTreeMap::new();
    for par in enumerate_parabolics(&m, ParaKind::P, None) {
        let opp: Vec<Root> =
            roots_of(&m, &par).into_iter().filter(|&(x, y)| base.contains(&(y, x))).collect();
        let mut pt = root_sum(&m, &opp, |al| rhos[&al].clone(), a, p)?;
        let h = iwasawa_hp(&nb, &par, p)?;
        axpy(&-Rat::one(), &h, &mut pt);
        pts.insert(par, pt);
    }
    Ok(pts)
}

/// The family w_{P|P_box}(lambda, A, Y, V), P in P(M).
pub fn w_family(
    rhos: &BTreeMap<Root, Rat>,
    a: &[Rat],
    y: &Matrix<Rat>,
    v: &Matrix<Rat>,
    pbox: &Parabolic,
    p: u64,
) -> Result<ExpPolyFamily> {
    let pts = w_points(rhos, a, y, v, pbox, p)?;
    Ok(ExpPolyFamily::from_points(&pbox.levi(), |q| pts[q].clone())?)
}

/// The family v_P(lambda, n) = exp <lambda, -H_P(n)>.
pub fn v_family(m: &Levi, g: &Matrix<Rat>, p: u64) -> Result<ExpPolyFamily> {
    let mut pts = BTreeMap::new();
    for par in enumerate_parabolics(m, ParaKind::P, None) {
        let h: AVector = iwasawa_hp(g, &par, p)?.into_iter().map(|x| -x).collect();
        pts.insert(par, h);
    }
    Ok(ExpPolyFamily::from_points(m, |q| pts[q].clone())?)
}

/// w_P(lambda, Y, V) = lim_{A -> 0} w_P(lambda, A, Y, V) along A_k = p^k A_1:
/// the points must coincide at three consecutive depths.
pub fn w_limit(
    rhos: &BTreeMap<Root, Rat>,
    a1: &[Rat],
    y: &Matrix<Rat>,
    v: &Matrix<Rat>,
    pbox: &Parabolic,
    p: u64,
    depth: usize,
) -> Result<ExpPolyFamily> {
    let m = pbox.levi();
    let mut seen: Vec<BTreeMap<Parabolic, AVector>> = Vec::new();
    for k in 1..=depth.max(3) as i64 {
        let a: AVector = a1.iter().map(|x| x * pow_p(p, k)).collect();
        if !is_regular(&a, y, &m) {
            continue;
        }
        seen.push(w_points(rhos, &a, y, v, pbox, p)?);
        let t = seen.len();
        if t >= 3 && seen[t - 1] == seen[t - 2] && seen[t - 2] == seen[t - 3] {
            let pts = seen.pop().unwrap();
            return Ok(ExpPolyFamily::from_points(&m, |q| pts[q].clone())?);
        }
    }
    Err(WeightError::NoLimit)
}

/// Both sides of sum_L r_M^L(A, Y) v_L^G(n_box(A, Y, V)) = w_M^G(A, Y, V).
pub fn r_v_w_identity(
    rhos: &BTreeMap<Root, Rat>,
    a: &[Rat],
    y: &Matrix<Rat>,
    v: &Matrix<Rat>,
    pbox: &Parabolic,
    p: u64,
) -> Result<IdentityReport> {
    let m = pbox.levi();
    let r = r_family(&m, rhos, a, p)?;
    let nb = n_square(a, y, v, pbox)?;
    let vf = v_family(&m, &nb, p)?;
    let g = Parabolic::full(m.n());
    let mut lhs = crate::SurdPoly::zero();
    for l in enumerate_levis(&m, None) {
        let q = some_p_inside(&parabolic_over_levi(&l), &l)?;
        let rml = cm_limit(&r, &q)?;
        let vl = cl_limit(&vf, &l, &g)?;
        lhs = &lhs + &(&rml * &vl);
    }
    let rhs = cm(&w_family(rhos, a, y, v, pbox, p)?)?;
    Ok(IdentityReport { lhs, rhs })
}

/// Some parabolic with Levi L.
fn parabolic_over_levi(l: &Levi) -> Parabolic {
    Parabolic::new(l.n(), l.blocks().to_vec()).unwrap()
}

/// r_M^Q for every Q in P(L); all must agree.
pub fn r_ml_values(r: &ExpPolyFamily, l: &Levi) -> Result<Vec<crate::SurdPoly>> {
    let m = r.levi().clone();
    let mut out = Vec::new();
    for q in enumerate_parabolics(l, ParaKind::P, None) {
        debug_assert!(q.contains_levi(&m));
        out.push(cm_limit(r, &q)?);
    }
    Ok(out)
}

/// The cocycle law w_{P3|P1}(A,Y1,V1) = w_{P3|P2}(A,Y2,V2) w_{P2|P1}(A,Y1,V1),
/// with (Y2, V2, k2) produced from (Y1, V1) by an Iwasawa decomposition of
/// n_box relative to P2. Returns the number of P3 checked, or the first
/// failing P3.
pub fn cocycle_check(
    rhos: &BTreeMap<Root, Rat>,
    a: &[Rat],
    y1: &Matrix<Rat>,
    v1: &Matrix<Rat>,
    p1: &Parabolic,
    p2: &Parabolic,
    p: u64,
) -> Result<std::result::Result<usize, Parabolic>> {
    let m = p1.levi();
    let n1 = n_square(a, y1, v1, p1)?;
    let iw = iwasawa(&n1, p2, p)?;
    let (mm, nn) = iw.levi_part(p2);
    let y2 = &(&mm.inverse().unwrap() * y1) * &mm;
    let z2 = &a_matrix(a) + &y2;
    let v2 = &(&(&nn.inverse().unwrap() * &z2) * &nn) - &z2;
    // k2^{-1} (A + Y2 + V2) k2 = A + Y1 + V1
    debug_assert_eq!(
        &(&iw.k.inverse().unwrap() * &(&z2 + &v2)) * &iw.k,
        &(&a_matrix(a) + y1) + v1
    );
    let w31 = w_points(rhos, a, y1, v1, p1, p)?;
    let w21 = w_points(rhos, a, y1, v1, p1, p)?;
    let w32 = w_points(rhos, a, &y2, &v2, p2, p)?;
    let mut count = 0;
    for p3 in enumerate_parabolics(&m, ParaKind::P, None) {
        let sum: AVector = w32[&p3].iter().zip(&w21[p2]).map(|(x, y)| x + y).collect();
        if sum != w31[&p3] {
            return Ok(Err(p3));
        }
        count += 1;
    }
    Ok(Ok(count))
}

// ------------------------------------------------------------- adjacency

/// Both sides of -R_{P1}(g) + R_{P2}(g) = log|det U_13| alpha^vee.
#[derive(Clone, Debug)]
pub struct AdjacentReport {
    pub lhs: AVector,
    pub rhs: AVector,
    pub u13: Matrix<Rat>,
    pub k: Matrix<Rat>,
    pub alpha_vee: AVector,
}

impl AdjacentReport {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Coordinate sets V_1 < V_2 < ... of a flag.
fn flag_sets(par: &Parabolic) -> Vec<Vec<usize>> {
    let mut acc = Vec::new();
    let mut out = Vec::new();
    for b in par.blocks() {
        acc.extend(b.iter().copied());
        let mut s = acc.clone();
        s.sort_unstable();
        out.push(s);
    }
    out
}

fn minus(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().filter(|i| !b.contains(i)).copied().collect()
}

pub fn adjacent_difference(
    ctx: &WeightContext,
    p1: &Parabolic,
    p2: &Parabolic,
    g: &Matrix<Rat>,
) -> Result<AdjacentReport> {
    if ctx.datum().polys().len() != 1 {
        return Err(WeightError::NotElliptic);
    }
    let k = p1.adjacency(p2).ok_or(WeightError::NotAdjacent)?;
    let p = ctx.p();
    let n = g.rows();
    let t1 = ctx.richardson().r_map(p1)?;
    let t2 = ctx.richardson().r_map(p2)?;
    let f1 = flag_sets(&t1);
    let f2 = flag_sets(&t2);
    let (lo, hi) = if f1[k].iter().all(|i| f2[k].contains(i)) {
        (f1[k].clone(), f2[k].clone())
    } else if f2[k].iter().all(|i| f1[k].contains(i)) {
        (f2[k].clone(), f1[k].clone())
    } else {
        return Err(WeightError::Extraction("k-th flag spaces are not nested".into()));
    };
    let below = if k == 0 { Vec::new() } else { f1[k - 1].clone() };
    let above = f1[k + 1].clone();
    let w1 = minus(&lo, &below);
    let w2 = minus(&hi, &lo);
    let w3 = minus(&above, &hi);
    // P^- : the refined flag
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut prev: Vec<usize> = Vec::new();
    for s in f1[..k].iter().chain([&lo, &hi]).chain(f1[k + 1..].iter()) {
        let d = minus(s, &prev);
        if !d.is_empty() {
            blocks.push(d);
        }
        prev = s.clone();
    }
    let pminus = Parabolic::new(n, blocks)?;
    let iw = iwasawa(g, &pminus, p)?;
    let y = &(&g.inverse().ok_or(WeightError::Singular)? * ctx.x()) * g;
    let u = &(&iw.k * &y) * &iw.k.inverse().unwrap();
    // U must lie in (Ad M_{P^-}) X_ss + (n_{P~1} cap n_{P~2})
    if !pminus.contains_matrix(&u) {
        return Err(WeightError::Extraction("U not in p^-".into()));
    }
    for i in 0..n {
        for j in 0..n {
            let in_m = pminus.steps()[i] == pminus.steps()[j];
            let in_n12 = t1.nilradical_contains(&Matrix::unit(n, i, j))
                && t2.nilradical_contains(&Matrix::unit(n, i, j));
            if !in_m && !in_n12 && !u[(i, j)].is_zero() {
                return Err(WeightError::Extraction(format!("U has an entry at ({i},{j})")));
            }
        }
    }
    let u13 = u.select(&w1, &w3);
    let val = valuation(&u13.det(), p).ok_or_else(|| WeightError::Extraction("U_13 singular".into()))?;
    let av = coroot(n, &p1.blocks()[k], &p1.blocks()[k + 1]);
    let rhs: AVector = av.iter().map(|x| x * int(-val)).collect();
    let r1 = ctx.rp(p1, g)?;
    let r2 = ctx.rp(p2, g)?;
    let lhs: AVector = r1.iter().zip(&r2).map(|(a, b)| b - a).collect();
    let _ = w2;
    Ok(AdjacentReport { lhs, rhs, u13, k: iw.k, alpha_vee: av })
}

// ------------------------------------------------------------- comparison

/// Exponents of both sides of w_{P|P_box}(lambda, 0, 0, V) =
/// exp <lambda, R_{P_box}(g) - R_P(g)>, for every P in P(M_R).
#[derive(Clone, Debug)]
pub struct CompareReport {
    pub sides: BTreeMap<Parabolic, (AVector, AVector)>,
    pub g: Matrix<Rat>,
}

impl CompareReport {
    pub fn holds(&self) -> bool {
        self.sides.values().all(|(a, b)| a == b)
    }
}

/// For X nilpotent standard, M = M_R, V in n_box in the orbit of X and
/// k in K: g is built with k^{-1} V k = g^{-1} X g.
pub fn weight_compare(
    ctx: &WeightContext,
    pbox: &Parabolic,
    v: &Matrix<Rat>,
    k: Option<&Matrix<Rat>>,
    depth: usize,
) -> Result<CompareReport> {
    if !ctx.datum().is_nilpotent() {
        return Err(WeightError::NotElliptic);
    }
    let m = ctx.m_r().clone();
    if pbox.levi() != m {
        return Err(WeightError::Para(ParaError::NotContaining));
    }
    if !pbox.nilradical_contains(v) {
        return Err(WeightError::NotInNilradical);
    }
    if !similar(v, ctx.x()) {
        return Err(WeightError::NotConjugate);
    }
    let n = m.n();
    let p = ctx.p();
    let vk = match k {
        Some(k) => &(&k.inverse().unwrap() * v) * k,
        None => v.clone(),
    };
    let g = conjugator(ctx.x(), &vk).map_err(|_| WeightError::NotConjugate)?;
    let zero = Matrix::zeros(n, n);
    let rhos = rho_all(&m, &zero, p, depth)?;
    let a1 = generic_direction(&m, p);
    let w = w_limit(&rhos, &a1, &zero, v, pbox, p, depth)?;
    let rb = ctx.rp(pbox, &g)?;
    let mut sides = BTreeMap::new();
    for (par, terms) in w.members() {
        let rp = ctx.rp(par, &g)?;
        let rhs: AVector = rb.iter().zip(&rp).map(|(a, b)| a - b).collect();
        sides.insert(par.clone(), (terms[0].exp.clone(), rhs));
    }
    Ok(CompareReport { sides, g })
}

/// A direction in a_M with pairwise distinct block values that are units
/// apart when p allows it.
pub fn generic_direction(m: &Levi, p: u64) -> AVector {
    let r = m.blocks().len() as i64;
    let mut a = vec![Rat::zero(); m.n()];
    for (c, b) in m.blocks().iter().enumerate() {
        // values c * (1 + p + ... ) spread apart; only distinctness matters
        let val = int(c as i64 * (r + 1) + 1) * int(1 + p as i64 * c as i64);
        for &i in b {
            a[i] = val.clone();
        }
    }
    a
}

/// Both r-families: from rho on G and from rho on the centralizer of Y_ss.
pub fn r_descent_families(
    m: &Levi,
    y: &Matrix<Rat>,
    a: &[Rat],
    p: u64,
    depth: usize,
) -> Result<(ExpPolyFamily, ExpPolyFamily)> {
    if !is_regular(a, y, m) {
        return Err(WeightError::NotRegular);
    }
    let direct = rho_all(m, y, p, depth)?;
    let descent = rho_all_descent(m, y, p, depth)?;
    Ok((r_family(m, &direct, a, p)?, r_family(m, &descent, a, p)?))
}

/// r_M^L(A, Y) = r_M^L[A, Y] for every L in L(M).
pub fn r_descent_equal(m: &Levi, y: &Matrix<Rat>, a: &[Rat], p: u64, depth: usize) -> Result<bool> {
    let (r1, r2) = r_descent_families(m, y, a, p, depth)?;
    for l in enumerate_levis(m, None) {
        let q = some_p_inside(&parabolic_over_levi(&l), &l)?;
        if cm_limit(&r1, &q)? != cm_limit(&r2, &q)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::orbits::Partition;

    fn m2(a: [[i64; 2]; 2]) -> Matrix<Rat> {
        Matrix::from_rows(a.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    #[test]
    fn iwasawa_examples() {
        let p = 3;
        let g = Matrix::diag(&[int(3), int(1)]);
        assert_eq!(iwasawa_hp(&g, &Parabolic::upper_borel(2), p).unwrap(), vec![int(-1), int(0)]);
        let g = Matrix::from_rows(vec![vec![int(1), rat(1, 3)], vec![int(0), int(1)]]);
        assert_eq!(iwasawa_hp(&g, &Parabolic::lower_borel(2), p).unwrap(), vec![int(1), int(-1)]);
        let k = m2([[2, 1], [1, 1]]);
        assert_eq!(iwasawa_hp(&k, &Parabolic::upper_borel(2), p).unwrap(), vec![int(0), int(0)]);
    }

    #[test]
    fn rp_regular_nilpotent() {
        let d = OrbitDatum::nilpotent(3, Partition::new(vec![2]).unwrap());
        let ctx = WeightContext::new(&d, None).unwrap();
        let g = Matrix::diag(&[int(1), int(3)]);
        let up = Parabolic::upper_borel(2);
        let low = Parabolic::lower_borel(2);
        assert_eq!(ctx.rp(&up, &g).unwrap(), vec![int(0), int(-1)]);
        assert_eq!(ctx.rp(&low, &g).unwrap(), vec![int(-1), int(0)]);
    }

    #[test]
    fn n_square_closed_form() {
        let m = Levi::torus(2);
        let pb = Parabolic::upper_borel(2);
        let v = m2([[0, 5], [0, 0]]);
        let n = n_square(&[int(7), int(2)], &Matrix::zeros(2, 2), &v, &pb).unwrap();
        assert_eq!(n, Matrix::from_rows(vec![vec![int(1), int(1)], vec![int(0), int(1)]]));
        let n0 = n_square(&[int(7), int(2)], &Matrix::zeros(2, 2), &Matrix::zeros(2, 2), &pb).unwrap();
        assert_eq!(n0, Matrix::identity(2));
        assert!(is_regular(&[int(7), int(2)], &Matrix::zeros(2, 2), &m));
    }

    #[test]
    fn rho_torus_gl2() {
        let m = Levi::torus(2);
        for a in all_roots(&m) {
            let r = rho(a, &m, &Matrix::zeros(2, 2), 2, 8).unwrap();
            assert_eq!(r.rho, int(1));
        }
    }
}
