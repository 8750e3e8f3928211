//! Rational conjugacy classes in gl_n(Q_p): partitions attached to
//! irreducible polynomials, induction from Levi subgroups, standard
//! representatives, the regular locus and the Weyl discriminant.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exactnum::{
    certify_irreducible, fmt_rat, serde_rat, valuation, IrreducibilityError, Matrix, Polynomial,
    Rat, DEFAULT_PRECISION,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrbitError {
    #[error("partition parts must be positive")]
    BadPartition,
    #[error("polynomial {0} is not monic of positive degree")]
    NotMonic(String),
    #[error("polynomial {0} is reducible over Q_{1}")]
    Reducible(String, u64),
    #[error(transparent)]
    Uncertified(#[from] IrreducibilityError),
    #[error("polynomial {0} occurs twice")]
    DuplicatePoly(String),
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("orbits over different primes")]
    MixedPrimes,
    #[error("invalid Levi: {0}")]
    BadLevi(String),
}

// ---------------------------------------------------------------- partitions

/// Jordan block sizes, weakly decreasing.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Sorts the parts; rejects zeros.
    pub fn new(mut parts: Vec<usize>) -> Result<Self, OrbitError> {
        if parts.contains(&0) {
            return Err(OrbitError::BadPartition);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest part (r in the elliptic notation), 0 for the empty partition.
    pub fn largest(&self) -> usize {
        self.0.first().copied().unwrap_or(0)
    }

    pub fn transpose(&self) -> Partition {
        let r = self.largest();
        Partition((1..=r).map(|i| self.0.iter().filter(|&&x| x >= i).count()).collect())
    }

    /// d_j: number of parts equal to j, for each j that occurs.
    pub fn multiplicities(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for &x in &self.0 {
            *m.entry(x).or_insert(0) += 1;
        }
        m
    }

    /// Componentwise sum, shorter partition padded with zeros.
    pub fn add(&self, other: &Partition) -> Partition {
        let len = self.0.len().max(other.0.len());
        let get = |v: &[usize], i: usize| v.get(i).copied().unwrap_or(0);
        Partition((0..len).map(|i| get(&self.0, i) + get(&other.0, i)).collect())
    }

    /// Sum of squares of the transposed parts.
    pub fn transpose_square_sum(&self) -> usize {
        self.transpose().0.iter().map(|x| x * x).sum()
    }

    /// All partitions of n, in reverse lexicographic order.
    pub fn all(n: usize) -> Vec<Partition> {
        fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for k in (1..=n.min(max)).rev() {
                cur.push(k);
                rec(n - k, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = OrbitError;
    fn try_from(v: Vec<usize>) -> Result<Self, OrbitError> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Vec<usize> {
        p.0
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

// --------------------------------------------------------------- polynomials

/// A monic polynomial used as a key of an orbit datum.
///
/// Ordered by degree, then lexicographically on (-c_0, -c_1, ...), so that
/// T - 1 < T - 2.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IrrPoly(Polynomial<Rat>);

impl IrrPoly {
    pub fn new(p: Polynomial<Rat>) -> Result<Self, OrbitError> {
        if !p.is_monic() || p.degree().unwrap_or(0) == 0 {
            return Err(OrbitError::NotMonic(format!("{:?}", p.coeffs())));
        }
        Ok(IrrPoly(p))
    }

    /// T - a.
    pub fn linear(a: Rat) -> Self {
        IrrPoly(Polynomial::linear_root(a))
    }

    pub fn poly(&self) -> &Polynomial<Rat> {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.degree().unwrap()
    }

    /// The root if the polynomial is linear.
    pub fn linear_root(&self) -> Option<Rat> {
        (self.degree() == 1).then(|| -self.0.coeff(0))
    }
}

impl Ord for IrrPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let a: Vec<Rat> = self.0.coeffs().iter().map(|c| -c.clone()).collect();
            let b: Vec<Rat> = other.0.coeffs().iter().map(|c| -c.clone()).collect();
            a.cmp(&b)
        })
    }
}

impl PartialOrd for IrrPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for IrrPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.coeffs().iter().map(fmt_rat).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl fmt::Debug for IrrPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IrrPoly{self}")
    }
}

// -------------------------------------------------------------- orbit datum

/// A rational conjugacy class: irreducible polynomial -> partition.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OrbitDatum {
    p: u64,
    n: usize,
    blocks: BTreeMap<IrrPoly, Partition>,
}

impl OrbitDatum {
    /// Builds and certifies a datum; empty partitions are dropped.
    pub fn new(p: u64, blocks: Vec<(Polynomial<Rat>, Partition)>) -> Result<Self, OrbitError> {
        let mut map = BTreeMap::new();
        for (poly, part) in blocks {
            let key = IrrPoly::new(poly)?;
            if !certify_irreducible(key.poly(), p, DEFAULT_PRECISION)? {
                return Err(OrbitError::Reducible(key.to_string(), p));
            }
            if part.is_empty() {
                continue;
            }
            if map.contains_key(&key) {
                return Err(OrbitError::DuplicatePoly(key.to_string()));
            }
            map.insert(key, part);
        }
        Ok(Self::from_map(p, map))
    }

    /// Trusted constructor (keys already certified).
    pub(crate) fn from_map(p: u64, blocks: BTreeMap<IrrPoly, Partition>) -> Self {
        let n = blocks.iter().map(|(q, l)| q.degree() * l.size()).sum();
        OrbitDatum { p, n, blocks }
    }

    /// Nilpotent orbit with the given Jordan type.
    pub fn nilpotent(p: u64, part: Partition) -> Self {
        let mut m = BTreeMap::new();
        if !part.is_empty() {
            m.insert(IrrPoly::linear(Rat::zero()), part);
        }
        Self::from_map(p, m)
    }

    /// The zero orbit of gl_n.
    pub fn zero(p: u64, n: usize) -> Self {
        Self::nilpotent(p, Partition(vec![1; n]))
    }

    /// Orbit of the scalar a * Id on gl_n, or with a Jordan type for T - a.
    pub fn linear(p: u64, a: Rat, part: Partition) -> Self {
        let mut m = BTreeMap::new();
        m.insert(IrrPoly::linear(a), part);
        Self::from_map(p, m)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&IrrPoly, &Partition)> {
        self.blocks.iter()
    }

    pub fn polys(&self) -> Vec<IrrPoly> {
        self.blocks.keys().cloned().collect()
    }

    pub fn partition(&self, q: &IrrPoly) -> Option<&Partition> {
        self.blocks.get(q)
    }

    pub fn is_nilpotent(&self) -> bool {
        self.blocks.keys().all(|q| q.linear_root().is_some_and(|a| a.is_zero()))
    }

    /// Is every partition of the form (1, ..., 1)?
    pub fn is_semisimple(&self) -> bool {
        self.blocks.values().all(|l| l.largest() <= 1)
    }

    /// Datum of the semisimple part.
    pub fn semisimple_part(&self) -> OrbitDatum {
        let m = self
            .blocks
            .iter()
            .map(|(q, l)| (q.clone(), Partition(vec![1; l.size()])))
            .collect();
        Self::from_map(self.p, m)
    }

    /// Merges orbits on complementary spaces (direct sum of matrices).
    pub fn direct_sum(parts: &[OrbitDatum]) -> Result<OrbitDatum, OrbitError> {
        let p = parts.first().map_or(2, |d| d.p);
        if parts.iter().any(|d| d.p != p) {
            return Err(OrbitError::MixedPrimes);
        }
        let mut m: BTreeMap<IrrPoly, Vec<usize>> = BTreeMap::new();
        for d in parts {
            for (q, l) in &d.blocks {
                m.entry(q.clone()).or_default().extend(&l.0);
            }
        }
        let m = m.into_iter().map(|(q, v)| (q, Partition::new(v).unwrap())).collect();
        Ok(Self::from_map(p, m))
    }
}

#[derive(Serialize, Deserialize)]
struct BlockJson {
    #[serde(with = "serde_rat::vec")]
    poly: Vec<Rat>,
    partition: Partition,
}

#[derive(Serialize, Deserialize)]
struct OrbitJson {
    p: u64,
    n: usize,
    blocks: Vec<BlockJson>,
}

impl Serialize for OrbitDatum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        OrbitJson {
            p: self.p,
            n: self.n,
            blocks: self
                .blocks
                .iter()
                .map(|(q, l)| BlockJson { poly: q.poly().coeffs().to_vec(), partition: l.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OrbitDatum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = OrbitJson::deserialize(d)?;
        let blocks = j.blocks.into_iter().map(|b| (Polynomial::new(b.poly), b.partition)).collect();
        let od = OrbitDatum::new(j.p, blocks).map_err(D::Error::custom)?;
        if od.n != j.n {
            return Err(D::Error::custom(OrbitError::SizeMismatch { expected: j.n, got: od.n }));
        }
        Ok(od)
    }
}

// ---------------------------------------------------------------------- Levi

/// A semi-standard Levi: a set partition of the coordinates {0..n-1}.
///
/// Blocks are kept sorted internally and ordered by their smallest index.
/// JSON uses 1-based indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct Levi {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Levi {
    pub fn new(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self, OrbitError> {
        check_cover(n, &blocks)?;
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort();
        Ok(Levi { n, blocks })
    }

    /// Contiguous blocks of the given sizes.
    pub fn standard(sizes: &[usize]) -> Self {
        let mut blocks = Vec::new();
        let mut s = 0;
        for &k in sizes {
            blocks.push((s..s + k).collect());
            s += k;
        }
        Levi { n: s, blocks }
    }

    pub fn torus(n: usize) -> Self {
        Self::standard(&vec![1; n])
    }

    pub fn full(n: usize) -> Self {
        Self::standard(&[n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// dim a_M^G = number of blocks - 1.
    pub fn rank(&self) -> usize {
        self.blocks.len() - 1
    }

    /// Index of the block holding coordinate i.
    pub fn block_of(&self, i: usize) -> usize {
        self.blocks.iter().position(|b| b.contains(&i)).expect("coordinate out of range")
    }

    /// Does `self` contain `other` as a subgroup?
    pub fn contains(&self, other: &Levi) -> bool {
        self.n == other.n
            && other.blocks.iter().all(|b| {
                let k = self.block_of(b[0]);
                b.iter().all(|&i| self.blocks[k].contains(&i))
            })
    }

    /// Image under the coordinate permutation i -> perm[i].
    pub fn permuted(&self, perm: &[usize]) -> Levi {
        Levi::new(self.n, self.blocks.iter().map(|b| b.iter().map(|&i| perm[i]).collect()).collect())
            .unwrap()
    }

    /// All Levis containing `self`, i.e. coarsenings of its block partition.
    pub fn overgroups(&self) -> Vec<Levi> {
        set_partitions(self.blocks.len())
            .into_iter()
            .map(|groups| {
                let blocks = groups
                    .iter()
                    .map(|g| g.iter().flat_map(|&b| self.blocks[b].iter().copied()).collect())
                    .collect();
                Levi::new(self.n, blocks).unwrap()
            })
            .collect()
    }
}

pub(crate) fn check_cover(n: usize, blocks: &[Vec<usize>]) -> Result<(), OrbitError> {
    let mut seen = vec![false; n];
    for b in blocks {
        if b.is_empty() {
            return Err(OrbitError::BadLevi("empty block".into()));
        }
        for &i in b {
            if i >= n || seen[i] {
                return Err(OrbitError::BadLevi(format!("index {} repeated or out of range", i + 1)));
            }
            seen[i] = true;
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(OrbitError::BadLevi("blocks do not cover all coordinates".into()));
    }
    Ok(())
}

/// All set partitions of {0..m-1}.
pub(crate) fn set_partitions(m: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = vec![Vec::new()];
    for x in 0..m {
        let mut next = Vec::new();
        for sp in &out {
            for k in 0..sp.len() {
                let mut s: Vec<Vec<usize>> = sp.clone();
                s[k].push(x);
                next.push(s);
            }
            let mut s = sp.clone();
            s.push(vec![x]);
            next.push(s);
        }
        out = next;
    }
    out
}

impl TryFrom<Vec<Vec<usize>>> for Levi {
    type Error = OrbitError;
    fn try_from(v: Vec<Vec<usize>>) -> Result<Self, OrbitError> {
        let n = v.iter().map(Vec::len).sum();
        if v.iter().flatten().any(|&i| i == 0) {
            return Err(OrbitError::BadLevi("indices are 1-based".into()));
        }
        Levi::new(n, v.into_iter().map(|b| b.into_iter().map(|i| i - 1).collect()).collect())
    }
}

impl From<Levi> for Vec<Vec<usize>> {
    fn from(l: Levi) -> Self {
        l.blocks.into_iter().map(|b| b.into_iter().map(|i| i + 1).collect()).collect()
    }
}

// --------------------------------------------------------------- operations

/// Lusztig-Spaltenstein induction from a Levi; `orbits[b]` lives on
/// `levi.blocks()[b]`.
///
/// For gl_n the induced class is computed polynomial by polynomial: the
/// partitions of the pieces add up componentwise.
pub fn induce_orbit(levi: &Levi, orbits: &[OrbitDatum]) -> Result<OrbitDatum, OrbitError> {
    if orbits.len() != levi.blocks.len() {
        return Err(OrbitError::SizeMismatch { expected: levi.blocks.len(), got: orbits.len() });
    }
    for (b, d) in levi.blocks.iter().zip(orbits) {
        if b.len() != d.n {
            return Err(OrbitError::SizeMismatch { expected: b.len(), got: d.n });
        }
    }
    let p = orbits[0].p;
    if orbits.iter().any(|d| d.p != p) {
        return Err(OrbitError::MixedPrimes);
    }
    let mut acc: BTreeMap<IrrPoly, Partition> = BTreeMap::new();
    for d in orbits {
        for (q, l) in &d.blocks {
            let e = acc.entry(q.clone()).or_default();
            *e = e.add(l);
        }
    }
    Ok(OrbitDatum::from_map(p, acc))
}

/// Dimension of the centralizer of an element of the class, which is its
/// codimension in gl_n.
pub fn centralizer_dim(d: &OrbitDatum) -> usize {
    d.blocks.iter().map(|(q, l)| q.degree() * l.transpose_square_sum()).sum()
}

/// Codimension of a class of a Levi (one datum per block) inside that Levi.
pub fn orbit_codim(orbits: &[OrbitDatum]) -> usize {
    orbits.iter().map(centralizer_dim).sum()
}

/// One E-block of the standard basis: the chunk of `deg p` coordinates
/// indexed by (poly, i, j, k).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EBlock {
    /// Position of the polynomial in the datum's order.
    pub poly: usize,
    /// Level inside the chain, 1..=j.
    pub i: usize,
    /// Chain length (a part of the partition).
    pub j: usize,
    /// Copy index among the d_j chains of length j, 1..=d_j.
    pub k: usize,
    pub start: usize,
    pub len: usize,
}

/// The ordered basis of the standard representative, grouped in E-blocks:
/// polynomials in increasing order, then i ascending, j descending,
/// k ascending, and the deg p coordinates of each E-block last.
pub fn standard_layout(d: &OrbitDatum) -> Vec<EBlock> {
    let mut out = Vec::new();
    let mut start = 0;
    for (pi, (q, l)) in d.blocks.iter().enumerate() {
        let deg = q.degree();
        let mult = l.multiplicities();
        for i in 1..=l.largest() {
            for (&j, &dj) in mult.iter().rev() {
                if j < i {
                    continue;
                }
                for k in 1..=dj {
                    out.push(EBlock { poly: pi, i, j, k, start, len: deg });
                    start += deg;
                }
            }
        }
    }
    out
}

/// The standard representative: companion blocks on the diagonal, identity
/// blocks sending the chain level i to level i - 1.
pub fn standard_representative(d: &OrbitDatum) -> Matrix<Rat> {
    let layout = standard_layout(d);
    let polys = d.polys();
    let mut x = Matrix::zeros(d.n, d.n);
    for e in &layout {
        let c = polys[e.poly].poly().companion();
        for a in 0..e.len {
            for b in 0..e.len {
                x[(e.start + a, e.start + b)] = c[(a, b)].clone();
            }
        }
        if e.i > 1 {
            let below = layout
                .iter()
                .find(|f| f.poly == e.poly && f.i == e.i - 1 && f.j == e.j && f.k == e.k)
                .unwrap();
            for a in 0..e.len {
                x[(below.start + a, e.start + a)] = Rat::one();
            }
        }
    }
    x
}

/// Semisimple part of the standard representative (companion blocks only).
pub fn standard_semisimple(d: &OrbitDatum) -> Matrix<Rat> {
    let polys = d.polys();
    let blocks: Vec<Matrix<Rat>> = standard_layout(d)
        .iter()
        .map(|e| polys[e.poly].poly().companion())
        .collect();
    if blocks.is_empty() {
        return Matrix::zeros(0, 0);
    }
    Matrix::block_diag(&blocks)
}

/// Jordan type of x at the irreducible factor q, read off from
/// dim ker q(x)^k = deg q * sum_i min(lambda_i, k).
pub fn partition_at(x: &Matrix<Rat>, q: &IrrPoly) -> Partition {
    let n = x.rows();
    let deg = q.degree();
    let qx = q.poly().eval_matrix(x);
    let mut dims = vec![0usize];
    let mut pw = Matrix::identity(n);
    loop {
        pw = &pw * &qx;
        let dk = (n - pw.rank()) / deg;
        if dk == *dims.last().unwrap() {
            break;
        }
        dims.push(dk);
    }
    // number of parts >= k is dims[k] - dims[k-1]
    let ge: Vec<usize> = dims.windows(2).map(|w| w[1] - w[0]).collect();
    let mut parts = Vec::new();
    for (k, &c) in ge.iter().enumerate() {
        let next = ge.get(k + 1).copied().unwrap_or(0);
        parts.extend(std::iter::repeat_n(k + 1, c - next));
    }
    Partition::new(parts).unwrap()
}

/// Recovers the datum of x given the candidate irreducible factors; fails
/// if they do not account for all of x.
pub fn jordan_datum(x: &Matrix<Rat>, p: u64, polys: &[IrrPoly]) -> Result<OrbitDatum, OrbitError> {
    let mut m = BTreeMap::new();
    for q in polys {
        let l = partition_at(x, q);
        if !l.is_empty() {
            m.insert(q.clone(), l);
        }
    }
    let d = OrbitDatum::from_map(p, m);
    if d.n != x.rows() {
        return Err(OrbitError::SizeMismatch { expected: x.rows(), got: d.n });
    }
    Ok(d)
}

/// Places block matrices on the coordinates of a Levi.
pub fn levi_embed(levi: &Levi, mats: &[Matrix<Rat>]) -> Matrix<Rat> {
    let mut out = Matrix::zeros(levi.n, levi.n);
    for (b, m) in levi.blocks.iter().zip(mats) {
        for (a, &i) in b.iter().enumerate() {
            for (c, &j) in b.iter().enumerate() {
                out[(i, j)] = m[(a, c)].clone();
            }
        }
    }
    out
}

/// Is A regular for the class (i.e. does A + Y_ss have its centralizer in M)?
///
/// Tested through resultants: for blocks a != b and factors p_i on a,
/// p_j on b, Res_X(p_i(X), p_j(X + a_a - a_b)) must not vanish.
pub fn regular_locus_test(levi: &Levi, orbits: &[OrbitDatum], a: &[Rat]) -> bool {
    assert_eq!(orbits.len(), levi.blocks.len());
    assert_eq!(a.len(), levi.blocks.len());
    for x in 0..orbits.len() {
        for y in 0..orbits.len() {
            if x == y {
                continue;
            }
            let t = &a[x] - &a[y];
            for pi in orbits[x].blocks.keys() {
                for pj in orbits[y].blocks.keys() {
                    let shifted = pj.poly().shift(&t);
                    if pi.poly().resultant(&shifted).unwrap().is_zero() {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// The matrix of ad x on gl_n in the basis of matrix units.
pub fn ad_matrix(x: &Matrix<Rat>) -> Matrix<Rat> {
    let n = x.rows();
    let mut s = Matrix::zeros(n * n, n * n);
    // [x, E_kl] = sum_i x_ik E_il - sum_j x_lj E_kj
    for k in 0..n {
        for l in 0..n {
            let col = k * n + l;
            for i in 0..n {
                if !x[(i, k)].is_zero() {
                    s[(i * n + l, col)] += &x[(i, k)];
                }
            }
            for j in 0..n {
                if !x[(l, j)].is_zero() {
                    s[(k * n + j, col)] -= &x[(l, j)];
                }
            }
        }
    }
    s
}

/// Jordan-Chevalley semisimple part, by Newton iteration on the
/// squarefree part of the characteristic polynomial.
pub fn semisimple_part(x: &Matrix<Rat>) -> Matrix<Rat> {
    let chi = x.charpoly();
    let g = chi.gcd(&chi.derivative());
    let s = chi.divrem(&g).0;
    let ds = s.derivative();
    let mut y = x.clone();
    loop {
        let sy = s.eval_matrix(&y);
        if sy.is_zero() {
            return y;
        }
        let inv = ds.eval_matrix(&y).inverse().expect("s'(y) invertible");
        y = &y - &(&sy * &inv);
    }
}

/// val_p of |D(X)|^{1/2}: half the valuation of det(ad X_ss) on
/// g / g_{X_ss}.
pub fn weyl_discriminant_val(x: &Matrix<Rat>, p: u64) -> Rat {
    let s = semisimple_part(x);
    let chi = ad_matrix(&s).charpoly();
    // strip the factor T^m coming from the centralizer
    let lowest = chi.coeffs().iter().position(|c| !c.is_zero()).unwrap();
    let c = chi.coeff(lowest);
    let v = valuation(&c, p).expect("nonzero by construction");
    Rat::new(v.into(), 2.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn partitions() {
        assert_eq!(Partition::all(4).len(), 5);
        assert_eq!(part(&[3, 1]).transpose(), part(&[2, 1, 1]));
        assert_eq!(part(&[2]).add(&part(&[1, 1])), part(&[3, 1]));
    }

    #[test]
    fn poly_order() {
        let a = IrrPoly::linear(int(1));
        let b = IrrPoly::linear(int(2));
        let z = IrrPoly::linear(int(0));
        assert!(z < a && a < b);
        let quad = IrrPoly::new(Polynomial::new(vec![int(1), int(0), int(1)])).unwrap();
        assert!(b < quad);
    }

    #[test]
    fn induction_examples() {
        let z1 = OrbitDatum::zero(3, 1);
        let d = induce_orbit(&Levi::torus(2), &[z1.clone(), z1.clone()]).unwrap();
        assert_eq!(d, OrbitDatum::nilpotent(3, part(&[2])));
        let z2 = OrbitDatum::zero(3, 2);
        let d = induce_orbit(&Levi::standard(&[2, 1]), &[z2, z1]).unwrap();
        assert_eq!(d, OrbitDatum::nilpotent(3, part(&[2, 1])));
        let g = OrbitDatum::nilpotent(3, part(&[2, 1]));
        assert_eq!(induce_orbit(&Levi::full(3), std::slice::from_ref(&g)).unwrap(), g);
    }

    #[test]
    fn codims() {
        assert_eq!(centralizer_dim(&OrbitDatum::zero(2, 2)), 4);
        assert_eq!(centralizer_dim(&OrbitDatum::nilpotent(2, part(&[2]))), 2);
        let quad = Polynomial::new(vec![int(1), int(0), int(1)]);
        let d = OrbitDatum::new(3, vec![(quad, part(&[1]))]).unwrap();
        assert_eq!(centralizer_dim(&d), 2);
        let x = standard_representative(&d);
        assert_eq!(ad_matrix(&x).rank(), 4 - 2);
    }

    #[test]
    fn standard_reps() {
        let x = standard_representative(&OrbitDatum::nilpotent(2, part(&[2])));
        assert_eq!(x, Matrix::unit(2, 0, 1));
        let d = OrbitDatum::new(
            5,
            vec![
                (Polynomial::linear_root(int(2)), part(&[1])),
                (Polynomial::linear_root(int(1)), part(&[1])),
            ],
        )
        .unwrap();
        assert_eq!(standard_representative(&d), Matrix::diag(&[int(1), int(2)]));
        // e^1_{1,2}, e^1_{1,1}, e^2_{1,2}: the chain of length 2 occupies
        // coordinates 0 and 2
        let d = OrbitDatum::nilpotent(2, part(&[2, 1]));
        assert_eq!(standard_representative(&d), Matrix::unit(3, 0, 2));
    }

    #[test]
    fn round_trip() {
        let quad = Polynomial::new(vec![int(-2), int(0), int(1)]);
        let d = OrbitDatum::new(
            5,
            vec![(quad, part(&[2, 1])), (Polynomial::linear_root(rat(1, 2)), part(&[3, 3, 1]))],
        )
        .unwrap();
        let x = standard_representative(&d);
        assert_eq!(jordan_datum(&x, 5, &d.polys()).unwrap(), d);
        let chi = d
            .blocks()
            .fold(Polynomial::constant(int(1)), |acc, (q, l)| &acc * &q.poly().pow(l.size() as u32));
        assert_eq!(x.charpoly(), chi);
    }

    #[test]
    fn regular_locus() {
        let z = OrbitDatum::zero(3, 1);
        let t = Levi::torus(2);
        assert!(regular_locus_test(&t, &[z.clone(), z.clone()], &[int(1), int(2)]));
        assert!(!regular_locus_test(&t, &[z.clone(), z], &[int(1), int(1)]));
        let o1 = OrbitDatum::linear(3, int(1), part(&[1]));
        let o2 = OrbitDatum::linear(3, int(2), part(&[1]));
        assert!(!regular_locus_test(&t, &[o1, o2], &[int(1), int(0)]));
    }

    #[test]
    fn discriminant() {
        let n = Matrix::unit(2, 0, 1);
        assert_eq!(weyl_discriminant_val(&n, 3), int(0));
        let x = Matrix::diag(&[int(1), int(4)]);
        assert_eq!(weyl_discriminant_val(&x, 3), int(1));
        let y = &Matrix::diag(&[int(1), int(1), int(4)]) + &Matrix::unit(3, 0, 1);
        assert_eq!(semisimple_part(&y), Matrix::diag(&[int(1), int(1), int(4)]));
        // roots 1,1,4: pairs (1,4) twice each direction: val = 4 * 1 / 2
        assert_eq!(weyl_discriminant_val(&y, 3), int(2));
    }

    #[test]
    fn json() {
        let d = OrbitDatum::nilpotent(3, part(&[2, 1]));
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, r#"{"p":3,"n":3,"blocks":[{"poly":["0","1"],"partition":[2,1]}]}"#);
        let back: OrbitDatum = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
        let l: Levi = serde_json::from_str("[[3],[1,2]]").unwrap();
        assert_eq!(l, Levi::standard(&[2, 1]));
    }
}
