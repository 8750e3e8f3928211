//! Semi-standard parabolics of GL_n as ordered coordinate blocks, the
//! epsilon tables, the generalized Richardson and Lusztig-Spaltenstein
//! sets of a class, the map (R) and the permutations w_P.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::exactnum::{Matrix, Rat};
use crate::orbits::{
    check_cover, induce_orbit, jordan_datum, set_partitions, standard_layout,
    standard_representative, standard_semisimple, EBlock, Levi, OrbitDatum, OrbitError, Partition,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParaError {
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error("not a permutation of 1..{0}")]
    BadPermutation(usize),
    #[error("permuted table leaves the epsilon set")]
    NotInE,
    #[error("Levi is not the Levi factor of a Richardson parabolic of the class")]
    NotRichardsonLevi,
    #[error("parabolic does not contain the Levi")]
    NotContaining,
    #[error("polynomial not present in the class")]
    UnknownPoly,
}

// ---------------------------------------------------------------- permutations

/// A permutation of {0..n-1}, acting on basis vectors by e_a -> e_{img[a]}.
/// JSON: the 1-based image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn new(img: Vec<usize>) -> Result<Self, ParaError> {
        let n = img.len();
        let mut seen = vec![false; n];
        for &i in &img {
            if i >= n || seen[i] {
                return Err(ParaError::BadPermutation(n));
            }
            seen[i] = true;
        }
        Ok(Perm(img))
    }

    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// Transposition of a and b.
    pub fn swap(n: usize, a: usize, b: usize) -> Self {
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(a, b);
        Perm(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn inverse(&self) -> Perm {
        let mut v = vec![0; self.0.len()];
        for (a, &b) in self.0.iter().enumerate() {
            v[b] = a;
        }
        Perm(v)
    }

    /// (self * other)(a) = self(other(a)).
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&a| self.0[a]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(a, &b)| a == b)
    }

    /// Permutation matrix with w e_a = e_{img[a]}.
    pub fn matrix(&self) -> Matrix<Rat> {
        let n = self.0.len();
        let mut m = Matrix::zeros(n, n);
        for (a, &b) in self.0.iter().enumerate() {
            m[(b, a)] = Rat::from_integer(1.into());
        }
        m
    }

    /// All permutations of {0..n-1} in lexicographic order.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Perm(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                return out;
            };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
    }
}

impl TryFrom<Vec<usize>> for Perm {
    type Error = ParaError;
    fn try_from(v: Vec<usize>) -> Result<Self, ParaError> {
        let n = v.len();
        if v.contains(&0) {
            return Err(ParaError::BadPermutation(n));
        }
        Perm::new(v.into_iter().map(|i| i - 1).collect())
    }
}

impl From<Perm> for Vec<usize> {
    fn from(p: Perm) -> Vec<usize> {
        p.0.into_iter().map(|i| i + 1).collect()
    }
}

// ------------------------------------------------------------------ parabolics

/// Stabilizer of the flag V_1 < V_2 < ... where V_k is spanned by the
/// coordinates in the first k blocks.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct Parabolic {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Parabolic {
    pub fn new(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self, ParaError> {
        check_cover(n, &blocks)?;
        for b in &mut blocks {
            b.sort_unstable();
        }
        Ok(Parabolic { n, blocks })
    }

    /// Block upper triangular with the given block sizes.
    pub fn standard(sizes: &[usize]) -> Self {
        let l = Levi::standard(sizes);
        Parabolic { n: l.n(), blocks: l.blocks().to_vec() }
    }

    pub fn upper_borel(n: usize) -> Self {
        Self::standard(&vec![1; n])
    }

    pub fn lower_borel(n: usize) -> Self {
        Self::upper_borel(n).opposite()
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

    pub fn levi(&self) -> Levi {
        Levi::new(self.n, self.blocks.clone()).unwrap()
    }

    /// Flag step of every coordinate.
    pub fn steps(&self) -> Vec<usize> {
        let mut s = vec![0; self.n];
        for (k, b) in self.blocks.iter().enumerate() {
            for &i in b {
                s[i] = k;
            }
        }
        s
    }

    /// The opposite parabolic (same Levi, reversed flag).
    pub fn opposite(&self) -> Self {
        let mut b = self.blocks.clone();
        b.reverse();
        Parabolic { n: self.n, blocks: b }
    }

    /// Is `other` a subgroup of `self`? True when every block of `self` is
    /// a union of consecutive blocks of `other`.
    pub fn contains(&self, other: &Parabolic) -> bool {
        if self.n != other.n {
            return false;
        }
        let mut it = other.blocks.iter();
        for b in &self.blocks {
            let mut acc: Vec<usize> = Vec::new();
            while acc.len() < b.len() {
                match it.next() {
                    Some(c) => acc.extend(c),
                    None => return false,
                }
            }
            acc.sort_unstable();
            if &acc != b {
                return false;
            }
        }
        true
    }

    /// Does the Levi `m` sit inside this parabolic's Levi?
    pub fn contains_levi(&self, m: &Levi) -> bool {
        self.levi().contains(m)
    }

    /// (Ad w) P for the permutation w: e_a -> e_{w(a)}.
    pub fn conjugate(&self, w: &Perm) -> Self {
        let blocks = self.blocks.iter().map(|b| b.iter().map(|&i| w.apply(i)).collect()).collect();
        Parabolic::new(self.n, blocks).unwrap()
    }

    /// Is x in the Lie algebra of P?
    pub fn contains_matrix(&self, x: &Matrix<Rat>) -> bool {
        let s = self.steps();
        (0..self.n).all(|a| (0..self.n).all(|b| s[a] <= s[b] || x[(a, b)].is_zero()))
    }

    /// Is x in the nilradical n_P?
    pub fn nilradical_contains(&self, x: &Matrix<Rat>) -> bool {
        let s = self.steps();
        (0..self.n).all(|a| (0..self.n).all(|b| s[a] < s[b] || x[(a, b)].is_zero()))
    }

    /// If P and other are adjacent parabolics with the same Levi, the step
    /// k such that other is P with blocks k and k+1 swapped.
    pub fn adjacency(&self, other: &Parabolic) -> Option<usize> {
        if self.blocks.len() != other.blocks.len() || self.blocks.len() < 2 {
            return None;
        }
        let diff: Vec<usize> =
            (0..self.blocks.len()).filter(|&k| self.blocks[k] != other.blocks[k]).collect();
        match diff[..] {
            [k, k1] if k1 == k + 1
                && self.blocks[k] == other.blocks[k1]
                && self.blocks[k1] == other.blocks[k] =>
            {
                Some(k)
            }
            _ => None,
        }
    }

    /// Merges steps k and k+1.
    pub fn merge(&self, k: usize) -> Parabolic {
        let mut blocks = self.blocks.clone();
        let b = blocks.remove(k + 1);
        blocks[k].extend(b);
        Parabolic::new(self.n, blocks).unwrap()
    }
}

impl TryFrom<Vec<Vec<usize>>> for Parabolic {
    type Error = ParaError;
    fn try_from(v: Vec<Vec<usize>>) -> Result<Self, ParaError> {
        let n = v.iter().map(Vec::len).sum();
        if v.iter().flatten().any(|&i| i == 0) {
            return Err(OrbitError::BadLevi("indices are 1-based".into()).into());
        }
        Parabolic::new(n, v.into_iter().map(|b| b.into_iter().map(|i| i - 1).collect()).collect())
    }
}

impl From<Parabolic> for Vec<Vec<usize>> {
    fn from(p: Parabolic) -> Self {
        p.blocks.into_iter().map(|b| b.into_iter().map(|i| i + 1).collect()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParaKind {
    /// Parabolics with Levi factor exactly M.
    P,
    /// Parabolics containing M.
    F,
}

/// P^H(M) or F^H(M) where H = Q (given) or G.
pub fn enumerate_parabolics(m: &Levi, kind: ParaKind, ambient: Option<&Parabolic>) -> Vec<Parabolic> {
    let nb = m.blocks().len();
    let groupings: Vec<Vec<Vec<usize>>> = match kind {
        ParaKind::P => Perm::all(nb).into_iter().map(|w| w.0.into_iter().map(|b| vec![b]).collect()).collect(),
        ParaKind::F => set_partitions(nb)
            .into_iter()
            .flat_map(|sp| {
                Perm::all(sp.len())
                    .into_iter()
                    .map(move |w| w.0.iter().map(|&g| sp[g].clone()).collect::<Vec<_>>())
            })
            .collect(),
    };
    let mut out: Vec<Parabolic> = groupings
        .into_iter()
        .map(|g| {
            let blocks = g
                .iter()
                .map(|grp| grp.iter().flat_map(|&b| m.blocks()[b].iter().copied()).collect())
                .collect();
            Parabolic::new(m.n(), blocks).unwrap()
        })
        .filter(|p| ambient.is_none_or(|q| q.contains(p)))
        .collect();
    out.sort();
    out
}

/// L^G(M), or L^L'(M) when an ambient Levi is given.
pub fn enumerate_levis(m: &Levi, ambient: Option<&Levi>) -> Vec<Levi> {
    let mut v: Vec<Levi> =
        m.overgroups().into_iter().filter(|l| ambient.is_none_or(|a| a.contains(l))).collect();
    v.sort();
    v
}

/// For P in P(M) and L containing M, the unique element of P(L)
/// containing P.
pub fn parabolic_over(p: &Parabolic, l: &Levi) -> Parabolic {
    // order the L blocks by the first P step they meet
    let s = p.steps();
    let mut blocks: Vec<Vec<usize>> = l.blocks().to_vec();
    blocks.sort_by_key(|b| b.iter().map(|&i| s[i]).min().unwrap());
    let q = Parabolic::new(p.n(), blocks).unwrap();
    debug_assert!(q.contains(p));
    q
}

/// Some P in P(M) contained in Q (M blocks sorted inside each step).
pub fn some_p_inside(q: &Parabolic, m: &Levi) -> Result<Parabolic, ParaError> {
    if !q.contains_levi(m) {
        return Err(ParaError::NotContaining);
    }
    let mut blocks = Vec::new();
    for b in q.blocks() {
        let mut inner: Vec<Vec<usize>> =
            m.blocks().iter().filter(|c| b.contains(&c[0])).cloned().collect();
        inner.sort();
        blocks.extend(inner);
    }
    Ok(Parabolic::new(q.n(), blocks).unwrap())
}

// -------------------------------------------------------------- epsilon tables

/// epsilon: {1..r} x J -> {0,1}, stored row by row with J ascending.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct EpsilonTable {
    pub r: usize,
    #[serde(rename = "J")]
    pub js: Vec<usize>,
    pub rows: Vec<Vec<u8>>,
}

impl EpsilonTable {
    pub fn get(&self, k: usize, jidx: usize) -> bool {
        self.rows[k][jidx] == 1
    }

    /// Column sums equal j and rows increase with j.
    pub fn is_valid(&self) -> bool {
        self.rows.len() == self.r
            && self.rows.iter().all(|row| row.len() == self.js.len() && row.windows(2).all(|w| w[0] <= w[1]))
            && self
                .js
                .iter()
                .enumerate()
                .all(|(c, &j)| self.rows.iter().map(|row| row[c] as usize).sum::<usize>() == j)
    }

    /// sum_{l <= k} epsilon_{l,j} (k is 0-based, inclusive).
    pub fn level(&self, k: usize, jidx: usize) -> usize {
        (0..=k).filter(|&l| self.get(l, jidx)).count()
    }

    /// Number of E-blocks in the k-th step for the given multiplicities.
    pub fn step_rank(&self, k: usize, mult: &BTreeMap<usize, usize>) -> usize {
        self.js.iter().enumerate().filter(|&(c, _)| self.get(k, c)).map(|(_, j)| mult[j]).sum()
    }
}

/// All epsilon tables of a partition: for each part size j a set S_j of
/// j rows, nested increasingly in j.
pub fn epsilon_tables(part: &Partition) -> Vec<EpsilonTable> {
    let r = part.largest();
    let js: Vec<usize> = part.multiplicities().keys().copied().collect();
    let mut out = Vec::new();
    fn rec(js: &[usize], c: usize, r: usize, cols: &mut Vec<Vec<bool>>, out: &mut Vec<Vec<Vec<bool>>>) {
        if c == js.len() {
            out.push(cols.clone());
            return;
        }
        let prev: Vec<bool> = if c == 0 { vec![false; r] } else { cols[c - 1].clone() };
        let have = prev.iter().filter(|&&b| b).count();
        let free: Vec<usize> = (0..r).filter(|&k| !prev[k]).collect();
        for extra in combinations(&free, js[c] - have) {
            let mut col = prev.clone();
            for k in extra {
                col[k] = true;
            }
            cols.push(col);
            rec(js, c + 1, r, cols, out);
            cols.pop();
        }
    }
    let mut raw = Vec::new();
    rec(&js, 0, r, &mut Vec::new(), &mut raw);
    for cols in raw {
        let rows = (0..r).map(|k| cols.iter().map(|col| col[k] as u8).collect()).collect();
        out.push(EpsilonTable { r, js: js.clone(), rows });
    }
    out.sort();
    out
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

/// Tables of the polynomial `poly` of the class.
pub fn epsilon_set(d: &OrbitDatum, poly: usize) -> Result<Vec<EpsilonTable>, ParaError> {
    let polys = d.polys();
    let q = polys.get(poly).ok_or(ParaError::UnknownPoly)?;
    Ok(epsilon_tables(d.partition(q).unwrap()))
}

/// sigma(eps)(k, j) = eps(sigma^{-1}(k), j).
pub fn sr_action(sigma: &Perm, eps: &EpsilonTable) -> Result<EpsilonTable, ParaError> {
    if sigma.len() != eps.r {
        return Err(ParaError::BadPermutation(eps.r));
    }
    let inv = sigma.inverse();
    let rows = (0..eps.r).map(|k| eps.rows[inv.apply(k)].clone()).collect();
    let out = EpsilonTable { r: eps.r, js: eps.js.clone(), rows };
    if !out.is_valid() {
        return Err(ParaError::NotInE);
    }
    Ok(out)
}

// ------------------------------------------------------------ Richardson sets

/// A generalized Richardson parabolic together with its combinatorial
/// description: the order in which the polynomials contribute steps, and
/// one epsilon table per polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RElement {
    pub word: Vec<usize>,
    pub tables: Vec<EpsilonTable>,
    pub parabolic: Parabolic,
}

/// Polynomial index of each coordinate of the standard basis.
pub fn coordinate_polys(d: &OrbitDatum) -> Vec<usize> {
    let mut v = vec![0; d.n()];
    for e in standard_layout(d) {
        for a in e.start..e.start + e.len {
            v[a] = e.poly;
        }
    }
    v
}

fn flag_of(d: &OrbitDatum, layout: &[EBlock], word: &[usize], tables: &[EpsilonTable]) -> Parabolic {
    let polys = d.polys();
    let mut seen = vec![0usize; polys.len()];
    let mut blocks = Vec::new();
    for &pi in word {
        let k = seen[pi];
        seen[pi] += 1;
        let t = &tables[pi];
        let mut cell = Vec::new();
        for (c, &j) in t.js.iter().enumerate() {
            if !t.get(k, c) {
                continue;
            }
            let i = t.level(k, c);
            for e in layout.iter().filter(|e| e.poly == pi && e.j == j && e.i == i) {
                cell.extend(e.start..e.start + e.len);
            }
        }
        blocks.push(cell);
    }
    Parabolic::new(d.n(), blocks).unwrap()
}

/// Words with r_p copies of each letter p, in lexicographic order.
fn interleavings(counts: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = counts.iter().sum();
    let mut out = Vec::new();
    fn rec(counts: &mut Vec<usize>, total: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == total {
            out.push(cur.clone());
            return;
        }
        for p in 0..counts.len() {
            if counts[p] > 0 {
                counts[p] -= 1;
                cur.push(p);
                rec(counts, total, cur, out);
                cur.pop();
                counts[p] += 1;
            }
        }
    }
    rec(&mut counts.to_vec(), total, &mut Vec::new(), &mut out);
    out
}

/// The set R^G(X) for the standard representative X of the class, with
/// the combinatorial label of each element.
pub fn richardson_elements(d: &OrbitDatum) -> Vec<RElement> {
    let layout = standard_layout(d);
    let parts: Vec<Partition> = d.blocks().map(|(_, l)| l.clone()).collect();
    let per_poly: Vec<Vec<EpsilonTable>> = parts.iter().map(epsilon_tables).collect();
    let counts: Vec<usize> = parts.iter().map(Partition::largest).collect();
    let mut out = Vec::new();
    for word in interleavings(&counts) {
        let mut choice = vec![0usize; per_poly.len()];
        loop {
            let tables: Vec<EpsilonTable> =
                choice.iter().enumerate().map(|(pi, &c)| per_poly[pi][c].clone()).collect();
            let parabolic = flag_of(d, &layout, &word, &tables);
            out.push(RElement { word: word.clone(), tables, parabolic });
            // odometer over table choices
            let mut pos = 0;
            loop {
                if pos == choice.len() {
                    break;
                }
                choice[pos] += 1;
                if choice[pos] < per_poly[pos].len() {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
            if pos == choice.len() {
                break;
            }
        }
    }
    out
}

pub fn richardson_set(d: &OrbitDatum) -> Vec<Parabolic> {
    richardson_elements(d).into_iter().map(|e| e.parabolic).collect()
}

/// Distinct Levi factors of elements of R^G(X).
pub fn richardson_levis(d: &OrbitDatum) -> Vec<Levi> {
    let mut v: Vec<Levi> = richardson_set(d).iter().map(Parabolic::levi).collect();
    v.sort();
    v.dedup();
    v
}

/// (polynomial, size) of each step.
fn labels(cp: &[usize], p: &Parabolic) -> Vec<(usize, usize)> {
    p.blocks().iter().map(|b| (cp[b[0]], b.len())).collect()
}

/// Context for the maps (R), (LS) and the permutations w_P relative to a
/// fixed class and a fixed Richardson Levi M_R.
pub struct RichardsonContext {
    d: OrbitDatum,
    cp: Vec<usize>,
    m_r: Levi,
    by_label: HashMap<Vec<(usize, usize)>, Parabolic>,
}

impl RichardsonContext {
    pub fn new(d: &OrbitDatum, m_r: &Levi) -> Result<Self, ParaError> {
        let cp = coordinate_polys(d);
        let rs = richardson_set(d);
        if !rs.iter().any(|p| &p.levi() == m_r) {
            return Err(ParaError::NotRichardsonLevi);
        }
        let by_label = rs.into_iter().map(|p| (labels(&cp, &p), p)).collect();
        Ok(RichardsonContext { d: d.clone(), cp, m_r: m_r.clone(), by_label })
    }

    /// Context for the first Richardson parabolic's Levi.
    pub fn first(d: &OrbitDatum) -> Self {
        let m = richardson_set(d)[0].levi();
        Self::new(d, &m).unwrap()
    }

    pub fn datum(&self) -> &OrbitDatum {
        &self.d
    }

    pub fn m_r(&self) -> &Levi {
        &self.m_r
    }

    pub fn coordinate_polys(&self) -> &[usize] {
        &self.cp
    }

    /// The map (R): P in P(M_R) to the element of R^G(X) conjugate to it
    /// under G_{X_ss}.
    pub fn r_map(&self, p: &Parabolic) -> Result<Parabolic, ParaError> {
        if p.levi() != self.m_r {
            return Err(ParaError::NotContaining);
        }
        self.by_label.get(&labels(&self.cp, p)).cloned().ok_or(ParaError::NotRichardsonLevi)
    }

    /// Canonical w_Q for Q in F(M_R): the permutation in W^{G,X} mapping
    /// (Ad w_Q^{-1}) Q onto Q, order-preserving on each (step, polynomial)
    /// piece. This is the lexicographically least member of its coset.
    pub fn w(&self, q: &Parabolic) -> Result<Perm, ParaError> {
        let p = some_p_inside(q, &self.m_r)?;
        let pt = self.r_map(&p)?;
        let wp = order_preserving(&pt, &p, &self.cp);
        if q.blocks().len() == p.blocks().len() {
            return Ok(wp);
        }
        let qt = q.conjugate(&wp.inverse());
        Ok(order_preserving(&qt, q, &self.cp))
    }

    /// The map (LS): Q -> (Ad w_Q^{-1}) Q.
    pub fn ls_map(&self, q: &Parabolic) -> Result<Parabolic, ParaError> {
        Ok(q.conjugate(&self.w(q)?.inverse()))
    }

    /// |Norm_{G_{X_ss}}(M_{X_ss}) / M_{X_ss}|: product over labels
    /// (polynomial, size) of (number of M_R blocks with that label)!.
    pub fn predicted_fiber_size(&self) -> usize {
        let mut count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for b in self.m_r.blocks() {
            *count.entry((self.cp[b[0]], b.len())).or_insert(0) += 1;
        }
        count.values().map(|&c| (1..=c).product::<usize>()).product()
    }

    /// Does w permute E-blocks of equal polynomial, keeping the internal
    /// coordinate order (an element of W^{G,X})?
    pub fn in_weyl_gx(&self, w: &Perm) -> bool {
        let layout = standard_layout(&self.d);
        layout.iter().all(|e| {
            let t = w.apply(e.start);
            layout.iter().any(|f| {
                f.start == t && f.poly == e.poly && (0..e.len).all(|a| w.apply(e.start + a) == t + a)
            })
        })
    }
}

/// Maps the coordinates of each step of `src` onto the same step of `dst`,
/// increasing on each polynomial's part of the step.
fn order_preserving(src: &Parabolic, dst: &Parabolic, cp: &[usize]) -> Perm {
    let mut img = vec![0; src.n()];
    for (a, b) in src.blocks().iter().zip(dst.blocks()) {
        let mut by_poly: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for &i in a {
            by_poly.entry(cp[i]).or_default().0.push(i);
        }
        for &i in b {
            by_poly.entry(cp[i]).or_default().1.push(i);
        }
        for (_, (s, t)) in by_poly {
            assert_eq!(s.len(), t.len(), "steps do not match polynomialwise");
            for (x, y) in s.into_iter().zip(t) {
                img[x] = y;
            }
        }
    }
    Perm(img)
}

// --------------------------------------------------------------- brute force

/// Exhaustive descriptions over all semi-standard parabolics, from the
/// defining conditions. Used as a check on the combinatorial construction.
pub mod brute {
    use super::*;

    /// Jordan data of the diagonal blocks of x along P, in the Levi's
    /// canonical block order.
    fn levi_data(d: &OrbitDatum, x: &Matrix<Rat>, p: &Parabolic) -> Vec<OrbitDatum> {
        let polys = d.polys();
        p.levi()
            .blocks()
            .iter()
            .map(|b| jordan_datum(&x.select(b, b), d.p(), &polys).unwrap())
            .collect()
    }

    /// X in p and X in Ind_P(X) (the LS condition).
    pub fn is_ls(d: &OrbitDatum, p: &Parabolic) -> bool {
        let x = standard_representative(d);
        p.contains_matrix(&x)
            && induce_orbit(&p.levi(), &levi_data(d, &x, p)).unwrap() == *d
    }

    /// X_nil in n_P, X in p and X in Ind_P(X_ss).
    pub fn is_r_prime(d: &OrbitDatum, p: &Parabolic) -> bool {
        let x = standard_representative(d);
        let s = standard_semisimple(d);
        let nil = &x - &s;
        p.contains_matrix(&s)
            && p.nilradical_contains(&nil)
            && induce_orbit(&p.levi(), &levi_data(d, &s, p)).unwrap() == *d
    }

    pub fn all_parabolics(n: usize) -> Vec<Parabolic> {
        enumerate_parabolics(&Levi::torus(n), ParaKind::F, None)
    }

    pub fn ls_set(d: &OrbitDatum) -> Vec<Parabolic> {
        all_parabolics(d.n()).into_iter().filter(|p| is_ls(d, p)).collect()
    }

    /// Minimal elements of R^G(X)'.
    pub fn r_set(d: &OrbitDatum) -> Vec<Parabolic> {
        let rp: Vec<Parabolic> = all_parabolics(d.n()).into_iter().filter(|p| is_r_prime(d, p)).collect();
        let mut out: Vec<Parabolic> = rp
            .iter()
            .filter(|p| !rp.iter().any(|q| q != *p && p.contains(q)))
            .cloned()
            .collect();
        out.sort();
        out
    }
}
