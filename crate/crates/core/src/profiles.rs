//! Linear s-profiles `(Y, Z, mu, M, t)`, `(s, p)`-matrix tuples and the
//! rank tables behind p-width, direct dominance, redundancy and
//! mergeability.
//!
//! Indices are 1-based throughout, matching positions of an encoding.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Elem, Sesqui};
use crate::graph::{BoundariedGraph, MuEntry};
use crate::matrix::{self, FMatrix};
use crate::width::{self, LinearEncoding};

/// Distinct rows in order of first occurrence.
pub fn rest(m: &FMatrix) -> Vec<Vec<Elem>> {
    let mut out: Vec<Vec<Elem>> = Vec::new();
    for r in m.rows() {
        if !out.iter().any(|u| u.as_slice() == r) {
            out.push(r.to_vec());
        }
    }
    out
}

fn rows_within(a: &[Vec<Elem>], b: &[Vec<Elem>]) -> bool {
    a.iter().all(|r| b.contains(r))
}

fn same_rows(a: &[Vec<Elem>], b: &[Vec<Elem>]) -> bool {
    rows_within(a, b) && rows_within(b, a)
}

fn cols(m: &FMatrix, range: std::ops::Range<usize>) -> FMatrix {
    let rows: Vec<usize> = (0..m.nrows()).collect();
    let cs: Vec<usize> = range.collect();
    m.submatrix(&rows, &cs)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSProfile {
    sigma: Sesqui,
    s: usize,
    y: Vec<FMatrix>,
    z: Vec<FMatrix>,
    m: Vec<FMatrix>,
    mu: Vec<MuEntry>,
}

impl LinearSProfile {
    /// Builds a profile from per-index blocks; `y[i - 1]` is `Y(i)`.
    ///
    /// Rejects blocks narrower than `s`, boundary triples of the wrong
    /// length, and label sets that are not monotone along the indices.
    pub fn new(
        sigma: &Sesqui,
        s: usize,
        y: Vec<FMatrix>,
        z: Vec<FMatrix>,
        m: Vec<FMatrix>,
        mu: Vec<MuEntry>,
    ) -> Result<LinearSProfile> {
        let t = y.len();
        if t == 0 || z.len() != t || m.len() != t {
            return Err(Error::DimensionMismatch(format!(
                "{} Y blocks, {} Z blocks and {} M blocks",
                y.len(),
                z.len(),
                m.len()
            )));
        }
        for b in y.iter().chain(&z).chain(&m) {
            if b.field() != sigma.field() {
                return Err(Error::FieldMismatch);
            }
        }
        if y.iter().chain(&z).any(|b| b.ncols() < s) {
            return Err(Error::DimensionMismatch(format!("a Y or Z block has fewer than {s} columns")));
        }
        let q = sigma.field().order();
        for e in &mu {
            if e.v1.len() != s || e.v2.len() != s || e.t == 0 || e.mult == 0 {
                return Err(Error::DimensionMismatch("malformed boundary triple".into()));
            }
            if e.v1.iter().chain(&e.v2).any(|&x| x as usize >= q) || e.t as usize >= q {
                return Err(Error::DimensionMismatch("boundary entry outside the field".into()));
            }
        }
        let p = LinearSProfile {
            sigma: sigma.clone(),
            s,
            y,
            z,
            m,
            mu,
        };
        for i in 1..t {
            if !rows_within(&p.rest_y2(i), &p.rest_y2(i + 1)) {
                return Err(Error::DimensionMismatch(format!("labels of Y({i}) missing from Y({})", i + 1)));
            }
            if !rows_within(&p.rest_z2(i + 1), &p.rest_z2(i)) {
                return Err(Error::DimensionMismatch(format!("labels of Z({}) missing from Z({i})", i + 1)));
            }
        }
        Ok(p)
    }

    pub fn sigma(&self) -> &Sesqui {
        &self.sigma
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn t(&self) -> usize {
        self.y.len()
    }

    pub fn mu(&self) -> &[MuEntry] {
        &self.mu
    }

    pub fn y(&self, i: usize) -> &FMatrix {
        &self.y[i - 1]
    }

    pub fn z(&self, i: usize) -> &FMatrix {
        &self.z[i - 1]
    }

    pub fn m(&self, i: usize) -> &FMatrix {
        &self.m[i - 1]
    }

    pub fn y1(&self, i: usize) -> FMatrix {
        let y = self.y(i);
        cols(y, 0..y.ncols() - self.s)
    }

    pub fn y2(&self, i: usize) -> FMatrix {
        let y = self.y(i);
        cols(y, y.ncols() - self.s..y.ncols())
    }

    pub fn z1(&self, i: usize) -> FMatrix {
        let z = self.z(i);
        cols(z, 0..z.ncols() - self.s)
    }

    pub fn z2(&self, i: usize) -> FMatrix {
        let z = self.z(i);
        cols(z, z.ncols() - self.s..z.ncols())
    }

    pub fn rest_y2(&self, i: usize) -> Vec<Vec<Elem>> {
        rest(&self.y2(i))
    }

    pub fn rest_z2(&self, i: usize) -> Vec<Vec<Elem>> {
        rest(&self.z2(i))
    }

    /// `Y1(i) M(i) Z1(i)^t`, zero-padded where inner dimensions differ.
    pub fn inner(&self, i: usize) -> FMatrix {
        self.y1(i).mul_padded(self.m(i)).mul_padded(&self.z1(i).transpose())
    }

    /// Largest rank of the inner blocks; tuples need `p` at least this.
    pub fn inner_rank(&self) -> usize {
        (1..=self.t()).map(|i| self.inner(i).rank()).max().unwrap_or(0)
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.t() {
            return Err(Error::IndexOutOfRange { index: i, len: self.t() });
        }
        Ok(())
    }

    fn with_indices(&self, idx: &[usize]) -> LinearSProfile {
        LinearSProfile {
            sigma: self.sigma.clone(),
            s: self.s,
            y: idx.iter().map(|&i| self.y[i - 1].clone()).collect(),
            z: idx.iter().map(|&i| self.z[i - 1].clone()).collect(),
            m: idx.iter().map(|&i| self.m[i - 1].clone()).collect(),
            mu: self.mu.clone(),
        }
    }

    /// The profile on a non-decreasing selection of indices.
    pub fn restrict(&self, idx: &[usize]) -> Result<LinearSProfile> {
        if idx.is_empty() {
            return Err(Error::DimensionMismatch("empty restriction".into()));
        }
        for w in idx.windows(2) {
            if w[0] > w[1] {
                return Err(Error::DimensionMismatch("restriction indices must not decrease".into()));
            }
        }
        for &i in idx {
            self.check_index(i)?;
        }
        Ok(self.with_indices(idx))
    }

    /// Index `i` duplicated, so the result has `t + 1` indices.
    pub fn subdivide(&self, i: usize) -> Result<LinearSProfile> {
        self.check_index(i)?;
        let mut idx: Vec<usize> = (1..=self.t()).collect();
        idx.insert(i, i);
        Ok(self.with_indices(&idx))
    }

    /// Index `j` repeated `counts[j - 1]` times (every count at least 1).
    pub fn expand(&self, counts: &[usize]) -> Result<LinearSProfile> {
        if counts.len() != self.t() || counts.contains(&0) {
            return Err(Error::DimensionMismatch("need a positive count per index".into()));
        }
        let idx: Vec<usize> = counts
            .iter()
            .enumerate()
            .flat_map(|(j, &c)| std::iter::repeat(j + 1).take(c))
            .collect();
        Ok(self.with_indices(&idx))
    }

    /// Reversed order with `Y` and `Z` swapped and each `M` transposed.
    pub fn dual(&self) -> LinearSProfile {
        let t = self.t();
        LinearSProfile {
            sigma: self.sigma.clone(),
            s: self.s,
            y: (1..=t).map(|i| self.z(t - i + 1).clone()).collect(),
            z: (1..=t).map(|i| self.y(t - i + 1).clone()).collect(),
            m: (1..=t).map(|i| self.m(t - i + 1).transpose()).collect(),
            mu: self.mu.clone(),
        }
    }

    /// `extra` zero columns appended to every `Y1` and `Z1` (with zero
    /// rows and columns for `M`), and optionally one zero row appended to
    /// every `Y` and `Z`.
    pub fn pad(&self, extra: usize, zero_row: bool) -> LinearSProfile {
        let f = self.sigma.field();
        let widen = |b: &FMatrix| -> FMatrix {
            let k = b.ncols() - self.s;
            let mut rows: Vec<Vec<Elem>> = b
                .rows()
                .map(|r| {
                    let mut v = r[..k].to_vec();
                    v.extend(std::iter::repeat(0).take(extra));
                    v.extend_from_slice(&r[k..]);
                    v
                })
                .collect();
            if zero_row {
                rows.push(vec![0; b.ncols() + extra]);
            }
            FMatrix::from_rows(f, b.ncols() + extra, &rows).expect("consistent widths")
        };
        let grow = |m: &FMatrix| -> FMatrix {
            let mut out = FMatrix::zeros(f, m.nrows() + extra, m.ncols() + extra);
            for r in 0..m.nrows() {
                for c in 0..m.ncols() {
                    out.set(r, c, m.get(r, c));
                }
            }
            out
        };
        LinearSProfile {
            sigma: self.sigma.clone(),
            s: self.s,
            y: self.y.iter().map(widen).collect(),
            z: self.z.iter().map(widen).collect(),
            m: self.m.iter().map(grow).collect(),
            mu: self.mu.clone(),
        }
    }

    /// Profile with the indices strictly between the pair removed.
    pub fn shortcut(&self, pair: (usize, usize)) -> Result<LinearSProfile> {
        let (a, b) = (pair.0.min(pair.1), pair.0.max(pair.1));
        self.check_index(a)?;
        self.check_index(b)?;
        let idx: Vec<usize> = (1..=a).chain(b..=self.t()).collect();
        Ok(self.with_indices(&idx))
    }

    /// Whether the labels restricted to distinct rows are the same at
    /// every index of `lo..=hi`.
    fn labels_constant(&self, lo: usize, hi: usize) -> bool {
        let (y0, z0) = (self.rest_y2(lo), self.rest_z2(lo));
        (lo + 1..=hi).all(|l| same_rows(&y0, &self.rest_y2(l)) && same_rows(&z0, &self.rest_z2(l)))
    }
}

/// Counts `c` with `f = e.expand(c)`, if `f` is a subdivision of `e`
/// (zero or more duplications).
pub fn subdivision_counts(f: &LinearSProfile, e: &LinearSProfile) -> Option<Vec<usize>> {
    if f.s != e.s || f.sigma != e.sigma || f.mu != e.mu || f.t() < e.t() {
        return None;
    }
    let same = |k: usize, j: usize| f.y(k) == e.y(j) && f.z(k) == e.z(j) && f.m(k) == e.m(j);
    let (tf, te) = (f.t(), e.t());
    // reach[k][j]: f(1..=k) covers e(1..=j) with f(k) a copy of e(j).
    let mut reach = vec![vec![false; te + 1]; tf + 1];
    for k in 1..=tf {
        for j in 1..=te {
            if !same(k, j) {
                continue;
            }
            reach[k][j] = if k == 1 {
                j == 1
            } else {
                reach[k - 1][j] || reach[k - 1][j - 1]
            };
        }
    }
    if !reach[tf][te] {
        return None;
    }
    let mut counts = vec![0; te];
    let (mut k, mut j) = (tf, te);
    while k >= 1 {
        counts[j - 1] += 1;
        if k == 1 {
            break;
        }
        if reach[k - 1][j] {
            k -= 1;
        } else {
            k -= 1;
            j -= 1;
        }
    }
    Some(counts)
}

pub fn is_subdivision_of(f: &LinearSProfile, e: &LinearSProfile) -> bool {
    subdivision_counts(f, e).is_some()
}

/// A common subdivision of two subdivisions of `e`.
pub fn common_subdivision(e: &LinearSProfile, f1: &LinearSProfile, f2: &LinearSProfile) -> Option<LinearSProfile> {
    let c1 = subdivision_counts(f1, e)?;
    let c2 = subdivision_counts(f2, e)?;
    let c: Vec<usize> = c1.iter().zip(&c2).map(|(a, b)| *a.max(b)).collect();
    e.expand(&c).ok()
}

/// An `(s, p)`-matrix tuple `(Gamma, N, P = (P1 | P2), Q = (Q1 | Q2))`.
///
/// `P` and `Q` always have `p + s` columns; fewer `P1` columns are
/// represented by zero columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixTuple {
    pub gamma: FMatrix,
    pub n: FMatrix,
    pub p: FMatrix,
    pub q: FMatrix,
}

impl MatrixTuple {
    pub fn new(gamma: FMatrix, n: FMatrix, p: FMatrix, q: FMatrix) -> Result<MatrixTuple> {
        let s = gamma.nrows();
        if gamma.ncols() != s {
            return Err(Error::NotSquare(gamma.nrows(), gamma.ncols()));
        }
        if p.ncols() != q.ncols() || p.ncols() < s || n.nrows() > p.ncols() - s || n.ncols() > p.ncols() - s {
            return Err(Error::DimensionMismatch("tuple blocks do not fit".into()));
        }
        Ok(MatrixTuple { gamma, n, p, q })
    }

    pub fn s(&self) -> usize {
        self.gamma.nrows()
    }

    pub fn p_dim(&self) -> usize {
        self.p.ncols() - self.s()
    }

    fn split(&self, m: &FMatrix) -> (FMatrix, FMatrix) {
        let k = self.p_dim();
        (cols(m, 0..k), cols(m, k..m.ncols()))
    }

    /// `(Gamma, N^t, Q, P)`.
    pub fn dual(&self) -> MatrixTuple {
        MatrixTuple {
            gamma: self.gamma.clone(),
            n: self.n.transpose(),
            p: self.q.clone(),
            q: self.p.clone(),
        }
    }
}

/// How the tuple space is covered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Every tuple, with `P` and `Q` as sets of distinct rows. Only for
    /// GF(2) with `s <= 1` and `p <= 1`.
    Exhaustive,
    /// `budget` tuples from a seeded stream; results are lower bounds.
    Sampled { budget: usize, seed: u64 },
}

impl Mode {
    pub fn is_exact(&self) -> bool {
        matches!(self, Mode::Exhaustive)
    }
}

/// A value together with whether it was obtained exhaustively.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounded {
    pub value: usize,
    /// False when only a sample of tuples was examined, in which case
    /// `value` is a lower bound.
    pub exact: bool,
}

fn all_matrices(sigma: &Sesqui, r: usize, c: usize) -> Vec<FMatrix> {
    let f = sigma.field();
    let q = f.order();
    let cells = r * c;
    let total = q.pow(cells as u32);
    (0..total)
        .map(|mut code| {
            let mut m = FMatrix::zeros(f, r, c);
            for k in 0..cells {
                m.set(k / c, k % c, (code % q) as Elem);
                code /= q;
            }
            m
        })
        .collect()
}

fn all_vectors(q: usize, len: usize) -> Vec<Vec<Elem>> {
    (0..q.pow(len as u32))
        .map(|mut code| {
            (0..len)
                .map(|_| {
                    let d = (code % q) as Elem;
                    code /= q;
                    d
                })
                .collect()
        })
        .collect()
}

fn row_subsets(sigma: &Sesqui, width: usize) -> Vec<FMatrix> {
    let f = sigma.field();
    let vs = all_vectors(f.order(), width);
    (0..1usize << vs.len())
        .map(|mask| {
            let rows: Vec<Vec<Elem>> = (0..vs.len()).filter(|k| mask >> k & 1 == 1).map(|k| vs[k].clone()).collect();
            FMatrix::from_rows(f, width, &rows).expect("rows of the right width")
        })
        .collect()
}

/// The tuples examined by `mode`.
pub fn tuples(sigma: &Sesqui, s: usize, p: usize, mode: Mode) -> Result<Vec<MatrixTuple>> {
    let f = sigma.field();
    match mode {
        Mode::Exhaustive => {
            if f.order() != 2 || s > 1 || p > 1 {
                return Err(Error::IntractableExhaustive(format!(
                    "exhaustive tuples need q = 2, s <= 1, p <= 1 (got q = {}, s = {s}, p = {p})",
                    f.order()
                )));
            }
            let gammas = all_matrices(sigma, s, s);
            let ns: Vec<FMatrix> = (0..=p).flat_map(|k| all_matrices(sigma, k, k)).collect();
            let sets = row_subsets(sigma, p + s);
            let mut out = Vec::with_capacity(gammas.len() * ns.len() * sets.len() * sets.len());
            for g in &gammas {
                for n in &ns {
                    for a in &sets {
                        for b in &sets {
                            out.push(MatrixTuple {
                                gamma: g.clone(),
                                n: n.clone(),
                                p: a.clone(),
                                q: b.clone(),
                            });
                        }
                    }
                }
            }
            Ok(out)
        }
        Mode::Sampled { budget, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let q = f.order();
            let w = p + s;
            let max_rows = q.saturating_pow(w as u32).min(16);
            let random = |rng: &mut ChaCha8Rng, r: usize, c: usize| {
                let rows: Vec<Vec<Elem>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(0..q) as Elem).collect()).collect();
                FMatrix::from_rows(f, c, &rows).expect("rows of the right width")
            };
            let mut out = Vec::with_capacity(budget);
            for _ in 0..budget {
                let gamma = random(&mut rng, s, s);
                let k = rng.gen_range(0..=p);
                let n = random(&mut rng, k, k);
                let rp = rng.gen_range(0..=max_rows);
                let rq = rng.gen_range(0..=max_rows);
                let pm = random(&mut rng, rp, w);
                let qm = random(&mut rng, rq, w);
                out.push(MatrixTuple { gamma, n, p: pm, q: qm });
            }
            Ok(out)
        }
    }
}

/// `v . Gamma . w^t`.
fn form(sigma: &Sesqui, v: &[Elem], gamma: &FMatrix, w: &[Elem]) -> Elem {
    let f = sigma.field();
    let mut acc = 0;
    for (i, &a) in v.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in w.iter().enumerate() {
            acc = f.add(acc, f.mul(a, f.mul(gamma.get(i, j), b)));
        }
    }
    acc
}

/// `inner` updated by the star chain of `mu` (multiplicities expanded),
/// where rows carry labels `row_labels` and columns `col_labels`.
fn chain(
    sigma: &Sesqui,
    inner: FMatrix,
    mu: &[MuEntry],
    gamma: &FMatrix,
    row_labels: &FMatrix,
    col_labels: &FMatrix,
) -> Result<FMatrix> {
    let mut out = inner;
    for e in mu {
        let at = |labels: &FMatrix, v: &[Elem]| -> Vec<Elem> { labels.rows().map(|r| form(sigma, v, gamma, r)).collect() };
        let (rx, ry) = (at(row_labels, &e.v1), at(row_labels, &e.v2));
        let (cx, cy) = (at(col_labels, &e.v1), at(col_labels, &e.v2));
        for _ in 0..e.mult {
            out = matrix::star_rect(&out, sigma, (&rx, &ry), (&cx, &cy), e.t)?;
        }
    }
    Ok(out)
}

/// Shared shape of the tuple matrix and the mergeability matrix.
#[allow(clippy::too_many_arguments)]
fn block_matrix(
    e: &LinearSProfile,
    i: usize,
    gamma: &FMatrix,
    top_right_labels: &FMatrix,
    bottom_left_labels: &FMatrix,
    bottom_right: &FMatrix,
) -> FMatrix {
    let tl = e.inner(i);
    let tr = e.y2(i).mul_padded(gamma).mul_padded(&top_right_labels.transpose());
    let bl = e.z2(i).mul_padded(gamma).mul_padded(&bottom_left_labels.transpose()).transpose();
    FMatrix::block(&tl, &tr, &bl, bottom_right)
}

fn check_tuple(e: &LinearSProfile, d: &MatrixTuple) -> Result<()> {
    if d.gamma.field() != e.sigma.field() || d.p.field() != e.sigma.field() {
        return Err(Error::FieldMismatch);
    }
    if d.s() != e.s {
        return Err(Error::DimensionMismatch(format!("tuple for s = {}, profile has s = {}", d.s(), e.s)));
    }
    Ok(())
}

/// The bottom-right block `P'` of the tuple matrix; it does not depend
/// on the index.
fn tuple_corner(e: &LinearSProfile, d: &MatrixTuple) -> Result<FMatrix> {
    let (p1, p2) = d.split(&d.p);
    let (q1, q2) = d.split(&d.q);
    let inner = p1.mul_padded(&d.n).mul_padded(&q1.transpose());
    chain(&e.sigma, inner, &e.mu, &d.gamma, &p2, &q2)
}

/// The block matrix `A_{E,D}(i)`.
pub fn assemble_a(e: &LinearSProfile, d: &MatrixTuple, i: usize) -> Result<FMatrix> {
    e.check_index(i)?;
    check_tuple(e, d)?;
    let corner = tuple_corner(e, d)?;
    let (_, p2) = d.split(&d.p);
    let (_, q2) = d.split(&d.q);
    Ok(block_matrix(e, i, &d.gamma, &q2, &p2, &corner))
}

/// `rank(A_{E,D}(i))` for every tuple (outer) and index (inner).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTable {
    pub ranks: Vec<Vec<usize>>,
    pub exact: bool,
}

impl RankTable {
    pub fn t(&self) -> usize {
        self.ranks.first().map_or(0, |r| r.len())
    }

    /// Largest entry over all tuples and indices.
    pub fn max(&self) -> usize {
        self.ranks.iter().flatten().copied().max().unwrap_or(0)
    }

    /// Whether `rank(i) <= rank(l) <= rank(j)` for every tuple and every
    /// `l` between `i` and `j`.
    pub fn monotone_between(&self, i: usize, j: usize) -> bool {
        let (lo, hi) = (i.min(j), i.max(j));
        self.ranks
            .iter()
            .all(|r| (lo..=hi).all(|l| r[i - 1] <= r[l - 1] && r[l - 1] <= r[j - 1]))
    }
}

fn check_p(e: &LinearSProfile, p: usize) -> Result<()> {
    let k = e.inner_rank();
    if p < k {
        return Err(Error::DimensionMismatch(format!("p = {p} is below the inner rank {k}")));
    }
    Ok(())
}

/// Ranks of `A_{E,D}(i)` over the given tuples.
pub fn rank_table_for(e: &LinearSProfile, ds: &[MatrixTuple], exact: bool) -> Result<RankTable> {
    let ranks = ds
        .par_iter()
        .map(|d| -> Result<Vec<usize>> {
            check_tuple(e, d)?;
            let corner = tuple_corner(e, d)?;
            let (_, p2) = d.split(&d.p);
            let (_, q2) = d.split(&d.q);
            Ok((1..=e.t())
                .map(|i| block_matrix(e, i, &d.gamma, &q2, &p2, &corner).rank())
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RankTable { ranks, exact })
}

/// Ranks over every tuple that `mode` examines.
pub fn rank_table(e: &LinearSProfile, p: usize, mode: Mode) -> Result<RankTable> {
    check_p(e, p)?;
    let ds = tuples(&e.sigma, e.s, p, mode)?;
    rank_table_for(e, &ds, mode.is_exact())
}

/// `max_D rank(A_{E,D}(i))` for each index.
pub fn p_width_per_index(e: &LinearSProfile, p: usize, mode: Mode) -> Result<Vec<Bounded>> {
    let tab = rank_table(e, p, mode)?;
    Ok((0..e.t())
        .map(|k| Bounded {
            value: tab.ranks.iter().map(|r| r[k]).max().unwrap_or(0),
            exact: tab.exact,
        })
        .collect())
}

pub fn p_width(e: &LinearSProfile, p: usize, mode: Mode) -> Result<Bounded> {
    let tab = rank_table(e, p, mode)?;
    Ok(Bounded {
        value: tab.max(),
        exact: tab.exact,
    })
}

/// Whether `rank(A_{E1,D}(i)) <= rank(A_{E2,D}(i))` for all `i` and all
/// examined tuples.
pub fn directly_dominates(e1: &LinearSProfile, e2: &LinearSProfile, p: usize, mode: Mode) -> Result<bool> {
    if e1.t() != e2.t() {
        return Err(Error::DimensionMismatch(format!("t = {} against t = {}", e1.t(), e2.t())));
    }
    let a = rank_table(e1, p, mode)?;
    let b = rank_table(e2, p, mode)?;
    Ok(dominated_by(&a, &b))
}

/// Entrywise comparison of two tables over the same tuple list.
pub fn dominated_by(a: &RankTable, b: &RankTable) -> bool {
    a.ranks
        .iter()
        .zip(&b.ranks)
        .all(|(x, y)| x.iter().zip(y).all(|(u, v)| u <= v))
}

/// Lexicographically first `(i, j)` with `|i - j| >= 2` whose labels are
/// constant on the window and whose ranks are monotone from `i` to `j`
/// for every tuple.
pub fn find_redundant_pair(e: &LinearSProfile, p: usize, mode: Mode) -> Result<Option<(usize, usize)>> {
    let tab = rank_table(e, p, mode)?;
    Ok(redundant_pair_in(e, &tab))
}

/// [`find_redundant_pair`] against a precomputed table.
pub fn redundant_pair_in(e: &LinearSProfile, tab: &RankTable) -> Option<(usize, usize)> {
    let t = e.t();
    for i in 1..=t {
        for j in 1..=t {
            if i.abs_diff(j) < 2 {
                continue;
            }
            if e.labels_constant(i.min(j), i.max(j)) && tab.monotone_between(i, j) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Whether the shortcut at `pair = (i, j)` and the original dominate
/// each other after subdividing: the shortcut with index `i` repeated
/// across the removed window lies below the original, and the original
/// lies below the shortcut with `j` repeated.
pub fn shortcut_equivalent(e: &LinearSProfile, pair: (usize, usize), p: usize, mode: Mode) -> Result<bool> {
    let (i, j) = pair;
    let (a, b) = (i.min(j), i.max(j));
    let short = e.shortcut(pair)?;
    let (at_i, at_j) = if i < j { (a, a + 1) } else { (a + 1, a) };
    let mut lower = short.clone();
    let mut upper = short;
    for _ in 0..b - a - 1 {
        lower = lower.subdivide(at_i)?;
        upper = upper.subdivide(at_j)?;
    }
    check_p(e, p)?;
    let ds = tuples(&e.sigma, e.s, p, mode)?;
    let te = rank_table_for(e, &ds, mode.is_exact())?;
    let tl = rank_table_for(&lower, &ds, mode.is_exact())?;
    let tu = rank_table_for(&upper, &ds, mode.is_exact())?;
    Ok(dominated_by(&tl, &te) && dominated_by(&te, &tu))
}

/// Non-redundant with the same label sets at every index.
pub fn is_homogeneous(e: &LinearSProfile, p: usize, mode: Mode) -> Result<bool> {
    let tab = rank_table(e, p, mode)?;
    Ok(homogeneous_in(e, &tab))
}

pub fn homogeneous_in(e: &LinearSProfile, tab: &RankTable) -> bool {
    e.labels_constant(1, e.t()) && redundant_pair_in(e, tab).is_none()
}

/// The index whose rank is strictly above, or else strictly below, all
/// others.
pub fn extreme_index(e: &LinearSProfile, d: &MatrixTuple) -> Result<Option<usize>> {
    let ranks: Vec<usize> = (1..=e.t())
        .map(|i| assemble_a(e, d, i).map(|a| a.rank()))
        .collect::<Result<_>>()?;
    Ok(extreme_in(&ranks))
}

/// Extreme index of a rank sequence (1-based).
pub fn extreme_in(ranks: &[usize]) -> Option<usize> {
    let strict = |better: &dyn Fn(usize, usize) -> bool| {
        (0..ranks.len()).find(|&i| (0..ranks.len()).all(|k| k == i || better(ranks[i], ranks[k])))
    };
    strict(&|a, b| a > b).or_else(|| strict(&|a, b| a < b)).map(|i| i + 1)
}

/// The block matrix of the merge condition at index `i`.
pub fn merge_matrix(e: &LinearSProfile, f: &LinearSProfile, gamma: &FMatrix, i: usize) -> Result<FMatrix> {
    if e.t() != f.t() {
        return Err(Error::DimensionMismatch(format!("t = {} against t = {}", e.t(), f.t())));
    }
    if e.sigma != f.sigma {
        return Err(Error::FieldMismatch);
    }
    if !f.mu.is_empty() {
        return Err(Error::DimensionMismatch("second profile must have empty boundary".into()));
    }
    if e.s != f.s || gamma.nrows() != e.s || gamma.ncols() != e.s {
        return Err(Error::DimensionMismatch("labels and Gamma disagree on s".into()));
    }
    e.check_index(i)?;
    let (y2, z2) = (f.y2(i), f.z2(i));
    let corner = chain(&e.sigma, f.inner(i), &e.mu, gamma, &y2, &z2)?;
    Ok(block_matrix(e, i, gamma, &z2, &y2, &corner))
}

/// Whether the merge condition has rank at most `p` at every index.
pub fn mergeable(e: &LinearSProfile, f: &LinearSProfile, gamma: &FMatrix, p: usize) -> Result<bool> {
    for i in 1..=e.t() {
        if merge_matrix(e, f, gamma, i)?.rank() > p {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Profile of a boundaried graph along an encoding of its base graph.
///
/// `Y(i)` lists the distinct pairs (coefficient row, label) of vertices
/// at positions `<= i`, ordered by coefficient row; `Z(i)` does the same
/// for the other vertices.
pub fn profile_of(g: &BoundariedGraph, e: &LinearEncoding) -> Result<LinearSProfile> {
    if let Some(why) = width::decode_errors(&g.base, e) {
        return Err(Error::EncodingMismatch(why));
    }
    let f = g.field();
    let s = g.s;
    let gather = |coeffs: &FMatrix, assign: &[(crate::Label, usize)]| -> Result<FMatrix> {
        let mut rows: Vec<Vec<Elem>> = Vec::new();
        for r in 0..coeffs.nrows() {
            for &(v, k) in assign {
                if k != r {
                    continue;
                }
                let mut row = coeffs.row(r).to_vec();
                row.extend_from_slice(g.gamma_of(v)?);
                if !rows.contains(&row) {
                    rows.push(row);
                }
            }
        }
        FMatrix::from_rows(f, coeffs.ncols() + s, &rows)
    };
    let mut y = Vec::with_capacity(e.t);
    let mut z = Vec::with_capacity(e.t);
    let mut m = Vec::with_capacity(e.t);
    for cut in &e.cuts {
        y.push(gather(&cut.n, &cut.row_of)?);
        z.push(gather(&cut.p, &cut.col_of)?);
        m.push(FMatrix::from_rows(f, cut.m.ncols(), &cut.m.to_rows())?);
    }
    LinearSProfile::new(g.sigma(), s, y, z, m, g.mu.clone())
}
