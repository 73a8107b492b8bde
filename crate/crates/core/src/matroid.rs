//! Matroids represented over GF(q): rank, connectivity, path-width,
//! fundamental graphs, minors and duality.

use crate::field::{Elem, Field, Sesqui};
use crate::graph::SGraph;
use crate::matrix::FMatrix;
use crate::minors::{self, PivotSequence, Relation};
use crate::width::{self, linear_width_dp};
use crate::{Error, Label, Result};

/// Largest ground set accepted by [`is_isomorphic`].
pub const ISO_LIMIT: usize = 9;

/// The column matroid of a matrix, kept in reduced row echelon form with
/// no zero rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepMatroid {
    rep: FMatrix,
}

impl RepMatroid {
    /// Column `j` of `matrix` represents `elements[j]`.
    pub fn new(elements: Vec<Label>, matrix: FMatrix) -> Result<RepMatroid> {
        if matrix.ncols() != elements.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} columns for {} elements",
                matrix.ncols(),
                elements.len()
            )));
        }
        let rows = matrix.nrows();
        let labelled = matrix.with_labels((0..rows as Label).collect(), elements)?;
        Ok(RepMatroid::normalise(labelled))
    }

    fn normalise(m: FMatrix) -> RepMatroid {
        let (r, pivots) = m.rref();
        let keep: Vec<usize> = (0..pivots.len()).collect();
        let cols: Vec<usize> = (0..m.ncols()).collect();
        let mut rep = r.submatrix(&keep, &cols);
        rep = rep
            .with_labels((0..keep.len() as Label).collect(), m.col_labels().to_vec())
            .expect("labels carried over");
        RepMatroid { rep }
    }

    pub fn from_rows(field: &Field, elements: Vec<Label>, rows: &[Vec<Elem>]) -> Result<RepMatroid> {
        let m = FMatrix::from_rows(field, elements.len(), rows)?;
        RepMatroid::new(elements, m)
    }

    /// `U_{1,2}` over GF(2) on elements 0, 1.
    pub fn u12() -> RepMatroid {
        RepMatroid::from_rows(&Field::gf(2).unwrap(), vec![0, 1], &[vec![1, 1]]).unwrap()
    }

    pub fn field(&self) -> &Field {
        self.rep.field()
    }

    pub fn rep(&self) -> &FMatrix {
        &self.rep
    }

    pub fn ground(&self) -> &[Label] {
        self.rep.col_labels()
    }

    pub fn size(&self) -> usize {
        self.rep.ncols()
    }

    pub fn rank(&self) -> usize {
        self.rep.nrows()
    }

    fn pos(&self, e: Label) -> Result<usize> {
        self.rep.col_pos(e).ok_or(Error::UnknownElement(e))
    }

    fn positions(&self, xs: &[Label]) -> Result<Vec<usize>> {
        xs.iter().map(|&e| self.pos(e)).collect()
    }

    pub fn mask_of(&self, xs: &[Label]) -> Result<u64> {
        Ok(self.positions(xs)?.into_iter().fold(0, |m, p| m | 1 << p))
    }

    pub fn rank_of(&self, xs: &[Label]) -> Result<usize> {
        let pos = self.positions(xs)?;
        let rows: Vec<usize> = (0..self.rank()).collect();
        Ok(self.rep.submatrix(&rows, &pos).rank())
    }

    /// Rank of the element positions in `mask`.
    pub fn rank_mask(&self, mask: u64) -> usize {
        let pos: Vec<usize> = (0..self.size()).filter(|&i| mask >> i & 1 == 1).collect();
        let rows: Vec<usize> = (0..self.rank()).collect();
        self.rep.submatrix(&rows, &pos).rank()
    }

    /// `r(X) + r(E - X) - r(E) + 1`.
    pub fn connectivity(&self, xs: &[Label]) -> Result<usize> {
        Ok(self.connectivity_mask(self.mask_of(xs)?))
    }

    pub fn connectivity_mask(&self, mask: u64) -> usize {
        let full = (1u64 << self.size()) - 1;
        self.rank_mask(mask) + self.rank_mask(full & !mask) + 1 - self.rank()
    }

    /// Path-width with an optimal element order.
    ///
    /// The empty and full sets count as cuts, so ground sets of size at
    /// most one have width 1.
    pub fn pathwidth_exact(&self) -> Result<(usize, Vec<Label>)> {
        let limit = if self.field().is_binary() {
            width::BINARY_LIMIT
        } else {
            width::GENERAL_LIMIT
        };
        if self.size() > limit {
            return Err(Error::SizeLimitExceeded {
                what: "ground set size",
                size: self.size(),
                limit,
            });
        }
        let (w, order) = linear_width_dp(self.size(), |s| self.connectivity_mask(s));
        let order = order.into_iter().map(|i| self.ground()[i]).collect();
        Ok((w.max(1), order))
    }

    pub fn pathwidth(&self) -> Result<usize> {
        Ok(self.pathwidth_exact()?.0)
    }

    /// Cut values of an element order (prefixes `1..n-1`).
    pub fn layout_cuts(&self, order: &[Label]) -> Result<Vec<usize>> {
        let pos = self.positions(order)?;
        let mut mask = 0u64;
        let mut cuts = Vec::new();
        for &p in pos.iter().take(pos.len().saturating_sub(1)) {
            mask |= 1 << p;
            cuts.push(self.connectivity_mask(mask));
        }
        Ok(cuts)
    }

    pub fn is_basis(&self, base: &[Label]) -> Result<bool> {
        let mut b = base.to_vec();
        b.sort_unstable();
        b.dedup();
        Ok(b.len() == base.len() && base.len() == self.rank() && self.rank_of(base)? == self.rank())
    }

    /// Representation `(I | D)` relative to `base`: returns `D` with rows
    /// ordered like `base` and columns like the remaining elements.
    fn standard_form(&self, base: &[Label]) -> Result<(Vec<Label>, Vec<Label>, FMatrix)> {
        if !self.is_basis(base)? {
            return Err(Error::NotABasis(base.to_vec()));
        }
        let f = self.field().clone();
        let r = self.rank();
        let bpos = self.positions(base)?;
        let others: Vec<Label> = self.ground().iter().copied().filter(|e| !base.contains(e)).collect();
        let opos = self.positions(&others)?;
        // Row-reduce (B | rep) where B is the base submatrix; its inverse applied to rep.
        let rows: Vec<usize> = (0..r).collect();
        let b = self.rep.submatrix(&rows, &bpos);
        let aug = b.hcat(&FMatrix::identity(&f, r));
        let (red, _) = aug.rref();
        let inv_cols: Vec<usize> = (r..2 * r).collect();
        let binv = red.submatrix(&rows, &inv_cols);
        let d = binv.mul(&self.rep.submatrix(&rows, &opos))?;
        Ok((base.to_vec(), others, d))
    }

    /// The fundamental graph for `base`: bipartite between the base `A`
    /// and the rest `B`, with `M[A, B] = D` and `M[B, A] = -D^t`.
    ///
    /// Vertices follow the ground set order.
    pub fn fundamental_graph(&self, base: &[Label]) -> Result<(SGraph, Vec<Label>, Vec<Label>)> {
        let (a, b, d) = self.standard_form(base)?;
        let f = self.field();
        let sigma = Sesqui::negation(f);
        let n = self.size();
        let mut m = FMatrix::zeros(f, n, n);
        for (i, &x) in a.iter().enumerate() {
            let px = self.pos(x)?;
            for (j, &y) in b.iter().enumerate() {
                let py = self.pos(y)?;
                m.set(px, py, d.get(i, j));
                m.set(py, px, f.neg(d.get(i, j)));
            }
        }
        let labels = self.ground().to_vec();
        let g = SGraph::new(&sigma, m.with_labels(labels.clone(), labels)?)?;
        Ok((g, a, b))
    }

    /// The greedy basis scanning elements in ground order.
    pub fn some_basis(&self) -> Vec<Label> {
        let (_, pivots) = self.rep.rref();
        pivots.into_iter().map(|p| self.ground()[p]).collect()
    }

    pub fn bases(&self) -> Vec<Vec<Label>> {
        let n = self.size();
        let r = self.rank();
        (0..1u64 << n)
            .filter(|s| s.count_ones() as usize == r && self.rank_mask(*s) == r)
            .map(|s| (0..n).filter(|&i| s >> i & 1 == 1).map(|i| self.ground()[i]).collect())
            .collect()
    }

    pub fn delete(&self, xs: &[Label]) -> Result<RepMatroid> {
        let dpos = self.positions(xs)?;
        let keep: Vec<usize> = (0..self.size()).filter(|p| !dpos.contains(p)).collect();
        let rows: Vec<usize> = (0..self.rank()).collect();
        Ok(RepMatroid::normalise(self.rep.submatrix(&rows, &keep)))
    }

    /// Contracts a single element; contracting a loop deletes it.
    fn contract_one(&self, e: Label) -> Result<RepMatroid> {
        let c = self.pos(e)?;
        let f = self.field();
        let Some(r) = (0..self.rank()).find(|&i| self.rep.get(i, c) != 0) else {
            return self.delete(&[e]);
        };
        let mut m = self.rep.clone();
        let inv = f.inv(m.get(r, c));
        for j in 0..m.ncols() {
            let v = f.mul(m.get(r, j), inv);
            m.set(r, j, v);
        }
        for i in 0..m.nrows() {
            let a = m.get(i, c);
            if i != r && a != 0 {
                for j in 0..m.ncols() {
                    let v = f.sub(m.get(i, j), f.mul(a, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
        }
        let rows: Vec<usize> = (0..m.nrows()).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..m.ncols()).filter(|&j| j != c).collect();
        Ok(RepMatroid::normalise(m.submatrix(&rows, &cols)))
    }

    /// `M \ del / con`. A dependent `con` is handled by contracting a
    /// maximal independent subset (scanned in the given order) and deleting
    /// the remaining elements.
    pub fn minor(&self, del: &[Label], con: &[Label]) -> Result<RepMatroid> {
        self.positions(del)?;
        self.positions(con)?;
        if let Some(&e) = del.iter().find(|e| con.contains(e)) {
            return Err(Error::OverlappingSets(e));
        }
        let mut indep: Vec<Label> = Vec::new();
        let mut dependent: Vec<Label> = Vec::new();
        for &e in con {
            let mut t = indep.clone();
            t.push(e);
            if self.rank_of(&t)? == t.len() {
                indep = t;
            } else {
                dependent.push(e);
            }
        }
        let mut cur = self.clone();
        for &e in &indep {
            cur = cur.contract_one(e)?;
        }
        let mut gone = del.to_vec();
        gone.extend(dependent);
        cur.delete(&gone)
    }

    /// The dual, represented by `(-D^t | I)` relative to the greedy basis.
    pub fn dual(&self) -> RepMatroid {
        let f = self.field().clone();
        let base = self.some_basis();
        let (a, b, d) = self.standard_form(&base).expect("greedy basis");
        let n = self.size();
        let mut m = FMatrix::zeros(&f, b.len(), n);
        for (j, &y) in b.iter().enumerate() {
            m.set(j, self.pos(y).unwrap(), 1);
            for (i, &x) in a.iter().enumerate() {
                m.set(j, self.pos(x).unwrap(), f.neg(d.get(i, j)));
            }
        }
        let labelled = m
            .with_labels((0..b.len() as Label).collect(), self.ground().to_vec())
            .expect("ground labels are distinct");
        RepMatroid::normalise(labelled)
    }

    /// Rank of every subset of element positions.
    pub fn rank_table(&self) -> Vec<u8> {
        (0..1u64 << self.size()).map(|s| self.rank_mask(s) as u8).collect()
    }

    /// Whether `p` has path-width above `k` while every single-element
    /// deletion and contraction has path-width at most `k`.
    pub fn is_pathwidth_obstruction(&self, k: usize) -> Result<bool> {
        if self.pathwidth()? <= k {
            return Ok(false);
        }
        for &e in self.ground() {
            if self.delete(&[e])?.pathwidth()? > k || self.minor(&[], &[e])?.pathwidth()? > k {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Whether `m1` and `m2` have the same matroid under some bijection of
/// their ground sets; returns it as label pairs.
pub fn is_isomorphic(m1: &RepMatroid, m2: &RepMatroid) -> Result<Option<Vec<(Label, Label)>>> {
    let n = m1.size();
    if n > ISO_LIMIT || m2.size() > ISO_LIMIT {
        return Err(Error::SizeLimitExceeded {
            what: "matroid isomorphism ground set",
            size: n.max(m2.size()),
            limit: ISO_LIMIT,
        });
    }
    if n != m2.size() || m1.rank() != m2.rank() {
        return Ok(None);
    }
    let (t1, t2) = (m1.rank_table(), m2.rank_table());
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(k: usize, n: usize, t1: &[u8], t2: &[u8], map: &mut [usize], used: &mut [bool]) -> bool {
        if k == n {
            return true;
        }
        for c in 0..n {
            if used[c] {
                continue;
            }
            map[k] = c;
            // Check every subset of {0..k} containing k.
            let ok = (0..1u64 << k).all(|s| {
                let src = s | 1 << k;
                let dst = (0..=k).filter(|&i| src >> i & 1 == 1).fold(0u64, |m, i| m | 1 << map[i]);
                t1[src as usize] == t2[dst as usize]
            });
            if ok {
                used[c] = true;
                if rec(k + 1, n, t1, t2, map, used) {
                    return true;
                }
                used[c] = false;
            }
        }
        false
    }
    if rec(0, n, &t1, &t2, &mut map, &mut used) {
        Ok(Some((0..n).map(|i| (m1.ground()[i], m2.ground()[map[i]])).collect()))
    } else {
        Ok(None)
    }
}

/// Pivots turning the fundamental graph of `b1` into that of `b2`, by
/// repeatedly exchanging the smallest element of the current basis not in
/// `b2` for the smallest element of `b2` joined to it.
pub fn bases_pivot_equivalent(m: &RepMatroid, b1: &[Label], b2: &[Label]) -> Result<PivotSequence> {
    if !m.is_basis(b1)? {
        return Err(Error::NotABasis(b1.to_vec()));
    }
    if !m.is_basis(b2)? {
        return Err(Error::NotABasis(b2.to_vec()));
    }
    let (mut g, _, _) = m.fundamental_graph(b1)?;
    let mut current: Vec<Label> = b1.to_vec();
    let mut seq = Vec::new();
    loop {
        let mut out: Vec<Label> = current.iter().copied().filter(|e| !b2.contains(e)).collect();
        if out.is_empty() {
            return Ok(seq);
        }
        out.sort_unstable();
        let mut incoming: Vec<Label> = b2.iter().copied().filter(|e| !current.contains(e)).collect();
        incoming.sort_unstable();
        let x = out[0];
        let y = *incoming
            .iter()
            .find(|&&y| g.entry(x, y).map(|a| a != 0).unwrap_or(false))
            .expect("basis exchange guarantees a joined element");
        g = g.pivot(x, y)?;
        current.retain(|&e| e != x);
        current.push(y);
        seq.push((x, y));
    }
}

/// Whether `h` arises from `g` by scaling: `h[u, v] = d_u d_v g[u, v]` for
/// some nonzero `d`, with identical vertex labels.
pub fn equal_up_to_scaling(g: &SGraph, h: &SGraph) -> bool {
    if g.vertices() != h.vertices() {
        return false;
    }
    let n = g.n();
    if (0..n).any(|u| (0..n).any(|v| (g.at(u, v) == 0) != (h.at(u, v) == 0))) {
        return false;
    }
    let f = g.field();
    for comp in g.components() {
        let root = comp[0];
        let ok = f.nonzero().any(|d0| {
            let mut d = vec![0 as Elem; n];
            d[root] = d0;
            let mut stack = vec![root];
            while let Some(u) = stack.pop() {
                for v in g.neighbours(u) {
                    let want = f.div(h.at(u, v), f.mul(d[u], g.at(u, v)));
                    if d[v] == 0 {
                        d[v] = want;
                        stack.push(v);
                    }
                }
            }
            comp.iter().all(|&u| {
                comp.iter()
                    .all(|&v| h.at(u, v) == f.mul(f.mul(d[u], d[v]), g.at(u, v)))
            })
        });
        if !ok {
            return false;
        }
    }
    true
}

/// Checks a sequence from [`bases_pivot_equivalent`]: exact equality over
/// GF(2), equality up to vertex scaling otherwise.
pub fn verify_basis_sequence(m: &RepMatroid, b1: &[Label], b2: &[Label], seq: &[(Label, Label)]) -> Result<bool> {
    let (g1, _, _) = m.fundamental_graph(b1)?;
    let (g2, _, _) = m.fundamental_graph(b2)?;
    let end = minors::apply_pivots(&g1, seq)?;
    if m.field().is_binary() {
        Ok(end == g2)
    } else {
        Ok(equal_up_to_scaling(&end, &g2))
    }
}

/// The same test phrased on the fundamental graph: a pivot-minor
/// obstruction for linear rank-width at most `k - 1`.
pub fn fundamental_graph_criterion(m: &RepMatroid, k: usize) -> Result<bool> {
    let (g, _, _) = m.fundamental_graph(&m.some_basis())?;
    if k == 0 {
        // Path-width is at least 1, so only the empty matroid has no
        // minor of positive width.
        return Ok(m.size() == 0);
    }
    minors::is_obstruction(&g, Relation::Pivot, k - 1, minors::DEFAULT_ORBIT_LIMIT)
}
