//! Sigma-symmetric F*-graphs and boundaried s-labelled graphs.

use std::collections::VecDeque;
use std::fmt;

use crate::field::{Elem, Field, Sesqui};
use crate::matrix::{self, FMatrix};
use crate::{Error, Label, Result};

/// Largest vertex count accepted by [`SGraph::canonical_form`].
pub const CANON_LIMIT: usize = 12;

/// A loop-free graph whose adjacency matrix is sigma-symmetric:
/// `M[x, y] = sigma(M[y, x])` for all vertices.
#[derive(Clone)]
pub struct SGraph {
    sigma: Sesqui,
    adj: FMatrix,
    // Adjacency rows as bitmasks; filled only over GF(2) with n <= 64.
    bits: Vec<u64>,
}

impl PartialEq for SGraph {
    fn eq(&self, other: &Self) -> bool {
        self.sigma == other.sigma && self.adj == other.adj
    }
}

impl Eq for SGraph {}

impl fmt::Debug for SGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SGraph {:?} over {:?}", self.vertices(), self.sigma)?;
        for r in 0..self.n() {
            write!(f, "\n  {:?}", self.adj.row(r))?;
        }
        Ok(())
    }
}

impl SGraph {
    fn from_parts(sigma: Sesqui, adj: FMatrix) -> SGraph {
        let n = adj.nrows();
        let bits = if sigma.field().is_binary() && n <= 64 {
            (0..n)
                .map(|r| {
                    adj.row(r)
                        .iter()
                        .enumerate()
                        .filter(|(_, &x)| x != 0)
                        .fold(0u64, |acc, (c, _)| acc | 1 << c)
                })
                .collect()
        } else {
            Vec::new()
        };
        SGraph { sigma, adj, bits }
    }

    /// Validates `adj` (square, zero diagonal, sigma-symmetric); the row
    /// labels become the vertex ids.
    pub fn new(sigma: &Sesqui, adj: FMatrix) -> Result<SGraph> {
        if sigma.field() != adj.field() {
            return Err(Error::FieldMismatch);
        }
        if !adj.is_square() {
            return Err(Error::NotSquare(adj.nrows(), adj.ncols()));
        }
        let n = adj.nrows();
        for i in 0..n {
            if adj.get(i, i) != 0 {
                return Err(Error::NonZeroDiagonal(adj.row_labels()[i]));
            }
            for j in 0..n {
                if adj.get(i, j) != sigma.apply(adj.get(j, i)) {
                    return Err(Error::NotSigmaSymmetric(adj.row_labels()[i], adj.row_labels()[j]));
                }
            }
        }
        Ok(SGraph::from_parts(sigma.clone(), adj))
    }

    pub fn empty(sigma: &Sesqui) -> SGraph {
        SGraph::from_parts(sigma.clone(), FMatrix::zeros(sigma.field(), 0, 0))
    }

    /// Graph on vertices `0..n`; each `(u, v, a)` sets `M[u, v] = a` and
    /// `M[v, u] = sigma(a)`.
    pub fn from_edges(sigma: &Sesqui, n: usize, edges: &[(usize, usize, Elem)]) -> Result<SGraph> {
        let mut adj = FMatrix::zeros(sigma.field(), n, n);
        for &(u, v, a) in edges {
            if u >= n || v >= n {
                return Err(Error::UnknownVertex(u.max(v) as Label));
            }
            if u == v && a != 0 {
                return Err(Error::NonZeroDiagonal(u as Label));
            }
            adj.set(u, v, a);
            adj.set(v, u, sigma.apply(a));
        }
        SGraph::new(sigma, adj)
    }

    /// Simple graph over GF(2) on vertices `0..n`.
    pub fn binary(n: usize, edges: &[(usize, usize)]) -> SGraph {
        let f = Field::gf(2).expect("GF(2)");
        let s = Sesqui::identity(&f);
        let e: Vec<_> = edges.iter().map(|&(u, v)| (u, v, 1)).collect();
        SGraph::from_edges(&s, n, &e).expect("valid simple graph")
    }

    pub fn path(n: usize) -> SGraph {
        let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        SGraph::binary(n, &e)
    }

    pub fn cycle(n: usize) -> SGraph {
        let mut e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        e.push((n - 1, 0));
        SGraph::binary(n, &e)
    }

    pub fn sigma(&self) -> &Sesqui {
        &self.sigma
    }

    pub fn field(&self) -> &Field {
        self.sigma.field()
    }

    pub fn adj(&self) -> &FMatrix {
        &self.adj
    }

    pub fn n(&self) -> usize {
        self.adj.nrows()
    }

    pub fn vertices(&self) -> &[Label] {
        self.adj.row_labels()
    }

    pub fn pos(&self, v: Label) -> Result<usize> {
        self.adj.row_pos(v).ok_or(Error::UnknownVertex(v))
    }

    pub fn positions(&self, vs: &[Label]) -> Result<Vec<usize>> {
        vs.iter().map(|&v| self.pos(v)).collect()
    }

    /// Bitmask of positions for a vertex set.
    pub fn mask_of(&self, vs: &[Label]) -> Result<u64> {
        Ok(self.positions(vs)?.into_iter().fold(0, |m, p| m | 1 << p))
    }

    /// `M[x, y]` by position.
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Elem {
        self.adj.get(i, j)
    }

    /// `M[x, y]` by label.
    pub fn entry(&self, x: Label, y: Label) -> Result<Elem> {
        Ok(self.at(self.pos(x)?, self.pos(y)?))
    }

    pub fn neighbours(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n()).filter(move |&j| self.at(i, j) != 0)
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n())
            .map(|i| (i + 1..self.n()).filter(|&j| self.at(i, j) != 0).count())
            .sum()
    }

    pub fn nonzero_count(&self) -> usize {
        (0..self.n()).map(|i| self.neighbours(i).count()).sum()
    }

    /// Adjacency bitmasks, available over GF(2) when `n <= 64`.
    pub fn bit_rows(&self) -> Option<&[u64]> {
        if self.bits.len() == self.n() && self.field().is_binary() {
            Some(&self.bits)
        } else {
            None
        }
    }

    pub fn cutrank(&self, xs: &[Label]) -> Result<usize> {
        let pos = self.positions(xs)?;
        let mut inside = vec![false; self.n()];
        for p in pos {
            inside[p] = true;
        }
        Ok(self.cutrank_flags(&inside))
    }

    /// Cut-rank of the position set given by `mask` (requires `n <= 64`).
    pub fn cutrank_mask(&self, mask: u64) -> usize {
        let n = self.n();
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mask = mask & full;
        if let Some(bits) = self.bit_rows() {
            return gf2_rank_masked(bits, mask, full & !mask);
        }
        let inside: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        self.cutrank_flags(&inside)
    }

    fn cutrank_flags(&self, inside: &[bool]) -> usize {
        let rows: Vec<usize> = (0..self.n()).filter(|&i| inside[i]).collect();
        let cols: Vec<usize> = (0..self.n()).filter(|&i| !inside[i]).collect();
        matrix::rank(&self.adj.submatrix(&rows, &cols))
    }

    /// Pivot complementation at the edge `xy`.
    pub fn pivot(&self, x: Label, y: Label) -> Result<SGraph> {
        self.pivot_pos(self.pos(x)?, self.pos(y)?)
    }

    pub fn pivot_pos(&self, x: usize, y: usize) -> Result<SGraph> {
        let f = self.field();
        let m = &self.adj;
        let mxy = m.get(x, y);
        if x == y || mxy == 0 {
            let l = self.vertices();
            return Err(Error::NonEdgePivot(l[x], l[y]));
        }
        let myx = m.get(y, x);
        let s1 = self.sigma.one();
        let (ixy, iyx) = (f.inv(mxy), f.inv(myx));
        let n = self.n();
        let mut out = m.clone();
        for s in (0..n).filter(|&s| s != x && s != y) {
            let (sx, sy) = (f.mul(m.get(s, x), iyx), f.mul(m.get(s, y), ixy));
            for t in (0..n).filter(|&t| t != x && t != y && t != s) {
                let d = f.add(f.mul(sx, m.get(y, t)), f.mul(sy, m.get(x, t)));
                out.set(s, t, f.sub(m.get(s, t), d));
            }
            out.set(s, x, f.mul(s1, f.mul(m.get(s, y), ixy)));
            out.set(s, y, f.mul(m.get(s, x), iyx));
            out.set(x, s, f.mul(m.get(y, s), iyx));
            out.set(y, s, f.mul(s1, f.mul(m.get(x, s), ixy)));
        }
        out.set(x, y, f.neg(iyx));
        out.set(y, x, f.neg(f.mul(f.mul(s1, s1), ixy)));
        for i in 0..n {
            out.set(i, i, 0);
        }
        Ok(SGraph::from_parts(self.sigma.clone(), out))
    }

    /// Local complementation at `x`; GF(2) only.
    pub fn local_complement(&self, x: Label) -> Result<SGraph> {
        self.local_complement_pos(self.pos(x)?)
    }

    pub fn local_complement_pos(&self, x: usize) -> Result<SGraph> {
        if !self.field().is_binary() {
            return Err(Error::FieldNotBinary);
        }
        let nb: Vec<usize> = self.neighbours(x).collect();
        let mut out = self.adj.clone();
        for &a in &nb {
            for &b in &nb {
                if a != b {
                    out.set(a, b, 1 - out.get(a, b));
                }
            }
        }
        Ok(SGraph::from_parts(self.sigma.clone(), out))
    }

    pub fn delete(&self, x: Label) -> Result<SGraph> {
        let p = self.pos(x)?;
        let keep: Vec<usize> = (0..self.n()).filter(|&i| i != p).collect();
        Ok(self.induced_pos(&keep))
    }

    pub fn induced(&self, vs: &[Label]) -> Result<SGraph> {
        let mut pos = self.positions(vs)?;
        pos.sort_unstable();
        pos.dedup();
        Ok(self.induced_pos(&pos))
    }

    /// Induced subgraph on the given positions, in the given order.
    pub fn induced_pos(&self, pos: &[usize]) -> SGraph {
        SGraph::from_parts(self.sigma.clone(), self.adj.submatrix(pos, pos))
    }

    pub fn induced_mask(&self, mask: u64) -> SGraph {
        let pos: Vec<usize> = (0..self.n()).filter(|&i| mask >> i & 1 == 1).collect();
        self.induced_pos(&pos)
    }

    /// Renames vertices position by position.
    pub fn relabel(&self, labels: Vec<Label>) -> Result<SGraph> {
        let adj = self.adj.clone().with_labels(labels.clone(), labels)?;
        Ok(SGraph::from_parts(self.sigma.clone(), adj))
    }

    /// Reorders vertices: position `i` of the result is position `order[i]` here.
    pub fn permute(&self, order: &[usize]) -> SGraph {
        self.induced_pos(order)
    }

    /// Connected components as sorted position lists, ordered by smallest position.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for w in self.neighbours(v) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn is_sigma_symmetric(&self) -> bool {
        matrix::is_sigma_symmetric(&self.adj, &self.sigma).unwrap_or(false)
    }

    pub fn has_zero_diagonal(&self) -> bool {
        (0..self.n()).all(|i| self.at(i, i) == 0)
    }

    /// Canonical byte string: equal for two graphs iff they are simply isomorphic.
    pub fn canonical_form(&self) -> Result<Vec<u8>> {
        Ok(self.canonical()?.0)
    }

    /// Canonical form together with the vertex order (positions) realising it.
    pub fn canonical(&self) -> Result<(Vec<u8>, Vec<usize>)> {
        let n = self.n();
        if n > CANON_LIMIT {
            return Err(Error::SizeLimitExceeded {
                what: "canonical form vertex count",
                size: n,
                limit: CANON_LIMIT,
            });
        }
        let mut canon = Canon::new(self);
        canon.search();
        let mut out = vec![n as u8];
        out.extend(canon.best);
        Ok((out, canon.best_order))
    }

    /// An entry-preserving bijection from `self` onto `other`, as label pairs.
    pub fn simply_isomorphic(&self, other: &SGraph) -> Result<Option<Vec<(Label, Label)>>> {
        if self.sigma != other.sigma || self.n() != other.n() {
            return Ok(None);
        }
        let (a, oa) = self.canonical()?;
        let (b, ob) = other.canonical()?;
        if a != b {
            return Ok(None);
        }
        let mut map: Vec<(Label, Label)> = oa
            .iter()
            .zip(&ob)
            .map(|(&i, &j)| (self.vertices()[i], other.vertices()[j]))
            .collect();
        map.sort_unstable();
        Ok(Some(map))
    }
}

fn gf2_rank_masked(bits: &[u64], rows: u64, cols: u64) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    let mut r = rows;
    while r != 0 {
        let i = r.trailing_zeros() as usize;
        r &= r - 1;
        let mut v = bits[i] & cols;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            // Keep the basis sorted descending so that the min-reduction works.
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// Lexicographically least serialisation over colour-respecting orders.
struct Canon<'a> {
    g: &'a SGraph,
    slot_colour: Vec<u32>,
    colour: Vec<u32>,
    twins: Vec<Vec<bool>>,
    used: Vec<bool>,
    order: Vec<usize>,
    cur: Vec<u8>,
    best: Vec<u8>,
    best_order: Vec<usize>,
    have_best: bool,
}

impl<'a> Canon<'a> {
    fn new(g: &'a SGraph) -> Canon<'a> {
        let n = g.n();
        let colour = refine_colours(g);
        let mut slot_colour = colour.clone();
        slot_colour.sort_unstable();
        let twins = (0..n)
            .map(|u| {
                (0..n)
                    .map(|v| {
                        u != v
                            && g.at(u, v) == g.at(v, u)
                            && (0..n)
                                .filter(|&w| w != u && w != v)
                                .all(|w| g.at(u, w) == g.at(v, w) && g.at(w, u) == g.at(w, v))
                    })
                    .collect()
            })
            .collect();
        Canon {
            g,
            slot_colour,
            colour,
            twins,
            used: vec![false; n],
            order: Vec::with_capacity(n),
            cur: Vec::with_capacity(n * n),
            best: Vec::new(),
            best_order: Vec::new(),
            have_best: false,
        }
    }

    fn search(&mut self) {
        let k = self.order.len();
        let n = self.g.n();
        if k == n {
            if !self.have_best || self.cur < self.best {
                self.best = self.cur.clone();
                self.best_order = self.order.clone();
                self.have_best = true;
            }
            return;
        }
        let mut tried: Vec<usize> = Vec::new();
        for v in 0..n {
            if self.used[v] || self.colour[v] != self.slot_colour[k] {
                continue;
            }
            if tried.iter().any(|&u| self.twins[u][v]) {
                continue;
            }
            tried.push(v);
            let len = self.cur.len();
            for j in 0..k {
                let w = self.order[j];
                self.cur.push(self.g.at(v, w));
                self.cur.push(self.g.at(w, v));
            }
            if self.have_best && self.cur[..] > self.best[..self.cur.len()] {
                self.cur.truncate(len);
                continue;
            }
            self.used[v] = true;
            self.order.push(v);
            self.search();
            self.order.pop();
            self.used[v] = false;
            self.cur.truncate(len);
        }
    }
}

/// Colour refinement with canonical colour names.
fn refine_colours(g: &SGraph) -> Vec<u32> {
    let n = g.n();
    let mut colour = vec![0u32; n];
    let mut classes = 1;
    loop {
        let sigs: Vec<(u32, Vec<(Elem, Elem, u32)>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<(Elem, Elem, u32)> = (0..n)
                    .filter(|&w| w != v)
                    .map(|w| (g.at(v, w), g.at(w, v), colour[w]))
                    .collect();
                nb.sort_unstable();
                (colour[v], nb)
            })
            .collect();
        let mut sorted = sigs.clone();
        sorted.sort();
        sorted.dedup();
        let next: Vec<u32> = sigs
            .iter()
            .map(|s| sorted.binary_search(s).unwrap() as u32)
            .collect();
        let count = sorted.len();
        colour = next;
        if count == classes {
            return colour;
        }
        classes = count;
    }
}

/// One boundary entry: a triple `(v1, v2, t)` with its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuEntry {
    pub v1: Vec<Elem>,
    pub v2: Vec<Elem>,
    pub t: Elem,
    pub mult: u32,
}

/// A graph with labels `gamma(x)` in F^s and a boundary multiset `mu`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundariedGraph {
    pub base: SGraph,
    pub s: usize,
    /// Indexed by vertex position in `base`.
    pub gamma: Vec<Vec<Elem>>,
    pub mu: Vec<MuEntry>,
}

impl BoundariedGraph {
    pub fn new(base: SGraph, s: usize, gamma: Vec<Vec<Elem>>) -> Result<BoundariedGraph> {
        if gamma.len() != base.n() || gamma.iter().any(|g| g.len() != s) {
            return Err(Error::DimensionMismatch(format!(
                "need {} labels of length {s}",
                base.n()
            )));
        }
        let q = base.field().order();
        if gamma.iter().flatten().any(|&x| x as usize >= q) {
            return Err(Error::DimensionMismatch("label entry outside the field".into()));
        }
        Ok(BoundariedGraph {
            base,
            s,
            gamma,
            mu: Vec::new(),
        })
    }

    /// Every vertex labelled by the zero vector.
    pub fn unlabelled(base: SGraph, s: usize) -> BoundariedGraph {
        let n = base.n();
        BoundariedGraph::new(base, s, vec![vec![0; s]; n]).expect("zero labels")
    }

    pub fn field(&self) -> &Field {
        self.base.field()
    }

    pub fn sigma(&self) -> &Sesqui {
        self.base.sigma()
    }

    pub fn gamma_of(&self, v: Label) -> Result<&[Elem]> {
        Ok(&self.gamma[self.base.pos(v)?])
    }

    /// Whether the labels span F^s.
    pub fn full_rank_labels(&self) -> bool {
        let m = FMatrix::from_rows(self.field(), self.s, &self.gamma).expect("well-formed labels");
        m.rank() == self.s
    }

    /// Symmetric-difference update of `mu` with one copy of `(v1, v2, t)`:
    /// a fresh triple is added, a triple already present `char - 1` times
    /// disappears, otherwise its count goes up by one.
    pub fn toggle_mu(&mut self, v1: Vec<Elem>, v2: Vec<Elem>, t: Elem) {
        let p = self.field().characteristic();
        if let Some(i) = self.mu.iter().position(|e| e.v1 == v1 && e.v2 == v2 && e.t == t) {
            if self.mu[i].mult + 1 >= p {
                self.mu.remove(i);
            } else {
                self.mu[i].mult += 1;
            }
        } else {
            self.mu.push(MuEntry { v1, v2, t, mult: 1 });
        }
    }

    /// Number of triples in `mu`, counted with multiplicity.
    pub fn mu_size(&self) -> usize {
        self.mu.iter().map(|e| e.mult as usize).sum()
    }

    pub fn pivot(&self, x: Label, y: Label) -> Result<BoundariedGraph> {
        self.pivot_pos(self.base.pos(x)?, self.base.pos(y)?)
    }

    /// Pivot the base graph at `xy` and update the labels and the boundary.
    pub fn pivot_pos(&self, x: usize, y: usize) -> Result<BoundariedGraph> {
        let base = self.base.pivot_pos(x, y)?;
        let f = self.field();
        let sigma = self.sigma();
        let m = self.base.adj();
        let t = m.get(x, y);
        let ist = f.inv(sigma.apply(t));
        let it = f.inv(t);
        let (gx, gy) = (&self.gamma[x], &self.gamma[y]);
        let scale = |c: Elem, v: &[Elem]| -> Vec<Elem> { v.iter().map(|&a| f.mul(c, a)).collect() };
        let mut gamma = self.gamma.clone();
        for z in 0..self.base.n() {
            gamma[z] = if z == x {
                scale(ist, gy)
            } else if z == y {
                scale(f.mul(sigma.one(), it), gx)
            } else {
                let a = f.mul(m.get(z, x), ist);
                let b = f.mul(m.get(z, y), it);
                (0..self.s)
                    .map(|k| f.sub(f.sub(self.gamma[z][k], f.mul(a, gy[k])), f.mul(b, gx[k])))
                    .collect()
            };
        }
        let mut out = BoundariedGraph {
            base,
            s: self.s,
            gamma,
            mu: self.mu.clone(),
        };
        out.toggle_mu(gx.clone(), gy.clone(), t);
        Ok(out)
    }

    pub fn induced_pos(&self, pos: &[usize]) -> BoundariedGraph {
        BoundariedGraph {
            base: self.base.induced_pos(pos),
            s: self.s,
            gamma: pos.iter().map(|&p| self.gamma[p].clone()).collect(),
            mu: self.mu.clone(),
        }
    }

    /// The merge `(G, gamma_G, mu_G) (x)_M (H, gamma_H)`.
    pub fn merge(&self, h: &BoundariedGraph, m: &FMatrix) -> Result<SGraph> {
        merge(self, h, m)
    }
}

/// `v . M . w^t` for label vectors.
fn bilinear(f: &Field, v: &[Elem], m: &FMatrix, w: &[Elem]) -> Elem {
    let mut acc = 0;
    for (i, &a) in v.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in w.iter().enumerate() {
            acc = f.add(acc, f.mul(a, f.mul(m.get(i, j), b)));
        }
    }
    acc
}

/// Merge of a boundaried graph with a boundaried graph whose boundary is empty.
///
/// Vertices of `g` come first, then those of `h`. Cross entries are
/// `gamma_G(v) . M . gamma_H(w)^t` (and sigma of that in the other
/// direction); the `h` block is updated by the star chain of `g`'s boundary.
pub fn merge(g: &BoundariedGraph, h: &BoundariedGraph, m: &FMatrix) -> Result<SGraph> {
    if g.sigma() != h.sigma() {
        return Err(Error::FieldMismatch);
    }
    if g.s != h.s || m.nrows() != g.s || m.ncols() != g.s {
        return Err(Error::DimensionMismatch(format!(
            "labels of length {} and {} with a {}x{} matrix",
            g.s,
            h.s,
            m.nrows(),
            m.ncols()
        )));
    }
    if !h.mu.is_empty() {
        return Err(Error::DimensionMismatch("second operand must have empty boundary".into()));
    }
    for v in h.base.vertices() {
        if g.base.pos(*v).is_ok() {
            return Err(Error::VertexClash(*v));
        }
    }
    let f = g.field();
    let sigma = g.sigma();
    let (ng, nh) = (g.base.n(), h.base.n());

    let mut hblock = h.base.adj().clone();
    for e in &g.mu {
        let cx: Vec<Elem> = h.gamma.iter().map(|w| bilinear(f, &e.v1, m, w)).collect();
        let cy: Vec<Elem> = h.gamma.iter().map(|w| bilinear(f, &e.v2, m, w)).collect();
        for _ in 0..e.mult {
            hblock = matrix::star(&hblock, sigma, &cx, &cy, e.t)?;
        }
    }

    let mut k = FMatrix::zeros(f, ng + nh, ng + nh);
    for i in 0..ng {
        for j in 0..ng {
            k.set(i, j, g.base.at(i, j));
        }
        for j in 0..nh {
            let a = bilinear(f, &g.gamma[i], m, &h.gamma[j]);
            k.set(i, ng + j, a);
            k.set(ng + j, i, sigma.apply(a));
        }
    }
    for i in 0..nh {
        for j in 0..nh {
            if i != j {
                k.set(ng + i, ng + j, hblock.get(i, j));
            }
        }
    }
    let mut labels = g.base.vertices().to_vec();
    labels.extend_from_slice(h.base.vertices());
    let k = k.with_labels(labels.clone(), labels)?;
    SGraph::new(sigma, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::SigmaSpec;

    fn gf3neg() -> Sesqui {
        Sesqui::new(&Field::gf(3).unwrap(), SigmaSpec::Negation).unwrap()
    }

    #[test]
    fn cutrank_examples() {
        let c5 = SGraph::cycle(5);
        assert_eq!(c5.cutrank(&[]).unwrap(), 0);
        assert_eq!(c5.cutrank(&[0, 1, 2, 3, 4]).unwrap(), 0);
        assert_eq!(c5.cutrank(&[0, 1]).unwrap(), 2);
        assert_eq!(SGraph::path(2).cutrank(&[0]).unwrap(), 1);
        assert_eq!(c5.cutrank(&[9]), Err(Error::UnknownVertex(9)));
        assert_eq!(c5.cutrank_mask(0b00011), 2);
    }

    #[test]
    fn pivot_gf3_single_edge() {
        let g = SGraph::from_edges(&gf3neg(), 2, &[(0, 1, 1)]).unwrap();
        assert_eq!(g.at(1, 0), 2);
        let h = g.pivot(0, 1).unwrap();
        assert_eq!(h.at(0, 1), 1);
        assert_eq!(h.at(1, 0), 2);
        assert_eq!(g.pivot(0, 0), Err(Error::NonEdgePivot(0, 0)));
    }

    #[test]
    fn pivot_is_involution_on_gf2() {
        let g = SGraph::binary(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 3), (1, 4)]);
        for (x, y) in [(0, 1), (1, 2), (0, 3)] {
            assert_eq!(g.pivot(x, y).unwrap().pivot(x, y).unwrap(), g);
        }
    }

    #[test]
    fn local_complement_examples() {
        let triangle = SGraph::binary(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(triangle.local_complement(0).unwrap(), SGraph::binary(3, &[(0, 1), (0, 2)]));
        let star = SGraph::binary(4, &[(0, 1), (0, 2), (0, 3)]);
        let lc = star.local_complement(0).unwrap();
        assert_eq!(lc.edge_count(), 6);
        let iso = SGraph::binary(2, &[]);
        assert_eq!(iso.local_complement(0).unwrap(), iso);
        let g = SGraph::from_edges(&gf3neg(), 2, &[(0, 1, 1)]).unwrap();
        assert_eq!(g.local_complement(0), Err(Error::FieldNotBinary));
    }

    #[test]
    fn induced_and_delete() {
        let c5 = SGraph::cycle(5);
        assert_eq!(c5.induced(&[0, 1, 2, 3, 4]).unwrap(), c5);
        assert_eq!(c5.induced(&[]).unwrap().n(), 0);
        let p4 = c5.delete(4).unwrap();
        assert!(p4.simply_isomorphic(&SGraph::path(4)).unwrap().is_some());
    }

    #[test]
    fn canonical_forms() {
        let g = SGraph::binary(5, &[(0, 1), (1, 2), (2, 3), (1, 4)]);
        let h = g.permute(&[3, 0, 4, 2, 1]);
        assert_eq!(g.canonical_form().unwrap(), h.canonical_form().unwrap());
        let map = g.simply_isomorphic(&h).unwrap().unwrap();
        for &(a, b) in &map {
            for &(c, d) in &map {
                assert_eq!(g.entry(a, c).unwrap(), h.entry(b, d).unwrap());
            }
        }
        let p4 = SGraph::path(4);
        let k13 = SGraph::binary(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(p4.simply_isomorphic(&k13).unwrap(), None);
    }

    #[test]
    fn canonical_form_respects_entries() {
        let s = gf3neg();
        let a = SGraph::from_edges(&s, 2, &[(0, 1, 1)]).unwrap();
        let b = SGraph::from_edges(&s, 2, &[(0, 1, 2)]).unwrap();
        assert_eq!(a.simply_isomorphic(&b).unwrap(), Some(vec![(0, 1), (1, 0)]));
    }

    #[test]
    fn canonical_form_handles_symmetric_graphs() {
        let empty = SGraph::binary(12, &[]);
        assert_eq!(empty.canonical_form().unwrap().len(), 1 + 12 * 11);
        let mut e = Vec::new();
        for i in 0..12 {
            for j in i + 1..12 {
                e.push((i, j));
            }
        }
        assert!(SGraph::binary(12, &e).canonical_form().is_ok());
        assert!(matches!(
            SGraph::binary(13, &[]).canonical_form(),
            Err(Error::SizeLimitExceeded { .. })
        ));
    }

    #[test]
    fn merge_examples() {
        let f = Field::gf(2).unwrap();
        let one = FMatrix::identity(&f, 1);
        let mut g = BoundariedGraph::new(SGraph::binary(1, &[]), 1, vec![vec![1]]).unwrap();
        g.toggle_mu(vec![1], vec![1], 1);
        let h = BoundariedGraph::new(SGraph::path(2).relabel(vec![10, 11]).unwrap(), 1, vec![vec![1], vec![1]])
            .unwrap();
        let k = merge(&g, &h, &one).unwrap();
        assert_eq!(k.vertices(), &[0, 10, 11]);
        // 1 - 1 - 1 over GF(2)
        assert_eq!(k.entry(10, 11).unwrap(), 1);
        assert_eq!(k.entry(0, 10).unwrap(), 1);
        assert_eq!(k.entry(0, 11).unwrap(), 1);

        let plain = BoundariedGraph::unlabelled(SGraph::path(2), 1);
        let zero = FMatrix::zeros(&f, 1, 1);
        let k = merge(&plain, &h, &zero).unwrap();
        assert_eq!(k.edge_count(), 2);
        let empty = BoundariedGraph::unlabelled(SGraph::binary(0, &[]), 1);
        assert_eq!(merge(&plain, &empty, &one).unwrap(), plain.base);
        assert_eq!(merge(&plain, &plain, &one), Err(Error::VertexClash(0)));
    }

    #[test]
    fn boundaried_pivot_twice_restores() {
        let g = SGraph::binary(4, &[(0, 1), (1, 2), (2, 3), (0, 2)]);
        let b = BoundariedGraph::unlabelled(g, 1);
        let once = b.pivot(0, 1).unwrap();
        assert_eq!(once.mu.len(), 1);
        let twice = once.pivot(0, 1).unwrap();
        assert_eq!(twice, b);
    }

    #[test]
    fn boundaried_pivot_gf3_label_update() {
        let s = gf3neg();
        let g = SGraph::from_edges(&s, 3, &[(0, 1, 2)]).unwrap();
        let b = BoundariedGraph::new(g, 1, vec![vec![1], vec![2], vec![1]]).unwrap();
        let p = b.pivot(0, 1).unwrap();
        // sigma(2) = 1, so gamma'(x) = gamma(y)
        assert_eq!(p.gamma[0], vec![2]);
        assert_eq!(p.gamma[2], vec![1]);
        assert_eq!(p.mu[0], MuEntry { v1: vec![1], v2: vec![2], t: 2, mult: 1 });
    }

    #[test]
    fn mu_multiplicities_wrap_at_characteristic() {
        let s = gf3neg();
        let mut b = BoundariedGraph::unlabelled(SGraph::empty(&s), 1);
        b.toggle_mu(vec![1], vec![0], 1);
        b.toggle_mu(vec![1], vec![0], 1);
        assert_eq!(b.mu[0].mult, 2);
        b.toggle_mu(vec![1], vec![0], 1);
        assert!(b.mu.is_empty());
    }
}
