//! Linear layouts, exact linear rank-width, linkedness and linear encodings.

use crate::field::Elem;
use crate::graph::SGraph;
use crate::matrix::{self, FMatrix};
use crate::{Error, Label, Result};

/// Largest component size for the exact solver over GF(2).
pub const BINARY_LIMIT: usize = 20;
/// Largest component size for the exact solver over other fields.
pub const GENERAL_LIMIT: usize = 14;
/// Largest window for brute-force linkedness checks.
pub const LINK_WINDOW_LIMIT: usize = 22;

/// A vertex order with its prefix cut values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearLayout {
    pub order: Vec<Label>,
    /// `cut_ranks[i - 1]` is the value on the first `i` vertices, `1 <= i < n`.
    pub cut_ranks: Vec<usize>,
    pub width: usize,
}

impl LinearLayout {
    pub fn new(g: &SGraph, order: Vec<Label>) -> Result<LinearLayout> {
        let pos = check_permutation(g, &order)?;
        let mut mask = 0u64;
        let mut cut_ranks = Vec::with_capacity(order.len().saturating_sub(1));
        for &p in pos.iter().take(order.len().saturating_sub(1)) {
            mask |= 1 << p;
            cut_ranks.push(g.cutrank_mask(mask));
        }
        let width = cut_ranks.iter().copied().max().unwrap_or(0);
        Ok(LinearLayout {
            order,
            cut_ranks,
            width,
        })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// `lambda(i)` for `1 <= i <= n`, with `lambda(n) = 0`.
    pub fn lambda(&self, i: usize) -> usize {
        if i >= self.order.len() {
            0
        } else {
            self.cut_ranks[i - 1]
        }
    }
}

fn check_permutation(g: &SGraph, order: &[Label]) -> Result<Vec<usize>> {
    if g.n() > 64 {
        return Err(Error::SizeLimitExceeded {
            what: "layout vertex count",
            size: g.n(),
            limit: 64,
        });
    }
    if order.len() != g.n() {
        return Err(Error::BadPermutation(format!(
            "order has {} entries for {} vertices",
            order.len(),
            g.n()
        )));
    }
    let mut seen = vec![false; g.n()];
    let mut pos = Vec::with_capacity(order.len());
    for &v in order {
        let p = g
            .pos(v)
            .map_err(|_| Error::BadPermutation(format!("unknown vertex {v}")))?;
        if std::mem::replace(&mut seen[p], true) {
            return Err(Error::BadPermutation(format!("vertex {v} repeated")));
        }
        pos.push(p);
    }
    Ok(pos)
}

pub fn layout_width(g: &SGraph, order: &[Label]) -> Result<usize> {
    Ok(LinearLayout::new(g, order.to_vec())?.width)
}

/// Values of a set function on every subset of an `n`-element ground set.
pub struct CutTable {
    n: usize,
    values: Vec<u8>,
}

impl CutTable {
    pub fn build(n: usize, f: impl Fn(u64) -> usize + Sync) -> CutTable {
        use rayon::prelude::*;
        let values = (0..1u64 << n)
            .into_par_iter()
            .map(|s| f(s) as u8)
            .collect();
        CutTable { n, values }
    }

    pub fn for_graph(g: &SGraph) -> Result<CutTable> {
        check_size(g)?;
        Ok(CutTable::build(g.n(), |s| g.cutrank_mask(s)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, s: u64) -> usize {
        self.values[s as usize] as usize
    }

    /// Minimum over `lo <= Z <= hi` (as sets).
    pub fn sandwich_min(&self, lo: u64, hi: u64) -> usize {
        let free = hi & !lo;
        let mut best = usize::MAX;
        let mut sub = free;
        loop {
            best = best.min(self.get(lo | sub));
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
        best
    }
}

fn size_limit(g: &SGraph) -> usize {
    if g.field().is_binary() {
        BINARY_LIMIT
    } else {
        GENERAL_LIMIT
    }
}

fn check_size(g: &SGraph) -> Result<()> {
    let limit = size_limit(g);
    if g.n() > limit {
        return Err(Error::SizeLimitExceeded {
            what: "vertex count",
            size: g.n(),
            limit,
        });
    }
    Ok(())
}

/// Optimal linear width of a set function on `n` elements, and an order
/// (as element indices) attaining it.
///
/// `f` is evaluated on proper nonempty prefixes only. Among optimal orders
/// the one choosing the smallest element at each step is returned.
pub fn linear_width_dp(n: usize, f: impl Fn(u64) -> usize + Sync) -> (usize, Vec<usize>) {
    let table = CutTable::build(n, f);
    let rest = completion_costs(&table);
    let width = rest[0] as usize;
    let order = greedy_order(&table, &rest, width);
    (width, order)
}

/// `rest[S]`: least possible maximum over the cuts still to come once the
/// prefix `S` has been placed.
fn completion_costs(table: &CutTable) -> Vec<u8> {
    let n = table.n();
    let full: u64 = (1u64 << n) - 1;
    let mut rest = vec![u8::MAX; 1 << n];
    rest[full as usize] = 0;
    for s in (0..full).rev() {
        let mut best = u8::MAX;
        let mut free = full & !s;
        while free != 0 {
            let v = free.trailing_zeros();
            free &= free - 1;
            let t = s | 1 << v;
            let here = if t == full { 0 } else { table.values[t as usize] };
            best = best.min(here.max(rest[t as usize]));
        }
        rest[s as usize] = best;
    }
    rest
}

fn step_cost(table: &CutTable, rest: &[u8], t: u64) -> usize {
    let full: u64 = (1u64 << table.n()) - 1;
    let here = if t == full { 0 } else { table.get(t) };
    here.max(rest[t as usize] as usize)
}

fn greedy_order(table: &CutTable, rest: &[u8], width: usize) -> Vec<usize> {
    let n = table.n();
    let mut s = 0u64;
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .find(|&v| s >> v & 1 == 0 && step_cost(table, rest, s | 1 << v) <= width)
            .expect("an optimal continuation exists");
        s |= 1 << v;
        order.push(v);
    }
    order
}

/// Exact linear rank-width with a witness layout.
///
/// Components are solved separately and concatenated in order of their
/// smallest vertex position.
pub fn lrw_exact(g: &SGraph) -> Result<(usize, LinearLayout)> {
    let limit = size_limit(g);
    let comps = g.components();
    if let Some(big) = comps.iter().map(Vec::len).max() {
        if big > limit {
            return Err(Error::SizeLimitExceeded {
                what: "component vertex count",
                size: big,
                limit,
            });
        }
    }
    if g.n() > 64 {
        return Err(Error::SizeLimitExceeded {
            what: "vertex count",
            size: g.n(),
            limit: 64,
        });
    }
    let mut order = Vec::with_capacity(g.n());
    for comp in comps {
        let h = g.induced_pos(&comp);
        let (_, o) = linear_width_dp(h.n(), |s| h.cutrank_mask(s));
        order.extend(o.into_iter().map(|i| g.vertices()[comp[i]]));
    }
    let layout = LinearLayout::new(g, order)?;
    Ok((layout.width, layout))
}

pub fn lrw(g: &SGraph) -> Result<usize> {
    Ok(lrw_exact(g)?.0)
}

/// Whether prefix indices `i < j` are linked in the layout.
pub fn is_linked(g: &SGraph, layout: &LinearLayout, i: usize, j: usize) -> Result<bool> {
    let n = g.n();
    if !(1 <= i && i < j && j < n) {
        return Err(Error::IndexOutOfRange {
            index: if i < 1 { i } else { j },
            len: n.saturating_sub(1),
        });
    }
    if j - i > LINK_WINDOW_LIMIT {
        return Err(Error::SizeLimitExceeded {
            what: "linkedness window",
            size: j - i,
            limit: LINK_WINDOW_LIMIT,
        });
    }
    let pos = check_permutation(g, &layout.order)?;
    let prefix = |k: usize| pos[..k].iter().fold(0u64, |m, &p| m | 1 << p);
    let (lo, hi) = (prefix(i), prefix(j));
    let along = (i..=j).map(|l| g.cutrank_mask(prefix(l))).min().unwrap();
    let free = hi & !lo;
    let mut best = usize::MAX;
    let mut sub = free;
    loop {
        best = best.min(g.cutrank_mask(lo | sub));
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & free;
    }
    Ok(along == best)
}

/// Whether every pair of prefix indices is linked, using a precomputed table.
fn all_pairs_linked(table: &CutTable, pos: &[usize]) -> bool {
    let n = pos.len();
    let mut prefixes = vec![0u64; n + 1];
    for k in 0..n {
        prefixes[k + 1] = prefixes[k] | 1 << pos[k];
    }
    for i in 1..n {
        let mut along = usize::MAX;
        for j in i..n {
            along = along.min(table.get(prefixes[j]));
            if j > i && table.sandwich_min(prefixes[i], prefixes[j]) != along {
                return false;
            }
        }
    }
    true
}

pub fn is_linked_layout(g: &SGraph, layout: &LinearLayout) -> Result<bool> {
    let table = CutTable::for_graph(g)?;
    let pos = check_permutation(g, &layout.order)?;
    Ok(all_pairs_linked(&table, &pos))
}

/// An optimal layout in which every pair of indices is linked.
///
/// Optimal layouts are enumerated in the solver's order (smallest vertex
/// first) until a linked one turns up.
pub fn find_linked_layout(g: &SGraph) -> Result<LinearLayout> {
    check_size(g)?;
    let n = g.n();
    let table = CutTable::for_graph(g)?;
    let rest = completion_costs(&table);
    let width = rest[0] as usize;
    let mut pos = Vec::with_capacity(n);
    if linked_search(&table, &rest, width, 0, &mut pos) {
        let order = pos.iter().map(|&p| g.vertices()[p]).collect();
        return LinearLayout::new(g, order);
    }
    unreachable!("every graph has a linked layout of optimal width")
}

fn linked_search(table: &CutTable, rest: &[u8], width: usize, s: u64, pos: &mut Vec<usize>) -> bool {
    let n = table.n();
    if pos.len() == n {
        return all_pairs_linked(table, pos);
    }
    for v in 0..n {
        if s >> v & 1 == 1 {
            continue;
        }
        let t = s | 1 << v;
        if step_cost(table, rest, t) > width {
            continue;
        }
        pos.push(v);
        if linked_search(table, rest, width, t, pos) {
            return true;
        }
        pos.pop();
    }
    false
}

/// A value `s` and `c + 1` indices in `1..=n` at which `lambda` equals `s`,
/// with `lambda >= s` everywhere between consecutive indices.
///
/// `lambda(n)` is taken to be 0. Values are tried in increasing order and
/// the leftmost qualifying run is used.
pub fn lambda_linked_sequence(layout: &LinearLayout, c: usize) -> Option<(usize, Vec<usize>)> {
    let n = layout.len();
    let lam: Vec<usize> = (1..=n).map(|i| layout.lambda(i)).collect();
    let max = lam.iter().copied().max()?;
    for s in 0..=max {
        let mut run: Vec<usize> = Vec::new();
        for (k, &v) in lam.iter().enumerate() {
            if v < s {
                run.clear();
                continue;
            }
            if v == s {
                run.push(k + 1);
                if run.len() == c + 1 {
                    return Some((s, run));
                }
            }
        }
    }
    None
}

/// The factorisation of one cut `M_G[X_i, complement]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutEncoding {
    /// Distinct coefficient rows for the vertices of `X_i` (`l_i x n_i`).
    pub n: FMatrix,
    /// Distinct coefficient rows for the remaining vertices (`l'_i x p_i`).
    pub p: FMatrix,
    /// `M_G[B_i, B'_i]` (`n_i x p_i`).
    pub m: FMatrix,
    /// Row of `n` used by each vertex of `X_i`.
    pub row_of: Vec<(Label, usize)>,
    /// Row of `p` used by each vertex outside `X_i`.
    pub col_of: Vec<(Label, usize)>,
}

/// A linear encoding `(N, P, M, L, t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearEncoding {
    pub t: usize,
    /// `L`, as (vertex, position in `1..=t`).
    pub position: Vec<(Label, usize)>,
    /// Entry `i - 1` encodes position `i`.
    pub cuts: Vec<CutEncoding>,
}

impl LinearEncoding {
    pub fn width(&self) -> usize {
        self.cuts
            .iter()
            .map(|c| c.m.nrows().max(c.m.ncols()))
            .max()
            .unwrap_or(0)
    }

    /// Vertices ordered by position.
    pub fn order(&self) -> Vec<Label> {
        let mut v = self.position.clone();
        v.sort_by_key(|&(_, p)| p);
        v.into_iter().map(|(x, _)| x).collect()
    }

    /// Vertices at positions `<= i`.
    pub fn prefix(&self, i: usize) -> Vec<Label> {
        let mut v: Vec<(Label, usize)> = self.position.iter().copied().filter(|&(_, p)| p <= i).collect();
        v.sort_by_key(|&(_, p)| p);
        v.into_iter().map(|(x, _)| x).collect()
    }

    /// Vertices at positions `> i`.
    pub fn suffix(&self, i: usize) -> Vec<Label> {
        let mut v: Vec<(Label, usize)> = self.position.iter().copied().filter(|&(_, p)| p > i).collect();
        v.sort_by_key(|&(_, p)| p);
        v.into_iter().map(|(x, _)| x).collect()
    }
}

/// Encoding along a layout, one vertex per position.
pub fn encode(g: &SGraph, layout: &LinearLayout) -> Result<LinearEncoding> {
    check_permutation(g, &layout.order)?;
    let position = layout.order.iter().enumerate().map(|(i, &v)| (v, i + 1)).collect();
    encode_with_positions(g, position, g.n())
}

/// Encoding for an injective position map `L: V -> [t]`.
pub fn encode_with_positions(g: &SGraph, position: Vec<(Label, usize)>, t: usize) -> Result<LinearEncoding> {
    if position.len() != g.n() {
        return Err(Error::EncodingMismatch(format!(
            "{} positions for {} vertices",
            position.len(),
            g.n()
        )));
    }
    let mut used = vec![false; t + 1];
    let mut seen = vec![false; g.n()];
    for &(v, p) in &position {
        if p == 0 || p > t || std::mem::replace(&mut used[p], true) {
            return Err(Error::EncodingMismatch(format!("position {p} of vertex {v} is invalid")));
        }
        if std::mem::replace(&mut seen[g.pos(v)?], true) {
            return Err(Error::EncodingMismatch(format!("vertex {v} placed twice")));
        }
    }
    let mut e = LinearEncoding {
        t,
        position,
        cuts: Vec::with_capacity(t),
    };
    for i in 1..=t {
        let xs = e.prefix(i);
        let ys = e.suffix(i);
        e.cuts.push(encode_cut(g, &xs, &ys)?);
    }
    Ok(e)
}

fn distinct_rows(rows: Vec<Vec<Elem>>) -> (Vec<Vec<Elem>>, Vec<usize>) {
    let mut uniq: Vec<Vec<Elem>> = Vec::new();
    let mut idx = Vec::with_capacity(rows.len());
    for r in rows {
        match uniq.iter().position(|u| *u == r) {
            Some(k) => idx.push(k),
            None => {
                idx.push(uniq.len());
                uniq.push(r);
            }
        }
    }
    (uniq, idx)
}

fn encode_cut(g: &SGraph, xs: &[Label], ys: &[Label]) -> Result<CutEncoding> {
    let f = g.field();
    let sub = g.adj().select(xs, ys)?;
    let rb = matrix::greedy_row_basis(&sub);
    let cb = matrix::greedy_row_basis(&sub.transpose());
    let m = sub.submatrix(&rb, &cb);
    let all_cols: Vec<usize> = (0..ys.len()).collect();
    let all_rows: Vec<usize> = (0..xs.len()).collect();
    let row_basis = sub.submatrix(&rb, &all_cols);
    let col_basis = sub.submatrix(&all_rows, &cb).transpose();
    let row_coeffs: Vec<Vec<Elem>> = (0..xs.len())
        .map(|r| matrix::solve_row(sub.row(r), &row_basis).expect("row lies in the row space"))
        .collect();
    let subt = sub.transpose();
    let col_coeffs: Vec<Vec<Elem>> = (0..ys.len())
        .map(|c| matrix::solve_row(subt.row(c), &col_basis).expect("column lies in the column space"))
        .collect();
    let (nrows, nidx) = distinct_rows(row_coeffs);
    let (prows, pidx) = distinct_rows(col_coeffs);
    Ok(CutEncoding {
        n: FMatrix::from_rows(f, rb.len(), &nrows)?,
        p: FMatrix::from_rows(f, cb.len(), &prows)?,
        m,
        row_of: xs.iter().copied().zip(nidx).collect(),
        col_of: ys.iter().copied().zip(pidx).collect(),
    })
}

fn has_distinct_rows(m: &FMatrix) -> bool {
    let rows = m.to_rows();
    (0..rows.len()).all(|a| (a + 1..rows.len()).all(|b| rows[a] != rows[b]))
}

/// Checks that `e` is a linear encoding of `g` whose width bounds the
/// width of the layout it induces.
pub fn decode_check(g: &SGraph, e: &LinearEncoding) -> bool {
    decode_errors(g, e).is_none()
}

/// First failing condition of [`decode_check`], if any.
pub fn decode_errors(g: &SGraph, e: &LinearEncoding) -> Option<String> {
    let f = g.field();
    let q = f.order() as f64;
    if e.position.len() != g.n() || e.cuts.len() != e.t {
        return Some("encoding does not cover the graph".into());
    }
    if e.position.iter().any(|&(v, p)| g.pos(v).is_err() || p == 0 || p > e.t) {
        return Some("bad position map".into());
    }
    for i in 1..=e.t {
        let cut = &e.cuts[i - 1];
        let xs = e.prefix(i);
        let ys = e.suffix(i);
        let mut rows: Vec<Label> = cut.row_of.iter().map(|&(v, _)| v).collect();
        let mut cols: Vec<Label> = cut.col_of.iter().map(|&(v, _)| v).collect();
        let (mut xs_s, mut ys_s) = (xs.clone(), ys.clone());
        rows.sort_unstable();
        cols.sort_unstable();
        xs_s.sort_unstable();
        ys_s.sort_unstable();
        if rows != xs_s || cols != ys_s {
            return Some(format!("position {i}: assignments do not match the cut"));
        }
        let (ni, pi) = (cut.m.nrows(), cut.m.ncols());
        if cut.n.ncols() != ni || cut.p.ncols() != pi {
            return Some(format!("position {i}: dimension mismatch"));
        }
        if !has_distinct_rows(&cut.n) || !has_distinct_rows(&cut.p) {
            return Some(format!("position {i}: repeated coefficient rows"));
        }
        if cut.n.nrows() as f64 > q.powi(ni as i32) || cut.p.nrows() as f64 > q.powi(pi as i32) {
            return Some(format!("position {i}: too many coefficient rows"));
        }
        if cut.row_of.iter().any(|&(_, r)| r >= cut.n.nrows()) || cut.col_of.iter().any(|&(_, c)| c >= cut.p.nrows()) {
            return Some(format!("position {i}: assignment out of range"));
        }
        let nm = cut.n.mul_padded(&cut.m);
        let prod = nm.mul_padded(&cut.p.transpose());
        for &(x, r) in &cut.row_of {
            for &(y, c) in &cut.col_of {
                if g.entry(x, y).ok() != Some(prod.get(r, c)) {
                    return Some(format!("position {i}: entry ({x}, {y}) differs"));
                }
            }
        }
    }
    match LinearLayout::new(g, e.order()) {
        Ok(l) if l.width <= e.width() => None,
        Ok(l) => Some(format!("layout width {} exceeds encoding width {}", l.width, e.width())),
        Err(err) => Some(err.to_string()),
    }
}
