//! Pivot and local equivalence, minor tests, obstruction search, and the
//! constructive linking algorithm.

use std::collections::{HashMap, HashSet, VecDeque};

use rayon::prelude::*;

use crate::field::{Elem, Sesqui};
use crate::graph::{SGraph, CANON_LIMIT};
use crate::matrix::FMatrix;
use crate::width::{self, LinearLayout};
use crate::{Error, Label, Result};

/// Default cap on orbit sizes.
pub const DEFAULT_ORBIT_LIMIT: usize = 200_000;
/// Largest number of free vertices accepted by [`tutte_link`].
pub const LINK_FREE_LIMIT: usize = 20;

/// A sequence of pivots, applied left to right.
pub type PivotSequence = Vec<(Label, Label)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    /// Pivot-minors: pivot equivalence plus vertex deletion.
    Pivot,
    /// Vertex-minors (GF(2) only): local equivalence plus vertex deletion.
    Vertex,
}

impl std::str::FromStr for Relation {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "pivot" => Ok(Relation::Pivot),
            "vertex" => Ok(Relation::Vertex),
            _ => Err(format!("unknown relation `{s}` (expected pivot or vertex)")),
        }
    }
}

impl std::fmt::Display for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Relation::Pivot => "pivot",
            Relation::Vertex => "vertex",
        })
    }
}

/// Equivalence class of a graph up to simple isomorphism, explored by BFS.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub seed: SGraph,
    /// Canonical form and a representative, in discovery order.
    pub members: Vec<(Vec<u8>, SGraph)>,
    pub truncated: bool,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn graphs(&self) -> impl Iterator<Item = &SGraph> {
        self.members.iter().map(|(_, g)| g)
    }
}

/// Graphs one step away: every pivot (both orders unless the field is
/// GF(2)) or every local complementation.
pub fn neighbours(g: &SGraph, relation: Relation) -> Result<Vec<SGraph>> {
    let n = g.n();
    let mut out = Vec::new();
    match relation {
        Relation::Pivot => {
            let both = !g.field().is_binary();
            for x in 0..n {
                for y in 0..n {
                    if x != y && g.at(x, y) != 0 && (both || x < y) {
                        out.push(g.pivot_pos(x, y)?);
                    }
                }
            }
        }
        Relation::Vertex => {
            for x in 0..n {
                if g.neighbours(x).next().is_some() {
                    out.push(g.local_complement_pos(x)?);
                }
            }
        }
    }
    Ok(out)
}

pub fn orbit(g: &SGraph, relation: Relation, limit: usize) -> Result<Orbit> {
    if relation == Relation::Vertex && !g.field().is_binary() {
        return Err(Error::FieldNotBinary);
    }
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut members = Vec::new();
    let mut queue = VecDeque::new();
    let c = g.canonical_form()?;
    seen.insert(c.clone());
    members.push((c, g.clone()));
    queue.push_back(g.clone());
    let mut truncated = false;
    'bfs: while let Some(h) = queue.pop_front() {
        for k in neighbours(&h, relation)? {
            let c = k.canonical_form()?;
            if seen.insert(c.clone()) {
                if members.len() >= limit {
                    truncated = true;
                    break 'bfs;
                }
                members.push((c, k.clone()));
                queue.push_back(k);
            }
        }
    }
    Ok(Orbit {
        seed: g.clone(),
        members,
        truncated,
    })
}

pub fn pivot_orbit(g: &SGraph, limit: usize) -> Result<Orbit> {
    orbit(g, Relation::Pivot, limit)
}

/// Position sets of size `k` in `0..n`, as bitmasks.
fn subsets_of_size(n: usize, k: usize) -> Vec<u64> {
    (0..1u64 << n).filter(|s| s.count_ones() as usize == k).collect()
}

/// Whether `h` is isomorphic to an induced subgraph of a graph equivalent to `g`.
///
/// Reports [`Error::Truncated`] when the answer is negative but the orbit
/// search hit `limit`.
pub fn is_minor(h: &SGraph, g: &SGraph, relation: Relation, limit: usize) -> Result<bool> {
    if h.sigma() != g.sigma() || h.n() > g.n() {
        return Ok(false);
    }
    let target = h.canonical_form()?;
    let orb = orbit(g, relation, limit)?;
    let subsets = subsets_of_size(g.n(), h.n());
    for m in orb.graphs() {
        for &s in &subsets {
            if m.induced_mask(s).canonical_form()? == target {
                return Ok(true);
            }
        }
    }
    if orb.truncated {
        return Err(Error::Truncated(orb.len()));
    }
    Ok(false)
}

pub fn is_pivot_minor(h: &SGraph, g: &SGraph, limit: usize) -> Result<bool> {
    is_minor(h, g, Relation::Pivot, limit)
}

pub fn is_vertex_minor(h: &SGraph, g: &SGraph, limit: usize) -> Result<bool> {
    if !g.field().is_binary() {
        return Err(Error::FieldNotBinary);
    }
    is_minor(h, g, Relation::Vertex, limit)
}

/// Connected graphs on `1..=n_max` vertices up to simple isomorphism,
/// grouped by vertex count.
pub fn connected_classes(sigma: &Sesqui, n_max: usize) -> Result<Vec<Vec<SGraph>>> {
    if n_max > CANON_LIMIT {
        return Err(Error::SizeLimitExceeded {
            what: "obstruction search vertex count",
            size: n_max,
            limit: CANON_LIMIT,
        });
    }
    let mut levels: Vec<Vec<SGraph>> = Vec::new();
    if n_max == 0 {
        return Ok(levels);
    }
    levels.push(vec![SGraph::from_edges(sigma, 1, &[])?]);
    let f = sigma.field();
    let q = f.order();
    for n in 1..n_max {
        let ext_count = (q as u64).checked_pow(n as u32).filter(|&c| c <= 1 << 24).ok_or(
            Error::SizeLimitExceeded {
                what: "extension vectors per graph",
                size: usize::MAX,
                limit: 1 << 24,
            },
        )?;
        let found: Vec<(Vec<u8>, SGraph)> = levels[n - 1]
            .par_iter()
            .flat_map_iter(|g| (1..ext_count).map(move |code| extend(g, sigma, code)))
            .map(|g| (g.canonical_form().expect("within limit"), g))
            .collect();
        let mut uniq: HashMap<Vec<u8>, SGraph> = HashMap::new();
        for (c, g) in found {
            uniq.entry(c).or_insert(g);
        }
        let mut next: Vec<(Vec<u8>, SGraph)> = uniq.into_iter().collect();
        next.sort_by(|a, b| a.0.cmp(&b.0));
        levels.push(next.into_iter().map(|(_, g)| g).collect());
    }
    Ok(levels)
}

/// Adds a vertex whose row towards the old vertices is the base-`q`
/// expansion of `code`.
fn extend(g: &SGraph, sigma: &Sesqui, mut code: u64) -> SGraph {
    let f = sigma.field();
    let q = f.order() as u64;
    let n = g.n();
    let mut m = FMatrix::zeros(f, n + 1, n + 1);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, g.at(i, j));
        }
    }
    for i in 0..n {
        let a = (code % q) as Elem;
        code /= q;
        m.set(n, i, a);
        m.set(i, n, sigma.apply(a));
    }
    SGraph::new(sigma, m).expect("extension stays sigma-symmetric")
}

/// Whether every proper minor of `g` (one deletion after moving within the
/// equivalence class) has linear rank-width at most `p`.
fn minors_within(orb: &Orbit, p: usize, cache: &mut HashMap<Vec<u8>, usize>) -> Result<bool> {
    for g in orb.graphs() {
        for v in 0..g.n() {
            let keep: Vec<usize> = (0..g.n()).filter(|&u| u != v).collect();
            let h = g.induced_pos(&keep);
            let c = h.canonical_form()?;
            let w = match cache.get(&c) {
                Some(&w) => w,
                None => {
                    let w = width::lrw(&h)?;
                    cache.insert(c, w);
                    w
                }
            };
            if w > p {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether `g` has linear rank-width above `p` while all its proper minors
/// under `relation` have width at most `p`.
pub fn is_obstruction(g: &SGraph, relation: Relation, p: usize, limit: usize) -> Result<bool> {
    if width::lrw(g)? <= p {
        return Ok(false);
    }
    let orb = orbit(g, relation, limit)?;
    if orb.truncated {
        return Err(Error::Truncated(orb.len()));
    }
    minors_within(&orb, p, &mut HashMap::new())
}

/// Obstructions for linear rank-width at most `p` on at most `n_max`
/// vertices, one representative per equivalence class.
///
/// The representative has the fewest nonzero entries, ties broken by
/// canonical form; the list is sorted by vertex count, then the same key.
pub fn obstructions(sigma: &Sesqui, relation: Relation, p: usize, n_max: usize) -> Result<Vec<SGraph>> {
    if relation == Relation::Vertex && !sigma.field().is_binary() {
        return Err(Error::FieldNotBinary);
    }
    let levels = connected_classes(sigma, n_max)?;
    let mut reps: Vec<(usize, usize, Vec<u8>, SGraph)> = Vec::new();
    for level in levels {
        let found: Vec<Result<Option<(Vec<u8>, Orbit)>>> = level
            .par_iter()
            .map(|g| {
                if width::lrw(g)? <= p {
                    return Ok(None);
                }
                let orb = orbit(g, relation, DEFAULT_ORBIT_LIMIT)?;
                if orb.truncated {
                    return Err(Error::Truncated(orb.len()));
                }
                if !minors_within(&orb, p, &mut HashMap::new())? {
                    return Ok(None);
                }
                let key = orb.members.iter().map(|(c, _)| c.clone()).min().unwrap();
                Ok(Some((key, orb)))
            })
            .collect();
        let mut seen: HashSet<Vec<u8>> = HashSet::new();
        for r in found {
            let Some((key, orb)) = r? else { continue };
            if !seen.insert(key) {
                continue;
            }
            let (c, g) = orb
                .members
                .iter()
                .min_by(|a, b| (a.1.nonzero_count(), &a.0).cmp(&(b.1.nonzero_count(), &b.0)))
                .unwrap();
            reps.push((g.n(), g.nonzero_count(), c.clone(), g.clone()));
        }
    }
    reps.sort_by(|a, b| (a.0, a.1, &a.2).cmp(&(b.0, b.1, &b.2)));
    Ok(reps.into_iter().map(|r| r.3).collect())
}

pub fn apply_pivots(g: &SGraph, seq: &[(Label, Label)]) -> Result<SGraph> {
    let mut cur = g.clone();
    for &(a, b) in seq {
        cur = cur.pivot(a, b)?;
    }
    Ok(cur)
}

/// Minimum cut-rank over `X <= Z <= V - Y`, all as position masks of `g`.
fn sandwich_min(g: &SGraph, x: u64, y: u64) -> usize {
    let full = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
    let free = full & !x & !y;
    let mut best = usize::MAX;
    let mut sub = free;
    loop {
        best = best.min(g.cutrank_mask(x | sub));
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & free;
    }
    best
}

fn label_mask(g: &SGraph, vs: &[Label]) -> u64 {
    vs.iter().filter_map(|&v| g.pos(v).ok()).fold(0, |m, p| m | 1 << p)
}

/// Pivots on pairs outside `ys` after which the subgraph induced on
/// `xs + ys` has cut-rank `k` at `xs`, provided every set between `xs`
/// and the complement of `ys` has cut-rank at least `k`; `None` otherwise.
pub fn tutte_link(g: &SGraph, xs: &[Label], ys: &[Label], k: usize) -> Result<Option<PivotSequence>> {
    let xm = g.mask_of(xs)?;
    let ym = g.mask_of(ys)?;
    if let Some(&v) = xs.iter().find(|v| ys.contains(v)) {
        return Err(Error::VertexClash(v));
    }
    let free = g.n() - (xm | ym).count_ones() as usize;
    if free > LINK_FREE_LIMIT {
        return Err(Error::SizeLimitExceeded {
            what: "free vertices for linking",
            size: free,
            limit: LINK_FREE_LIMIT,
        });
    }
    if sandwich_min(g, xm, ym) < k {
        return Ok(None);
    }
    Ok(link_rec(g, xs, ys, k))
}

fn link_rec(g: &SGraph, xs: &[Label], ys: &[Label], k: usize) -> Option<PivotSequence> {
    let xm = label_mask(g, xs);
    let ym = label_mask(g, ys);
    let n = g.n();
    let pick = (0..n)
        .filter(|&v| (xm | ym) >> v & 1 == 0)
        .find_map(|v| g.neighbours(v).find(|&w| ym >> w & 1 == 0).map(|w| (v, w)));
    let Some((v, w)) = pick else {
        return Some(Vec::new());
    };
    let keep: Vec<usize> = (0..n).filter(|&u| u != v).collect();
    let without = g.induced_pos(&keep);
    if sandwich_min(&without, label_mask(&without, xs), label_mask(&without, ys)) >= k {
        return link_rec(&without, xs, ys, k);
    }
    let pivoted = g.pivot_pos(v, w).expect("vw is an edge").induced_pos(&keep);
    if sandwich_min(&pivoted, label_mask(&pivoted, xs), label_mask(&pivoted, ys)) >= k {
        let (lv, lw) = (g.vertices()[v], g.vertices()[w]);
        let mut rest = link_rec(&pivoted, xs, ys, k)?;
        rest.insert(0, (lv, lw));
        return Some(rest);
    }
    None
}

/// Cut-rank at `xs` of the subgraph induced on `xs + ys`.
pub fn induced_cut(g: &SGraph, xs: &[Label], ys: &[Label]) -> Result<usize> {
    let mut all = xs.to_vec();
    all.extend_from_slice(ys);
    g.induced(&all)?.cutrank(xs)
}

/// Makes consecutive indices of a linked sequence realise their common
/// cut value on induced subgraphs, working from the right.
///
/// `indices` are prefix indices of `layout` in `1..=n`, all with cut value
/// `s`. Returns the pivot-equivalent graph and the pivots used.
pub fn normalize_linked(g: &SGraph, layout: &LinearLayout, indices: &[usize]) -> Result<(SGraph, PivotSequence)> {
    let n = g.n();
    if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > n) {
        return Err(Error::IndexOutOfRange { index: bad, len: n });
    }
    let s = match indices.first() {
        Some(&i) => layout.lambda(i),
        None => return Ok((g.clone(), Vec::new())),
    };
    let mut cur = g.clone();
    let mut seq = Vec::new();
    for j in (0..indices.len().saturating_sub(1)).rev() {
        let (a, b) = (indices[j], indices[j + 1]);
        let xs = &layout.order[..a];
        let ys = &layout.order[b..];
        match tutte_link(&cur, xs, ys, s)? {
            Some(mut part) => {
                cur = apply_pivots(&cur, &part)?;
                part.extend(seq);
                seq = part;
            }
            None => return Err(Error::NotLinked(a, b)),
        }
    }
    Ok((cur, seq))
}
