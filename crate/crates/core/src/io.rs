//! Line-oriented text formats for fields, graphs, boundaried graphs,
//! matroids, layouts, encodings and profiles.
//!
//! Blank lines and everything after `#` are ignored.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::{Elem, Field, Sesqui, SigmaSpec};
use crate::graph::{BoundariedGraph, MuEntry, SGraph};
use crate::matrix::FMatrix;
use crate::matroid::RepMatroid;
use crate::profiles::LinearSProfile;
use crate::width::{LinearEncoding, LinearLayout};
use crate::Label;

/// Tokenised non-empty lines with their 1-based line numbers.
struct Lines {
    lines: Vec<(usize, Vec<String>)>,
    at: usize,
}

impl Lines {
    fn new(text: &str) -> Lines {
        let lines = text
            .lines()
            .enumerate()
            .filter_map(|(k, l)| {
                let l = l.split('#').next().unwrap_or("");
                let toks: Vec<String> = l.split_whitespace().map(str::to_string).collect();
                (!toks.is_empty()).then_some((k + 1, toks))
            })
            .collect();
        Lines { lines, at: 0 }
    }

    fn peek(&self) -> Option<&(usize, Vec<String>)> {
        self.lines.get(self.at)
    }

    fn peek_key(&self) -> Option<&str> {
        self.peek().map(|(_, t)| t[0].as_str())
    }

    fn next(&mut self) -> Option<(usize, Vec<String>)> {
        let l = self.lines.get(self.at).cloned();
        if l.is_some() {
            self.at += 1;
        }
        l
    }

    fn line_no(&self) -> usize {
        self.peek()
            .map(|(n, _)| *n)
            .or_else(|| self.lines.last().map(|(n, _)| n + 1))
            .unwrap_or(1)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            line: self.line_no(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, key: &str) -> Result<(usize, Vec<String>)> {
        match self.peek_key() {
            Some(k) if k == key => Ok(self.next().unwrap()),
            Some(k) => {
                let k = k.to_string();
                self.err(format!("expected `{key}`, found `{k}`"))
            }
            None => self.err(format!("expected `{key}`, found end of input")),
        }
    }

    fn done(&self) -> bool {
        self.at >= self.lines.len()
    }
}

fn num<T: std::str::FromStr>(line: usize, tok: &str) -> Result<T> {
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("`{tok}` is not a number"),
    })
}

fn nums<T: std::str::FromStr>(line: usize, toks: &[String]) -> Result<Vec<T>> {
    toks.iter().map(|t| num(line, t)).collect()
}

fn arity(line: usize, toks: &[String], want: usize) -> Result<()> {
    if toks.len() != want {
        return Err(Error::Parse {
            line,
            msg: format!("`{}` takes {} value(s), got {}", toks[0], want - 1, toks.len() - 1),
        });
    }
    Ok(())
}

fn elements(field: &Field, line: usize, toks: &[String]) -> Result<Vec<Elem>> {
    let v: Vec<u32> = nums(line, toks)?;
    v.into_iter()
        .map(|x| {
            if (x as usize) < field.order() {
                Ok(x as Elem)
            } else {
                Err(Error::Parse {
                    line,
                    msg: format!("{x} is not an element of GF({})", field.order()),
                })
            }
        })
        .collect()
}

/// Parses `field <p> <k> <coeffs>` (or `field <q>` for a built-in field)
/// and an optional `sigma` line; the involution defaults to the identity.
fn parse_header(ls: &mut Lines) -> Result<Sesqui> {
    let (line, toks) = ls.expect("field")?;
    let field = match toks.len() {
        2 => Field::gf(num(line, &toks[1])?)?,
        n if n >= 3 => {
            let p = num(line, &toks[1])?;
            let k = num(line, &toks[2])?;
            let poly: Vec<u32> = nums(line, &toks[3..])?;
            Field::new(p, k, &poly)?
        }
        _ => return Err(Error::Parse { line, msg: "`field` needs a value".into() }),
    };
    if ls.peek_key() != Some("sigma") {
        return Ok(Sesqui::identity(&field));
    }
    let (line, toks) = ls.next().unwrap();
    let spec = match toks.get(1).map(String::as_str) {
        Some("identity") => SigmaSpec::Identity,
        Some("negation") => SigmaSpec::Negation,
        Some("frobenius") => {
            arity(line, &toks, 3)?;
            SigmaSpec::Frobenius(num(line, &toks[2])?)
        }
        Some("table") => SigmaSpec::Table(elements(&field, line, &toks[2..])?),
        _ => {
            return Err(Error::Parse {
                line,
                msg: "sigma must be identity, negation, frobenius <j> or table <q values>".into(),
            })
        }
    };
    Sesqui::new(&field, spec)
}

pub fn parse_sesqui(text: &str) -> Result<Sesqui> {
    let mut ls = Lines::new(text);
    parse_header(&mut ls)
}

fn write_header(out: &mut String, sigma: &Sesqui) {
    let f = sigma.field();
    let _ = write!(out, "field {} {}", f.characteristic(), f.degree());
    for c in f.poly() {
        let _ = write!(out, " {c}");
    }
    out.push('\n');
    let _ = writeln!(out, "sigma {}", sigma.spec());
}

fn parse_rows(ls: &mut Lines, field: &Field, rows: usize, cols: usize) -> Result<FMatrix> {
    if cols == 0 {
        return Ok(FMatrix::zeros(field, rows, 0));
    }
    let mut data = Vec::with_capacity(rows);
    for _ in 0..rows {
        let Some((line, toks)) = ls.next() else {
            return ls.err(format!("expected {rows} matrix rows"));
        };
        if toks.len() != cols {
            return Err(Error::Parse {
                line,
                msg: format!("row has {} entries, expected {cols}", toks.len()),
            });
        }
        data.push(elements(field, line, &toks)?);
    }
    FMatrix::from_rows(field, cols, &data)
}

fn write_rows(out: &mut String, m: &FMatrix) {
    if m.ncols() == 0 {
        return;
    }
    for r in m.rows() {
        let row: Vec<String> = r.iter().map(|x| x.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
}

fn labels_line(key: &str, ls: &[Label]) -> String {
    let mut s = key.to_string();
    for l in ls {
        let _ = write!(s, " {l}");
    }
    s.push('\n');
    s
}

fn parse_graph_body(ls: &mut Lines, sigma: &Sesqui) -> Result<SGraph> {
    let (line, toks) = ls.expect("n")?;
    arity(line, &toks, 2)?;
    let n: usize = num(line, &toks[1])?;
    let names: Vec<Label> = if ls.peek_key() == Some("names") {
        let (line, toks) = ls.next().unwrap();
        let v: Vec<Label> = nums(line, &toks[1..])?;
        if v.len() != n {
            return Err(Error::Parse {
                line,
                msg: format!("{} names for {n} vertices", v.len()),
            });
        }
        v
    } else {
        (0..n as Label).collect()
    };
    let adj = parse_rows(ls, sigma.field(), n, n)?.with_labels(names.clone(), names)?;
    SGraph::new(sigma, adj)
}

/// Parses a graph file (header, `n`, optional `names`, adjacency rows).
pub fn parse_graph(text: &str) -> Result<SGraph> {
    let mut ls = Lines::new(text);
    let sigma = parse_header(&mut ls)?;
    let g = parse_graph_body(&mut ls, &sigma)?;
    if !ls.done() {
        return ls.err("unexpected trailing content");
    }
    Ok(g)
}

fn write_graph_body(out: &mut String, g: &SGraph) {
    let _ = writeln!(out, "n {}", g.n());
    let ids: Vec<Label> = (0..g.n() as Label).collect();
    if g.vertices() != ids.as_slice() {
        out.push_str(&labels_line("names", g.vertices()));
    }
    write_rows(out, g.adj());
}

pub fn write_graph(g: &SGraph) -> String {
    let mut out = String::new();
    write_header(&mut out, g.sigma());
    write_graph_body(&mut out, g);
    out
}

/// Parses a graph file with optional `s`, `gamma` and `mu` sections; a
/// plain graph file yields `s = 0`.
pub fn parse_boundaried(text: &str) -> Result<BoundariedGraph> {
    let mut ls = Lines::new(text);
    let sigma = parse_header(&mut ls)?;
    let g = parse_graph_body(&mut ls, &sigma)?;
    let f = sigma.field().clone();
    if ls.done() {
        return Ok(BoundariedGraph::unlabelled(g, 0));
    }
    let (line, toks) = ls.expect("s")?;
    arity(line, &toks, 2)?;
    let s: usize = num(line, &toks[1])?;
    let n = g.n();
    let gamma = if ls.peek_key() == Some("gamma") {
        ls.next();
        parse_rows(&mut ls, &f, n, s)?.to_rows()
    } else {
        vec![vec![0; s]; n]
    };
    let gamma = if s == 0 { vec![vec![]; n] } else { gamma };
    let mut bg = BoundariedGraph::new(g, s, gamma)?;
    if ls.peek_key() == Some("mu") {
        bg.mu = parse_mu(&mut ls, &f, s)?;
    }
    if !ls.done() {
        return ls.err("unexpected trailing content");
    }
    Ok(bg)
}

fn parse_mu(ls: &mut Lines, f: &Field, s: usize) -> Result<Vec<MuEntry>> {
    let (line, toks) = ls.expect("mu")?;
    arity(line, &toks, 2)?;
    let k: usize = num(line, &toks[1])?;
    let mut mu = Vec::with_capacity(k);
    for _ in 0..k {
        let Some((line, toks)) = ls.next() else {
            return ls.err(format!("expected {k} boundary triples"));
        };
        if toks.len() != 2 * s + 2 {
            return Err(Error::Parse {
                line,
                msg: format!("a triple has {} values, expected {}", toks.len(), 2 * s + 2),
            });
        }
        let v = elements(f, line, &toks[..2 * s + 1])?;
        let mult: u32 = num(line, &toks[2 * s + 1])?;
        if v[2 * s] == 0 || mult == 0 {
            return Err(Error::Parse {
                line,
                msg: "t and the multiplicity must be nonzero".into(),
            });
        }
        mu.push(MuEntry {
            v1: v[..s].to_vec(),
            v2: v[s..2 * s].to_vec(),
            t: v[2 * s],
            mult,
        });
    }
    Ok(mu)
}

fn write_mu(out: &mut String, mu: &[MuEntry]) {
    let _ = writeln!(out, "mu {}", mu.len());
    for e in mu {
        let mut vals: Vec<String> = e.v1.iter().chain(&e.v2).map(|x| x.to_string()).collect();
        vals.push(e.t.to_string());
        vals.push(e.mult.to_string());
        out.push_str(&vals.join(" "));
        out.push('\n');
    }
}

pub fn write_boundaried(g: &BoundariedGraph) -> String {
    let mut out = write_graph(&g.base);
    let _ = writeln!(out, "s {}", g.s);
    if g.s > 0 {
        out.push_str("gamma\n");
        let m = FMatrix::from_rows(g.field(), g.s, &g.gamma).expect("well-formed labels");
        write_rows(&mut out, &m);
    }
    if !g.mu.is_empty() {
        write_mu(&mut out, &g.mu);
    }
    out
}

/// Parses a matroid file: header, `elements <ids>`, then the rows of a
/// representation with one column per element.
pub fn parse_matroid(text: &str) -> Result<RepMatroid> {
    let mut ls = Lines::new(text);
    let sigma = parse_header(&mut ls)?;
    let f = sigma.field().clone();
    let (line, toks) = ls.expect("elements")?;
    let ground: Vec<Label> = nums(line, &toks[1..])?;
    let mut rows = Vec::new();
    while let Some((line, toks)) = ls.next() {
        if toks.len() != ground.len() {
            return Err(Error::Parse {
                line,
                msg: format!("row has {} entries for {} elements", toks.len(), ground.len()),
            });
        }
        rows.push(elements(&f, line, &toks)?);
    }
    RepMatroid::from_rows(&f, ground, &rows)
}

pub fn write_matroid(m: &RepMatroid) -> String {
    let mut out = String::new();
    write_header(&mut out, &Sesqui::identity(m.field()));
    out.push_str(&labels_line("elements", &m.ground()));
    write_rows(&mut out, m.rep());
    out
}

/// `width`, `order` and `cuts` lines.
pub fn write_layout(layout: &LinearLayout) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "width {}", layout.width);
    out.push_str(&labels_line("order", &layout.order));
    let mut cuts = String::from("cuts");
    for c in &layout.cut_ranks {
        let _ = write!(cuts, " {c}");
    }
    out.push_str(&cuts);
    out.push('\n');
    out
}

/// The vertex order of a layout file, plus the claimed width if given.
///
/// `cuts` lines are accepted and ignored; callers recompute cut-ranks.
pub fn parse_layout(text: &str) -> Result<(Vec<Label>, Option<usize>)> {
    let mut ls = Lines::new(text);
    let mut order = None;
    let mut width = None;
    while let Some((line, toks)) = ls.next() {
        match toks[0].as_str() {
            "width" => {
                arity(line, &toks, 2)?;
                width = Some(num(line, &toks[1])?);
            }
            "order" => order = Some(nums(line, &toks[1..])?),
            "cuts" => {
                nums::<usize>(line, &toks[1..])?;
            }
            other => {
                return Err(Error::Parse {
                    line,
                    msg: format!("unknown layout key `{other}`"),
                })
            }
        }
    }
    match order {
        Some(o) => Ok((o, width)),
        None => Err(Error::Parse {
            line: 1,
            msg: "layout has no `order` line".into(),
        }),
    }
}

fn write_block(out: &mut String, key: &str, m: &FMatrix) {
    let _ = writeln!(out, "{key} {} {}", m.nrows(), m.ncols());
    write_rows(out, m);
}

fn parse_block(ls: &mut Lines, f: &Field, key: &str) -> Result<FMatrix> {
    let (line, toks) = ls.expect(key)?;
    arity(line, &toks, 3)?;
    let r: usize = num(line, &toks[1])?;
    let c: usize = num(line, &toks[2])?;
    parse_rows(ls, f, r, c)
}

/// Per-position `N`, `P`, `M` blocks with the vertex assignment maps.
pub fn write_encoding(e: &LinearEncoding) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "encoding t {} width {}", e.t, e.width());
    let mut pos = String::from("position");
    let mut ps = e.position.clone();
    ps.sort_by_key(|&(_, p)| p);
    for (v, p) in ps {
        let _ = write!(pos, " {v}:{p}");
    }
    out.push_str(&pos);
    out.push('\n');
    for (i, c) in e.cuts.iter().enumerate() {
        let _ = writeln!(out, "index {}", i + 1);
        write_block(&mut out, "N", &c.n);
        write_block(&mut out, "P", &c.p);
        write_block(&mut out, "M", &c.m);
        let mut rows = String::from("rows");
        for (v, k) in &c.row_of {
            let _ = write!(rows, " {v}:{k}");
        }
        let mut cols = String::from("cols");
        for (v, k) in &c.col_of {
            let _ = write!(cols, " {v}:{k}");
        }
        let _ = writeln!(out, "{rows}\n{cols}");
    }
    out
}

/// Per-index `Y`, `Z`, `M` blocks followed by the boundary section.
pub fn write_profile(e: &LinearSProfile) -> String {
    let mut out = String::new();
    write_header(&mut out, e.sigma());
    let _ = writeln!(out, "profile s {} t {}", e.s(), e.t());
    for i in 1..=e.t() {
        let _ = writeln!(out, "index {i}");
        write_block(&mut out, "Y", e.y(i));
        write_block(&mut out, "Z", e.z(i));
        write_block(&mut out, "M", e.m(i));
    }
    write_mu(&mut out, e.mu());
    out
}

pub fn parse_profile(text: &str) -> Result<LinearSProfile> {
    let mut ls = Lines::new(text);
    let sigma = parse_header(&mut ls)?;
    let f = sigma.field().clone();
    let (line, toks) = ls.expect("profile")?;
    if toks.len() != 5 || toks[1] != "s" || toks[3] != "t" {
        return Err(Error::Parse {
            line,
            msg: "expected `profile s <s> t <t>`".into(),
        });
    }
    let s: usize = num(line, &toks[2])?;
    let t: usize = num(line, &toks[4])?;
    let (mut y, mut z, mut m) = (Vec::new(), Vec::new(), Vec::new());
    for i in 1..=t {
        let (line, toks) = ls.expect("index")?;
        arity(line, &toks, 2)?;
        if num::<usize>(line, &toks[1])? != i {
            return Err(Error::Parse {
                line,
                msg: format!("expected index {i}"),
            });
        }
        y.push(parse_block(&mut ls, &f, "Y")?);
        z.push(parse_block(&mut ls, &f, "Z")?);
        m.push(parse_block(&mut ls, &f, "M")?);
    }
    let mu = if ls.done() { Vec::new() } else { parse_mu(&mut ls, &f, s)? };
    if !ls.done() {
        return ls.err("unexpected trailing content");
    }
    LinearSProfile::new(&sigma, s, y, z, m, mu)
}

/// The summary line of an obstruction search.
pub fn manifest_line(relation: &str, p: usize, n_max: usize, count: usize) -> String {
    format!("obstructions {relation} p={p} n_max={n_max} count={count}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::profile_of;
    use crate::width::encode;

    const C4: &str = "# four-cycle\nfield 2 1\nsigma identity\nn 4\n0 1 0 1\n1 0 1 0\n0 1 0 1\n1 0 1 0\n";

    #[test]
    fn graph_roundtrip() {
        let g = parse_graph(C4).unwrap();
        assert_eq!(g, SGraph::cycle(4));
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
        let h = g.relabel(vec![5, 6, 7, 9]).unwrap();
        let text = write_graph(&h);
        assert!(text.contains("names 5 6 7 9"));
        assert_eq!(parse_graph(&text).unwrap(), h);
    }

    #[test]
    fn gf4_frobenius_graph() {
        let text = "field 2 2 1 1 1\nsigma frobenius 1\nn 2\n0 2\n3 0\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.at(0, 1), 2);
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
        assert!(parse_graph("field 4\nn 2\n0 2\n2 0\n").is_ok());
    }

    #[test]
    fn parse_errors_carry_lines() {
        let bad = "field 2 1\nn 2\n0 1\n1 0 1\n";
        assert!(matches!(parse_graph(bad), Err(Error::Parse { line: 4, .. })));
        let asym = "field 2 1\nn 2\n0 1\n0 0\n";
        assert!(matches!(parse_graph(asym), Err(Error::NotSigmaSymmetric(..))));
        assert!(matches!(parse_graph("field 2 1\nn 1\n3\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_graph("n 1\n0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_graph("field 6\nn 0\n"), Err(Error::NoBuiltinField(6))));
    }

    #[test]
    fn boundaried_roundtrip() {
        let text = "field 3 1\nsigma negation\nn 2\n0 1\n2 0\ns 1\ngamma\n1\n2\nmu 1\n1 2 1 2\n";
        let bg = parse_boundaried(text).unwrap();
        assert_eq!(bg.s, 1);
        assert_eq!(bg.mu[0].mult, 2);
        assert_eq!(parse_boundaried(&write_boundaried(&bg)).unwrap(), bg);
        let plain = parse_boundaried(C4).unwrap();
        assert_eq!(plain.s, 0);
    }

    #[test]
    fn matroid_roundtrip() {
        let text = "field 2 1\nelements 0 1 2 3\n1 0 1 1\n0 1 1 0\n";
        let m = parse_matroid(text).unwrap();
        assert_eq!(m.rank(), 2);
        let back = parse_matroid(&write_matroid(&m)).unwrap();
        assert_eq!(back.rank_table(), m.rank_table());
    }

    #[test]
    fn layout_roundtrip() {
        let g = SGraph::cycle(5);
        let l = LinearLayout::new(&g, vec![0, 1, 4, 2, 3]).unwrap();
        let text = write_layout(&l);
        assert!(text.starts_with("width 2\norder 0 1 4 2 3\ncuts"));
        assert_eq!(parse_layout(&text).unwrap(), (l.order.clone(), Some(2)));
        assert!(parse_layout("width 1\n").is_err());
    }

    #[test]
    fn profile_roundtrip() {
        let g = SGraph::cycle(4);
        let enc = encode(&g, &LinearLayout::new(&g, vec![0, 1, 2, 3]).unwrap()).unwrap();
        let bg = BoundariedGraph::new(g, 1, vec![vec![1], vec![0], vec![1], vec![1]]).unwrap();
        let mut bg = bg;
        bg.toggle_mu(vec![1], vec![1], 1);
        let e = profile_of(&bg, &enc).unwrap();
        let text = write_profile(&e);
        assert_eq!(parse_profile(&text).unwrap(), e);
        let dump = write_encoding(&enc);
        assert!(dump.starts_with("encoding t 4 width 2\nposition 0:1 1:2 2:3 3:4\nindex 1\n"));
    }

    #[test]
    fn manifest() {
        assert_eq!(manifest_line("vertex", 1, 6, 3), "obstructions vertex p=1 n_max=6 count=3");
    }
}
