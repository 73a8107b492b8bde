use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lrwkit::bounds;
use lrwkit::io;
use lrwkit::matroid;
use lrwkit::minors::{self, Relation, DEFAULT_ORBIT_LIMIT};
use lrwkit::profiles::{self, Mode};
use lrwkit::width::{self, LinearLayout};
use lrwkit::{Error, Field, Label, SGraph, Sesqui, SigmaSpec};

const FORMAT_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "lrwkit", version, about = "Linear rank-width, pivot-minors and matroid path-width over small finite fields")]
struct Cli {
    /// Emit one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for parallel searches (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Recompute the claimed property of every emitted certificate.
    #[arg(long, global = true)]
    verify: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact linear rank-width with an optimal layout.
    Lrw {
        #[arg(long)]
        graph: String,
    },
    /// Cut-ranks, linkedness and encoding of a given layout.
    LayoutCheck {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        layout: String,
        /// Also dump the linear encoding of the layout.
        #[arg(long)]
        encoding: bool,
    },
    /// Apply pivots given as `x:y` pairs, left to right.
    Pivot {
        #[arg(long)]
        graph: String,
        #[arg(long, value_delimiter = ',', value_parser = parse_pair, required = true)]
        seq: Vec<(Label, Label)>,
    },
    /// Equivalence class under pivots or local complementations.
    Orbit {
        #[arg(long)]
        graph: String,
        #[arg(long, default_value = "pivot")]
        relation: Relation,
        #[arg(long, default_value_t = DEFAULT_ORBIT_LIMIT)]
        limit: usize,
        /// Print every member.
        #[arg(long)]
        members: bool,
    },
    /// Whether one graph is a pivot- or vertex-minor of another.
    MinorTest {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        minor: String,
        #[arg(long, default_value = "pivot")]
        relation: Relation,
        #[arg(long, default_value_t = DEFAULT_ORBIT_LIMIT)]
        limit: usize,
    },
    /// Obstructions for linear rank-width at most p.
    Obstructions {
        #[arg(long, default_value_t = 2)]
        field: usize,
        #[arg(long, value_enum, default_value_t = SigmaArg::Identity)]
        sigma: SigmaArg,
        #[arg(long, default_value = "vertex")]
        relation: Relation,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        nmax: usize,
    },
    /// Pivots linking two vertex sets at cut value k.
    TutteLink {
        #[arg(long)]
        graph: String,
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<Label>,
        #[arg(long, value_delimiter = ',', required = true)]
        y: Vec<Label>,
        #[arg(long)]
        k: usize,
    },
    /// Exact path-width of a represented matroid.
    MatroidPw {
        #[arg(long)]
        matroid: String,
    },
    /// Fundamental graph of a represented matroid for a basis.
    Fundamental {
        #[arg(long)]
        matroid: String,
        /// Basis elements (default: the first basis in element order).
        #[arg(long, value_delimiter = ',')]
        basis: Option<Vec<Label>>,
    },
    /// Whether a matroid is a minor-minimal obstruction for path-width at most k.
    MatroidObstruction {
        #[arg(long)]
        matroid: String,
        #[arg(long)]
        k: usize,
    },
    /// Profile of a (boundaried) graph along a layout, with its p-width.
    Profile {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        layout: String,
        #[arg(long)]
        p: usize,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Direct dominance between two profile files of equal length.
    Dominance {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        p: usize,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Exact values of the obstruction size bounds.
    Bounds {
        /// Evaluate l_k(c) for this k (needs --c).
        #[arg(long, requires = "c")]
        lk: Option<u32>,
        #[arg(long)]
        c: Option<String>,
        #[arg(long)]
        p: Option<u32>,
        /// Label dimension; with --p and --q evaluates the profile length bound.
        #[arg(long, requires = "p")]
        s: Option<u32>,
        #[arg(long, default_value_t = 2)]
        q: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SigmaArg {
    Identity,
    Negation,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum ModeKind {
    Exhaustive,
    Sampled,
}

#[derive(Args)]
struct ModeArgs {
    #[arg(long, value_enum, default_value_t = ModeKind::Exhaustive)]
    mode: ModeKind,
    /// Number of sampled tuples.
    #[arg(long, default_value_t = 1000)]
    budget: usize,
    /// Seed for sampled mode (required there).
    #[arg(long)]
    seed: Option<u64>,
}

impl ModeArgs {
    fn mode(&self) -> Result<Mode, Failure> {
        match self.mode {
            ModeKind::Exhaustive => Ok(Mode::Exhaustive),
            ModeKind::Sampled => match self.seed {
                Some(seed) => Ok(Mode::Sampled {
                    budget: self.budget,
                    seed,
                }),
                None => Err(Failure::Usage("--mode sampled requires --seed".into())),
            },
        }
    }
}

fn parse_pair(s: &str) -> Result<(Label, Label), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("`{s}` is not of the form x:y"))?;
    let a = a.trim().parse().map_err(|_| format!("bad vertex `{a}`"))?;
    let b = b.trim().parse().map_err(|_| format!("bad vertex `{b}`"))?;
    Ok((a, b))
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Domain(e.to_string())
    }
}

/// Accumulated output: text lines and the JSON body.
struct Out {
    text: String,
    json: serde_json::Map<String, Value>,
}

impl Out {
    fn new(command: &str) -> Out {
        let mut json = serde_json::Map::new();
        json.insert("format".into(), json!("lrwkit"));
        json.insert("version".into(), json!(FORMAT_VERSION));
        json.insert("command".into(), json!(command));
        Out {
            text: String::new(),
            json,
        }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        if !s.as_ref().ends_with('\n') {
            self.text.push('\n');
        }
    }

    fn set(&mut self, key: &str, v: Value) {
        self.json.insert(key.into(), v);
    }
}

fn read(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Domain(format!("Io: {path}: {e}")))
}

fn graph_json(g: &SGraph) -> Value {
    json!({
        "field": g.field().order(),
        "sigma": g.sigma().spec().to_string(),
        "vertices": g.vertices(),
        "adjacency": g.adj().to_rows(),
    })
}

fn layout_json(l: &LinearLayout) -> Value {
    json!({ "width": l.width, "order": l.order, "cuts": l.cut_ranks })
}

fn verified(out: &mut Out, ok: bool) -> Result<(), Failure> {
    out.line(format!("verified {ok}"));
    out.set("verified", json!(ok));
    if ok {
        Ok(())
    } else {
        Err(Failure::Domain("VerificationFailed: recomputation disagrees with the certificate".into()))
    }
}

fn run(cli: &Cli, out: &mut Out) -> Result<(), Failure> {
    match &cli.cmd {
        Cmd::Lrw { graph } => {
            let g = io::parse_graph(&read(graph)?)?;
            let (w, layout) = width::lrw_exact(&g)?;
            out.line(format!("lrw {w}"));
            out.line(io::write_layout(&layout));
            out.set("lrw", json!(w));
            out.set("layout", layout_json(&layout));
            if cli.verify {
                let again = LinearLayout::new(&g, layout.order.clone())?;
                verified(out, again.width == w)?;
            }
        }
        Cmd::LayoutCheck { graph, layout, encoding } => {
            let g = io::parse_graph(&read(graph)?)?;
            let (order, claimed) = io::parse_layout(&read(layout)?)?;
            let l = LinearLayout::new(&g, order)?;
            let linked = width::is_linked_layout(&g, &l)?;
            out.line(io::write_layout(&l));
            out.line(format!("linked {linked}"));
            out.set("layout", layout_json(&l));
            out.set("linked", json!(linked));
            let enc = width::encode(&g, &l)?;
            let decodes = width::decode_check(&g, &enc);
            out.line(format!("encoding-width {} decodes {decodes}", enc.width()));
            out.set("encoding_width", json!(enc.width()));
            out.set("decodes", json!(decodes));
            if *encoding {
                out.line(io::write_encoding(&enc));
                out.set("encoding", json!(io::write_encoding(&enc)));
            }
            if let Some(c) = claimed {
                if c != l.width {
                    return Err(Failure::Domain(format!(
                        "LayoutMismatch: claimed width {c}, recomputed {}",
                        l.width
                    )));
                }
            }
            if cli.verify {
                verified(out, decodes)?;
            }
        }
        Cmd::Pivot { graph, seq } => {
            let g = io::parse_graph(&read(graph)?)?;
            let h = minors::apply_pivots(&g, seq)?;
            out.line(io::write_graph(&h));
            out.set("graph", graph_json(&h));
            if cli.verify {
                let ok = h.is_sigma_symmetric()
                    && h.has_zero_diagonal()
                    && (0..1u64 << g.n().min(16)).all(|m| g.cutrank_mask(m) == h.cutrank_mask(m));
                verified(out, ok)?;
            }
        }
        Cmd::Orbit {
            graph,
            relation,
            limit,
            members,
        } => {
            let g = io::parse_graph(&read(graph)?)?;
            let orb = minors::orbit(&g, *relation, *limit)?;
            out.line(format!("orbit {relation} size={} truncated={}", orb.len(), orb.truncated));
            out.set("size", json!(orb.len()));
            out.set("truncated", json!(orb.truncated));
            if *members {
                let mut list = Vec::new();
                for h in orb.graphs() {
                    out.line(io::write_graph(h));
                    list.push(graph_json(h));
                }
                out.set("members", Value::Array(list));
            }
        }
        Cmd::MinorTest {
            graph,
            minor,
            relation,
            limit,
        } => {
            let g = io::parse_graph(&read(graph)?)?;
            let h = io::parse_graph(&read(minor)?)?;
            let yes = minors::is_minor(&h, &g, *relation, *limit)?;
            out.line(format!("minor {yes}"));
            out.set("minor", json!(yes));
        }
        Cmd::Obstructions {
            field,
            sigma,
            relation,
            p,
            nmax,
        } => {
            let f = Field::gf(*field)?;
            let s = match sigma {
                SigmaArg::Identity => Sesqui::identity(&f),
                SigmaArg::Negation => Sesqui::new(&f, SigmaSpec::Negation)?,
            };
            let obs = minors::obstructions(&s, *relation, *p, *nmax)?;
            let mut list = Vec::new();
            for g in &obs {
                out.line(io::write_graph(g));
                list.push(graph_json(g));
            }
            let manifest = io::manifest_line(&relation.to_string(), *p, *nmax, obs.len());
            out.line(&manifest);
            out.set("obstructions", Value::Array(list));
            out.set("manifest", json!(manifest));
            out.set("count", json!(obs.len()));
            if cli.verify {
                let mut ok = true;
                for g in &obs {
                    ok &= minors::is_obstruction(g, *relation, *p, DEFAULT_ORBIT_LIMIT)?;
                }
                verified(out, ok)?;
            }
        }
        Cmd::TutteLink { graph, x, y, k } => {
            let g = io::parse_graph(&read(graph)?)?;
            match minors::tutte_link(&g, x, y, *k)? {
                None => {
                    out.line("link none");
                    out.set("link", Value::Null);
                }
                Some(seq) => {
                    let pairs: Vec<String> = seq.iter().map(|(a, b)| format!("{a}:{b}")).collect();
                    out.line(format!("link {}", pairs.join(",")).trim_end());
                    out.set("link", json!(seq));
                    if cli.verify {
                        let h = minors::apply_pivots(&g, &seq)?;
                        verified(out, minors::induced_cut(&h, x, y)? == *k)?;
                    }
                }
            }
        }
        Cmd::MatroidPw { matroid } => {
            let m = io::parse_matroid(&read(matroid)?)?;
            let (w, order) = m.pathwidth_exact()?;
            let cuts = m.layout_cuts(&order)?;
            out.line(format!("pathwidth {w}"));
            out.line(format!("width {w}"));
            let ids: Vec<String> = order.iter().map(|v| v.to_string()).collect();
            out.line(format!("order {}", ids.join(" ")));
            let cs: Vec<String> = cuts.iter().map(|v| v.to_string()).collect();
            out.line(format!("cuts {}", cs.join(" ")));
            out.set("pathwidth", json!(w));
            out.set("order", json!(order));
            out.set("cuts", json!(cuts));
            if cli.verify {
                verified(out, cuts.iter().copied().max().unwrap_or(1).max(1) == w)?;
            }
        }
        Cmd::Fundamental { matroid, basis } => {
            let m = io::parse_matroid(&read(matroid)?)?;
            let b = basis.clone().unwrap_or_else(|| m.some_basis());
            let (g, a, rest) = m.fundamental_graph(&b)?;
            out.line(io::write_graph(&g));
            let fmt = |v: &[Label]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
            out.line(format!("basis {}", fmt(&a)));
            out.line(format!("cobasis {}", fmt(&rest)));
            out.set("graph", graph_json(&g));
            out.set("basis", json!(a));
            out.set("cobasis", json!(rest));
            if cli.verify {
                let full = (1u64 << m.size()) - 1;
                let ok = (0..=full).all(|mask| {
                    let xs: Vec<Label> = (0..m.size()).filter(|i| mask >> i & 1 == 1).map(|i| m.ground()[i]).collect();
                    m.connectivity(&xs).ok() == g.cutrank(&xs).ok().map(|r| r + 1)
                });
                verified(out, ok)?;
            }
        }
        Cmd::MatroidObstruction { matroid, k } => {
            let m = io::parse_matroid(&read(matroid)?)?;
            let yes = m.is_pathwidth_obstruction(*k)?;
            out.line(format!("obstruction {yes}"));
            out.set("obstruction", json!(yes));
            if cli.verify {
                verified(out, matroid::fundamental_graph_criterion(&m, *k)? == yes)?;
            }
        }
        Cmd::Profile { graph, layout, p, mode } => {
            let mode = mode.mode()?;
            let bg = io::parse_boundaried(&read(graph)?)?;
            let (order, _) = io::parse_layout(&read(layout)?)?;
            let l = LinearLayout::new(&bg.base, order)?;
            let enc = width::encode(&bg.base, &l)?;
            let e = profiles::profile_of(&bg, &enc)?;
            let w = profiles::p_width(&e, *p, mode)?;
            out.line(io::write_profile(&e));
            let kind = if w.exact { "exact" } else { "lower-bound" };
            out.line(format!("p-width {} {kind}", w.value));
            out.set("profile", json!(io::write_profile(&e)));
            out.set("p_width", json!(w.value));
            out.set("exact", json!(w.exact));
        }
        Cmd::Dominance { left, right, p, mode } => {
            let mode = mode.mode()?;
            let a = io::parse_profile(&read(left)?)?;
            let b = io::parse_profile(&read(right)?)?;
            let yes = profiles::directly_dominates(&a, &b, *p, mode)?;
            let kind = if mode.is_exact() { "exact" } else { "sampled" };
            out.line(format!("dominated {yes} {kind}"));
            out.set("dominated", json!(yes));
            out.set("exact", json!(mode.is_exact()));
        }
        Cmd::Bounds { lk, c, p, s, q } => {
            if let Some(k) = lk {
                let c = c.as_deref().unwrap_or_default();
                let c: bounds::BigUint = c
                    .parse()
                    .map_err(|_| Failure::Usage(format!("--c expects a natural number, got `{c}`")))?;
                let v = bounds::bound_lk(*k, &c);
                out.line(v.to_string());
                out.set("lk", json!(v.to_string()));
            } else if let (Some(p), Some(s)) = (p, s) {
                let v = bounds::bound_plength(*p, *s, *q)?;
                out.line(v.to_string());
                out.set("plength", json!(v.to_string()));
            } else if let Some(p) = p {
                let b = bounds::bound_main(*p, *q)?;
                out.line(format!("s {}", b.s));
                out.line(format!("exponent {}", b.exponent));
                out.line(format!("c {}", b.c));
                out.line(format!("bound {}", b.bound));
                out.set("s", json!(b.s));
                out.set("exponent", json!(b.exponent.to_string()));
                out.set("c", json!(b.c.to_string()));
                out.set("bound", json!(b.bound.to_string()));
            } else {
                return Err(Failure::Usage("bounds needs --lk with --c, or --p (with optional --s)".into()));
            }
        }
    }
    Ok(())
}

fn command_name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Lrw { .. } => "lrw",
        Cmd::LayoutCheck { .. } => "layout-check",
        Cmd::Pivot { .. } => "pivot",
        Cmd::Orbit { .. } => "orbit",
        Cmd::MinorTest { .. } => "minor-test",
        Cmd::Obstructions { .. } => "obstructions",
        Cmd::TutteLink { .. } => "tutte-link",
        Cmd::MatroidPw { .. } => "matroid-pw",
        Cmd::Fundamental { .. } => "fundamental",
        Cmd::MatroidObstruction { .. } => "matroid-obstruction",
        Cmd::Profile { .. } => "profile",
        Cmd::Dominance { .. } => "dominance",
        Cmd::Bounds { .. } => "bounds",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("usage error: --threads must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().ok();
    }
    let mut out = Out::new(command_name(&cli.cmd));
    let res = run(&cli, &mut out);
    if cli.json {
        if let Err(Failure::Domain(msg) | Failure::Usage(msg)) = &res {
            out.set("error", json!(msg));
        }
        println!("{}", Value::Object(out.json));
    } else {
        print!("{}", out.text);
    }
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
