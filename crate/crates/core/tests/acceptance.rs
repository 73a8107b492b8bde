//! Acceptance criteria. Each test prints one `criterion N: PASS|FAIL` line;
//! run with `--nocapture` to see them.

use std::collections::BTreeMap;
use std::time::Instant;

use lrwkit::bounds::{bound_lk, bound_main, bound_plength, BigUint};
use lrwkit::graph::MuEntry;
use lrwkit::matroid::{bases_pivot_equivalent, verify_basis_sequence, RepMatroid};
use lrwkit::minors::{self, Relation};
use lrwkit::profiles::*;
use lrwkit::width::{self, encode_with_positions, LinearLayout};
use lrwkit::{BoundariedGraph, Elem, FMatrix, Field, Label, SGraph, Sesqui};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(n: usize, pass: bool, detail: String) {
    println!("criterion {n}: {} {detail}", if pass { "PASS" } else { "FAIL" });
}

fn gf2() -> Sesqui {
    Sesqui::identity(&Field::gf(2).unwrap())
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Every labelled simple graph on `n` vertices.
fn all_binary(n: usize) -> Vec<SGraph> {
    let ps = pairs(n);
    (0..1u64 << ps.len())
        .map(|m| {
            let edges: Vec<(usize, usize)> = ps.iter().enumerate().filter(|(k, _)| m >> k & 1 == 1).map(|(_, &e)| e).collect();
            SGraph::binary(n, &edges)
        })
        .collect()
}

/// Labelled graphs up to simple isomorphism, connected or not.
fn binary_classes(n: usize) -> Vec<SGraph> {
    let mut seen = std::collections::HashSet::new();
    all_binary(n).into_iter().filter(|g| seen.insert(g.canonical_form().unwrap())).collect()
}

/// Cut-rank of `mask` by Gaussian elimination on the explicit submatrix.
fn cutrank_oracle(g: &SGraph, mask: u64) -> usize {
    let n = g.n();
    let xs: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
    let ys: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 0).collect();
    g.adj().submatrix(&xs, &ys).rank()
}

fn sandwich_oracle(g: &SGraph, lo: u64, hi: u64) -> usize {
    let free = hi & !lo;
    let mut best = usize::MAX;
    let mut sub = free;
    loop {
        best = best.min(cutrank_oracle(g, lo | sub));
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & free;
    }
    best
}

#[test]
fn c1_figure_one_obstructions() {
    let sigma = gf2();
    let start = Instant::now();
    let found = minors::obstructions(&sigma, Relation::Vertex, 1, 6).unwrap();
    let reference = [
        SGraph::cycle(5),
        SGraph::binary(6, &[(0, 1), (1, 2), (0, 2), (0, 3), (1, 4), (2, 5)]),
        SGraph::binary(6, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (2, 5)]),
    ];
    // Bijection between reference drawings and returned classes, where a
    // returned representative matches a drawing if it lies in its local
    // equivalence class.
    let mut used = vec![false; found.len()];
    let mut matched = 0;
    for r in &reference {
        let orb = minors::orbit(r, Relation::Vertex, minors::DEFAULT_ORBIT_LIMIT).unwrap();
        assert!(!orb.truncated);
        let hits: Vec<usize> = (0..found.len())
            .filter(|&k| {
                let c = found[k].canonical_form().unwrap();
                orb.members.iter().any(|(m, _)| *m == c)
            })
            .collect();
        if hits.len() == 1 && !used[hits[0]] {
            used[hits[0]] = true;
            matched += 1;
        }
    }
    let pass = found.len() == 3 && matched == 3;
    report(1, pass, format!("classes={} matched={matched}/3 time={:.2?}", found.len(), start.elapsed()));
    assert!(pass);
}

#[test]
fn c2_pivot_preserves_cutrank_and_symmetry() {
    let start = Instant::now();
    let mut checked = 0usize;
    let mut bad = 0usize;
    let mut check = |g: &SGraph| {
        let n = g.n();
        let base: Vec<usize> = (0..1u64 << n).map(|m| g.cutrank_mask(m)).collect();
        for x in 0..n {
            for y in 0..n {
                if x == y || g.at(x, y) == 0 {
                    continue;
                }
                let h = g.pivot_pos(x, y).unwrap();
                checked += 1;
                let ok = h.is_sigma_symmetric()
                    && h.has_zero_diagonal()
                    && (0..1u64 << n).all(|m| cutrank_oracle(&h, m) == base[m as usize]);
                if !ok {
                    bad += 1;
                }
            }
        }
    };
    for n in 1..=6 {
        for g in all_binary(n).into_iter().filter(|g| g.is_connected()) {
            check(&g);
        }
    }
    let neg = Sesqui::negation(&Field::gf(3).unwrap());
    for n in 1..=4 {
        let ps = pairs(n);
        for code in 0..3u64.pow(ps.len() as u32) {
            let mut c = code;
            let edges: Vec<(usize, usize, Elem)> = ps
                .iter()
                .filter_map(|&(i, j)| {
                    let v = (c % 3) as Elem;
                    c /= 3;
                    (v != 0).then_some((i, j, v))
                })
                .collect();
            check(&SGraph::from_edges(&neg, n, &edges).unwrap());
        }
    }
    report(2, bad == 0, format!("pivots={checked} violations={bad} time={:.2?}", start.elapsed()));
    assert_eq!(bad, 0);
}

#[test]
fn c3_pivot_is_three_local_complements() {
    let mut checked = 0usize;
    let mut bad = 0usize;
    for n in 2..=5 {
        for g in all_binary(n) {
            for x in 0..n {
                for y in 0..n {
                    if x == y || g.at(x, y) == 0 {
                        continue;
                    }
                    let p = g.pivot_pos(x, y).unwrap();
                    let l = g.local_complement_pos(x).unwrap().local_complement_pos(y).unwrap().local_complement_pos(x).unwrap();
                    checked += 1;
                    if p.adj() != l.adj() {
                        bad += 1;
                    }
                }
            }
        }
    }
    report(3, bad == 0, format!("pivots={checked} mismatches={bad}"));
    assert_eq!(bad, 0);
}

#[test]
fn c4_tutte_link_matches_sandwich_minimum() {
    let start = Instant::now();
    let mut instances = 0usize;
    let mut linked = 0usize;
    let mut bad = 0usize;
    for n in 1..=6 {
        for g in binary_classes(n) {
            let labels = g.vertices().to_vec();
            // Each vertex goes to X, Y or neither.
            for code in 0..3u64.pow(n as u32) {
                let (mut xm, mut ym, mut c) = (0u64, 0u64, code);
                for v in 0..n {
                    match c % 3 {
                        1 => xm |= 1 << v,
                        2 => ym |= 1 << v,
                        _ => {}
                    }
                    c /= 3;
                }
                let k = cutrank_oracle(&g, xm);
                if cutrank_oracle(&g, ym) != k {
                    continue;
                }
                let xs: Vec<Label> = (0..n).filter(|&v| xm >> v & 1 == 1).map(|v| labels[v]).collect();
                let ys: Vec<Label> = (0..n).filter(|&v| ym >> v & 1 == 1).map(|v| labels[v]).collect();
                let full = (1u64 << n) - 1;
                let expect = sandwich_oracle(&g, xm, full & !ym) >= k;
                let got = minors::tutte_link(&g, &xs, &ys, k).unwrap();
                instances += 1;
                let ok = match (&got, expect) {
                    (Some(seq), true) => {
                        linked += 1;
                        seq.iter().all(|(a, b)| !ys.contains(a) && !ys.contains(b))
                            && minors::induced_cut(&minors::apply_pivots(&g, seq).unwrap(), &xs, &ys).unwrap() == k
                    }
                    (None, false) => true,
                    _ => false,
                };
                if !ok {
                    bad += 1;
                }
            }
        }
    }
    report(4, bad == 0, format!("pairs={instances} linked={linked} discrepancies={bad} time={:.2?}", start.elapsed()));
    assert_eq!(bad, 0);
}

/// Binary matroids `[I_r | D]` on `n` elements, one per choice of `r` and `D`;
/// every binary matroid on `n` elements is isomorphic to one of them.
fn standard_binary_matroids(n: usize) -> Vec<RepMatroid> {
    let f = Field::gf(2).unwrap();
    let mut out = Vec::new();
    for r in 0..=n {
        let k = r * (n - r);
        for code in 0..1u64 << k {
            let rows: Vec<Vec<Elem>> = (0..r)
                .map(|i| {
                    (0..n)
                        .map(|j| if j < r { (i == j) as Elem } else { (code >> (i * (n - r) + j - r) & 1) as Elem })
                        .collect()
                })
                .collect();
            out.push(RepMatroid::from_rows(&f, (0..n as Label).collect(), &rows).unwrap());
        }
    }
    out
}

fn random_binary_matroid(rng: &mut ChaCha8Rng, n: usize) -> RepMatroid {
    let f = Field::gf(2).unwrap();
    let r = rng.gen_range(1..=n);
    let rows: Vec<Vec<Elem>> = (0..r).map(|_| (0..n).map(|_| rng.gen_range(0..2)).collect()).collect();
    RepMatroid::from_rows(&f, (0..n as Label).collect(), &rows).unwrap()
}

/// `r(X)` from the columns of the representation.
fn rank_oracle(m: &RepMatroid, mask: u64) -> usize {
    let cols: Vec<usize> = (0..m.size()).filter(|&i| mask >> i & 1 == 1).collect();
    let rows: Vec<usize> = (0..m.rep().nrows()).collect();
    m.rep().submatrix(&rows, &cols).rank()
}

#[test]
fn c5_matroid_bridge() {
    let start = Instant::now();
    let mut ms: Vec<RepMatroid> = (1..=5).flat_map(standard_binary_matroids).collect();
    let exhaustive = ms.len();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..600 {
        let n = rng.gen_range(1..=7);
        ms.push(random_binary_matroid(&mut rng, n));
    }
    let mut bad_lambda = 0usize;
    let mut bad_pw = 0usize;
    for m in &ms {
        let n = m.size();
        let full = (1u64 << n) - 1;
        let r = rank_oracle(m, full);
        let (g, _, _) = m.fundamental_graph(&m.some_basis()).unwrap();
        for x in 0..=full {
            let lambda = rank_oracle(m, x) + rank_oracle(m, full & !x) + 1 - r;
            if lambda != cutrank_oracle(&g, x) + 1 || m.connectivity_mask(x) != lambda {
                bad_lambda += 1;
            }
        }
        if m.pathwidth_exact().unwrap().0 != width::lrw(&g).unwrap() + 1 {
            bad_pw += 1;
        }
    }
    let pass = bad_lambda == 0 && bad_pw == 0;
    report(
        5,
        pass,
        format!(
            "matroids={} (exhaustive {exhaustive}, random {}) lambda_violations={bad_lambda} pathwidth_violations={bad_pw} time={:.2?}",
            ms.len(),
            ms.len() - exhaustive,
            start.elapsed()
        ),
    );
    assert!(pass);
}

#[test]
fn c6_all_basis_pairs_are_pivot_equivalent() {
    let start = Instant::now();
    let mut ms: Vec<RepMatroid> = (1..=6).flat_map(standard_binary_matroids).collect();
    // A GF(3) sample, where the fundamental graphs agree only up to scaling.
    let f3 = Field::gf(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..60 {
        let n = rng.gen_range(2..=6);
        let r = rng.gen_range(1..n);
        let rows: Vec<Vec<Elem>> = (0..r).map(|_| (0..n).map(|_| rng.gen_range(0..3)).collect()).collect();
        ms.push(RepMatroid::from_rows(&f3, (0..n as Label).collect(), &rows).unwrap());
    }
    let mut checked = 0usize;
    let mut bad = 0usize;
    for m in &ms {
        let bases = m.bases();
        for b1 in &bases {
            for b2 in &bases {
                checked += 1;
                let ok = bases_pivot_equivalent(m, b1, b2)
                    .and_then(|seq| verify_basis_sequence(m, b1, b2, &seq))
                    .unwrap_or(false);
                if !ok {
                    bad += 1;
                }
            }
        }
    }
    report(6, bad == 0, format!("matroids={} basis_pairs={checked} failures={bad} time={:.2?}", ms.len(), start.elapsed()));
    assert_eq!(bad, 0);
}

/// Linkedness of a layout by brute force over sandwiched sets.
fn linked_oracle(g: &SGraph, order: &[Label]) -> bool {
    let n = order.len();
    let mut prefix = vec![0u64; n + 1];
    for i in 1..=n {
        prefix[i] = prefix[i - 1] | 1 << g.pos(order[i - 1]).unwrap();
    }
    (1..=n).all(|i| {
        (i..=n).all(|j| {
            let along = (i..=j).map(|k| cutrank_oracle(g, prefix[k])).min().unwrap();
            along == sandwich_oracle(g, prefix[i], prefix[j])
        })
    })
}

#[test]
fn c7_linked_layouts_of_optimal_width() {
    let start = Instant::now();
    let mut checked = 0usize;
    let mut bad = 0usize;
    for n in 1..=6 {
        for g in all_binary(n).into_iter().filter(|g| g.is_connected()) {
            let lrw = width::lrw(&g).unwrap();
            let layout: LinearLayout = width::find_linked_layout(&g).unwrap();
            let w = width::layout_width(&g, &layout.order).unwrap();
            checked += 1;
            if w != lrw || !linked_oracle(&g, &layout.order) {
                bad += 1;
            }
        }
    }
    report(7, bad == 0, format!("graphs={checked} failures={bad} time={:.2?}", start.elapsed()));
    assert_eq!(bad, 0);
}

/// Label-block `(coeffs | label)` with every label in `labels` present.
fn label_block(sigma: &Sesqui, rng: &mut ChaCha8Rng, labels: &[Elem], inner: usize) -> FMatrix {
    let mut rows: Vec<Vec<Elem>> = Vec::new();
    for &l in labels {
        let copies = if inner == 0 { 1 } else { rng.gen_range(1..=2) };
        for _ in 0..copies {
            let mut r: Vec<Elem> = (0..inner).map(|_| rng.gen_range(0..2)).collect();
            r.push(l);
            if !rows.contains(&r) {
                rows.push(r);
            }
        }
    }
    FMatrix::from_rows(sigma.field(), inner + 1, &rows).unwrap()
}

/// A random GF(2) 1-profile of length `t` whose label sets do not change.
fn micro_profile(sigma: &Sesqui, rng: &mut ChaCha8Rng, t: usize) -> LinearSProfile {
    let pick = |rng: &mut ChaCha8Rng| -> Vec<Elem> {
        match rng.gen_range(0..4) {
            0 => vec![],
            1 => vec![0],
            2 => vec![1],
            _ => vec![0, 1],
        }
    };
    let ly = pick(rng);
    let lz = pick(rng);
    let (mut y, mut z, mut m) = (vec![], vec![], vec![]);
    for _ in 0..t {
        let a = rng.gen_range(0..=1);
        let b = rng.gen_range(0..=1);
        y.push(label_block(sigma, rng, &ly, a));
        z.push(label_block(sigma, rng, &lz, b));
        let mut mm = FMatrix::zeros(sigma.field(), a, b);
        if a == 1 && b == 1 {
            mm.set(0, 0, rng.gen_range(0..2));
        }
        m.push(mm);
    }
    let mut mu = vec![];
    if rng.gen_bool(0.5) {
        mu.push(MuEntry {
            v1: vec![rng.gen_range(0..2)],
            v2: vec![rng.gen_range(0..2)],
            t: 1,
            mult: 1,
        });
    }
    LinearSProfile::new(sigma, 1, y, z, m, mu).unwrap()
}

fn strict_extreme_at(r: &[usize], i: usize) -> bool {
    (0..r.len()).all(|k| k == i || r[i] > r[k]) || (0..r.len()).all(|k| k == i || r[i] < r[k])
}

#[test]
fn c8_profile_extreme_index_harness() {
    let start = Instant::now();
    let sigma = gf2();
    let ds = tuples(&sigma, 1, 1, Mode::Exhaustive).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let size_bound = bound_plength(1, 1, 2).unwrap();
    let mut homogeneous = 0usize;
    let mut redundant = 0usize;
    let mut per_t: BTreeMap<usize, [usize; 3]> = BTreeMap::new();
    let mut extreme_viol = 0usize;
    let mut extreme_viol_nonconstant = 0usize;
    let mut neighbour_viol = 0usize;
    let mut shortcut_bad = 0usize;
    let mut size_bad = 0usize;
    let mut generated = 0usize;
    while homogeneous < 1000 || redundant < 200 {
        let t = rng.gen_range(2..=5);
        let e = micro_profile(&sigma, &mut rng, t);
        generated += 1;
        let tab = rank_table_for(&e, &ds, true).unwrap();
        if let Some(pair) = redundant_pair_in(&e, &tab) {
            redundant += 1;
            if redundant <= 200 && !shortcut_equivalent(&e, pair, 1, Mode::Exhaustive).unwrap() {
                shortcut_bad += 1;
            }
            continue;
        }
        homogeneous += 1;
        if BigUint::from(t) > size_bound {
            size_bad += 1;
        }
        let stats = per_t.entry(t).or_default();
        stats[0] += 1;
        let (mut ex, mut ex_nc, mut nb) = (false, false, false);
        for r in &tab.ranks {
            if extreme_in(r).is_none() {
                ex = true;
                ex_nc |= r.iter().any(|&x| x != r[0]);
            }
            if strict_extreme_at(r, 0) && !strict_extreme_at(r, 1) {
                nb = true;
            }
        }
        if ex {
            extreme_viol += 1;
            stats[1] += 1;
        }
        if ex_nc {
            extreme_viol_nonconstant += 1;
        }
        if nb {
            neighbour_viol += 1;
            stats[2] += 1;
        }
    }
    let extremes_hold = extreme_viol == 0 && neighbour_viol == 0;
    let per_t: Vec<String> = per_t.iter().map(|(t, s)| format!("t{t}:{}/{}/{}", s[0], s[1], s[2])).collect();
    report(
        8,
        extremes_hold && shortcut_bad == 0 && size_bad == 0,
        format!(
            "generated={generated} homogeneous={homogeneous} extreme_violations={extreme_viol} \
             (non-constant {extreme_viol_nonconstant}) neighbour_violations={neighbour_viol} \
             per_t(homog/extreme/neighbour)=[{}] shortcut_checked={} shortcut_failures={shortcut_bad} \
             length_bound_failures={size_bad} tuples={} time={:.2?}",
            per_t.join(" "),
            redundant.min(200),
            ds.len(),
            start.elapsed()
        ),
    );
    // The extreme-index counts are reported, not asserted: a tuple on
    // which every index has the same rank has no strict extreme index.
    assert!(homogeneous >= 1000);
    assert_eq!(shortcut_bad, 0);
    assert_eq!(size_bad, 0);
}

#[test]
fn c9_bound_arithmetic() {
    let mut ok = true;
    for c in 0..50u32 {
        ok &= bound_lk(0, &BigUint::from(c)) == BigUint::from(1 + c);
    }
    ok &= bound_lk(1, &BigUint::from(2u32)) == BigUint::from(9u32);
    ok &= bound_plength(1, 1, 2).unwrap() == BigUint::from(3u32) << 36usize;
    let mains: Vec<BigUint> = (0..=3).map(|p| bound_main(p, 2).unwrap().bound).collect();
    let monotone = mains.windows(2).all(|w| w[0] < w[1]);
    ok &= monotone;
    let bits: Vec<String> = mains.iter().map(|b| b.bits().to_string()).collect();
    report(9, ok, format!("bound_main bits p=0..3: {}", bits.join(" ")));
    assert!(ok);
}

/// All `s = 1` boundaried GF(2) graphs on `n` vertices with labels from
/// `first`, with an empty boundary or a single boundary entry.
fn boundaried(n: usize, first: Label, with_mu: bool) -> Vec<BoundariedGraph> {
    let mut out = Vec::new();
    let mus: Vec<Option<(Elem, Elem)>> = if with_mu {
        std::iter::once(None).chain([(0, 0), (0, 1), (1, 0), (1, 1)].map(Some)).collect()
    } else {
        vec![None]
    };
    for g in all_binary(n) {
        let g = g.relabel((first..first + n as Label).collect()).unwrap();
        for lab in 0..1u32 << n {
            let gamma: Vec<Vec<Elem>> = (0..n).map(|v| vec![(lab >> v & 1) as Elem]).collect();
            for mu in &mus {
                let mut b = BoundariedGraph::new(g.clone(), 1, gamma.clone()).unwrap();
                if let Some((a, c)) = *mu {
                    b.toggle_mu(vec![a], vec![c], 1);
                }
                out.push(b);
            }
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

#[test]
fn c10_merge_soundness() {
    let start = Instant::now();
    let sigma = gf2();
    let mut instances = 0usize;
    let mut mergeable_count = 0usize;
    let mut bad = 0usize;
    for total in 2..=4 {
        for a in 1..total {
            let b = total - a;
            let gs = boundaried(a, 0, true);
            let hs = boundaried(b, a as Label, false);
            // Position of merged vertex v is perm[v] + 1.
            let perms = permutations(total);
            for gg in &gs {
                for hh in &hs {
                    for gm in 0..2 {
                        let gamma = FMatrix::from_rows(sigma.field(), 1, &[vec![gm]]).unwrap();
                        let merged = gg.merge(hh, &gamma).unwrap();
                        let lrw = width::lrw(&merged).unwrap();
                        for perm in &perms {
                            let pos_g = (0..a).map(|v| (v as Label, perm[v] + 1)).collect();
                            let pos_h = (a..total).map(|v| (v as Label, perm[v] + 1)).collect();
                            let eg = encode_with_positions(&gg.base, pos_g, total).unwrap();
                            let eh = encode_with_positions(&hh.base, pos_h, total).unwrap();
                            let pe = profile_of(gg, &eg).unwrap();
                            let pf = profile_of(hh, &eh).unwrap();
                            for p in 0..=2 {
                                instances += 1;
                                if mergeable(&pe, &pf, &gamma, p).unwrap() {
                                    mergeable_count += 1;
                                    if lrw > p {
                                        bad += 1;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    report(
        10,
        bad == 0,
        format!("instances={instances} mergeable={mergeable_count} violations={bad} time={:.2?}", start.elapsed()),
    );
    assert_eq!(bad, 0);
}
