//! The special perfect orientation, directed paths and boundary measurements.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::arith::Ring;
use crate::bipartite::{Analysis, Color, EmbeddedBipartiteGraph};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct PerfectOrientation {
    /// For each graph edge, the node it leaves (see `Embedding` for node numbering).
    #[serde(skip)]
    pub tail: Vec<usize>,
    pub sources: Vec<usize>,
    pub sinks: Vec<usize>,
    /// Edge id -> [from, to] as vertex ids or marked point numbers.
    pub direction: BTreeMap<String, [String; 2]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Path {
    pub source: usize,
    pub sink: usize,
    pub edges: Vec<String>,
    /// Names of the faces to the right of the path.
    pub dominated: Vec<String>,
    #[serde(skip)]
    pub dominated_idx: Vec<usize>,
}

fn rank(i: usize, t: usize, n: usize) -> usize {
    (i + n - t) % n
}

/// Orients the graph from the strands through each black vertex: the edge not
/// used by the strand whose start is the median (in the order starting at `t`)
/// points out of the vertex.
pub fn special_orientation(g: &EmbeddedBipartiteGraph, an: &Analysis, t: usize) -> Result<PerfectOrientation> {
    let (m, n) = (g.m(), g.n());
    if !(1..=n).contains(&t) {
        return Err(Error::Input(format!("base point {t} outside 1..{n}")));
    }
    let emb = &an.emb;
    // Strand start through each black corner.
    let mut corner_strand = vec![usize::MAX; emb.corner_count()];
    for z in &an.strands {
        for &c in &z.right_corners {
            corner_strand[c] = z.start;
        }
    }
    let mut tail = vec![usize::MAX; g.edges().len()];
    for v in 0..emb.nv {
        if g.vertices()[v].color != Color::Black {
            continue;
        }
        let mut three: Vec<(usize, usize)> = (0..3)
            .map(|k| {
                let s = corner_strand[emb.corner(v, k)];
                (rank(s, t, n), k)
            })
            .collect();
        if three.iter().any(|&(r, _)| r >= n) {
            return Err(Error::Orientation(format!("black vertex {} not covered by strands", g.vertices()[v].id)));
        }
        three.sort();
        let k = three[1].1;
        // The strand at corner k uses edges k and k+1; edge k+2 is the other one.
        for j in 0..3 {
            let e = emb.rot[v][j];
            tail[e] = if j == (k + 2) % 3 { v } else { emb.other(e, v) };
        }
    }
    let mut sources = Vec::new();
    let mut sinks = Vec::new();
    for w in 0..emb.nv {
        if g.vertices()[w].color != Color::White {
            continue;
        }
        let incoming = emb.rot[w].iter().filter(|&&e| tail[e] != usize::MAX && tail[e] != w).count();
        let ext = emb.rot[w].iter().copied().find(|&e| emb.is_marked(emb.other(e, w)));
        match (incoming, ext) {
            (1, ext) => {
                if let Some(e) = ext {
                    tail[e] = w;
                }
            }
            (0, Some(e)) => tail[e] = emb.other(e, w),
            _ => {
                return Err(Error::Orientation(format!(
                    "white vertex {} would have {incoming} incoming edges",
                    g.vertices()[w].id
                )))
            }
        }
        for &e in &emb.rot[w] {
            if tail[e] == usize::MAX {
                tail[e] = w;
            }
        }
    }
    for i in 1..=n {
        let e = g.external_edge(i);
        if tail[e] == emb.nv + i - 1 {
            sources.push(i);
        } else {
            sinks.push(i);
        }
    }
    if sources.len() != m {
        return Err(Error::Orientation(format!("{} sources instead of {m}", sources.len())));
    }
    let name = |x: usize| {
        if emb.is_marked(x) {
            (x - emb.nv + 1).to_string()
        } else {
            g.vertices()[x].id.clone()
        }
    };
    let direction = (0..g.edges().len())
        .map(|e| (g.edges()[e].id.clone(), [name(tail[e]), name(emb.other(e, tail[e]))]))
        .collect();
    let o = PerfectOrientation { tail, sources, sinks, direction };
    if topological_order(an, &o).is_none() {
        return Err(Error::Orientation("special orientation has a directed cycle".into()));
    }
    Ok(o)
}

/// Outgoing edges of each node under the orientation.
fn out_edges(an: &Analysis, o: &PerfectOrientation) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); an.emb.rot.len()];
    for (e, &t) in o.tail.iter().enumerate() {
        out[t].push(e);
    }
    out
}

/// A topological order of all nodes, or `None` if there is a directed cycle.
pub fn topological_order(an: &Analysis, o: &PerfectOrientation) -> Option<Vec<usize>> {
    let out = out_edges(an, o);
    let nodes = an.emb.rot.len();
    let mut indeg = vec![0usize; nodes];
    for (e, &t) in o.tail.iter().enumerate() {
        indeg[an.emb.other(e, t)] += 1;
    }
    let mut queue: VecDeque<usize> = (0..nodes).filter(|&x| indeg[x] == 0).collect();
    let mut order = Vec::with_capacity(nodes);
    while let Some(x) = queue.pop_front() {
        order.push(x);
        for &e in &out[x] {
            let y = an.emb.other(e, x);
            indeg[y] -= 1;
            if indeg[y] == 0 {
                queue.push_back(y);
            }
        }
    }
    (order.len() == nodes).then_some(order)
}

/// Faces enclosed between a path and the boundary on its right.
fn right_region(an: &Analysis, darts: &[(usize, usize)]) -> Vec<usize> {
    let emb = &an.emb;
    let mut on_path = vec![false; emb.ne];
    let mut seeds = Vec::new();
    for &(e, from) in darts {
        on_path[e] = true;
        let k = emb.slot_at(e, from);
        if let Some(f) = an.corner_face[emb.right_corner(from, k)] {
            seeds.push(f);
        }
    }
    let mut inside = vec![false; an.faces.len()];
    let mut queue = VecDeque::new();
    for f in seeds {
        if !inside[f] {
            inside[f] = true;
            queue.push_back(f);
        }
    }
    while let Some(f) = queue.pop_front() {
        for (e, ef) in an.edge_faces.iter().enumerate() {
            if on_path[e] {
                continue;
            }
            if let [Some(a), Some(b)] = *ef {
                let h = if a == f {
                    b
                } else if b == f {
                    a
                } else {
                    continue;
                };
                if !inside[h] {
                    inside[h] = true;
                    queue.push_back(h);
                }
            }
        }
    }
    (0..an.faces.len()).filter(|&f| inside[f]).collect()
}

/// All directed paths from source `i` to sink `j`.
pub fn enumerate_paths(
    g: &EmbeddedBipartiteGraph,
    an: &Analysis,
    o: &PerfectOrientation,
    i: usize,
    j: usize,
) -> Result<Vec<Path>> {
    if !o.sources.contains(&i) {
        return Err(Error::Input(format!("{i} is not a source")));
    }
    if !o.sinks.contains(&j) {
        return Err(Error::Input(format!("{j} is not a sink")));
    }
    let emb = &an.emb;
    let out = out_edges(an, o);
    let target = emb.nv + j - 1;
    // Nodes that can reach the target, to prune the search.
    let mut reach = vec![false; emb.rot.len()];
    reach[target] = true;
    if let Some(order) = topological_order(an, o) {
        for &x in order.iter().rev() {
            if out[x].iter().any(|&e| reach[emb.other(e, x)]) {
                reach[x] = true;
            }
        }
    }
    let mut paths = Vec::new();
    let mut stack: Vec<(usize, usize)> = Vec::new();
    fn dfs(
        x: usize,
        target: usize,
        out: &[Vec<usize>],
        reach: &[bool],
        an: &Analysis,
        stack: &mut Vec<(usize, usize)>,
        acc: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if x == target {
            acc.push(stack.clone());
            return;
        }
        if an.emb.is_marked(x) && !stack.is_empty() {
            return;
        }
        for &e in &out[x] {
            let y = an.emb.other(e, x);
            if reach[y] {
                stack.push((e, x));
                dfs(y, target, out, reach, an, stack, acc);
                stack.pop();
            }
        }
    }
    let mut raw = Vec::new();
    dfs(emb.nv + i - 1, target, &out, &reach, an, &mut stack, &mut raw);
    for darts in raw {
        let region = right_region(an, &darts);
        paths.push(Path {
            source: i,
            sink: j,
            edges: darts.iter().map(|&(e, _)| g.edges()[e].id.clone()).collect(),
            dominated: region.iter().map(|&f| an.faces[f].name.clone()).collect(),
            dominated_idx: region,
        });
    }
    Ok(paths)
}

/// The m x n boundary measurement matrix for face values keyed by face name.
///
/// Rows follow the sources `1..=m`; columns `1..=m` are the identity and
/// column `j > m` holds `(-1)^(m-i)` times the sum over paths `i -> j` of the
/// product of values of the faces to the right of the path.
pub fn boundary_measurement<R: Ring + Send + Sync>(
    g: &EmbeddedBipartiteGraph,
    values: &BTreeMap<String, R>,
) -> Result<Vec<Vec<R>>> {
    boundary_measurement_at(g, values, 1)
}

/// Boundary measurement for the order `t < t+1 < ... < t-1`: rows follow the
/// sources `t..t+m-1` and column `k` belongs to marked point `t+k-1`.
pub fn boundary_measurement_at<R: Ring + Send + Sync>(
    g: &EmbeddedBipartiteGraph,
    values: &BTreeMap<String, R>,
    t: usize,
) -> Result<Vec<Vec<R>>> {
    let an = g.analyze()?;
    let o = special_orientation(g, &an, t)?;
    let (m, n) = (g.m(), g.n());
    let point = |k: usize| (t + k - 2) % n + 1;
    let face_vals: Vec<R> = an
        .faces
        .iter()
        .map(|f| values.get(&f.name).cloned().ok_or_else(|| Error::Input(format!("no value for face {}", f.name))))
        .collect::<Result<_>>()?;
    let cells: Vec<(usize, usize)> = (1..=m).flat_map(|i| (m + 1..=n).map(move |j| (i, j))).collect();
    let entries: Vec<Result<R>> = crate::par::map(&cells, |&(i, j)| {
        let mut sum = R::zero();
        for p in enumerate_paths(g, &an, &o, point(i), point(j))? {
            let w = p.dominated_idx.iter().fold(R::one(), |acc, &f| acc.mul(&face_vals[f]));
            sum = sum.add(&w);
        }
        Ok(if (m - i) % 2 == 1 { sum.neg() } else { sum })
    });
    let mut mat: Vec<Vec<R>> = (0..m).map(|i| (0..n).map(|j| if i == j { R::one() } else { R::zero() }).collect()).collect();
    for (&(i, j), v) in cells.iter().zip(entries) {
        mat[i - 1][j - 1] = v?;
    }
    Ok(mat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{det_cofactor, Rational};
    use crate::bipartite::{build_gamma0, move_sequence_graphs};
    use crate::poly::SparsePoly;

    const SIZES: [(usize, usize); 5] = [(2, 4), (2, 5), (3, 6), (3, 7), (2, 6)];

    #[test]
    fn orientation_invariants() {
        for (m, n) in SIZES {
            for g in move_sequence_graphs(m, n, 5) {
                let an = g.analyze().unwrap();
                let o = special_orientation(&g, &an, 1).unwrap();
                assert_eq!(o.sources, (1..=m).collect::<Vec<_>>());
                for v in 0..an.emb.nv {
                    let outs = an.emb.rot[v].iter().filter(|&&e| o.tail[e] == v).count();
                    let ins = an.emb.rot[v].len() - outs;
                    match g.vertices()[v].color {
                        Color::Black => assert_eq!(outs, 1),
                        Color::White => assert_eq!(ins, 1),
                    }
                }
                assert!(topological_order(&an, &o).is_some());
            }
        }
    }

    #[test]
    fn shifted_base_point() {
        let g = build_gamma0(3, 7).unwrap();
        let an = g.analyze().unwrap();
        for t in 1..=7 {
            let o = special_orientation(&g, &an, t).unwrap();
            let mut want: Vec<usize> = (0..3).map(|k| (t - 1 + k) % 7 + 1).collect();
            want.sort();
            assert_eq!(o.sources, want, "t={t}");
        }
    }

    #[test]
    fn euler_count() {
        for (m, n) in SIZES {
            for g in move_sequence_graphs(m, n, 4) {
                let (b, w, i) = (g.count(Color::Black), g.count(Color::White), g.internal_edge_count());
                assert_eq!(2 * b + w - i, m);
            }
        }
    }

    /// Path counts by powering the adjacency matrix of the oriented graph.
    fn transfer_counts(an: &Analysis, o: &PerfectOrientation, i: usize, j: usize) -> u64 {
        let nodes = an.emb.rot.len();
        let mut adj = vec![vec![0u64; nodes]; nodes];
        for (e, &t) in o.tail.iter().enumerate() {
            adj[t][an.emb.other(e, t)] += 1;
        }
        let (s, d) = (an.emb.nv + i - 1, an.emb.nv + j - 1);
        let mut vec_ = vec![0u64; nodes];
        vec_[s] = 1;
        let mut total = 0;
        for _ in 0..nodes {
            let mut next = vec![0u64; nodes];
            for x in 0..nodes {
                if vec_[x] == 0 || (an.emb.is_marked(x) && x != s) {
                    continue;
                }
                for y in 0..nodes {
                    next[y] += vec_[x] * adj[x][y];
                }
            }
            total += next[d];
            vec_ = next;
        }
        total
    }

    #[test]
    fn path_counts_match_transfer_matrix() {
        for (m, n) in SIZES {
            let g = build_gamma0(m, n).unwrap();
            let an = g.analyze().unwrap();
            let o = special_orientation(&g, &an, 1).unwrap();
            let ones: BTreeMap<String, Rational> = an.faces.iter().map(|f| (f.name.clone(), Rational::from_int(1))).collect();
            let mat = boundary_measurement(&g, &ones).unwrap();
            for i in 1..=m {
                for j in m + 1..=n {
                    let k = enumerate_paths(&g, &an, &o, i, j).unwrap().len() as u64;
                    assert_eq!(k, transfer_counts(&an, &o, i, j));
                    let sign = if (m - i) % 2 == 1 { -1 } else { 1 };
                    assert_eq!(mat[i - 1][j - 1], Rational::from_int(sign * k as i64));
                }
                for j in 1..=m {
                    assert_eq!(mat[i - 1][j - 1], Rational::from_int((i == j) as i64));
                }
            }
        }
    }

    #[test]
    fn bad_endpoints_rejected() {
        let g = build_gamma0(2, 4).unwrap();
        let an = g.analyze().unwrap();
        let o = special_orientation(&g, &an, 1).unwrap();
        assert!(enumerate_paths(&g, &an, &o, 1, 1).is_err());
        assert!(enumerate_paths(&g, &an, &o, 3, 4).is_err());
        let missing: BTreeMap<String, Rational> = BTreeMap::new();
        assert!(boundary_measurement(&g, &missing).is_err());
    }

    #[test]
    fn dominated_regions_are_nested_on_the_grid() {
        // On the grid every path is a monotone staircase, so regions of paths
        // between the same endpoints are totally ordered by inclusion.
        let g = build_gamma0(3, 7).unwrap();
        let an = g.analyze().unwrap();
        let o = special_orientation(&g, &an, 1).unwrap();
        for i in 1..=3 {
            for j in 4..=7 {
                let paths = enumerate_paths(&g, &an, &o, i, j).unwrap();
                let mut regions: Vec<Vec<usize>> = paths.iter().map(|p| p.dominated_idx.clone()).collect();
                regions.sort_by_key(|r| r.len());
                regions.dedup();
                assert_eq!(regions.len(), paths.len());
            }
        }
    }

    #[test]
    fn symbolic_minor_ratios_are_positive() {
        for (m, n) in [(2, 4), (2, 5), (3, 6)] {
            let g = build_gamma0(m, n).unwrap();
            let an = g.analyze().unwrap();
            let vals: BTreeMap<String, SparsePoly> =
                an.faces.iter().map(|f| (f.name.clone(), SparsePoly::var(&format!("X{}", f.name)))).collect();
            let mat = boundary_measurement(&g, &vals).unwrap();
            let subsets = crate::configuration::subsets(n, m);
            for s in subsets {
                let minor: Vec<Vec<SparsePoly>> =
                    (0..m).map(|r| s.iter().map(|&c| mat[r][c - 1].clone()).collect()).collect();
                let d = det_cofactor(&minor);
                assert!(!d.is_zero(), "({m},{n}) {s:?}");
                assert!(d.all_coefficients_positive(), "({m},{n}) {s:?}: {d:?}");
            }
        }
    }
}
