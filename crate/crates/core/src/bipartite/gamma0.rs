//! The standard minimal graph on the `(n - m - 1) x (m - 1)` grid of interior faces.

use std::collections::BTreeMap;

use super::{cyclic_interval, Color, Edge, EmbeddedBipartiteGraph, End, Vertex};
use crate::error::{Error, Result};
use crate::quiver::grid_id;

/// Face name used for grid position `(i, j)`; `(0, 0)` is the face between `n` and `1`.
pub fn gamma0_face_name(i: usize, j: usize) -> String {
    grid_id(i, j)
}

/// Dominating set `[1, m-j] ∪ [m+i-j+1, m+i]` of grid face `(i, j)`.
pub fn gamma0_dominating_set(m: usize, n: usize, i: usize, j: usize) -> Vec<usize> {
    if (i, j) == (0, 0) {
        return (1..=m).collect();
    }
    let mut s: Vec<usize> = (1..=m - j).collect();
    if j > 0 {
        s.extend(cyclic_interval((m + i - j + 1) as i64, (m + i) as i64, n));
    }
    s.sort();
    s.dedup();
    s
}

/// All grid positions labelling faces: interior `1..n-m-1 x 1..m-1`, the right
/// column `(i, m)`, the bottom row `(n-m, j)` and `(0, 0)`.
pub fn gamma0_positions(m: usize, n: usize) -> Vec<(usize, usize)> {
    let mut out = vec![(0, 0)];
    for i in 1..=n - m {
        for j in 1..=m {
            if i == n - m || j == m || (i < n - m && j < m) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Dominating set `[i+1, m] ∪ [n-j+1, n+i-j]` of face `(i, j)` in the mirrored graph.
pub fn gamma0_star_dominating_set(m: usize, n: usize, i: usize, j: usize) -> Vec<usize> {
    if (i, j) == (0, 0) {
        return (1..=m).collect();
    }
    let mut s: Vec<usize> = (i + 1..=m).collect();
    if i > 0 {
        s.extend(cyclic_interval((n + 1 - j) as i64, (n + i - j) as i64, n));
    }
    s.sort();
    s.dedup();
    s
}

/// Face positions of the mirrored graph: the transposes of the standard
/// positions, so `i <= m` and `j <= n - m`.
pub fn gamma0_star_positions(m: usize, n: usize) -> Vec<(usize, usize)> {
    gamma0_positions(m, n).into_iter().map(|(i, j)| (j, i)).collect()
}

/// The standard graph reflected so that its faces carry the sets
/// `gamma0_star_dominating_set`, named `f_i_j` accordingly.
///
/// The mirror used fixes the boundary arc between `n` and `1`; with the
/// left-of-strand convention for dominating sets it is the one producing
/// these sets (the mirror through the arc between `m` and `m+1` gives the
/// same family rotated by `m`).
pub fn build_gamma0_star(m: usize, n: usize) -> Result<EmbeddedBipartiteGraph> {
    let base = build_gamma0(m, n)?;
    let mut g = super::dual_reflect(&base)?;
    let an = g.analyze()?;
    let mut names = BTreeMap::new();
    for (i, j) in gamma0_star_positions(m, n) {
        let set = gamma0_star_dominating_set(m, n, i, j);
        if an.face_by_set(&set).is_none() {
            return Err(Error::Graph(format!("mirrored graph has no face with set {set:?}")));
        }
        names.insert(set, gamma0_face_name(i, j));
    }
    g.set_names(names);
    Ok(g)
}

#[derive(Clone, Copy)]
enum Node {
    V(usize),
    M(usize),
}

pub fn build_gamma0(m: usize, n: usize) -> Result<EmbeddedBipartiteGraph> {
    if !(1 < m && m + 1 < n) {
        return Err(Error::Input(format!("need 1 < m < m+1 < n, got m={m}, n={n}")));
    }
    let rows = n - m; // black rows per chain
    let cols = m - 1; // chains
    let y_bot = 2.5 - rows as f64;
    let mut vertices = Vec::new();
    let mut pos = Vec::new();
    let mut black = vec![vec![0usize; rows]; cols];
    let mut white = vec![vec![0usize; rows + 1]; cols];
    for c in 0..cols {
        for r in 0..rows {
            black[c][r] = vertices.len();
            vertices.push(Vertex { id: format!("b_{c}_{r}"), color: Color::Black });
            pos.push((c as f64, 2.5 - r as f64));
        }
        for r in 0..=rows {
            white[c][r] = vertices.len();
            vertices.push(Vertex { id: format!("w_{c}_{r}"), color: Color::White });
            pos.push((c as f64 + 0.5, 3.0 - r as f64));
        }
    }
    let extra = vertices.len();
    vertices.push(Vertex { id: "W".into(), color: Color::White });
    pos.push((-1.0, 0.0));

    let mut marked_pos = vec![(0.0, 0.0); n + 1];
    let mut pairs: Vec<(Node, Node)> = Vec::new();
    for c in 0..cols {
        for r in 0..rows {
            pairs.push((Node::V(white[c][r]), Node::V(black[c][r])));
            pairs.push((Node::V(black[c][r]), Node::V(white[c][r + 1])));
            if c + 1 < cols {
                pairs.push((Node::V(white[c][r]), Node::V(black[c + 1][r])));
            }
        }
    }
    for r in 0..rows {
        pairs.push((Node::V(extra), Node::V(black[0][r])));
    }
    let mut external = vec![0usize; n];
    let mut add_ext = |pairs: &mut Vec<(Node, Node)>, v: usize, a: usize, p: (f64, f64)| {
        marked_pos[a] = p;
        external[a - 1] = pairs.len();
        pairs.push((Node::V(v), Node::M(a)));
    };
    for r in 0..rows {
        add_ext(&mut pairs, white[cols - 1][r], r + 1, (cols as f64, 2.5 - r as f64));
    }
    add_ext(&mut pairs, white[cols - 1][rows], rows + 1, (cols as f64, y_bot));
    for c in 0..cols - 1 {
        add_ext(&mut pairs, white[c][rows], n - 1 - c, (c as f64 + 1.0, y_bot));
    }
    add_ext(&mut pairs, extra, n, (-1.0, y_bot));

    let place = |x: Node| match x {
        Node::V(v) => pos[v],
        Node::M(a) => marked_pos[a],
    };
    let mut edges = Vec::with_capacity(pairs.len());
    let mut incident: Vec<Vec<(f64, usize)>> = vec![Vec::new(); vertices.len()];
    for (k, &(a, b)) in pairs.iter().enumerate() {
        let end = |x: Node| match x {
            Node::V(v) => End::Vertex(v),
            Node::M(i) => End::Marked(i),
        };
        edges.push(Edge { id: format!("e{k}"), ends: [end(a), end(b)] });
        for (x, y) in [(a, b), (b, a)] {
            if let Node::V(v) = x {
                let (p, q) = (place(x), place(y));
                incident[v].push(((q.1 - p.1).atan2(q.0 - p.0), k));
            }
        }
    }
    let rotation: Vec<Vec<usize>> = incident
        .into_iter()
        .map(|mut l| {
            l.sort_by(|x, y| x.0.total_cmp(&y.0));
            l.into_iter().map(|(_, k)| k).collect()
        })
        .collect();
    let mut g = EmbeddedBipartiteGraph::from_raw(m, n, vertices, edges, rotation, external)?;

    // Name faces from their position in the construction.
    let an = g.analyze()?;
    let mut names = BTreeMap::new();
    let face_after = |v: usize, e: usize| -> Result<Vec<usize>> {
        let k = an.emb.slot_at(e, v);
        let f = an.corner_face[an.emb.corner(v, k)].ok_or_else(|| Error::Graph("corner on outer face".into()))?;
        Ok(an.faces[f].dominating.clone())
    };
    let edge_between = |u: usize, v: usize| -> usize {
        pairs
            .iter()
            .position(|&(a, b)| matches!((a, b), (Node::V(x), Node::V(y)) if (x, y) == (u, v) || (x, y) == (v, u)))
            .expect("construction edge")
    };
    for r in 0..rows - 1 {
        names.insert(face_after(extra, edge_between(extra, black[0][r + 1]))?, gamma0_face_name(r + 1, 1));
        for c in 0..cols - 1 {
            let b = black[c + 1][r];
            names.insert(face_after(b, edge_between(b, white[c][r]))?, gamma0_face_name(r + 1, c + 2));
        }
    }
    for a in 1..=n {
        let f = an.boundary_face_before(a).ok_or_else(|| Error::Graph("missing boundary face".into()))?;
        let (i, j) = if a == 1 {
            (0, 0)
        } else if a <= rows + 1 {
            (a - 1, m)
        } else {
            (rows, n + 1 - a)
        };
        names.insert(an.faces[f].dominating.clone(), gamma0_face_name(i, j));
    }
    g.set_names(names);
    Ok(g)
}
