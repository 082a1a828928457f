//! Mirror images of a graph.

use std::collections::BTreeMap;

use super::{EmbeddedBipartiteGraph, End};
use crate::error::{Error, Result};

/// Reverses every rotation and relabels marked points by the involution `s`.
/// Face names follow their faces.
pub fn reflect_with(g: &EmbeddedBipartiteGraph, s: impl Fn(usize) -> usize) -> Result<EmbeddedBipartiteGraph> {
    let n = g.n();
    let mut external = vec![usize::MAX; n];
    let mut edges = g.edges().to_vec();
    for i in 1..=n {
        let t = s(i);
        if !(1..=n).contains(&t) || external[t - 1] != usize::MAX {
            return Err(Error::Input("boundary relabel is not a permutation".into()));
        }
        let e = g.external_edge(i);
        external[t - 1] = e;
        for x in edges[e].ends.iter_mut() {
            if *x == End::Marked(i) {
                *x = End::Marked(t);
            }
        }
    }
    let rotation: Vec<Vec<usize>> = (0..g.vertices().len())
        .map(|v| g.rotation(v).iter().rev().copied().collect())
        .collect();
    let mut h = EmbeddedBipartiteGraph::from_raw(g.m(), n, g.vertices().to_vec(), edges, rotation, external)?;
    if g.names().is_empty() {
        return Ok(h);
    }
    // The wedge (x, y) at a vertex becomes the wedge (y, x) after reversal.
    let (ag, ah) = (g.analyze()?, h.analyze()?);
    let mut names = BTreeMap::new();
    for v in 0..g.vertices().len() {
        let rot = g.rotation(v);
        let d = rot.len();
        for k in 0..d {
            let Some(f) = ag.corner_face[ag.emb.corner(v, k)] else { continue };
            let (x, y) = (rot[k], rot[(k + 1) % d]);
            let rev = h.rotation(v);
            let j = rev.iter().position(|&e| e == y).expect("same edges");
            if rev[(j + 1) % d] != x {
                continue;
            }
            if let (Some(name), Some(f2)) = (g.names().get(&ag.faces[f].dominating), ah.corner_face[ah.emb.corner(v, j)]) {
                names.insert(ah.faces[f2].dominating.clone(), name.clone());
            }
        }
    }
    for a in 1..=n {
        // The face before marked point a sits after s(a) in the mirror.
        let (Some(f), Some(f2)) = (ag.boundary_face_before(a), ah.boundary_face_before(s(a) % n + 1)) else { continue };
        if let Some(name) = g.names().get(&ag.faces[f].dominating) {
            names.insert(ah.faces[f2].dominating.clone(), name.clone());
        }
    }
    h.set_names(names);
    Ok(h)
}

/// Mirror image across the diameter between marked points `n` and `1`.
pub fn dual_reflect(g: &EmbeddedBipartiteGraph) -> Result<EmbeddedBipartiteGraph> {
    let n = g.n();
    reflect_with(g, |i| n + 1 - i)
}

/// Mirror image across the diameter between marked points `m` and `m + 1`.
pub fn dual_star(g: &EmbeddedBipartiteGraph) -> Result<EmbeddedBipartiteGraph> {
    let (m, n) = (g.m() as i64, g.n() as i64);
    reflect_with(g, move |i| ((m + 1 - i as i64 - 1).rem_euclid(n) + 1) as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipartite::{build_gamma0, canonical_code, move_sequence_graphs};

    fn shift_sets(g: &EmbeddedBipartiteGraph, c: i64) -> Vec<(String, Vec<usize>)> {
        let n = g.n() as i64;
        let an = g.analyze().unwrap();
        let mut out: Vec<(String, Vec<usize>)> = an
            .faces
            .iter()
            .map(|f| {
                let mut s: Vec<usize> =
                    f.dominating.iter().map(|&b| ((c - b as i64 - 1).rem_euclid(n) + 1) as usize).collect();
                s.sort();
                (f.name.clone(), s)
            })
            .collect();
        out.sort();
        out
    }

    fn named_sets(g: &EmbeddedBipartiteGraph) -> Vec<(String, Vec<usize>)> {
        let mut out: Vec<_> = g.analyze().unwrap().faces.iter().map(|f| (f.name.clone(), f.dominating.clone())).collect();
        out.sort();
        out
    }

    #[test]
    fn reflection_is_an_involution() {
        for (m, n) in [(2, 4), (3, 7), (4, 9)] {
            let g = build_gamma0(m, n).unwrap();
            let back = dual_reflect(&dual_reflect(&g).unwrap()).unwrap();
            assert_eq!(canonical_code(&g), canonical_code(&back));
            assert_eq!(g.names(), back.names());
            let back = dual_star(&dual_star(&g).unwrap()).unwrap();
            assert_eq!(canonical_code(&g), canonical_code(&back));
        }
    }

    #[test]
    fn mirror_negates_the_quiver() {
        for (m, n) in [(2, 5), (3, 6), (3, 7)] {
            for g in move_sequence_graphs(m, n, 4) {
                let q = g.analyze().unwrap().quiver(&g).unwrap();
                for h in [dual_reflect(&g).unwrap(), dual_star(&g).unwrap()] {
                    let a = h.analyze().unwrap();
                    assert!(a.report.minimal);
                    assert!(a.quiver(&h).unwrap().same_quiver(&q.negated()));
                }
            }
        }
    }

    #[test]
    fn mirrored_dominating_sets() {
        // With sets read off strand ends, the mirror fixing the arc n|1 sends
        // I to m+1-I, and the one fixing the arc m|m+1 sends I to 2m+1-I.
        for (m, n) in [(2, 5), (3, 6), (3, 8)] {
            for g in move_sequence_graphs(m, n, 3) {
                assert_eq!(named_sets(&dual_reflect(&g).unwrap()), shift_sets(&g, m as i64 + 1));
                assert_eq!(named_sets(&dual_star(&g).unwrap()), shift_sets(&g, 2 * m as i64 + 1));
            }
        }
    }
}
