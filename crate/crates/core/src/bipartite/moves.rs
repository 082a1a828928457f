//! Local moves between minimal graphs.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Analysis, Color, EmbeddedBipartiteGraph, End};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MoveKind {
    /// Square move at a four-sided interior face.
    #[serde(rename = "I")]
    TypeI,
    /// Slide of two black vertices across a bivalent white vertex.
    #[serde(rename = "II")]
    TypeII,
}

/// A move and where it applies: a face name for Type I, a white vertex id for Type II.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Move {
    pub kind: MoveKind,
    pub location: String,
}

struct Square {
    w1: usize,
    w2: usize,
    b1: usize,
    b2: usize,
    x1: usize,
    x2: usize,
    a: usize,
    b: usize,
    c: usize,
    d: usize,
    e1: usize,
    e2: usize,
}

fn vertex_of(x: End) -> Option<usize> {
    match x {
        End::Vertex(v) => Some(v),
        End::Marked(_) => None,
    }
}

fn square_at(g: &EmbeddedBipartiteGraph, an: &Analysis, f: usize) -> Option<Square> {
    let emb = &an.emb;
    let corners: Vec<usize> = (0..an.corner_face.len()).filter(|&c| an.corner_face[c] == Some(f)).collect();
    if corners.len() != 4 || an.faces[f].boundary {
        return None;
    }
    // Locate a white corner of the face.
    let (w1, k) = (0..emb.nv).find_map(|v| {
        if g.vertices[v].color != Color::White {
            return None;
        }
        (0..emb.degree(v)).find(|&k| an.corner_face[emb.corner(v, k)] == Some(f)).map(|k| (v, k))
    })?;
    let step = |v: usize, k: usize| -> (usize, usize, usize) {
        let e = emb.rot[v][(k + 1) % emb.degree(v)];
        let y = emb.other(e, v);
        (e, y, emb.slot_at(e, y))
    };
    let (a, b1, j1) = step(w1, k);
    let (b, w2, j2) = step(b1, j1);
    let (c, b2, j3) = step(w2, j2);
    let (d, back, _) = step(b2, j3);
    if back != w1 || b1 >= emb.nv || b2 >= emb.nv || w2 >= emb.nv {
        return None;
    }
    let e1 = emb.rot[b1][(j1 + 2) % 3];
    let e2 = emb.rot[b2][(j3 + 2) % 3];
    let x1 = vertex_of(g.other_end(e1, End::Vertex(b1)))?;
    let x2 = vertex_of(g.other_end(e2, End::Vertex(b2)))?;
    let distinct: BTreeSet<usize> = [w1, w2, x1, x2].into_iter().collect();
    if b1 == b2 || distinct.len() != 4 || g.rotation[w1].len() < 3 || g.rotation[w2].len() < 3 {
        return None;
    }
    Some(Square { w1, w2, b1, b2, x1, x2, a, b, c, d, e1, e2 })
}

struct Slide {
    b1: usize,
    b2: usize,
    ew1: usize,
    ew2: usize,
    p: usize,
    q: usize,
    s: usize,
    t: usize,
}

fn slide_at(g: &EmbeddedBipartiteGraph, w: usize) -> Option<Slide> {
    if g.vertices[w].color != Color::White || g.rotation[w].len() != 2 {
        return None;
    }
    let (ew1, ew2) = (g.rotation[w][0], g.rotation[w][1]);
    let b1 = vertex_of(g.other_end(ew1, End::Vertex(w)))?;
    let b2 = vertex_of(g.other_end(ew2, End::Vertex(w)))?;
    if b1 == b2 {
        return None;
    }
    let around = |b: usize, e: usize| -> (usize, usize) {
        let r = &g.rotation[b];
        let k = r.iter().position(|&x| x == e).expect("edge at its end");
        (r[(k + 1) % 3], r[(k + 2) % 3])
    };
    let (p, q) = around(b1, ew1);
    let (s, t) = around(b2, ew2);
    let tip = |e: usize, b: usize| g.other_end(e, End::Vertex(b));
    if tip(q, b1) == tip(s, b2) || tip(t, b2) == tip(p, b1) {
        return None;
    }
    Some(Slide { b1, b2, ew1, ew2, p, q, s, t })
}

/// Every move applicable to the graph, Type I before Type II.
pub fn available_moves(g: &EmbeddedBipartiteGraph, an: &Analysis) -> Vec<Move> {
    let mut out = Vec::new();
    for f in 0..an.faces.len() {
        if square_at(g, an, f).is_some() {
            out.push(Move { kind: MoveKind::TypeI, location: an.faces[f].name.clone() });
        }
    }
    for w in 0..g.vertices.len() {
        if slide_at(g, w).is_some() {
            out.push(Move { kind: MoveKind::TypeII, location: g.vertices[w].id.clone() });
        }
    }
    out
}

fn replace_end(g: &mut EmbeddedBipartiteGraph, e: usize, from: usize, to: usize) {
    let (_, edges, _) = g.parts_mut();
    if let Some(x) = edges[e].ends.iter_mut().find(|x| **x == End::Vertex(from)) {
        *x = End::Vertex(to);
    }
}

/// Applies a move, keeping face names attached to the faces that survive it.
pub fn apply_move(g: &EmbeddedBipartiteGraph, mv: &Move) -> Result<EmbeddedBipartiteGraph> {
    let an = g.analyze()?;
    match mv.kind {
        MoveKind::TypeI => {
            let f = an
                .face_by_name(&mv.location)
                .map(|f| f.index)
                .ok_or_else(|| Error::Lookup(format!("face {}", mv.location)))?;
            let sq = square_at(g, &an, f)
                .ok_or_else(|| Error::Move(format!("face {} is not a square face", mv.location)))?;
            let mut h = g.clone();
            let Square { w1, w2, b1, b2, x1, x2, a, b, c, d, e1, e2 } = sq;
            replace_end(&mut h, b, b1, b2);
            replace_end(&mut h, c, w2, x1);
            replace_end(&mut h, d, w1, x2);
            replace_end(&mut h, d, b2, b1);
            {
                let (_, _, rot) = h.parts_mut();
                rot[w1].retain(|&e| e != d);
                rot[w2].retain(|&e| e != c);
                let k = rot[x1].iter().position(|&e| e == e1).expect("leg at x1");
                rot[x1].insert(k + 1, c);
                let k = rot[x2].iter().position(|&e| e == e2).expect("leg at x2");
                rot[x2].insert(k + 1, d);
                rot[b1] = vec![a, d, e1];
                rot[b2] = vec![b, c, e2];
            }
            h.validate()?;
            let old: BTreeSet<Vec<usize>> = an.faces.iter().map(|f| f.dominating.clone()).collect();
            let center = an.faces[f].dominating.clone();
            let ban = h.analyze()?;
            let fresh: Vec<Vec<usize>> =
                ban.faces.iter().map(|f| f.dominating.clone()).filter(|s| !old.contains(s)).collect();
            let mut names = h.names().clone();
            if let Some(name) = names.remove(&center) {
                if let [new] = fresh.as_slice() {
                    names.insert(new.clone(), name);
                }
            } else if let [new] = fresh.as_slice() {
                names.insert(new.clone(), mv.location.clone());
            }
            h.set_names(names);
            Ok(h)
        }
        MoveKind::TypeII => {
            let w = g.vertex_index(&mv.location)?;
            let Slide { b1, b2, ew1, ew2, p, q, s, t } =
                slide_at(g, w).ok_or_else(|| Error::Move(format!("vertex {} admits no slide", mv.location)))?;
            let mut h = g.clone();
            replace_end(&mut h, s, b2, b1);
            replace_end(&mut h, p, b1, b2);
            {
                let (_, _, rot) = h.parts_mut();
                rot[b1] = vec![ew1, q, s];
                rot[b2] = vec![ew2, t, p];
            }
            h.validate()?;
            Ok(h)
        }
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use proptest::prelude::*;

    use super::*;
    use crate::bipartite::{build_gamma0, canonical_code, GraphJson, Vertex};

    fn sets(g: &EmbeddedBipartiteGraph) -> BTreeSet<Vec<usize>> {
        g.analyze().unwrap().faces.iter().map(|f| f.dominating.clone()).collect()
    }

    #[test]
    fn square_move_is_an_involution() {
        let g = build_gamma0(3, 6).unwrap();
        let mv = Move { kind: MoveKind::TypeI, location: "f_1_1".into() };
        let h = apply_move(&g, &mv).unwrap();
        assert_ne!(canonical_code(&g), canonical_code(&h));
        let back = apply_move(&h, &mv).unwrap();
        assert_eq!(canonical_code(&g), canonical_code(&back));
        assert_eq!(g.names(), back.names());
    }

    #[test]
    fn square_move_exchanges_the_center_set() {
        let g = build_gamma0(3, 6).unwrap();
        let an = g.analyze().unwrap();
        let center = an.face_by_name("f_1_1").unwrap().clone();
        // Faces sharing an edge with the center.
        let nbrs: Vec<Vec<usize>> = an
            .edge_faces
            .iter()
            .filter_map(|ef| match *ef {
                [Some(a), Some(b)] if a == center.index => Some(b),
                [Some(a), Some(b)] if b == center.index => Some(a),
                _ => None,
            })
            .map(|f| an.faces[f].dominating.clone())
            .collect();
        assert_eq!(nbrs.len(), 4);
        let union: BTreeSet<usize> = nbrs.iter().flatten().copied().collect();
        let common: BTreeSet<usize> =
            nbrs.iter().skip(1).fold(nbrs[0].iter().copied().collect(), |acc, s| acc.intersection(&s.iter().copied().collect()).copied().collect());
        assert_eq!(common.len(), 1);
        let expected: Vec<usize> =
            union.iter().copied().filter(|x| common.contains(x) || !center.dominating.contains(x)).collect();
        let h = apply_move(&g, &Move { kind: MoveKind::TypeI, location: "f_1_1".into() }).unwrap();
        let (before, after) = (sets(&g), sets(&h));
        let gone: Vec<_> = before.difference(&after).cloned().collect();
        let new: Vec<_> = after.difference(&before).cloned().collect();
        assert_eq!(gone, vec![center.dominating.clone()]);
        assert_eq!(new, vec![expected.clone()]);
        assert_eq!(h.analyze().unwrap().face_by_name("f_1_1").unwrap().dominating, expected);
    }

    #[test]
    fn square_move_mutates_the_quiver() {
        for (m, n) in [(2, 5), (3, 6), (3, 7), (4, 8)] {
            let g = build_gamma0(m, n).unwrap();
            let an = g.analyze().unwrap();
            let q = an.quiver(&g).unwrap();
            for mv in available_moves(&g, &an).into_iter().filter(|mv| mv.kind == MoveKind::TypeI) {
                let h = apply_move(&g, &mv).unwrap();
                let qh = h.analyze().unwrap().quiver(&h).unwrap();
                assert!(qh.same_quiver(&q.mutate(&mv.location).unwrap()), "({m},{n}) at {}", mv.location);
            }
        }
    }

    #[test]
    fn slide_keeps_sets_and_quiver() {
        let g = build_gamma0(3, 7).unwrap();
        let an = g.analyze().unwrap();
        let q = an.quiver(&g).unwrap();
        let slides: Vec<Move> = available_moves(&g, &an).into_iter().filter(|mv| mv.kind == MoveKind::TypeII).collect();
        assert!(!slides.is_empty());
        for mv in slides {
            let h = apply_move(&g, &mv).unwrap();
            assert_ne!(canonical_code(&g), canonical_code(&h));
            assert_eq!(sets(&g), sets(&h));
            assert!(h.analyze().unwrap().quiver(&h).unwrap().same_quiver(&q));
            assert_eq!(canonical_code(&apply_move(&h, &mv).unwrap()), canonical_code(&g));
        }
    }

    #[test]
    fn pattern_mismatch_is_an_error() {
        let g = build_gamma0(3, 6).unwrap();
        assert!(matches!(
            apply_move(&g, &Move { kind: MoveKind::TypeI, location: "f_0_0".into() }),
            Err(Error::Move(_))
        ));
        assert!(matches!(
            apply_move(&g, &Move { kind: MoveKind::TypeII, location: "b_0_0".into() }),
            Err(Error::Move(_))
        ));
    }

    /// Splices `w - b1 = (w1, w2) = b2 - w' - b` into an edge `w - b`.
    fn with_bubble(g: &EmbeddedBipartiteGraph) -> EmbeddedBipartiteGraph {
        let mut j: GraphJson = g.to_json();
        let (w, b, e) = g
            .edges()
            .iter()
            .find_map(|e| match e.ends {
                [End::Vertex(x), End::Vertex(y)] if g.vertices()[x].color == Color::White => {
                    Some((g.vertices()[x].id.clone(), g.vertices()[y].id.clone(), e.id.clone()))
                }
                _ => None,
            })
            .unwrap();
        let swap = |list: &mut Vec<String>, new: &str| {
            let k = list.iter().position(|x| *x == e).unwrap();
            list[k] = new.to_string();
        };
        swap(j.rotation.get_mut(&w).unwrap(), "xa");
        swap(j.rotation.get_mut(&b).unwrap(), "xh");
        let add = |j: &mut GraphJson, id: &str, color: Color, rot: &[&str]| {
            j.vertices.push(Vertex { id: id.into(), color });
            j.rotation.insert(id.into(), rot.iter().map(|s| s.to_string()).collect());
        };
        add(&mut j, "B1", Color::Black, &["xc", "xb", "xa"]);
        add(&mut j, "W1", Color::White, &["xb", "xd"]);
        add(&mut j, "W2", Color::White, &["xe", "xc"]);
        add(&mut j, "B2", Color::Black, &["xg", "xd", "xe"]);
        add(&mut j, "W3", Color::White, &["xh", "xg"]);
        j.face_names.clear();
        EmbeddedBipartiteGraph::from_json(&j).unwrap()
    }

    #[test]
    fn bubble_has_a_closed_strand() {
        let g = with_bubble(&build_gamma0(2, 4).unwrap());
        let report = g.analyze().unwrap().report;
        assert!(!report.minimal);
        assert!(report.violations.iter().any(|v| v.contains("closed zig-zag loop")), "{:?}", report.violations);
    }

    #[test]
    fn detects_parallel_bigon() {
        // The standard (2,4) graph with one edge subdivided and the new black
        // vertex joined across a face.
        let j = r#"{"m":2,"n":4,
            "vertices":[{"id":"b0","color":"black"},{"id":"b1","color":"black"},{"id":"w0","color":"white"},
                {"id":"w1","color":"white"},{"id":"w2","color":"white"},{"id":"W","color":"white"},
                {"id":"nb","color":"black"},{"id":"nw","color":"white"}],
            "rotation":{"W":["e5","e4","e9"],"b0":["e4","e1","s3"],"b1":["e5","e3","e2"],"w0":["s1","e6"],
                "w1":["e2","e7","s4","e1"],"w2":["e8","e3"],"nb":["s1","s2","s4"],"nw":["s2","s3"]},
            "external":{"1":"e6","2":"e7","3":"e8","4":"e9"}}"#;
        let g = EmbeddedBipartiteGraph::from_json(&serde_json::from_str(j).unwrap()).unwrap();
        let report = g.analyze().unwrap().report;
        assert!(!report.minimal);
        assert!(
            report.violations.iter().any(|v| v == "strands from 3 and 4 form a parallel bigon"),
            "{:?}",
            report.violations
        );
    }

    fn random_walk(m: usize, n: usize, picks: &[usize]) -> Vec<EmbeddedBipartiteGraph> {
        let mut g = build_gamma0(m, n).unwrap();
        let mut out = vec![g.clone()];
        for &p in picks {
            let an = g.analyze().unwrap();
            let moves = available_moves(&g, &an);
            if moves.is_empty() {
                break;
            }
            g = apply_move(&g, &moves[p % moves.len()]).unwrap();
            out.push(g.clone());
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn moves_preserve_minimality(
            (m, n) in prop::sample::select(vec![(2usize, 5usize), (3, 6), (3, 7), (2, 6)]),
            picks in prop::collection::vec(0usize..64, 1..12),
        ) {
            for g in random_walk(m, n, &picks) {
                let an = g.analyze().unwrap();
                prop_assert!(an.report.minimal, "{:?}", an.report.violations);
                prop_assert!(an.interior_faces().all(|f| f.dominating.len() == m));
                prop_assert_eq!(an.faces.len(), (m - 1) * (n - m - 1) + n);
                let whites: BTreeSet<usize> = (1..=n)
                    .map(|i| match g.other_end(g.external_edge(i), End::Marked(i)) {
                        End::Vertex(v) => v,
                        End::Marked(_) => usize::MAX,
                    })
                    .collect();
                prop_assert_eq!(whites.len(), n);
                let q = an.quiver(&g).unwrap();
                let balanced = q.vertices().iter().all(|v| v.boundary || {
                    let (i, o) = q.in_out_degree(&v.id).unwrap();
                    i == o
                });
                prop_assert!(balanced);
            }
        }

        #[test]
        fn square_moves_track_mutation(picks in prop::collection::vec(0usize..64, 1..10)) {
            let walk = random_walk(3, 7, &picks);
            for g in walk {
                let an = g.analyze().unwrap();
                let q = an.quiver(&g).unwrap();
                for mv in available_moves(&g, &an).into_iter().filter(|mv| mv.kind == MoveKind::TypeI) {
                    let h = apply_move(&g, &mv).unwrap();
                    let qh = h.analyze().unwrap().quiver(&h).unwrap();
                    prop_assert!(qh.same_quiver(&q.mutate(&mv.location).unwrap()));
                }
            }
        }
    }
}
