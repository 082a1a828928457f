//! Breadth-first search for move sequences between minimal graphs.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::{apply_move, available_moves, Color, EmbeddedBipartiteGraph, End, Move, MoveKind};
use crate::error::{Error, Result};
use crate::par;

#[derive(Clone, Debug, Serialize)]
pub struct SearchStep {
    #[serde(flatten)]
    pub mv: Move,
    /// Quiver vertex to mutate at, for Type I steps.
    pub mutation: Option<String>,
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    /// Moves taking the source graph to the target, and the graph reached
    /// (isomorphic to the target, carrying the source's face names).
    Found { steps: Vec<SearchStep>, reached: EmbeddedBipartiteGraph, visited: usize },
    Exhausted { visited: usize },
}

impl SearchOutcome {
    pub fn steps(&self) -> Option<&[SearchStep]> {
        match self {
            SearchOutcome::Found { steps, .. } => Some(steps),
            SearchOutcome::Exhausted { .. } => None,
        }
    }
}

/// Canonical encoding of an embedded graph with labeled boundary.
///
/// Vertices are numbered in breadth-first order from the external edge at
/// marked point 1, reading each rotation from the edge a vertex was reached by.
/// Two graphs get equal codes iff they are isomorphic as embedded graphs.
pub fn canonical_code(g: &EmbeddedBipartiteGraph) -> Vec<u32> {
    let nv = g.vertices().len();
    const MARK: u32 = 1 << 24;
    let mut label = vec![u32::MAX; nv];
    let mut entry = vec![0usize; nv];
    let mut order = Vec::with_capacity(nv);
    let mut queue = VecDeque::new();
    let mut next_label = 1u32;
    let e0 = g.external_edge(1);
    if let End::Vertex(v) = g.other_end(e0, End::Marked(1)) {
        label[v] = 0;
        entry[v] = e0;
        queue.push_back(v);
    }
    let mut code = Vec::new();
    while let Some(v) = queue.pop_front() {
        order.push(v);
        let rot = g.rotation(v);
        let k0 = rot.iter().position(|&e| e == entry[v]).unwrap_or(0);
        code.push(match g.vertices()[v].color {
            Color::Black => 0,
            Color::White => 1,
        });
        code.push(rot.len() as u32);
        for t in 0..rot.len() {
            let e = rot[(k0 + t) % rot.len()];
            match g.other_end(e, End::Vertex(v)) {
                End::Marked(i) => code.push(MARK + i as u32),
                End::Vertex(w) => {
                    if label[w] == u32::MAX {
                        label[w] = next_label;
                        next_label += 1;
                        entry[w] = e;
                        queue.push_back(w);
                    }
                    code.push(label[w]);
                }
            }
        }
    }
    code
}

/// Searches for moves taking `a` to a graph isomorphic to `b`, visiting at most
/// `budget` graphs.
pub fn find_move_sequence(a: &EmbeddedBipartiteGraph, b: &EmbeddedBipartiteGraph, budget: usize) -> Result<SearchOutcome> {
    if (a.m(), a.n()) != (b.m(), b.n()) {
        return Err(Error::Input("graphs have different (m, n)".into()));
    }
    let target = canonical_code(b);
    let start = canonical_code(a);
    // Parent pointers: code -> (parent code, move).
    let mut parent: HashMap<Vec<u32>, Option<(Vec<u32>, Move)>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut frontier: Vec<(Vec<u32>, EmbeddedBipartiteGraph)> = vec![(start.clone(), a.clone())];
    let mut found: Option<(Vec<u32>, EmbeddedBipartiteGraph)> =
        if start == target { Some((start, a.clone())) } else { None };
    while found.is_none() && !frontier.is_empty() && parent.len() < budget {
        let expanded: Vec<Result<Vec<(Move, Vec<u32>, EmbeddedBipartiteGraph)>>> = par::map(&frontier, |(_, g)| {
            let an = g.analyze()?;
            available_moves(g, &an)
                .into_iter()
                .map(|mv| {
                    let h = apply_move(g, &mv)?;
                    Ok((mv, canonical_code(&h), h))
                })
                .collect()
        });
        let mut next = Vec::new();
        'outer: for ((code, _), children) in frontier.iter().zip(expanded) {
            for (mv, c, h) in children? {
                if parent.contains_key(&c) {
                    continue;
                }
                parent.insert(c.clone(), Some((code.clone(), mv)));
                if c == target {
                    found = Some((c, h));
                    break 'outer;
                }
                if parent.len() >= budget {
                    break 'outer;
                }
                next.push((c, h));
            }
        }
        frontier = next;
    }
    let visited = parent.len();
    let Some((code, reached)) = found else {
        return Ok(SearchOutcome::Exhausted { visited });
    };
    let mut moves = Vec::new();
    let mut cur = code;
    while let Some(Some((p, mv))) = parent.get(&cur) {
        moves.push(mv.clone());
        cur = p.clone();
    }
    moves.reverse();
    let steps = moves
        .into_iter()
        .map(|mv| {
            let mutation = (mv.kind == MoveKind::TypeI).then(|| mv.location.clone());
            SearchStep { mv, mutation }
        })
        .collect();
    Ok(SearchOutcome::Found { steps, reached, visited })
}
