//! Bipartite graphs embedded in a disk with labeled boundary points.
//!
//! The embedding is purely combinatorial: every internal vertex stores the
//! counterclockwise cyclic order of its edges, and each marked point
//! `1..=n` (clockwise on the boundary circle) carries exactly one external
//! edge. Faces, zig-zag strands, dominating sets and the face quiver are all
//! derived from that data.

mod dual;
mod gamma0;
mod moves;
mod search;

pub use dual::{dual_reflect, dual_star, reflect_with};
pub use gamma0::{
    build_gamma0, build_gamma0_star, gamma0_dominating_set, gamma0_face_name, gamma0_positions,
    gamma0_star_dominating_set, gamma0_star_positions,
};
pub use moves::{apply_move, available_moves, Move, MoveKind};
pub use search::{canonical_code, find_move_sequence, SearchOutcome, SearchStep};

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quiver::{Seed, SeedVertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: String,
    pub color: Color,
}

/// One end of an edge: an internal vertex (by index) or a marked point (`1..=n`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum End {
    Vertex(usize),
    Marked(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub ends: [End; 2],
}

#[derive(Clone, Debug)]
pub struct EmbeddedBipartiteGraph {
    m: usize,
    n: usize,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    rotation: Vec<Vec<usize>>,
    external: Vec<usize>,
    /// Face names keyed by dominating set; faces without an entry get a name
    /// derived from their set.
    names: BTreeMap<Vec<usize>, String>,
}

impl EmbeddedBipartiteGraph {
    /// Assembles a graph from vertex rotations (edge ids, counterclockwise) and
    /// the external edge of each marked point. Edge endpoints are inferred.
    pub fn from_rotation(
        m: usize,
        n: usize,
        vertices: Vec<Vertex>,
        rotation: &[Vec<String>],
        external: &[String],
    ) -> Result<Self> {
        if rotation.len() != vertices.len() {
            return Err(Error::Graph("one rotation list per vertex required".into()));
        }
        if external.len() != n {
            return Err(Error::Graph(format!("expected {n} external edges, got {}", external.len())));
        }
        let mut edge_index: HashMap<String, usize> = HashMap::new();
        let mut ends: Vec<Vec<End>> = Vec::new();
        let mut ids: Vec<String> = Vec::new();
        let mut touch = |id: &str, end: End, edge_index: &mut HashMap<String, usize>| -> usize {
            let k = *edge_index.entry(id.to_string()).or_insert_with(|| {
                ids.push(id.to_string());
                ends.push(Vec::new());
                ids.len() - 1
            });
            ends[k].push(end);
            k
        };
        let mut rot = Vec::with_capacity(vertices.len());
        for (v, list) in rotation.iter().enumerate() {
            rot.push(list.iter().map(|id| touch(id, End::Vertex(v), &mut edge_index)).collect::<Vec<_>>());
        }
        let ext: Vec<usize> =
            external.iter().enumerate().map(|(i, id)| touch(id, End::Marked(i + 1), &mut edge_index)).collect();
        let mut edges = Vec::with_capacity(ids.len());
        for (id, e) in ids.into_iter().zip(ends) {
            if e.len() != 2 {
                return Err(Error::Graph(format!("edge {id} has {} endpoints", e.len())));
            }
            edges.push(Edge { id, ends: [e[0], e[1]] });
        }
        let g = EmbeddedBipartiteGraph { m, n, vertices, edges, rotation: rot, external: ext, names: BTreeMap::new() };
        g.validate()?;
        Ok(g)
    }

    pub(crate) fn from_raw(
        m: usize,
        n: usize,
        vertices: Vec<Vertex>,
        edges: Vec<Edge>,
        rotation: Vec<Vec<usize>>,
        external: Vec<usize>,
    ) -> Result<Self> {
        let g = EmbeddedBipartiteGraph { m, n, vertices, edges, rotation, external, names: BTreeMap::new() };
        g.validate()?;
        Ok(g)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn external_edge(&self, marked: usize) -> usize {
        self.external[marked - 1]
    }

    pub fn names(&self) -> &BTreeMap<Vec<usize>, String> {
        &self.names
    }

    pub(crate) fn set_names(&mut self, names: BTreeMap<Vec<usize>, String>) {
        self.names = names;
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut Vec<Vertex>, &mut Vec<Edge>, &mut Vec<Vec<usize>>) {
        (&mut self.vertices, &mut self.edges, &mut self.rotation)
    }

    pub fn vertex_index(&self, id: &str) -> Result<usize> {
        self.vertices.iter().position(|v| v.id == id).ok_or_else(|| Error::Lookup(id.to_string()))
    }

    pub fn other_end(&self, e: usize, from: End) -> End {
        let [a, b] = self.edges[e].ends;
        if a == from {
            b
        } else {
            a
        }
    }

    pub fn count(&self, color: Color) -> usize {
        self.vertices.iter().filter(|v| v.color == color).count()
    }

    /// Edges between two internal vertices.
    pub fn internal_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.ends.iter().all(|x| matches!(x, End::Vertex(_)))).count()
    }

    /// Structural checks: bipartite, trivalent blacks, externals at whites,
    /// consistent rotation lists, connected.
    pub fn validate(&self) -> Result<()> {
        let (m, n) = (self.m, self.n);
        if !(1 < m && m + 1 < n) {
            return Err(Error::Input(format!("need 1 < m < m+1 < n, got m={m}, n={n}")));
        }
        if self.external.len() != n {
            return Err(Error::Graph("one external edge per marked point required".into()));
        }
        let mut seen = vec![0usize; self.edges.len()];
        for (v, list) in self.rotation.iter().enumerate() {
            for &e in list {
                if !self.edges[e].ends.contains(&End::Vertex(v)) {
                    return Err(Error::Graph(format!("edge {} listed at a vertex it does not touch", self.edges[e].id)));
                }
                seen[e] += 1;
            }
        }
        for (i, &e) in self.external.iter().enumerate() {
            if !self.edges[e].ends.contains(&End::Marked(i + 1)) {
                return Err(Error::Graph(format!("external edge of {} does not reach it", i + 1)));
            }
            seen[e] += 1;
        }
        for (e, edge) in self.edges.iter().enumerate() {
            if seen[e] != 2 {
                return Err(Error::Graph(format!("edge {} appears {} times", edge.id, seen[e])));
            }
            match edge.ends {
                [End::Vertex(a), End::Vertex(b)] => {
                    if self.vertices[a].color == self.vertices[b].color {
                        return Err(Error::Graph(format!("edge {} joins two vertices of one color", edge.id)));
                    }
                }
                [End::Vertex(a), End::Marked(_)] | [End::Marked(_), End::Vertex(a)] => {
                    if self.vertices[a].color != Color::White {
                        return Err(Error::Graph(format!("external edge {} ends at a black vertex", edge.id)));
                    }
                }
                _ => return Err(Error::Graph(format!("edge {} joins two marked points", edge.id))),
            }
        }
        for (v, vert) in self.vertices.iter().enumerate() {
            if vert.color == Color::Black && self.rotation[v].len() != 3 {
                return Err(Error::Graph(format!("black vertex {} is not trivalent", vert.id)));
            }
            if self.rotation[v].is_empty() {
                return Err(Error::Graph(format!("isolated vertex {}", vert.id)));
            }
        }
        if !self.is_connected() {
            return Err(Error::Graph("graph is not connected".into()));
        }
        Ok(())
    }

    fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &e in &self.rotation[v] {
                if let End::Vertex(w) = self.other_end(e, End::Vertex(v)) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Faces, strands and dominating sets in one pass.
    pub fn analyze(&self) -> Result<Analysis> {
        Analysis::new(self)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            m: self.m,
            n: self.n,
            vertices: self.vertices.clone(),
            rotation: self
                .vertices
                .iter()
                .zip(&self.rotation)
                .map(|(v, r)| (v.id.clone(), r.iter().map(|&e| self.edges[e].id.clone()).collect()))
                .collect(),
            external: self
                .external
                .iter()
                .enumerate()
                .map(|(i, &e)| ((i + 1).to_string(), self.edges[e].id.clone()))
                .collect(),
            face_names: self.names.iter().map(|(k, v)| (v.clone(), k.clone())).collect(),
        }
    }

    pub fn from_json(j: &GraphJson) -> Result<Self> {
        let rotation: Vec<Vec<String>> = j
            .vertices
            .iter()
            .map(|v| j.rotation.get(&v.id).cloned().ok_or_else(|| Error::Graph(format!("no rotation for {}", v.id))))
            .collect::<Result<_>>()?;
        let external: Vec<String> = (1..=j.n)
            .map(|i| {
                j.external.get(&i.to_string()).cloned().ok_or_else(|| Error::Graph(format!("no external edge for {i}")))
            })
            .collect::<Result<_>>()?;
        let mut g = Self::from_rotation(j.m, j.n, j.vertices.clone(), &rotation, &external)?;
        g.names = j.face_names.iter().map(|(k, v)| (v.clone(), k.clone())).collect();
        Ok(g)
    }

    /// Graphviz rendering of the graph with marked points as boxes.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph bipartite {\n");
        for v in &self.vertices {
            let fill = if v.color == Color::Black { "black" } else { "white" };
            let _ = writeln!(s, "  \"{}\" [shape=circle, style=filled, fillcolor={fill}, label=\"\"];", v.id);
        }
        for i in 1..=self.n {
            let _ = writeln!(s, "  \"m{i}\" [shape=box, label=\"{i}\"];");
        }
        for e in &self.edges {
            let name = |x: End| match x {
                End::Vertex(v) => self.vertices[v].id.clone(),
                End::Marked(i) => format!("m{i}"),
            };
            let _ = writeln!(s, "  \"{}\" -- \"{}\";", name(e.ends[0]), name(e.ends[1]));
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub m: usize,
    pub n: usize,
    pub vertices: Vec<Vertex>,
    pub rotation: BTreeMap<String, Vec<String>>,
    pub external: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub face_names: BTreeMap<String, Vec<usize>>,
}

/// Node-level view with the boundary circle made explicit.
///
/// Nodes `0..V` are internal vertices and node `V + i - 1` is marked point `i`.
/// Edges `E + k` are boundary arcs from marked point `k + 1` to `k + 2`.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub nv: usize,
    pub ne: usize,
    pub rot: Vec<Vec<usize>>,
    pub ends: Vec<[usize; 2]>,
    /// Position of each edge end inside the rotation of its node.
    pub slot: Vec<[usize; 2]>,
    pub corner_base: Vec<usize>,
}

impl Embedding {
    fn new(g: &EmbeddedBipartiteGraph) -> Self {
        let nv = g.vertices.len();
        let ne = g.edges.len();
        let n = g.n;
        let node = |x: End| match x {
            End::Vertex(v) => v,
            End::Marked(i) => nv + i - 1,
        };
        let mut ends: Vec<[usize; 2]> = g.edges.iter().map(|e| [node(e.ends[0]), node(e.ends[1])]).collect();
        for k in 0..n {
            ends.push([nv + k, nv + (k + 1) % n]);
        }
        let mut rot = g.rotation.clone();
        for i in 0..n {
            // Inward external edge, then the arc towards i+1 (clockwise), then towards i-1.
            rot.push(vec![g.external[i], ne + i, ne + (i + n - 1) % n]);
        }
        let mut slot = vec![[usize::MAX; 2]; ends.len()];
        for (x, list) in rot.iter().enumerate() {
            for (k, &e) in list.iter().enumerate() {
                let s = if ends[e][0] == x && slot[e][0] == usize::MAX { 0 } else { 1 };
                slot[e][s] = k;
            }
        }
        let mut corner_base = Vec::with_capacity(rot.len() + 1);
        let mut acc = 0;
        for list in &rot {
            corner_base.push(acc);
            acc += list.len();
        }
        corner_base.push(acc);
        Embedding { nv, ne, rot, ends, slot, corner_base }
    }

    pub fn degree(&self, x: usize) -> usize {
        self.rot[x].len()
    }

    pub fn corner(&self, x: usize, k: usize) -> usize {
        self.corner_base[x] + k % self.degree(x)
    }

    pub fn corner_count(&self) -> usize {
        *self.corner_base.last().expect("sentinel")
    }

    /// Index of edge `e` in the rotation of its end node `x`.
    pub fn slot_at(&self, e: usize, x: usize) -> usize {
        if self.ends[e][0] == x {
            self.slot[e][0]
        } else {
            self.slot[e][1]
        }
    }

    pub fn other(&self, e: usize, x: usize) -> usize {
        if self.ends[e][0] == x {
            self.ends[e][1]
        } else {
            self.ends[e][0]
        }
    }

    pub fn is_marked(&self, x: usize) -> bool {
        x >= self.nv
    }

    /// Corner whose wedge lies to the right of the dart leaving `x` along its k-th edge.
    pub fn right_corner(&self, x: usize, k: usize) -> usize {
        let d = self.degree(x);
        self.corner(x, (k + d - 1) % d)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Face {
    pub index: usize,
    pub name: String,
    pub boundary: bool,
    /// Graph edges around the face (boundary arcs omitted).
    pub edges: Vec<String>,
    pub dominating: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZigZag {
    pub start: usize,
    pub end: usize,
    /// Edges in travel order, each with the direction it is traversed in.
    #[serde(skip)]
    pub darts: Vec<(usize, usize)>,
    pub edges: Vec<String>,
    #[serde(skip)]
    pub left_corners: Vec<usize>,
    #[serde(skip)]
    pub right_corners: Vec<usize>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct MinimalityReport {
    pub minimal: bool,
    pub violations: Vec<String>,
}

/// Derived combinatorics of a graph.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub m: usize,
    pub n: usize,
    pub emb: Embedding,
    /// Face of every corner; the outer face is `None`.
    pub corner_face: Vec<Option<usize>>,
    pub faces: Vec<Face>,
    pub strands: Vec<ZigZag>,
    /// For each graph edge, the faces on the two sides (`None` for the outer face).
    pub edge_faces: Vec<[Option<usize>; 2]>,
    pub report: MinimalityReport,
    /// `left[s][f]`: face `f` is on the left of strand `s` (indexed by start point - 1).
    pub left: Vec<Vec<bool>>,
}

impl Analysis {
    fn new(g: &EmbeddedBipartiteGraph) -> Result<Self> {
        let emb = Embedding::new(g);
        let (corner_face, face_corners) = trace_faces(&emb);
        let nfaces = face_corners.len();
        let mut edge_faces = vec![[None, None]; g.edges.len()];
        for (e, ef) in edge_faces.iter_mut().enumerate() {
            let [a, _] = emb.ends[e];
            let k = emb.slot_at(e, a);
            ef[0] = corner_face[emb.corner(a, k)];
            ef[1] = corner_face[emb.right_corner(a, k)];
        }
        let strands = trace_strands(g, &emb)?;
        let mut report = check_strands(g, &strands);
        let mut left = vec![vec![false; nfaces]; g.n];
        let mut consistent = true;
        for (s, z) in strands.iter().enumerate() {
            match classify_sides(&emb, &corner_face, &edge_faces, nfaces, z) {
                Some(l) => left[s] = l,
                None => {
                    consistent = false;
                    report.violations.push(format!("strand from {} does not split the disk", z.start));
                }
            }
        }
        // Euler characteristic of the closed disk: nodes - edges + faces (outer included) = 2.
        let euler = (emb.rot.len() + nfaces + 1) as i64 - emb.ends.len() as i64;
        if euler != 2 {
            report.violations.push(format!("rotation system is not planar (Euler characteristic {euler})"));
        }
        report.minimal = report.violations.is_empty();
        let mut faces = Vec::with_capacity(nfaces);
        for (f, corners) in face_corners.iter().enumerate() {
            let boundary = corners.iter().any(|&(x, _)| emb.is_marked(x));
            let dominating: Vec<usize> = if consistent {
                strands.iter().enumerate().filter(|&(s, _)| left[s][f]).map(|(_, z)| z.end).collect::<BTreeSet<_>>().into_iter().collect()
            } else {
                Vec::new()
            };
            let edges = corners
                .iter()
                .map(|&(x, k)| emb.rot[x][(k + 1) % emb.degree(x)])
                .filter(|&e| e < emb.ne)
                .map(|e| g.edges[e].id.clone())
                .collect();
            let name = g.names.get(&dominating).cloned().unwrap_or_else(|| default_face_name(&dominating, f));
            faces.push(Face { index: f, name, boundary, edges, dominating });
        }
        Ok(Analysis { m: g.m, n: g.n, emb, corner_face, faces, strands, edge_faces, report, left })
    }

    pub fn face_by_name(&self, name: &str) -> Option<&Face> {
        self.faces.iter().find(|f| f.name == name)
    }

    pub fn face_by_set(&self, set: &[usize]) -> Option<&Face> {
        self.faces.iter().find(|f| f.dominating == set)
    }

    /// The face quiver: a counterclockwise 3-cycle per black vertex, opposite arrows cancelled.
    pub fn quiver(&self, g: &EmbeddedBipartiteGraph) -> Result<Seed> {
        let k = self.faces.len();
        let mut eps = vec![vec![0i64; k]; k];
        for (v, vert) in g.vertices.iter().enumerate() {
            if vert.color != Color::Black {
                continue;
            }
            let fs: Vec<usize> = (0..3)
                .map(|i| self.corner_face[self.emb.corner(v, i)].ok_or_else(|| Error::Graph("black vertex on the outer face".into())))
                .collect::<Result<_>>()?;
            for i in 0..3 {
                let (a, b) = (fs[i], fs[(i + 1) % 3]);
                if a != b {
                    eps[a][b] += 1;
                    eps[b][a] -= 1;
                }
            }
        }
        let vertices = self.faces.iter().map(|f| SeedVertex { id: f.name.clone(), boundary: f.boundary }).collect();
        Seed::new(vertices, eps)
    }

    pub fn interior_faces(&self) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(|f| !f.boundary)
    }

    /// Boundary face lying between marked points `a - 1` and `a`.
    pub fn boundary_face_before(&self, a: usize) -> Option<usize> {
        let x = self.emb.nv + a - 1;
        self.corner_face[self.emb.corner(x, 2)]
    }
}

fn default_face_name(set: &[usize], f: usize) -> String {
    if set.is_empty() {
        return format!("face_{f}");
    }
    let parts: Vec<String> = set.iter().map(usize::to_string).collect();
    format!("I_{}", parts.join("_"))
}

type FaceCorners = Vec<Vec<(usize, usize)>>;

fn trace_faces(emb: &Embedding) -> (Vec<Option<usize>>, FaceCorners) {
    let total = emb.corner_count();
    let mut label: Vec<Option<usize>> = vec![None; total];
    let mut visited = vec![false; total];
    let mut faces: FaceCorners = Vec::new();
    // The outer face is the wedge at marked point 1 between its two arcs.
    let outer_start = (emb.nv, 1usize);
    let mut cycles: Vec<(bool, Vec<(usize, usize)>)> = Vec::new();
    for x in 0..emb.rot.len() {
        for k in 0..emb.degree(x) {
            if visited[emb.corner(x, k)] {
                continue;
            }
            let mut cyc = Vec::new();
            let (mut cx, mut ck) = (x, k);
            let mut outer = false;
            loop {
                let c = emb.corner(cx, ck);
                if visited[c] {
                    break;
                }
                visited[c] = true;
                if (cx, ck) == outer_start {
                    outer = true;
                }
                cyc.push((cx, ck));
                let e = emb.rot[cx][(ck + 1) % emb.degree(cx)];
                let y = emb.other(e, cx);
                ck = emb.slot_at(e, y);
                cx = y;
            }
            cycles.push((outer, cyc));
        }
    }
    for (outer, cyc) in cycles {
        if outer {
            continue;
        }
        let f = faces.len();
        for &(x, k) in &cyc {
            label[emb.corner(x, k)] = Some(f);
        }
        faces.push(cyc);
    }
    (label, faces)
}

fn trace_strands(g: &EmbeddedBipartiteGraph, emb: &Embedding) -> Result<Vec<ZigZag>> {
    let limit = 2 * emb.ends.len() + 4;
    let mut out = Vec::with_capacity(g.n);
    for i in 1..=g.n {
        let start_node = emb.nv + i - 1;
        let mut e = g.external[i - 1];
        let mut at = emb.other(e, start_node);
        let mut darts = vec![(e, start_node)];
        let mut left_corners = Vec::new();
        let mut right_corners = Vec::new();
        while !emb.is_marked(at) {
            if darts.len() > limit {
                return Err(Error::Graph(format!("zig-zag strand from {i} does not terminate")));
            }
            let d = emb.degree(at);
            let k = emb.slot_at(e, at);
            let next = match g.vertices[at].color {
                Color::Black => {
                    right_corners.push(emb.corner(at, k));
                    (k + 1) % d
                }
                Color::White => {
                    let j = (k + d - 1) % d;
                    left_corners.push(emb.corner(at, j));
                    j
                }
            };
            e = emb.rot[at][next];
            darts.push((e, at));
            at = emb.other(e, at);
        }
        let end = at - emb.nv + 1;
        let edges = darts.iter().map(|&(e, _)| g.edges[e].id.clone()).collect();
        out.push(ZigZag { start: i, end, darts, edges, left_corners, right_corners });
    }
    Ok(out)
}

fn check_strands(g: &EmbeddedBipartiteGraph, strands: &[ZigZag]) -> MinimalityReport {
    let (m, n) = (g.m, g.n);
    let mut violations = Vec::new();
    let mut uses = vec![0usize; g.edges.len()];
    for z in strands {
        if z.end != (z.start + m - 1) % n + 1 {
            violations.push(format!("strand from {} ends at {} instead of {}", z.start, z.end, (z.start + m - 1) % n + 1));
        }
        let mut seen = BTreeSet::new();
        for &(e, _) in &z.darts {
            uses[e] += 1;
            if !seen.insert(e) {
                violations.push(format!("strand from {} crosses itself on edge {}", z.start, g.edges[e].id));
            }
        }
    }
    if let Some(e) = uses.iter().position(|&u| u < 2) {
        violations.push(format!("closed zig-zag loop through edge {}", g.edges[e].id));
    }
    // Crossings happen on internal edges shared by two strands.
    let internal: Vec<bool> =
        g.edges.iter().map(|e| e.ends.iter().all(|x| matches!(x, End::Vertex(_)))).collect();
    let positions: Vec<HashMap<usize, usize>> = strands
        .iter()
        .map(|z| z.darts.iter().enumerate().filter(|(_, (e, _))| internal[*e]).map(|(p, &(e, _))| (e, p)).collect())
        .collect();
    for a in 0..strands.len() {
        for b in a + 1..strands.len() {
            let mut common: Vec<(usize, usize)> =
                positions[a].iter().filter_map(|(e, &pa)| positions[b].get(e).map(|&pb| (pa, pb))).collect();
            common.sort();
            if common.windows(2).any(|w| w[1].1 > w[0].1) {
                violations.push(format!(
                    "strands from {} and {} form a parallel bigon",
                    strands[a].start, strands[b].start
                ));
            }
        }
    }
    if let Err(e) = g.validate() {
        violations.push(e.to_string());
    }
    MinimalityReport { minimal: violations.is_empty(), violations }
}

/// Splits the faces into the two sides of a strand, seeded by the corners it
/// passes and propagated across edges (crossing the strand flips the side).
fn classify_sides(
    emb: &Embedding,
    corner_face: &[Option<usize>],
    edge_faces: &[[Option<usize>; 2]],
    nfaces: usize,
    z: &ZigZag,
) -> Option<Vec<bool>> {
    let mut parity = vec![false; emb.ne];
    for &(e, _) in &z.darts {
        parity[e] = !parity[e];
    }
    let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); nfaces];
    for (e, ef) in edge_faces.iter().enumerate() {
        if let [Some(a), Some(b)] = *ef {
            adj[a].push((b, parity[e]));
            adj[b].push((a, parity[e]));
        }
    }
    let mut side: Vec<Option<bool>> = vec![None; nfaces];
    let seed = z
        .left_corners
        .first()
        .and_then(|&c| corner_face[c].map(|f| (f, true)))
        .or_else(|| z.right_corners.first().and_then(|&c| corner_face[c].map(|f| (f, false))))?;
    side[seed.0] = Some(seed.1);
    let mut queue = VecDeque::from([seed.0]);
    while let Some(f) = queue.pop_front() {
        let s = side[f].expect("queued faces are labeled");
        for &(h, flip) in &adj[f] {
            let t = s ^ flip;
            match side[h] {
                None => {
                    side[h] = Some(t);
                    queue.push_back(h);
                }
                Some(u) if u != t => return None,
                _ => {}
            }
        }
    }
    for (&c, want) in z.left_corners.iter().map(|c| (c, true)).chain(z.right_corners.iter().map(|c| (c, false))) {
        if let Some(f) = corner_face[c] {
            if side[f] != Some(want) {
                return None;
            }
        }
    }
    side.into_iter().collect()
}

/// The cyclic interval `[a, b]` of marked points, wrapping past `n`.
pub fn cyclic_interval(a: i64, b: i64, n: usize) -> Vec<usize> {
    let n = n as i64;
    let norm = |x: i64| ((x - 1).rem_euclid(n) + 1) as usize;
    let (a, b) = (norm(a), norm(b));
    let mut out = Vec::new();
    let mut x = a;
    loop {
        out.push(x);
        if x == b {
            break;
        }
        x = x % n as usize + 1;
    }
    out.sort();
    out
}

/// Graphs along a deterministic walk of moves from the standard graph, for tests.
#[cfg(test)]
pub(crate) fn move_sequence_graphs(m: usize, n: usize, steps: usize) -> Vec<EmbeddedBipartiteGraph> {
    let mut g = build_gamma0(m, n).expect("valid parameters");
    let mut out = vec![g.clone()];
    for t in 0..steps {
        let an = g.analyze().expect("analyzable");
        let moves = available_moves(&g, &an);
        if moves.is_empty() {
            break;
        }
        g = apply_move(&g, &moves[(3 * t + 1) % moves.len()]).expect("legal move");
        out.push(g.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strands_cover_each_edge_twice() {
        let g = build_gamma0(3, 7).unwrap();
        let a = g.analyze().unwrap();
        assert_eq!(a.strands.len(), 7);
        let mut dirs: HashMap<(usize, usize), usize> = HashMap::new();
        for z in &a.strands {
            for &(e, from) in &z.darts {
                *dirs.entry((e, from)).or_default() += 1;
            }
        }
        assert_eq!(dirs.len(), 2 * g.edges().len());
        assert!(dirs.values().all(|&c| c == 1));
        let g = build_gamma0(2, 5).unwrap();
        let a = g.analyze().unwrap();
        assert_eq!(a.strands[0].end, 3);
    }

    #[test]
    fn small_standard_graph() {
        let g = build_gamma0(2, 4).unwrap();
        let q = g.analyze().unwrap().quiver(&g).unwrap();
        assert_eq!(q.len(), 5);
        assert_eq!(q.boundary_removed().len(), 1);
        let g = build_gamma0(2, 5).unwrap();
        assert_eq!(g.count(Color::Black), 3);
        assert_eq!(g.analyze().unwrap().faces.len(), 7);
        assert_eq!(build_gamma0(3, 7).unwrap().count(Color::Black), 8);
        assert!(build_gamma0(3, 4).is_err());
    }

    #[test]
    fn intervals_wrap() {
        assert_eq!(cyclic_interval(1, 3, 5), vec![1, 2, 3]);
        assert_eq!(cyclic_interval(4, 1, 5), vec![1, 4, 5]);
        assert_eq!(cyclic_interval(0, 1, 5), vec![1, 5]);
        assert_eq!(cyclic_interval(7, 7, 5), vec![2]);
    }

    fn tiny() -> EmbeddedBipartiteGraph {
        // A single white vertex joined to all four marked points.
        let vertices = vec![Vertex { id: "w".into(), color: Color::White }];
        let rotation = vec![vec!["e1".into(), "e4".into(), "e3".into(), "e2".into()]];
        let external: Vec<String> = (1..=4).map(|i| format!("e{i}")).collect();
        EmbeddedBipartiteGraph::from_rotation(2, 4, vertices, &rotation, &external).unwrap()
    }

    #[test]
    fn star_graph_faces() {
        let a = tiny().analyze().unwrap();
        assert_eq!(a.faces.len(), 4);
        assert!(a.faces.iter().all(|f| f.boundary));
        let mut ends: Vec<usize> = a.strands.iter().map(|z| z.end).collect();
        ends.sort();
        assert_eq!(ends, vec![1, 2, 3, 4]);
        assert!(!a.report.minimal);
    }

    #[test]
    fn rejects_bad_structure() {
        let vertices = vec![Vertex { id: "b".into(), color: Color::Black }];
        let rotation = vec![vec!["e1".into(), "e2".into(), "e3".into(), "e4".into()]];
        let external: Vec<String> = (1..=4).map(|i| format!("e{i}")).collect();
        assert!(EmbeddedBipartiteGraph::from_rotation(2, 4, vertices, &rotation, &external).is_err());
    }
}
