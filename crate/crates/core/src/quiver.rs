//! Seeds (skew-symmetric exchange matrices), their mutations, and the cluster
//! A-, X- and tropical coordinate mutations.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::Field;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedVertex {
    pub id: String,
    pub boundary: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    vertices: Vec<SeedVertex>,
    index: HashMap<String, usize>,
    eps: Vec<Vec<i64>>,
}

fn sign(v: i64) -> i64 {
    v.signum()
}

impl Seed {
    pub fn new(vertices: Vec<SeedVertex>, eps: Vec<Vec<i64>>) -> Result<Seed> {
        let k = vertices.len();
        if eps.len() != k || eps.iter().any(|r| r.len() != k) {
            return Err(Error::Dimension("exchange matrix does not match vertex count".into()));
        }
        for i in 0..k {
            for j in 0..k {
                if eps[i][j] != -eps[j][i] {
                    return Err(Error::Input(format!(
                        "exchange matrix not skew-symmetric at ({}, {})",
                        vertices[i].id, vertices[j].id
                    )));
                }
            }
        }
        let index: HashMap<String, usize> = vertices.iter().enumerate().map(|(i, v)| (v.id.clone(), i)).collect();
        if index.len() != k {
            return Err(Error::Input("duplicate vertex id".into()));
        }
        Ok(Seed { vertices, index, eps })
    }

    /// Builds a seed from a list of arrows; repeated arrows add up.
    pub fn from_arrows(vertices: Vec<SeedVertex>, arrows: &[(&str, &str)]) -> Result<Seed> {
        let k = vertices.len();
        let index: HashMap<&str, usize> = vertices.iter().enumerate().map(|(i, v)| (v.id.as_str(), i)).collect();
        let mut eps = vec![vec![0i64; k]; k];
        for (a, b) in arrows {
            let i = *index.get(a).ok_or_else(|| Error::Lookup(a.to_string()))?;
            let j = *index.get(b).ok_or_else(|| Error::Lookup(b.to_string()))?;
            eps[i][j] += 1;
            eps[j][i] -= 1;
        }
        Seed::new(vertices, eps)
    }

    pub fn vertices(&self) -> &[SeedVertex] {
        &self.vertices
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.vertices.iter().map(|v| v.id.as_str())
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn idx(&self, id: &str) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::Lookup(id.to_string()))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.eps
    }

    pub fn eps(&self, i: &str, j: &str) -> Result<i64> {
        Ok(self.eps[self.idx(i)?][self.idx(j)?])
    }

    pub fn is_boundary(&self, id: &str) -> Result<bool> {
        Ok(self.vertices[self.idx(id)?].boundary)
    }

    /// Seed mutation at `k`.
    pub fn mutate(&self, k: &str) -> Result<Seed> {
        let kk = self.idx(k)?;
        let n = self.len();
        let mut eps = self.eps.clone();
        for i in 0..n {
            for j in 0..n {
                let e = self.eps[i][j];
                eps[i][j] = if i == kk || j == kk {
                    -e
                } else {
                    let (a, b) = (self.eps[i][kk], self.eps[kk][j]);
                    if a * b > 0 {
                        e + a.abs() * b
                    } else {
                        e
                    }
                };
            }
        }
        Ok(Seed { vertices: self.vertices.clone(), index: self.index.clone(), eps })
    }

    pub fn mutate_seq<S: AsRef<str>>(&self, ks: &[S]) -> Result<Seed> {
        ks.iter().try_fold(self.clone(), |s, k| s.mutate(k.as_ref()))
    }

    /// Drops the vertices flagged as boundary.
    pub fn boundary_removed(&self) -> Seed {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| !self.vertices[i].boundary).collect();
        self.restrict(&keep)
    }

    fn restrict(&self, keep: &[usize]) -> Seed {
        let vertices: Vec<SeedVertex> = keep.iter().map(|&i| self.vertices[i].clone()).collect();
        let eps = keep.iter().map(|&i| keep.iter().map(|&j| self.eps[i][j]).collect()).collect();
        Seed::new(vertices, eps).expect("restriction of a valid seed")
    }

    pub fn negated(&self) -> Seed {
        let eps = self.eps.iter().map(|r| r.iter().map(|v| -v).collect()).collect();
        Seed { vertices: self.vertices.clone(), index: self.index.clone(), eps }
    }

    /// Renames vertices through `sigma`; the exchange matrix is carried along.
    pub fn relabel(&self, sigma: &BTreeMap<String, String>) -> Result<Seed> {
        check_bijection(self, sigma)?;
        let vertices =
            self.vertices.iter().map(|v| SeedVertex { id: sigma[&v.id].clone(), boundary: v.boundary }).collect();
        Seed::new(vertices, self.eps.clone())
    }

    /// Equality of exchange matrices keyed by vertex id, ignoring vertex order.
    pub fn same_quiver(&self, other: &Seed) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let Ok(map): Result<Vec<usize>> = self.ids().map(|id| other.idx(id)).collect() else {
            return false;
        };
        (0..self.len()).all(|i| {
            self.vertices[i].boundary == other.vertices[map[i]].boundary
                && (0..self.len()).all(|j| self.eps[i][j] == other.eps[map[i]][map[j]])
        })
    }

    pub fn arrow_count(&self) -> i64 {
        self.eps.iter().flatten().filter(|&&v| v > 0).sum()
    }

    pub fn in_out_degree(&self, id: &str) -> Result<(i64, i64)> {
        let i = self.idx(id)?;
        let out = self.eps[i].iter().filter(|&&v| v > 0).sum();
        let inn = -self.eps[i].iter().filter(|&&v| v < 0).sum::<i64>();
        Ok((inn, out))
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph quiver {\n");
        for v in &self.vertices {
            let style = if v.boundary { " [style=dashed]" } else { "" };
            let _ = writeln!(s, "  \"{}\"{};", v.id, style);
        }
        for i in 0..self.len() {
            for j in 0..self.len() {
                for _ in 0..self.eps[i][j].max(0) {
                    let _ = writeln!(s, "  \"{}\" -> \"{}\";", self.vertices[i].id, self.vertices[j].id);
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Serialize, Deserialize)]
struct SeedRepr {
    vertices: Vec<SeedVertex>,
    epsilon: Vec<(String, String, i64)>,
}

impl Serialize for Seed {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut epsilon = Vec::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if self.eps[i][j] != 0 {
                    epsilon.push((self.vertices[i].id.clone(), self.vertices[j].id.clone(), self.eps[i][j]));
                }
            }
        }
        SeedRepr { vertices: self.vertices.clone(), epsilon }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Seed {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = SeedRepr::deserialize(d)?;
        let k = repr.vertices.len();
        let index: HashMap<&str, usize> = repr.vertices.iter().enumerate().map(|(i, v)| (v.id.as_str(), i)).collect();
        let mut eps = vec![vec![0i64; k]; k];
        for (a, b, v) in &repr.epsilon {
            let i = *index.get(a.as_str()).ok_or_else(|| D::Error::custom(format!("unknown vertex {a}")))?;
            let j = *index.get(b.as_str()).ok_or_else(|| D::Error::custom(format!("unknown vertex {b}")))?;
            eps[i][j] = *v;
            eps[j][i] = -*v;
        }
        Seed::new(repr.vertices, eps).map_err(D::Error::custom)
    }
}

fn check_bijection(a: &Seed, sigma: &BTreeMap<String, String>) -> Result<()> {
    if sigma.len() != a.len() || a.ids().any(|id| !sigma.contains_key(id)) {
        return Err(Error::Input("map is not defined on every vertex".into()));
    }
    let mut images: Vec<&String> = sigma.values().collect();
    images.sort();
    images.dedup();
    if images.len() != sigma.len() {
        return Err(Error::Input("map is not injective".into()));
    }
    Ok(())
}

/// True iff `eps_b[sigma(i)][sigma(j)] = eps_a[i][j]` for all i, j.
pub fn seed_isomorphic(a: &Seed, b: &Seed, sigma: &BTreeMap<String, String>) -> Result<bool> {
    check_bijection(a, sigma)?;
    if a.len() != b.len() {
        return Ok(false);
    }
    let Ok(img): Result<Vec<usize>> = a.ids().map(|id| b.idx(&sigma[id])).collect() else {
        return Err(Error::Input("map image is not the target vertex set".into()));
    };
    Ok((0..a.len()).all(|i| (0..a.len()).all(|j| a.eps[i][j] == b.eps[img[i]][img[j]])))
}

pub const MAX_ISO_VERTICES: usize = 12;

/// Backtracking search for a seed isomorphism, pruned by in/out degree.
pub fn find_seed_iso(a: &Seed, b: &Seed) -> Result<Option<BTreeMap<String, String>>> {
    let k = a.len();
    if k != b.len() {
        return Ok(None);
    }
    if k > MAX_ISO_VERTICES {
        return Err(Error::Input(format!("isomorphism search limited to {MAX_ISO_VERTICES} vertices")));
    }
    let signature = |s: &Seed, i: usize| {
        let mut row: Vec<i64> = s.eps[i].clone();
        row.sort();
        row
    };
    let sa: Vec<Vec<i64>> = (0..k).map(|i| signature(a, i)).collect();
    let sb: Vec<Vec<i64>> = (0..k).map(|i| signature(b, i)).collect();
    let mut assign = vec![usize::MAX; k];
    let mut used = vec![false; k];

    fn extend(
        pos: usize,
        a: &Seed,
        b: &Seed,
        sa: &[Vec<i64>],
        sb: &[Vec<i64>],
        assign: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if pos == a.len() {
            return true;
        }
        for cand in 0..b.len() {
            if used[cand] || sa[pos] != sb[cand] {
                continue;
            }
            if (0..pos).any(|p| a.eps[pos][p] != b.eps[cand][assign[p]]) {
                continue;
            }
            assign[pos] = cand;
            used[cand] = true;
            if extend(pos + 1, a, b, sa, sb, assign, used) {
                return true;
            }
            used[cand] = false;
        }
        false
    }

    if extend(0, a, b, &sa, &sb, &mut assign, &mut used) {
        Ok(Some(
            (0..k).map(|i| (a.vertices[i].id.clone(), b.vertices[assign[i]].id.clone())).collect(),
        ))
    } else {
        Ok(None)
    }
}

/// Name of the grid vertex `(i, j)`.
pub fn grid_id(i: usize, j: usize) -> String {
    format!("f_{i}_{j}")
}

/// The `p x q` grid quiver with arrows right, down and diagonally back up-left.
pub fn grid_seed(p: usize, q: usize) -> Result<Seed> {
    if p == 0 || q == 0 {
        return Err(Error::Input("grid dimensions must be positive".into()));
    }
    let mut vertices = Vec::new();
    for i in 1..=p {
        for j in 1..=q {
            vertices.push(SeedVertex { id: grid_id(i, j), boundary: false });
        }
    }
    let mut arrows = Vec::new();
    for i in 1..=p {
        for j in 1..=q {
            if j < q {
                arrows.push((grid_id(i, j), grid_id(i, j + 1)));
            }
            if i < p {
                arrows.push((grid_id(i, j), grid_id(i + 1, j)));
            }
            if i < p && j < q {
                arrows.push((grid_id(i + 1, j + 1), grid_id(i, j)));
            }
        }
    }
    let refs: Vec<(&str, &str)> = arrows.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    Seed::from_arrows(vertices, &refs)
}

/// Coordinates attached to the vertices of a seed, over any carrier.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterPoint<T> {
    pub values: BTreeMap<String, T>,
}

impl<T: Clone> ClusterPoint<T> {
    pub fn new(values: BTreeMap<String, T>) -> Self {
        ClusterPoint { values }
    }

    pub fn get(&self, id: &str) -> Result<&T> {
        self.values.get(id).ok_or_else(|| Error::Lookup(id.to_string()))
    }

    fn aligned(&self, s: &Seed) -> Result<Vec<T>> {
        s.ids().map(|id| self.get(id).cloned()).collect()
    }

    /// Pushes the point through a vertex bijection: the value at `i` moves to `sigma(i)`.
    pub fn relabel(&self, sigma: &BTreeMap<String, String>) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (k, v) in &self.values {
            let img = sigma.get(k).ok_or_else(|| Error::Lookup(k.clone()))?;
            values.insert(img.clone(), v.clone());
        }
        Ok(ClusterPoint { values })
    }
}

/// Cluster X-mutation at `k` using the exchange matrix of `s` (before mutation).
pub fn mutate_x<T: Field>(s: &Seed, p: &ClusterPoint<T>, k: &str) -> Result<ClusterPoint<T>> {
    let kk = s.idx(k)?;
    let xs = p.aligned(s)?;
    let xk = &xs[kk];
    let xk_inv = xk.inv().ok_or_else(|| Error::Singular(format!("X_{k} = 0")))?;
    let mut values = BTreeMap::new();
    for (i, v) in s.vertices.iter().enumerate() {
        let e = s.eps[i][kk];
        let new = if i == kk {
            xk_inv.clone()
        } else if e == 0 {
            xs[i].clone()
        } else {
            let base = if sign(e) > 0 { &xk_inv } else { xk };
            let factor = T::one().add(base);
            if factor.is_zero() {
                return Err(Error::Singular(format!("1 + X_{k}^(-sign) vanishes")));
            }
            let pw = factor.powi(-e).expect("nonzero factor");
            xs[i].mul(&pw)
        };
        values.insert(v.id.clone(), new);
    }
    Ok(ClusterPoint { values })
}

/// Cluster A-mutation at `k`; only the coordinate at `k` changes.
pub fn mutate_a<T: Field>(s: &Seed, p: &ClusterPoint<T>, k: &str) -> Result<ClusterPoint<T>> {
    let kk = s.idx(k)?;
    let a = p.aligned(s)?;
    let mut pos = T::one();
    let mut neg = T::one();
    for (j, aj) in a.iter().enumerate() {
        let e = s.eps[kk][j];
        if e > 0 {
            pos = pos.mul(&aj.powi(e).expect("nonnegative power"));
        } else if e < 0 {
            neg = neg.mul(&aj.powi(-e).expect("nonnegative power"));
        }
    }
    let inv = a[kk].inv().ok_or_else(|| Error::Singular(format!("A_{k} = 0")))?;
    let mut out = p.clone();
    out.values.insert(k.to_string(), inv.mul(&pos.add(&neg)));
    Ok(out)
}

/// Tropical X-mutation at `k` over the integers.
pub fn mutate_trop(s: &Seed, p: &ClusterPoint<i64>, k: &str) -> Result<ClusterPoint<i64>> {
    let kk = s.idx(k)?;
    let xs = p.aligned(s)?;
    let xk = xs[kk];
    let mut values = BTreeMap::new();
    for (i, v) in s.vertices.iter().enumerate() {
        let e = s.eps[i][kk];
        let new = if i == kk { -xk } else { xs[i] - e * 0i64.max(-sign(e) * xk) };
        values.insert(v.id.clone(), new);
    }
    Ok(ClusterPoint { values })
}

/// `X_i = prod_j A_j^{eps_ij}`.
pub fn p_map<T: Field>(s: &Seed, a: &ClusterPoint<T>) -> Result<ClusterPoint<T>> {
    let av = a.aligned(s)?;
    let mut values = BTreeMap::new();
    for (i, v) in s.vertices.iter().enumerate() {
        let mut x = T::one();
        for (j, aj) in av.iter().enumerate() {
            let e = s.eps[i][j];
            if e != 0 {
                let pw = aj.powi(e).ok_or_else(|| Error::Singular(format!("A_{} = 0", s.vertices[j].id)))?;
                x = x.mul(&pw);
            }
        }
        values.insert(v.id.clone(), x);
    }
    Ok(ClusterPoint { values })
}
