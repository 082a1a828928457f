//! DT on the standard seed written as a relabelling followed by mutations.
//!
//! The relabelling sends the face `(i, j)` of the mirrored graph to the face
//! `(n-m-j, m-i)` of the standard graph. The mutations come from a move
//! sequence found by search from the mirrored graph back to the standard one.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith::Rational;
use crate::bipartite::{build_gamma0, build_gamma0_star, find_move_sequence, gamma0_face_name, SearchOutcome};
use crate::error::{Error, Result};
use crate::quiver::{mutate_x, ClusterPoint, Seed};
use crate::tropical::{tropical_transport, TropStep};

#[derive(Clone, Debug, Serialize)]
pub struct DtPresentation {
    pub m: usize,
    pub n: usize,
    /// Standard face name -> mirrored face name.
    pub sigma: BTreeMap<String, String>,
    /// Vertices mutated, named as on the mirrored graph.
    pub mutations: Vec<String>,
    /// Names on the graph reached by the moves -> standard names, matched by dominating set.
    pub rename: BTreeMap<String, String>,
    /// Graphs visited by the search.
    pub visited: usize,
    #[serde(skip)]
    pub seed: Seed,
}

/// Interior face names of the mirrored graph and their images `(n-m-j, m-i)`.
pub fn sigma_map(m: usize, n: usize) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for i in 1..m {
        for j in 1..n - m {
            out.insert(gamma0_face_name(i, j), gamma0_face_name(n - m - j, m - i));
        }
    }
    out
}

/// Searches for a move sequence within `budget` graphs; `None` if exhausted.
pub fn find_dt_presentation(m: usize, n: usize, budget: usize) -> Result<Option<DtPresentation>> {
    let g0 = build_gamma0(m, n)?;
    let star = build_gamma0_star(m, n)?;
    let (steps, reached, visited) = match find_move_sequence(&star, &g0, budget)? {
        SearchOutcome::Found { steps, reached, visited } => (steps, reached, visited),
        SearchOutcome::Exhausted { .. } => return Ok(None),
    };
    let a0 = g0.analyze()?;
    let ar = reached.analyze()?;
    let mut rename = BTreeMap::new();
    for f in ar.interior_faces() {
        let g = a0
            .face_by_set(&f.dominating)
            .ok_or_else(|| Error::Graph(format!("no standard face with set {:?}", f.dominating)))?;
        rename.insert(f.name.clone(), g.name.clone());
    }
    let sigma: BTreeMap<String, String> = sigma_map(m, n).into_iter().map(|(a, b)| (b, a)).collect();
    let mutations = steps.iter().filter_map(|s| s.mutation.clone()).collect();
    let seed = a0.quiver(&g0)?.boundary_removed();
    Ok(Some(DtPresentation { m, n, sigma, mutations, rename, visited, seed }))
}

impl DtPresentation {
    pub fn steps(&self) -> Vec<TropStep> {
        let mut out = vec![TropStep::Relabel(self.sigma.clone())];
        out.extend(self.mutations.iter().cloned().map(TropStep::Mutate));
        out.push(TropStep::Relabel(self.rename.clone()));
        out
    }

    /// Applies the presentation to interior coordinates on the standard seed.
    pub fn apply_x(&self, x: &ClusterPoint<Rational>) -> Result<ClusterPoint<Rational>> {
        let (_, p) = transport_x(&self.seed, &self.steps(), x)?;
        Ok(p)
    }

    pub fn apply_trop(&self, p: &ClusterPoint<i64>) -> Result<ClusterPoint<i64>> {
        let (_, q) = tropical_transport(&self.seed, &self.steps(), p)?;
        Ok(q)
    }

    /// Seed reached after all steps; equal to the start when the presentation closes up.
    pub fn final_seed(&self) -> Result<Seed> {
        let mut s = self.seed.clone();
        for st in self.steps() {
            s = match st {
                TropStep::Mutate(k) => s.mutate(&k)?,
                TropStep::Relabel(r) => s.relabel(&r)?,
            };
        }
        Ok(s)
    }
}

/// `tropical_transport` for rational points.
pub fn transport_x(s: &Seed, steps: &[TropStep], p: &ClusterPoint<Rational>) -> Result<(Seed, ClusterPoint<Rational>)> {
    let mut seed = s.clone();
    let mut point = p.clone();
    for step in steps {
        match step {
            TropStep::Mutate(k) => {
                point = mutate_x(&seed, &point, k)?;
                seed = seed.mutate(k)?;
            }
            TropStep::Relabel(r) => {
                point = point.relabel(r)?;
                seed = seed.relabel(r)?;
            }
        }
    }
    Ok((seed, point))
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::configuration::{psi_coords, Configuration, Genericity};
    use crate::tropical::{basic_lamination, Sign};

    #[test]
    fn sigma_is_a_quiver_isomorphism() {
        for (m, n) in [(2, 5), (3, 6), (3, 7), (4, 9)] {
            let star = build_gamma0_star(m, n).unwrap();
            let qs = star.analyze().unwrap().quiver(&star).unwrap().boundary_removed();
            let g0 = build_gamma0(m, n).unwrap();
            let q0 = g0.analyze().unwrap().quiver(&g0).unwrap().boundary_removed();
            assert!(qs.relabel(&sigma_map(m, n)).unwrap().same_quiver(&q0), "({m},{n})");
        }
    }

    #[test]
    fn presentation_reproduces_dt_at_2_5() {
        let p = find_dt_presentation(2, 5, 10_000).unwrap().expect("found");
        assert!(p.final_seed().unwrap().same_quiver(&p.seed));
        let g = build_gamma0(2, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let c = Configuration::random(2, 5, Genericity::Total, &mut rng);
            let x = psi_coords(&c, &g).unwrap();
            assert_eq!(p.apply_x(&x).unwrap(), psi_coords(&c.dt().unwrap(), &g).unwrap());
        }
        for id in p.seed.ids() {
            let plus = basic_lamination(&p.seed, id, Sign::Plus).unwrap();
            let minus = basic_lamination(&p.seed, id, Sign::Minus).unwrap();
            assert_eq!(p.apply_trop(&plus).unwrap(), minus, "{id}");
        }
    }
}
