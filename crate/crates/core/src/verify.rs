//! Reproducible verification suites over the whole pipeline.
//!
//! Each numbered criterion is a list of labelled checks; a suite is a set of
//! criteria. Trial `k` of a criterion draws from its own generator derived
//! from the suite seed, so reports are identical with or without threads.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{det_cofactor, Rational, Ring};
use crate::bipartite::{
    apply_move, available_moves, build_gamma0, canonical_code, cyclic_interval, gamma0_dominating_set, gamma0_face_name, Color,
    EmbeddedBipartiteGraph, MoveKind,
};
use crate::configuration::{chi, lift_to_faces, psi_coords, subsets, wrap, Configuration, Genericity};
use crate::error::{Error, Result};
use crate::orientation::{boundary_measurement, special_orientation, topological_order};
use crate::poly::SparsePoly;
use crate::presentation::{find_dt_presentation, sigma_map};
use crate::quiver::{find_seed_iso, grid_seed, ClusterPoint};
use crate::tropical::{basic_lamination, check_dt_criterion_symbolic, Sign};
use crate::ysystem::{coxeter_a, y_period, Denominator, YInit};

pub const GRAPH_SIZES: [(usize, usize); 5] = [(2, 4), (2, 5), (2, 6), (3, 6), (3, 7)];
pub const SYMBOLIC_SIZES: [(usize, usize); 4] = [(2, 4), (2, 5), (2, 6), (3, 6)];
pub const PERIOD_SIZES: [(usize, usize); 4] = [(2, 5), (2, 6), (3, 6), (3, 7)];
pub const SEARCH_SIZES: [(usize, usize); 1] = [(2, 5)];
pub const Y_PAIRS: [(usize, usize); 4] = [(1, 1), (2, 1), (1, 2), (2, 2)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Graph,
    Orientation,
    Configuration,
    DtPeriodicity,
    DtCriterion,
    Lemma1Search,
    Ysystem,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 8] =
        ["graph", "orientation", "configuration", "dt-periodicity", "dt-criterion", "lemma1-search", "ysystem", "all"];

    pub fn criteria(self) -> Vec<u8> {
        match self {
            Suite::Graph => vec![1, 2],
            Suite::Orientation => vec![3, 5],
            Suite::Configuration => vec![4, 6, 7, 8, 9],
            Suite::DtPeriodicity => vec![8],
            Suite::DtCriterion => vec![10],
            Suite::Lemma1Search => vec![11],
            Suite::Ysystem => vec![12],
            Suite::All => (1..=12).collect(),
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let all = [
            Suite::Graph,
            Suite::Orientation,
            Suite::Configuration,
            Suite::DtPeriodicity,
            Suite::DtCriterion,
            Suite::Lemma1Search,
            Suite::Ysystem,
            Suite::All,
        ];
        Suite::NAMES
            .iter()
            .position(|&n| n == s)
            .map(|k| all[k])
            .ok_or_else(|| Error::Input(format!("unknown suite {s:?}; expected one of {}", Suite::NAMES.join(", "))))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = Suite::criteria(*self);
        let name = match self {
            Suite::All => "all",
            _ => Suite::NAMES[[1u8, 3, 4, 8, 10, 11, 12].iter().position(|c| *c == k[0]).expect("known suite")],
        };
        f.write_str(name)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteConfig {
    pub suite: Suite,
    /// Overrides the default `(m, n)` list of every criterion (for the
    /// Y-system, the `(p, q)` list).
    pub sizes: Option<Vec<(usize, usize)>>,
    pub trials: usize,
    pub seed: u64,
    /// Graphs the move search may visit.
    pub budget: usize,
    pub max_steps: Option<usize>,
    pub init: YInit,
}

impl SuiteConfig {
    pub fn new(suite: Suite) -> Self {
        SuiteConfig { suite, sizes: None, trials: 20, seed: 1, budget: 20_000, max_steps: None, init: YInit::Parity }
    }

    fn sizes_or(&self, default: &[(usize, usize)]) -> Vec<(usize, usize)> {
        self.sizes.clone().unwrap_or_else(|| default.to_vec())
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Input("trials must be positive".into()));
        }
        if self.suite != Suite::Ysystem {
            if let Some(s) = &self.sizes {
                if let Some(&(m, n)) = s.iter().find(|&&(m, n)| !(1 < m && m + 1 < n)) {
                    return Err(Error::Input(format!("need 1 < m < m+1 < n, got ({m},{n})")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub criterion: u8,
    pub label: String,
    pub size: String,
    pub pass: bool,
    /// Recorded for information; does not affect the verdict.
    pub info: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    pub checks: Vec<Check>,
    pub search_exhausted: bool,
    pub pass: bool,
}

impl SuiteReport {
    /// 0 pass, 1 a check failed, 3 the move search ran out of budget.
    pub fn exit_code(&self) -> i32 {
        if self.checks.iter().any(|c| !c.pass && !c.info) {
            1
        } else if self.search_exhausted {
            3
        } else {
            0
        }
    }
}

/// Outcome of one criterion.
#[derive(Clone, Debug, Default)]
pub struct CriterionResult {
    pub checks: Vec<Check>,
    pub search_exhausted: bool,
}

impl CriterionResult {
    pub fn pass(&self) -> bool {
        !self.search_exhausted && self.checks.iter().all(|c| c.pass || c.info)
    }
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let mut checks = Vec::new();
    let mut search_exhausted = false;
    for k in cfg.suite.criteria() {
        let r = run_criterion(k, cfg)?;
        checks.extend(r.checks);
        search_exhausted |= r.search_exhausted;
    }
    let pass = !search_exhausted && checks.iter().all(|c| c.pass || c.info);
    Ok(SuiteReport { suite: cfg.suite, seed: cfg.seed, trials: cfg.trials, checks, search_exhausted, pass })
}

pub fn run_criterion(k: u8, cfg: &SuiteConfig) -> Result<CriterionResult> {
    let mut out = CriterionResult::default();
    match k {
        1 => criterion_graph(cfg, &mut out)?,
        2 => criterion_moves(cfg, &mut out)?,
        3 => criterion_orientation(cfg, &mut out)?,
        4 => criterion_plucker(cfg, &mut out)?,
        5 => criterion_positivity(cfg, &mut out)?,
        6 => criterion_round_trip(cfg, &mut out)?,
        7 => criterion_dt_identification(cfg, &mut out)?,
        8 => criterion_periodicity(cfg, &mut out)?,
        9 => criterion_star(cfg, &mut out)?,
        10 => criterion_degrees(cfg, &mut out)?,
        11 => criterion_presentation(cfg, &mut out)?,
        12 => criterion_ysystem(cfg, &mut out)?,
        _ => return Err(Error::Input(format!("no criterion {k}"))),
    }
    Ok(out)
}

/// Generator for trial `k`, independent of scheduling.
pub fn trial_rng(seed: u64, k: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add((k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

fn size_label((m, n): (usize, usize)) -> String {
    format!("({m},{n})")
}

impl CriterionResult {
    fn push(&mut self, criterion: u8, label: &str, size: (usize, usize), failure: Option<String>) {
        self.checks.push(Check {
            criterion,
            label: label.to_string(),
            size: size_label(size),
            pass: failure.is_none(),
            info: false,
            detail: failure.unwrap_or_default(),
        });
    }

    fn push_info(&mut self, criterion: u8, label: &str, size: (usize, usize), pass: bool, detail: String) {
        self.checks.push(Check { criterion, label: label.to_string(), size: size_label(size), pass, info: true, detail });
    }
}

/// First failure over trials, as text; errors count as failures.
fn first_failure(results: Vec<Result<Option<String>>>) -> Option<String> {
    results.into_iter().enumerate().find_map(|(k, r)| match r {
        Ok(None) => None,
        Ok(Some(why)) => Some(format!("trial {k}: {why}")),
        Err(e) => Some(format!("trial {k}: {e}")),
    })
}

fn random_positive(rng: &mut impl Rng) -> Rational {
    Rational::new(rng.gen_range(1..=30i64), rng.gen_range(1..=30i64)).expect("nonzero denominator")
}

fn random_interior(g: &EmbeddedBipartiteGraph, rng: &mut impl Rng) -> Result<ClusterPoint<Rational>> {
    let an = g.analyze()?;
    Ok(ClusterPoint::new(an.interior_faces().map(|f| (f.name.clone(), random_positive(rng))).collect()))
}

fn criterion_graph(cfg: &SuiteConfig, out: &mut CriterionResult) -> Result<()> {
    for (m, n) in cfg.sizes_or(&GRAPH_SIZES) {
        let g = build_gamma0(m, n)?;
        let an = g.analyze()?;
        out.push(1, "standard graph is minimal", (m, n), (!an.report.minimal).then(|| an.report.violations.join("; ")));
        let bad = an.strands.iter().find(|z| z.end != wrap((z.start + m) as i64, n));
        out.push(1, "every strand ends m steps after its start", (m, n), bad.map(|z| format!("{} -> {}", z.start, z.end)));
        let bad = an.interior_faces().find(|f| f.dominating.len() != m);
        out.push(1, "interior dominating sets have m elements", (m, n), bad.map(|f| format!("{}: {:?}", f.name, f.dominating)));
        let bad = (1..=n).find_map(|a| {
            let want = cyclic_interval(a as i64, (a + m - 1) as i64, n);
            match an.boundary_face_before(a) {
                Some(f) if an.faces[f].dominating == want => None,
                Some(f) => Some(format!("face before {a}: {:?}, want {want:?}", an.faces[f].dominating)),
                None => Some(format!("no face before {a}")),
            }
        });
        out.push(1, "boundary face sets are cyclic intervals", (m, n), bad);
        let mut bad = None;
        'grid: for i in 1..n - m {
            for j in 1..m {
                let want = gamma0_dominating_set(m, n, i, j);
                let got = an.face_by_name(&gamma0_face_name(i, j)).map(|f| f.dominating.clone());
                if got.as_ref() != Some(&want) {
                    bad = Some(format!("({i},{j}): {got:?}, want {want:?}"));
                    break 'grid;
                }
            }
        }
        out.push(1, "interior sets follow [1,m-j] u [m+i-j+1,m+i]", (m, n), bad);
        let q = an.quiver(&g)?.boundary_removed();
        let iso = find_seed_iso(&q, &grid_seed(n - m - 1, m - 1)?)?;
        out.push(1, "boundary-removed quiver is the grid quiver", (m, n), iso.is_none().then(|| "no isomorphism".into()));
    }
    Ok(())
}

/// Checks that a square move swaps the centre set `J+{a,c}` for `J+{b,d}`.
fn square_swap_failure(before: &[Vec<usize>], old: &[usize], new: &[usize], m: usize) -> Option<String> {
    let j: Vec<usize> = old.iter().copied().filter(|x| new.contains(x)).collect();
    if j.len() + 2 != m {
        return Some(format!("{old:?} -> {new:?} is not a two-element swap"));
    }
    let mut d: Vec<usize> = old.iter().chain(new).copied().filter(|x| !j.contains(x)).collect();
    d.sort();
    let pair = |s: &[usize]| -> Vec<usize> { s.iter().copied().filter(|x| !j.contains(x)).collect() };
    let (p, q) = (pair(old), pair(new));
    let interleaved = (p == [d[0], d[2]] && q == [d[1], d[3]]) || (p == [d[1], d[3]] && q == [d[0], d[2]]);
    if !interleaved {
        return Some(format!("{old:?} -> {new:?} does not interleave"));
    }
    for (x, y) in [(0, 1), (1, 2), (2, 3), (0, 3)] {
        let mut s = j.clone();
        s.extend([d[x], d[y]]);
        s.sort();
        if !before.contains(&s) {
            return Some(format!("no neighbouring face with set {s:?}"));
        }
    }
    None
}

fn criterion_moves(cfg: &SuiteConfig, out: &mut CriterionResult) -> Result<()> {
    for (m, n) in cfg.sizes_or(&GRAPH_SIZES) {
        let graphs = neighbourhood(&build_gamma0(m, n)?, MOVE_SUITE_GRAPHS)?;
        let (mut type1, mut type2) = (None, None);
        let (mut seen1, mut seen2) = (0, 0);
        for g in &graphs {
            let an = g.analyze()?;
            let q = an.quiver(g)?;
            let sets: BTreeMap<String, Vec<usize>> = an.faces.iter().map(|f| (f.name.clone(), f.dominating.clone())).collect();
            let family: Vec<Vec<usize>> = sets.values().cloned().collect();
            for mv in available_moves(g, &an) {
                let h = apply_move(g, &mv)?;
                let ah = h.analyze()?;
                let qh = ah.quiver(&h)?;
                let hs: BTreeMap<String, Vec<usize>> =
                    ah.faces.iter().map(|f| (f.name.clone(), f.dominating.clone())).collect();
                let fail = match mv.kind {
                    MoveKind::TypeI => {
                        seen1 += 1;
                        if !ah.report.minimal {
                            Some("result not minimal".to_string())
                        } else if !qh.same_quiver(&q.mutate(&mv.location)?) {
                            Some("quiver is not the mutated quiver".to_string())
                        } else if let Some((k, _)) = sets.iter().find(|(k, v)| **k != mv.location && hs.get(*k) != Some(v)) {
                            Some(format!("face {k} changed"))
                        } else {
                            square_swap_failure(&family, &sets[&mv.location], &hs[&mv.location], m)
                        }
                    }
                    MoveKind::TypeII => {
                        seen2 += 1;
                        if !ah.report.minimal {
                            Some("result not minimal".to_string())
                        } else if !qh.same_quiver(&q) {
                            Some("quiver changed".to_string())
                        } else if hs != sets {
                            Some("dominating sets changed".to_string())
                        } else {
                            None
                        }
                    }
                };
                let slot = if mv.kind == MoveKind::TypeI { &mut type1 } else { &mut type2 };
                if slot.is_none() {
                    *slot = fail.map(|f| format!("{:?} at {}: {f}", mv.kind, mv.location));
                }
            }
        }
        for (label, fail, seen) in [
            ("square move mutates the quiver and swaps one set", type1, seen1),
            ("slide move fixes the quiver and every set", type2, seen2),
        ] {
            if seen == 0 {
                let detail = format!("no such move within {} graphs of the standard one", graphs.len());
                out.push_info(2, label, (m, n), false, detail);
            } else {
                out.push(2, label, (m, n), fail);
            }
        }
    }
    Ok(())
}

const MOVE_SUITE_GRAPHS: usize = 40;

/// Up to `limit` distinct graphs reachable from `g0`, in breadth-first order.
fn neighbourhood(g0: &EmbeddedBipartiteGraph, limit: usize) -> Result<Vec<EmbeddedBipartiteGraph>> {
    let mut seen = std::collections::HashSet::from([canonical_code(g0)]);
    let mut out = vec![g0.clone()];
    let mut k = 0;
    while k < out.len() && out.len() < limit {
        let g = out[k].clone();
        for mv in available_moves(&g, &g.analyze()?) {
            let h = apply_move(&g, &mv)?;
            if out.len() < limit && seen.insert(canonical_code(&h)) {
                out.push(h);
            }
        }
        k += 1;
    }
    Ok(out)
}

fn random_walk(g0: &EmbeddedBipartiteGraph, rng: &mut impl Rng) -> Result<Vec<EmbeddedBipartiteGraph>> {
    let mut g = g0.clone();
    let mut out = vec![g.clone()];
    for _ in 0..rng.gen_range(0..=3) {
        let moves = available_moves(&g, &g.analyze()?);
        if moves.is_empty() {
            break;
        }
        g = apply_move(&g, &moves[rng.gen_range(0..moves.len())])?;
        out.push(g.clone());
    }
    Ok(out)
}

fn orientation_failure(g: &EmbeddedBipartiteGraph) -> Result<Option<String>> {
    let (m, n) = (g.m(), g.n());
    let an = g.analyze()?;
    let o = match special_orientation(g, &an, 1) {
        Ok(o) => o,
        Err(e) => return Ok(Some(e.to_string())),
    };
    if topological_order(&an, &o).is_none() {
        return Ok(Some("directed cycle".into()));
    }
    if o.sources != (1..=m).collect::<Vec<_>>() {
        return Ok(Some(format!("sources {:?}", o.sources)));
    }
    for v in 0..g.vertices().len() {
        let rot = g.rotation(v);
        let outgoing = rot.iter().filter(|&&e| o.tail[e] == v).count();
        let incoming = rot.len() - outgoing;
        let ok = match g.vertices()[v].color {
            Color::White => incoming == 1,
            Color::Black => outgoing == 1,
        };
        if !ok {
            return Ok(Some(format!("vertex {} has {incoming} in, {outgoing} out", g.vertices()[v].id)));
        }
    }
    let (b, w, i) = (g.count(Color::Black), g.count(Color::White), g.internal_edge_count());
    if 2 * b + w != i + m {
        return Ok(Some(format!("2B + W - I = {} with n = {n}", 2 * b as i64 + w as i64 - i as i64)));
    }
    Ok(None)
}

fn criterion_orientation(cfg: &SuiteConfig, out: &mut CriterionResult) -> Result<()> {
    for (m, n) in cfg.sizes_or(&GRAPH_SIZES) {
        let g0 = build_gamma0(m, n)?;
        let results = crate::par::map_range(cfg.trials, |k| {
            let mut rng = trial_rng(cfg.seed ^ 3, k);
            for g in random_walk(&g0, &mut rng)? {
                if let Some(f) = orientation_failure(&g)? {
                    return Ok(Some(f));
                }
            }
            Ok(None)
        });
        out.push(3, "special orientation is acyclic and perfect with sources 1..m", (m, n), first_failure(results));
    }
    Ok(())
}

fn criterion_plucker(cfg: &SuiteConfig, out: &mut CriterionResult) -> Result<()> {
    for (m, n) in cfg.sizes_or(&GRAPH_SIZES) {
        let results = crate::par::map_range(cfg.trials, |k| {
            let c = Configuration::random(m, n, Genericity::Total, &mut trial_rng(cfg.seed ^ 4, k));
            for s in subsets(n, m + 2) {
                for pick in subsets(m + 2, m - 2) {
                    let j: Vec<usize> = pick.iter().map(|&x| s[x - 1]).collect();
                    let r: Vec<usize> = s.iter().copied().filter(|x| !j.contains(x)).collect();
                    let p = |x: usize, y: usize| {
                        let mut v = j.clone();
                        v.extend([x, y]);
                        c.plucker(&v)
                    };
                    let lhs = p(r[0], r[2])? * p(r[1], r[3])?;
                    let rhs = p(r[0], r[1])? * p(r[2], r[3])? + p(r[0], r[3])? * p(r[1], r[2])?;
                    if lhs != rhs {
                        return Ok(Some(format!("J={j:?}, ijkl={r:?}")));
                    }
                }
            }
            Ok(None)
        });
        out.push(4, "three-term Plucker relation", (m, n), first_failure(results));
    }
    Ok(())
}

fn criterion_positivity(cfg: &SuiteConfig, out: &mut CriterionResult) -> Result<()> {
    for (m, n) in cfg.sizes_or(&SYMBOLIC_SIZES) {
        let g = build_gamma0(m, n)?;
        let an = g.analyze()?;
        let vals: BTreeMap<String, SparsePoly> = an.faces.iter().map(|f| (f.name.clone(), SparsePoly::var(&f.name))).collect();
        let mat = boundary_measurement(&g, &vals)?;
        let all = subsets(n, m);
        let failures = crate::par::map(&all, |s| {
            let rows: Vec<Vec<SparsePoly>> = (0..m).map(|r| s.iter().map(|&c| mat[r][c - 1].clone()).collect()).collect();
            let d = det_cofactor(&rows);
            if s.iter().copied().eq(1..=m) && d != SparsePoly::one() {
                return Some(format!("{s:?}: leading minor is not 1"));
            }
            (d.is_zero() || !d.all_coefficients_positive()).then(|| format!("{s:?}: {d:?}"))
        });
        out.push(5, "every minor is a positive polynomial", (m, n), failures.into_iter().flatten().next());
    }
    Ok(())
}

fn criterion_round_trip(cfg: &SuiteConfig, out: &mut CriterionResult) -> Result<()> {
    for (m, n) in cfg.sizes_or(&GRAPH_SIZES) {
        let g = build_gamma0(m, n)?;
        let results: Vec<Result<(Option<String>, Option<String>)>> = crate::par::map_range(cfg.trials, |k| {
            let mut rng = trial_rng(cfg.seed ^ 6, k);
            let x = random_interior(&g, &mut rng)?;
            let ones = lift_to_faces(&g, &x, |_| Rational::one())?;
            let back = psi_coords(&chi(&g, &ones)?, &g)?;
            let identity = (back != x).then(|| format!("{x:?} -> {back:?}"));
            let mut lift = None;
            for _ in 0..5 {
                let b: BTreeMap<String, Rational> =
                    g.analyze()?.faces.iter().map(|f| (f.name.clone(), random_positive(&mut rng))).collect();
                let vals = lift_to_faces(&g, &x, |name| b[name].clone())?;
                if psi_coords(&chi(&g, &vals)?, &g)? != back {
                    lift = Some("interior values depend on the boundary lift".to_string());
                    break;
                }
            }
            Ok((identity, lift))
        });
        let (mut ids, mut lifts) = (Vec::new(), Vec::new());
        for r in results {
            match r {
                Ok((a, b)) => {
                    ids.push(Ok(a));
                    lifts.push(Ok(b));
                }
                Err(e) => {
                    ids.push(Err(e.clone()));
                    lifts.push(Err(e));
                }
            }
        }
        out.push(6, "psi after chi is the identity", (m, n), first_failure(ids));
        out.push(6, "psi after chi ignores boundary values", (m, n), first_failure(lifts));
    }
    Ok(())
}

fn criterion_dt_identification(cfg: &SuiteConfig, out: &mut CriterionResult) -> Result<()> {
    for (m, n) in cfg.sizes_or(&GRAPH_SIZES) {
        let g = build_gamma0(m, n)?;
        let results = crate::par::map_range(cfg.trials, |k| {
            let c = Configuration::random(m, n, Genericity::Total, &mut trial_rng(cfg.seed ^ 7, k));
            let x = psi_coords(&c, &g)?;
            let k = chi(&g, &lift_to_faces(&g, &x, |_| Rational::one())?)?;
            Ok((!k.equal_projective(&c.dt()?)).then(|| "chi(psi(C)) differs from DT(C)".to_string()))
        });
        out.push(7, "chi after psi is DT", (m, n), first_failure(results));
    }
    Ok(())
}

fn criterion_periodicity(cfg: &SuiteConfig, out: &mut CriterionResult) -> Result<()> {
    for (m, n) in cfg.sizes_or(&PERIOD_SIZES) {
        let results: Vec<Result<(Option<String>, Option<String>)>> = crate::par::map_range(cfg.trials, |k| {
            let c = Configuration::random(m, n, Genericity::Total, &mut trial_rng(cfg.seed ^ 8, k));
            let d2 = c.dt()?.dt()?;
            let shift = (!d2.equal_projective(&c.shift(-(m as i64)))).then(|| "DT^2(C) is not the shift".to_string());
            let mut x = c.clone();
            for _ in 0..2 * n {
                x = x.dt()?.normalized();
            }
            Ok((shift, (!x.equal_projective(&c)).then(|| "DT^2n(C) differs from C".to_string())))
        });
        let (a, b): (Vec<_>, Vec<_>) = results
            .into_iter()
            .map(|r| match r {
                Ok((a, b)) => (Ok(a), Ok(b)),
                Err(e) => (Err(e.clone()), Err(e)),
            })
            .unzip();
        out.push(8, "DT squared is the cyclic shift by m", (m, n), first_failure(a));
        out.push(8, "DT to the power 2n is the identity", (m, n), first_failure(b));
    }
    Ok(())
}

fn criterion_star(cfg: &SuiteConfig, out: &mut CriterionResult) -> Result<()> {
    for (m, n) in cfg.sizes_or(&GRAPH_SIZES) {
        let g = build_gamma0(m, n)?;
        let results: Vec<Result<(Option<String>, Option<String>)>> = crate::par::map_range(cfg.trials, |k| {
            let c = Configuration::random(m, n, Genericity::Total, &mut trial_rng(cfg.seed ^ 9, k));
            let s = c.star()?;
            let inv = (!s.star()?.equal_projective(&c)).then(|| "star(star(C)) differs from C".to_string());
            let (x, y) = (psi_coords(&c, &g)?, psi_coords(&s, &g)?);
            let mut expr = None;
            'grid: for i in 1..n - m {
                for j in 1..m {
                    let want = x.get(&gamma0_face_name(n - m - i, m - j))?.recip();
                    if Some(y.get(&gamma0_face_name(i, j))?.clone()) != want {
                        expr = Some(format!("face ({i},{j})"));
                        break 'grid;
                    }
                }
            }
            Ok((inv, expr))
        });
        let (a, b): (Vec<_>, Vec<_>) = results
            .into_iter()
            .map(|r| match r {
                Ok((a, b)) => (Ok(a), Ok(b)),
                Err(e) => (Err(e.clone()), Err(e)),
            })
            .unzip();
        out.push(9, "star is an involution", (m, n), first_failure(a));
        out.push(9, "psi of star(C) at (i,j) inverts psi of C at (n-m-i,m-j)", (m, n), first_failure(b));
    }
    Ok(())
}

fn criterion_degrees(cfg: &SuiteConfig, out: &mut CriterionResult) -> Result<()> {
    let sizes = cfg.sizes_or(&SYMBOLIC_SIZES);
    let reports = crate::par::map(&sizes, |&(m, n)| check_dt_criterion_symbolic(m, n));
    for (&size, r) in sizes.iter().zip(reports) {
        let fail = match r {
            Ok(r) if r.pass => None,
            Ok(r) => Some(serde_json::to_string(&r.degree_matrix).expect("serializable")),
            Err(e) => Some(e.to_string()),
        };
        out.push(10, "degree matrix of DT is minus the identity", size, fail);
    }
    Ok(())
}

fn criterion_presentation(cfg: &SuiteConfig, out: &mut CriterionResult) -> Result<()> {
    for (m, n) in cfg.sizes_or(&SEARCH_SIZES) {
        let star = crate::bipartite::build_gamma0_star(m, n)?;
        let g0 = build_gamma0(m, n)?;
        let qs = star.analyze()?.quiver(&star)?.boundary_removed();
        let q0 = g0.analyze()?.quiver(&g0)?.boundary_removed();
        let iso = qs.relabel(&sigma_map(m, n))?.same_quiver(&q0);
        out.push(11, "(i,j) -> (n-m-j,m-i) is a quiver isomorphism", (m, n), (!iso).then(|| "arrows differ".into()));
        let Some(p) = find_dt_presentation(m, n, cfg.budget)? else {
            out.search_exhausted = true;
            out.push_info(11, "move search within budget", (m, n), false, format!("exhausted after {} graphs", cfg.budget));
            continue;
        };
        out.push_info(
            11,
            "move search within budget",
            (m, n),
            true,
            format!("{} mutations, {} graphs visited", p.mutations.len(), p.visited),
        );
        let closes = p.final_seed()?.same_quiver(&p.seed);
        out.push(11, "mutations after the relabelling return to the seed", (m, n), (!closes).then(|| "seed differs".into()));
        let results = crate::par::map_range(cfg.trials, |k| {
            let mut rng = trial_rng(cfg.seed ^ 11, k);
            let x = random_interior(&g0, &mut rng)?;
            let dt = psi_coords(&chi(&g0, &lift_to_faces(&g0, &x, |_| Rational::one())?)?, &g0)?;
            Ok((p.apply_x(&x)? != dt).then(|| format!("{x:?}")))
        });
        out.push(11, "mutation sequence reproduces DT", (m, n), first_failure(results));
        let mut bad = None;
        for id in p.seed.ids() {
            let plus = basic_lamination(&p.seed, id, Sign::Plus)?;
            if p.apply_trop(&plus)? != basic_lamination(&p.seed, id, Sign::Minus)? {
                bad = Some(format!("l+ at {id}"));
                break;
            }
        }
        out.push(11, "each positive basic lamination goes to the negative one", (m, n), bad);
    }
    Ok(())
}

fn criterion_ysystem(cfg: &SuiteConfig, out: &mut CriterionResult) -> Result<()> {
    for (p, q) in cfg.sizes_or(&Y_PAIRS) {
        let bound = 2 * (coxeter_a(p) + coxeter_a(q));
        let steps = cfg.max_steps.unwrap_or(bound).max(bound);
        let r = y_period(p, q, cfg.init, Denominator::Inverse, cfg.trials, steps, cfg.seed)?;
        let bad = r.trials.iter().find(|t| !t.divides_bound).map(|t| format!("trial {}: period {:?}", t.trial, t.period));
        let label = format!("{} start: period divides 2(h+h')", if cfg.init == YInit::Parity { "parity" } else { "full" });
        out.push(12, &label, (p, q), bad);
        if cfg.init == YInit::Parity {
            let full = y_period(p, q, YInit::Full, Denominator::Inverse, cfg.trials, steps, cfg.seed)?;
            let periods: Vec<String> =
                full.trials.iter().map(|t| t.period.map_or("none".to_string(), |x| x.to_string())).collect();
            out.push_info(12, "full start: periods found", (p, q), full.pass, periods.join(","));
        }
    }
    Ok(())
}
