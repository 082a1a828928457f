//! The Y-system for a pair of type A Dynkin diagrams, iterated exactly.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum YInit {
    /// Every variable at times 0 and 1 is random.
    Full,
    /// Only the class with `i + i' + t` even is random; the other class is the
    /// same solution moved one step forward in time.
    Parity,
}

/// How the second product enters the recurrence.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Denominator {
    /// `prod (1 + Y^-1)`, the periodic system.
    #[default]
    Inverse,
    /// `prod (1 + Y)`, kept to record that it is not periodic.
    Plain,
}

/// Values at times `t - 1` and `t`; `cur[i - 1][i' - 1]` is `Y_{i,i',t}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct YState {
    pub p: usize,
    pub q: usize,
    pub t: i64,
    pub prev: Vec<Vec<Rational>>,
    pub cur: Vec<Vec<Rational>>,
}

/// Coxeter number of `A_k`.
pub fn coxeter_a(k: usize) -> usize {
    k + 1
}

/// Neighbours of `i` in the Dynkin diagram `A_k`.
fn neighbours(i: usize, k: usize) -> impl Iterator<Item = usize> {
    [i.wrapping_sub(1), i + 1].into_iter().filter(move |&j| (1..=k).contains(&j))
}

fn random_positive(rng: &mut impl Rng) -> Rational {
    Rational::new(rng.gen_range(1..=20i64), rng.gen_range(1..=20i64)).expect("nonzero denominator")
}

impl YState {
    pub fn new(p: usize, q: usize, prev: Vec<Vec<Rational>>, cur: Vec<Vec<Rational>>) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::Input("ranks must be positive".into()));
        }
        for level in [&prev, &cur] {
            if level.len() != p || level.iter().any(|r| r.len() != q) {
                return Err(Error::Dimension(format!("expected a {p} x {q} level")));
            }
            if level.iter().flatten().any(|v| !v.is_positive()) {
                return Err(Error::Input("Y values must be positive".into()));
            }
        }
        Ok(YState { p, q, t: 1, prev, cur })
    }

    pub fn ones(p: usize, q: usize) -> Result<Self> {
        let one = vec![vec![Rational::from_int(1); q]; p];
        YState::new(p, q, one.clone(), one)
    }

    pub fn random(p: usize, q: usize, init: YInit, form: Denominator, rng: &mut impl Rng) -> Result<Self> {
        let mut level = || (0..p).map(|_| (0..q).map(|_| random_positive(rng)).collect()).collect::<Vec<Vec<_>>>();
        let (y0, y1) = (level(), level());
        let s = YState::new(p, q, y0, y1)?;
        if init == YInit::Full {
            return Ok(s);
        }
        // Class of (i, i') at time t: parity of i + i' + t.
        let y2 = y_step(&s, form).cur;
        let mut prev = s.prev.clone();
        let mut cur = s.cur.clone();
        for i in 0..p {
            for j in 0..q {
                if (i + j) % 2 == 1 {
                    prev[i][j] = s.cur[i][j].clone();
                } else {
                    cur[i][j] = y2[i][j].clone();
                }
            }
        }
        YState::new(p, q, prev, cur)
    }

    /// Same level pair, ignoring the time stamp.
    pub fn same_levels(&self, other: &YState) -> bool {
        self.prev == other.prev && self.cur == other.cur
    }
}

/// One step of
/// `Y_{i,i',t-1} Y_{i,i',t+1} = prod_j (1 + Y_{j,i',t})^{a_ij} / prod_j' (1 + Y_{i,j',t}^{-1})^{a'_i'j'}`
/// with `A_p` and `A_q` incidence matrices.
pub fn y_step(s: &YState, form: Denominator) -> YState {
    let one = Rational::from_int(1);
    let next = (1..=s.p)
        .map(|i| {
            (1..=s.q)
                .map(|ip| {
                    let mut v = Rational::from_int(1);
                    for j in neighbours(i, s.p) {
                        v = v * (&one + &s.cur[j - 1][ip - 1]);
                    }
                    for jp in neighbours(ip, s.q) {
                        let y = &s.cur[i - 1][jp - 1];
                        let f = match form {
                            Denominator::Inverse => &one + &y.recip().expect("positive"),
                            Denominator::Plain => &one + y,
                        };
                        v = v / f;
                    }
                    v / s.prev[i - 1][ip - 1].clone()
                })
                .collect()
        })
        .collect();
    YState { p: s.p, q: s.q, t: s.t + 1, prev: s.cur.clone(), cur: next }
}

/// Smallest `T <= max_steps` with the level pair back where it started.
pub fn find_period(s: &YState, form: Denominator, max_steps: usize) -> Option<usize> {
    let mut x = s.clone();
    for step in 1..=max_steps {
        x = y_step(&x, form);
        if x.same_levels(s) {
            return Some(step);
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct YTrial {
    pub trial: usize,
    pub period: Option<usize>,
    pub divides_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct YPeriodReport {
    pub p: usize,
    pub q: usize,
    pub init: YInit,
    pub form: Denominator,
    /// `2 (h + h')`.
    pub bound: usize,
    pub trials: Vec<YTrial>,
    pub pass: bool,
}

/// Runs `trials` random starts; trial `k` draws from a generator seeded by
/// `seed` and `k`, so reports do not depend on scheduling.
pub fn y_period(
    p: usize,
    q: usize,
    init: YInit,
    form: Denominator,
    trials: usize,
    max_steps: usize,
    seed: u64,
) -> Result<YPeriodReport> {
    let bound = 2 * (coxeter_a(p) + coxeter_a(q));
    if max_steps < bound {
        return Err(Error::Input(format!("max_steps must be at least {bound}")));
    }
    let results: Vec<Result<YTrial>> = crate::par::map_range(trials, |k| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add((k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)));
        let s = YState::random(p, q, init, form, &mut rng)?;
        let period = find_period(&s, form, max_steps);
        Ok(YTrial { trial: k, period, divides_bound: period.is_some_and(|t| bound % t == 0) })
    });
    let trials: Vec<YTrial> = results.into_iter().collect::<Result<_>>()?;
    let pass = trials.iter().all(|t| t.divides_bound);
    Ok(YPeriodReport { p, q, init, form, bound, trials, pass })
}
