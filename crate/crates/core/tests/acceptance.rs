//! Acceptance criteria 1-12, exact arithmetic, one line per criterion.

use std::process::ExitCode;

use dtlab::bipartite::{build_gamma0, cyclic_interval};
use dtlab::verify::{run_criterion, Suite, SuiteConfig};

const TITLES: [&str; 12] = [
    "graph suite on the standard graph",
    "square and slide moves",
    "special orientation on random move walks",
    "three-term Plucker relation",
    "positivity of boundary measurement minors",
    "round trip psi after chi",
    "chi after psi is DT",
    "DT squared is the shift, DT^2n is the identity",
    "star involution and its face coordinates",
    "degree matrix of DT is minus the identity",
    "DT as relabelling plus mutations (search may run out of budget)",
    "Y-system periods with parity start",
];

/// Interior sets written out directly: `[1, m-j]` together with the cyclic
/// interval `[m+i-j+1, m+i]`.
fn grid_sets_by_hand(m: usize, n: usize) -> bool {
    let g = build_gamma0(m, n).unwrap();
    let an = g.analyze().unwrap();
    (1..n - m).all(|i| {
        (1..m).all(|j| {
            let mut want: Vec<usize> = (1..=m - j).collect();
            want.extend(cyclic_interval((m + i - j + 1) as i64, (m + i) as i64, n));
            want.sort();
            an.face_by_name(&format!("f_{i}_{j}")).map(|f| f.dominating.clone()) == Some(want)
        })
    })
}

fn main() -> ExitCode {
    let cfg = SuiteConfig::new(Suite::All);
    let mut failed = false;
    let mut details = Vec::new();
    for k in 1..=12u8 {
        let r = match run_criterion(k, &cfg) {
            Ok(r) => r,
            Err(e) => {
                println!("criterion {k:>2}  FAIL  {}: {e}", TITLES[k as usize - 1]);
                failed = true;
                continue;
            }
        };
        let mut pass = r.checks.iter().all(|c| c.pass || c.info);
        if k == 1 {
            pass &= [(2, 4), (2, 5), (2, 6), (3, 6), (3, 7)].into_iter().all(|(m, n)| grid_sets_by_hand(m, n));
        }
        let verdict = if r.search_exhausted {
            "BUDGET"
        } else if pass {
            "PASS"
        } else {
            "FAIL"
        };
        println!("criterion {k:>2}  {verdict:<6} {}", TITLES[k as usize - 1]);
        failed |= !pass;
        for c in r.checks.iter().filter(|c| !c.pass) {
            let tag = if c.info { "note" } else { "fail" };
            let mut d = c.detail.clone();
            d.truncate(160);
            details.push(format!("  [{k}] {tag}: {} {}: {d}", c.label, c.size));
        }
    }
    for d in &details {
        println!("{d}");
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
