//! End-to-end checks through the public API.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dtlab::bipartite::build_gamma0;
use dtlab::configuration::{psi_coords, Configuration, Flavor, Genericity};
use dtlab::quiver::{grid_seed, mutate_x};
use dtlab::Rational;

fn q(a: i64) -> Rational {
    Rational::from_int(a)
}

#[test]
fn plucker_coordinates_of_a_plane_configuration() {
    let c = Configuration::from_i64(2, Flavor::Projective, &[&[1, 0], &[0, 1], &[1, 1], &[1, 2], &[1, 3]]).unwrap();
    // 2 x 2 minors written out: det(v_a, v_b) = x_a y_b - y_a x_b.
    let cols = [(1, 0), (0, 1), (1, 1), (1, 2), (1, 3)];
    for a in 1..=5 {
        for b in a + 1..=5 {
            let ((xa, ya), (xb, yb)) = (cols[a - 1], cols[b - 1]);
            assert_eq!(c.plucker(&[a, b]).unwrap(), q(xa * yb - ya * xb), "[{a},{b}]");
        }
    }
}

#[test]
fn face_coordinates_on_the_smallest_standard_graph() {
    // (2,4) has a single interior face; its coordinate is the cross ratio
    // D14 D23 / (D12 D34) of the four lines.
    let c = Configuration::from_i64(2, Flavor::Projective, &[&[1, 0], &[0, 1], &[1, 1], &[1, 3]]).unwrap();
    let g = build_gamma0(2, 4).unwrap();
    let x = psi_coords(&c, &g).unwrap();
    let x11 = x.get("f_1_1").unwrap().clone();
    let d = |a: usize, b: usize| c.plucker(&[a, b]).unwrap();
    let cross = d(1, 4) * d(2, 3) / (d(1, 2) * d(3, 4));
    assert_eq!(x11, cross);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn dt_has_period_dividing_2n(seed in any::<u64>(), size in 0usize..3) {
        let (m, n) = [(2, 5), (2, 6), (3, 6)][size];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = Configuration::random(m, n, Genericity::Total, &mut rng);
        let mut x = c.clone();
        for _ in 0..2 * n {
            x = x.dt().unwrap().normalized();
        }
        prop_assert!(x.equal_projective(&c));
    }

    #[test]
    fn x_mutation_is_an_involution(seed in any::<u64>()) {
        let s = grid_seed(2, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = dtlab::quiver::ClusterPoint::new(
            s.ids().map(|id| (id.to_string(), Rational::new(rand::Rng::gen_range(&mut rng, 1..50i64), 7).unwrap())).collect(),
        );
        for k in s.ids() {
            let once = mutate_x(&s, &p, k).unwrap();
            let back = mutate_x(&s.mutate(k).unwrap(), &once, k).unwrap();
            prop_assert_eq!(&back, &p);
        }
    }
}
