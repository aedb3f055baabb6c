//! Randomized cross-checks and degenerate-configuration cases. The larger
//! property suites live in `common` and run from the acceptance harness.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use num_traits::Zero;
use viewing_graphs::canon::{canonical_form, isomorphic};
use viewing_graphs::epipolar::{
    fundamental, joint_stabilizer_dim, random_camera, random_generic_cameras, random_rank_two,
    stabilizer_fixes, triple_residuals, verify_move_ii, verify_move_iii, Camera,
};
use viewing_graphs::Error;

mod common;

use common::{brute_key, pair_index, permutations, random_connected};

fn random_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

#[test]
fn canonical_form_on_random_seven_vertex_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let perms = permutations(7);
    let idx = pair_index(7);
    for _ in 0..1000 {
        let e = rng.gen_range(6..=14);
        let g = random_connected(&mut rng, 7, e);
        let h = if rng.gen_bool(0.5) {
            g.relabel(&random_permutation(&mut rng, 7))
        } else {
            random_connected(&mut rng, 7, e)
        };
        let expected = g.edge_count() == h.edge_count()
            && brute_key(g.edges(), &perms, &idx) == brute_key(h.edges(), &perms, &idx);
        assert_eq!(canonical_form(&g) == canonical_form(&h), expected);
        assert_eq!(isomorphic(&g, &h), expected);
    }
}

// ---- camera geometry -------------------------------------------------

#[test]
fn random_rank_two_matrices_are_incompatible() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut nonzero = 0;
    for _ in 0..100 {
        let cams = random_generic_cameras(&mut rng, 3, 10);
        let f23 = fundamental(&cams[1], &cams[2]).unwrap();
        let f31 = fundamental(&cams[2], &cams[0]).unwrap();
        let fake = random_rank_two(&mut rng, 10);
        if let Ok(r) = triple_residuals(&fake, &f23, &f31) {
            if r.iter().any(|x| !x.is_zero()) {
                nonzero += 1;
            }
        }
    }
    assert!(nonzero >= 95, "{nonzero}");
}

#[test]
fn aligned_pinholes_are_flagged() {
    // pinholes (0,0,0,1), (1,0,0,1) and (2,0,0,1) on one line
    let c1 = Camera::new([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]).unwrap();
    let c2 = Camera::new([[1, 0, 0, -1], [0, 1, 0, 0], [0, 0, 1, 0]]).unwrap();
    let c3 = Camera::new([[1, 0, 0, -2], [0, 1, 0, 0], [0, 1, 1, 0]]).unwrap();
    let f12 = fundamental(&c1, &c2).unwrap();
    let f23 = fundamental(&c2, &c3).unwrap();
    let f31 = fundamental(&c3, &c1).unwrap();
    assert!(matches!(
        triple_residuals(&f12, &f23, &f31),
        Err(Error::Degenerate(_))
    ));
}

#[test]
fn move_ii_flags_aligned_pinholes() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let c1 = Camera::new([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]).unwrap();
    let c2 = Camera::new([[1, 0, 0, -1], [0, 1, 0, 0], [0, 0, 1, 0]]).unwrap();
    let c4 = Camera::new([[1, 0, 0, -2], [0, 1, 0, 0], [0, 1, 1, 0]]).unwrap();
    let c3 = random_camera(&mut rng, 10);
    assert!(matches!(
        verify_move_ii(&[c1, c2, c3, c4]),
        Err(Error::Degenerate(_))
    ));
}

#[test]
fn move_iii_flags_degenerate_planes() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    // pinholes 1 and 2 on the x axis, pinhole 3 on the same line
    let c1 = Camera::new([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]).unwrap();
    let c2 = Camera::new([[1, 0, 0, -1], [0, 1, 0, 0], [0, 0, 1, 0]]).unwrap();
    let on_line = Camera::new([[1, 0, 0, -2], [0, 1, 0, 0], [0, 1, 1, 0]]).unwrap();
    let cams = [
        c1.clone(),
        c2.clone(),
        on_line,
        random_camera(&mut rng, 10),
        random_camera(&mut rng, 10),
    ];
    assert!(matches!(verify_move_iii(&cams), Err(Error::Degenerate(_))));

    // pinholes 3 and 4 both in the plane y = 0 through pinholes 1 and 2
    let p3 = Camera::new([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, -1]]).unwrap();
    let p4 = Camera::new([[1, 0, 0, -3], [0, 1, 0, 0], [0, 0, 1, -5]]).unwrap();
    let cams = [c1, c2, p3, p4, random_camera(&mut rng, 10)];
    assert!(matches!(verify_move_iii(&cams), Err(Error::Degenerate(_))));
}

#[test]
fn stabilizer_and_joint_stabilizer() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..100 {
        let p = random_camera(&mut rng, 10);
        let alpha = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let v: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-9..=9));
        assert!(stabilizer_fixes(&p, alpha, v));

        let cams = random_generic_cameras(&mut rng, 2, 10);
        assert_eq!(joint_stabilizer_dim(&cams[0], &cams[1]), 1);
    }
}
