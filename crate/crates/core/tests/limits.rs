use gquot::limits::{invariant_hom_dim, limit_bound, st3_rank_bound, LimitSystem};
use gquot::linalg::F2Echelon;
use gquot::perm::Perm;
use gquot::quotients::LayeredAction;
use gquot::pquot::multiplier_report;
use gquot::tree::generator_perms;
use gquot::Error;
use fixedbitset::FixedBitSet;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A kernel element of `G_{n+1} → Gₙ` as the set of level-`n` vertices whose children it swaps.
fn swaps(p: &Perm, n: usize) -> FixedBitSet {
    let mut v = FixedBitSet::with_capacity(1 << n);
    for x in 0..1u32 << n {
        v.set(x as usize, p.apply(2 * x) == 2 * x + 1);
    }
    v
}

/// Coinvariant dimension by dense elimination over the swap coordinates.
fn coinvariants_oracle(n: usize) -> u64 {
    let act = LayeredAction::new(n, n + 1);
    let g = act.group().unwrap();
    let top = 1u32 << n;
    let leaves = |p: &Perm| {
        Perm::from_images((0..2 * top).map(|x| p.apply(x + top) - top).collect()).unwrap()
    };
    let ker: Vec<Perm> = g.stabilizer_generators(act.prefix().len()).iter().map(leaves).collect();
    let gens: Vec<Perm> = generator_perms(n + 1).to_vec();
    let mut span = F2Echelon::new(1 << n);
    for k in &ker {
        assert!(k.compose(k).is_identity());
        span.insert(swaps(k, n));
    }
    let mut moved = F2Echelon::new(1 << n);
    for k in &ker {
        for s in &gens {
            let c = s.inverse().compose(k).compose(s);
            let mut v = swaps(&c, n);
            v.symmetric_difference_with(&swaps(k, n));
            moved.insert(v);
        }
    }
    (span.rank() - moved.rank()) as u64
}

#[test]
fn inflation_by_one_level_matches_oracle() {
    for n in 3..=5 {
        assert_eq!(invariant_hom_dim(n, 1).unwrap(), coinvariants_oracle(n), "n = {n}");
    }
}

#[test]
fn frozen_grid() {
    let grid: Vec<u64> =
        [(3, 1), (3, 2), (4, 1), (4, 2)].iter().map(|&(n, k)| invariant_hom_dim(n, k).unwrap()).collect();
    assert_eq!(grid, vec![1, 2, 1, 2]);
    let bound = st3_rank_bound(6).unwrap();
    assert_eq!(bound, 9);
    assert!(grid.iter().all(|&d| d <= bound));
}

#[test]
fn five_term_bookkeeping() {
    let h2: Vec<usize> = (3..=6).map(|n| multiplier_report(n).unwrap().h2_dim).collect();
    assert!(h2.windows(2).all(|w| w[0] < w[1]));
    for (n, k) in [(3, 1), (3, 2), (4, 1), (4, 2)] {
        let d = invariant_hom_dim(n, k).unwrap() as usize;
        assert!(h2[n + k - 3] + d >= h2[n - 3]);
    }
}

fn scan(sys: &LimitSystem, m: u64) -> Result<usize, Error> {
    for (i, &d) in sys.dims.iter().enumerate() {
        if d > sys.kernel_bound * m {
            return Ok(sys.offset + i);
        }
    }
    Err(Error::Exhausted)
}

#[test]
fn random_systems_match_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..100 {
        let len = rng.gen_range(1..40);
        let mut d = rng.gen_range(0..5u64);
        let dims: Vec<u64> = (0..len)
            .map(|_| {
                d += rng.gen_range(0..4);
                d
            })
            .collect();
        let sys = LimitSystem::new(dims, rng.gen_range(0..6), rng.gen_range(0..5)).unwrap();
        let m = rng.gen_range(0..12);
        assert_eq!(limit_bound(&sys, m), scan(&sys, m));
    }
    let bound = st3_rank_bound(6).unwrap();
    let sys = LimitSystem::h2_dims(3, 200, bound);
    for m in 0..20 {
        assert_eq!(limit_bound(&sys, m), scan(&sys, m));
    }
}

proptest! {
    #[test]
    fn bound_is_least(dims in prop::collection::vec(0u64..5, 1..30), n in 0u64..4, m in 0u64..6) {
        let mut acc = 0;
        let dims: Vec<u64> = dims.into_iter().map(|x| { acc += x; acc }).collect();
        let sys = LimitSystem::new(dims, n, 3).unwrap();
        match limit_bound(&sys, m) {
            Ok(i) => {
                prop_assert!(sys.dims[i - 3] > n * m);
                prop_assert!(i == 3 || sys.dims[i - 4] <= n * m);
            }
            Err(e) => prop_assert!(e == Error::Exhausted && sys.dims.iter().all(|&d| d <= n * m)),
        }
    }
}
