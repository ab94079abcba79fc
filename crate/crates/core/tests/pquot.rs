use gquot::families::{relator_family, FamilyKind};
use gquot::perm::{Perm, PermGroup};
use gquot::pquot::{cocycle_h2_dim, multiplier_report, p_cover, pquotient, relations_hold_in, relator_images};
use gquot::presentation::Presentation;
use gquot::quotients::expected_log2_order;
use gquot::tree::generator_perms;
use gquot::word::FreeWord;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pres(text: &str) -> Presentation {
    Presentation::parse(text).unwrap()
}

fn family(kind: FamilyKind, n: usize) -> Presentation {
    Presentation::from_family(&relator_family(kind, n).unwrap())
}

fn mstar(p: &Presentation) -> usize {
    let pc = pquotient(p, 20).unwrap();
    p_cover(&pc, p).unwrap().mstar
}

/// Multiplication table of the group generated by `gens`, identity first.
fn perm_table(gens: &[Perm]) -> Vec<Vec<usize>> {
    let id = Perm::identity(gens[0].degree());
    let mut els = vec![id];
    let mut i = 0;
    while i < els.len() {
        for g in gens {
            let p = els[i].compose(g);
            if !els.contains(&p) {
                els.push(p);
            }
        }
        i += 1;
    }
    els.iter().map(|x| els.iter().map(|y| els.iter().position(|z| *z == x.compose(y)).unwrap()).collect()).collect()
}

fn cyc(n: u32, k: u32) -> Perm {
    Perm::from_images((0..n).map(|i| if i < k { (i + 1) % k } else { i }).collect()).unwrap()
}

/// Left multiplication by a unit quaternion on `±1, ±i, ±j, ±k` (index `unit + 4·sign`).
fn quaternion_left(u: usize) -> Perm {
    // unit products: (sign, unit) of e_a · e_b for a, b ∈ {1, i, j, k}
    let prod = |a: usize, b: usize| -> (usize, usize) {
        match (a, b) {
            (0, b) => (0, b),
            (a, 0) => (0, a),
            (a, b) if a == b => (1, 0),
            (1, 2) => (0, 3),
            (2, 1) => (1, 3),
            (2, 3) => (0, 1),
            (3, 2) => (1, 1),
            (3, 1) => (0, 2),
            (1, 3) => (1, 2),
            _ => unreachable!(),
        }
    };
    Perm::from_images(
        (0..8)
            .map(|x| {
                let (s, b) = (x / 4, x % 4);
                let (s2, c) = prod(u, b);
                (c + 4 * ((s + s2) % 2)) as u32
            })
            .collect(),
    )
    .unwrap()
}

fn perm(v: &[u32]) -> Perm {
    Perm::from_images(v.to_vec()).unwrap()
}

/// Groups of order ≤ 8 as (presentation, permutation generators).
fn small_groups() -> Vec<(&'static str, Presentation, Vec<Perm>, usize)> {
    // Disjoint cycles on 8 points.
    let c2a = perm(&[1, 0, 2, 3, 4, 5, 6, 7]);
    let c2b = perm(&[0, 1, 3, 2, 4, 5, 6, 7]);
    let c2c = perm(&[0, 1, 2, 3, 5, 4, 6, 7]);
    let c4b = perm(&[0, 1, 3, 4, 5, 2, 6, 7]);
    let (qi, qj) = (quaternion_left(1), quaternion_left(2));
    vec![
        ("C2", pres("gens: x\nx^2\n"), vec![cyc(2, 2)], 1),
        ("C4", pres("gens: x\nx^4\n"), vec![cyc(4, 4)], 1),
        ("C2xC2", pres("gens: x y\nx^2\ny^2\nXYxy\n"), vec![c2a.clone(), c2b.clone()], 3),
        ("C8", pres("gens: x\nx^8\n"), vec![cyc(8, 8)], 1),
        ("C4xC2", pres("gens: x y\nx^4\ny^2\nXYxy\n"), vec![c4b, c2a.clone()], 3),
        (
            "C2^3",
            pres("gens: x y z\nx^2\ny^2\nz^2\nXYxy\nXZxz\nYZyz\n"),
            vec![c2a, c2b, c2c],
            6,
        ),
        ("D8", pres("gens: x y\nx^2\ny^2\n(xy)^4\n"), vec![perm(&[1, 0, 3, 2]), perm(&[0, 3, 2, 1])], 3),
        ("Q8", pres("gens: x y\nx^4\nx^2Y^2\nYxyx\n"), vec![qi, qj], 2),
    ]
}

#[test]
fn small_group_multiplicators() {
    for (name, p, gens, expected) in small_groups() {
        let table = perm_table(&gens);
        let pc = pquotient(&p, 10).unwrap();
        assert_eq!(1usize << pc.log2_order(), table.len(), "{name} order");
        let cover = p_cover(&pc, &p).unwrap();
        assert!(cover.cover.is_consistent(), "{name}");
        assert_eq!(cocycle_h2_dim(&table), expected, "{name} cocycles");
        assert_eq!(cocycle_h2_dim(&pc.multiplication_table().unwrap()), expected, "{name} pc table");
        assert_eq!(cover.mstar, expected, "{name} cover");
    }
}

#[test]
fn orders_match_permutation_groups() {
    for n in 3..=5 {
        for kind in [FamilyKind::Thm4, FamilyKind::Thm1] {
            let p = family(kind, n);
            let pc = pquotient(&p, 64).unwrap();
            assert_eq!(pc.log2_order() as u64, expected_log2_order(n), "{kind} n = {n}");
            assert!(pc.is_consistent());
            let gens: Vec<Perm> = generator_perms(n)[..p.rank()].to_vec();
            assert!(relations_hold_in(&pc, &gens), "{kind} n = {n}");
            let g = PermGroup::new(n_degree(n), gens).unwrap();
            assert_eq!(g.log2_order(), Some(pc.log2_order() as u64));
        }
    }
}

fn n_degree(n: usize) -> usize {
    1 << n
}

#[test]
fn multiplier_reports() {
    for n in 3..=5 {
        let r = multiplier_report(n).unwrap();
        assert_eq!(r.h2_dim, 2 * n + 1, "n = {n}");
        assert_eq!(r.schur_mod2_rank, 2 * n - 2);
        assert_eq!(r.def_lower, 2 * n - 2);
        assert_eq!(r.def_upper, 2 * n - 2);
        assert!(r.relators_independent);
        assert!(r.matches_formulas());
    }
}

#[test]
fn four_generator_bookkeeping() {
    // The redundant generator d = bc contributes one extra multiplicator dimension.
    for n in 3..=4 {
        let p = family(FamilyKind::Thm1, n);
        let pc = pquotient(&p, 64).unwrap();
        let cover = p_cover(&pc, &p).unwrap();
        assert_eq!(cover.mstar, 2 * n + 2, "n = {n}");
        assert_eq!(relator_images(&p, &cover).unwrap().rank(), 2 * n + 2);
    }
}

#[test]
fn duplicate_relator_keeps_rank() {
    let p = family(FamilyKind::Thm4, 3);
    let q = p.with_relator(p.relators()[5].clone()).unwrap();
    let pc = pquotient(&q, 20).unwrap();
    let cover = p_cover(&pc, &q).unwrap();
    let m = relator_images(&q, &cover).unwrap();
    assert_eq!(m.nrows(), 8);
    assert_eq!(m.rank(), 7);
}

#[test]
fn mstar_invariant_under_reordering() {
    let p = family(FamilyKind::Thm4, 4);
    let base = mstar(&p);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..3 {
        let mut rels = p.relators().to_vec();
        rels.shuffle(&mut rng);
        let q = Presentation::new(p.names().to_vec(), rels).unwrap();
        assert_eq!(mstar(&q), base);
    }
    // Swap the roles of b and c.
    let swap = |w: &FreeWord| {
        let text = p.format_word(w);
        text.chars().map(|ch| match ch { 'b' => 'c', 'c' => 'b', 'B' => 'C', 'C' => 'B', o => o }).collect::<String>()
    };
    let text: String = std::iter::once("gens: a b c\n".to_string())
        .chain(p.relators().iter().map(|w| swap(w) + "\n"))
        .collect();
    assert_eq!(mstar(&pres(&text)), base);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn collectors_agree(x in prop::collection::vec(0u8..2, 12), y in prop::collection::vec(0u8..2, 12)) {
        let p = family(FamilyKind::Thm4, 4);
        let pc = pquotient(&p, 64).unwrap();
        let (a, b) = (pc.from_exponents(&x), pc.from_exponents(&y));
        prop_assert_eq!(pc.mul(&a, &b), pc.mul_recursive(&a, &b));
        let ab = pc.mul(&a, &b);
        prop_assert!(pc.mul(&ab, &pc.inverse(&ab)).is_identity());
    }
}
