use gquot::families::{relator_family, FamilyKind};
use gquot::linalg::{snf, IntMatrix};
use gquot::nilq4::{
    fox_vector, parse_commutator, qn_build_with, qn_from_relators, qn_report, Collector, QnGroup, DIM,
};
use gquot::word::{Alphabet, FreeWord};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;
use std::sync::OnceLock;

fn gen(x: usize, inv: bool) -> FreeWord {
    let g = FreeWord::generator(Alphabet::Abcd, x);
    if inv {
        g.inverse()
    } else {
        g
    }
}

fn w(s: &str) -> FreeWord {
    FreeWord::parse(Alphabet::Abcd, s).unwrap()
}

fn com(s: &str) -> FreeWord {
    parse_commutator(s).unwrap()
}

fn collector() -> &'static Collector {
    static C: OnceLock<Collector> = OnceLock::new();
    C.get_or_init(|| Collector::new().unwrap())
}

fn q(n: usize) -> &'static QnGroup {
    static Q: OnceLock<Vec<QnGroup>> = OnceLock::new();
    &Q.get_or_init(|| (3..=5).map(|n| qn_build_with(Collector::new().unwrap(), n).unwrap()).collect())[n - 3]
}

fn hopf(n: usize, label: &str) -> FreeWord {
    relator_family(FamilyKind::Hopf, n).unwrap().get(label).unwrap().clone()
}

/// Solver for coordinates from Fox vectors, built from the basis images alone.
struct FoxSolver {
    cols: Vec<Vec<i128>>,
    rows: Vec<usize>,
    inv: Vec<Vec<BigRational>>,
}

impl FoxSolver {
    fn new() -> Self {
        let cols: Vec<Vec<i128>> =
            collector().basis().derived().iter().map(|e| fox_vector(&e.word()).unwrap()).collect();
        let len = cols[0].len();
        let rat = |x: i128| BigRational::from_integer(x.into());
        // Greedy independent rows.
        let mut rows = Vec::new();
        let mut echelon: Vec<Vec<BigRational>> = Vec::new();
        for r in 0..len {
            let mut v: Vec<BigRational> = cols.iter().map(|c| rat(c[r])).collect();
            for e in &echelon {
                let p = e.iter().position(|x| !x.is_zero()).unwrap();
                if !v[p].is_zero() {
                    let f = &v[p] / &e[p];
                    for k in 0..DIM {
                        let t = &e[k] * &f;
                        v[k] -= t;
                    }
                }
            }
            if v.iter().any(|x| !x.is_zero()) {
                echelon.push(v);
                rows.push(r);
            }
        }
        assert_eq!(rows.len(), DIM, "Fox images of the basis are independent");
        let n = DIM;
        let mut a: Vec<Vec<BigRational>> = rows
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                let mut row: Vec<BigRational> = cols.iter().map(|c| rat(c[r])).collect();
                row.extend((0..n).map(|k| if k == i { BigRational::one() } else { BigRational::zero() }));
                row
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&i| !a[i][c].is_zero()).unwrap();
            a.swap(c, p);
            let inv = BigRational::one() / a[c][c].clone();
            for k in 0..2 * n {
                let t = &a[c][k] * &inv;
                a[c][k] = t;
            }
            for i in 0..n {
                if i != c && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for k in 0..2 * n {
                        let t = &a[c][k] * &f;
                        a[i][k] -= t;
                    }
                }
            }
        }
        FoxSolver { cols, rows, inv: a.into_iter().map(|r| r[n..].to_vec()).collect() }
    }

    fn solve(&self, t: &[i128]) -> Vec<i64> {
        let rhs: Vec<BigRational> = self.rows.iter().map(|&r| BigRational::from_integer(t[r].into())).collect();
        let y: Vec<BigRational> =
            self.inv.iter().map(|row| row.iter().zip(&rhs).map(|(a, b)| a * b).sum()).collect();
        for (r, &target) in t.iter().enumerate() {
            let s: BigRational =
                y.iter().zip(&self.cols).map(|(c, col)| c * BigRational::from_integer(col[r].into())).sum();
            assert_eq!(s, BigRational::from_integer(target.into()));
        }
        y.iter().map(|c| c.to_integer().to_i64().unwrap()).collect()
    }
}

/// Conjugates by all words of length ≤ 2 span the module generated by `[r, x]`.
fn fox_oracle_invariants(relators: &[FreeWord]) -> Vec<BigInt> {
    let solver = FoxSolver::new();
    let mut conj = vec![FreeWord::empty(Alphabet::Abcd)];
    for x in 0..4 {
        for i in [false, true] {
            for y in 0..4 {
                for j in [false, true] {
                    conj.push(gen(x, i).mul(&gen(y, j)));
                }
            }
            conj.push(gen(x, i));
        }
    }
    let mut rows = Vec::new();
    for r in relators {
        for x in 0..4 {
            let base = FreeWord::commutator(r, &gen(x, false));
            for g in &conj {
                rows.push(solver.solve(&fox_vector(&base.conjugate(g)).unwrap()));
            }
        }
    }
    let mut seen = std::collections::HashSet::new();
    rows.retain(|r| seen.insert(r.clone()));
    let d = snf(&IntMatrix::from_rows(&rows)).diagonal();
    assert_eq!(d.iter().filter(|x| !x.is_zero()).count(), DIM);
    d.into_iter().filter(|x| !x.is_zero() && !x.is_one()).collect()
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[test]
fn structure_matches_fox_oracle() {
    for n in 3..=4 {
        let fam = relator_family(FamilyKind::Hopf, n).unwrap();
        assert_eq!(fox_oracle_invariants(&fam.plain_words()), q(n).invariant_factors(), "n = {n}");
    }
}

#[test]
fn frozen_structure() {
    assert_eq!(q(3).invariant_factors(), big(&[2, 2, 4, 4]));
    assert_eq!(q(4).invariant_factors(), big(&[2, 2, 4, 8]));
    assert_eq!(q(5).invariant_factors(), big(&[2, 2, 4, 8]));
    for n in 3..=5 {
        assert!(q(n).saturation_holds());
    }
}

#[test]
fn elementary_case() {
    // G = C₂⁴: Q is generated by the [x, y] with [x, y]² = [x², y] modulo γ₃.
    let mut rels: Vec<FreeWord> = (0..4).map(|x| gen(x, false).pow(2)).collect();
    for x in 0..4 {
        for y in x + 1..4 {
            rels.push(FreeWord::commutator(&gen(x, false), &gen(y, false)));
        }
    }
    let g = qn_from_relators(Collector::new().unwrap(), 0, &rels).unwrap();
    assert_eq!(g.invariant_factors(), big(&[2; 6]));
    assert_eq!(fox_oracle_invariants(&rels), big(&[2; 6]));
}

#[test]
fn listed_images_hold() {
    for n in 3..=5 {
        let r = qn_report(q(n)).unwrap();
        assert!(r.images_match(), "n = {n}: {:?}", r.images);
        assert!(r.saturation);
    }
}

#[test]
fn frozen_orders_and_ranks() {
    let orders = |n: usize| -> Vec<u32> {
        qn_report(q(n)).unwrap().orders.iter().map(|(_, _, got)| got.to_u32().unwrap()).collect()
    };
    assert_eq!(orders(3), vec![4, 4, 4, 2, 2, 2, 2, 2, 2, 2]);
    assert_eq!(orders(4), vec![8, 8, 4, 2, 4, 2, 4, 2, 2, 2]);
    assert_eq!(orders(5), vec![8, 8, 4, 2, 4, 2, 4, 2, 2, 2]);
    assert_eq!(qn_report(q(3)).unwrap().joint_rank, 3);
    assert_eq!(qn_report(q(4)).unwrap().joint_rank, 3);
    // T₃ ↦ [a,b,c]⁻² and [a,b,c] has order 2 in Q₃.
    assert!(q(3).is_trivial(&hopf(3, "T_3")).unwrap());
    assert!(!qn_report(q(3)).unwrap().order_mismatches().is_empty());
}

#[test]
fn rank_examples() {
    let l = hopf(3, "L");
    assert_eq!(q(3).rank_of(&[l.clone(), l]).unwrap(), 1);
    let ls: Vec<FreeWord> = ["L", "U_0", "W_3"].iter().map(|s| hopf(3, s)).collect();
    assert_eq!(q(3).rank_of(&ls).unwrap(), 3);
}

#[test]
fn capital_squares_vanish() {
    for n in 3..=5 {
        let fam = relator_family(FamilyKind::Hopf, n).unwrap();
        for lw in fam.words.iter().filter(|lw| !lw.label.starts_with('B')) {
            assert!(q(n).is_trivial(&lw.word.pow(2)).unwrap(), "{}^2 at n = {n}", lw.label);
        }
    }
}

#[test]
fn relator_commutators_vanish() {
    let fam = relator_family(FamilyKind::Hopf, 4).unwrap();
    let ws = fam.plain_words();
    for x in &ws {
        for y in &ws {
            assert!(q(4).is_trivial(&FreeWord::commutator(x, y)).unwrap());
        }
    }
}

#[test]
fn identity_five() {
    for n in 3..=5 {
        for x in ["b", "c", "d"] {
            let lhs = com(&format!("[{x},a,a]"));
            let rhs = com(&format!("[a,{x}]")).pow(2);
            assert!(q(n).equal(&lhs, &rhs).unwrap());
        }
        for (x, y) in [("b", "c"), ("c", "d"), ("d", "b"), ("c", "b")] {
            assert!(q(n).equal(&com(&format!("[{x},{y},{y}]")), &com(&format!("[{y},{x}]")).pow(2)).unwrap());
        }
    }
}

#[test]
fn u1_chain() {
    for n in 4..=5 {
        let u1 = hopf(n, "U_1");
        assert!(q(n).equal(&u1, &com("[a,c]").pow(4)).unwrap());
        assert!(q(n).equal(&u1, &com("[a,c,c,c]")).unwrap());
    }
}

#[test]
fn collect_ad4() {
    let c = collector();
    let e = c.collect(&w("(ad)^4")).unwrap();
    assert_eq!(e.abelian, [4, 0, 0, 4]);
    let tail = c.word_of(&e.coords);
    let direct = w("d^-4a^-4").concat(&w("(ad)^4")).free_reduce();
    assert_eq!(fox_vector(&tail).unwrap(), fox_vector(&direct).unwrap());
    assert!(q(3).equal(&direct, &com("[a,d]").pow(2)).unwrap());
}

#[test]
fn product_identities() {
    let c = collector();
    let words = ["ab", "cA", "dbc", "a", "B"];
    for x in words {
        for y in words {
            for z in words {
                let (x, y, z) = (w(x), w(y), w(z));
                let l = FreeWord::commutator(&x, &y.concat(&z));
                let r = FreeWord::commutator(&x, &z)
                    .concat(&FreeWord::commutator(&x, &y))
                    .concat(&FreeWord::commutator(&FreeWord::commutator(&x, &y), &z));
                assert_eq!(c.collect(&l).unwrap(), c.collect(&r).unwrap());
                let l = FreeWord::commutator(&x.concat(&y), &z);
                let r = FreeWord::commutator(&x, &z)
                    .concat(&FreeWord::commutator(&FreeWord::commutator(&x, &z), &y))
                    .concat(&FreeWord::commutator(&y, &z));
                assert_eq!(c.collect(&l).unwrap(), c.collect(&r).unwrap());
            }
        }
    }
}

#[test]
fn not_in_derived() {
    assert!(q(3).image(&w("ab")).is_err());
}

fn word_strategy() -> impl Strategy<Value = FreeWord> {
    prop::collection::vec((0usize..4, any::<bool>()), 0..24).prop_map(|v| {
        v.into_iter().fold(FreeWord::empty(Alphabet::Abcd), |acc, (x, i)| acc.concat(&gen(x, i)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn collector_matches_fox(x in word_strategy(), y in word_strategy()) {
        let g = FreeWord::commutator(&x, &y).concat(&FreeWord::commutator(&y, &x.concat(&y)));
        let c = collector();
        let v = c.coords(&g).unwrap();
        prop_assert_eq!(fox_vector(&c.word_of(&v)).unwrap(), fox_vector(&g).unwrap());
    }

    #[test]
    fn homomorphism_law(x in word_strategy(), y in word_strategy()) {
        let c = collector();
        let cx = c.collect(&x).unwrap();
        let cy = c.collect(&y).unwrap();
        let xy = c.collect(&x.concat(&y)).unwrap();
        prop_assert_eq!(&c.multiply(&cx, &cy).unwrap(), &xy);
        let back = c.multiply(&c.multiply(&xy, &c.invert(&cy).unwrap()).unwrap(), &c.invert(&cx).unwrap()).unwrap();
        prop_assert!(back.is_identity());
    }
}
