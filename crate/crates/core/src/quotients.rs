//! The level quotients `Gₙ` as permutation groups, their kernels, and the
//! branch subgroup `K = ⟨(ab)²⟩ᴳ`.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{eval_word, normal_closure, Perm, PermGroup};
use crate::tree::{eval_word_perm, generator_perms};
use crate::word::{Alphabet, FreeWord};

/// Default cap on the level of [`quotient_group`] (degree 4096).
pub const MAX_QUOTIENT_LEVEL: usize = 12;

/// `|Gₙ| = 2^(5·2^(n−3)+2)` for `n ≥ 3`; `2` and `8` for `n = 1, 2`.
pub fn expected_log2_order(n: usize) -> u64 {
    match n {
        0 => 0,
        1 => 1,
        2 => 3,
        _ => 5 * (1u64 << (n - 3)) + 2,
    }
}

/// `log₂ |Ker(Gₙ → Gₙ₋₁)| = 5·2^(n−4)` for `n ≥ 4`.
pub fn expected_log2_kernel(n: usize) -> u64 {
    5 * (1u64 << (n - 4))
}

/// `Gₙ` acting on the `2^n` leaves.
pub fn quotient_group(n: usize) -> Result<PermGroup> {
    if n == 0 || n > MAX_QUOTIENT_LEVEL {
        return Err(Error::Resource(format!("level {n} outside 1..={MAX_QUOTIENT_LEVEL}")));
    }
    PermGroup::new(1 << n, generator_perms(n).to_vec())
}

/// Action of `Gₙ` on the vertices of level `m` followed by the leaves of level `n`.
///
/// Points `0..2^m` are the level-`m` vertices and `2^m..2^m+2^n` the leaves,
/// so a base prefix of `0..2^m` yields the level-`m` stabilizer.
#[derive(Clone, Debug)]
pub struct LayeredAction {
    pub stab_level: usize,
    pub leaf_level: usize,
    pub gens: [Perm; 4],
}

impl LayeredAction {
    pub fn new(stab_level: usize, leaf_level: usize) -> Self {
        assert!(stab_level <= leaf_level);
        let leaves = generator_perms(leaf_level);
        let gens = leaves.clone().map(|p| Self::extend(&p, stab_level, leaf_level));
        LayeredAction { stab_level, leaf_level, gens }
    }

    pub fn degree(&self) -> usize {
        (1 << self.stab_level) + (1 << self.leaf_level)
    }

    fn extend(leaf_perm: &Perm, m: usize, n: usize) -> Perm {
        let top = 1u32 << m;
        let shift = n - m;
        let mut images: Vec<u32> = (0..top).map(|v| leaf_perm.apply(v << shift) >> shift).collect();
        images.extend(leaf_perm.images().iter().map(|&x| x + top));
        Perm::from_images_unchecked(images)
    }

    pub fn word(&self, w: &FreeWord) -> Perm {
        eval_word_perm(w, &self.gens)
    }

    pub fn prefix(&self) -> Vec<u32> {
        (0..1u32 << self.stab_level).collect()
    }

    /// The whole group with the level-`m` stabilizer at chain depth `2^m`.
    pub fn group(&self) -> Result<PermGroup> {
        PermGroup::with_base_prefix(self.degree(), self.gens.to_vec(), &self.prefix())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KernelData {
    pub order: BigUint,
    pub log2_order: u64,
    pub elementary_abelian: bool,
}

/// True when the generators pairwise commute and square to the identity.
pub fn is_elementary_abelian(gens: &[Perm]) -> bool {
    gens.iter().all(|g| g.compose(g).is_identity())
        && gens.iter().enumerate().all(|(i, g)| gens[i + 1..].iter().all(|h| g.compose(h) == h.compose(g)))
}

fn log2_exact(x: &BigUint) -> u64 {
    let bits = x.bits();
    assert!(*x == BigUint::one() << (bits - 1), "order is not a power of two");
    bits - 1
}

/// The kernel of `Gₙ → Gₙ₋₁`, i.e. the image of the level-`(n−1)` stabilizer.
pub fn kernel_data(n: usize) -> Result<KernelData> {
    if !(4..=MAX_QUOTIENT_LEVEL).contains(&n) {
        return Err(Error::LevelOutOfRange { level: n, range: format!("4..={MAX_QUOTIENT_LEVEL}") });
    }
    let act = LayeredAction::new(n - 1, n);
    let g = act.group()?;
    let depth = act.prefix().len();
    let order = g.stabilizer_order(depth);
    let gens = g.stabilizer_generators(depth);
    Ok(KernelData { log2_order: log2_exact(&order), order, elementary_abelian: is_elementary_abelian(&gens) })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BranchSubgroupData {
    pub k_index: BigUint,
    pub st3_in_k: bool,
}

/// Index of `K = ⟨(ab)²⟩ᴳ` in `Gₙ` and whether the level-3 stabilizer lies in `K`.
pub fn branch_subgroup_checks(n: usize) -> Result<BranchSubgroupData> {
    if !(3..=MAX_QUOTIENT_LEVEL).contains(&n) {
        return Err(Error::LevelOutOfRange { level: n, range: format!("3..={MAX_QUOTIENT_LEVEL}") });
    }
    let act = LayeredAction::new(3, n);
    let g = act.group()?;
    let abab = act.word(&FreeWord::parse(Alphabet::Abcd, "(ab)^2").unwrap());
    let k = normal_closure(act.degree(), &act.gens, &[abab], &[])?;
    let k_index = g.order() / k.order();
    let st3 = g.stabilizer_generators(act.prefix().len());
    let mut st3_in_k = true;
    for s in &st3 {
        st3_in_k &= k.contains(s)?;
    }
    Ok(BranchSubgroupData { k_index, st3_in_k })
}

/// Dimension over F₂ of `H / H²[H, H]` for `H` generated by `gens`.
pub fn frattini_quotient_dim(degree: usize, gens: &[Perm]) -> Result<u64> {
    let h = PermGroup::new(degree, gens.to_vec())?;
    let mut phi_gens = Vec::new();
    for (i, x) in gens.iter().enumerate() {
        phi_gens.push(x.compose(x));
        for y in &gens[i + 1..] {
            phi_gens.push(Perm::commutator(x, y));
        }
    }
    let phi = normal_closure(degree, gens, &phi_gens, &[])?;
    Ok(log2_exact(&h.order()) - log2_exact(&phi.order()))
}

/// Membership of `p` in `g`.
pub fn membership(g: &PermGroup, p: &Perm) -> Result<bool> {
    g.contains(p)
}

/// Generator names of the wreath presentation of the level-3 quotient.
pub const WREATH_NAMES: [char; 3] = ['x', 'y', 'z'];

/// `x², y², z², [x,xʸ], [y,yᶻ], [x,xᶻ], [x,yᶻ], [y,xᶻ]`.
pub fn wreath_relators() -> Vec<FreeWord> {
    let g = |c: &str| FreeWord::parse_with(&WREATH_NAMES, c).unwrap();
    let (x, y, z) = (g("x"), g("y"), g("z"));
    vec![
        x.pow(2),
        y.pow(2),
        z.pow(2),
        FreeWord::commutator(&x, &x.conjugate(&y)),
        FreeWord::commutator(&y, &y.conjugate(&z)),
        FreeWord::commutator(&x, &x.conjugate(&z)),
        FreeWord::commutator(&x, &y.conjugate(&z)),
        FreeWord::commutator(&y, &x.conjugate(&z)),
    ]
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WreathCheck {
    pub relators_trivial: Vec<bool>,
    pub order: BigUint,
}

impl WreathCheck {
    pub fn holds(&self) -> bool {
        self.relators_trivial.iter().all(|&t| t) && self.order == BigUint::from(128u32)
    }
}

/// Evaluates the wreath relators at `x = ada, y = c, z = a` in `G₃` and the order generated.
pub fn wreath_check() -> Result<WreathCheck> {
    let gens = [
        crate::tree::level_perm(&FreeWord::parse(Alphabet::Abcd, "ada").unwrap(), 3)?,
        crate::tree::level_perm(&FreeWord::parse(Alphabet::Abcd, "c").unwrap(), 3)?,
        crate::tree::level_perm(&FreeWord::parse(Alphabet::Abcd, "a").unwrap(), 3)?,
    ];
    let relators_trivial = wreath_relators().iter().map(|r| eval_word(r, &gens).is_identity()).collect();
    let order = PermGroup::new(8, gens.to_vec())?.order();
    Ok(WreathCheck { relators_trivial, order })
}
