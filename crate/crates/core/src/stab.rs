//! Words in the lift of the first-level stabilizer, the splitting map into
//! pairs, and the pair identities of the recursive relators.
//!
//! The stabilizer lift is the free group on `b, c, d, bᵃ, cᵃ, dᵃ` (ids
//! `0..6` of [`Alphabet::Stab6`]). Rewriting uses the transversal `{1, a}`
//! with `a` read as an involution, so `xᵃ = a x a`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{lysenok_image, seeds};
use crate::tree::{is_trivial_g, level_perm};
use crate::word::{gen_of, is_inverse, letter, Alphabet, FreeWord, Letter};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StabWord(FreeWord);

impl StabWord {
    pub fn new(w: FreeWord) -> Result<Self> {
        if w.alphabet() != Alphabet::Stab6 {
            return Err(Error::AlphabetMismatch { expected: Alphabet::Stab6.name(), found: w.alphabet().name() });
        }
        Ok(StabWord(w))
    }

    pub fn word(&self) -> &FreeWord {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Expands `xᵃ` to `a x a`.
    pub fn forget(&self) -> FreeWord {
        let mut out = Vec::with_capacity(self.0.len() * 2);
        for &l in self.0.letters() {
            let g = gen_of(l);
            let x = letter(g % 3 + 1, is_inverse(l));
            if g < 3 {
                out.push(x);
            } else {
                out.extend([letter(0, false), x, letter(0, false)]);
            }
        }
        FreeWord::from_letters(Alphabet::Abcd, out).unwrap()
    }
}

impl fmt::Display for StabWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for &l in self.0.letters() {
            let g = gen_of(l);
            f.write_str(["b", "c", "d"][g % 3])?;
            if g >= 3 {
                f.write_str("ᵃ")?;
            }
            if is_inverse(l) {
                f.write_str("⁻¹")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for StabWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Free reduction in `C₂ * F(b,c,d)`: `a⁻¹` is read as `a` and `aa` cancels.
pub fn reduce_mod_a_squared(w: &FreeWord) -> FreeWord {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in w.letters() {
        let l = if gen_of(l) == 0 { letter(0, false) } else { l };
        if out.last() == Some(&-l) || (gen_of(l) == 0 && out.last() == Some(&l)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    FreeWord::from_letters(w.alphabet(), out).unwrap()
}

/// Schreier rewriting of a word with an even number of `a`-letters.
pub fn rewrite_st1(w: &FreeWord) -> Result<StabWord> {
    if !w.alphabet().embeds_in(Alphabet::Abcd) {
        return Err(Error::AlphabetMismatch { expected: "abcd".into(), found: w.alphabet().name() });
    }
    if w.count_gen(0) % 2 == 1 {
        return Err(Error::OddACount);
    }
    let mut state = 0;
    let mut out = Vec::with_capacity(w.len());
    for &l in w.letters() {
        let g = gen_of(l);
        if g == 0 {
            state ^= 1;
        } else {
            out.push(letter(g - 1 + 3 * state, is_inverse(l)));
        }
    }
    Ok(StabWord(FreeWord::from_letters(Alphabet::Stab6, out)?.free_reduce()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairWord {
    pub left: FreeWord,
    pub right: FreeWord,
}

impl fmt::Display for PairWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.left, self.right)
    }
}

/// Letterwise pair images; `None` is the empty word.
type PairTable = [(Option<usize>, Option<usize>)];

const A: Option<usize> = Some(0);
const B: Option<usize> = Some(1);
const C: Option<usize> = Some(2);
const D: Option<usize> = Some(3);

/// `b ↦ (a,c)`, `c ↦ (a,d)`, `d ↦ (1,b)`, `bᵃ ↦ (c,a)`, `cᵃ ↦ (d,a)`, `dᵃ ↦ (b,1)`.
const PHI_BAR: [(Option<usize>, Option<usize>); 6] = [(A, C), (A, D), (None, B), (C, A), (D, A), (B, None)];

/// The split map composed with the substitution: `a ↦ (d,a)`, `b ↦ (1,b)`, `c ↦ (a,c)`, `d ↦ (a,d)`.
const PSI_SIGMA: [(Option<usize>, Option<usize>); 4] = [(D, A), (None, B), (A, C), (A, D)];

fn apply_table(table: &PairTable, w: &FreeWord) -> PairWord {
    let mut left = Vec::new();
    let mut right = Vec::new();
    for &l in w.letters() {
        let (x, y) = table[gen_of(l)];
        if let Some(x) = x {
            left.push(letter(x, is_inverse(l)));
        }
        if let Some(y) = y {
            right.push(letter(y, is_inverse(l)));
        }
    }
    PairWord {
        left: FreeWord::from_letters(Alphabet::Abcd, left).unwrap().free_reduce(),
        right: FreeWord::from_letters(Alphabet::Abcd, right).unwrap().free_reduce(),
    }
}

pub fn phi_bar(w: &StabWord) -> PairWord {
    apply_table(&PHI_BAR, &w.0)
}

/// The split map on words of the stabilizer lift.
pub fn psi(w: &FreeWord) -> Result<PairWord> {
    Ok(phi_bar(&rewrite_st1(w)?))
}

/// `ψ ∘ σ` applied letterwise.
pub fn psi_sigma(w: &FreeWord) -> PairWord {
    apply_table(&PSI_SIGMA, w)
}

/// Reflections `a: i ↦ 1 − i` and `d: i ↦ −i` on the vertices of a square.
fn d8_apply(l: Letter, x: u8) -> u8 {
    if gen_of(l) == 0 {
        (5 - x) % 4
    } else {
        (4 - x) % 4
    }
}

fn d8_element(w: &FreeWord) -> [u8; 2] {
    let mut img = [0u8, 1u8];
    for &l in w.letters().iter().rev() {
        img = img.map(|x| d8_apply(l, x));
    }
    img
}

const D8_CANONICAL: [&str; 8] = ["", "a", "d", "ad", "da", "ada", "dad", "adad"];

/// Shortlex-least word for the element of `⟨a, d | a², d², (ad)⁴⟩`.
pub fn dihedral_normal_form(w: &FreeWord) -> Result<FreeWord> {
    if !w.alphabet().embeds_in(Alphabet::Abcd) || w.letters().iter().any(|&l| !matches!(gen_of(l), 0 | 3)) {
        return Err(Error::AlphabetMismatch { expected: "ad".into(), found: w.to_string() });
    }
    let target = d8_element(w);
    let canon = D8_CANONICAL
        .iter()
        .map(|s| FreeWord::parse(Alphabet::Ad, s).unwrap())
        .find(|c| d8_element(c) == target)
        .expect("the images of two adjacent vertices determine the element");
    Ok(canon)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairFamily {
    #[serde(rename = "u")]
    LowerU,
    #[serde(rename = "v")]
    LowerV,
    #[serde(rename = "w")]
    LowerW,
    #[serde(rename = "t")]
    LowerT,
    #[serde(rename = "U")]
    U,
    #[serde(rename = "V")]
    V,
    #[serde(rename = "W")]
    W,
    #[serde(rename = "T")]
    T,
}

/// Largest index accepted by [`verify_pair_identity`].
pub const MAX_PAIR_INDEX: usize = 16;

impl PairFamily {
    pub const ALL: [PairFamily; 8] = [
        PairFamily::LowerU,
        PairFamily::LowerV,
        PairFamily::LowerW,
        PairFamily::LowerT,
        PairFamily::U,
        PairFamily::V,
        PairFamily::W,
        PairFamily::T,
    ];

    pub fn symbol(self) -> char {
        match self {
            PairFamily::LowerU => 'u',
            PairFamily::LowerV => 'v',
            PairFamily::LowerW => 'w',
            PairFamily::LowerT => 't',
            PairFamily::U => 'U',
            PairFamily::V => 'V',
            PairFamily::W => 'W',
            PairFamily::T => 'T',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        PairFamily::ALL.into_iter().find(|f| f.symbol() == c)
    }

    fn seed(self) -> &'static str {
        match self {
            PairFamily::LowerU => seeds::U,
            PairFamily::LowerV => seeds::V,
            PairFamily::LowerW => seeds::W,
            PairFamily::LowerT => seeds::T,
            PairFamily::U => seeds::U_CAP,
            PairFamily::V => seeds::V_CAP,
            PairFamily::W => seeds::W_CAP,
            PairFamily::T => seeds::T_CAP,
        }
    }

    /// `w` and `t` are indexed by level, starting at 3.
    fn offset(self) -> usize {
        match self {
            PairFamily::LowerW | PairFamily::LowerT | PairFamily::W | PairFamily::T => 3,
            _ => 0,
        }
    }

    pub fn min_index(self) -> usize {
        self.offset() + 1
    }

    pub fn word(self, index: usize) -> FreeWord {
        lysenok_image(self.seed(), index - self.offset())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairIdentityCheck {
    pub family: PairFamily,
    pub index: usize,
    pub image: PairWord,
    /// Left component lies in `⟨a, d⟩` and is trivial there.
    pub left_trivial: bool,
    /// Right component is freely equal to the predecessor.
    pub right_is_predecessor: bool,
    /// The letterwise route through `ψ ∘ σ` gives the same pair.
    pub sigma_route_agrees: bool,
    /// Set when the word-level identity fails: whether it still holds in `G₈`.
    pub fallback_g8: Option<bool>,
}

impl PairIdentityCheck {
    pub fn holds(&self) -> bool {
        self.left_trivial && self.right_is_predecessor && self.sigma_route_agrees
    }
}

/// Checks `ψ(x_i) = (1, x_{i−1})` for one of the recursive families.
pub fn pair_identity_check(family: PairFamily, index: usize) -> Result<PairIdentityCheck> {
    if index < family.min_index() || index > MAX_PAIR_INDEX {
        return Err(Error::LevelOutOfRange {
            level: index,
            range: format!("{}..={MAX_PAIR_INDEX}", family.min_index()),
        });
    }
    let word = family.word(index);
    let pred = family.word(index - 1);
    let image = psi(&word)?;
    let left_trivial = dihedral_normal_form(&image.left).map(|w| w.is_empty()).unwrap_or(false);
    let right_is_predecessor = image.right == pred.free_reduce();
    let sigma_route_agrees = psi_sigma(&pred) == image;
    let mut check =
        PairIdentityCheck { family, index, image, left_trivial, right_is_predecessor, sigma_route_agrees, fallback_g8: None };
    if !check.holds() {
        let lhs = check.image.clone();
        let mut ok = true;
        for m in 1..=8 {
            ok &= level_perm(&lhs.left, m)?.is_identity();
            ok &= level_perm(&lhs.right, m)? == level_perm(&pred, m)?;
        }
        check.fallback_g8 = Some(ok);
    }
    Ok(check)
}

pub fn verify_pair_identity(family: PairFamily, index: usize) -> Result<bool> {
    Ok(pair_identity_check(family, index)?.holds())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KernelGeneratorCheck {
    pub label: String,
    pub image: PairWord,
    /// Both components act trivially on levels `1..=8`.
    pub trivial_to_level8: bool,
    /// Both components are trivial by the section recursion.
    pub trivial_by_branching: bool,
}

/// Images of the listed normal generators of the kernel of the split map.
pub fn kernel_generator_checks() -> Result<Vec<KernelGeneratorCheck>> {
    let hopf = crate::families::relator_family(crate::families::FamilyKind::Hopf, 4)?;
    let mut out = Vec::new();
    for label in ["B_1", "B_2", "B_3", "B_4", "L", "U_0", "U_1", "V_0"] {
        let w = hopf.get(label).expect("label in family");
        let image = psi(w)?;
        let mut trivial_to_level8 = true;
        for m in 1..=8 {
            trivial_to_level8 &= level_perm(&image.left, m)?.is_identity() && level_perm(&image.right, m)?.is_identity();
        }
        let trivial_by_branching = is_trivial_g(&image.left)?.verdict && is_trivial_g(&image.right)?.verdict;
        out.push(KernelGeneratorCheck { label: label.into(), image, trivial_to_level8, trivial_by_branching });
    }
    Ok(out)
}

pub fn check_kernel_generators() -> Result<bool> {
    Ok(kernel_generator_checks()?.iter().all(|c| c.trivial_to_level8 && c.trivial_by_branching))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abcd(s: &str) -> FreeWord {
        FreeWord::parse(Alphabet::Abcd, s).unwrap()
    }

    fn stab(s: &str) -> StabWord {
        StabWord::new(FreeWord::parse(Alphabet::Stab6, s).unwrap()).unwrap()
    }

    #[test]
    fn rewrite_examples() {
        assert_eq!(rewrite_st1(&abcd("b")).unwrap(), stab("b"));
        assert_eq!(rewrite_st1(&abcd("aba")).unwrap(), stab("p"));
        let u0 = rewrite_st1(&abcd("(ad)^4")).unwrap();
        assert_eq!(u0, stab("rdrd"));
        assert_eq!(u0.to_string(), "dᵃddᵃd");
        assert_eq!(reduce_mod_a_squared(&u0.forget()), reduce_mod_a_squared(&abcd("(ad)^4")));
        assert!(matches!(rewrite_st1(&abcd("ab")), Err(Error::OddACount)));
    }

    #[test]
    fn phi_bar_rows() {
        let p = phi_bar(&stab("b"));
        assert_eq!((p.left, p.right), (abcd("a"), abcd("c")));
        let p = phi_bar(&stab("r"));
        assert_eq!((p.left, p.right), (abcd("b"), abcd("")));
        let p = phi_bar(&stab("dr"));
        assert_eq!((p.left, p.right), (abcd("b"), abcd("b")));
        let p = psi(&abcd("b^2")).unwrap();
        assert_eq!((p.left, p.right), (abcd("a^2"), abcd("c^2")));
    }

    fn d8_matrix(w: &FreeWord) -> [[i32; 2]; 2] {
        let a = [[1, 0], [0, -1]];
        let d = [[0, 1], [1, 0]];
        let mut m = [[1, 0], [0, 1]];
        for &l in w.letters() {
            let g = if gen_of(l) == 0 { a } else { d };
            let mut r = [[0; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    r[i][j] = (0..2).map(|k| m[i][k] * g[k][j]).sum();
                }
            }
            m = r;
        }
        m
    }

    #[test]
    fn dihedral_against_matrix_table() {
        let canon: Vec<_> = D8_CANONICAL.iter().map(|s| d8_matrix(&abcd(s))).collect();
        for i in 0..8 {
            for j in 0..i {
                assert_ne!(canon[i], canon[j]);
            }
        }
        for x in D8_CANONICAL {
            for y in D8_CANONICAL {
                let w = abcd(x).concat(&abcd(y));
                let nf = dihedral_normal_form(&w).unwrap();
                assert_eq!(d8_matrix(&nf), d8_matrix(&w), "{x}·{y}");
                assert!(D8_CANONICAL.contains(&nf.to_string().as_str()) || nf.is_empty());
            }
        }
        assert!(dihedral_normal_form(&abcd("(ad)^4")).unwrap().is_empty());
        assert_eq!(dihedral_normal_form(&abcd("ada")).unwrap().to_string(), "ada");
        assert_eq!(dihedral_normal_form(&abcd("d(ad)^5d")).unwrap().to_string(), "da");
        assert!(dihedral_normal_form(&abcd("ab")).is_err());
    }

    #[test]
    fn pair_identities_low_index() {
        assert!(verify_pair_identity(PairFamily::LowerU, 1).unwrap());
        assert!(verify_pair_identity(PairFamily::V, 1).unwrap());
        assert!(verify_pair_identity(PairFamily::W, 4).unwrap());
        assert!(verify_pair_identity(PairFamily::LowerU, 0).is_err());
        assert!(verify_pair_identity(PairFamily::T, 3).is_err());
    }

    #[test]
    fn kernel_generators_split_trivially() {
        let checks = kernel_generator_checks().unwrap();
        assert_eq!(checks.len(), 8);
        for c in &checks {
            assert!(c.trivial_to_level8 && c.trivial_by_branching, "{}", c.label);
        }
    }
}
