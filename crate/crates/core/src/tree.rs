//! Action of `a, b, c, d` on the binary rooted tree.
//!
//! Conventions: automorphisms act on the left and a word acts by its
//! rightmost letter first, so `(fg)(v) = f(g(v))` and sections compose as
//! `(fg)_v = f_{g(v)} g_v`. A leaf at level `n` is indexed by reading its
//! path as a binary number with the first letter most significant.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::word::{gen_of, is_inverse, letter, Alphabet, FreeWord, Letter};

/// Default cap on the level accepted by [`level_perm`].
pub const MAX_LEVEL: usize = 20;

/// The wreath recursion: sections at children 0 and 1 (`None` = identity) and the root swap.
pub const WREATH: [(Option<usize>, Option<usize>, bool); 4] = [
    (None, None, true),       // a = (1, 1) swap
    (Some(0), Some(2), false), // b = (a, c)
    (Some(0), Some(3), false), // c = (a, d)
    (None, Some(1), false),    // d = (1, b)
];

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vertex {
    bits: Vec<bool>,
}

impl Vertex {
    pub fn root() -> Self {
        Vertex { bits: Vec::new() }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Vertex { bits }
    }

    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse { pos: i, msg: format!("vertex digit '{c}'") }),
            })
            .collect::<Result<Vec<_>>>()
            .map(|bits| Vertex { bits })
    }

    /// The leaf with the given index at level `n`.
    pub fn from_leaf(index: usize, n: usize) -> Self {
        Vertex { bits: (0..n).map(|i| (index >> (n - 1 - i)) & 1 == 1).collect() }
    }

    pub fn leaf_index(&self) -> usize {
        self.bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn level(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn prefix(&self, len: usize) -> Vertex {
        Vertex { bits: self.bits[..len].to_vec() }
    }

    pub fn concat(&self, other: &Vertex) -> Vertex {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        Vertex { bits }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vertex({self})")
    }
}

fn check_tree_alphabet(w: &FreeWord) -> Result<()> {
    if w.alphabet().embeds_in(Alphabet::Abcd) {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch { expected: "abcd".into(), found: w.alphabet().name() })
    }
}

/// Image of `bits` under a generator (all generators are involutions, so the sign is irrelevant).
fn act_gen(gen: usize, bits: &mut [bool]) {
    let mut cur = Some(gen);
    for bit in bits.iter_mut() {
        let Some(g) = cur else { break };
        let (s0, s1, swap) = WREATH[g];
        let before = *bit;
        if swap {
            *bit = !*bit;
        }
        cur = if before { s1 } else { s0 };
    }
}

/// Section of a generator at a vertex, or `None` for the identity.
fn section_gen(gen: usize, bits: &[bool]) -> Option<usize> {
    let mut cur = Some(gen);
    for &bit in bits {
        let g = cur?;
        let (s0, s1, _) = WREATH[g];
        cur = if bit { s1 } else { s0 };
    }
    cur
}

/// Image of a vertex under the automorphism represented by `w`.
pub fn act(w: &FreeWord, v: &Vertex) -> Result<Vertex> {
    check_tree_alphabet(w)?;
    let mut bits = v.bits.clone();
    for &l in w.letters().iter().rev() {
        act_gen(gen_of(l), &mut bits);
    }
    Ok(Vertex { bits })
}

/// The section `w_v`, freely reduced.
pub fn section(w: &FreeWord, v: &Vertex) -> Result<FreeWord> {
    check_tree_alphabet(w)?;
    let mut cur = v.bits.clone();
    let mut rev: Vec<Letter> = Vec::new();
    for &l in w.letters().iter().rev() {
        let g = gen_of(l);
        // (x⁻¹)_v = (x_{x⁻¹(v)})⁻¹ and x⁻¹ = x as tree automorphisms.
        if is_inverse(l) {
            act_gen(g, &mut cur);
            if let Some(s) = section_gen(g, &cur) {
                rev.push(letter(s, true));
            }
        } else {
            if let Some(s) = section_gen(g, &cur) {
                rev.push(letter(s, false));
            }
            act_gen(g, &mut cur);
        }
    }
    rev.reverse();
    Ok(FreeWord::from_letters_unchecked(Alphabet::Abcd, rev).free_reduce())
}

/// Permutations of the `2^n` leaves induced by `a, b, c, d`.
pub fn generator_perms(n: usize) -> [Perm; 4] {
    let mut cur: [Vec<u32>; 4] = [vec![0], vec![0], vec![0], vec![0]];
    for m in 1..=n {
        let half = 1usize << (m - 1);
        let mut next: [Vec<u32>; 4] = Default::default();
        for (g, out) in next.iter_mut().enumerate() {
            let (s0, s1, swap) = WREATH[g];
            *out = (0..2 * half)
                .map(|i| {
                    let top = i >= half;
                    let rest = i & (half - 1);
                    let sec = if top { s1 } else { s0 };
                    let rest_img = sec.map_or(rest as u32, |s| cur[s][rest]);
                    let top_img = top ^ swap;
                    rest_img + if top_img { half as u32 } else { 0 }
                })
                .collect();
        }
        cur = next;
    }
    cur.map(Perm::from_images_unchecked)
}

/// Evaluates a word on generator permutations, rightmost letter acting first.
pub fn eval_word_perm(w: &FreeWord, gens: &[Perm; 4]) -> Perm {
    let degree = gens[0].degree();
    let mut acc: Vec<u32> = (0..degree as u32).collect();
    let mut tmp = vec![0u32; degree];
    for &l in w.letters() {
        // Generators are involutions: the inverse letter has the same permutation.
        let g = gens[gen_of(l)].images();
        for (t, &x) in tmp.iter_mut().zip(g.iter()) {
            *t = acc[x as usize];
        }
        std::mem::swap(&mut acc, &mut tmp);
    }
    Perm::from_images_unchecked(acc)
}

/// Permutation of the level-`n` leaves induced by `w`.
pub fn level_perm(w: &FreeWord, n: usize) -> Result<Perm> {
    check_tree_alphabet(w)?;
    if n == 0 || n > MAX_LEVEL {
        return Err(Error::LevelOutOfRange { level: n, range: format!("1..={MAX_LEVEL}") });
    }
    Ok(eval_word_perm(w, &generator_perms(n)))
}

/// A node of the branch algorithm's recursion.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BranchNode {
    pub word: String,
    /// Whether the reduced word fixes the first level.
    pub level1_trivial: bool,
    pub children: Option<Box<[BranchNode; 2]>>,
}

impl BranchNode {
    pub fn depth(&self) -> usize {
        match &self.children {
            None => 0,
            Some(c) => 1 + c[0].depth().max(c[1].depth()),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BranchCertificate {
    pub verdict: bool,
    pub trace: BranchNode,
}

/// The two first-level sections of a word that fixes level 1, reduced in the involutive regime.
pub fn level1_sections(w: &FreeWord) -> (FreeWord, FreeWord) {
    let zero = Vertex::from_bits(vec![false]);
    let one = Vertex::from_bits(vec![true]);
    (
        section(w, &zero).expect("abcd word").reduce_involutive(),
        section(w, &one).expect("abcd word").reduce_involutive(),
    )
}

fn branch(w: &FreeWord) -> (bool, BranchNode) {
    let r = w.reduce_involutive();
    let level1_trivial = r.count_gen(0) % 2 == 0;
    let label = r.to_string();
    if !level1_trivial {
        return (false, BranchNode { word: label, level1_trivial, children: None });
    }
    if r.len() <= 1 {
        return (r.is_empty(), BranchNode { word: label, level1_trivial, children: None });
    }
    let (w0, w1) = level1_sections(&r);
    let (v0, n0) = branch(&w0);
    let (v1, n1) = branch(&w1);
    (v0 && v1, BranchNode { word: label, level1_trivial, children: Some(Box::new([n0, n1])) })
}

/// Decides `w = 1` in the group by recursing into first-level sections.
pub fn is_trivial_g(w: &FreeWord) -> Result<BranchCertificate> {
    check_tree_alphabet(w)?;
    let (verdict, trace) = branch(w);
    Ok(BranchCertificate { verdict, trace })
}

fn in_nucleus(r: &FreeWord) -> bool {
    r.len() <= 1
}

/// Least `k` such that every section of `w` at level `k` lies in `{1, a, b, c, d}`.
pub fn nucleus_depth(w: &FreeWord) -> Result<usize> {
    check_tree_alphabet(w)?;
    fn depth(r: &FreeWord) -> usize {
        if in_nucleus(r) {
            return 0;
        }
        let zero = Vertex::from_bits(vec![false]);
        let one = Vertex::from_bits(vec![true]);
        let s0 = section(r, &zero).unwrap().reduce_involutive();
        let s1 = section(r, &one).unwrap().reduce_involutive();
        1 + depth(&s0).max(depth(&s1))
    }
    Ok(depth(&w.reduce_involutive()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> FreeWord {
        FreeWord::parse(Alphabet::Abcd, s).unwrap()
    }

    fn v(s: &str) -> Vertex {
        Vertex::parse(s).unwrap()
    }

    #[test]
    fn act_examples() {
        assert_eq!(act(&w("a"), &v("0110")).unwrap(), v("1110"));
        assert_eq!(act(&w(""), &v("0101")).unwrap(), v("0101"));
        assert_eq!(act(&w("b"), &v("00")).unwrap(), v("01"));
        assert_eq!(act(&w("d"), &v("0")).unwrap(), v("0"));
    }

    #[test]
    fn section_examples() {
        assert_eq!(section(&w("b"), &v("0")).unwrap(), w("a"));
        assert_eq!(section(&w("b"), &v("1")).unwrap(), w("c"));
        assert!(section(&w("a"), &v("0")).unwrap().is_empty());
        let s = section(&w("bc"), &v("1")).unwrap();
        assert_eq!(s, w("cd"));
        assert_eq!(s.reduce_involutive(), w("b"));
        assert_eq!(level_perm(&s, 5).unwrap(), level_perm(&w("b"), 5).unwrap());
    }

    #[test]
    fn level_perm_examples() {
        assert_eq!(level_perm(&w("a"), 1).unwrap().images(), &[1, 0]);
        assert!(level_perm(&w("d"), 1).unwrap().is_identity());
        for n in 1..=8 {
            assert!(level_perm(&w("(ad)^4"), n).unwrap().is_identity());
        }
        assert!(level_perm(&w("a"), 0).is_err());
        assert!(level_perm(&w("a"), MAX_LEVEL + 1).is_err());
    }

    #[test]
    fn leaf_indexing_is_msb_first() {
        let p = level_perm(&w("a"), 3).unwrap();
        assert_eq!(p.apply(0b001), 0b101);
        assert_eq!(Vertex::from_leaf(0b011, 3), v("011"));
        assert_eq!(v("011").leaf_index(), 3);
    }

    #[test]
    fn branch_algorithm_examples() {
        assert!(is_trivial_g(&w("(ad)^4")).unwrap().verdict);
        assert!(!is_trivial_g(&w("a")).unwrap().verdict);
        assert!(is_trivial_g(&w("")).unwrap().verdict);
        assert!(is_trivial_g(&w("bcd")).unwrap().verdict);
    }

    #[test]
    fn nucleus_examples() {
        assert_eq!(nucleus_depth(&w("b")).unwrap(), 0);
        assert_eq!(nucleus_depth(&w("ab")).unwrap(), 1);
    }
}
