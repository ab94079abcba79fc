//! Words in free groups of small rank.
//!
//! A letter is stored as a signed byte: `+(g + 1)` for generator `g` and
//! `-(g + 1)` for its inverse. The text format writes a generator as its
//! lowercase symbol and the inverse as the uppercase symbol, with `(..)^k`
//! (and `x^k`) for repetition; a negative exponent repeats the inverse.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Letter = i8;

#[inline]
pub fn letter(gen: usize, inverse: bool) -> Letter {
    let l = (gen + 1) as Letter;
    if inverse {
        -l
    } else {
        l
    }
}

#[inline]
pub fn gen_of(l: Letter) -> usize {
    (l.unsigned_abs() - 1) as usize
}

#[inline]
pub fn is_inverse(l: Letter) -> bool {
    l < 0
}

/// The generator alphabets used throughout the crate.
///
/// `Abc` and `Ad` reuse the generator ids of `Abcd` (`a=0, b=1, c=2, d=3`),
/// so a word over a sub-alphabet can be read as a word over `abcd` without
/// translation. `Stab6` has ids `0..6` for `b, c, d, bᵃ, cᵃ, dᵃ`; its text
/// symbols are `b c d p q r`. `Free(k)` is a generic rank-`k` alphabet used
/// by presentations with their own generator names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Alphabet {
    Abcd,
    Abc,
    Ad,
    Stab6,
    Free(u8),
}

impl Alphabet {
    /// Number of generator ids (the ambient rank, not the number used).
    pub fn rank(self) -> usize {
        match self {
            Alphabet::Abcd | Alphabet::Ad => 4,
            Alphabet::Abc => 3,
            Alphabet::Stab6 => 6,
            Alphabet::Free(k) => k as usize,
        }
    }

    pub fn contains(self, gen: usize) -> bool {
        match self {
            Alphabet::Ad => gen == 0 || gen == 3,
            _ => gen < self.rank(),
        }
    }

    pub fn symbol(self, gen: usize) -> char {
        match self {
            Alphabet::Stab6 => ['b', 'c', 'd', 'p', 'q', 'r'][gen],
            _ => (b'a' + gen as u8) as char,
        }
    }

    fn gen_of_symbol(self, ch: char) -> Option<usize> {
        let lower = ch.to_ascii_lowercase();
        let g = match self {
            Alphabet::Stab6 => "bcdpqr".find(lower)?,
            _ => {
                if !lower.is_ascii_lowercase() {
                    return None;
                }
                (lower as u8 - b'a') as usize
            }
        };
        self.contains(g).then_some(g)
    }

    /// True when every id of `self` is a valid id of `other`.
    pub fn embeds_in(self, other: Alphabet) -> bool {
        if self == other {
            return true;
        }
        match (self, other) {
            (Alphabet::Abc, Alphabet::Abcd) | (Alphabet::Ad, Alphabet::Abcd) => true,
            (Alphabet::Free(k), Alphabet::Free(m)) => k <= m,
            _ => false,
        }
    }

    pub fn name(self) -> String {
        match self {
            Alphabet::Abcd => "abcd".into(),
            Alphabet::Abc => "abc".into(),
            Alphabet::Ad => "ad".into(),
            Alphabet::Stab6 => "stab6".into(),
            Alphabet::Free(k) => format!("free{k}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreeWord {
    letters: Vec<Letter>,
    alphabet: Alphabet,
}

impl FreeWord {
    pub fn empty(alphabet: Alphabet) -> Self {
        FreeWord { letters: Vec::new(), alphabet }
    }

    /// Builds a word from raw letters, checking that every letter belongs to the alphabet.
    pub fn from_letters(alphabet: Alphabet, letters: Vec<Letter>) -> Result<Self> {
        for &l in &letters {
            if l == 0 || !alphabet.contains(gen_of(l)) {
                return Err(Error::AlphabetMismatch {
                    expected: alphabet.name(),
                    found: format!("letter {l}"),
                });
            }
        }
        Ok(FreeWord { letters, alphabet })
    }

    pub(crate) fn from_letters_unchecked(alphabet: Alphabet, letters: Vec<Letter>) -> Self {
        FreeWord { letters, alphabet }
    }

    pub fn generator(alphabet: Alphabet, gen: usize) -> Self {
        assert!(alphabet.contains(gen), "generator {gen} not in {}", alphabet.name());
        FreeWord { letters: vec![letter(gen, false)], alphabet }
    }

    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Self> {
        let mut p = Parser { src: text.as_bytes(), pos: 0, lookup: &|c| alphabet.gen_of_symbol(c) };
        let letters = p.parse_seq(false)?;
        Ok(FreeWord { letters, alphabet })
    }

    /// Parses with explicit single-character generator names (lowercase),
    /// producing a word over `Free(names.len())`.
    pub fn parse_with(names: &[char], text: &str) -> Result<Self> {
        let lookup = |c: char| names.iter().position(|&n| n == c.to_ascii_lowercase());
        let mut p = Parser { src: text.as_bytes(), pos: 0, lookup: &lookup };
        let letters = p.parse_seq(false)?;
        Ok(FreeWord { letters, alphabet: Alphabet::Free(names.len() as u8) })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Reinterprets the word over a larger alphabet with compatible ids.
    pub fn with_alphabet(&self, alphabet: Alphabet) -> Result<Self> {
        if !self.letters.iter().all(|&l| alphabet.contains(gen_of(l))) {
            return Err(Error::AlphabetMismatch {
                expected: alphabet.name(),
                found: self.alphabet.name(),
            });
        }
        Ok(FreeWord { letters: self.letters.clone(), alphabet })
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        FreeWord { letters, alphabet: self.alphabet }.free_reduce()
    }

    /// Concatenation without reduction.
    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        FreeWord { letters, alphabet: self.alphabet }
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            letters: self.letters.iter().rev().map(|&l| -l).collect(),
            alphabet: self.alphabet,
        }
    }

    pub fn pow(&self, k: i64) -> FreeWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        FreeWord { letters, alphabet: self.alphabet }.free_reduce()
    }

    /// `[x, y] = x⁻¹ y⁻¹ x y`.
    pub fn commutator(x: &FreeWord, y: &FreeWord) -> FreeWord {
        x.inverse().concat(&y.inverse()).concat(x).concat(y).free_reduce()
    }

    /// Conjugate `x^g = g⁻¹ x g`.
    pub fn conjugate(&self, g: &FreeWord) -> FreeWord {
        g.inverse().concat(self).concat(g).free_reduce()
    }

    pub fn free_reduce(&self) -> FreeWord {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        FreeWord { letters: out, alphabet: self.alphabet }
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] != -w[1])
    }

    /// Exponent sum of every generator id of the alphabet.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut sums = vec![0i64; self.alphabet.rank()];
        for &l in &self.letters {
            sums[gen_of(l)] += if is_inverse(l) { -1 } else { 1 };
        }
        sums
    }

    /// Number of occurrences of generator `gen` (either sign).
    pub fn count_gen(&self, gen: usize) -> usize {
        self.letters.iter().filter(|&&l| gen_of(l) == gen).count()
    }

    /// Reduction in the group `⟨a,b,c,d | a², b², c², d², bcd⟩`.
    ///
    /// The result alternates `a` with single letters from `{b, c, d}`. All
    /// letters are treated as involutions and adjacent letters from
    /// `{b, c, d}` are combined with the Klein four-group table.
    pub fn reduce_involutive(&self) -> FreeWord {
        debug_assert!(self.alphabet.embeds_in(Alphabet::Abcd));
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            let g = gen_of(l);
            match out.last().map(|&t| gen_of(t)) {
                Some(t) if t == g => {
                    out.pop();
                }
                Some(t) if t != 0 && g != 0 => {
                    // Klein four-group: product of two distinct of {b,c,d} is the third.
                    let third = 6 - t - g;
                    *out.last_mut().unwrap() = letter(third, false);
                }
                _ => out.push(letter(g, false)),
            }
        }
        FreeWord { letters: out, alphabet: Alphabet::Abcd }
    }

    /// Formats using explicit generator names.
    pub fn format_with(&self, names: &[char]) -> String {
        self.letters
            .iter()
            .map(|&l| {
                let c = names[gen_of(l)];
                if is_inverse(l) {
                    c.to_ascii_uppercase()
                } else {
                    c
                }
            })
            .collect()
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "");
        }
        for &l in &self.letters {
            let c = self.alphabet.symbol(gen_of(l));
            let c = if is_inverse(l) { c.to_ascii_uppercase() } else { c };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            write!(f, "ε")
        } else {
            write!(f, "{self}")
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    lookup: &'a dyn Fn(char) -> Option<usize>,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn parse_seq(&mut self, nested: bool) -> Result<Vec<Letter>> {
        let mut out = Vec::new();
        while self.pos < self.src.len() {
            let ch = self.src[self.pos] as char;
            let item = match ch {
                '(' => {
                    self.pos += 1;
                    let inner = self.parse_seq(true)?;
                    if self.src.get(self.pos) != Some(&b')') {
                        return Err(self.err("unclosed parenthesis"));
                    }
                    self.pos += 1;
                    inner
                }
                ')' if nested => return Ok(out),
                ')' => return Err(self.err("unbalanced ')'")),
                '1' if !nested && self.src.len() == 1 => {
                    self.pos += 1;
                    Vec::new()
                }
                c if c.is_ascii_alphabetic() => {
                    let g = (self.lookup)(c).ok_or_else(|| self.err(&format!("unknown generator '{c}'")))?;
                    self.pos += 1;
                    vec![letter(g, c.is_ascii_uppercase())]
                }
                c if c.is_whitespace() || c == '*' || c == '.' => {
                    self.pos += 1;
                    continue;
                }
                c => return Err(self.err(&format!("unexpected character '{c}'"))),
            };
            let k = self.parse_exponent()?;
            if k >= 0 {
                for _ in 0..k {
                    out.extend_from_slice(&item);
                }
            } else {
                for _ in 0..-k {
                    out.extend(item.iter().rev().map(|&l| -l));
                }
            }
        }
        if nested {
            return Err(self.err("unclosed parenthesis"));
        }
        Ok(out)
    }

    fn parse_exponent(&mut self) -> Result<i64> {
        if self.src.get(self.pos) != Some(&b'^') {
            return Ok(1);
        }
        self.pos += 1;
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse::<i64>().ok())
            .ok_or_else(|| self.err("bad exponent"))
    }
}

/// A free-group endomorphism given by the images of the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    alphabet: Alphabet,
    images: Vec<FreeWord>,
}

impl Substitution {
    pub fn new(alphabet: Alphabet, images: Vec<FreeWord>) -> Result<Self> {
        if images.len() != alphabet.rank() {
            return Err(Error::Invalid(format!(
                "substitution needs {} images, got {}",
                alphabet.rank(),
                images.len()
            )));
        }
        for im in &images {
            if !im.alphabet.embeds_in(alphabet) {
                return Err(Error::AlphabetMismatch { expected: alphabet.name(), found: im.alphabet.name() });
            }
        }
        let images = images.into_iter().map(|w| FreeWord { alphabet, ..w }).collect();
        Ok(Substitution { alphabet, images })
    }

    /// `a ↦ aca, b ↦ d, c ↦ b, d ↦ c` on `{a,b,c,d}`.
    pub fn lysenok() -> Self {
        let w = |s| FreeWord::parse(Alphabet::Abcd, s).unwrap();
        Substitution::new(Alphabet::Abcd, vec![w("aca"), w("d"), w("b"), w("c")]).unwrap()
    }

    /// `a ↦ aca, b ↦ bc, c ↦ b` on `{a,b,c}`.
    pub fn minimal() -> Self {
        let w = |s| FreeWord::parse(Alphabet::Abc, s).unwrap();
        Substitution::new(Alphabet::Abc, vec![w("aca"), w("bc"), w("b")]).unwrap()
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn image(&self, gen: usize) -> &FreeWord {
        &self.images[gen]
    }

    fn apply_once(&self, w: &FreeWord) -> FreeWord {
        let mut letters = Vec::with_capacity(w.len() * 2);
        for &l in &w.letters {
            let im = &self.images[gen_of(l)].letters;
            if is_inverse(l) {
                letters.extend(im.iter().rev().map(|&x| -x));
            } else {
                letters.extend_from_slice(im);
            }
        }
        FreeWord { letters, alphabet: self.alphabet }.free_reduce()
    }

    /// Applies the substitution `k` times, reducing freely after each pass.
    pub fn apply(&self, w: &FreeWord, k: usize) -> Result<FreeWord> {
        if !w.letters.iter().all(|&l| self.alphabet.contains(gen_of(l))) {
            return Err(Error::AlphabetMismatch { expected: self.alphabet.name(), found: w.alphabet.name() });
        }
        let mut cur = FreeWord { letters: w.letters.clone(), alphabet: self.alphabet }.free_reduce();
        for _ in 0..k {
            cur = self.apply_once(&cur);
        }
        Ok(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> FreeWord {
        FreeWord::parse(Alphabet::Abcd, s).unwrap()
    }

    #[test]
    fn free_reduction_examples() {
        assert!(w("aA").free_reduce().is_empty());
        assert_eq!(w("abBc").free_reduce(), w("ac"));
        assert_eq!(w("(ad)^4").free_reduce(), w("adadadad"));
        assert_eq!(w("abcCBA").free_reduce(), w(""));
    }

    #[test]
    fn involutive_reduction_examples() {
        assert_eq!(w("bc").reduce_involutive(), w("d"));
        assert!(w("aa").reduce_involutive().is_empty());
        assert_eq!(w("dadbc").reduce_involutive(), w("da"));
        assert_eq!(w("AbBa").reduce_involutive(), w(""));
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(w("(ad)^4").to_string(), "adadadad");
        assert_eq!(w("(bcd)^-2").to_string(), "DCBDCB");
        assert_eq!(w("a^-4").to_string(), "AAAA");
        assert_eq!(w("adAD").to_string(), "adAD");
        assert_eq!(w("((ab)^2c)^2").to_string(), "ababcababc");
        assert!(FreeWord::parse(Alphabet::Abcd, "(ab").is_err());
        assert!(FreeWord::parse(Alphabet::Abcd, "ae").is_err());
        assert!(FreeWord::parse(Alphabet::Ad, "ab").is_err());
        let named = FreeWord::parse_with(&['x', 'y', 'z'], "xYz^2").unwrap();
        assert_eq!(named.format_with(&['x', 'y', 'z']), "xYzz");
    }

    #[test]
    fn substitution_examples() {
        let s = Substitution::lysenok();
        let ad = FreeWord::parse(Alphabet::Ad, "ad").unwrap();
        assert_eq!(s.apply(&ad, 1).unwrap(), w("acac"));
        assert_eq!(s.apply(&w("ac"), 1).unwrap(), w("acab"));
        assert_eq!(s.apply(&w("abAcD"), 0).unwrap(), w("abAcD"));
        let m = Substitution::minimal();
        assert!(m.apply(&w("ad"), 1).is_err());
        let abc = FreeWord::parse(Alphabet::Abc, "abc").unwrap();
        assert_eq!(m.apply(&abc, 1).unwrap().to_string(), "acabcb");
    }
}
