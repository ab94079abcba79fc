//! Finite presentations and their text format.
//!
//! ```text
//! # comment
//! gens: a b c d
//! aa
//! (ad)^4
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::RelatorFamily;
use crate::word::{gen_of, is_inverse, Alphabet, FreeWord};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    names: Vec<char>,
    relators: Vec<FreeWord>,
}

impl Presentation {
    pub fn new(names: Vec<char>, relators: Vec<FreeWord>) -> Result<Self> {
        let k = names.len();
        if k == 0 || k > 26 {
            return Err(Error::Invalid(format!("{k} generators")));
        }
        for (i, c) in names.iter().enumerate() {
            if !c.is_ascii_lowercase() || names[..i].contains(c) {
                return Err(Error::Invalid(format!("bad generator name {c:?}")));
            }
        }
        let relators = relators
            .into_iter()
            .map(|r| {
                if r.letters().iter().any(|&l| gen_of(l) >= k) {
                    return Err(Error::AlphabetMismatch { expected: format!("{k} generators"), found: r.alphabet().name() });
                }
                FreeWord::from_letters(Alphabet::Free(k as u8), r.letters().to_vec())
            })
            .collect::<Result<_>>()?;
        Ok(Presentation { names, relators })
    }

    /// Presentation on `a, b, c, d` (or `a, b, c`) from a relator family.
    pub fn from_family(f: &RelatorFamily) -> Self {
        let names: Vec<char> = "abcd".chars().take(f.alphabet().rank()).collect();
        Presentation::new(names, f.plain_words()).expect("family words are over their alphabet")
    }

    pub fn names(&self) -> &[char] {
        &self.names
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn relators(&self) -> &[FreeWord] {
        &self.relators
    }

    pub fn with_relator(&self, r: FreeWord) -> Result<Self> {
        let mut rels = self.relators.clone();
        rels.push(r);
        Presentation::new(self.names.clone(), rels)
    }

    pub fn without_relator(&self, i: usize) -> Self {
        let mut p = self.clone();
        p.relators.remove(i);
        p
    }

    /// Generator `g` squares to a relator (as `gg` or `GG`).
    pub fn is_involution(&self, g: usize) -> bool {
        self.relators.iter().any(|r| {
            let l = r.letters();
            l.len() == 2 && l[0] == l[1] && gen_of(l[0]) == g
        })
    }

    pub fn involution_flags(&self) -> Vec<bool> {
        (0..self.rank()).map(|g| self.is_involution(g)).collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut names: Option<Vec<char>> = None;
        let mut relators = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("gens:") {
                if names.is_some() {
                    return Err(Error::Parse { pos: lineno, msg: "duplicate gens line".into() });
                }
                let mut v = Vec::new();
                for tok in rest.split_whitespace() {
                    let mut cs = tok.chars();
                    match (cs.next(), cs.next()) {
                        (Some(c), None) => v.push(c),
                        _ => return Err(Error::Parse { pos: lineno, msg: format!("generator name {tok:?}") }),
                    }
                }
                names = Some(v);
                continue;
            }
            let Some(ns) = &names else {
                return Err(Error::Parse { pos: lineno, msg: "relator before gens line".into() });
            };
            let w = FreeWord::parse_with(ns, line)
                .map_err(|e| Error::Parse { pos: lineno, msg: e.to_string() })?;
            relators.push(w);
        }
        let names = names.ok_or(Error::Parse { pos: 0, msg: "missing gens line".into() })?;
        Presentation::new(names, relators)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn format_word(&self, w: &FreeWord) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.format_with(&self.names)
    }

    /// Exponent sums of each relator, as rows.
    pub fn relation_matrix(&self) -> Vec<Vec<i64>> {
        self.relators.iter().map(|r| r.exponent_sums()).collect()
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(FreeWord::len).sum()
    }

    pub fn deficiency(&self) -> i64 {
        self.rank() as i64 - self.relators.len() as i64
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.names.iter().map(char::to_string).collect();
        writeln!(f, "gens: {}", gens.join(" "))?;
        for r in &self.relators {
            writeln!(f, "{}", self.format_word(r))?;
        }
        Ok(())
    }
}

/// Column index for a letter, with involutions sharing one column.
pub(crate) fn column_layout(flags: &[bool]) -> (Vec<[usize; 2]>, Vec<usize>) {
    let mut col = Vec::with_capacity(flags.len());
    let mut inv = Vec::new();
    for &f in flags {
        let c = inv.len();
        if f {
            col.push([c, c]);
            inv.push(c);
        } else {
            col.push([c, c + 1]);
            inv.push(c + 1);
            inv.push(c);
        }
    }
    (col, inv)
}

pub(crate) fn letter_column(col: &[[usize; 2]], l: crate::word::Letter) -> usize {
    col[gen_of(l)][is_inverse(l) as usize]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{relator_family, FamilyKind};

    #[test]
    fn text_round_trip() {
        let text = "gens: a b c d\naa\nbb\ncc\ndd\nbcd\nadadadad\n";
        let p = Presentation::parse(text).unwrap();
        assert_eq!(p.to_text(), text);
        assert_eq!(Presentation::parse(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn parse_comments_and_powers() {
        let p = Presentation::parse("# wreath\ngens: x y\n\nx^2\n# more\n(xY)^3\n").unwrap();
        assert_eq!(p.rank(), 2);
        assert_eq!(p.relators().len(), 2);
        assert_eq!(p.format_word(&p.relators()[1]), "xYxYxY");
        assert_eq!(p.involution_flags(), vec![true, false]);
        assert!(Presentation::parse("aa\n").is_err());
        assert!(Presentation::parse("gens: a\nab\n").is_err());
    }

    #[test]
    fn family_presentation() {
        let p = Presentation::from_family(&relator_family(FamilyKind::Thm4, 4).unwrap());
        assert_eq!(p.names(), &['a', 'b', 'c']);
        assert_eq!(p.deficiency(), 3 - 9);
        assert_eq!(Presentation::parse(&p.to_text()).unwrap(), p);
    }
}
