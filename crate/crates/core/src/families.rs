//! The labeled relator families: the base group relators, the presentations
//! of the level quotients (four-generator and three-generator forms),
//! Lysenok's recursive relators, the Hopf-form capital relators, and the
//! normal generators of the nested kernels.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Alphabet, FreeWord, Substitution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    /// `a², b², c², d², bcd, (ad)⁴`.
    Gamma,
    /// Four-generator presentation of the level-`n` quotient (`2n + 2` relators).
    Thm1,
    /// Three-generator presentation of the level-`n` quotient (`2n + 1` relators).
    Thm4,
    /// Lysenok's relators `σⁱ((ad)⁴), σⁱ((adacac)⁴)` for `i ≤ cutoff`, plus the involutions and `bcd`.
    Lysenok,
    /// Capital relators `B₁..B₄, L, Uᵢ, Vᵢ, Wₙ, Tₙ`, normally generating the same subgroup as `Thm1`.
    Hopf,
    /// `u₁..uₙ, v₀..vₙ₋₁`.
    Omega,
    /// `u₁..uₙ₋₃, v₀..vₙ₋₄, wₙ, tₙ`.
    Upsilon,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 7] = [
        FamilyKind::Gamma,
        FamilyKind::Thm1,
        FamilyKind::Thm4,
        FamilyKind::Lysenok,
        FamilyKind::Hopf,
        FamilyKind::Omega,
        FamilyKind::Upsilon,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Gamma => "gamma",
            FamilyKind::Thm1 => "thm1",
            FamilyKind::Thm4 => "thm4",
            FamilyKind::Lysenok => "lysenok",
            FamilyKind::Hopf => "hopf",
            FamilyKind::Omega => "omega",
            FamilyKind::Upsilon => "upsilon",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        FamilyKind::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledWord {
    pub label: String,
    pub word: FreeWord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelatorFamily {
    pub kind: FamilyKind,
    /// Level `n`, or the cutoff for `Lysenok`, or 0 for `Gamma`.
    pub level: usize,
    pub words: Vec<LabeledWord>,
}

impl RelatorFamily {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn get(&self, label: &str) -> Option<&FreeWord> {
        self.words.iter().find(|lw| lw.label == label).map(|lw| &lw.word)
    }

    pub fn plain_words(&self) -> Vec<FreeWord> {
        self.words.iter().map(|lw| lw.word.clone()).collect()
    }

    pub fn alphabet(&self) -> Alphabet {
        match self.kind {
            FamilyKind::Thm4 => Alphabet::Abc,
            _ => Alphabet::Abcd,
        }
    }
}

fn abcd(s: &str) -> FreeWord {
    FreeWord::parse(Alphabet::Abcd, s).expect("built-in word")
}

fn abc(s: &str) -> FreeWord {
    FreeWord::parse(Alphabet::Abc, s).expect("built-in word")
}

/// Seeds of the four-generator families.
pub mod seeds {
    pub const U: &str = "(ad)^4";
    pub const V: &str = "(adacac)^4";
    pub const W: &str = "(ac)^4";
    pub const T: &str = "(abac)^4";
    pub const U_CAP: &str = "(ad)^4a^-4d^-4";
    pub const V_CAP: &str = "(adacac)^4a^-12c^-8d^-4";
    pub const W_CAP: &str = "(ac)^4a^-4c^-4";
    pub const T_CAP: &str = "(abac)^4a^-8b^-4c^-4";
    pub const L: &str = "b^2c^2d^2(bcd)^-2";
    pub const U_MIN: &str = "(abc)^4";
    pub const V_MIN: &str = "(abcacac)^4";
}

fn sigma_pow(s: &Substitution, seed: &FreeWord, k: usize) -> FreeWord {
    s.apply(seed, k).expect("seed over the substitution alphabet")
}

fn push(out: &mut Vec<LabeledWord>, label: impl Into<String>, word: FreeWord) {
    out.push(LabeledWord { label: label.into(), word });
}

/// `σⁱ(seed)` under the four-generator substitution.
pub fn lysenok_image(seed: &str, i: usize) -> FreeWord {
    sigma_pow(&Substitution::lysenok(), &abcd(seed), i)
}

/// Builds one of the labeled relator families.
pub fn relator_family(kind: FamilyKind, n: usize) -> Result<RelatorFamily> {
    let need_level = matches!(kind, FamilyKind::Thm1 | FamilyKind::Thm4 | FamilyKind::Hopf | FamilyKind::Upsilon);
    if need_level && n < 3 {
        return Err(Error::LevelOutOfRange { level: n, range: format!("{kind} needs n >= 3") });
    }
    if kind == FamilyKind::Omega && n < 1 {
        return Err(Error::LevelOutOfRange { level: n, range: "omega needs n >= 1".into() });
    }
    let s = Substitution::lysenok();
    let mut words = Vec::new();
    let involutions = |words: &mut Vec<LabeledWord>| {
        for name in ["a", "b", "c", "d"] {
            push(words, format!("{name}^2"), abcd(&format!("{name}^2")));
        }
        push(words, "bcd", abcd("bcd"));
    };
    match kind {
        FamilyKind::Gamma => {
            involutions(&mut words);
            push(&mut words, "(ad)^4", abcd(seeds::U));
        }
        FamilyKind::Thm1 => {
            involutions(&mut words);
            for i in 0..=n - 3 {
                push(&mut words, format!("u_{i}"), sigma_pow(&s, &abcd(seeds::U), i));
            }
            for i in 0..n.saturating_sub(3) {
                push(&mut words, format!("v_{i}"), sigma_pow(&s, &abcd(seeds::V), i));
            }
            push(&mut words, format!("w_{n}"), sigma_pow(&s, &abcd(seeds::W), n - 3));
            push(&mut words, format!("t_{n}"), sigma_pow(&s, &abcd(seeds::T), n - 3));
        }
        FamilyKind::Thm4 => {
            let m = Substitution::minimal();
            for name in ["a", "b", "c"] {
                push(&mut words, format!("{name}^2"), abc(&format!("{name}^2")));
            }
            push(&mut words, "(bc)^2", abc("(bc)^2"));
            for i in 0..=n - 3 {
                push(&mut words, format!("u_{i}"), sigma_pow(&m, &abc(seeds::U_MIN), i));
            }
            for i in 0..n.saturating_sub(3) {
                push(&mut words, format!("v_{i}"), sigma_pow(&m, &abc(seeds::V_MIN), i));
            }
            push(&mut words, format!("w_{n}"), sigma_pow(&m, &abc(seeds::W), n - 3));
            push(&mut words, format!("t_{n}"), sigma_pow(&m, &abc(seeds::T), n - 3));
        }
        FamilyKind::Lysenok => {
            involutions(&mut words);
            for i in 0..=n {
                push(&mut words, format!("u_{i}"), sigma_pow(&s, &abcd(seeds::U), i));
                push(&mut words, format!("v_{i}"), sigma_pow(&s, &abcd(seeds::V), i));
            }
        }
        FamilyKind::Hopf => {
            push(&mut words, "B_1", abcd("a^2"));
            push(&mut words, "B_2", abcd("b^2"));
            push(&mut words, "B_3", abcd("c^2"));
            push(&mut words, "B_4", abcd("bcd"));
            push(&mut words, "L", abcd(seeds::L));
            for i in 0..=n - 3 {
                push(&mut words, format!("U_{i}"), sigma_pow(&s, &abcd(seeds::U_CAP), i));
            }
            for i in 0..n.saturating_sub(3) {
                push(&mut words, format!("V_{i}"), sigma_pow(&s, &abcd(seeds::V_CAP), i));
            }
            push(&mut words, format!("W_{n}"), sigma_pow(&s, &abcd(seeds::W_CAP), n - 3));
            push(&mut words, format!("T_{n}"), sigma_pow(&s, &abcd(seeds::T_CAP), n - 3));
        }
        FamilyKind::Omega => {
            for i in 1..=n {
                push(&mut words, format!("u_{i}"), sigma_pow(&s, &abcd(seeds::U), i));
            }
            for i in 0..n {
                push(&mut words, format!("v_{i}"), sigma_pow(&s, &abcd(seeds::V), i));
            }
        }
        FamilyKind::Upsilon => {
            for i in 1..=n - 3 {
                push(&mut words, format!("u_{i}"), sigma_pow(&s, &abcd(seeds::U), i));
            }
            for i in 0..n.saturating_sub(3) {
                push(&mut words, format!("v_{i}"), sigma_pow(&s, &abcd(seeds::V), i));
            }
            push(&mut words, format!("w_{n}"), sigma_pow(&s, &abcd(seeds::W), n - 3));
            push(&mut words, format!("t_{n}"), sigma_pow(&s, &abcd(seeds::T), n - 3));
        }
    }
    Ok(RelatorFamily { kind, level: n, words })
}
