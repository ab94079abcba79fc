//! Todd–Coxeter enumeration over the trivial subgroup.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{relator_family, FamilyKind};
use crate::perm::{eval_word, Perm};
use crate::presentation::{column_layout, letter_column, Presentation};
use crate::quotients::{expected_log2_order, quotient_group, wreath_relators, WREATH_NAMES};
use crate::tree::level_perm;
use crate::word::{Alphabet, FreeWord};

const NONE: u32 = u32::MAX;

/// Default bound on simultaneously allocated cosets.
pub const DEFAULT_MAX_COSETS: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Scan every relator at each coset, defining as needed.
    Hlt,
    /// Define one entry at a time and process the deductions it causes.
    Felsch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Complete,
    Overflowed,
}

/// A finished coset table; row 0 is the subgroup.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CosetTable {
    pub status: Status,
    pub columns: usize,
    /// `rows[c][x]` is the image of coset `c` under column `x`.
    pub rows: Vec<Vec<u32>>,
    /// Generator and inverse column of every generator.
    pub layout: Vec<[usize; 2]>,
    pub total_defined: usize,
}

impl CosetTable {
    pub fn order(&self) -> usize {
        self.rows.len()
    }

    /// The permutation of cosets induced by generator `g` (cosets act on the right).
    pub fn generator_perm(&self, g: usize) -> Perm {
        let c = self.layout[g][0];
        Perm::from_images(self.rows.iter().map(|r| r[c]).collect()).expect("complete table")
    }
}

struct Enumerator {
    ncols: usize,
    inv: Vec<usize>,
    table: Vec<u32>,
    parent: Vec<u32>,
    live: usize,
    allocated: usize,
    cap: usize,
    total_defined: usize,
    rels: Vec<Vec<usize>>,
    /// For each column, the cyclic conjugates of relators and their inverses starting there.
    by_first: Vec<Vec<Vec<usize>>>,
    deductions: Vec<(u32, usize)>,
    track_deductions: bool,
}

struct Full;

impl Enumerator {
    fn new(p: &Presentation, cap: usize, track: bool) -> Self {
        let flags = p.involution_flags();
        let (layout, inv) = column_layout(&flags);
        let ncols = inv.len();
        let mut rels: Vec<Vec<usize>> = Vec::new();
        for r in p.relators() {
            let r = r.free_reduce();
            let mut cols: Vec<usize> = r.letters().iter().map(|&l| letter_column(&layout, l)).collect();
            // Cyclic reduction after identifying involutive inverses.
            let mut changed = true;
            while changed {
                changed = false;
                let mut out: Vec<usize> = Vec::with_capacity(cols.len());
                for c in cols {
                    if out.last() == Some(&inv[c]) {
                        out.pop();
                        changed = true;
                    } else {
                        out.push(c);
                    }
                }
                while out.len() >= 2 && out[0] == inv[*out.last().unwrap()] {
                    out.remove(0);
                    out.pop();
                    changed = true;
                }
                cols = out;
            }
            if cols.len() == 2 && cols[0] == cols[1] && inv[cols[0]] == cols[0] {
                continue;
            }
            if !cols.is_empty() && !rels.contains(&cols) {
                rels.push(cols);
            }
        }
        let mut by_first: Vec<Vec<Vec<usize>>> = vec![Vec::new(); ncols];
        if track {
            for r in &rels {
                let rinv: Vec<usize> = r.iter().rev().map(|&c| inv[c]).collect();
                for w in [r, &rinv] {
                    for k in 0..w.len() {
                        let rot: Vec<usize> = w[k..].iter().chain(&w[..k]).copied().collect();
                        if !by_first[rot[0]].contains(&rot) {
                            by_first[rot[0]].push(rot);
                        }
                    }
                }
            }
        }
        let cap = cap.max(1);
        let mut e = Enumerator {
            ncols,
            inv,
            table: Vec::new(),
            parent: Vec::new(),
            live: 0,
            allocated: 0,
            cap,
            total_defined: 0,
            rels,
            by_first,
            deductions: Vec::new(),
            track_deductions: track,
        };
        e.alloc().ok();
        e
    }

    #[inline]
    fn get(&self, c: u32, x: usize) -> u32 {
        self.table[c as usize * self.ncols + x]
    }

    #[inline]
    fn set(&mut self, c: u32, x: usize, v: u32) {
        self.table[c as usize * self.ncols + x] = v;
    }

    fn alloc(&mut self) -> std::result::Result<u32, Full> {
        if self.allocated == self.cap {
            return Err(Full);
        }
        let c = self.allocated as u32;
        self.allocated += 1;
        self.live += 1;
        self.total_defined += 1;
        self.table.extend(std::iter::repeat(NONE).take(self.ncols));
        self.parent.push(c);
        Ok(c)
    }

    fn is_live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut x = c;
        while self.parent[x as usize] != r {
            let next = self.parent[x as usize];
            self.parent[x as usize] = r;
            x = next;
        }
        r
    }

    fn assign(&mut self, c: u32, x: usize, d: u32) {
        self.set(c, x, d);
        self.set(d, self.inv[x], c);
        if self.track_deductions {
            self.deductions.push((c, x));
        }
    }

    fn define(&mut self, c: u32, x: usize) -> std::result::Result<u32, Full> {
        let d = self.alloc()?;
        self.assign(c, x, d);
        Ok(d)
    }

    fn merge(&mut self, a: u32, b: u32, queue: &mut Vec<u32>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, kill) = if a < b { (a, b) } else { (b, a) };
        self.parent[kill as usize] = keep;
        self.live -= 1;
        queue.push(kill);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let g = queue[i];
            i += 1;
            for x in 0..self.ncols {
                let d = self.get(g, x);
                if d == NONE {
                    continue;
                }
                let xi = self.inv[x];
                if self.get(d, xi) == g {
                    self.set(d, xi, NONE);
                }
                let mu = self.rep(g);
                let nu = self.rep(d);
                let mux = self.get(mu, x);
                if mux != NONE {
                    self.merge(nu, mux, &mut queue);
                } else {
                    let nuxi = self.get(nu, xi);
                    if nuxi != NONE {
                        self.merge(mu, nuxi, &mut queue);
                    } else {
                        self.assign(mu, x, nu);
                    }
                }
            }
        }
    }

    /// Scans `w` from coset `a`, filling gaps when `fill` is set.
    fn scan(&mut self, a: u32, w: &[usize], fill: bool) -> std::result::Result<(), Full> {
        let mut f = a;
        let mut i = 0usize;
        let mut b = a;
        let mut j = w.len();
        loop {
            while i < j {
                let n = self.get(f, w[i]);
                if n == NONE {
                    break;
                }
                f = n;
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i {
                let n = self.get(b, self.inv[w[j - 1]]);
                if n == NONE {
                    break;
                }
                b = n;
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                self.assign(f, w[i], b);
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }

    fn process_deductions(&mut self) {
        while let Some((c, x)) = self.deductions.pop() {
            if !self.is_live(c) {
                continue;
            }
            let d = self.get(c, x);
            let xi = self.inv[x];
            for (start, col) in [(c, x), (d, xi)] {
                if start == NONE {
                    continue;
                }
                let words = std::mem::take(&mut self.by_first[col]);
                for w in &words {
                    if !self.is_live(start) {
                        break;
                    }
                    self.scan(start, w, false).ok();
                }
                self.by_first[col] = words;
            }
        }
    }

    /// Renumbers live cosets in order. Returns the new index of `keep`.
    fn compact(&mut self, keep: u32) -> u32 {
        let mut map = vec![NONE; self.allocated];
        let mut next = 0u32;
        for c in 0..self.allocated {
            if self.parent[c] == c as u32 {
                map[c] = next;
                next += 1;
            }
        }
        let n = self.ncols;
        let mut table = Vec::with_capacity(next as usize * n);
        for c in 0..self.allocated {
            if map[c] != NONE {
                for x in 0..n {
                    let v = self.table[c * n + x];
                    table.push(if v == NONE { NONE } else { map[v as usize] });
                }
            }
        }
        self.table = table;
        self.allocated = next as usize;
        self.parent = (0..next).collect();
        let mut k = keep;
        while map[k as usize] == NONE {
            k += 1;
        }
        map[k as usize]
    }

    fn room(&mut self, cur: u32) -> Option<u32> {
        if self.live == self.allocated {
            return None;
        }
        Some(self.compact(cur))
    }

    fn next_live(&self, from: u32) -> Option<u32> {
        (from as usize..self.allocated).find(|&c| self.parent[c] == c as u32).map(|c| c as u32)
    }

    fn run_hlt(&mut self) -> bool {
        let mut cur = 0u32;
        let rels = std::mem::take(&mut self.rels);
        'outer: while let Some(c) = self.next_live(cur) {
            cur = c;
            for r in &rels {
                if !self.is_live(cur) {
                    continue 'outer;
                }
                while self.scan(cur, r, true).is_err() {
                    match self.room(cur) {
                        Some(c2) => cur = c2,
                        None => return false,
                    }
                    if !self.is_live(cur) {
                        continue 'outer;
                    }
                }
            }
            for x in 0..self.ncols {
                if !self.is_live(cur) {
                    continue 'outer;
                }
                if self.get(cur, x) == NONE && self.define(cur, x).is_err() {
                    match self.room(cur) {
                        Some(c2) => cur = c2,
                        None => return false,
                    }
                    continue 'outer;
                }
            }
            cur += 1;
        }
        self.rels = rels;
        true
    }

    fn run_felsch(&mut self) -> bool {
        let rels = self.rels.clone();
        for r in &rels {
            if self.scan(0, r, true).is_err() {
                return false;
            }
            self.process_deductions();
        }
        let mut cur = 0u32;
        while let Some(c) = self.next_live(cur) {
            cur = c;
            let mut x = 0;
            while x < self.ncols {
                if !self.is_live(cur) {
                    break;
                }
                if self.get(cur, x) == NONE {
                    if self.define(cur, x).is_err() {
                        match self.room(cur) {
                            Some(c2) => cur = c2,
                            None => return false,
                        }
                        continue;
                    }
                    self.process_deductions();
                }
                x += 1;
            }
            if self.is_live(cur) {
                cur += 1;
            }
        }
        true
    }

    fn finish(mut self, layout: Vec<[usize; 2]>, complete: bool) -> CosetTable {
        let status = if complete { Status::Complete } else { Status::Overflowed };
        let total_defined = self.total_defined;
        let mut rows = Vec::new();
        if complete {
            self.compact(0);
            rows = self.table.chunks(self.ncols).map(<[u32]>::to_vec).collect();
        }
        CosetTable { status, columns: self.ncols, rows, layout, total_defined }
    }
}

/// Runs the enumeration and returns the table, complete or overflowed.
pub fn coset_table(p: &Presentation, max_cosets: usize, strategy: Strategy) -> CosetTable {
    let mut e = Enumerator::new(p, max_cosets, strategy == Strategy::Felsch);
    let complete = match strategy {
        Strategy::Hlt => e.run_hlt(),
        Strategy::Felsch => e.run_felsch(),
    };
    let (layout, _) = column_layout(&p.involution_flags());
    e.finish(layout, complete)
}

/// Order of the presented group, or a resource error if the bound is hit.
pub fn enumerate(p: &Presentation, max_cosets: usize) -> Result<usize> {
    enumerate_with(p, max_cosets, Strategy::Felsch)
}

pub fn enumerate_with(p: &Presentation, max_cosets: usize, strategy: Strategy) -> Result<usize> {
    if max_cosets == 0 {
        return Err(Error::Invalid("max_cosets must be positive".into()));
    }
    let t = coset_table(p, max_cosets, strategy);
    match t.status {
        Status::Complete => Ok(t.order()),
        Status::Overflowed => Err(Error::Resource(format!("coset bound {max_cosets} exceeded"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    Thm1,
    Thm4,
    Wreath,
}

impl CertificateKind {
    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "thm1" => Some(CertificateKind::Thm1),
            "thm4" => Some(CertificateKind::Thm4),
            "lemma1_wreath" | "wreath" => Some(CertificateKind::Wreath),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PresentationCertificate {
    pub kind: CertificateKind,
    pub level: usize,
    /// Every relator acts trivially on level `n`.
    pub relators_vanish: bool,
    pub enumerated_order: Option<usize>,
    pub expected_log2_order: u64,
    pub overflowed: bool,
}

impl PresentationCertificate {
    pub fn holds(&self) -> bool {
        self.relators_vanish && self.enumerated_order.map(|o| o as u128) == Some(1u128 << self.expected_log2_order)
    }
}

/// The presentation used by [`presentation_certificate`].
pub fn certificate_presentation(kind: CertificateKind, n: usize) -> Result<Presentation> {
    match kind {
        CertificateKind::Thm1 => Ok(Presentation::from_family(&relator_family(FamilyKind::Thm1, n)?)),
        CertificateKind::Thm4 => Ok(Presentation::from_family(&relator_family(FamilyKind::Thm4, n)?)),
        CertificateKind::Wreath => Presentation::new(WREATH_NAMES.to_vec(), wreath_relators()),
    }
}

/// Checks that a presentation maps onto `Gₙ` and has exactly `|Gₙ|` elements.
pub fn presentation_certificate(kind: CertificateKind, n: usize, max_cosets: usize) -> Result<PresentationCertificate> {
    if !(3..=5).contains(&n) || (kind == CertificateKind::Wreath && n != 3) {
        return Err(Error::LevelOutOfRange { level: n, range: "3..=5 (wreath: 3)".into() });
    }
    let p = certificate_presentation(kind, n)?;
    let relators_vanish = match kind {
        CertificateKind::Wreath => {
            let gens: Vec<Perm> = ["ada", "c", "a"]
                .iter()
                .map(|s| level_perm(&FreeWord::parse(Alphabet::Abcd, s).unwrap(), 3))
                .collect::<Result<_>>()?;
            let all = p.relators().iter().all(|r| eval_word(r, &gens).is_identity());
            all && quotient_group(3)?.log2_order() == Some(expected_log2_order(3))
        }
        _ => {
            let mut ok = true;
            for r in p.relators() {
                let w = FreeWord::from_letters(Alphabet::Abcd, r.letters().to_vec())?;
                ok &= level_perm(&w, n)?.is_identity();
            }
            ok
        }
    };
    let (enumerated_order, overflowed) = match enumerate(&p, max_cosets) {
        Ok(o) => (Some(o), false),
        Err(e) if e.is_resource() => (None, true),
        Err(e) => return Err(e),
    };
    Ok(PresentationCertificate { kind, level: n, relators_vanish, enumerated_order, expected_log2_order: expected_log2_order(n), overflowed })
}

/// Order after dropping relator `i`. Diagnostic only: may overflow when the result is large or infinite.
pub fn enumerate_without(p: &Presentation, i: usize, max_cosets: usize) -> Result<usize> {
    enumerate(&p.without_relator(i), max_cosets)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(text: &str) -> Presentation {
        Presentation::parse(text).unwrap()
    }

    #[test]
    fn small_groups() {
        for s in [Strategy::Hlt, Strategy::Felsch] {
            assert_eq!(enumerate_with(&pres("gens: a\naa\n"), 100, s).unwrap(), 2);
            assert_eq!(enumerate_with(&pres("gens: a b\naa\nbb\n(ab)^3\n"), 100, s).unwrap(), 6);
            assert_eq!(enumerate_with(&pres("gens: x y\nx^3\ny^5\n(xy)^2\n"), 1000, s).unwrap(), 60);
            assert_eq!(enumerate_with(&pres("gens: a b\na^4\nA^2b^-2\nb^-1aba\n"), 100, s).unwrap(), 8);
            assert_eq!(enumerate_with(&pres("gens: a b\naBAb\na^5\nb^7\n"), 1000, s).unwrap(), 35);
            assert_eq!(enumerate_with(&pres("gens: a\n"), 50, s).unwrap_err().is_resource(), true);
        }
    }

    #[test]
    fn table_is_permutation_representation() {
        let p = pres("gens: a b\naa\nbb\n(ab)^4\n");
        let t = coset_table(&p, 100, Strategy::Hlt);
        assert_eq!(t.order(), 8);
        let gens: Vec<Perm> = (0..2).map(|g| t.generator_perm(g)).collect();
        for r in p.relators() {
            assert!(eval_word(r, &gens).is_identity());
        }
    }

    #[test]
    fn level3_presentations() {
        for kind in [CertificateKind::Thm1, CertificateKind::Thm4, CertificateKind::Wreath] {
            let c = presentation_certificate(kind, 3, DEFAULT_MAX_COSETS).unwrap();
            assert!(c.holds(), "{c:?}");
            assert_eq!(c.enumerated_order, Some(128));
        }
    }

    #[test]
    fn compaction_recovers_space() {
        let p = pres("gens: a b\naa\nbb\n(ab)^8\n");
        assert_eq!(enumerate_with(&p, 20, Strategy::Hlt).unwrap(), 16);
        assert_eq!(enumerate_with(&p, 16, Strategy::Felsch).unwrap(), 16);
    }
}
