//! 2-quotients, 2-covers and multiplicator data by the tails-and-consistency method.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{relator_family, FamilyKind};
use crate::linalg::{F2Echelon, F2Matrix};
use crate::pcp::{Definition, PcElem, PcPresentation};
use crate::perm::Perm;
use crate::presentation::Presentation;

/// Class cap used when the caller has no better bound.
pub const DEFAULT_MAX_CLASS: usize = 64;

/// `G/Φ(G)` as a presentation of class 1.
fn class_one(p: &Presentation) -> PcPresentation {
    let r = p.rank();
    // Reversed columns so that later abstract generators are eliminated first.
    let mut ech = F2Echelon::new(r);
    for row in p.relation_matrix() {
        let mut v = FixedBitSet::with_capacity(r);
        for (x, e) in row.iter().enumerate() {
            if e.rem_euclid(2) == 1 {
                v.insert(r - 1 - x);
            }
        }
        ech.insert(v);
    }
    let pivots: Vec<usize> = ech.pivots().iter().map(|&c| r - 1 - c).collect();
    let free: Vec<usize> = (0..r).filter(|x| !pivots.contains(x)).collect();
    let k = free.len();
    let mut images = vec![PcElem::identity(k, 0); r];
    for (i, &x) in free.iter().enumerate() {
        images[x].g.insert(i);
    }
    for row in ech.reduced() {
        let x = r - 1 - row.minimum().unwrap();
        for c in row.ones().skip(1) {
            let y = r - 1 - c;
            let i = free.iter().position(|&f| f == y).unwrap();
            images[x].g.insert(i);
        }
    }
    PcPresentation::elementary(&free, images)
}

/// A presentation with one symbolic tail per non-defining relation.
struct Tailed {
    ext: PcPresentation,
    vars: Vec<Definition>,
}

fn add_tails(pc: &PcPresentation) -> Tailed {
    let defs = pc.definitions();
    let k = pc.len();
    let mut vars = Vec::new();
    for x in 0..pc.abstract_rank() {
        if !defs.contains(&Definition::Image(x)) {
            vars.push(Definition::Image(x));
        }
    }
    for i in 0..k {
        if !defs.contains(&Definition::Power(i)) {
            vars.push(Definition::Power(i));
        }
    }
    for j in 0..k {
        for i in 0..j {
            if !defs.contains(&Definition::Comm(j, i)) {
                vars.push(Definition::Comm(j, i));
            }
        }
    }
    let mut ext = pc.clone();
    ext.set_tails(vars.len());
    for (v, d) in vars.iter().enumerate() {
        let e = match *d {
            Definition::Image(x) => ext.image_mut(x),
            Definition::Power(i) => ext.power_mut(i),
            Definition::Comm(j, i) => ext.comm_mut(j, i),
        };
        e.t.insert(v);
    }
    Tailed { ext, vars }
}

impl Tailed {
    fn consistency(&self, ech: &mut F2Echelon) -> Result<()> {
        for (a, b) in self.ext.consistency_pairs() {
            if a.g != b.g {
                return Err(Error::Inconsistent("consistency check differs outside the tails".into()));
            }
            let mut t = a.t.clone();
            t.symmetric_difference_with(&b.t);
            ech.insert(t);
        }
        Ok(())
    }

    fn relators(&self, p: &Presentation, ech: &mut F2Echelon) -> Result<()> {
        for r in p.relators() {
            let e = self.ext.eval_word(r)?;
            if !e.g.is_clear() {
                return Err(Error::Inconsistent("relator is nontrivial below the tails".into()));
            }
            ech.insert(e.t);
        }
        Ok(())
    }

    /// Adds a central generator for every tail not eliminated by `ech`.
    fn grow(self, ech: &F2Echelon, weight: usize) -> PcPresentation {
        let m = self.vars.len();
        let pivots = ech.pivots();
        let free: Vec<usize> = (0..m).filter(|v| !pivots.contains(v)).collect();
        let mut pc = self.ext;
        let k = pc.len();
        let new_defs: Vec<Definition> = free.iter().map(|&v| self.vars[v]).collect();
        let mut expr: Vec<FixedBitSet> = vec![FixedBitSet::with_capacity(k + free.len()); m];
        for (n, &v) in free.iter().enumerate() {
            expr[v].insert(k + n);
        }
        for row in ech.reduced() {
            let p = row.minimum().unwrap();
            for c in row.ones().skip(1) {
                let n = free.iter().position(|&f| f == c).expect("reduced row has free columns only");
                expr[p].insert(k + n);
            }
        }
        let vars = self.vars;
        pc.append_central(&new_defs, weight);
        for (v, d) in vars.iter().enumerate() {
            let e = match *d {
                Definition::Image(x) => pc.image_mut(x),
                Definition::Power(i) => pc.power_mut(i),
                Definition::Comm(j, i) => pc.comm_mut(j, i),
            };
            e.g.union_with(&expr[v]);
        }
        pc
    }
}

/// Largest 2-quotient of class at most `max_class` that is also the whole 2-quotient.
///
/// Fails with a resource error if the lower exponent-2 central series has not
/// stabilized by `max_class`.
pub fn pquotient(p: &Presentation, max_class: usize) -> Result<PcPresentation> {
    let mut pc = class_one(p);
    if pc.is_empty() {
        return Ok(pc);
    }
    for class in 1..=max_class {
        let tailed = add_tails(&pc);
        let mut ech = F2Echelon::new(tailed.vars.len());
        tailed.consistency(&mut ech)?;
        tailed.relators(p, &mut ech)?;
        if ech.rank() == tailed.vars.len() {
            return Ok(pc);
        }
        if class == max_class {
            break;
        }
        pc = tailed.grow(&ech, class + 1);
    }
    Err(Error::Resource(format!("2-quotient did not stabilize by class {max_class}")))
}

/// The 2-covering group relative to the abstract generators of a presentation.
#[derive(Clone, Debug)]
pub struct PCover {
    pub cover: PcPresentation,
    /// Generators of the multiplicator are `base_len..cover.len()`.
    pub base_len: usize,
    /// Dimension of the multiplicator.
    pub mstar: usize,
}

impl PCover {
    pub fn multiplicator_gens(&self) -> std::ops::Range<usize> {
        self.base_len..self.cover.len()
    }
}

pub fn p_cover(pc: &PcPresentation, p: &Presentation) -> Result<PCover> {
    if pc.abstract_rank() != p.rank() {
        return Err(Error::Invalid("presentation and pc presentation differ in rank".into()));
    }
    let tailed = add_tails(pc);
    let mut ech = F2Echelon::new(tailed.vars.len());
    tailed.consistency(&mut ech)?;
    let mstar = tailed.vars.len() - ech.rank();
    let cover = tailed.grow(&ech, pc.class() + 1);
    Ok(PCover { cover, base_len: pc.len(), mstar })
}

/// One row per relator: its value in the multiplicator.
pub fn relator_images(p: &Presentation, cover: &PCover) -> Result<F2Matrix> {
    let mut m = F2Matrix::zeros(0, cover.mstar);
    for r in p.relators() {
        let e = cover.cover.eval_word(r)?;
        if e.g.ones().any(|i| i < cover.base_len) {
            return Err(Error::Inconsistent("relator evaluates outside the multiplicator".into()));
        }
        let mut row = FixedBitSet::with_capacity(cover.mstar);
        for i in e.g.ones() {
            row.insert(i - cover.base_len);
        }
        m.push_row(row);
    }
    Ok(m)
}

/// `dim H²(G, F₂)` from the cocycle and coboundary spaces of a multiplication table.
pub fn cocycle_h2_dim(table: &[Vec<usize>]) -> usize {
    let n = table.len();
    let var = |g: usize, h: usize| g * n + h;
    let mut z = F2Echelon::new(n * n);
    for g in 0..n {
        for h in 0..n {
            for k in 0..n {
                // f(h,k) + f(g,hk) + f(gh,k) + f(g,h) = 0
                let mut v = FixedBitSet::with_capacity(n * n);
                for c in [var(h, k), var(g, table[h][k]), var(table[g][h], k), var(g, h)] {
                    v.toggle(c);
                }
                z.insert(v);
            }
        }
    }
    let mut b = F2Echelon::new(n * n);
    for x in 0..n {
        // δφ for φ the indicator of x: δφ(g,h) = φ(g) + φ(h) + φ(gh).
        let mut v = FixedBitSet::with_capacity(n * n);
        for g in 0..n {
            for h in 0..n {
                let s = (g == x) as u8 + (h == x) as u8 + (table[g][h] == x) as u8;
                v.set(var(g, h), s % 2 == 1);
            }
        }
        b.insert(v);
    }
    n * n - z.rank() - b.rank()
}

/// Images of the pc generators under the map determined by `gens` (images of the abstract generators).
pub fn pc_generator_perms(pc: &PcPresentation, gens: &[Perm]) -> Vec<Perm> {
    let degree = gens[0].degree();
    let mut out: Vec<Perm> = Vec::with_capacity(pc.len());
    let eval = |e: &PcElem, out: &[Perm], skip: usize| {
        e.g.ones().filter(|&i| i != skip).fold(Perm::identity(degree), |acc, i| acc.compose(&out[i]))
    };
    for (n, d) in pc.definitions().iter().enumerate() {
        let (lhs, rhs) = match *d {
            Definition::Image(x) => (gens[x].clone(), pc.image(x)),
            Definition::Power(i) => (out[i].compose(&out[i]), pc.power(i)),
            Definition::Comm(j, i) => (Perm::commutator(&out[j], &out[i]), pc.comm(j, i)),
        };
        // lhs = rhs_old · g_n
        let old = eval(rhs, &out, n);
        out.push(old.inverse().compose(&lhs));
    }
    out
}

/// Whether every relation of `pc` holds for the permutations defined through `gens`.
pub fn relations_hold_in(pc: &PcPresentation, gens: &[Perm]) -> bool {
    let perms = pc_generator_perms(pc, gens);
    let degree = gens[0].degree();
    let eval = |e: &PcElem| e.g.ones().fold(Perm::identity(degree), |acc, i| acc.compose(&perms[i]));
    let k = pc.len();
    (0..k).all(|i| perms[i].compose(&perms[i]) == eval(pc.power(i)))
        && (0..k).all(|j| (0..j).all(|i| Perm::commutator(&perms[j], &perms[i]) == eval(pc.comm(j, i))))
        && (0..pc.abstract_rank()).all(|x| gens[x] == eval(pc.image(x)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplierReport {
    pub level: usize,
    pub log2_order: usize,
    pub h2_dim: usize,
    pub schur_mod2_rank: usize,
    pub def_lower: usize,
    pub def_upper: usize,
    pub relator_count: usize,
    pub relator_image_rank: usize,
    pub relators_independent: bool,
    /// Always set: only the mod-2 rank of the multiplier is certified.
    pub rank_only: bool,
}

impl MultiplierReport {
    pub fn matches_formulas(&self) -> bool {
        let n = self.level;
        self.h2_dim == 2 * n + 1 && self.schur_mod2_rank == 2 * n - 2 && self.relators_independent
    }
}

/// Multiplicator data for the three-generator presentation at level `n`.
pub fn multiplier_report(n: usize) -> Result<MultiplierReport> {
    if !(3..=6).contains(&n) {
        return Err(Error::LevelOutOfRange { level: n, range: "3..=6".into() });
    }
    let p = Presentation::from_family(&relator_family(FamilyKind::Thm4, n)?);
    let pc = pquotient(&p, DEFAULT_MAX_CLASS)?;
    let cover = p_cover(&pc, &p)?;
    let d = p.rank();
    let schur = cover.mstar.saturating_sub(d);
    let rank = relator_images(&p, &cover)?.rank();
    let count = p.relators().len();
    Ok(MultiplierReport {
        level: n,
        log2_order: pc.log2_order(),
        h2_dim: cover.mstar,
        schur_mod2_rank: schur,
        def_lower: schur,
        def_upper: count - d,
        relator_count: count,
        relator_image_rank: rank,
        relators_independent: rank == count,
        rank_only: true,
    })
}
