//! Dense permutations and a deterministic Schreier–Sims stabilizer chain.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `0..degree`, stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm { images: (0..degree as u32).collect() }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            let x = x as usize;
            if x >= images.len() || seen[x] {
                return Err(Error::Invalid("image array is not a bijection".into()));
            }
            seen[x] = true;
        }
        Ok(Perm { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        Perm { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.images[x as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm { images: other.images.iter().map(|&x| self.images[x as usize]).collect() }
    }

    /// In-place `self = self ∘ other`.
    pub fn compose_right(&mut self, other: &Perm) {
        let new: Vec<u32> = other.images.iter().map(|&x| self.images[x as usize]).collect();
        self.images = new;
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm { images: inv }
    }

    /// `[x, y] = x⁻¹ y⁻¹ x y` under composition (rightmost applied first).
    pub fn commutator(x: &Perm, y: &Perm) -> Perm {
        x.inverse().compose(&y.inverse()).compose(x).compose(y)
    }

    pub fn pow(&self, k: u64) -> Perm {
        let mut result = Perm::identity(self.degree());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.compose(&base);
            }
            base = base.compose(&base);
            k >>= 1;
        }
        result
    }

    /// Order of the permutation (lcm of cycle lengths).
    pub fn order(&self) -> BigUint {
        let mut seen = vec![false; self.degree()];
        let mut ord = BigUint::one();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            ord = num_integer::Integer::lcm(&ord, &BigUint::from(len));
        }
        ord
    }

    pub fn first_moved(&self) -> Option<u32> {
        self.images.iter().enumerate().find(|(i, &x)| *i as u32 != x).map(|(i, _)| i as u32)
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}

#[derive(Clone, Debug)]
struct Level {
    base: u32,
    /// Indices into `PermGroup::strong`.
    gens: Vec<usize>,
    orbit: Vec<u32>,
    /// `reps[x]` maps the base point to `x`; `inv_reps[x]` is its inverse.
    reps: Vec<Option<Perm>>,
    inv_reps: Vec<Option<Perm>>,
    /// Schreier generators `(orbit index, gens index)` already verified.
    checked: Vec<Vec<bool>>,
}

impl Level {
    fn new(base: u32, degree: usize) -> Self {
        let mut reps = vec![None; degree];
        let mut inv_reps = vec![None; degree];
        reps[base as usize] = Some(Perm::identity(degree));
        inv_reps[base as usize] = Some(Perm::identity(degree));
        Level { base, gens: Vec::new(), orbit: vec![base], reps, inv_reps, checked: vec![Vec::new()] }
    }

    /// Extends the orbit after generators were appended to `gens`.
    fn extend_orbit(&mut self, strong: &[Perm]) {
        let mut i = 0;
        // Old points need the new generators; new points need all of them.
        while i < self.orbit.len() {
            let x = self.orbit[i];
            for gi in 0..self.gens.len() {
                let s = &strong[self.gens[gi]];
                let y = s.apply(x);
                if self.reps[y as usize].is_none() {
                    let rep = s.compose(self.reps[x as usize].as_ref().unwrap());
                    self.inv_reps[y as usize] = Some(rep.inverse());
                    self.reps[y as usize] = Some(rep);
                    self.orbit.push(y);
                }
            }
            i += 1;
        }
        while self.checked.len() < self.orbit.len() {
            self.checked.push(Vec::new());
        }
        for row in &mut self.checked {
            row.resize(self.gens.len(), false);
        }
    }
}

/// A permutation group with a verified stabilizer chain.
///
/// Each level keeps only the generators that entered at or below it
/// (the input generators live at level 0), which keeps the number of
/// Schreier generators per level small.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    strong: Vec<Perm>,
    levels: Vec<Level>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        Self::with_base_prefix(degree, generators, &[])
    }

    /// Builds the chain with the given points as the first base points, so
    /// that the subgroup at depth `prefix.len()` is their pointwise stabilizer.
    pub fn with_base_prefix(degree: usize, generators: Vec<Perm>, prefix: &[u32]) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(degree, g.degree()));
            }
        }
        let mut grp = PermGroup { degree, generators: Vec::new(), strong: Vec::new(), levels: Vec::new() };
        for &b in prefix {
            if (b as usize) >= degree {
                return Err(Error::Invalid(format!("base point {b} out of range")));
            }
            if grp.levels.iter().any(|l| l.base == b) {
                continue;
            }
            grp.levels.push(Level::new(b, degree));
        }
        for g in generators {
            grp.add_generator(g);
        }
        Ok(grp)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn strong_generators(&self) -> &[Perm] {
        &self.strong
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// `log₂` of the order when the order is a power of two.
    pub fn log2_order(&self) -> Option<u64> {
        let o = self.order();
        let bits = o.bits();
        (o == BigUint::one() << (bits - 1)).then_some(bits - 1)
    }

    /// Generators of the stabilizer at depth `depth` of the chain (the
    /// pointwise stabilizer of the first `depth` base points).
    pub fn stabilizer_generators(&self, depth: usize) -> Vec<Perm> {
        if depth >= self.levels.len() {
            return Vec::new();
        }
        self.levels[depth].gens.iter().map(|&i| self.strong[i].clone()).collect()
    }

    /// Order of the stabilizer at the given chain depth.
    pub fn stabilizer_order(&self, depth: usize) -> BigUint {
        self.levels[depth.min(self.levels.len())..]
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Sifts `h` from level `from`; returns the residue and the level where it stopped.
    fn sift(&self, mut h: Perm, from: usize) -> (Perm, usize) {
        for (li, level) in self.levels.iter().enumerate().skip(from) {
            let pt = h.apply(level.base);
            if pt == level.base {
                continue;
            }
            match &level.inv_reps[pt as usize] {
                Some(inv) => h = inv.compose(&h),
                None => return (h, li),
            }
        }
        (h, self.levels.len())
    }

    pub fn contains(&self, p: &Perm) -> Result<bool> {
        if p.degree() != self.degree {
            return Err(Error::DegreeMismatch(self.degree, p.degree()));
        }
        let (res, _) = self.sift(p.clone(), 0);
        Ok(res.is_identity())
    }

    /// Adds a generator and restores the chain.
    pub fn add_generator(&mut self, g: Perm) {
        assert_eq!(g.degree(), self.degree);
        if g.is_identity() {
            self.generators.push(g);
            return;
        }
        self.generators.push(g.clone());
        if self.levels.is_empty() {
            self.levels.push(Level::new(g.first_moved().unwrap(), self.degree));
        }
        let idx = self.strong.len();
        self.strong.push(g);
        self.levels[0].gens.push(idx);
        self.levels[0].extend_orbit(&self.strong);
        self.complete(0);
    }

    fn insert_residue(&mut self, r: Perm, from: usize, to: usize) {
        if to == self.levels.len() {
            let b = r.first_moved().expect("nontrivial residue");
            self.levels.push(Level::new(b, self.degree));
        }
        let idx = self.strong.len();
        self.strong.push(r);
        for li in from..=to {
            self.levels[li].gens.push(idx);
            self.levels[li].extend_orbit(&self.strong);
        }
    }

    /// Verifies Schreier generators from the deepest touched level upwards to `top`.
    fn complete(&mut self, top: usize) {
        let mut i = self.levels.len() - 1;
        loop {
            let mut restarted = false;
            'scan: for oi in 0..self.levels[i].orbit.len() {
                for gi in 0..self.levels[i].gens.len() {
                    if self.levels[i].checked[oi][gi] {
                        continue;
                    }
                    self.levels[i].checked[oi][gi] = true;
                    let level = &self.levels[i];
                    let beta = level.orbit[oi];
                    let s = &self.strong[level.gens[gi]];
                    let img = s.apply(beta);
                    let u_beta = level.reps[beta as usize].as_ref().unwrap();
                    let inv_u_img = level.inv_reps[img as usize].as_ref().unwrap();
                    let h = inv_u_img.compose(&s.compose(u_beta));
                    if h.is_identity() {
                        continue;
                    }
                    let (res, j) = self.sift(h, i + 1);
                    if !res.is_identity() {
                        self.insert_residue(res, i + 1, j);
                        i = j;
                        restarted = true;
                        break 'scan;
                    }
                }
            }
            if restarted {
                continue;
            }
            if i == top {
                break;
            }
            i -= 1;
        }
    }
}

/// Evaluates a word on arbitrary generator permutations, rightmost letter acting first.
pub fn eval_word(w: &crate::word::FreeWord, gens: &[Perm]) -> Perm {
    let degree = gens[0].degree();
    let invs: Vec<Perm> = gens.iter().map(Perm::inverse).collect();
    let mut acc = Perm::identity(degree);
    for &l in w.letters() {
        let g = crate::word::gen_of(l);
        let p = if crate::word::is_inverse(l) { &invs[g] } else { &gens[g] };
        acc.compose_right(p);
    }
    acc
}

/// Normal closure of `subgens` in the group generated by `ambient`.
pub fn normal_closure(degree: usize, ambient: &[Perm], subgens: &[Perm], prefix: &[u32]) -> Result<PermGroup> {
    let mut h = PermGroup::with_base_prefix(degree, Vec::new(), prefix)?;
    let mut queue: Vec<Perm> = Vec::new();
    for s in subgens {
        if !h.contains(s)? {
            h.add_generator(s.clone());
            queue.push(s.clone());
        }
    }
    while let Some(x) = queue.pop() {
        for g in ambient {
            let c = g.inverse().compose(&x).compose(g);
            if !h.contains(&c)? {
                h.add_generator(c.clone());
                queue.push(c);
            }
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Perm {
        Perm::from_images(v.to_vec()).unwrap()
    }

    #[test]
    fn compose_and_inverse() {
        let a = p(&[1, 2, 0]);
        let b = p(&[1, 0, 2]);
        assert_eq!(a.compose(&b).images(), &[2, 1, 0]);
        assert!(a.compose(&a.inverse()).is_identity());
        assert_eq!(a.order(), BigUint::from(3u32));
        assert!(Perm::from_images(vec![0, 0]).is_err());
    }

    #[test]
    fn symmetric_group_orders() {
        for n in 2..=7usize {
            let mut cyc: Vec<u32> = (1..n as u32).collect();
            cyc.push(0);
            let mut tr: Vec<u32> = (0..n as u32).collect();
            tr.swap(0, 1);
            let g = PermGroup::new(n, vec![p(&cyc), p(&tr)]).unwrap();
            let fact: u64 = (1..=n as u64).product();
            assert_eq!(g.order(), BigUint::from(fact));
        }
    }

    #[test]
    fn alternating_membership() {
        // A_5 from (0 1 2) and (0 1 2 3 4).
        let g = PermGroup::new(5, vec![p(&[1, 2, 0, 3, 4]), p(&[1, 2, 3, 4, 0])]).unwrap();
        assert_eq!(g.order(), BigUint::from(60u32));
        assert!(g.contains(&p(&[1, 0, 3, 2, 4])).unwrap());
        assert!(!g.contains(&p(&[1, 0, 2, 3, 4])).unwrap());
        assert!(g.contains(&Perm::identity(5)).unwrap());
        assert!(g.contains(&Perm::identity(4)).is_err());
    }

    #[test]
    fn base_prefix_gives_pointwise_stabilizer() {
        let mut cyc: Vec<u32> = (1..6).collect();
        cyc.push(0);
        let tr = p(&[1, 0, 2, 3, 4, 5]);
        let g = PermGroup::with_base_prefix(6, vec![p(&cyc), tr], &[4, 5]).unwrap();
        assert_eq!(g.order(), BigUint::from(720u32));
        assert_eq!(g.stabilizer_order(2), BigUint::from(24u32));
        for s in g.stabilizer_generators(2) {
            assert_eq!(s.apply(4), 4);
            assert_eq!(s.apply(5), 5);
        }
    }

    #[test]
    fn normal_closure_of_transposition() {
        let mut cyc: Vec<u32> = (1..5).collect();
        cyc.push(0);
        let gens = vec![p(&cyc), p(&[1, 0, 2, 3, 4])];
        let n = normal_closure(5, &gens, &[p(&[1, 2, 0, 3, 4])], &[]).unwrap();
        assert_eq!(n.order(), BigUint::from(60u32));
    }
}
