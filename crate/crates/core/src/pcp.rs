//! Power-commutator presentations of finite 2-groups.
//!
//! Generators `g₀ … g_{k−1}` each have order 2 modulo later generators:
//! `gᵢ² = wᵢ` and `[g_j, gᵢ] = w_{ji}` for `j > i`, with every `w` a normal
//! word in generators of larger index. An element is its exponent vector.
//! Elements may also carry a vector of symbolic central tails of order 2,
//! used while building covers.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::word::{gen_of, is_inverse, FreeWord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Definition {
    /// Image of abstract generator `x`.
    Image(usize),
    /// `gᵢ²`.
    Power(usize),
    /// `[g_j, gᵢ]`, `j > i`.
    Comm(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PcElem {
    pub g: FixedBitSet,
    pub t: FixedBitSet,
}

impl PcElem {
    pub fn identity(k: usize, m: usize) -> Self {
        PcElem { g: FixedBitSet::with_capacity(k), t: FixedBitSet::with_capacity(m) }
    }

    pub fn is_identity(&self) -> bool {
        self.g.is_clear() && self.t.is_clear()
    }

    pub fn exponents(&self) -> Vec<u8> {
        (0..self.g.len()).map(|i| self.g[i] as u8).collect()
    }

    fn grow(&mut self, k: usize, m: usize) {
        self.g.grow(k);
        self.t.grow(m);
    }
}

#[derive(Clone, Debug)]
pub struct PcPresentation {
    k: usize,
    tails: usize,
    weights: Vec<usize>,
    defs: Vec<Definition>,
    power: Vec<PcElem>,
    /// `comm[j][i]` for `i < j`.
    comm: Vec<Vec<PcElem>>,
    images: Vec<PcElem>,
}

impl PcPresentation {
    /// Elementary abelian group of rank `k` whose generators are the images of
    /// the abstract generators `free[0], free[1], …`; `images` covers all of them.
    pub(crate) fn elementary(free: &[usize], images: Vec<PcElem>) -> Self {
        let k = free.len();
        let id = PcElem::identity(k, 0);
        PcPresentation {
            k,
            tails: 0,
            weights: vec![1; k],
            defs: free.iter().map(|&x| Definition::Image(x)).collect(),
            power: vec![id.clone(); k],
            comm: (0..k).map(|j| vec![id.clone(); j]).collect(),
            images,
        }
    }

    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        self.k == 0
    }

    /// `log₂ |G|`.
    pub fn log2_order(&self) -> usize {
        self.k
    }

    pub fn tails(&self) -> usize {
        self.tails
    }

    pub fn class(&self) -> usize {
        self.weights.iter().copied().max().unwrap_or(0)
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    pub fn definitions(&self) -> &[Definition] {
        &self.defs
    }

    pub fn abstract_rank(&self) -> usize {
        self.images.len()
    }

    pub fn power(&self, i: usize) -> &PcElem {
        &self.power[i]
    }

    pub fn comm(&self, j: usize, i: usize) -> &PcElem {
        &self.comm[j][i]
    }

    pub fn image(&self, x: usize) -> &PcElem {
        &self.images[x]
    }

    pub fn identity(&self) -> PcElem {
        PcElem::identity(self.k, self.tails)
    }

    pub fn gen(&self, i: usize) -> PcElem {
        let mut e = self.identity();
        e.g.insert(i);
        e
    }

    pub fn from_exponents(&self, bits: &[u8]) -> PcElem {
        let mut e = self.identity();
        for (i, &b) in bits.iter().enumerate() {
            e.g.set(i, b & 1 == 1);
        }
        e
    }

    /// Collection from the left: `x ← x · g_{word[0]} · g_{word[1]} ⋯`.
    pub fn collect_into(&self, x: &mut PcElem, word: &[usize]) {
        let mut stack: Vec<usize> = word.iter().rev().copied().collect();
        let mut suffix = Vec::new();
        while let Some(i) = stack.pop() {
            suffix.clear();
            suffix.extend(x.g.ones().filter(|&j| j > i));
            for &j in &suffix {
                x.g.set(j, false);
            }
            let mut pending: Vec<usize> = Vec::new();
            if x.g[i] {
                x.g.set(i, false);
                let p = &self.power[i];
                pending.extend(p.g.ones());
                x.t.symmetric_difference_with(&p.t);
            } else {
                x.g.insert(i);
            }
            for &j in &suffix {
                pending.push(j);
                let c = &self.comm[j][i];
                pending.extend(c.g.ones());
                x.t.symmetric_difference_with(&c.t);
            }
            stack.extend(pending.into_iter().rev());
        }
    }

    pub fn mul(&self, x: &PcElem, y: &PcElem) -> PcElem {
        let mut z = x.clone();
        let word: Vec<usize> = y.g.ones().collect();
        self.collect_into(&mut z, &word);
        z.t.symmetric_difference_with(&y.t);
        z
    }

    /// Product of generators, left to right.
    pub fn word(&self, gens: &[usize]) -> PcElem {
        let mut z = self.identity();
        self.collect_into(&mut z, gens);
        z
    }

    /// Multiplication by recursion on the generator being moved; used as a cross-check.
    pub fn mul_recursive(&self, x: &PcElem, y: &PcElem) -> PcElem {
        let mut z = x.clone();
        for i in y.g.ones() {
            z = self.mul_gen_recursive(&z, i);
        }
        z.t.symmetric_difference_with(&y.t);
        z
    }

    fn mul_gen_recursive(&self, x: &PcElem, i: usize) -> PcElem {
        let mut base = self.identity();
        base.t = x.t.clone();
        for j in x.g.ones().take_while(|&j| j < i) {
            base.g.insert(j);
        }
        if x.g[i] {
            base = self.mul_recursive(&base, &self.power[i]);
        } else {
            base.g.insert(i);
        }
        for j in x.g.ones().filter(|&j| j > i) {
            base = self.mul_gen_recursive(&base, j);
            base = self.mul_recursive(&base, &self.comm[j][i]);
        }
        base
    }

    pub fn inverse(&self, x: &PcElem) -> PcElem {
        let mut r = x.clone();
        let mut y = self.identity();
        while let Some(i) = r.g.minimum() {
            self.collect_into(&mut r, &[i]);
            self.collect_into(&mut y, &[i]);
        }
        y.t.symmetric_difference_with(&r.t);
        y
    }

    pub fn pow(&self, x: &PcElem, e: u64) -> PcElem {
        let mut acc = self.identity();
        let mut base = x.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn commutator(&self, x: &PcElem, y: &PcElem) -> PcElem {
        let xy = self.mul(x, y);
        let yx = self.mul(y, x);
        self.mul(&self.inverse(&yx), &xy)
    }

    pub fn order(&self, x: &PcElem) -> u64 {
        let mut o = 1;
        let mut y = x.clone();
        while !y.is_identity() {
            y = self.mul(&y, &y);
            o *= 2;
        }
        o
    }

    /// Evaluates a word in the abstract generators.
    pub fn eval_word(&self, w: &FreeWord) -> Result<PcElem> {
        let invs: Vec<PcElem> = self.images.iter().map(|e| self.inverse(e)).collect();
        let mut z = self.identity();
        for &l in w.letters() {
            let x = gen_of(l);
            let e = if is_inverse(l) { invs.get(x) } else { self.images.get(x) };
            let e = e.ok_or_else(|| Error::Invalid(format!("abstract generator {x} out of range")))?;
            z = self.mul(&z, e);
        }
        Ok(z)
    }

    /// Pairs of collected forms that agree exactly when the presentation is consistent.
    pub fn consistency_pairs(&self) -> Vec<(PcElem, PcElem)> {
        let k = self.k;
        let mut out = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                for l in j + 1..k {
                    out.push((self.word(&[l, j, i]), self.mul(&self.gen(l), &self.word(&[j, i]))));
                }
                out.push((self.word(&[j, j, i]), self.mul(&self.gen(j), &self.word(&[j, i]))));
                out.push((self.word(&[j, i, i]), self.mul(&self.gen(j), &self.power[i])));
            }
            out.push((self.word(&[i, i, i]), self.mul(&self.gen(i), &self.power[i])));
        }
        out
    }

    pub fn is_consistent(&self) -> bool {
        self.consistency_pairs().iter().all(|(a, b)| a == b)
    }

    /// All elements in exponent order; only for small groups.
    pub fn elements(&self) -> Result<Vec<PcElem>> {
        if self.k > 12 {
            return Err(Error::Resource(format!("{} pc generators", self.k)));
        }
        Ok((0..1usize << self.k)
            .map(|n| self.from_exponents(&(0..self.k).map(|i| (n >> i) as u8 & 1).collect::<Vec<_>>()))
            .collect())
    }

    /// Multiplication table indexed as in [`PcPresentation::elements`].
    pub fn multiplication_table(&self) -> Result<Vec<Vec<usize>>> {
        let els = self.elements()?;
        let index = |e: &PcElem| e.g.ones().map(|i| 1usize << i).sum::<usize>();
        Ok(els.iter().map(|x| els.iter().map(|y| index(&self.mul(x, y))).collect()).collect())
    }

    pub(crate) fn set_tails(&mut self, m: usize) {
        self.tails = m;
        let k = self.k;
        for e in self.power.iter_mut().chain(self.comm.iter_mut().flatten()).chain(self.images.iter_mut()) {
            e.grow(k, m);
        }
    }

    pub(crate) fn power_mut(&mut self, i: usize) -> &mut PcElem {
        &mut self.power[i]
    }

    pub(crate) fn comm_mut(&mut self, j: usize, i: usize) -> &mut PcElem {
        &mut self.comm[j][i]
    }

    pub(crate) fn image_mut(&mut self, x: usize) -> &mut PcElem {
        &mut self.images[x]
    }

    /// Appends central generators of order 2 with the given definitions; tails are dropped.
    pub(crate) fn append_central(&mut self, defs: &[Definition], weight: usize) {
        let k = self.k + defs.len();
        self.k = k;
        self.strip_tails();
        self.weights.extend(std::iter::repeat(weight).take(defs.len()));
        self.defs.extend_from_slice(defs);
        let id = PcElem::identity(k, 0);
        self.power.resize(k, id.clone());
        while self.comm.len() < k {
            let j = self.comm.len();
            self.comm.push(vec![id.clone(); j]);
        }
    }

    /// Drops symbolic tails and resizes `g` parts to the current rank.
    pub(crate) fn strip_tails(&mut self) {
        for e in self.power.iter_mut().chain(self.comm.iter_mut().flatten()).chain(self.images.iter_mut()) {
            e.t = FixedBitSet::with_capacity(0);
        }
        self.set_tails(0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(k: usize, on: &[usize]) -> PcElem {
        let mut e = PcElem::identity(k, 0);
        for &i in on {
            e.g.insert(i);
        }
        e
    }

    /// `C₄ = ⟨g₀, g₁ | g₀² = g₁⟩`.
    fn c4() -> PcPresentation {
        let mut p = PcPresentation::elementary(&[0], vec![bits(1, &[0])]);
        p.append_central(&[Definition::Power(0)], 2);
        *p.power_mut(0) = bits(2, &[1]);
        p
    }

    /// `D₈ = ⟨g₀, g₁, g₂ | [g₁, g₀] = g₂⟩`.
    fn d8() -> PcPresentation {
        let mut p = PcPresentation::elementary(&[0, 1], vec![bits(2, &[0]), bits(2, &[1])]);
        p.append_central(&[Definition::Comm(1, 0)], 2);
        *p.comm_mut(1, 0) = bits(3, &[2]);
        p
    }

    #[test]
    fn cyclic_four() {
        let p = c4();
        assert!(p.is_consistent());
        let g = p.gen(0);
        assert_eq!(p.order(&g), 4);
        assert_eq!(p.mul(&g, &g), p.gen(1));
        assert!(p.mul(&g, &p.inverse(&g)).is_identity());
    }

    #[test]
    fn dihedral() {
        let p = d8();
        assert!(p.is_consistent());
        let (x, y) = (p.gen(0), p.gen(1));
        assert_eq!(p.order(&p.mul(&x, &y)), 4);
        assert_eq!(p.commutator(&y, &x), p.gen(2));
        let t = p.multiplication_table().unwrap();
        assert_eq!(t.len(), 8);
        for x in p.elements().unwrap() {
            for y in p.elements().unwrap() {
                assert_eq!(p.mul(&x, &y), p.mul_recursive(&x, &y));
            }
        }
    }

    #[test]
    fn detects_inconsistency() {
        // g₀² = g₁ with g₁ not commuting with g₀ is impossible in a group of order 4.
        let mut p = c4();
        p.append_central(&[Definition::Comm(1, 0)], 3);
        *p.comm_mut(1, 0) = bits(3, &[2]);
        assert!(!p.is_consistent());
    }
}
