//! The abelian group `F′ / γ₅(F) F″` for `F` free on `a, b, c, d`, and its
//! quotients `Qₙ = F′ / [Kₙ, F] γ₅(F) F″`.
//!
//! Coordinates come from the truncated Magnus series `x ↦ 1 + X`: for
//! `g ∈ F′` with `μ(g) = 1 + m`, the truncated logarithm doubled,
//! `2ℓ(g) = 2m − m₂²`, is additive modulo the span `D` of the degree-4 Lie
//! elements `[[x,y],[z,w]]`. The basis is the left-normed commutators
//! `[x₁, x₂, …, xₖ]` with `x₁ < x₂ ≥ x₃ ≥ … ≥ xₖ` (`a < b < c < d`), ordered
//! by weight and then lexicographically; the sizes are 4, 6, 20, 45.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{relator_family, FamilyKind};
use crate::linalg::{snf, IntMatrix};
use crate::word::{gen_of, is_inverse, Alphabet, FreeWord};

const RANK: usize = 4;
const MAX_DEG: usize = 4;
const OFFSET: [usize; 6] = [0, 1, 5, 21, 85, 341];
const POLY_LEN: usize = 341;

/// Number of basis commutators of weight 2, 3, 4.
pub const DIM: usize = 71;

/// Truncated element of the free associative algebra over ℤ.
#[derive(Clone, PartialEq, Eq)]
struct Poly(Vec<i128>);

impl Poly {
    fn zero() -> Self {
        Poly(vec![0; POLY_LEN])
    }

    fn one() -> Self {
        let mut p = Poly::zero();
        p.0[0] = 1;
        p
    }

    fn generator(x: usize) -> Self {
        let mut p = Poly::zero();
        p.0[OFFSET[1] + x] = 1;
        p
    }

    fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for i in 0..=MAX_DEG {
            for j in 0..=MAX_DEG - i {
                let wj = 1usize << (2 * j);
                for (ia, &ca) in self.0[OFFSET[i]..OFFSET[i + 1]].iter().enumerate() {
                    if ca == 0 {
                        continue;
                    }
                    for (ib, &cb) in other.0[OFFSET[j]..OFFSET[j + 1]].iter().enumerate() {
                        if cb != 0 {
                            out.0[OFFSET[i + j] + ia * wj + ib] += ca * cb;
                        }
                    }
                }
            }
        }
        out
    }

    /// `self · (1 + X)` or `self · (1 + X)⁻¹`.
    fn mul_letter(&mut self, x: usize, inverse: bool) {
        if !inverse {
            for d in (0..MAX_DEG).rev() {
                for i in 0..OFFSET[d + 1] - OFFSET[d] {
                    let c = self.0[OFFSET[d] + i];
                    if c != 0 {
                        self.0[OFFSET[d + 1] + i * RANK + x] += c;
                    }
                }
            }
        } else {
            // (1 + X)⁻¹ = Σ (−X)^k; fold one degree at a time: q ← p − q·X from the top.
            for d in 1..=MAX_DEG {
                // new[d] = p[d] − new[d−1]·X
                for i in 0..OFFSET[d] - OFFSET[d - 1] {
                    let c = self.0[OFFSET[d - 1] + i];
                    if c != 0 {
                        self.0[OFFSET[d] + i * RANK + x] -= c;
                    }
                }
            }
        }
    }

    fn sub(&self, other: &Poly) -> Poly {
        Poly(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    fn scale(&self, k: i128) -> Poly {
        Poly(self.0.iter().map(|a| a * k).collect())
    }

    fn bracket(&self, other: &Poly) -> Poly {
        self.mul(other).sub(&other.mul(self))
    }

    fn degree_part(&self, d: usize) -> &[i128] {
        &self.0[OFFSET[d]..OFFSET[d + 1]]
    }
}

fn magnus(w: &FreeWord) -> Poly {
    let mut p = Poly::one();
    for &l in w.letters() {
        p.mul_letter(gen_of(l), is_inverse(l));
    }
    p
}

fn check_abcd(w: &FreeWord) -> Result<()> {
    if !w.alphabet().embeds_in(Alphabet::Abcd) {
        return Err(Error::AlphabetMismatch { expected: "abcd".into(), found: w.alphabet().name() });
    }
    Ok(())
}

fn in_derived(w: &FreeWord) -> Result<()> {
    check_abcd(w)?;
    let sums = w.exponent_sums();
    if sums.iter().any(|&s| s != 0) {
        return Err(Error::NotInDerived(sums));
    }
    Ok(())
}

/// `2ℓ(g) = 2(μ(g) − 1) − (μ(g) − 1)²`, truncated; requires `g ∈ F′`.
fn two_log(w: &FreeWord) -> Result<Poly> {
    in_derived(w)?;
    let mut m = magnus(w);
    m.0[0] -= 1;
    debug_assert!(m.degree_part(1).iter().all(|&c| c == 0));
    Ok(m.scale(2).sub(&m.mul(&m)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisCommutator {
    /// Letter ids, `a = 0`.
    pub letters: Vec<usize>,
}

impl BasisCommutator {
    pub fn weight(&self) -> usize {
        self.letters.len()
    }

    pub fn word(&self) -> FreeWord {
        left_normed(&self.letters)
    }

    pub fn name(&self) -> String {
        let s: Vec<String> = self.letters.iter().map(|&x| ((b'a' + x as u8) as char).to_string()).collect();
        if s.len() == 1 {
            s[0].clone()
        } else {
            format!("[{}]", s.join(","))
        }
    }
}

/// Left-normed group commutator `[x₁, …, xₖ]` with `[x, y] = x⁻¹y⁻¹xy`.
pub fn left_normed(letters: &[usize]) -> FreeWord {
    let gen = |x: usize| FreeWord::generator(Alphabet::Abcd, x);
    let mut w = gen(letters[0]);
    for &x in &letters[1..] {
        w = FreeWord::commutator(&w, &gen(x));
    }
    w
}

/// Parses `"[a,b,c]"` or `"a"` into a left-normed commutator.
pub fn parse_commutator(s: &str) -> Result<FreeWord> {
    let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
    let letters: Vec<usize> = inner
        .split(',')
        .map(|t| match t.trim().as_bytes() {
            [c @ b'a'..=b'd'] => Ok((c - b'a') as usize),
            _ => Err(Error::Parse { pos: 0, msg: format!("commutator entry {t:?}") }),
        })
        .collect::<Result<_>>()?;
    Ok(left_normed(&letters))
}

/// The ordered basis of weights 1 to 4.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HallBasis {
    pub elements: Vec<BasisCommutator>,
}

impl HallBasis {
    pub fn new() -> Self {
        let mut elements: Vec<BasisCommutator> = (0..RANK).map(|x| BasisCommutator { letters: vec![x] }).collect();
        for k in 2..=MAX_DEG {
            let mut cur = Vec::new();
            let mut stack: Vec<Vec<usize>> = (0..RANK).map(|x| vec![x]).collect();
            while let Some(seq) = stack.pop() {
                if seq.len() == k {
                    cur.push(seq);
                    continue;
                }
                for x in 0..RANK {
                    let ok = match seq.len() {
                        1 => seq[0] < x,
                        _ => *seq.last().unwrap() >= x,
                    };
                    if ok {
                        let mut s = seq.clone();
                        s.push(x);
                        stack.push(s);
                    }
                }
            }
            cur.sort();
            elements.extend(cur.into_iter().map(|letters| BasisCommutator { letters }));
        }
        HallBasis { elements }
    }

    pub fn weight_sizes(&self) -> [usize; 4] {
        let mut s = [0; 4];
        for e in &self.elements {
            s[e.weight() - 1] += 1;
        }
        s
    }

    /// Elements of weight ≥ 2, indexed by coordinate.
    pub fn derived(&self) -> &[BasisCommutator] {
        &self.elements[RANK..]
    }

    pub fn index_of(&self, letters: &[usize]) -> Option<usize> {
        self.derived().iter().position(|e| e.letters == letters)
    }
}

impl Default for HallBasis {
    fn default() -> Self {
        HallBasis::new()
    }
}

/// Linear solve for one degree: `cols` restricted to `rows` is invertible.
struct DegreeSolver {
    degree: usize,
    /// Basis vectors first, then extra spanning vectors whose coefficients are discarded.
    cols: Vec<Vec<i128>>,
    n_basis: usize,
    rows: Vec<usize>,
    inv: Vec<Vec<BigInt>>,
    den: BigInt,
}

impl DegreeSolver {
    fn new(degree: usize, cols: Vec<Vec<i128>>, n_basis: usize) -> Result<Self> {
        let n = cols.len();
        let len = cols[0].len();
        // Pick independent rows by elimination on the transpose.
        let mut m: Vec<Vec<BigRational>> =
            (0..n).map(|j| cols[j].iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
        let mut rows = Vec::new();
        let mut r = 0;
        for c in 0..len {
            let Some(p) = (r..n).find(|&i| !m[i][c].is_zero()) else { continue };
            m.swap(r, p);
            let piv = m[r][c].clone();
            for i in r + 1..n {
                if !m[i][c].is_zero() {
                    let f = &m[i][c] / &piv;
                    for k in c..len {
                        let v = &m[r][k] * &f;
                        m[i][k] -= v;
                    }
                }
            }
            rows.push(c);
            r += 1;
            if r == n {
                break;
            }
        }
        if rows.len() < n {
            return Err(Error::Inconsistent(format!("degree {degree}: spanning vectors are dependent")));
        }
        // Invert S[i][j] = cols[j][rows[i]].
        let mut a: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|&ri| {
                let mut row: Vec<BigRational> = (0..n).map(|j| BigRational::from_integer(cols[j][ri].into())).collect();
                row.extend((0..n).map(|k| if k == ri_index(&rows, ri) { BigRational::one() } else { BigRational::zero() }));
                row
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&i| !a[i][c].is_zero()).expect("invertible");
            a.swap(c, p);
            let piv = a[c][c].clone();
            for k in 0..2 * n {
                let v = &a[c][k] / &piv;
                a[c][k] = v;
            }
            for i in 0..n {
                if i != c && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for k in 0..2 * n {
                        let v = &a[c][k] * &f;
                        a[i][k] -= v;
                    }
                }
            }
        }
        let inv_rat: Vec<Vec<BigRational>> = a.into_iter().map(|row| row[n..].to_vec()).collect();
        let den = inv_rat.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let inv = inv_rat.iter().map(|row| row.iter().map(|x| (x * &den).to_integer()).collect()).collect();
        Ok(DegreeSolver { degree, cols, n_basis, rows, inv, den })
    }

    /// Integer coefficients of the basis part of `t`, verified over all rows.
    fn solve(&self, t: &[i128]) -> Result<Vec<i128>> {
        let n = self.cols.len();
        let rhs: Vec<BigInt> = self.rows.iter().map(|&r| BigInt::from(t[r])).collect();
        let y: Vec<BigInt> = (0..n).map(|j| self.inv[j].iter().zip(&rhs).map(|(a, b)| a * b).sum()).collect();
        for (row, &target) in t.iter().enumerate() {
            let s: BigInt = (0..n).map(|j| &y[j] * self.cols[j][row]).sum();
            if s != BigInt::from(target) * &self.den {
                return Err(Error::Inconsistent(format!("degree {} residue outside the span", self.degree)));
            }
        }
        y[..self.n_basis]
            .iter()
            .map(|v| {
                let (q, r) = v.div_rem(&self.den);
                if !r.is_zero() {
                    return Err(Error::Inconsistent(format!("non-integral coordinate in degree {}", self.degree)));
                }
                q.to_i128().ok_or_else(|| Error::Resource("coordinate overflow".into()))
            })
            .collect()
    }
}

fn ri_index(rows: &[usize], r: usize) -> usize {
    rows.iter().position(|&x| x == r).unwrap()
}

/// Coordinates in `F′ / γ₅(F) F″ ≅ ℤ⁷¹`.
pub struct Collector {
    basis: HallBasis,
    images: Vec<Poly>,
    solvers: Vec<DegreeSolver>,
    /// `ad[x][j]`: coordinates of `[c_j, x]`.
    ad: Vec<Vec<Vec<i128>>>,
}

impl Collector {
    pub fn new() -> Result<Self> {
        let basis = HallBasis::new();
        let images: Vec<Poly> = basis.derived().iter().map(|e| two_log(&e.word())).collect::<Result<_>>()?;
        let mut solvers = Vec::new();
        for k in 2..=MAX_DEG {
            let idx: Vec<usize> = (0..DIM).filter(|&j| basis.derived()[j].weight() == k).collect();
            let mut cols: Vec<Vec<i128>> = idx.iter().map(|&j| images[j].degree_part(k).to_vec()).collect();
            let n_basis = cols.len();
            if k == 4 {
                let pairs: Vec<Poly> = (0..RANK)
                    .flat_map(|x| (x + 1..RANK).map(move |y| (x, y)))
                    .map(|(x, y)| Poly::generator(x).bracket(&Poly::generator(y)))
                    .collect();
                for i in 0..pairs.len() {
                    for j in i + 1..pairs.len() {
                        cols.push(pairs[i].bracket(&pairs[j]).degree_part(4).to_vec());
                    }
                }
            }
            solvers.push(DegreeSolver::new(k, cols, n_basis)?);
        }
        let mut c = Collector { basis, images, solvers, ad: Vec::new() };
        let mut ad = Vec::new();
        for x in 0..RANK {
            let gx = FreeWord::generator(Alphabet::Abcd, x);
            let cols = (0..DIM)
                .map(|j| c.coords(&FreeWord::commutator(&c.basis.derived()[j].word(), &gx)))
                .collect::<Result<Vec<_>>>()?;
            ad.push(cols);
        }
        c.ad = ad;
        Ok(c)
    }

    pub fn basis(&self) -> &HallBasis {
        &self.basis
    }

    /// Coordinates of `w ∈ F′`.
    pub fn coords(&self, w: &FreeWord) -> Result<Vec<i128>> {
        let mut t = two_log(w)?;
        let mut out = vec![0i128; DIM];
        let mut j0 = 0;
        for solver in &self.solvers {
            let k = solver.degree;
            let x = solver.solve(t.degree_part(k))?;
            for (i, &xi) in x.iter().enumerate() {
                out[j0 + i] = xi;
                if xi != 0 && k < MAX_DEG {
                    t = t.sub(&self.images[j0 + i].scale(xi));
                }
            }
            j0 += x.len();
        }
        Ok(out)
    }

    /// `v ↦ [v, x]` on coordinates.
    pub fn ad(&self, x: usize, v: &[i128]) -> Vec<i128> {
        let mut out = vec![0i128; DIM];
        for (j, &c) in v.iter().enumerate() {
            if c != 0 {
                for (o, &a) in out.iter_mut().zip(&self.ad[x][j]) {
                    *o += c * a;
                }
            }
        }
        out
    }

    /// A word with the given coordinates: `Π c_j^{v_j}` in basis order.
    pub fn word_of(&self, v: &[i128]) -> FreeWord {
        let mut w = FreeWord::empty(Alphabet::Abcd);
        for (j, &c) in v.iter().enumerate() {
            if c != 0 {
                w = w.mul(&self.basis.derived()[j].word().pow(c as i64));
            }
        }
        w
    }

    pub fn collect(&self, w: &FreeWord) -> Result<NilElement> {
        check_abcd(w)?;
        let sums = w.exponent_sums();
        let mut head = FreeWord::empty(Alphabet::Abcd);
        for (x, &e) in sums.iter().enumerate() {
            head = head.mul(&FreeWord::generator(Alphabet::Abcd, x).pow(e));
        }
        let tail = head.inverse().mul(w);
        Ok(NilElement { abelian: [sums[0], sums[1], sums[2], sums[3]], coords: self.coords(&tail)? })
    }

    pub fn element_word(&self, e: &NilElement) -> FreeWord {
        let mut head = FreeWord::empty(Alphabet::Abcd);
        for (x, &k) in e.abelian.iter().enumerate() {
            head = head.mul(&FreeWord::generator(Alphabet::Abcd, x).pow(k));
        }
        head.mul(&self.word_of(&e.coords))
    }

    pub fn multiply(&self, x: &NilElement, y: &NilElement) -> Result<NilElement> {
        self.collect(&self.element_word(x).concat(&self.element_word(y)))
    }

    pub fn invert(&self, x: &NilElement) -> Result<NilElement> {
        self.collect(&self.element_word(x).inverse())
    }
}

/// Normal form `a^α b^β c^γ d^δ · Π c_j^{v_j}` in `F / γ₅(F) F″`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NilElement {
    pub abelian: [i64; 4],
    pub coords: Vec<i128>,
}

impl NilElement {
    pub fn is_identity(&self) -> bool {
        self.abelian == [0; 4] && self.coords.iter().all(|&c| c == 0)
    }
}

const FOX_MONOS: usize = 35;

/// Abelianized Fox derivatives of `w ∈ F′`, truncated modulo the fourth power of the augmentation ideal.
///
/// Written in `yᵢ = tᵢ − 1`, degree ≤ 3, for each of the four derivatives.
pub fn fox_vector(w: &FreeWord) -> Result<Vec<i128>> {
    in_derived(w)?;
    let monos = fox_monomials();
    let index: HashMap<[u8; 4], usize> = monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut out = vec![0i128; RANK * FOX_MONOS];
    let mut prefix = [0i64; 4];
    let mut add = |x: usize, e: [i64; 4], sign: i128| {
        for (m, &mono) in monos.iter().enumerate() {
            let c: i128 = (0..RANK).map(|i| binom(e[i], mono[i] as i64)).product();
            if c != 0 {
                out[x * FOX_MONOS + m] += sign * c;
            }
        }
        let _ = &index;
    };
    for &l in w.letters() {
        let x = gen_of(l);
        if is_inverse(l) {
            prefix[x] -= 1;
            add(x, prefix, -1);
        } else {
            add(x, prefix, 1);
            prefix[x] += 1;
        }
    }
    Ok(out)
}

fn fox_monomials() -> Vec<[u8; 4]> {
    let mut v = Vec::new();
    for a in 0..=3u8 {
        for b in 0..=3 - a {
            for c in 0..=3 - a - b {
                for d in 0..=3 - a - b - c {
                    v.push([a, b, c, d]);
                }
            }
        }
    }
    v
}

/// Generalized binomial `C(e, k)` for integer `e`.
fn binom(e: i64, k: i64) -> i128 {
    let mut num = 1i128;
    let mut den = 1i128;
    for i in 0..k {
        num *= (e - i) as i128;
        den *= (i + 1) as i128;
    }
    num / den
}

/// Integer lattice in Hermite form, rows with strictly increasing pivots.
#[derive(Clone, Debug, Default)]
pub struct Lattice {
    dim: usize,
    rows: Vec<Vec<BigInt>>,
}

impl Lattice {
    pub fn new(dim: usize) -> Self {
        Lattice { dim, rows: Vec::new() }
    }

    fn pivot(r: &[BigInt]) -> usize {
        r.iter().position(|x| !x.is_zero()).unwrap()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    /// Adds `v` to the spanning set; returns whether the lattice grew.
    pub fn insert(&mut self, v: &[BigInt]) -> bool {
        let mut v = v.to_vec();
        let mut changed = false;
        let mut i = 0;
        while i < self.rows.len() {
            let p = Lattice::pivot(&self.rows[i]);
            if let Some(vp) = v.iter().position(|x| !x.is_zero()) {
                if vp < p {
                    self.rows.insert(i, v);
                    self.reduce_above(i);
                    return true;
                }
                if vp == p {
                    let a = self.rows[i][p].clone();
                    let b = v[p].clone();
                    if b.is_multiple_of(&a) {
                        let q = &b / &a;
                        for k in p..self.dim {
                            let t = &self.rows[i][k] * &q;
                            v[k] -= t;
                        }
                    } else {
                        let e = a.extended_gcd(&b);
                        let (ag, bg) = (&a / &e.gcd, &b / &e.gcd);
                        let r = self.rows[i].clone();
                        for k in p..self.dim {
                            self.rows[i][k] = &e.x * &r[k] + &e.y * &v[k];
                            v[k] = &ag * &v[k] - &bg * &r[k];
                        }
                        if self.rows[i][p].is_negative() {
                            for x in self.rows[i].iter_mut() {
                                *x = -x.clone();
                            }
                        }
                        changed = true;
                        self.reduce_above(i);
                    }
                }
            } else {
                return changed;
            }
            i += 1;
        }
        if v.iter().any(|x| !x.is_zero()) {
            if v[Lattice::pivot(&v)].is_negative() {
                for x in v.iter_mut() {
                    *x = -x.clone();
                }
            }
            self.rows.push(v);
            let n = self.rows.len() - 1;
            self.reduce_above(n);
            return true;
        }
        changed
    }

    /// Reduces entries above the pivot of row `i` and reduces row `i` by later pivots.
    fn reduce_above(&mut self, i: usize) {
        for j in i + 1..self.rows.len() {
            let p = Lattice::pivot(&self.rows[j]);
            let q = self.rows[i][p].div_floor(&self.rows[j][p]);
            if !q.is_zero() {
                for k in p..self.dim {
                    let t = &self.rows[j][k] * &q;
                    self.rows[i][k] -= t;
                }
            }
        }
        let p = Lattice::pivot(&self.rows[i]);
        for j in 0..i {
            let q = self.rows[j][p].div_floor(&self.rows[i][p]);
            if !q.is_zero() {
                for k in p..self.dim {
                    let t = &self.rows[i][k] * &q;
                    self.rows[j][k] -= t;
                }
            }
        }
    }

    /// Rational coefficients of `v` in the basis, if `v` is in the rational span.
    fn solve(&self, v: &[BigInt]) -> Option<Vec<BigRational>> {
        let mut res: Vec<BigRational> = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        let mut y = Vec::with_capacity(self.rows.len());
        for r in &self.rows {
            let p = Lattice::pivot(r);
            let c = &res[p] / BigRational::from_integer(r[p].clone());
            for k in p..self.dim {
                let t = &c * BigRational::from_integer(r[k].clone());
                res[k] -= t;
            }
            y.push(c);
        }
        res.iter().all(Zero::is_zero).then_some(y)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.solve(v).is_some_and(|y| y.iter().all(|c| c.is_integer()))
    }

    /// Least `m > 0` with `m·v` in the lattice, if any.
    pub fn order_of(&self, v: &[BigInt]) -> Option<BigInt> {
        self.solve(v).map(|y| y.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom())))
    }

    /// Index in `ℤ^dim` (full rank only).
    pub fn index(&self) -> Option<BigInt> {
        (self.rank() == self.dim).then(|| self.rows.iter().enumerate().map(|(i, r)| r[i].abs()).product())
    }
}

fn to_big(v: &[i128]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// `Qₙ` as `ℤ⁷¹` modulo the module generated by the images of `[r, x]`.
pub struct QnGroup {
    pub level: usize,
    collector: Collector,
    relations: Lattice,
    invariants: Vec<BigInt>,
    /// `U·H·V = D` for the relation basis `H`; coordinates are `v·V mod dᵢ`.
    v_transform: IntMatrix,
    /// Number of closure rounds until the lattice stopped growing.
    pub closure_rounds: usize,
}

/// Coordinates of an element of `Qₙ` against the nontrivial invariant factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QnCoords {
    pub values: Vec<BigInt>,
    pub moduli: Vec<BigInt>,
}

impl QnCoords {
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }
}

impl QnGroup {
    pub fn collector(&self) -> &Collector {
        &self.collector
    }

    pub fn relations(&self) -> &Lattice {
        &self.relations
    }

    /// Invariant factors other than 1.
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariants
    }

    pub fn log2_order(&self) -> u64 {
        self.invariants.iter().map(|d| d.bits() - 1).sum()
    }

    pub fn coords_of(&self, w: &FreeWord) -> Result<Vec<BigInt>> {
        Ok(to_big(&self.collector.coords(w)?))
    }

    pub fn image(&self, w: &FreeWord) -> Result<QnCoords> {
        let v = self.coords_of(w)?;
        Ok(self.reduce(&v))
    }

    fn reduce(&self, v: &[BigInt]) -> QnCoords {
        let n = DIM;
        let first = n - self.invariants.len();
        let mut values = Vec::new();
        for i in first..n {
            let s: BigInt = (0..n).map(|k| &v[k] * &self.v_transform[(k, i)]).sum();
            values.push(s.mod_floor(&self.invariants[i - first]));
        }
        QnCoords { values, moduli: self.invariants.clone() }
    }

    pub fn equal(&self, x: &FreeWord, y: &FreeWord) -> Result<bool> {
        let a = self.coords_of(x)?;
        let b = self.coords_of(y)?;
        let d: Vec<BigInt> = a.iter().zip(&b).map(|(p, q)| p - q).collect();
        Ok(self.relations.contains(&d))
    }

    pub fn is_trivial(&self, w: &FreeWord) -> Result<bool> {
        Ok(self.relations.contains(&self.coords_of(w)?))
    }

    pub fn order_of(&self, w: &FreeWord) -> Result<BigInt> {
        let v = self.coords_of(w)?;
        self.relations.order_of(&v).ok_or_else(|| Error::Inconsistent("relation lattice is not of full rank".into()))
    }

    /// `log₂ [S + Λ : 2S + Λ]` for `S` spanned by the images of `words`.
    pub fn rank_of(&self, words: &[FreeWord]) -> Result<u64> {
        let mut with_s = self.relations.clone();
        let mut with_2s = self.relations.clone();
        let two = BigInt::from(2);
        for w in words {
            let v = self.coords_of(w)?;
            with_s.insert(&v);
            with_2s.insert(&v.iter().map(|x| x * &two).collect::<Vec<_>>());
        }
        let (a, b) = (with_s.index().unwrap(), with_2s.index().unwrap());
        let ratio = &b / &a;
        assert!((&ratio * &a == b) && (ratio.clone() & (&ratio - 1u32)).is_zero(), "index ratio is a power of two");
        Ok(ratio.bits() - 1)
    }

    /// Whether commuting every relation with every generator stays inside the lattice.
    pub fn saturation_holds(&self) -> bool {
        self.relations.basis().iter().all(|r| {
            let v: Vec<i128> = r.iter().map(|x| x.to_i128().expect("small relation entries")).collect();
            (0..RANK).all(|x| self.relations.contains(&to_big(&self.collector.ad(x, &v))))
        })
    }
}

/// Builds `Qₙ` from the capital relators of level `n`.
pub fn qn_build(n: usize) -> Result<QnGroup> {
    qn_build_with(Collector::new()?, n)
}

pub fn qn_build_with(collector: Collector, n: usize) -> Result<QnGroup> {
    let fam = relator_family(FamilyKind::Hopf, n)?;
    qn_from_relators(collector, n, &fam.plain_words())
}

/// `F′ / [⟨⟨R⟩⟩, F] γ₅(F) F″` for arbitrary normal generators `R`.
pub fn qn_from_relators(collector: Collector, level: usize, relators: &[FreeWord]) -> Result<QnGroup> {
    let mut lattice = Lattice::new(DIM);
    for r in relators {
        for x in 0..RANK {
            let gx = FreeWord::generator(Alphabet::Abcd, x);
            lattice.insert(&to_big(&collector.coords(&FreeWord::commutator(r, &gx))?));
        }
    }
    let mut rounds = 0;
    loop {
        rounds += 1;
        let basis: Vec<Vec<i128>> = lattice
            .basis()
            .iter()
            .map(|r| r.iter().map(|x| x.to_i128().expect("small relation entries")).collect())
            .collect();
        let mut grew = false;
        for v in &basis {
            for x in 0..RANK {
                grew |= lattice.insert(&to_big(&collector.ad(x, v)));
            }
        }
        if !grew {
            break;
        }
    }
    if lattice.rank() != DIM {
        return Err(Error::Inconsistent(format!("quotient is infinite: relation rank {}", lattice.rank())));
    }
    let rows: Vec<Vec<BigInt>> = lattice.basis().to_vec();
    let s = snf(&IntMatrix::from_big_rows(rows));
    let invariants: Vec<BigInt> = s.diagonal().into_iter().filter(|d| !d.is_one()).collect();
    Ok(QnGroup { level, collector, relations: lattice, invariants, v_transform: s.v, closure_rounds: rounds })
}

/// `L, U₀, W₃, T₃` at level 3 and `L, U₀, U₁, V₀` above.
pub fn independence_labels(n: usize) -> [&'static str; 4] {
    if n == 3 {
        ["L", "U_0", "W_3", "T_3"]
    } else {
        ["L", "U_0", "U_1", "V_0"]
    }
}

/// The images listed for those relators, as words in commutators.
pub fn listed_images(n: usize) -> Vec<FreeWord> {
    let c = |s: &str| parse_commutator(s).unwrap();
    if n == 3 {
        vec![c("[b,c]"), c("[a,d]").pow(2), c("[a,c]").pow(2), c("[a,b,c]").pow(-2)]
    } else {
        vec![c("[b,c]"), c("[a,d]").pow(2), c("[a,c]").pow(4), c("[a,d]").pow(2).mul(&c("[a,c,d]").pow(2))]
    }
}

/// Orders of the listed generators according to the stated presentation.
pub fn listed_orders(n: usize) -> Vec<(&'static str, u32)> {
    let (w2, w3): ([u32; 4], [u32; 6]) = if n == 3 { ([8, 4, 4, 2], [4, 4, 2, 2, 2, 2]) } else { ([16, 8, 4, 2], [8, 8, 4, 4, 2, 2]) };
    let names2 = ["[a,b]", "[a,c]", "[a,d]", "[b,c]"];
    let names3 = ["[a,b,c]", "[a,b,d]", "[a,c,b]", "[a,c,d]", "[a,d,b]", "[a,d,c]"];
    names2.into_iter().zip(w2).chain(names3.into_iter().zip(w3)).collect()
}

/// Qₙ structure together with the checks against the stated values.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QnReport {
    pub level: usize,
    pub invariant_factors: Vec<BigInt>,
    pub log2_order: u64,
    pub closure_rounds: usize,
    pub saturation: bool,
    /// `(label, image matches the listed value)`.
    pub images: Vec<(String, bool)>,
    pub joint_rank: u64,
    /// `(generator, listed order, computed order)`.
    pub orders: Vec<(String, u32, BigInt)>,
}

impl QnReport {
    pub fn images_match(&self) -> bool {
        self.images.iter().all(|(_, ok)| *ok)
    }

    pub fn order_mismatches(&self) -> Vec<&(String, u32, BigInt)> {
        self.orders.iter().filter(|(_, want, got)| BigInt::from(*want) != *got).collect()
    }
}

pub fn qn_report(q: &QnGroup) -> Result<QnReport> {
    let n = q.level;
    let fam = relator_family(FamilyKind::Hopf, n)?;
    let labels = independence_labels(n);
    let words: Vec<FreeWord> = labels.iter().map(|l| fam.get(l).expect("label in family").clone()).collect();
    let listed = listed_images(n);
    let mut images = Vec::new();
    for ((l, w), want) in labels.iter().zip(&words).zip(&listed) {
        images.push((l.to_string(), q.equal(w, want)?));
    }
    let joint_rank = q.rank_of(&words)?;
    let mut orders = Vec::new();
    for (name, want) in listed_orders(n) {
        orders.push((name.to_string(), want, q.order_of(&parse_commutator(name)?)?));
    }
    Ok(QnReport {
        level: n,
        invariant_factors: q.invariant_factors().to_vec(),
        log2_order: q.log2_order(),
        closure_rounds: q.closure_rounds,
        saturation: q.saturation_holds(),
        images,
        joint_rank,
        orders,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> FreeWord {
        FreeWord::parse(Alphabet::Abcd, s).unwrap()
    }

    #[test]
    fn basis_sizes() {
        let b = HallBasis::new();
        assert_eq!(b.weight_sizes(), [4, 6, 20, 45]);
        assert_eq!(b.derived().len(), DIM);
        assert_eq!(b.derived()[0].name(), "[a,b]");
    }

    #[test]
    fn magnus_inverse() {
        let x = w("abCdA");
        let p = magnus(&x).mul(&magnus(&x.inverse()));
        assert!(p == Poly::one());
    }

    #[test]
    fn basis_elements_are_unit_vectors() {
        let c = Collector::new().unwrap();
        for (j, e) in c.basis().derived().iter().enumerate() {
            let v = c.coords(&e.word()).unwrap();
            for (k, &x) in v.iter().enumerate() {
                assert_eq!(x, (j == k) as i128, "{} at {k}", e.name());
            }
        }
        let ab = c.coords(&parse_commutator("[b,a]").unwrap()).unwrap();
        assert_eq!(ab[0], -1);
        assert!(ab[1..].iter().all(|&x| x == 0));
    }

    #[test]
    fn derived_only() {
        let c = Collector::new().unwrap();
        assert!(matches!(c.coords(&w("ab")), Err(Error::NotInDerived(_))));
    }

    #[test]
    fn fox_matches_on_basis() {
        let c = Collector::new().unwrap();
        let x = w("(ad)^4a^-4d^-4");
        let v = c.coords(&x).unwrap();
        assert_eq!(fox_vector(&x).unwrap(), fox_vector(&c.word_of(&v)).unwrap());
    }

    #[test]
    fn lattice_basics() {
        let b = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let mut l = Lattice::new(2);
        l.insert(&b(&[2, 0]));
        l.insert(&b(&[0, 4]));
        l.insert(&b(&[1, 2]));
        assert_eq!(l.index(), Some(BigInt::from(4)));
        assert!(l.contains(&b(&[3, 2])));
        assert!(!l.contains(&b(&[1, 0])));
        assert_eq!(l.order_of(&b(&[1, 0])), Some(BigInt::from(2)));
        assert_eq!(l.order_of(&b(&[0, 1])), Some(BigInt::from(4)));
    }
}
