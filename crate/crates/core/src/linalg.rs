//! Exact integer Smith normal form and linear algebra over F₂.

use std::fmt;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::presentation::Presentation;

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend(row.iter().map(|&x| x.into()));
        }
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend(row);
        }
        IntMatrix { rows: r, cols: c, data }
    }

    /// Empty-row matrix with a known column count.
    pub fn from_rows_with_cols<T: Into<BigInt> + Copy>(rows: &[Vec<T>], cols: usize) -> Self {
        if rows.is_empty() {
            return IntMatrix::zeros(0, cols);
        }
        IntMatrix::from_rows(rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Determinant by fraction-free elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        m.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        if n == 0 {
            return BigInt::one();
        }
        sign * &m[(n - 1, n - 1)]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += q · row[src]`.
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * q;
            self[(dst, j)] += v;
        }
    }

    /// `(row a, row b) ← (m₀·a + m₁·b, m₂·a + m₃·b)`.
    fn combine_rows(&mut self, a: usize, b: usize, m: &[BigInt; 4]) {
        for j in 0..self.cols {
            let (x, y) = (self[(a, j)].clone(), self[(b, j)].clone());
            self[(a, j)] = &m[0] * &x + &m[1] * &y;
            self[(b, j)] = &m[2] * &x + &m[3] * &y;
        }
    }

    fn combine_cols(&mut self, a: usize, b: usize, m: &[BigInt; 4]) {
        for i in 0..self.rows {
            let (x, y) = (self[(i, a)].clone(), self[(i, b)].clone());
            self[(i, a)] = &m[0] * &x + &m[1] * &y;
            self[(i, b)] = &m[2] * &x + &m[3] * &y;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self[(r, j)];
            self[(r, j)] = v;
        }
    }

    pub fn to_f2(&self) -> F2Matrix {
        let mut m = F2Matrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self[(i, j)].is_odd() {
                    m.set(i, j, true);
                }
            }
        }
        m
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SnfResult {
    /// `U · A · V = D`.
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Diagonal entries `d₁ | d₂ | …`, `min(rows, cols)` of them.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Smith normal form with unimodular transforms.
pub fn snf(a: &IntMatrix) -> SnfResult {
    let (r, c) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    for t in 0..r.min(c) {
        // Smallest nonzero entry of the trailing block as pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                let x = &d[(i, j)];
                if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            for i in t + 1..r {
                if !d[(i, t)].is_zero() {
                    let m = gcd_step(&d[(t, t)], &d[(i, t)]);
                    d.combine_rows(t, i, &m);
                    u.combine_rows(t, i, &m);
                }
            }
            for j in t + 1..c {
                if !d[(t, j)].is_zero() {
                    let m = gcd_step(&d[(t, t)], &d[(t, j)]);
                    d.combine_cols(t, j, &m);
                    v.combine_cols(t, j, &m);
                }
            }
            if (t + 1..r).any(|i| !d[(i, t)].is_zero()) {
                continue;
            }
            // Divisibility of the trailing block.
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)])));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SnfResult { d, u, v }
}

/// `[[s, x], [−q/g, p/g]]` with `s·p + x·q = g = gcd(p, q)`; determinant 1.
fn gcd_step(p: &BigInt, q: &BigInt) -> [BigInt; 4] {
    if q.is_multiple_of(p) {
        return [BigInt::one(), BigInt::zero(), -(q / p), BigInt::one()];
    }
    let e = p.extended_gcd(q);
    [e.x, e.y, -(q / &e.gcd), p / &e.gcd]
}

/// Invariant factors of a finitely generated abelian group; `0` stands for `ℤ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub factors: Vec<BigInt>,
}

impl AbelianInvariants {
    /// Factors other than 1.
    pub fn nontrivial(&self) -> Vec<BigInt> {
        self.factors.iter().filter(|x| !x.is_one()).cloned().collect()
    }

    pub fn free_rank(&self) -> usize {
        self.factors.iter().filter(|x| x.is_zero()).count()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank() == 0
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nt = self.nontrivial();
        if nt.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = nt.iter().map(|x| if x.is_zero() { "Z".into() } else { format!("C{x}") }).collect();
        f.write_str(&parts.join(" x "))
    }
}

/// Cokernel of the exponent-sum matrix of the relators.
pub fn abelianization(p: &Presentation) -> AbelianInvariants {
    let m = IntMatrix::from_rows_with_cols(&p.relation_matrix(), p.rank());
    let s = snf(&m);
    let mut factors = s.diagonal();
    factors.extend(std::iter::repeat(BigInt::zero()).take(p.rank() - factors.len()));
    AbelianInvariants { factors }
}

/// Dense matrix over F₂ with bit-packed rows.
#[derive(Clone, PartialEq, Eq)]
pub struct F2Matrix {
    cols: usize,
    rows: Vec<FixedBitSet>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Matrix { cols, rows: vec![FixedBitSet::with_capacity(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = F2Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_bits(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = F2Matrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, &b) in r.iter().enumerate() {
                m.set(i, j, b & 1 == 1);
            }
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<FixedBitSet>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols);
        }
        F2Matrix { cols, rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        self.rows[i].set(j, b);
    }

    pub fn row(&self, i: usize) -> &FixedBitSet {
        &self.rows[i]
    }

    pub fn push_row(&mut self, r: FixedBitSet) {
        assert_eq!(r.len(), self.cols);
        self.rows.push(r);
    }

    pub fn rank(&self) -> usize {
        let mut e = F2Echelon::new(self.cols);
        for r in &self.rows {
            e.insert(r.clone());
        }
        e.rank()
    }

    /// Basis of `{x : A x = 0}`.
    pub fn nullspace(&self) -> Vec<FixedBitSet> {
        let mut e = F2Echelon::new(self.cols);
        for r in &self.rows {
            e.insert(r.clone());
        }
        let rref = e.reduced();
        let pivots: Vec<usize> = rref.iter().map(|r| r.minimum().unwrap()).collect();
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|j| !pivots.contains(j)) {
            let mut x = FixedBitSet::with_capacity(self.cols);
            x.insert(free);
            for (r, &p) in rref.iter().zip(&pivots) {
                if r.contains(free) {
                    x.insert(p);
                }
            }
            out.push(x);
        }
        out
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let s: String = (0..self.cols).map(|j| if r.contains(j) { '1' } else { '0' }).collect();
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Incremental row echelon form; each stored row has a distinct leading column.
#[derive(Clone, Debug, Default)]
pub struct F2Echelon {
    cols: usize,
    /// Row with leading column `j`, if any.
    by_pivot: Vec<Option<usize>>,
    rows: Vec<FixedBitSet>,
}

impl F2Echelon {
    pub fn new(cols: usize) -> Self {
        F2Echelon { cols, by_pivot: vec![None; cols], rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Reduces `v` against the stored rows in place; the result has no stored pivot set.
    pub fn reduce(&self, v: &mut FixedBitSet) {
        let mut start = 0;
        while let Some(j) = v.ones().find(|&j| j >= start && self.by_pivot[j].is_some()) {
            v.symmetric_difference_with(&self.rows[self.by_pivot[j].unwrap()]);
            start = j + 1;
        }
    }

    pub fn contains(&self, v: &FixedBitSet) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_clear()
    }

    /// Adds `v`; returns whether the rank grew.
    pub fn insert(&mut self, mut v: FixedBitSet) -> bool {
        self.reduce(&mut v);
        match v.minimum() {
            None => false,
            Some(p) => {
                self.by_pivot[p] = Some(self.rows.len());
                self.rows.push(v);
                true
            }
        }
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.minimum().unwrap()).collect()
    }

    /// Fully reduced rows sorted by pivot.
    pub fn reduced(&self) -> Vec<FixedBitSet> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.rows[i].minimum());
        let mut out: Vec<FixedBitSet> = order.iter().map(|&i| self.rows[i].clone()).collect();
        for i in (0..out.len()).rev() {
            let p = out[i].minimum().unwrap();
            for k in 0..i {
                if out[k].contains(p) {
                    let (a, b) = out.split_at_mut(i);
                    a[k].symmetric_difference_with(&b[0]);
                }
            }
        }
        out
    }
}

fn small_det(m: &[Vec<i64>]) -> i64 {
    if m.len() == 1 {
        return m[0][0];
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i64>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect()).collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * small_det(&minor)
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (0..n)
        .flat_map(|first| {
            subsets(n - first - 1, k - 1).into_iter().map(move |rest| {
                let mut v = vec![first];
                v.extend(rest.into_iter().map(|x| x + first + 1));
                v
            })
        })
        .collect()
}

/// Diagonal `dₖ = Δₖ / Δₖ₋₁`, with `Δₖ` the gcd of all `k × k` minors. Exponential; small inputs only.
pub fn minors_diagonal(a: &[Vec<i64>]) -> Vec<i64> {
    let (r, c) = (a.len(), a[0].len());
    let mut out = Vec::new();
    let mut prev = 1i64;
    for k in 1..=r.min(c) {
        let mut g = 0i64;
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let m: Vec<Vec<i64>> = rows.iter().map(|&i| cols.iter().map(|&j| a[i][j]).collect()).collect();
                g = g.gcd(&small_det(&m));
            }
        }
        if g == 0 {
            out.extend(std::iter::repeat(0).take(r.min(c) - out.len()));
            break;
        }
        out.push(g / prev);
        prev = g;
    }
    out
}

pub fn f2_rank(a: &IntMatrix) -> usize {
    a.to_f2().rank()
}

/// The four vectors spanning the rank-4 lattice of the relator images.
pub fn relator_image_vectors() -> IntMatrix {
    IntMatrix::from_rows(&[vec![2, 0, 0, 0], vec![0, 2, 0, 0], vec![0, 0, 2, 0], vec![0, 1, 1, 1]])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(m: &IntMatrix) -> Vec<i64> {
        snf(m).diagonal().iter().map(|x| i64::try_from(x).unwrap()).collect()
    }

    #[test]
    fn snf_examples() {
        assert_eq!(diag(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 2]])), vec![2, 2]);
        assert_eq!(diag(&IntMatrix::from_rows(&[vec![2, 1], vec![0, 2]])), vec![1, 4]);
        assert_eq!(diag(&IntMatrix::from_rows(&[vec![4, 6], vec![6, 9], vec![2, 3]])), vec![1, 0]);
        assert_eq!(snf(&relator_image_vectors()).rank(), 4);
    }

    #[test]
    fn transforms_reproduce_d() {
        let a = IntMatrix::from_rows(&[vec![3, -6, 9, 0], vec![2, 4, -2, 8], vec![1, 1, 1, 1]]);
        let s = snf(&a);
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
        assert!(s.u.determinant().abs().is_one());
        assert!(s.v.determinant().abs().is_one());
    }

    #[test]
    fn f2_examples() {
        assert_eq!(F2Matrix::identity(4).rank(), 4);
        assert_eq!(F2Matrix::zeros(3, 5).rank(), 0);
        assert_eq!(f2_rank(&relator_image_vectors()), 1);
        let m = F2Matrix::from_bits(&[vec![1, 1, 0], vec![0, 1, 1]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert_eq!(ns[0].ones().collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn abelianization_examples() {
        use crate::families::{relator_family, FamilyKind};
        let inv = |k, n| abelianization(&Presentation::from_family(&relator_family(k, n).unwrap()));
        let two = BigInt::from(2);
        for n in 3..=6 {
            assert_eq!(inv(FamilyKind::Thm4, n).nontrivial(), vec![two.clone(); 3]);
        }
        let t1 = inv(FamilyKind::Thm1, 3);
        assert_eq!(t1.factors, vec![BigInt::one(), two.clone(), two.clone(), two.clone()]);
        assert_eq!(t1.to_string(), "C2 x C2 x C2");
        let free = Presentation::parse("gens: a b c\n").unwrap();
        assert_eq!(abelianization(&free).free_rank(), 3);
    }
}
