//! Dense exact linear algebra over a prime field F_p.
//!
//! This is the substrate for everything else in the crate. Matrices are
//! row-major `u32` entries reduced mod p, with arithmetic in `u64` (p < 2^31,
//! so products never overflow). Pivoting is deterministic — first nonzero
//! entry in column order — so identical inputs give bit-identical outputs.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A prime field F_p, 2 <= p < 2^31. Primality is checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fp {
    p: u32,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl Fp {
    pub fn new(p: u64) -> Result<Fp> {
        if p < 2 || p >= (1 << 31) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Fp { p: p as u32 })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + (self.p - b) as u64;
        (s % self.p as u64) as u32
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    /// Reduce a signed integer into [0, p).
    pub fn reduce(&self, a: i64) -> u32 {
        let p = self.p as i64;
        (((a % p) + p) % p) as u32
    }

    pub fn pow(&self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1u32;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self, a: u32) -> u32 {
        debug_assert!(a % self.p != 0, "inverse of zero");
        self.pow(a, self.p as u64 - 2)
    }
}

/// Dense matrix over F_p, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    field: Fp,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Result of row reduction: the RREF matrix, pivot columns, and rank.
#[derive(Debug, Clone)]
pub struct Rref {
    pub mat: Mat,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl Mat {
    pub fn zeros(field: Fp, rows: usize, cols: usize) -> Mat {
        Mat {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Fp, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Build from signed integer rows, reducing mod p.
    pub fn from_rows(field: Fp, rows: &[Vec<i64>]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Mat::zeros(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, field.reduce(v));
            }
        }
        m
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.field.p;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.field, other.field, "field mismatch");
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let p = self.field.p as u64;
        let mut out = Mat::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow.iter()) {
                    *d = ((*d as u64 + a * b as u64) % p) as u32;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (d, &b) in out.data.iter_mut().zip(other.data.iter()) {
            *d = self.field.add(*d, b);
        }
        out
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (d, &b) in out.data.iter_mut().zip(other.data.iter()) {
            *d = self.field.sub(*d, b);
        }
        out
    }

    pub fn scale(&self, c: u32) -> Mat {
        let mut out = self.clone();
        for d in out.data.iter_mut() {
            *d = self.field.mul(*d, c);
        }
        out
    }

    pub fn neg(&self) -> Mat {
        self.scale(self.field.neg(1))
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Stack vertically: self on top of other.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut out = Mat::zeros(self.field, self.rows + other.rows, self.cols);
        out.data[..self.data.len()].copy_from_slice(&self.data);
        out.data[self.data.len()..].copy_from_slice(&other.data);
        out
    }

    /// Stack horizontally: [self | other].
    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut out = Mat::zeros(self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            out.data[i * out.cols..i * out.cols + self.cols].copy_from_slice(self.row(i));
            out.data[i * out.cols + self.cols..(i + 1) * out.cols].copy_from_slice(other.row(i));
        }
        out
    }

    /// Place `block` with its top-left corner at (i0, j0).
    pub fn set_block(&mut self, i0: usize, j0: usize, block: &Mat) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(i0 + i, j0 + j, block.get(i, j));
            }
        }
    }

    pub fn block(&self, i0: usize, j0: usize, rows: usize, cols: usize) -> Mat {
        let mut out = Mat::zeros(self.field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(i0 + i, j0 + j));
            }
        }
        out
    }

    /// Reduced row-echelon form with deterministic pivoting.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let p = m.field;
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // first nonzero entry in this column at or below row r
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    let (a, b) = (m.get(r, j), m.get(pr, j));
                    m.set(r, j, b);
                    m.set(pr, j, a);
                }
            }
            let inv = p.inv(m.get(r, c));
            for j in 0..m.cols {
                let v = p.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c);
                if f == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let v = p.sub(m.get(i, j), p.mul(f, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            mat: m,
            rank: pivots.len(),
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of the right kernel {v : self * v = 0}.
    pub fn kernel_basis(&self) -> Subspace {
        let Rref { mat, pivots, rank } = self.rref();
        let n = self.cols;
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Mat::zeros(self.field, free.len(), n);
        for (bi, &fc) in free.iter().enumerate() {
            basis.set(bi, fc, 1);
            for (ri, &pc) in pivots.iter().enumerate().take(rank) {
                basis.set(bi, pc, self.field.neg(mat.get(ri, fc)));
            }
        }
        Subspace::from_generators(self.field, n, &basis)
    }

    /// Basis of the left kernel {v : v * self = 0}, as a subspace of F^rows.
    pub fn left_kernel_basis(&self) -> Subspace {
        self.transpose().kernel_basis()
    }

    /// One solution v of self * v = b, if consistent.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        let mut col = Mat::zeros(self.field, self.rows, 1);
        for (i, &v) in b.iter().enumerate() {
            col.set(i, 0, v);
        }
        let aug = self.hstack(&col);
        let Rref { mat, pivots, rank } = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // pivot in the rhs column: inconsistent
        }
        let mut v = vec![0u32; self.cols];
        for (ri, &pc) in pivots.iter().enumerate().take(rank) {
            v[pc] = mat.get(ri, self.cols);
        }
        Some(v)
    }

    /// Apply to a column vector: self * v.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let p = self.field.p as u64;
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u64;
                for (j, &x) in v.iter().enumerate() {
                    acc = (acc + self.get(i, j) as u64 * x as u64) % p;
                }
                acc as u32
            })
            .collect()
    }

    /// Apply to a row vector: v * self.
    pub fn apply_row(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.rows);
        let p = self.field.p as u64;
        let mut out = vec![0u64; self.cols];
        for (i, &x) in v.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = (*o + x as u64 * self.get(i, j) as u64) % p;
            }
        }
        out.into_iter().map(|x| x as u32).collect()
    }

    /// Invert a square matrix, if nonsingular.
    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let aug = self.hstack(&Mat::identity(self.field, self.rows));
        let r = aug.rref();
        if r.rank < self.rows {
            return None;
        }
        Some(r.mat.block(0, self.cols, self.rows, self.cols))
    }
}

/// A subspace of F_p^n, stored as an RREF basis (rows = basis vectors).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    field: Fp,
    ambient: usize,
    basis: Mat,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Fp, ambient: usize) -> Subspace {
        Subspace {
            field,
            ambient,
            basis: Mat::zeros(field, 0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Fp, ambient: usize) -> Subspace {
        Subspace::from_generators(field, ambient, &Mat::identity(field, ambient))
    }

    /// Span of the rows of `gens` (need not be independent).
    pub fn from_generators(field: Fp, ambient: usize, gens: &Mat) -> Subspace {
        assert_eq!(gens.cols(), ambient);
        let Rref { mat, pivots, rank } = gens.rref();
        Subspace {
            field,
            ambient,
            basis: mat.block(0, 0, rank, ambient),
            pivots,
        }
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient || self.field != other.field {
            return Err(Error::DimensionMismatch(format!(
                "ambient {} vs {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    /// Reduce a vector modulo the subspace (kill pivot coordinates).
    pub fn reduce_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.ambient);
        let p = self.field;
        let mut out = v.to_vec();
        for (ri, &pc) in self.pivots.iter().enumerate() {
            let f = out[pc];
            if f == 0 {
                continue;
            }
            for j in 0..self.ambient {
                out[j] = p.sub(out[j], p.mul(f, self.basis.get(ri, j)));
            }
        }
        out
    }

    pub fn contains_vec(&self, v: &[u32]) -> bool {
        self.reduce_vec(v).iter().all(|&x| x == 0)
    }

    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        Ok((0..other.dim()).all(|i| self.contains_vec(other.basis.row(i))))
    }

    /// Coordinates of v over the basis rows, if v lies in the subspace.
    pub fn coords(&self, v: &[u32]) -> Option<Vec<u32>> {
        if !self.contains_vec(v) {
            return None;
        }
        // RREF basis: coefficient of row i is just the pivot coordinate.
        Some(self.pivots.iter().map(|&pc| v[pc]).collect())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(Subspace::from_generators(
            self.field,
            self.ambient,
            &self.basis.vstack(&other.basis),
        ))
    }

    /// Intersection via the Zassenhaus block construction.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let n = self.ambient;
        let k = self.dim();
        let m = other.dim();
        let mut block = Mat::zeros(self.field, k + m, 2 * n);
        block.set_block(0, 0, &self.basis);
        block.set_block(0, n, &self.basis);
        block.set_block(k, 0, &other.basis);
        let r = block.rref();
        let mut rows: Vec<Vec<i64>> = Vec::new();
        for i in 0..r.rank {
            let left_zero = (0..n).all(|j| r.mat.get(i, j) == 0);
            if left_zero {
                rows.push((0..n).map(|j| r.mat.get(i, n + j) as i64).collect());
            }
        }
        let gens = Mat::from_rows(self.field, &rows);
        if rows.is_empty() {
            return Ok(Subspace::zero(self.field, n));
        }
        Ok(Subspace::from_generators(self.field, n, &gens))
    }

    /// Vectors extending this subspace's basis to a basis of `bigger`.
    /// Requires self ⊆ bigger.
    pub fn quotient_basis(&self, bigger: &Subspace) -> Result<Mat> {
        self.check_ambient(bigger)?;
        if !bigger.contains(self)? {
            return Err(Error::InvalidInput(
                "quotient_basis: subspace is not contained in the bigger one".into(),
            ));
        }
        let mut rows: Vec<Vec<i64>> = Vec::new();
        let mut acc = self.clone();
        for i in 0..bigger.dim() {
            let v = bigger.basis.row(i);
            let red = acc.reduce_vec(v);
            if red.iter().any(|&x| x != 0) {
                rows.push(red.iter().map(|&x| x as i64).collect());
                acc = acc.sum(&Subspace::from_generators(
                    self.field,
                    self.ambient,
                    &Mat::from_rows(self.field, &[red.iter().map(|&x| x as i64).collect()]),
                ))?;
            }
        }
        Ok(Mat::from_rows(self.field, &rows))
    }

    /// Indices of the standard coordinates not hit by a pivot; the images of
    /// those coordinates form a basis of the quotient F^n / self.
    pub fn complement_coords(&self) -> Vec<usize> {
        (0..self.ambient)
            .filter(|c| !self.pivots.contains(c))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::DetRng;

    fn f(p: u64) -> Fp {
        Fp::new(p).unwrap()
    }

    #[test]
    fn rejects_nonprime() {
        assert!(Fp::new(1).is_err());
        assert!(Fp::new(4).is_err());
        assert!(Fp::new(91).is_err()); // 7 * 13
        assert!(Fp::new(2).is_ok());
        assert!(Fp::new(2147483647).is_ok()); // 2^31 - 1
    }

    #[test]
    fn rref_zero_and_identity() {
        let f3 = f(3);
        let z = Mat::zeros(f3, 2, 2);
        let r = z.rref();
        assert!(r.mat.is_zero());
        assert!(r.pivots.is_empty());
        assert_eq!(r.rank, 0);

        let id = Mat::identity(f3, 3);
        let r = id.rref();
        assert_eq!(r.mat, id);
        assert_eq!(r.pivots, vec![0, 1, 2]);
        assert_eq!(r.rank, 3);
    }

    #[test]
    fn rref_rank_one_over_f5() {
        // second row is twice the first
        let m = Mat::from_rows(f(5), &[vec![1, 2], vec![2, 4]]);
        let r = m.rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn kernel_examples() {
        let f5 = f(5);
        let id = Mat::identity(f(3), 3);
        assert_eq!(id.kernel_basis().dim(), 0);

        let z = Mat::zeros(f5, 2, 3);
        assert_eq!(z.kernel_basis().dim(), 3);

        let m = Mat::from_rows(f5, &[vec![1, 2], vec![2, 4]]);
        let k = m.kernel_basis();
        assert_eq!(k.dim(), 1);
        // hand-solved: v1 + 2 v2 = 0, so (3, 1) spans the kernel
        assert!(k.contains_vec(&[3, 1]));
    }

    #[test]
    fn solve_examples() {
        let f5 = f(5);
        let id = Mat::identity(f5, 3);
        assert_eq!(id.solve(&[1, 2, 3]), Some(vec![1, 2, 3]));

        let z = Mat::zeros(f5, 2, 2);
        assert_eq!(z.solve(&[1, 0]), None);

        let m = Mat::from_rows(f5, &[vec![1, 2], vec![2, 4]]);
        let v = m.solve(&[1, 2]).expect("consistent");
        assert_eq!(m.apply(&v), vec![1, 2]);
    }

    #[test]
    fn subspace_trivial_ops() {
        let f3 = f(3);
        let u = Subspace::from_generators(f3, 2, &Mat::from_rows(f3, &[vec![1, 0]]));
        let v = Subspace::from_generators(f3, 2, &Mat::from_rows(f3, &[vec![0, 1]]));
        let sum = u.sum(&v).unwrap();
        assert_eq!(sum.dim(), 2);
        let int = u.intersect(&v).unwrap();
        assert_eq!(int.dim(), 0);

        assert_eq!(u.sum(&u).unwrap(), u);
        assert_eq!(u.intersect(&u).unwrap(), u);

        let zero = Subspace::zero(f3, 2);
        assert_eq!(zero.sum(&v).unwrap(), v);
        assert_eq!(zero.intersect(&v).unwrap().dim(), 0);
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let f3 = f(3);
        let u = Subspace::zero(f3, 2);
        let v = Subspace::zero(f3, 3);
        assert!(u.sum(&v).is_err());
        assert!(u.intersect(&v).is_err());
    }

    fn random_mat(rng: &mut DetRng, field: Fp, rows: usize, cols: usize) -> Mat {
        let mut m = Mat::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, rng.element(field.modulus() as u64) as u32);
            }
        }
        m
    }

    #[test]
    fn rank_nullity_randomized() {
        let mut rng = DetRng::new(0);
        for &p in &[2u64, 3, 5, 101] {
            let fp = f(p);
            for _ in 0..25 {
                let rows = 1 + rng.below(6) as usize;
                let cols = 1 + rng.below(6) as usize;
                let m = random_mat(&mut rng, fp, rows, cols);
                assert_eq!(m.rank() + m.kernel_basis().dim(), cols);
            }
        }
    }

    #[test]
    fn rref_idempotent_randomized() {
        let mut rng = DetRng::new(1);
        let fp = f(7);
        for _ in 0..30 {
            let m = random_mat(&mut rng, fp, 4, 5);
            let r = m.rref();
            assert_eq!(r.mat.rref().mat, r.mat);
        }
    }

    #[test]
    fn grassmann_identity_randomized() {
        let mut rng = DetRng::new(2);
        let fp = f(3);
        for _ in 0..40 {
            let n = 2 + rng.below(5) as usize;
            let ru = rng.below(4) as usize + 1;
            let u = Subspace::from_generators(fp, n, &random_mat(&mut rng, fp, ru, n));
            let rv = rng.below(4) as usize + 1;
            let v = Subspace::from_generators(fp, n, &random_mat(&mut rng, fp, rv, n));
            let s = u.sum(&v).unwrap();
            let i = u.intersect(&v).unwrap();
            assert_eq!(u.dim() + v.dim(), s.dim() + i.dim());
            assert!(s.contains(&u).unwrap() && s.contains(&v).unwrap());
            assert!(u.contains(&i).unwrap() && v.contains(&i).unwrap());
        }
    }

    #[test]
    fn solve_satisfies_system_randomized() {
        let mut rng = DetRng::new(3);
        let fp = f(5);
        for _ in 0..40 {
            let m = random_mat(&mut rng, fp, 3, 4);
            let b: Vec<u32> = (0..3).map(|_| rng.element(5) as u32).collect();
            if let Some(v) = m.solve(&b) {
                assert_eq!(m.apply(&v), b);
            }
        }
    }

    #[test]
    fn quotient_basis_extends() {
        let f3 = f(3);
        let u = Subspace::from_generators(f3, 3, &Mat::from_rows(f3, &[vec![1, 1, 0]]));
        let w = Subspace::full(f3, 3);
        let ext = u.quotient_basis(&w).unwrap();
        assert_eq!(ext.rows(), 2);
        let all = u.basis().vstack(&ext);
        assert_eq!(all.rank(), 3);
    }
}
