//! Exact sparse linear algebra over the rationals.
//!
//! Matrices are stored row-major with sorted sparse rows. Echelon forms are
//! fully reduced, so kernels, images and subspace bases come out canonical
//! regardless of the order in which rows were fed in.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rational::{primitive_scale, Q};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec(Vec<(usize, Q)>);

impl SparseVec {
    pub fn new() -> Self {
        SparseVec(Vec::new())
    }

    pub fn unit(i: usize) -> Self {
        SparseVec(vec![(i, Q::one())])
    }

    /// Sorts, merges duplicates and drops zeros.
    pub fn from_pairs(mut pairs: Vec<(usize, Q)>) -> Self {
        pairs.sort_by_key(|p| p.0);
        let mut out: Vec<(usize, Q)> = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            match out.last_mut() {
                Some((j, w)) if *j == i => *w += v,
                _ => out.push((i, v)),
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        SparseVec(out)
    }

    pub fn from_map(m: BTreeMap<usize, Q>) -> Self {
        SparseVec(m.into_iter().filter(|(_, v)| !v.is_zero()).collect())
    }

    pub fn from_dense(xs: &[Q]) -> Self {
        SparseVec(
            xs.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        )
    }

    pub fn to_dense(&self, n: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); n];
        for (i, v) in &self.0 {
            out[*i] = v.clone();
        }
        out
    }

    pub fn entries(&self) -> &[(usize, Q)] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, Q)> {
        self.0.iter()
    }

    pub fn nnz(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Q> {
        self.0
            .binary_search_by_key(&i, |p| p.0)
            .ok()
            .map(|k| &self.0[k].1)
    }

    pub fn leading(&self) -> Option<(usize, &Q)> {
        self.0.first().map(|(i, v)| (*i, v))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.last().map(|p| p.0)
    }

    /// `self + c * other`
    pub fn axpy(&self, c: &Q, other: &SparseVec) -> SparseVec {
        if c.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, c * &b[j].1));
                j += 1;
            } else {
                let v = &a[i].1 + c * &b[j].1;
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec(out)
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        self.axpy(&Q::one(), other)
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        self.axpy(&-Q::one(), other)
    }

    pub fn scale(&self, c: &Q) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec(self.0.iter().map(|(i, v)| (*i, v * c)).collect())
    }

    pub fn neg(&self) -> SparseVec {
        SparseVec(self.0.iter().map(|(i, v)| (*i, -v)).collect())
    }

    pub fn dot(&self, other: &SparseVec) -> Q {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        let mut acc = Q::zero();
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += &a[i].1 * &b[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    pub fn shift(&self, offset: usize) -> SparseVec {
        SparseVec(self.0.iter().map(|(i, v)| (i + offset, v.clone())).collect())
    }

    /// Coprime integer entries, positive leading entry.
    pub fn integer_primitive(&self) -> SparseVec {
        let s = primitive_scale(self.0.iter().map(|p| &p.1));
        self.scale(&s)
    }
}

/// Accumulates scaled sparse vectors; cheaper than repeated `axpy`.
#[derive(Default)]
pub struct Accum(BTreeMap<usize, Q>);

impl Accum {
    pub fn new() -> Self {
        Accum(BTreeMap::new())
    }
    pub fn add(&mut self, i: usize, v: Q) {
        if v.is_zero() {
            return;
        }
        *self.0.entry(i).or_insert_with(Q::zero) += v;
    }
    pub fn add_scaled(&mut self, c: &Q, x: &SparseVec) {
        if c.is_zero() {
            return;
        }
        for (i, v) in x.iter() {
            *self.0.entry(*i).or_insert_with(Q::zero) += c * v;
        }
    }
    pub fn finish(self) -> SparseVec {
        SparseVec::from_map(self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    nrows: usize,
    ncols: usize,
    rows: Vec<SparseVec>,
}

impl Mat {
    pub fn zeros(nrows: usize, ncols: usize) -> Mat {
        Mat { nrows, ncols, rows: vec![SparseVec::new(); nrows] }
    }

    pub fn identity(n: usize) -> Mat {
        Mat { nrows: n, ncols: n, rows: (0..n).map(SparseVec::unit).collect() }
    }

    pub fn scalar(n: usize, c: &Q) -> Mat {
        Mat::identity(n).scale(c)
    }

    pub fn from_rows(ncols: usize, rows: Vec<SparseVec>) -> Mat {
        debug_assert!(rows.iter().all(|r| r.max_index().is_none_or(|m| m < ncols)));
        Mat { nrows: rows.len(), ncols, rows }
    }

    pub fn from_cols(nrows: usize, cols: &[SparseVec]) -> Mat {
        let mut rows: Vec<Vec<(usize, Q)>> = vec![Vec::new(); nrows];
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c.iter() {
                rows[*i].push((j, v.clone()));
            }
        }
        Mat { nrows, ncols: cols.len(), rows: rows.into_iter().map(SparseVec).collect() }
    }

    pub fn from_dense(nrows: usize, ncols: usize, data: &[Vec<Q>]) -> Mat {
        Mat { nrows, ncols, rows: data.iter().map(|r| SparseVec::from_dense(r)).collect() }
    }

    pub fn to_dense(&self) -> Vec<Vec<Q>> {
        self.rows.iter().map(|r| r.to_dense(self.ncols)).collect()
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        self.rows[i].get(j).cloned().unwrap_or_else(Q::zero)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.nnz()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_zero())
    }

    pub fn cols(&self) -> Vec<SparseVec> {
        self.transpose().rows
    }

    pub fn col(&self, j: usize) -> SparseVec {
        SparseVec(
            self.rows
                .iter()
                .enumerate()
                .filter_map(|(i, r)| r.get(j).map(|v| (i, v.clone())))
                .collect(),
        )
    }

    pub fn transpose(&self) -> Mat {
        let mut rows: Vec<Vec<(usize, Q)>> = vec![Vec::new(); self.ncols];
        for (i, r) in self.rows.iter().enumerate() {
            for (j, v) in r.iter() {
                rows[*j].push((i, v.clone()));
            }
        }
        Mat { nrows: self.ncols, ncols: self.nrows, rows: rows.into_iter().map(SparseVec).collect() }
    }

    /// `self * x`
    pub fn apply(&self, x: &SparseVec) -> SparseVec {
        assert!(x.max_index().is_none_or(|m| m < self.ncols), "vector too long for matrix");
        SparseVec(
            self.rows
                .iter()
                .enumerate()
                .filter_map(|(i, r)| {
                    let v = r.dot(x);
                    (!v.is_zero()).then_some((i, v))
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.ncols, other.nrows, "matrix shapes do not compose");
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = Accum::new();
                for (k, v) in r.iter() {
                    acc.add_scaled(v, &other.rows[*k]);
                }
                acc.finish()
            })
            .collect();
        Mat { nrows: self.nrows, ncols: other.ncols, rows }
    }

    pub fn add(&self, other: &Mat) -> Mat {
        self.axpy(&Q::one(), other)
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.axpy(&-Q::one(), other)
    }

    pub fn axpy(&self, c: &Q, other: &Mat) -> Mat {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols), "matrix shapes differ");
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a.axpy(c, b)).collect();
        Mat { nrows: self.nrows, ncols: self.ncols, rows }
    }

    pub fn scale(&self, c: &Q) -> Mat {
        Mat { nrows: self.nrows, ncols: self.ncols, rows: self.rows.iter().map(|r| r.scale(c)).collect() }
    }

    pub fn neg(&self) -> Mat {
        self.scale(&-Q::one())
    }

    pub fn vstack(ncols: usize, mats: &[&Mat]) -> Mat {
        let mut rows = Vec::new();
        for m in mats {
            assert_eq!(m.ncols, ncols);
            rows.extend(m.rows.iter().cloned());
        }
        Mat { nrows: rows.len(), ncols, rows }
    }

    /// Kronecker product with a sign applied entrywise.
    pub fn kron(&self, other: &Mat, negate: bool) -> Mat {
        let mut rows = Vec::with_capacity(self.nrows * other.nrows);
        for ra in &self.rows {
            for rb in &other.rows {
                let mut out = Vec::with_capacity(ra.nnz() * rb.nnz());
                for (ja, va) in ra.iter() {
                    for (jb, vb) in rb.iter() {
                        let v = va * vb;
                        out.push((ja * other.ncols + jb, if negate { -v } else { v }));
                    }
                }
                rows.push(SparseVec(out));
            }
        }
        Mat { nrows: self.nrows * other.nrows, ncols: self.ncols * other.ncols, rows }
    }

    /// Copies `block` into a zero matrix at the given offset.
    pub fn embed(&mut self, row0: usize, col0: usize, block: &Mat) {
        for (i, r) in block.rows.iter().enumerate() {
            let target = &mut self.rows[row0 + i];
            *target = target.add(&r.shift(col0));
        }
    }

    pub fn rank(&self) -> usize {
        Echelon::from_rows(self.ncols, self.rows.iter().cloned()).rank()
    }

    /// Basis of the null space, one vector per free column.
    pub fn kernel(&self) -> Vec<SparseVec> {
        Echelon::from_rows(self.ncols, self.rows.iter().cloned()).kernel()
    }

    /// Reduced basis of the column space.
    pub fn image(&self) -> Subspace {
        Subspace::from_spanning(self.nrows, self.cols())
    }

    pub fn inverse(&self) -> Option<Mat> {
        if self.nrows != self.ncols {
            return None;
        }
        let n = self.ncols;
        let aug = self.rows.iter().enumerate().map(|(i, r)| {
            let mut e = r.0.clone();
            e.push((n + i, Q::one()));
            SparseVec(e)
        });
        let ech = Echelon::from_rows(2 * n, aug);
        if ech.pivots.len() != n || ech.pivots.iter().enumerate().any(|(i, p)| *p != i) {
            return None;
        }
        let rows = ech
            .rows
            .iter()
            .map(|r| SparseVec(r.iter().filter(|(j, _)| *j >= n).map(|(j, v)| (j - n, v.clone())).collect()))
            .collect();
        Some(Mat { nrows: n, ncols: n, rows })
    }

    /// First entry where `self` and `other` differ.
    pub fn first_difference(&self, other: &Mat) -> Option<(usize, usize)> {
        if (self.nrows, self.ncols) != (other.nrows, other.ncols) {
            return Some((usize::MAX, usize::MAX));
        }
        for (i, (a, b)) in self.rows.iter().zip(&other.rows).enumerate() {
            if a != b {
                let d = a.sub(b);
                return Some((i, d.leading().map(|p| p.0).unwrap_or(0)));
            }
        }
        None
    }
}

/// Fully reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<SparseVec>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_rows(ncols: usize, rows: impl IntoIterator<Item = SparseVec>) -> Self {
        let mut e = Echelon::new(ncols);
        for r in rows {
            e.insert(r);
        }
        e
    }

    /// Reduces `v` against the current pivots.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, Q> = v.iter().cloned().collect();
        for (k, p) in self.pivots.iter().enumerate() {
            let c = match acc.get(p) {
                Some(c) if !c.is_zero() => c.clone(),
                _ => continue,
            };
            for (j, w) in self.rows[k].iter() {
                let e = acc.entry(*j).or_insert_with(Q::zero);
                *e -= &c * w;
            }
        }
        SparseVec::from_map(acc)
    }

    /// Adds a row; returns false if it was already in the span.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let r = self.reduce(&v);
        let (p, lead) = match r.leading() {
            Some((p, l)) => (p, l.clone()),
            None => return false,
        };
        let r = r.scale(&(Q::one() / lead));
        for row in self.rows.iter_mut() {
            if let Some(c) = row.get(p).cloned() {
                *row = row.axpy(&-c, &r);
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.rows.insert(pos, r);
        true
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn kernel(&self) -> Vec<SparseVec> {
        let mut is_pivot = vec![false; self.ncols];
        for p in &self.pivots {
            is_pivot[*p] = true;
        }
        let mut out = Vec::new();
        for f in (0..self.ncols).filter(|c| !is_pivot[*c]) {
            let mut pairs = vec![(f, Q::one())];
            for (k, p) in self.pivots.iter().enumerate() {
                if let Some(v) = self.rows[k].get(f) {
                    pairs.push((*p, -v.clone()));
                }
            }
            out.push(SparseVec::from_pairs(pairs));
        }
        out
    }
}

/// A subspace of `Q^ambient` held in reduced echelon form, so coordinates of
/// a member are read off at the pivot positions.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient: usize,
    ech: Echelon,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, ech: Echelon::new(ambient) }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace::from_spanning(ambient, (0..ambient).map(SparseVec::unit))
    }

    pub fn from_spanning(ambient: usize, vecs: impl IntoIterator<Item = SparseVec>) -> Self {
        Subspace { ambient, ech: Echelon::from_rows(ambient, vecs) }
    }

    pub fn kernel_of(m: &Mat) -> Self {
        Subspace::from_spanning(m.ncols(), m.kernel())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.ech.rank()
    }

    pub fn basis(&self) -> &[SparseVec] {
        self.ech.rows()
    }

    pub fn pivots(&self) -> &[usize] {
        self.ech.pivots()
    }

    /// Basis scaled to coprime integers with positive leading entries.
    pub fn integer_basis(&self) -> Vec<SparseVec> {
        self.basis().iter().map(|b| b.integer_primitive()).collect()
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.ech.contains(v)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis().iter().all(|b| self.contains(b))
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other)
    }

    /// Coordinates in the reduced basis, or `None` if `v` is not a member.
    pub fn coords(&self, v: &SparseVec) -> Option<SparseVec> {
        let mut pairs = Vec::new();
        for (k, p) in self.pivots().iter().enumerate() {
            if let Some(c) = v.get(*p) {
                pairs.push((k, c.clone()));
            }
        }
        let c = SparseVec(pairs);
        let back = self.from_coords(&c);
        (back == *v).then_some(c)
    }

    pub fn from_coords(&self, c: &SparseVec) -> SparseVec {
        let mut acc = Accum::new();
        for (k, v) in c.iter() {
            acc.add_scaled(v, &self.basis()[*k]);
        }
        acc.finish()
    }

    /// Columns are the basis vectors.
    pub fn embedding(&self) -> Mat {
        Mat::from_cols(self.ambient, self.basis())
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut ech = self.ech.clone();
        for b in other.basis() {
            ech.insert(b.clone());
        }
        Subspace { ambient: self.ambient, ech }
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        // x = A a = B b  <=>  [A | -B] (a,b) = 0
        let na = self.dim();
        let mut cols: Vec<SparseVec> = self.basis().to_vec();
        cols.extend(other.basis().iter().map(|b| b.neg()));
        let m = Mat::from_cols(self.ambient, &cols);
        let vecs = m.kernel().into_iter().map(|k| {
            let a = SparseVec::from_pairs(k.iter().filter(|(i, _)| *i < na).cloned().collect());
            self.from_coords(&a)
        });
        Subspace::from_spanning(self.ambient, vecs)
    }

    /// Matrix of `op` restricted to `self`, landing in `target` coordinates.
    pub fn restrict(&self, op: &Mat, target: &Subspace) -> Option<Mat> {
        let mut cols = Vec::with_capacity(self.dim());
        for b in self.basis() {
            cols.push(target.coords(&op.apply(b))?);
        }
        Some(Mat::from_cols(target.dim(), &cols))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn m(rows: &[&[i64]]) -> Mat {
        let data: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|x| q(*x)).collect()).collect();
        Mat::from_dense(rows.len(), rows[0].len(), &data)
    }

    #[test]
    fn kernel_and_rank() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(a.apply(&k[0]).is_zero());
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[2, 1, 0], &[0, 1, 4], &[1, 0, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Mat::identity(3));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn subspace_coords_and_intersection() {
        let s = Subspace::from_spanning(3, vec![SparseVec::from_dense(&[q(1), q(1), q(0)]), SparseVec::unit(2)]);
        let v = SparseVec::from_dense(&[q(2), q(2), q(5)]);
        let c = s.coords(&v).unwrap();
        assert_eq!(s.from_coords(&c), v);
        assert!(s.coords(&SparseVec::unit(0)).is_none());
        let t = Subspace::from_spanning(3, vec![SparseVec::unit(0), SparseVec::unit(2)]);
        assert_eq!(s.intersect(&t).dim(), 1);
    }

    #[test]
    fn kron_shape() {
        let a = m(&[&[1, 2]]);
        let b = m(&[&[0, 1], &[1, 0]]);
        let k = a.kron(&b, false);
        assert_eq!((k.nrows(), k.ncols()), (2, 4));
        assert_eq!(k.get(1, 2), q(2));
    }
}
