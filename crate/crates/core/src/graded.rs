//! Finite slices of nonnegatively graded spaces and degree-homogeneous
//! operators between them, stored as one exact matrix per source degree.
//!
//! A space is known in degrees `0..=top`. A complete space is zero above
//! `top`; an incomplete one (a truncation) is unknown there, and operator
//! blocks landing in unknown degrees are absent rather than guessed.

use crate::linalg::{Mat, SparseVec, Subspace};
use crate::rational::{sign, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    dims: Vec<usize>,
    complete: bool,
}

impl GradedSpace {
    pub fn new(dims: Vec<usize>, complete: bool) -> Self {
        assert!(!dims.is_empty(), "graded space needs degree 0");
        GradedSpace { dims, complete }
    }

    /// The ground field in degree 0.
    pub fn point() -> Self {
        GradedSpace::new(vec![1], true)
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Dimension in degree `k`, or `None` where the truncation hides it.
    pub fn dim(&self, k: i64) -> Option<usize> {
        if k < 0 {
            Some(0)
        } else if (k as usize) <= self.top() {
            Some(self.dims[k as usize])
        } else if self.complete {
            Some(0)
        } else {
            None
        }
    }

    pub fn total(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Lower truncation; the result is incomplete unless nothing was cut.
    pub fn truncate(&self, top: usize) -> Self {
        if top >= self.top() {
            return self.clone();
        }
        GradedSpace::new(self.dims[..=top].to_vec(), false)
    }

    /// Super tensor product; the known range is limited by incomplete factors.
    pub fn tensor(&self, other: &GradedSpace) -> GradedSpace {
        let top = match (self.complete, other.complete) {
            (true, true) => self.top() + other.top(),
            (false, true) => self.top(),
            (true, false) => other.top(),
            (false, false) => self.top().min(other.top()),
        };
        let dims = (0..=top)
            .map(|k| (0..=k).map(|i| self.dim(i as i64).unwrap_or(0) * other.dim((k - i) as i64).unwrap_or(0)).sum())
            .collect();
        GradedSpace::new(dims, self.complete && other.complete)
    }

    /// Offset of the (i, k−i) piece inside degree `k` of `a⊗b`.
    pub fn tensor_offset(a: &GradedSpace, b: &GradedSpace, k: usize, i: usize) -> usize {
        (0..i).map(|i2| a.dim(i2 as i64).unwrap_or(0) * b.dim((k - i2) as i64).unwrap_or(0)).sum()
    }

    /// Splits a tensor index at degree `k` into (i, index in a_i, index in b_{k−i}).
    pub fn tensor_split(a: &GradedSpace, b: &GradedSpace, k: usize, mut idx: usize) -> (usize, usize, usize) {
        for i in 0..=k {
            let da = a.dim(i as i64).unwrap_or(0);
            let db = b.dim((k - i) as i64).unwrap_or(0);
            if idx < da * db {
                return (i, idx / db, idx % db);
            }
            idx -= da * db;
        }
        panic!("tensor index out of range")
    }
}

/// A homogeneous linear map of fixed degree, one block per source degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedOp {
    degree: i64,
    src: GradedSpace,
    tgt: GradedSpace,
    blocks: Vec<Option<Mat>>,
}

impl GradedOp {
    pub fn from_blocks(src: &GradedSpace, tgt: &GradedSpace, degree: i64, blocks: Vec<Option<Mat>>) -> Self {
        assert_eq!(blocks.len(), src.top() + 1);
        for (k, b) in blocks.iter().enumerate() {
            if let Some(m) = b {
                assert_eq!(m.ncols(), src.dims[k], "block {k} has wrong width");
                assert_eq!(Some(m.nrows()), tgt.dim(k as i64 + degree), "block {k} has wrong height");
            }
        }
        GradedOp { degree, src: src.clone(), tgt: tgt.clone(), blocks }
    }

    /// Builds column by column; `col(k, j)` is the image of basis vector `j` in degree `k`.
    pub fn from_fn<F>(src: &GradedSpace, tgt: &GradedSpace, degree: i64, mut col: F) -> Self
    where
        F: FnMut(usize, usize) -> SparseVec,
    {
        let blocks = (0..=src.top())
            .map(|k| {
                let rows = tgt.dim(k as i64 + degree)?;
                let cols: Vec<SparseVec> =
                    (0..src.dims[k]).map(|j| if rows == 0 { SparseVec::new() } else { col(k, j) }).collect();
                Some(Mat::from_cols(rows, &cols))
            })
            .collect();
        GradedOp::from_blocks(src, tgt, degree, blocks)
    }

    /// Like `from_fn`, but a `None` column leaves the whole block unknown.
    pub fn try_from_fn<F>(src: &GradedSpace, tgt: &GradedSpace, degree: i64, mut col: F) -> Self
    where
        F: FnMut(usize, usize) -> Option<SparseVec>,
    {
        let blocks = (0..=src.top())
            .map(|k| {
                let rows = tgt.dim(k as i64 + degree)?;
                let mut cols = Vec::with_capacity(src.dims[k]);
                for j in 0..src.dims[k] {
                    cols.push(if rows == 0 { SparseVec::new() } else { col(k, j)? });
                }
                Some(Mat::from_cols(rows, &cols))
            })
            .collect();
        GradedOp::from_blocks(src, tgt, degree, blocks)
    }

    pub fn zero(src: &GradedSpace, tgt: &GradedSpace, degree: i64) -> Self {
        GradedOp::from_fn(src, tgt, degree, |_, _| SparseVec::new())
    }

    pub fn identity(space: &GradedSpace) -> Self {
        let blocks = space.dims.iter().map(|d| Some(Mat::identity(*d))).collect();
        GradedOp::from_blocks(space, space, 0, blocks)
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn src(&self) -> &GradedSpace {
        &self.src
    }

    pub fn tgt(&self) -> &GradedSpace {
        &self.tgt
    }

    pub fn block(&self, k: i64) -> Option<&Mat> {
        if k < 0 {
            return None;
        }
        self.blocks.get(k as usize).and_then(|b| b.as_ref())
    }

    pub fn blocks(&self) -> &[Option<Mat>] {
        &self.blocks
    }

    /// Degrees where the block is known.
    pub fn known_degrees(&self) -> Vec<usize> {
        (0..self.blocks.len()).filter(|k| self.blocks[*k].is_some()).collect()
    }

    pub fn apply(&self, k: usize, v: &SparseVec) -> Option<SparseVec> {
        self.block(k as i64).map(|m| m.apply(v))
    }

    /// Block of `self` at `k`, treating degrees where the source is zero as zero maps.
    fn block_or_zero(&self, k: i64) -> Option<Mat> {
        let cols = self.src.dim(k)?;
        let rows = self.tgt.dim(k + self.degree)?;
        if cols == 0 || rows == 0 {
            return Some(Mat::zeros(rows, cols));
        }
        self.block(k).cloned()
    }

    /// self ∘ other.
    pub fn compose(&self, other: &GradedOp) -> GradedOp {
        assert_eq!(other.tgt, self.src, "composing operators between different spaces");
        let degree = self.degree + other.degree;
        let blocks = (0..=other.src.top())
            .map(|k| {
                let rows = self.tgt.dim(k as i64 + degree)?;
                let b = other.block(k as i64)?;
                if b.nrows() == 0 || b.ncols() == 0 {
                    return Some(Mat::zeros(rows, b.ncols()));
                }
                let a = self.block_or_zero(k as i64 + other.degree)?;
                Some(a.mul(b))
            })
            .collect();
        GradedOp::from_blocks(&other.src, &self.tgt, degree, blocks)
    }

    fn combine(&self, other: &GradedOp, c: &Q) -> GradedOp {
        assert_eq!(self.degree, other.degree, "adding operators of different degree");
        assert!(self.src == other.src && self.tgt == other.tgt, "adding operators between different spaces");
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => Some(a.axpy(c, b)),
                _ => None,
            })
            .collect();
        GradedOp { degree: self.degree, src: self.src.clone(), tgt: self.tgt.clone(), blocks }
    }

    pub fn add(&self, other: &GradedOp) -> GradedOp {
        self.combine(other, &Q::from_integer(1.into()))
    }

    pub fn sub(&self, other: &GradedOp) -> GradedOp {
        self.combine(other, &Q::from_integer((-1).into()))
    }

    pub fn scale(&self, c: &Q) -> GradedOp {
        let blocks = self.blocks.iter().map(|b| b.as_ref().map(|m| m.scale(c))).collect();
        GradedOp { degree: self.degree, src: self.src.clone(), tgt: self.tgt.clone(), blocks }
    }

    pub fn neg(&self) -> GradedOp {
        self.scale(&sign(true))
    }

    /// Graded commutator ab − (−1)^{|a||b|} ba.
    pub fn commutator(a: &GradedOp, b: &GradedOp) -> GradedOp {
        let ab = a.compose(b);
        let ba = b.compose(a);
        if (a.degree * b.degree).rem_euclid(2) == 1 {
            ab.add(&ba)
        } else {
            ab.sub(&ba)
        }
    }

    /// Sums a list of operators of equal degree; `None` for an empty list.
    pub fn sum<'a>(ops: impl IntoIterator<Item = &'a GradedOp>) -> Option<GradedOp> {
        let mut it = ops.into_iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, x| acc.add(x)))
    }

    /// Degrees where both are known, with the first degree where they differ.
    pub fn compare(&self, other: &GradedOp) -> Comparison {
        let mut checked = Vec::new();
        let mut first_difference = None;
        for k in 0..self.blocks.len().min(other.blocks.len()) {
            if let (Some(a), Some(b)) = (&self.blocks[k], &other.blocks[k]) {
                checked.push(k);
                if first_difference.is_none() {
                    if let Some((i, j)) = a.first_difference(b) {
                        first_difference = Some((k, i, j));
                    }
                }
            }
        }
        Comparison { checked, first_difference }
    }

    /// Checks that every known block vanishes.
    pub fn zero_check(&self) -> Comparison {
        let z = GradedOp::zero(&self.src, &self.tgt, self.degree);
        self.compare(&z)
    }

    /// (A⊗B)(x⊗y) = (−1)^{|B||x|} Ax⊗By on the super tensor product.
    pub fn tensor(a: &GradedOp, b: &GradedOp) -> GradedOp {
        let src = a.src.tensor(&b.src);
        let tgt = a.tgt.tensor(&b.tgt);
        let degree = a.degree + b.degree;
        let blocks = (0..=src.top())
            .map(|k| {
                let rows = tgt.dim(k as i64 + degree)?;
                let mut m = Mat::zeros(rows, src.dims[k]);
                if rows == 0 {
                    return Some(m);
                }
                let kt = (k as i64 + degree) as usize;
                for i in 0..=k {
                    let j = k - i;
                    let (da, db) = (a.src.dim(i as i64).unwrap_or(0), b.src.dim(j as i64).unwrap_or(0));
                    if da == 0 || db == 0 {
                        continue;
                    }
                    let (ti, tj) = (i as i64 + a.degree, j as i64 + b.degree);
                    if ti < 0 || tj < 0 {
                        continue;
                    }
                    let (ti, tj) = (ti as usize, tj as usize);
                    let ba = a.block_or_zero(i as i64)?;
                    let bb = b.block_or_zero(j as i64)?;
                    if ba.nrows() == 0 || bb.nrows() == 0 {
                        continue;
                    }
                    let neg = (b.degree.rem_euclid(2) == 1) && i % 2 == 1;
                    let block = ba.kron(&bb, neg);
                    let r0 = GradedSpace::tensor_offset(&a.tgt, &b.tgt, kt, ti);
                    let c0 = GradedSpace::tensor_offset(&a.src, &b.src, k, i);
                    debug_assert!(tj + ti == kt);
                    m.embed(r0, c0, &block);
                }
                Some(m)
            })
            .collect();
        GradedOp::from_blocks(&src, &tgt, degree, blocks)
    }

    /// Matrix of the operator between graded subspaces, in their coordinates.
    /// Errors with the first degree where the image leaves `tgt`.
    pub fn restrict(&self, src: &GradedSubspace, tgt: &GradedSubspace) -> Result<GradedOp, usize> {
        let s = src.space();
        let t = tgt.space();
        let mut blocks = Vec::with_capacity(s.top() + 1);
        for k in 0..=s.top() {
            let kt = k as i64 + self.degree;
            let block = match (self.block_or_zero(k as i64), t.dim(kt)) {
                (Some(m), Some(rows)) => {
                    if rows == 0 {
                        let img_ok = src.parts[k].basis().iter().all(|b| m.apply(b).is_zero());
                        if !img_ok {
                            return Err(k);
                        }
                        Some(Mat::zeros(0, s.dims[k]))
                    } else {
                        Some(src.parts[k].restrict(&m, &tgt.parts[kt as usize]).ok_or(k)?)
                    }
                }
                _ => None,
            };
            blocks.push(block);
        }
        Ok(GradedOp::from_blocks(&s, &t, self.degree, blocks))
    }

    /// Restriction of the source to the degrees `0..=top`.
    pub fn truncate_src(&self, top: usize) -> GradedOp {
        let src = self.src.truncate(top);
        let blocks = self.blocks[..=top.min(self.src.top())].to_vec();
        GradedOp { degree: self.degree, src, tgt: self.tgt.clone(), blocks }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub checked: Vec<usize>,
    /// (degree, row, column)
    pub first_difference: Option<(usize, usize, usize)>,
}

impl Comparison {
    pub fn ok(&self) -> bool {
        self.first_difference.is_none()
    }

    pub fn describe(&self) -> Option<String> {
        self.first_difference.map(|(k, i, j)| format!("degree {k}, entry ({i}, {j})"))
    }

    pub fn range(&self) -> Option<(usize, usize)> {
        Some((*self.checked.first()?, *self.checked.last()?))
    }
}

/// One subspace per degree of an ambient graded space.
#[derive(Clone, Debug)]
pub struct GradedSubspace {
    ambient: GradedSpace,
    pub parts: Vec<Subspace>,
}

impl GradedSubspace {
    pub fn new(ambient: &GradedSpace, parts: Vec<Subspace>) -> Self {
        assert_eq!(parts.len(), ambient.top() + 1);
        GradedSubspace { ambient: ambient.clone(), parts }
    }

    pub fn full(ambient: &GradedSpace) -> Self {
        GradedSubspace::new(ambient, ambient.dims.iter().map(|d| Subspace::full(*d)).collect())
    }

    /// Joint kernel of operators of any degrees, computed where all blocks are known.
    /// Degrees where some block is missing keep the whole slice.
    pub fn joint_kernel(ambient: &GradedSpace, ops: &[&GradedOp]) -> Self {
        let parts = (0..=ambient.top())
            .map(|k| {
                let mut rows = Vec::new();
                let mut ncols = 0;
                for op in ops {
                    match op.block_or_zero(k as i64) {
                        Some(m) => {
                            ncols = m.ncols();
                            rows.extend(m.rows().iter().cloned());
                        }
                        None => return Subspace::full(ambient.dims[k]),
                    }
                }
                if ops.is_empty() {
                    return Subspace::full(ambient.dims[k]);
                }
                Subspace::kernel_of(&Mat::from_rows(ncols, rows))
            })
            .collect();
        GradedSubspace::new(ambient, parts)
    }

    /// Kernel of one operator; degrees with an unknown block are marked by `None`.
    pub fn kernel_known(op: &GradedOp) -> Vec<Option<Subspace>> {
        (0..=op.src.top())
            .map(|k| op.block_or_zero(k as i64).map(|m| Subspace::kernel_of(&m)))
            .collect()
    }

    pub fn ambient(&self) -> &GradedSpace {
        &self.ambient
    }

    /// Span of x⊗y for x in `a` and y in `b`, inside the tensor of the ambients.
    pub fn tensor(a: &GradedSubspace, b: &GradedSubspace) -> GradedSubspace {
        let amb = a.ambient.tensor(&b.ambient);
        let parts = (0..=amb.top())
            .map(|k| {
                let mut vecs = Vec::new();
                for i in 0..=k.min(a.ambient.top()) {
                    let j = k - i;
                    if j > b.ambient.top() {
                        continue;
                    }
                    let off = GradedSpace::tensor_offset(&a.ambient, &b.ambient, k, i);
                    let db = b.ambient.dims[j];
                    for x in a.parts[i].basis() {
                        for y in b.parts[j].basis() {
                            let mut pairs = Vec::with_capacity(x.nnz() * y.nnz());
                            for (ix, cx) in x.iter() {
                                for (iy, cy) in y.iter() {
                                    pairs.push((off + ix * db + iy, cx * cy));
                                }
                            }
                            vecs.push(SparseVec::from_pairs(pairs));
                        }
                    }
                }
                Subspace::from_spanning(amb.dims[k], vecs)
            })
            .collect();
        GradedSubspace::new(&amb, parts)
    }


    /// The subspace as a graded space of its own.
    pub fn space(&self) -> GradedSpace {
        GradedSpace::new(self.parts.iter().map(|p| p.dim()).collect(), self.ambient.complete)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.dim()).collect()
    }

    pub fn intersect(&self, other: &GradedSubspace) -> GradedSubspace {
        let parts = self.parts.iter().zip(&other.parts).map(|(a, b)| a.intersect(b)).collect();
        GradedSubspace::new(&self.ambient, parts)
    }

    pub fn contains_subspace(&self, other: &GradedSubspace) -> bool {
        self.parts.iter().zip(&other.parts).all(|(a, b)| a.contains_subspace(b))
    }

    pub fn same_as(&self, other: &GradedSubspace) -> bool {
        self.parts.iter().zip(&other.parts).all(|(a, b)| a.same_as(b))
    }

    /// Inclusion into the ambient space.
    pub fn embedding(&self) -> GradedOp {
        let s = self.space();
        let blocks = self.parts.iter().map(|p| Some(p.embedding())).collect();
        GradedOp::from_blocks(&s, &self.ambient, 0, blocks)
    }

    /// Whether `op` maps this subspace into itself on known degrees.
    pub fn preserved_by(&self, op: &GradedOp) -> Option<usize> {
        for k in 0..=self.ambient.top() {
            let kt = k as i64 + op.degree;
            if kt < 0 || kt as usize > self.ambient.top() {
                continue;
            }
            if let Some(m) = op.block_or_zero(k as i64) {
                let tgt = &self.parts[kt as usize];
                if !self.parts[k].basis().iter().all(|b| tgt.contains(&m.apply(b))) {
                    return Some(k);
                }
            }
        }
        None
    }
}

/// dim H^k = dim ker d_k − rank d_{k−1}, for degrees where both blocks are known.
pub fn cohomology_dims(d: &GradedOp) -> Vec<Option<usize>> {
    assert_eq!(d.degree, 1);
    let ranks: Vec<Option<usize>> = (0..=d.src.top()).map(|k| d.block_or_zero(k as i64).map(|m| m.rank())).collect();
    (0..=d.src.top())
        .map(|k| {
            let r = ranks[k]?;
            let prev = if k == 0 { 0 } else { ranks[k - 1]? };
            Some(d.src.dims[k] - r - prev)
        })
        .collect()
}

/// Flat index of a pair of basis vectors in degree `i + j` of `a⊗b`.
pub fn tensor_index(a: &GradedSpace, b: &GradedSpace, i: usize, ia: usize, j: usize, ib: usize) -> usize {
    GradedSpace::tensor_offset(a, b, i + j, i) + ia * b.dim(j as i64).unwrap_or(0) + ib
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn ext1() -> (GradedSpace, GradedOp) {
        // one odd generator y, d = 0, and ι with ι y = 1
        let s = GradedSpace::new(vec![1, 1], true);
        let iota = GradedOp::from_fn(&s, &s, -1, |k, _| if k == 1 { SparseVec::unit(0) } else { SparseVec::new() });
        (s, iota)
    }

    #[test]
    fn tensor_signs() {
        let (s, iota) = ext1();
        let id = GradedOp::identity(&s);
        let i1 = GradedOp::tensor(&iota, &id);
        let i2 = GradedOp::tensor(&id, &iota);
        // two contractions from different factors anticommute
        assert!(GradedOp::commutator(&i1, &i2).zero_check().ok());
        assert!(GradedOp::commutator(&i1, &i1).zero_check().ok());
        assert_eq!(s.tensor(&s).dims(), &[1, 2, 1]);
    }

    #[test]
    fn truncated_blocks_are_absent() {
        let s = GradedSpace::new(vec![1, 0, 1], false);
        let up = GradedOp::from_fn(&s, &s, 2, |_, _| SparseVec::unit(0));
        assert!(up.block(0).is_some());
        assert!(up.block(2).is_none());
        let twice = up.compose(&up);
        assert!(twice.block(0).is_none());
        assert_eq!(up.scale(&q(2)).block(0).unwrap().get(0, 0), q(2));
    }

    #[test]
    fn cohomology_of_a_point() {
        let s = GradedSpace::point();
        let d = GradedOp::zero(&s, &s, 1);
        assert_eq!(cohomology_dims(&d), vec![Some(1)]);
    }
}
