//! The Koszul algebra K(P) = SP̃*⊗∧P* on abstract generators: p^j even of
//! degree deg c_j + 1 and c^j odd of degree deg c_j, with d = Σ_j p^j ι(c_j).

use std::collections::HashMap;

use crate::graded::{GradedOp, GradedSpace};
use crate::linalg::SparseVec;
use crate::rational::{q, sign, Q};

/// A basis element p^e ⊗ c^{j1}∧…∧c^{jk}, the c-indices as a bit mask.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KoszulMonomial {
    pub exps: Vec<u32>,
    pub mask: u32,
}

#[derive(Clone, Debug)]
pub struct KoszulAlgebra {
    degrees: Vec<usize>,
    cutoff: usize,
    basis: Vec<Vec<KoszulMonomial>>,
    index: HashMap<KoszulMonomial, usize>,
    space: GradedSpace,
}

impl KoszulAlgebra {
    /// `degrees` are the (odd) degrees of the c_j; p-monomials are kept up
    /// to S-degree `cutoff`, with p^j of S-degree (deg c_j + 1)/2.
    pub fn new(degrees: &[usize], cutoff: usize) -> Self {
        let r = degrees.len();
        let top = 2 * cutoff + 1;
        let mut basis: Vec<Vec<KoszulMonomial>> = vec![Vec::new(); top + 1];
        let mut exps = vec![0u32; r];
        fn rec(j: usize, budget: usize, exps: &mut Vec<u32>, degrees: &[usize], out: &mut Vec<Vec<u32>>) {
            if j == degrees.len() {
                out.push(exps.clone());
                return;
            }
            let s = degrees[j].div_ceil(2);
            let mut e = 0;
            while e * s <= budget {
                exps[j] = e as u32;
                rec(j + 1, budget - e * s, exps, degrees, out);
                e += 1;
            }
            exps[j] = 0;
        }
        let mut all = Vec::new();
        rec(0, cutoff, &mut exps, degrees, &mut all);
        for e in all {
            let pdeg: usize = e.iter().zip(degrees).map(|(x, d)| *x as usize * (d + 1)).sum();
            for mask in 0..(1u32 << r) {
                let cdeg: usize = (0..r).filter(|j| mask >> j & 1 == 1).map(|j| degrees[j]).sum();
                let k = pdeg + cdeg;
                if k <= top {
                    basis[k].push(KoszulMonomial { exps: e.clone(), mask });
                }
            }
        }
        for b in &mut basis {
            b.sort_by(|x, y| x.exps.cmp(&y.exps).then(x.mask.cmp(&y.mask)));
        }
        let index = basis.iter().flat_map(|b| b.iter().cloned().enumerate().map(|(i, m)| (m, i))).collect();
        let space = GradedSpace::new(basis.iter().map(|b| b.len()).collect(), false);
        KoszulAlgebra { degrees: degrees.to_vec(), cutoff, basis, index, space }
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn c_degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn monomials(&self, k: usize) -> &[KoszulMonomial] {
        &self.basis[k]
    }

    pub fn degree_of(&self, m: &KoszulMonomial) -> usize {
        let r = self.rank();
        m.exps.iter().zip(&self.degrees).map(|(x, d)| *x as usize * (d + 1)).sum::<usize>()
            + (0..r).filter(|j| m.mask >> j & 1 == 1).map(|j| self.degrees[j]).sum::<usize>()
    }

    fn op<F>(&self, degree: i64, f: F) -> GradedOp
    where
        F: Fn(&KoszulMonomial) -> Option<(KoszulMonomial, Q)>,
    {
        GradedOp::from_fn(&self.space, &self.space, degree, |k, j| match f(&self.basis[k][j]) {
            Some((m, c)) => SparseVec::from_pairs(vec![(self.index[&m], c)]),
            None => SparseVec::new(),
        })
    }

    fn p_degree(&self, j: usize) -> i64 {
        self.degrees[j] as i64 + 1
    }

    pub fn mult_p(&self, j: usize) -> GradedOp {
        self.op(self.p_degree(j), |m| {
            let mut e = m.exps.clone();
            e[j] += 1;
            Some((KoszulMonomial { exps: e, mask: m.mask }, q(1)))
        })
    }

    /// ∂/∂p^j.
    pub fn deriv_p(&self, j: usize) -> GradedOp {
        self.op(-self.p_degree(j), |m| {
            if m.exps[j] == 0 {
                return None;
            }
            let mut e = m.exps.clone();
            e[j] -= 1;
            Some((KoszulMonomial { exps: e, mask: m.mask }, q(m.exps[j] as i64)))
        })
    }

    /// Left multiplication by c^j.
    pub fn mult_c(&self, j: usize) -> GradedOp {
        self.op(self.degrees[j] as i64, |m| {
            if m.mask >> j & 1 == 1 {
                return None;
            }
            let below = (m.mask & ((1 << j) - 1)).count_ones();
            Some((KoszulMonomial { exps: m.exps.clone(), mask: m.mask | 1 << j }, sign(below % 2 == 1)))
        })
    }

    /// ι(c_j), the odd derivation with ι(c_j)c^i = δ_ij.
    pub fn iota_c(&self, j: usize) -> GradedOp {
        self.op(-(self.degrees[j] as i64), |m| {
            if m.mask >> j & 1 == 0 {
                return None;
            }
            let below = (m.mask & ((1 << j) - 1)).count_ones();
            Some((KoszulMonomial { exps: m.exps.clone(), mask: m.mask & !(1 << j) }, sign(below % 2 == 1)))
        })
    }

    /// d_K = Σ_j p^j ι(c_j).
    pub fn differential(&self) -> GradedOp {
        let terms: Vec<GradedOp> = (0..self.rank()).map(|j| self.mult_p(j).compose(&self.iota_c(j))).collect();
        GradedOp::sum(&terms).unwrap_or_else(|| GradedOp::zero(&self.space, &self.space, 1))
    }

    pub fn label(&self, m: &KoszulMonomial) -> String {
        let mut parts = Vec::new();
        for (j, e) in m.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("p{}", j + 1)),
                _ => parts.push(format!("p{}^{}", j + 1, e)),
            }
        }
        for j in 0..self.rank() {
            if m.mask >> j & 1 == 1 {
                parts.push(format!("c{}", j + 1));
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("·")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::cohomology_dims;

    #[test]
    fn su2_koszul_basis() {
        let k = KoszulAlgebra::new(&[3], 3);
        // (p)^m and (p)^m c in degrees 4m and 4m + 3
        assert_eq!(k.space().dims(), &[1, 0, 0, 1, 1, 0, 0, 1]);
        let d = k.differential();
        assert!(d.compose(&d).zero_check().ok());
        let h = cohomology_dims(&d);
        assert_eq!(h[0], Some(1));
        assert!(h[1..h.len() - 1].iter().all(|x| *x == Some(0)));
    }

    #[test]
    fn contraction_is_odd_derivation() {
        let k = KoszulAlgebra::new(&[3, 5], 4);
        for i in 0..2 {
            for j in 0..2 {
                let c = GradedOp::commutator(&k.iota_c(i), &k.mult_c(j));
                let expected = if i == j { GradedOp::identity(k.space()) } else { GradedOp::zero(k.space(), k.space(), c.degree()) };
                assert!(c.compare(&expected).ok());
            }
        }
    }
}
