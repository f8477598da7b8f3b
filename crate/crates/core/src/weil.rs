//! The Weil algebra Wg = Sg*⊗∧g* at the element level: its differential, the
//! contraction action of Sg*⊗∧g and the horizontal projection.
//!
//! Weil elements are `MixedElt`s on `Side::GDual`; y^a is the blade {a} and
//! v^a the polynomial variable a.

use crate::element::{MixedElt, Side};
use crate::error::{Error, Result};
use crate::exterior;
use crate::lie::LieAlgebra;
use crate::rational::half;

/// y^a·w (left multiplication by a degree-one generator).
pub fn y_mul(a: usize, w: &MixedElt) -> MixedElt {
    exterior::left_index(a, w)
}

/// ι(e_a) w.
pub fn iota_e(a: usize, w: &MixedElt) -> MixedElt {
    exterior::contract_index(a, w)
}

/// L^W(e_a) = L^S(e_a) + L^∧(e_a).
pub fn lie_weil(g: &LieAlgebra, a: usize, w: &MixedElt) -> MixedElt {
    exterior::lie_derivative(g, a, w).add(&w.lie_derivative_s(g, a))
}

/// d^W = Σ_a y^a L^W(e_a) − d^∧ + Σ_a v^a ι(e_a).
pub fn weil_differential(g: &LieAlgebra, w: &MixedElt) -> MixedElt {
    let n = g.dim();
    let mut out = w.map_blades(|b, o| exterior::d_blade(g, b, o)).neg();
    for a in 0..n {
        out = out.add(&y_mul(a, &lie_weil(g, a, w)));
        out = out.add(&iota_e(a, w).mul_var(a));
    }
    out
}

/// d^W with the S-degree budget of a truncation at `cutoff`.
pub fn weil_differential_cut(g: &LieAlgebra, w: &MixedElt, cutoff: usize) -> Result<MixedElt> {
    w.ensure_side(Side::GDual, "Weil differential")?;
    let s = w.s_degree();
    if s + 1 > cutoff {
        return Err(Error::CutoffExceeded { degree: s, budget: cutoff.saturating_sub(1) });
    }
    Ok(weil_differential(g, w))
}

/// ι(m)w for m ∈ Sg*⊗∧g: the polynomial parts multiply, blades contract.
pub fn iota_action(m: &MixedElt, w: &MixedElt) -> Result<MixedElt> {
    exterior::contract(m, w)
}

/// e^{ι(f)} w = ι(e^f) w for even f.
pub fn exp_iota(f: &MixedElt, w: &MixedElt) -> Result<MixedElt> {
    let ef = f.exp_nilpotent()?;
    exterior::contract(&ef, w)
}

/// P_hor = ι(e_1)y^1 ∘ ι(e_2)y^2 ∘ … ∘ ι(e_n)y^n.
pub fn horizontal_projection(n: usize, w: &MixedElt) -> MixedElt {
    let mut out = w.clone();
    for a in (0..n).rev() {
        out = iota_e(a, &y_mul(a, &out));
    }
    out
}

/// Right-hand side of the conjugation formula for d^W:
/// d^W w + ι(∂f + ½[f,f]) w + Σ_a ι(ι*(e^a)f) L^S(e_a) w.
pub fn conjugation_rhs(g: &LieAlgebra, f: &MixedElt, w: &MixedElt) -> MixedElt {
    let curv = f
        .map_blades(|b, o| exterior::boundary_blade(g, b, o))
        .add(&exterior::schouten_unchecked(g, f, f).scale(&half()));
    let mut out = weil_differential(g, w).add(&exterior::contract_unchecked(&curv, w));
    for a in 0..g.dim() {
        let fa = exterior::contract_index(a, f);
        out = out.add(&exterior::contract_unchecked(&fa, &w.lie_derivative_s(g, a)));
    }
    out
}

/// e^{−ι(f)} d^W e^{ι(f)} w.
pub fn conjugated_differential(g: &LieAlgebra, f: &MixedElt, w: &MixedElt) -> Result<MixedElt> {
    let inner = exp_iota(f, w)?;
    exp_iota(&f.neg(), &weil_differential(g, &inner))
}

/// Total-degree bookkeeping: 2·(S-degree) + blade size.
pub fn weil_degree(s: usize, k: usize) -> usize {
    2 * s + k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blade::Blade;
    use crate::poly::Poly;

    fn y(n: usize, a: usize) -> MixedElt {
        MixedElt::generator(Side::GDual, n, a)
    }

    #[test]
    fn abelian_weil_differential_on_generators() {
        let g = LieAlgebra::abelian(2).unwrap();
        let w = weil_differential(&g, &y(2, 1));
        assert_eq!(w, MixedElt::from_poly(Side::GDual, 2, &Poly::var(1)));
    }

    #[test]
    fn weil_differential_squares_to_zero() {
        let g = LieAlgebra::su2();
        let w = y(3, 0).wedge(&y(3, 2)).mul_var(1).add(&y(3, 1).mul_var(0).mul_var(0));
        let dw = weil_differential(&g, &w);
        assert!(weil_differential(&g, &dw).is_zero());
        assert!(weil_differential_cut(&g, &w, 2).is_err());
    }

    #[test]
    fn horizontal_projection_basics() {
        let n = 3;
        assert!(horizontal_projection(n, &y(n, 0)).is_zero());
        let v = MixedElt::from_poly(Side::GDual, n, &Poly::var(0));
        assert_eq!(horizontal_projection(n, &v), v);
        let top = MixedElt::term(Side::GDual, n, Blade(0b111), Poly::var(2));
        assert!(horizontal_projection(n, &top).is_zero());
    }
}
