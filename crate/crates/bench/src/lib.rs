//! Shared fixtures for the criterion benches.

use weilmc::hodge::HodgePackage;
use weilmc::mc::{solve_mc, McSolution};
use weilmc::LieAlgebra;

/// Algebras benched by default, smallest first.
pub const ALGEBRAS: &[&str] = &["su2", "su2+su2", "sl3"];

pub fn package(name: &str) -> HodgePackage {
    let g = LieAlgebra::builtin(name).expect("built-in algebra");
    HodgePackage::build(&g).expect("valid algebra")
}

pub fn solved(name: &str) -> (HodgePackage, McSolution) {
    let pkg = package(name);
    let mc = solve_mc(&pkg).expect("solver succeeds");
    (pkg, mc)
}
