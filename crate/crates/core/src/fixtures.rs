//! Reference inputs shared by tests, examples and the command line.

use num_complex::Complex64;

use crate::error::Result;
use crate::grid::{CosetGrid, TestFunction};
use crate::mask::TrigPolynomial;
use crate::padic::PAdicRational;

/// Prescribed zeros `1/4, 3/8, 7/16, 15/16` of the degree-4 dyadic mask whose
/// scaling function has `supp φ̂ = B_1(0)` for `N = 2`.
pub fn wide_support_zeros() -> Vec<PAdicRational> {
    [(1, 2), (3, 3), (7, 4), (15, 4)]
        .iter()
        .map(|&(l, s)| PAdicRational::from_ratio(2, l, s))
        .collect()
}

pub fn wide_support_mask() -> Result<TrigPolynomial> {
    TrigPolynomial::from_zeros(2, 4, &wide_support_zeros())
}

/// Indicator of the unit ball, the Haar scaling function.
pub fn haar_phi(p: u32) -> Result<TestFunction> {
    TestFunction::indicator_ball(p, 0)
}

/// `ψ = χ_2(x/2)Ω(|x|_2)`, values `[1, −1]` on `(N=0, M=1)`.
pub fn kozyrev_psi() -> Result<TestFunction> {
    TestFunction::new(
        CosetGrid::new(2, 0, 1)?,
        vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
    )
}

/// A function in `D_1^1` (p = 2) whose refinement system is inconsistent:
/// `φ̂ = [1, 1, 0, 1]` on nodes `l/2`, so `φ̂(ξ) ≠ 0 = φ̂(2ξ)` at `ξ = 1`.
pub fn non_refinable() -> Result<TestFunction> {
    let v = [1.5, 0.5, -0.5, 0.5]
        .iter()
        .map(|&x| Complex64::new(x, 0.0))
        .collect();
    TestFunction::new(CosetGrid::new(2, 1, 1)?, v)
}
