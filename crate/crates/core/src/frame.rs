//! Gram matrices of translate families and their frame bounds.
//!
//! A finite family spans a finite-dimensional space; its optimal frame bounds
//! for that span are the extreme nonzero eigenvalues of its Gram matrix.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::TestFunction;
use crate::linalg::{hermitian_eigenvalues, CMatrix};
use crate::padic::{enumerate_shifts, Valuation};

/// Eigenvalues below `RANK_RTOL · λ_max` count as zero.
pub const RANK_RTOL: f64 = 1e-9;

/// Tolerance on bounds when the radius grows by two.
pub const STABILITY_TOL: f64 = 1e-8;

/// `{p^{j/2} g(p^{−j}x − a) : a ∈ I_p ∪ {0}, |a|_p ≤ p^R}`.
#[derive(Clone, Debug)]
pub struct TranslateFamily {
    pub generator: TestFunction,
    pub scale: i64,
    pub radius_exp: u32,
}

impl TranslateFamily {
    pub fn new(generator: TestFunction, scale: i64, radius_exp: u32) -> Self {
        Self {
            generator,
            scale,
            radius_exp,
        }
    }

    pub fn members(&self) -> Result<Vec<TestFunction>> {
        let p = self.generator.p();
        let dilated = self.generator.dilate(self.scale);
        let weight = Complex64::new((p as f64).powf(self.scale as f64 / 2.0), 0.0);
        enumerate_shifts(p, self.radius_exp)
            .iter()
            .map(|a| Ok(dilated.shift(&a.scale_pow(self.scale))?.scale(weight)))
            .collect()
    }
}

/// `G_{ik} = ⟨f_i, f_k⟩`.
pub fn gram_of(members: &[TestFunction]) -> Result<CMatrix> {
    let first = members.first().ok_or(Error::DegenerateFamily)?;
    let grid = members
        .iter()
        .skip(1)
        .try_fold(*first.grid(), |g, f| g.join(f.grid()))?;
    let embedded: Vec<TestFunction> = members
        .iter()
        .map(|f| f.embed_into(&grid))
        .collect::<Result<_>>()?;
    let w = grid.cell_measure();
    let n = embedded.len();
    let mut g = CMatrix::zeros(n, n);
    for i in 0..n {
        for k in 0..n {
            let s: Complex64 = embedded[i]
                .values()
                .iter()
                .zip(embedded[k].values())
                .map(|(a, b)| a * b.conj())
                .sum();
            g[(i, k)] = s * w;
        }
    }
    Ok(g)
}

pub fn gram_matrix(family: &TranslateFamily) -> Result<CMatrix> {
    gram_of(&family.members()?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    pub gram_eigenvalues: Vec<f64>,
    pub rank: usize,
    pub rank_tolerance: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
}

fn spectrum(g: &CMatrix) -> Result<Spectrum> {
    let ev = hermitian_eigenvalues(g);
    let top = ev.last().copied().unwrap_or(0.0);
    let cut = RANK_RTOL * top;
    if top <= 0.0 || !top.is_finite() {
        return Err(Error::DegenerateFamily);
    }
    let nonzero: Vec<f64> = ev.iter().copied().filter(|&e| e > cut).collect();
    Ok(Spectrum {
        rank: nonzero.len(),
        rank_tolerance: cut,
        lower_bound: nonzero[0],
        upper_bound: top,
        gram_eigenvalues: ev,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrameReport {
    pub gram_eigenvalues: Vec<f64>,
    pub rank: usize,
    pub rank_tolerance: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    /// Absent when the block structure is undefined (odd `p`).
    pub block_orthogonal: Option<bool>,
    pub stable_under_radius_growth: bool,
    pub radius_exp: u32,
    pub bounds_at_radius_plus_two: (f64, f64),
}

impl FrameReport {
    fn assemble(s: Spectrum, block: Option<bool>, radius: u32, wider: &Spectrum) -> Self {
        let stable = (s.lower_bound - wider.lower_bound).abs() <= STABILITY_TOL
            && (s.upper_bound - wider.upper_bound).abs() <= STABILITY_TOL;
        Self {
            gram_eigenvalues: s.gram_eigenvalues,
            rank: s.rank,
            rank_tolerance: s.rank_tolerance,
            lower_bound: s.lower_bound,
            upper_bound: s.upper_bound,
            block_orthogonal: block,
            stable_under_radius_growth: stable,
            radius_exp: radius,
            bounds_at_radius_plus_two: (wider.lower_bound, wider.upper_bound),
        }
    }
}

/// Frame bounds of the family on its span, with the radius-growth comparison.
pub fn frame_bounds(family: &TranslateFamily, tol: f64) -> Result<FrameReport> {
    let s = spectrum(&gram_matrix(family)?)?;
    let wider = TranslateFamily {
        radius_exp: family.radius_exp + 2,
        ..family.clone()
    };
    let w = spectrum(&gram_matrix(&wider)?)?;
    let g = &family.generator;
    let block = (g.p() == 2 && g.grid().support_exp() >= 0)
        .then(|| block_orthogonality(g, g.grid().support_exp(), 2, tol))
        .transpose()?;
    Ok(FrameReport::assemble(s, block, family.radius_exp, &w))
}

/// Translates of `ψ` by `|a| ≤ 2^N` against translates by `|a| = 2^{N+n}`,
/// `1 ≤ n ≤ n_max`, for a declared support exponent `N`.
pub fn block_orthogonality(
    psi: &TestFunction,
    declared_n: i64,
    n_max: u32,
    tol: f64,
) -> Result<bool> {
    if psi.p() != 2 {
        return Err(Error::NotApplicable(
            "block decomposition is defined for p = 2".into(),
        ));
    }
    if declared_n < 0 {
        return Err(Error::Precondition(
            "declared support exponent must be nonnegative".into(),
        ));
    }
    let n = declared_n as u32;
    let base: Vec<TestFunction> = enumerate_shifts(2, n)
        .iter()
        .map(|a| psi.shift(a))
        .collect::<Result<_>>()?;
    for level in 1..=n_max {
        let radius = -((n + level) as i64);
        for b in enumerate_shifts(2, n + level) {
            if b.norm_exp() != Valuation::Finite(radius) {
                continue;
            }
            let moved = psi.shift(&b)?;
            for f in &base {
                if f.inner_product(&moved)?.norm() > tol {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Bounds of the union of the scale-`j` families, `j_min ≤ j ≤ j_max`.
pub fn multi_scale_bounds(
    psi: &TestFunction,
    j_min: i64,
    j_max: i64,
    radius_exp: u32,
) -> Result<FrameReport> {
    if j_min > j_max {
        return Err(Error::DegenerateFamily);
    }
    let collect = |r: u32| -> Result<Vec<TestFunction>> {
        let mut all = Vec::new();
        for j in j_min..=j_max {
            all.extend(TranslateFamily::new(psi.clone(), j, r).members()?);
        }
        Ok(all)
    };
    let s = spectrum(&gram_of(&collect(radius_exp)?)?)?;
    let w = spectrum(&gram_of(&collect(radius_exp + 2)?)?)?;
    Ok(FrameReport::assemble(s, None, radius_exp, &w))
}

/// Largest entry of the cross-Gram between the scale-`j` and scale-`k` families.
pub fn cross_scale_max(psi: &TestFunction, j: i64, k: i64, radius_exp: u32) -> Result<f64> {
    let a = TranslateFamily::new(psi.clone(), j, radius_exp).members()?;
    let b = TranslateFamily::new(psi.clone(), k, radius_exp).members()?;
    let mut worst: f64 = 0.0;
    for f in &a {
        for g in &b {
            worst = worst.max(f.inner_product(g)?.norm());
        }
    }
    Ok(worst)
}

/// `max |G − G^H|`.
pub fn hermiticity_defect(g: &CMatrix) -> f64 {
    (g - g.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}
