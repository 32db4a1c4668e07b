//! Scaling functions from masks and their certification.
//!
//! For a mask `m` with `m(0) = 1` and `N ≥ 0` the scaling function is given in
//! frequency by `φ̂(ξ) = Π_{r ≥ −N} m(p^r ξ)`, a finite product for
//! `ξ ∈ ℤ[1/p]` because `m(p^r ξ) = 1` once `p^r ξ` is a p-adic integer. On the
//! nodes `l/p^M` this reads `φ̂(l/p^M) = Π_{t=1}^{M+N} m(l/p^t)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{CosetGrid, TestFunction};
use crate::linalg::{min_norm_solve, CMatrix, CVector};
use crate::mask::TrigPolynomial;
use crate::oracle::{exact_sphere_vanishes, exact_zero_indices, ExactMask};
use crate::padic::{enumerate_shifts, PAdicRational, Valuation};

/// Residual separating refinable from non-refinable functions.
pub const REFINABLE_THRESHOLD: f64 = 1e-8;

/// Largest sphere table (as `log2` of its size) the support search will build.
pub const MAX_SEARCH_LOG2: u32 = 24;

/// Lazily built tables `m(k/p^t)` for `k < p^t`.
struct FactorTables<'a> {
    mask: &'a TrigPolynomial,
    tables: Vec<Vec<Complex64>>,
}

impl<'a> FactorTables<'a> {
    fn new(mask: &'a TrigPolynomial) -> Self {
        Self {
            mask,
            tables: vec![vec![Complex64::new(1.0, 0.0)]],
        }
    }

    fn level(&mut self, t: u32) -> &[Complex64] {
        while self.tables.len() <= t as usize {
            let next = self.tables.len() as u32;
            self.tables.push(self.mask.eval_table(next));
        }
        &self.tables[t as usize]
    }

    /// Product `Π_{t=1}^{depth} m(l/p^t)`, exactly zero when some factor is at most `tol`.
    fn product(&mut self, l: usize, depth: u32, tol: f64) -> Complex64 {
        let p = self.mask.p() as usize;
        let mut acc = Complex64::new(1.0, 0.0);
        let mut modulus = 1usize;
        for t in 1..=depth {
            modulus *= p;
            let f = self.level(t)[l % modulus];
            if f.norm() <= tol {
                return Complex64::new(0.0, 0.0);
            }
            acc *= f;
        }
        acc
    }

    fn vanishes(&mut self, l: usize, depth: u32, tol: f64) -> bool {
        let p = self.mask.p() as usize;
        let mut modulus = 1usize;
        (1..=depth).any(|t| {
            modulus *= p;
            self.level(t)[l % modulus].norm() <= tol
        })
    }
}

/// A scaling function given by its mask, in frequency.
#[derive(Clone, Debug, Serialize)]
pub struct Scaling {
    pub mask: TrigPolynomial,
    /// `N`: the refinement uses shifts `k/p^{N+1}`.
    pub refinement_exp: i64,
    /// `M`: `supp φ̂ ⊆ B_M(0)`.
    pub support_exp: i64,
    pub phi_hat: TestFunction,
}

impl Scaling {
    pub fn phi(&self) -> TestFunction {
        self.phi_hat.inverse_fourier()
    }
}

/// `φ̂(ξ) = Π_{r ≥ −N} m(p^r ξ)` at an arbitrary point.
pub fn product_formula(m: &TrigPolynomial, n: i64, xi: &PAdicRational) -> Complex64 {
    let stop = match xi.norm_exp() {
        Valuation::Infinite => return Complex64::new(1.0, 0.0),
        Valuation::Finite(v) => -v,
    };
    (-n..stop).map(|r| m.eval(&xi.scale_pow(r))).product()
}

/// Build `φ̂` from `m` and find the least `M ≥ −N` with `supp φ̂ ⊆ B_M(0)`.
///
/// `M` is accepted once `φ̂` vanishes at every `l/p^{M+1}` with `p ∤ l`; a
/// point of a larger sphere then has a vanishing factor as well.
pub fn scaling_from_mask(m: &TrigPolynomial, n: i64, m_max: i64, tol: f64) -> Result<Scaling> {
    if n < 0 {
        return Err(Error::Precondition(format!(
            "refinement exponent N = {n} must be nonnegative"
        )));
    }
    let at_zero = m.eval(&PAdicRational::zero(m.p()));
    if (at_zero - 1.0).norm() > 1e-9 {
        return Err(Error::Precondition(format!(
            "mask must satisfy m(0) = 1, got {at_zero}"
        )));
    }
    let p = m.p() as usize;
    let mut tables = FactorTables::new(m);
    let mut support = None;
    for big_m in -n..=m_max {
        let depth = (big_m + n + 1) as u32;
        if depth as f64 * (p as f64).log2() > MAX_SEARCH_LOG2 as f64 {
            return Err(Error::NoCompactSupport {
                searched_up_to: big_m - 1,
            });
        }
        let count = p.pow(depth);
        if (1..count)
            .filter(|l| l % p != 0)
            .all(|l| tables.vanishes(l, depth, tol))
        {
            support = Some(big_m);
            break;
        }
    }
    let big_m = support.ok_or(Error::NoCompactSupport {
        searched_up_to: m_max,
    })?;
    let grid = CosetGrid::new(m.p(), big_m, n)?;
    let depth = grid.depth();
    let values = (0..grid.size())
        .map(|l| tables.product(l, depth, tol))
        .collect();
    Ok(Scaling {
        mask: m.clone(),
        refinement_exp: n,
        support_exp: big_m,
        phi_hat: TestFunction::new(grid, values)?,
    })
}

/// Least-squares solution of `φ̂(ξ) = m(ξ/p^N) φ̂(pξ)` over the `p^{N+1}`
/// coefficients of `m`, with one equation per node `ξ = l/p^{M+1}`.
pub fn extract_mask(phi: &TestFunction) -> Result<(TrigPolynomial, f64)> {
    let (mask, residual) = refinement_fit(phi)?;
    if residual > REFINABLE_THRESHOLD {
        return Err(Error::Inconsistent {
            residual,
            threshold: REFINABLE_THRESHOLD,
        });
    }
    Ok((mask, residual))
}

/// Same system as [`extract_mask`], returned regardless of consistency.
pub fn refinement_fit(phi: &TestFunction) -> Result<(TrigPolynomial, f64)> {
    let grid = phi.grid();
    if grid.support_exp() < 0 {
        return Err(Error::Precondition(
            "refinement needs support_exp N ≥ 0".into(),
        ));
    }
    let p = grid.p() as usize;
    let n = grid.support_exp() as u32;
    let m = grid.constancy_exp();
    let hat = phi.fourier();
    let hv = hat.values();
    let unknowns = p.pow(n + 1);
    let level = (m + n as i64 + 1) as u32;
    let rows = p.pow(level);
    let mut a = CMatrix::zeros(rows, unknowns);
    let mut b = CVector::zeros(rows);
    let roots: Vec<Complex64> = (0..rows)
        .map(|r| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * r as f64 / rows as f64))
        .collect();
    for l in 0..rows {
        let coarse = hv[l % hv.len()];
        for k in 0..unknowns {
            a[(l, k)] = roots[(k * l) % rows] * coarse / p as f64;
        }
        if l % p == 0 {
            b[l] = hat.evaluate(&PAdicRational::new(grid.p(), (l / p) as u64, -m));
        }
    }
    let (h, residual) = min_norm_solve(&a, &b);
    Ok((
        TrigPolynomial::new(grid.p(), h.iter().cloned().collect())?,
        residual,
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroSet {
    pub count: usize,
    pub indices: Vec<usize>,
}

/// Indices `l < p^{M+N}` with `|φ̂(l/p^M)| ≤ tol`.
pub fn zero_count(phi_hat: &TestFunction, tol: f64) -> ZeroSet {
    let indices: Vec<usize> = phi_hat
        .values()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.norm() <= tol)
        .map(|(l, _)| l)
        .collect();
    ZeroSet {
        count: indices.len(),
        indices,
    }
}

/// `⟨φ, φ(·−a)⟩ = δ_{a0}` for `a ∈ I_p`, `|a| ≤ p^N`, and `= 0` on the next sphere.
pub fn orthonormality_gram(phi: &TestFunction, tol: f64) -> bool {
    let p = phi.p();
    let n = phi.grid().support_exp().max(0) as u32;
    for a in enumerate_shifts(p, n) {
        let target = if a.is_zero() { 1.0 } else { 0.0 };
        match phi.shift(&a).and_then(|s| phi.inner_product(&s)) {
            Ok(v) if (v - target).norm() <= tol => {}
            _ => return false,
        }
    }
    enumerate_shifts(p, n + 1)
        .into_iter()
        .filter(|a| a.norm_exp() == Valuation::Finite(-(n as i64) - 1))
        .all(|a| matches!(phi.shift(&a).and_then(|s| phi.inner_product(&s)), Ok(v) if v.norm() <= tol))
}

/// `S_k = Σ_l |φ̂(l/p^M)|² e^{2πi lk/p^{M+N}} = p^N δ_{k0}` for `k < p^N`.
pub fn orthonormality_spectral(phi_hat: &TestFunction, tol: f64) -> bool {
    let grid = phi_hat.grid();
    let p = grid.p();
    let n = grid.constancy_exp();
    if n < 0 {
        return false;
    }
    let power: Vec<Complex64> = phi_hat
        .values()
        .iter()
        .map(|v| Complex64::new(v.norm_sqr(), 0.0))
        .collect();
    let sums = crate::fft::transform(p, &power, crate::fft::Direction::Positive);
    let lattice = (p as f64).powi(n as i32);
    sums.iter()
        .take((p as usize).pow(n as u32))
        .enumerate()
        .all(|(k, s)| {
            let target = if k == 0 { lattice } else { 0.0 };
            (s - target).norm() <= tol * lattice.max(1.0)
        })
}

/// Modulus pattern of masks with orthonormal scaling functions in `D_N^0`:
/// `m(k/p^{N+1}) = 0` for `p ∤ k` and `|m(k/p^{N+1})| = 1` for `p | k`.
pub fn classify_orthogonal_mask(m: &TrigPolynomial, n: i64, tol: f64) -> Result<bool> {
    let at_zero = m.eval(&PAdicRational::zero(m.p()));
    if (at_zero - 1.0).norm() > 1e-9 {
        return Err(Error::Precondition(format!(
            "mask must satisfy m(0) = 1, got {at_zero}"
        )));
    }
    if n < 0 {
        return Err(Error::Precondition(format!("N = {n} must be nonnegative")));
    }
    let p = m.p() as usize;
    let level = (n + 1) as u32;
    let table = m.eval_table(level);
    Ok(table.iter().enumerate().skip(1).all(|(k, v)| {
        if k % p == 0 {
            (v.norm() - 1.0).abs() <= tol
        } else {
            v.norm() <= tol
        }
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    /// `∪_j supp φ̂(p^j ·) = ℚ_p`.
    pub holds: bool,
    pub nonzero_at_origin: bool,
    /// The dilated supports cover `ℚ_p \ {0}`.
    pub punctured_cover: bool,
}

/// Whether the dilates of `supp φ̂` exhaust `ℚ_p`.
///
/// `φ̂` is constant on cosets of `B_{−N}`, so the nonzero slices of the spheres
/// `S_γ`, `−N ≤ γ ≤ M`, rescaled to `S_0`, are unions of classes of units
/// modulo `p^{M+N}`; the cover is complete iff every class is hit.
pub fn density_criterion(phi_hat: &TestFunction, tol: f64) -> DensityReport {
    let grid = phi_hat.grid();
    let p = grid.p();
    let big_m = grid.support_exp();
    let n = grid.constancy_exp();
    let nonzero_at_origin = phi_hat.values()[0].norm() > tol;
    let depth = grid.depth();
    let classes = (p as u64).pow(depth);
    let punctured_cover = (1..classes.max(2)).filter(|u| u % p as u64 != 0).all(|u| {
        (-n..=big_m).any(|gamma| phi_hat.evaluate(&PAdicRational::new(p, u, -gamma)).norm() > tol)
    });
    DensityReport {
        holds: nonzero_at_origin && punctured_cover,
        nonzero_at_origin,
        punctured_cover,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactCertificate {
    pub zero_indices: Vec<usize>,
    pub zero_count: usize,
    pub sphere_vanishes: bool,
    pub agrees_with_float: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MraReport {
    pub p: u32,
    pub support_exp: i64,
    pub constancy_exp: i64,
    pub refinable: bool,
    pub extracted_mask: Option<TrigPolynomial>,
    pub residual: f64,
    pub residual_threshold: f64,
    pub mask_normalization: &'static str,
    pub zero_count: usize,
    pub zero_indices: Vec<usize>,
    pub threshold: u64,
    pub is_mra: bool,
    pub phi_hat_at_zero: Complex64,
    pub orthonormal_gram: bool,
    pub orthonormal_spectral: bool,
    /// Least `s` with `supp φ̂ ⊆ B_s(0)`; absent when `φ̂ ≡ 0`.
    pub frequency_support_exp: Option<i64>,
    pub density: DensityReport,
    pub exact: Option<ExactCertificate>,
}

impl MraReport {
    fn verdict(&self) -> bool {
        self.refinable
            && self.zero_count as u64 >= self.threshold
            && self.phi_hat_at_zero.norm() > 0.0
    }

    /// Replace the float zero set by the exact one computed from `mask`.
    pub fn apply_exact(&mut self, mask: &ExactMask) {
        let zeros = exact_zero_indices(mask, self.support_exp, self.constancy_exp);
        let sphere = exact_sphere_vanishes(mask, self.support_exp, self.constancy_exp);
        let agrees = zeros == self.zero_indices;
        self.zero_count = zeros.len();
        self.zero_indices = zeros.clone();
        self.exact = Some(ExactCertificate {
            zero_count: zeros.len(),
            zero_indices: zeros,
            sphere_vanishes: sphere,
            agrees_with_float: agrees,
        });
        self.is_mra = self.verdict();
    }
}

/// Certify `φ ∈ D_N^M`: refinability, the zero-count condition and `φ̂(0) ≠ 0`.
pub fn verify_mra(phi: &TestFunction, tol: f64) -> MraReport {
    let phi = if phi.grid().support_exp() < 0 {
        phi.embed(0, phi.grid().constancy_exp())
            .unwrap_or_else(|_| phi.clone())
    } else {
        phi.clone()
    };
    let grid = *phi.grid();
    let p = grid.p();
    let n = grid.support_exp();
    let m = grid.constancy_exp();
    let hat = phi.fourier();
    let (mask, residual) = match refinement_fit(&phi) {
        Ok((mask, r)) => (Some(mask), r),
        Err(_) => (None, f64::INFINITY),
    };
    let refinable = residual <= REFINABLE_THRESHOLD;
    let zeros = zero_count(&hat, tol);
    let threshold = (p as u64)
        .pow(grid.depth())
        .saturating_sub((p as u64).pow(n as u32));
    let phi_hat_at_zero = hat.values()[0];
    let at_zero = if phi_hat_at_zero.norm() > tol {
        phi_hat_at_zero
    } else {
        Complex64::new(0.0, 0.0)
    };
    let mut report = MraReport {
        p,
        support_exp: n,
        constancy_exp: m,
        refinable,
        extracted_mask: if refinable { mask } else { None },
        residual,
        residual_threshold: REFINABLE_THRESHOLD,
        mask_normalization: "min-norm",
        zero_count: zeros.count,
        zero_indices: zeros.indices,
        threshold,
        is_mra: false,
        phi_hat_at_zero: at_zero,
        orthonormal_gram: orthonormality_gram(&phi, tol),
        orthonormal_spectral: orthonormality_spectral(&hat, tol),
        frequency_support_exp: hat.support_exp_within(tol),
        density: density_criterion(&hat, tol),
        exact: None,
    };
    report.is_mra = report.verdict();
    report
}

/// Build the scaling function of `m` and certify it; with `exact`, zero sets
/// are re-decided in the cyclotomic field when the coefficients allow it.
pub fn certify_mask(
    m: &TrigPolynomial,
    n: i64,
    m_max: i64,
    tol: f64,
    exact: Option<&ExactMask>,
) -> Result<(Scaling, MraReport)> {
    let scaling = scaling_from_mask(m, n, m_max, tol)?;
    let mut report = verify_mra(&scaling.phi(), tol);
    if let Some(e) = exact {
        report.apply_exact(e);
    }
    Ok((scaling, report))
}

/// False when an orthogonal MRA scaling function with `φ̂(0) ≠ 0` has
/// `supp φ̂` beyond `B_0(0)`.
pub fn orthogonal_support_consistent(report: &MraReport) -> bool {
    let offending = report.is_mra
        && report.orthonormal_gram
        && report.phi_hat_at_zero.norm() > 0.0
        && report.frequency_support_exp.is_some_and(|s| s > 0);
    !offending
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShiftClosure {
    pub holds: bool,
    pub worst_residual: f64,
}

/// Whether every `φ(·−b)`, `b ∈ I_p`, `|b| ≤ p^N`, is a combination of
/// `φ(x/p − k/p^{N+1})`, `k < p^{N+1}`, decided by least squares on `(N, M+1)`.
pub fn shift_closure(phi: &TestFunction, tol: f64) -> Result<ShiftClosure> {
    let grid = *phi.grid();
    let p = grid.p();
    let n = grid.support_exp();
    if n < 0 {
        return Err(Error::Precondition(
            "shift closure needs support_exp N ≥ 0".into(),
        ));
    }
    let target = CosetGrid::new(p, n, grid.constancy_exp() + 1)?;
    let half = phi.dilate(1);
    let cols = (p as usize).pow(n as u32 + 1);
    let mut a = CMatrix::zeros(target.size(), cols);
    for k in 0..cols {
        let col = half
            .shift(&PAdicRational::new(p, k as u64, -n))?
            .embed_into(&target)?;
        for (i, v) in col.values().iter().enumerate() {
            a[(i, k)] = *v;
        }
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let scale = phi.values().iter().map(|v| v.norm()).fold(1.0, f64::max);
    let mut worst: f64 = 0.0;
    for b in enumerate_shifts(p, n as u32) {
        let rhs = CVector::from_vec(phi.shift(&b)?.embed_into(&target)?.into_values());
        let x = svd
            .solve(&rhs, smax * 1e-12)
            .map_err(|e| Error::Precondition(e.into()))?;
        worst = worst.max(crate::linalg::max_abs(&(&a * x - &rhs)));
    }
    Ok(ShiftClosure {
        holds: worst <= tol.max(REFINABLE_THRESHOLD) * scale,
        worst_residual: worst,
    })
}
