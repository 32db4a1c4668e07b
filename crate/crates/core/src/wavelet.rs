//! Wavelets for dyadic MRAs (`p = 2`).
//!
//! Given an MRA scaling function `φ ∈ D_N^M` with mask `m₀`, a wavelet mask
//! `n₀` of degree at most `2^N` vanishes at `l/2^{M+N}` wherever
//! `φ̂(l/2^M) ≠ 0`, and `ψ̂(ξ) = n₀(ξ/2^N) φ̂(2ξ)`. Translates of `ψ` span the
//! complement of `V_0` in `V_1` when the banded matrix below is invertible.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{CosetGrid, TestFunction};
use crate::linalg::{determinant, inverse, null_space, CMatrix};
use crate::mask::TrigPolynomial;
use crate::padic::PAdicRational;

/// Trials of the seeded null-space search.
pub const DEFAULT_TRIALS: usize = 256;

fn require_dyadic(p: u32) -> Result<()> {
    if p != 2 {
        return Err(Error::NotApplicable(format!(
            "wavelet construction is implemented for p = 2 only, got p = {p}"
        )));
    }
    Ok(())
}

/// The `2^{N+1}`-square matrix whose first `2^N` rows are the coefficients
/// `g_0..g_{2^N}` shifted right by the row index, followed by the same band
/// for `h_0..h_{2^N}`.
#[derive(Clone, Debug, Serialize)]
pub struct ResultantSystem {
    pub size: usize,
    pub g_rows: Vec<Vec<Complex64>>,
    pub h_rows: Vec<Vec<Complex64>>,
    #[serde(skip)]
    pub matrix: CMatrix,
    pub det: Complex64,
}

impl ResultantSystem {
    pub fn new(m0: &TrigPolynomial, n0: &TrigPolynomial, n: i64) -> Result<Self> {
        require_dyadic(m0.p())?;
        let band = 1usize << n;
        for (name, m) in [("m0", m0), ("n0", n0)] {
            if m.degree() > band {
                return Err(Error::Precondition(format!(
                    "deg {name} = {} exceeds 2^N = {band}",
                    m.degree()
                )));
            }
        }
        let size = 2 * band;
        let rows = |m: &TrigPolynomial| -> Vec<Vec<Complex64>> {
            (0..band)
                .map(|l| {
                    let mut row = vec![Complex64::new(0.0, 0.0); size];
                    for (k, c) in m.coeffs().iter().enumerate() {
                        row[l + k] = *c;
                    }
                    row
                })
                .collect()
        };
        let g_rows = rows(n0);
        let h_rows = rows(m0);
        let matrix = CMatrix::from_fn(size, size, |i, j| {
            if i < band {
                g_rows[i][j]
            } else {
                h_rows[i - band][j]
            }
        });
        let det = determinant(&matrix);
        Ok(Self {
            size,
            g_rows,
            h_rows,
            matrix,
            det,
        })
    }

    /// Coefficient vectors `(g_0..g_{2^N})`, `(h_0..h_{2^N})` padded to a common length.
    pub fn padded_coeffs(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        let len = self.size / 2 + 1;
        (
            self.g_rows[0][..len].to_vec(),
            self.h_rows[0][..len].to_vec(),
        )
    }
}

/// `(|det| > tol, system)`.
pub fn resultant_nonzero(
    m0: &TrigPolynomial,
    n0: &TrigPolynomial,
    n: i64,
    tol: f64,
) -> Result<(bool, ResultantSystem)> {
    let sys = ResultantSystem::new(m0, n0, n)?;
    Ok((sys.det.norm() > tol, sys))
}

/// Indices `l < 2^{M+N}` with `φ̂(l/2^M) ≠ 0`.
fn nonzero_set(phi_hat: &TestFunction, tol: f64) -> Vec<usize> {
    phi_hat
        .values()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.norm() > tol)
        .map(|(l, _)| l)
        .collect()
}

/// Divide by the first coefficient of maximal modulus, making it exactly 1.
fn normalize(g: &[Complex64]) -> Vec<Complex64> {
    let top = g.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let pivot = g
        .iter()
        .find(|c| c.norm() >= top * (1.0 - 1e-12))
        .copied()
        .unwrap_or(Complex64::new(1.0, 0.0));
    g.iter()
        .map(|c| {
            let v = c / pivot;
            // snap round-off on the pivot and on vanishing entries
            if (v - 1.0).norm() < 1e-14 {
                Complex64::new(1.0, 0.0)
            } else if v.norm() < 1e-14 {
                Complex64::new(0.0, 0.0)
            } else {
                v
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct WaveletMask {
    pub n0: TrigPolynomial,
    pub system: ResultantSystem,
    /// 0 for the leading null vector, otherwise the index of the random trial.
    pub trial: usize,
    pub seed: u64,
}

/// Wavelet mask vanishing on `{l/2^{M+N} : φ̂(l/2^M) ≠ 0}` with nonzero resultant against `m0`.
pub fn build_wavelet_mask(
    m0: &TrigPolynomial,
    phi_hat: &TestFunction,
    seed: u64,
    trials: usize,
    tol: f64,
) -> Result<WaveletMask> {
    require_dyadic(m0.p())?;
    let n = phi_hat.grid().constancy_exp();
    if n < 0 {
        return Err(Error::Precondition(
            "φ̂ grid must have constancy_exp N ≥ 0".into(),
        ));
    }
    let band = 1usize << n;
    if m0.degree() > band {
        return Err(Error::Precondition(format!(
            "deg m0 = {} exceeds 2^N = {band}",
            m0.degree()
        )));
    }
    let depth = phi_hat.grid().depth();
    let total = 1usize << depth;
    let z = nonzero_set(phi_hat, tol);
    let mut a = CMatrix::zeros(z.len(), band + 1);
    for (row, &l) in z.iter().enumerate() {
        for k in 0..=band {
            let t = 2.0 * std::f64::consts::PI * ((k * l) % total) as f64 / total as f64;
            a[(row, k)] = Complex64::from_polar(0.5, t);
        }
    }
    let basis = null_space(&a, 1e-10);
    if basis.is_empty() {
        return Err(Error::NoWaveletMask { trials: 0 });
    }
    let attempt = |g: Vec<Complex64>| -> Result<Option<(TrigPolynomial, ResultantSystem)>> {
        let n0 = TrigPolynomial::new(2, normalize(&g))?;
        let (ok, sys) = resultant_nonzero(m0, &n0, n, tol)?;
        Ok(ok.then_some((n0, sys)))
    };
    if let Some((n0, system)) = attempt(basis[0].iter().cloned().collect())? {
        return Ok(WaveletMask {
            n0,
            system,
            trial: 0,
            seed,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 1..=trials {
        let mut g = vec![Complex64::new(0.0, 0.0); band + 1];
        for v in &basis {
            let w = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            for (gk, vk) in g.iter_mut().zip(v.iter()) {
                *gk += w * vk;
            }
        }
        if let Some((n0, system)) = attempt(g)? {
            return Ok(WaveletMask {
                n0,
                system,
                trial,
                seed,
            });
        }
    }
    Err(Error::NoWaveletMask { trials })
}

/// `ψ̂(l/2^{M+1}) = n₀(l/2^{M+N+1}) φ̂(l/2^M)` on `(M+1, N)` and `ψ = F^{-1}ψ̂`.
pub fn psi_from_mask(
    n0: &TrigPolynomial,
    phi_hat: &TestFunction,
) -> Result<(TestFunction, TestFunction)> {
    require_dyadic(n0.p())?;
    let g = phi_hat.grid();
    let grid = CosetGrid::new(2, g.support_exp() + 1, g.constancy_exp())?;
    let level = grid.depth();
    let table = n0.eval_table(level);
    let coarse = phi_hat.values();
    let values = (0..grid.size())
        .map(|l| table[l] * coarse[l % coarse.len()])
        .collect();
    let psi_hat = TestFunction::new(grid, values)?;
    let psi = psi_hat.inverse_fourier();
    Ok((psi_hat, psi))
}

/// `⟨φ, ψ(·−c)⟩ = 0` for every node `c = k/2^N`, `k < 2^{N+M}`, of `φ`'s grid.
pub fn complement_check(phi: &TestFunction, psi: &TestFunction, tol: f64) -> Result<bool> {
    require_dyadic(phi.p())?;
    let g = phi.grid();
    for k in 0..g.size() {
        let c = PAdicRational::new(2, k as u64, -g.support_exp());
        if phi.inner_product(&psi.shift(&c)?)?.norm() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Invert the stacked translate identities `Y = S X` with
/// `X_k = φ(x/2 − k/2^{N+1})`, `Y = (ψ(·−l/2^N))_l ⊕ (φ(·−l/2^N))_l`, and
/// compare each recovered `X_k` with its direct construction.
pub fn spanning_check(
    m0: &TrigPolynomial,
    n0: &TrigPolynomial,
    phi_hat: &TestFunction,
    tol: f64,
) -> Result<bool> {
    require_dyadic(m0.p())?;
    let n = phi_hat.grid().constancy_exp();
    let (nonzero, sys) = resultant_nonzero(m0, n0, n, tol)?;
    if !nonzero {
        return Err(Error::NotApplicable(
            "resultant vanishes: the translate system is singular".into(),
        ));
    }
    let inv = inverse(&sys.matrix)
        .ok_or_else(|| Error::NotApplicable("resultant matrix is singular".into()))?;
    let phi = phi_hat.inverse_fourier();
    let (_, psi) = psi_from_mask(n0, phi_hat)?;
    let band = 1usize << n;
    let mut ys = Vec::with_capacity(2 * band);
    for f in [&psi, &phi] {
        for l in 0..band {
            ys.push(f.shift(&PAdicRational::new(2, l as u64, -n))?);
        }
    }
    let half = phi.dilate(1);
    let common = ys
        .iter()
        .skip(1)
        .try_fold(*ys[0].grid(), |acc, y| acc.join(y.grid()))?;
    let common = common.join(half.grid())?;
    let common = common.join(&CosetGrid::new(2, n, phi.grid().constancy_exp() + 1)?)?;
    let ys: Vec<TestFunction> = ys
        .iter()
        .map(|y| y.embed_into(&common))
        .collect::<Result<_>>()?;
    for k in 0..2 * band {
        let direct = half
            .shift(&PAdicRational::new(2, k as u64, -n))?
            .embed_into(&common)?;
        let mut rec = vec![Complex64::new(0.0, 0.0); common.size()];
        for (i, y) in ys.iter().enumerate() {
            let c = inv[(k, i)];
            for (r, v) in rec.iter_mut().zip(y.values()) {
                *r += c * v;
            }
        }
        let err = rec
            .iter()
            .zip(direct.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if err > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, Serialize)]
pub struct WaveletPackage {
    pub seed: u64,
    pub trial: usize,
    pub n0: TrigPolynomial,
    pub psi: TestFunction,
    pub psi_hat: TestFunction,
    pub system: ResultantSystem,
    pub complement_ok: bool,
    pub spanning_ok: bool,
}

/// Mask search, `ψ` synthesis and both checks; fails unless both checks pass.
pub fn construct_wavelet(
    m0: &TrigPolynomial,
    phi_hat: &TestFunction,
    seed: u64,
    tol: f64,
) -> Result<WaveletPackage> {
    let wm = build_wavelet_mask(m0, phi_hat, seed, DEFAULT_TRIALS, tol)?;
    let (psi_hat, psi) = psi_from_mask(&wm.n0, phi_hat)?;
    let phi = phi_hat.inverse_fourier();
    let complement_ok = complement_check(&phi, &psi, tol)?;
    let spanning_ok = spanning_check(m0, &wm.n0, phi_hat, tol)?;
    if !(complement_ok && spanning_ok) {
        return Err(Error::Precondition(format!(
            "wavelet checks failed: complement {complement_ok}, spanning {spanning_ok}"
        )));
    }
    Ok(WaveletPackage {
        seed,
        trial: wm.trial,
        n0: wm.n0,
        psi,
        psi_hat,
        system: wm.system,
        complement_ok,
        spanning_ok,
    })
}
