//! Test functions of `D_N^M` stored as vectors over coset grids.
//!
//! A [`CosetGrid`] `(p, N, M)` has `p^{N+M}` nodes; node `j` stands for the
//! point `j·p^{-N}` and for the ball `B_{-M}(j·p^{-N})` around it. The nodes
//! form a full set of coset representatives of `B_N(0) / B_{-M}(0)`, a cyclic
//! group of order `p^{N+M}`, so translations inside `B_N(0)` act on indices by
//! modular addition and the Fourier transform reduces to a length-`p^{N+M}` DFT.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::{Direction, PrimePowerFft};
use crate::padic::{check_prime, PAdicRational, Valuation};

/// Grids larger than `2^MAX_GRID_LOG2` nodes are refused.
pub const MAX_GRID_LOG2: u32 = 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CosetGrid {
    p: u32,
    support_exp: i64,
    constancy_exp: i64,
}

impl CosetGrid {
    pub fn new(p: u32, support_exp: i64, constancy_exp: i64) -> Result<Self> {
        check_prime(p)?;
        let depth = support_exp + constancy_exp;
        if depth < 0 {
            return Err(Error::InvalidGrid {
                support_exp,
                constancy_exp,
            });
        }
        if (depth as f64) * (p as f64).log2() > MAX_GRID_LOG2 as f64 + 1e-9 {
            return Err(Error::GridTooLarge {
                p,
                exp: depth,
                max_log2: MAX_GRID_LOG2,
            });
        }
        Ok(Self {
            p,
            support_exp,
            constancy_exp,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// `N`: functions vanish outside `B_N(0)`.
    pub fn support_exp(&self) -> i64 {
        self.support_exp
    }

    /// `M`: functions are constant on balls of radius `p^{-M}`.
    pub fn constancy_exp(&self) -> i64 {
        self.constancy_exp
    }

    pub fn depth(&self) -> u32 {
        (self.support_exp + self.constancy_exp) as u32
    }

    pub fn size(&self) -> usize {
        (self.p as usize).pow(self.depth())
    }

    /// Node `j` as the point `j·p^{-N}`.
    pub fn node(&self, j: usize) -> PAdicRational {
        PAdicRational::new(self.p, j as u64, -self.support_exp)
    }

    /// Node index of the coset containing `x`, or `None` when `|x|_p > p^N`.
    pub fn index_of(&self, x: &PAdicRational) -> Option<usize> {
        assert_eq!(x.p(), self.p, "point and grid over different primes");
        if let Valuation::Finite(v) = x.norm_exp() {
            if v < -self.support_exp {
                return None;
            }
        }
        x.integer_residue(self.support_exp, self.size() as u64)
            .map(|r| r as usize)
    }

    /// Frequency-side grid: support and constancy exponents swap.
    pub fn dual(&self) -> CosetGrid {
        CosetGrid {
            p: self.p,
            support_exp: self.constancy_exp,
            constancy_exp: self.support_exp,
        }
    }

    pub fn join(&self, other: &CosetGrid) -> Result<CosetGrid> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        CosetGrid::new(
            self.p,
            self.support_exp.max(other.support_exp),
            self.constancy_exp.max(other.constancy_exp),
        )
    }

    /// Haar measure of one cell, `p^{-M}`.
    pub fn cell_measure(&self) -> f64 {
        (self.p as f64).powi(-self.constancy_exp as i32)
    }
}

/// A locally constant, compactly supported function sampled on its grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FunctionRecord", into = "FunctionRecord")]
pub struct TestFunction {
    grid: CosetGrid,
    values: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct FunctionRecord {
    p: u32,
    support_exp: i64,
    constancy_exp: i64,
    values: Vec<Complex64>,
}

impl TryFrom<FunctionRecord> for TestFunction {
    type Error = Error;
    fn try_from(r: FunctionRecord) -> Result<Self> {
        TestFunction::new(
            CosetGrid::new(r.p, r.support_exp, r.constancy_exp)?,
            r.values,
        )
    }
}

impl From<TestFunction> for FunctionRecord {
    fn from(f: TestFunction) -> Self {
        FunctionRecord {
            p: f.grid.p,
            support_exp: f.grid.support_exp,
            constancy_exp: f.grid.constancy_exp,
            values: f.values,
        }
    }
}

impl TestFunction {
    pub fn new(grid: CosetGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.size() {
            return Err(Error::LengthMismatch {
                expected: grid.size(),
                got: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: CosetGrid) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.size()],
        }
    }

    /// Sample `f` at every node.
    pub fn from_fn(grid: CosetGrid, f: impl Fn(&PAdicRational) -> Complex64) -> Self {
        let values = (0..grid.size()).map(|j| f(&grid.node(j))).collect();
        Self { grid, values }
    }

    /// Indicator of `B_γ(0)` on its minimal grid `(N = γ, M = −γ)`.
    pub fn indicator_ball(p: u32, radius_exp: i64) -> Result<Self> {
        let grid = CosetGrid::new(p, radius_exp, -radius_exp)?;
        Ok(Self {
            grid,
            values: vec![Complex64::new(1.0, 0.0)],
        })
    }

    /// Indicator of `B_γ(0)` rendered on a given grid (which must resolve the ball).
    pub fn indicator_ball_on(grid: CosetGrid, radius_exp: i64) -> Result<Self> {
        if radius_exp < -grid.constancy_exp() || radius_exp > grid.support_exp() {
            return Err(Error::Precondition(format!(
                "ball radius exponent {radius_exp} not representable on grid (N={}, M={})",
                grid.support_exp(),
                grid.constancy_exp()
            )));
        }
        Self::indicator_ball(grid.p(), radius_exp)?.embed(grid.support_exp(), grid.constancy_exp())
    }

    pub fn grid(&self) -> &CosetGrid {
        &self.grid
    }

    pub fn p(&self) -> u32 {
        self.grid.p
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn evaluate(&self, x: &PAdicRational) -> Complex64 {
        match self.grid.index_of(x) {
            Some(j) => self.values[j],
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// Same function on the finer and wider grid `(N', M')`.
    pub fn embed(&self, support_exp: i64, constancy_exp: i64) -> Result<Self> {
        if support_exp < self.grid.support_exp || constancy_exp < self.grid.constancy_exp {
            return Err(Error::Precondition(format!(
                "embed target (N={support_exp}, M={constancy_exp}) is coarser than (N={}, M={})",
                self.grid.support_exp, self.grid.constancy_exp
            )));
        }
        let target = CosetGrid::new(self.grid.p, support_exp, constancy_exp)?;
        if target == self.grid {
            return Ok(self.clone());
        }
        let step = (self.grid.p as usize).pow((support_exp - self.grid.support_exp) as u32);
        let old = self.values.len();
        let values = (0..target.size())
            .map(|j| {
                if j % step == 0 {
                    self.values[(j / step) % old]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Ok(Self {
            grid: target,
            values,
        })
    }

    pub fn embed_into(&self, grid: &CosetGrid) -> Result<Self> {
        if grid.p != self.grid.p {
            return Err(Error::PrimeMismatch(grid.p, self.grid.p));
        }
        self.embed(grid.support_exp, grid.constancy_exp)
    }

    fn transform(&self, direction: Direction) -> Self {
        let mut values = self.values.clone();
        PrimePowerFft::new(self.grid.p, self.grid.depth(), direction).process(&mut values);
        let w = self.grid.cell_measure();
        for v in &mut values {
            *v *= w;
        }
        Self {
            grid: self.grid.dual(),
            values,
        }
    }

    /// `F[f](ξ) = ∫ χ_p(ξx) f(x) dx`; on nodes `l·p^{-M}` this is
    /// `p^{-M} Σ_j f_j e^{2πi jl/p^{N+M}}`.
    pub fn fourier(&self) -> Self {
        self.transform(Direction::Positive)
    }

    /// `F^{-1}[g](x) = ∫ χ_p(−xξ) g(ξ) dξ`.
    pub fn inverse_fourier(&self) -> Self {
        self.transform(Direction::Negative)
    }

    /// `x ↦ f(x − b)`. The result lives on `(max(N, −v(b)), M)`.
    pub fn shift(&self, b: &PAdicRational) -> Result<Self> {
        if b.p() != self.grid.p {
            return Err(Error::PrimeMismatch(self.grid.p, b.p()));
        }
        let n_new = match b.norm_exp() {
            Valuation::Finite(v) => self.grid.support_exp.max(-v),
            Valuation::Infinite => self.grid.support_exp,
        };
        let wide = self.embed(n_new, self.grid.constancy_exp)?;
        let size = wide.values.len();
        let offset = b
            .integer_residue(n_new, size as u64)
            .expect("shift is resolved by the widened grid") as usize;
        let values = (0..size)
            .map(|j| wide.values[(j + size - offset) % size])
            .collect();
        Ok(Self {
            grid: wide.grid,
            values,
        })
    }

    /// `x ↦ f(p^{-j} x)`; only the grid changes.
    pub fn dilate(&self, j: i64) -> Self {
        let grid = CosetGrid {
            p: self.grid.p,
            support_exp: self.grid.support_exp - j,
            constancy_exp: self.grid.constancy_exp + j,
        };
        Self {
            grid,
            values: self.values.clone(),
        }
    }

    /// `x ↦ f(−x)`.
    pub fn reflect(&self) -> Self {
        let n = self.values.len();
        let values = (0..n).map(|j| self.values[(n - j) % n]).collect();
        Self {
            grid: self.grid,
            values,
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        let grid = self.grid.join(&other.grid)?;
        let a = self.embed_into(&grid)?;
        let b = other.embed_into(&grid)?;
        let values = a
            .values
            .iter()
            .zip(&b.values)
            .map(|(&x, &y)| f(x, y))
            .collect();
        Ok(Self { grid, values })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x - y)
    }

    pub fn pointwise_mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x * y)
    }

    /// `⟨f, g⟩ = ∫ f·conj(g)`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        let grid = self.grid.join(&other.grid)?;
        let a = self.embed_into(&grid)?;
        let b = other.embed_into(&grid)?;
        let s: Complex64 = a
            .values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| x * y.conj())
            .sum();
        Ok(s * grid.cell_measure())
    }

    pub fn norm(&self) -> f64 {
        let s: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        (s * self.grid.cell_measure()).sqrt()
    }

    /// Sup-norm distance on the common grid.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self
            .sub(other)?
            .values
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max))
    }

    /// Rows `j/p^N, re, im`, one per node.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("node,re,im\n");
        for (j, v) in self.values.iter().enumerate() {
            out.push_str(&format!(
                "{j}/{}^{},{:?},{:?}\n",
                self.grid.p, self.grid.support_exp, v.re, v.im
            ));
        }
        out
    }

    /// Least `s ≥ −M` with every value outside `B_s(0)` at most `tol`;
    /// `None` if the function vanishes identically.
    pub fn support_exp_within(&self, tol: f64) -> Option<i64> {
        let p = self.grid.p as usize;
        let n = self.grid.support_exp;
        let mut best: Option<i64> = None;
        for (j, v) in self.values.iter().enumerate() {
            if v.norm() <= tol {
                continue;
            }
            let radius = if j == 0 {
                -self.grid.constancy_exp
            } else {
                let mut t = 0i64;
                let mut k = j;
                while k % p == 0 {
                    k /= p;
                    t += 1;
                }
                n - t
            };
            best = Some(best.map_or(radius, |b| b.max(radius)));
        }
        best
    }
}
