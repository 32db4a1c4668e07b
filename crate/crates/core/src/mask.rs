//! Refinement masks `m(ξ) = (1/p) Σ_k h_k χ_p(kξ)`.
//!
//! Coefficients are stored without the `1/p` factor, so `h_k` are exactly the
//! coefficients of the refinement equation `φ(x) = Σ_k h_k φ(x/p − k/p^{N+1})`.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::{Direction, PrimePowerFft};
use crate::linalg::{min_norm_solve, CMatrix, CVector};
use crate::padic::{check_prime, PAdicRational};

/// Residual accepted by [`TrigPolynomial::from_zeros`].
pub const INTERPOLATION_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MaskRecord", into = "MaskRecord")]
pub struct TrigPolynomial {
    p: u32,
    coeffs: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct MaskRecord {
    p: u32,
    coeffs: Vec<Complex64>,
}

impl TryFrom<MaskRecord> for TrigPolynomial {
    type Error = Error;
    fn try_from(r: MaskRecord) -> Result<Self> {
        TrigPolynomial::new(r.p, r.coeffs)
    }
}

impl From<TrigPolynomial> for MaskRecord {
    fn from(m: TrigPolynomial) -> Self {
        MaskRecord {
            p: m.p,
            coeffs: m.coeffs,
        }
    }
}

/// `e^{2πi r/n}`.
fn unit_root(r: u128, n: u128) -> Complex64 {
    let t = 2.0 * PI * (r as f64 / n as f64);
    Complex64::new(t.cos(), t.sin())
}

impl TrigPolynomial {
    /// Trailing exact zeros are dropped so that `h_d ≠ 0` unless `d = 0`.
    pub fn new(p: u32, mut coeffs: Vec<Complex64>) -> Result<Self> {
        check_prime(p)?;
        while coeffs.len() > 1
            && coeffs
                .last()
                .is_some_and(|c| *c == Complex64::new(0.0, 0.0))
        {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Ok(Self { p, coeffs })
    }

    pub fn from_real(p: u32, coeffs: &[f64]) -> Result<Self> {
        Self::new(p, coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// `h_r = 1` for `r < p`: the mask of the indicator of the unit ball.
    pub fn haar(p: u32) -> Result<Self> {
        Self::from_real(p, &vec![1.0; p as usize])
    }

    /// `m ≡ 1`.
    pub fn constant_one(p: u32) -> Result<Self> {
        Self::from_real(p, &[p as f64])
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            p: self.p,
            coeffs: self.coeffs.iter().map(|h| h * c).collect(),
        }
    }

    /// Drop trailing coefficients of magnitude at most `tol`.
    pub fn trimmed(&self, tol: f64) -> Self {
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() <= tol) {
            coeffs.pop();
        }
        Self { p: self.p, coeffs }
    }

    /// `m(l/p^s)`.
    pub fn eval_at(&self, l: u64, s: u32) -> Complex64 {
        let n = (self.p as u128).pow(s);
        let l = l as u128 % n;
        let sum: Complex64 = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, h)| h * unit_root((k as u128 * l) % n, n))
            .sum();
        sum / self.p as f64
    }

    pub fn eval(&self, x: &PAdicRational) -> Complex64 {
        assert_eq!(x.p(), self.p, "mask and point over different primes");
        let sum: Complex64 = character_row(x, self.coeffs.len())
            .iter()
            .zip(&self.coeffs)
            .map(|(c, h)| c * h)
            .sum();
        sum / self.p as f64
    }

    /// `[m(k/p^L) for k < p^L]` from one length-`p^L` transform.
    pub fn eval_table(&self, level: u32) -> Vec<Complex64> {
        let n = (self.p as usize).pow(level);
        let mut folded = vec![Complex64::new(0.0, 0.0); n];
        for (k, h) in self.coeffs.iter().enumerate() {
            folded[k % n] += h;
        }
        PrimePowerFft::new(self.p, level, Direction::Positive).process(&mut folded);
        let w = 1.0 / self.p as f64;
        folded.iter_mut().for_each(|v| *v *= w);
        folded
    }

    /// Mask of degree at most `degree` with `m(0) = 1` and `m(z) = 0` on `zeros`.
    ///
    /// The degree is raised from the number of distinct zeros until the
    /// interpolation system becomes consistent; among consistent solutions of
    /// that degree the minimum-norm one is returned.
    pub fn from_zeros(p: u32, degree: usize, zeros: &[PAdicRational]) -> Result<Self> {
        check_prime(p)?;
        let mut points: Vec<PAdicRational> = Vec::new();
        for z in zeros {
            if z.p() != p {
                return Err(Error::PrimeMismatch(p, z.p()));
            }
            let f = z.frac_part();
            if !points.contains(&f) {
                points.push(f);
            }
        }
        if points.len() > degree {
            return Err(Error::Precondition(format!(
                "{} distinct zeros cannot be met by a mask of degree {degree}",
                points.len()
            )));
        }
        let mut residual = f64::INFINITY;
        for d in points.len()..=degree {
            let rows = points.len() + 1;
            let mut a = CMatrix::zeros(rows, d + 1);
            let mut b = CVector::zeros(rows);
            b[0] = Complex64::new(1.0, 0.0);
            for k in 0..=d {
                a[(0, k)] = Complex64::new(1.0 / p as f64, 0.0);
            }
            for (i, z) in points.iter().enumerate() {
                for (k, v) in character_row(z, d + 1).into_iter().enumerate() {
                    a[(i + 1, k)] = v / p as f64;
                }
            }
            let (x, r) = min_norm_solve(&a, &b);
            if r <= INTERPOLATION_TOL {
                return Self::new(p, x.iter().cloned().collect());
            }
            residual = residual.min(r);
        }
        Err(Error::SingularSystem { residual })
    }
}

/// `[χ_p(kx) for k < len]`.
pub(crate) fn character_row(x: &PAdicRational, len: usize) -> Vec<Complex64> {
    let p = x.p();
    let (l, s) = x.frac_part().as_ratio();
    if (s as f64) * (p as f64).log2() < 63.0 {
        let n = (p as u128).pow(s);
        let l = l.to_u64().expect("fractional numerator fits") as u128;
        return (0..len)
            .map(|k| unit_root((k as u128 * l) % n, n))
            .collect();
    }
    let n = crate::padic::pow_big(p, s);
    (0..len)
        .map(|k| {
            let r = (BigInt::from(k) * &l).mod_floor(&n);
            let t = 2.0 * PI * crate::padic::ratio_to_f64(&r, &n);
            Complex64::new(t.cos(), t.sin())
        })
        .collect()
}
