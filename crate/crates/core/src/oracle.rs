//! Independent reference computations: a quadratic-time DFT, exact arithmetic
//! in cyclotomic fields `ℚ(ζ_{p^s})`, and direct refinement residuals.
//!
//! None of these share code paths with the fast routines they check.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::grid::TestFunction;
use crate::mask::TrigPolynomial;
use crate::padic::PAdicRational;

/// `p^{-M} Σ_j f_j e^{2πi jl/p^{N+M}}` evaluated term by term.
pub fn naive_dft(f: &TestFunction) -> TestFunction {
    let n = f.values().len();
    let w = f.grid().cell_measure();
    let roots: Vec<Complex64> = (0..n)
        .map(|r| Complex64::from_polar(1.0, 2.0 * PI * r as f64 / n as f64))
        .collect();
    let values = (0..n)
        .map(|l| {
            let mut s = Complex64::new(0.0, 0.0);
            let mut e = 0usize;
            for v in f.values() {
                s += v * roots[e];
                e += l;
                if e >= n {
                    e -= n;
                }
            }
            s * w
        })
        .collect();
    TestFunction::new(f.grid().dual(), values).expect("dual grid has the same size")
}

/// `max_x |φ(x) − Σ_k h_k φ(x/p − k/p^{N+1})|` over the nodes of `(N, M+1)`,
/// each term evaluated pointwise.
pub fn direct_refinement_residual(phi: &TestFunction, m: &TrigPolynomial) -> f64 {
    let p = phi.p();
    let n = phi.grid().support_exp();
    let size = (p as usize).pow((n + phi.grid().constancy_exp() + 1) as u32);
    let inv_p = PAdicRational::new(p, 1, -1);
    let mut worst: f64 = 0.0;
    for j in 0..size {
        let x = PAdicRational::new(p, j as u64, -n);
        let xp = &x * &inv_p;
        let mut rhs = Complex64::new(0.0, 0.0);
        for (k, h) in m.coeffs().iter().enumerate() {
            let shift = PAdicRational::new(p, k as u64, -(n + 1));
            rhs += h * phi.evaluate(&(&xp - &shift));
        }
        worst = worst.max((phi.evaluate(&x) - rhs).norm());
    }
    worst
}

/// An element `Σ_e c_e ζ^e` of the group algebra `ℚ[ℤ/p^s]`, read in `ℚ(ζ_{p^s})`.
#[derive(Clone, Debug, PartialEq)]
pub struct CyclotomicValue {
    p: u32,
    level: u32,
    coeffs: Vec<BigRational>,
}

impl CyclotomicValue {
    pub fn zero(p: u32, level: u32) -> Self {
        Self {
            p,
            level,
            coeffs: vec![BigRational::zero(); (p as usize).pow(level)],
        }
    }

    pub fn rational(p: u32, level: u32, q: BigRational) -> Self {
        let mut v = Self::zero(p, level);
        v.coeffs[0] = q;
        v
    }

    /// `ζ_{p^level}^index`.
    pub fn root(p: u32, level: u32, index: usize) -> Self {
        let mut v = Self::zero(p, level);
        let n = v.coeffs.len();
        v.coeffs[index % n] = BigRational::one();
        v
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Same element written over `ζ_{p^level}` with `level ≥ self.level`.
    pub fn lift(&self, level: u32) -> Self {
        assert!(
            level >= self.level,
            "cannot lower the level of a cyclotomic value"
        );
        if level == self.level {
            return self.clone();
        }
        let step = (self.p as usize).pow(level - self.level);
        let mut v = Self::zero(self.p, level);
        for (e, c) in self.coeffs.iter().enumerate() {
            v.coeffs[e * step] = c.clone();
        }
        v
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        assert_eq!(self.p, other.p, "cyclotomic values over different primes");
        let level = self.level.max(other.level);
        (self.lift(level), other.lift(level))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut a, b) = self.common(other);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        a
    }

    pub fn neg(&self) -> Self {
        Self {
            p: self.p,
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        let n = a.order();
        let mut v = Self::zero(a.p, a.level);
        for (i, x) in a.coeffs.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.coeffs.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                v.coeffs[(i + j) % n] += x * y;
            }
        }
        v
    }

    /// Multiply by `ζ_{p^level}^index`, a rotation of the coefficients.
    pub fn rotate(&self, level: u32, index: usize) -> Self {
        let lvl = self.level.max(level);
        let a = self.lift(lvl);
        let n = a.order();
        let step = (self.p as usize).pow(lvl - level);
        let shift = (index * step) % n;
        let mut v = Self::zero(self.p, lvl);
        for (e, c) in a.coeffs.into_iter().enumerate() {
            v.coeffs[(e + shift) % n] = c;
        }
        v
    }

    /// Remainder modulo `Φ_{p^s}(x) = Σ_{t<p} x^{t p^{s−1}}`, of degree below `(p−1)p^{s−1}`.
    pub fn reduced(&self) -> Vec<BigRational> {
        if self.level == 0 {
            return self.coeffs.clone();
        }
        let p = self.p as usize;
        let block = p.pow(self.level - 1);
        let deg = (p - 1) * block;
        let mut c = self.coeffs.clone();
        for e in (deg..c.len()).rev() {
            if c[e].is_zero() {
                continue;
            }
            let v = std::mem::replace(&mut c[e], BigRational::zero());
            let base = e - deg;
            for t in 0..p - 1 {
                c[base + t * block] -= &v;
            }
        }
        c.truncate(deg);
        c
    }

    /// Exact test for the value being zero.
    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(Zero::is_zero)
    }

    pub fn to_complex(&self) -> Complex64 {
        let n = self.order() as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| {
                let t = 2.0 * PI * e as f64 / n;
                Complex64::new(t.cos(), t.sin()) * rational_to_f64(c)
            })
            .sum()
    }
}

fn rational_to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// Best rational approximation with denominator at most `max_den`, accepted
/// only if it reproduces `x` to within `tol`.
pub fn rationalize(x: f64, max_den: i64, tol: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i128;
        let (h2, k2) = (a * h1 + h0, a * k1 + k0);
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if ((h1 as f64) / (k1 as f64) - x).abs() <= tol {
            return Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)));
        }
        let frac = r - a as f64;
        if frac.abs() < 1e-300 {
            break;
        }
        r = 1.0 / frac;
    }
    None
}

/// A mask whose coefficients lie in a cyclotomic field, so values `p·m(l/p^s)`
/// are computed and zero-tested exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactMask {
    p: u32,
    coeffs: Vec<CyclotomicValue>,
}

impl ExactMask {
    pub fn new(p: u32, coeffs: Vec<CyclotomicValue>) -> Self {
        Self { p, coeffs }
    }

    /// Recover exact coefficients from a float mask whose coefficient parts are all
    /// rational with small denominators. Imaginary parts need `i = ζ_4`, so `p = 2`.
    pub fn from_trig(m: &TrigPolynomial) -> Option<Self> {
        let p = m.p();
        let mut coeffs = Vec::with_capacity(m.coeffs().len());
        for h in m.coeffs() {
            let re = rationalize(h.re, 1 << 20, 1e-12)?;
            let im = rationalize(h.im, 1 << 20, 1e-12)?;
            let mut v = CyclotomicValue::rational(p, 0, re);
            if !im.is_zero() {
                if p != 2 {
                    return None;
                }
                v = v.add(&CyclotomicValue::rational(p, 2, im).rotate(2, 1));
            }
            coeffs.push(v);
        }
        Some(Self { p, coeffs })
    }

    /// Coefficients of `Π_i (z − χ_p(ζ_i))` in `z = χ_p(ξ)`, an unnormalized mask
    /// vanishing exactly at the given points.
    pub fn from_roots(p: u32, roots: &[PAdicRational]) -> Self {
        let mut poly = vec![CyclotomicValue::rational(p, 0, BigRational::one())];
        for r in roots {
            let (l, s) = r.frac_part().as_ratio();
            let idx = usize::try_from(&l).expect("root index fits");
            let root = CyclotomicValue::root(p, s, idx).neg();
            let mut next = vec![CyclotomicValue::zero(p, 0); poly.len() + 1];
            for (k, c) in poly.iter().enumerate() {
                next[k + 1] = next[k + 1].add(c);
                next[k] = next[k].add(&c.mul(&root));
            }
            poly = next;
        }
        Self { p, coeffs: poly }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[CyclotomicValue] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// `Σ_k h_k ζ_{p^s}^{kl}`, i.e. `p·m(l/p^s)`.
    pub fn eval(&self, l: u64, s: u32) -> CyclotomicValue {
        let n = (self.p as u64).pow(s);
        let mut acc = CyclotomicValue::zero(self.p, s);
        for (k, h) in self.coeffs.iter().enumerate() {
            let e = ((k as u128 * l as u128) % n as u128) as usize;
            acc = acc.add(&h.rotate(s, e));
        }
        acc
    }

    /// Float mask with the same coefficients, rescaled so that `m(0) = 1`.
    pub fn to_trig(&self) -> Result<TrigPolynomial> {
        let raw: Vec<Complex64> = self
            .coeffs
            .iter()
            .map(CyclotomicValue::to_complex)
            .collect();
        let at_zero: Complex64 = raw.iter().sum::<Complex64>() / self.p as f64;
        TrigPolynomial::new(self.p, raw.into_iter().map(|c| c / at_zero).collect())
    }
}

/// Indices `l < p^{M+N}` at which `Π_{t=1}^{M+N} m(l/p^t)` is exactly zero.
pub fn exact_zero_indices(mask: &ExactMask, support_exp: i64, constancy_exp: i64) -> Vec<usize> {
    let depth = (support_exp + constancy_exp) as u32;
    let p = mask.p() as usize;
    let tables: Vec<Vec<bool>> = (1..=depth)
        .map(|t| {
            (0..p.pow(t))
                .map(|l| mask.eval(l as u64, t).is_zero())
                .collect()
        })
        .collect();
    (0..p.pow(depth))
        .filter(|&l| {
            tables
                .iter()
                .enumerate()
                .any(|(i, tab)| tab[l % p.pow(i as u32 + 1)])
        })
        .collect()
}

/// Whether the product vanishes exactly at every `l/p^{M+1}` with `p ∤ l`.
pub fn exact_sphere_vanishes(mask: &ExactMask, support_exp: i64, constancy_exp: i64) -> bool {
    let depth = (support_exp + constancy_exp + 1) as u32;
    let p = mask.p() as usize;
    let tables: Vec<Vec<bool>> = (1..=depth)
        .map(|t| {
            (0..p.pow(t))
                .map(|l| mask.eval(l as u64, t).is_zero())
                .collect()
        })
        .collect();
    (0..p.pow(depth)).filter(|l| l % p != 0).all(|l| {
        tables
            .iter()
            .enumerate()
            .any(|(i, tab)| tab[l % p.pow(i as u32 + 1)])
    })
}

/// Resultant `Res(Σ g_k z^{d−k}, Σ h_k z^{d−k})` from the roots of the first
/// argument, for coefficient vectors of common length `d + 1`.
pub fn resultant_by_roots(g: &[Complex64], h: &[Complex64]) -> Complex64 {
    assert_eq!(g.len(), h.len(), "coefficient vectors must share a length");
    let d = g.len() - 1;
    // Res(A, B) with A, B written in descending powers: a = g, b = h
    let leading_g = g[0];
    let leading_h = h[0];
    if d == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if leading_g.norm() > 0.0 {
        let roots = polynomial_roots(g);
        let prod: Complex64 = roots.iter().map(|&r| horner(h, r)).product();
        return leading_g.powu(d as u32) * prod;
    }
    if leading_h.norm() > 0.0 {
        let roots = polynomial_roots(h);
        let prod: Complex64 = roots.iter().map(|&r| horner(g, r)).product();
        let sign = if (d * d) % 2 == 1 { -1.0 } else { 1.0 };
        return leading_h.powu(d as u32) * prod * sign;
    }
    Complex64::new(0.0, 0.0)
}

/// Evaluate `Σ_k a_k z^{d−k}` (descending coefficients).
fn horner(a: &[Complex64], z: Complex64) -> Complex64 {
    a.iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Roots of `Σ_k a_k z^{d−k}` with `a_0 ≠ 0`, by Aberth iteration.
pub fn polynomial_roots(a: &[Complex64]) -> Vec<Complex64> {
    let d = a.len() - 1;
    let monic: Vec<Complex64> = a.iter().map(|c| c / a[0]).collect();
    let deriv: Vec<Complex64> = monic[..d]
        .iter()
        .enumerate()
        .map(|(k, c)| c * (d - k) as f64)
        .collect();
    let radius = 1.0 + monic[1..].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius * 0.5, 2.0 * PI * (k as f64 + 0.25) / d as f64))
        .collect();
    for _ in 0..500 {
        let mut moved: f64 = 0.0;
        for i in 0..d {
            let f = horner(&monic, z[i]);
            let df = horner(&deriv, z[i]);
            if f.norm() == 0.0 {
                continue;
            }
            let ratio = f / df;
            let repel: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repel);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm());
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Rational number `num/den` as a [`BigRational`].
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
