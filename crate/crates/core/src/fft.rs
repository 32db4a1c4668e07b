//! Radix-p FFT for transforms of length `p^k`.
//!
//! Iterative decimation in time: the input is permuted by base-p digit
//! reversal, then `k` passes each merge `p` sub-transforms of length `m` into
//! one of length `m·p`. Radix 2 gets a dedicated butterfly; other primes use a
//! generic `p`-point kernel with a precomputed table of `p`-th roots.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Sign of the exponent in `Σ_j x_j e^{±2πi jl/n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Positive,
    Negative,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Positive => 1.0,
            Direction::Negative => -1.0,
        }
    }
}

pub struct PrimePowerFft {
    p: usize,
    len: usize,
    twiddles: Vec<Complex64>,
    roots: Vec<Complex64>,
    permutation: Vec<u32>,
}

impl PrimePowerFft {
    /// Plan for length `p^k`.
    pub fn new(p: u32, k: u32, direction: Direction) -> Self {
        let p = p as usize;
        let len = p.pow(k);
        let sign = direction.sign();
        let twiddles = (0..len)
            .map(|t| {
                let theta = sign * 2.0 * PI * (t as f64) / (len as f64);
                Complex64::new(theta.cos(), theta.sin())
            })
            .collect();
        let roots = (0..p)
            .map(|r| {
                let theta = sign * 2.0 * PI * (r as f64) / (p as f64);
                Complex64::new(theta.cos(), theta.sin())
            })
            .collect();
        let permutation = digit_reversal(p, k);
        Self {
            p,
            len,
            twiddles,
            roots,
            permutation,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// In-place unnormalized transform.
    pub fn process(&self, data: &mut [Complex64]) {
        assert_eq!(
            data.len(),
            self.len,
            "buffer length does not match the plan"
        );
        if self.len <= 1 {
            return;
        }
        for (i, &j) in self.permutation.iter().enumerate() {
            let j = j as usize;
            if i < j {
                data.swap(i, j);
            }
        }
        if self.p == 2 {
            self.radix2_passes(data);
        } else {
            self.generic_passes(data);
        }
    }

    fn radix2_passes(&self, data: &mut [Complex64]) {
        let n = self.len;
        let mut m = 1;
        while m < n {
            let stride = n / (2 * m);
            for block in data.chunks_exact_mut(2 * m) {
                let (lo, hi) = block.split_at_mut(m);
                for (j, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                    let t = *b * self.twiddles[j * stride];
                    *b = *a - t;
                    *a += t;
                }
            }
            m *= 2;
        }
    }

    fn generic_passes(&self, data: &mut [Complex64]) {
        let n = self.len;
        let p = self.p;
        let mut scratch = vec![Complex64::new(0.0, 0.0); p];
        let mut m = 1;
        while m < n {
            let stride = n / (m * p);
            for block in data.chunks_exact_mut(m * p) {
                for j in 0..m {
                    for (r, s) in scratch.iter_mut().enumerate() {
                        *s = block[j + r * m] * self.twiddles[r * j * stride];
                    }
                    for q in 0..p {
                        let mut acc = scratch[0];
                        for (r, s) in scratch.iter().enumerate().skip(1) {
                            acc += *s * self.roots[(r * q) % p];
                        }
                        block[j + q * m] = acc;
                    }
                }
            }
            m *= p;
        }
    }
}

fn digit_reversal(p: usize, k: u32) -> Vec<u32> {
    let n = p.pow(k);
    (0..n)
        .map(|mut i| {
            let mut r = 0usize;
            for _ in 0..k {
                r = r * p + i % p;
                i /= p;
            }
            r as u32
        })
        .collect()
}

/// Convenience wrapper: transform a copy of `data` (length must be a power of `p`).
pub fn transform(p: u32, data: &[Complex64], direction: Direction) -> Vec<Complex64> {
    let k = log_exact(p, data.len()).expect("length is not a power of p");
    let plan = PrimePowerFft::new(p, k, direction);
    let mut out = data.to_vec();
    plan.process(&mut out);
    out
}

/// `k` with `p^k = n`, if any.
pub fn log_exact(p: u32, n: usize) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let mut k = 0;
    let mut m = n;
    while m > 1 {
        if !m.is_multiple_of(p as usize) {
            return None;
        }
        m /= p as usize;
        k += 1;
    }
    Some(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(data: &[Complex64], direction: Direction) -> Vec<Complex64> {
        let n = data.len();
        (0..n)
            .map(|l| {
                data.iter()
                    .enumerate()
                    .map(|(j, &x)| {
                        let t = direction.sign() * 2.0 * PI * ((j * l) % n) as f64 / n as f64;
                        x * Complex64::new(t.cos(), t.sin())
                    })
                    .sum()
            })
            .collect()
    }

    fn sample(n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 1.3).cos()))
            .collect()
    }

    #[test]
    fn matches_naive_for_several_primes() {
        for &(p, k) in &[
            (2u32, 0u32),
            (2, 1),
            (2, 5),
            (3, 1),
            (3, 4),
            (5, 3),
            (7, 2),
            (11, 2),
        ] {
            let n = (p as usize).pow(k);
            let x = sample(n);
            for dir in [Direction::Positive, Direction::Negative] {
                let fast = transform(p, &x, dir);
                let slow = naive(&x, dir);
                let err = fast
                    .iter()
                    .zip(&slow)
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                assert!(err < 1e-10, "p={p} k={k} err={err}");
            }
        }
    }

    #[test]
    fn round_trip_scales_by_length() {
        let x = sample(81);
        let y = transform(
            3,
            &transform(3, &x, Direction::Positive),
            Direction::Negative,
        );
        for (a, b) in x.iter().zip(&y) {
            assert!((a * 81.0 - b).norm() < 1e-10);
        }
    }

    #[test]
    fn log_exact_detects_powers() {
        assert_eq!(log_exact(2, 1), Some(0));
        assert_eq!(log_exact(3, 27), Some(3));
        assert_eq!(log_exact(3, 28), None);
    }
}
