//! Seeded generators for masks with known structure.
#![allow(dead_code)]

use std::collections::HashSet;
use std::f64::consts::PI;

use num_complex::Complex64;
use padic_mra::fft::{transform, Direction};
use padic_mra::{PAdicRational, TrigPolynomial};
use rand::seq::SliceRandom;
use rand::Rng;

pub const TOL: f64 = 1e-9;

/// A mask together with the zeros it was interpolated from.
#[derive(Clone, Debug)]
pub struct Instance {
    pub p: u32,
    pub n: i64,
    pub mask: TrigPolynomial,
    pub zeros: Vec<PAdicRational>,
}

/// Zeros `z/p^L`, `L = N + M + 1`, chosen so that every unit class
/// `l mod p^L` has a multiple `p^t l` among them; the product formula then
/// vanishes on `S_{M+1}`. Up to `extra` additional random zeros are added and
/// the interpolation degree may exceed the zero count. `None` when the zero
/// set does not fit below degree `p^{N+1}`.
pub fn covering_instance(
    rng: &mut impl Rng,
    p: u32,
    n: i64,
    big_m: i64,
    extra: usize,
) -> Option<Instance> {
    covering_with_levels(rng, p, n, big_m, extra, (n + big_m + 1) as u32)
}

/// [`covering_instance`] drawing the multiplier exponent `t` below `t_cap`;
/// `t_cap < N + M + 1` keeps the coarsest denominators free of zeros.
pub fn covering_with_levels(
    rng: &mut impl Rng,
    p: u32,
    n: i64,
    big_m: i64,
    extra: usize,
    t_cap: u32,
) -> Option<Instance> {
    let level = (n + big_m + 1) as u32;
    let modulus = (p as u64).pow(level);
    let mut units: Vec<u64> = (1..modulus).filter(|l| l % p as u64 != 0).collect();
    units.shuffle(rng);
    let mut zeros: HashSet<u64> = HashSet::new();
    for &l in &units {
        let covered = (0..level).any(|t| zeros.contains(&(l * (p as u64).pow(t) % modulus)));
        if covered {
            continue;
        }
        let t = rng.gen_range(0..t_cap.clamp(1, level));
        zeros.insert(l * (p as u64).pow(t) % modulus);
    }
    for _ in 0..extra {
        let z = rng.gen_range(1..modulus);
        zeros.insert(z);
    }
    let cap = (p as usize).pow(n as u32 + 1) - 1;
    if zeros.len() > cap {
        return None;
    }
    let mut sorted: Vec<u64> = zeros.into_iter().collect();
    sorted.sort_unstable();
    let points: Vec<PAdicRational> = sorted
        .iter()
        .map(|&z| PAdicRational::from_ratio(p, z, level))
        .collect();
    let degree = rng.gen_range(points.len()..=cap);
    let mask = TrigPolynomial::from_zeros(p, degree, &points).ok()?;
    Some(Instance {
        p,
        n,
        mask,
        zeros: points,
    })
}

/// Like [`covering_instance`], retrying until the zero set fits.
pub fn random_instance(rng: &mut impl Rng, p: u32, n: i64, big_m: i64, extra: usize) -> Instance {
    loop {
        if let Some(i) = covering_instance(rng, p, n, big_m, extra) {
            return i;
        }
    }
}

/// Covering instance whose zeros all have denominator at least `p^{M+1}`,
/// so that the sphere `S_M` is not cleared by a single coarse zero. Gives up
/// after `attempts` draws.
pub fn fine_instance(
    rng: &mut impl Rng,
    p: u32,
    n: i64,
    big_m: i64,
    attempts: usize,
) -> Option<Instance> {
    (0..attempts).find_map(|_| covering_with_levels(rng, p, n, big_m, 0, n as u32 + 1))
}

/// Mask with `m(k/p^{N+1}) = 0` for `p ∤ k` and unimodular values of random
/// phase at the other nonzero `k`, interpolated by an inverse DFT at degree
/// `p^{N+1} − 1`.
pub fn pattern_mask(rng: &mut impl Rng, p: u32, n: i64) -> TrigPolynomial {
    let len = (p as usize).pow(n as u32 + 1);
    let values: Vec<Complex64> = (0..len)
        .map(|k| match k {
            0 => Complex64::new(1.0, 0.0),
            k if k % p as usize != 0 => Complex64::new(0.0, 0.0),
            _ => Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI)),
        })
        .collect();
    let h = transform(p, &values, Direction::Negative);
    let w = p as f64 / len as f64;
    TrigPolynomial::new(p, h.iter().map(|c| c * w).collect()).expect("prime")
}

/// Random complex vector with entries in the unit square.
pub fn random_values(rng: &mut impl Rng, len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

pub fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}
