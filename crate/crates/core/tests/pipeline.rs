mod common;

use common::{pattern_mask, random_instance, random_values, TOL};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use padic_mra::fixtures::{haar_phi, kozyrev_psi, wide_support_mask, wide_support_zeros};
use padic_mra::frame::{
    cross_scale_max, frame_bounds, gram_matrix, hermiticity_defect, multi_scale_bounds,
    TranslateFamily,
};
use padic_mra::mra::{certify_mask, extract_mask, product_formula, scaling_from_mask, verify_mra};
use padic_mra::oracle::{
    direct_refinement_residual, resultant_by_roots, CyclotomicValue, ExactMask,
};
use padic_mra::wavelet::{construct_wavelet, resultant_nonzero};
use padic_mra::{PAdicRational, TrigPolynomial};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn extracted_mask_reproduces_spectrum() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let p = if rng.gen_bool(0.5) { 2 } else { 3 };
        let n = rng.gen_range(0..=if p == 2 { 2 } else { 1 });
        let big_m = rng.gen_range(0..=1);
        let inst = random_instance(&mut rng, p, n, big_m, 0);
        let s = scaling_from_mask(&inst.mask, n, 6, TOL).unwrap();
        let phi = s.phi();
        let (fitted, residual) = extract_mask(&phi).unwrap();
        assert!(residual <= 1e-10, "residual {residual}");
        let grid = s.phi_hat.grid();
        for j in 0..grid.size() {
            let v = product_formula(&fitted, n, &grid.node(j));
            assert!((v - s.phi_hat.values()[j]).norm() <= 1e-10);
        }
        assert!(
            direct_refinement_residual(&phi.embed(n, grid.support_exp()).unwrap(), &fitted)
                <= 1e-10
        );
    }
}

#[test]
fn refinement_residual_examples() {
    let omega = haar_phi(2).unwrap();
    assert!(direct_refinement_residual(&omega, &TrigPolynomial::haar(2).unwrap()) <= 1e-12);
    let bad = TrigPolynomial::from_real(2, &[1.0, -1.0]).unwrap();
    assert!(direct_refinement_residual(&omega, &bad) >= 1.0);
    let s = scaling_from_mask(&wide_support_mask().unwrap(), 2, 20, TOL).unwrap();
    let phi = s.phi();
    let (fitted, _) = extract_mask(&phi).unwrap();
    assert!(direct_refinement_residual(&phi, &fitted) <= 1e-10);
}

#[test]
fn sphere_vanishing_propagates_outward() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..20 {
        let p = if rng.gen_bool(0.5) { 2 } else { 3 };
        let n = rng.gen_range(0..=1);
        let design = rng.gen_range(0..=1);
        let inst = random_instance(&mut rng, p, n, design, 1);
        let big_m = scaling_from_mask(&inst.mask, n, 6, TOL)
            .unwrap()
            .support_exp;
        for gamma in [big_m + 2, big_m + 3] {
            for _ in 0..50 {
                let unit = loop {
                    let u: i64 = rng.gen_range(1..100_000);
                    if u % p as i64 != 0 {
                        break u;
                    }
                };
                let xi = PAdicRational::new(p, unit, -gamma);
                assert!(product_formula(&inst.mask, n, &xi).norm() <= TOL);
            }
        }
    }
}

fn small_rational(rng: &mut impl Rng) -> BigRational {
    BigRational::new(
        BigInt::from(rng.gen_range(-12i64..=12)),
        BigInt::from(rng.gen_range(1i64..=8)),
    )
}

/// Coefficients of `Q(z)·Σ_{t<p} z^{t p^{s−1}}` for random rational `Q`: the
/// product vanishes at every primitive `p^s`-th root of unity.
fn rational_mask_with_zeros(rng: &mut impl Rng, p: u32, s: u32) -> Vec<BigRational> {
    let q: Vec<BigRational> = (0..rng.gen_range(1..4))
        .map(|_| small_rational(rng))
        .collect();
    let step = (p as usize).pow(s - 1);
    let mut out = vec![BigRational::from_integer(0.into()); q.len() + step * (p as usize - 1)];
    for (i, c) in q.iter().enumerate() {
        for t in 0..p as usize {
            out[i + t * step] += c;
        }
    }
    out
}

#[test]
fn exact_and_float_zero_tests_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut zeros_seen = 0;
    for trial in 0..1000 {
        let p = [2u32, 3, 5][trial % 3];
        let s = rng.gen_range(1..=3);
        let coeffs: Vec<BigRational> = if rng.gen_bool(0.5) {
            rational_mask_with_zeros(&mut rng, p, s)
        } else {
            (0..rng.gen_range(1..7))
                .map(|_| small_rational(&mut rng))
                .collect()
        };
        let floats: Vec<Complex64> = coeffs
            .iter()
            .map(|c| Complex64::new(num_traits::ToPrimitive::to_f64(c).unwrap(), 0.0))
            .collect();
        let exact = ExactMask::new(
            p,
            coeffs
                .into_iter()
                .map(|c| CyclotomicValue::rational(p, 0, c))
                .collect(),
        );
        let float = TrigPolynomial::new(p, floats).unwrap();
        let level = rng.gen_range(1..=3);
        let l = rng.gen_range(0..(p as u64).pow(level));
        let e = exact.eval(l, level).is_zero();
        let f = float.eval_at(l, level).norm() <= TOL;
        assert_eq!(e, f, "p={p} l={l} level={level}");
        zeros_seen += e as usize;
    }
    assert!(zeros_seen > 50);
}

#[test]
fn wide_support_exact_certificate() {
    let exact = ExactMask::from_roots(2, &wide_support_zeros());
    let (_, report) =
        certify_mask(&wide_support_mask().unwrap(), 2, 20, TOL, Some(&exact)).unwrap();
    let cert = report.exact.as_ref().unwrap();
    assert_eq!(cert.zero_indices, vec![1, 2, 3, 5]);
    assert!(cert.sphere_vanishes && cert.agrees_with_float && report.is_mra);
}

/// `base(z)·(z − root)` in ascending coefficients.
fn with_root(base: &[Complex64], root: Complex64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); base.len() + 1];
    for (k, c) in base.iter().enumerate() {
        out[k + 1] += c;
        out[k] -= c * root;
    }
    out
}

#[test]
fn resultant_matches_common_root_criterion() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for n in 0..=3i64 {
        let band = 1usize << n;
        for trial in 0..20 {
            let shared = trial % 2 == 0;
            let deg = rng.gen_range(1..=band);
            let (g, h) = if shared {
                let root = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
                let g = with_root(&random_values(&mut rng, deg), root);
                let h = with_root(&random_values(&mut rng, deg), root);
                (g, h)
            } else {
                // One side reaches degree 2^N; otherwise both share the root at infinity.
                (
                    random_values(&mut rng, band + 1),
                    random_values(&mut rng, deg + 1),
                )
            };
            let g_mask =
                TrigPolynomial::new(2, g.iter().take(band + 1).cloned().collect()).unwrap();
            let h_mask =
                TrigPolynomial::new(2, h.iter().take(band + 1).cloned().collect()).unwrap();
            if g_mask.degree() > band || h_mask.degree() > band {
                continue;
            }
            let (ok, sys) = resultant_nonzero(&h_mask, &g_mask, n, 1e-8).unwrap();
            let (gp, hp) = sys.padded_coeffs();
            let by_roots = resultant_by_roots(&gp, &hp);
            assert_eq!(ok, !shared, "N={n} trial={trial}");
            assert!((sys.det.norm() - by_roots.norm()).abs() <= 1e-8 * (1.0 + by_roots.norm()));
        }
    }
}

#[test]
fn wavelet_packages_satisfy_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut built = 0;
    for _ in 0..30 {
        let n = rng.gen_range(0..=2);
        let big_m = rng.gen_range(0..=1);
        let inst = random_instance(&mut rng, 2, n, big_m, 0);
        if inst.mask.degree() > 1 << n {
            continue;
        }
        let s = scaling_from_mask(&inst.mask, n, 6, TOL).unwrap();
        if !verify_mra(&s.phi(), TOL).is_mra {
            continue;
        }
        let pkg = construct_wavelet(&inst.mask, &s.phi_hat, 0, TOL).unwrap();
        built += 1;
        assert!(pkg.complement_ok && pkg.spanning_ok);
        for (l, psi) in pkg.psi_hat.values().iter().enumerate() {
            let phi = s.phi_hat.evaluate(&pkg.psi_hat.grid().node(l));
            assert!(psi.norm() <= TOL || phi.norm() <= TOL);
        }
        assert!(pkg.psi_hat.values()[0].norm() <= TOL);
        for (j, k) in [(0, 1), (-1, 1), (0, 2)] {
            assert!(cross_scale_max(&pkg.psi, j, k, 1).unwrap() <= 1e-9);
        }
    }
    assert!(built >= 5, "only {built} packages");
}

#[test]
fn gram_matrices_are_hermitian() {
    let s = scaling_from_mask(&wide_support_mask().unwrap(), 2, 20, TOL).unwrap();
    let g = gram_matrix(&TranslateFamily::new(s.phi(), 0, 2)).unwrap();
    assert!(hermiticity_defect(&g) <= 1e-12);
    let off_identity = (g.clone() - padic_mra::linalg::CMatrix::identity(g.nrows(), g.ncols()))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    assert!(off_identity > 1e-3);
    let k = gram_matrix(&TranslateFamily::new(kozyrev_psi().unwrap(), 1, 3)).unwrap();
    assert!(hermiticity_defect(&k) <= 1e-12);
}

#[test]
fn wide_support_wavelet_frame() {
    let m = wide_support_mask().unwrap();
    let s = scaling_from_mask(&m, 2, 20, TOL).unwrap();
    let pkg = construct_wavelet(&m, &s.phi_hat, 0, TOL).unwrap();
    let r = frame_bounds(&TranslateFamily::new(pkg.psi.clone(), 0, 2), TOL).unwrap();
    assert!(0.0 < r.lower_bound && r.lower_bound <= r.upper_bound);
    assert!(r.stable_under_radius_growth);
    assert_eq!(r.block_orthogonal, Some(true));
    let ms = multi_scale_bounds(&pkg.psi, 0, 1, 2).unwrap();
    assert!((ms.lower_bound - r.lower_bound).abs() <= 1e-8);
    assert!((ms.upper_bound - r.upper_bound).abs() <= 1e-8);
}

#[test]
fn pattern_masks_give_orthonormal_translates() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for p in [2u32, 3] {
        for n in 0..=1 {
            let m = pattern_mask(&mut rng, p, n);
            assert!(padic_mra::mra::classify_orthogonal_mask(&m, n, 1e-9).unwrap());
            let s = scaling_from_mask(&m, n, 6, TOL).unwrap();
            assert_eq!(s.support_exp, 0);
            assert!(padic_mra::mra::orthonormality_gram(&s.phi(), TOL));
        }
    }
}
