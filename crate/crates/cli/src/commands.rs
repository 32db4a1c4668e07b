use std::fs;
use std::path::PathBuf;

use padic_mra::frame::{frame_bounds, multi_scale_bounds, FrameReport, TranslateFamily};
use padic_mra::io::{parse_points, read_json, to_json, MaskFile, OutputFormat, Report, RunConfig};
use padic_mra::mra::{certify_mask, verify_mra, MraReport, Scaling};
use padic_mra::oracle::ExactMask;
use padic_mra::wavelet::{
    build_wavelet_mask, complement_check, psi_from_mask, spanning_check, WaveletPackage,
    DEFAULT_TRIALS,
};
use padic_mra::{Error, Result, TestFunction, TrigPolynomial};
use serde::Serialize;

use super::Command;

pub const CERTIFIED: u8 = 0;
pub const REFUTED: u8 = 2;

/// Standard output, or files `<name>.json` / `<name>.csv` in a directory.
pub struct Sink {
    dir: Option<PathBuf>,
}

impl Sink {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Self { dir }
    }

    fn emit<T: Serialize>(
        &self,
        name: &str,
        report: &Report<T>,
        csv: Option<String>,
    ) -> Result<()> {
        let json = to_json(report) + "\n";
        let csv = csv.filter(|_| report.config.output_format == OutputFormat::Csv);
        match &self.dir {
            None => print!("{}", csv.unwrap_or(json)),
            Some(dir) => {
                let io = |e: std::io::Error| {
                    Error::Parse(format!("cannot write to {}: {e}", dir.display()))
                };
                fs::create_dir_all(dir).map_err(io)?;
                fs::write(dir.join(format!("{name}.json")), json).map_err(io)?;
                if let Some(csv) = csv {
                    fs::write(dir.join(format!("{name}.csv")), csv).map_err(io)?;
                }
            }
        }
        Ok(())
    }
}

/// Errors that refute the input rather than reject it.
fn is_verdict(e: &Error) -> bool {
    matches!(
        e,
        Error::NoCompactSupport { .. }
            | Error::NoWaveletMask { .. }
            | Error::DegenerateFamily
            | Error::Inconsistent { .. }
    )
}

#[derive(Serialize)]
struct Refutation {
    certified: bool,
    reason: String,
}

fn refute(name: &str, config: &RunConfig, sink: &Sink, e: Error) -> Result<u8> {
    let body = Refutation {
        certified: false,
        reason: e.to_string(),
    };
    sink.emit(
        name,
        &Report {
            config: config.clone(),
            body,
        },
        None,
    )?;
    Ok(REFUTED)
}

/// Least `N ≥ 0` with `deg m < p^{N+1}`.
fn default_refinement_exp(m: &TrigPolynomial) -> i64 {
    let p = m.p() as usize;
    let mut n = 0;
    while p.pow(n as u32 + 1) <= m.degree() {
        n += 1;
    }
    n
}

fn status(ok: bool) -> u8 {
    if ok {
        CERTIFIED
    } else {
        REFUTED
    }
}

pub fn run(command: &Command, config: &RunConfig, sink: &Sink) -> Result<u8> {
    let (name, outcome) = match command {
        Command::Haar { p } => ("haar", haar(*p, config, sink)),
        Command::MaskFromZeros { p, degree, zeros } => {
            ("mask", mask_from_zeros(*p, *degree, zeros, config, sink))
        }
        Command::Scaling { mask, n } => ("scaling", scaling(&read_json(mask)?, *n, config, sink)),
        Command::Verify { input } => ("verify", verify(&read_json(input)?, config, sink)),
        Command::Wavelet { mask, n } => ("wavelet", wavelet(&read_json(mask)?, *n, config, sink)),
        Command::FrameBounds {
            psi,
            radius,
            scales,
        } => (
            "frame",
            frame(&read_json(psi)?, *radius, scales.as_deref(), config, sink),
        ),
        Command::Transform { input, inverse } => (
            "transform",
            transform(&read_json(input)?, *inverse, config, sink),
        ),
    };
    match outcome {
        Err(e) if is_verdict(&e) => refute(name, config, sink, e),
        other => other,
    }
}

#[derive(Serialize)]
struct HaarBundle {
    mask: TrigPolynomial,
    phi_hat: TestFunction,
    mra: MraReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    wavelet: Option<WaveletPackage>,
    #[serde(skip_serializing_if = "Option::is_none")]
    frame: Option<FrameReport>,
}

fn haar(p: u32, config: &RunConfig, sink: &Sink) -> Result<u8> {
    let mask = TrigPolynomial::haar(p)?;
    let exact = if config.exact {
        ExactMask::from_trig(&mask)
    } else {
        None
    };
    let (s, mra) = certify_mask(&mask, 0, config.max_support, config.tol, exact.as_ref())?;
    let mut ok = mra.is_mra && mra.orthonormal_gram && mra.orthonormal_spectral;
    let (wavelet, frame) = if p == 2 {
        let pkg = package(&mask, &s.phi_hat, config)?.ok_or(Error::NoWaveletMask {
            trials: DEFAULT_TRIALS,
        })?;
        let f = frame_bounds(&TranslateFamily::new(pkg.psi.clone(), 0, 2), config.tol)?;
        ok &= f.stable_under_radius_growth
            && (f.lower_bound - 1.0).abs() <= 1e-9
            && (f.upper_bound - 1.0).abs() <= 1e-9;
        (Some(pkg), Some(f))
    } else {
        (None, None)
    };
    let csv = s.phi_hat.to_csv();
    let body = HaarBundle {
        mask,
        phi_hat: s.phi_hat,
        mra,
        wavelet,
        frame,
    };
    sink.emit(
        "haar",
        &Report {
            config: config.clone(),
            body,
        },
        Some(csv),
    )?;
    Ok(status(ok))
}

fn mask_from_zeros(
    p: u32,
    degree: usize,
    zeros: &[String],
    config: &RunConfig,
    sink: &Sink,
) -> Result<u8> {
    let points = parse_points(p, zeros)?;
    let mask = TrigPolynomial::from_zeros(p, degree, &points)?;
    let csv = coefficient_csv(&mask);
    let body = MaskFile::from_mask(&mask, Some(&points), Some(degree));
    sink.emit(
        "mask",
        &Report {
            config: config.clone(),
            body,
        },
        Some(csv),
    )?;
    Ok(CERTIFIED)
}

fn coefficient_csv(m: &TrigPolynomial) -> String {
    let mut out = String::from("k,re,im\n");
    for (k, h) in m.coeffs().iter().enumerate() {
        out += &format!("{k},{:?},{:?}\n", h.re, h.im);
    }
    out
}

#[derive(Serialize)]
struct ScalingBundle {
    #[serde(flatten)]
    scaling: Scaling,
    exact_available: bool,
    mra: MraReport,
}

fn exact_for(file: &MaskFile, config: &RunConfig) -> Result<Option<ExactMask>> {
    if config.exact {
        file.exact()
    } else {
        Ok(None)
    }
}

fn scaling(file: &MaskFile, n: Option<i64>, config: &RunConfig, sink: &Sink) -> Result<u8> {
    let mask = file.mask()?;
    let n = n.unwrap_or_else(|| default_refinement_exp(&mask));
    let exact = exact_for(file, config)?;
    let (scaling, mra) = certify_mask(&mask, n, config.max_support, config.tol, exact.as_ref())?;
    let ok = mra.is_mra;
    let csv = scaling.phi_hat.to_csv();
    let body = ScalingBundle {
        scaling,
        exact_available: exact.is_some(),
        mra,
    };
    sink.emit(
        "scaling",
        &Report {
            config: config.clone(),
            body,
        },
        Some(csv),
    )?;
    Ok(status(ok))
}

fn verify(phi: &TestFunction, config: &RunConfig, sink: &Sink) -> Result<u8> {
    let mut mra = verify_mra(phi, config.tol);
    if config.exact {
        if let Some(exact) = mra.extracted_mask.as_ref().and_then(ExactMask::from_trig) {
            mra.apply_exact(&exact);
        }
    }
    let ok = mra.is_mra;
    let csv = phi.fourier().to_csv();
    sink.emit(
        "verify",
        &Report {
            config: config.clone(),
            body: mra,
        },
        Some(csv),
    )?;
    Ok(status(ok))
}

/// Mask search and both checks; `None` when a check fails.
fn package(
    m0: &TrigPolynomial,
    phi_hat: &TestFunction,
    config: &RunConfig,
) -> Result<Option<WaveletPackage>> {
    let wm = build_wavelet_mask(m0, phi_hat, config.seed, DEFAULT_TRIALS, config.tol)?;
    let (psi_hat, psi) = psi_from_mask(&wm.n0, phi_hat)?;
    let complement_ok = complement_check(&phi_hat.inverse_fourier(), &psi, config.tol)?;
    let spanning_ok = spanning_check(m0, &wm.n0, phi_hat, config.tol)?;
    Ok((complement_ok && spanning_ok).then_some(WaveletPackage {
        seed: config.seed,
        trial: wm.trial,
        n0: wm.n0,
        psi,
        psi_hat,
        system: wm.system,
        complement_ok,
        spanning_ok,
    }))
}

#[derive(Serialize)]
struct WaveletBundle {
    mra: MraReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    package: Option<WaveletPackage>,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure: Option<String>,
}

fn wavelet(file: &MaskFile, n: Option<i64>, config: &RunConfig, sink: &Sink) -> Result<u8> {
    let mask = file.mask()?;
    if mask.p() != 2 {
        return Err(Error::NotApplicable(format!(
            "wavelet masks are built for p = 2, got p = {}",
            mask.p()
        )));
    }
    let n = n.unwrap_or_else(|| default_refinement_exp(&mask));
    let exact = exact_for(file, config)?;
    let (scaling, mra) = certify_mask(&mask, n, config.max_support, config.tol, exact.as_ref())?;
    let (package, failure) = if !mra.is_mra {
        (None, Some("mask does not generate an MRA".to_string()))
    } else {
        match package(&mask, &scaling.phi_hat, config)? {
            Some(pkg) => (Some(pkg), None),
            None => (
                None,
                Some("complement or spanning check failed".to_string()),
            ),
        }
    };
    let ok = package.is_some();
    let csv = package.as_ref().map(|pkg| pkg.psi.to_csv());
    sink.emit(
        "wavelet",
        &Report {
            config: config.clone(),
            body: WaveletBundle {
                mra,
                package,
                failure,
            },
        },
        csv,
    )?;
    Ok(status(ok))
}

fn parse_scales(text: &str) -> Result<(i64, i64)> {
    let parse = |s: &str| {
        s.trim()
            .parse::<i64>()
            .map_err(|e| Error::Parse(format!("scale {s:?}: {e}")))
    };
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("scales must be jmin:jmax, got {text:?}")))?;
    Ok((parse(a)?, parse(b)?))
}

fn frame(
    psi: &TestFunction,
    radius: u32,
    scales: Option<&str>,
    config: &RunConfig,
    sink: &Sink,
) -> Result<u8> {
    let report = match scales {
        Some(range) => {
            let (j_min, j_max) = parse_scales(range)?;
            multi_scale_bounds(psi, j_min, j_max, radius)?
        }
        None => frame_bounds(&TranslateFamily::new(psi.clone(), 0, radius), config.tol)?,
    };
    let ok = report.lower_bound > 0.0 && report.stable_under_radius_growth;
    let mut csv = String::from("index,eigenvalue\n");
    for (i, e) in report.gram_eigenvalues.iter().enumerate() {
        csv += &format!("{i},{e:?}\n");
    }
    sink.emit(
        "frame",
        &Report {
            config: config.clone(),
            body: report,
        },
        Some(csv),
    )?;
    Ok(status(ok))
}

fn transform(f: &TestFunction, inverse: bool, config: &RunConfig, sink: &Sink) -> Result<u8> {
    let g = if inverse {
        f.inverse_fourier()
    } else {
        f.fourier()
    };
    let csv = g.to_csv();
    sink.emit(
        "transform",
        &Report {
            config: config.clone(),
            body: g,
        },
        Some(csv),
    )?;
    Ok(CERTIFIED)
}
