//! Adaptive Gauss-Kronrod (7/15) quadrature and the Caputo-derivative oracle
//! built on it.

use statrs::function::gamma::gamma as gamma_fn;

use crate::error::{domain, Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5 and the centre.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_INTERVALS: usize = 2000;

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let dx = half * x;
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol` by global
/// bisection of the interval with the largest error estimate.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (value, err) = gk15(&f, a, b);
    let mut segments = vec![(a, b, value, err)];
    let mut total_err = err;
    while !(total_err <= tol) {
        if segments.len() >= MAX_INTERVALS || !total_err.is_finite() {
            return Err(Error::OracleFailure {
                achieved: total_err,
                requested: tol,
            });
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("at least one segment");
        let (lo, hi, _, e) = segments.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        total_err += e1 + e2 - e;
        segments.push((lo, mid, v1, e1));
        segments.push((mid, hi, v2, e2));
    }
    Ok(segments.iter().map(|s| s.2).sum())
}

/// Absolute accuracy targeted by [`caputo_oracle`].
pub const ORACLE_TOL: f64 = 1e-10;

/// Caputo derivative `int_0^t v'(s) (t - s)^(-gamma) ds / Gamma(1 - gamma)`.
///
/// The substitution `r = (t - s)^(1 - gamma)` turns the weakly singular
/// integral into `1/(1 - gamma) int_0^{t^(1-gamma)} v'(t - r^(1/(1-gamma))) dr`
/// with a smooth integrand.
pub fn caputo_oracle(v_prime: impl Fn(f64) -> f64, t: f64, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(domain("gamma", format!("{gamma} not in (0, 1)")));
    }
    if !(t > 0.0) {
        return Err(domain("t", format!("{t} must be positive")));
    }
    let p = 1.0 - gamma;
    let scale = 1.0 / (p * gamma_fn(p));
    let upper = t.powf(p);
    // the integrand tolerance is rescaled so the final value meets ORACLE_TOL
    let tol = 0.1 * ORACLE_TOL / scale.max(1.0);
    let integral = integrate(|r| v_prime(t - r.powf(1.0 / p)), 0.0, upper, tol)?;
    Ok(scale * integral)
}
