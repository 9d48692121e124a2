use crate::quad::{integrate1d, Tolerance};
use crate::{Error, Result};

// Lanczos approximation, g = 671/128, 14 terms (Numerical Recipes, 3rd ed.).
const LANCZOS_G: f64 = 5.242_187_5;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_092;
const LANCZOS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// Natural logarithm of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "ln_gamma requires a finite x > 0, got {x}"
        )));
    }
    // Exact at the zeros of ln Γ.
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    let tmp = x + LANCZOS_G;
    let tmp = (x + 0.5) * tmp.ln() - tmp;
    let mut ser = LANCZOS_C0;
    let mut denom = x;
    for c in LANCZOS {
        denom += 1.0;
        ser += c / denom;
    }
    Ok(tmp + (SQRT_2PI * ser / x).ln())
}

/// Euler Beta function `Γ(x)Γ(y)/Γ(x+y)`.
pub fn beta(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "beta requires x, y > 0, got ({x}, {y})"
        )));
    }
    Ok((ln_gamma(x)? + ln_gamma(y)? - ln_gamma(x + y)?).exp())
}

/// `int_0^1 t^(x-1) (1-t)^(y-1) dt` by adaptive quadrature, for `x, y >= 1`
/// where the integrand is bounded.
pub fn beta_by_quadrature(x: f64, y: f64, tol: &Tolerance) -> Result<f64> {
    if !(x >= 1.0 && y >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "quadrature cross-check needs x, y >= 1, got ({x}, {y})"
        )));
    }
    let r = integrate1d(|t| t.powf(x - 1.0) * (1.0 - t).powf(y - 1.0), 0.0, 1.0, tol)?;
    Ok(r.value)
}
