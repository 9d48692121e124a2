// 7-point Gauss / 15-point Kronrod pair on [-1, 1] (QUADPACK qk15 constants).

use crate::Result;

/// Kronrod abscissae, descending; odd indices are the Gauss nodes and the
/// last entry is the centre.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

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

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

pub(crate) const POINTS: usize = 15;

#[derive(Debug, Clone, Copy)]
pub(crate) struct PanelEstimate {
    pub value: f64,
    pub error: f64,
    /// Kronrod integral of the auxiliary channel.
    pub aux: f64,
}

/// Applies the rule on `[lo, hi]`. The error estimate is QUADPACK's scaled
/// Kronrod-Gauss difference with a round-off floor.
///
/// `f` returns the integrand and an auxiliary nonnegative quantity that is
/// integrated alongside with the Kronrod weights only.
pub(crate) fn gk15<F>(f: &mut F, lo: f64, hi: f64) -> Result<PanelEstimate>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    let centre = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);

    let mut eval = |x: f64| -> Result<(f64, f64)> {
        let (v, aux) = f(x)?;
        if !v.is_finite() {
            return Err(crate::Error::NonFinite { at: x, value: v });
        }
        Ok((v, aux))
    };

    let mut left = [0.0; 7];
    let mut right = [0.0; 7];
    let (fc, aux_c) = eval(centre)?;
    let mut aux = WGK[7] * aux_c;
    for j in 0..7 {
        let dx = half * XGK[j];
        let (l, l_aux) = eval(centre - dx)?;
        let (r, r_aux) = eval(centre + dx)?;
        left[j] = l;
        right[j] = r;
        aux += WGK[j] * (l_aux + r_aux);
    }

    let mut res_k = WGK[7] * fc;
    let mut res_g = WG[3] * fc;
    let mut res_abs = res_k.abs();
    for j in 0..7 {
        let pair = left[j] + right[j];
        res_k += WGK[j] * pair;
        res_abs += WGK[j] * (left[j].abs() + right[j].abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * pair;
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((left[j] - mean).abs() + (right[j] - mean).abs());
    }

    let scale = half.abs();
    let value = res_k * half;
    res_abs *= scale;
    res_asc *= scale;
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(PanelEstimate {
        value,
        error,
        aux: aux * scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_integrate_constants() {
        let k: f64 = WGK[7] + 2.0 * WGK[..7].iter().sum::<f64>();
        let g: f64 = WG[3] + 2.0 * WG[..3].iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn single_panel_is_exact_for_degree_13() {
        let mut f = |x: f64| Ok((x.powi(13) + 3.0 * x.powi(6) - 1.0, x));
        let p = gk15(&mut f, 0.0, 1.0).unwrap();
        let exact = 1.0 / 14.0 + 3.0 / 7.0 - 1.0;
        assert!((p.value - exact).abs() < 1e-15);
        assert!(p.error <= 1e-13);
        assert!((p.aux - 0.5).abs() < 1e-15);
    }
}
