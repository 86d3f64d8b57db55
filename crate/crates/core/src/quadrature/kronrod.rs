use crate::scalar::Real;

use super::QuadError;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_22,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_725,
    0.054_755_896_574_351_995,
    0.075_039_674_810_919_96,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_84,
    0.134_709_217_311_473_34,
    0.142_775_938_577_060_09,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9]
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

/// One 21-point Kronrod panel with its embedded 10-point Gauss estimate.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PanelEstimate<T> {
    pub value: T,
    pub error: T,
}

fn checked<T: Real, F: Fn(T) -> T>(f: &F, x: T) -> Result<T, QuadError> {
    let y = f(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(QuadError::NonFiniteIntegrand { at: x.f64() })
    }
}

/// Gauss–Kronrod 10/21 on [a, b] with the QUADPACK error rescaling.
pub(crate) fn gk21<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> Result<PanelEstimate<T>, QuadError> {
    let two = T::lit(2.0);
    let center = (a + b) / two;
    let half = (b - a) / two;
    let abs_half = half.abs();

    let fc = checked(f, center)?;
    let mut res_k = fc * T::lit(WGK[10]);
    let mut res_g = T::zero();
    let mut res_abs = res_k.abs();
    let mut f1 = [T::zero(); 10];
    let mut f2 = [T::zero(); 10];

    for j in 0..10 {
        let dx = half * T::lit(XGK[j]);
        let lo = checked(f, center - dx)?;
        let hi = checked(f, center + dx)?;
        f1[j] = lo;
        f2[j] = hi;
        let w = T::lit(WGK[j]);
        res_k += w * (lo + hi);
        res_abs += w * (lo.abs() + hi.abs());
        if j % 2 == 1 {
            res_g += T::lit(WG[j / 2]) * (lo + hi);
        }
    }

    let mean = res_k / two;
    let mut res_asc = T::lit(WGK[10]) * (fc - mean).abs();
    for j in 0..10 {
        res_asc += T::lit(WGK[j]) * ((f1[j] - mean).abs() + (f2[j] - mean).abs());
    }

    let value = res_k * half;
    res_abs *= abs_half;
    res_asc *= abs_half;
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != T::zero() && error != T::zero() {
        let ratio = (T::lit(200.0) * error / res_asc).powf(T::lit(1.5));
        error = res_asc * ratio.min(T::one());
    }
    let eps = T::epsilon();
    if res_abs > T::min_positive_value() / (T::lit(50.0) * eps) {
        error = error.max(T::lit(50.0) * eps * res_abs);
    }
    Ok(PanelEstimate { value, error })
}
