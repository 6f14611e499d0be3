//! Globally adaptive Gauss-Kronrod (10/21 point) quadrature.
//!
//! Infinite ranges are mapped onto finite ones with `x = a + u/(1-u)`
//! (and the mirrored form for a lower infinite limit); the whole real line
//! is split at a caller-chosen centre.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const MAX_INTERVALS: usize = 2000;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Outcome of a successful integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub abs_error: f64,
    pub intervals: usize,
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let x = half * XGK[j];
        let f1 = f(centre - x);
        let f2 = f(centre + x);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() {
        error = f64::INFINITY;
    }
    Segment { a, b, value, error }
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<Quadrature> {
    let first = gauss_kronrod(f, a, b);
    let mut total = first.value;
    let mut total_err = first.error;
    let mut heap = BinaryHeap::new();
    let mut frozen_err = 0.0;
    heap.push(first);
    let mut count = 1;
    loop {
        let tol = abs_tol.max(rel_tol * total.abs());
        if total_err <= tol && total.is_finite() {
            return Ok(Quadrature { value: total, abs_error: total_err, intervals: count });
        }
        if count >= MAX_INTERVALS {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        let width = worst.b - worst.a;
        if width <= 64.0 * f64::EPSILON * worst.a.abs().max(worst.b.abs())
            || width < 1e-250
            || mid <= worst.a
            || mid >= worst.b
        {
            // cannot be refined further; its error stays in the total
            frozen_err += worst.error;
            total_err = heap.iter().map(|s| s.error).sum::<f64>() + frozen_err;
            if heap.is_empty() {
                break;
            }
            continue;
        }
        let left = gauss_kronrod(f, worst.a, mid);
        let right = gauss_kronrod(f, mid, worst.b);
        heap.push(left);
        heap.push(right);
        count += 1;
        // resum to avoid drift in the running totals
        total = heap.iter().map(|s| s.value).sum();
        total_err = heap.iter().map(|s| s.error).sum::<f64>() + frozen_err;
    }
    let tol = abs_tol.max(rel_tol * total.abs());
    Err(Error::Accuracy { estimate: total, error: total_err, tolerance: tol })
}

/// Integrate `f` over `(lo, hi)`; either limit may be infinite. Succeeds when
/// the estimated error is at most `max(abs_tol, rel_tol * |value|)`.
pub fn integrate<F>(f: F, lo: f64, hi: f64, abs_tol: f64, rel_tol: f64) -> Result<Quadrature>
where
    F: Fn(f64) -> f64,
{
    let centre = if lo.is_finite() {
        lo
    } else if hi.is_finite() {
        hi
    } else {
        0.0
    };
    integrate_about(f, lo, hi, centre, abs_tol, rel_tol)
}

/// As [`integrate`], splitting a doubly infinite range at `centre`. The
/// centre should sit near the bulk of the integrand.
pub fn integrate_about<F>(f: F, lo: f64, hi: f64, centre: f64, abs_tol: f64, rel_tol: f64) -> Result<Quadrature>
where
    F: Fn(f64) -> f64,
{
    integrate_dyn(&f, lo, hi, centre, abs_tol, rel_tol)
}

fn integrate_dyn(
    f: &dyn Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    centre: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Quadrature> {
    if lo.is_nan() || hi.is_nan() {
        return Err(Error::Domain("integration limit is NaN".into()));
    }
    if lo == hi {
        return Ok(Quadrature { value: 0.0, abs_error: 0.0, intervals: 0 });
    }
    if lo > hi {
        let q = integrate_dyn(f, hi, lo, centre, abs_tol, rel_tol)?;
        return Ok(Quadrature { value: -q.value, ..q });
    }
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => adaptive(&f, lo, hi, abs_tol, rel_tol),
        (true, false) => {
            let g = |u: f64| {
                let d = 1.0 - u;
                let v = f(lo + u / d);
                if v == 0.0 {
                    0.0
                } else {
                    v / (d * d)
                }
            };
            adaptive(&g, 0.0, 1.0, abs_tol, rel_tol)
        }
        (false, true) => {
            let g = |u: f64| {
                let d = 1.0 - u;
                let v = f(hi - u / d);
                if v == 0.0 {
                    0.0
                } else {
                    v / (d * d)
                }
            };
            adaptive(&g, 0.0, 1.0, abs_tol, rel_tol)
        }
        (false, false) => {
            let left = integrate_dyn(f, lo, centre, centre, 0.5 * abs_tol, rel_tol)?;
            let right = integrate_dyn(f, centre, hi, centre, 0.5 * abs_tol, rel_tol)?;
            Ok(Quadrature {
                value: left.value + right.value,
                abs_error: left.abs_error + right.abs_error,
                intervals: left.intervals + right.intervals,
            })
        }
    }
}

/// Relative-tolerance integral over `(lo, hi)`.
pub fn quad_integral<F>(f: F, lo: f64, hi: f64, rel_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate(f, lo, hi, 0.0, rel_tol).map(|q| q.value)
}
