//! Adaptive Gauss–Kronrod quadrature and alternating-series acceleration.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Accuracy controls shared by every quadrature-backed evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Reduced frequency `ω/γ` beyond which oscillatory tails are summed by
    /// series acceleration instead of direct quadrature.
    pub omega_tail: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-300,
            max_subdivisions: 4000,
            omega_tail: 2.0,
        }
    }
}

impl QuadratureSpec {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }
}

/// Result of an adaptive integration.
#[derive(Clone, Copy, Debug)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

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
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_258_050,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Weights of the embedded 10-point Gauss rule, on XGK[1], XGK[3], ..., XGK[9].
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Clone, Copy, Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
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

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    let mut abs_sum = kronrod.abs();
    let mut fv = [0.0; 20];
    for j in 0..10 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        fv[2 * j] = f1;
        fv[2 * j + 1] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        asc += WGK[j] * ((fv[2 * j] - mean).abs() + (fv[2 * j + 1] - mean).abs());
    }
    let value = kronrod * h;
    let asc = asc * h.abs();
    let abs_sum = abs_sum * h.abs();
    let mut error = ((kronrod - gauss) * h).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    let round = 50.0 * f64::EPSILON * abs_sum;
    if abs_sum > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(round);
    }
    Segment { a, b, value, error }
}

/// Globally adaptive 21-point Gauss–Kronrod integration of `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    if a == b {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
            subdivisions: 0,
        });
    }
    let first = gk21(&f, a, b);
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut count = 1;
    loop {
        let tol = spec.abs_tol.max(spec.rel_tol * value.abs());
        if error <= tol {
            break;
        }
        if !value.is_finite() || count >= spec.max_subdivisions {
            return Err(Error::QuadratureFailure {
                estimate: value,
                error_estimate: error,
                subdivisions: count,
            });
        }
        let worst = heap.pop().expect("heap holds every live segment");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // Interval cannot be split further in floating point.
            return Err(Error::QuadratureFailure {
                estimate: value,
                error_estimate: error,
                subdivisions: count,
            });
        }
        let left = gk21(&f, worst.a, mid);
        let right = gk21(&f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        count += 1;
        // Re-sum occasionally to stop drift from the running updates.
        if count % 64 == 0 {
            value = heap.iter().map(|s| s.value).sum();
            error = heap.iter().map(|s| s.error).sum();
        }
    }
    let value = heap.iter().map(|s| s.value).sum();
    Ok(Integral {
        value,
        error,
        subdivisions: count,
    })
}

/// Sum of `Σ (-1)^k a_k` by the Cohen–Villegas–Zagier acceleration, using the
/// first `n` magnitudes.
pub fn cvz_alternating(magnitudes: &[f64], n: usize) -> f64 {
    assert!(n <= magnitudes.len());
    let mut d = (3.0 + 8f64.sqrt()).powi(n as i32);
    d = 0.5 * (d + 1.0 / d);
    let mut b = -1.0;
    let mut c = -d;
    let mut s = 0.0;
    for (k, &ak) in magnitudes.iter().take(n).enumerate() {
        c = b - c;
        s += c * ak;
        let kf = k as f64;
        let nf = n as f64;
        b = (kf + nf) * (kf - nf) * b / ((kf + 0.5) * (kf + 1.0));
    }
    s / d
}

/// Integral of `amplitude(w) * trig(w)` over `[start, ∞)` where `start` is a
/// zero of the oscillating factor and consecutive zeros are `half_period`
/// apart. The amplitude must be smooth and decay monotonically.
pub fn oscillatory_tail<F: Fn(f64) -> f64>(
    integrand: F,
    start: f64,
    half_period: f64,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    const TERMS: usize = 40;
    const CHECK: usize = 30;
    let inner = QuadratureSpec {
        rel_tol: spec.rel_tol * 0.1,
        abs_tol: 0.0,
        ..*spec
    };
    let mut magnitudes = Vec::with_capacity(TERMS);
    let mut sign = 1.0;
    let mut subdivisions = 0;
    let mut first = None;
    for k in 0..TERMS {
        let a = start + k as f64 * half_period;
        let b = a + half_period;
        let seg = integrate(&integrand, a, b, &inner)?;
        subdivisions += seg.subdivisions;
        if first.is_none() {
            first = Some(seg.value);
        }
        magnitudes.push(sign * seg.value);
        sign = -sign;
    }
    // Normalize so the alternation starts with a positive magnitude.
    let lead = first.unwrap_or(0.0).signum();
    let lead = if lead == 0.0 { 1.0 } else { lead };
    for m in magnitudes.iter_mut() {
        *m *= lead;
    }
    let full = cvz_alternating(&magnitudes, TERMS) * lead;
    let check = cvz_alternating(&magnitudes, CHECK) * lead;
    let error = (full - check).abs();
    let tol = spec.abs_tol.max(spec.rel_tol * full.abs());
    if !full.is_finite() || error > tol.max(1e-15 * magnitudes[0].abs()) {
        return Err(Error::QuadratureFailure {
            estimate: full,
            error_estimate: error,
            subdivisions,
        });
    }
    Ok(Integral {
        value: full,
        error,
        subdivisions,
    })
}
