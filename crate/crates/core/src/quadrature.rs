//! Globally adaptive Gauss–Kronrod (10/21-point) quadrature on finite
//! intervals. Semi-infinite integrals are mapped onto finite ones by the
//! callers, which know the decay of their integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error(
        "quadrature did not reach tolerance within {subdivisions} subdivisions \
         (estimate {estimate:e}, error estimate {error:e})"
    )]
    NoConvergence {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },
    #[error("integrand is not finite at x = {at}")]
    NonFinite { at: f64 },
}

/// Tolerances and limits for the analytic evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Gamma tail mass left beyond the truncation point of a semi-infinite
    /// integral. Always at most `abs_tol / 10`.
    pub tail_mass: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_subdivisions: 400,
            tail_mass: 1e-25,
        }
    }
}

impl QuadratureSpec {
    /// Purely relative accuracy, for values that are far below any useful
    /// absolute tolerance (deep high-SNR outage probabilities).
    pub fn relative(rel_tol: f64) -> Self {
        Self {
            abs_tol: 1e-300,
            rel_tol,
            ..Self::default()
        }
    }

    pub(crate) fn tighter(&self, factor: f64) -> Self {
        Self {
            abs_tol: self.abs_tol / factor,
            rel_tol: self.rel_tol / factor,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_208_068_642,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<Panel, QuadratureError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    if !fc.is_finite() {
        return Err(QuadratureError::NonFinite { at: center });
    }
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    for j in 0..10 {
        let dx = half * XGK[j];
        let (x1, x2) = (center - dx, center + dx);
        let (f1, f2) = (f(x1), f(x2));
        if !f1.is_finite() {
            return Err(QuadratureError::NonFinite { at: x1 });
        }
        if !f2.is_finite() {
            return Err(QuadratureError::NonFinite { at: x2 });
        }
        kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    Ok(Panel { a, b, value, error })
}

/// Integrate `f` over `[a, b]` until the summed panel error is below
/// `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<F>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Estimate, QuadratureError>
where
    F: FnMut(f64) -> f64,
{
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
            subdivisions: 0,
        });
    }
    let first = kronrod21(&mut f, a, b)?;
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut subdivisions = 1;
    while error > spec.abs_tol.max(spec.rel_tol * value.abs()) {
        if subdivisions >= spec.max_subdivisions {
            return Err(QuadratureError::NoConvergence {
                estimate: value,
                error,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap holds every panel");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel cannot be split further in floating point.
            heap.push(worst);
            return Err(QuadratureError::NoConvergence {
                estimate: value,
                error,
                subdivisions,
            });
        }
        let left = kronrod21(&mut f, worst.a, mid)?;
        let right = kronrod21(&mut f, mid, worst.b)?;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }
    // Re-sum to shed the drift from incremental updates.
    let value = heap.iter().map(|p| p.value).sum();
    let error = heap.iter().map(|p| p.error).sum();
    Ok(Estimate {
        value,
        error,
        subdivisions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_rule_is_exact_for_degree_31() {
        let mut f = |x: f64| x.powi(30) + 3.0 * x.powi(31) - x.powi(7);
        let panel = kronrod21(&mut f, -1.0, 1.0).unwrap();
        assert!((panel.value - 2.0 / 31.0).abs() < 1e-14);
        // Gauss 10-point is exact up to degree 19.
        let mut g = |x: f64| x.powi(18) + x.powi(19);
        let p = kronrod21(&mut g, -1.0, 1.0).unwrap();
        assert!(p.error < 1e-14);
        assert!((p.value - 2.0 / 19.0).abs() < 1e-14);
    }

    #[test]
    fn weights_sum_to_interval_length() {
        let k: f64 = WGK[10] + 2.0 * WGK[..10].iter().sum::<f64>();
        let g: f64 = 2.0 * WG.iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-14);
        assert!((g - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_peaks_and_endpoint_singularities() {
        let spec = QuadratureSpec::relative(1e-12);
        let est = integrate(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, &spec).unwrap();
        let exact = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!(((est.value - exact) / exact).abs() < 1e-11);

        let est = integrate(|x: f64| x.powf(-0.5), 0.0, 1.0, &QuadratureSpec::relative(1e-9)).unwrap();
        assert!((est.value - 2.0).abs() < 1e-8);
    }

    #[test]
    fn reports_failure_with_estimate() {
        let spec = QuadratureSpec {
            max_subdivisions: 3,
            ..QuadratureSpec::relative(1e-14)
        };
        match integrate(|x| (1.0 / (x + 1e-9)).sin(), 0.0, 1.0, &spec) {
            Err(QuadratureError::NoConvergence { subdivisions, .. }) => assert_eq!(subdivisions, 3),
            other => panic!("expected failure, got {other:?}"),
        }
        assert!(matches!(
            integrate(|_| f64::NAN, 0.0, 1.0, &spec),
            Err(QuadratureError::NonFinite { .. })
        ));
    }
}
