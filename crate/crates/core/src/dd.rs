//! Double-double arithmetic, just enough to form the mixture weights to
//! about 30 significant digits before rounding them to `f64`.
//!
//! Large signed weights cancel in `Σ A_i = 1`, so the error in the sum is the
//! per-weight rounding error times `Σ |A_i|`. Plain `f64` products of `n - 1`
//! factors lose several ulps each.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    fn norm(hi: f64, lo: f64) -> Dd {
        let (hi, lo) = quick_two_sum(hi, lo);
        Dd { hi, lo }
    }

    /// `a - b` exactly.
    pub fn diff(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_sum(a, -b);
        Dd { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn scale(self, k: f64) -> Dd {
        // exact for powers of two
        Dd { hi: self.hi * k, lo: self.lo * k }
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        Dd::norm(s, e + f)
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + -o
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        Dd::norm(p, e + (self.hi * o.lo + self.lo * o.hi))
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::from(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Dd::from(q2);
        let q3 = r.hi / o.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        Dd { hi: q1, lo: q2 } + Dd::from(q3)
    }
}

/// `e^x - 1`. Beyond `|x| > 700` the `f64` result is returned.
pub(crate) fn expm1(x: Dd) -> Dd {
    let ax = x.hi.abs();
    if !(ax <= 700.0) {
        return Dd::from(x.hi.exp_m1());
    }
    // halve until |s| ≤ 2^-10, sum the series, then undo with
    // expm1(2s) = expm1(s) (2 + expm1(s))
    let mut halvings = 0;
    let mut s = x;
    while s.hi.abs() > 1.0 / 1024.0 {
        s = s.scale(0.5);
        halvings += 1;
    }
    let mut term = s;
    let mut sum = s;
    for k in 2..=12 {
        term = term * s / Dd::from(k as f64);
        sum = sum + term;
        if term.hi.abs() < 1e-34 * sum.hi.abs() {
            break;
        }
    }
    for _ in 0..halvings {
        sum = sum * (Dd::from(2.0) + sum);
    }
    sum
}

/// `ln(1 + q)` for `q > -1`: one Newton step from the `f64` value.
pub(crate) fn ln1p(q: Dd) -> Dd {
    let y0 = q.hi.ln_1p();
    if !y0.is_finite() {
        return Dd::from(y0);
    }
    // y1 = y0 + (1 + q) e^{-y0} - 1 = y0 + q + expm1(-y0) (1 + q)
    let t = expm1(Dd::from(-y0));
    Dd::from(y0) + (q + t * (Dd::ONE + q))
}

#[cfg(test)]
mod tests {
    use super::*;

    // (x, hi, lo) with hi + lo the 60-digit value rounded twice
    const EXPM1: [(f64, f64, f64); 6] = [
        (1e-05, 1.0000050000166668e-05, -3.111926571619883e-22),
        (-2.2, -0.8891968416376661, -3.4161296254621256e-17),
        (3.7, 39.4473043600674, -1.2179541332469429e-15),
        (-0.3, -0.2591817793182821, -1.805530505953e-18),
        (25.5, 118716009131.16965, 3.7484041480402334e-06),
        (-30.0, -0.9999999999999064, -1.557128749895031e-17),
    ];
    const LN1P: [(f64, f64, f64); 4] = [
        (-0.3, -0.35667494393873234, -2.6895094047056423e-17),
        (1e-07, 9.999999500000033e-08, -5.871247209360176e-24),
        (24.0, 3.2188758248682006, 1.8560163382171803e-16),
        (0.05, 0.04879016416943201, -1.359809418922796e-18),
    ];

    fn err(d: Dd, hi: f64, lo: f64) -> f64 {
        ((d.hi - hi) + (d.lo - lo)).abs() / hi.abs()
    }

    #[test]
    fn expm1_reference_values() {
        for (x, hi, lo) in EXPM1 {
            let e = err(expm1(Dd::from(x)), hi, lo);
            assert!(e < 1e-28, "expm1({x}): {e:e}");
        }
    }

    #[test]
    fn ln1p_reference_values() {
        for (x, hi, lo) in LN1P {
            let e = err(ln1p(Dd::from(x)), hi, lo);
            assert!(e < 1e-28, "ln1p({x}): {e:e}");
        }
    }

    #[test]
    fn arithmetic() {
        let third = Dd::ONE / Dd::from(3.0);
        let back = third * Dd::from(3.0) - Dd::ONE;
        assert!(back.to_f64().abs() < 1e-31);
        assert_eq!(Dd::diff(1.0, 1e-20), Dd { hi: 1.0, lo: -1e-20 });
    }
}
