//! Integer-order Bessel functions of real argument.
//!
//! Evaluation strategy:
//!
//! * `J_m(x)` comes from the ascending series when it does not cancel
//!   (`x ≤ 2` or `x² ≤ 2(m+1)`), from Hankel's asymptotic expansion for
//!   `m ≤ 1, x ≥ 25`, and otherwise from Miller's backward recurrence
//!   normalised by `J_0 + 2ΣJ_2k = 1`.
//! * `Y_0`, `Y_1` use the asymptotic expansion for `x ≥ 25`. Below that they
//!   come from Neumann series in even/odd `J_n`, accumulated during the same
//!   backward sweep. Higher orders use upward recurrence, which is the
//!   stable direction for `Y`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_2_PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Highest order accepted by the public functions.
pub const MAX_ORDER: u32 = 200;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Arguments at or above this use Hankel's expansion for orders 0 and 1.
const ASYMPTOTIC_MIN_ARG: f64 = 25.0;
const MAX_ASYMPTOTIC_TERMS: usize = 60;

const RESCALE_THRESHOLD: f64 = 1e250;
const RESCALE_FACTOR: f64 = 1e-250;

fn check_order(order: u32) -> Result<()> {
    if order > MAX_ORDER {
        return Err(Error::OrderOutOfRange {
            order,
            max: MAX_ORDER,
        });
    }
    Ok(())
}

/// Bessel function of the first kind `J_order(x)` for `x ≥ 0`.
pub fn bessel_j(order: u32, x: f64) -> Result<f64> {
    check_order(order)?;
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            function: "bessel_j",
            arg: x,
        });
    }
    Ok(j_unchecked(order, x))
}

/// Bessel function of the second kind `Y_order(x)` for `x > 0`.
///
/// Returns [`Error::Overflow`] when the value is not representable, which
/// happens for large orders at small arguments.
pub fn bessel_y(order: u32, x: f64) -> Result<f64> {
    check_order(order)?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            function: "bessel_y",
            arg: x,
        });
    }
    let (y0, y1) = y01(x);
    let y = match order {
        0 => y0,
        1 => y1,
        _ => y_upward(order, x, y0, y1),
    };
    if !y.is_finite() {
        return Err(Error::Overflow {
            function: "bessel_y",
            order,
            arg: x,
        });
    }
    Ok(y)
}

/// Hankel function of the first kind `H^(1)_order(x) = J + iY`.
pub fn hankel1(order: u32, x: f64) -> Result<Complex64> {
    let y = bessel_y(order, x)?;
    let j = bessel_j(order, x)?;
    Ok(Complex64::new(j, y))
}

/// `H^(1)_0(x)` for finite `x > 0`; the caller guarantees the domain.
pub(crate) fn hankel1_0(x: f64) -> Complex64 {
    if x >= ASYMPTOTIC_MIN_ARG {
        let (p, q) = asymptotic_pq(0.0, x);
        let (s, c) = x.sin_cos();
        // chi = x - pi/4
        let (cos_chi, sin_chi) = ((c + s) * FRAC_1_SQRT_2, (s - c) * FRAC_1_SQRT_2);
        let amp = (FRAC_2_PI / x).sqrt();
        Complex64::new(
            amp * (p * cos_chi - q * sin_chi),
            amp * (p * sin_chi + q * cos_chi),
        )
    } else {
        let sweep = MillerSweep::run(x, None);
        Complex64::new(sweep.j0(), sweep.y0(x))
    }
}

fn j_unchecked(order: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if order == 0 { 1.0 } else { 0.0 };
    }
    let m = order as f64;
    if x <= 2.0 || x * x <= 2.0 * (m + 1.0) {
        return j_series(order, x);
    }
    if order <= 1 && x >= ASYMPTOTIC_MIN_ARG {
        return asymptotic_jy(order, x).0;
    }
    MillerSweep::run(x, Some(order)).wanted()
}

/// Ascending series; only called where consecutive terms shrink quickly.
fn j_series(order: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut lead = 1.0;
    for i in 1..=order {
        lead *= half / i as f64;
    }
    if lead == 0.0 {
        return 0.0;
    }
    let q = -half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        term *= q / (k * (k + order as f64));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
        k += 1.0;
    }
    lead * sum
}

/// `(Y_0(x), Y_1(x))`.
fn y01(x: f64) -> (f64, f64) {
    if x >= ASYMPTOTIC_MIN_ARG {
        (asymptotic_jy(0, x).1, asymptotic_jy(1, x).1)
    } else {
        let sweep = MillerSweep::run(x, None);
        (sweep.y0(x), sweep.y1(x))
    }
}

fn y_upward(order: u32, x: f64, y0: f64, y1: f64) -> f64 {
    let (mut prev, mut cur) = (y0, y1);
    for n in 1..order {
        let next = (2.0 * n as f64 / x) * cur - prev;
        prev = cur;
        cur = next;
        if !cur.is_finite() {
            return cur;
        }
    }
    cur
}

/// Hankel's expansion `P(nu, x)`, `Q(nu, x)` summed until the terms stop
/// contributing or begin to grow.
fn asymptotic_pq(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0f64;
    let mut last = f64::INFINITY;
    for k in 1..=MAX_ASYMPTOTIC_TERMS {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        let mag = term.abs();
        if mag > last {
            break;
        }
        last = mag;
        // signs: P = t0 - t2 + t4 ..., Q = t1 - t3 + t5 ...
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        if mag < 1e-17 {
            break;
        }
    }
    (p, q)
}

/// `(J_nu(x), Y_nu(x))` for `nu ∈ {0, 1}` from the large-argument expansion.
fn asymptotic_jy(order: u32, x: f64) -> (f64, f64) {
    let (p, q) = asymptotic_pq(order as f64, x);
    let (s, c) = x.sin_cos();
    // chi = x - (nu/2 + 1/4) pi, expanded so the phase never loses bits of x
    let (cos_chi, sin_chi) = if order == 0 {
        ((c + s) * FRAC_1_SQRT_2, (s - c) * FRAC_1_SQRT_2)
    } else {
        ((s - c) * FRAC_1_SQRT_2, -(s + c) * FRAC_1_SQRT_2)
    };
    let amp = (FRAC_2_PI / x).sqrt();
    (
        amp * (p * cos_chi - q * sin_chi),
        amp * (p * sin_chi + q * cos_chi),
    )
}

/// Backward recurrence from well above `max(order, x)` down to zero.
///
/// Besides the requested order it accumulates the normalisation sum and the
/// two Neumann sums needed for `Y_0` and `Y_1`:
///
/// ```text
/// Y_0 = (2/π)(ln(x/2)+γ) J_0 − (4/π) Σ_{k≥1} (−1)^k J_2k / k
/// Y_1 = −(2/π) J_0/x + (2/π)(ln(x/2)+γ) J_1 + (2/π) s1
/// s1  = −J_1 + Σ_{k≥1} (−1)^(k+1) (1/k + 1/(k+1)) J_(2k+1)
/// ```
struct MillerSweep {
    norm: f64,
    wanted: f64,
    j0: f64,
    j1: f64,
    even_sum: f64,
    odd_sum: f64,
}

impl MillerSweep {
    fn run(x: f64, order: Option<u32>) -> Self {
        let top = (order.unwrap_or(0) as f64).max(x.ceil());
        let mut start = (top + 15.0 + (40.0 * top).sqrt()) as usize;
        start += start % 2;

        let target = order.map(|o| o as usize);
        let mut acc = MillerSweep {
            norm: 0.0,
            wanted: 0.0,
            j0: 0.0,
            j1: 0.0,
            even_sum: 0.0,
            odd_sum: 0.0,
        };
        let mut next = 0.0;
        let mut cur = 1.0;
        let mut n = start;
        loop {
            acc.absorb(n, cur, target);
            if n == 0 {
                break;
            }
            let prev = (2.0 * n as f64 / x) * cur - next;
            next = cur;
            cur = prev;
            n -= 1;
            if cur.abs() > RESCALE_THRESHOLD {
                cur *= RESCALE_FACTOR;
                next *= RESCALE_FACTOR;
                acc.rescale(RESCALE_FACTOR);
            }
        }
        acc
    }

    fn absorb(&mut self, n: usize, value: f64, target: Option<usize>) {
        if Some(n) == target {
            self.wanted = value;
        }
        match n {
            0 => {
                self.j0 = value;
                self.norm += value;
            }
            1 => {
                self.j1 = value;
                self.odd_sum -= value;
            }
            _ if n % 2 == 0 => {
                let k = (n / 2) as f64;
                self.norm += 2.0 * value;
                let sign = if (n / 2) % 2 == 0 { 1.0 } else { -1.0 };
                self.even_sum += sign * value / k;
            }
            _ => {
                let k = ((n - 1) / 2) as f64;
                let sign = if ((n - 1) / 2) % 2 == 0 { -1.0 } else { 1.0 };
                self.odd_sum += sign * (1.0 / k + 1.0 / (k + 1.0)) * value;
            }
        }
    }

    fn rescale(&mut self, f: f64) {
        self.norm *= f;
        self.wanted *= f;
        self.j0 *= f;
        self.j1 *= f;
        self.even_sum *= f;
        self.odd_sum *= f;
    }

    fn wanted(&self) -> f64 {
        self.wanted / self.norm
    }

    fn j0(&self) -> f64 {
        self.j0 / self.norm
    }

    fn y0(&self, x: f64) -> f64 {
        let log_term = (0.5 * x).ln() + EULER_GAMMA;
        FRAC_2_PI * (log_term * self.j0 - 2.0 * self.even_sum) / self.norm
    }

    fn y1(&self, x: f64) -> f64 {
        let log_term = (0.5 * x).ln() + EULER_GAMMA;
        FRAC_2_PI * (log_term * self.j1 - self.j0 / x + self.odd_sum) / self.norm
    }
}

/// Whether `x` lies in the asymptotic regime for orders 0 and 1.
#[cfg(test)]
fn uses_asymptotic(x: f64) -> bool {
    x >= ASYMPTOTIC_MIN_ARG
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn origin_values() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j(17, 0.0).unwrap(), 0.0);
    }

    // Frozen from the extended-precision series oracle in tests/support.
    #[test]
    fn unit_argument_values() {
        assert!(close(bessel_j(0, 1.0).unwrap(), 0.7651976865579666, 1e-14));
        assert!(close(bessel_y(0, 1.0).unwrap(), 0.08825696421567696, 1e-13));
    }

    #[test]
    fn y0_near_origin_is_large_and_finite() {
        let y = bessel_y(0, 1e-9).unwrap();
        assert!(y.is_finite());
        assert!(y < -10.0);
    }

    #[test]
    fn wronskian_at_reference_point() {
        let (m, x) = (3, 7.5);
        let w = bessel_j(m + 1, x).unwrap() * bessel_y(m, x).unwrap()
            - bessel_j(m, x).unwrap() * bessel_y(m + 1, x).unwrap();
        assert!((w - 2.0 / (PI * x)).abs() < 1e-10);
    }

    #[test]
    fn hankel_components() {
        let h = hankel1(0, 1.0).unwrap();
        assert!(close(h.re, 0.76519768656, 1e-10));
        assert!(close(h.im, 0.08825696422, 1e-9));
        assert!(hankel1(0, 0.5).unwrap().im < 0.0);
        for &(m, x) in &[(0, 3.3), (4, 0.7), (12, 40.0), (60, 120.0)] {
            assert_eq!(hankel1(m, x).unwrap().re, bessel_j(m, x).unwrap());
        }
    }

    #[test]
    fn fast_h0_matches_general_path() {
        for &x in &[0.01, 0.9, 3.0, 12.0, 24.999, 25.0, 87.0, 309.0] {
            let a = hankel1_0(x);
            let b = hankel1(0, x).unwrap();
            assert!((a - b).norm() <= 1e-15 * b.norm(), "x={x}");
        }
        assert!(uses_asymptotic(100.0));
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            bessel_j(201, 1.0),
            Err(Error::OrderOutOfRange { .. })
        ));
        assert!(matches!(bessel_j(0, -1.0), Err(Error::Domain { .. })));
        assert!(matches!(bessel_y(0, 0.0), Err(Error::Domain { .. })));
        assert!(matches!(bessel_y(0, -2.0), Err(Error::Domain { .. })));
        assert!(matches!(bessel_y(0, f64::NAN), Err(Error::Domain { .. })));
        assert!(matches!(bessel_y(200, 1e-3), Err(Error::Overflow { .. })));
    }

    #[test]
    fn recurrence_consistency_on_grid() {
        for &x in &[0.5, 1.0, 5.0, 50.0, 200.0, 500.0] {
            for m in 1..60 {
                let lhs = bessel_j(m - 1, x).unwrap() + bessel_j(m + 1, x).unwrap();
                let rhs = 2.0 * m as f64 / x * bessel_j(m, x).unwrap();
                let scale = lhs.abs().max(rhs.abs()).max(1e-300);
                assert!(
                    (lhs - rhs).abs() <= 1e-10 * scale,
                    "m={m} x={x} lhs={lhs} rhs={rhs}"
                );
            }
        }
    }
}
