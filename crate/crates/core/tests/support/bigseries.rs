//! Extended-precision reference values for integer-order Bessel functions.
//!
//! Everything here is evaluated from the ascending power series in binary
//! fixed point (`PREC` fractional bits) on top of `num-bigint`. The series
//! cancellation at x = 500 costs roughly 720 bits, which the fixed-point
//! format absorbs, so the results are good to far beyond f64 precision.
//! None of this shares code with the library implementation.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

const PREC: u64 = 1400;

/// Euler–Mascheroni constant, 60 digits.
const EULER_GAMMA_DIGITS: &str = "577215664901532860606512090082402431042159335939923598805767";

#[derive(Clone, Debug)]
pub struct Fixed(BigInt);

impl Fixed {
    pub fn zero() -> Self {
        Fixed(BigInt::zero())
    }

    pub fn from_int(v: i64) -> Self {
        Fixed(BigInt::from(v) << PREC)
    }

    /// Exact conversion of a finite f64.
    pub fn from_f64(x: f64) -> Self {
        let (mant, exp) = decompose(x);
        let shift = PREC as i64 + exp;
        if shift >= 0 {
            Fixed(mant << (shift as u64))
        } else {
            Fixed(mant >> ((-shift) as u64))
        }
    }

    pub fn ratio(num: &BigInt, den: &BigInt) -> Self {
        Fixed((num << PREC) / den)
    }

    pub fn add(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 + &o.0)
    }

    pub fn sub(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 - &o.0)
    }

    pub fn neg(&self) -> Fixed {
        Fixed(-&self.0)
    }

    pub fn mul(&self, o: &Fixed) -> Fixed {
        Fixed((&self.0 * &o.0) >> PREC)
    }

    pub fn div(&self, o: &Fixed) -> Fixed {
        Fixed((&self.0 << PREC) / &o.0)
    }

    pub fn mul_int(&self, k: i64) -> Fixed {
        Fixed(&self.0 * k)
    }

    pub fn div_int(&self, k: i64) -> Fixed {
        Fixed(&self.0 / k)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        if self.0.is_zero() {
            return 0.0;
        }
        let neg = self.0.sign() == Sign::Minus;
        let mag = self.0.abs();
        let bits = mag.bits() as i64;
        let shift = (bits - 64).max(0);
        let top = (&mag >> (shift as u64)).to_u64().unwrap() as f64;
        let mut value = top;
        let mut e = shift - PREC as i64;
        while e > 0 {
            let step = e.min(512);
            value *= 2f64.powi(step as i32);
            e -= step;
        }
        while e < 0 {
            let step = (-e).min(512);
            value /= 2f64.powi(step as i32);
            e += step;
        }
        if neg {
            -value
        } else {
            value
        }
    }
}

/// Splits a finite f64 into an integer mantissa and binary exponent.
fn decompose(x: f64) -> (BigInt, i64) {
    assert!(x.is_finite());
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
    let exponent = ((bits >> 52) & 0x7ff) as i64;
    let mantissa = if exponent == 0 {
        (bits & 0xfffffffffffff) << 1
    } else {
        (bits & 0xfffffffffffff) | 0x10000000000000
    };
    (BigInt::from(mantissa) * sign, exponent - 1075)
}

fn atanh_inv_series(u: &Fixed) -> Fixed {
    // atanh(u) = sum u^(2i+1)/(2i+1)
    let u2 = u.mul(u);
    let mut power = u.clone();
    let mut sum = Fixed::zero();
    let mut i = 0i64;
    while !power.is_zero() {
        sum = sum.add(&power.div_int(2 * i + 1));
        power = power.mul(&u2);
        i += 1;
    }
    sum
}

fn atan_inv(n: i64) -> Fixed {
    // atan(1/n) = sum (-1)^i / ((2i+1) n^(2i+1))
    let mut power = Fixed::from_int(1).div_int(n);
    let n2 = n * n;
    let mut sum = Fixed::zero();
    let mut i = 0i64;
    while !power.is_zero() {
        let term = power.div_int(2 * i + 1);
        sum = if i % 2 == 0 { sum.add(&term) } else { sum.sub(&term) };
        power = power.div_int(n2);
        i += 1;
    }
    sum
}

pub fn pi() -> Fixed {
    atan_inv(5).mul_int(16).sub(&atan_inv(239).mul_int(4))
}

fn ln2() -> Fixed {
    let third = Fixed::from_int(1).div_int(3);
    atanh_inv_series(&third).mul_int(2)
}

/// Natural log of a positive finite f64, evaluated exactly on its binary value.
pub fn ln(x: f64) -> Fixed {
    assert!(x > 0.0);
    let (mant, exp) = decompose(x);
    let j = mant.bits() as i64 - 1;
    let pow = BigInt::one() << (j as u64);
    let u = Fixed::ratio(&(&mant - &pow), &(&mant + &pow));
    let ln_y = atanh_inv_series(&u).mul_int(2);
    ln_y.add(&ln2().mul_int(j + exp))
}

pub fn euler_gamma() -> Fixed {
    let digits: BigInt = EULER_GAMMA_DIGITS.parse().unwrap();
    let scale = num_traits::pow(BigInt::from(10), EULER_GAMMA_DIGITS.len());
    Fixed::ratio(&digits, &scale)
}

/// Leading factor (x/2)^n / n!.
fn leading(half: &Fixed, n: u32) -> Fixed {
    let mut t = Fixed::from_int(1);
    for i in 1..=n as i64 {
        t = t.mul(half).div_int(i);
    }
    t
}

fn factorial(n: u32) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, i| acc * i)
}

/// J_n(x) from its ascending series.
pub fn bessel_j_fixed(n: u32, x: f64) -> Fixed {
    let half = Fixed::from_f64(x / 2.0);
    let q = half.mul(&half);
    let mut term = leading(&half, n);
    let mut sum = term.clone();
    let mut k = 1i64;
    let peak = (x / 2.0) as i64 + 2;
    loop {
        term = term.mul(&q).div_int(k * (k + n as i64)).neg();
        sum = sum.add(&term);
        if term.is_zero() && k > peak {
            break;
        }
        k += 1;
    }
    sum
}

/// Y_n(x) from the logarithmic ascending series:
/// Y_n = (2/pi)(ln(x/2)+gamma) J_n - (1/pi) sum_{k<n} (n-k-1)!/k! (x/2)^(2k-n)
///       - (1/pi) sum_k (H_k + H_{n+k}) (-x^2/4)^k (x/2)^n / (k!(n+k)!)
pub fn bessel_y_fixed(n: u32, x: f64) -> Fixed {
    let pi = pi();
    let half = Fixed::from_f64(x / 2.0);
    let q = half.mul(&half);
    let jn = bessel_j_fixed(n, x);

    let log_part = ln(x / 2.0).add(&euler_gamma()).mul(&jn).mul_int(2).div(&pi);

    let mut finite = Fixed::zero();
    if n > 0 {
        let mut half_pow_n = Fixed::from_int(1);
        for _ in 0..n {
            half_pow_n = half_pow_n.mul(&half);
        }
        let mut term = Fixed(factorial(n - 1) << PREC).div(&half_pow_n);
        finite = term.clone();
        for k in 1..n as i64 {
            term = term.mul(&q).div_int(k * (n as i64 - k));
            finite = finite.add(&term);
        }
    }

    let mut term = leading(&half, n);
    let mut h_k = Fixed::zero();
    let mut h_nk = Fixed::zero();
    for i in 1..=n as i64 {
        h_nk = h_nk.add(&Fixed::from_int(1).div_int(i));
    }
    let mut series = term.mul(&h_k.add(&h_nk));
    let mut k = 1i64;
    let peak = (x / 2.0) as i64 + 2;
    loop {
        term = term.mul(&q).div_int(k * (k + n as i64)).neg();
        h_k = h_k.add(&Fixed::from_int(1).div_int(k));
        h_nk = h_nk.add(&Fixed::from_int(1).div_int(k + n as i64));
        series = series.add(&term.mul(&h_k.add(&h_nk)));
        if term.is_zero() && k > peak {
            break;
        }
        k += 1;
    }

    log_part.sub(&finite.add(&series).div(&pi))
}

pub fn bessel_j(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    bessel_j_fixed(n, x).to_f64()
}

pub fn bessel_y(n: u32, x: f64) -> f64 {
    bessel_y_fixed(n, x).to_f64()
}

/// Wronskian defect J_{n+1}Y_n - J_nY_{n+1} - 2/(pi x), evaluated in fixed point.
pub fn wronskian_defect(n: u32, x: f64) -> f64 {
    let w = bessel_j_fixed(n + 1, x)
        .mul(&bessel_y_fixed(n, x))
        .sub(&bessel_j_fixed(n, x).mul(&bessel_y_fixed(n + 1, x)));
    let target = Fixed::from_int(2).div(&pi().mul(&Fixed::from_f64(x)));
    w.sub(&target).to_f64()
}
