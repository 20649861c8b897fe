use std::ops::{Deref, Index};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex vector with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector(Vec<Complex64>);

impl ComplexVector {
    pub fn new(data: Vec<Complex64>) -> Result<Self> {
        if data.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite("vector entries"));
        }
        Ok(Self(data))
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); len])
    }

    /// Real data embedded with zero imaginary part.
    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub(crate) fn from_vec_unchecked(data: Vec<Complex64>) -> Self {
        Self(data)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.0
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        norm2(&self.0)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn conj(&self) -> Self {
        Self(self.0.iter().map(|z| z.conj()).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self(self.0.iter().map(|z| z * s).collect())
    }

    /// Unconjugated product `Σ aᵢ bᵢ`.
    pub fn dot(&self, other: &Self) -> Result<Complex64> {
        if self.len() != other.len() {
            return Err(mismatch(self.len(), other.len()));
        }
        Ok(dot(&self.0, &other.0))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.len() != other.len() {
            return Err(mismatch(self.len(), other.len()));
        }
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| f(*a, *b)).collect()))
    }
}

fn mismatch(a: usize, b: usize) -> Error {
    Error::DimensionMismatch(format!("vector lengths {a} and {b}"))
}

impl Deref for ComplexVector {
    type Target = [Complex64];
    fn deref(&self) -> &[Complex64] {
        &self.0
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

/// Above this length dot products switch to compensated summation.
pub(crate) const COMPENSATE_FROM: usize = 4096;

/// `Σ aᵢ bᵢ` without conjugation.
pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    if a.len() >= COMPENSATE_FROM {
        return dot_compensated(a, b, false);
    }
    let (mut re, mut im) = (0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        re += x.re * y.re - x.im * y.im;
        im += x.re * y.im + x.im * y.re;
    }
    Complex64::new(re, im)
}

/// `Σ aᵢ conj(bᵢ)`.
pub(crate) fn dot_conj(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    if a.len() >= COMPENSATE_FROM {
        return dot_compensated(a, b, true);
    }
    let (mut re, mut im) = (0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        re += x.re * y.re + x.im * y.im;
        im += x.im * y.re - x.re * y.im;
    }
    Complex64::new(re, im)
}

#[derive(Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

fn dot_compensated(a: &[Complex64], b: &[Complex64], conjugate: bool) -> Complex64 {
    let (mut re, mut im) = (Neumaier::default(), Neumaier::default());
    for (x, y) in a.iter().zip(b) {
        let y = if conjugate { y.conj() } else { *y };
        re.add(x.re * y.re);
        re.add(-x.im * y.im);
        im.add(x.re * y.im);
        im.add(x.im * y.re);
    }
    Complex64::new(re.value(), im.value())
}

pub(crate) fn norm2(v: &[Complex64]) -> f64 {
    // scaled to avoid overflow in the squares
    let scale = v.iter().map(|z| z.re.abs().max(z.im.abs())).fold(0.0, f64::max);
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    let s: f64 = v
        .iter()
        .map(|z| {
            let (r, i) = (z.re / scale, z.im / scale);
            r * r + i * i
        })
        .sum();
    scale * s.sqrt()
}
