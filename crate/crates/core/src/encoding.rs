//! Binary codes mapping bit strings to integers and grid points, and the
//! geometric check of one-point crossover on coordinate-aligned cuts.
//!
//! All fields are read most significant bit first and laid out contiguously.

use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;
use crate::variation::one_point_cross_at;

/// Unsigned value of a most-significant-first bit field.
pub fn field_value(bits: &[bool]) -> u64 {
    bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
}

// Smallest l with 2^l >= m.
fn ceil_log2(m: u64) -> usize {
    if m <= 1 {
        0
    } else {
        64 - (m - 1).leading_zeros() as usize
    }
}

/// Integers `a..=b` coded on `l = max(1, ⌈log2(b − a)⌉)` bits as `a + value`.
///
/// When `b − a` is not of the form `2^l − 1` the code either cannot reach `b`
/// or produces values above `b`; such values are flagged as out of range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntRangeCode {
    pub a: i64,
    pub b: i64,
    pub l: usize,
}

impl IntRangeCode {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if b < a {
            return Err(invalid(format!("empty range {a}..={b}")));
        }
        let l = ceil_log2((b - a) as u64).max(1);
        if l > 62 {
            return Err(Error::TooLarge(format!("{l} bits")));
        }
        Ok(IntRangeCode { a, b, l })
    }

    /// Decoded integer and whether it lies in `a..=b`.
    pub fn decode(&self, bits: &[bool]) -> Result<(i64, bool)> {
        if bits.len() != self.l {
            return Err(Error::LengthMismatch { expected: self.l, found: bits.len() });
        }
        let x = self.a + field_value(bits) as i64;
        Ok((x, x <= self.b))
    }
}

/// Grid of `2^k` points per coordinate over the box `[a_i, b_i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxGridCode<S> {
    pub k: usize,
    pub bounds: Vec<(S, S)>,
}

impl<S: Scalar> BoxGridCode<S> {
    pub fn new(k: usize, bounds: Vec<(S, S)>) -> Result<Self> {
        if k == 0 || k > 52 {
            return Err(invalid(format!("bits per coordinate k = {k} outside 1..=52")));
        }
        if bounds.is_empty() {
            return Err(invalid("box needs at least one coordinate"));
        }
        if bounds.iter().any(|(a, b)| !(a <= b)) {
            return Err(invalid("each bound must satisfy a <= b"));
        }
        Ok(BoxGridCode { k, bounds })
    }

    pub fn n(&self) -> usize {
        self.bounds.len()
    }

    pub fn len(&self) -> usize {
        self.k * self.n()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `x_i = a_i + d_i / (2^k − 1) · v_i` where `v_i` is field `i`. The
    /// extreme codes return the bounds exactly.
    pub fn decode(&self, bits: &[bool]) -> Result<Vec<S>> {
        if bits.len() != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), found: bits.len() });
        }
        let top = (1u64 << self.k) - 1;
        Ok(bits
            .chunks(self.k)
            .zip(&self.bounds)
            .map(|(field, &(a, b))| {
                let v = field_value(field);
                if v == 0 {
                    a
                } else if v == top {
                    b
                } else {
                    a + (b - a) / S::lit(top as f64) * S::lit(v as f64)
                }
            })
            .collect())
    }
}

/// Consecutive fields of widths `k_j = ⌈log2(d_j + 1)⌉` for integer
/// coordinates `0..=d_j`; a bound of 0 takes no bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlpCode {
    pub bounds: Vec<u64>,
    pub widths: Vec<usize>,
}

impl IlpCode {
    pub fn new(bounds: Vec<u64>) -> Result<Self> {
        let widths: Vec<usize> = bounds.iter().map(|&d| ceil_log2(d.saturating_add(1))).collect();
        if widths.iter().any(|&k| k > 62) {
            return Err(Error::TooLarge("coordinate bound needs more than 62 bits".into()));
        }
        Ok(IlpCode { bounds, widths })
    }

    pub fn len(&self) -> usize {
        self.widths.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn decode(&self, bits: &[bool]) -> Result<Vec<u64>> {
        if bits.len() != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), found: bits.len() });
        }
        let mut start = 0;
        Ok(self
            .widths
            .iter()
            .map(|&k| {
                let v = field_value(&bits[start..start + k]);
                start += k;
                v
            })
            .collect())
    }
}

/// Outcome of one coordinate-aligned crossover on a grid code.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationReport {
    /// `(x(ξ') + x(η')) / 2` equals `(x(ξ) + x(η)) / 2` bit for bit.
    pub midpoint_fixed: bool,
    pub distance_preserved: bool,
    pub radius_preserved: bool,
    /// Largest relative deviation among the distance comparisons.
    pub max_relative_error: f64,
}

impl RotationReport {
    pub fn passed(&self) -> bool {
        self.midpoint_fixed && self.distance_preserved && self.radius_preserved
    }
}

fn distance<S: Scalar>(x: &[S], y: &[S]) -> f64 {
    x.iter().zip(y).map(|(&a, &b)| (a - b).as_f64().powi(2)).sum::<f64>().sqrt()
}

fn relative_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Crosses `x` and `y` after the first `chi` bits, where `chi` must be a
/// multiple of `k` strictly inside the string, and compares the children's
/// midpoint, mutual distance and distances to the midpoint with the parents'.
pub fn check_rotation_property<S: Scalar>(
    code: &BoxGridCode<S>,
    x: &[bool],
    y: &[bool],
    chi: usize,
) -> Result<RotationReport> {
    if chi == 0 || chi >= code.len() || !chi.is_multiple_of(code.k) {
        return Err(invalid(format!("cut {chi} is not aligned with a coordinate boundary")));
    }
    let (cx, cy) = one_point_cross_at(x, y, chi)?;
    let (px, py) = (code.decode(x)?, code.decode(y)?);
    let (qx, qy) = (code.decode(&cx)?, code.decode(&cy)?);
    let two = S::lit(2.0);
    let mid: Vec<S> = px.iter().zip(&py).map(|(&a, &b)| (a + b) / two).collect();
    let child_mid: Vec<S> = qx.iter().zip(&qy).map(|(&a, &b)| (a + b) / two).collect();
    let midpoint_fixed = mid == child_mid;
    let tol = 1e-9f64.max(64.0 * S::epsilon().as_f64());
    let d = relative_gap(distance(&px, &py), distance(&qx, &qy));
    let r = relative_gap(distance(&px, &mid), distance(&qx, &mid)).max(relative_gap(distance(&py, &mid), distance(&qy, &mid)));
    Ok(RotationReport {
        midpoint_fixed,
        distance_preserved: d <= tol,
        radius_preserved: r <= tol,
        max_relative_error: d.max(r),
    })
}
