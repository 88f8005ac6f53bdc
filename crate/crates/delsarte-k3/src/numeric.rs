//! Floating-point backends for character-sum arithmetic.
//!
//! Character sums over F_q mix roots of unity of order p and q-1; the
//! final answers are small integers (or integers divided by a power of q),
//! so every computation ends with a certification step comparing a float
//! against an exact target. Two backends make that trade-off explicit:
//!
//! * **53 bits** — native `f64`. Fast, and sufficient while the number of
//!   accumulated terms stays in the low thousands (fields up to q ≈ 500).
//! * **128/256 bits** — [`astro_float::BigFloat`]. Pure-Rust software
//!   floats for larger fields, where q-1 squared terms of size √q would
//!   otherwise eat most of a 53-bit mantissa.
//!
//! Everything downstream is generic over the [`Real`] trait so the same
//! summation kernels run on either backend.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use std::cell::RefCell;

use crate::error::{Error, Result};

/// Rounding used for all big-float operations.
const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    /// Per-thread cache of astro-float constants (pi). `Consts` memoizes
    /// internally, so reusing one per thread keeps trig calls cheap.
    static CONSTS: RefCell<Consts> =
        RefCell::new(Consts::new().expect("constants cache allocation"));
}

/// Working precision for a computation, restricted to the supported set.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Precision {
    /// Native `f64`.
    #[serde(rename = "53")]
    Bits53,
    /// 128-bit software float.
    #[serde(rename = "128")]
    Bits128,
    /// 256-bit software float.
    #[serde(rename = "256")]
    Bits256,
}

impl Precision {
    /// Mantissa size in bits.
    pub fn bits(self) -> u32 {
        match self {
            Precision::Bits53 => 53,
            Precision::Bits128 => 128,
            Precision::Bits256 => 256,
        }
    }

    /// Parse a bit count, rejecting anything outside the supported set.
    pub fn from_bits(bits: u32) -> Result<Self> {
        match bits {
            53 => Ok(Precision::Bits53),
            128 => Ok(Precision::Bits128),
            256 => Ok(Precision::Bits256),
            other => Err(Error::InvalidArgument(format!(
                "unsupported precision {other} bits (choose 53, 128 or 256)"
            ))),
        }
    }

    /// Default policy: `f64` for small fields, 128 bits beyond q = 500.
    ///
    /// The cut-off is conservative: at q = 1681 a full hypergeometric sum
    /// loses ~10 decimal digits to cancellation, which pushes `f64` past a
    /// 1e-4 certification gate, while q < 500 stays under 1e-9.
    pub fn for_field(q: u64) -> Self {
        if q < 500 {
            Precision::Bits53
        } else {
            Precision::Bits128
        }
    }
}

/// Real scalar usable in summation kernels.
///
/// Operations take the output precision from the inputs (each value knows
/// its own mantissa size), so kernels never thread a precision parameter.
pub trait Real: Clone + Send + Sync + std::fmt::Debug + 'static {
    fn from_f64(v: f64, prec: u32) -> Self;
    fn zero(prec: u32) -> Self {
        Self::from_f64(0.0, prec)
    }
    fn one(prec: u32) -> Self {
        Self::from_f64(1.0, prec)
    }
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn to_f64(&self) -> f64;
    /// `(cos, sin)` of the angle `2·pi·num/den`, evaluated at `prec` bits.
    fn cos_sin_tau(num: i64, den: u64, prec: u32) -> (Self, Self);
}

impl Real for f64 {
    fn from_f64(v: f64, _prec: u32) -> Self {
        v
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn cos_sin_tau(num: i64, den: u64, _prec: u32) -> (Self, Self) {
        let angle = std::f64::consts::TAU * (num.rem_euclid(den as i64) as f64) / (den as f64);
        (angle.cos(), angle.sin())
    }
}

/// Software float wrapper. The mantissa size travels with the value.
#[derive(Clone, Debug)]
pub struct Big(BigFloat);

impl Big {
    fn prec(&self) -> usize {
        self.0.mantissa_max_bit_len().unwrap_or(128)
    }
    fn join(&self, o: &Big) -> usize {
        self.prec().max(o.prec())
    }
}

impl Real for Big {
    fn from_f64(v: f64, prec: u32) -> Self {
        Big(BigFloat::from_f64(v, prec as usize))
    }
    fn add(&self, o: &Self) -> Self {
        let p = self.join(o);
        Big(self.0.add(&o.0, p, RM))
    }
    fn sub(&self, o: &Self) -> Self {
        let p = self.join(o);
        Big(self.0.sub(&o.0, p, RM))
    }
    fn mul(&self, o: &Self) -> Self {
        let p = self.join(o);
        Big(self.0.mul(&o.0, p, RM))
    }
    fn div(&self, o: &Self) -> Self {
        let p = self.join(o);
        Big(self.0.div(&o.0, p, RM))
    }
    fn neg(&self) -> Self {
        Big(self.0.neg())
    }
    fn to_f64(&self) -> f64 {
        if self.0.is_zero() {
            return 0.0;
        }
        if self.0.is_nan() {
            return f64::NAN;
        }
        if self.0.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.0.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        // Reassemble from raw parts: mantissa words are little-endian and
        // represent a fraction in [1/2, 1) scaled by 2^e, where n is the
        // mantissa length in bits.
        let (m, n, s, e, _inexact) = self.0.as_raw_parts().expect("finite value has raw parts");
        let mut v = *m.last().expect("nonzero mantissa") as f64;
        if m.len() > 1 {
            v += (m[m.len() - 2] as f64) / 2f64.powi(64);
        }
        let shift = (e as i64) - (n as i64) + ((m.len() - 1) as i64) * 64;
        let mag = if shift.abs() > 2000 {
            if shift > 0 {
                f64::INFINITY
            } else {
                0.0
            }
        } else {
            v * 2f64.powi(shift as i32)
        };
        if s == Sign::Neg {
            -mag
        } else {
            mag
        }
    }
    fn cos_sin_tau(num: i64, den: u64, prec: u32) -> (Self, Self) {
        let p = prec as usize + 32; // guard bits for the reduction below
        let num = num.rem_euclid(den as i64) as u64;
        CONSTS.with(|cc| {
            let cc = &mut *cc.borrow_mut();
            let pi = cc.pi(p, RM);
            let two_pi = pi.mul(&BigFloat::from_u64(2, p), p, RM);
            let frac = BigFloat::from_u64(num, p).div(&BigFloat::from_u64(den, p), p, RM);
            let angle = two_pi.mul(&frac, p, RM);
            let prec = prec as usize;
            (
                Big(angle.cos(prec, RM, cc)),
                Big(angle.sin(prec, RM, cc)),
            )
        })
    }
}

/// Complex number over a [`Real`] backend.
#[derive(Clone, Debug)]
pub struct Cpx<R: Real> {
    pub re: R,
    pub im: R,
}

impl<R: Real> Cpx<R> {
    pub fn new(re: R, im: R) -> Self {
        Cpx { re, im }
    }
    pub fn zero(prec: u32) -> Self {
        Cpx::new(R::zero(prec), R::zero(prec))
    }
    pub fn one(prec: u32) -> Self {
        Cpx::new(R::one(prec), R::zero(prec))
    }
    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Cpx::new(R::from_f64(re, prec), R::from_f64(im, prec))
    }
    /// The root of unity `exp(2·pi·i·num/den)`.
    pub fn unit(num: i64, den: u64, prec: u32) -> Self {
        let (c, s) = R::cos_sin_tau(num, den, prec);
        Cpx::new(c, s)
    }
    pub fn add(&self, o: &Self) -> Self {
        Cpx::new(self.re.add(&o.re), self.im.add(&o.im))
    }
    pub fn sub(&self, o: &Self) -> Self {
        Cpx::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }
    pub fn mul(&self, o: &Self) -> Self {
        Cpx::new(
            self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        )
    }
    pub fn div(&self, o: &Self) -> Self {
        let d = o.re.mul(&o.re).add(&o.im.mul(&o.im));
        Cpx::new(
            self.re.mul(&o.re).add(&self.im.mul(&o.im)).div(&d),
            self.im.mul(&o.re).sub(&self.re.mul(&o.im)).div(&d),
        )
    }
    pub fn conj(&self) -> Self {
        Cpx::new(self.re.clone(), self.im.neg())
    }
    pub fn neg(&self) -> Self {
        Cpx::new(self.re.neg(), self.im.neg())
    }
    pub fn scale(&self, s: &R) -> Self {
        Cpx::new(self.re.mul(s), self.im.mul(s))
    }
    /// Squared modulus, collapsed to `f64` (used only in certifications).
    pub fn abs2_f64(&self) -> f64 {
        let r = self.re.to_f64();
        let i = self.im.to_f64();
        r * r + i * i
    }
    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

/// Plain complex double, used at API boundaries where a caller should not
/// need to care about the working-precision backend.
#[derive(Copy, Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct C64 {
    pub re: f64,
    pub im: f64,
}

impl C64 {
    pub fn new(re: f64, im: f64) -> Self {
        C64 { re, im }
    }
    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// Certify that a complex value is (numerically) a nonnegative integer
/// and return it; used wherever a character-sum assembly must produce an
/// exact point count.
pub fn certify_nonneg_integer(
    (re, im): (f64, f64),
    tol: f64,
    what: &str,
) -> crate::error::Result<u64> {
    let rounded = re.round();
    if im.abs() > tol || (re - rounded).abs() > tol || rounded < 0.0 {
        return Err(crate::error::Error::PrecisionError {
            bits: 53,
            detail: format!("{what}: ({re}, {im}) does not certify as a nonnegative integer"),
        });
    }
    Ok(rounded as u64)
}

/// base^e at working precision, for an exact integer base (base < 2^53 is
/// exactly representable, so powers accumulate only rounding from the
/// multiplications themselves). Negative exponents divide.
pub fn real_int_pow<R: Real>(base: u64, e: i64, prec: u32) -> R {
    let b = R::from_f64(base as f64, prec);
    let mut acc = R::one(prec);
    for _ in 0..e.unsigned_abs() {
        acc = acc.mul(&b);
    }
    if e < 0 {
        R::one(prec).div(&acc)
    } else {
        acc
    }
}

/// Integer power by repeated squaring (exponent taken mod nothing; small).
pub fn cpx_powi<R: Real>(base: &Cpx<R>, mut e: u64, prec: u32) -> Cpx<R> {
    let mut acc = Cpx::one(prec);
    let mut b = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&b);
        }
        b = b.mul(&b);
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_to_f64_roundtrip() {
        for &v in &[0.0, 1.0, -1.0, 0.5, 3.141592653589793, -2.25e10, 7.0e-11] {
            let b = Big::from_f64(v, 128);
            assert_eq!(b.to_f64(), v, "roundtrip failed for {v}");
        }
    }

    #[test]
    fn big_arithmetic_matches_f64() {
        let a = Big::from_f64(1.25, 128);
        let b = Big::from_f64(-0.75, 128);
        assert_eq!(a.add(&b).to_f64(), 0.5);
        assert_eq!(a.sub(&b).to_f64(), 2.0);
        assert_eq!(a.mul(&b).to_f64(), -0.9375);
        assert_eq!(a.div(&b).to_f64(), 1.25 / -0.75);
    }

    #[test]
    fn unit_roots_lie_on_circle() {
        for den in [3u64, 5, 7, 12, 1680] {
            for num in 0..den.min(20) {
                let z = Cpx::<Big>::unit(num as i64, den, 128);
                assert!((z.abs2_f64() - 1.0).abs() < 1e-14);
                let w = Cpx::<f64>::unit(num as i64, den, 53);
                assert!((z.re.to_f64() - w.re).abs() < 1e-12);
                assert!((z.im.to_f64() - w.im).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn unit_root_order() {
        // A primitive 12th root raised to 12 is 1 at both precisions.
        for prec in [Precision::Bits53, Precision::Bits128, Precision::Bits256] {
            let bits = prec.bits();
            let z = Cpx::<Big>::unit(1, 12, bits.max(64));
            let w = cpx_powi(&z, 12, bits.max(64));
            assert!((w.re.to_f64() - 1.0).abs() < 1e-14);
            assert!(w.im.to_f64().abs() < 1e-14);
        }
    }

    #[test]
    fn precision_policy() {
        assert_eq!(Precision::for_field(121), Precision::Bits53);
        assert_eq!(Precision::for_field(499), Precision::Bits53);
        assert_eq!(Precision::for_field(529), Precision::Bits128);
        assert_eq!(Precision::for_field(1681), Precision::Bits128);
        assert!(Precision::from_bits(64).is_err());
        assert_eq!(Precision::from_bits(256).unwrap(), Precision::Bits256);
    }
}
