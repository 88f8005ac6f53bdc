//! Gauss sums for every multiplicative character of F_q.
//!
//! Fix the generator g of F_q^x chosen by [`make_field`](crate::field::make_field).
//! The character lattice is identified with Z/(q-1) by sending m to
//! omega^m, where omega(g^k) = zeta_{q-1}^k. With theta(x) =
//! zeta_p^{Tr(x)} the additive character, the table stores
//!
//! ```text
//!     g(m) = sum over x in F_q^x of omega(x)^m * theta(x)
//!          = sum over k in 0..q-1 of zeta_{q-1}^{m k} * zeta_p^{Tr(g^k)}
//! ```
//!
//! i.e. a length-(q-1) discrete Fourier transform of the additive-character
//! values along the generator orbit. The build is O((q-1)^2) complex
//! multiply-adds, parallelized over rows; at 128-bit precision that is
//! a couple of seconds for q around 1700.
//!
//! Every build is certified: g(0) must equal -1 and |g(m)|^2 must equal q
//! for m != 0, both to within 1e-8 * q. A failed certificate reports
//! insufficient precision rather than returning bad data.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::numeric::{Big, Cpx, Precision, Real};

/// Dense table of Gauss sums plus the roots of unity needed to evaluate
/// character sums without further trigonometry.
#[derive(Debug, Clone)]
pub struct GaussTable<R: Real> {
    pub p: u64,
    pub q: u64,
    pub qx: u64,
    pub prec_bits: u32,
    /// g(m) for m in 0..q-1.
    g: Vec<Cpx<R>>,
    /// zeta_{q-1}^j for j in 0..q-1.
    unit: Vec<Cpx<R>>,
}

impl<R: Real> GaussTable<R> {
    /// Build and certify the full table at the given mantissa size.
    pub fn build(ctx: &FieldContext, prec_bits: u32) -> Result<Self> {
        let qx = ctx.qx as usize;
        let prec = prec_bits;

        // Roots of unity of order q-1 and p, each from its own exact angle
        // (no error accumulation across the table).
        let unit: Vec<Cpx<R>> = (0..qx)
            .map(|j| Cpx::unit(j as i64, ctx.qx, prec))
            .collect();
        let zp: Vec<Cpx<R>> = (0..ctx.p)
            .map(|r| Cpx::unit(r as i64, ctx.p, prec))
            .collect();

        // Additive-character values along the generator orbit.
        let theta: Vec<Cpx<R>> = (0..qx)
            .map(|k| zp[ctx.trace(ctx.gen_pow(k as i64)) as usize].clone())
            .collect();

        // DFT, parallel over output rows.
        let qx64 = ctx.qx;
        let g: Vec<Cpx<R>> = (0..qx)
            .into_par_iter()
            .map(|m| {
                let mut acc = Cpx::<R>::zero(prec);
                let m = m as u64;
                for (k, th) in theta.iter().enumerate() {
                    let idx = (m * k as u64 % qx64) as usize;
                    acc = acc.add(&unit[idx].mul(th));
                }
                acc
            })
            .collect();

        let table = GaussTable {
            p: ctx.p,
            q: ctx.q,
            qx: ctx.qx,
            prec_bits: prec,
            g,
            unit,
        };
        table.certify()?;
        Ok(table)
    }

    /// Constructor certificate: g(0) = -1 and |g(m)|^2 = q for m != 0.
    fn certify(&self) -> Result<()> {
        let tol = 1e-8 * self.q as f64;
        let (re0, im0) = self.g[0].to_f64_pair();
        if ((re0 + 1.0).powi(2) + im0 * im0).sqrt() > tol {
            return Err(Error::PrecisionError {
                bits: self.prec_bits,
                detail: format!("g(0) = ({re0}, {im0}) differs from -1 beyond {tol}"),
            });
        }
        for m in 1..self.qx as usize {
            let dev = (self.g[m].abs2_f64() - self.q as f64).abs();
            if dev > tol {
                return Err(Error::PrecisionError {
                    bits: self.prec_bits,
                    detail: format!("| |g({m})|^2 - q | = {dev} exceeds {tol}"),
                });
            }
        }
        Ok(())
    }

    /// g(m), with m reduced mod q-1.
    #[inline]
    pub fn g(&self, m: i64) -> &Cpx<R> {
        &self.g[m.rem_euclid(self.qx as i64) as usize]
    }

    /// zeta_{q-1}^k, with k reduced mod q-1.
    #[inline]
    pub fn unit_pow(&self, k: i64) -> &Cpx<R> {
        &self.unit[k.rem_euclid(self.qx as i64) as usize]
    }

    /// omega(x)^m for a nonzero packed element x.
    #[inline]
    pub fn omega_pow(&self, ctx: &FieldContext, x: u64, m: i64) -> &Cpx<R> {
        let k = ctx.dlog(x).expect("omega of zero") as i64;
        self.unit_pow((k % self.qx as i64) * (m % self.qx as i64))
    }

    /// Residual of the Hasse-Davenport product relation: for n | q-1,
    ///
    /// ```text
    ///   g(n m) = -omega(n)^{n m} * prod_{j=0}^{n-1} g(m + j (q-1)/n) / g(j (q-1)/n)
    /// ```
    ///
    /// Returns |lhs - rhs|; a correct table keeps this at rounding level
    /// (below 1e-8 * q^{n/2} in practice, the size of the terms involved).
    pub fn hasse_davenport_residual(&self, ctx: &FieldContext, n: u64, m: i64) -> Result<f64> {
        if n == 0 || self.qx % n != 0 {
            return Err(Error::DivisibilityError { n, qx: self.qx });
        }
        let step = (self.qx / n) as i64;
        let lhs = self.g(n as i64 * m).clone();
        let mut prod = self.omega_pow(ctx, ctx.embed_int(n as i64), n as i64 * m).neg();
        for j in 0..n as i64 {
            prod = prod.mul(self.g(m + j * step)).div(self.g(j * step));
        }
        let diff = lhs.sub(&prod);
        Ok(diff.abs2_f64().sqrt())
    }

    /// Residual of the inverse Fourier identity
    /// `theta(x) = (1/(q-1)) * sum_m g(m) omega(x)^{-m}` at a nonzero x.
    pub fn theta_reconstruction_residual(&self, ctx: &FieldContext, x: u64) -> f64 {
        assert!(x != 0 && x < ctx.q, "x must be a nonzero field element");
        let k = ctx.dlog(x).unwrap() as i64;
        let prec = self.prec_bits;
        let mut acc = Cpx::<R>::zero(prec);
        for m in 0..self.qx as i64 {
            acc = acc.add(&self.g(m).mul(self.unit_pow(-(k * (m % self.qx as i64)))));
        }
        let scale = R::one(prec).div(&R::from_f64(self.qx as f64, prec));
        let recon = acc.scale(&scale);
        let theta = Cpx::<R>::unit(ctx.trace(x) as i64, ctx.p, prec);
        recon.sub(&theta).abs2_f64().sqrt()
    }
}

/// Precision-dispatched Gauss table: one variant per supported backend.
#[derive(Debug, Clone)]
pub enum GaussSums {
    F64(GaussTable<f64>),
    Big(GaussTable<Big>),
}

/// Build the Gauss-sum table for a field at the requested precision.
pub fn gauss_table(ctx: &FieldContext, precision: Precision) -> Result<GaussSums> {
    match precision {
        Precision::Bits53 => Ok(GaussSums::F64(GaussTable::build(ctx, 53)?)),
        p => Ok(GaussSums::Big(GaussTable::build(ctx, p.bits())?)),
    }
}

impl GaussSums {
    pub fn precision(&self) -> Precision {
        match self {
            GaussSums::F64(_) => Precision::Bits53,
            GaussSums::Big(t) if t.prec_bits <= 128 => Precision::Bits128,
            GaussSums::Big(_) => Precision::Bits256,
        }
    }

    pub fn qx(&self) -> u64 {
        match self {
            GaussSums::F64(t) => t.qx,
            GaussSums::Big(t) => t.qx,
        }
    }

    /// g(m) collapsed to double precision (for reporting).
    pub fn g_f64(&self, m: i64) -> (f64, f64) {
        match self {
            GaussSums::F64(t) => t.g(m).to_f64_pair(),
            GaussSums::Big(t) => t.g(m).to_f64_pair(),
        }
    }

    /// See [`GaussTable::hasse_davenport_residual`].
    pub fn hasse_davenport_residual(&self, ctx: &FieldContext, n: u64, m: i64) -> Result<f64> {
        match self {
            GaussSums::F64(t) => t.hasse_davenport_residual(ctx, n, m),
            GaussSums::Big(t) => t.hasse_davenport_residual(ctx, n, m),
        }
    }

    /// See [`GaussTable::theta_reconstruction_residual`].
    pub fn theta_reconstruction_residual(&self, ctx: &FieldContext, x: u64) -> f64 {
        match self {
            GaussSums::F64(t) => t.theta_reconstruction_residual(ctx, x),
            GaussSums::Big(t) => t.theta_reconstruction_residual(ctx, x),
        }
    }
}
