//! Closed-form point counts for the five chain-type quartic pencils.
//!
//! For C4, C2F2, C3F1, C2L2 and C2C2 the projective point count of the
//! fiber at psi decomposes into a polynomial part (counting the algebraic
//! surface classes, with indicator terms tied to q mod 3, 4 and 8 and
//! quadratic-character twists) plus hypergeometric character sums from
//! [`crate::hyp`] evaluated at an explicit t-value
//!
//! ```text
//!     t = c / psi^dT,   c in { 2^-6 3^-24 5^-5 7^-7,  2^-10 3^-6,
//!                              2^-48 3^-30 7^-7,      2^-4 },
//! ```
//!
//! all inside F_q. Fibers with psi = 0 or t in {0, 1} are singular or
//! degenerate and rejected; so are the family's bad primes, where the
//! t-value constant is not invertible. The result is certified to round
//! to an integer; the exhaustive counter in [`crate::pencil`] reproduces
//! it exactly on every good fiber.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::gauss::GaussSums;
use crate::hyp::{gamma_sum, gamma_triple, hyp_params_from_cyclotomic, hyp_sum};
use crate::numeric::certify_nonneg_integer;
use crate::pencil::PencilSpec;

/// The t-value constant c of a chain family, with t = c * psi^(-dT).
pub fn t_constant(label: &str) -> Result<BigRational> {
    let inv = |f: u64, e: u32| BigRational::from_integer(BigInt::from(f).pow(e)).recip();
    Ok(match label {
        "C4" => inv(2, 6) * inv(3, 24) * inv(5, 5) * inv(7, 7),
        "C2F2" | "C2L2" => inv(2, 10) * inv(3, 6),
        "C3F1" => inv(2, 48) * inv(3, 30) * inv(7, 7),
        "C2C2" => inv(2, 4),
        other => {
            return Err(Error::InvalidArgument(format!(
                "no closed-form count for family {other}"
            )))
        }
    })
}

/// t = c * psi^(-dT) as a field element.
fn t_value(label: &str, d_t: u64, psi: u64, ctx: &FieldContext) -> Result<u64> {
    let c = t_constant(label)?;
    let base = ctx.embed_big_ratio(&c)?;
    Ok(ctx.mul(base, ctx.pow(ctx.inv(psi), d_t)))
}

/// (-1)^(dlog c): the quadratic character of a nonzero field element,
/// computed exactly from the parity of its discrete logarithm.
fn quadratic_sign(c: u64, ctx: &FieldContext) -> i64 {
    let k = ctx.dlog(c).expect("quadratic character of zero");
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Closed-form projective point count of a chain-family fiber.
///
/// Only the five chain labels are supported; the family's bad primes are
/// rejected, as are fibers with psi = 0 or t in {0, 1}.
pub fn closed_count(
    spec: &PencilSpec,
    psi: u64,
    ctx: &FieldContext,
    table: &GaussSums,
) -> Result<u64> {
    if spec.bad_primes.contains(&ctx.p) {
        return Err(Error::BadPrimeForFamily {
            p: ctx.p,
            family: spec.label.to_string(),
        });
    }
    if psi == 0 || psi >= ctx.q {
        return Err(Error::DegenerateFiber {
            family: spec.label.to_string(),
            q: ctx.q,
            psi,
        });
    }
    let t = t_value(spec.label, spec.d_t, psi, ctx)?;
    if t == 0 || t == 1 {
        return Err(Error::DegenerateFiber {
            family: spec.label.to_string(),
            q: ctx.q,
            psi,
        });
    }

    let q = ctx.q as f64;
    let qx = ctx.qx;
    let d3 = qx % 3 == 0;
    let d4 = qx % 4 == 0;

    let (re, im) = match spec.label {
        "C4" => {
            let h = hyp_sum(
                &hyp_params_from_cyclotomic(&[27], &[9, 6, 7, 5])?,
                t,
                ctx,
                table,
            )?;
            let poly = q * q + 2.0 * q + 1.0 + if d3 { 2.0 * q } else { 0.0 };
            (poly + h, 0.0)
        }
        "C3F1" => {
            let h = hyp_sum(
                &hyp_params_from_cyclotomic(&[36], &[12, 8, 7, 9])?,
                t,
                ctx,
                table,
            )?;
            let e8 = if qx % 8 == 0 { 3.0 } else { -1.0 };
            (q * q + q + 1.0 + e8 * q + h, 0.0)
        }
        "C2F2" => {
            let h0 = hyp_sum(&hyp_params_from_cyclotomic(&[12], &[4, 2, 3, 3])?, t, ctx, table)?;
            let h1 = hyp_sum(&hyp_params_from_cyclotomic(&[2, 12], &[4, 4, 6])?, t, ctx, table)?;
            if !d4 {
                (q * q + 1.0 + h0 - q * h1, 0.0)
            } else {
                // q = 1 mod 4: two conjugate quartic-twisted sums. The
                // signed gamma^gamma of the triple already carries the
                // twist sign, so these run at the same t as the plain sums.
                let sgn = if (qx / 4) % 2 == 0 { 1.0 } else { -1.0 };
                let gam = [4i64, 2, 3, 3, -12, 1, -1];
                let f2 = gamma_sum(
                    &gamma_triple(&gam, &[0, -1, 0, 1, 0, 0, 0], 4)?,
                    t,
                    ctx,
                    table,
                )?;
                let f3 = gamma_sum(
                    &gamma_triple(&gam, &[0, 1, 0, -1, 0, 0, 0], 4)?,
                    t,
                    ctx,
                    table,
                )?;
                (
                    q * q + 2.0 * (1.0 + sgn) * q + 1.0
                        + h0
                        + q * h1
                        + sgn * q * (f2.re + f3.re),
                    sgn * q * (f2.im + f3.im),
                )
            }
        }
        "C2L2" => {
            let h0 = hyp_sum(&hyp_params_from_cyclotomic(&[12], &[4, 2, 3, 3])?, t, ctx, table)?;
            let h4 = hyp_sum(&hyp_params_from_cyclotomic(&[2, 24], &[6, 8, 12])?, t, ctx, table)?;
            let tw = quadratic_sign(ctx.mul(ctx.embed_int(-12), psi), ctx) as f64;
            let poly = q * q + 2.0 * q + 1.0
                + if d3 { 4.0 * q } else { 0.0 }
                + if d4 { 2.0 * q } else { 0.0 };
            (poly + h0 + tw * q * h4, 0.0)
        }
        "C2C2" => {
            let h0 = hyp_sum(&hyp_params_from_cyclotomic(&[6], &[2, 1, 2, 1])?, t, ctx, table)?;
            let h1 = hyp_sum(&hyp_params_from_cyclotomic(&[2, 12], &[4, 4, 6])?, t, ctx, table)?;
            let tw = quadratic_sign(ctx.mul(ctx.embed_int(-6), psi), ctx) as f64;
            let mut re = q * q + 2.0 * q + 1.0
                + if d3 { 4.0 * q } else { 0.0 }
                + h0
                + tw * q * h1;
            let mut im = 0.0;
            if d3 {
                // Cubic- and sextic-twisted conjugate pairs.
                let gam = [2i64, 1, 2, 1, -6];
                let fa = gamma_sum(&gamma_triple(&gam, &[0, 0, 1, -1, 0], 3)?, t, ctx, table)?;
                let fb = gamma_sum(&gamma_triple(&gam, &[0, 0, -1, 1, 0], 3)?, t, ctx, table)?;
                let fc = gamma_sum(&gamma_triple(&gam, &[3, 0, 1, -1, 3], 6)?, t, ctx, table)?;
                let fd = gamma_sum(&gamma_triple(&gam, &[3, 0, -1, 1, 3], 6)?, t, ctx, table)?;
                re += q * (fa.re + fb.re) + tw * q * (fc.re + fd.re);
                im += q * (fa.im + fb.im) + tw * q * (fc.im + fd.im);
            }
            (re, im)
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "no closed-form count for family {other}"
            )))
        }
    };
    certify_nonneg_integer(
        (re, im),
        1e-4,
        &format!("{} closed count at q={}, psi={psi}", spec.label, ctx.q),
    )
}
