//! Finite-field hypergeometric sums.
//!
//! Two closely related sums over the character group of F_q^x are
//! implemented:
//!
//! * [`hyp_sum`] — the sum attached to a balanced pair of cyclotomic
//!   parameter lists (p_1..p_r), (q_1..q_s):
//!
//!   ```text
//!   H_q = (-1)^{r+s}/(1-q) * sum_m q^{s(m)-s(0)}
//!         * prod_i g(p_i m) * prod_j g(-q_j m) * omega(eps/M * t)^m
//!   ```
//!
//!   where s(m) is the multiplicity of e^{2 pi i m/(q-1)} in the gcd
//!   polynomial D(x) of the two binomial products, M = prod p^p / prod q^q
//!   and eps = (-1)^{sum q_j}. For parameter pairs defined over Q the value
//!   is real.
//!
//! * [`gamma_sum`] — the twisted sum attached to an integer vector gamma
//!   with sum 0, a twist vector delta, and a modulus N dividing q-1:
//!
//!   ```text
//!   F_q = 1/(1-q) * sum_m q^{s_d(-m)-s_d(0)}
//!         * prod_i g(-gamma_i m + delta_i (q-1)/N) / g(delta_i (q-1)/N)
//!         * omega(gamma^gamma * t)^m
//!   ```
//!
//!   Its combinatorial data (induced parameter lists and the shared-root
//!   divisor D_delta) is computed exactly: root angles as reduced
//!   rationals, and the divisor also as a genuine polynomial gcd over
//!   Q(zeta_N) whose degree certifies the angle computation.
//!
//! All multiplicities feed exponents of q, so no floating point enters any
//! combinatorial step; floats appear only in the final character-sum
//! accumulation at the table's working precision.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::cyclotomic::{
    angle, cyc_poly_deg, cyc_poly_gcd, cyc_poly_mul, cyclotomic_poly, into_unit_interval,
    twisted_binomial, Angle, AngleMultiset, CyclotomicField,
};
use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::gauss::{GaussSums, GaussTable};
use crate::numeric::{real_int_pow, C64, Cpx, Real};

/// Scale factor relating the two normalizations when a twisted sum
/// degenerates (delta = 0, N = 1) to a plain one on the induced pair:
/// `gamma_sum = DEGENERATE_BRIDGE_CONSTANT * hyp_sum`. The twisted sum
/// divides by g(0) = -1 once per factor, which supplies exactly the
/// (-1)^{r+s} prefactor of the plain sum, so the constant is +1.
/// Derived by direct comparison on F_5 (see the bridge test below).
pub const DEGENERATE_BRIDGE_CONSTANT: f64 = 1.0;

/// Balanced cyclotomic parameter pair with all derived combinatorial data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypParams {
    /// Upper cyclotomic list (p_1..p_r), sorted.
    pub p_list: Vec<u64>,
    /// Lower cyclotomic list (q_1..q_s), sorted.
    pub q_list: Vec<u64>,
    /// Upper parameter angles in (0, 1], sorted.
    pub alpha: Vec<Angle>,
    /// Lower parameter angles in (0, 1], sorted.
    pub beta: Vec<Angle>,
    /// Shared-root divisor D(x), expanded integer coefficients, low first.
    pub d_poly: Vec<i64>,
    /// Exact factorization of D(x): cyclotomic index -> multiplicity.
    pub d_factors: BTreeMap<u64, u64>,
    /// M = prod p_i^{p_i} / prod q_j^{q_j}.
    pub m_value: BigRational,
    /// eps = (-1)^{sum q_j}.
    pub epsilon: i64,
    /// lcm of the reduced denominators of alpha and beta; a field size q
    /// is admissible ("good") exactly when gcd(q, this) = 1.
    pub char_order_lcm: u64,
}

/// Build the parameter pair attached to two disjoint multisets of positive
/// integers, computing the shared divisor D(x) by exact cyclotomic
/// factorization.
pub fn hyp_params_from_cyclotomic(p_list: &[u64], q_list: &[u64]) -> Result<HypParams> {
    if p_list.is_empty() || q_list.is_empty() {
        return Err(Error::MalformedParameters(
            "both parameter lists must be nonempty".into(),
        ));
    }
    if p_list.iter().chain(q_list).any(|&x| x == 0) {
        return Err(Error::MalformedParameters(
            "parameter entries must be positive".into(),
        ));
    }
    if p_list.iter().any(|x| q_list.contains(x)) {
        return Err(Error::MalformedParameters(format!(
            "lists must be disjoint; {p_list:?} and {q_list:?} share an entry"
        )));
    }

    // Multiplicity of each cyclotomic factor on both sides; D takes the min.
    let mut d_factors = BTreeMap::new();
    let top = *p_list.iter().chain(q_list).max().unwrap();
    for d in 1..=top {
        let up = p_list.iter().filter(|&&x| x % d == 0).count() as u64;
        let down = q_list.iter().filter(|&&x| x % d == 0).count() as u64;
        let m = up.min(down);
        if m > 0 {
            d_factors.insert(d, m);
        }
    }

    // Root angles of both products, with D removed.
    let mut up_roots = AngleMultiset::new();
    for &pi in p_list {
        for k in 0..pi {
            up_roots.insert(angle(k as i64, pi as i64), 1);
        }
    }
    let mut down_roots = AngleMultiset::new();
    for &qj in q_list {
        for k in 0..qj {
            down_roots.insert(angle(k as i64, qj as i64), 1);
        }
    }
    let mut d_roots = AngleMultiset::new();
    for (&d, &mult) in &d_factors {
        for k in 0..d {
            if num_integer::gcd(k, d) == 1 {
                d_roots.insert(angle(k as i64, d as i64), mult);
            }
        }
    }
    let mut alpha: Vec<Angle> = up_roots
        .minus(&d_roots)
        .to_sorted_vec()
        .into_iter()
        .map(into_unit_interval)
        .collect();
    let mut beta: Vec<Angle> = down_roots
        .minus(&d_roots)
        .to_sorted_vec()
        .into_iter()
        .map(into_unit_interval)
        .collect();
    alpha.sort();
    beta.sort();
    if alpha.len() != beta.len() {
        return Err(Error::MalformedParameters(format!(
            "pair is not balanced: {} upper vs {} lower angles survive",
            alpha.len(),
            beta.len()
        )));
    }
    debug_assert!(
        alpha.iter().all(|a| !beta.contains(a)),
        "cancellation must leave disjoint angle sets"
    );

    // Expanded D(x).
    let mut d_poly = vec![1i64];
    for (&d, &mult) in &d_factors {
        let phi = cyclotomic_poly(d);
        for _ in 0..mult {
            let mut next = vec![0i64; d_poly.len() + phi.len() - 1];
            for (i, &a) in d_poly.iter().enumerate() {
                for (j, &b) in phi.iter().enumerate() {
                    next[i + j] += a * b;
                }
            }
            d_poly = next;
        }
    }

    let mut m_value = BigRational::one();
    for &pi in p_list {
        m_value *= BigRational::from_integer(BigInt::from(pi).pow(pi as u32));
    }
    for &qj in q_list {
        m_value /= BigRational::from_integer(BigInt::from(qj).pow(qj as u32));
    }
    let epsilon = if q_list.iter().sum::<u64>() % 2 == 1 {
        -1
    } else {
        1
    };
    let char_order_lcm = alpha
        .iter()
        .chain(&beta)
        .fold(1u64, |l, a| num_integer::lcm(l, *a.denom() as u64));

    let mut p_list = p_list.to_vec();
    let mut q_list = q_list.to_vec();
    p_list.sort_unstable();
    q_list.sort_unstable();
    Ok(HypParams {
        p_list,
        q_list,
        alpha,
        beta,
        d_poly,
        d_factors,
        m_value,
        epsilon,
        char_order_lcm,
    })
}

impl HypParams {
    fn check_good(&self, q: u64) -> Result<()> {
        if num_integer::gcd(q, self.char_order_lcm) != 1 {
            return Err(Error::BadPrimeForParameters {
                q,
                detail: format!(
                    "q shares a factor with the parameter denominators (lcm {})",
                    self.char_order_lcm
                ),
            });
        }
        Ok(())
    }
}

/// Multiplicity s(m) of e^{2 pi i m/qx} as a root of D(x), for the field
/// with q = qx + 1 elements. Exact integer arithmetic throughout.
pub fn s_multiplicity(params: &HypParams, m: i64, qx: u64) -> Result<u64> {
    params.check_good(qx + 1)?;
    let mm = m.rem_euclid(qx as i64) as u64;
    let d0 = qx / num_integer::gcd(mm, qx);
    Ok(params.d_factors.get(&d0).copied().unwrap_or(0))
}

/// Evaluate the plain hypergeometric sum at t in F_q^x. The result is
/// certified real (parameters over Q are Galois-stable); its imaginary
/// part must stay below 1e-6 or a precision error is raised.
pub fn hyp_sum(params: &HypParams, t: u64, ctx: &FieldContext, table: &GaussSums) -> Result<f64> {
    if t == 0 || t >= ctx.q {
        return Err(Error::InvalidArgument(format!(
            "t = {t} is not a unit of F_{}",
            ctx.q
        )));
    }
    params.check_good(ctx.q)?;
    let (re, im) = match table {
        GaussSums::F64(gt) => hyp_kernel(params, t, ctx, gt)?.to_f64_pair(),
        GaussSums::Big(gt) => hyp_kernel(params, t, ctx, gt)?.to_f64_pair(),
    };
    if im.abs() > 1e-6 {
        return Err(Error::PrecisionError {
            bits: match table {
                GaussSums::F64(_) => 53,
                GaussSums::Big(gt) => gt.prec_bits,
            },
            detail: format!("imaginary part {im} of a rational-pair sum exceeds 1e-6"),
        });
    }
    Ok(re)
}

fn hyp_kernel<R: Real>(
    params: &HypParams,
    t: u64,
    ctx: &FieldContext,
    gt: &GaussTable<R>,
) -> Result<Cpx<R>> {
    let prec = gt.prec_bits;
    let qx = ctx.qx;

    // omega-argument eps * M^{-1} * t.
    let frac = BigRational::from_integer(BigInt::from(params.epsilon)) / &params.m_value;
    let base = ctx.embed_big_ratio(&frac).map_err(|_| Error::BadPrimeForParameters {
        q: ctx.q,
        detail: "characteristic divides the denominator of the argument scale".into(),
    })?;
    let zarg = ctx.mul(base, t);
    if zarg == 0 {
        return Err(Error::BadPrimeForParameters {
            q: ctx.q,
            detail: "characteristic divides the numerator of the argument scale".into(),
        });
    }
    let zk = ctx.dlog(zarg).expect("nonzero") as i64;

    let s0 = params.d_factors.get(&1).copied().unwrap_or(0) as i64;
    let mut acc = Cpx::<R>::zero(prec);
    for m in 0..qx as i64 {
        let d0 = qx / num_integer::gcd(m as u64, qx);
        let sm = params.d_factors.get(&d0).copied().unwrap_or(0) as i64;
        let mut term = gt.unit_pow(zk * m).clone();
        for &pi in &params.p_list {
            term = term.mul(gt.g(pi as i64 * m));
        }
        for &qj in &params.q_list {
            term = term.mul(gt.g(-(qj as i64) * m));
        }
        if sm != s0 {
            term = term.scale(&real_int_pow(ctx.q, sm - s0, prec));
        }
        acc = acc.add(&term);
    }
    let sign = if (params.p_list.len() + params.q_list.len()) % 2 == 1 {
        -1.0
    } else {
        1.0
    };
    let scale = R::from_f64(sign, prec).div(&R::from_f64(1.0 - ctx.q as f64, prec));
    Ok(acc.scale(&scale))
}

/// Integer data (gamma, delta, N) with its induced parameter pair and the
/// shared-root divisor D_delta.
#[derive(Debug, Clone)]
pub struct GammaTriple {
    pub gamma: Vec<i64>,
    pub delta: Vec<i64>,
    pub n: u64,
    /// Induced upper angles in (0, 1], sorted.
    pub induced_alpha: Vec<Angle>,
    /// Induced lower angles in (0, 1], sorted.
    pub induced_beta: Vec<Angle>,
    /// Roots of D_delta as (angle, multiplicity), sorted by angle.
    pub d_delta: Vec<(Angle, u64)>,
    /// Degree of the exact polynomial gcd over Q(zeta_N); always equals the
    /// total multiplicity of `d_delta` (asserted at construction).
    pub d_delta_degree: u64,
    /// gamma^gamma = prod gamma_i^{gamma_i}, as a signed rational.
    pub gamma_power: BigRational,
    /// Internal angle multiset for s_delta lookups.
    roots: AngleMultiset,
}

/// Build and validate a gamma triple, computing its induced data exactly.
///
/// The divisor D_delta is computed twice and cross-certified: once as the
/// intersection of exact rational root-angle multisets, and once as a
/// polynomial gcd over Q(zeta_N) = Q[y]/(Phi_N); the degrees must agree.
pub fn gamma_triple(gamma: &[i64], delta: &[i64], n: u64) -> Result<GammaTriple> {
    if gamma.is_empty() || gamma.len() != delta.len() {
        return Err(Error::InvalidGammaTriple(format!(
            "gamma (len {}) and delta (len {}) must be equal-length and nonempty",
            gamma.len(),
            delta.len()
        )));
    }
    if n == 0 {
        return Err(Error::InvalidGammaTriple("modulus N must be positive".into()));
    }
    if gamma.iter().any(|&g| g == 0) {
        return Err(Error::InvalidGammaTriple(
            "gamma entries must be nonzero".into(),
        ));
    }
    if gamma.iter().sum::<i64>() != 0 {
        return Err(Error::InvalidGammaTriple(format!(
            "gamma must sum to zero, got {}",
            gamma.iter().sum::<i64>()
        )));
    }
    let g = gamma
        .iter()
        .fold(0u64, |acc, &x| num_integer::gcd(acc, x.unsigned_abs()));
    if g != 1 {
        return Err(Error::InvalidGammaTriple(format!(
            "gamma entries must be coprime overall, gcd = {g}"
        )));
    }

    // Root angles: upper side from negative entries (T^{-g_i} - zeta^{d_i}),
    // lower side from positive entries (T^{g_i} - zeta^{-d_i}).
    let ni = n as i64;
    let mut up = AngleMultiset::new();
    let mut down = AngleMultiset::new();
    for (&gi, &di) in gamma.iter().zip(delta) {
        if gi < 0 {
            let a = -gi;
            for k in 0..a {
                up.insert(angle(di + k * ni, a * ni), 1);
            }
        } else {
            for k in 0..gi {
                down.insert(angle(-di + k * ni, gi * ni), 1);
            }
        }
    }
    let roots = up.intersection(&down);

    let mut induced_alpha: Vec<Angle> = up
        .minus(&roots)
        .to_sorted_vec()
        .into_iter()
        .map(into_unit_interval)
        .collect();
    let mut induced_beta: Vec<Angle> = down
        .minus(&roots)
        .to_sorted_vec()
        .into_iter()
        .map(into_unit_interval)
        .collect();
    induced_alpha.sort();
    induced_beta.sort();

    // Exact polynomial certificate over Q(zeta_N).
    let field = CyclotomicField::new(n);
    let mut up_poly = vec![field.one()];
    let mut down_poly = vec![field.one()];
    for (&gi, &di) in gamma.iter().zip(delta) {
        if gi < 0 {
            up_poly = cyc_poly_mul(&field, &up_poly, &twisted_binomial(&field, (-gi) as u64, di));
        } else {
            down_poly =
                cyc_poly_mul(&field, &down_poly, &twisted_binomial(&field, gi as u64, -di));
        }
    }
    let gcd_poly = cyc_poly_gcd(&field, &up_poly, &down_poly);
    let d_delta_degree = cyc_poly_deg(&field, &gcd_poly) as u64;
    assert_eq!(
        d_delta_degree,
        roots.len(),
        "polynomial gcd over Q(zeta_N) must match the angle-multiset intersection"
    );

    let mut gamma_power = BigRational::one();
    for &gi in gamma {
        let p = BigInt::from(gi).pow(gi.unsigned_abs() as u32);
        if gi > 0 {
            gamma_power *= BigRational::from_integer(p);
        } else {
            gamma_power /= BigRational::from_integer(p);
        }
    }

    let d_delta: Vec<(Angle, u64)> = roots.0.iter().map(|(&a, &c)| (a, c)).collect();
    Ok(GammaTriple {
        gamma: gamma.to_vec(),
        delta: delta.to_vec(),
        n,
        induced_alpha,
        induced_beta,
        d_delta,
        d_delta_degree,
        gamma_power,
        roots,
    })
}

impl GammaTriple {
    /// Multiplicity s_delta(m): how often e^{2 pi i m/qx} occurs in D_delta.
    pub fn s_delta(&self, m: i64, qx: u64) -> u64 {
        self.roots
            .multiplicity(&angle(m.rem_euclid(qx as i64), qx as i64))
    }
}

/// Evaluate the twisted sum at t in F_q^x. Requires N | q-1 (otherwise the
/// needed characters do not exist and a divisibility error is returned).
pub fn gamma_sum(tri: &GammaTriple, t: u64, ctx: &FieldContext, table: &GaussSums) -> Result<C64> {
    if ctx.qx % tri.n != 0 {
        return Err(Error::DivisibilityError {
            n: tri.n,
            qx: ctx.qx,
        });
    }
    if t == 0 || t >= ctx.q {
        return Err(Error::InvalidArgument(format!(
            "t = {t} is not a unit of F_{}",
            ctx.q
        )));
    }
    let (re, im) = match table {
        GaussSums::F64(gt) => gamma_kernel(tri, t, ctx, gt)?.to_f64_pair(),
        GaussSums::Big(gt) => gamma_kernel(tri, t, ctx, gt)?.to_f64_pair(),
    };
    Ok(C64::new(re, im))
}

fn gamma_kernel<R: Real>(
    tri: &GammaTriple,
    t: u64,
    ctx: &FieldContext,
    gt: &GaussTable<R>,
) -> Result<Cpx<R>> {
    let prec = gt.prec_bits;
    let qx = ctx.qx;
    let step = (qx / tri.n) as i64;

    let base = ctx
        .embed_big_ratio(&tri.gamma_power)
        .map_err(|_| Error::BadPrimeForParameters {
            q: ctx.q,
            detail: "characteristic divides the denominator of gamma^gamma".into(),
        })?;
    let zarg = ctx.mul(base, t);
    if zarg == 0 {
        return Err(Error::BadPrimeForParameters {
            q: ctx.q,
            detail: "characteristic divides gamma^gamma".into(),
        });
    }
    let zk = ctx.dlog(zarg).expect("nonzero") as i64;

    // Constant divisor: product of g(delta_i (q-1)/N).
    let mut pref = Cpx::<R>::one(prec);
    for &di in &tri.delta {
        pref = pref.mul(gt.g(di * step));
    }

    let s0 = tri.s_delta(0, qx) as i64;
    let mut acc = Cpx::<R>::zero(prec);
    for m in 0..qx as i64 {
        let sm = tri.s_delta(-m, qx) as i64;
        let mut term = gt.unit_pow(zk * m).clone();
        for (&gi, &di) in tri.gamma.iter().zip(&tri.delta) {
            term = term.mul(gt.g(-gi * m + di * step));
        }
        if sm != s0 {
            term = term.scale(&real_int_pow(ctx.q, sm - s0, prec));
        }
        acc = acc.add(&term);
    }
    let denom = pref.scale(&R::from_f64(1.0 - ctx.q as f64, prec));
    Ok(acc.div(&denom))
}
