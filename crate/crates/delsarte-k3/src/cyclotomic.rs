//! Exact cyclotomic bookkeeping: integer cyclotomic polynomials, rational
//! root angles, and polynomial gcds over Q(zeta_N).
//!
//! Products of binomials x^a - 1 (and their twisted forms x^a - zeta_N^c)
//! appear throughout the character-sum layer. Their roots are roots of
//! unity, so instead of floating-point root finding everything here is
//! exact:
//!
//! * a root of unity is its *angle*, a reduced rational in [0, 1);
//! * multisets of angles are `BTreeMap<angle, multiplicity>`;
//! * when a genuine polynomial gcd is required (the twisted case), it is
//!   computed over the field Q(zeta_N) represented as Q[y]/(Phi_N(y)) with
//!   exact rational coefficients.
//!
//! Multiplicities from this module feed exponents of q in character sums,
//! which is why nothing here is allowed to be approximate.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

/// Exact rational representing a root of unity e^(2 pi i * angle),
/// normalized into [0, 1).
pub type Angle = Ratio<i64>;

/// Build the angle num/den reduced into [0, 1).
pub fn angle(num: i64, den: i64) -> Angle {
    let a = Ratio::new(num, den);
    a - a.floor()
}

/// Map an angle to the (0, 1] presentation used for parameter lists
/// (angle 0, the root 1, is written as 1).
pub fn into_unit_interval(a: Angle) -> Angle {
    if a.is_zero() {
        Ratio::one()
    } else {
        a
    }
}

/// Multiset of angles with integer multiplicities.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AngleMultiset(pub BTreeMap<Angle, u64>);

impl AngleMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, a: Angle, count: u64) {
        if count > 0 {
            *self.0.entry(a).or_insert(0) += count;
        }
    }

    pub fn multiplicity(&self, a: &Angle) -> u64 {
        self.0.get(a).copied().unwrap_or(0)
    }

    /// Total number of elements counted with multiplicity.
    pub fn len(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Pointwise minimum (the shared part of two multisets).
    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = Self::new();
        for (a, &c) in &self.0 {
            let d = other.multiplicity(a);
            out.insert(*a, c.min(d));
        }
        out
    }

    /// Remove `other` from `self` (saturating at zero).
    pub fn minus(&self, other: &Self) -> Self {
        let mut out = Self::new();
        for (a, &c) in &self.0 {
            let d = other.multiplicity(a);
            if c > d {
                out.insert(*a, c - d);
            }
        }
        out
    }

    /// Expand into a sorted list with repeats.
    pub fn to_sorted_vec(&self) -> Vec<Angle> {
        let mut v = Vec::with_capacity(self.len() as usize);
        for (a, &c) in &self.0 {
            for _ in 0..c {
                v.push(*a);
            }
        }
        v
    }

    /// All angles of x^a - 1, i.e. {k/a : k = 0..a-1}.
    pub fn of_binomial(a: u64) -> Self {
        let mut out = Self::new();
        for k in 0..a {
            out.insert(angle(k as i64, a as i64), 1);
        }
        out
    }
}

/// Coefficients of the n-th cyclotomic polynomial, constant term first.
/// Computed by exact division of x^n - 1 by the proper cyclotomic factors.
pub fn cyclotomic_poly(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    // x^n - 1
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_poly(d);
            num = int_poly_div_exact(&num, &phi_d);
        }
    }
    num
}

/// Exact division of integer polynomials (divisor monic up to sign; the
/// division is known to be exact here). Low-degree-first coefficients.
fn int_poly_div_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db];
    assert!(lead == 1 || lead == -1, "divisor must be monic up to sign");
    let mut quot = vec![0i64; r.len() - db];
    for k in (0..quot.len()).rev() {
        let c = r[k + db] / lead;
        quot[k] = c;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                r[k + j] -= c * bj;
            }
        }
    }
    assert!(r.iter().all(|&x| x == 0), "division was not exact");
    quot
}

// ---------------------------------------------------------------------------
// Exact arithmetic over Q(zeta_N) = Q[y] / (Phi_N(y)).
// ---------------------------------------------------------------------------

type Q = BigRational;

fn q_from(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

/// The field Q(zeta_N), carrying its defining polynomial.
#[derive(Debug, Clone)]
pub struct CyclotomicField {
    pub n: u64,
    /// Phi_N coefficients over Q, low-first, monic, length phi(N)+1.
    phi: Vec<Q>,
    /// Extension degree phi(N).
    deg: usize,
}

/// An element of Q(zeta_N): rational coordinates in the power basis
/// 1, y, ..., y^(phi(N)-1).
pub type CycNum = Vec<Q>;

impl CyclotomicField {
    pub fn new(n: u64) -> Self {
        let phi: Vec<Q> = cyclotomic_poly(n).iter().map(|&c| q_from(c)).collect();
        let deg = phi.len() - 1;
        CyclotomicField { n, phi, deg }
    }

    pub fn zero(&self) -> CycNum {
        vec![Q::zero(); self.deg]
    }

    pub fn from_rational(&self, r: Q) -> CycNum {
        let mut v = self.zero();
        v[0] = r;
        v
    }

    pub fn one(&self) -> CycNum {
        self.from_rational(Q::one())
    }

    /// zeta_N^c as a field element (c reduced mod N).
    pub fn zeta_pow(&self, c: i64) -> CycNum {
        let c = c.rem_euclid(self.n as i64) as usize;
        // Reduce y^c mod Phi_N.
        let mut raw = vec![Q::zero(); c + 1];
        raw[c] = Q::one();
        self.reduce(raw)
    }

    fn reduce(&self, mut v: Vec<Q>) -> CycNum {
        for d in (self.deg..v.len()).rev() {
            let c = std::mem::replace(&mut v[d], Q::zero());
            if c.is_zero() {
                continue;
            }
            for (k, pk) in self.phi.iter().enumerate().take(self.deg) {
                let delta = &c * pk;
                v[d - self.deg + k] -= delta;
            }
        }
        v.truncate(self.deg);
        v.resize(self.deg, Q::zero());
        v
    }

    pub fn add(&self, a: &CycNum, b: &CycNum) -> CycNum {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &CycNum, b: &CycNum) -> CycNum {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn neg(&self, a: &CycNum) -> CycNum {
        a.iter().map(|x| -x).collect()
    }

    pub fn mul(&self, a: &CycNum, b: &CycNum) -> CycNum {
        let mut prod = vec![Q::zero(); 2 * self.deg];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let delta = x * y;
                prod[i + j] += delta;
            }
        }
        self.reduce(prod)
    }

    pub fn is_zero(&self, a: &CycNum) -> bool {
        a.iter().all(|x| x.is_zero())
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[y]
    /// against the (irreducible) defining polynomial.
    pub fn inv(&self, a: &CycNum) -> CycNum {
        assert!(!self.is_zero(a), "inverse of zero in cyclotomic field");
        // Extended gcd of a (as a polynomial) and phi.
        let mut r0: Vec<Q> = self.phi.clone();
        let mut r1: Vec<Q> = rat_poly_trim(a.clone());
        let mut s0: Vec<Q> = vec![Q::zero()];
        let mut s1: Vec<Q> = vec![Q::one()];
        while !(r1.len() == 1 && r1[0].is_zero()) {
            let (quot, rem) = rat_poly_divmod(&r0, &r1);
            let s2 = rat_poly_sub(&s0, &rat_poly_mul(&quot, &s1));
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = rat_poly_trim(s2);
        }
        // r0 is a nonzero constant: gcd(a, Phi_N) with Phi_N irreducible.
        assert!(r0.len() == 1 && !r0[0].is_zero(), "defining polynomial not coprime");
        let scale = r0[0].recip();
        let mut out = rat_poly_scale(&s0, &scale);
        out.resize(self.deg, Q::zero());
        self.reduce(out)
    }
}

// Plain dense polynomial helpers over Q (low-first, trimmed).

fn rat_poly_trim(mut v: Vec<Q>) -> Vec<Q> {
    while v.len() > 1 && v.last().unwrap().is_zero() {
        v.pop();
    }
    if v.is_empty() {
        v.push(Q::zero());
    }
    v
}

fn rat_poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let delta = x * y;
            out[i + j] += delta;
        }
    }
    rat_poly_trim(out)
}

fn rat_poly_sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    let n = a.len().max(b.len());
    let mut out = vec![Q::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    rat_poly_trim(out)
}

fn rat_poly_scale(a: &[Q], s: &Q) -> Vec<Q> {
    a.iter().map(|x| x * s).collect()
}

fn rat_poly_divmod(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let b = rat_poly_trim(b.to_vec());
    let db = b.len() - 1;
    let mut r = rat_poly_trim(a.to_vec());
    if r.len() <= db {
        return (vec![Q::zero()], r);
    }
    let mut quot = vec![Q::zero(); r.len() - db];
    let lead_inv = b[db].recip();
    for k in (0..quot.len()).rev() {
        let c = &r[k + db] * &lead_inv;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                let delta = &c * bj;
                r[k + j] -= delta;
            }
        }
        quot[k] = c;
    }
    (rat_poly_trim(quot), rat_poly_trim(r))
}

// ---------------------------------------------------------------------------
// Polynomials with coefficients in Q(zeta_N).
// ---------------------------------------------------------------------------

/// Dense polynomial over Q(zeta_N), low-degree first.
pub type CycPoly = Vec<CycNum>;

pub fn cyc_poly_trim(field: &CyclotomicField, mut v: CycPoly) -> CycPoly {
    while v.len() > 1 && field.is_zero(v.last().unwrap()) {
        v.pop();
    }
    if v.is_empty() {
        v.push(field.zero());
    }
    v
}

pub fn cyc_poly_deg(field: &CyclotomicField, v: &CycPoly) -> usize {
    let t = cyc_poly_trim(field, v.clone());
    if t.len() == 1 && field.is_zero(&t[0]) {
        0
    } else {
        t.len() - 1
    }
}

pub fn cyc_poly_mul(field: &CyclotomicField, a: &CycPoly, b: &CycPoly) -> CycPoly {
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if field.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let delta = field.mul(x, y);
            out[i + j] = field.add(&out[i + j], &delta);
        }
    }
    cyc_poly_trim(field, out)
}

/// Remainder of a mod b (b nonzero).
pub fn cyc_poly_rem(field: &CyclotomicField, a: &CycPoly, b: &CycPoly) -> CycPoly {
    let b = cyc_poly_trim(field, b.to_vec());
    let db = b.len() - 1;
    let mut r = cyc_poly_trim(field, a.to_vec());
    if db == 0 {
        return vec![field.zero()];
    }
    let lead_inv = field.inv(&b[db]);
    while r.len() > db {
        let c = field.mul(r.last().unwrap(), &lead_inv);
        let shift = r.len() - 1 - db;
        if !field.is_zero(&c) {
            for (j, bj) in b.iter().enumerate() {
                let delta = field.mul(&c, bj);
                r[shift + j] = field.sub(&r[shift + j], &delta);
            }
        }
        r.pop();
        while r.len() > db.max(1) && field.is_zero(r.last().unwrap()) {
            r.pop();
        }
    }
    cyc_poly_trim(field, r)
}

/// Monic gcd over Q(zeta_N)[T].
pub fn cyc_poly_gcd(field: &CyclotomicField, a: &CycPoly, b: &CycPoly) -> CycPoly {
    let mut a = cyc_poly_trim(field, a.to_vec());
    let mut b = cyc_poly_trim(field, b.to_vec());
    while !(b.len() == 1 && field.is_zero(&b[0])) {
        let r = cyc_poly_rem(field, &a, &b);
        a = b;
        b = r;
    }
    // Normalize monic.
    let lead_inv = field.inv(a.last().unwrap());
    a.iter().map(|c| field.mul(c, &lead_inv)).collect()
}

/// The binomial T^a - zeta_N^c as a polynomial over Q(zeta_N).
pub fn twisted_binomial(field: &CyclotomicField, a: u64, c: i64) -> CycPoly {
    let mut v = vec![field.zero(); a as usize + 1];
    v[0] = field.neg(&field.zeta_pow(c));
    v[a as usize] = field.one();
    v
}
