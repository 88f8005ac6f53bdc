//! Finite fields F_q, q = p^u with p an odd prime.
//!
//! Elements are stored as *packed indices*: the element with coordinate
//! digits (c_0, ..., c_{u-1}) in the power basis 1, T, ..., T^{u-1} of
//! F_p[T]/(f) is the integer c_0 + c_1 p + ... + c_{u-1} p^{u-1}. Index 0
//! is zero, indices 1..p are the prime subfield, and all q indices are a
//! contiguous range, so dense lookup tables replace arithmetic.
//!
//! The construction is deterministic so that results are reproducible
//! across runs and machines:
//!
//! * the modulus f is the monic irreducible of degree u whose coefficient
//!   vector has the smallest packed index;
//! * the multiplicative generator is the smallest element index of order
//!   q - 1.
//!
//! Three dense tables are built once: discrete logs, generator powers, and
//! absolute traces. Multiplication is two table lookups plus an addition;
//! addition is digit-wise mod p.

use crate::error::{Error, Result};

/// Largest supported field size.
pub const MAX_Q: u64 = 10_000_000;

/// A concrete finite field with dense log/exp/trace tables.
#[derive(Debug, Clone)]
pub struct FieldContext {
    /// Characteristic (odd prime).
    pub p: u64,
    /// Extension degree over the prime field.
    pub u: u32,
    /// Field size p^u.
    pub q: u64,
    /// Order of the multiplicative group, q - 1.
    pub qx: u64,
    /// Modulus coefficients, low degree first, length u + 1, monic.
    pub modulus: Vec<u64>,
    /// Packed index of the chosen multiplicative generator.
    pub generator: u64,
    /// dlog[x] = k with generator^k = x, for x != 0; dlog[0] is a sentinel.
    dlog: Vec<u32>,
    /// exp[k] = generator^k for k in 0..qx.
    exp: Vec<u32>,
    /// Absolute trace to F_p, as an integer in 0..p.
    trace: Vec<u32>,
}

/// Build the field with p^u elements. Fails unless p is an odd prime and
/// p^u fits the supported range.
pub fn make_field(p: u64, u: u32) -> Result<FieldContext> {
    if p < 3 || !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    if u == 0 {
        return Err(Error::InvalidDegree {
            p,
            u,
            reason: "degree must be at least 1".into(),
        });
    }
    let mut q: u64 = 1;
    for _ in 0..u {
        q = q.checked_mul(p).unwrap_or(u64::MAX);
        if q > MAX_Q {
            return Err(Error::InvalidDegree {
                p,
                u,
                reason: format!("p^u exceeds the supported maximum {MAX_Q}"),
            });
        }
    }
    let qx = q - 1;

    let modulus = smallest_irreducible(p, u);
    let poly = PolyRing {
        p,
        u: u as usize,
        modulus: &modulus,
    };

    // Smallest generator: test each index by checking that no proper-prime
    // quotient of q - 1 kills it.
    let qx_prime_divisors = prime_divisors(qx);
    let mut generator = 0u64;
    for cand in 2..q {
        if poly.pow(cand, qx) != 1 {
            continue; // not even a unit of full order candidate (paranoia)
        }
        if qx_prime_divisors.iter().all(|&l| poly.pow(cand, qx / l) != 1) {
            generator = cand;
            break;
        }
    }
    debug_assert!(generator != 0, "every finite field has a generator");

    // Power and discrete-log tables in one sweep.
    let mut exp = vec![0u32; qx as usize];
    let mut dlog = vec![u32::MAX; q as usize];
    let mut acc: u64 = 1;
    for (k, slot) in exp.iter_mut().enumerate() {
        *slot = acc as u32;
        dlog[acc as usize] = k as u32;
        acc = poly.mul(acc, generator);
    }
    debug_assert_eq!(acc, 1, "generator order must be exactly q - 1");

    // Trace via Frobenius orbits through the log tables:
    // Tr(x) = x + x^p + ... + x^(p^(u-1)), which lands in the prime field.
    let mut trace = vec![0u32; q as usize];
    for x in 1..q {
        let k = dlog[x as usize] as u64;
        let mut sum = 0u64;
        let mut kp = k;
        for _ in 0..u {
            sum = add_packed(p, u, sum, exp[(kp % qx) as usize] as u64);
            kp = (kp % qx) * (p % qx) % qx;
        }
        debug_assert!(sum < p, "trace must lie in the prime subfield");
        trace[x as usize] = sum as u32;
    }

    Ok(FieldContext {
        p,
        u,
        q,
        qx,
        modulus,
        generator,
        dlog,
        exp,
        trace,
    })
}

impl FieldContext {
    /// Sum of two packed elements.
    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.u == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else {
            add_packed(self.p, self.u, a, b)
        }
    }

    /// Additive inverse of a packed element.
    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if self.u == 1 {
            if a == 0 {
                0
            } else {
                self.p - a
            }
        } else {
            let mut out = 0u64;
            let mut a = a;
            let mut scale = 1u64;
            for _ in 0..self.u {
                let d = a % self.p;
                if d != 0 {
                    out += (self.p - d) * scale;
                }
                a /= self.p;
                scale *= self.p;
            }
            out
        }
    }

    /// Product of two packed elements, via the log tables.
    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        let k = self.dlog[a as usize] as u64 + self.dlog[b as usize] as u64;
        let k = if k >= self.qx { k - self.qx } else { k };
        self.exp[k as usize] as u64
    }

    /// a^e with the convention 0^0 = 1.
    #[inline]
    pub fn pow(&self, a: u64, e: u64) -> u64 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let k = (self.dlog[a as usize] as u128 * e as u128 % self.qx as u128) as u64;
        self.exp[k as usize] as u64
    }

    /// Multiplicative inverse; panics on zero (internal misuse).
    #[inline]
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero");
        let k = self.dlog[a as usize] as u64;
        self.exp[((self.qx - k) % self.qx) as usize] as u64
    }

    /// Discrete log base the chosen generator; `None` for zero.
    #[inline]
    pub fn dlog(&self, a: u64) -> Option<u64> {
        if a == 0 {
            None
        } else {
            Some(self.dlog[a as usize] as u64)
        }
    }

    /// generator^k for any integer k (negative exponents allowed).
    #[inline]
    pub fn gen_pow(&self, k: i64) -> u64 {
        let k = k.rem_euclid(self.qx as i64) as usize;
        self.exp[k] as u64
    }

    /// Absolute trace to the prime field, as an integer in 0..p.
    #[inline]
    pub fn trace(&self, a: u64) -> u64 {
        self.trace[a as usize] as u64
    }

    /// Embed an integer via reduction mod p (lands in the prime subfield).
    #[inline]
    pub fn embed_int(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    /// Embed an arbitrary-precision rational; fails if p divides the
    /// denominator.
    pub fn embed_big_ratio(&self, r: &num_rational::BigRational) -> Result<u64> {
        use num_traits::ToPrimitive;
        let p = num_bigint::BigInt::from(self.p);
        let num = ((r.numer() % &p) + &p) % &p;
        let den = ((r.denom() % &p) + &p) % &p;
        let den = den.to_u64().expect("residue fits u64");
        if den == 0 {
            return Err(Error::InvalidArgument(format!(
                "denominator of {r} vanishes mod p = {}",
                self.p
            )));
        }
        Ok(self.mul(num.to_u64().expect("residue fits u64"), self.inv(den)))
    }

    /// Embed a rational num/den; fails if p divides the denominator.
    pub fn embed_ratio(&self, num: i64, den: i64) -> Result<u64> {
        let d = self.embed_int(den);
        if d == 0 {
            return Err(Error::InvalidArgument(format!(
                "denominator {den} vanishes mod p = {}",
                self.p
            )));
        }
        Ok(self.mul(self.embed_int(num), self.inv(d)))
    }
}

/// Digit-wise addition of packed radix-p vectors.
#[inline]
fn add_packed(p: u64, u: u32, mut a: u64, mut b: u64) -> u64 {
    let mut out = 0u64;
    let mut scale = 1u64;
    for _ in 0..u {
        let s = a % p + b % p;
        let s = if s >= p { s - p } else { s };
        out += s * scale;
        a /= p;
        b /= p;
        scale *= p;
    }
    out
}

/// Plain polynomial arithmetic mod (p, f); used only during construction.
struct PolyRing<'a> {
    p: u64,
    u: usize,
    modulus: &'a [u64],
}

impl PolyRing<'_> {
    /// Multiply two packed elements by schoolbook polynomial multiplication
    /// followed by reduction, without any precomputed tables.
    fn mul(&self, a: u64, b: u64) -> u64 {
        let av = unpack(self.p, self.u, a);
        let bv = unpack(self.p, self.u, b);
        let mut prod = vec![0u64; 2 * self.u - 1];
        for (i, &ai) in av.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in bv.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj) % self.p;
            }
        }
        // Reduce by the monic modulus from the top down.
        for d in (self.u..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (k, &mk) in self.modulus.iter().enumerate().take(self.u) {
                let idx = d - self.u + k;
                prod[idx] = (prod[idx] + c * (self.p - mk) % self.p) % self.p;
            }
        }
        pack(self.p, &prod[..self.u])
    }

    fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

fn unpack(p: u64, u: usize, mut a: u64) -> Vec<u64> {
    let mut v = vec![0u64; u];
    for slot in v.iter_mut() {
        *slot = a % p;
        a /= p;
    }
    v
}

fn pack(p: u64, digits: &[u64]) -> u64 {
    let mut out = 0u64;
    for &d in digits.iter().rev() {
        out = out * p + d;
    }
    out
}

/// Monic irreducible of degree u over F_p whose coefficient vector packs to
/// the smallest integer. Scans lower-coefficient blocks in packed order and
/// tests irreducibility with the derivative-free power criterion:
/// f is irreducible iff T^(p^u) = T mod f and gcd(T^(p^(u/l)) - T, f) = 1
/// for every prime l dividing u.
fn smallest_irreducible(p: u64, u: u32) -> Vec<u64> {
    let deg = u as usize;
    if deg == 1 {
        return vec![0, 1]; // f(T) = T
    }
    let u_prime_divisors = prime_divisors(u as u64);
    let mut lower = vec![0u64; deg];
    loop {
        let mut f = lower.clone();
        f.push(1);
        if is_irreducible(p, &f, &u_prime_divisors) {
            return f;
        }
        // Increment the packed lower-coefficient vector.
        let mut i = 0;
        loop {
            lower[i] += 1;
            if lower[i] < p {
                break;
            }
            lower[i] = 0;
            i += 1;
            assert!(i < deg, "no irreducible of degree {deg} found (impossible)");
        }
    }
}

fn is_irreducible(p: u64, f: &[u64], u_prime_divisors: &[u64]) -> bool {
    let u = f.len() - 1;
    // x^(p^u) mod f must equal x.
    let mut t = vec![0u64; u.max(2)];
    t[1] = 1;
    let xq = poly_frob_power(p, f, &t, u as u32);
    if normalize(&xq) != normalize(&t) {
        return false;
    }
    for &l in u_prime_divisors {
        let sub = poly_frob_power(p, f, &t, (u as u64 / l) as u32);
        // gcd(x^(p^(u/l)) - x, f) must be 1.
        let mut diff = sub;
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        let g = poly_gcd(p, &diff, f);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Repeated Frobenius: returns base^(p^k) mod f.
fn poly_frob_power(p: u64, f: &[u64], base: &[u64], k: u32) -> Vec<u64> {
    let mut cur = base.to_vec();
    for _ in 0..k {
        cur = poly_powmod(p, f, &cur, p);
    }
    cur
}

fn poly_mulmod(p: u64, f: &[u64], a: &[u64], b: &[u64]) -> Vec<u64> {
    let u = f.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    for d in (u..prod.len()).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for (k, &mk) in f.iter().enumerate().take(u) {
            let idx = d - u + k;
            prod[idx] = (prod[idx] + c * (p - mk) % p) % p;
        }
    }
    prod.truncate(u);
    prod
}

fn poly_powmod(p: u64, f: &[u64], a: &[u64], mut e: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(p, f, &acc, &base);
        }
        base = poly_mulmod(p, f, &base, &base);
        e >>= 1;
    }
    acc
}

fn normalize(a: &[u64]) -> Vec<u64> {
    let mut v = a.to_vec();
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

fn poly_gcd(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut a = normalize(a);
    let mut b = normalize(b);
    while !(b.len() == 1 && b[0] == 0) {
        let r = poly_rem(p, &a, &b);
        a = b;
        b = r;
    }
    // Make monic for a canonical representative.
    let lead = *a.last().unwrap();
    if lead > 1 {
        let inv = mod_inv(lead, p);
        for c in a.iter_mut() {
            *c = *c * inv % p;
        }
    }
    a
}

fn poly_rem(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let b = normalize(b);
    let db = b.len() - 1;
    if db == 0 {
        return vec![0]; // division by a nonzero constant
    }
    let mut r = normalize(a);
    let lead_inv = mod_inv(*b.last().unwrap(), p);
    while r.len() > db {
        let c = *r.last().unwrap() % p;
        if c != 0 {
            let shift = r.len() - 1 - db;
            let scale = c * lead_inv % p;
            for (k, &bk) in b.iter().enumerate() {
                r[shift + k] = (r[shift + k] + scale * (p - bk) % p) % p;
            }
        }
        r.pop();
        while r.len() > db.max(1) && *r.last().unwrap() == 0 {
            r.pop();
        }
    }
    normalize(&r)
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat inverse; p is prime and a != 0 mod p.
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Deterministic trial-division primality test (inputs are at most 10^7).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime divisors of n, ascending.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
