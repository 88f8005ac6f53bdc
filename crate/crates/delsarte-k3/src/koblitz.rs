//! Point counting by multiplicative characters (Koblitz's formula) over
//! torus strata.
//!
//! For a polynomial f = sum_i a_i x^{v_i} with all a_i nonzero, the number
//! of zeros of f on the torus (F_q^x)^n is
//!
//! ```text
//!     #U(F_q) = sum over s in S of omega(a)^{-s} c_s,
//!     c_s = (q-1)^{n-r+1} / q * prod_i g(s_i)           (s != 0),
//!     c_0 = (q-1)^{n-r+1} ((q-1)^{r-1} - (-1)^{r-1}) / q,
//! ```
//!
//! where S is the set of character vectors s in (Z/(q-1))^r satisfying
//!
//! ```text
//!     sum_i s_i v_{ij} = 0 for every j,   and   sum_i s_i = 0,
//! ```
//!
//! valid whenever q-1 divides none of the nonzero exponents v_{ij}.
//!
//! S is solved exactly by a Smith normal form of the exponent system; the
//! result is presented as generator vectors plus coset offsets, matching
//! the hand decompositions S = S_0 ∪ S_1 ∪ ... used in the closed-form
//! derivations. A projective count is assembled stratum by stratum: for
//! every nonempty coordinate subset, the monomials surviving on that
//! stratum define a smaller torus problem, and the projective points with
//! that exact support are the affine torus count divided by q-1.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::gauss::{GaussSums, GaussTable};
use crate::numeric::{certify_nonneg_integer, real_int_pow, Cpx, Real};
use crate::pencil::PencilSpec;

// ---------------------------------------------------------------------------
// Smith normal form (exact).
// ---------------------------------------------------------------------------

/// Smith normal form with unimodular witnesses: returns (P, D, Q) with
/// P * A * Q = D, D diagonal with d_i | d_{i+1}, and |det P| = |det Q| = 1.
/// Exact arithmetic in i128.
pub fn snf(a: &[Vec<i128>]) -> (Vec<Vec<i128>>, Vec<Vec<i128>>, Vec<Vec<i128>>) {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut d: Vec<Vec<i128>> = a.to_vec();
    let mut p = identity(rows);
    let mut q = identity(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        // Find the smallest nonzero pivot in the remaining block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if d[i][j] != 0
                    && pivot.map_or(true, |(pi, pj)| d[i][j].abs() < d[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap(t, pi);
        p.swap(t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut q, t, pj);

        // Clear row and column t; restart whenever a remainder appears,
        // shrinking |d[t][t]| each time, so this terminates.
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if d[i][t] != 0 {
                    let f = d[i][t].div_euclid(d[t][t]);
                    row_sub(&mut d, i, t, f);
                    row_sub(&mut p, i, t, f);
                    if d[i][t] != 0 {
                        d.swap(t, i);
                        p.swap(t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                if d[t][j] != 0 {
                    let f = d[t][j].div_euclid(d[t][t]);
                    col_sub(&mut d, j, t, f);
                    col_sub(&mut q, j, t, f);
                    if d[t][j] != 0 {
                        swap_cols(&mut d, t, j);
                        swap_cols(&mut q, t, j);
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }

        // Divisibility: d[t][t] must divide the rest of the block.
        let mut fixed = true;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if d[i][j] % d[t][t] != 0 {
                    // Fold row i into row t and redo the elimination.
                    row_sub(&mut d, t, i, -1);
                    row_sub(&mut p, t, i, -1);
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if fixed {
            if d[t][t] < 0 {
                for x in d[t].iter_mut() {
                    *x = -*x;
                }
                for x in p[t].iter_mut() {
                    *x = -*x;
                }
            }
            t += 1;
        }
    }
    (p, d, q)
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

fn swap_cols(m: &mut [Vec<i128>], a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

/// row[i] -= f * row[j]
fn row_sub(m: &mut [Vec<i128>], i: usize, j: usize, f: i128) {
    if f != 0 {
        for k in 0..m[i].len() {
            let v = f * m[j][k];
            m[i][k] -= v;
        }
    }
}

/// col[j] -= f * col[t]
fn col_sub(m: &mut [Vec<i128>], j: usize, t: usize, f: i128) {
    if f != 0 {
        for row in m.iter_mut() {
            let v = f * row[t];
            row[j] -= v;
        }
    }
}

/// Matrix product (exact).
pub fn mat_mul(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = a.len();
    let k = if n == 0 { 0 } else { a[0].len() };
    let m = if b.is_empty() { 0 } else { b[0].len() };
    let mut out = vec![vec![0i128; m]; n];
    for i in 0..n {
        for t in 0..k {
            if a[i][t] == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += a[i][t] * b[t][j];
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Character solutions.
// ---------------------------------------------------------------------------

/// Solutions of the character system of a monomial list, as a one- (or
/// zero-) parameter family of generators plus finitely many coset offsets.
#[derive(Debug, Clone)]
pub struct CharacterSolutionSet {
    pub qx: u64,
    /// Generators of full order q-1 (the free parameter directions).
    pub base: Vec<Vec<u64>>,
    /// Offset vectors, one per coset of the span of `base`; always
    /// contains the zero vector.
    pub cosets: Vec<Vec<u64>>,
    /// Elementary divisors of the exponent system (Smith normal form
    /// diagonal, zero-padded to the number of monomials).
    pub elementary_divisors: Vec<u64>,
    /// Set when the solution set was re-checked by exhaustive enumeration
    /// of (Z/(q-1))^r.
    pub exhaustively_verified: bool,
}

impl CharacterSolutionSet {
    /// Materialize every solution vector, sorted lexicographically.
    pub fn solutions(&self) -> Vec<Vec<u64>> {
        let r = self.cosets[0].len();
        let mut out = Vec::new();
        let mut mults = vec![0u64; self.base.len()];
        for coset in &self.cosets {
            loop {
                let mut s = coset.clone();
                for (b, &m) in self.base.iter().zip(&mults) {
                    for i in 0..r {
                        s[i] = (s[i] + b[i] * m) % self.qx;
                    }
                }
                out.push(s);
                // Odometer over the base multipliers.
                let mut k = 0;
                loop {
                    if k == self.base.len() {
                        break;
                    }
                    mults[k] += 1;
                    if mults[k] < self.qx {
                        break;
                    }
                    mults[k] = 0;
                    k += 1;
                }
                if mults.iter().all(|&m| m == 0) {
                    break;
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Number of solutions.
    pub fn len(&self) -> u64 {
        self.cosets.len() as u64 * self.qx.pow(self.base.len() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false // the zero vector always solves the system
    }
}

/// Solve the character system for a list of monomial exponent vectors
/// (each of length n): find all s in (Z/qx)^r with
/// sum_i s_i * exponents[i][j] = 0 for all j and sum_i s_i = 0.
pub fn character_solutions(exponents: &[Vec<u64>], qx: u64) -> Result<CharacterSolutionSet> {
    let r = exponents.len();
    assert!(r > 0, "need at least one monomial");
    let n = exponents[0].len();
    for v in exponents {
        for &e in v {
            if e != 0 && e % qx == 0 {
                return Err(Error::HypothesisViolated {
                    q: qx + 1,
                    detail: format!("exponent {e} is divisible by q-1 = {qx}"),
                });
            }
        }
    }

    // System matrix: one row per equation (n exponent equations plus the
    // sum condition), one column per monomial.
    let mut m: Vec<Vec<i128>> = Vec::with_capacity(n + 1);
    for j in 0..n {
        m.push(exponents.iter().map(|v| v[j] as i128).collect());
    }
    m.push(vec![1i128; r]);

    let (p, d, q) = snf(&m);
    debug_assert_eq!(mat_mul(&mat_mul(&p, &m), &q), d);

    // With y = Q^{-1} s, the system reads d_i y_i = 0 mod qx, so y_i runs
    // over multiples of qx / gcd(d_i, qx); s = Q y.
    let mut divisors = Vec::with_capacity(r);
    for i in 0..r {
        let di = if i < d.len() { d[i][i].unsigned_abs() as u64 } else { 0 };
        divisors.push(di);
    }
    let mut base: Vec<Vec<u64>> = Vec::new();
    let mut finite_gens: Vec<(Vec<u64>, u64)> = Vec::new();
    for (i, &di) in divisors.iter().enumerate() {
        let order = num_integer::gcd(di, qx); // 0 divisor -> order qx
        let order = if di == 0 { qx } else { order };
        if order == 1 {
            continue;
        }
        let step = qx / order;
        let gen: Vec<u64> = (0..r)
            .map(|k| ((q[k][i] * step as i128).rem_euclid(qx as i128)) as u64)
            .collect();
        if order == qx {
            base.push(gen);
        } else {
            finite_gens.push((gen, order));
        }
    }

    // Enumerate the finite part as coset offsets.
    let mut cosets: Vec<Vec<u64>> = vec![vec![0u64; r]];
    for (gen, order) in &finite_gens {
        let mut next = Vec::with_capacity(cosets.len() * *order as usize);
        for c in &cosets {
            for m in 0..*order {
                let s: Vec<u64> = (0..r).map(|k| (c[k] + gen[k] * m) % qx).collect();
                next.push(s);
            }
        }
        cosets = next;
    }

    let set = CharacterSolutionSet {
        qx,
        base,
        cosets,
        elementary_divisors: divisors,
        exhaustively_verified: false,
    };

    // Every enumerated solution must satisfy the system (cheap, always on).
    let check = |s: &[u64]| -> bool {
        for j in 0..n {
            let mut acc: u128 = 0;
            for i in 0..r {
                acc += (s[i] as u128) * (exponents[i][j] as u128);
            }
            if acc % qx as u128 != 0 {
                return false;
            }
        }
        s.iter().map(|&x| x as u128).sum::<u128>() % qx as u128 == 0
    };
    let listed = set.solutions();
    for s in &listed {
        assert!(check(s), "solver produced a non-solution {s:?}");
    }
    assert_eq!(listed.len() as u64, set.len(), "duplicate solutions");

    // Exhaustive completeness check when the search space is small.
    let space = (qx as f64).powi(r as i32);
    let verified = if space <= 2_000_000.0 {
        let mut count = 0u64;
        let mut s = vec![0u64; r];
        loop {
            if check(&s) {
                count += 1;
            }
            let mut k = 0;
            loop {
                if k == r {
                    break;
                }
                s[k] += 1;
                if s[k] < qx {
                    break;
                }
                s[k] = 0;
                k += 1;
            }
            if s.iter().all(|&x| x == 0) {
                break;
            }
        }
        assert_eq!(count, set.len(), "enumeration disagrees with SNF solver");
        true
    } else {
        false
    };

    Ok(CharacterSolutionSet {
        exhaustively_verified: verified,
        ..set
    })
}

// ---------------------------------------------------------------------------
// Stratified projective count.
// ---------------------------------------------------------------------------

/// Projective point count split by coordinate support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KoblitzBreakdown {
    /// (sorted active coordinates, projective points with that support).
    pub strata: Vec<(Vec<usize>, u64)>,
    /// Points with all coordinates nonzero (the open torus).
    pub torus: u64,
    /// Points on the coordinate hyperplanes (everything else).
    pub boundary: u64,
    /// torus + boundary.
    pub total: u64,
}

/// Total projective point count of a pencil fiber via character sums.
pub fn koblitz_count(
    spec: &PencilSpec,
    psi: u64,
    ctx: &FieldContext,
    table: &GaussSums,
) -> Result<u64> {
    Ok(koblitz_breakdown(spec, psi, ctx, table)?.total)
}

/// Per-stratum projective counts via character sums. Every stratum count
/// is individually certified to round to an integer.
pub fn koblitz_breakdown(
    spec: &PencilSpec,
    psi: u64,
    ctx: &FieldContext,
    table: &GaussSums,
) -> Result<KoblitzBreakdown> {
    let qx = ctx.qx;
    for row in &spec.a_matrix {
        for &e in row {
            if e != 0 && e % qx == 0 {
                return Err(Error::HypothesisViolated {
                    q: ctx.q,
                    detail: format!(
                        "{}: exponent {e} divisible by q-1 = {qx}",
                        spec.label
                    ),
                });
            }
        }
    }

    let def_coeff = spec.deformation_coefficient(psi, ctx);
    let mut strata = Vec::with_capacity(15);
    let mut torus = 0u64;
    let mut boundary = 0u64;
    for mask in 1u32..16 {
        let active: Vec<usize> = (0..4).filter(|&i| mask >> i & 1 == 1).collect();
        // Monomials surviving on this stratum: support inside the active
        // set and a nonzero coefficient.
        let mut mons: Vec<Vec<u64>> = Vec::new();
        let mut dlogs: Vec<u64> = Vec::new();
        for row in &spec.a_matrix {
            if (0..4).all(|i| active.contains(&i) || row[i] == 0) {
                mons.push(active.iter().map(|&i| row[i]).collect());
                dlogs.push(0); // coefficient 1
            }
        }
        if active.len() == 4 && def_coeff != 0 {
            mons.push(vec![1; 4]);
            dlogs.push(ctx.dlog(def_coeff).expect("nonzero"));
        }

        let count = if mons.is_empty() {
            // Empty equation: the whole stratum torus, projectivized.
            qx.pow(active.len() as u32 - 1)
        } else {
            let sols = character_solutions(&mons, qx)?;
            let raw = match table {
                GaussSums::F64(gt) => {
                    stratum_sum(&sols, &dlogs, active.len(), ctx, gt)
                }
                GaussSums::Big(gt) => {
                    stratum_sum(&sols, &dlogs, active.len(), ctx, gt)
                }
            };
            certify_nonneg_integer(raw, 1e-4, &format!("{} stratum {:?}", spec.label, active))?
        };
        if active.len() == 4 {
            torus = count;
        } else {
            boundary += count;
        }
        strata.push((active, count));
    }
    Ok(KoblitzBreakdown {
        strata,
        torus,
        boundary,
        total: torus + boundary,
    })
}

/// Affine torus count divided by q-1 (projective points with full support
/// on the stratum), as a complex number prior to integer certification.
fn stratum_sum<R: Real>(
    sols: &CharacterSolutionSet,
    dlogs: &[u64],
    n_vars: usize,
    ctx: &FieldContext,
    gt: &GaussTable<R>,
) -> (f64, f64) {
    let prec = gt.prec_bits;
    let qx = ctx.qx;
    let r = dlogs.len();
    let scale_exp = n_vars as i64 - r as i64 + 1;

    let listed = sols.solutions();
    let acc = listed
        .par_iter()
        .map(|s| {
            // omega(a)^{-s} phase.
            let mut phase: i64 = 0;
            for (si, &dl) in s.iter().zip(dlogs) {
                phase -= (*si % qx) as i64 * dl as i64;
            }
            let mut term = gt.unit_pow(phase).clone();
            if s.iter().all(|&x| x == 0) {
                // c_0 = (q-1)^{n-r+1} ((q-1)^{r-1} - (-1)^{r-1}) / q.
                let mut f: R = real_int_pow(qx, r as i64 - 1, prec);
                let one = R::one(prec);
                if (r - 1) % 2 == 0 {
                    f = f.sub(&one);
                } else {
                    f = f.add(&one);
                }
                term = term.scale(&f);
            } else {
                for &si in s {
                    term = term.mul(gt.g(si as i64));
                }
            }
            term
        })
        .reduce(|| Cpx::<R>::zero(prec), |a, b| a.add(&b));

    // Common factor (q-1)^{n-r+1} / q, then projectivize by another q-1.
    let factor = real_int_pow::<R>(qx, scale_exp, prec)
        .div(&R::from_f64(ctx.q as f64, prec))
        .div(&R::from_f64(qx as f64, prec));
    acc.scale(&factor).to_f64_pair()
}
