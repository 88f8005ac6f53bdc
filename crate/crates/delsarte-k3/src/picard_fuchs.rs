//! Hypergeometric differential-equation parameters for the chain pencils.
//!
//! The periods of each pencil fiber satisfy a hypergeometric ordinary
//! differential equation in the deformation parameter. This module derives
//! the parameter data two independent ways and cross-checks them:
//!
//! * [`gahrs_parameters`] builds the holomorphic-form pair directly from the
//!   dual weights: alpha = {j/d : 0 <= j < d}, beta = union of
//!   {j/l_i : 0 <= j < l_i}, with the common part cancelled and the series
//!   argument M^-1 psi^-d, M = prod l_i^(l_i).
//! * [`lattice_points`] enumerates the exponent vectors b in the half-open
//!   parallelepiped spanned by the monomial rows whose entries are positive
//!   and sum to a multiple of 4; [`as_parameters`] turns each such b into a
//!   parameter pair through a Pochhammer quotient followed by a reflection
//!   that moves the expansion point to infinity.
//!
//! The two routes agree at b = (1,1,1,1). Away from that point the induced
//! pair is *not* constant on symmetry orbits, so the catalog pins one
//! designated representative per character class ([`Orbit::representative`]);
//! those are the published rows. [`series_coefficients`] and [`ode_residual`]
//! verify each row in exact rational arithmetic: the truncated series must
//! be annihilated by the hypergeometric operator
//! `D = (Th + b_1 - 1)...(Th + b_s - 1) - x (Th + a_1)...(Th + a_r)`
//! where `Th = x d/dx` acts on `x^n` as multiplication by `n`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::pencil::PencilSpec;

/// One character class of lattice points together with its published row.
#[derive(Debug, Clone)]
pub struct Orbit {
    /// Value of the diagonal symmetry character shared by all members.
    pub character: u64,
    /// Lattice points with this character, in enumeration order.
    pub members: Vec<[u64; 4]>,
    /// The member whose induced parameters are the published row for this
    /// class. Parameters vary across an orbit, so the choice is catalog data.
    pub representative: [u64; 4],
    /// Sign (+1 or -1) attached to the series argument of the published row.
    pub t_sign: i64,
}

/// Exponent-lattice data for one family: the monomial matrix, its dual
/// weights, the solution lattice points, and their character partition.
#[derive(Debug, Clone)]
pub struct LatticeData {
    /// Family label.
    pub label: &'static str,
    /// Monomial exponent rows a_1..a_4.
    pub a_matrix: [[u64; 4]; 4],
    /// Dual weights l_1..l_4.
    pub ell: [u64; 4],
    /// Total degree d = l_1 + ... + l_4 of the deforming monomial.
    pub ell0: u64,
    /// Order of the diagonal symmetry group acting on monomials.
    pub group_order: u64,
    /// Character weights: b maps to (sum_i weights_i * b_i) mod group_order.
    pub weights: [u64; 4],
    /// All lattice points b = sum v_j a_j with v_j in [0,1), entries
    /// positive, and sum(b) divisible by 4.
    pub points: Vec<[u64; 4]>,
    /// Partition of `points` by character value, ascending.
    pub orbits: Vec<Orbit>,
}

/// Parameter pair of a hypergeometric differential equation, normalized at
/// infinity, together with its series argument and solution prefactor.
#[derive(Debug, Clone, PartialEq)]
pub struct PFParams {
    /// Numerator parameters, sorted, each in (0, 1].
    pub alpha: Vec<BigRational>,
    /// Denominator parameters, sorted, each in (0, 1].
    pub beta: Vec<BigRational>,
    /// Signed rational c such that the series argument is c * psi^t_exponent.
    pub t_constant: BigRational,
    /// Exponent of psi in the series argument; equals -(ell0).
    pub t_exponent: i64,
    /// Exponent of the psi-prefactor carried by the solution.
    pub leading_power: BigRational,
}

/// Per-family symmetry data and designated representatives.
///
/// `rows` maps each character value to the lattice point whose induced
/// parameters form the published row, plus the printed sign of its series
/// argument.
struct SymmetryTable {
    group_order: u64,
    weights: [u64; 4],
    rows: &'static [(u64, [u64; 4], i64)],
}

fn symmetry_table(label: &str) -> Option<SymmetryTable> {
    let t = match label {
        "C4" => SymmetryTable {
            group_order: 1,
            weights: [0, 0, 0, 0],
            rows: &[(0, [1, 1, 1, 1], 1)],
        },
        "C3F1" => SymmetryTable {
            group_order: 1,
            weights: [0, 0, 0, 0],
            rows: &[(0, [1, 1, 1, 1], 1)],
        },
        "C2F2" => SymmetryTable {
            group_order: 4,
            weights: [0, 0, 1, 3],
            rows: &[
                (0, [1, 1, 1, 1], 1),
                (1, [2, 3, 2, 1], -1),
                (2, [1, 3, 1, 3], 1),
                (3, [1, 4, 1, 2], -1),
            ],
        },
        "C2L2" => SymmetryTable {
            group_order: 2,
            weights: [0, 0, 1, 1],
            rows: &[(0, [1, 1, 1, 1], 1), (1, [2, 3, 1, 2], 1)],
        },
        "C2C2" => SymmetryTable {
            group_order: 6,
            weights: [4, 0, 5, 3],
            rows: &[
                (0, [1, 1, 1, 1], 1),
                (1, [2, 1, 1, 4], 1),
                (2, [1, 1, 2, 4], 1),
                (3, [2, 1, 2, 3], 1),
                (4, [2, 2, 1, 3], 1),
                (5, [1, 2, 2, 3], 1),
            ],
        },
        _ => return None,
    };
    Some(t)
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Solve b = sum_j v_j a_j exactly (the a_j are the rows of `a_matrix`).
fn solve_combination(
    a_matrix: &[[u64; 4]; 4],
    b: [u64; 4],
    label: &str,
) -> Result<Vec<BigRational>> {
    // m[i][j] = a_matrix[j][i]; column 4 holds b.
    let mut m: Vec<Vec<BigRational>> = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| big(a_matrix[j][i] as i64))
                .chain(std::iter::once(big(b[i] as i64)))
                .collect()
        })
        .collect();
    for c in 0..4 {
        let pivot = (c..4).find(|&r| !m[r][c].is_zero()).ok_or_else(|| {
            Error::SingularMatrix(label.to_string())
        })?;
        m.swap(c, pivot);
        let pv = m[c][c].clone();
        for x in m[c].iter_mut() {
            *x /= &pv;
        }
        for r in 0..4 {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in 0..5 {
                    let sub = &f * &m[c][j];
                    m[r][j] -= sub;
                }
            }
        }
    }
    Ok((0..4).map(|i| m[i][4].clone()).collect())
}

fn character_of(weights: &[u64; 4], group_order: u64, b: &[u64; 4]) -> u64 {
    if group_order <= 1 {
        return 0;
    }
    let mut acc = 0u64;
    for i in 0..4 {
        acc = (acc + weights[i] * b[i]) % group_order;
    }
    acc
}

/// Enumerate the solution lattice of a chain family and partition it by
/// symmetry character.
///
/// Candidates b run over the integer box 1 <= b_i <= (i-th column sum of the
/// exponent matrix); b is kept when sum(b) is divisible by 4 and the exact
/// solution of b = sum v_j a_j has every v_j in [0, 1).
pub fn lattice_points(spec: &PencilSpec) -> Result<LatticeData> {
    let table = symmetry_table(spec.label).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "no symmetry character table for family {:?}; lattice data covers the chain families only",
            spec.label
        ))
    })?;
    let a = &spec.a_matrix;
    let colmax: Vec<u64> = (0..4).map(|i| (0..4).map(|j| a[j][i]).sum()).collect();

    let one = BigRational::one();
    let mut points: Vec<[u64; 4]> = Vec::new();
    for b0 in 1..=colmax[0] {
        for b1 in 1..=colmax[1] {
            for b2 in 1..=colmax[2] {
                for b3 in 1..=colmax[3] {
                    if (b0 + b1 + b2 + b3) % 4 != 0 {
                        continue;
                    }
                    let b = [b0, b1, b2, b3];
                    let v = solve_combination(a, b, spec.label)?;
                    if v.iter().all(|x| !x.is_negative() && *x < one) {
                        points.push(b);
                    }
                }
            }
        }
    }

    let mut orbits: Vec<Orbit> = table
        .rows
        .iter()
        .map(|&(character, representative, t_sign)| Orbit {
            character,
            members: Vec::new(),
            representative,
            t_sign,
        })
        .collect();
    for &b in &points {
        let ch = character_of(&table.weights, table.group_order, &b);
        let orbit = orbits
            .iter_mut()
            .find(|o| o.character == ch)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "lattice point {b:?} of {} has uncataloged character {ch}",
                    spec.label
                ))
            })?;
        orbit.members.push(b);
    }
    for orbit in &orbits {
        if !orbit.members.contains(&orbit.representative) {
            return Err(Error::InvalidArgument(format!(
                "designated representative {:?} missing from character class {} of {}",
                orbit.representative, orbit.character, spec.label
            )));
        }
    }

    Ok(LatticeData {
        label: spec.label,
        a_matrix: spec.a_matrix,
        ell: spec.dual_weights,
        ell0: spec.d_t,
        group_order: table.group_order,
        weights: table.weights,
        points,
        orbits,
    })
}

fn add_count(map: &mut BTreeMap<BigRational, u64>, key: BigRational) {
    *map.entry(key).or_insert(0) += 1;
}

/// Remove the multiset intersection from both sides, one-for-one.
fn cancel_common(num: &mut BTreeMap<BigRational, u64>, den: &mut BTreeMap<BigRational, u64>) {
    let shared: Vec<BigRational> = num
        .keys()
        .filter(|k| den.contains_key(*k))
        .cloned()
        .collect();
    for k in shared {
        let m = (*num.get(&k).unwrap()).min(*den.get(&k).unwrap());
        for side in [&mut *num, &mut *den] {
            let e = side.get_mut(&k).unwrap();
            *e -= m;
            if *e == 0 {
                side.remove(&k);
            }
        }
    }
}

fn expand_sorted(map: &BTreeMap<BigRational, u64>) -> Vec<BigRational> {
    let mut out = Vec::new();
    for (k, &mult) in map {
        for _ in 0..mult {
            out.push(k.clone());
        }
    }
    out
}

/// Reduce x mod 1 into (0, 1]: the fractional part, with 0 mapped to 1.
fn into_unit_interval(x: &BigRational) -> BigRational {
    let f = x - x.floor();
    if f.is_zero() {
        BigRational::one()
    } else {
        f
    }
}

/// 1 / prod_i l_i^(l_i): the positive constant of the series argument.
fn series_argument_constant(ell: &[u64; 4]) -> BigRational {
    let mut m = BigInt::one();
    for &l in ell {
        m *= BigInt::from(l).pow(l as u32);
    }
    BigRational::new(BigInt::one(), m)
}

/// Differential-equation parameters induced by one lattice point.
///
/// The raw pair collects the numerator values (v_j + k)/l_j for 0 <= k < l_j
/// against the denominator values k/d for 1 <= k <= d, cancels the common
/// part, and then reflects the expansion to infinity: with a_1 the smallest
/// raw numerator value,
///
/// ```text
/// alpha = { 1 - b_i + a_1 }   beta = { a_1 - a_i + 1 }   (mod 1, into (0,1])
/// ```
///
/// The solution carries a psi-prefactor of exponent d * a_1, and the series
/// argument is sign * M^-1 * psi^-d with the sign taken from the character
/// class of b.
pub fn as_parameters(data: &LatticeData, b: [u64; 4]) -> Result<PFParams> {
    if !data.points.contains(&b) {
        return Err(Error::NotABasisPoint {
            family: data.label.to_string(),
            point: b.iter().map(|&x| x as i64).collect(),
        });
    }
    let v = solve_combination(&data.a_matrix, b, data.label)?;

    let mut num: BTreeMap<BigRational, u64> = BTreeMap::new();
    for (j, &lj) in data.ell.iter().enumerate() {
        for k in 0..lj {
            add_count(&mut num, (&v[j] + big(k as i64)) / big(lj as i64));
        }
    }
    let mut den: BTreeMap<BigRational, u64> = BTreeMap::new();
    for k in 1..=data.ell0 {
        add_count(&mut den, big(k as i64) / big(data.ell0 as i64));
    }
    cancel_common(&mut num, &mut den);
    let alpha_raw = expand_sorted(&num);
    let beta_raw = expand_sorted(&den);
    debug_assert_eq!(alpha_raw.len(), beta_raw.len());
    let a1 = alpha_raw
        .first()
        .cloned()
        .ok_or_else(|| Error::InvalidArgument("parameter lists cancelled to nothing".into()))?;

    let one = BigRational::one();
    let mut alpha: Vec<BigRational> = beta_raw
        .iter()
        .map(|bi| into_unit_interval(&(&one - bi + &a1)))
        .collect();
    let mut beta: Vec<BigRational> = alpha_raw
        .iter()
        .map(|ai| into_unit_interval(&(&a1 - ai + &one)))
        .collect();
    alpha.sort();
    beta.sort();

    let ch = character_of(&data.weights, data.group_order, &b);
    let sign = data
        .orbits
        .iter()
        .find(|o| o.character == ch)
        .map(|o| o.t_sign)
        .unwrap_or(1);
    let t_constant = series_argument_constant(&data.ell) * big(sign);

    Ok(PFParams {
        alpha,
        beta,
        t_constant,
        t_exponent: -(data.ell0 as i64),
        leading_power: big(data.ell0 as i64) * a1,
    })
}

/// Holomorphic-form parameters straight from the dual weights.
///
/// alpha collects {j/d : 0 <= j < d}, beta collects {j/l_i : 0 <= j < l_i}
/// over the four weights; the common part is cancelled one-for-one and the
/// leftover zeros on the beta side become 1. The series argument is
/// M^-1 psi^-d with M = prod l_i^(l_i). Agrees with [`as_parameters`] at
/// b = (1,1,1,1) for every chain family.
pub fn gahrs_parameters(spec: &PencilSpec) -> Result<PFParams> {
    let d = spec.d_t;
    let mut num: BTreeMap<BigRational, u64> = BTreeMap::new();
    for j in 0..d {
        add_count(&mut num, big(j as i64) / big(d as i64));
    }
    let mut den: BTreeMap<BigRational, u64> = BTreeMap::new();
    for &l in &spec.dual_weights {
        for j in 0..l {
            add_count(&mut den, big(j as i64) / big(l as i64));
        }
    }
    cancel_common(&mut num, &mut den);
    let alpha_raw = expand_sorted(&num);
    let beta_raw = expand_sorted(&den);
    debug_assert_eq!(alpha_raw.len(), beta_raw.len());
    let a1 = alpha_raw
        .first()
        .cloned()
        .ok_or_else(|| Error::InvalidArgument("parameter lists cancelled to nothing".into()))?;

    // Values already lie in [0, 1); only the zeros need the 0 -> 1 overflow.
    let lift = |x: &BigRational| {
        if x.is_zero() {
            BigRational::one()
        } else {
            x.clone()
        }
    };
    let mut alpha: Vec<BigRational> = alpha_raw.iter().map(lift).collect();
    let mut beta: Vec<BigRational> = beta_raw.iter().map(lift).collect();
    alpha.sort();
    beta.sort();

    Ok(PFParams {
        alpha,
        beta,
        t_constant: series_argument_constant(&spec.dual_weights),
        t_exponent: -(d as i64),
        leading_power: big(d as i64) * a1,
    })
}

/// Exact coefficients c_0..c_order of the hypergeometric series
/// sum_n ( prod_i (a_i)_n / prod_i (b_i)_n ) x^n, with (y)_n the rising
/// factorial y (y+1) ... (y+n-1).
pub fn series_coefficients(params: &PFParams, order: usize) -> Result<Vec<BigRational>> {
    let mut out = Vec::with_capacity(order + 1);
    let mut c = BigRational::one();
    out.push(c.clone());
    for n in 1..=order {
        let shift = big(n as i64 - 1);
        let mut ratio = BigRational::one();
        for a in &params.alpha {
            ratio *= a + &shift;
        }
        for b in &params.beta {
            let factor = b + &shift;
            if factor.is_zero() {
                return Err(Error::PolePosition(n));
            }
            ratio /= factor;
        }
        c *= ratio;
        out.push(c.clone());
    }
    Ok(out)
}

/// Apply the hypergeometric operator to a truncated series, exactly.
///
/// For f = sum_n c_n x^n the operator
/// `(Th + b_1 - 1)...(Th + b_s - 1) - x (Th + a_1)...(Th + a_r)`
/// produces coefficient
/// `c_n prod_i (n + b_i - 1) - c_(n-1) prod_i (n - 1 + a_i)` on x^n.
/// Returns those residual coefficients for n = 0..len(coeffs)-1; a series
/// solving the equation yields the zero vector.
pub fn ode_residual(params: &PFParams, coeffs: &[BigRational]) -> Vec<BigRational> {
    let one = BigRational::one();
    let mut out = Vec::with_capacity(coeffs.len());
    for (n, cn) in coeffs.iter().enumerate() {
        let nn = big(n as i64);
        let mut lead = cn.clone();
        for b in &params.beta {
            lead *= &nn + b - &one;
        }
        if n > 0 {
            let mut drag = coeffs[n - 1].clone();
            for a in &params.alpha {
                drag *= &nn + a - &one;
            }
            lead -= drag;
        }
        out.push(lead);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pencil::{get_pencil, CHAIN_LABELS};

    fn fr(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn frs(pairs: &[(i64, i64)]) -> Vec<BigRational> {
        pairs.iter().map(|&(n, d)| fr(n, d)).collect()
    }

    fn chain_lattice(label: &str) -> LatticeData {
        lattice_points(get_pencil(label).unwrap()).unwrap()
    }

    #[test]
    fn lattice_enumeration_matches_catalog_sizes() {
        let expected = [("C4", 18), ("C3F1", 18), ("C2F2", 18), ("C2L2", 14), ("C2C2", 16)];
        for (label, size) in expected {
            let data = chain_lattice(label);
            assert_eq!(data.points.len(), size, "family {label}");
            for b in &data.points {
                assert_eq!(b.iter().sum::<u64>() % 4, 0);
                assert!(b.iter().all(|&x| x >= 1));
                let v = solve_combination(&data.a_matrix, *b, label).unwrap();
                assert!(v.iter().all(|x| !x.is_negative() && *x < BigRational::one()));
            }
        }
        let c4 = chain_lattice("C4");
        assert!(c4.points.contains(&[1, 1, 1, 1]));
        assert!(c4.points.contains(&[2, 3, 3, 4]));
    }

    #[test]
    fn orbit_partition_by_character() {
        for label in CHAIN_LABELS {
            let data = chain_lattice(label);
            let total: usize = data.orbits.iter().map(|o| o.members.len()).sum();
            assert_eq!(total, data.points.len(), "family {label}");
            for orbit in &data.orbits {
                assert!(orbit.members.contains(&orbit.representative));
                for b in &orbit.members {
                    assert_eq!(
                        character_of(&data.weights, data.group_order, b),
                        orbit.character
                    );
                }
            }
        }
        let sizes = |label: &str| -> Vec<usize> {
            let mut s: Vec<usize> = chain_lattice(label)
                .orbits
                .iter()
                .map(|o| o.members.len())
                .collect();
            s.sort_unstable();
            s
        };
        assert_eq!(sizes("C2F2"), vec![4, 4, 4, 6]);
        assert_eq!(sizes("C2L2"), vec![6, 8]);
        assert_eq!(sizes("C2C2"), vec![2, 2, 2, 2, 4, 4]);
    }

    /// Every published parameter row, reproduced exactly from its designated
    /// representative: sorted fractions, prefactor exponent, argument sign.
    #[test]
    fn published_rows_from_designated_representatives() {
        struct Row {
            family: &'static str,
            character: u64,
            alpha: Vec<BigRational>,
            beta: Vec<BigRational>,
            lead: BigRational,
            sign: i64,
        }
        let rows = vec![
            Row {
                family: "C4",
                character: 0,
                alpha: (1..27).filter(|k| k % 3 != 0).map(|k| fr(k, 27)).collect(),
                beta: frs(&[
                    (1, 7), (1, 6), (1, 5), (2, 7), (1, 3), (2, 5), (3, 7), (1, 2), (4, 7),
                    (3, 5), (2, 3), (5, 7), (4, 5), (5, 6), (6, 7), (1, 1), (1, 1), (1, 1),
                ]),
                lead: fr(1, 1),
                sign: 1,
            },
            Row {
                family: "C3F1",
                character: 0,
                alpha: frs(&[
                    (1, 36), (1, 18), (5, 36), (7, 36), (5, 18), (11, 36), (13, 36), (7, 18),
                    (17, 36), (19, 36), (11, 18), (23, 36), (25, 36), (13, 18), (29, 36),
                    (31, 36), (17, 18), (35, 36),
                ]),
                beta: frs(&[
                    (1, 8), (1, 7), (1, 4), (2, 7), (1, 3), (3, 8), (3, 7), (1, 2), (4, 7),
                    (5, 8), (2, 3), (5, 7), (3, 4), (6, 7), (7, 8), (1, 1), (1, 1), (1, 1),
                ]),
                lead: fr(1, 1),
                sign: 1,
            },
            Row {
                family: "C2F2",
                character: 0,
                alpha: frs(&[(1, 12), (1, 6), (5, 12), (7, 12), (5, 6), (11, 12)]),
                beta: frs(&[(1, 3), (1, 2), (2, 3), (1, 1), (1, 1), (1, 1)]),
                lead: fr(1, 1),
                sign: 1,
            },
            Row {
                family: "C2F2",
                character: 1,
                alpha: frs(&[(1, 6), (7, 12), (5, 6), (11, 12)]),
                beta: frs(&[(3, 8), (3, 4), (7, 8), (1, 1)]),
                lead: fr(2, 1),
                sign: -1,
            },
            Row {
                family: "C2F2",
                character: 2,
                alpha: frs(&[(1, 12), (5, 12), (7, 12), (11, 12)]),
                beta: frs(&[(1, 4), (1, 2), (3, 4), (1, 1)]),
                lead: fr(1, 1),
                sign: 1,
            },
            Row {
                family: "C2F2",
                character: 3,
                alpha: frs(&[(1, 12), (1, 6), (5, 12), (5, 6)]),
                beta: frs(&[(1, 8), (1, 4), (5, 8), (1, 1)]),
                lead: fr(1, 1),
                sign: -1,
            },
            Row {
                family: "C2L2",
                character: 0,
                alpha: frs(&[(1, 12), (1, 6), (5, 12), (7, 12), (5, 6), (11, 12)]),
                beta: frs(&[(1, 3), (1, 2), (2, 3), (1, 1), (1, 1), (1, 1)]),
                lead: fr(1, 1),
                sign: 1,
            },
            Row {
                family: "C2L2",
                character: 1,
                alpha: frs(&[
                    (1, 24), (5, 24), (7, 24), (11, 24), (13, 24), (17, 24), (19, 24), (23, 24),
                ]),
                beta: frs(&[(1, 6), (1, 4), (1, 3), (1, 2), (2, 3), (3, 4), (5, 6), (1, 1)]),
                lead: fr(1, 2),
                sign: 1,
            },
            Row {
                family: "C2C2",
                character: 0,
                alpha: frs(&[(1, 6), (1, 3), (2, 3), (5, 6)]),
                beta: frs(&[(1, 2), (1, 1), (1, 1), (1, 1)]),
                lead: fr(1, 1),
                sign: 1,
            },
            Row {
                family: "C2C2",
                character: 1,
                alpha: frs(&[(1, 12), (7, 12)]),
                beta: frs(&[(1, 6), (1, 1)]),
                lead: fr(1, 2),
                sign: 1,
            },
            Row {
                family: "C2C2",
                character: 2,
                alpha: frs(&[(1, 6), (2, 3)]),
                beta: frs(&[(1, 3), (1, 1)]),
                lead: fr(1, 1),
                sign: 1,
            },
            Row {
                family: "C2C2",
                character: 3,
                alpha: frs(&[(1, 12), (5, 12), (7, 12), (11, 12)]),
                beta: frs(&[(1, 4), (1, 2), (3, 4), (1, 1)]),
                lead: fr(1, 2),
                sign: 1,
            },
            Row {
                family: "C2C2",
                character: 4,
                alpha: frs(&[(1, 3), (5, 6)]),
                beta: frs(&[(2, 3), (1, 1)]),
                lead: fr(2, 1),
                sign: 1,
            },
            Row {
                family: "C2C2",
                character: 5,
                alpha: frs(&[(5, 12), (11, 12)]),
                beta: frs(&[(5, 6), (1, 1)]),
                lead: fr(5, 2),
                sign: 1,
            },
        ];

        for row in rows {
            let data = chain_lattice(row.family);
            let orbit = data
                .orbits
                .iter()
                .find(|o| o.character == row.character)
                .unwrap();
            let params = as_parameters(&data, orbit.representative).unwrap();
            let tag = format!("{} character {}", row.family, row.character);
            assert_eq!(params.alpha, row.alpha, "{tag} alpha");
            assert_eq!(params.beta, row.beta, "{tag} beta");
            assert_eq!(params.leading_power, row.lead, "{tag} prefactor");
            assert_eq!(params.t_exponent, -(data.ell0 as i64), "{tag} exponent");
            let expected_t =
                series_argument_constant(&data.ell) * big(row.sign);
            assert_eq!(params.t_constant, expected_t, "{tag} argument constant");
            assert_eq!(orbit.t_sign, row.sign, "{tag} sign");
        }
    }

    #[test]
    fn holomorphic_form_parameters_agree_with_lattice_route() {
        for label in CHAIN_LABELS {
            let spec = get_pencil(label).unwrap();
            let direct = gahrs_parameters(spec).unwrap();
            let data = chain_lattice(label);
            let via_lattice = as_parameters(&data, [1, 1, 1, 1]).unwrap();
            assert_eq!(direct.alpha, via_lattice.alpha, "family {label}");
            assert_eq!(direct.beta, via_lattice.beta, "family {label}");
            assert_eq!(direct.t_constant, via_lattice.t_constant);
            assert_eq!(direct.t_exponent, via_lattice.t_exponent);
            assert_eq!(direct.leading_power, via_lattice.leading_power);
        }
        // Weights (1,1,1,1) collapse the pair to the classical quartic one.
        let fermat = gahrs_parameters(get_pencil("F4").unwrap()).unwrap();
        assert_eq!(fermat.alpha, frs(&[(1, 4), (1, 2), (3, 4)]));
        assert_eq!(fermat.beta, frs(&[(1, 1), (1, 1), (1, 1)]));
        assert_eq!(fermat.t_constant, fr(1, 1));
        assert_eq!(fermat.t_exponent, -4);
    }

    /// The series-argument constant from the dual weights equals the
    /// t-parameter constant used by the counting formulas.
    #[test]
    fn series_argument_constant_matches_counting_normalization() {
        for label in CHAIN_LABELS {
            let spec = get_pencil(label).unwrap();
            assert_eq!(
                series_argument_constant(&spec.dual_weights),
                crate::closed::t_constant(label).unwrap(),
                "family {label}"
            );
        }
    }

    /// Parameters are *not* an orbit invariant: two members of the same
    /// character class can induce different pairs. The designated
    /// representative, not the class, fixes the published row.
    #[test]
    fn orbit_members_need_not_share_parameters() {
        let c2c2 = chain_lattice("C2C2");
        let rep = as_parameters(&c2c2, [2, 1, 2, 3]).unwrap();
        let other = as_parameters(&c2c2, [1, 2, 1, 4]).unwrap();
        let ch = |b: &[u64; 4]| character_of(&c2c2.weights, c2c2.group_order, b);
        assert_eq!(ch(&[2, 1, 2, 3]), ch(&[1, 2, 1, 4]));
        assert_eq!(other.alpha, frs(&[(1, 6), (1, 3), (2, 3), (5, 6)]));
        assert_ne!(rep.alpha, other.alpha);
        assert_eq!(rep.beta, other.beta);

        let c2f2 = chain_lattice("C2F2");
        let rep = as_parameters(&c2f2, [2, 3, 2, 1]).unwrap();
        let other = as_parameters(&c2f2, [1, 2, 3, 2]).unwrap();
        let ch = |b: &[u64; 4]| character_of(&c2f2.weights, c2f2.group_order, b);
        assert_eq!(ch(&[2, 3, 2, 1]), ch(&[1, 2, 3, 2]));
        assert_eq!(rep.leading_power, fr(2, 1));
        assert_eq!(other.leading_power, fr(5, 2));
    }

    #[test]
    fn series_coefficients_match_rising_factorials() {
        let half = PFParams {
            alpha: vec![fr(1, 2)],
            beta: vec![fr(1, 1)],
            t_constant: fr(1, 1),
            t_exponent: -1,
            leading_power: fr(0, 1),
        };
        let c = series_coefficients(&half, 3).unwrap();
        assert_eq!(c[0], fr(1, 1));
        assert_eq!(c[1], fr(1, 2));
        assert_eq!(c[2], fr(3, 8));

        let hol = gahrs_parameters(get_pencil("C4").unwrap()).unwrap();
        let c = series_coefficients(&hol, 1).unwrap();
        let mut expected = BigRational::one();
        for a in &hol.alpha {
            expected *= a;
        }
        for b in &hol.beta {
            expected /= b;
        }
        assert_eq!(c[1], expected);
    }

    /// Every published row solves its own differential equation exactly
    /// through order 25; a perturbed parameter breaks it (negative control).
    #[test]
    fn operator_annihilates_every_published_row() {
        for label in CHAIN_LABELS {
            let data = chain_lattice(label);
            for orbit in &data.orbits {
                let params = as_parameters(&data, orbit.representative).unwrap();
                let coeffs = series_coefficients(&params, 25).unwrap();
                let residual = ode_residual(&params, &coeffs);
                assert!(
                    residual.iter().all(|r| r.is_zero()),
                    "{label} character {} residual nonzero",
                    orbit.character
                );
            }
        }
        let data = chain_lattice("C2C2");
        let params = as_parameters(&data, [1, 1, 1, 1]).unwrap();
        let coeffs = series_coefficients(&params, 25).unwrap();
        let mut perturbed = params.clone();
        perturbed.alpha[0] += fr(1, 100);
        let residual = ode_residual(&perturbed, &coeffs);
        assert!(residual.iter().any(|r| !r.is_zero()));
    }

    #[test]
    fn rejects_invalid_requests() {
        let data = chain_lattice("C4");
        let err = as_parameters(&data, [1, 1, 1, 2]).unwrap_err();
        assert!(matches!(err, Error::NotABasisPoint { .. }));

        let err = lattice_points(get_pencil("F4").unwrap()).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));

        let poisoned = PFParams {
            alpha: vec![fr(1, 2)],
            beta: vec![fr(0, 1)],
            t_constant: fr(1, 1),
            t_exponent: -1,
            leading_power: fr(0, 1),
        };
        assert_eq!(
            series_coefficients(&poisoned, 3).unwrap_err(),
            Error::PolePosition(1)
        );
    }
}
