//! Randomized invariant checks over the arithmetic kernels: discrete-log
//! multiplicativity, Galois invariance of Gauss sums, additive-character
//! reconstruction, multiplicity invariance of twisted triples under unit
//! scaling, Smith-normal-form witnesses, character-system solution sets,
//! and the coefficient/series round trip.

use proptest::prelude::*;

use delsarte_k3::field::make_field;
use delsarte_k3::gauss::gauss_table;
use delsarte_k3::hyp::gamma_triple;
use delsarte_k3::koblitz::{character_solutions, mat_mul, snf};
use delsarte_k3::l_series::{coeffs_from_series, series_from_coeffs};
use delsarte_k3::numeric::Precision;

/// Small field shapes that keep every case under a millisecond.
fn field_shape() -> impl Strategy<Value = (u64, u32)> {
    prop::sample::select(vec![
        (5u64, 1u32),
        (7, 1),
        (11, 1),
        (13, 1),
        (17, 1),
        (3, 2),
        (5, 2),
    ])
}

fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    let mut acc = 0i128;
    for j in 0..n {
        let minor: Vec<Vec<i128>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        acc += sign * m[0][j] * det(&minor);
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn discrete_log_is_multiplicative((p, u) in field_shape(), i in 1u64..200, j in 1u64..200) {
        let ctx = make_field(p, u).unwrap();
        let a = 1 + i % (ctx.q - 1);
        let b = 1 + j % (ctx.q - 1);
        let la = ctx.dlog(a).unwrap();
        let lb = ctx.dlog(b).unwrap();
        let lab = ctx.dlog(ctx.mul(a, b)).unwrap();
        prop_assert_eq!(lab, (la + lb) % ctx.qx);
    }

    #[test]
    fn gauss_sums_are_galois_invariant((p, u) in field_shape(), m in 0i64..500) {
        let ctx = make_field(p, u).unwrap();
        let table = gauss_table(&ctx, Precision::Bits53).unwrap();
        let m = m % ctx.qx as i64;
        let (ar, ai) = table.g_f64(m);
        let (br, bi) = table.g_f64(m * p as i64);
        let drift = ((ar - br).powi(2) + (ai - bi).powi(2)).sqrt();
        prop_assert!(drift < 1e-9 * (ctx.q as f64).sqrt(), "drift {}", drift);
    }

    #[test]
    fn additive_character_reconstructs_from_gauss_sums((p, u) in field_shape(), x in 0u64..500) {
        let ctx = make_field(p, u).unwrap();
        let table = gauss_table(&ctx, Precision::Bits53).unwrap();
        let x = 1 + x % (ctx.q - 1);
        let residual = table.theta_reconstruction_residual(&ctx, x);
        prop_assert!(residual < 1e-8, "residual {}", residual);
    }

    #[test]
    fn twisted_multiplicities_are_invariant_under_unit_scaling(
        which in 0usize..3,
        k_raw in 1u64..48,
        m in 0i64..48,
    ) {
        let (gamma, delta, n): (Vec<i64>, Vec<i64>, u64) = match which {
            0 => (vec![4, 2, 3, 3, -12, 1, -1], vec![0, -1, 0, 1, 0, 0, 0], 4),
            1 => (vec![2, 1, 2, 1, -6], vec![0, 0, 1, -1, 0], 3),
            _ => (vec![2, 1, 2, 1, -6], vec![3, 0, 1, -1, 3], 6),
        };
        let qx = 24u64; // divisible by every supported character order here
        let k = 1 + 2 * (k_raw % 12); // odd, hence coprime to 24
        prop_assume!(k % 3 != 0);
        let tri = gamma_triple(&gamma, &delta, n).unwrap();
        let scaled: Vec<i64> = delta.iter().map(|d| d * k as i64).collect();
        let tri_k = gamma_triple(&gamma, &scaled, n).unwrap();
        let m = m % qx as i64;
        prop_assert_eq!(
            tri.s_delta(m, qx),
            tri_k.s_delta((k as i64 * m) % qx as i64, qx)
        );
    }

    #[test]
    fn smith_normal_form_produces_unimodular_witnesses(
        a in prop::collection::vec(prop::collection::vec(-6i128..=6, 3), 3),
    ) {
        let (p, d, q) = snf(&a);
        prop_assert_eq!(det(&p).abs(), 1);
        prop_assert_eq!(det(&q).abs(), 1);
        let lhs = mat_mul(&mat_mul(&p, &a), &q);
        prop_assert_eq!(&lhs, &d);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    prop_assert_eq!(d[i][j], 0);
                }
            }
        }
        for i in 0..2 {
            if d[i][i] != 0 && d[i + 1][i + 1] != 0 {
                prop_assert_eq!(d[i + 1][i + 1] % d[i][i], 0);
            }
            if d[i][i] == 0 {
                prop_assert_eq!(d[i + 1][i + 1], 0);
            }
        }
    }

    #[test]
    fn character_solution_sets_solve_the_system(
        exponents in prop::collection::vec(prop::collection::vec(0u64..5, 3), 2..4),
        qx in prop::sample::select(vec![4u64, 6, 8, 12]),
    ) {
        // Exponent lists violating the solver's divisibility hypotheses are
        // rejected up front; only accepted systems carry the invariant.
        let set = match character_solutions(&exponents, qx) {
            Ok(set) => set,
            Err(_) => return Ok(()),
        };
        let r = exponents.len();
        let valid = |s: &[u64]| -> bool {
            for j in 0..3 {
                let total: u64 = (0..r).map(|i| s[i] * exponents[i][j]).sum();
                if total % qx != 0 {
                    return false;
                }
            }
            s.iter().sum::<u64>() % qx == 0
        };
        let listed = set.solutions();
        for s in &listed {
            prop_assert!(valid(s), "spurious solution {:?}", s);
        }
        prop_assert_eq!(listed.len() as u64, set.len());

        // Exhaustive cross-count over (Z/qx)^r.
        let mut count = 0u64;
        let mut s = vec![0u64; r];
        loop {
            if valid(&s) {
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
            if s.iter().all(|&v| v == 0) {
                break;
            }
        }
        prop_assert_eq!(count, set.len());
    }

    #[test]
    fn coefficient_series_round_trip(
        a in prop::collection::vec(-100.0f64..100.0, 0..6),
    ) {
        let series = series_from_coeffs(&a);
        prop_assert_eq!(series[0], 1.0);
        let back = coeffs_from_series(&series);
        prop_assert_eq!(back.len(), a.len());
        for (x, y) in a.iter().zip(&back) {
            prop_assert!((x - y).abs() < 1e-6 * (1.0 + x.abs()), "{} vs {}", x, y);
        }
    }
}
