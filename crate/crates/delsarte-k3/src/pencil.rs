//! Catalog of the ten Delsarte quartic pencils and the exhaustive
//! point-count oracle.
//!
//! Each pencil is the projective family
//!
//! ```text
//!     X_psi : F_A(x) - dT * psi * x0 x1 x2 x3 = 0   in P^3,
//! ```
//!
//! where F_A is the invertible Delsarte quartic with exponent matrix A
//! (one monomial per row, coefficients 1) and dT is the sum of the dual
//! weights. The ten exponent matrices are the full classification of
//! smooth quartic Delsarte surfaces: Fermat/loop/chain building blocks
//! F_k, L_k, C_k combined to total degree 4.
//!
//! [`brute_force_count`] enumerates all of P^3(F_q) and is deliberately
//! unsophisticated: it is the ground truth every other counting routine
//! in this crate is measured against.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::FieldContext;

/// Static description of one Delsarte quartic pencil.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PencilSpec {
    /// Catalog label, e.g. "C4" or "L2F2".
    pub label: &'static str,
    /// Exponent matrix: row j holds the exponents of the j-th monomial.
    pub a_matrix: [[u64; 4]; 4],
    /// Deformation constant dT (sum of the dual weights).
    pub d_t: u64,
    /// Dual weights of the transposed polynomial.
    pub dual_weights: [u64; 4],
    /// Primes where the family degenerates or characters misbehave.
    pub bad_primes: &'static [u64],
    /// Symmetry group of the pencil (finite abelian), as a descriptor.
    pub symmetry: &'static str,
}

/// The full catalog: five "diamond" pencils with dual weights (1,1,1,1)
/// and the five chain-type pencils with nontrivial dual weights.
pub const PENCILS: [PencilSpec; 10] = [
    PencilSpec {
        label: "F4",
        a_matrix: [[4, 0, 0, 0], [0, 4, 0, 0], [0, 0, 4, 0], [0, 0, 0, 4]],
        d_t: 4,
        dual_weights: [1, 1, 1, 1],
        bad_primes: &[2],
        symmetry: "(Z/4Z)^2",
    },
    PencilSpec {
        label: "L3F1",
        a_matrix: [[3, 1, 0, 0], [0, 3, 1, 0], [1, 0, 3, 0], [0, 0, 0, 4]],
        d_t: 4,
        dual_weights: [1, 1, 1, 1],
        bad_primes: &[2, 7],
        symmetry: "Z/7Z",
    },
    PencilSpec {
        label: "L2F2",
        a_matrix: [[3, 1, 0, 0], [1, 3, 0, 0], [0, 0, 4, 0], [0, 0, 0, 4]],
        d_t: 4,
        dual_weights: [1, 1, 1, 1],
        bad_primes: &[2],
        symmetry: "Z/8Z",
    },
    PencilSpec {
        label: "L2L2",
        a_matrix: [[3, 1, 0, 0], [1, 3, 0, 0], [0, 0, 3, 1], [0, 0, 1, 3]],
        d_t: 4,
        dual_weights: [1, 1, 1, 1],
        bad_primes: &[2],
        symmetry: "Z/4Z x Z/2Z",
    },
    PencilSpec {
        label: "L4",
        a_matrix: [[3, 1, 0, 0], [0, 3, 1, 0], [0, 0, 3, 1], [1, 0, 0, 3]],
        d_t: 4,
        dual_weights: [1, 1, 1, 1],
        bad_primes: &[2, 5],
        symmetry: "Z/5Z",
    },
    PencilSpec {
        label: "C2F2",
        a_matrix: [[3, 1, 0, 0], [0, 4, 0, 0], [0, 0, 4, 0], [0, 0, 0, 4]],
        d_t: 12,
        dual_weights: [4, 2, 3, 3],
        bad_primes: &[2, 3],
        symmetry: "Z/4Z",
    },
    PencilSpec {
        label: "C2L2",
        a_matrix: [[3, 1, 0, 0], [0, 4, 0, 0], [0, 0, 3, 1], [0, 0, 1, 3]],
        d_t: 12,
        dual_weights: [4, 2, 3, 3],
        bad_primes: &[2, 3],
        symmetry: "Z/2Z",
    },
    PencilSpec {
        label: "C2C2",
        a_matrix: [[3, 1, 0, 0], [0, 4, 0, 0], [0, 0, 3, 1], [0, 0, 0, 4]],
        d_t: 6,
        dual_weights: [2, 1, 2, 1],
        bad_primes: &[2, 3],
        symmetry: "Z/6Z",
    },
    PencilSpec {
        label: "C3F1",
        a_matrix: [[3, 1, 0, 0], [0, 3, 1, 0], [0, 0, 4, 0], [0, 0, 0, 4]],
        d_t: 36,
        dual_weights: [12, 8, 7, 9],
        bad_primes: &[2, 3, 7],
        symmetry: "trivial",
    },
    PencilSpec {
        label: "C4",
        a_matrix: [[3, 1, 0, 0], [0, 3, 1, 0], [0, 0, 3, 1], [0, 0, 0, 4]],
        d_t: 27,
        dual_weights: [9, 6, 7, 5],
        bad_primes: &[2, 3, 5, 7],
        symmetry: "trivial",
    },
];

/// Look up a pencil by label.
pub fn get_pencil(label: &str) -> Result<&'static PencilSpec> {
    PENCILS
        .iter()
        .find(|p| p.label == label)
        .ok_or_else(|| Error::UnknownPencil(label.to_string()))
}

/// The five chain-type labels with published closed-form counts.
pub const CHAIN_LABELS: [&str; 5] = ["C4", "C2F2", "C3F1", "C2L2", "C2C2"];

impl PencilSpec {
    /// Coefficient of the deformation monomial x0 x1 x2 x3 at a given psi,
    /// namely -dT * psi, as a field element.
    pub fn deformation_coefficient(&self, psi: u64, ctx: &FieldContext) -> u64 {
        ctx.mul(ctx.embed_int(-(self.d_t as i64)), psi)
    }

    /// Evaluate the pencil polynomial at a projective representative.
    pub fn evaluate(&self, x: [u64; 4], psi: u64, ctx: &FieldContext) -> u64 {
        let mut acc = 0u64;
        for row in &self.a_matrix {
            let mut m = 1u64;
            for (xi, &e) in x.iter().zip(row) {
                if e > 0 {
                    m = ctx.mul(m, ctx.pow(*xi, e));
                }
            }
            acc = ctx.add(acc, m);
        }
        let mut def = self.deformation_coefficient(psi, ctx);
        for xi in x {
            def = ctx.mul(def, xi);
        }
        ctx.add(acc, def)
    }
}

/// Count the projective points of the pencil fiber at psi over F_q by
/// enumerating P^3(F_q) in affine shells (x3 = 1; then x3 = 0, x2 = 1;
/// then x3 = x2 = 0, x1 = 1; then the point (1:0:0:0)).
///
/// Cost is q^3 polynomial evaluations, capped at q <= 2000.
pub fn brute_force_count(spec: &PencilSpec, psi: u64, ctx: &FieldContext) -> Result<u64> {
    if ctx.q > 2000 {
        return Err(Error::InvalidArgument(format!(
            "exhaustive count over F_{} exceeds the q <= 2000 work cap",
            ctx.q
        )));
    }
    let q = ctx.q;

    // x^e for every element and exponent up to 4.
    let pow: Vec<[u64; 5]> = (0..q)
        .map(|x| {
            let mut row = [1u64; 5];
            for e in 1..5 {
                row[e] = ctx.mul(row[e - 1], x);
            }
            row
        })
        .collect();
    let def_coeff = spec.deformation_coefficient(psi, ctx);
    let eval = |x: [u64; 4]| -> u64 {
        let mut acc = 0u64;
        for row in &spec.a_matrix {
            let mut m = 1u64;
            for i in 0..4 {
                m = ctx.mul(m, pow[x[i] as usize][row[i] as usize]);
            }
            acc = ctx.add(acc, m);
        }
        let mut def = def_coeff;
        for xi in x {
            def = ctx.mul(def, xi);
        }
        ctx.add(acc, def)
    };

    let shell3: u64 = (0..q)
        .into_par_iter()
        .map(|x0| {
            let mut local = 0u64;
            for x1 in 0..q {
                for x2 in 0..q {
                    if eval([x0, x1, x2, 1]) == 0 {
                        local += 1;
                    }
                }
            }
            local
        })
        .sum();
    let mut total = shell3;
    for x0 in 0..q {
        for x1 in 0..q {
            if eval([x0, x1, 1, 0]) == 0 {
                total += 1;
            }
        }
    }
    for x0 in 0..q {
        if eval([x0, 1, 0, 0]) == 0 {
            total += 1;
        }
    }
    if eval([1, 0, 0, 0]) == 0 {
        total += 1;
    }
    Ok(total)
}
