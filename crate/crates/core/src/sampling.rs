//! Deterministic random nilpotent matrices.
//!
//! Every consumer derives an independent ChaCha stream from `(seed, index)`
//! so results do not depend on thread count or evaluation order.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::matrix::SmallMatrix;
use crate::scalar;
use crate::tuple::NilTuple;

pub type SampleRng = ChaCha8Rng;

/// Default entry range `[-3, 3]`.
pub const DEFAULT_RANGE: i64 = 3;

/// Stream `index` of the generator seeded by `seed`.
pub fn stream(seed: u64, index: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Strictly upper triangular integer matrix with entries in `[-range, range]`.
pub fn random_strict_upper(rng: &mut impl Rng, size: usize, range: i64) -> SmallMatrix {
    let mut m = SmallMatrix::zero(size).expect("valid size");
    for i in 0..size {
        for j in i + 1..size {
            m.set(i, j, scalar::int(rng.gen_range(-range..=range)));
        }
    }
    m
}

/// Integer matrix of determinant ±1 built from `ops` random elementary
/// row operations, together with its (integer) inverse.
pub fn random_unimodular(
    rng: &mut impl Rng,
    size: usize,
    range: i64,
    ops: usize,
) -> (SmallMatrix, SmallMatrix) {
    let mut g = SmallMatrix::identity(size).expect("valid size");
    let mut g_inv = g.clone();
    for _ in 0..ops {
        let i = rng.gen_range(0..size);
        let mut j = rng.gen_range(0..size - 1);
        if j >= i {
            j += 1;
        }
        if rng.gen_ratio(1, 5) {
            // row swap: E g, and g⁻¹ E (E is its own inverse)
            for c in 0..size {
                let (x, y) = (g.get(i, c).clone(), g.get(j, c).clone());
                g.set(i, c, y);
                g.set(j, c, x);
                let (x, y) = (g_inv.get(c, i).clone(), g_inv.get(c, j).clone());
                g_inv.set(c, i, y);
                g_inv.set(c, j, x);
            }
        } else {
            let mut c = 0;
            while c == 0 {
                c = rng.gen_range(-range..=range);
            }
            let c = scalar::int(c);
            // row_i += c·row_j on g; column_j -= c·column_i on g⁻¹
            for k in 0..size {
                let v = g.get(i, k) + &c * g.get(j, k);
                g.set(i, k, v);
                let v = g_inv.get(k, j) - &c * g_inv.get(k, i);
                g_inv.set(k, j, v);
            }
        }
    }
    (g, g_inv)
}

/// `g N g⁻¹` with `N` strictly upper triangular and `g` unimodular.
pub fn random_nilpotent_with(
    rng: &mut impl Rng,
    size: usize,
    range: i64,
    ops: usize,
) -> SmallMatrix {
    let n = random_strict_upper(rng, size, range);
    let (g, g_inv) = random_unimodular(rng, size, range, ops);
    &(&g * &n) * &g_inv
}

/// Generic random nilpotent matrix (entry range `[-3, 3]`, `3·size` row operations).
pub fn random_nilpotent(rng: &mut impl Rng, size: usize) -> SmallMatrix {
    random_nilpotent_with(rng, size, DEFAULT_RANGE, 3 * size)
}

/// `d` independently conjugated random nilpotent matrices.
pub fn random_tuple(rng: &mut impl Rng, size: usize, d: usize) -> NilTuple {
    let mats = (0..d).map(|_| random_nilpotent(rng, size)).collect();
    NilTuple::new(size, mats).expect("nilpotent by construction")
}

/// Random invertible integer matrix for conjugation tests.
pub fn random_invertible(rng: &mut impl Rng, size: usize) -> SmallMatrix {
    random_unimodular(rng, size, DEFAULT_RANGE, 3 * size).0
}
