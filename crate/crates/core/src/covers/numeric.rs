//! Numerical identities for double covers and fibrations.

use serde::Serialize;

use crate::lattice::DivisorClass;

/// `chi(O_S) = 2 chi(O_Y) + L(L+K)/2` for the double cover of a rational
/// surface branched on a divisor in `|2L|`.
pub fn double_cover_chi(l: &DivisorClass) -> i64 {
    let k = l.lattice().canonical();
    2 + l.pair(&(l + &k)).expect("same lattice") / 2
}

/// Number of disjoint nodal curves `C_i` in `2L = B0 + sum C_i`.
pub const NUMERI_NODES: i64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NumeriIdentities {
    pub k_b0: i64,
    pub b0_square: i64,
}

/// From `2L = B0 + C_1 + ... + C_10` with `L^2 + KL = -2`, `K^2 + KL = 0`,
/// `C_i^2 = -2`, `K C_i = 0`, `L C_i = -1`:
/// `K B0 = -2K^2`, `B0^2 = 4K^2 - 8 + 2 * NODES`.
pub fn numeri_identities(k2: i64) -> NumeriIdentities {
    let kl = -k2;
    let l2 = -2 - kl;
    NumeriIdentities {
        k_b0: 2 * kl,
        b0_square: 4 * l2 + 4 * NUMERI_NODES - 2 * NUMERI_NODES,
    }
}

/// `(H^2, K H, g(H))` for `H = 2K + B0`.
pub fn hyperplane_invariants(k2: i64, ids: NumeriIdentities) -> (i64, i64, i64) {
    let h2 = 4 * k2 + 4 * ids.k_b0 + ids.b0_square;
    let kh = 2 * k2 + ids.k_b0;
    (h2, kh, (h2 + kh) / 2 + 1)
}

/// Invariants of an unramified double cover.
pub fn etale_double(chi: i64, k2: i64) -> (i64, i64) {
    (2 * chi, 2 * k2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SlopeCheck {
    pub bound: i64,
    pub margin: i64,
    pub holds: bool,
}

/// `K^2 >= 8 (g(C) - 1)(g(F) - 1)` for a fibration over a curve `C` of genus >= 2.
pub fn slope_check(k2: i64, g_base: i64, g_fibre: i64) -> SlopeCheck {
    assert!(g_base >= 2 && g_fibre >= 2, "slope inequality needs genera >= 2");
    let bound = 8 * (g_base - 1) * (g_fibre - 1);
    SlopeCheck {
        bound,
        margin: k2 - bound,
        holds: k2 >= bound,
    }
}
