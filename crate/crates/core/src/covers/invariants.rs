use serde::Serialize;

use super::{BidoubleData, Component, CoverError};
use crate::geometry::{h0_class, PointConfiguration};
use crate::lattice::{arithmetic_genus, DivisorClass};

/// `chi`, `K^2`, `p_g` of the (possibly non-minimal) cover `X`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverInvariants {
    pub chi: i64,
    #[serde(rename = "K2_cover")]
    pub k2_cover: i64,
    pub pg: i64,
    /// `h^0(K + L_i)`, `i = 1, 2, 3`.
    pub adjoint_h0: [usize; 3],
}

/// Over a rational base: `chi(X) = 4 + sum L_i(L_i+K)/2`,
/// `p_g(X) = sum h^0(K + L_i)`, `K_X^2 = (2K + D)^2`.
pub fn bidouble_invariants(bd: &BidoubleData, cfg: &PointConfiguration) -> Result<CoverInvariants, CoverError> {
    bd.validate()?;
    bd.check_configuration(cfg)?;
    let k = bd.lattice().canonical();
    let mut chi = 4;
    let mut adjoint_h0 = [0; 3];
    for i in 1..=3u8 {
        let l = bd.line_bundle(i);
        chi += l.pair(&(&l + &k))? / 2;
        adjoint_h0[usize::from(i) - 1] = h0_class(cfg, &(&k + &l))?;
    }
    let m = &(2 * &k) + &bd.total_branch();
    Ok(CoverInvariants {
        chi,
        k2_cover: m.square(),
        pg: adjoint_h0.iter().sum::<usize>() as i64,
        adjoint_h0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum PreimageShape {
    /// Two disjoint copies of the curve.
    Split { genus: i64, square: i64 },
    /// A double cover of the curve branched at `branch_degree` points.
    Irreducible { genus: i64, square: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Preimage {
    pub component: String,
    pub branch: u8,
    /// `Gamma . 2L_i`: points where `Gamma` meets the other two branch divisors.
    pub branch_degree: i64,
    pub shape: PreimageShape,
    /// Smooth rational `(-1)`-curves in the preimage.
    pub contractions: u32,
}

/// Reduced preimage in `X` of a branch component `Gamma` of `D_i`.
pub fn branch_preimage(component: &Component, bd: &BidoubleData) -> Result<Preimage, CoverError> {
    assert!(component.is_branched(), "{} is not a branch component", component.name);
    let gamma = &component.class;
    let b = gamma.pair(&(2 * &bd.line_bundle(component.branch)))?;
    if b % 2 != 0 {
        return Err(CoverError::OddBranchDegree {
            name: component.name.clone(),
            degree: b,
        });
    }
    let g = arithmetic_genus(gamma)?;
    let sq = gamma.square();
    let (shape, contractions) = if b == 0 {
        if sq % 2 != 0 {
            return Err(CoverError::OddSplitSquare {
                name: component.name.clone(),
                square: sq,
            });
        }
        let square = sq / 2;
        let c = if g == 0 && square == -1 { 2 } else { 0 };
        (PreimageShape::Split { genus: g, square }, c)
    } else {
        // Riemann-Hurwitz for the double cover of Gamma; pi^*Gamma = 2 Gamma~
        let genus = 2 * g - 1 + b / 2;
        let c = u32::from(genus == 0 && sq == -1);
        (PreimageShape::Irreducible { genus, square: sq }, c)
    };
    Ok(Preimage {
        component: component.name.clone(),
        branch: component.branch,
        branch_degree: b,
        shape,
        contractions,
    })
}

/// Preimages of all branch components and the number of `(-1)`-curves among them.
pub fn contractions(bd: &BidoubleData) -> Result<(Vec<Preimage>, u32), CoverError> {
    let pre = bd
        .branch_components()
        .map(|c| branch_preimage(c, bd))
        .collect::<Result<Vec<_>, _>>()?;
    let total = pre.iter().map(|p| p.contractions).sum();
    Ok((pre, total))
}

/// Eigenspace decomposition of `H^0(2K_X) = H^0(M) + sum_i H^0(M - L_i)`,
/// `M = 2K + D`, where `Z/2 x Z/2` acts on the `i`-th summand by `chi_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bicanonical {
    pub invariant: usize,
    pub characters: [usize; 3],
    /// Size of the common kernel of the characters that occur.
    pub degree: u32,
    /// The involution `gamma_i` when the kernel has order 2.
    pub involution: Option<u8>,
}

impl Bicanonical {
    pub fn total(&self) -> usize {
        self.invariant + self.characters.iter().sum::<usize>()
    }
}

/// The degree assumes the invariant summand maps the base birationally.
pub fn bicanonical_eigenspaces(bd: &BidoubleData, cfg: &PointConfiguration) -> Result<Bicanonical, CoverError> {
    bd.validate()?;
    bd.check_configuration(cfg)?;
    let k = bd.lattice().canonical();
    let m = &(2 * &k) + &bd.total_branch();
    let invariant = h0_class(cfg, &m)?;
    let mut characters = [0; 3];
    for i in 1..=3u8 {
        characters[usize::from(i) - 1] = h0_class(cfg, &(&m - &bd.line_bundle(i)))?;
    }
    let occurring: Vec<u8> = (1..=3u8).filter(|&i| characters[usize::from(i) - 1] > 0).collect();
    // ker chi_i = {1, gamma_i}; two distinct kernels meet trivially
    let (degree, involution) = match occurring.as_slice() {
        [] => (4, None),
        [i] => (2, Some(*i)),
        _ => (1, None),
    };
    Ok(Bicanonical {
        invariant,
        characters,
        degree,
        involution,
    })
}

/// [`bicanonical_eigenspaces`], checked against `P_2 = chi + K^2`.
pub fn bicanonical_decomposition(
    bd: &BidoubleData,
    cfg: &PointConfiguration,
    expected_p2: i64,
) -> Result<Bicanonical, CoverError> {
    let out = bicanonical_eigenspaces(bd, cfg)?;
    if out.total() as i64 != expected_p2 {
        return Err(CoverError::PluriGenusMismatch {
            total: out.total(),
            expected: expected_p2,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub chi: i64,
    #[serde(rename = "K2_cover")]
    pub k2_cover: i64,
    pub pg: i64,
    pub q: i64,
    pub contractions: u32,
    #[serde(rename = "K2_minimal")]
    pub k2_minimal: i64,
    pub double_fibres: Option<usize>,
    pub bicanonical_degree: u32,
    pub involution_index: Option<u8>,
}

impl InvariantReport {
    /// Runs the whole pipeline; double fibres are counted when a pencil is given.
    pub fn compute(
        bd: &BidoubleData,
        cfg: &PointConfiguration,
        pencil: Option<&DivisorClass>,
        depth: u32,
    ) -> Result<Self, CoverError> {
        let inv = bidouble_invariants(bd, cfg)?;
        let (_, contractions) = contractions(bd)?;
        let k2_minimal = inv.k2_cover + i64::from(contractions);
        let bican = bicanonical_decomposition(bd, cfg, inv.chi + k2_minimal)?;
        let double_fibres = pencil
            .map(|p| super::count_double_fibres(bd, p, cfg, depth).map(|c| c.double))
            .transpose()?;
        Ok(Self {
            chi: inv.chi,
            k2_cover: inv.k2_cover,
            pg: inv.pg,
            q: inv.pg + 1 - inv.chi,
            contractions,
            k2_minimal,
            double_fibres,
            bicanonical_degree: bican.degree,
            involution_index: bican.involution,
        })
    }

    /// `P_2 = chi + K^2` of the minimal model.
    pub fn p2(&self) -> i64 {
        self.chi + self.k2_minimal
    }
}
