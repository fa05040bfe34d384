//! Plane curves with assigned multiplicities, by exact interpolation.
//!
//! A point of multiplicity `m` imposes the vanishing of every partial
//! derivative of order `m - 1`; by Euler's formula this is equivalent to the
//! vanishing of all derivatives of order `< m` and gives `m(m+1)/2` rows.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::config::{PointConfiguration, ProjectivePoint};
use super::GeometryError;
use crate::lattice::DivisorClass;
use crate::linalg::rank_over_q;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FatPointSystem {
    pub degree: u32,
    /// `(point index, multiplicity)`, 1-based indices, multiplicity >= 1.
    pub assignments: Vec<(usize, u32)>,
}

impl FatPointSystem {
    pub fn new(degree: u32, assignments: Vec<(usize, u32)>) -> Self {
        Self {
            degree,
            assignments,
        }
    }

    /// `(d+1)(d+2)/2`.
    pub fn ambient_dimension(&self) -> usize {
        let d = self.degree as usize;
        (d + 1) * (d + 2) / 2
    }

    pub fn condition_count(&self) -> usize {
        self.assignments
            .iter()
            .map(|&(_, m)| (m as usize) * (m as usize + 1) / 2)
            .sum()
    }

    /// `max(0, ambient - conditions)`.
    pub fn expected_dimension(&self) -> usize {
        self.ambient_dimension().saturating_sub(self.condition_count())
    }

    /// Constraint matrix over the monomials of degree `d`.
    pub fn constraint_rows(&self, points: &[ProjectivePoint]) -> Vec<Vec<BigInt>> {
        let monos = monomials(self.degree);
        let mut rows = Vec::with_capacity(self.condition_count());
        for &(i, m) in &self.assignments {
            let p = points[i - 1].big_coords();
            // order-k partials vanishing forces all lower orders (Euler) when k <= d;
            // above d they vanish identically, so order d stands in for them
            for alpha in monomials((m - 1).min(self.degree)) {
                rows.push(monos.iter().map(|mono| derivative_at(*mono, alpha, &p)).collect());
            }
        }
        rows
    }
}

/// Exponent triples of degree `d`, in a fixed order.
fn monomials(d: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::with_capacity(((d + 1) * (d + 2) / 2) as usize);
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            out.push([a, b, d - a - b]);
        }
    }
    out
}

/// `d^alpha (x^mono)` evaluated at `p`.
fn derivative_at(mono: [u32; 3], alpha: [u32; 3], p: &[BigInt; 3]) -> BigInt {
    let mut acc = BigInt::one();
    for k in 0..3 {
        let (e, a) = (mono[k], alpha[k]);
        if a > e {
            return BigInt::zero();
        }
        let falling: u64 = ((e - a + 1)..=e).map(u64::from).product();
        acc *= BigInt::from(falling) * num_traits::pow(p[k].clone(), (e - a) as usize);
    }
    acc
}

/// Rows for "the conic passes through each point".
pub(crate) fn conic_rows(points: &[ProjectivePoint]) -> Vec<Vec<BigInt>> {
    let monos = monomials(2);
    points
        .iter()
        .map(|p| {
            let c = p.big_coords();
            monos.iter().map(|m| derivative_at(*m, [0, 0, 0], &c)).collect()
        })
        .collect()
}

/// Dimension of the space of degree-`d` forms with the assigned multiplicities.
pub fn h0_fat_points(points: &[ProjectivePoint], sys: &FatPointSystem) -> usize {
    let total = sys.ambient_dimension();
    let rows = sys.constraint_rows(points);
    if rows.is_empty() {
        return total;
    }
    total - rank_over_q(rows)
}

/// `d*l - sum m_i e_i` as an interpolation problem; needs `d >= 0`, `m_i >= 0`.
pub fn class_to_system(
    cfg: &PointConfiguration,
    class: &DivisorClass,
) -> Result<FatPointSystem, GeometryError> {
    if class.n() != cfg.len() {
        return Err(GeometryError::LatticeMismatch {
            config: cfg.len(),
            class: class.n(),
        });
    }
    let degree = u32::try_from(class.degree()).map_err(|_| GeometryError::NegativeDegree(class.clone()))?;
    let mut assignments = Vec::new();
    for (i, &m) in class.mults().iter().enumerate() {
        match m {
            0 => {}
            m if m < 0 => {
                return Err(GeometryError::NegativeMultiplicity {
                    point: i + 1,
                    mult: m,
                })
            }
            m => assignments.push((i + 1, m as u32)),
        }
    }
    Ok(FatPointSystem::new(degree, assignments))
}

/// `h^0` of a class on the blown-up plane.
///
/// Rigid catalogue curves `C` with `C.D < 0` are fixed components and are
/// peeled off (`D -> D - C`) until none remains; the residue has
/// non-negative multiplicities and is handed to [`h0_fat_points`].
pub fn h0_class(cfg: &PointConfiguration, class: &DivisorClass) -> Result<usize, GeometryError> {
    let (residue, _) = remove_fixed_part(cfg, class)?;
    let Some(residue) = residue else {
        return Ok(0);
    };
    let sys = class_to_system(cfg, &residue)?;
    Ok(h0_fat_points(cfg.points(), &sys))
}

/// Peels rigid fixed components; `None` if the degree goes negative (empty
/// system). Also returns the removed curves, by catalogue name.
pub fn remove_fixed_part(
    cfg: &PointConfiguration,
    class: &DivisorClass,
) -> Result<(Option<DivisorClass>, Vec<String>), GeometryError> {
    if class.n() != cfg.len() {
        return Err(GeometryError::LatticeMismatch {
            config: cfg.len(),
            class: class.n(),
        });
    }
    let n = cfg.len();
    let abs_mults: i64 = class.mults().iter().map(|m| m.abs()).sum();
    let budget = abs_mults as usize + (class.degree().max(0) as usize + 1) * (n + 1) + 1;
    let mut d = class.clone();
    let mut removed = Vec::new();
    loop {
        if d.degree() < 0 {
            return Ok((None, removed));
        }
        let fixed = cfg
            .catalogue()
            .rigid()
            .find(|c| c.class.pair(&d).expect("same lattice") < 0);
        let Some(curve) = fixed else {
            break;
        };
        if removed.len() >= budget {
            return Err(GeometryError::CatalogueGap {
                class: class.clone(),
                budget,
            });
        }
        d = &d - &curve.class;
        removed.push(curve.name.clone());
    }
    Ok((Some(d), removed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::BlowupLattice;

    fn seven() -> PointConfiguration {
        PointConfiguration::standard_quadrilateral(true, None)
    }

    fn sys(d: u32, a: &[(usize, u32)]) -> FatPointSystem {
        FatPointSystem::new(d, a.to_vec())
    }

    #[test]
    fn monomial_count() {
        assert_eq!(monomials(0), vec![[0, 0, 0]]);
        assert_eq!(monomials(3).len(), 10);
    }

    #[test]
    fn condition_rows() {
        let s = sys(4, &[(1, 1), (2, 2), (4, 3)]);
        assert_eq!(s.condition_count(), 1 + 3 + 6);
        assert_eq!(s.constraint_rows(seven().points()).len(), 10);
    }

    #[test]
    fn interpolation_examples() {
        let cfg = seven();
        let pts = cfg.points();
        // line through P1, P2, P3
        assert_eq!(h0_fat_points(pts, &sys(1, &[(1, 1), (2, 1), (3, 1)])), 0);
        // 2l - e2 - 2e4 - e5 - e6
        assert_eq!(h0_fat_points(pts, &sys(2, &[(2, 1), (4, 2), (5, 1), (6, 1)])), 0);
        // -K' + f1
        let double = [(1, 1), (2, 2), (3, 1), (4, 2), (5, 2), (6, 2), (7, 1)];
        assert_eq!(h0_fat_points(pts, &sys(5, &double)), 6);
        // K' + L2
        assert_eq!(h0_fat_points(pts, &sys(4, &double)), 0);
        assert_eq!(h0_fat_points(pts, &sys(3, &[])), 10);
        // P2, P4, P7 collinear: one line
        assert_eq!(h0_fat_points(pts, &sys(1, &[(2, 1), (4, 1), (7, 1)])), 1);
    }

    #[test]
    fn class_translation() {
        let cfg = PointConfiguration::standard_quadrilateral(false, None);
        let lat = cfg.lattice();
        let c = lat.class(2, &[1, 0, 1, 0, 1, 1]);
        assert_eq!(
            class_to_system(&cfg, &c).unwrap(),
            sys(2, &[(1, 1), (3, 1), (5, 1), (6, 1)])
        );
        let anti = -lat.canonical();
        assert_eq!(
            class_to_system(&cfg, &anti).unwrap(),
            sys(3, &(1..=6).map(|i| (i, 1)).collect::<Vec<_>>())
        );
        let bad = lat.class(2, &[0, 0, 0, -1]);
        assert_eq!(
            class_to_system(&cfg, &bad),
            Err(GeometryError::NegativeMultiplicity { point: 4, mult: -1 })
        );
        assert!(class_to_system(&cfg, &BlowupLattice::new(3).line()).is_err());
    }

    #[test]
    fn h0_class_examples() {
        let cfg = seven();
        let lat = cfg.lattice();
        // M - L1 = e4 + Delta2bar + S1 + S2 + S3 + S4
        let m_l1 = lat.class(5, &[2, 3, 2, 2, 2, 2, 1]);
        assert_eq!(h0_class(&cfg, &m_l1), Ok(1));
        let (_, removed) = remove_fixed_part(&cfg, &m_l1).unwrap();
        let mut removed = removed;
        removed.sort();
        assert_eq!(removed, vec!["Delta2bar", "S1", "S2", "S3", "S4", "e4"]);
        // -K' + f1
        let anti_f1 = lat.class(5, &[1, 2, 1, 2, 2, 2, 1]);
        assert_eq!(h0_class(&cfg, &anti_f1), Ok(6));
        assert!(remove_fixed_part(&cfg, &anti_f1).unwrap().1.is_empty());
        // M - L2 and M - L3
        assert_eq!(h0_class(&cfg, &lat.class(3, &[1, 2, 1, 2, 1, 1, 0])), Ok(0));
        assert_eq!(h0_class(&cfg, &lat.class(6, &[1, 3, 1, 4, 3, 3, 1])), Ok(0));
    }

    #[test]
    fn h0_class_small_cases() {
        let cfg = seven();
        let lat = cfg.lattice();
        assert_eq!(h0_class(&cfg, &lat.zero()), Ok(1));
        assert_eq!(h0_class(&cfg, &lat.exceptional(3)), Ok(1));
        assert_eq!(h0_class(&cfg, &(2 * lat.exceptional(3))), Ok(1));
        assert_eq!(h0_class(&cfg, &-lat.line()), Ok(0));
        assert_eq!(h0_class(&cfg, &-lat.exceptional(2)), Ok(0));
        assert_eq!(h0_class(&cfg, &lat.line()), Ok(3));
    }

    #[test]
    fn multiplicity_above_degree_kills_everything() {
        let pts = PointConfiguration::general(2, 3);
        assert_eq!(h0_fat_points(pts.points(), &sys(1, &[(1, 3)])), 0);
        assert_eq!(h0_fat_points(pts.points(), &sys(2, &[(1, 5)])), 0);
        assert_eq!(h0_fat_points(pts.points(), &sys(2, &[(1, 2)])), 3);
    }
}
