//! The three quadrilateral examples and the `(1,1,1)` degeneration of the
//! first, assembled from catalogue curves.

use crate::covers::{BidoubleData, Component, CoverError, InvariantReport};
use crate::geometry::PointConfiguration;
use crate::lattice::DivisorClass;

/// Components per member for pencil decompositions.
pub const FIBRE_SEARCH_DEPTH: u32 = 8;

#[derive(Debug, Clone)]
pub struct Construction {
    pub name: &'static str,
    pub cfg: PointConfiguration,
    pub data: BidoubleData,
    pub pencil: DivisorClass,
}

impl Construction {
    pub fn report(&self) -> Result<InvariantReport, CoverError> {
        InvariantReport::compute(&self.data, &self.cfg, Some(&self.pencil), FIBRE_SEARCH_DEPTH)
    }
}

fn components(cfg: &PointConfiguration, table: &[(&str, &str, u8)]) -> Vec<Component> {
    table.iter()
        .map(|&(name, curve, branch)| Component::new(name, cfg.catalogue().class(curve), branch))
        .collect()
}

/// Branch curves on the six-point plane; `f1'` is a second member of `|f1|`.
pub fn example1() -> Construction {
    let cfg = PointConfiguration::standard_quadrilateral(false, None);
    let lat = cfg.lattice();
    let comps = components(
        &cfg,
        &[
            ("Delta1", "Delta1", 1),
            ("f2", "f2", 1),
            ("S1", "S1", 1),
            ("S2", "S2", 1),
            ("Delta2", "Delta2", 2),
            ("f3", "f3", 2),
            ("Delta3", "Delta3", 3),
            ("f1", "f1", 3),
            ("f1'", "f1", 3),
            ("S3", "S3", 3),
            ("S4", "S4", 3),
        ],
    );
    let l1 = lat.class(5, &[1, 2, 1, 3, 2, 2]);
    let l2 = lat.class(6, &[2, 2, 2, 2, 3, 3]);
    let data = BidoubleData::new(lat, comps, l1, l2).expect("example 1 components");
    let pencil = cfg.catalogue().class("f1");
    Construction {
        name: "example1",
        cfg,
        data,
        pencil,
    }
}

/// Example 1 with `f1`, `f2`, `f3` through a general point drawn from `seed`.
pub fn example1_degenerate(seed: u64) -> Result<Construction, CoverError> {
    let base = example1();
    let cfg = PointConfiguration::standard_quadrilateral(false, Some(seed));
    let data = base.data.resolve_111(&cfg, ["f2", "f3", "f1"])?;
    let pencil = cfg.catalogue().class("f1");
    Ok(Construction {
        name: "example1-degenerate",
        cfg,
        data,
        pencil,
    })
}

/// The seven-point plane; `C` is a general member of `|f2 + f3 - 2e7|`.
pub fn example2() -> Construction {
    let cfg = PointConfiguration::standard_quadrilateral(true, None);
    let lat = cfg.lattice();
    let mut comps = vec![Component::new("C", curve_c(&cfg), 1)];
    comps.extend(components(
        &cfg,
        &[
            ("S1", "S1", 1),
            ("S2", "S2", 1),
            ("f3", "f3", 2),
            ("f1", "f1", 3),
            ("f1'", "f1", 3),
            ("Delta2bar", "Delta2bar", 3),
            ("Delta3bar", "Delta3bar", 3),
            ("S3", "S3", 3),
            ("S4", "S4", 3),
        ],
    ));
    let l1 = lat.class(5, &[1, 2, 1, 3, 2, 2, 1]);
    let l2 = lat.class(7, &[2, 3, 2, 3, 3, 3, 2]);
    let data = BidoubleData::new(lat, comps, l1, l2).expect("example 2 components");
    let pencil = cfg.catalogue().class("f1");
    Construction {
        name: "example2",
        cfg,
        data,
        pencil,
    }
}

/// Normalization of the specialization of example 2 with `Delta2bar` in `D2`;
/// `L1`, `L2` are derived by halving.
pub fn example3() -> Construction {
    let cfg = PointConfiguration::standard_quadrilateral(true, None);
    let lat = cfg.lattice();
    let mut comps = vec![Component::new("C", curve_c(&cfg), 1)];
    comps.extend(components(
        &cfg,
        &[
            ("Delta2bar", "Delta2bar", 1),
            ("S1", "S1", 1),
            ("S2", "S2", 1),
            ("Delta1", "Delta1", 2),
            ("e7", "e7", 2),
            ("f1", "f1", 3),
            ("f1'", "f1", 3),
            ("Delta3bar", "Delta3bar", 3),
            ("S3", "S3", 3),
            ("S4", "S4", 3),
        ],
    ));
    let data = BidoubleData::with_derived_line_bundles(lat, comps).expect("example 3 halves");
    let pencil = cfg.catalogue().class("f1");
    Construction {
        name: "example3",
        cfg,
        data,
        pencil,
    }
}

/// `f2 + f3 - 2e7`.
fn curve_c(cfg: &PointConfiguration) -> DivisorClass {
    let cat = cfg.catalogue();
    let e7 = cat.class("e7");
    &(&cat.class("f2") + &cat.class("f3")) - &(2 * &e7)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_c_class() {
        let cfg = PointConfiguration::standard_quadrilateral(true, None);
        let c = curve_c(&cfg);
        assert_eq!(c, cfg.lattice().class(4, &[2, 1, 2, 1, 1, 1, 2]));
        assert_eq!(c.square(), 0);
        assert_eq!(crate::lattice::arithmetic_genus(&c).unwrap(), 0);
    }
}
