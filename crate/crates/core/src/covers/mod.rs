//! Building data of `Z/2 x Z/2` covers of a blown-up plane and the
//! invariants of the covering surface.
//!
//! The cover is determined by three reduced branch divisors `D1, D2, D3` and
//! classes `L1, L2` with `2 L1 = D2 + D3`, `2 L2 = D1 + D3`; then
//! `L3 := L1 + L2 - D3` satisfies `2 L3 = D1 + D2`. The index `i` of `Di`
//! also names the involution `gamma_i` and the character `chi_i`.

mod fibres;
mod invariants;
mod numeric;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{GeometryError, PointConfiguration};
use crate::lattice::{BlowupLattice, DivisorClass, LatticeError};

pub use fibres::{count_double_fibres, fibre_multiplicity, FibreComponent, FibreCount, FibreMember};
pub use invariants::{
    bicanonical_decomposition, bicanonical_eigenspaces, bidouble_invariants, branch_preimage, contractions, Bicanonical,
    CoverInvariants, InvariantReport, Preimage, PreimageShape,
};
pub use numeric::{
    double_cover_chi, etale_double, hyperplane_invariants, numeri_identities, slope_check,
    NumeriIdentities, SlopeCheck, NUMERI_NODES,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("building data violates {}", describe(.0))]
    RelationFailure(Vec<RelationResidue>),
    #[error("component {0:?} is listed twice")]
    DuplicateComponent(String),
    #[error("components {first:?} and {second:?} are the same rigid curve {class}")]
    RepeatedRigidCurve {
        first: String,
        second: String,
        class: DivisorClass,
    },
    #[error("component {name:?} has branch index {branch}; expected 0..=3")]
    BadBranchIndex { name: String, branch: u8 },
    #[error("branch component {name:?} has multiplicity {multiplicity}; branch divisors are reduced")]
    NonReduced { name: String, multiplicity: u32 },
    #[error("component {name:?} does not live on the lattice with n = {n}")]
    WrongLattice { name: String, n: usize },
    #[error("no component named {0:?}")]
    UnknownComponent(String),
    #[error("{name:?}: branch degree {degree} is odd")]
    OddBranchDegree { name: String, degree: i64 },
    #[error("{name:?}: unramified over a curve of odd square {square}")]
    OddSplitSquare { name: String, square: i64 },
    #[error("the point is not a (1,1,1) point: incident components lie in branch divisors {branches:?}")]
    NotTripleIncidence { branches: Vec<u8> },
    #[error("incident component {0:?} is a rigid curve and cannot pass through a general point")]
    RigidThroughGeneralPoint(String),
    #[error("configuration must end with a general point blown up after the {expected} base points")]
    MissingGeneralPoint { expected: usize },
    #[error("configuration has {config} points, building data lives on n = {data}")]
    ConfigurationMismatch { config: usize, data: usize },
    #[error("pencil class {0} has non-zero self-intersection")]
    NotAPencil(DivisorClass),
    #[error("fibre components sum to {sum}, not to the pencil class {pencil}")]
    FibreSumMismatch { sum: DivisorClass, pencil: DivisorClass },
    #[error("decomposition search of {class} hit the depth bound {depth}")]
    SearchExhausted { class: DivisorClass, depth: u32 },
    #[error("bicanonical eigenspaces sum to {total}, but chi + K^2 = {expected}")]
    PluriGenusMismatch { total: usize, expected: i64 },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

fn describe(residues: &[RelationResidue]) -> String {
    residues
        .iter()
        .map(|r| format!("{} (residue {})", r.relation, r.residue))
        .collect::<Vec<_>>()
        .join("; ")
}

/// A violated relation `lhs = rhs`, with `lhs - rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationResidue {
    pub relation: String,
    pub residue: DivisorClass,
}

/// A named curve of the blown-up plane, either part of a branch divisor
/// (`branch` in 1..=3) or an unbranched reference curve (`branch == 0`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub name: String,
    pub class: DivisorClass,
    pub branch: u8,
    #[serde(default = "one")]
    pub multiplicity: u32,
}

fn one() -> u32 {
    1
}

impl Component {
    pub fn new(name: impl Into<String>, class: DivisorClass, branch: u8) -> Self {
        Self {
            name: name.into(),
            class,
            branch,
            multiplicity: 1,
        }
    }

    pub fn is_branched(&self) -> bool {
        self.branch != 0
    }
}

/// Whether `L1`, `L2` were supplied or obtained by halving.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LineBundleSource {
    Given,
    Derived,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BidoubleData {
    lattice: BlowupLattice,
    components: Vec<Component>,
    l1: DivisorClass,
    l2: DivisorClass,
    source: LineBundleSource,
}

impl BidoubleData {
    /// Checks the component list; the relations are checked by [`Self::validate`].
    pub fn new(
        lattice: BlowupLattice,
        components: Vec<Component>,
        l1: DivisorClass,
        l2: DivisorClass,
    ) -> Result<Self, CoverError> {
        check_components(lattice, &components)?;
        for (name, l) in [("L1", &l1), ("L2", &l2)] {
            if !lattice.contains(l) {
                return Err(CoverError::WrongLattice {
                    name: name.into(),
                    n: lattice.n(),
                });
            }
        }
        Ok(Self {
            lattice,
            components,
            l1,
            l2,
            source: LineBundleSource::Given,
        })
    }

    /// `L1 = (D2 + D3)/2`, `L2 = (D1 + D3)/2`; unique because `Pic` is torsion free.
    pub fn with_derived_line_bundles(
        lattice: BlowupLattice,
        components: Vec<Component>,
    ) -> Result<Self, CoverError> {
        check_components(lattice, &components)?;
        let d = |i| branch_sum(lattice, &components, i);
        let l1 = (d(2) + d(3)).halve()?;
        let l2 = (d(1) + d(3)).halve()?;
        Ok(Self {
            lattice,
            components,
            l1,
            l2,
            source: LineBundleSource::Derived,
        })
    }

    pub fn lattice(&self) -> BlowupLattice {
        self.lattice
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn branch_components(&self) -> impl Iterator<Item = &Component> {
        self.components.iter().filter(|c| c.is_branched())
    }

    pub fn component(&self, name: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.name == name)
    }

    pub fn source(&self) -> LineBundleSource {
        self.source
    }

    /// Class of `D_i`, `i` in 1..=3.
    pub fn branch_class(&self, i: u8) -> DivisorClass {
        assert!((1..=3).contains(&i), "branch index {i}");
        branch_sum(self.lattice, &self.components, i)
    }

    /// `D = D1 + D2 + D3`.
    pub fn total_branch(&self) -> DivisorClass {
        branch_sum(self.lattice, &self.components, 0)
    }

    /// `L_i`, `i` in 1..=3, with `L3 = L1 + L2 - D3`.
    pub fn line_bundle(&self, i: u8) -> DivisorClass {
        match i {
            1 => self.l1.clone(),
            2 => self.l2.clone(),
            3 => &(&self.l1 + &self.l2) - &self.branch_class(3),
            _ => panic!("line bundle index {i}"),
        }
    }

    /// Checks `2L1 = D2 + D3` and `2L2 = D1 + D3`, returns `L3`.
    pub fn validate(&self) -> Result<DivisorClass, CoverError> {
        let d = [self.branch_class(1), self.branch_class(2), self.branch_class(3)];
        let mut failures = Vec::new();
        for (relation, lhs, rhs) in [
            ("2L1 = D2 + D3", 2 * &self.l1, &d[1] + &d[2]),
            ("2L2 = D1 + D3", 2 * &self.l2, &d[0] + &d[2]),
        ] {
            let residue = &lhs - &rhs;
            if !residue.is_zero() {
                failures.push(RelationResidue {
                    relation: relation.into(),
                    residue,
                });
            }
        }
        if !failures.is_empty() {
            return Err(CoverError::RelationFailure(failures));
        }
        let l3 = self.line_bundle(3);
        debug_assert_eq!(2 * &l3, &d[0] + &d[1]);
        Ok(l3)
    }

    pub fn check_configuration(&self, cfg: &PointConfiguration) -> Result<(), CoverError> {
        if cfg.len() != self.lattice.n() {
            return Err(CoverError::ConfigurationMismatch {
                config: cfg.len(),
                data: self.lattice.n(),
            });
        }
        Ok(())
    }

    /// Resolves a `(1,1,1)` point: `cfg` is the configuration with the
    /// general point `P` blown up last; `incident` names the one component
    /// of each `D_i` through `P`. Those components and `L1`, `L2` lose the
    /// new exceptional class, which itself is not a branch component.
    pub fn resolve_111(&self, cfg: &PointConfiguration, incident: [&str; 3]) -> Result<Self, CoverError> {
        let n = self.lattice.n();
        if cfg.len() != n + 1 || cfg.general_point() != Some(n + 1) {
            return Err(CoverError::MissingGeneralPoint { expected: n });
        }
        let mut branches = Vec::new();
        for name in incident {
            let c = self
                .component(name)
                .ok_or_else(|| CoverError::UnknownComponent(name.into()))?;
            if c.class.square() < 0 {
                return Err(CoverError::RigidThroughGeneralPoint(name.into()));
            }
            branches.push(c.branch);
        }
        let mut sorted = branches.clone();
        sorted.sort_unstable();
        if sorted != [1, 2, 3] {
            return Err(CoverError::NotTripleIncidence { branches });
        }
        let up = self.lattice.blow_up();
        let e = up.exceptional(n + 1);
        let components = self
            .components
            .iter()
            .map(|c| {
                let mut class = self.lattice.lift(&c.class)?;
                if incident.contains(&c.name.as_str()) {
                    class = &class - &e;
                }
                Ok(Component { class, ..c.clone() })
            })
            .collect::<Result<Vec<_>, LatticeError>>()?;
        let l1 = &self.lattice.lift(&self.l1)? - &e;
        let l2 = &self.lattice.lift(&self.l2)? - &e;
        let out = Self {
            lattice: up,
            components,
            l1,
            l2,
            source: self.source,
        };
        out.validate()?;
        Ok(out)
    }

    /// Relabels the points by `perm` (0-based, `i -> perm[i]`).
    pub fn permute_points(&self, perm: &[usize]) -> Self {
        Self {
            lattice: self.lattice,
            components: self
                .components
                .iter()
                .map(|c| Component {
                    class: c.class.permute_points(perm),
                    ..c.clone()
                })
                .collect(),
            l1: self.l1.permute_points(perm),
            l2: self.l2.permute_points(perm),
            source: self.source,
        }
    }

    /// Renames the branch divisors: `D_i` becomes `D_{sigma(i)}`, where
    /// `sigma` is given by `images[i-1]`. Line bundles are re-derived.
    pub fn relabel_branches(&self, images: [u8; 3]) -> Result<Self, CoverError> {
        let components = self
            .components
            .iter()
            .map(|c| Component {
                branch: if c.branch == 0 { 0 } else { images[usize::from(c.branch) - 1] },
                ..c.clone()
            })
            .collect();
        Self::with_derived_line_bundles(self.lattice, components)
    }

    pub fn to_document(&self) -> CoverDocument {
        CoverDocument {
            lattice_n: self.lattice.n(),
            components: self.components.clone(),
            l1: Some(self.l1.clone()),
            l2: Some(self.l2.clone()),
            configuration: None,
            pencil: None,
        }
    }
}

fn branch_sum(lattice: BlowupLattice, components: &[Component], branch: u8) -> DivisorClass {
    components
        .iter()
        .filter(|c| c.is_branched() && (branch == 0 || c.branch == branch))
        .fold(lattice.zero(), |acc, c| &acc + &(i64::from(c.multiplicity) * &c.class))
}

fn check_components(lattice: BlowupLattice, components: &[Component]) -> Result<(), CoverError> {
    for (k, c) in components.iter().enumerate() {
        if c.branch > 3 {
            return Err(CoverError::BadBranchIndex {
                name: c.name.clone(),
                branch: c.branch,
            });
        }
        if !lattice.contains(&c.class) {
            return Err(CoverError::WrongLattice {
                name: c.name.clone(),
                n: lattice.n(),
            });
        }
        if c.is_branched() && c.multiplicity != 1 {
            return Err(CoverError::NonReduced {
                name: c.name.clone(),
                multiplicity: c.multiplicity,
            });
        }
        for prev in &components[..k] {
            if prev.name == c.name {
                return Err(CoverError::DuplicateComponent(c.name.clone()));
            }
            // a negative curve is alone in its class
            if c.is_branched() && prev.is_branched() && c.class == prev.class && c.class.square() < 0 {
                return Err(CoverError::RepeatedRigidCurve {
                    first: prev.name.clone(),
                    second: c.name.clone(),
                    class: c.class.clone(),
                });
            }
        }
    }
    Ok(())
}

/// Choice of base configuration in a cover document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigurationChoice {
    #[serde(default)]
    pub p7: bool,
    /// Seed of a general point blown up after the others.
    #[serde(default)]
    pub general_point: Option<u64>,
}

impl ConfigurationChoice {
    /// Default for a lattice size: 6 points, 6 + `P7`, or 6 + `P7` + general point.
    pub fn for_lattice(n: usize, seed: u64) -> Option<Self> {
        match n {
            6 => Some(Self { p7: false, general_point: None }),
            7 => Some(Self { p7: true, general_point: None }),
            8 => Some(Self { p7: true, general_point: Some(seed) }),
            _ => None,
        }
    }

    pub fn build(&self) -> PointConfiguration {
        PointConfiguration::standard_quadrilateral(self.p7, self.general_point)
    }

    pub fn point_count(&self) -> usize {
        6 + usize::from(self.p7) + usize::from(self.general_point.is_some())
    }
}

/// JSON form of building data. `L1`, `L2` may be omitted and are then derived.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverDocument {
    pub lattice_n: usize,
    pub components: Vec<Component>,
    #[serde(rename = "L1", default, skip_serializing_if = "Option::is_none")]
    pub l1: Option<DivisorClass>,
    #[serde(rename = "L2", default, skip_serializing_if = "Option::is_none")]
    pub l2: Option<DivisorClass>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub configuration: Option<ConfigurationChoice>,
    /// Pencil whose double fibres are counted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pencil: Option<DivisorClass>,
}

impl CoverDocument {
    pub fn into_data(self) -> Result<BidoubleData, CoverError> {
        let lattice = BlowupLattice::new(self.lattice_n);
        match (self.l1, self.l2) {
            (Some(l1), Some(l2)) => BidoubleData::new(lattice, self.components, l1, l2),
            _ => BidoubleData::with_derived_line_bundles(lattice, self.components),
        }
    }
}

#[cfg(test)]
mod tests;
