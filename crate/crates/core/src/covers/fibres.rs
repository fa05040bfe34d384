use serde::Serialize;

use super::{BidoubleData, CoverError};
use crate::geometry::{decompose_over, effective_decompositions, CatalogueEntry, Decomposition, PointConfiguration};
use crate::lattice::DivisorClass;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FibreComponent {
    pub name: String,
    pub class: DivisorClass,
    pub multiplicity: u32,
    /// Branch divisor containing the component, if any.
    pub branch: Option<u8>,
}

/// 2 if the pull-back of the member is divisible by 2, i.e. every component
/// is branched or has even multiplicity; 1 otherwise.
pub fn fibre_multiplicity(member: &[FibreComponent], pencil: &DivisorClass) -> Result<u8, CoverError> {
    let sum = member
        .iter()
        .fold(pencil.lattice().zero(), |acc, c| &acc + &(i64::from(c.multiplicity) * &c.class));
    if &sum != pencil {
        return Err(CoverError::FibreSumMismatch {
            sum,
            pencil: pencil.clone(),
        });
    }
    let double = member
        .iter()
        .all(|c| c.branch.is_some() || c.multiplicity % 2 == 0);
    Ok(if double { 2 } else { 1 })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FibreMember {
    pub components: Vec<FibreComponent>,
    pub multiplicity: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FibreCount {
    pub members: Vec<FibreMember>,
    pub double: usize,
    /// Members with more than this many components were not searched.
    pub depth_bound: u32,
}

/// Special members of a pencil: the catalogue decompositions of its class,
/// and each branch component outside the rigid catalogue completed by
/// rigid catalogue curves. A catalogued negative curve counts as branched
/// when some branch component has its class. Members with two or more
/// non-catalogued components are not enumerated.
pub fn count_double_fibres(
    bd: &BidoubleData,
    pencil: &DivisorClass,
    cfg: &PointConfiguration,
    depth: u32,
) -> Result<FibreCount, CoverError> {
    bd.validate()?;
    bd.check_configuration(cfg)?;
    if pencil.square() != 0 {
        return Err(CoverError::NotAPencil(pencil.clone()));
    }
    let entries = cfg.catalogue().entries();
    let branch_of = |class: &DivisorClass| {
        bd.branch_components()
            .find(|c| &c.class == class)
            .map(|c| c.branch)
    };
    let catalogued = |e: &CatalogueEntry| FibreComponent {
        name: e.name.clone(),
        class: e.class.clone(),
        multiplicity: 0,
        branch: if e.is_rigid() { branch_of(&e.class) } else { None },
    };
    let from_decomposition = |d: &Decomposition| -> Vec<FibreComponent> {
        d.parts
            .iter()
            .map(|&(i, m)| FibreComponent {
                multiplicity: m,
                ..catalogued(&entries[i])
            })
            .collect()
    };

    let mut members: Vec<Vec<FibreComponent>> = Vec::new();
    let search = effective_decompositions(cfg, pencil, depth);
    if search.exhausted {
        return Err(CoverError::SearchExhausted {
            class: pencil.clone(),
            depth,
        });
    }
    members.extend(search.decompositions.iter().map(from_decomposition));

    for comp in bd.branch_components() {
        if cfg.catalogue().rigid_with_class(&comp.class).is_some() {
            continue;
        }
        let own = FibreComponent {
            name: comp.name.clone(),
            class: comp.class.clone(),
            multiplicity: 1,
            branch: Some(comp.branch),
        };
        let rest = pencil - &comp.class;
        if rest.is_zero() {
            members.push(vec![own]);
            continue;
        }
        let search = decompose_over(entries, &rest, depth, CatalogueEntry::is_rigid);
        if search.exhausted {
            return Err(CoverError::SearchExhausted { class: rest, depth });
        }
        for d in &search.decompositions {
            let mut m = vec![own.clone()];
            m.extend(from_decomposition(d));
            members.push(m);
        }
    }

    let members = members
        .into_iter()
        .map(|components| {
            let multiplicity = fibre_multiplicity(&components, pencil)?;
            Ok(FibreMember {
                components,
                multiplicity,
            })
        })
        .collect::<Result<Vec<_>, CoverError>>()?;
    let double = members.iter().filter(|m| m.multiplicity == 2).count();
    Ok(FibreCount {
        members,
        double,
        depth_bound: depth,
    })
}
