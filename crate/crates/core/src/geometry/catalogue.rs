use std::collections::BTreeSet;

use serde::Serialize;

use super::config::{collinear, five_subsets, on_common_conic, ConfigurationKind, PointConfiguration};
use crate::lattice::{BlowupLattice, DivisorClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Exceptional,
    Line,
    Conic,
    /// General member of a base-point-free conic pencil.
    Pencil,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogueEntry {
    pub name: String,
    pub class: DivisorClass,
    pub kind: CurveKind,
    pub self_intersection: i64,
    /// 1-based indices of the configuration points the curve passes through.
    pub through: Vec<usize>,
}

impl CatalogueEntry {
    fn new(name: String, class: DivisorClass, kind: CurveKind, through: Vec<usize>) -> Self {
        let self_intersection = class.square();
        Self {
            name,
            class,
            kind,
            self_intersection,
            through,
        }
    }

    /// Negative curves are the only member of their class.
    pub fn is_rigid(&self) -> bool {
        self.self_intersection < 0
    }
}

/// Irreducible curves of the blown-up plane that the configuration forces:
/// exceptional curves, strict transforms of lines through two or more points,
/// irreducible conics through five or more points, and (for the
/// quadrilateral) the three conic pencils `f1`, `f2`, `f3`.
#[derive(Debug, Clone, Default, Serialize)]
pub struct CurveCatalogue {
    entries: Vec<CatalogueEntry>,
}

/// Base pairs of the quadrilateral's named lines.
const NAMED_LINES: [(&str, [usize; 2]); 7] = [
    ("S1", [1, 2]),
    ("S2", [2, 3]),
    ("S3", [3, 4]),
    ("S4", [1, 4]),
    ("Delta1", [1, 3]),
    ("Delta2", [2, 4]),
    ("Delta3", [5, 6]),
];

/// Base points of the pencils `f1`, `f2`, `f3`.
const PENCILS: [(&str, [usize; 4]); 3] = [
    ("f1", [2, 4, 5, 6]),
    ("f2", [1, 3, 5, 6]),
    ("f3", [1, 2, 3, 4]),
];

impl CurveCatalogue {
    pub fn for_configuration(cfg: &PointConfiguration) -> Self {
        let lat = cfg.lattice();
        let n = cfg.len();
        let quad = cfg.kind() == ConfigurationKind::Quadrilateral;
        let mut entries = Vec::new();
        for i in 1..=n {
            entries.push(CatalogueEntry::new(
                format!("e{i}"),
                lat.exceptional(i),
                CurveKind::Exceptional,
                Vec::new(),
            ));
        }

        let mut lines: BTreeSet<Vec<usize>> = BTreeSet::new();
        for i in 1..=n {
            for j in i + 1..=n {
                let on: Vec<usize> = (1..=n)
                    .filter(|&k| k == i || k == j || collinear(cfg.point(i), cfg.point(j), cfg.point(k)))
                    .collect();
                lines.insert(on);
            }
        }
        for on in lines {
            let name = line_name(cfg, &on, quad);
            entries.push(CatalogueEntry::new(
                name,
                through_class(&lat, 1, &on),
                CurveKind::Line,
                on,
            ));
        }

        let mut conics: BTreeSet<Vec<usize>> = BTreeSet::new();
        let pts = cfg.points();
        for five in five_subsets(n) {
            let chosen: Vec<_> = five.iter().map(|&i| pts[i]).collect();
            let any_collinear = (0..5).any(|a| {
                (a + 1..5).any(|b| (b + 1..5).any(|c| collinear(&chosen[a], &chosen[b], &chosen[c])))
            });
            if any_collinear {
                continue;
            }
            let on: Vec<usize> = (0..n)
                .filter(|k| {
                    five.contains(k) || {
                        let mut six = chosen.clone();
                        six.push(pts[*k]);
                        on_common_conic(&six)
                    }
                })
                .map(|k| k + 1)
                .collect();
            conics.insert(on);
        }
        for on in conics {
            let labels: Vec<&str> = on.iter().map(|&i| cfg.label(i)).collect();
            entries.push(CatalogueEntry::new(
                format!("conic({})", labels.join(",")),
                through_class(&lat, 2, &on),
                CurveKind::Conic,
                on,
            ));
        }

        if quad {
            for (name, base) in PENCILS {
                entries.push(CatalogueEntry::new(
                    name.to_string(),
                    through_class(&lat, 2, &base),
                    CurveKind::Pencil,
                    base.to_vec(),
                ));
            }
        }
        Self { entries }
    }

    pub fn entries(&self) -> &[CatalogueEntry] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Option<&CatalogueEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// Class of a named entry; panics on an unknown name.
    pub fn class(&self, name: &str) -> DivisorClass {
        self.get(name)
            .unwrap_or_else(|| panic!("no catalogue entry named {name}"))
            .class
            .clone()
    }

    pub fn rigid(&self) -> impl Iterator<Item = &CatalogueEntry> {
        self.entries.iter().filter(|e| e.is_rigid())
    }

    /// The rigid entry with the given class, if any.
    pub fn rigid_with_class(&self, class: &DivisorClass) -> Option<&CatalogueEntry> {
        self.rigid().find(|e| &e.class == class)
    }
}

fn through_class(lat: &BlowupLattice, degree: i64, on: &[usize]) -> DivisorClass {
    let mut mults = vec![0; lat.n()];
    for &i in on {
        mults[i - 1] = 1;
    }
    lat.class(degree, &mults)
}

fn line_name(cfg: &PointConfiguration, on: &[usize], quad: bool) -> String {
    if quad {
        for (name, pair) in NAMED_LINES {
            if pair.iter().all(|p| on.contains(p)) {
                // strict transform changes once the line also carries P7
                return match cfg.p7() {
                    Some(p7) if on.contains(&p7) => format!("{name}bar"),
                    _ => name.to_string(),
                };
            }
        }
    }
    let labels: Vec<&str> = on.iter().map(|&i| cfg.label(i)).collect();
    format!("line({})", labels.join(","))
}
