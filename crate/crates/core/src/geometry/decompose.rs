//! Bounded exhaustive search for effective decompositions over the catalogue.

use serde::Serialize;

use super::catalogue::{CatalogueEntry, CurveKind};
use super::config::PointConfiguration;
use crate::lattice::DivisorClass;

/// A multiset of catalogue entries: `(entry index, multiplicity)`, sorted by index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub parts: Vec<(usize, u32)>,
}

impl Decomposition {
    pub fn len(&self) -> u32 {
        self.parts.iter().map(|&(_, m)| m).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `(name, multiplicity)` pairs.
    pub fn named<'a>(&self, entries: &'a [CatalogueEntry]) -> Vec<(&'a str, u32)> {
        self.parts
            .iter()
            .map(|&(i, m)| (entries[i].name.as_str(), m))
            .collect()
    }

    pub fn class(&self, entries: &[CatalogueEntry]) -> Option<DivisorClass> {
        self.parts
            .iter()
            .map(|&(i, m)| i64::from(m) * &entries[i].class)
            .reduce(|a, b| a + b)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionSearch {
    pub decompositions: Vec<Decomposition>,
    pub depth_bound: u32,
    /// Some branch of the search was cut by the depth bound.
    pub exhausted: bool,
}

/// All ways to write `class` as a non-negative combination of catalogue
/// curves with at most `depth` components counted with multiplicity.
pub fn effective_decompositions(
    cfg: &PointConfiguration,
    class: &DivisorClass,
    depth: u32,
) -> DecompositionSearch {
    assert!(depth >= 1, "depth bound must be positive");
    decompose_over(cfg.catalogue().entries(), class, depth, |_| true)
}

/// Same search restricted to the entries accepted by `allow`.
pub fn decompose_over(
    entries: &[CatalogueEntry],
    class: &DivisorClass,
    depth: u32,
    allow: impl Fn(&CatalogueEntry) -> bool,
) -> DecompositionSearch {
    let positive: Vec<usize> = entries
        .iter()
        .enumerate()
        .filter(|(_, e)| e.class.degree() > 0 && allow(e))
        .map(|(i, _)| i)
        .collect();
    let exceptional: Vec<Option<usize>> = (1..=class.n())
        .map(|p| {
            entries.iter().position(|e| {
                e.kind == CurveKind::Exceptional && e.class == exceptional_class(class.n(), p) && allow(e)
            })
        })
        .collect();
    let mut search = Search {
        entries,
        positive,
        exceptional,
        out: Vec::new(),
        exhausted: false,
    };
    let mut current = Vec::new();
    search.run(0, class.clone(), depth, &mut current);
    DecompositionSearch {
        decompositions: search.out,
        depth_bound: depth,
        exhausted: search.exhausted,
    }
}

fn exceptional_class(n: usize, i: usize) -> DivisorClass {
    crate::lattice::BlowupLattice::new(n).exceptional(i)
}

struct Search<'a> {
    entries: &'a [CatalogueEntry],
    positive: Vec<usize>,
    exceptional: Vec<Option<usize>>,
    out: Vec<Decomposition>,
    exhausted: bool,
}

impl Search<'_> {
    fn run(&mut self, start: usize, rest: DivisorClass, budget: u32, current: &mut Vec<usize>) {
        if rest.degree() < 0 {
            return;
        }
        // every remaining positive-degree curve has multiplicity <= 1 at each
        // point, so a point multiplicity above the degree cannot be reached
        if rest.mults().iter().any(|&m| m > rest.degree()) {
            return;
        }
        if rest.degree() == 0 {
            self.complete_with_exceptionals(&rest, budget, current);
            return;
        }
        for pos in start..self.positive.len() {
            let idx = self.positive[pos];
            let entry = &self.entries[idx];
            if entry.class.degree() > rest.degree() {
                continue;
            }
            if budget == 0 {
                self.exhausted = true;
                return;
            }
            current.push(idx);
            self.run(pos, &rest - &entry.class, budget - 1, current);
            current.pop();
        }
    }

    /// A degree-zero remainder `sum c_i e_i` has a unique completion.
    fn complete_with_exceptionals(&mut self, rest: &DivisorClass, budget: u32, current: &[usize]) {
        if rest.mults().iter().any(|&m| m > 0) {
            return;
        }
        let needed: i64 = rest.mults().iter().map(|m| -m).sum();
        if needed > i64::from(budget) {
            self.exhausted = true;
            return;
        }
        let mut parts: Vec<(usize, u32)> = Vec::new();
        for &idx in current {
            match parts.iter_mut().find(|(i, _)| *i == idx) {
                Some((_, m)) => *m += 1,
                None => parts.push((idx, 1)),
            }
        }
        for (p, &m) in rest.mults().iter().enumerate() {
            if m < 0 {
                let Some(idx) = self.exceptional[p] else {
                    return;
                };
                parts.push((idx, (-m) as u32));
            }
        }
        if parts.is_empty() {
            return;
        }
        parts.sort_unstable();
        self.out.push(Decomposition { parts });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(cfg: &PointConfiguration, s: &DecompositionSearch) -> Vec<Vec<(String, u32)>> {
        let mut v: Vec<Vec<(String, u32)>> = s
            .decompositions
            .iter()
            .map(|d| {
                let mut n: Vec<(String, u32)> = d
                    .named(cfg.catalogue().entries())
                    .into_iter()
                    .map(|(a, b)| (a.to_string(), b))
                    .collect();
                n.sort();
                n
            })
            .collect();
        v.sort();
        v
    }

    fn set(items: &[(&str, u32)]) -> Vec<(String, u32)> {
        let mut v: Vec<(String, u32)> = items.iter().map(|(a, b)| (a.to_string(), *b)).collect();
        v.sort();
        v
    }

    #[test]
    fn pencil_f1_on_six_points() {
        let cfg = PointConfiguration::standard_quadrilateral(false, None);
        let f1 = cfg.catalogue().class("f1");
        let s = effective_decompositions(&cfg, &f1, 8);
        assert!(!s.exhausted);
        let found = names(&cfg, &s);
        assert_eq!(
            found,
            vec![
                set(&[("Delta2", 1), ("Delta3", 1)]),
                set(&[("S1", 1), ("S4", 1), ("e1", 2)]),
                set(&[("S2", 1), ("S3", 1), ("e3", 2)]),
                set(&[("f1", 1)]),
            ]
        );
        for d in &s.decompositions {
            assert_eq!(d.class(cfg.catalogue().entries()).unwrap(), f1);
        }
    }

    #[test]
    fn pencil_f1_on_seven_points() {
        let cfg = PointConfiguration::standard_quadrilateral(true, None);
        let f1 = cfg.catalogue().class("f1");
        let found = names(&cfg, &effective_decompositions(&cfg, &f1, 8));
        assert!(found.contains(&set(&[("Delta2bar", 1), ("Delta3bar", 1), ("e7", 2)])));
        assert_eq!(found.len(), 4);
    }

    #[test]
    fn rigid_class_has_one_decomposition() {
        let cfg = PointConfiguration::standard_quadrilateral(true, None);
        let cat = cfg.catalogue();
        let c = ["e4", "Delta2bar", "S1", "S2", "S3", "S4"]
            .iter()
            .map(|n| cat.class(n))
            .reduce(|a, b| a + b)
            .unwrap();
        let s = effective_decompositions(&cfg, &c, 12);
        assert!(!s.exhausted);
        assert_eq!(
            names(&cfg, &s),
            vec![set(&[
                ("Delta2bar", 1),
                ("S1", 1),
                ("S2", 1),
                ("S3", 1),
                ("S4", 1),
                ("e4", 1)
            ])]
        );
    }

    #[test]
    fn depth_bound_reports_exhaustion() {
        let cfg = PointConfiguration::standard_quadrilateral(false, None);
        let f1 = cfg.catalogue().class("f1");
        let s = effective_decompositions(&cfg, &f1, 2);
        assert!(s.exhausted);
        assert_eq!(s.decompositions.len(), 2);
    }
}
