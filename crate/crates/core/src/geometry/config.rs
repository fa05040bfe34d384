use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::catalogue::CurveCatalogue;
use super::interp::conic_rows;
use super::GeometryError;
use crate::lattice::BlowupLattice;
use crate::linalg::rank_over_q;

/// A point of `P^2` with primitive integer homogeneous coordinates.
///
/// Rational coordinates are accepted through [`ProjectivePoint::from_rational`]
/// and scaled to integers, which does not change the point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ProjectivePoint([i64; 3]);

impl ProjectivePoint {
    pub fn new(x: i64, y: i64, z: i64) -> Self {
        assert!((x, y, z) != (0, 0, 0), "the zero vector is not a point");
        let g = x.gcd(&y).gcd(&z);
        let (mut x, mut y, mut z) = (x / g, y / g, z / g);
        // sign: first non-zero coordinate positive
        let lead = [x, y, z].into_iter().find(|&c| c != 0).unwrap_or(1);
        if lead < 0 {
            (x, y, z) = (-x, -y, -z);
        }
        Self([x, y, z])
    }

    /// `(a0/b0 : a1/b1 : a2/b2)`.
    pub fn from_rational(num: [i64; 3], den: [i64; 3]) -> Self {
        assert!(den.iter().all(|&d| d != 0), "zero denominator");
        Self::new(
            num[0] * den[1] * den[2],
            num[1] * den[0] * den[2],
            num[2] * den[0] * den[1],
        )
    }

    pub fn coords(&self) -> [i64; 3] {
        self.0
    }

    pub fn big_coords(&self) -> [BigInt; 3] {
        self.0.map(BigInt::from)
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = self.0;
        write!(f, "({x}:{y}:{z})")
    }
}

fn det3(a: [i64; 3], b: [i64; 3], c: [i64; 3]) -> i128 {
    let [a, b, c] = [a, b, c].map(|v| v.map(i128::from));
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

pub fn collinear(a: &ProjectivePoint, b: &ProjectivePoint, c: &ProjectivePoint) -> bool {
    det3(a.0, b.0, c.0) == 0
}

/// True if the six points lie on a common conic.
pub fn on_common_conic(points: &[ProjectivePoint]) -> bool {
    debug_assert_eq!(points.len(), 6);
    rank_over_q(conic_rows(points)) < 6
}

/// Which role a configuration plays; drives curve naming in the catalogue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConfigurationKind {
    /// The quadrilateral `P1..P6`, optionally with `P7` and a general point.
    Quadrilateral,
    /// Points drawn at random, no structure.
    General,
}

/// Points of `P^2` to be blown up, with their recorded collinearities.
#[derive(Debug, Clone)]
pub struct PointConfiguration {
    kind: ConfigurationKind,
    points: Vec<ProjectivePoint>,
    labels: Vec<String>,
    collinear_triples: Vec<[usize; 3]>,
    p7: Option<usize>,
    general_point: Option<usize>,
    catalogue: CurveCatalogue,
}

/// Collinear triples of `P1..P7` (1-based).
const QUADRILATERAL_TRIPLES: [[usize; 3]; 4] = [[1, 2, 5], [3, 4, 5], [2, 3, 6], [1, 4, 6]];
const P7_TRIPLES: [[usize; 3]; 2] = [[5, 6, 7], [2, 4, 7]];

impl PointConfiguration {
    /// `P1=(1:0:0)`, `P2=(0:1:0)`, `P3=(0:0:1)`, `P4=(1:1:1)`,
    /// `P5 = P1P2 ∩ P3P4`, `P6 = P1P4 ∩ P2P3`; optionally `P7 = P2P4 ∩ P5P6`
    /// and a general point drawn from `seed`.
    pub fn standard_quadrilateral(with_p7: bool, general_point: Option<u64>) -> Self {
        let frame = [
            ProjectivePoint::new(1, 0, 0),
            ProjectivePoint::new(0, 1, 0),
            ProjectivePoint::new(0, 0, 1),
            ProjectivePoint::new(1, 1, 1),
        ];
        let p5 = meet(&frame[0], &frame[1], &frame[2], &frame[3]);
        let p6 = meet(&frame[0], &frame[3], &frame[1], &frame[2]);
        let mut points = frame.to_vec();
        points.extend([p5, p6]);
        let mut labels: Vec<String> = (1..=6).map(|i| format!("P{i}")).collect();
        let mut triples = QUADRILATERAL_TRIPLES.to_vec();
        let mut p7 = None;
        if with_p7 {
            points.push(meet(&points[1], &points[3], &points[4], &points[5]));
            labels.push("P7".into());
            triples.extend(P7_TRIPLES);
            p7 = Some(7);
        }
        let mut cfg = Self {
            kind: ConfigurationKind::Quadrilateral,
            points,
            labels,
            collinear_triples: triples,
            p7,
            general_point: None,
            catalogue: CurveCatalogue::default(),
        };
        if let Some(seed) = general_point {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = cfg.draw_general_point(&mut rng);
            cfg.points.push(p);
            cfg.labels.push("P".into());
            cfg.general_point = Some(cfg.points.len());
        }
        cfg.verify_incidences()
            .expect("quadrilateral incidences are fixed by construction");
        cfg.catalogue = CurveCatalogue::for_configuration(&cfg);
        cfg
    }

    /// `n` random points with no three collinear and no six on a conic.
    pub fn general(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cfg = Self {
            kind: ConfigurationKind::General,
            points: Vec::with_capacity(n),
            labels: Vec::with_capacity(n),
            collinear_triples: Vec::new(),
            p7: None,
            general_point: None,
            catalogue: CurveCatalogue::default(),
        };
        for i in 1..=n {
            let p = cfg.draw_general_point(&mut rng);
            cfg.points.push(p);
            cfg.labels.push(format!("P{i}"));
        }
        cfg.verify_incidences()
            .expect("general points avoid all lines through pairs");
        cfg.catalogue = CurveCatalogue::for_configuration(&cfg);
        cfg
    }

    /// Random rational point off every line through two existing points and
    /// off every conic through five of them.
    fn draw_general_point(&self, rng: &mut ChaCha8Rng) -> ProjectivePoint {
        loop {
            let num = [rng.gen_range(-12..=12), rng.gen_range(-12..=12), 1];
            let den = [rng.gen_range(1..=6), rng.gen_range(1..=6), 1];
            if num[0] == 0 && num[1] == 0 {
                continue;
            }
            let p = ProjectivePoint::from_rational(num, den);
            if self.is_general_position_candidate(&p) {
                return p;
            }
        }
    }

    fn is_general_position_candidate(&self, p: &ProjectivePoint) -> bool {
        let pts = &self.points;
        if pts.contains(p) {
            return false;
        }
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if collinear(&pts[i], &pts[j], p) {
                    return false;
                }
            }
        }
        for five in five_subsets(pts.len()) {
            let chosen: Vec<ProjectivePoint> = five.iter().map(|&i| pts[i]).collect();
            if has_collinear_triple(&chosen) {
                continue;
            }
            let mut six = chosen;
            six.push(*p);
            if on_common_conic(&six) {
                return false;
            }
        }
        true
    }

    /// Every recorded triple is collinear and no other triple is.
    pub fn verify_incidences(&self) -> Result<(), GeometryError> {
        let n = self.points.len();
        for i in 1..=n {
            for j in i + 1..=n {
                for k in j + 1..=n {
                    let recorded = self.collinear_triples.contains(&[i, j, k]);
                    let actual = collinear(&self.points[i - 1], &self.points[j - 1], &self.points[k - 1]);
                    if recorded != actual {
                        return Err(GeometryError::Incidence {
                            triple: [i, j, k],
                            recorded,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> ConfigurationKind {
        self.kind
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    /// 1-based.
    pub fn point(&self, i: usize) -> &ProjectivePoint {
        &self.points[i - 1]
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i - 1]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn collinear_triples(&self) -> &[[usize; 3]] {
        &self.collinear_triples
    }

    pub fn lattice(&self) -> BlowupLattice {
        BlowupLattice::new(self.points.len())
    }

    /// Index of `P7 = Δ2 ∩ Δ3`, if present.
    pub fn p7(&self) -> Option<usize> {
        self.p7
    }

    /// Index of the randomly drawn general point, if present.
    pub fn general_point(&self) -> Option<usize> {
        self.general_point
    }

    pub fn catalogue(&self) -> &CurveCatalogue {
        &self.catalogue
    }

    /// Point permutations (0-based, `perm[i]` is the image of point `i`)
    /// induced by projective transformations mapping the configuration to
    /// itself.
    pub fn symmetries(&self) -> Vec<Vec<usize>> {
        let n = self.points.len();
        let Some(frame) = self.find_frame() else {
            return vec![(0..n).collect()];
        };
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let img = [a, b, c, d];
                        if !distinct(&img) {
                            continue;
                        }
                        let src = frame.map(|i| self.points[i]);
                        let dst = img.map(|i| self.points[i]);
                        if !is_frame(&dst) {
                            continue;
                        }
                        let t = frame_map(&src, &dst);
                        if let Some(perm) = self.induced_permutation(&t) {
                            out.push(perm);
                        }
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    fn find_frame(&self) -> Option<[usize; 4]> {
        let n = self.points.len();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for d in c + 1..n {
                        if is_frame(&[a, b, c, d].map(|i| self.points[i])) {
                            return Some([a, b, c, d]);
                        }
                    }
                }
            }
        }
        None
    }

    fn induced_permutation(&self, t: &[[i128; 3]; 3]) -> Option<Vec<usize>> {
        let mut perm = Vec::with_capacity(self.points.len());
        for p in &self.points {
            let c = p.0.map(i128::from);
            let image: [i128; 3] =
                std::array::from_fn(|r| t[r][0] * c[0] + t[r][1] * c[1] + t[r][2] * c[2]);
            let j = self
                .points
                .iter()
                .position(|q| proportional(&image, &q.0.map(i128::from)))?;
            perm.push(j);
        }
        let mut seen = perm.clone();
        seen.sort_unstable();
        seen.dedup();
        (seen.len() == perm.len()).then_some(perm)
    }
}

fn meet(
    a: &ProjectivePoint,
    b: &ProjectivePoint,
    c: &ProjectivePoint,
    d: &ProjectivePoint,
) -> ProjectivePoint {
    let l1 = cross(a.0.map(i128::from), b.0.map(i128::from));
    let l2 = cross(c.0.map(i128::from), d.0.map(i128::from));
    let p = cross(l1, l2);
    let p = p.map(|x| i64::try_from(x).expect("small coordinates"));
    ProjectivePoint::new(p[0], p[1], p[2])
}

fn cross(a: [i128; 3], b: [i128; 3]) -> [i128; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn proportional(a: &[i128; 3], b: &[i128; 3]) -> bool {
    cross(*a, *b) == [0, 0, 0] && a.iter().any(|&x| x != 0)
}

fn distinct(idx: &[usize; 4]) -> bool {
    (0..4).all(|i| (i + 1..4).all(|j| idx[i] != idx[j]))
}

fn is_frame(p: &[ProjectivePoint; 4]) -> bool {
    !has_collinear_triple(p)
}

fn has_collinear_triple(p: &[ProjectivePoint]) -> bool {
    let n = p.len();
    (0..n).any(|i| (i + 1..n).any(|j| (j + 1..n).any(|k| collinear(&p[i], &p[j], &p[k]))))
}

/// Matrix sending the standard frame `e1, e2, e3, e1+e2+e3` to `p`, up to scale.
fn from_standard(p: &[ProjectivePoint; 4]) -> [[i128; 3]; 3] {
    let cols = [p[0], p[1], p[2]].map(|q| q.0.map(i128::from));
    let m: [[i128; 3]; 3] = std::array::from_fn(|r| [cols[0][r], cols[1][r], cols[2][r]]);
    let adj = adjugate(&m);
    let target = p[3].0.map(i128::from);
    let lambda: [i128; 3] =
        std::array::from_fn(|r| adj[r][0] * target[0] + adj[r][1] * target[1] + adj[r][2] * target[2]);
    std::array::from_fn(|r| std::array::from_fn(|c| m[r][c] * lambda[c]))
}

fn frame_map(src: &[ProjectivePoint; 4], dst: &[ProjectivePoint; 4]) -> [[i128; 3]; 3] {
    let a = from_standard(src);
    let b = from_standard(dst);
    mat_mul(&b, &adjugate(&a))
}

fn adjugate(m: &[[i128; 3]; 3]) -> [[i128; 3]; 3] {
    let c = |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    [
        [c(1, 2, 1, 2), -c(0, 2, 1, 2), c(0, 1, 1, 2)],
        [-c(1, 2, 0, 2), c(0, 2, 0, 2), -c(0, 1, 0, 2)],
        [c(1, 2, 0, 1), -c(0, 2, 0, 1), c(0, 1, 0, 1)],
    ]
}

fn mat_mul(a: &[[i128; 3]; 3], b: &[[i128; 3]; 3]) -> [[i128; 3]; 3] {
    std::array::from_fn(|r| std::array::from_fn(|c| (0..3).map(|k| a[r][k] * b[k][c]).sum()))
}

pub(crate) fn five_subsets(n: usize) -> impl Iterator<Item = [usize; 5]> {
    (0..n).flat_map(move |a| {
        (a + 1..n).flat_map(move |b| {
            (b + 1..n).flat_map(move |c| {
                (c + 1..n).flat_map(move |d| (d + 1..n).map(move |e| [a, b, c, d, e]))
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn quadrilateral_coordinates() {
        let cfg = PointConfiguration::standard_quadrilateral(true, None);
        let coords: Vec<[i64; 3]> = cfg.points().iter().map(|p| p.coords()).collect();
        assert_eq!(
            coords,
            vec![
                [1, 0, 0],
                [0, 1, 0],
                [0, 0, 1],
                [1, 1, 1],
                [1, 1, 0],
                [0, 1, 1],
                [1, 2, 1]
            ]
        );
        assert_eq!(cfg.p7(), Some(7));
        assert!(cfg.verify_incidences().is_ok());
    }

    #[test]
    fn p1_p3_p7_not_collinear() {
        let cfg = PointConfiguration::standard_quadrilateral(true, None);
        assert!(!collinear(cfg.point(1), cfg.point(3), cfg.point(7)));
        assert!(collinear(cfg.point(2), cfg.point(4), cfg.point(7)));
    }

    #[test]
    fn general_point_is_reproducible_and_general() {
        let a = PointConfiguration::standard_quadrilateral(false, Some(5));
        let b = PointConfiguration::standard_quadrilateral(false, Some(5));
        assert_eq!(a.points(), b.points());
        assert_eq!(a.general_point(), Some(7));
        assert_eq!(a.label(7), "P");
        assert!(a.verify_incidences().is_ok());
    }

    #[test]
    fn broken_incidence_detected() {
        let mut cfg = PointConfiguration::standard_quadrilateral(false, None);
        cfg.collinear_triples.pop();
        assert!(matches!(
            cfg.verify_incidences(),
            Err(GeometryError::Incidence { recorded: false, .. })
        ));
    }

    #[test]
    fn rational_points_scale_to_integers() {
        let p = ProjectivePoint::from_rational([1, -3, 1], [2, 4, 1]);
        assert_eq!(p.coords(), [2, -3, 4]);
        assert_eq!(ProjectivePoint::new(-2, -4, 0).coords(), [1, 2, 0]);
    }

    #[test]
    fn symmetry_groups() {
        // the six points are the pairwise meets of the four sides, permuted
        // freely by S4
        let six = PointConfiguration::standard_quadrilateral(false, None);
        assert_eq!(six.symmetries().len(), 24);
        let seven = PointConfiguration::standard_quadrilateral(true, None);
        let sym = seven.symmetries();
        assert_eq!(sym.len(), 24);
        for cfg in [&six, &seven] {
            let triples: BTreeSet<[usize; 3]> = cfg.collinear_triples().iter().copied().collect();
            for perm in cfg.symmetries() {
                let mapped: BTreeSet<[usize; 3]> = triples
                    .iter()
                    .map(|t| {
                        let mut m = t.map(|i| perm[i - 1] + 1);
                        m.sort_unstable();
                        m
                    })
                    .collect();
                assert_eq!(mapped, triples);
            }
        }
    }

    #[test]
    fn six_points_on_a_conic() {
        // 3xy + yz - 4xz through the frame and (1:2:3)
        let mut six = vec![
            ProjectivePoint::new(1, 0, 0),
            ProjectivePoint::new(0, 1, 0),
            ProjectivePoint::new(0, 0, 1),
            ProjectivePoint::new(1, 1, 1),
            ProjectivePoint::new(1, 2, 3),
            ProjectivePoint::new(5, 8, 10),
        ];
        assert!(on_common_conic(&six));
        six[5] = ProjectivePoint::new(1, -1, 1);
        assert!(!on_common_conic(&six));
    }
}
