//! Picard lattice of the projective plane blown up at `n` distinct points.
//!
//! A class is stored as `(d; m_1, ..., m_n)` and stands for `d*l - sum m_i e_i`,
//! where `l` is the pull-back of a line and `e_i` the exceptional curves.
//! The intersection form is diagonal: `l^2 = 1`, `e_i^2 = -1`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use bitvec::vec::BitVec;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("classes live in lattices of different rank ({left} vs {right})")]
    RankMismatch { left: usize, right: usize },
    #[error("integer overflow in lattice arithmetic")]
    Overflow,
    #[error("class {0} is not divisible by 2")]
    NotDivisible(DivisorClass),
    #[error("castelnuovo bound needs r >= 3 and d >= 1, got d = {degree}, r = {dimension}")]
    CastelnuovoDomain { degree: u64, dimension: u64 },
}

/// The lattice `Pic` of `P^2` blown up at `n` points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlowupLattice {
    n: usize,
}

impl BlowupLattice {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    /// Number of exceptional classes.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.n + 1
    }

    pub fn zero(&self) -> DivisorClass {
        DivisorClass::new(0, vec![0; self.n])
    }

    pub fn line(&self) -> DivisorClass {
        DivisorClass::new(1, vec![0; self.n])
    }

    /// The exceptional class `e_i`, 1-based.
    pub fn exceptional(&self, i: usize) -> DivisorClass {
        assert!(
            (1..=self.n).contains(&i),
            "exceptional index {i} outside 1..={}",
            self.n
        );
        let mut mults = vec![0; self.n];
        mults[i - 1] = -1;
        DivisorClass::new(0, mults)
    }

    /// `K = -3l + e_1 + ... + e_n`.
    pub fn canonical(&self) -> DivisorClass {
        DivisorClass::new(-3, vec![-1; self.n])
    }

    /// Builds `d*l - sum m_i e_i`; `mults` may be shorter than `n` (zero padded).
    pub fn class(&self, degree: i64, mults: &[i64]) -> DivisorClass {
        assert!(mults.len() <= self.n, "too many multiplicities for n = {}", self.n);
        let mut m = mults.to_vec();
        m.resize(self.n, 0);
        DivisorClass::new(degree, m)
    }

    /// Blows up one more point; the new exceptional class is `e_{n+1}`.
    pub fn blow_up(&self) -> BlowupLattice {
        BlowupLattice::new(self.n + 1)
    }

    /// Pull-back of a class along `self.blow_up() -> self`.
    pub fn lift(&self, class: &DivisorClass) -> Result<DivisorClass, LatticeError> {
        self.check(class)?;
        let mut mults = class.mults.clone();
        mults.push(0);
        Ok(DivisorClass::new(class.degree, mults))
    }

    pub fn contains(&self, class: &DivisorClass) -> bool {
        class.mults.len() == self.n
    }

    fn check(&self, class: &DivisorClass) -> Result<(), LatticeError> {
        if self.contains(class) {
            Ok(())
        } else {
            Err(LatticeError::RankMismatch {
                left: self.rank(),
                right: class.rank(),
            })
        }
    }

    pub fn arithmetic_genus(&self, class: &DivisorClass) -> Result<i64, LatticeError> {
        self.check(class)?;
        arithmetic_genus(class)
    }

    pub fn riemann_roch_chi(&self, class: &DivisorClass) -> Result<i64, LatticeError> {
        self.check(class)?;
        riemann_roch_chi(class)
    }
}

/// An integer class `d*l - sum m_i e_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    degree: i64,
    mults: Vec<i64>,
}

impl DivisorClass {
    pub fn new(degree: i64, mults: Vec<i64>) -> Self {
        Self { degree, mults }
    }

    /// Parses the `[d, m1, ..., mn]` array form.
    pub fn from_array(coords: &[i64]) -> Option<Self> {
        let (&degree, mults) = coords.split_first()?;
        Some(Self::new(degree, mults.to_vec()))
    }

    pub fn to_array(&self) -> Vec<i64> {
        std::iter::once(self.degree)
            .chain(self.mults.iter().copied())
            .collect()
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn mults(&self) -> &[i64] {
        &self.mults
    }

    /// Multiplicity at the 1-based point `i`.
    pub fn mult(&self, i: usize) -> i64 {
        self.mults[i - 1]
    }

    pub fn n(&self) -> usize {
        self.mults.len()
    }

    pub fn rank(&self) -> usize {
        self.mults.len() + 1
    }

    pub fn lattice(&self) -> BlowupLattice {
        BlowupLattice::new(self.n())
    }

    pub fn is_zero(&self) -> bool {
        self.degree == 0 && self.mults.iter().all(|&m| m == 0)
    }

    /// Intersection product `d d' - sum m_i m'_i`.
    pub fn pair(&self, other: &DivisorClass) -> Result<i64, LatticeError> {
        if self.n() != other.n() {
            return Err(LatticeError::RankMismatch {
                left: self.rank(),
                right: other.rank(),
            });
        }
        let mut acc = i128::from(self.degree) * i128::from(other.degree);
        for (a, b) in self.mults.iter().zip(&other.mults) {
            acc -= i128::from(*a) * i128::from(*b);
        }
        i64::try_from(acc).map_err(|_| LatticeError::Overflow)
    }

    pub fn square(&self) -> i64 {
        self.pair(self).expect("same lattice")
    }

    /// `K . D` with `K` the canonical class of the class's own lattice.
    pub fn canonical_degree(&self) -> i64 {
        self.pair(&self.lattice().canonical()).expect("same lattice")
    }

    pub fn checked_add(&self, other: &DivisorClass) -> Result<DivisorClass, LatticeError> {
        self.zip_with(other, i64::checked_add)
    }

    pub fn checked_sub(&self, other: &DivisorClass) -> Result<DivisorClass, LatticeError> {
        self.zip_with(other, i64::checked_sub)
    }

    pub fn checked_scale(&self, k: i64) -> Result<DivisorClass, LatticeError> {
        let degree = self.degree.checked_mul(k).ok_or(LatticeError::Overflow)?;
        let mults = self
            .mults
            .iter()
            .map(|m| m.checked_mul(k).ok_or(LatticeError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(DivisorClass::new(degree, mults))
    }

    fn zip_with(
        &self,
        other: &DivisorClass,
        op: fn(i64, i64) -> Option<i64>,
    ) -> Result<DivisorClass, LatticeError> {
        if self.n() != other.n() {
            return Err(LatticeError::RankMismatch {
                left: self.rank(),
                right: other.rank(),
            });
        }
        let degree = op(self.degree, other.degree).ok_or(LatticeError::Overflow)?;
        let mults = self
            .mults
            .iter()
            .zip(&other.mults)
            .map(|(a, b)| op(*a, *b).ok_or(LatticeError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(DivisorClass::new(degree, mults))
    }

    /// Exact half, if every coordinate is even.
    pub fn halve(&self) -> Result<DivisorClass, LatticeError> {
        if !self.mod2().not_any() {
            return Err(LatticeError::NotDivisible(self.clone()));
        }
        Ok(DivisorClass::new(
            self.degree / 2,
            self.mults.iter().map(|m| m / 2).collect(),
        ))
    }

    /// Image in `Pic / 2 Pic`, one bit per coordinate `[d, m_1, ..., m_n]`.
    pub fn mod2(&self) -> BitVec {
        std::iter::once(self.degree)
            .chain(self.mults.iter().copied())
            .map(|c| c.rem_euclid(2) == 1)
            .collect()
    }

    /// Relabels points: the multiplicity at `i` moves to `perm[i]` (0-based).
    pub fn permute_points(&self, perm: &[usize]) -> DivisorClass {
        assert_eq!(perm.len(), self.n(), "permutation length");
        let mut mults = vec![0; self.n()];
        for (i, &j) in perm.iter().enumerate() {
            mults[j] = self.mults[i];
        }
        DivisorClass::new(self.degree, mults)
    }
}

impl fmt::Display for DivisorClass {
    /// Prints e.g. `5l-e1-2e2-3e4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        match self.degree {
            0 => {}
            1 => out.push('l'),
            -1 => out.push_str("-l"),
            d => out.push_str(&format!("{d}l")),
        }
        for (i, &m) in self.mults.iter().enumerate() {
            let c = -m;
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if out.is_empty() { "" } else { "+" };
            let abs = c.abs();
            if abs == 1 {
                out.push_str(&format!("{sign}e{}", i + 1));
            } else {
                out.push_str(&format!("{sign}{abs}e{}", i + 1));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_array().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DivisorClass {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let coords = Vec::<i64>::deserialize(deserializer)?;
        DivisorClass::from_array(&coords)
            .ok_or_else(|| serde::de::Error::custom("a class needs at least the degree entry"))
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        self.checked_add(rhs).expect("class addition")
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: DivisorClass) -> DivisorClass {
        &self + &rhs
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        self.checked_sub(rhs).expect("class subtraction")
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: DivisorClass) -> DivisorClass {
        &self - &rhs
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        self.checked_scale(-1).expect("class negation")
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        -&self
    }
}

impl Mul<&DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.checked_scale(self).expect("class scaling")
    }
}

impl Mul<DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: DivisorClass) -> DivisorClass {
        self * &rhs
    }
}

impl std::iter::Sum for DivisorClass {
    /// Panics on an empty iterator; the lattice rank is not known then.
    fn sum<I: Iterator<Item = DivisorClass>>(iter: I) -> Self {
        iter.reduce(|a, b| a + b).expect("sum of an empty set of classes")
    }
}

/// `p_a(D) = D(D+K)/2 + 1`.
pub fn arithmetic_genus(class: &DivisorClass) -> Result<i64, LatticeError> {
    let k = class.lattice().canonical();
    let adj = class.pair(&class.checked_add(&k)?)?;
    Ok(adj / 2 + 1)
}

/// `chi(O(D)) = 1 + D(D-K)/2` on a rational surface.
pub fn riemann_roch_chi(class: &DivisorClass) -> Result<i64, LatticeError> {
    let k = class.lattice().canonical();
    let v = class.pair(&class.checked_sub(&k)?)?;
    Ok(1 + v / 2)
}

/// Castelnuovo's bound for the genus of a non-degenerate degree `d` curve in `P^r`.
pub fn castelnuovo_bound(degree: u64, dimension: u64) -> Result<u64, LatticeError> {
    if dimension < 3 || degree < 1 {
        return Err(LatticeError::CastelnuovoDomain { degree, dimension });
    }
    let m = (degree - 1) / (dimension - 1);
    let eps = degree - 1 - m * (dimension - 1);
    Ok(m * m.saturating_sub(1) / 2 * (dimension - 1) + m * eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn six() -> BlowupLattice {
        BlowupLattice::new(6)
    }

    #[test]
    fn basis_pairing() {
        let lat = six();
        assert_eq!(lat.line().pair(&lat.line()), Ok(1));
        assert_eq!(lat.exceptional(3).square(), -1);
        assert_eq!(lat.exceptional(3).pair(&lat.exceptional(4)), Ok(0));
        assert_eq!(lat.line().pair(&lat.exceptional(1)), Ok(0));
        assert_eq!(lat.canonical().to_array(), vec![-3, -1, -1, -1, -1, -1, -1]);
    }

    #[test]
    fn quadrilateral_relations() {
        let lat = six();
        let delta1 = lat.class(1, &[1, 0, 1]);
        let f1 = lat.class(2, &[0, 1, 0, 1, 1, 1]);
        let f2 = lat.class(2, &[1, 0, 1, 0, 1, 1]);
        let s1 = lat.class(1, &[1, 1, 0, 0, 1]);
        assert_eq!(delta1.pair(&f1), Ok(2));
        assert_eq!(delta1.pair(&f2), Ok(0));
        assert_eq!(delta1.pair(&s1), Ok(0));
    }

    #[test]
    fn rank_mismatch_is_an_error() {
        let a = BlowupLattice::new(6).line();
        let b = BlowupLattice::new(7).line();
        assert_eq!(
            a.pair(&b),
            Err(LatticeError::RankMismatch { left: 7, right: 8 })
        );
        assert!(a.checked_add(&b).is_err());
    }

    #[test]
    fn genus_examples() {
        let lat = six();
        let f1 = lat.class(2, &[0, 1, 0, 1, 1, 1]);
        assert_eq!(f1.square(), 0);
        assert_eq!(f1.canonical_degree(), -2);
        assert_eq!(arithmetic_genus(&f1), Ok(0));
        assert_eq!(arithmetic_genus(&lat.zero()), Ok(1));
        // D^2 = 12, K.D = 0
        let h = BlowupLattice::new(13).class(7, &[2, 2, 2, 2, 2, 2, 2, 2, 1, 1, 1, 1, 1]);
        assert_eq!((h.square(), h.canonical_degree()), (12, 0));
        assert_eq!(arithmetic_genus(&h), Ok(7));
        assert_eq!(riemann_roch_chi(&h), Ok(7));
    }

    #[test]
    fn riemann_roch_examples() {
        let lat = six();
        assert_eq!(riemann_roch_chi(&lat.zero()), Ok(1));
        assert_eq!(riemann_roch_chi(&-lat.canonical()), Ok(4));
    }

    #[test]
    fn blow_up_examples() {
        let lat = six();
        let up = lat.blow_up();
        assert_eq!(up.n(), 7);
        assert_eq!(up.canonical().to_array(), vec![-3, -1, -1, -1, -1, -1, -1, -1]);
        let f1 = lat.class(2, &[0, 1, 0, 1, 1, 1]);
        let delta1 = lat.class(1, &[1, 0, 1]);
        let (lf, ld) = (lat.lift(&f1).unwrap(), lat.lift(&delta1).unwrap());
        assert_eq!(lf.pair(&ld), Ok(2));
        assert_eq!(up.exceptional(7).square(), -1);
        // K' + L3 of the seven point construction
        let l3 = up.class(4, &[2, 2, 2, 1, 1, 1, 1]);
        assert_eq!((up.canonical() + l3).to_array(), vec![1, 1, 1, 1, 0, 0, 0, 0]);
    }

    #[test]
    fn lift_rejects_foreign_class() {
        let lat = six();
        assert!(lat.lift(&BlowupLattice::new(5).line()).is_err());
    }

    #[test]
    fn mod2_examples() {
        let lat = six();
        let l1 = lat.class(5, &[1, 2, 1, 3, 2, 2]);
        assert!((2 * &l1).mod2().not_any());
        let sides = [
            lat.class(1, &[1, 1, 0, 0, 1, 0]),
            lat.class(1, &[0, 1, 1, 0, 0, 1]),
            lat.class(1, &[0, 0, 1, 1, 1, 0]),
            lat.class(1, &[1, 0, 0, 1, 0, 1]),
        ];
        let sum: DivisorClass = sides.iter().cloned().sum();
        assert_eq!(sum.to_array(), vec![4, 2, 2, 2, 2, 2, 2]);
        assert!(sum.mod2().not_any());
        assert_eq!(sum.halve().unwrap().to_array(), vec![2, 1, 1, 1, 1, 1, 1]);
        assert!(sides[0].halve().is_err());
    }

    #[test]
    fn castelnuovo_examples() {
        assert_eq!(castelnuovo_bound(8, 5), Ok(3));
        // twisted cubic
        assert_eq!(castelnuovo_bound(3, 3), Ok(0));
        assert_eq!(castelnuovo_bound(4, 3), Ok(1));
        assert_eq!(castelnuovo_bound(12, 6), Ok(7));
        assert_eq!(castelnuovo_bound(3, 4), Ok(0));
        assert!(castelnuovo_bound(4, 2).is_err());
        assert!(castelnuovo_bound(0, 3).is_err());
    }

    #[test]
    fn display_format() {
        let lat = six();
        assert_eq!(lat.class(5, &[1, 2, 1, 3, 2, 2]).to_string(), "5l-e1-2e2-e3-3e4-2e5-2e6");
        assert_eq!(lat.exceptional(4).to_string(), "e4");
        assert_eq!(lat.zero().to_string(), "0");
    }

    #[test]
    fn json_array_form() {
        let c = six().class(2, &[0, 1, 0, 1, 1, 1]);
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, "[2,0,1,0,1,1,1]");
        let back: DivisorClass = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<DivisorClass>("[]").is_err());
    }
}
