//! Binary codes of disjoint nodal curves.
//!
//! For disjoint `(-2)`-classes `C_1..C_k` the code `V` is the kernel of
//! `F_2^k -> Pic/2Pic`, `x -> sum x_i [C_i]`.

use std::collections::BTreeMap;

use bitvec::vec::BitVec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::lattice::DivisorClass;
use crate::linalg::{gf2_left_kernel, gf2_row_reduce};

/// Largest dimension for which all codewords are enumerated.
pub const ENUMERATION_CAP: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("class {index} ({class}) is not nodal: square {square}, K-degree {k_degree}")]
    NotNodal {
        index: usize,
        class: DivisorClass,
        square: i64,
        k_degree: i64,
    },
    #[error("classes {0} and {1} meet ({2})")]
    NotDisjoint(usize, usize, i64),
    #[error("classes live in different lattices")]
    MixedLattices,
    #[error("code dimension {0} exceeds the enumeration cap {ENUMERATION_CAP}")]
    TooLarge(usize),
}

/// A linear subspace of `F_2^k`, stored by a reduced echelon basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryCode {
    length: usize,
    generators: Vec<BitVec>,
}

impl BinaryCode {
    /// Span of the given vectors; dependent vectors are dropped.
    pub fn span(length: usize, vectors: Vec<BitVec>) -> Self {
        assert!(vectors.iter().all(|v| v.len() == length), "vector length");
        let mut rows = vectors;
        gf2_row_reduce(&mut rows);
        Self {
            length,
            generators: rows,
        }
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn dimension(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[BitVec] {
        &self.generators
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        let mut rows = self.generators.clone();
        rows.push(v.clone());
        gf2_row_reduce(&mut rows) == self.dimension()
    }

    /// All codewords, in Gray-code order starting from zero.
    pub fn codewords(&self) -> Result<Vec<BitVec>, CodeError> {
        let r = self.dimension();
        if r > ENUMERATION_CAP {
            return Err(CodeError::TooLarge(r));
        }
        let mut out = Vec::with_capacity(1 << r);
        let mut word = BitVec::repeat(false, self.length);
        out.push(word.clone());
        for step in 1usize..(1 << r) {
            word ^= &self.generators[step.trailing_zeros() as usize];
            out.push(word.clone());
        }
        Ok(out)
    }

    /// Weight distribution `weight -> count`.
    pub fn weights(&self) -> Result<BTreeMap<usize, usize>, CodeError> {
        let mut dist = BTreeMap::new();
        for w in self.codewords()? {
            *dist.entry(w.count_ones()).or_insert(0) += 1;
        }
        Ok(dist)
    }

    /// Weights of `samples` random codewords (random combinations of the
    /// generators); usable beyond the enumeration cap.
    pub fn sampled_weights(&self, samples: usize, seed: u64) -> BTreeMap<usize, usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut dist = BTreeMap::new();
        for _ in 0..samples {
            let mut word = BitVec::repeat(false, self.length);
            for g in &self.generators {
                if rng.gen::<bool>() {
                    word ^= g;
                }
            }
            *dist.entry(word.count_ones()).or_insert(0) += 1;
        }
        dist
    }

    pub fn is_doubly_even(&self) -> Result<bool, CodeError> {
        Ok(self.weights()?.keys().all(|w| w % 4 == 0))
    }

    /// Coordinates that are non-zero in some codeword.
    pub fn support(&self) -> Vec<usize> {
        (0..self.length)
            .filter(|&i| self.generators.iter().any(|g| g[i]))
            .collect()
    }
}

impl Serialize for BinaryCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let rows: Vec<String> = self.generators.iter().map(bit_string).collect();
        let mut st = serializer.serialize_struct("BinaryCode", 3)?;
        st.serialize_field("length", &self.length)?;
        st.serialize_field("dimension", &self.dimension())?;
        st.serialize_field("generators", &rows)?;
        st.end()
    }
}

pub fn bit_string(v: &BitVec) -> String {
    v.iter().map(|b| if *b { '1' } else { '0' }).collect()
}

pub fn parse_bits(s: &str) -> BitVec {
    s.chars().filter(|c| !c.is_whitespace()).map(|c| c == '1').collect()
}

/// Checks that the classes are pairwise disjoint `(-2)`-classes.
pub fn check_nodal(classes: &[DivisorClass]) -> Result<(), CodeError> {
    if let Some(first) = classes.first() {
        if classes.iter().any(|c| c.n() != first.n()) {
            return Err(CodeError::MixedLattices);
        }
    }
    for (i, c) in classes.iter().enumerate() {
        let (square, k_degree) = (c.square(), c.canonical_degree());
        if square != -2 || k_degree != 0 {
            return Err(CodeError::NotNodal {
                index: i,
                class: c.clone(),
                square,
                k_degree,
            });
        }
        for (j, d) in classes.iter().enumerate().skip(i + 1) {
            let p = c.pair(d).expect("same lattice");
            if p != 0 {
                return Err(CodeError::NotDisjoint(i, j, p));
            }
        }
    }
    Ok(())
}

/// The code `V = ker(F_2^k -> Pic/2Pic)` of disjoint nodal classes.
pub fn code_of_classes(classes: &[DivisorClass]) -> Result<BinaryCode, CodeError> {
    check_nodal(classes)?;
    let images: Vec<BitVec> = classes.iter().map(DivisorClass::mod2).collect();
    Ok(BinaryCode::span(classes.len(), gf2_left_kernel(&images)))
}

/// `dim Im psi` for the classes' mod-2 images.
pub fn image_dimension(classes: &[DivisorClass]) -> usize {
    let mut images: Vec<BitVec> = classes.iter().map(DivisorClass::mod2).collect();
    gf2_row_reduce(&mut images)
}

/// `DE(s)`: even-weight vectors of `F_2^s` with every coordinate doubled.
pub fn de_code(s: usize) -> BinaryCode {
    assert!(s >= 1, "DE(s) needs s >= 1");
    let gens = (1..s)
        .map(|i| {
            let mut v = BitVec::repeat(false, 2 * s);
            for j in [0, i] {
                v.set(2 * j, true);
                v.set(2 * j + 1, true);
            }
            v
        })
        .collect();
    BinaryCode::span(2 * s, gens)
}

/// JSON fixture: a lattice size and a list of classes in `[d, m1, ..., mn]` form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFixture {
    pub lattice_n: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub names: Vec<String>,
    pub classes: Vec<DivisorClass>,
}

impl CodeFixture {
    /// The classes, checked to live on the declared lattice.
    pub fn classes(&self) -> Result<&[DivisorClass], CodeError> {
        if self.classes.iter().any(|c| c.n() != self.lattice_n) {
            return Err(CodeError::MixedLattices);
        }
        Ok(&self.classes)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IsotropyCheck {
    /// `2 dim Im psi`.
    pub twice_image: usize,
    /// `dim Pic/2Pic`.
    pub ambient_rank: usize,
    pub holds: bool,
}

impl IsotropyCheck {
    /// `2 (k - dim V) <= rank`, from the raw dimensions.
    pub fn from_dimensions(k: usize, kernel_dim: usize, ambient_rank: usize) -> Self {
        let twice_image = 2 * (k - kernel_dim);
        Self {
            twice_image,
            ambient_rank,
            holds: twice_image <= ambient_rank,
        }
    }

    /// Same check for an arbitrary `F_2` image matrix (need not come from
    /// geometry).
    pub fn from_images(images: &[BitVec], ambient_rank: usize) -> Self {
        let k = images.len();
        let kernel = gf2_left_kernel(images).len();
        Self::from_dimensions(k, kernel, ambient_rank)
    }

    /// Lower bound on `dim V` implied by the inequality.
    pub fn kernel_lower_bound(k: usize, ambient_rank: usize) -> usize {
        k.saturating_sub(ambient_rank / 2)
    }
}

/// Image of disjoint nodal classes is totally isotropic in `Pic/2Pic`, so
/// `2 dim Im psi <= rank Pic`.
pub fn isotropy_bound_holds(classes: &[DivisorClass]) -> Result<IsotropyCheck, CodeError> {
    check_nodal(classes)?;
    let rank = classes.first().map_or(0, DivisorClass::rank);
    let images: Vec<BitVec> = classes.iter().map(DivisorClass::mod2).collect();
    Ok(IsotropyCheck::from_images(&images, rank))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::BlowupLattice;

    fn sides() -> Vec<DivisorClass> {
        let lat = BlowupLattice::new(6);
        vec![
            lat.class(1, &[1, 1, 0, 0, 1, 0]),
            lat.class(1, &[0, 1, 1, 0, 0, 1]),
            lat.class(1, &[0, 0, 1, 1, 1, 0]),
            lat.class(1, &[1, 0, 0, 1, 0, 1]),
        ]
    }

    #[test]
    fn four_sides_code() {
        let v = code_of_classes(&sides()).unwrap();
        assert_eq!(v.length(), 4);
        assert_eq!(v.generators(), &[parse_bits("1111")]);
        assert_eq!(v.weights().unwrap(), BTreeMap::from([(0, 1), (4, 1)]));
        assert!(v.is_doubly_even().unwrap());
        assert_eq!(image_dimension(&sides()) + v.dimension(), 4);
    }

    #[test]
    fn single_and_empty() {
        let one = code_of_classes(&sides()[..1]).unwrap();
        assert_eq!((one.length(), one.dimension()), (1, 0));
        let none = code_of_classes(&[]).unwrap();
        assert_eq!((none.length(), none.dimension()), (0, 0));
        assert_eq!(none.weights().unwrap(), BTreeMap::from([(0, 1)]));
    }

    #[test]
    fn rejects_bad_input() {
        let lat = BlowupLattice::new(6);
        let mut v = sides();
        v.push(lat.class(1, &[1, 0, 1]));
        assert!(matches!(code_of_classes(&v), Err(CodeError::NotNodal { index: 4, .. })));
        let overlapping = vec![sides()[0].clone(), lat.class(0, &[0, 1, -1])];
        assert!(matches!(
            code_of_classes(&overlapping),
            Err(CodeError::NotDisjoint(0, 1, _))
        ));
        let mixed = vec![sides()[0].clone(), BlowupLattice::new(7).class(0, &[1, -1])];
        assert_eq!(code_of_classes(&mixed), Err(CodeError::MixedLattices));
    }

    #[test]
    fn de_codes() {
        let de2 = de_code(2);
        assert_eq!(de2.generators(), &[parse_bits("1111")]);
        let de1 = de_code(1);
        assert_eq!((de1.length(), de1.dimension()), (2, 0));
        let de4 = de_code(4);
        assert_eq!(de4.dimension(), 3);
        assert!(de4.weights().unwrap().keys().all(|w| [0, 4, 8].contains(w)));
        let de5 = de_code(5);
        assert_eq!((de5.length(), de5.dimension()), (10, 4));
        assert!(de5.is_doubly_even().unwrap());
    }

    #[test]
    fn weight_two_is_not_doubly_even() {
        let c = BinaryCode::span(4, vec![parse_bits("1100")]);
        assert_eq!(c.weights().unwrap(), BTreeMap::from([(0, 1), (2, 1)]));
        assert!(!c.is_doubly_even().unwrap());
    }

    #[test]
    fn codewords_closed_under_addition() {
        let c = de_code(5);
        let words = c.codewords().unwrap();
        assert_eq!(words.len(), 16);
        for a in &words {
            for b in &words {
                let s = a.clone() ^ b;
                assert!(words.contains(&s));
                assert!(c.contains(&s));
            }
        }
    }

    #[test]
    fn enumeration_cap() {
        let big = BinaryCode::span(
            21,
            (0..21)
                .map(|i| {
                    let mut v = BitVec::repeat(false, 21);
                    v.set(i, true);
                    v
                })
                .collect(),
        );
        assert_eq!(big.weights(), Err(CodeError::TooLarge(21)));
        assert_eq!(big.is_doubly_even(), Err(CodeError::TooLarge(21)));
        let sampled = big.sampled_weights(50, 1);
        assert_eq!(sampled.values().sum::<usize>(), 50);
    }

    #[test]
    fn isotropy_examples() {
        let check = isotropy_bound_holds(&sides()).unwrap();
        assert_eq!(check, IsotropyCheck { twice_image: 6, ambient_rank: 7, holds: true });
        assert!(isotropy_bound_holds(&[]).unwrap().holds);
        assert_eq!(IsotropyCheck::kernel_lower_bound(10, 14), 3);
        // synthetic: four independent images in a rank 7 space
        let images: Vec<BitVec> = ["1000000", "0100000", "0010000", "0001000"]
            .iter()
            .map(|s| parse_bits(s))
            .collect();
        let bad = IsotropyCheck::from_images(&images, 7);
        assert_eq!(bad.twice_image, 8);
        assert!(!bad.holds);
    }
}
