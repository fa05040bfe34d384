//! Exact linear algebra over the integers (rank over `Q`) and over `F_2`.

use bitvec::vec::BitVec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Rank over `Q` of an integer matrix given by rows.
///
/// Fraction-free elimination; each updated row is divided by its content so
/// entries stay small.
pub fn rank_over_q(mut rows: Vec<Vec<BigInt>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    debug_assert!(rows.iter().all(|r| r.len() == cols));
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len())
            .filter(|&i| !rows[i][col].is_zero())
            .min_by_key(|&i| rows[i][col].abs())
        else {
            continue;
        };
        rows.swap(rank, pivot);
        let (top, rest) = rows.split_at_mut(rank + 1);
        let prow = &top[rank];
        let p = &prow[col];
        for row in rest.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let g = p.gcd(&row[col]);
            let a = p / &g;
            let b = &row[col] / &g;
            for (x, y) in row.iter_mut().zip(prow.iter()).skip(col) {
                *x = &*x * &a - y * &b;
            }
            make_primitive(row);
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

fn make_primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g > BigInt::from(1) {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

/// Row-reduces `rows` over `F_2` in place and returns the rank.
///
/// On return the first `rank` rows form a reduced echelon basis of the row
/// space; the remaining rows are zero.
pub fn gf2_row_reduce(rows: &mut Vec<BitVec>) -> usize {
    let cols = rows.first().map_or(0, BitVec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&i| rows[i][col]) else {
            continue;
        };
        rows.swap(rank, pivot);
        let prow = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[col] {
                *row ^= &prow;
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rank
}

/// Basis of `{x in F_2^k : sum x_i rows[i] = 0}` (the left kernel).
pub fn gf2_left_kernel(rows: &[BitVec]) -> Vec<BitVec> {
    let k = rows.len();
    let width = rows.first().map_or(0, BitVec::len);
    // augment each row with the identity to track combinations
    let mut aug: Vec<BitVec> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            v.extend((0..k).map(|j| j == i));
            v
        })
        .collect();
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..aug.len()).find(|&i| aug[i][col]) else {
            continue;
        };
        aug.swap(rank, pivot);
        let prow = aug[rank].clone();
        for (i, row) in aug.iter_mut().enumerate() {
            if i != rank && row[col] {
                *row ^= &prow;
            }
        }
        rank += 1;
    }
    let mut kernel: Vec<BitVec> = aug[rank..]
        .iter()
        .map(|r| r[width..].iter().by_vals().collect())
        .collect();
    gf2_row_reduce(&mut kernel);
    kernel
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn bits(s: &str) -> BitVec {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn rank_small_cases() {
        assert_eq!(rank_over_q(vec![]), 0);
        assert_eq!(rank_over_q(m(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank_over_q(m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank_over_q(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])), 2);
        assert_eq!(rank_over_q(m(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 5]])), 3);
        assert_eq!(rank_over_q(m(&[&[0, 6], &[0, 4], &[3, 1]])), 2);
    }

    #[test]
    fn gf2_kernel_of_four_sides() {
        // mod 2 images of the four (-2)-lines of the quadrilateral
        let rows = vec![
            bits("1110010"),
            bits("1011001"),
            bits("1001110"),
            bits("1100101"),
        ];
        let ker = gf2_left_kernel(&rows);
        assert_eq!(ker, vec![bits("1111")]);
        let mut r = rows.clone();
        assert_eq!(gf2_row_reduce(&mut r), 3);
    }

    #[test]
    fn gf2_kernel_empty() {
        assert!(gf2_left_kernel(&[]).is_empty());
        assert_eq!(gf2_left_kernel(&[bits("000")]), vec![bits("1")]);
    }
}
