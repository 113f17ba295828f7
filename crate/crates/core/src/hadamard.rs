//! Hadamard matrices: the Sylvester family, validation, normalization, and a small catalog.
//!
//! A Hadamard matrix of order `n` is an `n×n` matrix of `±1` entries with `H·Hᵀ = n·I`.
//! Entries are stored as `i8`. Every inner product of two rows is a sum of `n` terms of
//! magnitude one, so it is computed exactly in `i64` for any addressable order.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fixtures;
use crate::matrix::{rational, QMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HadamardMatrix {
    order: usize,
    entries: Vec<i8>,
}

/// Result of [`normalize`]: `original[i][j] = row_signature[i] · matrix[i][j] · column_signature[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub matrix: HadamardMatrix,
    pub column_signature: Vec<i8>,
    pub row_signature: Vec<i8>,
}

impl HadamardMatrix {
    /// Validates and wraps a square `±1` matrix.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        if !is_hadamard(rows) {
            return Err(Error::domain("rows do not form a Hadamard matrix"));
        }
        let order = rows.len();
        let entries = rows.iter().flatten().map(|&x| x as i8).collect();
        Ok(HadamardMatrix { order, entries })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.order + j]
    }

    pub fn column(&self, j: usize) -> Vec<i8> {
        (0..self.order).map(|i| self.get(i, j)).collect()
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.order)
            .map(|i| (0..self.order).map(|j| i64::from(self.get(i, j))).collect())
            .collect()
    }

    /// True when the first row and first column are all `+1`.
    pub fn is_normalized(&self) -> bool {
        (0..self.order).all(|k| self.get(0, k) == 1 && self.get(k, 0) == 1)
    }

    /// `[[H, H], [H, -H]]`, the doubling step shared by the Sylvester family and the merge.
    pub fn doubled(&self) -> HadamardMatrix {
        let n = self.order;
        let m = 2 * n;
        let mut entries = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                let s = if i >= n && j >= n { -1 } else { 1 };
                entries.push(s * self.get(i % n, j % n));
            }
        }
        HadamardMatrix { order: m, entries }
    }

    /// Permutes and signs columns: column `j` of the result is `signs[j] · self.column(perm[j])`.
    pub(crate) fn recolumned(&self, perm: &[usize], signs: &[i8]) -> HadamardMatrix {
        let n = self.order;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(signs[j] * self.get(i, perm[j]));
            }
        }
        HadamardMatrix { order: n, entries }
    }

    pub fn to_qmatrix(&self) -> QMatrix {
        QMatrix::from_fn(self.order, |i, j| rational(i64::from(self.get(i, j))))
    }
}

/// Standard Hadamard matrix of order `2^k` by repeated doubling of `[[1]]`.
pub fn sylvester(k: u32) -> Result<HadamardMatrix> {
    let n = 1usize
        .checked_shl(k)
        .filter(|&n| n.checked_mul(n).is_some() && k < usize::BITS / 2)
        .ok_or_else(|| Error::Capacity(format!("Sylvester matrix of order 2^{k} does not fit in memory addressing")))?;
    let mut h = HadamardMatrix {
        order: 1,
        entries: vec![1],
    };
    while h.order < n {
        h = h.doubled();
    }
    Ok(h)
}

/// True iff `m` is square, every entry is `±1`, and `m·mᵀ = n·I`.
pub fn is_hadamard(m: &[Vec<i64>]) -> bool {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return false;
    }
    if m.iter().flatten().any(|&x| x != 1 && x != -1) {
        return false;
    }
    for i in 0..n {
        for j in i..n {
            let dot: i64 = m[i].iter().zip(&m[j]).map(|(a, b)| a * b).sum();
            let expected = if i == j { n as i64 } else { 0 };
            if dot != expected {
                return false;
            }
        }
    }
    true
}

/// Signs columns by the first-row entries, then rows by the resulting first column.
pub fn normalize(h: &HadamardMatrix) -> Normalized {
    let n = h.order;
    let column_signature: Vec<i8> = (0..n).map(|j| h.get(0, j)).collect();
    let row_signature: Vec<i8> = (0..n).map(|i| h.get(i, 0) * column_signature[0]).collect();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            entries.push(row_signature[i] * h.get(i, j) * column_signature[j]);
        }
    }
    Normalized {
        matrix: HadamardMatrix { order: n, entries },
        column_signature,
        row_signature,
    }
}

impl Normalized {
    /// Undoes the signing, recovering the matrix that was normalized.
    pub fn restore(&self) -> HadamardMatrix {
        let n = self.matrix.order;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.row_signature[i] * self.matrix.get(i, j) * self.column_signature[j]);
            }
        }
        HadamardMatrix { order: n, entries }
    }
}

/// Orders `2^k` give the Sylvester matrix; orders `12·2^k` give the built-in order-12
/// matrix doubled `k` times.
pub fn catalog(order: usize) -> Result<HadamardMatrix> {
    if order.is_power_of_two() {
        return sylvester(order.trailing_zeros());
    }
    if order.is_multiple_of(12) && (order / 12).is_power_of_two() {
        let mut h = fixtures::hadamard_12()?;
        while h.order < order {
            h = h.doubled();
        }
        return Ok(h);
    }
    Err(Error::NotInCatalog(order))
}

impl fmt::Display for HadamardMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.order {
            let row: Vec<&str> = (0..self.order)
                .map(|j| if self.get(i, j) == 1 { "1" } else { "-1" })
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for HadamardMatrix {
    type Err = Error;

    /// One row per line; entries `+`/`-` or `1`/`-1`, whitespace separated.
    /// Rows written as an unbroken `+-` string are also accepted.
    fn from_str(s: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for line in s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let tokens: Vec<&str> = if line.chars().all(|c| c == '+' || c == '-') {
                line.split("").filter(|t| !t.is_empty()).collect()
            } else {
                line.split_whitespace().collect()
            };
            let row = tokens
                .into_iter()
                .map(|t| match t {
                    "+" | "1" | "+1" => Ok(1),
                    "-" | "-1" => Ok(-1),
                    other => Err(Error::parse(format!("bad Hadamard entry {other:?}"))),
                })
                .collect::<Result<Vec<i64>>>()?;
            rows.push(row);
        }
        HadamardMatrix::from_rows(&rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sylvester_small_orders() {
        assert_eq!(sylvester(0).unwrap().rows(), vec![vec![1]]);
        assert_eq!(sylvester(1).unwrap().rows(), vec![vec![1, 1], vec![1, -1]]);
        assert_eq!(
            sylvester(2).unwrap().rows(),
            vec![vec![1, 1, 1, 1], vec![1, -1, 1, -1], vec![1, 1, -1, -1], vec![1, -1, -1, 1]]
        );
    }

    #[test]
    fn sylvester_capacity() {
        assert!(matches!(sylvester(usize::BITS), Err(Error::Capacity(_))));
        assert!(matches!(sylvester(40), Err(Error::Capacity(_))));
    }

    #[test]
    fn sylvester_orthogonal_up_to_twelve() {
        for k in 0..=9 {
            let h = sylvester(k).unwrap();
            assert!(is_hadamard(&h.rows()), "k = {k}");
            assert!(h.is_normalized());
        }
    }

    #[test]
    #[ignore = "order 4096 takes a few seconds in debug builds"]
    fn sylvester_orthogonal_large() {
        for k in 10..=12 {
            assert!(is_hadamard(&sylvester(k).unwrap().rows()));
        }
    }

    #[test]
    fn predicate_rejects_non_hadamard() {
        assert!(!is_hadamard(&[vec![1, 1], vec![1, 1]]));
        assert!(!is_hadamard(&[vec![1, 1, 1], vec![1, -1, 1]]));
        assert!(!is_hadamard(&[vec![1, 0], vec![0, 1]]));
        assert!(!is_hadamard(&[]));
    }

    #[test]
    fn catalog_entries() {
        let h12 = catalog(12).unwrap();
        assert!(is_hadamard(&h12.rows()));
        assert!(h12.is_normalized());
        assert_eq!(catalog(8).unwrap(), sylvester(3).unwrap());
        assert_eq!(catalog(24).unwrap(), h12.doubled());
        assert_eq!(catalog(6), Err(Error::NotInCatalog(6)));
        assert_eq!(catalog(20), Err(Error::NotInCatalog(20)));
    }

    #[test]
    fn normalize_negated_row() {
        let h = HadamardMatrix::from_rows(&[vec![1, 1], vec![-1, 1]]).unwrap();
        let norm = normalize(&h);
        assert_eq!(norm.matrix, sylvester(1).unwrap());
        assert_eq!(norm.row_signature, vec![1, -1]);
        assert_eq!(norm.column_signature, vec![1, 1]);
    }

    #[test]
    fn normalize_already_normal() {
        let h = sylvester(2).unwrap();
        let norm = normalize(&h);
        assert_eq!(norm.matrix, h);
        assert!(norm.row_signature.iter().chain(&norm.column_signature).all(|&s| s == 1));
    }

    #[test]
    fn normalize_column_permuted() {
        let h = sylvester(2).unwrap().recolumned(&[3, 1, 0, 2], &[1; 4]);
        let norm = normalize(&h);
        assert!(norm.matrix.is_normalized());
        assert!(is_hadamard(&norm.matrix.rows()));
        assert_eq!(norm.restore(), h);
    }

    #[test]
    fn text_format_round_trip_and_plus_minus() {
        let h = catalog(12).unwrap();
        assert_eq!(h.to_string().parse::<HadamardMatrix>().unwrap(), h);
        let pm: HadamardMatrix = "+ +\n+ -\n".parse().unwrap();
        assert_eq!(pm, sylvester(1).unwrap());
        let packed: HadamardMatrix = "++++\n+-+-\n++--\n+--+\n".parse().unwrap();
        assert_eq!(packed, sylvester(2).unwrap());
        assert!("1 1\n1 1\n".parse::<HadamardMatrix>().is_err());
    }

    fn arbitrary_hadamard() -> impl Strategy<Value = HadamardMatrix> {
        (0u32..5).prop_flat_map(|k| {
            let n = 1usize << k;
            (
                Just(k),
                Just(n).prop_shuffle_perm(),
                proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], n),
                proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], n),
            )
        })
        .prop_map(|(k, perm, col_signs, row_signs)| {
            let h = sylvester(k).unwrap().recolumned(&perm, &col_signs);
            let n = h.order();
            let mut entries = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    entries.push(row_signs[i] * h.get(i, j));
                }
            }
            HadamardMatrix { order: n, entries }
        })
    }

    trait ShufflePerm {
        fn prop_shuffle_perm(self) -> BoxedStrategy<Vec<usize>>;
    }

    impl ShufflePerm for Just<usize> {
        fn prop_shuffle_perm(self) -> BoxedStrategy<Vec<usize>> {
            let n = self.0;
            Just((0..n).collect::<Vec<_>>()).prop_shuffle().boxed()
        }
    }

    proptest! {
        #[test]
        fn normalize_idempotent_and_reversible(h in arbitrary_hadamard()) {
            prop_assert!(is_hadamard(&h.rows()));
            let once = normalize(&h);
            prop_assert!(is_hadamard(&once.matrix.rows()));
            prop_assert!(once.matrix.is_normalized());
            prop_assert_eq!(&normalize(&once.matrix).matrix, &once.matrix);
            prop_assert_eq!(once.restore(), h);
        }
    }
}
