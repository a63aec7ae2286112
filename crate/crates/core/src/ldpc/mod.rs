//! Systematic irregular LDPC codes: construction from edge-perspective degree
//! distributions, GF(2) systematic encoding and sum-product decoding with
//! a-priori LLRs on the information bits.

mod alist;
mod construct;
mod decode;

pub use construct::build_code;
pub use decode::{sum_product_decode, LdpcDecodeOutput};

use crate::error::{check_binary, check_len, invalid, Result};

/// Edge-perspective degree distributions as `(degree, fraction of edges)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeDistributions {
    variable: Vec<(usize, f64)>,
    check: Vec<(usize, f64)>,
}

const FRACTION_TOL: f64 = 1e-6;

impl DegreeDistributions {
    pub fn new(variable: Vec<(usize, f64)>, check: Vec<(usize, f64)>) -> Result<Self> {
        for (name, list, min_deg) in [("variable", &variable, 1), ("check", &check, 2)] {
            if list.is_empty() {
                return Err(invalid(
                    "degree distribution",
                    format!("{name} list is empty"),
                ));
            }
            if let Some(&(d, f)) = list.iter().find(|&&(d, f)| d < min_deg || !(f >= 0.0)) {
                return Err(invalid(
                    "degree distribution",
                    format!("{name} entry ({d}, {f}) is invalid"),
                ));
            }
            let total: f64 = list.iter().map(|&(_, f)| f).sum();
            if (total - 1.0).abs() > FRACTION_TOL {
                return Err(invalid(
                    "degree distribution",
                    format!("{name} fractions sum to {total}"),
                ));
            }
        }
        Ok(Self { variable, check })
    }

    /// The rate-1/2 "Irregular 3" ensemble:
    /// `λ(x) = .19606x + .24039x² + .00228x⁵ + .05516x⁶ + .16602x⁷ + .04088x⁸
    ///  + .01064x⁹ + .00221x²⁷ + .28636x²⁹`,
    /// `ρ(x) = .00749x⁷ + .99101x⁸ + .00150x⁹`.
    pub fn irregular3() -> Self {
        Self::new(
            vec![
                (2, 0.19606),
                (3, 0.24039),
                (6, 0.00228),
                (7, 0.05516),
                (8, 0.16602),
                (9, 0.04088),
                (10, 0.01064),
                (28, 0.00221),
                (30, 0.28636),
            ],
            vec![(8, 0.00749), (9, 0.99101), (10, 0.00150)],
        )
        .expect("valid ensemble")
    }

    pub fn regular(var_degree: usize, check_degree: usize) -> Result<Self> {
        Self::new(vec![(var_degree, 1.0)], vec![(check_degree, 1.0)])
    }

    pub fn variable(&self) -> &[(usize, f64)] {
        &self.variable
    }

    pub fn check(&self) -> &[(usize, f64)] {
        &self.check
    }

    /// `Σ λ_d / d`: variable nodes per edge.
    pub fn variable_nodes_per_edge(&self) -> f64 {
        self.variable.iter().map(|&(d, f)| f / d as f64).sum()
    }

    /// `Σ ρ_d / d`: check nodes per edge.
    pub fn check_nodes_per_edge(&self) -> f64 {
        self.check.iter().map(|&(d, f)| f / d as f64).sum()
    }

    /// `1 - (Σ ρ_d/d) / (Σ λ_d/d)`.
    pub fn design_rate(&self) -> f64 {
        1.0 - self.check_nodes_per_edge() / self.variable_nodes_per_edge()
    }
}

/// A binary LDPC code with a full-rank parity-check matrix and a systematic encoder.
#[derive(Debug, Clone, PartialEq)]
pub struct LdpcCode {
    n: usize,
    /// Variable indices of each check.
    rows: Vec<Vec<usize>>,
    /// Check indices of each variable.
    cols: Vec<Vec<usize>>,
    /// Codeword positions that carry the information bits, in info order.
    systematic: Vec<usize>,
    /// `info_index[v]` is the information index stored at position `v`, if any.
    info_index: Vec<Option<usize>>,
    /// Parity position of each row of the reduced generator.
    parity_pos: Vec<usize>,
    /// Packed GF(2) rows: parity bit `parity_pos[i]` is the parity of `info & gen[i]`.
    gen: Vec<Vec<u64>>,
}

impl LdpcCode {
    /// Builds a code from the check rows of `H` (each a list of variable
    /// indices). Linearly dependent rows are dropped so that `H` has full
    /// rank; the non-pivot columns of the row-reduced matrix become the
    /// systematic positions.
    pub fn from_parity_checks(n: usize, rows: &[Vec<usize>]) -> Result<Self> {
        if n == 0 {
            return Err(invalid("N", "code length must be positive"));
        }
        let words = n.div_ceil(64);
        let mut dense_rows = Vec::with_capacity(rows.len());
        for row in rows {
            let mut dense = vec![0u64; words];
            for &v in row {
                if v >= n {
                    return Err(invalid("H", format!("column {v} out of range for N = {n}")));
                }
                if dense[v / 64] >> (v % 64) & 1 == 1 {
                    return Err(invalid("H", format!("repeated column {v} in a row")));
                }
                dense[v / 64] |= 1 << (v % 64);
            }
            dense_rows.push(dense);
        }

        // Drop dependent rows: insert each row into an echelon basis.
        let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
        let mut kept = Vec::new();
        for (idx, row) in dense_rows.iter().enumerate() {
            let mut r = row.clone();
            for (pivot, b) in &basis {
                if r[pivot / 64] >> (pivot % 64) & 1 == 1 {
                    xor_into(&mut r, b);
                }
            }
            if let Some(p) = first_one(&r) {
                // Keep the basis reduced on the new pivot.
                for (_, b) in basis.iter_mut() {
                    if b[p / 64] >> (p % 64) & 1 == 1 {
                        xor_into(b, &r);
                    }
                }
                basis.push((p, r));
                kept.push(idx);
            }
        }

        // The basis is now the reduced row echelon form of the kept rows.
        let mut is_pivot = vec![false; n];
        for (p, _) in &basis {
            is_pivot[*p] = true;
        }
        let systematic: Vec<usize> = (0..n).filter(|&v| !is_pivot[v]).collect();
        let mut info_index = vec![None; n];
        for (j, &v) in systematic.iter().enumerate() {
            info_index[v] = Some(j);
        }
        let info_words = systematic.len().div_ceil(64).max(1);
        let mut parity_pos = Vec::with_capacity(basis.len());
        let mut gen = Vec::with_capacity(basis.len());
        for (p, r) in &basis {
            let mut g = vec![0u64; info_words];
            for (j, &v) in systematic.iter().enumerate() {
                if r[v / 64] >> (v % 64) & 1 == 1 {
                    g[j / 64] |= 1 << (j % 64);
                }
            }
            parity_pos.push(*p);
            gen.push(g);
        }

        let kept_rows: Vec<Vec<usize>> = kept.iter().map(|&i| rows[i].clone()).collect();
        let mut cols = vec![Vec::new(); n];
        for (c, row) in kept_rows.iter().enumerate() {
            for &v in row {
                cols[v].push(c);
            }
        }
        Ok(Self {
            n,
            rows: kept_rows,
            cols,
            systematic,
            info_index,
            parity_pos,
            gen,
        })
    }

    /// Codeword length `N`.
    pub fn code_len(&self) -> usize {
        self.n
    }

    /// Information length `L = N - rank(H)`.
    pub fn info_len(&self) -> usize {
        self.systematic.len()
    }

    pub fn num_checks(&self) -> usize {
        self.rows.len()
    }

    pub fn rate(&self) -> f64 {
        self.info_len() as f64 / self.n as f64
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn cols(&self) -> &[Vec<usize>] {
        &self.cols
    }

    /// Positions of the information bits inside a codeword.
    pub fn systematic_positions(&self) -> &[usize] {
        &self.systematic
    }

    pub(crate) fn info_index(&self, v: usize) -> Option<usize> {
        self.info_index[v]
    }

    pub fn num_edges(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Systematic encoding: `info` lands on the systematic positions and the
    /// remaining bits satisfy every parity check.
    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        check_len("information bits", self.info_len(), info.len())?;
        check_binary(info)?;
        let mut packed = vec![0u64; self.gen.first().map_or(1, Vec::len)];
        for (j, &b) in info.iter().enumerate() {
            packed[j / 64] |= u64::from(b) << (j % 64);
        }
        let mut cw = vec![0u8; self.n];
        for (j, &v) in self.systematic.iter().enumerate() {
            cw[v] = info[j];
        }
        for (g, &p) in self.gen.iter().zip(&self.parity_pos) {
            let ones: u32 = g
                .iter()
                .zip(&packed)
                .map(|(a, b)| (a & b).count_ones())
                .sum();
            cw[p] = (ones & 1) as u8;
        }
        Ok(cw)
    }

    /// `H · word^T` as a list of unsatisfied checks (empty for a codeword).
    pub fn syndrome(&self, word: &[u8]) -> Vec<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, row)| row.iter().fold(0u8, |acc, &v| acc ^ word[v]) & 1 == 1)
            .map(|(c, _)| c)
            .collect()
    }

    pub fn is_codeword(&self, word: &[u8]) -> bool {
        word.len() == self.n && self.syndrome(word).is_empty()
    }

    /// Alist text of the parity-check matrix.
    pub fn to_alist(&self) -> String {
        alist::write(self.n, &self.rows, &self.cols)
    }

    pub fn from_alist(text: &str) -> Result<Self> {
        let (n, rows) = alist::read(text)?;
        Self::from_parity_checks(n, &rows)
    }

    /// Variable-node degree histogram as `(degree, count)`.
    pub fn variable_degrees(&self) -> Vec<(usize, usize)> {
        histogram(self.cols.iter().map(Vec::len))
    }

    pub fn check_degrees(&self) -> Vec<(usize, usize)> {
        histogram(self.rows.iter().map(Vec::len))
    }
}

fn histogram(degrees: impl Iterator<Item = usize>) -> Vec<(usize, usize)> {
    let mut counts = std::collections::BTreeMap::new();
    for d in degrees {
        *counts.entry(d).or_insert(0) += 1;
    }
    counts.into_iter().collect()
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    dst.iter_mut().zip(src).for_each(|(a, b)| *a ^= b);
}

fn first_one(r: &[u64]) -> Option<usize> {
    r.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use rand::Rng;

    fn hamming74() -> LdpcCode {
        LdpcCode::from_parity_checks(7, &[vec![0, 1, 2, 4], vec![1, 2, 3, 5], vec![0, 2, 3, 6]])
            .unwrap()
    }

    #[test]
    fn irregular3_ensemble() {
        let dd = DegreeDistributions::irregular3();
        assert!(
            (dd.design_rate() - 0.5).abs() < 1e-3,
            "{}",
            dd.design_rate()
        );
        let v: f64 = dd.variable().iter().map(|p| p.1).sum();
        let c: f64 = dd.check().iter().map(|p| p.1).sum();
        assert!((v - 1.0).abs() < 1e-6 && (c - 1.0).abs() < 1e-6);
    }

    #[test]
    fn rejects_bad_distributions() {
        assert!(DegreeDistributions::new(vec![(3, 0.5)], vec![(6, 1.0)]).is_err());
        assert!(DegreeDistributions::new(vec![(3, 1.0)], vec![(1, 1.0)]).is_err());
        assert!(DegreeDistributions::new(vec![], vec![(6, 1.0)]).is_err());
        assert!(DegreeDistributions::new(vec![(3, 1.2), (4, -0.2)], vec![(6, 1.0)]).is_err());
    }

    #[test]
    fn hamming_encoder() {
        let code = hamming74();
        assert_eq!(code.info_len(), 4);
        assert_eq!(code.num_checks(), 3);
        for word in 0..16u8 {
            let info: Vec<u8> = (0..4).map(|i| word >> i & 1).collect();
            let cw = code.encode(&info).unwrap();
            assert!(code.is_codeword(&cw));
            let back: Vec<u8> = code.systematic_positions().iter().map(|&v| cw[v]).collect();
            assert_eq!(back, info);
        }
        assert!(code.encode(&[0, 1, 0]).is_err());
        assert!(code.encode(&[0, 1, 0, 2]).is_err());
    }

    #[test]
    fn dependent_rows_are_dropped() {
        let rows = vec![
            vec![0, 1, 2, 4],
            vec![1, 2, 3, 5],
            vec![0, 3, 4, 5],
            vec![0, 2, 3, 6],
        ];
        let code = LdpcCode::from_parity_checks(7, &rows).unwrap();
        assert_eq!(code.num_checks(), 3);
        assert_eq!(code.info_len(), 4);
        assert!(LdpcCode::from_parity_checks(7, &[vec![0, 9]]).is_err());
        assert!(LdpcCode::from_parity_checks(7, &[vec![0, 0]]).is_err());
    }

    #[test]
    fn random_sparse_matrix_encoding() {
        let mut r = rng::seeded(2);
        let n = 300;
        let rows: Vec<Vec<usize>> = (0..150)
            .map(|_| {
                let mut row: Vec<usize> = (0..6).map(|_| r.gen_range(0..n)).collect();
                row.sort_unstable();
                row.dedup();
                row
            })
            .collect();
        let code = LdpcCode::from_parity_checks(n, &rows).unwrap();
        assert_eq!(code.info_len() + code.num_checks(), n);
        for _ in 0..20 {
            let info: Vec<u8> = (0..code.info_len()).map(|_| r.gen_range(0..=1)).collect();
            assert!(code.is_codeword(&code.encode(&info).unwrap()));
        }
    }

    #[test]
    fn alist_round_trip() {
        let code = hamming74();
        let text = code.to_alist();
        assert_eq!(LdpcCode::from_alist(&text).unwrap(), code);
    }
}
