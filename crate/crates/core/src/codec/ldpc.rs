//! Binary LDPC codes: seeded construction, systematic encoding by Gaussian
//! elimination over GF(2), and flooding sum-product decoding.
//!
//! LLRs follow `log P(bit = 0) / P(bit = 1)`.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{check_len, invalid, Result, SoccError};

pub const DEFAULT_MAX_ITERATIONS: usize = 50;

const LLR_CLAMP: f64 = 40.0;
const TANH_CLAMP: f64 = 1.0 - 1e-15;

/// Result of one decoding attempt.
#[derive(Debug, Clone, PartialEq)]
pub struct LdpcDecoded {
    /// Hard decisions on the information bits.
    pub message: Vec<u8>,
    /// Hard decisions on the whole codeword.
    pub codeword: Vec<u8>,
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub struct LdpcCode {
    n: usize,
    m: usize,
    /// Variable indices per check.
    checks: Vec<Vec<usize>>,
    /// Edge layout in check-major order.
    edge_var: Vec<usize>,
    edge_start: Vec<usize>,
    /// Edge indices per variable.
    var_edges: Vec<Vec<usize>>,
    /// Reduced row-echelon parity rows, bit-packed.
    rref: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    info_positions: Vec<usize>,
    max_iterations: usize,
}

impl LdpcCode {
    /// Code from an explicit list of variable indices per check.
    pub fn from_checks(n: usize, checks: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", "code length must be positive"));
        }
        let m = checks.len();
        let mut var_edges = vec![Vec::new(); n];
        let mut edge_var = Vec::new();
        let mut edge_start = Vec::with_capacity(m + 1);
        for row in &checks {
            edge_start.push(edge_var.len());
            let mut seen = HashSet::new();
            for &v in row {
                if v >= n {
                    return Err(invalid("checks", format!("variable {v} out of range")));
                }
                if !seen.insert(v) {
                    return Err(invalid("checks", format!("variable {v} repeated in a check")));
                }
                var_edges[v].push(edge_var.len());
                edge_var.push(v);
            }
        }
        edge_start.push(edge_var.len());

        let words = n.div_ceil(64);
        let mut rows: Vec<Vec<u64>> = checks
            .iter()
            .map(|row| {
                let mut bits = vec![0u64; words];
                for &v in row {
                    bits[v / 64] ^= 1 << (v % 64);
                }
                bits
            })
            .collect();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..n {
            let (w, b) = (col / 64, 1u64 << (col % 64));
            let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & b != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[w] & b != 0 {
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        *x ^= y;
                    }
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rows.truncate(rank);
        let pivot_set: HashSet<usize> = pivots.iter().copied().collect();
        let info_positions: Vec<usize> = (0..n).filter(|c| !pivot_set.contains(c)).collect();
        if info_positions.is_empty() {
            return Err(invalid("checks", "parity checks leave no information bits"));
        }
        Ok(Self {
            n,
            m,
            checks,
            edge_var,
            edge_start,
            var_edges,
            rref: rows,
            pivots,
            info_positions,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        })
    }

    /// Seeded pseudo-random code with `m` checks and column weight
    /// `col_weight`, keeping check degrees balanced and avoiding 4-cycles
    /// where the greedy search allows.
    pub fn random_regular(n: usize, m: usize, col_weight: usize, seed: u64) -> Result<Self> {
        if m == 0 || m >= n {
            return Err(invalid("m", "need 0 < m < n"));
        }
        if col_weight == 0 || col_weight > m {
            return Err(invalid("col_weight", "need 0 < col_weight <= m"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut checks: Vec<Vec<usize>> = vec![Vec::new(); m];
        let mut neighbours: Vec<HashSet<usize>> = vec![HashSet::new(); m];
        let mut order: Vec<usize> = (0..m).collect();
        let mut columns: Vec<usize> = (0..n).collect();
        columns.shuffle(&mut rng);
        for &v in &columns {
            let mut chosen: Vec<usize> = Vec::with_capacity(col_weight);
            for _ in 0..col_weight {
                order.shuffle(&mut rng);
                let free = |r: &usize| !chosen.contains(r);
                let acyclic = |r: &usize| chosen.iter().all(|c| !neighbours[*r].contains(c));
                let pick = order
                    .iter()
                    .filter(|r| free(r) && acyclic(r))
                    .min_by_key(|&&r| checks[r].len())
                    .or_else(|| order.iter().filter(|r| free(r)).min_by_key(|&&r| checks[r].len()))
                    .copied()
                    .expect("col_weight <= m");
                chosen.push(pick);
            }
            for &r in &chosen {
                checks[r].push(v);
                for &s in &chosen {
                    if s != r {
                        neighbours[r].insert(s);
                    }
                }
            }
        }
        for row in checks.iter_mut() {
            row.sort_unstable();
        }
        Self::from_checks(n, checks)
    }

    pub fn with_max_iterations(mut self, iterations: usize) -> Self {
        self.max_iterations = iterations;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_checks(&self) -> usize {
        self.m
    }

    /// Information bits per codeword, `n - rank(H)`.
    pub fn k(&self) -> usize {
        self.info_positions.len()
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n as f64
    }

    pub fn checks(&self) -> &[Vec<usize>] {
        &self.checks
    }

    pub fn max_iterations(&self) -> usize {
        self.max_iterations
    }

    /// Number of length-4 cycles (pairs of checks sharing two variables).
    pub fn four_cycles(&self) -> usize {
        let mut count = 0;
        for v in 0..self.n {
            for (i, &e) in self.var_edges[v].iter().enumerate() {
                for &f in &self.var_edges[v][i + 1..] {
                    let (a, b) = (self.check_of(e), self.check_of(f));
                    let shared = self.checks[a].iter().filter(|x| self.checks[b].contains(x)).count();
                    if shared > 1 {
                        count += 1;
                    }
                }
            }
        }
        count / 2
    }

    fn check_of(&self, edge: usize) -> usize {
        self.edge_start.partition_point(|&s| s <= edge) - 1
    }

    pub fn syndrome(&self, codeword: &[u8]) -> Result<Vec<u8>> {
        check_len(self.n, codeword.len())?;
        Ok(self
            .checks
            .iter()
            .map(|row| row.iter().fold(0u8, |acc, &v| acc ^ (codeword[v] & 1)))
            .collect())
    }

    pub fn is_codeword(&self, codeword: &[u8]) -> Result<bool> {
        Ok(self.syndrome(codeword)?.iter().all(|&s| s == 0))
    }

    pub fn encode(&self, message: &[u8]) -> Result<Vec<u8>> {
        check_len(self.k(), message.len())?;
        let mut word = vec![0u64; self.n.div_ceil(64)];
        for (&pos, &bit) in self.info_positions.iter().zip(message) {
            if bit > 1 {
                return Err(invalid("message", "bits must be 0 or 1"));
            }
            word[pos / 64] |= (bit as u64) << (pos % 64);
        }
        let mut out = vec![0u8; self.n];
        for (&pos, &bit) in self.info_positions.iter().zip(message) {
            out[pos] = bit;
        }
        for (row, &p) in self.rref.iter().zip(&self.pivots) {
            let parity = row
                .iter()
                .zip(&word)
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
                & 1;
            out[p] = parity as u8;
        }
        Ok(out)
    }

    pub fn extract_message(&self, codeword: &[u8]) -> Vec<u8> {
        self.info_positions.iter().map(|&p| codeword[p]).collect()
    }

    /// Sum-product decoding with syndrome-based early stopping.
    pub fn decode(&self, llr: &[f64]) -> Result<LdpcDecoded> {
        check_len(self.n, llr.len())?;
        let channel: Vec<f64> = llr.iter().map(|l| l.clamp(-LLR_CLAMP, LLR_CLAMP)).collect();
        let mut hard: Vec<u8> = channel.iter().map(|&l| (l < 0.0) as u8).collect();
        if self.is_codeword(&hard)? {
            return Ok(self.finish(hard, true, 0));
        }
        let edges = self.edge_var.len();
        let mut v2c: Vec<f64> = self.edge_var.iter().map(|&v| channel[v]).collect();
        let mut c2v = vec![0.0; edges];
        let mut t = Vec::new();
        let mut suffix = Vec::new();
        for iteration in 1..=self.max_iterations {
            for c in 0..self.m {
                let (s, e) = (self.edge_start[c], self.edge_start[c + 1]);
                t.clear();
                t.extend(v2c[s..e].iter().map(|x| (x / 2.0).tanh()));
                suffix.clear();
                suffix.resize(t.len() + 1, 1.0);
                for i in (0..t.len()).rev() {
                    suffix[i] = suffix[i + 1] * t[i];
                }
                let mut prefix = 1.0;
                for (i, edge) in (s..e).enumerate() {
                    let p = (prefix * suffix[i + 1]).clamp(-TANH_CLAMP, TANH_CLAMP);
                    c2v[edge] = 2.0 * p.atanh();
                    prefix *= t[i];
                }
            }
            for v in 0..self.n {
                let total = channel[v] + self.var_edges[v].iter().map(|&e| c2v[e]).sum::<f64>();
                hard[v] = (total < 0.0) as u8;
                for &e in &self.var_edges[v] {
                    v2c[e] = (total - c2v[e]).clamp(-LLR_CLAMP, LLR_CLAMP);
                }
            }
            if self.is_codeword(&hard)? {
                return Ok(self.finish(hard, true, iteration));
            }
        }
        Ok(self.finish(hard, false, self.max_iterations))
    }

    fn finish(&self, codeword: Vec<u8>, converged: bool, iterations: usize) -> LdpcDecoded {
        LdpcDecoded {
            message: self.extract_message(&codeword),
            codeword,
            converged,
            iterations,
        }
    }

    /// Serialises the parity-check matrix in alist format.
    pub fn to_alist(&self) -> String {
        let col_deg: Vec<usize> = self.var_edges.iter().map(Vec::len).collect();
        let row_deg: Vec<usize> = self.checks.iter().map(Vec::len).collect();
        let max_col = col_deg.iter().copied().max().unwrap_or(0);
        let max_row = row_deg.iter().copied().max().unwrap_or(0);
        let mut cols: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for (c, row) in self.checks.iter().enumerate() {
            for &v in row {
                cols[v].push(c);
            }
        }
        let join = |xs: &[usize]| {
            xs.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let padded = |xs: &[usize], width: usize| {
            let mut v: Vec<usize> = xs.iter().map(|x| x + 1).collect();
            v.resize(width, 0);
            join(&v)
        };
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.n, self.m);
        let _ = writeln!(s, "{max_col} {max_row}");
        let _ = writeln!(s, "{}", join(&col_deg));
        let _ = writeln!(s, "{}", join(&row_deg));
        for col in &cols {
            let _ = writeln!(s, "{}", padded(col, max_col));
        }
        for row in &self.checks {
            let _ = writeln!(s, "{}", padded(row, max_row));
        }
        s
    }

    /// Parses an alist description; zero entries are padding.
    pub fn from_alist(text: &str) -> Result<Self> {
        let bad = |msg: &str| SoccError::Alist(msg.to_string());
        let mut nums = text.split_whitespace().map(|t| {
            t.parse::<usize>()
                .map_err(|_| SoccError::Alist(format!("not an integer: {t}")))
        });
        let mut next = || nums.next().unwrap_or_else(|| Err(bad("unexpected end of input")));
        let n = next()?;
        let m = next()?;
        let _max_col = next()?;
        let _max_row = next()?;
        let col_deg = (0..n).map(|_| next()).collect::<Result<Vec<_>>>()?;
        let row_deg = (0..m).map(|_| next()).collect::<Result<Vec<_>>>()?;
        let max_col = col_deg.iter().copied().max().unwrap_or(0);
        let max_row = row_deg.iter().copied().max().unwrap_or(0);
        let mut cols = Vec::with_capacity(n);
        for &d in &col_deg {
            let entries = (0..max_col).map(|_| next()).collect::<Result<Vec<_>>>()?;
            cols.push(entries.into_iter().filter(|&x| x > 0).collect::<Vec<_>>());
            if cols.last().map(Vec::len) != Some(d) {
                return Err(bad("column list disagrees with its degree"));
            }
        }
        let mut checks = Vec::with_capacity(m);
        for &d in &row_deg {
            let entries = (0..max_row).map(|_| next()).collect::<Result<Vec<_>>>()?;
            let row: Vec<usize> = entries.into_iter().filter(|&x| x > 0).map(|x| x - 1).collect();
            if row.len() != d {
                return Err(bad("row list disagrees with its degree"));
            }
            if row.iter().any(|&v| v >= n) {
                return Err(bad("row entry exceeds the number of columns"));
            }
            checks.push(row);
        }
        for (v, col) in cols.iter().enumerate() {
            for &c in col {
                if c == 0 || c > m || !checks[c - 1].contains(&v) {
                    return Err(bad("column and row lists are inconsistent"));
                }
            }
        }
        Self::from_checks(n, checks)
    }
}
