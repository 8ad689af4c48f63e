//! Recursive orthonormal bases of the zero-sum hyperplane.
//!
//! A [`PlaneMap`] of dimension `n` is the column-orthonormal `n × (n-1)`
//! matrix `U_n` whose columns span `{x ∈ ℝⁿ : Σ xᵢ = 0}`. It is built by
//! the block recursion
//!
//! ```text
//! U_2      = ( 1/√2, -1/√2 )ᵀ
//! U_n even = [ U_{n/2}    0      | +1/√n … ]
//!            [    0    U_{n/2}   | -1/√n … ]
//! U_n odd  = [ U_{n-1} | 1/√(n²-n) … ]
//!            [    0    | -√((n-1)/n) ]
//! ```
//!
//! Every column produced by the recursion is supported on a contiguous
//! range of rows, so columns are stored as `(start, values)` segments. The
//! forward map sends `ℝ^{n-1}` into the hyperplane, the adjoint maps back and
//! annihilates constant vectors.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{check_len, invalid, Result};

/// `√2 / (√2 - 1)`: the universal bound on `‖U_n‖_∞`.
pub const PEAK_FACTOR: f64 = std::f64::consts::SQRT_2 / (std::f64::consts::SQRT_2 - 1.0);

#[derive(Debug, Clone, PartialEq)]
struct Segment {
    start: usize,
    values: Vec<f64>,
}

impl Segment {
    fn range(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.values.len()
    }
}

/// The map `U_n : ℝ^{n-1} → ℝⁿ` together with its adjoint.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneMap {
    n: usize,
    columns: Vec<Segment>,
}

/// Invariant diagnostics for a [`PlaneMap`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneMapReport {
    pub n: usize,
    /// `max |UᵀU - I|` over all entries.
    pub orthonormality_residual: f64,
    /// Largest absolute column sum.
    pub max_abs_column_sum: f64,
    /// `‖U‖_∞`, the maximum absolute row sum.
    pub max_row_abs_sum: f64,
    /// Closed-form row-sum bound from the recursion.
    pub induction_bound: f64,
}

impl PlaneMapReport {
    pub fn within(&self, tol: f64) -> bool {
        self.orthonormality_residual <= tol
            && self.max_abs_column_sum <= tol
            && self.max_row_abs_sum <= self.induction_bound + tol
            && self.max_row_abs_sum < PEAK_FACTOR
    }
}

/// Builds `U_n`. `n = 1` yields the map `ℝ⁰ → ℝ¹` with no columns.
pub fn build_planemap(n: usize) -> Result<PlaneMap> {
    if n == 0 {
        return Err(invalid("n", "plane maps need n >= 1"));
    }
    Ok(PlaneMap {
        n,
        columns: build_columns(n),
    })
}

fn build_columns(n: usize) -> Vec<Segment> {
    match n {
        1 => Vec::new(),
        2 => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            vec![Segment {
                start: 0,
                values: vec![s, -s],
            }]
        }
        _ if n.is_multiple_of(2) => {
            let half = n / 2;
            let sub = build_columns(half);
            let mut cols = Vec::with_capacity(n - 1);
            cols.extend(sub.iter().cloned());
            cols.extend(sub.into_iter().map(|c| Segment {
                start: c.start + half,
                values: c.values,
            }));
            let v = 1.0 / (n as f64).sqrt();
            let mut last = vec![v; half];
            last.extend(std::iter::repeat_n(-v, half));
            cols.push(Segment {
                start: 0,
                values: last,
            });
            cols
        }
        _ => {
            let mut cols = build_columns(n - 1);
            let nf = n as f64;
            let mut last = vec![1.0 / (nf * nf - nf).sqrt(); n - 1];
            last.push(-((nf - 1.0) / nf).sqrt());
            cols.push(Segment {
                start: 0,
                values: last,
            });
            cols
        }
    }
}

/// Right-hand side of the row-sum induction: for `n = 2^k + k'` with
/// `0 <= k' < 2^k`, returns `Σ_{i=1..k} 2^{-i/2} + k'/2^k`.
pub fn induction_bound(n: usize) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let k = usize::BITS - 1 - n.leading_zeros();
    let pow = 1usize << k;
    let rem = (n - pow) as f64;
    let geometric: f64 = (1..=k).map(|i| 2f64.powf(-(i as f64) / 2.0)).sum();
    geometric + rem / pow as f64
}

impl PlaneMap {
    /// Output dimension `n`.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Input dimension `n - 1`.
    pub fn input_dim(&self) -> usize {
        self.columns.len()
    }

    /// Dense copy of column `j` (length `n`).
    pub fn column(&self, j: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        let c = &self.columns[j];
        out[c.range()].copy_from_slice(&c.values);
        out
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        let c = &self.columns[col];
        if c.range().contains(&row) {
            c.values[row - c.start]
        } else {
            0.0
        }
    }

    /// Row-major dense matrix.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut rows = vec![vec![0.0; self.input_dim()]; self.n];
        for (j, c) in self.columns.iter().enumerate() {
            for (off, v) in c.values.iter().enumerate() {
                rows[c.start + off][j] = *v;
            }
        }
        rows
    }

    /// `U_n x`. An empty input maps to the zero vector of length 1.
    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.n];
        self.forward_into(x, &mut out)?;
        Ok(out)
    }

    /// `U_n x` written into `out` (overwritten).
    pub fn forward_into(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        check_len(self.input_dim(), x.len())?;
        check_len(self.n, out.len())?;
        out.fill(0.0);
        for (c, &xj) in self.columns.iter().zip(x) {
            if xj == 0.0 {
                continue;
            }
            for (o, v) in out[c.range()].iter_mut().zip(&c.values) {
                *o += v * xj;
            }
        }
        Ok(())
    }

    /// `U_nᵀ y`.
    pub fn adjoint(&self, y: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.input_dim()];
        self.adjoint_into(y, &mut out)?;
        Ok(out)
    }

    /// `U_nᵀ y` written into `out` (overwritten).
    pub fn adjoint_into(&self, y: &[f64], out: &mut [f64]) -> Result<()> {
        check_len(self.n, y.len())?;
        check_len(self.input_dim(), out.len())?;
        for (o, c) in out.iter_mut().zip(&self.columns) {
            *o = c.values.iter().zip(&y[c.range()]).map(|(v, yi)| v * yi).sum();
        }
        Ok(())
    }

    /// `‖U_n‖_∞ = max_i Σ_j |u_ij|`, the worst-case peak amplitude gain.
    pub fn max_row_abs_sum(&self) -> f64 {
        let mut rows = vec![0.0; self.n];
        for c in &self.columns {
            for (r, v) in rows[c.range()].iter_mut().zip(&c.values) {
                *r += v.abs();
            }
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    /// Computes the orthonormality residual, column sums and row-sum norm.
    pub fn report(&self) -> PlaneMapReport {
        let m = self.columns.len();
        let mut resid: f64 = 0.0;
        for i in 0..m {
            let ci = &self.columns[i];
            for j in i..m {
                let cj = &self.columns[j];
                let lo = ci.start.max(cj.start);
                let hi = (ci.start + ci.values.len()).min(cj.start + cj.values.len());
                let dot: f64 = (lo..hi)
                    .map(|r| ci.values[r - ci.start] * cj.values[r - cj.start])
                    .sum();
                let target = if i == j { 1.0 } else { 0.0 };
                resid = resid.max((dot - target).abs());
            }
        }
        let col_sum = self
            .columns
            .iter()
            .map(|c| c.values.iter().sum::<f64>().abs())
            .fold(0.0, f64::max);
        PlaneMapReport {
            n: self.n,
            orthonormality_residual: resid,
            max_abs_column_sum: col_sum,
            max_row_abs_sum: self.max_row_abs_sum(),
            induction_bound: induction_bound(self.n),
        }
    }

    /// CSV dump, one matrix row per line.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for row in self.to_dense() {
            let line: Vec<String> = row.iter().map(|v| format!("{v:.17e}")).collect();
            s.push_str(&line.join(","));
            s.push('\n');
        }
        s
    }
}

/// Shares one [`PlaneMap`] per distinct dimension.
#[derive(Debug, Default)]
pub struct PlaneMapCache {
    maps: Mutex<HashMap<usize, Arc<PlaneMap>>>,
}

impl PlaneMapCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, n: usize) -> Result<Arc<PlaneMap>> {
        let mut maps = self.maps.lock().expect("plane map cache poisoned");
        if let Some(m) = maps.get(&n) {
            return Ok(Arc::clone(m));
        }
        let m = Arc::new(build_planemap(n)?);
        maps.insert(n, Arc::clone(&m));
        Ok(m)
    }
}
