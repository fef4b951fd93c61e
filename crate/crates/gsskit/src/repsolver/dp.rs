//! The n x p dynamic-programming table over the translated set D: per
//! residue of the partial signature mod p, counts of coefficient vectors by
//! partial profile. Supports exact class sizes, full class enumeration, and
//! exactly uniform backward sampling.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::Rng;

use crate::coeffs::{half_sizes, Profile, TranslatedSet};

use super::{HalfPartition, RepError};

/// Cells are u128 counts; exactness is guarded by requiring |D|^n to fit.
#[derive(Debug)]
pub struct DpTable {
    p: u64,
    n: usize,
    /// Nonzero elements of D, ascending; profile tuples are indexed in this
    /// order.
    nonzero: Vec<i64>,
    /// Per nonzero element: allowed final (half-partition) sizes from sigma.
    allowed: Vec<Vec<u32>>,
    /// Per nonzero element: max retained partial count (pruning bound).
    tmax: Vec<u32>,
    stride: Vec<usize>,
    width: usize,
    x_mod: Vec<u64>,
    cells: Vec<u128>,
}

impl DpTable {
    /// Builds the table for indices 0..n of x. Partial profiles are pruned to
    /// tuples dominated by the maximal half-size tuple of sigma. Returns the
    /// table and the number of cell writes performed (work counter).
    pub fn build(
        x: &[BigUint],
        dset: &TranslatedSet,
        p: u64,
        sigma: &Profile,
        budget_bytes: u64,
    ) -> Result<(DpTable, u64), RepError> {
        let n = x.len();
        let nonzero = dset.nonzero_elements();
        let d_size = nonzero.len() + 1;
        if (n as f64) * (d_size as f64).log2() > 120.0 {
            return Err(RepError::BudgetExceeded(format!(
                "count range |D|^{n} exceeds the exact u128 cell type"
            )));
        }
        let allowed: Vec<Vec<u32>> = nonzero
            .iter()
            .map(|&w| half_sizes(sigma.count(w)).into_iter().map(|t| t as u32).collect())
            .collect();
        let tmax: Vec<u32> = allowed.iter().map(|a| *a.iter().max().unwrap()).collect();
        let mut stride = vec![0usize; nonzero.len()];
        let mut width = 1usize;
        for (e, &t) in tmax.iter().enumerate() {
            stride[e] = width;
            width *= t as usize + 1;
        }
        let cell_count = (n + 1)
            .checked_mul(p as usize)
            .and_then(|v| v.checked_mul(width))
            .ok_or_else(|| RepError::BudgetExceeded("table size overflow".into()))?;
        if cell_count as u128 * 16 > budget_bytes as u128 {
            return Err(RepError::BudgetExceeded(format!(
                "DP table needs {} bytes, budget {budget_bytes}",
                cell_count as u128 * 16
            )));
        }
        let x_mod: Vec<u64> = x.iter().map(|xi| (xi % p).try_into().unwrap()).collect();
        let mut t = DpTable { p, n, nonzero, allowed, tmax, stride, width, x_mod, cells: vec![0; cell_count] };

        let mut writes = 0u64;
        let start = t.idx(0, 0, 0);
        t.cells[start] = 1;
        writes += 1;
        // contribution of element e at index i, mod p
        let contrib = |table: &DpTable, e: usize, i: usize| -> u64 {
            let w = table.nonzero[e].rem_euclid(table.p as i64) as u64;
            (w as u128 * table.x_mod[i] as u128 % table.p as u128) as u64
        };
        for i in 0..n {
            for j in 0..p as usize {
                for ti in 0..t.width {
                    let v = t.cells[t.idx(i, j as u64, ti)];
                    if v == 0 {
                        continue;
                    }
                    // unassigned (coefficient 0 in D)
                    let dst = t.idx(i + 1, j as u64, ti);
                    t.cells[dst] += v;
                    writes += 1;
                    for e in 0..t.nonzero.len() {
                        let cur = (ti / t.stride[e]) % (t.tmax[e] as usize + 1);
                        if cur >= t.tmax[e] as usize {
                            continue;
                        }
                        let j2 = (j as u64 + contrib(&t, e, i)) % t.p;
                        let dst = t.idx(i + 1, j2, ti + t.stride[e]);
                        t.cells[dst] += v;
                        writes += 1;
                    }
                }
            }
        }
        Ok((t, writes))
    }

    fn idx(&self, i: usize, j: u64, ti: usize) -> usize {
        (i * self.p as usize + j as usize) * self.width + ti
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn width(&self) -> usize {
        self.width
    }

    fn tuple_counts(&self, ti: usize) -> Vec<u32> {
        (0..self.nonzero.len())
            .map(|e| ((ti / self.stride[e]) % (self.tmax[e] as usize + 1)) as u32)
            .collect()
    }

    fn is_valid_final(&self, ti: usize) -> bool {
        (0..self.nonzero.len()).all(|e| {
            let c = ((ti / self.stride[e]) % (self.tmax[e] as usize + 1)) as u32;
            self.allowed[e].contains(&c)
        })
    }

    /// Total mass of row i over all residues and retained profiles; equals
    /// the exact number of vectors in D^i with per-element counts within the
    /// pruning bounds (|D|^i when nothing is pruned).
    pub fn row_mass(&self, i: usize) -> u128 {
        (0..self.p)
            .flat_map(|j| (0..self.width).map(move |ti| (j, ti)))
            .map(|(j, ti)| self.cells[self.idx(i, j, ti)])
            .sum()
    }

    /// Count of cells[i][j][tuple] for enumeration cross-checks.
    pub fn cell(&self, i: usize, j: u64, tuple: &[u32]) -> u128 {
        let mut ti = 0usize;
        for (e, &c) in tuple.iter().enumerate() {
            if c > self.tmax[e] {
                return 0;
            }
            ti += c as usize * self.stride[e];
        }
        self.cells[self.idx(i, j, ti)]
    }

    /// Number of half-partitions of sigma with signature = r mod p.
    pub fn class_size(&self, r: u64) -> u128 {
        (0..self.width)
            .filter(|&ti| self.is_valid_final(ti))
            .map(|ti| self.cells[self.idx(self.n, r, ti)])
            .sum()
    }

    /// Exactly uniform draw from the residue class r; None when the class is
    /// empty. Backward walk from cell (n, r), weighting each predecessor by
    /// its count restricted to half-partition-consistent partial profiles.
    pub fn sample(&self, r: u64, rng: &mut impl Rng) -> Option<HalfPartition> {
        let total = self.class_size(r);
        if total == 0 {
            return None;
        }
        // pick the final tuple proportionally
        let mut pick = rng.gen_range(0..total);
        let mut ti = usize::MAX;
        for cand in (0..self.width).filter(|&t| self.is_valid_final(t)) {
            let v = self.cells[self.idx(self.n, r, cand)];
            if pick < v {
                ti = cand;
                break;
            }
            pick -= v;
        }
        debug_assert_ne!(ti, usize::MAX);
        let mut parts: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        let mut j = r;
        let mut cur = ti;
        for i in (0..self.n).rev() {
            let here = self.cells[self.idx(i + 1, j, cur)];
            debug_assert!(here > 0);
            let mut pick = rng.gen_range(0..here);
            // option: unassigned
            let w0 = self.cells[self.idx(i, j, cur)];
            if pick < w0 {
                continue;
            }
            pick -= w0;
            let mut chosen = false;
            for e in 0..self.nonzero.len() {
                let cnt = (cur / self.stride[e]) % (self.tmax[e] as usize + 1);
                if cnt == 0 {
                    continue;
                }
                let w = self.nonzero[e].rem_euclid(self.p as i64) as u64;
                let c = (w as u128 * self.x_mod[i] as u128 % self.p as u128) as u64;
                let j_prev = (j + self.p - c) % self.p;
                let v = self.cells[self.idx(i, j_prev, cur - self.stride[e])];
                if pick < v {
                    parts.entry(self.nonzero[e]).or_default().push(i);
                    j = j_prev;
                    cur -= self.stride[e];
                    chosen = true;
                    break;
                }
                pick -= v;
            }
            debug_assert!(chosen, "weights must sum to the cell count");
        }
        debug_assert_eq!(j, 0);
        debug_assert_eq!(cur, 0);
        for v in parts.values_mut() {
            v.sort_unstable();
        }
        Some(HalfPartition { parts })
    }

    /// Full enumeration of the residue class, or the over-cap signal when its
    /// size exceeds `cap` (the repeat is then aborted by the caller).
    pub fn enumerate_class(&self, r: u64, cap: u128) -> Result<Vec<HalfPartition>, u128> {
        let total = self.class_size(r);
        if total > cap {
            return Err(total);
        }
        let mut out = Vec::with_capacity(total as usize);
        let mut parts: Vec<(i64, usize)> = Vec::new(); // (element, index)
        for ti in (0..self.width).filter(|&t| self.is_valid_final(t)) {
            if self.cells[self.idx(self.n, r, ti)] == 0 {
                continue;
            }
            self.dfs(self.n, r, ti, &mut parts, &mut out);
        }
        debug_assert_eq!(out.len() as u128, total);
        Ok(out)
    }

    fn dfs(
        &self,
        i: usize,
        j: u64,
        ti: usize,
        parts: &mut Vec<(i64, usize)>,
        out: &mut Vec<HalfPartition>,
    ) {
        if self.cells[self.idx(i, j, ti)] == 0 {
            return;
        }
        if i == 0 {
            let mut map: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
            for &(w, idx) in parts.iter() {
                map.entry(w).or_default().push(idx);
            }
            for v in map.values_mut() {
                v.sort_unstable();
            }
            out.push(HalfPartition { parts: map });
            return;
        }
        // index i-1 unassigned
        self.dfs(i - 1, j, ti, parts, out);
        for e in 0..self.nonzero.len() {
            let cnt = (ti / self.stride[e]) % (self.tmax[e] as usize + 1);
            if cnt == 0 {
                continue;
            }
            let w = self.nonzero[e].rem_euclid(self.p as i64) as u64;
            let c = (w as u128 * self.x_mod[i - 1] as u128 % self.p as u128) as u64;
            let j_prev = (j + self.p - c) % self.p;
            parts.push((self.nonzero[e], i - 1));
            self.dfs(i - 1, j_prev, ti - self.stride[e], parts, out);
            parts.pop();
        }
    }

    /// (element, final tuple counts) pairs for diagnostics/tests.
    pub fn final_tuples(&self) -> Vec<Vec<u32>> {
        (0..self.width).filter(|&t| self.is_valid_final(t)).map(|t| self.tuple_counts(t)).collect()
    }

    pub fn nonzero_elements(&self) -> &[i64] {
        &self.nonzero
    }
}
