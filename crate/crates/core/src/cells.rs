//! Fixed-radius neighbor search with uniform cell lists.

/// Euclidean distance; every graph builder goes through this one function so
/// that cell-list and brute-force constructions agree bit for bit.
#[inline]
pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Calls `f(i, j, |x_i - x_j|)` once for every pair `i < j` whose distance is
/// at most `range` (possibly plus a few more; callers apply their own exact
/// predicate).
pub fn for_each_pair_within<F>(coords: &[f64], dim: usize, range: f64, mut f: F)
where
    F: FnMut(usize, usize, f64),
{
    let n = coords.len().checked_div(dim).unwrap_or(0);
    if n < 2 {
        return;
    }
    if n <= 32 || !(range.is_finite()) {
        for_each_pair_brute(coords, dim, range, f);
        return;
    }
    let grid = CellGrid::build(coords, dim, range);
    let slack = range * (1.0 + 1e-12);
    let offsets = neighbor_offsets(dim);
    let mut multi = vec![0usize; dim];
    for cell in 0..grid.cell_count() {
        let (a0, a1) = (grid.start[cell] as usize, grid.start[cell + 1] as usize);
        if a0 == a1 {
            continue;
        }
        grid.unravel(cell, &mut multi);
        for off in &offsets {
            let Some(other) = grid.neighbor(&multi, off) else { continue };
            if other < cell {
                continue;
            }
            let (b0, b1) = (grid.start[other] as usize, grid.start[other + 1] as usize);
            for a in a0..a1 {
                let i = grid.order[a] as usize;
                let xi = &coords[i * dim..(i + 1) * dim];
                let from = if other == cell { a + 1 } else { b0 };
                for b in from..b1 {
                    let j = grid.order[b] as usize;
                    let r = distance(xi, &coords[j * dim..(j + 1) * dim]);
                    if r <= slack {
                        if i < j {
                            f(i, j, r)
                        } else {
                            f(j, i, r)
                        }
                    }
                }
            }
        }
    }
}

/// O(n²) reference enumeration with the same contract as [`for_each_pair_within`].
pub fn for_each_pair_brute<F>(coords: &[f64], dim: usize, range: f64, mut f: F)
where
    F: FnMut(usize, usize, f64),
{
    let n = coords.len().checked_div(dim).unwrap_or(0);
    for i in 0..n {
        let xi = &coords[i * dim..(i + 1) * dim];
        for j in i + 1..n {
            let r = distance(xi, &coords[j * dim..(j + 1) * dim]);
            if r <= range * (1.0 + 1e-12) {
                f(i, j, r);
            }
        }
    }
}

struct CellGrid {
    dims: Vec<usize>,
    strides: Vec<usize>,
    start: Vec<u32>,
    order: Vec<u32>,
}

impl CellGrid {
    fn build(coords: &[f64], dim: usize, range: f64) -> Self {
        let n = coords.len() / dim;
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for p in coords.chunks_exact(dim) {
            for k in 0..dim {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        // Cells never shrink below the interaction range; they grow when the
        // bounding box would otherwise need far more cells than points.
        let cap = (4 * n + 64) as f64;
        let mut side = range.max(f64::MIN_POSITIVE);
        let cells_for = |side: f64| -> f64 {
            (0..dim).map(|k| ((hi[k] - lo[k]) / side).floor() + 1.0).product::<f64>()
        };
        let mut total = cells_for(side);
        while total > cap {
            side *= (total / cap).powf(1.0 / dim as f64).max(1.01);
            total = cells_for(side);
        }
        let dims: Vec<usize> = (0..dim).map(|k| ((hi[k] - lo[k]) / side).floor() as usize + 1).collect();
        let mut strides = vec![1usize; dim];
        for k in 1..dim {
            strides[k] = strides[k - 1] * dims[k - 1];
        }
        let cells = strides[dim - 1] * dims[dim - 1];
        let cell_of = |p: &[f64]| -> usize {
            (0..dim)
                .map(|k| {
                    let c = ((p[k] - lo[k]) / side).floor() as usize;
                    c.min(dims[k] - 1) * strides[k]
                })
                .sum()
        };
        let mut counts = vec![0u32; cells + 1];
        let assigned: Vec<usize> = coords.chunks_exact(dim).map(cell_of).collect();
        for &c in &assigned {
            counts[c + 1] += 1;
        }
        for c in 0..cells {
            counts[c + 1] += counts[c];
        }
        let mut fill = counts.clone();
        let mut order = vec![0u32; n];
        for (i, &c) in assigned.iter().enumerate() {
            order[fill[c] as usize] = i as u32;
            fill[c] += 1;
        }
        Self { dims, strides, start: counts, order }
    }

    fn cell_count(&self) -> usize {
        self.start.len() - 1
    }

    fn unravel(&self, mut cell: usize, out: &mut [usize]) {
        for k in 0..self.dims.len() {
            out[k] = cell % self.dims[k];
            cell /= self.dims[k];
        }
    }

    fn neighbor(&self, multi: &[usize], offset: &[i8]) -> Option<usize> {
        let mut idx = 0;
        for k in 0..multi.len() {
            let c = multi[k] as isize + offset[k] as isize;
            if c < 0 || c >= self.dims[k] as isize {
                return None;
            }
            idx += c as usize * self.strides[k];
        }
        Some(idx)
    }
}

fn neighbor_offsets(dim: usize) -> Vec<Vec<i8>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|v| {
                [-1i8, 0, 1].into_iter().map(move |o| {
                    let mut w = v.clone();
                    w.push(o);
                    w
                })
            })
            .collect();
    }
    out
}
