//! Uniform cell list for fixed-radius neighbour queries.

use crate::vector::Vec3;

/// Points binned into cubic cells of edge `cell_size`. Points of each cell
/// are stored contiguously in ascending index order.
#[derive(Debug, Clone)]
pub struct CellGrid {
    cell_size: f64,
    origin: Vec3,
    dims: [usize; 3],
    starts: Vec<usize>,
    entries: Vec<u32>,
}

impl CellGrid {
    pub fn build(positions: &[Vec3], cell_size: f64) -> Self {
        assert!(cell_size > 0.0);
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for p in positions {
            for a in 0..3 {
                lo[a] = lo[a].min(p[a]);
                hi[a] = hi[a].max(p[a]);
            }
        }
        if positions.is_empty() {
            lo = [0.0; 3];
            hi = [0.0; 3];
        }
        let dims = [0, 1, 2].map(|a| (((hi[a] - lo[a]) / cell_size).floor() as usize) + 1);
        let mut grid = Self {
            cell_size,
            origin: lo,
            dims,
            starts: Vec::new(),
            entries: Vec::new(),
        };
        let ncell = dims[0] * dims[1] * dims[2];
        let mut counts = vec![0usize; ncell + 1];
        let ids: Vec<usize> = positions.iter().map(|p| grid.cell_of(*p)).collect();
        for &c in &ids {
            counts[c + 1] += 1;
        }
        for c in 0..ncell {
            counts[c + 1] += counts[c];
        }
        let mut fill = counts.clone();
        let mut entries = vec![0u32; positions.len()];
        for (i, &c) in ids.iter().enumerate() {
            entries[fill[c]] = i as u32;
            fill[c] += 1;
        }
        grid.starts = counts;
        grid.entries = entries;
        grid
    }

    fn coords(&self, p: Vec3) -> [i64; 3] {
        [0, 1, 2].map(|a| ((p[a] - self.origin[a]) / self.cell_size).floor() as i64)
    }

    fn cell_of(&self, p: Vec3) -> usize {
        let c = self.coords(p);
        let c = [0, 1, 2].map(|a| c[a].clamp(0, self.dims[a] as i64 - 1) as usize);
        (c[0] * self.dims[1] + c[1]) * self.dims[2] + c[2]
    }

    /// Calls `visit(j)` for every stored point whose cell lies within
    /// `radius` of `p` along each axis. Candidates still need a distance test.
    pub fn for_each_candidate(&self, p: Vec3, radius: f64, mut visit: impl FnMut(usize)) {
        let reach = (radius / self.cell_size).ceil() as i64;
        let c = self.coords(p);
        let mut range = [(0i64, 0i64); 3];
        for a in 0..3 {
            let lo = (c[a] - reach).max(0);
            let hi = (c[a] + reach).min(self.dims[a] as i64 - 1);
            if lo > hi {
                return;
            }
            range[a] = (lo, hi);
        }
        for x in range[0].0..=range[0].1 {
            for y in range[1].0..=range[1].1 {
                let row = (x as usize * self.dims[1] + y as usize) * self.dims[2];
                let first = self.starts[row + range[2].0 as usize];
                let last = self.starts[row + range[2].1 as usize + 1];
                for &j in &self.entries[first..last] {
                    visit(j as usize);
                }
            }
        }
    }
}
