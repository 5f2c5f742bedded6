//! Dense binary matrices and their rank over GF(2).

use crate::incidence::IncidenceStructure;

const WORD: usize = 64;

/// Row-major bit matrix; each row occupies `stride` 64-bit words and the
/// padding bits past `cols` are always zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(WORD);
        BinaryMatrix {
            rows,
            cols,
            stride,
            bits: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, &bit) in row.iter().enumerate() {
                m.set(i, j, bit);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols);
        self.bits[i * self.stride + j / WORD] >> (j % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, bit: bool) {
        assert!(i < self.rows && j < self.cols);
        let w = &mut self.bits[i * self.stride + j / WORD];
        let mask = 1u64 << (j % WORD);
        if bit {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn row_weight(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.stride..(i + 1) * self.stride]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    /// Rank over GF(2). Works on a copy; pivots are taken as the first row
    /// with a one in the current column.
    pub fn rank(&self) -> usize {
        let mut work = self.bits.clone();
        let stride = self.stride;
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let (wi, mask) = (col / WORD, 1u64 << (col % WORD));
            let Some(pivot) = (rank..self.rows).find(|&r| work[r * stride + wi] & mask != 0) else {
                continue;
            };
            if pivot != rank {
                for k in 0..stride {
                    work.swap(pivot * stride + k, rank * stride + k);
                }
            }
            let (head, tail) = work.split_at_mut((rank + 1) * stride);
            let pivot_row = &head[rank * stride..];
            for row in tail.chunks_exact_mut(stride) {
                if row[wi] & mask != 0 {
                    // columns before `wi` are already cleared in the pivot row
                    for (dst, src) in row[wi..].iter_mut().zip(&pivot_row[wi..]) {
                        *dst ^= src;
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

/// Line-by-point incidence matrix: rows are lines, columns are points.
pub fn incidence_matrix(s: &IncidenceStructure) -> BinaryMatrix {
    let mut m = BinaryMatrix::zeros(s.num_lines(), s.num_points());
    for (i, line) in s.lines().iter().enumerate() {
        for &p in line {
            m.set(i, p, true);
        }
    }
    m
}

/// 2-rank of the incidence matrix of `s`.
pub fn rank2(s: &IncidenceStructure) -> usize {
    incidence_matrix(s).rank()
}
