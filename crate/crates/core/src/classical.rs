//! Classical Hamming-metric block codes with a fixed block width, their
//! coordinate-projection dimensions and the induced multilinear matroids.

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::linalg::Mat;
use crate::qmatroid::ClassicalMatroid;
use crate::subspace::Subspace;

/// F_q-linear code inside (F_q^m)^n, given by a generator matrix of width
/// n * m. Stored with a canonical full-rank generator.
#[derive(Clone, PartialEq, Eq)]
pub struct BlockCode {
    field: Field,
    block: usize,
    blocks: usize,
    gen: Mat,
}

/// Outcome of the almost-affinity test over all coordinate subsets.
#[derive(Clone, Debug)]
pub struct BlockMatroidResult {
    pub almost_affine: bool,
    /// First violating subset (bitmask) when not almost affine.
    pub witness: Option<u32>,
    /// The induced matroid when almost affine.
    pub matroid: Option<ClassicalMatroid>,
}

impl BlockCode {
    pub fn new(field: &Field, block: usize, gen: Mat) -> Result<BlockCode> {
        if block == 0 || !gen.cols().is_multiple_of(block) {
            return Err(Error::ShapeMismatch(format!(
                "generator width {} is not a multiple of block width {block}",
                gen.cols()
            )));
        }
        if gen.field() != field {
            return Err(Error::FieldMismatch(gen.field().q(), field.q()));
        }
        // canonicalize to an RREF basis of the row space
        let canon = Subspace::from_generators(&gen);
        let rows: Vec<Vec<u16>> = (0..canon.dim())
            .map(|i| canon.basis().row_to_vec(i))
            .collect();
        let gen = if rows.is_empty() {
            Mat::zero(field, 0, canon.ambient())
        } else {
            Mat::from_rows(field, &rows)
        };
        Ok(BlockCode {
            field: field.clone(),
            block,
            blocks: gen.cols() / block,
            gen,
        })
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Block width m.
    #[inline]
    pub fn block_width(&self) -> usize {
        self.block
    }

    /// Length in blocks.
    #[inline]
    pub fn len(&self) -> usize {
        self.blocks
    }

    pub fn is_empty(&self) -> bool {
        self.blocks == 0
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.gen.rows()
    }

    #[inline]
    pub fn generator(&self) -> &Mat {
        &self.gen
    }

    /// Dimension of the projection onto the blocks in the subset (bitmask).
    pub fn projection_dim(&self, mask: u32) -> usize {
        let cols: Vec<usize> = (0..self.blocks)
            .filter(|i| (mask >> i) & 1 == 1)
            .flat_map(|i| (i * self.block..(i + 1) * self.block).collect::<Vec<_>>())
            .collect();
        if cols.is_empty() || self.dim() == 0 {
            return 0;
        }
        self.gen.select_cols(&cols).rank()
    }

    /// Scan all 2^n coordinate subsets: almost affine iff every projection
    /// dimension is a multiple of the block width, in which case the rank
    /// function X -> dim(C_X)/m is an integer-valued matroid rank function.
    pub fn matroid(&self) -> Result<BlockMatroidResult> {
        if self.blocks > 20 {
            return Err(Error::BudgetExceeded(format!(
                "2^{} subsets",
                self.blocks
            )));
        }
        let full = 1u32 << self.blocks;
        let mut ranks = vec![0u32; full as usize];
        for mask in 0..full {
            let d = self.projection_dim(mask);
            if !d.is_multiple_of(self.block) {
                return Ok(BlockMatroidResult {
                    almost_affine: false,
                    witness: Some(mask),
                    matroid: None,
                });
            }
            ranks[mask as usize] = (d / self.block) as u32;
        }
        let matroid = ClassicalMatroid {
            n: self.blocks,
            ranks,
        };
        if !matroid.is_valid() {
            return Err(Error::NotAMatroid);
        }
        Ok(BlockMatroidResult {
            almost_affine: true,
            witness: None,
            matroid: Some(matroid),
        })
    }

    /// Text form: header `q n m k w` (same shape as the matrix-code format,
    /// with the block width as an extra trailing field), then k generator
    /// blocks of n lines of m digits.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{} {} {} {} {}\n",
            self.field.q(),
            self.blocks,
            self.block,
            self.dim(),
            self.block
        );
        for i in 0..self.dim() {
            if i > 0 {
                s.push('\n');
            }
            let row = self.gen.row(i);
            for b in 0..self.blocks {
                for l in 0..self.block {
                    s.push(crate::linalg::digit_char(row[b * self.block + l]));
                }
                s.push('\n');
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<BlockCode> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty block-code file".into()))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::Parse(format!("bad header {header:?}")))
            })
            .collect::<Result<_>>()?;
        let [q, n, m, k, w] = nums[..] else {
            return Err(Error::Parse("header must be `q n m k w`".into()));
        };
        if w != m {
            return Err(Error::Parse("block width field disagrees with m".into()));
        }
        let field = Field::of_order(q as u32)?;
        let mut gens: Vec<Vec<u16>> = Vec::with_capacity(k);
        let mut block: Vec<&str> = Vec::new();
        for line in lines.chain(std::iter::once("")) {
            if line.trim().is_empty() {
                if !block.is_empty() {
                    let mat = Mat::parse_rows(&field, &block)?;
                    if mat.rows() != n || mat.cols() != m {
                        return Err(Error::Parse("generator block shape mismatch".into()));
                    }
                    gens.push(mat.flatten());
                    block.clear();
                }
            } else {
                block.push(line);
            }
        }
        if gens.len() != k {
            return Err(Error::Parse(format!(
                "expected {k} generator blocks, found {}",
                gens.len()
            )));
        }
        let gen = if gens.is_empty() {
            Mat::zero(&field, 0, n * m)
        } else {
            Mat::from_rows(&field, &gens)
        };
        BlockCode::new(&field, m, gen)
    }
}

impl std::fmt::Debug for BlockCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "BlockCode[{} blocks of width {}, k={}, q={}]",
            self.blocks,
            self.block,
            self.dim(),
            self.field.q()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_dims() {
        let f = Field::gf(2, 1).unwrap();
        // identity blocks with m = 1: the free matroid
        let c = BlockCode::new(&f, 1, Mat::identity(&f, 3)).unwrap();
        assert_eq!(c.projection_dim(0), 0);
        assert_eq!(c.projection_dim(0b101), 2);
        let res = c.matroid().unwrap();
        assert!(res.almost_affine);
        let m = res.matroid.unwrap();
        assert_eq!(m, ClassicalMatroid::uniform(3, 3));
    }

    #[test]
    fn non_almost_affine_witness() {
        let f = Field::gf(2, 1).unwrap();
        // one generator, blocks (10, 10): projection on block 1 has dim 1, odd
        let g = Mat::from_rows(&f, &[vec![1, 0, 1, 0]]);
        let c = BlockCode::new(&f, 2, g).unwrap();
        let res = c.matroid().unwrap();
        assert!(!res.almost_affine);
        let w = res.witness.unwrap();
        assert_eq!(c.projection_dim(w) % 2, 1);
    }

    #[test]
    fn text_roundtrip() {
        let f = Field::gf(3, 1).unwrap();
        let g = Mat::from_rows(&f, &[vec![1, 0, 2, 1], vec![0, 1, 1, 2]]);
        let c = BlockCode::new(&f, 2, g).unwrap();
        let t = c.to_text();
        let back = BlockCode::parse(&t).unwrap();
        assert_eq!(back, c);
    }
}
