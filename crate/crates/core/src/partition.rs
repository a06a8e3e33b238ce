//! Block structure of `B = [B_1 | ... | B_p]`, `C = [C_1; ...; C_q]` and the
//! kernel grid `X = [X_ij]`.

use std::ops::{Deref, Range};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{Mat, Scalar};

/// A nonempty list of positive block sizes with cached offsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    sizes: Vec<usize>,
    offsets: Vec<usize>,
}

impl Partition {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidPartition("a partition needs at least one block".into()));
        }
        if let Some(k) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidPartition(format!("block {} has size 0", k + 1)));
        }
        let mut offsets = Vec::with_capacity(sizes.len() + 1);
        let mut acc = 0;
        offsets.push(0);
        for &s in &sizes {
            acc += s;
            offsets.push(acc);
        }
        Ok(Partition { sizes, offsets })
    }

    /// `count` blocks of `size` each.
    pub fn uniform(count: usize, size: usize) -> Result<Self> {
        Self::new(vec![size; count])
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Number of blocks.
    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn total(&self) -> usize {
        self.offsets[self.sizes.len()]
    }

    pub fn size(&self, block: usize) -> usize {
        self.sizes[block]
    }

    pub fn offset(&self, block: usize) -> usize {
        self.offsets[block]
    }

    pub fn range(&self, block: usize) -> Range<usize> {
        self.offsets[block]..self.offsets[block + 1]
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses comma-separated positive integers such as `"2,2,3"`.
    fn from_str(s: &str) -> Result<Self> {
        let sizes = s
            .split(',')
            .map(|t| {
                t.trim().parse::<usize>().map_err(|_| {
                    Error::InvalidPartition(format!("cannot parse block size {:?} in {s:?}", t.trim()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(sizes)
    }
}

/// Column blocks `(g_1, ..., g_p)` of `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColPartition(Partition);

/// Row blocks `(h_1, ..., h_q)` of `C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowPartition(Partition);

macro_rules! partition_newtype {
    ($name:ident) => {
        impl $name {
            pub fn new(sizes: Vec<usize>) -> Result<Self> {
                Partition::new(sizes).map($name)
            }

            pub fn uniform(count: usize, size: usize) -> Result<Self> {
                Partition::uniform(count, size).map($name)
            }

            pub fn single(size: usize) -> Result<Self> {
                Self::new(vec![size])
            }
        }

        impl Deref for $name {
            type Target = Partition;

            fn deref(&self) -> &Partition {
                &self.0
            }
        }

        impl FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                s.parse::<Partition>().map($name)
            }
        }
    };
}

partition_newtype!(ColPartition);
partition_newtype!(RowPartition);

impl ColPartition {
    pub(crate) fn check_cols<T: Scalar>(&self, b: &Mat<T>, op: &'static str) -> Result<()> {
        if self.total() != b.cols() {
            return Err(Error::dims(
                op,
                format!("{} columns (partition total)", self.total()),
                format!("{} columns", b.cols()),
            ));
        }
        Ok(())
    }
}

impl RowPartition {
    pub(crate) fn check_rows<T: Scalar>(&self, c: &Mat<T>, op: &'static str) -> Result<()> {
        if self.total() != c.rows() {
            return Err(Error::dims(
                op,
                format!("{} rows (partition total)", self.total()),
                format!("{} rows", c.rows()),
            ));
        }
        Ok(())
    }
}

/// The `p x q` grid of kernel blocks; block `(i, j)` is `g_i x h_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockGrid<T: Scalar = f64> {
    blocks: Vec<Vec<Mat<T>>>,
    col_partition: ColPartition,
    row_partition: RowPartition,
}

impl<T: Scalar> BlockGrid<T> {
    /// Builds a grid from row-major blocks, validating every block's shape.
    pub fn from_blocks(
        blocks: Vec<Vec<Mat<T>>>,
        cp: ColPartition,
        rp: RowPartition,
    ) -> Result<Self> {
        if blocks.len() != cp.len() {
            return Err(Error::dims(
                "BlockGrid",
                format!("{} block rows", cp.len()),
                format!("{}", blocks.len()),
            ));
        }
        for (i, row) in blocks.iter().enumerate() {
            if row.len() != rp.len() {
                return Err(Error::dims(
                    "BlockGrid",
                    format!("{} block columns", rp.len()),
                    format!("{} in block row {}", row.len(), i + 1),
                ));
            }
            for (j, b) in row.iter().enumerate() {
                if b.shape() != (cp.size(i), rp.size(j)) {
                    return Err(Error::dims(
                        "BlockGrid",
                        format!("block ({},{}) of {}x{}", i + 1, j + 1, cp.size(i), rp.size(j)),
                        format!("{}x{}", b.rows(), b.cols()),
                    ));
                }
            }
        }
        Ok(BlockGrid {
            blocks,
            col_partition: cp,
            row_partition: rp,
        })
    }

    /// Number of block rows.
    pub fn p(&self) -> usize {
        self.blocks.len()
    }

    /// Number of block columns.
    pub fn q(&self) -> usize {
        self.row_partition.len()
    }

    /// Block `X_ij`, zero-based.
    pub fn block(&self, i: usize, j: usize) -> &Mat<T> {
        &self.blocks[i][j]
    }

    pub fn col_partition(&self) -> &ColPartition {
        &self.col_partition
    }

    pub fn row_partition(&self) -> &RowPartition {
        &self.row_partition
    }

    /// Reassembles the full `g x h` kernel.
    pub fn assemble(&self) -> Mat<T> {
        let mut x = Mat::zeros(self.col_partition.total(), self.row_partition.total());
        for (i, row) in self.blocks.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                x.set_submatrix(self.col_partition.offset(i), self.row_partition.offset(j), b);
            }
        }
        x
    }
}

/// `B = [B_1 | ... | B_p]` together with its column partition.
pub fn assemble_b<T: Scalar>(blocks: &[Mat<T>]) -> Result<(Mat<T>, ColPartition)> {
    if blocks.is_empty() {
        return Err(Error::EmptyBlocks("assemble_b"));
    }
    let refs: Vec<&Mat<T>> = blocks.iter().collect();
    let b = Mat::hstack(&refs)?;
    let cp = ColPartition::new(blocks.iter().map(Mat::cols).collect())?;
    Ok((b, cp))
}

/// `C = [C_1; ...; C_q]` together with its row partition.
pub fn assemble_c<T: Scalar>(blocks: &[Mat<T>]) -> Result<(Mat<T>, RowPartition)> {
    if blocks.is_empty() {
        return Err(Error::EmptyBlocks("assemble_c"));
    }
    let refs: Vec<&Mat<T>> = blocks.iter().collect();
    let c = Mat::vstack(&refs)?;
    let rp = RowPartition::new(blocks.iter().map(Mat::rows).collect())?;
    Ok((c, rp))
}

/// Cuts `x` into the grid of `X_ij` defined by the two partitions.
pub fn split_x<T: Scalar>(x: &Mat<T>, cp: &ColPartition, rp: &RowPartition) -> Result<BlockGrid<T>> {
    if x.shape() != (cp.total(), rp.total()) {
        return Err(Error::dims(
            "split_x",
            format!("{}x{}", cp.total(), rp.total()),
            format!("{}x{}", x.rows(), x.cols()),
        ));
    }
    let blocks = (0..cp.len())
        .map(|i| {
            (0..rp.len())
                .map(|j| x.submatrix(cp.offset(i), rp.offset(j), cp.size(i), rp.size(j)))
                .collect()
        })
        .collect();
    Ok(BlockGrid {
        blocks,
        col_partition: cp.clone(),
        row_partition: rp.clone(),
    })
}
