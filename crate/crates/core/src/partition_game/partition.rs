use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::Subset;

/// Largest commodity set whose partitions are enumerated.
pub const MAX_PARTITIONED: usize = 8;

/// Bell numbers `B(0)..=B(8)`.
pub const BELL: [u64; MAX_PARTITIONED + 1] = [1, 1, 2, 5, 15, 52, 203, 877, 4140];

pub fn bell_number(n: usize) -> Option<u64> {
    BELL.get(n).copied()
}

/// A partition of `K^h` into shipments, blocks ordered by their smallest commodity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PartitionStrategy {
    owner: usize,
    support: Subset,
    blocks: Vec<Subset>,
}

impl PartitionStrategy {
    pub fn new(owner: usize, support: Subset, blocks: Vec<Subset>) -> Result<Self> {
        let mut covered = Subset::EMPTY;
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty shipment".into()));
            }
            if !b.intersection(covered).is_empty() {
                return Err(Error::InvalidPartition(format!("shipments overlap at {:?}", b.intersection(covered))));
            }
            covered = covered.union(*b);
        }
        if covered != support {
            return Err(Error::InvalidPartition(format!(
                "shipments cover {covered:?} but the supply is {support:?}"
            )));
        }
        Ok(Self::canonical(owner, support, blocks))
    }

    fn canonical(owner: usize, support: Subset, mut blocks: Vec<Subset>) -> Self {
        blocks.sort_unstable_by_key(|b| b.mask().trailing_zeros());
        PartitionStrategy {
            owner,
            support,
            blocks,
        }
    }

    pub fn owner(&self) -> usize {
        self.owner
    }

    /// The partitioned set `K^h`.
    pub fn support(&self) -> Subset {
        self.support
    }

    pub fn blocks(&self) -> &[Subset] {
        &self.blocks
    }

    /// At most one shipment.
    pub fn is_coarse(&self) -> bool {
        self.blocks.len() <= 1
    }

    pub fn block_of(&self, commodity: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(commodity))
    }

    /// Ships blocks `i` and `j` together.
    pub fn merged(&self, i: usize, j: usize) -> Result<Self> {
        if i == j || i >= self.blocks.len() || j >= self.blocks.len() {
            return Err(Error::InvalidPartition(format!(
                "cannot merge shipments {i} and {j} of a {}-shipment strategy",
                self.blocks.len()
            )));
        }
        let mut blocks: Vec<Subset> = self
            .blocks
            .iter()
            .enumerate()
            .filter(|(b, _)| *b != i && *b != j)
            .map(|(_, s)| *s)
            .collect();
        blocks.push(self.blocks[i].union(self.blocks[j]));
        Ok(Self::canonical(self.owner, self.support, blocks))
    }
}

impl fmt::Debug for PartitionStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.owner)?;
        f.debug_list().entries(&self.blocks).finish()
    }
}

/// The single-shipment strategy; the empty partition when `supply` is empty.
pub fn coarse_strategy(owner: usize, supply: Subset) -> PartitionStrategy {
    PartitionStrategy {
        owner,
        support: supply,
        blocks: if supply.is_empty() { vec![] } else { vec![supply] },
    }
}

/// `true` iff every shipment of `finer` lies inside a shipment of `coarse`.
pub fn coarser(coarse: &PartitionStrategy, finer: &PartitionStrategy) -> Result<bool> {
    if coarse.owner != finer.owner || coarse.support != finer.support {
        return Err(Error::InvalidPartition(
            "strategies of different suppliers or supply sets are not comparable".into(),
        ));
    }
    Ok(finer
        .blocks
        .iter()
        .all(|q| coarse.blocks.iter().any(|p| q.is_subset_of(*p))))
}

/// All partitions of `set`, each exactly once, via restricted-growth strings.
pub fn enumerate_partitions(owner: usize, set: Subset) -> Result<Vec<PartitionStrategy>> {
    let elements: Vec<usize> = set.elements().collect();
    let m = elements.len();
    if m > MAX_PARTITIONED {
        return Err(Error::TooLarge {
            what: "commodity set to partition",
            size: m,
            cap: MAX_PARTITIONED,
        });
    }
    if m == 0 {
        return Ok(vec![coarse_strategy(owner, set)]);
    }
    let mut out = Vec::with_capacity(BELL[m] as usize);
    // growth[i] is the block of elements[i]; growth[i] <= 1 + max(growth[..i])
    let mut growth = vec![0usize; m];
    let mut prefix_max = vec![0usize; m];
    loop {
        let blocks_used = prefix_max[m - 1] + 1;
        let mut blocks = vec![Subset::EMPTY; blocks_used];
        for (e, &b) in elements.iter().zip(&growth) {
            blocks[b] = blocks[b].with(*e);
        }
        out.push(PartitionStrategy {
            owner,
            support: set,
            blocks,
        });

        // advance to the next restricted-growth string in lexicographic order
        let Some(i) = (1..m).rev().find(|&i| growth[i] <= prefix_max[i - 1]) else {
            break;
        };
        growth[i] += 1;
        prefix_max[i] = prefix_max[i - 1].max(growth[i]);
        for j in i + 1..m {
            growth[j] = 0;
            prefix_max[j] = prefix_max[i];
        }
    }
    Ok(out)
}
