//! The convolution `f⋆g` of two set functions.
//!
//! `(f⋆g)(S) = Σ_{S1,S2} f(S1) g(S2) μ_S(S1, S2)` where `μ_S` tosses one
//! shared coin for every element of `S` and two independent coins for every
//! other element. At `S = ∅` this is `Exp(f)Exp(g)` and at `S = H` it is
//! `Exp(fg)`, so monotonicity of `f⋆g` in `S` contains the Harris inequality.

use crate::error::{Error, Result};
use crate::lattice::{
    expectation, for_each_coupled_pair, CoinVector, Ground, SetFunction, Subset,
};
use crate::scalar::{complement, Scalar};

/// Largest ground set accepted by [`convolve_bruteforce`].
pub const MAX_BRUTEFORCE: usize = 10;
/// Largest ground set accepted by [`convolve`].
pub const MAX_CONVOLVE: usize = 16;

fn check_operands<T: Scalar>(
    f: &SetFunction<T>,
    g: &SetFunction<T>,
    p: &CoinVector<T>,
    cap: usize,
    what: &'static str,
) -> Result<()> {
    f.check_ground(g.ground())?;
    p.check_ground(f.ground())?;
    let n = f.ground().len();
    if n > cap {
        return Err(Error::TooLarge { what, size: n, cap });
    }
    Ok(())
}

/// Reference evaluation of `(f⋆g)(S)` as the literal double sum over the support of `μ_S`.
pub fn convolve_bruteforce<T: Scalar>(
    f: &SetFunction<T>,
    g: &SetFunction<T>,
    p: &CoinVector<T>,
    s: Subset,
) -> Result<T> {
    check_operands(f, g, p, MAX_BRUTEFORCE, "ground set for brute-force convolution")?;
    let mut total = T::zero();
    for_each_coupled_pair(p, s, |s1, s2, w| {
        total = total.clone() + f[s1].clone() * g[s2].clone() * w;
    });
    Ok(total)
}

/// Full table of `f⋆g`.
///
/// Eliminates one element at a time. For the element `h` being removed, with
/// `f0, f1` the restrictions of `f` to sets without / with `h`:
///
/// * `h ∉ S`: the two coins are independent, so both functions are averaged
///   first, `(f⋆g)(S) = (f̄ ⋆ ḡ)(S)` with `f̄ = (1-p) f0 + p f1`;
/// * `h ∈ S`: one shared coin, `(f⋆g)(S ∪ h) = (1-p)(f0⋆g0)(S) + p (f1⋆g1)(S)`.
///
/// Work is `O(3^n)` and memory `O(2^n)`; no pair table is built.
pub fn convolve<T: Scalar>(
    f: &SetFunction<T>,
    g: &SetFunction<T>,
    p: &CoinVector<T>,
) -> Result<SetFunction<T>> {
    check_operands(f, g, p, MAX_CONVOLVE, "ground set for convolution")?;
    let n = f.ground().len();
    let mut scratch: Vec<Scratch<T>> = (1..=n).rev().map(|m| Scratch::new(1 << (m - 1))).collect();
    let mut out = vec![T::zero(); 1 << n];
    contract(f.values(), g.values(), p.probabilities(), &mut scratch, &mut out);
    SetFunction::new(f.ground(), out)
}

struct Scratch<T> {
    f_avg: Vec<T>,
    g_avg: Vec<T>,
    coupled_high: Vec<T>,
}

impl<T: Scalar> Scratch<T> {
    fn new(len: usize) -> Self {
        Scratch {
            f_avg: vec![T::zero(); len],
            g_avg: vec![T::zero(); len],
            coupled_high: vec![T::zero(); len],
        }
    }
}

// Eliminates the highest-index element so that both halves of every table are contiguous.
fn contract<T: Scalar>(f: &[T], g: &[T], p: &[T], scratch: &mut [Scratch<T>], out: &mut [T]) {
    let Some((ph, rest)) = p.split_last() else {
        out[0] = f[0].clone() * g[0].clone();
        return;
    };
    let qh = complement(ph);
    let half = f.len() / 2;
    let (level, deeper) = scratch
        .split_first_mut()
        .expect("one scratch level per element");
    let (f0, f1) = f.split_at(half);
    let (g0, g1) = g.split_at(half);
    for i in 0..half {
        level.f_avg[i] = qh.clone() * f0[i].clone() + ph.clone() * f1[i].clone();
        level.g_avg[i] = qh.clone() * g0[i].clone() + ph.clone() * g1[i].clone();
    }
    let (apart, together) = out.split_at_mut(half);
    contract(&level.f_avg, &level.g_avg, rest, deeper, apart);
    contract(f0, g0, rest, deeper, together);
    contract(f1, g1, rest, deeper, &mut level.coupled_high);
    for (t, hi) in together.iter_mut().zip(&level.coupled_high) {
        *t = qh.clone() * t.clone() + ph.clone() * hi.clone();
    }
}

/// `Exp(fg) − Exp(f)·Exp(g)`.
pub fn harris_gap<T: Scalar>(f: &SetFunction<T>, g: &SetFunction<T>, p: &CoinVector<T>) -> Result<T> {
    let fg = f.product(g)?;
    Ok(expectation(&fg, p)? - expectation(f, p)? * expectation(g, p)?)
}

/// An ordered family of set functions over one ground set; duplicates are allowed.
#[derive(Clone, Debug)]
pub struct IndexedFamily<T> {
    ground: Ground,
    functions: Vec<SetFunction<T>>,
}

impl<T: Scalar> IndexedFamily<T> {
    pub fn new(functions: Vec<SetFunction<T>>) -> Result<Self> {
        let ground = functions
            .first()
            .map(|f| f.ground().clone())
            .ok_or_else(|| Error::InvalidPartition("an indexed family needs at least one function".into()))?;
        for f in &functions {
            f.check_ground(&ground)?;
        }
        Ok(IndexedFamily { ground, functions })
    }

    pub fn ground(&self) -> &Ground {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn functions(&self) -> &[SetFunction<T>] {
        &self.functions
    }
}

/// A partition of the index set `{0, .., len-1}` into nonempty blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexPartition {
    len: usize,
    blocks: Vec<Vec<usize>>,
}

impl IndexPartition {
    pub fn new(len: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; len];
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &i in block {
                if i >= len {
                    return Err(Error::InvalidPartition(format!("index {i} out of range 0..{len}")));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::InvalidPartition(format!("index {i} appears twice")));
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("index {i} is not covered")));
        }
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(IndexPartition { len, blocks })
    }

    pub fn singletons(len: usize) -> Self {
        IndexPartition {
            len,
            blocks: (0..len).map(|i| vec![i]).collect(),
        }
    }

    pub fn single_block(len: usize) -> Self {
        IndexPartition {
            len,
            blocks: if len == 0 { vec![] } else { vec![(0..len).collect()] },
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    fn block_ids(&self) -> Vec<usize> {
        let mut id = vec![0; self.len];
        for (b, block) in self.blocks.iter().enumerate() {
            for &i in block {
                id[i] = b;
            }
        }
        id
    }
}

/// `true` iff every block of `fine` lies inside a block of `coarse`.
pub fn refines(fine: &IndexPartition, coarse: &IndexPartition) -> Result<bool> {
    if fine.len != coarse.len {
        return Err(Error::InvalidPartition(format!(
            "index sets differ in size ({} vs {})",
            fine.len, coarse.len
        )));
    }
    let coarse_id = coarse.block_ids();
    Ok(fine
        .blocks
        .iter()
        .all(|block| block.iter().all(|&i| coarse_id[i] == coarse_id[block[0]])))
}

/// `Π_blocks Exp(Π_{i ∈ block} f_i)`.
pub fn partition_expectation<T: Scalar>(
    family: &IndexedFamily<T>,
    partition: &IndexPartition,
    p: &CoinVector<T>,
) -> Result<T> {
    if partition.len != family.len() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} indices but the family has {} functions",
            partition.len,
            family.len()
        )));
    }
    partition.blocks.iter().try_fold(T::one(), |acc, block| {
        let mut product = family.functions[block[0]].clone();
        for &i in &block[1..] {
            product = product.product(&family.functions[i])?;
        }
        Ok(acc * expectation(&product, p)?)
    })
}
