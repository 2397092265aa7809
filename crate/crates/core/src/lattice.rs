//! The Boolean lattice of subsets of a finite ground set.
//!
//! Element `i` of a [`GroundSet`] is bit `i` of a [`Subset`] mask and every
//! table in the crate is indexed by that mask.

use std::fmt;
use std::ops::Index;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{complement, Scalar};

/// Hard cap on the size of a ground set.
pub const MAX_GROUND: usize = 20;
/// Largest ground set for which a dense pair table is materialized.
pub const MAX_PAIR_TABLE: usize = 10;
/// Largest ground set for exhaustive enumeration of monotone 0/1 functions.
pub const MAX_MONOTONE_ENUMERATION: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroundSet {
    labels: Vec<String>,
}

/// Shared handle to a ground set; set functions over the same set share it.
pub type Ground = Arc<GroundSet>;

impl GroundSet {
    pub fn new<I, S>(labels: I) -> Result<Ground>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() > MAX_GROUND {
            return Err(Error::TooLarge {
                what: "ground set",
                size: labels.len(),
                cap: MAX_GROUND,
            });
        }
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Arc::new(GroundSet { labels }))
    }

    /// Ground set labelled `"1"`, `"2"`, ..., `"n"`.
    pub fn numbered(n: usize) -> Result<Ground> {
        GroundSet::new((1..=n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
    }

    /// Number of subsets, `2^n`.
    pub fn power_set_size(&self) -> usize {
        1 << self.len()
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.len())
    }

    /// All subsets in mask order.
    pub fn subsets(&self) -> impl Iterator<Item = Subset> + Clone {
        (0..self.power_set_size() as u32).map(Subset)
    }

    pub fn subset<S: AsRef<str>>(&self, labels: &[S]) -> Result<Subset> {
        labels.iter().try_fold(Subset::EMPTY, |acc, l| {
            Ok(acc.with(self.index_of(l.as_ref())?))
        })
    }

    /// Labels of the members of `s`, sorted by name.
    pub fn sorted_labels(&self, s: Subset) -> Vec<String> {
        let mut names: Vec<String> = s.elements().map(|i| self.labels[i].clone()).collect();
        names.sort();
        names
    }

    pub fn describe(&self, s: Subset) -> String {
        format!("{{{}}}", self.sorted_labels(s).join(","))
    }
}

fn same_ground(a: &Ground, b: &Ground) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::GroundMismatch)
    }
}

/// A subset of a ground set, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(n: usize) -> Subset {
        Subset(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(i: usize) -> Subset {
        Subset(1 << i)
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Subset {
        elements.into_iter().fold(Subset::EMPTY, Subset::with)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Subset {
        Subset(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> Subset {
        Subset(self.0 & !(1 << i))
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn elements(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        })
    }

    /// All subsets of `self`, starting from the empty set.
    pub fn submasks(self) -> impl Iterator<Item = Subset> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(Subset(cur))
        })
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.elements()).finish()
    }
}

/// A real-valued function on the power set of a ground set.
#[derive(Clone, Debug, PartialEq)]
pub struct SetFunction<T> {
    ground: Ground,
    values: Vec<T>,
}

impl<T: Scalar> SetFunction<T> {
    pub fn new(ground: &Ground, values: Vec<T>) -> Result<Self> {
        if values.len() != ground.power_set_size() {
            return Err(Error::TableLength {
                expected: ground.power_set_size(),
                got: values.len(),
            });
        }
        if let Some(mask) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { mask: mask as u32 });
        }
        Ok(SetFunction {
            ground: ground.clone(),
            values,
        })
    }

    pub fn from_fn(ground: &Ground, f: impl FnMut(Subset) -> T) -> Self {
        SetFunction {
            ground: ground.clone(),
            values: ground.subsets().map(f).collect(),
        }
    }

    pub fn constant(ground: &Ground, c: T) -> Self {
        SetFunction {
            ground: ground.clone(),
            values: vec![c; ground.power_set_size()],
        }
    }

    /// `f(S) = |S|`.
    pub fn cardinality(ground: &Ground) -> Self {
        Self::from_fn(ground, |s| T::from_ratio(s.len() as i64, 1))
    }

    pub fn ground(&self) -> &Ground {
        &self.ground
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn get(&self, s: Subset) -> &T {
        &self.values[s.index()]
    }

    pub fn map(&self, mut f: impl FnMut(&T) -> T) -> Self {
        SetFunction {
            ground: self.ground.clone(),
            values: self.values.iter().map(&mut f).collect(),
        }
    }

    pub fn zip_with(&self, other: &Self, mut f: impl FnMut(&T, &T) -> T) -> Result<Self> {
        same_ground(&self.ground, &other.ground)?;
        Ok(SetFunction {
            ground: self.ground.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    /// Pointwise product.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() * b.clone())
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|v| c.clone() * v.clone())
    }

    /// `1 - f`.
    pub fn one_minus(&self) -> Self {
        self.map(complement)
    }

    /// First covering pair `(S, h)` with `f(S ∪ {h}) < f(S)`, if any.
    pub fn increasing_violation(&self) -> Option<(Subset, usize)> {
        let n = self.ground.len();
        for s in self.ground.subsets() {
            for h in 0..n {
                if s.contains(h) {
                    continue;
                }
                if !T::at_least(self.get(s.with(h)), self.get(s)) {
                    return Some((s, h));
                }
            }
        }
        None
    }

    pub fn is_increasing(&self) -> bool {
        self.increasing_violation().is_none()
    }

    pub fn is_decreasing(&self) -> bool {
        self.map(|v| -v.clone()).is_increasing()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|v| *v >= T::zero())
    }

    /// Strictly increasing along every covering relation (exact comparison).
    pub fn is_strictly_increasing(&self) -> bool {
        let n = self.ground.len();
        self.ground.subsets().all(|s| {
            (0..n)
                .filter(|&h| !s.contains(h))
                .all(|h| self.get(s.with(h)) > self.get(s))
        })
    }

    /// `true` when every value equals 0 or 1.
    pub fn is_boolean(&self) -> bool {
        self.values.iter().all(|v| v.is_zero() || v.is_one())
    }

    pub(crate) fn check_ground(&self, ground: &Ground) -> Result<()> {
        same_ground(&self.ground, ground)
    }
}

impl<T> Index<Subset> for SetFunction<T> {
    type Output = T;

    fn index(&self, s: Subset) -> &T {
        &self.values[s.index()]
    }
}

/// `f(S ∪ {h}) >= f(S)` on every covering pair of the lattice.
pub fn is_increasing<T: Scalar>(f: &SetFunction<T>) -> bool {
    f.is_increasing()
}

/// Per-element success probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct CoinVector<T> {
    ground: Ground,
    p: Vec<T>,
}

impl<T: Scalar> CoinVector<T> {
    pub fn new(ground: &Ground, p: Vec<T>) -> Result<Self> {
        if p.len() != ground.len() {
            return Err(Error::TableLength {
                expected: ground.len(),
                got: p.len(),
            });
        }
        for (i, v) in p.iter().enumerate() {
            if !(v.is_finite() && *v >= T::zero() && *v <= T::one()) {
                return Err(Error::ProbabilityOutOfRange {
                    label: ground.label(i).to_owned(),
                    value: v.render(),
                });
            }
        }
        Ok(CoinVector {
            ground: ground.clone(),
            p,
        })
    }

    pub fn uniform(ground: &Ground, p: T) -> Result<Self> {
        Self::new(ground, vec![p; ground.len()])
    }

    pub fn ground(&self) -> &Ground {
        &self.ground
    }

    pub fn probabilities(&self) -> &[T] {
        &self.p
    }

    pub fn prob(&self, i: usize) -> &T {
        &self.p[i]
    }

    /// Probability that element `i` lands on `bit`.
    pub fn coin(&self, i: usize, bit: bool) -> T {
        if bit {
            self.p[i].clone()
        } else {
            complement(&self.p[i])
        }
    }

    pub(crate) fn check_ground(&self, ground: &Ground) -> Result<()> {
        same_ground(&self.ground, ground)
    }
}

/// `μ(S) = ∏_{h∈S} p_h ∏_{h∉S} (1 − p_h)`.
pub fn product_measure<T: Scalar>(p: &CoinVector<T>, s: Subset) -> T {
    (0..p.ground.len()).fold(T::one(), |acc, i| acc * p.coin(i, s.contains(i)))
}

/// `Σ_S f(S) μ(S)`.
pub fn expectation<T: Scalar>(f: &SetFunction<T>, p: &CoinVector<T>) -> Result<T> {
    f.check_ground(&p.ground)?;
    Ok(expectation_of(f.values(), p.probabilities()))
}

/// Expectation of a dense table under the product measure, one coordinate at a time.
pub(crate) fn expectation_of<T: Scalar>(values: &[T], p: &[T]) -> T {
    let mut table = values.to_vec();
    for pi in p.iter().rev() {
        let half = table.len() / 2;
        let q = complement(pi);
        let (lo, hi) = table.split_at_mut(half);
        for (a, b) in lo.iter_mut().zip(hi.iter()) {
            *a = q.clone() * a.clone() + pi.clone() * b.clone();
        }
        table.truncate(half);
    }
    table.pop().expect("table has 2^n entries")
}

/// Probability of the pair `(s1, s2)` under the coupled measure `μ_S`:
/// one shared coin per element of `s`, two independent coins elsewhere.
pub fn pair_weight<T: Scalar>(p: &CoinVector<T>, s: Subset, s1: Subset, s2: Subset) -> T {
    if s1.intersection(s) != s2.intersection(s) {
        return T::zero();
    }
    (0..p.ground.len()).fold(T::one(), |acc, i| {
        if s.contains(i) {
            acc * p.coin(i, s1.contains(i))
        } else {
            acc * p.coin(i, s1.contains(i)) * p.coin(i, s2.contains(i))
        }
    })
}

/// Visits the support of `μ_S`, i.e. every pair with `S ∩ S1 = S ∩ S2`, with its weight.
pub fn for_each_coupled_pair<T: Scalar>(
    p: &CoinVector<T>,
    s: Subset,
    mut visit: impl FnMut(Subset, Subset, T),
) {
    // per element, the admissible (in S1, in S2) outcomes and their probabilities
    let branches: Vec<Vec<(bool, bool, T)>> = (0..p.ground.len())
        .map(|i| {
            if s.contains(i) {
                vec![(false, false, p.coin(i, false)), (true, true, p.coin(i, true))]
            } else {
                [(false, false), (false, true), (true, false), (true, true)]
                    .into_iter()
                    .map(|(a, b)| (a, b, p.coin(i, a) * p.coin(i, b)))
                    .collect()
            }
        })
        .collect();
    coupled_walk(&branches, 0, Subset::EMPTY, Subset::EMPTY, T::one(), &mut visit);
}

fn coupled_walk<T: Scalar>(
    branches: &[Vec<(bool, bool, T)>],
    i: usize,
    s1: Subset,
    s2: Subset,
    weight: T,
    visit: &mut impl FnMut(Subset, Subset, T),
) {
    if i == branches.len() {
        visit(s1, s2, weight);
        return;
    }
    for (a, b, w) in &branches[i] {
        let n1 = if *a { s1.with(i) } else { s1 };
        let n2 = if *b { s2.with(i) } else { s2 };
        coupled_walk(branches, i + 1, n1, n2, weight.clone() * w.clone(), visit);
    }
}

/// A probability distribution on pairs of subsets.
#[derive(Clone, Debug, PartialEq)]
pub struct PairDistribution<T> {
    ground: Ground,
    weight: Vec<T>,
}

impl<T: Scalar> PairDistribution<T> {
    pub fn ground(&self) -> &Ground {
        &self.ground
    }

    pub fn weight(&self, s1: Subset, s2: Subset) -> &T {
        &self.weight[(s1.index() << self.ground.len()) | s2.index()]
    }

    pub fn total(&self) -> T {
        self.weight.iter().cloned().fold(T::zero(), |a, b| a + b)
    }

    /// `Σ_{S2} w(S1, S2)` for every `S1`.
    pub fn first_marginal(&self) -> Vec<T> {
        let size = self.ground.power_set_size();
        self.weight
            .chunks(size)
            .map(|row| row.iter().cloned().fold(T::zero(), |a, b| a + b))
            .collect()
    }

    /// `Σ_{S1} w(S1, S2)` for every `S2`.
    pub fn second_marginal(&self) -> Vec<T> {
        let size = self.ground.power_set_size();
        let mut out = vec![T::zero(); size];
        for row in self.weight.chunks(size) {
            for (acc, w) in out.iter_mut().zip(row) {
                *acc = acc.clone() + w.clone();
            }
        }
        out
    }
}

/// Dense table of `μ_S`. Only available up to [`MAX_PAIR_TABLE`] elements.
pub fn pair_measure<T: Scalar>(p: &CoinVector<T>, s: Subset) -> Result<PairDistribution<T>> {
    let n = p.ground.len();
    if n > MAX_PAIR_TABLE {
        return Err(Error::TooLarge {
            what: "ground set for a dense pair table",
            size: n,
            cap: MAX_PAIR_TABLE,
        });
    }
    let size = p.ground.power_set_size();
    let mut weight = vec![T::zero(); size * size];
    for_each_coupled_pair(p, s, |s1, s2, w| weight[(s1.index() << n) | s2.index()] = w);
    Ok(PairDistribution {
        ground: p.ground.clone(),
        weight,
    })
}

/// An up-closed family of subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneFamily {
    ground: Ground,
    member: Vec<bool>,
}

impl MonotoneFamily {
    /// Validates an explicit membership table.
    pub fn from_members(ground: &Ground, member: Vec<bool>) -> Result<Self> {
        if member.len() != ground.power_set_size() {
            return Err(Error::TableLength {
                expected: ground.power_set_size(),
                got: member.len(),
            });
        }
        for s in ground.subsets() {
            if !member[s.index()] {
                continue;
            }
            for h in (0..ground.len()).filter(|&h| !s.contains(h)) {
                if !member[s.with(h).index()] {
                    return Err(Error::NotUpClosed {
                        member: ground.describe(s),
                        superset: ground.describe(s.with(h)),
                    });
                }
            }
        }
        Ok(MonotoneFamily {
            ground: ground.clone(),
            member,
        })
    }

    /// The family consisting of exactly `sets`, which must already be up-closed.
    pub fn from_sets(ground: &Ground, sets: &[Subset]) -> Result<Self> {
        let mut member = vec![false; ground.power_set_size()];
        for s in sets {
            member[s.index()] = true;
        }
        Self::from_members(ground, member)
    }

    pub fn empty(ground: &Ground) -> Self {
        MonotoneFamily {
            ground: ground.clone(),
            member: vec![false; ground.power_set_size()],
        }
    }

    pub fn ground(&self) -> &Ground {
        &self.ground
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.member[s.index()]
    }

    pub fn members(&self) -> impl Iterator<Item = Subset> + '_ {
        self.ground.subsets().filter(|s| self.contains(*s))
    }

    pub fn len(&self) -> usize {
        self.member.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.member.contains(&true)
    }

    /// Minimal members: the generators of the family.
    pub fn minimal_members(&self) -> Vec<Subset> {
        self.members()
            .filter(|s| s.elements().all(|h| !self.contains(s.without(h))))
            .collect()
    }
}

/// Smallest up-closed family containing every seed.
pub fn up_closure(ground: &Ground, seeds: &[Subset]) -> MonotoneFamily {
    let mut member = vec![false; ground.power_set_size()];
    for s in seeds {
        member[s.index()] = true;
    }
    // supersets have larger masks, so one ascending pass propagates everything
    for s in ground.subsets() {
        if member[s.index()] {
            for h in 0..ground.len() {
                member[s.with(h).index()] = true;
            }
        }
    }
    MonotoneFamily {
        ground: ground.clone(),
        member,
    }
}

/// Characteristic function of a family.
pub fn indicator<T: Scalar>(family: &MonotoneFamily) -> SetFunction<T> {
    SetFunction::from_fn(&family.ground, |s| {
        if family.contains(s) {
            T::one()
        } else {
            T::zero()
        }
    })
}

/// Every increasing 0/1 function on the ground set, in order of their truth tables.
pub fn monotone_boolean_functions<T: Scalar>(ground: &Ground) -> Result<Vec<SetFunction<T>>> {
    let n = ground.len();
    if n > MAX_MONOTONE_ENUMERATION {
        return Err(Error::TooLarge {
            what: "ground set for monotone enumeration",
            size: n,
            cap: MAX_MONOTONE_ENUMERATION,
        });
    }
    let size = ground.power_set_size();
    let mut out = Vec::new();
    for table in 0u64..(1u64 << size) {
        let member: Vec<bool> = (0..size).map(|s| table >> s & 1 == 1).collect();
        if let Ok(family) = MonotoneFamily::from_members(ground, member) {
            out.push(indicator(&family));
        }
    }
    Ok(out)
}
