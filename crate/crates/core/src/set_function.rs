//! Ground-set subsets and the set-function interface the solvers work against.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

/// Largest ground set an [`AntennaSet`] can address.
pub const MAX_GROUND: usize = 64;

/// Subset of antenna indices `0..n`, packed into a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AntennaSet(u64);

impl AntennaSet {
    pub const EMPTY: AntennaSet = AntennaSet(0);

    pub fn from_bits(bits: u64) -> Self {
        Self(bits)
    }

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_GROUND, "ground set of {n} exceeds {MAX_GROUND}");
        if n == MAX_GROUND {
            Self(u64::MAX)
        } else {
            Self((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        Self::EMPTY.with(i)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_GROUND && self.0 & (1 << i) != 0
    }

    #[must_use]
    pub fn with(self, i: usize) -> Self {
        assert!(i < MAX_GROUND, "antenna index {i} exceeds {MAX_GROUND}");
        Self(self.0 | (1 << i))
    }

    #[must_use]
    pub fn without(self, i: usize) -> Self {
        if i < MAX_GROUND {
            Self(self.0 & !(1 << i))
        } else {
            self
        }
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    #[must_use]
    pub fn union(self, other: Self) -> Self {
        Self(self.0 | other.0)
    }

    #[must_use]
    pub fn difference(self, other: Self) -> Self {
        Self(self.0 & !other.0)
    }

    /// Largest index in the set, if any.
    pub fn max_index(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    /// Indices in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            (rest != 0).then(|| {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                i
            })
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Lexicographic order on the ascending index lists (`∅ < {0} < {0,1} < {1}`).
    pub fn lex_cmp(self, other: Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }

    /// 0/1 indicator vector of length `n`.
    pub fn indicator(self, n: usize) -> Vec<u8> {
        (0..n).map(|i| u8::from(self.contains(i))).collect()
    }
}

impl FromIterator<usize> for AntennaSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(Self::EMPTY, Self::with)
    }
}

impl fmt::Debug for AntennaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A set function `f : 2^U → R` over a ground set `U = {0, .., n-1}`.
pub trait SetFunction {
    fn ground_size(&self) -> usize;

    fn value(&self, set: AntennaSet) -> f64;
}

impl<T: SetFunction + ?Sized> SetFunction for &T {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }

    fn value(&self, set: AntennaSet) -> f64 {
        (**self).value(set)
    }
}

/// Wraps a closure as a [`SetFunction`].
pub struct FnSetFunction<F> {
    n: usize,
    f: F,
}

impl<F: Fn(AntennaSet) -> f64> FnSetFunction<F> {
    pub fn new(n: usize, f: F) -> Self {
        Self { n, f }
    }
}

impl<F: Fn(AntennaSet) -> f64> SetFunction for FnSetFunction<F> {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn value(&self, set: AntennaSet) -> f64 {
        (self.f)(set)
    }
}

/// Counts calls that reach the wrapped function.
pub struct CountingOracle<F> {
    inner: F,
    calls: AtomicUsize,
}

impl<F: SetFunction> CountingOracle<F> {
    pub fn new(inner: F) -> Self {
        Self {
            inner,
            calls: AtomicUsize::new(0),
        }
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn into_inner(self) -> F {
        self.inner
    }
}

impl<F: SetFunction> SetFunction for CountingOracle<F> {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }

    fn value(&self, set: AntennaSet) -> f64 {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.value(set)
    }
}

/// Largest ground set [`MemoOracle`] will tabulate.
pub const MEMO_LIMIT: usize = 20;

/// Lazily filled table over all `2^n` subsets. Falls through to the wrapped
/// function uncached when `n` exceeds [`MEMO_LIMIT`].
pub struct MemoOracle<F> {
    inner: F,
    table: Vec<OnceLock<f64>>,
}

impl<F: SetFunction> MemoOracle<F> {
    pub fn new(inner: F) -> Self {
        let n = inner.ground_size();
        let table = if n <= MEMO_LIMIT {
            (0..1usize << n).map(|_| OnceLock::new()).collect()
        } else {
            Vec::new()
        };
        Self { inner, table }
    }

    pub fn inner(&self) -> &F {
        &self.inner
    }
}

impl<F: SetFunction> SetFunction for MemoOracle<F> {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }

    fn value(&self, set: AntennaSet) -> f64 {
        match self.table.get(set.bits() as usize) {
            Some(cell) => *cell.get_or_init(|| self.inner.value(set)),
            None => self.inner.value(set),
        }
    }
}
