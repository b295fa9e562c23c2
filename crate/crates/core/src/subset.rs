//! Subsets of `[n]` as bitmasks, and lattice transforms over them.
//!
//! Bit `i` of a mask is coordinate `i + 1`. The same convention indexes
//! truth tables (bit `i` of the index is `x_{i+1}`) and spectra (bit `i` of
//! the mask is membership of `i + 1` in `S`).

use std::fmt;
use std::ops::{AddAssign, SubAssign};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Subset(pub usize);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    /// Builds a subset from 1-based coordinates.
    pub fn from_coords<I: IntoIterator<Item = usize>>(coords: I) -> Self {
        Subset(coords.into_iter().fold(0, |m, c| {
            debug_assert!(c >= 1, "coordinates are 1-based");
            m | (1 << (c - 1))
        }))
    }

    /// `{1, …, k}`.
    pub fn prefix(k: usize) -> Self {
        Subset((1usize << k) - 1)
    }

    #[inline]
    pub fn mask(self) -> usize {
        self.0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Membership of the 1-based coordinate `c`.
    #[inline]
    pub fn contains(self, c: usize) -> bool {
        c >= 1 && self.0 >> (c - 1) & 1 == 1
    }

    #[inline]
    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    #[inline]
    pub fn minus(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    /// Highest coordinate in the set, 0 for the empty set.
    pub fn max_coord(self) -> usize {
        (usize::BITS - self.0.leading_zeros()) as usize
    }

    /// 1-based coordinates in increasing order.
    pub fn coords(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                return None;
            }
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b + 1)
        })
    }

    /// All submasks of `self`, including `∅` and `self`, in decreasing order.
    pub fn submasks(self) -> impl Iterator<Item = Subset> {
        let full = self.0;
        let mut cur = Some(full);
        std::iter::from_fn(move || {
            let c = cur?;
            cur = if c == 0 { None } else { Some((c - 1) & full) };
            Some(Subset(c))
        })
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, c) in self.coords().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

impl From<usize> for Subset {
    fn from(m: usize) -> Self {
        Subset(m)
    }
}

/// All masks of `[n]` with at most `k` elements, in increasing mask order.
pub fn masks_up_to(n: usize, k: usize) -> impl Iterator<Item = Subset> {
    (0..1usize << n).map(Subset).filter(move |s| s.len() <= k)
}

/// In-place superset sums: `a[S] ← Σ_{E ⊇ S} a[E]`.
pub fn superset_zeta<T: Copy + AddAssign>(a: &mut [T]) {
    let n = a.len().trailing_zeros();
    debug_assert_eq!(a.len(), 1 << n);
    for i in 0..n {
        let bit = 1usize << i;
        for m in 0..a.len() {
            if m & bit == 0 {
                let hi = a[m | bit];
                a[m] += hi;
            }
        }
    }
}

/// In-place subset sums: `a[S] ← Σ_{E ⊆ S} a[E]`.
pub fn subset_zeta<T: Copy + AddAssign>(a: &mut [T]) {
    let n = a.len().trailing_zeros();
    debug_assert_eq!(a.len(), 1 << n);
    for i in 0..n {
        let bit = 1usize << i;
        for m in 0..a.len() {
            if m & bit != 0 {
                let lo = a[m ^ bit];
                a[m] += lo;
            }
        }
    }
}

/// Inverse of [`subset_zeta`]: `a[S] ← Σ_{E ⊆ S} (−1)^{|S∖E|} a[E]`.
pub fn subset_mobius<T: Copy + SubAssign>(a: &mut [T]) {
    let n = a.len().trailing_zeros();
    debug_assert_eq!(a.len(), 1 << n);
    for i in 0..n {
        let bit = 1usize << i;
        for m in 0..a.len() {
            if m & bit != 0 {
                let lo = a[m ^ bit];
                a[m] -= lo;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coords_and_display() {
        let s = Subset::from_coords([1, 3]);
        assert_eq!(s.0, 0b101);
        assert_eq!(s.coords().collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(s.to_string(), "{1,3}");
        assert_eq!(Subset::EMPTY.to_string(), "{}");
        assert!(s.contains(3) && !s.contains(2));
        assert_eq!(s.max_coord(), 3);
    }

    #[test]
    fn submasks_enumerates_power_set() {
        let s = Subset(0b1011);
        let mut subs: Vec<_> = s.submasks().map(|t| t.0).collect();
        subs.sort();
        assert_eq!(subs, vec![0, 1, 2, 3, 8, 9, 10, 11]);
    }

    #[test]
    fn zeta_transforms_match_brute_force() {
        let n = 4;
        let base: Vec<i64> = (0..16).map(|m| (m * 7 + 3) % 11 - 5).collect();
        let mut sup = base.clone();
        superset_zeta(&mut sup);
        let mut sub = base.clone();
        subset_zeta(&mut sub);
        for s in 0..1usize << n {
            let brute_sup: i64 = (0..16).filter(|e| e & s == s).map(|e| base[e]).sum();
            let brute_sub: i64 = (0..16).filter(|e| e & s == *e).map(|e| base[e]).sum();
            assert_eq!(sup[s], brute_sup);
            assert_eq!(sub[s], brute_sub);
        }
        subset_mobius(&mut sub);
        assert_eq!(sub, base);
    }
}
