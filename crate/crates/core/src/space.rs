//! Finite topological spaces and the semi-open / semi-closed set calculus.
//!
//! Subsets are bitmasks over point indices. Every family returned by this
//! module is sorted ascending by bitmask value.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::SpaceError;

/// Hard cap on the number of points. Family computations enumerate all
/// `2^n` subsets, so larger spaces are rejected at construction.
pub const MAX_POINTS: usize = 16;

/// A set of point indices, stored as a bitmask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(n: usize) -> Subset {
        if n >= 32 {
            Subset(u32::MAX)
        } else {
            Subset((1u32 << n) - 1)
        }
    }

    pub fn singleton(p: usize) -> Subset {
        Subset(1 << p)
    }

    pub fn from_points<I: IntoIterator<Item = usize>>(points: I) -> Subset {
        Subset(points.into_iter().fold(0, |acc, p| acc | (1 << p)))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, p: usize) -> bool {
        self.0 >> p & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
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

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Point indices in ascending order.
    pub fn points(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |p| bits >> p & 1 == 1)
    }
}

/// A finite topological space: named points plus a validated family of opens.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiniteSpace {
    names: Vec<String>,
    opens: Vec<Subset>,
}

impl FiniteSpace {
    /// Validates the open family: it must contain the empty set and the whole
    /// set, stay within the ground set, and be closed under pairwise union and
    /// intersection (finite families need nothing more).
    pub fn new(names: Vec<String>, opens: Vec<Subset>) -> Result<FiniteSpace, SpaceError> {
        let n = names.len();
        if n == 0 {
            return Err(SpaceError::NoPoints);
        }
        if n > MAX_POINTS {
            return Err(SpaceError::TooManyPoints { count: n, max: MAX_POINTS });
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(SpaceError::DuplicateName(name.clone()));
            }
        }
        let full = Subset::full(n);
        let mut opens = opens;
        opens.sort_unstable();
        opens.dedup();
        if let Some(bad) = opens.iter().find(|u| !u.is_subset_of(full)) {
            return Err(SpaceError::IndexOutOfRange { bits: bad.0, points: n });
        }
        if opens.binary_search(&Subset::EMPTY).is_err() {
            return Err(SpaceError::MissingEmpty);
        }
        if opens.binary_search(&full).is_err() {
            return Err(SpaceError::MissingFull);
        }
        let space = FiniteSpace { names, opens };
        for (i, &u) in space.opens.iter().enumerate() {
            for &v in &space.opens[i + 1..] {
                if space.opens.binary_search(&u.union(v)).is_err() {
                    return Err(SpaceError::NotUnionClosed {
                        left: space.format_subset(u),
                        right: space.format_subset(v),
                    });
                }
                if space.opens.binary_search(&u.intersection(v)).is_err() {
                    return Err(SpaceError::NotIntersectionClosed {
                        left: space.format_subset(u),
                        right: space.format_subset(v),
                    });
                }
            }
        }
        Ok(space)
    }

    /// Builds a space whose points are named `a`, `b`, `c`, ...
    pub fn with_letters(n: usize, opens: Vec<Subset>) -> Result<FiniteSpace, SpaceError> {
        FiniteSpace::new(default_names(n), opens)
    }

    pub fn discrete(n: usize) -> FiniteSpace {
        let opens = (0..1u32 << n).map(Subset).collect();
        FiniteSpace::with_letters(n, opens).expect("power set is a topology")
    }

    pub fn indiscrete(n: usize) -> FiniteSpace {
        FiniteSpace::with_letters(n, alloc::vec![Subset::EMPTY, Subset::full(n)])
            .expect("trivial topology")
    }

    /// The Sierpinski space `{a, b}` with opens `{}, {a}, {a, b}`.
    pub fn sierpinski() -> FiniteSpace {
        FiniteSpace::with_letters(2, alloc::vec![Subset(0), Subset(0b01), Subset(0b11)])
            .expect("sierpinski topology")
    }

    pub fn point_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, p: usize) -> &str {
        &self.names[p]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.point_count())
    }

    pub fn opens(&self) -> &[Subset] {
        &self.opens
    }

    pub fn is_open(&self, a: Subset) -> bool {
        self.opens.binary_search(&a).is_ok()
    }

    pub fn is_closed(&self, a: Subset) -> bool {
        self.is_open(self.complement(a))
    }

    pub fn complement(&self, a: Subset) -> Subset {
        self.full().difference(a)
    }

    pub fn check_subset(&self, a: Subset) -> Result<(), SpaceError> {
        if a.is_subset_of(self.full()) {
            Ok(())
        } else {
            Err(SpaceError::IndexOutOfRange { bits: a.0, points: self.point_count() })
        }
    }

    pub fn check_point(&self, p: usize) -> Result<(), SpaceError> {
        if p < self.point_count() {
            Ok(())
        } else {
            Err(SpaceError::PointOutOfRange { index: p, points: self.point_count() })
        }
    }

    /// Closed sets in ascending bitmask order.
    pub fn closed_sets(&self) -> Vec<Subset> {
        let mut closed: Vec<Subset> = self.opens.iter().map(|&u| self.complement(u)).collect();
        closed.sort_unstable();
        closed
    }

    /// Smallest closed superset.
    pub fn closure(&self, a: Subset) -> Result<Subset, SpaceError> {
        self.check_subset(a)?;
        Ok(self.closure_unchecked(a))
    }

    /// Largest open subset.
    pub fn interior(&self, a: Subset) -> Result<Subset, SpaceError> {
        self.check_subset(a)?;
        Ok(self.interior_unchecked(a))
    }

    pub(crate) fn closure_unchecked(&self, a: Subset) -> Subset {
        // complement of the largest open set disjoint from `a`
        let outside = self.interior_unchecked(self.complement(a));
        self.complement(outside)
    }

    pub(crate) fn interior_unchecked(&self, a: Subset) -> Subset {
        self.opens
            .iter()
            .filter(|u| u.is_subset_of(a))
            .fold(Subset::EMPTY, |acc, &u| acc.union(u))
    }

    /// Decides semi-openness through `A ⊆ cl(int A)`. When `A` is semi-open
    /// the returned witness is the open set `U = int A`, which satisfies
    /// `U ⊆ A ⊆ cl(U)`.
    pub fn is_semi_open(&self, a: Subset) -> Result<(bool, Option<Subset>), SpaceError> {
        self.check_subset(a)?;
        let u = self.interior_unchecked(a);
        if a.is_subset_of(self.closure_unchecked(u)) {
            Ok((true, Some(u)))
        } else {
            Ok((false, None))
        }
    }

    /// Decides semi-closedness through `int(cl C) ⊆ C`; the witness is the
    /// closed set `K = cl C`, for which `int K ⊆ C ⊆ K`.
    pub fn is_semi_closed(&self, c: Subset) -> Result<(bool, Option<Subset>), SpaceError> {
        self.check_subset(c)?;
        let k = self.closure_unchecked(c);
        if self.interior_unchecked(k).is_subset_of(c) {
            Ok((true, Some(k)))
        } else {
            Ok((false, None))
        }
    }

    pub(crate) fn semi_open_unchecked(&self, a: Subset) -> bool {
        a.is_subset_of(self.closure_unchecked(self.interior_unchecked(a)))
    }

    pub(crate) fn semi_closed_unchecked(&self, c: Subset) -> bool {
        self.interior_unchecked(self.closure_unchecked(c)).is_subset_of(c)
    }

    /// All subsets of the ground set in ascending bitmask order.
    pub fn all_subsets(&self) -> impl Iterator<Item = Subset> {
        (0..=self.full().0).map(Subset)
    }

    pub fn semi_open_family(&self) -> Vec<Subset> {
        self.all_subsets().filter(|&a| self.semi_open_unchecked(a)).collect()
    }

    pub fn semi_closed_family(&self) -> Vec<Subset> {
        self.all_subsets().filter(|&c| self.semi_closed_unchecked(c)).collect()
    }

    /// Union of all semi-open subsets of `A`.
    pub fn semi_interior(&self, a: Subset) -> Result<Subset, SpaceError> {
        self.check_subset(a)?;
        Ok(submasks(a)
            .filter(|&b| self.semi_open_unchecked(b))
            .fold(Subset::EMPTY, |acc, b| acc.union(b)))
    }

    /// Intersection of all semi-closed supersets of `A`.
    pub fn semi_closure(&self, a: Subset) -> Result<Subset, SpaceError> {
        self.check_subset(a)?;
        let full = self.full();
        let free = full.difference(a);
        Ok(submasks(free)
            .map(|extra| a.union(extra))
            .filter(|&c| self.semi_closed_unchecked(c))
            .fold(full, |acc, c| acc.intersection(c)))
    }

    /// Intersection of all semi-open sets containing `p`.
    pub fn semi_open_core(&self, p: usize) -> Result<Subset, SpaceError> {
        self.check_point(p)?;
        let full = self.full();
        Ok(self
            .all_subsets()
            .filter(|a| a.contains(p) && self.semi_open_unchecked(*a))
            .fold(full, |acc, a| acc.intersection(a)))
    }

    /// Renders a subset as `{a,c}`.
    pub fn format_subset(&self, a: Subset) -> String {
        let mut out = String::from("{");
        for (k, p) in a.points().filter(|&p| p < self.point_count()).enumerate() {
            if k > 0 {
                out.push(',');
            }
            out.push_str(&self.names[p]);
        }
        out.push('}');
        out
    }

    /// Parses point names into a subset.
    pub fn subset_of_names<'a, I: IntoIterator<Item = &'a str>>(
        &self,
        names: I,
    ) -> Result<Subset, SpaceError> {
        let mut s = Subset::EMPTY;
        for name in names {
            let p = self
                .index_of(name)
                .ok_or_else(|| SpaceError::UnknownPoint(name.to_string()))?;
            s = s.union(Subset::singleton(p));
        }
        Ok(s)
    }
}

impl fmt::Display for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X = {} with opens [", self.format_subset(self.full()))?;
        for (k, &u) in self.opens.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&self.format_subset(u))?;
        }
        f.write_str("]")
    }
}

/// Names `a`..`z`, then `p26`, `p27`, ...
pub fn default_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|k| {
            if k < 26 {
                char::from(b'a' + k as u8).to_string()
            } else {
                alloc::format!("p{k}")
            }
        })
        .collect()
}

/// Every submask of `mask`, in ascending order.
pub fn submasks(mask: Subset) -> impl Iterator<Item = Subset> {
    let m = mask.0;
    (0..=m).filter(move |s| s & !m == 0).map(Subset)
}

/// Every topology on `n` points (`1 <= n <= 5`), each exactly once, sorted
/// lexicographically by their ascending open families.
///
/// Topologies on a finite set are in bijection with preorders; each preorder
/// contributes its family of up-sets.
pub fn enumerate_topologies(n: usize) -> Result<Vec<FiniteSpace>, SpaceError> {
    if !(1..=5).contains(&n) {
        return Err(SpaceError::EnumerationRange(n));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let mut families: Vec<Vec<Subset>> = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        // le[i] = points j with i <= j
        let mut le = [0u32; 5];
        for (i, row) in le.iter_mut().enumerate().take(n) {
            *row = 1 << i;
        }
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                le[i] |= 1 << j;
            }
        }
        let transitive = (0..n).all(|i| {
            let mut reach = 0;
            for j in (0..n).filter(|&j| le[i] >> j & 1 == 1) {
                reach |= le[j];
            }
            reach == le[i]
        });
        if !transitive {
            continue;
        }
        let opens: Vec<Subset> = (0..1u32 << n)
            .filter(|&s| (0..n).all(|i| s >> i & 1 == 0 || le[i] & !s == 0))
            .map(Subset)
            .collect();
        families.push(opens);
    }
    families.sort();
    families.dedup();
    families
        .into_iter()
        .map(|opens| FiniteSpace::with_letters(n, opens))
        .collect()
}
