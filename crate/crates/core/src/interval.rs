//! Exact point-set algebra on the unit interval `I = [0,1]`.
//!
//! The ambient space is `[0,1]` with the subspace topology, so `[0,x)` and
//! `(x,1]` are open. Sets are finite unions of intervals with rational
//! endpoints, kept in a canonical form where structural equality is set
//! equality.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::ParseError;

pub type Rat = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

/// `(x + shift) / 2` for `shift` 0 or 1, reduced without a gcd: if `n/d`
/// is in lowest terms then so is `(n + shift*d) / 2d` up to one factor 2.
fn halve(x: &Rat, shift: bool) -> Rat {
    let d = x.denom();
    let n = if shift { x.numer() + d } else { x.numer().clone() };
    if n.is_even() {
        Rat::new_raw(n >> 1u8, d.clone())
    } else {
        Rat::new_raw(n, d << 1u8)
    }
}

/// `1 - x`; already in lowest terms.
fn flip(x: &Rat) -> Rat {
    Rat::new_raw(x.denom() - x.numer(), x.denom().clone())
}

pub fn parse_rat(text: &str) -> Result<Rat, ParseError> {
    let t = text.trim();
    if t.is_empty() {
        return Err(ParseError::Rational(t.into()));
    }
    let r = Rat::from_str(t).map_err(|_| ParseError::Rational(t.into()))?;
    if r.denom().is_zero() {
        return Err(ParseError::Rational(t.into()));
    }
    Ok(r)
}

/// One interval with rational endpoints and openness flags.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    pub lo: Rat,
    pub hi: Rat,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: Rat, hi: Rat, lo_closed: bool, hi_closed: bool) -> Interval {
        Interval { lo, hi, lo_closed, hi_closed }
    }

    pub fn closed(lo: Rat, hi: Rat) -> Interval {
        Interval::new(lo, hi, true, true)
    }

    pub fn open(lo: Rat, hi: Rat) -> Interval {
        Interval::new(lo, hi, false, false)
    }

    /// `[lo, hi)`
    pub fn closed_open(lo: Rat, hi: Rat) -> Interval {
        Interval::new(lo, hi, true, false)
    }

    /// `(lo, hi]`
    pub fn open_closed(lo: Rat, hi: Rat) -> Interval {
        Interval::new(lo, hi, false, true)
    }

    pub fn point(x: Rat) -> Interval {
        Interval::closed(x.clone(), x)
    }

    pub fn unit() -> Interval {
        Interval::closed(zero(), one())
    }

    pub fn is_empty(&self) -> bool {
        match self.lo.cmp(&self.hi) {
            Ordering::Less => false,
            Ordering::Equal => !(self.lo_closed && self.hi_closed),
            Ordering::Greater => true,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi && !self.is_empty()
    }

    pub fn contains(&self, x: &Rat) -> bool {
        let above = match x.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Less => false,
        };
        let below = match x.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Greater => false,
        };
        above && below
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            Ordering::Greater => (self.lo.clone(), self.lo_closed),
            Ordering::Less => (other.lo.clone(), other.lo_closed),
            Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            Ordering::Less => (self.hi.clone(), self.hi_closed),
            Ordering::Greater => (other.hi.clone(), other.hi_closed),
            Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        Interval { lo, hi, lo_closed, hi_closed }
    }

    /// Image under `t -> scale * t + shift` with `scale > 0`.
    pub fn affine(&self, scale: &Rat, shift: &Rat) -> Interval {
        Interval {
            lo: &self.lo * scale + shift,
            hi: &self.hi * scale + shift,
            lo_closed: self.lo_closed,
            hi_closed: self.hi_closed,
        }
    }

    /// Image under `t -> t/2`, or `t -> (t+1)/2` when `upper` is set.
    pub fn halve(&self, upper: bool) -> Interval {
        Interval {
            lo: halve(&self.lo, upper),
            hi: halve(&self.hi, upper),
            lo_closed: self.lo_closed,
            hi_closed: self.hi_closed,
        }
    }

    /// Image under `t -> 1 - t`.
    pub fn reflect(&self) -> Interval {
        Interval {
            lo: flip(&self.hi),
            hi: flip(&self.lo),
            lo_closed: self.hi_closed,
            hi_closed: self.lo_closed,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_degenerate() {
            return write!(f, "{{{}}}", self.lo);
        }
        write!(
            f,
            "{}{},{}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

impl FromStr for Interval {
    type Err = ParseError;

    /// Accepts `[a,b]`, `[a,b)`, `(a,b]`, `(a,b)` and `{a}`.
    fn from_str(text: &str) -> Result<Interval, ParseError> {
        let t = text.trim();
        let bad = |reason| ParseError::Interval { text: t.into(), reason };
        if let Some(inner) = t.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            return Ok(Interval::point(parse_rat(inner)?));
        }
        let mut chars = t.chars();
        let open = chars.next().ok_or_else(|| bad("empty"))?;
        let close = chars.next_back().ok_or_else(|| bad("too short"))?;
        let lo_closed = match open {
            '[' => true,
            '(' => false,
            _ => return Err(bad("expected '[' or '('")),
        };
        let hi_closed = match close {
            ']' => true,
            ')' => false,
            _ => return Err(bad("expected ']' or ')'")),
        };
        let body = &t[1..t.len() - 1];
        let (a, b) = body.split_once(',').ok_or_else(|| bad("expected a comma"))?;
        let iv = Interval::new(parse_rat(a)?, parse_rat(b)?, lo_closed, hi_closed);
        if iv.is_empty() {
            return Err(bad("interval is empty"));
        }
        Ok(iv)
    }
}

/// A finite union of subintervals of `[0,1]` in canonical form: components
/// are nonempty, sorted, pairwise disjoint, and no two can be merged.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatSet {
    components: Vec<Interval>,
}

impl RatSet {
    pub fn empty() -> RatSet {
        RatSet { components: Vec::new() }
    }

    pub fn unit() -> RatSet {
        RatSet { components: alloc::vec![Interval::unit()] }
    }

    pub fn interval(iv: Interval) -> RatSet {
        RatSet::from_intervals(alloc::vec![iv])
    }

    /// Clips to `[0,1]` and canonicalizes.
    pub fn from_intervals(intervals: Vec<Interval>) -> RatSet {
        let unit = Interval::unit();
        let mut items: Vec<Interval> = intervals
            .into_iter()
            .map(|iv| iv.intersect(&unit))
            .filter(|iv| !iv.is_empty())
            .collect();
        items.sort_by(|x, y| x.lo.cmp(&y.lo).then(y.lo_closed.cmp(&x.lo_closed)));
        let mut out: Vec<Interval> = Vec::with_capacity(items.len());
        for iv in items {
            if let Some(cur) = out.last_mut() {
                let touches = iv.lo < cur.hi || (iv.lo == cur.hi && (cur.hi_closed || iv.lo_closed));
                if touches {
                    match iv.hi.cmp(&cur.hi) {
                        Ordering::Greater => {
                            cur.hi = iv.hi;
                            cur.hi_closed = iv.hi_closed;
                        }
                        Ordering::Equal => cur.hi_closed |= iv.hi_closed,
                        Ordering::Less => {}
                    }
                    continue;
                }
            }
            out.push(iv);
        }
        RatSet { components: out }
    }

    pub fn components(&self) -> &[Interval] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn contains(&self, x: &Rat) -> bool {
        self.components.iter().any(|c| c.contains(x))
    }

    pub fn union(&self, other: &RatSet) -> RatSet {
        let mut all = self.components.clone();
        all.extend(other.components.iter().cloned());
        RatSet::from_intervals(all)
    }

    pub fn intersect(&self, other: &RatSet) -> RatSet {
        let mut out = Vec::new();
        for a in &self.components {
            for b in &other.components {
                let c = a.intersect(b);
                if !c.is_empty() {
                    out.push(c);
                }
            }
        }
        RatSet::from_intervals(out)
    }

    /// Complement relative to `[0,1]`.
    pub fn complement(&self) -> RatSet {
        let mut out = Vec::new();
        let mut lo = zero();
        let mut lo_closed = true;
        for c in &self.components {
            out.push(Interval::new(lo, c.lo.clone(), lo_closed, !c.lo_closed));
            lo = c.hi.clone();
            lo_closed = !c.hi_closed;
        }
        out.push(Interval::new(lo, one(), lo_closed, true));
        RatSet::from_intervals(out)
    }

    pub fn difference(&self, other: &RatSet) -> RatSet {
        self.intersect(&other.complement())
    }

    pub fn is_subset_of(&self, other: &RatSet) -> bool {
        self.difference(other).is_empty()
    }

    /// Interior in the subspace topology of `[0,1]`.
    pub fn interior(&self) -> RatSet {
        let out = self
            .components
            .iter()
            .filter(|c| !c.is_degenerate())
            .map(|c| {
                Interval::new(
                    c.lo.clone(),
                    c.hi.clone(),
                    c.lo_closed && c.lo.is_zero(),
                    c.hi_closed && c.hi.is_one(),
                )
            })
            .collect();
        RatSet::from_intervals(out)
    }

    pub fn topo_closure(&self) -> RatSet {
        let out = self
            .components
            .iter()
            .map(|c| Interval::closed(c.lo.clone(), c.hi.clone()))
            .collect();
        RatSet::from_intervals(out)
    }

    pub fn is_open(&self) -> bool {
        self.interior() == *self
    }

    pub fn is_closed(&self) -> bool {
        self.topo_closure() == *self
    }

    /// `A ⊆ cl(int A)`.
    pub fn is_semi_open(&self) -> bool {
        self.is_subset_of(&self.interior().topo_closure())
    }

    /// `int(cl C) ⊆ C`.
    pub fn is_semi_closed(&self) -> bool {
        self.topo_closure().interior().is_subset_of(self)
    }

    /// Every endpoint of every component, ascending and deduplicated.
    pub fn endpoints(&self) -> Vec<Rat> {
        let mut pts: Vec<Rat> = self
            .components
            .iter()
            .flat_map(|c| [c.lo.clone(), c.hi.clone()])
            .collect();
        pts.sort();
        pts.dedup();
        pts
    }
}

impl fmt::Display for RatSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("{}");
        }
        for (k, c) in self.components.iter().enumerate() {
            if k > 0 {
                f.write_str(" u ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for RatSet {
    type Err = ParseError;

    /// Parses `"[0,1/2) u {3/4} u (3/4,1]"`. The empty set is `{}`, `∅`
    /// or `empty`. `∪` is accepted in place of `u`.
    fn from_str(text: &str) -> Result<RatSet, ParseError> {
        let t = text.trim();
        if t.is_empty() || t == "{}" || t == "∅" || t == "empty" {
            return Ok(RatSet::empty());
        }
        let normalized = t.replace('∪', " u ");
        let mut parts: Vec<Interval> = Vec::new();
        let mut current = String::new();
        for token in normalized.split_whitespace() {
            if token == "u" || token == "U" {
                parts.push(current.parse()?);
                current.clear();
            } else {
                current.push_str(token);
            }
        }
        parts.push(current.parse()?);
        let unit = Interval::unit();
        for iv in &parts {
            if iv.lo < unit.lo || iv.hi > unit.hi {
                return Err(ParseError::Interval {
                    text: alloc::format!("{iv}"),
                    reason: "endpoints must lie in [0,1]",
                });
            }
        }
        Ok(RatSet::from_intervals(parts))
    }
}
