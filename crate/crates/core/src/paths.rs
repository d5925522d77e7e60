//! Step paths `I -> X` into finite spaces and piecewise-linear
//! reparameterizations of `I`.
//!
//! A [`StepPath`] is constant on each piece of an exact rational partition of
//! `[0,1]`; every breakpoint belongs to exactly one piece. Preimages of
//! subsets of `X` are therefore [`RatSet`]s and every so-i question about a
//! step path reduces to finitely many exact interval checks.

use alloc::collections::VecDeque;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::PathError;
use crate::interval::{one, rat, zero, Interval, Rat, RatSet};
use crate::maps::SpaceProfile;
use crate::space::{FiniteSpace, Subset};

/// The `i` of so-i-continuity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    One = 1,
    Two = 2,
    Three = 3,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::One, Mode::Two, Mode::Three];

    pub fn from_index(i: u8) -> Result<Mode, PathError> {
        match i {
            1 => Ok(Mode::One),
            2 => Ok(Mode::Two),
            3 => Ok(Mode::Three),
            _ => Err(PathError::BadMode(i)),
        }
    }

    pub fn index(self) -> u8 {
        self as u8
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Piece {
    pub interval: Interval,
    pub value: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StepPath {
    space: Arc<FiniteSpace>,
    pieces: Vec<Piece>,
}

/// A codomain set whose preimage breaks the so-i condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathViolation {
    pub set: Subset,
    pub preimage: RatSet,
}

impl StepPath {
    /// Validates that the pieces partition `[0,1]` in order and merges
    /// neighbouring pieces with equal values.
    pub fn new(space: Arc<FiniteSpace>, pieces: Vec<Piece>) -> Result<StepPath, PathError> {
        if pieces.is_empty() {
            return Err(PathError::Empty);
        }
        for (index, p) in pieces.iter().enumerate() {
            if p.interval.is_empty() {
                return Err(PathError::EmptyPiece { index });
            }
            if p.value >= space.point_count() {
                return Err(PathError::ValueOutOfRange { index: p.value, points: space.point_count() });
            }
        }
        let first = &pieces[0].interval;
        if !first.lo.is_zero() || !first.lo_closed {
            return Err(PathError::BadStart);
        }
        let last = &pieces[pieces.len() - 1].interval;
        if !last.hi.is_one() || !last.hi_closed {
            return Err(PathError::BadEnd);
        }
        for (index, w) in pieces.windows(2).enumerate() {
            let (a, b) = (&w[0].interval, &w[1].interval);
            if a.hi != b.lo || a.hi_closed == b.lo_closed {
                return Err(PathError::NotAPartition { index, next: index + 1 });
            }
        }
        let mut merged: Vec<Piece> = Vec::with_capacity(pieces.len());
        for p in pieces {
            match merged.last_mut() {
                Some(prev) if prev.value == p.value => {
                    prev.interval.hi = p.interval.hi;
                    prev.interval.hi_closed = p.interval.hi_closed;
                }
                _ => merged.push(p),
            }
        }
        Ok(StepPath { space, pieces: merged })
    }

    /// Builds a path from `(interval text, point name)` pairs.
    pub fn from_specs(space: Arc<FiniteSpace>, specs: &[(&str, &str)]) -> Result<StepPath, String> {
        let mut pieces = Vec::with_capacity(specs.len());
        for (iv, name) in specs {
            let interval: Interval = iv.parse().map_err(|e: crate::error::ParseError| e.to_string())?;
            let value = space.index_of(name).ok_or_else(|| alloc::format!("unknown point {name:?}"))?;
            pieces.push(Piece { interval, value });
        }
        StepPath::new(space, pieces).map_err(|e| e.to_string())
    }

    pub fn constant(space: Arc<FiniteSpace>, value: usize) -> Result<StepPath, PathError> {
        StepPath::new(space, alloc::vec![Piece { interval: Interval::unit(), value }])
    }

    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn start(&self) -> usize {
        self.pieces[0].value
    }

    pub fn end(&self) -> usize {
        self.pieces[self.pieces.len() - 1].value
    }

    pub fn is_loop(&self) -> bool {
        self.start() == self.end()
    }

    pub fn is_constant(&self) -> bool {
        self.pieces.len() == 1
    }

    pub fn value_at(&self, t: &Rat) -> Option<usize> {
        self.pieces.iter().find(|p| p.interval.contains(t)).map(|p| p.value)
    }

    pub fn preimage(&self, set: Subset) -> RatSet {
        RatSet::from_intervals(
            self.pieces
                .iter()
                .filter(|p| set.contains(p.value))
                .map(|p| p.interval.clone())
                .collect(),
        )
    }

    /// First violating set in ascending bitmask order, or `None` when the
    /// path is so-i-continuous. Mode 1 tests opens for semi-open preimages,
    /// mode 2 semi-opens for semi-open preimages, mode 3 semi-opens for open
    /// preimages.
    pub fn so_violation(&self, mode: Mode) -> Option<PathViolation> {
        let family = match mode {
            Mode::One => self.space.opens().to_vec(),
            Mode::Two | Mode::Three => self.space.semi_open_family(),
        };
        self.violation_in(&family, mode)
    }

    /// Same as [`StepPath::so_violation`] with the codomain families
    /// precomputed.
    pub fn so_violation_with(&self, profile: &SpaceProfile, mode: Mode) -> Option<PathViolation> {
        let family = match mode {
            Mode::One => &profile.opens,
            Mode::Two | Mode::Three => &profile.semi_open,
        };
        self.violation_in(family, mode)
    }

    fn violation_in(&self, family: &[Subset], mode: Mode) -> Option<PathViolation> {
        // only the values the path takes matter
        let used = Subset::from_points(self.pieces.iter().map(|p| p.value));
        let mut seen: Vec<Subset> = Vec::new();
        for &set in family {
            let key = set.intersection(used);
            if seen.contains(&key) {
                continue;
            }
            seen.push(key);
            let ok = match mode {
                Mode::One | Mode::Two => self.preimage_is_semi_open(set),
                Mode::Three => self.preimage_is_open(set),
            };
            if !ok {
                return Some(PathViolation { set, preimage: self.preimage(set) });
            }
        }
        None
    }

    /// The preimage is a union of pieces. Its only points outside the
    /// closure of its interior are point pieces whose neighbours are both
    /// outside.
    fn preimage_is_semi_open(&self, set: Subset) -> bool {
        let inside = |k: usize| self.pieces.get(k).is_some_and(|p| set.contains(p.value));
        (0..self.pieces.len()).all(|k| {
            !inside(k)
                || !self.pieces[k].interval.is_degenerate()
                || (k > 0 && inside(k - 1))
                || inside(k + 1)
        })
    }

    /// Open exactly when each piece inside owning an inner breakpoint has
    /// its neighbour across that breakpoint inside too.
    fn preimage_is_open(&self, set: Subset) -> bool {
        let inside = |k: usize| set.contains(self.pieces[k].value);
        (0..self.pieces.len()).filter(|&k| inside(k)).all(|k| {
            let iv = &self.pieces[k].interval;
            (!iv.lo_closed || iv.lo.is_zero() || inside(k - 1)) && (!iv.hi_closed || iv.hi.is_one() || inside(k + 1))
        })
    }

    pub fn is_so_i(&self, mode: Mode) -> bool {
        self.so_violation(mode).is_none()
    }

    /// Values mapped through `images`; used to push paths along maps.
    pub fn map_values(&self, codomain: Arc<FiniteSpace>, images: &[usize]) -> Result<StepPath, PathError> {
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece { interval: p.interval.clone(), value: images[p.value] })
            .collect();
        StepPath::new(codomain, pieces)
    }

    pub fn signature(&self) -> Signature {
        canonical_signature(self)
    }
}

impl fmt::Display for StepPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, p) in self.pieces.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}->{}", p.interval, self.space.name(p.value))?;
        }
        Ok(())
    }
}

fn check_same_space(a: &StepPath, b: &StepPath) -> Result<(), PathError> {
    if Arc::ptr_eq(&a.space, &b.space) || a.space == b.space {
        Ok(())
    } else {
        Err(PathError::SpaceMismatch)
    }
}

/// `α ∗ β`: α runs on `[0,1/2]`, β on `[1/2,1]`; `1/2` takes `α(1) = β(0)`.
pub fn compose_paths(alpha: &StepPath, beta: &StepPath) -> Result<StepPath, PathError> {
    check_same_space(alpha, beta)?;
    if alpha.end() != beta.start() {
        return Err(PathError::EndpointMismatch {
            end: alpha.space.name(alpha.end()).into(),
            start: alpha.space.name(beta.start()).into(),
        });
    }
    let mut pieces: Vec<Piece> = alpha
        .pieces
        .iter()
        .map(|p| Piece { interval: p.interval.halve(false), value: p.value })
        .collect();
    for (k, p) in beta.pieces.iter().enumerate() {
        let mut interval = p.interval.halve(true);
        if k == 0 {
            interval.lo_closed = false;
            if interval.is_empty() {
                continue;
            }
        }
        pieces.push(Piece { interval, value: p.value });
    }
    StepPath::new(alpha.space.clone(), pieces)
}

/// `ᾱ(t) = α(1 − t)`.
pub fn inverse_path(alpha: &StepPath) -> StepPath {
    let pieces = alpha
        .pieces
        .iter()
        .rev()
        .map(|p| Piece { interval: p.interval.reflect(), value: p.value })
        .collect();
    StepPath::new(alpha.space.clone(), pieces).expect("reflection of a partition is a partition")
}

/// A continuous piecewise-linear map `[0,1] -> [0,1]` given by its nodes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlMap {
    nodes: Vec<(Rat, Rat)>,
}

impl PlMap {
    pub fn new(nodes: Vec<(Rat, Rat)>) -> Result<PlMap, PathError> {
        if nodes.len() < 2 || !nodes[0].0.is_zero() || !nodes[nodes.len() - 1].0.is_one() {
            return Err(PathError::BadNodes);
        }
        if nodes.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(PathError::BadNodes);
        }
        if nodes.iter().any(|(_, v)| *v < zero() || *v > one()) {
            return Err(PathError::ValueOutsideUnit);
        }
        Ok(PlMap { nodes })
    }

    pub fn identity() -> PlMap {
        PlMap { nodes: alloc::vec![(zero(), zero()), (one(), one())] }
    }

    /// `2t` on `[0,1/4]`, `t + 1/4` on `[1/4,1/2]`, `(t+1)/2` on `[1/2,1]`:
    /// carries `α(βγ)` onto `(αβ)γ`.
    pub fn associator() -> PlMap {
        PlMap {
            nodes: alloc::vec![(zero(), zero()), (rat(1, 4), rat(1, 2)), (rat(1, 2), rat(3, 4)), (one(), one())],
        }
    }

    /// `0` on `[0,1/2]`, `2t − 1` on `[1/2,1]`: carries `α` onto `1_x α`.
    pub fn left_unitor() -> PlMap {
        PlMap { nodes: alloc::vec![(zero(), zero()), (rat(1, 2), zero()), (one(), one())] }
    }

    /// `2t` on `[0,1/2]`, `1` on `[1/2,1]`: carries `α` onto `α 1_y`.
    pub fn right_unitor() -> PlMap {
        PlMap { nodes: alloc::vec![(zero(), zero()), (rat(1, 2), one()), (one(), one())] }
    }

    pub fn nodes(&self) -> &[(Rat, Rat)] {
        &self.nodes
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        for w in self.nodes.windows(2) {
            let ((t0, v0), (t1, v1)) = (&w[0], &w[1]);
            if t <= t1 {
                return v0 + (t - t0) * (v1 - v0) / (t1 - t0);
            }
        }
        self.nodes[self.nodes.len() - 1].1.clone()
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.nodes.windows(2).all(|w| w[0].1 <= w[1].1)
    }

    pub fn fixes_endpoints(&self) -> bool {
        self.nodes[0].1.is_zero() && self.nodes[self.nodes.len() - 1].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.nodes.windows(2).all(|w| w[0].1 == w[1].1)
    }

    /// Exact preimage of an interval, segment by segment.
    pub fn preimage(&self, target: &Interval) -> RatSet {
        let mut out = Vec::new();
        for w in self.nodes.windows(2) {
            let ((t0, v0), (t1, v1)) = (&w[0], &w[1]);
            if v0 == v1 {
                if target.contains(v0) {
                    out.push(Interval::closed(t0.clone(), t1.clone()));
                }
                continue;
            }
            let (vlo, vhi) = if v0 < v1 { (v0, v1) } else { (v1, v0) };
            let hit = target.intersect(&Interval::closed(vlo.clone(), vhi.clone()));
            if hit.is_empty() {
                continue;
            }
            let back = |v: &Rat| t0 + (v - v0) * (t1 - t0) / (v1 - v0);
            let (a, b) = (back(&hit.lo), back(&hit.hi));
            out.push(if v0 < v1 {
                Interval::new(a, b, hit.lo_closed, hit.hi_closed)
            } else {
                Interval::new(b, a, hit.hi_closed, hit.lo_closed)
            });
        }
        RatSet::from_intervals(out)
    }

    /// Least `t` with `ρ(t) = v`, for nondecreasing surjective ρ.
    fn first_at(&self, v: &Rat) -> Rat {
        for w in self.nodes.windows(2) {
            let ((t0, v0), (t1, v1)) = (&w[0], &w[1]);
            if v0 == v {
                return t0.clone();
            }
            if v < v1 {
                return t0 + (v - v0) * (t1 - t0) / (v1 - v0);
            }
        }
        self.nodes[self.nodes.len() - 1].0.clone()
    }

    /// Greatest `t` with `ρ(t) = v`, for nondecreasing surjective ρ.
    fn last_at(&self, v: &Rat) -> Rat {
        for w in self.nodes.windows(2).rev() {
            let ((t0, v0), (t1, v1)) = (&w[0], &w[1]);
            if v1 == v {
                return t1.clone();
            }
            if v > v0 {
                return t0 + (v - v0) * (t1 - t0) / (v1 - v0);
            }
        }
        self.nodes[0].0.clone()
    }

    pub fn preimage_set(&self, target: &RatSet) -> RatSet {
        target
            .components()
            .iter()
            .fold(RatSet::empty(), |acc, c| acc.union(&self.preimage(c)))
    }
}

impl fmt::Display for PlMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (t, v)) in self.nodes.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "({t},{v})")?;
        }
        Ok(())
    }
}

/// The exact pullback `α ∘ ρ` for an admissible (nondecreasing, endpoint
/// fixing) ρ. Each piece of α pulls back to one interval.
pub fn reparameterize(alpha: &StepPath, rho: &PlMap) -> Result<StepPath, PathError> {
    if !rho.fixes_endpoints() {
        return Err(PathError::ReparamEndpoints);
    }
    if !rho.is_nondecreasing() {
        return Err(PathError::NotMonotone);
    }
    // ρ is a nondecreasing surjection, so each piece pulls back to one
    // interval running from the first (closed end) or last (open end) time
    // ρ reaches the piece's lower endpoint, and dually at the top.
    let pieces = alpha
        .pieces
        .iter()
        .map(|p| {
            let iv = &p.interval;
            let lo = if iv.lo_closed { rho.first_at(&iv.lo) } else { rho.last_at(&iv.lo) };
            let hi = if iv.hi_closed { rho.last_at(&iv.hi) } else { rho.first_at(&iv.hi) };
            Piece { interval: Interval::new(lo, hi, iv.lo_closed, iv.hi_closed), value: p.value }
        })
        .collect();
    StepPath::new(alpha.space.clone(), pieces)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlVerdict {
    /// `exact` is false when mode 3 found no refutation in its finite test
    /// family; that is evidence, not proof.
    Holds { exact: bool },
    Refuted { set: Interval, preimage: RatSet },
    SufficientConditionUnmet,
}

/// so-i-continuity of a PL self-map of `I`.
///
/// * mode 1: every PL map is continuous, hence so-1.
/// * mode 2: a nondecreasing continuous surjection is irresolute. Take a
///   semi-open `A` and `t` with `ρ(t) = a ∈ A`. If `ρ` is flat on a
///   nondegenerate interval around `t`, that interval lies in `ρ⁻¹(A)`.
///   Otherwise `ρ⁻¹(a) = {t}`; pick `a_n → a` in `int A`, and preimages
///   `s_n` (surjectivity). They lie in the open set `ρ⁻¹(int A)` and, by
///   monotonicity, converge to `t`. Either way `t ∈ cl int ρ⁻¹(A)`.
///   Other maps get `SufficientConditionUnmet`.
/// * mode 3: searches half-open test intervals `[c,d)` then `(c,d]`, with
///   `c < d` drawn from `{0, 1/4, 1/2, 3/4, 1}`, the node values and the
///   midpoints between consecutive node values, for a preimage that is not
///   open.
pub fn pl_continuity_class(rho: &PlMap, mode: Mode) -> PlVerdict {
    match mode {
        Mode::One => PlVerdict::Holds { exact: true },
        Mode::Two => {
            if rho.is_nondecreasing() && rho.fixes_endpoints() {
                PlVerdict::Holds { exact: true }
            } else {
                PlVerdict::SufficientConditionUnmet
            }
        }
        Mode::Three => {
            if rho.is_constant() {
                return PlVerdict::Holds { exact: true };
            }
            let mut values: Vec<Rat> = (0..=4).map(|k| rat(k, 4)).collect();
            let mut node_values: Vec<Rat> = rho.nodes.iter().map(|(_, v)| v.clone()).collect();
            node_values.sort();
            node_values.dedup();
            for w in node_values.windows(2) {
                values.push((&w[0] + &w[1]) / rat(2, 1));
            }
            values.extend(node_values);
            values.sort();
            values.dedup();
            for shape in [(true, false), (false, true)] {
                for (i, c) in values.iter().enumerate() {
                    for d in &values[i + 1..] {
                        let set = Interval::new(c.clone(), d.clone(), shape.0, shape.1);
                        let preimage = rho.preimage(&set);
                        if !preimage.is_open() {
                            return PlVerdict::Refuted { set, preimage };
                        }
                    }
                }
            }
            PlVerdict::Holds { exact: false }
        }
    }
}

/// One entry per piece: its value, whether it is a single point, and which
/// of its endpoints it owns.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignatureEntry {
    pub value: usize,
    pub degenerate: bool,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

/// Reparameterization-invariant key of a step path.
pub type Signature = Vec<SignatureEntry>;

pub fn canonical_signature(alpha: &StepPath) -> Signature {
    alpha
        .pieces
        .iter()
        .map(|p| SignatureEntry {
            value: p.value,
            degenerate: p.interval.is_degenerate(),
            lo_closed: p.interval.lo_closed,
            hi_closed: p.interval.hi_closed,
        })
        .collect()
}

/// Renders a signature as `(a,{b},c)`, braces marking single-point pieces.
pub fn format_signature(space: &FiniteSpace, sig: &Signature) -> String {
    let mut out = String::from("(");
    for (k, e) in sig.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        if e.degenerate {
            out.push('{');
            out.push_str(space.name(e.value));
            out.push('}');
        } else {
            out.push_str(space.name(e.value));
        }
    }
    out.push(')');
    out
}

/// A nondecreasing PL map ρ with `to ∘ ρ = from`, when the two paths have
/// the same signature. Nodes sit at matching breakpoints.
pub fn find_reparam(from: &StepPath, to: &StepPath) -> Option<PlMap> {
    if from.space != to.space || canonical_signature(from) != canonical_signature(to) {
        return None;
    }
    let mut nodes: Vec<(Rat, Rat)> = alloc::vec![(zero(), zero())];
    for (a, b) in from.pieces.iter().zip(&to.pieces) {
        for (t, v) in [(&a.interval.lo, &b.interval.lo), (&a.interval.hi, &b.interval.hi)] {
            if let Some(last) = nodes.last() {
                if &last.0 == t {
                    continue;
                }
            }
            nodes.push((t.clone(), v.clone()));
        }
    }
    let rho = PlMap::new(nodes).ok()?;
    (reparameterize(to, &rho).ok()? == *from).then_some(rho)
}

/// Whether some so-i path runs from `x` to `y`, with a witness.
///
/// Modes 1 and 2 always connect through `[0,1/2) -> x, [1/2,1] -> y`: both
/// preimages are finite unions of left-closed intervals, which are
/// semi-open. Mode 3 decides reachability in the graph with an edge `u -- v`
/// whenever `u, v ∈ N(w)` for some `w`, where `N(w)` is the intersection of
/// all semi-open sets containing `w`; the witness walk puts `w` on a single
/// breakpoint between the `u` and `v` pieces.
pub fn path_connectivity(
    space: &Arc<FiniteSpace>,
    x: usize,
    y: usize,
    mode: Mode,
) -> Result<Option<StepPath>, PathError> {
    space.check_point(x)?;
    space.check_point(y)?;
    if x == y {
        return Ok(Some(StepPath::constant(space.clone(), x)?));
    }
    if mode != Mode::Three {
        let half = rat(1, 2);
        let pieces = alloc::vec![
            Piece { interval: Interval::closed_open(zero(), half.clone()), value: x },
            Piece { interval: Interval::closed(half, one()), value: y },
        ];
        return StepPath::new(space.clone(), pieces).map(Some);
    }
    let n = space.point_count();
    let cores: Vec<Subset> = (0..n).map(|w| space.semi_open_core(w)).collect::<Result<_, _>>()?;
    // via[u][v] = least w joining u and v
    let mut via = alloc::vec![alloc::vec![None; n]; n];
    for (w, core) in cores.iter().enumerate() {
        for u in core.points() {
            for v in core.points() {
                if via[u][v].is_none() {
                    via[u][v] = Some(w);
                }
            }
        }
    }
    let mut parent: Vec<Option<usize>> = alloc::vec![None; n];
    let mut seen = alloc::vec![false; n];
    seen[x] = true;
    let mut queue = VecDeque::from([x]);
    while let Some(u) = queue.pop_front() {
        for v in 0..n {
            if !seen[v] && via[u][v].is_some() {
                seen[v] = true;
                parent[v] = Some(u);
                queue.push_back(v);
            }
        }
    }
    if !seen[y] {
        return Ok(None);
    }
    let mut walk = alloc::vec![y];
    while let Some(p) = parent[*walk.last().unwrap()] {
        walk.push(p);
    }
    walk.reverse();
    let steps = walk.len() - 1;
    let denom = steps as i64 + 1;
    let mut pieces = Vec::new();
    for (j, &u) in walk.iter().enumerate() {
        let lo = rat(j as i64, denom);
        let hi = rat(j as i64 + 1, denom);
        pieces.push(Piece { interval: Interval::new(lo, hi.clone(), j == 0, j == steps), value: u });
        if j < steps {
            let w = via[u][walk[j + 1]].expect("edge on the walk");
            pieces.push(Piece { interval: Interval::point(hi), value: w });
        }
    }
    let path = StepPath::new(space.clone(), pieces)?;
    debug_assert!(path.is_so_i(Mode::Three));
    Ok(Some(path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::FiniteSpace;
    use alloc::vec;

    fn s2() -> Arc<FiniteSpace> {
        Arc::new(FiniteSpace::sierpinski())
    }

    fn e1() -> Arc<FiniteSpace> {
        Arc::new(FiniteSpace::with_letters(4, vec![Subset(0), Subset(1), Subset(3), Subset(15)]).unwrap())
    }

    fn path(space: &Arc<FiniteSpace>, specs: &[(&str, &str)]) -> StepPath {
        StepPath::from_specs(space.clone(), specs).unwrap()
    }

    #[test]
    fn half_open_path_is_so1_and_so2() {
        let a = path(&s2(), &[("[0,1/2)", "a"), ("[1/2,1]", "b")]);
        assert!(a.is_so_i(Mode::One));
        assert!(a.is_so_i(Mode::Two));
    }

    #[test]
    fn isolated_point_fails_so1() {
        let a = path(&s2(), &[("[0,1/2)", "b"), ("{1/2}", "a"), ("(1/2,1]", "b")]);
        let v = a.so_violation(Mode::One).unwrap();
        assert_eq!(v.set, Subset(0b01));
        assert_eq!(v.preimage, "{1/2}".parse().unwrap());
    }

    #[test]
    fn constant_path_is_so3() {
        assert!(StepPath::constant(e1(), 2).unwrap().is_so_i(Mode::Three));
    }

    #[test]
    fn partition_validation() {
        let s = s2();
        assert!(StepPath::from_specs(s.clone(), &[("[0,1/2]", "a"), ("[1/2,1]", "b")]).is_err());
        assert!(StepPath::from_specs(s.clone(), &[("[0,1/2)", "a"), ("(1/2,1]", "b")]).is_err());
        assert!(StepPath::from_specs(s.clone(), &[("(0,1]", "a")]).is_err());
        assert!(StepPath::from_specs(s.clone(), &[("[0,1)", "a")]).is_err());
        assert!(StepPath::from_specs(s, &[("[0,1]", "z")]).is_err());
        assert_eq!(
            StepPath::new(s2(), vec![Piece { interval: Interval::unit(), value: 5 }]),
            Err(PathError::ValueOutOfRange { index: 5, points: 2 })
        );
    }

    #[test]
    fn equal_neighbours_merge() {
        let a = path(&s2(), &[("[0,1/4)", "a"), ("[1/4,1/2)", "a"), ("[1/2,1]", "b")]);
        assert_eq!(a, path(&s2(), &[("[0,1/2)", "a"), ("[1/2,1]", "b")]));
    }

    #[test]
    fn composition_arithmetic() {
        let s = s2();
        let x = StepPath::constant(s.clone(), 0).unwrap();
        assert_eq!(compose_paths(&x, &x).unwrap(), x);
        let ab = path(&s, &[("[0,1/2)", "a"), ("[1/2,1]", "b")]);
        let ba = path(&s, &[("[0,1/2)", "b"), ("[1/2,1]", "a")]);
        let c = compose_paths(&ab, &ba).unwrap();
        assert_eq!(c, path(&s, &[("[0,1/4)", "a"), ("[1/4,3/4)", "b"), ("[3/4,1]", "a")]));
        assert_eq!((c.start(), c.end()), (0, 0));
        assert!(matches!(compose_paths(&ab, &ab), Err(PathError::EndpointMismatch { .. })));
    }

    #[test]
    fn composition_with_degenerate_start() {
        let s = s2();
        let ab = path(&s, &[("[0,1/2)", "a"), ("[1/2,1]", "b")]);
        let b_then_a = path(&s, &[("{0}", "b"), ("(0,1]", "a")]);
        let c = compose_paths(&ab, &b_then_a).unwrap();
        assert_eq!(c, path(&s, &[("[0,1/4)", "a"), ("[1/4,1/2]", "b"), ("(1/2,1]", "a")]));
    }

    #[test]
    fn inversion() {
        let s = s2();
        let ab = path(&s, &[("[0,1/2)", "a"), ("[1/2,1]", "b")]);
        let inv = inverse_path(&ab);
        assert_eq!(inv, path(&s, &[("[0,1/2]", "b"), ("(1/2,1]", "a")]));
        assert_eq!(inverse_path(&inv), ab);
        assert_eq!(inv.start(), ab.end());
    }

    #[test]
    fn pl_map_validation_and_eval() {
        assert_eq!(PlMap::new(vec![(zero(), zero())]), Err(PathError::BadNodes));
        assert_eq!(PlMap::new(vec![(zero(), zero()), (rat(1, 2), rat(2, 1)), (one(), one())]), Err(PathError::ValueOutsideUnit));
        let rho = PlMap::associator();
        assert_eq!(rho.eval(&rat(1, 8)), rat(1, 4));
        assert_eq!(rho.eval(&rat(3, 8)), rat(5, 8));
        assert_eq!(rho.eval(&rat(3, 4)), rat(7, 8));
        assert_eq!(PlMap::left_unitor().eval(&rat(1, 4)), zero());
    }

    #[test]
    fn reparameterization_examples() {
        let s = s2();
        let ab = path(&s, &[("[0,1/3)", "a"), ("[1/3,1]", "b")]);
        assert_eq!(reparameterize(&ab, &PlMap::identity()).unwrap(), ab);
        let x = StepPath::constant(s.clone(), 0).unwrap();
        assert_eq!(
            reparameterize(&ab, &PlMap::left_unitor()).unwrap(),
            compose_paths(&x, &ab).unwrap()
        );
        let y = StepPath::constant(s.clone(), 1).unwrap();
        assert_eq!(
            reparameterize(&ab, &PlMap::right_unitor()).unwrap(),
            compose_paths(&ab, &y).unwrap()
        );
        let bad = PlMap::new(vec![(zero(), zero()), (one(), rat(1, 2))]).unwrap();
        assert_eq!(reparameterize(&ab, &bad), Err(PathError::ReparamEndpoints));
        let wiggle = PlMap::new(vec![(zero(), zero()), (rat(1, 3), rat(2, 3)), (rat(2, 3), rat(1, 3)), (one(), one())]).unwrap();
        assert_eq!(reparameterize(&ab, &wiggle), Err(PathError::NotMonotone));
    }

    #[test]
    fn associator_carries_one_bracketing_to_the_other() {
        let s = e1();
        let a = path(&s, &[("[0,1/3)", "a"), ("[1/3,1]", "b")]);
        let b = path(&s, &[("[0,1/2]", "b"), ("(1/2,1]", "a")]);
        let g = path(&s, &[("{0}", "a"), ("(0,2/3)", "c"), ("[2/3,1]", "d")]);
        let left = compose_paths(&a, &compose_paths(&b, &g).unwrap()).unwrap();
        let right = compose_paths(&compose_paths(&a, &b).unwrap(), &g).unwrap();
        assert_eq!(reparameterize(&left, &PlMap::associator()).unwrap(), right);
    }

    #[test]
    fn pl_classes() {
        let rho = PlMap::associator();
        assert_eq!(pl_continuity_class(&rho, Mode::One), PlVerdict::Holds { exact: true });
        assert_eq!(pl_continuity_class(&rho, Mode::Two), PlVerdict::Holds { exact: true });
        assert_eq!(
            pl_continuity_class(&rho, Mode::Three),
            PlVerdict::Refuted {
                set: "[1/4,1/2)".parse().unwrap(),
                preimage: "[1/8,1/4)".parse().unwrap()
            }
        );
        match pl_continuity_class(&PlMap::identity(), Mode::Three) {
            PlVerdict::Refuted { set, .. } => assert_eq!(set, "[1/4,1/2)".parse().unwrap()),
            other => panic!("{other:?}"),
        }
        let fold = PlMap::new(vec![(zero(), zero()), (rat(1, 2), one()), (one(), zero())]).unwrap();
        assert_eq!(pl_continuity_class(&fold, Mode::Two), PlVerdict::SufficientConditionUnmet);
        let flat = PlMap::new(vec![(zero(), rat(1, 2)), (one(), rat(1, 2))]).unwrap();
        assert_eq!(pl_continuity_class(&flat, Mode::Three), PlVerdict::Holds { exact: true });
    }

    #[test]
    fn preimage_of_non_monotone_map() {
        let fold = PlMap::new(vec![(zero(), zero()), (rat(1, 2), one()), (one(), zero())]).unwrap();
        assert_eq!(fold.preimage(&"[1/2,1]".parse().unwrap()), "[1/4,3/4]".parse().unwrap());
        assert_eq!(fold.preimage(&"(1/2,1]".parse().unwrap()), "(1/4,3/4)".parse().unwrap());
    }

    #[test]
    fn signatures() {
        let s = s2();
        let p = path(&s, &[("[0,1/2)", "a"), ("[1/2,1]", "b")]);
        let q = path(&s, &[("[0,1/4)", "a"), ("[1/4,1]", "b")]);
        assert_eq!(canonical_signature(&p), canonical_signature(&q));
        assert_eq!(format_signature(&s, &p.signature()), "(a,b)");
        assert_eq!(canonical_signature(&StepPath::constant(s.clone(), 1).unwrap()).len(), 1);
        let d = path(&s, &[("[0,1/2)", "b"), ("{1/2}", "a"), ("(1/2,1]", "b")]);
        assert_eq!(format_signature(&s, &d.signature()), "(b,{a},b)");
        let rho = find_reparam(&q, &p).unwrap();
        assert_eq!(reparameterize(&p, &rho).unwrap(), q);
        assert!(find_reparam(&p, &d).is_none());
    }

    #[test]
    fn connectivity() {
        let s = s2();
        let w = path_connectivity(&s, 0, 1, Mode::Two).unwrap().unwrap();
        assert_eq!(w, path(&s, &[("[0,1/2)", "a"), ("[1/2,1]", "b")]));
        let d = Arc::new(FiniteSpace::discrete(2));
        assert_eq!(path_connectivity(&d, 0, 1, Mode::Three).unwrap(), None);
        let e = e1();
        for x in 0..4 {
            for y in 0..4 {
                let p = path_connectivity(&e, x, y, Mode::Three).unwrap().unwrap();
                assert!(p.is_so_i(Mode::Three));
                assert_eq!((p.start(), p.end()), (x, y));
            }
        }
        assert!(path_connectivity(&e, 0, 9, Mode::One).is_err());
    }
}
