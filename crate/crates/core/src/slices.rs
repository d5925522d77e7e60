//! Homotopies given as families of step-path slices.
//!
//! `H(s, t)` is described band by band in `t`. Inside a band the slice
//! `H(·, t)` has a fixed list of pieces whose breakpoints move affinely in
//! `t`. Between collision events every slice has the same order type, so
//! checking one slice per event and one per gap decides so-i-continuity of
//! all slices exactly.

use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::SliceError;
use crate::interval::{one, rat, zero, Interval, Rat};
use crate::maps::SpaceProfile;
use crate::paths::{Mode, Piece, StepPath};
use crate::space::{FiniteSpace, Subset};

/// `s = constant + slope * t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Affine {
    pub constant: Rat,
    pub slope: Rat,
}

impl Affine {
    pub fn constant(c: Rat) -> Affine {
        Affine { constant: c, slope: zero() }
    }

    pub fn new(constant: Rat, slope: Rat) -> Affine {
        Affine { constant, slope }
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        &self.constant + &self.slope * t
    }

    fn is_const(&self, c: &Rat) -> bool {
        self.slope == zero() && self.constant == *c
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.slope == zero() {
            write!(f, "{}", self.constant)
        } else if self.slope < zero() {
            write!(f, "{} - {}t", self.constant, -self.slope.clone())
        } else {
            write!(f, "{} + {}t", self.constant, self.slope)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BandPiece {
    pub value: usize,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Band {
    pub t: Interval,
    /// `pieces.len() + 1` breakpoints, first `0` and last `1`.
    pub bounds: Vec<Affine>,
    pub pieces: Vec<BandPiece>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceFamily {
    space: Arc<FiniteSpace>,
    bands: Vec<Band>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceFailure {
    pub t: Rat,
    pub slice: StepPath,
    pub set: Subset,
    pub preimage: crate::interval::RatSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceReport {
    pub start: StepPath,
    pub end: StepPath,
    /// Number of slices examined.
    pub samples: usize,
    pub failure: Option<SliceFailure>,
}

impl SliceReport {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

fn band_slice(space: &Arc<FiniteSpace>, band: &Band, t: &Rat) -> Result<StepPath, crate::error::PathError> {
    let at: Vec<Rat> = band.bounds.iter().map(|b| b.eval(t)).collect();
    let mut pieces = Vec::new();
    for (k, p) in band.pieces.iter().enumerate() {
        let interval = Interval::new(at[k].clone(), at[k + 1].clone(), p.lo_closed, p.hi_closed);
        if !interval.is_empty() {
            pieces.push(Piece { interval, value: p.value });
        }
    }
    StepPath::new(space.clone(), pieces)
}

impl SliceFamily {
    pub fn new(space: Arc<FiniteSpace>, bands: Vec<Band>) -> Result<SliceFamily, SliceError> {
        if bands.is_empty() {
            return Err(SliceError::BadBands(0));
        }
        for (i, b) in bands.iter().enumerate() {
            if b.t.is_empty() {
                return Err(SliceError::BadBands(i));
            }
            let ok_start = if i == 0 {
                b.t.lo == zero() && b.t.lo_closed
            } else {
                let prev = &bands[i - 1].t;
                prev.hi == b.t.lo && prev.hi_closed != b.t.lo_closed
            };
            if !ok_start {
                return Err(SliceError::BadBands(i));
            }
        }
        let last = &bands[bands.len() - 1].t;
        if last.hi != one() || !last.hi_closed {
            return Err(SliceError::BadBands(bands.len() - 1));
        }
        for (i, b) in bands.iter().enumerate() {
            let n = b.pieces.len();
            if n == 0 || b.bounds.len() != n + 1 {
                return Err(SliceError::Shape { band: i, expected: b.bounds.len().saturating_sub(1), bounds: b.bounds.len() });
            }
            if !b.bounds[0].is_const(&zero()) || !b.bounds[n].is_const(&one()) {
                return Err(SliceError::Shape { band: i, expected: n, bounds: b.bounds.len() });
            }
            for (k, w) in b.bounds.windows(2).enumerate() {
                for t in [&b.t.lo, &b.t.hi] {
                    if w[0].eval(t) > w[1].eval(t) {
                        return Err(SliceError::Crossing { band: i, index: k, next: k + 1, t: t.to_string() });
                    }
                }
            }
            for p in &b.pieces {
                space.check_point(p.value).map_err(crate::error::PathError::from)?;
            }
        }
        Ok(SliceFamily { space, bands })
    }

    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn bands(&self) -> &[Band] {
        &self.bands
    }

    /// `H(·, t)` as a step path.
    pub fn slice(&self, t: &Rat) -> Result<StepPath, SliceError> {
        let (i, band) = self
            .bands
            .iter()
            .enumerate()
            .find(|(_, b)| b.t.contains(t))
            .ok_or(SliceError::BadBands(self.bands.len()))?;
        band_slice(&self.space, band, t).map_err(|source| SliceError::BadSlice { band: i, t: t.to_string(), source })
    }

    /// The stationary family `H(s, t) = α(s)`.
    pub fn constant(alpha: &StepPath) -> SliceFamily {
        SliceFamily {
            space: alpha.space().clone(),
            bands: vec![path_band(alpha, Interval::unit())],
        }
    }

    /// `H(s, 1 - t)`.
    pub fn reverse(&self) -> SliceFamily {
        let bands = self
            .bands
            .iter()
            .rev()
            .map(|b| Band {
                t: b.t.reflect(),
                bounds: b
                    .bounds
                    .iter()
                    .map(|a| Affine::new(&a.constant + &a.slope, -a.slope.clone()))
                    .collect(),
                pieces: b.pieces.clone(),
            })
            .collect();
        SliceFamily { space: self.space.clone(), bands }
    }

    /// Runs `self` on `t ∈ [0,1/2]` and `other` on `t ∈ (1/2,1]`.
    pub fn concat(&self, other: &SliceFamily) -> Result<SliceFamily, SliceError> {
        if self.space != other.space {
            return Err(SliceError::GlueMismatch);
        }
        if self.slice(&one())? != other.slice(&zero())? {
            return Err(SliceError::GlueMismatch);
        }
        let half = rat(1, 2);
        let two = rat(2, 1);
        let mut bands: Vec<Band> = self
            .bands
            .iter()
            .map(|b| Band {
                t: b.t.affine(&half, &zero()),
                bounds: b.bounds.iter().map(|a| Affine::new(a.constant.clone(), &a.slope * &two)).collect(),
                pieces: b.pieces.clone(),
            })
            .collect();
        for (i, b) in other.bands.iter().enumerate() {
            let mut t = b.t.affine(&half, &half);
            if i == 0 {
                t.lo_closed = false;
                if t.is_empty() {
                    continue;
                }
            }
            bands.push(Band {
                t,
                bounds: b
                    .bounds
                    .iter()
                    .map(|a| Affine::new(&a.constant - &a.slope, &a.slope * &two))
                    .collect(),
                pieces: b.pieces.clone(),
            });
        }
        SliceFamily::new(self.space.clone(), bands)
    }

    /// The contraction of `α ᾱ` to the constant path at `α(0)`:
    /// `α(2s)` on `[0, t/2]`, `α(t)` on `[t/2, 1 - t/2]`, `α(2 - 2s)` after.
    /// `H_0` is the constant path and `H_1 = α ᾱ`.
    pub fn inverse_cancel(alpha: &StepPath) -> SliceFamily {
        let half = rat(1, 2);
        let pieces = alpha.pieces();
        let mut bands = Vec::with_capacity(pieces.len());
        for (k, cur) in pieces.iter().enumerate() {
            let mut bounds = vec![Affine::constant(zero())];
            let mut specs = Vec::new();
            for p in &pieces[..k] {
                bounds.push(Affine::constant(&p.interval.hi * &half));
                specs.push(BandPiece { value: p.value, lo_closed: p.interval.lo_closed, hi_closed: p.interval.hi_closed });
            }
            let lo_closed = cur.interval.lo_closed;
            bounds.push(Affine::new(zero(), half.clone()));
            specs.push(BandPiece { value: cur.value, lo_closed, hi_closed: false });
            bounds.push(Affine::new(one(), -half.clone()));
            specs.push(BandPiece { value: cur.value, lo_closed: true, hi_closed: true });
            bounds.push(Affine::constant(one() - &cur.interval.lo * &half));
            specs.push(BandPiece { value: cur.value, lo_closed: false, hi_closed: lo_closed });
            for p in pieces[..k].iter().rev() {
                bounds.push(Affine::constant(one() - &p.interval.lo * &half));
                specs.push(BandPiece { value: p.value, lo_closed: p.interval.hi_closed, hi_closed: p.interval.lo_closed });
            }
            bands.push(Band { t: cur.interval.clone(), bounds, pieces: specs });
        }
        SliceFamily { space: alpha.space().clone(), bands }
    }
}

fn path_band(alpha: &StepPath, t: Interval) -> Band {
    let mut bounds = vec![Affine::constant(zero())];
    let mut pieces = Vec::new();
    for p in alpha.pieces() {
        bounds.push(Affine::constant(p.interval.hi.clone()));
        pieces.push(BandPiece { value: p.value, lo_closed: p.interval.lo_closed, hi_closed: p.interval.hi_closed });
    }
    Band { t, bounds, pieces }
}

/// Critical values of `t` in a band: its endpoints and every time two
/// consecutive bounds meet without coinciding identically.
fn events(band: &Band) -> Vec<Rat> {
    let mut out = vec![band.t.lo.clone(), band.t.hi.clone()];
    for w in band.bounds.windows(2) {
        let dc = &w[1].constant - &w[0].constant;
        let ds = &w[1].slope - &w[0].slope;
        if ds != zero() {
            let root = -dc / ds;
            if root > band.t.lo && root < band.t.hi {
                out.push(root);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Decides whether every slice `H(·, t)` is so-i-continuous.
pub fn verify_slices(h: &SliceFamily, mode: Mode) -> Result<SliceReport, SliceError> {
    let profile = SpaceProfile::of(&h.space);
    let start = h.slice(&zero())?;
    let end = h.slice(&one())?;
    let two = rat(2, 1);
    let mut samples = 0;
    for (i, band) in h.bands.iter().enumerate() {
        let ev = events(band);
        let mut ts = Vec::new();
        for (j, e) in ev.iter().enumerate() {
            if band.t.contains(e) {
                ts.push(e.clone());
            }
            if let Some(next) = ev.get(j + 1) {
                ts.push((e + next) / &two);
            }
        }
        for t in ts {
            let slice = band_slice(&h.space, band, &t)
                .map_err(|source| SliceError::BadSlice { band: i, t: t.to_string(), source })?;
            samples += 1;
            if let Some(v) = slice.so_violation_with(&profile, mode) {
                return Ok(SliceReport {
                    start,
                    end,
                    samples,
                    failure: Some(SliceFailure { t, slice, set: v.set, preimage: v.preimage }),
                });
            }
        }
    }
    Ok(SliceReport { start, end, samples, failure: None })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JointOutcome {
    NoViolationFound,
    /// A lattice point `(s, t)` inside `H^{-1}(set)` with no support from
    /// the neighbouring grid cells.
    Candidate { set: Subset, s: Rat, t: Rat },
}

/// Grid-based falsifier for joint so-i-continuity on `[0,1]²`.
///
/// Samples `H` at lattice points `(j/g, k/g)` and cell centres. For modes 1
/// and 2 a lattice point in a preimage is suspicious when no adjacent cell
/// centre is in the preimage (it cannot lie in the closure of an interior);
/// for mode 3 when some adjacent centre falls outside. A candidate is a
/// hint, not a proof: the grid can miss thin features.
#[allow(clippy::needless_range_loop)]
pub fn falsify_joint(h: &SliceFamily, mode: Mode, grid: usize) -> Result<JointOutcome, SliceError> {
    if grid == 0 {
        return Err(SliceError::BadGrid);
    }
    let g = grid as i64;
    let profile = SpaceProfile::of(&h.space);
    let lattice_slices: Vec<StepPath> = (0..=g).map(|k| h.slice(&rat(k, g))).collect::<Result<_, _>>()?;
    let centre_slices: Vec<StepPath> =
        (0..g).map(|k| h.slice(&rat(2 * k + 1, 2 * g))).collect::<Result<_, _>>()?;
    let at = |p: &StepPath, s: &Rat| p.value_at(s).expect("slices cover [0,1]");
    let lattice: Vec<Vec<usize>> = lattice_slices
        .iter()
        .map(|p| (0..=g).map(|j| at(p, &rat(j, g))).collect())
        .collect();
    let centres: Vec<Vec<usize>> = centre_slices
        .iter()
        .map(|p| (0..g).map(|j| at(p, &rat(2 * j + 1, 2 * g))).collect())
        .collect();
    let tests: Vec<Subset> = match mode {
        Mode::One => profile.opens.clone(),
        Mode::Two | Mode::Three => profile.semi_open.clone(),
    };
    for set in tests {
        if set.is_empty() {
            continue;
        }
        for k in 0..=grid {
            for j in 0..=grid {
                if !set.contains(lattice[k][j]) {
                    continue;
                }
                let mut inside = 0;
                let mut outside = 0;
                for ck in [k.wrapping_sub(1), k] {
                    for cj in [j.wrapping_sub(1), j] {
                        if ck < grid && cj < grid {
                            if set.contains(centres[ck][cj]) {
                                inside += 1;
                            } else {
                                outside += 1;
                            }
                        }
                    }
                }
                let flagged = match mode {
                    Mode::One | Mode::Two => inside == 0,
                    Mode::Three => outside > 0,
                };
                if flagged {
                    return Ok(JointOutcome::Candidate { set, s: rat(j as i64, g), t: rat(k as i64, g) });
                }
            }
        }
    }
    Ok(JointOutcome::NoViolationFound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s2() -> Arc<FiniteSpace> {
        Arc::new(FiniteSpace::sierpinski())
    }

    fn alpha(space: &Arc<FiniteSpace>) -> StepPath {
        StepPath::from_specs(space.clone(), &[("[0,1/2)", "a"), ("[1/2,3/4)", "b"), ("[3/4,1]", "a")]).unwrap()
    }

    /// b everywhere except one slice, which carries an isolated `a`.
    pub(crate) fn spike_family(space: &Arc<FiniteSpace>) -> SliceFamily {
        let half = rat(1, 2);
        let flat = |t: Interval| Band {
            t,
            bounds: vec![Affine::constant(zero()), Affine::constant(one())],
            pieces: vec![BandPiece { value: 1, lo_closed: true, hi_closed: true }],
        };
        let spike = Band {
            t: Interval::point(half.clone()),
            bounds: vec![
                Affine::constant(zero()),
                Affine::constant(half.clone()),
                Affine::constant(half.clone()),
                Affine::constant(one()),
            ],
            pieces: vec![
                BandPiece { value: 1, lo_closed: true, hi_closed: false },
                BandPiece { value: 0, lo_closed: true, hi_closed: true },
                BandPiece { value: 1, lo_closed: false, hi_closed: true },
            ],
        };
        SliceFamily::new(
            space.clone(),
            vec![flat(Interval::closed_open(zero(), half.clone())), spike, flat(Interval::open_closed(half, one()))],
        )
        .unwrap()
    }

    #[test]
    fn constant_family() {
        let s = s2();
        let a = alpha(&s);
        let h = SliceFamily::constant(&a);
        for mode in Mode::ALL {
            let r = verify_slices(&h, mode).unwrap();
            assert_eq!(r.holds(), a.is_so_i(mode));
            assert_eq!(r.start, a);
            assert_eq!(r.end, a);
        }
        assert_eq!(falsify_joint(&h, Mode::Two, 8).unwrap(), JointOutcome::NoViolationFound);
    }

    #[test]
    fn inverse_cancel_contracts() {
        let s = s2();
        let a = alpha(&s);
        let h = SliceFamily::inverse_cancel(&a);
        let h = SliceFamily::new(s.clone(), h.bands().to_vec()).unwrap();
        for mode in [Mode::One, Mode::Two] {
            let r = verify_slices(&h, mode).unwrap();
            assert!(r.holds(), "{:?}", r.failure);
            assert!(r.start.is_constant() && r.start.start() == 0);
            assert_eq!(r.end, crate::paths::compose_paths(&a, &crate::paths::inverse_path(&a)).unwrap());
        }
        assert_eq!(falsify_joint(&h, Mode::Two, 16).unwrap(), JointOutcome::NoViolationFound);
    }

    #[test]
    fn spike_is_caught() {
        let s = s2();
        let h = spike_family(&s);
        let r = verify_slices(&h, Mode::One).unwrap();
        let f = r.failure.expect("slice at 1/2 fails");
        assert_eq!(f.t, rat(1, 2));
        assert!(!f.slice.is_so_i(Mode::One));
        assert_eq!(
            falsify_joint(&h, Mode::One, 4).unwrap(),
            JointOutcome::Candidate { set: Subset(1), s: rat(1, 2), t: rat(1, 2) }
        );
    }

    #[test]
    fn pasting_and_reversal() {
        let s = s2();
        let a = alpha(&s);
        let f = SliceFamily::inverse_cancel(&a);
        let g = f.reverse();
        assert_eq!(g.slice(&zero()).unwrap(), f.slice(&one()).unwrap());
        let both = f.concat(&g).unwrap();
        let r = verify_slices(&both, Mode::Two).unwrap();
        assert!(r.holds());
        assert_eq!(r.start, f.slice(&zero()).unwrap());
        assert_eq!(r.end, g.slice(&one()).unwrap());
        assert_eq!(both.slice(&rat(1, 2)).unwrap(), f.slice(&one()).unwrap());
        assert_eq!(both.slice(&rat(1, 4)).unwrap(), f.slice(&rat(1, 2)).unwrap());
        assert_eq!(f.concat(&f), Err(SliceError::GlueMismatch));
    }

    #[test]
    fn crossing_bounds_are_rejected() {
        let s = s2();
        let band = Band {
            t: Interval::unit(),
            bounds: vec![
                Affine::constant(zero()),
                Affine::new(rat(1, 4), rat(1, 2)),
                Affine::constant(rat(1, 2)),
                Affine::constant(one()),
            ],
            pieces: vec![
                BandPiece { value: 0, lo_closed: true, hi_closed: false },
                BandPiece { value: 1, lo_closed: true, hi_closed: false },
                BandPiece { value: 0, lo_closed: true, hi_closed: true },
            ],
        };
        assert!(matches!(SliceFamily::new(s, vec![band]), Err(SliceError::Crossing { index: 1, .. })));
    }

    #[test]
    fn collision_events_are_sampled() {
        let s = s2();
        // the b piece shrinks to the single point 1/2 at t = 1
        let band = Band {
            t: Interval::unit(),
            bounds: vec![
                Affine::constant(zero()),
                Affine::new(rat(1, 4), rat(1, 4)),
                Affine::new(rat(3, 4), rat(-1, 4)),
                Affine::constant(one()),
            ],
            pieces: vec![
                BandPiece { value: 0, lo_closed: true, hi_closed: false },
                BandPiece { value: 1, lo_closed: true, hi_closed: true },
                BandPiece { value: 0, lo_closed: false, hi_closed: true },
            ],
        };
        let h = SliceFamily::new(s, vec![band]).unwrap();
        let r = verify_slices(&h, Mode::One).unwrap();
        assert!(r.holds());
        assert_eq!(r.samples, 3);
        assert_eq!(r.end.to_string(), "[0,1/2)->a, {1/2}->b, (1/2,1]->a");
        // the a-preimage [0,x) u (y,1] stays open throughout
        assert!(verify_slices(&h, Mode::Three).unwrap().holds());
    }
}
