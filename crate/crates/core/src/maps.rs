//! Maps between finite spaces and the so-1 / so-2 / so-3 / continuous
//! hierarchy.
//!
//! For `f : X -> Y`:
//!
//! | class      | every ...        | has preimage ... |
//! |------------|------------------|------------------|
//! | continuous | open set         | open             |
//! | so-1       | open set         | semi-open        |
//! | so-2       | semi-open set    | semi-open        |
//! | so-3       | semi-open set    | open             |
//!
//! [`classify`] works with (semi-)open preimages, [`classify_via_closed`]
//! with (semi-)closed ones; the two are kept independent so they can check
//! each other.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::MapError;
use crate::space::{enumerate_topologies, FiniteSpace, Subset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Class {
    Continuous,
    So1,
    So2,
    So3,
}

impl Class {
    pub const ALL: [Class; 4] = [Class::Continuous, Class::So1, Class::So2, Class::So3];

    pub fn name(self) -> &'static str {
        match self {
            Class::Continuous => "continuous",
            Class::So1 => "so1",
            Class::So2 => "so2",
            Class::So3 => "so3",
        }
    }

    /// Mode `i` of so-i-continuity.
    pub fn so(i: u8) -> Option<Class> {
        match i {
            1 => Some(Class::So1),
            2 => Some(Class::So2),
            3 => Some(Class::So3),
            _ => None,
        }
    }

    fn bit(self) -> u8 {
        1 << self as u8
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The four families of a space, each as a membership table indexed by
/// bitmask plus the ascending list.
#[derive(Clone, Debug)]
pub struct SpaceProfile {
    pub opens: Vec<Subset>,
    pub closed: Vec<Subset>,
    pub semi_open: Vec<Subset>,
    pub semi_closed: Vec<Subset>,
    is_open: Vec<bool>,
    is_closed: Vec<bool>,
    is_semi_open: Vec<bool>,
    is_semi_closed: Vec<bool>,
}

impl SpaceProfile {
    pub fn of(space: &FiniteSpace) -> SpaceProfile {
        let size = 1usize << space.point_count();
        let table = |family: &[Subset]| {
            let mut t = alloc::vec![false; size];
            for s in family {
                t[s.0 as usize] = true;
            }
            t
        };
        let opens = space.opens().to_vec();
        let closed = space.closed_sets();
        let semi_open = space.semi_open_family();
        let semi_closed = space.semi_closed_family();
        SpaceProfile {
            is_open: table(&opens),
            is_closed: table(&closed),
            is_semi_open: table(&semi_open),
            is_semi_closed: table(&semi_closed),
            opens,
            closed,
            semi_open,
            semi_closed,
        }
    }

    pub fn is_open(&self, s: Subset) -> bool {
        self.is_open[s.0 as usize]
    }

    pub fn is_closed(&self, s: Subset) -> bool {
        self.is_closed[s.0 as usize]
    }

    pub fn is_semi_open(&self, s: Subset) -> bool {
        self.is_semi_open[s.0 as usize]
    }

    pub fn is_semi_closed(&self, s: Subset) -> bool {
        self.is_semi_closed[s.0 as usize]
    }
}

/// A function between finite spaces, given by the image of each point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceMap {
    domain: Arc<FiniteSpace>,
    codomain: Arc<FiniteSpace>,
    images: Vec<usize>,
}

impl SpaceMap {
    pub fn new(
        domain: Arc<FiniteSpace>,
        codomain: Arc<FiniteSpace>,
        images: Vec<usize>,
    ) -> Result<SpaceMap, MapError> {
        if images.len() != domain.point_count() {
            return Err(MapError::WrongLength { expected: domain.point_count(), got: images.len() });
        }
        if let Some(&bad) = images.iter().find(|&&y| y >= codomain.point_count()) {
            return Err(MapError::ImageOutOfRange { index: bad, points: codomain.point_count() });
        }
        Ok(SpaceMap { domain, codomain, images })
    }

    pub fn identity(space: Arc<FiniteSpace>) -> SpaceMap {
        let images = (0..space.point_count()).collect();
        SpaceMap { domain: space.clone(), codomain: space, images }
    }

    pub fn constant(domain: Arc<FiniteSpace>, codomain: Arc<FiniteSpace>, value: usize) -> Result<SpaceMap, MapError> {
        let images = alloc::vec![value; domain.point_count()];
        SpaceMap::new(domain, codomain, images)
    }

    pub fn domain(&self) -> &Arc<FiniteSpace> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FiniteSpace> {
        &self.codomain
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, p: usize) -> usize {
        self.images[p]
    }

    pub fn preimage(&self, s: Subset) -> Subset {
        preimage(&self.images, s)
    }

    pub fn is_constant(&self) -> bool {
        self.images.windows(2).all(|w| w[0] == w[1])
    }

    /// Renders as `a->b, b->c`.
    pub fn format_images(&self) -> String {
        let mut out = String::new();
        for (p, &y) in self.images.iter().enumerate() {
            if p > 0 {
                out.push_str(", ");
            }
            out.push_str(self.domain.name(p));
            out.push_str("->");
            out.push_str(self.codomain.name(y));
        }
        out
    }
}

pub fn preimage(images: &[usize], s: Subset) -> Subset {
    let mut out = 0u32;
    for (p, &y) in images.iter().enumerate() {
        if s.contains(y) {
            out |= 1 << p;
        }
    }
    Subset(out)
}

/// A codomain set whose preimage breaks a class condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Violation {
    pub set: Subset,
    pub preimage: Subset,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuityReport {
    pub continuous: bool,
    pub so1: bool,
    pub so2: bool,
    pub so3: bool,
    /// Indexed like [`Class::ALL`]; `Some` exactly where the flag is false.
    pub witnesses: [Option<Violation>; 4],
}

impl ContinuityReport {
    pub fn holds(&self, class: Class) -> bool {
        match class {
            Class::Continuous => self.continuous,
            Class::So1 => self.so1,
            Class::So2 => self.so2,
            Class::So3 => self.so3,
        }
    }

    pub fn witness(&self, class: Class) -> Option<Violation> {
        self.witnesses[class as usize]
    }

    pub fn flags(&self) -> [bool; 4] {
        [self.continuous, self.so1, self.so2, self.so3]
    }

    fn from_checks(checks: [Option<Violation>; 4]) -> ContinuityReport {
        ContinuityReport {
            continuous: checks[0].is_none(),
            so1: checks[1].is_none(),
            so2: checks[2].is_none(),
            so3: checks[3].is_none(),
            witnesses: checks,
        }
    }
}

fn first_violation(
    images: &[usize],
    family: &[Subset],
    accept: impl Fn(Subset) -> bool,
) -> Option<Violation> {
    family.iter().find_map(|&set| {
        let pre = preimage(images, set);
        (!accept(pre)).then_some(Violation { set, preimage: pre })
    })
}

/// Classifies through preimages of open and semi-open sets.
pub fn classify(f: &SpaceMap) -> ContinuityReport {
    let dom = SpaceProfile::of(&f.domain);
    let cod = SpaceProfile::of(&f.codomain);
    classify_with(&dom, &cod, &f.images)
}

pub fn classify_with(dom: &SpaceProfile, cod: &SpaceProfile, images: &[usize]) -> ContinuityReport {
    ContinuityReport::from_checks([
        first_violation(images, &cod.opens, |p| dom.is_open(p)),
        first_violation(images, &cod.opens, |p| dom.is_semi_open(p)),
        first_violation(images, &cod.semi_open, |p| dom.is_semi_open(p)),
        first_violation(images, &cod.semi_open, |p| dom.is_open(p)),
    ])
}

/// Classifies through preimages of closed and semi-closed sets. Witness sets
/// are therefore closed / semi-closed codomain sets.
pub fn classify_via_closed(f: &SpaceMap) -> ContinuityReport {
    let dom = SpaceProfile::of(&f.domain);
    let cod = SpaceProfile::of(&f.codomain);
    classify_via_closed_with(&dom, &cod, &f.images)
}

pub fn classify_via_closed_with(
    dom: &SpaceProfile,
    cod: &SpaceProfile,
    images: &[usize],
) -> ContinuityReport {
    ContinuityReport::from_checks([
        first_violation(images, &cod.closed, |p| dom.is_closed(p)),
        first_violation(images, &cod.closed, |p| dom.is_semi_closed(p)),
        first_violation(images, &cod.semi_closed, |p| dom.is_semi_closed(p)),
        first_violation(images, &cod.semi_closed, |p| dom.is_closed(p)),
    ])
}

/// Class membership as a bitmask (bit `Class as u8`), without witnesses.
pub fn class_bits(dom: &SpaceProfile, cod: &SpaceProfile, images: &[usize]) -> u8 {
    let all = |family: &[Subset], accept: &dyn Fn(Subset) -> bool| {
        family.iter().all(|&s| accept(preimage(images, s)))
    };
    let mut bits = 0;
    if all(&cod.opens, &|p| dom.is_open(p)) {
        bits |= Class::Continuous.bit();
    }
    if all(&cod.opens, &|p| dom.is_semi_open(p)) {
        bits |= Class::So1.bit();
    }
    if all(&cod.semi_open, &|p| dom.is_semi_open(p)) {
        bits |= Class::So2.bit();
    }
    if all(&cod.semi_open, &|p| dom.is_open(p)) {
        bits |= Class::So3.bit();
    }
    bits
}

/// Pointwise verdicts at one domain point. A failed property carries the
/// neighbourhood of `f(p)` that no suitable neighbourhood of `p` maps into.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointReport {
    pub so1: bool,
    pub so2: bool,
    pub so3: bool,
    pub witnesses: [Option<Subset>; 3],
}

/// Decides the three pointwise properties by neighbourhood search:
/// for each admissible neighbourhood `V` of `f(p)` look for a neighbourhood
/// `A` of `p` (semi-open, semi-open, open respectively) with `f(A) ⊆ V`.
pub fn classify_at(f: &SpaceMap, p: usize) -> Result<PointReport, MapError> {
    f.domain.check_point(p)?;
    let dom = SpaceProfile::of(&f.domain);
    let cod = SpaceProfile::of(&f.codomain);
    let fp = f.images[p];
    let image = |a: Subset| Subset::from_points(a.points().map(|q| f.images[q]));
    let check = |targets: &[Subset], sources: &[Subset]| {
        targets.iter().copied().filter(|v| v.contains(fp)).find(|&v| {
            !sources
                .iter()
                .any(|&a| a.contains(p) && image(a).is_subset_of(v))
        })
    };
    let w1 = check(&cod.opens, &dom.semi_open);
    let w2 = check(&cod.semi_open, &dom.semi_open);
    let w3 = check(&cod.semi_open, &dom.opens);
    Ok(PointReport {
        so1: w1.is_none(),
        so2: w2.is_none(),
        so3: w3.is_none(),
        witnesses: [w1, w2, w3],
    })
}

/// `g ∘ f`.
pub fn compose(f: &SpaceMap, g: &SpaceMap) -> Result<SpaceMap, MapError> {
    if f.codomain != g.domain {
        return Err(MapError::SpaceMismatch);
    }
    Ok(SpaceMap {
        domain: f.domain.clone(),
        codomain: g.codomain.clone(),
        images: f.images.iter().map(|&y| g.images[y]).collect(),
    })
}

/// A class or the constant maps, for implication queries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapProperty {
    Constant,
    Class(Class),
}

impl MapProperty {
    fn holds(self, bits: u8, images: &[usize]) -> bool {
        match self {
            MapProperty::Constant => images.windows(2).all(|w| w[0] == w[1]),
            MapProperty::Class(c) => bits & c.bit() != 0,
        }
    }

    fn name(self) -> &'static str {
        match self {
            MapProperty::Constant => "constant",
            MapProperty::Class(c) => c.name(),
        }
    }
}

impl FromStr for MapProperty {
    type Err = MapError;

    fn from_str(s: &str) -> Result<MapProperty, MapError> {
        Ok(match s {
            "constant" => MapProperty::Constant,
            "continuous" => MapProperty::Class(Class::Continuous),
            "so1" => MapProperty::Class(Class::So1),
            "so2" => MapProperty::Class(Class::So2),
            "so3" => MapProperty::Class(Class::So3),
            _ => return Err(MapError::UnsupportedQuery(s.into())),
        })
    }
}

/// The closed vocabulary of search questions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropertyQuery {
    /// Is the class closed under composition? Witness: `f`, `g` in the class
    /// with `g ∘ f` outside it.
    ComposeClosed(Class),
    /// Does the first property imply the second? Witness: a map with the
    /// first property and not the second.
    Implies(MapProperty, MapProperty),
    /// Is every identity map in the class? Witness: a space.
    Identity(Class),
}

impl FromStr for PropertyQuery {
    type Err = MapError;

    /// `so1-compose-closed`, `continuous-implies-so2`, `identity-so3`; a
    /// trailing `?` is ignored.
    fn from_str(text: &str) -> Result<PropertyQuery, MapError> {
        let s = text.trim().trim_end_matches('?');
        let unsupported = || MapError::UnsupportedQuery(text.into());
        if let Some(c) = s.strip_suffix("-compose-closed") {
            return match c.parse().map_err(|_| unsupported())? {
                MapProperty::Class(c) => Ok(PropertyQuery::ComposeClosed(c)),
                MapProperty::Constant => Err(unsupported()),
            };
        }
        if let Some((a, b)) = s.split_once("-implies-") {
            let a = a.parse().map_err(|_| unsupported())?;
            let b = b.parse().map_err(|_| unsupported())?;
            return Ok(PropertyQuery::Implies(a, b));
        }
        if let Some(c) = s.strip_prefix("identity-") {
            return match c.parse().map_err(|_| unsupported())? {
                MapProperty::Class(c) => Ok(PropertyQuery::Identity(c)),
                MapProperty::Constant => Err(unsupported()),
            };
        }
        Err(unsupported())
    }
}

impl fmt::Display for PropertyQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropertyQuery::ComposeClosed(c) => write!(f, "{c}-compose-closed"),
            PropertyQuery::Implies(a, b) => write!(f, "{}-implies-{}", a.name(), b.name()),
            PropertyQuery::Identity(c) => write!(f, "identity-{c}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Composition { f: SpaceMap, g: SpaceMap },
    Map(SpaceMap),
    Space(Arc<FiniteSpace>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Witness),
    NoneWithinBounds { max_points: usize },
}

/// Exhaustive search over all spaces with at most `max_points` points.
///
/// Candidates are ordered by the largest space involved, then by space
/// indices in the canonical topology order, then by maps (image vectors in
/// lexicographic order). The work is cut into [`SearchPlan::units`]; the
/// first unit with a hit holds the canonical-minimal witness, so units can be
/// evaluated in any order or concurrently.
pub struct SearchPlan {
    query: PropertyQuery,
    max_points: usize,
    spaces: Vec<Arc<FiniteSpace>>,
    profiles: Vec<SpaceProfile>,
    units: Vec<(usize, usize)>,
}

impl SearchPlan {
    pub fn new(query: PropertyQuery, max_points: usize) -> Result<SearchPlan, MapError> {
        if !(1..=4).contains(&max_points) {
            return Err(MapError::SearchBound(max_points));
        }
        let mut spaces = Vec::new();
        for n in 1..=max_points {
            spaces.extend(enumerate_topologies(n)?.into_iter().map(Arc::new));
        }
        let profiles = spaces.iter().map(|s| SpaceProfile::of(s)).collect();
        let mut units = Vec::new();
        for m in 1..=max_points {
            for (ix, x) in spaces.iter().enumerate() {
                let n = x.point_count();
                let keep = match query {
                    PropertyQuery::Identity(_) => n == m,
                    _ => n <= m,
                };
                if keep {
                    units.push((m, ix));
                }
            }
        }
        Ok(SearchPlan { query, max_points, spaces, profiles, units })
    }

    pub fn query(&self) -> PropertyQuery {
        self.query
    }

    pub fn max_points(&self) -> usize {
        self.max_points
    }

    pub fn units(&self) -> usize {
        self.units.len()
    }

    /// First witness inside one unit, in canonical order.
    pub fn search_unit(&self, unit: usize) -> Option<Witness> {
        let (m, ix) = self.units[unit];
        let x = &self.spaces[ix];
        let px = &self.profiles[ix];
        let nx = x.point_count();
        match self.query {
            PropertyQuery::Identity(class) => {
                let images: Vec<usize> = (0..nx).collect();
                let bits = class_bits(px, px, &images);
                (bits & class.bit() == 0).then(|| Witness::Space(x.clone()))
            }
            PropertyQuery::Implies(a, b) => {
                for (iy, y) in self.spaces.iter().enumerate() {
                    if nx.max(y.point_count()) != m {
                        continue;
                    }
                    let py = &self.profiles[iy];
                    for images in all_maps(nx, y.point_count()) {
                        let bits = class_bits(px, py, &images);
                        if a.holds(bits, &images) && !b.holds(bits, &images) {
                            return Some(Witness::Map(SpaceMap {
                                domain: x.clone(),
                                codomain: y.clone(),
                                images,
                            }));
                        }
                    }
                }
                None
            }
            PropertyQuery::ComposeClosed(class) => {
                let bit = class.bit();
                for (iy, y) in self.spaces.iter().enumerate() {
                    let ny = y.point_count();
                    let py = &self.profiles[iy];
                    let firsts: Vec<Vec<usize>> = all_maps(nx, ny)
                        .filter(|im| class_bits(px, py, im) & bit != 0)
                        .collect();
                    if firsts.is_empty() {
                        continue;
                    }
                    for (iz, z) in self.spaces.iter().enumerate() {
                        let nz = z.point_count();
                        if nx.max(ny).max(nz) != m {
                            continue;
                        }
                        let pz = &self.profiles[iz];
                        let seconds: Vec<Vec<usize>> = all_maps(ny, nz)
                            .filter(|im| class_bits(py, pz, im) & bit != 0)
                            .collect();
                        if seconds.is_empty() {
                            continue;
                        }
                        // membership of every map X -> Z, indexed by map number
                        let composite_ok: Vec<bool> = all_maps(nx, nz)
                            .map(|im| class_bits(px, pz, &im) & bit != 0)
                            .collect();
                        for f in &firsts {
                            for g in &seconds {
                                let gf: Vec<usize> = f.iter().map(|&v| g[v]).collect();
                                if !composite_ok[map_index(&gf, nz)] {
                                    return Some(Witness::Composition {
                                        f: SpaceMap {
                                            domain: x.clone(),
                                            codomain: y.clone(),
                                            images: f.clone(),
                                        },
                                        g: SpaceMap {
                                            domain: y.clone(),
                                            codomain: z.clone(),
                                            images: g.clone(),
                                        },
                                    });
                                }
                            }
                        }
                    }
                }
                None
            }
        }
    }

    pub fn run(&self) -> SearchOutcome {
        (0..self.units())
            .find_map(|u| self.search_unit(u))
            .map_or(SearchOutcome::NoneWithinBounds { max_points: self.max_points }, SearchOutcome::Found)
    }
}

pub fn search_counterexample(query: PropertyQuery, max_points: usize) -> Result<SearchOutcome, MapError> {
    Ok(SearchPlan::new(query, max_points)?.run())
}

/// All image vectors `n -> k`, lexicographic with the first point most
/// significant.
pub fn all_maps(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = k.pow(n as u32);
    (0..total).map(move |mut idx| {
        let mut images = alloc::vec![0; n];
        for slot in images.iter_mut().rev() {
            *slot = idx % k;
            idx /= k;
        }
        images
    })
}

fn map_index(images: &[usize], k: usize) -> usize {
    images.iter().fold(0, |acc, &v| acc * k + v)
}
