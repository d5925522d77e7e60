//! Certificates for so-i-homotopy of step paths.
//!
//! A certificate is a derivation tree. Each node is one of the proved
//! homotopy rules (equivalence relation, reparameterization, pasting, unit,
//! associativity, inverse cancellation); checking a node discharges the
//! rule's hypotheses exactly and yields the judgment `lhs ≃_i rhs`. The
//! connecting homotopy itself is not constructed: a rule is trusted once its
//! hypotheses hold.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{CertError, PathError};
use crate::maps::{classify, compose, SpaceMap, SpaceProfile};
use crate::paths::{
    compose_paths, inverse_path, pl_continuity_class, reparameterize, Mode, PlMap, PlVerdict, StepPath,
};
use crate::space::FiniteSpace;

/// The hypothesis a rejected node failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Hypothesis {
    /// Every path a rule mentions must be so-i-continuous.
    PathSoI,
    /// `α(1) = β(0)` for each composed pair.
    Composable,
    /// The right side of the first step equals the left side of the second.
    TransitivityMiddle,
    /// `ρ(0) = 0` and `ρ(1) = 1`.
    ReparamEndpoints,
    /// ρ must be nondecreasing.
    ReparamMonotone,
    /// ρ must be so-i-continuous.
    ReparamSoI,
    /// `α(1) = α'(1) = β(0) = β'(0)` for pasting.
    PasteEndpoints,
    /// `α(0) = β(0)` and `α(1) = β(1)` for homotopy relative to endpoints.
    RelEndpoints,
    /// All paths must live in one space.
    SameSpace,
}

impl Hypothesis {
    pub fn code(self) -> &'static str {
        match self {
            Hypothesis::PathSoI => "path-so-i",
            Hypothesis::Composable => "composable",
            Hypothesis::TransitivityMiddle => "transitivity-middle",
            Hypothesis::ReparamEndpoints => "reparam-endpoints",
            Hypothesis::ReparamMonotone => "reparam-monotone",
            Hypothesis::ReparamSoI => "reparam-so-i",
            Hypothesis::PasteEndpoints => "paste-endpoints",
            Hypothesis::RelEndpoints => "rel-endpoints",
            Hypothesis::SameSpace => "same-space",
        }
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hypothesis::PathSoI => "every path involved must be so-i-continuous",
            Hypothesis::Composable => "composed paths need alpha(1) = beta(0)",
            Hypothesis::TransitivityMiddle => "transitivity middle mismatch",
            Hypothesis::ReparamEndpoints => "reparameterization needs rho(0) = 0 and rho(1) = 1",
            Hypothesis::ReparamMonotone => "reparameterization rho must be nondecreasing",
            Hypothesis::ReparamSoI => "reparameterization rho must be so-i-continuous",
            Hypothesis::PasteEndpoints => "pasting needs alpha(1) = alpha'(1) = beta(0) = beta'(0)",
            Hypothesis::RelEndpoints => "homotopy rel endpoints needs alpha(0) = beta(0) and alpha(1) = beta(1)",
            Hypothesis::SameSpace => "all paths must live in the same space",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Refl(StepPath),
    Sym(Box<Node>),
    Trans(Box<Node>, Box<Node>),
    /// `α ∘ ρ ≃ α`.
    Reparam(StepPath, PlMap),
    /// From `α ≃ α'` and `β ≃ β'` conclude `αβ ≃ α'β'`.
    Paste(Box<Node>, Box<Node>),
    /// `1_x α ≃ α`.
    UnitLeft(StepPath),
    /// `α 1_y ≃ α`.
    UnitRight(StepPath),
    /// `α(βγ) ≃ (αβ)γ`.
    Assoc(StepPath, StepPath, StepPath),
    /// `α ᾱ ≃ 1_x`.
    InvCancelLeft(StepPath),
    /// `ᾱ α ≃ 1_y`.
    InvCancelRight(StepPath),
}

impl Node {
    pub fn rule(&self) -> &'static str {
        match self {
            Node::Refl(_) => "refl",
            Node::Sym(_) => "sym",
            Node::Trans(..) => "trans",
            Node::Reparam(..) => "reparam",
            Node::Paste(..) => "paste",
            Node::UnitLeft(_) => "unit-left",
            Node::UnitRight(_) => "unit-right",
            Node::Assoc(..) => "assoc",
            Node::InvCancelLeft(_) => "inv-cancel-left",
            Node::InvCancelRight(_) => "inv-cancel-right",
        }
    }

    pub fn sym(c: Node) -> Node {
        match c {
            Node::Refl(a) => Node::Refl(a),
            Node::Sym(inner) => *inner,
            other => Node::Sym(Box::new(other)),
        }
    }

    /// `Trans`, dropping reflexive steps.
    pub fn trans(a: Node, b: Node) -> Node {
        match (a, b) {
            (Node::Refl(_), b) => b,
            (a, Node::Refl(_)) => a,
            (a, b) => Node::Trans(Box::new(a), Box::new(b)),
        }
    }

    /// `Paste`, collapsing two reflexive halves into one.
    pub fn paste(a: Node, b: Node) -> Result<Node, PathError> {
        match (a, b) {
            (Node::Refl(x), Node::Refl(y)) => Ok(Node::Refl(compose_paths(&x, &y)?)),
            (a, b) => Ok(Node::Paste(Box::new(a), Box::new(b))),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Node::Sym(c) => 1 + c.size(),
            Node::Trans(a, b) | Node::Paste(a, b) => 1 + a.size() + b.size(),
            _ => 1,
        }
    }

    fn children(&self) -> Vec<&Node> {
        match self {
            Node::Sym(c) => alloc::vec![&**c],
            Node::Trans(a, b) | Node::Paste(a, b) => alloc::vec![&**a, &**b],
            _ => Vec::new(),
        }
    }

    /// Renders the tree shape, e.g. `(trans (assoc) (paste (refl) (reparam)))`.
    pub fn shape(&self) -> String {
        let kids = self.children();
        if kids.is_empty() {
            return format!("({})", self.rule());
        }
        let mut out = format!("({}", self.rule());
        for k in kids {
            out.push(' ');
            out.push_str(&k.shape());
        }
        out.push(')');
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub mode: Mode,
    /// Relative to endpoints when set; free homotopy otherwise.
    pub rel: bool,
    pub root: Node,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Judgment {
    pub lhs: StepPath,
    pub rhs: StepPath,
    pub mode: Mode,
    pub rel: bool,
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] ~{} [{}]", self.lhs, self.mode, self.rhs)?;
        if self.rel {
            f.write_str(" rel endpoints")?;
        }
        Ok(())
    }
}

struct Checker {
    mode: Mode,
    rel: bool,
    space: Option<Arc<FiniteSpace>>,
    profile: Option<SpaceProfile>,
    so_cache: BTreeMap<StepPath, bool>,
}

fn fail(node: &str, rule: &'static str, hypothesis: Hypothesis, detail: String) -> CertError {
    CertError { node: node.into(), rule, hypothesis, detail }
}

impl Checker {
    fn new(mode: Mode, rel: bool) -> Checker {
        Checker { mode, rel, space: None, profile: None, so_cache: BTreeMap::new() }
    }

    fn same_space(&mut self, p: &StepPath, loc: &str, rule: &'static str) -> Result<(), CertError> {
        match &self.space {
            None => {
                self.space = Some(p.space().clone());
                self.profile = Some(SpaceProfile::of(p.space()));
                Ok(())
            }
            Some(s) if Arc::ptr_eq(s, p.space()) || **s == **p.space() => Ok(()),
            Some(_) => Err(fail(loc, rule, Hypothesis::SameSpace, String::new())),
        }
    }

    fn require_so(&mut self, p: &StepPath, loc: &str, rule: &'static str) -> Result<(), CertError> {
        self.same_space(p, loc, rule)?;
        if let Some(&ok) = self.so_cache.get(p) {
            return if ok {
                Ok(())
            } else {
                Err(fail(loc, rule, Hypothesis::PathSoI, format!("path {p}")))
            };
        }
        let profile = self.profile.as_ref().expect("profile set with space");
        let violation = p.so_violation_with(profile, self.mode);
        self.so_cache.insert(p.clone(), violation.is_none());
        match violation {
            None => Ok(()),
            Some(v) => Err(fail(
                loc,
                rule,
                Hypothesis::PathSoI,
                format!(
                    "path {p}: preimage of {} is {}",
                    p.space().format_subset(v.set),
                    v.preimage
                ),
            )),
        }
    }

    fn compose(&self, a: &StepPath, b: &StepPath, loc: &str, rule: &'static str) -> Result<StepPath, CertError> {
        compose_paths(a, b).map_err(|e| match e {
            PathError::SpaceMismatch => fail(loc, rule, Hypothesis::SameSpace, String::new()),
            other => fail(loc, rule, Hypothesis::Composable, format!("{other}")),
        })
    }

    /// The admissibility obligations for a reparameterization ρ.
    fn require_rho(&self, rho: &PlMap, loc: &str, rule: &'static str) -> Result<(), CertError> {
        if !rho.fixes_endpoints() {
            return Err(fail(loc, rule, Hypothesis::ReparamEndpoints, format!("rho = {rho}")));
        }
        if !rho.is_nondecreasing() {
            return Err(fail(loc, rule, Hypothesis::ReparamMonotone, format!("rho = {rho}")));
        }
        match pl_continuity_class(rho, self.mode) {
            PlVerdict::Refuted { set, preimage } => Err(fail(
                loc,
                rule,
                Hypothesis::ReparamSoI,
                format!("rho = {rho}: semi-open {set} has preimage {preimage}, which is not open"),
            )),
            PlVerdict::SufficientConditionUnmet => Err(fail(
                loc,
                rule,
                Hypothesis::ReparamSoI,
                format!("rho = {rho} is not a nondecreasing surjection"),
            )),
            PlVerdict::Holds { .. } => Ok(()),
        }
    }

    /// Discharges a reparameterization step `α ∘ ρ ≃ α` and returns `α ∘ ρ`.
    fn reparam(&mut self, alpha: &StepPath, rho: &PlMap, loc: &str, rule: &'static str) -> Result<StepPath, CertError> {
        self.require_rho(rho, loc, rule)?;
        self.require_so(alpha, loc, rule)?;
        let pulled = reparameterize(alpha, rho).map_err(|e| match e {
            PathError::NotMonotone => fail(loc, rule, Hypothesis::ReparamMonotone, String::new()),
            _ => fail(loc, rule, Hypothesis::ReparamEndpoints, String::new()),
        })?;
        self.require_so(&pulled, loc, rule)?;
        Ok(pulled)
    }

    fn check(&mut self, node: &Node, loc: &str) -> Result<(StepPath, StepPath), CertError> {
        let rule = node.rule();
        let (lhs, rhs) = match node {
            Node::Refl(a) => {
                self.require_so(a, loc, rule)?;
                (a.clone(), a.clone())
            }
            Node::Sym(c) => {
                let (l, r) = self.check(c, &format!("{loc}.sym"))?;
                (r, l)
            }
            Node::Trans(c1, c2) => {
                let (a, b) = self.check(c1, &format!("{loc}.trans[0]"))?;
                let (b2, c) = self.check(c2, &format!("{loc}.trans[1]"))?;
                if b != b2 {
                    return Err(fail(
                        loc,
                        rule,
                        Hypothesis::TransitivityMiddle,
                        format!("first ends at [{b}], second starts at [{b2}]"),
                    ));
                }
                (a, c)
            }
            Node::Reparam(alpha, rho) => {
                let pulled = self.reparam(alpha, rho, loc, rule)?;
                (pulled, alpha.clone())
            }
            Node::Paste(f, g) => {
                let (a, a2) = self.check(f, &format!("{loc}.paste[0]"))?;
                let (b, b2) = self.check(g, &format!("{loc}.paste[1]"))?;
                let ends = [a.end(), a2.end(), b.start(), b2.start()];
                if ends.iter().any(|&e| e != ends[0]) {
                    let s = a.space();
                    return Err(fail(
                        loc,
                        rule,
                        Hypothesis::PasteEndpoints,
                        format!(
                            "alpha(1) = {}, alpha'(1) = {}, beta(0) = {}, beta'(0) = {}",
                            s.name(ends[0]),
                            s.name(ends[1]),
                            s.name(ends[2]),
                            s.name(ends[3])
                        ),
                    ));
                }
                let l = self.compose(&a, &b, loc, rule)?;
                let r = self.compose(&a2, &b2, loc, rule)?;
                self.require_so(&l, loc, rule)?;
                self.require_so(&r, loc, rule)?;
                (l, r)
            }
            Node::UnitLeft(alpha) => {
                let pulled = self.reparam(alpha, &PlMap::left_unitor(), loc, rule)?;
                let unit = StepPath::constant(alpha.space().clone(), alpha.start())
                    .expect("start is a point of the space");
                let l = self.compose(&unit, alpha, loc, rule)?;
                debug_assert_eq!(pulled, l);
                (l, alpha.clone())
            }
            Node::UnitRight(alpha) => {
                let pulled = self.reparam(alpha, &PlMap::right_unitor(), loc, rule)?;
                let unit = StepPath::constant(alpha.space().clone(), alpha.end())
                    .expect("end is a point of the space");
                let l = self.compose(alpha, &unit, loc, rule)?;
                debug_assert_eq!(pulled, l);
                (l, alpha.clone())
            }
            Node::Assoc(a, b, g) => {
                for p in [a, b, g] {
                    self.require_so(p, loc, rule)?;
                }
                let bg = self.compose(b, g, loc, rule)?;
                let left = self.compose(a, &bg, loc, rule)?;
                let ab = self.compose(a, b, loc, rule)?;
                let right = self.compose(&ab, g, loc, rule)?;
                let pulled = self.reparam(&left, &PlMap::associator(), loc, rule)?;
                debug_assert_eq!(pulled, right);
                self.require_so(&right, loc, rule)?;
                (left, right)
            }
            Node::InvCancelLeft(alpha) | Node::InvCancelRight(alpha) => {
                let inv = inverse_path(alpha);
                self.require_so(alpha, loc, rule)?;
                self.require_so(&inv, loc, rule)?;
                let (first, second) = match node {
                    Node::InvCancelLeft(_) => (alpha, &inv),
                    _ => (&inv, alpha),
                };
                let l = self.compose(first, second, loc, rule)?;
                self.require_so(&l, loc, rule)?;
                let unit = StepPath::constant(alpha.space().clone(), first.start())
                    .expect("start is a point of the space");
                (l, unit)
            }
        };
        if self.rel && (lhs.start() != rhs.start() || lhs.end() != rhs.end()) {
            return Err(fail(loc, rule, Hypothesis::RelEndpoints, format!("[{lhs}] vs [{rhs}]")));
        }
        Ok((lhs, rhs))
    }
}

/// Checks every side condition in the tree and returns the root judgment.
pub fn check_certificate(cert: &Certificate) -> Result<Judgment, CertError> {
    let mut checker = Checker::new(cert.mode, cert.rel);
    let (lhs, rhs) = checker.check(&cert.root, "root")?;
    Ok(Judgment { lhs, rhs, mode: cert.mode, rel: cert.rel })
}

/// Encodes a self-map `h` of a finite space as the step path that visits
/// `h(x_0), h(x_1), ...` on consecutive pieces `[k/n, (k+1)/n)`.
pub fn map_realization(h: &SpaceMap) -> StepPath {
    let n = h.domain().point_count() as i64;
    let pieces = (0..n)
        .map(|k| crate::paths::Piece {
            interval: crate::interval::Interval::new(
                crate::interval::rat(k, n),
                crate::interval::rat(k + 1, n),
                true,
                k == n - 1,
            ),
            value: h.apply(k as usize),
        })
        .collect();
    StepPath::new(h.codomain().clone(), pieces).expect("consecutive half-open pieces partition [0,1]")
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EquivalenceError {
    #[error("{which} is not irresolute")]
    NotIrresolute { which: &'static str },
    #[error("maps must run X -> Y and Y -> X")]
    Shape,
    #[error("certificates for irresolute homotopy equivalence must use mode 2")]
    Mode,
    #[error(transparent)]
    Cert(#[from] CertError),
}

/// Irresolute homotopy equivalence: `f : X -> Y` and `g : Y -> X`
/// irresolute, `c1` proving `g∘f ≃_2 1_X` and `c2` proving `f∘g ≃_2 1_Y`,
/// with maps compared through [`map_realization`]. A certificate proving the
/// judgment in the opposite orientation is accepted too.
pub fn check_homotopy_equivalence(
    f: &SpaceMap,
    g: &SpaceMap,
    c1: &Certificate,
    c2: &Certificate,
) -> Result<bool, EquivalenceError> {
    if f.codomain() != g.domain() || g.codomain() != f.domain() {
        return Err(EquivalenceError::Shape);
    }
    if !classify(f).so2 {
        return Err(EquivalenceError::NotIrresolute { which: "f" });
    }
    if !classify(g).so2 {
        return Err(EquivalenceError::NotIrresolute { which: "g" });
    }
    if c1.mode != Mode::Two || c2.mode != Mode::Two {
        return Err(EquivalenceError::Mode);
    }
    let gf = compose(f, g).map_err(|_| EquivalenceError::Shape)?;
    let fg = compose(g, f).map_err(|_| EquivalenceError::Shape)?;
    let id_x = SpaceMap::identity(f.domain().clone());
    let id_y = SpaceMap::identity(g.domain().clone());
    let j1 = check_certificate(c1)?;
    let j2 = check_certificate(c2)?;
    let matches = |j: &Judgment, a: &StepPath, b: &StepPath| {
        (j.lhs == *a && j.rhs == *b) || (j.lhs == *b && j.rhs == *a)
    };
    Ok(matches(&j1, &map_realization(&gf), &map_realization(&id_x))
        && matches(&j2, &map_realization(&fg), &map_realization(&id_y)))
}
