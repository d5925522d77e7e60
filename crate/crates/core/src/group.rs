//! Loop words over registered generators, certified free reduction and the
//! maps between loop tables.
//!
//! A word realizes as the left-associated composite of its letters' loops.
//! Reduction is free reduction only; each product carries a certificate that
//! the unreduced composite is so-i-homotopic to the reduced realization.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{CertError, GroupError, ParseError, PathError};
use crate::homotopy::{check_certificate, Certificate, Judgment, Node};
use crate::maps::{classify, Class, SpaceMap};
use crate::paths::{canonical_signature, compose_paths, find_reparam, inverse_path, Mode, StepPath};
use crate::space::FiniteSpace;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub name: String,
    pub inverted: bool,
}

impl Letter {
    pub fn new(name: &str, inverted: bool) -> Letter {
        Letter { name: name.into(), inverted }
    }

    pub fn inverse(&self) -> Letter {
        Letter { name: self.name.clone(), inverted: !self.inverted }
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.name == other.name && self.inverted != other.inverted
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if self.inverted {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

/// A word in the generators; the empty word is written `1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letter(name: &str) -> Word {
        Word(alloc::vec![Letter::new(name, false)])
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Word(v)
    }

    /// Free reduction.
    pub fn reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for l in &self.0 {
            if out.last().is_some_and(|top| top.cancels(l)) {
                out.pop();
            } else {
                out.push(l.clone());
            }
        }
        Word(out)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| !w[0].cancels(&w[1]))
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(Letter::inverse).collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = ParseError;

    /// Space-separated letters, `g^-1` (or `g'`) for an inverse; `1`, `e`
    /// or the empty string for the identity.
    fn from_str(s: &str) -> Result<Word, ParseError> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "1" || tok == "e" || tok == "ε" {
                continue;
            }
            let (name, inverted) = if let Some(n) = tok.strip_suffix("^-1") {
                (n, true)
            } else if let Some(n) = tok.strip_suffix('\'') {
                (n, true)
            } else {
                (tok, false)
            };
            let valid = !name.is_empty()
                && name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '-' || c == '.');
            if !valid {
                return Err(ParseError::WordToken(tok.into()));
            }
            letters.push(Letter::new(name, inverted));
        }
        Ok(Word(letters))
    }
}

/// One factor of a path term: a named path, possibly reversed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub letter: Letter,
    pub path: StepPath,
}

/// Compositions of atoms and constant paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Atom(Atom),
    Unit(usize),
    Compose(alloc::boxed::Box<Term>, alloc::boxed::Box<Term>),
}

impl Term {
    pub fn compose(a: Term, b: Term) -> Term {
        Term::Compose(alloc::boxed::Box::new(a), alloc::boxed::Box::new(b))
    }

    pub fn path(&self, space: &Arc<FiniteSpace>) -> Result<StepPath, PathError> {
        match self {
            Term::Atom(a) => Ok(a.path.clone()),
            Term::Unit(x) => StepPath::constant(space.clone(), *x),
            Term::Compose(a, b) => compose_paths(&a.path(space)?, &b.path(space)?),
        }
    }

    fn start(&self) -> usize {
        match self {
            Term::Atom(a) => a.path.start(),
            Term::Unit(x) => *x,
            Term::Compose(a, _) => a.start(),
        }
    }
}

/// Left-associated composite of the atoms, or the constant path at `start`.
fn realize_atoms(space: &Arc<FiniteSpace>, start: usize, atoms: &[Atom]) -> Result<StepPath, PathError> {
    let Some(first) = atoms.first() else {
        return StepPath::constant(space.clone(), start);
    };
    let mut acc = first.path.clone();
    for a in &atoms[1..] {
        acc = compose_paths(&acc, &a.path)?;
    }
    Ok(acc)
}

/// Proves `P ∗ R(atoms) ≃ R(P, atoms)`, the right factor re-associated to
/// the left onto `P`.
fn reassociate(p: &StepPath, atoms: &[Atom], space: &Arc<FiniteSpace>) -> Result<(Node, StepPath), PathError> {
    let (last, init) = atoms.split_last().expect("nonempty");
    if init.is_empty() {
        let joined = compose_paths(p, &last.path)?;
        return Ok((Node::Refl(joined.clone()), joined));
    }
    let r_init = realize_atoms(space, p.end(), init)?;
    // P ∗ (R(init) ∗ L) ≃ (P ∗ R(init)) ∗ L
    let assoc = Node::Assoc(p.clone(), r_init, last.path.clone());
    let (inner, lifted) = reassociate(p, init, space)?;
    let pasted = Node::paste(inner, Node::Refl(last.path.clone()))?;
    let out = compose_paths(&lifted, &last.path)?;
    Ok((Node::trans(assoc, pasted), out))
}

/// Proves `R(atoms) ≃ R(free reduction of atoms)`.
fn reduce_atoms(space: &Arc<FiniteSpace>, start: usize, atoms: &[Atom]) -> Result<(Vec<Atom>, Node), PathError> {
    let mut stack: Vec<Atom> = Vec::new();
    let mut proof: Option<(Node, StepPath)> = None;
    for l in atoms {
        let Some((cert, prefix)) = proof.take() else {
            stack.push(l.clone());
            proof = Some((Node::Refl(l.path.clone()), l.path.clone()));
            continue;
        };
        let next_prefix = compose_paths(&prefix, &l.path)?;
        let base = Node::paste(cert, Node::Refl(l.path.clone()))?;
        let step = match stack.last() {
            None => {
                stack.push(l.clone());
                Node::UnitLeft(l.path.clone())
            }
            Some(top) if top.letter.cancels(&l.letter) => {
                let m = stack.pop().expect("top exists");
                if stack.is_empty() {
                    Node::InvCancelLeft(m.path)
                } else {
                    // (R ∗ M) ∗ M̄ ≃ R ∗ (M ∗ M̄) ≃ R ∗ 1 ≃ R
                    let rest = realize_atoms(space, start, &stack)?;
                    Node::trans(
                        Node::sym(Node::Assoc(rest.clone(), m.path.clone(), l.path.clone())),
                        Node::trans(
                            Node::paste(Node::Refl(rest.clone()), Node::InvCancelLeft(m.path))?,
                            Node::UnitRight(rest),
                        ),
                    )
                }
            }
            Some(_) => {
                stack.push(l.clone());
                Node::Refl(next_prefix.clone())
            }
        };
        proof = Some((Node::trans(base, step), next_prefix));
    }
    let cert = match proof {
        Some((c, _)) => c,
        None => Node::Refl(StepPath::constant(space.clone(), start)?),
    };
    Ok((stack, cert))
}

/// Normalizes a term to a freely reduced list of atoms with a certificate
/// proving `term ≃ R(atoms)`.
pub fn normalize(space: &Arc<FiniteSpace>, term: &Term) -> Result<(Vec<Atom>, Node), PathError> {
    match term {
        Term::Atom(a) => Ok((alloc::vec![a.clone()], Node::Refl(a.path.clone()))),
        Term::Unit(x) => Ok((Vec::new(), Node::Refl(StepPath::constant(space.clone(), *x)?))),
        Term::Compose(a, b) => {
            let start = a.start();
            let (s1, c1) = normalize(space, a)?;
            let (s2, c2) = normalize(space, b)?;
            let pasted = Node::paste(c1, c2)?;
            let join = if s1.is_empty() {
                Node::UnitLeft(realize_atoms(space, start, &s2)?)
            } else if s2.is_empty() {
                Node::UnitRight(realize_atoms(space, start, &s1)?)
            } else {
                let r1 = realize_atoms(space, start, &s1)?;
                let (assoc, _) = reassociate(&r1, &s2, space)?;
                let mut all = s1.clone();
                all.extend(s2.iter().cloned());
                let (reduced, red) = reduce_atoms(space, start, &all)?;
                let c = Node::trans(Node::trans(pasted, assoc), red);
                return Ok((reduced, c));
            };
            let mut out = s1;
            out.extend(s2);
            Ok((out, Node::trans(pasted, join)))
        }
    }
}

/// Whether an emitted certificate checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Verified(Judgment),
    /// The certificate was built but failed a hypothesis; in mode 3 this is
    /// the expected outcome for reparameterization-based rules.
    Warning(CertError),
}

impl Verdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Product {
    pub word: Word,
    pub certificate: Certificate,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Yes(Certificate),
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopTable {
    space: Arc<FiniteSpace>,
    basepoint: usize,
    mode: Mode,
    generators: Vec<(String, StepPath)>,
}

impl LoopTable {
    pub fn new(space: Arc<FiniteSpace>, basepoint: usize, mode: Mode) -> Result<LoopTable, GroupError> {
        space.check_point(basepoint).map_err(PathError::from)?;
        Ok(LoopTable { space, basepoint, mode, generators: Vec::new() })
    }

    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn generators(&self) -> &[(String, StepPath)] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Option<&StepPath> {
        self.generators.iter().find(|(n, _)| n == name).map(|(_, p)| p)
    }

    pub fn register_loop(&mut self, name: &str, alpha: StepPath) -> Result<(), GroupError> {
        if self.generator(name).is_some() {
            return Err(GroupError::DuplicateName(name.into()));
        }
        if alpha.space() != &self.space && **alpha.space() != *self.space {
            return Err(GroupError::Path(PathError::SpaceMismatch));
        }
        if alpha.start() != self.basepoint || alpha.end() != self.basepoint {
            return Err(GroupError::NotALoop { basepoint: self.space.name(self.basepoint).into() });
        }
        if let Some(v) = alpha.so_violation(self.mode) {
            return Err(GroupError::NotSoI {
                mode: self.mode.index(),
                set: self.space.format_subset(v.set),
                preimage: v.preimage.to_string(),
            });
        }
        self.generators.push((name.into(), alpha));
        Ok(())
    }

    pub fn check_word(&self, w: &Word) -> Result<(), GroupError> {
        for l in &w.0 {
            if self.generator(&l.name).is_none() {
                return Err(GroupError::UnknownGenerator(l.name.clone()));
            }
        }
        Ok(())
    }

    pub fn parse_word(&self, s: &str) -> Result<Word, GroupError> {
        let w: Word = s.parse().map_err(|e: ParseError| GroupError::UnknownGenerator(e.to_string()))?;
        self.check_word(&w)?;
        Ok(w)
    }

    fn atom(&self, l: &Letter) -> Result<Atom, GroupError> {
        let p = self.generator(&l.name).ok_or_else(|| GroupError::UnknownGenerator(l.name.clone()))?;
        let path = if l.inverted { inverse_path(p) } else { p.clone() };
        Ok(Atom { letter: l.clone(), path })
    }

    fn atoms(&self, w: &Word) -> Result<Vec<Atom>, GroupError> {
        w.0.iter().map(|l| self.atom(l)).collect()
    }

    /// The left-associated term of a word; `1` for the empty word.
    pub fn term(&self, w: &Word) -> Result<Term, GroupError> {
        let mut atoms = self.atoms(w)?.into_iter();
        let Some(first) = atoms.next() else {
            return Ok(Term::Unit(self.basepoint));
        };
        Ok(atoms.fold(Term::Atom(first), |acc, a| Term::compose(acc, Term::Atom(a))))
    }

    pub fn realize(&self, w: &Word) -> Result<StepPath, GroupError> {
        let atoms = self.atoms(w)?;
        Ok(realize_atoms(&self.space, self.basepoint, &atoms)?)
    }

    fn certificate(&self, root: Node) -> Certificate {
        Certificate { mode: self.mode, rel: true, root }
    }

    fn verdict(&self, cert: &Certificate) -> Verdict {
        match check_certificate(cert) {
            Ok(j) => Verdict::Verified(j),
            Err(e) => Verdict::Warning(e),
        }
    }

    /// Concatenates and freely reduces, with a certificate for
    /// `R(w1) ∗ R(w2) ≃ R(reduced)`. In modes 1 and 2 a certificate that
    /// fails to check is an error; in mode 3 it is returned as a warning.
    pub fn multiply(&self, w1: &Word, w2: &Word) -> Result<Product, GroupError> {
        let term = Term::compose(self.term(w1)?, self.term(w2)?);
        let (atoms, root) = normalize(&self.space, &term)?;
        let word = Word(atoms.into_iter().map(|a| a.letter).collect());
        debug_assert_eq!(word, w1.concat(w2).reduced());
        let certificate = self.certificate(root);
        let verdict = self.verdict(&certificate);
        if let Verdict::Warning(e) = &verdict {
            if self.mode != Mode::Three {
                return Err(GroupError::Cert(e.clone()));
            }
        }
        Ok(Product { word, certificate, verdict })
    }

    /// Proves `R(w) ≃ R(reduced w)`.
    pub fn reduce(&self, w: &Word) -> Result<Product, GroupError> {
        let atoms = self.atoms(w)?;
        let (reduced, root) = reduce_atoms(&self.space, self.basepoint, &atoms)?;
        let word = Word(reduced.into_iter().map(|a| a.letter).collect());
        let certificate = self.certificate(root);
        let verdict = self.verdict(&certificate);
        Ok(Product { word, certificate, verdict })
    }

    pub fn invert(&self, w: &Word) -> Result<Word, GroupError> {
        self.check_word(w)?;
        Ok(w.inverse())
    }

    /// Searches for a certificate of `R(w1) ≃ R(w2)`: both sides are freely
    /// reduced, then up to `depth` letters of the left side are swapped for
    /// generators with the same signature via reparameterization. `Unknown`
    /// is not a refutation.
    pub fn equivalent(&self, w1: &Word, w2: &Word, depth: usize) -> Result<Equivalence, GroupError> {
        let p1 = self.reduce(w1)?;
        let p2 = self.reduce(w2)?;
        if !p1.verdict.is_verified() || !p2.verdict.is_verified() {
            return Ok(Equivalence::Unknown);
        }
        let target = p2.word.clone();
        let back = Node::sym(p2.certificate.root.clone());
        let finish = |cert: Node| {
            let c = self.certificate(Node::trans(cert, back.clone()));
            check_certificate(&c).ok().map(|_| c)
        };
        if p1.word == target {
            return Ok(finish(p1.certificate.root).map_or(Equivalence::Unknown, Equivalence::Yes));
        }
        // Letter swaps available through an admissible reparameterization.
        let mut swaps: BTreeMap<Letter, Vec<(Letter, Node)>> = BTreeMap::new();
        for (g, pg) in &self.generators {
            for (h, ph) in &self.generators {
                if g == h || canonical_signature(pg) != canonical_signature(ph) {
                    continue;
                }
                for inverted in [false, true] {
                    let (from, to) = if inverted {
                        (inverse_path(pg), inverse_path(ph))
                    } else {
                        (pg.clone(), ph.clone())
                    };
                    if let Some(rho) = find_reparam(&from, &to) {
                        let node = Node::Reparam(to, rho);
                        if check_certificate(&self.certificate(node.clone())).is_ok() {
                            swaps
                                .entry(Letter::new(g, inverted))
                                .or_default()
                                .push((Letter::new(h, inverted), node));
                        }
                    }
                }
            }
        }
        let mut seen: BTreeSet<Word> = BTreeSet::new();
        seen.insert(p1.word.clone());
        let mut frontier: VecDeque<(Word, Node, usize)> = VecDeque::new();
        frontier.push_back((p1.word, p1.certificate.root, 0));
        while let Some((w, cert, d)) = frontier.pop_front() {
            if d == depth {
                continue;
            }
            for (pos, l) in w.0.iter().enumerate() {
                let Some(options) = swaps.get(l) else { continue };
                for (replacement, node) in options {
                    let mut next = w.clone();
                    next.0[pos] = replacement.clone();
                    let lifted = self.lift(&w, pos, node.clone())?;
                    let step = Node::trans(cert.clone(), lifted);
                    let reduced = self.reduce(&next)?;
                    let cert_next = Node::trans(step, reduced.certificate.root);
                    if reduced.word == target {
                        if let Some(c) = finish(cert_next) {
                            return Ok(Equivalence::Yes(c));
                        }
                        continue;
                    }
                    if seen.insert(reduced.word.clone()) {
                        frontier.push_back((reduced.word, cert_next, d + 1));
                    }
                }
            }
        }
        Ok(Equivalence::Unknown)
    }

    /// Lifts `L ≃ L'` at position `pos` to `R(w) ≃ R(w')` by pasting.
    fn lift(&self, w: &Word, pos: usize, node: Node) -> Result<Node, GroupError> {
        let atoms = self.atoms(w)?;
        let mut acc = if pos == 0 {
            node
        } else {
            let prefix = realize_atoms(&self.space, self.basepoint, &atoms[..pos])?;
            Node::paste(Node::Refl(prefix), node)?
        };
        for a in &atoms[pos + 1..] {
            acc = Node::paste(acc, Node::Refl(a.path.clone()))?;
        }
        Ok(acc)
    }

    /// Moves the table along `γ` from the basepoint `x` to `y = γ(1)`: each
    /// generator `α` becomes `(γ̄ ∗ α) ∗ γ` under the same name, so words map
    /// letterwise.
    pub fn basepoint_change(&self, gamma: &StepPath) -> Result<LoopTable, GroupError> {
        if gamma.start() != self.basepoint {
            return Err(GroupError::BasepointMismatch {
                expected: self.space.name(self.basepoint).into(),
                got: self.space.name(gamma.start()).into(),
            });
        }
        if let Some(v) = gamma.so_violation(self.mode) {
            return Err(GroupError::NotSoI {
                mode: self.mode.index(),
                set: self.space.format_subset(v.set),
                preimage: v.preimage.to_string(),
            });
        }
        let back = inverse_path(gamma);
        let mut out = LoopTable::new(self.space.clone(), gamma.end(), self.mode)?;
        for (name, alpha) in &self.generators {
            let conj = compose_paths(&compose_paths(&back, alpha)?, gamma)?;
            out.register_loop(name, conj)?;
        }
        Ok(out)
    }

    /// Certificate that moving generator `name` along `γ` and back along `γ̄`
    /// returns a loop homotopic to the original:
    /// `(γ ∗ ((γ̄ ∗ α) ∗ γ)) ∗ γ̄ ≃ α`.
    pub fn round_trip_certificate(&self, gamma: &StepPath, name: &str) -> Result<Product, GroupError> {
        let alpha = self.generator(name).ok_or_else(|| GroupError::UnknownGenerator(name.into()))?;
        let g = Atom { letter: Letter::new("\u{3b3}", false), path: gamma.clone() };
        let gi = Atom { letter: Letter::new("\u{3b3}", true), path: inverse_path(gamma) };
        let a = Atom { letter: Letter::new(name, false), path: alpha.clone() };
        let conj = Term::compose(Term::compose(Term::Atom(gi.clone()), Term::Atom(a)), Term::Atom(g.clone()));
        let term = Term::compose(Term::compose(Term::Atom(g), conj), Term::Atom(gi));
        let (atoms, root) = normalize(&self.space, &term)?;
        let word = Word(atoms.into_iter().map(|a| a.letter).collect());
        let certificate = self.certificate(root);
        let verdict = self.verdict(&certificate);
        Ok(Product { word, certificate, verdict })
    }

    /// Pushes the table forward along an irresolute map `f`: each generator
    /// `α` becomes `f ∘ α` under the same name. Requires mode 2.
    pub fn induced_hom(&self, f: &SpaceMap) -> Result<LoopTable, GroupError> {
        if self.mode != Mode::Two {
            return Err(GroupError::NeedsIrresolute(self.mode.index()));
        }
        if **f.domain() != *self.space {
            return Err(GroupError::MapDomainMismatch);
        }
        let report = classify(f);
        if let Some(v) = report.witness(Class::So2) {
            return Err(GroupError::MapNotIrresolute(format!(
                "preimage of {} is {}",
                f.codomain().format_subset(v.set),
                f.domain().format_subset(v.preimage)
            )));
        }
        let mut out = LoopTable::new(f.codomain().clone(), f.apply(self.basepoint), Mode::Two)?;
        for (name, alpha) in &self.generators {
            out.register_loop(name, alpha.map_values(f.codomain().clone(), f.images())?)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Subset;
    use alloc::vec;

    fn s2_table(mode: Mode) -> LoopTable {
        let s = Arc::new(FiniteSpace::sierpinski());
        let mut t = LoopTable::new(s.clone(), 0, mode).unwrap();
        let g = StepPath::from_specs(s.clone(), &[("[0,1/2)", "a"), ("[1/2,3/4)", "b"), ("[3/4,1]", "a")]).unwrap();
        let h = StepPath::from_specs(s.clone(), &[("[0,1/3)", "a"), ("[1/3,2/3)", "b"), ("[2/3,1]", "a")]).unwrap();
        t.register_loop("g", g).unwrap();
        t.register_loop("h", h).unwrap();
        t
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn word_syntax() {
        assert_eq!(w("g h^-1").to_string(), "g h^-1");
        assert_eq!(w("1").to_string(), "1");
        assert_eq!(w("g'"), w("g^-1"));
        assert!("g$".parse::<Word>().is_err());
        assert_eq!(w("g h").inverse(), w("h^-1 g^-1"));
        assert_eq!(w("g h h^-1 g^-1 h").reduced(), w("h"));
    }

    #[test]
    fn register_errors() {
        let mut t = s2_table(Mode::Two);
        let s = t.space().clone();
        let open_end = StepPath::from_specs(s.clone(), &[("[0,1/2)", "a"), ("[1/2,1]", "b")]).unwrap();
        assert!(matches!(t.register_loop("k", open_end), Err(GroupError::NotALoop { .. })));
        let spike = StepPath::from_specs(
            s.clone(),
            &[("[0,1/4)", "a"), ("[1/4,1/2)", "b"), ("{1/2}", "a"), ("(1/2,3/4)", "b"), ("[3/4,1]", "a")],
        )
        .unwrap();
        assert!(matches!(t.register_loop("k", spike), Err(GroupError::NotSoI { .. })));
        let c = StepPath::constant(s, 0).unwrap();
        assert_eq!(t.register_loop("g", c), Err(GroupError::DuplicateName("g".into())));
    }

    #[test]
    fn cancellation_is_inv_cancel_rooted() {
        let t = s2_table(Mode::Two);
        let p = t.multiply(&w("g"), &w("g^-1")).unwrap();
        assert!(p.word.is_empty());
        assert_eq!(p.certificate.root.rule(), "inv-cancel-left");
        assert!(p.verdict.is_verified());
    }

    #[test]
    fn left_unit() {
        let t = s2_table(Mode::Two);
        let p = t.multiply(&Word::empty(), &w("g")).unwrap();
        assert_eq!(p.word, w("g"));
        assert_eq!(p.certificate.root.rule(), "unit-left");
    }

    #[test]
    fn cancel_inside_product() {
        let t = s2_table(Mode::One);
        let p = t.multiply(&w("g h"), &w("h^-1")).unwrap();
        assert_eq!(p.word, w("g"));
        let shape = p.certificate.root.shape();
        for rule in ["assoc", "inv-cancel-left", "unit-right"] {
            assert!(shape.contains(rule), "{shape}");
        }
        let Verdict::Verified(j) = p.verdict else { panic!() };
        assert_eq!(j.lhs, compose_paths(&t.realize(&w("g h")).unwrap(), &t.realize(&w("h^-1")).unwrap()).unwrap());
        assert_eq!(j.rhs, t.realize(&w("g")).unwrap());
    }

    #[test]
    fn mode_three_warns() {
        let s = Arc::new(FiniteSpace::sierpinski());
        let mut t = LoopTable::new(s.clone(), 0, Mode::Three).unwrap();
        for (name, mid) in [("g", "[1/2,3/4]"), ("h", "[1/3,2/3]")] {
            let lo = &mid[1..mid.find(',').unwrap()];
            let hi = &mid[mid.find(',').unwrap() + 1..mid.len() - 1];
            let specs = [(format!("[0,{lo})"), "a"), (mid.to_string(), "b"), (format!("({hi},1]"), "a")];
            let specs: Vec<(&str, &str)> = specs.iter().map(|(i, v)| (i.as_str(), *v)).collect();
            t.register_loop(name, StepPath::from_specs(s.clone(), &specs).unwrap()).unwrap();
        }
        assert!(t.multiply(&w("g"), &w("g^-1")).unwrap().verdict.is_verified());
        let p = t.multiply(&w("g h"), &w("h^-1")).unwrap();
        assert_eq!(p.word, w("g"));
        let Verdict::Warning(e) = p.verdict else { panic!("expected a warning") };
        assert_eq!(e.hypothesis, crate::homotopy::Hypothesis::ReparamSoI);
    }

    #[test]
    fn realize_shapes() {
        let t = s2_table(Mode::Two);
        assert!(t.realize(&Word::empty()).unwrap().is_constant());
        assert_eq!(&t.realize(&w("g")).unwrap(), t.generator("g").unwrap());
        let gg = t.realize(&w("g g")).unwrap();
        assert_eq!(gg.to_string(), "[0,1/4)->a, [1/4,3/8)->b, [3/8,3/4)->a, [3/4,7/8)->b, [7/8,1]->a");
    }

    #[test]
    fn equivalence_search() {
        let t = s2_table(Mode::Two);
        assert!(matches!(t.equivalent(&w("g h"), &w("g h"), 0).unwrap(), Equivalence::Yes(_)));
        assert!(matches!(t.equivalent(&w("g g^-1"), &Word::empty(), 0).unwrap(), Equivalence::Yes(_)));
        // g and h share a signature, so one reparameterization relates them.
        assert_eq!(t.equivalent(&w("g"), &w("h"), 0).unwrap(), Equivalence::Unknown);
        let Equivalence::Yes(c) = t.equivalent(&w("g h"), &w("h h"), 1).unwrap() else { panic!() };
        let j = check_certificate(&c).unwrap();
        assert_eq!(j.rhs, t.realize(&w("h h")).unwrap());
    }

    #[test]
    fn unrelated_generators_stay_unknown() {
        let s = Arc::new(FiniteSpace::sierpinski());
        let mut t = LoopTable::new(s.clone(), 0, Mode::Two).unwrap();
        t.register_loop("g", StepPath::from_specs(s.clone(), &[("[0,1/2)", "a"), ("[1/2,3/4)", "b"), ("[3/4,1]", "a")]).unwrap())
            .unwrap();
        t.register_loop(
            "h",
            StepPath::from_specs(s.clone(), &[("[0,1/4)", "a"), ("[1/4,1/2)", "b"), ("[1/2,3/4)", "a"), ("[3/4,7/8)", "b"), ("[7/8,1]", "a")]).unwrap(),
        )
        .unwrap();
        assert_eq!(t.equivalent(&w("g"), &w("h"), 3).unwrap(), Equivalence::Unknown);
    }

    #[test]
    fn rebase_round_trip() {
        let t = s2_table(Mode::Two);
        let s = t.space().clone();
        let gamma = StepPath::from_specs(s, &[("[0,1/2)", "a"), ("[1/2,1]", "b")]).unwrap();
        let moved = t.basepoint_change(&gamma).unwrap();
        assert_eq!(moved.basepoint(), 1);
        let back = moved.basepoint_change(&inverse_path(&gamma)).unwrap();
        assert_eq!(back.basepoint(), 0);
        let p = t.round_trip_certificate(&gamma, "g").unwrap();
        assert_eq!(p.word, w("g"));
        assert!(p.verdict.is_verified(), "{:?}", p.verdict);
    }

    #[test]
    fn pushforward() {
        let t = s2_table(Mode::Two);
        let id = SpaceMap::identity(t.space().clone());
        assert_eq!(t.induced_hom(&id).unwrap(), t);
        let swap = SpaceMap::new(t.space().clone(), t.space().clone(), vec![1, 0]).unwrap();
        assert!(matches!(t.induced_hom(&swap), Err(GroupError::MapNotIrresolute(_))));
        let e1 = Arc::new(FiniteSpace::with_letters(4, vec![Subset(0), Subset(1), Subset(3), Subset(15)]).unwrap());
        let into = SpaceMap::new(t.space().clone(), e1, vec![0, 1]).unwrap();
        let pushed = t.induced_hom(&into).unwrap();
        assert_eq!(pushed.generators().len(), 2);
        assert!(matches!(s2_table(Mode::One).induced_hom(&id), Err(GroupError::NeedsIrresolute(1))));
    }
}
