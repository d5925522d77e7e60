//! Certificate text: `(trans (assoc a b g) (paste (refl ab) (reparam g rho1)))`.
//!
//! ```text
//! cert  := (refl P) | (sym C) | (trans C C) | (reparam P R) | (paste C C)
//!        | (unit-left P) | (unit-right P) | (assoc P P P)
//!        | (inv-cancel-left P) | (inv-cancel-right P)
//! P     := name | (compose P P) | (inv P) | (const point)
//! R     := name | rho-id | rho-assoc | rho-left-unit | rho-right-unit
//! ```
//!
//! Path and map names resolve against a bundle; bundle names shadow the
//! built-in reparameterizations.

use std::collections::BTreeMap;
use std::fmt;

use semitop_core::homotopy::{Certificate, Node};
use semitop_core::paths::{compose_paths, inverse_path, PlMap, StepPath};

use crate::formats::{pieces_to_file, space_to_file, Bundle, BundleFile, SpaceRef};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct SexprError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for SexprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Sexp {
    Atom(String, (usize, usize)),
    List(Vec<Sexp>, (usize, usize)),
}

impl Sexp {
    fn pos(&self) -> (usize, usize) {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }
}

fn err<T>(pos: (usize, usize), message: impl Into<String>) -> Result<T, SexprError> {
    Err(SexprError { line: pos.0, column: pos.1, message: message.into() })
}

fn parse_sexp(text: &str) -> Result<Sexp, SexprError> {
    let mut stack: Vec<(Vec<Sexp>, (usize, usize))> = Vec::new();
    let mut done: Option<Sexp> = None;
    let mut atom: Option<(String, (usize, usize))> = None;
    let (mut line, mut col) = (1, 0);
    let mut chars = text.chars().peekable();
    let flush = |atom: &mut Option<(String, (usize, usize))>,
                 stack: &mut Vec<(Vec<Sexp>, (usize, usize))>,
                 done: &mut Option<Sexp>|
     -> Result<(), SexprError> {
        if let Some((a, p)) = atom.take() {
            match stack.last_mut() {
                Some((items, _)) => items.push(Sexp::Atom(a, p)),
                None if done.is_none() => *done = Some(Sexp::Atom(a, p)),
                None => return err(p, "unexpected text after the certificate"),
            }
        }
        Ok(())
    };
    while let Some(ch) = chars.next() {
        col += 1;
        let pos = (line, col);
        match ch {
            ';' => {
                flush(&mut atom, &mut stack, &mut done)?;
                for c in chars.by_ref() {
                    if c == '\n' {
                        line += 1;
                        col = 0;
                        break;
                    }
                }
            }
            '(' => {
                flush(&mut atom, &mut stack, &mut done)?;
                if stack.is_empty() && done.is_some() {
                    return err(pos, "unexpected text after the certificate");
                }
                stack.push((Vec::new(), pos));
            }
            ')' => {
                flush(&mut atom, &mut stack, &mut done)?;
                let Some((items, start)) = stack.pop() else {
                    return err(pos, "unbalanced ')'");
                };
                let list = Sexp::List(items, start);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(list),
                    None => done = Some(list),
                }
            }
            c if c.is_whitespace() => {
                flush(&mut atom, &mut stack, &mut done)?;
                if c == '\n' {
                    line += 1;
                    col = 0;
                }
            }
            c => match &mut atom {
                Some((a, _)) => a.push(c),
                None => atom = Some((c.to_string(), pos)),
            },
        }
    }
    flush(&mut atom, &mut stack, &mut done)?;
    if let Some((_, start)) = stack.last() {
        return err(*start, "unclosed '('");
    }
    done.ok_or(SexprError { line: 1, column: 1, message: "empty certificate".into() })
}

fn head(items: &[Sexp], pos: (usize, usize)) -> Result<&str, SexprError> {
    match items.first() {
        Some(Sexp::Atom(a, _)) => Ok(a),
        Some(other) => err(other.pos(), "expected a rule name"),
        None => err(pos, "empty list"),
    }
}

fn arity(items: &[Sexp], n: usize, rule: &str, pos: (usize, usize)) -> Result<(), SexprError> {
    if items.len() != n + 1 {
        return err(pos, format!("{rule} takes {n} argument(s), got {}", items.len() - 1));
    }
    Ok(())
}

fn path_term(e: &Sexp, bundle: &Bundle) -> Result<StepPath, SexprError> {
    match e {
        Sexp::Atom(name, pos) => match bundle.paths.get(name) {
            Some(p) => Ok(p.clone()),
            None => err(*pos, format!("unknown path {name:?}")),
        },
        Sexp::List(items, pos) => {
            let op = head(items, *pos)?;
            match op {
                "compose" => {
                    arity(items, 2, op, *pos)?;
                    let a = path_term(&items[1], bundle)?;
                    let b = path_term(&items[2], bundle)?;
                    compose_paths(&a, &b).or_else(|e| err(*pos, e.to_string()))
                }
                "inv" => {
                    arity(items, 1, op, *pos)?;
                    Ok(inverse_path(&path_term(&items[1], bundle)?))
                }
                "const" => {
                    arity(items, 1, op, *pos)?;
                    let Sexp::Atom(name, p) = &items[1] else {
                        return err(items[1].pos(), "const takes a point name");
                    };
                    let Some(x) = bundle.space.index_of(name) else {
                        return err(*p, format!("unknown point {name:?}"));
                    };
                    StepPath::constant(bundle.space.clone(), x).or_else(|e| err(*p, e.to_string()))
                }
                other => err(*pos, format!("unknown path operation {other:?}")),
            }
        }
    }
}

fn rho_term(e: &Sexp, bundle: &Bundle) -> Result<PlMap, SexprError> {
    let Sexp::Atom(name, pos) = e else {
        return err(e.pos(), "expected a map name");
    };
    if let Some(rho) = bundle.maps.get(name) {
        return Ok(rho.clone());
    }
    match name.as_str() {
        "rho-id" => Ok(PlMap::identity()),
        "rho-assoc" => Ok(PlMap::associator()),
        "rho-left-unit" => Ok(PlMap::left_unitor()),
        "rho-right-unit" => Ok(PlMap::right_unitor()),
        _ => err(*pos, format!("unknown map {name:?}")),
    }
}

fn node(e: &Sexp, bundle: &Bundle) -> Result<Node, SexprError> {
    let Sexp::List(items, pos) = e else {
        return err(e.pos(), "expected a rule such as (refl p)");
    };
    let pos = *pos;
    let rule = head(items, pos)?;
    let boxed = |k: usize| node(&items[k], bundle).map(Box::new);
    Ok(match rule {
        "refl" => {
            arity(items, 1, rule, pos)?;
            Node::Refl(path_term(&items[1], bundle)?)
        }
        "sym" => {
            arity(items, 1, rule, pos)?;
            Node::Sym(boxed(1)?)
        }
        "trans" => {
            arity(items, 2, rule, pos)?;
            Node::Trans(boxed(1)?, boxed(2)?)
        }
        "paste" => {
            arity(items, 2, rule, pos)?;
            Node::Paste(boxed(1)?, boxed(2)?)
        }
        "reparam" => {
            arity(items, 2, rule, pos)?;
            Node::Reparam(path_term(&items[1], bundle)?, rho_term(&items[2], bundle)?)
        }
        "unit-left" => {
            arity(items, 1, rule, pos)?;
            Node::UnitLeft(path_term(&items[1], bundle)?)
        }
        "unit-right" => {
            arity(items, 1, rule, pos)?;
            Node::UnitRight(path_term(&items[1], bundle)?)
        }
        "assoc" => {
            arity(items, 3, rule, pos)?;
            Node::Assoc(
                path_term(&items[1], bundle)?,
                path_term(&items[2], bundle)?,
                path_term(&items[3], bundle)?,
            )
        }
        "inv-cancel-left" => {
            arity(items, 1, rule, pos)?;
            Node::InvCancelLeft(path_term(&items[1], bundle)?)
        }
        "inv-cancel-right" => {
            arity(items, 1, rule, pos)?;
            Node::InvCancelRight(path_term(&items[1], bundle)?)
        }
        other => return err(pos, format!("unknown rule {other:?}")),
    })
}

/// Parses certificate text against a bundle, taking mode and relativity
/// from the bundle.
pub fn parse_certificate(text: &str, bundle: &Bundle) -> Result<Certificate, SexprError> {
    let root = node(&parse_sexp(text)?, bundle)?;
    Ok(Certificate { mode: bundle.mode, rel: bundle.rel, root })
}

struct Namer {
    paths: BTreeMap<StepPath, String>,
    order: Vec<StepPath>,
    maps: Vec<PlMap>,
}

impl Namer {
    fn path(&mut self, p: &StepPath) -> String {
        if let Some(n) = self.paths.get(p) {
            return n.clone();
        }
        let n = format!("p{}", self.order.len());
        self.paths.insert(p.clone(), n.clone());
        self.order.push(p.clone());
        n
    }

    fn map(&mut self, rho: &PlMap) -> String {
        for (name, builtin) in [
            ("rho-id", PlMap::identity()),
            ("rho-assoc", PlMap::associator()),
            ("rho-left-unit", PlMap::left_unitor()),
            ("rho-right-unit", PlMap::right_unitor()),
        ] {
            if *rho == builtin {
                return name.into();
            }
        }
        let k = match self.maps.iter().position(|m| m == rho) {
            Some(k) => k,
            None => {
                self.maps.push(rho.clone());
                self.maps.len() - 1
            }
        };
        format!("r{k}")
    }

    fn node(&mut self, n: &Node, out: &mut String) {
        out.push('(');
        out.push_str(n.rule());
        match n {
            Node::Refl(p)
            | Node::UnitLeft(p)
            | Node::UnitRight(p)
            | Node::InvCancelLeft(p)
            | Node::InvCancelRight(p) => {
                out.push(' ');
                out.push_str(&self.path(p));
            }
            Node::Sym(c) => {
                out.push(' ');
                self.node(c, out);
            }
            Node::Trans(a, b) | Node::Paste(a, b) => {
                out.push(' ');
                self.node(a, out);
                out.push(' ');
                self.node(b, out);
            }
            Node::Reparam(p, rho) => {
                out.push(' ');
                out.push_str(&self.path(p));
                out.push(' ');
                out.push_str(&self.map(rho));
            }
            Node::Assoc(a, b, c) => {
                for p in [a, b, c] {
                    out.push(' ');
                    out.push_str(&self.path(p));
                }
            }
        }
        out.push(')');
    }
}

/// Writes a certificate as a self-contained bundle: every path gets a name
/// `p0, p1, ...` in order of first appearance, every non-built-in map `r0, ...`.
pub fn export_certificate(cert: &Certificate) -> BundleFile {
    let mut namer = Namer { paths: BTreeMap::new(), order: Vec::new(), maps: Vec::new() };
    let mut text = String::new();
    namer.node(&cert.root, &mut text);
    let space = namer.order.first().map(|p| p.space().clone());
    BundleFile {
        space: SpaceRef::Inline(space_to_file(space.as_deref().expect("certificates mention a path"))),
        mode: cert.mode.index(),
        rel: cert.rel,
        paths: namer.order.iter().map(|p| (namer.paths[p].clone(), pieces_to_file(p))).collect(),
        maps: namer
            .maps
            .iter()
            .enumerate()
            .map(|(k, m)| (format!("r{k}"), m.nodes().iter().map(|(t, v)| [t.to_string(), v.to_string()]).collect()))
            .collect(),
        certificate: Some(text),
    }
}
