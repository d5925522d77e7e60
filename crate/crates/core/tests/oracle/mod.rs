//! Naive reference implementations, written straight from the definitions
//! and sharing no code with the library beyond its data types.

#![allow(dead_code)]

use semitop_core::interval::{rat, Rat, RatSet};
use semitop_core::StepPath;

/// Subsets are bitmasks over `n` points; a topology is a list of open masks.
pub fn full(n: usize) -> u32 {
    (1u32 << n) - 1
}

pub fn is_subset(a: u32, b: u32) -> bool {
    a & !b == 0
}

pub fn is_topology(n: usize, family: &[u32]) -> bool {
    let has = |s: u32| family.contains(&s);
    has(0)
        && has(full(n))
        && family.iter().all(|&a| family.iter().all(|&b| has(a | b) && has(a & b)))
}

/// Every topology on `n` points, found by testing every family of subsets
/// that contains the empty set and the whole set.
pub fn topologies_brute(n: usize) -> Vec<Vec<u32>> {
    let middle: Vec<u32> = (1..full(n)).collect();
    let mut out = Vec::new();
    for choice in 0u64..(1u64 << middle.len()) {
        let mut family = vec![0, full(n)];
        for (k, &s) in middle.iter().enumerate() {
            if choice >> k & 1 == 1 {
                family.push(s);
            }
        }
        if is_topology(n, &family) {
            family.sort_unstable();
            family.dedup();
            out.push(family);
        }
    }
    out
}

pub fn closed_sets(n: usize, opens: &[u32]) -> Vec<u32> {
    opens.iter().map(|&u| full(n) & !u).collect()
}

pub fn closure(n: usize, opens: &[u32], a: u32) -> u32 {
    closed_sets(n, opens).into_iter().filter(|&k| is_subset(a, k)).fold(full(n), |acc, k| acc & k)
}

pub fn interior(opens: &[u32], a: u32) -> u32 {
    opens.iter().filter(|&&u| is_subset(u, a)).fold(0, |acc, &u| acc | u)
}

/// Some open `U` with `U ⊆ A ⊆ cl(U)`.
pub fn semi_open(n: usize, opens: &[u32], a: u32) -> bool {
    opens.iter().any(|&u| is_subset(u, a) && is_subset(a, closure(n, opens, u)))
}

/// Some closed `K` with `int(K) ⊆ C ⊆ K`.
pub fn semi_closed(n: usize, opens: &[u32], c: u32) -> bool {
    closed_sets(n, opens).into_iter().any(|k| is_subset(interior(opens, k), c) && is_subset(c, k))
}

pub fn semi_open_sets(n: usize, opens: &[u32]) -> Vec<u32> {
    (0..=full(n)).filter(|&a| semi_open(n, opens, a)).collect()
}

pub fn preimage(images: &[usize], s: u32) -> u32 {
    images.iter().enumerate().filter(|(_, &y)| s >> y & 1 == 1).fold(0, |acc, (x, _)| acc | 1 << x)
}

/// `[continuous, so1, so2, so3]` from the preimage rules.
pub fn classify(n: usize, dom: &[u32], m: usize, cod: &[u32], images: &[usize]) -> [bool; 4] {
    let so_cod = semi_open_sets(m, cod);
    let all = |family: &[u32], test: &dyn Fn(u32) -> bool| family.iter().all(|&s| test(preimage(images, s)));
    let open = |a: u32| dom.contains(&a);
    let sopen = |a: u32| semi_open(n, dom, a);
    [all(cod, &open), all(cod, &sopen), all(&so_cod, &sopen), all(&so_cod, &open)]
}

/// Pointwise verdicts `[so1, so2, so3]` at `p`: for each admissible
/// neighbourhood `V` of `f(p)`, some neighbourhood of `p` of the required
/// kind maps into `V`.
pub fn classify_at(n: usize, dom: &[u32], m: usize, cod: &[u32], images: &[usize], p: usize) -> [bool; 3] {
    let image = |a: u32| (0..n).filter(|&x| a >> x & 1 == 1).fold(0u32, |acc, x| acc | 1 << images[x]);
    let so_dom = semi_open_sets(n, dom);
    let so_cod = semi_open_sets(m, cod);
    let fp = images[p];
    let at = |targets: &[u32], sources: &[u32]| {
        targets
            .iter()
            .filter(|&&v| v >> fp & 1 == 1)
            .all(|&v| sources.iter().any(|&a| a >> p & 1 == 1 && is_subset(image(a), v)))
    };
    [at(cod, &so_dom), at(&so_cod, &so_dom), at(&so_cod, dom)]
}

pub fn all_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v| (0..m).map(move |y| [v.clone(), vec![y]].concat())).collect();
    }
    out
}

/// Atoms of `[0,1]` cut at `cuts` (sorted, containing 0 and 1): points at
/// even indices, the open cells between them at odd indices.
pub struct Atoms {
    pub cuts: Vec<Rat>,
}

impl Atoms {
    pub fn new(mut cuts: Vec<Rat>) -> Atoms {
        cuts.push(rat(0, 1));
        cuts.push(rat(1, 1));
        cuts.sort();
        cuts.dedup();
        Atoms { cuts }
    }

    pub fn len(&self) -> usize {
        2 * self.cuts.len() - 1
    }

    /// A point inside the atom.
    pub fn sample(&self, k: usize) -> Rat {
        if k.is_multiple_of(2) {
            self.cuts[k / 2].clone()
        } else {
            (&self.cuts[k / 2] + &self.cuts[k / 2 + 1]) / rat(2, 1)
        }
    }

    fn neighbours(&self, k: usize) -> impl Iterator<Item = usize> {
        let last = self.len() - 1;
        [k.checked_sub(1), (k < last).then_some(k + 1)].into_iter().flatten()
    }

    /// Open in the subspace topology of `[0,1]`: each member point has its
    /// adjacent cells.
    pub fn is_open(&self, s: &[bool]) -> bool {
        (0..self.len()).step_by(2).all(|k| !s[k] || self.neighbours(k).all(|j| s[j]))
    }

    pub fn interior(&self, s: &[bool]) -> Vec<bool> {
        (0..self.len()).map(|k| s[k] && (k % 2 == 1 || self.neighbours(k).all(|j| s[j]))).collect()
    }

    pub fn closure(&self, s: &[bool]) -> Vec<bool> {
        (0..self.len()).map(|k| s[k] || (k % 2 == 0 && self.neighbours(k).any(|j| s[j]))).collect()
    }

    pub fn semi_open(&self, s: &[bool]) -> bool {
        let c = self.closure(&self.interior(s));
        s.iter().zip(&c).all(|(&a, &b)| !a || b)
    }

    pub fn of_set(&self, a: &RatSet) -> Vec<bool> {
        (0..self.len()).map(|k| a.contains(&self.sample(k))).collect()
    }
}

/// Searches every union `U` of atoms inside `A` for an open one with
/// `A ⊆ cl(U)`.
pub fn ratset_semi_open_by_search(a: &RatSet) -> bool {
    let atoms = Atoms::new(a.endpoints());
    let member = atoms.of_set(a);
    let inside: Vec<usize> = (0..atoms.len()).filter(|&k| member[k]).collect();
    assert!(inside.len() <= 20, "oracle input too large");
    (0u32..1 << inside.len()).any(|choice| {
        let mut u = vec![false; atoms.len()];
        for (bit, &k) in inside.iter().enumerate() {
            u[k] = choice >> bit & 1 == 1;
        }
        if !atoms.is_open(&u) {
            return false;
        }
        let cl = atoms.closure(&u);
        member.iter().zip(&cl).all(|(&x, &y)| !x || y)
    })
}

/// Checks a step path against the preimage rules, sampling each atom of
/// its breakpoint partition. Mode 1: open sets pull back to semi-open sets;
/// mode 2: semi-open to semi-open; mode 3: semi-open to open.
pub fn path_is_so(alpha: &StepPath, opens: &[u32], mode: u8) -> bool {
    let n = alpha.space().point_count();
    let cuts = alpha.pieces().iter().flat_map(|p| [p.interval.lo.clone(), p.interval.hi.clone()]).collect();
    let atoms = Atoms::new(cuts);
    let values: Vec<usize> = (0..atoms.len()).map(|k| alpha.value_at(&atoms.sample(k)).expect("total path")).collect();
    let targets = if mode == 1 { opens.to_vec() } else { semi_open_sets(n, opens) };
    targets.iter().all(|&s| {
        let pre: Vec<bool> = values.iter().map(|&v| s >> v & 1 == 1).collect();
        if mode == 3 { atoms.is_open(&pre) } else { atoms.semi_open(&pre) }
    })
}

/// Is there an so-3 step path from `x` to `y` whose breakpoints lie on the
/// grid `k/grid`? Exhaustive over such paths by dynamic programming on the
/// value of the last cell: a path is so-3 exactly when every grid point's
/// value `v` and each adjacent cell value `u` satisfy "every semi-open set
/// containing `v` contains `u`".
pub fn so3_grid_path_exists(n: usize, opens: &[u32], x: usize, y: usize, grid: usize) -> bool {
    let so = semi_open_sets(n, opens);
    let ok = |v: usize, u: usize| so.iter().all(|&b| b >> v & 1 == 0 || b >> u & 1 == 1);
    // reachable[u]: some admissible prefix ends with a cell valued u.
    let mut reachable: Vec<bool> = (0..n).map(|u| ok(x, u)).collect();
    for _ in 1..grid {
        let mut next = vec![false; n];
        for u in (0..n).filter(|&u| reachable[u]) {
            for v in (0..n).filter(|&v| ok(v, u)) {
                for (w, slot) in next.iter_mut().enumerate() {
                    if ok(v, w) {
                        *slot = true;
                    }
                }
            }
        }
        reachable = next;
    }
    (0..n).any(|u| reachable[u] && ok(y, u))
}
