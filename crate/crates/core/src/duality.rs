//! Finite posets, distributive join semilattices and their frames of opens.
//!
//! Opens of the Alexandroff locale of a poset are its downward closed
//! subsets; the classical up-set convention is the same construction on the
//! opposite order. Prime filters of a semilattice are defined as the
//! restrictions of the points of its frame of ideals.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::fincat::{find_isomorphism, FiniteCategory, Functor};
use crate::site::{check_stable_family_class, FamilyClassReport, Site, SiteError};
use crate::verdict::Verdict;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DualityError {
    #[error("not a partial order: {0}")]
    NotPartialOrder(String),
    #[error("not a join semilattice: {0}")]
    NotSemilattice(String),
    #[error("not a lattice: {0}")]
    NotLattice(String),
    #[error("not distributive, witness ({0}, {1}, {2})")]
    NotDistributive(String, String, String),
    #[error("map is not order preserving: {0} <= {1}")]
    NotOrderPreserving(String, String),
    #[error("map does not preserve joins: {0}")]
    NotJoinPreserving(String),
    #[error("map has the wrong size")]
    WrongSize,
}

/// A finite partial order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinPoset {
    elements: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl FinPoset {
    pub fn new(elements: Vec<String>, leq: Vec<Vec<bool>>) -> Result<FinPoset, DualityError> {
        let n = elements.len();
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(DualityError::NotPartialOrder("table size".into()));
        }
        for a in 0..n {
            if !leq[a][a] {
                return Err(DualityError::NotPartialOrder(format!("{} is not below itself", elements[a])));
            }
            for b in 0..n {
                if a != b && leq[a][b] && leq[b][a] {
                    return Err(DualityError::NotPartialOrder(format!("{} and {} are equivalent", elements[a], elements[b])));
                }
                for c in 0..n {
                    if leq[a][b] && leq[b][c] && !leq[a][c] {
                        return Err(DualityError::NotPartialOrder(format!(
                            "{} <= {} <= {} but not {} <= {}",
                            elements[a], elements[b], elements[c], elements[a], elements[c]
                        )));
                    }
                }
            }
        }
        Ok(FinPoset { elements, leq })
    }

    /// The order generated by `covers` (pairs `(lower, upper)` of indices).
    pub fn from_covers(elements: Vec<String>, covers: &[(usize, usize)]) -> Result<FinPoset, DualityError> {
        let n = elements.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in covers {
            leq[a][b] = true;
        }
        for m in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if leq[i][m] && leq[m][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
        FinPoset::new(elements, leq)
    }

    pub fn antichain(n: usize) -> FinPoset {
        FinPoset::from_covers(numbered(n), &[]).expect("antichain")
    }

    pub fn chain(n: usize) -> FinPoset {
        let covers: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        FinPoset::from_covers(numbered(n), &covers).expect("chain")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn name(&self, a: usize) -> &str {
        &self.elements[a]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn leq_table(&self) -> &[Vec<bool>] {
        &self.leq
    }

    pub fn down(&self, a: usize) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.leq[x][a]).collect()
    }

    pub fn up(&self, a: usize) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.leq[a][x]).collect()
    }

    pub fn opposite(&self) -> FinPoset {
        let n = self.len();
        FinPoset { elements: self.elements.clone(), leq: (0..n).map(|a| (0..n).map(|b| self.leq[b][a]).collect()).collect() }
    }

    /// The least upper bound of `xs`, if it exists.
    pub fn join_of(&self, xs: &[usize]) -> Option<usize> {
        let ubs: Vec<usize> = (0..self.len()).filter(|&u| xs.iter().all(|&x| self.leq[x][u])).collect();
        ubs.iter().copied().find(|&u| ubs.iter().all(|&v| self.leq[u][v]))
    }

    /// The greatest lower bound of `xs`, if it exists.
    pub fn meet_of(&self, xs: &[usize]) -> Option<usize> {
        self.opposite().join_of(xs)
    }

    pub fn is_downset(&self, set: &[bool]) -> bool {
        (0..self.len()).all(|a| !set[a] || (0..self.len()).all(|x| !self.leq[x][a] || set[x]))
    }

    pub fn is_upset(&self, set: &[bool]) -> bool {
        self.opposite().is_downset(set)
    }

    /// The poset as a thin category.
    pub fn to_category(&self) -> FiniteCategory {
        FiniteCategory::from_poset(&self.elements, &self.leq)
    }

    /// The subposet on `keep`, in that order.
    pub fn restrict(&self, keep: &[usize]) -> FinPoset {
        FinPoset {
            elements: keep.iter().map(|&a| self.elements[a].clone()).collect(),
            leq: keep.iter().map(|&a| keep.iter().map(|&b| self.leq[a][b]).collect()).collect(),
        }
    }

    /// The same order with elements renamed `0, 1, …`.
    pub fn relabeled(&self) -> FinPoset {
        FinPoset { elements: numbered(self.len()), leq: self.leq.clone() }
    }

    /// An order isomorphism `self → other` as an element map.
    pub fn isomorphism_to(&self, other: &FinPoset) -> Option<Vec<usize>> {
        find_isomorphism(&self.to_category(), &other.to_category()).map(|f| f.on_objects)
    }

    /// A labeling-independent encoding: the least adjacency matrix over all
    /// relabelings that keep elements sorted by (down-set size, up-set size).
    pub fn canonical_form(&self) -> Vec<bool> {
        let n = self.len();
        let key = |a: usize| (self.down(a).len(), self.up(a).len());
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&a| key(a));
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for &a in &order {
            match blocks.last_mut() {
                Some(b) if key(b[0]) == key(a) => b.push(a),
                _ => blocks.push(vec![a]),
            }
        }
        let mut best: Option<Vec<bool>> = None;
        let mut perm = Vec::with_capacity(n);
        canonical_search(self, &blocks, 0, &mut perm, &mut best);
        best.unwrap_or_default()
    }
}

fn canonical_search(p: &FinPoset, blocks: &[Vec<usize>], bi: usize, perm: &mut Vec<usize>, best: &mut Option<Vec<bool>>) {
    if bi == blocks.len() {
        let code: Vec<bool> = perm.iter().flat_map(|&a| perm.iter().map(move |&b| p.leq[a][b])).collect();
        if best.as_ref().is_none_or(|b| code < *b) {
            *best = Some(code);
        }
        return;
    }
    permute(&blocks[bi], &mut Vec::new(), &mut vec![false; blocks[bi].len()], &mut |choice| {
        let len = perm.len();
        perm.extend_from_slice(choice);
        canonical_search(p, blocks, bi + 1, perm, best);
        perm.truncate(len);
    });
}

fn permute(items: &[usize], acc: &mut Vec<usize>, used: &mut [bool], f: &mut dyn FnMut(&[usize])) {
    if acc.len() == items.len() {
        f(acc);
        return;
    }
    for i in 0..items.len() {
        if !used[i] {
            used[i] = true;
            acc.push(items[i]);
            permute(items, acc, used, f);
            acc.pop();
            used[i] = false;
        }
    }
}

fn numbered(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// A poset with a bottom element and all binary joins.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JoinSemilattice {
    poset: FinPoset,
    bottom: usize,
    join: Vec<Vec<usize>>,
}

impl JoinSemilattice {
    /// Computes bottom and joins from the order.
    pub fn new(poset: FinPoset) -> Result<JoinSemilattice, DualityError> {
        let n = poset.len();
        let bottom = poset.join_of(&[]).ok_or_else(|| DualityError::NotSemilattice("no bottom element".into()))?;
        let mut join = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                join[a][b] = poset.join_of(&[a, b]).ok_or_else(|| {
                    DualityError::NotSemilattice(format!("{} and {} have no join", poset.name(a), poset.name(b)))
                })?;
            }
        }
        Ok(JoinSemilattice { poset, bottom, join })
    }

    /// Checks explicitly given bottom and join tables against the order.
    pub fn from_tables(poset: FinPoset, bottom: usize, join: Vec<Vec<usize>>) -> Result<JoinSemilattice, DualityError> {
        let s = JoinSemilattice::new(poset)?;
        if s.bottom != bottom {
            return Err(DualityError::NotSemilattice(format!("{} is not the bottom", s.poset.name(bottom))));
        }
        let n = s.len();
        if join.len() != n || join.iter().any(|r| r.len() != n) {
            return Err(DualityError::NotSemilattice("join table size".into()));
        }
        for a in 0..n {
            for b in 0..n {
                if join[a][b] != s.join[a][b] {
                    return Err(DualityError::NotSemilattice(format!(
                        "{} is not the join of {} and {}",
                        s.poset.name(join[a][b]),
                        s.poset.name(a),
                        s.poset.name(b)
                    )));
                }
            }
        }
        Ok(s)
    }

    pub fn poset(&self) -> &FinPoset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    pub fn join_all(&self, xs: &[usize]) -> usize {
        xs.iter().fold(self.bottom, |acc, &x| self.join[acc][x])
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.poset.leq(a, b)
    }

    pub fn name(&self, a: usize) -> &str {
        self.poset.name(a)
    }

    /// The meet of `a` and `b` when it exists.
    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        self.poset.meet_of(&[a, b])
    }
}

/// `a ≤ b ∨ c` always splits as `a = b' ∨ c'` with `b' ≤ b`, `c' ≤ c`.
/// The witness `(a, b, c)` is the first failure with `a` descending and
/// `b`, `c` ascending.
pub fn is_distributive(s: &JoinSemilattice) -> Verdict {
    match distributivity_witness(s) {
        None => Verdict::True,
        Some((a, b, c)) => Verdict::fail("no split of a below b v c", [s.name(a), s.name(b), s.name(c)]),
    }
}

fn distributivity_witness(s: &JoinSemilattice) -> Option<(usize, usize, usize)> {
    let n = s.len();
    for a in (0..n).rev() {
        for b in 0..n {
            for c in 0..n {
                if !s.leq(a, s.join(b, c)) {
                    continue;
                }
                let split = s.poset.down(b).into_iter().any(|b2| s.poset.down(c).into_iter().any(|c2| s.join(b2, c2) == a));
                if !split {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

fn require_distributive(s: &JoinSemilattice) -> Result<(), DualityError> {
    match distributivity_witness(s) {
        None => Ok(()),
        Some((a, b, c)) => Err(DualityError::NotDistributive(s.name(a).into(), s.name(b).into(), s.name(c).into())),
    }
}

/// A finite distributive lattice, the finite case of a frame.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinFrame {
    lattice: FinPoset,
    join: Vec<Vec<usize>>,
    meet: Vec<Vec<usize>>,
    bottom: usize,
    top: usize,
}

impl FinFrame {
    pub fn new(lattice: FinPoset) -> Result<FinFrame, DualityError> {
        let n = lattice.len();
        let bottom = lattice.join_of(&[]).ok_or_else(|| DualityError::NotLattice("no bottom".into()))?;
        let top = lattice.meet_of(&[]).ok_or_else(|| DualityError::NotLattice("no top".into()))?;
        let op = lattice.opposite();
        let mut join = vec![vec![0; n]; n];
        let mut meet = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let pair = format!("{}, {}", lattice.name(a), lattice.name(b));
                join[a][b] = lattice.join_of(&[a, b]).ok_or_else(|| DualityError::NotLattice(format!("no join of {pair}")))?;
                meet[a][b] = op.join_of(&[a, b]).ok_or_else(|| DualityError::NotLattice(format!("no meet of {pair}")))?;
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if meet[a][join[b][c]] != join[meet[a][b]][meet[a][c]] {
                        return Err(DualityError::NotDistributive(
                            lattice.name(a).into(),
                            lattice.name(b).into(),
                            lattice.name(c).into(),
                        ));
                    }
                }
            }
        }
        Ok(FinFrame { lattice, join, meet, bottom, top })
    }

    pub fn lattice(&self) -> &FinPoset {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.lattice.leq(a, b)
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn join_all(&self, xs: &[usize]) -> usize {
        xs.iter().fold(self.bottom, |acc, &x| self.join[acc][x])
    }

    pub fn meet_all(&self, xs: &[usize]) -> usize {
        xs.iter().fold(self.top, |acc, &x| self.meet[acc][x])
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Not the bottom, and not the join of the elements strictly below.
    pub fn is_join_irreducible(&self, x: usize) -> bool {
        let below: Vec<usize> = (0..self.len()).filter(|&y| y != x && self.leq(y, x)).collect();
        x != self.bottom && self.join_all(&below) != x
    }

    /// Not the bottom, and below a binary join only when below one part.
    pub fn is_join_prime(&self, x: usize) -> bool {
        x != self.bottom
            && (0..self.len()).all(|a| (0..self.len()).all(|b| !self.leq(x, self.join[a][b]) || self.leq(x, a) || self.leq(x, b)))
    }
}

/// A frame whose elements are subsets of an underlying poset, ordered by
/// inclusion; `opens[i]` lists the members of element `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpenFrame {
    pub frame: FinFrame,
    pub opens: Vec<Vec<usize>>,
}

fn open_frame(base: &FinPoset, mut opens: Vec<Vec<usize>>) -> OpenFrame {
    opens.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    opens.dedup();
    let names: Vec<String> = opens
        .iter()
        .map(|o| format!("{{{}}}", o.iter().map(|&x| base.name(x)).collect::<Vec<_>>().join(",")))
        .collect();
    let leq: Vec<Vec<bool>> =
        opens.iter().map(|a| opens.iter().map(|b| a.iter().all(|x| b.contains(x))).collect()).collect();
    let poset = FinPoset::new(names, leq).expect("inclusion is a partial order");
    let frame = FinFrame::new(poset).expect("the opens form a distributive lattice");
    OpenFrame { frame, opens }
}

/// The frame of ideals of a distributive semilattice. Every ideal of a
/// finite semilattice contains the join of its members, so the ideals are
/// exactly the principal ones.
pub fn ideal_frame(s: &JoinSemilattice) -> Result<OpenFrame, DualityError> {
    require_distributive(s)?;
    Ok(open_frame(s.poset(), (0..s.len()).map(|a| s.poset.down(a)).collect()))
}

/// Completely prime filters: the up-sets of the join-prime elements, each
/// listed as sorted element indices.
pub fn frame_points(f: &FinFrame) -> Vec<Vec<usize>> {
    (0..f.len()).filter(|&p| f.is_join_prime(p)).map(|p| f.lattice.up(p)).collect()
}

/// Prime filters of `s`, obtained from the points of its ideal frame by
/// restriction along principal ideals.
pub fn prime_filters(s: &JoinSemilattice) -> Result<Vec<Vec<usize>>, DualityError> {
    let of = ideal_frame(s)?;
    let principal: Vec<usize> = (0..s.len())
        .map(|a| of.opens.iter().position(|o| *o == s.poset.down(a)).expect("principal ideal"))
        .collect();
    let mut out: Vec<Vec<usize>> = frame_points(&of.frame)
        .into_iter()
        .map(|pt| (0..s.len()).filter(|&a| pt.contains(&principal[a])).collect())
        .collect();
    out.sort();
    Ok(out)
}

/// Outcome of a duality round trip: the recovered elements of the frame and
/// an order isomorphism from the original onto them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundTrip {
    pub frame: OpenFrame,
    /// Frame elements singled out by the construction, in frame order.
    pub recovered: Vec<usize>,
    /// `iso[a]` is the recovered frame element matched with `a`, when an
    /// isomorphism exists.
    pub iso: Option<Vec<usize>>,
}

impl RoundTrip {
    pub fn succeeded(&self) -> bool {
        self.iso.is_some()
    }
}

fn round_trip(original: &FinPoset, frame: OpenFrame, recovered: Vec<usize>) -> RoundTrip {
    let sub = frame.frame.lattice.restrict(&recovered);
    let iso = original.isomorphism_to(&sub).map(|m| m.into_iter().map(|i| recovered[i]).collect());
    RoundTrip { frame, recovered, iso }
}

/// The principal ideals of the ideal frame, ordered by inclusion, compared
/// with `s`.
pub fn stone_round_trip(s: &JoinSemilattice) -> Result<RoundTrip, DualityError> {
    let of = ideal_frame(s)?;
    let recovered: Vec<usize> = (0..of.opens.len())
        .filter(|&i| s.poset.join_of(&of.opens[i]).is_some_and(|j| of.opens[i].contains(&j)))
        .collect();
    Ok(round_trip(&s.poset, of, recovered))
}

/// The frame of down-sets of `p`.
pub fn alexandroff(p: &FinPoset) -> OpenFrame {
    let mut seen: BTreeSet<Vec<bool>> = BTreeSet::new();
    let mut queue = vec![vec![false; p.len()]];
    seen.insert(queue[0].clone());
    while let Some(d) = queue.pop() {
        for a in 0..p.len() {
            let mut next = d.clone();
            for x in p.down(a) {
                next[x] = true;
            }
            if seen.insert(next.clone()) {
                queue.push(next);
            }
        }
    }
    let opens = seen.into_iter().map(|d| (0..p.len()).filter(|&x| d[x]).collect()).collect();
    open_frame(p, opens)
}

/// The join-irreducible down-sets, ordered by inclusion, compared with `p`.
pub fn alexandroff_round_trip(p: &FinPoset) -> RoundTrip {
    let of = alexandroff(p);
    let recovered: Vec<usize> = (0..of.frame.len()).filter(|&i| of.frame.is_join_irreducible(i)).collect();
    round_trip(p, of, recovered)
}

fn check_monotone(p: &FinPoset, q: &FinPoset, f: &[usize]) -> Result<(), DualityError> {
    if f.len() != p.len() || f.iter().any(|&x| x >= q.len()) {
        return Err(DualityError::WrongSize);
    }
    for a in 0..p.len() {
        for b in 0..p.len() {
            if p.leq(a, b) && !q.leq(f[a], f[b]) {
                return Err(DualityError::NotOrderPreserving(p.name(a).into(), p.name(b).into()));
            }
        }
    }
    Ok(())
}

/// Every `d` lies below some `f(c)`, and any two such `c, c'` have a common
/// lower bound `c''` with `d ≤ f(c'')`.
pub fn is_flat_map(p: &FinPoset, q: &FinPoset, f: &[usize]) -> Result<bool, DualityError> {
    check_monotone(p, q, f)?;
    let n = p.len();
    for d in 0..q.len() {
        let over: Vec<usize> = (0..n).filter(|&c| q.leq(d, f[c])).collect();
        if over.is_empty() {
            return Ok(false);
        }
        for &c in &over {
            for &c2 in &over {
                if !over.iter().any(|&c3| p.leq(c3, c) && p.leq(c3, c2)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Whether a join preserving map between finite frames also preserves all
/// meets, the empty meet included. Maps that fail to preserve some join
/// (the empty one included) are rejected.
pub fn is_completely_continuous(a: &FinFrame, b: &FinFrame, h: &[usize]) -> Result<bool, DualityError> {
    check_monotone(&a.lattice, &b.lattice, h)?;
    if h[a.bottom] != b.bottom {
        return Err(DualityError::NotJoinPreserving("bottom".into()));
    }
    for x in 0..a.len() {
        for y in 0..a.len() {
            if h[a.join[x][y]] != b.join[h[x]][h[y]] {
                return Err(DualityError::NotJoinPreserving(format!("{} v {}", a.lattice.name(x), a.lattice.name(y))));
            }
        }
    }
    Ok(h[a.top] == b.top && (0..a.len()).all(|x| (0..a.len()).all(|y| h[a.meet[x][y]] == b.meet[h[x]][h[y]])))
}

/// The three clauses: finite joins are preserved, every `d` lies below some
/// `f(c)`, and whenever `d ≤ f(c), f(c')` the element `d` is the join of
/// elements lying below `f(c'')` for common lower bounds `c''`.
pub fn is_dist_join_hom(s: &JoinSemilattice, t: &JoinSemilattice, f: &[usize]) -> Result<bool, DualityError> {
    check_monotone(&s.poset, &t.poset, f)?;
    let n = s.len();
    if f[s.bottom] != t.bottom || (0..n).any(|a| (0..n).any(|b| f[s.join(a, b)] != t.join(f[a], f[b]))) {
        return Ok(false);
    }
    for d in 0..t.len() {
        let over: Vec<usize> = (0..n).filter(|&c| t.leq(d, f[c])).collect();
        if over.is_empty() {
            return Ok(false);
        }
        for &c in &over {
            for &c2 in &over {
                let pieces: Vec<usize> = (0..t.len())
                    .filter(|&x| t.leq(x, d) && (0..n).any(|c3| s.leq(c3, c) && s.leq(c3, c2) && t.leq(x, f[c3])))
                    .collect();
                if t.join_all(&pieces) != d {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Finite join covers of `s` as families of morphisms in its poset
/// category: every nonempty set of elements below `c` with join `c`, and the
/// empty family over the bottom.
pub fn join_cover_families(s: &JoinSemilattice, cat: &FiniteCategory) -> Vec<(usize, Vec<usize>)> {
    let mut out = vec![(s.bottom, Vec::new())];
    for c in 0..s.len() {
        let below = s.poset.down(c);
        for mask in 1u64..(1u64 << below.len()) {
            let part: Vec<usize> = (0..below.len()).filter(|&i| mask >> i & 1 == 1).map(|i| below[i]).collect();
            if s.join_all(&part) == c {
                out.push((c, part.iter().map(|&x| cat.hom(x, c)[0]).collect()));
            }
        }
    }
    out
}

/// The stable-family axioms for the finite join covers of `s`.
pub fn join_cover_report(s: &JoinSemilattice) -> FamilyClassReport {
    let cat = s.poset.to_category();
    check_stable_family_class(&cat, &join_cover_families(s, &cat))
}

/// `s` with the topology in which finite joins cover.
pub fn join_cover_site(s: &JoinSemilattice) -> Result<Site, SiteError> {
    let cat = s.poset.to_category();
    let fams = join_cover_families(s, &cat);
    let nonempty: Vec<Vec<usize>> = fams.iter().filter(|(_, f)| !f.is_empty()).map(|(_, f)| f.clone()).collect();
    Site::finitely_generated(cat, &nonempty, &[s.bottom])
}

/// The functor between poset categories induced by a monotone map.
pub fn monotone_functor(p: &FinPoset, q: &FinPoset, f: &[usize]) -> Result<Functor, DualityError> {
    check_monotone(p, q, f)?;
    let (cp, cq) = (p.to_category(), q.to_category());
    Ok(Functor {
        on_objects: f.to_vec(),
        on_morphisms: cp.morphisms().map(|m| cq.hom(f[cp.dom(m)], f[cp.cod(m)])[0]).collect(),
    })
}

/// All posets with at most `max` elements up to isomorphism, by size and
/// then canonical form. Elements are named `0, 1, …`.
pub fn enumerate_posets(max: usize) -> Vec<FinPoset> {
    let mut out = Vec::new();
    let mut level: Vec<FinPoset> = vec![FinPoset::antichain(0)];
    for n in 0..=max {
        let mut seen: BTreeSet<Vec<bool>> = BTreeSet::new();
        let mut reps: Vec<(Vec<bool>, FinPoset)> = Vec::new();
        for p in &level {
            let code = p.canonical_form();
            if seen.insert(code.clone()) {
                reps.push((code, p.relabeled()));
            }
        }
        reps.sort_by(|a, b| a.0.cmp(&b.0));
        if n == max {
            out.extend(reps.into_iter().map(|(_, p)| p));
            break;
        }
        let mut next = Vec::new();
        for (_, p) in &reps {
            for d in alexandroff(p).opens {
                next.push(extend_above(p, &d));
            }
        }
        out.extend(reps.into_iter().map(|(_, p)| p));
        level = next;
    }
    out
}

/// `p` with a new element whose strict down-set is `d`.
fn extend_above(p: &FinPoset, d: &[usize]) -> FinPoset {
    let n = p.len();
    let mut leq: Vec<Vec<bool>> = p.leq.iter().map(|r| r.iter().copied().chain([false]).collect()).collect();
    let mut last = vec![false; n + 1];
    last[n] = true;
    leq.push(last);
    for &x in d {
        leq[x][n] = true;
    }
    FinPoset { elements: numbered(n + 1), leq }
}

/// All join semilattices with at most `max` elements up to isomorphism.
pub fn enumerate_jsls(max: usize) -> Vec<JoinSemilattice> {
    enumerate_posets(max).into_iter().filter_map(|p| JoinSemilattice::new(p).ok()).collect()
}

fn lattice(elements: &[&str], covers: &[(usize, usize)]) -> JoinSemilattice {
    let p = FinPoset::from_covers(elements.iter().map(|s| s.to_string()).collect(), covers).expect("partial order");
    JoinSemilattice::new(p).expect("join semilattice")
}

/// `0 < a, b < 1`.
pub fn diamond_jsl() -> JoinSemilattice {
    lattice(&["0", "a", "b", "1"], &[(0, 1), (0, 2), (1, 3), (2, 3)])
}

/// `⊥ < ⊤`.
pub fn chain2_jsl() -> JoinSemilattice {
    lattice(&["bot", "top"], &[(0, 1)])
}

/// Three atoms `a, b, c` with pairwise join `1`.
pub fn njsl5() -> JoinSemilattice {
    lattice(&["0", "a", "b", "c", "1"], &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
}
