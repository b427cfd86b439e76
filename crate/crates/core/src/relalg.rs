//! Finite binary relations over a dense index carrier.
//!
//! Every execution graph numbers its events `0..n`; relations and event sets
//! are bit matrices over that carrier. [`EventId`] is the stable, structural
//! name of an event and is what reports and witnesses expose.

use std::fmt;

use serde::Serialize;

use crate::lang::{Loc, Tid};

/// Identity of an event: an initialization write or a `(thread, index)` pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum EventId {
    Init(Loc),
    Thread { tid: Tid, idx: usize },
}

impl EventId {
    pub fn tid(&self) -> Option<Tid> {
        match self {
            EventId::Init(_) => None,
            EventId::Thread { tid, .. } => Some(*tid),
        }
    }

    pub fn is_init(&self) -> bool {
        matches!(self, EventId::Init(_))
    }
}

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EventId::Init(l) => write!(f, "init{l}"),
            EventId::Thread { tid, idx } => write!(f, "({tid},{idx})"),
        }
    }
}

const WORD: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

/// A subset of the carrier `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EventSet {
    n: usize,
    bits: Vec<u64>,
}

impl EventSet {
    pub fn empty(n: usize) -> Self {
        EventSet { n, bits: vec![0; words_for(n)] }
    }

    pub fn full(n: usize) -> Self {
        Self::from_fn(n, |_| true)
    }

    pub fn from_fn(n: usize, mut pred: impl FnMut(usize) -> bool) -> Self {
        let mut s = Self::empty(n);
        for i in 0..n {
            if pred(i) {
                s.insert(i);
            }
        }
        s
    }

    pub fn from_iter(n: usize, items: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(n);
        for i in items {
            s.insert(i);
        }
        s
    }

    pub fn carrier(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.n, "element {i} outside carrier of size {}", self.n);
        self.bits[i / WORD] |= 1 << (i % WORD);
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.n && self.bits[i / WORD] & (1 << (i % WORD)) != 0
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|w| *w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        iter_bits(&self.bits)
    }

    pub fn union(&self, o: &EventSet) -> EventSet {
        self.zip(o, |a, b| a | b)
    }

    pub fn intersection(&self, o: &EventSet) -> EventSet {
        self.zip(o, |a, b| a & b)
    }

    pub fn difference(&self, o: &EventSet) -> EventSet {
        self.zip(o, |a, b| a & !b)
    }

    fn zip(&self, o: &EventSet, f: impl Fn(u64, u64) -> u64) -> EventSet {
        assert_eq!(self.n, o.n, "carrier mismatch");
        EventSet { n: self.n, bits: self.bits.iter().zip(&o.bits).map(|(a, b)| f(*a, *b)).collect() }
    }
}

impl fmt::Debug for EventSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let t = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(wi * WORD + t)
        })
    })
}

/// A binary relation on the carrier `0..n`, stored as a bit matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    w: usize,
    bits: Vec<u64>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        let w = words_for(n);
        Relation { n, w, bits: vec![0; n * w] }
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = Self::empty(n);
        for (a, b) in pairs {
            r.insert(a, b);
        }
        r
    }

    /// All pairs `(a, b)` of the carrier satisfying `pred`.
    pub fn from_fn(n: usize, mut pred: impl FnMut(usize, usize) -> bool) -> Self {
        let mut r = Self::empty(n);
        for a in 0..n {
            for b in 0..n {
                if pred(a, b) {
                    r.insert(a, b);
                }
            }
        }
        r
    }

    pub fn carrier(&self) -> usize {
        self.n
    }

    fn row(&self, a: usize) -> &[u64] {
        &self.bits[a * self.w..(a + 1) * self.w]
    }

    fn row_mut(&mut self, a: usize) -> &mut [u64] {
        &mut self.bits[a * self.w..(a + 1) * self.w]
    }

    pub fn insert(&mut self, a: usize, b: usize) {
        assert!(a < self.n && b < self.n, "pair ({a},{b}) outside carrier of size {}", self.n);
        self.bits[a * self.w + b / WORD] |= 1 << (b % WORD);
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        a < self.n && b < self.n && self.bits[a * self.w + b / WORD] & (1 << (b % WORD)) != 0
    }

    pub fn successors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        iter_bits(self.row(a))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |a| self.successors(a).map(move |b| (a, b)))
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|w| *w == 0)
    }

    pub fn union(&self, o: &Relation) -> Relation {
        self.zip(o, |a, b| a | b)
    }

    pub fn intersection(&self, o: &Relation) -> Relation {
        self.zip(o, |a, b| a & b)
    }

    pub fn difference(&self, o: &Relation) -> Relation {
        self.zip(o, |a, b| a & !b)
    }

    fn zip(&self, o: &Relation, f: impl Fn(u64, u64) -> u64) -> Relation {
        assert_eq!(self.n, o.n, "carrier mismatch");
        Relation { n: self.n, w: self.w, bits: self.bits.iter().zip(&o.bits).map(|(a, b)| f(*a, *b)).collect() }
    }

    pub fn union_all<'a>(n: usize, rs: impl IntoIterator<Item = &'a Relation>) -> Relation {
        rs.into_iter().fold(Relation::empty(n), |acc, r| acc.union(r))
    }

    /// Sequential composition `self ; o`.
    pub fn compose(&self, o: &Relation) -> Relation {
        assert_eq!(self.n, o.n, "carrier mismatch");
        let mut out = Relation::empty(self.n);
        for a in 0..self.n {
            let mut acc = vec![0u64; self.w];
            for b in self.successors(a) {
                for (x, y) in acc.iter_mut().zip(o.row(b)) {
                    *x |= *y;
                }
            }
            out.row_mut(a).copy_from_slice(&acc);
        }
        out
    }

    pub fn inverse(&self) -> Relation {
        Relation::from_pairs(self.n, self.pairs().map(|(a, b)| (b, a)))
    }

    pub fn identity(n: usize) -> Relation {
        Relation::from_pairs(n, (0..n).map(|i| (i, i)))
    }

    /// `self?` over the whole carrier.
    pub fn reflexive_closure(&self) -> Relation {
        self.union(&Relation::identity(self.n))
    }

    /// `self⁺`, computed by Warshall's algorithm on bit rows.
    pub fn transitive_closure(&self) -> Relation {
        let mut r = self.clone();
        for k in 0..r.n {
            let rk: Vec<u64> = r.row(k).to_vec();
            for i in 0..r.n {
                if r.contains(i, k) {
                    for (x, y) in r.row_mut(i).iter_mut().zip(&rk) {
                        *x |= *y;
                    }
                }
            }
        }
        r
    }

    /// `self*` over the whole carrier.
    pub fn refl_trans_closure(&self) -> Relation {
        self.transitive_closure().reflexive_closure()
    }

    /// `[dom] ; self ; [cod]`.
    pub fn restrict(&self, dom: &EventSet, cod: &EventSet) -> Relation {
        let mut out = Relation::empty(self.n);
        for a in dom.iter() {
            for (wi, (x, y)) in out.row_mut(a).iter_mut().zip(self.row(a)).enumerate() {
                *x = *y & cod.bits[wi];
            }
        }
        out
    }

    pub fn restrict_dom(&self, dom: &EventSet) -> Relation {
        self.restrict(dom, &EventSet::full(self.n))
    }

    pub fn restrict_cod(&self, cod: &EventSet) -> Relation {
        self.restrict(&EventSet::full(self.n), cod)
    }

    pub fn filter(&self, mut keep: impl FnMut(usize, usize) -> bool) -> Relation {
        Relation::from_pairs(self.n, self.pairs().filter(|&(a, b)| keep(a, b)))
    }

    pub fn is_irreflexive(&self) -> bool {
        (0..self.n).all(|i| !self.contains(i, i))
    }

    pub fn is_acyclic(&self) -> bool {
        self.find_cycle().is_none()
    }

    /// Some cycle `c0 → c1 → … → c0` of the relation, if one exists.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Active,
            Done,
        }
        let mut mark = vec![Mark::New; self.n];
        let mut parent = vec![usize::MAX; self.n];
        for root in 0..self.n {
            if mark[root] != Mark::New {
                continue;
            }
            let mut stack: Vec<(usize, Vec<usize>)> = vec![(root, self.successors(root).collect())];
            mark[root] = Mark::Active;
            while let Some((v, succ)) = stack.last_mut() {
                let v = *v;
                match succ.pop() {
                    None => {
                        mark[v] = Mark::Done;
                        stack.pop();
                    }
                    Some(u) => match mark[u] {
                        Mark::Active => {
                            let mut cycle = vec![v];
                            let mut x = v;
                            while x != u {
                                x = parent[x];
                                cycle.push(x);
                            }
                            cycle.reverse();
                            return Some(cycle);
                        }
                        Mark::New => {
                            mark[u] = Mark::Active;
                            parent[u] = v;
                            stack.push((u, self.successors(u).collect()));
                        }
                        Mark::Done => {}
                    },
                }
            }
        }
        None
    }

    /// Some `a` with `(a, a)` in the relation.
    pub fn find_reflexive(&self) -> Option<usize> {
        (0..self.n).find(|&i| self.contains(i, i))
    }

    pub fn domain(&self) -> EventSet {
        EventSet::from_fn(self.n, |a| self.row(a).iter().any(|w| *w != 0))
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

/// `[s]`: the identity relation restricted to `s`.
pub fn identity_on(s: &EventSet) -> Relation {
    Relation::from_pairs(s.carrier(), s.iter().map(|i| (i, i)))
}

/// Splits `r` into its internal part (both ends in the same thread) and its
/// external part. Pairs touching an initialization event are external.
pub fn split_internal_external(r: &Relation, tid_of: impl Fn(usize) -> Option<Tid>) -> (Relation, Relation) {
    let internal = r.filter(|a, b| matches!((tid_of(a), tid_of(b)), (Some(x), Some(y)) if x == y));
    let external = r.difference(&internal);
    (internal, external)
}

/// Pairs whose endpoints access the same location. Fences have no location.
pub fn restrict_same_loc(r: &Relation, loc_of: impl Fn(usize) -> Option<Loc>) -> Relation {
    r.filter(|a, b| matches!((loc_of(a), loc_of(b)), (Some(x), Some(y)) if x == y))
}

/// Complement of [`restrict_same_loc`] within `r`; pairs with a fence stay.
pub fn restrict_diff_loc(r: &Relation, loc_of: impl Fn(usize) -> Option<Loc>) -> Relation {
    r.difference(&restrict_same_loc(r, loc_of))
}

pub fn restrict_at_loc(r: &Relation, l: Loc, loc_of: impl Fn(usize) -> Option<Loc>) -> Relation {
    r.filter(|a, b| loc_of(a) == Some(l) && loc_of(b) == Some(l))
}
