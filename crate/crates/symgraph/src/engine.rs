//! Dense bit-vector vertex sets, the one-step image operators `post`/`pre`
//! and the operation accounting shared by every algorithm in this crate.
//!
//! All algorithm costs are stated in terms of one-step operations and basic
//! set operations, so both are funneled through [`OpCounter`].

use std::cell::{Cell, RefCell};
use std::fmt;
use std::ops::{Deref, DerefMut};

use crate::error::Error;

const BITS: usize = u64::BITS as usize;

#[inline(always)]
fn words_for(universe: usize) -> usize {
    universe.div_ceil(BITS)
}

/// Mask clearing the unused tail bits of the last word.
#[inline(always)]
fn tail_mask(universe: usize) -> u64 {
    let rem = universe % BITS;
    if rem == 0 {
        !0
    } else {
        (1u64 << rem) - 1
    }
}

/// Direction of a one-step image operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Post,
    Pre,
}

/// Observer invoked on every one-step operation; used by the communication
/// protocol simulator to charge bits without touching the algorithms.
pub type StepObserver = Box<dyn FnMut(StepKind, &VertexSet, Option<&VertexSet>)>;

/// Aggregates the operation counts of one algorithm run.
///
/// `one_step` counts `post`/`pre` invocations, `set_ops` counts basic set
/// operations (a masked image adds one set operation for applying the mask),
/// and `peak_sets` is the largest number of simultaneously live vertex sets
/// registered through [`Tracked`]. Algorithms register every set they keep
/// across one-step operations; expression temporaries inside a single step
/// and sets handed out of the run (for example emitted components) are not
/// part of the peak.
pub struct OpCounter {
    one_step: Cell<u64>,
    set_ops: Cell<u64>,
    live_sets: Cell<u64>,
    peak_sets: Cell<u64>,
    observer: RefCell<Option<StepObserver>>,
}

/// Plain-data view of an [`OpCounter`] at one point in time.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CounterSnapshot {
    pub one_step: u64,
    pub set_ops: u64,
    pub peak_sets: u64,
}

impl OpCounter {
    pub fn new() -> Self {
        OpCounter {
            one_step: Cell::new(0),
            set_ops: Cell::new(0),
            live_sets: Cell::new(0),
            peak_sets: Cell::new(0),
            observer: RefCell::new(None),
        }
    }

    pub fn one_step(&self) -> u64 {
        self.one_step.get()
    }

    pub fn set_ops(&self) -> u64 {
        self.set_ops.get()
    }

    pub fn peak_sets(&self) -> u64 {
        self.peak_sets.get()
    }

    pub fn live_sets(&self) -> u64 {
        self.live_sets.get()
    }

    pub fn snapshot(&self) -> CounterSnapshot {
        CounterSnapshot {
            one_step: self.one_step.get(),
            set_ops: self.set_ops.get(),
            peak_sets: self.peak_sets.get(),
        }
    }

    /// Clears all tallies. Requires exclusive access so a reset cannot race
    /// with a run; counters are per-run, not shared between runs.
    pub fn reset(&mut self) {
        debug_assert_eq!(self.live_sets.get(), 0, "reset while sets are live");
        self.one_step.set(0);
        self.set_ops.set(0);
        self.live_sets.set(0);
        self.peak_sets.set(0);
    }

    /// Installs an observer receiving every subsequent one-step operation.
    pub fn set_observer(&self, observer: StepObserver) {
        *self.observer.borrow_mut() = Some(observer);
    }

    pub fn clear_observer(&self) {
        *self.observer.borrow_mut() = None;
    }

    #[inline]
    pub(crate) fn record_one_step(&self) {
        self.one_step.set(self.one_step.get() + 1);
    }

    #[inline]
    pub(crate) fn record_set_op(&self) {
        self.set_ops.set(self.set_ops.get() + 1);
    }

    pub(crate) fn notify(&self, kind: StepKind, input: &VertexSet, domain: Option<&VertexSet>) {
        if let Some(observer) = self.observer.borrow_mut().as_mut() {
            observer(kind, input, domain);
        }
    }

    fn set_created(&self) {
        let live = self.live_sets.get() + 1;
        self.live_sets.set(live);
        if live > self.peak_sets.get() {
            self.peak_sets.set(live);
        }
    }

    fn set_dropped(&self) {
        self.live_sets.set(self.live_sets.get() - 1);
    }
}

impl Default for OpCounter {
    fn default() -> Self {
        Self::new()
    }
}

impl fmt::Debug for OpCounter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OpCounter")
            .field("one_step", &self.one_step.get())
            .field("set_ops", &self.set_ops.get())
            .field("live_sets", &self.live_sets.get())
            .field("peak_sets", &self.peak_sets.get())
            .finish()
    }
}

/// RAII registration of a vertex set in the live-set accounting of an
/// [`OpCounter`]. Dereferences to the wrapped [`VertexSet`].
pub struct Tracked<'c> {
    set: Option<VertexSet>,
    ctr: &'c OpCounter,
}

impl<'c> Tracked<'c> {
    pub fn new(set: VertexSet, ctr: &'c OpCounter) -> Self {
        ctr.set_created();
        Tracked {
            set: Some(set),
            ctr,
        }
    }

    /// Unregisters the set and hands it back, e.g. to emit it to a caller.
    pub fn into_inner(mut self) -> VertexSet {
        let set = self.set.take().expect("tracked set already taken");
        self.ctr.set_dropped();
        set
    }
}

impl Deref for Tracked<'_> {
    type Target = VertexSet;

    fn deref(&self) -> &VertexSet {
        self.set.as_ref().expect("tracked set already taken")
    }
}

impl DerefMut for Tracked<'_> {
    fn deref_mut(&mut self) -> &mut VertexSet {
        self.set.as_mut().expect("tracked set already taken")
    }
}

impl Drop for Tracked<'_> {
    fn drop(&mut self) {
        if self.set.is_some() {
            self.ctr.set_dropped();
        }
    }
}

impl fmt::Debug for Tracked<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&**self, f)
    }
}

/// Restriction of one-step operations to an induced subgraph.
///
/// A masked image is confined to `domain` on both sides and is priced as one
/// one-step operation plus one set operation.
#[derive(Clone, Copy, Debug)]
pub struct Mask<'a> {
    domain: &'a VertexSet,
}

impl<'a> Mask<'a> {
    pub fn new(domain: &'a VertexSet) -> Self {
        Mask { domain }
    }

    pub fn domain(&self) -> &'a VertexSet {
        self.domain
    }
}

/// Subset of a fixed vertex universe `{0, .., universe-1}`, stored as a
/// packed bit vector. All binary operations require matching universes.
///
/// Methods taking an [`OpCounter`] are the priced set operations; the
/// remaining methods are construction and inspection helpers that carry no
/// cost in the operation model.
#[derive(Clone, PartialEq, Eq)]
pub struct VertexSet {
    universe: usize,
    words: Box<[u64]>,
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        VertexSet {
            universe,
            words: vec![0; words_for(universe)].into_boxed_slice(),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut words = vec![!0u64; words_for(universe)].into_boxed_slice();
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(universe);
        }
        VertexSet { universe, words }
    }

    pub fn singleton(universe: usize, vertex: usize) -> Self {
        let mut set = VertexSet::empty(universe);
        set.insert(vertex);
        set
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, indices: I) -> Self {
        let mut set = VertexSet::empty(universe);
        for v in indices {
            set.insert(v);
        }
        set
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, vertex: usize) {
        assert!(vertex < self.universe, "vertex {vertex} out of range");
        self.words[vertex / BITS] |= 1u64 << (vertex % BITS);
    }

    pub fn remove(&mut self, vertex: usize) {
        assert!(vertex < self.universe, "vertex {vertex} out of range");
        self.words[vertex / BITS] &= !(1u64 << (vertex % BITS));
    }

    pub fn contains(&self, vertex: usize) -> bool {
        vertex < self.universe && self.words[vertex / BITS] & (1u64 << (vertex % BITS)) != 0
    }

    /// Unpriced member count, for reports and tests.
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Unpriced emptiness check, for preconditions and tests.
    pub fn is_clear(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> Members<'_> {
        Members {
            set: self,
            word_index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    #[inline]
    fn check_universe(&self, other: &VertexSet) {
        assert_eq!(
            self.universe, other.universe,
            "universe mismatch: {} vs {}",
            self.universe, other.universe
        );
    }

    pub fn union(&self, other: &VertexSet, ctr: &OpCounter) -> VertexSet {
        let mut out = self.clone();
        out.union_in_place(other, ctr);
        out
    }

    pub fn union_in_place(&mut self, other: &VertexSet, ctr: &OpCounter) {
        self.check_universe(other);
        ctr.record_set_op();
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a |= b;
        }
    }

    pub fn intersect(&self, other: &VertexSet, ctr: &OpCounter) -> VertexSet {
        let mut out = self.clone();
        out.intersect_in_place(other, ctr);
        out
    }

    pub fn intersect_in_place(&mut self, other: &VertexSet, ctr: &OpCounter) {
        self.check_universe(other);
        ctr.record_set_op();
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a &= b;
        }
    }

    pub fn minus(&self, other: &VertexSet, ctr: &OpCounter) -> VertexSet {
        let mut out = self.clone();
        out.minus_in_place(other, ctr);
        out
    }

    pub fn minus_in_place(&mut self, other: &VertexSet, ctr: &OpCounter) {
        self.check_universe(other);
        ctr.record_set_op();
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a &= !b;
        }
    }

    pub fn complement(&self, ctr: &OpCounter) -> VertexSet {
        ctr.record_set_op();
        let mut words: Box<[u64]> = self.words.iter().map(|w| !w).collect();
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(self.universe);
        }
        VertexSet {
            universe: self.universe,
            words,
        }
    }

    pub fn is_subset(&self, other: &VertexSet, ctr: &OpCounter) -> bool {
        self.check_universe(other);
        ctr.record_set_op();
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn set_eq(&self, other: &VertexSet, ctr: &OpCounter) -> bool {
        self.check_universe(other);
        ctr.record_set_op();
        self.words == other.words
    }

    pub fn is_empty(&self, ctr: &OpCounter) -> bool {
        ctr.record_set_op();
        self.is_clear()
    }

    pub fn cardinality(&self, ctr: &OpCounter) -> usize {
        ctr.record_set_op();
        self.count()
    }

    /// Deterministic pick: the smallest member index.
    pub fn pick_min(&self, ctr: &OpCounter) -> Result<usize, Error> {
        ctr.record_set_op();
        for (i, &word) in self.words.iter().enumerate() {
            if word != 0 {
                return Ok(i * BITS + word.trailing_zeros() as usize);
            }
        }
        Err(Error::EmptyPick)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Iterator over the members of a [`VertexSet`] in ascending order.
pub struct Members<'a> {
    set: &'a VertexSet,
    word_index: usize,
    current: u64,
}

impl Iterator for Members<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.word_index * BITS + bit);
            }
            self.word_index += 1;
            if self.word_index >= self.set.words.len() {
                return None;
            }
            self.current = self.set.words[self.word_index];
        }
    }
}

/// Immutable directed graph over a fixed universe, stored as a dense
/// adjacency bit matrix together with its materialized transpose so that
/// `post` and `pre` are symmetric row scans.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    row_words: usize,
    succ: Box<[u64]>,
    pred: Box<[u64]>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Graph, Error> {
        if n == 0 {
            return Err(Error::InvalidParameter {
                name: "n",
                message: "graph needs at least one vertex".into(),
            });
        }
        let row_words = words_for(n);
        let mut succ = vec![0u64; n * row_words].into_boxed_slice();
        let mut pred = vec![0u64; n * row_words].into_boxed_slice();
        for &(u, v) in edges {
            let bad = if u >= n { Some(u) } else if v >= n { Some(v) } else { None };
            if let Some(vertex) = bad {
                return Err(Error::VertexOutOfRange {
                    vertex,
                    universe: n,
                });
            }
            succ[u * row_words + v / BITS] |= 1u64 << (v % BITS);
            pred[v * row_words + u / BITS] |= 1u64 << (u % BITS);
        }
        Ok(Graph {
            n,
            row_words,
            succ,
            pred,
        })
    }

    /// Builds an undirected graph by storing every edge in both directions.
    pub fn undirected(n: usize, edges: &[(usize, usize)]) -> Result<Graph, Error> {
        let mut both = Vec::with_capacity(edges.len() * 2);
        for &(u, v) in edges {
            both.push((u, v));
            both.push((v, u));
        }
        Graph::new(n, &both)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.succ[u * self.row_words + v / BITS] & (1 << (v % BITS)) != 0
    }

    pub fn successors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.row_members(&self.succ, u)
    }

    pub fn predecessors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.row_members(&self.pred, v)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.successors(u) {
                out.push((u, v));
            }
        }
        out
    }

    /// Graph with every edge reversed; `pre` on the original equals `post`
    /// on the transpose.
    pub fn transpose(&self) -> Graph {
        Graph {
            n: self.n,
            row_words: self.row_words,
            succ: self.pred.clone(),
            pred: self.succ.clone(),
        }
    }

    fn row_members<'a>(&'a self, rows: &'a [u64], u: usize) -> impl Iterator<Item = usize> + 'a {
        assert!(u < self.n, "vertex {u} out of range");
        let row = &rows[u * self.row_words..(u + 1) * self.row_words];
        row.iter().enumerate().flat_map(|(wi, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * BITS + b)
            })
        })
    }

    /// One-step successors of `set`, `{v | exists s in set with (s, v) an
    /// edge}`, confined to the mask's domain on both sides when given.
    pub fn post(
        &self,
        set: &VertexSet,
        mask: Option<Mask<'_>>,
        ctr: &OpCounter,
    ) -> Result<VertexSet, Error> {
        self.image(StepKind::Post, set, mask, ctr)
    }

    /// One-step predecessors of `set`, `{v | exists s in set with (v, s) an
    /// edge}`, confined to the mask's domain on both sides when given.
    pub fn pre(
        &self,
        set: &VertexSet,
        mask: Option<Mask<'_>>,
        ctr: &OpCounter,
    ) -> Result<VertexSet, Error> {
        self.image(StepKind::Pre, set, mask, ctr)
    }

    fn image(
        &self,
        kind: StepKind,
        set: &VertexSet,
        mask: Option<Mask<'_>>,
        ctr: &OpCounter,
    ) -> Result<VertexSet, Error> {
        if set.universe != self.n {
            return Err(Error::UniverseMismatch {
                expected: self.n,
                found: set.universe,
            });
        }
        if let Some(m) = mask {
            if m.domain.universe != self.n {
                return Err(Error::UniverseMismatch {
                    expected: self.n,
                    found: m.domain.universe,
                });
            }
        }
        ctr.record_one_step();
        ctr.notify(kind, set, mask.map(|m| m.domain));
        let rows = match kind {
            StepKind::Post => &self.succ,
            StepKind::Pre => &self.pred,
        };
        let mut out = vec![0u64; self.row_words].into_boxed_slice();
        for wi in 0..self.row_words {
            let mut bits = set.words[wi];
            if let Some(m) = mask {
                bits &= m.domain.words[wi];
            }
            while bits != 0 {
                let v = wi * BITS + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let row = &rows[v * self.row_words..(v + 1) * self.row_words];
                for (o, r) in out.iter_mut().zip(row.iter()) {
                    *o |= r;
                }
            }
        }
        let mut result = VertexSet {
            universe: self.n,
            words: out,
        };
        if let Some(m) = mask {
            result.intersect_in_place(m.domain, ctr);
        }
        Ok(result)
    }

    /// Symbolic forward BFS from `source`: the union of all BFS levels plus
    /// the index of the last non-empty level. Uses exactly `depth + 1`
    /// one-step operations, the fixpoint-detecting call included.
    pub fn forward_search(
        &self,
        source: &VertexSet,
        mask: Option<Mask<'_>>,
        ctr: &OpCounter,
    ) -> Result<(VertexSet, usize), Error> {
        self.level_search(StepKind::Post, source, mask, ctr)
    }

    /// Symbolic backward BFS from `source`; the `pre` twin of
    /// [`Graph::forward_search`].
    pub fn backward_search(
        &self,
        source: &VertexSet,
        mask: Option<Mask<'_>>,
        ctr: &OpCounter,
    ) -> Result<(VertexSet, usize), Error> {
        self.level_search(StepKind::Pre, source, mask, ctr)
    }

    fn level_search(
        &self,
        kind: StepKind,
        source: &VertexSet,
        mask: Option<Mask<'_>>,
        ctr: &OpCounter,
    ) -> Result<(VertexSet, usize), Error> {
        if source.universe != self.n {
            return Err(Error::UniverseMismatch {
                expected: self.n,
                found: source.universe,
            });
        }
        let start = match mask {
            Some(m) => {
                if m.domain.universe != self.n {
                    return Err(Error::UniverseMismatch {
                        expected: self.n,
                        found: m.domain.universe,
                    });
                }
                source.intersect(m.domain, ctr)
            }
            None => source.clone(),
        };
        if start.is_clear() {
            return Err(Error::EmptySource);
        }
        let mut reached = Tracked::new(start, ctr);
        let mut frontier = Tracked::new(reached.clone(), ctr);
        let mut depth = 0;
        loop {
            let img = self.image(kind, &frontier, mask, ctr)?;
            let fresh = img.minus(&reached, ctr);
            if fresh.is_empty(ctr) {
                break;
            }
            reached.union_in_place(&fresh, ctr);
            *frontier = fresh;
            depth += 1;
        }
        Ok((reached.into_inner(), depth))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edge_count())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn chain(n: usize) -> Graph {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Graph::new(n, &edges).unwrap()
    }

    #[test]
    fn set_algebra_matches_naive_model() {
        let ctr = OpCounter::new();
        let a = VertexSet::from_indices(70, [0, 3, 64, 69]);
        let b = VertexSet::from_indices(70, [3, 5, 69]);
        assert_eq!(
            a.union(&b, &ctr).iter().collect::<Vec<_>>(),
            vec![0, 3, 5, 64, 69]
        );
        assert_eq!(a.intersect(&b, &ctr).iter().collect::<Vec<_>>(), vec![3, 69]);
        assert_eq!(a.minus(&b, &ctr).iter().collect::<Vec<_>>(), vec![0, 64]);
        assert_eq!(a.complement(&ctr).count(), 70 - 4);
        assert!(!a.complement(&ctr).contains(64));
        assert!(b.minus(&a, &ctr).is_subset(&b, &ctr));
        assert!(!a.is_subset(&b, &ctr));
        assert!(a.set_eq(&a.clone(), &ctr));
        assert_eq!(a.cardinality(&ctr), 4);
        assert_eq!(a.pick_min(&ctr), Ok(0));
        assert_eq!(VertexSet::empty(70).pick_min(&ctr), Err(Error::EmptyPick));
    }

    #[test]
    fn every_set_operation_costs_one() {
        let ctr = OpCounter::new();
        let a = VertexSet::from_indices(10, [1, 2]);
        let b = VertexSet::from_indices(10, [2, 3]);
        let _ = a.union(&b, &ctr);
        let _ = a.intersect(&b, &ctr);
        let _ = a.minus(&b, &ctr);
        let _ = a.complement(&ctr);
        let _ = a.is_subset(&b, &ctr);
        let _ = a.set_eq(&b, &ctr);
        let _ = a.is_empty(&ctr);
        let _ = a.cardinality(&ctr);
        let _ = a.pick_min(&ctr);
        assert_eq!(ctr.set_ops(), 9);
        assert_eq!(ctr.one_step(), 0);
    }

    #[test]
    #[should_panic(expected = "universe mismatch")]
    fn mismatched_universes_violate_the_contract() {
        let ctr = OpCounter::new();
        let a = VertexSet::empty(4);
        let b = VertexSet::empty(5);
        let _ = a.union(&b, &ctr);
    }

    #[test]
    fn complement_of_full_is_empty_at_word_boundaries() {
        let ctr = OpCounter::new();
        for n in [1, 63, 64, 65, 128] {
            let full = VertexSet::full(n);
            assert_eq!(full.count(), n);
            assert!(full.complement(&ctr).is_clear());
        }
    }

    #[test]
    fn post_and_pre_follow_the_edge_relation() {
        let ctr = OpCounter::new();
        let g = Graph::new(4, &[(0, 1), (1, 2), (3, 3)]).unwrap();
        let s = VertexSet::from_indices(4, [0, 3]);
        let post = g.post(&s, None, &ctr).unwrap();
        assert_eq!(post.iter().collect::<Vec<_>>(), vec![1, 3]);
        let pre = g.pre(&VertexSet::from_indices(4, [2, 3]), None, &ctr).unwrap();
        assert_eq!(pre.iter().collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(ctr.one_step(), 2);
    }

    #[test]
    fn masked_image_stays_in_domain_and_costs_one_extra_set_op() {
        let ctr = OpCounter::new();
        let g = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let domain = VertexSet::from_indices(5, [0, 1, 2]);
        let s = VertexSet::from_indices(5, [2, 3]);
        let before = (ctr.one_step(), ctr.set_ops());
        let post = g.post(&s, Some(Mask::new(&domain)), &ctr).unwrap();
        assert_eq!(ctr.one_step(), before.0 + 1);
        assert_eq!(ctr.set_ops(), before.1 + 1);
        // vertex 3 is outside the domain, so only the edge 2 -> 3 could
        // leave it and the image must be empty.
        assert!(post.is_clear());
        let post = g
            .post(&VertexSet::from_indices(5, [0, 1]), Some(Mask::new(&domain)), &ctr)
            .unwrap();
        assert_eq!(post.iter().collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn image_universe_mismatch_is_an_error() {
        let ctr = OpCounter::new();
        let g = Graph::new(3, &[(0, 1)]).unwrap();
        let s = VertexSet::empty(4);
        assert!(matches!(
            g.post(&s, None, &ctr),
            Err(Error::UniverseMismatch { expected: 3, found: 4 })
        ));
        let s = VertexSet::empty(3);
        let d = VertexSet::empty(4);
        assert!(matches!(
            g.pre(&s, Some(Mask::new(&d)), &ctr),
            Err(Error::UniverseMismatch { .. })
        ));
    }

    #[test]
    fn forward_search_uses_depth_plus_one_steps() {
        let ctr = OpCounter::new();
        let g = chain(5);
        let (fw, depth) = g
            .forward_search(&VertexSet::singleton(5, 0), None, &ctr)
            .unwrap();
        assert_eq!(depth, 4);
        assert_eq!(fw.count(), 5);
        assert_eq!(ctr.one_step(), 5);
    }

    #[test]
    fn isolated_vertex_has_depth_zero_and_one_step() {
        let ctr = OpCounter::new();
        let g = Graph::new(3, &[(1, 2)]).unwrap();
        let (fw, depth) = g
            .forward_search(&VertexSet::singleton(3, 0), None, &ctr)
            .unwrap();
        assert_eq!((fw.count(), depth), (1, 0));
        assert_eq!(ctr.one_step(), 1);
    }

    #[test]
    fn backward_search_mirrors_forward_on_the_transpose() {
        let ctr = OpCounter::new();
        let g = Graph::new(6, &[(0, 1), (1, 2), (4, 2), (5, 4), (2, 0)]).unwrap();
        let t = g.transpose();
        let src = VertexSet::singleton(6, 2);
        let (bw, db) = g.backward_search(&src, None, &ctr).unwrap();
        let (fw, df) = t.forward_search(&src, None, &ctr).unwrap();
        assert_eq!(bw, fw);
        assert_eq!(db, df);
    }

    #[test]
    fn empty_source_is_rejected() {
        let ctr = OpCounter::new();
        let g = chain(3);
        assert_eq!(
            g.forward_search(&VertexSet::empty(3), None, &ctr).unwrap_err(),
            Error::EmptySource
        );
        // A source disjoint from the mask domain is empty as well.
        let domain = VertexSet::singleton(3, 2);
        assert_eq!(
            g.forward_search(&VertexSet::singleton(3, 0), Some(Mask::new(&domain)), &ctr)
                .unwrap_err(),
            Error::EmptySource
        );
    }

    #[test]
    fn tracked_sets_drive_the_peak() {
        let ctr = OpCounter::new();
        {
            let _a = Tracked::new(VertexSet::empty(8), &ctr);
            {
                let b = Tracked::new(VertexSet::empty(8), &ctr);
                assert_eq!(ctr.live_sets(), 2);
                let _ = b.into_inner();
                assert_eq!(ctr.live_sets(), 1);
            }
            let _c = Tracked::new(VertexSet::empty(8), &ctr);
            let _d = Tracked::new(VertexSet::empty(8), &ctr);
        }
        assert_eq!(ctr.live_sets(), 0);
        assert_eq!(ctr.peak_sets(), 3);
    }

    proptest! {
        #[test]
        fn post_is_the_existential_image(
            n in 1usize..40,
            edges in proptest::collection::vec((0usize..40, 0usize..40), 0..120),
            seed in proptest::collection::vec(0usize..40, 0..10),
        ) {
            let edges: Vec<_> = edges
                .into_iter()
                .map(|(u, v)| (u % n, v % n))
                .collect();
            let g = Graph::new(n, &edges).unwrap();
            let s = VertexSet::from_indices(n, seed.into_iter().map(|v| v % n));
            let ctr = OpCounter::new();
            let post = g.post(&s, None, &ctr).unwrap();
            for v in 0..n {
                let expect = s.iter().any(|u| g.has_edge(u, v));
                prop_assert_eq!(post.contains(v), expect);
            }
            let pre = g.pre(&s, None, &ctr).unwrap();
            let tpost = g.transpose().post(&s, None, &ctr).unwrap();
            prop_assert_eq!(pre, tpost);
        }

        #[test]
        fn images_distribute_over_union(
            n in 1usize..30,
            edges in proptest::collection::vec((0usize..30, 0usize..30), 0..90),
            a in proptest::collection::vec(0usize..30, 0..8),
            b in proptest::collection::vec(0usize..30, 0..8),
        ) {
            let edges: Vec<_> = edges
                .into_iter()
                .map(|(u, v)| (u % n, v % n))
                .collect();
            let g = Graph::new(n, &edges).unwrap();
            let ctr = OpCounter::new();
            let sa = VertexSet::from_indices(n, a.into_iter().map(|v| v % n));
            let sb = VertexSet::from_indices(n, b.into_iter().map(|v| v % n));
            let joint = g.post(&sa.union(&sb, &ctr), None, &ctr).unwrap();
            let split = g
                .post(&sa, None, &ctr)
                .unwrap()
                .union(&g.post(&sb, None, &ctr).unwrap(), &ctr);
            prop_assert_eq!(joint, split);
        }
    }
}
