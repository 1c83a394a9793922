//! Persistent monotonic interval families.
//!
//! A family is monotonic when no interval contains another, so sorting by
//! left endpoints also sorts by right endpoints. Families are stored in an
//! immutable join-based treap. Every node keeps its left endpoint `a` and its
//! length `ℓ` as differences from its parent, which makes `shift` and
//! `extend` O(1): they only touch the context above the root. All other
//! updates copy the O(log m) nodes they touch, so every earlier version stays
//! readable.

use std::cell::Cell as StdCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Sub};
use std::sync::Arc;

use thiserror::Error;

use crate::weight::{Rational, Weight};

/// A point of the extended line: `inf·Ω + fin` where `Ω` exceeds every
/// finite weight. Only `+∞` right endpoints use it.
///
/// Points whose coordinates are all `i64` integers are stored inline, which
/// keeps the treap's per-node arithmetic free of branches into `Rational`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Coord(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// `[inf, a, b, c]`.
    Small([i64; 4]),
    /// Only used when some coordinate is not a small integer.
    Big { inf: i64, fin: Weight },
}

impl Default for Coord {
    fn default() -> Self {
        Coord(Repr::Small([0; 4]))
    }
}

impl Coord {
    pub fn finite(w: Weight) -> Self {
        Self::from_parts(0, w)
    }

    pub fn pos_inf() -> Self {
        Coord(Repr::Small([1, 0, 0, 0]))
    }

    pub fn neg_inf() -> Self {
        Coord(Repr::Small([-1, 0, 0, 0]))
    }

    fn from_parts(inf: i64, w: Weight) -> Self {
        match (&w.a, &w.b, &w.c) {
            (Rational::Int(a), Rational::Int(b), Rational::Int(c)) => Coord(Repr::Small([inf, *a, *b, *c])),
            _ => Coord(Repr::Big { inf, fin: w }),
        }
    }

    fn parts(&self) -> (i64, Weight) {
        match &self.0 {
            Repr::Small([inf, a, b, c]) => (*inf, Weight::new(Rational::Int(*a), Rational::Int(*b), Rational::Int(*c))),
            Repr::Big { inf, fin } => (*inf, fin.clone()),
        }
    }

    fn inf(&self) -> i64 {
        match &self.0 {
            Repr::Small(x) => x[0],
            Repr::Big { inf, .. } => *inf,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.inf() == 0
    }

    /// Infinite coordinates compare equal regardless of their finite part.
    #[inline]
    fn normalized(self) -> Self {
        match self.inf() {
            0 => self,
            i => Coord(Repr::Small([i.signum(), 0, 0, 0])),
        }
    }

    /// The finite value, or `None` at `±∞`.
    pub fn to_finite(&self) -> Option<Weight> {
        self.is_finite().then(|| self.parts().1)
    }

    #[inline]
    fn combine(&self, rhs: &Coord, sign: i64) -> Coord {
        if let (Repr::Small(x), Repr::Small(y)) = (&self.0, &rhs.0) {
            let mut out = [0i64; 4];
            let mut ok = true;
            for i in 0..4 {
                match y[i].checked_mul(sign).and_then(|t| x[i].checked_add(t)) {
                    Some(v) => out[i] = v,
                    None => ok = false,
                }
            }
            if ok {
                return Coord(Repr::Small(out));
            }
        }
        self.combine_slow(rhs, sign)
    }

    #[cold]
    fn combine_slow(&self, rhs: &Coord, sign: i64) -> Coord {
        let (xi, xw) = self.parts();
        let (yi, yw) = rhs.parts();
        if sign > 0 {
            Self::from_parts(xi + yi, &xw + &yw)
        } else {
            Self::from_parts(xi - yi, &xw - &yw)
        }
    }
}

impl Ord for Coord {
    #[inline]
    fn cmp(&self, other: &Self) -> Ordering {
        if let (Repr::Small(x), Repr::Small(y)) = (&self.0, &other.0) {
            return x.cmp(y);
        }
        self.parts().cmp(&other.parts())
    }
}

impl PartialOrd for Coord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Weight> for Coord {
    fn from(w: Weight) -> Self {
        Coord::finite(w)
    }
}

impl Add for &Coord {
    type Output = Coord;
    #[inline]
    fn add(self, rhs: &Coord) -> Coord {
        self.combine(rhs, 1)
    }
}

impl Sub for &Coord {
    type Output = Coord;
    #[inline]
    fn sub(self, rhs: &Coord) -> Coord {
        self.combine(rhs, -1)
    }
}

impl fmt::Debug for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (inf, fin) = self.parts();
        match inf.cmp(&0) {
            Ordering::Greater => write!(f, "+inf"),
            Ordering::Less => write!(f, "-inf"),
            Ordering::Equal => write!(f, "{fin}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Endpoint {
    pub value: Coord,
    pub closed: bool,
}

/// A nonempty interval with open or closed ends.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub left: Endpoint,
    pub right: Endpoint,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.left.closed { '[' } else { '(' };
        let r = if self.right.closed { ']' } else { ')' };
        write!(f, "{l}{:?},{:?}{r}", self.left.value, self.right.value)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StoreError {
    #[error("interval would be nested with an existing one")]
    Nested,
    #[error("interval not present")]
    Absent,
    #[error("families are not in left-to-right order")]
    OrderViolation,
    #[error("empty interval")]
    EmptyInterval,
}

/// Endpoint key: the value plus a side-aware offset. Left ends use 0
/// (closed) or +1 (open); right ends use 0 (closed) or -1 (open). An
/// interval is nonempty iff its left key is at most its right key, and two
/// intervals meet iff the larger left key is at most the smaller right key.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct Key {
    v: Coord,
    off: i8,
}

impl Interval {
    /// Infinite ends are always stored as open.
    pub fn new(mut left: Endpoint, mut right: Endpoint) -> Result<Self, StoreError> {
        left.closed &= left.value.is_finite();
        right.closed &= right.value.is_finite();
        let i = Interval { left, right };
        if i.lkey() <= i.rkey() {
            Ok(i)
        } else {
            Err(StoreError::EmptyInterval)
        }
    }

    fn with(a: Weight, lc: bool, b: Weight, rc: bool) -> Result<Self, StoreError> {
        Interval::new(Endpoint { value: a.into(), closed: lc }, Endpoint { value: b.into(), closed: rc })
    }

    /// `[a, b]`. Panics if `a > b`.
    pub fn closed(a: Weight, b: Weight) -> Self {
        Interval::with(a, true, b, true).expect("empty closed interval")
    }

    /// `(a, b)`. Panics if `a >= b`.
    pub fn open(a: Weight, b: Weight) -> Self {
        Interval::with(a, false, b, false).expect("empty open interval")
    }

    pub fn point(x: Weight) -> Self {
        Interval::closed(x.clone(), x)
    }

    /// `(x, +∞)`.
    pub fn above(x: Weight) -> Self {
        Interval {
            left: Endpoint { value: x.into(), closed: false },
            right: Endpoint { value: Coord::pos_inf(), closed: false },
        }
    }

    fn lkey(&self) -> Key {
        Key { v: self.left.value.clone().normalized(), off: if self.left.closed { 0 } else { 1 } }
    }

    fn rkey(&self) -> Key {
        let v = self.right.value.clone().normalized();
        let off = if self.right.closed && v.is_finite() { 0 } else { -1 };
        Key { v, off }
    }

    fn from_keys(l: Key, r: Key) -> Self {
        Interval {
            left: Endpoint { closed: l.off == 0 && l.v.is_finite(), value: l.v },
            right: Endpoint { closed: r.off == 0 && r.v.is_finite(), value: r.v },
        }
    }

    pub fn contains_point(&self, y: &Weight) -> bool {
        let k = Key { v: Coord::finite(y.clone()), off: 0 };
        self.lkey() <= k && k <= self.rkey()
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lkey().max(other.lkey()) <= self.rkey().min(other.rkey())
    }

    /// True iff `other ⊆ self`.
    pub fn contains(&self, other: &Interval) -> bool {
        self.lkey() <= other.lkey() && other.rkey() <= self.rkey()
    }

    pub fn intersection(&self, other: &Interval) -> Option<Interval> {
        let l = self.lkey().max(other.lkey());
        let r = self.rkey().min(other.rkey());
        (l <= r).then(|| Interval::from_keys(l, r))
    }
}

/// How `extend` treats endpoint closedness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndpointPolicy {
    Keep,
    Open,
    Closed,
}

type Link = Option<Arc<Node>>;

struct Node {
    a: Coord,
    len: Coord,
    lo: i8,
    ro: i8,
    /// Closedness imposed on the whole subtree, overriding the nodes below.
    over: Option<(i8, i8)>,
    prio: u64,
    size: usize,
    left: Link,
    right: Link,
}

/// Absolute values of the parent of a subtree.
#[derive(Clone, Default)]
struct Ctx {
    a: Coord,
    len: Coord,
    over: Option<(i8, i8)>,
}

#[derive(Clone, Default)]
struct View {
    link: Link,
    ctx: Ctx,
}

/// A materialized interval.
#[derive(Clone, Debug)]
struct Item {
    a: Coord,
    len: Coord,
    lo: i8,
    ro: i8,
    prio: u64,
}

impl Item {
    fn lkey(&self) -> Key {
        Key { v: self.a.clone(), off: self.lo }
    }

    fn rkey(&self) -> Key {
        let v = (&self.a + &self.len).normalized();
        let off = if v.is_finite() { self.ro } else { -1 };
        Key { v, off }
    }

    fn from_keys(l: Key, r: Key, prio: u64) -> Self {
        let len = &r.v - &l.v;
        Item { a: l.v, len, lo: l.off, ro: r.off, prio }
    }

    fn from_interval(i: &Interval) -> Self {
        Item::from_keys(i.lkey(), i.rkey(), next_prio())
    }

    fn interval(&self) -> Interval {
        Interval::from_keys(self.lkey(), self.rkey())
    }

    fn contains(&self, other: &Item) -> bool {
        self.lkey() <= other.lkey() && other.rkey() <= self.rkey()
    }
}

thread_local! {
    static PRIO: StdCell<u64> = const { StdCell::new(0x9E37_79B9_7F4A_7C15) };
}

fn next_prio() -> u64 {
    PRIO.with(|s| {
        let mut z = s.get().wrapping_add(0x9E37_79B9_7F4A_7C15);
        s.set(z);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    })
}

fn size(link: &Link) -> usize {
    link.as_ref().map_or(0, |n| n.size)
}

fn expose(v: &View) -> (Item, View, View) {
    let n = v.link.as_ref().expect("expose on empty view");
    let a = &v.ctx.a + &n.a;
    let len = &v.ctx.len + &n.len;
    let over = v.ctx.over.or(n.over);
    let (lo, ro) = over.unwrap_or((n.lo, n.ro));
    let ctx = Ctx { a: a.clone(), len: len.clone(), over };
    let left = View { link: n.left.clone(), ctx: ctx.clone() };
    let right = View { link: n.right.clone(), ctx };
    (Item { a, len, lo, ro, prio: n.prio }, left, right)
}

/// Re-expresses the root of `v` relative to a parent holding `parent`.
fn attach(v: View, parent: &Item) -> Link {
    let n = v.link?;
    if v.ctx.over.is_none() && v.ctx.a == parent.a && v.ctx.len == parent.len {
        return Some(n);
    }
    let a = &(&v.ctx.a + &n.a) - &parent.a;
    let len = &(&v.ctx.len + &n.len) - &parent.len;
    Some(Arc::new(Node {
        a,
        len,
        lo: n.lo,
        ro: n.ro,
        over: v.ctx.over.or(n.over),
        prio: n.prio,
        size: n.size,
        left: n.left.clone(),
        right: n.right.clone(),
    }))
}

fn make(item: Item, l: View, r: View, base: &Ctx) -> View {
    let left = attach(l, &item);
    let right = attach(r, &item);
    let node = Node {
        a: &item.a - &base.a,
        len: &item.len - &base.len,
        lo: item.lo,
        ro: item.ro,
        over: None,
        prio: item.prio,
        size: 1 + size(&left) + size(&right),
        left,
        right,
    };
    View { link: Some(Arc::new(node)), ctx: Ctx { a: base.a.clone(), len: base.len.clone(), over: None } }
}

fn single(item: Item) -> View {
    make(item, View::default(), View::default(), &Ctx::default())
}

/// Splits into (items satisfying `go_left`, the rest). `go_left` must hold
/// on a prefix of the order.
fn split(v: &View, go_left: &mut impl FnMut(&Item) -> bool) -> (View, View) {
    if v.link.is_none() {
        return (View::default(), View::default());
    }
    let (item, l, r) = expose(v);
    let base = Ctx { a: v.ctx.a.clone(), len: v.ctx.len.clone(), over: None };
    if go_left(&item) {
        let (rl, rr) = split(&r, go_left);
        (make(item, l, rl, &base), rr)
    } else {
        let (ll, lr) = split(&l, go_left);
        (ll, make(item, lr, r, &base))
    }
}

/// Concatenates two views; every item of `l` must precede every item of `r`.
fn join(l: View, r: View) -> View {
    let (lp, rp) = match (&l.link, &r.link) {
        (None, _) => return r,
        (_, None) => return l,
        (Some(a), Some(b)) => (a.prio, b.prio),
    };
    if lp > rp {
        let base = Ctx { a: l.ctx.a.clone(), len: l.ctx.len.clone(), over: None };
        let (item, ll, lr) = expose(&l);
        let nr = join(lr, r);
        make(item, ll, nr, &base)
    } else {
        let base = Ctx { a: r.ctx.a.clone(), len: r.ctx.len.clone(), over: None };
        let (item, rl, rr) = expose(&r);
        let nl = join(l, rl);
        make(item, nl, rr, &base)
    }
}

/// Leftmost item satisfying `pred`, which must hold on a suffix of the order.
fn first_where(v: &View, mut pred: impl FnMut(&Item) -> bool) -> Option<Item> {
    let mut cur = v.clone();
    let mut best = None;
    while cur.link.is_some() {
        let (item, l, r) = expose(&cur);
        if pred(&item) {
            best = Some(item);
            cur = l;
        } else {
            cur = r;
        }
    }
    best
}

fn first(v: &View) -> Option<Item> {
    first_where(v, |_| true)
}

fn last(v: &View) -> Option<Item> {
    let mut cur = v.clone();
    let mut best = None;
    while cur.link.is_some() {
        let (item, _, r) = expose(&cur);
        best = Some(item);
        cur = r;
    }
    best
}

fn collect(v: &View, out: &mut Vec<Item>) {
    if v.link.is_none() {
        return;
    }
    let (item, l, r) = expose(v);
    collect(&l, out);
    out.push(item);
    collect(&r, out);
}

fn pop_last(v: &View) -> View {
    let k = last(v).map(|i| i.lkey());
    split(v, &mut |it| Some(it.lkey()) < k).0
}

fn pop_first(v: &View) -> View {
    let k = first(v).map(|i| i.lkey());
    split(v, &mut |it| Some(it.lkey()) <= k).1
}

/// Joins two monotonic views whose orders line up, dropping intervals at the
/// seam that are contained in their neighbour. Union is preserved.
fn join_dedup(mut l: View, mut r: View) -> View {
    while let (Some(a), Some(b)) = (last(&l), first(&r)) {
        if b.contains(&a) {
            l = pop_last(&l);
        } else if a.contains(&b) {
            r = pop_first(&r);
        } else {
            debug_assert!(a.lkey() < b.lkey() && a.rkey() < b.rkey(), "seam out of order");
            break;
        }
    }
    join(l, r)
}

fn build(items: &[Item]) -> View {
    // Cartesian tree over the given order with the items' priorities.
    let m = items.len();
    let mut lc = vec![usize::MAX; m];
    let mut rc = vec![usize::MAX; m];
    let mut stack: Vec<usize> = Vec::new();
    for i in 0..m {
        let mut last_popped = usize::MAX;
        while let Some(&t) = stack.last() {
            if items[t].prio < items[i].prio {
                last_popped = stack.pop().unwrap();
            } else {
                break;
            }
        }
        lc[i] = last_popped;
        if let Some(&t) = stack.last() {
            rc[t] = i;
        }
        stack.push(i);
    }
    fn rec(i: usize, items: &[Item], lc: &[usize], rc: &[usize], base: &Ctx) -> View {
        if i == usize::MAX {
            return View::default();
        }
        let here = Ctx { a: items[i].a.clone(), len: items[i].len.clone(), over: None };
        let l = rec(lc[i], items, lc, rc, &here);
        let r = rec(rc[i], items, lc, rc, &here);
        make(items[i].clone(), l, r, base)
    }
    match stack.first() {
        Some(&root) => rec(root, items, &lc, &rc, &Ctx::default()),
        None => View::default(),
    }
}

/// A persistent monotonic family of intervals. Cloning is O(1) and yields
/// an independent version.
#[derive(Clone, Default)]
pub struct MonotonicFamily {
    view: View,
}

impl fmt::Debug for MonotonicFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.report()).finish()
    }
}

impl MonotonicFamily {
    pub fn new() -> Self {
        Self::default()
    }

    fn wrap(view: View) -> Self {
        MonotonicFamily { view }
    }

    /// Builds a family from intervals sorted by left endpoint.
    pub fn from_sorted(intervals: &[Interval]) -> Result<Self, StoreError> {
        for w in intervals.windows(2) {
            if !(w[0].lkey() < w[1].lkey() && w[0].rkey() < w[1].rkey()) {
                return Err(StoreError::OrderViolation);
            }
        }
        let items: Vec<Item> = intervals.iter().map(Item::from_interval).collect();
        Ok(Self::wrap(build(&items)))
    }

    /// Family of zero-length intervals `[x, x]`; `points` must be sorted and
    /// free of duplicates.
    pub fn from_points(points: &[Weight]) -> Result<Self, StoreError> {
        let ivs: Vec<Interval> = points.iter().cloned().map(Interval::point).collect();
        Self::from_sorted(&ivs)
    }

    pub fn singleton(i: Interval) -> Self {
        Self::wrap(single(Item::from_interval(&i)))
    }

    pub fn len(&self) -> usize {
        size(&self.view.link)
    }

    pub fn is_empty(&self) -> bool {
        self.view.link.is_none()
    }

    /// O(1) version capture.
    pub fn copy(&self) -> Self {
        self.clone()
    }

    pub fn report(&self) -> Vec<Interval> {
        let mut items = Vec::with_capacity(self.len());
        collect(&self.view, &mut items);
        items.iter().map(Item::interval).collect()
    }

    pub fn first(&self) -> Option<Interval> {
        first(&self.view).map(|i| i.interval())
    }

    pub fn last(&self) -> Option<Interval> {
        last(&self.view).map(|i| i.interval())
    }

    pub fn insert(&self, i: Interval) -> Result<Self, StoreError> {
        let lk = i.lkey();
        let rk = i.rkey();
        let (l, r) = split(&self.view, &mut |it| it.lkey() < lk);
        if let Some(p) = last(&l) {
            if p.rkey() >= rk {
                return Err(StoreError::Nested);
            }
        }
        if let Some(s) = first(&r) {
            if s.lkey() == lk || s.rkey() <= rk {
                return Err(StoreError::Nested);
            }
        }
        Ok(Self::wrap(join(join(l, single(Item::from_interval(&i))), r)))
    }

    pub fn delete(&self, i: &Interval) -> Result<Self, StoreError> {
        let lk = i.lkey();
        let (l, rest) = split(&self.view, &mut |it| it.lkey() < lk);
        let (m, r) = split(&rest, &mut |it| it.lkey() <= lk);
        match first(&m) {
            Some(it) if it.rkey() == i.rkey() => Ok(Self::wrap(join(l, r))),
            _ => Err(StoreError::Absent),
        }
    }

    /// Some member meeting `j`, namely the leftmost one.
    pub fn first_hit(&self, j: &Interval) -> Option<Interval> {
        let jl = j.lkey();
        let it = first_where(&self.view, |it| it.rkey() >= jl)?;
        (it.lkey() <= j.rkey()).then(|| it.interval())
    }

    /// True iff some member meets `j`.
    pub fn hit_by(&self, j: &Interval) -> bool {
        self.first_hit(j).is_some()
    }

    pub fn contains_point(&self, y: &Weight) -> bool {
        self.hit_by(&Interval::point(y.clone()))
    }

    /// Splits into the members containing `y` and the others.
    pub fn containing(&self, y: &Weight) -> (Self, Self) {
        let yk = Key { v: Coord::finite(y.clone()), off: 0 };
        let (p, rest) = split(&self.view, &mut |it| it.rkey() < yk);
        let (h, s) = split(&rest, &mut |it| it.lkey() <= yk);
        (Self::wrap(h), Self::wrap(join(p, s)))
    }

    /// The family `{I ∩ j}`, with empty and dominated pieces removed. Only
    /// the union is guaranteed: `∪result = (∪self) ∩ j`.
    pub fn clip_inside(&self, j: &Interval) -> Self {
        let jl = j.lkey();
        let jr = j.rkey();
        if let (Some(f), Some(l)) = (first(&self.view), last(&self.view)) {
            if f.lkey() >= jl && l.rkey() <= jr {
                return self.clone();
            }
        }
        let (_, rest) = split(&self.view, &mut |it| it.rkey() < jl);
        let (mid, _) = split(&rest, &mut |it| it.lkey() <= jr);
        let (lx, rest2) = split(&mid, &mut |it| it.lkey() < jl);
        let (inside, rx) = split(&rest2, &mut |it| it.rkey() <= jr);
        let mut out = View::default();
        if let Some(p) = last(&lx) {
            let piece = Item::from_keys(jl.clone(), p.rkey().min(jr.clone()), next_prio());
            if p.rkey() >= jr {
                return Self::wrap(single(piece));
            }
            out = single(piece);
        }
        out = join_dedup(out, inside);
        if let Some(q) = first(&rx) {
            out = join_dedup(out, single(Item::from_keys(q.lkey(), jr, next_prio())));
        }
        Self::wrap(out)
    }

    /// Union-level restriction to several pieces at once:
    /// `∪result = (∪self) ∩ (∪pieces)`. `pieces` must be sorted and
    /// pairwise disjoint. One left-to-right sweep, a constant number of
    /// splits and joins per piece.
    pub fn clip_to_union(&self, pieces: &[Interval]) -> Self {
        let mut rest = self.view.clone();
        let mut out = View::default();
        for j in pieces {
            let jl = j.lkey();
            let jr = j.rkey();
            let (_, r) = split(&rest, &mut |it| it.rkey() < jl);
            let (mid, after) = split(&r, &mut |it| it.lkey() <= jr);
            // Members reaching past `j` may also meet later pieces.
            let (mid_in, tail) = split(&mid, &mut |it| it.rkey() <= jr);
            rest = join(tail.clone(), after);
            if let Some(t) = first(&tail) {
                if t.lkey() <= jl {
                    out = join_dedup(out, single(Item::from_keys(jl, jr, next_prio())));
                    continue;
                }
            }
            let (lx, inside) = split(&mid_in, &mut |it| it.lkey() < jl);
            if let Some(p) = last(&lx) {
                out = join_dedup(out, single(Item::from_keys(jl.clone(), p.rkey(), next_prio())));
            }
            out = join_dedup(out, inside);
            if let Some(q) = first(&tail) {
                out = join_dedup(out, single(Item::from_keys(q.lkey(), jr, next_prio())));
            }
        }
        Self::wrap(out)
    }

    /// Adds the points not yet present as `[y, y]` members. `points` must be
    /// sorted, and no member other than an equal point may contain one.
    pub fn insert_points(&self, points: &[Weight]) -> Self {
        let mut rest = self.view.clone();
        let mut out = View::default();
        for y in points {
            let yk = Key { v: Coord::finite(y.clone()), off: 0 };
            let (l, r) = split(&rest, &mut |it| it.lkey() < yk);
            out = join(out, l);
            rest = r;
            if first(&rest).is_some_and(|f| f.lkey() == yk) {
                continue;
            }
            out = join(out, single(Item::from_keys(yk.clone(), yk, next_prio())));
        }
        Self::wrap(join(out, rest))
    }

    /// `(F_in, F_out)` with `∪F_in = (∪F) ∩ j` and
    /// `∪F_out = (∪F) ∩ ((−∞, x] ∪ [y, +∞))` for `j = ⟨x, y⟩`.
    pub fn clip(&self, j: &Interval) -> (Self, Self) {
        let f_in = self.clip_inside(j);
        let cx = Key { v: j.left.value.clone(), off: 0 };
        let cy = Key { v: j.right.value.clone(), off: 0 };
        let (a, rest) = split(&self.view, &mut |it| it.rkey() <= cx);
        let (m, z) = split(&rest, &mut |it| it.lkey() < cy);
        let mut out = a;
        if let Some(f) = first(&m) {
            if f.lkey() <= cx {
                out = join_dedup(out, single(Item::from_keys(f.lkey(), cx.clone(), next_prio())));
            }
        }
        if let Some(l) = last(&m) {
            if l.rkey() >= cy {
                out = join_dedup(out, single(Item::from_keys(cy.clone(), l.rkey(), next_prio())));
            }
        }
        out = join_dedup(out, z);
        (f_in, Self::wrap(out))
    }

    /// Concatenation; `self` must precede `other` in monotonic order.
    pub fn join(&self, other: &Self) -> Result<Self, StoreError> {
        if let (Some(a), Some(b)) = (last(&self.view), first(&other.view)) {
            if !(a.lkey() < b.lkey() && a.rkey() < b.rkey()) {
                return Err(StoreError::OrderViolation);
            }
        }
        Ok(Self::wrap(join(self.view.clone(), other.view.clone())))
    }

    /// Concatenation that drops intervals contained in a neighbour at the
    /// seam. `self` must precede `other` apart from such containments.
    pub fn join_union(&self, other: &Self) -> Self {
        Self::wrap(join_dedup(self.view.clone(), other.view.clone()))
    }

    /// Every interval moved by `alpha`. O(1).
    pub fn shift(&self, alpha: &Weight) -> Self {
        let mut v = self.view.clone();
        v.ctx.a = &v.ctx.a + &Coord::finite(alpha.clone());
        Self::wrap(v)
    }

    /// Every `[a, b]` becomes `[a − λ, b + λ]`. O(1). Forcing closedness with
    /// `Open` or `Closed` keeps the family monotonic only when left
    /// endpoints are pairwise distinct in value, as in point families.
    pub fn extend(&self, lambda: &Weight, policy: EndpointPolicy) -> Self {
        let mut v = self.view.clone();
        let l = Coord::finite(lambda.clone());
        v.ctx.a = &v.ctx.a - &l;
        v.ctx.len = &(&v.ctx.len + &l) + &l;
        match policy {
            EndpointPolicy::Keep => {}
            EndpointPolicy::Open => v.ctx.over = Some((1, -1)),
            EndpointPolicy::Closed => v.ctx.over = Some((0, 0)),
        }
        Self::wrap(v)
    }

    /// Checks ordering, sizes and heap order. Meant for tests.
    pub fn check_invariants(&self) -> Result<(), String> {
        fn rec(v: &View, out: &mut Vec<Item>) -> Result<usize, String> {
            let Some(n) = &v.link else { return Ok(0) };
            let (item, l, r) = expose(v);
            for c in [&n.left, &n.right].into_iter().flatten() {
                if c.prio > n.prio {
                    return Err("heap order violated".into());
                }
            }
            let ls = rec(&l, out)?;
            out.push(item);
            let rs = rec(&r, out)?;
            if n.size != ls + rs + 1 {
                return Err("size field wrong".into());
            }
            Ok(n.size)
        }
        let mut items = Vec::new();
        rec(&self.view, &mut items)?;
        for it in &items {
            if it.lkey() > it.rkey() {
                return Err(format!("empty interval {:?}", it.interval()));
            }
        }
        for w in items.windows(2) {
            if !(w[0].lkey() < w[1].lkey() && w[0].rkey() < w[1].rkey()) {
                return Err(format!("not monotonic: {:?} then {:?}", w[0].interval(), w[1].interval()));
            }
        }
        Ok(())
    }
}

/// Merges a sorted interval list into maximal pairwise disjoint pieces; two
/// intervals are merged when they intersect.
pub fn minimal_representation(intervals: &[Interval]) -> Vec<Interval> {
    let mut out: Vec<Interval> = Vec::new();
    for i in intervals {
        if let Some(last) = out.last_mut() {
            if i.lkey() <= last.rkey() {
                if i.rkey() > last.rkey() {
                    last.right = i.right.clone();
                }
                continue;
            }
        }
        out.push(i.clone());
    }
    out
}

/// Canonical union of intervals: sorted, disjoint, and with touching pieces
/// such as `[0,1)` and `[1,2]` fused. Two families have the same union iff
/// their canonical unions are equal.
pub fn canonical_union(intervals: &[Interval]) -> Vec<Interval> {
    let mut v = intervals.to_vec();
    v.sort_by_key(|a| a.lkey());
    let mut out: Vec<Interval> = Vec::new();
    for i in v {
        if let Some(last) = out.last_mut() {
            let lr = last.rkey();
            let il = i.lkey();
            let touching = lr.v == il.v && (lr.off == 0 || il.off == 0);
            if il <= lr || touching {
                if i.rkey() > lr {
                    last.right = i.right.clone();
                }
                continue;
            }
        }
        out.push(i);
    }
    out
}
