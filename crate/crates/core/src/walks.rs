//! Enumeration of the periodic orbits of a P-linear map by closed walks in
//! its Markov graph.
//!
//! Every arrow of the Markov graph is a full covering, so along any closed
//! walk the admissible set of the first interval is a nonempty interval
//! that the walk's affine composition `x ↦ S·x + C` maps onto the whole
//! first interval. Pieces have integer coefficients, so `S` and `C` are
//! integers and the realized point is `C / (1 − S)`; all orbit points then
//! share that denominator and the whole orbit is computed in integers.
//!
//! A cycle that avoids `P` has a unique itinerary, so it is reported once
//! per rotation class: only the lexicographically least rotation of a walk
//! is realized. When `S = 1` the composition is the identity on the first
//! interval and every interior point is periodic; the representative is
//! taken one third of the way into the first interval, for every rotation
//! that starts at the least vertex.
//!
//! On each interval of `P` the displacement `f(x) − x` is affine, so it has
//! a fixed sign unless it changes sign at a fixed point. Splitting those
//! intervals at their fixed points gives halves of constant sign that again
//! map onto unions of halves. An orbit's over-rotation pair counts its
//! `+ → −` displacement changes, which gives a reachability table over
//! halves for searches restricted to one pair.

use std::ops::ControlFlow;

use thiserror::Error;

use crate::markov::MarkovGraph;
use crate::patterns::Pattern;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WalkError {
    #[error("period {period} with walk length {length} would overflow exact integer arithmetic")]
    Overflow { period: usize, length: usize },
    #[error("Markov graphs with more than 128 vertices are not enumerated")]
    TooManyVertices,
}

/// Closed-walk enumerator for one pattern.
#[derive(Debug, Clone)]
pub struct CycleEnumerator {
    pattern: Pattern,
    slopes: Vec<i128>,
    offsets: Vec<i128>,
    // 0-based successor lists
    successors: Vec<Vec<usize>>,
    // bit 0: displacement can be positive, bit 1: can be negative
    signs: Vec<u8>,
    // covers[2v + sd][2w + sd2]: the sign-sd half of v maps over the sign-sd2 half of w
    covers: Vec<Vec<bool>>,
}

type Counts = [[u128; 2]; 2];

// tail[sd0][k][2v + sd]: `+ → −` counts of walks of k more steps from
// vertex v with sign sd that close at `start` with sign sd0
struct PairTable {
    target: usize,
    tail: [Vec<Vec<u128>>; 2],
}

struct Search<'v, F> {
    q: usize,
    start: usize,
    // reach[k]: vertices that can return to `start` in exactly k steps
    // through vertices >= start
    reach: Vec<u128>,
    walk: Vec<usize>,
    orbit: Vec<i128>,
    order: Vec<usize>,
    rank: Vec<usize>,
    images: Vec<usize>,
    pair: Option<PairTable>,
    visitor: &'v mut F,
}

impl CycleEnumerator {
    pub fn new(pattern: &Pattern) -> Result<Self, WalkError> {
        let n = pattern.period();
        if n > 129 {
            return Err(WalkError::TooManyVertices);
        }
        let mut slopes = Vec::new();
        let mut offsets = Vec::new();
        let mut successors = Vec::new();
        let mut signs = Vec::new();
        if n >= 2 {
            let graph = MarkovGraph::new(pattern).expect("n >= 2");
            for i in 1..n {
                let s = pattern.image(i + 1) as i128 - pattern.image(i) as i128;
                slopes.push(s);
                // offset in 0-based coordinates, x ↦ s·x + c with x = i − 1 at the left end
                offsets.push(pattern.image(i) as i128 - 1 - s * (i as i128 - 1));
                successors.push(graph.successors(i).iter().map(|k| k - 1).collect());
                let side = |j: usize| if pattern.image(j) > j { 1u8 } else { 2u8 };
                signs.push(side(i) | side(i + 1));
            }
        }
        let covers = half_covers(pattern, &signs);
        Ok(Self {
            pattern: pattern.clone(),
            slopes,
            offsets,
            successors,
            signs,
            covers,
        })
    }

    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    pub fn vertex_count(&self) -> usize {
        self.successors.len()
    }

    fn check_bounds(&self, q: usize) -> Result<(), WalkError> {
        let n = self.pattern.period() as f64;
        let max_slope = self
            .slopes
            .iter()
            .map(|s| s.unsigned_abs())
            .max()
            .unwrap_or(1)
            .max(1) as f64;
        let bits =
            q as f64 * max_slope.log2() + 2.0 * (n + 1.0).log2() + (q as f64 + 2.0).log2() + 4.0;
        if bits < 120.0 {
            Ok(())
        } else {
            Err(WalkError::Overflow {
                period: self.pattern.period(),
                length: q,
            })
        }
    }

    /// Visits the pattern of every cycle of exact period `q`; the same
    /// pattern may be visited more than once.
    pub fn visit<B, F>(&self, q: usize, mut visitor: F) -> Result<ControlFlow<B>, WalkError>
    where
        F: FnMut(Pattern) -> ControlFlow<B>,
    {
        for start in 0..self.vertex_count().max(1) {
            if let ControlFlow::Break(b) = self.visit_shard(q, start, &mut visitor)? {
                return Ok(ControlFlow::Break(b));
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    /// One shard of [`visit`](Self::visit): the cycles whose least itinerary
    /// vertex is `start` (0-based). Shard 0 also owns `P` itself and the
    /// fixed points.
    pub fn visit_shard<B, F>(
        &self,
        q: usize,
        start: usize,
        visitor: &mut F,
    ) -> Result<ControlFlow<B>, WalkError>
    where
        F: FnMut(Pattern) -> ControlFlow<B>,
    {
        self.shard(q, start, None, visitor)
    }

    /// Like [`visit`](Self::visit), but skips walks that cannot carry a
    /// cycle of over-rotation pair `(p, q)`. Every such cycle is visited;
    /// some cycles with other pairs may be visited too.
    pub fn visit_pair<B, F>(
        &self,
        q: usize,
        p: usize,
        mut visitor: F,
    ) -> Result<ControlFlow<B>, WalkError>
    where
        F: FnMut(Pattern) -> ControlFlow<B>,
    {
        for start in 0..self.vertex_count().max(1) {
            if let ControlFlow::Break(b) = self.shard(q, start, Some(p), &mut visitor)? {
                return Ok(ControlFlow::Break(b));
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    fn shard<B, F>(
        &self,
        q: usize,
        start: usize,
        target: Option<usize>,
        visitor: &mut F,
    ) -> Result<ControlFlow<B>, WalkError>
    where
        F: FnMut(Pattern) -> ControlFlow<B>,
    {
        if q == 0 {
            return Ok(ControlFlow::Continue(()));
        }
        self.check_bounds(q)?;
        if start == 0 {
            if q == self.pattern.period() {
                if let ControlFlow::Break(b) = visitor(self.pattern.clone()) {
                    return Ok(ControlFlow::Break(b));
                }
            }
            // every P-linear map has a fixed point
            if q == 1 && self.pattern.period() > 1 {
                if let ControlFlow::Break(b) = visitor(Pattern::from_images_unchecked(vec![1])) {
                    return Ok(ControlFlow::Break(b));
                }
            }
        }
        if q == 1 || start >= self.vertex_count() {
            return Ok(ControlFlow::Continue(()));
        }
        let reach = self.reach_masks(q, start);
        if reach[q] >> start & 1 == 0 {
            return Ok(ControlFlow::Continue(()));
        }
        let pair = target
            .filter(|&p| p < 127)
            .map(|p| self.pair_table(q, start, p));
        let mut pre: Counts = [[0; 2]; 2];
        for (sd, row) in pre.iter_mut().enumerate() {
            if self.signs[start] >> sd & 1 == 1 {
                row[sd] = 1;
            }
        }
        if pair.as_ref().is_some_and(|t| !t.feasible(&pre, start, q)) {
            return Ok(ControlFlow::Continue(()));
        }
        let mut search = Search {
            q,
            start,
            reach,
            walk: vec![start; q],
            orbit: vec![0; q],
            order: (0..q).collect(),
            rank: vec![0; q],
            images: vec![0; q],
            pair,
            visitor,
        };
        Ok(self.descend(&mut search, 0, 1, 0, pre))
    }

    fn pair_table(&self, q: usize, start: usize, target: usize) -> PairTable {
        let m = self.vertex_count();
        let tail = [0, 1].map(|sd0| {
            let mut tail = vec![vec![0u128; 2 * m]; q + 1];
            if self.signs[start] >> sd0 & 1 == 1 {
                tail[0][2 * start + sd0] = 1;
            }
            for k in 1..=q {
                for v in start..m {
                    for sd in 0..2 {
                        if self.signs[v] >> sd & 1 == 0 {
                            continue;
                        }
                        let mut mask = 0u128;
                        for &w in &self.successors[v] {
                            if w < start {
                                continue;
                            }
                            for sd2 in 0..2 {
                                if self.covers[2 * v + sd][2 * w + sd2] {
                                    mask |=
                                        tail[k - 1][2 * w + sd2] << (sd == 0 && sd2 == 1) as u32;
                                }
                            }
                        }
                        tail[k][2 * v + sd] = mask;
                    }
                }
            }
            tail
        });
        PairTable { target, tail }
    }

    fn reach_masks(&self, q: usize, start: usize) -> Vec<u128> {
        let allowed: u128 = if self.vertex_count() >= 128 {
            u128::MAX << start
        } else {
            ((1u128 << self.vertex_count()) - 1) & (u128::MAX << start)
        };
        let mut reach = vec![0u128; q + 1];
        reach[0] = 1u128 << start;
        for k in 1..=q {
            let target = reach[k - 1];
            let mut mask = 0u128;
            for u in start..self.vertex_count() {
                if allowed >> u & 1 == 1 && self.successors[u].iter().any(|&w| target >> w & 1 == 1)
                {
                    mask |= 1u128 << u;
                }
            }
            reach[k] = mask;
        }
        reach
    }

    // counts of walk[..=depth] extended by the arrow v → w
    #[allow(clippy::needless_range_loop)]
    fn extend(&self, pre: &Counts, v: usize, w: usize) -> Counts {
        let mut next: Counts = [[0; 2]; 2];
        for sd0 in 0..2 {
            for sd2 in 0..2 {
                for sd in 0..2 {
                    if self.covers[2 * v + sd][2 * w + sd2] {
                        next[sd0][sd2] |= pre[sd0][sd] << (sd == 0 && sd2 == 1) as u32;
                    }
                }
            }
        }
        next
    }

    // `walk[depth]` is fixed; (slope, offset) compose the pieces of walk[..depth]
    // and `pre` holds the sign-change counts of walk[..=depth].
    fn descend<B, F>(
        &self,
        s: &mut Search<'_, F>,
        depth: usize,
        slope: i128,
        offset: i128,
        pre: Counts,
    ) -> ControlFlow<B>
    where
        F: FnMut(Pattern) -> ControlFlow<B>,
    {
        let v = s.walk[depth];
        let slope = self.slopes[v] * slope;
        let offset = self.slopes[v] * offset + self.offsets[v];
        if depth + 1 == s.q {
            return self.close(s, slope, offset);
        }
        let need = s.reach[s.q - depth - 1];
        for &w in &self.successors[v] {
            if w < s.start || need >> w & 1 == 0 {
                continue;
            }
            let mut next = pre;
            if let Some(table) = &s.pair {
                next = self.extend(&pre, v, w);
                if !table.feasible(&next, w, s.q - depth - 1) {
                    continue;
                }
            }
            s.walk[depth + 1] = w;
            self.descend(s, depth + 1, slope, offset, next)?;
        }
        ControlFlow::Continue(())
    }

    fn close<B, F>(&self, s: &mut Search<'_, F>, slope: i128, offset: i128) -> ControlFlow<B>
    where
        F: FnMut(Pattern) -> ControlFlow<B>,
    {
        let q = s.q;
        let (den, num) = if slope == 1 {
            debug_assert_eq!(offset, 0, "covering walk with unit slope is the identity");
            (3, 3 * s.start as i128 + 1)
        } else {
            if !least_rotation(&s.walk) {
                return ControlFlow::Continue(());
            }
            let (mut den, mut num) = (1 - slope, offset);
            if den < 0 {
                den = -den;
                num = -num;
            }
            // a point of P; P itself is reported separately
            if num % den == 0 {
                return ControlFlow::Continue(());
            }
            (den, num)
        };
        let mut x = num;
        for k in 0..q {
            s.orbit[k] = x;
            let v = s.walk[k];
            x = self.slopes[v] * x + self.offsets[v] * den;
            if x == s.orbit[0] && k + 1 < q {
                return ControlFlow::Continue(());
            }
        }
        if x != s.orbit[0] {
            debug_assert!(false, "walk {:?} did not close", s.walk);
            return ControlFlow::Continue(());
        }
        let orbit = &s.orbit;
        s.order.sort_unstable_by_key(|&t| orbit[t]);
        for (r, &t) in s.order.iter().enumerate() {
            s.rank[t] = r;
        }
        for t in 0..q {
            s.images[s.rank[t]] = s.rank[(t + 1) % q] + 1;
        }
        (s.visitor)(Pattern::from_images_unchecked(s.images.clone()))
    }
}

// Halves in doubled coordinates: point i sits at 2i and the fixed point
// inside a mixed-sign interval v at 2v + 1.
fn half_covers(pattern: &Pattern, signs: &[u8]) -> Vec<Vec<bool>> {
    let m = signs.len();
    let image = |x: usize| {
        if x.is_multiple_of(2) {
            2 * pattern.image(x / 2)
        } else {
            x
        }
    };
    let half = |v: usize, sd: usize| -> Option<(usize, usize)> {
        let (l, r) = (2 * (v + 1), 2 * (v + 2));
        match signs[v] {
            3 => {
                let left_sd = if pattern.image(v + 1) > v + 1 { 0 } else { 1 };
                Some(if sd == left_sd {
                    (l, l + 1)
                } else {
                    (l + 1, r)
                })
            }
            s if s >> sd & 1 == 1 => Some((l, r)),
            _ => None,
        }
    };
    let mut covers = vec![vec![false; 2 * m]; 2 * m];
    for v in 0..m {
        for sd in 0..2 {
            let Some((l, r)) = half(v, sd) else { continue };
            let (fl, fr) = (image(l), image(r));
            let (lo, hi) = (fl.min(fr), fl.max(fr));
            for w in 0..m {
                for sd2 in 0..2 {
                    if let Some((a, b)) = half(w, sd2) {
                        covers[2 * v + sd][2 * w + sd2] = lo <= a && b <= hi;
                    }
                }
            }
        }
    }
    covers
}

impl PairTable {
    fn feasible(&self, pre: &Counts, v: usize, left: usize) -> bool {
        let t = self.target;
        (0..2).any(|sd0| {
            (0..2).any(|sd| {
                let (mut a, b) = (pre[sd0][sd], self.tail[sd0][left][2 * v + sd]);
                while a != 0 {
                    let i = a.trailing_zeros() as usize;
                    if i > t {
                        break;
                    }
                    if b >> (t - i) & 1 == 1 {
                        return true;
                    }
                    a &= a - 1;
                }
                false
            })
        })
    }
}

/// True iff `walk` is strictly smaller than each of its other rotations,
/// which also rules out proper powers.
fn least_rotation(walk: &[usize]) -> bool {
    let q = walk.len();
    for shift in 1..q {
        for i in 0..q {
            let a = walk[i];
            let b = walk[(i + shift) % q];
            if a < b {
                break;
            }
            if a > b {
                return false;
            }
            if i + 1 == q {
                return false;
            }
        }
    }
    true
}
