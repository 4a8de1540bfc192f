//! Forcing between patterns, decided on the P-linear map of the forcing
//! pattern: exact realization of Markov-graph loops, the patterns and
//! over-rotation pairs forced up to a period bound, bounded twist verdicts,
//! and the rotation-insertion construction that turns a twist pattern of
//! pair `(k, n)` into a cycle of pair `(k+1, n+2)`.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use thiserror::Error;

use crate::exec::Execution;
use crate::markov::{
    fundamental_loop_pprime, MarkovError, MarkovGraph, PLinearMap, PrimeInterval, PrimePartition,
    Rational,
};
use crate::patterns::{OrpPair, Pattern};
use crate::walks::{CycleEnumerator, WalkError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForcingError {
    #[error("empty loop")]
    EmptyLoop,
    #[error("J{0} -> J{1} is not an arrow of the Markov graph")]
    MissingEdge(usize, usize),
    #[error("{0} -> {1} is not an arrow of the P′ Markov graph")]
    MissingPrimeEdge(PrimeInterval, PrimeInterval),
    #[error(transparent)]
    Markov(#[from] MarkovError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error("pattern {0} has over-rotation number 1/2")]
    RotationHalf(String),
    #[error("pattern {0} is not twist")]
    NotTwist(String),
    #[error("neither endpoint of I is the image of a point on its own side of a for {0}")]
    NotCloseToA(String),
    #[error("fundamental P′ loop of {0} does not pass through Il exactly once")]
    LoopNotSimple(String),
    #[error("degenerate realization of {0}")]
    Degenerate(String),
}

/// A periodic orbit of a P-linear map, exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    /// `x, f(x), f²(x), …` for one full period.
    cycle: Vec<Rational>,
    /// Basic interval (or `P′` interval, rendered) of each point of `cycle`.
    itinerary: Vec<String>,
}

impl Orbit {
    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    /// Points in time order starting from the realized point.
    pub fn cycle(&self) -> &[Rational] {
        &self.cycle
    }

    /// Points in increasing order.
    pub fn points(&self) -> Vec<Rational> {
        let mut pts = self.cycle.clone();
        pts.sort();
        pts
    }

    pub fn itinerary(&self) -> &[String] {
        &self.itinerary
    }

    /// The orbit under `x ↦ n+1−x`.
    pub fn mirrored(&self, n: usize) -> Self {
        let top = Rational::from_integer(n as i128 + 1);
        Self {
            cycle: self.cycle.iter().map(|&x| top - x).collect(),
            itinerary: self.itinerary.clone(),
        }
    }
}

/// The permutation of spatial ranks induced by the map on the orbit.
pub fn pattern_of_orbit(orbit: &Orbit) -> Pattern {
    let q = orbit.period();
    let points = orbit.points();
    let rank = |x: &Rational| points.binary_search(x).expect("orbit point");
    let mut images = vec![0; q];
    for t in 0..q {
        images[rank(&orbit.cycle[t])] = rank(&orbit.cycle[(t + 1) % q]) + 1;
    }
    Pattern::from_images_unchecked(images)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Realization {
    Orbit(Orbit),
    /// The realized point lies in `P` but the loop is not an itinerary of
    /// `P` traversed once.
    Degenerate {
        point: Rational,
    },
}

// One step of a loop: a closed interval inside the basic interval `piece`.
struct Step {
    lo: Rational,
    hi: Rational,
    piece: usize,
    label: String,
}

fn realize_steps(map: &PLinearMap, steps: &[Step]) -> Realization {
    let mut slope = Rational::from_integer(1);
    let mut offset = Rational::from_integer(0);
    for st in steps {
        let pc = map.piece(st.piece);
        let s = Rational::from_integer(pc.slope as i128);
        slope *= s;
        offset = offset * s + Rational::from_integer(pc.offset as i128);
    }
    let one = Rational::from_integer(1);
    let x0 = if slope == one {
        if offset != Rational::from_integer(0) {
            return Realization::Degenerate { point: steps[0].lo };
        }
        steps[0].lo + (steps[0].hi - steps[0].lo) / Rational::from_integer(3)
    } else {
        offset / (one - slope)
    };
    let mut cycle = Vec::with_capacity(steps.len());
    let mut x = x0;
    for st in steps {
        debug_assert!(x >= st.lo && x <= st.hi, "itinerary violated at {x}");
        if x < st.lo || x > st.hi {
            return Realization::Degenerate { point: x0 };
        }
        cycle.push(x);
        x = map.piece(st.piece).eval(x);
    }
    debug_assert_eq!(x, x0);
    let period = (1..=cycle.len())
        .find(|&d| cycle.len() % d == 0 && (d == cycle.len() || cycle[d] == x0))
        .expect("full length closes");
    cycle.truncate(period);
    if cycle.iter().any(|x| x.is_integer()) && period != steps.len() {
        return Realization::Degenerate { point: x0 };
    }
    Realization::Orbit(Orbit {
        cycle,
        itinerary: steps[..period].iter().map(|s| s.label.clone()).collect(),
    })
}

/// Realizes a loop of basic intervals (1-based indices) as a periodic orbit.
pub fn realize_loop(pattern: &Pattern, path: &[usize]) -> Result<Realization, ForcingError> {
    if path.is_empty() {
        return Err(ForcingError::EmptyLoop);
    }
    let graph = MarkovGraph::new(pattern)?;
    for (k, &from) in path.iter().enumerate() {
        let to = path[(k + 1) % path.len()];
        if !graph.has_edge(from, to) {
            return Err(ForcingError::MissingEdge(from, to));
        }
    }
    let steps: Vec<Step> = path
        .iter()
        .map(|&i| Step {
            lo: Rational::from_integer(i as i128),
            hi: Rational::from_integer(i as i128 + 1),
            piece: i,
            label: format!("J{i}"),
        })
        .collect();
    Ok(realize_steps(&PLinearMap::new(pattern), &steps))
}

/// Realizes a loop of `P′` intervals of a convergent pattern.
pub fn realize_prime_loop(
    pattern: &Pattern,
    path: &[PrimeInterval],
) -> Result<Realization, ForcingError> {
    if path.is_empty() {
        return Err(ForcingError::EmptyLoop);
    }
    let map = PLinearMap::new(pattern);
    let partition = PrimePartition::new(pattern)?;
    let steps: Vec<Step> = path
        .iter()
        .map(|&j| {
            let (lo, hi, piece) = partition.bounds(j);
            Step {
                lo,
                hi,
                piece,
                label: j.to_string(),
            }
        })
        .collect();
    for (k, st) in steps.iter().enumerate() {
        let next = &steps[(k + 1) % steps.len()];
        let (a, b) = (
            map.piece(st.piece).eval(st.lo),
            map.piece(st.piece).eval(st.hi),
        );
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        if next.lo < lo || next.hi > hi {
            return Err(ForcingError::MissingPrimeEdge(
                path[k],
                path[(k + 1) % path.len()],
            ));
        }
    }
    Ok(realize_steps(&map, &steps))
}

/// Canonical patterns of all period-`q` cycles of the pattern's P-linear map.
pub fn forced_patterns(pattern: &Pattern, q: usize) -> Result<BTreeSet<Pattern>, ForcingError> {
    forced_patterns_with(pattern, q, Execution::Sequential)
}

/// [`forced_patterns`] with the walk enumeration sharded by start vertex.
pub fn forced_patterns_with(
    pattern: &Pattern,
    q: usize,
    exec: Execution,
) -> Result<BTreeSet<Pattern>, ForcingError> {
    let enumerator = CycleEnumerator::new(pattern)?;
    let shards: Vec<usize> = (0..enumerator.vertex_count().max(1)).collect();
    let parts = exec.map(&shards, |&start| {
        let mut found = BTreeSet::new();
        enumerator
            .visit_shard::<(), _>(q, start, &mut |p: Pattern| {
                found.insert(p.canonical());
                ControlFlow::Continue(())
            })
            .map(|_| found)
    });
    let mut out = BTreeSet::new();
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}

/// First forced period-`q` pattern satisfying `pred`.
pub fn find_forced<F>(
    pattern: &Pattern,
    q: usize,
    mut pred: F,
) -> Result<Option<Pattern>, ForcingError>
where
    F: FnMut(&Pattern) -> bool,
{
    let enumerator = CycleEnumerator::new(pattern)?;
    let flow = enumerator.visit(q, |p| {
        if pred(&p) {
            ControlFlow::Break(p)
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(match flow {
        ControlFlow::Break(p) => Some(p.canonical()),
        ControlFlow::Continue(()) => None,
    })
}

/// Whether `a` forces `b`.
pub fn forces(a: &Pattern, b: &Pattern) -> Result<bool, ForcingError> {
    let target = b.canonical();
    Ok(find_forced(a, b.period(), |p| p.canonical() == target)?.is_some())
}

/// Over-rotation pairs of all forced cycles of periods `2..=cap`.
pub fn orp_spectrum(pattern: &Pattern, cap: usize) -> Result<BTreeSet<OrpPair>, ForcingError> {
    let enumerator = CycleEnumerator::new(pattern)?;
    let mut out = BTreeSet::new();
    for q in 2..=cap {
        let mut remaining = q / 2;
        let _ = enumerator.visit::<(), _>(q, |p| {
            let o = p.over_rotation_pair().expect("q >= 2");
            if out.insert(o) {
                remaining -= 1;
                if remaining == 0 {
                    return ControlFlow::Break(());
                }
            }
            ControlFlow::Continue(())
        })?;
    }
    Ok(out)
}

/// Necessary condition for twist: on each side of `a`, among points mapped
/// to a common side, farther points have farther images.
pub fn twist_monotone_check(pattern: &Pattern) -> Result<bool, ForcingError> {
    let map = PLinearMap::new(pattern);
    let (a, _) = map.fixed_point()?;
    let n = pattern.period();
    let at = |i: usize| Rational::from_integer(i as i128);
    let dist = |x: Rational| if x > a { x - a } else { a - x };
    for u in 1..=n {
        for v in 1..=n {
            if u == v {
                continue;
            }
            let (fu, fv) = (pattern.image(u), pattern.image(v));
            let same_side = (at(u) < a) == (at(v) < a);
            let same_image_side = (at(fu) < a) == (at(fv) < a);
            if same_side
                && same_image_side
                && dist(at(u)) > dist(at(v))
                && dist(at(fu)) <= dist(at(fv))
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwistVerdict {
    NotTwist,
    /// No competitor with the same over-rotation number up to this period.
    TwistUpTo(usize),
}

impl TwistVerdict {
    pub fn is_twist(&self) -> bool {
        matches!(self, TwistVerdict::TwistUpTo(_))
    }
}

/// Default bound for twist searches: three times the period.
pub fn default_twist_cap(pattern: &Pattern) -> usize {
    3 * pattern.period()
}

/// Bounded twist verdict: searches for another forced pattern with the same
/// over-rotation number among periods `<= cap`.
pub fn is_twist_bounded(pattern: &Pattern, cap: usize) -> Result<TwistVerdict, ForcingError> {
    if pattern.period() < 2 || !pattern.is_convergent() || !twist_monotone_check(pattern)? {
        return Ok(TwistVerdict::NotTwist);
    }
    let rho = pattern.over_rotation_number().expect("n >= 2");
    let own = pattern.canonical();
    let step = *rho.denom() as usize;
    let enumerator = CycleEnumerator::new(pattern)?;
    for q in (step..=cap).step_by(step) {
        let target = *rho.numer() as usize * (q / step);
        let flow = enumerator.visit_pair(q, target, |p| {
            if p.over_rotation_number() == Some(rho) && p.canonical() != own {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        if flow.is_break() {
            return Ok(TwistVerdict::NotTwist);
        }
    }
    Ok(TwistVerdict::TwistUpTo(cap))
}

/// Whether `b_l` (resp. `b_r`) is the image of a point of `P` lying on its
/// own side of `a`.
pub fn close_to_a(pattern: &Pattern) -> Result<(bool, bool), ForcingError> {
    let partition = PrimePartition::new(pattern)?;
    let c = partition.c;
    Ok((pattern.preimage(c) < c, pattern.preimage(c + 1) > c + 1))
}

/// Inserts `I_l → I_r → I_l` at the single pass of the fundamental `P′`
/// loop through `I_l`, and realizes the resulting loop of length `n + 2`.
///
/// Requires a convergent pattern with over-rotation number below 1/2 that
/// is twist up to `cap`. When only `b_r` is the image of a point on its own
/// side, the construction runs on the flipped pattern and the orbit is
/// mirrored back.
pub fn insert_rotation(pattern: &Pattern, cap: usize) -> Result<Orbit, ForcingError> {
    let name = pattern.to_string();
    if !pattern.is_convergent() {
        return Err(MarkovError::Divergent(name).into());
    }
    let orp = pattern
        .over_rotation_pair()
        .expect("convergent implies n >= 2");
    if 2 * orp.p == orp.q {
        return Err(ForcingError::RotationHalf(name));
    }
    if !is_twist_bounded(pattern, cap)?.is_twist() {
        return Err(ForcingError::NotTwist(name));
    }
    let (left, right) = close_to_a(pattern)?;
    let (work, mirrored) = match (left, right) {
        (true, _) => (pattern.clone(), false),
        (false, true) => (pattern.flip(), true),
        (false, false) => return Err(ForcingError::NotCloseToA(name)),
    };
    let mut path = fundamental_loop_pprime(&work)?;
    let at: Vec<usize> = path
        .iter()
        .enumerate()
        .filter(|(_, &j)| j == PrimeInterval::Left)
        .map(|(i, _)| i)
        .collect();
    if at.len() != 1 {
        return Err(ForcingError::LoopNotSimple(name));
    }
    path.splice(
        at[0] + 1..at[0] + 1,
        [PrimeInterval::Right, PrimeInterval::Left],
    );
    match realize_prime_loop(&work, &path)? {
        Realization::Orbit(o) if o.period() == pattern.period() + 2 => Ok(if mirrored {
            o.mirrored(pattern.period())
        } else {
            o
        }),
        _ => Err(ForcingError::Degenerate(name)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::parse_pattern;

    fn pat(s: &str) -> Pattern {
        parse_pattern(s).unwrap()
    }

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    fn orbit(r: Realization) -> Orbit {
        match r {
            Realization::Orbit(o) => o,
            Realization::Degenerate { point } => panic!("degenerate at {point}"),
        }
    }

    #[test]
    fn loops_realize_exactly() {
        let p = pat("2 3 1");
        let o = orbit(realize_loop(&p, &[1, 2]).unwrap());
        assert_eq!(o.points(), vec![q(5, 3), q(8, 3)]);
        assert_eq!(pattern_of_orbit(&o), pat("2 1"));

        let o = orbit(realize_loop(&p, &[1, 2, 2, 2]).unwrap());
        assert_eq!(o.points(), vec![q(13, 9), q(19, 9), q(22, 9), q(25, 9)]);
        assert_eq!(o.period(), 4);
        assert_eq!(pattern_of_orbit(&o), pat("3 4 2 1"));

        let o = orbit(realize_loop(&p, &[2]).unwrap());
        assert_eq!(o.points(), vec![q(7, 3)]);
        assert_eq!(pattern_of_orbit(&o), pat("1"));
    }

    #[test]
    fn loop_errors() {
        let p = pat("2 3 1");
        assert_eq!(realize_loop(&p, &[]), Err(ForcingError::EmptyLoop));
        assert_eq!(
            realize_loop(&p, &[1, 1]),
            Err(ForcingError::MissingEdge(1, 1))
        );
        // P itself through its fundamental loop, and a P-point loop traversed twice
        assert_eq!(orbit(realize_loop(&p, &[1, 2, 2]).unwrap()).period(), 3);
        assert!(matches!(
            realize_loop(&p, &[1, 2, 2, 1, 2, 2]).unwrap(),
            Realization::Degenerate { .. }
        ));
    }

    #[test]
    fn identity_loops_use_the_one_third_point() {
        // x ↦ 3 − x on [1, 2]: every point other than 3/2 has period 2
        let o = orbit(realize_loop(&pat("2 1"), &[1, 1]).unwrap());
        assert_eq!(o.cycle(), &[q(4, 3), q(5, 3)]);
    }

    #[test]
    fn forced_sets() {
        assert_eq!(
            forced_patterns(&pat("2 3 1"), 2).unwrap(),
            BTreeSet::from([pat("2 1")])
        );
        assert_eq!(
            forced_patterns(&pat("2 3 1"), 4).unwrap(),
            BTreeSet::from([pat("3 4 2 1")])
        );
        assert!(forced_patterns(&pat("2 1"), 3).unwrap().is_empty());
        assert!(forced_patterns(&pat("2 3 1"), 3)
            .unwrap()
            .contains(&pat("2 3 1")));
    }

    #[test]
    fn forcing_relation() {
        assert!(forces(&pat("2 3 1"), &pat("3 5 4 2 1")).unwrap());
        assert!(forces(&pat("3 5 4 2 1"), &pat("3 5 4 2 1")).unwrap());
        assert!(!forces(&pat("2 1"), &pat("2 3 1")).unwrap());
        let path = [
            PrimeInterval::Basic(1),
            PrimeInterval::Left,
            PrimeInterval::Right,
            PrimeInterval::Left,
            PrimeInterval::Right,
        ];
        let o = orbit(realize_prime_loop(&pat("2 3 1"), &path).unwrap());
        assert_eq!(
            o.points(),
            vec![q(19, 15), q(31, 15), q(34, 15), q(37, 15), q(43, 15)]
        );
        assert_eq!(pattern_of_orbit(&o), pat("3 5 4 2 1"));
    }

    #[test]
    fn spectra() {
        let orp = |p, q| OrpPair::new(p, q).unwrap();
        assert_eq!(
            orp_spectrum(&pat("2 1"), 5).unwrap(),
            BTreeSet::from([orp(1, 2)])
        );
        let s = orp_spectrum(&pat("2 3 1"), 5).unwrap();
        for o in [orp(1, 2), orp(2, 4), orp(1, 3), orp(2, 5)] {
            assert!(s.contains(&o), "{o}");
        }
        let s = orp_spectrum(&pat("3 1 4 2"), 6).unwrap();
        for q in 2..=6 {
            assert!(s.contains(&orp(1, q)));
        }
    }

    #[test]
    fn twist() {
        assert!(twist_monotone_check(&Pattern::stefan(5).unwrap()).unwrap());
        assert!(twist_monotone_check(&pat("3 1 4 2")).is_err());
        assert_eq!(
            is_twist_bounded(&pat("2 3 1"), 9).unwrap(),
            TwistVerdict::TwistUpTo(9)
        );
        assert_eq!(
            is_twist_bounded(&pat("3 4 2 1"), 8).unwrap(),
            TwistVerdict::NotTwist
        );
        assert_eq!(
            is_twist_bounded(&pat("3 1 4 2"), 8).unwrap(),
            TwistVerdict::NotTwist
        );
    }

    #[test]
    fn rotation_insertion() {
        let o = insert_rotation(&pat("2 3 1"), 9).unwrap();
        assert_eq!(
            o.points(),
            vec![q(19, 15), q(31, 15), q(34, 15), q(37, 15), q(43, 15)]
        );
        let b = pattern_of_orbit(&o);
        assert_eq!(b, pat("3 5 4 2 1"));
        assert_eq!(b.over_rotation_pair(), OrpPair::new(2, 5));
        assert!(!b.is_doubling());
        assert!(matches!(
            insert_rotation(&pat("2 1"), 6),
            Err(ForcingError::RotationHalf(_))
        ));
        assert!(matches!(
            insert_rotation(&pat("3 1 4 2"), 6),
            Err(ForcingError::Markov(MarkovError::Divergent(_)))
        ));
    }
}
