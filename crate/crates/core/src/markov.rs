//! Exact P-linear maps, their Markov graphs, the fixed point of a convergent
//! pattern and the germ dynamics that give the fundamental loops of `P` and
//! `P′ = P ∪ {a}`.
//!
//! Points of `P` sit at the integers `1..=n`, so every affine piece has
//! integer slope and offset and every periodic point is rational.

use std::fmt;
use std::fmt::Write as _;

use num_rational::Ratio;
use thiserror::Error;

use crate::patterns::Pattern;

pub type Rational = Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MarkovError {
    #[error("pattern {0} is divergent: its P-linear map has several fixed points")]
    Divergent(String),
    #[error("period {0} has no basic intervals")]
    TooShort(usize),
    #[error("{0} is not a germ of a period-{1} pattern")]
    BadGerm(Germ, usize),
}

/// The affine piece `x ↦ slope·x + offset` on one basic interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Piece {
    pub slope: i64,
    pub offset: i64,
}

impl Piece {
    pub fn eval(&self, x: Rational) -> Rational {
        x * Rational::from_integer(self.slope as i128) + Rational::from_integer(self.offset as i128)
    }
}

/// The "connect the dots" map of a pattern.
#[derive(Debug, Clone)]
pub struct PLinearMap {
    pattern: Pattern,
    pieces: Vec<Piece>,
}

impl PLinearMap {
    pub fn new(pattern: &Pattern) -> Self {
        let pieces = (1..pattern.period())
            .map(|i| {
                let slope = pattern.image(i + 1) as i64 - pattern.image(i) as i64;
                Piece {
                    slope,
                    offset: pattern.image(i) as i64 - slope * i as i64,
                }
            })
            .collect();
        Self {
            pattern: pattern.clone(),
            pieces,
        }
    }

    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    pub fn period(&self) -> usize {
        self.pattern.period()
    }

    /// Affine piece on `J_i = [i, i+1]`, `1 <= i < n`.
    pub fn piece(&self, i: usize) -> Piece {
        self.pieces[i - 1]
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Evaluates `f` at a rational in `[1, n]`; `None` outside.
    pub fn eval(&self, x: Rational) -> Option<Rational> {
        let n = self.period();
        if n == 1 {
            return (x == Rational::from_integer(1)).then_some(x);
        }
        if x < Rational::from_integer(1) || x > Rational::from_integer(n as i128) {
            return None;
        }
        let i = (x.floor().to_integer() as usize).min(n - 1);
        Some(self.piece(i).eval(x))
    }

    /// Index `c` of the basic interval `[c, c+1]` holding the unique fixed
    /// point, together with that fixed point.
    pub fn fixed_point(&self) -> Result<(Rational, usize), MarkovError> {
        if !self.pattern.is_convergent() {
            return Err(MarkovError::Divergent(self.pattern.to_string()));
        }
        let c = (1..self.period())
            .find(|&i| self.pattern.image(i + 1) < i + 1)
            .expect("convergent pattern changes sign");
        let piece = self.piece(c);
        let a = Rational::new(piece.offset as i128, 1 - piece.slope as i128);
        Ok((a, c))
    }

    /// All fixed points, found piece by piece.
    pub fn fixed_points(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = Vec::new();
        for (idx, piece) in self.pieces.iter().enumerate() {
            let i = (idx + 1) as i128;
            if piece.slope == 1 {
                continue;
            }
            let x = Rational::new(piece.offset as i128, 1 - piece.slope as i128);
            if x >= Rational::from_integer(i)
                && x <= Rational::from_integer(i + 1)
                && !out.contains(&x)
            {
                out.push(x);
            }
        }
        out
    }
}

/// Covering graph on the basic intervals `J_1 … J_{n−1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkovGraph {
    successors: Vec<Vec<usize>>,
}

impl MarkovGraph {
    pub fn new(pattern: &Pattern) -> Result<Self, MarkovError> {
        let n = pattern.period();
        if n < 2 {
            return Err(MarkovError::TooShort(n));
        }
        let successors = (1..n)
            .map(|i| {
                let (lo, hi) = min_max(pattern.image(i), pattern.image(i + 1));
                (lo..hi).collect()
            })
            .collect();
        Ok(Self { successors })
    }

    pub fn vertex_count(&self) -> usize {
        self.successors.len()
    }

    /// Successors of `J_i`, ascending, 1-based.
    pub fn successors(&self, i: usize) -> &[usize] {
        &self.successors[i - 1]
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        from >= 1 && from <= self.vertex_count() && self.successors(from).binary_search(&to).is_ok()
    }

    /// Edges in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.successors
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |&k| (i + 1, k)))
    }

    /// DOT digraph with vertices `J1..Jk` and row-major edges.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph markov {\n");
        for i in 1..=self.vertex_count() {
            let _ = writeln!(out, "  J{i};");
        }
        for (i, k) in self.edges() {
            let _ = writeln!(out, "  J{i} -> J{k};");
        }
        out.push_str("}\n");
        out
    }
}

fn min_max(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    L,
    R,
}

/// A one-sided germ at a point of `P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Germ {
    pub point: usize,
    pub side: Side,
}

impl fmt::Display for Germ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{:?})", self.point, self.side)
    }
}

impl Germ {
    pub fn new(point: usize, side: Side) -> Self {
        Self { point, side }
    }

    /// The basic interval index containing the germ.
    pub fn interval(&self) -> usize {
        match self.side {
            Side::R => self.point,
            Side::L => self.point - 1,
        }
    }

    fn is_valid(&self, n: usize) -> bool {
        match self.side {
            Side::R => self.point >= 1 && self.point < n,
            Side::L => self.point > 1 && self.point <= n,
        }
    }

    /// Whether the germ points toward `a`.
    pub fn points_toward(&self, a: Rational) -> bool {
        let x = Rational::from_integer(self.point as i128);
        match self.side {
            Side::R => x < a,
            Side::L => x > a,
        }
    }
}

/// Image of a germ under the P-linear map.
pub fn germ_map(pattern: &Pattern, g: Germ) -> Result<Germ, MarkovError> {
    let n = pattern.period();
    if !g.is_valid(n) {
        return Err(MarkovError::BadGerm(g, n));
    }
    let j = g.interval();
    let increasing = pattern.image(j + 1) > pattern.image(j);
    let side = match (g.side, increasing) {
        (s, true) => s,
        (Side::R, false) => Side::L,
        (Side::L, false) => Side::R,
    };
    Ok(Germ::new(pattern.image(g.point), side))
}

/// The fundamental loop of germs and of basic intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalLoop {
    pub germs: Vec<Germ>,
    pub intervals: Vec<usize>,
}

/// Orbit of the right germ at the leftmost point.
pub fn fundamental_loop(pattern: &Pattern) -> Result<FundamentalLoop, MarkovError> {
    let n = pattern.period();
    if n < 2 {
        return Err(MarkovError::TooShort(n));
    }
    let start = Germ::new(1, Side::R);
    let mut germs = Vec::with_capacity(n);
    let mut g = start;
    loop {
        germs.push(g);
        g = germ_map(pattern, g)?;
        if g == start {
            break;
        }
    }
    debug_assert_eq!(germs.len(), n);
    let intervals = germs.iter().map(Germ::interval).collect();
    Ok(FundamentalLoop { germs, intervals })
}

/// A basic interval of `P′`: either a basic interval of `P` other than
/// `I`, or one of the two halves of `I = [b_l, b_r]` split at `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimeInterval {
    Basic(usize),
    Left,
    Right,
}

impl fmt::Display for PrimeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeInterval::Basic(i) => write!(f, "J{i}"),
            PrimeInterval::Left => f.write_str("Il"),
            PrimeInterval::Right => f.write_str("Ir"),
        }
    }
}

/// The partition of `[1, n]` by `P′`.
#[derive(Debug, Clone)]
pub struct PrimePartition {
    pub a: Rational,
    /// Index of `I`, so `b_l = c` and `b_r = c + 1`.
    pub c: usize,
    pub n: usize,
}

impl PrimePartition {
    pub fn new(pattern: &Pattern) -> Result<Self, MarkovError> {
        let (a, c) = PLinearMap::new(pattern).fixed_point()?;
        Ok(Self {
            a,
            c,
            n: pattern.period(),
        })
    }

    /// Closed endpoints of a `P′` interval and the `P` interval holding it.
    pub fn bounds(&self, j: PrimeInterval) -> (Rational, Rational, usize) {
        let int = |v: usize| Rational::from_integer(v as i128);
        match j {
            PrimeInterval::Basic(i) => (int(i), int(i + 1), i),
            PrimeInterval::Left => (int(self.c), self.a, self.c),
            PrimeInterval::Right => (self.a, int(self.c + 1), self.c),
        }
    }

    pub fn of_germ(&self, g: Germ) -> PrimeInterval {
        let j = g.interval();
        if j != self.c {
            PrimeInterval::Basic(j)
        } else if g.side == Side::R {
            PrimeInterval::Left
        } else {
            PrimeInterval::Right
        }
    }

    /// All `n` intervals of `P′` from left to right.
    pub fn intervals(&self) -> Vec<PrimeInterval> {
        (1..self.n)
            .flat_map(|i| {
                if i == self.c {
                    vec![PrimeInterval::Left, PrimeInterval::Right]
                } else {
                    vec![PrimeInterval::Basic(i)]
                }
            })
            .collect()
    }
}

/// The fundamental loop of `P′`-basic intervals.
pub fn fundamental_loop_pprime(pattern: &Pattern) -> Result<Vec<PrimeInterval>, MarkovError> {
    let partition = PrimePartition::new(pattern)?;
    let fl = fundamental_loop(pattern)?;
    Ok(fl.germs.iter().map(|&g| partition.of_germ(g)).collect())
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

    #[test]
    fn evaluation() {
        let f = PLinearMap::new(&pat("2 3 1"));
        assert_eq!(f.eval(q(3, 2)), Some(q(5, 2)));
        assert_eq!(f.eval(q(5, 2)), Some(q(2, 1)));
        for i in 1..=3 {
            assert_eq!(
                f.eval(q(i, 1)),
                Some(q(f.pattern().image(i as usize) as i128, 1))
            );
        }
        assert_eq!(f.eval(q(7, 2)), None);
    }

    #[test]
    fn graphs() {
        let g = MarkovGraph::new(&pat("2 3 1")).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(1, 2), (2, 1), (2, 2)]);
        let g = MarkovGraph::new(&pat("2 1")).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(1, 1)]);
        assert!(MarkovGraph::new(&pat("1")).is_err());
        let g = MarkovGraph::new(&pat("3 5 4 2 1")).unwrap();
        let (_, c) = PLinearMap::new(&pat("3 5 4 2 1")).fixed_point().unwrap();
        assert!(g.has_edge(c, c));
    }

    #[test]
    fn dot_output() {
        let g = MarkovGraph::new(&pat("2 1")).unwrap();
        assert_eq!(g.to_dot(), "digraph markov {\n  J1;\n  J1 -> J1;\n}\n");
        let g = MarkovGraph::new(&pat("2 3 1")).unwrap();
        let dot = g.to_dot();
        let edges: Vec<&str> = dot.lines().filter(|l| l.contains("->")).collect();
        assert_eq!(edges, vec!["  J1 -> J2;", "  J2 -> J1;", "  J2 -> J2;"]);
    }

    #[test]
    fn fixed_points() {
        let f = PLinearMap::new(&pat("2 3 1"));
        assert_eq!(f.fixed_point().unwrap(), (q(7, 3), 2));
        let f = PLinearMap::new(&pat("2 1"));
        assert_eq!(f.fixed_point().unwrap(), (q(3, 2), 1));
        let f = PLinearMap::new(&pat("3 5 4 2 1"));
        assert_eq!(f.fixed_point().unwrap().1, 3);
        let f = PLinearMap::new(&pat("3 1 4 2"));
        assert!(f.fixed_point().is_err());
        assert_eq!(f.fixed_points().len(), 3);
    }

    #[test]
    fn germs() {
        let p = pat("2 3 1");
        assert_eq!(
            germ_map(&p, Germ::new(1, Side::R)).unwrap(),
            Germ::new(2, Side::R)
        );
        assert_eq!(
            germ_map(&p, Germ::new(2, Side::R)).unwrap(),
            Germ::new(3, Side::L)
        );
        assert_eq!(
            germ_map(&p, Germ::new(3, Side::L)).unwrap(),
            Germ::new(1, Side::R)
        );
        assert!(germ_map(&p, Germ::new(1, Side::L)).is_err());
        assert!(germ_map(&p, Germ::new(3, Side::R)).is_err());
    }

    #[test]
    fn loops() {
        let fl = fundamental_loop(&pat("2 3 1")).unwrap();
        assert_eq!(
            fl.germs,
            vec![
                Germ::new(1, Side::R),
                Germ::new(2, Side::R),
                Germ::new(3, Side::L)
            ]
        );
        assert_eq!(fl.intervals, vec![1, 2, 2]);
        use PrimeInterval::*;
        assert_eq!(
            fundamental_loop_pprime(&pat("2 3 1")).unwrap(),
            vec![Basic(1), Left, Right]
        );
        assert!(fundamental_loop_pprime(&pat("3 1 4 2")).is_err());
        // divergent patterns still have a germ loop
        assert_eq!(fundamental_loop(&pat("3 1 4 2")).unwrap().germs.len(), 4);
    }
}
