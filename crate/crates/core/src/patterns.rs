//! Cyclic permutations of `{1..n}` and the purely combinatorial classifiers
//! on them: flips, block structure, division, convergence, over-rotation
//! pairs and the Štefan family.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("empty input")]
    Empty,
    #[error("invalid token `{0}`")]
    BadToken(String),
    #[error("not a bijection of 1..{0}")]
    NotBijection(usize),
    #[error("not a single cycle")]
    NotSingleCycle,
    #[error("Štefan patterns need an odd period >= 3, got {0}")]
    StefanPeriod(usize),
    #[error("doubling needs a base period >= 2, got {0}")]
    DoublingPeriod(usize),
}

/// A cyclic permutation in one-line notation, `images[i - 1] = π(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Pattern {
    images: Vec<usize>,
}

impl Pattern {
    /// Validates a one-line notation.
    pub fn new(images: Vec<usize>) -> Result<Self, PatternError> {
        let n = images.len();
        if n == 0 {
            return Err(PatternError::Empty);
        }
        let mut seen = vec![false; n];
        for &v in &images {
            if v == 0 || v > n || seen[v - 1] {
                return Err(PatternError::NotBijection(n));
            }
            seen[v - 1] = true;
        }
        let mut len = 1;
        let mut x = images[0];
        while x != 1 {
            x = images[x - 1];
            len += 1;
        }
        if len != n {
            return Err(PatternError::NotSingleCycle);
        }
        Ok(Self { images })
    }

    /// Skips validation; callers guarantee a single n-cycle.
    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Self::new(images.clone()).is_ok(), "{images:?}");
        Self { images }
    }

    /// Parses cycle notation such as `(1 4 6 2 3 5)`.
    pub fn from_cycle_notation(text: &str) -> Result<Self, PatternError> {
        let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
        let cycle = parse_tokens(inner)?;
        let n = cycle.len();
        let mut images = vec![0; n];
        for (i, &x) in cycle.iter().enumerate() {
            if x == 0 || x > n || images[x - 1] != 0 {
                return Err(PatternError::NotBijection(n));
            }
            images[x - 1] = cycle[(i + 1) % n];
        }
        Self::new(images)
    }

    /// The cycle starting at 1, e.g. `(1 4 6 2 3 5)`.
    pub fn to_cycle_notation(&self) -> String {
        let mut parts = Vec::with_capacity(self.period());
        let mut x = 1;
        for _ in 0..self.period() {
            parts.push(x.to_string());
            x = self.image(x);
        }
        format!("({})", parts.join(" "))
    }

    pub fn period(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// π(i) for 1-based `i`.
    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    /// The inverse permutation, 1-based.
    pub fn preimage(&self, y: usize) -> usize {
        self.images
            .iter()
            .position(|&v| v == y)
            .map(|i| i + 1)
            .expect("valid image")
    }

    /// π′(i) = n+1−π(n+1−i).
    pub fn flip(&self) -> Self {
        let n = self.period();
        let images = (1..=n).map(|i| n + 1 - self.image(n + 1 - i)).collect();
        Self { images }
    }

    /// Lexicographically smaller of the pattern and its flip.
    pub fn canonical(&self) -> Self {
        let flipped = self.flip();
        if flipped.images < self.images {
            flipped
        } else {
            self.clone()
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.flip_cmp() != Ordering::Less
    }

    // Ordering of flip(self) against self without allocating.
    fn flip_cmp(&self) -> Ordering {
        let n = self.period();
        for i in 1..=n {
            let f = n + 1 - self.image(n + 1 - i);
            match f.cmp(&self.image(i)) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    }

    /// Every block decomposition, ordered by increasing block size.
    pub fn block_structures(&self) -> Vec<BlockDecomposition> {
        let n = self.period();
        (2..n)
            .filter(|m| n.is_multiple_of(*m))
            .filter_map(|m| self.blocks_of_size(m))
            .collect()
    }

    /// The decomposition into consecutive blocks of `m` points, if π permutes them.
    pub fn blocks_of_size(&self, m: usize) -> Option<BlockDecomposition> {
        let n = self.period();
        if m <= 1 || m >= n || !n.is_multiple_of(m) {
            return None;
        }
        let k = n / m;
        let mut factor = Vec::with_capacity(k);
        for j in 0..k {
            let target = (self.image(j * m + 1) - 1) / m;
            if (j * m + 2..=(j + 1) * m).any(|i| (self.image(i) - 1) / m != target) {
                return None;
            }
            factor.push(target + 1);
        }
        Some(BlockDecomposition {
            block_size: m,
            block_count: k,
            factor: Pattern::from_images_unchecked(factor),
        })
    }

    pub fn has_block_structure(&self) -> bool {
        let n = self.period();
        (2..n).any(|m| n.is_multiple_of(m) && self.blocks_of_size(m).is_some())
    }

    /// n = 2m and the left half maps into the right half.
    pub fn has_division(&self) -> bool {
        let n = self.period();
        n.is_multiple_of(2) && (1..=n / 2).all(|i| self.image(i) > n / 2)
    }

    pub fn is_doubling(&self) -> bool {
        self.blocks_of_size(2).is_some()
    }

    /// Displacement signs form a single `+` run followed by a single `−` run.
    pub fn is_convergent(&self) -> bool {
        let n = self.period();
        let ups = (1..=n).take_while(|&i| self.image(i) > i).count();
        ups > 0 && ups < n && (ups + 1..=n).all(|i| self.image(i) < i)
    }

    /// Number of points whose displacement changes sign after one step.
    fn sign_changes(&self) -> usize {
        (1..=self.period())
            .filter(|&i| {
                let j = self.image(i);
                (j > i) != (self.image(j) > j)
            })
            .count()
    }

    /// The over-rotation pair; `None` for the fixed point pattern.
    pub fn over_rotation_pair(&self) -> Option<OrpPair> {
        let n = self.period();
        if n < 2 {
            return None;
        }
        let m = self.sign_changes();
        debug_assert!(m.is_multiple_of(2) && m > 0);
        Some(OrpPair { p: m / 2, q: n })
    }

    pub fn over_rotation_number(&self) -> Option<Ratio<i64>> {
        self.over_rotation_pair().map(|o| o.ratio())
    }

    /// Štefan pattern of odd period `2n+1`.
    pub fn stefan(period: usize) -> Result<Self, PatternError> {
        if period < 3 || period.is_multiple_of(2) {
            return Err(PatternError::StefanPeriod(period));
        }
        let n = (period - 1) / 2;
        let images = (1..=period)
            .map(|i| match i {
                1 => n + 1,
                i if i <= n + 1 => 2 * n + 3 - i,
                i => 2 * n + 2 - i,
            })
            .collect();
        Ok(Self::from_images_unchecked(images))
    }

    /// A doubling of `self` with two-point blocks.
    ///
    /// Points `2i−1, 2i` go to `2σ(i)−1, 2σ(i)` in order, except that the
    /// images of block 1 are swapped; the order-preserving lift alone is a
    /// pair of k-cycles and the swap joins them into one 2k-cycle.
    pub fn doubling(&self) -> Result<Self, PatternError> {
        let k = self.period();
        if k < 2 {
            return Err(PatternError::DoublingPeriod(k));
        }
        let mut images = Vec::with_capacity(2 * k);
        for i in 1..=k {
            let t = self.image(i);
            if i == 1 {
                images.extend([2 * t, 2 * t - 1]);
            } else {
                images.extend([2 * t - 1, 2 * t]);
            }
        }
        Ok(Self::from_images_unchecked(images))
    }

    pub fn is_stefan(&self) -> bool {
        let n = self.period();
        n >= 3 && n % 2 == 1 && self.canonical() == Self::stefan(n).expect("odd").canonical()
    }
}

/// Classifier summary with frozen field names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub period: usize,
    pub convergent: bool,
    pub division: bool,
    pub doubling: bool,
    pub block_sizes: Vec<usize>,
    pub orp: Option<[usize; 2]>,
    pub rho: Option<String>,
}

impl Pattern {
    pub fn classify(&self) -> Classification {
        let orp = self.over_rotation_pair();
        Classification {
            period: self.period(),
            convergent: self.is_convergent(),
            division: self.has_division(),
            doubling: self.is_doubling(),
            block_sizes: self
                .block_structures()
                .iter()
                .map(|d| d.block_size)
                .collect(),
            orp: orp.map(|o| [o.p, o.q]),
            rho: orp.map(|o| o.ratio().to_string()),
        }
    }
}

fn parse_tokens(text: &str) -> Result<Vec<usize>, PatternError> {
    let tokens: Vec<&str> = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .collect();
    if tokens.is_empty() {
        return Err(PatternError::Empty);
    }
    tokens
        .into_iter()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| PatternError::BadToken(t.to_string()))
        })
        .collect()
}

/// Parses one-line notation, e.g. `"3 5 4 2 1"`.
pub fn parse_pattern(text: &str) -> Result<Pattern, PatternError> {
    Pattern::new(parse_tokens(text)?)
}

impl FromStr for Pattern {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_pattern(s)
    }
}

impl TryFrom<Vec<usize>> for Pattern {
    type Error = PatternError;

    fn try_from(images: Vec<usize>) -> Result<Self, Self::Error> {
        Pattern::new(images)
    }
}

impl From<Pattern> for Vec<usize> {
    fn from(p: Pattern) -> Self {
        p.images
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Consecutive blocks `Y_j = {(j−1)m+1, …, jm}` permuted by π.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub block_size: usize,
    pub block_count: usize,
    /// The pattern obtained by collapsing each block to a point.
    pub factor: Pattern,
}

/// Over-rotation pair `(p, q)` with `0 < p/q <= 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrpPair {
    pub p: usize,
    pub q: usize,
}

impl OrpPair {
    pub fn new(p: usize, q: usize) -> Option<Self> {
        (p >= 1 && q >= 2 && 2 * p <= q).then_some(Self { p, q })
    }

    pub fn ratio(&self) -> Ratio<i64> {
        Ratio::new(self.p as i64, self.q as i64)
    }

    pub fn is_coprime(&self) -> bool {
        self.p.gcd(&self.q) == 1
    }

    /// `(p/g, q/g)` and the multiplier `g`.
    pub fn reduced(&self) -> (usize, usize, usize) {
        let g = self.p.gcd(&self.q);
        (self.p / g, self.q / g, g)
    }
}

impl fmt::Display for OrpPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.p, self.q)
    }
}
