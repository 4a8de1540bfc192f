//! Exhaustive checks of the forcing theorems over all patterns up to a
//! period bound, with forced cycles searched up to a period cap.
//!
//! Every suite returns a [`VerificationReport`]; reports are deterministic
//! and do not depend on the execution mode.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use serde::Serialize;

use crate::exec::Execution;
use crate::forcing::{
    close_to_a, default_twist_cap, find_forced, forced_patterns, insert_rotation, is_twist_bounded,
    orp_spectrum, pattern_of_orbit, ForcingError,
};
use crate::markov::{
    fundamental_loop, fundamental_loop_pprime, germ_map, PLinearMap, PrimePartition,
};
use crate::orders::{all_pairs, eta, n_r, orp_precedes, star_precedes};
use crate::patterns::{OrpPair, Pattern};
use crate::walks::CycleEnumerator;

/// Every cyclic permutation of `{1..n}` up to flip, in canonical form,
/// sorted lexicographically.
pub fn enumerate_patterns(n: usize) -> Vec<Pattern> {
    if n == 0 {
        return Vec::new();
    }
    // the cycle (1 c_2 … c_n) for every arrangement of 2..=n
    let mut rest: Vec<usize> = (2..=n).collect();
    let mut out = Vec::new();
    loop {
        let mut images = vec![0; n];
        let mut prev = 1;
        for &c in &rest {
            images[prev - 1] = c;
            prev = c;
        }
        images[prev - 1] = 1;
        let p = Pattern::from_images_unchecked(images);
        if p.is_canonical() {
            out.push(p);
        }
        if !next_permutation(&mut rest) {
            break;
        }
    }
    out.sort();
    out
}

/// Canonical patterns with periods in `lo..=hi`, by period then lexicographically.
pub fn patterns_in_range(lo: usize, hi: usize) -> Vec<Pattern> {
    (lo..=hi).flat_map(enumerate_patterns).collect()
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len())
        .rev()
        .find(|&j| v[j] > v[i])
        .expect("pivot");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// Truncated `ND(f)` and `NBS(f)` of a P-linear map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NdNbsReport {
    pub pattern: Pattern,
    pub cap: usize,
    pub nd: Vec<usize>,
    pub nbs: Vec<usize>,
}

/// Witness search for one period: a forced no-division pattern and a forced
/// no-block-structure pattern, each only if requested.
fn nd_nbs_witnesses(
    enumerator: &CycleEnumerator,
    q: usize,
    want_nd: bool,
    want_nbs: bool,
) -> Result<(bool, bool), ForcingError> {
    let (mut nd, mut nbs) = (false, false);
    let _ = enumerator.visit::<(), _>(q, |p| {
        if !nbs && !p.has_block_structure() {
            nbs = true;
            // at periods above 2 a division is a block structure
            if q > 2 {
                nd = true;
            }
        }
        if !nd && !p.has_division() {
            nd = true;
        }
        if (nd || !want_nd) && (nbs || !want_nbs) {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok((want_nd && nd, want_nbs && nbs))
}

/// Periods in `[3, cap]` of forced cycles with no division / no block structure.
pub fn nd_nbs(pattern: &Pattern, cap: usize) -> Result<NdNbsReport, ForcingError> {
    let enumerator = CycleEnumerator::new(pattern)?;
    let mut nd = Vec::new();
    let mut nbs = Vec::new();
    for q in 3..=cap {
        let (has_nd, has_nbs) = nd_nbs_witnesses(&enumerator, q, true, true)?;
        if has_nd {
            nd.push(q);
        }
        if has_nbs {
            nbs.push(q);
        }
    }
    Ok(NdNbsReport {
        pattern: pattern.clone(),
        cap,
        nd,
        nbs,
    })
}

/// Which case of the trichotomy a truncated `(ND, NBS)` pair matches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Trichotomy {
    Empty,
    Equal { r: usize },
    Split { n: usize },
}

/// Matches `(nd, nbs)` against the truncations to `[3, cap]` of the three
/// admissible shapes. A cutoff beyond `cap` is accepted whenever its
/// truncation agrees; the smallest consistent parameter is reported.
pub fn classify_trichotomy(nd: &[usize], nbs: &[usize], cap: usize) -> Option<Trichotomy> {
    if nd.is_empty() && nbs.is_empty() {
        return Some(Trichotomy::Empty);
    }
    // ranks of truncated n_r stop changing once r passes every rank <= 4·cap+1
    for r in 3..=2 * cap + 3 {
        let set = n_r(r, cap).expect("r >= 3");
        if set == nd && set == nbs {
            return Some(Trichotomy::Equal { r });
        }
    }
    for n in 1..=cap {
        if n_r(4 * n + 2, cap).expect("r >= 3") == nd && n_r(2 * n + 1, cap).expect("r >= 3") == nbs
        {
            return Some(Trichotomy::Split { n });
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Violation {
    pub pattern: String,
    pub claim: String,
    pub witness: String,
}

impl Violation {
    fn new(pattern: &Pattern, claim: impl Into<String>, witness: impl Into<String>) -> Self {
        Self {
            pattern: pattern.to_string(),
            claim: claim.into(),
            witness: witness.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub params: BTreeMap<String, usize>,
    pub checks: usize,
    pub violations: Vec<Violation>,
    pub pass: bool,
}

impl VerificationReport {
    fn build(
        suite: &str,
        params: &[(&str, usize)],
        parts: Vec<Result<Outcome, ForcingError>>,
    ) -> Self {
        let mut checks = 0;
        let mut violations = Vec::new();
        for part in parts {
            match part {
                Ok(o) => {
                    checks += o.checks;
                    violations.extend(o.violations);
                }
                Err(e) => violations.push(Violation {
                    pattern: String::new(),
                    claim: "computation".into(),
                    witness: e.to_string(),
                }),
            }
        }
        Self {
            suite: suite.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            checks,
            pass: violations.is_empty(),
            violations,
        }
    }

    /// Concatenates sub-suite reports under one name.
    pub fn merge(suite: &str, params: &[(&str, usize)], reports: Vec<VerificationReport>) -> Self {
        let mut out = Self::build(suite, params, Vec::new());
        for r in reports {
            out.checks += r.checks;
            out.violations.extend(r.violations.into_iter().map(|mut v| {
                v.claim = format!("{}: {}", r.suite, v.claim);
                v
            }));
        }
        out.pass = out.violations.is_empty();
        out
    }

    pub fn summary(&self) -> String {
        let params: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        format!(
            "{} [{}]: {} checks, {} violations, {}",
            self.suite,
            params.join(" "),
            self.checks,
            self.violations.len(),
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

#[derive(Debug, Default)]
struct Outcome {
    checks: usize,
    violations: Vec<Violation>,
}

impl Outcome {
    fn check(
        &mut self,
        ok: bool,
        pattern: &Pattern,
        claim: impl FnOnce() -> String,
        witness: impl FnOnce() -> String,
    ) {
        self.checks += 1;
        if !ok {
            self.violations
                .push(Violation::new(pattern, claim(), witness()));
        }
    }
}

fn set_str(v: &[usize]) -> String {
    let items: Vec<String> = v.iter().map(usize::to_string).collect();
    format!("{{{}}}", items.join(","))
}

/// Forcing along order (*): no-division (no-block-structure) patterns of
/// period `m` force no-division (no-block-structure) cycles of every period
/// `s <= s_max` with `m ≫ s`.
pub fn verify_forcing_order(m_max: usize, s_max: usize, exec: Execution) -> VerificationReport {
    let patterns = patterns_in_range(3, m_max);
    let parts = exec.map(&patterns, |a| -> Result<Outcome, ForcingError> {
        let mut out = Outcome::default();
        let (nd, nbs) = (!a.has_division(), !a.has_block_structure());
        if !nd && !nbs {
            return Ok(out);
        }
        let m = a.period();
        let enumerator = CycleEnumerator::new(a)?;
        for s in 3..=s_max {
            if !star_precedes(m, s).expect(">= 3") {
                continue;
            }
            let (found_nd, found_nbs) = nd_nbs_witnesses(&enumerator, s, nd, nbs)?;
            if nd {
                out.check(
                    found_nd,
                    a,
                    || format!("no-division period {m} forces no-division period {s}"),
                    || "none found".into(),
                );
            }
            if nbs {
                out.check(
                    found_nbs,
                    a,
                    || {
                        format!(
                            "no-block-structure period {m} forces no-block-structure period {s}"
                        )
                    },
                    || "none found".into(),
                );
            }
        }
        Ok(out)
    });
    VerificationReport::build(
        "forcing-order",
        &[("m_max", m_max), ("s_max", s_max)],
        parts,
    )
}

/// The truncated `(ND, NBS)` of every pattern has one of the three shapes.
pub fn verify_trichotomy(n_max: usize, cap: usize, exec: Execution) -> VerificationReport {
    let patterns = patterns_in_range(2, n_max);
    let parts = exec.map(&patterns, |a| -> Result<Outcome, ForcingError> {
        let mut out = Outcome::default();
        let r = nd_nbs(a, cap)?;
        let witness = || format!("nd={} nbs={}", set_str(&r.nd), set_str(&r.nbs));
        out.check(
            r.nbs.iter().all(|q| r.nd.contains(q)),
            a,
            || "nbs is contained in nd".into(),
            witness,
        );
        out.check(
            classify_trichotomy(&r.nd, &r.nbs, cap).is_some(),
            a,
            || "(nd, nbs) has an admissible shape".into(),
            witness,
        );
        Ok(out)
    });
    VerificationReport::build("trichotomy", &[("max_period", n_max), ("cap", cap)], parts)
}

/// A no-division cycle of period `m` forces a no-block-structure cycle of
/// period `s` when `m ≫ s`, or when `m = s` is not `4n+2`.
pub fn verify_nd_forces_nbs(m_max: usize, s_max: usize, exec: Execution) -> VerificationReport {
    let patterns = patterns_in_range(3, m_max);
    let parts = exec.map(&patterns, |a| -> Result<Outcome, ForcingError> {
        let mut out = Outcome::default();
        if a.has_division() {
            return Ok(out);
        }
        let m = a.period();
        let enumerator = CycleEnumerator::new(a)?;
        for s in 3..=s_max {
            let applies = star_precedes(m, s).expect(">= 3") || (m == s && m % 4 != 2);
            if !applies {
                continue;
            }
            let (_, found) = nd_nbs_witnesses(&enumerator, s, false, true)?;
            out.check(
                found,
                a,
                || format!("no-division period {m} forces no-block-structure period {s}"),
                || "none found".into(),
            );
        }
        Ok(out)
    });
    VerificationReport::build("nd-to-nbs", &[("m_max", m_max), ("s_max", s_max)], parts)
}

/// Štefan cycles as the only cycles at the first odd period with no block
/// structure, Štefan doublings as the only no-division cycles of period
/// `4n+2` when all of those carry block structure, and the resulting
/// characterization of the split case.
pub fn verify_stefan_only(n_max: usize, cap: usize, exec: Execution) -> VerificationReport {
    let patterns = patterns_in_range(2, n_max);
    let parts = exec.map(&patterns, |a| -> Result<Outcome, ForcingError> {
        let mut out = Outcome::default();
        let forced: BTreeMap<usize, Vec<Pattern>> = (3..=cap)
            .filter(|q| q % 2 == 1 || q % 4 == 2)
            .map(|q| Ok((q, forced_patterns(a, q)?.into_iter().collect())))
            .collect::<Result<_, ForcingError>>()?;
        // claim 1
        let first_odd = (3..=cap)
            .step_by(2)
            .find(|q| forced[q].iter().any(|p| !p.has_block_structure()));
        if let Some(q) = first_odd {
            let bad: Vec<String> = forced[&q].iter().filter(|p| !p.is_stefan()).map(|p| p.to_string()).collect();
            out.check(bad.is_empty(), a, || format!("all forced period-{q} cycles are Štefan"), || bad.join("; "));
            for k in (3..q).step_by(2) {
                out.check(forced[&k].is_empty(), a, || format!("no forced cycles of odd period {k} < {q}"), || {
                    forced[&k].iter().map(|p| p.to_string()).collect::<Vec<_>>().join("; ")
                });
            }
        }
        // claim 2 and the split-case characterization
        for n in (1..).take_while(|n| 4 * n + 2 <= cap) {
            let q = 4 * n + 2;
            let nodiv: Vec<&Pattern> = forced[&q].iter().filter(|p| !p.has_division()).collect();
            let all_blocked = !nodiv.is_empty() && nodiv.iter().all(|p| p.has_block_structure());
            let stefan_doublings = !nodiv.is_empty() && nodiv.iter().all(|p| is_stefan_doubling(p));
            if all_blocked {
                out.check(stefan_doublings, a, || format!("blocked no-division period-{q} cycles are Štefan doublings"), || {
                    nodiv.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("; ")
                });
            }
            let split = nd_nbs_witnesses(&CycleEnumerator::new(a)?, q, true, true)?;
            let is_split_case = split.0 && !split.1;
            out.check(is_split_case == stefan_doublings, a, || format!("split case at {q} iff all no-division period-{q} cycles are Štefan doublings"), || {
                format!("nd={} nbs={} doublings={}", split.0, split.1, stefan_doublings)
            });
        }
        Ok(out)
    });
    VerificationReport::build("stefan-only", &[("max_period", n_max), ("cap", cap)], parts)
}

fn is_stefan_doubling(p: &Pattern) -> bool {
    p.blocks_of_size(2).is_some_and(|d| d.factor.is_stefan())
}

/// Every pattern of odd period forces the Štefan pattern of that period.
pub fn verify_stefan_forcing(n_max: usize, exec: Execution) -> VerificationReport {
    let patterns: Vec<Pattern> = (3..=n_max)
        .step_by(2)
        .flat_map(enumerate_patterns)
        .collect();
    let parts = exec.map(&patterns, |a| -> Result<Outcome, ForcingError> {
        let mut out = Outcome::default();
        let found = find_forced(a, a.period(), |p| p.is_stefan())?;
        out.check(
            found.is_some(),
            a,
            || format!("forces the Štefan pattern of period {}", a.period()),
            || "none found".into(),
        );
        Ok(out)
    });
    VerificationReport::build("stefan-forcing", &[("max_period", n_max)], parts)
}

/// For all patterns of period `<= n_max`, the forced over-rotation pairs
/// of periods `<= cap` are closed downward under `⋗`.
pub fn verify_downward_closure(n_max: usize, cap: usize, exec: Execution) -> VerificationReport {
    let patterns = patterns_in_range(2, n_max);
    let pairs: Vec<OrpPair> = all_pairs(cap).collect();
    let parts = exec.map(&patterns, |a| -> Result<Outcome, ForcingError> {
        let mut out = Outcome::default();
        let spectrum = orp_spectrum(a, cap)?;
        let missing: Vec<String> = pairs
            .iter()
            .filter(|&&o| !spectrum.contains(&o) && spectrum.iter().any(|&h| orp_precedes(h, o)))
            .map(|o| format!("({},{})", o.p, o.q))
            .collect();
        out.check(
            missing.is_empty(),
            a,
            || "spectrum is downward closed".into(),
            || missing.join(" "),
        );
        Ok(out)
    });
    VerificationReport::build("closure", &[("max_period", n_max), ("cap", cap)], parts)
}

/// Period bounds for the sub-suites of [`verify_lemmas`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LemmaScale {
    /// Purely combinatorial checks.
    pub combinatorial_max: usize,
    /// Checks that enumerate forced cycles of each pattern.
    pub forcing_max: usize,
    /// Divergent-pattern checks.
    pub divergent_max: usize,
    pub cap: usize,
}

impl LemmaScale {
    pub fn new(n_max: usize, cap: usize) -> Self {
        Self {
            combinatorial_max: n_max,
            forcing_max: n_max.min(7),
            divergent_max: n_max.min(6),
            cap,
        }
    }
}

pub fn verify_lemmas(scale: LemmaScale, exec: Execution) -> VerificationReport {
    let reports = vec![
        lemma_block_divides(scale.combinatorial_max, exec),
        lemma_half_rotation(scale.combinatorial_max, exec),
        lemma_divergent(scale.divergent_max, scale.cap, exec),
        lemma_twist_family(scale.forcing_max, exec),
        lemma_pair_step(scale.forcing_max, scale.cap, exec),
        lemma_eta(scale.forcing_max, scale.cap, exec),
    ];
    VerificationReport::merge(
        "lemmas",
        &[
            ("combinatorial_max", scale.combinatorial_max),
            ("forcing_max", scale.forcing_max),
            ("divergent_max", scale.divergent_max),
            ("cap", scale.cap),
        ],
        reports,
    )
}

/// Block size divides both entries of the over-rotation pair.
pub fn lemma_block_divides(n_max: usize, exec: Execution) -> VerificationReport {
    let periods: Vec<usize> = (2..=n_max).collect();
    let parts = exec.map(&periods, |&n| -> Result<Outcome, ForcingError> {
        let mut out = Outcome::default();
        for a in enumerate_patterns(n) {
            let orp = a.over_rotation_pair().expect("n >= 2");
            for d in a.block_structures() {
                let b = d.block_size;
                out.check(
                    orp.p % b == 0 && orp.q % b == 0,
                    &a,
                    || format!("block size {b} divides the over-rotation pair"),
                    || orp.to_string(),
                );
            }
        }
        Ok(out)
    });
    VerificationReport::build("block-divides", &[("max_period", n_max)], parts)
}

/// For convergent patterns, over-rotation number 1/2 iff division.
pub fn lemma_half_rotation(n_max: usize, exec: Execution) -> VerificationReport {
    let periods: Vec<usize> = (2..=n_max).collect();
    let parts = exec.map(&periods, |&n| -> Result<Outcome, ForcingError> {
        let mut out = Outcome::default();
        for a in enumerate_patterns(n)
            .into_iter()
            .filter(Pattern::is_convergent)
        {
            let orp = a.over_rotation_pair().expect("n >= 2");
            out.check(
                (2 * orp.p == orp.q) == a.has_division(),
                &a,
                || "rho = 1/2 iff division".into(),
                || orp.to_string(),
            );
        }
        Ok(out)
    });
    VerificationReport::build("half-rotation", &[("max_period", n_max)], parts)
}

/// Divergent patterns force pair `(1, q)` and a no-block-structure cycle at
/// every period `2..=cap`.
pub fn lemma_divergent(n_max: usize, cap: usize, exec: Execution) -> VerificationReport {
    let patterns: Vec<Pattern> = patterns_in_range(2, n_max)
        .into_iter()
        .filter(|p| !p.is_convergent())
        .collect();
    let parts = exec.map(&patterns, |a| -> Result<Outcome, ForcingError> {
        let mut out = Outcome::default();
        let enumerator = CycleEnumerator::new(a)?;
        for q in 2..=cap {
            let (mut unit, mut nbs) = (false, false);
            let _ = enumerator.visit::<(), _>(q, |p| {
                unit |= p.over_rotation_pair().is_some_and(|o| o.p == 1);
                nbs |= !p.has_block_structure();
                if unit && nbs {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            })?;
            out.check(
                unit,
                a,
                || format!("forces over-rotation pair (1,{q})"),
                || "none found".into(),
            );
            out.check(
                nbs,
                a,
                || format!("forces a no-block-structure cycle of period {q}"),
                || "none found".into(),
            );
        }
        Ok(out)
    });
    VerificationReport::build("divergent", &[("max_period", n_max), ("cap", cap)], parts)
}

/// Consequences of twist for convergent patterns that are twist up to the
/// default bound: germ directions, the fundamental loops, the point close
/// to `a`, and the rotation insertion.
pub fn lemma_twist_family(n_max: usize, exec: Execution) -> VerificationReport {
    let patterns: Vec<Pattern> = patterns_in_range(2, n_max)
        .into_iter()
        .filter(Pattern::is_convergent)
        .collect();
    let parts = exec.map(&patterns, |a| -> Result<Outcome, ForcingError> {
        let mut out = Outcome::default();
        let cap = default_twist_cap(a);
        if !is_twist_bounded(a, cap)?.is_twist() {
            return Ok(out);
        }
        let n = a.period();
        let partition = PrimePartition::new(a)?;
        let fl = fundamental_loop(a)?;
        let germ_ok = fl.germs.iter().all(|&g| {
            !g.points_toward(partition.a)
                || germ_map(a, g).is_ok_and(|h| h.points_toward(partition.a))
        });
        out.check(
            germ_ok,
            a,
            || "germs pointing toward a map to germs pointing toward a".into(),
            || format!("{:?}", fl.germs),
        );
        let counts_ok = (1..n).all(|i| {
            let c = fl.intervals.iter().filter(|&&j| j == i).count();
            c == if i == partition.c { 2 } else { 1 }
        });
        out.check(
            counts_ok,
            a,
            || "fundamental loop visits I twice and every other interval once".into(),
            || format!("{:?}", fl.intervals),
        );
        let mut prime = fundamental_loop_pprime(a)?;
        prime.sort();
        let mut all = partition.intervals();
        all.sort();
        out.check(
            prime == all,
            a,
            || "fundamental P′ loop passes once through every P′ interval".into(),
            || format!("{prime:?}"),
        );
        if n > 2 {
            let (l, r) = close_to_a(a)?;
            out.check(
                l || r,
                a,
                || "b_l or b_r is the image of a point on its side of a".into(),
                String::new,
            );
        }
        let orp = a.over_rotation_pair().expect("n >= 2");
        if 2 * orp.p < orp.q {
            match insert_rotation(a, cap) {
                Ok(orbit) => {
                    let b = pattern_of_orbit(&orbit);
                    let want = OrpPair {
                        p: orp.p + 1,
                        q: orp.q + 2,
                    };
                    out.check(
                        b.over_rotation_pair() == Some(want),
                        a,
                        || format!("insertion has over-rotation pair ({},{})", want.p, want.q),
                        || b.to_string(),
                    );
                    out.check(
                        !b.is_doubling(),
                        a,
                        || "insertion is not a doubling".into(),
                        || b.to_string(),
                    );
                }
                Err(e) => out.check(false, a, || "insertion realizes".into(), || e.to_string()),
            }
        }
        Ok(out)
    });
    VerificationReport::build("twist", &[("max_period", n_max)], parts)
}

/// Pair `(ks, ms)` with `k/m < 1/2` reduced forces a non-doubling of pair
/// `(k+1, m+2)`; pair `(2n−1, 4n)` forces a no-block-structure cycle of pair
/// `(2n, 4n+2)`.
pub fn lemma_pair_step(n_max: usize, cap: usize, exec: Execution) -> VerificationReport {
    let patterns = patterns_in_range(2, n_max);
    let parts = exec.map(&patterns, |a| -> Result<Outcome, ForcingError> {
        let mut out = Outcome::default();
        let orp = a.over_rotation_pair().expect("n >= 2");
        let (k, m, _) = orp.reduced();
        if 2 * k >= m || m + 2 > cap {
            return Ok(out);
        }
        let want = OrpPair { p: k + 1, q: m + 2 };
        let found = find_forced(a, m + 2, |p| {
            p.over_rotation_pair() == Some(want) && !p.is_doubling()
        })?;
        out.check(
            found.is_some(),
            a,
            || format!("forces a non-doubling of pair ({},{})", want.p, want.q),
            || "none found".into(),
        );
        if m % 4 == 0 && k == m / 2 - 1 {
            let found = find_forced(a, m + 2, |p| {
                p.over_rotation_pair() == Some(want) && !p.has_block_structure()
            })?;
            out.check(
                found.is_some(),
                a,
                || {
                    format!(
                        "forces a no-block-structure cycle of pair ({},{})",
                        want.p, want.q
                    )
                },
                || "none found".into(),
            );
        }
        Ok(out)
    });
    VerificationReport::build("pair-step", &[("max_period", n_max), ("cap", cap)], parts)
}

/// No-division patterns of period `m` force a cycle of pair `η(m)`.
pub fn lemma_eta(n_max: usize, cap: usize, exec: Execution) -> VerificationReport {
    let patterns: Vec<Pattern> = patterns_in_range(3, n_max)
        .into_iter()
        .filter(|p| !p.has_division())
        .collect();
    let parts = exec.map(&patterns, |a| -> Result<Outcome, ForcingError> {
        let mut out = Outcome::default();
        let target = eta(a.period()).expect(">= 3");
        if target.q <= cap {
            let found = find_forced(a, target.q, |p| p.over_rotation_pair() == Some(target))?;
            out.check(
                found.is_some(),
                a,
                || {
                    format!(
                        "forces pair eta({}) = ({},{})",
                        a.period(),
                        target.p,
                        target.q
                    )
                },
                || "none found".into(),
            );
        }
        Ok(out)
    });
    VerificationReport::build("eta", &[("max_period", n_max), ("cap", cap)], parts)
}

/// The P-linear map of a convergent pattern has one fixed point.
pub fn convergent_iff_single_fixed_point(pattern: &Pattern) -> bool {
    pattern.is_convergent() == (PLinearMap::new(pattern).fixed_points().len() == 1)
}
