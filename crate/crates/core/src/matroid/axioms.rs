//! Checkers for the independence, rank and metric axioms over ground sets
//! of at most 64 elements, with subsets encoded as bitmasks.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    #[error("I1: the empty set is dependent")]
    EmptyDependent,
    #[error("I2: {sub:#x} is dependent but contained in independent {set:#x}")]
    NotHereditary { set: u64, sub: u64 },
    #[error("I3: no element of {larger:#x} extends {smaller:#x}")]
    NoExchange { smaller: u64, larger: u64 },
    #[error("R1: r({set:#x}) = {rank} is outside [0, |X|]")]
    RankBound { set: u64, rank: usize },
    #[error("R2: {sub:#x} ⊆ {set:#x} but r decreases")]
    NotMonotone { set: u64, sub: u64 },
    #[error("R3: submodularity fails for {x:#x}, {y:#x}")]
    NotSubmodular { x: u64, y: u64 },
    #[error("metric: {0}")]
    Metric(String),
}

/// (I2) in the one-step form: removing any element of an independent set
/// leaves it independent. Together with (I1) this implies heredity.
pub fn check_hereditary(set: u64, indep: &impl Fn(u64) -> bool) -> Result<(), AxiomViolation> {
    if !indep(set) {
        return Ok(());
    }
    for i in bits(set) {
        let sub = set & !(1 << i);
        if !indep(sub) {
            return Err(AxiomViolation::NotHereditary { set, sub });
        }
    }
    Ok(())
}

/// (I3) for one pair.
pub fn check_exchange(x: u64, y: u64, indep: &impl Fn(u64) -> bool) -> Result<(), AxiomViolation> {
    let (smaller, larger) = if x.count_ones() <= y.count_ones() { (x, y) } else { (y, x) };
    if smaller.count_ones() == larger.count_ones() || !indep(smaller) || !indep(larger) {
        return Ok(());
    }
    if bits(larger & !smaller).any(|i| indep(smaller | 1 << i)) {
        Ok(())
    } else {
        Err(AxiomViolation::NoExchange { smaller, larger })
    }
}

/// (I1)–(I3) over every subset and every pair of subsets of an `n`-element
/// ground set.
pub fn check_independence_exhaustive(n: u32, indep: impl Fn(u64) -> bool) -> Result<(), AxiomViolation> {
    assert!(n <= 16, "exhaustive pair check limited to 16 elements");
    let all: Vec<u64> = (0..1u64 << n).collect();
    let table: Vec<bool> = all.iter().map(|&s| indep(s)).collect();
    let lookup = |s: u64| table[s as usize];
    if !lookup(0) {
        return Err(AxiomViolation::EmptyDependent);
    }
    for &s in &all {
        check_hereditary(s, &lookup)?;
    }
    for &x in &all {
        for &y in &all {
            check_exchange(x, y, &lookup)?;
        }
    }
    Ok(())
}

/// (R1) and (R2) for one pair and (R3) for `x`, `y`.
pub fn check_rank_pair(x: u64, y: u64, rank: &impl Fn(u64) -> usize) -> Result<(), AxiomViolation> {
    let (rx, ry, ru, ri) = (rank(x), rank(y), rank(x | y), rank(x & y));
    for (s, r) in [(x, rx), (y, ry), (x | y, ru), (x & y, ri)] {
        if r > s.count_ones() as usize {
            return Err(AxiomViolation::RankBound { set: s, rank: r });
        }
    }
    for (sub, r) in [(x, rx), (y, ry), (x & y, ri)] {
        if r > ru {
            return Err(AxiomViolation::NotMonotone { set: x | y, sub });
        }
    }
    if ri > rx.min(ry) {
        return Err(AxiomViolation::NotMonotone { set: if rx < ry { x } else { y }, sub: x & y });
    }
    if ru + ri > rx + ry {
        return Err(AxiomViolation::NotSubmodular { x, y });
    }
    Ok(())
}

/// (R1)–(R3) over every pair of subsets of an `n`-element ground set.
pub fn check_rank_exhaustive(n: u32, rank: impl Fn(u64) -> usize) -> Result<(), AxiomViolation> {
    assert!(n <= 16, "exhaustive pair check limited to 16 elements");
    let table: Vec<usize> = (0..1u64 << n).map(&rank).collect();
    let lookup = |s: u64| table[s as usize];
    for x in 0..1u64 << n {
        for y in 0..1u64 << n {
            check_rank_pair(x, y, &lookup)?;
        }
    }
    Ok(())
}

/// Symmetry, identity of indiscernibles and the triangle inequality for
/// `dist` on points `0..n`.
pub fn check_metric(n: usize, dist: impl Fn(usize, usize) -> usize) -> Result<(), AxiomViolation> {
    let d: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| dist(i, j)).collect()).collect();
    for i in 0..n {
        for j in 0..n {
            if d[i][j] != d[j][i] {
                return Err(AxiomViolation::Metric(format!("asymmetric at ({i}, {j})")));
            }
            if (d[i][j] == 0) != (i == j) {
                return Err(AxiomViolation::Metric(format!("d({i}, {j}) = {}", d[i][j])));
            }
            for k in 0..n {
                if d[i][k] > d[i][j] + d[j][k] {
                    return Err(AxiomViolation::Metric(format!("triangle fails at ({i}, {j}, {k})")));
                }
            }
        }
    }
    Ok(())
}

fn bits(mut s: u64) -> impl Iterator<Item = u32> {
    std::iter::from_fn(move || {
        if s == 0 {
            None
        } else {
            let i = s.trailing_zeros();
            s &= s - 1;
            Some(i)
        }
    })
}
