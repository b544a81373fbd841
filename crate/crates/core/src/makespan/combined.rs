use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};

use super::{
    alg1_match_large, alg2_round, alg3_greedy, evaluate_schedule, solve_clp_for, ClpSolution,
};
use crate::error::Result;
use crate::instances::{MakespanInstance, Schedule};
use crate::rational::{rational_json, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Large-edge matching alone.
    S1,
    /// Greedy on small edges, then rounding over the jobs it left.
    S2,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::S1 => "S1",
            Branch::S2 => "S2",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CombinedReport {
    pub m_star: usize,
    pub s1_count: usize,
    pub alg3_count: usize,
    pub rounded_count: usize,
    pub chosen: Branch,
    pub floor: f64,
    pub makespan: Rational,
}

impl CombinedReport {
    pub fn scheduled(&self) -> usize {
        match self.chosen {
            Branch::S1 => self.s1_count,
            Branch::S2 => self.alg3_count + self.rounded_count,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "m_star": self.m_star,
            "s1_count": self.s1_count,
            "alg3_count": self.alg3_count,
            "rounded_count": self.rounded_count,
            "chosen": self.chosen.to_string(),
            "floor": self.floor,
            "makespan": rational_json(&self.makespan),
        })
    }
}

/// Seed-independent part of the combined scheduler, computed once and reused
/// across seeds.
#[derive(Debug, Clone)]
pub struct CombinedPlan {
    s1: Schedule,
    alg3: Schedule,
    remaining: ClpSolution,
}

impl CombinedPlan {
    /// Runs the matching and the greedy pass, then solves the configuration LP
    /// over the jobs the greedy pass left unscheduled.
    pub fn prepare(inst: &MakespanInstance, column_cap: usize) -> Result<Self> {
        let s1 = alg1_match_large(inst);
        let (alg3, _) = alg3_greedy(inst);
        let left: Vec<usize> = (0..inst.jobs())
            .filter(|&j| !alg3.contains_job(j))
            .collect();
        let remaining = solve_clp_for(inst, &left, column_cap)?;
        Ok(CombinedPlan {
            s1,
            alg3,
            remaining,
        })
    }

    pub fn m_star(&self) -> usize {
        self.s1.len()
    }

    pub fn alg3(&self) -> &Schedule {
        &self.alg3
    }

    pub fn remaining_clp(&self) -> &ClpSolution {
        &self.remaining
    }

    pub fn run(&self, inst: &MakespanInstance, seed: u64) -> Result<(Schedule, CombinedReport)> {
        let rounded = alg2_round(&self.remaining, inst, seed);
        let s2 = self.alg3.merged(&rounded)?;
        let (chosen, schedule) = if self.s1.len() >= s2.len() {
            (Branch::S1, self.s1.clone())
        } else {
            (Branch::S2, s2)
        };
        let stats = evaluate_schedule(inst, &schedule)?;
        let report = CombinedReport {
            m_star: self.s1.len(),
            s1_count: self.s1.len(),
            alg3_count: self.alg3.len(),
            rounded_count: rounded.len(),
            chosen,
            floor: theoretical_floor(inst.jobs(), self.s1.len()),
            makespan: stats.makespan,
        };
        Ok((schedule, report))
    }
}

/// The better of the matching and the greedy-plus-rounding schedule.
pub fn combined_schedule(
    inst: &MakespanInstance,
    seed: u64,
    column_cap: usize,
) -> Result<(Schedule, CombinedReport)> {
    CombinedPlan::prepare(inst, column_cap)?.run(inst, seed)
}

/// Expected-count floor `max(m*, g + (1 - 1/e)(n - g))` with `g = (n - m*)/6`.
pub fn theoretical_floor(jobs: usize, m_star: usize) -> f64 {
    let n = jobs as f64;
    let g = (n - m_star as f64) / 6.0;
    let rounded = (1.0 - (-1.0f64).exp()) * (n - g);
    (m_star as f64).max(g + rounded)
}

/// `(6e - 5) / (6e + 1)`, the fraction of jobs guaranteed in expectation.
pub fn balance_fraction() -> f64 {
    let e = std::f64::consts::E;
    (6.0 * e - 5.0) / (6.0 * e + 1.0)
}

/// Exact lower bound on [`balance_fraction`]: the fraction is increasing in
/// `e`, so evaluating it at the partial sum `sum_{k <= 12} 1/k!` bounds it
/// from below.
pub fn balance_fraction_lower_bound() -> BigRational {
    let mut e = BigRational::one();
    let mut term = BigRational::one();
    for k in 1..=12i64 {
        term /= BigRational::from_integer(BigInt::from(k));
        e += &term;
    }
    let six = BigRational::from_integer(BigInt::from(6));
    let five = BigRational::from_integer(BigInt::from(5));
    (&six * &e - five) / (six * e + BigRational::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::makespan::fixtures::*;
    use crate::makespan::DEFAULT_COLUMN_CAP;
    use crate::rational::{int, to_big};

    #[test]
    fn perfect_large_matching_wins() {
        let inst = uniform(3, 3, 3, 3);
        let (s, r) = combined_schedule(&inst, 1, DEFAULT_COLUMN_CAP).unwrap();
        assert_eq!(r.chosen, Branch::S1);
        assert_eq!((s.len(), r.m_star), (3, 3));
        assert!(r.makespan <= inst.target());
    }

    #[test]
    fn two_by_three() {
        let inst = super::super::fixtures::two_by_three();
        for seed in 0..20 {
            let (s, r) = combined_schedule(&inst, seed, DEFAULT_COLUMN_CAP).unwrap();
            assert!(s.len() >= 2);
            assert_eq!(r.scheduled(), s.len());
            assert!(r.makespan <= int(3));
            assert_eq!(r.alg3_count, 2);
        }
    }

    #[test]
    fn balance_point() {
        let c = balance_fraction();
        assert!((c - 0.65337).abs() < 1e-5);
        let n = 1000usize;
        let m_star = (c * n as f64).round() as usize;
        assert!((theoretical_floor(n, m_star) - c * n as f64).abs() < 1.0);
        let lb = balance_fraction_lower_bound();
        assert!(lb > to_big(&Rational::new(6533, 10000)));
        assert!((crate::rational::big_to_f64(&lb) - c).abs() < 1e-9);
    }

    #[test]
    fn report_json_fields() {
        let inst = super::super::fixtures::two_by_three();
        let (_, r) = combined_schedule(&inst, 0, DEFAULT_COLUMN_CAP).unwrap();
        let v = r.to_json();
        for key in [
            "m_star",
            "s1_count",
            "alg3_count",
            "rounded_count",
            "chosen",
            "floor",
            "makespan",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
