//! Exact two-phase revised simplex.
//!
//! Every problem is a maximisation. Variables carry optional lower and upper
//! bounds which are folded into the standard form before solving. Pivoting
//! follows Bland's rule (smallest entering index, smallest leaving variable on
//! ratio ties), so the solver terminates and is bit-for-bit reproducible. The
//! basis inverse is kept dense; columns are sparse.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

type Q = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    /// Sparse coefficients `(variable, value)`.
    pub coeffs: Vec<(usize, Q)>,
    pub relation: Relation,
    pub rhs: Q,
}

/// `None` on either side means unbounded in that direction.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    pub lo: Option<Q>,
    pub hi: Option<Q>,
}

impl Bounds {
    pub fn non_negative() -> Self {
        Bounds {
            lo: Some(Q::zero()),
            hi: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    objective: Vec<Q>,
    constraints: Vec<Constraint>,
    bounds: Vec<Bounds>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Values of the original variables; empty unless `Optimal`.
    pub values: Vec<Q>,
    pub objective_value: Q,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions {
    /// Hard cap on the number of pivots across both phases.
    pub iteration_cap: Option<usize>,
}

impl LpProblem {
    /// Maximise `objective . x` with every variable in `[0, inf)`.
    pub fn new(objective: Vec<Q>) -> Self {
        let n = objective.len();
        LpProblem {
            objective,
            constraints: Vec::new(),
            bounds: vec![Bounds::non_negative(); n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn objective(&self) -> &[Q] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn bounds(&self) -> &[Bounds] {
        &self.bounds
    }

    pub fn add_constraint<I>(&mut self, coeffs: I, relation: Relation, rhs: Q)
    where
        I: IntoIterator<Item = (usize, Q)>,
    {
        let coeffs = coeffs.into_iter().filter(|(_, a)| !a.is_zero()).collect();
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    /// Adds a constraint from a dense coefficient vector, which must have one
    /// entry per variable.
    pub fn add_dense_constraint(
        &mut self,
        coeffs: Vec<Q>,
        relation: Relation,
        rhs: Q,
    ) -> Result<()> {
        if coeffs.len() != self.num_vars() {
            return Err(Error::Dimension(format!(
                "constraint has {} coefficients, problem has {} variables",
                coeffs.len(),
                self.num_vars()
            )));
        }
        self.add_constraint(coeffs.into_iter().enumerate(), relation, rhs);
        Ok(())
    }

    pub fn set_bounds(&mut self, var: usize, lo: Option<Q>, hi: Option<Q>) -> Result<()> {
        let n = self.num_vars();
        let slot = self
            .bounds
            .get_mut(var)
            .ok_or_else(|| Error::Dimension(format!("variable {var} out of range 0..{n}")))?;
        *slot = Bounds { lo, hi };
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.bounds.len() != n {
            return Err(Error::Dimension(
                "bounds length differs from objective".into(),
            ));
        }
        for (r, c) in self.constraints.iter().enumerate() {
            if let Some((v, _)) = c.coeffs.iter().find(|(v, _)| *v >= n) {
                return Err(Error::Dimension(format!(
                    "constraint {r} references variable {v}, problem has {n}"
                )));
            }
        }
        for (v, b) in self.bounds.iter().enumerate() {
            if let (Some(lo), Some(hi)) = (&b.lo, &b.hi) {
                if lo > hi {
                    return Err(Error::Dimension(format!("variable {v} has lo > hi")));
                }
            }
        }
        Ok(())
    }

    /// Exact feasibility check of a point against constraints and bounds.
    pub fn is_feasible(&self, x: &[Q]) -> bool {
        if x.len() != self.num_vars() {
            return false;
        }
        let bounds_ok = self.bounds.iter().zip(x).all(|(b, v)| {
            b.lo.as_ref().is_none_or(|lo| v >= lo) && b.hi.as_ref().is_none_or(|hi| v <= hi)
        });
        bounds_ok
            && self.constraints.iter().all(|c| {
                let lhs: Q = c.coeffs.iter().map(|(v, a)| a * &x[*v]).sum();
                match c.relation {
                    Relation::Le => lhs <= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                    Relation::Ge => lhs >= c.rhs,
                }
            })
    }

    pub fn objective_at(&self, x: &[Q]) -> Q {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }
}

pub fn lp_solve(problem: &LpProblem) -> Result<LpSolution> {
    lp_solve_with(problem, SolveOptions::default())
}

pub fn lp_solve_with(problem: &LpProblem, options: SolveOptions) -> Result<LpSolution> {
    problem.validate()?;
    let standard = StandardForm::build(problem);
    let mut tableau = Revised::new(&standard);
    let iterations = tableau.run(&standard, options.iteration_cap)?;
    let status = tableau.status;
    if status != LpStatus::Optimal {
        return Ok(LpSolution {
            status,
            values: Vec::new(),
            objective_value: Q::zero(),
            iterations,
        });
    }
    let col_values = tableau.column_values(standard.columns.len());
    let values = standard.recover(&col_values);
    let objective_value = problem.objective_at(&values);
    debug_assert!(
        problem.is_feasible(&values),
        "simplex returned an infeasible point"
    );
    Ok(LpSolution {
        status,
        values,
        objective_value,
        iterations,
    })
}

/// How an original variable is expressed through non-negative columns:
/// `x = shift + sum(sign * column)`.
#[derive(Debug, Clone)]
struct VarMap {
    shift: Q,
    parts: Vec<(usize, bool)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColumnKind {
    Structural,
    Slack,
    Artificial,
}

/// `A x = b`, `x >= 0`, `b >= 0`, maximise `c . x`.
struct StandardForm {
    columns: Vec<Vec<(usize, Q)>>,
    kinds: Vec<ColumnKind>,
    cost: Vec<Q>,
    rhs: Vec<Q>,
    /// For every row, the column that starts in the basis.
    initial_basis: Vec<usize>,
    /// `columns` again where every coefficient is a machine integer.
    int_columns: Vec<Option<Vec<(usize, i64)>>>,
    var_maps: Vec<VarMap>,
}

impl StandardForm {
    fn build(problem: &LpProblem) -> Self {
        let mut columns: Vec<Vec<(usize, Q)>> = Vec::new();
        let mut cost: Vec<Q> = Vec::new();
        let mut var_maps = Vec::with_capacity(problem.num_vars());
        // Upper-bound rows added for doubly bounded variables: (column, hi - lo).
        let mut bound_rows: Vec<(usize, Q)> = Vec::new();

        for (v, b) in problem.bounds.iter().enumerate() {
            let c = problem.objective[v].clone();
            let col = columns.len();
            let map = match (&b.lo, &b.hi) {
                (Some(lo), hi) => {
                    columns.push(Vec::new());
                    cost.push(c);
                    if let Some(hi) = hi {
                        bound_rows.push((col, hi - lo));
                    }
                    VarMap {
                        shift: lo.clone(),
                        parts: vec![(col, true)],
                    }
                }
                (None, Some(hi)) => {
                    columns.push(Vec::new());
                    cost.push(-c);
                    VarMap {
                        shift: hi.clone(),
                        parts: vec![(col, false)],
                    }
                }
                (None, None) => {
                    columns.push(Vec::new());
                    columns.push(Vec::new());
                    cost.push(c.clone());
                    cost.push(-c);
                    VarMap {
                        shift: Q::zero(),
                        parts: vec![(col, true), (col + 1, false)],
                    }
                }
            };
            var_maps.push(map);
        }
        let mut kinds = vec![ColumnKind::Structural; columns.len()];

        // Rows in structural-column space, with relation and adjusted rhs.
        let mut rows: Vec<(Vec<(usize, Q)>, Relation, Q)> = Vec::new();
        for c in &problem.constraints {
            let mut coeffs: Vec<(usize, Q)> = Vec::new();
            let mut rhs = c.rhs.clone();
            for (v, a) in &c.coeffs {
                let map = &var_maps[*v];
                rhs -= a * &map.shift;
                for &(col, positive) in &map.parts {
                    coeffs.push((col, if positive { a.clone() } else { -a.clone() }));
                }
            }
            rows.push((coeffs, c.relation, rhs));
        }
        for (col, width) in bound_rows {
            rows.push((vec![(col, Q::one())], Relation::Le, width));
        }

        let mut rhs_out = Vec::with_capacity(rows.len());
        let mut initial_basis = Vec::with_capacity(rows.len());
        for (r, (coeffs, relation, rhs)) in rows.into_iter().enumerate() {
            let flip = rhs.is_negative();
            let sign = |q: Q| if flip { -q } else { q };
            for (col, a) in coeffs {
                columns[col].push((r, sign(a)));
            }
            let slack_coeff = match relation {
                Relation::Le => Some(Q::one()),
                Relation::Ge => Some(-Q::one()),
                Relation::Eq => None,
            };
            let mut basic = None;
            if let Some(s) = slack_coeff {
                let s = sign(s);
                let positive = s.is_positive();
                columns.push(vec![(r, s)]);
                kinds.push(ColumnKind::Slack);
                cost.push(Q::zero());
                if positive {
                    basic = Some(columns.len() - 1);
                }
            }
            let basic = basic.unwrap_or_else(|| {
                columns.push(vec![(r, Q::one())]);
                kinds.push(ColumnKind::Artificial);
                cost.push(Q::zero());
                columns.len() - 1
            });
            initial_basis.push(basic);
            rhs_out.push(sign(rhs));
        }

        let int_columns = columns
            .iter()
            .map(|col| {
                col.iter()
                    .map(|(r, a)| {
                        small_integer(a)
                            .and_then(|v| i64::try_from(v).ok())
                            .map(|v| (*r, v))
                    })
                    .collect()
            })
            .collect();
        StandardForm {
            columns,
            int_columns,
            kinds,
            cost,
            rhs: rhs_out,
            initial_basis,
            var_maps,
        }
    }

    fn recover(&self, col_values: &[Q]) -> Vec<Q> {
        self.var_maps
            .iter()
            .map(|m| {
                m.parts
                    .iter()
                    .fold(m.shift.clone(), |acc, &(col, positive)| {
                        if positive {
                            acc + &col_values[col]
                        } else {
                            acc - &col_values[col]
                        }
                    })
            })
            .collect()
    }
}

fn small_integer(q: &Q) -> Option<i128> {
    if q.is_integer() {
        q.numer().to_i128()
    } else {
        None
    }
}

/// Duals multiplied by the lcm of their denominators, when everything fits
/// in `i128`. Pricing integer columns against them needs no rational
/// arithmetic; only the sign of the reduced cost matters.
struct ScaledDuals {
    lcm: i128,
    y: Vec<i128>,
}

impl ScaledDuals {
    fn new(y: &[Q]) -> Option<Self> {
        let lcm = y.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let scaled = y
            .iter()
            .map(|v| (v.numer() * (&lcm / v.denom())).to_i128())
            .collect::<Option<Vec<_>>>()?;
        Some(ScaledDuals {
            lcm: lcm.to_i128()?,
            y: scaled,
        })
    }

    /// Whether `c - y . a` is positive; `None` on overflow.
    fn reduced_cost_sign(&self, c: i128, column: &[(usize, i64)]) -> Option<bool> {
        let mut acc = c.checked_mul(self.lcm)?;
        for &(r, a) in column {
            acc = acc.checked_sub(self.y[r].checked_mul(a as i128)?)?;
        }
        Some(acc > 0)
    }
}

struct Revised {
    /// Row-major dense basis inverse.
    binv: Vec<Vec<Q>>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    /// Artificial columns that have left the basis and may never return.
    retired: Vec<bool>,
    values: Vec<Q>,
    status: LpStatus,
}

impl Revised {
    fn new(sf: &StandardForm) -> Self {
        let m = sf.rhs.len();
        let mut binv = vec![vec![Q::zero(); m]; m];
        for (r, row) in binv.iter_mut().enumerate() {
            row[r] = Q::one();
        }
        let mut in_basis = vec![false; sf.columns.len()];
        for &b in &sf.initial_basis {
            in_basis[b] = true;
        }
        Revised {
            binv,
            basis: sf.initial_basis.clone(),
            in_basis,
            retired: vec![false; sf.columns.len()],
            values: sf.rhs.clone(),
            status: LpStatus::Optimal,
        }
    }

    fn run(&mut self, sf: &StandardForm, cap: Option<usize>) -> Result<usize> {
        let mut iterations = 0;
        let has_artificial = self
            .basis
            .iter()
            .any(|&b| sf.kinds[b] == ColumnKind::Artificial);
        if has_artificial {
            let phase1: Vec<Q> = sf
                .kinds
                .iter()
                .map(|k| {
                    if *k == ColumnKind::Artificial {
                        -Q::one()
                    } else {
                        Q::zero()
                    }
                })
                .collect();
            let outcome = self.optimize(sf, &phase1, true, cap, &mut iterations)?;
            debug_assert_eq!(outcome, LpStatus::Optimal, "phase one is bounded");
            let infeasible = self
                .basis
                .iter()
                .zip(&self.values)
                .any(|(&b, v)| sf.kinds[b] == ColumnKind::Artificial && v.is_positive());
            if infeasible {
                self.status = LpStatus::Infeasible;
                return Ok(iterations);
            }
            self.drive_out_artificials(sf);
        }
        self.status = self.optimize(sf, &sf.cost, false, cap, &mut iterations)?;
        Ok(iterations)
    }

    fn optimize(
        &mut self,
        sf: &StandardForm,
        cost: &[Q],
        phase_one: bool,
        cap: Option<usize>,
        iterations: &mut usize,
    ) -> Result<LpStatus> {
        let m = self.basis.len();
        let int_cost: Vec<Option<i128>> = cost.iter().map(small_integer).collect();
        loop {
            let y = self.duals(cost);
            let scaled = ScaledDuals::new(&y);
            let entering = (0..sf.columns.len()).find(|&j| {
                if self.in_basis[j] || self.retired[j] {
                    return false;
                }
                if !phase_one && sf.kinds[j] == ColumnKind::Artificial {
                    return false;
                }
                let fast = match (&scaled, &sf.int_columns[j], int_cost[j]) {
                    (Some(s), Some(col), Some(c)) => s.reduced_cost_sign(c, col),
                    _ => None,
                };
                fast.unwrap_or_else(|| {
                    sf.columns[j]
                        .iter()
                        .fold(cost[j].clone(), |acc, (r, a)| acc - &y[*r] * a)
                        .is_positive()
                })
            });
            let Some(j) = entering else {
                return Ok(LpStatus::Optimal);
            };
            let u = self.ftran(&sf.columns[j]);
            let mut leave: Option<(usize, Q)> = None;
            for r in 0..m {
                if !u[r].is_positive() {
                    continue;
                }
                let theta = &self.values[r] / &u[r];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => {
                        theta < *best || (theta == *best && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, theta));
                }
            }
            let Some((r, _)) = leave else {
                return Ok(LpStatus::Unbounded);
            };
            if let Some(cap) = cap {
                if *iterations >= cap {
                    return Err(Error::IterationLimit(cap));
                }
            }
            *iterations += 1;
            self.pivot(sf, r, j, &u);
        }
    }

    /// `y = c_B^T B^{-1}`.
    fn duals(&self, cost: &[Q]) -> Vec<Q> {
        let m = self.basis.len();
        let mut y = vec![Q::zero(); m];
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (k, yk) in y.iter_mut().enumerate() {
                let e = &self.binv[r][k];
                if !e.is_zero() {
                    *yk += cb * e;
                }
            }
        }
        y
    }

    /// `B^{-1} a` for a sparse column `a`.
    fn ftran(&self, column: &[(usize, Q)]) -> Vec<Q> {
        self.binv
            .iter()
            .map(|row| {
                column.iter().fold(Q::zero(), |acc, (k, a)| {
                    let e = &row[*k];
                    if e.is_zero() {
                        acc
                    } else {
                        acc + e * a
                    }
                })
            })
            .collect()
    }

    fn pivot(&mut self, sf: &StandardForm, r: usize, j: usize, u: &[Q]) {
        let pivot = u[r].clone();
        let pivot_row: Vec<Q> = self.binv[r].iter().map(|e| e / &pivot).collect();
        let pivot_val = &self.values[r] / &pivot;
        for (i, row) in self.binv.iter_mut().enumerate() {
            if i == r || u[i].is_zero() {
                continue;
            }
            let f = &u[i];
            for (e, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *e -= f * p;
                }
            }
            self.values[i] -= f * &pivot_val;
        }
        self.binv[r] = pivot_row;
        self.values[r] = pivot_val;
        let old = self.basis[r];
        self.in_basis[old] = false;
        if sf.kinds[old] == ColumnKind::Artificial {
            self.retired[old] = true;
        }
        self.basis[r] = j;
        self.in_basis[j] = true;
    }

    /// After a feasible phase one, swaps zero-valued artificials for real
    /// columns wherever the row allows it. Rows where no column can enter are
    /// linearly dependent and keep their artificial at zero forever.
    fn drive_out_artificials(&mut self, sf: &StandardForm) {
        for r in 0..self.basis.len() {
            if sf.kinds[self.basis[r]] != ColumnKind::Artificial {
                continue;
            }
            let row = &self.binv[r];
            let candidate = (0..sf.columns.len()).find(|&j| {
                !self.in_basis[j]
                    && sf.kinds[j] != ColumnKind::Artificial
                    && !sf.columns[j]
                        .iter()
                        .fold(Q::zero(), |acc, (k, a)| acc + &row[*k] * a)
                        .is_zero()
            });
            if let Some(j) = candidate {
                let u = self.ftran(&sf.columns[j]);
                self.pivot(sf, r, j, &u);
            }
        }
    }

    fn column_values(&self, ncols: usize) -> Vec<Q> {
        let mut x = vec![Q::zero(); ncols];
        for (r, &b) in self.basis.iter().enumerate() {
            x[b] = self.values[r].clone();
        }
        x
    }
}
