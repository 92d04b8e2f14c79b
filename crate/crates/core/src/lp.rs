//! Dense two-phase simplex.
//!
//! Problems are stated as
//!
//! ```text
//! maximize    c . x
//! subject to  A_ub x <= b_ub
//!             A_eq x  = b_eq
//!             lo <= x <= hi
//! ```
//!
//! and standardized to `max c'x'  s.t.  A'x' <= b', x' >= 0` by shifting,
//! reflecting or splitting variables. Tall problems (many more rows than
//! columns, which is the shape of the transfer-matrix LP) are solved through
//! their dual so the tableau stays `columns x rows` instead of
//! `rows x (rows + columns)`; the primal point is read off the dual's
//! shadow prices.

use std::fmt;

use crate::error::{Error, Result};

pub const DEFAULT_FEAS_TOL: f64 = 1e-9;
pub const DEFAULT_OPT_TOL: f64 = 1e-9;
pub const DEFAULT_PIVOT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<f64>,
    a_ub: Vec<f64>,
    b_ub: Vec<f64>,
    a_eq: Vec<f64>,
    b_eq: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl LinearProgram {
    /// A program over `num_vars` variables, each defaulting to `0 <= x`.
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![0.0; num_vars],
            a_ub: Vec::new(),
            b_ub: Vec::new(),
            a_eq: Vec::new(),
            b_eq: Vec::new(),
            lower: vec![0.0; num_vars],
            upper: vec![f64::INFINITY; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_inequalities(&self) -> usize {
        self.b_ub.len()
    }

    pub fn num_equalities(&self) -> usize {
        self.b_eq.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn maximize(&mut self, c: Vec<f64>) -> Result<&mut Self> {
        self.check_len(c.len(), "objective")?;
        self.objective = c;
        Ok(self)
    }

    pub fn set_objective_coef(&mut self, var: usize, coef: f64) -> Result<&mut Self> {
        self.check_var(var)?;
        self.objective[var] = coef;
        Ok(self)
    }

    pub fn set_bounds(&mut self, var: usize, lo: f64, hi: f64) -> Result<&mut Self> {
        self.check_var(var)?;
        if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Err(Error::invalid(format!("bad bounds [{lo}, {hi}] for variable {var}")));
        }
        self.lower[var] = lo;
        self.upper[var] = hi;
        Ok(self)
    }

    pub fn bounds(&self, var: usize) -> (f64, f64) {
        (self.lower[var], self.upper[var])
    }

    /// `row . x <= rhs`
    pub fn add_le(&mut self, row: Vec<f64>, rhs: f64) -> Result<&mut Self> {
        self.check_len(row.len(), "inequality row")?;
        self.a_ub.extend(row);
        self.b_ub.push(rhs);
        Ok(self)
    }

    /// `row . x >= rhs`
    pub fn add_ge(&mut self, row: Vec<f64>, rhs: f64) -> Result<&mut Self> {
        self.add_le(row.into_iter().map(|v| -v).collect(), -rhs)
    }

    /// `row . x == rhs`
    pub fn add_eq(&mut self, row: Vec<f64>, rhs: f64) -> Result<&mut Self> {
        self.check_len(row.len(), "equality row")?;
        self.a_eq.extend(row);
        self.b_eq.push(rhs);
        Ok(self)
    }

    /// Sparse form of [`add_le`](Self::add_le).
    pub fn add_le_terms(&mut self, terms: &[(usize, f64)], rhs: f64) -> Result<&mut Self> {
        let row = self.dense_row(terms)?;
        self.add_le(row, rhs)
    }

    pub fn add_eq_terms(&mut self, terms: &[(usize, f64)], rhs: f64) -> Result<&mut Self> {
        let row = self.dense_row(terms)?;
        self.add_eq(row, rhs)
    }

    pub fn inequality_row(&self, k: usize) -> (&[f64], f64) {
        let nv = self.num_vars;
        (&self.a_ub[k * nv..(k + 1) * nv], self.b_ub[k])
    }

    pub fn equality_row(&self, k: usize) -> (&[f64], f64) {
        let nv = self.num_vars;
        (&self.a_eq[k * nv..(k + 1) * nv], self.b_eq[k])
    }

    pub fn is_bounded_box(&self) -> bool {
        self.lower.iter().all(|v| v.is_finite()) && self.upper.iter().all(|v| v.is_finite())
    }

    fn dense_row(&self, terms: &[(usize, f64)]) -> Result<Vec<f64>> {
        let mut row = vec![0.0; self.num_vars];
        for &(j, v) in terms {
            self.check_var(j)?;
            row[j] += v;
        }
        Ok(row)
    }

    fn check_var(&self, var: usize) -> Result<()> {
        if var >= self.num_vars {
            return Err(Error::invalid(format!(
                "variable {var} out of range for {} variables",
                self.num_vars
            )));
        }
        Ok(())
    }

    fn check_len(&self, len: usize, what: &str) -> Result<()> {
        if len != self.num_vars {
            return Err(Error::invalid(format!(
                "{what} has {len} coefficients, expected {}",
                self.num_vars
            )));
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        if !finite(&self.objective) || !finite(&self.a_ub) || !finite(&self.b_ub) || !finite(&self.a_eq) || !finite(&self.b_eq) {
            return Err(Error::invalid("linear program contains non-finite coefficients"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl fmt::Display for LpStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective_value: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotRule {
    /// Lowest-index entering and leaving variables throughout.
    Bland,
    /// Most negative reduced cost, falling back to Bland's rule while the
    /// tableau is stalled on a degenerate vertex.
    Dantzig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Auto,
    Primal,
    Dual,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub feas_tol: f64,
    pub opt_tol: f64,
    pub pivot_tol: f64,
    pub pivot_rule: PivotRule,
    pub route: Route,
    pub max_iterations: usize,
    /// Log the standardized tableau at debug level.
    pub debug_dump: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            feas_tol: DEFAULT_FEAS_TOL,
            opt_tol: DEFAULT_OPT_TOL,
            pivot_tol: DEFAULT_PIVOT_TOL,
            pivot_rule: PivotRule::Dantzig,
            route: Route::Auto,
            max_iterations: 5_000_000,
            debug_dump: false,
        }
    }
}

/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const STALL_LIMIT: usize = 32;

pub fn solve_lp(lp: &LinearProgram, feas_tol: f64, opt_tol: f64) -> Result<LpSolution> {
    solve_lp_with(
        lp,
        &SolverOptions {
            feas_tol,
            opt_tol,
            ..SolverOptions::default()
        },
    )
}

pub fn solve_lp_with(lp: &LinearProgram, opts: &SolverOptions) -> Result<LpSolution> {
    lp.validate()?;
    if !(opts.feas_tol > 0.0 && opts.opt_tol > 0.0 && opts.pivot_tol > 0.0) {
        return Err(Error::invalid("solver tolerances must be positive"));
    }
    let std = Standard::from_lp(lp);
    let dual = match opts.route {
        Route::Primal => false,
        Route::Dual => true,
        Route::Auto => std.rows > 2 * std.cols,
    };
    if opts.debug_dump && log::log_enabled!(log::Level::Debug) {
        log::debug!(
            "standardized LP: {} rows x {} columns, route = {}",
            std.rows,
            std.cols,
            if dual { "dual" } else { "primal" }
        );
        if std.rows * std.cols <= 4096 {
            log::debug!("{}", std.dump());
        }
    }

    let (status, xs, iterations) = if dual {
        let at = transpose_neg(&std.a, std.rows, std.cols);
        let c_dual: Vec<f64> = std.b.iter().map(|v| -v).collect();
        let b_dual: Vec<f64> = std.c.iter().map(|v| -v).collect();
        let res = Tableau::solve(&c_dual, &at, &b_dual, std.cols, std.rows, opts)?;
        match res.status {
            LpStatus::Optimal => (LpStatus::Optimal, res.duals, res.iterations),
            LpStatus::Unbounded => (LpStatus::Infeasible, Vec::new(), res.iterations),
            LpStatus::Infeasible if lp.is_bounded_box() => {
                (LpStatus::Infeasible, Vec::new(), res.iterations)
            }
            LpStatus::Infeasible => {
                // primal may be infeasible or unbounded; settle it directly
                let primal = Tableau::solve(&std.c, &std.a, &std.b, std.rows, std.cols, opts)?;
                (primal.status, primal.x, res.iterations + primal.iterations)
            }
        }
    } else {
        let res = Tableau::solve(&std.c, &std.a, &std.b, std.rows, std.cols, opts)?;
        (res.status, res.x, res.iterations)
    };

    if status != LpStatus::Optimal {
        return Ok(LpSolution {
            status,
            x: Vec::new(),
            objective_value: match status {
                LpStatus::Unbounded => f64::INFINITY,
                _ => f64::NAN,
            },
            iterations,
        });
    }
    let x = std.recover(&xs, lp);
    let objective_value = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpSolution {
        status,
        x,
        objective_value,
        iterations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintRef {
    Lower(usize),
    Upper(usize),
    Inequality(usize),
    Equality(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub constraint: ConstraintRef,
    /// Amount by which the constraint is exceeded (always positive).
    pub residual: f64,
}

/// Every bound, inequality, and equality that `x` violates by more than `feas_tol`.
pub fn check_feasible(lp: &LinearProgram, x: &[f64], feas_tol: f64) -> Result<Vec<Violation>> {
    lp.check_len(x.len(), "point")?;
    let mut out = Vec::new();
    for (j, &v) in x.iter().enumerate() {
        if lp.lower[j] - v > feas_tol {
            out.push(Violation {
                constraint: ConstraintRef::Lower(j),
                residual: lp.lower[j] - v,
            });
        }
        if v - lp.upper[j] > feas_tol {
            out.push(Violation {
                constraint: ConstraintRef::Upper(j),
                residual: v - lp.upper[j],
            });
        }
    }
    for k in 0..lp.num_inequalities() {
        let (row, b) = lp.inequality_row(k);
        let r = dot(row, x) - b;
        if r > feas_tol {
            out.push(Violation {
                constraint: ConstraintRef::Inequality(k),
                residual: r,
            });
        }
    }
    for k in 0..lp.num_equalities() {
        let (row, b) = lp.equality_row(k);
        let r = (dot(row, x) - b).abs();
        if r > feas_tol {
            out.push(Violation {
                constraint: ConstraintRef::Equality(k),
                residual: r,
            });
        }
    }
    Ok(out)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn transpose_neg(a: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let mut out = vec![0.0; rows * cols];
    for i in 0..rows {
        for j in 0..cols {
            out[j * rows + i] = -a[i * cols + j];
        }
    }
    out
}

#[derive(Debug, Clone, Copy)]
enum VarMap {
    /// `x = lo + x'[col]`
    Shifted { col: usize, lo: f64 },
    /// `x = hi - x'[col]`
    Reflected { col: usize, hi: f64 },
    /// `x = x'[pos] - x'[neg]`
    Split { pos: usize, neg: usize },
}

/// `max c.x  s.t.  A x <= b, x >= 0`, dense row-major.
struct Standard {
    c: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
    rows: usize,
    cols: usize,
    maps: Vec<VarMap>,
}

impl Standard {
    fn from_lp(lp: &LinearProgram) -> Standard {
        let mut maps = Vec::with_capacity(lp.num_vars);
        let mut cols = 0;
        for j in 0..lp.num_vars {
            let (lo, hi) = (lp.lower[j], lp.upper[j]);
            let m = if lo.is_finite() {
                VarMap::Shifted { col: cols, lo }
            } else if hi.is_finite() {
                VarMap::Reflected { col: cols, hi }
            } else {
                cols += 1;
                VarMap::Split { pos: cols - 1, neg: cols }
            };
            cols += 1;
            maps.push(m);
        }

        let mut c = vec![0.0; cols];
        for (j, m) in maps.iter().enumerate() {
            let cj = lp.objective[j];
            match *m {
                VarMap::Shifted { col, .. } => c[col] += cj,
                VarMap::Reflected { col, .. } => c[col] -= cj,
                VarMap::Split { pos, neg } => {
                    c[pos] += cj;
                    c[neg] -= cj;
                }
            }
        }

        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut push_row = |row: &[f64], rhs: f64, sign: f64| {
            let mut out = vec![0.0; cols];
            let mut rhs = sign * rhs;
            for (j, m) in maps.iter().enumerate() {
                let v = sign * row[j];
                if v == 0.0 {
                    continue;
                }
                match *m {
                    VarMap::Shifted { col, lo } => {
                        out[col] += v;
                        rhs -= v * lo;
                    }
                    VarMap::Reflected { col, hi } => {
                        out[col] -= v;
                        rhs -= v * hi;
                    }
                    VarMap::Split { pos, neg } => {
                        out[pos] += v;
                        out[neg] -= v;
                    }
                }
            }
            a.extend(out);
            b.push(rhs);
        };
        for k in 0..lp.num_inequalities() {
            let (row, rhs) = lp.inequality_row(k);
            push_row(row, rhs, 1.0);
        }
        for k in 0..lp.num_equalities() {
            let (row, rhs) = lp.equality_row(k);
            push_row(row, rhs, 1.0);
            push_row(row, rhs, -1.0);
        }
        for (j, m) in maps.iter().enumerate() {
            if let VarMap::Shifted { col, lo } = *m {
                if lp.upper[j].is_finite() {
                    let mut out = vec![0.0; cols];
                    out[col] = 1.0;
                    a.extend(out);
                    b.push(lp.upper[j] - lo);
                }
            }
        }
        let rows = b.len();
        Standard {
            c,
            a,
            b,
            rows,
            cols,
            maps,
        }
    }

    fn recover(&self, xs: &[f64], lp: &LinearProgram) -> Vec<f64> {
        let v = |k: usize| xs[k].max(0.0);
        self.maps
            .iter()
            .enumerate()
            .map(|(j, m)| {
                let x = match *m {
                    VarMap::Shifted { col, lo } => lo + v(col),
                    VarMap::Reflected { col, hi } => hi - v(col),
                    VarMap::Split { pos, neg } => v(pos) - v(neg),
                };
                x.clamp(lp.lower[j], lp.upper[j])
            })
            .collect()
    }

    fn dump(&self) -> String {
        let mut s = String::new();
        let fmt_row = |row: &[f64]| row.iter().map(|v| format!("{v:9.4}")).collect::<Vec<_>>().join(" ");
        s.push_str(&format!("max {}\n", fmt_row(&self.c)));
        for i in 0..self.rows {
            s.push_str(&format!(
                "    {} <= {:9.4}\n",
                fmt_row(&self.a[i * self.cols..(i + 1) * self.cols]),
                self.b[i]
            ));
        }
        s
    }
}

struct CanonicalResult {
    status: LpStatus,
    x: Vec<f64>,
    duals: Vec<f64>,
    iterations: usize,
}

/// Full tableau over `[structural | slack | artificial | rhs]`.
struct Tableau {
    width: usize,
    rows: usize,
    vars: usize,
    first_art: usize,
    data: Vec<f64>,
    obj: Vec<f64>,
    basis: Vec<usize>,
    iterations: usize,
    scratch: Vec<f64>,
    nz: Vec<usize>,
}

impl Tableau {
    fn solve(
        c: &[f64],
        a: &[f64],
        b: &[f64],
        rows: usize,
        vars: usize,
        opts: &SolverOptions,
    ) -> Result<CanonicalResult> {
        let mut t = Tableau::new(a, b, rows, vars);
        let rhs_scale = b.iter().fold(1.0f64, |m, v| m.max(v.abs()));

        if t.width - 1 > t.first_art {
            // phase 1: maximize -(sum of artificials)
            t.obj.iter_mut().for_each(|v| *v = 0.0);
            for k in t.first_art..t.width - 1 {
                t.obj[k] = 1.0;
            }
            for i in 0..rows {
                if t.basis[i] >= t.first_art {
                    let row = t.row(i).to_vec();
                    for (o, v) in t.obj.iter_mut().zip(&row) {
                        *o -= v;
                    }
                }
            }
            match t.run(opts, true)? {
                LpStatus::Optimal => {}
                _ => return Err(Error::Internal("phase 1 of the simplex did not terminate optimally".into())),
            }
            let infeasibility = -t.obj[t.width - 1];
            if infeasibility > opts.feas_tol * rhs_scale {
                return Ok(CanonicalResult {
                    status: LpStatus::Infeasible,
                    x: Vec::new(),
                    duals: Vec::new(),
                    iterations: t.iterations,
                });
            }
            t.drive_out_artificials(opts.pivot_tol);
        }

        // phase 2 reduced costs: c_B B^-1 A - c
        let w = t.width;
        t.obj.iter_mut().for_each(|v| *v = 0.0);
        for (j, cj) in c.iter().enumerate() {
            t.obj[j] = -cj;
        }
        for i in 0..rows {
            let bj = t.basis[i];
            if bj < vars && c[bj] != 0.0 {
                let cb = c[bj];
                let row = &t.data[i * w..(i + 1) * w];
                for (o, v) in t.obj.iter_mut().zip(row) {
                    *o += cb * v;
                }
            }
        }
        let status = t.run(opts, false)?;
        if status != LpStatus::Optimal {
            return Ok(CanonicalResult {
                status,
                x: Vec::new(),
                duals: Vec::new(),
                iterations: t.iterations,
            });
        }
        let mut x = vec![0.0; vars];
        for i in 0..rows {
            if t.basis[i] < vars {
                x[t.basis[i]] = t.data[i * w + w - 1];
            }
        }
        let duals = (0..rows).map(|i| t.obj[vars + i]).collect();
        Ok(CanonicalResult {
            status,
            x,
            duals,
            iterations: t.iterations,
        })
    }

    fn new(a: &[f64], b: &[f64], rows: usize, vars: usize) -> Tableau {
        let n_art = b.iter().filter(|v| **v < 0.0).count();
        let first_art = vars + rows;
        let width = vars + rows + n_art + 1;
        let mut data = vec![0.0; rows * width];
        let mut basis = Vec::with_capacity(rows);
        let mut art = first_art;
        for i in 0..rows {
            let row = &mut data[i * width..(i + 1) * width];
            let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
            for j in 0..vars {
                row[j] = sign * a[i * vars + j];
            }
            row[vars + i] = sign;
            row[width - 1] = sign * b[i];
            if sign < 0.0 {
                row[art] = 1.0;
                basis.push(art);
                art += 1;
            } else {
                basis.push(vars + i);
            }
        }
        Tableau {
            width,
            rows,
            vars,
            first_art,
            data,
            obj: vec![0.0; width],
            basis,
            iterations: 0,
            scratch: vec![0.0; width],
            nz: Vec::with_capacity(width),
        }
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    fn run(&mut self, opts: &SolverOptions, phase_one: bool) -> Result<LpStatus> {
        let w = self.width;
        let enter_limit = if phase_one { w - 1 } else { self.first_art };
        let mut stalled = 0usize;
        loop {
            if self.iterations >= opts.max_iterations {
                return Err(Error::Internal(format!(
                    "simplex iteration limit {} reached",
                    opts.max_iterations
                )));
            }
            let bland = opts.pivot_rule == PivotRule::Bland || stalled >= STALL_LIMIT;
            let entering = if bland {
                (0..enter_limit).find(|&j| self.obj[j] < -opts.opt_tol)
            } else {
                let mut best = None;
                let mut best_v = -opts.opt_tol;
                for j in 0..enter_limit {
                    if self.obj[j] < best_v {
                        best_v = self.obj[j];
                        best = Some(j);
                    }
                }
                best
            };
            let Some(k) = entering else {
                return Ok(LpStatus::Optimal);
            };

            let mut leave: Option<(usize, f64, f64)> = None;
            for i in 0..self.rows {
                let aik = self.data[i * w + k];
                if aik <= opts.pivot_tol {
                    continue;
                }
                let ratio = self.data[i * w + w - 1].max(0.0) / aik;
                leave = match leave {
                    None => Some((i, ratio, aik)),
                    Some((bi, br, ba)) => {
                        let tie = (ratio - br).abs() <= 1e-12 * (1.0 + br.abs());
                        let better = if tie {
                            if bland {
                                self.basis[i] < self.basis[bi]
                            } else {
                                aik > ba
                            }
                        } else {
                            ratio < br
                        };
                        if better {
                            Some((i, ratio, aik))
                        } else {
                            Some((bi, br, ba))
                        }
                    }
                };
            }
            let Some((r, ratio, _)) = leave else {
                return Ok(LpStatus::Unbounded);
            };
            if ratio == 0.0 {
                stalled += 1;
            } else {
                stalled = 0;
            }
            self.pivot(r, k);
        }
    }

    fn pivot(&mut self, r: usize, k: usize) {
        let w = self.width;
        self.iterations += 1;
        let p = self.data[r * w + k];
        {
            let row = &mut self.data[r * w..(r + 1) * w];
            for v in row.iter_mut() {
                *v /= p;
            }
            row[k] = 1.0;
        }
        self.scratch.copy_from_slice(&self.data[r * w..(r + 1) * w]);
        self.nz.clear();
        self.nz.extend((0..w).filter(|&j| self.scratch[j] != 0.0));
        let sparse = self.nz.len() * 3 < w;

        let eliminate = |target: &mut [f64], pivot_row: &[f64], nz: &[usize]| {
            let f = target[k];
            if f == 0.0 {
                return;
            }
            if sparse {
                for &j in nz {
                    target[j] -= f * pivot_row[j];
                }
            } else {
                for (t, pv) in target.iter_mut().zip(pivot_row) {
                    *t -= f * pv;
                }
            }
            target[k] = 0.0;
        };
        for i in 0..self.rows {
            if i != r {
                eliminate(&mut self.data[i * w..(i + 1) * w], &self.scratch, &self.nz);
            }
        }
        eliminate(&mut self.obj, &self.scratch, &self.nz);
        self.basis[r] = k;
    }

    /// Pivots remaining zero-valued artificials out of the basis where possible.
    fn drive_out_artificials(&mut self, pivot_tol: f64) {
        let w = self.width;
        for i in 0..self.rows {
            if self.basis[i] < self.first_art {
                continue;
            }
            let col = (0..self.first_art).find(|&j| self.data[i * w + j].abs() > pivot_tol);
            if let Some(j) = col {
                self.pivot(i, j);
            }
            // otherwise the row is redundant; its artificial stays basic at zero
        }
        debug_assert!(self.vars <= self.first_art);
    }
}
