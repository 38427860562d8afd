//! Dense weighted least squares with optional equality constraints.
//!
//! Problems here are tiny (a handful of unknowns, at most a few constraint
//! rows), so everything is solved by direct LU factorization with partial
//! pivoting. The condition estimate is the ratio of extreme magnitudes on
//! the factor diagonal; anything above [`MAX_CONDITION_ESTIMATE`] is
//! rejected as rank deficient.

use super::DesignError;

/// Condition-estimate ceiling for the direct factorizations.
pub const MAX_CONDITION_ESTIMATE: f64 = 1e12;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds a matrix from whole rows; every row must have equal length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn push_row(&mut self, row: &[f64]) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    /// `self * v`.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.at(r, c) * v[c]).sum())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

/// Inputs to the weighted least-squares solves.
///
/// `basis` maps the unique coefficients to frequency-response samples
/// (one row per lattice point), `weights` is the diagonal weighting of those
/// rows, `target` is the desired response, and `constraints * g =
/// constraint_rhs` are the equality constraints (zero rows when
/// unconstrained).
#[derive(Debug, Clone)]
pub struct LsqSystem {
    pub basis: Mat,
    pub weights: Vec<f64>,
    pub target: Vec<f64>,
    pub constraints: Mat,
    pub constraint_rhs: Vec<f64>,
}

impl LsqSystem {
    pub fn unconstrained(basis: Mat, weights: Vec<f64>, target: Vec<f64>) -> Self {
        assert_eq!(weights.len(), basis.rows());
        let cols = basis.cols();
        Self {
            basis,
            weights,
            target,
            constraints: Mat::zeros(0, cols),
            constraint_rhs: Vec::new(),
        }
    }

    pub fn push_constraint(&mut self, row: Vec<f64>, rhs: f64) {
        self.constraints.push_row(&row);
        self.constraint_rhs.push(rhs);
    }

    /// The weighted squared residual `(Ag - D')^T W (Ag - D')`.
    pub fn objective(&self, g: &[f64]) -> f64 {
        let fitted = self.basis.mul_vec(g);
        fitted
            .iter()
            .zip(&self.target)
            .zip(&self.weights)
            .map(|((f, d), w)| w * (f - d) * (f - d))
            .sum()
    }

    /// Normal equations `R = A^T W A`, `d = A^T W D'`.
    fn normal_equations(&self) -> (Mat, Vec<f64>) {
        let (rows, cols) = (self.basis.rows(), self.basis.cols());
        assert_eq!(self.target.len(), rows, "target length mismatch");
        let mut normal = Mat::zeros(cols, cols);
        let mut rhs = vec![0.0; cols];
        for i in 0..cols {
            for j in i..cols {
                let mut s = 0.0;
                for r in 0..rows {
                    s += self.weights[r] * self.basis.at(r, i) * self.basis.at(r, j);
                }
                normal.set(i, j, s);
                normal.set(j, i, s);
            }
        }
        for (i, slot) in rhs.iter_mut().enumerate() {
            for r in 0..rows {
                *slot += self.weights[r] * self.basis.at(r, i) * self.target[r];
            }
        }
        (normal, rhs)
    }
}

/// Result of a constrained solve, with the factor-diagonal condition
/// estimate of the system that was factorized.
#[derive(Debug, Clone)]
pub struct Solution {
    pub coefficients: Vec<f64>,
    pub condition_estimate: f64,
}

/// Minimizes `(Ag - D')^T W (Ag - D')` via the normal equations.
pub fn solve_lsq(sys: &LsqSystem) -> Result<Vec<f64>, DesignError> {
    let (mut normal, rhs) = sys.normal_equations();
    let (perm, _cond) = lu_factor(&mut normal)?;
    Ok(lu_solve(&normal, &perm, &rhs))
}

/// Minimizes the weighted residual subject to `B g = b` via the KKT system
/// `[[R, B^T], [B, 0]] [g; lambda] = [d; b]`.
pub fn solve_constrained(sys: &LsqSystem) -> Result<Vec<f64>, DesignError> {
    Ok(solve_constrained_detailed(sys)?.coefficients)
}

/// [`solve_constrained`] plus the condition estimate of the factorized
/// system.
pub fn solve_constrained_detailed(sys: &LsqSystem) -> Result<Solution, DesignError> {
    let n_con = sys.constraints.rows();
    assert_eq!(sys.constraint_rhs.len(), n_con, "constraint rhs mismatch");
    if n_con == 0 {
        let (mut normal, rhs) = sys.normal_equations();
        let (perm, cond) = lu_factor(&mut normal)?;
        return Ok(Solution {
            coefficients: lu_solve(&normal, &perm, &rhs),
            condition_estimate: cond,
        });
    }
    check_constraints(&sys.constraints, &sys.constraint_rhs)?;

    let (normal, rhs) = sys.normal_equations();
    let p = normal.rows();
    let n = p + n_con;
    let mut kkt = Mat::zeros(n, n);
    for i in 0..p {
        for j in 0..p {
            kkt.set(i, j, normal.at(i, j));
        }
    }
    for c in 0..n_con {
        for j in 0..p {
            kkt.set(p + c, j, sys.constraints.at(c, j));
            kkt.set(j, p + c, sys.constraints.at(c, j));
        }
    }
    let mut full_rhs = rhs;
    full_rhs.extend_from_slice(&sys.constraint_rhs);

    let (perm, cond) = lu_factor(&mut kkt)?;
    let mut solution = lu_solve(&kkt, &perm, &full_rhs);
    solution.truncate(p);
    Ok(Solution {
        coefficients: solution,
        condition_estimate: cond,
    })
}

/// Rejects constraint systems that are rank deficient or inconsistent
/// before they reach the KKT factorization.
fn check_constraints(constraints: &Mat, rhs: &[f64]) -> Result<(), DesignError> {
    let mut augmented = Mat::zeros(constraints.rows(), constraints.cols() + 1);
    let mut scale = 0.0f64;
    for (r, &rhs_value) in rhs.iter().enumerate() {
        for c in 0..constraints.cols() {
            augmented.set(r, c, constraints.at(r, c));
            scale = scale.max(constraints.at(r, c).abs());
        }
        augmented.set(r, constraints.cols(), rhs_value);
    }
    let tol = 1e-12 * scale.max(1.0);
    let plain_rank = echelon_rank(&mut constraints.clone(), tol);
    if plain_rank == constraints.rows() {
        return Ok(());
    }
    let augmented_rank = echelon_rank(&mut augmented, tol);
    if augmented_rank > plain_rank {
        Err(DesignError::InfeasibleConstraint)
    } else {
        Err(DesignError::RankDeficient(f64::INFINITY))
    }
}

/// Rank by Gaussian elimination with partial pivoting; destroys `m`.
fn echelon_rank(m: &mut Mat, tol: f64) -> usize {
    let mut rank = 0;
    let mut col = 0;
    while rank < m.rows() && col < m.cols() {
        let mut pivot = rank;
        for r in rank + 1..m.rows() {
            if m.at(r, col).abs() > m.at(pivot, col).abs() {
                pivot = r;
            }
        }
        if m.at(pivot, col).abs() <= tol {
            col += 1;
            continue;
        }
        m.swap_rows(rank, pivot);
        for r in rank + 1..m.rows() {
            let f = m.at(r, col) / m.at(rank, col);
            for c in col..m.cols() {
                let v = m.at(r, c) - f * m.at(rank, c);
                m.set(r, c, v);
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

/// In-place LU factorization with partial pivoting. Returns the row
/// permutation and the diagonal-ratio condition estimate.
fn lu_factor(m: &mut Mat) -> Result<(Vec<usize>, f64), DesignError> {
    let n = m.rows();
    assert_eq!(n, m.cols(), "LU requires a square matrix");
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let mut pivot = k;
        let mut best = m.at(k, k).abs();
        for r in k + 1..n {
            let v = m.at(r, k).abs();
            if v > best {
                pivot = r;
                best = v;
            }
        }
        if best == 0.0 {
            return Err(DesignError::RankDeficient(f64::INFINITY));
        }
        m.swap_rows(k, pivot);
        perm.swap(k, pivot);
        for r in k + 1..n {
            let f = m.at(r, k) / m.at(k, k);
            m.set(r, k, f);
            for c in k + 1..n {
                let v = m.at(r, c) - f * m.at(k, c);
                m.set(r, c, v);
            }
        }
    }
    let mut d_max = 0.0f64;
    let mut d_min = f64::INFINITY;
    for k in 0..n {
        let v = m.at(k, k).abs();
        d_max = d_max.max(v);
        d_min = d_min.min(v);
    }
    let cond = d_max / d_min;
    if !cond.is_finite() || cond > MAX_CONDITION_ESTIMATE {
        return Err(DesignError::RankDeficient(cond));
    }
    Ok((perm, cond))
}

/// Solves `L U x = P b` given the packed factors from [`lu_factor`].
fn lu_solve(lu: &Mat, perm: &[usize], b: &[f64]) -> Vec<f64> {
    let n = lu.rows();
    let mut x: Vec<f64> = perm.iter().map(|&p| b[p]).collect();
    for r in 1..n {
        for c in 0..r {
            x[r] -= lu.at(r, c) * x[c];
        }
    }
    for r in (0..n).rev() {
        for c in r + 1..n {
            x[r] -= lu.at(r, c) * x[c];
        }
        x[r] /= lu.at(r, r);
    }
    x
}
