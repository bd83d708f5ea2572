//! Exact rational linear programming (two-phase simplex, Bland's rule).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Q)>,
    pub rel: Rel,
    pub rhs: Q,
}

/// `maximize objective·x` subject to the constraints and `x >= 0`.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub constraints: Vec<Constraint>,
    pub objective: Vec<(usize, Q)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpResult {
    Optimal { x: Vec<Q>, value: Q },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            ..Default::default()
        }
    }

    pub fn add(&mut self, coeffs: Vec<(usize, Q)>, rel: Rel, rhs: Q) {
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }

    pub fn add_int(&mut self, coeffs: Vec<(usize, BigInt)>, rel: Rel, rhs: i64) {
        let c = coeffs
            .into_iter()
            .map(|(j, a)| (j, Q::from_integer(a)))
            .collect();
        self.add(c, rel, Q::from_integer(rhs.into()));
    }

    pub fn maximize(&mut self, objective: Vec<(usize, Q)>) {
        self.objective = objective;
    }

    pub fn solve(&self) -> LpResult {
        Tableau::build(self).run(self)
    }

    /// Builds the flow-conservation program over `arcs` on `n` vertices: one
    /// variable per arc, inflow equal to outflow at every vertex.
    pub fn circulation(n: usize, arcs: &[(usize, usize)]) -> Self {
        let mut lp = LinearProgram::new(arcs.len());
        for v in 0..n {
            let mut row: Vec<(usize, Q)> = Vec::new();
            for (j, &(a, b)) in arcs.iter().enumerate() {
                if a == b {
                    continue;
                }
                if a == v {
                    row.push((j, Q::one()));
                } else if b == v {
                    row.push((j, -Q::one()));
                }
            }
            if !row.is_empty() {
                lp.add(row, Rel::Eq, Q::zero());
            }
        }
        lp
    }
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    rhs: Vec<Q>,
    basis: Vec<usize>,
    ncols: usize,
    art_start: usize,
}

enum Step {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let n = lp.num_vars;
        let m = lp.constraints.len();
        let n_slack = lp.constraints.iter().filter(|c| c.rel != Rel::Eq).count();
        let art_start = n + n_slack;
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack = n;
        let mut art = art_start;
        let mut arts = Vec::new();
        for c in &lp.constraints {
            let mut row = vec![Q::zero(); art_start];
            for (j, a) in &c.coeffs {
                row[*j] += a;
            }
            let mut b = c.rhs.clone();
            let mut rel = c.rel;
            if b.is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
                b = -b;
                rel = match rel {
                    Rel::Le => Rel::Ge,
                    Rel::Ge => Rel::Le,
                    Rel::Eq => Rel::Eq,
                };
            }
            match rel {
                Rel::Le => {
                    row[slack] = Q::one();
                    basis.push(slack);
                    slack += 1;
                }
                Rel::Ge => {
                    row[slack] = -Q::one();
                    slack += 1;
                    basis.push(art);
                    arts.push(art);
                    art += 1;
                }
                Rel::Eq => {
                    basis.push(art);
                    arts.push(art);
                    art += 1;
                }
            }
            rows.push(row);
            rhs.push(b);
        }
        let ncols = art;
        for (i, row) in rows.iter_mut().enumerate() {
            row.resize(ncols, Q::zero());
            if basis[i] >= art_start {
                row[basis[i]] = Q::one();
            }
        }
        Tableau {
            rows,
            rhs,
            basis,
            ncols,
            art_start,
        }
    }

    fn pivot(&mut self, d: &mut [Q], z: &mut Q, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            for x in self.rows[r].iter_mut() {
                if !x.is_zero() {
                    *x /= &p;
                }
            }
            self.rhs[r] /= &p;
        }
        let nz: Vec<usize> = (0..self.ncols)
            .filter(|&j| !self.rows[r][j].is_zero())
            .collect();
        let prow: Vec<(usize, Q)> = nz.iter().map(|&j| (j, self.rows[r][j].clone())).collect();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (j, a) in &prow {
                let t = &f * a;
                self.rows[i][*j] -= t;
            }
            self.rhs[i] -= &f * &prhs;
        }
        if !d[c].is_zero() {
            let f = d[c].clone();
            for (j, a) in &prow {
                d[*j] -= &f * a;
            }
            *z += &f * &prhs;
        }
        self.basis[r] = c;
    }

    /// Maximizes with reduced costs `d`; only columns below `limit` may enter.
    fn simplex(&mut self, d: &mut [Q], z: &mut Q, limit: usize) -> Step {
        loop {
            let enter = (0..limit).find(|&j| d[j].is_positive());
            let Some(c) = enter else { return Step::Optimal };
            let mut best: Option<(Q, usize)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if a.is_positive() {
                    let ratio = &self.rhs[i] / a;
                    let better = match &best {
                        None => true,
                        Some((q, bi)) => {
                            ratio < *q || (ratio == *q && self.basis[i] < self.basis[*bi])
                        }
                    };
                    if better {
                        best = Some((ratio, i));
                    }
                }
            }
            match best {
                None => return Step::Unbounded,
                Some((_, r)) => self.pivot(d, z, r, c),
            }
        }
    }

    fn run(mut self, lp: &LinearProgram) -> LpResult {
        // phase 1: maximize minus the sum of artificials
        let mut d = vec![Q::zero(); self.ncols];
        let mut z = Q::zero();
        for i in 0..self.rows.len() {
            if self.basis[i] >= self.art_start {
                for j in 0..self.art_start {
                    d[j] += &self.rows[i][j];
                }
                z -= &self.rhs[i];
            }
        }
        let limit = self.art_start;
        self.simplex(&mut d, &mut z, limit);
        if z.is_negative() {
            return LpResult::Infeasible;
        }
        // drive remaining artificials out of the basis, dropping redundant rows
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.art_start {
                match (0..self.art_start).find(|&j| !self.rows[i][j].is_zero()) {
                    Some(c) => {
                        let mut dd = vec![Q::zero(); self.ncols];
                        let mut zz = Q::zero();
                        self.pivot(&mut dd, &mut zz, i, c);
                        i += 1;
                    }
                    None => {
                        self.rows.remove(i);
                        self.rhs.remove(i);
                        self.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
        // phase 2
        let mut cost = vec![Q::zero(); self.ncols];
        for (j, a) in &lp.objective {
            cost[*j] += a;
        }
        let mut d = cost.clone();
        let mut z = Q::zero();
        for i in 0..self.rows.len() {
            let cb = &cost[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for j in 0..self.ncols {
                if !self.rows[i][j].is_zero() {
                    d[j] -= cb * &self.rows[i][j];
                }
            }
            z += cb * &self.rhs[i];
        }
        match self.simplex(&mut d, &mut z, limit) {
            Step::Unbounded => LpResult::Unbounded,
            Step::Optimal => {
                let mut x = vec![Q::zero(); lp.num_vars];
                for (i, &b) in self.basis.iter().enumerate() {
                    if b < lp.num_vars {
                        x[b] = self.rhs[i].clone();
                    }
                }
                LpResult::Optimal { x, value: z }
            }
        }
    }
}

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_maximization() {
        // max x + y, x + 2y <= 4, 3x + y <= 6
        let mut lp = LinearProgram::new(2);
        lp.add(vec![(0, q(1)), (1, q(2))], Rel::Le, q(4));
        lp.add(vec![(0, q(3)), (1, q(1))], Rel::Le, q(6));
        lp.maximize(vec![(0, q(1)), (1, q(1))]);
        match lp.solve() {
            LpResult::Optimal { value, x } => {
                assert_eq!(value, Q::new(14.into(), 5.into()));
                assert_eq!(
                    x,
                    vec![Q::new(8.into(), 5.into()), Q::new(6.into(), 5.into())]
                );
            }
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.add(vec![(0, q(1))], Rel::Ge, q(2));
        lp.add(vec![(0, q(1))], Rel::Le, q(1));
        assert_eq!(lp.solve(), LpResult::Infeasible);

        let mut lp = LinearProgram::new(2);
        lp.add(vec![(0, q(1)), (1, q(-1))], Rel::Eq, q(0));
        lp.maximize(vec![(0, q(1))]);
        assert_eq!(lp.solve(), LpResult::Unbounded);
    }

    #[test]
    fn negative_rhs_and_redundant_rows() {
        // -x - y = -2 twice, max x
        let mut lp = LinearProgram::new(2);
        lp.add(vec![(0, q(-1)), (1, q(-1))], Rel::Eq, q(-2));
        lp.add(vec![(0, q(-1)), (1, q(-1))], Rel::Eq, q(-2));
        lp.maximize(vec![(0, q(1))]);
        match lp.solve() {
            LpResult::Optimal { value, .. } => assert_eq!(value, q(2)),
            r => panic!("{r:?}"),
        }
    }
}
