//! Exact rational feasibility by Gaussian elimination on the equalities
//! followed by Fourier–Motzkin elimination on the inequalities. Feasible
//! systems yield a point by back-substitution.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `coeffs · x  (≤ | <)  rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inequality {
    pub coeffs: Vec<BigRational>,
    pub rhs: BigRational,
    pub strict: bool,
}

/// `coeffs · x = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub coeffs: Vec<BigRational>,
    pub rhs: BigRational,
}

#[derive(Clone, Debug, Default)]
pub struct System {
    pub num_vars: usize,
    pub equations: Vec<Equation>,
    pub inequalities: Vec<Inequality>,
}

impl System {
    pub fn new(num_vars: usize) -> Self {
        System {
            num_vars,
            ..Default::default()
        }
    }

    pub fn equal(&mut self, coeffs: Vec<BigRational>, rhs: BigRational) {
        debug_assert_eq!(coeffs.len(), self.num_vars);
        self.equations.push(Equation { coeffs, rhs });
    }

    pub fn at_most(&mut self, coeffs: Vec<BigRational>, rhs: BigRational, strict: bool) {
        debug_assert_eq!(coeffs.len(), self.num_vars);
        self.inequalities.push(Inequality { coeffs, rhs, strict });
    }

    /// A feasible point, or `None` if the system is infeasible.
    pub fn solve(&self) -> Option<Vec<BigRational>> {
        let n = self.num_vars;
        // Reduced row echelon form of the equalities.
        let mut rows: Vec<(Vec<BigRational>, BigRational)> = self
            .equations
            .iter()
            .map(|e| (e.coeffs.clone(), e.rhs.clone()))
            .collect();
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, column)
        let mut r = 0;
        for col in 0..n {
            let Some(p) = (r..rows.len()).find(|&i| !rows[i].0[col].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let pivot = rows[r].0[col].clone();
            for c in 0..n {
                rows[r].0[c] = &rows[r].0[c] / &pivot;
            }
            rows[r].1 = &rows[r].1 / &pivot;
            for i in 0..rows.len() {
                if i == r || rows[i].0[col].is_zero() {
                    continue;
                }
                let f = rows[i].0[col].clone();
                for c in 0..n {
                    let v = &f * &rows[r].0[c];
                    rows[i].0[c] -= v;
                }
                let v = &f * &rows[r].1;
                rows[i].1 -= v;
            }
            pivots.push((r, col));
            r += 1;
        }
        if rows[r..].iter().any(|(_, rhs)| !rhs.is_zero()) {
            return None;
        }
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let free: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();

        // x_pivot = rhs − Σ_free coeff·x_free; substitute into the inequalities.
        let substituted: Vec<Inequality> = self
            .inequalities
            .iter()
            .map(|ineq| {
                let mut rhs = ineq.rhs.clone();
                let mut coeffs: Vec<BigRational> = free.iter().map(|&f| ineq.coeffs[f].clone()).collect();
                for &(row, col) in &pivots {
                    let a = &ineq.coeffs[col];
                    if a.is_zero() {
                        continue;
                    }
                    rhs -= a * &rows[row].1;
                    for (k, &f) in free.iter().enumerate() {
                        coeffs[k] -= a * &rows[row].0[f];
                    }
                }
                Inequality {
                    coeffs,
                    rhs,
                    strict: ineq.strict,
                }
            })
            .collect();

        let free_values = fourier_motzkin(free.len(), substituted)?;
        let mut x = vec![BigRational::zero(); n];
        for (k, &f) in free.iter().enumerate() {
            x[f] = free_values[k].clone();
        }
        for &(row, col) in &pivots {
            let mut v = rows[row].1.clone();
            for &f in &free {
                v -= &rows[row].0[f] * &x[f];
            }
            x[col] = v;
        }
        Some(x)
    }
}

/// Scale so the last nonzero coefficient has absolute value one, then keep
/// only the tightest constraint per direction.
fn normalize_and_prune(system: Vec<Inequality>, vars: usize) -> Option<Vec<Inequality>> {
    let mut best: BTreeMap<Vec<BigRational>, (BigRational, bool)> = BTreeMap::new();
    for ineq in system {
        let Some(lead) = ineq.coeffs[..vars].iter().rev().find(|c| !c.is_zero()).cloned() else {
            // Constant constraint 0 (≤|<) rhs.
            let ok = if ineq.strict {
                ineq.rhs.is_positive()
            } else {
                !ineq.rhs.is_negative()
            };
            if !ok {
                return None;
            }
            continue;
        };
        let scale = lead.abs();
        let coeffs: Vec<BigRational> = ineq.coeffs[..vars].iter().map(|c| c / &scale).collect();
        let rhs = &ineq.rhs / &scale;
        match best.get_mut(&coeffs) {
            Some((b, s)) => {
                if rhs < *b {
                    *b = rhs;
                    *s = ineq.strict;
                } else if rhs == *b {
                    *s = *s || ineq.strict;
                }
            }
            None => {
                best.insert(coeffs, (rhs, ineq.strict));
            }
        }
    }
    Some(
        best.into_iter()
            .map(|(coeffs, (rhs, strict))| Inequality { coeffs, rhs, strict })
            .collect(),
    )
}

fn fourier_motzkin(vars: usize, system: Vec<Inequality>) -> Option<Vec<BigRational>> {
    // After the final reverse, stages[v] constrains variables 0..=v.
    let mut stages: Vec<Vec<Inequality>> = Vec::with_capacity(vars + 1);
    let mut current = normalize_and_prune(system, vars)?;
    for v in (0..vars).rev() {
        stages.push(current.clone());
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for ineq in current {
            if ineq.coeffs[v].is_positive() {
                pos.push(ineq);
            } else if ineq.coeffs[v].is_negative() {
                neg.push(ineq);
            } else {
                rest.push(ineq);
            }
        }
        for p in &pos {
            for q in &neg {
                let a = &p.coeffs[v];
                let b = -&q.coeffs[v];
                let coeffs: Vec<BigRational> = (0..v)
                    .map(|i| &p.coeffs[i] * &b + &q.coeffs[i] * a)
                    .collect();
                rest.push(Inequality {
                    coeffs,
                    rhs: &p.rhs * &b + &q.rhs * a,
                    strict: p.strict || q.strict,
                });
            }
        }
        current = normalize_and_prune(rest, v)?;
    }
    // Everything reduced to constants, all satisfied.
    stages.reverse();

    let mut x: Vec<BigRational> = Vec::with_capacity(vars);
    for (v, stage) in stages.iter().enumerate() {
        let mut lower: Option<(BigRational, bool)> = None;
        let mut upper: Option<(BigRational, bool)> = None;
        for ineq in stage {
            let a = &ineq.coeffs[v];
            if a.is_zero() {
                continue;
            }
            let mut rest = ineq.rhs.clone();
            for (i, xi) in x.iter().enumerate() {
                rest -= &ineq.coeffs[i] * xi;
            }
            let bound = rest / a;
            if a.is_positive() {
                let tighter = match &upper {
                    None => true,
                    Some((u, s)) => bound < *u || (bound == *u && ineq.strict && !s),
                };
                if tighter {
                    upper = Some((bound, ineq.strict));
                }
            } else {
                let tighter = match &lower {
                    None => true,
                    Some((l, s)) => bound > *l || (bound == *l && ineq.strict && !s),
                };
                if tighter {
                    lower = Some((bound, ineq.strict));
                }
            }
        }
        let two = BigRational::one() + BigRational::one();
        let value = match (lower, upper) {
            (None, None) => BigRational::zero(),
            (Some((l, false)), _) => l,
            (_, Some((u, false))) => u,
            (Some((l, true)), Some((u, true))) => (l + u) / two,
            (Some((l, true)), None) => l + BigRational::one(),
            (None, Some((u, true))) => u - BigRational::one(),
        };
        x.push(value);
    }
    Some(x)
}
