//! Dense integer polynomials in one variable `t` and square matrices of them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Coefficients in increasing degree; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly(Vec<BigInt>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly(vec![BigInt::one()])
    }

    /// `c·t^k`.
    pub fn monomial(c: impl Into<BigInt>, k: usize) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![BigInt::zero(); k];
        v.push(c);
        Poly(v)
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = Poly(coeffs);
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Substitute `t ↦ −t`.
    pub fn negate_variable(&self) -> Poly {
        Poly(
            self.0
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.0.iter().all(|c| c >= &BigInt::zero())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let c = if k > 0 && c.is_one() {
                    String::new()
                } else if k > 0 && (-c).is_one() {
                    "-".to_string()
                } else {
                    c.to_string()
                };
                match k {
                    0 => c,
                    1 => format!("{c}t"),
                    _ => format!("{c}t^{k}"),
                }
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        let zero = BigInt::zero();
        let v = (0..n)
            .map(|k| self.0.get(k).unwrap_or(&zero) + rhs.0.get(k).unwrap_or(&zero))
            .collect();
        Poly::from_coeffs(v)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![BigInt::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::from_coeffs(v)
    }
}

/// Square matrix of polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    entries: Vec<Vec<Poly>>,
}

impl PolyMatrix {
    pub fn from_rows(entries: Vec<Vec<Poly>>) -> Self {
        let n = entries.len();
        assert!(entries.iter().all(|r| r.len() == n), "matrix must be square");
        PolyMatrix { entries }
    }

    pub fn identity(n: usize) -> Self {
        PolyMatrix {
            entries: (0..n)
                .map(|i| (0..n).map(|j| if i == j { Poly::one() } else { Poly::zero() }).collect())
                .collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<Poly>] {
        &self.entries
    }

    /// Product accumulating each entry over the inner index (row-major).
    pub fn mul_row_major(&self, rhs: &PolyMatrix) -> PolyMatrix {
        let n = self.size();
        assert_eq!(n, rhs.size());
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(Poly::zero(), |acc, k| &acc + &(&self.entries[i][k] * &rhs.entries[k][j]))
                    })
                    .collect()
            })
            .collect();
        PolyMatrix { entries }
    }

    /// Same product, accumulated as a sum of outer products (column of `self` by row of `rhs`).
    pub fn mul_column_major(&self, rhs: &PolyMatrix) -> PolyMatrix {
        let n = self.size();
        assert_eq!(n, rhs.size());
        let mut entries = vec![vec![Poly::zero(); n]; n];
        for k in 0..n {
            for i in 0..n {
                if self.entries[i][k].is_zero() {
                    continue;
                }
                for j in 0..n {
                    let term = &self.entries[i][k] * &rhs.entries[k][j];
                    entries[i][j] = &entries[i][j] + &term;
                }
            }
        }
        PolyMatrix { entries }
    }

    /// First entry differing from the identity, with its residual.
    pub fn identity_defect(&self) -> Option<(usize, usize, Poly)> {
        let n = self.size();
        for i in 0..n {
            for j in 0..n {
                let e = &self.entries[i][j];
                let ok = if i == j { e.is_one() } else { e.is_zero() };
                if !ok {
                    let residual = if i == j { e - &Poly::one() } else { e.clone() };
                    return Some((i, j, residual));
                }
            }
        }
        None
    }

    pub fn is_identity(&self) -> bool {
        self.identity_defect().is_none()
    }

    /// Ones on the diagonal and zeros above it.
    pub fn is_lower_unitriangular(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| {
            self.entries[i][i].is_one() && (i + 1..n).all(|j| self.entries[i][j].is_zero())
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_coeffs(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn arithmetic() {
        assert_eq!(&p(&[1, 1]) * &p(&[1, -1]), p(&[1, 0, -1]));
        assert_eq!(&p(&[0, 0, 1]) - &p(&[0, 0, 1]), Poly::zero());
        assert_eq!(p(&[1, 2, 3]).negate_variable(), p(&[1, -2, 3]));
        assert_eq!(Poly::monomial(-1, 2), p(&[0, 0, -1]));
        assert_eq!(Poly::monomial(0, 5), Poly::zero());
        assert_eq!(p(&[0, 3, 0, 0]).degree(), Some(1));
        assert_eq!(p(&[0, 0, -2]).to_string(), "-2t^2");
        assert_eq!(p(&[1, -1, 1]).to_string(), "1 + -t + t^2");
    }

    #[test]
    fn big_coefficients_do_not_wrap() {
        let big = Poly::monomial(i64::MAX, 1);
        let sq = &big * &big;
        assert_eq!(sq.coeffs()[2], BigInt::from(i64::MAX) * BigInt::from(i64::MAX));
    }

    #[test]
    fn products_and_identity() {
        let t = Poly::monomial(1, 1);
        let b = PolyMatrix::from_rows(vec![
            vec![Poly::one(), Poly::zero()],
            vec![t.clone(), Poly::one()],
        ]);
        let e = PolyMatrix::from_rows(vec![
            vec![Poly::one(), Poly::zero()],
            vec![-&t, Poly::one()],
        ]);
        assert!(b.is_lower_unitriangular());
        assert!(e.mul_row_major(&b).is_identity());
        assert_eq!(e.mul_row_major(&b), e.mul_column_major(&b));
        let defect = b.mul_row_major(&b).identity_defect().unwrap();
        assert_eq!(defect, (1, 0, p(&[0, 2])));
    }
}
