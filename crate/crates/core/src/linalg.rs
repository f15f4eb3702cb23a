//! Dense exact Gaussian elimination over the rationals.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    /// Row-major `dim x dim` matrix.
    pub matrix: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Singular;

impl LinearSystem {
    pub fn zeros(dim: usize) -> Self {
        LinearSystem {
            matrix: vec![vec![Rational::zero(); dim]; dim],
            rhs: vec![Rational::zero(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.rhs.len()
    }

    /// Solves `matrix * x = rhs`, pivoting on the entry of largest
    /// absolute value in each column.
    pub fn solve(mut self) -> Result<Vec<Rational>, Singular> {
        let n = self.dim();
        let a = &mut self.matrix;
        let b = &mut self.rhs;
        for col in 0..n {
            let pivot = (col..n)
                .filter(|&r| !a[r][col].is_zero())
                .max_by(|&r, &s| a[r][col].abs().cmp(&a[s][col].abs()).then(s.cmp(&r)))
                .ok_or(Singular)?;
            a.swap(col, pivot);
            b.swap(col, pivot);
            let p = a[col][col].clone();
            for row in col + 1..n {
                if a[row][col].is_zero() {
                    continue;
                }
                let factor = &a[row][col] / &p;
                for k in col..n {
                    let delta = &factor * &a[col][k];
                    a[row][k] -= delta;
                }
                let delta = &factor * &b[col];
                b[row] -= delta;
            }
        }
        let mut x = vec![Rational::zero(); n];
        for row in (0..n).rev() {
            let mut acc = b[row].clone();
            for k in row + 1..n {
                acc -= &a[row][k] * &x[k];
            }
            x[row] = acc / &a[row][row];
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn solves_small_system() {
        // 2x + y = 3, x - y = 0  ->  x = y = 1
        let sys = LinearSystem {
            matrix: vec![vec![int(2), int(1)], vec![int(1), int(-1)]],
            rhs: vec![int(3), int(0)],
        };
        assert_eq!(sys.solve().unwrap(), vec![int(1), int(1)]);
    }

    #[test]
    fn needs_pivoting() {
        let sys = LinearSystem {
            matrix: vec![vec![int(0), int(1)], vec![ratio(1, 3), int(0)]],
            rhs: vec![int(2), int(1)],
        };
        assert_eq!(sys.solve().unwrap(), vec![int(3), int(2)]);
    }

    #[test]
    fn detects_singular() {
        let sys = LinearSystem {
            matrix: vec![vec![int(1), int(2)], vec![int(2), int(4)]],
            rhs: vec![int(1), int(2)],
        };
        assert_eq!(sys.solve(), Err(Singular));
    }

    #[test]
    fn empty_system() {
        assert_eq!(LinearSystem::zeros(0).solve().unwrap(), Vec::<Rational>::new());
    }
}
