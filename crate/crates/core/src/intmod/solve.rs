use num_traits::Zero;
use rand::Rng;

use super::matrix::Matrix;
use super::ring::{BaseRing, Int};
use super::snf::{smith_normal_form, Snf};
use crate::error::{Error, Result};

/// A linear system `M x = b` with a cached Smith form, reusable across
/// right-hand sides.
#[derive(Clone, Debug)]
pub struct LinearSolver {
    ring: BaseRing,
    rows: usize,
    cols: usize,
    snf: Snf,
}

impl LinearSolver {
    pub fn new(m: &Matrix, ring: &BaseRing) -> Self {
        LinearSolver {
            ring: ring.clone(),
            rows: m.rows(),
            cols: m.cols(),
            snf: smith_normal_form(m, ring),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn snf(&self) -> &Snf {
        &self.snf
    }

    /// Canonical solution, or `None` if the system is inconsistent.
    ///
    /// With `u M v = d` and `x = v y`, each pivot coordinate `y_i` is the least
    /// nonnegative solution of `d_i y_i = (u b)_i` and free coordinates are zero.
    pub fn solve(&self, b: &[Int]) -> Result<Option<Vec<Int>>> {
        if b.len() != self.rows {
            return Err(Error::input(format!(
                "right-hand side has length {}, expected {}",
                b.len(),
                self.rows
            )));
        }
        let c = self.snf.u.mul_vec(b);
        let mut y = vec![Int::zero(); self.cols];
        for (i, ci) in c.iter().enumerate() {
            if i < self.snf.rank {
                let d = &self.snf.d[(i, i)];
                match self.ring.exact_quotient(d, ci) {
                    Some(q) => y[i] = q,
                    None => return Ok(None),
                }
            } else if !self.ring.is_zero(ci) {
                return Ok(None);
            }
        }
        let mut x = self.snf.v.mul_vec(&y);
        for xi in &mut x {
            self.ring.reduce_in_place(xi);
        }
        Ok(Some(x))
    }

    /// Generators of the solution space of `M x = 0`.
    pub fn kernel_basis(&self) -> Vec<Vec<Int>> {
        let mut out = Vec::new();
        if let Some(n) = self.ring.modulus() {
            for i in 0..self.snf.rank {
                let d = &self.snf.d[(i, i)];
                let f = n / d;
                if self.ring.is_zero(&f) {
                    continue;
                }
                let col: Vec<Int> = self
                    .snf
                    .v
                    .column(i)
                    .iter()
                    .map(|x| self.ring.reduce(&(x * &f)))
                    .collect();
                out.push(col);
            }
        }
        for i in self.snf.rank..self.cols {
            out.push(self.snf.v.column(i));
        }
        out
    }

    /// A solution perturbed by a random kernel element (Z/n only; over Z the
    /// perturbation coefficients are drawn from a small symmetric range).
    pub fn solve_random<R: Rng>(&self, b: &[Int], rng: &mut R) -> Result<Option<Vec<Int>>> {
        let Some(mut x) = self.solve(b)? else {
            return Ok(None);
        };
        for k in self.kernel_basis() {
            let c = self.ring.random_element(rng);
            if c.is_zero() {
                continue;
            }
            for (xi, ki) in x.iter_mut().zip(&k) {
                *xi += &c * ki;
                self.ring.reduce_in_place(xi);
            }
        }
        Ok(Some(x))
    }
}

/// Solve `M x = b`; see `LinearSolver::solve` for the canonical choice.
pub fn solve_linear(m: &Matrix, b: &[Int], ring: &BaseRing) -> Result<Option<Vec<Int>>> {
    if m.rows() != b.len() {
        return Err(Error::input(format!(
            "matrix has {} rows but right-hand side has length {}",
            m.rows(),
            b.len()
        )));
    }
    LinearSolver::new(m, ring).solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn small_examples() {
        let m = Matrix::from_i64(1, 1, &[2]);
        assert_eq!(solve_linear(&m, &ints(&[4]), &BaseRing::Integers).unwrap(), Some(ints(&[2])));
        assert_eq!(solve_linear(&m, &ints(&[1]), &BaseRing::Integers).unwrap(), None);
        assert_eq!(solve_linear(&m, &ints(&[2]), &BaseRing::zn(4)).unwrap(), Some(ints(&[1])));
        assert!(solve_linear(&m, &ints(&[1, 2]), &BaseRing::Integers).is_err());
    }

    #[test]
    fn kernel_mod_n() {
        let ring = BaseRing::zn(4);
        let m = Matrix::from_i64(1, 2, &[2, 0]);
        let s = LinearSolver::new(&m, &ring);
        let k = s.kernel_basis();
        // Kernel of (x, y) -> 2x is {x even} x Z/4: 8 elements.
        let mut elems = std::collections::BTreeSet::new();
        for a in 0..4 {
            for b in 0..4 {
                let mut v = vec![Int::zero(); 2];
                for (c, kv) in [a, b].iter().zip(&k) {
                    for i in 0..2 {
                        v[i] = ring.reduce(&(&v[i] + Int::from(*c) * &kv[i]));
                    }
                }
                elems.insert(v);
            }
        }
        assert_eq!(elems.len(), 8);
    }
}
