//! Linear systems whose unknowns are module homomorphisms.
//!
//! An equation reads `sum_k L_k X_k R_k = C` as maps `S → T`, where each
//! unknown `X_k: P_k → Q_k` must itself be well defined. Equality is equality
//! of maps, i.e. modulo the relations of `T`. Everything is vectorized into
//! one integer system with slack variables for the target relations.

use num_traits::Zero;
use rand::Rng;

use super::matrix::Matrix;
use super::module::{FpModule, ModuleHom};
use super::ring::{BaseRing, Int};
use super::solve::LinearSolver;
use crate::error::{Error, Result};

/// One summand `L X_k R` of an equation.
#[derive(Clone, Debug)]
pub struct Term {
    pub unknown: usize,
    /// `Q_k → T`, shape `T.gens x Q_k.gens`.
    pub left: Matrix,
    /// `S → P_k`, shape `P_k.gens x S.gens`.
    pub right: Matrix,
}

#[derive(Clone, Debug)]
struct Equation {
    source: FpModule,
    target: FpModule,
    terms: Vec<Term>,
}

#[derive(Clone, Debug)]
pub struct HomSystem {
    ring: BaseRing,
    unknowns: Vec<(FpModule, FpModule)>,
    equations: Vec<Equation>,
}

impl HomSystem {
    pub fn new(ring: &BaseRing) -> Self {
        HomSystem {
            ring: ring.clone(),
            unknowns: Vec::new(),
            equations: Vec::new(),
        }
    }

    /// Register an unknown `X: source → target`; returns its index.
    pub fn add_unknown(&mut self, source: &FpModule, target: &FpModule) -> usize {
        self.unknowns.push((source.clone(), target.clone()));
        self.unknowns.len() - 1
    }

    pub fn unknown_count(&self) -> usize {
        self.unknowns.len()
    }

    /// Term `left ∘ X_k ∘ right`; `None` stands for an identity.
    pub fn term(&self, unknown: usize, left: Option<&ModuleHom>, right: Option<&ModuleHom>) -> Term {
        let (p, q) = &self.unknowns[unknown];
        Term {
            unknown,
            left: left.map_or_else(|| Matrix::identity(q.generators()), |m| m.matrix().clone()),
            right: right.map_or_else(|| Matrix::identity(p.generators()), |m| m.matrix().clone()),
        }
    }

    /// Term with a scalar factor.
    pub fn scaled_term(&self, c: i64, unknown: usize, left: Option<&ModuleHom>, right: Option<&ModuleHom>) -> Term {
        let mut t = self.term(unknown, left, right);
        t.left = t.left.scale(&Int::from(c));
        t
    }

    /// Add an equation between maps `source → target`; returns its index.
    pub fn add_equation(&mut self, source: &FpModule, target: &FpModule, terms: Vec<Term>) -> Result<usize> {
        for t in &terms {
            let (p, q) = self
                .unknowns
                .get(t.unknown)
                .ok_or_else(|| Error::input("term refers to an unknown that does not exist"))?;
            if t.left.shape() != (target.generators(), q.generators())
                || t.right.shape() != (p.generators(), source.generators())
            {
                return Err(Error::input(format!(
                    "term shape mismatch: left {:?}, right {:?} for unknown {}x{} in equation {}x{}",
                    t.left.shape(),
                    t.right.shape(),
                    q.generators(),
                    p.generators(),
                    target.generators(),
                    source.generators()
                )));
            }
        }
        self.equations.push(Equation {
            source: source.clone(),
            target: target.clone(),
            terms,
        });
        Ok(self.equations.len() - 1)
    }

    pub fn prepare(&self) -> PreparedSystem {
        PreparedSystem::build(self)
    }

    /// Canonical solution for the given right-hand sides (one per equation).
    pub fn solve(&self, rhs: &[Matrix]) -> Result<Option<Vec<ModuleHom>>> {
        self.prepare().solve(rhs)
    }

    /// A solution chosen at random from the solution set.
    pub fn solve_random<R: Rng>(&self, rhs: &[Matrix], rng: &mut R) -> Result<Option<Vec<ModuleHom>>> {
        self.prepare().solve_random(rhs, rng)
    }

    /// Zero right-hand sides of the right shapes.
    pub fn zero_rhs(&self) -> Vec<Matrix> {
        self.equations
            .iter()
            .map(|e| Matrix::zeros(e.target.generators(), e.source.generators()))
            .collect()
    }
}

/// Row of the vectorized system, remembering where its right-hand side lives.
#[derive(Clone, Debug)]
enum RowSource {
    Equation { eq: usize, coord: usize, col: usize },
    WellDefined,
}

/// Constraint with no unknowns: `order | rhs coordinate`.
#[derive(Clone, Debug)]
struct Obstruction {
    eq: usize,
    coord: usize,
    col: usize,
    order: Int,
}

/// A `HomSystem` with its coefficient matrix factored once.
#[derive(Clone, Debug)]
pub struct PreparedSystem {
    ring: BaseRing,
    unknowns: Vec<(FpModule, FpModule)>,
    offsets: Vec<usize>,
    eq_targets: Vec<FpModule>,
    eq_shapes: Vec<(usize, usize)>,
    rows: Vec<RowSource>,
    obstructions: Vec<Obstruction>,
    solver: LinearSolver,
}

impl PreparedSystem {
    fn build(sys: &HomSystem) -> Self {
        let ring = &sys.ring;
        let mut offsets = Vec::with_capacity(sys.unknowns.len());
        let mut nvars = 0;
        for (p, q) in &sys.unknowns {
            offsets.push(nvars);
            nvars += p.generators() * q.generators();
        }
        let mut coeff_rows: Vec<Vec<(usize, Int)>> = Vec::new();
        let mut slack_orders: Vec<Option<Int>> = Vec::new();
        let mut rows = Vec::new();
        let mut obstructions = Vec::new();

        for (ei, eq) in sys.equations.iter().enumerate() {
            let toc = eq.target.canon_coords();
            let orders = eq.target.orders();
            let lefts: Vec<Matrix> = eq.terms.iter().map(|t| toc.mul(&t.left).reduced(ring)).collect();
            for (i, order) in orders.iter().enumerate() {
                for j in 0..eq.source.generators() {
                    let mut entries: Vec<(usize, Int)> = Vec::new();
                    for (t, l) in eq.terms.iter().zip(&lefts) {
                        let (p, q) = &sys.unknowns[t.unknown];
                        let pg = p.generators();
                        for a in 0..q.generators() {
                            let la = &l[(i, a)];
                            if la.is_zero() {
                                continue;
                            }
                            for b in 0..pg {
                                let rb = &t.right[(b, j)];
                                if rb.is_zero() {
                                    continue;
                                }
                                entries.push((offsets[t.unknown] + a * pg + b, la * rb));
                            }
                        }
                    }
                    let entries = merge_entries(entries, ring);
                    if entries.is_empty() {
                        obstructions.push(Obstruction {
                            eq: ei,
                            coord: i,
                            col: j,
                            order: order.clone(),
                        });
                        continue;
                    }
                    coeff_rows.push(entries);
                    slack_orders.push((!ring.is_zero(order)).then(|| order.clone()));
                    rows.push(RowSource::Equation { eq: ei, coord: i, col: j });
                }
            }
        }
        for (k, (p, q)) in sys.unknowns.iter().enumerate() {
            let toc = q.canon_coords();
            let orders = q.orders();
            let rel = p.relations();
            let pg = p.generators();
            for c in 0..rel.cols() {
                for (i, order) in orders.iter().enumerate() {
                    let mut entries = Vec::new();
                    for a in 0..q.generators() {
                        let la = &toc[(i, a)];
                        if la.is_zero() {
                            continue;
                        }
                        for b in 0..pg {
                            let rb = &rel[(b, c)];
                            if !rb.is_zero() {
                                entries.push((offsets[k] + a * pg + b, la * rb));
                            }
                        }
                    }
                    let entries = merge_entries(entries, ring);
                    if entries.is_empty() {
                        continue;
                    }
                    coeff_rows.push(entries);
                    slack_orders.push((!ring.is_zero(order)).then(|| order.clone()));
                    rows.push(RowSource::WellDefined);
                }
            }
        }

        let nslack = slack_orders.iter().filter(|s| s.is_some()).count();
        let mut m = Matrix::zeros(coeff_rows.len(), nvars + nslack);
        let mut s = nvars;
        for (r, (entries, slack)) in coeff_rows.iter().zip(&slack_orders).enumerate() {
            for (c, v) in entries {
                m[(r, *c)] = v.clone();
            }
            if let Some(order) = slack {
                m[(r, s)] = order.clone();
                s += 1;
            }
        }
        PreparedSystem {
            ring: ring.clone(),
            unknowns: sys.unknowns.clone(),
            offsets,
            eq_targets: sys.equations.iter().map(|e| e.target.clone()).collect(),
            eq_shapes: sys
                .equations
                .iter()
                .map(|e| (e.target.generators(), e.source.generators()))
                .collect(),
            rows,
            obstructions,
            solver: LinearSolver::new(&m, ring),
        }
    }

    /// Number of rows and columns of the vectorized system.
    pub fn size(&self) -> (usize, usize) {
        (self.solver.rows(), self.solver.cols())
    }

    fn rhs_vector(&self, rhs: &[Matrix]) -> Result<Option<Vec<Int>>> {
        if rhs.len() != self.eq_shapes.len() {
            return Err(Error::input(format!(
                "{} right-hand sides for {} equations",
                rhs.len(),
                self.eq_shapes.len()
            )));
        }
        for (r, shape) in rhs.iter().zip(&self.eq_shapes) {
            if r.shape() != *shape {
                return Err(Error::input(format!(
                    "right-hand side is {:?}, expected {:?}",
                    r.shape(),
                    shape
                )));
            }
        }
        let coords: Vec<Matrix> = rhs
            .iter()
            .zip(&self.eq_targets)
            .map(|(c, t)| t.canon_coords().mul(c))
            .collect();
        for o in &self.obstructions {
            if !self.ring.divides(&o.order, &coords[o.eq][(o.coord, o.col)]) {
                return Ok(None);
            }
        }
        Ok(Some(
            self.rows
                .iter()
                .map(|r| match r {
                    RowSource::Equation { eq, coord, col } => self.ring.reduce(&coords[*eq][(*coord, *col)]),
                    RowSource::WellDefined => Int::zero(),
                })
                .collect(),
        ))
    }

    fn unpack(&self, x: &[Int]) -> Vec<ModuleHom> {
        self.unknowns
            .iter()
            .zip(&self.offsets)
            .map(|((p, q), &off)| {
                let pg = p.generators();
                let mut m = Matrix::zeros(q.generators(), pg);
                for a in 0..q.generators() {
                    for b in 0..pg {
                        m[(a, b)] = x[off + a * pg + b].clone();
                    }
                }
                ModuleHom::from_parts(p.clone(), q.clone(), m)
            })
            .collect()
    }

    pub fn solve(&self, rhs: &[Matrix]) -> Result<Option<Vec<ModuleHom>>> {
        let Some(b) = self.rhs_vector(rhs)? else {
            return Ok(None);
        };
        Ok(self.solver.solve(&b)?.map(|x| self.unpack(&x)))
    }

    pub fn solve_random<R: Rng>(&self, rhs: &[Matrix], rng: &mut R) -> Result<Option<Vec<ModuleHom>>> {
        let Some(b) = self.rhs_vector(rhs)? else {
            return Ok(None);
        };
        Ok(self.solver.solve_random(&b, rng)?.map(|x| self.unpack(&x)))
    }

    /// Generators of the solutions of the homogeneous system.
    pub fn homogeneous_generators(&self) -> Vec<Vec<ModuleHom>> {
        self.solver
            .kernel_basis()
            .iter()
            .map(|k| self.unpack(k))
            .collect()
    }
}

/// A [`HomSystem`] together with right-hand sides, built equation by equation.
#[derive(Clone, Debug)]
pub struct SystemBuilder {
    pub sys: HomSystem,
    rhs: Vec<Matrix>,
}

/// `(c, k, left, right)` stands for `c · left ∘ X_k ∘ right`.
pub type TermSpec<'a> = (i64, usize, Option<&'a ModuleHom>, Option<&'a ModuleHom>);

impl SystemBuilder {
    pub fn new(ring: &BaseRing) -> Self {
        SystemBuilder {
            sys: HomSystem::new(ring),
            rhs: Vec::new(),
        }
    }

    pub fn unknown(&mut self, source: &FpModule, target: &FpModule) -> usize {
        self.sys.add_unknown(source, target)
    }

    /// `sum of terms = known` as maps `source → target`; `None` means zero.
    pub fn equation(&mut self, source: &FpModule, target: &FpModule, terms: &[TermSpec<'_>], known: Option<&ModuleHom>) -> Result<()> {
        let terms = terms
            .iter()
            .map(|&(c, k, l, r)| self.sys.scaled_term(c, k, l, r))
            .collect();
        self.sys.add_equation(source, target, terms)?;
        let m = match known {
            Some(h) => {
                if h.matrix().shape() != (target.generators(), source.generators()) {
                    return Err(Error::input("right-hand side has the wrong shape"));
                }
                h.matrix().clone()
            }
            None => Matrix::zeros(target.generators(), source.generators()),
        };
        self.rhs.push(m);
        Ok(())
    }

    pub fn solve(&self) -> Result<Option<Vec<ModuleHom>>> {
        self.sys.solve(&self.rhs)
    }

    pub fn solve_random<R: Rng>(&self, rng: &mut R) -> Result<Option<Vec<ModuleHom>>> {
        self.sys.solve_random(&self.rhs, rng)
    }
}

fn merge_entries(mut entries: Vec<(usize, Int)>, ring: &BaseRing) -> Vec<(usize, Int)> {
    entries.sort_by_key(|e| e.0);
    let mut out: Vec<(usize, Int)> = Vec::with_capacity(entries.len());
    for (c, v) in entries {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv += v,
            _ => out.push((c, v)),
        }
    }
    out.into_iter()
        .map(|(c, v)| (c, ring.reduce(&v)))
        .filter(|(_, v)| !v.is_zero())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extend_along_inclusion_mod_4() {
        // Extend Z/2 → Z/4 (generator to 2) along the identity of Z/2 into Z/4: X ∘ i = g.
        let r = BaseRing::zn(4);
        let z2 = FpModule::cyclic(&r, 2);
        let z4 = FpModule::free(&r, 1);
        let i = ModuleHom::new(&z2, &z4, Matrix::from_i64(1, 1, &[2])).unwrap();
        let g = ModuleHom::new(&z2, &z4, Matrix::from_i64(1, 1, &[2])).unwrap();
        let mut sys = HomSystem::new(&r);
        let x = sys.add_unknown(&z4, &z4);
        let t = sys.term(x, None, Some(&i));
        sys.add_equation(&z2, &z4, vec![t]).unwrap();
        let sol = sys.solve(&[g.matrix().clone()]).unwrap().unwrap();
        assert!(i.then(&sol[0]).same_map(&g));
    }

    #[test]
    fn well_definedness_is_enforced() {
        // X: Z/2 → Z/4 with X = 1 on the generator is not well defined; X = 2 is.
        let r = BaseRing::zn(4);
        let z2 = FpModule::cyclic(&r, 2);
        let z4 = FpModule::free(&r, 1);
        let mut sys = HomSystem::new(&r);
        let x = sys.add_unknown(&z2, &z4);
        let t = sys.term(x, None, None);
        sys.add_equation(&z2, &z4, vec![t]).unwrap();
        assert!(sys.solve(&[Matrix::from_i64(1, 1, &[1])]).unwrap().is_none());
        assert!(sys.solve(&[Matrix::from_i64(1, 1, &[2])]).unwrap().is_some());
    }
}
