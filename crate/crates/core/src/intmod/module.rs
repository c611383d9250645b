use std::fmt;
use std::sync::{Arc, OnceLock};

use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::Matrix;
use super::ring::{BaseRing, Int};
use super::snf::smith_normal_form;
use super::solve::LinearSolver;
use crate::error::{Error, Result};

/// Structure of a presentation read off from its Smith form.
#[derive(Debug)]
struct Structure {
    /// Orders of the non-unit cyclic summands, in divisibility order; `0` marks
    /// a summand with no relation (free over Z, a copy of Z/n over Z/n).
    orders: Vec<Int>,
    /// Coordinates of an element in the cyclic decomposition (k x g).
    to_canon: Matrix,
    /// Generator images of the cyclic decomposition (g x k).
    from_canon: Matrix,
}

#[derive(Debug)]
struct ModuleInner {
    ring: BaseRing,
    gens: usize,
    rels: Matrix,
    structure: OnceLock<Structure>,
}

/// A finitely presented module `R^g / (column span of rels)`.
///
/// Equality is isomorphism (equal invariant factors); use
/// [`FpModule::same_presentation`] to compare presentations.
#[derive(Clone)]
pub struct FpModule(Arc<ModuleInner>);

impl FpModule {
    pub fn new(ring: &BaseRing, gens: usize, rels: Matrix) -> Result<Self> {
        if rels.rows() != gens {
            return Err(Error::input(format!(
                "relation matrix has {} rows for {} generators",
                rels.rows(),
                gens
            )));
        }
        Ok(Self::from_parts(ring, rels.reduced(ring)))
    }

    fn from_parts(ring: &BaseRing, rels: Matrix) -> Self {
        FpModule(Arc::new(ModuleInner {
            ring: ring.clone(),
            gens: rels.rows(),
            rels,
            structure: OnceLock::new(),
        }))
    }

    pub fn zero(ring: &BaseRing) -> Self {
        Self::from_parts(ring, Matrix::zeros(0, 0))
    }

    pub fn free(ring: &BaseRing, rank: usize) -> Self {
        Self::from_parts(ring, Matrix::zeros(rank, 0))
    }

    /// Direct sum of cyclic modules `R/(d)`; zero orders give free summands.
    pub fn cyclic_sum(ring: &BaseRing, orders: &[Int]) -> Self {
        let k = orders.len();
        let nonzero: Vec<usize> = (0..k).filter(|&i| !ring.is_zero(&orders[i])).collect();
        let mut rels = Matrix::zeros(k, nonzero.len());
        for (c, &i) in nonzero.iter().enumerate() {
            rels[(i, c)] = ring.reduce(&orders[i]);
        }
        Self::from_parts(ring, rels)
    }

    pub fn cyclic(ring: &BaseRing, order: impl Into<Int>) -> Self {
        Self::cyclic_sum(ring, &[order.into()])
    }

    pub fn ring(&self) -> &BaseRing {
        &self.0.ring
    }

    pub fn generators(&self) -> usize {
        self.0.gens
    }

    pub fn relations(&self) -> &Matrix {
        &self.0.rels
    }

    pub fn same_presentation(&self, other: &FpModule) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.ring == other.0.ring && self.0.gens == other.0.gens && self.0.rels == other.0.rels)
    }

    fn structure(&self) -> &Structure {
        self.0.structure.get_or_init(|| {
            let ring = &self.0.ring;
            let g = self.0.gens;
            let snf = smith_normal_form(&self.0.rels, ring);
            let mut kept = Vec::new();
            let mut orders = Vec::new();
            for i in 0..g {
                let d = if i < snf.rank { snf.d[(i, i)].clone() } else { Int::zero() };
                if !d.is_zero() && ring.is_unit(&d) {
                    continue;
                }
                kept.push(i);
                orders.push(d);
            }
            Structure {
                orders,
                to_canon: snf.u.select_rows(&kept),
                from_canon: snf.u_inv.select_cols(&kept),
            }
        })
    }

    /// Rows mapping generator coordinates to cyclic-decomposition coordinates.
    pub(crate) fn canon_coords(&self) -> &Matrix {
        &self.structure().to_canon
    }

    /// Orders of the cyclic decomposition, `0` for relation-free summands.
    pub fn orders(&self) -> &[Int] {
        &self.structure().orders
    }

    /// Invariant factors `d_1 | d_2 | ...` with free summands last; over Z/n a
    /// relation-free summand is reported as `n`, over Z as `0`.
    pub fn invariant_factors(&self) -> Vec<Int> {
        let ring = self.ring();
        self.orders()
            .iter()
            .map(|d| match (ring.modulus(), d.is_zero()) {
                (Some(n), true) => n.clone(),
                _ => d.clone(),
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.orders().is_empty()
    }

    /// Number of elements, if finite.
    pub fn cardinality(&self) -> Option<Int> {
        let mut total = Int::one();
        for d in self.invariant_factors() {
            if d.is_zero() {
                return None;
            }
            total *= d;
        }
        Some(total)
    }

    pub fn is_isomorphic(&self, other: &FpModule) -> bool {
        self.ring() == other.ring() && self.invariant_factors() == other.invariant_factors()
    }

    /// Coordinates in the cyclic decomposition, reduced modulo the orders.
    /// Two vectors represent the same element iff these agree.
    pub fn normal_form(&self, x: &[Int]) -> Vec<Int> {
        assert_eq!(x.len(), self.generators(), "element length mismatch");
        let s = self.structure();
        let ring = self.ring();
        let y = s.to_canon.mul_vec(x);
        y.into_iter()
            .zip(&s.orders)
            .map(|(v, d)| {
                if d.is_zero() {
                    ring.reduce(&v)
                } else {
                    v.mod_floor(d)
                }
            })
            .collect()
    }

    /// Is `x` zero in the module (i.e. in the relation lattice)?
    pub fn is_zero_element(&self, x: &[Int]) -> bool {
        assert_eq!(x.len(), self.generators(), "element length mismatch");
        let s = self.structure();
        let ring = self.ring();
        s.to_canon
            .mul_vec(x)
            .iter()
            .zip(&s.orders)
            .all(|(v, d)| ring.divides(d, v))
    }

    /// Every column of `m` (a matrix with `generators()` rows) is zero in the module.
    pub fn kills_columns(&self, m: &Matrix) -> bool {
        assert_eq!(m.rows(), self.generators(), "column length mismatch");
        let s = self.structure();
        let ring = self.ring();
        let y = s.to_canon.mul(m);
        (0..y.rows()).all(|i| (0..y.cols()).all(|j| ring.divides(&s.orders[i], &y[(i, j)])))
    }

    /// The isomorphic cyclic-decomposition module, with mutually inverse maps.
    pub fn simplify(&self) -> (FpModule, ModuleHom, ModuleHom) {
        let s = self.structure();
        let canon = FpModule::cyclic_sum(self.ring(), &s.orders);
        let to = ModuleHom::from_parts(self.clone(), canon.clone(), s.to_canon.reduced(self.ring()));
        let from = ModuleHom::from_parts(canon.clone(), self.clone(), s.from_canon.reduced(self.ring()));
        (canon, to, from)
    }

    /// Is the presentation already a cyclic decomposition with no unit orders?
    pub fn is_canonical(&self) -> bool {
        let s = self.structure();
        s.to_canon.rows() == self.generators() && s.to_canon == Matrix::identity(self.generators()).reduced(self.ring())
    }

    pub fn direct_sum(&self, other: &FpModule) -> FpModule {
        assert_eq!(self.ring(), other.ring(), "direct sum over different rings");
        FpModule::from_parts(self.ring(), self.relations().block_diag(other.relations()))
    }

    pub fn direct_sum_all(ring: &BaseRing, parts: &[FpModule]) -> FpModule {
        parts
            .iter()
            .fold(FpModule::zero(ring), |acc, m| acc.direct_sum(m))
    }

    /// "Z/2 + Z/4 + Z", or "0".
    pub fn describe(&self) -> String {
        describe_factors(&self.invariant_factors())
    }
}

pub fn describe_factors(factors: &[Int]) -> String {
    if factors.is_empty() {
        return "0".into();
    }
    let parts: Vec<String> = factors
        .iter()
        .map(|d| if d.is_zero() { "Z".to_string() } else { format!("Z/{d}") })
        .collect();
    parts.join(" + ")
}

impl PartialEq for FpModule {
    fn eq(&self, other: &Self) -> bool {
        self.is_isomorphic(other)
    }
}

impl Eq for FpModule {}

impl fmt::Debug for FpModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FpModule({} gens, rels {}, ~ {})",
            self.generators(),
            self.relations(),
            self.describe()
        )
    }
}

impl fmt::Display for FpModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

/// A module homomorphism given by the images of the source generators.
#[derive(Clone)]
pub struct ModuleHom {
    source: FpModule,
    target: FpModule,
    matrix: Matrix,
}

impl ModuleHom {
    /// Checked constructor: shape and well-definedness.
    pub fn new(source: &FpModule, target: &FpModule, matrix: Matrix) -> Result<Self> {
        if source.ring() != target.ring() {
            return Err(Error::input("homomorphism between modules over different rings"));
        }
        if matrix.shape() != (target.generators(), source.generators()) {
            return Err(Error::input(format!(
                "homomorphism matrix is {:?}, expected {}x{}",
                matrix.shape(),
                target.generators(),
                source.generators()
            )));
        }
        let matrix = matrix.reduced(source.ring());
        if !target.kills_columns(&matrix.mul(source.relations())) {
            return Err(Error::input(
                "homomorphism is not well defined: a source relator maps outside the target relations",
            ));
        }
        Ok(ModuleHom {
            source: source.clone(),
            target: target.clone(),
            matrix,
        })
    }

    /// Unchecked constructor for matrices known to be well defined.
    pub(crate) fn from_parts(source: FpModule, target: FpModule, matrix: Matrix) -> Self {
        debug_assert_eq!(matrix.shape(), (target.generators(), source.generators()));
        let matrix = matrix.reduced(source.ring());
        ModuleHom { source, target, matrix }
    }

    pub fn identity(m: &FpModule) -> Self {
        Self::from_parts(m.clone(), m.clone(), Matrix::identity(m.generators()))
    }

    pub fn zero(source: &FpModule, target: &FpModule) -> Self {
        Self::from_parts(
            source.clone(),
            target.clone(),
            Matrix::zeros(target.generators(), source.generators()),
        )
    }

    pub fn source(&self) -> &FpModule {
        &self.source
    }

    pub fn target(&self) -> &FpModule {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn ring(&self) -> &BaseRing {
        self.source.ring()
    }

    pub fn is_well_defined(&self) -> bool {
        self.target.kills_columns(&self.matrix.mul(self.source.relations()))
    }

    pub fn apply(&self, x: &[Int]) -> Vec<Int> {
        let mut y = self.matrix.mul_vec(x);
        for v in &mut y {
            self.ring().reduce_in_place(v);
        }
        y
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ModuleHom) -> ModuleHom {
        assert!(
            self.target.same_presentation(&other.source),
            "composition of non-composable module maps"
        );
        Self::from_parts(self.source.clone(), other.target.clone(), other.matrix.mul(&self.matrix))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ModuleHom) -> ModuleHom {
        other.then(self)
    }

    fn check_parallel(&self, other: &ModuleHom) {
        assert!(
            self.source.same_presentation(&other.source) && self.target.same_presentation(&other.target),
            "module maps are not parallel"
        );
    }

    pub fn add(&self, other: &ModuleHom) -> ModuleHom {
        self.check_parallel(other);
        Self::from_parts(self.source.clone(), self.target.clone(), self.matrix.add(&other.matrix))
    }

    pub fn sub(&self, other: &ModuleHom) -> ModuleHom {
        self.check_parallel(other);
        Self::from_parts(self.source.clone(), self.target.clone(), self.matrix.sub(&other.matrix))
    }

    pub fn neg(&self) -> ModuleHom {
        Self::from_parts(self.source.clone(), self.target.clone(), self.matrix.neg())
    }

    pub fn scale(&self, c: &Int) -> ModuleHom {
        Self::from_parts(self.source.clone(), self.target.clone(), self.matrix.scale(c))
    }

    /// The zero map (every generator lands in the target relations).
    pub fn is_zero(&self) -> bool {
        self.target.kills_columns(&self.matrix)
    }

    /// Equality as maps of modules.
    pub fn same_map(&self, other: &ModuleHom) -> bool {
        self.check_parallel(other);
        self.target.kills_columns(&self.matrix.sub(&other.matrix))
    }

    /// Lattice of source vectors mapping into the target relations (g_s x s).
    fn preimage_lattice(&self) -> Matrix {
        let t = self.target.structure();
        let k = t.orders.len();
        let gs = self.source.generators();
        let tf = t.to_canon.mul(&self.matrix);
        let sys = tf.hstack(&Matrix::diagonal(k, k, &t.orders));
        let solver = LinearSolver::new(&sys.reduced(self.ring()), self.ring());
        let cols: Vec<Vec<Int>> = solver
            .kernel_basis()
            .into_iter()
            .map(|v| v[..gs].to_vec())
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .collect();
        Matrix::from_columns(gs, &cols)
    }

    /// Kernel, returned in canonical form together with its inclusion.
    pub fn kernel(&self) -> (FpModule, ModuleHom) {
        let ring = self.ring();
        let p = self.preimage_lattice();
        let s = self.source.structure();
        let k = s.orders.len();
        let sp = s.to_canon.mul(&p);
        let sys = sp.hstack(&Matrix::diagonal(k, k, &s.orders));
        let solver = LinearSolver::new(&sys.reduced(ring), ring);
        let rel_cols: Vec<Vec<Int>> = solver
            .kernel_basis()
            .into_iter()
            .map(|v| v[..p.cols()].to_vec())
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .collect();
        let pres = FpModule::from_parts(ring, Matrix::from_columns(p.cols(), &rel_cols).reduced(ring));
        let (canon, _, from) = pres.simplify();
        let incl = ModuleHom::from_parts(canon.clone(), self.source.clone(), p.mul(from.matrix()));
        (canon, incl)
    }

    /// Cokernel, in canonical form, with its projection.
    pub fn cokernel(&self) -> (FpModule, ModuleHom) {
        let ring = self.ring();
        let rels = self.target.relations().hstack(&self.matrix);
        let pres = FpModule::from_parts(ring, rels);
        let (canon, to, _) = pres.simplify();
        let proj = ModuleHom::from_parts(self.target.clone(), canon.clone(), to.matrix().clone());
        (canon, proj)
    }

    /// Image, in canonical form, with its inclusion into the target.
    pub fn image(&self) -> (FpModule, ModuleHom) {
        let ring = self.ring();
        let p = self.preimage_lattice();
        let pres = FpModule::from_parts(ring, p.hstack(self.source.relations()).reduced(ring));
        let (canon, _, from) = pres.simplify();
        let incl = ModuleHom::from_parts(canon.clone(), self.target.clone(), self.matrix.mul(from.matrix()));
        (canon, incl)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().0.is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().0.is_zero()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Solve `self(x) = y` for a vector `x`, canonical choice.
    pub fn preimage(&self, y: &[Int]) -> Option<Vec<Int>> {
        let ring = self.ring();
        let t = self.target.structure();
        let k = t.orders.len();
        let sys = t.to_canon.mul(&self.matrix).hstack(&Matrix::diagonal(k, k, &t.orders));
        let rhs = t.to_canon.mul_vec(y);
        let x = LinearSolver::new(&sys.reduced(ring), ring)
            .solve(&rhs.iter().map(|v| ring.reduce(v)).collect::<Vec<_>>())
            .expect("dimensions match")?;
        Some(x[..self.source.generators()].to_vec())
    }

    /// For a surjective `self: A → B` and `g: A → C` killing `ker(self)`, the
    /// unique `h: B → C` with `h ∘ self = g`.
    pub fn factor_through_surjection(&self, g: &ModuleHom) -> Result<ModuleHom> {
        if !g.source.same_presentation(&self.source) {
            return Err(Error::input("factor_through_surjection: sources differ"));
        }
        let b = &self.target;
        let mut cols = Vec::with_capacity(b.generators());
        for j in 0..b.generators() {
            let mut e = vec![Int::zero(); b.generators()];
            e[j] = Int::one();
            let x = self
                .preimage(&e)
                .ok_or_else(|| Error::precondition("factor_through_surjection: map is not surjective"))?;
            cols.push(g.apply(&x));
        }
        let h = ModuleHom::from_parts(b.clone(), g.target.clone(), Matrix::from_columns(g.target.generators(), &cols));
        if !h.is_well_defined() || !self.then(&h).same_map(g) {
            return Err(Error::precondition(
                "factor_through_surjection: map does not vanish on the kernel",
            ));
        }
        Ok(h)
    }

    /// For an injective `self: A → B` and `g: C → B` with image inside
    /// `image(self)`, the unique `h: C → A` with `self ∘ h = g`.
    pub fn lift_through_injection(&self, g: &ModuleHom) -> Result<ModuleHom> {
        if !g.target.same_presentation(&self.target) {
            return Err(Error::input("lift_through_injection: targets differ"));
        }
        let c = &g.source;
        let mut cols = Vec::with_capacity(c.generators());
        for j in 0..c.generators() {
            let y = g.matrix.column(j);
            let x = self
                .preimage(&y)
                .ok_or_else(|| Error::precondition("lift_through_injection: image not contained"))?;
            cols.push(x);
        }
        let h = ModuleHom::from_parts(c.clone(), self.source.clone(), Matrix::from_columns(self.source.generators(), &cols));
        if !h.is_well_defined() {
            return Err(Error::precondition("lift_through_injection: map is not injective"));
        }
        Ok(h)
    }

    /// `[self, other]: A ⊕ B → C` for maps with common target.
    pub fn copair(&self, other: &ModuleHom) -> ModuleHom {
        assert!(self.target.same_presentation(&other.target), "copair: targets differ");
        ModuleHom::from_parts(
            self.source.direct_sum(&other.source),
            self.target.clone(),
            self.matrix.hstack(&other.matrix),
        )
    }

    /// `(self, other): A → B ⊕ C` for maps with common source.
    pub fn pair(&self, other: &ModuleHom) -> ModuleHom {
        assert!(self.source.same_presentation(&other.source), "pair: sources differ");
        ModuleHom::from_parts(
            self.source.clone(),
            self.target.direct_sum(&other.target),
            self.matrix.vstack(&other.matrix),
        )
    }
}

impl fmt::Debug for ModuleHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModuleHom({} -> {}, {})", self.source, self.target, self.matrix)
    }
}

/// Block inclusion `A_i → A_0 ⊕ ... ⊕ A_k`.
pub fn sum_injection(parts: &[FpModule], sum: &FpModule, i: usize) -> ModuleHom {
    let offset: usize = parts[..i].iter().map(|m| m.generators()).sum();
    let mut m = Matrix::zeros(sum.generators(), parts[i].generators());
    for j in 0..parts[i].generators() {
        m[(offset + j, j)] = Int::one();
    }
    ModuleHom::from_parts(parts[i].clone(), sum.clone(), m)
}

/// Block projection `A_0 ⊕ ... ⊕ A_k → A_i`.
pub fn sum_projection(parts: &[FpModule], sum: &FpModule, i: usize) -> ModuleHom {
    let offset: usize = parts[..i].iter().map(|m| m.generators()).sum();
    let mut m = Matrix::zeros(parts[i].generators(), sum.generators());
    for j in 0..parts[i].generators() {
        m[(j, offset + j)] = Int::one();
    }
    ModuleHom::from_parts(sum.clone(), parts[i].clone(), m)
}

/// Hom from a cyclic-decomposition source; generator `j` goes to column `j`.
pub fn hom_from_columns(source: &FpModule, target: &FpModule, columns: &[Vec<Int>]) -> Result<ModuleHom> {
    ModuleHom::new(source, target, Matrix::from_columns(target.generators(), columns))
}

/// Cokernel of the map `x ↦ f(x)` restricted: classical cokernel module only.
pub fn hom_cokernel(f: &ModuleHom) -> (FpModule, ModuleHom) {
    f.cokernel()
}

pub fn hom_kernel(f: &ModuleHom) -> (FpModule, ModuleHom) {
    f.kernel()
}

pub fn hom_image(f: &ModuleHom) -> FpModule {
    f.image().0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(x: i64) -> Int {
        Int::from(x)
    }

    #[test]
    fn cokernel_of_times_two() {
        let r = BaseRing::Integers;
        let zz = FpModule::free(&r, 1);
        let f = ModuleHom::new(&zz, &zz, Matrix::from_i64(1, 1, &[2])).unwrap();
        assert_eq!(f.cokernel().0.invariant_factors(), vec![z(2)]);
        assert!(f.kernel().0.is_zero());
    }

    #[test]
    fn kernel_of_projection_to_z2() {
        let r = BaseRing::Integers;
        let zz = FpModule::free(&r, 1);
        let z2 = FpModule::cyclic(&r, 2);
        let f = ModuleHom::new(&zz, &z2, Matrix::from_i64(1, 1, &[1])).unwrap();
        let (k, incl) = f.kernel();
        assert_eq!(k.invariant_factors(), vec![z(0)]);
        assert_eq!(incl.matrix()[(0, 0)].clone() * incl.matrix()[(0, 0)].clone(), z(4));
    }

    #[test]
    fn image_of_times_two_mod_4() {
        let r = BaseRing::zn(4);
        let m = FpModule::free(&r, 1);
        let f = ModuleHom::new(&m, &m, Matrix::from_i64(1, 1, &[2])).unwrap();
        assert_eq!(hom_image(&f).invariant_factors(), vec![z(2)]);
        assert_eq!(f.kernel().0.invariant_factors(), vec![z(2)]);
        assert_eq!(f.cokernel().0.invariant_factors(), vec![z(2)]);
        assert_eq!(m.invariant_factors(), vec![z(4)]);
    }

    #[test]
    fn ill_defined_map_rejected() {
        let r = BaseRing::Integers;
        let z2 = FpModule::cyclic(&r, 2);
        let zz = FpModule::free(&r, 1);
        assert!(ModuleHom::new(&z2, &zz, Matrix::from_i64(1, 1, &[1])).is_err());
    }

    #[test]
    fn simplify_is_inverse_pair() {
        let r = BaseRing::Integers;
        let m = FpModule::new(&r, 2, Matrix::from_i64(2, 2, &[2, 4, 6, 8])).unwrap();
        let (c, to, from) = m.simplify();
        assert_eq!(c.invariant_factors(), vec![z(2), z(4)]);
        assert!(to.then(&from).same_map(&ModuleHom::identity(&m)));
        assert!(from.then(&to).same_map(&ModuleHom::identity(&c)));
        assert_eq!(m.describe(), "Z/2 + Z/4");
    }
}
