//! Smith normal form over Z and Z/n with both transforms tracked.
//!
//! Moduli that fit comfortably in machine words take a fast `i64` path; the
//! generic path works on arbitrary-precision integers.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::Matrix;
use super::ring::{ext_gcd, BaseRing, Int};

/// Result of `smith_normal_form`: `u * m * v = d`, with `u_inv` the inverse of `u`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: Matrix,
    pub u_inv: Matrix,
    pub d: Matrix,
    pub v: Matrix,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
}

impl Snf {
    /// Nonzero diagonal entries `d_1 | d_2 | ... | d_rank`.
    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

trait Euclid {
    type E: Clone;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn mul_add(&self, s: &Self::E, x: &Self::E, t: &Self::E, y: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    /// Strict ordering on associate classes used to pick pivots.
    fn smaller(&self, a: &Self::E, b: &Self::E) -> bool;
    fn divides(&self, a: &Self::E, b: &Self::E) -> bool;
    fn quotient(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// `(s, t, u, v)` with `s*a + t*b` a gcd, `u*a + v*b = 0`, determinant one.
    fn combo(&self, a: &Self::E, b: &Self::E) -> [Self::E; 4];
    /// `(u, u^-1)` with `a*u` normalized.
    fn normalizer(&self, a: &Self::E) -> (Self::E, Self::E);
}

struct BigRing<'a>(&'a BaseRing);

impl Euclid for BigRing<'_> {
    type E = Int;

    fn zero(&self) -> Int {
        Int::zero()
    }
    fn one(&self) -> Int {
        Int::one()
    }
    fn is_zero(&self, a: &Int) -> bool {
        a.is_zero()
    }
    fn mul_add(&self, s: &Int, x: &Int, t: &Int, y: &Int) -> Int {
        self.0.reduce(&(s * x + t * y))
    }
    fn neg(&self, a: &Int) -> Int {
        self.0.reduce(&-a)
    }
    fn smaller(&self, a: &Int, b: &Int) -> bool {
        self.0.normal_part(a) < self.0.normal_part(b)
    }
    fn divides(&self, a: &Int, b: &Int) -> bool {
        self.0.divides(a, b)
    }
    fn quotient(&self, a: &Int, b: &Int) -> Int {
        self.0.exact_quotient(a, b).expect("quotient called on non-divisible pair")
    }
    fn combo(&self, a: &Int, b: &Int) -> [Int; 4] {
        let (g, s, t) = ext_gcd(a, b);
        let r = self.0;
        [r.reduce(&s), r.reduce(&t), r.reduce(&-(b / &g)), r.reduce(&(a / &g))]
    }
    fn normalizer(&self, a: &Int) -> (Int, Int) {
        let u = self.0.normalizing_unit(a);
        let ui = self.0.unit_inverse(&u).expect("normalizer is a unit");
        (self.0.reduce(&u), ui)
    }
}

/// Z/n with `n < 2^31`, elements kept in `[0, n)`.
struct SmallMod(i64);

fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

fn ext_gcd_i64(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

impl SmallMod {
    fn red(&self, x: i64) -> i64 {
        x.rem_euclid(self.0)
    }
    fn ring_gcd(&self, a: i64) -> i64 {
        gcd_i64(a, self.0)
    }
    fn inverse(&self, a: i64) -> i64 {
        let (g, s, _) = ext_gcd_i64(a, self.0);
        debug_assert_eq!(g, 1);
        self.red(s)
    }
}

impl Euclid for SmallMod {
    type E = i64;

    fn zero(&self) -> i64 {
        0
    }
    fn one(&self) -> i64 {
        1
    }
    fn is_zero(&self, a: &i64) -> bool {
        *a == 0
    }
    fn mul_add(&self, s: &i64, x: &i64, t: &i64, y: &i64) -> i64 {
        self.red((s * x) % self.0 + (t * y) % self.0)
    }
    fn neg(&self, a: &i64) -> i64 {
        self.red(-a)
    }
    fn smaller(&self, a: &i64, b: &i64) -> bool {
        let ga = if *a == 0 { self.0 } else { self.ring_gcd(*a) };
        let gb = if *b == 0 { self.0 } else { self.ring_gcd(*b) };
        ga < gb
    }
    fn divides(&self, a: &i64, b: &i64) -> bool {
        b % self.ring_gcd(*a) == 0
    }
    fn quotient(&self, a: &i64, b: &i64) -> i64 {
        let g = self.ring_gcd(*a);
        let n1 = self.0 / g;
        if n1 == 1 {
            return 0;
        }
        let a1 = (a / g).rem_euclid(n1);
        let b1 = (b / g).rem_euclid(n1);
        let (_, inv, _) = ext_gcd_i64(a1, n1);
        ((b1 * inv.rem_euclid(n1)) % n1).rem_euclid(n1)
    }
    fn combo(&self, a: &i64, b: &i64) -> [i64; 4] {
        let (g, s, t) = ext_gcd_i64(*a, *b);
        [self.red(s), self.red(t), self.red(-(b / g)), self.red(a / g)]
    }
    fn normalizer(&self, a: &i64) -> (i64, i64) {
        if *a == 0 {
            return (1, 1);
        }
        let g = self.ring_gcd(*a);
        let n1 = self.0 / g;
        let mut u = if n1 == 1 {
            0
        } else {
            let (_, inv, _) = ext_gcd_i64(a / g, n1);
            inv.rem_euclid(n1)
        };
        while gcd_i64(u, self.0) != 1 {
            u += n1;
        }
        (u, self.inverse(u))
    }
}

struct Work<'r, R: Euclid> {
    ring: &'r R,
    a: Vec<Vec<R::E>>,
    u: Vec<Vec<R::E>>,
    ui: Vec<Vec<R::E>>,
    v: Vec<Vec<R::E>>,
    m: usize,
    k: usize,
}

impl<R: Euclid> Work<'_, R> {
    fn identity(ring: &R, n: usize) -> Vec<Vec<R::E>> {
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { ring.one() } else { ring.zero() }).collect())
            .collect()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        self.u.swap(i, j);
        for row in &mut self.ui {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in &mut self.a {
            row.swap(i, j);
        }
        for row in &mut self.v {
            row.swap(i, j);
        }
    }

    /// Rows (i, j) <- (s*i + t*j, p*i + q*j), determinant one.
    fn combine_rows(&mut self, i: usize, j: usize, c: &[R::E; 4]) {
        let r = self.ring;
        let [s, t, p, q] = c;
        for mat in [&mut self.a, &mut self.u] {
            let width = mat[i].len();
            for col in 0..width {
                let x = &mat[i][col];
                let y = &mat[j][col];
                if r.is_zero(x) && r.is_zero(y) {
                    continue;
                }
                let nx = r.mul_add(s, x, t, y);
                let ny = r.mul_add(p, x, q, y);
                mat[i][col] = nx;
                mat[j][col] = ny;
            }
        }
        // ui <- ui * inverse; inverse of [[s,t],[p,q]] is [[q,-t],[-p,s]].
        let (nt, np) = (r.neg(t), r.neg(p));
        for row in &mut self.ui {
            let x = row[i].clone();
            let y = row[j].clone();
            row[i] = r.mul_add(&x, q, &y, &np);
            row[j] = r.mul_add(&x, &nt, &y, s);
        }
    }

    /// Columns (i, j) <- (s*i + t*j, p*i + q*j), determinant one.
    fn combine_cols(&mut self, i: usize, j: usize, c: &[R::E; 4]) {
        let r = self.ring;
        let [s, t, p, q] = c;
        for mat in [&mut self.a, &mut self.v] {
            for row in mat.iter_mut() {
                let x = &row[i];
                let y = &row[j];
                if r.is_zero(x) && r.is_zero(y) {
                    continue;
                }
                let nx = r.mul_add(s, x, t, y);
                let ny = r.mul_add(p, x, q, y);
                row[i] = nx;
                row[j] = ny;
            }
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &R::E) {
        let r = self.ring;
        let one = r.one();
        for mat in [&mut self.a, &mut self.u] {
            let width = mat[src].len();
            for col in 0..width {
                if r.is_zero(&mat[src][col]) {
                    continue;
                }
                let nv = r.mul_add(&one, &mat[dst][col], c, &mat[src][col]);
                mat[dst][col] = nv;
            }
        }
        let nc = r.neg(c);
        for row in &mut self.ui {
            if r.is_zero(&row[dst]) {
                continue;
            }
            row[src] = r.mul_add(&one, &row[src], &nc, &row[dst]);
        }
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &R::E) {
        let r = self.ring;
        let one = r.one();
        for mat in [&mut self.a, &mut self.v] {
            for row in mat.iter_mut() {
                if r.is_zero(&row[src]) {
                    continue;
                }
                row[dst] = r.mul_add(&one, &row[dst], c, &row[src]);
            }
        }
    }

    fn scale_row(&mut self, i: usize, c: &R::E, c_inv: &R::E) {
        let r = self.ring;
        let z = r.zero();
        for mat in [&mut self.a, &mut self.u] {
            for x in mat[i].iter_mut() {
                *x = r.mul_add(c, x, &z, &z);
            }
        }
        for row in &mut self.ui {
            row[i] = r.mul_add(c_inv, &row[i], &z, &z);
        }
    }

    fn run(&mut self) -> usize {
        let r = self.ring;
        let mut t = 0;
        while t < self.m.min(self.k) {
            let mut best: Option<(usize, usize)> = None;
            for i in t..self.m {
                for j in t..self.k {
                    let x = &self.a[i][j];
                    if r.is_zero(x) {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| r.smaller(x, &self.a[bi][bj])) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                for i in t + 1..self.m {
                    if r.is_zero(&self.a[i][t]) {
                        continue;
                    }
                    let p = self.a[t][t].clone();
                    let x = self.a[i][t].clone();
                    if r.divides(&p, &x) {
                        let q = r.neg(&r.quotient(&p, &x));
                        self.add_row(i, t, &q);
                    } else {
                        let c = r.combo(&p, &x);
                        self.combine_rows(t, i, &c);
                    }
                }
                for j in t + 1..self.k {
                    if r.is_zero(&self.a[t][j]) {
                        continue;
                    }
                    let p = self.a[t][t].clone();
                    let x = self.a[t][j].clone();
                    if r.divides(&p, &x) {
                        let q = r.neg(&r.quotient(&p, &x));
                        self.add_col(j, t, &q);
                    } else {
                        let c = r.combo(&p, &x);
                        self.combine_cols(t, j, &c);
                    }
                }
                if (t + 1..self.m).any(|i| !r.is_zero(&self.a[i][t])) {
                    continue;
                }
                let p = self.a[t][t].clone();
                let bad = (t + 1..self.m).find(|&i| {
                    (t + 1..self.k).any(|j| !r.divides(&p, &self.a[i][j]))
                });
                match bad {
                    Some(i) => {
                        let one = r.one();
                        self.add_row(t, i, &one);
                    }
                    None => break,
                }
            }
            let (c, ci) = r.normalizer(&self.a[t][t]);
            self.scale_row(t, &c, &ci);
            t += 1;
        }
        t
    }
}

fn run_generic<R: Euclid>(ring: &R, a: Vec<Vec<R::E>>, m: usize, k: usize) -> ([Vec<Vec<R::E>>; 4], usize) {
    let mut w = Work {
        ring,
        a,
        u: Work::<R>::identity(ring, m),
        ui: Work::<R>::identity(ring, m),
        v: Work::<R>::identity(ring, k),
        m,
        k,
    };
    let rank = w.run();
    ([w.u, w.ui, w.a, w.v], rank)
}

fn small_modulus(ring: &BaseRing) -> Option<i64> {
    let n = ring.modulus()?;
    let n = n.to_i64()?;
    (n < (1 << 31)).then_some(n)
}

fn to_rows<T>(m: &Matrix, f: impl Fn(&Int) -> T) -> Vec<Vec<T>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(&f).collect()).collect()
}

fn from_rows<T>(rows: usize, cols: usize, data: &[Vec<T>], f: impl Fn(&T) -> Int) -> Matrix {
    let mut out = Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            out[(i, j)] = f(&data[i][j]);
        }
    }
    out
}

/// Smith normal form `u * m * v = d` over the given ring.
///
/// Over Z the nonzero diagonal entries are positive; over Z/n they are the
/// proper divisors `gcd(d_i, n)` of `n`. In both cases `d_1 | d_2 | ...`.
pub fn smith_normal_form(m: &Matrix, ring: &BaseRing) -> Snf {
    let (rows, cols) = m.shape();
    if let Some(n) = small_modulus(ring) {
        let r = SmallMod(n);
        let a = to_rows(m, |x| x.mod_floor(&Int::from(n)).to_i64().expect("reduced entry fits"));
        let ([u, ui, d, v], rank) = run_generic(&r, a, rows, cols);
        let conv = |x: &i64| Int::from(*x);
        return Snf {
            u: from_rows(rows, rows, &u, conv),
            u_inv: from_rows(rows, rows, &ui, conv),
            d: from_rows(rows, cols, &d, conv),
            v: from_rows(cols, cols, &v, conv),
            rank,
        };
    }
    let r = BigRing(ring);
    let a = to_rows(m, |x| ring.reduce(x));
    let ([u, ui, d, v], rank) = run_generic(&r, a, rows, cols);
    let conv = |x: &Int| x.clone();
    Snf {
        u: from_rows(rows, rows, &u, conv),
        u_inv: from_rows(rows, rows, &ui, conv),
        d: from_rows(rows, cols, &d, conv),
        v: from_rows(cols, cols, &v, conv),
        rank,
    }
}

/// Check the defining properties of an SNF result; used by tests and audits.
pub fn verify_snf(m: &Matrix, ring: &BaseRing, snf: &Snf) -> Result<(), String> {
    let lhs = snf.u.mul(m).mul(&snf.v).reduced(ring);
    if lhs != snf.d.reduced(ring) {
        return Err("u*m*v != d".into());
    }
    let (r, c) = m.shape();
    if snf.u.mul(&snf.u_inv).reduced(ring) != Matrix::identity(r).reduced(ring) {
        return Err("u * u_inv != 1".into());
    }
    for i in 0..r {
        for j in 0..c {
            if i != j && !snf.d[(i, j)].is_zero() {
                return Err(format!("off-diagonal entry at ({i},{j})"));
            }
        }
    }
    let diag = snf.diagonal();
    for w in diag.windows(2) {
        if !ring.divides(&w[0], &w[1]) {
            return Err(format!("divisibility chain broken: {} !| {}", w[0], w[1]));
        }
    }
    for i in snf.rank..r.min(c) {
        if !snf.d[(i, i)].is_zero() {
            return Err("nonzero entry beyond rank".into());
        }
    }
    match ring {
        BaseRing::Integers => {
            if diag.iter().any(|d| !d.is_positive()) {
                return Err("nonpositive invariant factor".into());
            }
            if !snf.u.determinant().abs().is_one() || !snf.v.determinant().abs().is_one() {
                return Err("transform not unimodular".into());
            }
        }
        BaseRing::IntegersMod(n) => {
            if !ring.is_unit(&snf.u.determinant()) || !ring.is_unit(&snf.v.determinant()) {
                return Err("transform not invertible mod n".into());
            }
            if diag.iter().any(|d| (n % d) != Int::zero()) {
                return Err("diagonal entry is not a divisor of n".into());
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diag_2_3_becomes_1_6() {
        let m = Matrix::from_i64(2, 2, &[2, 0, 0, 3]);
        let s = smith_normal_form(&m, &BaseRing::Integers);
        verify_snf(&m, &BaseRing::Integers, &s).unwrap();
        assert_eq!(s.d, Matrix::from_i64(2, 2, &[1, 0, 0, 6]));
    }

    #[test]
    fn zero_and_identity() {
        let z = Matrix::zeros(2, 3);
        let s = smith_normal_form(&z, &BaseRing::Integers);
        assert_eq!(s.d, z);
        assert_eq!(s.u, Matrix::identity(2));
        assert_eq!(s.v, Matrix::identity(3));
        let id = Matrix::identity(4);
        let s = smith_normal_form(&id, &BaseRing::zn(6));
        assert_eq!(s.d, id);
    }

    #[test]
    fn mod_n_normalizes_to_divisors() {
        let ring = BaseRing::zn(12);
        let m = Matrix::from_i64(2, 2, &[10, 4, 6, 9]);
        let s = smith_normal_form(&m, &ring);
        verify_snf(&m, &ring, &s).unwrap();
        for d in s.diagonal() {
            assert!((Int::from(12) % d).is_zero());
        }
    }

    #[test]
    fn big_modulus_path() {
        let n: Int = "340282366920938463463374607431768211457".parse().unwrap();
        let ring = BaseRing::IntegersMod(n);
        let m = Matrix::from_i64(2, 3, &[4, 6, 8, 3, 5, 7]);
        let s = smith_normal_form(&m, &ring);
        verify_snf(&m, &ring, &s).unwrap();
    }
}
