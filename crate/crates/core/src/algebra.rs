//! Finite-dimensional unital algebras given by structure constants.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{axpy, is_zero_vec, sub, unit_vec, zero_vec, Echelon, Matrix, Vector};
use crate::scalars::quadext::EtaleQuadratic;
use crate::scalars::{Elem, Field};

/// Sparse coordinate vector of a basis product.
pub type Sparse = Vec<(u32, Elem)>;

/// How much of the axioms to check when building an algebra.
#[derive(Clone, Debug)]
pub enum Verify {
    /// All basis triples.
    Full,
    /// (xy)g = x(yg) for basis x, y and the given generators only. The set of
    /// z with (xy)z = x(yz) for all x, y is a subalgebra, so this suffices
    /// when the generators generate.
    Generators(Vec<Vector>),
    /// Built from verified pieces by a constructor that preserves the axioms.
    Trusted,
}

#[derive(Clone, Debug)]
pub struct StructureAlgebra {
    field: Field,
    dim: usize,
    table: Vec<Sparse>,
    unit: Vector,
    trd: Option<Vector>,
    degree: Option<usize>,
    labels: Vec<String>,
    provenance: String,
}

/// Full triple check is used up to this dimension by derived constructors.
const FULL_CHECK_LIMIT: usize = 64;

impl StructureAlgebra {
    /// Builds an algebra from sparse products `table[i * d + j] = b_i b_j`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_table(
        field: &Field,
        dim: usize,
        table: Vec<Sparse>,
        unit: Vector,
        trd: Option<(Vector, usize)>,
        labels: Vec<String>,
        provenance: String,
        verify: Verify,
    ) -> Result<Self> {
        if table.len() != dim * dim {
            return Err(Error::Dimension { expected: dim * dim, got: table.len() });
        }
        if unit.len() != dim {
            return Err(Error::Dimension { expected: dim, got: unit.len() });
        }
        let (trd, degree) = match trd {
            Some((t, n)) => (Some(t), Some(n)),
            None => (None, None),
        };
        let labels = if labels.len() == dim { labels } else { (0..dim).map(|i| alloc::format!("b{i}")).collect() };
        let a = StructureAlgebra { field: field.clone(), dim, table, unit, trd, degree, labels, provenance };
        a.verify_unit()?;
        match verify {
            Verify::Full => a.verify_associative_full()?,
            Verify::Generators(g) => a.verify_associative_generators(&g)?,
            Verify::Trusted => {}
        }
        if a.trd.is_some() {
            a.verify_trace()?;
        }
        Ok(a)
    }

    /// Builds from dense structure constants `c[i][j]` = coordinates of b_i b_j,
    /// checking associativity on every triple.
    pub fn raw(field: &Field, constants: Vec<Vec<Vector>>, unit: Vector) -> Result<Self> {
        let dim = constants.len();
        let mut table = Vec::with_capacity(dim * dim);
        for row in &constants {
            if row.len() != dim {
                return Err(Error::Dimension { expected: dim, got: row.len() });
            }
            for v in row {
                if v.len() != dim {
                    return Err(Error::Dimension { expected: dim, got: v.len() });
                }
                table.push(to_sparse(v));
            }
        }
        Self::from_table(field, dim, table, unit, None, Vec::new(), "raw".into(), Verify::Full)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn provenance(&self) -> &str {
        &self.provenance
    }
    pub fn degree(&self) -> Option<usize> {
        self.degree
    }
    pub fn trd(&self) -> Option<&Vector> {
        self.trd.as_ref()
    }

    pub fn with_provenance(mut self, p: String) -> Self {
        self.provenance = p;
        self
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        if labels.len() == self.dim {
            self.labels = labels;
        }
        self
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &Sparse {
        &self.table[i * self.dim + j]
    }

    pub fn one(&self) -> Vector {
        self.unit.clone()
    }

    pub fn zero(&self) -> Vector {
        zero_vec(&self.field, self.dim)
    }

    pub fn basis(&self, i: usize) -> Vector {
        unit_vec(&self.field, self.dim, i)
    }

    pub fn scalar(&self, c: &Elem) -> Vector {
        self.unit.iter().map(|u| u * c).collect()
    }

    pub fn mul(&self, x: &[Elem], y: &[Elem]) -> Vector {
        let mut out = self.zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (k, v) in &self.table[i * self.dim + j] {
                    let k = *k as usize;
                    out[k] = &out[k] + &(&c * v);
                }
            }
        }
        out
    }

    pub fn mul_many(&self, xs: &[&Vector]) -> Vector {
        let mut acc = self.one();
        for x in xs {
            acc = self.mul(&acc, x);
        }
        acc
    }

    pub fn commutator(&self, x: &[Elem], y: &[Elem]) -> Vector {
        sub(&self.mul(x, y), &self.mul(y, x))
    }

    /// Matrix of y -> x y.
    pub fn left_matrix(&self, x: &[Elem]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim).map(|j| self.mul(x, &self.basis(j))).collect();
        Matrix::from_cols(&self.field, self.dim, &cols).unwrap()
    }

    /// Matrix of y -> y x.
    pub fn right_matrix(&self, x: &[Elem]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim).map(|j| self.mul(&self.basis(j), x)).collect();
        Matrix::from_cols(&self.field, self.dim, &cols).unwrap()
    }

    pub fn inverse(&self, x: &[Elem]) -> Option<Vector> {
        self.left_matrix(x).solve(&self.unit).ok().flatten().filter(|y| self.mul(y, x) == self.unit)
    }

    pub fn is_invertible(&self, x: &[Elem]) -> bool {
        self.left_matrix(x).rank() == self.dim
    }

    fn verify_unit(&self) -> Result<()> {
        for i in 0..self.dim {
            let b = self.basis(i);
            if self.mul(&self.unit, &b) != b || self.mul(&b, &self.unit) != b {
                return Err(Error::Axiom(alloc::format!("unit fails on basis element {}", self.labels[i])));
            }
        }
        Ok(())
    }

    pub fn verify_associative_full(&self) -> Result<()> {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                let ij = sparse_to_dense(&self.field, d, &self.table[i * d + j]);
                for k in 0..d {
                    let left = self.mul(&ij, &self.basis(k));
                    let jk = sparse_to_dense(&self.field, d, &self.table[j * d + k]);
                    let right = self.mul(&self.basis(i), &jk);
                    if left != right {
                        return Err(Error::Axiom(alloc::format!(
                            "associativity fails on ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn verify_associative_generators(&self, gens: &[Vector]) -> Result<()> {
        let d = self.dim;
        let span = self.span_of_products(gens);
        if span < d {
            return Err(Error::Axiom(alloc::format!("generators span only {span} of {d} dimensions")));
        }
        for i in 0..d {
            for j in 0..d {
                let ij = sparse_to_dense(&self.field, d, &self.table[i * d + j]);
                for (gi, g) in gens.iter().enumerate() {
                    let left = self.mul(&ij, g);
                    let right = self.mul(&self.basis(i), &self.mul(&self.basis(j), g));
                    if left != right {
                        return Err(Error::Axiom(alloc::format!(
                            "associativity fails on ({}, {}, generator {gi})",
                            self.labels[i], self.labels[j]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Dimension of the subalgebra generated by the given elements.
    pub fn span_of_products(&self, gens: &[Vector]) -> usize {
        self.generated_subalgebra(gens).len()
    }

    /// Basis of the unital subalgebra generated by the given elements.
    pub fn generated_subalgebra(&self, gens: &[Vector]) -> Vec<Vector> {
        let mut ech = Echelon::new(&self.field, self.dim);
        let mut basis = vec![];
        let mut frontier = vec![self.one()];
        ech.insert(&self.one());
        basis.push(self.one());
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = self.mul(&x, g);
                if ech.insert(&y) {
                    basis.push(y.clone());
                    frontier.push(y);
                }
            }
        }
        basis
    }

    fn verify_trace(&self) -> Result<()> {
        let t = self.trd.as_ref().unwrap();
        let ev = |v: &Sparse| v.iter().fold(self.field.zero(), |acc, (k, c)| &acc + &(c * &t[*k as usize]));
        let d = self.dim;
        for i in 0..d {
            for j in i + 1..d {
                if ev(&self.table[i * d + j]) != ev(&self.table[j * d + i]) {
                    return Err(Error::Axiom(alloc::format!(
                        "Trd(xy) != Trd(yx) on ({}, {})",
                        self.labels[i], self.labels[j]
                    )));
                }
            }
        }
        let one = crate::linalg::dot(&self.field, &self.unit, t);
        let deg = self.field.from_i64(self.degree.unwrap_or(0) as i64);
        if one != deg {
            return Err(Error::Axiom(alloc::format!("Trd(1) = {one}, declared degree {deg}")));
        }
        Ok(())
    }

    /// Reduced trace of x, when the constructor attached one.
    pub fn reduced_trace(&self, x: &[Elem]) -> Result<Elem> {
        let t = self.trd.as_ref().ok_or_else(|| {
            Error::Unsupported("no reduced trace attached; construct via provided constructors".into())
        })?;
        Ok(crate::linalg::dot(&self.field, x, t))
    }

    /// Basis of the center, computed from the commutators with `gens`
    /// (all basis vectors when `gens` is empty).
    pub fn center(&self, gens: &[Vector]) -> Vec<Vector> {
        let all: Vec<Vector>;
        let gens = if gens.is_empty() {
            all = (0..self.dim).map(|i| self.basis(i)).collect();
            &all
        } else {
            gens
        };
        self.centralizer_unchecked(gens)
    }

    fn centralizer_unchecked(&self, s: &[Vector]) -> Vec<Vector> {
        let d = self.dim;
        let mut rows: Vec<Vector> = Vec::new();
        for g in s {
            let m = self.right_matrix(g).sub(&self.left_matrix(g));
            for r in 0..d {
                let row = m.row(r);
                if !is_zero_vec(row) {
                    rows.push(row.to_vec());
                }
            }
        }
        if rows.is_empty() {
            return (0..d).map(|i| self.basis(i)).collect();
        }
        Matrix::from_rows(&self.field, rows).unwrap().kernel()
    }

    /// C_A(S) for a subalgebra S given by a spanning set.
    pub fn centralizer(&self, s: &[Vector]) -> Result<Vec<Vector>> {
        let mut ech = Echelon::new(&self.field, self.dim);
        for x in s {
            ech.insert(x);
        }
        for x in s {
            for y in s {
                if !ech.contains(&self.mul(x, y)) {
                    return Err(crate::error::invalid!("the given subspace is not closed under multiplication"));
                }
            }
        }
        Ok(self.centralizer_unchecked(s))
    }

    /// Center together with an idempotent when it is two-dimensional.
    pub fn center_and_idempotents(&self, gens: &[Vector]) -> CenterReport {
        let basis = self.center(gens);
        let mut report = CenterReport { basis: basis.clone(), idempotent: None, min_poly: None };
        if basis.len() != 2 {
            return report;
        }
        // w: a center element independent of 1
        let mut ech = Echelon::new(&self.field, self.dim);
        ech.insert(&self.unit);
        let w = basis.iter().find(|b| !ech.contains(b)).cloned().unwrap();
        let w2 = self.mul(&w, &w);
        // w^2 = alpha w + beta
        let m = Matrix::from_cols(&self.field, self.dim, &[w.clone(), self.unit.clone()]).unwrap();
        let Ok(Some(c)) = m.solve(&w2) else { return report };
        let (alpha, beta) = (c[0].clone(), c[1].clone());
        // roots of X^2 - alpha X - beta
        let roots = self.field.quadratic_roots(&(-&alpha), &(-&beta));
        if roots.len() == 2 {
            let (r1, r2) = (&roots[0], &roots[1]);
            let inv = (r1 - r2).inv().unwrap();
            let mut e = w.clone();
            axpy(&mut e, &(-r2), &self.unit);
            report.idempotent = Some(e.iter().map(|x| x * &inv).collect());
        }
        report.min_poly = Some((alpha, beta));
        report
    }
}

/// Center of an algebra, with splitting data in the two-dimensional case.
#[derive(Clone, Debug)]
pub struct CenterReport {
    pub basis: Vec<Vector>,
    /// Nontrivial idempotent of a two-dimensional center, when it splits.
    pub idempotent: Option<Vector>,
    /// (alpha, beta) with w^2 = alpha w + beta for the chosen generator w.
    pub min_poly: Option<(Elem, Elem)>,
}

pub fn to_sparse(v: &[Elem]) -> Sparse {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i as u32, c.clone())).collect()
}

pub fn sparse_to_dense(field: &Field, dim: usize, s: &Sparse) -> Vector {
    let mut v = zero_vec(field, dim);
    for (k, c) in s {
        v[*k as usize] = c.clone();
    }
    v
}

/// The base field as a one-dimensional algebra.
pub fn base_algebra(field: &Field) -> StructureAlgebra {
    StructureAlgebra::from_table(
        field,
        1,
        vec![vec![(0, field.one())]],
        vec![field.one()],
        Some((vec![field.one()], 1)),
        vec!["1".into()],
        alloc::format!("{field}"),
        Verify::Full,
    )
    .unwrap()
}

/// M_n(F) with basis E_rs at index r n + s.
pub fn matrix_algebra_over_field(field: &Field, n: usize) -> StructureAlgebra {
    matrix_algebra(&base_algebra(field), n).unwrap().with_provenance(alloc::format!("M{n}({field})"))
}

/// M_n(A) with basis E_rs (x) a_k at index (r n + s) dim A + k.
pub fn matrix_algebra(a: &StructureAlgebra, n: usize) -> Result<StructureAlgebra> {
    if n == 0 {
        return Err(crate::error::invalid!("matrix size must be positive"));
    }
    let m = matrix_units(&a.field, n);
    let t = tensor(&m, a)?;
    Ok(t.with_provenance(alloc::format!("M{n}({})", a.provenance)))
}

fn matrix_units(field: &Field, n: usize) -> StructureAlgebra {
    let d = n * n;
    let mut table = vec![Vec::new(); d * d];
    for r in 0..n {
        for s in 0..n {
            for u in 0..n {
                // E_rs E_su = E_ru
                table[(r * n + s) * d + (s * n + u)] = vec![((r * n + u) as u32, field.one())];
            }
        }
    }
    let mut unit = zero_vec(field, d);
    let mut trd = zero_vec(field, d);
    for r in 0..n {
        unit[r * n + r] = field.one();
        trd[r * n + r] = field.one();
    }
    let labels = (0..d).map(|i| alloc::format!("E{}{}", i / n + 1, i % n + 1)).collect();
    let verify = if d <= FULL_CHECK_LIMIT { Verify::Full } else { Verify::Trusted };
    StructureAlgebra::from_table(field, d, table, unit, Some((trd, n)), labels, alloc::format!("M{n}({field})"), verify)
        .unwrap()
}

/// A (x) B with basis a_i (x) b_j at index i dim B + j.
pub fn tensor(a: &StructureAlgebra, b: &StructureAlgebra) -> Result<StructureAlgebra> {
    if a.field != b.field {
        return Err(Error::FieldMismatch("tensor product over different fields".into()));
    }
    let f = &a.field;
    let (da, db) = (a.dim, b.dim);
    let d = da * db;
    let mut table = Vec::with_capacity(d * d);
    for i1 in 0..da {
        for j1 in 0..db {
            for i2 in 0..da {
                for j2 in 0..db {
                    let pa = &a.table[i1 * da + i2];
                    let pb = &b.table[j1 * db + j2];
                    let mut out: Sparse = Vec::with_capacity(pa.len() * pb.len());
                    for (ka, ca) in pa {
                        for (kb, cb) in pb {
                            out.push((ka * db as u32 + kb, ca * cb));
                        }
                    }
                    table.push(out);
                }
            }
        }
    }
    let mut unit = zero_vec(f, d);
    for (i, ua) in a.unit.iter().enumerate() {
        for (j, ub) in b.unit.iter().enumerate() {
            unit[i * db + j] = ua * ub;
        }
    }
    let trd = match (&a.trd, &b.trd, a.degree, b.degree) {
        (Some(ta), Some(tb), Some(na), Some(nb)) => {
            let mut t = zero_vec(f, d);
            for i in 0..da {
                for j in 0..db {
                    t[i * db + j] = &ta[i] * &tb[j];
                }
            }
            Some((t, na * nb))
        }
        _ => None,
    };
    let mut labels = Vec::with_capacity(d);
    for la in &a.labels {
        for lb in &b.labels {
            labels.push(alloc::format!("{la}*{lb}"));
        }
    }
    let verify = if d <= FULL_CHECK_LIMIT { Verify::Full } else { Verify::Trusted };
    StructureAlgebra::from_table(f, d, table, unit, trd, labels, alloc::format!("({})x({})", a.provenance, b.provenance), verify)
}

/// A^op: same space, reversed multiplication.
pub fn opposite(a: &StructureAlgebra) -> StructureAlgebra {
    let d = a.dim;
    let mut table = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            table.push(a.table[j * d + i].clone());
        }
    }
    let mut out = a.clone();
    out.table = table;
    out.provenance = alloc::format!("({})^op", a.provenance);
    out
}

/// A x B with basis (a_i, 0) then (0, b_j).
pub fn product(a: &StructureAlgebra, b: &StructureAlgebra) -> Result<StructureAlgebra> {
    if a.field != b.field {
        return Err(Error::FieldMismatch("product over different fields".into()));
    }
    let (da, db) = (a.dim, b.dim);
    let d = da + db;
    let mut table = vec![Vec::new(); d * d];
    for i in 0..da {
        for j in 0..da {
            table[i * d + j] = a.table[i * da + j].clone();
        }
    }
    for i in 0..db {
        for j in 0..db {
            table[(da + i) * d + da + j] =
                b.table[i * db + j].iter().map(|(k, c)| (k + da as u32, c.clone())).collect();
        }
    }
    let mut unit = a.unit.clone();
    unit.extend(b.unit.iter().cloned());
    let labels = a.labels.iter().map(|l| alloc::format!("({l},0)")).chain(b.labels.iter().map(|l| alloc::format!("(0,{l})"))).collect();
    let verify = if d <= FULL_CHECK_LIMIT { Verify::Full } else { Verify::Trusted };
    StructureAlgebra::from_table(&a.field, d, table, unit, None, labels, alloc::format!("({})x({})", a.provenance, b.provenance), verify)
}

/// Quaternion algebra presented as K + K j with K = F[i]/(i^2 = t i + a),
/// j^2 = b and j r = conj(r) j. In characteristic 2 this is [a, b): t = 1,
/// so i^2 + i = a and i j = j (i + 1); otherwise t = 0 and i^2 = a, ij = -ji.
/// Basis 1, i, j, ij.
pub fn quaternion(field: &Field, a: &Elem, b: &Elem) -> Result<StructureAlgebra> {
    if b.is_zero() || (!field.is_char_two() && a.is_zero()) {
        return Err(crate::error::invalid!("quaternion symbol entries must be nonzero"));
    }
    let t = if field.is_char_two() { field.one() } else { field.zero() };
    let q = Quat { t: t.clone(), n: a.clone(), b: b.clone() };
    let mut table = Vec::with_capacity(16);
    for x in 0..4 {
        for y in 0..4 {
            let v = q.mul(&q.basis(field, x), &q.basis(field, y));
            table.push(to_sparse(&v));
        }
    }
    let two = field.from_i64(2);
    let trd = vec![two, t, field.zero(), field.zero()];
    let labels = vec!["1".into(), "i".into(), "j".into(), "ij".into()];
    let prov = if field.is_char_two() { alloc::format!("[{a},{b})") } else { alloc::format!("({a},{b})") };
    StructureAlgebra::from_table(field, 4, table, unit_vec(field, 4, 0), Some((trd, 2)), labels, prov, Verify::Full)
}

/// Canonical involution gamma of a quaternion algebra built by [`quaternion`].
pub fn quaternion_conjugation(field: &Field) -> Matrix {
    let t = if field.is_char_two() { field.one() } else { field.zero() };
    // gamma(1) = 1, gamma(i) = t - i, gamma(j) = -j, gamma(ij) = -ij
    let mut m = Matrix::zeros(field, 4, 4);
    m.set(0, 0, field.one());
    m.set(0, 1, t);
    m.set(1, 1, field.from_i64(-1));
    m.set(2, 2, field.from_i64(-1));
    m.set(3, 3, field.from_i64(-1));
    m
}

struct Quat {
    t: Elem,
    n: Elem,
    b: Elem,
}

impl Quat {
    fn basis(&self, f: &Field, k: usize) -> Vector {
        unit_vec(f, 4, k)
    }

    // K elements as (x0, x1) meaning x0 + x1 i
    fn kmul(&self, p: (&Elem, &Elem), r: (&Elem, &Elem)) -> (Elem, Elem) {
        // i^2 = t i + n
        let x1y1 = p.1 * r.1;
        (p.0 * r.0 + &x1y1 * &self.n, p.0 * r.1 + p.1 * r.0 + &x1y1 * &self.t)
    }

    fn kconj(&self, p: (&Elem, &Elem)) -> (Elem, Elem) {
        (p.0 + &(p.1 * &self.t), -p.1)
    }

    fn mul(&self, x: &[Elem], y: &[Elem]) -> Vector {
        let (p, q) = ((&x[0], &x[1]), (&x[2], &x[3]));
        let (r, s) = ((&y[0], &y[1]), (&y[2], &y[3]));
        let sb = self.kconj(s);
        let rb = self.kconj(r);
        let pr = self.kmul(p, r);
        let qsb = self.kmul(q, (&sb.0, &sb.1));
        let ps = self.kmul(p, s);
        let qrb = self.kmul(q, (&rb.0, &rb.1));
        vec![pr.0 + &qsb.0 * &self.b, pr.1 + &qsb.1 * &self.b, ps.0 + qrb.0, ps.1 + qrb.1]
    }
}

/// Quadratic étale algebra F[X]/(X^2 - t X - n) with basis 1, X.
pub fn etale(e: &EtaleQuadratic) -> StructureAlgebra {
    let f = &e.base;
    let (t, n) = e.min_poly();
    let table = vec![
        vec![(0, f.one())],
        vec![(1, f.one())],
        vec![(1, f.one())],
        to_sparse(&[n, t]),
    ];
    StructureAlgebra::from_table(f, 2, table, unit_vec(f, 2, 0), None, vec!["1".into(), "X".into()], e.describe(), Verify::Full)
        .unwrap()
}

/// The nontrivial automorphism of an étale quadratic algebra: X -> t - X.
pub fn etale_conjugation(e: &EtaleQuadratic) -> Matrix {
    let f = &e.base;
    let (t, _) = e.min_poly();
    let mut m = Matrix::zeros(f, 2, 2);
    m.set(0, 0, f.one());
    m.set(0, 1, t);
    m.set(1, 1, f.from_i64(-1));
    m
}

// ---------------------------------------------------------------------------
// Involutions

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvolutionKind {
    First,
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvolutionType {
    Orthogonal,
    Symplectic,
    Unitary,
}

impl InvolutionType {
    /// +1, -1, or 0 for unitary.
    pub fn sign(self) -> i8 {
        match self {
            InvolutionType::Orthogonal => 1,
            InvolutionType::Symplectic => -1,
            InvolutionType::Unitary => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            InvolutionType::Orthogonal => "orthogonal",
            InvolutionType::Symplectic => "symplectic",
            InvolutionType::Unitary => "unitary",
        }
    }
}

#[derive(Clone, Debug)]
pub struct AlgebraWithInvolution {
    pub algebra: Arc<StructureAlgebra>,
    /// Matrix of sigma on coordinate columns.
    pub sigma: Matrix,
    pub kind: InvolutionKind,
    pub center: Vec<Vector>,
    pub sym: Vec<Vector>,
    pub skew: Vec<Vector>,
    pub symd: Vec<Vector>,
    pub alt: Vec<Vector>,
}

/// Column space basis of a matrix.
pub fn image_basis(m: &Matrix) -> Vec<Vector> {
    let (r, piv) = m.transpose().rref();
    (0..piv.len()).map(|i| r.row(i).to_vec()).collect()
}

fn check_involution(a: &StructureAlgebra, sigma: &Matrix, gens: Option<&[Vector]>) -> Result<()> {
    let d = a.dim;
    if sigma.rows() != d || sigma.cols() != d {
        return Err(Error::Dimension { expected: d, got: sigma.rows() });
    }
    if sigma.mul(sigma)? != Matrix::identity(&a.field, d) {
        return Err(Error::NotInvolution("sigma^2 != id".into()));
    }
    if sigma.mul_vec(&a.unit)? != a.unit {
        return Err(Error::NotInvolution("sigma(1) != 1".into()));
    }
    let images: Vec<Vector> = (0..d).map(|i| sigma.col(i)).collect();
    let second: Vec<(usize, Vector)> = match gens {
        Some(g) => g.iter().cloned().enumerate().collect(),
        None => (0..d).map(|i| (i, a.basis(i))).collect(),
    };
    for i in 0..d {
        for (j, y) in &second {
            let xy = a.mul(&a.basis(i), y);
            let lhs = sigma.mul_vec(&xy)?;
            let sy = sigma.mul_vec(y)?;
            let rhs = a.mul(&sy, &images[i]);
            if lhs != rhs {
                return Err(Error::NotInvolution(alloc::format!(
                    "sigma(xy) != sigma(y) sigma(x) at ({}, {})",
                    a.labels[i],
                    if gens.is_some() { alloc::format!("generator {j}") } else { a.labels[*j].clone() }
                )));
            }
        }
    }
    Ok(())
}

/// Attaches sigma to A after checking the involution axioms on all basis pairs.
pub fn involution_attach(
    a: Arc<StructureAlgebra>,
    sigma: Matrix,
    expected: Option<InvolutionKind>,
) -> Result<AlgebraWithInvolution> {
    check_involution(&a, &sigma, None)?;
    finish_attach(a, sigma, expected, &[])
}

/// As [`involution_attach`], checking anti-multiplicativity against a
/// generating set only (sigma(x g) = sigma(g) sigma(x) for basis x and
/// generators g, which propagates to all products by induction on length).
pub fn involution_attach_generated(
    a: Arc<StructureAlgebra>,
    sigma: Matrix,
    gens: &[Vector],
    expected: Option<InvolutionKind>,
) -> Result<AlgebraWithInvolution> {
    if a.span_of_products(gens) < a.dim {
        return Err(Error::Axiom("generators do not generate".into()));
    }
    check_involution(&a, &sigma, Some(gens))?;
    finish_attach(a, sigma, expected, gens)
}

fn finish_attach(
    a: Arc<StructureAlgebra>,
    sigma: Matrix,
    expected: Option<InvolutionKind>,
    gens: &[Vector],
) -> Result<AlgebraWithInvolution> {
    let f = a.field.clone();
    let d = a.dim;
    let id = Matrix::identity(&f, d);
    let center = a.center(gens);
    let mut kind = InvolutionKind::First;
    for z in &center {
        if sigma.mul_vec(z)? != *z {
            kind = InvolutionKind::Second;
        }
    }
    if let Some(k) = expected {
        if k != kind {
            return Err(Error::NotInvolution(alloc::format!("expected {k:?} kind, found {kind:?}")));
        }
    }
    let plus = id.add(&sigma);
    let minus = id.sub(&sigma);
    let sym = minus.kernel();
    let skew = plus.kernel();
    let symd = image_basis(&plus);
    let alt = image_basis(&minus);
    Ok(AlgebraWithInvolution { algebra: a, sigma, kind, center, sym, skew, symd, alt })
}

impl AlgebraWithInvolution {
    pub fn field(&self) -> &Field {
        &self.algebra.field
    }

    pub fn apply(&self, x: &[Elem]) -> Vector {
        self.sigma.mul_vec(x).unwrap()
    }

    /// Whether x lies in Alt(A, sigma).
    pub fn in_alt(&self, x: &[Elem]) -> bool {
        let mut e = Echelon::new(self.field(), self.algebra.dim);
        for v in &self.alt {
            e.insert(v);
        }
        e.contains(x)
    }
}

/// Orthogonal, symplectic or unitary, from the dimension of Sym (and, in
/// characteristic 2, from whether 1 is alternating).
pub fn involution_type(awi: &AlgebraWithInvolution) -> Result<InvolutionType> {
    if awi.kind == InvolutionKind::Second {
        return Ok(InvolutionType::Unitary);
    }
    let z = awi.center.len();
    let d = awi.algebra.dim;
    if z == 0 || d % z != 0 {
        return Err(Error::Axiom("not central simple or sigma invalid".into()));
    }
    let m2 = d / z;
    let m = isqrt(m2);
    if m * m != m2 {
        return Err(Error::Axiom("not central simple or sigma invalid".into()));
    }
    if awi.field().is_char_two() {
        return Ok(if awi.in_alt(&awi.algebra.unit) { InvolutionType::Symplectic } else { InvolutionType::Orthogonal });
    }
    let s = awi.sym.len();
    if s == z * m * (m + 1) / 2 {
        Ok(InvolutionType::Orthogonal)
    } else if s == z * m * (m - 1) / 2 {
        Ok(InvolutionType::Symplectic)
    } else {
        Err(Error::Axiom("not central simple or sigma invalid".into()))
    }
}

fn isqrt(n: usize) -> usize {
    let mut r = 0;
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Result of checking a candidate homomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomVerdict {
    Certificate { pairs_checked: usize },
    Counterexample { detail: String },
}

impl HomVerdict {
    pub fn ok(&self) -> bool {
        matches!(self, HomVerdict::Certificate { .. })
    }
}

/// Checks f(1) = 1, f(b_i b_j) = f(b_i) f(b_j) on all basis pairs, and
/// tau f = f sigma when involutions are given. `f` has one column per basis
/// element of A.
pub fn hom_verify(
    f: &Matrix,
    a: &StructureAlgebra,
    b: &StructureAlgebra,
    invs: Option<(&Matrix, &Matrix)>,
) -> HomVerdict {
    if f.cols() != a.dim || f.rows() != b.dim {
        return HomVerdict::Counterexample {
            detail: alloc::format!("map is {}x{}, expected {}x{}", f.rows(), f.cols(), b.dim, a.dim),
        };
    }
    if f.mul_vec(&a.unit).unwrap() != b.unit {
        return HomVerdict::Counterexample { detail: "f(1) != 1".into() };
    }
    let imgs: Vec<Vector> = (0..a.dim).map(|i| f.col(i)).collect();
    let mut pairs = 0;
    for i in 0..a.dim {
        for j in 0..a.dim {
            let lhs = f.mul_vec(&sparse_to_dense(&a.field, a.dim, &a.table[i * a.dim + j])).unwrap();
            let rhs = b.mul(&imgs[i], &imgs[j]);
            pairs += 1;
            if lhs != rhs {
                return HomVerdict::Counterexample {
                    detail: alloc::format!("f(xy) != f(x)f(y) at ({}, {})", a.labels[i], a.labels[j]),
                };
            }
        }
    }
    if let Some((sa, tb)) = invs {
        for i in 0..a.dim {
            let lhs = tb.mul_vec(&imgs[i]).unwrap();
            let rhs = f.mul_vec(&sa.col(i)).unwrap();
            if lhs != rhs {
                return HomVerdict::Counterexample {
                    detail: alloc::format!("tau f != f sigma at {}", a.labels[i]),
                };
            }
        }
    }
    HomVerdict::Certificate { pairs_checked: pairs }
}

/// A linear map given densely or as a Kronecker product of factor maps
/// (in the basis order of [`tensor`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearMap {
    Dense(Matrix),
    Kron(Vec<Matrix>),
}

impl LinearMap {
    pub fn dim(&self) -> usize {
        match self {
            LinearMap::Dense(m) => m.cols(),
            LinearMap::Kron(fs) => fs.iter().map(|m| m.cols()).product(),
        }
    }

    pub fn apply(&self, x: &[Elem]) -> Vector {
        match self {
            LinearMap::Dense(m) => m.mul_vec(x).unwrap(),
            LinearMap::Kron(fs) => {
                let f = fs[0].field().clone();
                let dims: Vec<usize> = fs.iter().map(|m| m.cols()).collect();
                let mut out = zero_vec(&f, x.len());
                for (idx, c) in x.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    // split idx into factor indices, last factor fastest
                    let mut rest = idx;
                    let mut digits = vec![0usize; dims.len()];
                    for k in (0..dims.len()).rev() {
                        digits[k] = rest % dims[k];
                        rest /= dims[k];
                    }
                    let mut acc: Vec<(usize, Elem)> = vec![(0, c.clone())];
                    for (k, m) in fs.iter().enumerate() {
                        let mut next = Vec::new();
                        for (pos, v) in &acc {
                            for r in 0..m.rows() {
                                let e = m.get(r, digits[k]);
                                if !e.is_zero() {
                                    next.push((pos * m.rows() + r, v * e));
                                }
                            }
                        }
                        acc = next;
                    }
                    for (pos, v) in acc {
                        out[pos] = &out[pos] + &v;
                    }
                }
                out
            }
        }
    }

    pub fn to_dense(&self) -> Matrix {
        match self {
            LinearMap::Dense(m) => m.clone(),
            LinearMap::Kron(fs) => fs[1..].iter().fold(fs[0].clone(), |acc, m| kron(&acc, m)),
        }
    }
}

/// [`hom_verify`] with the involutions given as [`LinearMap`]s.
pub fn hom_verify_maps(
    f: &Matrix,
    a: &StructureAlgebra,
    b: &StructureAlgebra,
    invs: Option<(&LinearMap, &LinearMap)>,
) -> HomVerdict {
    let v = hom_verify(f, a, b, None);
    let HomVerdict::Certificate { pairs_checked } = v else { return v };
    if let Some((sa, tb)) = invs {
        for i in 0..a.dim {
            let lhs = tb.apply(&f.col(i));
            let rhs = f.mul_vec(&sa.apply(&a.basis(i))).unwrap();
            if lhs != rhs {
                return HomVerdict::Counterexample { detail: alloc::format!("tau f != f sigma at {}", a.labels[i]) };
            }
        }
    }
    HomVerdict::Certificate { pairs_checked }
}

/// Matrix of a linear map given by the images of the basis.
pub fn map_from_images(field: &Field, target_dim: usize, images: &[Vector]) -> Matrix {
    Matrix::from_cols(field, target_dim, images).unwrap()
}

/// Tensor product of two linear maps (matching [`tensor`]'s basis order).
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let f = a.field();
    let mut out = Matrix::zeros(f, a.rows() * b.rows(), a.cols() * b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    let y = b.get(k, l);
                    if !y.is_zero() {
                        out.set(i * b.rows() + k, j * b.cols() + l, x * y);
                    }
                }
            }
        }
    }
    out
}

/// Transpose involution on M_n(F) in the basis of [`matrix_algebra_over_field`].
pub fn transpose_involution(field: &Field, n: usize) -> Matrix {
    let d = n * n;
    let mut m = Matrix::zeros(field, d, d);
    for r in 0..n {
        for s in 0..n {
            m.set(s * n + r, r * n + s, field.one());
        }
    }
    m
}

/// Inner automorphism x -> u x u^{-1} composed with sigma, as a matrix.
pub fn twisted_involution(a: &StructureAlgebra, sigma: &Matrix, u: &[Elem]) -> Result<Matrix> {
    let uinv = a.inverse(u).ok_or_else(|| crate::error::invalid!("twisting element is not invertible"))?;
    let l = a.left_matrix(u);
    let r = a.right_matrix(&uinv);
    l.mul(&r)?.mul(sigma)
}
