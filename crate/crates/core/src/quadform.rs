//! Quadratic spaces in any characteristic.
//!
//! A form is stored as an upper-triangular matrix M with q(x) = x^T M x, so
//! the polar form is M + M^T and nothing needs 1/2.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{Signed, ToPrimitive};

use crate::brauer::{BrauerClass2, ClassBase, Symbol};
use crate::error::{invalid, Error, Result};
use crate::linalg::{dot, Matrix, Vector};
use crate::scalars::quadext::{quad_ext_info, EtaleQuadratic};
use crate::scalars::{Elem, Field, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSpace {
    field: Field,
    upper: Matrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regularity {
    Regular,
    Semiregular,
    Singular,
}

#[derive(Clone, Debug)]
pub struct RegularityReport {
    pub class: Regularity,
    /// Basis of the radical of the polar form.
    pub radical: Vec<Vector>,
}

impl QuadraticSpace {
    /// The diagonal form <a_1, ..., a_n>.
    pub fn diag(field: &Field, entries: &[Elem]) -> Result<Self> {
        if entries.is_empty() {
            return Err(invalid!("a quadratic space needs dimension at least 1"));
        }
        let mut m = Matrix::zeros(field, entries.len(), entries.len());
        for (i, a) in entries.iter().enumerate() {
            if !field.contains(a) {
                return Err(Error::FieldMismatch(alloc::format!("{a} is not in {field}")));
            }
            m.set(i, i, a.clone());
        }
        Ok(QuadraticSpace { field: field.clone(), upper: m })
    }

    pub fn diag_i64(field: &Field, entries: &[i64]) -> Result<Self> {
        let v: Vec<Elem> = entries.iter().map(|a| field.from_i64(*a)).collect();
        Self::diag(field, &v)
    }

    /// From a square coefficient matrix; entries below the diagonal are
    /// folded into the upper triangle (x^T M x is unchanged).
    pub fn from_matrix(m: &Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension { expected: m.rows(), got: m.cols() });
        }
        let n = m.rows();
        if n == 0 {
            return Err(invalid!("a quadratic space needs dimension at least 1"));
        }
        let mut u = Matrix::zeros(m.field(), n, n);
        for i in 0..n {
            u.set(i, i, m.get(i, i).clone());
            for j in i + 1..n {
                u.set(i, j, m.get(i, j) + m.get(j, i));
            }
        }
        Ok(QuadraticSpace { field: m.field().clone(), upper: u })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.upper.rows()
    }

    /// Coefficient of x_i x_j (i <= j).
    pub fn coeff(&self, i: usize, j: usize) -> &Elem {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.upper.get(i, j)
    }

    pub fn upper(&self) -> &Matrix {
        &self.upper
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (i + 1..n).all(|j| self.upper.get(i, j).is_zero()))
    }

    pub fn diagonal(&self) -> Option<Vec<Elem>> {
        self.is_diagonal().then(|| (0..self.dim()).map(|i| self.upper.get(i, i).clone()).collect())
    }

    /// q(e_i).
    pub fn value_at_basis(&self, i: usize) -> Elem {
        self.upper.get(i, i).clone()
    }

    /// b_q(e_i, e_j).
    pub fn polar_coeff(&self, i: usize, j: usize) -> Elem {
        if i == j {
            &self.upper.get(i, i).clone() + self.upper.get(i, i)
        } else {
            self.coeff(i, j).clone()
        }
    }

    /// Matrix of b_q, i.e. M + M^T.
    pub fn polar_matrix(&self) -> Matrix {
        self.upper.add(&self.upper.transpose())
    }

    fn check_len(&self, x: &[Elem]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: x.len() });
        }
        Ok(())
    }

    pub fn eval(&self, x: &[Elem]) -> Result<Elem> {
        self.check_len(x)?;
        let mx = self.upper.mul_vec(x)?;
        Ok(dot(&self.field, x, &mx))
    }

    pub fn polar(&self, x: &[Elem], y: &[Elem]) -> Result<Elem> {
        self.check_len(x)?;
        self.check_len(y)?;
        let by = self.polar_matrix().mul_vec(y)?;
        Ok(dot(&self.field, x, &by))
    }

    /// (q(x), b_q(x, y)).
    pub fn eval_polar(&self, x: &[Elem], y: &[Elem]) -> Result<(Elem, Elem)> {
        Ok((self.eval(x)?, self.polar(x, y)?))
    }

    pub fn scaled(&self, lambda: &Elem) -> QuadraticSpace {
        QuadraticSpace { field: self.field.clone(), upper: self.upper.scale(lambda) }
    }

    /// The form x -> q(T x).
    pub fn pullback(&self, t: &Matrix) -> Result<QuadraticSpace> {
        let full = t.transpose().mul(&self.upper)?.mul(t)?;
        Self::from_matrix(&full)
    }

    /// Orthogonal sum.
    pub fn orthogonal_sum(&self, other: &QuadraticSpace) -> Result<QuadraticSpace> {
        if self.field != other.field {
            return Err(Error::FieldMismatch("orthogonal sum over different fields".into()));
        }
        let (n, m) = (self.dim(), other.dim());
        let mut u = Matrix::zeros(&self.field, n + m, n + m);
        for i in 0..n {
            for j in i..n {
                u.set(i, j, self.upper.get(i, j).clone());
            }
        }
        for i in 0..m {
            for j in i..m {
                u.set(n + i, n + j, other.upper.get(i, j).clone());
            }
        }
        Ok(QuadraticSpace { field: self.field.clone(), upper: u })
    }

    /// Symmetric Gram matrix with q(x) = x^T G x (characteristic not 2).
    pub fn gram(&self) -> Result<Matrix> {
        if self.field.is_char_two() {
            return Err(Error::Unsupported("no Gram matrix in characteristic 2".into()));
        }
        let half = self.field.from_ratio(1, 2)?;
        Ok(self.polar_matrix().scale(&half))
    }
}

pub fn regularity_classify(q: &QuadraticSpace) -> RegularityReport {
    let radical = q.polar_matrix().kernel();
    let class = if radical.is_empty() {
        Regularity::Regular
    } else if q.field.is_char_two() && q.dim() % 2 == 1 && radical.len() == 1 {
        // q is quadratic on a line: nonzero on the line iff nonzero at the generator
        if q.eval(&radical[0]).map(|v| !v.is_zero()).unwrap_or(false) {
            Regularity::Semiregular
        } else {
            Regularity::Singular
        }
    } else {
        Regularity::Singular
    };
    RegularityReport { class, radical }
}

pub fn is_nondegenerate(q: &QuadraticSpace) -> bool {
    regularity_classify(q).class != Regularity::Singular
}

/// Change of basis T (columns are the new basis) with T^T G T diagonal, and
/// the values of q on the new basis.
pub fn diagonalize(q: &QuadraticSpace) -> Result<(Matrix, Vec<Elem>)> {
    let f = &q.field;
    if f.is_char_two() {
        return Err(Error::Unsupported("diagonalization needs characteristic not 2".into()));
    }
    if regularity_classify(q).class != Regularity::Regular {
        return Err(invalid!("cannot diagonalize a singular form"));
    }
    let n = q.dim();
    let mut g = q.gram()?;
    let mut t = Matrix::identity(f, n);
    // congruence by an elementary column operation col_a += c * col_b
    let add = |g: &mut Matrix, t: &mut Matrix, a: usize, b: usize, c: &Elem| {
        for r in 0..n {
            let v = t.get(r, a) + &(c * t.get(r, b));
            t.set(r, a, v);
        }
        for r in 0..n {
            let v = g.get(r, a) + &(c * g.get(r, b));
            g.set(r, a, v);
        }
        for k in 0..n {
            let v = g.get(a, k) + &(c * g.get(b, k));
            g.set(a, k, v);
        }
    };
    for i in 0..n {
        if g.get(i, i).is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !g.get(j, j).is_zero()) {
                let one = f.one();
                add(&mut g, &mut t, i, j, &one);
                if g.get(i, i).is_zero() {
                    // G_ii + 2G_ij + G_jj vanished; the negative combination cannot also vanish
                    let m2 = f.from_i64(-2);
                    add(&mut g, &mut t, i, j, &m2);
                }
            } else if let Some(j) = (i + 1..n).find(|&j| !g.get(i, j).is_zero()) {
                let one = f.one();
                add(&mut g, &mut t, i, j, &one);
            } else {
                return Err(invalid!("cannot diagonalize a singular form"));
            }
        }
        let inv = g.get(i, i).inv().expect("nonzero pivot");
        for j in i + 1..n {
            if !g.get(i, j).is_zero() {
                let c = -(g.get(i, j) * &inv);
                add(&mut g, &mut t, j, i, &c);
            }
        }
    }
    let d = (0..n).map(|i| g.get(i, i).clone()).collect();
    Ok((t, d))
}

/// Center of the even Clifford algebra of an even-dimensional regular form:
/// the discriminant algebra F[X]/(X^2 - (-1)^{n(n-1)/2} det G), or in
/// characteristic 2 F[X]/(X^2 + X + Arf(q)).
pub fn center_invariant(q: &QuadraticSpace) -> Result<EtaleQuadratic> {
    let n = q.dim();
    if n % 2 == 1 {
        return Err(invalid!("the center invariant is defined for even dimension"));
    }
    if regularity_classify(q).class != Regularity::Regular {
        return Err(invalid!("form is not regular"));
    }
    let f = &q.field;
    if f.is_char_two() {
        return quad_ext_info(f, arf_invariant(q)?);
    }
    let det = q.gram()?.determinant();
    let sign = if (n * (n - 1) / 2) % 2 == 1 { f.from_i64(-1) } else { f.one() };
    quad_ext_info(f, &sign * &det)
}

/// Arf invariant sum q(a_i) q(b_i) over a symplectic basis of b_q.
pub fn arf_invariant(q: &QuadraticSpace) -> Result<Elem> {
    let f = &q.field;
    let n = q.dim();
    let b = q.polar_matrix();
    let bf = |x: &Vector, y: &Vector| dot(f, x, &b.mul_vec(y).unwrap());
    let mut rest: Vec<Vector> = (0..n).map(|i| crate::linalg::unit_vec(f, n, i)).collect();
    let mut arf = f.zero();
    while let Some(u) = rest.pop() {
        let Some(k) = rest.iter().position(|w| !bf(&u, w).is_zero()) else {
            return Err(invalid!("polar form is degenerate"));
        };
        let w = rest.remove(k);
        let v = crate::linalg::scale(&w, &bf(&u, &w).inv().unwrap());
        arf = &arf + &(&q.eval(&u)? * &q.eval(&v)?);
        for x in rest.iter_mut() {
            let (xu, xv) = (bf(x, &u), bf(x, &v));
            let mut y = x.clone();
            crate::linalg::axpy(&mut y, &(-xv), &u);
            crate::linalg::axpy(&mut y, &xu, &v);
            *x = y;
        }
    }
    Ok(arf)
}

/// Brauer data of the Clifford algebras of a regular form.
#[derive(Clone, Debug)]
pub enum CliffordClass {
    /// Odd dimension: C_0 is central simple with this class.
    Central(BrauerClass2),
    /// Even dimension: [C(q)] over F, with C_0 = centralizer of Z in C(q) so
    /// its class is the restriction of `full` to the center Z.
    OverCenter { center: EtaleQuadratic, full: BrauerClass2 },
}

impl CliffordClass {
    /// Class of C_0 (over Z in even dimension).
    pub fn even_class(&self) -> Result<BrauerClass2> {
        match self {
            CliffordClass::Central(c) => Ok(c.clone()),
            CliffordClass::OverCenter { center, full } => full.restrict(center),
        }
    }
}

/// Symbols of the full Clifford algebra of <b_1, ..., b_{2m}>:
/// C(<b1,b2> + rest) = (b1,b2) (x) C(-b1 b2 rest).
fn full_clifford_symbols(entries: &[Rational]) -> Vec<Symbol> {
    let mut out = Vec::new();
    let mut rest: Vec<Rational> = entries.to_vec();
    while rest.len() >= 2 {
        let b1 = rest.remove(0);
        let b2 = rest.remove(0);
        let s = -(&b1 * &b2);
        for x in rest.iter_mut() {
            *x = &*x * &s;
        }
        out.push((b1, b2));
    }
    out
}

/// Brauer class data of the Clifford algebras of a regular diagonal form
/// (over Q), or of any regular form over a finite field (all classes trivial).
pub fn clifford_class(q: &QuadraticSpace) -> Result<CliffordClass> {
    let f = &q.field;
    let n = q.dim();
    let reg = regularity_classify(q).class;
    if let Field::Finite(_) = f {
        if reg == Regularity::Singular {
            return Err(invalid!("form is singular"));
        }
        let triv = BrauerClass2::trivial(ClassBase::Finite(f.clone()));
        return Ok(if n % 2 == 1 {
            CliffordClass::Central(triv)
        } else {
            CliffordClass::OverCenter { center: center_invariant(q)?, full: triv }
        });
    }
    if reg != Regularity::Regular {
        return Err(invalid!("form is singular"));
    }
    let diag = q.diagonal().ok_or_else(|| invalid!("clifford_class expects a diagonal form; diagonalize first"))?;
    let a: Vec<Rational> = diag.iter().map(|e| e.to_rational()).collect::<Result<_>>()?;
    if n % 2 == 1 {
        // C_0(<a1> + q1) = C(-a1 q1)
        let rest: Vec<Rational> = a[1..].iter().map(|x| -(&a[0] * x)).collect();
        Ok(CliffordClass::Central(BrauerClass2::over_q(full_clifford_symbols(&rest))?))
    } else {
        Ok(CliffordClass::OverCenter {
            center: center_invariant(q)?,
            full: BrauerClass2::over_q(full_clifford_symbols(&a))?,
        })
    }
}

/// Clifford class of any regular form over Q, diagonalizing first.
pub fn clifford_class_general(q: &QuadraticSpace) -> Result<CliffordClass> {
    if matches!(q.field, Field::Rationals) && !q.is_diagonal() {
        let (_, d) = diagonalize(q)?;
        return clifford_class(&QuadraticSpace::diag(&q.field, &d)?);
    }
    clifford_class(q)
}

/// Outcome of [`represents_one`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Representation {
    Found(Vector),
    /// The bounded search failed; this does not prove q misses 1.
    NotFound,
}

/// Cap on the number of candidate vectors tried over Q.
const SEARCH_CAP: u64 = 2_000_000;

/// Looks for z with q(z) = 1: the hint if valid, else a bounded search
/// (exhaustive over finite fields).
pub fn represents_one(q: &QuadraticSpace, hint: Option<&[Elem]>, bound: u32) -> Result<Representation> {
    let f = &q.field;
    if let Some(z) = hint {
        let v = q.eval(z)?;
        if !v.is_one() {
            return Err(invalid!("hint has q(z) = {v}, not 1"));
        }
        return Ok(Representation::Found(z.to_vec()));
    }
    let n = q.dim();
    if let Some(elems) = f.elements() {
        let size = elems.len() as u64;
        let total = size.checked_pow(n as u32).filter(|t| *t <= SEARCH_CAP * 8);
        let Some(total) = total else {
            return Err(Error::InputTooLarge(alloc::format!("{size}^{n} vectors exceed the search cap")));
        };
        for idx in 1..total {
            let mut k = idx;
            let x: Vector = (0..n)
                .map(|_| {
                    let e = elems[(k % size) as usize].clone();
                    k /= size;
                    e
                })
                .collect();
            if q.eval(&x)?.is_one() {
                return Ok(Representation::Found(x));
            }
        }
        return Ok(Representation::NotFound);
    }
    search_rational(q, bound)
}

/// Integer coefficient matrix L*M and the denominator L.
fn integral_form(q: &QuadraticSpace) -> Result<(Vec<Vec<i128>>, i128)> {
    let n = q.dim();
    let mut l = BigInt::from(1);
    for i in 0..n {
        for j in i..n {
            l = l.lcm(q.coeff(i, j).to_rational()?.denom());
        }
    }
    let big = || Error::InputTooLarge("form coefficients too large for the search".into());
    let mut m = alloc::vec![alloc::vec![0i128; n]; n];
    for i in 0..n {
        for j in i..n {
            let r = q.coeff(i, j).to_rational()?;
            let v = r.numer() * (&l / r.denom());
            m[i][j] = v.to_i128().filter(|v| v.abs() < 1 << 40).ok_or_else(big)?;
        }
    }
    Ok((m, l.to_i128().filter(|v| *v < 1 << 40).ok_or_else(big)?))
}

fn search_rational(q: &QuadraticSpace, bound: u32) -> Result<Representation> {
    let n = q.dim();
    let (m, l) = integral_form(q)?;
    let b = bound as i64;
    let mut tried = 0u64;
    // integer vectors x by increasing sup norm h; z = x / d with L d^2 = Q(x)
    for h in 1..=b {
        let mut x = alloc::vec![-h; n];
        loop {
            if x.iter().any(|c| c.abs() == h) {
                tried += 1;
                if tried > SEARCH_CAP {
                    return Ok(Representation::NotFound);
                }
                let mut val: i128 = 0;
                for i in 0..n {
                    for j in i..n {
                        val += m[i][j] * x[i] as i128 * x[j] as i128;
                    }
                }
                if val > 0 && val % l == 0 {
                    let d2 = val / l;
                    let d = (d2 as u128).sqrt() as i128;
                    if d * d == d2 && d <= b as i128 {
                        let f = &q.field;
                        let z: Vector = x
                            .iter()
                            .map(|c| f.from_rational(&Rational::new(BigInt::from(*c), BigInt::from(d))).unwrap())
                            .collect();
                        debug_assert!(q.eval(&z).unwrap().is_one());
                        return Ok(Representation::Found(z));
                    }
                }
            }
            // odometer over the box [-h, h]^n
            let mut i = 0;
            while i < n {
                if x[i] < h {
                    x[i] += 1;
                    break;
                }
                x[i] = -h;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
    Ok(Representation::NotFound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn eval_and_polar() {
        let h = QuadraticSpace::diag_i64(&q(), &[1, -1]).unwrap();
        let one = q().one();
        assert!(h.eval(&[one.clone(), one.clone()]).unwrap().is_zero());
        let f2 = Field::prime_field(2).unwrap();
        let m = Matrix::from_i64(&f2, &[&[1, 1], &[0, 1]]);
        let s = QuadraticSpace::from_matrix(&m).unwrap();
        let (_, b) = s.eval_polar(&[f2.one(), f2.zero()], &[f2.zero(), f2.one()]).unwrap();
        assert!(b.is_one());
        // b(x, x) = 2 q(x) = 0 in char 2
        let x = [f2.one(), f2.one()];
        assert!(s.polar(&x, &x).unwrap().is_zero());
    }

    #[test]
    fn regularity_examples() {
        assert_eq!(regularity_classify(&QuadraticSpace::diag_i64(&q(), &[1, 1, 1]).unwrap()).class, Regularity::Regular);
        let f2 = Field::prime_field(2).unwrap();
        let s = QuadraticSpace::diag_i64(&f2, &[1, 1, 1]).unwrap();
        let r = regularity_classify(&s);
        assert_eq!(r.class, Regularity::Singular);
        assert_eq!(r.radical.len(), 3);
        // x^2 + yz
        let m = Matrix::from_i64(&f2, &[&[1, 0, 0], &[0, 0, 1], &[0, 0, 0]]);
        let r = regularity_classify(&QuadraticSpace::from_matrix(&m).unwrap());
        assert_eq!(r.class, Regularity::Semiregular);
        assert_eq!(r.radical.len(), 1);
    }

    #[test]
    fn diagonalize_hyperbolic() {
        let m = Matrix::from_i64(&q(), &[&[0, 1], &[0, 0]]);
        let s = QuadraticSpace::from_matrix(&m).unwrap();
        let (t, d) = diagonalize(&s).unwrap();
        let g = s.gram().unwrap();
        let dg = t.transpose().mul(&g).unwrap().mul(&t).unwrap();
        assert!(dg.get(0, 1).is_zero());
        // product of the two entries is minus a square
        let prod = -(&d[0] * &d[1]);
        assert!(q().is_square(&prod));
        let already = QuadraticSpace::diag_i64(&q(), &[2, 8]).unwrap();
        let (t, d) = diagonalize(&already).unwrap();
        assert_eq!(t, Matrix::identity(&q(), 2));
        assert_eq!(d, alloc::vec![q().from_i64(2), q().from_i64(8)]);
    }

    #[test]
    fn centers() {
        let h = QuadraticSpace::diag_i64(&q(), &[1, -1]).unwrap();
        assert!(center_invariant(&h).unwrap().split);
        let c = center_invariant(&QuadraticSpace::diag_i64(&q(), &[1, 1]).unwrap()).unwrap();
        assert_eq!(c.datum, q().from_i64(-1));
        let f2 = Field::prime_field(2).unwrap();
        let m = Matrix::from_i64(&f2, &[&[1, 1], &[0, 1]]);
        let z = center_invariant(&QuadraticSpace::from_matrix(&m).unwrap()).unwrap();
        assert!(z.datum.is_one());
        assert!(!z.split);
    }

    #[test]
    fn clifford_classes_of_small_forms() {
        let c = clifford_class(&QuadraticSpace::diag_i64(&q(), &[1, 1, 1]).unwrap()).unwrap();
        let hamilton = BrauerClass2::from_ints(&[(-1, -1)]).unwrap();
        assert!(c.even_class().unwrap().equals(&hamilton).unwrap());
        let c = clifford_class(&QuadraticSpace::diag_i64(&q(), &[1, -1, 1]).unwrap()).unwrap();
        assert!(c.even_class().unwrap().is_trivial().unwrap());
        let c = clifford_class(&QuadraticSpace::diag_i64(&q(), &[1, -2, -3, -1, 1]).unwrap()).unwrap();
        let target = BrauerClass2::from_ints(&[(2, 3)]).unwrap();
        assert!(c.even_class().unwrap().equals(&target).unwrap());
    }

    #[test]
    fn represents_one_examples() {
        let h = QuadraticSpace::diag_i64(&q(), &[1, -1]).unwrap();
        assert!(matches!(represents_one(&h, None, 5).unwrap(), Representation::Found(_)));
        let s = QuadraticSpace::diag_i64(&q(), &[2, -1]).unwrap();
        let Representation::Found(z) = represents_one(&s, None, 5).unwrap() else { panic!() };
        assert!(s.eval(&z).unwrap().is_one());
        let neg = QuadraticSpace::diag_i64(&q(), &[-1, -1]).unwrap();
        assert_eq!(represents_one(&neg, None, 10).unwrap(), Representation::NotFound);
        let bad = [q().one(), q().one()];
        assert!(represents_one(&neg, Some(&bad), 10).is_err());
    }
}
