//! Clifford algebras of quadratic spaces (by monomial rewriting) and of
//! quadratic pairs (by saturating a truncated tensor algebra).

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{
    hom_verify, involution_attach, involution_attach_generated, involution_type, CenterReport, HomVerdict,
    AlgebraWithInvolution, InvolutionType, Sparse, StructureAlgebra, Verify,
};
use crate::brauer::{BrauerClass2, ClassBase};
use crate::error::{invalid, Error, Result};
use crate::linalg::{axpy, is_zero_vec, zero_vec, Coordinates, Echelon, Matrix, Vector};
use crate::qpair::{pair_from_form, QuadraticPair};
use crate::quadform::QuadraticSpace;
use crate::scalars::quadext::{quad_ext_info, EtaleQuadratic};
use crate::scalars::{Elem, Field};

/// What the carrier's basis vectors stand for.
#[derive(Clone, Debug)]
pub enum CliffordBasis {
    /// Ordered monomials e_S, as bitmasks.
    Monomials(Vec<u32>),
    /// Normal words in the letters; `letters[a]` is the index of the basis
    /// element of A that letter `a` stands for.
    Words { words: Vec<Vec<u8>>, letters: Vec<usize> },
}

#[derive(Clone, Debug)]
pub struct CliffordStructure {
    pub center: CenterReport,
    /// The center as a quadratic étale algebra, when it is two-dimensional.
    pub center_algebra: Option<EtaleQuadratic>,
    /// Degree over the center.
    pub degree: usize,
}

#[derive(Clone, Debug)]
pub struct CliffordAlgebra {
    pub carrier: Arc<StructureAlgebra>,
    /// Images of the basis of V, or of the basis of A.
    pub generators: Vec<Vector>,
    pub involution: AlgebraWithInvolution,
    pub structure: CliffordStructure,
    pub basis: CliffordBasis,
}

impl CliffordAlgebra {
    pub fn dim(&self) -> usize {
        self.carrier.dim()
    }

    pub fn field(&self) -> &Field {
        self.carrier.field()
    }

    /// Index of a monomial in the carrier basis.
    pub fn monomial_index(&self, mask: u32) -> Option<usize> {
        match &self.basis {
            CliffordBasis::Monomials(m) => m.iter().position(|x| *x == mask),
            CliffordBasis::Words { .. } => None,
        }
    }
}

// ---------------------------------------------------------------------------
// Monomial rewriting

struct Rewriter<'a> {
    q: &'a QuadraticSpace,
    n: usize,
    memo: Vec<Option<Vec<(u32, Elem)>>>,
}

impl<'a> Rewriter<'a> {
    fn new(q: &'a QuadraticSpace) -> Self {
        let n = q.dim();
        Rewriter { q, n, memo: vec![None; (1usize << n) * n.max(1)] }
    }

    /// e_w * e_i as a combination of ordered monomials.
    fn times_gen(&mut self, w: u32, i: usize) -> Vec<(u32, Elem)> {
        let key = w as usize * self.n + i;
        if let Some(v) = &self.memo[key] {
            return v.clone();
        }
        let f = self.q.field().clone();
        let out = if w == 0 {
            vec![(1u32 << i, f.one())]
        } else {
            let last = 31 - w.leading_zeros() as usize;
            let rest = w & !(1u32 << last);
            if last < i {
                vec![(w | (1u32 << i), f.one())]
            } else if last == i {
                vec![(rest, self.q.coeff(i, i).clone())]
            } else {
                // e_rest e_last e_i = b(e_i, e_last) e_rest - (e_rest e_i) e_last
                let mut acc: BTreeMap<u32, Elem> = BTreeMap::new();
                let b = self.q.polar_coeff(i, last);
                if !b.is_zero() {
                    acc.insert(rest, b);
                }
                for (m, c) in self.times_gen(rest, i) {
                    let e = acc.entry(m | (1u32 << last)).or_insert_with(|| f.zero());
                    *e = &*e - &c;
                }
                acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
            }
        };
        self.memo[key] = Some(out.clone());
        out
    }

    fn times_word(&mut self, start: Vec<(u32, Elem)>, gens: impl Iterator<Item = usize>) -> Vec<(u32, Elem)> {
        let f = self.q.field().clone();
        let mut acc = start;
        for i in gens {
            let mut next: BTreeMap<u32, Elem> = BTreeMap::new();
            for (m, c) in &acc {
                for (m2, c2) in self.times_gen(*m, i) {
                    let e = next.entry(m2).or_insert_with(|| f.zero());
                    *e = &*e + &(c * &c2);
                }
            }
            acc = next.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        }
        acc
    }

    fn mono_mul(&mut self, u: u32, v: u32) -> Vec<(u32, Elem)> {
        let bits: Vec<usize> = (0..self.n).filter(|i| v & (1 << i) != 0).collect();
        self.times_word(vec![(u, self.q.field().one())], bits.into_iter())
    }

    /// e_{s_m} ... e_{s_1} for S = {s_1 < ... < s_m}.
    fn reversed(&mut self, w: u32) -> Vec<(u32, Elem)> {
        let bits: Vec<usize> = (0..self.n).rev().filter(|i| w & (1 << i) != 0).collect();
        self.times_word(vec![(0, self.q.field().one())], bits.into_iter())
    }
}

fn mask_label(w: u32, n: usize) -> String {
    if w == 0 {
        return "1".into();
    }
    (0..n).filter(|i| w & (1 << i) != 0).map(|i| alloc::format!("e{}", i + 1)).collect()
}

const MAX_FORM_DIM: usize = 10;

fn build_from_form(q: &QuadraticSpace, even: bool) -> Result<CliffordAlgebra> {
    let n = q.dim();
    if n > MAX_FORM_DIM {
        return Err(Error::InputTooLarge(alloc::format!("Clifford algebra of a {n}-dimensional form")));
    }
    let f = q.field().clone();
    let masks: Vec<u32> = (0..(1u32 << n)).filter(|m| !even || m.count_ones() % 2 == 0).collect();
    let d = masks.len();
    let mut index = BTreeMap::new();
    for (k, m) in masks.iter().enumerate() {
        index.insert(*m, k as u32);
    }
    let mut rw = Rewriter::new(q);
    let to_sparse = |v: Vec<(u32, Elem)>| -> Sparse { v.into_iter().map(|(m, c)| (index[&m], c)).collect() };
    let mut table = Vec::with_capacity(d * d);
    for u in &masks {
        for v in &masks {
            table.push(to_sparse(rw.mono_mul(*u, *v)));
        }
    }
    let gens: Vec<Vector> = if even {
        let mut g = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut v = zero_vec(&f, d);
                v[index[&((1u32 << i) | (1u32 << j))] as usize] = f.one();
                g.push(v);
            }
        }
        g
    } else {
        (0..n).map(|i| crate::linalg::unit_vec(&f, d, index[&(1u32 << i)] as usize)).collect()
    };
    let labels = masks.iter().map(|m| mask_label(*m, n)).collect();
    let prov = alloc::format!("{}({}-dim form)", if even { "C0" } else { "C" }, n);
    let carrier = StructureAlgebra::from_table(
        &f,
        d,
        table,
        crate::linalg::unit_vec(&f, d, 0),
        None,
        labels,
        prov,
        Verify::Generators(gens.clone()),
    )?;
    let mut sigma = Matrix::zeros(&f, d, d);
    for (k, m) in masks.iter().enumerate() {
        for (m2, c) in rw.reversed(*m) {
            sigma.set(index[&m2] as usize, k, c);
        }
    }
    let carrier = Arc::new(carrier);
    let involution = involution_attach_generated(carrier.clone(), sigma, &gens, None)?;
    let structure = structure_of(&carrier, &gens)?;
    let generators = if even {
        gens
    } else {
        (0..n).map(|i| carrier.basis(index[&(1u32 << i)] as usize)).collect()
    };
    Ok(CliffordAlgebra { carrier, generators, involution, structure, basis: CliffordBasis::Monomials(masks) })
}

/// C(V, q) with the reversal involution.
pub fn clifford_full(q: &QuadraticSpace) -> Result<CliffordAlgebra> {
    build_from_form(q, false)
}

/// C0(V, q) with the restriction of reversal.
pub fn clifford_even(q: &QuadraticSpace) -> Result<CliffordAlgebra> {
    build_from_form(q, true)
}

fn structure_of(a: &StructureAlgebra, gens: &[Vector]) -> Result<CliffordStructure> {
    let center = a.center_and_idempotents(gens);
    let center_algebra = center_descriptor(a.field(), &center);
    let z = center.basis.len();
    let m2 = a.dim() / z;
    let mut degree = 0;
    while degree * degree < m2 {
        degree += 1;
    }
    Ok(CliffordStructure { center, center_algebra, degree })
}

/// The two-dimensional center as F[X]/(X^2 - m), or F[X]/(X^2 + X + a) in
/// characteristic 2. None when the center is not a quadratic étale algebra.
pub fn center_descriptor(f: &Field, rep: &CenterReport) -> Option<EtaleQuadratic> {
    let (alpha, beta) = rep.min_poly.clone()?;
    if f.is_char_two() {
        // w^2 = alpha w + beta; y = w / alpha gives y^2 + y = beta / alpha^2
        let ai = alpha.inv()?;
        quad_ext_info(f, &beta * &(&ai * &ai)).ok()
    } else {
        // (w - alpha/2)^2 = beta + alpha^2 / 4
        let quarter = f.from_ratio(1, 4).ok()?;
        quad_ext_info(f, &beta + &(&(&alpha * &alpha) * &quarter)).ok()
    }
}

// ---------------------------------------------------------------------------
// Sandwich map and J2

#[derive(Clone, Debug)]
pub struct SandwichSpace {
    /// Elements of A (x) A; coordinate i * dim A + j is the coefficient of b_i (x) b_j.
    pub basis: Vec<Vector>,
    /// Sand(u) as a matrix on A, one per basis element.
    pub sand: Vec<Matrix>,
}

/// Sand(u)(x) = sum u_ij b_i x b_j.
pub fn sand_apply(a: &StructureAlgebra, u: &[Elem], x: &[Elem]) -> Vector {
    let d = a.dim();
    let mut out = a.zero();
    for (idx, c) in u.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (i, j) = (idx / d, idx % d);
        let v = a.mul(&a.mul(&a.basis(i), x), &a.basis(j));
        axpy(&mut out, c, &v);
    }
    out
}

/// {u in A (x) A : Sand(u)(x) = Sand(u)(sigma(x)) for all x}.
pub fn sandwich_and_j2(awi: &AlgebraWithInvolution) -> Result<SandwichSpace> {
    let a = &awi.algebra;
    let f = a.field().clone();
    let d = a.dim();
    // Sand(u) must vanish on the image of id - sigma
    let alt = &awi.alt;
    let mut cols = Vec::with_capacity(d * d);
    for i in 0..d {
        let bi = a.basis(i);
        let left: Vec<Vector> = alt.iter().map(|y| a.mul(&bi, y)).collect();
        for j in 0..d {
            let bj = a.basis(j);
            let mut col = Vec::with_capacity(d * alt.len());
            for l in &left {
                col.extend(a.mul(l, &bj));
            }
            cols.push(col);
        }
    }
    let basis = if alt.is_empty() {
        (0..d * d).map(|k| crate::linalg::unit_vec(&f, d * d, k)).collect()
    } else {
        Matrix::from_cols(&f, d * alt.len(), &cols)?.kernel()
    };
    let sand = basis
        .iter()
        .map(|u| {
            let cols: Vec<Vector> = (0..d).map(|m| sand_apply(a, u, &a.basis(m))).collect();
            Matrix::from_cols(&f, d, &cols).unwrap()
        })
        .collect();
    Ok(SandwichSpace { basis, sand })
}

// ---------------------------------------------------------------------------
// Clifford algebra of a pair

/// Truncation cap for the tensor-algebra saturation.
pub const DEFAULT_TRUNCATION_CAP: usize = 4;
/// Largest pair degree handled by saturation.
pub const MAX_PAIR_DEGREE: usize = 4;

struct Words {
    m: usize,
    off: Vec<usize>,
    len_of: Vec<u8>,
}

impl Words {
    fn new(m: usize, k: usize) -> Self {
        let mut off = vec![0usize];
        let mut p = 1usize;
        for _ in 0..=k {
            off.push(off.last().unwrap() + p);
            p *= m;
        }
        let total = off[k + 1];
        let mut len_of = vec![0u8; total];
        for l in 0..=k {
            for idx in off[l]..off[l + 1] {
                len_of[idx] = l as u8;
            }
        }
        Words { m, off, len_of }
    }

    fn total(&self) -> usize {
        *self.off.last().unwrap()
    }

    fn index(&self, w: &[u8]) -> usize {
        let mut r = 0;
        for a in w {
            r = r * self.m + *a as usize;
        }
        self.off[w.len()] + r
    }

    fn word(&self, idx: usize) -> Vec<u8> {
        let l = self.len_of[idx] as usize;
        let mut r = idx - self.off[l];
        let mut w = vec![0u8; l];
        for p in (0..l).rev() {
            w[p] = (r % self.m) as u8;
            r /= self.m;
        }
        w
    }

    fn degree(&self, v: &[Elem]) -> Option<usize> {
        v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| self.len_of[i] as usize).max()
    }

    /// a * v (left) or v * a (right); None when the degree would exceed the truncation.
    fn shift(&self, v: &[Elem], a: usize, left: bool, k: usize) -> Option<Vector> {
        let f = v.iter().next()?.field();
        let mut out = zero_vec(&f, self.total());
        for (idx, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let l = self.len_of[idx] as usize;
            if l >= k {
                return None;
            }
            let r = idx - self.off[l];
            let rank = if left { a * self.m.pow(l as u32) + r } else { r * self.m + a };
            out[self.off[l + 1] + rank] = c.clone();
        }
        Some(out)
    }
}

/// Projection A -> F + W: scalar part f(s) and letter coordinates.
struct Split {
    coords: Matrix,
    n_sym: usize,
    f: Vector,
    letters: Vec<usize>,
}

impl Split {
    fn new(p: &QuadraticPair) -> Result<Self> {
        let a = p.algebra();
        let field = a.field().clone();
        let d = a.dim();
        let mut ech = Echelon::new(&field, d);
        for s in &p.awi.sym {
            ech.insert(s);
        }
        let mut letters = Vec::new();
        let mut cols = p.awi.sym.clone();
        for i in 0..d {
            let b = a.basis(i);
            if ech.insert(&b) {
                letters.push(i);
                cols.push(b);
            }
        }
        let coords = Matrix::from_cols(&field, d, &cols)?
            .inverse()
            .ok_or_else(|| Error::Certification("Sym complement is not a basis".into()))?;
        Ok(Split { coords, n_sym: p.awi.sym.len(), f: p.f.clone(), letters })
    }

    fn project(&self, x: &[Elem]) -> (Elem, Vector) {
        let c = self.coords.mul_vec(x).unwrap();
        let s = crate::linalg::dot(&x[0].field(), &c[..self.n_sym], &self.f);
        (s, c[self.n_sym..].to_vec())
    }
}

/// C(A, sigma, f) with its canonical involution.
pub fn clifford_of_pair(p: &QuadraticPair) -> Result<CliffordAlgebra> {
    clifford_of_pair_with_cap(p, DEFAULT_TRUNCATION_CAP)
}

pub fn clifford_of_pair_with_cap(p: &QuadraticPair, cap: usize) -> Result<CliffordAlgebra> {
    let n = p.degree;
    if n % 2 == 1 || n == 0 {
        return Err(invalid!("pair degree must be even"));
    }
    if n > MAX_PAIR_DEGREE {
        return Err(Error::InputTooLarge(alloc::format!(
            "pair degree {n} exceeds the saturation limit {MAX_PAIR_DEGREE}"
        )));
    }
    let expected = 1usize << (n - 1);
    let a = p.algebra();
    let field = a.field().clone();
    let split = Split::new(p)?;
    let m = split.letters.len();
    let sw = sandwich_and_j2(&p.awi)?;
    let w2 = Words::new(m, 2);

    // relations u - Sand(u)(l) written in T(W) up to degree 2
    let pieces: Vec<(Elem, Vector)> = (0..a.dim()).map(|i| split.project(&a.basis(i))).collect();
    let d = a.dim();
    let mut rels = Vec::with_capacity(sw.basis.len());
    for u in &sw.basis {
        let mut r = zero_vec(&field, w2.total());
        for (idx, c) in u.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (s1, l1) = &pieces[idx / d];
            let (s2, l2) = &pieces[idx % d];
            r[0] = &r[0] + &(c * &(s1 * s2));
            for x in 0..m {
                let t = &(s1 * &l2[x]) + &(&l1[x] * s2);
                if !t.is_zero() {
                    r[1 + x] = &r[1 + x] + &(c * &t);
                }
                if l1[x].is_zero() {
                    continue;
                }
                for y in 0..m {
                    if !l2[y].is_zero() {
                        let k = w2.index(&[x as u8, y as u8]);
                        r[k] = &r[k] + &(c * &(&l1[x] * &l2[y]));
                    }
                }
            }
        }
        let (s, l) = split.project(&sand_apply(a, u, &p.ell));
        r[0] = &r[0] - &s;
        for x in 0..m {
            r[1 + x] = &r[1 + x] - &l[x];
        }
        if !is_zero_vec(&r) {
            rels.push(r);
        }
    }

    let mut last_count = 0;
    for k in 2..=cap.max(2) {
        let words = Words::new(m, k);
        let total = words.total();
        let mut order: Vec<usize> = Vec::with_capacity(total);
        for l in (0..=k).rev() {
            order.extend(words.off[l]..words.off[l + 1]);
        }
        let mut ech = Echelon::with_order(&field, total, order);
        for r in &rels {
            let mut v = r.clone();
            v.resize(total, field.zero());
            ech.insert(&v);
        }
        loop {
            let mut grew = false;
            let snapshot: Vec<Vector> = ech.basis().to_vec();
            for v in &snapshot {
                if words.degree(v).map_or(true, |dg| dg >= k) {
                    continue;
                }
                for x in 0..m {
                    for left in [true, false] {
                        if let Some(w) = words.shift(v, x, left, k) {
                            grew |= ech.insert(&w);
                        }
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let top_saturated = (words.off[k]..words.off[k + 1]).all(|c| ech.is_pivot(c));
        let normal: Vec<usize> = (0..total).filter(|c| !ech.is_pivot(*c)).collect();
        last_count = normal.len();
        if !top_saturated || normal.len() > expected {
            continue;
        }
        if normal.len() < expected {
            return Err(Error::Certification(alloc::format!(
                "quotient has {} normal words, expected {expected}",
                normal.len()
            )));
        }
        return assemble(p, &split, &words, &ech, &normal, k);
    }
    Err(Error::Saturation(alloc::format!(
        "quotient did not reach dimension {expected} within truncation degree {cap} ({last_count} normal words)"
    )))
}

fn assemble(
    p: &QuadraticPair,
    split: &Split,
    words: &Words,
    ech: &Echelon,
    normal: &[usize],
    k: usize,
) -> Result<CliffordAlgebra> {
    let a = p.algebra();
    let field = a.field().clone();
    let dn = normal.len();
    let pos: BTreeMap<usize, usize> = normal.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let nwords: Vec<Vec<u8>> = normal.iter().map(|c| words.word(*c)).collect();
    let mut memo: BTreeMap<Vec<u8>, Vector> = BTreeMap::new();

    fn reduce_word(
        w: &[u8],
        words: &Words,
        ech: &Echelon,
        pos: &BTreeMap<usize, usize>,
        nwords: &[Vec<u8>],
        k: usize,
        field: &Field,
        memo: &mut BTreeMap<Vec<u8>, Vector>,
    ) -> Vector {
        if let Some(v) = memo.get(w) {
            return v.clone();
        }
        let dn = nwords.len();
        let out = if w.len() <= k {
            let mut v = zero_vec(field, words.total());
            v[words.index(w)] = field.one();
            let r = ech.reduce(&v);
            let mut out = zero_vec(field, dn);
            for (c, x) in r.iter().enumerate() {
                if !x.is_zero() {
                    out[pos[&c]] = x.clone();
                }
            }
            out
        } else {
            let head = reduce_word(&w[..k], words, ech, pos, nwords, k, field, memo);
            let mut out = zero_vec(field, dn);
            for (i, c) in head.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut nw = nwords[i].clone();
                nw.extend_from_slice(&w[k..]);
                let r = reduce_word(&nw, words, ech, pos, nwords, k, field, memo);
                axpy(&mut out, c, &r);
            }
            out
        };
        memo.insert(w.to_vec(), out.clone());
        out
    }

    let mut table = Vec::with_capacity(dn * dn);
    for u in &nwords {
        for v in &nwords {
            let mut w = u.clone();
            w.extend_from_slice(v);
            let r = reduce_word(&w, words, ech, &pos, &nwords, k, &field, &mut memo);
            table.push(crate::algebra::to_sparse(&r));
        }
    }
    let unit_pos = *pos.get(&0).ok_or_else(|| Error::Certification("the quotient is zero".into()))?;
    let unit = crate::linalg::unit_vec(&field, dn, unit_pos);
    let labels: Vec<String> = nwords
        .iter()
        .map(|w| {
            if w.is_empty() {
                "1".into()
            } else {
                w.iter().map(|x| alloc::format!("<{}>", a.labels()[split.letters[*x as usize]])).collect()
            }
        })
        .collect();
    let carrier = Arc::new(StructureAlgebra::from_table(
        &field,
        dn,
        table,
        unit,
        None,
        labels,
        alloc::format!("C({})", a.provenance()),
        Verify::Full,
    )?);
    // image of x in A
    let letter_img: Vec<Vector> = (0..split.letters.len())
        .map(|x| reduce_word(&[x as u8], words, ech, &pos, &nwords, k, &field, &mut memo))
        .collect();
    let image = |x: &[Elem]| -> Vector {
        let (s, l) = split.project(x);
        let mut v = carrier.scalar(&s);
        for (c, img) in l.iter().zip(&letter_img) {
            axpy(&mut v, c, img);
        }
        v
    };
    let generators: Vec<Vector> = (0..a.dim()).map(|i| image(&a.basis(i))).collect();
    // sigma on a normal word: reversed product of the images of sigma(letter)
    let sig_letter: Vec<Vector> = split.letters.iter().map(|i| image(&p.awi.apply(&a.basis(*i)))).collect();
    let mut sigma = Matrix::zeros(&field, dn, dn);
    for (col, w) in nwords.iter().enumerate() {
        let mut acc = carrier.one();
        for x in w.iter().rev() {
            acc = carrier.mul(&acc, &sig_letter[*x as usize]);
        }
        for (r, c) in acc.into_iter().enumerate() {
            sigma.set(r, col, c);
        }
    }
    let involution = involution_attach(carrier.clone(), sigma, None)?;
    let structure = structure_of(&carrier, &[])?;
    Ok(CliffordAlgebra {
        carrier,
        generators,
        involution,
        structure,
        basis: CliffordBasis::Words { words: nwords, letters: split.letters.clone() },
    })
}

// ---------------------------------------------------------------------------
// Comparison in the split case

#[derive(Clone, Debug)]
pub struct SplitComparison {
    pub pair_algebra: CliffordAlgebra,
    pub even_algebra: CliffordAlgebra,
    /// Columns: images of the pair algebra's basis in C0.
    pub map: Matrix,
    pub verdict: HomVerdict,
    pub bijective: bool,
}

/// The canonical map C(End V, sigma_q, f_q) -> C0(V, q), class of
/// phi_q(v (x) w) -> v w, checked as an isomorphism of algebras with involution.
pub fn split_compare(q: &QuadraticSpace) -> Result<SplitComparison> {
    let p = pair_from_form(q)?;
    let cp = clifford_of_pair(&p)?;
    let c0 = clifford_even(q)?;
    let f = q.field().clone();
    let n = q.dim();
    let binv = q.polar_matrix().inverse().ok_or_else(|| invalid!("singular form"))?;
    let mut rw = Rewriter::new(q);
    let mut ers = |r: usize, s: usize| -> Vector {
        let mut v = c0.carrier.zero();
        for (mask, c) in rw.mono_mul(1u32 << r, 1u32 << s) {
            let k = c0.monomial_index(mask).expect("even monomial");
            v[k] = &v[k] + &c;
        }
        v
    };
    // psi(M) = sum (M B^-1)_rs e_r e_s
    let mut psi_basis: Vec<Vector> = Vec::with_capacity(n * n);
    let mut prods = vec![vec![Vec::new(); n]; n];
    for r in 0..n {
        for s in 0..n {
            prods[r][s] = ers(r, s);
        }
    }
    for idx in 0..n * n {
        let (i, j) = (idx / n, idx % n);
        // E_ij B^-1 has row i equal to row j of B^-1
        let mut v = c0.carrier.zero();
        for s in 0..n {
            let c = binv.get(j, s);
            if !c.is_zero() {
                axpy(&mut v, c, &prods[i][s]);
            }
        }
        psi_basis.push(v);
    }
    let CliffordBasis::Words { words, letters } = &cp.basis else {
        return Err(Error::Certification("pair algebra lacks a word basis".into()));
    };
    let mut cols = Vec::with_capacity(words.len());
    for w in words {
        let mut acc = c0.carrier.one();
        for x in w {
            acc = c0.carrier.mul(&acc, &psi_basis[letters[*x as usize]]);
        }
        cols.push(acc);
    }
    let map = Matrix::from_cols(&f, c0.dim(), &cols)?;
    let verdict = hom_verify(
        &map,
        &cp.carrier,
        &c0.carrier,
        Some((&cp.involution.sigma, &c0.involution.sigma)),
    );
    let bijective = cp.dim() == c0.dim() && map.rank() == c0.dim();
    Ok(SplitComparison { pair_algebra: cp, even_algebra: c0, map, verdict, bijective })
}

// ---------------------------------------------------------------------------
// Structure reports

/// Type of the canonical involution on the even Clifford algebra of a pair
/// (or space) of degree n.
pub fn expected_involution_type(n: usize, char_two: bool) -> InvolutionType {
    if n % 2 == 0 {
        let k = n / 2;
        if k % 2 == 1 {
            InvolutionType::Unitary
        } else if !char_two && k % 4 == 0 {
            InvolutionType::Orthogonal
        } else {
            InvolutionType::Symplectic
        }
    } else if n == 1 || (!char_two && (n % 8 == 1 || n % 8 == 7)) {
        InvolutionType::Orthogonal
    } else {
        InvolutionType::Symplectic
    }
}

#[derive(Clone, Debug)]
pub struct CliffordReport {
    pub center: Option<EtaleQuadratic>,
    pub split: bool,
    /// e C and (1 - e) C for the central idempotent e, when Z splits.
    pub factors: Option<(StructureAlgebra, StructureAlgebra)>,
    /// Brauer classes of the factors when they are quaternion algebras.
    pub factor_classes: Option<(BrauerClass2, BrauerClass2)>,
    pub involution_type: InvolutionType,
    pub degree: usize,
}

/// Center, factors and involution type, checked against the type table.
pub fn clifford_structure(c: &CliffordAlgebra, n: usize) -> Result<CliffordReport> {
    let f = c.field().clone();
    let t = involution_type(&c.involution)?;
    let want = expected_involution_type(n, f.is_char_two());
    if t != want {
        return Err(Error::Certification(alloc::format!(
            "canonical involution is {}, the type table gives {} for n = {n}",
            t.name(),
            want.name()
        )));
    }
    let rep = &c.structure.center;
    if n % 2 == 0 && rep.basis.len() != 2 {
        return Err(Error::Certification(alloc::format!("center has dimension {}", rep.basis.len())));
    }
    if n % 2 == 1 && rep.basis.len() != 1 {
        return Err(Error::Certification(alloc::format!("center has dimension {}", rep.basis.len())));
    }
    let mut factors = None;
    let mut factor_classes = None;
    if let Some(e) = &rep.idempotent {
        let one_minus = crate::linalg::sub(&c.carrier.one(), e);
        let plus = corner(&c.carrier, e)?;
        let minus = corner(&c.carrier, &one_minus)?;
        if plus.dim() == 4 && minus.dim() == 4 {
            factor_classes = Some((quaternion_class(&plus)?, quaternion_class(&minus)?));
        }
        factors = Some((plus, minus));
    }
    Ok(CliffordReport {
        center: c.structure.center_algebra.clone(),
        split: rep.idempotent.is_some(),
        factors,
        factor_classes,
        involution_type: t,
        degree: c.structure.degree,
    })
}

/// e A for a central idempotent e, with unit e.
pub fn corner(a: &StructureAlgebra, e: &[Elem]) -> Result<StructureAlgebra> {
    let f = a.field().clone();
    let l = a.left_matrix(e);
    let basis = crate::algebra::image_basis(&l);
    let coords = Coordinates::new(&f, a.dim(), &basis)?;
    let d = basis.len();
    let mut table = Vec::with_capacity(d * d);
    for x in &basis {
        for y in &basis {
            let c = coords.coords(&a.mul(x, y)).ok_or_else(|| invalid!("idempotent is not central"))?;
            table.push(crate::algebra::to_sparse(&c));
        }
    }
    let unit = coords.coords(e).ok_or_else(|| invalid!("idempotent outside its corner"))?;
    let verify = if d <= 64 { Verify::Full } else { Verify::Trusted };
    StructureAlgebra::from_table(&f, d, table, unit, None, Vec::new(), alloc::format!("corner of {}", a.provenance()), verify)
}

/// Brauer class of a four-dimensional central simple algebra, read off a
/// quaternion basis u, v with u^2 = a, v^2 = b, uv = -vu. Over a finite field
/// the class is trivial.
pub fn quaternion_class(a: &StructureAlgebra) -> Result<BrauerClass2> {
    let f = a.field().clone();
    if f.order().is_some() {
        return Ok(BrauerClass2::trivial(ClassBase::of_field(&f)));
    }
    let (x, y) = quaternion_symbol(a)?;
    BrauerClass2::symbol(x.to_rational()?, y.to_rational()?)
}

/// (a, b) with A = (a, b), characteristic not 2.
pub fn quaternion_symbol(a: &StructureAlgebra) -> Result<(Elem, Elem)> {
    let f = a.field().clone();
    if a.dim() != 4 || f.is_char_two() {
        return Err(invalid!("expected a quaternion algebra outside characteristic 2"));
    }
    let ones = Coordinates::new(&f, 4, &[a.one()])?;
    let scalar_sq = |x: &Vector| -> Option<Elem> {
        let c = ones.coords(&a.mul(x, x))?;
        if c[0].is_zero() {
            None
        } else {
            Some(c[0].clone())
        }
    };
    let tr: Vec<Elem> = (0..4).map(|k| a.left_matrix(&a.basis(k)).trace()).collect();
    let pure = Matrix::from_rows(&f, vec![tr])?.kernel();
    if pure.len() != 3 {
        return Err(invalid!("not a quaternion algebra"));
    }
    let pick = |span: &[Vector]| -> Option<(Vector, Elem)> {
        for c in 0..24i64 {
            let mut x = span[0].clone();
            let mut p = f.from_i64(c);
            for s in &span[1..] {
                axpy(&mut x, &p, s);
                p = &p * &f.from_i64(c);
            }
            if let Some(sq) = scalar_sq(&x) {
                return Some((x, sq));
            }
            for s in span {
                if let Some(sq) = scalar_sq(s) {
                    return Some((s.clone(), sq));
                }
            }
        }
        None
    };
    let (u, ua) = pick(&pure).ok_or_else(|| invalid!("no invertible pure quaternion found"))?;
    // pure v with uv + vu = 0
    let cols: Vec<Vector> =
        pure.iter().map(|v| crate::linalg::add(&a.mul(&u, v), &a.mul(v, &u))).collect();
    let k = Matrix::from_cols(&f, 4, &cols)?.kernel();
    let anti: Vec<Vector> = k
        .iter()
        .map(|c| {
            let mut v = a.zero();
            for (ci, p) in c.iter().zip(&pure) {
                axpy(&mut v, ci, p);
            }
            v
        })
        .collect();
    if anti.is_empty() {
        return Err(invalid!("not a quaternion algebra"));
    }
    let (_, vb) = pick(&anti).ok_or_else(|| invalid!("no invertible anticommuting element found"))?;
    Ok((ua, vb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::quaternion;
    use crate::qpair::pair_on_quaternion_tensor;

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn full_small_examples() {
        let f = q();
        let c = clifford_full(&QuadraticSpace::diag_i64(&f, &[1, 1]).unwrap()).unwrap();
        assert_eq!(c.dim(), 4);
        let e12 = c.carrier.basis(c.monomial_index(0b11).unwrap());
        assert_eq!(c.carrier.mul(&e12, &e12), c.carrier.scalar(&f.from_i64(-1)));
        let g = Field::prime_field(2).unwrap();
        let h = QuadraticSpace::from_matrix(&Matrix::from_i64(&g, &[&[0, 1], &[0, 0]])).unwrap();
        let c = clifford_full(&h).unwrap();
        let (e1, e2) = (&c.generators[0], &c.generators[1]);
        let s = crate::linalg::add(&c.carrier.mul(e1, e2), &c.carrier.mul(e2, e1));
        assert_eq!(s, c.carrier.one());
    }

    #[test]
    fn even_small_examples() {
        let f = q();
        let c = clifford_even(&QuadraticSpace::diag_i64(&f, &[1, -1]).unwrap()).unwrap();
        assert_eq!(c.dim(), 2);
        assert!(c.structure.center.idempotent.is_some());
        let c = clifford_even(&QuadraticSpace::diag_i64(&f, &[1, 1, 1]).unwrap()).unwrap();
        assert_eq!(c.dim(), 4);
        let (x, y) = quaternion_symbol(&c.carrier).unwrap();
        let cls = BrauerClass2::symbol(x.to_rational().unwrap(), y.to_rational().unwrap()).unwrap();
        assert!(cls.equals(&BrauerClass2::from_ints(&[(-1, -1)]).unwrap()).unwrap());
        let r = clifford_structure(&c, 3).unwrap();
        assert_eq!(r.involution_type, InvolutionType::Symplectic);
    }

    #[test]
    fn sandwich_dimensions() {
        let f = q();
        let p = pair_from_form(&QuadraticSpace::diag_i64(&f, &[1, 1]).unwrap()).unwrap();
        let sw = sandwich_and_j2(&p.awi).unwrap();
        // Sand(u) ranges over maps killing the one-dimensional Alt
        assert_eq!(sw.basis.len(), 12);
        let a = p.algebra();
        let x = vec![f.from_i64(1), f.from_i64(2), f.from_i64(-3), f.from_i64(5)];
        let s = p.awi.apply(&x);
        for (u, m) in sw.basis.iter().zip(&sw.sand) {
            assert_eq!(m.mul_vec(&x).unwrap(), m.mul_vec(&s).unwrap());
            assert_eq!(m.mul_vec(&x).unwrap(), sand_apply(a, u, &x));
        }
    }

    #[test]
    fn pair_algebra_degree_two() {
        let f = q();
        let cmp = split_compare(&QuadraticSpace::diag_i64(&f, &[1, -1]).unwrap()).unwrap();
        assert_eq!(cmp.pair_algebra.dim(), 2);
        assert!(cmp.verdict.ok(), "{:?}", cmp.verdict);
        assert!(cmp.bijective);
        let g = Field::prime_field(2).unwrap();
        let h = QuadraticSpace::from_matrix(&Matrix::from_i64(&g, &[&[0, 1], &[0, 0]])).unwrap();
        let cmp = split_compare(&h).unwrap();
        assert!(cmp.verdict.ok() && cmp.bijective);
    }

    #[test]
    fn pair_algebra_degree_four() {
        let f = q();
        let sq = QuadraticSpace::diag_i64(&f, &[1, 1, 1, 1]).unwrap();
        let cmp = split_compare(&sq).unwrap();
        assert_eq!(cmp.pair_algebra.dim(), 8);
        assert!(cmp.verdict.ok() && cmp.bijective);
        assert!(cmp.pair_algebra.structure.center.idempotent.is_some());
    }

    #[test]
    fn quaternion_tensor_clifford() {
        let f = q();
        let q1 = quaternion(&f, &f.from_i64(-1), &f.from_i64(-1)).unwrap();
        let q2 = quaternion(&f, &f.from_i64(2), &f.from_i64(5)).unwrap();
        let p = pair_on_quaternion_tensor(&q1, &q2).unwrap();
        let c = clifford_of_pair(&p).unwrap();
        let r = clifford_structure(&c, 4).unwrap();
        assert!(r.split);
        let (c1, c2) = r.factor_classes.unwrap();
        let k1 = BrauerClass2::from_ints(&[(-1, -1)]).unwrap();
        let k2 = BrauerClass2::from_ints(&[(2, 5)]).unwrap();
        let direct = c1.equals(&k1).unwrap() && c2.equals(&k2).unwrap();
        let swapped = c1.equals(&k2).unwrap() && c2.equals(&k1).unwrap();
        assert!(direct || swapped);
    }

    #[test]
    fn type_table() {
        assert_eq!(expected_involution_type(6, false), InvolutionType::Unitary);
        assert_eq!(expected_involution_type(5, false), InvolutionType::Symplectic);
        assert_eq!(expected_involution_type(1, true), InvolutionType::Orthogonal);
        assert_eq!(expected_involution_type(8, false), InvolutionType::Orthogonal);
        assert_eq!(expected_involution_type(8, true), InvolutionType::Symplectic);
    }
    #[test]
    fn degree_four_over_finite_fields() {
        let g3 = Field::prime_field(3).unwrap();
        let cmp = split_compare(&QuadraticSpace::diag_i64(&g3, &[1, 1, 1, 2]).unwrap()).unwrap();
        assert!(cmp.verdict.ok() && cmp.bijective);
        let g2 = Field::prime_field(2).unwrap();
        let h = QuadraticSpace::from_matrix(&Matrix::from_i64(
            &g2,
            &[&[0, 1, 0, 0], &[0, 0, 0, 0], &[0, 0, 1, 1], &[0, 0, 0, 1]],
        ))
        .unwrap();
        let cmp = split_compare(&h).unwrap();
        assert!(cmp.verdict.ok() && cmp.bijective);
        let r = clifford_structure(&cmp.pair_algebra, 4).unwrap();
        assert_eq!(r.involution_type, InvolutionType::Symplectic);
    }

    #[test]
    fn char2_quaternion_tensor() {
        let g = Field::prime_field(2).unwrap();
        let q1 = quaternion(&g, &g.one(), &g.one()).unwrap();
        let p = pair_on_quaternion_tensor(&q1, &q1).unwrap();
        let c = clifford_of_pair(&p).unwrap();
        assert_eq!(c.dim(), 8);
        let r = clifford_structure(&c, 4).unwrap();
        assert!(r.split);
        let (a, b) = r.factors.unwrap();
        assert_eq!((a.dim(), b.dim()), (4, 4));
    }
}
