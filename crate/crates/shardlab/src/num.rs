//! Exact scalar arithmetic and dense linear algebra over ℚ and ℚ(√5).
//!
//! Everything downstream assumes comparisons are exact; there is no floating
//! point anywhere in the crate.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

pub type Rat = BigRational;

/// An exact ordered field.
pub trait Scalar:
    Clone
    + PartialEq
    + Eq
    + Ord
    + Hash
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Sized
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_rat(q: Rat) -> Self;
    fn is_zero(&self) -> bool;
    /// Sign in the field's unique order compatible with the reals.
    fn signum(&self) -> Ordering;
    fn recip(&self) -> Self;
    /// Scale a nonzero vector to its canonical representative on the same
    /// line: first nonzero coordinate positive, data primitive. Two vectors
    /// differing by any nonzero field scalar canonicalize identically.
    fn canonicalize_vector(v: &mut [Self]);

    /// Like `canonicalize_vector` but only by a positive field scalar, so the
    /// direction of the ray is preserved.
    fn canonicalize_ray(v: &mut [Self]) {
        let sign = v
            .iter()
            .find(|x| !x.is_zero())
            .map(|x| x.signum())
            .unwrap_or(Ordering::Equal);
        Self::canonicalize_vector(v);
        if sign == Ordering::Less {
            for x in v.iter_mut() {
                *x = -x.clone();
            }
        }
    }

    fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

fn rat_canonicalize(parts: &mut [&mut Rat]) {
    // Multiply by the positive rational that makes all entries coprime integers.
    let mut denom_lcm = BigInt::one();
    for p in parts.iter() {
        denom_lcm = num::integer::lcm(denom_lcm, p.denom().clone());
    }
    let mut numer_gcd = BigInt::zero();
    for p in parts.iter() {
        let scaled = p.numer() * (&denom_lcm / p.denom());
        numer_gcd = num::integer::gcd(numer_gcd, scaled);
    }
    if numer_gcd.is_zero() {
        return;
    }
    let factor = Rat::new(denom_lcm, numer_gcd);
    for p in parts.iter_mut() {
        **p = &**p * &factor;
    }
}

impl Scalar for Rat {
    fn zero() -> Self {
        <Rat as Zero>::zero()
    }
    fn one() -> Self {
        <Rat as One>::one()
    }
    fn from_i64(n: i64) -> Self {
        Rat::from_integer(BigInt::from(n))
    }
    fn from_rat(q: Rat) -> Self {
        q
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn signum(&self) -> Ordering {
        if Zero::is_zero(self) {
            Ordering::Equal
        } else if self.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
    fn recip(&self) -> Self {
        BigRational::recip(self)
    }
    fn canonicalize_vector(v: &mut [Self]) {
        let lead_sign = v
            .iter()
            .find(|x| !Zero::is_zero(*x))
            .map(Scalar::signum)
            .unwrap_or(Ordering::Equal);
        if lead_sign == Ordering::Equal {
            return;
        }
        let mut parts: Vec<&mut Rat> = v.iter_mut().collect();
        rat_canonicalize(&mut parts);
        if lead_sign == Ordering::Less {
            for x in v.iter_mut() {
                *x = -x.clone();
            }
        }
    }
}

/// Element a + b√5 of the real quadratic field ℚ(√5).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Sqrt5 {
    pub a: Rat,
    pub b: Rat,
}

impl Sqrt5 {
    pub fn new(a: Rat, b: Rat) -> Self {
        Sqrt5 { a, b }
    }
    pub fn root5() -> Self {
        Sqrt5 {
            a: <Rat as Zero>::zero(),
            b: <Rat as One>::one(),
        }
    }
    /// (1+√5)/2, the golden ratio.
    pub fn golden() -> Self {
        let half = Rat::new(BigInt::one(), BigInt::from(2));
        Sqrt5 {
            a: half.clone(),
            b: half,
        }
    }
}

impl fmt::Display for Sqrt5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.b) {
            write!(f, "{}", self.a)
        } else if Zero::is_zero(&self.a) {
            write!(f, "{}√5", self.b)
        } else {
            write!(f, "{}+{}√5", self.a, self.b)
        }
    }
}

impl Add for Sqrt5 {
    type Output = Sqrt5;
    fn add(self, o: Sqrt5) -> Sqrt5 {
        Sqrt5::new(self.a + o.a, self.b + o.b)
    }
}
impl Sub for Sqrt5 {
    type Output = Sqrt5;
    fn sub(self, o: Sqrt5) -> Sqrt5 {
        Sqrt5::new(self.a - o.a, self.b - o.b)
    }
}
impl Neg for Sqrt5 {
    type Output = Sqrt5;
    fn neg(self) -> Sqrt5 {
        Sqrt5::new(-self.a, -self.b)
    }
}
impl Mul for Sqrt5 {
    type Output = Sqrt5;
    fn mul(self, o: Sqrt5) -> Sqrt5 {
        let five = Rat::from_integer(BigInt::from(5));
        Sqrt5::new(
            &self.a * &o.a + &five * &self.b * &o.b,
            &self.a * &o.b + &self.b * &o.a,
        )
    }
}
impl Div for Sqrt5 {
    type Output = Sqrt5;
    fn div(self, o: Sqrt5) -> Sqrt5 {
        self * Scalar::recip(&o)
    }
}

impl Scalar for Sqrt5 {
    fn zero() -> Self {
        Sqrt5::new(<Rat as Zero>::zero(), <Rat as Zero>::zero())
    }
    fn one() -> Self {
        Sqrt5::new(<Rat as One>::one(), <Rat as Zero>::zero())
    }
    fn from_i64(n: i64) -> Self {
        Sqrt5::new(<Rat as Scalar>::from_i64(n), <Rat as Zero>::zero())
    }
    fn from_rat(q: Rat) -> Self {
        Sqrt5::new(q, <Rat as Zero>::zero())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }
    fn signum(&self) -> Ordering {
        let sa = Scalar::signum(&self.a);
        let sb = Scalar::signum(&self.b);
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            _ => {
                // a and b have opposite signs: compare a² with 5b².
                let a2 = &self.a * &self.a;
                let b2 = &self.b * &self.b * Rat::from_integer(BigInt::from(5));
                match a2.cmp(&b2) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }
    fn recip(&self) -> Self {
        // 1/(a+b√5) = (a-b√5)/(a²-5b²)
        let norm = &self.a * &self.a - &self.b * &self.b * Rat::from_integer(BigInt::from(5));
        assert!(!Zero::is_zero(&norm), "division by zero in ℚ(√5)");
        Sqrt5::new(&self.a / &norm, -(&self.b / &norm))
    }
    fn canonicalize_vector(v: &mut [Self]) {
        let lead = match v.iter().find(|x| !Scalar::is_zero(*x)) {
            Some(x) => x.clone(),
            None => return,
        };
        let inv = Scalar::recip(&lead);
        for x in v.iter_mut() {
            *x = x.clone() * inv.clone();
        }
        // Entries are now of the form p + q√5 with leading entry 1; a positive
        // rational rescale keeps the leading entry positive.
        let mut parts: Vec<&mut Rat> = Vec::with_capacity(v.len() * 2);
        for x in v.iter_mut() {
            parts.push(&mut x.a);
            parts.push(&mut x.b);
        }
        rat_canonicalize(&mut parts);
    }
}

/// Total order: Sqrt5 as a real number.
impl PartialOrd for Sqrt5 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Sqrt5 {
    fn cmp(&self, other: &Self) -> Ordering {
        Scalar::signum(&(self.clone() - other.clone()))
    }
}

pub fn dot<F: Scalar>(u: &[F], v: &[F]) -> F {
    assert_eq!(u.len(), v.len(), "dimension mismatch");
    let mut acc = F::zero();
    for (a, b) in u.iter().zip(v) {
        acc = acc + a.clone() * b.clone();
    }
    acc
}

pub fn vec_add<F: Scalar>(u: &[F], v: &[F]) -> Vec<F> {
    u.iter()
        .zip(v)
        .map(|(a, b)| a.clone() + b.clone())
        .collect()
}

pub fn vec_sub<F: Scalar>(u: &[F], v: &[F]) -> Vec<F> {
    u.iter()
        .zip(v)
        .map(|(a, b)| a.clone() - b.clone())
        .collect()
}

pub fn vec_scale<F: Scalar>(c: &F, v: &[F]) -> Vec<F> {
    v.iter().map(|x| c.clone() * x.clone()).collect()
}

pub fn vec_neg<F: Scalar>(v: &[F]) -> Vec<F> {
    v.iter().map(|x| -x.clone()).collect()
}

pub fn vec_from_i64<F: Scalar>(v: &[i64]) -> Vec<F> {
    v.iter().map(|&x| F::from_i64(x)).collect()
}

/// Reduced row echelon form in place. Returns the pivot column of each
/// nonzero row, in order.
pub fn rref<F: Scalar>(m: &mut Vec<Vec<F>>) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for j in c..cols {
            m[r][j] = m[r][j].clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    m[i][j] = m[i][j].clone() - f.clone() * m[r][j].clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    m.truncate(r);
    pivots
}

pub fn rank<F: Scalar>(vectors: &[Vec<F>]) -> usize {
    let mut m: Vec<Vec<F>> = vectors.to_vec();
    rref(&mut m).len()
}

/// Basis of the kernel of the row matrix, one vector per free column.
pub fn kernel_basis<F: Scalar>(rows: &[Vec<F>], cols: usize) -> Vec<Vec<F>> {
    let mut m: Vec<Vec<F>> = rows.to_vec();
    let pivots = rref(&mut m);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![F::zero(); cols];
        v[free] = F::one();
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solve A x = b for square or overdetermined consistent systems; returns
/// None when inconsistent or underdetermined.
pub fn solve<F: Scalar>(a: &[Vec<F>], b: &[F]) -> Option<Vec<F>> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.contains(&cols) {
        return None; // pivot in the augmented column: inconsistent
    }
    if pivots.len() < cols {
        return None;
    }
    let mut x = vec![F::zero(); cols];
    for (row, &pc) in m.iter().zip(&pivots) {
        x[pc] = row[cols].clone();
    }
    Some(x)
}

pub fn mat_mul<F: Scalar>(a: &[Vec<F>], b: &[Vec<F>]) -> Vec<Vec<F>> {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![F::zero(); m]; n];
    for i in 0..n {
        for (l, brow) in b.iter().enumerate().take(k) {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] = out[i][j].clone() + a[i][l].clone() * brow[j].clone();
            }
        }
    }
    out
}

pub fn identity<F: Scalar>(n: usize) -> Vec<Vec<F>> {
    let mut m = vec![vec![F::zero(); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = F::one();
    }
    m
}

pub fn mat_apply<F: Scalar>(a: &[Vec<F>], v: &[F]) -> Vec<F> {
    a.iter().map(|row| dot(row, v)).collect()
}

/// Canonical row space form: RREF with canonicalized rows. Equal row spaces
/// give byte-identical results, so this doubles as a subspace identifier.
pub fn row_space_canonical<F: Scalar>(rows: &[Vec<F>]) -> Vec<Vec<F>> {
    let mut m = rows.to_vec();
    rref(&mut m);
    for row in m.iter_mut() {
        F::canonicalize_vector(row);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn sqrt5_sign() {
        // 2 - √5 < 0, 3 - √5 > 0
        let x = Sqrt5::new(q(2, 1), q(-1, 1));
        assert_eq!(Scalar::signum(&x), Ordering::Less);
        let y = Sqrt5::new(q(3, 1), q(-1, 1));
        assert_eq!(Scalar::signum(&y), Ordering::Greater);
        let g = Sqrt5::golden();
        let gg = g.clone() * g.clone();
        // golden ratio satisfies φ² = φ + 1
        assert_eq!(gg, g.clone() + Scalar::one());
    }

    #[test]
    fn sqrt5_recip() {
        let g = Sqrt5::golden();
        let r = Scalar::recip(&g);
        assert_eq!(g * r, Scalar::one());
    }

    #[test]
    fn rref_rank_kernel() {
        let rows: Vec<Vec<Rat>> = vec![
            vec![q(1, 1), q(2, 1), q(3, 1)],
            vec![q(2, 1), q(4, 1), q(6, 1)],
            vec![q(0, 1), q(1, 1), q(1, 1)],
        ];
        assert_eq!(rank(&rows), 2);
        let ker = kernel_basis(&rows, 3);
        assert_eq!(ker.len(), 1);
        for row in &rows {
            assert!(Scalar::is_zero(&dot(row, &ker[0])));
        }
    }

    #[test]
    fn solve_3x3() {
        let a: Vec<Vec<Rat>> = vec![
            vec![q(2, 1), q(-1, 1), q(0, 1)],
            vec![q(-1, 1), q(2, 1), q(-1, 1)],
            vec![q(0, 1), q(-1, 1), q(2, 1)],
        ];
        let b = vec![q(1, 1), q(1, 1), q(1, 1)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(mat_apply(&a, &x), b);
    }

    #[test]
    fn canonical_vector_scaling() {
        let mut v = vec![q(-2, 3), q(4, 3), q(0, 1)];
        <Rat as Scalar>::canonicalize_vector(&mut v);
        assert_eq!(v, vec![q(1, 1), q(-2, 1), q(0, 1)]);

        let mut w = vec![
            Sqrt5::new(q(0, 1), q(-1, 2)),
            Sqrt5::new(q(1, 1), q(1, 1)),
        ];
        let mut w2: Vec<Sqrt5> = w.iter().map(|x| x.clone() * Sqrt5::golden()).collect();
        <Sqrt5 as Scalar>::canonicalize_vector(&mut w);
        <Sqrt5 as Scalar>::canonicalize_vector(&mut w2);
        assert_eq!(w, w2);
        assert_eq!(Scalar::signum(&w[0]), Ordering::Greater);
    }
}
