use std::cell::Cell;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::cyclotomic::{CycElem, RingContext};
use crate::matrices::CycMatrix;

/// The operations Berkowitz's algorithm needs from a commutative ring.
pub trait CommutativeRing {
    type Elem: Clone;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
}

impl CommutativeRing for RingContext {
    type Elem = CycElem;
    fn zero(&self) -> CycElem {
        RingContext::zero(self)
    }
    fn one(&self) -> CycElem {
        RingContext::one(self)
    }
    fn add(&self, a: &CycElem, b: &CycElem) -> CycElem {
        a + b
    }
    fn sub(&self, a: &CycElem, b: &CycElem) -> CycElem {
        a - b
    }
    fn mul(&self, a: &CycElem, b: &CycElem) -> CycElem {
        a * b
    }
    fn neg(&self, a: &CycElem) -> CycElem {
        -a
    }
    fn is_zero(&self, a: &CycElem) -> bool {
        a.is_zero()
    }
}

/// The integers with arbitrary precision.
#[derive(Clone, Copy, Debug, Default)]
pub struct Integers;

impl CommutativeRing for Integers {
    type Elem = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::from(1)
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
}

/// i128 arithmetic that records overflow instead of wrapping.
#[derive(Debug, Default)]
pub struct CheckedI128 {
    overflowed: Cell<bool>,
}

impl CheckedI128 {
    pub fn overflowed(&self) -> bool {
        self.overflowed.get()
    }

    fn guard(&self, r: Option<i128>) -> i128 {
        r.unwrap_or_else(|| {
            self.overflowed.set(true);
            0
        })
    }
}

impl CommutativeRing for CheckedI128 {
    type Elem = i128;
    fn zero(&self) -> i128 {
        0
    }
    fn one(&self) -> i128 {
        1
    }
    fn add(&self, a: &i128, b: &i128) -> i128 {
        self.guard(a.checked_add(*b))
    }
    fn sub(&self, a: &i128, b: &i128) -> i128 {
        self.guard(a.checked_sub(*b))
    }
    fn mul(&self, a: &i128, b: &i128) -> i128 {
        self.guard(a.checked_mul(*b))
    }
    fn neg(&self, a: &i128) -> i128 {
        self.guard(a.checked_neg())
    }
    fn is_zero(&self, a: &i128) -> bool {
        *a == 0
    }
}

/// Coefficients c_0..c_n of det(xI − M) = Σ c_i x^{n−i}, for a row-major
/// n×n matrix, without any division.
///
/// Samuelson's recursion peels off the top-left entry: for the trailing
/// submatrix [[a, R], [C, A₁]] the new polynomial is the Toeplitz product of
/// (1, −a, −RC, −RA₁C, −RA₁²C, …) with the polynomial of A₁.
pub fn berkowitz<R: CommutativeRing>(ring: &R, n: usize, m: &[R::Elem]) -> Vec<R::Elem> {
    assert_eq!(m.len(), n * n, "matrix must be square");
    if n == 0 {
        return vec![ring.one()];
    }
    let at = |i: usize, j: usize| &m[i * n + j];
    let mut poly = vec![ring.one(), ring.neg(at(n - 1, n - 1))];
    for i in (0..n - 1).rev() {
        let size = n - 1 - i;
        let mut t = Vec::with_capacity(size + 2);
        t.push(ring.one());
        t.push(ring.neg(at(i, i)));
        let mut v: Vec<R::Elem> = (i + 1..n).map(|r| at(r, i).clone()).collect();
        for step in 0..size {
            let mut dot = ring.zero();
            for (c, x) in (i + 1..n).zip(&v) {
                let r = at(i, c);
                if !ring.is_zero(r) && !ring.is_zero(x) {
                    dot = ring.add(&dot, &ring.mul(r, x));
                }
            }
            t.push(ring.neg(&dot));
            if step + 1 < size {
                v = (i + 1..n)
                    .map(|r| {
                        let mut acc = ring.zero();
                        for (c, x) in (i + 1..n).zip(&v) {
                            let e = at(r, c);
                            if !ring.is_zero(e) && !ring.is_zero(x) {
                                acc = ring.add(&acc, &ring.mul(e, x));
                            }
                        }
                        acc
                    })
                    .collect();
            }
        }
        let mut next = Vec::with_capacity(size + 2);
        for j in 0..size + 2 {
            let mut acc = ring.zero();
            for k in 0..=j.min(size) {
                if !ring.is_zero(&t[j - k]) && !ring.is_zero(&poly[k]) {
                    acc = ring.add(&acc, &ring.mul(&t[j - k], &poly[k]));
                }
            }
            next.push(acc);
        }
        poly = next;
    }
    poly
}

/// Characteristic polynomial coefficients b_0..b_n of a matrix over Z[ζ].
pub fn charpoly_cyc(m: &CycMatrix) -> Vec<CycElem> {
    berkowitz(m.ring(), m.n(), m.cells())
}

/// Characteristic polynomial of an integer matrix: i128 first, falling
/// back to big integers on overflow.
pub fn charpoly_int(n: usize, m: &[i64]) -> Vec<BigInt> {
    let fast = CheckedI128::default();
    let cells: Vec<i128> = m.iter().map(|&x| x as i128).collect();
    let coeffs = berkowitz(&fast, n, &cells);
    if !fast.overflowed() {
        return coeffs.into_iter().map(BigInt::from).collect();
    }
    let cells: Vec<BigInt> = m.iter().map(|&x| BigInt::from(x)).collect();
    berkowitz(&Integers, n, &cells)
}
