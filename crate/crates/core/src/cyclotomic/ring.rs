use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::CycElem;
use crate::error::{Error, Result};

/// Largest root order accepted by [`RingContext::new`].
pub const MAX_Q: u32 = 1 << 12;

/// The ring Z[ζ_q] together with everything needed to compute in it and in
/// its real subring Z[ζ + ζ⁻¹].
///
/// Cloning is cheap; all clones share one immutable description.
#[derive(Clone)]
pub struct RingContext {
    inner: Arc<RingData>,
}

struct RingData {
    q: u32,
    prime_power: Option<(u32, u32)>,
    phi: usize,
    /// Coefficients of Φ_q, constant term first; monic.
    cyclo: Vec<i64>,
    /// Sparse power-basis coordinates of ζ^k for k in 0..q.
    zeta_pow: Vec<Vec<(usize, i64)>>,
    real: OnceLock<RealBasis>,
}

/// Data for moving between the power basis and the basis 1, ρ, …, ρ^{m-1}
/// of the real subring.
struct RealBasis {
    dim: usize,
    /// Power-basis coordinates of ρ^i for i < dim.
    rho_pows: Vec<Vec<BigInt>>,
    /// Rows of the power basis that determine a real element.
    pivots: Vec<usize>,
    /// `inv / den` is the inverse of the pivot rows of `rho_pows`.
    inv: Vec<Vec<BigInt>>,
    den: BigInt,
}

impl RingContext {
    /// Builds Z[ζ_q]. Fails for q < 2 or q above [`MAX_Q`].
    pub fn new(q: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::domain(format!("root order q must be at least 2, got {q}")));
        }
        if q > MAX_Q {
            return Err(Error::domain(format!("root order q = {q} exceeds the supported maximum {MAX_Q}")));
        }
        let prime_power = prime_power_decomposition(q);
        let cyclo_big = cyclotomic_polynomial(q);
        let cyclo = cyclo_big
            .iter()
            .map(|c| c.to_i64().ok_or_else(|| Error::domain("cyclotomic coefficient overflow")))
            .collect::<Result<Vec<_>>>()?;
        let phi = cyclo.len() - 1;
        let zeta_pow = zeta_power_table(q, &cyclo);
        let data = RingData { q, prime_power, phi, cyclo, zeta_pow, real: OnceLock::new() };
        Ok(Self { inner: Arc::new(data) })
    }

    pub fn q(&self) -> u32 {
        self.inner.q
    }

    /// Degree of Φ_q, i.e. the rank of Z[ζ_q].
    pub fn phi(&self) -> usize {
        self.inner.phi
    }

    pub fn cyclotomic_coeffs(&self) -> &[i64] {
        &self.inner.cyclo
    }

    /// `(p, f)` with q = p^f, or `None` when q is not a prime power.
    pub fn prime_power(&self) -> Option<(u32, u32)> {
        self.inner.prime_power
    }

    pub fn prime(&self) -> Option<u32> {
        self.inner.prime_power.map(|(p, _)| p)
    }

    pub fn is_prime_power(&self) -> bool {
        self.inner.prime_power.is_some()
    }

    pub fn is_power_of_two(&self) -> bool {
        matches!(self.inner.prime_power, Some((2, _)))
    }

    /// Rank of the real subring: φ(q)/2, or 1 for q = 2.
    pub fn real_dim(&self) -> usize {
        if self.q() == 2 {
            1
        } else {
            self.phi() / 2
        }
    }

    fn real_basis(&self) -> &RealBasis {
        self.inner.real.get_or_init(|| RealBasis::build(&self.inner))
    }

    pub(crate) fn same_ring(&self, other: &RingContext) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.q == other.inner.q
    }

    pub fn zero(&self) -> CycElem {
        CycElem::from_parts(self.clone(), vec![BigInt::zero(); self.phi()])
    }

    pub fn one(&self) -> CycElem {
        self.from_int(1)
    }

    pub fn from_int(&self, value: impl Into<BigInt>) -> CycElem {
        let mut coords = vec![BigInt::zero(); self.phi()];
        coords[0] = value.into();
        CycElem::from_parts(self.clone(), coords)
    }

    /// ζ^k for any integer k.
    pub fn zeta_pow(&self, k: i64) -> CycElem {
        let k = k.rem_euclid(self.q() as i64) as usize;
        let mut coords = vec![BigInt::zero(); self.phi()];
        for &(i, c) in &self.inner.zeta_pow[k] {
            coords[i] = BigInt::from(c);
        }
        CycElem::from_parts(self.clone(), coords)
    }

    pub fn zeta(&self) -> CycElem {
        self.zeta_pow(1)
    }

    pub fn one_minus_zeta(&self) -> CycElem {
        &self.one() - &self.zeta()
    }

    /// ρ = (1 − ζ)(1 − ζ⁻¹) = 2 − ζ − ζ⁻¹.
    pub fn rho(&self) -> CycElem {
        &(&self.from_int(2) - &self.zeta()) - &self.zeta_pow(-1)
    }

    /// Element with the given power-basis coordinates; longer inputs are
    /// reduced modulo Φ_q.
    pub fn element(&self, coords: Vec<BigInt>) -> CycElem {
        CycElem::from_parts(self.clone(), self.reduce(coords))
    }

    /// Element Σ c_k ζ^k for an arbitrary exponent-indexed coefficient list.
    pub fn from_zeta_coeffs(&self, coeffs: &[(i64, BigInt)]) -> CycElem {
        let mut raw = vec![BigInt::zero(); self.q() as usize];
        for (k, c) in coeffs {
            raw[k.rem_euclid(self.q() as i64) as usize] += c;
        }
        self.element(raw)
    }

    /// Reduces an arbitrary-length coordinate vector modulo Φ_q, using
    /// ζ^q = 1 and the precomputed images of ζ^k.
    pub(crate) fn reduce(&self, mut raw: Vec<BigInt>) -> Vec<BigInt> {
        let phi = self.phi();
        let q = self.q() as usize;
        if raw.len() <= phi {
            raw.resize(phi, BigInt::zero());
            return raw;
        }
        let mut out: Vec<BigInt> = raw.drain(..phi).collect();
        for (offset, c) in raw.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = (phi + offset) % q;
            for &(i, z) in &self.inner.zeta_pow[k] {
                out[i] += &c * z;
            }
        }
        out
    }

    /// Power-basis coordinates of ρ^i, i < real_dim.
    pub(crate) fn rho_power_coords(&self) -> &[Vec<BigInt>] {
        &self.real_basis().rho_pows
    }

    /// Solves Σ c_i ρ^i = a for integer c, returning `None` if `a` is not an
    /// integer combination of the ρ-powers.
    pub(crate) fn solve_real(&self, a: &[BigInt]) -> Option<Vec<BigInt>> {
        let real = self.real_basis();
        let mut c = Vec::with_capacity(real.dim);
        for row in &real.inv {
            let mut acc = BigInt::zero();
            for (x, &p) in row.iter().zip(&real.pivots) {
                acc += x * &a[p];
            }
            let (quot, rem) = acc.div_rem(&real.den);
            if !rem.is_zero() {
                return None;
            }
            c.push(quot);
        }
        // The pivot rows only pin down c; every other row must agree too.
        let mut check = vec![BigInt::zero(); self.phi()];
        for (ci, pow) in c.iter().zip(&real.rho_pows) {
            if ci.is_zero() {
                continue;
            }
            for (acc, x) in check.iter_mut().zip(pow) {
                *acc += ci * x;
            }
        }
        (check.as_slice() == a).then_some(c)
    }
}

impl fmt::Debug for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RingContext")
            .field("q", &self.q())
            .field("phi", &self.phi())
            .field("prime_power", &self.prime_power())
            .field("cyclo", &self.cyclotomic_coeffs())
            .finish()
    }
}

impl PartialEq for RingContext {
    fn eq(&self, other: &Self) -> bool {
        self.same_ring(other)
    }
}

impl Eq for RingContext {}

impl RealBasis {
    fn build(ring: &RingData) -> Self {
        let dim = if ring.q == 2 { 1 } else { ring.phi / 2 };
        let phi = ring.phi;
        let mul = |a: &[BigInt], b: &[BigInt]| -> Vec<BigInt> {
            let mut raw = vec![BigInt::zero(); 2 * phi];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    raw[i + j] += x * y;
                }
            }
            reduce_with(ring, raw)
        };
        let mut rho = vec![BigInt::zero(); ring.q as usize];
        rho[0] += 2;
        rho[1] -= 1;
        rho[ring.q as usize - 1] -= 1;
        let rho = reduce_with(ring, rho);
        let mut one = vec![BigInt::zero(); phi];
        one[0] = BigInt::one();
        let mut rho_pows = vec![one];
        while rho_pows.len() < dim {
            let next = mul(rho_pows.last().unwrap(), &rho);
            rho_pows.push(next);
        }

        // Row-reduce the phi x dim matrix M (columns = ρ-powers) over Q to
        // find dim independent rows and invert them.
        let m: Vec<Vec<BigRational>> = (0..phi)
            .map(|r| rho_pows.iter().map(|col| BigRational::from_integer(col[r].clone())).collect())
            .collect();
        let mut pivots = Vec::with_capacity(dim);
        let mut basis: Vec<(usize, Vec<BigRational>)> = Vec::with_capacity(dim);
        for (row, orig) in m.iter().enumerate() {
            if pivots.len() == dim {
                break;
            }
            let mut v = orig.clone();
            for (lead, b) in &basis {
                if !v[*lead].is_zero() {
                    let f = v[*lead].clone() / b[*lead].clone();
                    for (x, y) in v.iter_mut().zip(b) {
                        *x -= f.clone() * y.clone();
                    }
                }
            }
            if let Some(lead) = v.iter().position(|x| !x.is_zero()) {
                basis.push((lead, v));
                pivots.push(row);
            }
        }
        assert_eq!(pivots.len(), dim, "rho powers must be linearly independent");

        // Invert the square submatrix M[pivots, :] with Gauss-Jordan over Q.
        let square: Vec<Vec<BigRational>> = pivots.iter().map(|&r| m[r].clone()).collect();
        let inv_q = invert_rational(square);
        let den = inv_q
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let inv = inv_q
            .iter()
            .map(|row| row.iter().map(|x| x.numer() * (&den / x.denom())).collect())
            .collect();
        RealBasis { dim, rho_pows, pivots, inv, den }
    }
}

fn invert_rational(mut a: Vec<Vec<BigRational>>) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("singular matrix");
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = a[col][j].clone() / p.clone();
            inv[col][j] = inv[col][j].clone() / p.clone();
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = f.clone() * a[col][j].clone();
                    a[r][j] -= t;
                    let t = f.clone() * inv[col][j].clone();
                    inv[r][j] -= t;
                }
            }
        }
    }
    inv
}

fn reduce_with(ring: &RingData, mut raw: Vec<BigInt>) -> Vec<BigInt> {
    let phi = ring.phi;
    if raw.len() <= phi {
        raw.resize(phi, BigInt::zero());
        return raw;
    }
    let mut out: Vec<BigInt> = raw.drain(..phi).collect();
    for (offset, c) in raw.into_iter().enumerate() {
        let k = (phi + offset) % ring.q as usize;
        for &(i, z) in &ring.zeta_pow[k] {
            out[i] += &c * z;
        }
    }
    out
}

/// Returns `(p, f)` with q = p^f if q is a prime power.
pub fn prime_power_decomposition(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut f = 0;
    while rest % p == 0 {
        rest /= p;
        f += 1;
    }
    (rest == 1).then_some((p, f))
}

/// Coefficients of Φ_q, constant term first, from
/// Φ_q(x) = ∏_{d | q} (x^d − 1)^{μ(q/d)}.
pub fn cyclotomic_polynomial(q: u32) -> Vec<BigInt> {
    let divisors: Vec<u32> = (1..=q).filter(|d| q % d == 0).collect();
    let mut poly = vec![BigInt::one()];
    let binomial = |d: u32| {
        let mut b = vec![BigInt::zero(); d as usize + 1];
        b[0] = BigInt::from(-1);
        b[d as usize] = BigInt::one();
        b
    };
    for &d in divisors.iter().filter(|&&d| mobius(q / d) == 1) {
        let b = binomial(d);
        let mut out = vec![BigInt::zero(); poly.len() + d as usize];
        for (i, x) in poly.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        poly = out;
    }
    for &d in divisors.iter().filter(|&&d| mobius(q / d) == -1) {
        poly = div_monic(&poly, &binomial(d));
    }
    poly
}

fn mobius(mut n: u32) -> i32 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

fn div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(|r| r.is_zero()), "cyclotomic division must be exact");
    quot
}

fn zeta_power_table(q: u32, cyclo: &[i64]) -> Vec<Vec<(usize, i64)>> {
    let phi = cyclo.len() - 1;
    let mut table = Vec::with_capacity(q as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..q {
        table.push(
            cur.iter()
                .enumerate()
                .filter(|(_, c)| **c != 0)
                .map(|(i, c)| (i, *c))
                .collect(),
        );
        // Multiply by ζ: shift, then fold the top coefficient through Φ_q.
        let top = cur[phi - 1];
        for i in (1..phi).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for i in 0..phi {
                cur[i] -= top * cyclo[i];
            }
        }
    }
    table
}
