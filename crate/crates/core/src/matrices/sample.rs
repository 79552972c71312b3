use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Family, HermitianRootMatrix, RootMatrix, SeidelMatrix};
use crate::error::{Error, Result};

/// Draws uniform random matrices; draw i depends only on (seed, i).
///
/// Each draw uses its own ChaCha stream, so results do not depend on how
/// draws are split across threads.
#[derive(Clone, Copy, Debug)]
pub struct Sampler {
    pub n: usize,
    pub q: u32,
    pub family: Family,
    pub seed: u64,
}

impl Sampler {
    pub fn new(n: usize, q: u32, family: Family, seed: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::domain(format!("root order q must be at least 2, got {q}")));
        }
        Ok(Self { n, q, family, seed })
    }

    pub fn rng(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    pub fn draw(&self, index: u64) -> RootMatrix {
        let mut rng = self.rng(index);
        let m = self.n * self.n.saturating_sub(1) / 2;
        let upper: Vec<u32> = (0..m).map(|_| rng.random_range(0..self.q)).collect();
        match self.family {
            Family::Seidel => SeidelMatrix::from_upper(self.n, self.q, &upper).expect("valid codes").into(),
            Family::Hermitian => {
                let diag = (0..self.n)
                    .map(|_| if self.q % 2 == 0 && rng.random_bool(0.5) { -1 } else { 1 })
                    .collect();
                HermitianRootMatrix::from_upper(self.n, self.q, &upper, diag).expect("valid codes").into()
            }
        }
    }

    pub fn draw_hermitian(&self, index: u64) -> HermitianRootMatrix {
        self.draw(index).as_hermitian()
    }
}

/// Every matrix of a family in a fixed order, addressable by index.
#[derive(Clone, Copy, Debug)]
pub struct Enumeration {
    n: usize,
    q: u32,
    family: Family,
    diag_choices: u128,
    total: u128,
}

impl Enumeration {
    pub fn new(n: usize, q: u32, family: Family, budget: u128) -> Result<Self> {
        if q < 2 {
            return Err(Error::domain(format!("root order q must be at least 2, got {q}")));
        }
        let m = (n * n.saturating_sub(1) / 2) as u32;
        let diag_choices = if family == Family::Hermitian && q % 2 == 0 {
            1u128.checked_shl(n as u32).unwrap_or(u128::MAX)
        } else {
            1
        };
        let total = (q as u128)
            .checked_pow(m)
            .and_then(|t| t.checked_mul(diag_choices))
            .unwrap_or(u128::MAX);
        if total > budget {
            return Err(Error::Budget { needed: total, budget });
        }
        Ok(Self { n, q, family, diag_choices, total })
    }

    pub fn len(&self) -> u128 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// The matrix at position `index`; upper-triangle codes are the high
    /// digits (last entry fastest), diagonal signs the low ones.
    pub fn get(&self, index: u128) -> RootMatrix {
        assert!(index < self.total, "enumeration index out of range");
        let diag_bits = index % self.diag_choices;
        let mut rest = index / self.diag_choices;
        let m = self.n * self.n.saturating_sub(1) / 2;
        let mut upper = vec![0u32; m];
        for slot in upper.iter_mut().rev() {
            *slot = (rest % self.q as u128) as u32;
            rest /= self.q as u128;
        }
        match self.family {
            Family::Seidel => SeidelMatrix::from_upper(self.n, self.q, &upper).expect("valid codes").into(),
            Family::Hermitian => {
                let diag = (0..self.n)
                    .map(|i| if self.diag_choices > 1 && diag_bits >> (self.n - 1 - i) & 1 == 1 { -1 } else { 1 })
                    .collect();
                HermitianRootMatrix::from_upper(self.n, self.q, &upper, diag).expect("valid codes").into()
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = RootMatrix> + '_ {
        (0..self.total).map(move |i| self.get(i))
    }
}
