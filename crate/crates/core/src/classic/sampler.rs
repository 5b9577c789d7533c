use crate::classic::{CostCounters, SolverOutcome};
use crate::error::{Error, Result};
use crate::instance::{Instance, Subset};
use crate::limits;
use crate::numeric::random_prime_u64;
use crate::rng::RandomSource;
use crate::with_words;
use crate::word::SumWord;

/// Counts of subsets per residue class mod `q`, arranged so that uniform
/// samples from any class take one table walk of `n` steps.
#[derive(Clone, Debug)]
pub struct ResidueSampler {
    n: usize,
    modulus: u64,
    residues: Vec<u64>,
    target_residue: u64,
    /// Row `i` holds, for each residue `r`, the number of subsets of items
    /// `i..n` with sum ≡ r. Counts are at most `2^n`, exact in `u64`.
    table: Vec<u64>,
}

impl ResidueSampler {
    pub fn new(instance: &Instance, modulus: u64) -> Result<Self> {
        let n = instance.n();
        if n > 63 {
            return Err(Error::capacity("sampler items", n as u128, 63));
        }
        if modulus == 0 {
            return Err(Error::Domain("modulus must be positive".into()));
        }
        let q = modulus as usize;
        limits::check_table("residue count table", (n as u128 + 1) * q as u128, 8)?;
        let (residues, target_residue) = with_words!(instance, |w, t| (
            w.iter().map(|x| x.residue(modulus)).collect::<Vec<_>>(),
            t.residue(modulus)
        ));
        let mut table = vec![0u64; (n + 1) * q];
        table[n * q] = 1;
        for i in (0..n).rev() {
            let wi = residues[i] as usize;
            let (head, tail) = table.split_at_mut((i + 1) * q);
            let row = &mut head[i * q..];
            let next = &tail[..q];
            for r in 0..q {
                let shifted = if r >= wi { r - wi } else { r + q - wi };
                row[r] = next[r] + next[shifted];
            }
        }
        Ok(ResidueSampler {
            n,
            modulus,
            residues,
            target_residue,
            table,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn target_residue(&self) -> u64 {
        self.target_residue
    }

    /// `|{X ⊆ [n] : w(X) ≡ r (mod q)}|`.
    pub fn class_size(&self, residue: u64) -> u64 {
        self.table[(residue % self.modulus) as usize]
    }

    /// A uniform member of the residue class, or `None` if it is empty.
    pub fn sample(&self, residue: u64, rng: &mut RandomSource) -> Option<Subset> {
        let q = self.modulus;
        let qs = q as usize;
        let mut r = residue % q;
        if self.table[r as usize] == 0 {
            return None;
        }
        let mut mask = 0u64;
        for i in 0..self.n {
            let total = self.table[i * qs + r as usize];
            let rest = (r + q - self.residues[i]) % q;
            let with_item = self.table[(i + 1) * qs + rest as usize];
            if rng.below(total) < with_item {
                mask |= 1 << i;
                r = rest;
            }
        }
        debug_assert_eq!(r, 0);
        Some(Subset(mask))
    }
}

/// Lower end of the sampler's prime interval: `2^{⌈(1-σ)n/2⌉}`, at least 3.
pub fn sampler_modulus_bound(n: usize, sigma: f64) -> u64 {
    let bits = ((1.0 - sigma) * n as f64 / 2.0).ceil().max(0.0) as u32;
    (1u64 << bits.min(62)).max(3)
}

/// Samples uniformly from `{X : w(X) ≡ t (mod q)}` for a random prime `q` of
/// about `(1-σ)n/2` bits and returns the first exact solution drawn.
pub fn modular_sampler(
    instance: &Instance,
    sigma: f64,
    rng: &mut RandomSource,
    budget: u64,
) -> Result<SolverOutcome> {
    if !(0.0..=1.0).contains(&sigma) {
        return Err(Error::Domain(format!("sigma {sigma} outside [0, 1]")));
    }
    let q = random_prime_u64(sampler_modulus_bound(instance.n(), sigma), rng)?;
    let sampler = ResidueSampler::new(instance, q)?;
    let mut cost = CostCounters {
        sums_enumerated: (instance.n() as u64 + 1) * q,
        ..CostCounters::default()
    };
    let residue = sampler.target_residue();
    for _ in 0..budget {
        let Some(x) = sampler.sample(residue, rng) else {
            break;
        };
        cost.samples_drawn += 1;
        cost.steps += instance.n() as u64;
        if instance.verify(x) {
            return Ok(SolverOutcome::from_candidate(instance, Some(x), cost));
        }
    }
    Ok(SolverOutcome::none(cost))
}
