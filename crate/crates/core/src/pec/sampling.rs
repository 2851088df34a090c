use rand::Rng;

use crate::channels::{DensePauliChannel, SplChannel};
use crate::clifford::SignFlipMask;
use crate::error::{Error, Result};
use crate::pauli::PauliString;

/// A drawn correction: apply `pauli`, negate the masked angles, weight the outcome by `sign`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CorrectionSample {
    pub pauli: PauliString,
    pub sign: i8,
    pub flip_mask: SignFlipMask,
}

/// Inverse-CDF sampler over a signed quasi-probability distribution.
#[derive(Debug, Clone)]
pub struct QuasiSampler<K> {
    keys: Vec<K>,
    signs: Vec<i8>,
    cumulative: Vec<f64>,
    gamma: f64,
}

impl<K> QuasiSampler<K> {
    pub fn new<I: IntoIterator<Item = (K, f64)>>(entries: I) -> Result<QuasiSampler<K>> {
        let mut keys = Vec::new();
        let mut signs = Vec::new();
        let mut cumulative = Vec::new();
        let mut total = 0.0;
        for (k, c) in entries {
            if !c.is_finite() {
                return Err(Error::InvalidParameter("non-finite quasi-probability".into()));
            }
            if c == 0.0 {
                continue;
            }
            total += c.abs();
            keys.push(k);
            signs.push(if c < 0.0 { -1 } else { 1 });
            cumulative.push(total);
        }
        if keys.is_empty() {
            return Err(Error::InvalidParameter("empty quasi-probability distribution".into()));
        }
        Ok(QuasiSampler { keys, signs, cumulative, gamma: total })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Probability of drawing entry `i`.
    pub fn probability(&self, i: usize) -> f64 {
        let lo = if i == 0 { 0.0 } else { self.cumulative[i - 1] };
        (self.cumulative[i] - lo) / self.gamma
    }

    pub fn entries(&self) -> impl Iterator<Item = (&K, i8)> {
        self.keys.iter().zip(self.signs.iter().copied())
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (&K, i8) {
        let u = rng.random::<f64>() * self.gamma;
        let i = self.cumulative.partition_point(|&c| c <= u).min(self.keys.len() - 1);
        (&self.keys[i], self.signs[i])
    }
}

/// Draw `P_i` with probability `|c_i|/γ` from an inverse channel.
pub fn sample_local_correction<R: Rng + ?Sized>(inv: &DensePauliChannel, rng: &mut R) -> Result<CorrectionSample> {
    let sampler = QuasiSampler::new(inv.terms.iter().map(|(p, &c)| (p, c)))?;
    let (p, sign) = sampler.sample(rng);
    Ok(CorrectionSample { pauli: (*p).clone(), sign, flip_mask: SignFlipMask::default() })
}

/// Independent per-factor sampler for a product-form quasi-probability channel.
#[derive(Debug, Clone)]
pub struct ProductSampler {
    n_qubits: usize,
    /// (Pauli, probability of picking it over the identity, sign of identity branch, sign of Pauli branch)
    terms: Vec<(PauliString, f64, i8, i8)>,
    factors: Vec<QuasiSampler<PauliString>>,
    gamma: f64,
}

impl ProductSampler {
    pub fn new(ch: &SplChannel) -> Result<ProductSampler> {
        let mut gamma = 1.0;
        let mut terms = Vec::with_capacity(ch.product_terms.len());
        for t in &ch.product_terms {
            let (a, b) = t.coefficients();
            let g = a.abs() + b.abs();
            gamma *= g;
            let sign = |c: f64| if c < 0.0 { -1 } else { 1 };
            terms.push((t.pauli.clone(), b.abs() / g, sign(a), sign(b)));
        }
        let factors = ch
            .expanded_factors
            .iter()
            .map(|f| QuasiSampler::new(f.terms.iter().map(|(p, &c)| (p.clone(), c))))
            .collect::<Result<Vec<_>>>()?;
        for f in &factors {
            gamma *= f.gamma();
        }
        Ok(ProductSampler { n_qubits: ch.n_qubits, terms, factors, gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (PauliString, i8) {
        let mut p = PauliString::identity(self.n_qubits);
        let mut sign = 1i8;
        for (q, prob, s_id, s_p) in &self.terms {
            if rng.random::<f64>() < *prob {
                p.mul_assign(q);
                sign *= s_p;
            } else {
                sign *= s_id;
            }
        }
        for f in &self.factors {
            let (q, s) = f.sample(rng);
            p.mul_assign(q);
            sign *= s;
        }
        (p, sign)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::p;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_inverse_always_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let inv = DensePauliChannel::identity(2);
        for _ in 0..100 {
            let s = sample_local_correction(&inv, &mut rng).unwrap();
            assert!(s.pauli.is_identity());
            assert_eq!(s.sign, 1);
            assert!(s.flip_mask.is_empty());
        }
    }

    #[test]
    fn two_term_probabilities() {
        let inv = DensePauliChannel::from_terms(1, [(p("I"), 1.2), (p("X"), -0.2)]).unwrap();
        let sampler = QuasiSampler::new(inv.terms.iter().map(|(p, &c)| (p.clone(), c))).unwrap();
        assert!((sampler.gamma() - 1.4).abs() < 1e-15);
        assert!((sampler.probability(0) - 1.2 / 1.4).abs() < 1e-15);
        let signs: Vec<i8> = sampler.entries().map(|(_, s)| s).collect();
        assert_eq!(signs, vec![1, -1]);
    }

    #[test]
    fn empty_distribution_rejected() {
        assert!(QuasiSampler::<u8>::new(Vec::new()).is_err());
    }
}
