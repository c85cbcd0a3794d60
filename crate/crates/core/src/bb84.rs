//! The classical phase of BB84 over a binary symmetric channel, and the
//! bound on the eavesdropper's mutual information.
//!
//! Alice holds `x`, Bob holds `x + e`. Alice announces `x + u` for a random
//! codeword `u ∈ C1`; Bob decodes `u + e` to `u'`. Keys agree exactly when
//! `u' - u ∈ C2`, and are read off through a [`KeyMap`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::construct::Encoder;
use crate::css::{coset_equal, CssPair, KeyMap, Quotient};
use crate::decode::{ChannelObservation, WordDecoder};
use crate::error::{Error, Result};
use crate::gf2::BinVector;
use crate::seed::{derive_seed, label};

/// Record of one protocol run.
#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolRun {
    pub x: BinVector,
    pub e: BinVector,
    pub u: BinVector,
    pub announced: BinVector,
    /// `(x + e) + (x + u)`.
    pub decoder_input: BinVector,
    /// `None` when the decoder failed or left `C1`.
    pub u_prime: Option<BinVector>,
    pub alice_key: BinVector,
    pub bob_key: Option<BinVector>,
    pub agreed: bool,
    pub decoder_failed: bool,
}

/// Everything one protocol run needs.
pub struct Protocol<'a> {
    pub pair: &'a CssPair,
    pub keymap: &'a KeyMap,
    pub encoder: &'a dyn Encoder,
    pub decoder: &'a dyn WordDecoder,
}

impl Protocol<'_> {
    /// One run at crossover `epsilon`. With `perturb`, a random element of
    /// `C2` is added to the decoder output before key extraction.
    pub fn run(&self, epsilon: f64, seed: u64, perturb: bool) -> Result<ProtocolRun> {
        if !(0.0..0.5).contains(&epsilon) {
            return Err(Error::InvalidParameter(format!(
                "crossover probability {epsilon} outside [0, 0.5)"
            )));
        }
        let n = self.pair.n();
        if self.encoder.code_len() != n || self.decoder.matrix().cols() != n {
            return Err(Error::DimensionMismatch {
                op: "protocol",
                expected: n,
                found: self.decoder.matrix().cols(),
            });
        }
        let mut x_rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, label::ALICE_STRING, 0));
        let mut e_rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, label::NOISE, 0));
        let mut u_rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, label::CODEWORD, 0));
        let x = BinVector::random(n, &mut x_rng);
        let e = BinVector::bernoulli(n, epsilon, &mut e_rng);
        let info = BinVector::random(self.encoder.info_len(), &mut u_rng);
        let u = self.encoder.encode(&info)?;

        let announced = &x ^ &u;
        let bob = &x ^ &e;
        let decoder_input = &bob ^ &announced;
        debug_assert_eq!(decoder_input, &u ^ &e);

        let obs = ChannelObservation::bsc(&decoder_input, epsilon)?;
        let result = self.decoder.decode(&obs);
        let decoder_failed = !result.converged;
        let mut u_prime = result
            .word
            .filter(|w| result.converged && self.pair.h1().annihilates(w));
        if perturb {
            if let Some(w) = u_prime.as_mut() {
                let mut p_rng =
                    ChaCha8Rng::seed_from_u64(derive_seed(seed, label::PERTURBATION, 0));
                *w ^= &self.pair.random_c2(&mut p_rng);
            }
        }

        let alice_key = self.keymap.key(&u)?;
        let (bob_key, agreed) = match &u_prime {
            Some(w) => (
                Some(self.keymap.key(w)?),
                coset_equal(self.pair, &u, w, Quotient::C1OverC2)?,
            ),
            None => (None, false),
        };
        Ok(ProtocolRun {
            x,
            e,
            u,
            announced,
            decoder_input,
            u_prime,
            alice_key,
            bob_key,
            agreed,
            decoder_failed,
        })
    }
}

/// Decoding error probability of the worse code and key length.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EveBoundInput {
    pub delta: f64,
    pub k: u32,
}

/// `log2(2^(2k) - 1)` without forming `2^(2k)`.
fn log2_keyspace(k: u32) -> f64 {
    let two_k = 2.0 * k as f64;
    two_k + (-(-two_k).exp2()).ln_1p() / std::f64::consts::LN_2
}

/// `-(1-δ) log2(1-δ) - δ log2 δ + δ log2(2^(2k) - 1)`, zero at `δ = 0`.
pub fn eve_bound(input: EveBoundInput) -> Result<f64> {
    let EveBoundInput { delta, k } = input;
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::InvalidParameter(format!(
            "delta {delta} outside [0, 1)"
        )));
    }
    if k == 0 {
        return Err(Error::InvalidParameter(
            "key length must be at least 1".into(),
        ));
    }
    if delta == 0.0 {
        return Ok(0.0);
    }
    let keep = 1.0 - delta;
    Ok(-keep * keep.log2() - delta * delta.log2() + delta * log2_keyspace(k))
}

/// The `δ` at which the bound equals `target`, searched on the increasing
/// branch `(0, 1 - 2^(-2k)]`.
pub fn delta_for_bound(target: f64, k: u32) -> Result<f64> {
    if k == 0 || target.is_nan() || target <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "need k >= 1 and a positive target, got k = {k}, target = {target}"
        )));
    }
    let mut hi = 1.0 - (-2.0 * k as f64).exp2();
    if hi >= 1.0 {
        hi = 1.0 - f64::EPSILON;
    }
    if eve_bound(EveBoundInput { delta: hi, k })? < target {
        return Err(Error::InvalidParameter(format!(
            "target {target} exceeds the maximum of the bound for k = {k}"
        )));
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if eve_bound(EveBoundInput { delta: mid, k })? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Per-crossover accounting of decoded words against transmitted words of
/// `C2⊥`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Coverage {
    pub crossover: f64,
    pub trials: u64,
    /// Decoder produced no codeword.
    pub failures: u64,
    /// Decoded a codeword different from the transmitted one.
    pub wrong: u64,
    /// Wrong words that differ from the transmitted one by an element of `C1⊥`.
    pub covered: u64,
}

impl Coverage {
    /// `covered / wrong`; `None` when there is nothing to cover.
    pub fn rate(&self) -> Option<f64> {
        (self.wrong > 0).then(|| self.covered as f64 / self.wrong as f64)
    }

    pub fn plain_successes(&self) -> u64 {
        self.trials - self.failures - self.wrong
    }

    pub fn coset_successes(&self) -> u64 {
        self.plain_successes() + self.covered
    }
}

/// One decoded trial for [`coset_coverage_stats`].
#[derive(Clone, Debug)]
pub struct CoverageTrial<'a> {
    pub crossover: f64,
    pub transmitted: &'a BinVector,
    pub decoded: Option<&'a BinVector>,
}

/// Buckets trials by crossover (in order of first appearance) and counts
/// how many wrong decodings land in the transmitted coset of `C1⊥`.
pub fn coset_coverage_stats<'a>(
    pair: &CssPair,
    trials: impl IntoIterator<Item = CoverageTrial<'a>>,
) -> Vec<Coverage> {
    let mut buckets: Vec<Coverage> = Vec::new();
    for t in trials {
        let idx = match buckets.iter().position(|b| b.crossover == t.crossover) {
            Some(i) => i,
            None => {
                buckets.push(Coverage {
                    crossover: t.crossover,
                    ..Coverage::default()
                });
                buckets.len() - 1
            }
        };
        let b = &mut buckets[idx];
        b.trials += 1;
        match t.decoded {
            Some(w) if pair.h2().annihilates(w) => {
                if w != t.transmitted {
                    b.wrong += 1;
                    if pair.in_c1perp(&(w ^ t.transmitted)) {
                        b.covered += 1;
                    }
                }
            }
            _ => b.failures += 1,
        }
    }
    buckets
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bound(delta: f64, k: u32) -> f64 {
        eve_bound(EveBoundInput { delta, k }).unwrap()
    }

    #[test]
    fn closed_form_at_one_half() {
        // 0.5 + 0.5 * log2(6)
        let expected = 0.5 + 0.5 * 6f64.log2();
        assert!((bound(0.5, 1) - expected).abs() < 1e-12);
        assert!((bound(0.5, 1) - 1.792_48).abs() < 1e-5);
    }

    #[test]
    fn vanishes_at_zero_and_rejects_one() {
        assert_eq!(bound(0.0, 5), 0.0);
        assert!(eve_bound(EveBoundInput { delta: 1.0, k: 1 }).is_err());
        assert!(eve_bound(EveBoundInput { delta: 0.1, k: 0 }).is_err());
    }

    #[test]
    fn large_keys_stay_finite() {
        let v = bound(0.01, 712);
        assert!(v.is_finite());
        // 2^(1424) - 1 is 1424 bits to within rounding.
        let binary = -0.99f64 * 0.99f64.log2() - 0.01 * 0.01f64.log2();
        assert!((v - (binary + 0.01 * 1424.0)).abs() < 1e-9);
    }

    #[test]
    fn inverse_recovers_delta() {
        for &(d, k) in &[(1e-4, 712u32), (0.02, 10), (0.3, 1)] {
            let back = delta_for_bound(bound(d, k), k).unwrap();
            assert!((back - d).abs() < 1e-12 * (1.0 + d), "{d} {k} {back}");
        }
    }
}
