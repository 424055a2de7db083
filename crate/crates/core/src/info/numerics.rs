//! Bit-level numerics: universal integer code lengths and log-binomials.

use std::sync::OnceLock;

use num_bigint::BigUint;

use super::InfoError;

/// Normalization constant of the universal integer code.
pub const LOG_STAR_C0: f64 = 2.865064;

/// Largest population size for which binomial entropies are evaluated with
/// exact integer arithmetic.
pub const EXACT_BINOMIAL_LIMIT: u128 = 1_000_000;

/// Which `log*` variant prices integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LogStarVariant {
    /// `log2(c0)` plus the positive iterated logarithms.
    #[default]
    Universal,
    /// Positive iterated logarithms only (`log*(1) = 0`).
    Plain,
}

/// Code length in bits of the positive integer `n`.
pub fn log_star(n: u64, variant: LogStarVariant) -> Result<f64, InfoError> {
    if n == 0 {
        return Err(InfoError::Domain("log* undefined for 0".into()));
    }
    let mut total = match variant {
        LogStarVariant::Universal => LOG_STAR_C0.log2(),
        LogStarVariant::Plain => 0.0,
    };
    let mut x = (n as f64).log2();
    while x > 0.0 {
        total += x;
        x = x.log2();
    }
    Ok(total)
}

/// Stirling series remainder `ln Γ(x+1) - [(x+½)ln x - x + ½ln 2π]`, valid for x ≥ 16.
fn stirling_remainder(x: f64) -> f64 {
    let r = 1.0 / x;
    let r2 = r * r;
    r * (1.0 / 12.0
        - r2 * (1.0 / 360.0
            - r2 * (1.0 / 1260.0
                - r2 * (1.0 / 1680.0 - r2 * (1.0 / 1188.0 - r2 * (691.0 / 360360.0 - r2 / 156.0))))))
}

/// `ln C(n, k)` via log-gamma differences, rearranged to avoid cancellation:
///
/// `k ln(n/k) + (n-k) ln(n/(n-k)) + ½ ln(n / (2π k (n-k))) + δ(n) - δ(k) - δ(n-k)`
///
/// where `δ` is the Stirling remainder. Small `k` falls back to a direct sum.
pub fn ln_binomial(n: u128, k: u128) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    if k == 0 {
        return 0.0;
    }
    if k < 16 {
        let base = (n - k) as f64;
        return (1..=k).map(|i| (base / i as f64).ln_1p()).sum::<f64>();
    }
    ln_binomial_real(n as f64, k as f64)
}

/// The log-gamma form of `ln C(n, k)` for real `n >= 2k`, `k >= 16`. Used
/// directly when the population does not fit in an integer type.
pub fn ln_binomial_real(n: f64, k: f64) -> f64 {
    if k < 16.0 {
        return (1..=k as u64).map(|i| ((n - k) / i as f64).ln_1p()).sum::<f64>();
    }
    let m = n - k;
    let main = k * (n / k).ln() - m * (-k / n).ln_1p();
    let half = 0.5 * (n / (2.0 * std::f64::consts::PI * k * m)).ln();
    main + half + stirling_remainder(n) - stirling_remainder(k) - stirling_remainder(m)
}

/// `log2 C(n, k)` on the log-gamma route.
pub fn log2_binomial_lgamma(n: u128, k: u128) -> f64 {
    ln_binomial(n, k) / std::f64::consts::LN_2
}

fn primes_up_to(limit: usize) -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    let all = PRIMES.get_or_init(|| {
        let max = EXACT_BINOMIAL_LIMIT as usize;
        let mut sieve = vec![true; max + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= max {
            if sieve[i] {
                (i * i..=max).step_by(i).for_each(|j| sieve[j] = false);
            }
            i += 1;
        }
        (0..=max).filter(|&i| sieve[i]).map(|i| i as u32).collect()
    });
    let end = all.partition_point(|&p| p as usize <= limit);
    &all[..end]
}

fn product_tree(mut factors: Vec<BigUint>) -> BigUint {
    if factors.is_empty() {
        return BigUint::from(1u32);
    }
    while factors.len() > 1 {
        factors = factors
            .chunks(2)
            .map(|c| if c.len() == 2 { &c[0] * &c[1] } else { c[0].clone() })
            .collect();
    }
    factors.pop().unwrap()
}

/// `C(n, k)` exactly, from the prime factorization (Legendre's formula).
pub fn binomial_exact(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    assert!(
        n as u128 <= EXACT_BINOMIAL_LIMIT,
        "exact binomial limited to n <= {EXACT_BINOMIAL_LIMIT}"
    );
    let k = k.min(n - k);
    if k <= 64 {
        let num = product_tree((n - k + 1..=n).map(BigUint::from).collect());
        let den = product_tree((1..=k).map(BigUint::from).collect());
        return num / den;
    }
    let mut factors = Vec::new();
    for &p in primes_up_to(n as usize) {
        let p = p as u64;
        let (mut e, mut pk) = (0u32, p);
        while pk <= n {
            e += (n / pk - k / pk - (n - k) / pk) as u32;
            pk = match pk.checked_mul(p) {
                Some(x) => x,
                None => break,
            };
        }
        if e > 0 {
            factors.push(BigUint::from(p).pow(e));
        }
    }
    product_tree(factors)
}

/// `log2` of a big integer, accurate to a few ulps.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        let digits = x.to_u64_digits();
        return (digits[0] as f64).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64_digits()[0];
    (top as f64).log2() + shift as f64
}

/// `log2 C(n, k)` with exact integer arithmetic. Requires `n <= EXACT_BINOMIAL_LIMIT`.
pub fn log2_binomial_exact(n: u64, k: u64) -> f64 {
    log2_big(&binomial_exact(n, k))
}

/// `log2 C(n, k)`: exact integer path when `n` is small, log-gamma otherwise.
pub fn log2_binomial(n: u128, k: u128) -> f64 {
    if n <= EXACT_BINOMIAL_LIMIT {
        log2_binomial_exact(n as u64, k as u64)
    } else {
        log2_binomial_lgamma(n, k)
    }
}
