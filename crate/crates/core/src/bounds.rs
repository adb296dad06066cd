//! Upper bounds on the multiplicity `m` of a repeated row, and the
//! feasible/basic parameter calculus.
//!
//! Everything here is exact: bounds are [`Rational`]s over `i128`.

use num_integer::Integer;

use crate::designs::{Quadruple, Rational};
use crate::error::{Error, Result};

fn check_domain(k: u64, n: u64, lambda: u64) -> Result<()> {
    if k < 2 || n < 2 || lambda < 1 {
        return Err(Error::domain(format!(
            "need k >= 2, n >= 2, lambda >= 1 (got k={k}, n={n}, lambda={lambda})"
        )));
    }
    Ok(())
}

/// `k(n−1)+1`, the denominator shared by most bounds.
pub fn rao_denominator(k: u64, n: u64) -> u64 {
    k * (n - 1) + 1
}

/// `m ≤ λn²/(k(n−1)+1)`.
pub fn rao_repeat_bound(k: u64, n: u64, lambda: u64) -> Result<Rational> {
    check_domain(k, n, lambda)?;
    Ok(Rational::new(
        lambda as i128 * (n as i128).pow(2),
        rao_denominator(k, n) as i128,
    ))
}

/// `⌊λn²/(k(n−1)+1)⌋`; arrays meeting it are m-optimal.
pub fn floor_bound(k: u64, n: u64, lambda: u64) -> Result<u64> {
    check_domain(k, n, lambda)?;
    Ok(lambda * n * n / rao_denominator(k, n))
}

fn refined_parts(k: u64, n: u64, lambda: u64, alpha: u64) -> (i128, i128) {
    let (k, n, l, a) = (k as i128, n as i128, lambda as i128, alpha as i128);
    let numer = l * (k * (k - 1) - 2 * a * k * n + (a * a + a) * n * n);
    let denom = k * (k - 1) - 2 * a * k + a * a + a;
    (numer, denom)
}

/// The α-refined bound
/// `λ(k(k−1) − 2αkn + (α²+α)n²) / (k(k−1) − 2αk + α² + α)`,
/// met with equality exactly when every non-repeated row has α or α+1 zeros.
///
/// The denominator factors as `(k−α)(k−α−1)`, so it vanishes at `α ∈ {k−1, k}`;
/// those α yield [`Error::NotApplicable`].
pub fn refined_bound(k: u64, n: u64, lambda: u64, alpha: u64) -> Result<Rational> {
    check_domain(k, n, lambda)?;
    if alpha < 1 {
        return Err(Error::domain("alpha must be a positive integer"));
    }
    let (numer, denom) = refined_parts(k, n, lambda, alpha);
    if denom <= 0 {
        return Err(Error::NotApplicable { alpha });
    }
    Ok(Rational::new(numer, denom))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefinedOutcome {
    /// A meaningful constraint on `m`.
    Bound(Rational),
    /// Algebraically valid but at least `λn²`, so it says nothing.
    Vacuous(Rational),
    /// Non-positive denominator.
    NotApplicable,
}

/// Every bound on `m` for one `(k, n, λ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub k: u64,
    pub n: u64,
    pub lambda: u64,
    pub rao_bound: Rational,
    pub floor_bound: u64,
    /// Outcome for each α in `1..=k`, indexed by `α − 1`.
    pub refined: Vec<RefinedOutcome>,
    /// Smallest non-vacuous refined bound and the first α achieving it.
    pub best_refined: Option<(u64, Rational)>,
}

impl BoundReport {
    pub fn new(k: u64, n: u64, lambda: u64) -> Result<Self> {
        let rao_bound = rao_repeat_bound(k, n, lambda)?;
        let floor_bound = floor_bound(k, n, lambda)?;
        let rows = Rational::from_integer(lambda as i128 * (n as i128).pow(2));
        let mut refined = Vec::with_capacity(k as usize);
        let mut best: Option<(u64, Rational)> = None;
        for alpha in 1..=k {
            let outcome = match refined_bound(k, n, lambda, alpha) {
                Ok(b) if b >= rows => RefinedOutcome::Vacuous(b),
                Ok(b) => {
                    if best.is_none_or(|(_, cur)| b < cur) {
                        best = Some((alpha, b));
                    }
                    RefinedOutcome::Bound(b)
                }
                Err(Error::NotApplicable { .. }) => RefinedOutcome::NotApplicable,
                Err(e) => return Err(e),
            };
            refined.push(outcome);
        }
        Ok(Self {
            k,
            n,
            lambda,
            rao_bound,
            floor_bound,
            refined,
            best_refined: best,
        })
    }

    pub fn refined_at(&self, alpha: u64) -> Option<RefinedOutcome> {
        alpha
            .checked_sub(1)
            .and_then(|i| self.refined.get(i as usize))
            .copied()
    }
}

/// `(k−1)/n` when it is a positive integer.
pub fn abar(k: u64, n: u64) -> Option<u64> {
    (k > n && (k - 1).is_multiple_of(n)).then(|| (k - 1) / n)
}

/// All feasible `(m, λ, k, n)` with `λ ≤ lambda_max`, ascending in λ.
pub fn feasible_quadruples(k: u64, n: u64, lambda_max: u64) -> Vec<Quadruple> {
    if k < 2 || n < 2 || abar(k, n).is_none() {
        return Vec::new();
    }
    let denom = rao_denominator(k, n);
    (1..=lambda_max)
        .filter(|lambda| (lambda * n * n).is_multiple_of(denom))
        .map(|lambda| Quadruple::new(lambda * n * n / denom, lambda, k, n))
        .collect()
}

/// The feasible quadruple with smallest λ; it always has `gcd(m, λ) = 1`.
pub fn minimal_feasible(k: u64, n: u64) -> Option<Quadruple> {
    if k < 2 || n < 2 {
        return None;
    }
    abar(k, n)?;
    let denom = rao_denominator(k, n);
    let g = (n * n).gcd(&denom);
    Some(Quadruple::new(n * n / g, denom / g, k, n))
}

/// The basic quadruple with `m > 1` for `(k, n)`, if any.
///
/// Every feasible quadruple is a multiple of the minimal one, so this is the
/// minimal quadruple when its `m` exceeds 1.
pub fn basic_quadruple(k: u64, n: u64) -> Option<Quadruple> {
    let q = minimal_feasible(k, n).filter(|q| q.m > 1)?;
    if is_prime(n) {
        debug_assert_eq!(Some(q), prime_closed_form(k, n));
    }
    Some(q)
}

/// For prime `n`: `m = n`, `k = ns+1`, `λ = (n−1)s+1` provided `gcd(n, s−1) = 1`.
pub fn prime_closed_form(k: u64, n: u64) -> Option<Quadruple> {
    if !is_prime(n) {
        return None;
    }
    let s = abar(k, n)?;
    // gcd(n, s−1) with s = 1 is gcd(n, 0) = n
    (n.gcd(&(s - 1)) == 1).then(|| Quadruple::new(n, (n - 1) * s + 1, k, n))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `C(n, r)` with overflow detection; zero when `r > n`.
pub fn binomial(n: u64, r: u64) -> Result<u64> {
    if r > n {
        return Ok(0);
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return Err(Error::Overflow("binomial coefficient"));
        }
    }
    Ok(acc as u64)
}

pub fn checked_pow(base: u64, exp: u64) -> Result<u64> {
    u32::try_from(exp)
        .ok()
        .and_then(|e| base.checked_pow(e))
        .ok_or(Error::Overflow("power"))
}
