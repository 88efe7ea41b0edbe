//! Gamma-function helpers.
//!
//! Integer arguments up to 21 (factorials up to 20!) are evaluated exactly;
//! everything else goes through log-gamma and a single final exponentiation.

use statrs::function::gamma::ln_gamma;

const MAX_EXACT_FACTORIAL: u64 = 20;

/// `n!` as an exact integer when `n ≤ 20`.
pub fn factorial(n: u64) -> f64 {
    if n <= MAX_EXACT_FACTORIAL {
        (1..=n).product::<u64>() as f64
    } else {
        ln_gamma(n as f64 + 1.0).exp()
    }
}

fn exact_gamma_arg(x: f64) -> Option<u64> {
    (x.fract() == 0.0 && x >= 1.0 && x <= (MAX_EXACT_FACTORIAL + 1) as f64).then(|| x as u64 - 1)
}

/// `Γ(x)` for `x > 0`.
pub fn gamma(x: f64) -> f64 {
    gamma_ratio(&[x], &[])
}

/// `Π Γ(num_i) / Π Γ(den_j)` for positive arguments.
///
/// Exact when every argument is an integer in `1..=21`, otherwise the
/// log-gammas are summed before exponentiating so intermediate values never
/// overflow.
pub fn gamma_ratio(num: &[f64], den: &[f64]) -> f64 {
    debug_assert!(num.iter().chain(den).all(|&x| x > 0.0));
    let exact: Option<Vec<u64>> = num.iter().chain(den).map(|&x| exact_gamma_arg(x)).collect();
    if let Some(args) = exact {
        let (top, bottom) = args.split_at(num.len());
        let top: f64 = top.iter().map(|&n| factorial(n)).product();
        let bottom: f64 = bottom.iter().map(|&n| factorial(n)).product();
        return top / bottom;
    }
    let log: f64 = num.iter().map(|&x| ln_gamma(x)).sum::<f64>()
        - den.iter().map(|&x| ln_gamma(x)).sum::<f64>();
    log.exp()
}

/// Binomial coefficient for nonnegative integers.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials_are_exact() {
        assert_eq!(factorial(0), 1.0);
        assert_eq!(factorial(5), 120.0);
        assert_eq!(factorial(20), 2_432_902_008_176_640_000.0);
        assert_eq!(gamma(6.0), 120.0);
    }

    #[test]
    fn half_integer_gamma() {
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert!((gamma(0.5) - sqrt_pi).abs() < 1e-13);
        assert!((gamma(2.5) - 0.75 * sqrt_pi).abs() < 1e-13);
    }

    #[test]
    fn large_ratio_does_not_overflow() {
        // Γ(200.5)/Γ(200) ~ sqrt(200)
        let r = gamma_ratio(&[200.5], &[200.0]);
        assert!((r / 200f64.sqrt() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(8, 0), 1.0);
        assert_eq!(binomial(3, 4), 0.0);
    }
}
