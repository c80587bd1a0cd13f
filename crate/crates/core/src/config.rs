use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::error::{KcutError, Result};

/// Exact rational used for every normalized threshold.
pub type Rational = Ratio<i128>;

pub fn rational(numer: i128, denom: i128) -> Rational {
    Rational::new(numer, denom)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"3"`, `"-1/4"` or a finite decimal such as `"0.05"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || KcutError::InvalidArgument(format!("not a rational number: {text:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: i128 = n.trim().parse().map_err(|_| bad())?;
        let d: i128 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    if frac_part.len() > 30 {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: i128 = if digits.is_empty() { 0 } else { digits.parse().map_err(|_| bad())? };
    let denom = 10i128.pow(frac_part.len() as u32);
    let r = Rational::new(numer, denom);
    Ok(if neg { -r } else { r })
}

/// Every constant the schedule leaves symbolic.
///
/// `budget_slack = c_z * gamma` plays the role of the slack in the budget
/// `z(k, s) = s - (1.75 + slack) k` and also of the `(1 - slack)` damping in
/// the potential.
#[derive(Clone, Debug, PartialEq)]
pub struct ScheduleConfig {
    pub gamma: Rational,
    pub c_z: Rational,
    /// Calls with `k < base_k` fall back to contraction enumeration.
    pub base_k: usize,
    /// Multiplier on the `2^k n^e` caps handed to cut enumeration.
    pub cap_const: u64,
    /// Repetition constant for contraction sampling.
    pub c_rep: f64,
    /// Tree-packing size is `c_pack * k^3 * m`.
    pub c_pack: usize,
    /// Fixed tree count, overriding `c_pack`.
    pub trees: Option<usize>,
    /// Swap contraction sampling for an exact scan whenever the scan is
    /// cheaper than the prescribed number of repetitions.
    pub exhaustive_cutover: bool,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        ScheduleConfig::with_gamma(rational(1, 20))
    }
}

impl ScheduleConfig {
    /// Defaults with the given γ and `base_k = ceil(1 / γ)`.
    pub fn with_gamma(gamma: Rational) -> Self {
        ScheduleConfig {
            base_k: base_k_for(&gamma, &Rational::from_integer(1)),
            gamma,
            c_z: Rational::from_integer(10),
            cap_const: 4,
            c_rep: 3.0,
            c_pack: 1,
            trees: None,
            exhaustive_cutover: true,
        }
    }

    pub fn budget_slack(&self) -> Rational {
        self.c_z * self.gamma
    }

    pub fn validate(&self) -> Result<()> {
        if self.gamma <= Rational::zero() || self.gamma > rational(1, 10) {
            return Err(KcutError::InvalidArgument(format!(
                "gamma must lie in (0, 1/10], got {}",
                self.gamma
            )));
        }
        if self.budget_slack() < Rational::zero() {
            return Err(KcutError::InvalidArgument("budget slack must be nonnegative".into()));
        }
        if self.base_k < 2 {
            return Err(KcutError::InvalidArgument("base_k must be at least 2".into()));
        }
        if self.c_rep.is_nan() || self.c_rep <= 0.0 || self.c_pack == 0 || self.cap_const == 0 || self.trees == Some(0) {
            return Err(KcutError::InvalidArgument(
                "c_rep, c_pack, cap_const and trees must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// `ceil(c_b / gamma)`, at least 2.
pub fn base_k_for(gamma: &Rational, c_b: &Rational) -> usize {
    if gamma <= &Rational::zero() {
        return usize::MAX;
    }
    let q = (c_b / gamma).ceil().to_integer();
    usize::try_from(q).unwrap_or(usize::MAX).max(2)
}

/// splitmix64 finalizer; derives independent stream seeds.
pub fn mix_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed
        .wrapping_add(salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
