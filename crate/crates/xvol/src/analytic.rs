//! Exact closed forms for the X-state volumes, their PPT subvolumes, and
//! the ratio between them, in big-rational arithmetic with explicit powers
//! of π.
//!
//! Every closed form is re-derived from the underlying integral identities
//! at call time and asserted against the final expression, so a
//! transcription error on either route cannot go unnoticed:
//!
//! - the body volume comes from the Dirichlet integral with weight 2 per
//!   pair-participating diagonal entry (weight 1 on the center), and must
//!   equal π^{mn/2}/(2mn−1)! for even mn, π^{(mn−1)/2}/(2mn−2)! for odd mn;
//! - the PPT volume comes from the telescoping Beta product
//!   Γ(8A)/Γ(8A+4B+C) · B(8,8)···B(8,8A−8) · I₀^A, and must equal
//!   (2/5)^A times the body volume;
//! - the ratio (2/5)^{⌊m/2⌋·⌊n/2⌋} must equal the quotient of the two.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::pt;
use crate::state::Dims;

/// k! as a big integer.
pub fn factorial(k: u64) -> BigInt {
    (1..=k).map(BigInt::from).product()
}

/// Euler Beta function at positive integers, B(a, b) = (a−1)!(b−1)!/(a+b−1)!.
pub fn beta(a: u64, b: u64) -> Result<BigRational> {
    if a < 1 || b < 1 {
        return Err(Error::BetaDomain { a, b });
    }
    Ok(BigRational::new(
        factorial(a - 1) * factorial(b - 1),
        factorial(a + b - 1),
    ))
}

/// Dirichlet normalization integral over the simplex for integer weights:
/// ∏Γ(α_i)/Γ(Σα_i) = ∏(α_i−1)!/(Σα_i−1)!. The weight vector includes α₀.
pub fn dirichlet_integral(alphas: &[u64]) -> Result<BigRational> {
    if alphas.is_empty() || alphas.iter().any(|&a| a < 1) {
        return Err(Error::DirichletDomain);
    }
    let numerator: BigInt = alphas.iter().map(|&a| factorial(a - 1)).product();
    let total: u64 = alphas.iter().sum();
    Ok(BigRational::new(numerator, factorial(total - 1)))
}

/// The minimum-function Dirichlet integral
/// ∫ min[x₁(1−x₁−x₂−x₃), x₂x₃]² over the 3-simplex, computed as
/// (2/5)·(1/7!) and asserted equal to 1/12600.
pub fn i_zero() -> BigRational {
    let value = BigRational::new(BigInt::from(2), BigInt::from(5))
        / BigRational::from_integer(factorial(7));
    assert_eq!(
        value,
        BigRational::new(BigInt::one(), BigInt::from(12600)),
        "the two closed forms of the minimum integral disagree"
    );
    value
}

/// Incomplete variant over the scaled simplex of size `a` with an extra
/// complement power n: a^{8+n} · I₀ · B(8, n+1).
pub fn i_min(n: u64, a: &BigRational) -> Result<BigRational> {
    if a.is_negative() || a > &BigRational::one() {
        return Err(Error::UnitInterval {
            value: a.to_string(),
        });
    }
    Ok(pow_rational(a, 8 + n) * i_zero() * beta(8, n + 1)?)
}

fn pow_rational(base: &BigRational, exp: u64) -> BigRational {
    let mut acc = BigRational::one();
    let mut base = base.clone();
    let mut exp = exp;
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        exp >>= 1;
    }
    acc
}

/// (2/5)^k exactly.
fn two_fifths_pow(k: u64) -> BigRational {
    pow_rational(&BigRational::new(BigInt::from(2), BigInt::from(5)), k)
}

/// An exact value of the form (rational) × π^k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiRational {
    coeff: BigRational,
    pi_power: u32,
}

impl PiRational {
    pub fn new(coeff: BigRational, pi_power: u32) -> Self {
        PiRational { coeff, pi_power }
    }

    /// The rational coefficient, in lowest terms with positive denominator.
    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn pi_power(&self) -> u32 {
        self.pi_power
    }

    /// Addition is only meaningful at matching π powers; mixing powers is
    /// rejected rather than approximated.
    pub fn checked_add(&self, other: &PiRational) -> Result<PiRational> {
        if self.pi_power != other.pi_power {
            return Err(Error::PiPowerMismatch {
                left: self.pi_power,
                right: other.pi_power,
            });
        }
        Ok(PiRational {
            coeff: &self.coeff + &other.coeff,
            pi_power: self.pi_power,
        })
    }

    /// Nearest f64; underflows to 0 for coefficients below the subnormal
    /// range (factorials grow past it quickly).
    pub fn approx_f64(&self) -> f64 {
        rational_to_f64(&self.coeff) * std::f64::consts::PI.powi(self.pi_power as i32)
    }

    /// Scientific-notation approximation that survives magnitudes far
    /// outside the f64 range, for display.
    pub fn approx_scientific(&self, digits: usize) -> String {
        if self.coeff.is_zero() {
            return "0".to_string();
        }
        let log10 =
            rational_log10_abs(&self.coeff) + self.pi_power as f64 * std::f64::consts::PI.log10();
        let exponent = log10.floor();
        let mantissa = 10f64.powf(log10 - exponent);
        let sign = if self.coeff.is_negative() { "-" } else { "" };
        format!(
            "{sign}{mantissa:.prec$}e{exponent}",
            prec = digits.saturating_sub(1)
        )
    }
}

impl std::ops::Mul for &PiRational {
    type Output = PiRational;

    fn mul(self, rhs: &PiRational) -> PiRational {
        PiRational {
            coeff: &self.coeff * &rhs.coeff,
            pi_power: self.pi_power + rhs.pi_power,
        }
    }
}

impl std::fmt::Display for PiRational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.pi_power {
            0 => write!(f, "{}", self.coeff),
            1 => write!(f, "({})·π", self.coeff),
            k => write!(f, "({})·π^{}", self.coeff, k),
        }
    }
}

/// Hilbert-Schmidt volume of the m×n X-state body, computed through the
/// Dirichlet integral and asserted against the factorial closed form:
/// π^{mn/2}/(2mn−1)! for even mn, π^{(mn−1)/2}/(2mn−2)! for odd mn.
///
/// [`Dims`] construction already enforces m, n ≥ 2, which keeps mn inside
/// the validity range of both branches (even mn ≥ 4, odd mn ≥ 9).
pub fn volume_x(dims: Dims) -> PiRational {
    let total = dims.product() as u64;
    let mut alphas = vec![2u64; total as usize];
    if let Some(c) = dims.center_index() {
        alphas[c - 1] = 1;
    }
    let coeff = dirichlet_integral(&alphas).expect("weights are positive by construction");
    let (closed, pi_power) = if total.is_multiple_of(2) {
        (
            BigRational::new(BigInt::one(), factorial(2 * total - 1)),
            (total / 2) as u32,
        )
    } else {
        (
            BigRational::new(BigInt::one(), factorial(2 * total - 2)),
            ((total - 1) / 2) as u32,
        )
    };
    assert_eq!(
        coeff, closed,
        "Dirichlet route disagrees with the factorial closed form for {dims}"
    );
    PiRational::new(coeff, pi_power)
}

/// Hilbert-Schmidt volume of the PPT X-states, derived through the
/// telescoping Beta product over the classification counts and asserted
/// equal to (2/5)^A times the body volume.
pub fn volume_ppt(dims: Dims) -> PiRational {
    let cls = pt::classify(dims);
    let (a, b, c) = (
        cls.count_a() as u64,
        cls.count_b() as u64,
        cls.count_c() as u64,
    );
    // Γ(8A)/Γ(8A+4B+C): what is left of the simplex after all A minimum
    // blocks are integrated out, over the 2B fixed-pair entries (weight 2)
    // and the center (weight 1).
    let mut telescoped = BigRational::new(factorial(8 * a - 1), factorial(8 * a + 4 * b + c - 1));
    for t in 1..a {
        telescoped *= beta(8, 8 * t).expect("arguments are positive");
    }
    telescoped *= pow_rational(&i_zero(), a);

    let body = volume_x(dims);
    let closed = two_fifths_pow(a) * body.coeff();
    assert_eq!(
        telescoped, closed,
        "telescoping Beta product disagrees with (2/5)^A scaling for {dims}"
    );
    let pi_power = (2 * a + b) as u32;
    assert_eq!(pi_power, body.pi_power(), "π bookkeeping broke for {dims}");
    PiRational::new(telescoped, pi_power)
}

/// The PPT-to-total volume ratio (2/5)^{⌊m/2⌋·⌊n/2⌋}, asserted equal to
/// volume_ppt/volume_x.
pub fn ratio(dims: Dims) -> BigRational {
    let exponent = (dims.m() as u64 / 2) * (dims.n() as u64 / 2);
    let value = two_fifths_pow(exponent);
    let by_volumes = volume_ppt(dims).coeff() / volume_x(dims).coeff();
    assert_eq!(
        value, by_volumes,
        "exponent formula disagrees with the volume quotient for {dims}"
    );
    value
}

/// Nearest f64 of a big rational, robust to numerators and denominators far
/// outside the f64 range.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    if r.is_zero() {
        return 0.0;
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    let log10 = rational_log10_abs(r);
    sign * 10f64.powf(log10)
}

// log10 |r| via the top bits of numerator and denominator; accurate to
// ~1e-13 absolute, which is plenty for display scaling.
fn rational_log10_abs(r: &BigRational) -> f64 {
    big_log10_abs(r.numer()) - big_log10_abs(r.denom())
}

fn big_log10_abs(x: &BigInt) -> f64 {
    let mag = x.magnitude();
    let bits = mag.bits();
    if bits <= 53 {
        return mag.to_f64().unwrap().log10();
    }
    let shift = bits - 53;
    let top = (mag >> shift).to_f64().unwrap();
    top.log10() + shift as f64 * 2f64.log10()
}

/// Exact fixed-point decimal expansion of a rational, rounded half to even
/// at `places` digits after the point.
pub fn decimal_string(r: &BigRational, places: usize) -> String {
    let sign = if r.is_negative() { "-" } else { "" };
    let ten = BigInt::from(10);
    let scale = num_traits::pow(ten.clone(), places);
    let num = r.numer().abs() * &scale;
    let den = r.denom().clone();
    let mut q = &num / &den;
    let rem = &num - &q * &den;
    let twice = &rem * BigInt::from(2);
    if twice > den || (twice == den && (&q % BigInt::from(2)) == BigInt::one()) {
        q += BigInt::one();
    }
    let integer = &q / &scale;
    let fraction = &q % &scale;
    format!(
        "{sign}{integer}.{:0>width$}",
        fraction.to_string(),
        width = places
    )
}
