//! Fixed-point big-integer arithmetic at 60 decimal digits: an independent
//! high-precision route to the Meyerhoff length bound, built only from
//! integer operations (Newton square roots, Machin's formula for π, and
//! the atanh series for ln(√2 + 1) = atanh(1/√2)).

use num_bigint::BigInt;

const DIGITS: u32 = 60;

fn scale() -> BigInt {
    BigInt::from(10u8).pow(DIGITS)
}

fn zero() -> BigInt {
    BigInt::from(0u8)
}

/// A nonnegative fixed-point number with 60 decimal digits of fraction.
#[derive(Clone, Debug)]
pub struct Fx(BigInt);

impl Fx {
    pub fn from_u32(n: u32) -> Fx {
        Fx(BigInt::from(n) * scale())
    }

    pub fn mul(&self, o: &Fx) -> Fx {
        Fx(&self.0 * &o.0 / scale())
    }

    pub fn div(&self, o: &Fx) -> Fx {
        Fx(&self.0 * scale() / &o.0)
    }

    pub fn mul_int(&self, n: u32) -> Fx {
        Fx(&self.0 * BigInt::from(n))
    }

    pub fn sqrt(&self) -> Fx {
        Fx(isqrt(&(&self.0 * scale())))
    }

    pub fn to_f64(&self) -> f64 {
        // Keep 18 fractional digits, which is already beyond f64 precision
        // for numbers of size O(1).
        let scaled: BigInt = &self.0 / BigInt::from(10u8).pow(DIGITS - 18);
        let as_int: i128 = scaled.to_string().parse().expect("fits in i128");
        as_int as f64 / 1e18
    }

    /// Decimal expansion `i.ffff...` with all 60 fractional digits.
    pub fn to_decimal_string(&self) -> String {
        let raw = self.0.to_string();
        let digits = DIGITS as usize;
        let padded = if raw.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - raw.len()), raw)
        } else {
            raw
        };
        let split = padded.len() - digits;
        format!("{}.{}", &padded[..split], &padded[split..])
    }
}

// Floor square root by integer Newton iteration.
fn isqrt(n: &BigInt) -> BigInt {
    if *n == zero() {
        return zero();
    }
    let mut x: BigInt = BigInt::from(1u8) << (n.bits() as usize / 2 + 1);
    loop {
        let y: BigInt = (&x + n / &x) >> 1;
        if y >= x {
            return x;
        }
        x = y;
    }
}

// Σ_k (-1)^k / ((2k+1) q^(2k+1)), the arctangent of 1/q.
fn atan_inv(q: u32) -> Fx {
    let q2 = BigInt::from(q) * BigInt::from(q);
    let mut term = scale() / BigInt::from(q);
    let mut sum = zero();
    let mut k = 0u32;
    while term != zero() {
        let contrib = &term / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += contrib;
        } else {
            sum -= contrib;
        }
        term = &term / &q2;
        k += 1;
    }
    Fx(sum)
}

/// π by Machin's formula `π = 16 atan(1/5) - 4 atan(1/239)`.
pub fn pi() -> Fx {
    Fx(atan_inv(5).0 * BigInt::from(16u8) - atan_inv(239).0 * BigInt::from(4u8))
}

/// `ln(√2 + 1) = atanh(1/√2) = Σ (1/√2)^(2k+1) / (2k+1)`.
pub fn ln_sqrt2_plus_1() -> Fx {
    let y = Fx::from_u32(1).div(&Fx::from_u32(2).sqrt());
    let y2 = y.mul(&y);
    let mut term = y.clone();
    let mut sum = zero();
    let mut k = 0u32;
    while term.0 != zero() {
        sum += &term.0 / BigInt::from(2 * k + 1);
        term = term.mul(&y2);
        k += 1;
    }
    Fx(sum)
}

/// `(√3 / 4π) · ln²(√2 + 1)` at 60 digits.
pub fn max_length_bound_oracle() -> Fx {
    let sqrt3 = Fx::from_u32(3).sqrt();
    let four_pi = pi().mul_int(4);
    let log = ln_sqrt2_plus_1();
    sqrt3.div(&four_pi).mul(&log).mul(&log)
}

#[test]
fn oracle_constants_match_reference_digits() {
    // Textbook digit strings pin the oracle itself before it is trusted.
    assert!(pi()
        .to_decimal_string()
        .starts_with("3.14159265358979323846264338327950288419716939937510"));
    assert!(ln_sqrt2_plus_1()
        .to_decimal_string()
        .starts_with("0.88137358701954302523260932497979230902816032826163"));
    assert!(Fx::from_u32(3)
        .sqrt()
        .to_decimal_string()
        .starts_with("1.73205080756887729352744634150587236694280525381038"));
    // And the bound itself, frozen from an independent 50-digit evaluation.
    assert!(max_length_bound_oracle()
        .to_decimal_string()
        .starts_with("0.107070745421678356879704158666746675665171793824"));
}
