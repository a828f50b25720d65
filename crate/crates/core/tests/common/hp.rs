//! Fixed-point complex arithmetic on big integers: values are stored as
//! `round(x * 2^BITS)`. 320 bits is roughly 96 decimal digits.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub const BITS: u32 = 320;

fn one() -> BigInt {
    BigInt::one() << BITS
}

fn mul(a: &BigInt, b: &BigInt) -> BigInt {
    (a * b) >> BITS
}

/// atan(1/x) by its Taylor series.
fn atan_inv(x: i64) -> BigInt {
    let x2 = BigInt::from(x * x);
    let mut term = one() / x;
    let mut sum = BigInt::zero();
    let mut k = 0i64;
    while !term.is_zero() {
        let t = &term / (2 * k + 1);
        if k % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
        term /= &x2;
        k += 1;
    }
    sum
}

/// Machin: pi = 16 atan(1/5) - 4 atan(1/239).
pub fn pi() -> BigInt {
    atan_inv(5) * 16 - atan_inv(239) * 4
}

/// (cos t, sin t) by Taylor series; fine for |t| < 8.
pub fn cos_sin(t: &BigInt) -> (BigInt, BigInt) {
    let mut cos = BigInt::zero();
    let mut sin = BigInt::zero();
    let mut term = one();
    let mut k = 0u64;
    while !term.is_zero() {
        match k % 4 {
            0 => cos += &term,
            1 => sin += &term,
            2 => cos -= &term,
            _ => sin -= &term,
        }
        k += 1;
        term = mul(&term, t) / k;
    }
    (cos, sin)
}

#[derive(Clone, Debug)]
pub struct Complex {
    pub re: BigInt,
    pub im: BigInt,
}

impl Complex {
    pub fn from_int(x: i64) -> Complex {
        Complex { re: one() * x, im: BigInt::zero() }
    }

    /// exp(2 pi i num / den)
    pub fn root(num: u64, den: u64, pi: &BigInt) -> Complex {
        let t = (pi * 2u32 * (num % den)) / den;
        let (re, im) = cos_sin(&t);
        Complex { re, im }
    }

    pub fn add(&self, o: &Complex) -> Complex {
        Complex { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn mul(&self, o: &Complex) -> Complex {
        Complex {
            re: mul(&self.re, &o.re) - mul(&self.im, &o.im),
            im: mul(&self.re, &o.im) + mul(&self.im, &o.re),
        }
    }

    pub fn scale(&self, num: i64, den: i64) -> Complex {
        Complex { re: &self.re * num / den, im: &self.im * num / den }
    }

    /// Nearest integer to the real part, and |imaginary part| as a fraction of one.
    pub fn round_real(&self) -> (BigInt, f64) {
        let half = BigInt::one() << (BITS - 1);
        let rounded = (&self.re + half).div_floor(&one());
        let im = self.im.abs();
        let im_frac = if im.bits() > 64 + BITS as u64 { f64::INFINITY } else {
            let shifted: BigInt = im >> (BITS - 60);
            shifted.to_string().parse::<f64>().unwrap() / 2f64.powi(60)
        };
        (rounded, im_frac)
    }

    /// Distance of the real part from its nearest integer, in units of 2^-BITS.
    pub fn real_distance_bits(&self) -> u64 {
        let (r, _) = self.round_real();
        (&self.re - r * one()).abs().bits()
    }
}

/// `h_n^-` for `p^(n+1)` from a numerical evaluation of every odd `B_{1,chi}`.
/// Characters, generator, discrete logs and conductors are all recomputed here
/// by brute force.
pub fn h_minus_numeric(p: u64, n: u32) -> (BigInt, Complex) {
    let k = n + 1;
    let modulus = p.pow(k);
    let phi = (p - 1) * p.pow(n);
    let g = super::naive_generator(p, k);
    let dlog = super::naive_dlog(p, k, g);
    let pi = pi();
    let roots: Vec<Complex> = (0..phi).map(|e| Complex::root(e, phi, &pi)).collect();

    let mut prod = Complex::from_int(2 * modulus as i64);
    for j in (1..phi).step_by(2) {
        // conductor: smallest p^t with chi trivial on units = 1 mod p^t
        let mut f = 1u64;
        loop {
            let trivial = (1..modulus)
                .step_by(f as usize)
                .filter_map(|x| dlog[x as usize])
                .all(|a| (j * a) % phi == 0);
            if trivial {
                break;
            }
            f *= p;
        }
        let mut b = Complex::from_int(0);
        for a in 1..=f {
            if let Some(l) = dlog[(a % modulus) as usize] {
                b = b.add(&roots[((j * l) % phi) as usize].scale(a as i64, 1));
            }
        }
        // -B/2 = -(1/f) sum / 2
        prod = prod.mul(&b.scale(-1, 2 * f as i64));
    }
    let (h, _) = prod.round_real();
    (h, prod)
}
