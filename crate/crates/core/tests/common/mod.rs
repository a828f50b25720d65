//! Test-only oracles that share no code with the crate's exact pipeline.

#![allow(dead_code)]

pub mod hp;

/// Brute-force generator of `(Z/p^k)^x`: the smallest element whose naive order is `phi`.
pub fn naive_generator(p: u64, k: u32) -> u64 {
    let modulus = p.pow(k);
    let phi = (p - 1) * p.pow(k - 1);
    (2..modulus)
        .find(|&g| {
            if g % p == 0 {
                return false;
            }
            let mut x = g;
            let mut t = 1;
            while x != 1 {
                x = x * g % modulus;
                t += 1;
            }
            t == phi
        })
        .expect("cyclic group")
}

/// Discrete logs against `g`, as a table indexed by residue (`None` off the units).
pub fn naive_dlog(p: u64, k: u32, g: u64) -> Vec<Option<u64>> {
    let modulus = p.pow(k);
    let phi = (p - 1) * p.pow(k - 1);
    let mut table = vec![None; modulus as usize];
    let mut x = 1u64;
    for a in 0..phi {
        table[x as usize] = Some(a);
        x = x * g % modulus;
    }
    table
}
