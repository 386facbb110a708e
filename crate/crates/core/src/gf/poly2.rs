//! Polynomials over GF(2) packed into a `u128` (bit `i` is the coefficient of `x^i`).
//!
//! Only what the field layer needs: reduction, modular multiplication, gcd and
//! the two irreducibility tests used to vet reduction polynomials.

/// Degree of a packed polynomial, `None` for the zero polynomial.
pub fn degree(a: u128) -> Option<u32> {
    if a == 0 {
        None
    } else {
        Some(127 - a.leading_zeros())
    }
}

/// Remainder of `a` modulo `f`. `f` must be non-zero.
pub fn rem(mut a: u128, f: u128) -> u128 {
    let df = degree(f).expect("division by the zero polynomial");
    while let Some(da) = degree(a) {
        if da < df {
            break;
        }
        a ^= f << (da - df);
    }
    a
}

/// `a * b mod f` for `a, b` already reduced modulo `f` (degree of `f` at most 127).
pub fn mul_mod(a: u128, b: u128, f: u128) -> u128 {
    let df = degree(f).expect("zero modulus");
    if df == 0 {
        return 0;
    }
    let top = 1u128 << df;
    let mut acc = 0u128;
    // Shift-and-add from the high bit of `b`, reducing after every doubling.
    for bit in (0..df).rev() {
        let carry = acc & (top >> 1) != 0;
        acc <<= 1;
        if carry {
            acc ^= f;
        }
        if (b >> bit) & 1 == 1 {
            acc ^= a;
        }
    }
    acc
}

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// `x^(2^k) mod f` by repeated squaring.
fn x_pow_two_pow(k: u32, f: u128) -> u128 {
    let mut r = rem(0b10, f);
    for _ in 0..k {
        r = mul_mod(r, r, f);
    }
    r
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test: `f` of degree `m` is irreducible iff `x^(2^m) = x mod f` and
/// `gcd(x^(2^(m/r)) - x, f) = 1` for every prime `r | m`.
pub fn rabin_irreducible(f: u128) -> bool {
    let m = match degree(f) {
        Some(m) if m >= 1 => m,
        _ => return false,
    };
    if m == 1 {
        return true;
    }
    if x_pow_two_pow(m, f) != 0b10 {
        return false;
    }
    prime_factors(m)
        .into_iter()
        .all(|r| gcd(f, x_pow_two_pow(m / r, f) ^ 0b10) == 1)
}

/// Exhaustive trial division by every polynomial of degree `1..=m/2`.
///
/// Only practical for small degrees; callers restrict it to `m <= 32`.
pub fn trial_division_irreducible(f: u128) -> bool {
    let m = match degree(f) {
        Some(m) if m >= 1 => m,
        _ => return false,
    };
    for d in 1..=m / 2 {
        let lo = 1u128 << d;
        for g in lo..(lo << 1) {
            if rem(f, g) == 0 {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_mod_matches_schoolbook() {
        // x * x^2 in GF(2)[x]/(x^3 + x + 1) = x^3 = x + 1
        assert_eq!(mul_mod(0b010, 0b100, 0b1011), 0b011);
    }

    #[test]
    fn known_reducible_and_irreducible() {
        // x^2 + 1 = (x + 1)^2
        assert!(!rabin_irreducible(0b101));
        assert!(!trial_division_irreducible(0b101));
        assert!(rabin_irreducible(0b111));
        assert!(trial_division_irreducible(0b111));
        // AES polynomial
        assert!(rabin_irreducible(0x11b));
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2
        assert!(!rabin_irreducible(0b10101));
    }

    #[test]
    fn tests_agree_up_to_degree_ten() {
        for f in 2u128..(1 << 11) {
            assert_eq!(
                rabin_irreducible(f),
                trial_division_irreducible(f),
                "f = {f:#b}"
            );
        }
    }
}
