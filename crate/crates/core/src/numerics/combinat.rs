//! Exact combinatorial numbers.

use rug::Integer;

use super::Rat;

pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

pub fn binomial(n: u32, k: u32) -> Integer {
    if k > n {
        return Integer::new();
    }
    Integer::from(Integer::binomial_u(n, k))
}

/// `(2n choose n)`, the number of bridges of semi-length `n`.
pub fn central_binomial(n: u32) -> Integer {
    binomial(2 * n, n)
}

/// Catalan number `C_n = (2n choose n)/(n+1)`.
pub fn catalan(n: u32) -> Rat {
    Rat::from(central_binomial(n) / Integer::from(n + 1))
}

/// `c_k = 2^(-2k-1) C_k`; these sum to 1 over `k >= 0`.
pub fn normalized_catalan(k: u32) -> Rat {
    catalan(k) >> (2 * k + 1)
}

/// `n!!` for `n >= -1`, with `(-1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> Rat {
    assert!(n >= -1, "double factorial needs n >= -1");
    if n <= 0 {
        return Rat::from(1);
    }
    Rat::from(Integer::from(Integer::factorial_2(n as u32)))
}

/// Rising factorial `x (x+1) ... (x+n-1)`.
pub fn pochhammer_rat(x: &Rat, n: u32) -> Rat {
    let mut acc = Rat::from(1);
    let mut t = x.clone();
    for _ in 0..n {
        acc *= &t;
        t += 1;
    }
    acc
}
