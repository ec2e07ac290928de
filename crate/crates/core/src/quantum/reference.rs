//! Published reference data for Z(α₁,α₂,α₁) over A₂: the Chevalley matrices
//! in the basis order (σ_000, σ_100, σ_010, σ_001, σ_110, σ_101, σ_011, σ_111)
//! with the single free invariant y3, and the integer matrix of quantum
//! multiplication by c₁ at q = 1.

use crate::error::{Error, Result};
use crate::quantum::poly::{Monomial, Poly, QPoly, Sym};
use crate::quantum::QMatrix;

pub const PRINTED_A: [[&str; 8]; 8] = [
    ["0", "q1q3y3", "q1q3y3", "-q1q3y3", "0", "0", "0", "q1q2q3y3"],
    ["1", "-q3", "0", "q3", "q1q3y3", "q1q3y3", "0", "0"],
    ["0", "q3", "0", "-q3", "0", "0", "0", "0"],
    ["0", "0", "0", "0", "q1q3y3", "q1q3y3", "0", "0"],
    ["0", "0", "1", "0", "0", "q3", "0", "0"],
    ["0", "0", "0", "1", "0", "-q3", "0", "0"],
    ["0", "0", "0", "0", "0", "q3", "0", "q1q3y3"],
    ["0", "0", "0", "0", "0", "0", "1", "0"],
];

pub const PRINTED_B: [[&str; 8]; 8] = [
    ["0", "q1q3y3", "q1q3y3", "-q1q3y3", "0", "0", "q1q2y3", "q1q2q3y3"],
    ["0", "0", "2q1y3", "0", "q1q3y3", "q1q3y3", "0", "q1q2y3"],
    ["1", "0", "-q1y3", "0", "0", "0", "0", "0"],
    ["0", "0", "q1y3", "0", "q1q3y3", "q1q3y3", "0", "0"],
    ["0", "1", "1", "0", "-q1y3", "0", "0", "0"],
    ["0", "0", "0", "0", "q1y3", "0", "0", "0"],
    ["0", "0", "0", "1", "0", "0", "0", "q1q3y3"],
    ["0", "0", "0", "0", "0", "1", "1", "0"],
];

pub const PRINTED_C: [[&str; 8]; 8] = [
    ["0", "-q1q3y3", "-q1q3y3", "q1q3y3+q2", "0", "0", "q1q2y3", "0"],
    ["0", "q3", "0", "-q3", "-q1q3y3", "-q1q3y3+q2", "0", "q1q2y3"],
    ["0", "-q3", "0", "q3", "0", "0", "q2", "0"],
    ["1", "0", "0", "0", "-q1q3y3", "-q1q3y3", "0", "0"],
    ["0", "0", "0", "0", "0", "-q3", "0", "q2"],
    ["0", "1", "0", "-2", "0", "q3", "0", "0"],
    ["0", "0", "1", "1", "0", "-q3", "0", "-q1q3y3"],
    ["0", "0", "0", "0", "1", "1", "-1", "0"],
];

/// The published integer matrix of c₁ ∗ at q = 1.
pub const PRINTED_C1_HAT: [[i64; 8]; 8] = [
    [0, 2, 2, -2, 0, 0, 3, 4],
    [3, -1, 2, 1, 2, 4, 0, 3],
    [1, 1, -1, -1, 0, 0, 2, 0],
    [2, 0, 1, 0, 2, 2, 0, 0],
    [0, 1, 4, 0, -1, 1, 0, 2],
    [0, 2, 0, -1, 1, -1, 0, 0],
    [0, 0, 2, 3, 0, 1, 0, 2],
    [0, 0, 0, 0, 2, 3, 2, 0],
];

/// Parses a sum of terms such as `-q1q3y3+q2` or `2q1y3`. Quantum
/// parameters are `q1`, `q2`, … (optionally `^k`); any other name is looked
/// up with `symbol`.
pub fn parse_qpoly(text: &str, ngens: usize, symbol: &dyn Fn(&str) -> Option<Sym>) -> Result<QPoly> {
    let err = || Error::Parse(format!("invalid polynomial `{text}`"));
    let s: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut out = QPoly::zero();
    let mut i = 0;
    if s.is_empty() {
        return Err(err());
    }
    while i < s.len() {
        let mut sign = 1;
        if s[i] == '+' || s[i] == '-' {
            if s[i] == '-' {
                sign = -1;
            }
            i += 1;
        }
        let start = i;
        while i < s.len() && s[i].is_ascii_digit() {
            i += 1;
        }
        let coeff: i64 = if i > start {
            s[start..i].iter().collect::<String>().parse().map_err(|_| err())?
        } else {
            1
        };
        let mut qexp = vec![0u32; ngens];
        let mut mono = Monomial::one();
        let mut saw_factor = false;
        while i < s.len() && s[i].is_ascii_alphabetic() {
            let name_start = i;
            i += 1;
            while i < s.len() && s[i].is_ascii_digit() {
                i += 1;
            }
            let name: String = s[name_start..i].iter().collect();
            let mut power = 1u32;
            if i < s.len() && s[i] == '^' {
                i += 1;
                let p_start = i;
                while i < s.len() && s[i].is_ascii_digit() {
                    i += 1;
                }
                power = s[p_start..i].iter().collect::<String>().parse().map_err(|_| err())?;
            }
            saw_factor = true;
            if let Some(k) = name.strip_prefix('q').and_then(|k| k.parse::<usize>().ok()) {
                if k == 0 || k > ngens {
                    return Err(err());
                }
                qexp[k - 1] += power;
            } else {
                let sym = symbol(&name).ok_or_else(err)?;
                for _ in 0..power {
                    mono = mono.mul(&Monomial::var(sym));
                }
            }
        }
        if i == start && !saw_factor {
            return Err(err());
        }
        out.add_term(qexp, Poly::from_terms([(mono, sign * coeff)]));
        if i < s.len() && s[i] != '+' && s[i] != '-' {
            return Err(err());
        }
    }
    Ok(out)
}

/// The published matrices A, B, C, with `y3` resolved by `symbol`.
pub fn printed_matrices(symbol: &dyn Fn(&str) -> Option<Sym>) -> Result<Vec<QMatrix>> {
    [PRINTED_A, PRINTED_B, PRINTED_C]
        .iter()
        .map(|m| {
            let entries = m
                .iter()
                .map(|row| row.iter().map(|t| parse_qpoly(t, 3, symbol)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            Ok(QMatrix::from_entries(entries))
        })
        .collect()
}

pub fn printed_c1_hat() -> Vec<Vec<i64>> {
    PRINTED_C1_HAT.iter().map(|r| r.to_vec()).collect()
}
