//! Finite fields `F_{p^n}` with a distinguished subfield `F_q`, `q = p^k`.
//!
//! Elements are stored in discrete-log form: either zero or `γ^i` for the
//! root `γ` of a primitive modulus. Multiplication is exponent addition and
//! addition goes through a Zech logarithm table, so an [`Fe`] stays a single
//! integer. Fields are capped at `2^20` elements.
//!
//! The field is viewed as `F_{q^m}` over `F_q` with `m = n / k`, together with
//! the Frobenius automorphism `σ_s(a) = a^{q^s}` for a fixed `s` coprime to `m`.

mod linalg;

pub use linalg::{Matrix, Rref};

use std::fmt;
use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;

/// Sentinel in the Zech table for `1 + γ^i = 0`.
const ZECH_ZERO: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("NonPrimeP: characteristic {0} is not prime")]
    NonPrimeP(u32),
    #[error("BadDegreeDivisibility: k = {k} must be a positive divisor of n = {n}")]
    BadDegreeDivisibility { n: u32, k: u32 },
    #[error("GcdViolation: gcd(s = {s}, m = {m}) = {gcd}, expected 1")]
    GcdViolation { s: u32, m: u32, gcd: u32 },
    #[error("NonPrimitiveModpoly: {0}")]
    NonPrimitiveModpoly(String),
    #[error("FieldTooLarge: {p}^{n} exceeds 2^20 elements")]
    FieldTooLarge { p: u32, n: u32 },
    #[error("DivisionByZero: zero has no inverse")]
    DivisionByZero,
    #[error("Overflow: exact value of {0} does not fit in 128 bits")]
    Overflow(String),
    #[error("NotABasis: {0}")]
    NotABasis(String),
    #[error("ParseError: {0}")]
    Parse(String),
}

/// A field element: zero or a power of the primitive element `γ`.
///
/// The raw encoding is `0` for zero and `i + 1` for `γ^i`, so the derived
/// ordering is the canonical one (zero first, then by discrete log).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fe(u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    /// Discrete log, or `None` for zero.
    pub fn log(self) -> Option<u32> {
        self.0.checked_sub(1)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Position in the canonical order, `0..p^n`.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    fn from_log(i: u32) -> Fe {
        Fe(i + 1)
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.log() {
            None => f.write_str("0"),
            Some(0) => f.write_str("1"),
            Some(i) => write!(f, "g{i}"),
        }
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Immutable description of `F_{p^n} = F_{q^m}` over `F_q`.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldCtx {
    p: u32,
    n: u32,
    k: u32,
    m: u32,
    s: u32,
    q: u64,
    order: u64,
    /// Monic primitive modulus, constant term first.
    modpoly: Vec<u32>,
    /// Vector representation (base-p digits, constant first) to discrete log.
    log_table: Vec<u32>,
    /// Discrete log to vector representation.
    antilog_table: Vec<u32>,
    /// `zech[i] = log(1 + γ^i)`.
    zech: Vec<u32>,
    neg_one_log: u32,
    /// `q^t mod (p^n - 1)` for `t` in `0..m`.
    q_pow_mod: Vec<u64>,
    subfield: Vec<Fe>,
    basis: Vec<Fe>,
    coord_index: Vec<u32>,
    coord_elem: Vec<Fe>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("n", &self.n)
            .field("k", &self.k)
            .field("s", &self.s)
            .field("modpoly", &self.modpoly)
            .finish()
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn digits_to_int(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Builds the antilog table for `modpoly`, or `None` when `x` does not have
/// multiplicative order `p^n - 1` modulo it.
fn antilog_for(p: u32, n: u32, modpoly: &[u32]) -> Option<Vec<u32>> {
    let n = n as usize;
    let order = (p as u64).pow(n as u32) - 1;
    let mut digits = vec![0u32; n];
    digits[0] = 1;
    let mut table = Vec::with_capacity(order as usize);
    for i in 0..order {
        let v = digits_to_int(&digits, p);
        if i > 0 && v == 1 {
            return None;
        }
        table.push(v);
        // multiply by x, then reduce x^n = -(f_0 + ... + f_{n-1} x^{n-1})
        let top = digits[n - 1];
        for j in (1..n).rev() {
            digits[j] = digits[j - 1];
        }
        digits[0] = 0;
        if top != 0 {
            for (d, &c) in digits.iter_mut().zip(modpoly) {
                *d = (*d + (p - (top * c) % p)) % p;
            }
        }
    }
    (digits_to_int(&digits, p) == 1).then_some(table)
}

fn modpoly_from_int(p: u32, n: u32, value: u64) -> Vec<u32> {
    let mut v = value;
    let mut out = Vec::with_capacity(n as usize + 1);
    for _ in 0..=n {
        out.push((v % p as u64) as u32);
        v /= p as u64;
    }
    out
}

fn modpoly_to_int(p: u32, modpoly: &[u32]) -> u64 {
    modpoly.iter().rev().fold(0u64, |acc, &d| acc * p as u64 + d as u64)
}

impl FieldCtx {
    /// Builds `F_{p^n}` over `F_{p^k}` with automorphism exponent `s`.
    ///
    /// `modpoly` is monic of degree `n`, constant term first. Without it the
    /// lexicographically smallest primitive polynomial is used.
    pub fn new(p: u32, n: u32, k: u32, s: u32, modpoly: Option<&[u32]>) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NonPrimeP(p));
        }
        if n == 0 || k == 0 || !n.is_multiple_of(k) {
            return Err(FieldError::BadDegreeDivisibility { n, k });
        }
        let m = n / k;
        let g = gcd(s as u64, m as u64) as u32;
        if g != 1 {
            return Err(FieldError::GcdViolation { s, m, gcd: g });
        }
        let order = (p as u64)
            .checked_pow(n)
            .filter(|&o| o <= MAX_ORDER)
            .ok_or(FieldError::FieldTooLarge { p, n })?;

        let (modpoly, antilog_table) = match modpoly {
            Some(poly) => {
                let poly = poly.to_vec();
                if poly.len() != n as usize + 1 || poly[n as usize] != 1 || poly.iter().any(|&c| c >= p) {
                    return Err(FieldError::NonPrimitiveModpoly(format!(
                        "{poly:?} is not a monic degree-{n} polynomial over F_{p}"
                    )));
                }
                let table = antilog_for(p, n, &poly).ok_or_else(|| {
                    FieldError::NonPrimitiveModpoly(format!(
                        "modulus {} is not primitive over F_{p}",
                        modpoly_to_int(p, &poly)
                    ))
                })?;
                (poly, table)
            }
            None => (order..2 * order)
                .map(|v| modpoly_from_int(p, n, v))
                .find_map(|poly| antilog_for(p, n, &poly).map(|t| (poly, t)))
                .expect("a primitive polynomial exists for every degree"),
        };

        let mult = order - 1;
        let mut log_table = vec![0u32; order as usize];
        for (i, &v) in antilog_table.iter().enumerate() {
            log_table[v as usize] = i as u32;
        }
        // 1 + v adds one to the constant digit
        let plus_one = |v: u32| v - v % p + (v % p + 1) % p;
        let zech = antilog_table
            .iter()
            .map(|&v| match plus_one(v) {
                0 => ZECH_ZERO,
                w => log_table[w as usize],
            })
            .collect();
        let neg_one_log = if p == 2 { 0 } else { (mult / 2) as u32 };
        let q = (p as u64).pow(k);
        let q_pow_mod = (0..m)
            .scan(1u64, |acc, _| {
                let cur = *acc;
                *acc = (*acc * (q % mult.max(1))) % mult.max(1);
                Some(cur)
            })
            .collect();
        let step = mult / (q - 1);
        let subfield = std::iter::once(Fe::ZERO)
            .chain((0..q - 1).map(|j| Fe::from_log((j * step) as u32)))
            .collect();
        let basis = (0..m).map(|i| Fe::from_log(i % mult as u32)).collect();

        let mut ctx = FieldCtx {
            p,
            n,
            k,
            m,
            s,
            q,
            order,
            modpoly,
            log_table,
            antilog_table,
            zech,
            neg_one_log,
            q_pow_mod,
            subfield,
            basis,
            coord_index: Vec::new(),
            coord_elem: Vec::new(),
        };
        ctx.build_coords()?;
        Ok(ctx)
    }

    /// Parses `"p,n,k,s[,modpoly]"`, where `modpoly` is the integer whose
    /// base-`p` digits (most significant first) are the coefficients.
    pub fn from_spec(spec: &str) -> Result<Self, FieldError> {
        let parts: Vec<u64> = spec
            .split(',')
            .map(|t| t.trim().parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|e| FieldError::Parse(format!("field spec {spec:?}: {e}")))?;
        if !(4..=5).contains(&parts.len()) {
            return Err(FieldError::Parse(format!(
                "field spec {spec:?} must be \"p,n,k,s[,modpoly]\""
            )));
        }
        let small = |v: u64| u32::try_from(v).map_err(|_| FieldError::Parse(format!("{v} out of range")));
        let (p, n, k, s) = (small(parts[0])?, small(parts[1])?, small(parts[2])?, small(parts[3])?);
        let modpoly = match parts.get(4) {
            Some(&v) => {
                if !is_prime(p) {
                    return Err(FieldError::NonPrimeP(p));
                }
                let digits = modpoly_from_int(p, n, v);
                if modpoly_to_int(p, &digits) != v {
                    return Err(FieldError::NonPrimitiveModpoly(format!(
                        "{v} has degree above {n} over F_{p}"
                    )));
                }
                Some(digits)
            }
            None => None,
        };
        Self::new(p, n, k, s, modpoly.as_deref())
    }

    /// Replaces the `F_q`-basis used by [`coords`](Self::coords).
    pub fn with_basis(mut self, basis: Vec<Fe>) -> Result<Self, FieldError> {
        if basis.len() != self.m as usize {
            return Err(FieldError::NotABasis(format!("expected {} elements, got {}", self.m, basis.len())));
        }
        self.basis = basis;
        self.build_coords()?;
        Ok(self)
    }

    fn build_coords(&mut self) -> Result<(), FieldError> {
        let q = self.q as usize;
        let total = self.order as usize;
        let mut coord_elem = vec![Fe::ZERO; total];
        let mut coord_index = vec![u32::MAX; total];
        for (idx, slot) in coord_elem.iter_mut().enumerate() {
            let mut rest = idx;
            let mut value = Fe::ZERO;
            for &b in &self.basis {
                let c = self.subfield[rest % q];
                rest /= q;
                value = self.add(value, self.mul(c, b));
            }
            if coord_index[value.index()] != u32::MAX {
                return Err(FieldError::NotABasis(format!(
                    "{:?} is not linearly independent over F_{}",
                    self.basis, self.q
                )));
            }
            coord_index[value.index()] = idx as u32;
            *slot = value;
        }
        self.coord_elem = coord_elem;
        self.coord_index = coord_index;
        Ok(())
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Extension degree of `F_{q^m}` over `F_q`.
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// Subfield order `q = p^k`.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Field order `p^n = q^m`.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Order of the multiplicative group, `p^n - 1`.
    pub fn mult_order(&self) -> u64 {
        self.order - 1
    }

    /// Modulus coefficients, constant term first.
    pub fn modpoly(&self) -> &[u32] {
        &self.modpoly
    }

    /// Modulus in the integer form used by field spec strings.
    pub fn modpoly_int(&self) -> u64 {
        modpoly_to_int(self.p, &self.modpoly)
    }

    /// Canonical spec string, always including the modulus.
    pub fn spec_string(&self) -> String {
        format!("{},{},{},{},{}", self.p, self.n, self.k, self.s, self.modpoly_int())
    }

    pub fn basis(&self) -> &[Fe] {
        &self.basis
    }

    /// Elements of `F_q` in subfield order: zero, then `γ^{j(p^n-1)/(q-1)}`.
    pub fn subfield(&self) -> &[Fe] {
        &self.subfield
    }

    /// Position of `a` in [`subfield`](Self::subfield), if `a ∈ F_q`.
    pub fn subfield_index(&self, a: Fe) -> Option<usize> {
        match a.log() {
            None => Some(0),
            Some(i) => {
                let step = (self.mult_order() / (self.q - 1)) as u32;
                (i % step == 0).then(|| (i / step) as usize + 1)
            }
        }
    }

    pub fn in_subfield(&self, a: Fe) -> bool {
        self.subfield_index(a).is_some()
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.order as u32).map(Fe)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (1..self.order as u32).map(Fe)
    }

    /// `γ^i`, with `i` reduced modulo `p^n - 1`.
    pub fn gamma_pow(&self, i: u64) -> Fe {
        Fe::from_log((i % self.mult_order()) as u32)
    }

    /// `γ^i` for a possibly negative exponent.
    pub fn gamma_pow_signed(&self, i: i64) -> Fe {
        Fe::from_log(i.rem_euclid(self.mult_order() as i64) as u32)
    }

    pub fn primitive(&self) -> Fe {
        self.gamma_pow(1)
    }

    /// Element with the given vector representation (base-`p` digits of the
    /// polynomial basis, constant first).
    pub fn from_vector_rep(&self, v: u32) -> Fe {
        if v == 0 {
            Fe::ZERO
        } else {
            Fe::from_log(self.log_table[v as usize])
        }
    }

    pub fn to_vector_rep(&self, a: Fe) -> u32 {
        a.log().map_or(0, |i| self.antilog_table[i as usize])
    }

    /// `p` as an element, i.e. the embedded integer `c` for `0 <= c < p`.
    pub fn from_int(&self, c: u32) -> Fe {
        self.from_vector_rep(c % self.p)
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let (Some(i), Some(j)) = (a.log(), b.log()) else {
            return if a.is_zero() { b } else { a };
        };
        let n = self.mult_order() as u32;
        let d = if j >= i { j - i } else { j + n - i };
        match self.zech[d as usize] {
            ZECH_ZERO => Fe::ZERO,
            z => Fe::from_log(((i as u64 + z as u64) % n as u64) as u32),
        }
    }

    pub fn neg(&self, a: Fe) -> Fe {
        match a.log() {
            None => Fe::ZERO,
            Some(i) => self.gamma_pow(i as u64 + self.neg_one_log as u64),
        }
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        match (a.log(), b.log()) {
            (Some(i), Some(j)) => self.gamma_pow(i as u64 + j as u64),
            _ => Fe::ZERO,
        }
    }

    pub fn inv(&self, a: Fe) -> Result<Fe, FieldError> {
        let i = a.log().ok_or(FieldError::DivisionByZero)?;
        Ok(self.gamma_pow(self.mult_order() - i as u64))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` with `0^0 = 1`.
    pub fn pow(&self, a: Fe, e: u128) -> Fe {
        match a.log() {
            None if e == 0 => Fe::ONE,
            None => Fe::ZERO,
            Some(i) => {
                let n = self.mult_order() as u128;
                self.gamma_pow(((i as u128 * (e % n)) % n) as u64)
            }
        }
    }

    /// `a^e` for an exponent already reduced modulo `p^n - 1`, where the
    /// unreduced exponent is known to be positive (so `0 ↦ 0`).
    pub(crate) fn pow_reduced_positive(&self, a: Fe, e: u64) -> Fe {
        match a.log() {
            None => Fe::ZERO,
            Some(i) => self.gamma_pow((i as u64 * e) % self.mult_order()),
        }
    }

    /// `σ_s^j(a) = a^{q^{js}}`; negative `j` applies the inverse.
    pub fn frobenius(&self, a: Fe, j: i64) -> Fe {
        self.frobenius_with(a, j, self.s)
    }

    /// `a^{q^{j t}}` for an arbitrary exponent `t` in place of `s`.
    pub fn frobenius_with(&self, a: Fe, j: i64, t: u32) -> Fe {
        let e = (j * t as i64).rem_euclid(self.m as i64) as usize;
        self.pow_reduced_positive(a, self.q_pow_mod[e])
    }

    /// `[i]_s = q^{is}`, exact.
    pub fn bracket(&self, i: u64) -> Result<u128, FieldError> {
        self.bracket_with(i, self.s)
    }

    /// `⟦i⟧_s = (q^{is} - 1)/(q^s - 1)`, exact.
    pub fn dbracket(&self, i: u64) -> Result<u128, FieldError> {
        self.dbracket_with(i, self.s)
    }

    pub fn bracket_with(&self, i: u64, s: u32) -> Result<u128, FieldError> {
        let exp = i
            .checked_mul(s as u64)
            .and_then(|e| u32::try_from(e).ok())
            .ok_or_else(|| FieldError::Overflow(format!("[{i}]_{s}")))?;
        (self.q as u128)
            .checked_pow(exp)
            .ok_or_else(|| FieldError::Overflow(format!("[{i}]_{s}")))
    }

    pub fn dbracket_with(&self, i: u64, s: u32) -> Result<u128, FieldError> {
        let qs = self.bracket_with(1, s)?;
        let mut acc: u128 = 0;
        for _ in 0..i {
            acc = acc
                .checked_mul(qs)
                .and_then(|v| v.checked_add(1))
                .ok_or_else(|| FieldError::Overflow(format!("⟦{i}⟧_{s}")))?;
        }
        Ok(acc)
    }

    /// `[i]_s mod (p^n - 1)`; never overflows.
    pub fn bracket_mod(&self, i: u64) -> u64 {
        self.q_pow_mod[((i * self.s as u64) % self.m as u64) as usize]
    }

    /// `⟦i⟧_s mod (p^n - 1)`; never overflows.
    pub fn dbracket_mod(&self, i: u64) -> u64 {
        let n = self.mult_order();
        (0..i).fold(0u64, |acc, t| (acc + self.bracket_mod(t)) % n)
    }

    /// `⟦m⟧ = (q^m - 1)/(q - 1)`, the size of every nonzero conjugacy class.
    pub fn class_size(&self) -> u64 {
        self.mult_order() / (self.q - 1)
    }

    /// Coordinates of `a` over `F_q` in the current basis.
    pub fn coords(&self, a: Fe) -> Vec<Fe> {
        let q = self.q as usize;
        let mut rest = self.coord_index[a.index()] as usize;
        (0..self.m)
            .map(|_| {
                let c = self.subfield[rest % q];
                rest /= q;
                c
            })
            .collect()
    }

    /// Inverse of [`coords`](Self::coords). Entries must lie in `F_q`.
    pub fn uncoords(&self, v: &[Fe]) -> Result<Fe, FieldError> {
        if v.len() != self.m as usize {
            return Err(FieldError::Parse(format!("expected {} coordinates, got {}", self.m, v.len())));
        }
        let q = self.q as usize;
        let mut idx = 0usize;
        for &c in v.iter().rev() {
            let ci = self
                .subfield_index(c)
                .ok_or_else(|| FieldError::Parse(format!("{c} is not in F_{}", self.q)))?;
            idx = idx * q + ci;
        }
        Ok(self.coord_elem[idx])
    }

    /// Parses `"0"`, `"1"` or `"g<i>"`.
    pub fn parse_elem(&self, token: &str) -> Result<Fe, FieldError> {
        let t = token.trim();
        match t {
            "0" => Ok(Fe::ZERO),
            "1" => Ok(Fe::ONE),
            _ => {
                let digits = t
                    .strip_prefix('g')
                    .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
                    .ok_or_else(|| FieldError::Parse(format!("bad element token {t:?}")))?;
                let i: u128 = digits
                    .parse()
                    .map_err(|_| FieldError::Parse(format!("bad element token {t:?}")))?;
                Ok(self.gamma_pow((i % self.mult_order() as u128) as u64))
            }
        }
    }

    /// Parses a comma-separated list of element tokens; empty input is empty.
    pub fn parse_elems(&self, list: &str) -> Result<Vec<Fe>, FieldError> {
        list.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| self.parse_elem(t))
            .collect()
    }

    /// Same field, modulus, basis and automorphism.
    pub fn same_field(&self, other: &FieldCtx) -> bool {
        std::ptr::eq(self, other)
            || (self.p == other.p
                && self.n == other.n
                && self.k == other.k
                && self.s == other.s
                && self.modpoly == other.modpoly
                && self.basis == other.basis)
    }
}
