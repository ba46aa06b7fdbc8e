//! The warping map `φ_{σ_s}(a) = σ_s(a)/a`, σ-conjugacy classes, and
//! `(q-1)`-th root extraction.
//!
//! The nonzero classes are the `q - 1` cosets `C(γ^ℓ) = γ^ℓ·C(1)`, where
//! `C(1)` is the image of the warping map, so every class has
//! `⟦m⟧ = (q^m - 1)/(q - 1)` elements regardless of `s`.

use crate::field::{Fe, FieldCtx, Matrix};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConjugacyError {
    #[error("ZeroArgument: the warping map is undefined at 0")]
    ZeroArgument,
    #[error("ZeroConjugator: conjugation by 0 is undefined")]
    ZeroConjugator,
    #[error("WrongClass: {elem} is not in class {expected}")]
    WrongClass { elem: Fe, expected: ClassId },
    #[error("InvalidClass: class index {0} is out of range")]
    InvalidClass(u64),
    #[error("InapplicableField: gcd(⟦m⟧ = {class_size}, {exponent}) = {gcd} != 1")]
    InapplicableField { class_size: u64, exponent: u64, gcd: u64 },
}

/// A σ-conjugacy class: `C(0) = {0}` or `C(γ^ℓ)` with `0 <= ℓ <= q - 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassId {
    Zero,
    Nonzero(u32),
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassId::Zero => f.write_str("C(0)"),
            ClassId::Nonzero(0) => f.write_str("C(1)"),
            ClassId::Nonzero(l) => write!(f, "C(g{l})"),
        }
    }
}

/// `φ_{σ_s}(a) = a^{q^s - 1}`.
pub fn warp(ctx: &FieldCtx, a: Fe) -> Result<Fe, ConjugacyError> {
    warp_with(ctx, a, ctx.s())
}

/// Warping map for the automorphism `σ_t` instead of the context's `σ_s`.
pub fn warp_with(ctx: &FieldCtx, a: Fe, t: u32) -> Result<Fe, ConjugacyError> {
    let inv = ctx.inv(a).map_err(|_| ConjugacyError::ZeroArgument)?;
    Ok(ctx.mul(ctx.frobenius_with(a, 1, t), inv))
}

/// `a^c = a·φ_{σ_s}(c)`.
pub fn conjugate(ctx: &FieldCtx, a: Fe, c: Fe) -> Result<Fe, ConjugacyError> {
    let w = warp(ctx, c).map_err(|_| ConjugacyError::ZeroConjugator)?;
    Ok(ctx.mul(a, w))
}

/// Class membership by exponentiation: `α^{⟦m⟧} = (γ^{⟦m⟧})^ℓ ∈ F_q^*`,
/// resolved through a table of the `q - 1` powers of `γ^{⟦m⟧}`.
#[derive(Clone, Debug)]
pub struct ClassLookup {
    class_size: u64,
    /// Indexed by the position of `(γ^{⟦m⟧})^ℓ` in the subfield.
    by_subfield_index: Vec<u32>,
}

impl ClassLookup {
    pub fn new(ctx: &FieldCtx) -> Self {
        let class_size = ctx.class_size();
        let generator = ctx.pow(ctx.primitive(), class_size as u128);
        let mut by_subfield_index = vec![u32::MAX; ctx.q() as usize];
        let mut power = Fe::ONE;
        for l in 0..ctx.q() - 1 {
            let idx = ctx.subfield_index(power).expect("γ^⟦m⟧ lies in F_q");
            by_subfield_index[idx] = l as u32;
            power = ctx.mul(power, generator);
        }
        ClassLookup { class_size, by_subfield_index }
    }

    pub fn class_of(&self, ctx: &FieldCtx, a: Fe) -> ClassId {
        if a.is_zero() {
            return ClassId::Zero;
        }
        let norm = ctx.pow(a, self.class_size as u128);
        let idx = ctx.subfield_index(norm).expect("α^⟦m⟧ lies in F_q");
        ClassId::Nonzero(self.by_subfield_index[idx])
    }
}

/// Class of `a`, via [`ClassLookup`].
pub fn class_of(ctx: &FieldCtx, a: Fe) -> ClassId {
    ClassLookup::new(ctx).class_of(ctx, a)
}

/// Class of `a` read directly off its discrete log: `ℓ = log(a) mod (q - 1)`.
pub fn class_of_by_log(ctx: &FieldCtx, a: Fe) -> ClassId {
    match a.log() {
        None => ClassId::Zero,
        Some(i) => ClassId::Nonzero((i as u64 % (ctx.q() - 1)) as u32),
    }
}

fn check_class(ctx: &FieldCtx, l: u64) -> Result<(), ConjugacyError> {
    if l < ctx.q() - 1 {
        Ok(())
    } else {
        Err(ConjugacyError::InvalidClass(l))
    }
}

/// Elements of `C(γ^ℓ)` ordered by discrete log.
pub fn class_elements(ctx: &FieldCtx, l: u64) -> Result<Vec<Fe>, ConjugacyError> {
    check_class(ctx, l)?;
    let step = ctx.q() - 1;
    Ok((0..ctx.class_size()).map(|j| ctx.gamma_pow(l + j * step)).collect())
}

/// Elements of a class given by its id.
pub fn class_members(ctx: &FieldCtx, class: ClassId) -> Vec<Fe> {
    match class {
        ClassId::Zero => vec![Fe::ZERO],
        ClassId::Nonzero(l) => class_elements(ctx, l as u64).expect("class ids are in range"),
    }
}

/// The orbit `{a·φ_{σ_t}(c) : c ≠ 0}`, sorted.
fn orbit(ctx: &FieldCtx, a: Fe, t: u32) -> Vec<Fe> {
    let mut out: Vec<Fe> = ctx
        .nonzero_elements()
        .map(|c| ctx.mul(a, warp_with(ctx, c, t).expect("c is nonzero")))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Checks `C_{σ_s}(a) = C_{σ}(a)` by enumerating both orbits.
pub fn class_invariance_s(ctx: &FieldCtx, a: Fe) -> bool {
    orbit(ctx, a, ctx.s()) == orbit(ctx, a, 1)
}

/// The `F_q`-multiple of `a` with the smallest discrete log.
pub fn canonical_multiple(ctx: &FieldCtx, a: Fe) -> Fe {
    match a.log() {
        None => Fe::ZERO,
        Some(i) => ctx.gamma_pow(i as u64 % ctx.class_size()),
    }
}

fn ensure_class(ctx: &FieldCtx, alpha: Fe, l: u64) -> Result<(), ConjugacyError> {
    check_class(ctx, l)?;
    let expected = ClassId::Nonzero(l as u32);
    if class_of(ctx, alpha) == expected {
        Ok(())
    } else {
        Err(ConjugacyError::WrongClass { elem: alpha, expected })
    }
}

/// Matrix over `F_q` of the linear map `v ↦ σ_s(v) - βv` in the context basis.
pub fn unwarp_system(ctx: &FieldCtx, beta: Fe) -> Matrix {
    let columns: Vec<Vec<Fe>> = ctx
        .basis()
        .iter()
        .map(|&b| ctx.coords(ctx.sub(ctx.frobenius(b, 1), ctx.mul(beta, b))))
        .collect();
    Matrix::from_columns(&columns, ctx.m() as usize)
}

/// Finds `a ≠ 0` with `γ^ℓ·φ_{σ_s}(a) = α` as a kernel vector of
/// `v ↦ σ_s(v) - (αγ^{-ℓ})v` (for `s = 1`, the nonzero roots of `x^q - βx`).
///
/// The kernel is one-dimensional; the returned root is its nonzero element
/// with the smallest discrete log.
pub fn unwarp_method1(ctx: &FieldCtx, alpha: Fe, l: u64) -> Result<Fe, ConjugacyError> {
    ensure_class(ctx, alpha, l)?;
    let beta = ctx.mul(alpha, ctx.gamma_pow_signed(-(l as i64)));
    let kernel = unwarp_system(ctx, beta).kernel(ctx);
    debug_assert_eq!(kernel.cols(), 1, "kernel of σ_s(v) - βv has dimension 1");
    let root = ctx.uncoords(&kernel.column(0)).expect("kernel entries lie in F_q");
    Ok(canonical_multiple(ctx, root))
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Exponent `t` with `(q^s - 1)·t ≡ 1 (mod ⟦m⟧)`, when it exists.
pub fn method2_exponent(ctx: &FieldCtx) -> Result<u64, ConjugacyError> {
    let class_size = ctx.class_size();
    // q^s mod ⟦m⟧ without overflow
    let qs = (0..ctx.s()).fold(1u128 % class_size as u128, |acc, _| acc * ctx.q() as u128 % class_size as u128);
    let exponent = ((qs + class_size as u128 - 1 % class_size as u128) % class_size as u128) as u64;
    let (g, x, _) = ext_gcd(exponent as i128, class_size as i128);
    if g.unsigned_abs() != 1 && class_size != 1 {
        return Err(ConjugacyError::InapplicableField { class_size, exponent, gcd: g.unsigned_abs() as u64 });
    }
    Ok(x.rem_euclid(class_size as i128) as u64)
}

/// Root extraction by a single exponentiation: `a = (αγ^{-ℓ})^t`.
pub fn unwarp_method2(ctx: &FieldCtx, alpha: Fe, l: u64) -> Result<Fe, ConjugacyError> {
    let t = method2_exponent(ctx)?;
    ensure_class(ctx, alpha, l)?;
    let beta = ctx.mul(alpha, ctx.gamma_pow_signed(-(l as i64)));
    Ok(ctx.pow(beta, t as u128))
}
