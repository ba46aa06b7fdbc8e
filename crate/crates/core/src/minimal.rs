//! Minimal polynomials, P-independence and P-closure.
//!
//! Inside a single nonzero class `C(γ^ℓ)` P-independence coincides with
//! `F_q`-linear independence of the warp preimages, which gives a closure
//! algorithm that never scans the whole field ([`closure_fast`]).

use crate::conjugacy::{self, ClassId, ConjugacyError};
use crate::field::{Fe, FieldCtx, Matrix};
use crate::skewpoly::{SkewError, SkewPoly};
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Fields above this size use [`closure_fast`] for single-class inputs.
const FAST_CLOSURE_THRESHOLD: u64 = 1 << 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MinimalError {
    #[error("MixedClasses: the points do not lie in a single nonzero conjugacy class")]
    MixedClasses,
    #[error("NotClosed: the point set is not P-closed")]
    NotClosed,
    #[error("MixedContexts: point sets live in different fields")]
    MixedContexts,
    #[error("DecompositionViolated: {0}")]
    DecompositionViolated(String),
    #[error(transparent)]
    Skew(#[from] SkewError),
    #[error(transparent)]
    Conjugacy(#[from] ConjugacyError),
}

/// A finite set of field elements in canonical order (zero first, then by
/// discrete log).
#[derive(Clone)]
pub struct PointSet {
    ctx: Arc<FieldCtx>,
    elems: Vec<Fe>,
}

impl PointSet {
    pub fn new(ctx: Arc<FieldCtx>, elems: impl IntoIterator<Item = Fe>) -> Self {
        let elems: BTreeSet<Fe> = elems.into_iter().collect();
        PointSet { ctx, elems: elems.into_iter().collect() }
    }

    pub fn empty(ctx: Arc<FieldCtx>) -> Self {
        PointSet { ctx, elems: Vec::new() }
    }

    /// Selects `elems[i]` for every set bit `i` of `mask`.
    pub fn from_mask(ctx: Arc<FieldCtx>, ground: &[Fe], mask: u64) -> Self {
        Self::new(ctx, ground.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e))
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn elems(&self) -> &[Fe] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, a: Fe) -> bool {
        self.elems.binary_search(&a).is_ok()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.elems.iter().all(|&a| other.contains(a))
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        Self::new(self.ctx.clone(), self.elems.iter().chain(&other.elems).copied())
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        Self::new(self.ctx.clone(), self.elems.iter().copied().filter(|&a| other.contains(a)))
    }

    pub fn with(&self, a: Fe) -> PointSet {
        Self::new(self.ctx.clone(), self.elems.iter().copied().chain([a]))
    }

    pub fn without(&self, a: Fe) -> PointSet {
        Self::new(self.ctx.clone(), self.elems.iter().copied().filter(|&b| b != a))
    }

    /// The nonzero class containing every point, if there is one.
    pub fn single_class(&self) -> Option<u32> {
        let lookup = conjugacy::ClassLookup::new(&self.ctx);
        let mut class = None;
        for &a in &self.elems {
            match lookup.class_of(&self.ctx, a) {
                ClassId::Zero => return None,
                ClassId::Nonzero(l) if class.is_none_or(|c| c == l) => class = Some(l),
                ClassId::Nonzero(_) => return None,
            }
        }
        class
    }
}

impl PartialEq for PointSet {
    fn eq(&self, other: &Self) -> bool {
        self.elems == other.elems && self.ctx.same_field(&other.ctx)
    }
}

impl Eq for PointSet {}

impl std::hash::Hash for PointSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.elems.hash(state);
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elems.iter().map(Fe::to_string).collect();
        f.write_str(&parts.join(", "))
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

/// The monic polynomial of least degree vanishing on `source`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinPoly {
    pub poly: SkewPoly,
    pub source: PointSet,
}

impl MinPoly {
    pub fn degree(&self) -> usize {
        self.poly.degree().expect("minimal polynomials are nonzero")
    }
}

/// Builds `f_Ω` incrementally: starting from `f = 1`, each `β` with
/// `f(β) ≠ 0` replaces `f` by `(x - β^{f(β)})·f`.
pub fn minimal_poly(omega: &PointSet) -> MinPoly {
    let ctx = omega.ctx.clone();
    let mut f = SkewPoly::one(ctx.clone());
    for &beta in &omega.elems {
        let v = f.eval(beta);
        if v.is_zero() {
            continue;
        }
        let root = conjugacy::conjugate(&ctx, beta, v).expect("f(β) is nonzero");
        f = SkewPoly::x_minus(ctx.clone(), root).try_mul(&f).expect("same field");
    }
    MinPoly { poly: f, source: omega.clone() }
}

/// P-closure `Z(f_Ω)` by exhaustive evaluation.
pub fn closure_exhaustive(omega: &PointSet) -> PointSet {
    let f = minimal_poly(omega).poly;
    PointSet { ctx: omega.ctx.clone(), elems: f.zeros().expect("minimal polynomials are nonzero") }
}

/// P-closure; takes the lifting path for single-class sets in large fields.
pub fn closure(omega: &PointSet) -> PointSet {
    if omega.ctx.order() > FAST_CLOSURE_THRESHOLD && omega.single_class().is_some() {
        closure_fast(omega).expect("single-class input")
    } else {
        closure_exhaustive(omega)
    }
}

pub fn is_p_independent(omega: &PointSet) -> bool {
    minimal_poly(omega).degree() == omega.len()
}

/// Greedy P-basis in canonical order: keeps each element that raises the
/// degree of the running minimal polynomial.
pub fn p_basis(omega: &PointSet) -> PointSet {
    let ctx = omega.ctx.clone();
    let mut f = SkewPoly::one(ctx.clone());
    let mut kept = Vec::new();
    for &beta in &omega.elems {
        let v = f.eval(beta);
        if v.is_zero() {
            continue;
        }
        let root = conjugacy::conjugate(&ctx, beta, v).expect("f(β) is nonzero");
        f = SkewPoly::x_minus(ctx.clone(), root).try_mul(&f).expect("same field");
        kept.push(beta);
    }
    PointSet::new(ctx, kept)
}

/// Coordinates of `a_i` with `α_i = γ^ℓ·φ(a_i)` for a single-class set.
pub fn lift(omega: &PointSet) -> Result<Vec<Vec<Fe>>, MinimalError> {
    if omega.is_empty() {
        return Ok(Vec::new());
    }
    let l = omega.single_class().ok_or(MinimalError::MixedClasses)?;
    omega
        .elems
        .iter()
        .map(|&alpha| {
            let a = conjugacy::unwarp_method1(&omega.ctx, alpha, l as u64)?;
            Ok(omega.ctx.coords(a))
        })
        .collect()
}

/// P-rank of a single-class set, as the `F_q`-rank of its lift.
pub fn lifted_rank(omega: &PointSet) -> Result<usize, MinimalError> {
    let vectors = lift(omega)?;
    if vectors.is_empty() {
        return Ok(0);
    }
    Ok(Matrix::from_rows(vectors, omega.ctx.m() as usize).rank(&omega.ctx))
}

/// Every vector of the row space of an rref basis whose first nonzero
/// coordinate is 1, i.e. one representative per projective point.
pub fn projective_points(ctx: &FieldCtx, basis: &[Vec<Fe>]) -> Vec<Vec<Fe>> {
    let q = ctx.q() as usize;
    let width = ctx.m() as usize;
    let mut out = Vec::new();
    for lead in 0..basis.len() {
        let tail = basis.len() - lead - 1;
        for idx in 0..q.pow(tail as u32) {
            let mut v = basis[lead].clone();
            let mut rest = idx;
            for row in &basis[lead + 1..] {
                let c = ctx.subfield()[rest % q];
                rest /= q;
                if c.is_zero() {
                    continue;
                }
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = ctx.add(*x, ctx.mul(c, r));
                }
            }
            debug_assert_eq!(v.len(), width);
            out.push(v);
        }
    }
    out
}

/// Closure of a single-class set `Ω ⊆ C(γ^ℓ)` as `{γ^ℓ φ(a) : a ∈ ⟨a_1..a_n⟩ ∖ 0}`.
pub fn closure_fast(omega: &PointSet) -> Result<PointSet, MinimalError> {
    let ctx = omega.ctx.clone();
    if omega.is_empty() {
        return Ok(PointSet::empty(ctx));
    }
    let l = omega.single_class().ok_or(MinimalError::MixedClasses)?;
    let rref = Matrix::from_rows(lift(omega)?, ctx.m() as usize).rref(&ctx);
    let basis: Vec<Vec<Fe>> = rref.matrix.row_vecs().into_iter().take(rref.rank).collect();
    let shift = ctx.gamma_pow(l as u64);
    let points = projective_points(&ctx, &basis).into_iter().map(|v| {
        let a = ctx.uncoords(&v).expect("subfield coordinates");
        ctx.mul(shift, conjugacy::warp(&ctx, a).expect("nonzero span vector"))
    });
    Ok(PointSet::new(ctx.clone(), points))
}

/// For P-closed `Ω_1, Ω_2`: returns `(llcm, grcd)` of their minimal
/// polynomials after checking them against `f_{Ω_1 ∪ Ω_2}`,
/// `f_{Ω_1 ∩ Ω_2}` and the degree identity.
pub fn decompose_check(a: &PointSet, b: &PointSet) -> Result<(MinPoly, MinPoly), MinimalError> {
    if !a.ctx.same_field(&b.ctx) {
        return Err(MinimalError::MixedContexts);
    }
    if closure(a) != *a || closure(b) != *b {
        return Err(MinimalError::NotClosed);
    }
    let (fa, fb) = (minimal_poly(a), minimal_poly(b));
    let l = fa.poly.llcm(&fb.poly)?;
    let g = fa.poly.grcd(&fb.poly)?;
    let (union, inter) = (a.union(b), a.intersection(b));
    let (fu, fi) = (minimal_poly(&union), minimal_poly(&inter));
    if fu.poly != l {
        return Err(MinimalError::DecompositionViolated(format!("llcm {l} != f_union {}", fu.poly)));
    }
    if fi.poly != g {
        return Err(MinimalError::DecompositionViolated(format!("grcd {g} != f_intersection {}", fi.poly)));
    }
    if fu.degree() + fi.degree() != fa.degree() + fb.degree() {
        return Err(MinimalError::DecompositionViolated("degree identity fails".into()));
    }
    Ok((MinPoly { poly: l, source: union }, MinPoly { poly: g, source: inter }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> Arc<FieldCtx> {
        Arc::new(FieldCtx::new(2, 2, 1, 1, None).unwrap())
    }

    fn f16() -> Arc<FieldCtx> {
        Arc::new(FieldCtx::from_spec("2,4,2,1,19").unwrap())
    }

    fn set(ctx: &Arc<FieldCtx>, logs: &[u64]) -> PointSet {
        PointSet::new(ctx.clone(), logs.iter().map(|&i| ctx.gamma_pow(i)))
    }

    #[test]
    fn minimal_poly_examples() {
        let c = f4();
        assert_eq!(minimal_poly(&set(&c, &[0, 1])).poly.to_string(), "x^2 + 1");
        let a = c.gamma_pow(2);
        assert_eq!(minimal_poly(&set(&c, &[2])).poly, SkewPoly::x_minus(c.clone(), a));
        let zero = PointSet::new(c.clone(), [Fe::ZERO]);
        assert_eq!(minimal_poly(&zero).poly.to_string(), "x");
        assert_eq!(minimal_poly(&PointSet::empty(c.clone())).poly, SkewPoly::one(c.clone()));
    }

    #[test]
    fn closure_examples() {
        let c = f4();
        assert_eq!(closure(&set(&c, &[0, 1])), set(&c, &[0, 1, 2]));
        let g = f16();
        assert_eq!(closure(&set(&g, &[0, 3])), set(&g, &[0, 3, 6, 9, 12]));
        assert!(closure(&PointSet::empty(g.clone())).is_empty());
        let zero = PointSet::new(g.clone(), [Fe::ZERO]);
        assert_eq!(closure(&zero), zero);
    }

    #[test]
    fn independence_examples() {
        let g = f16();
        assert!(is_p_independent(&set(&g, &[0, 3])));
        assert!(!is_p_independent(&set(&g, &[0, 3, 6])));
        assert!(is_p_independent(&set(&g, &[0, 3, 1, 4])));
        assert!(is_p_independent(&PointSet::empty(g.clone())));
    }

    #[test]
    fn p_basis_examples() {
        let g = f16();
        let c1 = set(&g, &[0, 3, 6, 9, 12]);
        assert_eq!(p_basis(&c1), set(&g, &[0, 3]));
        assert!(p_basis(&PointSet::empty(g.clone())).is_empty());
        let indep = set(&g, &[0, 3, 1, 4]);
        assert_eq!(p_basis(&indep), indep);
    }

    #[test]
    fn lift_examples() {
        let g = f16();
        let two = lift(&set(&g, &[0, 3])).unwrap();
        assert_eq!(Matrix::from_rows(two, 2).rank(&g), 2);
        assert_eq!(lifted_rank(&set(&g, &[0, 3, 6])).unwrap(), 2);
        let single = lift(&set(&g, &[7])).unwrap();
        assert!(single[0].iter().any(|c| !c.is_zero()));
        assert_eq!(lift(&set(&g, &[0, 1])), Err(MinimalError::MixedClasses));
        assert_eq!(lift(&PointSet::new(g.clone(), [Fe::ZERO])), Err(MinimalError::MixedClasses));
    }

    #[test]
    fn closure_fast_examples() {
        let g = f16();
        let c1 = set(&g, &[0, 3, 6, 9, 12]);
        assert_eq!(closure_fast(&set(&g, &[0, 3])).unwrap(), c1);
        assert_eq!(closure_fast(&set(&g, &[0, 3, 6])).unwrap(), c1);
        assert_eq!(closure_fast(&set(&g, &[4])).unwrap(), set(&g, &[4]));
    }

    #[test]
    fn decomposition_examples() {
        let g = f16();
        let c1 = set(&g, &[0, 3, 6, 9, 12]);
        let (l, gc) = decompose_check(&c1, &c1).unwrap();
        assert_eq!(l.poly, minimal_poly(&c1).poly);
        assert_eq!(gc.poly, minimal_poly(&c1).poly);
        let other = closure(&set(&g, &[1]));
        let (l, gc) = decompose_check(&c1, &other).unwrap();
        assert_eq!(gc.poly, SkewPoly::one(g.clone()));
        assert_eq!(l.degree(), 3);
        assert_eq!(decompose_check(&set(&g, &[0, 3]), &c1), Err(MinimalError::NotClosed));
    }

    /// Definitional independence: no element is a root of the minimal
    /// polynomial of the others.
    fn independent_by_definition(omega: &PointSet) -> bool {
        omega.elems().iter().all(|&a| !minimal_poly(&omega.without(a)).poly.eval(a).is_zero())
    }

    #[test]
    fn degree_criterion_matches_definition_on_f4_and_c1() {
        for (ctx, ground) in [(f4(), f4().elements().collect::<Vec<_>>()), (f16(), conjugacy::class_elements(&f16(), 0).unwrap())] {
            for mask in 0..1u64 << ground.len() {
                let s = PointSet::from_mask(ctx.clone(), &ground, mask);
                assert_eq!(is_p_independent(&s), independent_by_definition(&s), "{s:?}");
            }
        }
    }

    /// Every monic polynomial of degree `d` over the field.
    fn monic_of_degree(ctx: &Arc<FieldCtx>, d: usize) -> Vec<SkewPoly> {
        let q = ctx.order() as usize;
        let elems: Vec<Fe> = ctx.elements().collect();
        (0..q.pow(d as u32))
            .map(|idx| {
                let mut coeffs: Vec<Fe> = (0..d).map(|i| elems[(idx / q.pow(i as u32)) % q]).collect();
                coeffs.push(Fe::ONE);
                SkewPoly::new(ctx.clone(), coeffs)
            })
            .collect()
    }

    #[test]
    fn minimality_by_exhaustive_search() {
        for ctx in [f4(), f16()] {
            let elems: Vec<Fe> = ctx.elements().collect();
            let lower: Vec<Vec<SkewPoly>> = (0..3).map(|d| monic_of_degree(&ctx, d)).collect();
            let mut subsets = Vec::new();
            for (i, &a) in elems.iter().enumerate() {
                subsets.push(vec![a]);
                for (j, &b) in elems.iter().enumerate().skip(i + 1) {
                    subsets.push(vec![a, b]);
                    for &c in elems.iter().skip(j + 1).step_by(3) {
                        subsets.push(vec![a, b, c]);
                    }
                }
            }
            for s in subsets {
                let omega = PointSet::new(ctx.clone(), s);
                let f = minimal_poly(&omega);
                assert!(f.poly.is_monic());
                assert!(f.degree() <= omega.len());
                assert!(omega.elems().iter().all(|&a| f.poly.eval(a).is_zero()));
                for d in 0..f.degree() {
                    for g in &lower[d] {
                        assert!(omega.elems().iter().any(|&a| !g.eval(a).is_zero()), "{g} vanishes on {omega:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn subset_minimal_polys_right_divide() {
        let g = f16();
        let elems: Vec<Fe> = g.elements().collect();
        let omega = PointSet::new(g.clone(), [elems[1], elems[4], elems[6], elems[0], elems[11]]);
        let f = minimal_poly(&omega).poly;
        for mask in 0..32u64 {
            let sub = PointSet::from_mask(g.clone(), omega.elems(), mask);
            let (_, r) = f.right_divmod(&minimal_poly(&sub).poly).unwrap();
            assert!(r.is_zero());
        }
    }

    #[test]
    fn insertion_order_does_not_change_the_polynomial() {
        let g = f16();
        let pts = [g.gamma_pow(2), g.gamma_pow(9), Fe::ZERO, g.gamma_pow(4)];
        let canonical = minimal_poly(&PointSet::new(g.clone(), pts)).poly;
        let mut f = SkewPoly::one(g.clone());
        for &beta in pts.iter().rev() {
            let v = f.eval(beta);
            if !v.is_zero() {
                let r = conjugacy::conjugate(&g, beta, v).unwrap();
                f = &SkewPoly::x_minus(g.clone(), r) * &f;
            }
        }
        assert_eq!(f, canonical);
    }

    #[test]
    fn closure_members_are_conjugate_to_the_input() {
        let g = f16();
        let elems: Vec<Fe> = g.elements().collect();
        for mask in [0b1011u64, 0b110010, 0b1000_0000_0110, 0b1_0000_0001_0001] {
            let omega = PointSet::from_mask(g.clone(), &elems, mask);
            for b in closure(&omega).elems() {
                let cb = conjugacy::class_of(&g, *b);
                assert!(omega.elems().iter().any(|&a| conjugacy::class_of(&g, a) == cb));
            }
        }
    }

    #[test]
    fn warp_root_correspondence() {
        let g = f16();
        for l in 0..3u64 {
            let class = conjugacy::class_elements(&g, l).unwrap();
            for mask in 1..1u64 << class.len() {
                let omega = PointSet::from_mask(g.clone(), &class, mask);
                if !is_p_independent(&omega) {
                    continue;
                }
                let f = minimal_poly(&omega).poly;
                let zeros = f.zeros().unwrap();
                // f(γ^ℓ φ(a)) = g(φ(a)) where g has coefficients c_i·γ^{ℓ⟦i⟧}
                let shift = g.gamma_pow(l);
                let shifted: Vec<Fe> = (0..=f.degree().unwrap())
                    .map(|i| g.mul(f.coeff(i), g.pow(shift, g.dbracket(i as u64).unwrap())))
                    .collect();
                let lin = SkewPoly::new(g.clone(), shifted).linearized_assoc().unwrap();
                let mut via_lin: Vec<Fe> = g
                    .nonzero_elements()
                    .filter(|&a| lin.eval(&g, a).is_zero())
                    .map(|a| g.mul(shift, conjugacy::warp(&g, a).unwrap()))
                    .collect();
                via_lin.sort();
                via_lin.dedup();
                assert_eq!(via_lin, zeros);
                assert_eq!(zeros.len() as u128, g.dbracket(omega.len() as u64).unwrap());
            }
        }
    }

    #[test]
    fn closure_fast_agrees_on_larger_fields() {
        for ctx in [Arc::new(FieldCtx::new(2, 6, 1, 1, None).unwrap()), Arc::new(FieldCtx::new(2, 6, 2, 1, None).unwrap()), Arc::new(FieldCtx::new(3, 3, 1, 1, None).unwrap())] {
            for l in 0..ctx.q() - 1 {
                let class = conjugacy::class_elements(&ctx, l).unwrap();
                for start in 0..6 {
                    let omega = PointSet::new(ctx.clone(), class.iter().copied().skip(start * 3).step_by(5).take(1 + start % 4));
                    let fast = closure_fast(&omega).unwrap();
                    assert_eq!(fast, closure_exhaustive(&omega));
                    let r = minimal_poly(&omega).degree();
                    assert_eq!(fast.len() as u128, ctx.dbracket_with(r as u64, 1).unwrap());
                    assert_eq!(lifted_rank(&omega).unwrap(), r);
                }
            }
        }
    }
}
