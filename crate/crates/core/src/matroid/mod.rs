//! The matroid on `F_{q^m}` whose independent sets are the P-independent
//! sets of `F_{q^m}[x;σ]` (with `s = 1`), its flats and flat metric, its
//! `F_q`-representation, and the isometry `Φ` from the subspace lattice of
//! `F_{q^m}` onto the flats of `C(1)`.

pub mod axioms;

use crate::conjugacy::{self, ConjugacyError};
use crate::field::{Fe, FieldCtx, Matrix};
use crate::minimal::{self, MinimalError, PointSet};
use crate::skewpoly::{SkewError, SkewPoly};
use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Largest field for which flats are enumerated.
pub const MAX_ENUMERATION_ORDER: u64 = 1 << 12;
/// Largest number of flats [`Matroid::flats`] will produce.
pub const MAX_ENUMERATED_FLATS: u128 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatroidError {
    #[error("UnsupportedAutomorphism: the matroid requires s = 1, got s = {0}")]
    UnsupportedAutomorphism(u32),
    #[error("TooLargeToEnumerate: {0}")]
    TooLargeToEnumerate(String),
    #[error("NotC1Flat: the point set is not a flat inside C(1)")]
    NotC1Flat,
    #[error("NotAFlat: the point set is not P-closed")]
    NotAFlat,
    #[error("DimensionMismatch: subspaces of F_q^{0} and F_q^{1}")]
    DimensionMismatch(usize, usize),
    #[error("MixedContexts: arguments live in different fields")]
    MixedContexts,
    #[error(transparent)]
    Minimal(#[from] MinimalError),
    #[error(transparent)]
    Skew(#[from] SkewError),
    #[error(transparent)]
    Conjugacy(#[from] ConjugacyError),
}

/// A P-closed point set with its rank and minimal polynomial.
#[derive(Clone)]
pub struct Flat {
    points: PointSet,
    rank: usize,
    minpoly: SkewPoly,
}

impl Flat {
    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn minpoly(&self) -> &SkewPoly {
        &self.minpoly
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, a: Fe) -> bool {
        self.points.contains(a)
    }

    pub fn is_subset(&self, other: &Flat) -> bool {
        self.points.is_subset(&other.points)
    }
}

impl PartialEq for Flat {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points
    }
}

impl Eq for Flat {}

impl std::hash::Hash for Flat {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.points.hash(state);
    }
}

impl fmt::Display for Flat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.points)
    }
}

impl fmt::Debug for Flat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Flat(rank {}) {}", self.rank, self)
    }
}

/// An `F_q`-subspace of `F_q^m`, stored as the nonzero rows of its rref.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: Matrix,
}

impl Subspace {
    /// Row space of the given coordinate vectors of length `width`.
    pub fn span(ctx: &FieldCtx, vectors: Vec<Vec<Fe>>, width: usize) -> Subspace {
        let rref = Matrix::from_rows(vectors, width).rref(ctx);
        let rows = rref.matrix.row_vecs().into_iter().take(rref.rank).collect();
        Subspace { basis: Matrix::from_rows(rows, width) }
    }

    /// Wraps rows already in reduced row-echelon form.
    fn from_rref_rows(rows: Vec<Vec<Fe>>, width: usize) -> Subspace {
        Subspace { basis: Matrix::from_rows(rows, width) }
    }

    pub fn zero(width: usize) -> Subspace {
        Subspace { basis: Matrix::zeros(0, width) }
    }

    pub fn whole(width: usize) -> Subspace {
        Subspace { basis: Matrix::identity(width) }
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    /// One nonzero vector per 1-dimensional subspace.
    pub fn projective_points(&self, ctx: &FieldCtx) -> Vec<Vec<Fe>> {
        minimal::projective_points(ctx, &self.basis.row_vecs())
    }

    fn check_width(&self, other: &Subspace) -> Result<(), MatroidError> {
        if self.ambient_dim() == other.ambient_dim() {
            Ok(())
        } else {
            Err(MatroidError::DimensionMismatch(self.ambient_dim(), other.ambient_dim()))
        }
    }

    pub fn sum(&self, other: &Subspace, ctx: &FieldCtx) -> Result<Subspace, MatroidError> {
        self.check_width(other)?;
        let rows = self.basis.stack(&other.basis).row_vecs();
        Ok(Subspace::span(ctx, rows, self.ambient_dim()))
    }

    /// `dim(V ∩ W) = dim V + dim W - dim(V + W)`.
    pub fn intersection_dim(&self, other: &Subspace, ctx: &FieldCtx) -> Result<usize, MatroidError> {
        Ok(self.dim() + other.dim() - self.sum(other, ctx)?.dim())
    }

    pub fn contains(&self, v: &[Fe], ctx: &FieldCtx) -> bool {
        let extended = self.basis.stack(&Matrix::from_rows(vec![v.to_vec()], self.ambient_dim()));
        extended.rank(ctx) == self.dim()
    }

    pub fn is_subspace_of(&self, other: &Subspace, ctx: &FieldCtx) -> bool {
        self.basis.row_vecs().iter().all(|r| other.contains(r, ctx))
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .basis
            .row_vecs()
            .iter()
            .map(|r| format!("({})", r.iter().map(Fe::to_string).collect::<Vec<_>>().join(" ")))
            .collect();
        write!(f, "<{}>", rows.join(", "))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {}) {}", self.dim(), self)
    }
}

/// `A` is `m × ⟦m⟧` with column `j` the coordinates of `γ^j`, which lifts the
/// point `φ(γ^j)` of `C(1)`. `script_a` is `q - 1` diagonal copies of `A`
/// (one per class) plus a unit column for `0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepMatrix {
    pub a: Matrix,
    pub script_a: Matrix,
    pub a_labels: Vec<Fe>,
    pub column_labels: Vec<Fe>,
}

impl RepMatrix {
    /// Column index of `script_a` labelled by `x`.
    pub fn column_of(&self, x: Fe) -> Option<usize> {
        self.column_labels.iter().position(|&c| c == x)
    }
}

/// Which flats to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    /// Flats of the submatroid on `C(γ^ℓ)`.
    Class(u32),
    Whole,
}

/// Outcome of comparing `d_S` with `d_F ∘ Φ` over all subspace pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsometryReport {
    pub subspaces: usize,
    pub c1_flats: usize,
    pub pairs: usize,
    pub injective: bool,
    pub onto: bool,
    pub inverse_ok: bool,
    pub mismatches: usize,
}

impl IsometryReport {
    pub fn passed(&self) -> bool {
        self.injective && self.onto && self.inverse_ok && self.mismatches == 0
    }
}

#[derive(Clone)]
pub struct Matroid {
    ctx: Arc<FieldCtx>,
}

impl Matroid {
    pub fn new(ctx: Arc<FieldCtx>) -> Result<Self, MatroidError> {
        if ctx.s() != 1 {
            return Err(MatroidError::UnsupportedAutomorphism(ctx.s()));
        }
        Ok(Matroid { ctx })
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    fn check(&self, x: &PointSet) -> Result<(), MatroidError> {
        if x.ctx().same_field(&self.ctx) {
            Ok(())
        } else {
            Err(MatroidError::MixedContexts)
        }
    }

    pub fn points(&self, elems: impl IntoIterator<Item = Fe>) -> PointSet {
        PointSet::new(self.ctx.clone(), elems)
    }

    pub fn rank(&self, x: &PointSet) -> usize {
        minimal::minimal_poly(x).degree()
    }

    pub fn is_independent(&self, x: &PointSet) -> bool {
        minimal::is_p_independent(x)
    }

    pub fn closure(&self, x: &PointSet) -> Flat {
        let minpoly = minimal::minimal_poly(x).poly;
        let rank = minpoly.degree().expect("minimal polynomials are nonzero");
        let points = minimal::closure(x);
        Flat { points, rank, minpoly }
    }

    /// `{x : r(X ∪ x) = r(X)}` by scanning the field.
    pub fn closure_definitional(&self, x: &PointSet) -> PointSet {
        let r = self.rank(x);
        self.points(self.ctx.elements().filter(|&e| self.rank(&x.with(e)) == r))
    }

    pub fn is_flat(&self, x: &PointSet) -> bool {
        minimal::closure(x) == *x
    }

    /// Wraps a P-closed set as a [`Flat`].
    pub fn flat(&self, x: PointSet) -> Result<Flat, MatroidError> {
        self.check(&x)?;
        let f = self.closure(&x);
        if f.points == x {
            Ok(f)
        } else {
            Err(MatroidError::NotAFlat)
        }
    }

    /// `d_F(X, Y) = deg f_X + deg f_Y - 2 deg grcd(f_X, f_Y)`.
    pub fn dist(&self, x: &Flat, y: &Flat) -> Result<usize, MatroidError> {
        let g = x.minpoly.grcd(&y.minpoly)?;
        let dg = g.degree().expect("grcd of nonzero polynomials is nonzero");
        Ok(x.rank + y.rank - 2 * dg)
    }

    /// `d_F(X, Y) = r(X ∪ Y) - r(X ∩ Y)`.
    pub fn dist_definitional(&self, x: &Flat, y: &Flat) -> usize {
        self.rank(&x.points.union(&y.points)) - self.rank(&x.points.intersection(&y.points))
    }

    /// `d_S(V, W) = dim(V + W) - dim(V ∩ W)`.
    pub fn subspace_dist(&self, v: &Subspace, w: &Subspace) -> Result<usize, MatroidError> {
        let sum = v.sum(w, &self.ctx)?.dim();
        Ok(sum - (v.dim() + w.dim() - sum))
    }

    fn width(&self) -> usize {
        self.ctx.m() as usize
    }

    /// `Φ(V) = {φ(a) : a ∈ V ∖ 0}`.
    pub fn phi(&self, v: &Subspace) -> Result<Flat, MatroidError> {
        self.phi_in_class(v, 0)
    }

    /// `γ^ℓ·Φ(V)`, a flat of `C(γ^ℓ)`.
    pub fn phi_in_class(&self, v: &Subspace, l: u32) -> Result<Flat, MatroidError> {
        if v.ambient_dim() != self.width() {
            return Err(MatroidError::DimensionMismatch(v.ambient_dim(), self.width()));
        }
        conjugacy::class_elements(&self.ctx, l as u64)?;
        let shift = self.ctx.gamma_pow(l as u64);
        let image = |row: &[Fe]| -> Fe {
            let a = self.ctx.uncoords(row).expect("coordinates lie in F_q");
            self.ctx.mul(shift, conjugacy::warp(&self.ctx, a).expect("basis rows are nonzero"))
        };
        let basis_images = self.points(v.basis.row_vecs().iter().map(|r| image(r)));
        let minpoly = minimal::minimal_poly(&basis_images).poly;
        let points = self.points(v.projective_points(&self.ctx).iter().map(|r| image(r)));
        Ok(Flat { points, rank: v.dim(), minpoly })
    }

    /// The subspace `V` with `Φ(V) = X`, for a flat `X ⊆ C(1)`.
    pub fn phi_inverse(&self, x: &Flat) -> Result<Subspace, MatroidError> {
        self.phi_inverse_in_class(x, 0)
    }

    pub fn phi_inverse_in_class(&self, x: &Flat, l: u32) -> Result<Subspace, MatroidError> {
        if x.is_empty() {
            return Ok(Subspace::zero(self.width()));
        }
        if x.points.single_class() != Some(l) || !self.is_flat(&x.points) {
            return Err(MatroidError::NotC1Flat);
        }
        let lifts = minimal::lift(&x.points)?;
        Ok(Subspace::span(&self.ctx, lifts, self.width()))
    }

    /// Every subspace of `F_q^m` of dimension at most `max_dim`, enumerated
    /// by rref pivot pattern.
    pub fn subspaces(&self, max_dim: Option<usize>) -> Vec<Subspace> {
        let m = self.width();
        let q = self.ctx.q() as usize;
        let top = max_dim.unwrap_or(m).min(m);
        let mut out = Vec::new();
        for d in 0..=top {
            for pivots in combinations(m, d) {
                // free slots: (row, col) with col > pivot of row and col not a pivot
                let free: Vec<(usize, usize)> = pivots
                    .iter()
                    .enumerate()
                    .flat_map(|(i, &p)| ((p + 1)..m).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
                    .collect();
                for idx in 0..q.pow(free.len() as u32) {
                    let mut rows = vec![vec![Fe::ZERO; m]; d];
                    for (i, &p) in pivots.iter().enumerate() {
                        rows[i][p] = Fe::ONE;
                    }
                    let mut rest = idx;
                    for &(i, c) in &free {
                        rows[i][c] = self.ctx.subfield()[rest % q];
                        rest /= q;
                    }
                    out.push(Subspace::from_rref_rows(rows, m));
                }
            }
        }
        out
    }

    /// Number of subspaces of `F_q^m`, a sum of Gaussian binomials.
    pub fn subspace_count(&self) -> u128 {
        let (q, m) = (self.ctx.q() as u128, self.width() as u32);
        (0..=m).map(|d| gaussian_binomial(q, m, d)).fold(0u128, |a, b| a.saturating_add(b))
    }

    fn guard(&self, count: u128) -> Result<(), MatroidError> {
        if self.ctx.order() > MAX_ENUMERATION_ORDER {
            return Err(MatroidError::TooLargeToEnumerate(format!(
                "field has {} elements, limit {MAX_ENUMERATION_ORDER}",
                self.ctx.order()
            )));
        }
        if count > MAX_ENUMERATED_FLATS {
            return Err(MatroidError::TooLargeToEnumerate(format!("{count} flats, limit {MAX_ENUMERATED_FLATS}")));
        }
        Ok(())
    }

    /// Flats of the given scope with rank at most `max_rank`, each once.
    ///
    /// Class flats are the images `γ^ℓ·Φ(V)`. Whole-matroid flats are unions
    /// of one flat per nonzero class, optionally with `{0}`, each checked to
    /// be closed.
    pub fn flats(&self, scope: Scope, max_rank: Option<usize>) -> Result<Vec<Flat>, MatroidError> {
        let per_class = self.subspace_count();
        match scope {
            Scope::Class(l) => {
                self.guard(per_class)?;
                conjugacy::class_elements(&self.ctx, l as u64)?;
                let mut flats = self.subspaces(max_rank).iter().map(|v| self.phi_in_class(v, l)).collect::<Result<Vec<_>, _>>()?;
                flats.sort_by(|a, b| (a.rank, a.points.elems()).cmp(&(b.rank, b.points.elems())));
                Ok(flats)
            }
            Scope::Whole => {
                let classes = (self.ctx.q() - 1) as u32;
                let total = (0..classes).fold(2u128, |acc, _| acc.saturating_mul(per_class));
                self.guard(total)?;
                let class_flats: Vec<Vec<Flat>> = (0..classes)
                    .map(|l| self.flats(Scope::Class(l), max_rank))
                    .collect::<Result<_, _>>()?;
                let zero = self.points([Fe::ZERO]);
                let mut out = Vec::new();
                let mut seen = HashSet::new();
                let mut choice = vec![0usize; class_flats.len()];
                loop {
                    let union = choice
                        .iter()
                        .zip(&class_flats)
                        .fold(PointSet::empty(self.ctx.clone()), |acc, (&c, fl)| acc.union(&fl[c].points));
                    for candidate in [union.clone(), union.union(&zero)] {
                        let flat = self.closure(&candidate);
                        debug_assert!(flat.points == candidate, "union of class flats is closed");
                        if flat.points == candidate && max_rank.is_none_or(|r| flat.rank <= r) && seen.insert(candidate) {
                            out.push(flat);
                        }
                    }
                    // odometer over the per-class choices
                    let mut i = 0;
                    loop {
                        if i == choice.len() {
                            out.sort_by(|a: &Flat, b: &Flat| (a.rank, a.points.elems()).cmp(&(b.rank, b.points.elems())));
                            return Ok(out);
                        }
                        choice[i] += 1;
                        if choice[i] < class_flats[i].len() {
                            break;
                        }
                        choice[i] = 0;
                        i += 1;
                    }
                }
            }
        }
    }

    /// The matrices `A` and `script_A` with their column labels.
    pub fn representation(&self) -> RepMatrix {
        let ctx = &self.ctx;
        let (m, n) = (self.width(), ctx.class_size() as usize);
        let classes = (ctx.q() - 1) as usize;
        let columns: Vec<Vec<Fe>> = (0..n).map(|j| ctx.coords(ctx.gamma_pow(j as u64))).collect();
        let a = Matrix::from_columns(&columns, m);
        let a_labels: Vec<Fe> = (0..n as u64).map(|j| ctx.gamma_pow(j * (ctx.q() - 1))).collect();

        let (rows, cols) = (m * classes + 1, n * classes + 1);
        let mut blocks = vec![vec![Fe::ZERO; rows]; cols];
        let mut column_labels = Vec::with_capacity(cols);
        for l in 0..classes {
            for j in 0..n {
                blocks[l * n + j][l * m..(l + 1) * m].copy_from_slice(&columns[j]);
                column_labels.push(ctx.mul(ctx.gamma_pow(l as u64), a_labels[j]));
            }
        }
        blocks[cols - 1][rows - 1] = Fe::ONE;
        column_labels.push(Fe::ZERO);
        RepMatrix { a, script_a: Matrix::from_columns(&blocks, rows), a_labels, column_labels }
    }

    /// Compares `d_S` and `d_F ∘ Φ` on every pair of subspaces and checks
    /// that `Φ` is a bijection onto the flats of `C(1)`.
    pub fn isometry_check(&self) -> Result<IsometryReport, MatroidError> {
        self.guard(self.subspace_count())?;
        let subspaces = self.subspaces(None);
        let images: Vec<Flat> = subspaces.iter().map(|v| self.phi(v)).collect::<Result<_, _>>()?;
        let distinct: HashSet<&PointSet> = images.iter().map(|f| &f.points).collect();
        let injective = distinct.len() == subspaces.len();

        let class = conjugacy::class_elements(&self.ctx, 0)?;
        let c1_flats: HashSet<PointSet> = if class.len() <= 20 {
            (0..1u64 << class.len())
                .map(|mask| minimal::closure(&PointSet::from_mask(self.ctx.clone(), &class, mask)))
                .collect()
        } else {
            images.iter().map(|f| f.points.clone()).collect()
        };
        let onto = c1_flats.iter().all(|f| distinct.contains(f)) && images.iter().all(|f| c1_flats.contains(&f.points));

        let mut inverse_ok = true;
        for (v, x) in subspaces.iter().zip(&images) {
            inverse_ok &= self.phi_inverse(x)? == *v && self.is_flat(&x.points);
        }
        let mut mismatches = 0;
        for (i, v) in subspaces.iter().enumerate() {
            for (j, w) in subspaces.iter().enumerate() {
                if self.subspace_dist(v, w)? != self.dist(&images[i], &images[j])? {
                    mismatches += 1;
                }
            }
        }
        Ok(IsometryReport {
            subspaces: subspaces.len(),
            c1_flats: c1_flats.len(),
            pairs: subspaces.len() * subspaces.len(),
            injective,
            onto,
            inverse_ok,
            mismatches,
        })
    }
}

/// All increasing `d`-tuples from `0..n`.
fn combinations(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, d: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, d, &mut Vec::with_capacity(d), &mut out);
    out
}

/// `[m choose d]_q`, saturating.
fn gaussian_binomial(q: u128, m: u32, d: u32) -> u128 {
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..d {
        let a = q.saturating_pow(m - i).saturating_sub(1);
        let b = q.saturating_pow(i + 1) - 1;
        num = num.saturating_mul(a);
        den = den.saturating_mul(b);
        if num == u128::MAX {
            return u128::MAX;
        }
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f16() -> Matroid {
        Matroid::new(Arc::new(FieldCtx::from_spec("2,4,2,1,19").unwrap())).unwrap()
    }

    fn f4() -> Matroid {
        Matroid::new(Arc::new(FieldCtx::new(2, 2, 1, 1, None).unwrap())).unwrap()
    }

    fn logs(mt: &Matroid, l: &[u64]) -> PointSet {
        mt.points(l.iter().map(|&i| mt.ctx.gamma_pow(i)))
    }

    #[test]
    fn rejects_other_automorphisms() {
        let ctx = Arc::new(FieldCtx::new(2, 5, 1, 2, None).unwrap());
        assert!(matches!(Matroid::new(ctx), Err(MatroidError::UnsupportedAutomorphism(2))));
    }

    #[test]
    fn rank_examples() {
        let mt = f16();
        assert_eq!(mt.rank(&PointSet::empty(mt.ctx.clone())), 0);
        assert_eq!(mt.rank(&logs(&mt, &[0, 3, 6])), 2);
        assert_eq!(mt.rank(&logs(&mt, &[0, 3, 1, 4])), 4);
    }

    #[test]
    fn closure_examples() {
        let mt = f16();
        let c1 = mt.closure(&logs(&mt, &[0, 3]));
        assert_eq!(c1.points, logs(&mt, &[0, 3, 6, 9, 12]));
        assert_eq!(c1.rank(), 2);
        assert_eq!(mt.closure(c1.points()), c1);
        let zero = mt.closure(&mt.points([Fe::ZERO]));
        assert_eq!(zero.points, mt.points([Fe::ZERO]));
        assert_eq!(zero.rank(), 1);
        assert!(mt.flat(logs(&mt, &[0, 3])).is_err());
    }

    #[test]
    fn definitional_closure_matches() {
        let mt = f16();
        let elems: Vec<Fe> = mt.ctx.elements().collect();
        for mask in [0u64, 1, 0b110, 0b1001_0010, 0b1_0000_0000_0101, 0b1111_0000_0000_0000, 0b1000_0100_0010_0001] {
            let x = PointSet::from_mask(mt.ctx.clone(), &elems, mask);
            assert_eq!(mt.closure_definitional(&x), mt.closure(&x).points);
        }
    }

    #[test]
    fn class_flat_counts() {
        let mt = f16();
        let flats = mt.flats(Scope::Class(0), None).unwrap();
        assert_eq!(flats.len(), 7);
        let ranks: Vec<usize> = flats.iter().map(Flat::rank).collect();
        assert_eq!(ranks.iter().filter(|&&r| r == 0).count(), 1);
        assert_eq!(ranks.iter().filter(|&&r| r == 1).count(), 5);
        assert_eq!(ranks.iter().filter(|&&r| r == 2).count(), 1);
        let zero_rank = mt.flats(Scope::Class(0), Some(0)).unwrap();
        assert_eq!(zero_rank.len(), 1);
        assert!(zero_rank[0].is_empty());
        assert_eq!(f4().flats(Scope::Class(0), None).unwrap().len(), 5);
    }

    #[test]
    fn class_flats_match_brute_force() {
        for mt in [f16(), f4()] {
            for l in 0..(mt.ctx.q() - 1) as u32 {
                let class = conjugacy::class_elements(&mt.ctx, l as u64).unwrap();
                let brute: HashSet<PointSet> = (0..1u64 << class.len())
                    .map(|mask| minimal::closure(&PointSet::from_mask(mt.ctx.clone(), &class, mask)))
                    .collect();
                let listed = mt.flats(Scope::Class(l), None).unwrap();
                let listed_set: HashSet<PointSet> = listed.iter().map(|f| f.points.clone()).collect();
                assert_eq!(listed.len(), listed_set.len());
                assert_eq!(listed_set, brute);
                for f in &listed {
                    assert_eq!(mt.rank(&f.points), f.rank);
                    assert_eq!(*f.minpoly(), minimal::minimal_poly(&f.points).poly);
                }
            }
        }
    }

    #[test]
    fn whole_matroid_flats_match_brute_force() {
        let mt = f4();
        let elems: Vec<Fe> = mt.ctx.elements().collect();
        let brute: HashSet<PointSet> =
            (0..1u64 << elems.len()).map(|mask| minimal::closure(&PointSet::from_mask(mt.ctx.clone(), &elems, mask))).collect();
        let listed: HashSet<PointSet> = mt.flats(Scope::Whole, None).unwrap().into_iter().map(|f| f.points).collect();
        assert_eq!(listed, brute);
        assert_eq!(f16().flats(Scope::Whole, None).unwrap().len(), 7 * 7 * 7 * 2);
    }

    #[test]
    fn enumeration_guard() {
        let big = Matroid::new(Arc::new(FieldCtx::new(2, 13, 1, 1, None).unwrap())).unwrap();
        assert!(matches!(big.flats(Scope::Class(0), None), Err(MatroidError::TooLargeToEnumerate(_))));
    }

    #[test]
    fn representation_golden() {
        let mt = f16();
        let c = &mt.ctx;
        let rep = mt.representation();
        let g = |i| c.gamma_pow(i);
        let expected = Matrix::from_rows(vec![vec![Fe::ONE, Fe::ZERO, g(5), g(5), Fe::ONE], vec![Fe::ZERO, Fe::ONE, Fe::ONE, g(10), Fe::ONE]], 5);
        assert_eq!(rep.a, expected);
        assert_eq!((rep.script_a.rows(), rep.script_a.cols()), (7, 16));
        assert_eq!(rep.script_a.rank(c), 7);
        let mut labels = rep.column_labels.clone();
        labels.sort();
        assert_eq!(labels, c.elements().collect::<Vec<_>>());
    }

    #[test]
    fn distance_examples() {
        let mt = f16();
        let c1 = mt.closure(&logs(&mt, &[0, 3]));
        let empty = mt.closure(&PointSet::empty(mt.ctx.clone()));
        assert_eq!(mt.dist(&c1, &c1).unwrap(), 0);
        assert_eq!(mt.dist(&empty, &c1).unwrap(), 2);
        let a = mt.closure(&logs(&mt, &[0]));
        let b = mt.closure(&logs(&mt, &[3]));
        assert_eq!(mt.dist(&a, &b).unwrap(), 2);
        assert_eq!(mt.dist_definitional(&a, &b), 2);
    }

    #[test]
    fn subspace_distance_examples() {
        let mt = f16();
        let c = &mt.ctx;
        let line1 = Subspace::span(c, vec![vec![Fe::ONE, Fe::ZERO]], 2);
        let line2 = Subspace::span(c, vec![vec![Fe::ZERO, Fe::ONE]], 2);
        let plane = Subspace::whole(2);
        assert_eq!(mt.subspace_dist(&line1, &line1).unwrap(), 0);
        assert_eq!(mt.subspace_dist(&line1, &line2).unwrap(), 2);
        assert_eq!(mt.subspace_dist(&line1, &plane).unwrap(), 1);
        assert!(mt.subspace_dist(&line1, &Subspace::whole(3)).is_err());
    }

    #[test]
    fn phi_examples() {
        let mt = f16();
        let c = &mt.ctx;
        assert!(mt.phi(&Subspace::zero(2)).unwrap().is_empty());
        let gamma_line = Subspace::span(c, vec![c.coords(c.gamma_pow(1))], 2);
        assert_eq!(mt.phi(&gamma_line).unwrap().points, logs(&mt, &[3]));
        assert_eq!(mt.phi(&Subspace::whole(2)).unwrap().points, logs(&mt, &[0, 3, 6, 9, 12]));
        let other_class = mt.closure(&logs(&mt, &[1]));
        assert_eq!(mt.phi_inverse(&other_class), Err(MatroidError::NotC1Flat));
    }

    #[test]
    fn subspace_enumeration_counts() {
        assert_eq!(f16().subspaces(None).len(), 7);
        let f8 = Matroid::new(Arc::new(FieldCtx::new(2, 3, 1, 1, None).unwrap())).unwrap();
        assert_eq!(f8.subspaces(None).len(), 16);
        assert_eq!(f8.subspace_count(), 16);
        let f64q4 = Matroid::new(Arc::new(FieldCtx::new(2, 6, 2, 1, None).unwrap())).unwrap();
        let all = f64q4.subspaces(None);
        assert_eq!(all.len() as u128, f64q4.subspace_count());
        let distinct: HashSet<&Subspace> = all.iter().collect();
        assert_eq!(distinct.len(), all.len());
    }

    #[test]
    fn isometry_small_fields() {
        for spec in ["2,4,2,1,19", "2,3,1,1", "2,2,1,1", "3,2,1,1"] {
            let mt = Matroid::new(Arc::new(FieldCtx::from_spec(spec).unwrap())).unwrap();
            let report = mt.isometry_check().unwrap();
            assert!(report.passed(), "{spec}: {report:?}");
            assert_eq!(report.c1_flats, report.subspaces);
        }
    }
}
