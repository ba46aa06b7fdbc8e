//! The skew polynomial ring `F_{q^m}[x;σ_s]`, where `x·a = σ_s(a)·x`.
//!
//! Only right division is provided: `f = p·g + r`. grcd comes from the right
//! Euclidean algorithm and llcm from its final cofactor, so left division is
//! never needed.

use crate::conjugacy;
use crate::field::{Fe, FieldCtx, FieldError};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SkewError {
    #[error("MixedContexts: operands live in different fields")]
    MixedContexts,
    #[error("DivisionByZeroPoly: division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("ZeroInput: {0}")]
    ZeroInput(&'static str),
    #[error("ParseError: {0}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A skew polynomial; `coeffs[i]` is the coefficient of `x^i` and the last
/// entry is nonzero.
#[derive(Clone)]
pub struct SkewPoly {
    ctx: Arc<FieldCtx>,
    coeffs: Vec<Fe>,
}

/// An ordinary polynomial stored as `(exponent, coefficient)` pairs with
/// strictly increasing exponents and nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssocPoly {
    pub terms: Vec<(u128, Fe)>,
}

/// `gcd = u·f + v·g`, with `gcd` monic.
#[derive(Clone, Debug)]
pub struct Bezout {
    pub gcd: SkewPoly,
    pub u: SkewPoly,
    pub v: SkewPoly,
}

impl AssocPoly {
    /// Ordinary evaluation, `0^0 = 1`.
    pub fn eval(&self, ctx: &FieldCtx, a: Fe) -> Fe {
        self.terms
            .iter()
            .fold(Fe::ZERO, |acc, &(e, c)| ctx.add(acc, ctx.mul(c, ctx.pow(a, e))))
    }

    pub fn degree(&self) -> Option<u128> {
        self.terms.last().map(|&(e, _)| e)
    }
}

impl SkewPoly {
    /// Builds a polynomial from low-to-high coefficients, trimming zeros.
    pub fn new(ctx: Arc<FieldCtx>, mut coeffs: Vec<Fe>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        SkewPoly { ctx, coeffs }
    }

    pub fn zero(ctx: Arc<FieldCtx>) -> Self {
        SkewPoly { ctx, coeffs: Vec::new() }
    }

    pub fn one(ctx: Arc<FieldCtx>) -> Self {
        Self::constant(ctx, Fe::ONE)
    }

    pub fn constant(ctx: Arc<FieldCtx>, c: Fe) -> Self {
        Self::new(ctx, vec![c])
    }

    pub fn x(ctx: Arc<FieldCtx>) -> Self {
        Self::monomial(ctx, Fe::ONE, 1)
    }

    /// `c·x^d`.
    pub fn monomial(ctx: Arc<FieldCtx>, c: Fe, d: usize) -> Self {
        let mut coeffs = vec![Fe::ZERO; d + 1];
        coeffs[d] = c;
        Self::new(ctx, coeffs)
    }

    /// `x - a`.
    pub fn x_minus(ctx: Arc<FieldCtx>, a: Fe) -> Self {
        let c0 = ctx.neg(a);
        Self::new(ctx, vec![c0, Fe::ONE])
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<Fe> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(Fe::ONE)
    }

    fn check_ctx(&self, other: &SkewPoly) -> Result<(), SkewError> {
        if self.ctx.same_field(&other.ctx) {
            Ok(())
        } else {
            Err(SkewError::MixedContexts)
        }
    }

    pub fn try_add(&self, other: &SkewPoly) -> Result<SkewPoly, SkewError> {
        self.check_ctx(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|i| self.ctx.add(self.coeff(i), other.coeff(i))).collect();
        Ok(Self::new(self.ctx.clone(), coeffs))
    }

    pub fn try_sub(&self, other: &SkewPoly) -> Result<SkewPoly, SkewError> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> SkewPoly {
        let coeffs = self.coeffs.iter().map(|&c| self.ctx.neg(c)).collect();
        SkewPoly { ctx: self.ctx.clone(), coeffs }
    }

    /// `c·f`, multiplying every coefficient on the left.
    pub fn scale_left(&self, c: Fe) -> SkewPoly {
        let coeffs = self.coeffs.iter().map(|&a| self.ctx.mul(c, a)).collect();
        Self::new(self.ctx.clone(), coeffs)
    }

    /// Schoolbook product using `a_i x^i · b_j x^j = a_i σ^i(b_j) x^{i+j}`.
    pub fn try_mul(&self, other: &SkewPoly) -> Result<SkewPoly, SkewError> {
        self.check_ctx(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ctx.clone()));
        }
        let ctx = &self.ctx;
        let mut out = vec![Fe::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let t = ctx.mul(a, ctx.frobenius(b, i as i64));
                out[i + j] = ctx.add(out[i + j], t);
            }
        }
        Ok(Self::new(ctx.clone(), out))
    }

    /// Right division: returns `(p, r)` with `self = p·g + r` and `r = 0` or
    /// `deg r < deg g`.
    pub fn right_divmod(&self, g: &SkewPoly) -> Result<(SkewPoly, SkewPoly), SkewError> {
        self.check_ctx(g)?;
        let dg = g.degree().ok_or(SkewError::DivisionByZeroPoly)?;
        let ctx = &self.ctx;
        let Some(df) = self.degree().filter(|&d| d >= dg) else {
            return Ok((Self::zero(ctx.clone()), self.clone()));
        };
        let lead = g.coeffs[dg];
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Fe::ZERO; df - dg + 1];
        for d in (dg..=df).rev() {
            let c = rem[d];
            if c.is_zero() {
                continue;
            }
            let shift = d - dg;
            let t = ctx.div(c, ctx.frobenius(lead, shift as i64))?;
            quot[shift] = t;
            for (j, &gj) in g.coeffs.iter().enumerate() {
                let sub = ctx.mul(t, ctx.frobenius(gj, shift as i64));
                rem[j + shift] = ctx.sub(rem[j + shift], sub);
            }
        }
        rem.truncate(dg);
        Ok((Self::new(ctx.clone(), quot), Self::new(ctx.clone(), rem)))
    }

    /// Divides on the left by the leading coefficient.
    pub fn monic(&self) -> SkewPoly {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale_left(self.ctx.inv(l).expect("leading coefficient is nonzero")),
        }
    }

    /// Extended right Euclidean algorithm.
    ///
    /// Returns the monic grcd with cofactors, and the final pair `(u, v)`
    /// with `u·f + v·g = 0`, from which the llcm is read off.
    fn euclid(&self, g: &SkewPoly) -> Result<(Bezout, SkewPoly, SkewPoly), SkewError> {
        self.check_ctx(g)?;
        if self.is_zero() && g.is_zero() {
            return Err(SkewError::ZeroInput("grcd of two zero polynomials"));
        }
        let ctx = self.ctx.clone();
        let (mut r0, mut r1) = (self.clone(), g.clone());
        let (mut u0, mut u1) = (Self::one(ctx.clone()), Self::zero(ctx.clone()));
        let (mut v0, mut v1) = (Self::zero(ctx.clone()), Self::one(ctx.clone()));
        while !r1.is_zero() {
            let (quo, rem) = r0.right_divmod(&r1)?;
            let u2 = u0.try_sub(&quo.try_mul(&u1)?)?;
            let v2 = v0.try_sub(&quo.try_mul(&v1)?)?;
            (r0, r1) = (r1, rem);
            (u0, u1) = (u1, u2);
            (v0, v1) = (v1, v2);
        }
        let inv = ctx.inv(r0.leading().expect("nonzero remainder"))?;
        let bezout = Bezout { gcd: r0.scale_left(inv), u: u0.scale_left(inv), v: v0.scale_left(inv) };
        Ok((bezout, u1, v1))
    }

    /// Greatest common right divisor with Bézout cofactors.
    pub fn grcd_ext(&self, g: &SkewPoly) -> Result<Bezout, SkewError> {
        self.euclid(g).map(|(b, _, _)| b)
    }

    pub fn grcd(&self, g: &SkewPoly) -> Result<SkewPoly, SkewError> {
        self.grcd_ext(g).map(|b| b.gcd)
    }

    /// Least left common multiple, `u·f` for the terminating cofactor `u`.
    pub fn llcm(&self, g: &SkewPoly) -> Result<SkewPoly, SkewError> {
        if self.is_zero() || g.is_zero() {
            return Err(SkewError::ZeroInput("llcm needs two nonzero polynomials"));
        }
        let (_, u, _) = self.euclid(g)?;
        Ok(u.try_mul(self)?.monic())
    }

    /// Remainder evaluation `f(a)`, computed as `Σ c_i a^{⟦i⟧_s}`.
    pub fn eval(&self, a: Fe) -> Fe {
        let ctx = &self.ctx;
        let n = ctx.mult_order();
        let mut acc = Fe::ZERO;
        let mut exp = 0u64;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if i == 0 {
                acc = c;
            } else if !c.is_zero() {
                acc = ctx.add(acc, ctx.mul(c, ctx.pow_reduced_positive(a, exp)));
            }
            exp = (exp + ctx.bracket_mod(i as u64)) % n;
        }
        acc
    }

    /// Evaluation by the definition: the remainder of right division by `x - a`.
    pub fn eval_by_division(&self, a: Fe) -> Fe {
        let (_, r) = self
            .right_divmod(&Self::x_minus(self.ctx.clone(), a))
            .expect("x - a is nonzero");
        r.coeff(0)
    }

    /// `f^R_s = Σ c_i x^{⟦i⟧_s}`.
    pub fn regular_assoc(&self) -> Result<AssocPoly, SkewError> {
        self.assoc(|i| self.ctx.dbracket(i))
    }

    /// `f^L_s = Σ c_i x^{[i]_s}`.
    pub fn linearized_assoc(&self) -> Result<AssocPoly, SkewError> {
        self.assoc(|i| self.ctx.bracket(i))
    }

    fn assoc(&self, exponent: impl Fn(u64) -> Result<u128, FieldError>) -> Result<AssocPoly, SkewError> {
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                terms.push((exponent(i as u64)?, c));
            }
        }
        Ok(AssocPoly { terms })
    }

    /// `Z(f)`, by evaluating at every field element.
    pub fn zeros(&self) -> Result<Vec<Fe>, SkewError> {
        if self.is_zero() {
            return Err(SkewError::ZeroInput("the zero polynomial vanishes everywhere"));
        }
        Ok(self.ctx.elements().filter(|&a| self.eval(a).is_zero()).collect())
    }

    /// Parses `term ('+' term)*` with `term := coeff | [coeff '*'] 'x' ['^' n]`.
    pub fn parse(ctx: Arc<FieldCtx>, text: &str) -> Result<SkewPoly, SkewError> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(SkewError::Parse("empty polynomial".into()));
        }
        let mut coeffs: Vec<Fe> = Vec::new();
        for term in compact.split('+') {
            let (c, d) = parse_term(&ctx, term)?;
            if coeffs.len() <= d {
                coeffs.resize(d + 1, Fe::ZERO);
            }
            coeffs[d] = ctx.add(coeffs[d], c);
        }
        Ok(Self::new(ctx, coeffs))
    }
}

fn parse_term(ctx: &FieldCtx, term: &str) -> Result<(Fe, usize), SkewError> {
    let bad = || SkewError::Parse(format!("bad term {term:?}"));
    let Some(xpos) = term.find('x') else {
        return Ok((ctx.parse_elem(term).map_err(|_| bad())?, 0));
    };
    let (head, tail) = (&term[..xpos], &term[xpos + 1..]);
    let coeff = if head.is_empty() {
        Fe::ONE
    } else {
        let c = head.strip_suffix('*').ok_or_else(bad)?;
        ctx.parse_elem(c).map_err(|_| bad())?
    };
    let degree = if tail.is_empty() {
        1
    } else {
        tail.strip_prefix('^').and_then(|e| e.parse::<usize>().ok()).ok_or_else(bad)?
    };
    Ok((coeff, degree))
}

/// `fg(a)` by the product rule: zero if `g(a) = 0`, else `f(a^{g(a)})·g(a)`.
pub fn eval_product_rule(f: &SkewPoly, g: &SkewPoly, a: Fe) -> Result<Fe, SkewError> {
    f.check_ctx(g)?;
    let ga = g.eval(a);
    if ga.is_zero() {
        return Ok(Fe::ZERO);
    }
    let conj = conjugacy::conjugate(&f.ctx, a, ga).expect("g(a) is nonzero");
    Ok(f.ctx.mul(f.eval(conj), ga))
}

impl PartialEq for SkewPoly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.ctx.same_field(&other.ctx)
    }
}

impl Eq for SkewPoly {}

impl fmt::Display for SkewPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (d, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (d, c == Fe::ONE) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => f.write_str("x")?,
                (1, false) => write!(f, "{c}*x")?,
                (_, true) => write!(f, "x^{d}")?,
                (_, false) => write!(f, "{c}*x^{d}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SkewPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $via:ident) => {
        impl std::ops::$tr<&SkewPoly> for &SkewPoly {
            type Output = SkewPoly;

            fn $method(self, rhs: &SkewPoly) -> SkewPoly {
                self.$via(rhs).expect("operands share a field")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f4() -> Arc<FieldCtx> {
        Arc::new(FieldCtx::new(2, 2, 1, 1, None).unwrap())
    }

    fn f16() -> Arc<FieldCtx> {
        Arc::new(FieldCtx::from_spec("2,4,2,1,19").unwrap())
    }

    fn p(ctx: &Arc<FieldCtx>, s: &str) -> SkewPoly {
        SkewPoly::parse(ctx.clone(), s).unwrap()
    }

    #[test]
    fn addition() {
        let c = f4();
        let f = p(&c, "x^2+x+1");
        assert_eq!(&f + &SkewPoly::zero(c.clone()), f);
        assert!((&p(&c, "x+1") + &p(&c, "x+1")).is_zero());
        assert_eq!(&f + &p(&c, "x^2+g2"), p(&c, "x+g1"));
    }

    #[test]
    fn products_over_f4() {
        let c = f4();
        assert_eq!((&p(&c, "x+1") * &p(&c, "g1*x+1")).to_string(), "g2*x^2 + g2*x + 1");
        let target = p(&c, "x^4+x^2+1");
        assert_eq!(&p(&c, "x^2+x+1") * &p(&c, "x^2+x+1"), target);
        assert_eq!(&p(&c, "x^2+g2") * &p(&c, "x^2+g1"), target);
    }

    #[test]
    fn division_examples() {
        let c = f4();
        let (q, r) = p(&c, "x^4+x^2+1").right_divmod(&p(&c, "x^2+g1")).unwrap();
        assert_eq!(q, p(&c, "x^2+g2"));
        assert!(r.is_zero());
        let f = p(&c, "g1*x^3+x+g2");
        let (q, r) = f.right_divmod(&f).unwrap();
        assert_eq!(q, SkewPoly::one(c.clone()));
        assert!(r.is_zero());
        let (_, r) = p(&c, "x^2+1").right_divmod(&SkewPoly::x_minus(c.clone(), c.gamma_pow(1))).unwrap();
        assert!(r.is_zero());
        assert_eq!(f.right_divmod(&SkewPoly::zero(c.clone())).unwrap_err(), SkewError::DivisionByZeroPoly);
    }

    #[test]
    fn mixed_contexts_rejected() {
        let (a, b) = (f4(), f16());
        let err = p(&a, "x").try_mul(&p(&b, "x")).unwrap_err();
        assert_eq!(err, SkewError::MixedContexts);
        // structurally equal contexts are the same field
        assert!(p(&a, "x").try_add(&p(&f4(), "x")).is_ok());
    }

    #[test]
    fn evaluation_examples() {
        let c = f4();
        let alpha = c.gamma_pow(1);
        assert_eq!(p(&c, "x^4+x^2+1").eval(alpha), Fe::ONE);
        assert_eq!(p(&c, "x^2+1").zeros().unwrap(), vec![Fe::ONE, alpha, c.gamma_pow(2)]);
        let f = p(&c, "g2*x^3+x+g1");
        assert_eq!(f.eval(Fe::ZERO), alpha);
        let g = f16();
        assert_eq!(SkewPoly::x_minus(g.clone(), g.gamma_pow(3)).zeros().unwrap(), vec![g.gamma_pow(3)]);
        assert!(SkewPoly::constant(g.clone(), g.gamma_pow(7)).zeros().unwrap().is_empty());
        assert!(SkewPoly::zero(g).zeros().is_err());
    }

    #[test]
    fn product_rule_examples() {
        let c = f4();
        let alpha = c.gamma_pow(1);
        let g = p(&c, "x^2+x+1");
        assert_eq!(g.eval(alpha), alpha);
        assert_eq!(g.eval(conjugacy::conjugate(&c, alpha, alpha).unwrap()), c.gamma_pow(2));
        assert_eq!(eval_product_rule(&g, &g, alpha).unwrap(), Fe::ONE);
        let one = SkewPoly::one(c.clone());
        assert_eq!(eval_product_rule(&one, &g, alpha).unwrap(), g.eval(alpha));
        let x1 = p(&c, "x^2+1");
        assert_eq!(eval_product_rule(&g, &x1, Fe::ONE).unwrap(), Fe::ZERO);
    }

    #[test]
    fn associates() {
        let c = f4();
        let r = p(&c, "x^2+1").regular_assoc().unwrap();
        assert_eq!(r.terms, vec![(0, Fe::ONE), (3, Fe::ONE)]);
        let k = SkewPoly::constant(c.clone(), c.gamma_pow(1));
        assert_eq!(k.regular_assoc().unwrap().terms, vec![(0, c.gamma_pow(1))]);
        assert_eq!(k.linearized_assoc().unwrap().terms, vec![(1, c.gamma_pow(1))]);
        let g = f16();
        let x = SkewPoly::x(g.clone());
        assert_eq!(x.regular_assoc().unwrap().terms, vec![(1, Fe::ONE)]);
        assert_eq!(x.linearized_assoc().unwrap().terms, vec![(4, Fe::ONE)]);
    }

    #[test]
    fn grcd_llcm_basics() {
        let c = f4();
        let f = p(&c, "g1*x^2+x+g2");
        assert_eq!(f.grcd(&f).unwrap(), f.monic());
        assert_eq!(f.llcm(&f).unwrap(), f.monic());
        assert!(SkewPoly::zero(c.clone()).grcd(&SkewPoly::zero(c.clone())).is_err());
        assert!(f.llcm(&SkewPoly::zero(c.clone())).is_err());
        assert_eq!(f.grcd(&SkewPoly::zero(c.clone())).unwrap(), f.monic());
    }

    /// Brute force: the lowest-degree monic polynomial of degree <= 4 over F_4
    /// that both arguments right-divide.
    fn brute_llcm(ctx: &Arc<FieldCtx>, f: &SkewPoly, g: &SkewPoly) -> SkewPoly {
        for d in 0..=4usize {
            let total = 4usize.pow(d as u32);
            for idx in 0..total {
                let mut coeffs: Vec<Fe> = (0..d).map(|i| ctx.elements().nth((idx / 4usize.pow(i as u32)) % 4).unwrap()).collect();
                coeffs.push(Fe::ONE);
                let h = SkewPoly::new(ctx.clone(), coeffs);
                if h.right_divmod(f).unwrap().1.is_zero() && h.right_divmod(g).unwrap().1.is_zero() {
                    return h;
                }
            }
        }
        panic!("no common left multiple of degree <= 4");
    }

    #[test]
    fn llcm_matches_brute_force() {
        let c = f4();
        let (f, g) = (p(&c, "x^2+g2"), p(&c, "x^2+g1"));
        let expected = brute_llcm(&c, &f, &g);
        assert_eq!(expected.to_string(), "x^4 + x^2 + 1");
        assert_eq!(f.llcm(&g).unwrap(), expected);
        assert_eq!(f.grcd(&g).unwrap(), SkewPoly::one(c.clone()));
    }

    #[test]
    fn print_parse_round_trip() {
        let c = f16();
        for s in ["0", "1", "x", "g3*x^2 + x + g14", "x^5 + g1"] {
            assert_eq!(p(&c, s).to_string(), s);
        }
        assert!(SkewPoly::parse(c.clone(), "x^").is_err());
        assert!(SkewPoly::parse(c.clone(), "g1x").is_err());
        assert!(SkewPoly::parse(c.clone(), "").is_err());
        assert_eq!(p(&c, "x + x"), SkewPoly::zero(c.clone()));
    }

    fn arb_poly(ctx: Arc<FieldCtx>, max_deg: usize) -> impl Strategy<Value = SkewPoly> {
        let order = ctx.order() as usize;
        prop::collection::vec(0..order, 0..=max_deg + 1).prop_map(move |idx| {
            let coeffs = idx.into_iter().map(|i| ctx.elements().nth(i).unwrap()).collect();
            SkewPoly::new(ctx.clone(), coeffs)
        })
    }

    fn contexts() -> impl Strategy<Value = Arc<FieldCtx>> {
        prop_oneof![
            Just(f4()),
            Just(f16()),
            Just(Arc::new(FieldCtx::new(2, 5, 1, 2, None).unwrap())),
            Just(Arc::new(FieldCtx::new(3, 2, 1, 1, None).unwrap())),
        ]
    }

    proptest! {
        #[test]
        fn ring_axioms((f, g, h) in contexts().prop_flat_map(|c| (arb_poly(c.clone(), 3), arb_poly(c.clone(), 3), arb_poly(c, 3)))) {
            prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
            prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
            prop_assert_eq!(&(&f + &g) * &h, &(&f * &h) + &(&g * &h));
            if let (Some(df), Some(dg)) = (f.degree(), g.degree()) {
                prop_assert_eq!((&f * &g).degree(), Some(df + dg));
            }
        }

        #[test]
        fn division_contract((f, g) in contexts().prop_flat_map(|c| (arb_poly(c.clone(), 6), arb_poly(c, 3)))) {
            prop_assume!(!g.is_zero());
            let (q, r) = f.right_divmod(&g).unwrap();
            prop_assert_eq!(&(&q * &g) + &r, f.clone());
            prop_assert!(r.degree().is_none_or(|d| d < g.degree().unwrap()));
            // uniqueness: dividing p·g + r again recovers the same pair
            let (q2, r2) = (&(&q * &g) + &r).right_divmod(&g).unwrap();
            prop_assert_eq!(q2, q);
            prop_assert_eq!(r2, r);
        }

        #[test]
        fn evaluation_coherence(f in contexts().prop_flat_map(|c| arb_poly(c, 6))) {
            let ctx = f.ctx().clone();
            let reg = f.regular_assoc().unwrap();
            for a in ctx.elements() {
                let v = f.eval(a);
                prop_assert_eq!(v, f.eval_by_division(a));
                prop_assert_eq!(v, reg.eval(&ctx, a));
            }
        }

        #[test]
        fn product_rule((f, g) in contexts().prop_flat_map(|c| (arb_poly(c.clone(), 4), arb_poly(c, 4)))) {
            let fg = &f * &g;
            for a in f.ctx().elements() {
                prop_assert_eq!(eval_product_rule(&f, &g, a).unwrap(), fg.eval(a));
            }
        }

        #[test]
        fn linearized_correspondence(f in contexts().prop_flat_map(|c| arb_poly(c, 5))) {
            let ctx = f.ctx().clone();
            let lin = f.linearized_assoc().unwrap();
            for a in ctx.nonzero_elements() {
                let w = conjugacy::warp(&ctx, a).unwrap();
                prop_assert_eq!(ctx.mul(a, f.eval(w)), lin.eval(&ctx, a));
            }
        }

        #[test]
        fn linearized_root_bound(f in contexts().prop_flat_map(|c| arb_poly(c, 4))) {
            let ctx = f.ctx().clone();
            let Some(n) = f.degree() else { return Ok(()) };
            let lin = f.linearized_assoc().unwrap();
            let roots = ctx.elements().filter(|&a| lin.eval(&ctx, a).is_zero()).count() as u128;
            prop_assert!(roots <= (ctx.q() as u128).pow(n as u32));
        }

        #[test]
        fn llcm_grcd_degree_identity((f, g) in prop_oneof![Just(f4()), Just(f16())].prop_flat_map(|c| (arb_poly(c.clone(), 4), arb_poly(c, 4)))) {
            prop_assume!(!f.is_zero() && !g.is_zero());
            let gcd = f.grcd_ext(&g).unwrap();
            let l = f.llcm(&g).unwrap();
            prop_assert!(gcd.gcd.is_monic() && l.is_monic());
            prop_assert_eq!(&(&gcd.u * &f) + &(&gcd.v * &g), gcd.gcd.clone());
            prop_assert!(f.right_divmod(&gcd.gcd).unwrap().1.is_zero());
            prop_assert!(g.right_divmod(&gcd.gcd).unwrap().1.is_zero());
            prop_assert!(l.right_divmod(&f).unwrap().1.is_zero());
            prop_assert!(l.right_divmod(&g).unwrap().1.is_zero());
            prop_assert_eq!(l.degree().unwrap() + gcd.gcd.degree().unwrap(), f.degree().unwrap() + g.degree().unwrap());
        }
    }

    #[test]
    fn commuting_rule_exhaustive() {
        for c in [f4(), f16()] {
            let x = SkewPoly::x(c.clone());
            for a in c.elements() {
                let lhs = &x * &SkewPoly::constant(c.clone(), a);
                assert_eq!(lhs, SkewPoly::monomial(c.clone(), c.frobenius(a, 1), 1));
            }
        }
    }

    #[test]
    fn ring_axioms_exhaustive_f4_degree_le_2() {
        let c = f4();
        let elems: Vec<Fe> = c.elements().collect();
        let all: Vec<SkewPoly> = (0..64)
            .map(|i| SkewPoly::new(c.clone(), vec![elems[i % 4], elems[(i / 4) % 4], elems[i / 16]]))
            .collect();
        for f in &all {
            for g in &all {
                for h in &all {
                    assert_eq!(&(f * g) * h, f * &(g * h));
                    assert_eq!(f * &(g + h), &(f * g) + &(f * h));
                }
            }
        }
    }
}
