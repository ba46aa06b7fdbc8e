//! Fixed worked examples over `F_4` and `F_16 = F_4[γ]` (modpoly
//! `x^4 + x + 1`), checked exactly. Used by the CLI `selftest` verb.

use crate::conjugacy::{self, ClassId};
use crate::field::{Fe, FieldCtx, FieldError, Matrix};
use crate::matroid::{Matroid, Subspace};
use crate::minimal::{self, PointSet};
use crate::netsim;
use crate::skewpoly::{self, SkewPoly};
use std::sync::Arc;

pub const F4_SPEC: &str = "2,2,1,1";
pub const F16_SPEC: &str = "2,4,2,1,19";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn(&Arc<FieldCtx>, &Arc<FieldCtx>) -> Result<(), String>;

fn expect<T: PartialEq + std::fmt::Debug>(got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("got {got:?}, expected {want:?}"))
    }
}

fn poly(ctx: &Arc<FieldCtx>, text: &str) -> Result<SkewPoly, String> {
    SkewPoly::parse(ctx.clone(), text).map_err(|e| e.to_string())
}

fn pts(ctx: &Arc<FieldCtx>, list: &str) -> Result<PointSet, String> {
    Ok(PointSet::new(ctx.clone(), ctx.parse_elems(list).map_err(|e| e.to_string())?))
}

fn checks() -> Vec<(&'static str, Check)> {
    vec![
        ("F_4 generator g1 satisfies g1^2 = 1 + g1", |f4, _| expect(f4.mul(f4.gamma_pow(1), f4.gamma_pow(1)), f4.add(Fe::ONE, f4.gamma_pow(1)))),
        ("F_16 prime subfield F_4* = {1, g5, g10}", |_, f16| {
            expect(f16.subfield().to_vec(), vec![Fe::ZERO, Fe::ONE, f16.gamma_pow(5), f16.gamma_pow(10)])
        }),
        ("Frobenius on F_4 squares", |f4, _| expect(f4.frobenius(f4.gamma_pow(1), 1), f4.gamma_pow(2))),
        ("Frobenius on F_16 raises to the 4th power", |_, f16| expect(f16.frobenius(f16.gamma_pow(1), 1), f16.gamma_pow(4))),
        ("bracket identity [[1]] + [1][[1]] = [[2]] = 5 for q = 4", |_, f16| {
            let lhs = f16.dbracket(1).map_err(|e| e.to_string())? + f16.bracket(1).map_err(|e| e.to_string())? * f16.dbracket(1).map_err(|e| e.to_string())?;
            expect((lhs, f16.dbracket(2).map_err(|e| e.to_string())?), (5, 5))
        }),
        ("coordinates of g2 and g3 in basis {1, g}", |_, f16| {
            let g = |i| f16.gamma_pow(i);
            expect((f16.coords(g(2)), f16.coords(g(3))), (vec![g(5), Fe::ONE], vec![g(5), g(10)]))
        }),
        ("skew product (x+1)(g1 x+1) = g2 x^2 + g2 x + 1", |f4, _| {
            expect(poly(f4, "x+1")?.try_mul(&poly(f4, "g1*x+1")?).map_err(|e| e.to_string())?.to_string(), "g2*x^2 + g2*x + 1".into())
        }),
        ("x^4 + x^2 + 1 = (x^2+x+1)(x^2+x+1)", |f4, _| {
            let p = poly(f4, "x^2+x+1")?;
            expect(p.try_mul(&p).map_err(|e| e.to_string())?, poly(f4, "x^4+x^2+1")?)
        }),
        ("x^4 + x^2 + 1 = (x^2+g2)(x^2+g1)", |f4, _| {
            expect(poly(f4, "x^2+g2")?.try_mul(&poly(f4, "x^2+g1")?).map_err(|e| e.to_string())?, poly(f4, "x^4+x^2+1")?)
        }),
        ("x^4 + x^2 + 1 right-divided by x^2 + g1 leaves quotient x^2 + g2", |f4, _| {
            let (q, r) = poly(f4, "x^4+x^2+1")?.right_divmod(&poly(f4, "x^2+g1")?).map_err(|e| e.to_string())?;
            expect((q, r.is_zero()), (poly(f4, "x^2+g2")?, true))
        }),
        ("remainder of x^2 + 1 by x - g1 is its value 0", |f4, _| {
            let f = poly(f4, "x^2+1")?;
            expect((f.eval_by_division(f4.gamma_pow(1)), f.eval(f4.gamma_pow(1))), (Fe::ZERO, Fe::ZERO))
        }),
        ("regular associate of x^2 + 1 is x^3 + 1", |f4, _| {
            let a = poly(f4, "x^2+1")?.regular_assoc().map_err(|e| e.to_string())?;
            expect(a.terms.clone(), vec![(0, Fe::ONE), (3, Fe::ONE)])
        }),
        ("(x^4 + x^2 + 1)(g1) = 1", |f4, _| expect(poly(f4, "x^4+x^2+1")?.eval(f4.gamma_pow(1)), Fe::ONE)),
        ("product rule g(g1^{h(g1)})h(g1) = g2 * g1 = 1", |f4, _| {
            let g = poly(f4, "x^2+x+1")?;
            let a = f4.gamma_pow(1);
            let ha = g.eval(a);
            let conj = conjugacy::conjugate(f4, a, ha).map_err(|e| e.to_string())?;
            let via_rule = skewpoly::eval_product_rule(&g, &g, a).map_err(|e| e.to_string())?;
            expect((ha, g.eval(conj), via_rule), (a, f4.gamma_pow(2), Fe::ONE))
        }),
        ("product rule vanishes when the right factor does", |f4, _| {
            let f = poly(f4, "g1*x^3+x+g2")?;
            let g = poly(f4, "x^2+1")?;
            expect(skewpoly::eval_product_rule(&f, &g, Fe::ONE).map_err(|e| e.to_string())?, Fe::ZERO)
        }),
        ("zeros of x^2 + 1 over F_4 are {1, g1, g2}", |f4, _| {
            expect(poly(f4, "x^2+1")?.zeros().map_err(|e| e.to_string())?, vec![Fe::ONE, f4.gamma_pow(1), f4.gamma_pow(2)])
        }),
        ("warp is 1 on F_4* inside F_16", |_, f16| {
            let ones: Vec<Fe> = f16.subfield()[1..].iter().map(|&c| conjugacy::warp(f16, c).unwrap()).collect();
            expect(ones, vec![Fe::ONE; 3])
        }),
        ("class of 0 is C(0)", |_, f16| expect(conjugacy::class_of(f16, Fe::ZERO), ClassId::Zero)),
        ("class of g7 is C(g1), class of g12 is C(1)", |_, f16| {
            expect((conjugacy::class_of(f16, f16.gamma_pow(7)), conjugacy::class_of(f16, f16.gamma_pow(12))), (ClassId::Nonzero(1), ClassId::Nonzero(0)))
        }),
        ("F_16 classes C(1), C(g1), C(g2)", |_, f16| {
            let logs = |l| conjugacy::class_elements(f16, l).unwrap().iter().map(|e| e.log().unwrap()).collect::<Vec<_>>();
            expect((logs(0), logs(1), logs(2)), (vec![0, 3, 6, 9, 12], vec![1, 4, 7, 10, 13], vec![2, 5, 8, 11, 14]))
        }),
        ("classes agree for s = 1 and s = 2 on F_32", |_, _| {
            let c = FieldCtx::new(2, 5, 1, 2, None).map_err(|e| e.to_string())?;
            let all = c.nonzero_elements().all(|a| conjugacy::class_invariance_s(&c, a));
            expect(all, true)
        }),
        ("minimal polynomial of {1, g1} over F_4 is x^2 + 1", |f4, _| {
            expect(minimal::minimal_poly(&pts(f4, "1,g1")?).poly.to_string(), "x^2 + 1".into())
        }),
        ("minimal polynomial of {g7} is x - g7", |_, f16| {
            expect(minimal::minimal_poly(&pts(f16, "g7")?).poly, SkewPoly::x_minus(f16.clone(), f16.gamma_pow(7)))
        }),
        ("closure of {1, g1} over F_4 is {1, g1, g2}", |f4, _| expect(minimal::closure(&pts(f4, "1,g1")?), pts(f4, "1,g1,g2")?)),
        ("closure of {1, g3} over F_16 is C(1)", |_, f16| expect(minimal::closure(&pts(f16, "1,g3")?), pts(f16, "1,g3,g6,g9,g12")?)),
        ("{1, g3} is P-independent", |_, f16| expect(minimal::is_p_independent(&pts(f16, "1,g3")?), true)),
        ("{1, g3, g6} is P-dependent", |_, f16| expect(minimal::is_p_independent(&pts(f16, "1,g3,g6")?), false)),
        ("{1, g3, g1, g4} is P-independent", |_, f16| expect(minimal::is_p_independent(&pts(f16, "1,g3,g1,g4")?), true)),
        ("greedy P-basis of C(1) is {1, g3}", |_, f16| expect(minimal::p_basis(&pts(f16, "1,g3,g6,g9,g12")?), pts(f16, "1,g3")?)),
        ("lifts of {1, g3} are F_4-independent", |_, f16| {
            let lifts = minimal::lift(&pts(f16, "1,g3")?).map_err(|e| e.to_string())?;
            expect(Matrix::from_rows(lifts, 2).rank(f16), 2)
        }),
        ("fast closure of {1, g3} and of {1, g3, g6} is C(1)", |_, f16| {
            let c1 = pts(f16, "1,g3,g6,g9,g12")?;
            let a = minimal::closure_fast(&pts(f16, "1,g3")?).map_err(|e| e.to_string())?;
            let b = minimal::closure_fast(&pts(f16, "1,g3,g6")?).map_err(|e| e.to_string())?;
            expect((a, b), (c1.clone(), c1))
        }),
        ("matroid ranks 2 and 4", |_, f16| {
            let mt = Matroid::new(f16.clone()).map_err(|e| e.to_string())?;
            expect((mt.rank(&pts(f16, "1,g3,g6")?), mt.rank(&pts(f16, "1,g3,g1,g4")?)), (2, 4))
        }),
        ("matroid closure of {1, g3} is the rank-2 flat C(1)", |_, f16| {
            let mt = Matroid::new(f16.clone()).map_err(|e| e.to_string())?;
            let fl = mt.closure(&pts(f16, "1,g3")?);
            expect((fl.points().clone(), fl.rank()), (pts(f16, "1,g3,g6,g9,g12")?, 2))
        }),
        ("representation matrix A of F_16 over F_4", |_, f16| {
            let mt = Matroid::new(f16.clone()).map_err(|e| e.to_string())?;
            let g = |i| f16.gamma_pow(i);
            let a = Matrix::from_rows(vec![vec![Fe::ONE, Fe::ZERO, g(5), g(5), Fe::ONE], vec![Fe::ZERO, Fe::ONE, Fe::ONE, g(10), Fe::ONE]], 5);
            expect((mt.representation().a.clone(), a.rank(f16)), (a, 2))
        }),
        ("block representation matrix is 7 x 16 of rank 7", |_, f16| {
            let mt = Matroid::new(f16.clone()).map_err(|e| e.to_string())?;
            let s = mt.representation().script_a;
            expect((s.rows(), s.cols(), s.rank(f16)), (7, 16, 7))
        }),
        ("extended warp of the whole space is C(1)", |_, f16| {
            let mt = Matroid::new(f16.clone()).map_err(|e| e.to_string())?;
            expect(mt.phi(&Subspace::whole(2)).map_err(|e| e.to_string())?.points().clone(), pts(f16, "1,g3,g6,g9,g12")?)
        }),
        ("random rank-2 message of C(1) is C(1)", |_, f16| {
            let mt = Matroid::new(f16.clone()).map_err(|e| e.to_string())?;
            let mut rng = netsim::trial_rng(0, 0);
            let fl = netsim::encode_message(&mt, 0, 2, &mut rng).map_err(|e| e.to_string())?;
            expect(fl.points().clone(), pts(f16, "1,g3,g6,g9,g12")?)
        }),
        ("relay output is a zero of the inputs' minimal polynomial", |_, f16| {
            let input = pts(f16, "1,g3")?;
            let f = minimal::minimal_poly(&input).poly;
            let mut rng = netsim::trial_rng(0, 1);
            for _ in 0..200 {
                let out = netsim::relay_forward(f16, input.elems(), &mut rng).map_err(|e| e.to_string())?;
                if !f.eval(out).is_zero() {
                    return Err(format!("{out} is not a zero of {f}"));
                }
            }
            Ok(())
        }),
    ]
}

/// Runs every example against freshly built contexts; `field_override`
/// replaces the `F_16` context (e.g. to test a different modpoly).
pub fn run(field_override: Option<&str>) -> Vec<GoldenResult> {
    let build = |spec: &str| -> Result<Arc<FieldCtx>, FieldError> { FieldCtx::from_spec(spec).map(Arc::new) };
    let contexts = build(F4_SPEC).and_then(|f4| Ok((f4, build(field_override.unwrap_or(F16_SPEC))?)));
    let (f4, f16) = match contexts {
        Ok(c) => c,
        Err(e) => return vec![GoldenResult { name: "field construction", passed: false, detail: e.to_string() }],
    };
    checks()
        .into_iter()
        .map(|(name, check)| {
            let outcome = std::panic::catch_unwind(|| check(&f4, &f16)).unwrap_or_else(|_| Err("panicked".into()));
            match outcome {
                Ok(()) => GoldenResult { name, passed: true, detail: String::new() },
                Err(detail) => GoldenResult { name, passed: false, detail },
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_examples_pass() {
        for r in run(None) {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }

    #[test]
    fn non_primitive_modpoly_is_reported() {
        // x^4 + x^3 + x^2 + x + 1 is irreducible but has order 5
        let r = run(Some("2,4,2,1,31"));
        assert_eq!(r.len(), 1);
        assert!(!r[0].passed);
        assert!(r[0].detail.starts_with("NonPrimitiveModpoly"), "{}", r[0].detail);
    }
}
