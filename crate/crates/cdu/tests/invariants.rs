//! Cross-cutting invariants that span modules: field axioms at larger
//! sizes, modulus independence of uniformity spectra, and Parseval on a
//! bigger field.

use std::sync::Arc;

use cdu::analysis::{c_uniformity, walsh_coefficient, PAryFunction};
use cdu::cyclotomic::CycInt;
use cdu::families::{instantiate, FamilyId};
use cdu::gf::{default_modulus, is_irreducible, FieldCtx, FieldSpec};
use cdu::solvers::{linearized_kernel, LinearizedPoly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The next irreducible after the default one, in the same deterministic
/// order the default search uses.
fn second_modulus(p: u64, n: u32) -> Vec<u64> {
    let first = default_modulus(p, n).unwrap();
    let start: u64 = first
        .iter()
        .take(n as usize)
        .enumerate()
        .map(|(i, &c)| c * p.pow(i as u32))
        .sum::<u64>()
        + 1;
    for t in start..p.pow(n) {
        let mut coeffs = vec![0u64; n as usize + 1];
        let mut v = t;
        for c in coeffs.iter_mut().take(n as usize) {
            *c = v % p;
            v /= p;
        }
        coeffs[n as usize] = 1;
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!()
}

#[test]
fn field_axioms_all_triples_up_to_512() {
    for (p, n) in [
        (2u64, 7u32),
        (2, 8),
        (2, 9),
        (3, 5),
        (5, 3),
        (7, 3),
        (11, 2),
        (13, 2),
    ] {
        let ctx = FieldCtx::with_default_modulus(p, n).unwrap();
        let q = ctx.q();
        assert!(q <= 512);
        // unique inverses
        for x in ctx.elements().skip(1) {
            let inv = ctx.inv(x).unwrap();
            assert_eq!(ctx.mul(x, inv), ctx.one());
            let hits = ctx.elements().filter(|&y| ctx.mul(x, y) == ctx.one()).count();
            assert_eq!(hits, 1);
        }
        // associativity, commutativity, distributivity on all triples
        for x in ctx.elements() {
            for y in ctx.elements() {
                assert_eq!(ctx.mul(x, y), ctx.mul(y, x));
                assert_eq!(ctx.add(x, y), ctx.add(y, x));
                for z in ctx.elements() {
                    assert_eq!(ctx.mul(ctx.mul(x, y), z), ctx.mul(x, ctx.mul(y, z)));
                    assert_eq!(ctx.add(ctx.add(x, y), z), ctx.add(x, ctx.add(y, z)));
                    assert_eq!(ctx.mul(x, ctx.add(y, z)), ctx.add(ctx.mul(x, y), ctx.mul(x, z)));
                }
            }
        }
    }
}

/// Uniformity is an isomorphism invariant: two irreducible moduli of the
/// same (p, n) must give identical multisets of max entries over the whole
/// family sweep.
#[test]
fn modulus_independence_of_sweep_spectra() {
    for (family, p, n, m) in [(FamilyId::B1, 2u64, 6u32, 2u32), (FamilyId::T4, 3, 4, 2)] {
        let ctx1 = Arc::new(FieldCtx::with_default_modulus(p, n).unwrap());
        let ctx2 =
            Arc::new(FieldCtx::new(FieldSpec::new(p, n, second_modulus(p, n))).unwrap());
        assert_ne!(ctx1.spec().modulus, ctx2.spec().modulus);
        let sweep = |ctx: &Arc<FieldCtx>| -> Vec<u64> {
            let mut maxima = Vec::new();
            for delta in ctx.elements() {
                let inst = instantiate(family, ctx.clone(), m, delta, true).unwrap();
                let lut = inst.as_lut();
                for c in ctx.elements() {
                    if c == ctx.one() {
                        continue;
                    }
                    maxima.push(c_uniformity(&lut, c).max_entry);
                }
            }
            maxima.sort_unstable();
            maxima
        };
        assert_eq!(sweep(&ctx1), sweep(&ctx2), "family {family:?} over GF({p}^{n})");
    }
}

/// The expanded multinomial forms agree with the closed trinomial form on
/// every point of every supported field up to q = 729.
#[test]
fn expanded_form_matches_direct_up_to_729() {
    let grid = [
        (FamilyId::B1, 2u64, 3u32),
        (FamilyId::T4, 3, 2),
        (FamilyId::P5, 7, 1),
        (FamilyId::P5, 5, 2),
        (FamilyId::P5, 3, 3),
    ];
    for (family, p, m) in grid {
        let n = family.degree_multiplier() * m;
        let ctx = Arc::new(FieldCtx::with_default_modulus(p, n).unwrap());
        assert!(ctx.q() <= 729);
        for delta in ctx.elements() {
            let inst = instantiate(family, ctx.clone(), m, delta, false).unwrap();
            for x in ctx.elements() {
                assert_eq!(
                    inst.evaluate_expanded(x).unwrap(),
                    inst.evaluate(x),
                    "family {family:?} p={p} m={m} delta={delta} x={x}"
                );
            }
        }
    }
}

/// Kernel dimension from the evaluation matrix equals the p-logarithm of
/// the brute-force kernel size, on random linearized polynomials for
/// q up to 256.
#[test]
fn kernel_dimension_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for (p, n) in [(2u64, 8u32), (3, 5), (5, 3)] {
        let ctx = Arc::new(FieldCtx::with_default_modulus(p, n).unwrap());
        let q = ctx.q();
        for _ in 0..1000 {
            let terms: Vec<(u32, cdu::FieldElem)> = (0..n)
                .filter_map(|i| {
                    let c = rng.gen_range(0..q);
                    (c != 0 || rng.gen_bool(0.2)).then(|| (i, ctx.elem(c)))
                })
                .collect();
            let l = LinearizedPoly::new(ctx.clone(), terms);
            let (_, dim) = linearized_kernel(&l);
            let brute = ctx.elements().filter(|&x| l.eval(x) == ctx.zero()).count();
            assert_eq!(p.pow(dim as u32), brute as u64);
        }
    }
}

#[test]
fn parseval_on_random_f_at_q_512() {
    let ctx = Arc::new(FieldCtx::with_default_modulus(2, 9).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let f = PAryFunction::from_fn(ctx.clone(), |_| rng.gen_range(0..2));
    let q = ctx.q();
    let mut total = CycInt::zero(2);
    for v in ctx.elements() {
        total = total.add(&walsh_coefficient(&f, v).norm_squared().unwrap()).unwrap();
    }
    assert_eq!(total, CycInt::integer(2, (q * q) as i128));
}
