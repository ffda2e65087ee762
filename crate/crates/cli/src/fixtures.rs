//! Bundled fixtures with frozen expected outputs, plus a seeded random
//! law suite. `eqzeta fixtures run` executes everything here and fails
//! on any mismatch.

use anyhow::{anyhow, Result};

use eqzeta_core::burnside::{EqClassId, EqRing};
use eqzeta_core::group::{FiniteGroup, GroupContext};
use eqzeta_core::invariants::{
    poincare_series, recover_zeta, rhohat_check, zeta_functions, RecoverMode,
};
use eqzeta_core::render;
use eqzeta_core::resolution::{multiplicity_matrix, validate};
use eqzeta_core::series::{expand_eq_binomial, factorize, BinomialFactor, FactoredSeries, MultiSeries};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::io;

pub const DEFAULT_SEED: u64 = 7_402_913;

#[derive(Clone, Copy)]
pub enum GeneralBehavior {
    /// General mode matches the resolution output with no warnings.
    Matches,
    /// Scalar fallback fires (one warning) and still matches.
    ScalarFallbackMatches,
    /// Scalar fallback fires and the output legitimately differs from
    /// the resolution output; the recovered texts are pinned.
    ScalarFallbackDiffers { zeta: &'static str, tilde: &'static str },
}

pub struct ResolutionFixture {
    pub name: &'static str,
    pub resolution_json: &'static str,
    pub nonequiv_json: &'static str,
    pub bound: &'static [u32],
    pub expect_poincare: &'static str,
    pub expect_zeta: &'static str,
    pub expect_tilde: &'static str,
    /// Whether free-mode recovery must match the resolution output.
    pub free_matches: bool,
    pub general: GeneralBehavior,
}

pub const FIXTURES: &[ResolutionFixture] = &[
    ResolutionFixture {
        name: "trivial_chain",
        resolution_json: include_str!("../fixtures/resolutions/trivial_chain.json"),
        nonequiv_json: include_str!("../fixtures/nonequiv/trivial_chain.json"),
        bound: &[8],
        expect_poincare: "(1 - t1)^{-[G/e]} * (1 - t1^2)^{-[G/e]}",
        expect_zeta: "(1 - t)^{-[G/e]} * (1 - t^2)^{-[G/e]}",
        expect_tilde: "(1 - t)^{-[G/e]} * (1 - t^2)^{-[G/e]}",
        free_matches: true,
        general: GeneralBehavior::Matches,
    },
    ResolutionFixture {
        name: "cusp",
        resolution_json: include_str!("../fixtures/resolutions/cusp.json"),
        nonequiv_json: include_str!("../fixtures/nonequiv/cusp.json"),
        bound: &[12],
        expect_poincare: "(1 - t1^2)^{-[G/e]} * (1 - t1^3)^{-[G/e]} * (1 - t1^6)^{[G/e]}",
        expect_zeta: "(1 - t^2)^{-[G/e]} * (1 - t^3)^{-[G/e]} * (1 - t^6)^{[G/e]}",
        expect_tilde: "(1 - t^2)^{-[G/e]} * (1 - t^3)^{-[G/e]} * (1 - t^6)^{[G/e]}",
        free_matches: true,
        general: GeneralBehavior::Matches,
    },
    ResolutionFixture {
        name: "z2_scalar",
        resolution_json: include_str!("../fixtures/resolutions/z2_scalar.json"),
        nonequiv_json: include_str!("../fixtures/nonequiv/z2_scalar.json"),
        bound: &[8, 8],
        expect_poincare: "(1 - t1^2*t2^2)^{-[G/G]_{a1}}",
        expect_zeta: "(1 - t^2)^{-1/2[G/e]}",
        expect_tilde: "(1 - t)^{-[G/e]}",
        free_matches: true,
        general: GeneralBehavior::ScalarFallbackMatches,
    },
    ResolutionFixture {
        name: "z2_swap",
        resolution_json: include_str!("../fixtures/resolutions/z2_swap.json"),
        nonequiv_json: include_str!("../fixtures/nonequiv/z2_swap.json"),
        bound: &[8, 8],
        expect_poincare: "(1 - t1^2*t2^2)^{[G/e]} * (1 - t1^2*t2^2)^{-[G/G]} * (1 - t1^2*t2^2)^{-[G/G]_{a1}}",
        expect_zeta: "(1 - t^2)^{1/2[G/e]} * (1 - t^2)^{-[G/G]}",
        expect_tilde: "(1 - t)^{-[G/e]} * (1 - t^2)^{[G/e]} * (1 - t^2)^{-[G/G]}",
        free_matches: false,
        general: GeneralBehavior::Matches,
    },
    ResolutionFixture {
        name: "z2_cusp_pair",
        resolution_json: include_str!("../fixtures/resolutions/z2_cusp_pair.json"),
        nonequiv_json: include_str!("../fixtures/nonequiv/z2_cusp_pair.json"),
        bound: &[10, 10],
        expect_poincare: "(1 - t1^4*t2^4)^{[G/e]} * (1 - t1^4*t2^4)^{-[G/G]} * (1 - t1^4*t2^4)^{-[G/G]_{a1}} * (1 - t1^5*t2^5)^{-[G/e]} * (1 - t1^10*t2^10)^{[G/e]}",
        expect_zeta: "(1 - t^4)^{1/2[G/e]} * (1 - t^4)^{-[G/G]} * (1 - t^5)^{-[G/e]} * (1 - t^10)^{[G/e]}",
        expect_tilde: "(1 - t^2)^{-[G/e]} * (1 - t^4)^{[G/e]} * (1 - t^4)^{-[G/G]} * (1 - t^5)^{-[G/e]} * (1 - t^10)^{[G/e]}",
        free_matches: false,
        general: GeneralBehavior::Matches,
    },
    ResolutionFixture {
        name: "z3_scalar",
        resolution_json: include_str!("../fixtures/resolutions/z3_scalar.json"),
        nonequiv_json: include_str!("../fixtures/nonequiv/z3_scalar.json"),
        bound: &[6, 6, 6],
        expect_poincare: "(1 - t1^3*t2^3*t3^3)^{-[G/G]_{a1}}",
        expect_zeta: "(1 - t^3)^{-1/3[G/e]}",
        expect_tilde: "(1 - t)^{-[G/e]}",
        free_matches: true,
        general: GeneralBehavior::ScalarFallbackMatches,
    },
    ResolutionFixture {
        name: "z6_action1",
        resolution_json: include_str!("../fixtures/resolutions/z6_action1.json"),
        nonequiv_json: include_str!("../fixtures/nonequiv/z6.json"),
        bound: &[6, 6, 6, 6, 6, 6],
        expect_poincare: "(1 - t1^6*t2^6*t3^6*t4^6*t5^6*t6^6)^{-[G/G]_{a1}}",
        expect_zeta: "(1 - t^6)^{-1/3[G/H1]}",
        expect_tilde: "(1 - t^2)^{-[G/H1]}",
        free_matches: false,
        general: GeneralBehavior::ScalarFallbackDiffers {
            zeta: "(1 - t^6)^{-1/6[G/e]}",
            tilde: "(1 - t)^{-[G/e]}",
        },
    },
    ResolutionFixture {
        name: "z6_action2",
        resolution_json: include_str!("../fixtures/resolutions/z6_action2.json"),
        nonequiv_json: include_str!("../fixtures/nonequiv/z6.json"),
        bound: &[6, 6, 6, 6, 6, 6],
        expect_poincare: "(1 - t1^6*t2^6*t3^6*t4^6*t5^6*t6^6)^{-[G/G]_{a1}}",
        expect_zeta: "(1 - t^6)^{-1/2[G/H2]}",
        expect_tilde: "(1 - t^3)^{-[G/H2]}",
        free_matches: false,
        general: GeneralBehavior::ScalarFallbackDiffers {
            zeta: "(1 - t^6)^{-1/6[G/e]}",
            tilde: "(1 - t)^{-[G/e]}",
        },
    },
];

pub fn load_fixture(f: &ResolutionFixture) -> Result<(GroupContext, eqzeta_core::resolution::Resolution)> {
    let file: io::ResolutionFile = serde_json::from_str(f.resolution_json)?;
    let group = match &file.group {
        io::GroupRef::Inline(g) => io::group_from_file(g)?,
        io::GroupRef::Path(p) => return Err(anyhow!("fixture {} uses a path group reference ({})", f.name, p)),
    };
    let ctx = GroupContext::new(group);
    let res = io::resolution_from_file(&ctx, &file)?;
    Ok((ctx, res))
}

pub fn load_nonequiv(f: &ResolutionFixture) -> Result<eqzeta_core::series::NonEquivFactored> {
    let file: io::NonEquivFile = serde_json::from_str(f.nonequiv_json)?;
    Ok(io::nonequiv_from_file(&file))
}

struct Outcome {
    lines: Vec<String>,
    failures: usize,
}

impl Outcome {
    fn check(&mut self, name: &str, ok: bool, detail: String) {
        if ok {
            self.lines.push(format!("PASS {}", name));
        } else {
            self.failures += 1;
            self.lines.push(format!("FAIL {}: {}", name, detail));
        }
    }
}

fn run_resolution_fixture(out: &mut Outcome, f: &ResolutionFixture) -> Result<()> {
    let (ctx, res) = load_fixture(f)?;
    let report = validate(&ctx, &res);
    out.check(
        &format!("{}/validate", f.name),
        report.is_ok(),
        report.failures.join("; "),
    );
    let m = multiplicity_matrix(&res.graph)?;
    // the exactness of -(intersection) * m = id is verified inside the
    // constructor; spot-check symmetry here for the report
    let n = m.size();
    let symmetric = (0..n as u32).all(|i| (0..n as u32).all(|j| m.get(i, j) == m.get(j, i)));
    out.check(&format!("{}/mmatrix", f.name), symmetric, "not symmetric".into());

    let mut ring = EqRing::new(&ctx);
    let (factored, expansion) = poincare_series(&ctx, &mut ring, &res, f.bound)?;
    let ptext = render::factored_series(&ctx, &factored);
    out.check(
        &format!("{}/poincare", f.name),
        ptext == f.expect_poincare,
        format!("got {}", ptext),
    );
    let refactored = factorize(&mut ring, &expansion)?;
    out.check(
        &format!("{}/factor-roundtrip", f.name),
        refactored == factored,
        format!("got {}", render::factored_series(&ctx, &refactored)),
    );

    let (zeta, tilde) = zeta_functions(&ctx, &res)?;
    let ztext = render::factored_zeta(&ctx, &zeta);
    let ttext = render::factored_zeta(&ctx, &tilde);
    out.check(&format!("{}/zeta", f.name), ztext == f.expect_zeta, format!("got {}", ztext));
    out.check(&format!("{}/zeta-tilde", f.name), ttext == f.expect_tilde, format!("got {}", ttext));

    if f.free_matches {
        let rec = recover_zeta(&ctx, &factored, RecoverMode::Free)?;
        out.check(
            &format!("{}/recover-free", f.name),
            rec.zeta == zeta && rec.zeta_tilde == tilde && rec.warnings.is_empty(),
            format!(
                "zeta {} tilde {} warnings {:?}",
                render::factored_zeta(&ctx, &rec.zeta),
                render::factored_zeta(&ctx, &rec.zeta_tilde),
                rec.warnings
            ),
        );
    }
    let rec = recover_zeta(&ctx, &factored, RecoverMode::General)?;
    match f.general {
        GeneralBehavior::Matches => {
            out.check(
                &format!("{}/recover-general", f.name),
                rec.zeta == zeta && rec.zeta_tilde == tilde && rec.warnings.is_empty(),
                format!(
                    "zeta {} tilde {} warnings {:?}",
                    render::factored_zeta(&ctx, &rec.zeta),
                    render::factored_zeta(&ctx, &rec.zeta_tilde),
                    rec.warnings
                ),
            );
        }
        GeneralBehavior::ScalarFallbackMatches => {
            out.check(
                &format!("{}/recover-general", f.name),
                rec.zeta == zeta && rec.zeta_tilde == tilde && rec.warnings.len() == 1,
                format!("warnings {:?}", rec.warnings),
            );
        }
        GeneralBehavior::ScalarFallbackDiffers { zeta: zexp, tilde: texp } => {
            let got_z = render::factored_zeta(&ctx, &rec.zeta);
            let got_t = render::factored_zeta(&ctx, &rec.zeta_tilde);
            out.check(
                &format!("{}/recover-general", f.name),
                got_z == zexp && got_t == texp && rec.warnings.len() == 1,
                format!("zeta {} tilde {} warnings {:?}", got_z, got_t, rec.warnings),
            );
            out.check(
                &format!("{}/recover-differs-from-truth", f.name),
                rec.zeta != zeta && rec.zeta_tilde != tilde,
                "recovered output unexpectedly equals the resolution output".into(),
            );
        }
    }

    let plain = load_nonequiv(f)?;
    let check = rhohat_check(&ctx, &mut ring, &factored, &plain, f.bound)?;
    out.check(
        &format!("{}/reduction-consistency", f.name),
        check.equal,
        format!(
            "reduced {} vs substituted {}",
            render::int_series(&check.reduced),
            render::int_series(&check.substituted)
        ),
    );
    Ok(())
}

fn random_law_suite(out: &mut Outcome, seed: u64) {
    let contexts = [
        GroupContext::new(FiniteGroup::cyclic(2)),
        GroupContext::new(FiniteGroup::cyclic(4)),
        GroupContext::new(
            FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]], 3, 64).unwrap(),
        ),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factor_ok = 0usize;
    let mut lambda_ok = 0usize;
    const ROUNDS: usize = 20;
    for round in 0..ROUNDS {
        let ctx = &contexts[round % contexts.len()];
        let mut ring = EqRing::new(ctx);
        // factorization round trip
        let nfactors = rng.gen_range(1..=4);
        let mut factors = Vec::new();
        for _ in 0..nfactors {
            let w = loop {
                let w = vec![rng.gen_range(0..=2u32), rng.gen_range(0..=2u32)];
                if w.iter().any(|&x| x > 0) {
                    break w;
                }
            };
            let s = loop {
                let s = rng.gen_range(-2i64..=2);
                if s != 0 {
                    break s;
                }
            };
            let cls = EqClassId(rng.gen_range(0..ctx.eq_class_count() as u32));
            factors.push(BinomialFactor { w, s, cls });
        }
        let f = FactoredSeries::new(2, factors).expect("nonzero degrees");
        let bound = [5u32, 5];
        let expanded = f.expand(&mut ring, &bound).expect("expansion");
        if factorize(&mut ring, &expanded).ok().as_ref() == Some(&f) {
            factor_ok += 1;
        }
        // binomial additivity
        let cls = EqClassId(rng.gen_range(0..ctx.eq_class_count() as u32));
        let s1 = rng.gen_range(-2i64..=2);
        let s2 = rng.gen_range(-2i64..=2);
        let lhs = expand_eq_binomial(&mut ring, &[1], s1 + s2, cls, &[6]).unwrap();
        let a = expand_eq_binomial(&mut ring, &[1], s1, cls, &[6]).unwrap();
        let b = expand_eq_binomial(&mut ring, &[1], s2, cls, &[6]).unwrap();
        let rhs = MultiSeries::mul(&mut ring, &a, &b).unwrap();
        if lhs == rhs {
            lambda_ok += 1;
        }
    }
    out.check(
        &format!("random/factorization-roundtrip (seed {})", seed),
        factor_ok == ROUNDS,
        format!("{}/{} passed", factor_ok, ROUNDS),
    );
    out.check(
        &format!("random/binomial-additivity (seed {})", seed),
        lambda_ok == ROUNDS,
        format!("{}/{} passed", lambda_ok, ROUNDS),
    );
}

/// Run the whole bundled suite; returns the report lines and whether
/// everything passed.
pub fn run_all(seed: u64) -> (Vec<String>, bool) {
    let mut out = Outcome { lines: Vec::new(), failures: 0 };
    for f in FIXTURES {
        if let Err(e) = run_resolution_fixture(&mut out, f) {
            out.failures += 1;
            out.lines.push(format!("FAIL {}: {}", f.name, e));
        }
    }
    random_law_suite(&mut out, seed);
    let ok = out.failures == 0;
    out.lines.push(if ok {
        "all fixtures passed".to_string()
    } else {
        format!("{} failure(s)", out.failures)
    });
    (out.lines, ok)
}
