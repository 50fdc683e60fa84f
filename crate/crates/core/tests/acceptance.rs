//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use pcmrank_core::random::{random_consistent, random_pcm};
use pcmrank_core::registry::{
    all_counterexamples, KENDALL_6X6, KENDALL_EM, KENDALL_SQUARED_EM, PROP51_IIC_A,
    PROP51_IIC_A_EM, PROP51_IIC_A_PRIME, PROP51_IIC_A_PRIME_EM,
};
use pcmrank_core::{
    aggregate, build_proof_chain, em_weights, equalize_pair, falsify, method_rank, opposite, power,
    replay, rgm_weights, verify_proof_identities, AxiomId, MethodId, PairRelation, Pcm, RankConfig,
    RationalExponent, SearchConfig, DEFAULT_RECIPROCITY_TOL,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;

const PUBLISHED_TOL: f64 = 5e-4;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(elapsed: Duration, limit: Duration) -> Outcome {
    ensure(elapsed < limit, || {
        format!("took {elapsed:?}, limit {limit:?}")
    })
}

fn close_all(got: &[f64], want: &[f64], tol: f64) -> Outcome {
    ensure(got.len() == want.len(), || {
        format!("length {} != {}", got.len(), want.len())
    })?;
    for (i, (g, w)) in got.iter().zip(want).enumerate() {
        ensure((g - w).abs() <= tol, || {
            format!("component {}: {g:.6} vs {w}", i + 1)
        })?;
    }
    Ok(())
}

fn em(a: &Pcm) -> Result<Vec<f64>, String> {
    let cfg = RankConfig::default();
    em_weights(a, &cfg.em)
        .map(|(w, _)| w.into_vec())
        .map_err(|e| e.to_string())
}

fn relation(m: MethodId, a: &Pcm, i: usize, j: usize) -> Result<PairRelation, String> {
    method_rank(m, a, &RankConfig::default())
        .and_then(|r| r.pair_relation(i, j))
        .map_err(|e| e.to_string())
}

fn parse(text: &str) -> Pcm {
    Pcm::parse(text, DEFAULT_RECIPROCITY_TOL).expect("fixture parses")
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let a = parse(KENDALL_6X6);
    let a2 = power(&a, RationalExponent::new(2, 1).unwrap());
    close_all(&em(&a)?, &KENDALL_EM, PUBLISHED_TOL)?;
    close_all(&em(&a2)?, &KENDALL_SQUARED_EM, PUBLISHED_TOL)?;
    let before = relation(MethodId::Em, &a, 1, 3)?;
    let after = relation(MethodId::Em, &a2, 1, 3)?;
    ensure(
        before == PairRelation::StrictlyAbove && after == PairRelation::StrictlyBelow,
        || format!("pair (2,4): {} then {}", before.symbol(), after.symbol()),
    )?;
    within_budget(start.elapsed(), Duration::from_secs(1))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let a = parse(PROP51_IIC_A);
    let a_prime = parse(PROP51_IIC_A_PRIME);
    close_all(&em(&a)?, &PROP51_IIC_A_EM, PUBLISHED_TOL)?;
    close_all(&em(&a_prime)?, &PROP51_IIC_A_PRIME_EM, PUBLISHED_TOL)?;
    let before = relation(MethodId::Em, &a, 0, 1)?;
    let after = relation(MethodId::Em, &a_prime, 0, 1)?;
    ensure(
        before == PairRelation::StrictlyAbove && after == PairRelation::StrictlyBelow,
        || format!("pair (1,2): {} then {}", before.symbol(), after.symbol()),
    )?;
    // The two matrices differ only in a comparison not involving 1 or 2.
    for i in 0..4 {
        for j in 0..4 {
            if i < 2 || j < 2 {
                ensure(a.get(i, j) == a_prime.get(i, j), || {
                    format!("matrices differ at ({}, {})", i + 1, j + 1)
                })?;
            }
        }
    }
    within_budget(start.elapsed(), Duration::from_secs(1))
}

fn criterion_3() -> Outcome {
    let reports = all_counterexamples(&RankConfig::default()).map_err(|e| e.to_string())?;
    ensure(reports.len() == 8, || format!("{} cases", reports.len()))?;
    for r in &reports {
        ensure(r.reproduced, || {
            format!("{}: {}", r.id, r.details.join("; "))
        })?;
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let cfg = SearchConfig {
        seed: 42,
        trials: 10_000,
        n_range: (2, 6),
        ..SearchConfig::default()
    };
    for axiom in AxiomId::ALL {
        let found = falsify(MethodId::Rgm, axiom, &cfg, &RankConfig::default())
            .map_err(|e| e.to_string())?;
        if let Some(w) = found {
            return Err(format!("{axiom}: {}", w.narrative));
        }
    }
    within_budget(start.elapsed(), Duration::from_secs(60))
}

fn criterion_5() -> Outcome {
    let rank = RankConfig::default();
    let cases = [
        (MethodId::RowArithmeticMean, AxiomId::Ai, (2, 6)),
        (MethodId::FavourableProduct, AxiomId::Ai, (2, 6)),
        (MethodId::FirstColumn, AxiomId::Ano, (2, 6)),
        (MethodId::Em, AxiomId::Inv, (2, 6)),
        (MethodId::Em, AxiomId::Iic, (4, 6)),
    ];
    for (m, axiom, n_range) in cases {
        let cfg = SearchConfig {
            n_range,
            ..SearchConfig::default()
        };
        let run = || falsify(m, axiom, &cfg, &rank).map_err(|e| e.to_string());
        let w = run()?.ok_or_else(|| format!("no witness for ({m}, {axiom})"))?;
        ensure(run()?.as_ref() == Some(&w), || {
            format!("({m}, {axiom}) search not deterministic")
        })?;
        for _ in 0..2 {
            let v = replay(&w, &rank).map_err(|e| e.to_string())?;
            ensure(!v.holds, || {
                format!("({m}, {axiom}) witness does not replay")
            })?;
        }
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let cfg = RankConfig::default();
    for t in 0..1000 {
        let a = random_pcm(&mut rng, 3, 9f64.ln());
        let em = method_rank(MethodId::Em, &a, &cfg).map_err(|e| e.to_string())?;
        let rgm = method_rank(MethodId::Rgm, &a, &cfg).map_err(|e| e.to_string())?;
        ensure(em == rgm, || format!("instance {t}: {a}"))?;
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cfg = RankConfig::default();
    for t in 0..200 {
        let n = rng.random_range(2..=8);
        let (a, w) = random_consistent(&mut rng, n, 9f64.ln());
        close_all(rgm_weights(&a).as_slice(), w.as_slice(), 1e-9)
            .map_err(|e| format!("instance {t} rgm: {e}"))?;
        let (ew, lambda) = em_weights(&a, &cfg.em).map_err(|e| e.to_string())?;
        close_all(ew.as_slice(), w.as_slice(), 1e-9)
            .map_err(|e| format!("instance {t} em: {e}"))?;
        ensure((lambda - n as f64).abs() <= 1e-9, || {
            format!("instance {t}: lambda_max {lambda} for n = {n}")
        })?;
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for n in 3..=6 {
        for t in 0..100 {
            let a = random_pcm(&mut rng, n, 9f64.ln());
            let eq = equalize_pair(&a, 0, 1).map_err(|e| e.to_string())?;
            let chain = build_proof_chain(&eq).map_err(|e| format!("n = {n}, #{t}: {e}"))?;
            let rep = verify_proof_identities(&chain, 1e-12).map_err(|e| e.to_string())?;
            ensure(rep.all_hold(), || format!("n = {n}, #{t}: {rep:?}"))?;
            ensure(rep.swap_aggregation.is_some() == (n >= 4), || {
                format!("n = {n}: aggregation identity applicability")
            })?;
        }
    }
    within_budget(start.elapsed(), Duration::from_secs(10))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for t in 0..1000 {
        let n = rng.random_range(2..=6);
        let a = random_pcm(&mut rng, n, 9f64.ln());
        let ones = Pcm::ones(n);

        let cancel = aggregate(&[a.clone(), opposite(&a)]).map_err(|e| e.to_string())?;
        let dev = cancel.max_abs_diff(&ones);
        ensure(dev <= 1e-12, || {
            format!("instance {t}: A ⊕ A⁻ off by {dev:e}")
        })?;

        // p/q with p <= q: p copies of A and q - p copies of 𝟏.
        let q = rng.random_range(1..=5u64);
        let p = rng.random_range(1..=q);
        let kappa = RationalExponent::new(p, q).map_err(|e| e.to_string())?;
        let mut parts = vec![a.clone(); p as usize];
        parts.extend(std::iter::repeat_n(ones.clone(), (q - p) as usize));
        let built = aggregate(&parts).map_err(|e| e.to_string())?;
        let dev = power(&a, kappa).max_abs_diff(&built);
        ensure(dev <= 1e-12, || {
            format!("instance {t}: A^({kappa}) off by {dev:e}")
        })?;

        // p > q: the integer power A^(p) with q - 1 copies of 𝟏.
        let p = rng.random_range(q + 1..=q + 5);
        let kappa = RationalExponent::new(p, q).map_err(|e| e.to_string())?;
        let mut parts = vec![power(&a, RationalExponent::new(p, 1).unwrap())];
        parts.extend(std::iter::repeat_n(ones.clone(), (q - 1) as usize));
        let built = aggregate(&parts).map_err(|e| e.to_string())?;
        let scale = power(&a, kappa)
            .as_slice()
            .iter()
            .fold(1.0f64, |m, v| m.max(*v));
        let dev = power(&a, kappa).max_abs_diff(&built);
        ensure(dev <= 1e-12 * scale, || {
            format!("instance {t}: A^({kappa}) off by {dev:e}")
        })?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        (
            "EM weights of the 6x6 matrix and its square; pair (2,4) flips",
            criterion_1,
        ),
        (
            "EM weights of the two 4x4 matrices; pair (1,2) flips",
            criterion_2,
        ),
        (
            "published counterexample registry reproduces 8/8",
            criterion_3,
        ),
        ("RGM survives all six axiom searches", criterion_4),
        ("known violations are found and replay", criterion_5),
        ("EM and RGM rank 3x3 matrices identically", criterion_6),
        ("consistent matrices recover their weights", criterion_7),
        ("proof-chain identities hold", criterion_8),
        ("transform algebra identities hold", criterion_9),
    ];
    let mut failed = 0;
    for (k, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match run() {
            Ok(()) => println!("PASS {} {title} ({:.2?})", k + 1, start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {title}: {why}", k + 1);
            }
        }
    }
    println!(
        "{}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
