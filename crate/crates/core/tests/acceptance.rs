//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::collections::BTreeSet;
use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nonplanarity_core::exactlinalg::{ratio, Rat};
use nonplanarity_core::exponents::{
    baker_experiment, default_q_min, estimate_omega, estimate_omega_x, RealMatrix,
};
use nonplanarity_core::groebner::{buchberger, normal_form, radical_member, TermOrder};
use nonplanarity_core::paths::{path_sum_entry, verify_lemma_with, DEFAULT_LEMMA_BUDGET};
use nonplanarity_core::plucker::{enumerate_minors, MinorIndex};
use nonplanarity_core::polyring::{parse_poly, Monomial, Poly, VarId};
use nonplanarity_core::strongcheck::{check_strong, check_strong_detailed, StrongConfig};
use nonplanarity_core::weakcheck::{
    check_weak_complex, rotation_example, verify_complex_witness, Parameterization, WeakStatus,
};
use nonplanarity_core::words::{veronese_system, WordSystem};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of minors of an `m × w` matrix, counted directly.
fn minors_oracle(m: u64, w: u64) -> u64 {
    (1..=m.min(w)).map(|k| binom(m, k) * binom(w, k)).sum()
}

fn sys(m: usize, r: usize, words: &[&[u32]]) -> WordSystem {
    WordSystem::from_letters(m, r, words).unwrap()
}

fn power_words(n: usize) -> Vec<Vec<u32>> {
    (1..=n).map(|k| vec![1; k]).collect()
}

fn criterion_1() -> Outcome {
    let mut notes = Vec::new();
    for (m, n) in [(1, 2), (1, 3), (2, 2), (2, 3), (3, 2)] {
        let words = power_words(n);
        let refs: Vec<&[u32]> = words.iter().map(|w| w.as_slice()).collect();
        let t = Instant::now();
        let v = check_strong(&sys(m, 1, &refs)).map_err(|e| e.to_string())?;
        let secs = t.elapsed().as_secs_f64();
        let c = minors_oracle(m as u64, (m * n) as u64) as usize;
        ensure(v.is_strongly_nonplanar && v.rank == c && v.c == c, || {
            format!("(m,n)=({m},{n}): rank {} c {} oracle {c}", v.rank, v.c)
        })?;
        ensure(secs < 300.0, || format!("(m,n)=({m},{n}) took {secs:.1}s"))?;
        notes.push(format!("({m},{n}) c={c}"));
    }
    Ok(notes.join(", "))
}

fn criterion_2() -> Outcome {
    let ws = veronese_system(2, 2, 2).map_err(|e| e.to_string())?;
    ensure(ws.n() == 5, || format!("{} words", ws.n()))?;
    let t = Instant::now();
    let v = check_strong(&ws).map_err(|e| e.to_string())?;
    let c = minors_oracle(2, 10) as usize;
    ensure(c == 65 && v.c == c && v.rank == c, || {
        format!("rank {} c {}", v.rank, v.c)
    })?;
    Ok(format!(
        "rank = c = 65 in {:.1}s",
        t.elapsed().as_secs_f64()
    ))
}

fn criterion_3() -> Outcome {
    let ws = sys(2, 2, &[&[1, 2], &[2, 1]]);
    let (v, plucker) =
        check_strong_detailed(&ws, &StrongConfig::default()).map_err(|e| e.to_string())?;
    ensure(!v.is_strongly_nonplanar, || {
        "verdict is strongly nonplanar".into()
    })?;
    let w = v.witness.as_ref().ok_or("no witness")?;
    ensure(plucker.pair(w).is_zero(), || {
        "witness does not annihilate the Plücker vector".into()
    })?;
    let d1 = MinorIndex::new(vec![1, 2], vec![1, 2]).unwrap();
    let d2 = MinorIndex::new(vec![1, 2], vec![3, 4]).unwrap();
    let (a, b) = (
        &w[plucker.position(&d1).unwrap()],
        &w[plucker.position(&d2).unwrap()],
    );
    ensure(!a.is_zero() && a == &-b.clone(), || {
        format!("block coefficients {a}, {b}")
    })?;
    Ok(format!(
        "rank {} < c {}, witness {}·(1,−1) on the block determinants",
        v.rank, v.c, a
    ))
}

fn all_words(r: u32, max_len: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for q in 1..=r {
                let mut v = w.clone();
                v.push(q);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn abelian_distinct(words: &[Vec<u32>], r: u32) -> bool {
    let vecs: BTreeSet<Vec<usize>> = words
        .iter()
        .map(|w| {
            (1..=r)
                .map(|q| w.iter().filter(|&&x| x == q).count())
                .collect()
        })
        .collect();
    vecs.len() == words.len()
}

fn criterion_4() -> Outcome {
    let mut total = 0;
    let mut positive = 0;
    for r in 1..=2u32 {
        let words = all_words(r, 3);
        for n in 1..=3 {
            let mut idx = vec![0usize; n];
            loop {
                let chosen: Vec<Vec<u32>> = idx.iter().map(|&k| words[k].clone()).collect();
                let refs: Vec<&[u32]> = chosen.iter().map(|w| w.as_slice()).collect();
                let v = check_strong(&sys(2, r as usize, &refs)).map_err(|e| e.to_string())?;
                let expect = abelian_distinct(&chosen, r);
                ensure(v.is_strongly_nonplanar == expect, || {
                    format!("disagreement on {chosen:?}")
                })?;
                total += 1;
                positive += usize::from(expect);
                let mut k = n;
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < words.len() {
                        break;
                    }
                    idx[k] = 0;
                    if k == 0 {
                        k = usize::MAX;
                        break;
                    }
                }
                if k == usize::MAX {
                    break;
                }
            }
        }
    }
    Ok(format!(
        "{total} systems agree ({positive} strongly nonplanar)"
    ))
}

fn criterion_5() -> Outcome {
    let mut entries = 0;
    for m in 1..=3 {
        for r in 1..=2u32 {
            for w in all_words(r, 4) {
                let ws = sys(m, r as usize, &[w.as_slice()]);
                let gens = ws.generic_generators().map_err(|e| e.to_string())?;
                let prod = ws.word(1).evaluate(&gens).map_err(|e| e.to_string())?;
                for i in 1..=m {
                    for t in 1..=m {
                        let s = path_sum_entry(&ws, i, t, 1).map_err(|e| e.to_string())?;
                        ensure(&s == prod.get(i - 1, t - 1), || {
                            format!("m={m} word {w:?} entry ({i},{t})")
                        })?;
                        entries += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{entries} entries equal"))
}

fn criterion_6() -> Outcome {
    let mut count = 0;
    let mut collections = 0;
    let cases = [
        (sys(2, 1, &[&[1], &[1, 1]]), usize::MAX),
        (veronese_system(2, 2, 2).unwrap(), 2),
    ];
    for (ws, max_size) in &cases {
        let minors: Vec<MinorIndex> = enumerate_minors(ws.m(), ws.width())
            .into_iter()
            .filter(|d| d.size() <= *max_size)
            .collect();
        for d in &minors {
            let c =
                verify_lemma_with(ws, d, DEFAULT_LEMMA_BUDGET).map_err(|e| format!("{d}: {e}"))?;
            ensure(c.holds, || {
                format!("{ws}: {d} fails against {:?}", c.counterexample)
            })?;
            collections += c.collections;
        }
        count += minors.len();
    }
    ensure(count == 14 + 65, || format!("{count} minors"))?;
    Ok(format!(
        "{count} minors hold, {collections} complete collections examined"
    ))
}

fn criterion_7() -> Outcome {
    let one = |s: &str| {
        let p = parse_poly(s).unwrap();
        Parameterization::new(
            1,
            nonplanarity_core::polyring::PolyMatrix::from_rows(vec![vec![p]]).unwrap(),
        )
        .unwrap()
    };
    let v = check_weak_complex(&one("x1")).map_err(|e| e.to_string())?;
    ensure(v.status == WeakStatus::WeaklyNonplanarComplex, || {
        "f(x)=x".into()
    })?;
    let v = check_weak_complex(&one("0")).map_err(|e| e.to_string())?;
    ensure(v.status == WeakStatus::ComplexSolutionExists, || {
        "f=0".into()
    })?;
    let (f, a, b) = rotation_example();
    let v = check_weak_complex(&f).map_err(|e| e.to_string())?;
    ensure(v.status == WeakStatus::ComplexSolutionExists, || {
        "rotation verdict".into()
    })?;
    ensure(
        verify_complex_witness(&f, &a, &b).map_err(|e| e.to_string())?,
        || "rotation witness".into(),
    )?;
    Ok(format!(
        "rotation manifold: {} free, witness pair verified",
        v.free_variable.map(|x| x.to_string()).unwrap_or_default()
    ))
}

fn criterion_8() -> Outcome {
    let p = |s: &str| parse_poly(s).unwrap();
    let x = |k| VarId::param(k);
    let lex = TermOrder::lex(vec![x(1), x(2)]);
    let check = |gens: &[Poly], order: &TermOrder, expect: &[Poly]| -> Result<(), String> {
        let gb = buchberger(gens, order).map_err(|e| e.to_string())?;
        ensure(gb.generators() == expect, || format!("basis {:?}", gb))
    };
    check(&[p("x1^2 - 1")], &TermOrder::grevlex(), &[p("x1^2 - 1")])?;
    check(
        &[p("x1 - x2"), p("x2 - 1")],
        &lex,
        &[p("x1 - 1"), p("x2 - 1")],
    )?;
    check(
        &[p("x1*x2 - 1"), p("x2^2 - 1")],
        &lex,
        &[p("x1 - x2"), p("x2^2 - 1")],
    )?;
    let rm = |gens: &[Poly]| radical_member(&x(1), gens).map_err(|e| e.to_string());
    ensure(rm(&[p("x1^2")])?, || "x ∈ √⟨x²⟩".into())?;
    ensure(!rm(&[p("x2")])?, || "x ∉ √⟨y⟩".into())?;
    ensure(rm(&[p("x1*x2"), p("x1 - x2")])?, || "x ∈ √⟨xy, x−y⟩".into())?;

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let random_poly = |rng: &mut ChaCha8Rng| {
        let mut f = Poly::zero();
        for _ in 0..rng.random_range(1..=4) {
            let m = Monomial::from_powers(
                (1..=3)
                    .map(|k| (x(k), rng.random_range(0..=2u32)))
                    .filter(|(_, e)| *e > 0),
            );
            f.add_term(m, Rat::from_integer(rng.random_range(-4i64..=4).into()));
        }
        f
    };
    for _ in 0..100 {
        let gens: Vec<Poly> = (0..rng.random_range(1..=3))
            .map(|_| random_poly(&mut rng))
            .collect();
        let f = random_poly(&mut rng);
        let gb = buchberger(&gens, &TermOrder::grevlex()).map_err(|e| e.to_string())?;
        let r = normal_form(&f, &gb);
        ensure(normal_form(&r, &gb) == r, || {
            format!("nf not idempotent for {f}")
        })?;
    }
    Ok("3 bases, 3 radical tests, 100 idempotent normal forms".into())
}

/// Best ratio over continued-fraction convergents `p_k/q_k` of the number
/// with partial quotients `a0; a, a, …` whose denominators lie in `[lo, hi]`.
fn convergent_oracle(x: f64, a0: i64, a: i64, lo: i64, hi: i64) -> f64 {
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0i64, a0, 1i64);
    let mut best = f64::NEG_INFINITY;
    while q1 <= hi {
        if q1 >= lo {
            let r = (q1 as f64 * x - p1 as f64).abs();
            best = best.max(-r.ln() / (q1 as f64).ln());
        }
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    best
}

fn criterion_9() -> Outcome {
    let half = RealMatrix::from_rationals(1, 1, vec![ratio(1, 2)]).map_err(|e| e.to_string())?;
    ensure(
        estimate_omega(&half, 10)
            .map_err(|e| e.to_string())?
            .infinite,
        || "1/2 not infinite".into(),
    )?;

    let q = 1000;
    let lo = default_q_min(q) as i64;
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let root2 = 2f64.sqrt();
    let mut notes = Vec::new();
    for (name, x, a0, a, band) in [
        ("phi", phi, 1, 1, (0.9, 1.25)),
        ("sqrt2", root2, 1, 2, (0.9, 1.3)),
    ] {
        let oracle = convergent_oracle(x, a0, a, lo, q as i64);
        let e = estimate_omega(&RealMatrix::new(1, 1, vec![x]).unwrap(), q)
            .map_err(|e| e.to_string())?;
        let inside = |v: f64| (band.0..=band.1).contains(&v);
        ensure(
            inside(oracle) && inside(e.value) && e.value >= oracle - 1e-12,
            || format!("{name}: estimate {} oracle {oracle}", e.value),
        )?;
        notes.push(format!("{name} {:.4} (oracle {oracle:.4})", e.value));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut checked = 0;
    for _ in 0..100 {
        let (m, n) = (rng.random_range(1..=2usize), rng.random_range(1..=2usize));
        let a = RealMatrix::new(m, n, (0..m * n).map(|_| rng.random::<f64>()).collect()).unwrap();
        for bound in [50, 500] {
            let w = estimate_omega(&a, bound).map_err(|e| e.to_string())?;
            let wx = estimate_omega_x(&a, bound).map_err(|e| e.to_string())?;
            if !w.infinite && !wx.infinite {
                ensure(wx.value >= m as f64 / n as f64 * w.value - 1e-12, || {
                    format!("{m}x{n} Q={bound}: ω_× {} < (m/n)·ω {}", wx.value, w.value)
                })?;
                checked += 1;
            }
        }
    }
    notes.push(format!("multiplicative bound on {checked} runs"));
    Ok(notes.join(", "))
}

fn criterion_10() -> Outcome {
    let t = Instant::now();
    let a = baker_experiment(1, 2, 2000, 20, 2024).map_err(|e| e.to_string())?;
    let b = baker_experiment(1, 2, 2000, 20, 2024).map_err(|e| e.to_string())?;
    ensure(a == b, || "rerun differs".into())?;
    let median = a.median.ok_or("no finite estimate")?;
    ensure((0.8..=1.5).contains(&median), || format!("median {median}"))?;
    Ok(format!(
        "median {median:.4}, max {:.4}, {} infinite, {:.1}s for two runs",
        a.max.unwrap_or(f64::NAN),
        a.infinite_count,
        t.elapsed().as_secs_f64()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("strong nonplanarity of X ⊕ ⋯ ⊕ Xⁿ, rank = c", criterion_1),
        ("two-generator Veronese system, c = 65", criterion_2),
        ("commutator pair is degenerate with witness", criterion_3),
        (
            "verdict equals distinct abelianisations, full sweep",
            criterion_4,
        ),
        ("path sums equal word products", criterion_5),
        ("ordering lemma by exhaustive search", criterion_6),
        ("weak nonplanarity over ℂ", criterion_7),
        ("Gröbner bases and radical membership", criterion_8),
        ("irrationality exponent estimates", criterion_9),
        ("multiplicative exponent experiment", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!(
                "criterion {:>2}: PASS  {name} [{detail}] ({secs:.1}s)",
                k + 1
            ),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name} [{why}] ({secs:.1}s)", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
