//! End-to-end acceptance checks, one line per criterion.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use oarray::bounds::{abar, binomial, feasible_quadruples, floor_bound, refined_bound};
use oarray::cyclic::develop;
use oarray::deletion::delete_columns;
use oarray::designs::{parse_oa, to_internal};
use oarray::enumerate::{self, visit_parts, visit_tuples, Enumeration, PartitionSpec};
use oarray::hadamard_bibd::{
    bibd_to_oa, derived_then_complement, hadamard, hadamard_to_symmetric_bibd,
};
use oarray::verifier::verify_strength2;
use oarray::{Rational, StartingRowSet, StreamingVerifier, INFINITY};

use common::*;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget: Duration) -> Result<Duration, String> {
    let elapsed = start.elapsed();
    ensure(elapsed < budget, || {
        format!("took {elapsed:?}, budget {budget:?}")
    })?;
    Ok(elapsed)
}

fn small_oa_reproduction() -> Check {
    let start = Instant::now();
    let a = develop(&modular_5_2().set).map_err(|e| e.to_string())?;
    let expected = parse_oa(SMALL_OA).unwrap();
    ensure(a.sorted_rows() == expected.sorted_rows(), || {
        "row multiset differs".into()
    })?;
    let r = verify_strength2(&a);
    ensure(r.is_oa && r.lambda == 3 && r.m_observed == 2, || {
        r.to_string()
    })?;
    let c = r.classification;
    ensure(c.optimal && c.basic && c.m_optimal, || r.to_string())?;
    let t = within(start, Duration::from_secs(1))?;
    Ok(format!("12 rows, {r} ({t:?})"))
}

fn starting_row_corpus() -> Check {
    let start = Instant::now();
    let mut entries = binary_examples();
    entries.push(modular_7_3());
    entries.push(modular_9_4());
    let mut failed = Vec::new();
    let mut passed = Vec::new();
    for e in &entries {
        let a = develop(&e.set).map_err(|err| err.to_string())?;
        let r = verify_strength2(&a);
        let ok = r.is_oa
            && a.lambda() == e.lambda
            && r.m_observed == e.set.m() as u64
            && r.classification.basic;
        if ok {
            passed.push(e.name);
        } else {
            failed.push(format!("{}: {r}", e.name));
        }
    }
    let t = within(start, Duration::from_secs(5))?;
    ensure(failed.is_empty(), || {
        format!("passed {:?}; failed {}", passed, failed.join("; "))
    })?;
    Ok(format!("{} arrays basic ({t:?})", passed.len()))
}

fn hadamard_pipeline() -> Check {
    let start = Instant::now();
    for t in 1..=4usize {
        let h = hadamard(8 * t + 4).map_err(|e| e.to_string())?;
        let sym = hadamard_to_symmetric_bibd(&h).map_err(|e| e.to_string())?;
        let d = derived_then_complement(&sym, 0).map_err(|e| e.to_string())?;
        ensure(
            d.parameters() == (4 * t + 1, 8 * t + 2, 4 * t + 2, 2 * t + 1, 2 * t + 1),
            || format!("t={t}: design {:?}", d.parameters()),
        )?;
        let a = bibd_to_oa(&d).map_err(|e| e.to_string())?;
        let r = verify_strength2(&a);
        ensure(
            r.is_oa
                && a.k() == 4 * t + 1
                && a.lambda() == 2 * t as u64 + 1
                && r.m_observed == 2
                && r.classification.basic,
            || format!("t={t}: {r}"),
        )?;
    }
    let t = within(start, Duration::from_secs(5))?;
    Ok(format!("orders 12, 20, 28, 36 ({t:?})"))
}

fn enumeration_example() -> Check {
    let start = Instant::now();
    let a = enumerate::enumerate_oa(7, 3).map_err(|e| e.to_string())?;
    let zero_rows = a.rows().filter(|r| r.iter().all(|&s| s == 0)).count();
    let others = a.num_rows() - zero_rows;
    ensure(others == 672 && zero_rows == 48, || {
        format!("{others} tuples, {zero_rows} zero rows")
    })?;
    ensure(binomial(7, 2).unwrap() * 32 == 672, || "21 x 32".into())?;
    let r = verify_strength2(&a);
    ensure(r.is_oa && r.lambda == 80 && r.m_observed == 48, || {
        r.to_string()
    })?;
    ensure(Rational::new(48, 80) == Rational::new(3, 5), || {
        "ratio".into()
    })?;
    ensure(r.classification.optimal, || r.to_string())?;
    let t = within(start, Duration::from_secs(2))?;
    Ok(format!("{r} ({t:?})"))
}

fn partitioned_enumeration() -> Check {
    let start = Instant::now();
    for (k, n, parts, lambda, m) in [(7, 3, 2, 40, 24), (9, 4, 3, 1701, 972)] {
        let arrays = enumerate::partition_oa(k, n).map_err(|e| e.to_string())?;
        ensure(arrays.len() == parts, || {
            format!("({k},{n}): {} parts", arrays.len())
        })?;
        for a in &arrays {
            let r = verify_strength2(a);
            ensure(
                r.is_oa && a.lambda() == lambda && r.m_observed == m && r.classification.optimal,
                || format!("({k},{n}): {r}"),
            )?;
        }
    }
    let t = within(start, Duration::from_secs(60))?;
    Ok(format!("2 x OA_40(7,3), 3 x OA_1701(9,4) ({t:?})"))
}

fn multi_class_partition() -> Check {
    let start = Instant::now();
    let spec = PartitionSpec::new(16, 3, None).map_err(|e| e.to_string())?;
    let lambda = binomial(14, 4).unwrap() * 256;
    ensure(spec.gamma() == 2 && lambda == 256_256, || {
        "gamma or lambda".into()
    })?;
    ensure(spec.part_lambda() == lambda, || {
        format!("part lambda {}", spec.part_lambda())
    })?;
    let m_total = spec.enumeration().m;
    ensure(spec.part_m() * 4 == m_total, || "m split".into())?;
    let mut verifiers: Vec<StreamingVerifier> = (0..spec.parts())
        .map(|_| StreamingVerifier::new(16, 3).unwrap())
        .collect();
    visit_parts(&spec, |part, row| verifiers[part].push(row));
    let mut lines = Vec::new();
    for (i, v) in verifiers.into_iter().enumerate() {
        let r = v.finish(lambda);
        ensure(
            r.is_oa && r.lambda_observed == Some(lambda) && r.m_observed == spec.part_m(),
            || format!("part {i}: {r}"),
        )?;
        ensure(r.classification.optimal, || format!("part {i}: {r}"))?;
        lines.push(r.m_observed);
    }
    let t = within(start, Duration::from_secs(600))?;
    Ok(format!(
        "4 parts, all 120 column pairs at lambda={lambda}, m={} each ({t:?})",
        lines[0]
    ))
}

fn counting_identities() -> Check {
    for (k, n) in [(5usize, 2usize), (7, 3), (9, 2), (9, 4)] {
        let a = abar(k as u64, n as u64).unwrap();
        let want = binomial(k as u64 - 2, a - 1).unwrap()
            * ((n - 1) as u64).pow((k as u64 - a - 1) as u32);
        let want_00 =
            binomial(k as u64 - 2, a - 2).unwrap() * ((n - 1) as u64).pow((k as u64 - a) as u32);
        let e = Enumeration::new(k, n).map_err(|e| e.to_string())?;
        let mut tally = vec![0u64; n * n];
        visit_tuples(&e, |row| tally[row[0] as usize * n + row[1] as usize] += 1);
        for x in 0..n {
            for y in 0..n {
                let got = tally[x * n + y];
                let expected = if x == 0 && y == 0 { want_00 } else { want };
                ensure(got == expected, || {
                    format!("({k},{n}) pair {x}{y}: {got} vs {expected}")
                })?;
            }
        }
    }
    Ok("0x, x0, xy and 00 tallies match for 4 parameter sets".into())
}

fn deletion() -> Check {
    let start = Instant::now();
    let a = develop(&binary_examples()[1].set).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for s in 1..=4 {
        for cols in combinations(13, s) {
            let d = delete_columns(&a, s, Some(&cols)).map_err(|e| e.to_string())?;
            let r = verify_strength2(&d);
            ensure(
                r.is_oa && r.classification.m_optimal && r.m_observed == 2,
                || format!("s={s} {cols:?}: {r}"),
            )?;
            checked += 1;
        }
    }
    let mut m_optimal_at_5 = 0;
    let subsets_5 = combinations(13, 5);
    for cols in &subsets_5 {
        let d = delete_columns(&a, 5, Some(cols)).map_err(|e| e.to_string())?;
        let r = verify_strength2(&d);
        ensure(r.is_oa, || format!("s=5 {cols:?}: {r}"))?;
        m_optimal_at_5 += r.classification.m_optimal as usize;
    }
    ensure(m_optimal_at_5 == 0, || {
        format!(
            "{m_optimal_at_5} of {} subsets at s=5 are m-optimal",
            subsets_5.len()
        )
    })?;
    let t = within(start, Duration::from_secs(60))?;
    Ok(format!(
        "{checked} subsets m-optimal for s<=4, none of {} at s=5 ({t:?})",
        subsets_5.len()
    ))
}

fn combinations(k: usize, s: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..s).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..s).rev().find(|&i| cur[i] < k - s + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..s {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

fn bound_arithmetic() -> Check {
    let floors = [
        floor_bound(5, 3, 3),
        floor_bound(5, 3, 6),
        floor_bound(5, 3, 9),
    ]
    .map(|f| f.unwrap());
    ensure(floors == [2, 4, 7], || format!("floors {floors:?}"))?;
    let mut cases = 0;
    for n in 2..=10u64 {
        for s in 2..=100 / n {
            let k = s * n;
            for lambda in 1..=6u64 {
                let got = refined_bound(k, n, lambda, s - 1).map_err(|e| e.to_string())?;
                let want = Rational::new((lambda * n * n) as i128, (k * (n - 1) + n) as i128);
                ensure(got == want, || {
                    format!("(k,n,lambda)=({k},{n},{lambda}): {got} vs {want}")
                })?;
                cases += 1;
            }
        }
    }
    Ok(format!("floors 2, 4, 7; refined identity on {cases} cases"))
}

fn property_suites() -> Check {
    // two counting implementations on the corpus and mutations of it
    let corpus = corpus();
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let mut compared = 0;
    for a in &corpus {
        let r = verify_strength2(a);
        let o = recount(a);
        ensure(r.is_oa == o.is_oa && r.m_observed == o.m, || {
            "corpus disagreement".into()
        })?;
        compared += 1;
    }
    for i in 0..200 {
        let a = &corpus[i % corpus.len()];
        let mut data = a.as_flat().to_vec();
        for _ in 0..1 + next() % 3 {
            let pos = (next() % data.len() as u64) as usize;
            data[pos] = (next() % a.n() as u64) as u8;
        }
        let mutated = oarray::OrthogonalArray::from_flat(a.k(), a.n(), a.lambda(), data).unwrap();
        let r = verify_strength2(&mutated);
        let o = recount(&mutated);
        ensure(r.is_oa == o.is_oa && r.m_observed == o.m, || {
            format!("mutation {i}: verifier {} / recount {}", r.is_oa, o.is_oa)
        })?;
        compared += 1;
    }

    // shift bijection on (7,3): inverse and first two columns fixed
    let e = Enumeration::new(7, 3).unwrap();
    let mut shifted = 0;
    let mut failure = None;
    visit_tuples(&e, |row| {
        let internal: Vec<u8> = row.iter().map(|&s| to_internal(s)).collect();
        for kappa in 0..2u8 {
            let there = enumerate::shift_bijection(&internal, 3, &[7], &[kappa]).unwrap();
            let back = enumerate::shift_bijection(&there, 3, &[7], &[(2 - kappa) % 2]).unwrap();
            if back != internal || there[..2] != internal[..2] {
                failure.get_or_insert_with(|| format!("{row:?} kappa={kappa}"));
            }
            shifted += 1;
        }
    });
    ensure(failure.is_none(), || failure.clone().unwrap())?;

    // develop row count on every feasible (k, n)
    let mut developed = 0;
    for n in 2..=5usize {
        for k in 2..=21usize {
            for q in feasible_quadruples(k as u64, n as u64, 60) {
                let a = abar(k as u64, n as u64).unwrap() as usize;
                let row: Vec<u8> = (0..k).map(|j| if j < a { INFINITY } else { 0 }).collect();
                let set = StartingRowSet::new(k, n, q.m as usize, vec![row; q.m as usize]).unwrap();
                let array = develop(&set).map_err(|e| e.to_string())?;
                let rows = (q.m * (q.k * (q.n - 1) + 1)) as usize;
                ensure(
                    rows == (q.lambda * q.n * q.n) as usize && array.num_rows() == rows,
                    || format!("{q}: {} rows", array.num_rows()),
                )?;
                developed += 1;
            }
        }
    }
    Ok(format!(
        "{compared} verifier/recount comparisons, {shifted} shifts, {developed} developments"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("OA_3(5,2) reproduction", small_oa_reproduction),
        ("starting-row corpus", starting_row_corpus),
        ("Hadamard pipeline", hadamard_pipeline),
        ("enumeration example", enumeration_example),
        ("partitioned enumeration", partitioned_enumeration),
        ("multi-class partition", multi_class_partition),
        ("counting identities", counting_identities),
        ("deletion", deletion),
        ("bound arithmetic", bound_arithmetic),
        ("property suites", property_suites),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
