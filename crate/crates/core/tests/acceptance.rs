//! Acceptance suite. Runs every criterion, prints one line each, and exits
//! non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use sn_core::builder::{CfpTable, Engine, ReductionTask};
use sn_core::characters::{inner_cg, inner_cg_projection, kronecker_multiplicities, IsotypicProjector};
use sn_core::combinatorics::{
    dimension, lambda_eigenvalue, outer_decompose, partitions, DecompositionMultiset, Partition,
};
use sn_core::exact::{q, qf, Radical, RadicalSum, Rational};
use sn_core::matelem::{
    one_body_me, one_body_oracle, two_body_me, two_body_oracle, Channel, OneBodySpec, SymbolState, TwoBodySpec,
};
use sn_core::tables_io::{data_dir, export_table, verify_reference, CompareReport, Format, ReferenceTable};
use sn_core::wordspace::class_sum_apply;

type Outcome = Result<String, String>;

fn p(s: &str) -> Partition {
    s.parse().unwrap()
}

fn table(engine: &Engine, f1: &str, attach: &str) -> std::sync::Arc<CfpTable> {
    engine.table(&ReductionTask::new(p(f1), p(attach))).unwrap()
}

fn reference(name: &str) -> ReferenceTable {
    ReferenceTable::load(&data_dir().join(name)).unwrap()
}

fn verify(engine: &Engine, name: &str) -> CompareReport {
    verify_reference(engine, &reference(name)).unwrap()
}

fn check(ok: bool, failures: &mut Vec<String>, msg: impl Into<String>) {
    if !ok {
        failures.push(msg.into());
    }
}

fn finish(failures: Vec<String>, summary: String) -> Outcome {
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(failures.join("; "))
    }
}

fn descending(mut v: Vec<i64>) -> Vec<i64> {
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

fn all_tasks() -> Vec<ReductionTask> {
    let mut out = Vec::new();
    for n in 2..=6 {
        for attach in [Partition::row(1), Partition::row(2), Partition::column(2)] {
            if attach.n() >= n {
                continue;
            }
            for f1 in partitions(n - attach.n()) {
                out.push(ReductionTask::new(f1, attach.clone()));
            }
        }
    }
    out
}

fn facts_s6() -> Outcome {
    let facts = [
        ("[6]", 1, 15),
        ("[5,1]", 5, 9),
        ("[4,2]", 9, 5),
        ("[4,1^2]", 10, 3),
        ("[3,3]", 5, 3),
        ("[3,2,1]", 16, 0),
        ("[3,1^3]", 10, -3),
        ("[2^3]", 5, -3),
        ("[2^2,1^2]", 9, -5),
        ("[2,1^4]", 5, -9),
        ("[1^6]", 1, -15),
    ];
    let mut failures = Vec::new();
    check(partitions(6).len() == facts.len(), &mut failures, "partition count");
    for (f, dim, lambda) in facts {
        let f = p(f);
        check(dimension(&f) == dim, &mut failures, format!("dim {f} = {}", dimension(&f)));
        check(lambda_eigenvalue(&f) == lambda, &mut failures, format!("lambda {f} = {}", lambda_eigenvalue(&f)));
    }
    finish(failures, "11 partitions of 6".into())
}

fn reproduce(engine: &Engine, names: &[&str], failures: &mut Vec<String>) {
    for name in names {
        let r = verify(engine, name);
        check(r.passed(), failures, format!("{name} does not match"));
    }
}

fn s2_in_s3() -> Outcome {
    let e = Engine::new();
    let mut failures = Vec::new();
    reproduce(&e, &["n3_eq1.json", "n3_[1^2]_x_[1].json", "n3_[1^2]_x_[1]_alt.json"], &mut failures);
    let sym = descending(table(&e, "[2]", "[1]").eigenvalues());
    let anti = descending(table(&e, "[1^2]", "[1]").eigenvalues());
    check(sym == descending(vec![3, 0, 0]), &mut failures, format!("[2]x[1] eigenvalues {sym:?}"));
    check(anti == descending(vec![-3, 0, 0]), &mut failures, format!("[1^2]x[1] eigenvalues {anti:?}"));
    finish(failures, "3 tables, eigenvalues 3,0,0 and -3,0,0".into())
}

fn s3_in_s4() -> Outcome {
    let e = Engine::new();
    let mut failures = Vec::new();
    reproduce(&e, &["n4_[3]_x_[1].json", "n4_[1^3]_x_[1].json", "n4_[2,1]_x_[1].json"], &mut failures);
    let got = descending(table(&e, "[2,1]", "[1]").eigenvalues());
    check(got == descending(vec![-2, -2, -2, 2, 2, 2, 0, 0]), &mut failures, format!("[2,1]x[1] eigenvalues {got:?}"));
    finish(failures, "3 tables, [2,1]x[1] spectrum (-2^3, 2^3, 0^2)".into())
}

fn one_particle_n5_n6() -> Outcome {
    let e = Engine::new();
    let mut failures = Vec::new();
    for name in ["n5_[4]_x_[1].json", "n5_[1^4]_x_[1].json", "n6_[5]_x_[1].json", "n6_[1^5]_x_[1].json"] {
        let r = verify(&e, name);
        check(r.passed(), &mut failures, format!("{name} does not match"));
        let reference = reference(name);
        let n = reference.n;
        for (b, rb) in r.blocks.iter().zip(&reference.blocks) {
            if b.width != 1 {
                continue;
            }
            check(b.entrywise_up_to_sign == Some(true), &mut failures, format!("{name} {} not entrywise", b.target));
            let inv_n = qf(1, n as i64);
            let ok = reference.entries.iter().all(|row| {
                let s = row[rb.start].signed_square();
                s == inv_n || s == -inv_n.clone()
            });
            check(ok, &mut failures, format!("{name} {} entries are not +-1/sqrt({n})", b.target));
        }
    }
    finish(failures, "4 tables, one-dimensional columns entrywise".into())
}

fn two_particle() -> Outcome {
    let e = Engine::new();
    let mut failures = Vec::new();
    let names = [
        "n4_[2]_x_[2].json",
        "n4_[1^2]_x_[1^2].json",
        "n4_[2]_x_[1^2].json",
        "n5_[3]_x_[2].json",
        "n6_[4]_x_[2].json",
        "n6_[4]_x_[1^2].json",
        "n6_[1^4]_x_[1^2].json",
    ];
    for name in names {
        let r = verify(&e, name);
        if !r.passed() {
            let bad: Vec<String> = r.blocks.iter().filter(|b| !b.pass).map(|b| b.target.to_string()).collect();
            failures.push(format!("{name} blocks {} do not match", bad.join(",")));
        }
    }
    let want = Radical::canonicalize(Rational::from_integer(1.into()), qf(1, 15)).unwrap();
    let reference = reference("n6_[4]_x_[2].json");
    let rb = reference.blocks.iter().find(|b| b.target == p("[6]")).unwrap();
    check(reference.entries.iter().all(|row| row[rb.start] == want), &mut failures, "reference [6] column");
    let t = table(&e, "[4]", "[2]");
    let c = t.block(&p("[6]"), 0).unwrap().start;
    check(t.entries.iter().all(|row| row[c] == want), &mut failures, "computed [6] column");
    finish(failures, "7 tables, [6] column of [4]x[2] all 1/15*sqrt(15)".into())
}

fn degeneracy() -> Outcome {
    let e = Engine::new();
    let mut failures = Vec::new();
    let cases = [
        ("[3,1]", "[2]", 3, [("[4,1^2]", 10), ("[3,3]", 5)]),
        ("[2,1^2]", "[1^2]", -3, [("[3,1^3]", 10), ("[2^3]", 5)]),
    ];
    for (f1, attach, lambda, split) in cases {
        let t = table(&e, f1, attach);
        let space = t.spectrum.iter().find(|s| s.0 == lambda).map(|s| s.1);
        check(space == Some(15), &mut failures, format!("{f1}x{attach} eigenspace {lambda} has dim {space:?}"));
        let projectors: Vec<IsotypicProjector> = split.iter().map(|(f, _)| IsotypicProjector::new(&p(f))).collect();
        for (k, (f, width)) in split.iter().enumerate() {
            let f = p(f);
            let Some(range) = t.block(&f, 0) else {
                failures.push(format!("{f1}x{attach} has no {f} block"));
                continue;
            };
            check(range.len() == *width, &mut failures, format!("{f} block width {}", range.len()));
            let b = t.blocks.iter().find(|b| b.target == f).unwrap();
            check(b.lambda == lambda, &mut failures, format!("{f} block has lambda {}", b.lambda));
            for c in range {
                let v = t.column_state(c);
                for (j, proj) in projectors.iter().enumerate() {
                    let img = proj.apply(&v).unwrap();
                    let ok = if j == k { img == v } else { img.is_zero() };
                    check(ok, &mut failures, format!("{f1}x{attach} column {c} under the {} projector", proj.shape()));
                }
            }
        }
    }
    finish(failures, "Young-operator blocks equal character-projector images (10+5, 10+5)".into())
}

fn gram_is_identity(t: &CfpTable) -> bool {
    let cols = t.columns.len();
    (0..cols).all(|i| {
        (i..cols).all(|j| {
            let mut acc = RadicalSum::zero();
            for row in &t.entries {
                let x = &row[i] * &row[j];
                if !x.is_zero() {
                    acc.add_radical(&x);
                }
            }
            if i == j {
                acc.is_one()
            } else {
                acc.is_zero()
            }
        })
    })
}

fn global_properties() -> Outcome {
    let e = Engine::new();
    let mut failures = Vec::new();
    let tasks = all_tasks();
    for task in &tasks {
        let t = e.table(task).unwrap();
        let name = format!("{}x{}", task.f1, task.attach);
        check(gram_is_identity(&t), &mut failures, format!("{name}: V^T V != I"));
        let expect = outer_decompose(&task.f1, &task.attach);
        let got: Vec<(Partition, usize)> = t.blocks.iter().map(|b| (b.target.clone(), b.copies)).collect();
        let mut want = expect.entries();
        let mut sorted = got.clone();
        want.sort();
        sorted.sort();
        check(sorted == want, &mut failures, format!("{name}: blocks {got:?} vs {}", expect));
        for b in &t.blocks {
            check(
                b.width == b.copies * dimension(&b.target) as usize,
                &mut failures,
                format!("{name}: {} width", b.target),
            );
            check(b.lambda == lambda_eigenvalue(&b.target), &mut failures, format!("{name}: {} lambda", b.target));
            for c in b.start..b.start + b.width {
                let v = t.column_state(c);
                let ok = class_sum_apply(&v) == v.scale(&q(b.lambda));
                check(ok, &mut failures, format!("{name}: column {c} is not an eigenvector"));
            }
        }
    }
    finish(failures, format!("{} reductions", tasks.len()))
}

fn parse_list(n: usize, items: &[(usize, &str)]) -> DecompositionMultiset {
    let mut m = DecompositionMultiset::new();
    for &(mult, f) in items {
        let f = p(f);
        assert_eq!(f.n(), n, "{f}");
        m.add(f, mult);
    }
    m
}

/// Printed products with dimension prefixes: "2[2,1]" is one [2,1].
fn parse_dimension_list(items: &[(usize, &str)]) -> DecompositionMultiset {
    let mut m = DecompositionMultiset::new();
    for &(d, f) in items {
        let f = p(f);
        assert_eq!(dimension(&f) as usize, d, "{f} is not {d}-dimensional");
        m.add(f, 1);
    }
    m
}

fn kron(f1: &str, f2: &str) -> DecompositionMultiset {
    kronecker_multiplicities(&p(f1), &p(f2)).unwrap()
}

fn shape(parts: &[usize]) -> String {
    Partition::new(parts.to_vec()).unwrap().to_string()
}

fn kronecker() -> Outcome {
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    let s3 = parse_dimension_list(&[(1, "[3]"), (2, "[2,1]"), (1, "[1^3]")]);
    check(kron("[2,1]", "[2,1]") == s3, &mut failures, "[2,1]x[2,1]");
    let printed_s4 = [
        ("[3,1]", "[3,1]", parse_list(4, &[(1, "[4]"), (1, "[3,1]"), (1, "[2^2]"), (1, "[2,1^2]")])),
        ("[3,1]", "[2^2]", parse_list(4, &[(1, "[3,1]"), (1, "[2,1^2]")])),
        ("[2^2]", "[2^2]", parse_list(4, &[(1, "[4]"), (1, "[2^2]")])),
    ];
    for (a, b, printed) in printed_s4 {
        let got = kron(a, b);
        if got != printed {
            notes.push(format!("printed {a}x{b}={printed}, characters give {got}"));
        }
    }
    for n in [5, 6] {
        let hook = shape(&[n - 1, 1]);
        let printed =
            parse_list(n, &[(1, &shape(&[n])), (1, &hook), (1, &shape(&[n - 2, 2])), (1, &shape(&[n - 2, 1, 1]))]);
        let got = kron(&hook, &hook);
        check(got == printed, &mut failures, format!("{hook}x{hook} at n={n}: {got}"));
        let printed = parse_list(
            n,
            &[
                (1, &hook),
                (1, &shape(&[n - 2, 2])),
                (1, &shape(&[n - 2, 1, 1])),
                (1, &shape(&[n - 3, 1, 1, 1])),
                (1, &shape(&[n - 3, 2, 1])),
            ],
        );
        // Printed with [n-3,1^3] where the characters give [n-3,3].
        let mut corrected = DecompositionMultiset::new();
        for (f, m) in printed.entries() {
            if f != p(&shape(&[n - 3, 1, 1, 1])) {
                corrected.add(f, m);
            }
        }
        if n - 3 >= 3 {
            corrected.add(p(&shape(&[n - 3, 3])), 1);
        }
        let got = kron(&hook, &shape(&[n - 2, 2]));
        if got == corrected && got != printed {
            notes.push(format!("{hook}x{} at n={n}: printed [n-3,1^3] should be [n-3,3]", shape(&[n - 2, 2])));
        } else {
            failures.push(format!("{hook}x{} at n={n}: {got}", shape(&[n - 2, 2])));
        }
        // Printed with [n-3,1^3] a second time after a comma.
        let mut printed_dup = printed.clone();
        printed_dup.add(p(&shape(&[n - 3, 1, 1, 1])), 1);
        let got = kron(&hook, &shape(&[n - 2, 1, 1]));
        if got == printed && got != printed_dup {
            notes.push(format!("{hook}x{} at n={n}: [n-3,1^3] occurs once, printed twice", shape(&[n - 2, 1, 1])));
        } else {
            failures.push(format!("{hook}x{} at n={n}: {got}", shape(&[n - 2, 1, 1])));
        }
    }
    // [n-2,2]x[n-2,2] for n=8, where every printed shape exists.
    let n = 8;
    let two = shape(&[n - 2, 2]);
    let printed: Vec<(usize, String)> = vec![
        (1, shape(&[n])),
        (1, shape(&[n - 1, 1])),
        (2, shape(&[n - 2, 2])),
        (1, shape(&[n - 2, 1, 1])),
        (1, shape(&[n - 3, 3])),
        (2, shape(&[n - 3, 1, 1, 1])),
        (2, shape(&[n - 3, 2, 1])),
        (1, shape(&[n - 4, 4])),
        (1, shape(&[n - 4, 3, 1])),
        (1, shape(&[n - 4, 2, 2])),
    ];
    let printed = parse_list(n, &printed.iter().map(|(m, f)| (*m, f.as_str())).collect::<Vec<_>>());
    let got = kron(&two, &two);
    let mut corrected = DecompositionMultiset::new();
    for (f, m) in printed.entries() {
        let m = if f == p(&shape(&[n - 3, 1, 1, 1])) { 1 } else { m };
        corrected.add(f, m);
    }
    if got == corrected && got != printed {
        notes.push(format!("{two}x{two} at n={n}: [n-3,1^3] occurs once, printed twice"));
    } else {
        failures.push(format!("{two}x{two} at n={n}: {got}"));
    }
    let detected = |what: &str| notes.iter().any(|x| x.contains(what));
    check(detected("[2^2]x[2^2]"), &mut failures, "missing [1^4] in [2^2]x[2^2] not detected");
    check(detected("occurs once, printed twice"), &mut failures, "duplicated [n-3,1^3] not detected");
    for n in &notes {
        println!("    discrepancy: {n}");
    }
    finish(failures, format!("all lists reproduced, {} printed typos detected", notes.len()))
}

fn sqrt_half() -> Radical {
    Radical::canonicalize(Rational::from_integer(1.into()), qf(1, 2)).unwrap()
}

fn inner_cg_s3() -> Outcome {
    let e = Engine::new();
    let mut failures = Vec::new();
    let f = p("[2,1]");
    // Product components ordered e1e1, e1e2, e2e1, e2e2; the printed
    // combinations carry the prefactor 1/2.
    let printed = [
        ("[3]", 0, [1, 0, 0, 1]),
        ("[1^3]", 0, [0, 1, -1, 0]),
        ("[2,1]", 1, [1, 0, 0, -1]),
        ("[2,1]", 0, [0, 1, 1, 0]),
    ];
    let half = qf(1, 2);
    for (target, component, v) in printed {
        let t = p(target);
        let proj = inner_cg_projection(&e, &f, &f, &t).unwrap();
        let direct = inner_cg(&e, &f, &f, &t).unwrap().copies.remove(0);
        let flipped: Vec<Vec<Radical>> = proj.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        check(direct == proj || direct == flipped, &mut failures, format!("{target}: routes disagree"));
        let col: Vec<Radical> = proj.iter().map(|r| r[component].clone()).collect();
        let scaled: Vec<Radical> = v.iter().map(|&x| &sqrt_half() * &q(x)).collect();
        let negated: Vec<Radical> = scaled.iter().map(|x| -x).collect();
        check(col == scaled || col == negated, &mut failures, format!("{target}_{}: {col:?}", component + 1));
        let printed_norm2: Rational = v.iter().map(|&x| q(x) * q(x) * &half * &half).sum();
        check(printed_norm2 == half, &mut failures, format!("{target}: printed norm {printed_norm2}"));
    }
    finish(
        failures,
        "4 combinations at 1/2*sqrt(2), printed 1/2 gives norm 1/2; printed [2,1]_1/_2 are components 2/1".into(),
    )
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    qf(rng.gen_range(-6..=6), rng.gen_range(1..=5))
}

fn random_one_body(rng: &mut ChaCha8Rng, n: usize) -> OneBodySpec {
    let mut s = OneBodySpec::default();
    for a in 1..=n {
        for b in a..=n {
            s.m1.insert((a, b), random_rational(rng));
        }
    }
    s
}

fn random_two_body(rng: &mut ChaCha8Rng, n: usize) -> TwoBodySpec {
    let mut s = TwoBodySpec::default();
    for g in 1..=n {
        for d in g + 1..=n {
            for (pc, qc) in [(Channel::S, Channel::S), (Channel::A, Channel::A), (Channel::S, Channel::A)] {
                let x = random_rational(rng);
                s.m2.insert((pc, qc, g, d, g, d), x.clone());
                s.m2.insert((qc, pc, g, d, g, d), x);
            }
        }
    }
    s
}

fn is_scaled_identity(m: &[Vec<RadicalSum>], diag: &Rational, same: bool) -> bool {
    m.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(
            |(j, x)| {
                if same && i == j {
                    x.as_rational().as_ref() == Some(diag)
                } else {
                    x.is_zero()
                }
            },
        )
    })
}

fn matrix_elements() -> Outcome {
    let e = Engine::new();
    let mut failures = Vec::new();
    let mut identity_checks = 0;
    for n in 2..=6 {
        for f1 in partitions(n - 1) {
            let t = e.table(&ReductionTask::new(f1.clone(), Partition::row(1))).unwrap();
            for a in &t.blocks {
                for b in &t.blocks {
                    let me = one_body_me(&e, &a.target, &b.target, &t, &t, &OneBodySpec::identity(n)).unwrap();
                    identity_checks += 1;
                    let ok = is_scaled_identity(&me, &q(n as i64), a.target == b.target);
                    check(ok, &mut failures, format!("identity on {f1}x[1]: {},{}", a.target, b.target));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut oracle_checks = 0;
    for _draw in 0..20 {
        for n in 2..=4 {
            let one = random_one_body(&mut rng, n);
            let singles: Vec<_> = partitions(n - 1)
                .into_iter()
                .map(|f| e.table(&ReductionTask::new(f, Partition::row(1))).unwrap())
                .collect();
            for bra in &singles {
                for ket in &singles {
                    for a in &bra.blocks {
                        for b in &ket.blocks {
                            let x = one_body_me(&e, &a.target, &b.target, bra, ket, &one).unwrap();
                            let y = one_body_oracle(&a.target, &b.target, bra, ket, &one).unwrap();
                            oracle_checks += 1;
                            check(
                                x == y,
                                &mut failures,
                                format!("one-body {}x[1] {} / {}x[1] {}", bra.f1, a.target, ket.f1, b.target),
                            );
                        }
                    }
                }
            }
            if n < 3 {
                continue;
            }
            let two = random_two_body(&mut rng, n);
            let mut pairs = Vec::new();
            for attach in [Partition::row(2), Partition::column(2)] {
                for f in partitions(n - 2) {
                    pairs.push(e.table(&ReductionTask::new(f, attach.clone())).unwrap());
                }
            }
            for bra in &pairs {
                for ket in &pairs {
                    for a in &bra.blocks {
                        for b in &ket.blocks {
                            let x = two_body_me(&a.target, &b.target, bra, ket, &two).unwrap();
                            let y = two_body_oracle(&a.target, &b.target, bra, ket, &two).unwrap();
                            oracle_checks += 1;
                            let name = format!(
                                "two-body {}x{} {} / {}x{} {}",
                                bra.f1, bra.attach, a.target, ket.f1, ket.attach, b.target
                            );
                            check(x == y, &mut failures, name);
                        }
                    }
                }
            }
        }
    }
    let mut singlet = SymbolState::default();
    for (x, y, z) in [("r", "g", "b"), ("g", "b", "r"), ("b", "r", "g")] {
        singlet.add(&[x, y, z], q(1));
        singlet.add(&[y, x, z], q(-1));
    }
    check(singlet.norm2() == q(6), &mut failures, "singlet norm");
    for t in [[2u8, 1, 3], [1, 3, 2], [3, 2, 1]] {
        check(singlet.permute(&t) == singlet.scale(&q(-1)), &mut failures, format!("singlet under {t:?}"));
    }
    failures.truncate(10);
    finish(
        failures,
        format!("{identity_checks} identity blocks, {oracle_checks} oracle comparisons, color singlet antisymmetric"),
    )
}

fn export_all(engine: &Engine, tasks: &[ReductionTask], parallel: bool) -> Vec<Vec<u8>> {
    let one = |task: &ReductionTask| {
        let t = engine.table(task).unwrap();
        let mut out = Vec::new();
        for f in [Format::Json, Format::Csv, Format::Latex] {
            out.extend(export_table(&t, f));
        }
        out
    };
    if parallel {
        let mut v: Vec<(usize, Vec<u8>)> = tasks.par_iter().enumerate().rev().map(|(i, t)| (i, one(t))).collect();
        v.sort_by_key(|x| x.0);
        v.into_iter().map(|x| x.1).collect()
    } else {
        tasks.iter().map(one).collect()
    }
}

fn determinism() -> Outcome {
    let tasks = all_tasks();
    let first = export_all(&Engine::new(), &tasks, false);
    let second = export_all(&Engine::new(), &tasks, true);
    let bytes: usize = first.iter().map(|x| x.len()).sum();
    let differ: Vec<String> = tasks
        .iter()
        .zip(first.iter().zip(&second))
        .filter(|(_, (a, b))| a != b)
        .map(|(t, _)| format!("{}x{}", t.f1, t.attach))
        .collect();
    if differ.is_empty() {
        Ok(format!("{} reductions, {bytes} bytes identical across a sequential and a parallel run", tasks.len()))
    } else {
        Err(format!("exports differ: {}", differ.join(", ")))
    }
}

type Criterion = (u32, &'static str, u64, fn() -> Outcome);

fn main() {
    let criteria: Vec<Criterion> = vec![
        (1, "S6 dimensions and class-sum eigenvalues", 100, facts_s6),
        (2, "S2 in S3 tables", 100, s2_in_s3),
        (3, "S3 in S4 tables", 500, s3_in_s4),
        (4, "one-particle tables at n=5,6", 2_000, one_particle_n5_n6),
        (5, "two-particle tables", 10_000, two_particle),
        (6, "degenerate eigenspaces", 30_000, degeneracy),
        (7, "global properties for n<=6", 120_000, global_properties),
        (8, "Kronecker products", 60_000, kronecker),
        (9, "inner Clebsch-Gordan at n=3", 60_000, inner_cg_s3),
        (10, "matrix elements", 300_000, matrix_elements),
        (11, "determinism", 300_000, determinism),
    ];
    let mut failed = 0;
    for (id, name, budget_ms, run) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(s) if elapsed > Duration::from_millis(budget_ms) => {
                Err(format!("{s}, but took {elapsed:.2?} (budget {budget_ms} ms)"))
            }
            r => r,
        };
        match result {
            Ok(s) => println!("criterion {id:>2} PASS  {name}: {s} [{elapsed:.2?}]"),
            Err(s) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}: {s} [{elapsed:.2?}]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
