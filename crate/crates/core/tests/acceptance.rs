//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::process::{Command, ExitCode};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use labgraph::decompose::decompose;
use labgraph::fixtures;
use labgraph::graph::Word;
use labgraph::hereditary::{check_ideal_hypothesis, hereditary_closure, is_hereditary};
use labgraph::rep::{
    all_canonical_terms, build_rep, rep_of_element, sample_element, sample_terms, verify_homomorphism, verify_relations,
};
use labgraph::space::{accommodating_closure, normal_closure, ClosureMode, SetFamily};
use labgraph::term::{expand_to_sinks, multiply, star_product};
use labgraph::text::{format_element, format_term};
use labgraph::{AlgebraElement, CanonicalTerm, Error, LabeledSpace, Verdict, VertexSet};

use common::{brute_force_n, corpus, random_subset, Fixture};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

const CORPUS_SIZE: usize = 100;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_labgraph"))
}

fn fixture_path(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn term(space: &LabeledSpace, left: &Word, mid: &VertexSet, right: &Word) -> Option<CanonicalTerm> {
    labgraph::term::canonicalize(space, left, mid, right).unwrap()
}

fn power(space: &LabeledSpace, n: usize) -> Word {
    let a = space.graph().symbol("a").unwrap();
    Word::from_symbols(std::iter::repeat_n(a, n))
}

fn forked_path_blocks() -> Outcome {
    let space = fixtures::forked_path_normal();
    let g = space.graph();
    let dec = decompose(&space).map_err(|e| e.to_string())?;
    let blocks: Vec<(String, Vec<String>)> = dec
        .blocks
        .iter()
        .map(|b| {
            (
                g.format_set(&b.sinks),
                b.basis.iter().map(|w| g.word_label(w)).collect(),
            )
        })
        .collect();
    let expected = vec![
        ("{v}".to_owned(), vec!["ε".to_owned(), "a".to_owned()]),
        ("{x}".to_owned(), vec!["ε".to_owned(), "b".to_owned(), "ab".to_owned()]),
    ];
    ensure(blocks == expected, || format!("blocks {blocks:?}"))?;

    let out = bin()
        .args(["decompose", &fixture_path("forked_path.lg")])
        .output()
        .unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    ensure(out.status.success(), || format!("cli exit {:?}", out.status.code()))?;
    ensure(
        stdout.starts_with("M_2 @ {v} ⊕ M_3 @ {x}\n") && stdout.contains("dim = 13"),
        || format!("cli output {stdout:?}"),
    )?;
    Ok(dec.summary(g))
}

fn missing_sinks_rejected() -> Outcome {
    let err = decompose(&fixtures::forked_path_without_sinks()).err();
    ensure(err == Some(Error::SinksNotInFamily), || format!("got {err:?}"))?;
    let msg = err.unwrap().to_string();
    ensure(msg == "E^0_sink ∉ B", || format!("message {msg:?}"))?;

    let out = bin()
        .args(["decompose", &fixture_path("forked_path_without_sinks.lg")])
        .output()
        .unwrap();
    let stderr = String::from_utf8_lossy(&out.stderr);
    ensure(
        out.status.code() == Some(1) && stderr.contains("E^0_sink ∉ B"),
        || format!("cli exit {:?}, stderr {stderr:?}", out.status.code()),
    )?;
    Ok(msg)
}

fn joined_path_failures() -> Outcome {
    let split = fixtures::joined_path_split();
    let g = split.graph();
    let set = |names: &[&str]| g.vertex_set(names.iter().copied()).unwrap();
    let verdict = split.weakly_left_resolving().map_err(|e| e.to_string())?;
    let Verdict::Fails(w) = verdict else {
        return Err("split family is weakly left-resolving".into());
    };
    let pair = [w.a.clone(), w.b.clone()];
    ensure(
        (pair == [set(&["v"]), set(&["w"])] || pair == [set(&["w"]), set(&["v"])]) && g.symbol_name(w.label) == "b",
        || format!("witness {}", w.describe(g)),
    )?;

    let listed = fixtures::joined_path_listed();
    let Verdict::Fails(c) = listed.non_degenerate() else {
        return Err("listed family is non-degenerate".into());
    };
    ensure(c.a == set(&["v", "w"]) && c.b == set(&["w"]), || {
        format!("witness {}", c.describe(g))
    })?;
    Ok(format!("{}; {}", w.describe(g), c.describe(g)))
}

fn loop_product_laws() -> Outcome {
    let space = fixtures::looped_exit_fine();
    let g = space.graph();
    let u = g.vertex_set(["u"]).unwrap();
    let v = g.vertex_set(["v"]).unwrap();
    let mut checked = 0;
    for n in 0..=3 {
        for m in 0..=3 {
            for k in 0..=3 {
                for l in 0..=3 {
                    let x = term(&space, &power(&space, n), &u, &power(&space, m)).unwrap();
                    let y = term(&space, &power(&space, k), &u, &power(&space, l)).unwrap();
                    let expected = if m >= k {
                        term(&space, &power(&space, n), &u, &power(&space, l + m - k))
                    } else {
                        term(&space, &power(&space, n + k - m), &u, &power(&space, l))
                    };
                    let got = star_product(&space, &x, &y).map_err(|e| e.to_string())?;
                    let want = expected.map(AlgebraElement::from).unwrap_or_default();
                    ensure(got == want, || {
                        format!(
                            "({}) * ({}) = {}, expected {}",
                            format_term(g, &x),
                            format_term(g, &y),
                            format_element(g, &got),
                            format_element(g, &want)
                        )
                    })?;
                    checked += 1;

                    for (first, second) in [(&u, &v), (&v, &u)] {
                        let (Some(x), Some(y)) = (
                            term(&space, &power(&space, n), first, &power(&space, m)),
                            term(&space, &power(&space, k), second, &power(&space, l)),
                        ) else {
                            continue;
                        };
                        let got = star_product(&space, &x, &y).map_err(|e| e.to_string())?;
                        ensure(got.is_zero(), || {
                            format!(
                                "mixed product ({}) * ({}) = {}, expected 0",
                                format_term(g, &x),
                                format_term(g, &y),
                                format_element(g, &got)
                            )
                        })?;
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} products"))
}

fn matrix_units() -> Outcome {
    let space = fixtures::forked_path_normal();
    let g = space.graph();
    let dec = decompose(&space).map_err(|e| e.to_string())?;
    let unit = |block: usize, mu: &Word, nu: &Word| -> AlgebraElement {
        term(&space, mu, &dec.blocks[block].sinks, nu)
            .map(AlgebraElement::from)
            .unwrap_or_default()
    };
    let mut checked = 0;
    for (i, bi) in dec.blocks.iter().enumerate() {
        for (j, bj) in dec.blocks.iter().enumerate() {
            for mu in &bi.basis {
                for nu in &bi.basis {
                    let x = unit(i, mu, nu);
                    ensure(!x.is_zero(), || "vanishing matrix unit".into())?;
                    for kappa in &bj.basis {
                        for lambda in &bj.basis {
                            let y = unit(j, kappa, lambda);
                            let got = multiply(&space, &x, &y).map_err(|e| e.to_string())?;
                            let want = if i == j && nu == kappa {
                                unit(i, mu, lambda)
                            } else {
                                AlgebraElement::zero()
                            };
                            ensure(got == want, || {
                                format!(
                                    "({}) * ({}) = {}",
                                    format_element(g, &x),
                                    format_element(g, &y),
                                    format_element(g, &got)
                                )
                            })?;
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{checked} products"))
}

fn relation_suite(corpus: &[Fixture]) -> Outcome {
    let mut spaces = vec![("forked path".to_owned(), fixtures::forked_path_normal())];
    spaces.extend(corpus.iter().map(|f| (format!("seed {}", f.seed), f.space.clone())));
    for (name, space) in &spaces {
        let dec = decompose(space).map_err(|e| format!("{name}: {e}"))?;
        let rep = build_rep(space, &dec).map_err(|e| format!("{name}: {e}"))?;
        let report = verify_relations(space, &rep).map_err(|e| format!("{name}: {e}"))?;
        ensure(report.all_pass(), || format!("{name}: {}", report.render()))?;
    }
    Ok(format!("{} spaces", spaces.len()))
}

fn homomorphism_suite(corpus: &[Fixture]) -> Outcome {
    const PAIRS: usize = 50;
    for f in corpus {
        let space = &f.space;
        let rep = build_rep(space, &decompose(space).unwrap()).unwrap();
        let terms = all_canonical_terms(space).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(f.seed);
        let sample: Vec<AlgebraElement> = sample_terms(&terms, 2 * PAIRS, &mut rng)
            .into_iter()
            .map(AlgebraElement::from)
            .collect();
        for pair in sample.chunks(2) {
            let verdict = verify_homomorphism(space, &rep, pair).map_err(|e| e.to_string())?;
            ensure(verdict.holds(), || {
                format!(
                    "seed {}: {:?} on {} and {}",
                    f.seed,
                    verdict,
                    format_element(space.graph(), &pair[0]),
                    format_element(space.graph(), &pair[1])
                )
            })?;
        }
    }
    Ok(format!("{} graphs x {PAIRS} pairs", corpus.len()))
}

fn block_size_oracle(corpus: &[Fixture]) -> Outcome {
    let mut blocks = 0;
    for f in corpus {
        let g = f.space.graph();
        let dec = decompose(&f.space).unwrap();
        for b in &dec.blocks {
            let expected = brute_force_n(g, &b.sinks);
            ensure(b.size() == expected + 1, || {
                format!(
                    "seed {}: block {} has {} words, paths give {expected}",
                    f.seed,
                    g.format_set(&b.sinks),
                    b.size() - 1
                )
            })?;
            blocks += 1;
        }
    }
    Ok(format!("{blocks} blocks"))
}

fn rewriting_soundness(corpus: &[Fixture]) -> Outcome {
    for f in corpus {
        let space = &f.space;
        let g = space.graph();
        let dec = decompose(space).unwrap();
        let rep = build_rep(space, &dec).unwrap();
        let terms = all_canonical_terms(space).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(f.seed ^ 0x9);
        for _ in 0..100 {
            let e = sample_element(&terms, 4, &mut rng);
            let expanded = expand_to_sinks(space, &e).map_err(|err| err.to_string())?;
            ensure(
                rep_of_element(space, &rep, &e).unwrap() == rep_of_element(space, &rep, &expanded).unwrap(),
                || format!("seed {}: {} changed value", f.seed, format_element(g, &e)),
            )?;
            ensure(
                expanded.terms().all(|t| dec.blocks.iter().any(|b| &b.sinks == t.mid())),
                || {
                    format!(
                        "seed {}: {} has a non-minimal mid",
                        f.seed,
                        format_element(g, &expanded)
                    )
                },
            )?;
        }
    }
    Ok(format!("{} graphs x 100 elements", corpus.len()))
}

fn closure_laws(corpus: &[Fixture]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for f in corpus {
        let g = f.space.graph();
        let n = g.vertex_count();
        let small: Vec<VertexSet> = (0..2)
            .map(|_| random_subset(&mut rng, n))
            .filter(|s| !s.is_empty())
            .collect();
        let mut large = small.clone();
        large.extend((0..2).map(|_| random_subset(&mut rng, n)).filter(|s| !s.is_empty()));
        let small = SetFamily::new(small).unwrap();
        let large = SetFamily::new(large).unwrap();
        for mode in [ClosureMode::Accommodating, ClosureMode::Normal] {
            let close = |s: &SetFamily| match mode {
                ClosureMode::Accommodating => accommodating_closure(g, s),
                ClosureMode::Normal => normal_closure(g, s),
            };
            let (Ok(cs), Ok(cl)) = (close(&small), close(&large)) else {
                continue;
            };
            let ctx = || format!("seed {} {mode:?}", f.seed);
            ensure(small.is_subfamily_of(&cs), || format!("{}: not extensive", ctx()))?;
            ensure(cs.is_subfamily_of(&cl), || format!("{}: not monotone", ctx()))?;
            ensure(close(&cs).unwrap() == cs, || format!("{}: not idempotent", ctx()))?;
            let space = LabeledSpace::new(g.clone(), cs).unwrap();
            let ok = match mode {
                ClosureMode::Accommodating => space.is_accommodating(),
                ClosureMode::Normal => space.is_normal(),
            };
            ensure(ok, || format!("{}: output fails its axiom check", ctx()))?;
        }
    }
    Ok(format!("{} graphs", corpus.len()))
}

fn hereditary_suite(corpus: &[Fixture]) -> Outcome {
    let mut ideals = 0;
    for f in corpus {
        let space = &f.space;
        let g = space.graph();
        let terms = all_canonical_terms(space).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(f.seed ^ 0x11);
        let members: Vec<&VertexSet> = space.family().iter().filter(|a| !a.is_empty()).collect();
        for seed_set in members {
            let seeds = SetFamily::new([seed_set.clone()]).unwrap();
            let h = hereditary_closure(space, &seeds).map_err(|e| e.to_string())?;
            ensure(is_hereditary(space, h.members()).holds(), || {
                format!(
                    "seed {}: closure of {} is not hereditary",
                    f.seed,
                    g.format_set(seed_set)
                )
            })?;
            if !check_ideal_hypothesis(&h).holds() {
                continue;
            }
            ideals += 1;
            let basis = h.spanning_terms().unwrap();
            for t in sample_terms(&terms, 100, &mut rng) {
                let t = AlgebraElement::from(t);
                for b in &basis {
                    let b = AlgebraElement::from(b.clone());
                    for product in [multiply(space, &b, &t).unwrap(), multiply(space, &t, &b).unwrap()] {
                        ensure(product.terms().all(|p| h.contains_term(p)), || {
                            format!("seed {}: {} leaves the ideal", f.seed, format_element(g, &product))
                        })?;
                    }
                }
            }
        }
    }
    Ok(format!("{ideals} ideals"))
}

fn main() -> ExitCode {
    let corpus = corpus(CORPUS_SIZE);
    let criteria: Vec<Criterion> = vec![
        ("forked path decomposes as M_2 + M_3", Box::new(forked_path_blocks)),
        ("family without the sinks is rejected", Box::new(missing_sinks_rejected)),
        (
            "joined path WLR and complement witnesses",
            Box::new(joined_path_failures),
        ),
        ("loop graph product laws", Box::new(loop_product_laws)),
        ("matrix-unit multiplication table", Box::new(matrix_units)),
        (
            "relation suite on the random corpus",
            Box::new(|| relation_suite(&corpus)),
        ),
        ("homomorphism suite", Box::new(|| homomorphism_suite(&corpus))),
        (
            "block sizes match path enumeration",
            Box::new(|| block_size_oracle(&corpus)),
        ),
        (
            "sink expansion preserves values",
            Box::new(|| rewriting_soundness(&corpus)),
        ),
        ("closure laws", Box::new(|| closure_laws(&corpus))),
        ("hereditary sets and ideals", Box::new(|| hereditary_suite(&corpus))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
