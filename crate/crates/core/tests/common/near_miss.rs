//! Near-miss inputs: catalog sources with one targeted defect, and where the
//! parser must report it.

use nichols_core::presdsl::{catalog, catalog_names, catalog_source, parse, DslError};
use proptest::prelude::*;
use proptest::test_runner::{RngAlgorithm, TestRng, TestRunner};

#[derive(Debug, Clone)]
pub enum Mutation {
    /// A character outside the grammar at this byte offset of a `rel` line.
    Stray(usize, char),
    /// The k-th `yN` of a `rel` line renamed past theta.
    BadGenerator(usize, u32),
    /// The k-th closing `)` or `]` of a `rel` line removed.
    DropClose(usize),
    /// The `rel` line repeated.
    Duplicate,
    /// The stratum token misspelled.
    BadStratum,
}

#[derive(Debug, PartialEq)]
enum Expect {
    At(usize, usize),
    Line(usize),
}

fn code_part(line: &str) -> &str {
    line.split('#').next().unwrap()
}

/// Applies `m` to the `k`-th relation line; `None` if the mutation does not
/// apply to that line.
fn mutate(src: &str, k: usize, m: &Mutation, theta: usize) -> Option<(String, Expect)> {
    let mut lines: Vec<String> = src.lines().map(str::to_string).collect();
    let rel_lines: Vec<usize> = (0..lines.len()).filter(|&i| lines[i].starts_with("rel ")).collect();
    let at = rel_lines[k % rel_lines.len()];
    let line = lines[at].clone();
    let code = code_part(&line);
    let lineno = at + 1;
    let expect = match m {
        Mutation::Stray(off, c) => {
            // past `rel `, on a char boundary inside the code part
            let off = 4 + off % (code.len() - 3);
            if !code.is_char_boundary(off) {
                return None;
            }
            lines[at] = format!("{}{c}{}", &line[..off], &line[off..]);
            Expect::At(lineno, line[..off].chars().count() + 1)
        }
        Mutation::BadGenerator(nth, n) => {
            let hits: Vec<usize> = code
                .match_indices('y')
                .map(|(i, _)| i)
                .filter(|&i| {
                    let before = code[..i].chars().last();
                    let digits: String = code[i + 1..].chars().take_while(char::is_ascii_digit).collect();
                    !before.is_some_and(|b| b.is_ascii_alphanumeric() || b == '_') && digits.len() == 1
                })
                .collect();
            if hits.is_empty() {
                return None;
            }
            let i = hits[nth % hits.len()];
            let n = theta as u32 + 1 + n % (9 - theta as u32);
            lines[at] = format!("{}y{n}{}", &line[..i], &line[i + 2..]);
            Expect::At(lineno, line[..i].chars().count() + 1)
        }
        Mutation::DropClose(nth) => {
            let hits: Vec<usize> = code.match_indices([')', ']']).map(|(i, _)| i).collect();
            if hits.is_empty() {
                return None;
            }
            let i = hits[nth % hits.len()];
            lines[at] = format!("{}{}", &line[..i], &line[i + 1..]);
            Expect::Line(lineno)
        }
        Mutation::Duplicate => {
            lines.insert(at + 1, line.clone());
            Expect::Line(lineno + 1)
        }
        Mutation::BadStratum => {
            let i = line.find(" s").unwrap() + 1;
            lines[at] = format!("{}t{}", &line[..i], &line[i + 1..]);
            Expect::At(lineno, i + 1)
        }
    };
    Some((lines.join("\n") + "\n", expect))
}

pub fn position(e: &DslError) -> Option<(usize, Option<usize>)> {
    match e {
        DslError::SyntaxError { line, col, .. }
        | DslError::UnknownGenerator { line, col, .. }
        | DslError::NonHomogeneousBracket { line, col } => Some((*line, Some(*col))),
        DslError::DuplicateRelationName { line, .. } => Some((*line, None)),
        DslError::UnknownCatalogEntry(_) => None,
    }
}

pub fn arb_mutation() -> impl Strategy<Value = Mutation> {
    prop_oneof![
        (any::<usize>(), prop::sample::select(vec!['@', '$', '%', '!', '?', '{', '}', '~', '&'])).prop_map(|(o, c)| Mutation::Stray(o, c)),
        (any::<usize>(), any::<u32>()).prop_map(|(i, n)| Mutation::BadGenerator(i, n)),
        any::<usize>().prop_map(Mutation::DropClose),
        Just(Mutation::Duplicate),
        Just(Mutation::BadStratum),
    ]
}

/// Runs `cases` mutations drawn from a fixed seed.
pub fn run(cases: u32) -> Result<(), String> {
    let names: Vec<&str> = catalog_names().collect();
    let mut runner = TestRunner::new_with_rng(
        ProptestConfig {
            cases,
            failure_persistence: None,
            ..ProptestConfig::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    let strategy = (prop::sample::select(names), any::<usize>(), arb_mutation());
    runner
        .run(&strategy, |(name, k, m)| {
            let src = catalog_source(name).unwrap();
            let theta = catalog(name).unwrap().theta();
            let Some((text, expect)) = mutate(src, k, &m, theta) else {
                return Err(TestCaseError::reject("mutation does not apply"));
            };
            let err = parse(&text).expect_err("near miss accepted");
            let (line, col) = position(&err).expect("error without a position");
            let width = text.lines().nth(line - 1).map_or(0, |l| l.chars().count());
            match expect {
                Expect::At(l, c) => {
                    prop_assert_eq!((line, col), (l, Some(c)), "{}", err);
                }
                Expect::Line(l) => {
                    prop_assert_eq!(line, l, "{}", err);
                    if let Some(c) = col {
                        prop_assert!((1..=width + 1).contains(&c), "{}", err);
                    }
                }
            }
            let prefix = format!("line {line}");
            prop_assert!(err.to_string().starts_with(&prefix));
            Ok(())
        })
        .map_err(|e| e.to_string())
}
