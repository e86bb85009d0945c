use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context};
use irrcode_core::enumeration::{
    asymptotic_rate, choose_params, closed_form_mismatches, count_irr, min_out_degree, FseParams,
};
use irrcode_core::oracle::{
    all_roots_bfs, descendants_bfs, enumerate_irr_bruteforce, min_outdegree_bruteforce,
    OracleBudget,
};
use irrcode_core::{
    random_descendant, root, Backend, BigUint, CodeSpec, DupSystem, Error, FseCodec, Ranker,
    TdCodec,
};
use serde::Serialize;
use serde_json::json;
use thiserror::Error as ThisError;

use crate::args::{Cli, CodecArgs, Command, IoArgs, Mode, Scope, SystemArgs};
use crate::payload::{
    bit_groups_to_bytes, bytes_to_bit_groups, bytes_to_digits, digits_to_bytes, FramedPayload,
};
use crate::seqfile::{SequenceFile, Symbols};

/// Process exit statuses.
pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// A request that cannot be served as given.
#[derive(Debug, ThisError)]
#[error("{0}")]
pub struct UsageError(pub String);

fn usage<T>(msg: impl Into<String>) -> anyhow::Result<T> {
    Err(UsageError(msg.into()).into())
}

/// Exit status for an error returned by [`run`].
pub fn exit_code_for(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return EXIT_USAGE;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::InvalidInput(_)) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

impl SystemArgs {
    fn system(self) -> anyhow::Result<DupSystem> {
        Ok(DupSystem::new(self.q, self.k)?)
    }
}

fn read_input(io: &IoArgs) -> anyhow::Result<Vec<u8>> {
    match &io.input {
        Some(p) => fs::read(p).with_context(|| format!("reading {}", p.display())),
        None => {
            let mut buf = Vec::new();
            io::stdin().read_to_end(&mut buf)?;
            Ok(buf)
        }
    }
}

fn write_output(io: &IoArgs, out: &mut dyn Write, bytes: &[u8]) -> anyhow::Result<()> {
    match &io.output {
        Some(p) => write_file(p, bytes),
        None => Ok(out.write_all(bytes)?),
    }
}

fn write_file(p: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    fs::write(p, bytes).with_context(|| format!("writing {}", p.display()))
}

fn read_sequences(io: &IoArgs, q: u16, symbols: Symbols) -> anyhow::Result<SequenceFile> {
    let raw = read_input(io)?;
    let text = String::from_utf8(raw).context("sequence file is not UTF-8")?;
    Ok(SequenceFile::parse(&text, q, symbols)?)
}

/// Runs one command, writing standard output to `out`; returns the exit status.
pub fn run(cli: Cli, out: &mut dyn Write) -> anyhow::Result<u8> {
    match cli.command {
        Command::Count { sys, n, json } => {
            let c = count_irr(n, sys.system()?);
            if json {
                writeln!(
                    out,
                    "{}",
                    json!({"q": sys.q, "k": sys.k, "n": n, "count": c.to_string()})
                )?;
            } else {
                writeln!(out, "{c}")?;
            }
        }
        Command::Rate { sys, epsilon } => {
            let s = sys.system()?;
            let info = asymptotic_rate(s)?;
            let mut report = json!({
                "q": sys.q,
                "k": sys.k,
                "lambda": info.growth,
                "rate": info.rate,
                "kappa": info.degree_constant,
            });
            if let Some(eps) = epsilon {
                let p = choose_params(eps, s)?;
                report["epsilon"] = json!(eps);
                report["ell"] = json!(p.ell);
                report["m"] = json!(p.m);
                report["encoder_rate"] = json!(p.rate());
            }
            writeln!(out, "{report}")?;
        }
        Command::Rank {
            sys,
            word,
            n,
            dna,
            json,
        } => {
            let s = sys.system()?;
            let symbols = Symbols::for_alphabet(sys.q, dna)?;
            let w = symbols.parse_word(&word, sys.q, 1)?;
            if let Some(n) = n {
                if n != w.len() {
                    return usage(format!("word has length {}, not {n}", w.len()));
                }
            }
            let r = Ranker::new(s, w.len())?.rank(&w)?;
            if json {
                writeln!(out, "{}", json!({"word": word, "rank": r.to_string()}))?;
            } else {
                writeln!(out, "{r}")?;
            }
        }
        Command::Unrank {
            sys,
            n,
            j,
            dna,
            json,
        } => {
            let s = sys.system()?;
            let symbols = Symbols::for_alphabet(sys.q, dna)?;
            let Ok(j) = BigUint::from_str(&j) else {
                return usage(format!("rank {j:?} is not a non-negative integer"));
            };
            let w = Ranker::new(s, n)?.unrank(n, &j)?;
            let text = symbols.format_word(&w);
            if json {
                writeln!(out, "{}", json!({"rank": j.to_string(), "word": text}))?;
            } else {
                writeln!(out, "{text}")?;
            }
        }
        Command::Encode(args) => encode(&args, out)?,
        Command::Decode(args) => decode(&args, out)?,
        Command::Channel {
            sys,
            t,
            seed,
            dna,
            io,
        } => {
            let s = sys.system()?;
            let symbols = Symbols::for_alphabet(sys.q, dna)?;
            let file = read_sequences(&io, sys.q, symbols)?;
            let words = file
                .words
                .iter()
                .enumerate()
                .map(|(i, w)| random_descendant(w, t, s, seed.wrapping_add(i as u64)).map(|r| r.0))
                .collect::<Result<Vec<_>, _>>()?;
            let text = SequenceFile::from_words(words).render(symbols);
            write_output(&io, out, text.as_bytes())?;
        }
        Command::Verify {
            scope,
            q,
            k,
            n,
            m,
            depth,
            budget,
            json: _,
        } => {
            let mut b = OracleBudget::default();
            if let Some(words) = budget {
                b.max_words = words;
            }
            let ks = match k {
                Some(k) => vec![k],
                None => vec![2, 3],
            };
            let report = verify(scope, q, &ks, n, m, depth, &b)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            return Ok(if report.passed { EXIT_OK } else { EXIT_FAILURE });
        }
    }
    Ok(EXIT_OK)
}

fn fse_params(args: &CodecArgs, sys: DupSystem) -> anyhow::Result<FseParams> {
    match (args.ell, args.m) {
        (Some(ell), Some(m)) => {
            if args.epsilon.is_some() {
                return usage("give either --epsilon or --ell/--m, not both");
            }
            Ok(FseParams::new(sys, ell, m)?)
        }
        _ => Ok(choose_params(args.epsilon.unwrap_or(0.1), sys)?),
    }
}

fn code_length(args: &CodecArgs) -> anyhow::Result<usize> {
    match args.n {
        Some(n) => Ok(n),
        None => usage("code mode needs the codeword length -n"),
    }
}

/// Bits carried by one codeword: `⌊log2 |C|⌋`.
fn bits_per_codeword(codec: &TdCodec) -> anyhow::Result<usize> {
    let bits = codec.size().bits().saturating_sub(1) as usize;
    if bits == 0 {
        return usage("codeword length too small to carry a bit");
    }
    Ok(bits)
}

fn encode(args: &CodecArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let sys = args.sys.system()?;
    let symbols = Symbols::for_alphabet(args.sys.q, args.dna)?;
    let framed = FramedPayload::new(read_input(&args.io)?).to_bytes();
    let words = match args.mode {
        Mode::Fse => {
            let params = fse_params(args, sys)?;
            let codec = FseCodec::new(params, Backend::RankBased)?;
            let mut digits = bytes_to_digits(&framed, args.sys.q);
            digits.resize(digits.len().div_ceil(params.ell) * params.ell, 0);
            vec![codec.encode_digits(&digits)?]
        }
        Mode::Code => {
            let codec = TdCodec::new(CodeSpec::new(sys, code_length(args)?)?)?;
            let width = bits_per_codeword(&codec)?;
            bytes_to_bit_groups(&framed, width)
                .into_iter()
                .map(|v| codec.encode(&(v + 1u32)))
                .collect::<Result<_, _>>()?
        }
    };
    let text = SequenceFile::from_words(words).render(symbols);
    write_output(&args.io, out, text.as_bytes())
}

fn decode(args: &CodecArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let sys = args.sys.system()?;
    let q = args.sys.q;
    let symbols = Symbols::for_alphabet(q, args.dna)?;
    let file = read_sequences(&args.io, q, symbols)?;
    let framed = match args.mode {
        Mode::Fse => {
            let params = fse_params(args, sys)?;
            let codec = FseCodec::new(params, Backend::RankBased)?;
            let [word] = file.words.as_slice() else {
                bail!(Error::Corrupt(format!(
                    "fse files hold exactly one sequence, found {}",
                    file.words.len()
                )));
            };
            let line = file.line_of(0);
            let word = root(word, sys)?;
            let digits = codec
                .decode_digits(&word)
                .with_context(|| format!("line {line}"))?;
            digits_to_bytes(&digits, q).with_context(|| format!("line {line}"))?
        }
        Mode::Code => {
            let codec = TdCodec::new(CodeSpec::new(sys, code_length(args)?)?)?;
            let width = bits_per_codeword(&codec)?;
            let groups = file
                .words
                .iter()
                .enumerate()
                .map(|(i, w)| {
                    let j = codec
                        .decode(w)
                        .with_context(|| format!("line {}", file.line_of(i)))?;
                    let v = j - 1u32;
                    if v.bits() > width as u64 {
                        bail!(Error::Corrupt(format!(
                            "line {}: message {v} exceeds {width} bits",
                            file.line_of(i)
                        )));
                    }
                    Ok(v)
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            bit_groups_to_bytes(&groups, width)
        }
    };
    let payload = FramedPayload::from_bytes(&framed)?;
    write_output(&args.io, out, &payload.data)
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub scope: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

fn check(name: String, expected: impl ToString, actual: impl ToString) -> Check {
    let (expected, actual) = (expected.to_string(), actual.to_string());
    Check {
        ok: expected == actual,
        name,
        expected,
        actual,
    }
}

/// Compares the fast algorithms with the brute-force oracles.
pub fn verify(
    scope: Scope,
    q: u16,
    ks: &[usize],
    n: Option<usize>,
    m: Option<usize>,
    depth: usize,
    budget: &OracleBudget,
) -> anyhow::Result<VerifyReport> {
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    for &k in ks {
        let sys = DupSystem::new(q, k)?;
        match scope {
            Scope::Counts => {
                let max_n = n.unwrap_or(if q == 3 { 10 } else { 8 });
                for len in 0..=max_n {
                    let brute = enumerate_irr_bruteforce(len, sys, budget)?.len();
                    checks.push(check(
                        format!("count q={q} k={k} n={len}"),
                        brute,
                        count_irr(len, sys),
                    ));
                }
            }
            Scope::Delta => {
                let base = if k == 2 { 3 } else { 5 };
                let ms = match m {
                    Some(m) => vec![m],
                    None => (base..base + 2).collect(),
                };
                for m in ms {
                    let brute = min_outdegree_bruteforce(m, sys, budget)?;
                    checks.push(check(
                        format!("delta q={q} k={k} m={m}"),
                        brute,
                        min_out_degree(m, sys)?,
                    ));
                }
                if k == 3 {
                    for d in closed_form_mismatches(q)? {
                        notes.push(format!(
                            "closed form for m={} gives {}, exact value is {} (exact value used)",
                            d.m, d.closed_form, d.exact
                        ));
                    }
                }
            }
            Scope::Roots => {
                let max_n = n.unwrap_or(6);
                let mut tested = 0usize;
                let mut failures = 0usize;
                for len in 1..=max_n {
                    for x in enumerate_irr_bruteforce(len, sys, budget)? {
                        for y in descendants_bfs(&x, depth, sys, budget)? {
                            let roots = all_roots_bfs(&y, sys, budget)?;
                            tested += 1;
                            let unique = roots.len() == 1 && roots.contains(&x);
                            if !unique || root(&y, sys)? != x {
                                failures += 1;
                            }
                        }
                    }
                }
                checks.push(check(
                    format!("unique roots q={q} k={k} n<={max_n} depth={depth} ({tested} words)"),
                    0,
                    failures,
                ));
            }
        }
    }
    let scope = format!("{scope:?}").to_lowercase();
    Ok(VerifyReport {
        scope,
        passed: checks.iter().all(|c| c.ok),
        checks,
        notes,
    })
}
