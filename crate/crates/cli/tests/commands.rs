use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use clap::Parser;
use proptest::prelude::*;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use irrcode_cli::seqfile::{SequenceFile, Symbols};
use irrcode_cli::{run, Cli, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};

fn irrcode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_irrcode"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout_of(args: &[&str]) -> String {
    let out = irrcode(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap().trim().to_string()
}

fn in_process(args: &[&str]) -> (u8, String) {
    let cli = Cli::try_parse_from(std::iter::once("irrcode").chain(args.iter().copied())).unwrap();
    let mut buf = Vec::new();
    let code = run(cli, &mut buf).unwrap();
    (code, String::from_utf8(buf).unwrap())
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn count_examples() {
    assert_eq!(stdout_of(&["count", "-n", "6", "-q", "3", "-k", "2"]), "48");
    assert_eq!(stdout_of(&["count", "-n", "2", "-q", "4", "-k", "2"]), "12");
    assert_eq!(stdout_of(&["count", "-n", "0", "-q", "3", "-k", "3"]), "1");
}

#[test]
fn rate_reports() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout_of(&["rate", "-q", "3", "-k", "2"])).unwrap();
    assert_eq!(format!("{:.4}", v["rate"].as_f64().unwrap()), "0.4380");
    assert!(v.get("ell").is_none());
    let v: serde_json::Value =
        serde_json::from_str(&stdout_of(&["rate", "-q", "7", "-k", "3"])).unwrap();
    assert_eq!(format!("{:.4}", v["rate"].as_f64().unwrap()), "0.9063");
    assert!((v["rate"].as_f64().unwrap() - 0.9062).abs() < 1e-4);
    let v: serde_json::Value =
        serde_json::from_str(&stdout_of(&["rate", "-q", "3", "-k", "2", "-e", "0.05"])).unwrap();
    assert_eq!((v["ell"].as_u64(), v["m"].as_u64()), (Some(6), Some(15)));
    for key in ["lambda", "kappa"] {
        assert!(v[key].as_f64().unwrap() > 0.0);
    }
}

#[test]
fn rank_and_unrank() {
    assert_eq!(
        stdout_of(&["unrank", "-n", "6", "-q", "3", "-k", "2", "-j", "40"]),
        "202101"
    );
    assert_eq!(
        stdout_of(&["rank", "-q", "3", "-k", "2", "-w", "202101"]),
        "40"
    );
    assert_eq!(
        stdout_of(&["unrank", "-n", "6", "-q", "4", "-k", "3", "-j", "1", "--dna"]).len(),
        6
    );
    for j in [1u32, 17, 99, 300] {
        let (_, w) = in_process(&[
            "unrank",
            "-n",
            "9",
            "-q",
            "4",
            "-k",
            "3",
            "-j",
            &j.to_string(),
        ]);
        let (_, r) = in_process(&["rank", "-q", "4", "-k", "3", "-w", w.trim()]);
        assert_eq!(r.trim(), j.to_string());
    }
}

#[test]
fn exit_codes() {
    assert_eq!(
        irrcode(&["count", "-q", "2", "-n", "3"]).status.code(),
        Some(i32::from(EXIT_USAGE))
    );
    assert_eq!(
        irrcode(&["bogus"]).status.code(),
        Some(i32::from(EXIT_USAGE))
    );
    assert_eq!(
        irrcode(&["rank", "-q", "3", "-w", "0110"]).status.code(),
        Some(i32::from(EXIT_FAILURE))
    );
    let (code, report) = in_process(&[
        "verify", "--scope", "delta", "-q", "3", "-k", "2", "--m", "3",
    ]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert_eq!(v["checks"][0]["actual"], "3");
    assert_eq!(v["passed"], true);
}

#[test]
fn verify_scopes() {
    let (code, report) = in_process(&["verify", "--scope", "counts", "-q", "3"]);
    assert_eq!(code, EXIT_OK, "{report}");
    let (code, report) = in_process(&["verify", "--scope", "roots", "-n", "5", "--depth", "3"]);
    assert_eq!(code, EXIT_OK, "{report}");
    let (code, report) = in_process(&["verify", "--scope", "delta", "-k", "3"]);
    assert_eq!(code, EXIT_OK, "{report}");
    assert!(report.contains("m=7"));
    let tight =
        Cli::try_parse_from(["irrcode", "verify", "--scope", "counts", "--budget", "10"]).unwrap();
    assert!(run(tight, &mut Vec::new()).is_err());
}

#[test]
fn fse_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.bin");
    let enc = dir.path().join("enc.txt");
    let noisy = dir.path().join("noisy.txt");
    let out = dir.path().join("out.bin");
    let mut data = vec![0u8; 1024];
    ChaCha8Rng::seed_from_u64(1).fill_bytes(&mut data);
    fs::write(&input, &data).unwrap();
    let sys = ["-q", "4", "-k", "3", "-e", "0.1", "--dna"];
    stdout_of(&[&["encode", "-i", p(&input), "-o", p(&enc)][..], &sys[..]].concat());
    stdout_of(&[&["decode", "-i", p(&enc), "-o", p(&out)][..], &sys[..]].concat());
    assert_eq!(fs::read(&out).unwrap(), data);

    // the encoded sequence is irreducible, so duplications are undone by the root
    stdout_of(&[
        "channel",
        "-q",
        "4",
        "-k",
        "3",
        "--dna",
        "-t",
        "30",
        "-i",
        p(&enc),
        "-o",
        p(&noisy),
    ]);
    stdout_of(&[&["decode", "-i", p(&noisy), "-o", p(&out)][..], &sys[..]].concat());
    assert_eq!(fs::read(&out).unwrap(), data);
}

#[test]
fn empty_payload() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("empty.bin");
    let enc = dir.path().join("enc.txt");
    let out = dir.path().join("out.bin");
    fs::write(&input, b"").unwrap();
    for mode in [
        &["--mode", "fse", "--ell", "1", "--m", "3"][..],
        &["--mode", "code", "-n", "8"][..],
    ] {
        stdout_of(&[&["encode", "-i", p(&input), "-o", p(&enc)][..], mode].concat());
        assert!(!fs::read_to_string(&enc).unwrap().is_empty());
        stdout_of(&[&["decode", "-i", p(&enc), "-o", p(&out)][..], mode].concat());
        assert!(fs::read(&out).unwrap().is_empty());
    }
}

#[test]
fn digit_mode_round_trips_for_small_alphabets() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.bin");
    let enc = dir.path().join("enc.txt");
    let out = dir.path().join("out.bin");
    let data: Vec<u8> = (0..200).map(|i| (i * 91 % 256) as u8).collect();
    fs::write(&input, &data).unwrap();
    for q in ["3", "5", "10"] {
        for (k, mode) in [
            ("2", ["--mode", "code", "-n", "12"]),
            ("3", ["--mode", "fse", "-e", "0.2"]),
        ] {
            let flags = [&["-q", q, "-k", k][..], &mode[..]].concat();
            stdout_of(&[&["encode", "-i", p(&input), "-o", p(&enc)][..], &flags[..]].concat());
            stdout_of(&[&["decode", "-i", p(&enc), "-o", p(&out)][..], &flags[..]].concat());
            assert_eq!(fs::read(&out).unwrap(), data, "q={q} k={k}");
        }
    }
}

#[test]
fn channel_accounting() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.txt");
    let out = dir.path().join("out.txt");
    fs::write(&input, "0121\n\n2102012\n010\n").unwrap();
    stdout_of(&[
        "channel",
        "-q",
        "3",
        "-k",
        "3",
        "-t",
        "0",
        "-i",
        p(&input),
        "-o",
        p(&out),
    ]);
    assert_eq!(fs::read_to_string(&out).unwrap(), "0121\n2102012\n010\n");

    stdout_of(&[
        "channel",
        "-q",
        "3",
        "-k",
        "2",
        "-t",
        "5",
        "--seed",
        "9",
        "-i",
        p(&input),
        "-o",
        p(&out),
    ]);
    let lines: Vec<String> = fs::read_to_string(&out)
        .unwrap()
        .lines()
        .map(String::from)
        .collect();
    for (orig, noisy) in ["0121", "2102012", "010"].iter().zip(&lines) {
        // each duplication adds between 1 and k symbols
        assert!(noisy.len() >= orig.len() + 5 && noisy.len() <= orig.len() + 10);
    }
    let again = irrcode(&[
        "channel",
        "-q",
        "3",
        "-k",
        "2",
        "-t",
        "5",
        "--seed",
        "9",
        "-i",
        p(&input),
    ]);
    assert_eq!(
        String::from_utf8(again.stdout).unwrap(),
        lines.join("\n") + "\n"
    );
}

#[test]
fn corrupt_input_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.txt");
    fs::write(&input, "00000000\n\n0121x\n").unwrap();
    let out = irrcode(&["decode", "--mode", "code", "-n", "8", "-i", p(&input)]);
    assert_eq!(out.status.code(), Some(i32::from(EXIT_FAILURE)));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    fs::write(&input, "00000000\n\n012012012\n").unwrap();
    let out = irrcode(&["decode", "--mode", "code", "-n", "8", "-i", p(&input)]);
    assert_eq!(out.status.code(), Some(i32::from(EXIT_FAILURE)));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

proptest! {
    #[test]
    fn dna_files_round_trip(lines in prop::collection::vec(prop::collection::vec(0u8..4, 1..30), 0..8)) {
        let words: Vec<_> = lines
            .into_iter()
            .map(|s| irrcode_core::Word::new(s, 4).unwrap())
            .collect();
        let file = SequenceFile::from_words(words.clone());
        let text = file.render(Symbols::Dna);
        prop_assert!(text.chars().all(|c| "ACGT\n".contains(c)));
        let back = SequenceFile::parse(&text, 4, Symbols::Dna).unwrap();
        prop_assert_eq!(back.words, words);
    }
}
