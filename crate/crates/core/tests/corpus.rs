//! Replays the fuzz corpus seeds through the parsers.

use std::fs;
use std::path::PathBuf;

use gft_core::parse::{parse_int_list, parse_real_list};
use gft_core::{SchlichtSeries, TruncatedSeries};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| {
            let path = entry.unwrap().path();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            (name, fs::read_to_string(&path).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

#[test]
fn series_seeds() {
    for (name, text) in seeds("series_json") {
        let parsed = TruncatedSeries::from_json(&text);
        match name.as_str() {
            "short" | "overflow" => assert!(parsed.is_err(), "{name}"),
            _ => {
                let s = parsed.unwrap();
                assert_eq!(TruncatedSeries::from_json(&s.to_json()).unwrap(), s);
            }
        }
    }
}

#[test]
fn schlicht_seeds() {
    for (name, text) in seeds("schlicht_json") {
        let parsed = SchlichtSeries::from_json(&text);
        assert_eq!(parsed.is_err(), name == "not_normalized", "{name}");
    }
}

#[test]
fn list_seeds() {
    for (name, text) in seeds("lattice_list") {
        let reals = parse_real_list(&text);
        match name.as_str() {
            "sigmas" => assert_eq!(reals.unwrap(), vec![0.5, 1.0, 2.0, 3.5, 9.0]),
            "ns" => assert_eq!(parse_int_list(&text).unwrap(), vec![0, 1, 2]),
            _ => assert!(reals.is_err(), "{name}"),
        }
    }
}
