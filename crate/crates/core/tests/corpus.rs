//! Replays the checked-in fuzz seeds through the same round trips the fuzz
//! targets assert.

use std::path::PathBuf;

use walkfilter::filter_pipeline::{parse_pseudo, write_pseudo};
use walkfilter::graph::parse_graph;
use walkfilter::numerics::format::{parse_series, write_series};
use walkfilter::numerics::PrecisionReal;
use walkfilter::schedule::{parse_profile, validate_profile, DEFAULT_MARGIN_BITS};

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| {
            let path = e.unwrap().path();
            (
                path.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&path).unwrap(),
            )
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "{target}");
    out
}

fn accepted(results: &[(String, bool)]) -> usize {
    results.iter().filter(|(_, ok)| *ok).count()
}

#[test]
fn graph_seeds() {
    let r: Vec<_> = seeds("parse_graph")
        .into_iter()
        .map(|(name, data)| {
            let parsed = parse_graph(&data);
            if let Ok(g) = &parsed {
                assert_eq!(&parse_graph(g.to_text().as_bytes()).unwrap(), g, "{name}");
            }
            (name, parsed.is_ok())
        })
        .collect();
    assert_eq!(accepted(&r), r.len() - 2);
}

#[test]
fn series_seeds() {
    let r: Vec<_> = seeds("parse_series")
        .into_iter()
        .map(|(name, data)| {
            let parsed = parse_series(&data);
            if let Ok(s) = &parsed {
                assert_eq!(&parse_series(write_series(s).as_bytes()).unwrap(), s, "{name}");
                // writer output is canonical; hand seeds may spell -0
                if !name.starts_with("hand") {
                    assert_eq!(write_series(s).as_bytes(), &data[..], "{name}");
                }
            }
            (name, parsed.is_ok())
        })
        .collect();
    assert_eq!(accepted(&r), r.len() - 1);
}

#[test]
fn profile_seeds() {
    let r: Vec<_> = seeds("parse_profile")
        .into_iter()
        .map(|(name, data)| {
            let parsed = parse_profile(&data);
            if let Ok(p) = &parsed {
                assert_eq!(&parse_profile(p.to_text().as_bytes()).unwrap(), p, "{name}");
                validate_profile(p, DEFAULT_MARGIN_BITS);
            }
            (name, parsed.is_ok())
        })
        .collect();
    assert_eq!(accepted(&r), r.len() - 1);
}

#[test]
fn pseudo_seeds() {
    let r: Vec<_> = seeds("parse_pseudo")
        .into_iter()
        .map(|(name, data)| {
            let parsed = parse_pseudo(&data);
            if let Ok(p) = &parsed {
                assert_eq!(write_pseudo(p).as_bytes(), &data[..], "{name}");
            }
            (name, parsed.is_ok())
        })
        .collect();
    assert_eq!(accepted(&r), r.len() - 1);
}

#[test]
fn hex_seeds() {
    let mut ok = 0;
    for (name, data) in seeds("parse_hex") {
        let (&p, rest) = data.split_first().unwrap();
        let prec = 16 + u32::from(p) * 4;
        if let Ok(x) = PrecisionReal::parse_hex(std::str::from_utf8(rest).unwrap(), prec) {
            assert_eq!(PrecisionReal::parse_hex(&x.to_hex(), prec).unwrap(), x, "{name}");
            ok += 1;
        }
    }
    assert!(ok >= 3);
}
