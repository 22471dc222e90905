//! Keeps the hand-maintained `include/mblvqe.h` in sync with the exported
//! symbols: every `#[no_mangle]` function must be declared in the header,
//! and every `mblvqe_`-prefixed declaration must exist in the source.

use std::collections::BTreeSet;

fn exported_symbols(source: &str) -> BTreeSet<String> {
    let mut symbols = BTreeSet::new();
    let mut pending = false;
    for line in source.lines() {
        let trimmed = line.trim();
        if trimmed.starts_with("#[no_mangle]") {
            pending = true;
            continue;
        }
        if pending {
            if let Some(rest) = trimmed.split("fn ").nth(1) {
                let name: String = rest
                    .chars()
                    .take_while(|c| c.is_alphanumeric() || *c == '_')
                    .collect();
                symbols.insert(name);
                pending = false;
            }
        }
    }
    symbols
}

fn declared_symbols(header: &str) -> BTreeSet<String> {
    let mut symbols = BTreeSet::new();
    for token in header.split(|c: char| !(c.is_alphanumeric() || c == '_')) {
        if token.starts_with("mblvqe_") {
            symbols.insert(token.to_string());
        }
    }
    symbols
}

#[test]
fn every_export_is_declared_and_vice_versa() {
    let source = include_str!("../src/lib.rs");
    let header = include_str!("../include/mblvqe.h");
    let exported = exported_symbols(source);
    assert!(!exported.is_empty());

    let declared = declared_symbols(header);
    for symbol in &exported {
        assert!(declared.contains(symbol), "{symbol} exported but missing from mblvqe.h");
    }

    // Header tokens that look like functions (followed by '(') must exist in
    // the source; type/enum names are exempt.
    let mut header_functions = BTreeSet::new();
    for (idx, _) in header.match_indices("mblvqe_") {
        let tail = &header[idx..];
        let name: String = tail
            .chars()
            .take_while(|c| c.is_alphanumeric() || *c == '_')
            .collect();
        let after = tail[name.len()..].trim_start();
        if after.starts_with('(') {
            header_functions.insert(name);
        }
    }
    for symbol in &header_functions {
        assert!(exported.contains(symbol), "{symbol} declared in mblvqe.h but not exported");
    }
    assert_eq!(exported, header_functions, "header and exports out of sync");
}

#[test]
fn header_is_valid_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/mblvqe.h");
    match std::process::Command::new("cc")
        .args(["-fsyntax-only", "-std=c99", "-Wall", "-Werror", header])
        .status()
    {
        Ok(status) => assert!(status.success(), "cc rejected mblvqe.h"),
        // No C compiler on this machine; the sync test above still runs.
        Err(_) => eprintln!("skipping: no cc in PATH"),
    }
}
