#![no_main]

use clap::Parser;
use fapanc::anc::NoiseKind;
use fapanc::{Algorithm, SelectionNorm};
use fapanc_cli::args::Cli;
use libfuzzer_sys::fuzz_target;

// NUL-separated argv; also feeds every token to the value parsers.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let argv: Vec<&str> = std::iter::once("fapanc").chain(text.split('\0')).collect();
    for token in &argv {
        let _ = token.parse::<Algorithm>();
        let _ = token.parse::<SelectionNorm>();
        let _ = token.parse::<NoiseKind>();
    }
    let _ = Cli::try_parse_from(argv);
});
