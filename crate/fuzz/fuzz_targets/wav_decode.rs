#![no_main]

use fapanc_cli::wav::Wav;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(wav) = Wav::decode(data) {
        let real = wav.to_real();
        assert!(real.iter().all(|v| (-1.0..1.0).contains(v)));
    }
});
