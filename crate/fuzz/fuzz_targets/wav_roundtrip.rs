#![no_main]

use fapanc_cli::wav::Wav;
use libfuzzer_sys::fuzz_target;

// Any file the decoder accepts must survive decode -> reals -> encode -> decode.
fuzz_target!(|data: &[u8]| {
    let Ok(wav) = Wav::decode(data) else { return };
    let (again, clipped) = Wav::from_real(wav.sample_rate, &wav.to_real());
    assert_eq!(clipped, 0);
    assert_eq!(again, wav);
    assert_eq!(Wav::decode(&again.encode()).unwrap(), wav);
});
