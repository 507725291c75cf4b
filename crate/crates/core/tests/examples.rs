//! Runs every cargo example's `main`.

macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($name), ".rs"));

            #[test]
            fn runs() {
                main();
            }
        }
    };
}

example!(decode_encode);
example!(run_program);
example!(jalr_spec);
example!(frame_check);
example!(csr_rmw);
example!(directed_corpus);
example!(fuzz_smoke);
