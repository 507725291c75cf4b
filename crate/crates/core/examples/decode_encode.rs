// Decode raw instruction words, print them, and encode them back.

use rv32i::{decode, encode, DecodeResult};

fn main() {
    let words = [
        0x0000_0013, // addi x0, x0, 0
        0x0042_80E7, // jalr x1, 4(x5)
        0xFE20_8EE3, // beq x1, x2, -4
        0x3051_10F3, // csrrw x1, mtvec, x2
        0x0000_0000,
        0xFFFF_FFFF,
    ];
    for w in words {
        match decode(w) {
            DecodeResult::Valid(i) => {
                let back = encode(&i);
                println!("{w:#010x}  {:<24} re-encodes to {back:#010x}", i.to_string());
                assert_eq!(back, w);
            }
            DecodeResult::Illegal(raw) => println!("{raw:#010x}  illegal"),
        }
    }
}
