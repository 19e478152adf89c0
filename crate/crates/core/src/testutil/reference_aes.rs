//! Straightforward byte-oriented AES-128 encryption, used only as an
//! independent oracle for the keystream tests.

#![allow(clippy::needless_range_loop)]

fn xtime(b: u8) -> u8 {
    (b << 1) ^ if b & 0x80 != 0 { 0x1b } else { 0 }
}

fn gmul(mut a: u8, mut b: u8) -> u8 {
    let mut p = 0u8;
    while b != 0 {
        if b & 1 != 0 {
            p ^= a;
        }
        a = xtime(a);
        b >>= 1;
    }
    p
}

fn ginv(a: u8) -> u8 {
    if a == 0 {
        return 0;
    }
    (1..=255u8).find(|&x| gmul(a, x) == 1).unwrap()
}

fn sbox(a: u8) -> u8 {
    let b = ginv(a);
    b ^ b.rotate_left(1) ^ b.rotate_left(2) ^ b.rotate_left(3) ^ b.rotate_left(4) ^ 0x63
}

fn expand_key(key: &[u8; 16]) -> [[u8; 16]; 11] {
    let mut w = [[0u8; 4]; 44];
    for i in 0..4 {
        w[i].copy_from_slice(&key[4 * i..4 * i + 4]);
    }
    let mut rcon = 1u8;
    for i in 4..44 {
        let mut t = w[i - 1];
        if i % 4 == 0 {
            t = [sbox(t[1]) ^ rcon, sbox(t[2]), sbox(t[3]), sbox(t[0])];
            rcon = xtime(rcon);
        }
        for j in 0..4 {
            w[i][j] = w[i - 4][j] ^ t[j];
        }
    }
    let mut rk = [[0u8; 16]; 11];
    for r in 0..11 {
        for c in 0..4 {
            rk[r][4 * c..4 * c + 4].copy_from_slice(&w[4 * r + c]);
        }
    }
    rk
}

pub fn encrypt_block(key: &[u8; 16], input: &[u8; 16]) -> [u8; 16] {
    let rk = expand_key(key);
    // state[r + 4c], column-major as in FIPS-197
    let mut s = *input;
    let add = |s: &mut [u8; 16], k: &[u8; 16]| s.iter_mut().zip(k).for_each(|(a, b)| *a ^= b);
    add(&mut s, &rk[0]);
    for round in 1..=10 {
        for b in s.iter_mut() {
            *b = sbox(*b);
        }
        let prev = s;
        for r in 1..4 {
            for c in 0..4 {
                s[r + 4 * c] = prev[r + 4 * ((c + r) % 4)];
            }
        }
        if round != 10 {
            for c in 0..4 {
                let col = [s[4 * c], s[4 * c + 1], s[4 * c + 2], s[4 * c + 3]];
                for r in 0..4 {
                    s[4 * c + r] = gmul(col[r], 2) ^ gmul(col[(r + 1) % 4], 3) ^ col[(r + 2) % 4] ^ col[(r + 3) % 4];
                }
            }
        }
        add(&mut s, &rk[round]);
    }
    s
}

#[test]
fn fips197_appendix_c1() {
    let key: [u8; 16] = core::array::from_fn(|i| i as u8);
    let pt: [u8; 16] = core::array::from_fn(|i| (i as u8) * 0x11);
    assert_eq!(hex::encode(encrypt_block(&key, &pt)), "69c4e0d86a7b0430d8cdb78070b4c55a");
}
