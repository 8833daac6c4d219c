use super::TruthTable;

/// Walsh spectrum `W(a) = sum_x (-1)^(f(x) + a.x)` by the in-place butterfly.
pub fn walsh_transform(f: &TruthTable) -> Vec<i32> {
    let mut w: Vec<i32> = (0..f.len()).map(|x| if f.get(x) { -1 } else { 1 }).collect();
    let mut h = 1;
    while h < w.len() {
        for block in w.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (s, d) = (*a + *b, *a - *b);
                *a = s;
                *b = d;
            }
        }
        h *= 2;
    }
    w
}

/// Walsh spectrum straight from the definition, `O(4^n)`.
pub fn walsh_naive(f: &TruthTable) -> Vec<i32> {
    (0..f.len())
        .map(|a| {
            (0..f.len())
                .map(|x| {
                    let parity = f.get(x) as u32 + (a & x).count_ones();
                    if parity.is_multiple_of(2) {
                        1
                    } else {
                        -1
                    }
                })
                .sum()
        })
        .collect()
}

/// Binary Möbius transform: truth table <-> ANF coefficient table. It is an
/// involution.
pub fn mobius_transform(f: &TruthTable) -> TruthTable {
    let mut t = f.clone();
    let n = t.n();
    // Within-word strides.
    const MASKS: [u64; 6] = [
        0x5555_5555_5555_5555,
        0x3333_3333_3333_3333,
        0x0f0f_0f0f_0f0f_0f0f,
        0x00ff_00ff_00ff_00ff,
        0x0000_ffff_0000_ffff,
        0x0000_0000_ffff_ffff,
    ];
    for (i, &m) in MASKS.iter().enumerate().take(n.min(6)) {
        let s = 1u32 << i;
        for w in t.words.iter_mut() {
            *w ^= (*w & m) << s;
        }
    }
    let mut stride = 1;
    for _ in 6..n {
        for block in t.words.chunks_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a, b) in lo.iter().zip(hi.iter_mut()) {
                *b ^= *a;
            }
        }
        stride *= 2;
    }
    if n < 6 {
        t.words[0] &= (1u64 << (1 << n)) - 1;
    }
    t
}
