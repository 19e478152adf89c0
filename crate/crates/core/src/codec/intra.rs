//! HEVC-style intra prediction for 8x8 blocks: reference construction,
//! planar/DC/33 angular predictors, MPM derivation and mode decision.

use crate::frame::{FramePlane, BLOCK};
use crate::syntax::{IntraMode, ModeSyntax};

const N: usize = BLOCK;

pub type PredBlock = [[u8; N]; N];

/// Angle per mode, in 1/32 sample units.
pub const INTRA_PRED_ANGLE: [i32; 35] = [
    0, 0, // planar, DC
    32, 26, 21, 17, 13, 9, 5, 2, // 2..=9
    0, // 10 horizontal
    -2, -5, -9, -13, -17, -21, -26, // 11..=17
    -32, // 18
    -26, -21, -17, -13, -9, -5, -2, // 19..=25
    0,  // 26 vertical
    2, 5, 9, 13, 17, 21, 26, // 27..=33
    32, // 34
];

/// Inverse angles for modes 11..=25, (256 * 32) / angle.
const INV_ANGLE: [i32; 15] =
    [-4096, -1638, -910, -630, -482, -390, -315, -256, -315, -390, -482, -630, -910, -1638, -4096];

/// Neighbouring samples of one block after availability padding.
///
/// `above[0]` is the top-left corner, `above[1..=16]` the row above and
/// above-right. `left[0..16]` is the column to the left, top to bottom,
/// continuing into below-left.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReferenceSamples {
    pub above: [u8; 2 * N + 1],
    pub left: [u8; 2 * N],
}

impl ReferenceSamples {
    pub fn uniform(v: u8) -> Self {
        ReferenceSamples { above: [v; 2 * N + 1], left: [v; 2 * N] }
    }

    pub fn corner(&self) -> u8 {
        self.above[0]
    }
}

/// Gathers references for block `(bx, by)` of a raster-order reconstruction.
///
/// Left, corner, above and above-right samples are available when their
/// blocks precede `(bx, by)` in raster order; below-left never is.
/// Unavailable samples are filled by scanning from the bottom of the left
/// column up through the corner and along the above row, each taking the
/// previous available value (the first available one for a leading run).
pub fn build_reference_samples(recon: &FramePlane, bx: usize, by: usize) -> ReferenceSamples {
    assert!(
        bx < recon.blocks_wide() && by < recon.blocks_high(),
        "block ({bx}, {by}) outside {}x{} plane",
        recon.width(),
        recon.height()
    );
    let x0 = bx * N;
    let y0 = by * N;
    let has_left = bx > 0;
    let has_above = by > 0;
    let has_above_right = has_above && bx + 1 < recon.blocks_wide();

    // Scan order: left[15] .. left[0], corner, above[1] .. above[16].
    let mut line: [Option<u8>; 4 * N + 1] = [None; 4 * N + 1];
    for i in 0..2 * N {
        if has_left && i < N {
            line[2 * N - 1 - i] = Some(recon.get(x0 - 1, y0 + i));
        }
    }
    if has_left && has_above {
        line[2 * N] = Some(recon.get(x0 - 1, y0 - 1));
    }
    for i in 0..2 * N {
        let avail = if i < N { has_above } else { has_above_right };
        if avail {
            line[2 * N + 1 + i] = Some(recon.get(x0 + i, y0 - 1));
        }
    }

    let mut filled = [128u8; 4 * N + 1];
    if let Some(first) = line.iter().flatten().next().copied() {
        let mut prev = first;
        for (dst, src) in filled.iter_mut().zip(line.iter()) {
            if let Some(v) = src {
                prev = *v;
            }
            *dst = prev;
        }
    }

    let mut refs = ReferenceSamples::uniform(128);
    for i in 0..2 * N {
        refs.left[i] = filled[2 * N - 1 - i];
    }
    refs.above.copy_from_slice(&filled[2 * N..]);
    refs
}

pub fn predict_block(mode: IntraMode, refs: &ReferenceSamples) -> PredBlock {
    match mode.index() {
        0 => predict_planar(refs),
        1 => predict_dc(refs),
        m => predict_angular(m as usize, refs),
    }
}

fn predict_planar(refs: &ReferenceSamples) -> PredBlock {
    let n = N as i32;
    let top_right = refs.above[N + 1] as i32;
    let bottom_left = refs.left[N] as i32;
    let mut out = [[0u8; N]; N];
    for (y, row) in out.iter_mut().enumerate() {
        for (x, px) in row.iter_mut().enumerate() {
            let (xi, yi) = (x as i32, y as i32);
            let v = ((n - 1 - xi) * refs.left[y] as i32
                + (xi + 1) * top_right
                + (n - 1 - yi) * refs.above[x + 1] as i32
                + (yi + 1) * bottom_left
                + n)
                >> 4;
            *px = v.clamp(0, 255) as u8;
        }
    }
    out
}

/// Rounded mean of the 16 above and 16 left references.
fn predict_dc(refs: &ReferenceSamples) -> PredBlock {
    let sum: u32 = refs.above[1..].iter().chain(refs.left.iter()).map(|&v| v as u32).sum();
    let dc = ((sum + 16) >> 5) as u8;
    [[dc; N]; N]
}

fn predict_angular(mode: usize, refs: &ReferenceSamples) -> PredBlock {
    let angle = INTRA_PRED_ANGLE[mode];
    let vertical = mode >= 18;

    // main[k] = p along the primary edge (k = 0 is the corner),
    // side[k] = p along the other edge.
    let mut main = [0i32; 2 * N + 1];
    let mut side = [0i32; 2 * N + 1];
    side[0] = refs.corner() as i32;
    main[0] = refs.corner() as i32;
    for k in 0..2 * N {
        let (a, l) = (refs.above[k + 1] as i32, refs.left[k] as i32);
        if vertical {
            main[k + 1] = a;
            side[k + 1] = l;
        } else {
            main[k + 1] = l;
            side[k + 1] = a;
        }
    }

    // Reference line indexed from -N..=2N, stored with offset N.
    let mut line = [0i32; 3 * N + 1];
    let at = |i: i32| (i + N as i32) as usize;
    for k in 0..=2 * N {
        line[at(k as i32)] = main[k];
    }
    if angle < 0 {
        let inv = INV_ANGLE[mode - 11];
        let ext = (N as i32 * angle) >> 5;
        if ext < -1 {
            for x in ext..=-1 {
                let idx = ((x * inv + 128) >> 8) as usize;
                line[at(x)] = side[idx];
            }
        }
    }

    let mut out = [[0u8; N]; N];
    #[allow(clippy::needless_range_loop)]
    for major in 0..N {
        let pos = (major as i32 + 1) * angle;
        let idx = pos >> 5;
        let fact = pos & 31;
        for minor in 0..N {
            let base = minor as i32 + idx + 1;
            let v = if fact == 0 {
                line[at(base)]
            } else {
                ((32 - fact) * line[at(base)] + fact * line[at(base + 1)] + 16) >> 5
            };
            let v = v.clamp(0, 255) as u8;
            if vertical {
                out[major][minor] = v;
            } else {
                out[minor][major] = v;
            }
        }
    }
    out
}

/// Three distinct candidate modes from the left and above neighbours.
pub fn mpm_list(left: Option<IntraMode>, above: Option<IntraMode>) -> [IntraMode; 3] {
    let a = left.unwrap_or(IntraMode::DC);
    let b = above.unwrap_or(IntraMode::DC);
    if a == b {
        if a.is_angular() {
            let m = a.index();
            // neighbours of an angular mode, wrapping within 2..=34
            let prev = 2 + (m - 2 + 32) % 33;
            let next = 2 + (m - 2 + 1) % 33;
            [a, IntraMode::new(prev).unwrap(), IntraMode::new(next).unwrap()]
        } else {
            [IntraMode::PLANAR, IntraMode::DC, IntraMode::VERTICAL]
        }
    } else {
        let third =
            [IntraMode::PLANAR, IntraMode::DC, IntraMode::VERTICAL].into_iter().find(|&m| m != a && m != b).unwrap();
        [a, b, third]
    }
}

pub fn block_sse(orig: &PredBlock, pred: &PredBlock) -> u64 {
    orig.iter()
        .flatten()
        .zip(pred.iter().flatten())
        .map(|(&o, &p)| {
            let d = o as i64 - p as i64;
            (d * d) as u64
        })
        .sum()
}

/// Exhaustive minimum-SSE mode decision; ties go to the lowest mode index.
pub fn select_mode(orig: &PredBlock, refs: &ReferenceSamples, mpm: &[IntraMode; 3]) -> (IntraMode, ModeSyntax) {
    let mut best = (u64::MAX, IntraMode::DC);
    for mode in IntraMode::all() {
        let sse = block_sse(orig, &predict_block(mode, refs));
        if sse < best.0 {
            best = (sse, mode);
        }
    }
    (best.1, ModeSyntax::for_mode(best.1, mpm))
}
