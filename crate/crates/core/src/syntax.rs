//! Coded syntax elements shared by the codec, the entropy coder and the
//! encryption layer.

use crate::frame::BLOCK;

pub const NUM_MODES: u8 = 35;
pub const PLANAR: u8 = 0;
pub const DC: u8 = 1;
pub const HORIZONTAL: u8 = 10;
pub const VERTICAL: u8 = 26;

/// Largest quantized level magnitude the coder accepts.
pub const MAX_LEVEL: i32 = 1 << 15;

pub const COEFFS: usize = BLOCK * BLOCK;

/// Intra prediction mode: 0 planar, 1 DC, 2..=34 angular.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntraMode(u8);

impl IntraMode {
    pub const PLANAR: IntraMode = IntraMode(PLANAR);
    pub const DC: IntraMode = IntraMode(DC);
    pub const HORIZONTAL: IntraMode = IntraMode(HORIZONTAL);
    pub const VERTICAL: IntraMode = IntraMode(VERTICAL);

    pub fn new(index: u8) -> Option<Self> {
        (index < NUM_MODES).then_some(IntraMode(index))
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn is_angular(self) -> bool {
        self.0 >= 2
    }

    pub fn all() -> impl Iterator<Item = IntraMode> {
        (0..NUM_MODES).map(IntraMode)
    }
}

/// How a block's intra mode is written: a hit in the 3-entry MPM list, or a
/// 5-bit rank among the 32 remaining modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeSyntax {
    Mpm { idx: u8 },
    Rem { idx: u8 },
}

impl ModeSyntax {
    pub fn is_valid(self) -> bool {
        match self {
            ModeSyntax::Mpm { idx } => idx < 3,
            ModeSyntax::Rem { idx } => idx < 32,
        }
    }

    pub fn mpm_flag(self) -> bool {
        matches!(self, ModeSyntax::Mpm { .. })
    }

    /// Number of bits this element occupies in the stream.
    pub fn bit_len(self) -> usize {
        match self {
            ModeSyntax::Mpm { idx: 0 } => 2,
            ModeSyntax::Mpm { .. } => 3,
            ModeSyntax::Rem { .. } => 6,
        }
    }

    /// Encodes `mode` against `mpm`.
    pub fn for_mode(mode: IntraMode, mpm: &[IntraMode; 3]) -> ModeSyntax {
        if let Some(i) = mpm.iter().position(|&m| m == mode) {
            return ModeSyntax::Mpm { idx: i as u8 };
        }
        let below = mpm.iter().filter(|m| m.index() < mode.index()).count() as u8;
        ModeSyntax::Rem { idx: mode.index() - below }
    }

    /// Inverse of [`ModeSyntax::for_mode`].
    pub fn to_mode(self, mpm: &[IntraMode; 3]) -> IntraMode {
        match self {
            ModeSyntax::Mpm { idx } => mpm[idx as usize],
            ModeSyntax::Rem { idx } => {
                let mut sorted = *mpm;
                sorted.sort();
                let mut mode = idx;
                for m in sorted {
                    if m.index() <= mode {
                        mode += 1;
                    }
                }
                IntraMode(mode)
            }
        }
    }
}

/// Quantized levels of one 8x8 block in scan order (index 0 = DC).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoeffBlock {
    pub levels: [i32; COEFFS],
}

impl Default for CoeffBlock {
    fn default() -> Self {
        CoeffBlock { levels: [0; COEFFS] }
    }
}

impl CoeffBlock {
    pub fn new(levels: [i32; COEFFS]) -> Self {
        CoeffBlock { levels }
    }

    pub fn last_pos(&self) -> Option<usize> {
        self.levels.iter().rposition(|&l| l != 0)
    }

    pub fn total_coeffs(&self) -> usize {
        self.levels.iter().filter(|&&l| l != 0).count()
    }

    /// Scan positions of the trailing ones, highest frequency first.
    ///
    /// Walks the nonzero levels backwards from `last_pos`, stopping at the
    /// first magnitude other than 1 or after three.
    pub fn trailing_ones(&self) -> Vec<usize> {
        self.levels
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &l)| l != 0)
            .take_while(|(_, &l)| l.abs() == 1)
            .take(3)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn t1_count(&self) -> usize {
        self.trailing_ones().len()
    }

    /// Sign flags of the trailing ones, `true` = positive.
    pub fn t1_signs(&self) -> Vec<bool> {
        self.trailing_ones().into_iter().map(|i| self.levels[i] > 0).collect()
    }
}
