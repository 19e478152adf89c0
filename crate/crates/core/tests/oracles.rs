//! Library results checked against straightforward reimplementations.

mod common;

use mlse::codec::{build_reference_samples, mpm_list, predict_block, select_mode};
use mlse::syntax::IntraMode;

use common::oracle::{check_dct, check_metrics, check_mode_selection};
use common::{noise_plane, rng};

#[test]
fn metrics_match_naive_loops() {
    check_metrics(21, 200).unwrap();
}

#[test]
fn dct_matches_quadruple_sum() {
    check_dct(22, 200).unwrap();
}

#[test]
fn mode_selection_matches_exhaustive_search() {
    check_mode_selection(23, 1000).unwrap();
}

#[test]
fn horizontal_copy_selects_mode_10() {
    let mut r = rng(24);
    let recon = noise_plane(&mut r, 16, 16);
    let refs = build_reference_samples(&recon, 1, 1);
    let left: Vec<u8> = (0..8).map(|y| recon.get(7, 8 + y)).collect();
    let orig = std::array::from_fn(|y| [left[y]; 8]);
    let (mode, _) = select_mode(&orig, &refs, &mpm_list(None, None));
    assert_eq!(mode, IntraMode::HORIZONTAL);
    assert_eq!(predict_block(mode, &refs), orig);
}
