use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::io::{write_pgm, IoError};
use crate::Error;

use super::{CellReport, ExperimentReport};

fn num(v: f64) -> String {
    format!("{v:.6}")
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "null".to_owned(), num)
}

fn write_csv(dir: &Path, name: &str, header: &[&str], rows: Vec<Vec<String>>) -> Result<(), Error> {
    let path = dir.join(name);
    let mut w = csv::Writer::from_path(&path).map_err(|e| Error::Other(format!("{}: {e}", path.display())))?;
    let fail = |e: csv::Error| Error::Other(format!("{}: {e}", path.display()));
    w.write_record(header).map_err(fail)?;
    for row in rows {
        w.write_record(&row).map_err(fail)?;
    }
    w.flush().map_err(|e| IoError::file(&path, e))?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Other(format!("{}: {e}", path.display())))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| IoError::file(path, e))?;
    Ok(())
}

fn key(c: &CellReport) -> Vec<String> {
    vec![c.sequence.clone(), c.qp.to_string(), c.level.clone()]
}

fn rows(report: &ExperimentReport, f: impl Fn(&CellReport) -> Vec<String>) -> Vec<Vec<String>> {
    report.cells.iter().map(|c| [key(c), f(c)].concat()).collect()
}

/// Writes the per-measure CSVs, `report.json`, `failures.json` and a PGM of
/// frame 0 for every original sequence and every cell's keyless decode.
pub fn write_reports(report: &ExperimentReport, dir: &Path) -> Result<(), Error> {
    fs::create_dir_all(dir).map_err(|e| IoError::file(dir, e))?;
    let cell_cols = ["sequence", "qp", "level"];
    let cols = |extra: &[&'static str]| [&cell_cols[..], extra].concat();

    write_csv(
        dir,
        "quality.csv",
        &cols(&["psnr_db", "ssim"]),
        rows(report, |c| vec![opt(c.psnr_db), num(c.ssim)]),
    )?;
    write_csv(
        dir,
        "entropy.csv",
        &cols(&["original_entropy_bits", "entropy_bits"]),
        rows(report, |c| vec![num(c.original_entropy_bits), num(c.entropy_bits)]),
    )?;
    write_csv(
        dir,
        "npcr_uaci.csv",
        &cols(&["npcr_vs_baseline", "uaci_vs_baseline", "npcr_vs_original", "uaci_vs_original", "histogram_distance"]),
        rows(report, |c| {
            vec![
                num(c.npcr_vs_baseline),
                num(c.uaci_vs_baseline),
                num(c.npcr_vs_original),
                num(c.uaci_vs_original),
                num(c.histogram_distance),
            ]
        }),
    )?;
    write_csv(
        dir,
        "bitrate.csv",
        &cols(&["bits", "bitrate_delta", "container_sha256"]),
        rows(report, |c| vec![c.bits.to_string(), num(c.bitrate_delta), c.container_sha256.clone()]),
    )?;
    write_csv(
        dir,
        "metrics.csv",
        &cols(&["psnr_db", "ssim", "entropy_bits", "npcr", "uaci", "bitrate_delta"]),
        rows(report, |c| {
            vec![
                opt(c.psnr_db),
                num(c.ssim),
                num(c.entropy_bits),
                num(c.npcr_vs_baseline),
                num(c.uaci_vs_baseline),
                num(c.bitrate_delta),
            ]
        }),
    )?;
    write_csv(
        dir,
        "key_sensitivity.csv",
        &cols(&["flipped_bit", "npcr_min", "npcr_mean"]),
        report
            .key_sensitivity
            .iter()
            .map(|r| {
                vec![
                    r.sequence.clone(),
                    r.qp.to_string(),
                    r.level.clone(),
                    r.flipped_bit.to_string(),
                    num(r.npcr_min),
                    num(r.npcr_mean),
                ]
            })
            .collect(),
    )?;

    write_json(&dir.join("report.json"), report)?;
    write_json(&dir.join("failures.json"), &report.failures)?;

    let frames = dir.join("frames");
    fs::create_dir_all(&frames).map_err(|e| IoError::file(&frames, e))?;
    for (name, plane) in &report.originals {
        write_pgm(plane, &frames.join(format!("{name}_original.pgm")))?;
    }
    for c in &report.cells {
        if let Some(plane) = &c.frame0 {
            write_pgm(plane, &frames.join(format!("{}_qp{}_{}.pgm", c.sequence, c.qp, c.level)))?;
        }
    }
    Ok(())
}
