//! Python bindings. Planes cross the boundary as `bytes` of row-major luma
//! samples together with an explicit width and height.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyBytes, PyDict};

use mlse::harness::{generate_synthetic, GeneratorId};
use mlse::io::Container;
use mlse::keystream::{KeySite, KeystreamHandle, Nonce, Purpose, SecretKey};
use mlse::metrics;
use mlse::{decode_sequence, encode_sequence, EncryptionLevel, FramePlane, MetricsReport};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn plane(data: &[u8], width: usize, height: usize) -> PyResult<FramePlane> {
    FramePlane::new(width, height, data.to_vec()).map_err(value_err)
}

fn purpose(name: &str) -> PyResult<Purpose> {
    match name {
        "ipm_mpm" => Ok(Purpose::IpmMpm),
        "ipm_rem" => Ok(Purpose::IpmRem),
        "sign" => Ok(Purpose::Sign),
        other => Err(PyValueError::new_err(format!("unknown purpose {other:?}"))),
    }
}

/// AES-128-CTR keystream addressed by (frame, block, purpose).
#[pyclass(frozen, module = "pymlse")]
struct Keystream {
    inner: KeystreamHandle,
}

#[pymethods]
impl Keystream {
    #[new]
    fn new(key: &str, nonce: &str) -> PyResult<Self> {
        let key: SecretKey = key.parse().map_err(value_err)?;
        let nonce: Nonce = nonce.parse().map_err(value_err)?;
        Ok(Keystream { inner: KeystreamHandle::new(key, nonce) })
    }

    /// The 16 keystream bytes of one site.
    fn site_block<'py>(
        &self,
        py: Python<'py>,
        frame: u32,
        block: u32,
        purpose_name: &str,
    ) -> PyResult<Bound<'py, PyBytes>> {
        let site = KeySite::new(frame, block, purpose(purpose_name)?);
        let block = self.inner.derive_site_block(site).map_err(value_err)?;
        Ok(PyBytes::new(py, &block))
    }

    fn keybits(&self, frame: u32, block: u32, purpose_name: &str, n: u32) -> PyResult<u32> {
        let site = KeySite::new(frame, block, purpose(purpose_name)?);
        self.inner.keybits(site, n).map_err(value_err)
    }

    fn key_uniform3(&self, frame: u32, block: u32) -> PyResult<u8> {
        self.inner.key_uniform3(KeySite::new(frame, block, Purpose::IpmMpm)).map_err(value_err)
    }
}

/// Result of `encode`: the container bytes plus the encoder's reconstruction.
#[pyclass(frozen, module = "pymlse")]
struct Encoded {
    container: Vec<u8>,
    recon: Vec<Vec<u8>>,
    #[pyo3(get)]
    bits: u64,
    #[pyo3(get)]
    width: usize,
    #[pyo3(get)]
    height: usize,
}

#[pymethods]
impl Encoded {
    #[getter]
    fn container<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &self.container)
    }

    #[getter]
    fn recon<'py>(&self, py: Python<'py>) -> Vec<Bound<'py, PyBytes>> {
        self.recon.iter().map(|f| PyBytes::new(py, f)).collect()
    }
}

#[pyfunction]
fn generate_key() -> String {
    SecretKey::generate().to_hex()
}

#[pyfunction]
fn generate_nonce() -> String {
    Nonce::generate().to_hex()
}

/// Encodes luma frames at `qp` with `level` in {none, light, medium, heavy}.
#[pyfunction]
#[pyo3(signature = (frames, width, height, qp, level, key, nonce))]
#[allow(clippy::too_many_arguments)]
fn encode(
    py: Python<'_>,
    frames: Vec<Vec<u8>>,
    width: usize,
    height: usize,
    qp: u8,
    level: &str,
    key: &str,
    nonce: &str,
) -> PyResult<Encoded> {
    let level: EncryptionLevel = level.parse().map_err(value_err)?;
    let ks = Keystream::new(key, nonce)?.inner;
    let planes = frames.iter().map(|f| plane(f, width, height)).collect::<PyResult<Vec<_>>>()?;
    let enc = py.detach(|| encode_sequence(&planes, qp, level, &ks)).map_err(value_err)?;
    Ok(Encoded {
        container: enc.container.to_bytes(),
        bits: enc.total_bits(),
        recon: enc.recon.into_iter().map(FramePlane::into_samples).collect(),
        width,
        height,
    })
}

/// Decodes a container; with `key=None` the stream is decoded as written.
#[pyfunction]
#[pyo3(signature = (container, key=None))]
fn decode<'py>(py: Python<'py>, container: &[u8], key: Option<&str>) -> PyResult<Vec<Bound<'py, PyBytes>>> {
    let key: Option<SecretKey> = key.map(str::parse).transpose().map_err(value_err)?;
    let parsed = Container::parse(container).map_err(value_err)?;
    let frames = py.detach(|| decode_sequence(&parsed, key.as_ref())).map_err(value_err)?;
    Ok(frames.iter().map(|f| PyBytes::new(py, f.samples())).collect())
}

/// `(width, height, frame_count, qp, level)` from a container header.
#[pyfunction]
fn container_info(container: &[u8]) -> PyResult<(u16, u16, u32, u8, String)> {
    let h = Container::parse(container).map_err(value_err)?.header;
    Ok((h.width, h.height, h.frame_count, h.qp, h.level.name().to_owned()))
}

/// Metrics of `test` against `reference`, as a dict with the report fields.
#[pyfunction]
fn compare<'py>(
    py: Python<'py>,
    reference: &[u8],
    test: &[u8],
    width: usize,
    height: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let r =
        MetricsReport::compare(&plane(reference, width, height)?, &plane(test, width, height)?).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("psnr_db", r.psnr_db)?;
    d.set_item("ssim", r.ssim)?;
    d.set_item("entropy_bits", r.entropy_bits)?;
    d.set_item("npcr", r.npcr)?;
    d.set_item("uaci", r.uaci)?;
    d.set_item("bitrate_delta", r.bitrate_delta)?;
    Ok(d)
}

#[pyfunction]
fn expected_npcr(levels: u64) -> PyResult<f64> {
    metrics::expected_npcr(levels).map_err(value_err)
}

#[pyfunction]
fn expected_uaci(levels: u64) -> PyResult<f64> {
    metrics::expected_uaci(levels).map_err(value_err)
}

/// Deterministic test sequence from one of the built-in generators.
#[pyfunction]
fn synthetic<'py>(
    py: Python<'py>,
    generator: &str,
    seed: u64,
    width: usize,
    height: usize,
    count: usize,
) -> PyResult<Vec<Bound<'py, PyBytes>>> {
    let id: GeneratorId = generator.parse().map_err(PyValueError::new_err)?;
    let frames = generate_synthetic(id, seed, width, height, count).map_err(value_err)?;
    Ok(frames.iter().map(|f| PyBytes::new(py, f.samples())).collect())
}

#[pymodule]
fn pymlse(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Keystream>()?;
    m.add_class::<Encoded>()?;
    m.add_function(wrap_pyfunction!(generate_key, m)?)?;
    m.add_function(wrap_pyfunction!(generate_nonce, m)?)?;
    m.add_function(wrap_pyfunction!(encode, m)?)?;
    m.add_function(wrap_pyfunction!(decode, m)?)?;
    m.add_function(wrap_pyfunction!(container_info, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(expected_npcr, m)?)?;
    m.add_function(wrap_pyfunction!(expected_uaci, m)?)?;
    m.add_function(wrap_pyfunction!(synthetic, m)?)?;
    Ok(())
}
