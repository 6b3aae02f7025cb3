//! Portable on-disk tensor container ("MBT1").
//!
//! Layout: bytes 0-3 magic `MBT1`; bytes 4-7 little-endian u32 header length
//! `L`; bytes `8..8+L` a UTF-8 JSON header; then the row-major,
//! channel-interleaved payload. Images are stored as `f32le` (arbitrary
//! finite floats — embedding batches and model checkpoints reuse the
//! `"image"` kind), labels as `u8`. Round-trips are bitwise identities.

use std::fs;
use std::path::Path;

use crate::imagecore::{Band, LabelMap, MultiBandImage};
use crate::{Error, Result};

const MAGIC: &[u8; 4] = b"MBT1";

/// JSON header of an MBT1 file. Field order here fixes the byte layout of
/// written headers.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct ContainerHeader {
    pub kind: String,
    pub height: usize,
    pub width: usize,
    pub channels: usize,
    pub dtype: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bands: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classes: Option<usize>,
}

/// An MBT1 payload: either a float tensor tagged with bands (kind `"image"`)
/// or a label map (kind `"labels"`).
#[derive(Debug, Clone, PartialEq)]
pub enum Container {
    Image {
        height: usize,
        width: usize,
        bands: Vec<Band>,
        data: Vec<f32>,
    },
    Labels(LabelMap),
}

impl Container {
    pub fn from_image(img: &MultiBandImage) -> Self {
        Container::Image {
            height: img.height(),
            width: img.width(),
            bands: img.bands().to_vec(),
            data: img.data().to_vec(),
        }
    }

    pub fn from_labels(labels: &LabelMap) -> Self {
        Container::Labels(labels.clone())
    }

    /// Raw float tensor (checkpoints, embeddings): values must be finite but
    /// need not lie in `[0, 1]`.
    pub fn raw(height: usize, width: usize, bands: Vec<Band>, data: Vec<f32>) -> Result<Self> {
        if data.len() != height * width * bands.len() {
            return Err(Error::DimMismatch(format!(
                "raw tensor holds {} values, expected {}x{}x{}",
                data.len(),
                height,
                width,
                bands.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidData("non-finite value in tensor".into()));
        }
        Ok(Container::Image {
            height,
            width,
            bands,
            data,
        })
    }

    /// Interprets the payload as imagery, enforcing the `[0,1]` invariant.
    pub fn into_image(self) -> Result<MultiBandImage> {
        match self {
            Container::Image {
                height,
                width,
                bands,
                data,
            } => MultiBandImage::new(height, width, bands, data),
            Container::Labels(_) => Err(Error::Format(
                "container holds labels, expected an image".into(),
            )),
        }
    }

    pub fn into_labels(self) -> Result<LabelMap> {
        match self {
            Container::Labels(l) => Ok(l),
            Container::Image { .. } => Err(Error::Format(
                "container holds an image, expected labels".into(),
            )),
        }
    }

    /// Raw float access regardless of range (errors on label containers).
    pub fn into_raw(self) -> Result<(usize, usize, Vec<Band>, Vec<f32>)> {
        match self {
            Container::Image {
                height,
                width,
                bands,
                data,
            } => Ok((height, width, bands, data)),
            Container::Labels(_) => Err(Error::Format(
                "container holds labels, expected a float tensor".into(),
            )),
        }
    }
}

fn encode(value: &Container) -> Result<Vec<u8>> {
    let (header, payload) = match value {
        Container::Image {
            height,
            width,
            bands,
            data,
        } => {
            let header = ContainerHeader {
                kind: "image".into(),
                height: *height,
                width: *width,
                channels: bands.len(),
                dtype: "f32le".into(),
                bands: Some(bands.iter().map(|b| b.as_str().to_string()).collect()),
                classes: None,
            };
            let mut payload = Vec::with_capacity(data.len() * 4);
            for v in data {
                payload.extend_from_slice(&v.to_le_bytes());
            }
            (header, payload)
        }
        Container::Labels(labels) => {
            let header = ContainerHeader {
                kind: "labels".into(),
                height: labels.height(),
                width: labels.width(),
                channels: 1,
                dtype: "u8".into(),
                bands: None,
                classes: Some(labels.classes()),
            };
            (header, labels.data().to_vec())
        }
    };
    let header_bytes = serde_json::to_vec(&header)?;
    let mut out = Vec::with_capacity(8 + header_bytes.len() + payload.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(header_bytes.len() as u32).to_le_bytes());
    out.extend_from_slice(&header_bytes);
    out.extend_from_slice(&payload);
    Ok(out)
}

fn decode(bytes: &[u8]) -> Result<Container> {
    if bytes.len() < 8 || &bytes[..4] != MAGIC {
        return Err(Error::BadMagic);
    }
    let header_len = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    if bytes.len() < 8 + header_len {
        return Err(Error::Format("truncated header".into()));
    }
    let header: ContainerHeader = serde_json::from_slice(&bytes[8..8 + header_len])?;
    let payload = &bytes[8 + header_len..];

    match (header.kind.as_str(), header.dtype.as_str()) {
        ("image", "f32le") => {
            let band_names = header
                .bands
                .ok_or_else(|| Error::Format("image header missing bands".into()))?;
            if band_names.len() != header.channels {
                return Err(Error::Format(format!(
                    "header claims {} channels but lists {} bands",
                    header.channels,
                    band_names.len()
                )));
            }
            let bands: Vec<Band> = band_names
                .iter()
                .map(|s| s.parse())
                .collect::<Result<_>>()?;
            let expected = header.height * header.width * header.channels * 4;
            if payload.len() != expected {
                return Err(Error::Format(format!(
                    "payload holds {} bytes, header claims {} ({}x{}x{} f32le)",
                    payload.len(),
                    expected,
                    header.height,
                    header.width,
                    header.channels
                )));
            }
            let data: Vec<f32> = payload
                .chunks_exact(4)
                .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
                .collect();
            Ok(Container::Image {
                height: header.height,
                width: header.width,
                bands,
                data,
            })
        }
        ("labels", "u8") => {
            if header.channels != 1 {
                return Err(Error::Format("label containers are single-channel".into()));
            }
            let classes = header
                .classes
                .ok_or_else(|| Error::Format("labels header missing classes".into()))?;
            let expected = header.height * header.width;
            if payload.len() != expected {
                return Err(Error::Format(format!(
                    "payload holds {} bytes, header claims {} ({}x{} u8)",
                    payload.len(),
                    expected,
                    header.height,
                    header.width
                )));
            }
            Ok(Container::Labels(LabelMap::new(
                header.height,
                header.width,
                classes,
                payload.to_vec(),
            )?))
        }
        (kind, dtype) => Err(Error::Format(format!(
            "unsupported kind/dtype combination {kind:?}/{dtype:?}"
        ))),
    }
}

/// Writes a container atomically (temp file in the target directory, then
/// rename).
pub fn write_container(value: &Container, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode(value)?;
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let tmp = dir.join(format!(
        ".{}.tmp",
        path.file_name().map(|n| n.to_string_lossy()).unwrap_or_default()
    ));
    fs::write(&tmp, &bytes).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))?;
    Ok(())
}

pub fn read_container(path: impl AsRef<Path>) -> Result<Container> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imagecore::SeedRng;

    fn random_image(h: usize, w: usize, bands: Vec<Band>, seed: u64) -> MultiBandImage {
        let mut rng = SeedRng::new(seed, 0);
        let data = (0..h * w * bands.len()).map(|_| rng.gen_f32()).collect();
        MultiBandImage::new(h, w, bands, data).unwrap()
    }

    #[test]
    fn image_round_trip_is_bitwise() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("img.mbt");
        let img = random_image(5, 7, vec![Band::R, Band::G, Band::B, Band::Nir], 11);
        write_container(&Container::from_image(&img), &path).unwrap();
        let back = read_container(&path).unwrap().into_image().unwrap();
        assert_eq!(img, back);
    }

    #[test]
    fn labels_round_trip_is_bitwise() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("lab.mbt");
        let labels = LabelMap::new(3, 4, 3, vec![0, 1, 2, 255, 0, 1, 2, 0, 1, 2, 0, 255]).unwrap();
        write_container(&Container::from_labels(&labels), &path).unwrap();
        let back = read_container(&path).unwrap().into_labels().unwrap();
        assert_eq!(labels, back);
    }

    #[test]
    fn corrupted_magic_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.mbt");
        let img = random_image(2, 2, vec![Band::Generic], 3);
        write_container(&Container::from_image(&img), &path).unwrap();
        let mut bytes = std::fs::read(&path).unwrap();
        bytes[0] = b'X';
        std::fs::write(&path, &bytes).unwrap();
        match read_container(&path) {
            Err(Error::BadMagic) => {}
            other => panic!("expected bad magic, got {other:?}"),
        }
    }

    #[test]
    fn header_payload_size_mismatch_is_rejected() {
        // header claims 4 channels, payload holds 3
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("short.mbt");
        let img = random_image(2, 2, vec![Band::R, Band::G, Band::B], 4);
        write_container(&Container::from_image(&img), &path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        let header_len = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
        let mut doctored = bytes.clone();
        let header = String::from_utf8(bytes[8..8 + header_len].to_vec()).unwrap();
        let patched = header.replace("\"channels\":3", "\"channels\":4").replace(
            "\"bands\":[\"R\",\"G\",\"B\"]",
            "\"bands\":[\"R\",\"G\",\"B\",\"NIR\"]",
        );
        assert_ne!(header, patched);
        doctored.splice(8..8 + header_len, patched.bytes());
        doctored[4..8].copy_from_slice(&(patched.len() as u32).to_le_bytes());
        std::fs::write(&path, &doctored).unwrap();
        match read_container(&path) {
            Err(Error::Format(msg)) => assert!(msg.contains("payload"), "{msg}"),
            other => panic!("expected size mismatch, got {other:?}"),
        }
    }

    #[test]
    fn truncated_payload_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trunc.mbt");
        let img = random_image(4, 4, vec![Band::Generic], 5);
        write_container(&Container::from_image(&img), &path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        std::fs::write(&path, &bytes[..bytes.len() - 3]).unwrap();
        assert!(matches!(read_container(&path), Err(Error::Format(_))));
    }

    #[test]
    fn raw_tensor_accepts_values_outside_unit_range() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("emb.mbt");
        let raw = Container::raw(4, 1, vec![Band::Generic, Band::Generic], vec![
            -1.5, 2.5, 0.0, 1.0, -0.25, 7.0, 3.5, -9.0,
        ])
        .unwrap();
        write_container(&raw, &path).unwrap();
        let (h, w, bands, data) = read_container(&path).unwrap().into_raw().unwrap();
        assert_eq!((h, w, bands.len()), (4, 1, 2));
        assert_eq!(data[5], 7.0);
        // imagery interpretation must still enforce [0,1]
        assert!(read_container(&path).unwrap().into_image().is_err());
    }
}
