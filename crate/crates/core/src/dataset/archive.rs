use std::fs::File;
use std::io::{self, BufReader, Read, Seek, SeekFrom};
use std::path::Path;

use super::LoadError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(super) enum Kind {
    Zip,
    Tar,
    Gzip,
    Bzip2,
    Xz,
}

const TAR_MAGIC_OFFSET: usize = 257;

pub(super) fn sniff(header: &[u8]) -> Option<Kind> {
    if header.starts_with(b"PK\x03\x04") || header.starts_with(b"PK\x05\x06") {
        Some(Kind::Zip)
    } else if header.starts_with(&[0x1f, 0x8b]) {
        Some(Kind::Gzip)
    } else if header.starts_with(b"BZh") {
        Some(Kind::Bzip2)
    } else if header.starts_with(&[0xfd, b'7', b'z', b'X', b'Z', 0x00]) {
        Some(Kind::Xz)
    } else if header.len() >= TAR_MAGIC_OFFSET + 5 && &header[TAR_MAGIC_OFFSET..TAR_MAGIC_OFFSET + 5] == b"ustar" {
        Some(Kind::Tar)
    } else {
        None
    }
}

fn unsupported(e: impl std::fmt::Display) -> LoadError {
    LoadError::UnsupportedArchive(e.to_string())
}

/// Extracts `archive` into `dest`, identifying the format from its leading
/// bytes. Compressed streams must wrap a tar archive; archives nested inside
/// the extracted tree are left alone.
pub(super) fn extract(archive: &Path, dest: &Path) -> Result<(), LoadError> {
    let mut file = File::open(archive)?;
    let mut header = [0u8; 512];
    let n = read_up_to(&mut file, &mut header)?;
    file.seek(SeekFrom::Start(0))?;
    let kind = sniff(&header[..n]).ok_or_else(|| unsupported("unrecognized archive format"))?;
    let reader = BufReader::new(file);
    match kind {
        Kind::Zip => {
            let mut zip = zip::ZipArchive::new(reader).map_err(unsupported)?;
            zip.extract(dest).map_err(unsupported)
        }
        Kind::Tar => unpack_tar(reader, dest),
        Kind::Gzip => unpack_tar(flate2::read::MultiGzDecoder::new(reader), dest),
        Kind::Bzip2 => unpack_tar(bzip2::read::MultiBzDecoder::new(reader), dest),
        Kind::Xz => unpack_tar(xz2::read::XzDecoder::new_multi_decoder(reader), dest),
    }
}

fn unpack_tar<R: Read>(reader: R, dest: &Path) -> Result<(), LoadError> {
    tar::Archive::new(reader).unpack(dest).map_err(unsupported)
}

fn read_up_to<R: Read>(reader: &mut R, buf: &mut [u8]) -> io::Result<usize> {
    let mut filled = 0;
    while filled < buf.len() {
        match reader.read(&mut buf[filled..])? {
            0 => break,
            n => filled += n,
        }
    }
    Ok(filled)
}
