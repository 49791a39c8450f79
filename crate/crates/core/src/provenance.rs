use std::io;
use std::path::Path;

use sha2::{Digest, Sha256};

/// Lower-case hex SHA-256 of a byte string.
pub fn sha256_hex(bytes: impl AsRef<[u8]>) -> String {
    hex::encode(Sha256::digest(bytes.as_ref()))
}

/// Lower-case hex SHA-256 of a file's contents.
pub fn sha256_file(path: impl AsRef<Path>) -> io::Result<String> {
    Ok(sha256_hex(std::fs::read(path)?))
}
