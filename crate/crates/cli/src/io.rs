use std::fs;
use std::path::{Path, PathBuf};

use nlfsr_core::espresso::{bits_to_bytes, bytes_to_bits};
use nlfsr_core::{CompensationList, FsrFile, ShiftPlan};

use crate::CliError;

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

pub fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn parse_in<T, E: std::fmt::Display>(path: &Path, r: Result<T, E>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))
}

pub fn read_spec(path: &Path) -> Result<FsrFile, CliError> {
    parse_in(path, read(path)?.parse::<FsrFile>())
}

pub fn read_plan(path: &Path) -> Result<ShiftPlan, CliError> {
    parse_in(path, read(path)?.parse::<ShiftPlan>())
}

pub fn read_clist(path: &Path) -> Result<CompensationList, CliError> {
    parse_in(path, read(path)?.parse::<CompensationList>())
}

/// Bits packed first-bit-first, LSB-first within each byte, as lowercase hex.
pub fn bits_to_hex(bits: &[bool]) -> String {
    hex::encode(bits_to_bytes(bits))
}

/// Inverse of [`bits_to_hex`]; case-insensitive, whitespace ignored.
pub fn hex_to_bits(text: &str) -> Result<Vec<bool>, CliError> {
    let clean: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bytes =
        hex::decode(&clean).map_err(|e| CliError::Usage(format!("bad hex `{clean}`: {e}")))?;
    Ok(bytes_to_bits(&bytes))
}

/// Hex given inline or as the path of a file holding it.
pub fn keystream_arg(arg: &str, bits: Option<usize>) -> Result<Vec<bool>, CliError> {
    let path = Path::new(arg);
    let text = if path.is_file() {
        read(path)?
    } else {
        arg.to_string()
    };
    let mut ks = hex_to_bits(&text)?;
    if let Some(t) = bits {
        if t > ks.len() {
            return Err(CliError::Usage(format!(
                "--bits {t} exceeds the {} bits supplied",
                ks.len()
            )));
        }
        ks.truncate(t);
    }
    Ok(ks)
}

/// Writes `text` to `out`, or returns it for stdout.
pub fn emit(out: &Option<PathBuf>, text: String) -> Result<Option<String>, CliError> {
    match out {
        Some(p) => write(p, &text).map(|_| None),
        None => Ok(Some(text)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_round_trip_lsb_first() {
        let bits = [
            true, false, false, false, false, false, false, false, false, true,
        ];
        let h = bits_to_hex(&bits);
        assert_eq!(h, "0102");
        assert_eq!(hex_to_bits("0102").unwrap()[..10], bits);
        assert_eq!(hex_to_bits("AB cd").unwrap(), hex_to_bits("abcd").unwrap());
        assert!(hex_to_bits("abc").is_err());
    }

    #[test]
    fn keystream_truncation() {
        assert_eq!(keystream_arg("ff", Some(3)).unwrap(), vec![true; 3]);
        assert!(keystream_arg("ff", Some(9)).is_err());
    }
}
