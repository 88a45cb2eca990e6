//! Output provenance: stable content fingerprints and header lines.
//!
//! Every file the pipeline emits starts with a `#`-prefixed header carrying
//! the tool version plus fingerprints of the run configuration and the
//! lexicon, so any artifact can be traced back to the exact inputs that
//! produced it. Readers in this crate skip `#` lines.

use serde::Serialize;

/// 64-bit FNV-1a hash. Not cryptographic; used only as a stable content
/// fingerprint for provenance headers.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    const OFFSET: u64 = 0xcbf29ce484222325;
    const PRIME: u64 = 0x100000001b3;
    let mut h = OFFSET;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(PRIME);
    }
    h
}

/// Fingerprint rendered as fixed-width lowercase hex.
pub fn fingerprint(bytes: &[u8]) -> String {
    format!("{:016x}", fnv1a64(bytes))
}

/// Provenance stamp embedded in every emitted file.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool_version: String,
    pub command: String,
    pub config_hash: String,
    pub lexicon_hash: String,
    /// Optional wall-clock stamp; omitted by default so re-runs are
    /// byte-identical.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl Provenance {
    pub fn new(
        tool_version: &str,
        command: &str,
        config_hash: String,
        lexicon_hash: String,
    ) -> Self {
        Provenance {
            tool_version: tool_version.to_string(),
            command: command.to_string(),
            config_hash,
            lexicon_hash,
            timestamp: None,
        }
    }

    /// The `#` comment line written as the first line of CSV outputs.
    pub fn header_line(&self) -> String {
        let mut line = format!(
            "# fomc v{} cmd={} config={} lexicon={}",
            self.tool_version, self.command, self.config_hash, self.lexicon_hash
        );
        if let Some(ts) = &self.timestamp {
            line.push_str(&format!(" at={ts}"));
        }
        line
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv_known_vectors() {
        // Reference values for the 64-bit FNV-1a test vectors.
        assert_eq!(fnv1a64(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a64(b"a"), 0xaf63dc4c8601ec8c);
        assert_eq!(fnv1a64(b"foobar"), 0x85944171f73967e8);
    }

    #[test]
    fn header_line_is_stable() {
        let p = Provenance::new("0.1.0", "filter", "aa".into(), "bb".into());
        assert_eq!(
            p.header_line(),
            "# fomc v0.1.0 cmd=filter config=aa lexicon=bb"
        );
    }
}
