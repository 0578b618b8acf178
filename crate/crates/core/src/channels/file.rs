//! Channel description files: JSON objects `{"din": .., "dout": .., "kraus": [...]}`
//! where each Kraus operator is a `dout x din` nested array of `[re, im]` pairs.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Channel;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Files whose completeness residual exceeds this are rejected.
pub const FILE_COMPLETENESS_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub din: usize,
    pub dout: usize,
    pub kraus: Vec<Vec<Vec<[f64; 2]>>>,
}

fn parse_error(message: impl Into<String>) -> Error {
    Error::Parse {
        line: 0,
        column: 0,
        message: message.into(),
    }
}

impl ChannelFile {
    pub fn to_channel(&self) -> Result<Channel> {
        if self.kraus.is_empty() {
            return Err(parse_error("kraus list is empty"));
        }
        let mut ops = Vec::with_capacity(self.kraus.len());
        for (k, op) in self.kraus.iter().enumerate() {
            if op.len() != self.dout {
                return Err(parse_error(format!(
                    "kraus[{k}] has {} rows, expected dout = {}",
                    op.len(),
                    self.dout
                )));
            }
            let mut data = Vec::with_capacity(self.dout * self.din);
            for (r, row) in op.iter().enumerate() {
                if row.len() != self.din {
                    return Err(parse_error(format!(
                        "kraus[{k}] row {r} has {} entries, expected din = {}",
                        row.len(),
                        self.din
                    )));
                }
                data.extend(row.iter().map(|[re, im]| Complex64::new(*re, *im)));
            }
            ops.push(ComplexMatrix::new(self.dout, self.din, data)?);
        }
        Channel::from_kraus_normalized(ops, FILE_COMPLETENESS_TOL)
    }

    pub fn from_channel(ch: &Channel) -> Self {
        let kraus = ch
            .kraus()
            .iter()
            .map(|k| {
                (0..k.rows())
                    .map(|r| k.row(r).iter().map(|z| [z.re, z.im]).collect())
                    .collect()
            })
            .collect();
        Self {
            din: ch.din(),
            dout: ch.dout(),
            kraus,
        }
    }
}

/// Parses channel file text; syntax errors carry line and column.
pub fn parse_channel_file(text: &str) -> Result<Channel> {
    let file: ChannelFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    file.to_channel()
}

pub fn read_channel_file(path: &Path) -> Result<Channel> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| parse_error(format!("cannot read {}: {e}", path.display())))?;
    parse_channel_file(&text)
}

pub fn to_channel_file(ch: &Channel) -> String {
    serde_json::to_string_pretty(&ChannelFile::from_channel(ch)).expect("channel file serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Rng;

    #[test]
    fn round_trip_preserves_action() {
        let mut rng = Rng::new(1);
        let ch = Channel::random(2, 3, 2, &mut rng).unwrap();
        let back = parse_channel_file(&to_channel_file(&ch)).unwrap();
        assert!(back.approx_eq(&ch, 1e-12));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_channel_file("{\n  \"din\": 2,\n  \"dout\": oops\n}").unwrap_err();
        match err {
            Error::Parse { line, column, .. } => {
                assert_eq!(line, 3);
                assert!(column > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_shapes_and_non_tp() {
        let bad_rows = r#"{"din": 1, "dout": 2, "kraus": [[[[1.0, 0.0]]]]}"#;
        assert!(parse_channel_file(bad_rows).is_err());
        let not_tp = r#"{"din": 1, "dout": 1, "kraus": [[[[0.9, 0.0]]]]}"#;
        assert!(matches!(
            parse_channel_file(not_tp),
            Err(Error::Contract(_))
        ));
        let nearly_tp = r#"{"din": 1, "dout": 1, "kraus": [[[[1.0000001, 0.0]]]]}"#;
        assert!(parse_channel_file(nearly_tp).is_ok());
    }
}
