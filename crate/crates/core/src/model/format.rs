//! Text model file:
//!
//! ```text
//! PINMODEL v1 alpha=1.0 tau=10
//! 1234 2
//! 1235 1
//! 9876 1
//! TOTAL 4
//! ```
//!
//! Entries are the non-zero histogram cells, ascending by PIN. Derived
//! totals are recomputed on load and checked against the `TOTAL` trailer.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{ModelConfig, PinHistogram, TrainedModel};
use crate::corpus::Pin;
use crate::error::{PinlabError, Result};

const MAGIC: &str = "PINMODEL";
const VERSION: &str = "v1";

/// Shortest round-tripping decimal, always with a fractional part.
fn decimal(x: f64) -> String {
    let s = x.to_string();
    if s.contains('.') {
        s
    } else {
        format!("{s}.0")
    }
}

pub fn write_model<W: Write>(model: &TrainedModel, mut w: W) -> std::io::Result<()> {
    let cfg = model.config();
    writeln!(w, "{MAGIC} {VERSION} alpha={} tau={}", decimal(cfg.alpha()), cfg.tau())?;
    for (pin, count) in model.histogram().nonzero() {
        writeln!(w, "{pin} {count}")?;
    }
    writeln!(w, "TOTAL {}", model.histogram().total_pins())?;
    w.flush()
}

fn parse_header(line: &str) -> Result<ModelConfig> {
    let bad = |m: &str| PinlabError::format(1, m.to_string());
    let mut parts = line.split(' ');
    if parts.next() != Some(MAGIC) {
        return Err(bad("missing PINMODEL header"));
    }
    match parts.next() {
        Some(VERSION) => {}
        Some(other) => {
            return Err(PinlabError::VersionMismatch {
                found: other.to_string(),
            })
        }
        None => return Err(bad("missing version")),
    }
    let alpha = parts
        .next()
        .and_then(|t| t.strip_prefix("alpha="))
        .and_then(|v| v.parse::<f64>().ok())
        .ok_or_else(|| bad("expected alpha=<decimal>"))?;
    let tau = parts
        .next()
        .and_then(|t| t.strip_prefix("tau="))
        .and_then(|v| v.parse::<u64>().ok())
        .ok_or_else(|| bad("expected tau=<int>"))?;
    if parts.next().is_some() {
        return Err(bad("trailing header fields"));
    }
    ModelConfig::new(alpha, tau).map_err(|e| bad(&e.to_string()))
}

pub fn read_model<R: BufRead>(reader: R) -> Result<TrainedModel> {
    let mut lines = reader.lines().enumerate();
    let header = match lines.next() {
        Some((_, line)) => line.map_err(|e| PinlabError::io("<reader>", e))?,
        None => return Err(PinlabError::format(1, "missing PINMODEL header")),
    };
    let config = parse_header(&header)?;

    let mut histogram = PinHistogram::new();
    let mut last: Option<Pin> = None;
    let mut trailer: Option<u64> = None;
    for (i, line) in lines {
        let n = i + 1;
        let line = line.map_err(|e| PinlabError::io("<reader>", e))?;
        if trailer.is_some() {
            return Err(PinlabError::format(n, "content after TOTAL trailer"));
        }
        if let Some(total) = line.strip_prefix("TOTAL ") {
            let total = total
                .parse()
                .map_err(|_| PinlabError::format(n, format!("bad TOTAL value {total:?}")))?;
            trailer = Some(total);
            continue;
        }
        let (pin, count) = line
            .split_once(' ')
            .ok_or_else(|| PinlabError::format(n, format!("expected `<pin> <count>`, got {line:?}")))?;
        let pin: Pin = pin
            .parse()
            .map_err(|_| PinlabError::format(n, format!("bad PIN {pin:?}")))?;
        let count: u64 = count
            .parse()
            .ok()
            .filter(|&c| c > 0)
            .ok_or_else(|| PinlabError::format(n, format!("bad count {count:?}")))?;
        if last.is_some_and(|prev| prev >= pin) {
            return Err(PinlabError::format(n, format!("entry {pin} out of order")));
        }
        last = Some(pin);
        histogram.add(pin, count);
    }
    if let Some(declared) = trailer {
        if declared != histogram.total_pins() {
            return Err(PinlabError::TotalMismatch {
                declared,
                actual: histogram.total_pins(),
            });
        }
    }
    Ok(TrainedModel::from_histogram(histogram, config))
}

pub fn serialize_model(model: &TrainedModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| PinlabError::io(path, e))?;
    write_model(model, BufWriter::new(file)).map_err(|e| PinlabError::io(path, e))
}

pub fn deserialize_model(path: impl AsRef<Path>) -> Result<TrainedModel> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| PinlabError::io(path, e))?;
    read_model(BufReader::new(file)).map_err(|e| match e {
        PinlabError::Io { source, .. } => PinlabError::io(path, source),
        other => other,
    })
}
