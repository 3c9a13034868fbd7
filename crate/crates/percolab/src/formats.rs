//! Text formats: configuration files, estimate and ratio CSV, switch
//! records as JSON lines, and region dumps.

use std::fmt::Write as _;
use std::io;

use percolab_core::colorswitch::SwitchReport;
use percolab_core::estimator::{Estimate, Ratio};
use percolab_core::regions::Region;
use percolab_core::{BoxRegion, ColorSequence, Configuration, Edge, Orientation, Vertex};
use serde::{Deserialize, Serialize};

pub const CFG_HEADER: &str = "percolation-cfg v1";

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unexpected end of input")]
    Truncated,
}

fn perr(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse { line, msg: msg.into() }
}

/// Configuration file: header, `box cx cy N`, then `H|V x y 0|1` for every
/// edge of the box in canonical order. Every line ends with `\n`.
pub fn encode_cfg(cfg: &Configuration) -> String {
    let b = cfg.region();
    let mut out = String::with_capacity(16 * cfg.edge_count() + 64);
    out.push_str(CFG_HEADER);
    out.push('\n');
    writeln!(out, "box {} {} {}", b.center.x, b.center.y, b.radius).unwrap();
    for (e, open) in cfg.iter() {
        let o = match e.orientation {
            Orientation::Horizontal => 'H',
            Orientation::Vertical => 'V',
        };
        writeln!(out, "{o} {} {} {}", e.base.x, e.base.y, open as u8).unwrap();
    }
    out
}

/// Strict inverse of [`encode_cfg`]: anything `encode_cfg` would not have
/// produced is rejected, so decoding and re-encoding is byte-exact.
pub fn decode_cfg(text: &str) -> Result<Configuration, FormatError> {
    let body = text.strip_suffix('\n').ok_or(FormatError::Truncated)?;
    let mut lines = body.split('\n').enumerate().map(|(i, l)| (i + 1, l));
    let (_, head) = lines.next().ok_or(FormatError::Truncated)?;
    if head != CFG_HEADER {
        return Err(perr(1, "bad header"));
    }
    let (ln, bline) = lines.next().ok_or(FormatError::Truncated)?;
    let f: Vec<&str> = bline.split(' ').collect();
    if f.len() != 4 || f[0] != "box" {
        return Err(perr(ln, "expected `box <cx> <cy> <N>`"));
    }
    let cx = int(ln, f[1])?;
    let cy = int(ln, f[2])?;
    let radius: u32 = canonical(ln, f[3])?;
    let region = BoxRegion::new(Vertex::new(cx, cy), radius);
    let mut cfg = Configuration::all_closed(region);
    let expected = region.edges();
    for want in expected {
        let (ln, line) = lines.next().ok_or(FormatError::Truncated)?;
        let f: Vec<&str> = line.split(' ').collect();
        if f.len() != 4 {
            return Err(perr(ln, "expected `H|V <x> <y> 0|1`"));
        }
        let e = match f[0] {
            "H" => Edge::h(int(ln, f[1])?, int(ln, f[2])?),
            "V" => Edge::v(int(ln, f[1])?, int(ln, f[2])?),
            _ => return Err(perr(ln, "orientation must be H or V")),
        };
        if e != want {
            return Err(perr(ln, format!("expected edge {want}, found {e}")));
        }
        let open = match f[3] {
            "0" => false,
            "1" => true,
            _ => return Err(perr(ln, "status must be 0 or 1")),
        };
        cfg.set(e, open).map_err(|err| perr(ln, err.to_string()))?;
    }
    if let Some((ln, _)) = lines.next() {
        return Err(perr(ln, "trailing lines"));
    }
    Ok(cfg)
}

fn int(line: usize, s: &str) -> Result<i32, FormatError> {
    canonical(line, s)
}

/// Parses and insists on the canonical decimal spelling.
fn canonical<T: std::str::FromStr + ToString>(line: usize, s: &str) -> Result<T, FormatError> {
    let v: T = s.parse().map_err(|_| perr(line, format!("bad number {s:?}")))?;
    if v.to_string() != s {
        return Err(perr(line, format!("non-canonical number {s:?}")));
    }
    Ok(v)
}

/// One row of an estimate table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub sigma: String,
    pub n: u32,
    #[serde(rename = "N")]
    pub big: u32,
    pub ell: u32,
    pub trials: u64,
    pub successes: u64,
    pub phat: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    pub seed: u64,
}

impl EstimateRow {
    pub fn new(sigma: &ColorSequence, n: u32, big: u32, ell: u32, e: &Estimate) -> Self {
        let (wilson_lo, wilson_hi) = e.wilson95();
        EstimateRow {
            sigma: sigma.to_string(),
            n,
            big,
            ell,
            trials: e.trials,
            successes: e.successes,
            phat: e.phat(),
            wilson_lo,
            wilson_hi,
            seed: e.seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub sigma_a: String,
    pub sigma_b: String,
    #[serde(rename = "N")]
    pub big: u32,
    pub ratio: f64,
    pub ratio_lo: f64,
    pub ratio_hi: f64,
}

impl From<&Ratio> for RatioRow {
    fn from(r: &Ratio) -> Self {
        RatioRow { sigma_a: r.a.to_string(), sigma_b: r.b.to_string(), big: r.outer, ratio: r.ratio, ratio_lo: r.lo, ratio_hi: r.hi }
    }
}

/// Fitted slope of `log p` against `log(N/n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeRow {
    pub sigma: String,
    pub n: u32,
    pub points: usize,
    pub slope: f64,
    pub stderr: f64,
    pub intercept: f64,
}

pub fn write_csv<W: io::Write, R: Serialize>(w: W, rows: &[R]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_csv<R: io::Read, T: for<'de> Deserialize<'de>>(r: R) -> csv::Result<Vec<T>> {
    csv::Reader::from_reader(r).deserialize().collect()
}

/// `log N  log p` pairs for plotting, natural logarithms; cells with no
/// successes are left out.
pub fn gnuplot_data(sigma: &ColorSequence, n: u32, points: &[(u32, Estimate)]) -> String {
    let mut out = format!("# sigma {sigma} n {n}\n# logN logp\n");
    for (big, e) in points {
        if e.successes > 0 {
            writeln!(out, "{} {}", (*big as f64).ln(), e.phat().ln()).unwrap();
        }
    }
    out
}

/// A switch pipeline outcome as one JSON object.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchRecord {
    pub trial: u64,
    pub seed: u64,
    pub sigma: String,
    pub output: String,
    pub extracted: bool,
    pub region_size: Option<usize>,
    pub reassigned: Option<usize>,
    pub qualifying: bool,
    pub flipped: bool,
    pub shifted: bool,
    pub detected: Option<bool>,
    pub failure: Option<String>,
}

impl SwitchRecord {
    pub fn new(trial: u64, seed: u64, r: &SwitchReport) -> Self {
        SwitchRecord {
            trial,
            seed,
            sigma: r.sigma.to_string(),
            output: r.output.to_string(),
            extracted: r.extracted,
            region_size: r.region_size,
            reassigned: r.reassigned,
            qualifying: r.qualifying,
            flipped: r.flipped,
            shifted: r.shifted,
            detected: r.detected,
            failure: r.failure.map(|s| s.name().to_string()),
        }
    }
}

pub fn write_json_lines<W: io::Write, T: Serialize>(mut w: W, items: &[T]) -> io::Result<()> {
    for item in items {
        serde_json::to_writer(&mut w, item)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Curve points in doubled coordinates, then the edges of the region in
/// canonical order.
pub fn dump_region(region: &Region) -> String {
    let pts = region.curve.points();
    let mut out = format!("curve {} (doubled coordinates)\n", pts.len());
    for p in pts {
        writeln!(out, "{} {}", p.x, p.y).unwrap();
    }
    writeln!(out, "edges {}", region.len()).unwrap();
    for e in region.edges().iter() {
        writeln!(out, "{e}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use percolab_core::config::{sample_critical, RngSeed};

    #[test]
    fn small_file() {
        let mut cfg = Configuration::all_closed(BoxRegion::new(Vertex::new(2, -1), 1));
        cfg.set(Edge::v(3, -2), true).unwrap();
        let text = encode_cfg(&cfg);
        assert!(text.starts_with("percolation-cfg v1\nbox 2 -1 1\nH 1 -2 0\nV 1 -2 0\nH 2 -2 0\nV 2 -2 0\nV 3 -2 1\n"));
        assert_eq!(text.lines().count(), 2 + 12);
        assert_eq!(decode_cfg(&text).unwrap(), cfg);
    }

    #[test]
    fn strict_decoding() {
        let text = encode_cfg(&sample_critical(BoxRegion::centered(2), RngSeed::new(1, 1)));
        assert_eq!(decode_cfg(text.trim_end()), Err(FormatError::Truncated));
        assert!(decode_cfg(&text.replacen("box 0 0 2", "box 0 0 02", 1)).is_err());
        assert!(decode_cfg(&text.replacen("H -2 -2", "V -2 -2", 1)).is_err());
        assert!(decode_cfg(&format!("{text}H 0 0 1\n")).is_err());
        let cut: String = text.lines().take(10).map(|l| format!("{l}\n")).collect();
        assert_eq!(decode_cfg(&cut), Err(FormatError::Truncated));
    }

    #[test]
    fn csv_header() {
        let s: ColorSequence = "OC*".parse().unwrap();
        let row = EstimateRow::new(&s, 2, 16, 5, &Estimate::new(3, 10, 7));
        let mut buf = Vec::new();
        write_csv(&mut buf, std::slice::from_ref(&row)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), "sigma,n,N,ell,trials,successes,phat,wilson_lo,wilson_hi,seed");
        assert_eq!(read_csv::<_, EstimateRow>(text.as_bytes()).unwrap(), vec![row]);
    }
}
