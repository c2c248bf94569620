//! Observation records and their CSV form.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::HarnessError;
use crate::excitation::ExcitationMode;
use crate::lattice::LatticeKind;

pub const CSV_HEADER: &str = "kind,L,instance,excitation,epsilon,ground_cost,delta_e,loop_index,S,R2,theta2_gauged,theta2_raw,wx,wy,overlap,distance";

/// One CSV row. Rows with `loop_index == None` summarise an instance (or an
/// instance at one epsilon); the others describe single loops.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub kind: LatticeKind,
    pub size: usize,
    pub instance: u64,
    pub excitation: ExcitationMode,
    pub epsilon: Option<f64>,
    pub ground_cost: f64,
    pub delta_e: f64,
    pub loop_index: Option<usize>,
    pub s: usize,
    pub r2: Option<f64>,
    pub theta2_gauged: Option<f64>,
    pub theta2_raw: Option<f64>,
    pub winding: Option<(i64, i64)>,
    pub overlap: Option<f64>,
    pub distance: Option<f64>,
}

fn float(out: &mut String, v: Option<f64>) {
    if let Some(v) = v {
        let _ = write!(out, "{v:.16e}");
    }
}

impl Record {
    pub fn is_summary(&self) -> bool {
        self.loop_index.is_none()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::with_capacity(256);
        let _ = write!(
            s,
            "{},{},{},{},",
            self.kind, self.size, self.instance, self.excitation
        );
        float(&mut s, self.epsilon);
        s.push(',');
        float(&mut s, Some(self.ground_cost));
        s.push(',');
        float(&mut s, Some(self.delta_e));
        s.push(',');
        if let Some(i) = self.loop_index {
            let _ = write!(s, "{i}");
        }
        let _ = write!(s, ",{},", self.s);
        float(&mut s, self.r2);
        s.push(',');
        float(&mut s, self.theta2_gauged);
        s.push(',');
        float(&mut s, self.theta2_raw);
        s.push(',');
        if let Some((wx, wy)) = self.winding {
            let _ = write!(s, "{wx},{wy}");
        } else {
            s.push(',');
        }
        s.push(',');
        float(&mut s, self.overlap);
        s.push(',');
        float(&mut s, self.distance);
        s
    }

    pub fn from_csv(line: &str) -> Result<Self, String> {
        let f: Vec<&str> = line.trim_end_matches(['\r', '\n']).split(',').collect();
        if f.len() != 16 {
            return Err(format!("expected 16 fields, found {}", f.len()));
        }
        fn req<T: std::str::FromStr>(s: &str, name: &str) -> Result<T, String> {
            s.parse().map_err(|_| format!("bad {name} `{s}`"))
        }
        fn opt<T: std::str::FromStr>(s: &str, name: &str) -> Result<Option<T>, String> {
            if s.is_empty() {
                Ok(None)
            } else {
                req(s, name).map(Some)
            }
        }
        let wx: Option<i64> = opt(f[12], "wx")?;
        let wy: Option<i64> = opt(f[13], "wy")?;
        Ok(Self {
            kind: f[0].parse().map_err(|e| format!("{e}"))?,
            size: req(f[1], "L")?,
            instance: req(f[2], "instance")?,
            excitation: f[3].parse()?,
            epsilon: opt(f[4], "epsilon")?,
            ground_cost: req(f[5], "ground_cost")?,
            delta_e: req(f[6], "delta_e")?,
            loop_index: opt(f[7], "loop_index")?,
            s: req(f[8], "S")?,
            r2: opt(f[9], "R2")?,
            theta2_gauged: opt(f[10], "theta2_gauged")?,
            theta2_raw: opt(f[11], "theta2_raw")?,
            winding: wx.zip(wy),
            overlap: opt(f[14], "overlap")?,
            distance: opt(f[15], "distance")?,
        })
    }

    /// Final output order: stratum, instance, epsilon, then the summary row
    /// before its loops.
    pub fn order(&self, other: &Self) -> Ordering {
        (self.kind, self.size, self.instance)
            .cmp(&(other.kind, other.size, other.instance))
            .then_with(|| {
                self.epsilon
                    .unwrap_or(-1.0)
                    .total_cmp(&other.epsilon.unwrap_or(-1.0))
            })
            .then_with(|| self.loop_index.cmp(&other.loop_index))
    }
}

pub fn write_records<W: Write>(mut out: W, records: &[Record]) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.to_csv())?;
    }
    Ok(())
}

/// Read a record file. A final line without a newline is an interrupted
/// write and is ignored.
pub fn read_records(path: &Path) -> Result<Vec<Record>, HarnessError> {
    let file = std::fs::File::open(path)?;
    let mut reader = BufReader::new(file);
    let mut records = Vec::new();
    let mut line = String::new();
    let mut number = 0;
    loop {
        line.clear();
        if reader.read_line(&mut line)? == 0 {
            break;
        }
        number += 1;
        if !line.ends_with('\n') {
            break;
        }
        let text = line.trim_end();
        if text.is_empty() || text == CSV_HEADER {
            continue;
        }
        let r = Record::from_csv(text).map_err(|message| HarnessError::Record {
            path: path.to_path_buf(),
            line: number,
            message,
        })?;
        records.push(r);
    }
    Ok(records)
}
