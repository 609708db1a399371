//! CSV encodings of trajectories, metric tables and PCA projections.
//!
//! All files use `,` separators, LF line endings and 17 significant digits
//! for every real number, so values parse back bit-for-bit.

use std::io::{BufRead, Write};

use mapsim_core::analysis::PcaResult;
use mapsim_core::dynamics::Trajectory;
use mapsim_core::metrics::MetricsRecord;
use mapsim_core::topology::ArchKind;

use crate::config::PaperConfig;
use crate::HarnessError;

/// Formats a double with 17 significant digits.
pub fn real(v: f64) -> String {
    format!("{v:.16e}")
}

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

fn parse_real(field: &str, what: &'static str) -> Result<f64, HarnessError> {
    let v: f64 = field.parse().map_err(|_| HarnessError::Parse {
        what,
        detail: format!("not a number: {field:?}"),
    })?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(HarnessError::Parse {
            what,
            detail: format!("non-finite value {field:?}"),
        })
    }
}

/// `t,x1,...,xN`, one row per step.
pub fn write_trajectory<W: Write>(out: W, trajectory: &Trajectory) -> Result<(), HarnessError> {
    let n = trajectory.system().n_agents;
    let mut w = writer(out);
    let mut header = vec!["t".to_string()];
    header.extend((1..=n).map(|i| format!("x{i}")));
    w.write_record(&header)?;
    for t in 0..trajectory.len() {
        let mut row = vec![t.to_string()];
        row.extend(trajectory.at(t).iter().map(|&v| real(v)));
        w.write_record(&row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Reads a trajectory CSV back into its state rows.
pub fn read_trajectory<R: std::io::Read>(input: R) -> Result<Vec<Vec<f64>>, HarnessError> {
    let mut r = csv::Reader::from_reader(input);
    let mut rows = Vec::new();
    for (expected_t, record) in r.records().enumerate() {
        let record = record?;
        let t: usize = record.get(0).and_then(|v| v.parse().ok()).ok_or(HarnessError::Parse {
            what: "trajectory",
            detail: format!("bad step index on row {expected_t}"),
        })?;
        if t != expected_t {
            return Err(HarnessError::Parse {
                what: "trajectory",
                detail: format!("step {t} out of order"),
            });
        }
        rows.push(
            record
                .iter()
                .skip(1)
                .map(|v| parse_real(v, "trajectory"))
                .collect::<Result<_, _>>()?,
        );
    }
    Ok(rows)
}

/// `arch,s,f,e,b,W_T,sigma_x,tau,W_1,...,W_N`.
pub fn write_metrics<W: Write>(out: W, records: &[MetricsRecord]) -> Result<(), HarnessError> {
    let n = records.iter().map(|r| r.per_agent_work.len()).max().unwrap_or(0);
    let mut w = writer(out);
    let mut header: Vec<String> = ["arch", "s", "f", "e", "b", "W_T", "sigma_x", "tau"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend((1..=n).map(|i| format!("W_{i}")));
    w.write_record(&header)?;
    for r in records {
        let mut row = vec![
            r.arch.code().to_string(),
            real(r.s),
            real(r.f),
            real(r.e),
            real(r.b),
            real(r.total_work),
            real(r.dispersion),
            r.transition_time.to_string(),
        ];
        row.extend(r.per_agent_work.iter().map(|&v| real(v)));
        row.resize(header.len(), String::new());
        w.write_record(&row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Parses a metrics table. The file carries no `w` column, so records come
/// back with `w = 1`.
pub fn read_metrics<R: std::io::Read>(input: R) -> Result<Vec<MetricsRecord>, HarnessError> {
    let mut r = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for record in r.records() {
        let record = record?;
        let field = |i: usize| record.get(i).unwrap_or("");
        let arch: ArchKind = field(0).parse().map_err(|e: mapsim_core::Error| HarnessError::Parse {
            what: "metrics",
            detail: e.to_string(),
        })?;
        let transition_time = field(7).parse().map_err(|_| HarnessError::Parse {
            what: "metrics",
            detail: format!("bad tau {:?}", field(7)),
        })?;
        let per_agent_work = record
            .iter()
            .skip(8)
            .filter(|v| !v.is_empty())
            .map(|v| parse_real(v, "metrics"))
            .collect::<Result<_, _>>()?;
        out.push(MetricsRecord {
            arch,
            s: parse_real(field(1), "metrics")?,
            f: parse_real(field(2), "metrics")?,
            e: parse_real(field(3), "metrics")?,
            b: parse_real(field(4), "metrics")?,
            w: 1.0,
            total_work: parse_real(field(5), "metrics")?,
            dispersion: parse_real(field(6), "metrics")?,
            transition_time,
            per_agent_work,
        });
    }
    Ok(out)
}

/// `arch,config,pc1,pc2` rows followed by `# explained: r1,r2,r3`.
pub fn write_pca<W: Write>(out: W, result: &PcaResult<(ArchKind, PaperConfig)>) -> Result<(), HarnessError> {
    let mut w = writer(out);
    w.write_record(["arch", "config", "pc1", "pc2"])?;
    for (i, (arch, cfg)) in result.row_labels.iter().enumerate() {
        w.write_record([
            arch.code().to_string(),
            cfg.label().to_string(),
            real(result.projection[(i, 0)]),
            real(result.projection[(i, 1)]),
        ])?;
    }
    let mut inner = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    let ratios: Vec<String> = result.explained_variance_ratio.iter().map(|&v| real(v)).collect();
    writeln!(inner, "# explained: {}", ratios.join(",")).map_err(csv::Error::from)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PcaRow {
    pub arch: String,
    pub config: String,
    pub pc1: f64,
    pub pc2: f64,
}

/// Parses a PCA file into its rows and explained-variance ratios.
pub fn read_pca<R: BufRead>(input: R) -> Result<(Vec<PcaRow>, Vec<f64>), HarnessError> {
    let mut rows = Vec::new();
    let mut explained = None;
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(csv::Error::from)?;
        if let Some(rest) = line.strip_prefix("# explained:") {
            explained = Some(
                rest.trim()
                    .split(',')
                    .map(|v| parse_real(v, "pca"))
                    .collect::<Result<Vec<_>, _>>()?,
            );
            continue;
        }
        if i == 0 || line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(HarnessError::Parse {
                what: "pca",
                detail: format!("expected 4 fields on line {}", i + 1),
            });
        }
        rows.push(PcaRow {
            arch: fields[0].to_string(),
            config: fields[1].to_string(),
            pc1: parse_real(fields[2], "pca")?,
            pc2: parse_real(fields[3], "pca")?,
        });
    }
    let explained = explained.ok_or(HarnessError::Parse {
        what: "pca",
        detail: "missing explained-variance line".to_string(),
    })?;
    Ok((rows, explained))
}

#[cfg(test)]
mod tests {
    use super::*;
    use mapsim_core::dynamics::simulate;
    use mapsim_core::topology::{build_architecture, ArchitectureSpec, FlowParams};

    #[test]
    fn trajectory_layout() {
        let sys = build_architecture(ArchitectureSpec::new(ArchKind::P, 2).unwrap(), FlowParams::new(0.8, 0.1)).unwrap();
        let mut buf = Vec::new();
        write_trajectory(&mut buf, &simulate(&sys, 1)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "t,x1,x2\n0,5.0000000000000000e-1,5.0000000000000000e-1\n1,9.0000000000000002e-1,9.0000000000000002e-1\n"
        );
        assert!(!text.contains('\r'));
        let back = read_trajectory(text.as_bytes()).unwrap();
        assert_eq!(back[1], vec![0.9, 0.9]);
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(real(0.1), "1.0000000000000001e-1");
        assert_eq!(real(1.0), "1.0000000000000000e0");
        assert_eq!(real(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert!(read_trajectory("t,x1\n0,abc\n".as_bytes()).is_err());
        assert!(read_trajectory("t,x1\n1,0.5\n".as_bytes()).is_err());
        assert!(read_trajectory("t,x1\n0,NaN\n".as_bytes()).is_err());
        assert!(read_metrics("arch,s\nQQ,1\n".as_bytes()).is_err());
        assert!(read_pca("arch,config,pc1,pc2\nP,A,1,2\n".as_bytes()).is_err());
    }
}
