//! Per-record time series as CSV.

use std::io::{Read, Write};

use conediff_core::flow::TrajectoryPoint;
use serde::{Deserialize, Serialize};

pub const HEADER: &str =
    "t,L,A,kbar,omega,Kosc,k_l2sq,ks_l2sq,kss_l2sq,rho_minus,rho_plus,dt,r_L,r_A,r_kbar,r_k2,r_Kosc";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub t: f64,
    #[serde(rename = "L")]
    pub length: f64,
    #[serde(rename = "A")]
    pub area: f64,
    pub kbar: f64,
    pub omega: f64,
    #[serde(rename = "Kosc")]
    pub kosc: f64,
    pub k_l2sq: f64,
    pub ks_l2sq: f64,
    pub kss_l2sq: f64,
    pub rho_minus: f64,
    pub rho_plus: f64,
    pub dt: f64,
    #[serde(rename = "r_L")]
    pub r_l: f64,
    #[serde(rename = "r_A")]
    pub r_a: f64,
    pub r_kbar: f64,
    pub r_k2: f64,
    #[serde(rename = "r_Kosc")]
    pub r_kosc: f64,
}

impl From<&TrajectoryPoint> for SeriesRow {
    fn from(p: &TrajectoryPoint) -> Self {
        let q = &p.quantities;
        let r = &p.residuals;
        SeriesRow {
            t: q.t,
            length: q.length,
            area: q.area,
            kbar: q.kbar,
            omega: q.omega,
            kosc: q.kosc,
            k_l2sq: q.norms[0],
            ks_l2sq: q.norms[1],
            kss_l2sq: q.norms[2],
            rho_minus: q.rho_minus,
            rho_plus: q.rho_plus,
            dt: q.dt,
            r_l: r.r_l,
            r_a: r.r_a,
            r_kbar: r.r_kbar,
            r_k2: r.r_k2,
            r_kosc: r.r_kosc,
        }
    }
}

/// Writes the header and one row per record. Floats use the shortest
/// representation that parses back to the same value.
pub fn write_series<W: Write>(out: W, trajectory: &[TrajectoryPoint]) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(HEADER.split(','))?;
    for p in trajectory {
        w.serialize(SeriesRow::from(p))?;
    }
    w.flush()?;
    Ok(())
}

pub fn series_string(trajectory: &[TrajectoryPoint]) -> String {
    let mut buf = Vec::new();
    write_series(&mut buf, trajectory).expect("writing to memory");
    String::from_utf8(buf).expect("csv is ascii")
}

pub fn read_series<R: Read>(input: R) -> csv::Result<Vec<SeriesRow>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let headers = r.headers()?.clone();
    if headers.iter().collect::<Vec<_>>().join(",") != HEADER {
        return Err(csv::Error::from(std::io::Error::new(
            std::io::ErrorKind::InvalidData,
            "unexpected series header",
        )));
    }
    r.deserialize().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use conediff_core::diagnostics::{QuantityRecord, ResidualRecord};

    fn point(t: f64) -> TrajectoryPoint {
        TrajectoryPoint {
            quantities: QuantityRecord {
                t,
                length: std::f64::consts::FRAC_PI_2,
                area: 0.1 + 0.2,
                kbar: 1.0 / 3.0,
                omega: 0.25,
                kosc: 1e-300,
                norms: [1.5, 2.5e-17, 3.0, 0.0, 0.0, 0.0],
                rho_minus: 1.0,
                rho_plus: 0.999_999_999_999_9,
                dt: 1e-7,
                m: 1,
                ..Default::default()
            },
            residuals: ResidualRecord {
                r_l: 1.234e-5,
                ..Default::default()
            },
        }
    }

    #[test]
    fn empty_trajectory_is_header_only() {
        assert_eq!(series_string(&[]), format!("{HEADER}\n"));
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let traj: Vec<_> = [0.0, 0.1, 1.0 / 7.0].iter().map(|&t| point(t)).collect();
        let text = series_string(&traj);
        assert!(text.starts_with(HEADER));
        assert!(!text.contains('\r'));
        let rows = read_series(text.as_bytes()).unwrap();
        assert_eq!(rows.len(), 3);
        for (row, p) in rows.iter().zip(&traj) {
            assert_eq!(*row, SeriesRow::from(p));
            assert_eq!(row.area.to_bits(), (0.1f64 + 0.2).to_bits());
        }
    }

    #[test]
    fn wrong_header_rejected() {
        assert!(read_series("a,b\n1,2\n".as_bytes()).is_err());
    }
}
