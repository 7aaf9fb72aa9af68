//! Serialized forms shared by the CLI and the HTTP service.
//!
//! Every float is written with 17 significant digits (`%.17g` style), which
//! round-trips exactly; the JSON and CSV renderings of one document carry
//! identical values.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

use crate::config::Tolerances;
use crate::error::Result;
use crate::hopf::{fiber, FiberSamples, GaugeKind, PointS2};
use crate::quat::Quaternion;
use crate::stereo::{fit_circle_or_line, proj_s3, CircleOrLine3};

pub const SCHEMA_VERSION: &str = "1";

/// A sampled fiber, its stereographic projection and the fitted shape.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberDocument {
    pub schema_version: &'static str,
    pub base_point: [f64; 3],
    pub gauge_kind: &'static str,
    pub gauge: [f64; 4],
    pub samples: usize,
    pub points_s3: Vec<[f64; 4]>,
    /// `null` for a sample at the projection pole.
    pub projected: Vec<Option<[f64; 3]>>,
    pub fit: CircleOrLine3,
    #[serde(skip)]
    pub t_values: Vec<f64>,
}

impl FiberDocument {
    pub fn build(base: PointS2, gauge: GaugeKind, n_samples: usize) -> Result<Self> {
        Self::from_samples(&fiber(base, gauge, n_samples)?)
    }

    pub fn from_samples(samples: &FiberSamples) -> Result<Self> {
        let tol = Tolerances::global();
        let projected: Vec<Option<[f64; 3]>> = samples
            .points
            .iter()
            .map(|q| proj_s3(*q).ok().map(|p| p.to_array()))
            .collect();
        let fit_input: Vec<_> = samples
            .points
            .iter()
            .filter(|q| q.quaternion().distance(&Quaternion::ONE) > tol.pole_exclusion)
            .filter_map(|q| proj_s3(*q).ok())
            .collect();
        let fit = fit_circle_or_line(&fit_input).map_err(|e| e.context("projected fiber"))?;
        Ok(Self {
            schema_version: SCHEMA_VERSION,
            base_point: samples.base.to_array(),
            gauge_kind: samples.gauge_kind.as_str(),
            gauge: samples.gauge.to_array(),
            samples: samples.len(),
            points_s3: samples.points.iter().map(|q| q.to_array()).collect(),
            projected,
            fit: fit.shape,
            t_values: samples.t_values.clone(),
        })
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    /// One row per sample: `index,t,w,x,y,z,px,py,pz`, projected columns
    /// empty at the pole.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["index", "t", "w", "x", "y", "z", "px", "py", "pz"])
            .expect("in-memory csv write");
        for (i, (q, p)) in self.points_s3.iter().zip(&self.projected).enumerate() {
            let mut row = vec![i.to_string(), format_sig17(self.t_values[i])];
            row.extend(q.iter().map(|v| format_sig17(*v)));
            match p {
                Some(p) => row.extend(p.iter().map(|v| format_sig17(*v))),
                None => row.extend(std::iter::repeat_n(String::new(), 3)),
            }
            w.write_record(&row).expect("in-memory csv write");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("csv is utf-8")
    }
}

/// Formats a float like C's `%.17g`. Zero of either sign prints as `0`.
pub fn format_sig17(x: f64) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        format!("{}e{exp}", strip_zeros(mantissa))
    } else {
        let decimals = (16 - exp) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_owned()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Compact JSON formatter writing floats through [`format_sig17`].
#[derive(Debug, Default, Clone, Copy)]
pub struct Sig17Formatter;

impl Formatter for Sig17Formatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_sig17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Compact JSON with 17-significant-digit floats and a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig17Formatter);
    value.serialize(&mut ser).expect("serializing to memory cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json writes utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sig17_formatting() {
        assert_eq!(format_sig17(0.0), "0");
        assert_eq!(format_sig17(-0.0), "0");
        assert_eq!(format_sig17(1.0), "1");
        assert_eq!(format_sig17(-2.5), "-2.5");
        assert_eq!(format_sig17(0.1), "0.10000000000000001");
        assert_eq!(format_sig17(1e-5), "1.0000000000000001e-5");
        assert_eq!(format_sig17(1.5e20), "1.5e20");
        assert_eq!(format_sig17(123456.0), "123456");
        assert_eq!(format_sig17(std::f64::consts::PI), "3.1415926535897931");
    }

    proptest! {
        #[test]
        fn sig17_round_trips(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL) {
            let s = format_sig17(x);
            let back: f64 = s.parse().unwrap();
            prop_assert_eq!(back, x);
            // and it is valid JSON
            let parsed: f64 = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(parsed, x);
        }
    }

    #[test]
    fn line_document_for_x_axis_fiber() {
        let base = PointS2::new(1.0, 0.0, 0.0).unwrap();
        let doc = FiberDocument::build(base, GaugeKind::Auto, 16).unwrap();
        assert_eq!(doc.gauge_kind, "r1");
        // t = 3π/2 sends i·e^{it} to (1,0,0,0)
        assert_eq!(doc.projected[12], None);
        assert_eq!(doc.projected.iter().filter(|p| p.is_none()).count(), 1);
        let json = doc.to_json();
        assert!(json.contains(r#""fit":{"kind":"line","point":[0,0,0],"direction":[1,0,0]}"#), "{json}");
    }

    #[test]
    fn csv_and_json_carry_identical_values() {
        let base = PointS2::new(0.0, 0.6, 0.8).unwrap();
        let doc = FiberDocument::build(base, GaugeKind::R2, 9).unwrap();
        let json: serde_json::Value = serde_json::from_str(&doc.to_json()).unwrap();
        let csv_text = doc.to_csv();
        let mut rdr = csv::Reader::from_reader(csv_text.as_bytes());
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.unwrap();
            for k in 0..4 {
                let from_csv: f64 = rec[2 + k].parse().unwrap();
                assert_eq!(from_csv, json["points_s3"][i][k].as_f64().unwrap());
            }
            for k in 0..3 {
                let from_csv: f64 = rec[6 + k].parse().unwrap();
                assert_eq!(from_csv, json["projected"][i][k].as_f64().unwrap());
            }
        }
    }
}
