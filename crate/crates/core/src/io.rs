//! Curve JSON files and the fixed-precision JSON writer used for reports.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::ambient::{AmbientVector, CircleAnsatzCurve, CircleTerm, Curve, DiscreteCurve};
use crate::error::{PolycurveError, Result};

/// On-disk curve representation, tagged by `type`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum CurveFile {
    Ansatz {
        terms: Vec<CircleTerm>,
        e0: Vec<f64>,
    },
    Discrete {
        #[serde(rename = "L")]
        period: f64,
        samples: Vec<Vec<f64>>,
    },
}

impl From<&Curve> for CurveFile {
    fn from(curve: &Curve) -> Self {
        match curve {
            Curve::Ansatz(c) => CurveFile::Ansatz {
                terms: c.terms().to_vec(),
                e0: c.constant().coords().to_vec(),
            },
            Curve::Discrete(d) => CurveFile::from(d),
        }
    }
}

impl From<&DiscreteCurve> for CurveFile {
    fn from(d: &DiscreteCurve) -> Self {
        CurveFile::Discrete {
            period: d.period(),
            samples: d.samples().iter().map(|x| x.coords().to_vec()).collect(),
        }
    }
}

impl TryFrom<CurveFile> for Curve {
    type Error = PolycurveError;

    /// Runs every constructor check on the file contents.
    fn try_from(file: CurveFile) -> Result<Curve> {
        match file {
            CurveFile::Ansatz { terms, e0 } => {
                let terms = terms
                    .into_iter()
                    .map(|t| {
                        Ok(CircleTerm::new(
                            t.frequency,
                            AmbientVector::new(t.e_cos.into_coords())?,
                            AmbientVector::new(t.e_sin.into_coords())?,
                        ))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(CircleAnsatzCurve::new(terms, AmbientVector::new(e0)?)?.into())
            }
            CurveFile::Discrete { period, samples } => {
                if !(period.is_finite() && period > 0.0) {
                    return Err(PolycurveError::InvalidCurve("L must be positive".into()));
                }
                let samples = samples
                    .into_iter()
                    .map(AmbientVector::new)
                    .collect::<Result<Vec<_>>>()?;
                if samples.iter().any(|x| x.dim() != samples[0].dim()) {
                    return Err(PolycurveError::InvalidCurve("samples differ in dimension".into()));
                }
                Ok(DiscreteCurve::new(samples, period)?.into())
            }
        }
    }
}

/// Parses and validates a curve from JSON text.
pub fn curve_from_json(text: &str) -> Result<Curve> {
    let file: CurveFile = serde_json::from_str(text).map_err(|e| PolycurveError::Parse(e.to_string()))?;
    Curve::try_from(file)
}

pub fn read_curve(path: &Path) -> Result<Curve> {
    curve_from_json(&fs::read_to_string(path)?)
}

/// Pretty JSON with every float written to 17 significant digits, so the
/// text round-trips bit-for-bit. Non-finite floats become `null`.
pub struct PreciseFormatter<'a>(PrettyFormatter<'a>);

impl Default for PreciseFormatter<'_> {
    fn default() -> Self {
        Self(PrettyFormatter::new())
    }
}

fn write_precise<W: ?Sized + Write>(writer: &mut W, value: f64) -> io::Result<()> {
    if value.is_finite() {
        write!(writer, "{value:.16e}")
    } else {
        writer.write_all(b"null")
    }
}

impl Formatter for PreciseFormatter<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write_precise(writer, value)
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        write_precise(writer, value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

/// Serialises `value` with [`PreciseFormatter`].
pub fn to_precise_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, PreciseFormatter::default());
    value
        .serialize(&mut ser)
        .map_err(|e| PolycurveError::Parse(e.to_string()))?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

pub fn curve_to_json(curve: &Curve) -> Result<String> {
    to_precise_json(&CurveFile::from(curve))
}

pub fn write_curve(path: &Path, curve: &Curve) -> Result<()> {
    fs::write(path, curve_to_json(curve)?)?;
    Ok(())
}

/// Serialises a discrete curve in the curve-file layout.
pub fn serialize_discrete<S: Serializer>(curve: &DiscreteCurve, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    CurveFile::from(curve).serialize(serializer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_biharmonic_two_freq, make_r_circle};

    #[test]
    fn ansatz_round_trip_is_exact() {
        let curve: Curve = make_biharmonic_two_freq(0.7, 3).unwrap().curve.into();
        let text = curve_to_json(&curve).unwrap();
        assert_eq!(curve_from_json(&text).unwrap(), curve);
    }

    #[test]
    fn discrete_round_trip_is_exact() {
        let curve: Curve = make_r_circle(3, 2).unwrap().sample(32).unwrap().into();
        let text = curve_to_json(&curve).unwrap();
        assert!(text.contains("\"type\": \"discrete\""));
        assert_eq!(curve_from_json(&text).unwrap(), curve);
    }

    #[test]
    fn floats_have_seventeen_digits() {
        let text = to_precise_json(&[0.5_f64, 1.0 / 3.0]).unwrap();
        assert!(text.contains("5.0000000000000000e-1"));
        assert!(text.contains("3.3333333333333331e-1"));
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(matches!(curve_from_json("{"), Err(PolycurveError::Parse(_))));
        assert!(matches!(
            curve_from_json(r#"{"type":"spline","knots":[]}"#),
            Err(PolycurveError::Parse(_))
        ));
        let off_sphere = r#"{"type":"ansatz","terms":[{"a":1,"e_cos":[0.5,0,0],"e_sin":[0,0.5,0]}],"e0":[0,0,0]}"#;
        assert!(matches!(curve_from_json(off_sphere), Err(PolycurveError::InvalidCurve(_))));
    }
}
