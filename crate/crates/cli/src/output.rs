//! Payload formatting: CSV, JSON and SVG.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// Shortest decimal string that parses back to the same `f64`. Negative zero
/// prints as `0`.
pub fn real(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    if (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// JSON number for a real, with negative zero folded to zero.
pub fn json_real(v: f64) -> Value {
    let v = if v == 0.0 { 0.0 } else { v };
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

pub fn json_object<'a>(fields: impl IntoIterator<Item = (&'a str, Value)>) -> Value {
    Value::Object(
        fields
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect::<Map<_, _>>(),
    )
}

/// Named real columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => {
                let mut s =
                    serde_json::to_string_pretty(&self.to_json()).expect("table serializes");
                s.push('\n');
                s
            }
            Format::Svg => self.to_svg(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| real(*v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    json_object(
                        self.columns
                            .iter()
                            .copied()
                            .zip(row.iter().map(|v| json_real(*v))),
                    )
                })
                .collect(),
        )
    }

    /// Polyline of the last two columns.
    pub fn to_svg(&self) -> String {
        let n = self.columns.len();
        let pts: Vec<(f64, f64)> = self.rows.iter().map(|r| (r[n - 2], r[n - 1])).collect();
        svg_polyline(&pts, self.columns[n - 2], self.columns[n - 1])
    }
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 0.05;

fn bounds(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo > 0.0 {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

fn svg_polyline(pts: &[(f64, f64)], xname: &str, yname: &str) -> String {
    let (xmin, xmax) = bounds(pts.iter().map(|p| p.0));
    let (ymin, ymax) = bounds(pts.iter().map(|p| p.1));
    let (left, top) = (MARGIN * WIDTH, MARGIN * HEIGHT);
    let (w, h) = (WIDTH - 2.0 * left, HEIGHT - 2.0 * top);
    let sx = w / (xmax - xmin);
    let sy = h / (ymax - ymin);
    // screen = (left + sx (x - xmin), top + h - sy (y - ymin))
    let transform = format!(
        "X = {} + {} * ({} - {}); Y = {} - {} * ({} - {})",
        real(left),
        real(sx),
        xname,
        real(xmin),
        real(top + h),
        real(sy),
        yname,
        real(ymin)
    );
    let mut points = String::new();
    for (i, (x, y)) in pts.iter().enumerate() {
        if i > 0 {
            points.push(' ');
        }
        let _ = write!(
            points,
            "{},{}",
            real(left + sx * (x - xmin)),
            real(top + h - sy * (y - ymin))
        );
    }
    format!(
        concat!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" viewBox=\"0 0 640 480\">\n",
            "  <!-- {t} -->\n",
            "  <polyline data-transform=\"{t}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"{p}\"/>\n",
            "</svg>\n"
        ),
        t = transform,
        p = points
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_round_trip() {
        for v in [
            0.1,
            -3.0,
            1.0 / 3.0,
            1e-300,
            6.02e23,
            f64::MAX,
            f64::MIN_POSITIVE,
            -0.8,
        ] {
            assert_eq!(real(v).parse::<f64>().unwrap(), v, "{v}");
        }
        assert_eq!(real(-3.0), "-3");
        assert_eq!(real(-0.0), "0");
        assert_eq!(real(1e20), "1e20");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(vec!["x1", "x2"]);
        t.push(vec![-2.0, 3.0]);
        t.push(vec![0.5, -0.0]);
        assert_eq!(t.to_csv(), "x1,x2\n-2,3\n0.5,0\n");
    }

    #[test]
    fn svg_maps_corners_to_margins() {
        let mut t = Table::new(vec!["x", "y"]);
        t.push(vec![0.0, 0.0]);
        t.push(vec![2.0, 1.0]);
        let svg = t.to_svg();
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.contains("points=\"32,456 608,24\""), "{svg}");
    }

    #[test]
    fn svg_handles_flat_data() {
        let mut t = Table::new(vec!["x", "y"]);
        t.push(vec![1.0, 2.0]);
        t.push(vec![1.0, 2.0]);
        assert!(t.to_svg().contains("points=\"320,240 320,240\""));
    }
}
