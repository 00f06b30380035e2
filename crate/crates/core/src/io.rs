//! Configuration documents, deterministic JSON/CSV emitters and SVG plots.

use std::io::{self, Write};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{Schedule, Segment};
use crate::experiments::ExperimentConfig;
use crate::generators::{DwPoint, Generator};
use crate::geometry::{BoundaryPoint, PolarGrid};
use crate::herglotz::{BoundaryAtom, ClarkMeasure, HerglotzFunction};
use crate::ode::Trajectory;

type C = Complex<f64>;

pub const FORMAT_VERSION: &str = "1";
pub const THREADS_ENV: &str = "LOEWNER_LAB_THREADS";

/// A point as `[re, im]` or a boundary point as `{"angle": θ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointDoc {
    Pair([f64; 2]),
    Angle {
        angle: f64,
    },
}

impl PointDoc {
    pub fn value(self) -> C {
        match self {
            Self::Pair([re, im]) => C::new(re, im),
            Self::Angle { angle } => C::from_polar(1.0, angle),
        }
    }

    pub fn boundary(self) -> Result<BoundaryPoint<f64>> {
        match self {
            Self::Angle { angle } => Ok(BoundaryPoint::from_angle(angle)),
            Self::Pair(_) => BoundaryPoint::new(self.value()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomDoc {
    pub angle: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HerglotzDoc {
    #[serde(default)]
    pub uniform: f64,
    #[serde(default)]
    pub imag: f64,
    #[serde(default)]
    pub atoms: Vec<AtomDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    pub tau: PointDoc,
    pub herglotz: HerglotzDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentDoc {
    pub duration: f64,
    pub generator: GeneratorDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleDoc {
    pub segments: Vec<SegmentDoc>,
    /// Boundary points to mark in plots.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fixed: Vec<PointDoc>,
}

/// Denjoy–Wolff target of a synthesis: `"inf"` keeps the half-plane chart
/// (disk `τ = 1`), a point rotates the disk generator onto it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DwDoc {
    Infinity(String),
    Point(PointDoc),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateDoc {
    pub x: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthesisResultDoc {
    pub alpha: f64,
    pub weights: Vec<f64>,
    pub rates: Vec<RateDoc>,
    pub generator: GeneratorDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthesisDoc {
    pub fixed: Vec<f64>,
    pub dw: DwDoc,
    pub beta: f64,
    pub atoms: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<SynthesisResultDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synthesis: Option<SynthesisDoc>,
}

impl ConfigDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("config: {e}")))?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != FORMAT_VERSION {
            return Err(Error::InvalidInput(format!("unsupported version {:?}", self.version)));
        }
        let payloads = [self.schedule.is_some(), self.experiment.is_some(), self.synthesis.is_some()];
        if payloads.iter().filter(|p| **p).count() != 1 {
            return Err(Error::InvalidInput("exactly one of schedule, experiment, synthesis is required".into()));
        }
        if let Some(s) = &self.schedule {
            s.to_schedule()?;
        }
        if let Some(e) = &self.experiment {
            e.validate()?;
        }
        if let Some(s) = &self.synthesis {
            if let DwDoc::Infinity(tag) = &s.dw {
                if tag != "inf" {
                    return Err(Error::InvalidInput(format!("dw must be \"inf\" or a point, got {tag:?}")));
                }
            }
        }
        Ok(())
    }

    pub fn schedule(schedule: ScheduleDoc) -> Self {
        Self { version: FORMAT_VERSION.into(), schedule: Some(schedule), experiment: None, synthesis: None }
    }

    pub fn synthesis(synthesis: SynthesisDoc) -> Self {
        Self { version: FORMAT_VERSION.into(), schedule: None, experiment: None, synthesis: Some(synthesis) }
    }

    pub fn to_json(&self) -> String {
        to_json_string(self)
    }
}

impl HerglotzDoc {
    pub fn to_herglotz(&self) -> Result<HerglotzFunction<f64>> {
        let atoms = self
            .atoms
            .iter()
            .map(|a| BoundaryAtom::new(BoundaryPoint::from_angle(a.angle), a.weight))
            .collect();
        Ok(HerglotzFunction::new(ClarkMeasure::new(atoms, self.uniform)?, self.imag))
    }

    pub fn from_herglotz(p: &HerglotzFunction<f64>) -> Self {
        Self {
            uniform: p.measure.uniform_mass(),
            imag: p.imag_const,
            atoms: p
                .measure
                .atoms()
                .iter()
                .map(|a| AtomDoc { angle: a.location.angle(), weight: a.weight })
                .collect(),
        }
    }
}

impl GeneratorDoc {
    pub fn to_generator(&self) -> Result<Generator<f64>> {
        let tau = match self.tau {
            PointDoc::Angle { .. } => DwPoint::Boundary(self.tau.boundary()?),
            PointDoc::Pair(_) => DwPoint::classify(self.tau.value())?,
        };
        Ok(Generator::new(tau, self.herglotz.to_herglotz()?))
    }

    pub fn from_generator(g: &Generator<f64>) -> Self {
        let tau = match g.tau {
            DwPoint::Boundary(b) => PointDoc::Angle { angle: b.angle() },
            DwPoint::Interior(d) => PointDoc::Pair([d.value().re, d.value().im]),
        };
        Self { tau, herglotz: HerglotzDoc::from_herglotz(&g.p) }
    }
}

impl ScheduleDoc {
    pub fn to_schedule(&self) -> Result<Schedule<f64>> {
        let segments = self
            .segments
            .iter()
            .map(|s| Ok(Segment { duration: s.duration, generator: s.generator.to_generator()? }))
            .collect::<Result<Vec<_>>>()?;
        Schedule::new(segments)
    }

    pub fn from_schedule(schedule: &Schedule<f64>, fixed: &[BoundaryPoint<f64>]) -> Self {
        Self {
            segments: schedule
                .segments()
                .iter()
                .map(|s| SegmentDoc { duration: s.duration, generator: GeneratorDoc::from_generator(&s.generator) })
                .collect(),
            fixed: fixed.iter().map(|b| PointDoc::Angle { angle: b.angle() }).collect(),
        }
    }

    pub fn fixed_points(&self) -> Result<Vec<BoundaryPoint<f64>>> {
        self.fixed.iter().map(|p| p.boundary()).collect()
    }
}

/// Pretty JSON with every float written as `d.dddddddddddddddde±x`
/// (17 significant digits).
struct SciFormatter(serde_json::ser::PrettyFormatter<'static>);

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
            self.0.$name(w $(, $arg)*)
        })*
    };
}

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{}", format_float(value))
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    delegate! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        begin_object_value();
        end_object_value();
    }
}

/// `{:.16e}` with an explicit exponent sign, e.g. `1.0000000000000000e+00`.
pub fn format_float(x: f64) -> String {
    let s = format!("{x:.16e}");
    match s.split_once('e') {
        Some((m, e)) => {
            let (sign, digits) = e.strip_prefix('-').map_or(("+", e), |d| ("-", d));
            format!("{m}e{sign}{digits:0>2}")
        }
        None => s,
    }
}

pub fn to_json_string<S: Serialize>(value: &S) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter(serde_json::ser::PrettyFormatter::with_indent(b"  ")));
    value.serialize(&mut ser).expect("serializing to memory cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

/// Trajectory rows `t,re,im` with LF endings.
pub fn write_csv<W: Write>(out: &mut W, rows: &[[f64; 3]], status: Option<&str>) -> io::Result<()> {
    out.write_all(b"t,re,im\n")?;
    for r in rows {
        writeln!(out, "{},{},{}", format_float(r[0]), format_float(r[1]), format_float(r[2]))?;
    }
    if let Some(s) = status {
        writeln!(out, "# status: {s}")?;
    }
    Ok(())
}

pub fn trajectory_rows(t: &Trajectory<f64>) -> Vec<[f64; 3]> {
    t.nodes.iter().map(|(t, w)| [*t, w.re, w.im]).collect()
}

/// Unit circle, the image of a polar grid (rings and spokes), `F` markers
/// and an optional `τ` marker.
pub fn render_svg(grid: &PolarGrid, images: &[Option<C>], fixed: &[C], tau: Option<C>) -> String {
    const SIZE: f64 = 480.0;
    let scale = SIZE * 0.45;
    let map = |z: C| (SIZE / 2.0 + scale * z.re, SIZE / 2.0 - scale * z.im);
    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n"
    ));
    s.push_str(&format!(
        "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"{:.3}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n",
        SIZE / 2.0,
        SIZE / 2.0,
        scale
    ));
    let mut polyline = |pts: Vec<Option<C>>| {
        // break the line at failed points
        for run in pts.split(|p| p.is_none()).filter(|r| r.len() > 1) {
            let coords: Vec<String> = run
                .iter()
                .map(|p| {
                    let (x, y) = map(p.expect("split removes failures"));
                    format!("{x:.3},{y:.3}")
                })
                .collect();
            s.push_str(&format!(
                "<polyline points=\"{}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"0.8\"/>\n",
                coords.join(" ")
            ));
        }
    };
    let (rings, spokes) = (grid.rings, grid.spokes);
    let at = |ring: usize, spoke: usize| if ring == 0 { images[0] } else { images[1 + (ring - 1) * spokes + spoke] };
    if images.len() == grid.len() {
        for ring in 1..=rings {
            let mut pts: Vec<Option<C>> = (0..spokes).map(|k| at(ring, k)).collect();
            pts.push(at(ring, 0));
            polyline(pts);
        }
        for k in 0..spokes {
            polyline((0..=rings).map(|ring| at(ring, k)).collect());
        }
    }
    for f in fixed {
        let (x, y) = map(*f);
        s.push_str(&format!("<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"5\" fill=\"seagreen\"/>\n"));
    }
    if let Some(t) = tau {
        let (x, y) = map(t);
        s.push_str(&format!(
            "<rect x=\"{:.3}\" y=\"{:.3}\" width=\"10\" height=\"10\" fill=\"crimson\"/>\n",
            x - 5.0,
            y - 5.0
        ));
    }
    s.push_str("</svg>\n");
    s
}

/// Caps the global rayon pool from `LOEWNER_LAB_THREADS` when set.
pub fn configure_threads_from_env() -> Result<Option<usize>> {
    let Ok(raw) = std::env::var(THREADS_ENV) else { return Ok(None) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n >= 1)
        .ok_or_else(|| Error::InvalidInput(format!("{THREADS_ENV} must be an integer ≥ 1, got {raw:?}")))?;
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(Some(n))
}

/// Process exit code for an error: 2 infeasible input, 3 numerical stall, 1 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InfeasibleSynthesis(_) | Error::ArityMismatch { .. } => 2,
        Error::GuardBandStall { .. } | Error::MaxStepsExceeded(_) => 3,
        _ => 1,
    }
}
