use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use tfc_map::approx_inverse::{monte_carlo, ApproxInverseModel, ErrorStats, InverseBasis};
use tfc_map::boundary_tools::merge;
use tfc_map::complex_map::{bijectivity_report, GridSpec};
use tfc_map::config::{boundary_from_json, ConfigFile, PointMap};
use tfc_map::geometry::ComplexPoint;
use tfc_map::io::{read_points_file, write_rows};
use tfc_map::projection_map::{density_controls, Direction, MultiRegionProjection};
use tfc_map::registry;
use tfc_map::tfc_pipeline::{build_surface, interior_points, Mapping, PointMode};
use tfc_map::{Error, RealPoint2};

use crate::surface_doc::SurfaceDoc;
use crate::{demo, Basis, Command, Failure, Mode, Way};

pub type CliResult<T> = std::result::Result<T, Failure>;

/// Lattice used to reject folded maps before fitting an inverse.
const BIJECTIVITY_GRID: usize = 21;

impl From<Basis> for InverseBasis {
    fn from(b: Basis) -> Self {
        match b {
            Basis::ComplexChebyshev => InverseBasis::ComplexChebyshev,
            Basis::TensorChebyshev => InverseBasis::TensorChebyshev,
        }
    }
}

impl From<Mode> for PointMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Grid => PointMode::Grid,
            Mode::Collocation => PointMode::Collocation,
        }
    }
}

pub fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Map { config, points, inverse, model, out } => map(&config, &points, inverse, model.as_deref(), out),
        Command::Project { config, points, direction, density, out } => {
            project(&config, &points, direction, density, out)
        }
        Command::InverseFit { config, k, grid, basis, out } => {
            let map = load(&config)?.map.build()?;
            let model = fit(&map, grid, k, basis.into())?;
            let text = serde_json::to_string_pretty(&model).map_err(|e| Failure::Numeric(e.to_string()))?;
            write_text(out, &text)
        }
        Command::McAccuracy { config, k, grid, n, seed, basis, out, histogram } => {
            let map = load(&config)?.map.build()?;
            let stats = accuracy(&map, k, grid, n, seed, basis.into())?;
            if let Some(path) = histogram {
                write_histogram(Some(path), &stats)?;
            }
            let text = serde_json::to_string_pretty(&stats).map_err(|e| Failure::Numeric(e.to_string()))?;
            write_text(out, &text)
        }
        Command::MergeBoundary { pieces, n, out } => {
            let text = read_text(&pieces)?;
            let merged = merge(&boundary_from_json(&text)?);
            let samples = merged.sample(n)?;
            write_csv(out, &["x", "f"], samples.into_iter().map(|(x, y)| vec![x, y]))
        }
        Command::Points { config, mode, n, out } => {
            let mapping = load(&config)?.map.build_square()?;
            let pts = interior_points(&mapping, mode.into(), n)?;
            write_csv(out, &["x", "y"], pts.iter().map(|p| vec![p.u, p.v]))
        }
        Command::Surface { spec, g, mode, n, out } => {
            let doc: SurfaceDoc = serde_json::from_str(&read_text(&spec)?)
                .map_err(|e| Failure::Invalid(format!("surface document: {e}")))?;
            let (domain, options) = doc.build()?;
            let g = registry::field_fn(&g)?;
            let surface = build_surface(&domain, |w| g(w), options)?;
            let pts = interior_points(domain.mapping(), mode.into(), n)?;
            let rows =
                pts.iter().map(|&p| surface.eval(p).map(|s| vec![p.u, p.v, s])).collect::<tfc_map::Result<Vec<_>>>()?;
            write_csv(out, &["x", "y", "S"], rows)
        }
        Command::Demo { figure, seed, out } => demo::run(figure, seed, out),
    }
}

pub fn load(path: &Path) -> CliResult<ConfigFile> {
    Ok(ConfigFile::load(path)?)
}

fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn sink(out: Option<PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(&path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn write_csv<I>(out: Option<PathBuf>, header: &[&str], rows: I) -> CliResult<()>
where
    I: IntoIterator<Item = Vec<f64>>,
{
    Ok(write_rows(sink(out)?, header, rows)?)
}

fn write_text(out: Option<PathBuf>, text: &str) -> CliResult<()> {
    let mut w = sink(out)?;
    writeln!(w, "{text}").and_then(|_| w.flush()).map_err(|e| Failure::Invalid(e.to_string()))
}

pub fn write_histogram(out: Option<PathBuf>, stats: &ErrorStats) -> CliResult<()> {
    write_csv(out, &["bin_edge", "count"], stats.histogram.iter().map(|b| vec![b.bin_edge, b.count as f64]))
}

fn forward_complex(map: &PointMap) -> impl Fn(ComplexPoint) -> tfc_map::Result<ComplexPoint> + Sync + '_ {
    move |z| map.forward(RealPoint2::from_complex(z)).map(RealPoint2::to_complex)
}

fn require_bijective(map: &PointMap) -> CliResult<()> {
    let f = forward_complex(map);
    let report = bijectivity_report(
        |z| f(z).unwrap_or(ComplexPoint::new(f64::NAN, f64::NAN)),
        GridSpec::square(BIJECTIVITY_GRID),
    )?;
    if report.bijective {
        Ok(())
    } else {
        Err(Error::NotBijective(format!(
            "{} folded cells and {} boundary crossings on a {BIJECTIVITY_GRID}×{BIJECTIVITY_GRID} lattice",
            report.fold_cells.len(),
            report.boundary_crossings
        ))
        .into())
    }
}

pub fn fit(map: &PointMap, grid: usize, k: usize, basis: InverseBasis) -> CliResult<ApproxInverseModel> {
    require_bijective(map)?;
    Ok(ApproxInverseModel::fit_grid(forward_complex(map), grid, k, basis)?)
}

pub fn accuracy(
    map: &PointMap,
    k: usize,
    grid: usize,
    n: usize,
    seed: u64,
    basis: InverseBasis,
) -> CliResult<ErrorStats> {
    let model = fit(map, grid, k, basis)?;
    Ok(monte_carlo(&model, forward_complex(map), n, seed)?)
}

fn map(config: &Path, points: &Path, inverse: bool, model: Option<&Path>, out: Option<PathBuf>) -> CliResult<()> {
    let map = load(config)?.map.build()?;
    let pts = read_points_file(points)?;
    if !inverse {
        let rows = pts
            .iter()
            .map(|&z| map.forward(z).map(|w| vec![z.u, z.v, w.u, w.v]))
            .collect::<tfc_map::Result<Vec<_>>>()?;
        return write_csv(out, &["a", "b", "x", "y"], rows);
    }
    let rows = match model {
        Some(path) => {
            let model: ApproxInverseModel =
                serde_json::from_str(&read_text(path)?).map_err(|e| Failure::Invalid(format!("inverse model: {e}")))?;
            pts.iter()
                .map(|&w| {
                    let z = model.evaluate(w.to_complex());
                    vec![w.u, w.v, z.re, z.im]
                })
                .collect()
        }
        None => pts
            .iter()
            .map(|&w| {
                map.inverse(w)
                    .unwrap_or_else(|| {
                        Err(Error::InvalidInput(
                            "this mapping has no closed-form inverse; fit one with inverse-fit and pass --model".into(),
                        ))
                    })
                    .map(|z| vec![w.u, w.v, z.u, z.v])
            })
            .collect::<tfc_map::Result<Vec<_>>>()?,
    };
    write_csv(out, &["x", "y", "a", "b"], rows)
}

fn project(config: &Path, points: &Path, way: Way, density: bool, out: Option<PathBuf>) -> CliResult<()> {
    let Mapping::Projection(mut proj) = load(config)?.map.build_square()? else {
        return Err(Failure::Invalid("project needs a mapping document of kind \"projection\"".into()));
    };
    if density {
        let [region] = proj.regions() else {
            return Err(Failure::Invalid("--density needs a single-region projection".into()));
        };
        let layout = density_controls(region.w_polygon(), region.upsilon(), region.c())?;
        proj = MultiRegionProjection::new(vec![layout.into_region(region.c(), region.upsilon())?])?;
    }
    let (direction, header) = match way {
        Way::ZToW => (Direction::ZtoW, ["a", "b", "x", "y"]),
        Way::WToZ => (Direction::WtoZ, ["x", "y", "a", "b"]),
    };
    let pts = read_points_file(points)?;
    let rows = pts
        .iter()
        .map(|&p| proj.project(p, direction).map(|q| vec![p.u, p.v, q.u, q.v]))
        .collect::<tfc_map::Result<Vec<_>>>()?;
    write_csv(out, &header, rows)
}
