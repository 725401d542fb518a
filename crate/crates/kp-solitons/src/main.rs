use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use kp_solitons::asymptotics::predict_asymptotics;
use kp_solitons::grassmann::validate_kappa;
use kp_solitons::inverse::{invert_plot_full_with_tol, DEFAULT_CYCLE_TOL};
use kp_solitons::io::{
    self, asymptotics_json, graph_to_json, invert_report_json, matrix_to_json, plot_from_json,
    plot_to_json, point_from_matrix_json, verify_report_json, MatrixJson, PlotJson,
};
use kp_solitons::le_plabic::build_g_minus;
use kp_solitons::positroid::{derangement_from_necklace, necklace_from_derangement};
use kp_solitons::svg::{contour_svg, graph_svg};
use kp_solitons::triangulation::{psi, realize, Triangulation};
use kp_solitons::tropical::{contour_plot, tropical_field, Rect};
use kp_solitons::verify::{verify_point, DEFAULT_VERIFY_TOL};
use kp_solitons::{Derangement, GrassmannNecklace, KappaParams, LeDiagram, Subset};

/// KP line-solitons from the totally non-negative Grassmannian: contour
/// plots, soliton graphs, positroid cross-checks, and plot inversion.
#[derive(Parser)]
#[command(name = "kp", version, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Contour plot of the solution at one time, as SVG and/or JSON.
    Plot {
        /// Matrix JSON ({"k","n","rows"}).
        #[arg(long)]
        matrix: PathBuf,
        /// Comma-separated κ values, strictly increasing.
        #[arg(long, allow_hyphen_values = true)]
        kappa: String,
        #[arg(long, allow_hyphen_values = true)]
        time: f64,
        /// Override the automatic window: "xmin,xmax,ymin,ymax".
        #[arg(long, allow_hyphen_values = true)]
        bbox: Option<String>,
        /// SVG output path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON output path.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Asymptotic soliton lists of a derangement: the y ≫ 0 and y ≪ 0 types
    /// and the unbounded-region labels.
    Asymptotics {
        /// Derangement as comma-separated images, e.g. "6,7,1,2,8,3,9,4,5".
        #[arg(long)]
        pi: String,
        #[arg(long, allow_hyphen_values = true)]
        kappa: String,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Grassmann necklace of a derangement, or the derangement of a necklace.
    Necklace {
        #[arg(long, conflicts_with = "necklace")]
        pi: Option<String>,
        /// Necklace as comma-separated subset labels, e.g. "1257,2357,…".
        #[arg(long)]
        necklace: Option<String>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// The t ≪ 0 generalized plabic graph of a Le-diagram.
    Le2plabic {
        /// Text file: one row per line, '+' and '0', left-justified rows.
        #[arg(long)]
        le: PathBuf,
        /// SVG output path.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Plabic graph of a polygon triangulation (the Gr(2,n) picture).
    Triangulate {
        #[arg(long)]
        n: usize,
        /// Diagonals as "1-3,1-4,1-5"; empty for the bare polygon.
        #[arg(long, default_value = "")]
        diagonals: String,
        /// SVG output path.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Also search for a Gr(2,n) point and time whose contour realizes
        /// the graph, and write the matrix here.
        #[arg(long)]
        realize: Option<PathBuf>,
        /// κ values for the realization search (default 1,2,…,n).
        #[arg(long, allow_hyphen_values = true)]
        kappa: Option<String>,
    },
    /// Reconstruct the Grassmannian point from a contour-plot JSON.
    Invert {
        #[arg(long)]
        plot: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        kappa: String,
        /// Override the time recorded in the plot file.
        #[arg(long, allow_hyphen_values = true)]
        time: Option<f64>,
        /// Matrix JSON output path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report JSON output path (also printed to stdout).
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the cross-validation suite on a matrix and print a pass/fail table.
    Verify {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        kappa: String,
        #[arg(long, allow_hyphen_values = true)]
        time: f64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

enum Failure {
    /// Inputs did not parse: exit 2.
    Parse(String),
    /// A pipeline stage rejected the data: exit 1 with an error JSON.
    Module { kind: &'static str, message: String },
}

impl Failure {
    fn module<E: std::fmt::Display>(kind: &'static str) -> impl Fn(E) -> Failure {
        move |e| Failure::Module { kind, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Parse(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Module { kind, message }) => {
            println!(
                "{}",
                serde_json::json!({"error": {"kind": kind, "message": message}})
            );
            ExitCode::from(1)
        }
    }
}

fn parse_floats(s: &str, what: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Failure::Parse(format!("{what}: {t:?} is not a number")))
        })
        .collect()
}

fn parse_usizes(s: &str, what: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Failure::Parse(format!("{what}: {t:?} is not a positive integer")))
        })
        .collect()
}

fn parse_diagonals(s: &str) -> Result<Vec<(usize, usize)>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let bad = || Failure::Parse(format!("diagonal {t:?} is not of the form a-b"));
            let (a, b) = t.split_once('-').ok_or_else(bad)?;
            Ok((
                a.trim().parse().map_err(|_| bad())?,
                b.trim().parse().map_err(|_| bad())?,
            ))
        })
        .collect()
}

fn parse_bbox(s: &str) -> Result<Rect, Failure> {
    let v = parse_floats(s, "bbox")?;
    if v.len() != 4 {
        return Err(Failure::Parse(format!("bbox needs 4 numbers, got {}", v.len())));
    }
    Ok(Rect { xmin: v[0], xmax: v[1], ymin: v[2], ymax: v[3] })
}

fn kappa_for(values: &[f64], k: usize, n: usize) -> Result<KappaParams, Failure> {
    if values.len() != n {
        return Err(Failure::Module {
            kind: "kappa",
            message: format!("expected {n} κ values, got {}", values.len()),
        });
    }
    validate_kappa(values, k).map_err(Failure::module("kappa"))
}

fn env_tol() -> Result<Option<f64>, Failure> {
    match std::env::var("KP_TOL") {
        Ok(s) => s
            .trim()
            .parse::<f64>()
            .map(Some)
            .map_err(|_| Failure::Parse(format!("KP_TOL: {s:?} is not a number"))),
        Err(_) => Ok(None),
    }
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn save<T: serde::Serialize>(path: &Path, v: &T) -> Result<(), Failure> {
    io::write_json(path, v).map_err(Failure::module("io"))
}

fn save_text(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(Failure::module("io"))
}

fn parse_pi(s: &str) -> Result<Derangement, Failure> {
    Derangement::new(parse_usizes(s, "pi")?).map_err(Failure::module("derangement"))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Plot { matrix, kappa, time, bbox, out, json } => {
            let point = point_from_matrix_json(&load_json::<MatrixJson>(&matrix)?)
                .map_err(Failure::module("matrix"))?;
            let kvals = parse_floats(&kappa, "kappa")?;
            let kappa = kappa_for(&kvals, point.k(), point.n())?;
            let bbox = bbox.as_deref().map(parse_bbox).transpose()?;
            let field = tropical_field(&point, &kappa).map_err(Failure::module("tropical"))?;
            let plot = contour_plot(&field, time, bbox).map_err(Failure::module("tropical"))?;
            if let Some(p) = &out {
                save_text(p, &contour_svg(&plot))?;
            }
            if let Some(p) = &json {
                save(p, &plot_to_json(&plot))?;
            }
            println!(
                "Gr({},{}) contour at t = {}: {} regions, {} edges, {} vertices{}",
                plot.k,
                plot.n,
                plot.time,
                plot.regions.len(),
                plot.edges.len(),
                plot.vertices.len(),
                if plot.generic { "" } else { " (non-generic)" }
            );
            Ok(())
        }
        Cmd::Asymptotics { pi, kappa, json } => {
            let pi = parse_pi(&pi)?;
            let kvals = parse_floats(&kappa, "kappa")?;
            let kappa = kappa_for(&kvals, pi.excedances().len(), pi.n())?;
            let a = predict_asymptotics(&pi, &kappa);
            let fmt = |l: &[(usize, usize)]| {
                l.iter().map(|(i, j)| format!("[{i},{j}]")).collect::<Vec<_>>().join(" ")
            };
            println!("pi = {}", pi.cycle_string());
            println!("x << 0 region: {}", a.x_neg_label.label());
            println!("top    (y >> 0, left to right): {}", fmt(&a.top));
            println!("bottom (y << 0, left to right): {}", fmt(&a.bottom));
            println!(
                "unbounded regions (ccw): {}",
                a.unbounded_ccw.iter().map(|s| s.label()).collect::<Vec<_>>().join(" ")
            );
            if let Some(p) = &json {
                save(p, &asymptotics_json(&pi, &a))?;
            }
            Ok(())
        }
        Cmd::Necklace { pi, necklace, json } => {
            let neck;
            let der;
            match (pi, necklace) {
                (Some(s), None) => {
                    der = parse_pi(&s)?;
                    neck = necklace_from_derangement(&der);
                }
                (None, Some(s)) => {
                    let parts: Vec<&str> =
                        s.split(',').map(str::trim).filter(|t| !t.is_empty()).collect();
                    let n = parts.len();
                    let mut terms = Vec::new();
                    for p in &parts {
                        terms.push(Subset::parse_label(p, n).ok_or_else(|| {
                            Failure::Parse(format!("{p:?} is not a subset of 1..={n}"))
                        })?);
                    }
                    let k = terms.first().map_or(0, |t| t.len());
                    neck = GrassmannNecklace::new(k, n, terms)
                        .map_err(Failure::module("necklace"))?;
                    der = derangement_from_necklace(&neck);
                }
                _ => return Err(Failure::Parse("pass exactly one of --pi, --necklace".into())),
            }
            println!(
                "pi = {}   (images {})",
                der.cycle_string(),
                der.images().iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
            );
            for (i, t) in neck.terms().iter().enumerate() {
                println!("I{} = {}", i + 1, t.label());
            }
            if let Some(p) = &json {
                save(p, &io::necklace_to_json(&neck))?;
            }
            Ok(())
        }
        Cmd::Le2plabic { le, svg, json } => {
            let text = std::fs::read_to_string(&le)
                .map_err(|e| Failure::Parse(format!("{}: {e}", le.display())))?;
            let le = LeDiagram::from_text(&text).map_err(Failure::module("le"))?;
            let g = build_g_minus(&le);
            let trips = g.trips().map_err(Failure::module("plabic"))?;
            let der = trips.derangement().map_err(Failure::module("plabic"))?;
            println!("Le-diagram: k = {}, n = {}", le.k(), le.n());
            println!("trip permutation: {}", der.cycle_string());
            let labeling = g.face_labeling().map_err(Failure::module("plabic"))?;
            let mut bounded: Vec<String> =
                labeling.bounded_labels().iter().map(|s| s.label()).collect();
            bounded.sort();
            println!("bounded faces: {}", bounded.join(" "));
            println!(
                "unbounded faces (ccw): {}",
                labeling
                    .unbounded_labels_ccw()
                    .iter()
                    .map(|s| s.label())
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            if let Some(p) = &svg {
                save_text(p, &graph_svg(&g))?;
            }
            if let Some(p) = &json {
                save(p, &graph_to_json(&g))?;
            }
            Ok(())
        }
        Cmd::Triangulate { n, diagonals, out, json, realize: realize_out, kappa } => {
            let t = Triangulation::new(n, parse_diagonals(&diagonals)?)
                .map_err(Failure::module("triangulation"))?;
            let g = psi(&t);
            let trips = g.trips().map_err(Failure::module("plabic"))?;
            let der = trips.derangement().map_err(Failure::module("plabic"))?;
            println!("triangulation of an {n}-gon, {} diagonals", t.diagonals().len());
            println!("trip permutation: {}", der.cycle_string());
            if let Some(p) = &out {
                save_text(p, &graph_svg(&g))?;
            }
            if let Some(p) = &json {
                save(p, &graph_to_json(&g))?;
            }
            if let Some(p) = &realize_out {
                let kvals = match &kappa {
                    Some(s) => parse_floats(s, "kappa")?,
                    None => (1..=n).map(|i| i as f64).collect(),
                };
                let kp = kappa_for(&kvals, 2, n)?;
                let r = realize(&t, &kp).map_err(Failure::module("triangulation"))?;
                save(p, &matrix_to_json(&r.point))?;
                println!("realized at t = {}", r.time);
            }
            Ok(())
        }
        Cmd::Invert { plot, kappa, time, out, json } => {
            let mut cp =
                plot_from_json(&load_json::<PlotJson>(&plot)?).map_err(Failure::module("plot"))?;
            if let Some(t) = time {
                cp.time = t;
            }
            let kvals = parse_floats(&kappa, "kappa")?;
            let kappa = kappa_for(&kvals, cp.k, cp.n)?;
            let cycle_tol = env_tol()?.unwrap_or(DEFAULT_CYCLE_TOL);
            let outcome = invert_plot_full_with_tol(&cp, &kappa, cycle_tol)
                .map_err(Failure::module("inverse"))?;
            let report = invert_report_json(&outcome.system, &outcome.solution, &outcome.report);
            if let Some(p) = &out {
                save(p, &report.matrix)?;
            }
            if let Some(p) = &json {
                save(p, &report)?;
            }
            println!("cell: {}", outcome.derangement.cycle_string());
            print!("{}", io::to_json_string(&report));
            Ok(())
        }
        Cmd::Verify { matrix, kappa, time, json } => {
            let point = point_from_matrix_json(&load_json::<MatrixJson>(&matrix)?)
                .map_err(Failure::module("matrix"))?;
            let kvals = parse_floats(&kappa, "kappa")?;
            let kappa = kappa_for(&kvals, point.k(), point.n())?;
            let tol = env_tol()?.unwrap_or(DEFAULT_VERIFY_TOL);
            let rep =
                verify_point(&point, &kappa, time, tol).map_err(Failure::module("verify"))?;
            println!("Gr({},{}) at t = {}, tolerance {:e}", rep.k, rep.n, rep.time, tol);
            let width = rep.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
            for c in &rep.checks {
                println!(
                    "{:width$}  {}  {}",
                    c.name,
                    if c.passed { "PASS" } else { "FAIL" },
                    c.detail
                );
            }
            let failed = rep.checks.iter().filter(|c| !c.passed).count();
            if failed == 0 {
                println!("all {} checks passed", rep.checks.len());
            } else {
                println!("{failed} of {} checks FAILED", rep.checks.len());
            }
            if let Some(p) = &json {
                save(p, &verify_report_json(&rep))?;
            }
            Ok(())
        }
    }
}
