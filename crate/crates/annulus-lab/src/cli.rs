//! Command-line front end: profile tables, moduli sweeps, catenoid root
//! finding, bubbling reports, neck positions, junction balancing, energy
//! limits, and sphere-bundle lifts, emitted as CSV or JSON.
//!
//! Exit codes: 0 success, 1 usage or argument error, 2 numeric failure
//! (overflow, undefined curvature, failed root bracketing). Identical
//! inputs produce byte-identical output.

use crate::bubbling::{detect_bubbling, neck_position, DomainFamily};
use crate::bundle::{detect_collapse, lift_curve, lift_surface};
use crate::energy::principal_curvatures;
use crate::error::{Error, Result};
use crate::geometry::{ConformalClass, ModuliEnd};
use crate::junction::{
    balance_angles, path_limit, BalanceOutcome, JunctionSkeleton, ModuliPath, PathLimit,
    RadiusExpr, Segment,
};
use crate::profile::{catenoid_transition, find_catenoids, RadialProfile};
use crate::sweep::{
    collapsed_row, energy_limit, log_spaced, ruled_row, sweep, BoundaryRadii, EnergyLimit,
    SweepEntry,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::ffi::OsString;
use std::f64::consts::TAU;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "annulus-lab",
    version,
    about = "Numerical laboratory for degenerating annulus maps: profiles, sweeps, \
             catenoids, bubbling families, junctions, and sphere-bundle lifts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write output to this file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Key=value defaults, one per line, '#' comments; explicit flags win
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Seed for randomized subcommands (none yet; kept for reproducible
    /// extensions)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the radial profile and its principal curvatures
    Profile {
        /// Conformal class parameter of the annulus
        #[arg(long)]
        a: f64,
        /// Boundary radius at the lower end
        #[arg(long, default_value_t = 1.0)]
        r_minus: f64,
        /// Boundary radius at the upper end
        #[arg(long, default_value_t = 1.0)]
        r_plus: f64,
        /// Number of meridian sample points
        #[arg(long, default_value_t = 129)]
        samples: usize,
    },
    /// Sweep the moduli ray: energy, area, curvature functional, chain
    /// verdict per modulus, with both degenerate end rows
    Sweep {
        #[arg(long, default_value_t = 0.2)]
        a_min: f64,
        #[arg(long, default_value_t = 5.0)]
        a_max: f64,
        /// Number of interior moduli, log-spaced
        #[arg(long, default_value_t = 50)]
        steps: usize,
        #[arg(long, default_value_t = 1.0)]
        r_minus: f64,
        #[arg(long, default_value_t = 1.0)]
        r_plus: f64,
    },
    /// Catenoid waists through two circles of radius r at heights +-h,
    /// or the existence threshold over a height interval
    Catenoid {
        /// Boundary circle radius
        #[arg(long)]
        r: f64,
        /// Half-separation of the circles
        #[arg(long)]
        h: Option<f64>,
        /// Lower end of a threshold search (with --h-hi)
        #[arg(long)]
        h_lo: Option<f64>,
        /// Upper end of a threshold search (with --h-lo)
        #[arg(long)]
        h_hi: Option<f64>,
    },
    /// Pointwise limits of a collapsing family and the bubbling verdict
    Bubbling {
        /// rect | planar | cone | sphere | antibubble
        #[arg(long)]
        family: String,
        /// Decreasing thicknesses; fewer than three are extended by
        /// decades for the extrapolation
        #[arg(long, default_value = "1e-3,1e-4,1e-5")]
        eps: String,
        /// Sample grid as NSxNTHETA, each at least 32
        #[arg(long, default_value = "32x32")]
        grid: String,
    },
    /// Image neck position along the composite tube family
    Neck {
        #[arg(long, default_value = "1e-2,1e-3,1e-4,1e-5,1e-6")]
        eps: String,
    },
    /// Limit of a three-tube junction along a moduli path
    Junction {
        /// Comma-separated radius expressions: t, kt, t^2, or <scale>t
        #[arg(long)]
        path: String,
        /// Value substituted for k in the path
        #[arg(long, default_value_t = 1.0)]
        k: f64,
        /// Smallest path parameter (sanity bound, must be positive)
        #[arg(long, default_value_t = 1e-3)]
        t_min: f64,
    },
    /// Energy limits at both ends of the moduli ray
    Limits {
        #[arg(long, default_value_t = 1.0)]
        r_minus: f64,
        #[arg(long, default_value_t = 1.0)]
        r_plus: f64,
    },
    /// Sphere-bundle lifts: masses of lifted circles or profile surfaces,
    /// or collapse detection across a list of moduli
    Lift {
        /// Lift a circle of this radius
        #[arg(long)]
        circle_radius: Option<f64>,
        #[arg(long, default_value_t = 512)]
        curve_samples: usize,
        /// Lift the fitted profile surface at this modulus
        #[arg(long)]
        a: Option<f64>,
        #[arg(long, default_value_t = 257)]
        surface_samples: usize,
        #[arg(long, default_value_t = 64)]
        sectors: usize,
        /// Comma-separated moduli: run collapse detection across their
        /// profile surfaces
        #[arg(long)]
        collapse_moduli: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        r_minus: f64,
        #[arg(long, default_value_t = 1.0)]
        r_plus: f64,
    },
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let argv = match apply_config(argv) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidArgument(_) => 1,
                _ => 2,
            }
        }
    }
}

/// Splices config-file entries in as flags right after the subcommand,
/// skipping any key the user already passed so explicit flags win.
fn apply_config(argv: Vec<OsString>) -> Result<Vec<OsString>> {
    let path = match config_path(&argv) {
        Some(p) => p,
        None => return Ok(argv),
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::invalid(format!("cannot read config {path}: {e}")))?;
    let mut injected: Vec<OsString> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::invalid(format!("config line {}: expected key=value", lineno + 1))
        })?;
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() {
            return Err(Error::invalid(format!("config line {}: empty key", lineno + 1)));
        }
        if key == "config" {
            return Err(Error::invalid("config files cannot set 'config'"));
        }
        if user_passed(&argv, key) {
            continue;
        }
        injected.push(format!("--{key}").into());
        injected.push(value.into());
    }
    if argv.len() < 2 || argv[1].to_string_lossy().starts_with('-') {
        return Ok(argv);
    }
    let mut out = argv[..2].to_vec();
    out.extend(injected);
    out.extend(argv[2..].iter().cloned());
    Ok(out)
}

fn config_path(argv: &[OsString]) -> Option<String> {
    let mut it = argv.iter().map(|a| a.to_string_lossy());
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().map(|v| v.into_owned());
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Some(v.to_string());
        }
    }
    None
}

fn user_passed(argv: &[OsString], key: &str) -> bool {
    let flag = format!("--{key}");
    let prefix = format!("--{key}=");
    argv.iter().any(|a| {
        let s = a.to_string_lossy();
        s == flag || s.starts_with(&prefix)
    })
}

fn execute(cli: &Cli) -> Result<()> {
    let (csv, json) = match &cli.command {
        Command::Profile { a, r_minus, r_plus, samples } => {
            cmd_profile(*a, *r_minus, *r_plus, *samples)?
        }
        Command::Sweep { a_min, a_max, steps, r_minus, r_plus } => {
            cmd_sweep(*a_min, *a_max, *steps, *r_minus, *r_plus)?
        }
        Command::Catenoid { r, h, h_lo, h_hi } => cmd_catenoid(*r, *h, *h_lo, *h_hi)?,
        Command::Bubbling { family, eps, grid } => cmd_bubbling(family, eps, grid)?,
        Command::Neck { eps } => cmd_neck(eps)?,
        Command::Junction { path, k, t_min } => cmd_junction(path, *k, *t_min)?,
        Command::Limits { r_minus, r_plus } => cmd_limits(*r_minus, *r_plus)?,
        Command::Lift {
            circle_radius,
            curve_samples,
            a,
            surface_samples,
            sectors,
            collapse_moduli,
            r_minus,
            r_plus,
        } => cmd_lift(
            *circle_radius,
            *curve_samples,
            *a,
            *surface_samples,
            *sectors,
            collapse_moduli.as_deref(),
            *r_minus,
            *r_plus,
        )?,
    };
    let rendered = match cli.format {
        Format::Csv => csv,
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json)
                .map_err(|e| Error::invalid(format!("json rendering failed: {e}")))?;
            s.push('\n');
            s
        }
    };
    match &cli.out {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            // a closed pipe (`| head`) is a normal way to stop reading,
            // not a failure of ours
            use std::io::Write;
            match std::io::stdout().write_all(rendered.as_bytes()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::invalid(
                    format!("cannot write to stdout: {e}"),
                )),
                _ => Ok(()),
            }
        }
    }
}

fn csv_table(header: &str, rows: &[Vec<String>]) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn cmd_profile(
    a: f64,
    r_minus: f64,
    r_plus: f64,
    samples: usize,
) -> Result<(String, serde_json::Value)> {
    let class = ConformalClass::new(a)?;
    let profile = RadialProfile::fit_boundary(class, r_minus, r_plus)?;
    let mesh = profile.mesh(samples)?;
    let mut rows = Vec::with_capacity(samples);
    let mut points = Vec::with_capacity(samples);
    for (&z, &r) in mesh.z().iter().zip(mesh.r()) {
        let (rho1, rho2) = principal_curvatures(&mesh, z)?;
        rows.push(vec![
            format!("{z}"),
            format!("{r}"),
            format!("{rho1}"),
            format!("{rho2}"),
        ]);
        points.push(json!({ "z": z, "r": r, "rho1": rho1, "rho2": rho2 }));
    }
    let json = json!({
        "a": a,
        "r_minus": r_minus,
        "r_plus": r_plus,
        "samples": points,
    });
    Ok((csv_table("Z,R,rho1,rho2", &rows), json))
}

fn sweep_entry_row(e: &SweepEntry) -> Vec<String> {
    match e {
        SweepEntry::Row(r) => vec![
            format!("{}", r.a),
            format!("{}", r.energy),
            format!("{}", r.area),
            format!("{}", r.middle),
            format!("{}", r.chain_holds),
        ],
        SweepEntry::Overflow { a } => vec![
            format!("{a}"),
            "overflow".into(),
            "overflow".into(),
            "overflow".into(),
            "false".into(),
        ],
    }
}

fn cmd_sweep(
    a_min: f64,
    a_max: f64,
    steps: usize,
    r_minus: f64,
    r_plus: f64,
) -> Result<(String, serde_json::Value)> {
    if steps < 1 {
        return Err(Error::invalid("need at least one sweep step"));
    }
    if !(a_min < a_max) {
        return Err(Error::invalid(format!(
            "need a_min < a_max, got {a_min} and {a_max}"
        )));
    }
    let bc = BoundaryRadii::new(r_minus, r_plus)?;
    let a_values = if steps == 1 {
        vec![a_min]
    } else {
        log_spaced(a_min, a_max, steps)?
    };
    let mut entries = vec![SweepEntry::Row(ruled_row(bc)?)];
    entries.extend(sweep(&a_values, bc)?);
    entries.push(SweepEntry::Row(collapsed_row(bc)?));
    let rows: Vec<Vec<String>> = entries.iter().map(sweep_entry_row).collect();
    let json = json!({
        "r_minus": r_minus,
        "r_plus": r_plus,
        "rows": entries,
    });
    Ok((csv_table("a,energy,area,middle,chain_holds", &rows), json))
}

fn cmd_catenoid(
    r: f64,
    h: Option<f64>,
    h_lo: Option<f64>,
    h_hi: Option<f64>,
) -> Result<(String, serde_json::Value)> {
    match (h, h_lo, h_hi) {
        (_, Some(lo), Some(hi)) => {
            let h_star = catenoid_transition(r, lo, hi, 1e-12)?;
            let rows = vec![vec![
                format!("{lo}"),
                format!("{hi}"),
                format!("{h_star}"),
            ]];
            let json = json!({ "r": r, "h_lo": lo, "h_hi": hi, "h_star": h_star });
            Ok((csv_table("h_lo,h_hi,h_star", &rows), json))
        }
        (Some(h), None, None) => {
            let roots = find_catenoids(r, h)?;
            let mut rows = Vec::new();
            let mut out = Vec::new();
            for c in roots {
                let residual = (c * (h / c).cosh() - r).abs();
                rows.push(vec![format!("{c}"), format!("{residual}")]);
                out.push(json!({ "c": c, "residual": residual }));
            }
            let json = json!({ "r": r, "h": h, "roots": out });
            Ok((csv_table("c,residual", &rows), json))
        }
        _ => Err(Error::invalid(
            "pass either --h, or both --h-lo and --h-hi",
        )),
    }
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>> {
    let vals = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::invalid(format!("bad {what} entry '{}'", t.trim())))
        })
        .collect::<Result<Vec<f64>>>()?;
    if vals.is_empty() {
        return Err(Error::invalid(format!("empty {what} list")));
    }
    Ok(vals)
}

fn cmd_bubbling(family: &str, eps: &str, grid: &str) -> Result<(String, serde_json::Value)> {
    let family: DomainFamily = family.parse()?;
    let given = parse_list(eps, "eps")?;
    for w in given.windows(2) {
        if !(w[1] < w[0]) {
            return Err(Error::invalid("eps list must be strictly decreasing"));
        }
    }
    let mut seq = given.clone();
    while seq.len() < 3 {
        seq.push(seq.last().unwrap() / 10.0);
    }
    let (n_s, n_theta) = grid
        .split_once('x')
        .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)))
        .ok_or_else(|| Error::invalid(format!("bad grid '{grid}', expected NSxNTHETA")))?;
    let report = detect_bubbling(family, &seq, n_s, n_theta)?;
    let necks = if family == DomainFamily::AntiBubble {
        Some(
            given
                .iter()
                .map(|&e| Ok(json!({ "eps": e, "neck": neck_position(e)? })))
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };
    let neck_cell = if family == DomainFamily::AntiBubble {
        let smallest = given.iter().cloned().fold(f64::INFINITY, f64::min);
        Some(format!("{}", neck_position(smallest)?))
    } else {
        None
    };
    let mut header = String::from("s,theta,r,z,converged,bubbled,gap");
    if neck_cell.is_some() {
        header.push_str(",neck");
    }
    let rows: Vec<Vec<String>> = report
        .samples
        .iter()
        .map(|p| {
            let mut row = vec![
                format!("{}", p.s),
                format!("{}", p.theta),
                format!("{}", p.r),
                format!("{}", p.z),
                format!("{}", p.converged),
                format!("{}", report.bubbled),
                format!("{}", report.graph_gap),
            ];
            if let Some(n) = &neck_cell {
                row.push(n.clone());
            }
            row
        })
        .collect();
    let mut json = serde_json::to_value(&report)
        .map_err(|e| Error::invalid(format!("json rendering failed: {e}")))?;
    if let Some(n) = necks {
        json["neck_positions"] = serde_json::Value::Array(n);
    }
    Ok((csv_table(&header, &rows), json))
}

fn cmd_neck(eps: &str) -> Result<(String, serde_json::Value)> {
    let list = parse_list(eps, "eps")?;
    let mut rows = Vec::new();
    let mut out = Vec::new();
    for e in list {
        let neck = neck_position(e)?;
        rows.push(vec![format!("{e}"), format!("{neck}")]);
        out.push(json!({ "eps": e, "neck": neck }));
    }
    Ok((csv_table("eps,neck", &rows), json!(out)))
}

fn parse_radius_expr(token: &str, k: f64) -> Result<RadiusExpr> {
    match token {
        "kt" | "k*t" => {
            if !(k > 0.0 && k.is_finite()) {
                return Err(Error::invalid(format!("k must be positive, got {k}")));
            }
            Ok(RadiusExpr::ScaledT(k))
        }
        other => other.parse(),
    }
}

fn cmd_junction(path: &str, k: f64, t_min: f64) -> Result<(String, serde_json::Value)> {
    if !(t_min > 0.0) {
        return Err(Error::invalid(format!("t_min must be positive, got {t_min}")));
    }
    let tokens: Vec<&str> = path.split(',').map(str::trim).collect();
    if tokens.len() != 3 {
        return Err(Error::invalid(format!(
            "path needs exactly three radius expressions, got {}",
            tokens.len()
        )));
    }
    let radii = [
        parse_radius_expr(tokens[0], k)?,
        parse_radius_expr(tokens[1], k)?,
        parse_radius_expr(tokens[2], k)?,
    ];
    let limit = path_limit(&ModuliPath { radii })?;
    let header = "kind,detail,tension1,tension2,tension3,angle1_deg,angle2_deg,angle3_deg,stationary";
    let (row, json) = match &limit {
        PathLimit::Junction { tensions, angles } => {
            let BalanceOutcome::Balanced { directions, .. } = balance_angles(*tensions)? else {
                return Err(Error::invalid("junction limit failed to rebalance"));
            };
            let segments = tensions
                .iter()
                .zip(directions)
                .map(|(&t, d)| Segment {
                    direction: [d[0], d[1], 0.0],
                    tension: t,
                })
                .collect();
            let stationary =
                JunctionSkeleton::new([0.0; 3], segments)?.is_stationary(1e-12);
            let deg = angles.map(f64::to_degrees);
            (
                vec![
                    "junction".into(),
                    String::new(),
                    format!("{}", tensions[0]),
                    format!("{}", tensions[1]),
                    format!("{}", tensions[2]),
                    format!("{}", deg[0]),
                    format!("{}", deg[1]),
                    format!("{}", deg[2]),
                    format!("{stationary}"),
                ],
                json!({
                    "kind": "junction",
                    "tensions": tensions,
                    "angles_deg": deg,
                    "stationary": stationary,
                }),
            )
        }
        PathLimit::TSingularity { vanishing } => {
            let detail = vanishing
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(";");
            (
                vec![
                    "t-singularity".into(),
                    detail,
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    "false".into(),
                ],
                json!({ "kind": "t-singularity", "vanishing": vanishing, "stationary": false }),
            )
        }
        PathLimit::TwoSegments { dominant } => (
            vec![
                "two-segments".into(),
                format!("{dominant}"),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                "false".into(),
            ],
            json!({ "kind": "two-segments", "dominant": dominant, "stationary": false }),
        ),
    };
    Ok((csv_table(header, &[row]), json))
}

fn cmd_limits(r_minus: f64, r_plus: f64) -> Result<(String, serde_json::Value)> {
    let bc = BoundaryRadii::new(r_minus, r_plus)?;
    let ruled = energy_limit(ModuliEnd::Ruled, bc)?;
    let collapsed = energy_limit(ModuliEnd::Collapsed, bc)?;
    let mut rows = Vec::new();
    match &ruled {
        EnergyLimit::Divergent { exponent, monotone, .. } => rows.push(vec![
            "ruled".into(),
            "inf".into(),
            format!("{exponent}"),
            String::new(),
            format!("{monotone}"),
        ]),
        EnergyLimit::Finite { .. } => unreachable!("ruled end diverges"),
    }
    match &collapsed {
        EnergyLimit::Finite { value, low_confidence } => rows.push(vec![
            "collapsed".into(),
            format!("{value}"),
            String::new(),
            format!("{low_confidence}"),
            String::new(),
        ]),
        EnergyLimit::Divergent { .. } => unreachable!("collapsed end converges"),
    }
    let json = json!({ "ruled": ruled, "collapsed": collapsed });
    Ok((
        csv_table("end,value,exponent,low_confidence,monotone", &rows),
        json,
    ))
}

#[allow(clippy::too_many_arguments)]
fn cmd_lift(
    circle_radius: Option<f64>,
    curve_samples: usize,
    a: Option<f64>,
    surface_samples: usize,
    sectors: usize,
    collapse_moduli: Option<&str>,
    r_minus: f64,
    r_plus: f64,
) -> Result<(String, serde_json::Value)> {
    let modes = [
        circle_radius.is_some(),
        a.is_some(),
        collapse_moduli.is_some(),
    ]
    .iter()
    .filter(|&&m| m)
    .count();
    if modes != 1 {
        return Err(Error::invalid(
            "pass exactly one of --circle-radius, --a, --collapse-moduli",
        ));
    }
    if let Some(radius) = circle_radius {
        if !(radius > 0.0) {
            return Err(Error::invalid(format!("circle radius must be positive, got {radius}")));
        }
        let points: Vec<[f64; 3]> = (0..curve_samples)
            .map(|i| {
                let t = TAU * i as f64 / curve_samples as f64;
                [radius * t.cos(), radius * t.sin(), 0.0]
            })
            .collect();
        let lifted = lift_curve(&points, true)?;
        let mass = lifted.total_mass();
        let rows = vec![vec![
            "circle".into(),
            format!("{radius}"),
            format!("{mass}"),
            format!("{}", lifted.atoms.len()),
        ]];
        let json = json!({
            "kind": "circle",
            "parameter": radius,
            "mass": mass,
            "atom_count": lifted.atoms.len(),
        });
        return Ok((csv_table("kind,parameter,mass,atoms", &rows), json));
    }
    if let Some(a) = a {
        let profile =
            RadialProfile::fit_boundary(ConformalClass::new(a)?, r_minus, r_plus)?;
        let lifted = lift_surface(&profile.mesh(surface_samples)?, sectors)?;
        let mass = lifted.total_mass();
        let rows = vec![vec![
            "profile".into(),
            format!("{a}"),
            format!("{mass}"),
            format!("{}", lifted.atoms.len()),
        ]];
        let json = json!({
            "kind": "profile",
            "parameter": a,
            "mass": mass,
            "atom_count": lifted.atoms.len(),
        });
        return Ok((csv_table("kind,parameter,mass,atoms", &rows), json));
    }
    let moduli = parse_list(collapse_moduli.unwrap(), "moduli")?;
    if moduli.len() < 2 {
        return Err(Error::invalid("collapse detection needs at least two moduli"));
    }
    let surfaces = moduli
        .iter()
        .map(|&a| {
            RadialProfile::fit_boundary(ConformalClass::new(a)?, r_minus, r_plus)?.mesh(513)
        })
        .collect::<Result<Vec<_>>>()?;
    let report = detect_collapse(&surfaces)?;
    let (w_lo, w_hi) = match report.window {
        Some([lo, hi]) => (format!("{lo}"), format!("{hi}")),
        None => (String::new(), String::new()),
    };
    let rows: Vec<Vec<String>> = moduli
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            vec![
                format!("{a}"),
                report
                    .window_areas
                    .get(i)
                    .map(|w| format!("{w}"))
                    .unwrap_or_default(),
                w_lo.clone(),
                w_hi.clone(),
                format!("{}", report.collapsing),
            ]
        })
        .collect();
    let json = json!({ "moduli": moduli, "report": report });
    Ok((
        csv_table("a,window_area,window_lo,window_hi,collapsing", &rows),
        json,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_injection_respects_explicit_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg");
        std::fs::write(&path, "# comment\na=2\nsamples=5\n").unwrap();
        let argv: Vec<OsString> = vec![
            "annulus-lab".into(),
            "profile".into(),
            "--a".into(),
            "1".into(),
            "--config".into(),
            path.as_os_str().to_owned(),
        ];
        let out = apply_config(argv).unwrap();
        let strs: Vec<String> = out.iter().map(|s| s.to_string_lossy().into_owned()).collect();
        // samples comes from the file, a stays as passed
        assert!(strs.contains(&"--samples".to_string()));
        let a_pos = strs.iter().position(|s| s == "--a").unwrap();
        assert_eq!(strs[a_pos + 1], "1");
        assert_eq!(strs.iter().filter(|s| *s == "--a").count(), 1);
    }

    #[test]
    fn config_rejects_malformed_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg");
        std::fs::write(&path, "not a pair\n").unwrap();
        let argv: Vec<OsString> = vec![
            "annulus-lab".into(),
            "profile".into(),
            "--config".into(),
            path.as_os_str().to_owned(),
        ];
        assert!(apply_config(argv).is_err());
    }

    #[test]
    fn run_maps_exit_codes() {
        assert_eq!(run(["annulus-lab", "--help"]), 0);
        assert_eq!(run(["annulus-lab", "profile"]), 1); // missing --a
        assert_eq!(run(["annulus-lab", "nonsense"]), 1);
    }

    #[test]
    fn junction_paths_parse() {
        assert_eq!(parse_radius_expr("kt", 2.0).unwrap(), RadiusExpr::ScaledT(2.0));
        assert_eq!(parse_radius_expr("k*t", 0.5).unwrap(), RadiusExpr::ScaledT(0.5));
        assert_eq!(parse_radius_expr("t", 1.0).unwrap(), RadiusExpr::T);
        assert!(parse_radius_expr("kt", 0.0).is_err());
        assert!(parse_radius_expr("zz", 1.0).is_err());
    }

    #[test]
    fn profile_csv_shape() {
        let (csv, json) = cmd_profile(1.0, 1.0, 1.0, 3).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "Z,R,rho1,rho2");
        assert_eq!(lines.len(), 4);
        let mid: Vec<&str> = lines[2].split(',').collect();
        assert_eq!(mid[0], "0");
        let r: f64 = mid[1].parse().unwrap();
        assert!((r - 0.648_054_273_663_885_4).abs() < 1e-12);
        assert_eq!(json["samples"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn sweep_csv_has_end_rows_and_inf_tokens() {
        let (csv, _) = cmd_sweep(0.5, 2.0, 3, 1.0, 1.0).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "a,energy,area,middle,chain_holds");
        assert_eq!(lines.len(), 1 + 3 + 2);
        assert!(lines[1].starts_with("0,inf,"));
        assert!(lines[5].starts_with("inf,"));
        for line in &lines[1..] {
            assert_eq!(line.split(',').count(), 5);
            assert!(line.ends_with("true"));
        }
    }

    #[test]
    fn neck_and_bubbling_values() {
        let (csv, _) = cmd_neck("1e-3").unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "eps,neck");
        let neck: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
        assert!((neck - 0.993_139_634_447_379_7).abs() < 1e-12);

        let (csv, json) = cmd_bubbling("antibubble", "1e-3", "32x32").unwrap();
        assert!(csv.lines().next().unwrap().ends_with(",neck"));
        assert_eq!(json["bubbled"], serde_json::Value::Bool(false));
        let necks = json["neck_positions"].as_array().unwrap();
        assert_eq!(necks.len(), 1);
        assert!((necks[0]["neck"].as_f64().unwrap() - 0.993_139_634_447_379_7).abs() < 1e-12);
    }

    #[test]
    fn junction_reports() {
        let (csv, json) = cmd_junction("t,t,kt", 1.0, 1e-3).unwrap();
        let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(row[0], "junction");
        let angle: f64 = row[5].parse().unwrap();
        assert!((angle - 120.0).abs() < 1e-9);
        assert_eq!(row[8], "true");
        assert_eq!(json["stationary"], serde_json::Value::Bool(true));

        let (csv, _) = cmd_junction("t,t,t^2", 1.0, 1e-3).unwrap();
        assert!(csv.lines().nth(1).unwrap().starts_with("t-singularity,2,"));

        let (csv, _) = cmd_junction("t,t,kt", 1e6, 1e-3).unwrap();
        assert!(csv.lines().nth(1).unwrap().starts_with("two-segments,2,"));

        assert!(cmd_junction("t,t", 1.0, 1e-3).is_err());
        assert!(cmd_junction("t,t,qq", 1.0, 1e-3).is_err());
    }

    #[test]
    fn limits_table_shape() {
        let (csv, json) = cmd_limits(1.0, 1.0).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "end,value,exponent,low_confidence,monotone");
        assert!(lines[1].starts_with("ruled,inf,"));
        let collapsed: Vec<&str> = lines[2].split(',').collect();
        let v: f64 = collapsed[1].parse().unwrap();
        assert!((v - 4.0 * std::f64::consts::PI).abs() < 0.05);
        assert_eq!(json["collapsed"]["kind"], "finite");
    }

    #[test]
    fn lift_modes() {
        let (csv, _) = cmd_lift(Some(1.0), 512, None, 257, 64, None, 1.0, 1.0).unwrap();
        let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
        let mass: f64 = row[2].parse().unwrap();
        assert!((mass - TAU * 2.0_f64.sqrt()).abs() / mass < 1e-5);

        let (csv, _) =
            cmd_lift(None, 512, None, 257, 64, Some("1,2,4,8"), 1.0, 1.0).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines[1].ends_with("true"));

        assert!(cmd_lift(None, 512, None, 257, 64, None, 1.0, 1.0).is_err());
        assert!(cmd_lift(Some(1.0), 512, Some(1.0), 257, 64, None, 1.0, 1.0).is_err());
    }
}
