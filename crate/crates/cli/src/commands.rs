use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use motionforge::bezier::{bezier_motion, ControlPolygon};
use motionforge::extmap::{fiber, mu, FiberOffsets, MapSelector};
use motionforge::motions::{
    canonicalize_pair, cubic_from_essentials, cubic_interpolant_with, darboux_for_pair, helical_interpolant,
    trajectory_diagnostics, trajectory_exact, transmission_curve, CubicOptions,
};
use motionforge::posemodels::{matrix_to_dq_with_ratio, PoseJson};
use motionforge::verify;
use motionforge::{AmbientPose, CanonicalPair, Error, MotionCurve, PoseMatrix, Tolerance};

use crate::args::{Cli, Command, Format, Method, MotionArgs};
use crate::error::CliError;
use crate::output::{emit, pretty, Table};

pub fn run(cli: Cli) -> Result<i32, CliError> {
    let tol = Tolerance::new(cli.tolerance).ok_or_else(|| CliError::invalid("tolerance must be positive"))?;
    let ctx = Context {
        tol,
        format: cli.format,
        output: cli.output.as_deref(),
        report: cli.report.as_deref(),
    };
    match cli.command {
        Command::Convert { pose } => convert(&ctx, &pose),
        Command::Fiber { pose, m, samples, seed } => fiber_samples(&ctx, &pose, m, samples, seed),
        Command::Interpolate { motion, study_output } => interpolate(&ctx, &motion, study_output.as_deref()),
        Command::Transmission { motion } => transmission(&ctx, &motion),
        Command::Trajectory { motion, point } => trajectory(&ctx, &motion, point),
        Command::Bezier {
            control,
            m,
            samples,
            study_output,
        } => bezier(&ctx, &control, m, samples, study_output.as_deref()),
        Command::Check { seed, criterion } => check(&ctx, seed, criterion),
    }
}

struct Context<'a> {
    tol: Tolerance,
    format: Format,
    output: Option<&'a Path>,
    report: Option<&'a Path>,
}

impl Context<'_> {
    fn write_report<T: Serialize>(&self, value: &T) -> Result<(), CliError> {
        match self.report {
            Some(p) => emit(Some(p), &pretty(value)),
            None => Ok(()),
        }
    }
}

/// Inline JSON if the argument starts with `{`, otherwise a file path.
fn read_json<T: for<'de> Deserialize<'de>>(arg: &str) -> Result<T, CliError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_owned()
    } else {
        fs::read_to_string(arg).map_err(|e| CliError::io(Path::new(arg), e))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::invalid(format!("{arg}: {e}")))
}

fn read_pose(arg: &str, tol: Tolerance) -> Result<PoseMatrix, CliError> {
    Ok(read_json::<PoseJson>(arg)?.to_pose(tol)?)
}

fn check_samples(n: usize) -> Result<(), CliError> {
    if n < 2 {
        return Err(CliError::invalid("--samples must be at least 2"));
    }
    Ok(())
}

fn convert(ctx: &Context, arg: &str) -> Result<i32, CliError> {
    let input: PoseJson = read_json(arg)?;
    let (out, ratio) = match input {
        PoseJson::Matrix { .. } => {
            let (h, l) = matrix_to_dq_with_ratio(&input.to_pose(ctx.tol)?, ctx.tol)?;
            (PoseJson::from_dq(&h), Some(l))
        }
        PoseJson::Study { .. } => (PoseJson::from_pose(&input.to_pose(ctx.tol)?), None),
    };
    emit(ctx.output, &serde_json::to_string(&out).expect("serialisable pose"))?;
    if ctx.output.is_none() {
        emit(None, "\n")?;
    }
    ctx.write_report(&json!({ "ratio": ratio }))?;
    Ok(0)
}

fn fiber_samples(ctx: &Context, arg: &str, m: [f64; 4], samples: usize, seed: u64) -> Result<i32, CliError> {
    let sel = MapSelector::new(m)?;
    let x = AmbientPose::from_pose(&read_pose(arg, ctx.tol)?);
    let gen = fiber(&sel, &x, ctx.tol)?;
    let image = mu(&sel, &x, ctx.tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let header = (1..=6)
        .map(|i| format!("alpha{i}"))
        .chain((0..13).map(|i| format!("x{i}")))
        .chain(study_columns())
        .chain(["distance".to_owned()]);
    let mut table = Table::new(header);
    for _ in 0..samples {
        let offsets = FiberOffsets(std::array::from_fn(|_| rng.random_range(-1.0..1.0)));
        let y = gen.point(&offsets);
        let h = mu(&sel, &y, ctx.tol)?.normalize(ctx.tol)?;
        let mut row = offsets.0.to_vec();
        row.extend(y.coords);
        row.extend(h.to_array());
        row.push(h.projective_distance(image));
        table.push(row);
    }
    emit(ctx.output, &table.render(ctx.format))?;
    ctx.write_report(&json!({
        "m": m,
        "basis": gen.basis,
        "image": image.normalize(ctx.tol)?.to_array(),
    }))?;
    Ok(0)
}

fn study_columns() -> impl Iterator<Item = String> {
    (0..4).map(|i| format!("p{i}")).chain((0..4).map(|i| format!("q{i}")))
}

fn pose_columns() -> Vec<String> {
    let mut cols = vec!["t".to_owned()];
    for i in 1..=3 {
        for j in 1..=3 {
            cols.push(format!("r{i}{j}"));
        }
    }
    cols.extend(["a1", "a2", "a3"].map(String::from));
    cols
}

struct Built {
    pair: CanonicalPair,
    motion: MotionCurve,
    method: Method,
}

fn build_motion(args: &MotionArgs, tol: Tolerance) -> Result<Built, CliError> {
    check_samples(args.samples)?;
    let start = read_pose(&args.start, tol)?;
    let end = read_pose(&args.end, tol)?;
    let pair = canonicalize_pair(&start, &end, tol)?;
    let motion = match args.method {
        Method::Darboux => darboux_for_pair(&pair, args.s_a, args.s_b, tol)?,
        Method::Helical => helical_interpolant(&pair).0,
        Method::Cubic => {
            let m = MapSelector::new(args.m)?;
            let options = CubicOptions {
                allow_pole: args.allow_pole,
            };
            match (args.a_ess, args.b_ess) {
                (Some(a), Some(b)) => cubic_from_essentials(&pair, &m, a, b, options, tol)?,
                _ => cubic_interpolant_with(
                    &pair,
                    &m,
                    &FiberOffsets(args.alpha),
                    &FiberOffsets(args.beta),
                    options,
                    tol,
                )?,
            }
        }
    };
    Ok(Built {
        pair,
        motion,
        method: args.method,
    })
}

fn sample_motion(motion: &MotionCurve, samples: usize, tol: Tolerance) -> Result<(Table, Table), CliError> {
    let mut poses = Table::new(pose_columns());
    let mut study = Table::new(std::iter::once("t".to_owned()).chain(study_columns()));
    for t in motion.sample_times(samples) {
        let x = motion.pose_matrix_at(t, tol)?;
        let mut row = vec![t];
        row.extend(x.linear.transpose().iter().copied());
        row.extend(x.translation.iter().copied());
        poses.push(row);
        let mut row = vec![t];
        row.extend(motion.pose_at(t, tol)?.to_array());
        study.push(row);
    }
    Ok((poses, study))
}

fn motion_report(built: &Built) -> serde_json::Value {
    let screw = matches!(built.method, Method::Helical).then(|| helical_interpolant(&built.pair).1);
    json!({
        "method": format!("{:?}", built.method).to_lowercase(),
        "provenance": built.motion.provenance(),
        "phi": built.pair.phi,
        "d": built.pair.d,
        "axis": built.pair.world_axis(),
        "degenerate": built.pair.degenerate,
        "screw": screw,
    })
}

fn interpolate(ctx: &Context, args: &MotionArgs, study_output: Option<&Path>) -> Result<i32, CliError> {
    let built = build_motion(args, ctx.tol)?;
    let (poses, study) = sample_motion(&built.motion, args.samples, ctx.tol)?;
    emit(ctx.output, &poses.render(ctx.format))?;
    if let Some(p) = study_output {
        emit(Some(p), &study.render(ctx.format))?;
    }
    ctx.write_report(&motion_report(&built))?;
    Ok(0)
}

fn transmission(ctx: &Context, args: &MotionArgs) -> Result<i32, CliError> {
    let built = build_motion(args, ctx.tol)?;
    let curve = transmission_curve(&built.motion, &built.pair, args.samples, ctx.tol)?;
    let mut table = Table::new(["t", "omega", "z"]);
    for s in &curve.samples {
        table.push(vec![s.t, s.omega, s.z]);
    }
    emit(ctx.output, &table.render(ctx.format))?;
    ctx.write_report(&json!({
        "motion": motion_report(&built),
        "law": curve.law,
        "residual": curve.residual,
        "cylinder_deviation": curve.cylinder_deviation,
    }))?;
    Ok(0)
}

fn trajectory(ctx: &Context, args: &MotionArgs, point: [f64; 3]) -> Result<i32, CliError> {
    let built = build_motion(args, ctx.tol)?;
    let x = nalgebra::Vector3::from(point);
    let mut table = Table::new(["t", "x", "y", "z"]);
    let diagnostics = match trajectory_exact(&built.motion, &x) {
        Ok(curve) => {
            for t in built.motion.sample_times(args.samples) {
                let p = match curve.eval(t) {
                    Some(p) => p,
                    None => built.motion.pose_matrix_at(t, ctx.tol)?.apply(&x),
                };
                table.push(vec![t, p[0], p[1], p[2]]);
            }
            let axis = (built.method == Method::Cubic).then(|| built.pair.world_axis());
            Some(trajectory_diagnostics(&curve, axis.as_ref(), built.motion.domain()))
        }
        Err(Error::NotAlgebraic) => {
            for t in built.motion.sample_times(args.samples) {
                let p = built.motion.pose_matrix_at(t, ctx.tol)?.apply(&x);
                table.push(vec![t, p.x, p.y, p.z]);
            }
            None
        }
        Err(e) => return Err(e.into()),
    };
    emit(ctx.output, &table.render(ctx.format))?;
    ctx.write_report(&json!({
        "motion": motion_report(&built),
        "point": point,
        "algebraic": diagnostics.is_some(),
        "trajectory": diagnostics,
    }))?;
    Ok(0)
}

#[derive(Debug, Deserialize)]
struct ControlFile {
    poses: Vec<PoseJson>,
    #[serde(default)]
    offsets: Option<Vec<[f64; 6]>>,
}

fn bezier(
    ctx: &Context,
    path: &Path,
    m: [f64; 4],
    samples: usize,
    study_output: Option<&Path>,
) -> Result<i32, CliError> {
    check_samples(samples)?;
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let control: ControlFile =
        serde_json::from_str(&text).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
    let poses = control
        .poses
        .iter()
        .map(|p| p.to_pose(ctx.tol))
        .collect::<Result<Vec<_>, _>>()?;
    let offsets: Option<Vec<FiberOffsets>> = control.offsets.map(|o| o.into_iter().map(FiberOffsets).collect());
    let sel = MapSelector::new(m)?;
    let cp = ControlPolygon::from_poses(&poses, offsets.as_deref(), &sel, ctx.tol)?;
    let motion = bezier_motion(&cp, &sel, ctx.tol)?;
    let (poses, study) = sample_motion(&motion, samples, ctx.tol)?;
    emit(ctx.output, &poses.render(ctx.format))?;
    if let Some(p) = study_output {
        emit(Some(p), &study.render(ctx.format))?;
    }
    ctx.write_report(&json!({
        "m": m,
        "degree": cp.degree(),
        "provenance": motion.provenance(),
    }))?;
    Ok(0)
}

fn check(ctx: &Context, seed: u64, criterion: Option<u8>) -> Result<i32, CliError> {
    let reports = match criterion {
        Some(id) => vec![verify::run_criterion(id, seed)
            .ok_or_else(|| CliError::invalid(format!("no suite numbered {id}; use 1 to 10")))?],
        None => verify::run_all(seed),
    };
    let mut text = String::new();
    for r in &reports {
        text.push_str(&r.to_string());
        text.push('\n');
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    text.push_str(&format!(
        "{} of {} suites passed\n",
        reports.len() - failed,
        reports.len()
    ));
    emit(ctx.output, &text)?;
    ctx.write_report(&json!({ "seed": seed, "suites": reports }))?;
    Ok(if failed == 0 { 0 } else { 1 })
}
