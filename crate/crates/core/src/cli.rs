//! Command-line front end: `register`, `eval`, `synth` and `fit`.
//!
//! Settings come from an optional `key = value` file and are overridden by
//! flags. Every text output starts with comment lines recording the
//! effective settings and seed.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::eval::{
    kitti_segment_errors, relative_pose_error, rpe_csv, scene_by_name, summary_table,
    synthetic_trajectory, raycast_scene_stream, to_depth_image, SensorModel, KITTI_SEGMENT_LENGTHS,
};
use crate::features::{FeatureParams, FrameFeatures};
use crate::geometry::RigidTransform;
use crate::registration::{chain_trajectory, register_pair, RansacConfig, SolverKind, Trajectory};
use crate::scan::{
    depth_to_cloud, downsample, load_depth_image, load_kitti_bin, organize_lidar, read_trajectory,
    save_depth_image, write_kitti_bin, write_ply, write_trajectory, DepthIntrinsics, GridConfig,
    KeyValueFile, OrganizedCloud, PlyData, TrajectoryFormat,
};

/// Exit status: success.
pub const EXIT_OK: i32 = 0;
/// Exit status: bad arguments or settings.
pub const EXIT_USAGE: i32 = 1;
/// Exit status: unreadable or unwritable files.
pub const EXIT_IO: i32 = 2;
/// Exit status: registration failed for every frame pair.
pub const EXIT_REGISTRATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "linereg", version, about = "Line-intersection registration of sparse 3D scans")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Register consecutive frames and write the trajectory.
    Register(RegisterArgs),
    /// Compare an estimated trajectory against ground truth.
    Eval(EvalArgs),
    /// Write scans and ground truth of a synthetic scene.
    Synth(SynthArgs),
    /// Dump the fitted lines and planes of one frame as PLY.
    Fit(FitArgs),
}

/// Kind of input frames.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DatasetKind {
    /// Velodyne `.bin` sweeps binned on a spherical grid.
    LidarBin,
    /// 16-bit depth images (PNG or PGM).
    DepthImage,
}

impl FromStr for DatasetKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "lidar-bin" | "lidar" => Ok(Self::LidarBin),
            "depth-image" | "depth" => Ok(Self::DepthImage),
            other => Err(Error::InvalidInput(format!("unknown dataset kind `{other}` (lidar-bin, depth-image)"))),
        }
    }
}

impl std::fmt::Display for DatasetKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::LidarBin => "lidar-bin",
            Self::DepthImage => "depth-image",
        })
    }
}

/// Frame-reading and fitting settings shared by `register` and `fit`.
#[derive(Clone, Debug, Default, Args)]
pub struct InputArgs {
    /// `key = value` settings file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// lidar-bin or depth-image (default: guessed from the files).
    #[arg(long)]
    pub kind: Option<String>,
    /// Spherical grid settings for LiDAR input (default: `grid.cfg` next to the frames).
    #[arg(long)]
    pub grid: Option<PathBuf>,
    /// Camera intrinsics for depth input (default: `intrinsics.cfg` next to the frames).
    #[arg(long)]
    pub intrinsics: Option<PathBuf>,
    /// Keep every n-th row.
    #[arg(long)]
    pub downsample_rows: Option<usize>,
    /// Keep every n-th column.
    #[arg(long)]
    pub downsample_cols: Option<usize>,
    /// Point-to-line inlier distance of scan-line fitting (m).
    #[arg(long)]
    pub line_inlier_dist: Option<f64>,
    /// Point-to-plane inlier distance of plane fitting (m).
    #[arg(long)]
    pub plane_inlier_dist: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Default, Args)]
pub struct RegisterArgs {
    /// Directory of frames, or the frames themselves, in order.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[command(flatten)]
    pub input: InputArgs,
    /// 7L, 1L2P or 3L1P.
    #[arg(long)]
    pub solver: Option<String>,
    #[arg(long)]
    pub candidate_dist: Option<f64>,
    /// Degrees.
    #[arg(long)]
    pub plane_angle_max: Option<f64>,
    #[arg(long)]
    pub inlier_dist: Option<f64>,
    #[arg(long)]
    pub hypotheses: Option<usize>,
    #[arg(long)]
    pub rounds: Option<usize>,
    #[arg(long)]
    pub min_inliers: Option<usize>,
    #[arg(long)]
    pub ap_epsilon: Option<f64>,
    #[arg(long)]
    pub ap_max_iters: Option<usize>,
    #[arg(long)]
    pub refit_epsilon: Option<f64>,
    #[arg(long)]
    pub refit_max_iters: Option<usize>,
    /// Re-solve over all inliers after the last round.
    #[arg(long)]
    pub refit_inliers: Option<bool>,
    #[arg(long)]
    pub symmetric_pass: Option<bool>,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Clone, Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub est: PathBuf,
    #[arg(long)]
    pub gt: PathBuf,
    /// tum or kitti.
    #[arg(long, default_value = "tum")]
    pub format: String,
    /// Report relative pose errors (default: both metrics).
    #[arg(long)]
    pub rpe: bool,
    /// Report segment drift errors (default: both metrics).
    #[arg(long)]
    pub segments: bool,
    /// Comma-separated segment lengths in meters.
    #[arg(long, value_delimiter = ',')]
    pub segment_lengths: Option<Vec<f64>>,
    /// Write the per-step CSV here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct SynthArgs {
    /// box_room, corridor or street.
    #[arg(long)]
    pub scene: String,
    #[arg(long, default_value_t = 5)]
    pub frames: usize,
    /// Range noise standard deviation (m).
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Turn per frame (degrees).
    #[arg(long, default_value_t = 2.0)]
    pub step_deg: f64,
    /// Travel per frame (m).
    #[arg(long, default_value_t = 0.3)]
    pub step_m: f64,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Clone, Debug, Args)]
pub struct FitArgs {
    pub frame: PathBuf,
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, short)]
    pub out: PathBuf,
}

/// Effective settings of a `register` or `fit` run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub kind: DatasetKind,
    pub frames: Vec<PathBuf>,
    pub grid: GridConfig,
    pub intrinsics: DepthIntrinsics,
    pub downsample: (usize, usize),
    pub features: FeatureParams,
    pub ransac: RansacConfig,
    pub out: PathBuf,
}

impl RunConfig {
    /// Merges defaults, the settings file and flags, in increasing priority.
    pub fn resolve(inputs: &[PathBuf], input: &InputArgs, reg: Option<&RegisterArgs>, out: &Path) -> Result<Self> {
        let file = match &input.config {
            Some(p) => KeyValueFile::load(p)?,
            None => KeyValueFile::default(),
        };
        let frames = list_frames(inputs)?;
        let kind = match input.kind.clone().or_else(|| file.get_str("kind").map(str::to_string)) {
            Some(k) => k.parse()?,
            None => guess_kind(&frames)?,
        };
        let dir = frames[0].parent().map(Path::to_path_buf).unwrap_or_default();
        let side_file = |flag: &Option<PathBuf>, key: &str, default: &str| -> Option<PathBuf> {
            flag.clone()
                .or_else(|| file.get_str(key).map(PathBuf::from))
                .or_else(|| Some(dir.join(default)).filter(|p| p.exists()))
        };
        let grid = match side_file(&input.grid, "grid", "grid.cfg") {
            Some(p) => GridConfig::from_kv(&KeyValueFile::load(p)?)?,
            None => GridConfig::default(),
        };
        let intrinsics = match side_file(&input.intrinsics, "intrinsics", "intrinsics.cfg") {
            Some(p) => DepthIntrinsics::from_kv(&KeyValueFile::load(p)?)?,
            None => DepthIntrinsics::default(),
        };

        fn pick<T: FromStr>(flag: Option<T>, file: &KeyValueFile, key: &str, default: T) -> Result<T>
        where
            T::Err: std::fmt::Display,
        {
            Ok(match flag {
                Some(v) => v,
                None => file.get(key)?.unwrap_or(default),
            })
        }

        let default_step = if kind == DatasetKind::DepthImage { 10 } else { 1 };
        let downsample = (
            pick(input.downsample_rows, &file, "downsample_rows", default_step)?,
            pick(input.downsample_cols, &file, "downsample_cols", default_step)?,
        );
        if downsample.0 == 0 || downsample.1 == 0 {
            return Err(Error::InvalidInput("down-sampling steps must be at least 1".into()));
        }
        let seed = pick(input.seed, &file, "seed", 0u64)?;

        let mut features = match kind {
            DatasetKind::LidarBin => FeatureParams::lidar(),
            DatasetKind::DepthImage => FeatureParams::depth_camera(),
        }
        .with_seed(seed);
        features.lines.inlier_dist = pick(input.line_inlier_dist, &file, "line_inlier_dist", features.lines.inlier_dist)?;
        features.normal_pair_dist = 2.0 * features.lines.inlier_dist;
        features.planes.inlier_dist = pick(input.plane_inlier_dist, &file, "plane_inlier_dist", features.planes.inlier_dist)?;
        let factor = downsample.0 * downsample.1;
        features.planes = features.planes.downsampled(factor);

        let reg = reg.cloned().unwrap_or_default();
        let solver: SolverKind = match reg.solver.or_else(|| file.get_str("solver").map(str::to_string)) {
            Some(s) => s.parse()?,
            None => SolverKind::SevenLines,
        };
        let mut ransac = match kind {
            DatasetKind::LidarBin => RansacConfig::lidar(solver),
            DatasetKind::DepthImage => RansacConfig::depth_camera(solver),
        };
        ransac.seed = seed;
        ransac.candidate_dist = pick(reg.candidate_dist, &file, "candidate_dist", ransac.candidate_dist)?;
        ransac.plane_angle_max = pick(reg.plane_angle_max, &file, "plane_angle_max", ransac.plane_angle_max)?;
        ransac.inlier_dist = pick(reg.inlier_dist, &file, "inlier_dist", ransac.inlier_dist)?;
        ransac.hypotheses = pick(reg.hypotheses, &file, "hypotheses", ransac.hypotheses)?;
        ransac.refinement_rounds = pick(reg.rounds, &file, "rounds", ransac.refinement_rounds)?;
        ransac.min_inliers = pick(reg.min_inliers, &file, "min_inliers", ransac.min_inliers)?;
        ransac.refit_inliers = pick(reg.refit_inliers, &file, "refit_inliers", ransac.refit_inliers)?;
        ransac.symmetric_pass = pick(reg.symmetric_pass, &file, "symmetric_pass", ransac.symmetric_pass)?;
        ransac.ap.epsilon = pick(reg.ap_epsilon, &file, "ap_epsilon", ransac.ap.epsilon)?;
        ransac.ap.max_iters = pick(reg.ap_max_iters, &file, "ap_max_iters", ransac.ap.max_iters)?;
        ransac.refit_ap.epsilon = pick(reg.refit_epsilon, &file, "refit_epsilon", ransac.refit_ap.epsilon)?;
        ransac.refit_ap.max_iters = pick(reg.refit_max_iters, &file, "refit_max_iters", ransac.refit_ap.max_iters)?;
        ransac.validate()?;

        Ok(Self {
            kind,
            frames,
            grid,
            intrinsics,
            downsample,
            features,
            ransac,
            out: out.to_path_buf(),
        })
    }

    /// Settings as `key = value` lines, in a fixed order.
    pub fn header_lines(&self) -> Vec<String> {
        let r = &self.ransac;
        let f = &self.features;
        let mut lines = vec![
            format!("kind = {}", self.kind),
            format!("frames = {}", self.frames.len()),
            format!("downsample_rows = {}", self.downsample.0),
            format!("downsample_cols = {}", self.downsample.1),
            format!("line_inlier_dist = {}", f.lines.inlier_dist),
            format!("plane_inlier_dist = {}", f.planes.inlier_dist),
            format!("solver = {}", r.solver),
            format!("candidate_dist = {}", r.candidate_dist),
            format!("plane_angle_max = {}", r.plane_angle_max),
            format!("inlier_dist = {}", r.inlier_dist),
            format!("hypotheses = {}", r.hypotheses),
            format!("rounds = {}", r.refinement_rounds),
            format!("min_inliers = {}", r.min_inliers),
            format!("refit_inliers = {}", r.refit_inliers),
            format!("symmetric_pass = {}", r.symmetric_pass),
            format!("ap_epsilon = {}", r.ap.epsilon),
            format!("ap_max_iters = {}", r.ap.max_iters),
            format!("refit_epsilon = {}", r.refit_ap.epsilon),
            format!("refit_max_iters = {}", r.refit_ap.max_iters),
            format!("seed = {}", r.seed),
        ];
        match self.kind {
            DatasetKind::LidarBin => lines.extend(self.grid.to_kv().lines().map(str::to_string)),
            DatasetKind::DepthImage => lines.extend(self.intrinsics.to_kv().lines().map(str::to_string)),
        }
        lines
    }

    /// Reads and down-samples frame `k`.
    pub fn load_frame(&self, k: usize) -> Result<OrganizedCloud> {
        let path = &self.frames[k];
        let mut cloud = match self.kind {
            DatasetKind::LidarBin => organize_lidar(&load_kitti_bin(path)?, &self.grid)?,
            DatasetKind::DepthImage => depth_to_cloud(&load_depth_image(path)?, &self.intrinsics),
        };
        if self.downsample != (1, 1) {
            cloud = downsample(&cloud, self.downsample.0, self.downsample.1);
        }
        cloud.frame_id = path.display().to_string();
        Ok(cloud)
    }
}

const FRAME_EXTENSIONS: [&str; 3] = ["bin", "png", "pgm"];

fn list_frames(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut frames = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let entries = std::fs::read_dir(input).map_err(|e| Error::io(input, e))?;
            let mut found: Vec<PathBuf> = entries
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| {
                    p.extension()
                        .and_then(|e| e.to_str())
                        .is_some_and(|e| FRAME_EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()))
                })
                .collect();
            found.sort();
            frames.extend(found);
        } else if input.exists() {
            frames.push(input.clone());
        } else {
            return Err(Error::io(input, std::io::Error::new(std::io::ErrorKind::NotFound, "no such file or directory")));
        }
    }
    if frames.is_empty() {
        return Err(Error::InvalidInput("no input frames found".into()));
    }
    Ok(frames)
}

fn guess_kind(frames: &[PathBuf]) -> Result<DatasetKind> {
    let ext = frames[0].extension().and_then(|e| e.to_str()).unwrap_or("").to_ascii_lowercase();
    match ext.as_str() {
        "bin" => Ok(DatasetKind::LidarBin),
        "png" | "pgm" => Ok(DatasetKind::DepthImage),
        _ => Err(Error::InvalidInput(format!("cannot tell the input kind of {}; pass --kind", frames[0].display()))),
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn create_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

/// Outcome of [`cmd_register`].
#[derive(Clone, Debug, PartialEq)]
pub struct RegisterSummary {
    pub trajectory: Trajectory,
    pub failed_pairs: Vec<usize>,
    pub pairs: usize,
}

impl RegisterSummary {
    pub fn all_failed(&self) -> bool {
        self.pairs > 0 && self.failed_pairs.len() == self.pairs
    }
}

/// Registers frame `k` against frame `k − 1` for every `k` and writes
/// `trajectory_tum.txt`, `trajectory_kitti.txt`, `registered.ply` and
/// `diagnostics.csv` into the output directory. A failed pair falls back to
/// the identity motion with a warning.
pub fn cmd_register(cfg: &RunConfig) -> Result<RegisterSummary> {
    if cfg.frames.len() < 2 {
        return Err(Error::InvalidInput("registration needs at least two frames".into()));
    }
    create_dir(&cfg.out)?;
    let clouds: Vec<OrganizedCloud> = (0..cfg.frames.len()).map(|k| cfg.load_frame(k)).collect::<Result<_>>()?;
    let features: Vec<FrameFeatures> = clouds.iter().map(|c| FrameFeatures::extract(c, &cfg.features)).collect();

    let header = cfg.header_lines();
    let mut diag = String::new();
    for h in &header {
        let _ = writeln!(diag, "# {h}");
    }
    diag.push_str("pair,status,round,line_candidates,plane_candidates,solved,best_score,inliers\n");
    let mut relative = Vec::with_capacity(clouds.len() - 1);
    let mut failed = Vec::new();
    for k in 1..features.len() {
        match register_pair(&features[k], &features[k - 1], &cfg.ransac) {
            Ok(reg) => {
                for r in &reg.diagnostics.rounds {
                    let _ = writeln!(
                        diag,
                        "{k},ok,{},{},{},{},{},{}",
                        r.round, r.line_candidates, r.plane_candidates, r.solved, r.best_score, r.inliers
                    );
                }
                relative.push(reg.transform);
            }
            Err(Error::RegistrationFailed { reason, diagnostics }) => {
                eprintln!("warning: frames {} -> {k}: {reason}; using identity", k - 1);
                for r in &diagnostics.rounds {
                    let _ = writeln!(
                        diag,
                        "{k},failed,{},{},{},{},{},{}",
                        r.round, r.line_candidates, r.plane_candidates, r.solved, r.best_score, r.inliers
                    );
                }
                failed.push(k);
                relative.push(RigidTransform::identity());
            }
            Err(e) => return Err(e),
        }
    }
    let trajectory = chain_trajectory(&relative);

    let mut traj_header = vec!["linereg register".to_string()];
    traj_header.extend(header.iter().cloned());
    write_trajectory(cfg.out.join("trajectory_tum.txt"), &trajectory, TrajectoryFormat::Tum, &traj_header)?;
    write_trajectory(cfg.out.join("trajectory_kitti.txt"), &trajectory, TrajectoryFormat::Kitti, &traj_header)?;
    write_text(&cfg.out.join("diagnostics.csv"), &diag)?;

    let mut ply = PlyData::default();
    ply.comments = traj_header.clone();
    let mut labels = Vec::new();
    for (k, cloud) in clouds.iter().enumerate() {
        let pose = trajectory.pose(k);
        for p in cloud.present_points() {
            ply.vertices.push(pose.apply(&p));
            labels.push(k as i32);
        }
    }
    ply.labels = Some(labels);
    write_ply(cfg.out.join("registered.ply"), &ply)?;

    Ok(RegisterSummary {
        trajectory,
        failed_pairs: failed,
        pairs: clouds.len() - 1,
    })
}

/// Computes the requested metrics, prints the summary table and optionally
/// writes the per-step CSV. Returns the printed report.
pub fn cmd_eval(args: &EvalArgs) -> Result<String> {
    let format: TrajectoryFormat = args.format.parse().map_err(Error::InvalidInput)?;
    let est = read_trajectory(&args.est, format)?;
    let gt = read_trajectory(&args.gt, format)?;
    let (want_rpe, want_seg) = match (args.rpe, args.segments) {
        (false, false) => (true, true),
        flags => flags,
    };
    let lengths = args.segment_lengths.clone().unwrap_or_else(|| KITTI_SEGMENT_LENGTHS.to_vec());
    let rpe = want_rpe.then(|| relative_pose_error(&est, &gt)).transpose()?;
    let seg = if want_seg { kitti_segment_errors(&est, &gt, &lengths)? } else { None };
    let name = args.est.file_stem().and_then(|s| s.to_str()).unwrap_or("estimate");
    let mut report = summary_table(name, rpe.as_ref(), seg.as_ref());
    if want_seg && seg.is_none() {
        report.push_str("segment errors: trajectory shorter than the shortest segment length\n");
    }
    if let (Some(path), Some(r)) = (&args.out, &rpe) {
        let header = format!(
            "# linereg eval\n# est = {}\n# gt = {}\n# format = {}\n",
            args.est.display(),
            args.gt.display(),
            args.format
        );
        write_text(path, &(header + &rpe_csv(r)))?;
    }
    Ok(report)
}

/// Writes `frame_NNNNNN.bin` (LiDAR scenes) or `frame_NNNNNN.png` (depth
/// scenes) with the matching `grid.cfg` / `intrinsics.cfg`, plus the ground
/// truth relative to the first frame in both trajectory formats.
pub fn cmd_synth(args: &SynthArgs) -> Result<Trajectory> {
    if args.frames == 0 {
        return Err(Error::InvalidInput("at least one frame is required".into()));
    }
    let spec = scene_by_name(&args.scene, args.noise, args.seed)?;
    create_dir(&args.out)?;
    let poses = synthetic_trajectory(&spec, args.frames, args.step_deg, args.step_m, args.seed);
    let header = vec![
        "linereg synth".to_string(),
        format!("scene = {}", args.scene),
        format!("frames = {}", args.frames),
        format!("noise = {}", args.noise),
        format!("step_deg = {}", args.step_deg),
        format!("step_m = {}", args.step_m),
        format!("seed = {}", args.seed),
    ];
    let mut settings: String = header.iter().map(|h| format!("# {h}\n")).collect();
    match &spec.scene.sensor {
        SensorModel::Lidar(grid) => {
            settings.push_str(&grid.to_kv());
            write_text(&args.out.join("grid.cfg"), &settings)?;
        }
        SensorModel::Depth { intrinsics, .. } => {
            settings.push_str(&intrinsics.to_kv());
            write_text(&args.out.join("intrinsics.cfg"), &settings)?;
        }
    }
    for (k, pose) in poses.iter().enumerate() {
        let scan = raycast_scene_stream(&spec.scene, pose, k as u64);
        match to_depth_image(&spec.scene, &scan) {
            Some(img) => save_depth_image(args.out.join(format!("frame_{k:06}.png")), &img)?,
            None => write_kitti_bin(args.out.join(format!("frame_{k:06}.bin")), &scan.cloud.present_points())?,
        }
    }
    let origin = poses[0].inverse();
    let gt = Trajectory::from_poses(poses.iter().map(|p| origin.compose(p)).collect());
    write_trajectory(args.out.join("groundtruth_tum.txt"), &gt, TrajectoryFormat::Tum, &header)?;
    write_trajectory(args.out.join("groundtruth_kitti.txt"), &gt, TrajectoryFormat::Kitti, &header)?;
    Ok(gt)
}

/// Fits one frame and writes its lines and planes as PLY.
pub fn cmd_fit(cfg: &RunConfig) -> Result<FrameFeatures> {
    let cloud = cfg.load_frame(0)?;
    let features = FrameFeatures::extract(&cloud, &cfg.features);
    let mut ply = features.to_ply();
    ply.comments = std::iter::once("linereg fit".to_string()).chain(cfg.header_lines()).collect();
    write_ply(&cfg.out, &ply)?;
    Ok(features)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io { .. } | Error::Image { .. } | Error::Parse { .. } => EXIT_IO,
        Error::RegistrationFailed { .. } => EXIT_REGISTRATION,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name) and runs the subcommand;
/// returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Register(args) => RunConfig::resolve(&args.inputs, &args.input, Some(&args), &args.out)
            .and_then(|cfg| cmd_register(&cfg))
            .map(|s| {
                println!(
                    "registered {} frames ({} of {} pairs failed)",
                    s.trajectory.len(),
                    s.failed_pairs.len(),
                    s.pairs
                );
                if s.all_failed() { EXIT_REGISTRATION } else { EXIT_OK }
            }),
        Command::Eval(args) => cmd_eval(&args).map(|report| {
            print!("{report}");
            EXIT_OK
        }),
        Command::Synth(args) => cmd_synth(&args).map(|gt| {
            println!("wrote {} frames to {}", gt.len(), args.out.display());
            EXIT_OK
        }),
        Command::Fit(args) => RunConfig::resolve(std::slice::from_ref(&args.frame), &args.input, None, &args.out)
            .and_then(|cfg| cmd_fit(&cfg))
            .map(|f| {
                println!(
                    "{} H-lines, {} V-lines, {} planes",
                    f.h_lines.len(),
                    f.v_lines.len(),
                    f.planes.len()
                );
                EXIT_OK
            }),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        exit_code(&e)
    })
}
