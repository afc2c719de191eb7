//! `subsurf`: simulate scans, form images and measure them.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{error::ErrorKind, Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "subsurf", version, about = "mmWave FMCW subsurface scan simulator and imager")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the forward model over a scene file and write the dataset.
    Simulate(SimulateArgs),
    /// Backproject a dataset (or raw IF captures) into an image.
    Image(ImageArgs),
    /// Measure an image: target length, relative intensity, peak spacing.
    Analyze(AnalyzeArgs),
    /// Write one of the canonical scene files.
    Scene(SceneArgs),
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Scene description (TOML).
    #[arg(long)]
    scene: PathBuf,
    /// Output dataset (binary).
    #[arg(long)]
    out: PathBuf,
    /// Also write the dataset as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, default_value_t = commands::default_workers())]
    workers: usize,
    /// Surface samples per wavelength at the highest frequency.
    #[arg(long, default_value_t = 10.0)]
    spw: f64,
}

#[derive(Debug, Args)]
struct ImageArgs {
    /// Dataset file; `.csv` files also need `--scene` for the radar height.
    #[arg(long, required_unless_present = "raw_if", conflicts_with = "raw_if")]
    dataset: Option<PathBuf>,
    /// Raw IF capture CSV (`p,n,re,im`), imaged with the scan of `--scene`.
    #[arg(long, requires = "scene")]
    raw_if: Option<PathBuf>,
    #[arg(long)]
    scene: Option<PathBuf>,
    /// Output stem; writes `<stem>.pgm`, `<stem>.csv` and `<stem>.meta`.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1e-3)]
    pixel_x: f64,
    #[arg(long, default_value_t = 2e-3)]
    pixel_y: f64,
    /// Extra one-way path added to every pixel distance (m).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    range_offset: f64,
    #[arg(long, default_value_t = commands::default_workers())]
    workers: usize,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    /// Image stem or image CSV written by `image`.
    #[arg(long)]
    image: PathBuf,
    /// Unobstructed image used for the target band and intensity scale.
    #[arg(long)]
    reference: Option<PathBuf>,
    /// Fail unless a reference is given.
    #[arg(long)]
    relative: bool,
    /// Scene of the image; lets the target search skip the obstacle.
    #[arg(long)]
    scene: Option<PathBuf>,
    /// Write the JSON report here as well as to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Minimum peak prominence as a fraction of the profile maximum.
    #[arg(long, default_value_t = 0.1)]
    prominence: f64,
}

#[derive(Debug, Args)]
struct SceneArgs {
    /// none, mdf or softwood.
    #[arg(long)]
    variant: String,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            eprintln!("error: a subcommand is required: simulate, image, analyze or scene");
            return ExitCode::from(2);
        }
        Err(e) => {
            let rendered = e.render().to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            eprintln!("error: {}", first.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => commands::simulate(a),
        Command::Image(a) => commands::image(a),
        Command::Analyze(a) => commands::analyze(a),
        Command::Scene(a) => commands::scene(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.to_string().replace('\n', " "));
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
