use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use chordgen_core::dataset::{counts_report_for, write_csv, write_jsonl, Dataset};
use chordgen_core::explorer::Explorer;
use chordgen_core::midi::{self, PlaybackConfig, Voicing};
use chordgen_core::{all_scales, MinorDiminishedRoot, Mode, TransitionTable};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "chordgen",
    version,
    about = "Enumerate and explore chord progressions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List every numeric progression of a given length.
    Enumerate(EnumerateArgs),
    /// Spell every progression in all 21 scales of each mode.
    Dataset(DatasetArgs),
    /// Computed progression counts next to the published totals.
    Counts(CountsArgs),
    /// The three alternate variations of a progression.
    Alternates(ScaleArgs),
    /// Write a progression as a Standard MIDI File.
    ExportMidi(ExportMidiArgs),
    /// Print the 42 scale ids.
    Scales,
    /// Run the HTTP API.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Major,
    Minor,
    Both,
}

impl ModeArg {
    fn modes(self) -> &'static [Mode] {
        match self {
            ModeArg::Major => &[Mode::Major],
            ModeArg::Minor => &[Mode::Minor],
            ModeArg::Both => &Mode::ALL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    /// Major transition table document (TOML); built-in table if omitted.
    #[arg(long)]
    pub major_table: Option<PathBuf>,
    /// Minor transition table document (TOML); built-in table if omitted.
    #[arg(long)]
    pub minor_table: Option<PathBuf>,
}

impl TableArgs {
    fn load(&self, mode: Mode) -> Result<TransitionTable> {
        let path = match mode {
            Mode::Major => &self.major_table,
            Mode::Minor => &self.minor_table,
        };
        let Some(path) = path else {
            return Ok(TransitionTable::default_for(mode));
        };
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let table = TransitionTable::from_document(&text)
            .with_context(|| format!("loading {}", path.display()))?;
        if table.mode() != mode {
            bail!(
                "{} describes a {} table, expected {mode}",
                path.display(),
                table.mode()
            );
        }
        Ok(table)
    }
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long, value_enum, default_value = "major")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u16).range(2..))]
    pub length: u16,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Write progressions here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub tables: TableArgs,
}

#[derive(Debug, Args)]
pub struct DatasetArgs {
    #[arg(long, value_enum, default_value = "both")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 4)]
    pub length: u16,
    /// Allow lengths other than 4 and 8.
    #[arg(long)]
    pub any_length: bool,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Root the minor vii° chord on the raised leading tone.
    #[arg(long)]
    pub raised_leading_tone: bool,
    #[command(flatten)]
    pub tables: TableArgs,
}

#[derive(Debug, Args)]
pub struct CountsArgs {
    #[arg(long = "length", default_values_t = [4u16, 8])]
    pub lengths: Vec<u16>,
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub tables: TableArgs,
}

#[derive(Debug, Args)]
pub struct ScaleArgs {
    /// Scale id such as `C-major` or `F#-minor`.
    #[arg(long)]
    pub scale: String,
    /// Comma-separated degree tokens, e.g. `1,5,6,4` or `1,7Maj,3,4`.
    #[arg(long)]
    pub progression: String,
    #[arg(long)]
    pub raised_leading_tone: bool,
}

#[derive(Debug, Args)]
pub struct ExportMidiArgs {
    #[command(flatten)]
    pub target: ScaleArgs,
    #[arg(long, default_value_t = midi::DEFAULT_TEMPO_BPM)]
    pub tempo: u16,
    #[arg(long, default_value_t = midi::DEFAULT_OCTAVE, allow_negative_numbers = true)]
    pub octave: i8,
    /// Keep every chord note in the chosen octave instead of ascending.
    #[arg(long)]
    pub same_octave: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, env = "CHORDGEN_PORT", default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: std::net::IpAddr,
    /// Serve progression listings from a pre-generated dataset CSV.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    #[arg(long)]
    pub raised_leading_tone: bool,
    #[command(flatten)]
    pub tables: TableArgs,
}

fn dim_root(raised: bool) -> MinorDiminishedRoot {
    if raised {
        MinorDiminishedRoot::RaisedLeadingTone
    } else {
        MinorDiminishedRoot::Natural
    }
}

/// A buffered file at `path`, or `stdout` when no path is given.
fn sink<'a>(path: Option<&Path>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(stdout)),
    })
}

/// Run a non-server command, writing reports to `stdout`.
pub fn run(command: Command, stdout: &mut dyn Write) -> Result<()> {
    match command {
        Command::Enumerate(args) => enumerate(args, stdout),
        Command::Dataset(args) => dataset(args, stdout),
        Command::Counts(args) => counts(args, stdout),
        Command::Alternates(args) => alternates_cmd(args, stdout),
        Command::ExportMidi(args) => export_midi(args, stdout),
        Command::Scales => {
            for scale in all_scales() {
                writeln!(stdout, "{}", scale.id())?;
            }
            Ok(())
        }
        Command::Serve(args) => {
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(serve(args))
        }
    }
}

fn enumerate(args: EnumerateArgs, stdout: &mut dyn Write) -> Result<()> {
    let len = args.length as usize;
    let tables = args
        .mode
        .modes()
        .iter()
        .map(|m| args.tables.load(*m))
        .collect::<Result<Vec<_>>>()?;
    let mut totals = Vec::new();
    {
        let mut out = sink(args.output.as_deref(), &mut *stdout)?;
        if args.format == Format::Csv {
            writeln!(out, "number_progression,mode")?;
        }
        for table in &tables {
            let mut count = 0u64;
            for p in table.progressions(len) {
                match args.format {
                    Format::Text => writeln!(out, "{p}")?,
                    Format::Csv => writeln!(out, "\"{p}\",{}", p.mode)?,
                    Format::Jsonl => {
                        let record = serde_json::json!({ "number_progression": p.token_strings(), "mode": p.mode });
                        writeln!(out, "{record}")?
                    }
                }
                count += 1;
            }
            totals.push((table.mode(), count));
        }
        out.flush()?;
    }
    if totals.len() > 1 {
        for (mode, count) in &totals {
            let label = match mode {
                Mode::Major => "Major",
                Mode::Minor => "Minor",
            };
            writeln!(stdout, "{label} Possibilities: {count}")?;
        }
    }
    let total: u64 = totals.iter().map(|(_, c)| c).sum();
    writeln!(stdout, "Total Possibilities: {total}")?;
    Ok(())
}

fn dataset(args: DatasetArgs, stdout: &mut dyn Write) -> Result<()> {
    let len = args.length as usize;
    if !args.any_length && len != 4 && len != 8 {
        bail!("length {len} is not 4 or 8; pass --any-length to allow it");
    }
    if len == 0 {
        bail!("length must be at least 1");
    }
    let tables = args
        .mode
        .modes()
        .iter()
        .map(|m| args.tables.load(*m))
        .collect::<Result<Vec<_>>>()?;
    let ds =
        Dataset::with_tables(len, tables).minor_diminished_root(dim_root(args.raised_leading_tone));
    let mut out = sink(args.out.as_deref(), &mut *stdout)?;
    let rows = match args.format {
        Format::Csv => write_csv(ds.rows(), &mut out)?,
        Format::Jsonl => write_jsonl(ds.rows(), &mut out)?,
        Format::Text => bail!("dataset supports --format csv or jsonl"),
    };
    out.flush()?;
    drop(out);
    if args.out.is_some() {
        writeln!(stdout, "wrote {rows} rows")?;
    }
    Ok(())
}

fn counts(args: CountsArgs, stdout: &mut dyn Write) -> Result<()> {
    let lengths: Vec<usize> = args.lengths.iter().map(|l| *l as usize).collect();
    let major = args.tables.load(Mode::Major)?;
    let minor = args.tables.load(Mode::Minor)?;
    let report = counts_report_for(&lengths, &major, &minor)?;
    if args.json {
        writeln!(stdout, "{}", serde_json::to_string_pretty(&report)?)?;
    } else {
        write!(stdout, "{report}")?;
    }
    Ok(())
}

fn alternates_cmd(args: ScaleArgs, stdout: &mut dyn Write) -> Result<()> {
    let response = Explorer::default()
        .minor_diminished_root(dim_root(args.raised_leading_tone))
        .base_progression(&args.scale, &args.progression)?;
    let numbers = response.numeric_progression.join(",");
    writeln!(
        stdout,
        "{} {numbers}: {}",
        response.scale,
        response.scale_progression.join(",")
    )?;
    for v in &response.variations {
        writeln!(
            stdout,
            "{} {numbers}: {}",
            v.scale,
            v.scale_progression.join(",")
        )?;
    }
    Ok(())
}

fn export_midi(args: ExportMidiArgs, stdout: &mut dyn Write) -> Result<()> {
    let mut config = PlaybackConfig::new(args.tempo, args.octave)?;
    if args.same_octave {
        config.voicing = Voicing::SameOctave;
    }
    let explorer =
        Explorer::default().minor_diminished_root(dim_root(args.target.raised_leading_tone));
    let bytes = explorer.midi(&args.target.scale, &args.target.progression, &config)?;
    std::fs::write(&args.out, &bytes).with_context(|| format!("writing {}", args.out.display()))?;
    writeln!(
        stdout,
        "wrote {} bytes to {}",
        bytes.len(),
        args.out.display()
    )?;
    Ok(())
}

async fn serve(args: ServeArgs) -> Result<()> {
    let mut explorer = Explorer::new(
        args.tables.load(Mode::Major)?,
        args.tables.load(Mode::Minor)?,
    )
    .minor_diminished_root(dim_root(args.raised_leading_tone));
    if let Some(path) = &args.dataset {
        let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
        explorer = explorer
            .with_dataset(io::BufReader::new(file))
            .with_context(|| format!("loading dataset {}", path.display()))?;
    }
    crate::server::serve(explorer, SocketAddr::new(args.host, args.port)).await?;
    Ok(())
}
