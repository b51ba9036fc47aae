use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use reluspline::analysis::bound_report;
use reluspline::io::{self, KnotsInput, Model};
use reluspline::synth::width_bound_satisfied;
use reluspline::{
    dnn_to_spline, equivalence_error, first_layer_canonicalize, positive_scale_normalize, probe_grid, synth_three_hidden,
    synth_two_hidden, synth_two_hidden_no_source, Error, KnotHierarchy, ReluNetwork, SynthesisOptions, Tolerances,
};

const SYNTH_HELP: &str = "\
A knots file holds a hierarchy object {\"level1\", \"level2\", \"level3\"?}, a bare
array of reals, or {\"knots\": [...]}. Flat lists are sorted and arranged as follows.

  --arch n1,n2 (n1 n2 + n1 + n2 knots):
      x_{1,0} .. x_{n2,0}, x_1, x_{1,1} .. x_{n2,1}, x_2, ..., x_{n1}, x_{1,n1} .. x_{n2,n1}

  --arch n1,n2,n3 (n1 n2 + n2 n3 + n1 + n2 + n3 knots), level-3 knots left of x_1:
      x3_{1,0} .. x3_{n3,0}, x_{1,0}, x3_{1,1} .. x3_{n3,1}, x_{2,0}, ...,
      x3_{1,n2} .. x3_{n3,n2}, x_1, x_{1,1} .. x_{n2,1}, x_2, ..., x_{n1}, x_{1,n1} .. x_{n2,n1}
      Knots 1..14 with --arch 2,2,2 give level1 (9, 12),
      level2 [[3, 10, 13], [6, 11, 14]], level3 [[1, 4, 7], [2, 5, 8]].

  --arch n1,n2 --no-source (n1 n2 + n1 knots):
      x_1, zeros of units 1..n2 in (x_1, x_2), x_2, ..., x_{n1}, zeros in (x_{n1}, inf)

Exit codes: 0 success, 2 bad input, 3 dimension mismatch, 4 interlacing violation
or repeated knot, 5 a prescribed knot stayed inactive.";

#[derive(Parser)]
#[command(name = "reluspline", version, about = "Exact ReLU network / CPL spline conversion and breakpoint synthesis")]
struct Cli {
    #[command(flatten)]
    tol: TolFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TolFlags {
    /// Coefficients and slopes at or below this magnitude count as zero.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol_zero: f64,
    /// Knots closer than this are merged.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol_merge: f64,
    /// Largest relative deviation accepted by `verify`.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol_eval: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Convert a network to its canonical spline.
    ToSpline {
        network: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build a network whose spline has the prescribed knots as active breakpoints.
    #[command(after_long_help = SYNTH_HELP)]
    Synth(SynthArgs),
    /// Sample a network or spline on an equispaced grid as CSV.
    Eval {
        model: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long)]
        header: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a network against a spline (or its own conversion) and audit the knot bound.
    Verify {
        network: PathBuf,
        #[arg(long)]
        spline: Option<PathBuf>,
    },
    /// Rescale to unit first-layer weights and sign-valued source channels.
    Normalize {
        network: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SynthArgs {
    knots: PathBuf,
    /// Hidden widths `n1,n2` or `n1,n2,n3`.
    #[arg(long, value_delimiter = ',')]
    arch: Vec<usize>,
    /// Two hidden layers without source channel.
    #[arg(long)]
    no_source: bool,
    /// Initial slopes of the no-source construction.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    seeds: Vec<f64>,
    /// Seed of the output-weight retry generator.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Third-layer signs; greedy when omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    eps: Vec<f64>,
    /// Output weights of the three-hidden-layer network.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    a4: Vec<f64>,
    /// Output-row magnitudes (two hidden layers).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    a3: Vec<f64>,
    /// Use the negative global sign on the alternating output row.
    #[arg(long)]
    minus: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

enum Failure {
    Verification(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::DimensionMismatch { .. } => 3,
        Error::Interlacing(_) | Error::DuplicateKnot(_) => 4,
        Error::InactiveKnots { .. } | Error::Uncovered(_) => 5,
        _ => 2,
    }
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Error> {
    match output {
        Some(p) => io::write_text(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_network(path: &Path) -> Result<ReluNetwork, Error> {
    io::network_from_json(&io::read_text(path)?)
}

fn signs(net: &ReluNetwork) -> String {
    let layers = net.layers();
    layers[..layers.len() - 1]
        .iter()
        .map(|l| format!("{:?}", l.source))
        .collect::<Vec<_>>()
        .join(" ")
}

fn to_spline(network: &Path, output: Option<&Path>, tol: &Tolerances) -> Result<(), Failure> {
    let net = read_network(network)?;
    let s = dnn_to_spline(&net, tol)?;
    let report = bound_report(&s, &net.widths(), tol);
    eprintln!("knots: {} observed, bound {}", report.observed, report.bound);
    emit(output, &io::spline_to_json(&s))?;
    Ok(())
}

fn flat_knots(input: KnotsInput) -> Vec<f64> {
    match input {
        KnotsInput::Flat(k) | KnotsInput::Wrapped { knots: k } => k,
        KnotsInput::Hierarchy(h) => {
            let mut k = h.level1;
            k.extend(h.level2.into_iter().flatten());
            k.extend(h.level3.into_iter().flatten().flatten());
            k
        }
    }
}

fn check_arch(h: &KnotHierarchy, arch: &[usize]) -> Result<(), Error> {
    let found = [h.n1(), h.n2(), h.n3()];
    for (i, (&want, &got)) in arch.iter().zip(&found).enumerate() {
        if want != got {
            return Err(Error::DimensionMismatch {
                what: format!("hidden width n{}", i + 1),
                expected: want,
                found: got,
            });
        }
    }
    Ok(())
}

fn synth(args: &SynthArgs, tol: &Tolerances) -> Result<(), Failure> {
    let input = io::knots_from_json(&io::read_text(&args.knots)?)?;
    let opts = SynthesisOptions {
        a3: args.a3.clone(),
        sign_plus: !args.minus,
        eps: args.eps.clone(),
        a4: args.a4.clone(),
        seeds: args.seeds.clone(),
        seed: args.seed,
        ..SynthesisOptions::default()
    };
    let arch = &args.arch;
    let (net, prescribed) = if args.no_source {
        let [n1, n2] = arch[..] else {
            return Err(Error::InvalidOption("--no-source needs --arch n1,n2".into()).into());
        };
        let knots = flat_knots(input);
        let net = synth_two_hidden_no_source(&knots, n1, n2, &opts, tol)?;
        (net, knots.len())
    } else {
        let h = match input {
            KnotsInput::Hierarchy(hj) => {
                let h = KnotHierarchy::try_from(hj)?;
                if !arch.is_empty() {
                    if arch.len() != 2 + usize::from(h.level3().is_some()) {
                        return Err(Error::InvalidOption("--arch does not match the hierarchy's depth".into()).into());
                    }
                    check_arch(&h, arch)?;
                }
                h
            }
            flat => {
                let knots = flat_knots(flat);
                match arch[..] {
                    [n1, n2] => KnotHierarchy::from_flat_two(&knots, n1, n2)?,
                    [n1, n2, n3] => KnotHierarchy::from_flat_three(&knots, n1, n2, n3)?,
                    _ => {
                        return Err(Error::InvalidOption("a flat knot list needs --arch n1,n2 or n1,n2,n3".into()).into())
                    }
                }
            }
        };
        let net = if h.level3().is_some() {
            if !width_bound_satisfied(h.n1(), h.n2(), h.n3()) {
                eprintln!(
                    "warning: n3 = {} is below log2(n1 + (n1 + 1) n2); sign selection may fail",
                    h.n3()
                );
            }
            synth_three_hidden(&h, &opts, tol)?
        } else {
            synth_two_hidden(&h, &opts, tol)?
        };
        (net, h.knots().len())
    };
    let report = bound_report(&dnn_to_spline(&net, tol)?, &net.widths(), tol);
    eprintln!(
        "verified: {prescribed} prescribed knots active ({} active in total, bound {})",
        report.observed, report.bound
    );
    emit(args.output.as_deref(), &io::network_to_json(&net))?;
    Ok(())
}

fn eval(
    model: &Path,
    from: f64,
    to: f64,
    samples: usize,
    header: bool,
    output: Option<&Path>,
) -> Result<(), Failure> {
    if !(from < to) {
        return Err(Error::InvalidOption(format!("--from {from} must be below --to {to}")).into());
    }
    let m: Model = io::model_from_json(&io::read_text(model)?)?;
    let mut rows = Vec::with_capacity(samples);
    for t in io::sample_points(from, to, samples) {
        rows.push((t, m.eval(t)?));
    }
    emit(output, &io::csv_rows(&rows, header))?;
    Ok(())
}

fn verify(network: &Path, spline: Option<&Path>, tol: &Tolerances) -> Result<(), Failure> {
    let net = read_network(network)?;
    let own = dnn_to_spline(&net, tol)?;
    let s = match spline {
        Some(p) => io::spline_from_json(&io::read_text(p)?)?,
        None => own.clone(),
    };
    let mut knots = s.knots().to_vec();
    knots.extend_from_slice(own.knots());
    let err = equivalence_error(&net, &s, &probe_grid(&knots, 5.0, 3));
    let report = bound_report(&own, &net.widths(), tol);
    println!("max relative error: {err:e}");
    println!(
        "knots: {} observed, bound {}, {}",
        report.observed,
        report.bound,
        if report.ok { "ok" } else { "exceeded" }
    );
    if err <= tol.eval && report.ok {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "verification failed (tolerance {:e})",
            tol.eval
        )))
    }
}

fn normalize(network: &Path, output: Option<&Path>, tol: &Tolerances) -> Result<(), Failure> {
    let net = read_network(network)?;
    let form = first_layer_canonicalize(&net, tol)?;
    if form.is_reduced() {
        eprintln!(
            "warning: degenerate first layer reduced from {} to {} units",
            form.original_width, form.effective_width
        );
    }
    let n = positive_scale_normalize(&net, tol)?;
    eprintln!("source signs before: {}", signs(&net));
    eprintln!("source signs after:  {}", signs(&n));
    emit(output, &io::network_to_json(&n))?;
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let tol = Tolerances::new(cli.tol.tol_zero, cli.tol.tol_merge, cli.tol.tol_eval)?;
    match &cli.command {
        Command::ToSpline { network, output } => to_spline(network, output.as_deref(), &tol),
        Command::Synth(args) => synth(args, &tol),
        Command::Eval {
            model,
            from,
            to,
            samples,
            header,
            output,
        } => eval(model, *from, *to, *samples, *header, output.as_deref()),
        Command::Verify { network, spline } => verify(network, spline.as_deref(), &tol),
        Command::Normalize { network, output } => normalize(network, output.as_deref(), &tol),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
