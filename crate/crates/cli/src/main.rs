//! `p3` — command-line front end for the painleve3 toolkit.

mod commands;
mod config;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "p3",
    version,
    about = "Painlevé III′ Hamiltonian toolkit: integration, Bäcklund and corner transformations, identity verification"
)]
struct Cli {
    /// JSON run configuration (all fields optional).
    #[arg(long, global = true)]
    config: Option<String>,
    /// Output path (defaults to stdout).
    #[arg(long, global = true)]
    out: Option<String>,
    /// Pass/fail tolerance override for verify.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integrate a Hamiltonian flow; CSV nodes on stdout or --out.
    Integrate,
    /// Push a v=(0,0) trajectory through a corner map; CSV output.
    Transform {
        /// Corner label: W, S, E or N (falls back to the config).
        #[arg(long)]
        corner: Option<String>,
    },
    /// Verify identities; JSON report. Exit 0 if all pass, 3 otherwise.
    Verify {
        /// Comma-separated subset of hsum,psum,tau,roundtrip,weyl,chain,pii.
        #[arg(long)]
        identities: Option<String>,
        /// Deliberately flip one sign in a corner formula (negative control):
        /// one of qw,pw,qs,ps,qe,pe,qn,pn.
        #[arg(long)]
        corrupt: Option<String>,
    },
    /// Classify a parameter point by the parity conditions.
    Classify {
        /// v1, as a decimal or a fraction like 1/2.
        v1: String,
        /// v2, same formats.
        v2: String,
    },
    /// Apply the T1 shift k times to the exact rational seed; JSON output.
    Rational { k: u32 },
    /// Evaluate a Bessel-Toeplitz tau determinant on a t-grid; CSV output.
    BesselTau {
        /// Determinant size is (n+1)×(n+1).
        #[arg(long, default_value_t = 0)]
        n: usize,
        /// Order ν (real part).
        #[arg(long, default_value_t = 0.0)]
        nu: f64,
        /// Order ν (imaginary part).
        #[arg(long, default_value_t = 0.0)]
        nu_im: f64,
        /// Mixing constant c (real part).
        #[arg(long, default_value_t = 0.0)]
        c: f64,
        /// Mixing constant c (imaginary part).
        #[arg(long, default_value_t = 0.0)]
        c_im: f64,
        /// Entry kind: ik (I + c·K) or jy (J + c·Y).
        #[arg(long, default_value = "ik")]
        kind: String,
        /// Evaluation point (or grid start when --t-max is given).
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Grid end; omit for a single-point evaluation.
        #[arg(long)]
        t_max: Option<f64>,
        /// Number of grid points.
        #[arg(long, default_value_t = 9)]
        points: usize,
    },
}

fn run(cli: Cli) -> Result<i32, commands::AppError> {
    let cfg = config::load(cli.config.as_deref()).map_err(commands::AppError::config)?;
    // --out wins over the config's output path
    let out = cli.out.as_deref().or(cfg.out.as_deref());
    match cli.cmd {
        Cmd::Integrate => commands::cmd_integrate(&cfg, out),
        Cmd::Transform { corner } => commands::cmd_transform(&cfg, corner.as_deref(), out),
        Cmd::Verify {
            identities,
            corrupt,
        } => commands::cmd_verify(&cfg, identities.as_deref(), cli.tol, corrupt.as_deref(), out),
        Cmd::Classify { v1, v2 } => commands::cmd_classify(&v1, &v2, out),
        Cmd::Rational { k } => commands::cmd_rational(k, out),
        Cmd::BesselTau {
            n,
            nu,
            nu_im,
            c,
            c_im,
            kind,
            t,
            t_max,
            points,
        } => commands::cmd_bessel_tau(n, nu, nu_im, c, c_im, &kind, t, t_max, points, out),
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", e.to_json());
            2
        }
    };
    std::process::exit(code);
}
