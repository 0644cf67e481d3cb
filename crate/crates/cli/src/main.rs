use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use treetwist::{Budget, CertificateKind, CertifyOptions, ErrorClass, Presentation};

mod commands;
mod report;

use report::Format;

/// Exit codes scripts can branch on.
const EXIT_OK: u8 = 0;
const EXIT_NOT_SOUND: u8 = 1;
const EXIT_PRECONDITION: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(name = "treetwist", version)]
#[command(about = "Exact computation in self-similar groups: quotients, twisted classes, certificates")]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Global {
    #[arg(long, global = true, value_enum, default_value = "plain")]
    format: Format,

    /// Longest word considered by the word searches
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
    budget_words: u64,

    /// Largest BFS frontier kept by the word searches
    #[arg(long, global = true, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    budget_frontier: u64,

    /// Seed for randomized subcommands
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Largest quotient that may be built
    #[arg(long, global = true, default_value_t = treetwist::quotient::DEFAULT_CAP)]
    cap: usize,

    /// Directory for quotient cache files
    #[arg(long, global = true)]
    cache: Option<PathBuf>,

    /// Fixed-point threshold for strongly saturated certificates
    #[arg(long, global = true, default_value_t = 0.25)]
    density: f64,
}

impl Global {
    pub fn budget(&self) -> Budget {
        Budget {
            max_word_len: self.budget_words as usize,
            max_frontier: self.budget_frontier as usize,
        }
    }

    pub fn certify_options(&self) -> CertifyOptions {
        CertifyOptions {
            budget: self.budget(),
            density: self.density,
            cap: self.cap,
            ..CertifyOptions::default()
        }
    }

    pub fn cache_dir(&self) -> Option<&Path> {
        self.cache.as_deref()
    }
}

/// A built-in name or a presentation file.
#[derive(Clone, Debug)]
pub struct Source(String);

impl Source {
    pub fn load(&self) -> anyhow::Result<Presentation> {
        let path = Path::new(&self.0);
        if path.is_file() {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            return Ok(Presentation::parse(&text)?);
        }
        Ok(treetwist::selfsim::builtin(&self.0)?)
    }
}

fn parse_source(s: &str) -> Result<Source, String> {
    if Path::new(s).is_file() || treetwist::selfsim::BUILTIN_NAMES.contains(&s) || s == "gupta_sidki" {
        Ok(Source(s.to_string()))
    } else {
        Err(format!(
            "not a file and not a built-in presentation (known: {})",
            treetwist::selfsim::BUILTIN_NAMES.join(", ")
        ))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a word to a finite-depth portrait
    Eval {
        /// Built-in name (grigorchuk, gupta-sidki) or presentation file
        #[arg(value_parser = parse_source)]
        presentation: Source,
        /// Word such as `a*b^-1*(a*d)^2`; the empty word is the identity
        word: String,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
        depth: u64,
    },
    /// Orders of G/St_d and twisted class counts for d = 1..dmax
    Quotient {
        /// Built-in name (grigorchuk, gupta-sidki) or presentation file
        #[arg(value_parser = parse_source)]
        presentation: Source,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        dmax: u64,
        /// identity, conj:W, images:s->w;..., tauN or family:N
        #[arg(long, default_value = "identity")]
        spec: String,
    },
    /// Build a lower-bound certificate
    Certify {
        /// Built-in name (grigorchuk, gupta-sidki) or presentation file
        #[arg(value_parser = parse_source)]
        presentation: Source,
        /// binary, strongly-saturated or locally-normal
        #[arg(long, value_parser = parse_kind)]
        kind: CertificateKind,
        /// Number of entries to certify
        #[arg(long, short = 'k', visible_alias = "n")]
        k: usize,
        /// identity, conj:W, images:s->w;..., tauN or family:N
        #[arg(long, default_value = "identity")]
        spec: String,
        /// Write the certificate here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify a certificate; exits 0 only when it is sound
    Verify {
        certificate: PathBuf,
        /// Quotient depth for the cross-checks; defaults to the deepest level
        /// the certificate uses
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        depth: Option<u64>,
        /// Presentation file, when the certificate is not for a built-in
        #[arg(long, value_parser = parse_source)]
        presentation: Option<Source>,
    },
    /// Randomized consistency checks of the word evaluation
    Check {
        /// Built-in name (grigorchuk, gupta-sidki) or presentation file
        #[arg(value_parser = parse_source)]
        presentation: Source,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
        depth: u64,
        /// Longest random word
        #[arg(long, default_value_t = 10)]
        max_len: usize,
        /// Also check that this automorphism is multiplicative
        #[arg(long)]
        spec: Option<String>,
    },
}

fn parse_kind(s: &str) -> Result<CertificateKind, String> {
    s.parse().map_err(|e: treetwist::Error| e.to_string())
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let g = &cli.global;
    let (report, code) = match cli.command {
        Command::Eval {
            presentation,
            word,
            depth,
        } => (commands::eval(&presentation.load()?, &word, depth as usize)?, EXIT_OK),
        Command::Quotient {
            presentation,
            dmax,
            spec,
        } => {
            let (report, capped) = commands::quotient(g, &presentation.load()?, dmax as usize, &spec)?;
            (report, if capped { EXIT_RESOURCE } else { EXIT_OK })
        }
        Command::Certify {
            presentation,
            kind,
            k,
            spec,
            out,
        } => {
            let p = presentation.load()?;
            let cert = commands::certify(g, &p, kind, k, &spec)?;
            let json = cert.to_json()?;
            match out {
                Some(path) => {
                    std::fs::write(&path, format!("{json}\n")).with_context(|| format!("writing {}", path.display()))?;
                    (commands::certificate_summary(&cert, Some(&path)), EXIT_OK)
                }
                None if g.format == Format::Json => {
                    println!("{json}");
                    return Ok(EXIT_OK);
                }
                None => (commands::certificate_summary(&cert, None), EXIT_OK),
            }
        }
        Command::Verify {
            certificate,
            depth,
            presentation,
        } => {
            let text = std::fs::read_to_string(&certificate)
                .with_context(|| format!("reading {}", certificate.display()))?;
            let cert = treetwist::Certificate::from_json(&text)?;
            let p = match presentation {
                Some(s) => s.load()?,
                None => treetwist::selfsim::builtin(&cert.presentation).with_context(|| {
                    format!("certificate is for `{}`; pass --presentation", cert.presentation)
                })?,
            };
            let (report, verdict) = commands::verify(g, &p, &cert, depth.map(|d| d as usize))?;
            (report, if verdict.is_sound() { EXIT_OK } else { EXIT_NOT_SOUND })
        }
        Command::Check {
            presentation,
            samples,
            depth,
            max_len,
            spec,
        } => {
            if max_len == 0 {
                bail!(treetwist::Error::Precondition("--max-len must be positive".into()));
            }
            let (report, failures) =
                commands::check(g, &presentation.load()?, samples, depth as usize, max_len, spec.as_deref())?;
            (report, if failures == 0 { EXIT_OK } else { EXIT_NOT_SOUND })
        }
    };
    print!("{}", report.render(g.format));
    Ok(code)
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<treetwist::Error>().map(|e| e.class()) {
        Some(ErrorClass::Resource) => EXIT_RESOURCE,
        _ => EXIT_PRECONDITION,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
