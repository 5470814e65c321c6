use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use qaclab_core::fourier::{extract_fc, wht};
use qaclab_core::majority::{majority_circuit_correlation, weak_copy_prob, MajorityReport};
use qaclab_core::states::{build_state, felinity, NamedState};
use qaclab_core::verify::{lemma, verify, VerifyConfig, LEMMAS};
use qaclab_core::GadgetReport;
use rayon::prelude::*;
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::formats;
use crate::json::fmt_f64;

#[derive(Debug, Parser)]
#[command(
    name = "qaclab",
    version,
    about = "Reflection-circuit gadgets, Fourier spectra and felinity"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fourier spectrum of a circuit file (.json) or a truth table, as CSV.
    Fourier {
        file: PathBuf,
        /// Also print W>=k to stderr.
        #[arg(long)]
        level: Option<usize>,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Felinity of a state file or a named state.
    Felinity {
        #[arg(long, conflicts_with = "named", required_unless_present = "named")]
        state: Option<PathBuf>,
        /// dicke:n,k | w:n | cat:n | rotw:n,beta | plus:n | oddmix:n
        #[arg(long)]
        named: Option<String>,
    },
    /// Run one gadget verification and emit its report.
    Verify(VerifyArgs),
    /// Correlation of the parallel threshold grid with MAJORITY.
    Majority {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2.0)]
        a: f64,
        #[arg(long, default_value_t = 8.0)]
        d: f64,
        /// Directory for the per-weight CSV and the JSON summary.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Output law of the weak-copy test, one CSV row per input weight.
    WeakCopy {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: f64,
        /// Cross-check every row against circuit simulation.
        #[arg(long)]
        simulate: bool,
    },
    /// Run several verifications and write a report bundle.
    Report {
        /// Lemma ids to run (see `verify --list`).
        ids: Vec<String>,
        /// Run every registered lemma with its default size.
        #[arg(long)]
        all: bool,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(required_unless_present = "list")]
    pub lemma: Option<String>,
    /// List every lemma id with a one-line description.
    #[arg(long)]
    pub list: bool,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Corpus size for randomized checks.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub d: Option<f64>,
    /// Write the report JSON into this directory as well as to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Output streams, so tests can capture them.
pub struct Io<'a> {
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

fn emit(w: &mut dyn Write, text: &str) -> CliResult<()> {
    w.write_all(text.as_bytes())
        .map_err(|e| CliError::Io(format!("writing output: {e}")))
}

pub fn execute(cli: Cli, io: &mut Io) -> CliResult<()> {
    match cli.command {
        Command::Fourier { file, level, out } => fourier(&file, level, out.as_deref(), io),
        Command::Felinity { state, named } => felinity_cmd(state.as_deref(), named.as_deref(), io),
        Command::Verify(args) => verify_cmd(&args, io),
        Command::Majority { n, a, d, out } => majority_cmd(n, a, d, out.as_deref(), io),
        Command::WeakCopy { n, t, simulate } => weak_copy_cmd(n, t, simulate, io),
        Command::Report {
            ids,
            all,
            out,
            seed,
        } => report_cmd(&ids, all, &out, seed, io),
    }
}

fn fourier(file: &Path, level: Option<usize>, out: Option<&Path>, io: &mut Io) -> CliResult<()> {
    let text = formats::read_text(file)?;
    let f = if file.extension().is_some_and(|e| e == "json") {
        extract_fc(&formats::circuit_from_json(&text)?)?
    } else {
        formats::truth_table_from_text(&text)?
    };
    let spec = wht(&f);
    let csv = formats::spectrum_to_csv(&spec);
    match out {
        Some(p) => formats::write_atomic(p, &csv)?,
        None => emit(io.out, &csv)?,
    }
    if let Some(k) = level {
        if k > f.n() {
            return Err(CliError::Usage(format!(
                "level {k} exceeds arity {}",
                f.n()
            )));
        }
        emit(
            io.err,
            &format!("W>={k} {}\n", fmt_f64(spec.weight_at_least(k))),
        )?;
    }
    Ok(())
}

/// Parses `dicke:n,k`, `w:n`, `cat:n`, `rotw:n,beta`, `plus:n` and
/// `oddmix:n`.
pub fn parse_named(spec: &str) -> CliResult<NamedState> {
    let usage = || CliError::Usage(format!("unrecognised state {spec:?}"));
    let (kind, args) = spec.split_once(':').ok_or_else(usage)?;
    let parts: Vec<&str> = args.split(',').map(str::trim).collect();
    let int = |s: &str| s.parse::<usize>().map_err(|_| usage());
    let real = |s: &str| s.parse::<f64>().map_err(|_| usage());
    Ok(match (kind, parts.as_slice()) {
        ("dicke", [n, k]) => NamedState::Dicke {
            n: int(n)?,
            k: int(k)?,
        },
        ("w", [n]) => NamedState::W { n: int(n)? },
        ("cat", [n]) => NamedState::Cat { n: int(n)? },
        ("rotw", [n, b]) => NamedState::RotatedW {
            n: int(n)?,
            beta: real(b)?,
        },
        ("plus", [n]) => NamedState::EpsProduct {
            eps: 0.5,
            n: int(n)?,
        },
        ("oddmix", [n]) => NamedState::OddParityMixture { n: int(n)? },
        _ => return Err(usage()),
    })
}

fn felinity_cmd(state: Option<&Path>, named: Option<&str>, io: &mut Io) -> CliResult<()> {
    let built = match (state, named) {
        (Some(p), None) => formats::state_from_json(&formats::read_text(p)?)?,
        (None, Some(s)) => build_state(&parse_named(s)?)?,
        _ => {
            return Err(CliError::Usage(
                "give exactly one of --state and --named".into(),
            ))
        }
    };
    let fel = felinity(&built.density())?;
    emit(io.out, &format!("{fel}\n"))
}

fn verify_config(args: &VerifyArgs, id: &str) -> CliResult<VerifyConfig> {
    let l = lemma(id)
        .ok_or_else(|| CliError::Usage(format!("unknown lemma id {id:?}; see verify --list")))?;
    let mut cfg = VerifyConfig::for_lemma(l, args.seed);
    if let Some(n) = args.n {
        cfg.n = n;
    }
    if args.k.is_some() {
        cfg.k = args.k;
    }
    if let Some(s) = args.samples {
        cfg.samples = s;
    }
    if let Some(a) = args.a {
        cfg.a = a;
    }
    if let Some(d) = args.d {
        cfg.d = d;
    }
    Ok(cfg)
}

fn verify_cmd(args: &VerifyArgs, io: &mut Io) -> CliResult<()> {
    if args.list {
        for l in LEMMAS {
            emit(io.out, &format!("{:<14} {}\n", l.id, l.description))?;
        }
        return Ok(());
    }
    let id = args
        .lemma
        .as_deref()
        .ok_or_else(|| CliError::Usage("missing lemma id".into()))?;
    let cfg = verify_config(args, id)?;
    let report = verify(id, &cfg)?;
    let text = formats::report_to_json(&report);
    if let Some(dir) = &args.out {
        formats::write_atomic(&dir.join(format!("{id}.json")), &text)?;
    }
    emit(io.out, &text)?;
    finish(&report)
}

fn finish(report: &GadgetReport) -> CliResult<()> {
    if report.passed() {
        Ok(())
    } else {
        let names: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
        Err(CliError::Assertion(format!(
            "{}: failed {}",
            report.lemma,
            names.join(", ")
        )))
    }
}

fn majority_csv(rep: &MajorityReport) -> String {
    let mut s = String::from("n,design,weight,probability,mass,band\n");
    for r in &rep.rows {
        let agree = (1.0 + r.contribution) / 2.0;
        s.push_str(&format!(
            "{},a={}:d={},{},{},{},{}\n",
            rep.n,
            rep.a,
            rep.d,
            r.weight,
            fmt_f64(agree),
            fmt_f64(r.mass),
            r.band.name()
        ));
    }
    s
}

fn majority_summary(rep: &MajorityReport) -> serde_json::Value {
    json!({
        "n": rep.n,
        "a": rep.a,
        "d": rep.d,
        "eta": rep.eta,
        "central_half_width": rep.gamma,
        "reach": rep.reach,
        "upper_thresholds": rep.plus_thresholds.len(),
        "lower_thresholds": rep.minus_thresholds.len(),
        "correlation": rep.correlation,
        "loss_test": rep.loss_test,
        "loss_central": rep.loss_central,
        "loss_tail": rep.loss_tail,
        "test_bound": rep.test_bound,
        "central_mass": rep.central_mass,
        "tail_bound": rep.tail_bound,
        "degenerate": rep.degenerate,
    })
}

fn majority_cmd(n: usize, a: f64, d: f64, out: Option<&Path>, io: &mut Io) -> CliResult<()> {
    let rep = majority_circuit_correlation(n, a, d)?;
    let summary = crate::json::to_string(&majority_summary(&rep));
    if let Some(dir) = out {
        formats::write_atomic(&dir.join("majority.csv"), &majority_csv(&rep))?;
        formats::write_atomic(&dir.join("majority.json"), &summary)?;
    }
    emit(io.out, &summary)
}

fn weak_copy_csv(n: usize, t: f64) -> CliResult<String> {
    let mut s = String::from("n,t,weight,probability\n");
    for l in 0..=n {
        s.push_str(&format!(
            "{n},{t},{l},{}\n",
            fmt_f64(weak_copy_prob(n, t, l)?)
        ));
    }
    Ok(s)
}

fn weak_copy_cmd(n: usize, t: f64, simulate: bool, io: &mut Io) -> CliResult<()> {
    let csv = weak_copy_csv(n, t)?;
    emit(io.out, &csv)?;
    if simulate {
        use qaclab_core::majority::{weak_copy_circuit, weak_copy_input};
        let c = weak_copy_circuit(n, t)?;
        for l in 0..=n {
            let p = qaclab_core::sim::run_from(&c, &weak_copy_input(n, l)?)?.prob_bit(n, true)?;
            let want = weak_copy_prob(n, t, l)?;
            if (p - want).abs() > 1e-9 {
                return Err(CliError::Assertion(format!(
                    "weight {l}: simulated {p}, closed form {want}"
                )));
            }
        }
        emit(io.err, "simulation agrees with the closed form\n")?;
    }
    Ok(())
}

fn report_cmd(ids: &[String], all: bool, out: &Path, seed: u64, io: &mut Io) -> CliResult<()> {
    let ids: Vec<String> = if all {
        LEMMAS.iter().map(|l| l.id.to_string()).collect()
    } else {
        ids.to_vec()
    };
    let configs = ids
        .iter()
        .map(|id| {
            let l = lemma(id).ok_or_else(|| CliError::Usage(format!("unknown lemma id {id:?}")))?;
            Ok((id.clone(), VerifyConfig::for_lemma(l, seed)))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let results: Vec<(String, Result<GadgetReport, qaclab_core::Error>)> = configs
        .into_par_iter()
        .map(|(id, cfg)| {
            let r = verify(&id, &cfg);
            (id, r)
        })
        .collect();

    let mut entries = Vec::new();
    let mut passed = 0usize;
    for (id, res) in &results {
        let (ok, error) = match res {
            Ok(rep) => {
                formats::write_atomic(
                    &out.join(format!("{id}.json")),
                    &formats::report_to_json(rep),
                )?;
                (rep.passed(), None)
            }
            Err(e) => (false, Some(e.to_string())),
        };
        passed += usize::from(ok);
        emit(
            io.err,
            &format!("{id:<14} {}\n", if ok { "pass" } else { "FAIL" }),
        )?;
        entries.push(json!({"lemma_id": id, "passed": ok, "seed": seed, "error": error}));
    }
    if all {
        let rep = majority_circuit_correlation(255, 2.0, 8.0)?;
        formats::write_atomic(&out.join("majority.csv"), &majority_csv(&rep))?;
        let mut wc = String::from("n,t,weight,probability\n");
        for n in [4usize, 8, 16] {
            for t in 0..=n {
                wc.push_str(
                    weak_copy_csv(n, t as f64)?
                        .lines()
                        .skip(1)
                        .fold(String::new(), |acc, l| acc + l + "\n")
                        .as_str(),
                );
            }
        }
        formats::write_atomic(&out.join("weak_copy.csv"), &wc)?;
    }
    let all_passed = passed == entries.len();
    let summary = json!({
        "tool": "qaclab",
        "version": env!("CARGO_PKG_VERSION"),
        "seed": seed,
        "total": entries.len(),
        "passed_count": passed,
        "passed": all_passed,
        "entries": entries,
    });
    let text = crate::json::to_string(&summary);
    formats::write_atomic(&out.join("summary.json"), &text)?;
    emit(io.out, &text)?;
    if all_passed {
        Ok(())
    } else {
        Err(CliError::Assertion(format!(
            "{} of {} verifications failed",
            entries.len() - passed,
            entries.len()
        )))
    }
}
