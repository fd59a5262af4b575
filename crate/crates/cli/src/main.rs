//! `qap`: instances, formulations, circuits, simulation, search and metrics
//! from the command line.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use qapgas::analysis::{ckr_histogram, cnot_totals, emit_metrics, metric_penalties, qubit_counts};
use qapgas::circuit::{build_ay, compute_m, count_gates, Circuit, CostModel, PhaseStyle, StateInit};
use qapgas::gas::{median, run_many, BackendKind, GasConfig, LDraw, Termination};
use qapgas::poly::mask_to_bits;
use qapgas::qap::{generic_instance, parse_qaplib_named, BRUTE_FORCE_MAX_N};
use qapgas::sim::{split_readout, Sampler, StateVector};
use qapgas::{
    brute_force_optimum, encode, encode_hubo_hw_with, random_instance, Formulation, FormulationKind, HuboRowPenalty,
    MultilinearPolynomial, Penalties, QapInstance,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "qap", version, about = "QAP formulations for Grover adaptive search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    R,
    Rz,
}

#[derive(Clone, Copy, ValueEnum)]
enum Backend {
    Emulated,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum Draw {
    Inclusive,
    Exclusive,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded random instance in QAPLIB format.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print an instance and, when small enough, its optimum.
    Show { file: PathBuf },
    /// Encode an instance as a pseudo-Boolean formulation (JSON).
    Formulate {
        #[arg(long, value_parser = parse_kind)]
        kind: FormulationKind,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Row penalty weight (ignored for qubo-d).
        #[arg(long)]
        row_penalty: Option<f64>,
        /// Column penalty weight.
        #[arg(long)]
        col_penalty: Option<f64>,
        /// HUBO only: penalize the unused codes instead of the one-hot row sum.
        #[arg(long)]
        discarded_codes: bool,
    },
    /// Gate counts of A_y built on a dense instance, next to the closed forms.
    Gates {
        #[arg(long, value_parser = parse_kind)]
        kind: FormulationKind,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Model::R)]
        model: Model,
        /// Output CSV (stdout when absent).
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also write the circuit in text format.
        #[arg(long)]
        text: Option<PathBuf>,
        /// Use N^2 for every penalty when sizing the value register.
        #[arg(long = "fig4-compat")]
        uniform_penalties: bool,
    },
    /// Run A_y on the statevector simulator and print the readout table as CSV.
    Simulate {
        /// Formulation JSON.
        #[arg(long, conflicts_with_all = ["circuit", "demo"])]
        form: Option<PathBuf>,
        /// Circuit in text format.
        #[arg(long, conflicts_with = "demo")]
        circuit: Option<PathBuf>,
        /// Built-in example E(x) = 1 + 2x0 - 3x0x1x2 with y = 0 and m = 3.
        #[arg(long)]
        demo: bool,
        #[arg(long, default_value_t = 0.0)]
        y: f64,
        /// Value-register width (derived from the objective range when absent).
        #[arg(long)]
        m: Option<usize>,
        /// Multiply coefficients by this factor (must give integers) before encoding.
        #[arg(long)]
        scale: Option<f64>,
        #[arg(long, value_enum, default_value_t = Model::R)]
        model: Model,
        /// Sample this many shots instead of printing exact probabilities.
        #[arg(long)]
        shots: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Drop outcomes below this probability.
        #[arg(long, default_value_t = 1e-12)]
        min_prob: f64,
    },
    /// Repeated Grover adaptive search runs; one CSV row per run.
    Gas {
        #[arg(long, value_parser = parse_kind)]
        kind: FormulationKind,
        /// QAPLIB instance.
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 100)]
        runs: usize,
        #[arg(long, value_enum, default_value_t = Backend::Emulated)]
        backend: Backend,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// `optimum` (brute force), `stall:<count>` or `cap`.
        #[arg(long, default_value = "optimum")]
        termination: String,
        #[arg(long, default_value_t = 100_000)]
        max_iterations: usize,
        #[arg(long, default_value_t = 8.0 / 7.0)]
        lambda_growth: f64,
        #[arg(long, value_enum, default_value_t = Draw::Inclusive)]
        l_draw: Draw,
        /// Integer scale for the exact backend.
        #[arg(long, default_value_t = 100.0)]
        scale: f64,
    },
    /// Closed-form metrics over a range of N as CSV.
    Metrics {
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 16)]
        n_max: usize,
        /// `all` or a comma-separated list of qubo-h, qubo-d, hubo-hw.
        #[arg(long, default_value = "all")]
        kinds: String,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Use N^2 for the HUBO row penalty as well.
        #[arg(long = "fig4-compat")]
        uniform_penalties: bool,
    },
}

fn parse_kind(s: &str) -> std::result::Result<FormulationKind, String> {
    s.parse().map_err(|e: qapgas::Error| e.to_string())
}

fn parse_kinds(s: &str) -> Result<Vec<FormulationKind>> {
    if s == "all" {
        return Ok(FormulationKind::ALL.to_vec());
    }
    s.split(',').map(|k| parse_kind(k.trim()).map_err(anyhow::Error::msg)).collect()
}

fn read_instance(path: &Path) -> Result<QapInstance> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("qaplib");
    Ok(parse_qaplib_named(&text, name)?)
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn demo_poly() -> MultilinearPolynomial {
    MultilinearPolynomial::from_terms(3, vec![(vec![], 1.0), (vec![0], 2.0), (vec![0, 1, 2], -3.0)])
        .expect("valid demo polynomial")
}

fn style(model: Model) -> PhaseStyle {
    match model {
        Model::R => PhaseStyle::R,
        Model::Rz => PhaseStyle::Rz,
    }
}

fn cmd_show(file: &Path) -> Result<()> {
    let inst = read_instance(file)?;
    let n = inst.size();
    println!("name {}\nn {n}", inst.name());
    for (label, get) in [("flow", 0), ("dist", 1)] {
        println!("{label}");
        for i in 0..n {
            let row: Vec<String> =
                (0..n).map(|j| format!("{:.4}", if get == 0 { inst.flow(i, j) } else { inst.dist(i, j) })).collect();
            println!("  {}", row.join(" "));
        }
    }
    if n <= BRUTE_FORCE_MAX_N {
        let (perm, opt) = brute_force_optimum(&inst)?;
        println!("optimum {opt}\npermutation {perm}");
    }
    Ok(())
}

fn cmd_formulate(
    kind: FormulationKind,
    input: &Path,
    out: &Path,
    row: Option<f64>,
    col: Option<f64>,
    discarded: bool,
) -> Result<()> {
    let inst = read_instance(input)?;
    let n = inst.size();
    let mut p = Penalties::default_for(kind, n);
    if let Some(c) = col {
        p.col = c;
    }
    if row.is_some() && kind != FormulationKind::QuboDicke {
        p.row = row;
    }
    let form = if discarded {
        if kind != FormulationKind::HuboHw {
            bail!("--discarded-codes applies to hubo-hw only");
        }
        encode_hubo_hw_with(&inst, p.row.unwrap_or(1.0), p.col, HuboRowPenalty::DiscardedCodes)?
    } else {
        encode(&inst, kind, p)?
    };
    std::fs::write(out, form.to_json()).with_context(|| format!("writing {}", out.display()))?;
    eprintln!("{kind}: {} variables, {} terms -> {}", form.num_vars(), form.num_terms(), out.display());
    Ok(())
}

fn cmd_gates(
    kind: FormulationKind,
    n: usize,
    model: Model,
    csv: Option<&Path>,
    text: Option<&Path>,
    uniform: bool,
) -> Result<()> {
    let p = metric_penalties(n, kind, uniform);
    let q = qubit_counts(n, kind, p)?;
    let form = encode(&generic_instance(n, 0)?, kind, p)?;
    let c = build_ay(form.poly(), q.m, 0.0, StateInit::for_formulation(&form), style(model))?;
    let cost = match model {
        Model::R => CostModel::R,
        Model::Rz => CostModel::Rz,
    };
    let got = count_gates(&c, cost);
    let hist = ckr_histogram(n, kind, q.m)?;
    let totals = cnot_totals(n, kind, cost, q.m)?;
    let mut s = String::from("quantity,built,closed_form\n");
    let _ = writeln!(s, "qubits,{},{}", got.num_qubits, q.total());
    let _ = writeln!(s, "value_bits,{},{}", got.value_bits, q.m);
    let ks: std::collections::BTreeSet<usize> = hist.keys().chain(got.controlled_rotations.keys()).copied().collect();
    for k in ks {
        let _ = writeln!(
            s,
            "c{k}r,{},{}",
            got.controlled_rotations.get(&k).copied().unwrap_or(0),
            hist.get(&k).copied().unwrap_or(0)
        );
    }
    let _ = writeln!(s, "phase_cnots,{},{}", got.cnots, totals.total);
    if let Some(v) = totals.closed_form {
        let _ = writeln!(s, "phase_cnots_closed_form,{},{v}", got.cnots);
    }
    if let Some(v) = totals.upper_bound {
        let _ = writeln!(s, "phase_cnots_upper_bound,{},{v}", got.cnots);
    }
    let _ = writeln!(s, "iqft_cnots,{},", got.iqft_cnots);
    let _ = writeln!(s, "prep_cnots,{},", got.prep_cnots);
    let _ = writeln!(s, "hadamards,{},", got.hadamards);
    let _ = writeln!(s, "gates,{},", c.len());
    if let Some(path) = text {
        std::fs::write(path, c.to_text()).with_context(|| format!("writing {}", path.display()))?;
    }
    write_or_print(csv, &s)
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    form: Option<&Path>,
    circuit: Option<&Path>,
    demo: bool,
    y: f64,
    m: Option<usize>,
    scale: Option<f64>,
    model: Model,
    shots: Option<usize>,
    seed: u64,
    min_prob: f64,
) -> Result<()> {
    let (c, poly): (Circuit, Option<MultilinearPolynomial>) = if let Some(path) = circuit {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        (Circuit::from_text(&text)?, None)
    } else if let Some(path) = form {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut f = Formulation::from_json(&text)?;
        if let Some(s) = scale {
            f = f.integer_scaled(s)?;
        }
        let m = match m {
            Some(m) => m,
            None => compute_m(f.poly(), f.feasible_space(), y)?,
        };
        let c = build_ay(f.poly(), m, y, StateInit::for_formulation(&f), style(model))?;
        (c, Some(f.poly().clone()))
    } else if demo {
        let p = demo_poly();
        (build_ay(&p, m.unwrap_or(3), y, StateInit::Hadamard, style(model))?, Some(p))
    } else {
        bail!("one of --form, --circuit or --demo is required");
    };
    let (n, mb) = (c.num_vars(), c.value_bits());
    let mut sv = StateVector::zero(c.num_qubits())?;
    sv.apply_circuit(&c)?;
    let energy = |x: u64| poly.as_ref().and_then(|p| p.evaluate(&mask_to_bits(x, n)).ok());
    let bits = |x: u64| (0..n).map(|i| if x >> i & 1 == 1 { '1' } else { '0' }).collect::<String>();
    let mut out = String::new();
    let row = |out: &mut String, idx: u64, last: String| {
        let (x, v) = split_readout(idx, n, mb);
        let e = energy(x).map(|e| format!("{}", e - y)).unwrap_or_default();
        let _ = writeln!(out, "{x},{},{v},{e},{last}", bits(x));
    };
    match shots {
        Some(k) => {
            out.push_str("x,bits,readout,energy_minus_y,count\n");
            let sampler = Sampler::new(&sv);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut counts = std::collections::BTreeMap::new();
            for _ in 0..k {
                *counts.entry(sampler.sample(&mut rng)).or_insert(0usize) += 1;
            }
            for (idx, cnt) in counts {
                row(&mut out, idx, cnt.to_string());
            }
        }
        None => {
            out.push_str("x,bits,readout,energy_minus_y,probability\n");
            for (idx, p) in sv.probabilities().iter().enumerate() {
                if *p >= min_prob {
                    row(&mut out, idx as u64, format!("{p:.12}"));
                }
            }
        }
    }
    print!("{out}");
    Ok(())
}

fn parse_termination(s: &str, inst: &QapInstance, scale: f64) -> Result<Termination> {
    Ok(match s {
        "optimum" => {
            if inst.size() > BRUTE_FORCE_MAX_N {
                bail!("N = {} is too large for a brute-force optimum; use stall:<count> or cap", inst.size());
            }
            Termination::KnownOptimum(brute_force_optimum(inst)?.1 * scale)
        }
        "cap" => Termination::IterationCap,
        other => match other.strip_prefix("stall:").map(str::parse::<usize>) {
            Some(Ok(c)) => Termination::ThresholdStall(c),
            _ => bail!("unknown termination {other:?}; expected optimum, stall:<count> or cap"),
        },
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_gas(
    kind: FormulationKind,
    input: &Path,
    runs: usize,
    backend: Backend,
    seed: u64,
    csv: Option<&Path>,
    termination: &str,
    max_iterations: usize,
    lambda_growth: f64,
    l_draw: Draw,
    scale: f64,
) -> Result<()> {
    let inst = read_instance(input)?;
    let mut form = encode(&inst, kind, Penalties::default_for(kind, inst.size()))?;
    let factor = match backend {
        Backend::Emulated => 1.0,
        Backend::Exact => {
            form = form.integer_scaled(scale)?;
            scale
        }
    };
    let cfg = GasConfig {
        lambda_growth,
        max_iterations,
        termination: parse_termination(termination, &inst, factor)?,
        backend: match backend {
            Backend::Emulated => BackendKind::Emulated,
            Backend::Exact => BackendKind::Exact,
        },
        l_draw: match l_draw {
            Draw::Inclusive => LDraw::Inclusive,
            Draw::Exclusive => LDraw::Exclusive,
        },
        seed,
    };
    let results = run_many(&form, &cfg, runs)?;
    let mut s = String::from("run_id,queries,iterations,found_value,grover_applications\n");
    for (r, _) in &results {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            r.run_id,
            r.queries,
            r.iterations,
            r.found_value / factor,
            r.grover_applications
        );
    }
    write_or_print(csv, &s)?;
    let mut q: Vec<u64> = results.iter().map(|(r, _)| r.queries).collect();
    q.sort_unstable();
    let found = results.iter().filter(|(_, t)| t.found_optimum == Some(true)).count();
    eprintln!("{kind}: {runs} runs, median queries {}, optimum reached {found}/{runs}", median(&q));
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Gen { n, seed, out } => {
            let inst = random_instance(n, seed)?;
            std::fs::write(&out, inst.to_qaplib()).with_context(|| format!("writing {}", out.display()))?;
        }
        Command::Show { file } => cmd_show(&file)?,
        Command::Formulate { kind, input, out, row_penalty, col_penalty, discarded_codes } => {
            cmd_formulate(kind, &input, &out, row_penalty, col_penalty, discarded_codes)?
        }
        Command::Gates { kind, n, model, csv, text, uniform_penalties } => {
            cmd_gates(kind, n, model, csv.as_deref(), text.as_deref(), uniform_penalties)?
        }
        Command::Simulate { form, circuit, demo, y, m, scale, model, shots, seed, min_prob } => cmd_simulate(
            form.as_deref(),
            circuit.as_deref(),
            demo,
            y,
            m,
            scale,
            model,
            shots,
            seed,
            min_prob,
        )?,
        Command::Gas {
            kind,
            input,
            runs,
            backend,
            seed,
            csv,
            termination,
            max_iterations,
            lambda_growth,
            l_draw,
            scale,
        } => cmd_gas(
            kind,
            &input,
            runs,
            backend,
            seed,
            csv.as_deref(),
            &termination,
            max_iterations,
            lambda_growth,
            l_draw,
            scale,
        )?,
        Command::Metrics { n_min, n_max, kinds, csv, uniform_penalties } => {
            let kinds = parse_kinds(&kinds)?;
            write_or_print(csv.as_deref(), &emit_metrics(n_min, n_max, &kinds, uniform_penalties)?)?
        }
    }
    Ok(())
}
