use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qosc::checks::{self, ModuleKind};
use qosc::expr::parse_scalar;
use qosc::report::Report;
use qosc::suite::{self, Scale};
use qosc_core::decomp::{hw_vectors, hw_weight, index_order, LabelSpace, Partition, Space};
use qosc_core::fock::{format_label, FactorKind, FactorSpec, ModuleSpec};
use qosc_core::fusion::{FusionParams, Labels};
use qosc_core::phi::{Choice, Side};
use qosc_core::rmatrix::{level_data, tensor_at, Level, Sign};
use qosc_core::{Epsilon, Param, Scalar, Weight};
use thiserror::Error;

#[derive(Debug, Error)]
enum UsageError {
    #[error("{0}")]
    Bad(String),
}

fn bad<T>(msg: impl Into<String>) -> Result<T, UsageError> {
    Err(UsageError::Bad(msg.into()))
}

#[derive(Parser)]
#[command(name = "qosc", version, about = "Exact checks for q-oscillator representations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Include wall-clock timings (makes reports run-dependent).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum, Debug)]
enum Module {
    #[value(name = "W")]
    W,
    #[value(name = "W2")]
    W2,
}

#[derive(Clone, Copy, ValueEnum, Debug)]
enum Flavor {
    C,
    D,
}

#[derive(Clone, Copy, ValueEnum, Debug, PartialEq)]
enum SideArg {
    Lower,
    Upper,
    Both,
}

#[derive(Clone, Copy, ValueEnum, Debug, PartialEq)]
enum ChoiceArg {
    Plus,
    Minus,
    Both,
}

#[derive(Clone, Copy, ValueEnum, Debug)]
enum LevelArg {
    Full,
    Lower,
    Upper,
}

#[derive(Args)]
struct EpsArgs {
    /// Parity sequence, e.g. 1,0,1,0,1.
    #[arg(long)]
    epsilon: String,
    #[arg(long, value_enum, default_value = "W")]
    module: Module,
    #[arg(long, default_value_t = 4)]
    cutoff: u32,
    /// Spectral parameter of the module.
    #[arg(long, default_value = "w^3")]
    x: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check every defining relation on a window.
    VerifyRelations {
        #[command(flatten)]
        eps: EpsArgs,
        /// Flip the sign of e0 (negative control).
        #[arg(long)]
        perturb: bool,
    },
    /// Check the target relations for the images of the truncation maps.
    VerifyPhi {
        #[command(flatten)]
        eps: EpsArgs,
        #[arg(long, value_enum, default_value = "both")]
        side: SideArg,
        #[arg(long, value_enum, default_value = "both")]
        choice: ChoiceArg,
    },
    /// Truncation functor checks; with --fundamentals, truncated fundamental dimensions.
    Truncate {
        #[arg(long)]
        epsilon: String,
        #[arg(long, value_enum, default_value = "both")]
        side: SideArg,
        #[arg(long, value_enum, default_value = "both")]
        choice: ChoiceArg,
        #[arg(long, default_value_t = 1)]
        factors: usize,
        #[arg(long, default_value_t = 4)]
        cutoff: u32,
        #[arg(long)]
        fundamentals: bool,
    },
    /// Highest weight multiplicities of a two-factor product.
    Decompose {
        #[arg(long, value_enum)]
        flavor: Flavor,
        #[arg(long, default_value = "+,+")]
        sigma: String,
        #[arg(long, value_enum, default_value = "full")]
        level: LevelArg,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 6)]
        cutoff: u32,
        /// Print the multiplicity table as CSV instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Highest weight vectors of a weight block of W^s1 (x) W^s2.
    Hwv {
        #[arg(long, default_value = "+,+")]
        sigma: String,
        #[arg(long, value_enum, default_value = "full")]
        level: LevelArg,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 6)]
        cutoff: u32,
        /// A partition, e.g. (2) or (1,1).
        #[arg(long, conflicts_with = "weight")]
        partition: Option<String>,
        /// A weight as lam:d1,...,dn.
        #[arg(long)]
        weight: Option<String>,
    },
    /// Solve for the R matrix and compare with the closed forms.
    Rmatrix {
        #[arg(long, value_enum)]
        flavor: Flavor,
        #[arg(long, default_value = "+,+")]
        sigma: String,
        /// Fundamental labels l1,l2 for flavor d.
        #[arg(long, default_value = "1,1")]
        l: String,
        #[arg(long, value_enum, default_value = "full")]
        level: LevelArg,
        #[arg(long, value_enum, default_value = "plus")]
        choice: ChoiceArg,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 6)]
        cutoff: u32,
        /// Also check R commutes with all generators on blocks up to this
        /// many degrees above the lowest one.
        #[arg(long)]
        intertwining: Option<i32>,
    },
    /// Fused image of a specialized R matrix.
    Fuse {
        #[arg(long, value_enum)]
        flavor: Flavor,
        #[arg(long, default_value = "+,+")]
        sigma: String,
        #[arg(long, default_value = "1,1")]
        l: String,
        /// Spectral parameters, e.g. q^-6,1.
        #[arg(long)]
        c: String,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 4)]
        cutoff: u32,
        #[arg(long)]
        check_truncation: bool,
    },
    /// Build and verify a fundamental module W_l.
    Fundamental {
        #[arg(long)]
        l: u32,
        #[arg(long, default_value_t = 0)]
        k: u32,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 6)]
        cutoff: u32,
        /// all, closure, iso, truncation or hw.
        #[arg(long, default_value = "all")]
        verify: String,
    },
    /// Raising/lowering identities (B) or lowering coefficients (C) for u_rs.
    AppendixCheck {
        /// B: the four identities; C: the coefficients of F u_rs.
        #[arg(long)]
        which: String,
        /// Semicolon-separated l1,l2,r,s tuples.
        #[arg(long, default_value = "1,1,1,0;1,2,0,1;2,2,1,1")]
        ranges: String,
        #[arg(long, value_enum, default_value = "both")]
        choice: ChoiceArg,
        #[arg(long, default_value_t = 2)]
        m: usize,
    },
    /// Run the acceptance battery.
    Suite {
        /// Small windows.
        #[arg(long)]
        quick: bool,
        /// Comma-separated criterion numbers.
        #[arg(long)]
        only: Option<String>,
    },
}

fn parse_eps(s: &str) -> Result<Epsilon, UsageError> {
    let bits: Result<Vec<u8>, _> = s.split(',').map(|b| b.trim().parse::<u8>()).collect();
    let bits = bits.map_err(|_| UsageError::Bad(format!("bad epsilon {s:?}")))?;
    Epsilon::new(bits).map_err(|e| UsageError::Bad(e.to_string()))
}

fn parse_sigma(s: &str) -> Result<(Sign, Sign), UsageError> {
    let v: Vec<&str> = s.split(',').collect();
    if v.len() != 2 {
        return bad(format!("sigma needs two signs, got {s:?}"));
    }
    let p = |x: &str| x.trim().parse::<Sign>().map_err(|e| UsageError::Bad(e.to_string()));
    Ok((p(v[0])?, p(v[1])?))
}

fn parse_pair(s: &str) -> Result<(u32, u32), UsageError> {
    let v: Result<Vec<u32>, _> = s.split(',').map(|x| x.trim().parse()).collect();
    match v.as_deref() {
        Ok([a, b]) => Ok((*a, *b)),
        _ => bad(format!("expected two integers, got {s:?}")),
    }
}

fn parse_x(s: &str) -> Result<Scalar, UsageError> {
    parse_scalar(s).map_err(|e| UsageError::Bad(format!("bad scalar {s:?}: {e}")))
}

fn sides(s: SideArg) -> Vec<Side> {
    match s {
        SideArg::Lower => vec![Side::Lower],
        SideArg::Upper => vec![Side::Upper],
        SideArg::Both => vec![Side::Lower, Side::Upper],
    }
}

fn choices(c: ChoiceArg) -> Vec<Choice> {
    match c {
        ChoiceArg::Plus => vec![Choice::Plus],
        ChoiceArg::Minus => vec![Choice::Minus],
        ChoiceArg::Both => vec![Choice::Plus, Choice::Minus],
    }
}

fn level_of(l: LevelArg, c: Choice) -> Level {
    match l {
        LevelArg::Full => Level::Full,
        LevelArg::Lower => Level::Truncated(Side::Lower, c),
        LevelArg::Upper => Level::Truncated(Side::Upper, c),
    }
}

fn module_kind(m: Module) -> ModuleKind {
    match m {
        Module::W => ModuleKind::W,
        Module::W2 => ModuleKind::W2,
    }
}

fn check_flavor(eps: &Epsilon, m: Module) -> Result<(), UsageError> {
    if eps.n() < 3 || eps.n() % 2 == 0 {
        return bad("epsilon must have odd length at least 3");
    }
    if matches!(m, Module::W2) && eps.bit(eps.n()) != 0 {
        return bad("W2 needs epsilon_n = 0");
    }
    Ok(())
}

enum Outcome {
    Json(Report),
    /// Table already printed; carries whether the checks passed.
    Csv(bool),
}

fn run(cli: &Cli, args: Vec<String>) -> Result<Outcome, UsageError> {
    let t0 = Instant::now();
    let name = match &cli.cmd {
        Cmd::VerifyRelations { .. } => "verify-relations",
        Cmd::VerifyPhi { .. } => "verify-phi",
        Cmd::Truncate { .. } => "truncate",
        Cmd::Decompose { .. } => "decompose",
        Cmd::Hwv { .. } => "hwv",
        Cmd::Rmatrix { .. } => "rmatrix",
        Cmd::Fuse { .. } => "fuse",
        Cmd::Fundamental { .. } => "fundamental",
        Cmd::AppendixCheck { .. } => "appendix-check",
        Cmd::Suite { .. } => "suite",
    };
    let mut r = Report::new(name, args, cli.timings);
    match &cli.cmd {
        Cmd::VerifyRelations { eps, perturb } => {
            let e = parse_eps(&eps.epsilon)?;
            check_flavor(&e, eps.module)?;
            let x = parse_x(&eps.x)?;
            match checks::relations(&e, module_kind(eps.module), &x, eps.cutoff, *perturb) {
                Ok((c, s)) => {
                    c.into_iter().for_each(|c| r.push(c));
                    r.data("summary", s);
                }
                Err(err) => return bad(err.to_string()),
            }
        }
        Cmd::VerifyPhi { eps, side, choice } => {
            let e = parse_eps(&eps.epsilon)?;
            check_flavor(&e, eps.module)?;
            let x = parse_x(&eps.x)?;
            for s in sides(*side) {
                for c in choices(*choice) {
                    match checks::phi_relations(&e, module_kind(eps.module), s, c, &x, eps.cutoff) {
                        Ok((cs, _)) => cs.into_iter().for_each(|c| r.push(c)),
                        Err(err) => return bad(err.to_string()),
                    }
                }
            }
        }
        Cmd::Truncate { epsilon, side, choice, factors, cutoff, fundamentals } => {
            let e = parse_eps(epsilon)?;
            if !(1..=2).contains(factors) {
                return bad("--factors must be 1 or 2");
            }
            for s in sides(*side) {
                for c in choices(*choice) {
                    checks::truncation(&e, s, c, *factors, *cutoff).into_iter().for_each(|c| r.push(c));
                }
            }
            if *fundamentals {
                let (c, dims) = checks::fundamental_truncation_dims((e.n() - 1) / 2);
                c.into_iter().for_each(|c| r.push(c));
                r.data("upper_truncation_dims", dims);
            }
        }
        Cmd::Decompose { flavor, sigma, level, m, cutoff, csv } => {
            let (checks, rows) = match flavor {
                Flavor::C => {
                    let (s1, s2) = parse_sigma(sigma)?;
                    checks::decomposition_c(*m, level_of(*level, Choice::Plus), s1, s2, *cutoff)
                }
                Flavor::D => {
                    if !matches!(level, LevelArg::Full) {
                        return bad("W2 decomposition is computed at the full level");
                    }
                    checks::decomposition_w2(*m, *cutoff)
                }
            };
            if *csv {
                println!("lambda,mult");
                for row in &rows {
                    let l: Vec<String> = row.lambda.iter().map(|x| x.to_string()).collect();
                    println!("\"({})\",{}", l.join(","), row.mult);
                }
                return Ok(Outcome::Csv(checks.iter().all(|c| c.pass)));
            }
            checks.into_iter().for_each(|c| r.push(c));
            r.data("multiplicities", rows);
        }
        Cmd::Hwv { sigma, level, m, cutoff, partition, weight } => {
            let (s1, s2) = parse_sigma(sigma)?;
            let eps = Epsilon::alternating(*m);
            let lv = level_of(*level, Choice::Plus);
            let map = lv.map(&eps).map_err(|e| UsageError::Bad(e.to_string()))?;
            let (ring, kept) = level_data(&eps, &map);
            let w = match (partition, weight) {
                (Some(p), None) => {
                    let nu: Partition = p.parse().map_err(|e: qosc_core::Error| UsageError::Bad(e.to_string()))?;
                    match hw_weight(eps.n(), &index_order(&eps, kept.as_deref()), &nu, 1, 2) {
                        Some(w) => w,
                        None => return bad(format!("{nu} has no tableau at this level")),
                    }
                }
                (None, Some(s)) => parse_weight(s, eps.n())?,
                _ => return bad("give --partition or --weight"),
            };
            if w.degree() > *cutoff as i32 {
                return bad("weight lies outside the window");
            }
            let one = Param::one();
            let spec = ModuleSpec::new(
                eps.clone(),
                vec![
                    FactorSpec { kind: FactorKind::W, param: one.clone(), parity: Some(s1.parity()) },
                    FactorSpec { kind: FactorKind::W, param: one.clone(), parity: Some(s2.parity()) },
                ],
                *cutoff,
            )
            .map_err(|e| UsageError::Bad(e.to_string()))?;
            let space = LabelSpace::new(&spec, kept.as_deref());
            let module = tensor_at::<Scalar>(&eps, FactorKind::W, [&one, &one], &map).map_err(|e| UsageError::Bad(e.to_string()))?;
            let hw = hw_vectors(module.as_ref(), &ring, &space.block(&w));
            let texts: Vec<String> = hw
                .iter()
                .map(|v| {
                    v.iter().map(|(l, c)| format!("({c}) {}", format_label(l, eps.n()))).collect::<Vec<_>>().join(" + ")
                })
                .collect();
            let killed = hw.iter().all(|v| {
                ring.iter().all(|&i| module.apply(&qosc_core::fock::Gen::E(i), v).is_zero())
            });
            r.check("kernel vectors are killed by raising operators", killed);
            r.data("weight", w.to_string());
            r.data("dimension", hw.len());
            r.data("vectors", texts);
        }
        Cmd::Rmatrix { flavor, sigma, l, level, choice, m, cutoff, intertwining } => {
            let ch = match choice {
                ChoiceArg::Both => return bad("--choice must be plus or minus here"),
                c => choices(*c)[0],
            };
            let lv = level_of(*level, ch);
            match flavor {
                Flavor::C => {
                    let (s1, s2) = parse_sigma(sigma)?;
                    let (c, res) = checks::rmatrix_c(*m, lv, s1, s2, *cutoff, *intertwining);
                    c.into_iter().for_each(|c| r.push(c));
                    if let Some((_, rows)) = res {
                        r.data("rho", rows);
                    }
                    r.data("pole_set", qosc_core::rmatrix::poles_c(s1, s2, 4 * *cutoff as i32));
                }
                Flavor::D => {
                    if matches!(level, LevelArg::Upper) {
                        return bad("type D R matrices are solved at the full or lower level");
                    }
                    let (l1, l2) = parse_pair(l)?;
                    let (c, rows) = checks::rmatrix_d(*m, lv, ch, l1, l2, *cutoff, *intertwining);
                    c.into_iter().for_each(|c| r.push(c));
                    r.data("rho", rows);
                    r.data("pole_set", qosc_core::rmatrix::poles_d(l1, l2, 4 * *cutoff as i32));
                }
            }
        }
        Cmd::Fuse { flavor, sigma, l, c, m, cutoff, check_truncation } => {
            let cs: Result<Vec<Scalar>, _> = c.split(',').map(parse_x).collect();
            let cs = cs?;
            let labels = match flavor {
                Flavor::C => {
                    let (s1, s2) = parse_sigma(sigma)?;
                    Labels::C(vec![s1, s2])
                }
                Flavor::D => {
                    let (l1, l2) = parse_pair(l)?;
                    Labels::D(vec![l1, l2])
                }
            };
            let params = FusionParams::new(labels, cs).map_err(|e| UsageError::Bad(e.to_string()))?;
            let levels: Vec<Level> = match (check_truncation, flavor) {
                (false, _) => Vec::new(),
                (true, Flavor::C) => vec![Level::Truncated(Side::Lower, Choice::Plus), Level::Truncated(Side::Upper, Choice::Plus)],
                (true, Flavor::D) => vec![Level::Truncated(Side::Lower, Choice::Plus)],
            };
            let (c, row) = checks::fusion(*m, &params, *cutoff, None, &levels);
            c.into_iter().for_each(|c| r.push(c));
            if let Some(row) = row {
                r.data("image", row);
            }
        }
        Cmd::Fundamental { l, k, m, cutoff, verify } => {
            if k > l {
                return bad("need k <= l");
            }
            if !["all", "closure", "iso", "truncation", "hw"].contains(&verify.as_str()) {
                return bad(format!("unknown --verify {verify:?}"));
            }
            let (c, dims) = checks::fundamental(*m, *l, *k, *cutoff, verify);
            c.into_iter().for_each(|c| r.push(c));
            r.data("block_dims", dims);
        }
        Cmd::AppendixCheck { which, ranges, choice, m } => {
            let tuples: Result<Vec<Vec<u32>>, _> =
                ranges.split(';').map(|t| t.split(',').map(|x| x.trim().parse::<u32>()).collect()).collect();
            let tuples = tuples.map_err(|_| UsageError::Bad(format!("bad --ranges {ranges:?}")))?;
            if tuples.iter().any(|t| t.len() != 4) {
                return bad("each range is l1,l2,r,s");
            }
            for ch in choices(*choice) {
                for t in &tuples {
                    match which.as_str() {
                        "B" | "b" | "ef" => r.push(checks::ef_identities(*m, ch, t[0], t[1], t[2], t[3])),
                        "C" | "c" | "coefficients" => {
                            checks::lowering_coefficients(*m, ch, t[0], t[1], t[2], t[3]).into_iter().for_each(|c| r.push(c))
                        }
                        o => return bad(format!("unknown --which {o:?} (B or C)")),
                    }
                }
            }
        }
        Cmd::Suite { quick, only } => {
            let scale = if *quick { Scale::Quick } else { Scale::Full };
            let ids: Vec<u32> = match only {
                Some(s) => s.split(',').map(|x| x.trim().parse().map_err(|_| UsageError::Bad(format!("bad --only {s:?}")))).collect::<Result<_, _>>()?,
                None => (1..=9).collect(),
            };
            let mut results = Vec::new();
            for id in ids {
                let t = Instant::now();
                let c = suite::criterion(id, scale).ok_or_else(|| UsageError::Bad(format!("no criterion {id}")))?;
                eprintln!("{}", c.line());
                r.time(&format!("criterion {id}"), t);
                r.check(format!("criterion {id}: {}", c.title), c.pass);
                results.push(c);
            }
            r.data("criteria", results);
        }
    }
    r.time("total", t0);
    Ok(Outcome::Json(r))
}

fn parse_weight(s: &str, n: usize) -> Result<Weight, UsageError> {
    let (lam, rest) = s.split_once(':').ok_or_else(|| UsageError::Bad("weight is lam:d1,...,dn".into()))?;
    let lam: i32 = lam.trim().parse().map_err(|_| UsageError::Bad(format!("bad weight {s:?}")))?;
    let d: Result<Vec<i32>, _> = rest.split(',').map(|x| x.trim().parse()).collect();
    let d = d.map_err(|_| UsageError::Bad(format!("bad weight {s:?}")))?;
    if d.len() != n {
        return bad(format!("weight needs {n} entries"));
    }
    Ok(Weight::new(lam, d))
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    match run(&cli, args) {
        Ok(Outcome::Csv(ok)) => ExitCode::from(if ok { 0 } else { 1 }),
        Ok(Outcome::Json(r)) => {
            let code = r.exit_code();
            let json = r.to_json();
            match &cli.out {
                Some(path) => {
                    if let Err(e) = fs::write(path, json + "\n") {
                        eprintln!("error: cannot write {path}: {e}");
                        return ExitCode::from(2);
                    }
                }
                None => println!("{json}"),
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
