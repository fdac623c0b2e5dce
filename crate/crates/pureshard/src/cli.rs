//! The `pureshard` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::arrangement::{builtin_arrangement, parse_arrangement, Arrangement, Family};
use crate::coxbraid::CoxBraid;
use crate::coxeter::CoxeterArrangement;
use crate::error::{Error, Result};
use crate::salvetti::{Salvetti, DEFAULT_BUDGET};
use crate::shardmonoid::ShardMonoid;
use crate::shards::shard_intersection_order;
use crate::verify::{self, Options, VerificationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "pureshard", version, about = "Shards, Salvetti complexes, pure shard monoids and Coxeter braids")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// State budget for searches (interval enumeration, flip closures).
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Source {
    /// Built-in arrangement: I2:m, An, Bn or Dn.
    #[arg(long, conflicts_with = "arr")]
    builtin: Option<String>,
    /// Arrangement JSON file.
    #[arg(long)]
    arr: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Regions and the poset of regions.
    Arr {
        #[command(subcommand)]
        cmd: ArrCmd,
    },
    /// Shards and the shard intersection order.
    Shards {
        #[command(subcommand)]
        cmd: ShardsCmd,
    },
    /// The Salvetti 1-skeleton and 2-cells.
    Salvetti {
        #[command(subcommand)]
        cmd: SalvettiCmd,
    },
    /// Loops in the fundamental group.
    Loop {
        #[command(subcommand)]
        cmd: LoopCmd,
    },
    /// The interval [1, Δ²] in the pure shard monoid.
    Monoid {
        #[command(subcommand)]
        cmd: MonoidCmd,
    },
    /// Coxeter groups and braid monoids.
    Cox {
        #[command(subcommand)]
        cmd: CoxCmd,
    },
    /// Run verification suites.
    Verify(VerifyArgs),
}

#[derive(Subcommand, Debug)]
enum ArrCmd {
    /// List the regions.
    Regions {
        #[command(flatten)]
        src: Source,
        /// Print only the number of regions.
        #[arg(long)]
        count: bool,
    },
    /// The poset of regions.
    Poset {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        dot: bool,
    },
    /// The hyperplanes and base region.
    Show {
        #[command(flatten)]
        src: Source,
    },
}

#[derive(Subcommand, Debug)]
enum ShardsCmd {
    /// List shards with their cutting signs.
    List {
        #[command(flatten)]
        src: Source,
    },
    /// The shard intersection order.
    Order {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        dot: bool,
    },
}

#[derive(Subcommand, Debug)]
enum SalvettiCmd {
    /// The 1-skeleton with edges e and e*.
    Skeleton {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        dot: bool,
    },
    /// The 2-cell relations.
    Cells {
        #[command(flatten)]
        src: Source,
    },
}

#[derive(Subcommand, Debug)]
enum LoopCmd {
    /// Decide whether two words over shard loops are equal. Word files hold JSON arrays of shard ids.
    Eq {
        left: PathBuf,
        right: PathBuf,
        #[command(flatten)]
        src: Source,
    },
}

#[derive(Subcommand, Debug)]
enum MonoidCmd {
    /// Enumerate the interval [1, Δ²].
    Interval {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        dot: bool,
    },
    /// Census of the rank-2 interval for m lines.
    VerifyRank2 {
        #[arg(long)]
        m: usize,
    },
    /// Crackle of a region.
    Crackle {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        region: usize,
    },
    /// Pow of a region.
    Pow {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        region: usize,
    },
}

#[derive(Subcommand, Debug)]
enum CoxCmd {
    /// Order, longest element and Coxeter matrix.
    Info {
        #[arg(long = "type")]
        ty: String,
    },
    /// Snap of an element given by a word.
    Snap {
        #[arg(long = "type")]
        ty: String,
        #[arg(long)]
        elem: String,
    },
    /// Greedy normal form of a positive braid word.
    Nf {
        #[arg(long = "type")]
        ty: String,
        #[arg(long)]
        word: String,
    },
    /// c-sortable elements and noncrossing shards for a Coxeter word.
    Sort {
        #[arg(long = "type")]
        ty: String,
        #[arg(long)]
        c: String,
    },
    /// Run Coxeter suites (snap, conj, inv, nc, properties).
    Verify {
        #[arg(long = "type")]
        ty: String,
        #[arg(long, value_delimiter = ',', default_value = "snap,conj,inv,nc")]
        suite: Vec<String>,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suites to run, comma separated, or `all`.
    #[arg(long, value_delimiter = ',', required = true)]
    suite: Vec<String>,
    /// Number of lines for the rank-2 suite.
    #[arg(long)]
    m: Option<usize>,
    /// Built-in families to run on, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "arr")]
    builtin: Vec<String>,
    /// Arrangement JSON file for arrangement-level suites.
    #[arg(long)]
    arr: Option<PathBuf>,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// Random samples for the randomized property checks.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Include wall-clock time per check.
    #[arg(long)]
    timings: bool,
}

fn load(src: &Source) -> Result<Arrangement> {
    match (&src.builtin, &src.arr) {
        (Some(tag), None) => builtin_arrangement(Family::parse(tag)?),
        (None, Some(path)) => parse_arrangement(&std::fs::read_to_string(path)?),
        _ => Err(Error::Parse("give exactly one of --builtin or --arr".into())),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceLimit(_) => EXIT_RESOURCE,
        Error::Internal(_) => EXIT_FAIL,
        _ => EXIT_USAGE,
    }
}

/// Run the command line with the given arguments, writing results to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn emit(out: &mut dyn Write, json: bool, value: &Value, text: impl FnOnce() -> String) -> Result<()> {
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(value)?)?;
    } else {
        write!(out, "{}", text())?;
    }
    Ok(())
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let json = cli.json;
    match &cli.command {
        Command::Arr { cmd } => arr_cmd(cmd, json, out),
        Command::Shards { cmd } => shards_cmd(cmd, json, out),
        Command::Salvetti { cmd } => salvetti_cmd(cmd, json, out),
        Command::Loop { cmd } => loop_cmd(cmd, json, out),
        Command::Monoid { cmd } => monoid_cmd(cmd, json, cli.budget, out),
        Command::Cox { cmd } => cox_cmd(cmd, json, cli.budget, out),
        Command::Verify(args) => verify_cmd(args, json, cli.budget, out),
    }
}

fn arr_cmd(cmd: &ArrCmd, json: bool, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        ArrCmd::Regions { src, count } => {
            let arr = load(src)?;
            let sal = Salvetti::new(arr)?;
            let p = &sal.poset;
            if *count {
                emit(out, json, &json!({"regions": p.len()}), || format!("{}\n", p.len()))?;
            } else {
                emit(out, json, &p.to_json()["regions"], || {
                    p.regions.iter().enumerate().map(|(i, r)| format!("{i} {} rank {}\n", r.sign_string(p.nhyperplanes), p.grade(i))).collect()
                })?;
            }
        }
        ArrCmd::Poset { src, dot } => {
            let sal = Salvetti::new(load(src)?)?;
            let p = &sal.poset;
            if *dot {
                write!(out, "{}", p.to_dot(|e| e.hyperplane.to_string()))?;
            } else {
                writeln!(out, "{}", serde_json::to_string_pretty(&p.to_json())?)?;
            }
        }
        ArrCmd::Show { src } => {
            let arr = load(src)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&arr.to_json())?)?;
        }
    }
    Ok(EXIT_OK)
}

fn shards_cmd(cmd: &ShardsCmd, json: bool, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        ShardsCmd::List { src } => {
            let sal = Salvetti::new(load(src)?)?;
            let data = &sal.shards;
            emit(out, json, &data.to_json(), || {
                data.shards
                    .iter()
                    .map(|s| {
                        let cuts: Vec<String> = s.cut_signs().iter().map(|(h, g)| format!("{}{h}", if *g > 0 { '+' } else { '-' })).collect();
                        format!("shard {} on hyperplane {} cut {}\n", s.id, s.hyperplane, if cuts.is_empty() { "none".into() } else { cuts.join(" ") })
                    })
                    .collect()
            })?;
        }
        ShardsCmd::Order { src, dot } => {
            let sal = Salvetti::new(load(src)?)?;
            let order = shard_intersection_order(&sal.arr, &sal.shards, &sal.poset)?;
            if *dot {
                write!(out, "{}", order.to_dot())?;
            } else {
                let hasse: Vec<Value> = order.hasse().into_iter().map(|(a, b)| json!([a, b])).collect();
                emit(out, json, &json!({"regions": order.len(), "covers": hasse}), || {
                    order.hasse().into_iter().map(|(a, b)| format!("{a} < {b}\n")).collect()
                })?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn salvetti_cmd(cmd: &SalvettiCmd, json: bool, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        SalvettiCmd::Skeleton { src, dot } => {
            let sal = Salvetti::new(load(src)?)?;
            if *dot {
                write!(out, "{}", sal.one_skeleton_dot())?;
            } else {
                let edges: Vec<Value> = sal
                    .one_skeleton()
                    .into_iter()
                    .map(|(s, a, b)| json!({"edge": s.edge, "star": s.dir == crate::poset::Direction::Star, "from": a, "to": b}))
                    .collect();
                emit(out, json, &json!(edges), || {
                    sal.one_skeleton()
                        .into_iter()
                        .map(|(s, a, b)| format!("e{}{} {a} -> {b}\n", s.edge, if s.dir == crate::poset::Direction::Star { "*" } else { "" }))
                        .collect()
                })?;
            }
        }
        SalvettiCmd::Cells { src } => {
            let sal = Salvetti::new(load(src)?)?;
            let cells: Vec<Value> = sal
                .two_cells()
                .iter()
                .map(|c| json!({"hyperplanes": sal.shards.rank2[c.subarrangement].hyperplanes, "sides": c.sides}))
                .collect();
            emit(out, json, &json!(cells), || {
                sal.two_cells().iter().map(|c| format!("{:?} | {:?}\n", c.sides[0], c.sides[1])).collect()
            })?;
        }
    }
    Ok(EXIT_OK)
}

fn read_word(path: &PathBuf) -> Result<Vec<usize>> {
    let v: Vec<usize> = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    Ok(v)
}

fn loop_cmd(cmd: &LoopCmd, json: bool, out: &mut dyn Write) -> Result<i32> {
    let LoopCmd::Eq { left, right, src } = cmd;
    let sal = Salvetti::new(load(src)?)?;
    let (a, b) = (read_word(left)?, read_word(right)?);
    let equal = sal.loop_of_word(&a)? == sal.loop_of_word(&b)?;
    emit(out, json, &json!({"equal": equal}), || format!("{}\n", if equal { "equal" } else { "different" }))?;
    Ok(if equal { EXIT_OK } else { EXIT_FAIL })
}

fn monoid_cmd(cmd: &MonoidCmd, json: bool, budget: usize, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        MonoidCmd::Interval { src, dot } => {
            let sal = Salvetti::new(load(src)?)?;
            let sm = ShardMonoid::new(&sal, budget)?;
            let ip = &sm.interval;
            if *dot {
                write!(out, "{}", ip.to_dot())?;
            } else {
                let (lattice, _) = ip.lattice_check();
                let mut v = ip.to_json();
                v["summary"] = json!({
                    "elements": ip.len(),
                    "chains": ip.max_chain_count().to_string(),
                    "rank_generating_function": ip.rank_generating_function(),
                    "lattice": lattice,
                });
                emit(out, json, &v, || {
                    format!(
                        "elements {}\nmaximal chains {}\nrank generating function {:?}\nlattice {}\n",
                        ip.len(),
                        ip.max_chain_count(),
                        ip.rank_generating_function(),
                        lattice
                    )
                })?;
            }
        }
        MonoidCmd::VerifyRank2 { m } => {
            let opts = Options { m: Some(*m), budget, ..Options::default() };
            return report(out, json, &verify::run_suite("rank2", &opts)?);
        }
        MonoidCmd::Crackle { src, region } | MonoidCmd::Pow { src, region } => {
            let is_crackle = matches!(cmd, MonoidCmd::Crackle { .. });
            let sal = Salvetti::new(load(src)?)?;
            if *region >= sal.poset.len() {
                return Err(Error::Parse(format!("no region {region}")));
            }
            let sm = ShardMonoid::new(&sal, budget)?;
            let (id, word) = if is_crackle {
                (sm.crackle(*region)?, sm.crackle_word(*region)?)
            } else {
                (sm.pow(*region)?, sm.pow_word(*region))
            };
            let e = &sm.interval.elements[id];
            let v = json!({"region": region, "element": id, "rank": e.rank, "word": word});
            emit(out, json, &v, || format!("element {id} rank {} word {word:?}\n", e.rank))?;
        }
    }
    Ok(EXIT_OK)
}

fn names(word: &[usize]) -> String {
    if word.is_empty() {
        return "1".into();
    }
    word.iter().map(|i| format!("s{}", i + 1)).collect()
}

fn cox_cmd(cmd: &CoxCmd, json: bool, budget: usize, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        CoxCmd::Info { ty } => {
            let g = crate::coxeter::CoxeterGroup::new(Family::parse(ty)?)?;
            let v = json!({
                "type": g.family.to_string(),
                "order": g.order(),
                "rank": g.rank(),
                "reflections": g.reflections.len(),
                "w0": names(&g.reduced_word(g.w0)),
                "coxeter_matrix": g.coxeter_matrix,
            });
            emit(out, json, &v, || {
                format!("{}: order {}, {} reflections, w0 = {}\n", g.family, g.order(), g.reflections.len(), names(&g.reduced_word(g.w0)))
            })?;
        }
        CoxCmd::Snap { ty, elem } => {
            let ca = CoxeterArrangement::new(Family::parse(ty)?)?;
            let cb = CoxBraid::new(&ca);
            let g = &ca.group;
            let w = g.product(&g.parse_word(elem)?);
            let snap = cb.braids.snap(w);
            let word = cb.braids.word(&snap).expect("positive");
            let inv: Vec<String> = cb.braids.inv_sequence(&word).into_iter().map(|t| g.reflection_name(t)).collect();
            let factors: Vec<String> = crate::garside::positive_factors(&crate::coxbraid::BraidCategory { group: g }, &snap)
                .expect("positive")
                .into_iter()
                .map(|x| names(&g.reduced_word(x)))
                .collect();
            let v = json!({
                "element": names(&g.reduced_word(w)),
                "pop": names(&g.reduced_word(g.pop(w))),
                "snap": factors,
                "inv": inv,
            });
            emit(out, json, &v, || {
                format!(
                    "w = {}\nPop(w) = {}\nSnap(w) = {}\nInv(Snap(w)) = {{{}}}\n",
                    names(&g.reduced_word(w)),
                    names(&g.reduced_word(g.pop(w))),
                    factors.join(" · "),
                    inv.join(",")
                )
            })?;
        }
        CoxCmd::Nf { ty, word } => {
            let g = crate::coxeter::CoxeterGroup::new(Family::parse(ty)?)?;
            let b = crate::coxbraid::Braids::new(&g);
            let x = b.from_word(&g.parse_word(word)?);
            let factors: Vec<String> = crate::garside::positive_factors(&crate::coxbraid::BraidCategory { group: &g }, &x)
                .expect("positive")
                .into_iter()
                .map(|f| names(&g.reduced_word(f)))
                .collect();
            emit(out, json, &json!({"delta_power": x.power, "factors": factors}), || format!("{}\n", b.format(&x)))?;
        }
        CoxCmd::Sort { ty, c } => {
            let ca = CoxeterArrangement::new(Family::parse(ty)?)?;
            let cb = CoxBraid::new(&ca);
            let g = &ca.group;
            let c = cb.parse_coxeter_word(c)?;
            let sort: Vec<String> = cb.sortables(&c).into_iter().map(|w| names(&cb.sorting_word(&c, w))).collect();
            let nc: Vec<usize> = cb.noncrossing_shards(&c).into_iter().collect();
            let ncp = cb.noncrossing_partitions(&c).0.len();
            let v = json!({"sortable": sort, "noncrossing_shards": nc, "noncrossing_partitions": ncp});
            emit(out, json, &v, || {
                format!(
                    "{} c-sortable elements of {}: {}\nnoncrossing shards {:?}\n{} noncrossing partitions\n",
                    sort.len(),
                    g.family,
                    sort.join(" "),
                    nc,
                    ncp
                )
            })?;
        }
        CoxCmd::Verify { ty, suite } => {
            let fam = Family::parse(ty)?;
            let opts = Options { families: Some(vec![fam]), budget, ..Options::default() };
            return run_many(suite, &opts, json, out);
        }
    }
    Ok(EXIT_OK)
}

fn report(out: &mut dyn Write, json: bool, r: &VerificationReport) -> Result<i32> {
    emit(out, json, &r.to_json(), || r.render_text())?;
    Ok(report_code(r))
}

fn report_code(r: &VerificationReport) -> i32 {
    if r.partial {
        EXIT_RESOURCE
    } else if r.passed() {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn run_many(suites: &[String], opts: &Options, json: bool, out: &mut dyn Write) -> Result<i32> {
    let names: Vec<&str> = if suites.iter().any(|s| s == "all") {
        verify::SUITES.to_vec()
    } else {
        suites.iter().map(|s| s.as_str()).collect()
    };
    let mut reports = Vec::new();
    for s in names {
        reports.push(verify::run_suite(s, opts)?);
    }
    if json {
        let v: Vec<Value> = reports.iter().map(|r| r.to_json()).collect();
        writeln!(out, "{}", serde_json::to_string_pretty(&json!(v))?)?;
    } else {
        for r in &reports {
            write!(out, "{}", r.render_text())?;
        }
    }
    Ok(reports.iter().map(report_code).max().unwrap_or(EXIT_OK))
}

fn verify_cmd(args: &VerifyArgs, json: bool, budget: usize, out: &mut dyn Write) -> Result<i32> {
    let families = if args.builtin.is_empty() {
        None
    } else {
        Some(args.builtin.iter().map(|t| Family::parse(t)).collect::<Result<Vec<_>>>()?)
    };
    let arrangement = match &args.arr {
        Some(path) => Some(parse_arrangement(&std::fs::read_to_string(path)?)?),
        None => None,
    };
    let opts = Options { families, m: args.m, arrangement, budget, seed: args.seed, samples: args.samples, timings: args.timings };
    run_many(&args.suite, &opts, json, out)
}
