use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use lrcgeom::bounds::{bound_suite, BoundReport, Family};
use lrcgeom::constructions::{construct_d6r3_char2, greedy_spread_d7r2, greedy_sunflower_d7r2, ConstructionError};
use lrcgeom::formats::{read_lrcmat, write_config, write_lrcmat, ConfigRecord, LrcMatRecord};
use lrcgeom::galois::prime_power;
use lrcgeom::lrc::{LrcError, DEFAULT_SUBSET_BUDGET};
use lrcgeom::search::{exhaustive_max, Config};
use lrcgeom::{Field, LrcCode};

const EXIT_VERIFY: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_USAGE: u8 = 4;

#[derive(Parser)]
#[command(name = "lrcgeom", version, about = "Singleton-optimal locally repairable codes from finite geometry")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code, verify its parameters and optionally write it out
    Construct {
        #[arg(long, value_enum)]
        family: ConstructFamily,
        #[arg(long)]
        q: u64,
        /// Write the code (LRCMAT v1, or JSON with --json)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the configuration certificate
        #[arg(long)]
        cert: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        /// Cap on search nodes and column subsets
        #[arg(long, default_value_t = DEFAULT_SUBSET_BUDGET)]
        budget: u64,
    },
    /// Recompute k, r, the exact minimum distance and the Singleton verdict
    Verify {
        #[arg(long)]
        h_file: PathBuf,
        #[arg(long)]
        expect_d: Option<usize>,
        #[arg(long)]
        expect_r: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SUBSET_BUDGET)]
        budget: u64,
        #[arg(long)]
        json: bool,
    },
    /// Closed-form length bounds over the prime powers in a range
    Bounds {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        q_min: u64,
        #[arg(long)]
        q_max: u64,
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        json: bool,
    },
    /// Exhaustive search for the largest configuration at small q
    Search {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = DEFAULT_SUBSET_BUDGET)]
        budget: u64,
        #[arg(long)]
        cert: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Encode a random codeword, erase positions and repair them
    RepairDemo {
        #[arg(long)]
        h_file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        erase: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the addition or multiplication table of GF(q)
    Field {
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum)]
        table: Table,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructFamily {
    D6r3Char2,
    D7r2Spread,
    D7r2Sunflower,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    D6r3,
    D7r2,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::D6r3 => Family::D6R3,
            FamilyArg::D7r2 => Family::D7R2,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Table {
    Add,
    Mul,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
    fn verify(message: impl Into<String>) -> Self {
        Failure { code: EXIT_VERIFY, message: message.into() }
    }
}

impl From<LrcError> for Failure {
    fn from(e: LrcError) -> Self {
        let code = if matches!(e, LrcError::BudgetExceeded { .. }) { EXIT_BUDGET } else { EXIT_VERIFY };
        Failure { code, message: e.to_string() }
    }
}

impl From<ConstructionError> for Failure {
    fn from(e: ConstructionError) -> Self {
        let code = match &e {
            ConstructionError::BudgetExceeded { .. }
            | ConstructionError::SearchFailed { .. }
            | ConstructionError::Lrc(LrcError::BudgetExceeded { .. }) => EXIT_BUDGET,
            ConstructionError::DegreeTooSmall(_)
            | ConstructionError::FieldTooSmall(_)
            | ConstructionError::Field(_)
            | ConstructionError::NotCharacteristicTwo(_) => EXIT_USAGE,
            _ => EXIT_VERIFY,
        };
        Failure { code, message: e.to_string() }
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Construct { family, q, out, cert, json, budget } => construct(family, q, out, cert, json, budget),
        Command::Verify { h_file, expect_d, expect_r, budget, json } => {
            verify(&h_file, expect_d, expect_r, budget, json)
        }
        Command::Bounds { family, q_min, q_max, csv, json } => bounds(family.into(), q_min, q_max, csv, json),
        Command::Search { family, q, budget, cert, json } => search(family.into(), q, budget, cert, json),
        Command::RepairDemo { h_file, erase, seed } => repair_demo(&h_file, &erase, seed),
        Command::Field { q, table } => field_table(q, table),
    }
}

fn field_for(q: u64) -> Result<Field, Failure> {
    Field::with_order(q).map_err(|e| Failure::usage(e.to_string()))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn to_json(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn load_code(path: &Path) -> Result<LrcCode, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let parsed = if text.trim_start().starts_with('{') {
        serde_json::from_str::<LrcMatRecord>(&text)
            .map_err(|e| format!("line {}: {e}", e.line()))
            .and_then(|r| r.to_code().map_err(|e| e.message))
    } else {
        read_lrcmat(&text).map_err(|e| e.to_string())
    };
    parsed.map_err(|m| Failure::usage(format!("{}: {m}", path.display())))
}

struct Summary {
    n: usize,
    k: usize,
    d: Option<usize>,
    r: usize,
    optimal: bool,
}

impl Summary {
    fn of(code: &LrcCode) -> Summary {
        let d = code.verified_d().and_then(|c| c.d);
        let optimal = code.singleton_report().is_some_and(|s| s.verdict == lrcgeom::lrc::Optimality::Optimal);
        Summary { n: code.n(), k: code.k(), d, r: code.r(), optimal }
    }

    fn line(&self) -> String {
        let d = self.d.map_or("none".to_string(), |d| d.to_string());
        let yes = if self.optimal { "yes" } else { "no" };
        format!("n={} k={} d={d} r={} optimal={yes}\n", self.n, self.k, self.r)
    }

    fn json(&self) -> serde_json::Value {
        json!({ "n": self.n, "k": self.k, "d": self.d, "r": self.r, "optimal": self.optimal })
    }
}

fn construct(
    family: ConstructFamily,
    q: u64,
    out: Option<PathBuf>,
    cert: Option<PathBuf>,
    json: bool,
    budget: u64,
) -> Outcome {
    let mut notes = Vec::new();
    let (config, mut code, expected_d) = match family {
        ConstructFamily::D6r3Char2 => {
            let m = match prime_power(q) {
                Some((2, m)) => m,
                _ => return Err(Failure::usage(format!("d6r3-char2 needs q = 2^m, got {q}"))),
            };
            let c = construct_d6r3_char2(m, budget)?;
            if let Some(v) = &c.closed_form_failure {
                notes.push(format!("closed-form layout rejected ({v}); groups taken from the canonical search"));
            }
            (Config::D6R3(c.config), c.code, 6)
        }
        ConstructFamily::D7r2Spread | ConstructFamily::D7r2Sunflower => {
            let f = field_for(q)?;
            let (cfg, code) = match family {
                ConstructFamily::D7r2Spread => greedy_spread_d7r2(&f)?,
                _ => greedy_sunflower_d7r2(&f)?,
            };
            (Config::D7R2(cfg), code, 7)
        }
    };
    if code.verified_d().is_none() {
        code.verify_min_distance(budget)?;
    }
    let summary = Summary::of(&code);
    if summary.d != Some(expected_d) {
        let witness = code.verified_d().map(|c| c.witness.clone()).unwrap_or_default();
        return Err(Failure::verify(format!(
            "minimum distance {:?}, expected {expected_d}; dependent columns {witness:?}",
            summary.d
        )));
    }
    if let Some(path) = &out {
        let text = if json { to_json(&LrcMatRecord::from_code(&code)) } else { write_lrcmat(&code) };
        write_file(path, &text)?;
    }
    if let Some(path) = &cert {
        let text = if json { to_json(&ConfigRecord::from_config(&config)) } else { write_config(&config) };
        write_file(path, &text)?;
    }
    for n in &notes {
        eprintln!("note: {n}");
    }
    if json {
        let mut v = summary.json();
        v["ell"] = json!(config.ell());
        Ok(to_json(&v))
    } else {
        Ok(summary.line())
    }
}

fn verify(path: &Path, expect_d: Option<usize>, expect_r: Option<usize>, budget: u64, json: bool) -> Outcome {
    let mut code = load_code(path)?;
    let cert = code.verify_min_distance(budget)?.clone();
    let summary = Summary::of(&code);
    if let Some(d) = expect_d {
        if summary.d != Some(d) {
            return Err(Failure::verify(format!(
                "minimum distance is {}, expected {d}; certificate: dependent columns {:?}",
                summary.d.map_or("undefined".into(), |x| x.to_string()),
                cert.witness
            )));
        }
    }
    if let Some(r) = expect_r {
        if summary.r != r {
            return Err(Failure::verify(format!("locality is {}, expected {r}", summary.r)));
        }
    }
    Ok(if json { to_json(&summary.json()) } else { summary.line() })
}

fn bounds(family: Family, q_min: u64, q_max: u64, csv: bool, json: bool) -> Outcome {
    if q_min > q_max {
        return Err(Failure::usage("--q-min exceeds --q-max"));
    }
    let reports: Vec<BoundReport> = (q_min.max(2)..=q_max)
        .filter(|&q| prime_power(q).is_some())
        .map(|q| bound_suite(q, family).expect("prime power"))
        .collect();
    if json {
        return Ok(to_json(&reports));
    }
    let mut s = String::new();
    if csv {
        writeln!(s, "{}", BoundReport::CSV_HEADER).unwrap();
        for r in &reports {
            writeln!(s, "{}", r.csv_row()).unwrap();
        }
        return Ok(s);
    }
    let cell = |v: Option<u64>| v.map_or("-".to_string(), |x| x.to_string());
    match family {
        Family::D6R3 => {
            writeln!(s, "{:>6} {:>10} {:>10}", "q", "basic", "johnson").unwrap();
            for r in &reports {
                writeln!(s, "{:>6} {:>10} {:>10}", r.q, cell(r.basic_bound), cell(r.johnson_bound)).unwrap();
            }
        }
        Family::D7R2 => {
            writeln!(s, "{:>6} {:>12} {:>10} {:>10}", "q", "equivalence", "spread", "sunflower").unwrap();
            for r in &reports {
                writeln!(
                    s,
                    "{:>6} {:>12} {:>10} {:>10}",
                    r.q,
                    cell(r.equivalence_bound),
                    cell(r.spread_guarantee),
                    cell(r.sunflower_guarantee)
                )
                .unwrap();
            }
        }
    }
    Ok(s)
}

fn search(family: Family, q: u64, budget: u64, cert: Option<PathBuf>, json: bool) -> Outcome {
    let f = field_for(q)?;
    let res = exhaustive_max(family, &f, budget).map_err(|e| Failure::verify(e.to_string()))?;
    let cert_text =
        if json { to_json(&ConfigRecord::from_config(&res.certificate)) } else { write_config(&res.certificate) };
    let mut s = if json {
        to_json(&json!({ "summary": res.summary(), "certificate": ConfigRecord::from_config(&res.certificate) }))
    } else {
        format!(
            "family={} q={} best_ell={} n={} exhausted={} nodes={}\n",
            family,
            q,
            res.best_ell,
            res.best_ell * if family == Family::D6R3 { 4 } else { 3 },
            if res.exhausted { "yes" } else { "no" },
            res.nodes
        )
    };
    match &cert {
        Some(path) => write_file(path, &cert_text)?,
        None if !json => s.push_str(&cert_text),
        None => {}
    }
    if !res.exhausted {
        print!("{s}");
        return Err(Failure {
            code: EXIT_BUDGET,
            message: format!("node budget {budget} exhausted; result is partial"),
        });
    }
    Ok(s)
}

fn repair_demo(path: &Path, erase: &[usize], seed: u64) -> Outcome {
    let code = load_code(path)?;
    let n = code.n();
    if let Some(&bad) = erase.iter().find(|&&i| i >= n) {
        return Err(Failure::usage(format!("position {bad} is outside 0..{n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = code.field().order();
    let message: Vec<u32> = (0..code.k()).map(|_| rng.gen_range(0..q)).collect();
    let word = code.encode(&message)?;
    let mut received: Vec<Option<u32>> = word.iter().copied().map(Some).collect();
    let mut erased: Vec<usize> = erase.to_vec();
    erased.sort_unstable();
    erased.dedup();
    for &i in &erased {
        received[i] = None;
    }
    let mut s = String::new();
    writeln!(s, "seed={seed} n={n} k={} r={} erased={}", code.k(), code.r(), join(&erased)).unwrap();
    let mut repaired = received.clone();
    let mut pending = Vec::new();
    for &pos in &erased {
        match code.local_repair(&received, pos) {
            Ok(rep) => {
                writeln!(
                    s,
                    "pos={pos} mode=local reads={} from={} value={}",
                    rep.reads.len(),
                    join(&rep.reads),
                    rep.value
                )
                .unwrap();
                repaired[pos] = Some(rep.value);
            }
            Err(LrcError::UnrepairableLocally { .. }) => pending.push(pos),
            Err(e) => return Err(e.into()),
        }
    }
    if !pending.is_empty() {
        let full = code.erasure_decode(&received)?;
        let reads = n - erased.len();
        for &pos in &pending {
            writeln!(s, "pos={pos} mode=global reads={reads} value={}", full[pos]).unwrap();
            repaired[pos] = Some(full[pos]);
        }
    }
    let ok = repaired.iter().zip(&word).all(|(a, b)| *a == Some(*b));
    if !ok {
        print!("{s}");
        return Err(Failure::verify("repaired=FAILED"));
    }
    s.push_str("repaired=ok\n");
    Ok(s)
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn field_table(q: u64, table: Table) -> Outcome {
    if q > 64 {
        return Err(Failure::usage("tables are limited to q <= 64"));
    }
    let f = field_for(q)?;
    let (name, op): (&str, fn(&Field, u32, u32) -> u32) = match table {
        Table::Add => ("addition", Field::add),
        Table::Mul => ("multiplication", Field::mul),
    };
    let w = (q - 1).to_string().len();
    let mut s = format!("# GF({q}) {name}, modulus {}\n", f.modulus_string());
    for a in f.elements() {
        let row: Vec<String> = f.elements().map(|b| format!("{:>w$}", op(&f, a, b))).collect();
        writeln!(s, "{}", row.join(" ")).unwrap();
    }
    Ok(s)
}
