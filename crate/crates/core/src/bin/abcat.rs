use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use abcat::category::is_iso;
use abcat::constructions::{epi_mono_factorize, is_exact_pair, pullback, pushout};
use abcat::error::Error;
use abcat::gen::{GenConfig, Generator};
use abcat::io::{self, DiagramFile, DiagramKind, GeneratorInfo, Report};
use abcat::scalar::ScalarField;
use abcat::selftest;
use abcat::snake::{chase_delta, snake_sequence, DELTA_SIGN};
use abcat::squares::{analyze, decompose_semicartesian};

#[derive(Parser)]
#[command(name = "abcat", version, about = "Exact kernels, cokernels, semi-cartesian squares and the snake lemma")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Epi–mono factorization of one morphism.
    Factor {
        file: PathBuf,
        #[arg(long)]
        morphism: String,
    },
    /// Exactness of a pair `f, g`.
    CheckExact { file: PathBuf },
    /// Pullback of a cospan given as `--of c,d`.
    Pullback {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 1)]
        of: Vec<String>,
    },
    /// Pushout of a span given as `--of a,b`.
    Pushout {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 1)]
        of: Vec<String>,
    },
    /// Semi-cartesian analysis of a square.
    Square {
        file: PathBuf,
        #[arg(long)]
        decompose: bool,
    },
    /// Six-term sequence and connecting morphism.
    Snake {
        file: PathBuf,
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        oracle: bool,
    },
    /// Emit a random diagram file.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_parser = parse_field, default_value = "q")]
        field: ScalarField,
        #[arg(long, default_value_t = 5)]
        max_dim: usize,
    },
    /// Run every property suite.
    Selftest {
        #[arg(long, default_value_t = 200)]
        cases: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Restrict to one field; both GF(7) and Q by default.
        #[arg(long, value_parser = parse_field)]
        field: Option<ScalarField>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Pair,
    Square,
    Snake,
}

fn parse_field(text: &str) -> Result<ScalarField, String> {
    match text.to_ascii_lowercase().as_str() {
        "q" => Ok(ScalarField::Rationals),
        other => {
            let p = other
                .strip_prefix("gf:")
                .ok_or_else(|| format!("expected q or gf:P, got {text:?}"))?;
            let p: u64 = p.parse().map_err(|_| format!("bad prime {p:?}"))?;
            ScalarField::prime(p).map_err(|e| e.to_string())
        }
    }
}

enum Failure {
    Input(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

fn load(path: &PathBuf, kind: Option<DiagramKind>) -> Result<DiagramFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let file = io::parse(&text)?;
    if let Some(kind) = kind {
        if file.diagram.kind != kind {
            return Err(Error::Parse(format!(
                "expected a {kind:?} diagram, found {:?}",
                file.diagram.kind
            ))
            .into());
        }
    }
    Ok(file)
}

fn two_names(of: &[String]) -> Result<(&str, &str), Failure> {
    match of {
        [x, y] => Ok((x, y)),
        _ => Err(Error::Parse(format!("--of needs two morphism names, got {}", of.len())).into()),
    }
}

fn factor(file: &PathBuf, name: &str) -> Result<Report, Failure> {
    let d = load(file, None)?;
    let f = d.morphism(name)?;
    let fact = epi_mono_factorize(&f);
    let mut r = Report::default();
    r.derived("epi", "src", "image", &fact.epi_q);
    r.derived("mono", "image", "dst", &fact.mono_m);
    r.ranks.insert(name.into(), f.rank());
    r.verdict("reproduces", abcat::constructions::reproduces(&fact, &f));
    Ok(r)
}

fn check_exact(file: &PathBuf) -> Result<Report, Failure> {
    let d = load(file, Some(DiagramKind::Pair))?;
    let (f, g) = d.pair()?;
    let mut r = Report::default();
    r.ranks.insert("f".into(), f.rank());
    r.ranks.insert("g".into(), g.rank());
    let exact = is_exact_pair(&f, &g)?;
    if !exact {
        r.violations.push(format!(
            "rank f + rank g = {} but the middle object has dimension {} (g∘f zero: {})",
            f.rank() + g.rank(),
            f.dst().dim,
            abcat::category::compose(&g, &f)?.is_zero()
        ));
    }
    r.verdict("exact", exact);
    Ok(r)
}

fn pullback_cmd(file: &PathBuf, of: &[String]) -> Result<Report, Failure> {
    let d = load(file, None)?;
    let (cn, dn) = two_names(of)?;
    let (tc, td) = (d.endpoints(cn)?.1, d.endpoints(dn)?.1);
    if tc != td {
        return Err(Error::Parse(format!("{cn} ends at {tc} but {dn} ends at {td}")).into());
    }
    let pb = pullback(&d.morphism(cn)?, &d.morphism(dn)?)?;
    let mut r = Report::default();
    r.derived("f", "P", "B", &pb.f);
    r.derived("g", "P", "C", &pb.g);
    r.derived("n", "P", "B+C", &pb.n.ker_mor);
    Ok(r)
}

fn pushout_cmd(file: &PathBuf, of: &[String]) -> Result<Report, Failure> {
    let d = load(file, None)?;
    let (an, bn) = two_names(of)?;
    let (sa, sb) = (d.endpoints(an)?.0, d.endpoints(bn)?.0);
    if sa != sb {
        return Err(Error::Parse(format!("{an} starts at {sa} but {bn} starts at {sb}")).into());
    }
    let po = pushout(&d.morphism(an)?, &d.morphism(bn)?)?;
    let mut r = Report::default();
    r.derived("r", "B", "S", &po.r);
    r.derived("s", "C", "S", &po.s);
    r.derived("t", "B+C", "S", &po.t.coker_mor);
    Ok(r)
}

fn square(file: &PathBuf, decompose: bool) -> Result<Report, Failure> {
    let d = load(file, Some(DiagramKind::Square))?;
    let sq = d.square()?;
    let an = analyze(&sq)?;
    let mut r = Report::default();
    r.derived("e", "A", "P", &an.e);
    r.derived("m", "S", "D", &an.m);
    r.flag("cond_i", an.cond_i);
    r.flag("cond_ii", an.cond_ii);
    r.flag("cond_iii", an.cond_iii);
    r.flag("cond_iv", an.cond_iv);
    r.flag("cartesian", an.is_cartesian);
    r.flag("cocartesian", an.is_cocartesian);
    r.verdict("conditions_agree", an.conditions_agree());
    r.verdict("semicartesian", an.is_semicartesian);
    if decompose {
        match decompose_semicartesian(&sq) {
            Ok((k, l)) => {
                r.derived("k_top", "A", "I", &k.top);
                r.derived("k_bottom", "C", "J", &k.bottom);
                r.derived("middle", "I", "J", &k.right);
                r.derived("l_top", "I", "B", &l.top);
                r.derived("l_bottom", "J", "D", &l.bottom);
            }
            Err(Error::NotSemiCartesian) => {
                r.violations.push("only semi-cartesian squares decompose".into())
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(r)
}

fn snake(file: &PathBuf, trace: bool, oracle: bool) -> Result<Report, Failure> {
    let d = load(file, Some(DiagramKind::Snake))?;
    let input = d.snake()?;
    let out = snake_sequence(&input)?;
    let mut r = Report::default();
    r.derived("i", "Ker u", "A", &out.ker_u.ker_mor);
    r.derived("j", "Ker v", "B", &out.ker_v.ker_mor);
    r.derived("k", "Ker w", "C", &out.ker_w.ker_mor);
    r.derived("p", "A'", "Coker u", &out.coker_u.coker_mor);
    r.derived("q", "B'", "Coker v", &out.coker_v.coker_mor);
    r.derived("r", "C'", "Coker w", &out.coker_w.coker_mor);
    r.derived("s", "Ker u", "Ker v", &out.s);
    r.derived("t", "Ker v", "Ker w", &out.t);
    r.derived("delta", "Ker w", "Coker u", &out.delta);
    r.derived("x", "Coker u", "Coker v", &out.x);
    r.derived("y", "Coker v", "Coker w", &out.y);
    let rep = out.exact_report;
    r.verdict("exact_at_ker_v", rep.at_ker_v);
    r.verdict("exact_at_ker_w", rep.at_ker_w);
    r.verdict("exact_at_coker_u", rep.at_coker_u);
    r.verdict("exact_at_coker_v", rep.at_coker_v);
    r.verdict("naturality", out.naturality_holds(&input)?);
    r.flag("delta_iso", is_iso(&out.delta));
    if trace {
        let t = &out.trace;
        r.derived("trace_f", "P", "Ker w", &t.pb.f);
        r.derived("trace_m", "P", "B", &t.pb.g);
        r.derived("trace_z", "Z", "P", &t.z);
        r.derived("trace_l", "Z", "A", &t.l);
        r.derived("trace_g", "Coker u", "S", &t.po.r);
        r.derived("trace_n", "B'", "S", &t.po.s);
        r.derived("trace_h", "S", "H", &t.h);
        r.derived("trace_theta", "P", "S", &t.theta);
    }
    if oracle {
        let chase = chase_delta(&input)?;
        r.derived("chase_delta", "Ker w", "Coker u", &chase);
        let signed = chase.scale(&input.a.field().from_i64(DELTA_SIGN));
        r.verdict("oracle_agrees", signed == out.delta);
    }
    Ok(r)
}

fn gen(kind: GenKind, seed: u64, field: ScalarField, max_dim: usize) -> Result<String, Failure> {
    let cfg = GenConfig::new(seed, field).with_max_dim(max_dim);
    let mut g = Generator::new(cfg)?;
    let info = Some(GeneratorInfo::from_config(&cfg));
    let file = match kind {
        GenKind::Pair => {
            let (f, h) = g.exact_pair()?;
            io::pair_file(&f, &h, info)
        }
        GenKind::Square => io::square_file(&g.semicartesian()?, info),
        GenKind::Snake => io::snake_file(&g.snake_input()?, info),
    };
    Ok(io::serialize(&file))
}

fn emit(result: Result<Report, Failure>) -> ExitCode {
    match result {
        Ok(report) => {
            print!("{}", report.to_json());
            if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) }
        }
        Err(Failure::Input(e)) => input_error(e),
    }
}

fn input_error(e: Error) -> ExitCode {
    let report = Report { violations: vec![e.to_string()], ..Report::default() };
    print!("{}", report.to_json());
    eprintln!("abcat: {e}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Factor { file, morphism } => emit(factor(&file, &morphism)),
        Command::CheckExact { file } => emit(check_exact(&file)),
        Command::Pullback { file, of } => emit(pullback_cmd(&file, &of)),
        Command::Pushout { file, of } => emit(pushout_cmd(&file, &of)),
        Command::Square { file, decompose } => emit(square(&file, decompose)),
        Command::Snake { file, trace, oracle } => emit(snake(&file, trace, oracle)),
        Command::Gen { kind, seed, field, max_dim } => match gen(kind, seed, field, max_dim) {
            Ok(text) => {
                print!("{text}");
                ExitCode::SUCCESS
            }
            Err(Failure::Input(e)) => input_error(e),
        },
        Command::Selftest { cases, seed, field } => {
            let fields = field.map_or_else(selftest::default_fields, |f| vec![f]);
            let report = selftest::run_all(seed, cases, &fields, selftest::Execution::default());
            print!("{}", report.render());
            if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) }
        }
    }
}
