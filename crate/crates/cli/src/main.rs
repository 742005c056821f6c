use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use draftkit_cli::commands::{self, parse_priority, parse_quotas};
use draftkit_cli::{load, CommandOutput, DomainSpec, Envelope, RuleName, Settings, Status, VariantName, VerifyOptions};

#[derive(Parser)]
#[command(name = "draftkit", version, about = "Draft allocation rules, axiom audits and theorem reproduction")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Write the JSON report here
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for problem-level checks (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Constraint revisions allowed per search
    #[arg(long, global = true, default_value_t = draftkit_verifier::DEFAULT_BUDGET)]
    budget: u64,
    /// Omit timestamps and timings so reports are byte-reproducible
    #[arg(long, global = true)]
    no_timestamp: bool,
    /// Seed for random utility schemes and random rules
    #[arg(long, global = true, default_value_t = draftkit_verifier::theorems::DEFAULT_SEED)]
    seed: u64,
    /// Lift the universe-size caps
    #[arg(long = "i-know-this-is-huge", global = true)]
    huge: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run a rule on a problem file (TOML, or CSV by extension)
    Run {
        /// Problem document (.toml) or preference table (.csv)
        file: PathBuf,
        #[arg(long, value_enum, default_value = "draft")]
        rule: RuleName,
        /// Priority as agent ids, e.g. 2,1,3 (overrides the file)
        #[arg(long)]
        priority: Option<String>,
        /// Axioms to check at this instance, comma separated
        #[arg(long = "check", value_delimiter = ',')]
        axioms: Vec<String>,
        /// Model for CSV input (inferred from cutoffs otherwise)
        #[arg(long, value_enum)]
        variant: Option<VariantName>,
    },
    /// Check a rule against axioms over every problem of a domain
    Check {
        #[arg(long, value_enum, default_value = "draft")]
        rule: RuleName,
        /// Model the domain is drawn from
        #[arg(long, value_enum, default_value = "fixed")]
        variant: VariantName,
        /// Number of agents
        #[arg(long)]
        agents: usize,
        /// Size of the object universe; every nonempty subset is an available set
        #[arg(long)]
        objects: usize,
        /// Per-agent quotas for the quota model, e.g. 1,2,inf
        #[arg(long)]
        quotas: Option<String>,
        /// Priority as agent ids (default: ascending)
        #[arg(long)]
        priority: Option<String>,
        /// Axioms, comma separated (e.g. RP,EF1,EFF,RM; MSP and best-case also accepted)
        #[arg(long, value_delimiter = ',', required = true)]
        axioms: Vec<String>,
    },
    /// Reproduce results by id (T1..T8, T4-replay, P1..P4, L1, L2, L8, L9, TABLE1, or all)
    Verify {
        /// Driver ids, or `all`
        #[arg(required = true)]
        ids: Vec<String>,
        /// Override the number of agents where the driver allows it
        #[arg(long)]
        agents: Option<usize>,
        /// Override the universe size where the driver allows it
        #[arg(long)]
        objects: Option<usize>,
        /// Number of seeded random rules (default 1000)
        #[arg(long)]
        random_rules: Option<usize>,
        /// Number of seeded random utility schemes (default 100)
        #[arg(long)]
        random_schemes: Option<usize>,
    },
    /// Look for a profitable misreport by one agent
    Manipulate {
        /// Problem document (.toml) or preference table (.csv)
        file: PathBuf,
        /// Agent id or name
        #[arg(long)]
        agent: String,
        #[arg(long, value_enum, default_value = "draft")]
        rule: RuleName,
        /// Priority as agent ids (overrides the file)
        #[arg(long)]
        priority: Option<String>,
        /// Model for CSV input (inferred from cutoffs otherwise)
        #[arg(long, value_enum)]
        variant: Option<VariantName>,
    },
    /// Recover the priority of a rule from two-agent probes
    InferPriority {
        #[arg(long, value_enum, default_value = "draft-variable")]
        rule: RuleName,
        /// Number of agents
        #[arg(long)]
        agents: usize,
        /// Number of objects per probe universe
        #[arg(long, default_value_t = 3)]
        objects: usize,
        /// Priority the probed rule is built from (default: ascending)
        #[arg(long)]
        priority: Option<String>,
    },
}

fn dispatch(cmd: Command, s: &Settings) -> anyhow::Result<CommandOutput> {
    let with_priority = |mut l: draftkit_cli::Loaded, p: Option<String>| -> anyhow::Result<draftkit_cli::Loaded> {
        if let Some(p) = p {
            l.priority = parse_priority(&p)?;
        }
        Ok(l)
    };
    Ok(match cmd {
        Command::Run { file, rule, priority, axioms, variant } => {
            let l = with_priority(load(&file, variant)?, priority)?;
            commands::run(&l, rule, &axioms, s)?
        }
        Command::Check { rule, variant, agents, objects, quotas, priority, axioms } => {
            let quotas = quotas.as_deref().map(parse_quotas).transpose()?;
            let priority = priority.as_deref().map(parse_priority).transpose()?;
            let spec = DomainSpec { variant, agents, objects, quotas };
            commands::check_domain(&spec, rule, &axioms, priority, s)?
        }
        Command::Verify { ids, agents, objects, random_rules, random_schemes } => {
            commands::verify_ids(&ids, &VerifyOptions { agents, objects, random_rules, random_schemes }, s)?
        }
        Command::Manipulate { file, agent, rule, priority, variant } => {
            let l = with_priority(load(&file, variant)?, priority)?;
            commands::manipulate(&l, rule, &agent, s)?
        }
        Command::InferPriority { rule, agents, objects, priority } => {
            let priority = priority.as_deref().map(parse_priority).transpose()?;
            commands::infer(rule, agents, objects, priority, s)?
        }
    })
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let g = cli.global;
    if let Some(j) = g.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("draftkit: cannot start {j} workers: {e}");
            return ExitCode::from(Status::InputError.code() as u8);
        }
    }
    let settings = Settings { budget: g.budget, seed: g.seed, allow_huge: g.huge, timestamp: !g.no_timestamp };
    let out = match dispatch(cli.command, &settings) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("draftkit: {e}");
            return ExitCode::from(Status::InputError.code() as u8);
        }
    };
    print!("{}", out.text);
    // argv[0] varies with the install location
    let echo: Vec<String> = argv.into_iter().skip(1).collect();
    if let Some(path) = &g.out {
        let doc = Envelope::new(&echo, out.status, &out.json, settings.timestamp).to_json();
        if let Err(e) = std::fs::write(path, doc) {
            eprintln!("draftkit: cannot write {}: {e}", path.display());
            return ExitCode::from(Status::InputError.code() as u8);
        }
    }
    ExitCode::from(out.status.code() as u8)
}
