//! Command-line interface: pipeline orchestration (build, enrich, stats,
//! export, import) and the human query commands (lookup, rel, common, diff,
//! thesaurus, examples), batch or as a REPL. Exit codes: 1 usage, 2 data,
//! 3 internal.

use std::io::{BufRead, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lexframe::build::{build_all, DEFAULT_PROMOTION_THRESHOLD};
use lexframe::defparser::compile_hierarchy;
use lexframe::enrich::{enrich_all, kb_stats};
use lexframe::frame::{export_snapshot, import_snapshot, KnowledgeBase};
use lexframe::infer::{
    declare_default_triples, declare_triple, parse_rules_file, QueryOptions, RuleSet,
};
use lexframe::ingest::parse_lexicon;
use lexframe::query::{
    cmd_common, cmd_diff, cmd_examples, cmd_lookup, cmd_rel, cmd_stats, cmd_thesaurus, QueryResult,
};

const RULES_ENV: &str = "LEXFRAME_RULES";

#[derive(Parser)]
#[command(
    name = "lexframe",
    version,
    about = "Dictionary knowledge base: build, enrich, query"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ingest a lexicon, parse definitions, and write a snapshot.
    Build {
        #[arg(long)]
        lexicon: PathBuf,
        #[arg(long)]
        patterns: PathBuf,
        /// Promotion threshold for definitory-to-relational certainties.
        #[arg(long, default_value_t = DEFAULT_PROMOTION_THRESHOLD)]
        threshold: f64,
        /// Extra composition triples to store in the base.
        #[arg(long)]
        rules: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run the enrichment passes over a snapshot.
    Enrich {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also write the report as sorted-key JSON to this path.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Print knowledge-base statistics.
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Validate a snapshot and print its canonical bytes.
    Export {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Read a snapshot from stdin, validate, and write it canonically.
    Import {
        #[arg(long)]
        out: PathBuf,
    },
    /// List the senses of a word.
    Lookup {
        word: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Query a relation on a concept, optionally with deduction.
    Rel {
        reference: String,
        relation: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        deduce: bool,
        #[arg(long, default_value_t = 8)]
        depth: u32,
        #[arg(long)]
        no_inherit: bool,
        #[arg(long)]
        rules: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Relation-value pairs two concepts share.
    Common {
        left: String,
        right: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Relation-value pairs holding on exactly one of two concepts.
    Diff {
        left: String,
        right: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Breadth-first relational neighborhood of a concept.
    Thesaurus {
        reference: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        hops: u32,
        #[arg(long)]
        json: bool,
    },
    /// Phrasal concepts using a concept: its virtual usage examples.
    Examples {
        reference: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Interactive session over a snapshot; one command per line.
    Repl {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        rules: Option<PathBuf>,
    },
}

enum CliError {
    Data(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Data(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Data(m) => m,
            CliError::Internal(m) => m,
        }
    }
}

fn data<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Data(e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits 2 on usage errors by default; the contract is 1
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    String::from_utf8(read_file(path)?)
        .map_err(|_| CliError::Data(format!("{}: not UTF-8", path.display())))
}

fn load_kb(path: &Path) -> Result<KnowledgeBase, CliError> {
    let bytes = read_file(path)?;
    let mut kb = import_snapshot(&bytes).map_err(data)?;
    kb.freeze();
    Ok(kb)
}

fn load_rules(kb: &KnowledgeBase, explicit: Option<&Path>) -> Result<RuleSet, CliError> {
    let path: Option<PathBuf> = match explicit {
        Some(p) => Some(p.to_path_buf()),
        None => std::env::var(RULES_ENV).ok().map(PathBuf::from),
    };
    match path {
        None => Ok(RuleSet::default()),
        Some(path) => {
            let rules = parse_rules_file(&read_text(&path)?).map_err(data)?;
            rules.validate(kb).map_err(data)?;
            Ok(rules)
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn emit(result: &QueryResult, json: bool) {
    if json {
        println!("{}", result.to_json());
    } else {
        print!("{}", result.to_text());
    }
}

fn to_sorted_json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    let v = serde_json::to_value(value).map_err(|e| CliError::Internal(e.to_string()))?;
    serde_json::to_string_pretty(&v).map_err(|e| CliError::Internal(e.to_string()))
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Build {
            lexicon,
            patterns,
            threshold,
            rules,
            out,
            json,
        } => {
            if !(0.0..=1.0).contains(&threshold) {
                return Err(CliError::Data("--threshold must lie in [0, 1]".into()));
            }
            let records = parse_lexicon(&read_file(&lexicon)?).map_err(data)?;
            let hierarchy = compile_hierarchy(&read_text(&patterns)?).map_err(data)?;
            let (mut kb, report) = build_all(&records, &hierarchy, threshold)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            declare_default_triples(&mut kb).map_err(data)?;
            if let Some(rules_path) = rules {
                let extra = parse_rules_file(&read_text(&rules_path)?).map_err(data)?;
                extra.validate(&kb).map_err(data)?;
                for t in &extra.triples {
                    declare_triple(&mut kb, &t.r1, &t.r2, &t.r3).map_err(data)?;
                }
            }
            write_file(&out, &export_snapshot(&kb))?;
            if json {
                println!("{}", to_sorted_json(&report)?);
            } else {
                print!("{}", report.to_text());
            }
            Ok(())
        }
        Command::Enrich {
            input,
            out,
            report,
            json,
        } => {
            let bytes = read_file(&input)?;
            let mut kb = import_snapshot(&bytes).map_err(data)?;
            let enrichment = enrich_all(&mut kb).map_err(|e| CliError::Internal(e.to_string()))?;
            write_file(&out, &export_snapshot(&kb))?;
            if let Some(report_path) = report {
                write_file(
                    &report_path,
                    format!("{}\n", to_sorted_json(&enrichment)?).as_bytes(),
                )?;
            }
            if json {
                println!("{}", to_sorted_json(&enrichment)?);
            } else {
                print!("{}", enrichment.to_text());
            }
            Ok(())
        }
        Command::Stats { input, json } => {
            let kb = load_kb(&input)?;
            let stats = kb_stats(&kb);
            if json {
                println!("{}", to_sorted_json(&stats)?);
            } else {
                println!("{}", stats.to_text());
            }
            Ok(())
        }
        Command::Export { input } => {
            let bytes = read_file(&input)?;
            let kb = import_snapshot(&bytes).map_err(data)?;
            std::io::stdout()
                .write_all(&export_snapshot(&kb))
                .map_err(|e| CliError::Internal(e.to_string()))
        }
        Command::Import { out } => {
            let mut bytes = Vec::new();
            std::io::stdin()
                .read_to_end(&mut bytes)
                .map_err(|e| CliError::Data(e.to_string()))?;
            let kb = import_snapshot(&bytes).map_err(data)?;
            write_file(&out, &export_snapshot(&kb))
        }
        Command::Lookup { word, input, json } => {
            let kb = load_kb(&input)?;
            emit(&cmd_lookup(&kb, &word), json);
            Ok(())
        }
        Command::Rel {
            reference,
            relation,
            input,
            deduce,
            depth,
            no_inherit,
            rules,
            json,
        } => {
            let kb = load_kb(&input)?;
            let rules = load_rules(&kb, rules.as_deref())?;
            let opts = QueryOptions {
                deduce,
                depth_limit: depth,
                inherit: !no_inherit,
            };
            let result = cmd_rel(&kb, &reference, &relation, opts, &rules).map_err(data)?;
            emit(&result, json);
            Ok(())
        }
        Command::Common {
            left,
            right,
            input,
            json,
        } => {
            let kb = load_kb(&input)?;
            emit(&cmd_common(&kb, &left, &right).map_err(data)?, json);
            Ok(())
        }
        Command::Diff {
            left,
            right,
            input,
            json,
        } => {
            let kb = load_kb(&input)?;
            emit(&cmd_diff(&kb, &left, &right).map_err(data)?, json);
            Ok(())
        }
        Command::Thesaurus {
            reference,
            input,
            hops,
            json,
        } => {
            let kb = load_kb(&input)?;
            emit(&cmd_thesaurus(&kb, &reference, hops).map_err(data)?, json);
            Ok(())
        }
        Command::Examples {
            reference,
            input,
            json,
        } => {
            let kb = load_kb(&input)?;
            emit(&cmd_examples(&kb, &reference).map_err(data)?, json);
            Ok(())
        }
        Command::Repl { input, rules } => {
            let kb = load_kb(&input)?;
            let rules = load_rules(&kb, rules.as_deref())?;
            repl(&kb, &rules)
        }
    }
}

/// One query command, shared verbatim between batch flags and REPL lines.
fn run_query_line(
    kb: &KnowledgeBase,
    rules: &RuleSet,
    line: &str,
) -> Result<Option<String>, String> {
    let tokens = split_quoted(line)?;
    if tokens.is_empty() {
        return Ok(Some(String::new()));
    }
    let json = tokens.iter().any(|t| t == "--json");
    let mut args: Vec<&str> = Vec::new();
    let mut deduce = false;
    let mut no_inherit = false;
    let mut depth: u32 = 8;
    let mut hops: u32 = 2;
    let mut iter = tokens.iter().map(String::as_str);
    let command = iter.next().unwrap();
    while let Some(token) = iter.next() {
        match token {
            "--json" => {}
            "--deduce" => deduce = true,
            "--no-inherit" => no_inherit = true,
            "--depth" => {
                depth = iter
                    .next()
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| "--depth needs a number".to_string())?;
            }
            "--hops" => {
                hops = iter
                    .next()
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| "--hops needs a number".to_string())?;
            }
            other if other.starts_with("--") => return Err(format!("unknown flag {other}")),
            other => args.push(other),
        }
    }
    let want = |n: usize| -> Result<(), String> {
        if args.len() == n {
            Ok(())
        } else {
            Err(format!("`{command}` takes {n} argument(s)"))
        }
    };
    let render = |r: QueryResult| {
        if json {
            format!("{}\n", r.to_json())
        } else {
            r.to_text()
        }
    };
    let result = match command {
        "quit" | "exit" => return Ok(None),
        "help" => Ok(HELP.to_string()),
        "stats" => {
            want(0)?;
            Ok(render(cmd_stats(kb)))
        }
        "lookup" => {
            want(1)?;
            Ok(render(cmd_lookup(kb, args[0])))
        }
        "rel" => {
            want(2)?;
            let opts = QueryOptions {
                deduce,
                depth_limit: depth,
                inherit: !no_inherit,
            };
            cmd_rel(kb, args[0], args[1], opts, rules)
                .map(render)
                .map_err(|e| e.to_string())
        }
        "common" => {
            want(2)?;
            cmd_common(kb, args[0], args[1])
                .map(render)
                .map_err(|e| e.to_string())
        }
        "diff" => {
            want(2)?;
            cmd_diff(kb, args[0], args[1])
                .map(render)
                .map_err(|e| e.to_string())
        }
        "thesaurus" => {
            want(1)?;
            cmd_thesaurus(kb, args[0], hops)
                .map(render)
                .map_err(|e| e.to_string())
        }
        "examples" => {
            want(1)?;
            cmd_examples(kb, args[0])
                .map(render)
                .map_err(|e| e.to_string())
        }
        other => Err(format!("unknown command `{other}` (try `help`)")),
    };
    result.map(Some)
}

const HELP: &str = "\
commands:
  lookup <word>
  rel <ref> <relation> [--deduce] [--depth N] [--no-inherit]
  common <ref1> <ref2>
  diff <ref1> <ref2>
  thesaurus <ref> [--hops N]
  examples <ref>
  stats
  quit
flags may include --json; quote multi-word references: rel \"géranium I 1\" OBJECTIF
";

fn repl(kb: &KnowledgeBase, rules: &RuleSet) -> Result<(), CliError> {
    let stdin = std::io::stdin();
    for line in stdin.lock().lines() {
        let line = line.map_err(|e| CliError::Data(e.to_string()))?;
        match run_query_line(kb, rules, &line) {
            Ok(Some(output)) => print!("{output}"),
            Ok(None) => break,
            Err(message) => eprintln!("error: {message}"),
        }
    }
    Ok(())
}

/// Split a command line into tokens, honoring double quotes.
fn split_quoted(line: &str) -> Result<Vec<String>, String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut in_quotes = false;
    let mut pending = false;
    for c in line.chars() {
        match c {
            '"' => {
                in_quotes = !in_quotes;
                pending = true;
            }
            c if c.is_whitespace() && !in_quotes => {
                if pending {
                    tokens.push(std::mem::take(&mut current));
                    pending = false;
                }
            }
            c => {
                current.push(c);
                pending = true;
            }
        }
    }
    if in_quotes {
        return Err("unterminated quote".into());
    }
    if pending {
        tokens.push(current);
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::split_quoted;

    #[test]
    fn quoted_references_stay_whole() {
        assert_eq!(
            split_quoted("rel \"géranium I 1\" OBJECTIF --deduce").unwrap(),
            vec!["rel", "géranium I 1", "OBJECTIF", "--deduce"]
        );
        assert!(split_quoted("rel \"broken").is_err());
        assert_eq!(split_quoted("").unwrap(), Vec::<String>::new());
        assert_eq!(split_quoted("lookup \"\"").unwrap(), vec!["lookup", ""]);
    }
}
