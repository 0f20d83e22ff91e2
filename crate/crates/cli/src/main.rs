//! `bogomolov` command-line tool. Reports are JSON on standard output;
//! warnings and cache notices go to standard error.

mod cache;
mod cli;
mod run;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use bogomolov::Error;
use clap::Parser;
use serde_json::{json, Map, Value};

use cache::Cache;
use cli::{CacheAction, Cli, Command, SchemaName};
use run::{Request, Settings};

const SCHEMAS: [(SchemaName, &str); 5] = [
    (SchemaName::GroupSpec, include_str!("../schemas/group-spec.schema.json")),
    (SchemaName::LatticeSpec, include_str!("../schemas/lattice-spec.schema.json")),
    (SchemaName::Report, include_str!("../schemas/report.schema.json")),
    (SchemaName::Certificate, include_str!("../schemas/certificate.schema.json")),
    (SchemaName::TateReport, include_str!("../schemas/tate-report.schema.json")),
];

fn engine() -> Value {
    json!({ "name": "bogomolov", "version": bogomolov::VERSION })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Input(_) => 2,
        Error::SizeCap(_) => 3,
        Error::Internal(_) => 1,
    }
}

fn error_body(e: &Error) -> Map<String, Value> {
    let kind = match e {
        Error::Input(_) => "input",
        Error::SizeCap(_) => "size-cap",
        Error::Internal(_) => "internal",
    };
    let mut m = Map::new();
    m.insert("error".into(), json!({ "kind": kind, "message": e.to_string() }));
    m
}

fn emit(command: &str, request: Option<Value>, body: Map<String, Value>, volatile: Value) {
    let mut out = Map::new();
    out.insert("command".into(), json!(command));
    out.insert("engine".into(), engine());
    if let Some(r) = request {
        out.insert("request".into(), r);
    }
    out.extend(body);
    out.insert("volatile".into(), volatile);
    let text = serde_json::to_string_pretty(&Value::Object(out)).expect("report serializes");
    write_stdout(&format!("{text}\n"));
}

/// Writes to stdout, tolerating a closed pipe (e.g. `| head`).
fn write_stdout(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}

fn cache_command(cli: &Cli, action: CacheAction) -> Result<Map<String, Value>, Error> {
    let dir = cli
        .cache_dir
        .clone()
        .ok_or_else(|| Error::Input("no cache directory (use --cache-dir or BOGOMOLOV_CACHE_DIR)".into()))?;
    let cache = Cache::new(dir);
    let io = |e: std::io::Error| Error::Input(format!("cache directory {}: {e}", cache.dir().display()));
    let mut m = Map::new();
    match action {
        CacheAction::Stats => {
            let (entries, bytes) = cache.stats().map_err(io)?;
            m.insert("cache".into(), json!({ "entries": entries, "bytes": bytes }));
        }
        CacheAction::Clear => {
            let removed = cache.clear().map_err(io)?;
            m.insert("cache".into(), json!({ "removed": removed }));
        }
    }
    m.insert("outcome".into(), json!("success"));
    Ok(m)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(name) = cli.json_schema {
        let text = SCHEMAS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t).expect("every schema is bundled");
        write_stdout(text);
        return ExitCode::SUCCESS;
    }
    let Some(command) = &cli.command else {
        eprintln!("error: a subcommand is required (see --help)");
        return ExitCode::from(2);
    };
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("warning: could not configure {} threads: {e}", cli.threads);
        }
    }
    let threads = rayon::current_num_threads();
    let start = Instant::now();
    let volatile = |cache: &str| {
        json!({
            "elapsed_ms": start.elapsed().as_secs_f64() * 1000.0,
            "threads": threads,
            "cache": cache,
        })
    };

    if let Command::Cache { action } = command {
        let name = format!("cache {}", if *action == CacheAction::Stats { "stats" } else { "clear" });
        return match cache_command(&cli, *action) {
            Ok(body) => {
                emit(&name, None, body, volatile("disabled"));
                ExitCode::SUCCESS
            }
            Err(e) => {
                emit(&name, None, error_body(&e), volatile("disabled"));
                ExitCode::from(exit_code(&e))
            }
        };
    }

    let settings = Settings { engine_cap: cli.engine_cap, reduce: !cli.no_subgroup_reduction };
    let request = match Request::resolve(command) {
        Ok(r) => r,
        Err(e) => {
            emit("invalid", None, error_body(&e), volatile("disabled"));
            return ExitCode::from(exit_code(&e));
        }
    };
    let canonical = request.canonical(settings);
    let key = cache::key_for(&canonical);
    let cache = cli.cache_dir.clone().map(Cache::new);

    if let Some(c) = &cache {
        if let Some(stored) = c.get(&key) {
            eprintln!("cache: hit {key}");
            let body = stored.as_object().cloned().unwrap_or_default();
            let ok = body.get("outcome").and_then(Value::as_str) == Some("success");
            emit(request.name(), Some(canonical), body, volatile("hit"));
            return if ok { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    }

    match request.execute(settings) {
        Ok(body) => {
            let ok = body.get("outcome").and_then(Value::as_str) == Some("success");
            let status = match &cache {
                None => "disabled",
                Some(c) => match c.put(&key, &Value::Object(body.clone())) {
                    Ok(()) => "miss",
                    Err(e) => {
                        eprintln!(
                            "warning: cache directory {} is not writable ({e}); continuing uncached",
                            c.dir().display()
                        );
                        "unwritable"
                    }
                },
            };
            emit(request.name(), Some(canonical), body, volatile(status));
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            emit(request.name(), Some(canonical), error_body(&e), volatile("disabled"));
            ExitCode::from(exit_code(&e))
        }
    }
}
