use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use icb::codegen::generate;
use icb::dialogue::{BotResponse, Engine};
use icb::metamodel::PlatformTarget;
use icb::model_store::{parse, serialize};
use icb::service::store::{write_artifacts, write_atomic};
use icb::service::transcript::{self, Turn};
use icb::service::{router, AppState, Workspace, WORKSPACE_ENV};
use icb::validator::validate;

#[derive(Parser)]
#[command(name = "icb", version, about = "Chat your way to a smart contract")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Interactive chat in the terminal.
    Chat {
        /// Record the conversation as a replayable transcript.
        #[arg(long)]
        transcript: Option<PathBuf>,
        /// Where generated files are written.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run the HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long, env = WORKSPACE_ENV, default_value = "icb-workspace")]
        workspace: PathBuf,
    },
    /// Compile a model file. Exit 1 on validation errors, 2 on syntax errors.
    Compile {
        model: PathBuf,
        /// Overrides the model's Platform line.
        #[arg(long)]
        platform: Option<PlatformTarget>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Replay a transcript and report turns that no longer match.
    Replay {
        transcript: PathBuf,
        /// Also write the generated files here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Chat { transcript, out } => chat(transcript.as_deref(), &out),
        Command::Serve {
            port,
            host,
            workspace,
        } => serve(&host, port, workspace),
        Command::Compile {
            model,
            platform,
            out,
        } => compile(&model, platform, &out),
        Command::Replay { transcript, out } => replay(&transcript, out.as_deref()),
    }
}

fn print_reply(reply: &BotResponse) {
    println!("bot> {}", reply.text);
    if !reply.suggestions.is_empty() {
        println!("     [{}]", reply.suggestions.join(" | "));
    }
}

fn chat(transcript_path: Option<&Path>, out: &Path) -> ExitCode {
    let engine = Engine::builtin();
    let mut session = engine.new_session();
    let mut turns: Vec<Turn> = Vec::new();
    print_reply(&engine.greeting());
    let stdin = io::stdin();
    loop {
        print!("you> ");
        let _ = io::stdout().flush();
        let mut line = String::new();
        match stdin.lock().read_line(&mut line) {
            Ok(0) => break,
            Ok(_) => {}
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::FAILURE;
            }
        }
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let before = session.state;
        let reply = match engine.handle_message(&mut session, line) {
            Ok(r) => r,
            Err(e) => {
                println!("bot> {e}");
                break;
            }
        };
        print_reply(&reply);
        turns.push(Turn::new(
            turns.len() as u64 + 1,
            line,
            &reply,
            before,
            session.state,
        ));
        if let Some(path) = transcript_path {
            if let Err(e) = write_atomic(path, transcript::render(&turns).as_bytes()) {
                eprintln!("error: cannot write {}: {e}", path.display());
            }
        }
        if !reply.artifacts.is_empty() {
            match write_artifacts(out, &reply.artifacts) {
                Ok(paths) => {
                    for p in paths {
                        println!("     wrote {}", p.display());
                    }
                }
                Err(e) => eprintln!("error: cannot write artifacts: {e}"),
            }
        }
        if session.state.is_terminal() {
            break;
        }
    }
    ExitCode::SUCCESS
}

fn serve(host: &str, port: u16, workspace: PathBuf) -> ExitCode {
    let rt = match tokio::runtime::Runtime::new() {
        Ok(rt) => rt,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    rt.block_on(async move {
        let ws = match Workspace::open(&workspace) {
            Ok(ws) => ws,
            Err(e) => {
                eprintln!("error: workspace {}: {e}", workspace.display());
                return ExitCode::FAILURE;
            }
        };
        let (state, skipped) = match AppState::restore(Arc::new(Engine::builtin()), ws) {
            Ok(x) => x,
            Err(e) => {
                eprintln!("error: cannot reload sessions: {e}");
                return ExitCode::FAILURE;
            }
        };
        for (dir, why) in &skipped {
            eprintln!("warning: not restoring {}: {why}", dir.display());
        }
        eprintln!(
            "restored {} session(s) from {}",
            state.session_count(),
            workspace.display()
        );
        let listener = match tokio::net::TcpListener::bind((host, port)).await {
            Ok(l) => l,
            Err(e) => {
                eprintln!("error: cannot bind {host}:{port}: {e}");
                return ExitCode::FAILURE;
            }
        };
        eprintln!("listening on http://{}", listener.local_addr().unwrap());
        let app = router(Arc::new(state));
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
        };
        match axum::serve(listener, app)
            .with_graceful_shutdown(shutdown)
            .await
        {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::FAILURE
            }
        }
    })
}

fn compile(path: &Path, platform: Option<PlatformTarget>, out: &Path) -> ExitCode {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return ExitCode::from(2);
        }
    };
    let mut model = match parse(&text) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("{}: {e}", path.display());
            return ExitCode::from(2);
        }
    };
    if platform.is_some() {
        model.platform = platform;
    }
    let violations = validate(&model);
    if !violations.is_empty() {
        for v in &violations {
            println!("{v}");
        }
        return ExitCode::from(1);
    }
    let target = model.platform.expect("validated models have a platform");
    let artifacts = match generate(&model, target) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    match write_artifacts(out, &artifacts) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn replay(path: &Path, out: Option<&Path>) -> ExitCode {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return ExitCode::from(2);
        }
    };
    let recorded = match transcript::parse(&text) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{}: {e}", path.display());
            return ExitCode::from(2);
        }
    };
    let engine = Engine::builtin();
    let report = match transcript::replay(&engine, "replay", &recorded) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    print!("{}", serialize(&report.session.model));
    if let Some(out) = out {
        if let Err(e) = write_artifacts(out, &report.artifacts) {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    }
    for m in &report.mismatches {
        eprintln!(
            "turn {}: recorded {:?} `{}`, replayed {:?} `{}`",
            m.turn,
            m.expected.reply.kind,
            m.expected.reply.text,
            m.actual.reply.kind,
            m.actual.reply.text
        );
    }
    if report.mismatches.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
