//! `run --config file.json`: a JSON object mirroring the flag set,
//! `{"command": "solve", "equation": "quadratic", "omega": 1.0, ...}`.
//! Keys become `--key value` arguments (booleans become bare flags), so
//! the config accepts exactly what the command line accepts.

use crate::output::{run, CliError, EXIT_OK};
use crate::RunArgs;
use clap::Parser;
use serde_json::Value;

fn value_to_argv(key: &str, value: &Value, argv: &mut Vec<String>) -> Result<(), CliError> {
    let flag = format!("--{}", key.replace('_', "-"));
    match value {
        Value::Bool(true) => argv.push(flag),
        Value::Bool(false) => {}
        Value::Number(n) => {
            argv.push(flag);
            argv.push(n.to_string());
        }
        Value::String(s) => {
            argv.push(flag);
            argv.push(s.clone());
        }
        _ => {
            return Err(CliError::usage(format!(
                "config field '{key}' must be a scalar"
            )))
        }
    }
    Ok(())
}

pub fn cmd_run(args: &RunArgs) -> u8 {
    run(|| {
        let text = std::fs::read_to_string(&args.config)
            .map_err(|e| CliError::usage(format!("cannot read config: {e}")))?;
        let root: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::usage(format!("invalid config JSON: {e}")))?;
        let obj = root
            .as_object()
            .ok_or_else(|| CliError::usage("config must be a JSON object"))?;
        let command = obj
            .get("command")
            .and_then(Value::as_str)
            .ok_or_else(|| CliError::usage("config needs a string 'command' field"))?;

        let mut argv: Vec<String> = vec!["anharmonic".into(), command.into()];
        for (key, value) in obj {
            if key == "command" {
                continue;
            }
            value_to_argv(key, value, &mut argv)?;
        }

        let cli = crate::Cli::try_parse_from(&argv)
            .map_err(|e| CliError::usage(format!("config does not parse: {e}")))?;
        match cli.command {
            crate::Command::Run(_) => Err(CliError::usage("config cannot nest 'run'")),
            crate::Command::Solve(a) => Ok(crate::commands::cmd_solve(&a)),
            crate::Command::Period(a) => Ok(crate::commands::cmd_period(&a)),
            crate::Command::Verify(a) => Ok(crate::commands::cmd_verify(&a)),
            crate::Command::Bounds(a) => Ok(crate::commands::cmd_bounds(&a)),
            crate::Command::Compare(a) => Ok(crate::commands::cmd_compare(&a)),
            crate::Command::Sweep(a) => Ok(crate::commands::cmd_sweep(&a)),
        }
        .map(|code| if code == EXIT_OK { EXIT_OK } else { code })
    })
}
