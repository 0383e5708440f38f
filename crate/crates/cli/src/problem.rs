//! Line-oriented problem files with `[system]`, `[functions]`, optional
//! `[operator]`, and `[tasks]` sections. `#` starts a comment line; matrix
//! rows are semicolon-separated expressions.

use std::collections::BTreeMap;

use efn_core::diffop::ScalarOperator;
use efn_core::diffsys::DiffSystem;
use efn_core::error::Error;
use efn_core::matrix::Matrix;
use efn_core::poly::Poly;
use efn_core::ratfun::RatFun;
use efn_core::EFunction;

use crate::espec::parse_efunction;
use crate::parse::{parse_poly_at, parse_ratfun_at};

#[derive(Debug, Clone)]
pub struct Task {
    pub name: String,
    pub params: BTreeMap<String, String>,
}

#[derive(Debug)]
pub struct ProblemFile {
    pub system: Option<DiffSystem>,
    pub functions: Vec<(String, EFunction)>,
    pub operator: Option<ScalarOperator>,
    pub tasks: Vec<Task>,
}

pub const TASK_NAMES: [&str; 8] = [
    "desing", "relations", "apparent", "sympow", "minop", "growth", "series", "check",
];

fn err(line: usize, message: &str) -> Error {
    Error::Parse {
        line,
        col: 1,
        message: message.to_string(),
    }
}

#[derive(PartialEq)]
enum Section {
    None,
    System,
    Functions,
    Operator,
    Tasks,
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, Error> {
    let mut section = Section::None;
    let mut system_rows: Vec<(usize, Vec<RatFun>)> = Vec::new();
    let mut functions: Vec<(String, EFunction)> = Vec::new();
    let mut operator: Option<ScalarOperator> = None;
    let mut tasks: Vec<Task> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line {
            "[system]" => {
                section = Section::System;
                continue;
            }
            "[functions]" => {
                section = Section::Functions;
                continue;
            }
            "[operator]" => {
                section = Section::Operator;
                continue;
            }
            "[tasks]" => {
                section = Section::Tasks;
                continue;
            }
            _ if line.starts_with('[') => {
                return Err(err(lineno, &format!("unknown section {line}")));
            }
            _ => {}
        }
        match section {
            Section::None => return Err(err(lineno, "content before any section header")),
            Section::System => {
                let row: Vec<RatFun> = line
                    .split(';')
                    .map(|cell| parse_ratfun_at(cell.trim(), 'z', lineno))
                    .collect::<Result<_, _>>()?;
                system_rows.push((lineno, row));
            }
            Section::Functions => {
                let (name, spec) = match line.split_once('=') {
                    // a recurrence spec contains '=' itself; only treat the
                    // first '=' as a name separator when the left side is a
                    // bare identifier
                    Some((lhs, rhs))
                        if !lhs.trim().is_empty()
                            && lhs.trim().chars().all(|c| c.is_alphanumeric() || c == '_') =>
                    {
                        (lhs.trim().to_string(), rhs.trim())
                    }
                    _ => (format!("f{}", functions.len() + 1), line),
                };
                let f = parse_efunction(spec, lineno)?.with_name(&name);
                functions.push((name, f));
            }
            Section::Operator => {
                if operator.is_some() {
                    return Err(err(lineno, "duplicate operator line"));
                }
                let coeffs: Vec<Poly> = line
                    .split(';')
                    .map(|cell| parse_poly_at(cell.trim(), 'z', lineno))
                    .collect::<Result<_, _>>()?;
                if coeffs.iter().all(Poly::is_zero) {
                    return Err(err(lineno, "operator must be nonzero"));
                }
                operator = Some(ScalarOperator::new(coeffs));
            }
            Section::Tasks => {
                let mut parts = line.split_whitespace();
                let name = parts.next().unwrap().to_string();
                if !TASK_NAMES.contains(&name.as_str()) {
                    return Err(err(lineno, &format!("unknown task '{name}'")));
                }
                let mut params = BTreeMap::new();
                for p in parts {
                    let Some((k, v)) = p.split_once('=') else {
                        return Err(err(lineno, &format!("task parameter '{p}' needs key=value")));
                    };
                    params.insert(k.to_string(), v.to_string());
                }
                tasks.push(Task { name, params });
            }
        }
    }

    let system = if system_rows.is_empty() {
        None
    } else {
        let n = system_rows.len();
        for (lineno, row) in &system_rows {
            if row.len() != n {
                return Err(err(
                    *lineno,
                    &format!("system row has {} entries, expected {n}", row.len()),
                ));
            }
        }
        let rows: Vec<Vec<RatFun>> = system_rows.into_iter().map(|(_, r)| r).collect();
        Some(DiffSystem::new(Matrix::from_rows(rows)))
    };

    if let Some(s) = &system {
        if !functions.is_empty() && functions.len() != s.dim() {
            return Err(err(
                1,
                &format!(
                    "dimension mismatch: system is {}x{} but there are {} functions",
                    s.dim(),
                    s.dim(),
                    functions.len()
                ),
            ));
        }
    }

    Ok(ProblemFile { system, functions, operator, tasks })
}
