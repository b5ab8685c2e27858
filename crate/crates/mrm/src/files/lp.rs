//! Structural check of LP-format model text.

use super::FileError;

/// Row and variable counts of a checked model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LpSummary {
    pub rows: usize,
    pub binaries: usize,
    pub generals: usize,
}

const SECTIONS: [&str; 6] = [
    "Maximize",
    "Subject To",
    "Bounds",
    "Binaries",
    "Generals",
    "End",
];

fn check_row(row: &str, line: usize) -> Result<(), FileError> {
    let tokens: Vec<&str> = row.split_whitespace().collect();
    let at = || format!("line {line}");
    let Some((name, rest)) = tokens.split_first() else {
        return Err(FileError::new(at(), "empty row"));
    };
    if !name.ends_with(':') || name.len() < 2 {
        return Err(FileError::new(
            at(),
            format!("row name expected, found {name:?}"),
        ));
    }
    let [.., sense, rhs] = rest else {
        return Err(FileError::new(at(), "row has no sense and right-hand side"));
    };
    if !matches!(*sense, "<=" | ">=" | "=") {
        return Err(FileError::new(at(), format!("unknown sense {sense:?}")));
    }
    if rhs.parse::<i128>().is_err() {
        return Err(FileError::new(
            at(),
            format!("right-hand side {rhs:?} is not an integer"),
        ));
    }
    Ok(())
}

/// Checks section order, row shape and bound lines.
pub fn check_lp(text: &str) -> Result<LpSummary, FileError> {
    let mut next = 0;
    let mut section = "";
    let mut summary = LpSummary {
        rows: 0,
        binaries: 0,
        generals: 0,
    };
    let mut row: Option<(String, usize)> = None;
    for (i, line) in text.lines().enumerate() {
        let number = i + 1;
        if SECTIONS.contains(&line) {
            if SECTIONS.get(next) != Some(&line) {
                return Err(FileError::new(
                    format!("line {number}"),
                    format!("section {line:?} out of order"),
                ));
            }
            if let Some((r, at)) = row.take() {
                check_row(&r, at)?;
            }
            section = line;
            next += 1;
            continue;
        }
        let body = line
            .strip_prefix(' ')
            .ok_or_else(|| FileError::new(format!("line {number}"), "expected indentation"))?;
        match section {
            "Maximize" => {
                if !body.starts_with("obj:") && !line.starts_with("  ") {
                    return Err(FileError::new(
                        format!("line {number}"),
                        "objective expected",
                    ));
                }
            }
            "Subject To" => {
                if line.starts_with("  ") {
                    let Some((r, _)) = row.as_mut() else {
                        return Err(FileError::new(
                            format!("line {number}"),
                            "continuation without a row",
                        ));
                    };
                    r.push(' ');
                    r.push_str(body);
                } else {
                    if let Some((r, at)) = row.take() {
                        check_row(&r, at)?;
                    }
                    summary.rows += 1;
                    row = Some((body.to_string(), number));
                }
            }
            "Bounds" => {
                let t: Vec<&str> = body.split_whitespace().collect();
                if !matches!(t.as_slice(), [lo, "<=", _, "<=", hi] if lo.parse::<i128>().is_ok() && hi.parse::<i128>().is_ok())
                {
                    return Err(FileError::new(
                        format!("line {number}"),
                        "bound must read `lo <= var <= hi`",
                    ));
                }
            }
            "Binaries" | "Generals" => {
                if body.split_whitespace().count() != 1 {
                    return Err(FileError::new(
                        format!("line {number}"),
                        "one variable per line expected",
                    ));
                }
                if section == "Binaries" {
                    summary.binaries += 1;
                } else {
                    summary.generals += 1;
                }
            }
            _ => {
                return Err(FileError::new(
                    format!("line {number}"),
                    "text outside the model",
                ))
            }
        }
    }
    if next != SECTIONS.len() {
        return Err(FileError::new(
            "(document)",
            format!("missing section {:?}", SECTIONS[next]),
        ));
    }
    Ok(summary)
}
