//! Result tables as CSV.

use mrm_core::rational;
use serde::{Deserialize, Serialize};

use crate::files::FileError;

pub const HEADER: [&str; 6] = [
    "instance",
    "objective",
    "solver",
    "value",
    "runtime_ms",
    "seed",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRow {
    pub instance: String,
    pub objective: String,
    pub solver: String,
    /// An integer or `p/q`.
    pub value: String,
    pub runtime_ms: u64,
    pub seed: Option<u64>,
}

impl ResultRow {
    fn key(&self) -> (&str, &str, &str, Option<u64>, &str, u64) {
        (
            &self.instance,
            &self.objective,
            &self.solver,
            self.seed,
            &self.value,
            self.runtime_ms,
        )
    }
}

/// Header plus rows sorted by instance, objective, solver and seed.
pub fn emit_results_csv(rows: &[ResultRow]) -> String {
    let mut sorted: Vec<&ResultRow> = rows.iter().collect();
    sorted.sort_by(|a, b| a.key().cmp(&b.key()));
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(HEADER).expect("in-memory write");
    for r in sorted {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

pub fn parse_results_csv(text: &str) -> Result<Vec<ResultRow>, FileError> {
    let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| FileError::new("header", e))?;
    if header.iter().ne(HEADER) {
        return Err(FileError::new(
            "header",
            format!("expected {}", HEADER.join(",")),
        ));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.deserialize::<ResultRow>().enumerate() {
        let row = rec.map_err(|e| FileError::new(format!("row {}", i + 1), e))?;
        rational::parse(&row.value)
            .map_err(|e| FileError::new(format!("row {}.value", i + 1), e))?;
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(instance: &str, value: &str, seed: Option<u64>) -> ResultRow {
        ResultRow {
            instance: instance.into(),
            objective: "maxtb:rawlsian".into(),
            solver: "maxtb".into(),
            value: value.into(),
            runtime_ms: 0,
            seed,
        }
    }

    #[test]
    fn empty_is_header_only() {
        assert_eq!(
            emit_results_csv(&[]),
            "instance,objective,solver,value,runtime_ms,seed\n"
        );
    }

    #[test]
    fn golden_batch() {
        let rows = [
            row("b", "2/3", Some(1)),
            row("a", "1/1", None),
            row("b", "1/2", Some(0)),
        ];
        let text = emit_results_csv(&rows);
        assert_eq!(
            text,
            "instance,objective,solver,value,runtime_ms,seed\n\
             a,maxtb:rawlsian,maxtb,1/1,0,\n\
             b,maxtb:rawlsian,maxtb,1/2,0,0\n\
             b,maxtb:rawlsian,maxtb,2/3,0,1\n"
        );
        let back = parse_results_csv(&text).unwrap();
        assert_eq!(back.len(), 3);
        assert_eq!(
            rational::parse(&back[2].value).unwrap(),
            rational::ratio(2, 3)
        );
        assert_eq!(back[0].seed, None);
    }

    #[test]
    fn bad_header_rejected() {
        assert_eq!(parse_results_csv("a,b\n").unwrap_err().path, "header");
    }
}
