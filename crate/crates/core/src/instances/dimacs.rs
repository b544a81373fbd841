use super::{CnfFormula, Literal};
use crate::error::{Error, Result};

/// Reads DIMACS CNF. Comment lines (`c`) and `%` terminators are skipped;
/// clauses may span lines.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let err = |line: usize, message: String| Error::Parse {
        line,
        column: 1,
        message,
    };
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" || header.is_some() {
                return Err(err(line_no, format!("bad problem line `{line}`")));
            }
            let vars = parts[2]
                .parse()
                .map_err(|_| err(line_no, "bad variable count".into()))?;
            let cls = parts[3]
                .parse()
                .map_err(|_| err(line_no, "bad clause count".into()))?;
            header = Some((vars, cls));
            continue;
        }
        if header.is_none() {
            return Err(err(line_no, "clause before `p cnf` line".into()));
        }
        for tok in line.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| err(line_no, format!("bad literal `{tok}`")))?;
            match Literal::from_dimacs(lit) {
                Some(l) => current.push(l),
                None => clauses.push(std::mem::take(&mut current)),
            }
        }
    }
    if !current.is_empty() {
        clauses.push(current);
    }
    let (num_vars, expected) = header.ok_or_else(|| err(0, "missing `p cnf` line".into()))?;
    if clauses.len() != expected {
        return Err(err(
            0,
            format!(
                "header announces {expected} clauses, found {}",
                clauses.len()
            ),
        ));
    }
    CnfFormula::new(num_vars, clauses)
}

pub fn emit_dimacs(formula: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", formula.num_vars(), formula.clauses().len());
    for clause in formula.clauses() {
        for lit in clause {
            out.push_str(&lit.to_dimacs().to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_and_writes() {
        let text = "c example\np cnf 3 2\n1 2 3 0\n-1 2\n-3 0\n";
        let f = parse_dimacs(text).unwrap();
        assert_eq!(f.num_vars(), 3);
        assert_eq!(f.clauses().len(), 2);
        assert_eq!(f.clauses()[1][0], Literal::new(0, false));
        assert_eq!(parse_dimacs(&emit_dimacs(&f)).unwrap(), f);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_dimacs("1 2 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 2\n1 2 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 1\n1 x 0\n").is_err());
        assert!(parse_dimacs("p cnf 1 1\n2 0\n").is_err());
    }
}
