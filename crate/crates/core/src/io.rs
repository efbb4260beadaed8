//! Text formats. Matrices and bases use the 4ti2 layout: a `rows cols`
//! header line followed by one line of space separated entries per row.
//! Summaries are written either as JSON or as a flat tab separated table.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::analysis::Summary;
use crate::error::{Error, Result};
use crate::fraction::ReplicateVector;
use crate::hilbert::{ConeSystem, HilbertBasis};
use crate::matrix::IntMatrix;

fn write_rows<'a, I, T>(rows: usize, cols: usize, iter: I) -> String
where
    I: Iterator<Item = &'a [T]>,
    T: std::fmt::Display + 'a,
{
    let mut out = format!("{rows} {cols}\n");
    for row in iter {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            write!(out, "{v}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn write_matrix(m: &IntMatrix) -> String {
    write_rows(m.rows(), m.cols(), m.row_iter())
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Splits a line into `(column, token)` pairs; columns are 1-based byte
/// offsets. Only single spaces separate tokens.
fn tokens(line: &str, lineno: usize) -> Result<Vec<(usize, &str)>> {
    if line.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut col = 1;
    for tok in line.split(' ') {
        if tok.is_empty() {
            return Err(parse_err(
                lineno,
                col,
                "expected a single space between entries",
            ));
        }
        out.push((col, tok));
        col += tok.len() + 1;
    }
    Ok(out)
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, column: usize) -> Result<T> {
    // Rust accepts a leading '+', the format does not.
    if tok.starts_with('+') {
        return Err(parse_err(line, column, format!("invalid integer `{tok}`")));
    }
    tok.parse()
        .map_err(|_| parse_err(line, column, format!("invalid integer `{tok}`")))
}

fn read_rows<T: std::str::FromStr>(text: &str) -> Result<(usize, usize, Vec<T>)> {
    let body = text
        .strip_suffix('\n')
        .ok_or_else(|| parse_err(text.lines().count().max(1), 1, "missing final newline"))?;
    let mut lines = body.split('\n').enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, 1, "empty input"))?;
    let head = tokens(header, 1)?;
    if head.len() != 2 {
        return Err(parse_err(1, 1, "header must be `<rows> <cols>`"));
    }
    let rows: usize = parse_num(head[0].1, 1, head[0].0)?;
    let cols: usize = parse_num(head[1].1, 1, head[1].0)?;
    let mut data = Vec::with_capacity(rows.saturating_mul(cols).min(1 << 24));
    let mut seen = 0;
    for (lineno, line) in lines {
        if line.ends_with('\r') {
            return Err(parse_err(lineno, line.len(), "CR line ending"));
        }
        if seen == rows {
            return Err(parse_err(lineno, 1, format!("more than {rows} rows")));
        }
        let toks = tokens(line, lineno)?;
        if toks.len() != cols {
            return Err(parse_err(
                lineno,
                1,
                format!("row has {} entries, expected {cols}", toks.len()),
            ));
        }
        for (col, tok) in toks {
            data.push(parse_num(tok, lineno, col)?);
        }
        seen += 1;
    }
    if seen != rows {
        return Err(Error::Dimension {
            expected: rows,
            found: seen,
        });
    }
    Ok((rows, cols, data))
}

pub fn read_matrix(text: &str) -> Result<IntMatrix> {
    let (rows, cols, data) = read_rows::<i64>(text)?;
    IntMatrix::new(rows, cols, data)
}

/// One element per row, in the canonical (sorted) order of the basis.
pub fn write_basis(basis: &HilbertBasis) -> String {
    write_fractions(basis.system().width(), basis.elements())
}

/// Any list of replicate vectors of length `width`, in the given order.
pub fn write_fractions(width: usize, fractions: &[ReplicateVector]) -> String {
    write_rows(fractions.len(), width, fractions.iter().map(|e| e.counts()))
}

/// Reads a basis file into its column count and rows, in file order.
pub fn read_elements(text: &str) -> Result<(usize, Vec<ReplicateVector>)> {
    let (rows, cols, data) = read_rows::<u32>(text)?;
    let mut elements = Vec::with_capacity(rows);
    if cols > 0 {
        for chunk in data.chunks(cols) {
            elements.push(ReplicateVector::new(chunk.to_vec())?);
        }
    }
    Ok((cols, elements))
}

/// Reads a basis file for `system`. Rows are sorted and deduplicated but
/// not otherwise checked; see [`HilbertBasis::verify`].
pub fn read_basis(text: &str, system: ConeSystem) -> Result<HilbertBasis> {
    let (cols, elements) = read_elements(text)?;
    if cols != system.width() {
        return Err(Error::Dimension {
            expected: system.width(),
            found: cols,
        });
    }
    HilbertBasis::from_elements(system, elements)
}

#[derive(Serialize, Deserialize)]
struct Cell<A, B> {
    #[serde(flatten)]
    key: CellKey<A, B>,
    count: usize,
}

#[derive(Serialize, Deserialize)]
struct CellKey<A, B> {
    row: A,
    column: B,
}

#[derive(Serialize, Deserialize)]
struct SummaryDoc {
    elements: usize,
    support_by_total: Vec<Cell<usize, u64>>,
    support_by_maxrep: Vec<Cell<usize, u32>>,
    maxrep_by_total: Vec<Cell<u32, u64>>,
}

fn cells<A: Copy, B: Copy>(map: &BTreeMap<(A, B), usize>) -> Vec<Cell<A, B>> {
    map.iter()
        .map(|(&(row, column), &count)| Cell {
            key: CellKey { row, column },
            count,
        })
        .collect()
}

fn uncells<A: Ord, B: Ord>(v: Vec<Cell<A, B>>) -> BTreeMap<(A, B), usize> {
    v.into_iter()
        .map(|c| ((c.key.row, c.key.column), c.count))
        .collect()
}

/// JSON rendering of a summary. Keys come out in a fixed order and the
/// cells of each table in ascending key order.
pub fn write_summary_json(summary: &Summary) -> String {
    let doc = SummaryDoc {
        elements: summary.elements,
        support_by_total: cells(&summary.support_total),
        support_by_maxrep: cells(&summary.support_maxrep),
        maxrep_by_total: cells(&summary.maxrep_total),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("summary serializes");
    s.push('\n');
    s
}

pub fn read_summary_json(text: &str) -> Result<Summary> {
    let doc: SummaryDoc =
        serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.column(), e.to_string()))?;
    Ok(Summary {
        elements: doc.elements,
        support_total: uncells(doc.support_by_total),
        support_maxrep: uncells(doc.support_by_maxrep),
        maxrep_total: uncells(doc.maxrep_by_total),
    })
}

const TSV_HEADER: &str = "table\trow\tcolumn\tcount";

/// Flat table, one line per nonzero cell:
/// `table<TAB>row<TAB>column<TAB>count`. The `elements` line carries the
/// number of summarized fractions with empty row and column fields.
pub fn write_summary_tsv(summary: &Summary) -> String {
    let mut out = format!("{TSV_HEADER}\nelements\t\t\t{}\n", summary.elements);
    for ((r, c), n) in &summary.support_total {
        writeln!(out, "support_by_total\t{r}\t{c}\t{n}").unwrap();
    }
    for ((r, c), n) in &summary.support_maxrep {
        writeln!(out, "support_by_maxrep\t{r}\t{c}\t{n}").unwrap();
    }
    for ((r, c), n) in &summary.maxrep_total {
        writeln!(out, "maxrep_by_total\t{r}\t{c}\t{n}").unwrap();
    }
    out
}

pub fn read_summary_tsv(text: &str) -> Result<Summary> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, h)) if h == TSV_HEADER => {}
        _ => return Err(parse_err(1, 1, "missing table header")),
    }
    let mut s = Summary::default();
    let mut saw_elements = false;
    for (lineno, line) in lines {
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 4 {
            return Err(parse_err(lineno, 1, "expected 4 tab separated fields"));
        }
        let col_of = |i: usize| 1 + f[..i].iter().map(|x| x.len() + 1).sum::<usize>();
        let count: usize = parse_num(f[3], lineno, col_of(3))?;
        match f[0] {
            "elements" => {
                s.elements = count;
                saw_elements = true;
            }
            "support_by_total" => {
                let key = (
                    parse_num(f[1], lineno, col_of(1))?,
                    parse_num(f[2], lineno, col_of(2))?,
                );
                s.support_total.insert(key, count);
            }
            "support_by_maxrep" => {
                let key = (
                    parse_num(f[1], lineno, col_of(1))?,
                    parse_num(f[2], lineno, col_of(2))?,
                );
                s.support_maxrep.insert(key, count);
            }
            "maxrep_by_total" => {
                let key = (
                    parse_num(f[1], lineno, col_of(1))?,
                    parse_num(f[2], lineno, col_of(2))?,
                );
                s.maxrep_total.insert(key, count);
            }
            other => return Err(parse_err(lineno, 1, format!("unknown table `{other}`"))),
        }
    }
    if !saw_elements {
        return Err(parse_err(1, 1, "missing elements line"));
    }
    Ok(s)
}

/// Human readable cross tabulation: one block per table, rows and columns
/// in ascending order, blank cells for zero counts.
pub fn render_summary(summary: &Summary) -> String {
    fn block<A: Ord + Copy + std::fmt::Display, B: Ord + Copy + std::fmt::Display>(
        out: &mut String,
        title: &str,
        map: &BTreeMap<(A, B), usize>,
    ) {
        let mut rows: Vec<A> = map.keys().map(|k| k.0).collect();
        rows.dedup();
        let mut cols: Vec<B> = map.keys().map(|k| k.1).collect();
        cols.sort();
        cols.dedup();
        writeln!(out, "{title}").unwrap();
        let mut line = format!("{:>8}", "");
        for c in &cols {
            write!(line, " {c:>6}").unwrap();
        }
        writeln!(out, "{line}").unwrap();
        for r in rows {
            let mut line = format!("{r:>8}");
            for c in &cols {
                match map.get(&(r, *c)) {
                    Some(n) => write!(line, " {n:>6}").unwrap(),
                    None => write!(line, " {:>6}", "").unwrap(),
                }
            }
            writeln!(out, "{}", line.trim_end()).unwrap();
        }
        out.push('\n');
    }
    let mut out = format!("elements {}\n\n", summary.elements);
    block(&mut out, "support \\ total", &summary.support_total);
    block(&mut out, "support \\ maxrep", &summary.support_maxrep);
    block(&mut out, "maxrep \\ total", &summary.maxrep_total);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_model_matrix;

    #[test]
    fn smallest_matrix() {
        let m = IntMatrix::new(1, 1, vec![0]).unwrap();
        assert_eq!(write_matrix(&m), "1 1\n0\n");
        assert_eq!(read_matrix("1 1\n0\n").unwrap(), m);
    }

    #[test]
    fn one_factor_model_matrix() {
        let m = build_model_matrix(1, 1).unwrap().to_int_matrix();
        assert_eq!(write_matrix(&m), "2 1\n-1\n1\n");
    }

    #[test]
    fn empty_matrices() {
        for text in ["0 0\n", "0 32\n", "3 0\n\n\n\n"] {
            let m = read_matrix(text).unwrap();
            assert_eq!(write_matrix(&m), text);
        }
    }

    #[test]
    fn oa52_matrix_file_has_table_header_and_rows() {
        let m = build_model_matrix(5, 2).unwrap().to_int_matrix();
        let text = write_matrix(&m);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 33);
        assert_eq!(lines[0], "32 15");
        // First point -----; last point +++++ has every monomial at +1.
        assert_eq!(lines[1], "-1 -1 1 -1 1 1 -1 1 1 1 -1 1 1 1 1");
        assert_eq!(lines[32], "1 1 1 1 1 1 1 1 1 1 1 1 1 1 1");
        assert_eq!(read_matrix(&text).unwrap(), m);
    }

    #[test]
    fn rejects_malformed() {
        let cases = [
            ("", 1, 1),
            ("1 2\n1 2", 2, 1),
            ("1 2\n1\n", 2, 1),
            ("1 2\n1 2 3\n", 2, 1),
            ("1 2\n1  2\n", 2, 3),
            ("1 2\n1 x\n", 2, 3),
            ("1 2\n1 +2\n", 2, 3),
            ("2\n", 1, 1),
            ("1 1\n1\n2\n", 3, 1),
        ];
        for (text, line, column) in cases {
            match read_matrix(text) {
                Err(Error::Parse {
                    line: l, column: c, ..
                }) => {
                    assert_eq!((l, c), (line, column), "{text:?}")
                }
                other => panic!("{text:?}: {other:?}"),
            }
        }
        assert!(matches!(
            read_matrix("2 1\n5\n"),
            Err(Error::Dimension {
                expected: 2,
                found: 1
            })
        ));
    }

    #[test]
    fn empty_basis() {
        let sys = ConeSystem::orthogonal_array(5, 2).unwrap();
        let b = HilbertBasis::from_elements(sys.clone(), Vec::new()).unwrap();
        assert_eq!(write_basis(&b), "0 32\n");
        assert_eq!(read_basis("0 32\n", sys).unwrap(), b);
    }

    #[test]
    fn basis_rows_are_written_sorted() {
        let sys = ConeSystem::orthogonal_array(2, 1).unwrap();
        let text = "2 4\n1 0 0 1\n0 1 1 0\n";
        let b = read_basis(text, sys.clone()).unwrap();
        assert_eq!(write_basis(&b), "2 4\n0 1 1 0\n1 0 0 1\n");
        assert!(matches!(
            read_basis("0 8\n", sys),
            Err(Error::Dimension {
                expected: 4,
                found: 8
            })
        ));
        assert!(read_elements("1 4\n1 -1 0 0\n").is_err());
    }

    fn sample_summary() -> Summary {
        let fr = |v: Vec<u32>| ReplicateVector::new(v).unwrap();
        Summary::from_fractions(&[
            fr(vec![1, 0, 0, 1]),
            fr(vec![0, 1, 1, 0]),
            fr(vec![2, 0, 0, 2]),
        ])
    }

    #[test]
    fn summary_json_round_trip() {
        let s = sample_summary();
        let text = write_summary_json(&s);
        assert_eq!(read_summary_json(&text).unwrap(), s);
        assert_eq!(write_summary_json(&read_summary_json(&text).unwrap()), text);
        assert!(text.starts_with("{\n  \"elements\": 3,\n  \"support_by_total\""));
    }

    #[test]
    fn summary_tsv_round_trip() {
        let s = sample_summary();
        let text = write_summary_tsv(&s);
        assert_eq!(
            text,
            "table\trow\tcolumn\tcount\n\
             elements\t\t\t3\n\
             support_by_total\t2\t2\t2\n\
             support_by_total\t2\t4\t1\n\
             support_by_maxrep\t2\t1\t2\n\
             support_by_maxrep\t2\t2\t1\n\
             maxrep_by_total\t1\t2\t2\n\
             maxrep_by_total\t2\t4\t1\n"
        );
        assert_eq!(read_summary_tsv(&text).unwrap(), s);
        assert!(read_summary_tsv("table\trow\tcolumn\tcount\nfoo\t1\t2\t3\n").is_err());
    }

    #[test]
    fn empty_summary_round_trips() {
        let s = Summary::default();
        assert_eq!(read_summary_json(&write_summary_json(&s)).unwrap(), s);
        assert_eq!(read_summary_tsv(&write_summary_tsv(&s)).unwrap(), s);
        assert_eq!(render_summary(&s).lines().next(), Some("elements 0"));
    }

    #[test]
    fn rendered_table_layout() {
        let text = render_summary(&sample_summary());
        assert!(text.contains("support \\ total\n              2      4\n       2      2      1\n"));
    }
}
