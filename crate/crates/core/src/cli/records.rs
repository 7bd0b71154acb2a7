//! CSV input and output for publication records, scores and samples.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::percentile::{PercentileScore, PublicationRecord};

pub const RECORD_COLUMNS: [&str; 4] = ["paper_id", "pub_year", "subject", "citations"];

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))
}

fn csv_error(e: csv::Error) -> Error {
    match e.kind() {
        csv::ErrorKind::Io(io) => Error::Io(io.to_string()),
        _ => Error::Validation(format!("malformed CSV: {e}")),
    }
}

/// Reads `paper_id,pub_year,subject,citations` rows (columns in any order).
/// Row numbers in errors count data rows from 1, excluding the header.
pub fn read_records_from<R: Read>(input: R) -> Result<Vec<PublicationRecord>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(input);
    let headers = reader.headers().map_err(csv_error)?.clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Ok(Vec::new());
    }
    let mut index = [0usize; 4];
    let mut missing = Vec::new();
    for (slot, name) in index.iter_mut().zip(RECORD_COLUMNS) {
        match headers.iter().position(|h| h == name) {
            Some(i) => *slot = i,
            None => missing.push(name),
        }
    }
    if !missing.is_empty() {
        return Err(Error::Validation(format!(
            "missing column(s) {}; expected header {}",
            missing.join(", "),
            RECORD_COLUMNS.join(",")
        )));
    }

    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row_no = i + 1;
        let row = row.map_err(|e| Error::Validation(format!("row {row_no}: {e}")))?;
        let field = |k: usize| row.get(index[k]).unwrap_or("");
        let pub_year: i32 = field(1).parse().map_err(|_| {
            Error::Validation(format!("row {row_no}: pub_year {:?} is not an integer year", field(1)))
        })?;
        let citations: u64 = field(3).parse().map_err(|_| {
            Error::Validation(format!(
                "row {row_no}: citations {:?} is not a nonnegative integer",
                field(3)
            ))
        })?;
        let record = PublicationRecord::new(field(0), pub_year, field(2), citations);
        record
            .validate()
            .map_err(|e| Error::Validation(format!("row {row_no}: {e}")))?;
        records.push(record);
    }
    Ok(records)
}

pub fn read_records(path: &Path) -> Result<Vec<PublicationRecord>> {
    read_records_from(open(path)?)
}

/// Writes records with the canonical header and LF line endings.
pub fn write_records<W: Write>(out: W, records: &[PublicationRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(RECORD_COLUMNS).map_err(csv_error)?;
    for r in records {
        w.write_record([
            r.paper_id.as_str(),
            &r.pub_year.to_string(),
            r.subject.as_str(),
            &r.citations.to_string(),
        ])
        .map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

pub fn write_scores<W: Write>(out: W, scores: &[PercentileScore]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(["paper_id", "subject", "pub_year", "inverted_percentile"]).map_err(csv_error)?;
    for s in scores {
        w.write_record([
            s.paper_id.as_str(),
            s.reference_key.subject.as_str(),
            &s.reference_key.pub_year.to_string(),
            &s.inverted_percentile.to_string(),
        ])
        .map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

/// Reads numbers separated by commas, whitespace or newlines. A non-numeric
/// first line is skipped as a header.
pub fn read_sample_from<R: Read>(mut input: R) -> Result<Vec<f64>> {
    let mut text = String::new();
    input.read_to_string(&mut text).map_err(|e| Error::Io(e.to_string()))?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let tokens: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        if i == 0 && tokens.iter().any(|t| t.parse::<f64>().is_err()) {
            continue;
        }
        for t in tokens {
            let v: f64 = t
                .parse()
                .map_err(|_| Error::Validation(format!("line {}: {t:?} is not a number", i + 1)))?;
            if !v.is_finite() {
                return Err(Error::Validation(format!("line {}: {t:?} is not finite", i + 1)));
            }
            values.push(v);
        }
    }
    Ok(values)
}

pub fn read_sample(path: &Path) -> Result<Vec<f64>> {
    read_sample_from(open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_well_formed_rows() {
        let text = "paper_id,pub_year,subject,citations\r\na,2001,Chem,4\r\nb,2001,Chem,0\r\nc,2002,Phys,17\r\n";
        let records = read_records_from(text.as_bytes()).unwrap();
        assert_eq!(records.len(), 3);
        assert_eq!(records[2], PublicationRecord::new("c", 2002, "Phys", 17));
    }

    #[test]
    fn negative_citations_name_the_row() {
        let text = "paper_id,pub_year,subject,citations\na,2001,Chem,4\nb,2001,Chem,-1\n";
        let err = read_records_from(text.as_bytes()).unwrap_err().to_string();
        assert!(err.contains("row 2"), "{err}");
    }

    #[test]
    fn missing_columns_reported() {
        let err = read_records_from("paper_id,year,citations\n".as_bytes()).unwrap_err().to_string();
        assert!(err.contains("pub_year") && err.contains("subject"), "{err}");
    }

    #[test]
    fn empty_input_is_no_records() {
        assert!(read_records_from("".as_bytes()).unwrap().is_empty());
        assert!(read_records_from("paper_id,pub_year,subject,citations\n".as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn records_round_trip_with_lf() {
        let records = vec![PublicationRecord::new("a", 2001, "Chem", 4), PublicationRecord::new("b", 1999, "Bio", 0)];
        let mut buf = Vec::new();
        write_records(&mut buf, &records).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(!text.contains('\r'));
        assert_eq!(read_records_from(buf.as_slice()).unwrap(), records);
    }

    #[test]
    fn samples_with_header() {
        assert_eq!(read_sample_from("score\n1.5\n2, 3\n\n4".as_bytes()).unwrap(), vec![1.5, 2.0, 3.0, 4.0]);
        assert!(read_sample_from("1\nx\n".as_bytes()).is_err());
    }
}
