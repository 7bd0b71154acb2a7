//! Number lists: `50`, `0.01 0.05 0.1`, or ranges such as `47.5(-2.5)40`.

use crate::error::{Error, Result};

const MAX_LEN: usize = 100_000;

fn parse_error(position: usize, message: impl Into<String>) -> Error {
    Error::Parse { position, message: message.into() }
}

fn number(text: &str, position: usize) -> Result<f64> {
    let v: f64 = text
        .parse()
        .map_err(|_| parse_error(position, format!("expected a number, found {text:?}")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(parse_error(position, format!("{text:?} is not finite")))
    }
}

/// Drops the floating-point residue left by repeated stepping.
fn tidy(v: f64) -> f64 {
    format!("{v:.10}").parse().unwrap_or(v)
}

fn expand_range(token: &str, offset: usize) -> Result<Vec<f64>> {
    let open = token.find('(').unwrap_or(token.len());
    let close = token
        .find(')')
        .ok_or_else(|| parse_error(offset + token.len(), "missing ')' in range"))?;
    if open == 0 || close < open {
        return Err(parse_error(offset, format!("malformed range {token:?}; expected start(step)end")));
    }
    if close + 1 == token.len() {
        return Err(parse_error(offset + token.len(), "range is missing its end value"));
    }
    let start = number(&token[..open], offset)?;
    let step = number(&token[open + 1..close], offset + open + 1)?;
    let end = number(&token[close + 1..], offset + close + 1)?;
    if step == 0.0 {
        return Err(parse_error(offset + open + 1, "range step must be nonzero"));
    }
    if (end - start) * step < 0.0 {
        return Err(parse_error(
            offset + open + 1,
            format!("step {step} moves away from the end value {end}"),
        ));
    }
    let count = ((end - start) / step + 1e-9).floor() + 1.0;
    if count > MAX_LEN as f64 {
        return Err(parse_error(offset, format!("range expands to more than {MAX_LEN} values")));
    }
    Ok((0..count as usize).map(|k| tidy(start + k as f64 * step)).collect())
}

/// Parses whitespace-separated numbers and `start(step)end` ranges.
///
/// Positions in errors are 1-based character offsets into `text`.
pub fn parse_numlist(text: &str) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    let mut rest = text;
    let mut offset = 1;
    loop {
        let trimmed = rest.trim_start();
        offset += rest.len() - trimmed.len();
        if trimmed.is_empty() {
            break;
        }
        let end = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
        let token = &trimmed[..end];
        if token.contains('(') || token.contains(')') {
            values.extend(expand_range(token, offset)?);
        } else {
            values.push(number(token, offset)?);
        }
        if values.len() > MAX_LEN {
            return Err(parse_error(offset, format!("list has more than {MAX_LEN} values")));
        }
        offset += end;
        rest = &trimmed[end..];
    }
    if values.is_empty() {
        return Err(parse_error(1, "empty number list"));
    }
    Ok(values)
}
