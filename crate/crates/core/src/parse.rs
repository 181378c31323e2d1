//! Comma-separated value lists as accepted on the command line, e.g.
//! `0.5,1,2` or `0, 1 ,2`.

use crate::error::{Error, Result};

fn split(text: &str) -> Result<Vec<&str>> {
    let items: Vec<&str> = text.split(',').map(str::trim).collect();
    if items.iter().any(|s| s.is_empty()) {
        return Err(Error::InvalidList(format!("empty item in {text:?}")));
    }
    Ok(items)
}

/// Finite reals; at least one.
pub fn parse_real_list(text: &str) -> Result<Vec<f64>> {
    split(text)?
        .into_iter()
        .map(|s| match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(Error::InvalidList(format!("{s:?} is not a finite real"))),
        })
        .collect()
}

pub fn parse_int_list(text: &str) -> Result<Vec<i64>> {
    split(text)?
        .into_iter()
        .map(|s| {
            s.parse::<i64>()
                .map_err(|_| Error::InvalidList(format!("{s:?} is not an integer")))
        })
        .collect()
}
