//! MacKay's alist sparse-matrix text format (1-based, zero padded).

use crate::error::{Error, Result};

pub(super) fn write(n: usize, rows: &[Vec<usize>], cols: &[Vec<usize>]) -> String {
    let max_col = cols.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = format!("{} {}\n{} {}\n", n, rows.len(), max_col, max_row);
    let join = |v: Vec<String>| v.join(" ") + "\n";
    out += &join(cols.iter().map(|c| c.len().to_string()).collect());
    out += &join(rows.iter().map(|r| r.len().to_string()).collect());
    let padded = |list: &[usize], width: usize| {
        let mut v: Vec<String> = list.iter().map(|&i| (i + 1).to_string()).collect();
        v.resize(width, "0".to_string());
        v
    };
    for c in cols {
        out += &join(padded(c, max_col));
    }
    for r in rows {
        out += &join(padded(r, max_row));
    }
    out
}

/// Returns `(N, rows)`; the column section is checked against the rows.
pub(super) fn read(text: &str) -> Result<(usize, Vec<Vec<usize>>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let mut next_numbers = |what: &str| -> Result<(usize, Vec<usize>)> {
        let (line, l) = lines.next().ok_or_else(|| Error::Parse {
            line: 0,
            reason: format!("unexpected end of input reading {what}"),
        })?;
        let nums = l
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>().map_err(|e| Error::Parse {
                    line,
                    reason: format!("`{t}`: {e}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((line, nums))
    };
    let (line, dims) = next_numbers("dimensions")?;
    let [n, m] = dims[..] else {
        return Err(Error::Parse {
            line,
            reason: "expected `N M`".into(),
        });
    };
    next_numbers("maximum weights")?;
    let (line, col_w) = next_numbers("column weights")?;
    if col_w.len() != n {
        return Err(Error::Parse {
            line,
            reason: format!("expected {n} column weights"),
        });
    }
    let (line, row_w) = next_numbers("row weights")?;
    if row_w.len() != m {
        return Err(Error::Parse {
            line,
            reason: format!("expected {m} row weights"),
        });
    }
    let mut from_cols = vec![Vec::new(); m];
    for (v, &w) in col_w.iter().enumerate() {
        let (line, entries) = next_numbers("column entries")?;
        let checks: Vec<usize> = entries.into_iter().filter(|&c| c != 0).collect();
        if checks.len() != w || checks.iter().any(|&c| c > m) {
            return Err(Error::Parse {
                line,
                reason: format!("bad entries for column {}", v + 1),
            });
        }
        for c in checks {
            from_cols[c - 1].push(v);
        }
    }
    let mut rows = Vec::with_capacity(m);
    for (c, &w) in row_w.iter().enumerate() {
        let (line, entries) = next_numbers("row entries")?;
        let vars: Vec<usize> = entries
            .into_iter()
            .filter(|&v| v != 0)
            .map(|v| v - 1)
            .collect();
        if vars.len() != w || vars.iter().any(|&v| v >= n) {
            return Err(Error::Parse {
                line,
                reason: format!("bad entries for row {}", c + 1),
            });
        }
        let mut a = vars.clone();
        let mut b = from_cols[c].clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return Err(Error::Parse {
                line,
                reason: format!("row {} disagrees with columns", c + 1),
            });
        }
        rows.push(vars);
    }
    Ok((n, rows))
}
