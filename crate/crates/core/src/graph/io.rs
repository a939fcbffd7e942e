//! Plain-text graph format:
//!
//! ```text
//! bipartite <n_left> <n_right> <m>
//! <u> <v>        (m lines, 0-based, parallel edges repeated)
//! ```
//!
//! Lines starting with `#` and blank lines are ignored.

use std::io::{BufRead, Write};

use super::BipartiteMultigraph;
use crate::error::{Error, Result};

pub fn read_graph(reader: impl BufRead) -> Result<BipartiteMultigraph> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let parse_err = |msg: &str| Error::Parse {
            line: lineno,
            msg: msg.to_string(),
        };
        let fields: Vec<&str> = text.split_whitespace().collect();
        match header {
            None => {
                if fields.len() != 4 || fields[0] != "bipartite" {
                    return Err(parse_err("expected `bipartite <n_left> <n_right> <m>`"));
                }
                let num = |s: &str| s.parse::<usize>().map_err(|_| parse_err("bad count"));
                let m = num(fields[3])?;
                header = Some((num(fields[1])?, num(fields[2])?, m));
                edges.reserve(m);
            }
            Some(_) => {
                if fields.len() != 2 {
                    return Err(parse_err("expected `<u> <v>`"));
                }
                let idx = |s: &str| s.parse::<usize>().map_err(|_| parse_err("bad vertex index"));
                edges.push((idx(fields[0])?, idx(fields[1])?));
            }
        }
    }
    let (n_left, n_right, m) = header.ok_or(Error::Parse {
        line: 0,
        msg: "missing header".into(),
    })?;
    if edges.len() != m {
        return Err(Error::Parse {
            line: 0,
            msg: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    BipartiteMultigraph::new(n_left, n_right, edges)
}

pub fn write_graph(g: &BipartiteMultigraph, mut writer: impl Write) -> Result<()> {
    writeln!(writer, "bipartite {} {} {}", g.n_left(), g.n_right(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(writer, "{u} {v}")?;
    }
    writer.flush()?;
    Ok(())
}
