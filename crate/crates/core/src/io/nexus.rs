//! Nexus `TAXA` and `SPLITS` blocks in the dialect read by SplitsTree4.
//!
//! Each matrix line is `[k, size=s]`, a tab, the weight, a tab, then the
//! 1-based members of the side not containing the first taxon, ending
//! with a comma.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::ordering::CircularOrdering;
use crate::split::{Split, WeightedSplitSystem};

#[derive(Clone, Debug, PartialEq)]
pub struct NexusSplits {
    pub labels: Vec<String>,
    pub cycle: Option<CircularOrdering>,
    pub system: WeightedSplitSystem,
}

fn quote(label: &str) -> String {
    format!("'{}'", label.replace('\'', "''"))
}

pub fn write_nexus(labels: &[String], cycle: Option<&CircularOrdering>, system: &WeightedSplitSystem) -> String {
    let n = labels.len();
    let mut out = String::from("#NEXUS\n\nBEGIN Taxa;\n");
    let _ = writeln!(out, "DIMENSIONS ntax={n};");
    out.push_str("TAXLABELS\n");
    for (k, label) in labels.iter().enumerate() {
        let _ = writeln!(out, "[{}] {}", k + 1, quote(label));
    }
    out.push_str(";\nEND; [Taxa]\n\nBEGIN Splits;\n");
    let _ = writeln!(out, "DIMENSIONS ntax={n} nsplits={};", system.len());
    out.push_str("FORMAT labels=no weights=yes confidences=no intervals=no;\n");
    if let Some(cycle) = cycle {
        out.push_str("CYCLE");
        for t in cycle.as_slice() {
            let _ = write!(out, " {}", t + 1);
        }
        out.push_str(";\n");
    }
    out.push_str("MATRIX\n");
    for (k, (split, weight)) in system.entries().iter().enumerate() {
        let members: Vec<String> = split.other_block().iter().map(|t| (t + 1).to_string()).collect();
        let _ = writeln!(
            out,
            "[{}, size={}] \t {} \t {},",
            k + 1,
            members.len(),
            weight,
            members.join(" ")
        );
    }
    out.push_str(";\nEND; [Splits]\n");
    out
}

/// Removes `[...]` comments outside quotes.
fn strip_comments(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let (mut depth, mut quoted) = (0usize, false);
    for c in text.chars() {
        match c {
            '\'' if depth == 0 => {
                quoted = !quoted;
                out.push(c);
            }
            '[' if !quoted => depth += 1,
            ']' if !quoted && depth > 0 => depth -= 1,
            _ if depth == 0 => out.push(c),
            _ => {}
        }
    }
    out
}

/// Statements of the document, split on `;` outside quotes.
fn statements(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut quoted = false;
    for c in text.chars() {
        match c {
            '\'' => {
                quoted = !quoted;
                current.push(c);
            }
            ';' if !quoted => out.push(std::mem::take(&mut current).trim().to_string()),
            _ => current.push(c),
        }
    }
    if !current.trim().is_empty() {
        out.push(current.trim().to_string());
    }
    out
}

fn labels_from(body: &str) -> Result<Vec<String>> {
    let mut labels = Vec::new();
    let mut chars = body.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '\'' {
            chars.next();
            let mut label = String::new();
            loop {
                match chars.next() {
                    Some('\'') if chars.peek() == Some(&'\'') => {
                        chars.next();
                        label.push('\'');
                    }
                    Some('\'') => break,
                    Some(c) => label.push(c),
                    None => return Err(Error::parse(0, "unterminated quoted label")),
                }
            }
            labels.push(label);
        } else {
            let mut label = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() {
                    break;
                }
                label.push(c);
                chars.next();
            }
            labels.push(label);
        }
    }
    Ok(labels)
}

fn dimension(statement: &str, key: &str) -> Option<usize> {
    statement.split_whitespace().find_map(|tok| {
        let (k, v) = tok.split_once('=')?;
        k.eq_ignore_ascii_case(key).then(|| v.parse().ok()).flatten()
    })
}

fn keyword(statement: &str) -> String {
    statement.split_whitespace().next().unwrap_or("").to_ascii_uppercase()
}

fn rest(statement: &str) -> &str {
    statement
        .trim_start()
        .split_once(char::is_whitespace)
        .map_or("", |(_, r)| r)
}

/// Reads the `TAXA` and `SPLITS` blocks written by [`write_nexus`].
pub fn read_nexus(text: &str) -> Result<NexusSplits> {
    let text = strip_comments(text);
    let mut labels: Option<Vec<String>> = None;
    let mut ntax: Option<usize> = None;
    let mut nsplits: Option<usize> = None;
    let mut cycle: Option<Vec<usize>> = None;
    let mut rows: Option<Vec<(f64, Vec<usize>)>> = None;
    let mut block = String::new();

    for st in statements(&text) {
        let st = st.trim_start_matches("#NEXUS").trim_start_matches("#nexus").trim();
        match keyword(st).as_str() {
            "BEGIN" => block = rest(st).trim().to_ascii_uppercase(),
            "END" | "ENDBLOCK" => block.clear(),
            "DIMENSIONS" => {
                if let Some(k) = dimension(st, "ntax") {
                    if ntax.is_some_and(|prev| prev != k) {
                        return Err(Error::parse(0, "blocks disagree on ntax"));
                    }
                    ntax = Some(k);
                }
                if block == "SPLITS" {
                    nsplits = dimension(st, "nsplits");
                }
            }
            "TAXLABELS" => labels = Some(labels_from(rest(st))?),
            "CYCLE" if block == "SPLITS" => {
                let taxa = rest(st)
                    .split_whitespace()
                    .map(|t| {
                        t.parse::<usize>()
                            .map_err(|_| Error::parse(0, format!("bad cycle entry {t:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                cycle = Some(taxa);
            }
            "MATRIX" if block == "SPLITS" => {
                let mut parsed = Vec::new();
                for row in rest(st).split(',').map(str::trim).filter(|r| !r.is_empty()) {
                    let mut fields = row.split_whitespace();
                    let weight: f64 = fields
                        .next()
                        .and_then(|w| w.parse().ok())
                        .ok_or_else(|| Error::parse(0, format!("bad split row {row:?}")))?;
                    let members = fields
                        .map(|t| {
                            t.parse::<usize>()
                                .map_err(|_| Error::parse(0, format!("bad member {t:?}")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    parsed.push((weight, members));
                }
                rows = Some(parsed);
            }
            _ => {}
        }
    }

    let labels = labels.ok_or_else(|| Error::parse(0, "TAXLABELS missing"))?;
    let n = ntax.unwrap_or(labels.len());
    if labels.len() != n {
        return Err(Error::parse(0, format!("ntax={n} but {} labels", labels.len())));
    }
    let one_based = |t: usize| {
        if t == 0 || t > n {
            Err(Error::parse(0, format!("taxon {t} outside 1..={n}")))
        } else {
            Ok(t - 1)
        }
    };
    let cycle = cycle
        .map(|c| {
            c.into_iter()
                .map(one_based)
                .collect::<Result<Vec<_>>>()
                .and_then(CircularOrdering::new)
        })
        .transpose()?;
    let rows = rows.ok_or_else(|| Error::parse(0, "SPLITS matrix missing"))?;
    if let Some(k) = nsplits {
        if k != rows.len() {
            return Err(Error::parse(0, format!("nsplits={k} but {} rows", rows.len())));
        }
    }
    let entries = rows
        .into_iter()
        .map(|(w, members)| {
            let members = members.into_iter().map(one_based).collect::<Result<Vec<_>>>()?;
            Ok((Split::new(n, members)?, w))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NexusSplits {
        labels,
        cycle,
        system: WeightedSplitSystem::new(n, entries)?,
    })
}
