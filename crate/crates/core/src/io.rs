//! Graph text formats and result rendering.
//!
//! Edge list: one `u v w` per line, 0-based ids, `#` starts a comment.
//! DIMACS-like: `p <n> <m>` then `e u v w` lines with 1-based ids; `c` lines
//! and `#` are comments.

use std::fmt::Write as _;

use crate::error::{KcutError, Result};
use crate::graph::{Weight, WeightedGraph};
use crate::minkcut::KcutReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum GraphFormat {
    EdgeList,
    Dimacs,
    /// DIMACS if the first non-comment line starts with `p`, else edge list.
    #[default]
    Auto,
}

impl std::str::FromStr for GraphFormat {
    type Err = KcutError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "edgelist" | "edge-list" | "edges" => Ok(GraphFormat::EdgeList),
            "dimacs" => Ok(GraphFormat::Dimacs),
            "auto" => Ok(GraphFormat::Auto),
            _ => Err(KcutError::InvalidArgument(format!("unknown graph format {s:?}"))),
        }
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| KcutError::Parse {
        line,
        message: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| KcutError::Parse {
        line,
        message: format!("bad {what} {tok:?}"),
    })
}

fn parse_weight(tok: Option<&str>, line: usize) -> Result<Weight> {
    if tok.is_some_and(|t| t.starts_with('-')) {
        return Err(KcutError::NegativeWeight { line });
    }
    parse_field(tok, line, "weight")
}

fn no_trailing<'a>(mut toks: impl Iterator<Item = &'a str>, line: usize) -> Result<()> {
    match toks.next() {
        Some(t) => Err(KcutError::Parse {
            line,
            message: format!("unexpected token {t:?}"),
        }),
        None => Ok(()),
    }
}

pub fn parse_graph(text: &str, format: GraphFormat) -> Result<WeightedGraph> {
    let format = match format {
        GraphFormat::Auto => {
            let first = content_lines(text).find(|(_, l)| !l.starts_with('c'));
            match first {
                Some((_, l)) if l.starts_with('p') => GraphFormat::Dimacs,
                _ => GraphFormat::EdgeList,
            }
        }
        f => f,
    };
    match format {
        GraphFormat::Dimacs => parse_dimacs(text),
        _ => parse_edge_list(text),
    }
}

fn parse_edge_list(text: &str) -> Result<WeightedGraph> {
    let mut edges = Vec::new();
    let mut n = 0;
    for (line, body) in content_lines(text) {
        let mut toks = body.split_whitespace();
        let u: usize = parse_field(toks.next(), line, "vertex")?;
        let v: usize = parse_field(toks.next(), line, "vertex")?;
        let w = parse_weight(toks.next(), line)?;
        no_trailing(toks, line)?;
        if u == v {
            return Err(KcutError::SelfLoop(u));
        }
        n = n.max(u + 1).max(v + 1);
        edges.push((u, v, w));
    }
    WeightedGraph::new(n, edges)
}

fn parse_dimacs(text: &str) -> Result<WeightedGraph> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges = Vec::new();
    for (line, body) in content_lines(text) {
        let mut toks = body.split_whitespace();
        match toks.next() {
            Some("c") => continue,
            Some("p") => {
                if header.is_some() {
                    return Err(KcutError::Parse {
                        line,
                        message: "second problem line".into(),
                    });
                }
                let mut first: Option<&str> = toks.next();
                // tolerate a problem name such as `p edge 5 7`
                if first.is_some_and(|t| t.parse::<usize>().is_err()) {
                    first = toks.next();
                }
                let n = parse_field(first, line, "vertex count")?;
                let m = parse_field(toks.next(), line, "edge count")?;
                no_trailing(toks, line)?;
                header = Some((n, m, line));
            }
            Some("e") | Some("a") => {
                let Some((n, _, _)) = header else {
                    return Err(KcutError::Parse {
                        line,
                        message: "edge before problem line".into(),
                    });
                };
                let u: usize = parse_field(toks.next(), line, "vertex")?;
                let v: usize = parse_field(toks.next(), line, "vertex")?;
                let w = parse_weight(toks.next(), line)?;
                no_trailing(toks, line)?;
                for x in [u, v] {
                    if x == 0 || x > n {
                        return Err(KcutError::Parse {
                            line,
                            message: format!("vertex {x} outside 1..={n}"),
                        });
                    }
                }
                if u == v {
                    return Err(KcutError::SelfLoop(u - 1));
                }
                edges.push((u - 1, v - 1, w));
            }
            Some(t) => {
                return Err(KcutError::Parse {
                    line,
                    message: format!("unknown line type {t:?}"),
                })
            }
            None => unreachable!(),
        }
    }
    let (n, m, line) = header.ok_or(KcutError::Parse {
        line: 0,
        message: "missing problem line".into(),
    })?;
    if edges.len() != m {
        return Err(KcutError::Parse {
            line,
            message: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    WeightedGraph::new(n, edges)
}

pub fn write_edge_list(g: &WeightedGraph) -> String {
    let mut out = String::new();
    for e in g.edges() {
        let _ = writeln!(out, "{} {} {}", e.u, e.v, e.weight);
    }
    out
}

/// DIMACS keeps the vertex count, so isolated vertices survive a round trip.
pub fn write_dimacs(g: &WeightedGraph) -> String {
    let mut out = format!("p {} {}\n", g.universe(), g.edge_count());
    for e in g.edges() {
        let _ = writeln!(out, "e {} {} {}", e.u + 1, e.v + 1, e.weight);
    }
    out
}

pub fn report_table(report: &KcutReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "k            {}", report.k);
    let _ = writeln!(out, "weight       {}", report.weight);
    let _ = writeln!(out, "partitions   {}", report.partitions.len());
    let _ = writeln!(out, "trees        {}", report.trees);
    let _ = writeln!(out, "upper bound  {}", report.initial_bound);
    let t = &report.telemetry;
    if !t.calls_by_depth.is_empty() {
        let _ = writeln!(out, "\ndepth  calls  branches  phi");
        for (d, calls) in t.calls_by_depth.iter().enumerate() {
            let branches = t.branches_by_depth.get(d).copied().unwrap_or(0);
            let phi = t.potential_by_depth.get(d).copied().unwrap_or(0.0);
            let _ = writeln!(out, "{d:<6} {calls:<6} {branches:<9} {phi:.6}");
        }
    }
    let _ = writeln!(out);
    for (i, p) in report.partitions.iter().enumerate() {
        let parts: Vec<String> = p
            .to_lists()
            .iter()
            .map(|l| format!("{{{}}}", l.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        let _ = writeln!(out, "{:>4}: {}", i + 1, parts.join(" | "));
    }
    out
}

pub fn report_json(report: &KcutReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

/// Reads the partition lines of [`report_table`] back into vertex lists.
pub fn parse_table_partitions(table: &str) -> Vec<Vec<Vec<usize>>> {
    table
        .lines()
        .filter_map(|l| {
            let (idx, rest) = l.trim_start().split_once(": ")?;
            idx.parse::<usize>().ok()?;
            Some(
                rest.split(" | ")
                    .map(|part| {
                        part.trim_matches(|c| c == '{' || c == '}')
                            .split(',')
                            .filter(|s| !s.is_empty())
                            .map(|v| v.parse().expect("vertex id"))
                            .collect()
                    })
                    .collect(),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ScheduleConfig;
    use crate::generators::{complete, cycle};
    use crate::minkcut::enumerate_min_kcuts;

    #[test]
    fn edge_list_triangle() {
        let g = parse_graph("0 1 1\n1 2 1\n2 0 1", GraphFormat::Auto).unwrap();
        assert_eq!(g, complete(3));
    }

    #[test]
    fn dimacs_single_edge() {
        let g = parse_graph("p 2 1\ne 1 2 5", GraphFormat::Auto).unwrap();
        assert_eq!(g.universe(), 2);
        assert_eq!(g.edges().len(), 1);
        assert_eq!((g.edges()[0].u, g.edges()[0].v, g.edges()[0].weight), (0, 1, 5));
        let g = parse_graph("c hello\np edge 3 1\ne 1 3 2\n", GraphFormat::Dimacs).unwrap();
        assert_eq!(g.universe(), 3);
    }

    #[test]
    fn errors() {
        assert_eq!(parse_graph("0 0 1", GraphFormat::Auto), Err(KcutError::SelfLoop(0)));
        assert_eq!(
            parse_graph("# c\n0 1 1\n1 2 -3\n", GraphFormat::EdgeList),
            Err(KcutError::NegativeWeight { line: 3 })
        );
        assert!(matches!(
            parse_graph("0 1 1\n1 x 1\n", GraphFormat::EdgeList),
            Err(KcutError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_graph("0 1 1 9\n", GraphFormat::EdgeList),
            Err(KcutError::Parse { line: 1, .. })
        ));
        assert!(matches!(parse_graph("p 2 2\ne 1 2 5", GraphFormat::Dimacs), Err(KcutError::Parse { line: 1, .. })));
        assert!(matches!(parse_graph("p 2 1\ne 1 3 5", GraphFormat::Dimacs), Err(KcutError::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("e 1 2 5", GraphFormat::Dimacs), Err(KcutError::Parse { line: 1, .. })));
        assert!(matches!(parse_graph("p 2 1\ne 2 2 5", GraphFormat::Dimacs), Err(KcutError::SelfLoop(1))));
    }

    #[test]
    fn writers_round_trip() {
        let g = WeightedGraph::new(6, [(0, 1, 3), (1, 2, 4), (3, 4, 1)]).unwrap();
        assert_eq!(parse_graph(&write_dimacs(&g), GraphFormat::Auto).unwrap(), g);
        let h = parse_graph(&write_edge_list(&g), GraphFormat::Auto).unwrap();
        assert_eq!(h.edges(), g.edges());
        assert_eq!(h.universe(), 5);
    }

    #[test]
    fn table_and_json_agree() {
        let report = enumerate_min_kcuts(&cycle(5), 3, &ScheduleConfig::default(), 1).unwrap();
        let table = report_table(&report);
        let json: serde_json::Value = serde_json::from_str(&report_json(&report)).unwrap();
        let from_json: Vec<Vec<Vec<usize>>> = serde_json::from_value(json["partitions"].clone()).unwrap();
        assert_eq!(from_json.len(), 10);
        assert_eq!(parse_table_partitions(&table), from_json);
        assert_eq!(json["weight"], 3);
    }
}
