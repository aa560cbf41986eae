//! JSON-Lines workload files: a header object, then one operation per line.
//!
//! ```text
//! {"n":100,"weights":"nonneg","W":1000}
//! {"op":"vertex_update","v":3,"in":[[1,4]],"out":[[5,2]]}
//! {"op":"insert_edge","u":0,"v":1,"w":5}
//! {"op":"delete_edge","u":0,"v":1}
//! {"op":"query"}
//! ```

use std::io::{BufRead, Write};

use dyncycle_core::harness::{Op, WeightRegime, Workload};
use dyncycle_core::{VertexId, Weight};
use serde::{Deserialize, Serialize};

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weights {
    Nonneg,
    Signed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Header {
    pub n: usize,
    pub weights: Weights,
    #[serde(rename = "W")]
    pub max_weight: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
enum Line {
    VertexUpdate {
        v: VertexId,
        #[serde(rename = "in")]
        incoming: Vec<(VertexId, Number)>,
        out: Vec<(VertexId, Number)>,
    },
    InsertEdge {
        u: VertexId,
        v: VertexId,
        w: Number,
    },
    DeleteEdge {
        u: VertexId,
        v: VertexId,
    },
    Query,
}

/// A weight that serializes integral values without a fractional part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum Number {
    Int(i64),
    Float(f64),
}

impl From<Weight> for Number {
    fn from(w: Weight) -> Self {
        if w.fract() == 0.0 && w.abs() < 9.0e15 {
            Number::Int(w as i64)
        } else {
            Number::Float(w)
        }
    }
}

impl From<Number> for Weight {
    fn from(x: Number) -> Self {
        match x {
            Number::Int(i) => i as f64,
            Number::Float(f) => f,
        }
    }
}

fn to_line(op: &Op) -> Line {
    let conv = |list: &[(VertexId, Weight)]| list.iter().map(|&(x, w)| (x, w.into())).collect();
    match op {
        Op::VertexUpdate {
            v,
            incoming,
            outgoing,
        } => Line::VertexUpdate {
            v: *v,
            incoming: conv(incoming),
            out: conv(outgoing),
        },
        Op::InsertEdge { u, v, w } => Line::InsertEdge {
            u: *u,
            v: *v,
            w: (*w).into(),
        },
        Op::DeleteEdge { u, v } => Line::DeleteEdge { u: *u, v: *v },
        Op::Query => Line::Query,
    }
}

fn from_line(line: Line) -> Op {
    let conv =
        |list: Vec<(VertexId, Number)>| list.into_iter().map(|(x, w)| (x, w.into())).collect();
    match line {
        Line::VertexUpdate { v, incoming, out } => Op::VertexUpdate {
            v,
            incoming: conv(incoming),
            outgoing: conv(out),
        },
        Line::InsertEdge { u, v, w } => Op::InsertEdge { u, v, w: w.into() },
        Line::DeleteEdge { u, v } => Op::DeleteEdge { u, v },
        Line::Query => Op::Query,
    }
}

pub fn write_workload(out: &mut impl Write, w: &Workload) -> std::io::Result<()> {
    let header = Header {
        n: w.n,
        weights: match w.regime {
            WeightRegime::NonNeg => Weights::Nonneg,
            WeightRegime::Signed => Weights::Signed,
        },
        max_weight: w.max_weight,
    };
    serde_json::to_writer(&mut *out, &header)?;
    writeln!(out)?;
    for op in &w.ops {
        serde_json::to_writer(&mut *out, &to_line(op))?;
        writeln!(out)?;
    }
    Ok(())
}

/// A parsed workload; each operation keeps its 1-based line number.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedWorkload {
    pub header: Header,
    pub ops: Vec<(usize, Op)>,
}

/// Reads a workload. Blank lines are skipped; an input with no lines at all
/// is an empty workload on zero vertices.
pub fn read_workload(input: impl BufRead) -> Result<ParsedWorkload, Failure> {
    let mut header = None;
    let mut ops = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Failure::input(format!("line {lineno}: {e}")))?;
        if line.trim().is_empty() {
            continue;
        }
        if header.is_none() {
            let h: Header = serde_json::from_str(&line)
                .map_err(|e| Failure::input(format!("line {lineno}: bad header: {e}")))?;
            header = Some(h);
            continue;
        }
        let parsed: Line = serde_json::from_str(&line)
            .map_err(|e| Failure::input(format!("line {lineno}: {e}")))?;
        ops.push((lineno, from_line(parsed)));
    }
    let header = header.unwrap_or(Header {
        n: 0,
        weights: Weights::Nonneg,
        max_weight: 1,
    });
    Ok(ParsedWorkload { header, ops })
}

/// Pairs file: one `s t` pair per line, separated by whitespace or a comma.
/// Lines starting with `#` are comments.
pub fn read_pairs(input: impl BufRead) -> Result<Vec<(VertexId, VertexId)>, Failure> {
    let mut pairs = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Failure::input(format!("pairs line {lineno}: {e}")))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .collect();
        let parse = |f: &str| {
            f.parse::<VertexId>()
                .map_err(|e| Failure::input(format!("pairs line {lineno}: {e}")))
        };
        match fields.as_slice() {
            [s, t] => pairs.push((parse(s)?, parse(t)?)),
            _ => {
                return Err(Failure::input(format!(
                    "pairs line {lineno}: expected two vertices"
                )))
            }
        }
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use dyncycle_core::harness::{generate, UpdateKind, WorkloadParams};

    #[test]
    fn round_trip() {
        for kind in [UpdateKind::Vertex, UpdateKind::Edge] {
            let w = generate(&WorkloadParams {
                n: 12,
                seed: 4,
                updates: 30,
                regime: WeightRegime::Signed,
                kind,
                ..WorkloadParams::default()
            });
            let mut buf = Vec::new();
            write_workload(&mut buf, &w).unwrap();
            let parsed = read_workload(&buf[..]).unwrap();
            assert_eq!(parsed.header.n, 12);
            assert_eq!(parsed.header.weights, Weights::Signed);
            let ops: Vec<Op> = parsed.ops.into_iter().map(|(_, op)| op).collect();
            assert_eq!(ops, w.ops);
        }
    }

    #[test]
    fn documented_format() {
        let text = r#"{"n":6,"weights":"nonneg","W":1000}
{"op":"vertex_update","v":3,"in":[[1,4]],"out":[[5,2.5]]}

{"op":"insert_edge","u":0,"v":1,"w":5}
{"op":"delete_edge","u":0,"v":1}
{"op":"query"}
"#;
        let parsed = read_workload(text.as_bytes()).unwrap();
        let lines: Vec<usize> = parsed.ops.iter().map(|(l, _)| *l).collect();
        assert_eq!(lines, vec![2, 4, 5, 6]);
        assert_eq!(
            parsed.ops[0].1,
            Op::VertexUpdate {
                v: 3,
                incoming: vec![(1, 4.0)],
                outgoing: vec![(5, 2.5)]
            }
        );
        let mut buf = Vec::new();
        serde_json::to_writer(&mut buf, &to_line(&parsed.ops[1].1)).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            r#"{"op":"insert_edge","u":0,"v":1,"w":5}"#
        );
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text =
            "{\"n\":3,\"weights\":\"nonneg\",\"W\":10}\n{\"op\":\"query\"}\n{\"op\":\"jump\"}\n";
        let err = read_workload(text.as_bytes()).unwrap_err();
        assert!(err.message.starts_with("line 3:"), "{}", err.message);
        assert!(read_workload("{\"n\":-1}".as_bytes()).is_err());
    }

    #[test]
    fn pairs_file() {
        let text = "# pairs\n0 1\n2,3\n\n 4\t5 \n";
        assert_eq!(
            read_pairs(text.as_bytes()).unwrap(),
            vec![(0, 1), (2, 3), (4, 5)]
        );
        assert!(read_pairs("0 1 2\n".as_bytes()).is_err());
        assert!(read_pairs("a b\n".as_bytes()).is_err());
    }
}
