//! Edge-list and graph6 readers. Both assign ids deterministically: edge
//! lists number vertices by first appearance, graph6 uses `0..n`.

use super::{Graph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("no edges in input")]
    Empty,
    #[error("graph6: {0}")]
    Graph6(String),
}

pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut g = Graph::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = body.split_whitespace().collect();
        let [a, b] = tokens[..] else {
            return Err(ParseError::Line {
                line,
                msg: format!("expected `u v`, found {} tokens", tokens.len()),
            });
        };
        let wrap = |e: GraphError| ParseError::Line {
            line,
            msg: e.to_string(),
        };
        let u = g.vertex_or_insert(a).map_err(wrap)?;
        let v = g.vertex_or_insert(b).map_err(wrap)?;
        g.add_edge(u, v).map_err(wrap)?;
    }
    if g.edge_count() == 0 {
        return Err(ParseError::Empty);
    }
    Ok(g)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for &(u, v) in g.edges() {
        out.push_str(g.label(u));
        out.push(' ');
        out.push_str(g.label(v));
        out.push('\n');
    }
    out
}

pub fn parse_graph6(text: &str) -> Result<Graph, ParseError> {
    let bad = |m: &str| ParseError::Graph6(m.to_string());
    let s = text.trim();
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bytes: Vec<u8> = s.bytes().collect();
    if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(bad("byte outside 63..=126"));
    }
    let vals: Vec<u32> = bytes.iter().map(|&b| (b - 63) as u32).collect();
    let (n, rest) = match vals.as_slice() {
        [] => return Err(bad("empty")),
        [63, 63, r @ ..] => {
            if r.len() < 6 {
                return Err(bad("truncated size"));
            }
            let n = r[..6].iter().fold(0usize, |acc, &x| (acc << 6) | x as usize);
            (n, &r[6..])
        }
        [63, r @ ..] => {
            if r.len() < 3 {
                return Err(bad("truncated size"));
            }
            let n = r[..3].iter().fold(0usize, |acc, &x| (acc << 6) | x as usize);
            (n, &r[3..])
        }
        [n, r @ ..] => (*n as usize, r),
    };
    let needed = (n * n.saturating_sub(1) / 2).div_ceil(6);
    if rest.len() != needed {
        return Err(bad(&format!("expected {needed} adjacency bytes, found {}", rest.len())));
    }
    let mut pairs = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let bit = rest[k / 6] >> (5 - k % 6) & 1;
            if bit == 1 {
                pairs.push((i, j));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, &pairs).map_err(|e| ParseError::Graph6(e.to_string()))
}

pub fn write_graph6(g: &Graph) -> String {
    let n = g.vertex_count();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.push(126);
        out.push(126);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut cur = 0u8;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            cur = (cur << 1) | g.edge_between(i, j).is_some() as u8;
            k += 1;
            if k % 6 == 0 {
                out.push(cur + 63);
                cur = 0;
            }
        }
    }
    if k % 6 != 0 {
        cur <<= 6 - k % 6;
        out.push(cur + 63);
    }
    String::from_utf8(out).expect("graph6 is ascii")
}
