//! graph6 encoding (the format used by `geng`, `nauty` and friends).
//!
//! Size prefix `N(n)`: one byte `n + 63` for `n <= 62`, `~` plus three
//! 6-bit groups for `n <= 258047`, `~~` plus six groups beyond that. The
//! body packs the upper triangle column by column (`x(0,1) x(0,2) x(1,2)
//! x(0,3) ...`) into 6-bit groups, zero-padded, each offset by 63.

use std::io::BufRead;

use crate::error::{Error, Result};
use crate::graph::ViewingGraph;

const HEADER: &str = ">>graph6<<";

pub fn encode(g: &ViewingGraph) -> String {
    let n = g.n();
    let mut out = Vec::new();
    encode_size(n, &mut out);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        let row = g.neighbors(j);
        for i in 0..j {
            acc = acc << 1 | (row >> i & 1) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

fn encode_size(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(b'~');
        for shift in [12, 6, 0] {
            out.push((n >> shift & 0x3f) as u8 + 63);
        }
    } else {
        out.extend_from_slice(b"~~");
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push((n >> shift & 0x3f) as u8 + 63);
        }
    }
}

/// Decodes one graph6 line; an optional `>>graph6<<` header is accepted.
pub fn decode(text: &str) -> Result<ViewingGraph> {
    let text = text.strip_prefix(HEADER).unwrap_or(text);
    let bytes = text.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(Error::parse(
                1,
                i + 1,
                format!("byte {b:#04x} is not valid graph6"),
            ));
        }
    }
    let (n, body) = decode_size(bytes)?;
    let bits = n * n.saturating_sub(1) / 2;
    let want = bits.div_ceil(6);
    if body.len() != want {
        return Err(Error::parse(
            1,
            bytes.len() - body.len() + 1,
            format!("{n} vertices need {want} body bytes, found {}", body.len()),
        ));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let group = body[k / 6] - 63;
            if group >> (5 - k % 6) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    if bits % 6 != 0 {
        let tail = (body[want - 1] - 63) & ((1 << (6 - bits % 6)) - 1);
        if tail != 0 {
            return Err(Error::parse(1, bytes.len(), "nonzero padding bits"));
        }
    }
    ViewingGraph::new(n, edges)
}

fn decode_size(bytes: &[u8]) -> Result<(usize, &[u8])> {
    let groups = |range: &[u8]| {
        range
            .iter()
            .fold(0usize, |acc, &b| acc << 6 | (b - 63) as usize)
    };
    match bytes {
        [] => Err(Error::parse(1, 1, "empty graph6 string")),
        [b'~', b'~', rest @ ..] if rest.len() >= 6 => Ok((groups(&rest[..6]), &rest[6..])),
        [b'~', rest @ ..] if rest.first() != Some(&b'~') && rest.len() >= 3 => {
            Ok((groups(&rest[..3]), &rest[3..]))
        }
        [b'~', ..] => Err(Error::parse(1, 1, "truncated graph6 size prefix")),
        [first, rest @ ..] => Ok(((first - 63) as usize, rest)),
    }
}

/// Reads a stream of graph6 lines, skipping blank lines.
pub fn read_stream(reader: impl BufRead) -> Result<Vec<ViewingGraph>> {
    let mut out = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        out.push(decode(line).map_err(|e| match e {
            Error::Parse {
                column, message, ..
            } => Error::parse(lineno + 1, column, message),
            other => other,
        })?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_graph, GraphFormat};

    #[test]
    fn star_example_round_trips() {
        // reference decode (networkx): star centred on vertex 4
        let g = decode("D?{").unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edges(), &[(0, 4), (1, 4), (2, 4), (3, 4)]);
        assert_eq!(encode(&g), "D?{");
    }

    #[test]
    fn known_encodings() {
        let g = parse_graph("n=5; 0-2, 0-4, 1-3, 3-4", GraphFormat::EdgeList).unwrap();
        assert_eq!(encode(&g), "DQc");
        let grid = parse_graph(
            "n=9; 0-1,1-2,3-4,4-5,6-7,7-8,0-3,3-6,1-4,4-7,2-5,5-8",
            GraphFormat::EdgeList,
        )
        .unwrap();
        assert_eq!(encode(&grid), "HkSg_SD");
        assert_eq!(encode(&ViewingGraph::empty(1).unwrap()), "@");
    }

    #[test]
    fn long_size_prefix() {
        let path = ViewingGraph::path(64).unwrap();
        let text = encode(&path);
        assert!(text.starts_with("~?@"));
        assert_eq!(decode(&text).unwrap(), path);
    }

    #[test]
    fn header_and_errors() {
        assert_eq!(decode(">>graph6<<D?{").unwrap().edge_count(), 4);
        assert!(matches!(decode("D?"), Err(Error::Parse { .. })));
        assert!(matches!(
            decode("D? {"),
            Err(Error::Parse { column: 3, .. })
        ));
        assert!(matches!(decode(""), Err(Error::Parse { .. })));
        // K2 uses one body bit; the remaining five must be zero
        assert!(decode("A_").is_ok());
        assert!(decode("A`").is_err());
    }

    #[test]
    fn stream_reports_line_numbers() {
        let input = "D?{\n\nA_\nD?\n";
        match read_stream(input.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        assert_eq!(read_stream("D?{\nA_\n".as_bytes()).unwrap().len(), 2);
    }
}
