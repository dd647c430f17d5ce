//! The graph6 ASCII encoding: n(n-1)/2 upper-triangle adjacency bits in
//! column-major order x(1,0), x(2,0), x(2,1), x(3,0), ..., packed into
//! 6-bit groups offset by 63.

use super::Graph;
use thiserror::Error;

const HEADER: &str = ">>graph6<<";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("empty graph6 record")]
    Empty,
    #[error("byte {offset}: character {byte:#04x} outside graph6 range 63..=126")]
    BadChar { offset: usize, byte: u8 },
    #[error("malformed length prefix at byte {0}")]
    BadLength(usize),
    #[error("vertex count {0} exceeds the supported long form (n <= 258047)")]
    Unsupported(u64),
    #[error("record has {got} data bytes, expected {expected}")]
    WrongDataLen { got: usize, expected: usize },
    #[error("nonzero padding bits in final byte")]
    BadPadding,
}

/// Parses one graph6 record; a leading ">>graph6<<" header is accepted.
pub fn parse_graph6(line: &str) -> Result<Graph, Graph6Error> {
    let line = line.trim_end_matches(['\n', '\r']);
    let line = line.strip_prefix(HEADER).unwrap_or(line);
    let bytes = line.as_bytes();
    if bytes.is_empty() {
        return Err(Graph6Error::Empty);
    }
    for (offset, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(Graph6Error::BadChar { offset, byte: b });
        }
    }
    let (n, mut pos) = decode_n(bytes)?;
    let nbits = n * n.saturating_sub(1) / 2;
    let expected = nbits.div_ceil(6);
    if bytes.len() - pos != expected {
        return Err(Graph6Error::WrongDataLen { got: bytes.len() - pos, expected });
    }
    let mut edges = Vec::new();
    let mut bit_index = 0usize;
    let mut group = 0u8;
    let mut bits_left = 0u8;
    for v in 1..n as u16 {
        for u in 0..v {
            if bits_left == 0 {
                group = bytes[pos] - 63;
                pos += 1;
                bits_left = 6;
            }
            if group & 0b10_0000 != 0 {
                edges.push((u, v));
            }
            group <<= 1;
            group &= 0b11_1111;
            bits_left -= 1;
            bit_index += 1;
        }
    }
    debug_assert_eq!(bit_index, nbits);
    if group != 0 {
        return Err(Graph6Error::BadPadding);
    }
    Ok(Graph::new(n, edges).expect("triangle bits always form a simple graph"))
}

fn decode_n(bytes: &[u8]) -> Result<(usize, usize), Graph6Error> {
    if bytes[0] != 126 {
        return Ok(((bytes[0] - 63) as usize, 1));
    }
    if bytes.len() >= 2 && bytes[1] == 126 {
        // eight-byte form for n >= 258048
        let mut n: u64 = 0;
        if bytes.len() < 8 {
            return Err(Graph6Error::BadLength(1));
        }
        for &b in &bytes[2..8] {
            n = n << 6 | (b - 63) as u64;
        }
        return Err(Graph6Error::Unsupported(n));
    }
    if bytes.len() < 4 {
        return Err(Graph6Error::BadLength(1));
    }
    let mut n: usize = 0;
    for &b in &bytes[1..4] {
        n = n << 6 | (b - 63) as usize;
    }
    Ok((n, 4))
}

/// Encodes a graph as one graph6 record (no header, no newline).
pub fn write_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        assert!(n <= 258_047, "graph6 long form supports n <= 258047");
        out.push(126);
        out.push((n >> 12) as u8 + 63);
        out.push((n >> 6 & 0x3f) as u8 + 63);
        out.push((n & 0x3f) as u8 + 63);
    }
    let mut group = 0u8;
    let mut filled = 0u8;
    for v in 1..n as u16 {
        for u in 0..v {
            group <<= 1;
            if g.has_edge(u, v) {
                group |= 1;
            }
            filled += 1;
            if filled == 6 {
                out.push(group + 63);
                group = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((group << (6 - filled)) + 63);
    }
    String::from_utf8(out).unwrap()
}

/// Iterates graph6 records in a text blob, one per line; blank lines and a
/// leading header line are skipped. Yields the 1-based line number with
/// each parse result so callers can report offending input.
pub fn read_graph6_lines(text: &str) -> impl Iterator<Item = (usize, Result<Graph, Graph6Error>)> + '_ {
    text.lines().enumerate().filter_map(|(i, line)| {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed == HEADER {
            None
        } else {
            Some((i + 1, parse_graph6(trimmed)))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex() {
        let g = parse_graph6("@").unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(write_graph6(&g), "@");
    }

    #[test]
    fn triangle_is_bw() {
        let g = parse_graph6("Bw").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(write_graph6(&Graph::complete(3)), "Bw");
    }

    #[test]
    fn k4_is_c_tilde() {
        let g = parse_graph6("C~").unwrap();
        assert_eq!(g, Graph::complete(4));
        assert_eq!(write_graph6(&Graph::complete(4)), "C~");
    }

    #[test]
    fn header_is_stripped() {
        assert_eq!(parse_graph6(">>graph6<<Bw").unwrap(), Graph::complete(3));
    }

    #[test]
    fn known_petgraph_fixture() {
        // 5 vertices, edges 0-2, 0-4, 1-3, 3-4 encode to "DQc"
        let g = Graph::new(5, [(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(write_graph6(&g), "DQc");
        assert_eq!(parse_graph6("DQc").unwrap(), g);
    }

    #[test]
    fn bad_inputs() {
        assert_eq!(parse_graph6(""), Err(Graph6Error::Empty));
        assert!(matches!(parse_graph6("B\u{7f}"), Err(Graph6Error::BadChar { offset: 1, .. })));
        assert!(matches!(parse_graph6("C"), Err(Graph6Error::WrongDataLen { .. })));
        assert!(matches!(parse_graph6("Cw~"), Err(Graph6Error::WrongDataLen { .. })));
        // triangle bits with nonzero padding: K3 needs 3 bits, low 3 must be 0
        assert_eq!(parse_graph6("Bz"), Err(Graph6Error::BadPadding));
    }

    #[test]
    fn long_form_round_trip() {
        let g = Graph::new(100, (0..99).map(|i| (i as u16, i as u16 + 1))).unwrap();
        let s = write_graph6(&g);
        assert!(s.starts_with('~'));
        assert_eq!(parse_graph6(&s).unwrap(), g);
    }

    #[test]
    fn line_reader_reports_line_numbers() {
        let text = ">>graph6<<\nBw\n\nC~\n";
        let parsed: Vec<_> = read_graph6_lines(text).collect();
        assert_eq!(parsed.len(), 2);
        assert_eq!(parsed[0].0, 2);
        assert_eq!(parsed[1].1.as_ref().unwrap(), &Graph::complete(4));
    }
}
