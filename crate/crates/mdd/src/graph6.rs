//! Bit-exact graph6 (and sparse6 read) interchange.
//!
//! The encoding follows the de-facto standard used by geng/genbg tooling:
//! `N(n)` followed by the upper-triangle bit vector in column-major order,
//! six bits per printable byte (offset 63). Unused padding bits must be
//! zero; we reject anything else so that encoding is injective.

use crate::graph::{BipartiteGraph, GraphError};

const HEADER_GRAPH6: &[u8] = b">>graph6<<";
const HEADER_SPARSE6: &[u8] = b">>sparse6<<";

/// Orders beyond this are outside desk scale and rejected early.
const MAX_ORDER: usize = 10_000;

/// Encodes a graph as standard graph6 (no header, no trailing newline).
pub fn write_graph6(g: &BipartiteGraph) -> String {
    encode_graph6(g.order(), |u, v| g.has_edge(u, v))
}

/// graph6 encoding of an arbitrary adjacency predicate.
pub(crate) fn encode_graph6(n: usize, has_edge: impl Fn(usize, usize) -> bool) -> String {
    let mut out = Vec::new();
    encode_order(n, &mut out);
    let mut acc: u32 = 0;
    let mut nbits = 0;
    for col in 1..n {
        for row in 0..col {
            acc = (acc << 1) | u32::from(has_edge(row, col));
            nbits += 1;
            if nbits == 6 {
                out.push(acc as u8 + 63);
                acc = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        out.push(((acc << (6 - nbits)) as u8) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

fn encode_order(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    } else {
        out.push(126);
        out.push(126);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    }
}

/// Parses graph6 bytes into a certified bipartite graph. An optional
/// `>>graph6<<` header is accepted; the decoded graph must be simple,
/// bipartite and connected (K_1 for n = 1 is allowed).
pub fn parse_graph6(input: &[u8]) -> Result<BipartiteGraph, GraphError> {
    let input = strip(input, HEADER_GRAPH6);
    let (n, rest) = decode_order(input)?;
    if n == 0 {
        return Err(GraphError::Disconnected);
    }
    let nbits = n * (n - 1) / 2;
    let nbytes = nbits.div_ceil(6);
    if rest.len() < nbytes {
        return Err(GraphError::MalformedGraph6(format!(
            "need {nbytes} data bytes for order {n}, found {}",
            rest.len()
        )));
    }
    if rest.len() > nbytes {
        return Err(GraphError::MalformedGraph6("trailing bytes".into()));
    }
    let mut bits = BitReader::new(rest)?;
    let mut edges = Vec::new();
    for col in 1..n {
        for row in 0..col {
            if bits.next_bit() {
                edges.push((row, col));
            }
        }
    }
    if !bits.remaining_zero() {
        return Err(GraphError::MalformedGraph6("nonzero padding bits".into()));
    }
    BipartiteGraph::from_edges(n, &edges)
}

/// Parses sparse6 bytes (leading ':', optional `>>sparse6<<` header).
///
/// Only simple graphs are accepted; the padding artifact that legally
/// appears for orders that are powers of two is recognized and skipped.
pub fn parse_sparse6(input: &[u8]) -> Result<BipartiteGraph, GraphError> {
    let input = strip(input, HEADER_SPARSE6);
    let Some((b':', body)) = input.split_first() else {
        return Err(GraphError::MalformedGraph6("sparse6 must start with ':'".into()));
    };
    let (n, rest) = decode_order(body)?;
    if n == 0 {
        return Err(GraphError::Disconnected);
    }
    let k = if n <= 1 {
        1
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    };
    let mut bits = BitReader::new(rest)?;
    let mut edges = Vec::new();
    let mut v = 0usize;
    loop {
        let Some(b) = bits.try_bit() else { break };
        if b {
            v += 1;
        }
        let Some(x) = bits.try_bits(k) else { break };
        if x >= n || v >= n {
            break;
        }
        if x > v {
            v = x;
        } else if x == v {
            // A loop {v,v} with v = n-1 inside the final group is the
            // documented padding artifact when n is a power of two.
            if v == n - 1 && bits.only_ones_left() {
                break;
            }
            return Err(GraphError::NotSimple(format!("loop at vertex {v}")));
        } else {
            edges.push((x, v));
        }
    }
    edges.sort_unstable();
    edges.dedup(); // sparse6 permits repeated edges; collapse them
    BipartiteGraph::from_edges(n, &edges)
}

/// Parses one record, dispatching on the sparse6 ':' marker.
pub fn parse_record(input: &[u8]) -> Result<BipartiteGraph, GraphError> {
    let trimmed = trim_ascii(input);
    if trimmed.starts_with(b":") || trimmed.starts_with(HEADER_SPARSE6) {
        parse_sparse6(trimmed)
    } else {
        parse_graph6(trimmed)
    }
}

fn trim_ascii(input: &[u8]) -> &[u8] {
    let start = input
        .iter()
        .position(|b| !b.is_ascii_whitespace())
        .unwrap_or(input.len());
    let end = input
        .iter()
        .rposition(|b| !b.is_ascii_whitespace())
        .map_or(start, |i| i + 1);
    &input[start..end]
}

fn strip<'a>(input: &'a [u8], header: &[u8]) -> &'a [u8] {
    input.strip_prefix(header).unwrap_or(input)
}

fn decode_order(input: &[u8]) -> Result<(usize, &[u8]), GraphError> {
    let err = |msg: &str| GraphError::MalformedGraph6(msg.into());
    match input {
        [] => Err(err("empty input")),
        [126, 126, rest @ ..] => {
            let (n, rest) = take_n6(rest, 6)?;
            check_order(n)?;
            Ok((n, rest))
        }
        [126, rest @ ..] => {
            let (n, rest) = take_n6(rest, 3)?;
            check_order(n)?;
            Ok((n, rest))
        }
        [b, rest @ ..] if (63..=125).contains(b) => Ok(((b - 63) as usize, rest)),
        _ => Err(err("invalid order byte")),
    }
}

fn check_order(n: usize) -> Result<(), GraphError> {
    if n > MAX_ORDER {
        return Err(GraphError::MalformedGraph6(format!(
            "order {n} exceeds supported maximum {MAX_ORDER}"
        )));
    }
    Ok(())
}

fn take_n6(input: &[u8], count: usize) -> Result<(usize, &[u8]), GraphError> {
    if input.len() < count {
        return Err(GraphError::MalformedGraph6("truncated order field".into()));
    }
    let mut n = 0usize;
    for &b in &input[..count] {
        if !(63..=126).contains(&b) {
            return Err(GraphError::MalformedGraph6("invalid order byte".into()));
        }
        n = (n << 6) | (b - 63) as usize;
    }
    Ok((n, &input[count..]))
}

struct BitReader<'a> {
    data: &'a [u8],
    pos: usize, // bit position
}

impl<'a> BitReader<'a> {
    fn new(data: &'a [u8]) -> Result<Self, GraphError> {
        if let Some(&bad) = data.iter().find(|b| !(63..=126).contains(*b)) {
            return Err(GraphError::MalformedGraph6(format!(
                "byte {bad} outside printable range"
            )));
        }
        Ok(BitReader { data, pos: 0 })
    }

    fn bit_at(&self, pos: usize) -> bool {
        let byte = self.data[pos / 6] - 63;
        (byte >> (5 - pos % 6)) & 1 == 1
    }

    fn next_bit(&mut self) -> bool {
        let b = self.bit_at(self.pos);
        self.pos += 1;
        b
    }

    fn try_bit(&mut self) -> Option<bool> {
        (self.pos < self.data.len() * 6).then(|| self.next_bit())
    }

    fn try_bits(&mut self, k: usize) -> Option<usize> {
        if self.pos + k > self.data.len() * 6 {
            self.pos = self.data.len() * 6;
            return None;
        }
        let mut x = 0usize;
        for _ in 0..k {
            x = (x << 1) | usize::from(self.next_bit());
        }
        Some(x)
    }

    fn remaining_zero(&self) -> bool {
        (self.pos..self.data.len() * 6).all(|p| !self.bit_at(p))
    }

    fn only_ones_left(&self) -> bool {
        (self.pos..self.data.len() * 6).all(|p| self.bit_at(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference vector from the format's documentation: n = 5 with edges
    // 0-2, 0-4, 1-3, 3-4 encodes as "DQc".
    #[test]
    fn reference_vector_roundtrips() {
        let g = BipartiteGraph::from_edges(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(write_graph6(&g), "DQc");
        let parsed = parse_graph6(b"DQc").unwrap();
        assert_eq!(parsed.edges(), g.edges());
    }

    #[test]
    fn k1_is_at_sign() {
        let k1 = BipartiteGraph::from_edges(1, &[]).unwrap();
        assert_eq!(write_graph6(&k1), "@");
        assert_eq!(parse_graph6(b"@").unwrap().order(), 1);
    }

    #[test]
    fn header_is_accepted() {
        assert_eq!(parse_graph6(b">>graph6<<DQc").unwrap().order(), 5);
    }

    #[test]
    fn truncated_input_is_malformed() {
        assert!(matches!(
            parse_graph6(b"DQ"),
            Err(GraphError::MalformedGraph6(_))
        ));
        assert!(matches!(
            parse_graph6(b""),
            Err(GraphError::MalformedGraph6(_))
        ));
    }

    #[test]
    fn trailing_bytes_and_bad_padding_are_malformed() {
        assert!(matches!(
            parse_graph6(b"DQcc"),
            Err(GraphError::MalformedGraph6(_))
        ));
        let c4 = BipartiteGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(write_graph6(&c4), "Cl");
        // "DQe" carries the same 10 edge bits as "DQc" but sets a padding bit.
        assert!(matches!(
            parse_graph6(b"DQe"),
            Err(GraphError::MalformedGraph6(_))
        ));
    }

    #[test]
    fn non_bipartite_and_disconnected_are_rejected() {
        // "Bw" is the triangle: n=3, bits 111.
        assert!(matches!(
            parse_graph6(b"Bw"),
            Err(GraphError::NotBipartite(_))
        ));
        // Two disjoint edges on 4 vertices: bits (0,1)=1,(0,2)=0,(1,2)=0,
        // (0,3)=0,(1,3)=0,(2,3)=1 -> 100001 -> 'a'.
        assert!(matches!(
            parse_graph6(b"Ca"),
            Err(GraphError::Disconnected)
        ));
    }

    // Documentation example for sparse6: ":Fa@x^" is n = 7 with edges
    // 0-1, 0-2, 1-2, 5-6 (a triangle plus an edge, hence rejected here,
    // but only after correct structural decoding).
    #[test]
    fn sparse6_reference_vector_decodes() {
        let err = parse_sparse6(b":Fa@x^").unwrap_err();
        assert!(matches!(err, GraphError::NotBipartite(_)));
    }

    #[test]
    fn sparse6_path_decodes_from_manual_encoding() {
        // P_4: n=4, k=2, pairs (1,00)(1,01)(1,10) then '1' padding gives
        // bit groups 100101 110111, i.e. bytes 'd' and 'v'.
        let g = parse_sparse6(b":Cdv").unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.edges(), vec![(0, 1), (1, 2), (2, 3)]);
    }
}
