//! Plain-text graph files: a header line `n m`, then `m` lines `u v`
//! with `0 <= u < v < n`.  Lines starting with `#` are comments; an
//! optional trailing name section maps vertex indices to labels with
//! lines `name <index> <label>`.

use sumflow_core::error::Error;
use sumflow_core::graph::Graph;

pub fn parse(text: &str) -> Result<Graph, Error> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (line_no, header) = lines
        .next()
        .ok_or_else(|| Error::BadParameter("empty graph file".into()))?;
    let mut parts = header.split_whitespace();
    let bad_header = || Error::BadParameter(format!("line {line_no}: header must be 'n m'"));
    let n: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(bad_header)?;
    let m: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(bad_header)?;
    if parts.next().is_some() {
        return Err(bad_header());
    }
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (line_no, line) = lines
            .next()
            .ok_or_else(|| Error::BadParameter(format!("expected {m} edge lines")))?;
        let mut parts = line.split_whitespace();
        let bad = |why: &str| Error::BadParameter(format!("line {line_no}: {why}"));
        let u: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("edge line must be 'u v'"))?;
        let v: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("edge line must be 'u v'"))?;
        if parts.next().is_some() {
            return Err(bad("edge line must be 'u v'"));
        }
        if u >= v {
            return Err(bad("edges need u < v (loops are not allowed)"));
        }
        if v >= n {
            return Err(bad("vertex index out of range"));
        }
        if edges.contains(&(u, v)) {
            return Err(bad("duplicate edge"));
        }
        edges.push((u, v));
    }
    for (line_no, line) in lines {
        let mut parts = line.split_whitespace();
        if parts.next() != Some("name") {
            return Err(Error::BadParameter(format!(
                "line {line_no}: unexpected content after the edge list"
            )));
        }
        let index: Option<usize> = parts.next().and_then(|s| s.parse().ok());
        match index {
            Some(i) if i < n => {}
            _ => {
                return Err(Error::BadParameter(format!(
                    "line {line_no}: name lines must be 'name <index> <label>'"
                )))
            }
        }
    }
    Graph::new(n, &edges)
}

pub fn render(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let g = sumflow_core::families::cycle(4).unwrap();
        let text = render(&g);
        let back = parse(&text).unwrap();
        assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(parse("").is_err());
        assert!(parse("2 1\n1 1\n").is_err());
        assert!(parse("2 2\n0 1\n0 1\n").is_err());
        assert!(parse("2 1\n0 5\n").is_err());
        assert!(parse("# comment\n3 1\n0 2\nname 1 center\n").is_ok());
        assert!(parse("3 1\n0 2\nstray\n").is_err());
    }
}
