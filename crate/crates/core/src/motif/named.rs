use super::canon::{canonical_form, CanonicalForm, Pattern};
use super::MotifError;

fn numbered<'a>(name: &'a str, prefix: &str) -> Option<&'a str> {
    name.strip_prefix(prefix).filter(|rest| !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()))
}

/// Resolves a motif name to its canonical form.
///
/// Accepts canonical strings (`u3:01.02.12`, any labeling) and the aliases
/// `edge`, `triangle`, `claw`, `kN` (clique), `starN` (N leaves), `cycleN`,
/// `pathN` (N vertices), plus `ffl` and `mutual` for directed graphs. Directed
/// stars point outward from the center, directed cliques use mutual arcs.
pub fn named_motif(name: &str, directed: bool) -> Result<CanonicalForm, MotifError> {
    let name = name.trim();
    if name.contains(':') {
        let c: CanonicalForm = name.parse()?;
        if c.directed() != directed {
            return Err(MotifError::Invalid(format!("{name} does not match graph directedness")));
        }
        return Ok(c);
    }
    let unknown = || MotifError::Unknown(name.to_string());
    let parse_n = |s: &str| s.parse::<usize>().map_err(|_| unknown());
    let (size, edges): (usize, Vec<(usize, usize)>) = match name {
        "edge" => (2, vec![(0, 1)]),
        "mutual" if directed => (2, vec![(0, 1), (1, 0)]),
        "ffl" if directed => (3, vec![(0, 1), (0, 2), (1, 2)]),
        "triangle" if !directed => (3, vec![(0, 1), (1, 2), (0, 2)]),
        "claw" => (4, (1..4).map(|i| (0, i)).collect()),
        _ => {
            if let Some(n) = numbered(name, "star") {
                let leaves = parse_n(n)?;
                if leaves == 0 {
                    return Err(unknown());
                }
                (leaves + 1, (1..=leaves).map(|i| (0, i)).collect())
            } else if let Some(n) = numbered(name, "cycle") {
                let k = parse_n(n)?;
                if k < 3 {
                    return Err(unknown());
                }
                (k, (0..k).map(|i| (i, (i + 1) % k)).collect())
            } else if let Some(n) = numbered(name, "path") {
                let k = parse_n(n)?;
                if k < 2 {
                    return Err(unknown());
                }
                (k, (0..k - 1).map(|i| (i, i + 1)).collect())
            } else if let Some(n) = numbered(name, "k") {
                let k = parse_n(n)?;
                if k < 2 {
                    return Err(unknown());
                }
                let mut e = Vec::new();
                for i in 0..k {
                    for j in 0..k {
                        if i != j && (directed || i < j) {
                            e.push((i, j));
                        }
                    }
                }
                (k, e)
            } else {
                return Err(unknown());
            }
        }
    };
    Ok(canonical_form(&Pattern::from_edges(size, directed, &edges)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aliases_agree() {
        assert_eq!(named_motif("k3", false).unwrap(), named_motif("triangle", false).unwrap());
        assert_eq!(named_motif("cycle3", false).unwrap(), named_motif("triangle", false).unwrap());
        assert_eq!(named_motif("star3", false).unwrap(), named_motif("claw", false).unwrap());
        assert_eq!(named_motif("path2", true).unwrap(), named_motif("edge", true).unwrap());
        assert_eq!(
            named_motif("u3:12.01.02", false).unwrap(),
            named_motif("triangle", false).unwrap()
        );
        assert_eq!(named_motif("k4", true).unwrap().edge_count(), 12);
        assert_eq!(named_motif("star5", false).unwrap().size(), 6);
    }

    #[test]
    fn rejects_unknown() {
        assert!(named_motif("triangle", true).is_err());
        assert!(named_motif("ffl", false).is_err());
        assert!(named_motif("star", false).is_err());
        assert!(named_motif("cycle2", false).is_err());
        assert!(named_motif("k9", false).is_err());
        assert!(named_motif("d3:01.12", false).is_err());
        assert!(named_motif("blob", false).is_err());
    }
}
