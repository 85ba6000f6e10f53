//! ASCII strand pictures. The leftmost factor of a word is drawn on top.

use cherednik::presentation::{AGen, AWord};

fn strands(n: usize, mark: impl Fn(usize) -> char) -> String {
    (1..=n).map(|i| mark(i).to_string()).collect::<Vec<_>>().join(" ")
}

fn wrap(i: i64, n: usize) -> usize {
    (i - 1).rem_euclid(n as i64) as usize + 1
}

fn rows(g: &AGen, n: usize) -> Vec<(String, String)> {
    let plain = strands(n, |_| '|');
    match g {
        AGen::Sigma => vec![(format!("{} ~", strands(n, |_| '\\')), "sigma".into())],
        AGen::Tau => vec![(format!("~ {}", strands(n, |_| '/')), "tau".into())],
        AGen::U(i) => {
            let j = wrap(*i, n);
            vec![(strands(n, |m| if m == j { 'o' } else { '|' }), g.to_string())]
        }
        AGen::T(i) => {
            let j = wrap(*i, n);
            vec![(strands(n, |m| if m == j { '*' } else { '|' }), g.to_string())]
        }
        AGen::Transp(j) => vec![
            (
                strands(n, |m| match m {
                    m if m == *j => '\\',
                    m if m == j + 1 => '/',
                    _ => '|',
                }),
                g.to_string(),
            ),
            (
                strands(n, |m| match m {
                    m if m == *j => '/',
                    m if m == j + 1 => '\\',
                    _ => '|',
                }),
                String::new(),
            ),
        ],
        AGen::Group(_) | AGen::Scalar(_) => vec![(plain, g.to_string())],
    }
}

/// One block per word, each preceded by its coefficient.
pub fn render(w: &AWord, n: usize) -> String {
    if w.terms().is_empty() {
        return "0".to_string();
    }
    let mut blocks = Vec::new();
    for (c, gens) in w.terms() {
        let mut lines = vec![format!("coefficient {c}")];
        let width = 2 * n + 1;
        for g in gens {
            for (pic, label) in rows(g, n) {
                lines.push(format!("  {pic:<width$}  {label}").trim_end().to_string());
            }
        }
        if gens.is_empty() {
            lines.push(format!("  {}", strands(n, |_| '|')));
        }
        blocks.push(lines.join("\n"));
    }
    blocks.join("\n\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use cherednik::parse::parse_aword;

    #[test]
    fn crossing_and_dot() {
        let w = parse_aword("s1*u2", 2, 1).unwrap();
        assert_eq!(render(&w, 2), "coefficient 1\n  \\ /    s1\n  / \\\n  | o    u2");
    }

    #[test]
    fn sigma_wraps() {
        let w = parse_aword("sigma", 3, 1).unwrap();
        assert_eq!(render(&w, 3), "coefficient 1\n  \\ \\ \\ ~  sigma");
    }

    #[test]
    fn zero_word() {
        let w = parse_aword("u1 - u1", 1, 1).unwrap();
        assert_eq!(render(&w, 1), "0");
    }
}
