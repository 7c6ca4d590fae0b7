use std::fmt;

use num_integer::Integer;

/// A permutation of `{0, .., n-1}` stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    /// Builds a permutation from images; `None` unless it is a bijection.
    pub fn from_images(images: Vec<u32>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Perm(images))
    }

    /// Builds a permutation of degree `n` from cycles written with 1-based points.
    pub fn from_cycles(n: usize, cycles: &[Vec<u32>]) -> Option<Self> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if a == 0 || a as usize > n || used[a as usize - 1] {
                    return None;
                }
                used[a as usize - 1] = true;
                let b = cycle[(k + 1) % cycle.len()];
                if b == 0 || b as usize > n {
                    return None;
                }
                images[a as usize - 1] = b - 1;
            }
        }
        Some(Perm(images))
    }

    /// Parses cycle notation such as `(1 2)(3 4 5)` or `()`.
    pub fn parse_cycles(n: usize, s: &str) -> Option<Self> {
        let s = s.trim();
        if !s.starts_with('(') {
            return None;
        }
        let mut cycles = Vec::new();
        for chunk in s.split('(').skip(1) {
            let body = chunk.trim().strip_suffix(')')?;
            let pts: Option<Vec<u32>> = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().ok())
                .collect();
            let pts = pts?;
            if !pts.is_empty() {
                cycles.push(pts);
            }
        }
        Self::from_cycles(n, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    /// Product applying `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Perm(inv)
    }

    /// `h^-1 self h`.
    pub fn conjugate_by(&self, h: &Perm) -> Perm {
        h.inverse().then(self).then(h)
    }

    pub fn pow(&self, e: u64) -> Perm {
        let mut out = vec![0u32; self.0.len()];
        for cycle in self.cycles() {
            let len = cycle.len() as u64;
            let shift = (e % len) as usize;
            for (k, &a) in cycle.iter().enumerate() {
                out[a] = cycle[(k + shift) % cycle.len()] as u32;
            }
        }
        Perm(out)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// All cycles including fixed points, each starting at its least element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut j = self.0[start] as usize;
            while j != start {
                seen[j] = true;
                cycle.push(j);
                j = self.0[j] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths in ascending order, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        t.sort_unstable();
        t
    }

    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for c in self.cycles() {
            if c.len() < 2 {
                continue;
            }
            any = true;
            let pts: Vec<String> = c.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "({})", pts.join(" "))?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

impl serde::Serialize for Perm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Formats a partition as `[1^2 3^1]`.
pub fn cycle_type_label(t: &[usize]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < t.len() {
        let mut j = i;
        while j < t.len() && t[j] == t[i] {
            j += 1;
        }
        parts.push(format!("{}^{}", t[i], j - i));
        i = j;
    }
    format!("[{}]", parts.join(" "))
}

/// Parses `[1^2 3^1]`, `1^2 3`, `[1¹2¹]` or `[1 1 3]` into an ascending partition.
pub fn parse_cycle_type(s: &str) -> Option<Vec<usize>> {
    const SUP: [(char, char); 10] = [
        ('⁰', '0'),
        ('¹', '1'),
        ('²', '2'),
        ('³', '3'),
        ('⁴', '4'),
        ('⁵', '5'),
        ('⁶', '6'),
        ('⁷', '7'),
        ('⁸', '8'),
        ('⁹', '9'),
    ];
    let mut norm = String::new();
    let mut in_sup = false;
    for ch in s.trim().trim_start_matches('[').trim_end_matches(']').chars() {
        if let Some(&(_, d)) = SUP.iter().find(|(c, _)| *c == ch) {
            if !in_sup {
                norm.push('^');
                in_sup = true;
            }
            norm.push(d);
        } else {
            if in_sup {
                norm.push(' ');
                in_sup = false;
            }
            norm.push(ch);
        }
    }
    let mut out = Vec::new();
    for tok in norm.split(|c: char| c.is_whitespace() || c == ',') {
        if tok.is_empty() {
            continue;
        }
        let (len, mult) = match tok.split_once('^') {
            Some((a, b)) => (a.parse::<usize>().ok()?, b.parse::<usize>().ok()?),
            None => (tok.parse::<usize>().ok()?, 1),
        };
        if len == 0 {
            return None;
        }
        out.extend(std::iter::repeat_n(len, mult));
    }
    if out.is_empty() {
        return None;
    }
    out.sort_unstable();
    Some(out)
}
