use std::collections::{HashMap, HashSet, VecDeque};

use num_integer::Integer;
use serde::Serialize;

use super::perm::{cycle_type_label, parse_cycle_type, Perm};
use super::CoverError;
use crate::arith::Int;

/// Largest group the element-enumeration machinery accepts.
pub const MAX_GROUP_ORDER: usize = 10_000;
/// Largest group for which g-completeness is decided exactly.
pub const G_COMPLETE_LIMIT: usize = 360;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjClass {
    pub label: String,
    pub representative: Perm,
    pub element_order: u64,
    pub size: usize,
    pub cycle_type: Vec<usize>,
}

/// A permutation group with all elements, classes and (for small groups) a
/// multiplication table computed up front.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    classes: Vec<ConjClass>,
    class_of: Vec<usize>,
    table: Option<Vec<u16>>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self, CoverError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(CoverError::Invalid(format!(
                    "generator {g} does not act on {degree} points"
                )));
            }
        }
        let elements = enumerate(degree, &generators)?;
        let index: HashMap<Perm, usize> = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, g)| (g, i))
            .collect();
        let (classes, class_of) = conjugacy_classes(&elements, &index, &generators);
        let table = (elements.len() <= G_COMPLETE_LIMIT).then(|| {
            let n = elements.len();
            let mut t = vec![0u16; n * n];
            for (i, a) in elements.iter().enumerate() {
                for (j, b) in elements.iter().enumerate() {
                    t[i * n + j] = index[&a.then(b)] as u16;
                }
            }
            t
        });
        Ok(PermGroup {
            degree,
            generators,
            elements,
            index,
            classes,
            class_of,
            table,
        })
    }

    /// Symmetric group on `n` points, generated by `(1 2)` and `(1 .. n)`.
    pub fn symmetric(n: usize) -> Result<Self, CoverError> {
        let mut gens = vec![Perm::from_cycles(n, &[vec![1, 2]]).expect("n >= 2")];
        if n > 2 {
            gens.push(Perm::from_cycles(n, &[(1..=n as u32).collect()]).expect("valid"));
        }
        Self::new(n, gens)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn classes(&self) -> &[ConjClass] {
        &self.classes
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.index.contains_key(g)
    }

    pub fn class_of_element(&self, g: &Perm) -> Option<usize> {
        self.index.get(g).map(|&i| self.class_of[i])
    }

    pub fn class_power(&self, class: usize, a: u64) -> usize {
        let g = self.classes[class].representative.pow(a);
        self.class_of[self.index[&g]]
    }

    pub fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.degree];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(i) = queue.pop_front() {
            for g in &self.generators {
                let j = g.image(i);
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        seen.iter().all(|&b| b)
    }

    /// Classes whose cycle type equals `t`.
    pub fn classes_with_cycle_type(&self, t: &[usize]) -> Vec<usize> {
        (0..self.classes.len())
            .filter(|&i| self.classes[i].cycle_type == t)
            .collect()
    }

    pub fn find_class(&self, label: &str) -> Result<usize, CoverError> {
        let label = label.trim();
        if let Some(i) = self.classes.iter().position(|c| c.label == label) {
            return Ok(i);
        }
        if label.starts_with('(') {
            let g = Perm::parse_cycles(self.degree, label)
                .ok_or_else(|| CoverError::UnknownClass(label.to_string()))?;
            return self
                .class_of_element(&g)
                .ok_or_else(|| CoverError::UnknownClass(format!("{label} is not in the group")));
        }
        let t = parse_cycle_type(label).ok_or_else(|| CoverError::UnknownClass(label.to_string()))?;
        match self.classes_with_cycle_type(&t)[..] {
            [i] => Ok(i),
            [] => Err(CoverError::UnknownClass(label.to_string())),
            _ => Err(CoverError::AmbiguousClass(label.to_string())),
        }
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        let n = self.elements.len();
        match &self.table {
            Some(t) => t[a * n + b] as usize,
            None => self.index[&self.elements[a].then(&self.elements[b])],
        }
    }

    /// Whether no proper subgroup meets every class in `classes`.
    pub fn is_g_complete(&self, classes: &[usize]) -> Tristate {
        let wanted: HashSet<usize> = classes.iter().copied().collect();
        if wanted.len() == self.classes.len() {
            return Tristate::True;
        }
        if self.order() > G_COMPLETE_LIMIT {
            return Tristate::Unknown;
        }
        if self.order() == 1 {
            return Tristate::True;
        }
        let mut order: Vec<usize> = wanted.into_iter().collect();
        order.sort_unstable();
        let mut search = SubgroupSearch {
            group: self,
            classes: &order,
            visited: HashSet::new(),
        };
        let identity = self.index[&Perm::identity(self.degree)];
        let start = Bits::singleton(self.order(), identity);
        if search.proper_subgroup_meeting_all(&start, &[], 0) {
            Tristate::False
        } else {
            Tristate::True
        }
    }
}

fn enumerate(degree: usize, generators: &[Perm]) -> Result<Vec<Perm>, CoverError> {
    let id = Perm::identity(degree);
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in generators {
            let h = g.then(s);
            if seen.insert(h.clone()) {
                if out.len() >= MAX_GROUP_ORDER {
                    return Err(CoverError::GroupTooLarge(MAX_GROUP_ORDER));
                }
                out.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    Ok(out)
}

fn conjugacy_classes(
    elements: &[Perm],
    index: &HashMap<Perm, usize>,
    generators: &[Perm],
) -> (Vec<ConjClass>, Vec<usize>) {
    let mut class_of = vec![usize::MAX; elements.len()];
    let mut raw: Vec<(Vec<usize>, usize)> = Vec::new();
    for start in 0..elements.len() {
        if class_of[start] != usize::MAX {
            continue;
        }
        let id = raw.len();
        let mut members = vec![start];
        class_of[start] = id;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for h in generators {
                let j = index[&elements[i].conjugate_by(h)];
                if class_of[j] == usize::MAX {
                    class_of[j] = id;
                    members.push(j);
                    queue.push_back(j);
                }
            }
        }
        let rep = *members.iter().min_by_key(|&&i| &elements[i]).expect("nonempty");
        raw.push((members, rep));
    }
    // order by element order, then cycle type, then representative
    let mut keyed: Vec<(u64, Vec<usize>, Perm, usize, usize)> = raw
        .iter()
        .enumerate()
        .map(|(old, (members, rep))| {
            let g = &elements[*rep];
            (g.order(), g.cycle_type(), g.clone(), members.len(), old)
        })
        .collect();
    keyed.sort();
    let mut remap = vec![0usize; keyed.len()];
    let mut classes = Vec::with_capacity(keyed.len());
    for (new, (order, ct, rep, size, old)) in keyed.iter().enumerate() {
        remap[*old] = new;
        classes.push(ConjClass {
            label: cycle_type_label(ct),
            representative: rep.clone(),
            element_order: *order,
            size: *size,
            cycle_type: ct.clone(),
        });
    }
    // disambiguate classes sharing a cycle type with suffixes a, b, ...
    let mut by_type: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for (i, c) in classes.iter().enumerate() {
        by_type.entry(c.cycle_type.clone()).or_default().push(i);
    }
    for ids in by_type.values() {
        if ids.len() > 1 {
            for (k, &i) in ids.iter().enumerate() {
                let suffix = (b'a' + k as u8) as char;
                classes[i].label.push(suffix);
            }
        }
    }
    let class_of = class_of.into_iter().map(|c| remap[c]).collect();
    (classes, class_of)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tristate {
    True,
    False,
    Unknown,
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn singleton(n: usize, i: usize) -> Self {
        let mut b = Bits(vec![0; n.div_ceil(64)]);
        b.set(i);
        b
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

struct SubgroupSearch<'a> {
    group: &'a PermGroup,
    classes: &'a [usize],
    visited: HashSet<(Bits, usize)>,
}

impl SubgroupSearch<'_> {
    /// Extends `h` (generated by `gens`) one class at a time; true as soon as a
    /// proper subgroup meeting every class is found.
    fn proper_subgroup_meeting_all(&mut self, h: &Bits, gens: &[usize], k: usize) -> bool {
        let g = self.group;
        if h.count() == g.order() {
            return false;
        }
        if k == self.classes.len() {
            return true;
        }
        if !self.visited.insert((h.clone(), k)) {
            return false;
        }
        let class = self.classes[k];
        let members: Vec<usize> = (0..g.order()).filter(|&i| g.class_of[i] == class).collect();
        if members.iter().any(|&i| h.get(i)) {
            return self.proper_subgroup_meeting_all(h, gens, k + 1);
        }
        // from the trivial subgroup, conjugation lets us fix the representative
        let candidates: Vec<usize> = if gens.is_empty() {
            vec![g.index[&g.classes[class].representative]]
        } else {
            members
        };
        for x in candidates {
            let mut new_gens = gens.to_vec();
            new_gens.push(x);
            let closure = self.closure(&new_gens);
            if self.proper_subgroup_meeting_all(&closure, &new_gens, k + 1) {
                return true;
            }
        }
        false
    }

    fn closure(&self, gens: &[usize]) -> Bits {
        let g = self.group;
        let id = g.index[&Perm::identity(g.degree)];
        let mut bits = Bits::singleton(g.order(), id);
        let mut queue = VecDeque::from([id]);
        while let Some(a) = queue.pop_front() {
            for &s in gens {
                let b = g.mul(a, s);
                if !bits.get(b) {
                    bits.set(b);
                    queue.push_back(b);
                }
            }
        }
        bits
    }
}

// ---- Abstract groups ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbstractClass {
    pub label: String,
    pub element_order: u64,
}

/// A group known only through its order and a list of named classes, for
/// groups far beyond enumeration (the Monster).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbstractGroup {
    pub name: String,
    #[serde(serialize_with = "crate::arith::int_serde::serialize")]
    pub order: Int,
    pub classes: Vec<AbstractClass>,
}

#[derive(Debug, Clone)]
pub enum Group {
    Perm(PermGroup),
    Abstract(AbstractGroup),
}

impl Group {
    pub fn order(&self) -> Int {
        match self {
            Group::Perm(g) => Int::from(g.order()),
            Group::Abstract(a) => a.order.clone(),
        }
    }

    pub fn as_perm(&self) -> Option<&PermGroup> {
        match self {
            Group::Perm(g) => Some(g),
            Group::Abstract(_) => None,
        }
    }

    pub fn class_count(&self) -> usize {
        match self {
            Group::Perm(g) => g.classes.len(),
            Group::Abstract(a) => a.classes.len(),
        }
    }

    pub fn class_label(&self, i: usize) -> &str {
        match self {
            Group::Perm(g) => &g.classes[i].label,
            Group::Abstract(a) => &a.classes[i].label,
        }
    }

    pub fn class_order(&self, i: usize) -> u64 {
        match self {
            Group::Perm(g) => g.classes[i].element_order,
            Group::Abstract(a) => a.classes[i].element_order,
        }
    }

    pub fn find_class(&self, label: &str) -> Result<usize, CoverError> {
        match self {
            Group::Perm(g) => g.find_class(label),
            Group::Abstract(a) => a
                .classes
                .iter()
                .position(|c| c.label == label.trim())
                .ok_or_else(|| CoverError::UnknownClass(label.to_string())),
        }
    }

    /// Class of `g^a` for `g` in class `i`. Abstract groups only know the
    /// trivial answer `a ≡ 0 mod order` (when an order-1 class is listed) and
    /// `a ≡ 1 mod order`.
    pub fn class_power(&self, i: usize, a: u64) -> Option<usize> {
        match self {
            Group::Perm(g) => Some(g.class_power(i, a)),
            Group::Abstract(ab) => {
                let ord = ab.classes[i].element_order;
                if a % ord == 1 % ord {
                    Some(i)
                } else if a.is_multiple_of(ord) {
                    ab.classes.iter().position(|c| c.element_order == 1)
                } else {
                    None
                }
            }
        }
    }

    /// Ramification index attached to `C^a`: `order(C) / gcd(order(C), a)`.
    pub fn power_order(&self, i: usize, a: u64) -> u64 {
        let ord = self.class_order(i);
        ord / ord.gcd(&a)
    }

    pub fn is_g_complete(&self, classes: &[usize]) -> Tristate {
        match self {
            Group::Perm(g) => g.is_g_complete(classes),
            Group::Abstract(a) => {
                let set: HashSet<usize> = classes.iter().copied().collect();
                if set.len() == a.classes.len() {
                    Tristate::True
                } else {
                    Tristate::Unknown
                }
            }
        }
    }

    pub fn degree(&self) -> Option<usize> {
        self.as_perm().map(|g| g.degree())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(g: &PermGroup) -> Vec<String> {
        g.classes().iter().map(|c| c.label.clone()).collect()
    }

    #[test]
    fn symmetric_group_classes() {
        let s3 = PermGroup::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        assert_eq!(labels(&s3), vec!["[1^3]", "[1^1 2^1]", "[3^1]"]);
        let s5 = PermGroup::symmetric(5).unwrap();
        assert_eq!(s5.classes().len(), 7);
        assert_eq!(s5.classes().iter().map(|c| c.size).sum::<usize>(), 120);
    }

    #[test]
    fn klein_four_is_abelian() {
        let a = Perm::parse_cycles(4, "(1 2)(3 4)").unwrap();
        let b = Perm::parse_cycles(4, "(1 3)(2 4)").unwrap();
        let v4 = PermGroup::new(4, vec![a, b]).unwrap();
        assert_eq!(v4.order(), 4);
        assert_eq!(v4.classes().len(), 4);
        assert!(v4.classes().iter().all(|c| c.size == 1));
        assert_eq!(v4.classes()[1].label, "[2^2]a");
    }

    #[test]
    fn alternating_five_splits_five_cycles() {
        let a5 = PermGroup::new(
            5,
            vec![
                Perm::parse_cycles(5, "(1 2 3)").unwrap(),
                Perm::parse_cycles(5, "(1 2 3 4 5)").unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(a5.order(), 60);
        assert_eq!(a5.classes().len(), 5);
        assert!(matches!(a5.find_class("[5^1]"), Err(CoverError::AmbiguousClass(_))));
        assert!(a5.find_class("[5^1]a").is_ok());
        assert!(a5.find_class("[1^2 3^1]").is_ok());
    }

    #[test]
    fn class_powers() {
        let s3 = PermGroup::symmetric(3).unwrap();
        let c3 = s3.find_class("[3^1]").unwrap();
        assert_eq!(s3.classes()[s3.class_power(c3, 3)].label, "[1^3]");
        let s5 = PermGroup::symmetric(5).unwrap();
        let c14 = s5.find_class("[1^1 4^1]").unwrap();
        assert_eq!(s5.classes()[s5.class_power(c14, 2)].label, "[1^1 2^2]");
        let c23 = s5.find_class("[2^1 3^1]").unwrap();
        assert_eq!(s5.classes()[s5.class_power(c23, 2)].label, "[1^2 3^1]");
    }

    #[test]
    fn class_lookup_forms() {
        let s3 = PermGroup::symmetric(3).unwrap();
        let t = s3.find_class("[1^1 2^1]").unwrap();
        assert_eq!(s3.find_class("(1 3)").unwrap(), t);
        assert_eq!(s3.find_class("[1¹2¹]").unwrap(), t);
        assert!(s3.find_class("[2^2]").is_err());
    }

    #[test]
    fn g_completeness() {
        let s3 = PermGroup::symmetric(3).unwrap();
        let t = s3.find_class("[1^1 2^1]").unwrap();
        let c = s3.find_class("[3^1]").unwrap();
        assert_eq!(s3.is_g_complete(&[t, c]), Tristate::True);
        assert_eq!(s3.is_g_complete(&[c]), Tristate::False);
        assert_eq!(s3.is_g_complete(&[t]), Tristate::False);
        let s5 = PermGroup::symmetric(5).unwrap();
        let all: Vec<usize> = (0..7).collect();
        assert_eq!(s5.is_g_complete(&all), Tristate::True);
        // the Frobenius group of order 20 holds both a 5-cycle and a 4-cycle
        let c5 = s5.find_class("[5^1]").unwrap();
        let c4 = s5.find_class("[1^1 4^1]").unwrap();
        let c2 = s5.find_class("[1^3 2^1]").unwrap();
        assert_eq!(s5.is_g_complete(&[c5, c4]), Tristate::False);
        assert_eq!(s5.is_g_complete(&[c5, c4, c2]), Tristate::True);
        // 5-cycles and double transpositions both lie in A5
        let c22 = s5.find_class("[1^1 2^2]").unwrap();
        assert_eq!(s5.is_g_complete(&[c5, c22]), Tristate::False);
        // S6 is too big for exact search
        let s6 = PermGroup::symmetric(6).unwrap();
        assert_eq!(s6.is_g_complete(&[1, 2]), Tristate::Unknown);
    }

    #[test]
    fn group_too_large() {
        assert!(matches!(
            PermGroup::symmetric(8),
            Err(CoverError::GroupTooLarge(_))
        ));
        assert_eq!(PermGroup::symmetric(7).unwrap().order(), 5040);
    }
}
