use std::cmp::Ordering;
use std::collections::HashMap;

/// A basis monomial of an exterior algebra: a set of 0-based indices,
/// always read in increasing order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Blade(pub u64);

fn below_mask(i: usize) -> u64 {
    (1u64 << i) - 1
}

impl Blade {
    pub const EMPTY: Blade = Blade(0);

    pub fn single(i: usize) -> Blade {
        Blade(1 << i)
    }

    /// Blade with the given (distinct) indices and the sign of sorting them.
    /// `None` on a repeated index.
    pub fn from_indices(idx: &[usize]) -> Option<(bool, Blade)> {
        let mut acc = Blade::EMPTY;
        let mut neg = false;
        for &i in idx {
            let (s, b) = acc.wedge(Blade::single(i))?;
            neg ^= s;
            acc = b;
        }
        Some((neg, acc))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// Number of indices strictly below `i`.
    pub fn below(self, i: usize) -> usize {
        (self.0 & below_mask(i)).count_ones() as usize
    }

    pub fn without(self, i: usize) -> Blade {
        Blade(self.0 & !(1 << i))
    }

    pub fn with(self, i: usize) -> Blade {
        Blade(self.0 | 1 << i)
    }

    pub fn is_disjoint(self, other: Blade) -> bool {
        self.0 & other.0 == 0
    }

    /// `self ∧ other` as (negated?, blade), or `None` if they overlap.
    pub fn wedge(self, other: Blade) -> Option<(bool, Blade)> {
        if !self.is_disjoint(other) {
            return None;
        }
        let mut inv = 0usize;
        for j in other.indices() {
            inv += (self.0 >> j).count_ones() as usize;
        }
        Some((inv % 2 == 1, Blade(self.0 | other.0)))
    }

    /// Removes index `i`, with the sign of moving it to the front.
    pub fn pull(self, i: usize) -> Option<(bool, Blade)> {
        self.contains(i).then(|| (self.below(i) % 2 == 1, self.without(i)))
    }

    /// Inserts index `i` at the front, then sorts.
    pub fn push_front(self, i: usize) -> Option<(bool, Blade)> {
        (!self.contains(i)).then(|| (self.below(i) % 2 == 1, self.with(i)))
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.indices().collect()
    }
}

impl Ord for Blade {
    /// By size, then lexicographically on the sorted index lists.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.len().cmp(&other.len()) {
            Ordering::Equal => {}
            o => return o,
        }
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let low = diff.trailing_zeros();
        if self.0 >> low & 1 == 1 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All blades of each size for a fixed dimension, in blade order.
#[derive(Clone, Debug)]
pub struct BladeBasis {
    dim: usize,
    by_size: Vec<Vec<Blade>>,
    index: HashMap<Blade, usize>,
}

impl BladeBasis {
    pub fn new(dim: usize) -> Self {
        let mut by_size: Vec<Vec<Blade>> = vec![Vec::new(); dim + 1];
        for k in 0..=dim {
            for combo in itertools::Itertools::combinations(0..dim, k) {
                let b = Blade(combo.iter().fold(0u64, |acc, i| acc | 1 << i));
                by_size[k].push(b);
            }
            by_size[k].sort();
        }
        let mut index = HashMap::new();
        for blades in &by_size {
            for (i, b) in blades.iter().enumerate() {
                index.insert(*b, i);
            }
        }
        BladeBasis { dim, by_size, index }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blades(&self, k: usize) -> &[Blade] {
        self.by_size.get(k).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn count(&self, k: usize) -> usize {
        self.blades(k).len()
    }

    pub fn index(&self, b: Blade) -> usize {
        self.index[&b]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_signs() {
        let e = Blade::single;
        assert_eq!(e(0).wedge(e(1)), Some((false, Blade(0b11))));
        assert_eq!(e(1).wedge(e(0)), Some((true, Blade(0b11))));
        assert_eq!(e(0).wedge(e(0)), None);
        // e2 ∧ e1 ∧ e3 = -e1 ∧ e2 ∧ e3
        assert_eq!(Blade::from_indices(&[1, 0, 2]), Some((true, Blade(0b111))));
        assert_eq!(Blade::from_indices(&[2, 0, 1]), Some((false, Blade(0b111))));
    }

    #[test]
    fn ordering_is_lex() {
        let b = BladeBasis::new(4);
        let lists: Vec<Vec<usize>> = b.blades(2).iter().map(|x| x.to_vec()).collect();
        assert_eq!(lists, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    }
}
