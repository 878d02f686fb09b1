//! Finite groups given by multiplication tables.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};

/// A finite group on elements `0..order` with a validated multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    order: usize,
    mult: Vec<usize>,
    identity: usize,
    inv: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a square table and derives identity and inverses.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::MalformedTable("empty table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MalformedTable(format!("row {i} has length {}", row.len())));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return Err(Error::MalformedTable(format!("entry {x} in row {i} out of range")));
            }
        }
        let mult: Vec<usize> = table.concat();
        let m = |a: usize, b: usize| mult[a * n + b];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        return Err(Error::NotAssociative(a, b, c));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| m(e, a) == a && m(a, e) == a))
            .ok_or(Error::NoIdentity)?;
        let mut inv = Vec::with_capacity(n);
        for a in 0..n {
            let b = (0..n)
                .find(|&b| m(a, b) == identity && m(b, a) == identity)
                .ok_or(Error::NoInverse(a))?;
            inv.push(b);
        }
        Ok(FiniteGroup { order: n, mult, identity, inv })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mult.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    /// Conjugation x g x^-1.
    pub fn conj(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(x, g), self.inv(x))
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(&table).expect("cyclic table is a group")
    }

    /// Elements (a, b) indexed as a * |other| + b.
    pub fn direct_product(&self, other: &FiniteGroup) -> Self {
        let (n, m) = (self.order, other.order);
        let table: Vec<Vec<usize>> = (0..n * m)
            .map(|x| {
                (0..n * m)
                    .map(|y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        Self::from_table(&table).expect("product of groups is a group")
    }

    /// Closure of permutation generators; element 0 is the identity, the rest in
    /// breadth-first discovery order.
    pub fn from_permutations(generators: &[Vec<usize>]) -> Self {
        let degree = generators.first().map_or(0, |g| g.len());
        let id: Vec<usize> = (0..degree).collect();
        let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { (0..degree).map(|i| a[b[i]]).collect() };
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let p = compose(g, &elems[i]);
                if !index.contains_key(&p) {
                    index.insert(p.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(p);
                }
            }
        }
        let table: Vec<Vec<usize>> = elems
            .iter()
            .map(|a| elems.iter().map(|b| index[&compose(a, b)]).collect())
            .collect();
        Self::from_table(&table).expect("permutation closure is a group")
    }

    pub fn symmetric3() -> Self {
        Self::from_permutations(&[vec![1, 2, 0], vec![1, 0, 2]])
    }

    /// Dihedral group of order 2n.
    pub fn dihedral(n: usize) -> Self {
        let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        Self::from_permutations(&[rot, refl])
    }

    pub fn quaternion8() -> Self {
        Self::from_permutations(&[
            vec![1, 2, 3, 0, 5, 6, 7, 4],
            vec![4, 7, 6, 5, 2, 1, 0, 3],
        ])
    }

    pub fn alternating4() -> Self {
        Self::from_permutations(&[vec![1, 2, 0, 3], vec![1, 0, 3, 2]])
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut set: BTreeSet<usize> = BTreeSet::from([self.identity]);
        let mut queue: VecDeque<usize> = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        set.into_iter().collect()
    }

    pub fn is_normal(&self, subgroup: &[usize]) -> bool {
        let set: BTreeSet<usize> = subgroup.iter().copied().collect();
        self.elements().all(|x| subgroup.iter().all(|&g| set.contains(&self.conj(x, g))))
    }

    /// Normal subgroups generated by at most two elements, sorted by order.
    pub fn normal_subgroups(&self) -> Vec<Vec<usize>> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        for a in self.elements() {
            for b in a..self.order {
                let s = self.generated_subgroup(&[a, b]);
                if self.is_normal(&s) {
                    found.insert(s);
                }
            }
        }
        let mut out: Vec<Vec<usize>> = found.into_iter().collect();
        out.sort_by_key(|s| (s.len(), s.clone()));
        out
    }

    /// Restricts the table to a subgroup given as a sorted element list.
    pub fn subgroup(&self, elements: &[usize]) -> Result<Self> {
        let pos: HashMap<usize, usize> = elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut table = Vec::with_capacity(elements.len());
        for &a in elements {
            let mut row = Vec::with_capacity(elements.len());
            for &b in elements {
                let p = pos
                    .get(&self.mul(a, b))
                    .ok_or_else(|| Error::MalformedTable("subset not closed".into()))?;
                row.push(*p);
            }
            table.push(row);
        }
        Self::from_table(&table)
    }

    /// Brute-force isomorphism test, practical for orders up to about 8.
    pub fn is_isomorphic(&self, other: &FiniteGroup) -> bool {
        if self.order != other.order {
            return false;
        }
        let n = self.order;
        let order_of = |g: &FiniteGroup, x: usize| {
            let mut k = 1;
            let mut y = x;
            while y != g.identity {
                y = g.mul(y, x);
                k += 1;
            }
            k
        };
        let mut assign = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn extend(
            a: &FiniteGroup,
            b: &FiniteGroup,
            i: usize,
            assign: &mut Vec<usize>,
            used: &mut Vec<bool>,
            ord: &dyn Fn(&FiniteGroup, usize) -> usize,
        ) -> bool {
            let n = a.order;
            if i == n {
                return (0..n).all(|x| (0..n).all(|y| assign[a.mul(x, y)] == b.mul(assign[x], assign[y])));
            }
            for c in 0..n {
                if used[c] || ord(a, i) != ord(b, c) {
                    continue;
                }
                assign[i] = c;
                used[c] = true;
                let ok = (0..=i).all(|x| {
                    (0..=i).all(|y| {
                        let xy = a.mul(x, y);
                        xy > i || assign[xy] == b.mul(assign[x], assign[y])
                    })
                });
                if ok && extend(a, b, i + 1, assign, used, ord) {
                    return true;
                }
                used[c] = false;
            }
            assign[i] = usize::MAX;
            false
        }
        extend(self, other, 0, &mut assign, &mut used, &order_of)
    }
}

/// True iff `f` is a bijective homomorphism of `g` onto itself.
pub fn is_automorphism(g: &FiniteGroup, f: &[usize]) -> bool {
    let n = g.order();
    if f.len() != n || f.iter().any(|&x| x >= n) {
        return false;
    }
    let image: BTreeSet<usize> = f.iter().copied().collect();
    if image.len() != n {
        return false;
    }
    g.elements().all(|a| g.elements().all(|b| f[g.mul(a, b)] == g.mul(f[a], f[b])))
}
