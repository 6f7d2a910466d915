//! Finite groups as multiplication tables, their subgroups, and finite
//! G-sets with orbits, stabilizers and transversals.
//!
//! Elements are indices `0..order` with `0` the identity. Everything is
//! validated on construction and immutable afterwards.

use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    name: String,
}

pub type GroupRef = Arc<FiniteGroup>;

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order)
    }
}

impl FiniteGroup {
    /// Validate a Cayley table (index 0 must be the identity) and build the
    /// group. Rejects non-groups with a witness triple.
    pub fn from_table(table: &[Vec<usize>]) -> Result<GroupRef> {
        Self::from_table_named(table, "custom")
    }

    pub fn from_table_named(table: &[Vec<usize>], name: &str) -> Result<GroupRef> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NotAGroup {
                reason: "empty table",
                witness: (0, 0, 0),
            });
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotAGroup {
                    reason: "table is not square",
                    witness: (i, row.len(), n),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(Error::NotAGroup {
                        reason: "entry out of range",
                        witness: (i, j, v),
                    });
                }
            }
        }
        for i in 0..n {
            if table[0][i] != i {
                return Err(Error::NotAGroup {
                    reason: "index 0 is not a left identity",
                    witness: (0, i, table[0][i]),
                });
            }
            if table[i][0] != i {
                return Err(Error::NotAGroup {
                    reason: "index 0 is not a right identity",
                    witness: (i, 0, table[i][0]),
                });
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::NotAGroup {
                            reason: "associativity fails",
                            witness: (a, b, c),
                        });
                    }
                }
            }
        }
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            for b in 0..n {
                if table[a][b] == 0 && table[b][a] == 0 {
                    inv[a] = b;
                }
            }
            if inv[a] == usize::MAX {
                return Err(Error::NotAGroup {
                    reason: "element has no two-sided inverse",
                    witness: (a, a, a),
                });
            }
        }
        let mut mul = Vec::with_capacity(n * n);
        for row in table {
            mul.extend_from_slice(row);
        }
        Ok(Arc::new(FiniteGroup {
            order: n,
            mul,
            inv,
            name: name.to_string(),
        }))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.order
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Closure of a subset (plus the identity) under product and inverse.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut members = vec![false; self.order];
        members[0] = true;
        let mut stack: Vec<usize> = vec![0];
        for &g in gens {
            if !members[g] {
                members[g] = true;
                stack.push(g);
            }
        }
        while let Some(a) = stack.pop() {
            for b in 0..self.order {
                if members[b] {
                    for c in [self.mul(a, b), self.mul(b, a), self.inv(a)] {
                        if !members[c] {
                            members[c] = true;
                            stack.push(c);
                        }
                    }
                }
            }
        }
        (0..self.order).filter(|&i| members[i]).collect()
    }

    pub fn generates(&self, gens: &[usize]) -> bool {
        self.closure(gens).len() == self.order
    }
}

/// A generating set of minimal size, found by exhaustive search over subset
/// sizes 1, 2, ... of the non-identity elements.
pub fn min_generators(group: &GroupRef) -> Result<(usize, Vec<usize>)> {
    if group.is_trivial() {
        return Err(Error::TrivialGroup);
    }
    let n = group.order();
    let candidates: Vec<usize> = (1..n).collect();
    for d in 1..n {
        let mut found: Option<Vec<usize>> = None;
        let mut visit = |subset: &[usize]| {
            if found.is_none() && group.generates(subset) {
                found = Some(subset.to_vec());
            }
        };
        combinations(&candidates, d, &mut visit);
        if let Some(gens) = found {
            return Ok((d, gens));
        }
    }
    unreachable!("the full element set always generates")
}

fn combinations(items: &[usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..k).collect();
    if k > items.len() {
        return;
    }
    loop {
        let subset: Vec<usize> = idx.iter().map(|&i| items[i]).collect();
        visit(&subset);
        // next combination in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + items.len() - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subgroup {
    parent: GroupRef,
    /// Sorted member indices; always contains 0.
    members: Vec<usize>,
}

impl Subgroup {
    pub fn new(parent: &GroupRef, members: &[usize]) -> Result<Self> {
        let mut m = members.to_vec();
        m.sort_unstable();
        m.dedup();
        if m.first() != Some(&0) {
            return Err(Error::NotAGroup {
                reason: "subgroup does not contain the identity",
                witness: (0, 0, 0),
            });
        }
        for &a in &m {
            for &b in &m {
                if m.binary_search(&parent.mul(a, b)).is_err() {
                    return Err(Error::NotAGroup {
                        reason: "subset not closed under product",
                        witness: (a, b, parent.mul(a, b)),
                    });
                }
            }
            if m.binary_search(&parent.inv(a)).is_err() {
                return Err(Error::NotAGroup {
                    reason: "subset not closed under inverse",
                    witness: (a, a, parent.inv(a)),
                });
            }
        }
        Ok(Subgroup {
            parent: parent.clone(),
            members: m,
        })
    }

    pub fn parent(&self) -> &GroupRef {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn is_full(&self) -> bool {
        self.order() == self.parent.order()
    }

    /// Materialize the subgroup as a group in its own right, together with
    /// the list mapping new indices to parent elements.
    pub fn as_group(&self) -> Result<(GroupRef, Vec<usize>)> {
        let k = self.members.len();
        let pos = |g: usize| self.members.binary_search(&g).unwrap();
        let table: Vec<Vec<usize>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| pos(self.parent.mul(self.members[i], self.members[j])))
                    .collect()
            })
            .collect();
        let name = format!("{}<{}>", self.parent.name(), self.order());
        Ok((
            FiniteGroup::from_table_named(&table, &name)?,
            self.members.clone(),
        ))
    }
}

/// All subgroups, sorted by order and then by member list.
pub fn subgroups(group: &GroupRef) -> Vec<Subgroup> {
    let n = group.order();
    let mut seen: Vec<Vec<usize>> = vec![vec![0]];
    let mut frontier: Vec<Vec<usize>> = vec![vec![0]];
    while let Some(h) = frontier.pop() {
        for g in 1..n {
            if h.binary_search(&g).is_ok() {
                continue;
            }
            let mut gens: Vec<usize> = h.clone();
            gens.push(g);
            let c = group.closure(&gens);
            if !seen.contains(&c) {
                seen.push(c.clone());
                frontier.push(c);
            }
        }
    }
    seen.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    seen.into_iter()
        .map(|m| Subgroup {
            parent: group.clone(),
            members: m,
        })
        .collect()
}

/// A finite permutation action of a group, with orbit decomposition,
/// stabilizers and deterministic transversals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GSet {
    group: GroupRef,
    size: usize,
    /// `act[g * size + p]` is `g · p`.
    act: Vec<usize>,
}

impl GSet {
    /// Validate an action table (rows indexed by group elements).
    pub fn from_table(group: &GroupRef, table: &[Vec<usize>]) -> Result<Self> {
        let n = group.order();
        if table.len() != n {
            return Err(Error::NotAnAction {
                g: table.len(),
                h: n,
                point: 0,
            });
        }
        let size = table.first().map_or(0, |r| r.len());
        if size == 0 {
            return Err(Error::NotAnAction { g: 0, h: 0, point: 0 });
        }
        for (g, row) in table.iter().enumerate() {
            if row.len() != size {
                return Err(Error::NotAnAction { g, h: g, point: row.len() });
            }
            for &q in row {
                if q >= size {
                    return Err(Error::NotAnAction { g, h: g, point: q });
                }
            }
        }
        for p in 0..size {
            if table[0][p] != p {
                return Err(Error::NotAnAction { g: 0, h: 0, point: p });
            }
        }
        for g in 0..n {
            for h in 0..n {
                for p in 0..size {
                    if table[g][table[h][p]] != table[group.mul(g, h)][p] {
                        return Err(Error::NotAnAction { g, h, point: p });
                    }
                }
            }
        }
        let mut act = Vec::with_capacity(n * size);
        for row in table {
            act.extend_from_slice(row);
        }
        Ok(GSet {
            group: group.clone(),
            size,
            act,
        })
    }

    /// The action of `group` on the left cosets of `h`, points ordered by
    /// their smallest member; optionally extended by fixed points.
    pub fn cosets(group: &GroupRef, h: &Subgroup, extra_fixed: usize) -> Result<Self> {
        let n = group.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut reps: Vec<usize> = Vec::new();
        for g in 0..n {
            if coset_of[g] == usize::MAX {
                let idx = reps.len();
                for &x in h.members() {
                    coset_of[group.mul(g, x)] = idx;
                }
                reps.push(g);
            }
        }
        let k = reps.len();
        let size = k + extra_fixed;
        let table: Vec<Vec<usize>> = (0..n)
            .map(|g| {
                (0..size)
                    .map(|p| {
                        if p < k {
                            coset_of[group.mul(g, reps[p])]
                        } else {
                            p
                        }
                    })
                    .collect()
            })
            .collect();
        Self::from_table(group, &table)
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn act(&self, g: usize, p: usize) -> usize {
        self.act[g * self.size + p]
    }

    /// Orbits as sorted point lists, ordered by their minimal point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size];
        let mut out = Vec::new();
        for p in 0..self.size {
            if seen[p] {
                continue;
            }
            let mut orbit: Vec<usize> = self
                .group
                .elements()
                .map(|g| self.act(g, p))
                .collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &q in &orbit {
                seen[q] = true;
            }
            out.push(orbit);
        }
        out
    }

    pub fn stabilizer(&self, p: usize) -> Subgroup {
        let members: Vec<usize> = self
            .group
            .elements()
            .filter(|&g| self.act(g, p) == p)
            .collect();
        Subgroup {
            parent: self.group.clone(),
            members,
        }
    }

    /// For the orbit of `p`: one representative `t_q` per orbit point `q`,
    /// with `t_q · p = q`, chosen as the smallest element index (the choice
    /// is immaterial up to the invariances verified by the test suite).
    pub fn transversal(&self, p: usize) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        let mut seen: Vec<usize> = Vec::new();
        for g in self.group.elements() {
            let q = self.act(g, p);
            if !seen.contains(&q) {
                seen.push(q);
                out.push((q, g));
            }
        }
        out.sort_unstable();
        out
    }
}

/// Built-in groups at desk scale.
pub fn catalog_names() -> Vec<&'static str> {
    vec!["C1", "C2", "C3", "C4", "C2xC2", "C5", "C6", "S3"]
}

pub fn catalog_group(name: &str) -> Result<GroupRef> {
    match name {
        "C1" => cyclic(1),
        "C2" => cyclic(2),
        "C3" => cyclic(3),
        "C4" => cyclic(4),
        "C5" => cyclic(5),
        "C6" => cyclic(6),
        "C2xC2" | "V4" => {
            let table: Vec<Vec<usize>> = (0..4).map(|i| (0..4).map(|j| i ^ j).collect()).collect();
            FiniteGroup::from_table_named(&table, "C2xC2")
        }
        "S3" => {
            let perms: Vec<[usize; 3]> = vec![
                [0, 1, 2],
                [0, 2, 1],
                [1, 0, 2],
                [1, 2, 0],
                [2, 0, 1],
                [2, 1, 0],
            ];
            let compose = |p: &[usize; 3], q: &[usize; 3]| -> [usize; 3] {
                [p[q[0]], p[q[1]], p[q[2]]]
            };
            let table: Vec<Vec<usize>> = perms
                .iter()
                .map(|p| {
                    perms
                        .iter()
                        .map(|q| {
                            let pq = compose(p, q);
                            perms.iter().position(|r| *r == pq).unwrap()
                        })
                        .collect()
                })
                .collect();
            FiniteGroup::from_table_named(&table, "S3")
        }
        _ => Err(Error::NotAGroup {
            reason: "unknown catalog name",
            witness: (0, 0, 0),
        }),
    }
}

fn cyclic(n: usize) -> Result<GroupRef> {
    let table: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    FiniteGroup::from_table_named(&table, &format!("C{n}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_and_c2() {
        let g1 = FiniteGroup::from_table(&[vec![0]]).unwrap();
        assert_eq!(g1.order(), 1);
        let g2 = FiniteGroup::from_table(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g2.order(), 2);
        assert_eq!(g2.inv(1), 1);
    }

    #[test]
    fn s3_is_a_nonabelian_group_of_order_6() {
        let g = catalog_group("S3").unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        // oracle: exhaustive associativity is part of validation; double-check
        // inverses multiply to the identity
        for a in g.elements() {
            assert_eq!(g.mul(a, g.inv(a)), 0);
        }
    }

    #[test]
    fn rejects_non_groups() {
        // broken associativity: entry tweak in the C3 table
        let t = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 1, 0]];
        match FiniteGroup::from_table(&t) {
            Err(Error::NotAGroup { .. }) => {}
            other => panic!("expected NotAGroup, got {other:?}"),
        }
    }

    #[test]
    fn subgroup_counts() {
        let g1 = catalog_group("C1").unwrap();
        assert_eq!(subgroups(&g1).len(), 1);
        let g2 = catalog_group("C2").unwrap();
        assert_eq!(subgroups(&g2).len(), 2);
        // oracle: exhaustive subset-closure count for S3 is 6
        let s3 = catalog_group("S3").unwrap();
        let subs = subgroups(&s3);
        assert_eq!(subs.len(), 6);
        let mut orders: Vec<usize> = subs.iter().map(|h| h.order()).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 6]);
    }

    #[test]
    fn min_generator_counts() {
        let c2 = catalog_group("C2").unwrap();
        assert_eq!(min_generators(&c2).unwrap().0, 1);
        let v4 = catalog_group("C2xC2").unwrap();
        assert_eq!(min_generators(&v4).unwrap().0, 2);
        let s3 = catalog_group("S3").unwrap();
        let (d, gens) = min_generators(&s3).unwrap();
        assert_eq!(d, 2);
        assert!(s3.generates(&gens));
        // no single element generates S3 (exhaustive)
        for g in 1..6 {
            assert!(!s3.generates(&[g]));
        }
        assert!(min_generators(&catalog_group("C1").unwrap()).is_err());
    }

    #[test]
    fn gset_orbits_stabilizers_transversals() {
        let c2 = catalog_group("C2").unwrap();
        // p0 fixed; p1 <-> p2
        let s = GSet::from_table(&c2, &[vec![0, 1, 2], vec![0, 2, 1]]).unwrap();
        assert_eq!(s.orbits(), vec![vec![0], vec![1, 2]]);
        assert_eq!(s.stabilizer(0).order(), 2);
        assert_eq!(s.stabilizer(1).order(), 1);
        // orbit-stabilizer at every point
        for p in 0..3 {
            let orbit_len = s.orbits().into_iter().find(|o| o.contains(&p)).unwrap().len();
            assert_eq!(orbit_len * s.stabilizer(p).order(), 2);
        }
        assert_eq!(s.transversal(1), vec![(1, 0), (2, 1)]);
    }

    #[test]
    fn coset_action_of_s3_on_order_2_subgroup() {
        let s3 = catalog_group("S3").unwrap();
        let h = subgroups(&s3).into_iter().find(|h| h.order() == 2).unwrap();
        let s = GSet::cosets(&s3, &h, 0).unwrap();
        assert_eq!(s.size(), 3);
        assert_eq!(s.orbits().len(), 1);
        // oracle: the coset action is transitive with point stabilizers of order 2
        for p in 0..3 {
            assert_eq!(s.stabilizer(p).order(), 2);
        }
    }

    #[test]
    fn rejects_non_actions() {
        let c2 = catalog_group("C2").unwrap();
        // g then h disagrees with gh
        let bad = GSet::from_table(&c2, &[vec![0, 1], vec![1, 1]]);
        assert!(matches!(bad, Err(Error::NotAnAction { .. })));
    }
}
