//! Q/Z-valued characters of finite abelian groups (in cohomology-group
//! coordinates) and the trace pairing realizing duality between the two
//! degree-0 Hom groups of a scenario.

use serde::Serialize;

use crate::cohomology::{CohGroup, CohMap};
use crate::error::{Error, Result};
use crate::homtensor::HomModule;
use crate::linalg::{lattice_hnf, mat_mul, preimage_basis, solve_mod, IntMat};

/// A reduced fraction in [0, 1) representing an element of Q/Z.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QmodZ {
    num: i64,
    den: i64,
}

impl QmodZ {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den > 0, "denominator must be positive");
        let num = num.rem_euclid(den);
        let g = num_integer::gcd(num, den);
        if num == 0 {
            QmodZ { num: 0, den: 1 }
        } else {
            QmodZ {
                num: num / g,
                den: den / g,
            }
        }
    }

    pub fn zero() -> Self {
        QmodZ { num: 0, den: 1 }
    }

    pub fn numer(&self) -> i64 {
        self.num
    }

    pub fn denom(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn add(&self, other: &QmodZ) -> QmodZ {
        let den = num_integer::lcm(self.den, other.den);
        QmodZ::new(self.num * (den / self.den) + other.num * (den / other.den), den)
    }

    pub fn neg(&self) -> QmodZ {
        QmodZ::new(-self.num, self.den)
    }

    pub fn scale(&self, k: i64) -> QmodZ {
        QmodZ::new(self.num.checked_mul(k.rem_euclid(self.den)).expect("small scale"), self.den)
    }

    /// The additive order in Q/Z.
    pub fn order(&self) -> i64 {
        self.den
    }
}

impl std::fmt::Debug for QmodZ {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl std::fmt::Display for QmodZ {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Serialize for QmodZ {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", self.num, self.den))
    }
}

/// A character of a finite abelian group given in coordinates: its value on
/// each coordinate basis class.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Character {
    /// Orders of the domain coordinates.
    pub orders: Vec<i64>,
    pub values: Vec<QmodZ>,
}

impl Character {
    pub fn zero(orders: &[i64]) -> Self {
        Character {
            orders: orders.to_vec(),
            values: vec![QmodZ::zero(); orders.len()],
        }
    }

    pub fn new(orders: &[i64], values: Vec<QmodZ>) -> Result<Self> {
        if orders.len() != values.len() {
            return Err(Error::IllFormedMap("character value count mismatch"));
        }
        for (&d, v) in orders.iter().zip(&values) {
            if d == 0 {
                return Err(Error::InfiniteGroup);
            }
            if d % v.order() != 0 {
                return Err(Error::IllFormedMap(
                    "character value order does not divide the class order",
                ));
            }
        }
        Ok(Character {
            orders: orders.to_vec(),
            values,
        })
    }

    pub fn eval(&self, coords: &[i64]) -> QmodZ {
        assert_eq!(coords.len(), self.values.len());
        let mut acc = QmodZ::zero();
        for (&x, v) in coords.iter().zip(&self.values) {
            acc = acc.add(&v.scale(x));
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// Precompose with a coordinate homomorphism into this character's
    /// domain: the result is a character of the map's source.
    pub fn precompose(&self, map: &CohMap) -> Character {
        let values = (0..map.src_orders.len())
            .map(|i| self.eval(&map.matrix.col_vec(i)))
            .collect();
        Character {
            orders: map.src_orders.clone(),
            values,
        }
    }
}

/// All characters of a finite abelian group with the given coordinate
/// orders, enumerated deterministically (odometer order).
pub fn character_group(orders: &[i64]) -> Result<Vec<Character>> {
    if orders.iter().any(|&d| d == 0) {
        return Err(Error::InfiniteGroup);
    }
    let mut out = Vec::new();
    let mut cur = vec![0i64; orders.len()];
    loop {
        let values = cur
            .iter()
            .zip(orders)
            .map(|(&k, &d)| QmodZ::new(k, d))
            .collect();
        out.push(Character {
            orders: orders.to_vec(),
            values,
        });
        let mut i = 0;
        loop {
            if i == orders.len() {
                return Ok(out);
            }
            cur[i] += 1;
            if cur[i] < orders[i] {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

/// Characters of a cohomology group.
pub fn characters_of(g: &CohGroup) -> Result<Vec<Character>> {
    character_group(&g.coord_orders())
}

/// The trace character on a degree-0 endomorphism group
/// `Ĥ⁰(G, Hom(L, L))`: the class of `f` maps to `trace(f)/|G| + Z`.
pub fn trace_character(endos: &CohGroup, basis: &HomModule) -> Result<Character> {
    let order = endos.group_order() as i64;
    let mut values = Vec::with_capacity(endos.dim());
    for b in endos.basis()? {
        let m = basis.matrix_of_coords(&b.values[0]);
        values.push(QmodZ::new(trace(&m), order));
    }
    Character::new(&endos.coord_orders(), values)
}

fn trace(m: &IntMat) -> i64 {
    (0..m.rows().min(m.cols())).map(|i| *m.get(i, i)).sum()
}

/// The trace pairing between `Ĥ⁰(G, Hom(ω, L))` (left) and
/// `Ĥ⁰(G, Hom(L, ω̄))` (right): a left class `[h]` defines the character
/// `[g] ↦ trace(h̄ ∘ g)/|G| + Z` of the right group.
pub struct TracePairing {
    /// values[i][j] pairs left basis class i with right basis class j.
    pub values: Vec<Vec<QmodZ>>,
    pub left_orders: Vec<i64>,
    pub right_orders: Vec<i64>,
    group_order: i64,
}

impl TracePairing {
    /// `left` must be the degree-0 group of `hom(omega, l)` and `right` of
    /// `hom(l, omega_bar)`; `free_cols` lists the positions of omega's free
    /// generators (so that a map out of omega restricts to the lattice).
    pub fn new(
        left: &CohGroup,
        left_basis: &HomModule,
        right: &CohGroup,
        right_basis: &HomModule,
        free_cols: &[usize],
    ) -> Result<TracePairing> {
        let order = left.group_order() as i64;
        let lb = left.basis()?;
        let rb = right.basis()?;
        let mut values = Vec::with_capacity(lb.len());
        for l in &lb {
            let hm = left_basis.matrix_of_coords(&l.values[0]);
            let hbar = hm.select_cols(free_cols);
            let mut row = Vec::with_capacity(rb.len());
            for r in &rb {
                let gm = right_basis.matrix_of_coords(&r.values[0]);
                let prod = mat_mul(&hbar, &gm)?;
                row.push(QmodZ::new(trace(&prod), order));
            }
            values.push(row);
        }
        Ok(TracePairing {
            values,
            left_orders: left.coord_orders(),
            right_orders: right.coord_orders(),
            group_order: order,
        })
    }

    /// The character of the right group attached to a left class.
    pub fn character_of(&self, left_coords: &[i64]) -> Result<Character> {
        let mut values = vec![QmodZ::zero(); self.right_orders.len()];
        for (i, &x) in left_coords.iter().enumerate() {
            for (j, v) in values.iter_mut().enumerate() {
                *v = v.add(&self.values[i][j].scale(x));
            }
        }
        Character::new(&self.right_orders, values)
    }

    /// Integer matrix of the pairing scaled by |G|: rows = right basis,
    /// cols = left basis.
    fn scaled_matrix(&self) -> IntMat {
        IntMat::from_fn(self.right_orders.len(), self.left_orders.len(), |j, i| {
            let v = &self.values[i][j];
            (self.group_order / v.denom()) * v.numer()
        })
    }

    /// Solve for the left class whose attached character equals the target.
    pub fn invert(&self, target: &Character) -> Result<Vec<i64>> {
        if target.orders != self.right_orders {
            return Err(Error::IllFormedMap("character lives on the wrong group"));
        }
        let q = self.scaled_matrix();
        let rhs: Vec<i64> = target
            .values
            .iter()
            .map(|v| (self.group_order / v.denom()) * v.numer())
            .collect();
        let rel = IntMat::from_fn(self.right_orders.len(), self.right_orders.len(), |r, c| {
            if r == c {
                self.group_order
            } else {
                0
            }
        });
        let x = solve_mod(&q, &rel, &rhs)?.ok_or(Error::TransportFailed)?;
        Ok(x.iter()
            .zip(&self.left_orders)
            .map(|(&v, &d)| if d == 0 { v } else { v.rem_euclid(d) })
            .collect())
    }

    /// Is the duality `[h] ↦ [h]^*` a bijection onto the character group?
    pub fn is_perfect(&self) -> Result<bool> {
        // the left group order must match the right group order, and the
        // kernel of the pairing must be trivial
        let lo: u128 = self.left_orders.iter().map(|&d| d as u128).product();
        let ro: u128 = self.right_orders.iter().map(|&d| d as u128).product();
        if lo != ro {
            return Ok(false);
        }
        let q = self.scaled_matrix();
        let big = IntMat::from_fn(q.rows(), q.rows(), |r, c| {
            if r == c {
                self.group_order
            } else {
                0
            }
        });
        let pre = preimage_basis(&q, &big)?;
        let left_rel = IntMat::from_fn(self.left_orders.len(), self.left_orders.len(), |r, c| {
            if r == c {
                self.left_orders[r]
            } else {
                0
            }
        });
        Ok(lattice_hnf(&pre)? == lattice_hnf(&left_rel)?)
    }
}
