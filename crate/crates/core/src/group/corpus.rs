//! Small named groups used as fixtures and by the command line.

use super::{FiniteGroup, DEFAULT_ORDER_CAP};
use crate::{Error, Result};

/// `⟨a, b | a^n = 1, b^m = a^s, b·a·b⁻¹ = a^r⟩` of order `n·m`, with element
/// `a^i b^j` at index `i + n·j`.
pub fn metacyclic(n: usize, m: usize, s: usize, r: usize) -> Result<FiniteGroup> {
    if n == 0 || m == 0 {
        return Err(Error::Input("metacyclic: orders must be positive".into()));
    }
    let r = r % n.max(1);
    let s = s % n.max(1);
    let mut rpow = vec![1 % n; m + 1];
    for j in 1..=m {
        rpow[j] = rpow[j - 1] * r % n;
    }
    if rpow[m] != 1 % n || (s * r) % n != s % n {
        return Err(Error::Input(format!("metacyclic: parameters ({n},{m},{s},{r}) do not define a group")));
    }
    let order = n * m;
    let mut table = vec![0u32; order * order];
    for j in 0..m {
        for i in 0..n {
            for l in 0..m {
                for k in 0..n {
                    let mut a = i + k * rpow[j];
                    let mut b = j + l;
                    if b >= m {
                        b -= m;
                        a += s;
                    }
                    table[(i + n * j) * order + (k + n * l)] = ((a % n) + n * b) as u32;
                }
            }
        }
    }
    let mut gens = Vec::new();
    if n > 1 {
        gens.push(1);
    }
    if m > 1 {
        gens.push(n as u32);
    }
    Ok(FiniteGroup::from_raw(order, table, gens))
}

pub fn cyclic(n: usize) -> FiniteGroup {
    FiniteGroup::cyclic(n)
}

/// Dihedral group of order `2n`.
pub fn dihedral(n: usize) -> FiniteGroup {
    metacyclic(n, 2, 0, n - 1).expect("dihedral parameters")
}

/// Generalized quaternion (dicyclic) group of order `order` (a multiple of 4).
pub fn quaternion(order: usize) -> FiniteGroup {
    assert!(order.is_multiple_of(4) && order >= 8);
    let n = order / 2;
    metacyclic(n, 2, n / 2, n - 1).expect("quaternion parameters")
}

/// Dicyclic group `C3 ⋊ C4` of order 12.
pub fn dicyclic12() -> FiniteGroup {
    metacyclic(3, 4, 0, 2).expect("dicyclic parameters")
}

/// Semidihedral group of order 16.
pub fn semidihedral16() -> FiniteGroup {
    metacyclic(8, 2, 0, 3).expect("semidihedral parameters")
}

/// Modular group `M16 = ⟨a, b | a^8, b^2, bab⁻¹ = a^5⟩`.
pub fn modular16() -> FiniteGroup {
    metacyclic(8, 2, 0, 5).expect("modular parameters")
}

/// Frobenius group `C7 ⋊ C3` of order 21.
pub fn frobenius21() -> FiniteGroup {
    metacyclic(7, 3, 0, 2).expect("frobenius parameters")
}

/// Frobenius group `C5 ⋊ C4` of order 20.
pub fn frobenius20() -> FiniteGroup {
    metacyclic(5, 4, 0, 2).expect("frobenius parameters")
}

/// Extraspecial group of order 27 and exponent 9.
pub fn extraspecial27_exp9() -> FiniteGroup {
    metacyclic(9, 3, 0, 4).expect("extraspecial parameters")
}

/// Heisenberg group of upper unitriangular 3×3 matrices over `F_p`; element
/// `(a, b, c)` at index `a + p·b + p²·c` with `(a,b,c)(a',b',c') =
/// (a+a', b+b', c+c'+a·b')`.
pub fn heisenberg(p: usize) -> FiniteGroup {
    let n = p * p * p;
    let dec = |x: usize| (x % p, (x / p) % p, x / (p * p));
    let mut table = vec![0u32; n * n];
    for x in 0..n {
        let (a, b, c) = dec(x);
        for y in 0..n {
            let (a2, b2, c2) = dec(y);
            let z = (a + a2) % p + p * ((b + b2) % p) + p * p * ((c + c2 + a * b2) % p);
            table[x * n + y] = z as u32;
        }
    }
    FiniteGroup::from_raw(n, table, vec![1, p as u32])
}

/// Direct sum of cyclic groups with mixed-radix indexing (first factor
/// varies fastest).
pub fn abelian(orders: &[usize]) -> FiniteGroup {
    let n: usize = orders.iter().product();
    let decode = |mut x: usize| -> Vec<usize> {
        orders
            .iter()
            .map(|&d| {
                let r = x % d;
                x /= d;
                r
            })
            .collect()
    };
    let encode = |v: &[usize]| -> usize {
        let mut x = 0;
        for (i, &d) in orders.iter().enumerate().rev() {
            x = x * d + v[i];
        }
        x
    };
    let mut table = vec![0u32; n * n];
    for x in 0..n {
        let a = decode(x);
        for y in 0..n {
            let b = decode(y);
            let c: Vec<usize> = a.iter().zip(&b).zip(orders).map(|((u, v), d)| (u + v) % d).collect();
            table[x * n + y] = encode(&c) as u32;
        }
    }
    let mut stride = 1usize;
    let mut gens = Vec::new();
    for &d in orders {
        if d > 1 {
            gens.push(stride as u32);
        }
        stride *= d;
    }
    FiniteGroup::from_raw(n, table, gens)
}

pub fn elementary_abelian(p: usize, rank: usize) -> FiniteGroup {
    abelian(&vec![p; rank])
}

pub fn symmetric(k: usize) -> FiniteGroup {
    if k < 2 {
        return FiniteGroup::trivial();
    }
    let swap: Vec<usize> = (1..=k)
        .map(|i| {
            if i == 1 {
                2
            } else if i == 2 {
                1
            } else {
                i
            }
        })
        .collect();
    let cycle: Vec<usize> = (1..=k).map(|i| i % k + 1).collect();
    FiniteGroup::from_permutations(k, &[swap, cycle], DEFAULT_ORDER_CAP).expect("symmetric group")
}

pub fn alternating4() -> FiniteGroup {
    FiniteGroup::from_permutations(4, &[vec![2, 3, 1, 4], vec![2, 1, 4, 3]], DEFAULT_ORDER_CAP)
        .expect("alternating group")
}

/// `SL(2,3)` acting on the 8 nonzero vectors of `F_3²`.
pub fn sl23() -> FiniteGroup {
    let vectors: Vec<(usize, usize)> = (0..9).map(|i| (i % 3, i / 3)).filter(|&v| v != (0, 0)).collect();
    let act = |m: [[usize; 2]; 2]| -> Vec<usize> {
        vectors
            .iter()
            .map(|&(x, y)| {
                let img = ((m[0][0] * x + m[0][1] * y) % 3, (m[1][0] * x + m[1][1] * y) % 3);
                vectors.iter().position(|&v| v == img).unwrap() + 1
            })
            .collect()
    };
    let gens = [act([[1, 1], [0, 1]]), act([[0, 2], [1, 0]])];
    FiniteGroup::from_permutations(8, &gens, DEFAULT_ORDER_CAP).expect("SL(2,3)")
}

pub fn product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    FiniteGroup::direct_product(a, b).expect("product within cap").0
}

/// Look up a fixture by name, e.g. `C8`, `D4`, `Q16`, `SD16`, `M16`, `A4`,
/// `S4`, `SL23`, `Heis27`, `ES27`, `F21`, `F20`, `Dic12`.
pub fn by_name(name: &str) -> Option<FiniteGroup> {
    let num = |prefix: &str| name.strip_prefix(prefix).and_then(|r| r.parse::<usize>().ok());
    match name {
        "SD16" => return Some(semidihedral16()),
        "M16" => return Some(modular16()),
        "A4" => return Some(alternating4()),
        "SL23" => return Some(sl23()),
        "Heis27" => return Some(heisenberg(3)),
        "ES27" => return Some(extraspecial27_exp9()),
        "F21" => return Some(frobenius21()),
        "F20" => return Some(frobenius20()),
        "Dic12" => return Some(dicyclic12()),
        _ => {}
    }
    if let Some(n) = num("C") {
        return (1..=DEFAULT_ORDER_CAP).contains(&n).then(|| cyclic(n));
    }
    if let Some(n) = num("D") {
        return (n >= 2 && 2 * n <= DEFAULT_ORDER_CAP).then(|| dihedral(n));
    }
    if let Some(n) = num("Q") {
        return (n >= 8 && n % 4 == 0 && n <= DEFAULT_ORDER_CAP).then(|| quaternion(n));
    }
    if let Some(n) = num("S") {
        return (2..=7).contains(&n).then(|| symmetric(n));
    }
    None
}

/// The named fixtures of order at most 32 used for whole-corpus checks.
pub fn small_corpus() -> Vec<(String, FiniteGroup)> {
    let mut out: Vec<(String, FiniteGroup)> = vec![
        ("C1".into(), cyclic(1)),
        ("C2".into(), cyclic(2)),
        ("C4".into(), cyclic(4)),
        ("C6".into(), cyclic(6)),
        ("C8".into(), cyclic(8)),
        ("C2xC2".into(), elementary_abelian(2, 2)),
        ("C2xC4".into(), abelian(&[2, 4])),
        ("C2^3".into(), elementary_abelian(2, 3)),
        ("C3xC3".into(), elementary_abelian(3, 2)),
        ("C4xC4".into(), abelian(&[4, 4])),
        ("C2^4".into(), elementary_abelian(2, 4)),
        ("C2xC8".into(), abelian(&[2, 8])),
        ("S3".into(), symmetric(3)),
        ("D4".into(), dihedral(4)),
        ("Q8".into(), quaternion(8)),
        ("D5".into(), dihedral(5)),
        ("D6".into(), dihedral(6)),
        ("Dic12".into(), dicyclic12()),
        ("A4".into(), alternating4()),
        ("D8".into(), dihedral(8)),
        ("Q16".into(), quaternion(16)),
        ("SD16".into(), semidihedral16()),
        ("M16".into(), modular16()),
        ("F20".into(), frobenius20()),
        ("F21".into(), frobenius21()),
        ("S4".into(), symmetric(4)),
        ("SL23".into(), sl23()),
        ("Heis27".into(), heisenberg(3)),
        ("ES27".into(), extraspecial27_exp9()),
    ];
    out.push(("D4xC2".into(), product(&dihedral(4), &cyclic(2))));
    out.push(("Q8xC2".into(), product(&quaternion(8), &cyclic(2))));
    out.push(("S3xC3".into(), product(&symmetric(3), &cyclic(3))));
    out.push(("D4xC3".into(), product(&dihedral(4), &cyclic(3))));
    out.push(("A4xC2".into(), product(&alternating4(), &cyclic(2))));
    out.push(("Q16xC2".into(), product(&quaternion(16), &cyclic(2))));
    out.push(("D4xC4".into(), product(&dihedral(4), &cyclic(4))));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_and_basic_invariants() {
        assert_eq!(dihedral(4).order(), 8);
        assert_eq!(quaternion(8).exponent(), 4);
        assert_eq!(quaternion(8).order_census(), vec![(1, 1), (2, 1), (4, 6)]);
        assert_eq!(semidihedral16().order_census(), vec![(1, 1), (2, 5), (4, 6), (8, 4)]);
        assert_eq!(modular16().order_census(), vec![(1, 1), (2, 3), (4, 4), (8, 8)]);
        assert_eq!(heisenberg(3).exponent(), 3);
        assert_eq!(extraspecial27_exp9().exponent(), 9);
        assert_eq!(sl23().order(), 24);
        assert_eq!(sl23().center().order(), 2);
        assert_eq!(frobenius21().center().order(), 1);
        assert!(metacyclic(7, 3, 0, 3).is_err());
    }

    #[test]
    fn corpus_tables_are_groups() {
        for (name, g) in small_corpus() {
            assert!(g.order() <= 32, "{name}");
            FiniteGroup::from_table(&g.table_rows()).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }
}
