use crate::group::{FiniteGroup, Subgroup};
use crate::{Error, Result};

/// A normalized cochain of degree 1, 2 or 3 with values in `Z/m`.
///
/// Values are stored only on tuples of non-identity elements; a tuple of
/// elements `(g_1, …, g_q)` maps to the mixed-radix index of
/// `(g_1 − 1, …, g_q − 1)` in base `order − 1` (last coordinate fastest).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub degree: u8,
    pub order: usize,
    pub modulus: u64,
    pub values: Vec<u64>,
}

impl Cochain {
    pub fn zero(order: usize, degree: u8, modulus: u64) -> Self {
        assert!((1..=3).contains(&degree));
        let len = (order - 1).pow(degree as u32);
        Cochain { degree, order, modulus, values: vec![0; len] }
    }

    /// Build a degree-1 cochain from a function on non-identity elements.
    pub fn from_fn1(order: usize, modulus: u64, f: impl Fn(u32) -> u64) -> Self {
        let values = (1..order as u32).map(|g| f(g) % modulus).collect();
        Cochain { degree: 1, order, modulus, values }
    }

    /// Build a degree-2 cochain from a function on pairs of non-identity
    /// elements.
    pub fn from_fn2(order: usize, modulus: u64, f: impl Fn(u32, u32) -> u64) -> Self {
        let mut values = Vec::with_capacity((order - 1) * (order - 1));
        for g in 1..order as u32 {
            for h in 1..order as u32 {
                values.push(f(g, h) % modulus);
            }
        }
        Cochain { degree: 2, order, modulus, values }
    }

    #[inline]
    pub fn get1(&self, g: u32) -> u64 {
        if g == 0 {
            0
        } else {
            self.values[g as usize - 1]
        }
    }

    #[inline]
    pub fn get2(&self, g: u32, h: u32) -> u64 {
        if g == 0 || h == 0 {
            0
        } else {
            self.values[(g as usize - 1) * (self.order - 1) + h as usize - 1]
        }
    }

    #[inline]
    pub fn get3(&self, g: u32, h: u32, k: u32) -> u64 {
        if g == 0 || h == 0 || k == 0 {
            0
        } else {
            let b = self.order - 1;
            self.values[((g as usize - 1) * b + h as usize - 1) * b + k as usize - 1]
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    fn check_group(&self, g: &FiniteGroup) -> Result<()> {
        if g.order() != self.order {
            return Err(Error::Input(format!(
                "cochain on a group of order {} used with a group of order {}",
                self.order,
                g.order()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        assert_eq!((self.degree, self.order, self.modulus), (other.degree, other.order, other.modulus));
        let m = self.modulus;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| (a + b) % m).collect();
        self.with_values(values)
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        self.add(&other.scale(other.modulus - 1))
    }

    pub fn scale(&self, k: u64) -> Cochain {
        let m = self.modulus;
        let values = self.values.iter().map(|&a| a * (k % m) % m).collect();
        self.with_values(values)
    }

    fn with_values(&self, values: Vec<u64>) -> Cochain {
        Cochain { degree: self.degree, order: self.order, modulus: self.modulus, values }
    }

    /// Bar differential; the result is again normalized.
    pub fn differential(&self, g: &FiniteGroup) -> Result<Cochain> {
        self.check_group(g)?;
        let n = self.order as u32;
        let m = self.modulus;
        match self.degree {
            1 => Ok(Cochain::from_fn2(self.order, m, |a, b| {
                (self.get1(a) + self.get1(b) + m - self.get1(g.mul(a, b))) % m
            })),
            2 => {
                let mut out = Cochain::zero(self.order, 3, m);
                let mut idx = 0;
                for a in 1..n {
                    for b in 1..n {
                        let ab = g.mul(a, b);
                        for c in 1..n {
                            let v = self.get2(b, c) + m - self.get2(ab, c) + self.get2(a, g.mul(b, c)) + m
                                - self.get2(a, b);
                            out.values[idx] = v % m;
                            idx += 1;
                        }
                    }
                }
                Ok(out)
            }
            _ => Err(Error::Input("differential: only degrees 1 and 2 are supported".into())),
        }
    }

    pub fn is_cocycle(&self, g: &FiniteGroup) -> Result<bool> {
        Ok(self.differential(g)?.is_zero())
    }

    /// Restriction to a subgroup, indexed by the subgroup's local labels.
    pub fn restrict(&self, g: &FiniteGroup, h: &Subgroup) -> Result<Cochain> {
        self.check_group(g)?;
        let e = &h.elements;
        let n = e.len();
        Ok(match self.degree {
            1 => Cochain::from_fn1(n, self.modulus, |a| self.get1(e[a as usize])),
            2 => Cochain::from_fn2(n, self.modulus, |a, b| self.get2(e[a as usize], e[b as usize])),
            _ => return Err(Error::Input("restrict: degree 3 not supported".into())),
        })
    }

    /// Pullback along a projection `G → Q` (self lives on `Q`).
    pub fn inflate(&self, g: &FiniteGroup, projection: &[u32]) -> Result<Cochain> {
        if projection.len() != g.order() {
            return Err(Error::Input("inflate: projection length mismatch".into()));
        }
        let p = |x: u32| projection[x as usize];
        Ok(match self.degree {
            1 => Cochain::from_fn1(g.order(), self.modulus, |a| self.get1(p(a))),
            2 => Cochain::from_fn2(g.order(), self.modulus, |a, b| self.get2(p(a), p(b))),
            _ => return Err(Error::Input("inflate: degree 3 not supported".into())),
        })
    }

    /// Transfer from a subgroup `h` (self in local labels) to `g`, using the
    /// right transversal of least coset elements.
    pub fn corestrict(&self, g: &FiniteGroup, h: &Subgroup) -> Result<Cochain> {
        if h.order() != self.order {
            return Err(Error::Input("corestrict: cochain does not live on the subgroup".into()));
        }
        let reps = g.right_transversal(h);
        // coset[x] = index into reps of the right coset H·x
        let mut coset = vec![0usize; g.order()];
        for (i, &t) in reps.iter().enumerate() {
            for &a in &h.elements {
                coset[g.mul(a, t) as usize] = i;
            }
        }
        // t·x = hpart(t, x)·rep(H t x), hpart in local labels
        let hpart = |ti: usize, x: u32| -> (u32, usize) {
            let tx = g.mul(reps[ti], x);
            let c = coset[tx as usize];
            let hh = g.mul(tx, g.inv(reps[c]));
            (h.index_of(hh).expect("coset decomposition"), c)
        };
        let m = self.modulus;
        Ok(match self.degree {
            1 => Cochain::from_fn1(g.order(), m, |x| {
                (0..reps.len()).map(|ti| self.get1(hpart(ti, x).0)).sum::<u64>() % m
            }),
            2 => Cochain::from_fn2(g.order(), m, |x, y| {
                let mut s = 0u64;
                for ti in 0..reps.len() {
                    let (h1, t1) = hpart(ti, x);
                    let (h2, _) = hpart(t1, y);
                    s += self.get2(h1, h2);
                }
                s % m
            }),
            _ => return Err(Error::Input("corestrict: degree 3 not supported".into())),
        })
    }

    /// Conjugation by `x ∈ G` on a cochain living on the normal subgroup `n`:
    /// `(ˣc)(τ₁, τ₂) = c(x⁻¹τ₁x, x⁻¹τ₂x)`.
    pub fn conjugate(&self, g: &FiniteGroup, n: &Subgroup, x: u32) -> Result<Cochain> {
        if n.order() != self.order {
            return Err(Error::Input("conjugate: cochain does not live on the subgroup".into()));
        }
        let xi = g.inv(x);
        let map: Vec<u32> = n
            .elements
            .iter()
            .map(|&t| n.index_of(g.conj(xi, t)).ok_or_else(|| Error::Input("conjugate: subgroup is not normal".into())))
            .collect::<Result<_>>()?;
        Ok(self.compose(&map))
    }

    /// `c ∘ (σ × σ)` for an element map `σ` of the underlying group.
    pub fn compose(&self, sigma: &[u32]) -> Cochain {
        let s = |a: u32| sigma[a as usize];
        match self.degree {
            1 => Cochain::from_fn1(self.order, self.modulus, |a| self.get1(s(a))),
            _ => Cochain::from_fn2(self.order, self.modulus, |a, b| self.get2(s(a), s(b))),
        }
    }
}
