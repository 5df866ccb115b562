//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the library's linear algebra.

#![allow(dead_code)]

use std::collections::HashSet;

use num_integer::Integer;

/// `⊕ Z/orders[i]`, every element listed in mixed radix.
pub struct FiniteGroup {
    pub orders: Vec<u64>,
}

impl FiniteGroup {
    pub fn new(orders: Vec<u64>) -> Self {
        FiniteGroup { orders }
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for &n in &self.orders {
            out = out.into_iter().flat_map(|v| (0..n).map(move |x| [v.clone(), vec![x]].concat())).collect();
        }
        out
    }

    pub fn scale(&self, k: u64, x: &[u64]) -> Vec<u64> {
        x.iter().zip(&self.orders).map(|(&a, &n)| (a * k) % n).collect()
    }

    pub fn is_zero(&self, x: &[u64]) -> bool {
        x.iter().all(|&a| a == 0)
    }

    /// `x ↦ M·x` with `M` given row-wise, entries reduced into each target factor.
    pub fn apply(&self, m: &[Vec<i64>], x: &[u64]) -> Vec<u64> {
        m.iter()
            .zip(&self.orders)
            .map(|(row, &n)| {
                let s: i128 = row.iter().zip(x).map(|(&a, &b)| a as i128 * b as i128).sum();
                s.rem_euclid(n as i128) as u64
            })
            .collect()
    }
}

/// Number of elements killed by `k`, for `k` dividing `exponent`, in the
/// group with the given cyclic orders. Determines a finite abelian group.
pub fn profile_of_orders(orders: &[u64], exponent: u64) -> Vec<u64> {
    divisors(exponent).into_iter().map(|k| orders.iter().map(|&n| n.gcd(&k)).product()).collect()
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

pub struct BruteFixedPoints {
    pub ker: Vec<Vec<u64>>,
    pub image: HashSet<Vec<u64>>,
}

/// Kernel elements and image of an endomorphism by enumeration.
pub fn brute_force(g: &FiniteGroup, m: &[Vec<i64>]) -> BruteFixedPoints {
    let mut ker = vec![];
    let mut image = HashSet::new();
    for x in g.elements() {
        let y = g.apply(m, &x);
        if g.is_zero(&y) {
            ker.push(x);
        }
        image.insert(y);
    }
    BruteFixedPoints { ker, image }
}

/// Profile of the kernel: for each `k | exponent`, how many kernel elements `k` kills.
pub fn kernel_profile(g: &FiniteGroup, ker: &[Vec<u64>], exponent: u64) -> Vec<u64> {
    divisors(exponent).into_iter().map(|k| ker.iter().filter(|x| g.is_zero(&g.scale(k, x))).count() as u64).collect()
}

/// Profile of `G / H`: `#{x : kx ∈ H} / |H|`.
pub fn quotient_profile(g: &FiniteGroup, h: &HashSet<Vec<u64>>, exponent: u64) -> Vec<u64> {
    let all = g.elements();
    divisors(exponent)
        .into_iter()
        .map(|k| all.iter().filter(|x| h.contains(&g.scale(k, x))).count() as u64 / h.len() as u64)
        .collect()
}

pub fn det(m: &[Vec<i128>]) -> i128 {
    // Bareiss elimination, exact over the integers.
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// `d_k` = gcd of all `k × k` minors, for `k = 1..=min(rows, cols)`.
pub fn determinantal_divisors(m: &[Vec<i128>]) -> Vec<i128> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    (1..=rows.min(cols))
        .map(|k| {
            let mut g = 0i128;
            for rs in combinations(rows, k) {
                for cs in combinations(cols, k) {
                    let sub: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j]).collect()).collect();
                    g = g.gcd(&det(&sub));
                }
            }
            g
        })
        .collect()
}

/// Points of `y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6` over `F_p`, with infinity.
pub fn count_points_prime_field(p: u64, [a1, a2, a3, a4, a6]: [i64; 5]) -> u64 {
    let p = p as i64;
    let mut n = 1;
    for x in 0..p {
        for y in 0..p {
            let lhs = y * y + a1 * x * y + a3 * y;
            let rhs = x * x * x + a2 * x * x + a4 * x + a6;
            if (lhs - rhs).rem_euclid(p) == 0 {
                n += 1;
            }
        }
    }
    n
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
