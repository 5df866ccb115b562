//! End-to-end acceptance checks. Runs as a plain binary so that every
//! criterion prints exactly one line, in order, with its wall-clock time.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use frobfix::abgroup::{cokernel, kernel, localize, snf, FgAbGroup, GroupHom, IntMatrix, LocalizedGroup, PrimeSet};
use frobfix::curves::{
    builtin_corpus, find_curve, isogeny_degree_form, odd_power_sharpness, point_group, point_independence_check,
    rigidity_compare, verschiebung_checks, P1Point, Variety,
};
use frobfix::field::FqField;
use frobfix::fixpoint::{fixed_points, Endo, Resolution};
use frobfix::indgroup::{colim_vanishes, ind_fixed_points, roots_of_unity_ind, stabilize, Stabilization};
use frobfix::ktheory::{frobenius_k, frobenius_pi_table, PI_COLUMNS, PI_ROWS};
use frobfix::thh::frobenius_thh_rigidity;

use common::{
    binomial, brute_force, count_points_prime_field, determinantal_divisors, kernel_profile, profile_of_orders,
    quotient_profile, FiniteGroup,
};

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn cyc(n: u64) -> FgAbGroup {
    FgAbGroup::cyclic(n)
}

fn pow(p: u64, e: u32) -> u64 {
    p.pow(e)
}

// 1. Fixed points of Frobenius on K_*(F̄_p).
fn k_table() -> Check {
    for p in [2u64, 3, 5] {
        let t = frobenius_k(p, 12).map_err(|e| format!("p = {p}: {e}"))?;
        ensure!(t.all_resolved(), "p = {p}: unresolved extension");
        for n in -2..=12i64 {
            let want = match n {
                -1 | 0 => FgAbGroup::free(1),
                n if n > 0 && n % 2 == 1 => cyc(pow(p, ((n + 1) / 2) as u32) - 1),
                _ => FgAbGroup::trivial(),
            };
            let got = t.degree(n);
            ensure!(got.extension_resolved(), "p = {p}, n = {n}: unresolved");
            let g = got.resolved.ok_or(format!("p = {p}, n = {n}: no group"))?;
            ensure!(g == LocalizedGroup::from(want.clone()), "p = {p}, n = {n}: got {g}, want {want}");
        }
    }
    Ok(())
}

// 2. The stable stems table of F̄_p / Frob away from p.
fn pi_table() -> Check {
    for p in [3u64, 5, 7] {
        let t = frobenius_pi_table(p).map_err(|e| format!("p = {p}: {e}"))?;
        let loc = |g: FgAbGroup| localize(&g, &PrimeSet::single(p));
        let z = FgAbGroup::free(1);
        let two_two = FgAbGroup::from_orders(0, &[BigInt::from(2), BigInt::from(2)]);
        for r in PI_ROWS {
            for n in PI_COLUMNS {
                let want = match (r, n) {
                    (0, -1) => cyc(p - 1),
                    (0, 0) => two_two.direct_sum(&z),
                    (0, 1) => cyc(2),
                    (0, 2) => cyc(24),
                    (-1, 0) => z.clone(),
                    _ => FgAbGroup::trivial(),
                };
                let cell = t.cell(r, n).ok_or(format!("p = {p}: missing cell ({r}, {n})"))?;
                let got = cell.resolved.clone().ok_or(format!("p = {p}: cell ({r}, {n}) unresolved"))?;
                let want = loc(want);
                if want.is_trivial() {
                    ensure!(got.is_trivial(), "p = {p}, ({r}, {n}): got {got}, want 0");
                } else {
                    ensure!(got == want, "p = {p}, ({r}, {n}): got {got}, want {want}");
                }
            }
        }
        let c = t.cell(0, 0).unwrap();
        ensure!(c.resolution == Resolution::CoprimeSplit, "p = {p}: (0, 0) is {:?}", c.resolution);
        ensure!(c.sub == loc(two_two.clone()) && c.quot == loc(z.clone()), "p = {p}: (0, 0) pieces {} / {}", c.sub, c.quot);
    }
    Ok(())
}

// 3. Kummer theory along the factorial tower.
fn kummer() -> Check {
    for p in [2u64, 3, 5] {
        let f = ind_fixed_points(&roots_of_unity_ind(p).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        match stabilize(&f.ker_system, 8).map_err(|e| e.to_string())? {
            Stabilization::Stable { group, from_level } => {
                ensure!(group == cyc(p - 1), "p = {p}: kernel stabilized to {group}");
                ensure!(from_level as u64 <= p, "p = {p}: stable only from level {from_level}");
            }
            s => return Err(format!("p = {p}: {s:?}")),
        }
        // ker and coker of 1 − p on Z/(p^{m!} − 1) are both Z/gcd(p^{m!} − 1, p − 1) = Z/(p − 1).
        for m in 1..=4 {
            let k = f.ker_system.level(m).map_err(|e| e.to_string())?;
            let c = f.coker_system.level(m).map_err(|e| e.to_string())?;
            ensure!(k == cyc(p - 1) && c == cyc(p - 1), "p = {p}, level {m}: ker {k}, coker {c}");
        }
        let r = colim_vanishes(&f.coker_system, 4).map_err(|e| e.to_string())?;
        ensure!(r.is_certified(), "p = {p}: {} classes survive", r.surviving.len());
        let generators: usize = (1..=4).map(|m| f.coker_system.level(m).unwrap().generator_count()).sum();
        ensure!(r.certificates.len() == generators, "p = {p}: {} certificates for {generators} generators", r.certificates.len());
        // The transition m → l multiplies by (p^{l!} − 1)/(p^{m!} − 1) ≡ l!/m! mod p − 1.
        for c in &r.certificates {
            let want = (c.level..).find(|&l| ((c.level + 1)..=l).product::<usize>() as u64 % (p - 1) == 0).unwrap();
            ensure!(c.dies_at == want, "p = {p}: class from level {} dies at {}, expected {want}", c.level, c.dies_at);
        }
    }
    Ok(())
}

// 4. Verschiebung identities on the shipped corpus.
fn verschiebung() -> Check {
    let corpus = builtin_corpus();
    ensure!(corpus.len() >= 10, "corpus has {} curves", corpus.len());
    for p in [2u64, 3, 5, 7] {
        ensure!(corpus.iter().any(|e| e.p == p), "no curve over F_{p}");
    }
    for e in &corpus {
        let label = e.label();
        let r = verschiebung_checks(e, &[1, 2, 3], 5).map_err(|err| format!("{label}: {err}"))?;
        ensure!(r.passed, "{label}: report failed");
        let c = e.coefficients().map(|a| a as i64);
        let n = count_points_prime_field(e.p, c) as i128;
        let p = e.p as i128;
        let a = p + 1 - n;
        ensure!(r.trace as i128 == a, "{label}: trace {} but brute force gives {a}", r.trace);
        ensure!(r.deg_p_minus_v == p * n && r.p_times_points == p * n, "{label}: deg(p - V) = {}, p|E(F_p)| = {}", r.deg_p_minus_v, p * n);
        ensure!(isogeny_degree_form(e, -1, e.p as i64).unwrap() == p * n, "{label}: form at (-1, p)");
        for r0 in -5i64..=5 {
            for s0 in -5i64..=5 {
                if (r0, s0) == (0, 0) {
                    continue;
                }
                let (r1, s1) = (r0 as i128, s0 as i128);
                let form = s1 * s1 + a * r1 * s1 + p * r1 * r1;
                ensure!(form > 0, "{label}: form vanishes at ({r0}, {s0})");
                ensure!(isogeny_degree_form(e, r0, s0).unwrap() == form, "{label}: form mismatch at ({r0}, {s0})");
            }
        }
        for k in 1..=3u32 {
            let lc = &r.levels[(k - 1) as usize];
            ensure!(lc.v_after_frobenius_is_p && lc.frobenius_after_v_is_p, "{label}, k = {k}: V∘φ or φ∘V is not [p]");
            let g = point_group(e, k).map_err(|err| err.to_string())?;
            for &pt in g.points() {
                let pp = g.mul(e.p as i64, pt);
                ensure!(g.verschiebung(g.frobenius(pt)) == pp && g.frobenius(g.verschiebung(pt)) == pp, "{label}, k = {k}: at {pt:?}");
            }
            ensure!(lc.ker_p_minus_v as i128 <= p * n && (p * n) % lc.ker_p_minus_v as i128 == 0, "{label}, k = {k}: ker(p - V)");
        }
        ensure!(r.kernel_counts_divide_form, "{label}: kernel count does not divide the degree");
        for &k in &r.rational_levels {
            let lc = r.levels.iter().find(|l| l.level == k).unwrap();
            ensure!(lc.ker_p_minus_v as i128 == p * n, "{label}: level {k} claimed rational");
        }
    }
    Ok(())
}

// 5. Supersingular witnesses over F_{p²} with a vanishing degree form.
fn odd_power() -> Check {
    for p in [2u64, 3] {
        let w = odd_power_sharpness(p).map_err(|e| format!("p = {p}: {e}"))?;
        let q = (p * p) as i128;
        ensure!((w.r, w.s) != (0, 0), "p = {p}: trivial (r, s)");
        let (r, s, a) = (w.r as i128, w.s as i128, w.trace as i128);
        ensure!(s * s + a * r * s + q * r * r == 0 && w.degree == 0, "p = {p}: form does not vanish");
        ensure!(a.abs() == 2 * p as i128, "p = {p}: trace {a}");
        ensure!(w.frobenius_is_scalar && w.kernel_is_everything, "p = {p}: verification failed");
        // Independent point count over F_{p²}.
        let f = &w.field;
        let [a1, a2, a3, a4, a6] = w.coefficients;
        let mut n = 1i128;
        for x in f.elements() {
            for y in f.elements() {
                let lhs = f.add(f.add(f.mul(y, y), f.mul(a1, f.mul(x, y))), f.mul(a3, y));
                let x2 = f.mul(x, x);
                let rhs = f.add(f.add(f.add(f.mul(x2, x), f.mul(a2, x2)), f.mul(a4, x)), a6);
                n += (lhs == rhs) as i128;
            }
        }
        ensure!(n == q + 1 - a && n == w.points as i128, "p = {p}: {n} points, trace {a}");
    }
    Ok(())
}

// 6. Weight-one rigidity for a point, P¹ and two elliptic curves.
fn weight_one() -> Check {
    let corpus = builtin_corpus();
    let e1 = find_curve(&corpus, "E1").ok_or("E1 missing")?.clone();
    let e2 = find_curve(&corpus, "E2").ok_or("E2 missing")?.clone();
    let cases = [
        (Variety::Point, 3u64),
        (Variety::Point, 5),
        (Variety::ProjLine, 3),
        (Variety::ProjLine, 5),
        (Variety::Elliptic { curve: e1 }, 3),
        (Variety::Elliptic { curve: e2 }, 5),
    ];
    for (x, p) in cases {
        let r = rigidity_compare(&x, p, &[1, 2, 3, 4], true).map_err(|e| format!("{x}: {e}"))?;
        for s in &r.summands {
            let name = format!("{x}, p = {p}, {}", s.summand);
            let from = s.stable_from.ok_or(format!("{name}: kernels do not stabilize"))?;
            ensure!(s.kernels_agree, "{name}: kernels disagree");
            let stable: Vec<_> = s.kernels.iter().filter(|k| k.level >= from).collect();
            ensure!(stable.windows(2).all(|w| w[0].group == w[1].group), "{name}: kernels differ past level {from}");
            for c in s.classes.iter().filter(|c| c.level <= 3) {
                ensure!(c.dies_at.is_some() || s.coker_constant, "{name}: class {:?} at level {} not certified", c.class, c.level);
            }
            let expected_order = match s.summand {
                "units" => Some(p - 1),
                "pic0" => match &x {
                    Variety::Elliptic { curve } => {
                        let n = count_points_prime_field(p, curve.coefficients().map(|a| a as i64));
                        Some(PrimeSet::single(p).surviving_part(&BigInt::from(n)).to_u64().unwrap())
                    }
                    _ => None,
                },
                _ => None,
            };
            if let Some(want) = expected_order {
                for k in &s.kernels {
                    ensure!(k.group.order() == Some(BigInt::from(want)), "{name}: kernel {} at level {}, want {want}", k.group, k.level);
                }
            }
        }
    }
    Ok(())
}

// 7. Evaluation at two rational points of P¹ ∖ {0, 1, ∞}.
fn point_independence() -> Check {
    let removed = [P1Point::Finite(0), P1Point::Finite(1), P1Point::Infinity];
    for (p, m) in [(2u64, 2u32), (3, 2)] {
        let f = FqField::new(p, m).map_err(|e| e.to_string())?;
        let pts: Vec<_> = f.elements().filter(|&c| c != f.zero() && c != f.one()).collect();
        for &c0 in &pts {
            for &c1 in &pts {
                let r = point_independence_check(&Variety::Point, p, &removed, m, c0, c1).map_err(|e| e.to_string())?;
                // Over F_4 both 1 − 2 pieces vanish; over F_9 there is something to compare.
                ensure!(p == 2 || !r.classes.is_empty(), "q = {}: no classes", f.order());
                ensure!(r.passed && r.classes.iter().all(|c| c.agree), "q = {}, c0 = {c0}, c1 = {c1}: evaluations differ", f.order());
            }
        }
    }
    Ok(())
}

// 8. Artin–Schreier fixed points of HKR-truncated THH.
fn thh() -> Check {
    let bound = 5u32;
    for p in [2u64, 3, 5] {
        for d in [1usize, 2] {
            for n in 0..=5usize {
                let want: usize = (0..=n / 2).map(|i| binomial(d, n - 2 * i) * binomial(bound as usize + d, d)).sum();
                let r = frobenius_thh_rigidity(d, n, bound, p, &[1, 2, 3]).map_err(|e| e.to_string())?;
                let tag = format!("p = {p}, d = {d}, n = {n}");
                ensure!(r.expected_dim == want, "{tag}: HKR dimension {} vs {want}", r.expected_dim);
                for l in &r.per_level {
                    ensure!(l.ker_dim == want, "{tag}, level {}: kernel {} vs {want}", l.level, l.ker_dim);
                    ensure!(l.coker_dim == l.ker_dim, "{tag}, level {}: |ker| != |coker|", l.level);
                    if l.level <= 2 {
                        ensure!(l.certified == l.coker_dim && l.dies_at.is_some(), "{tag}, level {}: {} of {} classes", l.level, l.certified, l.coker_dim);
                    }
                }
            }
        }
    }
    Ok(())
}

fn random_matrix(rng: &mut ChaCha8Rng) -> Vec<Vec<i128>> {
    let rows = rng.gen_range(1..=5);
    let cols = rng.gen_range(1..=5);
    let sparse = rng.gen_bool(0.3);
    (0..rows)
        .map(|_| (0..cols).map(|_| if sparse && rng.gen_bool(0.6) { 0 } else { rng.gen_range(-12..=12) }).collect())
        .collect()
}

fn to_int_matrix(m: &[Vec<i128>]) -> IntMatrix {
    let cols = m.first().map_or(0, |r| r.len());
    let rows: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    IntMatrix::from_rows(cols, &rows)
}

/// A random finite group in invariant-factor form with order ≤ 1000, and a
/// random endomorphism of it given row-wise.
fn random_endo(rng: &mut ChaCha8Rng) -> (FgAbGroup, Vec<Vec<i64>>) {
    let g = loop {
        let k = rng.gen_range(1..=3);
        let orders: Vec<BigInt> = (0..k).map(|_| BigInt::from(rng.gen_range(1..=16u64))).collect();
        let g = FgAbGroup::from_orders(0, &orders);
        if g.order().unwrap() <= BigInt::from(1000) {
            break g;
        }
    };
    let d: Vec<i64> = g.invariant_factors().iter().map(|x| x.to_i64().unwrap()).collect();
    // Column j is the image of a generator of order d[j]; entry i must be killed by d[j] mod d[i].
    let m = (0..d.len())
        .map(|i| (0..d.len()).map(|j| rng.gen_range(0..d[i]) * (d[i] / num_integer::gcd(d[i], d[j]))).collect())
        .collect();
    (g, m)
}

// 9. Smith normal form and kernel/cokernel against brute force.
fn oracles() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for t in 0..500 {
        let a = random_matrix(&mut rng);
        let m = to_int_matrix(&a);
        let s = snf::smith(&m);
        ensure!(s.u.mul(&m).mul(&s.v) == s.d, "matrix {t}: U·A·V != D");
        ensure!(s.d.is_diagonal(), "matrix {t}: D not diagonal");
        ensure!(s.u.determinant().abs().is_one() && s.v.determinant().abs().is_one(), "matrix {t}: not unimodular");
        ensure!(s.v.mul(&s.v_inv) == IntMatrix::identity(m.cols()), "matrix {t}: V·V⁻¹ != I");
        let n = m.rows().min(m.cols());
        let diag: Vec<BigInt> = (0..n).map(|i| s.d[(i, i)].clone()).collect();
        for i in 1..n {
            let ok = if diag[i - 1].is_zero() { diag[i].is_zero() } else { (&diag[i] % &diag[i - 1]).is_zero() };
            ensure!(ok, "matrix {t}: divisibility fails at {i}");
        }
        // d_1⋯d_k equals the gcd of the k × k minors.
        let dd = determinantal_divisors(&a);
        let mut prod = BigInt::one();
        for k in 0..n {
            prod *= diag[k].abs();
            ensure!(prod == BigInt::from(dd[k]), "matrix {t}: d_1..d_{} = {prod}, minors give {}", k + 1, dd[k]);
        }
    }
    for t in 0..200 {
        let (g, m) = random_endo(&mut rng);
        let orders: Vec<u64> = g.invariant_factors().iter().map(|x| x.to_u64().unwrap()).collect();
        let fg = FiniteGroup::new(orders.clone());
        let exp = g.exponent().to_u64().unwrap();
        let f = GroupHom::between(&g, &g, to_int_matrix(&m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect::<Vec<_>>()))
            .map_err(|e| format!("endo {t}: {e}"))?;
        let brute = brute_force(&fg, &m);
        let (k, _) = kernel(&f).map_err(|e| e.to_string())?;
        let c = cokernel(&f).map_err(|e| e.to_string())?;
        let kord: Vec<u64> = k.invariant_factors().iter().map(|x| x.to_u64().unwrap()).collect();
        let cord: Vec<u64> = c.group.invariant_factors().iter().map(|x| x.to_u64().unwrap()).collect();
        ensure!(k.free_rank() == 0 && c.group.free_rank() == 0, "endo {t}: free part in a finite group");
        ensure!(profile_of_orders(&kord, exp) == kernel_profile(&fg, &brute.ker, exp), "endo {t}: kernel {k} disagrees with enumeration");
        ensure!(profile_of_orders(&cord, exp) == quotient_profile(&fg, &brute.image, exp), "endo {t}: cokernel {} disagrees with enumeration", c.group);
        // Homotopy fixed points of the same map: |ker(1 − φ)| = |coker(1 − φ)|.
        let fp = fixed_points(&Endo::new(LocalizedGroup::from(g.clone()), f.matrix().clone()).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        ensure!(fp.h0.order().is_some() && fp.h0.order() == fp.h1.order(), "endo {t}: |h0| = {}, |h1| = {}", fp.h0, fp.h1);
    }
    Ok(())
}

struct Criterion {
    number: usize,
    name: &'static str,
    limit: Duration,
    run: fn() -> Check,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { number: 1, name: "Frobenius K-theory table", limit: Duration::from_secs(5), run: k_table },
        Criterion { number: 2, name: "Frobenius stable homotopy table", limit: Duration::from_secs(1), run: pi_table },
        Criterion { number: 3, name: "Kummer rigidity", limit: Duration::from_secs(5), run: kummer },
        Criterion { number: 4, name: "Verschiebung identities", limit: Duration::from_secs(60), run: verschiebung },
        Criterion { number: 5, name: "odd-power sharpness", limit: Duration::from_secs(30), run: odd_power },
        Criterion { number: 6, name: "weight-one rigidity", limit: Duration::from_secs(60), run: weight_one },
        Criterion { number: 7, name: "point independence", limit: Duration::from_secs(5), run: point_independence },
        Criterion { number: 8, name: "Frobenius THH", limit: Duration::from_secs(30), run: thh },
        Criterion { number: 9, name: "oracle suites", limit: Duration::from_secs(30), run: oracles },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|_| {
            if elapsed > c.limit {
                Err(format!("took {elapsed:?}, limit {:?}", c.limit))
            } else {
                Ok(())
            }
        });
        match outcome {
            Ok(()) => println!("criterion {}: PASS  {} ({} ms)", c.number, c.name, elapsed.as_millis()),
            Err(e) => {
                failed += 1;
                println!("criterion {}: FAIL  {} ({} ms): {e}", c.number, c.name, elapsed.as_millis());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
