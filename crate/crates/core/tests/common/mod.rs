#![allow(dead_code)]

use cubicbranch::{Interval, SineExpansion};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

pub fn q(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

fn inside(x: &BigRational, r: Interval) -> bool {
    &q(r.lo()) <= x && x <= &q(r.hi())
}

/// Doubles spread over many binades, both signs.
pub fn wide_f64() -> impl Strategy<Value = f64> {
    (-1.0f64..1.0, -60i32..60).prop_map(|(m, e)| m * 2f64.powi(e))
}

pub fn operand() -> impl Strategy<Value = Interval> {
    (wide_f64(), prop_oneof![Just(0.0), 0.0f64..1.0], -60i32..10).prop_map(|(lo, w, e)| {
        let hi = lo + w * lo.abs().max(1.0) * 2f64.powi(e);
        Interval::new(lo, hi.max(lo)).unwrap()
    })
}

pub const OPS: [&str; 7] = ["add", "sub", "mul", "div", "sqr", "sqrt", "mul_f64"];

/// Checks one operation on the endpoints against exact rational arithmetic.
///
/// For the binary ops every corner combination is checked; by monotonicity in
/// each argument the extreme values over the box are attained there.
pub fn check_op(op: usize, a: Interval, b: Interval) -> Result<(), String> {
    let corners = |f: &dyn Fn(&BigRational, &BigRational) -> Option<BigRational>, r: Interval| {
        for x in [a.lo(), a.hi()] {
            for y in [b.lo(), b.hi()] {
                if let Some(v) = f(&q(x), &q(y)) {
                    if !inside(&v, r) {
                        return Err(format!("{} {x:e} {y:e} -> {v} not in {r:?}", OPS[op]));
                    }
                }
            }
        }
        Ok(())
    };
    match op {
        0 => corners(&|x, y| Some(x + y), a + b),
        1 => corners(&|x, y| Some(x - y), a - b),
        2 => corners(&|x, y| Some(x * y), a * b),
        3 => match a.checked_div(b) {
            Ok(r) => corners(&|x, y| (!y.is_zero()).then(|| x / y), r),
            Err(_) if b.contains_zero() => Ok(()),
            Err(e) => Err(format!("div failed on {a:?} / {b:?}: {e}")),
        },
        4 => {
            let r = a.sqr();
            for x in [a.lo(), a.hi()] {
                let v = q(x) * q(x);
                if !inside(&v, r) {
                    return Err(format!("sqr {x:e} not in {r:?}"));
                }
            }
            if a.contains_zero() && r.lo() > 0.0 {
                return Err(format!("sqr of {a:?} misses 0"));
            }
            Ok(())
        }
        5 => {
            let a = a.abs();
            let r = a.sqrt().map_err(|e| e.to_string())?;
            // lo² <= x and x <= hi² at the endpoints, compared exactly
            let (lo, hi) = (q(r.lo()), q(r.hi()));
            if r.lo() < 0.0 || &lo * &lo > q(a.lo()) || &hi * &hi < q(a.hi()) {
                return Err(format!("sqrt {a:?} -> {r:?}"));
            }
            Ok(())
        }
        6 => {
            let s = b.mid();
            let r = a.mul_f64(s);
            for x in [a.lo(), a.hi()] {
                if !inside(&(q(x) * q(s)), r) {
                    return Err(format!("mul_f64 {x:e} * {s:e} not in {r:?}"));
                }
            }
            Ok(())
        }
        _ => unreachable!(),
    }
}

/// `∫₀¹ sin(a₁πx)···sin(a_kπx) dx` for odd indices and even `k`.
///
/// Expanding each sine into exponentials, only sign patterns with
/// `Σ εᵢ aᵢ = 0` survive, each contributing `Π εᵢ`, and the prefactor is
/// `(2i)^{-k}`, real because `k` is even.
pub fn sine_product_integral(idx: &[usize]) -> BigRational {
    let k = idx.len();
    assert!(k % 2 == 0);
    let mut acc = 0i64;
    for mask in 0u32..(1 << k) {
        let mut sum = 0i64;
        let mut sign = 1i64;
        for (t, &a) in idx.iter().enumerate() {
            if mask & (1 << t) != 0 {
                sum -= a as i64;
                sign = -sign;
            } else {
                sum += a as i64;
            }
        }
        if sum == 0 {
            acc += sign;
        }
    }
    let denom = BigInt::from(2).pow(k as u32);
    let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
    BigRational::new(BigInt::from(sign * acc), denom)
}

/// `∫_Ω ω^k` by enumerating all `k`-tuples of modes, in interval arithmetic.
pub fn brute_force_power(omega: &SineExpansion<Interval>, k: usize) -> Interval {
    let modes: Vec<(usize, usize, Interval)> = omega.modes().collect();
    let n = modes.len();
    let odd: Vec<usize> = (1..=omega.max_odd()).step_by(2).collect();
    let slot = |i: usize| (i - 1) / 2;
    // tabulate 1D integrals by index tuple
    let side = odd.len();
    let mut table = vec![0.0f64; side.pow(k as u32)];
    let mut tuple = vec![0usize; k];
    for code in 0..table.len() {
        let mut c = code;
        for t in tuple.iter_mut() {
            *t = odd[c % side];
            c /= side;
        }
        let v = sine_product_integral(&tuple);
        // dyadic with a small numerator, so exact in f64
        table[code] = v.to_f64().unwrap();
    }
    let code_of = |xs: &[usize]| xs.iter().rev().fold(0, |acc, &i| acc * side + slot(i));
    let mut acc = Interval::ZERO;
    let mut pick = vec![0usize; k];
    loop {
        let xs: Vec<usize> = pick.iter().map(|&p| modes[p].0).collect();
        let wx = table[code_of(&xs)];
        if wx != 0.0 {
            let ys: Vec<usize> = pick.iter().map(|&p| modes[p].1).collect();
            let wy = table[code_of(&ys)];
            if wy != 0.0 {
                let mut term = Interval::point(wx * wy);
                for &p in &pick {
                    term = term * modes[p].2;
                }
                acc += term;
            }
        }
        let mut t = 0;
        loop {
            if t == k {
                return acc;
            }
            pick[t] += 1;
            if pick[t] < n {
                break;
            }
            pick[t] = 0;
            t += 1;
        }
    }
}

/// Random expansion with odd indices up to `max_index` and coefficients in `[-1, 1]`.
pub fn expansion(max_index: usize) -> impl Strategy<Value = SineExpansion<f64>> {
    let side = max_index.div_ceil(2);
    proptest::collection::vec(-1.0f64..1.0, side * side)
        .prop_map(move |c| SineExpansion::from_fn(max_index, |i, j| c[((i - 1) / 2) * side + (j - 1) / 2]))
}

/// Expansion dominated by the fundamental mode, hence positive.
pub fn positive_expansion(max_index: usize) -> impl Strategy<Value = SineExpansion<f64>> {
    (0.5f64..3.0, expansion(max_index), 0.0f64..0.05).prop_map(move |(a, e, s)| {
        SineExpansion::from_fn(max_index, |i, j| {
            if (i, j) == (1, 1) {
                a
            } else {
                s * a * e.get(i, j) / (i * j) as f64
            }
        })
    })
}

/// Midpoint rule on an `m x m` grid, exact for trigonometric polynomials of low enough degree.
pub fn midpoint_rule(m: usize, f: impl Fn(f64, f64) -> f64) -> f64 {
    let h = 1.0 / m as f64;
    let mut acc = 0.0;
    for a in 0..m {
        for b in 0..m {
            acc += f((a as f64 + 0.5) * h, (b as f64 + 0.5) * h);
        }
    }
    acc * h * h
}
