//! Exact integer kernels for orbit counting.
//!
//! Everything about the orbit of 0 under the proxy rotation alpha = P/Q lives
//! on the residue grid: the point {t alpha} is the integer (t*P mod Q) in
//! units of 1/Q. Counting orbit points in an interval is then a lattice
//! counting problem, solved exactly by floor sums in O(log Q) regardless of
//! how many orbit points are involved.

/// Sum of floor((a*i + b) / m) for i in 0..n. Handles negative a and b.
/// Caller guarantees the intermediate products fit i128 (m, |a|, |b| < 2^63
/// and n < 2^63 suffice).
pub(crate) fn floor_sum(n: i128, m: i128, mut a: i128, mut b: i128) -> i128 {
    debug_assert!(n >= 0 && m > 0);
    let mut ans: i128 = 0;
    if a < 0 {
        let a2 = a.rem_euclid(m);
        ans -= n * (n - 1) / 2 * ((a2 - a) / m);
        a = a2;
    }
    if b < 0 {
        let b2 = b.rem_euclid(m);
        ans -= n * ((b2 - b) / m);
        b = b2;
    }
    let (mut n, mut m, mut a, mut b) = (n, m, a, b);
    loop {
        if a >= m {
            ans += n * (n - 1) / 2 * (a / m);
            a %= m;
        }
        if b >= m {
            ans += n * (b / m);
            b %= m;
        }
        let y_max = a * n + b;
        if y_max < m {
            return ans;
        }
        n = y_max / m;
        b = y_max % m;
        std::mem::swap(&mut m, &mut a);
    }
}

/// Number of u in [0, n) with (z0 + u*step) mod q inside the cyclic window
/// of `width` residues starting at `base`. Exact.
pub(crate) fn count_in_window(
    z0: u128,
    step: u128,
    q: u128,
    n: u64,
    base: u128,
    width: u128,
) -> u64 {
    debug_assert!(q < (1 << 63), "modulus must leave i128 headroom");
    if width == 0 || n == 0 {
        return 0;
    }
    if width >= q {
        return n;
    }
    // shift so the window starts at 0: y_u = (z0 - base + u*step) mod q < width
    let z = (z0 + q - base % q) % q;
    let n = n as i128;
    let (q, s, z, w) = (q as i128, (step % q) as i128, z as i128, width as i128);
    let hi = floor_sum(n, q, s, z);
    let lo = floor_sum(n, q, s, z - w);
    u64::try_from(hi - lo).expect("window count is nonnegative")
}

/// Minimal u >= 1 with (u*step) mod q in the cyclic window [base, base+width),
/// or None when no such u exists at all.
pub(crate) fn min_multiple_in_window(step: u128, q: u128, base: u128, width: u128) -> Option<u128> {
    if width == 0 {
        return None;
    }
    if width >= q {
        return Some(1);
    }
    let a = step % q;
    let lo = base % q;
    let hi = (lo + width - 1) % q; // inclusive upper residue
    if lo <= hi {
        min_u_rec(a, q, lo, hi)
    } else {
        // wrapped window = [lo, q-1] plus [0, hi]
        let u1 = min_u_rec(a, q, lo, q - 1);
        let u2 = min_u_rec(a, q, 0, hi);
        match (u1, u2) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        }
    }
}

/// Minimal u >= 1 with (u*a) mod m in [lo, hi] (inclusive, lo <= hi < m).
fn min_u_rec(a: u128, m: u128, lo: u128, hi: u128) -> Option<u128> {
    debug_assert!(lo <= hi && hi < m);
    let a = a % m;
    if a == 0 {
        return (lo == 0).then_some(1);
    }
    // Solutions with no wraparound: smallest u >= 1 with lo <= u*a <= hi.
    // Any wrapped solution has u*a >= m > hi, so this candidate wins if valid;
    // and no smaller u can be valid since u < ceil(lo/a) means u*a < lo.
    let u0 = lo.div_ceil(a).max(1);
    if u0 * a <= hi {
        return Some(u0);
    }
    // Wrapped: u*a - k*m in [lo, hi] for some k >= 1, i.e. some r in [lo, hi]
    // has a | (k*m + r), i.e. (-k*m) mod a lies in the width-(hi-lo+1) cyclic
    // window of Z_a starting at lo mod a. u is increasing in k, so take the
    // minimal such k (recursion on a strictly smaller modulus).
    let m_neg = (a - m % a) % a; // (-m) mod a
    let width = hi - lo + 1;
    let k = min_multiple_in_window(m_neg, a, lo % a, width)?;
    let c = (k % a) * m_neg % a; // (-k*m) mod a
    let r = lo + (c + a - lo % a) % a;
    debug_assert!(r <= hi);
    debug_assert!((k * m + r).is_multiple_of(a));
    Some((k * m + r) / a)
}

/// All u in [0, n) with (z0 + u*step) mod q in the cyclic window, in
/// increasing u order. Intended for narrow windows; `cap` bounds the search.
pub(crate) fn hits_in_window(
    z0: u128,
    step: u128,
    q: u128,
    n: u64,
    base: u128,
    width: u128,
    cap: usize,
) -> Vec<(u64, u128)> {
    let mut out = Vec::new();
    if width == 0 || n == 0 {
        return out;
    }
    let in_window = |z: u128| (z + q - base % q) % q < width;
    let mut u: u128 = 0;
    let mut z = z0 % q;
    if in_window(z) {
        out.push((0, z));
    }
    while out.len() < cap {
        // minimal du >= 1 with (z + du*step) mod q in window
        let rel_base = (base % q + q - z) % q;
        let Some(du) = min_multiple_in_window(step, q, rel_base, width) else {
            break;
        };
        u += du;
        if u >= n as u128 {
            break;
        }
        z = (z + (du % q) * (step % q)) % q;
        debug_assert!(in_window(z));
        out.push((u as u64, z));
    }
    out
}
