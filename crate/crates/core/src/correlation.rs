//! Pairwise correlation coefficients: Pearson, Spearman (mid-rank ties) and
//! Kendall tau-a.

use std::cmp::Ordering;

use crate::design::{has_ties, ranks};
use crate::Scalar;

/// Pearson product-moment coefficient; `None` if either input has zero variance.
pub fn pearson<T: Scalar>(x: &[T], y: &[T]) -> Option<T> {
    assert_eq!(x.len(), y.len(), "pearson: length mismatch");
    let n = x.len();
    if n == 0 {
        return None;
    }
    let nn = T::of_usize(n);
    let mx = x.iter().copied().sum::<T>() / nn;
    let my = y.iter().copied().sum::<T>() / nn;
    let (mut sxy, mut sxx, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy = sxy + dx * dy;
        sxx = sxx + dx * dx;
        syy = syy + dy * dy;
    }
    if sxx == T::zero() || syy == T::zero() {
        return None;
    }
    let r = sxy / (sxx * syy).sqrt();
    // rounding can push |r| a hair past 1
    Some(r.max(-T::one()).min(T::one()))
}

/// Spearman coefficient.
///
/// Distinct values use the classical `1 - 6 Σd² / (n(n²-1))`; with ties the
/// Pearson coefficient of the mid-ranks is returned instead. `None` when
/// either input is constant or has fewer than two entries.
pub fn spearman<T: Scalar>(x: &[T], y: &[T]) -> Option<T> {
    assert_eq!(x.len(), y.len(), "spearman: length mismatch");
    let n = x.len();
    if n < 2 {
        return None;
    }
    let rx = ranks(x);
    let ry = ranks(y);
    if has_ties(x) || has_ties(y) {
        return pearson(&rx, &ry);
    }
    let d2: T = rx.iter().zip(&ry).map(|(&a, &b)| (a - b) * (a - b)).sum();
    let nn = T::of_usize(n);
    Some(T::one() - T::of(6.0) * d2 / (nn * (nn * nn - T::one())))
}

/// Kendall tau-a: `(concordant - discordant) / (n(n-1)/2)`; pairs tied in
/// either coordinate count as neither.
///
/// O(n log n) via sorting and merge-sort inversion counting.
pub fn kendall_tau_a<T: Scalar>(x: &[T], y: &[T]) -> Option<T> {
    assert_eq!(x.len(), y.len(), "kendall: length mismatch");
    let n = x.len();
    if n < 2 {
        return None;
    }
    let cmp = |a: &T, b: &T| a.partial_cmp(b).unwrap_or(Ordering::Equal);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| cmp(&x[a], &x[b]).then_with(|| cmp(&y[a], &y[b])));

    let pairs = |t: u64| t * (t.saturating_sub(1)) / 2;
    let total = pairs(n as u64);

    let mut tied_x = 0u64;
    let mut tied_xy = 0u64;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && x[idx[j]] == x[idx[i]] {
            j += 1;
        }
        tied_x += pairs((j - i) as u64);
        let mut a = i;
        while a < j {
            let mut b = a + 1;
            while b < j && y[idx[b]] == y[idx[a]] {
                b += 1;
            }
            tied_xy += pairs((b - a) as u64);
            a = b;
        }
        i = j;
    }

    let mut seq: Vec<T> = idx.iter().map(|&i| y[i]).collect();
    let mut buf = seq.clone();
    let discordant = count_inversions(&mut seq, &mut buf);

    let mut tied_y = 0u64;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && seq[j] == seq[i] {
            j += 1;
        }
        tied_y += pairs((j - i) as u64);
        i = j;
    }

    let untied = total + tied_xy - tied_x - tied_y;
    let s = untied as f64 - 2.0 * discordant as f64;
    Some(T::of(s) / T::from_u64(total).unwrap())
}

/// Sorts `v` ascending and returns the number of strictly inverted pairs.
fn count_inversions<T: Scalar>(v: &mut [T], buf: &mut [T]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let (lb, rb) = buf.split_at_mut(mid);
    let mut inv = {
        let (l, r) = v.split_at_mut(mid);
        count_inversions(l, lb) + count_inversions(r, rb)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[j] < v[i] {
            buf[k] = v[j];
            inv += (mid - i) as u64;
            j += 1;
        } else {
            buf[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    while i < mid {
        buf[k] = v[i];
        i += 1;
        k += 1;
    }
    while j < n {
        buf[k] = v[j];
        j += 1;
        k += 1;
    }
    v.copy_from_slice(&buf[..n]);
    inv
}
