//! One-dimensional derivative-free minimization over a closed interval.

/// 1/φ, the golden-section contraction ratio.
const INVPHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the minimum of `f` on `[a, b]`.
///
/// Contracts the bracket until its width drops below `tol`, then compares the
/// interior estimate against both endpoints, so boundary minima of merely
/// unimodal (not strictly interior-convex) objectives are still found.
/// Returns `(argmin, min)`.
pub(crate) fn golden_section_min(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    debug_assert!(b >= a && tol > 0.0);
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INVPHI * (hi - lo);
    let mut x2 = lo + INVPHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    // each step shrinks the bracket by 1/φ; 200 steps cover any tol
    // representable in f64 from any starting width
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INVPHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INVPHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let xm = 0.5 * (lo + hi);
    let mut best = (xm, f(xm));
    for cand in [(a, f(a)), (b, f(b))] {
        if cand.1 < best.1 {
            best = cand;
        }
    }
    best
}
