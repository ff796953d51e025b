use num_complex::Complex64;

use super::principal_log;
use crate::error::EvalError;

/// Largest accepted change of argument over a half step.
const MAX_HALF_TURN: f64 = 0.6;
const MIN_STEP: f64 = 1e-13;

/// Continues a branch of `log g` along straight segments.
///
/// `g` must be analytic and zero-free on the region swept by the segments. Each
/// accepted step checks that the argument changes by less than
/// [`MAX_HALF_TURN`] on both halves and that the halves agree with the whole;
/// otherwise the step is halved.
pub struct LogTracker<G> {
    g: G,
    at: Complex64,
    g_at: Complex64,
    log: Complex64,
}

impl<G> LogTracker<G>
where
    G: FnMut(Complex64) -> Result<Complex64, EvalError>,
{
    /// Start at `origin` on the principal branch.
    pub fn new(mut g: G, origin: Complex64) -> Result<Self, EvalError> {
        let g_at = g(origin)?;
        let log = principal_log(g_at).map_err(|_| EvalError::BranchTracking {
            at: origin,
            reason: "function vanishes at the start point",
        })?;
        Ok(LogTracker {
            g,
            at: origin,
            g_at,
            log,
        })
    }

    pub fn position(&self) -> Complex64 {
        self.at
    }

    pub fn current(&self) -> Complex64 {
        self.log
    }

    /// Move to `target` along the straight segment; returns the continued log there.
    pub fn advance(&mut self, target: Complex64) -> Result<Complex64, EvalError> {
        let start = self.at;
        let delta = target - start;
        if delta == Complex64::new(0.0, 0.0) {
            return Ok(self.log);
        }
        let mut s = 0.0;
        let mut ds: f64 = 1.0;
        while s < 1.0 {
            ds = ds.min(1.0 - s);
            let s_end = if s + ds >= 1.0 { 1.0 } else { s + ds };
            let p_mid = start + delta * (0.5 * (s + s_end));
            let p_end = if s_end == 1.0 { target } else { start + delta * s_end };
            let g_mid = (self.g)(p_mid)?;
            let g_end = (self.g)(p_end)?;
            if g_mid == Complex64::new(0.0, 0.0) || g_end == Complex64::new(0.0, 0.0) {
                return Err(EvalError::BranchTracking {
                    at: if g_mid == Complex64::new(0.0, 0.0) { p_mid } else { p_end },
                    reason: "function vanishes on the path",
                });
            }
            let a1 = (g_mid / self.g_at).arg();
            let a2 = (g_end / g_mid).arg();
            let whole = (g_end / self.g_at).arg();
            let consistent = (a1 + a2 - whole).abs() < 1e-9;
            if a1.abs() < MAX_HALF_TURN && a2.abs() < MAX_HALF_TURN && consistent {
                self.log = Complex64::new(g_end.norm().ln(), self.log.im + a1 + a2);
                self.g_at = g_end;
                self.at = p_end;
                s = s_end;
                ds *= 2.0;
            } else {
                ds *= 0.5;
                if ds * delta.norm() < MIN_STEP {
                    return Err(EvalError::BranchTracking {
                        at: p_mid,
                        reason: "argument changes too fast",
                    });
                }
            }
        }
        Ok(self.log)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn follows_a_full_turn() {
        // g(z) = z around the unit circle, starting at 1
        let mut t = LogTracker::new(Ok, Complex64::new(1.0, 0.0)).unwrap();
        let n = 16;
        for k in 1..=n {
            let p = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64);
            t.advance(p).unwrap();
        }
        assert!((t.current() - Complex64::new(0.0, 2.0 * std::f64::consts::PI)).norm() < 1e-12);
    }

    #[test]
    fn path_through_zero_fails() {
        let mut t = LogTracker::new(Ok, Complex64::new(-1.0, 0.0)).unwrap();
        assert!(t.advance(Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn large_winding_in_one_segment() {
        // g = exp(40 i z): log = 40 i z along [0, 1]
        let mut t = LogTracker::new(|z: Complex64| Ok((Complex64::new(0.0, 40.0) * z).exp()), Complex64::new(0.0, 0.0)).unwrap();
        let l = t.advance(Complex64::new(1.0, 0.0)).unwrap();
        assert!((l - Complex64::new(0.0, 40.0)).norm() < 1e-10, "{l}");
    }
}
