use serde::{Deserialize, Serialize};

/// An interval of the extended real line. Endpoints may be infinite; an
/// infinite endpoint is never considered closed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl SupportInterval {
    pub fn open(lo: f64, hi: f64) -> Self {
        Self::new(lo, hi, false, false)
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        Self::new(lo, hi, true, true)
    }

    pub fn new(lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Self {
        debug_assert!(lo < hi, "empty interval ({lo}, {hi})");
        Self { lo, hi, lo_closed: lo_closed && lo.is_finite(), hi_closed: hi_closed && hi.is_finite() }
    }

    pub fn real_line() -> Self {
        Self::open(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn contains(&self, t: f64) -> bool {
        let above = if self.lo_closed { t >= self.lo } else { t > self.lo };
        let below = if self.hi_closed { t <= self.hi } else { t < self.hi };
        above && below
    }

    /// Intersection, or `None` when empty.
    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let (lo, lo_closed) = match self.lo.partial_cmp(&other.lo)? {
            std::cmp::Ordering::Greater => (self.lo, self.lo_closed),
            std::cmp::Ordering::Less => (other.lo, other.lo_closed),
            std::cmp::Ordering::Equal => (self.lo, self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.partial_cmp(&other.hi)? {
            std::cmp::Ordering::Less => (self.hi, self.hi_closed),
            std::cmp::Ordering::Greater => (other.hi, other.hi_closed),
            std::cmp::Ordering::Equal => (self.hi, self.hi_closed && other.hi_closed),
        };
        if lo < hi || (lo == hi && lo_closed && hi_closed) {
            Some(Self { lo, hi, lo_closed, hi_closed })
        } else {
            None
        }
    }
}

impl std::fmt::Display for SupportInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let l = if self.lo_closed { '[' } else { '(' };
        let r = if self.hi_closed { ']' } else { ')' };
        write!(f, "{l}{}, {}{r}", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_open_membership() {
        let i = SupportInterval::new(1.0, f64::INFINITY, true, false);
        assert!(i.contains(1.0));
        assert!(!i.contains(0.999));
        assert!(i.contains(1e300));
        assert!(!i.hi_closed);
    }

    #[test]
    fn intersection_keeps_tighter_bounds() {
        let a = SupportInterval::new(f64::NEG_INFINITY, 0.0, false, true);
        let b = SupportInterval::open(f64::NEG_INFINITY, 2.0);
        let c = a.intersect(&b).unwrap();
        assert_eq!(c.hi, 0.0);
        assert!(c.hi_closed);
        assert!(c.contains(0.0));

        let d = SupportInterval::open(0.0, 1.0);
        assert!(a.intersect(&d).is_none());
        let e = SupportInterval::closed(0.0, 1.0);
        let p = a.intersect(&e).unwrap();
        assert!(p.contains(0.0));
    }
}
