use crate::{Error, Result};

/// A point `(a, M)` in parameter space: horizontal wavenumber and the
/// conductivity-variation parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowParams {
    a: f64,
    m: f64,
}

impl FlowParams {
    pub fn new(a: f64, m: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::InvalidWavenumber(a));
        }
        if !m.is_finite() {
            return Err(Error::InvalidArgument("M must be finite"));
        }
        Ok(Self { a, m })
    }

    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }

    #[inline]
    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn with_a(&self, a: f64) -> Result<Self> {
        Self::new(a, self.m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_positive_wavenumber() {
        assert_eq!(
            FlowParams::new(0.0, 1.0),
            Err(Error::InvalidWavenumber(0.0))
        );
        assert!(FlowParams::new(-1.0, 0.0).is_err());
        assert!(FlowParams::new(f64::NAN, 0.0).is_err());
        assert!(FlowParams::new(1.0, f64::INFINITY).is_err());
        assert!(FlowParams::new(1e-3, -5.0).is_ok());
    }
}
