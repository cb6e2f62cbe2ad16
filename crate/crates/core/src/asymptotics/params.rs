use super::AsymError;

/// The rescaled area weight. `Unit` is the exact `qq = 1` mode, where the
/// parameter `t = qq^{2 tau}` is replaced by `tau` itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QqMode {
    Unit,
    Deformed(f64),
}

impl QqMode {
    pub fn from_value(qq: f64) -> Result<Self, AsymError> {
        if !(qq.is_finite() && qq > 0.0) {
            return Err(AsymError::Domain(format!("qq must be > 0, got {qq}")));
        }
        Ok(if qq == 1.0 {
            QqMode::Unit
        } else {
            QqMode::Deformed(qq)
        })
    }

    pub fn value(&self) -> f64 {
        match self {
            QqMode::Unit => 1.0,
            QqMode::Deformed(q) => *q,
        }
    }

    /// `sgn(log qq)`, zero in the unit mode.
    pub fn epsilon(&self) -> f64 {
        match self {
            QqMode::Unit => 0.0,
            QqMode::Deformed(q) => {
                if *q > 1.0 {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }

    /// `log(qq^2)`.
    pub fn log_q2(&self) -> f64 {
        2.0 * self.value().ln()
    }

    pub fn inverse(&self) -> Self {
        match self {
            QqMode::Unit => QqMode::Unit,
            QqMode::Deformed(q) => QqMode::Deformed(1.0 / q),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymParams {
    pub gamma: f64,
    pub mode: QqMode,
}

impl AsymParams {
    pub fn new(gamma: f64, qq: f64) -> Result<Self, AsymError> {
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(AsymError::Domain(format!("gamma must be >= 0, got {gamma}")));
        }
        Ok(Self {
            gamma,
            mode: QqMode::from_value(qq)?,
        })
    }

    pub fn unit(gamma: f64) -> Self {
        Self::new(gamma, 1.0).expect("valid gamma")
    }

    pub fn qq(&self) -> f64 {
        self.mode.value()
    }

    pub fn epsilon(&self) -> f64 {
        self.mode.epsilon()
    }

    pub fn is_unit(&self) -> bool {
        self.mode == QqMode::Unit
    }

    /// Parameters of the left-right mirrored model: `1/gamma`, `1/qq`.
    pub fn reflected(&self) -> Result<Self, AsymError> {
        if self.gamma == 0.0 {
            return Err(AsymError::Domain("reflection needs gamma > 0".into()));
        }
        Ok(Self {
            gamma: 1.0 / self.gamma,
            mode: self.mode.inverse(),
        })
    }

    /// `qq^{2 alpha}`, or `alpha` in the unit mode.
    pub fn t_of_alpha(&self, alpha: f64) -> f64 {
        crate::boundary_profiles::alpha_to_t(alpha, &self.mode)
    }

    /// Parameter of the mirrored model matching `t` here: `t qq^{-2 mu}`,
    /// or `mu - tau` in the unit mode.
    pub fn reflect_t(&self, t: f64, mu: f64) -> f64 {
        match self.mode {
            QqMode::Unit => mu - t,
            QqMode::Deformed(qq) => t * qq.powf(-2.0 * mu),
        }
    }

    /// Inverse of [`AsymParams::t_of_alpha`] for positive `t`.
    pub fn coordinate_of_t(&self, t: f64) -> f64 {
        match self.mode {
            QqMode::Unit => t,
            QqMode::Deformed(_) => t.ln() / self.mode.log_q2(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_detection() {
        assert_eq!(QqMode::from_value(1.0).unwrap(), QqMode::Unit);
        assert_eq!(QqMode::from_value(2.0).unwrap().epsilon(), 1.0);
        assert_eq!(QqMode::from_value(0.5).unwrap().epsilon(), -1.0);
        assert!(QqMode::from_value(0.0).is_err());
        assert!(QqMode::from_value(f64::NAN).is_err());
        assert!(AsymParams::new(-1.0, 2.0).is_err());
    }

    #[test]
    fn reflection_inverts_weights() {
        let p = AsymParams::new(4.0, 2.0).unwrap();
        let r = p.reflected().unwrap();
        assert_eq!(r.gamma, 0.25);
        assert_eq!(r.qq(), 0.5);
        assert!(AsymParams::new(0.0, 2.0).unwrap().reflected().is_err());
    }

    #[test]
    fn coordinate_round_trip() {
        let p = AsymParams::new(1.0, 1.7).unwrap();
        let t = p.t_of_alpha(0.83);
        assert!((p.coordinate_of_t(t) - 0.83).abs() < 1e-14);
        assert_eq!(AsymParams::unit(1.0).coordinate_of_t(0.4), 0.4);
    }
}
