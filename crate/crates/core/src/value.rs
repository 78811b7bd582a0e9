//! Elementary domain values: measured outcomes, experimental settings, and
//! the observable/wing vocabulary shared by every other module.

use crate::error::ValueError;
use serde::{Deserialize, Serialize};
use std::fmt;

/// A measurement outcome, bounded by ±1.
///
/// A value is *dichotomic* iff it is exactly +1 or −1. Non-dichotomic bounded
/// values are legal in tables and in the chain verifier but are rejected by
/// the reorder engine.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OutcomeValue(f64);

impl OutcomeValue {
    pub const PLUS: OutcomeValue = OutcomeValue(1.0);
    pub const MINUS: OutcomeValue = OutcomeValue(-1.0);

    pub fn new(value: f64) -> Result<Self, ValueError> {
        if value.is_finite() && value.abs() <= 1.0 {
            Ok(OutcomeValue(value))
        } else {
            Err(ValueError::OutOfBounds(value))
        }
    }

    /// The ±1 value for a sign, the usual way dichotomic outcomes are built.
    pub fn sign(plus: bool) -> Self {
        if plus {
            Self::PLUS
        } else {
            Self::MINUS
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn is_dichotomic(self) -> bool {
        self.0 == 1.0 || self.0 == -1.0
    }

    pub fn is_plus(self) -> bool {
        self.0 == 1.0
    }
}

impl fmt::Display for OutcomeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_dichotomic() {
            write!(f, "{}", self.0 as i64)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Which wing of the experiment a measurement belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Wing {
    A,
    B,
}

/// The local observable choice on one wing: A vs A' on the left, B vs B' on
/// the right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Observable {
    Unprimed,
    Primed,
}

/// One of the four experimental settings, i.e. which observable pair is
/// actually measured in a trial.
///
/// This type is the single authority for the setting ↔ observable-pair
/// mapping, which follows the potential-outcome column layout:
///
/// | index | pair     | realized columns |
/// |-------|----------|------------------|
/// | 1     | (A, B)   | A1, B1           |
/// | 2     | (A, B')  | A2, B'2          |
/// | 3     | (A', B)  | A'3, B3          |
/// | 4     | (A', B') | A'4, B'4         |
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Setting(u8);

impl Setting {
    pub const S1: Setting = Setting(1);
    pub const S2: Setting = Setting(2);
    pub const S3: Setting = Setting(3);
    pub const S4: Setting = Setting(4);
    pub const ALL: [Setting; 4] = [Setting(1), Setting(2), Setting(3), Setting(4)];

    pub fn from_index(index: u8) -> Result<Self, ValueError> {
        if (1..=4).contains(&index) {
            Ok(Setting(index))
        } else {
            Err(ValueError::InvalidSetting(index))
        }
    }

    pub fn index(self) -> u8 {
        self.0
    }

    /// Zero-based position, handy for array indexing.
    pub fn ordinal(self) -> usize {
        usize::from(self.0 - 1)
    }

    /// The observable measured on wing A under this setting.
    pub fn alice(self) -> Observable {
        match self.0 {
            1 | 2 => Observable::Unprimed,
            _ => Observable::Primed,
        }
    }

    /// The observable measured on wing B under this setting.
    pub fn bob(self) -> Observable {
        match self.0 {
            1 | 3 => Observable::Unprimed,
            _ => Observable::Primed,
        }
    }

    /// The observable measured on the given wing.
    pub fn observable(self, wing: Wing) -> Observable {
        match wing {
            Wing::A => self.alice(),
            Wing::B => self.bob(),
        }
    }
}

impl TryFrom<u8> for Setting {
    type Error = ValueError;
    fn try_from(v: u8) -> Result<Self, Self::Error> {
        Setting::from_index(v)
    }
}

impl From<Setting> for u8 {
    fn from(s: Setting) -> u8 {
        s.0
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Declared truth values for the three assumptions the reordering proof uses.
///
/// This is pure metadata: empirical checks may contradict a declared profile,
/// and such disagreement is reported, never silently corrected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssumptionProfile {
    pub no_conspiracy: bool,
    pub parameter_independence: bool,
    pub outcome_independence: bool,
}

impl AssumptionProfile {
    pub const ALL_TRUE: AssumptionProfile = AssumptionProfile {
        no_conspiracy: true,
        parameter_independence: true,
        outcome_independence: true,
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outcome_value_bounds() {
        assert!(OutcomeValue::new(0.5).is_ok());
        assert!(OutcomeValue::new(1.0).is_ok());
        assert!(OutcomeValue::new(-1.0).is_ok());
        assert_eq!(
            OutcomeValue::new(1.5).unwrap_err().code(),
            "out-of-bounds"
        );
        assert!(OutcomeValue::new(f64::NAN).is_err());
    }

    #[test]
    fn dichotomic_is_exact() {
        assert!(OutcomeValue::PLUS.is_dichotomic());
        assert!(OutcomeValue::MINUS.is_dichotomic());
        assert!(!OutcomeValue::new(0.999999).unwrap().is_dichotomic());
        assert!(!OutcomeValue::new(0.0).unwrap().is_dichotomic());
    }

    #[test]
    fn setting_observable_mapping() {
        use Observable::*;
        let expect = [
            (Setting::S1, Unprimed, Unprimed),
            (Setting::S2, Unprimed, Primed),
            (Setting::S3, Primed, Unprimed),
            (Setting::S4, Primed, Primed),
        ];
        for (s, a, b) in expect {
            assert_eq!(s.alice(), a, "setting {s}");
            assert_eq!(s.bob(), b, "setting {s}");
        }
    }

    #[test]
    fn setting_mapping_is_bijective() {
        let mut pairs: Vec<_> = Setting::ALL.iter().map(|s| (s.alice(), s.bob())).collect();
        pairs.sort_by_key(|p| format!("{p:?}"));
        pairs.dedup();
        assert_eq!(pairs.len(), 4);
    }

    #[test]
    fn setting_index_validation() {
        assert!(Setting::from_index(0).is_err());
        assert!(Setting::from_index(5).is_err());
        assert_eq!(Setting::from_index(3).unwrap().index(), 3);
    }
}
