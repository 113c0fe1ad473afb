use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::SeriesError;

/// Harmonic parity: which Fourier modes may be nonzero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
    Any,
}

/// Real-valued waveform kind: cosine series, sine series or both.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Cos,
    Sin,
    General,
}

/// Storage class of a real Fourier–Chebyshev coefficient array.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SymClass {
    pub parity: Parity,
    pub kind: Kind,
}

impl Parity {
    pub fn admits(self, k: i64) -> bool {
        match self {
            Parity::Even => k.rem_euclid(2) == 0,
            Parity::Odd => k.rem_euclid(2) == 1,
            Parity::Any => true,
        }
    }

    fn times(self, other: Parity) -> Parity {
        use Parity::*;
        match (self, other) {
            (Even, Even) | (Odd, Odd) => Even,
            (Even, Odd) | (Odd, Even) => Odd,
            _ => Any,
        }
    }
}

impl Kind {
    fn times(self, other: Kind) -> Kind {
        use Kind::*;
        match (self, other) {
            (Cos, Cos) | (Sin, Sin) => Cos,
            (Cos, Sin) | (Sin, Cos) => Sin,
            _ => General,
        }
    }
}

impl SymClass {
    pub const EVEN_COS: SymClass = SymClass::new(Parity::Even, Kind::Cos);
    pub const EVEN_SIN: SymClass = SymClass::new(Parity::Even, Kind::Sin);
    pub const ODD_COS: SymClass = SymClass::new(Parity::Odd, Kind::Cos);
    pub const ODD_SIN: SymClass = SymClass::new(Parity::Odd, Kind::Sin);
    pub const EVEN_GENERAL: SymClass = SymClass::new(Parity::Even, Kind::General);
    pub const GENERAL: SymClass = SymClass::new(Parity::Any, Kind::General);

    pub const fn new(parity: Parity, kind: Kind) -> Self {
        Self { parity, kind }
    }

    pub fn product(self, other: SymClass) -> SymClass {
        SymClass::new(self.parity.times(other.parity), self.kind.times(other.kind))
    }

    /// Sums only keep what both summands share.
    pub fn sum(self, other: SymClass) -> SymClass {
        let parity = if self.parity == other.parity {
            self.parity
        } else {
            Parity::Any
        };
        let kind = if self.kind == other.kind {
            self.kind
        } else {
            Kind::General
        };
        SymClass::new(parity, kind)
    }

    /// The time shift mixes cosines and sines inside each mode.
    pub fn shift(self) -> SymClass {
        SymClass::new(self.parity, Kind::General)
    }

    pub fn reflect(self) -> SymClass {
        self
    }

    pub fn diff_t(self) -> SymClass {
        let kind = match self.kind {
            Kind::Cos => Kind::Sin,
            Kind::Sin => Kind::Cos,
            Kind::General => Kind::General,
        };
        SymClass::new(self.parity, kind)
    }

    /// Whether mode `k` with coefficient `re + i im` is allowed.
    /// Cosine series have real coefficients, sine series imaginary ones.
    pub fn admits_mode(self, k: i64, re_zero: bool, im_zero: bool) -> bool {
        if !self.parity.admits(k) {
            return re_zero && im_zero;
        }
        match self.kind {
            Kind::Cos => im_zero,
            Kind::Sin => re_zero && (k != 0 || im_zero),
            Kind::General => true,
        }
    }

    pub fn name(self) -> String {
        if self == SymClass::GENERAL {
            return "general".into();
        }
        let p = match self.parity {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::Any => "any",
        };
        let k = match self.kind {
            Kind::Cos => "cos",
            Kind::Sin => "sin",
            Kind::General => "general",
        };
        format!("{p}-{k}")
    }
}

impl fmt::Display for SymClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for SymClass {
    type Err = SeriesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "general" {
            return Ok(SymClass::GENERAL);
        }
        let (p, k) = s
            .split_once('-')
            .ok_or_else(|| SeriesError::Format(format!("unknown symmetry class {s:?}")))?;
        let parity = match p {
            "even" => Parity::Even,
            "odd" => Parity::Odd,
            "any" => Parity::Any,
            _ => return Err(SeriesError::Format(format!("unknown parity in {s:?}"))),
        };
        let kind = match k {
            "cos" => Kind::Cos,
            "sin" => Kind::Sin,
            "general" => Kind::General,
            _ => return Err(SeriesError::Format(format!("unknown kind in {s:?}"))),
        };
        Ok(SymClass::new(parity, kind))
    }
}

impl Serialize for SymClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for SymClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_table() {
        assert_eq!(SymClass::EVEN_SIN.product(SymClass::EVEN_SIN), SymClass::EVEN_COS);
        assert_eq!(SymClass::ODD_COS.product(SymClass::ODD_SIN), SymClass::EVEN_SIN);
        assert_eq!(SymClass::EVEN_COS.product(SymClass::ODD_COS), SymClass::ODD_COS);
        assert_eq!(SymClass::EVEN_COS.diff_t(), SymClass::EVEN_SIN);
        assert_eq!(SymClass::ODD_SIN.shift(), SymClass::new(Parity::Odd, Kind::General));
    }

    #[test]
    fn names_round_trip() {
        for c in [
            SymClass::EVEN_COS,
            SymClass::EVEN_SIN,
            SymClass::ODD_COS,
            SymClass::ODD_SIN,
            SymClass::EVEN_GENERAL,
            SymClass::GENERAL,
            SymClass::new(Parity::Any, Kind::Cos),
        ] {
            assert_eq!(c.name().parse::<SymClass>().unwrap(), c);
        }
        assert!("weird".parse::<SymClass>().is_err());
    }
}
