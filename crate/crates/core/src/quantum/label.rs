use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::{Error, Result};

/// Named single-photon or shutter modes.
///
/// `P1`, `P2` are the top-side inputs of slits 1 and 2 and `P1t`, `P2t` their
/// reflected counterparts. `H1`..`V2` are the polarization/path modes of the
/// nested interferometer, `S1`/`S2` the shutter positions and `L0`/`L1` an
/// abstract logical qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PortLabel {
    H,
    V,
    H1,
    V1,
    H2,
    V2,
    P1,
    P2,
    P1t,
    P2t,
    S1,
    S2,
    L0,
    L1,
}

impl PortLabel {
    pub const ALL: [PortLabel; 14] = [
        PortLabel::H,
        PortLabel::V,
        PortLabel::H1,
        PortLabel::V1,
        PortLabel::H2,
        PortLabel::V2,
        PortLabel::P1,
        PortLabel::P2,
        PortLabel::P1t,
        PortLabel::P2t,
        PortLabel::S1,
        PortLabel::S2,
        PortLabel::L0,
        PortLabel::L1,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PortLabel::H => "H",
            PortLabel::V => "V",
            PortLabel::H1 => "H1",
            PortLabel::V1 => "V1",
            PortLabel::H2 => "H2",
            PortLabel::V2 => "V2",
            PortLabel::P1 => "P1",
            PortLabel::P2 => "P2",
            PortLabel::P1t => "P1t",
            PortLabel::P2t => "P2t",
            PortLabel::S1 => "S1",
            PortLabel::S2 => "S2",
            PortLabel::L0 => "L0",
            PortLabel::L1 => "L1",
        }
    }
}

impl fmt::Display for PortLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PortLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PortLabel::ALL
            .iter()
            .copied()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::UnknownLabel(s.to_string()))
    }
}

/// A mode label tagged with the register (physical copy) it belongs to.
///
/// Two shutters both have `S1`/`S2` modes; the register keeps them distinct
/// so their spaces can be tensored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mode {
    pub label: PortLabel,
    pub register: u8,
}

impl Mode {
    pub const fn new(label: PortLabel, register: u8) -> Self {
        Mode { label, register }
    }
}

impl From<PortLabel> for Mode {
    fn from(label: PortLabel) -> Self {
        Mode::new(label, 0)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.register == 0 {
            write!(f, "{}", self.label)
        } else {
            write!(f, "{}#{}", self.label, self.register)
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once('#') {
            None => Ok(Mode::from(s.parse::<PortLabel>()?)),
            Some((label, reg)) => {
                let register = reg.parse().map_err(|_| Error::UnknownLabel(s.to_string()))?;
                Ok(Mode::new(label.parse()?, register))
            }
        }
    }
}

/// Ordered tensor-product basis: a list of factors, each an ordered list of
/// modes. Index order is row-major over factors (first factor outermost).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Basis {
    factors: Vec<Vec<Mode>>,
}

impl Basis {
    /// Single-factor basis.
    pub fn new<I, M>(modes: I) -> Result<Self>
    where
        I: IntoIterator<Item = M>,
        M: Into<Mode>,
    {
        let modes: Vec<Mode> = modes.into_iter().map(Into::into).collect();
        if modes.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        for (i, m) in modes.iter().enumerate() {
            if modes[..i].contains(m) {
                return Err(Error::DuplicateLabel(m.to_string()));
            }
        }
        Ok(Basis { factors: alloc::vec![modes] })
    }

    /// Single-factor basis with every label placed in `register`.
    pub fn in_register(labels: &[PortLabel], register: u8) -> Result<Self> {
        Basis::new(labels.iter().map(|&l| Mode::new(l, register)))
    }

    pub fn tensor(&self, other: &Basis) -> Result<Basis> {
        for m in other.modes() {
            if self.modes().any(|n| n == m) {
                return Err(Error::LabelCollision(m.to_string()));
            }
        }
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Ok(Basis { factors })
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(Vec::len).product()
    }

    pub fn factors(&self) -> &[Vec<Mode>] {
        &self.factors
    }

    fn modes(&self) -> impl Iterator<Item = &Mode> {
        self.factors.iter().flatten()
    }

    /// Per-factor digits of a flat index.
    pub fn decompose(&self, mut index: usize) -> Vec<usize> {
        let mut digits = alloc::vec![0; self.factors.len()];
        for (k, f) in self.factors.iter().enumerate().rev() {
            digits[k] = index % f.len();
            index /= f.len();
        }
        digits
    }

    pub fn compose(&self, digits: &[usize]) -> usize {
        self.factors
            .iter()
            .zip(digits)
            .fold(0, |acc, (f, &d)| acc * f.len() + d)
    }

    /// Composite label of basis element `index`, one mode per factor.
    pub fn label(&self, index: usize) -> Vec<Mode> {
        self.decompose(index)
            .into_iter()
            .zip(&self.factors)
            .map(|(d, f)| f[d])
            .collect()
    }

    pub fn label_string(&self, index: usize) -> String {
        let mut s = String::new();
        for (k, m) in self.label(index).iter().enumerate() {
            if k > 0 {
                s.push(':');
            }
            s.push_str(&m.to_string());
        }
        s
    }

    /// Flat index of a composite label (modes may be given in any factor order).
    pub fn index_of(&self, modes: &[Mode]) -> Option<usize> {
        if modes.len() != self.factors.len() {
            return None;
        }
        let mut digits = Vec::with_capacity(self.factors.len());
        for f in &self.factors {
            let d = modes.iter().find_map(|m| f.iter().position(|n| n == m))?;
            digits.push(d);
        }
        Some(self.compose(&digits))
    }

    /// Position of the factor whose mode list equals `modes`.
    pub fn factor_position(&self, modes: &[Mode]) -> Option<usize> {
        self.factors.iter().position(|f| f.as_slice() == modes)
    }

    /// Same factors, possibly reordered.
    pub fn is_permutation_of(&self, other: &Basis) -> bool {
        self.factors.len() == other.factors.len()
            && self.factors.iter().all(|f| other.factor_position(f).is_some())
    }

    pub fn describe(&self) -> String {
        let mut s = String::new();
        for (k, f) in self.factors.iter().enumerate() {
            if k > 0 {
                s.push_str(" x ");
            }
            s.push('(');
            for (j, m) in f.iter().enumerate() {
                if j > 0 {
                    s.push(',');
                }
                s.push_str(&m.to_string());
            }
            s.push(')');
        }
        s
    }

    /// Basis with factor `position` removed; `None` for a single-factor basis.
    pub fn without_factor(&self, position: usize) -> Option<Basis> {
        if self.factors.len() < 2 {
            return None;
        }
        let mut factors = self.factors.clone();
        factors.remove(position);
        Some(Basis { factors })
    }

    /// Basis with factor `position` replaced by `modes`.
    pub fn with_factor_replaced(&self, position: usize, replacement: &Basis) -> Result<Basis> {
        if replacement.factors.len() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, found: replacement.factors.len() });
        }
        let mut rest = self.clone();
        rest.factors.remove(position);
        for m in replacement.modes() {
            if rest.modes().any(|n| n == m) {
                return Err(Error::LabelCollision(m.to_string()));
            }
        }
        rest.factors.insert(position, replacement.factors[0].clone());
        Ok(rest)
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}
