//! JSON wire formats.
//!
//! - matrix: `{"n": 2, "entries": [[{"k": -1, "re": 1.0, "im": 0.0}], ...]}`,
//!   entries row-major, each a list of non-zero terms by ascending `k`;
//! - torus: `{"tau": [re, im]}`;
//! - factor: `{"torus": ..., "A": matrix}`;
//! - descriptor: `{"rank": 2, "degree": 1, "param": [re, im]}`.

use serde::{Deserialize, Serialize};

use crate::classify::BundleDescriptor;
use crate::cocycle::FactorOfAutomorphy;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::matrix::LaurentMatrix;
use crate::scalar::C64;
use crate::torus::Torus;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TermWire {
    pub k: i32,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixWire {
    pub n: usize,
    pub entries: Vec<Vec<TermWire>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusWire {
    pub tau: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorWire {
    pub torus: TorusWire,
    #[serde(rename = "A")]
    pub a: MatrixWire,
}

/// A bundle given either by its generator or by a descriptor.
///
/// `A` and `matrix` are synonyms; exactly one of them or `descriptor` must
/// be present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleSpec {
    pub torus: TorusWire,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<MatrixWire>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixWire>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub descriptor: Option<BundleDescriptor>,
}

impl From<&Torus> for TorusWire {
    fn from(t: &Torus) -> Self {
        TorusWire {
            tau: [t.tau().re, t.tau().im],
        }
    }
}

impl TryFrom<&TorusWire> for Torus {
    type Error = Error;

    fn try_from(w: &TorusWire) -> Result<Self> {
        Torus::new(C64::new(w.tau[0], w.tau[1]))
    }
}

impl From<&LaurentMatrix> for MatrixWire {
    fn from(m: &LaurentMatrix) -> Self {
        let entries = m
            .entries()
            .iter()
            .map(|p| p.terms().map(|(k, c)| TermWire { k, re: c.re, im: c.im }).collect())
            .collect();
        MatrixWire { n: m.size(), entries }
    }
}

impl TryFrom<&MatrixWire> for LaurentMatrix {
    type Error = Error;

    fn try_from(w: &MatrixWire) -> Result<Self> {
        let mut polys = Vec::with_capacity(w.entries.len());
        for terms in &w.entries {
            let mut seen = std::collections::BTreeSet::new();
            for t in terms {
                if !(t.re.is_finite() && t.im.is_finite()) {
                    return Err(Error::NonFinite("matrix coefficient"));
                }
                if !seen.insert(t.k) {
                    return Err(Error::Parse(format!("exponent {} repeated within one entry", t.k)));
                }
            }
            polys.push(LaurentPoly::from_terms(
                terms.iter().map(|t| (t.k, C64::new(t.re, t.im))),
            ));
        }
        LaurentMatrix::new(w.n, polys)
    }
}

impl From<&FactorOfAutomorphy> for FactorWire {
    fn from(f: &FactorOfAutomorphy) -> Self {
        FactorWire {
            torus: f.torus().into(),
            a: f.generator().into(),
        }
    }
}

impl TryFrom<&FactorWire> for FactorOfAutomorphy {
    type Error = Error;

    fn try_from(w: &FactorWire) -> Result<Self> {
        FactorOfAutomorphy::new(Torus::try_from(&w.torus)?, LaurentMatrix::try_from(&w.a)?)
    }
}

fn parse<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

fn render<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string(v).map_err(|e| Error::Parse(e.to_string()))
}

pub fn matrix_to_json(m: &LaurentMatrix) -> Result<String> {
    render(&MatrixWire::from(m))
}

pub fn matrix_from_json(s: &str) -> Result<LaurentMatrix> {
    LaurentMatrix::try_from(&parse::<MatrixWire>(s)?)
}

pub fn torus_to_json(t: &Torus) -> Result<String> {
    render(&TorusWire::from(t))
}

pub fn torus_from_json(s: &str) -> Result<Torus> {
    Torus::try_from(&parse::<TorusWire>(s)?)
}

pub fn factor_to_json(f: &FactorOfAutomorphy) -> Result<String> {
    render(&FactorWire::from(f))
}

pub fn factor_from_json(s: &str) -> Result<FactorOfAutomorphy> {
    FactorOfAutomorphy::try_from(&parse::<FactorWire>(s)?)
}

pub fn descriptor_to_json(d: &BundleDescriptor) -> Result<String> {
    render(d)
}

pub fn descriptor_from_json(s: &str) -> Result<BundleDescriptor> {
    parse(s)
}

impl BundleSpec {
    pub fn parse(s: &str) -> Result<Self> {
        parse(s)
    }

    pub fn torus(&self) -> Result<Torus> {
        Torus::try_from(&self.torus)
    }

    /// The generator, building it from the descriptor when needed.
    pub fn factor(&self) -> Result<FactorOfAutomorphy> {
        let t = self.torus()?;
        match (&self.a, &self.matrix, &self.descriptor) {
            (Some(m), None, None) | (None, Some(m), None) => FactorOfAutomorphy::new(t, LaurentMatrix::try_from(m)?),
            (None, None, Some(d)) => d.factor(&t),
            _ => Err(Error::Parse(
                "bundle needs exactly one of \"A\", \"matrix\" or \"descriptor\"".into(),
            )),
        }
    }
}
