//! JSON documents for maps, hermitian tables, profiles, expansions, normal
//! forms, factory traces and certificates. Rationals are always strings.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactcore::{
    format_rational, parse_rational, AnyMap, CplxRat, HoloPoly, MultiIndex, Numerator, PolyMap, RationalMap,
    WeightedEntry, WeightedMap,
};
use crate::factory::{homogeneous_map, FactoryTrace};
use crate::foldanalysis::{DividedDifferences, FoldData, FoldEntry, FoldProfile, NewtonExpansion, RootValue};
use crate::hermitian::HermPoly;
use crate::normalform::NormalForm;
use crate::verify::Certificate;

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents always serialize");
    s.push('\n');
    s
}

/// Parses JSON, reporting line and column on failure.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn rat_str(v: &BigRational) -> String {
    format_rational(v)
}

fn rats(v: &[BigRational]) -> Vec<String> {
    v.iter().map(rat_str).collect()
}

fn parse_rats(v: &[String]) -> Result<Vec<BigRational>> {
    v.iter().map(|s| parse_rational(s)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub re: String,
    pub im: String,
}

impl From<&CplxRat> for ComplexDoc {
    fn from(c: &CplxRat) -> Self {
        Self {
            re: rat_str(&c.re),
            im: rat_str(&c.im),
        }
    }
}

impl ComplexDoc {
    pub fn parse(&self) -> Result<CplxRat> {
        Ok(CplxRat::new(parse_rational(&self.re)?, parse_rational(&self.im)?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub alpha: Vec<u32>,
    pub re: String,
    pub im: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyDoc {
    pub terms: Vec<TermDoc>,
}

impl From<&HoloPoly> for PolyDoc {
    fn from(p: &HoloPoly) -> Self {
        Self {
            terms: p
                .terms()
                .iter()
                .map(|(a, c)| TermDoc {
                    alpha: a.exponents().to_vec(),
                    re: rat_str(&c.re),
                    im: rat_str(&c.im),
                })
                .collect(),
        }
    }
}

impl PolyDoc {
    pub fn parse(&self, n: usize) -> Result<HoloPoly> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if t.alpha.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: t.alpha.len(),
                });
            }
            let c = CplxRat::new(parse_rational(&t.re)?, parse_rational(&t.im)?);
            terms.push((MultiIndex::new(t.alpha.clone()), c));
        }
        HoloPoly::from_terms(n, terms)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
    pub terms: Vec<TermDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDoc {
    pub n: usize,
    #[serde(rename = "N")]
    pub target_dim: usize,
    pub kind: String,
    pub components: Vec<ComponentDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub denominator: Option<PolyDoc>,
}

fn weighted_components(w: &WeightedMap) -> Vec<ComponentDoc> {
    w.entries()
        .iter()
        .map(|e| ComponentDoc {
            weight: Some(rat_str(&e.weight)),
            terms: PolyDoc::from(&e.poly).terms,
        })
        .collect()
}

fn plain_components(p: &PolyMap) -> Vec<ComponentDoc> {
    p.components()
        .iter()
        .map(|c| ComponentDoc {
            weight: None,
            terms: PolyDoc::from(c).terms,
        })
        .collect()
}

impl From<&AnyMap> for MapDoc {
    fn from(m: &AnyMap) -> Self {
        let (kind, components, denominator) = match m {
            AnyMap::Poly(p) => ("poly", plain_components(p), None),
            AnyMap::Weighted(w) => ("weighted", weighted_components(w), None),
            AnyMap::Rational(r) => {
                let comps = match r.numerator() {
                    Numerator::Poly(p) => plain_components(p),
                    Numerator::Weighted(w) => weighted_components(w),
                };
                ("rational", comps, Some(PolyDoc::from(r.denominator())))
            }
        };
        MapDoc {
            n: m.n(),
            target_dim: components.len(),
            kind: kind.into(),
            components,
            denominator,
        }
    }
}

impl MapDoc {
    pub fn parse(&self) -> Result<AnyMap> {
        let n = self.n;
        if n == 0 {
            return Err(Error::Parse("n must be positive".into()));
        }
        if self.target_dim != self.components.len() {
            return Err(Error::Parse(format!(
                "N = {} but {} components given",
                self.target_dim,
                self.components.len()
            )));
        }
        let polys: Vec<HoloPoly> = self
            .components
            .iter()
            .map(|c| PolyDoc { terms: c.terms.clone() }.parse(n))
            .collect::<Result<_>>()?;
        let weights: Vec<Option<BigRational>> = self
            .components
            .iter()
            .map(|c| c.weight.as_deref().map(parse_rational).transpose())
            .collect::<Result<_>>()?;
        let weighted = || {
            WeightedMap::new(
                n,
                polys
                    .iter()
                    .zip(&weights)
                    .map(|(p, w)| WeightedEntry {
                        weight: w.clone().unwrap_or_else(|| BigRational::from_integer(1.into())),
                        poly: p.clone(),
                    })
                    .collect(),
            )
        };
        match self.kind.as_str() {
            "poly" => {
                if weights.iter().flatten().any(|w| !w.is_one()) {
                    return Err(Error::Parse("poly map weights must be 1".into()));
                }
                if self.denominator.is_some() {
                    return Err(Error::Parse("poly maps carry no denominator".into()));
                }
                Ok(AnyMap::Poly(PolyMap::new(n, polys)?))
            }
            "weighted" => {
                if self.denominator.is_some() {
                    return Err(Error::Parse("weighted maps carry no denominator".into()));
                }
                Ok(AnyMap::Weighted(weighted()?))
            }
            "rational" => {
                let den = self
                    .denominator
                    .as_ref()
                    .ok_or_else(|| Error::Parse("rational map without denominator".into()))?
                    .parse(n)?;
                let numerator: Numerator = if weights.iter().any(Option::is_some) {
                    weighted()?.into()
                } else {
                    PolyMap::new(n, polys)?.into()
                };
                Ok(AnyMap::Rational(RationalMap::new(numerator, den, true)?))
            }
            other => Err(Error::Parse(format!("unknown map kind {other:?}"))),
        }
    }
}

pub fn map_to_json(m: &AnyMap) -> String {
    to_json(&MapDoc::from(m))
}

pub fn map_from_json(text: &str) -> Result<AnyMap> {
    from_json::<MapDoc>(text)?.parse()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HermTermDoc {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    pub re: String,
    pub im: String,
}

/// Stores only keys with (α, β) ≤ (β, α); mirrors are implied.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HermDoc {
    pub n: usize,
    pub coeffs: Vec<HermTermDoc>,
}

impl From<&HermPoly> for HermDoc {
    fn from(q: &HermPoly) -> Self {
        Self {
            n: q.n(),
            coeffs: q
                .coeffs()
                .iter()
                .filter(|((a, b), _)| a <= b)
                .map(|((a, b), c)| HermTermDoc {
                    alpha: a.exponents().to_vec(),
                    beta: b.exponents().to_vec(),
                    re: rat_str(&c.re),
                    im: rat_str(&c.im),
                })
                .collect(),
        }
    }
}

impl HermDoc {
    pub fn parse(&self) -> Result<HermPoly> {
        let mut entries = Vec::new();
        for t in &self.coeffs {
            let a = MultiIndex::new(t.alpha.clone());
            let b = MultiIndex::new(t.beta.clone());
            let c = CplxRat::new(parse_rational(&t.re)?, parse_rational(&t.im)?);
            if a > b {
                return Err(Error::Parse("hermitian entries must satisfy (α, β) ≤ (β, α)".into()));
            }
            if a != b {
                entries.push(((b.clone(), a.clone()), c.conj()));
            }
            entries.push(((a, b), c));
        }
        HermPoly::new(self.n, entries)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RootDoc {
    Exact(String),
    Interval { lo: String, hi: String },
}

impl From<&RootValue> for RootDoc {
    fn from(r: &RootValue) -> Self {
        match r {
            RootValue::Exact(v) => RootDoc::Exact(rat_str(v)),
            RootValue::Interval { lo, hi } => RootDoc::Interval {
                lo: rat_str(lo),
                hi: rat_str(hi),
            },
        }
    }
}

impl RootDoc {
    pub fn parse(&self) -> Result<RootValue> {
        Ok(match self {
            RootDoc::Exact(v) => RootValue::Exact(parse_rational(v)?),
            RootDoc::Interval { lo, hi } => RootValue::Interval {
                lo: parse_rational(lo)?,
                hi: parse_rational(hi)?,
            },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryDoc {
    pub t: RootDoc,
    #[serde(rename = "T")]
    pub big_t: RootDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileDoc {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<EntryDoc>>,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<String>>,
}

impl From<&FoldProfile> for ProfileDoc {
    fn from(p: &FoldProfile) -> Self {
        match p {
            FoldProfile::Finite(entries) => ProfileDoc {
                kind: "finite".into(),
                entries: Some(
                    entries
                        .iter()
                        .map(|e| EntryDoc {
                            t: (&e.t).into(),
                            big_t: (&e.big_t).into(),
                        })
                        .collect(),
                ),
                c: None,
            },
            FoldProfile::Infinite(c) => ProfileDoc {
                kind: "infinite".into(),
                entries: None,
                c: Some(rats(c)),
            },
        }
    }
}

impl ProfileDoc {
    pub fn parse(&self) -> Result<FoldProfile> {
        match self.kind.as_str() {
            "finite" => Ok(FoldProfile::Finite(
                self.entries
                    .as_deref()
                    .unwrap_or_default()
                    .iter()
                    .map(|e| {
                        Ok(FoldEntry {
                            t: e.t.parse()?,
                            big_t: e.big_t.parse()?,
                        })
                    })
                    .collect::<Result<_>>()?,
            )),
            "infinite" => Ok(FoldProfile::Infinite(parse_rats(
                self.c.as_deref().ok_or_else(|| Error::Parse("infinite profile without C".into()))?,
            )?)),
            other => Err(Error::Parse(format!("unknown profile kind {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPairDoc {
    pub t: String,
    #[serde(rename = "T")]
    pub big_t: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonDoc {
    pub folds: Vec<FoldPairDoc>,
    pub b: Vec<String>,
    pub intermediates: Vec<HermDoc>,
    pub remainder: HermDoc,
    pub denom_norm_sq: Option<HermDoc>,
    pub degree_certificates: Vec<(usize, i64)>,
}

impl From<&NewtonExpansion> for NewtonDoc {
    fn from(e: &NewtonExpansion) -> Self {
        Self {
            folds: e
                .folds
                .pairs()
                .iter()
                .map(|(t, big_t)| FoldPairDoc {
                    t: rat_str(t),
                    big_t: rat_str(big_t),
                })
                .collect(),
            b: rats(&e.b.b),
            intermediates: e.intermediates.iter().map(HermDoc::from).collect(),
            remainder: (&e.remainder).into(),
            denom_norm_sq: e.denom_norm_sq.as_ref().map(HermDoc::from),
            degree_certificates: e.degree_certificates.clone(),
        }
    }
}

impl NewtonDoc {
    pub fn parse(&self) -> Result<NewtonExpansion> {
        let pairs = self
            .folds
            .iter()
            .map(|p| Ok((parse_rational(&p.t)?, parse_rational(&p.big_t)?)))
            .collect::<Result<_>>()?;
        Ok(NewtonExpansion {
            folds: FoldData::new(pairs)?,
            b: DividedDifferences { b: parse_rats(&self.b)? },
            intermediates: self.intermediates.iter().map(HermDoc::parse).collect::<Result<_>>()?,
            remainder: self.remainder.parse()?,
            denom_norm_sq: self.denom_norm_sq.as_ref().map(HermDoc::parse).transpose()?,
            degree_certificates: self.degree_certificates.clone(),
        })
    }
}

/// Parses "t1:T1,t2:T2".
pub fn parse_fold_list(text: &str) -> Result<FoldData> {
    let pairs = text
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|pair| {
            let (t, big_t) = pair
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected t:T, got {pair:?}")))?;
            Ok((parse_rational(t)?, parse_rational(big_t)?))
        })
        .collect::<Result<Vec<_>>>()?;
    FoldData::new(pairs)
}

/// Parses "r1,r2,...".
pub fn parse_rational_list(text: &str) -> Result<Vec<BigRational>> {
    text.split(',').map(|s| parse_rational(s.trim())).collect()
}

/// Parses "re" or "re:im".
pub fn parse_complex(text: &str) -> Result<CplxRat> {
    let text = text.trim();
    match text.split_once(':') {
        Some((re, im)) => Ok(CplxRat::new(parse_rational(re)?, parse_rational(im)?)),
        None => Ok(CplxRat::real(parse_rational(text)?)),
    }
}

/// Parses a comma-separated list of "re" or "re:im".
pub fn parse_complex_list(text: &str) -> Result<Vec<CplxRat>> {
    text.split(',').map(parse_complex).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDoc {
    pub degree: u32,
    pub scale_sq: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalFormDoc {
    pub n: usize,
    #[serde(rename = "C")]
    pub c: Vec<String>,
    pub blocks: Vec<BlockDoc>,
    pub ell: Vec<usize>,
    /// Row-major (re, im) pairs.
    #[serde(rename = "U")]
    pub u: Vec<Vec<(f64, f64)>>,
    pub gram_certificate: bool,
    pub residual: f64,
    pub unitarity_defect: f64,
}

impl NormalFormDoc {
    pub fn new(n: usize, nf: &NormalForm) -> Self {
        Self {
            n,
            c: rats(&nf.c),
            blocks: nf
                .degrees
                .iter()
                .map(|&d| BlockDoc {
                    degree: d,
                    scale_sq: rat_str(&nf.c[d as usize]),
                })
                .collect(),
            ell: nf.ell.clone(),
            u: (0..nf.u.nrows())
                .map(|i| (0..nf.u.ncols()).map(|j| (nf.u[(i, j)].re, nf.u[(i, j)].im)).collect())
                .collect(),
            gram_certificate: nf.gram_certificate,
            residual: nf.residual,
            unitarity_defect: nf.unitarity_defect,
        }
    }

    pub fn parse(&self) -> Result<NormalForm> {
        let c = parse_rats(&self.c)?;
        let mut degrees = Vec::new();
        let mut blocks = Vec::new();
        for b in &self.blocks {
            degrees.push(b.degree);
            blocks.push(homogeneous_map(self.n, b.degree, &parse_rational(&b.scale_sq)?)?);
        }
        let rows = self.u.len();
        if self.u.iter().any(|r| r.len() != rows) {
            return Err(Error::Parse("U must be square".into()));
        }
        let u = DMatrix::from_fn(rows, rows, |i, j| Complex64::new(self.u[i][j].0, self.u[i][j].1));
        Ok(NormalForm {
            c,
            degrees,
            blocks,
            ell: self.ell.clone(),
            u,
            gram_certificate: self.gram_certificate,
            residual: self.residual,
            unitarity_defect: self.unitarity_defect,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexValueDoc {
    pub alpha: Vec<u32>,
    pub value: String,
}

fn table_doc(t: &BTreeMap<MultiIndex, BigRational>) -> Vec<IndexValueDoc> {
    t.iter()
        .map(|(a, v)| IndexValueDoc {
            alpha: a.exponents().to_vec(),
            value: rat_str(v),
        })
        .collect()
}

fn parse_table(t: &[IndexValueDoc]) -> Result<BTreeMap<MultiIndex, BigRational>> {
    t.iter()
        .map(|e| Ok((MultiIndex::new(e.alpha.clone()), parse_rational(&e.value)?)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceDoc {
    #[serde(rename = "Qpp")]
    pub qpp: HermDoc,
    #[serde(rename = "Qp")]
    pub qp: HermDoc,
    #[serde(rename = "Q")]
    pub q: HermDoc,
    #[serde(rename = "Q0")]
    pub q0: HermDoc,
    pub c: String,
    pub c_alpha: Vec<IndexValueDoc>,
    pub d_alpha: Vec<IndexValueDoc>,
    pub e_alpha: Vec<IndexValueDoc>,
    pub f_beta: Vec<IndexValueDoc>,
    pub a: Vec<ComplexDoc>,
    pub substitution_note: String,
}

impl From<&FactoryTrace> for TraceDoc {
    fn from(t: &FactoryTrace) -> Self {
        Self {
            qpp: (&t.qpp).into(),
            qp: (&t.qp).into(),
            q: (&t.q).into(),
            q0: (&t.q0).into(),
            c: rat_str(&t.c),
            c_alpha: table_doc(&t.c_alpha),
            d_alpha: table_doc(&t.d_alpha),
            e_alpha: table_doc(&t.e_alpha),
            f_beta: table_doc(&t.f_beta),
            a: t.a.iter().map(ComplexDoc::from).collect(),
            substitution_note: t.substitution_note.clone(),
        }
    }
}

impl TraceDoc {
    pub fn parse(&self) -> Result<FactoryTrace> {
        Ok(FactoryTrace {
            qpp: self.qpp.parse()?,
            qp: self.qp.parse()?,
            q: self.q.parse()?,
            q0: self.q0.parse()?,
            c: parse_rational(&self.c)?,
            c_alpha: parse_table(&self.c_alpha)?,
            d_alpha: parse_table(&self.d_alpha)?,
            e_alpha: parse_table(&self.e_alpha)?,
            f_beta: parse_table(&self.f_beta)?,
            a: self.a.iter().map(ComplexDoc::parse).collect::<Result<_>>()?,
            substitution_note: self.substitution_note.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub verdict: bool,
    pub witness: Option<HermDoc>,
}

impl From<&Certificate> for CertificateDoc {
    fn from(c: &Certificate) -> Self {
        Self {
            verdict: c.holds,
            witness: c.witness.as_ref().map(HermDoc::from),
        }
    }
}

impl CertificateDoc {
    pub fn parse(&self) -> Result<Certificate> {
        Ok(Certificate {
            holds: self.verdict,
            witness: self.witness.as_ref().map(HermDoc::parse).transpose()?,
        })
    }
}
