//! JSON encodings of the core types. Integers inside scalars travel as
//! decimal strings.

use serde::{Deserialize, Serialize};

use crate::diffop::{DiffOp, Precision};
use crate::error::{Error, Result};
use crate::laurent::{UTLaurent, Window};
use crate::poly::{Exponent, Poly};
use crate::scalar::{from_strings, to_strings, Scalar};
use crate::schur::{SubspaceKind, SubspaceUT, TriangleRule};
use crate::series::TruncatedSeries;

/// A scalar as `{"num": "...", "den": "..."}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarJson {
    pub num: String,
    pub den: String,
}

impl From<&Scalar> for ScalarJson {
    fn from(c: &Scalar) -> Self {
        let (num, den) = to_strings(c);
        ScalarJson { num, den }
    }
}

impl TryFrom<&ScalarJson> for Scalar {
    type Error = Error;
    fn try_from(s: &ScalarJson) -> Result<Scalar> {
        from_strings(&s.num, &s.den)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyTerm {
    pub exp: Vec<u32>,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub nvars: usize,
    pub terms: Vec<PolyTerm>,
}

impl From<&Poly> for PolyJson {
    fn from(p: &Poly) -> Self {
        PolyJson {
            nvars: p.nvars(),
            terms: p
                .terms()
                .map(|(e, c)| {
                    let (num, den) = to_strings(c);
                    PolyTerm {
                        exp: e.0.clone(),
                        num,
                        den,
                    }
                })
                .collect(),
        }
    }
}

fn terms_to_poly(nvars: usize, terms: &[PolyTerm]) -> Result<Poly> {
    let mut p = Poly::zero(nvars);
    for t in terms {
        if t.exp.len() != nvars {
            return Err(Error::NvarsMismatch(nvars, t.exp.len()));
        }
        p.add_term(Exponent(t.exp.clone()), from_strings(&t.num, &t.den)?);
    }
    Ok(p)
}

impl TryFrom<&PolyJson> for Poly {
    type Error = Error;
    fn try_from(j: &PolyJson) -> Result<Poly> {
        terms_to_poly(j.nvars, &j.terms)
    }
}

/// A truncated series; `precision` is `null` for an exact polynomial
/// coefficient of an operator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub nvars: usize,
    pub precision: Option<u32>,
    pub terms: Vec<PolyTerm>,
}

impl From<&TruncatedSeries> for SeriesJson {
    fn from(f: &TruncatedSeries) -> Self {
        let p = PolyJson::from(f.body());
        SeriesJson {
            nvars: p.nvars,
            precision: Some(f.precision()),
            terms: p.terms,
        }
    }
}

impl TryFrom<&SeriesJson> for TruncatedSeries {
    type Error = Error;
    fn try_from(j: &SeriesJson) -> Result<TruncatedSeries> {
        let n = j
            .precision
            .ok_or_else(|| Error::Json("series needs a precision".into()))?;
        Ok(TruncatedSeries::new(terms_to_poly(j.nvars, &j.terms)?, n))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowJson {
    pub tmin: i64,
    pub tmax: i64,
    pub umax: u32,
}

impl From<Window> for WindowJson {
    fn from(w: Window) -> Self {
        WindowJson {
            tmin: w.tmin,
            tmax: w.tmax,
            umax: w.umax,
        }
    }
}

impl From<WindowJson> for Window {
    fn from(w: WindowJson) -> Self {
        Window::new(w.tmin, w.tmax, w.umax)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentTerm {
    pub u: u32,
    pub t: i64,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentJson {
    pub terms: Vec<LaurentTerm>,
    /// Defaults to the enclosing subspace's window.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowJson>,
}

impl From<&UTLaurent> for LaurentJson {
    fn from(f: &UTLaurent) -> Self {
        LaurentJson {
            terms: f
                .terms()
                .map(|(m, l, c)| {
                    let (num, den) = to_strings(c);
                    LaurentTerm {
                        u: m,
                        t: l,
                        num,
                        den,
                    }
                })
                .collect(),
            window: Some(f.window().into()),
        }
    }
}

impl LaurentJson {
    pub fn to_laurent(&self, default: Option<Window>) -> Result<UTLaurent> {
        let window = self
            .window
            .map(Window::from)
            .or(default)
            .ok_or_else(|| Error::Json("element needs a window".into()))?;
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((t.u, t.t, from_strings(&t.num, &t.den)?)))
            .collect::<Result<Vec<_>>>()?;
        UTLaurent::from_terms(terms, window)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpTerm {
    pub dop: Vec<u32>,
    pub coef: SeriesJson,
}

/// An operator; `precision` is `null` for exact polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub nvars: usize,
    pub precision: Option<u32>,
    pub dhat: bool,
    /// Tracked precision loss; recomputed from the terms when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loss: Option<u32>,
    pub terms: Vec<OpTerm>,
}

impl From<&DiffOp> for OperatorJson {
    fn from(p: &DiffOp) -> Self {
        let precision = p.precision().bound();
        OperatorJson {
            nvars: p.nvars(),
            precision,
            dhat: p.is_dhat(),
            loss: Some(p.loss()),
            terms: p
                .terms()
                .map(|(a, c)| OpTerm {
                    dop: a.0.clone(),
                    coef: SeriesJson {
                        nvars: c.nvars(),
                        precision,
                        terms: PolyJson::from(c).terms,
                    },
                })
                .collect(),
        }
    }
}

impl TryFrom<&OperatorJson> for DiffOp {
    type Error = Error;
    fn try_from(j: &OperatorJson) -> Result<DiffOp> {
        let precision = match j.precision {
            None => Precision::Exact,
            Some(0) => return Err(Error::PrecisionZero(0)),
            Some(n) => Precision::Trunc(n),
        };
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            if t.dop.len() != j.nvars {
                return Err(Error::NvarsMismatch(j.nvars, t.dop.len()));
            }
            if t.coef.nvars != j.nvars {
                return Err(Error::NvarsMismatch(j.nvars, t.coef.nvars));
            }
            terms.push((
                Exponent(t.dop.clone()),
                terms_to_poly(j.nvars, &t.coef.terms)?,
            ));
        }
        let op = DiffOp::from_terms(j.nvars, terms, precision, j.dhat);
        Ok(match j.loss {
            Some(l) => op.with_loss(l),
            None => op,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleJson {
    #[serde(rename = "type")]
    pub kind: String,
    pub params: TriangleRule,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceJson {
    pub kind: SubspaceKind,
    pub window: WindowJson,
    pub generators: Vec<LaurentJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<RuleJson>,
}

impl From<&SubspaceUT> for SubspaceJson {
    fn from(s: &SubspaceUT) -> Self {
        SubspaceJson {
            kind: s.kind,
            window: s.window.into(),
            generators: s.generators.iter().map(LaurentJson::from).collect(),
            rule: s.rule.clone().map(|params| RuleJson {
                kind: "triangle".into(),
                params,
            }),
        }
    }
}

impl TryFrom<&SubspaceJson> for SubspaceUT {
    type Error = Error;
    fn try_from(j: &SubspaceJson) -> Result<SubspaceUT> {
        let window = Window::from(j.window);
        let generators = j
            .generators
            .iter()
            .map(|g| g.to_laurent(Some(window)))
            .collect::<Result<Vec<_>>>()?;
        let rule = match &j.rule {
            None => None,
            Some(r) if r.kind == "triangle" => {
                if r.params.imin < 1 {
                    return Err(Error::Json("triangle rule needs imin >= 1".into()));
                }
                Some(r.params.clone())
            }
            Some(r) => return Err(Error::Json(format!("unknown rule type '{}'", r.kind))),
        };
        if rule.is_some() && j.kind == SubspaceKind::Algebra {
            return Err(Error::Json("rules apply to modules only".into()));
        }
        Ok(SubspaceUT {
            kind: j.kind,
            window,
            generators,
            rule,
        })
    }
}

/// `{"A": ..., "W": ..., "d": ...}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairJson {
    #[serde(rename = "A")]
    pub a: SubspaceJson,
    #[serde(rename = "W")]
    pub w: SubspaceJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
}

/// An operator given either as JSON or as an expression string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OperatorInput {
    Expr(String),
    Json(OperatorJson),
}

/// `{"nvars": n, "precision": N, "generators": [...]}`; the header fields
/// apply to expression generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingJson {
    #[serde(default)]
    pub nvars: Option<usize>,
    #[serde(default)]
    pub precision: Option<u32>,
    pub generators: Vec<OperatorInput>,
}

pub fn from_str<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(Error::from)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::{normal_ordered_exp, parse_operator, ParseOptions};
    use crate::scalar::frac;
    use crate::schur::glued_pair;

    #[test]
    fn poly_round_trip() {
        let p = &Poly::var(2, 0).scale(&frac(-7, 3)) + &Poly::one(2);
        let j = serde_json::to_string(&PolyJson::from(&p)).unwrap();
        assert!(j.contains("\"num\":\"-7\""));
        let back = Poly::try_from(&from_str::<PolyJson>(&j).unwrap()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn operator_round_trip() {
        let q = parse_operator(
            "d1*d2 + inv(1-x2)*E*d1",
            ParseOptions {
                nvars: Some(2),
                precision: 6,
            },
        )
        .unwrap();
        let j = serde_json::to_string(&OperatorJson::from(&q)).unwrap();
        let back = DiffOp::try_from(&from_str::<OperatorJson>(&j).unwrap()).unwrap();
        assert_eq!(back, q);
        let e = normal_ordered_exp(2, 5);
        let back = DiffOp::try_from(&OperatorJson::from(&e)).unwrap();
        assert_eq!(back, e);
        let exact = parse_operator("x1*d2 + 3", ParseOptions::default()).unwrap();
        let j = OperatorJson::from(&exact);
        assert_eq!(j.precision, None);
        assert_eq!(DiffOp::try_from(&j).unwrap(), exact);
    }

    #[test]
    fn pair_round_trip() {
        let (a, w) = glued_pair(Window::default()).unwrap();
        let pair = PairJson {
            a: (&a).into(),
            w: (&w).into(),
            d: Some(1),
        };
        let s = serde_json::to_string(&pair).unwrap();
        assert!(s.contains("\"type\":\"triangle\""));
        let back: PairJson = from_str(&s).unwrap();
        assert_eq!(SubspaceUT::try_from(&back.a).unwrap(), a);
        assert_eq!(SubspaceUT::try_from(&back.w).unwrap(), w);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(from_str::<PolyJson>("{").is_err());
        let bad = r#"{"kind":"module","window":{"tmin":-4,"tmax":4,"umax":4},
            "generators":[{"terms":[{"u":9,"t":0,"num":"1","den":"1"}]}]}"#;
        let j: SubspaceJson = from_str(bad).unwrap();
        assert!(SubspaceUT::try_from(&j).is_err());
        let ring: RingJson = from_str(r#"{"generators":["d1", "d2"]}"#).unwrap();
        assert_eq!(ring.generators.len(), 2);
    }
}
