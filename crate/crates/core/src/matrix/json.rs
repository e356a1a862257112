//! `{"kind":"exact|radical|float","rows":n,"cols":m,"data":[[...]]}`
//!
//! Exact and radical entries are strings in the scalar formats (`"p/q"`,
//! `"c*sqrt(d)"`); float entries are JSON numbers.

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use super::{AnyMatrix, Matrix};
use crate::scalar::{RadicalScalar, Rational};

#[derive(Serialize, Deserialize)]
struct Raw {
    kind: String,
    rows: usize,
    cols: usize,
    data: Vec<Vec<Value>>,
}

fn rows_of<T: Clone>(m: &Matrix<T>, f: impl Fn(&T) -> Value) -> Vec<Vec<Value>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(&f).collect()).collect()
}

impl Serialize for AnyMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let data = match self {
            AnyMatrix::Exact(m) => rows_of(m, |q| Value::String(q.to_string())),
            AnyMatrix::Radical(m) => rows_of(m, |r| Value::String(r.to_string())),
            AnyMatrix::Float(m) => rows_of(m, |&v| {
                serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
            }),
        };
        Raw {
            kind: self.kind().to_string(),
            rows: self.rows(),
            cols: self.cols(),
            data,
        }
        .serialize(serializer)
    }
}

impl Serialize for Matrix<Rational> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        Raw {
            kind: "exact".to_string(),
            rows: self.rows(),
            cols: self.cols(),
            data: rows_of(self, |q| Value::String(q.to_string())),
        }
        .serialize(serializer)
    }
}

fn parse_entries<T, E: de::Error>(
    raw: &Raw,
    f: impl Fn(&Value) -> Result<T, String>,
) -> Result<Matrix<T>, E>
where
    T: Clone,
{
    if raw.data.len() != raw.rows || raw.data.iter().any(|r| r.len() != raw.cols) {
        return Err(E::custom(format!(
            "data does not match the declared {}x{} shape",
            raw.rows, raw.cols
        )));
    }
    Matrix::try_from_fn(raw.rows, raw.cols, |i, j| f(&raw.data[i][j])).map_err(E::custom)
}

fn text(v: &Value) -> Result<&str, String> {
    v.as_str().ok_or_else(|| format!("expected a string scalar, found {v}"))
}

impl<'de> Deserialize<'de> for AnyMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = Raw::deserialize(deserializer)?;
        match raw.kind.as_str() {
            "exact" => parse_entries(&raw, |v| {
                text(v)?.parse::<Rational>().map_err(|e| e.to_string())
            })
            .map(AnyMatrix::Exact),
            "radical" => parse_entries(&raw, |v| {
                text(v)?.parse::<RadicalScalar>().map_err(|e| e.to_string())
            })
            .map(AnyMatrix::Radical),
            "float" => parse_entries(&raw, |v| match v.as_f64() {
                Some(x) if x.is_finite() => Ok(x),
                _ => Err(format!("expected a finite number, found {v}")),
            })
            .map(AnyMatrix::Float),
            other => Err(de::Error::custom(format!("unknown matrix kind `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::exact_from_strs;

    #[test]
    fn exact_round_trip() {
        let m = AnyMatrix::Exact(exact_from_strs(&[&["2", "3"], &["3", "1/2"]]).unwrap());
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(
            json,
            r#"{"kind":"exact","rows":2,"cols":2,"data":[["2","3"],["3","1/2"]]}"#
        );
        assert_eq!(serde_json::from_str::<AnyMatrix>(&json).unwrap(), m);
    }

    #[test]
    fn float_and_radical_round_trip() {
        let f = AnyMatrix::Float(Matrix::from_rows(vec![vec![0.1, 2.0]]).unwrap());
        let back: AnyMatrix = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(back, f);
        let r = AnyMatrix::Radical(
            Matrix::from_rows(vec![vec!["3/2*sqrt(1/2)".parse::<RadicalScalar>().unwrap()]]).unwrap(),
        );
        let back: AnyMatrix = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn malformed_documents() {
        for doc in [
            r#"{"kind":"exact","rows":2,"cols":1,"data":[["1"]]}"#,
            r#"{"kind":"exact","rows":1,"cols":1,"data":[["x"]]}"#,
            r#"{"kind":"exact","rows":1,"cols":1,"data":[[1.5]]}"#,
            r#"{"kind":"weird","rows":0,"cols":0,"data":[]}"#,
            r#"{"kind":"float","rows":1,"cols":1,"data":[["1"]]}"#,
        ] {
            assert!(serde_json::from_str::<AnyMatrix>(doc).is_err(), "{doc}");
        }
    }
}
