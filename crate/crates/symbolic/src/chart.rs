//! Named coordinate charts.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::SymbolicError;
use crate::poly::Var;

#[derive(Debug)]
struct ChartData {
    name: String,
    coords: Vec<String>,
    params: Vec<String>,
    index: HashMap<String, Var>,
}

/// An ordered set of coordinate names, optionally followed by constant
/// parameters.
///
/// Coordinates carry differentials; parameters are symbolic constants
/// (`d(a) = 0`). Cloning is cheap and the variable order never changes.
#[derive(Clone)]
pub struct Chart(Arc<ChartData>);

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Chart {
    pub fn new<S: AsRef<str>>(name: &str, coords: &[S]) -> Result<Self, SymbolicError> {
        Self::with_params::<S, &str>(name, coords, &[])
    }

    pub fn with_params<S: AsRef<str>, T: AsRef<str>>(
        name: &str,
        coords: &[S],
        params: &[T],
    ) -> Result<Self, SymbolicError> {
        let coords: Vec<String> = coords.iter().map(|s| s.as_ref().to_string()).collect();
        let params: Vec<String> = params.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, v) in coords.iter().chain(params.iter()).enumerate() {
            if !is_identifier(v) {
                return Err(SymbolicError::InvalidChart(format!("`{v}` is not an identifier")));
            }
            if v == "d" {
                return Err(SymbolicError::InvalidChart("`d` is reserved for the exterior derivative".into()));
            }
            if index.insert(v.clone(), i as Var).is_some() {
                return Err(SymbolicError::InvalidChart(format!("duplicate variable `{v}`")));
            }
        }
        Ok(Chart(Arc::new(ChartData { name: name.to_string(), coords, params, index })))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    /// Number of coordinates (the dimension; parameters excluded).
    pub fn dim(&self) -> usize {
        self.0.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.0.coords
    }

    pub fn params(&self) -> &[String] {
        &self.0.params
    }

    pub fn num_vars(&self) -> usize {
        self.0.coords.len() + self.0.params.len()
    }

    pub fn var_name(&self, v: Var) -> &str {
        let v = v as usize;
        if v < self.0.coords.len() {
            &self.0.coords[v]
        } else {
            &self.0.params[v - self.0.coords.len()]
        }
    }

    pub fn index_of(&self, name: &str) -> Result<Var, SymbolicError> {
        self.0.index.get(name).copied().ok_or_else(|| SymbolicError::UnknownVariable(name.to_string()))
    }

    pub fn is_coord(&self, v: Var) -> bool {
        (v as usize) < self.0.coords.len()
    }

    pub(crate) fn namer(&self) -> impl Fn(Var) -> String + '_ {
        move |v| self.var_name(v).to_string()
    }

    pub(crate) fn ensure_same(&self, other: &Chart) -> Result<(), SymbolicError> {
        if self == other {
            Ok(())
        } else {
            Err(SymbolicError::ChartMismatch { left: self.name().into(), right: other.name().into() })
        }
    }
}

impl PartialEq for Chart {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.name == other.0.name && self.0.coords == other.0.coords && self.0.params == other.0.params)
    }
}

impl Eq for Chart {}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chart({}: {:?}", self.0.name, self.0.coords)?;
        if !self.0.params.is_empty() {
            write!(f, "; {:?}", self.0.params)?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_names() {
        assert!(Chart::new("c", &["x1", "x1"]).is_err());
        assert!(Chart::new("c", &["1x"]).is_err());
        assert!(Chart::new("c", &[""]).is_err());
        assert!(Chart::new("c", &["d"]).is_err());
        assert!(Chart::with_params("c", &["x"], &["x"]).is_err());
    }

    #[test]
    fn lookup() {
        let c = Chart::with_params("c", &["x", "y"], &["a"]).unwrap();
        assert_eq!(c.dim(), 2);
        assert_eq!(c.index_of("a").unwrap(), 2);
        assert!(!c.is_coord(2));
        assert_eq!(c.var_name(1), "y");
        assert!(matches!(c.index_of("z"), Err(SymbolicError::UnknownVariable(_))));
    }
}
