//! Name-keyed registries of interchangeable strategies.
//!
//! Each family (state-size estimators, result writers) is a trait; concrete
//! implementations are registered under a stable name and looked up at
//! runtime from CLI flags or configuration.

use crate::error::{Error, Result};
use crate::io::results::{CsvWriter, JsonWriter, ResultWriter};
use crate::sos::{PopulationSd, SampleSd, StateSizeEstimator};

pub trait Named {
    fn name(&self) -> &'static str;
}

pub struct Registry<T: ?Sized + Named> {
    kind: &'static str,
    entries: Vec<Box<T>>,
}

impl<T: ?Sized + Named> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Self {
            kind,
            entries: Vec::new(),
        }
    }

    /// Adds `item`, replacing any entry registered under the same name.
    pub fn register(&mut self, item: Box<T>) -> &mut Self {
        match self.entries.iter().position(|e| e.name() == item.name()) {
            Some(i) => self.entries[i] = item,
            None => self.entries.push(item),
        }
        self
    }

    pub fn get(&self, name: &str) -> Result<&T> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::UnknownStrategy {
                kind: self.kind,
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.entries.iter().map(|b| b.as_ref())
    }
}

/// Built-in state-size estimators. The first entry is the default.
pub fn estimators() -> Registry<dyn StateSizeEstimator> {
    let mut r: Registry<dyn StateSizeEstimator> = Registry::new("state size estimator");
    r.register(Box::new(SampleSd))
        .register(Box::new(PopulationSd));
    r
}

/// Built-in result writers. The first entry is the default.
pub fn result_writers() -> Registry<dyn ResultWriter> {
    let mut r: Registry<dyn ResultWriter> = Registry::new("output format");
    r.register(Box::new(CsvWriter))
        .register(Box::new(JsonWriter));
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Dummy(&'static str, u8);

    impl Named for Dummy {
        fn name(&self) -> &'static str {
            self.0
        }
    }

    #[test]
    fn lookup_and_replace() {
        let mut r: Registry<Dummy> = Registry::new("dummy");
        r.register(Box::new(Dummy("a", 1)))
            .register(Box::new(Dummy("b", 2)))
            .register(Box::new(Dummy("a", 3)));
        assert_eq!(r.names(), vec!["a", "b"]);
        assert_eq!(r.get("a").unwrap().1, 3);
        let err = r.get("zzz").err().unwrap().to_string();
        assert!(
            err.contains("unknown dummy `zzz`") && err.contains("a, b"),
            "{err}"
        );
    }

    #[test]
    fn builtins() {
        assert_eq!(estimators().names(), vec!["sample-sd", "population-sd"]);
        assert_eq!(result_writers().names(), vec!["csv", "json"]);
    }
}
