//! Interned symbol names shared by parameters, variables and differential parameters.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};
use std::sync::{Mutex, OnceLock};

struct Entry {
    name: Box<str>,
}

/// A cheap, copyable handle to an interned name.
///
/// Equality is pointer identity; ordering is by name so that every printed
/// result is independent of interning order.
#[derive(Clone, Copy)]
pub struct Symbol(&'static Entry);

fn table() -> &'static Mutex<HashMap<&'static str, Symbol>> {
    static TABLE: OnceLock<Mutex<HashMap<&'static str, Symbol>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Symbol {
    pub fn new(name: &str) -> Symbol {
        let mut t = table().lock().unwrap_or_else(|e| e.into_inner());
        if let Some(s) = t.get(name) {
            return *s;
        }
        let entry: &'static Entry = Box::leak(Box::new(Entry { name: name.into() }));
        let sym = Symbol(entry);
        t.insert(&entry.name, sym);
        sym
    }

    /// A symbol whose name has never been interned before.
    pub fn fresh(prefix: &str) -> Symbol {
        static COUNTER: AtomicUsize = AtomicUsize::new(0);
        loop {
            let n = COUNTER.fetch_add(1, AtomicOrdering::Relaxed);
            let name = format!("{prefix}_{n}");
            let exists = table()
                .lock()
                .unwrap_or_else(|e| e.into_inner())
                .contains_key(name.as_str());
            if !exists {
                return Symbol::new(&name);
            }
        }
    }

    pub fn name(&self) -> &'static str {
        &self.0.name
    }
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.0, other.0)
    }
}

impl Eq for Symbol {}

impl Hash for Symbol {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (self.0 as *const Entry as usize).hash(state)
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            Ordering::Equal
        } else {
            self.name().cmp(other.name())
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}
