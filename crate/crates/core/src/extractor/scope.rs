//! Receiver-to-class resolution from local declarations, field declarations
//! and the import table.

use std::collections::BTreeMap;

/// Import declarations of one source file. Single-type imports map a simple
/// class name to its qualified name; wildcard imports are remembered but
/// never qualify anything, since the target package is ambiguous.
#[derive(Debug, Clone, Default)]
pub struct ImportTable {
    single: BTreeMap<String, String>,
    wildcards: Vec<String>,
}

impl ImportTable {
    pub fn new() -> ImportTable {
        ImportTable::default()
    }

    /// Registers `import a.b.C;`. A later import of the same simple name wins.
    pub fn add_single_type(&mut self, qualified: &str) {
        let simple = qualified.rsplit('.').next().unwrap_or(qualified);
        self.single.insert(simple.to_string(), qualified.to_string());
    }

    /// Registers `import a.b.*;`.
    pub fn add_wildcard(&mut self, package: &str) {
        self.wildcards.push(package.to_string());
    }

    pub fn wildcards(&self) -> &[String] {
        &self.wildcards
    }

    /// Expands a simple class name through the single-type imports. Names
    /// that are already dotted, or have no matching import, pass through.
    pub fn qualify(&self, name: &str) -> String {
        if name.contains('.') {
            return name.to_string();
        }
        self.single.get(name).cloned().unwrap_or_else(|| name.to_string())
    }
}

/// What a method body can see, in resolution priority order: its own local
/// declarations (most recent first), the enclosing class's fields, and the
/// file's imports for qualification.
#[derive(Debug)]
pub struct ResolutionScope<'a> {
    imports: &'a ImportTable,
    fields: &'a BTreeMap<String, String>,
    locals: Vec<(String, String)>,
}

impl<'a> ResolutionScope<'a> {
    pub fn new(imports: &'a ImportTable, fields: &'a BTreeMap<String, String>) -> Self {
        ResolutionScope { imports, fields, locals: Vec::new() }
    }

    /// Records a local declaration; later declarations shadow earlier ones.
    pub fn push_local(&mut self, name: impl Into<String>, declared_type: impl Into<String>) {
        self.locals.push((name.into(), declared_type.into()));
    }

    /// True when the name is a known local or field.
    pub fn has_binding(&self, name: &str) -> bool {
        self.locals.iter().any(|(n, _)| n == name) || self.fields.contains_key(name)
    }

    pub fn qualify(&self, class_name: &str) -> String {
        self.imports.qualify(class_name)
    }

    /// Resolves a receiver identifier to a class name: the declared type of
    /// the most recent matching local, else of a field, both qualified
    /// through the imports; an undeclared capitalized receiver is taken as a
    /// static call on that class. Anything else is unresolved.
    pub fn resolve_receiver(&self, receiver: &str) -> Option<String> {
        if let Some((_, ty)) = self.locals.iter().rev().find(|(n, _)| n == receiver) {
            return Some(self.imports.qualify(ty));
        }
        if let Some(ty) = self.fields.get(receiver) {
            return Some(self.imports.qualify(ty));
        }
        if receiver.chars().next().is_some_and(char::is_uppercase) {
            return Some(self.imports.qualify(receiver));
        }
        None
    }
}
