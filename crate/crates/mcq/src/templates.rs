//! Question text templates, one `kind<TAB>text` line each.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rand::Rng;

use crate::McqError;

pub const TEMPLATE_HEADER: &str = "#! molreward-templates v1";
pub const KINDS: [&str; 4] = ["identify_numeric", "identify_label", "outlier_higher", "outlier_lower"];

#[derive(Clone, Debug)]
pub struct TemplateLibrary {
    by_kind: BTreeMap<String, Vec<String>>,
}

impl TemplateLibrary {
    pub fn parse(text: &str) -> Result<TemplateLibrary, McqError> {
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some(TEMPLATE_HEADER) {
            return Err(McqError::Template(format!("first line must be {TEMPLATE_HEADER:?}")));
        }
        let mut by_kind: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (kind, body) = line
                .split_once('\t')
                .ok_or_else(|| McqError::Template(format!("line {}: expected kind<TAB>text", i + 2)))?;
            if !KINDS.contains(&kind) {
                return Err(McqError::Template(format!("line {}: unknown kind {kind:?}", i + 2)));
            }
            by_kind.entry(kind.to_string()).or_default().push(body.trim().to_string());
        }
        if let Some(k) = KINDS.iter().find(|k| !by_kind.contains_key(**k)) {
            return Err(McqError::Template(format!("no template for {k}")));
        }
        Ok(TemplateLibrary { by_kind })
    }

    pub fn builtin() -> &'static TemplateLibrary {
        static LIB: OnceLock<TemplateLibrary> = OnceLock::new();
        LIB.get_or_init(|| {
            TemplateLibrary::parse(include_str!("../data/templates.txt")).expect("bundled templates parse")
        })
    }

    pub fn templates(&self, kind: &str) -> &[String] {
        self.by_kind.get(kind).map_or(&[], Vec::as_slice)
    }

    /// Picks a template for `kind` and fills the placeholders.
    pub fn render<R: Rng>(&self, kind: &str, fields: &[(&str, &str)], rng: &mut R) -> String {
        let options = self.templates(kind);
        let mut text = options[rng.random_range(0..options.len())].clone();
        for (name, value) in fields {
            text = text.replace(&format!("{{{name}}}"), value);
        }
        text
    }
}
