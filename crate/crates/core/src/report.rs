//! Canonical JSON rendering shared by the reports.

use serde::Serialize;

/// Pretty JSON with object keys sorted, so identical values always render
/// to identical bytes.
pub fn to_canonical_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    // serde_json's default map is ordered, so a round trip through Value
    // sorts every object's keys.
    let value = serde_json::to_value(value)?;
    let mut text = serde_json::to_string_pretty(&value)?;
    text.push('\n');
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn keys_are_sorted() {
        let mut m = HashMap::new();
        m.insert("zeta", 1);
        m.insert("alpha", 2);
        m.insert("mid", 3);
        let text = to_canonical_json(&m).unwrap();
        let a = text.find("alpha").unwrap();
        let z = text.find("zeta").unwrap();
        assert!(a < text.find("mid").unwrap() && text.find("mid").unwrap() < z);
    }
}
