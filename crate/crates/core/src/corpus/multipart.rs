use serde_json::Value;

/// Turns a multi-part source document into one text.
///
/// Two JSON shapes are recognized: an array of `{name, content}` objects, and an
/// object mapping file names to `{content}`. Parts are joined by a newline in
/// document order. Any other input (including other JSON) comes back verbatim.
pub fn flatten_multipart(raw: &[u8]) -> String {
    flatten_json(raw).unwrap_or_else(|| decode_lossy(raw).0)
}

/// Decodes UTF-8, replacing invalid sequences. The flag is set when a
/// replacement happened.
pub fn decode_lossy(raw: &[u8]) -> (String, bool) {
    match std::str::from_utf8(raw) {
        Ok(text) => (text.to_owned(), false),
        Err(_) => (String::from_utf8_lossy(raw).into_owned(), true),
    }
}

fn flatten_json(raw: &[u8]) -> Option<String> {
    let value: Value = serde_json::from_slice(raw).ok()?;
    let parts: Vec<&str> = match &value {
        Value::Array(items) if !items.is_empty() => items
            .iter()
            .map(|item| item.get("content")?.as_str())
            .collect::<Option<_>>()?,
        Value::Object(files) if !files.is_empty() => files
            .values()
            .map(|file| file.get("content")?.as_str())
            .collect::<Option<_>>()?,
        _ => return None,
    };
    Some(parts.join("\n"))
}
