use serde_json::{json, Map, Value};

/// Version of the structured output records.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Human,
    Json,
}

/// Writes either human text or one JSON object per line, each tagged with
/// the schema version and the command name.
pub struct Emitter {
    format: Format,
    command: &'static str,
}

impl Emitter {
    pub fn new(format: Format, command: &'static str) -> Emitter {
        Emitter { format, command }
    }

    /// Emits `record` in JSON mode, `human` otherwise.
    pub fn emit(&self, record: Value, human: impl FnOnce() -> String) {
        match self.format {
            Format::Json => println!("{}", self.tagged(record)),
            Format::Human => {
                let text = human();
                if text.ends_with('\n') {
                    print!("{text}");
                } else {
                    println!("{text}");
                }
            }
        }
    }

    fn tagged(&self, record: Value) -> Value {
        let mut out = Map::new();
        out.insert("schema".into(), json!(SCHEMA_VERSION));
        out.insert("command".into(), json!(self.command));
        match record {
            Value::Object(fields) => out.extend(fields),
            other => {
                out.insert("value".into(), other);
            }
        }
        Value::Object(out)
    }
}
