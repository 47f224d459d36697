//! JSON grading records: `{id, task_kind, problem, response, gold, flags}`
//! in, `{id, reward, format, accuracy, bonus, reason}` out. Fields the
//! grader does not know are copied through unchanged.

use serde_json::{json, Map, Value};

use crate::error::GradeError;
use crate::grade::{grade, GradeContext, RewardResult};
use crate::task::{Flags, TaskKind, TaskSpec};

pub const RECORD_VERSION: u64 = 1;

const INPUT_FIELDS: [&str; 7] = ["v", "id", "task_kind", "problem", "response", "gold", "flags"];
const OUTPUT_FIELDS: [&str; 6] = ["reward", "format", "accuracy", "bonus", "reason", "error"];

fn field<'a>(obj: &'a Map<String, Value>, name: &str) -> Result<&'a Value, GradeError> {
    obj.get(name).ok_or_else(|| GradeError::MalformedRecord(format!("missing field {name:?}")))
}

fn string_field<'a>(obj: &'a Map<String, Value>, name: &str) -> Result<&'a str, GradeError> {
    field(obj, name)?
        .as_str()
        .ok_or_else(|| GradeError::MalformedRecord(format!("field {name:?} must be a string")))
}

/// Builds the task and response text from a record.
pub fn task_from_record(record: &Value) -> Result<(TaskSpec, String), GradeError> {
    let obj = record
        .as_object()
        .ok_or_else(|| GradeError::MalformedRecord("record must be a JSON object".into()))?;
    match obj.get("v") {
        None => {}
        Some(v) => match v.as_u64() {
            Some(RECORD_VERSION) => {}
            Some(other) => return Err(GradeError::UnsupportedVersion(other)),
            None => return Err(GradeError::MalformedRecord("field \"v\" must be an integer".into())),
        },
    }
    field(obj, "id")?;
    let kind: TaskKind = string_field(obj, "task_kind")?.parse()?;
    let response = string_field(obj, "response")?.to_string();
    let flags = match obj.get("flags") {
        None | Some(Value::Null) => Flags::default(),
        Some(v) => serde_json::from_value(v.clone())
            .map_err(|e| GradeError::MalformedRecord(format!("flags: {e}")))?,
    };
    let task = TaskSpec::from_json(kind, field(obj, "gold")?, flags)?;
    Ok((task, response))
}

pub fn grade_record(record: &Value, ctx: &GradeContext) -> Result<RewardResult, GradeError> {
    let (task, response) = task_from_record(record)?;
    grade(&task, &response, ctx)
}

fn passthrough(record: &Value, out: &mut Map<String, Value>) {
    if let Some(obj) = record.as_object() {
        for (k, v) in obj {
            if !INPUT_FIELDS.contains(&k.as_str()) && !OUTPUT_FIELDS.contains(&k.as_str()) {
                out.insert(k.clone(), v.clone());
            }
        }
    }
}

fn record_id(record: &Value) -> Value {
    record.get("id").cloned().unwrap_or(Value::Null)
}

pub fn result_json(record: &Value, result: &RewardResult) -> Value {
    let mut out = Map::new();
    out.insert("v".into(), json!(RECORD_VERSION));
    out.insert("id".into(), record_id(record));
    out.insert("reward".into(), json!(result.reward));
    out.insert("format".into(), json!(result.format));
    out.insert("accuracy".into(), json!(result.accuracy));
    out.insert("bonus".into(), json!(result.bonus));
    out.insert("reason".into(), json!({"code": result.reason.code, "message": result.reason.message}));
    passthrough(record, &mut out);
    Value::Object(out)
}

pub fn error_json(record: &Value, error: &GradeError) -> Value {
    let mut out = Map::new();
    out.insert("v".into(), json!(RECORD_VERSION));
    out.insert("id".into(), record_id(record));
    out.insert("error".into(), json!({"code": error.code(), "message": error.to_string()}));
    passthrough(record, &mut out);
    Value::Object(out)
}

/// Grades one JSONL line. Faults become error records rather than aborting.
pub fn grade_line(line: &str, ctx: &GradeContext) -> Value {
    match serde_json::from_str::<Value>(line) {
        Ok(record) => match grade_record(&record, ctx) {
            Ok(r) => result_json(&record, &r),
            Err(e) => error_json(&record, &e),
        },
        Err(e) => error_json(&Value::Null, &GradeError::MalformedRecord(format!("invalid JSON: {e}"))),
    }
}
