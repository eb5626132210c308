use std::any::Any;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// The color set of a place or port.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ColorType {
    Unit,
    Int,
    Bool,
    List { elem: Box<ColorType> },
    Record { fields: Vec<Field> },
    Opaque { tag: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Field {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: ColorType,
}

impl ColorType {
    pub fn list(elem: ColorType) -> Self {
        ColorType::List { elem: Box::new(elem) }
    }

    pub fn record<S: Into<String>>(fields: impl IntoIterator<Item = (S, ColorType)>) -> Self {
        ColorType::Record {
            fields: fields
                .into_iter()
                .map(|(name, ty)| Field { name: name.into(), ty })
                .collect(),
        }
    }

    pub fn opaque(tag: &str) -> Self {
        ColorType::Opaque { tag: tag.to_string() }
    }

    pub fn field(&self, name: &str) -> Option<&ColorType> {
        match self {
            ColorType::Record { fields } => fields.iter().find(|f| f.name == name).map(|f| &f.ty),
            _ => None,
        }
    }

    /// Problems with the type itself, such as duplicate record fields.
    pub fn well_formed(&self) -> Result<(), String> {
        match self {
            ColorType::List { elem } => elem.well_formed(),
            ColorType::Record { fields } => {
                for (i, f) in fields.iter().enumerate() {
                    if fields[..i].iter().any(|g| g.name == f.name) {
                        return Err(format!("duplicate record field `{}`", f.name));
                    }
                    f.ty.well_formed()?;
                }
                Ok(())
            }
            ColorType::Opaque { tag } if tag.is_empty() => Err("opaque type with empty tag".into()),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for ColorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColorType::Unit => f.write_str("unit"),
            ColorType::Int => f.write_str("int"),
            ColorType::Bool => f.write_str("bool"),
            ColorType::List { elem } => write!(f, "list<{elem}>"),
            ColorType::Record { fields } => {
                f.write_str("{")?;
                for (i, fd) in fields.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}: {}", fd.name, fd.ty)?;
                }
                f.write_str("}")
            }
            ColorType::Opaque { tag } => write!(f, "opaque<{tag}>"),
        }
    }
}

/// Host data carried by reference. Equality is identity of the payload.
#[derive(Clone)]
pub struct Opaque {
    tag: Arc<str>,
    data: Arc<dyn Any + Send + Sync>,
}

impl Opaque {
    pub fn new<T: Any + Send + Sync>(tag: &str, data: T) -> Self {
        Self {
            tag: tag.into(),
            data: Arc::new(data),
        }
    }

    pub fn from_arc<T: Any + Send + Sync>(tag: &str, data: Arc<T>) -> Self {
        Self { tag: tag.into(), data }
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn downcast<T: Any + Send + Sync>(&self) -> Option<&T> {
        self.data.downcast_ref()
    }

    pub fn downcast_arc<T: Any + Send + Sync>(&self) -> Option<Arc<T>> {
        self.data.clone().downcast().ok()
    }

    fn addr(&self) -> usize {
        Arc::as_ptr(&self.data) as *const () as usize
    }
}

impl PartialEq for Opaque {
    fn eq(&self, other: &Self) -> bool {
        self.tag == other.tag && Arc::ptr_eq(&self.data, &other.data)
    }
}

impl fmt::Debug for Opaque {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "opaque<{}>@{:x}", self.tag, self.addr())
    }
}

/// A token color value.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Unit,
    Int(i64),
    Bool(bool),
    List(Vec<Value>),
    Record(Vec<(String, Value)>),
    Opaque(Opaque),
}

impl Value {
    pub fn record<S: Into<String>>(fields: impl IntoIterator<Item = (S, Value)>) -> Self {
        Value::Record(fields.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn field(&self, name: &str) -> Option<&Value> {
        match self {
            Value::Record(fs) => fs.iter().find(|(k, _)| k == name).map(|(_, v)| v),
            _ => None,
        }
    }

    pub(crate) fn field_mut(&mut self, name: &str) -> Option<&mut Value> {
        match self {
            Value::Record(fs) => fs.iter_mut().find(|(k, _)| k == name).map(|(_, v)| v),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(i) => Some(*i),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Value]> {
        match self {
            Value::List(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_opaque(&self) -> Option<&Opaque> {
        match self {
            Value::Opaque(o) => Some(o),
            _ => None,
        }
    }

    /// Dynamic type check.
    pub fn conforms(&self, ty: &ColorType) -> bool {
        match (self, ty) {
            (Value::Unit, ColorType::Unit) | (Value::Int(_), ColorType::Int) | (Value::Bool(_), ColorType::Bool) => {
                true
            }
            (Value::List(items), ColorType::List { elem }) => items.iter().all(|v| v.conforms(elem)),
            (Value::Record(vals), ColorType::Record { fields }) => {
                vals.len() == fields.len()
                    && fields
                        .iter()
                        .all(|f| vals.iter().any(|(k, v)| k == &f.name && v.conforms(&f.ty)))
            }
            (Value::Opaque(o), ColorType::Opaque { tag }) => o.tag() == tag,
            _ => false,
        }
    }

    /// A string that is equal for equal values; used to key markings.
    pub fn canonical_key(&self) -> String {
        match self {
            Value::Unit => "()".into(),
            Value::Int(i) => i.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::List(items) => {
                let parts: Vec<String> = items.iter().map(Value::canonical_key).collect();
                format!("[{}]", parts.join(","))
            }
            Value::Record(fs) => {
                let mut parts: Vec<String> = fs.iter().map(|(k, v)| format!("{k}:{}", v.canonical_key())).collect();
                parts.sort();
                format!("{{{}}}", parts.join(","))
            }
            Value::Opaque(o) => format!("{o:?}"),
        }
    }

    /// JSON rendering; opaque payloads appear as their tag.
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::{json, Map};
        match self {
            Value::Unit => serde_json::Value::Null,
            Value::Int(i) => json!(i),
            Value::Bool(b) => json!(b),
            Value::List(items) => serde_json::Value::Array(items.iter().map(Value::to_json).collect()),
            Value::Record(fs) => {
                let mut m = Map::new();
                for (k, v) in fs {
                    m.insert(k.clone(), v.to_json());
                }
                serde_json::Value::Object(m)
            }
            Value::Opaque(o) => json!({ "opaque": o.tag() }),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Opaque(o) => write!(f, "<{}>", o.tag()),
            other => f.write_str(&other.to_json().to_string()),
        }
    }
}
