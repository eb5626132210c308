use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::AtomicBool;
use std::sync::Arc;

use crate::types::Value;

/// Body of a task transition. Receives owned copies of the in-port values
/// in port order and returns one value per out-port. Long-running bodies
/// should poll the flag and give up once it is set.
pub type TaskFn = Arc<dyn Fn(Vec<Value>, &Arc<AtomicBool>) -> Result<Vec<Value>, String> + Send + Sync>;

#[derive(Clone, Default)]
pub struct TaskRegistry {
    tasks: HashMap<String, TaskFn>,
}

impl TaskRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register<F>(&mut self, kind: &str, f: F) -> &mut Self
    where
        F: Fn(Vec<Value>, &Arc<AtomicBool>) -> Result<Vec<Value>, String> + Send + Sync + 'static,
    {
        self.tasks.insert(kind.to_string(), Arc::new(f));
        self
    }

    pub fn get(&self, kind: &str) -> Option<&TaskFn> {
        self.tasks.get(kind)
    }

    pub fn contains(&self, kind: &str) -> bool {
        self.tasks.contains_key(kind)
    }
}

impl fmt::Debug for TaskRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut kinds: Vec<&String> = self.tasks.keys().collect();
        kinds.sort();
        f.debug_struct("TaskRegistry").field("kinds", &kinds).finish()
    }
}
