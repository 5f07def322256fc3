//! Mutation sessions: an initial QP plus a history of mutations with an
//! undo cursor. The current QP is always the replay of the history prefix.

use std::fs;
use std::path::Path;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use qpw_core::classify::classify;
use qpw_core::json;
use qpw_core::qp::QuiverWithPotential;
use qpw_core::reduce::qp_mutate;
use qpw_core::QuiverError;

use crate::commands::{vertex, CommandError, CommandResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Matrix mutation of the quiver; the potential is dropped.
    Quiver,
    /// QP mutation: premutation followed by reduction.
    Qp,
}

/// One history entry. `k` is 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub k: usize,
    pub mode: Mode,
}

impl Step {
    pub fn apply(&self, p: &QuiverWithPotential) -> CommandResult<QuiverWithPotential> {
        let k = vertex(self.k, p.quiver().n())?;
        match self.mode {
            Mode::Qp => Ok(qp_mutate(p, k)?),
            Mode::Quiver => match p.quiver().mutate(k) {
                Ok(q) => Ok(QuiverWithPotential::new(q, p.truncation())?),
                Err(QuiverError::TwoCycle(..)) => Err(CommandError::TwoCycle { vertex: self.k }),
                Err(e) => Err(e.into()),
            },
        }
    }
}

pub fn replay(initial: &QuiverWithPotential, steps: &[Step]) -> CommandResult<QuiverWithPotential> {
    steps.iter().try_fold(initial.clone(), |p, s| s.apply(&p))
}

#[derive(Clone, Debug)]
pub struct Session {
    pub id: String,
    initial: QuiverWithPotential,
    history: Vec<Step>,
    cursor: usize,
    current: QuiverWithPotential,
    pub created_at: DateTime<Utc>,
    pub touched_at: DateTime<Utc>,
}

impl Session {
    pub fn new(id: String, initial: QuiverWithPotential, now: DateTime<Utc>) -> Self {
        Session {
            id,
            current: initial.clone(),
            initial,
            history: Vec::new(),
            cursor: 0,
            created_at: now,
            touched_at: now,
        }
    }

    pub fn current(&self) -> &QuiverWithPotential {
        &self.current
    }

    pub fn history(&self) -> &[Step] {
        &self.history
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    /// Apply a step; redo entries past the cursor are discarded.
    pub fn apply(&mut self, step: Step, now: DateTime<Utc>) -> CommandResult<()> {
        let next = step.apply(&self.current)?;
        self.history.truncate(self.cursor);
        self.history.push(step);
        self.cursor += 1;
        self.current = next;
        self.touched_at = now;
        Ok(())
    }

    /// Returns false when there is nothing to undo.
    pub fn undo(&mut self, now: DateTime<Utc>) -> CommandResult<bool> {
        if self.cursor == 0 {
            return Ok(false);
        }
        self.move_cursor(self.cursor - 1, now)?;
        Ok(true)
    }

    pub fn redo(&mut self, now: DateTime<Utc>) -> CommandResult<bool> {
        if self.cursor == self.history.len() {
            return Ok(false);
        }
        self.move_cursor(self.cursor + 1, now)?;
        Ok(true)
    }

    fn move_cursor(&mut self, cursor: usize, now: DateTime<Utc>) -> CommandResult<()> {
        self.current = replay(&self.initial, &self.history[..cursor])?;
        self.cursor = cursor;
        self.touched_at = now;
        Ok(())
    }

    /// The document served by `GET /api/session/{id}`.
    pub fn view(&self) -> Value {
        let q = self.current.quiver();
        let badge = match classify(q) {
            Ok(c) => c.mutation_type.to_string(),
            Err(e) => format!("unclassified: {e}"),
        };
        let two_cycles: Vec<[usize; 2]> = q.two_cycles().into_iter().map(|(i, j)| [i + 1, j + 1]).collect();
        json!({
            "id": self.id,
            "qp": json::qp_to_value(&self.current),
            "badge": badge,
            "twoCycles": two_cycles,
            "history": self.history,
            "cursor": self.cursor,
            "canUndo": self.cursor > 0,
            "canRedo": self.cursor < self.history.len(),
            "createdAt": self.created_at.to_rfc3339(),
            "touchedAt": self.touched_at.to_rfc3339(),
        })
    }

    /// Persistent form: the current QP is not stored, it is replayed on load.
    pub fn to_record(&self) -> Value {
        json!({
            "id": self.id,
            "initial": json::qp_to_value(&self.initial),
            "history": self.history,
            "cursor": self.cursor,
            "createdAt": self.created_at.to_rfc3339(),
            "touchedAt": self.touched_at.to_rfc3339(),
        })
    }

    pub fn from_record(v: &Value) -> CommandResult<Self> {
        let field =
            |name: &str| v.get(name).ok_or_else(|| CommandError::Malformed(format!("session record lacks {name}")));
        let id = field("id")?.as_str().ok_or_else(|| CommandError::Malformed("id must be a string".into()))?;
        let initial = json::qp_from_value(field("initial")?)?;
        let history: Vec<Step> =
            serde_json::from_value(field("history")?.clone()).map_err(|e| CommandError::Malformed(e.to_string()))?;
        let cursor = field("cursor")?.as_u64().map(|c| c as usize).filter(|&c| c <= history.len());
        let cursor = cursor.ok_or_else(|| CommandError::Malformed("cursor out of range".into()))?;
        let time = |name: &str| -> CommandResult<DateTime<Utc>> {
            let s = field(name)?.as_str().unwrap_or_default();
            DateTime::parse_from_rfc3339(s)
                .map(|t| t.with_timezone(&Utc))
                .map_err(|e| CommandError::Malformed(format!("{name}: {e}")))
        };
        let current = replay(&initial, &history[..cursor])?;
        Ok(Session {
            id: id.to_string(),
            initial,
            history,
            cursor,
            current,
            created_at: time("createdAt")?,
            touched_at: time("touchedAt")?,
        })
    }

    /// Write `<dir>/<id>.json` via a temporary file and rename.
    pub fn save(&self, dir: &Path) -> CommandResult<()> {
        let io = |e: std::io::Error| CommandError::Io(e.to_string());
        fs::create_dir_all(dir).map_err(io)?;
        let tmp = dir.join(format!(".{}.json.tmp", self.id));
        fs::write(&tmp, crate::commands::render(&self.to_record())).map_err(io)?;
        fs::rename(&tmp, dir.join(format!("{}.json", self.id))).map_err(io)
    }
}

/// Load every `*.json` session record in `dir`; unreadable files are skipped
/// and reported.
pub fn load_all(dir: &Path) -> (Vec<Session>, Vec<String>) {
    let mut sessions = Vec::new();
    let mut problems = Vec::new();
    let Ok(entries) = fs::read_dir(dir) else { return (sessions, problems) };
    let mut paths: Vec<_> = entries.filter_map(|e| e.ok().map(|e| e.path())).collect();
    paths.sort();
    for path in paths.into_iter().filter(|p| p.extension().is_some_and(|x| x == "json")) {
        let loaded = fs::read_to_string(&path)
            .map_err(|e| CommandError::Io(e.to_string()))
            .and_then(|text| json::parse_value(&text).map_err(CommandError::from))
            .and_then(|v| Session::from_record(&v));
        match loaded {
            Ok(s) => sessions.push(s),
            Err(e) => problems.push(format!("{}: {e}", path.display())),
        }
    }
    (sessions, problems)
}
