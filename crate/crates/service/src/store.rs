use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use crate::session::DraftSession;

pub const SESSION_FILE: &str = "sessions.jsonl";

/// Append-only log of session snapshots; the last line per id wins.
#[derive(Debug)]
pub struct SessionLog {
    path: PathBuf,
    file: File,
}

impl SessionLog {
    /// Opens (creating if needed) the log under `dir` and replays it.
    pub fn open(dir: &Path) -> std::io::Result<(Self, Vec<DraftSession>)> {
        fs::create_dir_all(dir)?;
        let path = dir.join(SESSION_FILE);
        let mut latest: HashMap<String, (usize, DraftSession)> = HashMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(&path)?);
            for (i, line) in reader.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str::<DraftSession>(&line) {
                    Ok(s) => {
                        let first = latest.get(&s.session_id).map_or(i, |(at, _)| *at);
                        latest.insert(s.session_id.clone(), (first, s));
                    }
                    // A torn final write must not make the store unusable.
                    Err(e) => log::warn!("{}:{}: skipping unreadable session record: {e}", path.display(), i + 1),
                }
            }
        }
        let mut sessions: Vec<(usize, DraftSession)> = latest.into_values().collect();
        sessions.sort_by_key(|(first, _)| *first);
        let file = OpenOptions::new().create(true).append(true).open(&path)?;
        Ok((SessionLog { path, file }, sessions.into_iter().map(|(_, s)| s).collect()))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn append(&mut self, session: &DraftSession) -> std::io::Result<()> {
        let mut line = serde_json::to_string(session).map_err(std::io::Error::other)?;
        line.push('\n');
        self.file.write_all(line.as_bytes())?;
        self.file.flush()
    }
}
