use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use ioha_core::DataSetCollection;

/// An uploaded collection. The collection never changes after upload.
#[derive(Debug)]
pub struct Session {
    pub id: String,
    pub collection: Arc<DataSetCollection>,
    /// Seconds since the Unix epoch.
    pub created_at: u64,
    last_access: Mutex<Instant>,
}

impl Session {
    fn idle(&self, now: Instant) -> Duration {
        now.saturating_duration_since(*self.last_access.lock().expect("session clock"))
    }

    fn touch(&self, now: Instant) {
        *self.last_access.lock().expect("session clock") = now;
    }
}

/// In-memory sessions with idle expiry.
#[derive(Debug)]
pub struct SessionStore {
    ttl: Duration,
    sessions: RwLock<HashMap<String, Arc<Session>>>,
}

fn new_id() -> String {
    format!("{:032x}", rand::random::<u128>())
}

impl SessionStore {
    pub fn new(ttl: Duration) -> Self {
        Self {
            ttl,
            sessions: RwLock::new(HashMap::new()),
        }
    }

    pub fn ttl(&self) -> Duration {
        self.ttl
    }

    pub fn insert(&self, collection: DataSetCollection) -> Arc<Session> {
        let mut map = self.sessions.write().expect("session registry");
        let mut id = new_id();
        while map.contains_key(&id) {
            id = new_id();
        }
        let session = Arc::new(Session {
            id: id.clone(),
            collection: Arc::new(collection),
            created_at: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            last_access: Mutex::new(Instant::now()),
        });
        map.insert(id, Arc::clone(&session));
        session
    }

    /// Looks a session up and refreshes its idle clock. Expired sessions
    /// are dropped and reported as absent.
    pub fn get(&self, id: &str) -> Option<Arc<Session>> {
        let now = Instant::now();
        let session = self.sessions.read().expect("session registry").get(id).cloned()?;
        if session.idle(now) > self.ttl {
            self.sessions.write().expect("session registry").remove(id);
            return None;
        }
        session.touch(now);
        Some(session)
    }

    pub fn remove(&self, id: &str) -> bool {
        self.sessions.write().expect("session registry").remove(id).is_some()
    }

    /// Drops every session idle for longer than the TTL; returns how many.
    pub fn purge_expired(&self) -> usize {
        let now = Instant::now();
        let mut map = self.sessions.write().expect("session registry");
        let before = map.len();
        map.retain(|_, s| s.idle(now) <= self.ttl);
        before - map.len()
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("session registry").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
