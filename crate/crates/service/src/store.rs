use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use advisor_core::recommend::FeedbackSession;

type Shared = Arc<tokio::sync::Mutex<FeedbackSession>>;

struct Slot {
    session: Shared,
    last_access: Instant,
}

/// Live feedback sessions keyed by id, dropped after an idle TTL.
pub struct SessionStore {
    ttl: Duration,
    slots: Mutex<HashMap<String, Slot>>,
}

/// 128 random bits as 32 hex digits.
pub fn new_session_id() -> String {
    format!("{:032x}", rand::random::<u128>())
}

impl SessionStore {
    pub fn new(ttl: Duration) -> Self {
        Self { ttl, slots: Mutex::new(HashMap::new()) }
    }

    pub fn ttl(&self) -> Duration {
        self.ttl
    }

    pub fn insert(&self, session: FeedbackSession) -> Shared {
        let now = Instant::now();
        let mut slots = self.slots.lock().expect("session map poisoned");
        slots.retain(|_, s| now.duration_since(s.last_access) <= self.ttl);
        let id = session.id.clone();
        let shared = Arc::new(tokio::sync::Mutex::new(session));
        slots.insert(id, Slot { session: shared.clone(), last_access: now });
        shared
    }

    /// Looks up a session and refreshes its idle timer. Expired sessions are
    /// removed and reported as missing.
    pub fn get(&self, id: &str) -> Option<Shared> {
        let now = Instant::now();
        let mut slots = self.slots.lock().expect("session map poisoned");
        let slot = slots.get_mut(id)?;
        if now.duration_since(slot.last_access) > self.ttl {
            slots.remove(id);
            return None;
        }
        slot.last_access = now;
        Some(slot.session.clone())
    }

    /// Number of sessions, including expired ones not yet purged.
    pub fn len(&self) -> usize {
        self.slots.lock().expect("session map poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
