//! Three-valued verdicts with diagnostic payloads.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::interval::RatInterval;
use crate::rat::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Proved,
    Undecided,
    Refuted,
}

impl Status {
    /// Aggregation: REFUTED dominates UNDECIDED, which dominates PROVED.
    pub fn combine(self, other: Status) -> Status {
        core::cmp::max(self, other)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Proved => "PROVED",
            Status::Undecided => "UNDECIDED",
            Status::Refuted => "REFUTED",
        }
    }

    pub fn is_decided(self) -> bool {
        self != Status::Undecided
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Status {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// Ordered key/value diagnostic record.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Record(Vec<(String, String)>);

impl Record {
    pub fn new() -> Self {
        Record(Vec::new())
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.0.push((key.into(), value.to_string()));
        self
    }

    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.0.push((key.into(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}={}", k, v)?;
        }
        Ok(())
    }
}

impl Serialize for Record {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub value: Option<Rat>,
    pub enclosure: Option<RatInterval>,
    pub witness: Option<Record>,
    pub certificate: Option<Record>,
    pub note: String,
}

impl Verdict {
    fn bare(status: Status, note: &str) -> Self {
        Verdict {
            status,
            value: None,
            enclosure: None,
            witness: None,
            certificate: None,
            note: note.into(),
        }
    }

    pub fn proved(note: &str) -> Self {
        Self::bare(Status::Proved, note)
    }

    pub fn refuted(witness: Record, note: &str) -> Self {
        let mut v = Self::bare(Status::Refuted, note);
        v.witness = Some(witness);
        v
    }

    pub fn undecided(note: &str) -> Self {
        Self::bare(Status::Undecided, note)
    }

    pub fn with_value(mut self, value: Rat) -> Self {
        self.value = Some(value);
        self
    }

    pub fn with_enclosure(mut self, e: RatInterval) -> Self {
        self.enclosure = Some(e);
        self
    }

    pub fn with_witness(mut self, w: Record) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn with_certificate(mut self, c: Record) -> Self {
        self.certificate = Some(c);
        self
    }

    pub fn with_note(mut self, note: &str) -> Self {
        self.note = note.into();
        self
    }

    pub fn is_proved(&self) -> bool {
        self.status == Status::Proved
    }

    pub fn is_refuted(&self) -> bool {
        self.status == Status::Refuted
    }

    pub fn is_undecided(&self) -> bool {
        self.status == Status::Undecided
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.status)?;
        if let Some(v) = &self.value {
            write!(f, " value={}", v)?;
        }
        if let Some(e) = &self.enclosure {
            write!(f, " enclosure={}", e)?;
        }
        if let Some(w) = &self.witness {
            write!(f, " witness{{{}}}", w)?;
        }
        if let Some(c) = &self.certificate {
            write!(f, " certificate{{{}}}", c)?;
        }
        if !self.note.is_empty() {
            write!(f, " ({})", self.note)?;
        }
        Ok(())
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Verdict", 6)?;
        st.serialize_field("status", &self.status)?;
        match &self.value {
            Some(v) => st.serialize_field("value", &v.to_string())?,
            None => st.skip_field("value")?,
        }
        match &self.enclosure {
            Some(e) => st.serialize_field("enclosure", e)?,
            None => st.skip_field("enclosure")?,
        }
        match &self.certificate {
            Some(c) => st.serialize_field("certificate", c)?,
            None => st.skip_field("certificate")?,
        }
        match &self.witness {
            Some(w) => st.serialize_field("witness", w)?,
            None => st.skip_field("witness")?,
        }
        st.serialize_field("note", &self.note)?;
        st.end()
    }
}

/// Folds verdict statuses; an empty fold is PROVED.
pub fn aggregate<I: IntoIterator<Item = Status>>(it: I) -> Status {
    it.into_iter().fold(Status::Proved, Status::combine)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregation_order() {
        use Status::*;
        assert_eq!(aggregate([Proved, Undecided, Proved]), Undecided);
        assert_eq!(aggregate([Undecided, Refuted]), Refuted);
        assert_eq!(aggregate([]), Proved);
        for a in [Proved, Undecided, Refuted] {
            for b in [Proved, Undecided, Refuted] {
                assert_eq!(a.combine(b), b.combine(a));
            }
        }
    }

    #[test]
    fn refuted_carries_witness() {
        let v = Verdict::refuted(Record::new().with("x", "1/2"), "bad");
        assert!(v.witness.is_some());
        assert_eq!(v.witness.unwrap().get("x"), Some("1/2"));
    }
}
