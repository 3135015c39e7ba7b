//! Length-prefixed binary framing, version 1.
//!
//! Every frame is a big-endian `u32` payload length followed by the payload.
//! The payload starts with the protocol version and a message type byte; all
//! integers are big-endian. The byte layout is spelled out in
//! `docs/wire-format.md`.

use std::io::{self, Read, Write};

use thiserror::Error;

use crate::rb::Backend;
use crate::table::{ObjectKey, Operation, OutcomeKind, Request};

pub const VERSION: u8 = 1;
/// Largest accepted payload.
pub const MAX_FRAME: u32 = 1 << 20;

const T_REQUEST: u8 = 0x01;
const T_CHALLENGE: u8 = 0x02;
const T_SOLUTION: u8 = 0x03;
const T_RESULT: u8 = 0x04;
const T_ERROR: u8 = 0x05;

#[derive(Debug, Error)]
pub enum WireError {
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("frame of {0} bytes exceeds the limit")]
    FrameTooLarge(u32),
    #[error("unsupported protocol version {0}")]
    UnsupportedVersion(u8),
    #[error("unknown message type {0:#04x}")]
    UnknownType(u8),
    #[error("payload truncated")]
    Truncated,
    #[error("{0} trailing bytes after message")]
    Trailing(usize),
    #[error("invalid {0}")]
    BadField(&'static str),
}

impl WireError {
    /// Whether the connection itself failed (as opposed to a bad payload).
    pub fn is_io(&self) -> bool {
        matches!(self, WireError::Io(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChallengeMsg {
    pub challenge_id: u128,
    pub hardness: u64,
    pub nonce_salt: u128,
    pub backend: Backend,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionMsg {
    pub challenge_id: u128,
    pub proofs: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Inserted,
    Found,
    NotFound,
    Deleted,
    Rejected,
}

impl From<OutcomeKind> for Status {
    fn from(k: OutcomeKind) -> Self {
        match k {
            OutcomeKind::Inserted => Status::Inserted,
            OutcomeKind::Found => Status::Found,
            OutcomeKind::NotFound => Status::NotFound,
            OutcomeKind::Deleted => Status::Deleted,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResultMsg {
    pub status: Status,
    pub latency: u64,
    pub rb_charged: u64,
}

impl ResultMsg {
    pub const REJECTED: ResultMsg = ResultMsg {
        status: Status::Rejected,
        latency: 0,
        rb_charged: 0,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCode {
    Malformed = 1,
    UnexpectedMessage = 2,
    DuplicateKey = 3,
    IndexOutOfRange = 4,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorMsg {
    pub code: ErrorCode,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Message {
    Request(Request),
    Challenge(ChallengeMsg),
    Solution(SolutionMsg),
    Result(ResultMsg),
    Error(ErrorMsg),
}

fn op_code(op: Operation) -> u8 {
    match op {
        Operation::Insert => 1,
        Operation::Query => 2,
        Operation::Delete => 3,
    }
}

fn status_code(s: Status) -> u8 {
    match s {
        Status::Inserted => 1,
        Status::Found => 2,
        Status::NotFound => 3,
        Status::Deleted => 4,
        Status::Rejected => 5,
    }
}

/// Serialises the payload (without the length prefix).
pub fn encode(msg: &Message) -> Vec<u8> {
    let mut b = vec![VERSION];
    match msg {
        Message::Request(r) => {
            b.push(T_REQUEST);
            b.push(op_code(r.op));
            match r.declared_index {
                Some(i) => {
                    b.push(1);
                    b.extend_from_slice(&(i as u64).to_be_bytes());
                }
                None => b.push(0),
            }
            let key = r.key.as_bytes();
            b.extend_from_slice(&(key.len() as u32).to_be_bytes());
            b.extend_from_slice(key);
        }
        Message::Challenge(c) => {
            b.push(T_CHALLENGE);
            b.extend_from_slice(&c.challenge_id.to_be_bytes());
            b.extend_from_slice(&c.hardness.to_be_bytes());
            b.extend_from_slice(&c.nonce_salt.to_be_bytes());
            let (kind, threshold) = match c.backend {
                Backend::Ledger => (0u8, 0u64),
                Backend::Pow { unit_threshold } => (1, unit_threshold),
            };
            b.push(kind);
            b.extend_from_slice(&threshold.to_be_bytes());
        }
        Message::Solution(s) => {
            b.push(T_SOLUTION);
            b.extend_from_slice(&s.challenge_id.to_be_bytes());
            b.extend_from_slice(&(s.proofs.len() as u32).to_be_bytes());
            for p in &s.proofs {
                b.extend_from_slice(&p.to_be_bytes());
            }
        }
        Message::Result(r) => {
            b.push(T_RESULT);
            b.push(status_code(r.status));
            b.extend_from_slice(&r.latency.to_be_bytes());
            b.extend_from_slice(&r.rb_charged.to_be_bytes());
        }
        Message::Error(e) => {
            b.push(T_ERROR);
            b.push(e.code as u8);
            let text = e.message.as_bytes();
            let len = text.len().min(u16::MAX as usize);
            b.extend_from_slice(&(len as u16).to_be_bytes());
            b.extend_from_slice(&text[..len]);
        }
    }
    b
}

struct Cursor<'a>(&'a [u8]);

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], WireError> {
        if self.0.len() < n {
            return Err(WireError::Truncated);
        }
        let (head, rest) = self.0.split_at(n);
        self.0 = rest;
        Ok(head)
    }

    fn u8(&mut self) -> Result<u8, WireError> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16, WireError> {
        Ok(u16::from_be_bytes(self.take(2)?.try_into().expect("2 bytes")))
    }

    fn u32(&mut self) -> Result<u32, WireError> {
        Ok(u32::from_be_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn u64(&mut self) -> Result<u64, WireError> {
        Ok(u64::from_be_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn u128(&mut self) -> Result<u128, WireError> {
        Ok(u128::from_be_bytes(self.take(16)?.try_into().expect("16 bytes")))
    }
}

pub fn decode(payload: &[u8]) -> Result<Message, WireError> {
    let mut c = Cursor(payload);
    let version = c.u8()?;
    if version != VERSION {
        return Err(WireError::UnsupportedVersion(version));
    }
    let msg = match c.u8()? {
        T_REQUEST => {
            let op = match c.u8()? {
                1 => Operation::Insert,
                2 => Operation::Query,
                3 => Operation::Delete,
                _ => return Err(WireError::BadField("operation")),
            };
            let declared_index = match c.u8()? {
                0 => None,
                1 => Some(usize::try_from(c.u64()?).map_err(|_| WireError::BadField("declared index"))?),
                _ => return Err(WireError::BadField("declared-index flag")),
            };
            let len = c.u32()? as usize;
            let key = ObjectKey::new(c.take(len)?.to_vec());
            Message::Request(Request { op, key, declared_index })
        }
        T_CHALLENGE => {
            let challenge_id = c.u128()?;
            let hardness = c.u64()?;
            let nonce_salt = c.u128()?;
            let kind = c.u8()?;
            let threshold = c.u64()?;
            let backend = match kind {
                0 => Backend::Ledger,
                1 => Backend::Pow {
                    unit_threshold: threshold,
                },
                _ => return Err(WireError::BadField("backend")),
            };
            Message::Challenge(ChallengeMsg {
                challenge_id,
                hardness,
                nonce_salt,
                backend,
            })
        }
        T_SOLUTION => {
            let challenge_id = c.u128()?;
            let n = c.u32()? as usize;
            if n > c.0.len() / 8 {
                return Err(WireError::Truncated);
            }
            let proofs = (0..n).map(|_| c.u64()).collect::<Result<_, _>>()?;
            Message::Solution(SolutionMsg { challenge_id, proofs })
        }
        T_RESULT => {
            let status = match c.u8()? {
                1 => Status::Inserted,
                2 => Status::Found,
                3 => Status::NotFound,
                4 => Status::Deleted,
                5 => Status::Rejected,
                _ => return Err(WireError::BadField("status")),
            };
            Message::Result(ResultMsg {
                status,
                latency: c.u64()?,
                rb_charged: c.u64()?,
            })
        }
        T_ERROR => {
            let code = match c.u8()? {
                1 => ErrorCode::Malformed,
                2 => ErrorCode::UnexpectedMessage,
                3 => ErrorCode::DuplicateKey,
                4 => ErrorCode::IndexOutOfRange,
                _ => return Err(WireError::BadField("error code")),
            };
            let len = c.u16()? as usize;
            let message = String::from_utf8(c.take(len)?.to_vec()).map_err(|_| WireError::BadField("error text"))?;
            Message::Error(ErrorMsg { code, message })
        }
        t => return Err(WireError::UnknownType(t)),
    };
    if !c.0.is_empty() {
        return Err(WireError::Trailing(c.0.len()));
    }
    Ok(msg)
}

pub fn write_frame<W: Write>(w: &mut W, msg: &Message) -> Result<(), WireError> {
    let payload = encode(msg);
    w.write_all(&(payload.len() as u32).to_be_bytes())?;
    w.write_all(&payload)?;
    w.flush()?;
    Ok(())
}

/// Reads one frame's payload. I/O failures (including a clean close) are
/// reported as [`WireError::Io`].
pub fn read_payload<R: Read>(r: &mut R) -> Result<Vec<u8>, WireError> {
    let mut len = [0u8; 4];
    r.read_exact(&mut len)?;
    let len = u32::from_be_bytes(len);
    if len > MAX_FRAME {
        return Err(WireError::FrameTooLarge(len));
    }
    let mut payload = vec![0u8; len as usize];
    r.read_exact(&mut payload)?;
    Ok(payload)
}

pub fn read_frame<R: Read>(r: &mut R) -> Result<Message, WireError> {
    decode(&read_payload(r)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(m: Message) {
        let mut buf = Vec::new();
        write_frame(&mut buf, &m).unwrap();
        assert_eq!(u32::from_be_bytes(buf[..4].try_into().unwrap()) as usize, buf.len() - 4);
        assert_eq!(read_frame(&mut buf.as_slice()).unwrap(), m);
    }

    #[test]
    fn all_messages_roundtrip() {
        roundtrip(Message::Request(Request::new(Operation::Insert, ObjectKey::from("k"))));
        roundtrip(Message::Request(Request::at(Operation::Delete, ObjectKey::from("x"), 7)));
        roundtrip(Message::Challenge(ChallengeMsg {
            challenge_id: u128::MAX - 3,
            hardness: 9,
            nonce_salt: 42,
            backend: Backend::pow(),
        }));
        roundtrip(Message::Solution(SolutionMsg {
            challenge_id: 5,
            proofs: vec![1, 2, u64::MAX],
        }));
        roundtrip(Message::Result(ResultMsg {
            status: Status::Found,
            latency: 3,
            rb_charged: 3,
        }));
        roundtrip(Message::Error(ErrorMsg {
            code: ErrorCode::DuplicateKey,
            message: "dup".into(),
        }));
    }

    #[test]
    fn request_layout() {
        let bytes = encode(&Message::Request(Request::new(Operation::Query, ObjectKey::from("ab"))));
        assert_eq!(bytes, [1, 0x01, 2, 0, 0, 0, 0, 2, b'a', b'b']);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(decode(&[2, 1]), Err(WireError::UnsupportedVersion(2))));
        assert!(matches!(decode(&[1, 0x09]), Err(WireError::UnknownType(9))));
        assert!(matches!(decode(&[1, 0x04, 1, 0]), Err(WireError::Truncated)));
        let mut ok = encode(&Message::Result(ResultMsg::REJECTED));
        ok.push(0);
        assert!(matches!(decode(&ok), Err(WireError::Trailing(1))));
        let huge = (MAX_FRAME + 1).to_be_bytes();
        assert!(matches!(read_payload(&mut huge.as_slice()), Err(WireError::FrameTooLarge(_))));
        let lying = [1, 0x03, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0xff, 0xff, 0xff, 0xff];
        assert!(matches!(decode(&lying), Err(WireError::Truncated)));
    }
}
