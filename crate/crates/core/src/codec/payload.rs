//! Compressed payload: `"PLRC"`, version, `n`, `|F|` (u32 LE), the metric
//! channel descriptor, then the info bits packed LSB-first.
//!
//! Descriptor: kind byte (0 BSC, 1 BEC, 2 BSEC, 3 generic) followed by its
//! parameters as f64 LE; a generic channel stores `m` as u32 LE and then
//! `W(·|0)` and `W(·|1)`.

use super::CodeSpec;
use crate::bits::BitVector;
use crate::channel::{BinaryInputChannel, ChannelKind};
use crate::{Error, Result};

const MAGIC: &[u8; 4] = b"PLRC";
const VERSION: u8 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct Payload {
    pub n: u8,
    pub num_frozen: u32,
    pub channel: BinaryInputChannel,
    pub info: BitVector,
}

pub fn encode_payload(spec: &CodeSpec, info: &BitVector) -> Result<Vec<u8>> {
    if info.len() != spec.info_len() {
        return Err(Error::LengthMismatch {
            expected: spec.info_len(),
            actual: info.len(),
        });
    }
    let mut out = Vec::with_capacity(32 + info.len() / 8);
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.push(spec.transform().exponent() as u8);
    out.extend_from_slice(&(spec.frozen().len() as u32).to_le_bytes());
    let ch = spec.channel();
    let put = |out: &mut Vec<u8>, v: f64| out.extend_from_slice(&v.to_le_bytes());
    match ch.kind() {
        ChannelKind::Bsc { d } => {
            out.push(0);
            put(&mut out, d);
        }
        ChannelKind::Bec { epsilon } => {
            out.push(1);
            put(&mut out, epsilon);
        }
        ChannelKind::Bsec { p, d } => {
            out.push(2);
            put(&mut out, p);
            put(&mut out, d);
        }
        ChannelKind::Generic => {
            out.push(3);
            out.extend_from_slice(&(ch.outputs() as u32).to_le_bytes());
            for &v in ch.p0().iter().chain(ch.p1()) {
                put(&mut out, v);
            }
        }
    }
    let mut bytes = vec![0u8; info.len().div_ceil(8)];
    for (i, b) in info.iter().enumerate() {
        bytes[i / 8] |= b << (i % 8);
    }
    out.extend_from_slice(&bytes);
    Ok(out)
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, k: usize) -> Result<&'a [u8]> {
        if self.buf.len() - self.pos < k {
            return Err(Error::Payload("truncated".into()));
        }
        let s = &self.buf[self.pos..self.pos + k];
        self.pos += k;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

pub fn decode_payload(buf: &[u8]) -> Result<Payload> {
    let mut r = Reader { buf, pos: 0 };
    if r.take(4)? != MAGIC {
        return Err(Error::Payload("bad magic".into()));
    }
    let version = r.u8()?;
    if version != VERSION {
        return Err(Error::Payload(format!("unsupported version {version}")));
    }
    let n = r.u8()?;
    if n as u32 > crate::MAX_EXPONENT {
        return Err(Error::ExponentTooLarge(n as u32));
    }
    let num_frozen = r.u32()?;
    let len = 1usize << n;
    if num_frozen as usize > len {
        return Err(Error::Payload(format!("{num_frozen} frozen indices exceed blocklength {len}")));
    }
    let channel = match r.u8()? {
        0 => BinaryInputChannel::bsc(r.f64()?)?,
        1 => BinaryInputChannel::bec(r.f64()?)?,
        2 => {
            let p = r.f64()?;
            BinaryInputChannel::bsec(p, r.f64()?)?
        }
        3 => {
            let m = r.u32()? as usize;
            if m > buf.len() {
                return Err(Error::Payload("truncated".into()));
            }
            let p0 = (0..m).map(|_| r.f64()).collect::<Result<Vec<_>>>()?;
            let p1 = (0..m).map(|_| r.f64()).collect::<Result<Vec<_>>>()?;
            BinaryInputChannel::generic(p0, p1)?
        }
        k => return Err(Error::Payload(format!("unknown channel kind {k}"))),
    };
    let k = len - num_frozen as usize;
    let bytes = r.take(k.div_ceil(8))?;
    if r.pos != buf.len() {
        return Err(Error::Payload("trailing bytes".into()));
    }
    let info = BitVector::from_bits(&(0..k).map(|i| (bytes[i / 8] >> (i % 8)) & 1).collect::<Vec<_>>());
    Ok(Payload {
        n,
        num_frozen,
        channel,
        info,
    })
}
