use std::io::{Read, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const TENSOR_MAGIC: &[u8; 4] = b"TPSI";
pub const TENSOR_VERSION: u32 = 1;

/// A dense complex tensor over `(Z_N)^rank`, row-major in label order.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightTensor {
    n: u32,
    labels: Vec<String>,
    data: Vec<Complex64>,
}

impl WeightTensor {
    pub fn new<S: AsRef<str>>(n: u32, labels: &[S], data: Vec<Complex64>) -> Result<Self> {
        let labels: Vec<String> = labels.iter().map(|l| l.as_ref().to_string()).collect();
        for (k, l) in labels.iter().enumerate() {
            if labels[..k].contains(l) {
                return Err(Error::Plan(format!("duplicate axis label {l}")));
            }
        }
        let expected = (n as usize).pow(labels.len() as u32);
        if data.len() != expected {
            return Err(Error::Plan(format!(
                "data length {} does not match N^rank = {expected}",
                data.len()
            )));
        }
        Ok(Self { n, labels, data })
    }

    pub fn zeros<S: AsRef<str>>(n: u32, labels: &[S]) -> Self {
        let len = (n as usize).pow(labels.len() as u32);
        Self::new(n, labels, vec![Complex64::new(0.0, 0.0); len]).expect("labels must be unique")
    }

    pub fn from_fn<S: AsRef<str>>(n: u32, labels: &[S], mut f: impl FnMut(&[usize]) -> Complex64) -> Self {
        let mut t = Self::zeros(n, labels);
        let rank = t.rank();
        let mut idx = vec![0usize; rank];
        for slot in t.data.iter_mut() {
            *slot = f(&idx);
            increment(&mut idx, n as usize);
        }
        t
    }

    pub fn modulus(&self) -> u32 {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn axis(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank());
        let n = self.n as usize;
        idx.iter().fold(0, |acc, &i| acc * n + i)
    }

    #[inline]
    pub fn get(&self, idx: &[usize]) -> Complex64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: Complex64) {
        let k = self.offset(idx);
        self.data[k] = value;
    }

    /// All multi-indices in storage order.
    pub fn indices(&self) -> impl Iterator<Item = Vec<usize>> {
        let n = self.n as usize;
        let rank = self.rank();
        let total = self.data.len();
        (0..total).map(move |mut k| {
            let mut idx = vec![0; rank];
            for slot in idx.iter_mut().rev() {
                *slot = k % n;
                k /= n;
            }
            idx
        })
    }

    /// Renames the axes without moving data.
    pub fn relabel<S: AsRef<str>>(mut self, labels: &[S]) -> Result<Self> {
        if labels.len() != self.rank() {
            return Err(Error::Plan(format!(
                "relabel with {} labels on a rank-{} tensor",
                labels.len(),
                self.rank()
            )));
        }
        let t = Self::new(self.n, labels, std::mem::take(&mut self.data))?;
        Ok(t)
    }

    /// Reorders axes so that the labels read `order`.
    pub fn permuted<S: AsRef<str>>(&self, order: &[S]) -> Result<Self> {
        if order.len() != self.rank() {
            return Err(Error::Plan("permutation must name every axis".into()));
        }
        let src_axes: Vec<usize> = order
            .iter()
            .map(|l| {
                self.axis(l.as_ref())
                    .ok_or_else(|| Error::Plan(format!("unknown label {}", l.as_ref())))
            })
            .collect::<Result<_>>()?;
        let strides = self.strides();
        let src_strides: Vec<usize> = src_axes.iter().map(|&a| strides[a]).collect();
        let n = self.n as usize;
        let mut out = Vec::with_capacity(self.data.len());
        let mut idx = vec![0usize; self.rank()];
        for _ in 0..self.data.len() {
            let off: usize = idx.iter().zip(&src_strides).map(|(i, s)| i * s).sum();
            out.push(self.data[off]);
            increment(&mut idx, n);
        }
        Self::new(self.n, order, out)
    }

    pub(crate) fn strides(&self) -> Vec<usize> {
        let n = self.n as usize;
        let rank = self.rank();
        let mut s = vec![1usize; rank];
        for k in (0..rank.saturating_sub(1)).rev() {
            s[k] = s[k + 1] * n;
        }
        s
    }

    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Writes the binary dump: magic `TPSI`, version, N, rank, then each
    /// label as a u32 byte length and UTF-8 bytes, then `N^rank` entries as
    /// little-endian `(re, im)` f64 pairs. All integers are little-endian u32.
    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(TENSOR_MAGIC)?;
        w.write_all(&TENSOR_VERSION.to_le_bytes())?;
        w.write_all(&self.n.to_le_bytes())?;
        w.write_all(&(self.rank() as u32).to_le_bytes())?;
        for l in &self.labels {
            w.write_all(&(l.len() as u32).to_le_bytes())?;
            w.write_all(l.as_bytes())?;
        }
        for z in &self.data {
            w.write_all(&z.re.to_le_bytes())?;
            w.write_all(&z.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to a Vec cannot fail");
        buf
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let io = |e: std::io::Error| Error::Format(e.to_string());
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic).map_err(io)?;
        if &magic != TENSOR_MAGIC {
            return Err(Error::Format(format!("bad magic {magic:?}")));
        }
        let mut word = [0u8; 4];
        let mut read_u32 = |r: &mut R| -> Result<u32> {
            r.read_exact(&mut word).map_err(io)?;
            Ok(u32::from_le_bytes(word))
        };
        let version = read_u32(&mut r)?;
        if version != TENSOR_VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        let n = read_u32(&mut r)?;
        let rank = read_u32(&mut r)? as usize;
        if n < 1 || rank > 32 {
            return Err(Error::Format(format!("implausible header N={n} rank={rank}")));
        }
        let mut labels = Vec::with_capacity(rank);
        for _ in 0..rank {
            let len = read_u32(&mut r)? as usize;
            let mut bytes = vec![0u8; len];
            r.read_exact(&mut bytes).map_err(io)?;
            labels.push(String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))?);
        }
        let len = (n as usize)
            .checked_pow(rank as u32)
            .ok_or_else(|| Error::Format("tensor too large".into()))?;
        let mut data = Vec::with_capacity(len);
        let mut pair = [0u8; 16];
        for _ in 0..len {
            r.read_exact(&mut pair).map_err(io)?;
            let re = f64::from_le_bytes(pair[..8].try_into().unwrap());
            let im = f64::from_le_bytes(pair[8..].try_into().unwrap());
            data.push(Complex64::new(re, im));
        }
        Self::new(n, &labels, data).map_err(|e| Error::Format(e.to_string()))
    }
}

#[inline]
pub(crate) fn increment(idx: &mut [usize], n: usize) {
    for slot in idx.iter_mut().rev() {
        *slot += 1;
        if *slot < n {
            return;
        }
        *slot = 0;
    }
}
