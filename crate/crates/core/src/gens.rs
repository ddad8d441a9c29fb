//! Generator labels: tagged, degree-carrying, well-ordered identifiers for
//! the homogeneous bases of free modules and algebras.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// The species of a generator. Pair generators carry their construction
/// stage, antifield generators their level (1 for equation antifields, 2 for
/// Noether antifields).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum GenKind {
    DiscBottom,
    DiscTop,
    Sphere,
    CycleGen,
    PairGen(u32),
    Antifield(u8),
}

impl GenKind {
    /// Rank inside a fixed degree: bottoms before tops before cycle
    /// generators before stage-ordered pair generators.
    pub fn rank(&self) -> (u8, u32) {
        match self {
            GenKind::DiscBottom => (0, 0),
            GenKind::DiscTop => (1, 0),
            GenKind::Sphere => (2, 0),
            GenKind::CycleGen => (3, 0),
            GenKind::PairGen(k) => (4, *k),
            GenKind::Antifield(l) => (5, *l as u32),
        }
    }

    fn tag(&self) -> u8 {
        self.rank().0
    }
}

/// Content-addressed payload of a generator: the element (or pair of
/// elements) of the target object that indexed it. Identity is decided by
/// the canonical byte serialization of the indexing data.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Payload {
    None,
    Name(Arc<str>),
    Elem(Arc<PayloadElem>),
    Pair(Arc<PayloadElem>, Arc<PayloadElem>),
}

/// Frozen normal form of an indexing element.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PayloadElem {
    pub bytes: Vec<u8>,
    pub display: String,
}

impl PayloadElem {
    pub fn new(bytes: Vec<u8>, display: String) -> Arc<Self> {
        Arc::new(PayloadElem { bytes, display })
    }
}

impl Payload {
    fn order_key(&self) -> (u8, Vec<u8>) {
        match self {
            Payload::None => (0, Vec::new()),
            Payload::Name(s) => (1, s.as_bytes().to_vec()),
            Payload::Elem(e) => (2, e.bytes.clone()),
            Payload::Pair(a, b) => {
                let mut v = Vec::with_capacity(a.bytes.len() + b.bytes.len() + 4);
                v.extend_from_slice(&(a.bytes.len() as u32).to_le_bytes());
                v.extend_from_slice(&a.bytes);
                v.extend_from_slice(&b.bytes);
                (3, v)
            }
        }
    }
}

/// A generator label. `(degree, kind rank, ordinal)` is a total order with no
/// infinite descending chains; two labels are equal iff all fields are equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GenId {
    pub kind: GenKind,
    pub degree: u32,
    pub ordinal: u32,
    pub payload: Payload,
}

impl GenId {
    pub fn new(kind: GenKind, degree: u32, ordinal: u32, payload: Payload) -> Self {
        GenId {
            kind,
            degree,
            ordinal,
            payload,
        }
    }

    pub fn named(kind: GenKind, degree: u32, ordinal: u32, name: &str) -> Self {
        GenId::new(kind, degree, ordinal, Payload::Name(Arc::from(name)))
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }

    pub fn write_canonical(&self, out: &mut Vec<u8>) {
        out.push(self.kind.tag());
        out.extend_from_slice(&self.kind.rank().1.to_le_bytes());
        out.extend_from_slice(&self.degree.to_le_bytes());
        out.extend_from_slice(&self.ordinal.to_le_bytes());
        let (t, bytes) = self.payload.order_key();
        out.push(t);
        out.extend_from_slice(&(bytes.len() as u32).to_le_bytes());
        out.extend_from_slice(&bytes);
    }
}

impl Ord for GenId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.kind.rank().cmp(&other.kind.rank()))
            .then_with(|| self.ordinal.cmp(&other.ordinal))
            .then_with(|| self.payload.order_key().cmp(&other.payload.order_key()))
    }
}

impl PartialOrd for GenId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx = match &self.payload {
            Payload::None => format!("#{}", self.ordinal),
            Payload::Name(s) => s.to_string(),
            Payload::Elem(e) => format!("[{}]", e.display),
            Payload::Pair(a, b) => format!("[{}; {}]", a.display, b.display),
        };
        match self.kind {
            GenKind::DiscBottom => write!(f, "sI{}", idx),
            GenKind::DiscTop => write!(f, "I{}", idx),
            GenKind::Sphere => write!(f, "{}", idx),
            GenKind::CycleGen => write!(f, "Ic{}", idx),
            GenKind::PairGen(k) => write!(f, "I{}{}", k, idx),
            GenKind::Antifield(_) => write!(f, "{}", idx),
        }
    }
}

/// Sorts generators by `(degree, kind rank, ordinal)`. Deterministic,
/// idempotent, and insertion-stable: a new generator of an existing degree
/// and kind receives a larger ordinal and sorts after the old ones.
pub fn canonical_well_order<I: IntoIterator<Item = GenId>>(gens: I) -> Vec<GenId> {
    let mut v: Vec<GenId> = gens.into_iter().collect();
    v.sort();
    v
}
