//! JSON instance and result files.
//!
//! Coordinates may be integers or decimals. All coordinates of a file are
//! scaled by a common power of ten so the solvers work on exact integers;
//! costs are scaled back when written.

use std::fmt;

use linematch_core::{Cost, Instance, InstanceError, Mode, Normalized, RawInstance, Solution};
use serde::{Deserialize, Serialize};
use serde_json::{Number, Value};
use sha2::{Digest, Sha256};

/// Largest number of fractional digits accepted in a coordinate.
pub const MAX_SCALE: u32 = 12;

#[derive(Debug)]
pub enum FormatError {
    Json(serde_json::Error),
    Number { field: &'static str, text: String },
    Instance(InstanceError),
    Cost(String),
    PairOutOfRange { pair: (usize, usize) },
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::Json(e) => write!(f, "malformed JSON: {e}"),
            FormatError::Number { field, text } => {
                write!(f, "`{field}` holds {text}, which is not a representable coordinate")
            }
            FormatError::Instance(e) => write!(f, "invalid instance: {e}"),
            FormatError::Cost(text) => write!(f, "cost {text} is not a decimal number"),
            FormatError::PairOutOfRange { pair } => {
                write!(f, "pair [{}, {}] refers to a point that does not exist", pair.0, pair.1)
            }
        }
    }
}

impl std::error::Error for FormatError {}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Json(e)
    }
}

/// The on-disk instance layout.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub s: Vec<Number>,
    pub t: Vec<Number>,
    pub alpha: Vec<i64>,
    pub beta: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap_s: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap_t: Option<Vec<i64>>,
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    /// An integer-coordinate file for `inst`.
    pub fn from_instance(inst: &Instance) -> Self {
        let wide = |v: &[u32]| v.iter().map(|&d| d as i64).collect::<Vec<_>>();
        InstanceFile {
            s: inst.s_coords().iter().map(|&x| Number::from(x)).collect(),
            t: inst.t_coords().iter().map(|&x| Number::from(x)).collect(),
            alpha: wide(inst.alpha()),
            beta: wide(inst.beta()),
            cap_s: inst.cap_s().map(wide),
            cap_t: inst.cap_t().map(wide),
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("instance files always serialize");
        out.push('\n');
        out
    }

    pub fn has_caps(&self) -> bool {
        self.cap_s.is_some() || self.cap_t.is_some()
    }

    /// Scales the coordinates to integers and normalizes. Demands larger than
    /// the opposite side are kept so that solvers can report them.
    pub fn load(&self) -> Result<Loaded, FormatError> {
        let s = parse_coords("s", &self.s)?;
        let t = parse_coords("t", &self.t)?;
        let scale = s.iter().chain(&t).map(|d| d.scale).max().unwrap_or(0);
        let s = rescale("s", &s, scale)?;
        let t = rescale("t", &t, scale)?;
        let mut raw = RawInstance::demands(s, self.alpha.clone(), t, self.beta.clone());
        if self.has_caps() {
            let (cs, ct) = (self.cap_s.clone(), self.cap_t.clone());
            raw = raw.with_caps(cs.unwrap_or_default(), ct.unwrap_or_default());
        }
        let digest = digest(&raw, scale);
        let normalized = raw.normalize_structure().map_err(FormatError::Instance)?;
        Ok(Loaded { normalized, scale, digest })
    }
}

/// A parsed, normalized instance file.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub normalized: Normalized,
    /// Coordinates were multiplied by `10^scale`.
    pub scale: u32,
    pub digest: String,
}

impl Loaded {
    pub fn instance(&self) -> &Instance {
        &self.normalized.instance
    }

    pub fn default_mode(&self) -> Mode {
        if self.instance().has_caps() {
            Mode::DemandAndCapacity
        } else {
            Mode::DemandOnly
        }
    }

    /// Pairs of `sol` in file order, sorted.
    pub fn file_pairs(&self, sol: &Solution) -> Vec<[usize; 2]> {
        let mut pairs: Vec<[usize; 2]> = sol
            .matching
            .pairs()
            .iter()
            .map(|&p| {
                let (i, j) = self.normalized.to_original(p);
                [i, j]
            })
            .collect();
        pairs.sort_unstable();
        pairs
    }

    /// Maps file-order pairs to sorted ranks.
    pub fn rank_pairs(&self, pairs: &[[usize; 2]]) -> Result<Vec<(usize, usize)>, FormatError> {
        let n = &self.normalized;
        let mut s_rank = vec![0; n.s_order.len()];
        let mut t_rank = vec![0; n.t_order.len()];
        for (r, &o) in n.s_order.iter().enumerate() {
            s_rank[o] = r;
        }
        for (r, &o) in n.t_order.iter().enumerate() {
            t_rank[o] = r;
        }
        pairs
            .iter()
            .map(|&[i, j]| match (s_rank.get(i), t_rank.get(j)) {
                (Some(&a), Some(&b)) => Ok((a, b)),
                _ => Err(FormatError::PairOutOfRange { pair: (i, j) }),
            })
            .collect()
    }

    pub fn cost_value(&self, cost: Cost) -> Value {
        cost_value(cost, self.scale)
    }
}

/// The on-disk result layout.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub cost: Value,
    pub pairs: Vec<[usize; 2]>,
    pub mode: String,
    pub solver: String,
    pub instance_digest: String,
}

impl ResultFile {
    pub fn new(loaded: &Loaded, sol: &Solution, solver: &str) -> Self {
        ResultFile {
            cost: loaded.cost_value(sol.cost()),
            pairs: loaded.file_pairs(sol),
            mode: sol.mode.name().to_owned(),
            solver: solver.to_owned(),
            instance_digest: loaded.digest.clone(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Pretty JSON with one pair per line.
    pub fn to_json(&self) -> String {
        fn j<T: Serialize>(v: &T) -> String {
            serde_json::to_string(v).expect("plain values always serialize")
        }
        let pairs: Vec<String> = self.pairs.iter().map(|p| format!("    [{}, {}]", p[0], p[1])).collect();
        let pairs = if pairs.is_empty() { "[]".to_owned() } else { format!("[\n{}\n  ]", pairs.join(",\n")) };
        format!(
            "{{\n  \"cost\": {},\n  \"pairs\": {pairs},\n  \"mode\": {},\n  \"solver\": {},\n  \"instance_digest\": {}\n}}\n",
            j(&self.cost),
            j(&self.mode),
            j(&self.solver),
            j(&self.instance_digest),
        )
    }

    /// The recorded cost as an integer at `scale`, or `None` when it needs
    /// more fractional digits than `scale` allows.
    pub fn scaled_cost(&self, scale: u32) -> Result<Option<Cost>, FormatError> {
        let text = match &self.cost {
            Value::Number(n) => n.to_string(),
            Value::String(s) => s.clone(),
            other => return Err(FormatError::Cost(other.to_string())),
        };
        let d = Decimal::parse(&text).ok_or_else(|| FormatError::Cost(text.clone()))?;
        if d.scale > scale {
            return Ok(None);
        }
        Ok(10i128.checked_pow(scale - d.scale).and_then(|f| d.mantissa.checked_mul(f)))
    }
}

/// An exact decimal `mantissa * 10^-scale`, with no trailing fractional zeros.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Decimal {
    pub mantissa: i128,
    pub scale: u32,
}

impl Decimal {
    /// Parses `-12`, `3.250`, `1e3` or `2.5E-1`.
    pub fn parse(text: &str) -> Option<Decimal> {
        let (body, exp) = match text.find(['e', 'E']) {
            Some(k) => (&text[..k], text[k + 1..].parse::<i32>().ok()?),
            None => (text, 0),
        };
        let (neg, body) = match body.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, body),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        if int.is_empty() || !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
            return None;
        }
        let frac = frac.trim_end_matches('0');
        let mut mantissa: i128 = 0;
        for b in int.bytes().chain(frac.bytes()) {
            mantissa = mantissa.checked_mul(10)?.checked_add((b - b'0') as i128)?;
        }
        let mut scale = frac.len() as i64 - exp as i64;
        while scale < 0 {
            mantissa = mantissa.checked_mul(10)?;
            scale += 1;
        }
        while scale > 0 && mantissa % 10 == 0 {
            mantissa /= 10;
            scale -= 1;
        }
        let scale = u32::try_from(scale).ok()?;
        Some(Decimal { mantissa: if neg { -mantissa } else { mantissa }, scale })
    }
}

fn parse_coords(field: &'static str, v: &[Number]) -> Result<Vec<Decimal>, FormatError> {
    v.iter()
        .map(|n| {
            let text = n.to_string();
            match Decimal::parse(&text) {
                Some(d) if d.scale <= MAX_SCALE => Ok(d),
                _ => Err(FormatError::Number { field, text }),
            }
        })
        .collect()
}

fn rescale(field: &'static str, v: &[Decimal], scale: u32) -> Result<Vec<i64>, FormatError> {
    v.iter()
        .map(|d| {
            10i128
                .checked_pow(scale - d.scale)
                .and_then(|f| d.mantissa.checked_mul(f))
                .and_then(|x| i64::try_from(x).ok())
                .ok_or_else(|| FormatError::Number { field, text: format!("{}e-{}", d.mantissa, d.scale) })
        })
        .collect()
}

/// A cost at `scale` as a JSON integer, or as a decimal string when the
/// coordinates were fractional.
pub fn cost_value(cost: Cost, scale: u32) -> Value {
    if scale == 0 {
        return Value::Number(cost.to_string().parse().expect("integers are valid JSON numbers"));
    }
    let digits = cost.unsigned_abs().to_string();
    let width = scale as usize + 1;
    let digits = format!("{digits:0>width$}");
    let (int, frac) = digits.split_at(digits.len() - scale as usize);
    let sign = if cost < 0 { "-" } else { "" };
    Value::String(format!("{sign}{int}.{frac}"))
}

/// SHA-256 over a canonical rendering of the scaled instance in file order.
pub fn digest(raw: &RawInstance, scale: u32) -> String {
    let canonical = serde_json::json!({
        "scale": scale,
        "s": raw.s,
        "t": raw.t,
        "alpha": raw.alpha,
        "beta": raw.beta,
        "cap_s": raw.cap_s,
        "cap_t": raw.cap_t,
    });
    let bytes = serde_json::to_vec(&canonical).expect("canonical form always serializes");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}
