use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Nesting depth used when an instance file has no `MAXDEPTH` record.
pub const DEFAULT_MAX_DEPTH: usize = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InstanceError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: duplicate id `{id}`")]
    DuplicateId { line: usize, id: String },
    #[error("line {line}: unknown {expected} `{id}`")]
    UnknownReference {
        line: usize,
        id: String,
        expected: &'static str,
    },
    #[error("line {line}: failure probability {value} outside [0, 1]")]
    ProbabilityOutOfRange { line: usize, value: f64 },
    #[error("line {line}: link cost {value} must be finite and non-negative")]
    InvalidCost { line: usize, value: f64 },
    #[error("line {line}: mobile router `{id}` cannot link to itself")]
    SelfLink { line: usize, id: String },
    #[error("line {line}: duplicate link `{child}` -> `{parent}`")]
    DuplicateLink {
        line: usize,
        child: String,
        parent: String,
    },
    #[error("mobile router `{0}` has no candidate links")]
    NoCandidateLinks(String),
    #[error("instance declares no mobile routers")]
    NoMobileRouters,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaseStation {
    pub id: String,
    pub failure_probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccessRouter {
    pub id: String,
    /// Index into [`NetworkInstance::base_stations`].
    pub base_station: usize,
}

/// Parent end of a candidate link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Node {
    Access(usize),
    Mobile(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Link {
    /// Index into [`NetworkInstance::mobile_routers`].
    pub child: usize,
    pub parent: Node,
    pub cost: f64,
    pub failure_probability: f64,
}

/// A nested mobile network: base stations serve access routers, and every
/// mobile router attaches through one candidate link either to an access
/// router or to another mobile router.
///
/// Mobile routers are stored sorted by id. Links keep file order, and
/// `candidates[m]` lists the links whose child is `m` in that order.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkInstance {
    pub base_stations: Vec<BaseStation>,
    pub access_routers: Vec<AccessRouter>,
    pub mobile_routers: Vec<String>,
    pub links: Vec<Link>,
    pub candidates: Vec<Vec<usize>>,
    pub max_depth: usize,
}

impl NetworkInstance {
    pub fn node_id(&self, node: Node) -> &str {
        match node {
            Node::Access(i) => &self.access_routers[i].id,
            Node::Mobile(i) => &self.mobile_routers[i],
        }
    }

    pub fn mr_count(&self) -> usize {
        self.mobile_routers.len()
    }

    /// Number of raw assignments (one candidate per MR), valid or not.
    /// Saturates at `u128::MAX`.
    pub fn search_space_size(&self) -> u128 {
        self.candidates
            .iter()
            .fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128))
    }

    /// Parses the line-based instance format:
    ///
    /// ```text
    /// BS   <id> <fail_prob>
    /// AR   <id> <bs_id>
    /// MR   <id>
    /// LINK <child_id> <parent_id> <cost> <fail_prob>
    /// MAXDEPTH <k>
    /// ```
    ///
    /// `#` starts a comment; records may appear in any order.
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        let mut raw = RawInstance::default();
        for (idx, line) in text.lines().enumerate() {
            raw.record(idx + 1, line)?;
        }
        raw.resolve()
    }
}

#[derive(Default)]
struct RawInstance<'a> {
    ids: HashMap<&'a str, usize>,
    base_stations: Vec<(usize, &'a str, f64)>,
    access_routers: Vec<(usize, &'a str, &'a str)>,
    mobile_routers: Vec<&'a str>,
    links: Vec<(usize, &'a str, &'a str, f64, f64)>,
    max_depth: Option<usize>,
}

fn parse_error(line: usize, message: impl fmt::Display) -> InstanceError {
    InstanceError::Parse {
        line,
        message: message.to_string(),
    }
}

fn parse_f64(line: usize, field: &str, what: &str) -> Result<f64, InstanceError> {
    field
        .parse::<f64>()
        .map_err(|_| parse_error(line, format!("{what} `{field}` is not a number")))
}

fn parse_probability(line: usize, field: &str) -> Result<f64, InstanceError> {
    let value = parse_f64(line, field, "failure probability")?;
    if !(0.0..=1.0).contains(&value) {
        return Err(InstanceError::ProbabilityOutOfRange { line, value });
    }
    Ok(value)
}

fn check_id(line: usize, id: &str) -> Result<(), InstanceError> {
    if id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
        Ok(())
    } else {
        Err(parse_error(line, format!("id `{id}` is not alphanumeric")))
    }
}

impl<'a> RawInstance<'a> {
    fn declare(&mut self, line: usize, id: &'a str) -> Result<(), InstanceError> {
        check_id(line, id)?;
        if self.ids.insert(id, line).is_some() {
            return Err(InstanceError::DuplicateId {
                line,
                id: id.to_string(),
            });
        }
        Ok(())
    }

    fn record(&mut self, line: usize, text: &'a str) -> Result<(), InstanceError> {
        let body = text.split('#').next().unwrap_or("");
        let fields: Vec<&str> = body.split_whitespace().collect();
        let Some((&keyword, args)) = fields.split_first() else {
            return Ok(());
        };
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(parse_error(
                    line,
                    format!("{keyword} expects {n} fields, found {}", args.len()),
                ))
            }
        };
        match keyword {
            "BS" => {
                arity(2)?;
                self.declare(line, args[0])?;
                let p = parse_probability(line, args[1])?;
                self.base_stations.push((line, args[0], p));
            }
            "AR" => {
                arity(2)?;
                self.declare(line, args[0])?;
                self.access_routers.push((line, args[0], args[1]));
            }
            "MR" => {
                arity(1)?;
                self.declare(line, args[0])?;
                self.mobile_routers.push(args[0]);
            }
            "LINK" => {
                arity(4)?;
                let cost = parse_f64(line, args[2], "cost")?;
                if !cost.is_finite() || cost < 0.0 {
                    return Err(InstanceError::InvalidCost { line, value: cost });
                }
                let p = parse_probability(line, args[3])?;
                self.links.push((line, args[0], args[1], cost, p));
            }
            "MAXDEPTH" => {
                arity(1)?;
                if self.max_depth.is_some() {
                    return Err(parse_error(line, "MAXDEPTH given twice"));
                }
                let k: usize = args[0]
                    .parse()
                    .map_err(|_| parse_error(line, format!("MAXDEPTH `{}` is not a positive integer", args[0])))?;
                if k == 0 {
                    return Err(parse_error(line, "MAXDEPTH must be positive"));
                }
                self.max_depth = Some(k);
            }
            other => return Err(parse_error(line, format!("unknown record `{other}`"))),
        }
        Ok(())
    }

    fn resolve(self) -> Result<NetworkInstance, InstanceError> {
        let bs_index: HashMap<&str, usize> = self
            .base_stations
            .iter()
            .enumerate()
            .map(|(i, &(_, id, _))| (id, i))
            .collect();
        let base_stations = self
            .base_stations
            .iter()
            .map(|&(_, id, p)| BaseStation {
                id: id.to_string(),
                failure_probability: p,
            })
            .collect();

        let mut access_routers = Vec::with_capacity(self.access_routers.len());
        for &(line, id, bs) in &self.access_routers {
            let base_station = *bs_index.get(bs).ok_or(InstanceError::UnknownReference {
                line,
                id: bs.to_string(),
                expected: "base station",
            })?;
            access_routers.push(AccessRouter {
                id: id.to_string(),
                base_station,
            });
        }
        let ar_index: HashMap<&str, usize> = self
            .access_routers
            .iter()
            .enumerate()
            .map(|(i, &(_, id, _))| (id, i))
            .collect();

        if self.mobile_routers.is_empty() {
            return Err(InstanceError::NoMobileRouters);
        }
        let mut mobile_routers: Vec<&str> = self.mobile_routers.clone();
        mobile_routers.sort_unstable();
        let mr_index: HashMap<&str, usize> =
            mobile_routers.iter().enumerate().map(|(i, &id)| (id, i)).collect();

        let mut links = Vec::with_capacity(self.links.len());
        let mut candidates = vec![Vec::new(); mobile_routers.len()];
        let mut seen = HashMap::new();
        for &(line, child_id, parent_id, cost, p) in &self.links {
            let child = *mr_index.get(child_id).ok_or(InstanceError::UnknownReference {
                line,
                id: child_id.to_string(),
                expected: "mobile router",
            })?;
            if child_id == parent_id {
                return Err(InstanceError::SelfLink {
                    line,
                    id: child_id.to_string(),
                });
            }
            let parent = if let Some(&i) = ar_index.get(parent_id) {
                Node::Access(i)
            } else if let Some(&i) = mr_index.get(parent_id) {
                Node::Mobile(i)
            } else {
                return Err(InstanceError::UnknownReference {
                    line,
                    id: parent_id.to_string(),
                    expected: "access or mobile router",
                });
            };
            if seen.insert((child, parent), line).is_some() {
                return Err(InstanceError::DuplicateLink {
                    line,
                    child: child_id.to_string(),
                    parent: parent_id.to_string(),
                });
            }
            candidates[child].push(links.len());
            links.push(Link {
                child,
                parent,
                cost,
                failure_probability: p,
            });
        }
        if let Some(m) = candidates.iter().position(Vec::is_empty) {
            return Err(InstanceError::NoCandidateLinks(mobile_routers[m].to_string()));
        }

        Ok(NetworkInstance {
            base_stations,
            access_routers,
            mobile_routers: mobile_routers.into_iter().map(str::to_string).collect(),
            links,
            candidates,
            max_depth: self.max_depth.unwrap_or(DEFAULT_MAX_DEPTH),
        })
    }
}
