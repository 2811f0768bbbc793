//! Base kernels on vertices and edges.
//!
//! A [`BaseKernel`] compares two labeled, attributed items. Any base kernel is a
//! [`VertexKernel`]; [`EdgeAdapter`] lifts one to an [`EdgeKernel`] over vertex
//! pairs, assigning common non-adjacency a fixed weight and mixed
//! adjacency zero. The latter property is what lets product-graph edges be
//! classified as c-edges or d-edges.
//!
//! [`AttrKernel`] is the configurable family used by the CLI. Its textual form:
//!
//! ```text
//! dirac
//! triangular:c=0.25
//! brownian:c=3
//! rbf:sigma=1.0
//! triangular:c=0.5:attr=1
//! product(dirac,brownian:c=3)
//! ```
//!
//! `attr=i` selects which attribute the scalar kernels compare (default 0).

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::AttributedGraph;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("parameter {name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("product kernel needs at least one factor")]
    EmptyProduct,
    #[error("invalid kernel spec `{spec}`: {reason}")]
    Spec { spec: String, reason: String },
}

/// A labeled, attributed item: a vertex, or an edge of a graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Item<'a> {
    pub label: &'a str,
    pub attrs: &'a [f64],
}

impl<'a> Item<'a> {
    pub fn new(label: &'a str, attrs: &'a [f64]) -> Self {
        Item { label, attrs }
    }
}

/// A kernel on labeled, attributed items.
///
/// Implementations must be symmetric and return finite nonnegative values. For
/// the resulting graph kernel to be positive semidefinite the base kernel must
/// be positive semidefinite as well; this is not checked.
pub trait BaseKernel: Send + Sync {
    fn eval(&self, a: Item<'_>, b: Item<'_>) -> f64;

    fn name(&self) -> String;
}

impl<K: BaseKernel + ?Sized> BaseKernel for &K {
    fn eval(&self, a: Item<'_>, b: Item<'_>) -> f64 {
        (**self).eval(a, b)
    }

    fn name(&self) -> String {
        (**self).name()
    }
}

/// Vertex kernel `κ_V` comparing a vertex of one graph with a vertex of another.
pub trait VertexKernel: Send + Sync {
    fn eval(&self, g1: &AttributedGraph, v1: usize, g2: &AttributedGraph, v2: usize) -> f64;

    fn name(&self) -> String;
}

impl<K: BaseKernel + ?Sized> VertexKernel for K {
    fn eval(&self, g1: &AttributedGraph, v1: usize, g2: &AttributedGraph, v2: usize) -> f64 {
        BaseKernel::eval(
            self,
            Item::new(g1.vertex_label(v1), g1.vertex_attrs(v1)),
            Item::new(g2.vertex_label(v2), g2.vertex_attrs(v2)),
        )
    }

    fn name(&self) -> String {
        BaseKernel::name(self)
    }
}

/// Edge kernel `κ_E` comparing a vertex pair of one graph with a vertex pair of
/// another.
///
/// Contract: symmetric, invariant under reversing both pairs at once, and zero
/// whenever exactly one of the two pairs is an edge.
pub trait EdgeKernel: Send + Sync {
    fn eval(&self, g1: &AttributedGraph, pair1: (usize, usize), g2: &AttributedGraph, pair2: (usize, usize)) -> f64;

    fn name(&self) -> String;
}

/// Lifts a kernel on edge labels/attributes to an [`EdgeKernel`].
///
/// Both pairs edges: the wrapped kernel on the two edges. Neither an edge:
/// `d_weight`. Otherwise 0.
#[derive(Debug, Clone)]
pub struct EdgeAdapter<K> {
    label_kernel: K,
    d_weight: f64,
}

impl<K: BaseKernel> EdgeAdapter<K> {
    /// Adapter with `d_weight = 1`, the setting under which the CSI kernel
    /// arises from Dirac kernels.
    pub fn new(label_kernel: K) -> Self {
        EdgeAdapter {
            label_kernel,
            d_weight: 1.0,
        }
    }

    /// Sets the weight given to commonly non-adjacent pairs. Zero discards
    /// d-edges entirely.
    pub fn with_d_weight(mut self, d_weight: f64) -> Result<Self, KernelError> {
        if !(d_weight.is_finite() && d_weight >= 0.0) {
            return Err(KernelError::NonPositive {
                name: "d_weight",
                value: d_weight,
            });
        }
        self.d_weight = d_weight;
        Ok(self)
    }

    pub fn d_weight(&self) -> f64 {
        self.d_weight
    }

    pub fn label_kernel(&self) -> &K {
        &self.label_kernel
    }
}

impl<K: BaseKernel> EdgeKernel for EdgeAdapter<K> {
    fn eval(
        &self,
        g1: &AttributedGraph,
        (u1, v1): (usize, usize),
        g2: &AttributedGraph,
        (u2, v2): (usize, usize),
    ) -> f64 {
        match (g1.edge_index(u1, v1), g2.edge_index(u2, v2)) {
            (Some(e1), Some(e2)) => self.label_kernel.eval(
                Item::new(g1.edge_label_at(e1), g1.edge_attrs_at(e1)),
                Item::new(g2.edge_label_at(e2), g2.edge_attrs_at(e2)),
            ),
            (None, None) => self.d_weight,
            _ => 0.0,
        }
    }

    fn name(&self) -> String {
        format!("edges({}, d={})", self.label_kernel.name(), self.d_weight)
    }
}

/// A closure with a name, usable wherever a [`BaseKernel`] is expected.
pub struct FnKernel<F> {
    name: String,
    f: F,
}

impl<F> FnKernel<F>
where
    F: Fn(Item<'_>, Item<'_>) -> f64 + Send + Sync,
{
    pub fn new(name: impl Into<String>, f: F) -> Self {
        FnKernel { name: name.into(), f }
    }
}

impl<F> BaseKernel for FnKernel<F>
where
    F: Fn(Item<'_>, Item<'_>) -> f64 + Send + Sync,
{
    fn eval(&self, a: Item<'_>, b: Item<'_>) -> f64 {
        (self.f)(a, b)
    }

    fn name(&self) -> String {
        self.name.clone()
    }
}

/// 1 if the tokens are equal, else 0.
pub fn dirac(a: &str, b: &str) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// `max(0, c - |d1 - d2|) / c`.
pub fn triangular(d1: f64, d2: f64, c: f64) -> Result<f64, KernelError> {
    Ok(triangular_unchecked(d1, d2, positive("c", c)?))
}

/// Brownian bridge kernel `max(0, c - |x1 - x2|)`, unscaled.
pub fn brownian_bridge(x1: f64, x2: f64, c: f64) -> Result<f64, KernelError> {
    Ok(brownian_unchecked(x1, x2, positive("c", c)?))
}

/// `exp(-(d1 - d2)^2 / (2 sigma^2))`.
pub fn gaussian_rbf(d1: f64, d2: f64, sigma: f64) -> Result<f64, KernelError> {
    Ok(rbf_unchecked(d1, d2, positive("sigma", sigma)?))
}

fn triangular_unchecked(d1: f64, d2: f64, c: f64) -> f64 {
    (c - (d1 - d2).abs()).max(0.0) / c
}

fn brownian_unchecked(x1: f64, x2: f64, c: f64) -> f64 {
    (c - (x1 - x2).abs()).max(0.0)
}

fn rbf_unchecked(d1: f64, d2: f64, sigma: f64) -> f64 {
    let z = (d1 - d2) / sigma;
    (-0.5 * z * z).exp()
}

fn positive(name: &'static str, value: f64) -> Result<f64, KernelError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(KernelError::NonPositive { name, value })
    }
}

/// The built-in base kernels. Construct through the checked constructors or by
/// parsing the textual form.
#[derive(Debug, Clone, PartialEq)]
pub enum AttrKernel {
    /// Label equality.
    Dirac,
    Triangular {
        c: f64,
        attr: usize,
    },
    Brownian {
        c: f64,
        attr: usize,
    },
    Rbf {
        sigma: f64,
        attr: usize,
    },
    Product(Vec<AttrKernel>),
}

impl AttrKernel {
    pub fn triangular(c: f64) -> Result<Self, KernelError> {
        Ok(AttrKernel::Triangular {
            c: positive("c", c)?,
            attr: 0,
        })
    }

    pub fn brownian(c: f64) -> Result<Self, KernelError> {
        Ok(AttrKernel::Brownian {
            c: positive("c", c)?,
            attr: 0,
        })
    }

    pub fn rbf(sigma: f64) -> Result<Self, KernelError> {
        Ok(AttrKernel::Rbf {
            sigma: positive("sigma", sigma)?,
            attr: 0,
        })
    }

    /// Pointwise product of the given kernels.
    pub fn product(parts: Vec<AttrKernel>) -> Result<Self, KernelError> {
        if parts.is_empty() {
            return Err(KernelError::EmptyProduct);
        }
        Ok(AttrKernel::Product(parts))
    }

    /// Largest attribute index any factor reads, if it reads attributes at all.
    pub fn max_attr_index(&self) -> Option<usize> {
        match self {
            AttrKernel::Dirac => None,
            AttrKernel::Triangular { attr, .. } | AttrKernel::Brownian { attr, .. } | AttrKernel::Rbf { attr, .. } => {
                Some(*attr)
            }
            AttrKernel::Product(parts) => parts.iter().filter_map(AttrKernel::max_attr_index).max(),
        }
    }

    /// Re-checks parameters; needed only for values built by hand rather than
    /// through the constructors.
    pub fn validate(&self) -> Result<(), KernelError> {
        match self {
            AttrKernel::Dirac => Ok(()),
            AttrKernel::Triangular { c, .. } | AttrKernel::Brownian { c, .. } => positive("c", *c).map(drop),
            AttrKernel::Rbf { sigma, .. } => positive("sigma", *sigma).map(drop),
            AttrKernel::Product(parts) if parts.is_empty() => Err(KernelError::EmptyProduct),
            AttrKernel::Product(parts) => parts.iter().try_for_each(AttrKernel::validate),
        }
    }
}

/// Scalar kernels read a missing attribute as 0 contribution; callers are
/// expected to validate arity beforehand.
impl BaseKernel for AttrKernel {
    fn eval(&self, a: Item<'_>, b: Item<'_>) -> f64 {
        let scalar = |attr: usize, f: &dyn Fn(f64, f64) -> f64| match (a.attrs.get(attr), b.attrs.get(attr)) {
            (Some(&x), Some(&y)) => f(x, y),
            _ => 0.0,
        };
        match self {
            AttrKernel::Dirac => dirac(a.label, b.label),
            AttrKernel::Triangular { c, attr } => scalar(*attr, &|x, y| triangular_unchecked(x, y, *c)),
            AttrKernel::Brownian { c, attr } => scalar(*attr, &|x, y| brownian_unchecked(x, y, *c)),
            AttrKernel::Rbf { sigma, attr } => scalar(*attr, &|x, y| rbf_unchecked(x, y, *sigma)),
            AttrKernel::Product(parts) => {
                let mut acc = 1.0;
                for p in parts {
                    acc *= BaseKernel::eval(p, a, b);
                    if acc == 0.0 {
                        break;
                    }
                }
                acc
            }
        }
    }

    fn name(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for AttrKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let attr_suffix = |attr: usize| {
            if attr == 0 {
                String::new()
            } else {
                format!(":attr={attr}")
            }
        };
        match self {
            AttrKernel::Dirac => write!(f, "dirac"),
            AttrKernel::Triangular { c, attr } => write!(f, "triangular:c={c}{}", attr_suffix(*attr)),
            AttrKernel::Brownian { c, attr } => write!(f, "brownian:c={c}{}", attr_suffix(*attr)),
            AttrKernel::Rbf { sigma, attr } => write!(f, "rbf:sigma={sigma}{}", attr_suffix(*attr)),
            AttrKernel::Product(parts) => {
                write!(f, "product(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl FromStr for AttrKernel {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_spec(s.trim(), s, 0)
    }
}

const MAX_SPEC_DEPTH: usize = 32;

fn parse_spec(s: &str, whole: &str, depth: usize) -> Result<AttrKernel, KernelError> {
    let err = |reason: String| KernelError::Spec {
        spec: whole.to_string(),
        reason,
    };
    if depth > MAX_SPEC_DEPTH {
        return Err(err("nesting too deep".into()));
    }
    if let Some(rest) = s.strip_prefix("product(") {
        let inner = rest
            .strip_suffix(')')
            .ok_or_else(|| err("unterminated product(...)".into()))?;
        let parts = split_top_level(inner).ok_or_else(|| err("unbalanced parentheses".into()))?;
        let parts = parts
            .into_iter()
            .map(|p| parse_spec(p.trim(), whole, depth + 1))
            .collect::<Result<Vec<_>, _>>()?;
        return AttrKernel::product(parts);
    }

    let mut fields = s.split(':');
    let name = fields.next().unwrap_or_default().trim();
    let mut c = None;
    let mut sigma = None;
    let mut attr = 0usize;
    for field in fields {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| err(format!("expected key=value, got `{field}`")))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "c" => c = Some(parse_real(value).ok_or_else(|| err(format!("bad number `{value}`")))?),
            "sigma" => sigma = Some(parse_real(value).ok_or_else(|| err(format!("bad number `{value}`")))?),
            "attr" => {
                attr = value
                    .parse()
                    .map_err(|_| err(format!("bad attribute index `{value}`")))?
            }
            _ => return Err(err(format!("unknown parameter `{key}`"))),
        }
    }
    let need = |p: Option<f64>, key: &str| p.ok_or_else(|| err(format!("{name} requires {key}=...")));
    let unexpected = |p: Option<f64>, key: &str| match p {
        Some(_) => Err(err(format!("{name} does not take {key}"))),
        None => Ok(()),
    };
    let kernel = match name {
        "dirac" => {
            unexpected(c, "c")?;
            unexpected(sigma, "sigma")?;
            if attr != 0 {
                return Err(err("dirac does not take attr".into()));
            }
            AttrKernel::Dirac
        }
        "triangular" => {
            unexpected(sigma, "sigma")?;
            AttrKernel::Triangular {
                c: positive("c", need(c, "c")?)?,
                attr,
            }
        }
        "brownian" => {
            unexpected(sigma, "sigma")?;
            AttrKernel::Brownian {
                c: positive("c", need(c, "c")?)?,
                attr,
            }
        }
        "rbf" => {
            unexpected(c, "c")?;
            AttrKernel::Rbf {
                sigma: positive("sigma", need(sigma, "sigma")?)?,
                attr,
            }
        }
        other => return Err(err(format!("unknown kernel `{other}`"))),
    };
    Ok(kernel)
}

fn parse_real(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

fn split_top_level(s: &str) -> Option<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.checked_sub(1)?,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return None;
    }
    parts.push(&s[start..]);
    Some(parts)
}
