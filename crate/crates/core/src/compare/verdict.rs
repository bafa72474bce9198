use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Holds,
    Fails,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Holds => "Holds",
            Status::Fails => "Fails",
            Status::Inconclusive => "Inconclusive",
        })
    }
}

/// How a verdict was established.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certification {
    /// Exact, from closed-form conditions on power-family parameters.
    ClosedForm,
    /// Checked on `points` sample points (or pairs) with the given slack.
    Sampled { points: usize, tolerance: f64 },
}

/// Location where a condition fails, or comes closest to failing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// One point `x` or a pair `(x, y)`.
    pub point: Vec<f64>,
    /// Weight index (0-based) or minor order, when the condition has one.
    pub index: Option<usize>,
    /// Value of the tested quantity at the witness.
    pub value: f64,
}

impl Witness {
    pub fn at(point: Vec<f64>, value: f64) -> Self {
        Witness {
            point,
            index: None,
            value,
        }
    }

    pub fn with_index(mut self, index: usize) -> Self {
        self.index = Some(index);
        self
    }
}

/// Three-valued outcome of a single condition.
///
/// `Fails` always carries a witness. `strict` is set on `Holds` when the
/// condition holds with a margin beyond tolerance everywhere it was checked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub strict: bool,
    pub witness: Option<Witness>,
    pub certification: Certification,
    pub note: String,
}

impl Verdict {
    pub fn holds(strict: bool, witness: Option<Witness>, certification: Certification) -> Self {
        Verdict {
            status: Status::Holds,
            strict,
            witness,
            certification,
            note: String::new(),
        }
    }

    pub fn fails(witness: Witness, certification: Certification) -> Self {
        Verdict {
            status: Status::Fails,
            strict: false,
            witness: Some(witness),
            certification,
            note: String::new(),
        }
    }

    pub fn inconclusive(note: impl Into<String>, certification: Certification) -> Self {
        Verdict {
            status: Status::Inconclusive,
            strict: false,
            witness: None,
            certification,
            note: note.into(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn is_holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn is_fails(&self) -> bool {
        self.status == Status::Fails
    }
}

/// Derived comparison conclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Implied,
    Refuted,
    Unknown,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Implied => "Implied",
            Outcome::Refuted => "Refuted",
            Outcome::Unknown => "Unknown",
        })
    }
}

/// The result that justifies a conclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// Local comparability forces `p_i/p_0 = q_i/q_0` for every `i`.
    FirstOrderNecessary,
    /// Local comparability forces `q_0²|g'| / (p_0²|f'|)` to increase and the
    /// diagonal Hessian of the difference to be positive semidefinite.
    SecondOrderNecessary,
    /// First-order equality plus a strictly increasing ratio give local
    /// comparability.
    SecondOrderSufficient,
    /// First-order equality plus the two-point inequality give global
    /// comparability.
    TwoPointSufficient,
    /// First-order equality plus increasing `q_0/p_0` and `|g'|/|f'|`.
    MonotoneRatios,
    /// Shared weights: global, local, and the four generator conditions are
    /// equivalent.
    SharedWeightsEquivalence,
    /// Shared generator: global, local, and first-order equality with
    /// increasing `q_0/p_0` are equivalent.
    SharedGeneratorEquivalence,
    /// Power weights with `mu = gamma*lambda`, `beta = alpha + delta` plus the
    /// weighted two-point inequality.
    PowerTwoPoint,
    /// Power means: `min(a,0) <= delta + min(b,0)` and
    /// `max(a,0) <= delta + max(b,0)`.
    PowerExponentBounds,
    /// Power weights must satisfy `mu = gamma*lambda`, `beta = alpha + delta`.
    PowerProportionality,
    /// Power means: `a <= b + 2 delta` is necessary, `a < b + 2 delta`
    /// sufficient.
    PowerExponentOrder,
    /// Both sides define the same mean.
    IdenticalMeans,
    /// Global comparability implies local comparability.
    GlobalImpliesLocal,
}

impl Rule {
    pub fn describe(self) -> &'static str {
        match self {
            Rule::FirstOrderNecessary => "first-order necessary condition p_i/p_0 = q_i/q_0",
            Rule::SecondOrderNecessary => {
                "second-order necessary condition: q_0^2|g'|/(p_0^2|f'|) increasing"
            }
            Rule::SecondOrderSufficient => {
                "second-order sufficient condition: first-order equality and strictly increasing q_0^2|g'|/(p_0^2|f'|)"
            }
            Rule::TwoPointSufficient => {
                "two-point sufficient condition p_0(x)(f(x)-f(y))/(p_0(y)f'(y)) <= q_0(x)(g(x)-g(y))/(q_0(y)g'(y))"
            }
            Rule::MonotoneRatios => "sufficient condition: q_0/p_0 and |g'|/|f'| increasing",
            Rule::SharedWeightsEquivalence => "shared-weights equivalence (|g'/f'| increasing)",
            Rule::SharedGeneratorEquivalence => {
                "shared-generator equivalence (first-order equality and q_0/p_0 increasing)"
            }
            Rule::PowerTwoPoint => {
                "power-weight two-point condition (f(x)-f(y))/f'(y) <= x^delta(g(x)-g(y))/(y^delta g'(y))"
            }
            Rule::PowerExponentBounds => {
                "power exponent bounds min(a,0) <= delta+min(b,0), max(a,0) <= delta+max(b,0)"
            }
            Rule::PowerProportionality => {
                "power-weight proportionality mu_i = gamma*lambda_i, beta_i = alpha_i + delta"
            }
            Rule::PowerExponentOrder => "power exponent order a <= b + 2 delta",
            Rule::IdenticalMeans => "identical means",
            Rule::GlobalImpliesLocal => "global comparability implies local comparability",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conclusion {
    pub outcome: Outcome,
    pub rule: Option<Rule>,
    pub note: String,
}

impl Conclusion {
    pub fn implied(rule: Rule) -> Self {
        Conclusion {
            outcome: Outcome::Implied,
            rule: Some(rule),
            note: String::new(),
        }
    }

    pub fn refuted(rule: Rule) -> Self {
        Conclusion {
            outcome: Outcome::Refuted,
            rule: Some(rule),
            note: String::new(),
        }
    }

    pub fn unknown(note: impl Into<String>) -> Self {
        Conclusion {
            outcome: Outcome::Unknown,
            rule: None,
            note: note.into(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.outcome)?;
        if let Some(rule) = self.rule {
            write!(f, " by {}", rule.describe())?;
        }
        if !self.note.is_empty() {
            write!(f, " ({})", self.note)?;
        }
        Ok(())
    }
}
