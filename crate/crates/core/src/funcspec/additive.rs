use std::fmt;
use std::sync::Arc;

type Rule = dyn Fn(u64, u32) -> f64 + Send + Sync;

#[derive(Clone)]
enum Kind {
    Omega,
    BigOmega,
    Custom { name: String, rule: Arc<Rule> },
}

/// A real additive function given by its values at prime powers.
///
/// For strongly additive specs the rule is only consulted at `nu = 1`.
#[derive(Clone)]
pub struct AddSpec {
    kind: Kind,
    strongly_additive: bool,
}

impl AddSpec {
    /// `omega(n)`, the number of distinct prime factors.
    pub fn omega() -> Self {
        AddSpec { kind: Kind::Omega, strongly_additive: true }
    }

    /// `Omega(n)`, prime factors counted with multiplicity.
    pub fn bigomega() -> Self {
        AddSpec { kind: Kind::BigOmega, strongly_additive: false }
    }

    pub fn custom<F>(name: &str, strongly_additive: bool, rule: F) -> Self
    where
        F: Fn(u64, u32) -> f64 + Send + Sync + 'static,
    {
        AddSpec {
            kind: Kind::Custom { name: name.to_string(), rule: Arc::new(rule) },
            strongly_additive,
        }
    }

    pub fn is_strongly_additive(&self) -> bool {
        self.strongly_additive
    }

    /// `h(p^nu)`; `nu = 0` gives 0.
    pub fn value(&self, p: u64, nu: u32) -> f64 {
        if nu == 0 {
            return 0.0;
        }
        let nu = if self.strongly_additive { 1 } else { nu };
        match &self.kind {
            Kind::Omega => 1.0,
            Kind::BigOmega => nu as f64,
            Kind::Custom { rule, .. } => rule(p, nu),
        }
    }
}

impl fmt::Display for AddSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Omega => write!(f, "omega"),
            Kind::BigOmega => write!(f, "bigomega"),
            Kind::Custom { name, .. } => write!(f, "custom:{name}"),
        }
    }
}

impl fmt::Debug for AddSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AddSpec({self})")
    }
}

impl PartialEq for AddSpec {
    fn eq(&self, other: &Self) -> bool {
        match (&self.kind, &other.kind) {
            (Kind::Omega, Kind::Omega) | (Kind::BigOmega, Kind::BigOmega) => true,
            (Kind::Custom { rule: a, .. }, Kind::Custom { rule: b, .. }) => {
                Arc::ptr_eq(a, b) && self.strongly_additive == other.strongly_additive
            }
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strongly_additive_ignores_exponent() {
        let h = AddSpec::custom("log", true, |p, nu| nu as f64 * (p as f64).ln());
        assert_eq!(h.value(2, 5), h.value(2, 1));
        assert_eq!(AddSpec::omega().value(3, 4), 1.0);
        assert_eq!(AddSpec::bigomega().value(3, 4), 4.0);
        assert_eq!(AddSpec::bigomega().value(3, 0), 0.0);
    }
}
