//! Registry of worked initial conditions. Each paper-worked seed is
//! registered in both sign branches (the ± displays are genuinely two
//! solutions each); plain names like `example1` alias the upper branch.
//! Expected closed forms, where known, feed the golden tests and the
//! user-supplied verification mode.

use std::collections::BTreeSet;

use crate::config::RunConfig;
use crate::expr::{parse_with_constants, Expr, ParseError};
use crate::fields::VectorField;
use crate::iterate::EquationSystem;
use crate::lift::{ComplexExpr, SpinorField};

#[derive(Debug, Clone)]
pub struct Seed {
    pub name: &'static str,
    pub summary: &'static str,
    pub h0: [&'static str; 3],
    pub system: EquationSystem,
    pub params: &'static [(&'static str, f64)],
    pub expected_h: Option<[&'static str; 3]>,
    pub expected_a: Option<[&'static str; 3]>,
    pub expected_b: Option<[&'static str; 3]>,
    /// re/im of the two spinor components: [re1, im1, re2, im2].
    pub expected_psi: Option<[&'static str; 4]>,
}


macro_rules! monopole_psi {
    ($num1:expr, $num2re:expr, $num2im:expr) => {
        Some([
            concat!(
                "(",
                $num1,
                ") / (2*sqrt(x^2+y^2+z^2)*sqrt(sqrt(x^2+y^2+z^2)*(",
                $num1,
                ")))"
            ),
            "0",
            concat!(
                "(",
                $num2re,
                ") / (2*sqrt(x^2+y^2+z^2)*sqrt(sqrt(x^2+y^2+z^2)*(",
                $num1,
                ")))"
            ),
            concat!(
                "(",
                $num2im,
                ") / (2*sqrt(x^2+y^2+z^2)*sqrt(sqrt(x^2+y^2+z^2)*(",
                $num1,
                ")))"
            ),
        ])
    };
}

static REGISTRY: &[Seed] = &[
    Seed {
        name: "example1+",
        summary: "radial seed, upper branch: monopole solution of the Freund system",
        h0: ["x", "y", "z"],
        system: EquationSystem::Freund,
        params: &[],
        expected_h: Some([
            "x / (2*(x^2+y^2+z^2)^(3/2))",
            "y / (2*(x^2+y^2+z^2)^(3/2))",
            "z / (2*(x^2+y^2+z^2)^(3/2))",
        ]),
        expected_a: Some([
            "y / (2*sqrt(x^2+y^2+z^2)*(sqrt(x^2+y^2+z^2)+z))",
            "-(x / (2*sqrt(x^2+y^2+z^2)*(sqrt(x^2+y^2+z^2)+z)))",
            "0",
        ]),
        expected_b: Some([
            "-(x / (2*(x^2+y^2+z^2)^(3/2)))",
            "-(y / (2*(x^2+y^2+z^2)^(3/2)))",
            "-(z / (2*(x^2+y^2+z^2)^(3/2)))",
        ]),
        expected_psi: monopole_psi!("sqrt(x^2+y^2+z^2)+z", "x", "y"),
    },
    Seed {
        name: "example1-",
        summary: "radial seed, lower branch",
        h0: ["-x", "-y", "-z"],
        system: EquationSystem::Freund,
        params: &[],
        expected_h: Some([
            "-(x / (2*(x^2+y^2+z^2)^(3/2)))",
            "-(y / (2*(x^2+y^2+z^2)^(3/2)))",
            "-(z / (2*(x^2+y^2+z^2)^(3/2)))",
        ]),
        expected_a: Some([
            "y / (2*sqrt(x^2+y^2+z^2)*(sqrt(x^2+y^2+z^2)-z))",
            "-(x / (2*sqrt(x^2+y^2+z^2)*(sqrt(x^2+y^2+z^2)-z)))",
            "0",
        ]),
        expected_b: Some([
            "x / (2*(x^2+y^2+z^2)^(3/2))",
            "y / (2*(x^2+y^2+z^2)^(3/2))",
            "z / (2*(x^2+y^2+z^2)^(3/2))",
        ]),
        expected_psi: monopole_psi!("sqrt(x^2+y^2+z^2)-z", "-x", "-y"),
    },
    Seed {
        name: "example2+",
        summary: "sinh seed, upper branch: effectively one-dimensional Seiberg-Witten solution",
        h0: ["sinh(kappa*y)", "0", "0"],
        system: EquationSystem::SeibergWitten,
        params: &[("kappa", 1.0)],
        expected_h: Some(["-(kappa^2 / sinh(kappa*y)^2)", "0", "0"]),
        expected_a: Some(["0", "0", "kappa * coth(kappa*y)"]),
        expected_b: Some(["-(kappa^2 / sinh(kappa*y)^2)", "0", "0"]),
        expected_psi: Some([
            "kappa / (sqrt(2) * sinh(kappa*y))",
            "0",
            "-(kappa / (sqrt(2) * sinh(kappa*y)))",
            "0",
        ]),
    },
    Seed {
        name: "example2-",
        summary: "sinh seed, lower branch",
        h0: ["-sinh(kappa*y)", "0", "0"],
        system: EquationSystem::SeibergWitten,
        params: &[("kappa", 1.0)],
        expected_h: Some(["kappa^2 / sinh(kappa*y)^2", "0", "0"]),
        expected_a: Some(["0", "0", "-(kappa * coth(kappa*y))"]),
        expected_b: Some(["kappa^2 / sinh(kappa*y)^2", "0", "0"]),
        expected_psi: Some([
            "kappa / (sqrt(2) * sinh(kappa*y))",
            "0",
            "kappa / (sqrt(2) * sinh(kappa*y))",
            "0",
        ]),
    },
    Seed {
        name: "example2cosh+",
        summary: "cosh seed, upper branch: the analytic continuation, a Freund solution",
        h0: ["cosh(kappa*y)", "0", "0"],
        system: EquationSystem::Freund,
        params: &[("kappa", 1.0)],
        expected_h: Some(["-(kappa^2 / cosh(kappa*y)^2)", "0", "0"]),
        expected_a: Some(["0", "0", "kappa * tanh(kappa*y)"]),
        expected_b: Some(["kappa^2 / cosh(kappa*y)^2", "0", "0"]),
        expected_psi: Some([
            "kappa / (sqrt(2) * cosh(kappa*y))",
            "0",
            "-(kappa / (sqrt(2) * cosh(kappa*y)))",
            "0",
        ]),
    },
    Seed {
        name: "example2cosh-",
        summary: "cosh seed, lower branch",
        h0: ["-cosh(kappa*y)", "0", "0"],
        system: EquationSystem::Freund,
        params: &[("kappa", 1.0)],
        expected_h: Some(["kappa^2 / cosh(kappa*y)^2", "0", "0"]),
        expected_a: Some(["0", "0", "-(kappa * tanh(kappa*y))"]),
        expected_b: Some(["-(kappa^2 / cosh(kappa*y)^2)", "0", "0"]),
        expected_psi: Some([
            "kappa / (sqrt(2) * cosh(kappa*y))",
            "0",
            "kappa / (sqrt(2) * cosh(kappa*y))",
            "0",
        ]),
    },
    Seed {
        name: "example3+",
        summary: "xyz seed, upper branch: planar Seiberg-Witten solution (z^2 Liouville family)",
        h0: ["x*y*z", "0", "0"],
        system: EquationSystem::SeibergWitten,
        params: &[],
        expected_h: Some(["-(1/y^2 + 1/z^2)", "0", "0"]),
        expected_a: Some([
            "0",
            "-(y^2 / (z*(y^2+z^2)))",
            "z^2 / (y*(y^2+z^2))",
        ]),
        expected_b: Some(["-(1/y^2 + 1/z^2)", "0", "0"]),
        expected_psi: Some([
            "sqrt(1/(2*y^2) + 1/(2*z^2))",
            "0",
            "-sqrt(1/(2*y^2) + 1/(2*z^2))",
            "0",
        ]),
    },
    Seed {
        name: "example3-",
        summary: "xyz seed, lower branch",
        h0: ["-(x*y*z)", "0", "0"],
        system: EquationSystem::SeibergWitten,
        params: &[],
        expected_h: Some(["1/y^2 + 1/z^2", "0", "0"]),
        expected_a: Some([
            "0",
            "y^2 / (z*(y^2+z^2))",
            "-(z^2 / (y*(y^2+z^2)))",
        ]),
        expected_b: Some(["1/y^2 + 1/z^2", "0", "0"]),
        expected_psi: Some([
            "sqrt(1/(2*y^2) + 1/(2*z^2))",
            "0",
            "sqrt(1/(2*y^2) + 1/(2*z^2))",
            "0",
        ]),
    },
    Seed {
        name: "example4+",
        summary: "rotational seed, upper branch: axisymmetric Seiberg-Witten solution",
        h0: ["y", "-x", "0"],
        system: EquationSystem::SeibergWitten,
        params: &[],
        expected_h: Some([
            "-(y / (2*(x^2+y^2)^(3/2)))",
            "x / (2*(x^2+y^2)^(3/2))",
            "0",
        ]),
        expected_a: Some([
            "y / (2*(x^2+y^2))",
            "-(x / (2*(x^2+y^2)))",
            "1 / (2*sqrt(x^2+y^2))",
        ]),
        expected_b: Some([
            "-(y / (2*(x^2+y^2)^(3/2)))",
            "x / (2*(x^2+y^2)^(3/2))",
            "0",
        ]),
        expected_psi: Some([
            "1 / (2*sqrt(x^2+y^2))",
            "0",
            "-(y / (2*(x^2+y^2)))",
            "x / (2*(x^2+y^2))",
        ]),
    },
    Seed {
        name: "example4-",
        summary: "rotational seed, lower branch",
        h0: ["-y", "x", "0"],
        system: EquationSystem::SeibergWitten,
        params: &[],
        expected_h: Some([
            "y / (2*(x^2+y^2)^(3/2))",
            "-(x / (2*(x^2+y^2)^(3/2)))",
            "0",
        ]),
        expected_a: Some([
            "y / (2*(x^2+y^2))",
            "-(x / (2*(x^2+y^2)))",
            "-(1 / (2*sqrt(x^2+y^2)))",
        ]),
        expected_b: Some([
            "y / (2*(x^2+y^2)^(3/2))",
            "-(x / (2*(x^2+y^2)^(3/2)))",
            "0",
        ]),
        expected_psi: Some([
            "1 / (2*sqrt(x^2+y^2))",
            "0",
            "y / (2*(x^2+y^2))",
            "-(x / (2*(x^2+y^2)))",
        ]),
    },
    Seed {
        name: "generic",
        summary: "generic seed documenting the typical failure mode: symbolic size blowup",
        h0: ["x + y^2", "z", "x*y"],
        system: EquationSystem::SeibergWitten,
        params: &[],
        expected_h: None,
        expected_a: None,
        expected_b: None,
        expected_psi: None,
    },
];

pub fn registry() -> &'static [Seed] {
    REGISTRY
}

/// Look up a seed by name; bare example names alias their upper branch
/// (`example1` -> `example1+`).
pub fn find(name: &str) -> Option<&'static Seed> {
    let canonical = REGISTRY.iter().find(|s| s.name == name);
    if canonical.is_some() {
        return canonical;
    }
    let upper = format!("{name}+");
    REGISTRY.iter().find(|s| s.name == upper)
}

impl Seed {
    fn constants(&self) -> BTreeSet<String> {
        self.params.iter().map(|(k, _)| k.to_string()).collect()
    }

    fn parse_field(&self, comps: &[&str; 3]) -> Result<VectorField, ParseError> {
        let consts = self.constants();
        Ok(VectorField::new(
            parse_with_constants(comps[0], &consts)?,
            parse_with_constants(comps[1], &consts)?,
            parse_with_constants(comps[2], &consts)?,
        ))
    }

    pub fn h0_field(&self) -> VectorField {
        self.parse_field(&self.h0).expect("registry seed must parse")
    }

    pub fn expected_h_field(&self) -> Option<VectorField> {
        self.expected_h
            .as_ref()
            .map(|c| self.parse_field(c).expect("registry expectation must parse"))
    }

    pub fn expected_a_field(&self) -> Option<VectorField> {
        self.expected_a
            .as_ref()
            .map(|c| self.parse_field(c).expect("registry expectation must parse"))
    }

    pub fn expected_b_field(&self) -> Option<VectorField> {
        self.expected_b
            .as_ref()
            .map(|c| self.parse_field(c).expect("registry expectation must parse"))
    }

    pub fn expected_spinor(&self) -> Option<SpinorField> {
        let consts = self.constants();
        self.expected_psi.as_ref().map(|c| {
            let p = |s: &str| parse_with_constants(s, &consts).expect("registry psi must parse");
            SpinorField {
                up: ComplexExpr {
                    re: p(c[0]),
                    im: p(c[1]),
                },
                down: ComplexExpr {
                    re: p(c[2]),
                    im: p(c[3]),
                },
            }
        })
    }

    /// Merge this seed's default parameters into a run config (existing
    /// values win, so CLI overrides survive).
    pub fn apply_params(&self, cfg: &mut RunConfig) {
        for (name, value) in self.params {
            cfg.params.entry(name.to_string()).or_insert(*value);
        }
    }

    pub fn has_expected(&self) -> bool {
        self.expected_h.is_some()
    }
}

/// Parse a user-facing field with a declared constant set taken from the
/// config parameters.
pub fn parse_field_with_config(
    comps: [&str; 3],
    cfg: &RunConfig,
) -> Result<VectorField, ParseError> {
    let consts: BTreeSet<String> = cfg.params.keys().cloned().collect();
    Ok(VectorField::new(
        parse_with_constants(comps[0], &consts)?,
        parse_with_constants(comps[1], &consts)?,
        parse_with_constants(comps[2], &consts)?,
    ))
}

/// Expr helper used by CLI/FFI surfaces for single expressions.
pub fn parse_expr_with_config(text: &str, cfg: &RunConfig) -> Result<Expr, ParseError> {
    let consts: BTreeSet<String> = cfg.params.keys().cloned().collect();
    parse_with_constants(text, &consts)
}
