//! Subcommands: each builds a [`Report`] from a loaded problem.

use varseq_core::expr::Expr;
use varseq_core::gauge::{JacobiSlot, YangMills};
use varseq_core::geometry::{exterior_derivative, Form, VectorField};
use varseq_core::random::{FixtureRng, Shape};
use varseq_core::variational::{
    euler_lagrange_coefficients, helmholtz, higher_variation, identity_a_residual, identity_b_residual,
    identity_suite, jacobi_morphism, jacobi_onshell, momentum, noether_current, principal_lepage, residual,
    IdentityReport, SourceForm, Status, Suite,
};

use crate::error::CliError;
use crate::problem::Problem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Euler-Lagrange expressions.
    El,
    /// Principal Lepage equivalent.
    Lepage,
    /// Momentum form.
    Momentum,
    /// Noether currents and their conservation.
    Noether,
    /// Variation formulas along `--field` (repeated with `--order`).
    Variation,
    /// Jacobi morphism and the Jacobi identities.
    Jacobi,
    /// Helmholtz form of the source (or of the Euler-Lagrange form).
    Helmholtz,
    /// Residual operator applied to the exterior derivative of the Lagrangian.
    Residual,
    /// Yang-Mills closed-form displays and their checks.
    Ym,
    /// Identity suite.
    Check,
}

#[derive(Clone, Debug)]
pub enum Value {
    Expr(Expr),
    Form(Form),
    Status(Status, String),
    Text(String),
}

#[derive(Clone, Debug)]
pub struct Item {
    pub label: String,
    pub value: Value,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub items: Vec<Item>,
}

impl Report {
    fn expr(&mut self, label: impl Into<String>, e: Expr) {
        self.items.push(Item {
            label: label.into(),
            value: Value::Expr(e),
        });
    }

    fn form(&mut self, label: impl Into<String>, f: Form) {
        self.items.push(Item {
            label: label.into(),
            value: Value::Form(f),
        });
    }

    fn status(&mut self, label: impl Into<String>, ok: bool, detail: impl Into<String>) {
        let s = if ok { Status::Pass } else { Status::Fail };
        self.items.push(Item {
            label: label.into(),
            value: Value::Status(s, if ok { String::new() } else { detail.into() }),
        });
    }

    fn text(&mut self, label: impl Into<String>, t: impl Into<String>) {
        self.items.push(Item {
            label: label.into(),
            value: Value::Text(t.into()),
        });
    }

    fn identities(&mut self, rep: IdentityReport) {
        for o in rep.outcomes {
            self.items.push(Item {
                label: o.name,
                value: Value::Status(o.status, o.detail),
            });
        }
    }

    pub fn failed(&self) -> usize {
        self.items
            .iter()
            .filter(|i| matches!(i.value, Value::Status(Status::Fail, _)))
            .count()
    }

    /// Expression item by label.
    pub fn get(&self, label: &str) -> Option<&Value> {
        self.items.iter().find(|i| i.label == label).map(|i| &i.value)
    }
}

/// Options that apply across commands.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub fields: Vec<String>,
    pub order: Option<usize>,
    pub seed: Option<u64>,
    pub suite: Option<Suite>,
}

pub fn run(cmd: Command, p: &Problem, opts: &RunOptions) -> Result<Report, CliError> {
    let mut r = Report::default();
    let b = &p.bundle;
    match cmd {
        Command::El => {
            let e = euler_lagrange_coefficients(b, &p.lagrangian()?.density(b)?)?;
            for (s, c) in e.into_iter().enumerate() {
                r.expr(format!("E[{}]", b.fibre_names()[s]), c);
            }
        }
        Command::Lepage => r.form("theta", principal_lepage(b, p.lagrangian()?)?),
        Command::Momentum => r.form("p", momentum(b, p.lagrangian()?)?),
        Command::Noether => {
            let lambda = p.lagrangian()?;
            let fields = selected(p, opts)?;
            for (name, f) in &fields {
                let eps = noether_current(b, lambda, f)?.current_components(b)?;
                for (i, c) in eps.into_iter().enumerate() {
                    r.expr(format!("eps[{name}][{}]", b.base_names()[i]), c);
                }
            }
            r.identities(identity_suite(b, lambda, &fields, Suite::Noether)?);
        }
        Command::Variation => {
            let lambda = p.lagrangian()?;
            let fields = variation_fields(p, opts)?;
            let names: Vec<&str> = fields.iter().map(|(n, _)| n.as_str()).collect();
            let vfs: Vec<VectorField> = fields.iter().map(|(_, f)| f.clone()).collect();
            let dec = higher_variation(b, lambda, &vfs)?;
            r.text("fields", names.join(", "));
            r.form("total", dec.total.clone());
            r.form("boundary_free", dec.boundary_free.clone());
            for (j, d) in dec.divergence_terms.iter().enumerate() {
                r.form(format!("divergence[{}]", j + 1), d.clone());
            }
            let res = dec.residual();
            r.status("decomposition", res.is_zero(), format!("residual {res:?}"));
        }
        Command::Jacobi => {
            let lambda = p.lagrangian()?;
            let fields = selected(p, opts)?;
            for (name, f) in &fields {
                if !f.is_vertical() {
                    r.text(name.clone(), "skipped: not vertical");
                    continue;
                }
                let j = jacobi_morphism(b, lambda, f)?.coefficients(b)?;
                let on = jacobi_onshell(b, lambda, f)?;
                for (s, c) in j.into_iter().enumerate() {
                    r.expr(format!("J[{name}][{}]", b.fibre_names()[s]), c);
                }
                for (s, c) in on.direct.into_iter().enumerate() {
                    r.expr(format!("direct[{name}][{}]", b.fibre_names()[s]), c);
                }
                for (s, c) in on.adjoint.into_iter().enumerate() {
                    r.expr(format!("adjoint[{name}][{}]", b.fibre_names()[s]), c);
                }
                let a = identity_a_residual(b, lambda, f)?;
                r.status(format!("jacobi_identity_a[{name}]"), a.iter().all(Expr::is_zero), format!("residual {a:?}"));
                let bb = identity_b_residual(b, lambda, f)?;
                r.status(
                    format!("jacobi_identity_b[{name}]"),
                    bb.iter().all(Expr::is_zero),
                    format!("residual {bb:?}"),
                );
            }
        }
        Command::Helmholtz => {
            let coeffs = match &p.source {
                Some(s) => s.clone(),
                None => euler_lagrange_coefficients(b, &p.lagrangian()?.density(b)?)?,
            };
            let h = helmholtz(b, &SourceForm::from_coefficients(b, coeffs)?)?.into_form();
            let zero = h.is_zero();
            r.form("H", h);
            r.text("variational", if zero { "yes" } else { "no" });
        }
        Command::Residual => {
            let lambda = p.lagrangian()?;
            let d = exterior_derivative(b, lambda)?;
            let res = if d.is_zero() { Form::zero() } else { residual(b, &d)? };
            if let Some(ym) = &p.gauge {
                let disp = ym.residual_display()?;
                let diff = &res - &disp;
                r.status("residual_display", diff.is_zero(), format!("difference {diff:?}"));
            }
            r.form("R", res);
        }
        Command::Ym => ym_report(&mut r, gauge(p)?)?,
        Command::Check => {
            let suite = opts.suite.or(p.suite).unwrap_or(Suite::All);
            let lambda = p.lagrangian()?;
            let mut fields = selected(p, opts)?;
            if fields.is_empty() {
                let seed = opts.seed.unwrap_or(p.seed);
                let mut rng = FixtureRng::new(seed);
                let shape = Shape::default();
                fields.push(("random_vertical".into(), rng.vertical_field(b, shape)));
                fields.push(("random_projectable".into(), rng.projectable_field(b, shape)));
                r.text("fields", format!("generated from seed {seed}"));
            }
            r.identities(identity_suite(b, lambda, &fields, suite)?);
        }
    }
    Ok(r)
}

fn gauge(p: &Problem) -> Result<&YangMills, CliError> {
    p.gauge
        .as_ref()
        .ok_or_else(|| CliError::Usage("this command needs a [gauge] problem".into()))
}

fn selected(p: &Problem, opts: &RunOptions) -> Result<Vec<(String, VectorField)>, CliError> {
    if opts.fields.is_empty() {
        return Ok(p.fields.clone());
    }
    opts.fields
        .iter()
        .map(|n| Ok((n.clone(), p.field(n)?.clone())))
        .collect()
}

fn variation_fields(p: &Problem, opts: &RunOptions) -> Result<Vec<(String, VectorField)>, CliError> {
    if opts.fields.is_empty() {
        return Err(CliError::Usage("variation needs at least one --field".into()));
    }
    let mut fields = selected(p, opts)?;
    match opts.order {
        None => {}
        Some(l) if fields.len() == 1 && l >= 1 => fields = vec![fields[0].clone(); l],
        Some(l) if l == fields.len() => {}
        Some(l) => {
            return Err(CliError::Usage(format!(
                "--order {l} needs one field or exactly {l} fields"
            )))
        }
    }
    Ok(fields)
}

fn vec_diff(a: &[Expr], b: &[Expr]) -> Vec<Expr> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn match_status(r: &mut Report, label: &str, a: &[Expr], b: &[Expr]) {
    let d = vec_diff(a, b);
    let ok = a.len() == b.len() && d.iter().all(Expr::is_zero);
    r.status(label, ok, format!("difference {d:?}"));
}

fn ym_report(r: &mut Report, ym: &YangMills) -> Result<(), CliError> {
    let b = ym.bundle();
    let v = ym.algebra().validate();
    if v.checked {
        r.status("structure_constants", v.is_valid(), v.to_string());
    } else {
        r.text("structure_constants", "symbolic, not checked");
    }

    let el = ym.euler_lagrange()?;
    match_status(r, "euler_lagrange_display", &el, &ym.euler_lagrange_display());
    if is_abelian(ym) {
        match_status(r, "maxwell_display", &el, &ym.maxwell_display());
    }
    for (s, c) in el.iter().enumerate() {
        r.expr(format!("E[{}]", b.fibre_names()[s]), c.clone());
    }

    let raw = ym.jacobi_raw()?;
    if is_abelian(ym) {
        match_status(r, "jacobi_maxwell_display", &raw, &ym.jacobi_maxwell_display());
    }
    let terms = ym.jacobi_term_displays();
    let mut sum = vec![Expr::zero(); raw.len()];
    for t in &terms {
        for (s, e) in t.iter().enumerate() {
            sum[s] += e;
        }
    }
    match_status(r, "jacobi_term_sum", &raw, &sum);
    match_status(r, "jacobi_summed_display", &raw, &ym.jacobi_summed_display()?);
    match_status(r, "jacobi_covariant_display", &raw, &ym.jacobi_covariant_display()?);
    for (s, c) in raw.iter().enumerate() {
        r.expr(format!("J[{}]", b.fibre_names()[s]), c.clone());
    }

    let cur = ym.jacobi_current(JacobiSlot::Xi, JacobiSlot::Tilde)?;
    match_status(r, "current_display", &cur, &ym.current_display(JacobiSlot::Xi, JacobiSlot::Tilde)?);
    match_status(r, "current_expanded_display", &cur, &ym.current_expanded_display()?);
    let same = ym.current_display(JacobiSlot::Xi, JacobiSlot::Xi)?;
    r.status(
        "current_vanishes_on_diagonal",
        same.iter().all(Expr::is_zero),
        format!("components {same:?}"),
    );
    for (i, c) in cur.iter().enumerate() {
        r.expr(format!("eps[{}]", b.base_names()[i]), c.clone());
    }

    let res = ym.residual()?;
    let diff = &res - &ym.residual_display()?;
    r.status("residual_display", diff.is_zero(), format!("difference {diff:?}"));
    Ok(())
}

fn is_abelian(ym: &YangMills) -> bool {
    ym.algebra().is_numeric() && {
        let d = ym.dim();
        (0..d).all(|a| (0..d).all(|b| (0..d).all(|c| ym.c(a, b, c).is_zero())))
    }
}
