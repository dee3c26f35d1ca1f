//! Abstract interpretation of programs over a selected backend.
//!
//! Statements map onto the environment interface directly: assignments
//! evaluate, `assume` guards, `if` guards both branches and joins them,
//! `while` unrolls up to a bound with a box-level stabilization check.
//! Branches may bind different variable sets, so environments are
//! reconciled (missing names bound unconstrained, dead branches kept
//! uniformly dead) before any join or comparison.

use qz_domain::{
    box_leq, AnyEnv, Backend, Concretization, DomainError, EvalNote, EvalSettings, RelExpr,
};
use qz_forms::ExtInterval;
use thiserror::Error;

use crate::parser::{Program, Stmt};
use crate::AnalyzerError;

/// Invalid analysis settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("the sdp concretization requires the quad domain (got `{domain}`)")]
    SdpRequiresQuad { domain: Backend },
}

/// Analysis settings: backend domain, concretization, floating-point
/// accounting, loop unroll bound, and guard refinement rounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisConfig {
    pub domain: Backend,
    pub conc: Concretization,
    pub fp: bool,
    pub unroll_bound: usize,
    pub backward_passes: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            domain: Backend::Quad,
            conc: Concretization::Mt,
            fp: false,
            unroll_bound: 50,
            backward_passes: 1,
        }
    }
}

impl AnalysisConfig {
    /// Rejects setting combinations the backends cannot honor.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.conc == Concretization::Sdp && self.domain != Backend::Quad {
            return Err(ConfigError::SdpRequiresQuad {
                domain: self.domain,
            });
        }
        Ok(())
    }

    fn settings(&self) -> EvalSettings {
        EvalSettings {
            conc: self.conc,
            fp: self.fp,
            backward_passes: self.backward_passes,
        }
    }
}

/// Final per-variable bounds plus everything worth telling the user.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisResult {
    pub config: AnalysisConfig,
    /// One entry per program variable, in name order. `None` bounds mean
    /// the end of the program is unreachable.
    pub vars: Vec<(String, Option<ExtInterval>)>,
    /// Deduplicated, in order of first occurrence.
    pub warnings: Vec<String>,
    pub unreachable: bool,
}

impl AnalysisResult {
    /// The reported bounds of `name`, when the variable exists and the
    /// program end is reachable.
    pub fn bounds(&self, name: &str) -> Option<ExtInterval> {
        self.vars
            .iter()
            .find(|(n, _)| n == name)
            .and_then(|(_, b)| *b)
    }
}

/// Runs `p` under `cfg` and reports final variable bounds.
pub fn interpret(p: &Program, cfg: &AnalysisConfig) -> Result<AnalysisResult, AnalyzerError> {
    cfg.validate().map_err(AnalyzerError::Config)?;
    let mut it = Interp {
        set: cfg.settings(),
        unroll_bound: cfg.unroll_bound,
        warnings: Vec::new(),
        notes: Vec::new(),
    };
    let env = it
        .block(AnyEnv::new(cfg.domain), &p.stmts)
        .map_err(AnalyzerError::Internal)?;
    let unreachable = env.is_bottom();
    let bounds = env.box_bounds(cfg.conc);
    let mut vars = Vec::new();
    for name in p.vars() {
        let b = bounds.as_ref().map(|bx| {
            bx.iter()
                .find(|(n, _)| *n == name)
                .map(|(_, r)| *r)
                .unwrap_or_else(|| {
                    it.warn(format!(
                        "variable `{name}` is assigned on unreachable paths only; \
                         reporting it unconstrained"
                    ));
                    ExtInterval::whole()
                })
        });
        vars.push((name, b));
    }
    if unreachable {
        it.warn("the end of the program is unreachable".to_string());
    }
    Ok(AnalysisResult {
        config: *cfg,
        vars,
        warnings: it.warnings,
        unreachable,
    })
}

struct Interp {
    set: EvalSettings,
    unroll_bound: usize,
    warnings: Vec<String>,
    notes: Vec<EvalNote>,
}

impl Interp {
    fn warn(&mut self, w: String) {
        if !self.warnings.contains(&w) {
            self.warnings.push(w);
        }
    }

    fn drain_notes(&mut self) {
        let notes = std::mem::take(&mut self.notes);
        for n in notes {
            self.warn(n.to_string());
        }
    }

    fn block(&mut self, mut env: AnyEnv, stmts: &[Stmt]) -> Result<AnyEnv, DomainError> {
        for s in stmts {
            // Statements after an unreachable point cannot resurrect the
            // environment (an assignment into bottom would).
            if env.is_bottom() {
                break;
            }
            env = self.stmt(env, s)?;
        }
        Ok(env)
    }

    fn stmt(&mut self, env: AnyEnv, s: &Stmt) -> Result<AnyEnv, DomainError> {
        let out = match s {
            Stmt::Assign(name, e) => env.assign(name, e, &self.set, &mut self.notes)?,
            Stmt::Assume(rel) => env.guard(rel, &self.set, &mut self.notes)?,
            Stmt::If(cond, then_b, else_b) => {
                let t = env.guard(cond, &self.set, &mut self.notes)?;
                let t = self.block(t, then_b)?;
                let e = env.guard(&cond.negated(), &self.set, &mut self.notes)?;
                let e = self.block(e, else_b)?;
                self.merge(t, e)?
            }
            Stmt::While(cond, body) => self.unroll(env, cond, body)?,
        };
        self.drain_notes();
        Ok(out)
    }

    /// Binds names present on one side only to the other side's
    /// unconstrained value, then renormalizes so a dead branch stays
    /// uniformly dead.
    fn reconcile(a: &mut AnyEnv, b: &mut AnyEnv) {
        for n in b.names() {
            if !a.contains(&n) {
                a.bind_top(&n);
            }
        }
        for n in a.names() {
            if !b.contains(&n) {
                b.bind_top(&n);
            }
        }
        if a.is_bottom() {
            *a = a.to_bottom();
        }
        if b.is_bottom() {
            *b = b.to_bottom();
        }
    }

    /// Join after reconciliation; a dead side yields the other exactly.
    fn merge(&mut self, mut a: AnyEnv, mut b: AnyEnv) -> Result<AnyEnv, DomainError> {
        Self::reconcile(&mut a, &mut b);
        if a.is_bottom() {
            return Ok(b);
        }
        if b.is_bottom() {
            return Ok(a);
        }
        a.join(&b, &self.set)
    }

    /// Bounded unrolling. Each round guards the condition on the previous
    /// round's exit state, runs the body, and joins into an accumulator;
    /// stops early when no iteration is possible or the new state's box is
    /// contained in the accumulator's. Exhausting the bound is a warning
    /// (later iterations may escape the reported box); either way the
    /// negated condition is applied on exit.
    fn unroll(
        &mut self,
        env: AnyEnv,
        cond: &RelExpr,
        body: &[Stmt],
    ) -> Result<AnyEnv, DomainError> {
        let mut acc = env.clone();
        let mut cur = env;
        let mut exhausted = true;
        for _ in 0..self.unroll_bound {
            let entered = cur.guard(cond, &self.set, &mut self.notes)?;
            if entered.is_bottom() {
                exhausted = false;
                break;
            }
            let mut after = self.block(entered, body)?;
            if after.is_bottom() {
                exhausted = false;
                break;
            }
            Self::reconcile(&mut after, &mut acc);
            let stabilized = match (
                after.box_bounds(self.set.conc),
                acc.box_bounds(self.set.conc),
            ) {
                (Some(na), Some(nacc)) => box_leq(&na, &nacc),
                _ => true,
            };
            if stabilized {
                exhausted = false;
                break;
            }
            acc = acc.join(&after, &self.set)?;
            cur = after;
        }
        if exhausted {
            self.warn(format!(
                "loop unroll bound ({}) exhausted; bounds may not cover later iterations",
                self.unroll_bound
            ));
        }
        let out = acc.guard(&cond.negated(), &self.set, &mut self.notes)?;
        self.drain_notes();
        Ok(out)
    }
}
