//! The `hypervar` command line.
//!
//! Exit status: 0 on success, 1 when `verify-paper` finds an exact
//! contradiction, 2 on usage or input errors.

use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::catalog::{self, BAND_NAMES, CATALOG_NAMES};
use crate::error::{Error, Result};
use crate::finalg::{is_proper_derived_algebra, FiniteAlgebra, MODEL_SIZE_GUARD};
use crate::freealg::{describe_model, Analyzer, Config, Decision, Refutation, VarietyPresentation};
use crate::hyper::Hypersubstitution;
use crate::lattice::{default_band_hyps, export_lattice_dot};
use crate::report::verify_paper;
use crate::term::{print_term, var_name, Identity, Signature};
use crate::variety::Verdict;

#[derive(Parser, Debug)]
#[command(name = "hypervar", version, about = "Derived varieties, fluidity and solidity")]
struct Cli {
    /// Largest free-algebra rank used to decide identities.
    #[arg(short = 'n', long = "free-rank", global = true, default_value_t = 3)]
    free_rank: usize,
    /// Largest carrier searched for countermodels.
    #[arg(long = "max-model-size", global = true, default_value_t = 4)]
    max_model_size: usize,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide an identity in a variety.
    Decide { variety: String, identity: String },
    /// The free algebra on `-n` generators.
    Free {
        variety: String,
        /// Print the operation tables.
        #[arg(long)]
        table: bool,
    },
    /// Derive a finite algebra read from a model file.
    DeriveAlgebra {
        model: String,
        #[arg(long = "hyp", required = true)]
        hyp: Vec<String>,
    },
    /// Describe a derived variety, optionally comparing it with another.
    DeriveVariety {
        variety: String,
        #[arg(long = "hyp", required = true)]
        hyp: Vec<String>,
        #[arg(long)]
        equals: Option<String>,
    },
    /// Hypersubstitutions modulo a variety.
    HypClasses { variety: String },
    /// Models of a variety up to `--max-model-size`.
    Models { variety: String },
    /// Whether the variety contains no proper derived variety.
    Fluid { variety: String },
    /// Whether the variety contains all its derived varieties.
    Solid { variety: String },
    /// Inclusions and derivations among catalog varieties as DOT.
    LatticeDot {
        #[arg(long, value_enum, default_value_t = CatalogChoice::Bands)]
        catalog: CatalogChoice,
    },
    /// Check every claim of the regression suite.
    VerifyPaper,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CatalogChoice {
    Bands,
    All,
}

/// A catalog name, or else a path to a variety file.
pub fn load_variety(name_or_path: &str) -> Result<VarietyPresentation> {
    if let Ok(v) = catalog::lookup(name_or_path) {
        return Ok(v);
    }
    let path = Path::new(name_or_path);
    if !path.exists() {
        return Err(Error::UnknownVariety(name_or_path.to_string()));
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::File {
        path: name_or_path.to_string(),
        message: e.to_string(),
    })?;
    catalog::parse_variety(&text).map_err(|e| Error::File {
        path: name_or_path.to_string(),
        message: e.to_string(),
    })
}

pub fn load_hyp(bindings: &[String], sig: &Signature) -> Result<Hypersubstitution> {
    let parts: Vec<&str> = bindings
        .iter()
        .flat_map(|b| b.split([';', '\n']))
        .map(str::trim)
        .filter(|b| !b.is_empty())
        .collect();
    Hypersubstitution::from_bindings(&parts, sig)
}

fn verdict_json(v: &Verdict, sig: &Signature) -> Value {
    json!({
        "value": v.value,
        "certainty": v.certainty.to_string(),
        "classes_checked": v.classes_checked,
        "witnesses": v.witnesses.iter().map(|w| w.describe(sig)).collect::<Vec<_>>(),
    })
}

fn verdict_text(label: &str, v: &Verdict, sig: &Signature) -> String {
    let mut out = format!("{label}: {} ({})", v.value, v.certainty);
    if v.classes_checked > 0 {
        out.push_str(&format!("; classes checked: {}", v.classes_checked));
    }
    out.push('\n');
    for w in &v.witnesses {
        out.push_str(&format!("  {}\n", w.describe(sig)));
    }
    out
}

fn assignment_text(asg: &[(u32, usize)]) -> String {
    asg.iter()
        .map(|(v, e)| format!("{}={e}", var_name(*v)))
        .collect::<Vec<_>>()
        .join(", ")
}

struct Session<'a> {
    an: Analyzer,
    json: bool,
    out: &'a mut dyn Write,
}

impl Session<'_> {
    fn emit(&mut self, text: &str, value: Value) -> Result<()> {
        let body = if self.json {
            serde_json::to_string_pretty(&value).expect("json value") + "\n"
        } else {
            text.to_string()
        };
        self.out.write_all(body.as_bytes()).map_err(|e| Error::File {
            path: "<stdout>".into(),
            message: e.to_string(),
        })
    }

    fn decide(&mut self, variety: &str, identity: &str) -> Result<i32> {
        let v = load_variety(variety)?;
        let id = Identity::parse(identity, &v.sig)?;
        let decision = self.an.decide(&v, &id)?;
        let shown = id.display(&v.sig);
        let (text, value) = match &decision {
            Decision::Valid => ("Valid\n".to_string(), json!({"verdict": "Valid"})),
            Decision::Unknown {
                free_rank,
                model_size,
                reason,
            } => (
                format!("Unknown; free rank {free_rank}, models up to size {model_size}: {reason}\n"),
                json!({"verdict": "Unknown", "free_rank": free_rank, "model_size": model_size, "reason": reason}),
            ),
            Decision::Invalid(refutation) => {
                let countermodel = match refutation {
                    Refutation::Countermodel { model, assignment } => Some((model.clone(), assignment.clone())),
                    Refutation::FreeAlgebra { .. } => self.an.find_countermodel(&v, &id)?,
                };
                let mut parts = vec!["Invalid".to_string()];
                let mut details = String::new();
                let mut value = json!({"verdict": "Invalid"});
                if let Some((model, asg)) = &countermodel {
                    parts.push(format!("countermodel: size {} {}", model.size(), describe_model(model)));
                    details.push_str(&format!("  countermodel at {}:\n", assignment_text(asg)));
                    for line in model.to_model_text().lines() {
                        details.push_str(&format!("    {line}\n"));
                    }
                    value["countermodel"] = json!({
                        "size": model.size(),
                        "kind": describe_model(model),
                        "assignment": assignment_text(asg),
                        "model": model.to_model_text(),
                    });
                }
                if let Refutation::FreeAlgebra { rank, lhs, rhs } = refutation {
                    parts.push(format!("free-algebra witness at n={rank}"));
                    let (l, r) = (print_term(lhs, &v.sig, true), print_term(rhs, &v.sig, true));
                    details.push_str(&format!("  normal forms: {l} != {r}\n"));
                    value["free_algebra"] = json!({"rank": rank, "lhs": l, "rhs": r});
                }
                (format!("{}\n{details}", parts.join("; ")), value)
            }
        };
        let mut value = value;
        value["variety"] = json!(v.name);
        value["identity"] = json!(shown);
        self.emit(&text, value)?;
        Ok(0)
    }

    fn free(&mut self, variety: &str, table: bool) -> Result<i32> {
        let v = load_variety(variety)?;
        let n = self.an.config().free_rank;
        let f = self.an.free_algebra(&v, n)?;
        let reprs: Vec<String> = f.repr_terms.iter().map(|t| print_term(t, &v.sig, true)).collect();
        let gens: Vec<String> = f.generators.iter().map(|g| g.to_string()).collect();
        let mut text = format!(
            "free algebra of {} on {n} generators: {} elements ({:?})\ngenerators: {}\n",
            v.name,
            f.size(),
            f.exactness,
            gens.join(" ")
        );
        if table {
            text.push_str(&f.base.to_model_text());
        }
        for (e, r) in reprs.iter().enumerate() {
            text.push_str(&format!("repr: {e} {r}\n"));
        }
        let mut value = json!({
            "variety": v.name,
            "rank": n,
            "size": f.size(),
            "exactness": format!("{:?}", f.exactness),
            "generators": f.generators,
            "repr": reprs,
        });
        if table {
            value["table"] = json!(f.base.to_model_text());
        }
        self.emit(&text, value)?;
        Ok(0)
    }

    fn derive_algebra(&mut self, model: &str, hyp: &[String]) -> Result<i32> {
        let text = std::fs::read_to_string(model).map_err(|e| Error::File {
            path: model.to_string(),
            message: e.to_string(),
        })?;
        let a = FiniteAlgebra::parse_model(&text, None).map_err(|e| Error::File {
            path: model.to_string(),
            message: e.to_string(),
        })?;
        let sigma = load_hyp(hyp, a.sig())?;
        let derived = a.derived(&sigma)?;
        let proper = is_proper_derived_algebra(&a, &sigma)?;
        let text = format!("{}proper: {proper}\n", derived.to_model_text());
        self.emit(
            &text,
            json!({"hyp": sigma.to_string(), "model": derived.to_model_text(), "proper": proper}),
        )?;
        Ok(0)
    }

    fn derive_variety(&mut self, variety: &str, hyp: &[String], equals: Option<&str>) -> Result<i32> {
        let v = load_variety(variety)?;
        let sigma = load_hyp(hyp, &v.sig)?;
        let mut text = format!("{}_σ for [{sigma}]\n", v.name);
        let mut sizes = Vec::new();
        let lowest = usize::from(!v.sig.has_nullary());
        for n in lowest..=self.an.config().free_rank {
            let f = self.an.derived_free_algebra(&v, &sigma, n)?;
            text.push_str(&format!("free algebra on {n} generators: {} elements\n", f.size()));
            sizes.push(json!({"rank": n, "size": f.size()}));
        }
        let inside = self.an.derived_included_in(&v, &sigma, &v)?;
        let proper = self.an.is_proper_derived_variety(&v, &sigma)?;
        text.push_str(&verdict_text(&format!("inside {}", v.name), &inside, &v.sig));
        text.push_str(&verdict_text("proper", &proper, &v.sig));
        let mut value = json!({
            "variety": v.name,
            "hyp": sigma.to_string(),
            "free_sizes": sizes,
            "inside": verdict_json(&inside, &v.sig),
            "proper": verdict_json(&proper, &v.sig),
        });
        if let Some(w) = equals {
            let w = load_variety(w)?;
            let eq = self.an.equals_derived(&v, &sigma, &w)?;
            text.push_str(&verdict_text(&format!("equals {}", w.name), &eq, &v.sig));
            value["equals"] = json!({"variety": w.name, "verdict": verdict_json(&eq, &v.sig)});
        }
        self.emit(&text, value)?;
        Ok(0)
    }

    fn hyp_classes(&mut self, variety: &str) -> Result<i32> {
        let v = load_variety(variety)?;
        let classes = self.an.enumerate_hyp_classes(&v)?;
        let mut text = format!("{} classes modulo {}\n", classes.len(), v.name);
        let mut list = Vec::new();
        for (i, c) in classes.iter().enumerate() {
            let mark = if c.trivial { " (trivial)" } else { "" };
            text.push_str(&format!("{i}: {}{mark}\n", c.sigma));
            list.push(json!({"index": i, "hyp": c.sigma.to_string(), "trivial": c.trivial}));
        }
        self.emit(&text, json!({"variety": v.name, "classes": list}))?;
        Ok(0)
    }

    fn models(&mut self, variety: &str) -> Result<i32> {
        let v = load_variety(variety)?;
        let m = self.an.config().max_model_size;
        let models = self.an.models(&v, m)?;
        let mut text = format!("{} models of {} up to size {m}\n", models.len(), v.name);
        let mut list = Vec::new();
        for (i, a) in models.iter().enumerate() {
            text.push_str(&format!("# model {i}: {}\n{}", describe_model(a), a.to_model_text()));
            list.push(json!({"size": a.size(), "kind": describe_model(a), "model": a.to_model_text()}));
        }
        self.emit(&text, json!({"variety": v.name, "max_size": m, "models": list}))?;
        Ok(0)
    }

    fn property(&mut self, variety: &str, fluid: bool) -> Result<i32> {
        let v = load_variety(variety)?;
        let (label, verdict) = if fluid {
            ("fluid", self.an.is_fluid(&v)?)
        } else {
            ("solid", self.an.is_solid(&v)?)
        };
        let text = verdict_text(label, &verdict, &v.sig);
        self.emit(&text, json!({"variety": v.name, label: verdict_json(&verdict, &v.sig)}))?;
        Ok(0)
    }

    fn lattice(&mut self, choice: CatalogChoice) -> Result<i32> {
        let names: &[&str] = match choice {
            CatalogChoice::Bands => &BAND_NAMES,
            CatalogChoice::All => &CATALOG_NAMES,
        };
        let mut vs: Vec<VarietyPresentation> = Vec::new();
        if matches!(choice, CatalogChoice::Bands) {
            vs.push(catalog::lookup("TRIV")?);
        }
        for n in names {
            vs.push(catalog::lookup(n)?);
        }
        vs.retain(|v| v.sig == Signature::band());
        let dot = export_lattice_dot(&self.an, &vs, &default_band_hyps())?;
        self.emit(&dot, json!({"dot": dot}))?;
        Ok(0)
    }

    fn verify(&mut self) -> Result<i32> {
        let report = verify_paper(&self.an)?;
        let body = if self.json { report.to_json() } else { report.to_text() };
        self.out.write_all(body.as_bytes()).map_err(|e| Error::File {
            path: "<stdout>".into(),
            message: e.to_string(),
        })?;
        Ok(report.exit_code())
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    if cli.max_model_size > MODEL_SIZE_GUARD {
        let _ = writeln!(
            err,
            "error: {}",
            Error::ModelSizeGuard {
                requested: cli.max_model_size,
                guard: MODEL_SIZE_GUARD,
            }
        );
        return 2;
    }
    let an = Analyzer::new(Config {
        free_rank: cli.free_rank,
        max_model_size: cli.max_model_size,
        ..Config::default()
    });
    let mut session = Session {
        an,
        json: cli.json,
        out,
    };
    let result = match &cli.command {
        Command::Decide { variety, identity } => session.decide(variety, identity),
        Command::Free { variety, table } => session.free(variety, *table),
        Command::DeriveAlgebra { model, hyp } => session.derive_algebra(model, hyp),
        Command::DeriveVariety { variety, hyp, equals } => {
            session.derive_variety(variety, hyp, equals.as_deref())
        }
        Command::HypClasses { variety } => session.hyp_classes(variety),
        Command::Models { variety } => session.models(variety),
        Command::Fluid { variety } => session.property(variety, true),
        Command::Solid { variety } => session.property(variety, false),
        Command::LatticeDot { catalog } => session.lattice(*catalog),
        Command::VerifyPaper => session.verify(),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
