//! Command-line front end. Every definition file is UTF-8 JSON; the kind is
//! recognised from its fields (see [`Definition`]).

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::automata::edt0l::{edt0l_enumerate, EDT0LSystem};
use crate::automata::NFsa;
use crate::error::{Error, Result};
use crate::growth::{growth_enumerate, growth_series};
use crate::lattice::{IntVec, WeightFn};
use crate::polyhedral::{cube, PolyhedralSet};
use crate::semilinear::SemilinearSet;
use crate::vabgroup::{
    cwp_to_regular, geodesic_reps_oracle, nf_edt0l, rational_to_cwp, relative_growth, CWPSet, RawCWPSet,
    RelativeGrowth, RepKind, VAGroup,
};

/// A set definition file, tagged by `"kind"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SetDef {
    Polyhedral(PolyhedralSet),
    Semilinear(SemilinearSet),
    Cwp(RawCWPSet),
}

impl SetDef {
    fn validated(self) -> Result<Self> {
        Ok(match self {
            SetDef::Polyhedral(p) => SetDef::Polyhedral(PolyhedralSet::new(p.dim(), p.basics().to_vec())?),
            SetDef::Semilinear(s) => SetDef::Semilinear(SemilinearSet::new(s.dim(), s.components().to_vec())?),
            cwp => cwp,
        })
    }

    fn kind(&self) -> &'static str {
        match self {
            SetDef::Polyhedral(_) => "polyhedral",
            SetDef::Semilinear(_) => "semilinear",
            SetDef::Cwp(_) => "cwp",
        }
    }
}

/// Any definition file.
#[derive(Clone, Debug)]
pub enum Definition {
    /// Has `"transversal"`.
    Group(VAGroup),
    /// Has `"kind"`.
    Set(SetDef),
    /// Has `"tables"`.
    System(EDT0LSystem),
    /// Has `"edges"`.
    Automaton(NFsa),
}

impl Definition {
    pub fn parse(text: &str) -> Result<Definition> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let has = |k: &str| value.get(k).is_some();
        let parse_err = |e: serde_json::Error| Error::Parse(e.to_string());
        if has("kind") {
            let def: SetDef = serde_json::from_value(value).map_err(parse_err)?;
            return Ok(Definition::Set(def.validated()?));
        }
        if has("transversal") || has("k") {
            // shape errors are parse errors, invalid extension data is semantic
            let raw: crate::vabgroup::RawGroup = serde_json::from_value(value).map_err(parse_err)?;
            return Ok(Definition::Group(VAGroup::try_from(raw)?));
        }
        if has("tables") {
            return serde_json::from_value(value).map(Definition::System).map_err(parse_err);
        }
        if has("edges") {
            return serde_json::from_value(value).map(Definition::Automaton).map_err(parse_err);
        }
        Err(Error::Parse("unrecognised definition file".into()))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Definition::Group(_) => "group",
            Definition::Set(s) => s.kind(),
            Definition::System(_) => "edt0l",
            Definition::Automaton(_) => "automaton",
        }
    }

    pub fn to_json(&self) -> String {
        let s = match self {
            Definition::Group(g) => serde_json::to_string_pretty(g),
            Definition::Set(s) => serde_json::to_string_pretty(s),
            Definition::System(h) => serde_json::to_string_pretty(h),
            Definition::Automaton(a) => serde_json::to_string_pretty(a),
        };
        s.expect("definitions serialize") + "\n"
    }
}

/// Named objects loaded from definition files, named by file stem.
#[derive(Default, Debug)]
pub struct Workspace {
    pub groups: BTreeMap<String, Arc<VAGroup>>,
    pub sets: BTreeMap<String, SetDef>,
    pub automata: BTreeMap<String, NFsa>,
    pub systems: BTreeMap<String, EDT0LSystem>,
}

impl Workspace {
    /// Loads a file and returns the name it is stored under.
    pub fn load(&mut self, path: &Path) -> Result<String> {
        let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let def = Definition::parse(&text).map_err(|e| match e {
            Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })?;
        self.insert(name.clone(), def)?;
        Ok(name)
    }

    pub fn insert(&mut self, name: String, def: Definition) -> Result<()> {
        let taken = match &def {
            Definition::Group(_) => self.groups.contains_key(&name),
            Definition::Set(_) => self.sets.contains_key(&name),
            Definition::System(_) => self.systems.contains_key(&name),
            Definition::Automaton(_) => self.automata.contains_key(&name),
        };
        if taken {
            return Err(Error::Precondition(format!("duplicate {} named {name}", def.kind())));
        }
        match def {
            Definition::Group(g) => {
                self.groups.insert(name, Arc::new(g));
            }
            Definition::Set(s) => {
                self.sets.insert(name, s);
            }
            Definition::System(h) => {
                self.systems.insert(name, h);
            }
            Definition::Automaton(a) => {
                self.automata.insert(name, a);
            }
        }
        Ok(())
    }

    /// A group file, or a built-in name (`dinf`, `klein`, `z<k>`).
    fn group(&mut self, spec: &str) -> Result<Arc<VAGroup>> {
        if !Path::new(spec).exists() {
            if let Some(g) = VAGroup::builtin(spec) {
                return Ok(Arc::new(g));
            }
        }
        let name = self.load(Path::new(spec))?;
        self.groups.get(&name).cloned().ok_or_else(|| Error::Parse(format!("{spec} is not a group file")))
    }

    fn set(&mut self, path: &Path) -> Result<SetDef> {
        let name = self.load(path)?;
        self.sets.get(&name).cloned().ok_or_else(|| Error::Parse(format!("{} is not a set file", path.display())))
    }

    fn automaton(&mut self, path: &Path) -> Result<NFsa> {
        let name = self.load(path)?;
        self.automata
            .get(&name)
            .cloned()
            .ok_or_else(|| Error::Parse(format!("{} is not an automaton file", path.display())))
    }

    fn system(&mut self, path: &Path) -> Result<EDT0LSystem> {
        let name = self.load(path)?;
        self.systems
            .get(&name)
            .cloned()
            .ok_or_else(|| Error::Parse(format!("{} is not an EDT0L file", path.display())))
    }
}

#[derive(Parser, Debug)]
#[command(name = "vagrowth", version, about = "Rational sets and growth in virtually abelian groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Output {
    /// Write the main artifact here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and check definition files.
    Validate {
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        set: Vec<PathBuf>,
        #[arg(long)]
        automaton: Vec<PathBuf>,
        #[arg(long)]
        edt0l: Vec<PathBuf>,
    },
    /// Growth table and series of a group, a CWP set, or a set in Z^k.
    Growth {
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        set: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        radius: u64,
        /// Fit a rational function to the table (group mode).
        #[arg(long)]
        fit: bool,
        #[arg(long, default_value_t = 5)]
        margin: usize,
        /// Comma-separated weights for sets in Z^k.
        #[arg(long, value_delimiter = ',')]
        weights: Vec<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Convert a set in Z^k between polyhedral and semilinear form.
    Convert {
        #[arg(long)]
        set: PathBuf,
        #[arg(long, value_enum)]
        to: SetForm,
        #[command(flatten)]
        output: Output,
    },
    /// EDT0L system for the normal forms of a CWP set.
    NfEdt0l {
        #[arg(long)]
        group: String,
        #[arg(long)]
        set: PathBuf,
        /// Also print the language up to this length.
        #[arg(long)]
        enumerate: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Geodesic representatives of elements, cosets or conjugacy classes.
    Reps {
        #[arg(long)]
        group: String,
        #[arg(long, value_enum, default_value_t = RepChoice::Elements)]
        kind: RepChoice,
        /// Subgroup generators as comma-separated words.
        #[arg(long, value_delimiter = ',')]
        subgroup: Vec<String>,
        #[arg(long, default_value_t = 4)]
        radius: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Image of a rational language as a CWP set.
    RationalToCwp {
        #[arg(long)]
        group: String,
        #[arg(long)]
        automaton: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// A regular language mapping onto a CWP set.
    CwpToRegular {
        #[arg(long)]
        group: String,
        #[arg(long)]
        set: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// List words of an automaton or EDT0L system, or points of a set.
    Enumerate {
        #[arg(long)]
        automaton: Option<PathBuf>,
        #[arg(long)]
        edt0l: Option<PathBuf>,
        #[arg(long)]
        set: Option<PathBuf>,
        #[arg(long)]
        group: Option<String>,
        #[arg(long, default_value_t = 6)]
        maxlen: usize,
        /// Box radius for set points.
        #[arg(long, default_value_t = 5)]
        radius: i64,
        #[command(flatten)]
        output: Output,
    },
    /// Graphviz rendering of an automaton or of an EDT0L control automaton.
    EmitDot {
        #[arg(long)]
        automaton: Option<PathBuf>,
        #[arg(long)]
        edt0l: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SetForm {
    Polyhedral,
    Semilinear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RepChoice {
    Elements,
    Cosets,
    Conjugacy,
}

/// Runs one command. Returns the exit status: 0 on success, 1 on parse or
/// I/O errors, 2 on semantic errors.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| dispatch(cli.command, stdout)));
    match outcome {
        Ok(Ok(())) => 0,
        Ok(Err(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_parse_error() {
                1
            } else {
                2
            }
        }
        Err(_) => {
            let _ = writeln!(stderr, "error: internal failure while processing the input");
            2
        }
    }
}

fn emit(output: &Output, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(|e| Error::Parse(e.to_string())),
    }
}

fn say(stdout: &mut dyn Write, text: &str) -> Result<()> {
    stdout.write_all(text.as_bytes()).map_err(|e| Error::Parse(e.to_string()))
}

fn cwp(group: &Arc<VAGroup>, def: SetDef) -> Result<CWPSet> {
    match def {
        SetDef::Cwp(raw) => CWPSet::from_raw(group.clone(), &raw),
        other => Err(Error::Precondition(format!("expected a cwp set, found a {} set", other.kind()))),
    }
}

fn spaced(alphabet: &[String], word: &[u32]) -> String {
    word.iter().map(|&x| alphabet[x as usize].as_str()).collect::<Vec<_>>().join(" ")
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<()> {
    let mut ws = Workspace::default();
    match command {
        Command::Validate { group, set, automaton, edt0l } => {
            let g = group.map(|s| ws.group(&s)).transpose()?;
            if let Some(g) = &g {
                g.check_generation()?;
                say(stdout, &format!("ok group {g}\n"))?;
            }
            for path in &set {
                let def = ws.set(path)?;
                if let (SetDef::Cwp(_), Some(g)) = (&def, &g) {
                    cwp(g, def.clone())?;
                }
                say(stdout, &format!("ok {} set {}\n", def.kind(), path.display()))?;
            }
            for path in &automaton {
                let a = ws.automaton(path)?;
                say(stdout, &format!("ok automaton {} ({} states, arity {})\n", path.display(), a.num_states(), a.arity()))?;
            }
            for path in &edt0l {
                ws.system(path)?;
                say(stdout, &format!("ok edt0l {}\n", path.display()))?;
            }
        }
        Command::Growth { group, set, radius, fit, margin, weights, output } => match group {
            Some(spec) => {
                let g = ws.group(&spec)?;
                let u = match &set {
                    Some(path) => cwp(&g, ws.set(path)?)?,
                    None => CWPSet::full(g.clone()),
                };
                let RelativeGrowth::Table(table) = relative_growth(&u, radius, None)? else { unreachable!() };
                if fit {
                    let RelativeGrowth::Series(s) = relative_growth(&u, radius, Some(margin))? else { unreachable!() };
                    say(stdout, &format!("series\t{s}\n"))?;
                }
                emit(&output, &table.to_tsv(), stdout)?;
            }
            None => {
                let path = set.ok_or(Error::Parse("growth needs --group or --set".into()))?;
                let s = match ws.set(&path)? {
                    SetDef::Semilinear(s) => s,
                    SetDef::Polyhedral(p) => SemilinearSet::from_polyhedral(&p),
                    SetDef::Cwp(_) => return Err(Error::Precondition("a cwp set needs --group".into())),
                };
                let w = if weights.is_empty() { WeightFn::unit(s.dim()) } else { WeightFn::new(weights)? };
                let series = growth_series(&s, &w)?;
                say(stdout, &format!("series\t{series}\n"))?;
                emit(&output, &growth_enumerate(&s, &w, radius as usize)?.to_tsv(), stdout)?;
            }
        },
        Command::Convert { set, to, output } => {
            let def = match (ws.set(&set)?, to) {
                (SetDef::Polyhedral(p), SetForm::Semilinear) => SetDef::Semilinear(SemilinearSet::from_polyhedral(&p)),
                (SetDef::Semilinear(s), SetForm::Polyhedral) => SetDef::Polyhedral(s.to_polyhedral()),
                (SetDef::Cwp(_), _) => return Err(Error::Precondition("cwp sets are already polyhedral".into())),
                (same, _) => same,
            };
            emit(&output, &Definition::Set(def).to_json(), stdout)?;
        }
        Command::NfEdt0l { group, set, enumerate, output } => {
            let g = ws.group(&group)?;
            let u = cwp(&g, ws.set(&set)?)?;
            let h = nf_edt0l(&u)?;
            emit(&output, &Definition::System(h.clone()).to_json(), stdout)?;
            if let Some(n) = enumerate {
                let mut text = String::new();
                for w in edt0l_enumerate(&h, n)? {
                    text += &spaced(h.alphabet(), &w);
                    text.push('\n');
                }
                say(stdout, &text)?;
            }
        }
        Command::Reps { group, kind, subgroup, radius, output } => {
            let g = ws.group(&group)?;
            let kind = match kind {
                RepChoice::Elements => RepKind::Elements,
                RepChoice::Conjugacy => RepKind::ConjugacyClasses,
                RepChoice::Cosets => RepKind::Cosets(
                    subgroup.iter().map(|w| Ok(g.eval_indices(&g.parse_word(w)?))).collect::<Result<_>>()?,
                ),
            };
            let reps = geodesic_reps_oracle(&g, kind, radius)?;
            emit(&output, &reps.to_text(&g), stdout)?;
        }
        Command::RationalToCwp { group, automaton, output } => {
            let g = ws.group(&group)?;
            let u = rational_to_cwp(&g, &ws.automaton(&automaton)?)?;
            emit(&output, &Definition::Set(SetDef::Cwp(u.to_raw())).to_json(), stdout)?;
        }
        Command::CwpToRegular { group, set, output } => {
            let g = ws.group(&group)?;
            let a = cwp_to_regular(&cwp(&g, ws.set(&set)?)?)?;
            emit(&output, &Definition::Automaton(a).to_json(), stdout)?;
        }
        Command::Enumerate { automaton, edt0l, set, group, maxlen, radius, output } => {
            let mut text = String::new();
            if let Some(path) = automaton {
                let a = ws.automaton(&path)?;
                for t in a.enumerate(maxlen) {
                    text += &a.render_tuple(&t);
                    text.push('\n');
                }
            } else if let Some(path) = edt0l {
                let h = ws.system(&path)?;
                for w in edt0l_enumerate(&h, maxlen)? {
                    text += &spaced(h.alphabet(), &w);
                    text.push('\n');
                }
            } else if let Some(path) = set {
                let def = ws.set(&path)?;
                let points: Vec<String> = match (def, group) {
                    (SetDef::Cwp(raw), Some(spec)) => {
                        let g = ws.group(&spec)?;
                        let u = CWPSet::from_raw(g.clone(), &raw)?;
                        u.elements_in_box(radius)?.iter().map(|x| g.fmt_element(x)).collect()
                    }
                    (SetDef::Cwp(_), None) => return Err(Error::Precondition("a cwp set needs --group".into())),
                    (SetDef::Polyhedral(p), _) => box_points(&p, radius)?,
                    (SetDef::Semilinear(s), _) => box_points(&s.to_polyhedral(), radius)?,
                };
                for p in points {
                    text += &p;
                    text.push('\n');
                }
            } else {
                return Err(Error::Parse("enumerate needs --automaton, --edt0l or --set".into()));
            }
            emit(&output, &text, stdout)?;
        }
        Command::EmitDot { automaton, edt0l, output } => {
            let a = match (automaton, edt0l) {
                (Some(path), _) => ws.automaton(&path)?,
                (None, Some(path)) => ws.system(&path)?.control().clone(),
                (None, None) => return Err(Error::Parse("emit-dot needs --automaton or --edt0l".into())),
            };
            emit(&output, &a.to_dot(), stdout)?;
        }
    }
    Ok(())
}

fn box_points(p: &PolyhedralSet, r: i64) -> Result<Vec<String>> {
    let (lo, hi) = cube(p.dim(), r);
    Ok(p.enumerate_box(&lo, &hi)?.iter().map(IntVec::to_string).collect())
}
