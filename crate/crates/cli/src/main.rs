use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use donorspin::constants::{donor_params, material_params, ConstantSet, DonorParams, DonorSpecies, Host, SI_EXCHANGE_A_T_NM};
use donorspin::effective_mass::{crossing_distance, exchange_coupling, ExchangeModel};
use donorspin::gate_stark::{flat_band_expansion, resonance_detuning, stark_coefficient, GateGeometry};
use donorspin::single_donor::{
    breit_rabi_levels, nuclear_resonance_frequency, sublattice_frequencies, FieldConfig, ResonanceVariant,
};
use donorspin::sweep::{self, format_sig, ExportFormat, ReportInputs, SweepSpec, SIG_DIGITS};
use donorspin::two_donor::{
    adiabatic_track, anticrossing_exchange, block_decompose, closed_form_eigs, nu_j, projected_reduced_hamiltonian,
    reduced_hamiltonian, two_donor_hamiltonian, NuJVariant, TrackPath, TwoDonorConfig, REDUCED_BASIS,
};
use donorspin::{eigvals_sym, Error, PhysicalConstants};

const EXIT_SPEC: u8 = 2;
const EXIT_FLAGGED: u8 = 3;

#[derive(Parser)]
#[command(name = "donorspin", version, about = "Donor nuclear-spin qubit calculator")]
struct Cli {
    /// Magnetic field, T
    #[arg(long = "B", global = true, default_value_t = 2.0, allow_negative_numbers = true)]
    b: f64,
    #[arg(long, global = true, value_enum, default_value_t = Material::Si)]
    material: Material,
    #[arg(long, global = true, default_value = "p31")]
    donor: String,
    #[arg(long, global = true, value_enum, default_value_t = Constants::Paper)]
    constants: Constants,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Material {
    Si,
    Ge,
}

#[derive(Clone, Copy, ValueEnum)]
enum Constants {
    Paper,
    Codata,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TwoDonorView {
    Spectrum,
    Blocks,
    Reduced,
    NuJ,
    Anticross,
}

#[derive(Subcommand)]
enum Command {
    /// Single-donor Breit–Rabi levels
    Levels {
        /// Dimensionless field X; overrides --B
        #[arg(long = "X")]
        x: Option<f64>,
    },
    /// Nuclear resonance frequency and sublattice lines
    Freq,
    /// Gate-induced resonance shift
    Stark {
        #[arg(long = "V", default_value_t = 1.0, allow_negative_numbers = true)]
        v: f64,
        #[arg(long = "V-fb", default_value_t = 0.0, allow_negative_numbers = true)]
        v_fb: f64,
        /// Gate radius, nm
        #[arg(long, default_value_t = 5.0)]
        a: f64,
        /// Donor depth, nm
        #[arg(long, default_value_t = 10.0)]
        c: f64,
    },
    /// Exchange coupling and crossing distance
    Exchange {
        /// Donor separation, nm
        #[arg(long)]
        l: Option<f64>,
        #[arg(long)]
        a_t: Option<f64>,
    },
    /// Coupled donor pair
    TwoDonor {
        /// Exchange, MHz
        #[arg(long = "J", default_value_t = 30e3)]
        j: f64,
        #[arg(long = "A-a")]
        a_a: Option<f64>,
        #[arg(long = "A-b")]
        a_b: Option<f64>,
        #[arg(long, value_enum, default_value_t = TwoDonorView::Spectrum)]
        view: TwoDonorView,
    },
    /// Follow reduced-sector labels through an exchange sweep
    Track {
        #[arg(long = "J-lo", default_value_t = 1e4)]
        j_lo: f64,
        #[arg(long = "J-hi", default_value_t = 1e5)]
        j_hi: f64,
        #[arg(long, default_value_t = 2000)]
        points: usize,
    },
    /// Run a parameter sweep
    Sweep {
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        spec: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
    },
    /// Computed vs published headline numbers
    Report {
        /// nu_A, crossing, nu_J, stark, flat-band, anticross-gap
        topic: String,
        /// Exchange for nu_J, MHz
        #[arg(long = "J", default_value_t = 30e3)]
        j: f64,
    },
}

enum Cell {
    Num(f64),
    Text(String),
}

type Row = Vec<(String, Cell)>;

fn num(name: &str, x: f64) -> (String, Cell) {
    (name.to_string(), Cell::Num(x))
}

fn text(name: &str, s: impl Into<String>) -> (String, Cell) {
    (name.to_string(), Cell::Text(s.into()))
}

fn render(rows: &[Row], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::new();
            if let Some(first) = rows.first() {
                out.push_str(&first.iter().map(|(k, _)| k.as_str()).collect::<Vec<_>>().join(","));
                out.push('\n');
            }
            for r in rows {
                let cells: Vec<String> = r
                    .iter()
                    .map(|(_, c)| match c {
                        Cell::Num(x) => format_sig(*x, SIG_DIGITS),
                        Cell::Text(s) => s.clone(),
                    })
                    .collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let objects: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let m: Map<String, Value> = r
                        .iter()
                        .map(|(k, c)| {
                            let v = match c {
                                Cell::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
                                Cell::Text(s) => Value::String(s.clone()),
                            };
                            (k.clone(), v)
                        })
                        .collect();
                    Value::Object(m)
                })
                .collect();
            let v = if objects.len() == 1 { objects.into_iter().next().unwrap() } else { Value::Array(objects) };
            serde_json::to_string_pretty(&v).expect("rows serialize") + "\n"
        }
    }
}

struct Outcome {
    text: String,
    flagged: bool,
}

impl Outcome {
    fn rows(rows: &[Row], format: Format) -> Self {
        Outcome { text: render(rows, format), flagged: false }
    }
}

struct Env {
    consts: PhysicalConstants,
    host: Host,
    donor: DonorParams,
    b: f64,
    format: Format,
}

impl Env {
    fn exchange_model(&self, a_t: Option<f64>) -> Result<ExchangeModel, Error> {
        let m = material_params(self.host);
        let default_a_t = match self.host {
            Host::Si => SI_EXCHANGE_A_T_NM,
            Host::Ge => m.a_t,
        };
        ExchangeModel::new(&self.consts, a_t.unwrap_or(default_a_t), m.eps_s)
    }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let host = match cli.material {
        Material::Si => Host::Si,
        Material::Ge => Host::Ge,
    };
    let set = match cli.constants {
        Constants::Paper => ConstantSet::Paper,
        Constants::Codata => ConstantSet::Codata,
    };
    let env = Env {
        consts: set.constants(),
        host,
        donor: donor_params(DonorSpecies::new(&cli.donor, host)?),
        b: cli.b,
        format: cli.format,
    };
    let c = &env.consts;
    let field = FieldConfig::new(env.b);
    Ok(match &cli.command {
        Command::Levels { x } => {
            let field = x.map_or(field, |x| FieldConfig::from_breit_rabi_x(c, &env.donor, x));
            let l = breit_rabi_levels(c, field, &env.donor);
            let rows: Vec<Row> = l
                .levels
                .iter()
                .map(|lv| vec![num("B", field.b), num("X", l.x), num("F", lv.f as f64), num("m_F", lv.m_f as f64), num("energy_MHz", lv.energy)])
                .collect();
            Outcome::rows(&rows, env.format)
        }
        Command::Freq => {
            let (plus, minus) = sublattice_frequencies(c, field, &env.donor);
            let row = vec![
                num("B", env.b),
                num("nu_A", nuclear_resonance_frequency(c, field, &env.donor, ResonanceVariant::Exact)),
                num("nu_A_asymptotic", nuclear_resonance_frequency(c, field, &env.donor, ResonanceVariant::Asymptotic)),
                num("nu_A_plus", plus),
                num("nu_A_minus", minus),
            ];
            Outcome::rows(&[row], env.format)
        }
        Command::Stark { v, v_fb, a, c: depth } => {
            let g = GateGeometry { a: *a, c: *depth, v: *v, v_fb: *v_fb };
            let nu_a = nuclear_resonance_frequency(c, field, &env.donor, ResonanceVariant::Exact);
            let d = resonance_detuning(&g, nu_a)?;
            let [c0, c1, c2] = flat_band_expansion(&g, nu_a)?;
            let row = vec![
                num("V", *v),
                num("V_FB", *v_fb),
                num("E_c", d.e_c),
                num("fraction", d.stark.fraction),
                num("delta_nu", d.delta_nu),
                num("coefficient", stark_coefficient(&g, nu_a)?),
                num("c0", c0),
                num("c1", c1),
                num("c2", c2),
                num("flag", if d.stark.flagged() { 1.0 } else { 0.0 }),
            ];
            Outcome { text: render(&[row], env.format), flagged: d.stark.flagged() }
        }
        Command::Exchange { l, a_t } => {
            let model = env.exchange_model(*a_t)?;
            let root = crossing_distance(c, field, &model)?;
            let mut row = vec![num("a_t", model.a_t), num("eps_s", model.eps_s), num("l_star", root.x)];
            let mut flagged = false;
            if let Some(l) = l {
                let e = exchange_coupling(*l, &model)?;
                flagged = !e.asymptotic;
                row.extend([num("l", *l), num("J", e.j), num("asymptotic", if e.asymptotic { 1.0 } else { 0.0 })]);
            }
            Outcome { text: render(&[row], env.format), flagged }
        }
        Command::TwoDonor { j, a_a, a_b, view } => {
            let a = env.donor.a_mhz;
            let cfg = TwoDonorConfig { b: env.b, j: *j, a_a: a_a.unwrap_or(a), a_b: a_b.unwrap_or(a), g_n: env.donor.g_n };
            let rows: Vec<Row> = match view {
                TwoDonorView::Spectrum => eigvals_sym(&two_donor_hamiltonian(c, &cfg))?
                    .iter()
                    .enumerate()
                    .map(|(k, e)| vec![num("index", k as f64), num("energy_MHz", *e)])
                    .collect(),
                TwoDonorView::Blocks => {
                    let d = block_decompose(&two_donor_hamiltonian(c, &cfg))?;
                    let mut rows = Vec::new();
                    for blk in &d.blocks {
                        for e in eigvals_sym(&blk.matrix)? {
                            rows.push(vec![num("projection", blk.projection as f64), num("dim", blk.indices.len() as f64), num("energy_MHz", e)]);
                        }
                    }
                    rows
                }
                TwoDonorView::Reduced => {
                    let published = reduced_hamiltonian(c, &cfg);
                    let projected = projected_reduced_hamiltonian(c, &cfg);
                    let mut rows = Vec::new();
                    for (i, bra) in REDUCED_BASIS.iter().enumerate() {
                        for (k, ket) in REDUCED_BASIS.iter().enumerate() {
                            rows.push(vec![
                                text("bra", bra.to_string()),
                                text("ket", ket.to_string()),
                                num("published", published.get(i, k)),
                                num("projected", projected.get(i, k)),
                            ]);
                        }
                    }
                    rows
                }
                TwoDonorView::NuJ => {
                    let variants = [
                        ("exact", NuJVariant::Exact),
                        ("weak_exchange", NuJVariant::WeakExchange),
                        ("at_crossing", NuJVariant::AtCrossing),
                        ("strong_exchange", NuJVariant::StrongExchange),
                    ];
                    let mut row = vec![num("J", *j)];
                    for (name, v) in variants {
                        row.push(num(&format!("nu_J_{name}"), nu_j(c, &cfg, v)?));
                    }
                    vec![row]
                }
                TwoDonorView::Anticross => {
                    let e = closed_form_eigs(c, &cfg)?;
                    vec![vec![
                        num("J", *j),
                        num("J_min_gap", anticrossing_exchange(c, env.b, cfg.g_n)),
                        num("E_sym_plus", e.sym_plus),
                        num("E_sym_minus", e.sym_minus),
                        num("E_anti_plus", e.anti_plus),
                        num("E_anti_minus", e.anti_minus),
                        num("gap_anti", e.anti_plus - e.anti_minus),
                    ]]
                }
            };
            Outcome::rows(&rows, env.format)
        }
        Command::Track { j_lo, j_hi, points } => {
            let a = env.donor.a_mhz;
            let path = TrackPath { b: env.b, a_a: a, a_b: a, g_n: env.donor.g_n, j_lo: *j_lo, j_hi: *j_hi, points: *points };
            let r = adiabatic_track(c, &path)?;
            let rows: Vec<Row> = r
                .outcomes
                .iter()
                .map(|o| {
                    vec![
                        text("initial", o.initial.to_string()),
                        text("final", o.final_label.to_string()),
                        num("initial_overlap", o.initial_overlap),
                        num("final_overlap", o.final_overlap),
                        num("initial_energy", o.initial_energy),
                        num("final_energy", o.final_energy),
                    ]
                })
                .collect();
            Outcome::rows(&rows, env.format)
        }
        Command::Sweep { spec, preset } => {
            let spec: SweepSpec = match (spec, preset) {
                (Some(path), _) => SweepSpec::from_file(path).map_err(|e| match e {
                    Error::Io(io) => Error::Spec(format!("{}: {io}", path.display())),
                    other => other,
                })?,
                (None, Some(name)) => sweep::preset(name)?,
                (None, None) => return Err(Error::Spec("need --spec or --preset".into())),
            };
            let constants = match cli.constants {
                Constants::Paper => "paper",
                Constants::Codata => "codata",
            };
            let material = match cli.material {
                Material::Si => "si",
                Material::Ge => "ge",
            };
            let table = sweep::run_sweep(&spec.with_defaults(&cli.donor, material, constants))?;
            for f in &table.meta.flagged_rows {
                eprintln!("row {} flagged: {}", f.row, f.reason);
            }
            let format = match env.format {
                Format::Csv => ExportFormat::Csv,
                Format::Json => ExportFormat::Json,
            };
            Outcome { text: table.render(format), flagged: table.has_flagged() }
        }
        Command::Report { topic, j } => {
            let r = sweep::report(topic, &ReportInputs { consts: env.consts, b: env.b, host, j: *j })?;
            match env.format {
                Format::Csv => Outcome { text: r.to_string(), flagged: false },
                Format::Json => Outcome {
                    text: serde_json::to_string_pretty(&r).expect("report serializes") + "\n",
                    flagged: false,
                },
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &out.text) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::FAILURE;
                }
            } else {
                print!("{}", out.text);
            }
            if out.flagged {
                ExitCode::from(EXIT_FLAGGED)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_SPEC)
        }
    }
}
