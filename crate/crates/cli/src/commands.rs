use std::fs;
use std::path::{Path, PathBuf};

use kappamu_core::catalog::{self, FAMILIES};
use kappamu_core::contact::check_structure_isomorphism;
use kappamu_core::format::{AlgebraFile, Definition, LoadedDefinition, MapFile};
use kappamu_core::{
    AlmostContactStructure, CheckRecord, Error as CoreError, MetricLieAlgebra, MuValue, QSqrt2, Scalar, SolitonStatus,
    Status, Subspace, VerificationReport,
};
use serde_json::json;
use thiserror::Error;

/// Residual tolerance for float-backend verdicts.
pub const FLOAT_TOL: f64 = 1e-9;

/// Input errors (exit code 2). Check failures are reported, not raised.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Input {
        path: PathBuf,
        #[source]
        source: CoreError,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub enum Output {
    Report {
        command: String,
        inputs: Vec<Vec<u8>>,
        report: VerificationReport,
    },
    Document(String),
}

pub struct Input {
    pub path: PathBuf,
    pub bytes: Vec<u8>,
    pub file: AlgebraFile,
}

impl Input {
    pub fn read(path: &Path) -> CliResult<Self> {
        let bytes = fs::read(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let text = String::from_utf8_lossy(&bytes);
        let file = AlgebraFile::parse(&text).map_err(|source| CliError::Input {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(Self {
            path: path.to_path_buf(),
            bytes,
            file,
        })
    }

    pub fn load(&self) -> CliResult<LoadedDefinition> {
        self.file.load().map_err(|source| CliError::Input {
            path: self.path.clone(),
            source,
        })
    }

    fn wrap(&self, source: CoreError) -> CliError {
        CliError::Input {
            path: self.path.clone(),
            source,
        }
    }
}

/// Runs `$body` with `$def` bound to the definition in its own backend.
macro_rules! with_backend {
    ($loaded:expr, $def:ident => $body:expr) => {
        match $loaded {
            LoadedDefinition::Exact(d) => {
                let $def = *d;
                $body
            }
            LoadedDefinition::Float(d) => {
                let $def = *d;
                $body
            }
        }
    };
}

fn report_output(command: &str, inputs: &[&Input], report: VerificationReport) -> Output {
    Output::Report {
        command: command.to_string(),
        inputs: inputs.iter().map(|i| i.bytes.clone()).collect(),
        report,
    }
}

fn contact_of<'a, S: Scalar>(input: &Input, def: &'a Definition<S>) -> CliResult<&'a AlmostContactStructure<S>> {
    def.contact
        .as_ref()
        .ok_or_else(|| input.wrap(CoreError::Format("file has no contact section".into())))
}

fn within<S: Scalar>(v: &S) -> bool {
    v.within(FLOAT_TOL)
}

pub fn catalog_list() -> Output {
    let families: Vec<_> = FAMILIES
        .iter()
        .map(|f| {
            json!({
                "name": f.name,
                "params": f.params,
                "constraints": f.constraints,
                "summary": f.summary,
                "kind": "algebra",
            })
        })
        .chain(std::iter::once(json!({
            "name": MAP_FAMILY,
            "params": ["n"],
            "constraints": "n >= 2",
            "summary": "linear map s_N -> g_{0,2} (map file, column k is the image of basis vector k)",
            "kind": "map",
        })))
        .collect();
    let doc = json!({ "families": families });
    Output::Document(serde_json::to_string_pretty(&doc).expect("json value serializes"))
}

pub fn catalog_list_quiet() -> String {
    let mut out = String::new();
    for f in FAMILIES {
        out.push_str(&format!("{} [{}]: {}\n", f.name, f.params.join(", "), f.constraints));
    }
    out.push_str(&format!("{MAP_FAMILY} [n]: n >= 2\n"));
    out
}

pub const MAP_FAMILY: &str = "s-n-isomorphism";

#[derive(Debug, Default, Clone)]
pub struct EmitParams {
    pub alpha: Option<String>,
    pub beta: Option<String>,
    pub n: Option<usize>,
    pub c: Option<String>,
    pub m: Option<usize>,
    pub seed: Option<u64>,
}

fn need<T: Clone>(v: &Option<T>, name: &str, family: &str) -> CliResult<T> {
    v.clone()
        .ok_or_else(|| CliError::Usage(format!("family {family} needs --{name}")))
}

fn scalar_arg<S: Scalar>(text: &str, name: &str) -> CliResult<S> {
    S::parse_scalar(text).map_err(|e| CliError::Usage(format!("--{name}: {e}")))
}

/// Builds the JSON for a catalog family in backend `S`; warnings go to the
/// returned list.
fn emit_in<S: Scalar>(family: &str, p: &EmitParams, warnings: &mut Vec<String>) -> CliResult<String> {
    let def = match family {
        "g-alpha-beta" => {
            let alpha: S = scalar_arg(&need(&p.alpha, "alpha", family)?, "alpha")?;
            let beta: S = scalar_arg(&need(&p.beta, "beta", family)?, "beta")?;
            warnings.extend(catalog::g_alpha_beta_warnings(&alpha, &beta));
            Definition::from_contact(catalog::build_g_alpha_beta(&alpha, &beta, need(&p.n, "n", family)?)?)
        }
        "solvable-model" => {
            let c: S = scalar_arg(&need(&p.c, "c", family)?, "c")?;
            let model = catalog::build_solvable_model(&c, need(&p.m, "m", family)?)?;
            Definition::new(model.metric).with_complex(model.j)
        }
        "s-n" => Definition::from_contact(catalog::build_s_n::<S>(need(&p.n, "n", family)?)?.structure),
        "so2n-iwasawa" => {
            let c: S = scalar_arg(&need(&p.c, "c", family)?, "c")?;
            let ma = catalog::build_so2n_iwasawa(need(&p.n, "n", family)?, &c)?;
            Definition::new(ma.model_metric()?)
        }
        "heisenberg" => Definition::new(catalog::heisenberg::<S>()),
        MAP_FAMILY => {
            let m = catalog::s_n_isomorphism_map::<S>(need(&p.n, "n", family)?)?;
            return Ok(MapFile::of(&m).to_json());
        }
        other => return Err(CliError::Usage(format!("unknown family {other:?}; see `catalog list`"))),
    };
    Ok(def.to_file().to_json())
}

pub fn catalog_emit(family: &str, field: &str, p: &EmitParams, warnings: &mut Vec<String>) -> CliResult<Output> {
    let text = if family == "random-solvable" {
        if field != f64::FIELD_TAG {
            return Err(CliError::Usage(
                "random-solvable is only available with --field float64".into(),
            ));
        }
        let seed = need(&p.seed, "seed", family)?;
        Definition::new(catalog::random_solvable(seed)).to_file().to_json()
    } else if field == QSqrt2::FIELD_TAG {
        emit_in::<QSqrt2>(family, p, warnings)?
    } else if field == f64::FIELD_TAG {
        emit_in::<f64>(family, p, warnings)?
    } else {
        return Err(CliError::Usage(format!("unknown field {field:?}")));
    };
    Ok(Output::Document(text))
}

pub fn check_jacobi(input: &Input) -> CliResult<Output> {
    fn run<S: Scalar>(input: &Input) -> CliResult<VerificationReport> {
        let alg = input.file.to_lie_algebra::<S>().map_err(|e| input.wrap(e))?;
        let mut r = alg.validate_jacobi();
        if r.passed() {
            let s = alg.series_analysis();
            r.push(
                CheckRecord::pass("series")
                    .with_witness(format!("derived series dims: {:?}", s.derived_dims))
                    .with_witness(format!("lower central series dims: {:?}", s.lower_central_dims))
                    .with_witness(format!("solvable: {}", s.is_solvable))
                    .with_witness(format!("nilpotent: {}", s.is_nilpotent)),
            );
        }
        Ok(r)
    }
    let r = if input.file.field == QSqrt2::FIELD_TAG {
        run::<QSqrt2>(input)?
    } else {
        run::<f64>(input)?
    };
    Ok(report_output("check jacobi", &[input], r))
}

pub fn check_contact(input: &Input) -> CliResult<Output> {
    let r = with_backend!(input.load()?, def => {
        let s = contact_of(input, &def)?;
        let mut r = s.validate_structure();
        if r.passed() {
            r.extend(s.h_properties());
        }
        r
    });
    Ok(report_output("check contact", &[input], r))
}

fn einstein_record<S: Scalar>(m: &MetricLieAlgebra<S>) -> CheckRecord {
    match m.einstein_check() {
        Some(l) => CheckRecord::pass("einstein").with_scalar("lambda", &l),
        None => CheckRecord::fail("einstein").with_witness("Ricci operator is not a multiple of the identity"),
    }
}

pub fn check_einstein(input: &Input) -> CliResult<Output> {
    let r = with_backend!(input.load()?, def => {
        let mut r = VerificationReport::new(def.metric.name());
        r.push(einstein_record(&def.metric));
        r
    });
    Ok(report_output("check einstein", &[input], r))
}

pub fn check_soliton(input: &Input) -> CliResult<Output> {
    let r = with_backend!(input.load()?, def => {
        let mut r = VerificationReport::new(def.metric.name());
        r.push(def.metric.algebraic_soliton_solve().to_record());
        r
    });
    Ok(report_output("check soliton", &[input], r))
}

pub fn check_lauret(input: &Input, c: Option<&str>) -> CliResult<Output> {
    fn run<S: Scalar>(def: &Definition<S>, c: Option<&str>) -> CliResult<VerificationReport> {
        let m = &def.metric;
        let mut r = VerificationReport::new(m.name());
        let c: S = match c {
            Some(t) => scalar_arg(t, "c")?,
            None => {
                let v = m.algebraic_soliton_solve();
                if v.status == SolitonStatus::NoneFound {
                    r.push(v.to_record());
                    return Ok(r);
                }
                v.soliton_constant
            }
        };
        if !c.is_negative() {
            r.push(
                CheckRecord::new("lauret", Status::NotApplicable)
                    .with_scalar("soliton_constant", &c)
                    .with_witness("the characterization needs a negative soliton constant"),
            );
            return Ok(r);
        }
        r.extend(m.lauret_conditions(&c)?.to_report(m.name()));
        Ok(r)
    }
    let r = with_backend!(input.load()?, def => run(&def, c)?);
    Ok(report_output("check lauret", &[input], r))
}

pub fn check_iwasawa(input: &Input) -> CliResult<Output> {
    let r = with_backend!(input.load()?, def => def.metric.is_iwasawa_type()?);
    Ok(report_output("check iwasawa", &[input], r))
}

pub fn kappa_mu(input: &Input) -> CliResult<Output> {
    let r = with_backend!(input.load()?, def => {
        let s = contact_of(input, &def)?;
        let mut r = VerificationReport::new(def.metric.name());
        r.push(s.kappa_mu_fit().to_record(FLOAT_TOL));
        r
    });
    Ok(report_output("kappa-mu", &[input], r))
}

pub fn ricci(input: &Input) -> CliResult<Output> {
    fn run<S: Scalar>(m: &MetricLieAlgebra<S>) -> VerificationReport {
        let op = m.ricci_operator();
        // Ric(e_i, e_j) = <Ric e_i, e_j>.
        let tensor = op.transpose().mul(m.gram());
        let labels = m.labels();
        let mut rec = CheckRecord::pass("ricci-tensor").with_scalar("scalar_curvature", &m.scalar_curvature());
        for i in 0..m.dim() {
            for j in i..m.dim() {
                if !tensor[(i, j)].is_zero() {
                    rec = rec.with_scalar(format!("Ric({},{})", labels[i], labels[j]), &tensor[(i, j)]);
                }
            }
        }
        rec = match m.einstein_check() {
            Some(l) => rec.with_witness(format!("einstein with lambda = {}", l.to_exact_string())),
            None => rec.with_witness("not einstein"),
        };
        let mut r = VerificationReport::new(m.name());
        r.push(rec);
        r
    }
    let r = with_backend!(input.load()?, def => run(&def.metric));
    Ok(report_output("ricci", &[input], r))
}

pub fn min_sec(input: &Input, samples: usize, seed: u64, refine: usize) -> CliResult<Output> {
    if samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    let m = with_backend!(input.load()?, def => def.metric.to_f64());
    let min = m.min_sectional_sampled(samples, seed, refine);
    let plane = |v: &[f64]| v.iter().map(|x| x.to_exact_string()).collect::<Vec<_>>().join(", ");
    let rec = CheckRecord::pass("min-sectional")
        .with_scalar("value", &min.value)
        .with_witness(format!(
            "samples: {}, seed: {seed}, refine steps: {refine}",
            min.samples
        ))
        .with_witness(format!("best sample: {}", min.sample_index))
        .with_witness(format!("x = [{}]", plane(&min.plane[0])))
        .with_witness(format!("y = [{}]", plane(&min.plane[1])))
        .with_witness("value is an upper bound on the minimum");
    let mut r = VerificationReport::new(m.name());
    r.push(rec);
    Ok(report_output("min-sec", &[input], r))
}

pub fn rank_reduce(input: &Input, aprime: &str) -> CliResult<Output> {
    fn run<S: Scalar>(input: &Input, m: &MetricLieAlgebra<S>, aprime: &str) -> CliResult<VerificationReport> {
        let alg = m.alg();
        let vectors = aprime
            .split(',')
            .map(|t| alg.parse_vector(t))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::Usage(format!("--aprime: {e}")))?;
        let a_prime = Subspace::span(m.dim(), &vectors);
        let red = m.rank_reduction(&a_prime).map_err(|e| input.wrap(e))?;
        let mut r = VerificationReport::new(red.sub.name());

        let mut spanned = CheckRecord::pass("a-prime").with_witness(format!("dim {}", a_prime.dim()));
        for v in a_prime.basis() {
            spanned = spanned.with_witness(alg.describe_vector(v));
        }
        r.push(spanned);

        let direct = red.sub.einstein_check();
        r.push(match red.heber_einstein {
            Some(b) => CheckRecord::pass("heber-criterion")
                .with_witness(format!("H0 in a': {b}"))
                .with_witness(red.heber_note.clone()),
            None => CheckRecord::new("heber-criterion", Status::NotApplicable).with_witness(red.heber_note.clone()),
        });
        let mut direct_rec =
            CheckRecord::pass("einstein-direct").with_witness(format!("einstein: {}", direct.is_some()));
        if let Some(l) = &direct {
            direct_rec = direct_rec.with_scalar("lambda", l);
        }
        r.push(direct_rec);
        r.push(match red.heber_einstein {
            Some(b) => CheckRecord::new("heber-consistency", Status::from_bool(b == direct.is_some()))
                .with_witness(format!("criterion {b}, direct {}", direct.is_some())),
            None => CheckRecord::new("heber-consistency", Status::NotApplicable),
        });
        r.push(red.soliton.to_record());
        r.push(match m.einstein_check() {
            Some(l) => {
                let gap = red.soliton.soliton_constant.clone() - l.clone();
                CheckRecord::new("soliton-constant-preserved", Status::from_bool(within(&gap)))
                    .with_residual(&gap.abs())
                    .with_scalar("ambient_lambda", &l)
            }
            None => CheckRecord::new("soliton-constant-preserved", Status::NotApplicable)
                .with_witness("ambient metric is not Einstein"),
        });
        Ok(r)
    }
    let r = with_backend!(input.load()?, def => run(input, &def.metric, aprime)?);
    Ok(report_output("rank-reduce", &[input], r))
}

pub fn verify_iso(src: &Input, dst: &Input, map_path: &Path) -> CliResult<Output> {
    let map_bytes = fs::read(map_path).map_err(|source| CliError::Io {
        path: map_path.to_path_buf(),
        source,
    })?;
    let map_err = |source| CliError::Input {
        path: map_path.to_path_buf(),
        source,
    };
    let map_file = MapFile::parse(&String::from_utf8_lossy(&map_bytes)).map_err(map_err)?;
    if src.file.field != dst.file.field || src.file.field != map_file.field {
        return Err(CliError::Usage(format!(
            "fields differ: source {}, target {}, map {}",
            src.file.field, dst.file.field, map_file.field
        )));
    }
    fn run<S: Scalar>(
        src: &Input,
        a: &Definition<S>,
        dst: &Input,
        b: &Definition<S>,
        map: &MapFile,
    ) -> CliResult<VerificationReport> {
        let (s, t) = (contact_of(src, a)?, contact_of(dst, b)?);
        let m: kappamu_core::Matrix<S> = map.to_matrix()?;
        if m.rows() != s.dim() || m.cols() != s.dim() || s.dim() != t.dim() {
            return Err(CliError::Usage(format!(
                "map is {}x{}, source dim {}, target dim {}",
                m.rows(),
                m.cols(),
                s.dim(),
                t.dim()
            )));
        }
        match check_structure_isomorphism(&m, s, t) {
            Ok(r) => Ok(r),
            Err(CoreError::Singular) => {
                let mut r = VerificationReport::new(format!("{} -> {}", s.base().name(), t.base().name()));
                r.push(CheckRecord::fail("invertible").with_witness("map is singular"));
                Ok(r)
            }
            Err(e) => Err(e.into()),
        }
    }
    let r = match (src.load()?, dst.load()?) {
        (LoadedDefinition::Exact(a), LoadedDefinition::Exact(b)) => run(src, &a, dst, &b, &map_file)?,
        (LoadedDefinition::Float(a), LoadedDefinition::Float(b)) => run(src, &a, dst, &b, &map_file)?,
        _ => unreachable!("fields checked equal"),
    };
    Ok(Output::Report {
        command: "verify-iso".into(),
        inputs: vec![src.bytes.clone(), dst.bytes.clone(), map_bytes],
        report: r,
    })
}

pub fn deform(input: &Input, a: &str, emit: Option<&Path>) -> CliResult<Output> {
    fn run<S: Scalar>(
        input: &Input,
        def: &Definition<S>,
        a: &str,
        emit: Option<&Path>,
    ) -> CliResult<VerificationReport> {
        let s = contact_of(input, def)?;
        let a: S = scalar_arg(a, "a")?;
        let d = s.d_homothetic(&a).map_err(|e| CliError::Usage(format!("--a: {e}")))?;
        if let Some(path) = emit {
            fs::write(path, Definition::from_contact(d.clone()).to_file().to_json()).map_err(|source| {
                CliError::Io {
                    path: path.to_path_buf(),
                    source,
                }
            })?;
        }
        let mut r = d.validate_structure();
        r.subject = d.base().name().to_string();
        let before = s.kappa_mu_fit();
        let after = d.kappa_mu_fit();
        r.push(after.to_record(FLOAT_TOL));
        let law = match (&before.mu, &after.mu) {
            (MuValue::Value(mu), MuValue::Value(mu_d)) if within(&before.residual) => {
                let a2 = a.clone() * a.clone();
                let two = S::from_i64(2);
                let kappa = (before.kappa.clone() + a2.clone() - S::one()) / a2;
                let mu = (mu.clone() + two.clone() * a.clone() - two) / a.clone();
                let gap = (after.kappa.clone() - kappa.clone())
                    .abs()
                    .max_with(&(mu_d.clone() - mu.clone()).abs());
                CheckRecord::new("deformation-law", Status::from_bool(within(&gap)))
                    .with_residual(&gap)
                    .with_scalar("expected_kappa", &kappa)
                    .with_scalar("expected_mu", &mu)
            }
            _ => CheckRecord::new("deformation-law", Status::NotApplicable)
                .with_witness("source is not a (kappa, mu)-space with determined mu"),
        };
        r.push(law);
        Ok(r)
    }
    let r = with_backend!(input.load()?, def => run(input, &def, a, emit)?);
    Ok(report_output("deform", &[input], r))
}

trait MaxWith {
    fn max_with(self, other: &Self) -> Self;
}

impl<S: Scalar> MaxWith for S {
    fn max_with(self, other: &Self) -> Self {
        if *other > self {
            other.clone()
        } else {
            self
        }
    }
}
