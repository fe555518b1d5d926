//! JSON encodings for every type that crosses the command-line boundary.
//!
//! Rationals are written as `"num/den"` strings and read from such strings,
//! bare integer strings or JSON integers. Integer invariants are written as
//! JSON integers when they fit in 64 bits and as strings otherwise.
//! Exponents of [`HalfLaurent`] values are in half-units (`s^u`, `s² = q`).
//! A window is `null` for exact polynomials and `[lo, hi]` otherwise, where
//! `hi` bounds the known exponents and `lo` is the lowest stored one.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{de::DeserializeOwned, Deserialize, Serialize};
use serde_json::Value;

use crate::chow::{ChowModel, Cycle, Generator, LocalFunction, LocalGVTable, Point};
use crate::error::{Error, Result};
use crate::flop::FlopFixture;
use crate::genus::GenusVector;
use crate::perverse::{PerverseDatum, RankEntry, SpectralPage, Stratum, Summand, SummandTable};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::series::{CurveClass, DegreeCutoff, GradedSeries, HalfLaurent, LatticeMap, Window};
use crate::transforms::{GVTable, GWTable};

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(untagged)]
enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    fn from_bigint(n: &BigInt) -> Self {
        n.to_i64().map_or_else(|| Number::Text(n.to_string()), Number::Int)
    }

    fn from_rational(r: &Rational) -> Self {
        Number::Text(format_rational(r))
    }

    fn to_rational(&self) -> Result<Rational> {
        match self {
            Number::Int(n) => Ok(Rational::from_integer(BigInt::from(*n))),
            Number::Text(s) => parse_rational(s),
        }
    }

    fn to_bigint(&self) -> Result<BigInt> {
        match self {
            Number::Int(n) => Ok(BigInt::from(*n)),
            Number::Text(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("not an integer: {s:?}"))),
        }
    }
}

type Coeffs = Vec<(i64, Number)>;

fn coeffs_out(p: &HalfLaurent) -> Coeffs {
    p.coeffs()
        .iter()
        .map(|(&u, c)| (u, Number::from_rational(c)))
        .collect()
}

fn coeffs_in(c: &Coeffs) -> Result<Vec<(i64, Rational)>> {
    c.iter().map(|(u, v)| Ok((*u, v.to_rational()?))).collect()
}

fn window_out(w: Window, lo: i64) -> Option<[i64; 2]> {
    w.hi().map(|hi| [lo.min(hi), hi])
}

fn window_in(w: Option<[i64; 2]>) -> Result<Window> {
    match w {
        None => Ok(Window::Polynomial),
        Some([lo, hi]) if lo <= hi => Ok(Window::Through(hi)),
        Some([lo, hi]) => Err(Error::Parse(format!("window [{lo},{hi}] is empty"))),
    }
}

fn parse<T: DeserializeOwned>(value: &Value) -> Result<T> {
    T::deserialize(value).map_err(|e| Error::Parse(e.to_string()))
}

fn emit<T: Serialize>(dto: &T) -> Value {
    serde_json::to_value(dto).expect("plain data serializes")
}

fn class_in(coords: &[i64], rank: usize) -> Result<CurveClass> {
    if coords.len() != rank {
        return Err(Error::RankMismatch { left: rank, right: coords.len() });
    }
    Ok(CurveClass::new(coords.to_vec()))
}

/// Reads a JSON document from a string.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Compact rendering with sorted keys and a trailing newline.
pub fn render_json(value: &Value) -> String {
    let mut s = serde_json::to_string(value).expect("values serialize");
    s.push('\n');
    s
}

#[derive(Serialize, Deserialize)]
struct LaurentDto {
    coeffs: Coeffs,
    #[serde(default)]
    window: Option<[i64; 2]>,
}

pub fn laurent_to_json(p: &HalfLaurent) -> Value {
    emit(&LaurentDto {
        coeffs: coeffs_out(p),
        window: window_out(p.window(), p.lo()),
    })
}

pub fn laurent_from_json(value: &Value) -> Result<HalfLaurent> {
    let dto: LaurentDto = parse(value)?;
    Ok(HalfLaurent::new(coeffs_in(&dto.coeffs)?, window_in(dto.window)?))
}

#[derive(Serialize, Deserialize)]
struct CutoffDto {
    weights: Vec<i64>,
    bound: i64,
}

pub fn cutoff_to_json(c: &DegreeCutoff) -> Value {
    emit(&CutoffDto { weights: c.weights().to_vec(), bound: c.bound() })
}

pub fn cutoff_from_json(value: &Value) -> Result<DegreeCutoff> {
    let dto: CutoffDto = parse(value)?;
    DegreeCutoff::new(dto.weights, dto.bound)
}

#[derive(Serialize, Deserialize)]
struct TermDto {
    beta: Vec<i64>,
    coeffs: Coeffs,
}

#[derive(Serialize, Deserialize)]
struct SeriesDto {
    rank: usize,
    cutoff: CutoffDto,
    window: Option<[i64; 2]>,
    terms: Vec<TermDto>,
}

fn series_dto(s: &GradedSeries) -> SeriesDto {
    let uniform = s.uniform();
    let lo = uniform.terms().map(|(_, v)| v.lo()).min().unwrap_or(0);
    SeriesDto {
        rank: s.rank(),
        cutoff: CutoffDto { weights: s.cutoff().weights().to_vec(), bound: s.cutoff().bound() },
        window: window_out(s.window(), lo),
        terms: uniform
            .terms()
            .map(|(beta, v)| TermDto { beta: beta.coords().to_vec(), coeffs: coeffs_out(v) })
            .collect(),
    }
}

fn series_from_dto(dto: SeriesDto) -> Result<GradedSeries> {
    let cutoff = DegreeCutoff::new(dto.cutoff.weights, dto.cutoff.bound)?;
    if cutoff.rank() != dto.rank {
        return Err(Error::RankMismatch { left: dto.rank, right: cutoff.rank() });
    }
    let window = window_in(dto.window)?;
    let terms = dto
        .terms
        .iter()
        .map(|t| Ok((class_in(&t.beta, dto.rank)?, HalfLaurent::new(coeffs_in(&t.coeffs)?, window))))
        .collect::<Result<Vec<_>>>()?;
    GradedSeries::from_uniform(cutoff, window, terms)
}

pub fn series_to_json(s: &GradedSeries) -> Value {
    emit(&series_dto(s))
}

pub fn series_from_json(value: &Value) -> Result<GradedSeries> {
    series_from_dto(parse(value)?)
}

#[derive(Serialize, Deserialize)]
struct GenusDto {
    entries: Vec<(i64, Number)>,
}

pub fn genus_to_json(v: &GenusVector) -> Value {
    emit(&GenusDto {
        entries: v.iter().map(|(g, n)| (g, Number::from_bigint(n))).collect(),
    })
}

pub fn genus_from_json(value: &Value) -> Result<GenusVector> {
    let dto: GenusDto = parse(value)?;
    let entries = dto
        .entries
        .iter()
        .map(|(g, n)| Ok((*g, n.to_bigint()?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(GenusVector::from_entries(entries))
}

#[derive(Serialize, Deserialize)]
struct GVEntryDto {
    beta: Vec<i64>,
    g: i64,
    n: Number,
}

#[derive(Serialize, Deserialize)]
struct GVTableDto {
    rank: usize,
    entries: Vec<GVEntryDto>,
}

pub fn gv_table_to_json(t: &GVTable) -> Value {
    emit(&GVTableDto {
        rank: t.rank(),
        entries: t
            .iter()
            .map(|(beta, g, n)| GVEntryDto { beta: beta.coords().to_vec(), g, n: Number::from_bigint(n) })
            .collect(),
    })
}

pub fn gv_table_from_json(value: &Value) -> Result<GVTable> {
    let dto: GVTableDto = parse(value)?;
    let entries = dto
        .entries
        .iter()
        .map(|e| Ok((class_in(&e.beta, dto.rank)?, e.g, e.n.to_bigint()?)))
        .collect::<Result<Vec<_>>>()?;
    GVTable::from_entries(dto.rank, entries)
}

#[derive(Serialize, Deserialize)]
struct GWEntryDto {
    beta: Vec<i64>,
    g: i64,
    value: Number,
}

#[derive(Serialize, Deserialize)]
struct GWTableDto {
    rank: usize,
    entries: Vec<GWEntryDto>,
}

pub fn gw_table_to_json(t: &GWTable) -> Value {
    emit(&GWTableDto {
        rank: t.rank(),
        entries: t
            .iter()
            .map(|(beta, g, v)| GWEntryDto { beta: beta.coords().to_vec(), g, value: Number::from_rational(v) })
            .collect(),
    })
}

pub fn gw_table_from_json(value: &Value) -> Result<GWTable> {
    let dto: GWTableDto = parse(value)?;
    let entries = dto
        .entries
        .iter()
        .map(|e| Ok((class_in(&e.beta, dto.rank)?, e.g, e.value.to_rational()?)))
        .collect::<Result<Vec<_>>>()?;
    GWTable::from_entries(dto.rank, entries)
}

#[derive(Serialize, Deserialize)]
struct GeneratorDto {
    label: String,
    class: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct PointDto {
    cycle: Vec<u32>,
    euler: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct ModelDto {
    generators: Vec<GeneratorDto>,
    points: Vec<PointDto>,
}

pub fn model_to_json(m: &ChowModel) -> Value {
    emit(&ModelDto {
        generators: m
            .generators()
            .iter()
            .map(|g| GeneratorDto { label: g.label.clone(), class: g.class.coords().to_vec() })
            .collect(),
        points: m
            .points()
            .map(|p| PointDto { cycle: p.cycle.multiplicities().to_vec(), euler: p.euler, label: p.label.clone() })
            .collect(),
    })
}

pub fn model_from_json(value: &Value) -> Result<ChowModel> {
    let dto: ModelDto = parse(value)?;
    let rank = dto
        .generators
        .first()
        .map(|g| g.class.len())
        .ok_or_else(|| Error::Invalid("a Chow model needs at least one generator".into()))?;
    let generators = dto
        .generators
        .into_iter()
        .map(|g| Ok(Generator { class: class_in(&g.class, rank)?, label: g.label }))
        .collect::<Result<Vec<_>>>()?;
    let points = dto
        .points
        .into_iter()
        .map(|p| Point { cycle: Cycle::new(p.cycle), euler: p.euler, label: p.label })
        .collect();
    ChowModel::new(rank, generators, points)
}

#[derive(Serialize, Deserialize)]
struct ValueDto {
    cycle: Vec<u32>,
    coeffs: Coeffs,
}

#[derive(Serialize, Deserialize)]
struct FunctionDto {
    #[serde(default)]
    window: Option<[i64; 2]>,
    values: Vec<ValueDto>,
}

pub fn function_to_json(f: &LocalFunction) -> Value {
    let window = f.window();
    let lo = f.iter().map(|(_, v)| v.lo()).min().unwrap_or(0);
    emit(&FunctionDto {
        window: window_out(window, lo),
        values: f
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(c, v)| ValueDto {
                cycle: c.multiplicities().to_vec(),
                coeffs: coeffs_out(&v.with_window(window)),
            })
            .collect(),
    })
}

/// Reads a local function; with a window, every point of `model` is known
/// through it.
pub fn function_from_json(value: &Value, model: &ChowModel) -> Result<LocalFunction> {
    let dto: FunctionDto = parse(value)?;
    let window = window_in(dto.window)?;
    let values = dto
        .values
        .iter()
        .map(|v| {
            let cycle = Cycle::new(v.cycle.clone());
            if !model.contains(&cycle) {
                return Err(Error::OutsideModel(cycle.to_string()));
            }
            Ok((cycle, HalfLaurent::new(coeffs_in(&v.coeffs)?, window)))
        })
        .collect::<Result<Vec<_>>>()?;
    let f = LocalFunction::new(values);
    Ok(match window {
        Window::Through(hi) => f.uniform_through(model, hi),
        Window::Polynomial => f,
    })
}

#[derive(Serialize, Deserialize)]
struct LocalEntryDto {
    cycle: Vec<u32>,
    g: i64,
    n: Number,
}

#[derive(Serialize, Deserialize)]
struct LocalTableDto {
    entries: Vec<LocalEntryDto>,
}

pub fn local_table_to_json(t: &LocalGVTable) -> Value {
    emit(&LocalTableDto {
        entries: t
            .iter()
            .map(|(c, g, n)| LocalEntryDto { cycle: c.multiplicities().to_vec(), g, n: Number::from_bigint(n) })
            .collect(),
    })
}

pub fn local_table_from_json(value: &Value) -> Result<LocalGVTable> {
    let dto: LocalTableDto = parse(value)?;
    let entries = dto
        .entries
        .iter()
        .map(|e| Ok((Cycle::new(e.cycle.clone()), e.g, e.n.to_bigint()?)))
        .collect::<Result<Vec<_>>>()?;
    LocalGVTable::from_entries(entries)
}

#[derive(Serialize, Deserialize)]
struct DatumPointDto {
    label: String,
    coeffs: Coeffs,
}

#[derive(Serialize, Deserialize)]
struct DatumDto {
    points: Vec<DatumPointDto>,
}

pub fn datum_to_json(d: &PerverseDatum) -> Value {
    emit(&DatumDto {
        points: d
            .iter()
            .map(|(label, p)| DatumPointDto { label: label.into(), coeffs: coeffs_out(p) })
            .collect(),
    })
}

pub fn datum_from_json(value: &Value) -> Result<PerverseDatum> {
    let dto: DatumDto = parse(value)?;
    let points = dto
        .points
        .into_iter()
        .map(|p| Ok((p.label, HalfLaurent::polynomial(coeffs_in(&p.coeffs)?))))
        .collect::<Result<Vec<_>>>()?;
    PerverseDatum::new(points)
}

#[derive(Serialize, Deserialize)]
struct SummandDto {
    name: String,
    support: String,
    coeffs: Coeffs,
    #[serde(default)]
    weight: i64,
}

#[derive(Serialize, Deserialize)]
struct RankDto {
    support: String,
    i: i64,
    j: i64,
    rank: u64,
}

#[derive(Serialize, Deserialize)]
struct SummandTableDto {
    summands: Vec<SummandDto>,
    #[serde(default)]
    ranks: Vec<RankDto>,
}

pub fn summands_to_json(t: &SummandTable) -> Value {
    emit(&SummandTableDto {
        summands: t
            .summands
            .iter()
            .map(|s| SummandDto {
                name: s.name.clone(),
                support: s.support.clone(),
                coeffs: coeffs_out(&s.poly),
                weight: s.weight,
            })
            .collect(),
        ranks: t
            .ranks
            .iter()
            .map(|r| RankDto { support: r.support.clone(), i: r.i, j: r.j, rank: r.rank })
            .collect(),
    })
}

pub fn summands_from_json(value: &Value) -> Result<SummandTable> {
    let dto: SummandTableDto = parse(value)?;
    let summands = dto
        .summands
        .into_iter()
        .map(|s| {
            Ok(Summand {
                poly: HalfLaurent::polynomial(coeffs_in(&s.coeffs)?),
                name: s.name,
                support: s.support,
                weight: s.weight,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let ranks = dto
        .ranks
        .into_iter()
        .map(|r| RankEntry { support: r.support, i: r.i, j: r.j, rank: r.rank })
        .collect();
    let table = SummandTable { summands, ranks };
    table.validate()?;
    Ok(table)
}

/// Accepts either a datum (`points`) or a summand table (`summands`).
pub fn is_summand_table(value: &Value) -> bool {
    value.get("summands").is_some()
}

#[derive(Serialize, Deserialize)]
struct PageDto {
    e1: Vec<(i64, i64, u64)>,
    #[serde(default)]
    d1_ranks: Vec<(i64, i64, u64)>,
}

pub fn page_to_json(p: &SpectralPage) -> Value {
    emit(&PageDto {
        e1: p.e1.iter().map(|(&(i, j), &d)| (i, j, d)).collect(),
        d1_ranks: p.d1_ranks.iter().map(|(&(i, j), &r)| (i, j, r)).collect(),
    })
}

pub fn page_from_json(value: &Value) -> Result<SpectralPage> {
    let dto: PageDto = parse(value)?;
    let mut page = SpectralPage::new();
    for (i, j, d) in dto.e1 {
        page = page.with_dim(i, j, d);
    }
    for (i, j, r) in dto.d1_ranks {
        page = page.with_rank(i, j, r);
    }
    Ok(page)
}

/// `{"e2": [[i, j, dim], ...], "euler": χ}`.
pub fn e2_to_json(e2: &BTreeMap<(i64, i64), u64>) -> Value {
    serde_json::json!({
        "e2": e2.iter().map(|(&(i, j), &d)| (i, j, d)).collect::<Vec<_>>(),
        "euler": crate::perverse::page_euler_characteristic(e2),
    })
}

pub fn strata_to_json(strata: &[Stratum]) -> Value {
    Value::Array(
        strata
            .iter()
            .map(|s| serde_json::json!({"euler": s.euler, "nu": s.nu}))
            .collect(),
    )
}

#[derive(Serialize, Deserialize)]
struct FlopDto {
    pt_x: SeriesDto,
    pt_x_over_y: SeriesDto,
    pt_xdag: SeriesDto,
    pt_xdag_over_y: SeriesDto,
    phi: Vec<Vec<i64>>,
    fiber_basis: Vec<Vec<i64>>,
}

pub fn flop_to_json(fx: &FlopFixture) -> Value {
    emit(&FlopDto {
        pt_x: series_dto(&fx.pt_x),
        pt_x_over_y: series_dto(&fx.pt_x_over_y),
        pt_xdag: series_dto(&fx.pt_xdag),
        pt_xdag_over_y: series_dto(&fx.pt_xdag_over_y),
        phi: fx.phi.rows().to_vec(),
        fiber_basis: fx.fiber_basis.iter().map(|b| b.coords().to_vec()).collect(),
    })
}

pub fn flop_from_json(value: &Value) -> Result<FlopFixture> {
    let dto: FlopDto = parse(value)?;
    let phi = LatticeMap::new(dto.phi)?;
    let fiber_basis = dto
        .fiber_basis
        .iter()
        .map(|b| class_in(b, phi.rank()))
        .collect::<Result<Vec<_>>>()?;
    let fx = FlopFixture {
        pt_x: series_from_dto(dto.pt_x)?,
        pt_x_over_y: series_from_dto(dto.pt_x_over_y)?,
        pt_xdag: series_from_dto(dto.pt_xdag)?,
        pt_xdag_over_y: series_from_dto(dto.pt_xdag_over_y)?,
        phi,
        fiber_basis,
    };
    fx.validate()?;
    Ok(fx)
}
