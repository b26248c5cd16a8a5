//! C ABI over the `cellular_ia` library.
//!
//! Every function returns an [`IaStatus`]; results go through out-pointers.
//! Objects are opaque handles released with their `*_free` function, and
//! strings returned by the library are released with [`ia_string_free`].
//! After a failure, [`ia_last_error_message`] describes it on the calling
//! thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cellular_ia::designs::generate_codebooks;
use cellular_ia::harness::{execute, Scenario};
use cellular_ia::tables::{min_antennas, resource_report, MsMinimum};
use cellular_ia::{design, generate_channels, leakage_report, sum_rate, Approach, IaError};

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IaStatus {
    Ok = 0,
    InvalidConfig = 1,
    InfeasibleAntennas = 2,
    SingularConstruction = 3,
    EmptyNullSpace = 4,
    ZeroMatrix = 5,
    NotHermitian = 6,
    DimensionMismatch = 7,
    UnknownApproach = 8,
    MissingCodebook = 9,
    InsufficientPoints = 10,
    Scenario = 11,
    Io = 12,
    NullPointer = 13,
    InvalidArgument = 14,
    Panic = 15,
}

impl From<&IaError> for IaStatus {
    fn from(e: &IaError) -> Self {
        match e.root() {
            IaError::InvalidConfig(_) => IaStatus::InvalidConfig,
            IaError::InfeasibleAntennas(_) => IaStatus::InfeasibleAntennas,
            IaError::SingularConstruction(_) => IaStatus::SingularConstruction,
            IaError::EmptyNullSpace { .. } => IaStatus::EmptyNullSpace,
            IaError::ZeroMatrix => IaStatus::ZeroMatrix,
            IaError::NotHermitian(_) => IaStatus::NotHermitian,
            IaError::DimensionMismatch(_) => IaStatus::DimensionMismatch,
            IaError::UnknownApproach { .. } => IaStatus::UnknownApproach,
            IaError::MissingCodebook => IaStatus::MissingCodebook,
            IaError::InsufficientPoints(_) => IaStatus::InsufficientPoints,
            IaError::Scenario(_) => IaStatus::Scenario,
            IaError::Io(_) => IaStatus::Io,
            IaError::TrialFailed { .. } => unreachable!("root strips trial wrappers"),
        }
    }
}

/// Network dimensions and antenna counts.
pub struct IaConfig(cellular_ia::NetworkConfig);

/// One channel realization.
pub struct IaChannels(cellular_ia::ChannelSet);

/// Precoders and receive filters of one design.
pub struct IaCoders {
    coders: cellular_ia::CoderSet,
    boundary_cells: Vec<usize>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

struct Failure(IaStatus, String);

impl From<IaError> for Failure {
    fn from(e: IaError) -> Self {
        Failure(IaStatus::from(&e), e.to_string())
    }
}

fn null() -> Failure {
    Failure(IaStatus::NullPointer, "null pointer argument".into())
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure(IaStatus::InvalidArgument, message.into())
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> IaStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            IaStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            IaStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid("string is not UTF-8"))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

fn owned_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s).map(CString::into_raw).map_err(|_| invalid("output contains a NUL byte"))
}

fn approach(s: &str) -> Result<Approach, Failure> {
    Ok(s.parse::<Approach>()?)
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ia_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ia_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a configuration from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ia_config_from_json(json: *const c_char, out: *mut *mut IaConfig) -> IaStatus {
    guard(|| {
        let cfg: cellular_ia::NetworkConfig =
            serde_json::from_str(text(json)?).map_err(|e| Failure(IaStatus::InvalidConfig, e.to_string()))?;
        cfg.validate()?;
        put(out, Box::into_raw(Box::new(IaConfig(cfg))))
    })
}

/// Configuration of the full-connected or two-side cyclic topology.
/// `topology` is `full_connected` or `cyclic_two_side`.
///
/// # Safety
/// `topology` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ia_config_uniform(
    topology: *const c_char,
    k: usize,
    m: usize,
    d: usize,
    n_t: usize,
    n_r: usize,
    out: *mut *mut IaConfig,
) -> IaStatus {
    guard(|| {
        let cfg = match text(topology)? {
            "full_connected" => cellular_ia::NetworkConfig::full_connected(k, m, d, n_t, n_r),
            "cyclic_two_side" => cellular_ia::NetworkConfig::cyclic_two_side(k, m, d, n_t, n_r),
            other => return Err(invalid(format!("`{other}` is not a uniform topology"))),
        };
        cfg.validate()?;
        put(out, Box::into_raw(Box::new(IaConfig(cfg))))
    })
}

/// Configuration of the one-side edge topology.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ia_config_one_side(
    k: usize,
    m_star: usize,
    m_edge: usize,
    d: usize,
    n_t: usize,
    n_r_star: usize,
    n_r_edge: usize,
    out: *mut *mut IaConfig,
) -> IaStatus {
    guard(|| {
        let cfg = cellular_ia::NetworkConfig::cyclic_one_side(k, m_star, m_edge, d, n_t, n_r_star, n_r_edge);
        cfg.validate()?;
        put(out, Box::into_raw(Box::new(IaConfig(cfg))))
    })
}

/// # Safety
/// `cfg` must come from an `ia_config_*` constructor or be null.
#[no_mangle]
pub unsafe extern "C" fn ia_config_free(cfg: *mut IaConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Draws every channel matrix of `cfg` from `seed`.
///
/// # Safety
/// `cfg` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ia_channels_generate(cfg: *const IaConfig, seed: u64, out: *mut *mut IaChannels) -> IaStatus {
    guard(|| {
        let ch = generate_channels(&borrow(cfg)?.0, seed)?;
        put(out, Box::into_raw(Box::new(IaChannels(ch))))
    })
}

/// # Safety
/// `ch` must come from [`ia_channels_generate`] or be null.
#[no_mangle]
pub unsafe extern "C" fn ia_channels_free(ch: *mut IaChannels) {
    if !ch.is_null() {
        drop(Box::from_raw(ch));
    }
}

/// Designs coders with approach `approach_id` (`A`..`F`, `a`..`e`).
/// Option `d` draws `codebook_size` candidates per cell from
/// `codebook_seed`; other approaches need `codebook_size` = 0.
///
/// # Safety
/// `ch` must be a live handle, `approach_id` a NUL-terminated string and
/// `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ia_design(
    ch: *const IaChannels,
    approach_id: *const c_char,
    seed: u64,
    codebook_size: usize,
    codebook_seed: u64,
    out: *mut *mut IaCoders,
) -> IaStatus {
    guard(|| {
        let ch = &borrow(ch)?.0;
        let approach = approach(text(approach_id)?)?;
        let books = match (approach, codebook_size) {
            (Approach::OptD, 0) => return Err(IaError::MissingCodebook.into()),
            (Approach::OptD, n) => Some(generate_codebooks(&ch.config, n, codebook_seed)?),
            (_, 0) => None,
            _ => return Err(invalid("codebook_size is only used by option d")),
        };
        let (coders, report) = design(ch, approach, seed, books.as_deref())?;
        let boundary_cells = report.map(|r| r.boundary_cells).unwrap_or_default();
        put(out, Box::into_raw(Box::new(IaCoders { coders, boundary_cells })))
    })
}

/// # Safety
/// `coders` must come from [`ia_design`] or be null.
#[no_mangle]
pub unsafe extern "C" fn ia_coders_free(coders: *mut IaCoders) {
    if !coders.is_null() {
        drop(Box::from_raw(coders));
    }
}

/// Copies the precoder of user (`cell`, `user`) into `re` and `im`, column
/// major, and its shape into `rows` and `cols`. With null buffers only the
/// shape is written; otherwise each buffer must hold `len` ≥ rows·cols values.
///
/// # Safety
/// Non-null pointers must be writable for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn ia_coders_precoder(
    coders: *const IaCoders,
    cell: usize,
    user: usize,
    re: *mut f64,
    im: *mut f64,
    len: usize,
    rows: *mut usize,
    cols: *mut usize,
) -> IaStatus {
    guard(|| {
        let v = borrow(coders)?
            .coders
            .precoders
            .get(&(cell, user))
            .ok_or_else(|| invalid(format!("no user ({cell}, {user})")))?;
        put(rows, v.nrows())?;
        put(cols, v.ncols())?;
        if re.is_null() && im.is_null() {
            return Ok(());
        }
        if re.is_null() || im.is_null() {
            return Err(null());
        }
        if len < v.len() {
            return Err(invalid(format!("buffers hold {len} values, {} needed", v.len())));
        }
        for (i, z) in v.iter().enumerate() {
            re.add(i).write(z.re);
            im.add(i).write(z.im);
        }
        Ok(())
    })
}

/// Number of boundary cells a chain design left unaligned, and optionally
/// the cells themselves (`cells` holding at least `len` entries).
///
/// # Safety
/// `count` must be writable; `cells` may be null.
#[no_mangle]
pub unsafe extern "C" fn ia_coders_boundary_cells(
    coders: *const IaCoders,
    cells: *mut usize,
    len: usize,
    count: *mut usize,
) -> IaStatus {
    guard(|| {
        let list = &borrow(coders)?.boundary_cells;
        put(count, list.len())?;
        if !cells.is_null() {
            for (i, &c) in list.iter().take(len).enumerate() {
                cells.add(i).write(c);
            }
        }
        Ok(())
    })
}

/// Largest normalized residual interference over all users and the total
/// residual interference power.
///
/// # Safety
/// Handles must be live; `max_residual` and `total_leakage` writable.
#[no_mangle]
pub unsafe extern "C" fn ia_leakage(
    ch: *const IaChannels,
    coders: *const IaCoders,
    max_residual: *mut f64,
    total_leakage: *mut f64,
) -> IaStatus {
    guard(|| {
        let report = leakage_report(&borrow(ch)?.0, &borrow(coders)?.coders)?;
        put(max_residual, report.max_residual())?;
        put(total_leakage, report.total_leakage())
    })
}

/// Sum rate in bits per channel use at `snr_db`.
///
/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ia_sum_rate(
    ch: *const IaChannels,
    coders: *const IaCoders,
    snr_db: f64,
    out: *mut f64,
) -> IaStatus {
    guard(|| put(out, sum_rate(&borrow(ch)?.0, &borrow(coders)?.coders, snr_db)?))
}

/// Tabulated minimum antenna counts of `approach_id` for the dimensions of
/// `cfg`. Uniform topologies write the same MS count to both outputs.
///
/// # Safety
/// `cfg` must be live, `approach_id` NUL-terminated and outputs writable.
#[no_mangle]
pub unsafe extern "C" fn ia_min_antennas(
    cfg: *const IaConfig,
    approach_id: *const c_char,
    bs: *mut u64,
    ms_interior: *mut u64,
    ms_edge: *mut u64,
) -> IaStatus {
    guard(|| {
        let cfg = &borrow(cfg)?.0;
        let min = min_antennas(cfg.topology, approach(text(approach_id)?)?, cfg)?;
        let (interior, edge) = match min.ms {
            MsMinimum::Uniform(n) => (n, n),
            MsMinimum::Split { interior, edge } => (interior, edge),
        };
        put(bs, min.bs)?;
        put(ms_interior, interior)?;
        put(ms_edge, edge)
    })
}

/// Antenna, CSI and complexity row as JSON. `codebook_size` 0 means none.
///
/// # Safety
/// `cfg` must be live, `approach_id` NUL-terminated and `out` writable.
/// Release the string with [`ia_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ia_resource_report_json(
    cfg: *const IaConfig,
    approach_id: *const c_char,
    codebook_size: usize,
    out: *mut *mut c_char,
) -> IaStatus {
    guard(|| {
        let cfg = &borrow(cfg)?.0;
        let book = (codebook_size > 0).then_some(codebook_size);
        let row = resource_report(cfg.topology, approach(text(approach_id)?)?, cfg, book)?;
        let json = serde_json::to_string(&row).map_err(|e| invalid(e.to_string()))?;
        put(out, owned_string(json)?)
    })
}

/// Runs a scenario given as JSON in memory, serially, and returns the
/// results document. Nothing is written to disk.
///
/// # Safety
/// `scenario_json` must be NUL-terminated and `out` writable. Release the
/// string with [`ia_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ia_run_scenario_json(scenario_json: *const c_char, out: *mut *mut c_char) -> IaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        out.write(ptr::null_mut());
        let scenario = Scenario::from_json(text(scenario_json)?)?;
        let (results, _) = execute(&scenario, 1)?;
        put(out, owned_string(results.to_json()?)?)
    })
}

/// # Safety
/// `s` must be a string returned by this library or null.
#[no_mangle]
pub unsafe extern "C" fn ia_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
