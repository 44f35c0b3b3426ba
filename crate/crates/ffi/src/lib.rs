//! C ABI over `ptsym`.
//!
//! Objects are opaque handles created by `pts_*_new`/`pts_*_parse`-style
//! functions and released with the matching `pts_*_free`. Every function
//! returns a [`PtsStatus`]; on failure a message is available from
//! [`pts_last_error_message`] on the same thread. Strings returned through
//! `char **` out-parameters are owned by the caller and must be released
//! with [`pts_string_free`].
//!
//! Array outputs take a buffer, its capacity and a `size_t *len_out`. The
//! required length is always written to `len_out`; if the capacity is too
//! small the call returns `PTS_STATUS_BUFFER_TOO_SMALL` and writes nothing
//! else, so a first call with `cap = 0` sizes the buffer.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use ptsym::eigen::{eig_iterative, eigenvalues, Spectrum};
use ptsym::numerics::{c, DenseMatrix};
use ptsym::report::{self, Component, ReportBundle};
use ptsym::sweep::{
    find_exceptional_points, preset_case, run_sweep, Binding, FamilySource, OutputQuantity,
    SweepResult, SweepSpec,
};
use ptsym::symmetry::{
    check_anti_pt_symmetry, check_linear_symmetry, check_pt_symmetry, SymmetryOperator,
    SymmetryVerdict,
};
use ptsym::template::{load_template_file, parse_template, Assignment, HamiltonianTemplate};
use ptsym::transform::{build_family, FamilyId, HamiltonianParams};
use ptsym::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PtsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidUtf8 = 3,
    BufferTooSmall = 4,
    OutOfRange = 5,
    Shape = 6,
    NonFinite = 7,
    Singular = 8,
    Convergence = 9,
    ExceptionalPoint = 10,
    Parse = 11,
    Template = 12,
    InvalidSweep = 13,
    Io = 14,
    Report = 15,
    Panic = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PtsFamily {
    HOriginal = 0,
    HPtPrinted = 1,
    H1Pt = 2,
    HSimilarityExact = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PtsQuantity {
    Eigenvalue = 0,
    EigenvalueSquared = 1,
    ModulusSquared = 2,
    RealPartSquared = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PtsComponent {
    Re = 0,
    Im = 1,
    Both = 2,
}

/// Outcome of a symmetry check.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtsVerdict {
    pub residual: f64,
    /// Absolute threshold the residual was compared against.
    pub threshold: f64,
    pub holds: bool,
}

pub struct PtsMatrix {
    inner: DenseMatrix,
}

pub struct PtsTemplate {
    inner: Arc<HamiltonianTemplate>,
}

pub struct PtsSweepSpec {
    inner: SweepSpec,
}

pub struct PtsSweepResult {
    bundle: ReportBundle,
}

impl PtsSweepResult {
    fn result(&self) -> &SweepResult {
        match &self.bundle.payload {
            report::Payload::Sweep(r) => r,
            report::Payload::Verdicts(_) => unreachable!("sweep handles always hold a sweep"),
        }
    }
}

#[derive(Debug)]
struct Failure {
    status: PtsStatus,
    message: String,
}

impl Failure {
    fn new(status: PtsStatus, message: impl Into<String>) -> Self {
        Failure {
            status,
            message: message.into(),
        }
    }

    fn null(what: &str) -> Self {
        Failure::new(PtsStatus::NullPointer, format!("{what} is null"))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Shape { .. } | Error::SizeLimit { .. } => PtsStatus::Shape,
            Error::NonFinite { .. } => PtsStatus::NonFinite,
            Error::Singular { .. } => PtsStatus::Singular,
            Error::Convergence { .. } => PtsStatus::Convergence,
            Error::ExceptionalPoint { .. } => PtsStatus::ExceptionalPoint,
            Error::Parse(_) => PtsStatus::Parse,
            Error::Template(ptsym::template::TemplateError::Io { .. }) => PtsStatus::Io,
            Error::Template(_) | Error::Eval(_) => PtsStatus::Template,
            Error::InvalidSweep(_) | Error::GridPoint { .. } | Error::UnknownCase(_) => {
                PtsStatus::InvalidSweep
            }
            Error::Report(_) => PtsStatus::Report,
            Error::OperatorKind(_) | Error::InvalidArgument(_) => PtsStatus::InvalidArgument,
        };
        Failure::new(status, e.to_string())
    }
}

impl From<ptsym::template::TemplateError> for Failure {
    fn from(e: ptsym::template::TemplateError) -> Self {
        Error::from(e).into()
    }
}

impl From<ptsym::template::EvalError> for Failure {
    fn from(e: ptsym::template::EvalError) -> Self {
        Error::from(e).into()
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let msg = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PtsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PtsStatus::Ok,
        Ok(Err(fail)) => {
            set_last_error(&fail.message);
            fail.status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("internal panic: {msg}"));
            PtsStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::null(what))
}

unsafe fn borrow_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| Failure::null(what))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::new(PtsStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn slice_arg<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_handle<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    put(out, Box::into_raw(Box::new(value)), "out")
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let s = CString::new(s)
        .map_err(|_| Failure::new(PtsStatus::Report, "output contains a NUL byte"))?;
    put(out, s.into_raw(), "out")
}

/// Copies `values` into `(re, im)` buffers following the sizing protocol.
unsafe fn put_complex(
    values: &[ptsym::ComplexScalar],
    re: *mut f64,
    im: *mut f64,
    cap: usize,
    len_out: *mut usize,
) -> Result<(), Failure> {
    put(len_out, values.len(), "len_out")?;
    if cap < values.len() {
        return Err(Failure::new(
            PtsStatus::BufferTooSmall,
            format!("buffer holds {cap}, need {}", values.len()),
        ));
    }
    if values.is_empty() {
        return Ok(());
    }
    if re.is_null() || im.is_null() {
        return Err(Failure::null("output buffer"));
    }
    for (k, z) in values.iter().enumerate() {
        re.add(k).write(z.re);
        im.add(k).write(z.im);
    }
    Ok(())
}

unsafe fn put_reals(values: &[f64], out: *mut f64, cap: usize, len_out: *mut usize) -> Result<(), Failure> {
    put(len_out, values.len(), "len_out")?;
    if cap < values.len() {
        return Err(Failure::new(
            PtsStatus::BufferTooSmall,
            format!("buffer holds {cap}, need {}", values.len()),
        ));
    }
    if values.is_empty() {
        return Ok(());
    }
    if out.is_null() {
        return Err(Failure::null("output buffer"));
    }
    ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    Ok(())
}

fn family_id(f: u32) -> Result<FamilyId, Failure> {
    FamilyId::ALL
        .get(f as usize)
        .copied()
        .ok_or_else(|| Failure::new(PtsStatus::InvalidArgument, format!("unknown family {f}")))
}

fn quantity(q: u32) -> Result<OutputQuantity, Failure> {
    Ok(match q {
        0 => OutputQuantity::Eigenvalue,
        1 => OutputQuantity::EigenvalueSquared,
        2 => OutputQuantity::ModulusSquared,
        3 => OutputQuantity::RealPartSquared,
        _ => {
            return Err(Failure::new(
                PtsStatus::InvalidArgument,
                format!("unknown quantity {q}"),
            ))
        }
    })
}

fn component(k: u32) -> Result<Component, Failure> {
    Ok(match k {
        0 => Component::Re,
        1 => Component::Im,
        2 => Component::Both,
        _ => {
            return Err(Failure::new(
                PtsStatus::InvalidArgument,
                format!("unknown component {k}"),
            ))
        }
    })
}

fn verdict(v: SymmetryVerdict) -> PtsVerdict {
    PtsVerdict {
        residual: v.residual,
        threshold: v.threshold,
        holds: v.holds,
    }
}

/// Message for the last failed call on this thread, or NULL after a
/// successful call. Valid until the next `pts_*` call on the same thread.
#[no_mangle]
pub extern "C" fn pts_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pts_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub unsafe extern "C" fn pts_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a `rows x cols` matrix from row-major real and imaginary parts.
/// `im` may be NULL for a real matrix.
#[no_mangle]
pub unsafe extern "C" fn pts_matrix_new(
    rows: usize,
    cols: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut PtsMatrix,
) -> PtsStatus {
    guard(|| {
        let n = rows
            .checked_mul(cols)
            .ok_or_else(|| Failure::new(PtsStatus::Shape, "matrix size overflows"))?;
        let re = slice_arg(re, n, "re")?;
        let data = if im.is_null() {
            re.iter().map(|&x| c(x, 0.0)).collect()
        } else {
            let im = slice_arg(im, n, "im")?;
            re.iter().zip(im).map(|(&x, &y)| c(x, y)).collect()
        };
        put_handle(out, PtsMatrix { inner: DenseMatrix::new(rows, cols, data)? })
    })
}

/// One of the built-in 2x2 families at `(a, b, c)`; `family` is a `PtsFamily`.
#[no_mangle]
pub unsafe extern "C" fn pts_matrix_family(
    family: u32,
    a: f64,
    b: f64,
    c: f64,
    out: *mut *mut PtsMatrix,
) -> PtsStatus {
    guard(|| {
        let id = family_id(family)?;
        let p = HamiltonianParams::new(a, b, c)?;
        put_handle(out, PtsMatrix { inner: build_family(id, p) })
    })
}

#[no_mangle]
pub unsafe extern "C" fn pts_matrix_free(m: *mut PtsMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

#[no_mangle]
pub unsafe extern "C" fn pts_matrix_dims(
    m: *const PtsMatrix,
    rows: *mut usize,
    cols: *mut usize,
) -> PtsStatus {
    guard(|| {
        let m = &borrow(m, "matrix")?.inner;
        put(rows, m.rows(), "rows")?;
        put(cols, m.cols(), "cols")
    })
}

#[no_mangle]
pub unsafe extern "C" fn pts_matrix_get(
    m: *const PtsMatrix,
    row: usize,
    col: usize,
    re: *mut f64,
    im: *mut f64,
) -> PtsStatus {
    guard(|| {
        let m = &borrow(m, "matrix")?.inner;
        let z = m.get(row, col).ok_or_else(|| {
            Failure::new(
                PtsStatus::OutOfRange,
                format!("({row}, {col}) outside {}x{}", m.rows(), m.cols()),
            )
        })?;
        put(re, z.re, "re")?;
        put(im, z.im, "im")
    })
}

unsafe fn write_spectrum(
    s: Result<Spectrum, Error>,
    re: *mut f64,
    im: *mut f64,
    cap: usize,
    len_out: *mut usize,
    degenerate: *mut bool,
) -> Result<(), Failure> {
    let s = s?;
    if !degenerate.is_null() {
        degenerate.write(s.degenerate);
    }
    put_complex(&s.eigenvalues, re, im, cap, len_out)
}

/// Eigenvalues in canonical order (Re descending, then Im descending).
/// `degenerate` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn pts_eigenvalues(
    m: *const PtsMatrix,
    re: *mut f64,
    im: *mut f64,
    cap: usize,
    len_out: *mut usize,
    degenerate: *mut bool,
) -> PtsStatus {
    guard(|| {
        let m = &borrow(m, "matrix")?.inner;
        write_spectrum(eigenvalues(m), re, im, cap, len_out, degenerate)
    })
}

/// As [`pts_eigenvalues`] but always through the iterative QR solver.
#[no_mangle]
pub unsafe extern "C" fn pts_eigenvalues_iterative(
    m: *const PtsMatrix,
    re: *mut f64,
    im: *mut f64,
    cap: usize,
    len_out: *mut usize,
    degenerate: *mut bool,
) -> PtsStatus {
    guard(|| {
        let m = &borrow(m, "matrix")?.inner;
        write_spectrum(eig_iterative(m), re, im, cap, len_out, degenerate)
    })
}

unsafe fn parity_arg(signs: *const f64, n: usize) -> Result<SymmetryOperator, Failure> {
    Ok(SymmetryOperator::parity(slice_arg(signs, n, "parity")?)?)
}

/// PT check with parity `diag(signs)`; `tol` is relative to `max(1, ||H||_F)`.
#[no_mangle]
pub unsafe extern "C" fn pts_check_pt(
    h: *const PtsMatrix,
    signs: *const f64,
    n: usize,
    tol: f64,
    out: *mut PtsVerdict,
) -> PtsStatus {
    guard(|| {
        let h = &borrow(h, "matrix")?.inner;
        let p = parity_arg(signs, n)?;
        put(out, verdict(check_pt_symmetry(h, &p, tol)?), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn pts_check_anti_pt(
    h: *const PtsMatrix,
    signs: *const f64,
    n: usize,
    tol: f64,
    out: *mut PtsVerdict,
) -> PtsStatus {
    guard(|| {
        let h = &borrow(h, "matrix")?.inner;
        let p = parity_arg(signs, n)?;
        put(out, verdict(check_anti_pt_symmetry(h, &p, tol)?), "out")
    })
}

unsafe fn parity_matrix(p: *const PtsMatrix) -> Result<SymmetryOperator, Failure> {
    Ok(SymmetryOperator::linear("P", borrow(p, "parity")?.inner.clone())?)
}

/// PT check with an arbitrary invertible parity matrix.
#[no_mangle]
pub unsafe extern "C" fn pts_check_pt_matrix(
    h: *const PtsMatrix,
    parity: *const PtsMatrix,
    tol: f64,
    out: *mut PtsVerdict,
) -> PtsStatus {
    guard(|| {
        let h = &borrow(h, "matrix")?.inner;
        let p = parity_matrix(parity)?;
        put(out, verdict(check_pt_symmetry(h, &p, tol)?), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn pts_check_anti_pt_matrix(
    h: *const PtsMatrix,
    parity: *const PtsMatrix,
    tol: f64,
    out: *mut PtsVerdict,
) -> PtsStatus {
    guard(|| {
        let h = &borrow(h, "matrix")?.inner;
        let p = parity_matrix(parity)?;
        put(out, verdict(check_anti_pt_symmetry(h, &p, tol)?), "out")
    })
}

/// Checks `[H, A] = 0` for an invertible linear operator `A`.
#[no_mangle]
pub unsafe extern "C" fn pts_check_commutes(
    h: *const PtsMatrix,
    op: *const PtsMatrix,
    tol: f64,
    out: *mut PtsVerdict,
) -> PtsStatus {
    guard(|| {
        let h = &borrow(h, "matrix")?.inner;
        let op = SymmetryOperator::linear("A", borrow(op, "operator")?.inner.clone())?;
        put(out, verdict(check_linear_symmetry(h, &op, tol)?), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn pts_template_parse(
    source: *const c_char,
    out: *mut *mut PtsTemplate,
) -> PtsStatus {
    guard(|| {
        let t = parse_template(str_arg(source, "source")?)?;
        put_handle(out, PtsTemplate { inner: Arc::new(t) })
    })
}

#[no_mangle]
pub unsafe extern "C" fn pts_template_load(
    path: *const c_char,
    out: *mut *mut PtsTemplate,
) -> PtsStatus {
    guard(|| {
        let t = load_template_file(str_arg(path, "path")?)?;
        put_handle(out, PtsTemplate { inner: Arc::new(t) })
    })
}

#[no_mangle]
pub unsafe extern "C" fn pts_template_free(t: *mut PtsTemplate) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

#[no_mangle]
pub unsafe extern "C" fn pts_template_dim(t: *const PtsTemplate, dim: *mut usize) -> PtsStatus {
    guard(|| put(dim, borrow(t, "template")?.inner.dim(), "dim"))
}

/// Evaluates the template with `n` parameter names and values.
#[no_mangle]
pub unsafe extern "C" fn pts_template_instantiate(
    t: *const PtsTemplate,
    names: *const *const c_char,
    values: *const f64,
    n: usize,
    out: *mut *mut PtsMatrix,
) -> PtsStatus {
    guard(|| {
        let t = &borrow(t, "template")?.inner;
        let names = slice_arg(names, n, "names")?;
        let values = slice_arg(values, n, "values")?;
        let mut assignment = Assignment::new();
        for (&name, &v) in names.iter().zip(values) {
            assignment.insert(str_arg(name, "parameter name")?.to_string(), v);
        }
        put_handle(out, PtsMatrix { inner: t.instantiate(&assignment)? })
    })
}

fn new_spec(family: FamilySource, param: &str, lo: f64, hi: f64, steps: usize) -> PtsSweepSpec {
    PtsSweepSpec {
        inner: SweepSpec {
            family,
            sweep_param: param.to_string(),
            range: (lo, hi),
            steps,
            bindings: Default::default(),
            quantity: OutputQuantity::Eigenvalue,
        },
    }
}

/// Sweep over a built-in family. Bind the other parameters with
/// `pts_sweep_spec_set_const` / `pts_sweep_spec_set_alias`; the spec is
/// validated when run.
#[no_mangle]
pub unsafe extern "C" fn pts_sweep_spec_new_family(
    family: u32,
    param: *const c_char,
    lo: f64,
    hi: f64,
    steps: usize,
    out: *mut *mut PtsSweepSpec,
) -> PtsStatus {
    guard(|| {
        let id = family_id(family)?;
        let param = str_arg(param, "param")?;
        put_handle(out, new_spec(id.into(), param, lo, hi, steps))
    })
}

/// Sweep over a template. The spec keeps its own reference, so the
/// template handle may be freed afterwards.
#[no_mangle]
pub unsafe extern "C" fn pts_sweep_spec_new_template(
    t: *const PtsTemplate,
    param: *const c_char,
    lo: f64,
    hi: f64,
    steps: usize,
    out: *mut *mut PtsSweepSpec,
) -> PtsStatus {
    guard(|| {
        let t = borrow(t, "template")?.inner.clone();
        let param = str_arg(param, "param")?;
        put_handle(out, new_spec(FamilySource::Template(t), param, lo, hi, steps))
    })
}

/// One of the preset cases 1 to 4.
#[no_mangle]
pub unsafe extern "C" fn pts_sweep_spec_preset(case: u32, out: *mut *mut PtsSweepSpec) -> PtsStatus {
    guard(|| put_handle(out, PtsSweepSpec { inner: preset_case(case)? }))
}

#[no_mangle]
pub unsafe extern "C" fn pts_sweep_spec_free(s: *mut PtsSweepSpec) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

#[no_mangle]
pub unsafe extern "C" fn pts_sweep_spec_set_const(
    s: *mut PtsSweepSpec,
    name: *const c_char,
    value: f64,
) -> PtsStatus {
    guard(|| {
        let s = &mut borrow_mut(s, "spec")?.inner;
        let name = str_arg(name, "name")?.to_string();
        s.bindings.insert(name, Binding::Const(value));
        Ok(())
    })
}

/// Makes `name` follow parameter `target` along the sweep.
#[no_mangle]
pub unsafe extern "C" fn pts_sweep_spec_set_alias(
    s: *mut PtsSweepSpec,
    name: *const c_char,
    target: *const c_char,
) -> PtsStatus {
    guard(|| {
        let s = &mut borrow_mut(s, "spec")?.inner;
        let name = str_arg(name, "name")?.to_string();
        let target = str_arg(target, "target")?.to_string();
        s.bindings.insert(name, Binding::Alias(target));
        Ok(())
    })
}

/// `q` is a `PtsQuantity`.
#[no_mangle]
pub unsafe extern "C" fn pts_sweep_spec_set_quantity(s: *mut PtsSweepSpec, q: u32) -> PtsStatus {
    guard(|| {
        borrow_mut(s, "spec")?.inner.quantity = quantity(q)?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn pts_sweep_spec_set_steps(s: *mut PtsSweepSpec, steps: usize) -> PtsStatus {
    guard(|| {
        borrow_mut(s, "spec")?.inner.steps = steps;
        Ok(())
    })
}

/// Exceptional points of the eigenvalues along the sweep, each refined to
/// within `refine_tol`.
#[no_mangle]
pub unsafe extern "C" fn pts_exceptional_points(
    s: *const PtsSweepSpec,
    refine_tol: f64,
    out: *mut f64,
    cap: usize,
    len_out: *mut usize,
) -> PtsStatus {
    guard(|| {
        let s = &borrow(s, "spec")?.inner;
        let eps = find_exceptional_points(s, refine_tol)?;
        put_reals(&eps, out, cap, len_out)
    })
}

#[no_mangle]
pub unsafe extern "C" fn pts_sweep_run(
    s: *const PtsSweepSpec,
    out: *mut *mut PtsSweepResult,
) -> PtsStatus {
    guard(|| {
        let s = &borrow(s, "spec")?.inner;
        let result = run_sweep(s)?;
        put_handle(out, PtsSweepResult { bundle: ReportBundle::from_sweep(s, result) })
    })
}

#[no_mangle]
pub unsafe extern "C" fn pts_sweep_result_free(r: *mut PtsSweepResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

#[no_mangle]
pub unsafe extern "C" fn pts_sweep_result_shape(
    r: *const PtsSweepResult,
    points: *mut usize,
    branches: *mut usize,
) -> PtsStatus {
    guard(|| {
        let r = borrow(r, "result")?.result();
        put(points, r.grid.len(), "points")?;
        put(branches, r.branch_count(), "branches")
    })
}

#[no_mangle]
pub unsafe extern "C" fn pts_sweep_result_grid(
    r: *const PtsSweepResult,
    out: *mut f64,
    cap: usize,
    len_out: *mut usize,
) -> PtsStatus {
    guard(|| put_reals(&borrow(r, "result")?.result().grid, out, cap, len_out))
}

/// Tracked values of one branch, one per grid point.
#[no_mangle]
pub unsafe extern "C" fn pts_sweep_result_branch(
    r: *const PtsSweepResult,
    branch: usize,
    re: *mut f64,
    im: *mut f64,
    cap: usize,
    len_out: *mut usize,
) -> PtsStatus {
    guard(|| {
        let r = borrow(r, "result")?.result();
        let values = r.branches.get(branch).ok_or_else(|| {
            Failure::new(
                PtsStatus::OutOfRange,
                format!("branch {branch} of {}", r.branch_count()),
            )
        })?;
        put_complex(values, re, im, cap, len_out)
    })
}

#[no_mangle]
pub unsafe extern "C" fn pts_sweep_result_exceptional_points(
    r: *const PtsSweepResult,
    out: *mut f64,
    cap: usize,
    len_out: *mut usize,
) -> PtsStatus {
    guard(|| put_reals(&borrow(r, "result")?.result().exceptional_points, out, cap, len_out))
}

/// Asymmetry at grid point `index`. `has_value` is false where the mirror
/// point falls outside the sweep range.
#[no_mangle]
pub unsafe extern "C" fn pts_sweep_result_asymmetry(
    r: *const PtsSweepResult,
    index: usize,
    has_value: *mut bool,
    value: *mut f64,
) -> PtsStatus {
    guard(|| {
        let r = borrow(r, "result")?.result();
        let a = r.asymmetry.values.get(index).ok_or_else(|| {
            Failure::new(
                PtsStatus::OutOfRange,
                format!("index {index} of {}", r.grid.len()),
            )
        })?;
        put(has_value, a.is_some(), "has_value")?;
        put(value, a.unwrap_or(f64::NAN), "value")
    })
}

#[no_mangle]
pub unsafe extern "C" fn pts_sweep_result_to_json(
    r: *const PtsSweepResult,
    out: *mut *mut c_char,
) -> PtsStatus {
    guard(|| put_string(out, report::to_json(&borrow(r, "result")?.bundle)?))
}

#[no_mangle]
pub unsafe extern "C" fn pts_sweep_result_to_csv(
    r: *const PtsSweepResult,
    out: *mut *mut c_char,
) -> PtsStatus {
    guard(|| put_string(out, report::to_csv(&borrow(r, "result")?.bundle)?))
}

/// `which` is a `PtsComponent`.
#[no_mangle]
pub unsafe extern "C" fn pts_sweep_result_to_svg(
    r: *const PtsSweepResult,
    which: u32,
    out: *mut *mut c_char,
) -> PtsStatus {
    guard(|| {
        let which = component(which)?;
        put_string(out, report::to_svg(&borrow(r, "result")?.bundle, which)?)
    })
}
