//! C ABI over the `dressed` engine.
//!
//! A `DressedModel` handle owns the model parameters and the tabulated
//! frequency distribution, so every query after construction is cheap.
//! Functions return a [`DressedStatus`]; on failure the message is kept per
//! thread and can be copied out with [`dressed_last_error`]. Panics never
//! cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dressed::chifunc::{ChiEngine, TestFunction};
use dressed::fano::{pi_distribution, PiDistribution, PiGrid};
use dressed::model::{self, ModelParams};
use dressed::num_complex::Complex64;
use dressed::observables;
use dressed::pair::{self, PairParams};
use dressed::Error;

/// Status codes. The first four match the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DressedStatus {
    Ok = 0,
    /// Invalid configuration or argument.
    Config = 1,
    /// Physics or threshold violation.
    Physics = 2,
    /// Numerical failure.
    Numerical = 3,
    NullPointer = 4,
    /// A Rust panic was caught.
    Panic = 5,
}

/// Opaque model handle.
pub struct DressedModel {
    params: ModelParams,
    pi: PiDistribution,
}

/// Atomic ground-state moments in reduced units.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DressedMoments {
    pub omega_t: f64,
    pub omega0_renorm: f64,
    pub avg_omega: f64,
    pub avg_inv_omega: f64,
    pub var_x: f64,
    pub var_p: f64,
    pub uncertainty_product: f64,
    /// In units of `ħΩ₀`.
    pub atom_energy: f64,
    pub mean_excitation: f64,
    pub a_squared: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> DressedStatus {
    match e.exit_code() {
        1 => DressedStatus::Config,
        2 => DressedStatus::Physics,
        _ => DressedStatus::Numerical,
    }
}

fn guard<F: FnOnce() -> Result<(), (DressedStatus, String)>>(f: F) -> DressedStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DressedStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            DressedStatus::Panic
        }
    }
}

trait IntoFfi<T> {
    fn ffi(self) -> Result<T, (DressedStatus, String)>;
}

impl<T> IntoFfi<T> for dressed::Result<T> {
    fn ffi(self) -> Result<T, (DressedStatus, String)> {
        self.map_err(|e| (status_of(&e), e.to_string()))
    }
}

fn null(what: &str) -> (DressedStatus, String) {
    (DressedStatus::NullPointer, format!("{what} is null"))
}

unsafe fn model_ref<'a>(m: *const DressedModel) -> Result<&'a DressedModel, (DressedStatus, String)> {
    m.as_ref().ok_or_else(|| null("model"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), (DressedStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

/// Creates a model in reduced units (`ħ = 1`, `V² = A ω³ e^{−ω/ω_c}`) and
/// tabulates its frequency distribution. On success `*out` receives a
/// handle to be released with [`dressed_model_free`].
///
/// # Safety
/// `out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn dressed_model_new(
    omega0: f64,
    omega_c: f64,
    amplitude: f64,
    out: *mut *mut DressedModel,
) -> DressedStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let params = ModelParams::reduced(omega0, omega_c, amplitude).ffi()?;
        let pi = pi_distribution(&params, &PiGrid::default()).ffi()?;
        out.write(Box::into_raw(Box::new(DressedModel { params, pi })));
        Ok(())
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `model` must be null or a handle from [`dressed_model_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dressed_model_free(model: *mut DressedModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// `∫π dω` as tabulated.
///
/// # Safety
/// `model` must be a live handle; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn dressed_model_pi_norm(model: *const DressedModel, out: *mut f64) -> DressedStatus {
    guard(|| {
        let m = model_ref(model)?;
        write_out(out, m.pi.norm)
    })
}

/// # Safety
/// `model` must be a live handle; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn dressed_model_moments(
    model: *const DressedModel,
    out: *mut DressedMoments,
) -> DressedStatus {
    guard(|| {
        let m = model_ref(model)?;
        let s = observables::compute_moments(&m.params, &m.pi).ffi()?;
        let value = DressedMoments {
            omega_t: model::threshold_frequency(&m.params),
            omega0_renorm: model::renormalized_frequency(&m.params).ffi()?,
            avg_omega: s.avg_omega,
            avg_inv_omega: s.avg_inv_omega,
            var_x: s.var_x_quadrature,
            var_p: s.var_p_quadrature,
            uncertainty_product: s.uncertainty_product(),
            atom_energy: s.atom_energy / m.params.omega0,
            mean_excitation: s.mean_excitation,
            a_squared: s.a_squared,
        };
        write_out(out, value)
    })
}

/// Virtual-photon density `N(ω)`.
///
/// # Safety
/// `model` must be a live handle; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn dressed_model_photon_density(
    model: *const DressedModel,
    omega: f64,
    out: *mut f64,
) -> DressedStatus {
    guard(|| {
        let m = model_ref(model)?;
        if !(omega >= 0.0 && omega.is_finite()) {
            return Err((DressedStatus::Physics, format!("frequency {omega} must be non-negative")));
        }
        write_out(out, observables::photon_density_at(&m.params, &m.pi, omega))
    })
}

/// `⟨(a+a†)(b(ω)+b†(ω))⟩` and `⟨[−i(a−a†)][−i(b(ω)−b†(ω))]⟩`.
///
/// # Safety
/// `model` must be a live handle; both outputs valid for writing.
#[no_mangle]
pub unsafe extern "C" fn dressed_model_field_correlations(
    model: *const DressedModel,
    omega: f64,
    x_b_plus: *mut f64,
    p_b_minus: *mut f64,
) -> DressedStatus {
    guard(|| {
        let m = model_ref(model)?;
        if !(omega > 0.0 && omega.is_finite()) {
            return Err((DressedStatus::Physics, format!("frequency {omega} must be positive")));
        }
        if p_b_minus.is_null() {
            return Err(null("output pointer"));
        }
        write_out(x_b_plus, observables::x_b_plus_at(&m.params, &m.pi, omega))?;
        write_out(p_b_minus, observables::p_b_minus_at(&m.params, &m.pi, omega))
    })
}

/// `ln χ` for a purely atomic argument `η = eta_re + i eta_im`.
///
/// # Safety
/// `model` must be a live handle; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn dressed_model_log_chi_atomic(
    model: *const DressedModel,
    eta_re: f64,
    eta_im: f64,
    out: *mut f64,
) -> DressedStatus {
    guard(|| {
        let m = model_ref(model)?;
        let engine = ChiEngine::new(&m.params, &m.pi, &[]).ffi()?;
        let v = engine.log_chi(&TestFunction::atomic(Complex64::new(eta_re, eta_im))).ffi()?;
        write_out(out, v)
    })
}

/// Ground energy of two oscillators with coupling `g`, `|g| < 1`.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn dressed_pair_ground_energy(
    mass: f64,
    omega0: f64,
    g: f64,
    out: *mut f64,
) -> DressedStatus {
    guard(|| {
        let p = PairParams::new(mass, omega0, g).ffi()?;
        write_out(out, pair::pair_ground_energy(&p).ffi()?)
    })
}

/// Copies the calling thread's last error message, NUL-terminated and
/// truncated to `len` bytes, into `buf`. Returns the full message length
/// without the terminator, or 0 if there is no message.
///
/// # Safety
/// `buf` must be null or valid for writing `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn dressed_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| match e.borrow().as_ref() {
        None => 0,
        Some(msg) => {
            let bytes = msg.as_bytes();
            if !buf.is_null() && len > 0 {
                let n = bytes.len().min(len - 1);
                ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
                *buf.add(n) = 0;
            }
            bytes.len()
        }
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dressed_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
