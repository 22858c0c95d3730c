//! C ABI over `kmsoergel`.
//!
//! Objects are opaque heap handles released with their `_free` function.
//! Every call returns a [`KmsStatus`]; on failure the message is available
//! from [`kms_last_error`]. Strings handed out by the library must be
//! released with [`kms_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use kmsoergel::cli::{self, CliError, Config};
use kmsoergel::laurent::{self, LaurentPoly};
use kmsoergel::weyl;
use kmsoergel::{Parabolic, RootDatum};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KmsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Validation = 4,
    Compute = 5,
    Panic = 6,
}

/// A validated root datum together with its named automorphisms.
pub struct KmsDatum {
    config: Config,
}

/// A Laurent polynomial over the lattice of the datum it was created with.
pub struct KmsPoly {
    poly: LaurentPoly,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

struct Failure(KmsStatus, String);

impl From<CliError> for Failure {
    fn from(e: CliError) -> Self {
        let status = match e {
            CliError::Parse { .. } | CliError::Usage(_) => KmsStatus::Parse,
            CliError::Validation { .. } => KmsStatus::Validation,
            CliError::Compute(_) => KmsStatus::Compute,
        };
        Failure(status, e.to_string())
    }
}

fn compute(e: impl std::fmt::Display) -> Failure {
    Failure(KmsStatus::Compute, e.to_string())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> KmsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            KmsStatus::Ok
        }
        Ok(Err(Failure(s, m))) => {
            set_error(m);
            s
        }
        Err(_) => {
            set_error("internal panic");
            KmsStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(KmsStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure(KmsStatus::InvalidUtf8, e.to_string()))
}

unsafe fn ref_arg<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(KmsStatus::NullPointer, "null handle".into()))
}

unsafe fn slice_arg<'a, T>(p: *const T, len: usize) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure(KmsStatus::NullPointer, "null array".into()));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(KmsStatus::NullPointer, "null output pointer".into()));
    }
    out.write(value);
    Ok(())
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

fn parabolic(d: &RootDatum, idx: &[usize]) -> Result<Parabolic, Failure> {
    let j = Parabolic::new(idx.iter().copied());
    d.check_indices(&j).map_err(|e| Failure(KmsStatus::Validation, e.to_string()))?;
    Ok(j)
}

fn poly_out(out: *mut *mut KmsPoly, poly: LaurentPoly) -> Result<(), Failure> {
    unsafe { write_out(out, Box::into_raw(Box::new(KmsPoly { poly }))) }
}

/// Message of the last failed call on this thread, or NULL. Free with
/// `kms_string_free`.
#[no_mangle]
pub extern "C" fn kms_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |s| s.clone().into_raw()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn kms_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and validates a root-datum JSON document.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kms_datum_from_json(json: *const c_char, out: *mut *mut KmsDatum) -> KmsStatus {
    guard(|| {
        let config = cli::parse_config_str(str_arg(json)?, "<json>")?;
        write_out(out, Box::into_raw(Box::new(KmsDatum { config })))
    })
}

/// Built-in datum by name (`A2`, `B2`, `G2`, `A1xA1`, `affineA1`, ...).
///
/// # Safety
/// `name` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kms_datum_standard(name: *const c_char, out: *mut *mut KmsDatum) -> KmsStatus {
    guard(|| {
        let name = str_arg(name)?;
        let d = RootDatum::standard(name).ok_or_else(|| Failure(KmsStatus::Validation, format!("unknown datum {name:?}")))?;
        write_out(out, Box::into_raw(Box::new(KmsDatum { config: Config::from_datum(d) })))
    })
}

/// # Safety
/// `d` must be NULL or a handle from this library, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kms_datum_free(d: *mut KmsDatum) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Lattice rank and number of simple roots.
///
/// # Safety
/// `d` must be a live handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn kms_datum_shape(d: *const KmsDatum, rank: *mut usize, num_simple: *mut usize) -> KmsStatus {
    guard(|| {
        let d = &ref_arg(d)?.config.datum;
        write_out(rank, d.rank())?;
        write_out(num_simple, d.num_simple())
    })
}

/// Order of W_J, or `KMS_STATUS_COMPUTE` when W_J is infinite.
///
/// # Safety
/// `d` must be a live handle, `parabolic` must hold `len` indices.
#[no_mangle]
pub unsafe extern "C" fn kms_weyl_order(d: *const KmsDatum, parabolic: *const usize, len: usize, out: *mut usize) -> KmsStatus {
    guard(|| {
        let d = &ref_arg(d)?.config.datum;
        let j = self::parabolic(d, slice_arg(parabolic, len)?)?;
        write_out(out, weyl::parabolic_order(d, &j).map_err(compute)?)
    })
}

/// Parses a polynomial in the `c*x^[a1,...,ar] + ...` text form.
///
/// # Safety
/// `d` must be a live handle, `text` nul-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kms_poly_parse(d: *const KmsDatum, text: *const c_char, out: *mut *mut KmsPoly) -> KmsStatus {
    guard(|| {
        let d = &ref_arg(d)?.config.datum;
        let p = LaurentPoly::parse(str_arg(text)?, d.rank()).map_err(|e| Failure(KmsStatus::Parse, e.to_string()))?;
        poly_out(out, p)
    })
}

/// # Safety
/// `p` must be NULL or a handle from this library, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kms_poly_free(p: *mut KmsPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kms_poly_to_string(p: *const KmsPoly, out: *mut *mut c_char) -> KmsStatus {
    guard(|| {
        let p = ref_arg(p)?;
        write_out(out, c_string(p.poly.to_text()))
    })
}

/// Value at the identity (the dimension, for characters), as a decimal string.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kms_poly_evaluate_at_one(p: *const KmsPoly, out: *mut *mut c_char) -> KmsStatus {
    guard(|| {
        let p = ref_arg(p)?;
        write_out(out, c_string(p.poly.evaluate_at_one().to_string()))
    })
}

/// Applies the Demazure operator of a word (0-based indices, applied right
/// to left as a composition).
///
/// # Safety
/// Handles must be live, `word` must hold `len` indices, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kms_demazure(
    d: *const KmsDatum,
    word: *const usize,
    len: usize,
    p: *const KmsPoly,
    out: *mut *mut KmsPoly,
) -> KmsStatus {
    guard(|| {
        let d = &ref_arg(d)?.config.datum;
        let word = slice_arg(word, len)?;
        if let Some(i) = word.iter().find(|&&i| i >= d.num_simple()) {
            return Err(Failure(KmsStatus::Validation, format!("index {i} out of range")));
        }
        let r = laurent::demazure_word(d, word, &ref_arg(p)?.poly).map_err(compute)?;
        poly_out(out, r)
    })
}

/// Character of the irreducible W_J-representation of highest weight `weight`.
///
/// # Safety
/// `d` must be a live handle, `weight` must hold `rank` entries and
/// `parabolic` `plen` indices; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kms_weyl_character(
    d: *const KmsDatum,
    weight: *const i64,
    rank: usize,
    parabolic: *const usize,
    plen: usize,
    out: *mut *mut KmsPoly,
) -> KmsStatus {
    guard(|| {
        let d = &ref_arg(d)?.config.datum;
        if rank != d.rank() {
            return Err(Failure(KmsStatus::Validation, format!("weight has {rank} entries, lattice rank is {}", d.rank())));
        }
        let j = self::parabolic(d, slice_arg(parabolic, plen)?)?;
        let ch = laurent::weyl_character(d, &j, slice_arg(weight, rank)?).map_err(compute)?;
        poly_out(out, ch)
    })
}

/// Minimal representatives of W_J \ W / W_K as a JSON array of reduced words.
///
/// # Safety
/// `d` must be a live handle, index arrays must hold the given lengths,
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kms_double_cosets(
    d: *const KmsDatum,
    left: *const usize,
    llen: usize,
    right: *const usize,
    rlen: usize,
    max_len: usize,
    out: *mut *mut c_char,
) -> KmsStatus {
    guard(|| {
        let d = &ref_arg(d)?.config.datum;
        let j = parabolic(d, slice_arg(left, llen)?)?;
        let k = parabolic(d, slice_arg(right, rlen)?)?;
        let table = weyl::double_coset_table(d, &j, &k, max_len).map_err(compute)?;
        let words: Vec<String> = table
            .reps
            .iter()
            .map(|w| format!("[{}]", w.word().iter().map(usize::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write_out(out, c_string(format!("[{}]", words.join(","))))
    })
}

/// Runs a command-line invocation (`argv[0]` is the program name) and
/// returns its stdout text and exit code.
///
/// # Safety
/// `argv` must hold `argc` nul-terminated strings; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn kms_cli_run(argc: c_int, argv: *const *const c_char, out: *mut *mut c_char, exit_code: *mut c_int) -> KmsStatus {
    guard(|| {
        let n = usize::try_from(argc).map_err(|_| Failure(KmsStatus::Validation, "negative argc".into()))?;
        let args = slice_arg(argv, n)?.iter().map(|&a| str_arg(a).map(str::to_string)).collect::<Result<Vec<_>, _>>()?;
        let (text, code) = cli::run_args(args);
        write_out(out, c_string(text))?;
        write_out(exit_code, code)
    })
}
