//! C ABI for `pureshard`.
//!
//! Every fallible function returns a [`PsStatus`] and writes results through out-pointers.
//! Handles are opaque and owned by the caller, who releases them with the matching `*_free`.
//! The message of the most recent failure on the calling thread is available from
//! [`ps_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pureshard::arrangement::{builtin_arrangement, parse_arrangement, Family};
use pureshard::coxbraid::CoxBraid;
use pureshard::coxeter::CoxeterArrangement;
use pureshard::error::Error;
use pureshard::salvetti::Salvetti;
use pureshard::shardmonoid::ShardMonoid;
use pureshard::verify::{self, Options};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Unsupported = 4,
    ResourceLimit = 5,
    Internal = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// An arrangement together with its poset of regions, shards and Salvetti complex.
pub struct PsArrangement {
    sal: Salvetti,
}

/// Summary of the interval `[1, Δ²]` of an arrangement.
pub struct PsMonoid {
    elements: usize,
    chains: u128,
    lattice: bool,
    rank_generating_function: Vec<usize>,
    crackle: Vec<usize>,
    pow: Vec<usize>,
    ranks: Vec<usize>,
}

/// A finite Coxeter group with its reflection arrangement.
pub struct PsCoxeter {
    ca: CoxeterArrangement,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).unwrap_or_default());
}

fn status_of(e: &Error) -> PsStatus {
    match e {
        Error::Parse(_) | Error::Json(_) => PsStatus::Parse,
        Error::InvalidArrangement(_) | Error::Precondition(_) | Error::Io(_) => PsStatus::InvalidArgument,
        Error::Unsupported(_) => PsStatus::Unsupported,
        Error::ResourceLimit(_) => PsStatus::ResourceLimit,
        Error::Internal(_) => PsStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), PsStatus>) -> PsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PsStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside pureshard");
            PsStatus::Panic
        }
    }
}

fn fail(e: Error) -> PsStatus {
    set_error(e.to_string());
    status_of(&e)
}

fn null(what: &str) -> PsStatus {
    set_error(format!("{what} is null"));
    PsStatus::NullPointer
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, PsStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(format!("{what} is not UTF-8"));
        PsStatus::InvalidArgument
    })
}

unsafe fn read_slice<'a>(p: *const usize, len: usize, what: &str) -> Result<&'a [usize], PsStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), PsStatus> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn handle<'a, T>(h: *const T) -> Result<&'a T, PsStatus> {
    h.as_ref().ok_or_else(|| null("handle"))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ps_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread. Valid until the next failing call on the thread.
#[no_mangle]
pub extern "C" fn ps_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must be null or a string returned by this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn ps_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn new_arrangement(arr: Result<pureshard::arrangement::Arrangement, Error>, out: *mut *mut PsArrangement) -> Result<(), PsStatus> {
    if out.is_null() {
        return Err(null("out"));
    }
    let sal = arr.and_then(Salvetti::new).map_err(fail)?;
    out.write(Box::into_raw(Box::new(PsArrangement { sal })));
    Ok(())
}

/// Build a built-in arrangement from a tag such as `I2:4`, `A3`, `B3` or `D4`.
///
/// # Safety
/// `tag` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ps_arrangement_builtin(tag: *const c_char, out: *mut *mut PsArrangement) -> PsStatus {
    guard(|| {
        let tag = read_str(tag, "tag")?;
        new_arrangement(Family::parse(tag).and_then(builtin_arrangement), out)
    })
}

/// Build an arrangement from its JSON description.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ps_arrangement_from_json(json: *const c_char, out: *mut *mut PsArrangement) -> PsStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        new_arrangement(parse_arrangement(text), out)
    })
}

/// # Safety
/// `h` must be null or a handle from `ps_arrangement_*` that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn ps_arrangement_free(h: *mut PsArrangement) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Number of hyperplanes, regions and shards.
///
/// # Safety
/// `h` must be a live handle; each out-pointer must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn ps_arrangement_counts(
    h: *const PsArrangement,
    hyperplanes: *mut usize,
    regions: *mut usize,
    shards: *mut usize,
) -> PsStatus {
    guard(|| {
        let a = handle(h)?;
        if !hyperplanes.is_null() {
            hyperplanes.write(a.sal.arr.len());
        }
        if !regions.is_null() {
            regions.write(a.sal.poset.len());
        }
        if !shards.is_null() {
            shards.write(a.sal.shards.len());
        }
        Ok(())
    })
}

/// Shard id of each cover edge. `out` receives `edges` entries when `cap` is large enough;
/// `len` always receives the number of cover edges.
///
/// # Safety
/// `h` must be a live handle, `out` must have room for `cap` entries, `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_arrangement_edge_shards(h: *const PsArrangement, out: *mut usize, cap: usize, len: *mut usize) -> PsStatus {
    guard(|| {
        let a = handle(h)?;
        copy_out(&a.sal.shards.edge_shard, out, cap, len)
    })
}

unsafe fn copy_out(values: &[usize], out: *mut usize, cap: usize, len: *mut usize) -> Result<(), PsStatus> {
    write_out(len, values.len(), "len")?;
    if values.len() > cap {
        set_error(format!("buffer holds {cap} entries, {} needed", values.len()));
        return Err(PsStatus::BufferTooSmall);
    }
    if !values.is_empty() {
        if out.is_null() {
            return Err(null("out"));
        }
        ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    }
    Ok(())
}

/// Decide whether two words over shard loops (arrays of shard ids) are equal in the fundamental group.
///
/// # Safety
/// `h` must be a live handle, `a`/`b` must point to `a_len`/`b_len` entries, `equal` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_loops_equal(
    h: *const PsArrangement,
    a: *const usize,
    a_len: usize,
    b: *const usize,
    b_len: usize,
    equal: *mut bool,
) -> PsStatus {
    guard(|| {
        let s = &handle(h)?.sal;
        let (a, b) = (read_slice(a, a_len, "a")?, read_slice(b, b_len, "b")?);
        let x = s.loop_of_word(a).map_err(fail)?;
        let y = s.loop_of_word(b).map_err(fail)?;
        write_out(equal, x == y, "equal")
    })
}

/// Enumerate `[1, Δ²]` with a state budget (0 for the default).
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ps_monoid_new(h: *const PsArrangement, budget: usize, out: *mut *mut PsMonoid) -> PsStatus {
    guard(|| {
        let sal = &handle(h)?.sal;
        if out.is_null() {
            return Err(null("out"));
        }
        let budget = if budget == 0 { pureshard::salvetti::DEFAULT_BUDGET } else { budget };
        let sm = ShardMonoid::new(sal, budget).map_err(fail)?;
        let regions = 0..sal.poset.len();
        let crackle: Vec<usize> = regions.clone().map(|c| sm.crackle(c)).collect::<Result<_, _>>().map_err(fail)?;
        let pow: Vec<usize> = regions.map(|c| sm.pow(c)).collect::<Result<_, _>>().map_err(fail)?;
        let ip = &sm.interval;
        let m = PsMonoid {
            elements: ip.len(),
            chains: ip.max_chain_count(),
            lattice: ip.lattice_check().0,
            rank_generating_function: ip.rank_generating_function(),
            crackle,
            pow,
            ranks: ip.elements.iter().map(|e| e.rank).collect(),
        };
        out.write(Box::into_raw(Box::new(m)));
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a handle from `ps_monoid_new` that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn ps_monoid_free(m: *mut PsMonoid) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Element count, number of maximal chains (saturating at `u64::MAX`) and the lattice property.
///
/// # Safety
/// `m` must be a live handle; each out-pointer must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn ps_monoid_summary(m: *const PsMonoid, elements: *mut usize, chains: *mut u64, lattice: *mut bool) -> PsStatus {
    guard(|| {
        let m = handle(m)?;
        if !elements.is_null() {
            elements.write(m.elements);
        }
        if !chains.is_null() {
            chains.write(u64::try_from(m.chains).unwrap_or(u64::MAX));
        }
        if !lattice.is_null() {
            lattice.write(m.lattice);
        }
        Ok(())
    })
}

/// Rank generating function of the interval.
///
/// # Safety
/// `m` must be a live handle, `out` must have room for `cap` entries, `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_monoid_rank_generating_function(m: *const PsMonoid, out: *mut usize, cap: usize, len: *mut usize) -> PsStatus {
    guard(|| copy_out(&handle(m)?.rank_generating_function, out, cap, len))
}

/// Interval element and rank of `Crackle(region)` (or `Pow(region)` when `pow` is true).
///
/// # Safety
/// `m` must be a live handle; `element` and `rank` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn ps_monoid_image(m: *const PsMonoid, region: usize, pow: bool, element: *mut usize, rank: *mut usize) -> PsStatus {
    guard(|| {
        let m = handle(m)?;
        let images = if pow { &m.pow } else { &m.crackle };
        let Some(&id) = images.get(region) else {
            set_error(format!("no region {region}"));
            return Err(PsStatus::InvalidArgument);
        };
        if !element.is_null() {
            element.write(id);
        }
        if !rank.is_null() {
            rank.write(m.ranks[id]);
        }
        Ok(())
    })
}

/// Build a finite Coxeter group from a tag such as `I2:4`, `A3`, `B3`.
///
/// # Safety
/// `tag` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ps_coxeter_new(tag: *const c_char, out: *mut *mut PsCoxeter) -> PsStatus {
    guard(|| {
        let tag = read_str(tag, "tag")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let ca = Family::parse(tag).and_then(CoxeterArrangement::new).map_err(fail)?;
        out.write(Box::into_raw(Box::new(PsCoxeter { ca })));
        Ok(())
    })
}

/// # Safety
/// `h` must be null or a handle from `ps_coxeter_new` that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn ps_coxeter_free(h: *mut PsCoxeter) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Group order, rank and length of the longest element.
///
/// # Safety
/// `h` must be a live handle; each out-pointer must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn ps_coxeter_info(h: *const PsCoxeter, order: *mut usize, rank: *mut usize, longest: *mut usize) -> PsStatus {
    guard(|| {
        let g = &handle(h)?.ca.group;
        if !order.is_null() {
            order.write(g.order());
        }
        if !rank.is_null() {
            rank.write(g.rank());
        }
        if !longest.is_null() {
            longest.write(g.length[g.w0]);
        }
        Ok(())
    })
}

/// A word for `Snap(w)`, where `w` is given by a word over 0-based generator indices.
///
/// # Safety
/// `h` must be a live handle, `word` must point to `word_len` entries, `out` must have room for
/// `cap` entries and `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_coxeter_snap(
    h: *const PsCoxeter,
    word: *const usize,
    word_len: usize,
    out: *mut usize,
    cap: usize,
    len: *mut usize,
) -> PsStatus {
    guard(|| {
        let ca = &handle(h)?.ca;
        let word = read_slice(word, word_len, "word")?;
        if let Some(&bad) = word.iter().find(|&&i| i >= ca.group.rank()) {
            set_error(format!("generator index {bad} out of range"));
            return Err(PsStatus::InvalidArgument);
        }
        let cb = CoxBraid::new(ca);
        let snap = cb.braids.snap(ca.group.product(word));
        let letters = cb.braids.word(&snap).ok_or_else(|| fail(Error::Internal("Snap is not positive".into())))?;
        copy_out(&letters, out, cap, len)
    })
}

/// Run a verification suite on its default targets. `report` receives a JSON report to be
/// released with `ps_string_free`; `passed` receives the verdict.
///
/// # Safety
/// `suite` must be a NUL-terminated string; `report` and `passed` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn ps_verify(suite: *const c_char, report: *mut *mut c_char, passed: *mut bool) -> PsStatus {
    guard(|| {
        let name = read_str(suite, "suite")?;
        let r = verify::run_suite(name, &Options::default()).map_err(fail)?;
        if !passed.is_null() {
            passed.write(r.passed());
        }
        if !report.is_null() {
            let text = r.to_json().to_string();
            report.write(CString::new(text).map_err(|_| PsStatus::Internal)?.into_raw());
        }
        Ok(())
    })
}
