//! The sign conventions of the engine, in one place.
//!
//! All signs are computed as integer exponents `e` of `(−1)^e` and only
//! mapped into the field at the end, so characteristic 2 still goes
//! through the same parity bookkeeping.
//!
//! Koszul rule: `(φ⊗ψ)(x⊗y) = (−1)^{|ψ||x|} φ(x)⊗ψ(y)`.
//!
//! Suspension: `s` has degree −1 and `|sa| = |a| − 1`.  The operations
//! `b_n` on `A[1]` and `m_n` on `A` are related by
//!
//! ```text
//! b_n(sa_1, …, sa_n) = (−1)^{n + Σ_i (n−i)|a_i|} s m_n(a_1, …, a_n)
//! f̃_n(sa_1, …, sa_n) = (−1)^{Σ_i (n−i)|a_i|}     s f_n(a_1, …, a_n)
//! ```
//!
//! (indices `i` from 1).  Under this identification the sign-free
//! identities on `A[1]` turn into the signed identities on `A` with
//! exponents `r + st` for operations and `ε(i_1,…,i_s) = Σ_j (s−j) i_j +
//! s(s+1)/2` against `r + st + s` for morphisms, and an element `α`
//! is Maurer–Cartan exactly when `Σ b_n((sα)^n) = 0`.

/// Reduces an exponent to `0` or `1`.
#[inline]
pub fn parity(e: i64) -> i64 {
    e.rem_euclid(2)
}

/// `(−1)^e` as an integer.
#[inline]
pub fn sign(e: i64) -> i64 {
    if parity(e) == 0 {
        1
    } else {
        -1
    }
}

/// Koszul exponent for moving a map of degree `map_deg` past inputs of
/// the given degrees.
#[inline]
pub fn koszul_past(map_deg: i64, passed: &[i64]) -> i64 {
    map_deg * passed.iter().sum::<i64>()
}

/// Exponent of `(1^{⊗r} ⊗ φ ⊗ 1^{⊗t})` applied to a tuple with the given
/// degrees, where `φ` has degree `map_deg`.
#[inline]
pub fn block_sign(map_deg: i64, degrees: &[i64], r: usize) -> i64 {
    koszul_past(map_deg, &degrees[..r])
}

/// Exponent of `(φ_1 ⊗ … ⊗ φ_s)` applied to a tuple, with `φ_l` of degree
/// `map_degs[l]` consuming `blocks[l]` consecutive inputs.
pub fn tensor_sign(map_degs: &[i64], blocks: &[usize], degrees: &[i64]) -> i64 {
    let mut e = 0;
    let mut pos = 0;
    let mut before = 0;
    for (d, &b) in map_degs.iter().zip(blocks) {
        e += d * before;
        before += degrees[pos..pos + b].iter().sum::<i64>();
        pos += b;
    }
    e
}

/// `Σ_i (n−i)|a_i|` for `i = 1..n`.
pub fn suspension_exponent(degrees: &[i64]) -> i64 {
    let n = degrees.len() as i64;
    degrees
        .iter()
        .enumerate()
        .map(|(k, d)| (n - 1 - k as i64) * d)
        .sum()
}

/// Exponent relating `b_n` and `m_n` on a tuple of unshifted degrees.
pub fn op_suspension_sign(degrees: &[i64]) -> i64 {
    degrees.len() as i64 + suspension_exponent(degrees)
}

/// Exponent relating `f̃_n` and `f_n` on a tuple of unshifted degrees.
pub fn morphism_suspension_sign(degrees: &[i64]) -> i64 {
    suspension_exponent(degrees)
}

/// Shuffle exponent `Σ_{i<j} |a_j||c_i|` of the tensor product `A⊗C`,
/// moving each `c_i` past the later `a_j`.
pub fn interchange_sign(a_degrees: &[i64], c_degrees: &[i64]) -> i64 {
    let mut e = 0;
    let mut suffix = 0;
    for i in (0..a_degrees.len()).rev() {
        e += c_degrees[i] * suffix;
        suffix += a_degrees[i];
    }
    e
}

/// The Stasheff exponent `r + st`.
#[inline]
pub fn stasheff_sign(r: usize, s: usize, t: usize) -> i64 {
    (r + s * t) as i64
}

/// The morphism exponent `ε(i_1,…,i_s) = Σ_j (s−j) i_j + s(s+1)/2`.
pub fn morphism_epsilon(blocks: &[usize]) -> i64 {
    let s = blocks.len() as i64;
    let lin: i64 = blocks
        .iter()
        .enumerate()
        .map(|(j, &i)| (s - 1 - j as i64) * i as i64)
        .sum();
    lin + s * (s + 1) / 2
}

/// The Maurer–Cartan exponent `n(n+1)/2`.
#[inline]
pub fn mc_sign(n: usize) -> i64 {
    (n * (n + 1) / 2) as i64
}

/// The pushforward exponent `n(n−1)/2`.
#[inline]
pub fn pushforward_sign(n: usize) -> i64 {
    (n * n.saturating_sub(1) / 2) as i64
}

/// Exponent `ε` of the twisted higher compositions: with `x_k` of degree
/// `x_deg[k-1]` (`k = 1..n`) and `i_k` insertions of the object `α_k`
/// (`k = 0..n`),
///
/// `ε = Σ_{n≥k>j≥0} (x̄_k + i_k) i_j + Σ_k i_k(i_k + c)/2 + Σ_{k≥1} k i_k`,
///
/// where `c = 1` for the compositions and `c = −1` for the components of a
/// pushed-forward functor.
pub fn twisted_epsilon(x_deg: &[i64], ins: &[usize], c: i64) -> i64 {
    let n = x_deg.len();
    debug_assert_eq!(ins.len(), n + 1);
    let mut e = 0;
    let mut lower = 0i64; // Σ_{j<k} i_j
    for (k, &ik) in ins.iter().enumerate() {
        let ik = ik as i64;
        if k >= 1 {
            e += (x_deg[k - 1] + ik) * lower;
            e += k as i64 * ik;
        }
        e += ik * (ik + c) / 2;
        lower += ik;
    }
    e
}
