# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte Carlo trial loop.

Runs the whole trial loop in C.  The per-trial random stream is a
xoshiro256++ generator whose state is filled from a splitmix64 sequence
started at ``seed ^ (0xD1B54A32D192ED03 * (trial + 1))`` -- a deterministic
split of (seed, trial index), so results do not depend on how trials would
be scheduled.  Standard normals come from the Box-Muller transform on
uniforms drawn from (0, 1].
"""

from libc.math cimport cos, log, sin, sqrt
from libc.stdint cimport int64_t, uint64_t

cdef double TWO_PI = 6.283185307179586476925287
cdef double INV_2_53 = 1.0 / 9007199254740992.0

MAX_CHANNELS = 4


cdef inline uint64_t _splitmix_next(uint64_t* s) nogil:
    cdef uint64_t z
    s[0] = s[0] + <uint64_t>0x9E3779B97F4A7C15
    z = s[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline uint64_t _rotl(uint64_t x, int k) nogil:
    return (x << k) | (x >> (64 - k))


cdef struct Stream:
    uint64_t s0
    uint64_t s1
    uint64_t s2
    uint64_t s3
    double spare
    int has_spare


cdef inline void _stream_init(Stream* st, uint64_t seed, uint64_t trial) nogil:
    cdef uint64_t sm = seed ^ (<uint64_t>0xD1B54A32D192ED03 * (trial + 1))
    st.s0 = _splitmix_next(&sm)
    st.s1 = _splitmix_next(&sm)
    st.s2 = _splitmix_next(&sm)
    st.s3 = _splitmix_next(&sm)
    st.spare = 0.0
    st.has_spare = 0


cdef inline uint64_t _stream_next(Stream* st) nogil:
    cdef uint64_t result = _rotl(st.s0 + st.s3, 23) + st.s0
    cdef uint64_t t = st.s1 << 17
    st.s2 ^= st.s0
    st.s3 ^= st.s1
    st.s1 ^= st.s2
    st.s0 ^= st.s3
    st.s2 ^= t
    st.s3 = _rotl(st.s3, 45)
    return result


cdef inline double _uniform(Stream* st) nogil:
    # 53-bit uniform on (0, 1]; never 0, so log() below is safe
    return (<double>((_stream_next(st) >> 11) + 1)) * INV_2_53


cdef inline double _normal(Stream* st) nogil:
    cdef double u1, u2, radius
    if st.has_spare:
        st.has_spare = 0
        return st.spare
    u1 = _uniform(st)
    u2 = _uniform(st)
    radius = sqrt(-2.0 * log(u1))
    st.spare = radius * sin(TWO_PI * u2)
    st.has_spare = 1
    return radius * cos(TWO_PI * u2)


def run_trials(
    double[::1] ch_mean,
    double[::1] ch_sd,
    double[::1] ch_noise,
    int64_t[::1] ch_draws,
    unsigned char[::1] ch_is_q,
    double q0,
    double p0,
    double vq,
    double vp,
    uint64_t seed,
    Py_ssize_t trials,
    double[::1] d1_out,
    double[::1] d2_out,
    double[::1] qhat_out,
    double[::1] phat_out,
):
    """Fill per-trial distance contributions; returns the degenerate-trial count."""
    cdef Py_ssize_t n_ch = ch_mean.shape[0]
    if n_ch > MAX_CHANNELS or n_ch < 2:
        raise ValueError(f"expected 2..{MAX_CHANNELS} channels, got {n_ch}")
    for name, view in (("sd", ch_sd), ("noise", ch_noise), ("draws", ch_draws), ("is_q", ch_is_q)):
        if view.shape[0] != n_ch:
            raise ValueError(f"channel array {name!r} has mismatched length")
    if d1_out.shape[0] != trials or d2_out.shape[0] != trials:
        raise ValueError("output arrays must have one slot per trial")
    if qhat_out.shape[0] != trials or phat_out.shape[0] != trials:
        raise ValueError("output arrays must have one slot per trial")

    cdef Stream st
    cdef Py_ssize_t t, c, i
    cdef int64_t n
    cdef double z, sz, szz, sample_mean, sample_var
    cdef double q_sum, p_sum, vq_sum, vp_sum
    cdef int nq, np_, degenerate = 0, trial_degenerate

    with nogil:
        for t in range(trials):
            _stream_init(&st, seed, <uint64_t>t)
            q_sum = 0.0
            p_sum = 0.0
            vq_sum = 0.0
            vp_sum = 0.0
            nq = 0
            np_ = 0
            trial_degenerate = 0
            for c in range(n_ch):
                n = ch_draws[c]
                sz = 0.0
                szz = 0.0
                for i in range(n):
                    z = _normal(&st)
                    sz += z
                    szz += z * z
                sample_mean = ch_mean[c] + ch_sd[c] * (sz / n)
                sample_var = ch_sd[c] * ch_sd[c] * (szz - sz * sz / n) / (n - 1)
                if sample_var == 0.0:
                    trial_degenerate = 1
                if ch_is_q[c]:
                    q_sum += sample_mean
                    vq_sum += sample_var - ch_noise[c]
                    nq += 1
                else:
                    p_sum += sample_mean
                    vp_sum += sample_var - ch_noise[c]
                    np_ += 1
            q_sum /= nq
            p_sum /= np_
            vq_sum /= nq
            vp_sum /= np_
            d1_out[t] = (q0 - q_sum) * (q0 - q_sum) + (p0 - p_sum) * (p0 - p_sum)
            d2_out[t] = (vq - vq_sum) * (vq - vq_sum) + (vp - vp_sum) * (vp - vp_sum)
            qhat_out[t] = q_sum
            phat_out[t] = p_sum
            degenerate += trial_degenerate

    return degenerate
