# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled trial loops for the Monte Carlo estimators.

Arithmetic mirrors secnet._pykernels draw for draw; see secnet.rng for the
stream construction.
"""

from libc.math cimport log, pow, sqrt, M_PI
from libc.stdint cimport uint64_t

cdef uint64_t GAMMA = 0x9E3779B97F4A7C15ULL
cdef uint64_t M1 = 0xBF58476D1CE4E5B9ULL
cdef uint64_t M2 = 0x94D049BB133111EBULL
cdef double TWO_M53 = 1.0 / 9007199254740992.0
cdef uint64_t TAG_EAVESDROPPER = 1ULL << 32
cdef uint64_t TAG_EAV_INTERFERENCE = (1ULL << 32) + 1


cdef inline uint64_t mix64(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * M1
    z = (z ^ (z >> 27)) * M2
    return z ^ (z >> 31)


cdef inline uint64_t stream_key(uint64_t seed_hash, uint64_t trial, uint64_t tag) nogil:
    return mix64(mix64(seed_hash ^ trial) ^ tag)


cdef inline double exp_draw(uint64_t key, uint64_t index) nogil:
    cdef uint64_t z = mix64(key + (index + 1) * GAMMA)
    return -log((<double>(z >> 11) + 0.5) * TWO_M53)


cdef inline double path_gain(double r2, double half_alpha) nogil:
    # alpha = 4 is the common case; 1/(r2*r2) is exact IEEE arithmetic, unlike pow
    if half_alpha == 2.0:
        return 1.0 / (r2 * r2)
    return pow(r2, -half_alpha)


cdef inline bint hop_succeeds(uint64_t key, double lam, double half_alpha,
                              double signal_scale, double mu) nogil:
    # Receiver at the origin, interferers generated nearest first.
    cdef double threshold = exp_draw(key, 0) * signal_scale
    cdef double gamma = 0.0, interference = 0.0, r2
    cdef uint64_t i = 1
    while True:
        gamma += exp_draw(key, i)
        if gamma > mu:
            return True
        r2 = gamma / (lam * M_PI)
        interference += exp_draw(key, i + 1) * path_gain(r2, half_alpha)
        i += 2
        if interference >= threshold:
            return False


def count_hop_successes(uint64_t seed_hash, long start, long stop, long hops,
                        double lam, double alpha, double d, double beta, double mu):
    """Trials in [start, stop) where all ``hops`` hops decode."""
    cdef long t, k, count = 0
    cdef double signal_scale = pow(d, -alpha) / beta
    cdef double half_alpha = 0.5 * alpha
    cdef bint ok
    with nogil:
        for t in range(start, stop):
            ok = True
            for k in range(hops):
                if not hop_succeeds(stream_key(seed_hash, t, k), lam, half_alpha,
                                    signal_scale, mu):
                    ok = False
                    break
            if ok:
                count += 1
    return count


def count_eav_outages(uint64_t seed_hash, long start, long stop, double lam_int,
                      double alpha, double lam_eav, double beta_eav, double tol,
                      double fixed_radius):
    """Trials in [start, stop) where the nearest eavesdropper fails to decode.

    ``fixed_radius <= 0`` selects the automatic far-field radius per trial.
    """
    cdef long t, count = 0
    cdef double r2, r, radius, scale
    cdef double half_alpha = 0.5 * alpha
    cdef double far = tol * (alpha - 2.0) / (2.0 * M_PI * lam_int)
    with nogil:
        for t in range(start, stop):
            r2 = exp_draw(stream_key(seed_hash, t, TAG_EAVESDROPPER), 0) / (lam_eav * M_PI)
            r = sqrt(r2)
            if fixed_radius > 0.0:
                radius = fixed_radius
            else:
                radius = pow(far * pow(r, -alpha), 1.0 / (2.0 - alpha))
                if radius < 10.0 * r:
                    radius = 10.0 * r
            scale = path_gain(r2, half_alpha) / beta_eav
            if not hop_succeeds(stream_key(seed_hash, t, TAG_EAV_INTERFERENCE), lam_int,
                                half_alpha, scale, lam_int * M_PI * radius * radius):
                count += 1
    return count
