"""Counter-based random streams built on the SplitMix64 output function.

A stream is identified by a 64-bit key. Its ``j``-th 64-bit output
(``j = 0, 1, ...``) is::

    mix64(key + (j + 1) * 0x9E3779B97F4A7C15)   (mod 2**64)

which is exactly the SplitMix64 sequence started from state ``key``. Being
counter-based, any position of any stream can be evaluated directly, so
many streams vectorize as numpy arrays with no shared state.

Child streams are derived with ``child(key, i) = mix64(key ^ mix64((i + 1) * G))``.

Uniform doubles are ``((u64 >> 11) + 0.5) * 2**-53`` and therefore never 0 or 1.

The transcendental kernels used by the samplers (log, exp, normal quantile)
are written with IEEE-754 ``+ - * /``, ``sqrt``, ``frexp`` and ``ldexp`` only,
so draws are bit-identical on every platform regardless of the libm or
SIMD paths numpy happens to use.
"""

from dataclasses import dataclass

import numpy as np

GOLDEN = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1

_G = np.uint64(GOLDEN)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30, _S27, _S31, _S11 = (np.uint64(s) for s in (30, 27, 31, 11))
_TWO_M53 = 2.0 ** -53


def mix64(z):
    """SplitMix64 finalizer on a uint64 array (wrapping arithmetic)."""
    z = np.asarray(z, dtype=np.uint64)
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def _as_u64_array(value):
    if isinstance(value, np.ndarray):
        return value.astype(np.uint64, copy=False)
    if isinstance(value, (int, np.integer)):
        ivalue = int(value)
        if not 0 <= ivalue <= _MASK64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {ivalue}")
        return np.array([ivalue], dtype=np.uint64)
    return np.asarray(value, dtype=np.uint64)


def child_keys(keys, index):
    """Derive the ``index``-th child stream of every key in ``keys``.

    ``index`` may be a scalar or an array broadcastable against ``keys``.
    """
    k = np.atleast_1d(_as_u64_array(keys))
    idx = np.atleast_1d(np.asarray(index, dtype=np.uint64))
    return mix64(k ^ mix64((idx + np.uint64(1)) * _G))


def derive_seed(seed: int, *path: int) -> int:
    """Follow ``path`` down the child tree from ``seed``; returns a Python int."""
    k = _as_u64_array(seed)
    for i in path:
        k = child_keys(k, i)
    return int(k[0])


def stream_bits(keys, counters):
    """64-bit outputs at positions ``counters`` of streams ``keys``."""
    k = np.atleast_1d(_as_u64_array(keys))
    c = np.atleast_1d(np.asarray(counters, dtype=np.uint64))
    return mix64(k + (c + np.uint64(1)) * _G)


def stream_uniforms(keys, counters):
    """Uniform doubles in the open interval (0, 1)."""
    bits = stream_bits(keys, counters)
    return ((bits >> _S11).astype(np.float64) + 0.5) * _TWO_M53


# fdlibm e_log.c constants
_LN2_HI = 6.93147180369123816490e-01
_LN2_LO = 1.90821492927058770002e-10
_LG1 = 6.666666666666735130e-01
_LG2 = 3.999999999940941908e-01
_LG3 = 2.857142874366239149e-01
_LG4 = 2.222219843214978396e-01
_LG5 = 1.818357216161805012e-01
_LG6 = 1.531383769920937332e-01
_LG7 = 1.479819860511658591e-01
_SQRT_HALF = 0.70710678118654752440


def portable_log(x):
    """Natural log for positive finite ``x`` using only IEEE basic operations."""
    x = np.asarray(x, dtype=np.float64)
    m, e = np.frexp(x)
    low = m < _SQRT_HALF
    m = np.where(low, m * 2.0, m)
    k = (e - low).astype(np.float64)
    f = m - 1.0
    s = f / (2.0 + f)
    z = s * s
    w = z * z
    t1 = w * (_LG2 + w * (_LG4 + w * _LG6))
    t2 = z * (_LG1 + w * (_LG3 + w * (_LG5 + w * _LG7)))
    r = t2 + t1
    hfsq = 0.5 * f * f
    return k * _LN2_HI - ((hfsq - (s * (hfsq + r) + k * _LN2_LO)) - f)


# fdlibm e_exp.c constants
_INV_LN2 = 1.44269504088896338700e00
_P1 = 1.66666666666666019037e-01
_P2 = -2.77777777770155933842e-03
_P3 = 6.61375632143793436117e-05
_P4 = -1.65339022054652515390e-06
_P5 = 4.13813679705723846039e-08
_EXP_OVER = 7.09782712893383973096e02
_EXP_UNDER = -7.45133219101941108420e02


def portable_exp(x):
    """Exponential using only IEEE basic operations and ``ldexp``."""
    x = np.asarray(x, dtype=np.float64)
    safe = np.clip(x, -740.0, 709.0)
    k = np.trunc(safe * _INV_LN2 + np.where(safe < 0, -0.5, 0.5))
    hi = safe - k * _LN2_HI
    lo = k * _LN2_LO
    r = hi - lo
    t = r * r
    c = r - t * (_P1 + t * (_P2 + t * (_P3 + t * (_P4 + t * _P5))))
    y = 1.0 - ((lo - (r * c) / (2.0 - c)) - hi)
    out = np.ldexp(y, k.astype(np.int64))
    out = np.where(x > _EXP_OVER, np.inf, out)
    return np.where(x < _EXP_UNDER, 0.0, out)


# Wichura's AS241 (PPND16) coefficients
_A = (3.387132872796366608, 133.14166789178437745, 1971.5909503065514427,
      13731.693765509461125, 45921.953931549871457, 67265.770927008700853,
      33430.575583588128105, 2509.0809287301226727)
_B = (1.0, 42.313330701600911252, 687.1870074920579083, 5394.1960214247511077,
      21213.794301586595867, 39307.89580009271061, 28729.085735721942674,
      5226.495278852545925)
_C = (1.42343711074968357734, 4.6303378461565452959, 5.7694972214606914055,
      3.64784832476320460504, 1.27045825245236838258, 0.24178072517745061177,
      0.0227238449892691845833, 7.7454501427834140764e-4)
_D = (1.0, 2.05319162663775882187, 1.6763848301838038494, 0.68976733498510000455,
      0.14810397642748007459, 0.0151986665636164571966, 5.475938084995344946e-4,
      1.05075007164441684324e-9)
_E = (6.6579046435011037772, 5.4637849111641143699, 1.7848265399172913358,
      0.29656057182850489123, 0.026532189526576123093, 0.0012426609473880784386,
      2.71155556874348757815e-5, 2.01033439929228813265e-7)
_F = (1.0, 0.59983220655588793769, 0.13692988092273580531, 0.0148753612908506148525,
      7.868691311456132591e-4, 1.8463183175100546818e-5, 1.4215117583164458887e-7,
      2.04426310338993978564e-15)


def _horner(coeffs, x):
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc


def portable_normal_quantile(u):
    """Standard normal quantile (AS241) for ``u`` strictly inside (0, 1)."""
    u = np.asarray(u, dtype=np.float64)
    q = u - 0.5
    r_central = 0.180625 - q * q
    central = q * _horner(_A, r_central) / _horner(_B, r_central)

    tail_p = np.minimum(u, 1.0 - u)
    r = np.sqrt(-portable_log(tail_p))
    near = _horner(_C, r - 1.6) / _horner(_D, r - 1.6)
    far = _horner(_E, r - 5.0) / _horner(_F, r - 5.0)
    tail = np.where(r <= 5.0, near, far)
    tail = np.where(q < 0, -tail, tail)
    return np.where(np.abs(q) <= 0.425, central, tail)


@dataclass
class RngState:
    """A single-owner position in one random stream.

    ``seed`` is the stream key and ``counter`` the number of 64-bit outputs
    already consumed. Do not share one instance between threads; derive
    child streams instead.
    """

    seed: int
    counter: int = 0

    def __post_init__(self):
        if not 0 <= int(self.seed) <= _MASK64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        self.seed = int(self.seed)

    def next_uint64(self) -> int:
        value = int(stream_bits(self.seed, self.counter)[0])
        self.counter += 1
        return value

    def uniform(self) -> float:
        value = float(stream_uniforms(self.seed, self.counter)[0])
        self.counter += 1
        return value

    def normal(self) -> float:
        return float(portable_normal_quantile(self.uniform()))

    def child(self, index: int) -> "RngState":
        return RngState(derive_seed(self.seed, index))
