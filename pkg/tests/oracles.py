"""Independent reference implementations used as test oracles.

Everything here is written directly from the defining equations with plain
Python loops and cmath, deliberately avoiding the package's chirplet/table
machinery so the two paths share no code.
"""

import cmath
import math

import numpy as np

from chirpmodem import ModulationConfig, Scheme


def dft_direct(x):
    """O(M^2) forward DFT by explicit summation."""
    x = list(x)
    M = len(x)
    out = []
    for k in range(M):
        re = math.fsum(
            (x[n] * cmath.exp(-2j * math.pi * k * n / M)).real for n in range(M)
        )
        im = math.fsum(
            (x[n] * cmath.exp(-2j * math.pi * k * n / M)).imag for n in range(M)
        )
        out.append(complex(re, im))
    return np.array(out)


def modulate_direct(cfg: ModulationConfig, values) -> np.ndarray:
    """Literal per-scheme waveform synthesis from the defining equations."""
    M = cfg.M
    w = math.pi / M
    out = np.zeros(M, dtype=np.complex128)
    if cfg.scheme is Scheme.LORA:
        (k,) = values
        for n in range(M):
            out[n] = cmath.exp(1j * w * (2 * k * n + n * n))
    elif cfg.scheme is Scheme.TDM_CSS:
        k1, k2 = values
        for n in range(M):
            out[n] = cmath.exp(1j * w * (2 * k1 * n + n * n)) + cmath.exp(
                1j * w * (2 * k2 * n - n * n)
            )
    elif cfg.scheme is Scheme.IQ_TDM_CSS:
        ki, kq, ki2, kq2 = values
        for n in range(M):
            out[n] = (
                cmath.exp(1j * w * (2 * ki * n + n * n))
                + 1j * cmath.exp(1j * w * (2 * kq * n + n * n))
                + cmath.exp(1j * w * (2 * ki2 * n - n * n))
                + 1j * cmath.exp(1j * w * (2 * kq2 * n - n * n))
            )
    elif cfg.scheme is Scheme.DM_TDM_CSS:
        ke1, ko1, ke2, ko2 = values
        for n in range(M):
            out[n] = (
                cmath.exp(1j * w * (2 * (2 * ke1) * n + n * n))
                + cmath.exp(1j * w * (2 * (2 * ko1 + 1) * n + n * n))
                + cmath.exp(1j * w * (2 * (2 * ke2) * n - n * n))
                + cmath.exp(1j * w * (2 * (2 * ko2 + 1) * n - n * n))
            )
    elif cfg.scheme is Scheme.LCSS:
        for n in range(M):
            out[n] = sum(
                cmath.exp(1j * w * (2 * k * n + (l + 1) * n * n))
                for l, k in enumerate(values)
            )
    elif cfg.scheme is Scheme.LDMCSS:
        for n in range(M):
            acc = 0j
            for l in range(cfg.layers):
                ke, ko = values[2 * l], values[2 * l + 1]
                acc += cmath.exp(1j * w * (2 * (2 * ke) * n + (l + 1) * n * n))
                acc += cmath.exp(1j * w * (2 * (2 * ko + 1) * n + (l + 1) * n * n))
            out[n] = acc
    else:  # pragma: no cover
        raise AssertionError(cfg.scheme)
    return out


def gauss_sum_fsum(M: int, kappa: int, alpha: int) -> complex:
    """High-precision generalized quadratic Gauss sum via compensated sums."""
    re = math.fsum(
        math.cos(math.pi * (2 * kappa * n + alpha * n * n) / M) for n in range(M)
    )
    im = math.fsum(
        math.sin(math.pi * (2 * kappa * n + alpha * n * n) / M) for n in range(M)
    )
    return complex(re, im)


def inner_product_direct(a, b) -> complex:
    """<a, b> = sum a[n] conj(b[n]) by explicit summation."""
    re = math.fsum((x * y.conjugate()).real for x, y in zip(a, b))
    im = math.fsum((x * y.conjugate()).imag for x, y in zip(a, b))
    return complex(re, im)


def convolve_two_tap(x, rho):
    """Direct 2-tap convolution, truncated to the input length."""
    x = list(x)
    h = [math.sqrt(1.0 - rho), math.sqrt(rho)]
    out = []
    for n in range(len(x)):
        acc = 0j
        for t, coef in enumerate(h):
            if n - t >= 0:
                acc += coef * x[n - t]
        out.append(acc)
    return np.array(out)


def harmonic_fsum(m: int) -> float:
    return math.fsum(1.0 / i for i in range(1, m + 1))
