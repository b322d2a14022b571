"""
Random variates from the three families.

f2 is sampled exactly by inverse transform of its continuous analogue;
f1 and f3 by rejection from f2.  For f1 the acceptance test is the
zeta-free form

    b v n (tau - 1) <= a (b - 1) tau,   tau = (1 + 1/n)**(beta-1),  b = (1 + 1/a)**(beta-1)

and for f3 it is evaluated as a difference of logs.  Both rejection
constants are attained at n = a.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .distributions import FamilyKind, check_beta, check_cutoff, hurwitz_zeta, log_gamma_ratio
from .errors import DomainError
from .estimation import FrequencyVector

# Inverse-transform draws at or beyond this are resampled (int64 range).
N_CAP = float(2**63 - 1024)


@dataclass
class SamplerState:
    """Seeded PCG64 stream.

    ``(seed, stream_id, path)`` fixes the sequence completely, independent of
    host and of how work is split across threads or processes.  The counters
    record rejection-sampling proposals and acceptances.
    """

    seed: int
    stream_id: int = 0
    path: tuple = ()
    proposals: int = field(default=0, compare=False)
    accepted: int = field(default=0, compare=False)

    def __post_init__(self):
        for v in (self.seed, self.stream_id, *self.path):
            if not 0 <= int(v) < 2**64:
                raise DomainError("seed and stream ids must be unsigned 64-bit integers")
        ss = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream_id), *map(int, self.path)))
        self.rng = np.random.Generator(np.random.PCG64(ss))

    def substream(self, k):
        """Independent child stream number ``k``."""
        return SamplerState(self.seed, self.stream_id, self.path + (int(k),))


def _check_f2(beta, a):
    a = check_cutoff(a)
    if not beta > 1 or not math.isfinite(beta):
        raise DomainError(f"beta must exceed 1, got {beta!r}")
    return float(beta), a


def f2_from_uniform(u, beta, a=1):
    """Map u in (0, a**-(beta-1)] to n = int(u**(-1/(beta-1)))."""
    u = np.asarray(u, dtype=float)
    x = u ** (-1.0 / (beta - 1.0))
    # u = u_max can round x to just below a
    n = np.maximum(np.floor(x), a)
    return n


def _draw_f2(beta, a, size, rng):
    b1 = beta - 1.0
    u_max = float(a) ** -b1
    out = np.empty(size, dtype=np.int64)
    todo = np.arange(size)
    while todo.size:
        # 1 - random() lies in (0, 1], so u covers (0, u_max]
        u = u_max * (1.0 - rng.random(todo.size))
        n = f2_from_uniform(u, beta, a)
        ok = n < N_CAP
        out[todo[ok]] = n[ok].astype(np.int64)
        todo = todo[~ok]
    return out


def f1_accept(n, v, beta, a=1):
    """Zeta-free acceptance test for f1 proposals drawn from f2."""
    n = np.asarray(n, dtype=float)
    b1 = beta - 1.0
    tm1 = np.expm1(b1 * np.log1p(1.0 / n))
    bm1 = math.expm1(b1 * math.log1p(1.0 / a))
    # operand order makes n = a, v = 1 an exact tie
    return v * n * tm1 * (1.0 + bm1) <= a * bm1 * (1.0 + tm1)


def f3_accept(n, v, beta, a=1):
    """Log-space test of  v f2(n) <= a f2(a) G(a)/G(1+a-beta) G(n+1-beta)/G(n+1)."""
    n = np.asarray(n, dtype=float)
    v = np.asarray(v, dtype=float)
    b1 = beta - 1.0
    log_f2n = b1 * (math.log(a) - np.log(n)) + np.log(-np.expm1(-b1 * np.log1p(1.0 / n)))
    log_f2a = math.log(-math.expm1(-b1 * math.log1p(1.0 / a)))
    with np.errstate(divide="ignore"):
        lhs = np.log(v) + log_f2n
    rhs = (math.log(a) + log_f2a - float(log_gamma_ratio(a, 1.0 - beta))
           + log_gamma_ratio(n + 1.0, -beta))
    return lhs <= rhs


def rejection_constant(kind, beta, a=1):
    """C = max_n f(n)/f2(n) = f(a)/f2(a): expected proposals per accepted draw."""
    kind = FamilyKind(kind)
    beta, a = _check_f2(beta, a)
    f2a = -math.expm1(-(beta - 1.0) * math.log1p(1.0 / a))
    if kind is FamilyKind.F2:
        return 1.0
    if kind is FamilyKind.F1:
        return a ** -beta / hurwitz_zeta(beta, a) / f2a
    check_beta(kind, beta)
    return (beta - 1.0) / (a * f2a)


def _draw_rejection(accept, C, beta, a, size, state):
    rng = state.rng
    out = np.empty(size, dtype=np.int64)
    filled = 0
    while filled < size:
        need = size - filled
        batch = int(math.ceil(need * C * 1.1)) + 16
        n = _draw_f2(beta, a, batch, rng)
        v = rng.random(batch)
        ok = accept(n, v, beta, a)
        idx = np.flatnonzero(ok)
        if idx.size >= need:
            # proposals past the last one used are not counted
            used = idx[need - 1] + 1
            idx = idx[:need]
        else:
            used = batch
        out[filled:filled + idx.size] = n[idx]
        filled += idx.size
        state.proposals += int(used)
        state.accepted += int(idx.size)
    return out


def draw(kind, beta, a, size, state):
    """``size`` iid draws as an int64 array."""
    kind = FamilyKind(kind)
    beta, a = _check_f2(beta, a)
    if kind is FamilyKind.F2:
        out = _draw_f2(beta, a, size, state.rng)
        state.proposals += size
        state.accepted += size
        return out
    check_beta(kind, beta)
    C = rejection_constant(kind, beta, a)
    accept = f1_accept if kind is FamilyKind.F1 else f3_accept
    return _draw_rejection(accept, C, beta, a, size, state)


def sample_f2(beta, a, state):
    return int(draw(FamilyKind.F2, beta, a, 1, state)[0])


def sample_f1(beta, a, state):
    return int(draw(FamilyKind.F1, beta, a, 1, state)[0])


def sample_f3(beta, a, state):
    if not 1 < beta < 2:
        raise DomainError(f"f3 needs 1 < beta < 2, got {beta!r}")
    return int(draw(FamilyKind.F3, beta, a, 1, state)[0])


def sample_iid(model, count, state):
    if count < 1:
        raise DomainError("count must be a positive integer")
    return FrequencyVector(draw(model.kind, model.beta, model.a, int(count), state))
