"""Simulated-annealing search for the largest |W| in dimension d.

Parametrization
---------------
* pure preparations are unconstrained real (or complex) d-vectors that get
  normalized, so every point of parameter space is a valid state;
* the effect is ``U clamp(lambda) U^dag`` where ``U, lambda`` diagonalize an
  unconstrained Hermitian (real symmetric for the real field) parameter and
  ``clamp`` cuts the spectrum to ``[0, 1]``; ``0 <= M <= 1`` holds exactly.

The search has three stages, all on ``log|W|`` so one temperature scale fits
every (n, d):

1. Metropolis annealing on the raw parameters with Gaussian proposals of
   scale ``step_scale * T``;
2. annealing over locally optimal points: every restart perturbs its
   current point by ``hop_scale``, polishes it briefly and accepts by the
   Metropolis rule on a geometric temperature schedule;
3. a long polish of the best point each restart has seen.

The polish is block-coordinate ascent. ``W`` is linear in every single
preparation, so the optimal ``A_i`` given everything else is an extremal
eigenvector. The effect takes a projected gradient step (eigenvalues clamped
to ``[0, 1]``) with a per-restart adaptive step length.

All restarts advance together as a numpy batch; restart ``r`` draws only
from its own generator seeded by ``(seed, r)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ..linalg import cofactors, determinant
from ..states import Effect, QuantumState
from .config import Field, QuantumConfig

MAX_N = 5
MAX_D = 4
_LOG_FLOOR = 1e-300

#: Reference maxima of |W| for the known quantum cells, keyed by
#: ``(n, d, field)``. The d=4 column holds for both fields; it is listed as real.
QUANTUM_MAXIMA = {
    (2, 2, "real"): 1.0,
    (3, 2, "real"): (3 / 4) ** 4,
    (4, 2, "real"): 0.0,
    (5, 2, "real"): 0.0,
    (4, 2, "complex"): 1 / 9,
    (5, 2, "complex"): 0.0,
    (3, 3, "real"): 2.0,
    (4, 3, "real"): 2**8 * 5**4 / 3**11,
    (5, 3, "real"): 0.2974087137533708,
    (5, 3, "complex"): 0.33262772907714405,
    (4, 4, "real"): 3.0,
    (5, 4, "real"): 4 * (55 / 64) ** 5,
}


@dataclass(frozen=True)
class AnnealConfig:
    initial_temperature: float = 1.0
    cooling_rate: float = 0.98
    steps_per_temperature: int = 20
    restarts: int = 16
    step_scale: float = 0.3
    seed: int = 0
    min_temperature: float = 0.5
    polish: bool = True
    polish_sweeps: int = 300
    hops: int = 40
    hop_scale: float = 1.0
    hop_temperature: float = 0.3
    hop_final_temperature: float = 0.01
    hop_sweeps: int = 30
    mixed: bool = False

    def __post_init__(self):
        for name in ("initial_temperature", "step_scale", "min_temperature", "hop_scale",
                     "hop_temperature", "hop_final_temperature"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not 0 < self.cooling_rate < 1:
            raise ValueError("cooling_rate must lie in (0, 1)")
        if self.steps_per_temperature < 1 or self.restarts < 1:
            raise ValueError("steps_per_temperature and restarts must be >= 1")
        if self.hops < 0 or self.polish_sweeps < 1 or self.hop_sweeps < 1:
            raise ValueError("hops must be >= 0 and sweep counts >= 1")
        if self.min_temperature >= self.initial_temperature:
            raise ValueError("min_temperature must be below initial_temperature")

    def levels(self) -> int:
        ratio = math.log(self.min_temperature / self.initial_temperature)
        return max(1, math.ceil(ratio / math.log(self.cooling_rate)))

    def hop_temperatures(self) -> np.ndarray:
        """Geometric schedule from ``hop_temperature`` to ``hop_final_temperature``."""
        if self.hops == 0:
            return np.empty(0)
        return np.geomspace(self.hop_temperature, self.hop_final_temperature, self.hops)


@dataclass(frozen=True)
class AnnealResult:
    value: float
    config: QuantumConfig
    restart_values: tuple[float, ...]
    annealed_values: tuple[float, ...]


class _Layout:
    """Slices of the flat parameter vector."""

    def __init__(self, n: int, d: int, field: Field, mixed: bool):
        self.n, self.d, self.D = n, d, d * d
        self.complex = field == "complex"
        self.mixed = mixed
        per_state = d * d if mixed else d
        reals = 2 * n * per_state
        self.n_state = 2 * reals if self.complex else reals
        D = self.D
        self.n_effect = D * D if self.complex else D * (D + 1) // 2
        self.size = self.n_state + self.n_effect
        self.iu = np.triu_indices(D)
        self.il = np.tril_indices(D, -1)

    def initial(self, rng: np.random.Generator) -> np.ndarray:
        x = rng.normal(size=self.size)
        # Centre the effect parameter at I/2 so the spectrum starts inside the clamp window.
        x[self.n_state:] *= 0.5 / math.sqrt(self.D)
        diag = np.flatnonzero(self.iu[0] == self.iu[1])
        x[self.n_state + diag] += 0.5
        return x

    def vectors(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Normalized pure-state vectors (R, n, d) for both parties."""
        n, d = self.n, self.d
        raw = x[:, : self.n_state]
        if self.complex:
            half = self.n_state // 2
            raw = raw[:, :half] + 1j * raw[:, half:]
        v = raw.reshape(x.shape[0], 2 * n, d)
        v = v / np.linalg.norm(v, axis=-1, keepdims=True)
        return v[:, :n], v[:, n:]

    def states(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Return (A, B): density matrices of shape (R, n, d, d)."""
        R, n, d = x.shape[0], self.n, self.d
        raw = x[:, : self.n_state]
        if self.complex:
            half = self.n_state // 2
            raw = raw[:, :half] + 1j * raw[:, half:]
        if self.mixed:
            g = raw.reshape(R, 2 * n, d, d)
            rho = g @ np.conj(np.swapaxes(g, -1, -2))
            rho = rho / np.trace(rho, axis1=-2, axis2=-1)[..., None, None]
        else:
            v = raw.reshape(R, 2 * n, d)
            v = v / np.linalg.norm(v, axis=-1, keepdims=True)
            rho = v[..., :, None] * np.conj(v[..., None, :])
        return rho[:, :n], rho[:, n:]

    def hermitian(self, x: np.ndarray) -> np.ndarray:
        R, D = x.shape[0], self.D
        e = x[:, self.n_state:]
        if self.complex:
            m = e.reshape(R, D, D)
            re = np.triu(m)
            re = re + np.swapaxes(np.triu(m, 1), -1, -2)
            im = np.tril(m, -1)
            im = im - np.swapaxes(im, -1, -2)
            return re + 1j * im
        h = np.zeros((R, D, D))
        h[:, self.iu[0], self.iu[1]] = e
        return h + np.swapaxes(np.triu(h, 1), -1, -2)

    def effect(self, x: np.ndarray) -> np.ndarray:
        lam, U = np.linalg.eigh(self.hermitian(x))
        lam = np.clip(lam, 0.0, 1.0)
        return (U * lam[:, None, :]) @ np.conj(np.swapaxes(U, -1, -2))


def _probabilities(M: np.ndarray, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Batched ``p[r, i, j] = Tr M_r (A_ri (x) B_rj)``."""
    R, n, d, _ = A.shape
    m6 = M.reshape(R, d, d, d, d)
    return np.einsum("rxyuv,riux,rjvy->rij", m6, A, B, optimize=True).real


def _batch_witness(layout: _Layout, x: np.ndarray) -> np.ndarray:
    M = layout.effect(x)
    if layout.mixed:
        A, B = layout.states(x)
        p = _probabilities(M, A, B)
    else:
        a, b = layout.vectors(x)
        R, n, d = a.shape
        V = (a[:, :, None, :, None] * b[:, None, :, None, :]).reshape(R, n * n, d * d)
        p = np.sum(np.conj(V) * (V @ np.swapaxes(M, -1, -2)), axis=-1).real.reshape(R, n, n)
    return np.real(determinant(p))


def _log_abs(w: np.ndarray) -> np.ndarray:
    return np.log(np.maximum(np.abs(w), _LOG_FLOOR))


def _restart_rngs(cfg: AnnealConfig) -> list[np.random.Generator]:
    return [np.random.default_rng(np.random.SeedSequence([cfg.seed, r])) for r in range(cfg.restarts)]


def _anneal_batch(
    layout: _Layout, cfg: AnnealConfig, rngs: list[np.random.Generator]
) -> tuple[np.ndarray, np.ndarray]:
    x = np.stack([layout.initial(g) for g in rngs])
    f = _log_abs(_batch_witness(layout, x))
    best_x, best_f = x.copy(), f.copy()
    T = cfg.initial_temperature
    steps = cfg.steps_per_temperature
    for _ in range(cfg.levels()):
        noise = np.stack([g.normal(size=(steps, layout.size)) for g in rngs], axis=1)
        coins = np.stack([g.random(steps) for g in rngs], axis=1)
        scale = cfg.step_scale * T
        for k in range(steps):
            y = x + scale * noise[k]
            g = _log_abs(_batch_witness(layout, y))
            accept = (g >= f) | (coins[k] < np.exp(np.minimum(g - f, 0.0) / T))
            x[accept] = y[accept]
            f[accept] = g[accept]
            better = f > best_f
            best_x[better] = x[better]
            best_f[better] = f[better]
        T *= cfg.cooling_rate
    return best_x, best_f


# -- polishing -------------------------------------------------------------


def _clamp_effect(H: np.ndarray) -> np.ndarray:
    lam, U = np.linalg.eigh(H)
    lam = np.clip(lam, 0.0, 1.0)
    return (U * lam[..., None, :]) @ np.conj(np.swapaxes(U, -1, -2))


def _hermitian_part(K: np.ndarray, real: bool) -> np.ndarray:
    K = (K + np.conj(np.swapaxes(K, -1, -2))) / 2
    return K.real if real else K


def _pvals(M: np.ndarray, a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Batched ``p[r, i, j] = <a_i b_j| M |a_i b_j>`` and the product vectors."""
    R, n, d = a.shape
    V = (a[:, :, None, :, None] * b[:, None, :, None, :]).reshape(R, n * n, d * d)
    p = np.sum(np.conj(V) * (V @ np.swapaxes(M, -1, -2)), axis=-1).real
    return p.reshape(R, n, n), V


def _state_sweep(a, b, M, real: bool) -> None:
    # Row i of p is linear in A_i, so det p = <a_i|K|a_i> with K built from the
    # cofactors of row i; the extremal eigenvector of K is the exact optimum.
    R, n, d = a.shape
    M5 = M.reshape(R, d, d, d, d)
    for side in (0, 1):
        for i in range(n):
            C = cofactors(_pvals(M, a, b)[0])
            if side == 0:
                N = np.einsum("rxuyv,rju,rjv->rjxy", M5, np.conj(b), b)
                K = np.einsum("rj,rjxy->rxy", C[:, i, :], N)
            else:
                N = np.einsum("ruxvy,rju,rjv->rjxy", M5, np.conj(a), a)
                K = np.einsum("rj,rjxy->rxy", C[:, :, i], N)
            lam, U = np.linalg.eigh(_hermitian_part(K, real))
            top = lam[:, -1] >= -lam[:, 0]
            v = np.where(top[:, None], U[:, :, -1], U[:, :, 0])
            if side == 0:
                a[:, i] = v
            else:
                b[:, i] = v


def polish(a: np.ndarray, b: np.ndarray, M: np.ndarray, real: bool, sweeps: int = 300,
           tol: float = 1e-13) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Batched block ascent of |det p| from pure states ``a, b`` (R, n, d) and effects M.

    Each sweep replaces every preparation by its exact optimum, then takes a
    projected gradient step of ``log|det p|`` on M (eigenvalues clamped to
    ``[0, 1]``) with a per-restart adaptive step length.
    """
    a, b, M = a.copy(), b.copy(), M.copy()
    eta = np.full(a.shape[0], 0.1)
    f = _log_abs(determinant(_pvals(M, a, b)[0]))
    active = np.ones(a.shape[0], dtype=bool)
    for _ in range(sweeps):
        # Converged restarts are frozen so no restart depends on the others.
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        ai, bi, Mi, fi, ei = _polish_step(a[idx], b[idx], M[idx], f[idx], eta[idx], real)
        active[idx] = fi - f[idx] > tol
        a[idx], b[idx], M[idx], f[idx], eta[idx] = ai, bi, Mi, fi, ei
    return a, b, M, determinant(_pvals(M, a, b)[0])


def _polish_step(a, b, M, f, eta, real: bool):
    R = a.shape[0]
    _state_sweep(a, b, M, real)
    p, V = _pvals(M, a, b)
    W = determinant(p)
    f = _log_abs(W)
    scale = np.sign(W) / np.maximum(np.abs(W), _LOG_FLOOR)
    G = (cofactors(p) * scale[:, None, None]).reshape(R, -1)
    grad = _hermitian_part(np.einsum("rk,rkx,rky->rxy", G, V, np.conj(V)), real)
    # Unit-norm direction; eta is then a step length in operator space.
    norm = np.linalg.norm(grad.reshape(R, -1), axis=-1)
    grad = np.nan_to_num(grad / np.maximum(norm, _LOG_FLOOR)[:, None, None])
    todo = np.ones(R, dtype=bool)
    for _ in range(6):
        trial = _clamp_effect(M + eta[:, None, None] * grad)
        g = _log_abs(determinant(_pvals(trial, a, b)[0]))
        ok = todo & (g >= f)
        M = np.where(ok[:, None, None], trial, M)
        f = np.where(ok, g, f)
        eta = np.where(todo, np.clip(np.where(ok, eta * 1.5, eta * 0.3), 1e-12, 1.0), eta)
        todo &= ~ok
        if not todo.any():
            break
    return a, b, M, f, eta


def _hop_batch(a, b, M, real: bool, cfg: AnnealConfig, rngs: list[np.random.Generator]):
    """Annealing over polished points: perturb, polish briefly, Metropolis on log|W|."""
    R, n, d = a.shape
    D = d * d
    a, b, M, W = polish(a, b, M, real, cfg.hop_sweeps)
    f = _log_abs(W)
    best = (a.copy(), b.copy(), M.copy(), f.copy())
    shape = (2 * n * d + D * D) * (1 if real else 2)

    for T in cfg.hop_temperatures():
        z = np.stack([g.normal(size=shape) for g in rngs])
        coin = np.array([g.random() for g in rngs])
        if not real:
            half = shape // 2
            z = z[:, :half] + 1j * z[:, half:]
        za = z[:, : n * d].reshape(R, n, d)
        zb = z[:, n * d: 2 * n * d].reshape(R, n, d)
        zm = z[:, 2 * n * d:].reshape(R, D, D)
        zm = (zm + np.conj(np.swapaxes(zm, -1, -2))) / 2
        s = cfg.hop_scale
        a2 = a + s * za
        b2 = b + s * zb
        a2 /= np.linalg.norm(a2, axis=-1, keepdims=True)
        b2 /= np.linalg.norm(b2, axis=-1, keepdims=True)
        M2 = _clamp_effect(M + s * zm / math.sqrt(D))
        a2, b2, M2, W2 = polish(a2, b2, M2, real, cfg.hop_sweeps)
        g = _log_abs(W2)
        acc = (g >= f) | (coin < np.exp(np.minimum(g - f, 0.0) / T))
        a[acc], b[acc], M[acc], f[acc] = a2[acc], b2[acc], M2[acc], g[acc]
        up = g > best[3]
        for arr, new in zip(best, (a2, b2, M2, g)):
            arr[up] = new[up]
    return best


def _to_config(n, d, field, A, B, M) -> QuantumConfig:
    if field == "real":
        A, B, M = A.real, B.real, M.real
    M = (M + np.conj(M.T)) / 2
    lam, U = np.linalg.eigh(M)
    M = (U * np.clip(lam, 0.0, 1.0)) @ np.conj(U.T)
    return QuantumConfig(
        n=n, d=d, field=field,
        A=tuple(QuantumState(m) for m in A),
        B=tuple(QuantumState(m) for m in B),
        M=Effect(M),
    )


def anneal_quantum_max(n: int, d: int, field: Field = "complex", cfg: AnnealConfig | None = None) -> AnnealResult:
    """Best |W| over all ``n``-preparation configurations in dimension ``d``."""
    cfg = cfg or AnnealConfig()
    if not (1 <= n <= MAX_N and 1 <= d <= MAX_D):
        raise ValueError(f"annealing supports n <= {MAX_N}, d <= {MAX_D}; got n={n}, d={d}")
    if field not in ("real", "complex"):
        raise ValueError(f"field must be 'real' or 'complex', got {field!r}")
    layout = _Layout(n, d, field, cfg.mixed)
    rngs = _restart_rngs(cfg)
    xs, fs = _anneal_batch(layout, cfg, rngs)
    annealed = tuple(float(np.exp(v)) if v > math.log(_LOG_FLOOR) else 0.0 for v in fs)

    real = field == "real"
    Ms = layout.effect(xs)
    if cfg.mixed:
        A, B = layout.states(xs)
    else:
        a, b = layout.vectors(xs)
        if cfg.polish:
            if cfg.hops:
                a, b, Ms, _ = _hop_batch(a, b, Ms, real, cfg, rngs)
            a, b, Ms, _ = polish(a, b, Ms, real, cfg.polish_sweeps)
        A = a[..., :, None] * np.conj(a[..., None, :])
        B = b[..., :, None] * np.conj(b[..., None, :])
    candidates = []
    for r in range(cfg.restarts):
        conf = _to_config(n, d, field, A[r], B[r], Ms[r])
        candidates.append((abs(float(np.real(determinant(conf.probabilities())))), conf))
    values = tuple(v for v, _ in candidates)
    k = int(np.argmax(values))
    return AnnealResult(
        value=values[k], config=candidates[k][1], restart_values=values, annealed_values=annealed
    )


def with_overrides(cfg: AnnealConfig, **kw) -> AnnealConfig:
    return replace(cfg, **{k: v for k, v in kw.items() if v is not None})
