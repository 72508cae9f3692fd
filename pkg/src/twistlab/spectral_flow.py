"""Monodromy of loops of symmetric matrices and the torus-side crossing parity.

A loop ``A: [0,1] -> Sym(2n)`` determines ``Psi' = J0 A Psi``, ``Psi(0) = Id``;
the kernel of the asymptotic operator is read off from ``Id - Psi(1)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.linalg import expm

from .errors import DegenerateEndpoint, InputError, NonSymmetricInput

SYM_TOL = 1e-12
DEFAULT_STEPS = 10_000
Sampler = Callable[[float], np.ndarray]


def j0(n: int) -> np.ndarray:
    """Standard complex structure [[0, -I], [I, 0]] on R^{2n}."""
    z, i = np.zeros((n, n)), np.eye(n)
    return np.block([[z, -i], [i, z]])


def _check_symmetric(a: np.ndarray, what: str) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InputError(f"{what} must be square")
    if np.max(np.abs(a - a.T), initial=0.0) > SYM_TOL * max(1.0, np.max(np.abs(a), initial=0.0)):
        raise NonSymmetricInput(f"{what} is not symmetric")


@dataclass
class MonodromyLoop:
    dim: int
    sampler: Sampler
    description: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.dim <= 0 or self.dim % 2:
            raise InputError("loop dimension must be a positive even number")
        for s in np.linspace(0.0, 1.0, 9):
            a = self(s)
            if a.shape != (self.dim, self.dim):
                raise InputError(f"sampler returned shape {a.shape}, expected {(self.dim, self.dim)}")
            _check_symmetric(a, f"A({s:g})")
        if np.max(np.abs(self(0.0) - self(1.0))) > 1e-12 * max(1.0, np.max(np.abs(self(0.0)))):
            raise InputError("A(0) != A(1): not a loop")

    def __call__(self, s: float) -> np.ndarray:
        return np.asarray(self.sampler(float(s)), dtype=float)

    @property
    def n(self) -> int:
        return self.dim // 2

    # -- constructors -----------------------------------------------------------

    @classmethod
    def constant(cls, a) -> "MonodromyLoop":
        a = np.array(a, dtype=float)
        _check_symmetric(a, "A")
        return cls(a.shape[0], lambda s: a, {"kind": "constant", "matrix": a.tolist()})

    @classmethod
    def fourier(cls, c0, cos=(), sin=()) -> "MonodromyLoop":
        """C0 + sum_m C_m cos(2 pi m s) + D_m sin(2 pi m s), m = 1, 2, ..."""
        c0 = np.array(c0, dtype=float)
        cs = [np.array(c, dtype=float) for c in cos]
        ds = [np.array(d, dtype=float) for d in sin]
        for i, c in enumerate([c0] + cs + ds):
            _check_symmetric(c, f"Fourier coefficient {i}")
            if c.shape != c0.shape:
                raise InputError("Fourier coefficients have different shapes")

        def sample(s: float) -> np.ndarray:
            out = c0.copy()
            for m, c in enumerate(cs, start=1):
                out += c * math.cos(2 * math.pi * m * s)
            for m, d in enumerate(ds, start=1):
                out += d * math.sin(2 * math.pi * m * s)
            return out

        desc = {"kind": "fourier", "c0": c0.tolist(), "cos": [c.tolist() for c in cs], "sin": [d.tolist() for d in ds]}
        return cls(c0.shape[0], sample, desc)

    @classmethod
    def from_psi(cls, path: "PsiPath") -> "MonodromyLoop":
        """A(s) = -J0 Psi'(s) Psi(s)^{-1} for a prescribed symplectic path."""
        J = j0(path.n)

        def sample(s: float) -> np.ndarray:
            psi, dpsi = path.value_and_derivative(s)
            a = -J @ dpsi @ np.linalg.inv(psi)
            return (a + a.T) / 2  # remove rounding asymmetry only

        return cls(2 * path.n, sample, {"kind": "from_psi", **path.to_json()})

    @classmethod
    def from_json(cls, data: dict | str) -> "MonodromyLoop":
        if isinstance(data, str):
            data = json.loads(data)
        kind = data.get("kind")
        try:
            if kind == "constant":
                return cls.constant(data["matrix"])
            if kind == "fourier":
                return cls.fourier(data["c0"], data.get("cos", ()), data.get("sin", ()))
            if kind == "from_psi":
                return cls.from_psi(PsiPath.from_json(data))
        except (KeyError, ValueError) as exc:
            raise InputError(f"malformed loop spec: {exc}") from exc
        raise InputError(f"unknown loop kind {kind!r}")


@dataclass
class PsiPath:
    """Psi(s) = exp(s J0 S0) prod_i exp(c_i sin^2(m_i pi s) J0 S_i); closed since the bumps vanish at s = 0, 1."""

    s0: np.ndarray
    bumps: list[tuple[float, int, np.ndarray]] = field(default_factory=list)

    def __post_init__(self):
        self.s0 = np.array(self.s0, dtype=float)
        _check_symmetric(self.s0, "S0")
        self.bumps = [(float(c), int(m), np.array(S, dtype=float)) for c, m, S in self.bumps]
        for _, _, S in self.bumps:
            _check_symmetric(S, "bump generator")

    @property
    def n(self) -> int:
        return self.s0.shape[0] // 2

    def _gens(self):
        J = j0(self.n)
        return J @ self.s0, [(c, m, J @ S) for c, m, S in self.bumps]

    def value_and_derivative(self, s: float) -> tuple[np.ndarray, np.ndarray]:
        X0, gens = self._gens()
        factors = [expm(s * X0)]
        derivs = [X0 @ factors[0]]
        for c, m, X in gens:
            f = c * math.sin(m * math.pi * s) ** 2
            df = c * m * math.pi * math.sin(2 * m * math.pi * s)
            F = expm(f * X)
            factors.append(F)
            derivs.append(df * X @ F)
        psi = np.eye(2 * self.n)
        for F in factors:
            psi = psi @ F
        dpsi = np.zeros_like(psi)
        for i in range(len(factors)):
            term = np.eye(2 * self.n)
            for j, F in enumerate(factors):
                term = term @ (derivs[j] if j == i else F)
            dpsi += term
        return psi, dpsi

    def endpoint(self) -> np.ndarray:
        return self.value_and_derivative(1.0)[0]

    def to_json(self) -> dict:
        return {"s0": self.s0.tolist(), "bumps": [{"c": c, "m": m, "S": S.tolist()} for c, m, S in self.bumps]}

    @classmethod
    def from_json(cls, data: dict) -> "PsiPath":
        return cls(data["s0"], [(b["c"], b["m"], b["S"]) for b in data.get("bumps", [])])


# -- integration ---------------------------------------------------------------

def _node_samples(sampler: Sampler, steps: int) -> np.ndarray:
    """A at s = 0, h/2, h, ..., 1 (2*steps + 1 nodes)."""
    return np.stack([np.asarray(sampler(i / (2 * steps)), dtype=float) for i in range(2 * steps + 1)])


def _rk4_from_nodes(nodes: np.ndarray, J: np.ndarray) -> np.ndarray:
    """Fixed-step RK4 for Psi' = J A Psi; nodes has shape (2*steps+1, [batch,] d, d)."""
    steps = (nodes.shape[0] - 1) // 2
    h = 1.0 / steps
    G = J @ nodes  # generator at every node
    psi = np.broadcast_to(np.eye(J.shape[0]), nodes.shape[1:]).copy()
    for i in range(steps):
        g0, g1, g2 = G[2 * i], G[2 * i + 1], G[2 * i + 2]
        k1 = g0 @ psi
        k2 = g1 @ (psi + 0.5 * h * k1)
        k3 = g1 @ (psi + 0.5 * h * k2)
        k4 = g2 @ (psi + h * k3)
        psi = psi + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return psi


def monodromy(loop: MonodromyLoop, steps: int = DEFAULT_STEPS) -> np.ndarray:
    """Psi(1) by fourth-order Runge-Kutta."""
    if steps < 100:
        raise InputError("steps must be at least 100")
    return _rk4_from_nodes(_node_samples(loop, steps), j0(loop.n))


def symplectic_drift(psi: np.ndarray) -> float:
    J = j0(psi.shape[0] // 2)
    return float(np.max(np.abs(psi.T @ J @ psi - J)))


def nullity(m: np.ndarray, tol: float = 1e-6) -> int:
    """Singular values below tol * max(1, ||m||)."""
    sv = np.linalg.svd(m, compute_uv=False)
    scale = max(1.0, float(sv[0]) if sv.size else 0.0)
    return int(np.sum(sv < tol * scale))


def kernel_dim_torus(loop: MonodromyLoop, steps: int = DEFAULT_STEPS, tol: float = 1e-6) -> int:
    """dim ker(Id - Psi(1))."""
    psi = monodromy(loop, steps)
    return nullity(np.eye(loop.dim) - psi, tol)


def log_rotation_loop(turns: int = 1) -> MonodromyLoop:
    """Constant A = -J0 log R with log R = 2 pi turns J0, a logarithm of R = Id."""
    J = j0(1)
    return MonodromyLoop.constant(-J @ (2 * math.pi * turns * J))


# -- homotopies and crossing parity ---------------------------------------------

@dataclass
class HomotopyOfLoops:
    """A_tau(s) = (1 - tau) A_0(s) + tau A_1(s)."""

    start: MonodromyLoop
    end: MonodromyLoop

    def __post_init__(self):
        if self.start.dim != self.end.dim:
            raise InputError("endpoint loops have different dimensions")

    @property
    def dim(self) -> int:
        return self.start.dim

    def __call__(self, tau: float, s: float) -> np.ndarray:
        return (1 - tau) * self.start(s) + tau * self.end(s)


class _HomotopyIntegrator:
    """Caches the endpoint loop samples so Psi_tau(1) for many tau is one batched RK4."""

    def __init__(self, h: HomotopyOfLoops, steps: int):
        self.n0 = _node_samples(h.start, steps)
        self.n1 = _node_samples(h.end, steps)
        self.J = j0(h.dim // 2)
        self.eye = np.eye(h.dim)
        self.calls = 0

    def psi(self, taus) -> np.ndarray:
        t = np.asarray(taus, dtype=float)[None, :, None, None]
        nodes = (1 - t) * self.n0[:, None] + t * self.n1[:, None]
        self.calls += 1
        return _rk4_from_nodes(nodes, self.J)

    def det(self, taus) -> np.ndarray:
        return np.linalg.det(self.eye - self.psi(taus))


@dataclass
class Crossing:
    tau: float
    nullity: int
    kind: str  # "sign_change" or "touch"

    def to_json(self) -> dict:
        return {"tau": round(self.tau, 9), "nullity": self.nullity, "kind": self.kind}


@dataclass
class CrossingReport:
    parity: int
    det_sign_product: int
    agree: bool
    crossings: list[Crossing]
    tau_samples: int
    sign_changes: int

    def to_json(self) -> dict:
        return {
            "parity": self.parity,
            "det_sign_product": self.det_sign_product,
            "agree": self.agree,
            "crossings": [c.to_json() for c in self.crossings],
            "tau_samples": self.tau_samples,
            "sign_changes": self.sign_changes,
        }


def _locate(integ: _HomotopyIntegrator, brackets, iters: int):
    """Bisect all sign-change brackets at once."""
    lo = np.array([b[0] for b in brackets], dtype=float)
    hi = np.array([b[1] for b in brackets], dtype=float)
    flo = np.sign(integ.det(lo))
    for _ in range(iters):
        mid = (lo + hi) / 2
        fm = np.sign(integ.det(mid))
        same = fm == flo
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    return (lo + hi) / 2


def _sigma_min(integ: _HomotopyIntegrator, taus) -> np.ndarray:
    return np.linalg.svd(integ.eye - integ.psi(taus), compute_uv=False)[:, -1]


def _touch_minimum(integ: _HomotopyIntegrator, a: float, b: float, iters: int = 40) -> float:
    """Golden-section minimum of the smallest singular value of Id - Psi_tau(1) on [a, b]."""
    g = (math.sqrt(5) - 1) / 2
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = _sigma_min(integ, [c, d])
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = _sigma_min(integ, [c])[0]
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = _sigma_min(integ, [d])[0]
    return (a + b) / 2


def _merge(crossings: list[Crossing], gap: float = 1e-7) -> list[Crossing]:
    """One crossing per zero: a grid point landing on the zero yields two adjacent brackets."""
    out: list[Crossing] = []
    for c in sorted(crossings, key=lambda c: c.tau):
        if out and c.tau - out[-1].tau < gap:
            if c.nullity > out[-1].nullity:
                out[-1] = c
            continue
        out.append(c)
    return out


def crossing_parity_check(
    h: HomotopyOfLoops,
    tau_samples: int = 64,
    steps: int = 200,
    tol: float = 1e-6,
    cross_tol: float = 1e-3,
    bisect_iters: int = 32,
    max_refine: int = 3,
) -> CrossingReport:
    """Parity (-1)^{sum of nullities at crossings} against sign det(Id-Psi_0(1)) sign det(Id-Psi_1(1)).

    Crossings are sign changes of det(Id - Psi_tau(1)) on a tau grid,
    localized by bisection, plus interior local minima of |det| where the
    nullity is positive (even-multiplicity touches).  A disagreement
    refines the grid before it is reported.
    """
    if steps < 100:
        raise InputError("steps must be at least 100")
    integ = _HomotopyIntegrator(h, steps)
    ends = integ.psi([0.0, 1.0])
    for label, psi in zip(("start", "end"), ends):
        if nullity(np.eye(h.dim) - psi, tol) > 0:
            raise DegenerateEndpoint(f"{label} loop has det(Id - Psi(1)) = 0")
    d_ends = np.linalg.det(np.eye(h.dim) - ends)
    product = int(np.sign(d_ends[0]) * np.sign(d_ends[1]))

    samples = tau_samples
    report = None
    for _ in range(max_refine + 1):
        taus = np.linspace(0.0, 1.0, samples + 1)
        dets = integ.det(taus)
        signs = np.sign(dets)
        brackets = [(taus[i], taus[i + 1]) for i in range(samples) if signs[i] != signs[i + 1]]
        crossings: list[Crossing] = []
        if brackets:
            where = _locate(integ, brackets, bisect_iters)
            psis = integ.psi(where)
            for tau, psi in zip(where, psis):
                # after bisection sigma_min is ~ slope * 2^-iters, far below tol
                crossings.append(Crossing(float(tau), nullity(np.eye(h.dim) - psi, tol), "sign_change"))
        absd = np.abs(dets)
        for i in range(1, samples):
            if signs[i - 1] == signs[i] == signs[i + 1] and absd[i] < absd[i - 1] and absd[i] < absd[i + 1]:
                if nullity(np.eye(h.dim) - integ.psi([taus[i]])[0], cross_tol) == 0:
                    continue
                tau = _touch_minimum(integ, taus[i - 1], taus[i + 1])
                k = nullity(np.eye(h.dim) - integ.psi([tau])[0], tol)
                if k:
                    crossings.append(Crossing(float(tau), k, "touch"))
        crossings = _merge(crossings)
        parity = -1 if sum(c.nullity for c in crossings) % 2 else 1
        report = CrossingReport(parity, product, parity == product, crossings, samples, len(brackets))
        if report.agree:
            break
        samples *= 4
    return report


# -- randomized suite ------------------------------------------------------------

def random_symmetric(rng: np.random.Generator, d: int, scale: float = 1.0) -> np.ndarray:
    a = rng.normal(scale=scale, size=(d, d))
    return (a + a.T) / 2


def random_loop(rng: np.random.Generator, d: int) -> MonodromyLoop:
    return MonodromyLoop.fourier(
        random_symmetric(rng, d, 2.5), [random_symmetric(rng, d, 0.7)], [random_symmetric(rng, d, 0.7)]
    )


def random_homotopy(rng: np.random.Generator, d: int, steps: int = 200, min_det: float = 1e-3) -> HomotopyOfLoops:
    """Two random Fourier loops whose monodromies keep det(Id - Psi(1)) away from zero."""
    while True:
        h = HomotopyOfLoops(random_loop(rng, d), random_loop(rng, d))
        integ = _HomotopyIntegrator(h, steps)
        if np.all(np.abs(integ.det([0.0, 1.0])) > min_det):
            return h


def closed_form_example(steps: int = DEFAULT_STEPS) -> dict:
    """A = Id on R^2: Psi(1) = exp(J0), plus the step-halving convergence ratio."""
    loop = MonodromyLoop.constant(np.eye(2))
    exact = np.array([[math.cos(1), -math.sin(1)], [math.sin(1), math.cos(1)]])
    err = float(np.max(np.abs(monodromy(loop, steps) - exact)))
    e1 = float(np.linalg.norm(monodromy(loop, 100) - exact))
    e2 = float(np.linalg.norm(monodromy(loop, 200) - exact))
    return {
        "steps": steps,
        "max_error": err,
        "exp_j0_matches": err < 1e-8,
        "halving_ratio": e1 / e2,
        "fourth_order": 12.0 < e1 / e2 < 20.0,
        "symplectic_drift": symplectic_drift(monodromy(loop, steps)),
    }


def kernel_examples(steps: int = DEFAULT_STEPS, tol: float = 1e-6) -> dict:
    return {
        "zero": kernel_dim_torus(MonodromyLoop.constant(np.zeros((2, 2))), steps, tol),
        "identity": kernel_dim_torus(MonodromyLoop.constant(np.eye(2)), steps, tol),
        "log_rotation": kernel_dim_torus(log_rotation_loop(), steps, tol),
    }


def verify(trials: int = 200, seed: int = 0, steps: int = 200) -> dict:
    """Closed-form monodromy, kernel examples and randomized crossing-parity trials."""
    rng = np.random.default_rng(seed)
    results = []
    for t in range(trials):
        d = 2 * int(rng.integers(1, 4))
        h = random_homotopy(rng, d, steps)
        r = crossing_parity_check(h, steps=steps)
        results.append({"trial": t, "dim": d, **r.to_json()})
    agree = sum(1 for r in results if r["agree"])
    closed = closed_form_example()
    kernels = kernel_examples()
    return {
        "seed": seed,
        "closed_form": closed,
        "kernel_dims": kernels,
        "kernel_expected": {"zero": 2, "identity": 0, "log_rotation": 2},
        "trials": trials,
        "agreements": agree,
        "results": results,
        "passed": bool(
            closed["exp_j0_matches"]
            and closed["fourth_order"]
            and kernels == {"zero": 2, "identity": 0, "log_rotation": 2}
            and agree == trials
        ),
    }
