"""Finite-dimensional Z/2-graded A-infinity algebras and modules as sparse tables.

Operations are stored as ``{arity: {input basis tuple: {output index: coeff}}}``.
Relations use the sign ``(-1)^(sum over the inputs right of the inner block of (deg + 1))``
for ``Id^p (x) mu^q (x) Id^r``, the same rule the truncated bar differential uses.
``mu^q`` has degree ``q mod 2``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping

Table = dict[int, dict[tuple[int, ...], dict[int, Fraction]]]

Q_MAX = 8

# tuple entries are (kind, index) with kind in "m" (right module), "a" (algebra), "n" (left module)
Label = tuple[str, int]


def _clean_table(ops: Mapping) -> Table:
    out: Table = {}
    for q, entries in ops.items():
        q = int(q)
        tbl = {}
        for inputs, outputs in entries.items():
            inputs = tuple(int(i) for i in inputs)
            if len(inputs) != q:
                raise ValueError(f"mu^{q} entry {inputs} has wrong arity")
            outs = {int(o): Fraction(c) for o, c in outputs.items() if Fraction(c) != 0}
            if outs:
                tbl[inputs] = outs
        if tbl:
            out[q] = tbl
    return out


def _max_arity(ops: Table) -> int:
    return max(ops, default=0)


@dataclass
class AInfinityAlgebra:
    degrees: tuple[int, ...]
    unit: int
    ops: Table
    names: tuple[str, ...] = ()

    def __post_init__(self):
        self.degrees = tuple(int(d) % 2 for d in self.degrees)
        self.ops = _clean_table(self.ops)
        if not 0 <= self.unit < self.dim:
            raise ValueError("unit index out of range")
        if self.degrees[self.unit] != 0:
            raise ValueError("unit must have degree 0")
        if not self.names:
            self.names = tuple(f"e{i}" for i in range(self.dim))
        self.max_arity = _max_arity(self.ops)
        self._verified_to = 0

    @property
    def dim(self) -> int:
        return len(self.degrees)

    @property
    def reduced_basis(self) -> tuple[int, ...]:
        """Basis of A-bar for the augmentation A = (1) + span(other basis vectors)."""
        return tuple(i for i in range(self.dim) if i != self.unit)

    def mu(self, inputs: tuple[int, ...]) -> dict[int, Fraction]:
        return self.ops.get(len(inputs), {}).get(inputs, {})

    def to_json(self) -> dict:
        return {
            "degrees": list(self.degrees),
            "unit": self.unit,
            "names": list(self.names),
            "ops": _table_to_json(self.ops),
        }


@dataclass
class AInfinityModule:
    """``side="right"``: mu^q(m, a_1..a_{q-1}) in M.  ``side="left"``: mu^q(a_1..a_{q-1}, n) in N.

    Table inputs list the module index in its natural slot (first for right
    modules, last for left modules).
    """

    algebra: AInfinityAlgebra
    side: str
    degrees: tuple[int, ...]
    ops: Table
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        self.degrees = tuple(int(d) % 2 for d in self.degrees)
        self.ops = _clean_table(self.ops)
        if not self.names:
            prefix = "m" if self.side == "right" else "n"
            self.names = tuple(f"{prefix}{i}" for i in range(self.dim))
        self.max_arity = _max_arity(self.ops)
        self._verified_to = 0

    @property
    def dim(self) -> int:
        return len(self.degrees)

    @property
    def kind(self) -> str:
        return "m" if self.side == "right" else "n"

    def mu(self, inputs: tuple[int, ...]) -> dict[int, Fraction]:
        return self.ops.get(len(inputs), {}).get(inputs, {})

    def to_json(self) -> dict:
        return {
            "side": self.side,
            "degrees": list(self.degrees),
            "names": list(self.names),
            "ops": _table_to_json(self.ops),
        }


def _table_to_json(ops: Table) -> list:
    rows = []
    for q in sorted(ops):
        for inputs in sorted(ops[q]):
            for out, c in sorted(ops[q][inputs].items()):
                rows.append({"inputs": list(inputs), "output": out, "coeff": str(c)})
    return rows


def table_from_json(rows: list) -> Table:
    ops: dict = {}
    for row in rows:
        inputs = tuple(int(i) for i in row["inputs"])
        ops.setdefault(len(inputs), {}).setdefault(inputs, {})
        slot = ops[len(inputs)][inputs]
        out = int(row["output"])
        slot[out] = slot.get(out, Fraction(0)) + Fraction(str(row["coeff"]))
    return ops


def algebra_from_json(data: dict) -> AInfinityAlgebra:
    return AInfinityAlgebra(
        tuple(data["degrees"]), int(data["unit"]), table_from_json(data.get("ops", [])), tuple(data.get("names", ()))
    )


def module_from_json(data: dict, algebra: AInfinityAlgebra) -> AInfinityModule:
    return AInfinityModule(
        algebra, data["side"], tuple(data["degrees"]), table_from_json(data.get("ops", [])), tuple(data.get("names", ()))
    )


# -- evaluation on labelled tuples ---------------------------------------------

class _Context:
    """Evaluates mu on tuples mixing module and algebra basis labels."""

    def __init__(self, algebra: AInfinityAlgebra, right=None, left=None):
        self.A = algebra
        self.M = right
        self.N = left

    def degree(self, label: Label) -> int:
        kind, i = label
        if kind == "a":
            return self.A.degrees[i]
        if kind == "m":
            return self.M.degrees[i]
        return self.N.degrees[i]

    def mu(self, labels: tuple[Label, ...]) -> dict[Label, Fraction]:
        kinds = [k for k, _ in labels]
        idx = tuple(i for _, i in labels)
        if kinds[0] == "m":
            if any(k != "a" for k in kinds[1:]):
                return {}
            return {("m", o): c for o, c in self.M.mu(idx).items()}
        if kinds[-1] == "n":
            if any(k != "a" for k in kinds[:-1]):
                return {}
            return {("n", o): c for o, c in self.N.mu(idx).items()}
        return {("a", o): c for o, c in self.A.mu(idx).items()}

    def max_arity(self, kind: str) -> int:
        return {"a": self.A, "m": self.M, "n": self.N}[kind].max_arity


def _sign_right_of(ctx: _Context, labels, start: int) -> int:
    s = sum(ctx.degree(l) + 1 for l in labels[start:])
    return -1 if s % 2 else 1


def relation_value(ctx: _Context, labels: tuple[Label, ...]) -> dict[Label, Fraction]:
    """sum over blocks of (-1)^* mu(..., mu^q(block), ...) for one basis tuple."""
    d = len(labels)
    total: dict[Label, Fraction] = {}
    for q in range(1, d + 1):
        for p in range(0, d - q + 1):
            block = labels[p : p + q]
            inner = ctx.mu(block)
            if not inner:
                continue
            sign = _sign_right_of(ctx, labels, p + q)
            for out, c in inner.items():
                outer = ctx.mu(labels[:p] + (out,) + labels[p + q :])
                for o2, c2 in outer.items():
                    total[o2] = total.get(o2, Fraction(0)) + sign * c * c2
    return {k: v for k, v in total.items() if v != 0}


@dataclass
class Violation:
    kind: str  # "relation", "unit" or "degree"
    inputs: tuple[Label, ...]
    residual: dict

    def describe(self, ctx_names=None) -> str:
        return f"{self.kind}:{','.join(f'{k}{i}' for k, i in self.inputs)}"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "inputs": [f"{k}{i}" for k, i in self.inputs],
            "residual": {f"{k}{i}": str(c) for (k, i), c in sorted(self.residual.items())},
        }


@dataclass
class RelationReport:
    q_max: int
    violations: list[Violation] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"q_max": self.q_max, "passed": self.passed, "violations": [v.to_json() for v in self.violations]}


def _tuples(ctx: _Context, target, d: int) -> Iterator[tuple[Label, ...]]:
    A = range(ctx.A.dim)
    if isinstance(target, AInfinityAlgebra):
        for t in itertools.product(A, repeat=d):
            yield tuple(("a", i) for i in t)
    elif target.side == "right":
        for m in range(target.dim):
            for t in itertools.product(A, repeat=d - 1):
                yield (("m", m),) + tuple(("a", i) for i in t)
    else:
        for n in range(target.dim):
            for t in itertools.product(A, repeat=d - 1):
                yield tuple(("a", i) for i in t) + (("n", n),)


def _context_for(target) -> _Context:
    if isinstance(target, AInfinityAlgebra):
        return _Context(target)
    if target.side == "right":
        return _Context(target.algebra, right=target)
    return _Context(target.algebra, left=target)


def _unit_and_degree_violations(ctx: _Context, target, q_max: int) -> list[Violation]:
    out = []
    A = ctx.A
    unit = ("a", A.unit)
    kind = "a" if isinstance(target, AInfinityAlgebra) else target.kind
    for q, tbl in target.ops.items():
        if q > q_max:
            continue
        for inputs, outputs in tbl.items():
            labels = _labels_for(target, inputs)
            deg_in = sum(ctx.degree(l) for l in labels)
            for o in outputs:
                if (ctx.degree((kind, o)) - deg_in - q) % 2:
                    out.append(Violation("degree", labels, {(kind, o): outputs[o]}))
            if q >= 3 and unit in labels:
                out.append(Violation("unit", labels, {(kind, o): c for o, c in outputs.items()}))
    # mu^2 against the unit must act as the identity
    dim = target.dim
    for i in range(dim):
        me = (kind, i)
        pairs = []
        if kind in ("a", "m"):
            pairs.append((me, unit))
        if kind in ("a", "n"):
            pairs.append((unit, me))
        for pair in pairs:
            got = ctx.mu(pair)
            # under the sign rule the unit acts from the left by (-1)^deg
            want = Fraction(-1 if (pair[0] == unit and ctx.degree(me) % 2) else 1)
            if got != {me: want}:
                residual = dict(got)
                residual[me] = residual.get(me, Fraction(0)) - want
                out.append(Violation("unit", pair, {k: v for k, v in residual.items() if v != 0}))
    return out


def _labels_for(target, inputs: tuple[int, ...]) -> tuple[Label, ...]:
    if isinstance(target, AInfinityAlgebra):
        return tuple(("a", i) for i in inputs)
    if target.side == "right":
        return (("m", inputs[0]),) + tuple(("a", i) for i in inputs[1:])
    return tuple(("a", i) for i in inputs[:-1]) + (("n", inputs[-1]),)


def check_ainf_relations(target, q_max: int = Q_MAX, stop_at_first: bool = False) -> RelationReport:
    """All A-infinity relations on basis tuples of total arity <= q_max, plus strict unitality and degrees.

    For a module the algebra's own relations are assumed (check it separately).
    """
    ctx = _context_for(target)
    report = RelationReport(q_max)
    report.violations.extend(_unit_and_degree_violations(ctx, target, q_max))
    if stop_at_first and report.violations:
        return report
    for d in range(1, q_max + 1):
        for labels in _tuples(ctx, target, d):
            res = relation_value(ctx, labels)
            if res:
                report.violations.append(Violation("relation", labels, res))
                if stop_at_first:
                    return report
    if report.passed:
        target._verified_to = max(target._verified_to, q_max)
    return report


# -- the two model algebras and their modules ----------------------------------

MODELS = ("formal_x2", "deformed_x2m1")
_MODEL_ALIASES = {"formal": "formal_x2", "deformed": "deformed_x2m1"}


def associative_algebra(x_squared: int) -> AInfinityAlgebra:
    """C[x]/(x^2 - x_squared) with basis (1, x), deg x = 0, no higher operations."""
    mu2 = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}}
    if x_squared:
        mu2[(1, 1)] = {0: x_squared}
    return AInfinityAlgebra((0, 0), 0, {2: mu2}, ("1", "x"))


def rank_one_module(algebra: AInfinityAlgebra, side: str, eps: int, degree: int = 0) -> AInfinityModule:
    """<m> with mu^2(m,1)=m, mu^2(m,x)=eps m (right) or the mirror image (left); eps=0 allowed."""
    if side == "right":
        mu2 = {(0, 0): {0: 1}}
        if eps:
            mu2[(0, 1)] = {0: eps}
        return AInfinityModule(algebra, "right", (degree,), {2: mu2}, ("m",))
    mu2 = {(0, 0): {0: -1 if degree % 2 else 1}}
    if eps:
        mu2[(1, 0)] = {0: eps}
    return AInfinityModule(algebra, "left", (degree,), {2: mu2}, ("n",))


def build_model(model: str, eps_m: int = 1, eps_n: int = 1):
    """(algebra, right module <m>, left module <n>) for the formal or deformed model."""
    model = _MODEL_ALIASES.get(model, model)
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}")
    if eps_m not in (1, -1) or eps_n not in (1, -1):
        raise ValueError("eps_m and eps_n must be +-1")
    if model == "formal_x2":
        A = associative_algebra(0)
        return A, rank_one_module(A, "right", 0), rank_one_module(A, "left", 0)
    A = associative_algebra(1)
    return A, rank_one_module(A, "right", eps_m), rank_one_module(A, "left", eps_n)


def parse_signs(text: str) -> tuple[int, int]:
    if len(text) != 2 or any(c not in "+-" for c in text):
        raise ValueError("signs must be one of ++, +-, -+, --")
    return tuple(1 if c == "+" else -1 for c in text)  # type: ignore[return-value]


# -- vanishing of higher module operations -------------------------------------

@dataclass
class VanishingAudit:
    vanishing: bool
    minimal_j: int | None
    relations_hold: bool
    witness: Violation | None

    def to_json(self) -> dict:
        return {
            "vanishing": self.vanishing,
            "minimal_j": self.minimal_j,
            "relations_hold": self.relations_hold,
            "witness": self.witness.to_json() if self.witness else None,
        }


def module_vanishing_audit(module: AInfinityModule, q_max: int = Q_MAX) -> VanishingAudit:
    """Whether mu^j = 0 for 3 <= j <= q_max; if not, the smallest such j and a violated relation.

    ``relations_hold`` with ``vanishing=False`` means the module is a genuine
    non-formal solution of the relations up to ``q_max``.
    """
    nonzero = sorted(q for q in module.ops if 3 <= q <= q_max)
    report = check_ainf_relations(module, q_max)
    if not nonzero:
        return VanishingAudit(True, None, report.passed, None)
    witness = None
    if not report.passed:
        rel = [v for v in report.violations if v.kind == "relation"]
        pool = rel or report.violations
        witness = min(pool, key=lambda v: (len(v.inputs), v.inputs))
    return VanishingAudit(False, nonzero[0], report.passed, witness)


def to_json(obj) -> str:
    return json.dumps(obj.to_json(), sort_keys=True)


# -- corrupted unit data -------------------------------------------------------

def corrupted_unit_module(eps_m: int, first: int, coeff) -> AInfinityModule:
    """Deformed right module <m> with a nonzero mu^3(m, a, 1) = coeff m, a = basis index ``first``."""
    A, M, _ = build_model("deformed", eps_m, 1)
    if coeff == 0:
        raise ValueError("corruption coefficient must be nonzero")
    ops = {q: {k: dict(v) for k, v in t.items()} for q, t in M.ops.items()}
    ops[3] = {(0, first, A.unit): {0: Fraction(coeff)}}
    return AInfinityModule(A, "right", M.degrees, ops, M.names)


def unit_family_witness(module: AInfinityModule, q_max: int = Q_MAX) -> Violation | None:
    """The shortest violated relation on a tuple of the form (m, x, ..., x, 1), if any."""
    A = module.algebra
    x = ("a", A.reduced_basis[0])
    report = check_ainf_relations(module, q_max)
    for v in sorted(report.violations, key=lambda v: (len(v.inputs), v.inputs)):
        if v.kind != "relation" or v.inputs[0][0] != "m":
            continue
        middle, last = v.inputs[1:-1], v.inputs[-1]
        if middle and last == ("a", A.unit) and all(l == x for l in middle):
            return v
    return None
