"""JSON problem configs.

Example::

    {
      "alpha": 0.5,
      "operator": [{"order": 2, "coeff": 1.0}],
      "initial": [{"kind": "cosine", "k": 1, "coeff": 1.0}],
      "source": [{"k": 1, "atoms": [{"kind": "sine", "k": 1, "coeff": 1.0}]}],
      "eval": {"x_min": 0.0, "x_max": 6.283185307179586, "x_steps": 129,
               "t": 0.1, "n_terms": 7}
    }

Sine, cosine and exponential atoms take a wavenumber ``k``; monomials take
a nonnegative integer power ``m``.  ``source`` entries give the time-Taylor
coefficients ``q_k`` of ``q(x, t) = sum_k q_k(x) t^k / k!``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from importlib import resources
from typing import Any

from fracvim.fracops import FracOrder
from fracvim.spatial import ATOM_KINDS, LinearOperator, SpatialAtom, SpatialFunction
from fracvim.vim import ProblemSpec, SourceSeries

__all__ = [
    "ConfigError",
    "AtomConfig",
    "OperatorTerm",
    "SourceEntry",
    "EvalConfig",
    "ProblemConfig",
    "parse_config",
    "load_config",
    "serialize",
    "bundled_config",
]


class ConfigError(ValueError):
    """Invalid config; ``path`` names the offending field, e.g. ``source[0].atoms[1].m``."""

    def __init__(self, path: str, message: str) -> None:
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


@dataclass(frozen=True)
class AtomConfig:
    kind: str
    k: float = 0.0
    coeff: float = 1.0

    def to_atom(self) -> SpatialAtom:
        return SpatialAtom(self.kind, self.k, self.coeff)

    def to_json(self) -> dict[str, Any]:
        key = "m" if self.kind == "monomial" else "k"
        value: Any = int(self.k) if self.kind == "monomial" else self.k
        return {"kind": self.kind, key: value, "coeff": self.coeff}


@dataclass(frozen=True)
class OperatorTerm:
    order: int
    coeff: float


@dataclass(frozen=True)
class SourceEntry:
    k: int
    atoms: tuple[AtomConfig, ...]


@dataclass(frozen=True)
class EvalConfig:
    x_min: float = 0.0
    x_max: float = 2.0 * math.pi
    x_steps: int = 129
    t: float = 0.1
    n_terms: int = 7


@dataclass(frozen=True)
class ProblemConfig:
    alpha: float
    operator: tuple[OperatorTerm, ...]
    initial: tuple[AtomConfig, ...]
    source: tuple[SourceEntry, ...] = ()
    eval: EvalConfig = field(default_factory=EvalConfig)

    def to_problem(self) -> ProblemSpec:
        return ProblemSpec(
            FracOrder(self.alpha),
            LinearOperator((t.order, t.coeff) for t in self.operator),
            SpatialFunction(a.to_atom() for a in self.initial),
            SourceSeries({e.k: SpatialFunction(a.to_atom() for a in e.atoms) for e in self.source}),
        )

    def to_json(self) -> dict[str, Any]:
        return {
            "alpha": self.alpha,
            "operator": [asdict(t) for t in self.operator],
            "initial": [a.to_json() for a in self.initial],
            "source": [{"k": e.k, "atoms": [a.to_json() for a in e.atoms]} for e in self.source],
            "eval": asdict(self.eval),
        }


def _obj(value: Any, path: str, allowed: set[str], required: set[str]) -> dict[str, Any]:
    if not isinstance(value, dict):
        raise ConfigError(path, f"expected an object, got {type(value).__name__}")
    unknown = sorted(set(value) - allowed)
    if unknown:
        raise ConfigError(f"{path}.{unknown[0]}" if path else unknown[0], "unknown field")
    for key in sorted(required):
        if key not in value:
            raise ConfigError(f"{path}.{key}" if path else key, "missing required field")
    return value


def _list(value: Any, path: str) -> list[Any]:
    if not isinstance(value, list):
        raise ConfigError(path, f"expected a list, got {type(value).__name__}")
    return value


def _real(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(path, "must be finite")
    return float(value)


def _int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        if isinstance(value, float) and value.is_integer():
            return int(value)
        raise ConfigError(path, f"expected an integer, got {value!r}")
    return value


def _atom(value: Any, path: str) -> AtomConfig:
    obj = _obj(value, path, {"kind", "k", "m", "coeff"}, {"kind"})
    kind = obj["kind"]
    if kind not in ATOM_KINDS:
        raise ConfigError(f"{path}.kind", f"must be one of {', '.join(ATOM_KINDS)}; got {kind!r}")
    coeff = _real(obj.get("coeff", 1.0), f"{path}.coeff")
    if kind == "monomial":
        if "k" in obj:
            raise ConfigError(f"{path}.k", "monomials take a power 'm', not a wavenumber")
        if "m" not in obj:
            raise ConfigError(f"{path}.m", "missing required field")
        m = _int(obj["m"], f"{path}.m")
        if m < 0:
            raise ConfigError(f"{path}.m", f"monomial power must be nonnegative, got {m}")
        return AtomConfig(kind, m, coeff)
    if "m" in obj:
        raise ConfigError(f"{path}.m", f"{kind} atoms take a wavenumber 'k', not a power")
    if "k" not in obj:
        raise ConfigError(f"{path}.k", "missing required field")
    return AtomConfig(kind, _real(obj["k"], f"{path}.k"), coeff)


def _from_json(data: Any) -> ProblemConfig:
    root = _obj(data, "", {"alpha", "operator", "initial", "source", "eval"}, {"alpha", "operator", "initial"})
    alpha = _real(root["alpha"], "alpha")
    if not 0.0 <= alpha < 1.0:
        raise ConfigError("alpha", f"must satisfy 0 <= alpha < 1, got {alpha}")

    operator = []
    seen_orders = set()
    for i, item in enumerate(_list(root["operator"], "operator")):
        p = f"operator[{i}]"
        obj = _obj(item, p, {"order", "coeff"}, {"order", "coeff"})
        order = _int(obj["order"], f"{p}.order")
        if order < 0:
            raise ConfigError(f"{p}.order", f"derivative order must be nonnegative, got {order}")
        if order in seen_orders:
            raise ConfigError(f"{p}.order", f"duplicate derivative order {order}")
        seen_orders.add(order)
        operator.append(OperatorTerm(order, _real(obj["coeff"], f"{p}.coeff")))

    initial = tuple(_atom(a, f"initial[{i}]") for i, a in enumerate(_list(root["initial"], "initial")))

    source = []
    seen_k = set()
    for i, item in enumerate(_list(root.get("source", []), "source")):
        p = f"source[{i}]"
        obj = _obj(item, p, {"k", "atoms"}, {"k", "atoms"})
        k = _int(obj["k"], f"{p}.k")
        if k < 0:
            raise ConfigError(f"{p}.k", f"Taylor index must be nonnegative, got {k}")
        if k in seen_k:
            raise ConfigError(f"{p}.k", f"duplicate Taylor index {k}")
        seen_k.add(k)
        atoms = tuple(_atom(a, f"{p}.atoms[{j}]") for j, a in enumerate(_list(obj["atoms"], f"{p}.atoms")))
        source.append(SourceEntry(k, atoms))

    ev = EvalConfig()
    if "eval" in root:
        e = _obj(root["eval"], "eval", {"x_min", "x_max", "x_steps", "t", "n_terms"}, set())
        ev = EvalConfig(
            x_min=_real(e.get("x_min", ev.x_min), "eval.x_min"),
            x_max=_real(e.get("x_max", ev.x_max), "eval.x_max"),
            x_steps=_int(e.get("x_steps", ev.x_steps), "eval.x_steps"),
            t=_real(e.get("t", ev.t), "eval.t"),
            n_terms=_int(e.get("n_terms", ev.n_terms), "eval.n_terms"),
        )
        if ev.t < 0:
            raise ConfigError("eval.t", f"must be nonnegative, got {ev.t}")
        if ev.n_terms < 0:
            raise ConfigError("eval.n_terms", f"must be nonnegative, got {ev.n_terms}")
        if ev.x_steps < 1:
            raise ConfigError("eval.x_steps", f"must be positive, got {ev.x_steps}")

    return ProblemConfig(alpha, tuple(operator), initial, tuple(source), ev)


def parse_config(text: str) -> ProblemConfig:
    """Parse and validate a JSON config document.

    Raises :class:`ConfigError` with a line/column for malformed JSON and a
    field path for invalid content.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno} column {exc.colno}", f"invalid JSON: {exc.msg}") from None
    return _from_json(data)


def load_config(path) -> ProblemConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def serialize(config: ProblemConfig) -> str:
    return json.dumps(config.to_json(), indent=2) + "\n"


def bundled_config(name: str = "sinusoidal.json") -> ProblemConfig:
    return parse_config(resources.files("fracvim.data").joinpath(name).read_text(encoding="utf-8"))
