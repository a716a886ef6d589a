"""Isotropy data for the two fibrations of Sp(n)/Sp(n-p).

``Wallach(k1, k2, k3)``: Sp(n)/Sp(k3) fibred over
Sp(n)/(Sp(k1) x Sp(k2) x Sp(k3)) with summands 1, 2, 12, 13, 23.

``Flag(n, p)``: Sp(n)/Sp(n-p) fibred over Sp(n)/(U(p) x Sp(n-p)) with
summands 0, 1, 2, 3. For p = 1 the summand 1 is zero-dimensional and is
dropped.

All formulas are exact. Metric points may hold Fractions, Intervals or
Expr nodes; the Ricci formulas only use field operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .algebra import Expr, const, expr_eval, rat, var
from .errors import DomainError, SpecError

WALLACH_LABELS = ("1", "2", "12", "13", "23")
FLAG_LABELS = ("0", "1", "2", "3")


@dataclass(frozen=True)
class FibrationSpec:
    kind: str
    params: tuple

    def __post_init__(self):
        if self.kind == "wallach":
            if len(self.params) != 3 or any(not isinstance(k, int) or k < 1 for k in self.params):
                raise SpecError(f"Wallach needs three positive integers, got {self.params}")
        elif self.kind == "flag":
            if self.params == (None, None):
                return
            if len(self.params) != 2 or any(not isinstance(v, int) for v in self.params):
                raise SpecError(f"Flag needs integers (n, p), got {self.params}")
            n, p = self.params
            if not 1 <= p < n:
                raise SpecError(f"Flag requires 1 <= p < n, got n={n}, p={p}")
        else:
            raise SpecError(f"unknown fibration {self.kind!r}")

    @classmethod
    def wallach(cls, k1: int, k2: int, k3: int) -> "FibrationSpec":
        return cls("wallach", (k1, k2, k3))

    @classmethod
    def flag(cls, n: int | None = None, p: int | None = None) -> "FibrationSpec":
        """Flag(n, p); with no arguments, n and p stay symbolic."""
        return cls("flag", (n, p))

    @property
    def symbolic(self) -> bool:
        return self.kind == "flag" and self.params == (None, None)

    @property
    def n(self) -> int:
        return sum(self.params) if self.kind == "wallach" else self.params[0]

    @property
    def p(self) -> int:
        return self.params[0] + self.params[1] if self.kind == "wallach" else self.params[1]

    @property
    def labels(self) -> tuple[str, ...]:
        if self.kind == "wallach":
            return WALLACH_LABELS
        if not self.symbolic and self.p == 1:
            return ("0", "2", "3")
        return FLAG_LABELS

    @property
    def prefix(self) -> str:
        return "x" if self.kind == "wallach" else "u"

    @property
    def metric_vars(self) -> tuple[str, ...]:
        return tuple(self.prefix + lab for lab in self.labels)

    @property
    def normalized_var(self) -> str:
        return self.metric_vars[-1]

    def __str__(self) -> str:
        if self.kind == "wallach":
            return "Wallach(%d,%d,%d)" % self.params
        if self.symbolic:
            return "Flag(n,p)"
        return "Flag(%d,%d)" % self.params


def _check(spec: FibrationSpec) -> None:
    if not isinstance(spec, FibrationSpec):
        raise SpecError(f"not a fibration spec: {spec!r}")


def summand_dims(spec: FibrationSpec) -> dict[str, int]:
    """Dimension of each isotropy summand, keyed by label."""
    _check(spec)
    if spec.symbolic:
        raise SpecError("dimensions need concrete n, p")
    if spec.kind == "wallach":
        k1, k2, k3 = spec.params
        return {"1": k1 * (2 * k1 + 1), "2": k2 * (2 * k2 + 1),
                "12": 4 * k1 * k2, "13": 4 * k1 * k3, "23": 4 * k2 * k3}
    n, p = spec.params
    d = {"0": 1, "1": p * p - 1, "2": 4 * p * (n - p), "3": p * (p + 1)}
    if p == 1:
        del d["1"]
    return d


class StructureConstants:
    """Symmetric table of the nonzero A_{ijk}; missing triples are zero."""

    def __init__(self, table: Mapping[tuple[str, str, str], Fraction]):
        self._t = {tuple(sorted(k)): Fraction(v) for k, v in table.items()}

    def __call__(self, i: str, j: str, k: str) -> Fraction:
        return self._t.get(tuple(sorted((i, j, k))), Fraction(0))

    def nonzero(self) -> dict[tuple[str, str, str], Fraction]:
        return {k: v for k, v in self._t.items() if v}

    def __repr__(self) -> str:
        body = ", ".join(f"A{''.join('(' + x + ')' if len(x) > 1 else x for x in k)}={v}"
                         for k, v in sorted(self._t.items()))
        return f"StructureConstants({body})"


def structure_constants(spec: FibrationSpec) -> StructureConstants:
    _check(spec)
    if spec.symbolic:
        raise SpecError("structure constants need concrete n, p")
    if spec.kind == "wallach":
        k = dict(zip("123", spec.params))
        n1 = spec.n + 1

        def diag(a):
            return Fraction(k[a] * (k[a] + 1) * (2 * k[a] + 1), n1)

        def pair(a, b):  # A_(ab)(ab)a
            return Fraction(k[a] * k[b] * (2 * k[a] + 1), n1)

        return StructureConstants({
            ("1", "1", "1"): diag("1"),
            ("2", "2", "2"): diag("2"),
            ("1", "12", "12"): pair("1", "2"),
            ("1", "13", "13"): pair("1", "3"),
            ("2", "12", "12"): pair("2", "1"),
            ("2", "23", "23"): pair("2", "3"),
            ("12", "23", "13"): Fraction(2 * k["1"] * k["2"] * k["3"], n1),
        })
    d = summand_dims(spec)
    d1 = d.get("1", 0)
    d2, d3 = d["2"], d["3"]
    D = d2 + 4 * d3
    t = {
        ("2", "2", "0"): Fraction(d2, D),
        ("3", "3", "0"): Fraction(4 * d3, D),
        ("3", "2", "2"): Fraction(d2 * d3, D),
    }
    if d1:
        t[("1", "1", "1")] = Fraction(2 * d3 * (2 * d1 + 2 - d3), D)
        t[("1", "2", "2")] = Fraction(d1 * d2, D)
        # same denominator as every other triple (see notes)
        t[("1", "3", "3")] = Fraction(2 * d3 * (d3 - 2), D)
    return StructureConstants(t)


def _point(spec: FibrationSpec, x) -> dict[str, object]:
    """Metric point keyed by summand label."""
    labels = spec.labels
    if isinstance(x, Mapping):
        out = {}
        for lab, nm in zip(labels, spec.metric_vars):
            if nm in x:
                out[lab] = x[nm]
            elif lab in x:
                out[lab] = x[lab]
            else:
                raise DomainError(f"metric point lacks {nm}")
        return out
    x = list(x)
    if len(x) != len(labels):
        raise DomainError(f"{spec} metric needs {len(labels)} coordinates, got {len(x)}")
    return dict(zip(labels, x))


def _coerce(v):
    if isinstance(v, (Expr,)) or hasattr(v, "lo"):
        return v
    return rat(v)


def ricci_general(
    dims: Mapping[str, int],
    A: StructureConstants,
    x: Mapping[str, object],
) -> dict[str, object]:
    """Ricci components of a diagonal metric from dimensions and structure constants.

    ``x`` maps each summand label to its metric coefficient.
    """
    labels = list(dims)
    xs = {lab: _coerce(x[lab]) for lab in labels}
    for lab, v in xs.items():
        if isinstance(v, Fraction) and v <= 0:
            raise DomainError(f"metric coefficient {lab} must be positive, got {v}")
    out = {}
    for k in labels:
        dk = dims[k]
        xk = xs[k]
        pos = []
        neg = []
        for j, i in product(labels, repeat=2):
            a = A(j, i, k)
            if a:
                pos.append(a * xk / (xs[j] * xs[i]))
                neg.append(a * xs[j] / (xk * xs[i]))
        r = Fraction(1, 2) / xk
        if pos:
            r = r + Fraction(1, 4 * dk) * _sum(pos) - Fraction(1, 2 * dk) * _sum(neg)
        out[k] = r
    return out


def _sum(terms: Sequence):
    s = terms[0]
    for t in terms[1:]:
        s = s + t
    return s


def _wallach_closed(spec: FibrationSpec) -> dict[str, Expr]:
    k1, k2, k3 = spec.params
    N = spec.n + 1
    x1, x2, x12, x13, x23 = (var(v) for v in spec.metric_vars)

    def c(a, b):
        return const(Fraction(a, b))

    r1 = c(k1 + 1, 4 * N) / x1 + c(k2, 4 * N) * x1 / x12 ** 2 + c(k3, 4 * N) * x1 / x13 ** 2
    r2 = c(k2 + 1, 4 * N) / x2 + c(k1, 4 * N) * x2 / x12 ** 2 + c(k3, 4 * N) * x2 / x23 ** 2
    r12 = (c(1, 2) / x12
           + c(k3, 4 * N) * (x12 / (x13 * x23) - x13 / (x12 * x23) - x23 / (x12 * x13))
           - c(2 * k1 + 1, 8 * N) * x1 / x12 ** 2
           - c(2 * k2 + 1, 8 * N) * x2 / x12 ** 2)
    r13 = (c(1, 2) / x13
           + c(k2, 4 * N) * (x13 / (x12 * x23) - x12 / (x13 * x23) - x23 / (x12 * x13))
           - c(2 * k1 + 1, 8 * N) * x1 / x13 ** 2)
    r23 = (c(1, 2) / x23
           + c(k1, 4 * N) * (x23 / (x13 * x12) - x13 / (x12 * x23) - x12 / (x23 * x13))
           - c(2 * k2 + 1, 8 * N) * x2 / x23 ** 2)
    return dict(zip(WALLACH_LABELS, (r1, r2, r12, r13, r23)))


def _flag_closed(spec: FibrationSpec) -> dict[str, Expr]:
    d = summand_dims(spec)
    d1 = d.get("1", 0)
    d2, d3 = d["2"], d["3"]
    D = d2 + 4 * d3
    u0, u2, u3 = var("u0"), var("u2"), var("u3")

    def c(a, b=1):
        return const(Fraction(a, b))

    r0 = u0 / (4 * u2 ** 2) * c(d2, D) + u0 / (4 * u3 ** 2) * c(4 * d3, D)
    out = {"0": r0}
    if d1:
        u1 = var("u1")
        out["1"] = (c(2 * d3 * (2 * d1 + 2 - d3), 4 * d1 * D) / u1
                    + u1 / (4 * u2 ** 2) * c(d2, D)
                    + u1 / u3 ** 2 * c(d3 * (d3 - 2), 2 * d1 * D))
        tail2 = c(1, D) * u0 + c(d1, D) * u1
        tail3 = c(2, D) * u0 + c(d3 - 2, D) * u1
    else:
        tail2 = c(1, D) * u0
        tail3 = c(2, D) * u0
    out["2"] = c(1, 2) / u2 - c(d3, 2 * D) * u3 / u2 ** 2 - c(1, 2) * tail2 / u2 ** 2
    out["3"] = (c(1, 2) - c(d2, 2 * D)) / u3 + c(d2, 4 * D) * u3 / u2 ** 2 - tail3 / u3 ** 2
    return out


def _flag_symbolic() -> dict[str, Expr]:
    n, p = var("n"), var("p")
    u0, u1, u2, u3 = (var(f"u{i}") for i in range(4))
    N = n + 1
    r0 = (n - p) / (4 * N) * u0 / u2 ** 2 + (p + 1) / (4 * N) * u0 / u3 ** 2
    r1 = (p / (8 * N * u1) + (n - p) / N * u1 / (4 * u2 ** 2)
          + (p + 2) / (8 * N) * u1 / u3 ** 2)
    r2 = (const(Fraction(1, 2)) / u2 - (p + 1) / (8 * N) * u3 / u2 ** 2
          - (u0 + (p ** 2 - 1) * u1) / (8 * p * N * u2 ** 2))
    r3 = ((p + 1) / (2 * N * u3) + (n - p) / (4 * N) * u3 / u2 ** 2
          - (u0 + u1 * (p - 1) * (p + 2) / 2) / (2 * p * N * u3 ** 2))
    return dict(zip(FLAG_LABELS, (r0, r1, r2, r3)))


def ricci_closed_form(spec: FibrationSpec, x=None) -> dict[str, object]:
    """Closed-form Ricci components keyed by summand label.

    Without ``x`` the components are returned as Expr in the metric
    variables (and in n, p for a symbolic Flag spec). With ``x`` (sequence
    in label order or mapping by variable name) they are evaluated exactly.
    """
    _check(spec)
    if spec.kind == "wallach":
        exprs = _wallach_closed(spec)
    elif spec.symbolic:
        exprs = _flag_symbolic()
    else:
        exprs = _flag_closed(spec)
    if x is None:
        return exprs
    pt = _point(spec, x)
    vals = {nm: _coerce(pt[lab]) for lab, nm in zip(spec.labels, spec.metric_vars)}
    for nm, v in vals.items():
        if (isinstance(v, Fraction) and v == 0) or (hasattr(v, "contains_zero") and v.contains_zero()):
            raise DomainError(f"metric coefficient {nm} is zero")
    return {lab: expr_eval(e, vals) for lab, e in exprs.items()}


def ricci(spec: FibrationSpec, x) -> dict[str, object]:
    """Ricci components through the general formula (dimensions + structure constants)."""
    pt = _point(spec, x)
    for lab, v in pt.items():
        v = _coerce(v)
        if isinstance(v, Fraction) and v <= 0:
            raise DomainError(f"metric coefficient {lab} must be positive")
    return ricci_general(summand_dims(spec), structure_constants(spec), pt)
