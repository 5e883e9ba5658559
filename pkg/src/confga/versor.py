"""Reflection and motion versors for the conformal model.

A versor v of parity p acts on X by the twisted adjoint

    X  ->  v^-1 alpha^p(X) v

with alpha the grade involution, so a unit plane mirror sends a vector x
to -n x n as expected.  Odd versors are mirrors (plane, sphere, point),
even versors are motions (rotor, translator, motor, scalor) plus the
line mirror, which is the half-turn about the line and therefore even.
Composition is written in application order: compose([a, b]) applies a
first, and equals the product a.mv * b.mv.

The point mirror P(p) is a null vector with no inverse; it is kept as a
degenerate versor applied by the uninverted sandwich v alpha(X) v, which
collapses every point onto the mirror point.

The paper-literal convention replaces alpha^p(X) by the global sign
(-1)^p; the two agree on odd-grade arguments and differ by an overall
(projectively invisible) sign on even ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import tolerance
from .algebra import Multivector, exp_special
from .conformal import (
    ALG,
    E,
    I3,
    ConformalObject,
    as_vec3,
    classify,
    embed_point,
    euclid_bivector,
    euclid_vector,
    einf,
)
from .errors import (
    DegenerateError,
    DomainError,
    GradeError,
    MixedParityError,
    NotVersorError,
    ParityModeError,
    SingularVersorError,
)

MODES = ("motion", "reflection")
CONVENTIONS = ("twisted-adjoint", "paper-literal")


@dataclass(frozen=True)
class Versor:
    """A validated versor: the multivector, its parity, <v ~v>_0, and the
    precomputed inverse (None for the degenerate null point mirror)."""

    mv: Multivector
    parity: str
    norm2: float
    inv: Multivector | None

    @property
    def is_null(self) -> bool:
        return self.inv is None

    def inverse(self) -> Multivector:
        if self.inv is None:
            raise SingularVersorError("degenerate (null) versor has no inverse")
        return self.inv

    def __repr__(self) -> str:
        tag = "null " if self.is_null else ""
        return f"<{tag}{self.parity} versor {self.mv!r}>"


def make_versor(mv: Multivector, allow_null: bool = False) -> Versor:
    parity = mv.parity()
    if parity is None:
        raise NotVersorError("zero multivector is not a versor")
    if parity == "mixed":
        raise MixedParityError("versor must be purely even or purely odd")
    m = mv * ~mv
    s = m.scalar_part()
    off = m - m.grade(0)
    if not off.is_zero(scale=max(abs(s), mv.max_abs() ** 2)):
        raise NotVersorError("v * ~v is not scalar")
    if abs(s) <= tolerance.threshold(mv.max_abs() ** 2):
        if allow_null:
            return Versor(mv, parity, 0.0, None)
        raise SingularVersorError("v * ~v vanishes; versor is not invertible")
    return Versor(mv, parity, s, ~mv / s)


# -- mirrors ------------------------------------------------------------------


def reflector_plane(n, d: float) -> Versor:
    """Mirror in the plane {x : n.x = d}; mu = unit(n) + d einf, mu^2 = 1."""
    arr = as_vec3(n)
    norm = float(np.linalg.norm(arr))
    if norm == 0.0:
        raise DegenerateError("plane mirror needs a nonzero normal")
    return make_versor(euclid_vector(arr / norm) + float(d) * einf)


def reflector_sphere(center, r: float) -> Versor:
    """Inversion in the sphere; sigma = P(center) - (1/2) r^2 einf, sigma^2 = r^2."""
    if r <= 0:
        raise DomainError(f"sphere mirror needs r > 0, got {r}")
    return make_versor(embed_point(center) - (0.5 * r * r) * einf)


def reflector_point(p) -> Versor:
    """Degenerate mirror: P(p) is null, acts as the constant map onto p."""
    return make_versor(embed_point(p), allow_null=True)


def reflector_line(line) -> Versor:
    """Half-turn about a line: even, equal to two perpendicular plane mirrors."""
    obj = line if isinstance(line, ConformalObject) else classify(line)
    if obj.kind != "line":
        raise DomainError(f"line mirror needs a line, got {obj.kind}")
    d = euclid_vector(obj.params["direction"])
    foot = d | euclid_bivector(obj.params["moment"])
    p0 = np.array([foot.coeff(0b001), foot.coeff(0b010), foot.coeff(0b100)])
    plane = d | I3  # unit bivector orthogonal to the line direction
    mv = translator(-p0).mv * plane * translator(p0).mv
    return make_versor(mv)


# -- motions ------------------------------------------------------------------


def rotor(i: Multivector, theta: float) -> Versor:
    """Rotation by theta in the (normalized) plane i; x' = R^-1 x R takes
    e1 to e2 for i = e12, theta = pi/2."""
    if i.grades() != frozenset({2}):
        raise GradeError("rotation plane must be a bivector")
    sq = i * i
    s = sq.scalar_part()
    if not (sq - sq.grade(0)).is_zero(scale=i.max_abs() ** 2) or s >= 0:
        raise DomainError("rotation plane must square to a negative scalar")
    unit = i / math.sqrt(-s)
    return make_versor(exp_special((0.5 * theta) * unit))


def translator(t) -> Versor:
    """T = 1 + (1/2) t einf; the action T^-1 X T translates by +t."""
    tv = euclid_vector(as_vec3(t))
    return make_versor(ALG.scalar(1.0) + 0.5 * (tv ^ einf))


def motor(i: Multivector, theta: float, t) -> Versor:
    """Translate by t, then rotate: the product translator(t).mv * rotor.mv."""
    return compose([translator(t), rotor(i, theta)])


def scalor(s: float, center=(0.0, 0.0, 0.0)) -> Versor:
    """Uniform scaling by s > 0 about a center; exp(E ln(s)/2) conjugated
    by the translator that moves the center to the origin."""
    if s <= 0:
        raise DomainError(f"scale factor must be positive, got {s}")
    core = exp_special((0.5 * math.log(s)) * E)
    c = as_vec3(center)
    if np.all(c == 0.0):
        return make_versor(core)
    return make_versor(translator(-c).mv * core * translator(c).mv)


# -- action -------------------------------------------------------------------


def _sandwich(v: Versor, mv: Multivector, convention: str) -> Multivector:
    left = v.mv if v.inv is None else v.inv
    if convention == "twisted-adjoint":
        mid = mv.involute() if v.parity == "odd" else mv
        return left * mid * v.mv
    out = left * mv * v.mv
    return -out if v.parity == "odd" else out


def apply(v: Versor, X, mode: str, convention: str = "twisted-adjoint"):
    """Act on a multivector or classified object; 'motion' demands an even
    versor and 'reflection' an odd one."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")
    want = "even" if mode == "motion" else "odd"
    if v.parity != want:
        raise ParityModeError(f"{mode} mode needs an {want} versor, got {v.parity}")
    if isinstance(X, ConformalObject):
        return classify(_sandwich(v, X.mv, convention))
    return _sandwich(v, X, convention)


def compose(versors: Sequence[Versor]) -> Versor:
    """Product in application order: compose([a, b]) acts as a then b."""
    acc = ALG.scalar(1.0)
    for v in versors:
        if v.is_null:
            raise SingularVersorError("cannot compose a degenerate point mirror")
        acc = acc * v.mv
    return make_versor(acc)
