"""The conformal model of Euclidean 3-space inside Cl(4,1).

A Euclidean point p embeds as the null vector

    P = p + (1/2) p^2 einf + e0,       P^2 = 0,
    P1 . P2 = -(1/2) |p1 - p2|^2,

where the two null directions are carried by the internal orthonormal basis:
e0 = (e- - e+)/2 and einf = e- + e+, with E = einf ^ e0 = e+ ^ e-.  Geometric
objects are blades: outer products of points (point pair, circle, sphere),
flats obtained by wedging with einf (line, plane, flat point), the whole
space as the pseudoscalar, and grade-1 inner-product-null-space spheres
sigma = P(center) - (1/2) r^2 einf with sigma^2 = r^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import tolerance
from .algebra import Multivector, algebra
from .errors import (
    DegenerateError,
    DomainError,
    FlatObjectError,
    MetricError,
    NotABladeError,
    NotAPointError,
    PointAtInfinityError,
    UnknownObjectError,
)

ALG = algebra(4, 1)

e1 = ALG.basis_vector(0)
e2 = ALG.basis_vector(1)
e3 = ALG.basis_vector(2)
e_plus = ALG.basis_vector(3)
e_minus = ALG.basis_vector(4)

e0 = 0.5 * (e_minus - e_plus)
einf = e_minus + e_plus
E = einf ^ e0
I3 = e1 ^ e2 ^ e3
I5 = ALG.pseudoscalar()

# Null-basis generator order (e1, e2, e3, e0, einf) encoded on bits 0..4;
# PM_FROM_NULL columns hold each null blade's +/- basis expansion and the
# inverse is exact (all entries are quarter-integers).
_NULL_GENS = (e1, e2, e3, e0, einf)
_E0_BIT, _EINF_BIT = 3, 4


def _build_null_matrix() -> np.ndarray:
    mat = np.zeros((ALG.dim, ALG.dim))
    for bits in range(ALG.dim):
        acc = ALG.scalar(1.0)
        for k in range(5):
            if bits >> k & 1:
                acc = acc ^ _NULL_GENS[k]
        mat[:, bits] = acc.coeffs
    return mat


PM_FROM_NULL = _build_null_matrix()
NULL_FROM_PM = np.linalg.inv(PM_FROM_NULL)

KINDS = ("point", "point_pair", "circle", "sphere", "flat_point", "line", "plane", "space")


def to_null_coeffs(mv: Multivector) -> np.ndarray:
    """Coefficients over blades of (e1, e2, e3, e0, einf), bits in that order."""
    return NULL_FROM_PM @ mv.coeffs


def from_null_coeffs(coeffs) -> Multivector:
    return ALG.mv(PM_FROM_NULL @ np.asarray(coeffs, dtype=float))


def as_vec3(p) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if arr.shape != (3,):
        raise ValueError("expected a 3-component Euclidean vector")
    return arr


def euclid_vector(p) -> Multivector:
    arr = as_vec3(p)
    return arr[0] * e1 + arr[1] * e2 + arr[2] * e3


def euclid_bivector(m) -> Multivector:
    """Euclidean bivector from components (m12, m13, m23)."""
    m12, m13, m23 = (float(v) for v in m)
    return m12 * (e1 ^ e2) + m13 * (e1 ^ e3) + m23 * (e2 ^ e3)


@dataclass(frozen=True)
class ConformalObject:
    """A classified blade: kind tag, the blade itself, and extracted params."""

    kind: str
    mv: Multivector
    params: dict = field(default_factory=dict)

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"<{self.kind} {inner}>"


# -- points -------------------------------------------------------------------


def embed_point(p) -> Multivector:
    """P = p + (1/2) p^2 einf + e0."""
    arr = as_vec3(p)
    return euclid_vector(arr) + (0.5 * float(arr @ arr)) * einf + e0


def _e0_coefficient(mv: Multivector) -> float:
    # e0 = (e- - e+)/2, so the e0 coordinate is coeff(e-) - coeff(e+).
    return float(mv.coeffs[0b10000] - mv.coeffs[0b01000])


def _einf_coefficient(mv: Multivector) -> float:
    return float(0.5 * (mv.coeffs[0b10000] + mv.coeffs[0b01000]))


def extract_point(P: Multivector) -> np.ndarray:
    """Euclidean location of a conformal point, any homogeneous scale."""
    gs = P.grades()
    if gs and gs != frozenset({1}):
        raise NotAPointError(f"not a grade-1 vector (grades {sorted(gs)})")
    scale = P.max_abs()
    if scale == 0.0:
        raise NotAPointError("zero multivector is not a point")
    sq = (P * P).scalar_part()
    if abs(sq) > tolerance.threshold(scale * scale) * 10.0:
        raise NotAPointError("vector is not null; not a conformal point")
    c0 = _e0_coefficient(P)
    if abs(c0) <= tolerance.threshold(scale):
        raise PointAtInfinityError("no finite location: e0 coefficient vanishes")
    Pn = P / c0
    return np.array([Pn.coeffs[0b001], Pn.coeffs[0b010], Pn.coeffs[0b100]])


def point_distance(P1: Multivector, P2: Multivector) -> float:
    """sqrt(-2 <P1 P2>_0) for normalized conformal points."""
    inner = (P1 | P2).scalar_part()
    scale = max(1.0, P1.max_abs() * P2.max_abs())
    if inner > tolerance.threshold(scale):
        raise MetricError(f"positive point inner product {inner}; not normalized points")
    return math.sqrt(max(0.0, -2.0 * inner))


# -- object constructors ------------------------------------------------------


def _check_distinct(points: list[Multivector]) -> None:
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            scale = max(1.0, points[i].max_abs(), points[j].max_abs())
            if (points[i] - points[j]).is_zero(scale=scale):
                raise DegenerateError("coincident points")


def _wedge_points(points: list[Multivector], with_inf: bool = False) -> Multivector:
    acc = points[0]
    scale = points[0].max_abs()
    for P in points[1:]:
        acc = acc ^ P
        scale = scale * P.max_abs()
    if with_inf:
        acc = acc ^ einf
        scale = scale * 2.0
    if acc.is_zero(scale=max(1.0, scale)):
        raise DegenerateError("wedge of construction points vanishes")
    return acc


def make_point_pair(P1: Multivector, P2: Multivector) -> ConformalObject:
    _check_distinct([P1, P2])
    return classify(_wedge_points([P1, P2]))


def make_circle(P1: Multivector, P2: Multivector, P3: Multivector) -> ConformalObject:
    _check_distinct([P1, P2, P3])
    return classify(_wedge_points([P1, P2, P3]))


def make_sphere_opns(P1, P2, P3, P4) -> ConformalObject:
    _check_distinct([P1, P2, P3, P4])
    return classify(_wedge_points([P1, P2, P3, P4]))


def make_line(P1: Multivector, P2: Multivector) -> ConformalObject:
    _check_distinct([P1, P2])
    return classify(_wedge_points([P1, P2], with_inf=True))


def make_plane_opns(P1, P2, P3) -> ConformalObject:
    _check_distinct([P1, P2, P3])
    return classify(_wedge_points([P1, P2, P3], with_inf=True))


def make_flat_point(P: Multivector) -> ConformalObject:
    return classify(_wedge_points([P], with_inf=True))


def whole_space() -> ConformalObject:
    return ConformalObject("space", I5, {})


def sphere_ipns(center, r: float) -> ConformalObject:
    """sigma = P(center) - (1/2) r^2 einf; sigma^2 = r^2; r = 0 gives the point."""
    if r < 0:
        raise DomainError(f"negative radius {r}")
    sigma = embed_point(center) - (0.5 * r * r) * einf
    return classify(sigma)



def _clean_vec(arr) -> tuple:
    # +0.0 turns negative zeros into plain zeros for display and JSON
    return tuple(float(v) + 0.0 for v in arr)


def _clean_num(x) -> float:
    return float(x) + 0.0


# -- classification -----------------------------------------------------------


def _dominant_grade(mv: Multivector) -> int:
    gs = mv.grades()
    if not gs:
        raise UnknownObjectError("zero multivector")
    if len(gs) > 1:
        raise NotABladeError(f"grade-inhomogeneous multivector (grades {sorted(gs)})")
    m = mv * ~mv
    off = m - m.grade(0)
    if not off.is_zero(scale=max(abs(m.scalar_part()), mv.max_abs() ** 2)):
        raise NotABladeError("mv * ~mv is not scalar; not a blade")
    return next(iter(gs))


def _is_flat(mv: Multivector) -> bool:
    w = mv ^ einf
    return w.is_zero(scale=max(1.0, 2.0 * mv.max_abs()))


# Sign fixing r^2 = sign * <A A>_0 / <(einf | A)^2>_0 per grade; verified
# against brute-force circumcenter/circumradius solves in the test suite.
_ROUND_SIGN = {1: 1.0, 2: 1.0, 3: -1.0, 4: 1.0}


def _round_center_radius(mv: Multivector, grade: int) -> tuple[np.ndarray, float]:
    center_raw = (mv * einf * mv).grade(1)
    center = extract_point(center_raw)
    top = (mv * mv).scalar_part()
    carrier = einf | mv
    bot = (carrier * carrier).scalar_part()
    if abs(bot) <= tolerance.threshold(mv.max_abs() ** 2):
        raise DegenerateError("round has no finite carrier; cannot extract radius")
    r2 = _ROUND_SIGN[grade] * top / bot
    return center, r2


def _radius_sign_label(r2: float, scale: float) -> str:
    if abs(r2) <= tolerance.threshold(scale) * 10.0:
        return "degenerate"
    return "real" if r2 > 0 else "imaginary"


def _pair_endpoints(mv: Multivector) -> tuple[np.ndarray, np.ndarray]:
    """Endpoints of a real point pair via the idempotent split (1 +- F)/2."""
    beta = math.sqrt((mv * mv).scalar_part())
    F = mv / beta
    t = einf | mv
    plus = 0.5 * (ALG.scalar(1.0) + F) * t
    minus = 0.5 * (ALG.scalar(1.0) - F) * t
    return extract_point(minus.grade(1)), extract_point(plus.grade(1))


def _canonical_direction(d_raw: np.ndarray) -> tuple[np.ndarray, float]:
    """Unit direction with a deterministic overall sign; returns (d, alpha)."""
    norm = float(np.linalg.norm(d_raw))
    if norm == 0.0:
        raise DegenerateError("vanishing direction")
    first = next((v for v in d_raw if abs(v) > tolerance.threshold(norm)), norm)
    alpha = norm if first >= 0 else -norm
    return d_raw / alpha, alpha


def _line_params(mv: Multivector) -> dict:
    nc = to_null_coeffs(mv)
    inf_bit = 1 << _EINF_BIT
    o_bit = 1 << _E0_BIT
    d_raw = np.array([nc[(1 << k) | o_bit | inf_bit] for k in range(3)])
    m_raw = np.array([nc[0b011 | inf_bit], nc[0b101 | inf_bit], nc[0b110 | inf_bit]])
    d, alpha = _canonical_direction(d_raw)
    m = m_raw / alpha
    return {"direction": _clean_vec(d), "moment": _clean_vec(m)}


def _plane_params_from_ipns(vec: Multivector) -> dict:
    nc = to_null_coeffs(vec)
    n_raw = nc[[1, 2, 4]]
    dist_raw = float(nc[1 << _EINF_BIT])
    norm = float(np.linalg.norm(n_raw))
    if norm == 0.0:
        raise DegenerateError("plane with zero normal")
    alpha = norm
    if dist_raw < -tolerance.threshold(norm) * 10.0:
        alpha = -norm
    elif abs(dist_raw) <= tolerance.threshold(norm) * 10.0:
        first = next((v for v in n_raw if abs(v) > tolerance.threshold(norm)), norm)
        if first < 0:
            alpha = -norm
    return {"normal": _clean_vec(n_raw / alpha), "distance": _clean_num(dist_raw / alpha)}


def _flat_point_params(mv: Multivector) -> dict:
    nc = to_null_coeffs(mv)
    inf_bit = 1 << _EINF_BIT
    o_bit = 1 << _E0_BIT
    w = nc[o_bit | inf_bit]
    if abs(w) <= tolerance.threshold(mv.max_abs()):
        raise UnknownObjectError("flat point at infinity")
    loc = np.array([nc[(1 << k) | inf_bit] for k in range(3)]) / w
    return {"location": _clean_vec(loc)}


def classify(mv: Multivector) -> ConformalObject:
    """Decision tree over the dominant grade; grades 2..4 are read as outer
    product null space objects, grade 1 as inner product null space."""
    g = _dominant_grade(mv)
    if g == 0:
        raise UnknownObjectError("scalars are not conformal objects")
    if g == 5:
        return ConformalObject("space", mv, {})

    if g == 1:
        c0 = _e0_coefficient(mv)
        if abs(c0) <= tolerance.threshold(mv.max_abs()):
            nc = to_null_coeffs(mv)
            if np.max(np.abs(nc[[1, 2, 4]])) <= tolerance.threshold(mv.max_abs()):
                raise UnknownObjectError("pure einf direction (point at infinity)")
            return ConformalObject("plane", mv, {**_plane_params_from_ipns(mv), "form": "ipns"})
        center, r2 = _round_center_radius(mv, 1)
        label = _radius_sign_label(r2, 1.0 + float(center @ center))
        if label == "degenerate":
            return ConformalObject("point", mv, {"location": _clean_vec(center)})
        return ConformalObject(
            "sphere", mv, {"center": _clean_vec(center), "radius2": _clean_num(r2), "sign": label, "form": "ipns"}
        )

    flat = _is_flat(mv)
    if g == 2:
        if flat:
            return ConformalObject("flat_point", mv, _flat_point_params(mv))
        center, r2 = _round_center_radius(mv, 2)
        label = _radius_sign_label(r2, 1.0 + float(center @ center))
        params = {"center": _clean_vec(center), "radius2": _clean_num(r2), "sign": label}
        if label == "real":
            a, b = _pair_endpoints(mv)
            params["points"] = (_clean_vec(a), _clean_vec(b))
        return ConformalObject("point_pair", mv, params)
    if g == 3:
        if flat:
            return ConformalObject("line", mv, _line_params(mv))
        center, r2 = _round_center_radius(mv, 3)
        label = _radius_sign_label(r2, 1.0 + float(center @ center))
        params = {"center": _clean_vec(center), "radius2": _clean_num(r2), "sign": label}
        carrier = (mv ^ einf).dual()
        nc = to_null_coeffs(carrier.grade(1))
        n_raw = nc[[1, 2, 4]]
        norm = float(np.linalg.norm(n_raw))
        if norm > tolerance.threshold(mv.max_abs()):
            d, _ = _canonical_direction(n_raw)
            params["normal"] = _clean_vec(d)
        return ConformalObject("circle", mv, params)
    if g == 4:
        if flat:
            dual_vec = mv.dual().grade(1)
            return ConformalObject("plane", mv, {**_plane_params_from_ipns(dual_vec), "form": "opns"})
        center, r2 = _round_center_radius(mv, 4)
        label = _radius_sign_label(r2, 1.0 + float(center @ center))
        return ConformalObject(
            "sphere", mv, {"center": _clean_vec(center), "radius2": _clean_num(r2), "sign": label, "form": "opns"}
        )
    raise UnknownObjectError(f"grade {g} does not match a supported object")


def round_params(mv: Multivector) -> dict:
    """Center and signed squared radius of a round blade (grades 1..4)."""
    g = _dominant_grade(mv)
    if g not in _ROUND_SIGN:
        raise UnknownObjectError(f"grade {g} is not a round object")
    if g > 1 and _is_flat(mv):
        raise FlatObjectError("flat object has no center/radius")
    if g == 1 and abs(_e0_coefficient(mv)) <= tolerance.threshold(mv.max_abs()):
        raise FlatObjectError("grade-1 flat (plane) has no center/radius")
    center, r2 = _round_center_radius(mv, g)
    return {
        "center": _clean_vec(center),
        "radius2": _clean_num(r2),
        "sign": _radius_sign_label(r2, 1.0 + float(center @ center)),
    }
