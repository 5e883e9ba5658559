"""A trainable geometric neuron: a normalized versor sandwich plus bias.

The neuron holds a weight multivector W of fixed parity, a bias Theta,
and computes

    y(x) = sigma * (~W x' W) / <W ~W>_0 + Theta

In twisted-adjoint mode x' is the grade involution of x when W is odd
(and sigma = 1), which makes an exact versor weight reproduce the versor
action on any multivector. In paper-literal mode x' = x and sigma is
the global sign (-1)^parity. Training minimizes the mean squared error
over raw output coefficients plus a penalty that pushes W ~W toward a
pure scalar, under plain gradient descent with a parity projection of W
after every step. The normalization <W ~W>_0 must stay away from zero;
a null weight (the degenerate point mirror) raises SingularWeightError.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import tolerance
from .algebra import Multivector
from .conformal import ALG, embed_point
from .errors import DivergenceError, SingularWeightError
from .versor import CONVENTIONS, Versor, apply

PARITIES = ("even", "odd")

_SIGN = ALG.sign_table
_XOR = ALG.xor_table
_REV = ALG.reverse_signs
_INV = ALG.involute_signs
_KAPPA = ALG.rev_norm_signs
_EVEN_MASK = (ALG.grades % 2 == 0).astype(float)
_ODD_MASK = 1.0 - _EVEN_MASK


@dataclass
class GeometricNeuron:
    w: np.ndarray
    theta: np.ndarray
    parity: str
    mode: str = "twisted-adjoint"

    def weight(self) -> Multivector:
        return ALG.mv(self.w.copy())

    def bias(self) -> Multivector:
        return ALG.mv(self.theta.copy())


@dataclass(frozen=True)
class Sample:
    x: Multivector
    target: Multivector


@dataclass
class TrainConfig:
    lr: float = 0.015
    epochs: int = 5000
    tolerance: float = 1e-10
    penalty: float = 0.1
    divergence_limit: float = 1e12


def parity_mask(parity: str) -> np.ndarray:
    if parity not in PARITIES:
        raise ValueError(f"parity must be one of {PARITIES}, got {parity!r}")
    return _EVEN_MASK if parity == "even" else _ODD_MASK


def new_neuron(parity: str, seed: int, mode: str = "twisted-adjoint") -> GeometricNeuron:
    """Near-identity start: W = 1 (even) or e1 (odd) plus small parity noise."""
    mask = parity_mask(parity)
    if mode not in CONVENTIONS:
        raise ValueError(f"mode must be one of {CONVENTIONS}, got {mode!r}")
    rng = np.random.default_rng(seed)
    w = rng.normal(0.0, 0.01, ALG.dim) * mask
    w[0 if parity == "even" else 0b00001] += 1.0
    return GeometricNeuron(w=w, theta=np.zeros(ALG.dim), parity=parity, mode=mode)


def _norm_scalar(w: np.ndarray) -> float:
    q = float(_KAPPA @ (w * w))
    scale = float(np.max(np.abs(w))) ** 2
    if abs(q) <= tolerance.threshold(max(1.0, scale)):
        raise SingularWeightError(f"<W ~W>_0 = {q} is too close to zero")
    return q


def _sigma(neuron: GeometricNeuron) -> float:
    if neuron.mode == "paper-literal" and neuron.parity == "odd":
        return -1.0
    return 1.0


def _effective_inputs(neuron: GeometricNeuron, X: np.ndarray) -> np.ndarray:
    if neuron.mode == "twisted-adjoint" and neuron.parity == "odd":
        return X * _INV
    return X


def _batch_forward(neuron: GeometricNeuron, X: np.ndarray) -> tuple[np.ndarray, float]:
    q = _norm_scalar(neuron.w)
    wt = _REV * neuron.w
    kernel = ALG.left_matrix(wt) @ ALG.right_matrix(neuron.w)
    Y = (_sigma(neuron) / q) * (_effective_inputs(neuron, X) @ kernel.T) + neuron.theta
    return Y, q


def _stack(samples) -> tuple[np.ndarray, np.ndarray]:
    if not samples:
        raise ValueError("need at least one sample")
    X = np.stack([s.x.coeffs for s in samples])
    T = np.stack([s.target.coeffs for s in samples])
    return X, T


def forward(neuron: GeometricNeuron, x: Multivector) -> Multivector:
    Y, _ = _batch_forward(neuron, x.coeffs[None, :])
    return ALG.mv(Y[0])


def loss(neuron: GeometricNeuron, samples) -> float:
    """Mean over samples of the summed squared coefficient error."""
    X, T = _stack(samples)
    Y, _ = _batch_forward(neuron, X)
    return float(np.mean(np.sum((Y - T) ** 2, axis=1)))


def _weight_gram(w: np.ndarray) -> np.ndarray:
    # coefficients of W ~W; self-reverse, so only grades 0, 1, 4, 5 survive
    return ALG.left_matrix(w) @ (_REV * w)


def penalty_value(w: np.ndarray) -> float:
    m = _weight_gram(w)
    return float(np.sum(m[1:] ** 2))


def _objective(neuron: GeometricNeuron, X: np.ndarray, T: np.ndarray, penalty: float) -> float:
    Y, _ = _batch_forward(neuron, X)
    val = float(np.mean(np.sum((Y - T) ** 2, axis=1)))
    if penalty:
        val += penalty * penalty_value(neuron.w)
    return val


def gradient(neuron, samples, penalty: float = 0.1, method: str = "analytic"):
    """Gradient of data loss + penalty with respect to (W, Theta).

    The analytic path differentiates the sandwich through the left/right
    multiplication operators; 'fd' recomputes the same objective under
    central differences and is the independent check."""
    if method == "fd":
        return _fd_gradient(neuron, samples, penalty)
    if method != "analytic":
        raise ValueError(f"method must be 'analytic' or 'fd', got {method!r}")

    X, T = _stack(samples)
    n = X.shape[0]
    Xeff = _effective_inputs(neuron, X)
    sigma = _sigma(neuron)
    Y, q = _batch_forward(neuron, X)
    R = Y - T

    grad_theta = 2.0 * R.mean(axis=0)

    wt = _REV * neuron.w
    U1 = Xeff @ ALG.right_matrix(neuron.w).T  # rows: x' W
    U2 = Xeff @ ALG.left_matrix(wt).T  # rows: ~W x'
    G = R[:, _XOR]  # G[n, i, j] = r_n[i xor j]
    t_right = np.einsum("nj,ij,nij->i", U1, _SIGN, G)
    t_left = np.einsum("ni,ij,nij->j", U2, _SIGN, G)

    B = (Y - neuron.theta) * (q / sigma)  # numerator ~W x' W per sample
    r_dot_b = float(np.einsum("nk,nk->", R, B))

    grad_w = (2.0 * sigma / (n * q)) * (_REV * t_right + t_left)
    grad_w -= (4.0 * sigma * r_dot_b / (n * q * q)) * (_KAPPA * neuron.w)

    if penalty:
        m = _weight_gram(neuron.w)
        m[0] = 0.0
        grad_w += (4.0 * penalty) * (ALG.right_matrix(wt).T @ m)
    return grad_w, grad_theta


def _fd_gradient(neuron, samples, penalty: float):
    X, T = _stack(samples)

    def J() -> float:
        return _objective(neuron, X, T, penalty)

    grad_w = np.zeros(ALG.dim)
    grad_theta = np.zeros(ALG.dim)
    for vec, out in ((neuron.w, grad_w), (neuron.theta, grad_theta)):
        for i in range(ALG.dim):
            h = 1e-6 * (1.0 + abs(vec[i]))
            keep = vec[i]
            vec[i] = keep + h
            hi = J()
            vec[i] = keep - h
            lo = J()
            vec[i] = keep
            out[i] = (hi - lo) / (2.0 * h)
    return grad_w, grad_theta


def train(neuron: GeometricNeuron, samples, cfg: TrainConfig) -> list[float]:
    """Plain gradient descent; returns the data-loss history (the first
    entry is the starting loss, then one entry per step).

    W is projected back onto its parity after every step; Theta is free.
    Raises DivergenceError (carrying the history) if the loss blows up."""
    X, T = _stack(samples)
    mask = parity_mask(neuron.parity)

    def data_loss() -> float:
        Y, _ = _batch_forward(neuron, X)
        return float(np.mean(np.sum((Y - T) ** 2, axis=1)))

    with np.errstate(over="ignore", invalid="ignore"):
        data = data_loss()
        history = [data]
        for _ in range(cfg.epochs):
            if data <= cfg.tolerance:
                break
            grad_w, grad_theta = gradient(neuron, samples, penalty=cfg.penalty)
            neuron.w = (neuron.w - cfg.lr * grad_w) * mask
            neuron.theta = neuron.theta - cfg.lr * grad_theta
            peak = float(np.max(np.abs(neuron.w)))
            if not np.isfinite(peak) or peak > cfg.divergence_limit:
                raise DivergenceError(f"weight norm diverged to {peak}", history=history)
            data = data_loss()
            history.append(data)
            if not np.isfinite(data) or data > cfg.divergence_limit:
                raise DivergenceError(f"loss diverged to {data}", history=history)
    return history


def from_versor(v: Versor, mode: str = "twisted-adjoint") -> GeometricNeuron:
    """Neuron whose weight is the versor itself; reproduces its action exactly."""
    return GeometricNeuron(w=v.mv.coeffs.copy(), theta=np.zeros(ALG.dim), parity=v.parity, mode=mode)


def generate_dataset(
    v: Versor,
    n: int,
    seed: int,
    noise: float = 0.0,
    convention: str = "twisted-adjoint",
    normalize_point_targets: bool = False,
):
    """Samples (P(p), v acting on P(p)) with p uniform in [-2, 2]^3.

    Targets keep the raw sandwich coefficients so that exact versor
    weights reach exactly zero loss; optional normalization rescales each
    target to unit e0 coefficient, and noise perturbs target coefficients."""
    rng = np.random.default_rng(seed)
    mode = "motion" if v.parity == "even" else "reflection"
    out = []
    for _ in range(n):
        x = embed_point(rng.uniform(-2.0, 2.0, size=3))
        y = apply(v, x, mode, convention=convention)
        if normalize_point_targets:
            c0 = float(y.coeffs[0b10000] - y.coeffs[0b01000])
            y = y / c0
        if noise:
            y = ALG.mv(y.coeffs + rng.normal(0.0, noise, ALG.dim))
        out.append(Sample(x=x, target=y))
    return out
