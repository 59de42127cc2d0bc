"""Analytic test functions, uniform-grid sampling, and ground truth evaluation."""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass, field

import numpy as np

# f2 of the benchmark suite: 0.95 exp(-1024/9 (x-0.5)^2) + 0.38 exp(-256 (x-0.25)^2)
_F2_TERMS = (0.95, 1024.0 / 9.0, 0.5, 0.38, 256.0, 0.25)
# f4: exp(-25((x-.65)^2+(y-.65)^2)) + exp(-16((x-.35)^2+(y-.35)^2))
_F4_TERMS = (1.0, 25.0, 0.65, 0.65, 1.0, 16.0, 0.35, 0.35)

_KINDS = ("quadratic", "gaussian-mix-1d", "ring-cos-2d", "gaussian-mix-2d",
          "custom-expression")


@dataclass(frozen=True)
class FunctionSpec:
    """Analytic function selector: a kind tag plus kind-specific parameters.

    quadratic:        params (center,), f(x) = (x-center)^2
    gaussian-mix-1d:  params flat triples (b, a, c): sum b*exp(-a (x-c)^2)
    ring-cos-2d:      params (cx, cy, offset): cos(2pi((x-cx)^2+(y-cy)^2)) + offset
    gaussian-mix-2d:  params flat quads (b, a, cx, cy): sum b*exp(-a((x-cx)^2+(y-cy)^2))
    custom-expression: params empty, expression string carried separately
    """
    kind: str
    params: tuple = ()
    expression: str = ""

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown function kind {self.kind!r}")
        n = len(self.params)
        if self.kind == "quadratic" and n != 1:
            raise ValueError("quadratic takes exactly one parameter (center)")
        if self.kind == "gaussian-mix-1d" and (n == 0 or n % 3):
            raise ValueError("gaussian-mix-1d takes flat (b, a, c) triples")
        if self.kind == "ring-cos-2d" and n != 3:
            raise ValueError("ring-cos-2d takes (cx, cy, offset)")
        if self.kind == "gaussian-mix-2d" and (n == 0 or n % 4):
            raise ValueError("gaussian-mix-2d takes flat (b, a, cx, cy) quads")
        if self.kind == "custom-expression" and not self.expression:
            raise ValueError("custom-expression requires an expression string")

    @property
    def dims(self) -> int:
        if self.kind in ("quadratic", "gaussian-mix-1d"):
            return 1
        if self.kind in ("ring-cos-2d", "gaussian-mix-2d"):
            return 2
        return 2 if "y" in _expr_names(self.expression) else 1


def f1() -> FunctionSpec:
    return FunctionSpec("quadratic", (0.5,))


def f2() -> FunctionSpec:
    return FunctionSpec("gaussian-mix-1d", _F2_TERMS)


def f3() -> FunctionSpec:
    return FunctionSpec("ring-cos-2d", (0.5, 0.5, 1.0))


def f4() -> FunctionSpec:
    return FunctionSpec("gaussian-mix-2d", _F4_TERMS)


# -- restricted arithmetic expression grammar for the custom kind --

_ALLOWED_FUNCS = {"exp": np.exp, "cos": np.cos, "sin": np.sin}
_ALLOWED_NAMES = {"pi": math.pi, "e": math.e}
_ALLOWED_NODES = (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Call, ast.Name,
                  ast.Constant, ast.Load, ast.Add, ast.Sub, ast.Mult, ast.Div,
                  ast.Pow, ast.USub, ast.UAdd)


def _expr_names(expression: str) -> set:
    tree = ast.parse(expression.replace("^", "**"), mode="eval")
    return {n.id for n in ast.walk(tree) if isinstance(n, ast.Name)}


def _compile_expression(expression: str):
    tree = ast.parse(expression.replace("^", "**"), mode="eval")
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED_NODES):
            raise ValueError(f"expression uses unsupported syntax: {type(node).__name__}")
        if isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.func.id not in _ALLOWED_FUNCS:
                raise ValueError("only exp, cos, sin calls are allowed")
        if isinstance(node, ast.Name) and node.id not in (
                "x", "y", *_ALLOWED_NAMES, *_ALLOWED_FUNCS):
            raise ValueError(f"unknown symbol {node.id!r}")
    code = compile(tree, "<function-spec>", "eval")

    def evaluator(x, y=None):
        env = {**_ALLOWED_FUNCS, **_ALLOWED_NAMES, "x": x}
        if y is not None:
            env["y"] = y
        return eval(code, {"__builtins__": {}}, env)

    return evaluator


def evaluate(spec: FunctionSpec, x, y=None):
    """Analytic point evaluation; `x` (and `y` for 2D kinds) broadcast."""
    x = np.asarray(x, dtype=float)
    if spec.dims == 2:
        if y is None:
            raise ValueError(f"{spec.kind} needs both coordinates")
        y = np.asarray(y, dtype=float)
    if spec.kind == "quadratic":
        (c,) = spec.params
        return (x - c) ** 2
    if spec.kind == "gaussian-mix-1d":
        terms = np.array(spec.params).reshape(-1, 3)
        out = np.zeros_like(x)
        for b, a, c in terms:
            out = out + b * np.exp(-a * (x - c) ** 2)
        return out
    if spec.kind == "ring-cos-2d":
        cx, cy, offset = spec.params
        return np.cos(2 * np.pi * ((x - cx) ** 2 + (y - cy) ** 2)) + offset
    if spec.kind == "gaussian-mix-2d":
        terms = np.array(spec.params).reshape(-1, 4)
        out = np.zeros(np.broadcast(x, y).shape)
        for b, a, cx, cy in terms:
            out = out + b * np.exp(-a * ((x - cx) ** 2 + (y - cy) ** 2))
        return out
    fn = _compile_expression(spec.expression)
    return np.asarray(fn(x, y) if spec.dims == 2 else fn(x), dtype=float)


@dataclass(frozen=True)
class GridFunction:
    """Uniform-grid samples of f with the right endpoint excluded.

    1D: samples[j] = f(j L / N).  2D: samples[j1, j2] = f(j1 L1/N1, j2 L2/N2).
    """
    L: tuple
    N_per_dim: tuple
    samples: np.ndarray
    spec: FunctionSpec | None = field(default=None, compare=False)

    @property
    def dims(self) -> int:
        return len(self.N_per_dim)

    @property
    def A(self) -> float:
        """Normalization factor sqrt(sum of squared samples)."""
        return float(np.sqrt(np.sum(self.samples ** 2)))

    def grid(self):
        """Per-dimension coordinate arrays."""
        return tuple(np.arange(n) * l / n for n, l in zip(self.N_per_dim, self.L))


def sample(spec: FunctionSpec, L, N_per_dim) -> GridFunction:
    """Sample `spec` on the uniform grid x_j = j L / N (right endpoint excluded)."""
    if np.isscalar(N_per_dim):
        N_per_dim = (int(N_per_dim),) * spec.dims
    else:
        N_per_dim = tuple(int(n) for n in N_per_dim)
    if np.isscalar(L):
        L = (float(L),) * spec.dims
    else:
        L = tuple(float(l) for l in L)
    if len(N_per_dim) != spec.dims or len(L) != spec.dims:
        raise ValueError(f"{spec.kind} is {spec.dims}-dimensional")
    for n in N_per_dim:
        if n < 1 or n & (n - 1):
            raise ValueError(f"grid count {n} is not a power of two")
    for l in L:
        if l <= 0:
            raise ValueError("domain length must be positive")
    axes = [np.arange(n) * l / n for n, l in zip(N_per_dim, L)]
    if spec.dims == 1:
        values = evaluate(spec, axes[0])
    else:
        xg, yg = np.meshgrid(axes[0], axes[1], indexing="ij")
        values = evaluate(spec, xg, yg)
    return GridFunction(L, N_per_dim, np.asarray(values, dtype=float), spec)
