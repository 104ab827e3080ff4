"""Reverse-mode automatic differentiation over dense float64 matrices.

Everything on the tape is a 2-D float64 array (scalars are 1x1 matrices).
Operations build an implicit computation graph; ``gradients`` walks that
graph once in reverse topological order and accumulates adjoints into the
requested leaves.  The op set is deliberately small: exactly what the
encoder, the losses and the attribution methods need.

Elementwise binary ops support numpy broadcasting; the backward pass sums
the adjoint over broadcast axes so shapes always round-trip.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

Array = np.ndarray

# logits are clipped so that sigmoid stays strictly inside (0,1) in float64:
# sigmoid(35) = 1 - 6.3e-16, still below the largest double under 1.0
_SIGMOID_CLIP = 35.0


def _as_matrix(data) -> Array:
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2:
        raise ValueError(f"expected a scalar or 2-D array, got ndim={arr.ndim}")
    return arr


class Tensor:
    """A float64 matrix tracked on the computation graph."""

    __slots__ = ("data", "grad", "_parents", "_backward")

    def __init__(self, data, _parents: tuple = ()):
        self.data: Array = _as_matrix(data)
        self.grad: Array | None = None
        self._parents: tuple = _parents
        self._backward: Callable[[Array], None] | None = None

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def item(self) -> float:
        if self.data.size != 1:
            raise ValueError(f"item() needs a 1x1 tensor, got shape {self.data.shape}")
        return float(self.data[0, 0])

    def __matmul__(self, other: "Tensor") -> "Tensor":
        return matmul(self, other)

    def __add__(self, other: "Tensor") -> "Tensor":
        return add(self, other)

    def __sub__(self, other: "Tensor") -> "Tensor":
        return subtract(self, other)

    def __mul__(self, other: "Tensor") -> "Tensor":
        return multiply(self, other)

    def __neg__(self) -> "Tensor":
        return scale(self, -1.0)

    def __repr__(self) -> str:
        return f"Tensor(shape={self.data.shape})"


def tensor(data) -> Tensor:
    """Wrap an array as a graph leaf."""
    return Tensor(data)


def custom(data, parents: Sequence[Tensor], backward: Callable[[Array], None]) -> Tensor:
    """Build a node with a caller-supplied backward closure.

    ``backward`` receives the adjoint of this node and must accumulate into
    the parents itself via ``accumulate``.
    """
    out = Tensor(data, tuple(parents))
    out._backward = backward
    return out


def accumulate(t: Tensor, g: Array) -> None:
    """Add an adjoint contribution to a node."""
    t.grad = g if t.grad is None else t.grad + g


def _unbroadcast(g: Array, shape: tuple[int, int]) -> Array:
    if g.shape == shape:
        return g
    out = g
    for axis in (0, 1):
        if shape[axis] == 1 and out.shape[axis] != 1:
            out = out.sum(axis=axis, keepdims=True)
    return out


def matmul(a: Tensor, b: Tensor) -> Tensor:
    if a.cols != b.rows:
        raise ValueError(f"matmul shape mismatch: {a.shape} @ {b.shape}")
    out = Tensor(a.data @ b.data, (a, b))

    def backward(g: Array) -> None:
        accumulate(a, g @ b.data.T)
        accumulate(b, a.data.T @ g)

    out._backward = backward
    return out


def add(a: Tensor, b: Tensor) -> Tensor:
    out = Tensor(a.data + b.data, (a, b))

    def backward(g: Array) -> None:
        accumulate(a, _unbroadcast(g, a.shape))
        accumulate(b, _unbroadcast(g, b.shape))

    out._backward = backward
    return out


def subtract(a: Tensor, b: Tensor) -> Tensor:
    out = Tensor(a.data - b.data, (a, b))

    def backward(g: Array) -> None:
        accumulate(a, _unbroadcast(g, a.shape))
        accumulate(b, _unbroadcast(-g, b.shape))

    out._backward = backward
    return out


def multiply(a: Tensor, b: Tensor) -> Tensor:
    """Elementwise (Hadamard) product with broadcasting."""
    out = Tensor(a.data * b.data, (a, b))

    def backward(g: Array) -> None:
        accumulate(a, _unbroadcast(g * b.data, a.shape))
        accumulate(b, _unbroadcast(g * a.data, b.shape))

    out._backward = backward
    return out


def scale(a: Tensor, s: float) -> Tensor:
    """Multiply by a python scalar constant."""
    s = float(s)
    out = Tensor(a.data * s, (a,))

    def backward(g: Array) -> None:
        accumulate(a, g * s)

    out._backward = backward
    return out


def shift(a: Tensor, c: float) -> Tensor:
    """Add a python scalar constant."""
    out = Tensor(a.data + float(c), (a,))

    def backward(g: Array) -> None:
        accumulate(a, g)

    out._backward = backward
    return out


def transpose(a: Tensor) -> Tensor:
    out = Tensor(a.data.T, (a,))

    def backward(g: Array) -> None:
        accumulate(a, g.T)

    out._backward = backward
    return out


def relu(a: Tensor) -> Tensor:
    mask = a.data > 0.0
    out = Tensor(np.where(mask, a.data, 0.0), (a,))

    def backward(g: Array) -> None:
        accumulate(a, g * mask)

    out._backward = backward
    return out


def stable_sigmoid(x: Array) -> Array:
    """Numerically safe sigmoid on raw arrays; the tape op uses the same form."""
    z = np.clip(x, -_SIGMOID_CLIP, _SIGMOID_CLIP)
    return 1.0 / (1.0 + np.exp(-z))


def sigmoid(a: Tensor) -> Tensor:
    val = stable_sigmoid(a.data)
    out = Tensor(val, (a,))

    def backward(g: Array) -> None:
        accumulate(a, g * val * (1.0 - val))

    out._backward = backward
    return out


def exp(a: Tensor) -> Tensor:
    val = np.exp(a.data)
    out = Tensor(val, (a,))

    def backward(g: Array) -> None:
        accumulate(a, g * val)

    out._backward = backward
    return out


def log(a: Tensor) -> Tensor:
    out = Tensor(np.log(a.data), (a,))

    def backward(g: Array) -> None:
        accumulate(a, g / a.data)

    out._backward = backward
    return out


def clip(a: Tensor, lo: float, hi: float) -> Tensor:
    """Clamp values to [lo, hi]; gradient passes through the interior."""
    mask = (a.data >= lo) & (a.data <= hi)
    out = Tensor(np.clip(a.data, lo, hi), (a,))

    def backward(g: Array) -> None:
        accumulate(a, g * mask)

    out._backward = backward
    return out


def mean(a: Tensor) -> Tensor:
    """Mean over all entries, producing a 1x1 tensor."""
    size = a.data.size
    out = Tensor(np.array([[a.data.mean()]]), (a,))

    def backward(g: Array) -> None:
        accumulate(a, np.full(a.shape, g[0, 0] / size))

    out._backward = backward
    return out


def total(a: Tensor) -> Tensor:
    """Sum over all entries, producing a 1x1 tensor."""
    out = Tensor(np.array([[a.data.sum()]]), (a,))

    def backward(g: Array) -> None:
        accumulate(a, np.full(a.shape, g[0, 0]))

    out._backward = backward
    return out


def _reachable_topo(root: Tensor) -> list[Tensor]:
    # iterative post-order DFS: parents appear before their consumers
    order: list[Tensor] = []
    seen: set[int] = set()
    stack: list[tuple[Tensor, bool]] = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for parent in node._parents:
            if id(parent) not in seen:
                stack.append((parent, False))
    return order


def gradients(output: Tensor, wrt: Sequence[Tensor]) -> list[Array]:
    """Adjoints of a scalar output with respect to each tensor in ``wrt``.

    Raises ValueError if the output is not 1x1 or if any requested tensor
    is not part of the output's computation graph.
    """
    if output.data.size != 1:
        raise ValueError(f"gradient target must be scalar, got shape {output.shape}")
    order = _reachable_topo(output)
    in_graph = {id(t) for t in order}
    for t in wrt:
        if id(t) not in in_graph:
            raise ValueError("tensor is not part of this computation graph")
    for t in order:
        t.grad = None
    output.grad = np.ones((1, 1))
    for node in reversed(order):
        if node._backward is not None and node.grad is not None:
            node._backward(node.grad)
    return [t.grad if t.grad is not None else np.zeros(t.shape) for t in wrt]


def gradient(output: Tensor, wrt: Tensor) -> Array:
    """Adjoint of a scalar output with respect to a single tensor."""
    return gradients(output, [wrt])[0]
