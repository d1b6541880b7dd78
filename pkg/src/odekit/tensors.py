"""Pseudotensor containers and index gymnastics on the plane."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .rational import ONE, ZERO, RatExpr


def index_set(rank):
    return list(itertools.product((1, 2), repeat=rank))


@dataclass(frozen=True)
class PseudoTensor:
    """Components of a field of type (r, s) and weight m.

    Keys of ``components`` are tuples of r upper then s lower indices,
    each in {1, 2}.
    """

    r: int
    s: int
    weight: int
    components: dict = field(compare=False)
    name: str = ""

    def __post_init__(self):
        want = set(index_set(self.r + self.s))
        if set(self.components) != want:
            raise ValueError(f"{self.name or 'tensor'}: expected {len(want)} components")

    def __getitem__(self, idx):
        if not isinstance(idx, tuple):
            idx = (idx,)
        return self.components[idx]

    @property
    def tensor_type(self):
        return (self.r, self.s)

    def map(self, fn, weight=None, name=None):
        return PseudoTensor(
            self.r, self.s, self.weight if weight is None else weight,
            {k: fn(v) for k, v in self.components.items()}, name or self.name,
        )

    def is_zero(self):
        return all(v.is_zero() for v in self.components.values())

    def values(self):
        return [self.components[k] for k in index_set(self.r + self.s)]


def scalar(value: RatExpr, weight: int, name="") -> PseudoTensor:
    return PseudoTensor(0, 0, weight, {(): value}, name)


def covector(c1, c2, weight, name=""):
    return PseudoTensor(0, 1, weight, {(1,): c1, (2,): c2}, name)


def vector(c1, c2, weight, name=""):
    return PseudoTensor(1, 0, weight, {(1,): c1, (2,): c2}, name)


_D = {(1, 1): ZERO, (1, 2): ONE, (2, 1): -ONE, (2, 2): ZERO}
D_LOWER = PseudoTensor(0, 2, -1, dict(_D), "d_ij")
D_UPPER = PseudoTensor(2, 0, 1, dict(_D), "d^ij")


def raise_index(cov: PseudoTensor, name="") -> PseudoTensor:
    """v^i = d^{ik} v_k; the weight grows by one."""
    if cov.tensor_type != (0, 1):
        raise ValueError("raise_index expects a covector")
    return vector(cov[2], -cov[1], cov.weight + 1, name or cov.name)


def lower_index(vec: PseudoTensor, name="") -> PseudoTensor:
    """v_i = d_{ik} v^k; the weight drops by one."""
    if vec.tensor_type != (1, 0):
        raise ValueError("lower_index expects a vector")
    return covector(vec[2], -vec[1], vec.weight - 1, name or vec.name)


def pair(u: PseudoTensor, v: PseudoTensor) -> RatExpr:
    """d_ij u^i v^j for two vectors."""
    return u[1] * v[2] - u[2] * v[1]


def contract(cov: PseudoTensor, vec: PseudoTensor) -> RatExpr:
    return cov[1] * vec[1] + cov[2] * vec[2]
