"""Truncated formal characters in e^{-alpha_i}, e^{-delta}.

A :class:`CharSeries` stores integer coefficients keyed by
``(alpha_coeffs, delta_deg)``: the exponent of e^{alpha} and the delta-degree
d >= 0 of e^{-d delta}. Highest-weight prefactors such as e^{-rho} are kept as
a symbolic tag (an integer multiple of rho), never as lattice points.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from modvertex.kernels import series_mul2d
from modvertex.rootdata import FiniteLieData, sl2


class AffineWeight(NamedTuple):
    """beta = sum alpha[i] alpha_i + delta * delta."""

    alpha: tuple
    delta: int


def affine_positive_real_roots(data: FiniteLieData, depth: int) -> list:
    """Positive real roots of delta-degree <= depth, sorted by (delta, alpha)."""
    out = []
    for n in range(depth + 1):
        for beta in data.positive_roots:
            out.append(AffineWeight(tuple(beta), n))
            if n >= 1:
                out.append(AffineWeight(tuple(-x for x in beta), n))
    return sorted(out, key=lambda w: (w.delta, w.alpha))


@dataclass
class CharSeries:
    """Series in e^{alpha}, e^{-delta}, truncated at delta-degree ``depth``.

    ``alpha_bound``: if set, coefficients with some |alpha_i| above it are
    dropped (needed for infinite expansions such as 1/(1 - e^{-alpha})).
    ``rho_shift``: the symbolic prefactor e^{rho_shift * rho}.
    """

    terms: dict
    depth: int
    alpha_bound: int = None
    rho_shift: int = 0
    rank: int = 1
    _clean: bool = field(default=False, repr=False)

    def __post_init__(self):
        if not self._clean:
            self.terms = {k: int(c) for k, c in self.terms.items()
                          if c and 0 <= k[1] <= self.depth and self._inside(k[0])}
            self._clean = True

    def _inside(self, alpha) -> bool:
        return self.alpha_bound is None or all(abs(x) <= self.alpha_bound for x in alpha)

    @classmethod
    def one(cls, depth, rank=1, alpha_bound=None):
        return cls({((0,) * rank, 0): 1}, depth, alpha_bound, rank=rank)

    def coeff(self, alpha, delta) -> int:
        return self.terms.get((tuple(alpha), delta), 0)

    def at_depth(self, delta) -> dict:
        return {k[0]: c for k, c in sorted(self.terms.items()) if k[1] == delta}

    def _bound_with(self, other):
        bounds = [b for b in (self.alpha_bound, other.alpha_bound) if b is not None]
        return min(bounds) if bounds else None

    def __add__(self, other):
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t.get(k, 0) + c
        return CharSeries(t, min(self.depth, other.depth), self._bound_with(other),
                          self.rho_shift, self.rank)

    def __neg__(self):
        return CharSeries({k: -c for k, c in self.terms.items()}, self.depth, self.alpha_bound,
                          self.rho_shift, self.rank)

    def __sub__(self, other):
        return self + (-other)

    def max_alpha(self) -> int:
        return max((abs(x) for (a, _) in self.terms for x in a), default=0)

    def __mul__(self, other):
        depth = min(self.depth, other.depth)
        bound = self._bound_with(other)
        shift = self.rho_shift + other.rho_shift
        if self.rank == 1 and other.rank == 1:
            width = self.max_alpha() + other.max_alpha()
            if bound is not None:
                width = min(width, bound + max(self.max_alpha(), other.max_alpha()))
            prod = series_mul2d(self.grid(width), other.grid(width), depth)
            return CharSeries.from_grid(prod, depth, bound, shift)
        out: dict = {}
        for (a1, d1), c1 in self.terms.items():
            for (a2, d2), c2 in other.terms.items():
                if d1 + d2 > depth:
                    continue
                key = (tuple(x + y for x, y in zip(a1, a2)), d1 + d2)
                out[key] = out.get(key, 0) + c1 * c2
        return CharSeries(out, depth, bound, shift, self.rank)

    def grid(self, half_width: int) -> np.ndarray:
        g = np.zeros((self.depth + 1, 2 * half_width + 1), dtype=np.int64)
        for ((a,), d), c in self.terms.items():
            if abs(a) <= half_width:
                g[d, a + half_width] += c
        return g

    @classmethod
    def from_grid(cls, g, depth, alpha_bound=None, rho_shift=0):
        half = (g.shape[1] - 1) // 2
        terms = {}
        for d, j in zip(*np.nonzero(g)):
            if d <= depth:
                terms[((int(j) - half,), int(d))] = int(g[d, j])
        return cls(terms, depth, alpha_bound, rho_shift, 1)

    def restrict(self, alpha_min=None, alpha_max=None) -> "CharSeries":
        """Keep only terms whose alpha coefficients lie in [alpha_min, alpha_max]."""
        t = {k: c for k, c in self.terms.items()
             if (alpha_min is None or min(k[0]) >= alpha_min)
             and (alpha_max is None or max(k[0]) <= alpha_max)}
        return CharSeries(t, self.depth, self.alpha_bound, self.rho_shift, self.rank)

    def same_coefficients(self, other) -> bool:
        return self.terms == other.terms

    def __eq__(self, other):
        if not isinstance(other, CharSeries):
            return NotImplemented
        return (self.terms == other.terms and self.depth == other.depth
                and self.rho_shift == other.rho_shift)

    def to_json(self) -> list:
        return [{"alpha_coeffs": list(a), "delta_deg": d, "coeff": c}
                for (a, d), c in sorted(self.terms.items(), key=lambda t: (t[0][1], t[0][0]))]

    def dumps(self) -> str:
        return json.dumps({"depth": self.depth, "rho_shift": self.rho_shift,
                           "terms": self.to_json()})

    @classmethod
    def loads(cls, text: str) -> "CharSeries":
        d = json.loads(text)
        terms = {(tuple(t["alpha_coeffs"]), t["delta_deg"]): t["coeff"] for t in d["terms"]}
        rank = len(d["terms"][0]["alpha_coeffs"]) if d["terms"] else 1
        return cls(terms, d["depth"], rho_shift=d.get("rho_shift", 0), rank=rank)


def _exp_neg(beta: AffineWeight, k: int):
    """Key of e^{-k beta}."""
    return (tuple(-k * x for x in beta.alpha), k * beta.delta)


def _rank(data):
    return len(data.simple_roots)


def mathieu_product(p: int, depth: int, data: FiniteLieData = None) -> CharSeries:
    """prod over positive real beta of (1 + e^{-beta} + ... + e^{-(p-1) beta}), tagged e^{-rho}."""
    data = data or sl2()
    r = _rank(data)
    out = CharSeries.one(depth, r)
    for beta in affine_positive_real_roots(data, depth):
        fac = {_exp_neg(beta, k): 1 for k in range(p) if k * beta.delta <= depth}
        out = out * CharSeries(fac, depth, rank=r)
    out.rho_shift = -1
    return out


def verma_denominator(depth: int, alpha_bound: int = None, data: FiniteLieData = None) -> CharSeries:
    """prod 1/(1 - e^{-beta}) truncated to delta-degree <= depth and |alpha| <= alpha_bound."""
    data = data or sl2()
    r = _rank(data)
    bound = 4 * depth + 4 if alpha_bound is None else alpha_bound
    out = CharSeries.one(depth, r, bound)
    for beta in affine_positive_real_roots(data, depth):
        fac = {}
        k = 0
        while k * beta.delta <= depth:
            key = _exp_neg(beta, k)
            if max(abs(x) for x in key[0]) > bound:
                break
            fac[key] = 1
            k += 1
            if beta.delta == 0 and k > bound:
                break
        out = out * CharSeries(fac, depth, bound, rank=r)
    out.rho_shift = -1
    return out


def steinberg_factor(p: int, depth: int, data: FiniteLieData = None) -> CharSeries:
    """prod (1 - e^{-p beta}) over positive real beta, truncated."""
    data = data or sl2()
    r = _rank(data)
    out = CharSeries.one(depth, r)
    for beta in affine_positive_real_roots(data, depth):
        if p * beta.delta <= depth:
            z = ((0,) * r, 0)
            out = out * CharSeries({z: 1, _exp_neg(beta, p): -1}, depth, rank=r)
    return out


def denominator_product(depth: int, data: FiniteLieData = None) -> CharSeries:
    """prod (1 - e^{-beta}): the inverse of the Verma denominator, a finite product."""
    data = data or sl2()
    r = _rank(data)
    out = CharSeries.one(depth, r)
    for beta in affine_positive_real_roots(data, depth):
        out = out * CharSeries({((0,) * r, 0): 1, _exp_neg(beta, 1): -1}, depth, rank=r)
    return out


def fock_character(m, depth: int, alpha_bound: int = None, rho_shift: int = 0) -> CharSeries:
    """Tally basis monomials of delta-depth <= depth by (alpha-weight, depth).

    Modules with unbounded depth-0 generators (a*_0 without a cap) need
    ``alpha_bound``; their zero-mode powers are enumerated up to it.
    """
    rank = len(m.data.simple_roots)
    try:
        basis = m.basis_enumerate(depth)
    except ValueError:
        if alpha_bound is None:
            raise
        basis = m.basis_enumerate(depth, zero_mode_cap=alpha_bound + 1)
    terms: dict = {}
    for mono in basis:
        key = (tuple(m.weight(mono)), m.depth(mono))
        terms[key] = terms.get(key, 0) + 1
    return CharSeries(terms, depth, alpha_bound, rho_shift, rank)


def verify_series_identities(p: int, depth: int, data: FiniteLieData = None):
    """Exact truncated identities between the three product formulas.

    Returns a :class:`~modvertex.report.CheckReport`. Checked: (i) mathieu x
    prod(1 - e^{-beta}) = prod(1 - e^{-p beta}); (ii) mathieu = Verma
    denominator x Steinberg factor on the window alpha >= -(4N + 4), with the
    Verma series computed to the wider bound 4N + 4 + pN so no truncated term
    can reach that window; (iii) the Steinberg-weight character carries the
    same product with prefactor shifted by p rho.
    """
    from modvertex.report import CheckReport

    data = data or sl2()
    rep = CheckReport(f"series-identities(p={p},N={depth})")
    math = mathieu_product(p, depth, data)
    stein = steinberg_factor(p, depth, data)
    rep.checked += 1
    lhs = math * denominator_product(depth, data)
    if not lhs.same_coefficients(stein):
        rep.fail({"identity": "mathieu*denominator=steinberg",
                  "difference": (lhs - stein).to_json()})
    window = 4 * depth + 4
    verma = verma_denominator(depth, window + p * depth, data)
    rep.checked += 1
    prod = (verma * stein).restrict(alpha_min=-window)
    target = math.restrict(alpha_min=-window)
    if not prod.same_coefficients(target):
        rep.fail({"identity": "mathieu=verma*steinberg", "difference": (prod - target).to_json()})
    rep.checked += 1
    steinberg_char = CharSeries(dict(math.terms), depth, rho_shift=p - 1, rank=math.rank)
    if steinberg_char.rho_shift - math.rho_shift != p or not steinberg_char.same_coefficients(math):
        rep.fail({"identity": "e^{p rho} shift"})
    rep.details["window"] = window
    return rep
