"""Sparse vectors in Fock-type modules and exact single-mode actions.

A vector is a ``dict`` mapping a monomial to a nonzero coefficient (``int``
residue or :class:`~modvertex.scalars.KPoly`). A monomial is a sorted tuple of
``((label, mode), exponent)`` pairs; the empty tuple is the vacuum.

Three families are implemented:

* :class:`VacuumV` -- the affine vacuum module V^kappa, PBW monomials in
  x_n (n < 0) ordered f < h < e with modes increasing inside a family.
* :class:`FreeFieldModule` -- polynomial Fock modules over the Weyl algebra
  (generators ``a``, ``a*``) and/or the Heisenberg algebra (``b``). The Weyl
  module M, the Heisenberg modules pi^kappa(lambda) and M (x) pi are all
  instances; the Heisenberg part may also be one-dimensional with b_n acting
  by prescribed scalars (the critical-level module M (x) K_lambda(t)).

Conventions: a_{alpha,n} carries weight alpha + n delta and a*_{alpha,n}
carries -alpha + n delta; the delta-depth of a generator of mode n is -n.
"""
from __future__ import annotations

from itertools import product

from modvertex.rootdata import FiniteLieData, basis_bracket
from modvertex.scalars import KPoly


# -- vectors ----------------------------------------------------------------

def add_into(acc: dict, vec: dict, scale, p: int) -> dict:
    """acc += scale * vec, in place; zero coefficients are dropped."""
    if not scale:
        return acc
    for m, c in vec.items():
        v = (acc.get(m, 0) + scale * c) % p
        if v:
            acc[m] = v
        else:
            acc.pop(m, None)
    return acc


def add_term(acc: dict, mono, c, p: int) -> None:
    v = (acc.get(mono, 0) + c) % p
    if v:
        acc[mono] = v
    else:
        acc.pop(mono, None)


def scale_vec(vec: dict, s, p: int) -> dict:
    out = {}
    for m, c in vec.items():
        v = (s * c) % p
        if v:
            out[m] = v
    return out


def sub_vec(u: dict, v: dict, p: int) -> dict:
    out = dict(u)
    add_into(out, v, -1, p)
    return out


def is_zero(vec: dict) -> bool:
    return not vec


def _normalize_dict(d: dict, p: int) -> dict:
    out = {}
    for m, c in d.items():
        c = c % p
        if c:
            out[m] = c
    return out


# -- monomial helpers --------------------------------------------------------

def mono_exponent(mono: tuple, gen) -> int:
    for g, e in mono:
        if g == gen:
            return e
    return 0


def mono_times(mono: tuple, gen, key) -> tuple:
    """mono * gen for commuting generators; ``key`` orders generators."""
    out = []
    placed = False
    kg = key(gen)
    for g, e in mono:
        if not placed:
            if g == gen:
                out.append((g, e + 1))
                placed = True
                continue
            if key(g) > kg:
                out.append((gen, 1))
                placed = True
        out.append((g, e))
    if not placed:
        out.append((gen, 1))
    return tuple(out)


def mono_divide(mono: tuple, gen) -> tuple:
    """mono / gen; the caller guarantees gen divides mono."""
    out = []
    for g, e in mono:
        if g == gen:
            if e > 1:
                out.append((g, e - 1))
        else:
            out.append((g, e))
    return tuple(out)


def mono_degree(mono: tuple) -> int:
    return sum(e for _, e in mono)


def vector_depth(vec: dict) -> int:
    """Largest delta-depth among the monomials of ``vec`` (-1 for zero)."""
    return max((mono_depth(m) for m in vec), default=-1)


def mono_depth(mono: tuple) -> int:
    return -sum(g[1] * e for g, e in mono)


# -- modules -----------------------------------------------------------------

class Module:
    """Common interface: exact mode actions on sparse vectors."""

    kind = "abstract"

    def __init__(self, data: FiniteLieData, p: int):
        self.data = data
        self.p = int(p)
        self._cache: dict = {}
        self.field_cache: dict = {}

    # subclasses implement
    def apply_mono(self, label, mode: int, mono: tuple) -> dict:
        raise NotImplementedError

    def generators(self, depth: int) -> list:
        """Creation generators (label, mode) of depth <= ``depth``."""
        raise NotImplementedError

    def gen_weight(self, label) -> tuple:
        raise NotImplementedError

    def conformal_weight(self, label) -> int:
        raise NotImplementedError

    def check_label(self, label) -> None:
        raise NotImplementedError

    # generic layer
    @property
    def vacuum(self) -> dict:
        return {(): 1}

    def apply(self, label, mode: int, vec: dict) -> dict:
        self.check_label(label)
        out: dict = {}
        p = self.p
        for mono, c in vec.items():
            add_into(out, self.apply_mono(label, mode, mono), c, p)
        return out

    def apply_word(self, word, vec: dict) -> dict:
        """Apply generator modes right to left: word[-1] acts first."""
        for label, mode in reversed(list(word)):
            vec = self.apply(label, mode, vec)
        return vec

    def depth(self, mono: tuple) -> int:
        return mono_depth(mono)

    def weight(self, mono: tuple) -> tuple:
        w = [0] * len(self.data.simple_roots)
        for (label, _), e in mono:
            for k, x in enumerate(self.gen_weight(label)):
                w[k] += e * x
        return tuple(w)

    def order_key(self, gen):
        return gen

    def mono(self, *factors) -> tuple:
        """Monomial from (label, mode, exponent) triples, in this module's order."""
        acc: dict = {}
        for lab, mode, e in factors:
            self.check_label(lab)
            acc[(lab, mode)] = acc.get((lab, mode), 0) + e
        return tuple(sorted(((g, e) for g, e in acc.items() if e),
                            key=lambda t: self.order_key(t[0])))

    def vec(self, *factors, coeff=1) -> dict:
        return {self.mono(*factors): coeff % self.p}

    def basis_enumerate(self, depth: int, exp_cap=None, zero_mode_cap=None) -> list:
        """All monomials of delta-depth <= depth, deterministic order.

        ``exp_cap`` bounds every exponent (exponents < exp_cap). Depth-0
        creation generators (a*_0) have unbounded powers, so for them an
        explicit ``zero_mode_cap`` (or ``exp_cap``) is required.
        """
        if depth < 0:
            return []
        gens = sorted(self.generators(depth), key=self.order_key)
        zcap = zero_mode_cap if zero_mode_cap is not None else exp_cap
        if any(-g[1] == 0 for g in gens) and zcap is None:
            raise ValueError("depth-0 generators present: pass exp_cap or zero_mode_cap")
        out = []

        def rec(k, remaining, acc):
            if k == len(gens):
                out.append(tuple(acc))
                return
            g = gens[k]
            d = -g[1]
            if d == 0:
                emax = zcap - 1
            else:
                emax = remaining // d
            if exp_cap is not None:
                emax = min(emax, exp_cap - 1)
            for e in range(emax + 1):
                if e:
                    acc.append((g, e))
                rec(k + 1, remaining - d * e, acc)
                if e:
                    acc.pop()

        rec(0, depth, [])
        out.sort(key=lambda m: (self.depth(m), m))
        return out

    def weight_space(self, depth: int, weight: tuple, exp_cap=None, zero_mode_cap=None) -> list:
        return [m for m in self.basis_enumerate(depth, exp_cap, zero_mode_cap)
                if self.depth(m) == depth and self.weight(m) == tuple(weight)]


class VacuumV(Module):
    """V^kappa(g-hat): PBW monomials, c acts by kappa, x_n|0> = 0 for n >= 0."""

    kind = "VacuumV"

    def __init__(self, data: FiniteLieData, p: int, kappa):
        super().__init__(data, p)
        self.kappa = kappa % self.p
        self._labels = set(data.labels)

    def __repr__(self):
        return f"VacuumV({self.data.name}, p={self.p}, kappa={self.kappa})"

    def check_label(self, label):
        if label not in self._labels:
            raise ValueError(f"generator {label!r} does not act on {self!r}")

    def order_key(self, gen):
        return (self.data.index(gen[0]), gen[1])

    def gen_weight(self, label):
        return self.data.weights[self.data.index(label)]

    def conformal_weight(self, label):
        return 1

    def generators(self, depth):
        return [(lab, -n) for n in range(1, depth + 1) for lab in self.data.labels]

    def apply_mono(self, label, mode, mono):
        key = (label, mode, mono)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        res = self._straighten(label, mode, mono)
        self._cache[key] = res
        return res

    def _straighten(self, label, mode, mono):
        p = self.p
        if mode >= 0 and mono_depth(mono) < mode:
            return {}
        if not mono:
            return {} if mode >= 0 else {(((label, mode), 1),): 1}
        data = self.data
        (lab1, n1), e1 = mono[0]
        i = data.index(label)
        j = data.index(lab1)
        if mode < 0 and (i, mode) <= (j, n1):
            if (i, mode) == (j, n1):
                return {(((label, mode), e1 + 1),) + mono[1:]: 1}
            return {(((label, mode), 1),) + mono: 1}
        rest = mono[1:] if e1 == 1 else (((lab1, n1), e1 - 1),) + mono[1:]
        out: dict = {}
        # x y rest = y (x rest) + [x, y] rest
        inner = self.apply_mono(label, mode, rest)
        for m2, c2 in inner.items():
            add_into(out, self.apply_mono(lab1, n1, m2), c2, p)
        terms, central = basis_bracket(data, i, mode, j, n1)
        for (k, nk), c in terms:
            add_into(out, self.apply_mono(data.labels[k], nk, rest), c, p)
        if central:
            add_term(out, rest, central * self.kappa, p)
        return out

    def bracket_action(self, x, y, vec):
        """Action of [x_m, y_n] (with central term) via the root data."""
        (lx, m), (ly, n) = x, y
        data = self.data
        terms, central = basis_bracket(data, data.index(lx), m, data.index(ly), n)
        out: dict = {}
        for (k, nk), c in terms:
            add_into(out, self.apply(data.labels[k], nk, vec), c, self.p)
        if central:
            add_into(out, vec, central * self.kappa, self.p)
        return out


class FreeFieldModule(Module):
    """Polynomial Fock module for the Weyl and/or Heisenberg free fields.

    ``weyl``: include a_{beta,n}, a*_{beta,n} for every positive root beta.
    ``level``: Heisenberg level (None drops the b fields entirely).
    ``lam``: zero-mode values lambda(h_i) (b_{i,0} acts by lam[i]).
    ``b_scalars``: if given, the Heisenberg part is one-dimensional and
    b_{i,n} acts by ``b_scalars.get((i, n), 0)`` for every n (critical level).
    """

    kind = "FreeField"

    def __init__(self, data: FiniteLieData, p: int, weyl=True, level=None, lam=None,
                 b_scalars=None):
        super().__init__(data, p)
        self.weyl = weyl
        self.level = None if level is None else level % self.p
        self.b_scalars = None if b_scalars is None else {
            k: v % self.p for k, v in b_scalars.items() if v % self.p}
        self.has_b = level is not None or b_scalars is not None
        self.b_fock = level is not None and b_scalars is None
        if self.b_scalars and any(n > 0 for (_, n) in self.b_scalars):
            raise ValueError("b_{i,n} with n > 0 must act by 0 (positive energy)")
        rank = data.rank
        a_labels, as_labels, b_labels = free_labels(data)
        self.a_labels = a_labels if weyl else []
        self.as_labels = as_labels if weyl else []
        self.b_labels = b_labels if self.has_b else []
        self.lam = tuple((x % self.p) for x in (lam or (0,) * rank))
        self.kind_of = {}
        for r, lab in enumerate(self.a_labels):
            self.kind_of[lab] = ("a", r)
        for r, lab in enumerate(self.as_labels):
            self.kind_of[lab] = ("a*", r)
        for i, lab in enumerate(self.b_labels):
            self.kind_of[lab] = ("b", i)
        hh = [[data.pairing(data.cartan[i], data.cartan[j]) for j in range(rank)]
              for i in range(rank)]
        self.cartan_form = hh

    def __repr__(self):
        parts = []
        if self.weyl:
            parts.append("M")
        if self.b_fock:
            parts.append(f"pi(level={self.level}, lam={self.lam})")
        elif self.b_scalars is not None:
            parts.append(f"K_lam(t)={self.b_scalars}")
        return f"FreeField[{' (x) '.join(parts)}, p={self.p}]"

    def check_label(self, label):
        if label not in self.kind_of:
            raise ValueError(f"generator {label!r} does not act on {self!r}")

    def conformal_weight(self, label):
        return 0 if self.kind_of[label][0] == "a*" else 1

    def gen_weight(self, label):
        kind, idx = self.kind_of[label]
        if kind == "b":
            return tuple(0 for _ in self.data.simple_roots)
        root = self.data.positive_roots[idx]
        return tuple(root) if kind == "a" else tuple(-x for x in root)

    def generators(self, depth):
        gens = []
        for lab in self.a_labels:
            gens += [(lab, -n) for n in range(1, depth + 1)]
        for lab in self.as_labels:
            gens += [(lab, -n) for n in range(0, depth + 1)]
        if self.b_fock:
            for lab in self.b_labels:
                gens += [(lab, -n) for n in range(1, depth + 1)]
        return gens

    def is_annihilator(self, label, mode) -> bool:
        kind = self.kind_of[label][0]
        if kind == "a":
            return mode >= 0
        if kind == "a*":
            return mode > 0
        return mode >= 0

    def apply_mono(self, label, mode, mono):
        kind, idx = self.kind_of[label]
        p = self.p
        if kind == "a":
            if mode < 0:
                return {mono_times(mono, (label, mode), _natural): 1}
            partner = (self.as_labels[idx], -mode)
            e = mono_exponent(mono, partner)
            if e % p == 0:
                return {}
            return {mono_divide(mono, partner): e % p}
        if kind == "a*":
            if mode <= 0:
                return {mono_times(mono, (label, mode), _natural): 1}
            partner = (self.a_labels[idx], -mode)
            e = mono_exponent(mono, partner)
            if e % p == 0:
                return {}
            return {mono_divide(mono, partner): (-e) % p}
        # Heisenberg
        if self.b_scalars is not None:
            s = self.b_scalars.get((idx, mode), 0)
            return {mono: s} if s else {}
        if mode < 0:
            return {mono_times(mono, (label, mode), _natural): 1}
        if mode == 0:
            s = self.lam[idx]
            return {mono: s} if s else {}
        out: dict = {}
        for j, lab in enumerate(self.b_labels):
            g = self.cartan_form[idx][j]
            if not g:
                continue
            partner = (lab, -mode)
            e = mono_exponent(mono, partner)
            if e % p == 0:
                continue
            add_term(out, mono_divide(mono, partner), mode * self.level * g * e, p)
        return out

    def commutator_scalar(self, x, y):
        """Scalar [x, y] of two free-field generator modes."""
        (lx, m), (ly, n) = x, y
        kx, ix = self.kind_of[lx]
        ky, iy = self.kind_of[ly]
        if m + n != 0:
            return 0
        if kx == "a" and ky == "a*" and ix == iy:
            return 1
        if kx == "a*" and ky == "a" and ix == iy:
            return -1
        if kx == "b" and ky == "b" and self.b_fock:
            return (m * self.level * self.cartan_form[ix][iy]) % self.p
        return 0

    # tensor structure
    def split(self, mono):
        """(Weyl part, Heisenberg part) of a monomial."""
        mw = tuple(t for t in mono if self.kind_of[t[0][0]][0] != "b")
        mb = tuple(t for t in mono if self.kind_of[t[0][0]][0] == "b")
        return mw, mb

    def join(self, mw, mb):
        return tuple(sorted(mw + mb))


def free_labels(data: FiniteLieData):
    """Labels (a, a*, b) of the free fields attached to ``data``."""
    nroots = len(data.positive_roots)
    single = nroots == 1
    a = ["a" if single else f"a{r}" for r in range(nroots)]
    a_star = ["a*" if single else f"a*{r}" for r in range(nroots)]
    b = ["b" if data.rank == 1 else f"b{i}" for i in range(data.rank)]
    return a, a_star, b


def _natural(gen):
    return gen


# -- constructors matching the module kinds ---------------------------------

def weyl_module(data: FiniteLieData, p: int) -> FreeFieldModule:
    """The Weyl Fock module M."""
    return FreeFieldModule(data, p, weyl=True)


def heisenberg_module(data: FiniteLieData, p: int, level, lam=None) -> FreeFieldModule:
    """pi^level(lam); lam defaults to the vacuum weight 0."""
    return FreeFieldModule(data, p, weyl=False, level=level, lam=lam)


def wakimoto_fock(data: FiniteLieData, p: int, kappa, lam=None) -> FreeFieldModule:
    """M (x) pi^{kappa - kappa_c}(lam), the codomain of the WFF map at level kappa."""
    level = kappa + data.dual_coxeter  # kappa - kappa_c with kappa_c = -h^vee
    return FreeFieldModule(data, p, weyl=True, level=level, lam=lam)


def tensor_module(mM: FreeFieldModule, mpi: FreeFieldModule) -> FreeFieldModule:
    if not mM.weyl or mM.has_b or mpi.weyl:
        raise ValueError("expected a Weyl module and a Heisenberg module")
    return FreeFieldModule(mM.data, mM.p, weyl=True, level=mpi.level, lam=mpi.lam,
                           b_scalars=mpi.b_scalars)


def tensor_apply(mM: FreeFieldModule, mpi: FreeFieldModule, v: dict, on_M=None, on_pi=None) -> dict:
    """(on_M (x) on_pi) v for v in M (x) pi; a missing factor action is the identity.

    ``on_M`` and ``on_pi`` map vectors of the factor modules to vectors.
    """
    p = mM.p
    combined = tensor_module(mM, mpi)
    out: dict = {}
    for mono, c in v.items():
        mw, mb = combined.split(mono)
        left = on_M({mw: 1}) if on_M else {mw: 1}
        right = on_pi({mb: 1}) if on_pi else {mb: 1}
        for (x, cx), (y, cy) in product(left.items(), right.items()):
            add_term(out, combined.join(x, y), c * cx * cy, p)
    return out


def monomial_vector(mono: tuple) -> dict:
    return {tuple(mono): 1}


def kappa_symbol(p: int) -> KPoly:
    return KPoly.kappa(p)
