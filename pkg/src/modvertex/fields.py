"""Field expressions and their Fourier modes acting on sparse vectors.

A field A(z) = sum_n A_(n) z^{-n-1} is never expanded as a series; the only
evaluation is ``field_mode(A, n, module, v)`` = A_(n) v. Modes use the generic
index throughout. For generators, ``x_(n) = x_n``, ``a_(n) = a_n``,
``b_(n) = b_n`` and ``a*_(n) = a*_{n+1}`` (a*(z) = sum a*_n z^{-n}).

Normal ordering is right-nested, :A B C: = :A :B C::, with
(:AB:)_(n) = sum_{j<0} A_(j) B_(n-j-1) + sum_{j>=0} B_(n-j-1) A_(j).
Both sums are cut off by the delta-depth of the vector they act on, so every
evaluation is a finite, exact computation.
"""
from __future__ import annotations

from modvertex.fock import Module, add_into, mono_depth, vector_depth
from modvertex.kernels import binom_mod
from modvertex.report import CheckReport


class FieldExpr:
    """Base node. Hash is computed once; equality is structural."""

    __slots__ = ("_key", "_hash")

    def _init(self, key):
        self._key = key
        self._hash = hash(key)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other or (isinstance(other, FieldExpr) and self._key == other._key)

    def __add__(self, other):
        return Sum(self, other)

    def __sub__(self, other):
        return Sum(self, Scale(-1, other))

    def __neg__(self):
        return Scale(-1, self)

    def __rmul__(self, c):
        return Scale(c, self)

    def __repr__(self):
        return self.show()


class Gen(FieldExpr):
    __slots__ = ("label",)

    def __init__(self, label):
        self.label = label
        self._init(("gen", label))

    def show(self):
        return f"{self.label}(z)"


class DividedDeriv(FieldExpr):
    __slots__ = ("k", "arg")

    def __init__(self, k: int, arg: FieldExpr):
        if k < 0:
            raise ValueError("divided derivative order must be >= 0")
        self.k = k
        self.arg = arg
        self._init(("dd", k, arg._key))

    def show(self):
        return f"d^({self.k}){self.arg.show()}"


class NOP(FieldExpr):
    """Right-nested normal ordered product of two or more fields."""

    __slots__ = ("args",)

    def __init__(self, *args):
        if len(args) == 1 and isinstance(args[0], (list, tuple)):
            args = tuple(args[0])
        if len(args) < 2:
            raise ValueError("NOP needs two or more factors; use nop() for fewer")
        self.args = tuple(args)
        self._init(("nop",) + tuple(a._key for a in self.args))

    @property
    def head(self):
        return self.args[0]

    @property
    def tail(self):
        return nop(*self.args[1:])

    def show(self):
        return ":" + " ".join(a.show() for a in self.args) + ":"


def nop(*args) -> FieldExpr:
    """Normal ordered product allowing 0 factors (identity) or 1 factor."""
    if len(args) == 1 and isinstance(args[0], (list, tuple)):
        args = tuple(args[0])
    if not args:
        return Const(1)
    if len(args) == 1:
        return args[0]
    return NOP(*args)


class Sum(FieldExpr):
    __slots__ = ("terms",)

    def __init__(self, *terms):
        flat = []
        for t in terms:
            if isinstance(t, Sum):
                flat.extend(t.terms)
            else:
                flat.append(t)
        self.terms = tuple(flat)
        self._init(("sum",) + tuple(t._key for t in self.terms))

    def show(self):
        return " + ".join(t.show() for t in self.terms)


class Scale(FieldExpr):
    __slots__ = ("coeff", "arg")

    def __init__(self, coeff, arg: FieldExpr):
        if hasattr(coeff, "residue"):
            coeff = coeff.residue
        self.coeff = coeff
        self.arg = arg
        self._init(("scale", coeff, arg._key))

    def show(self):
        return f"({self.coeff})*{self.arg.show()}"


class PthPower(FieldExpr):
    """:A(z)^p: for the module's prime p, i.e. the p-fold nested NOP.

    With ``fast=True`` and a single-generator argument the evaluation uses
    :A^p: = A_+^p + A_-^p, i.e. (:A^p:)_(n) = (A_(j))^p when n + 1 = p(j + 1)
    and 0 otherwise. ``fast=False`` always expands the nested product.
    """

    __slots__ = ("arg", "fast")

    def __init__(self, arg: FieldExpr, fast: bool = True):
        self.arg = arg
        self.fast = fast
        self._init(("pth", arg._key, fast))

    def show(self):
        return f"({self.arg.show()})^p"


class Const(FieldExpr):
    """c times the identity field (the field of c|0>)."""

    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value
        self._init(("const", value))

    def show(self):
        return f"{self.value}*id"


# -- structural helpers -------------------------------------------------------

def conformal_weight(expr: FieldExpr, module: Module, p: int = None) -> int:
    """Upper bound on the conformal weight (exact for homogeneous expressions)."""
    if isinstance(expr, Gen):
        return module.conformal_weight(expr.label)
    if isinstance(expr, DividedDeriv):
        return expr.k + conformal_weight(expr.arg, module)
    if isinstance(expr, NOP):
        return sum(conformal_weight(a, module) for a in expr.args)
    if isinstance(expr, Sum):
        return max(conformal_weight(t, module) for t in expr.terms)
    if isinstance(expr, Scale):
        return conformal_weight(expr.arg, module)
    if isinstance(expr, PthPower):
        return module.p * conformal_weight(expr.arg, module)
    if isinstance(expr, Const):
        return 0
    raise TypeError(expr)


def generators_of(expr: FieldExpr) -> set:
    if isinstance(expr, Gen):
        return {expr.label}
    if isinstance(expr, (DividedDeriv, Scale, PthPower)):
        return generators_of(expr.arg)
    if isinstance(expr, NOP):
        return set().union(*(generators_of(a) for a in expr.args))
    if isinstance(expr, Sum):
        return set().union(*(generators_of(t) for t in expr.terms))
    return set()


def check_legal(expr: FieldExpr, module: Module) -> None:
    for lab in generators_of(expr):
        module.check_label(lab)


def _single_generator(expr: FieldExpr) -> bool:
    if isinstance(expr, Gen):
        return True
    if isinstance(expr, (DividedDeriv, Scale)):
        return _single_generator(expr.arg)
    return False


def classical_mode(module: Module, label, n: int) -> int:
    """Classical index of the generic mode (n) of a generator field."""
    return n + 1 if module.conformal_weight(label) == 0 else n


# -- evaluation -----------------------------------------------------------------

def _weight(expr, module):
    key = ("w", expr)
    w = module.field_cache.get(key)
    if w is None:
        w = conformal_weight(expr, module)
        module.field_cache[key] = w
    return w


def mode_on_monomial(expr: FieldExpr, n: int, module: Module, mono: tuple) -> dict:
    """A_(n) applied to one basis monomial (memoized per module)."""
    cache = module.field_cache
    key = (expr, n, mono)
    hit = cache.get(key)
    if hit is not None:
        return hit
    res = _eval(expr, n, module, mono)
    cache[key] = res
    return res


def _apply_vec(expr, n, module, vec):
    out: dict = {}
    p = module.p
    for mono, c in vec.items():
        add_into(out, mode_on_monomial(expr, n, module, mono), c, p)
    return out


def _eval(expr, n, module, mono):
    p = module.p
    if isinstance(expr, Gen):
        return module.apply_mono(expr.label, classical_mode(module, expr.label, n), mono)
    if isinstance(expr, Const):
        if n != -1:
            return {}
        c = expr.value % p
        return {mono: c} if c else {}
    if isinstance(expr, Scale):
        c = expr.coeff % p
        if not c:
            return {}
        inner = mode_on_monomial(expr.arg, n, module, mono)
        return {m: v for m, v in ((m, (c * v) % p) for m, v in inner.items()) if v}
    if isinstance(expr, Sum):
        out: dict = {}
        for t in expr.terms:
            add_into(out, mode_on_monomial(t, n, module, mono), 1, p)
        return out
    if isinstance(expr, DividedDeriv):
        k = expr.k
        c = binom_mod(k - n - 1, k, p)
        if not c:
            return {}
        inner = mode_on_monomial(expr.arg, n - k, module, mono)
        return {m: v for m, v in ((m, (c * v) % p) for m, v in inner.items()) if v}
    if isinstance(expr, PthPower):
        if expr.fast and _single_generator(expr.arg):
            if (n + 1) % p:
                return {}
            j = (n + 1) // p - 1
            vec = {mono: 1}
            for _ in range(p):
                vec = _apply_vec(expr.arg, j, module, vec)
                if not vec:
                    break
            return vec
        return mode_on_monomial(NOP(*([expr.arg] * p)), n, module, mono)
    if isinstance(expr, NOP):
        a, b = expr.head, expr.tail
        wa, wb = _weight(a, module), _weight(b, module)
        d = mono_depth(mono)
        out: dict = {}
        # creation part of A to the left
        for j in range(n - d - wb, 0):
            inner = mode_on_monomial(b, n - j - 1, module, mono)
            if inner:
                add_into(out, _apply_vec(a, j, module, inner), 1, p)
        # annihilation part of A to the right
        for j in range(0, d + wa):
            inner = mode_on_monomial(a, j, module, mono)
            if inner:
                add_into(out, _apply_vec(b, n - j - 1, module, inner), 1, p)
        return out
    raise TypeError(f"unknown field node {expr!r}")


def field_mode(expr: FieldExpr, n: int, module: Module, v: dict) -> dict:
    """A_(n) v, exact."""
    check_legal(expr, module)
    return _apply_vec(expr, n, module, v)


def field_mode_classical(expr: FieldExpr, n: int, module: Module, v: dict) -> dict:
    """Classical-index mode: generic index shifted by (weight - 1)."""
    return field_mode(expr, n + conformal_weight(expr, module) - 1, module, v)


# -- state-field correspondence -----------------------------------------------------

def state_field(module: Module, mono: tuple) -> FieldExpr:
    """Y(state, z) for a monomial state as a nested NOP of divided derivatives.

    x_{-r} |-> d^(r-1) x(z) for weight-one generators; a*_{-s} |-> d^(s) a*(z).
    """
    factors = []
    for (label, mode), e in mono:
        w = module.conformal_weight(label)
        k = -mode - 1 if w == 1 else -mode
        f = Gen(label) if k == 0 else DividedDeriv(k, Gen(label))
        factors.extend([f] * e)
    return nop(*factors)


def state_expr(module: Module, state: dict) -> FieldExpr:
    terms = []
    for mono, c in sorted(state.items(), key=lambda t: t[0]):
        f = state_field(module, mono)
        terms.append(f if c == 1 else Scale(c, f))
    if not terms:
        return Scale(0, Const(1))
    return terms[0] if len(terms) == 1 else Sum(*terms)


def reconstruct_Y(state: dict, n: int, target: Module, v: dict, source: Module = None) -> dict:
    """Y(state, z)_(n) v, linear in ``state``."""
    source = source or target
    out: dict = {}
    p = target.p
    for mono, c in state.items():
        add_into(out, field_mode(state_field(source, mono), n, target, v), c, p)
    return out


def check_borcherds(a: dict, b: dict, m: int, n: int, probes, module: Module) -> CheckReport:
    """[a_(m), b_(n)] = sum_{i>=0} binom(m, i) (a_(i) b)_(m+n-i) on every probe."""
    p = module.p
    rep = CheckReport(f"borcherds(m={m},n={n})")
    wa = max((conformal_weight(state_field(module, mono), module) for mono in a), default=0)
    db = vector_depth(b)
    products = []
    for i in range(0, max(db + wa, 0) + 1):
        ab = reconstruct_Y(a, i, module, b)
        if ab:
            products.append((i, ab))
    for v in probes:
        rep.checked += 1
        lhs = reconstruct_Y(a, m, module, reconstruct_Y(b, n, module, v))
        add_into(lhs, reconstruct_Y(b, n, module, reconstruct_Y(a, m, module, v)), -1, p)
        rhs: dict = {}
        for i, ab in products:
            c = binom_mod(m, i, p)
            if c:
                add_into(rhs, reconstruct_Y(ab, m + n - i, module, v), c, p)
        diff = dict(lhs)
        add_into(diff, rhs, -1, p)
        if diff:
            rep.fail({"probe": v, "lhs": lhs, "rhs": rhs})
    return rep
