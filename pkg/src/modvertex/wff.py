"""The Wakimoto free-field realization and its finite-type shadow.

Images of the Chevalley generators are assembled from polynomial tables
P^i_beta, Q^i_beta in the a*-variables, so the same builder serves sl2 (the
shipped table) and any rank supplied as JSON. The finite realization phi lands
in crystalline differential operators y^A d^B, with no divided powers of d.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product

from modvertex.fields import (DividedDeriv, FieldExpr, Gen, Scale, Sum, field_mode, nop)
from modvertex.fock import FreeFieldModule, add_into, free_labels, wakimoto_fock
from modvertex.report import CheckReport
from modvertex.rootdata import FiniteLieData, basis_bracket, sl2


# -- data ------------------------------------------------------------------

@dataclass(frozen=True)
class WffData:
    """Polynomial tables defining the free-field images of e_i, h_i, f_i.

    ``P[(i, r)]`` and ``Q[(i, r)]`` map an exponent tuple over the positive
    roots (the a*-monomial) to an integer coefficient; ``r`` indexes the
    positive root beta whose a_beta closes the normal ordered product.
    ``c[i]`` is the integer coefficient c_i in front of d a*_{alpha_i}.
    """

    lie: FiniteLieData
    P: dict
    Q: dict
    c: tuple
    simple_index: tuple = field(default=())

    @property
    def kappa_c(self) -> int:
        return -self.lie.dual_coxeter

    def simple_root_position(self, i: int) -> int:
        """Position of alpha_i in ``lie.positive_roots``."""
        if self.simple_index:
            return self.simple_index[i]
        return self.lie.positive_roots.index(self.lie.simple_roots[i])

    def root_value(self, r: int, i: int) -> int:
        """beta(h_i) for beta = positive_roots[r], read off [h_i, e_beta]."""
        lie = self.lie
        e_beta = lie.root_vectors[tuple(lie.positive_roots[r])][0]
        for k, c in lie.br(lie.cartan[i], e_beta):
            if k == e_beta:
                return c
        return 0

    def to_json(self) -> str:
        def enc(tab):
            return [{"i": i, "beta": r, "poly": [[list(e), c] for e, c in sorted(poly.items())]}
                    for (i, r), poly in sorted(tab.items())]
        return json.dumps({"lie": json.loads(self.lie.to_json()), "P": enc(self.P),
                           "Q": enc(self.Q), "c": list(self.c)}, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "WffData":
        d = json.loads(text)
        lie = FiniteLieData.from_json(json.dumps(d["lie"]))

        def dec(rows):
            return {(int(row["i"]), int(row["beta"])):
                    {tuple(e): int(c) for e, c in row["poly"] if int(c)} for row in rows}
        return cls(lie=lie, P=dec(d.get("P", [])), Q=dec(d["Q"]), c=tuple(int(x) for x in d["c"]))


def sl2_wff() -> WffData:
    """sl2: P is empty, Q^1_alpha = -(a*)^2 and c_1 = kappa_c = -2."""
    return WffData(lie=sl2(), P={}, Q={(0, 0): {(2,): -1}}, c=(-2,))


def _a_star_poly(poly: dict, a_star: list, closing: FieldExpr) -> FieldExpr:
    terms = []
    for exps, coeff in sorted(poly.items()):
        factors = []
        for r, e in enumerate(exps):
            factors += [Gen(a_star[r])] * e
        t = nop(*(factors + [closing]))
        terms.append(t if coeff == 1 else Scale(coeff, t))
    if not terms:
        return None
    return terms[0] if len(terms) == 1 else Sum(*terms)


def wff_image(i: int, kappa, data: WffData = None):
    """Field images (e_i, h_i, f_i) in M (x) pi^{kappa - kappa_c}.

    The d a*_{alpha_i} coefficient is c_i + (kappa - kappa_c) <e_i, f_i>.
    """
    data = data or sl2_wff()
    lie = data.lie
    if not 0 <= i < lie.rank:
        raise ValueError(f"simple index {i} out of range for {lie.name}")
    if not any(key[0] == i for key in data.Q) or i >= len(data.c):
        raise ValueError(f"no P/Q tables for simple index {i} of {lie.name}")
    a, a_star, b = free_labels(lie)
    s = data.simple_root_position(i)

    e_parts = [Gen(a[s])]
    for (j, r), poly in sorted(data.P.items()):
        if j == i and r != s:
            t = _a_star_poly(poly, a_star, Gen(a[r]))
            if t is not None:
                e_parts.append(t)
    e_img = e_parts[0] if len(e_parts) == 1 else Sum(*e_parts)

    h_parts = []
    for r in range(len(lie.positive_roots)):
        v = data.root_value(r, i)
        if v:
            h_parts.append(Scale(-v, nop(Gen(a_star[r]), Gen(a[r]))))
    h_parts.append(Gen(b[i]))
    h_img = h_parts[0] if len(h_parts) == 1 else Sum(*h_parts)

    e_i, f_i = lie.root_vectors[tuple(lie.positive_roots[s])]
    f_parts = []
    for (j, r), poly in sorted(data.Q.items()):
        if j == i:
            t = _a_star_poly(poly, a_star, Gen(a[r]))
            if t is not None:
                f_parts.append(t)
    coeff = data.c[i] + (kappa - data.kappa_c) * lie.pairing(e_i, f_i)
    f_parts.append(Scale(coeff, DividedDeriv(1, Gen(a_star[s]))))
    f_parts.append(nop(Gen(a_star[s]), Gen(b[i])))
    f_img = Sum(*f_parts)
    return e_img, h_img, f_img


def basis_images(kappa, data: WffData = None) -> dict:
    """Images of every finite basis label (sl2: all of e, h, f are Chevalley)."""
    data = data or sl2_wff()
    lie = data.lie
    out = {}
    for i in range(lie.rank):
        e_img, h_img, f_img = wff_image(i, kappa, data)
        s = data.simple_root_position(i)
        e_ix, f_ix = lie.root_vectors[tuple(lie.positive_roots[s])]
        out[lie.labels[e_ix]] = e_img
        out[lie.labels[lie.cartan[i]]] = h_img
        out[lie.labels[f_ix]] = f_img
    missing = [lab for lab in lie.labels if lab not in out]
    if missing:
        raise ValueError(f"images of non-Chevalley basis vectors {missing} are not tabulated")
    return out


def wff_probes(module: FreeFieldModule, depth: int, zero_mode_cap: int = 3) -> list:
    return [{m: 1} for m in module.basis_enumerate(depth, zero_mode_cap=zero_mode_cap)]


def verify_wff_relations(p: int, kappa, mode_bound: int, depth: int,
                         data: WffData = None, zero_mode_cap: int = 3) -> CheckReport:
    """[X_m, Y_n] = [x,y]_{m+n} + m delta_{m,-n} <x,y> kappa on M (x) pi probes."""
    data = data or sl2_wff()
    lie = data.lie
    module = wakimoto_fock(lie, p, kappa)
    images = basis_images(kappa, data)
    labels = list(lie.labels)
    modes = range(-mode_bound, mode_bound + 1)
    rep = CheckReport(f"wff-relations(p={p},kappa={kappa})")
    for v in wff_probes(module, depth, zero_mode_cap):
        single = {(x, n): field_mode(images[x], n, module, v) for x in labels for n in modes}
        for (x, m), (y, n) in product(product(labels, modes), repeat=2):
            rep.checked += 1
            lhs = field_mode(images[x], m, module, single[(y, n)])
            add_into(lhs, field_mode(images[y], n, module, single[(x, m)]), -1, p)
            terms, central = basis_bracket(lie, lie.index(x), m, lie.index(y), n)
            rhs: dict = {}
            for (k, mode), c in terms:
                add_into(rhs, field_mode(images[lie.labels[k]], mode, module, v), c, p)
            if central:
                add_into(rhs, v, central * kappa, p)
            add_into(lhs, rhs, -1, p)
            if lhs:
                rep.fail({"x": f"{x}_{m}", "y": f"{y}_{n}", "probe": v, "difference": lhs})
    return rep


# -- crystalline differential operators ---------------------------------------

def _falling(c: int, k: int, p: int) -> int:
    r = 1
    for t in range(k):
        r = (r * (c - t)) % p
    return r


def _binom_small(b: int, k: int, p: int) -> int:
    r = 1
    for t in range(k):
        r = r * (b - t) // (t + 1)
    return r % p


class DiffOp:
    """Element of the Weyl algebra K<y_r, d_r> in normal form y^A d^B."""

    __slots__ = ("nvars", "p", "terms")

    def __init__(self, nvars: int, p: int, terms=None):
        self.nvars = nvars
        self.p = int(p)
        self.terms = {}
        for key, c in (terms or {}).items():
            c %= self.p
            if c:
                self.terms[key] = (self.terms.get(key, 0) + c) % self.p
        self.terms = {k: c for k, c in self.terms.items() if c}

    @classmethod
    def const(cls, nvars, p, c=1):
        z = (0,) * nvars
        return cls(nvars, p, {(z, z): c})

    @classmethod
    def y(cls, nvars, p, r, power=1):
        A = tuple(power if s == r else 0 for s in range(nvars))
        return cls(nvars, p, {(A, (0,) * nvars): 1})

    @classmethod
    def d(cls, nvars, p, r, power=1):
        B = tuple(power if s == r else 0 for s in range(nvars))
        return cls(nvars, p, {((0,) * nvars, B): 1})

    def _new(self, terms):
        return DiffOp(self.nvars, self.p, terms)

    def __add__(self, other):
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t.get(k, 0) + c
        return self._new(t)

    def __neg__(self):
        return self._new({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        return self._new({k: s * c for k, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        p = self.p
        out: dict = {}
        for (A, B), c1 in self.terms.items():
            for (C, D), c2 in other.terms.items():
                # d^B y^C = sum_K prod_r binom(B_r, K_r) falling(C_r, K_r) y^{C-K} d^{B-K}
                ranges = [range(min(B[r], C[r]) + 1) for r in range(self.nvars)]
                for K in product(*ranges):
                    w = c1 * c2
                    for r, k in enumerate(K):
                        w = (w * _binom_small(B[r], k, p) * _falling(C[r], k, p)) % p
                        if not w:
                            break
                    if not w:
                        continue
                    ya = tuple(A[r] + C[r] - K[r] for r in range(self.nvars))
                    db = tuple(B[r] - K[r] + D[r] for r in range(self.nvars))
                    out[(ya, db)] = (out.get((ya, db), 0) + w) % p
        return self._new(out)

    __rmul__ = scale

    def __pow__(self, e: int):
        r = DiffOp.const(self.nvars, self.p)
        for _ in range(e):
            r = r * self
        return r

    def bracket(self, other):
        return self * other - other * self

    def is_zero(self) -> bool:
        return not self.terms

    def in_p_center(self) -> bool:
        """Membership in K[y^p, d^p]: every exponent divisible by p."""
        return all(x % self.p == 0 for (A, B) in self.terms for x in A + B)

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.p == other.p and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        if not self.terms:
            return "0"
        single = self.nvars == 1
        parts = []
        for (A, B), c in sorted(self.terms.items()):
            mon = []
            for r in range(self.nvars):
                for sym, e in (("y", A[r]), ("d", B[r])):
                    if e:
                        name = sym if single else f"{sym}{r}"
                        mon.append(name if e == 1 else f"{name}^{e}")
            body = "*".join(mon) or "1"
            parts.append(body if c == 1 else f"{c}*{body}")
        return " + ".join(parts)


def _poly_to_diffop(poly: dict, r: int, nvars: int, p: int) -> DiffOp:
    return DiffOp(nvars, p, {(tuple(e), tuple(1 if s == r else 0 for s in range(nvars))): c
                             for e, c in poly.items()})


def phi(x, p: int, data: WffData = None) -> DiffOp:
    """Finite realization: e_i -> d_{alpha_i} + P-terms, h_i -> -sum beta(h_i) y d,
    f_i -> sum_beta Q^i_beta(y) d_beta. ``x`` is a basis label/index or a dict
    of label -> coefficient (extended linearly)."""
    data = data or sl2_wff()
    lie = data.lie
    if lie.name != "sl2":
        raise ValueError("phi is only provided for sl2")
    n = len(lie.positive_roots)
    if isinstance(x, dict):
        out = DiffOp(n, p)
        for lab, c in x.items():
            out = out + phi(lab, p, data).scale(c)
        return out
    ix = lie.index(x)
    for i in range(lie.rank):
        s = data.simple_root_position(i)
        e_ix, f_ix = lie.root_vectors[tuple(lie.positive_roots[s])]
        if ix == e_ix:
            out = DiffOp.d(n, p, s)
            for (j, r), poly in data.P.items():
                if j == i and r != s:
                    out = out + _poly_to_diffop(poly, r, n, p)
            return out
        if ix == lie.cartan[i]:
            out = DiffOp(n, p)
            for r in range(n):
                v = data.root_value(r, i)
                if v:
                    out = out + (DiffOp.y(n, p, r) * DiffOp.d(n, p, r)).scale(-v)
            return out
        if ix == f_ix:
            out = DiffOp(n, p)
            for (j, r), poly in data.Q.items():
                if j == i:
                    out = out + _poly_to_diffop(poly, r, n, p)
            return out
    raise ValueError(f"{lie.labels[ix]} is not a Chevalley generator")


def phi_p_closed_form(op: DiffOp) -> DiffOp:
    """sum c^p m(y^p) d_beta^p for a first-order operator sum c m(y) d_beta."""
    p = op.p
    out = {}
    for (A, B), c in op.terms.items():
        if sum(B) != 1:
            raise ValueError("closed form applies to first-order operators")
        key = (tuple(p * a for a in A), tuple(p * b for b in B))
        out[key] = pow(c, p, p)
    return DiffOp(op.nvars, p, out)


def verify_phi_homomorphism(p: int, data: WffData = None) -> CheckReport:
    """[phi(x), phi(y)] = phi([x, y]) on all basis pairs."""
    data = data or sl2_wff()
    lie = data.lie
    rep = CheckReport(f"phi-bracket(p={p})")
    for i, j in product(range(lie.dim), repeat=2):
        rep.checked += 1
        lhs = phi(i, p, data).bracket(phi(j, p, data))
        rhs = phi({lie.labels[k]: c for k, c in lie.br(i, j)}, p, data)
        if lhs != rhs:
            rep.fail({"x": lie.labels[i], "y": lie.labels[j], "lhs": repr(lhs), "rhs": repr(rhs)})
    return rep


def verify_phi_pformula(p: int, data: WffData = None) -> CheckReport:
    """phi(x)^p - phi(x^[p]) equals the closed form and lies in K[y^p, d^p].

    Also checks that the result commutes with phi of every basis element.
    """
    data = data or sl2_wff()
    lie = data.lie
    rep = CheckReport(f"phi-pformula(p={p})")
    values = {}
    for i in range(lie.dim):
        lab = lie.labels[i]
        rep.checked += 1
        img = phi(i, p, data)
        lhs = img ** p - phi({lie.labels[k]: c for k, c in lie.ppower.get(i, ())}, p, data)
        closed = phi_p_closed_form(img)
        values[lab] = repr(lhs)
        if lhs != closed:
            rep.fail({"x": lab, "lhs": repr(lhs), "closed_form": repr(closed)})
        if not lhs.in_p_center():
            rep.fail({"x": lab, "not_in_p_center": repr(lhs)})
        for j in range(lie.dim):
            rep.checked += 1
            if not lhs.bracket(phi(j, p, data)).is_zero():
                rep.fail({"x": lab, "noncentral_with": lie.labels[j]})
    rep.details["phi_iota"] = values
    rep.merge(verify_phi_homomorphism(p, data))
    return rep
