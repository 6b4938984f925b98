"""Finite Lie algebra data, the affine bracket and the affine p-power map.

Structure constants, the invariant form and the p-power table are stored over
the integers; every use site reduces mod p, so one record serves all primes.
Only sl2 ships. Other ranks load through :meth:`FiniteLieData.from_json`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product

from modvertex.report import CheckReport


@dataclass(frozen=True)
class FiniteLieData:
    """Chevalley-basis description of a finite-dimensional Lie algebra.

    ``labels`` lists the basis in PBW order (negative root vectors, then
    Cartan, then positive root vectors). ``bracket[(i, j)]`` and
    ``ppower[i]`` are tuples of ``(basis_index, integer_coefficient)``.
    ``weights[i]`` gives the basis vector's weight in simple-root coordinates.
    """

    name: str
    labels: tuple
    bracket: dict
    form: dict
    ppower: dict
    weights: tuple
    cartan: tuple
    positive_roots: tuple
    simple_roots: tuple
    rho: tuple
    dual_coxeter: int
    root_vectors: dict = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return len(self.cartan)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        if isinstance(label, int):
            return label
        return self.labels.index(label)

    def br(self, i: int, j: int) -> tuple:
        return self.bracket.get((i, j), ())

    def pairing(self, i: int, j: int) -> int:
        return self.form.get((i, j), 0)

    def with_ppower(self, table: dict) -> "FiniteLieData":
        """Copy with a replaced p-power table (used for negative controls)."""
        new = dict(self.ppower)
        for lab, combo in table.items():
            new[self.index(lab)] = tuple((self.index(k), c) for k, c in dict(combo).items())
        return FiniteLieData(**{**self.__dict__, "ppower": new})

    def to_json(self) -> str:
        lab = self.labels
        return json.dumps(
            {
                "name": self.name,
                "labels": list(lab),
                "bracket": [[lab[i], lab[j], {lab[k]: c for k, c in v}]
                            for (i, j), v in sorted(self.bracket.items())],
                "form": [[lab[i], lab[j], c] for (i, j), c in sorted(self.form.items())],
                "ppower": {lab[i]: {lab[k]: c for k, c in v} for i, v in sorted(self.ppower.items())},
                "weights": [list(w) for w in self.weights],
                "cartan": [lab[i] for i in self.cartan],
                "positive_roots": [list(r) for r in self.positive_roots],
                "simple_roots": [list(r) for r in self.simple_roots],
                "rho": list(self.rho),
                "dual_coxeter": self.dual_coxeter,
                "root_vectors": {str(list(r)): [lab[a], lab[b]]
                                 for r, (a, b) in sorted(self.root_vectors.items())},
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "FiniteLieData":
        d = json.loads(text)
        labels = tuple(d["labels"])
        ix = {lab: i for i, lab in enumerate(labels)}
        bracket = {}
        for a, b, combo in d["bracket"]:
            bracket[(ix[a], ix[b])] = tuple((ix[k], int(c)) for k, c in combo.items() if c)
        form = {(ix[a], ix[b]): int(c) for a, b, c in d["form"] if c}
        ppower = {ix[a]: tuple((ix[k], int(c)) for k, c in combo.items() if c)
                  for a, combo in d["ppower"].items()}
        root_vectors = {}
        for key, (e, f) in d.get("root_vectors", {}).items():
            root_vectors[tuple(json.loads(key))] = (ix[e], ix[f])
        return cls(
            name=d["name"],
            labels=labels,
            bracket=bracket,
            form=form,
            ppower=ppower,
            weights=tuple(tuple(w) for w in d["weights"]),
            cartan=tuple(ix[c] for c in d["cartan"]),
            positive_roots=tuple(tuple(r) for r in d["positive_roots"]),
            simple_roots=tuple(tuple(r) for r in d["simple_roots"]),
            rho=tuple(d["rho"]),
            dual_coxeter=int(d["dual_coxeter"]),
            root_vectors=root_vectors,
        )

    # -- consistency checks on the finite algebra -------------------------

    def _bracket_vec(self, u: dict, v: dict) -> dict:
        out: dict = {}
        for i, a in u.items():
            for j, b in v.items():
                for k, c in self.br(i, j):
                    out[k] = out.get(k, 0) + a * b * c
        return {k: c for k, c in out.items() if c}

    def check_structure(self) -> CheckReport:
        """Antisymmetry, Jacobi identity and invariance of the form (over Z)."""
        rep = CheckReport("finite-structure")
        n = self.dim
        unit = [{i: 1} for i in range(n)]
        for i, j in product(range(n), repeat=2):
            rep.checked += 1
            a = self._bracket_vec(unit[i], unit[j])
            b = self._bracket_vec(unit[j], unit[i])
            if any(a.get(k, 0) + b.get(k, 0) for k in set(a) | set(b)):
                rep.fail(("antisymmetry", self.labels[i], self.labels[j]))
        for i, j, k in product(range(n), repeat=3):
            rep.checked += 1
            t1 = self._bracket_vec(unit[i], self._bracket_vec(unit[j], unit[k]))
            t2 = self._bracket_vec(unit[j], self._bracket_vec(unit[k], unit[i]))
            t3 = self._bracket_vec(unit[k], self._bracket_vec(unit[i], unit[j]))
            keys = set(t1) | set(t2) | set(t3)
            if any(t1.get(x, 0) + t2.get(x, 0) + t3.get(x, 0) for x in keys):
                rep.fail(("jacobi", self.labels[i], self.labels[j], self.labels[k]))
            lhs = sum(c * self.pairing(m, k) for m, c in self.br(i, j))
            rhs = sum(c * self.pairing(i, m) for m, c in self.br(j, k))
            if lhs != rhs:
                rep.fail(("invariance", self.labels[i], self.labels[j], self.labels[k]))
        return rep

    def check_restricted(self, p: int) -> CheckReport:
        """(ad x)^p = ad(x^[p]) on the finite basis, mod p."""
        rep = CheckReport(f"finite-restricted-p{p}")
        n = self.dim
        for i, j in product(range(n), repeat=2):
            rep.checked += 1
            v = {j: 1}
            for _ in range(p):
                v = self._bracket_vec({i: 1}, v)
            w = self._bracket_vec(dict(self.ppower.get(i, ())), {j: 1})
            if any((v.get(k, 0) - w.get(k, 0)) % p for k in set(v) | set(w)):
                rep.fail((self.labels[i], self.labels[j]))
        return rep


def sl2() -> FiniteLieData:
    """sl2 with <e,f> = 1, <h,h> = 2, h^vee = 2, e^[p] = f^[p] = 0, h^[p] = h."""
    f, h, e = 0, 1, 2
    bracket = {
        (e, f): ((h, 1),), (f, e): ((h, -1),),
        (h, e): ((e, 2),), (e, h): ((e, -2),),
        (h, f): ((f, -2),), (f, h): ((f, 2),),
    }
    form = {(e, f): 1, (f, e): 1, (h, h): 2}
    return FiniteLieData(
        name="sl2",
        labels=("f", "h", "e"),
        bracket=bracket,
        form=form,
        ppower={e: (), f: (), h: ((h, 1),)},
        weights=((-1,), (0,), (1,)),
        cartan=(h,),
        positive_roots=((1,),),
        simple_roots=((1,),),
        rho=(1,),
        dual_coxeter=2,
        root_vectors={(1,): (e, f)},
    )


class AffineElement:
    """Finite F_p-combination of loop symbols x_n = t^n (x) x plus c.

    ``terms`` maps ``(basis_index, mode)`` to a residue; ``central`` is the
    coefficient of c.
    """

    __slots__ = ("data", "p", "terms", "central")

    def __init__(self, data: FiniteLieData, p: int, terms=None, central=0):
        self.data = data
        self.p = int(p)
        self.terms = {}
        for k, c in (terms or {}).items():
            c %= self.p
            if c:
                self.terms[(data.index(k[0]), k[1])] = c
        self.central = central % self.p

    @classmethod
    def basis(cls, data, p, label, mode, coeff=1) -> "AffineElement":
        return cls(data, p, {(data.index(label), mode): coeff})

    @classmethod
    def c(cls, data, p) -> "AffineElement":
        return cls(data, p, {}, 1)

    def __add__(self, other):
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return AffineElement(self.data, self.p, t, self.central + other.central)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, s: int):
        return AffineElement(self.data, self.p, {k: s * v for k, v in self.terms.items()},
                             s * self.central)

    def is_zero(self) -> bool:
        return not self.terms and not self.central

    def central_value(self, kappa):
        """The central part evaluated at level kappa (c acts by kappa)."""
        return self.central * kappa

    def weight(self):
        """(alpha-weight, mode) if homogeneous, else None. c has weight (0, 0)."""
        ws = set()
        for (i, n) in self.terms:
            ws.add((self.data.weights[i], n))
        if self.central:
            ws.add((tuple(0 for _ in self.data.simple_roots), 0))
        return ws.pop() if len(ws) == 1 else (None if ws else "zero")

    def __eq__(self, other):
        if not isinstance(other, AffineElement):
            return NotImplemented
        return self.p == other.p and self.terms == other.terms and self.central == other.central

    def __repr__(self):
        parts = [f"{c}*{self.data.labels[i]}_{n}" for (i, n), c in sorted(self.terms.items())]
        if self.central:
            parts.append(f"{self.central}*c")
        return " + ".join(parts) if parts else "0"


def basis_bracket(data: FiniteLieData, i: int, m: int, j: int, n: int):
    """[x^i_m, x^j_n] over Z as ``(((k, m+n), coeff), ...), central_coeff``."""
    terms = tuple(((k, m + n), c) for k, c in data.br(i, j))
    central = m * data.pairing(i, j) if m + n == 0 else 0
    return terms, central


def affine_bracket(x: AffineElement, y: AffineElement, kappa=None) -> AffineElement:
    """[x, y] = sum [a,b]_{m+n} + m delta_{m,-n} <a,b> c, with c central.

    With ``kappa`` given, the central part is reported already multiplied by
    the level (``central`` then holds the scalar kappa * coefficient).
    """
    p = x.p
    terms: dict = {}
    central = 0
    for (i, m), a in x.terms.items():
        for (j, n), b in y.terms.items():
            t, cen = basis_bracket(x.data, i, m, j, n)
            for key, c in t:
                terms[key] = terms.get(key, 0) + a * b * c
            central += a * b * cen
    out = AffineElement(x.data, p, terms, central)
    if kappa is not None:
        out.central = (out.central * kappa) % p
    return out


def p_power(data: FiniteLieData, p: int, x) -> AffineElement:
    """(t^n (x) x)^[p] = t^{np} (x) x^[p] and c^[p] = c.

    ``x`` is ``"c"`` or a basis pair ``(label, mode)``; the map is not linear,
    so combinations are rejected.
    """
    if isinstance(x, AffineElement):
        if x.central and not x.terms and x.central == 1:
            return AffineElement.c(data, p)
        if len(x.terms) != 1 or x.central or next(iter(x.terms.values())) != 1:
            raise ValueError("p-power is only defined here on single basis elements")
        (i, n), = x.terms
        x = (i, n)
    if x == "c":
        return AffineElement.c(data, p)
    label, n = x
    i = data.index(label)
    return AffineElement(data, p, {(k, n * p): c for k, c in data.ppower.get(i, ())})


def verify_restricted(data: FiniteLieData, p: int, mode_bound: int, levels=(0, 1)) -> CheckReport:
    """(ad x_m)^p y_n = ad(x_m^[p]) y_n for basis x, y and |m|, |n| <= mode_bound.

    The comparison keeps c symbolic; the central coefficient is also checked
    after substituting each level in ``levels``.
    """
    rep = CheckReport(f"restricted-p{p}")
    rng = range(-mode_bound, mode_bound + 1)
    for i, j in product(range(data.dim), repeat=2):
        for m, n in product(rng, rng):
            rep.checked += 1
            xm = AffineElement(data, p, {(i, m): 1})
            y = AffineElement(data, p, {(j, n): 1})
            lhs = y
            for _ in range(p):
                lhs = affine_bracket(xm, lhs)
            rhs = affine_bracket(p_power(data, p, (i, m)), y)
            ok = lhs == rhs and all((lhs.central_value(k) - rhs.central_value(k)) % p == 0
                                    for k in levels)
            if not ok:
                rep.fail({"x": f"{data.labels[i]}_{m}", "y": f"{data.labels[j]}_{n}",
                          "lhs": repr(lhs), "rhs": repr(rhs)})
    return rep
