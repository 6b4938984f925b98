"""Baby Wakimoto modules, singular-vector census and the center probe."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from modvertex.characters import fock_character, mathieu_product
from modvertex.fields import field_mode
from modvertex.fock import FreeFieldModule, Module, VacuumV, add_into, free_labels, wakimoto_fock
from modvertex.kernels import nullspace_mod, rank_mod
from modvertex.pcenter import RestrictedQuotient, iota_operator, pcenter_graded_dims, power_apply
from modvertex.report import CheckReport
from modvertex.rootdata import basis_bracket
from modvertex.scalars import KPoly
from modvertex.wff import WffData, basis_images, sl2_wff


def _in_fp(x) -> bool:
    return isinstance(x, int) or (isinstance(x, KPoly) and x.is_constant())


@dataclass
class PCharacter:
    """p-character data for the Weyl part (``xi``) and the Heisenberg part (``xi_pi``).

    ``xi`` maps creation generators ``(label, mode)`` of M (a with mode <= -1,
    a* with mode <= 0) to the value of xi on their p-th power. ``xi_pi`` maps
    ``(i, n)`` with n <= 0 to xi^pi(b_{i,n}).
    """

    xi: dict = field(default_factory=dict)
    xi_pi: dict = field(default_factory=dict)

    def validate(self, module: FreeFieldModule) -> None:
        p = module.p
        for (lab, mode), val in self.xi.items():
            kind = module.kind_of.get(lab, (None,))[0]
            if kind not in ("a", "a*"):
                raise ValueError(f"xi is defined on Weyl generators only, got {lab!r}")
            if module.is_annihilator(lab, mode) and val % p:
                raise ValueError(f"xi must vanish on {lab}_{mode}^p (annihilation mode)")
            if not _in_fp(val):
                raise ValueError("p-character values must lie in F_p")
        for (i, n), val in self.xi_pi.items():
            if n > 0 and val % p:
                raise ValueError(f"xi^pi must vanish on b_{i},{n} for n > 0")
            if not _in_fp(val):
                raise ValueError("p-character values must lie in F_p")

    @property
    def graded(self) -> bool:
        return (all(mode == 0 or not v for (_, mode), v in self.xi.items())
                and all(n == 0 or not v for (_, n), v in self.xi_pi.items()))


def _check_lambda(lam: dict, xi_pi: dict, rank: int, p: int, zero_mode_only=False) -> None:
    """lambda_{i,n}^p - lambda_{i,np} = xi^pi(b_{i,n})^p wherever either side is nonzero.

    Off the critical level the b_{i,n}, n != 0, are Fock modes rather than
    scalars, so only the zero-mode condition applies there.
    """
    keys = set(lam) | set(xi_pi)
    keys |= {(i, n // p) for (i, n) in lam if n % p == 0}
    if zero_mode_only:
        keys = {(i, n) for (i, n) in keys if n == 0}
    for i, n in sorted(keys):
        if not 0 <= i < rank:
            raise ValueError(f"Cartan index {i} out of range")
        left = lam.get((i, n), 0) ** p - lam.get((i, n * p), 0)
        right = xi_pi.get((i, n), 0) ** p
        if (left - right) % p:
            raise ValueError(
                f"weight incompatible with xi^pi at (i={i}, n={n}): "
                f"lambda^p - lambda_[p] = {left % p!r}, xi^pi^p = {right % p}")


class GModule:
    """A module with an affine action ``g_action(label, mode, v)`` and a finite basis."""

    module: Module
    p: int

    def g_action(self, x, n: int, v: dict) -> dict:
        raise NotImplementedError

    def basis(self, depth: int) -> list:
        return self.module.basis_enumerate(depth)

    @property
    def lie(self):
        return self.module.data

    @property
    def highest_weight_vector(self) -> dict:
        return self.module.vacuum


class VacuumView(GModule):
    """V^kappa (or a quotient of it) viewed through its own affine action."""

    def __init__(self, module: Module):
        self.module = module
        self.p = module.p

    def g_action(self, x, n, v):
        return self.module.apply(x, n, v)


def vacuum_view(p: int, kappa, data=None) -> VacuumView:
    from modvertex.rootdata import sl2
    return VacuumView(VacuumV(data or sl2(), p, kappa))


class BabyWakimoto(GModule):
    """Restricted quotient of M (x) K_lambda(t) (critical) or M (x) pi(lambda)."""

    def __init__(self, module: RestrictedQuotient, lam, kappa, pchar: PCharacter, wff: WffData):
        self.module = module
        self.p = module.p
        self.lam = lam
        self.kappa = kappa
        self.pchar = pchar
        self.wff = wff
        self.images = basis_images(kappa, wff)

    @property
    def critical(self) -> bool:
        return (self.kappa - self.wff.kappa_c) % self.p == 0

    def __repr__(self):
        kind = "critical" if self.critical else f"kappa={self.kappa}"
        return f"BabyWakimoto({kind}, lambda={self.lam}, p={self.p})"

    def g_action(self, x, n, v):
        return field_mode(self.images[x], n, self.module, v)

    def character(self, depth: int):
        return fock_character(self.module, depth, rho_shift=0)


def build_baby_wakimoto(lam, xi=None, xi_pi=None, kappa=None, p: int = 2, depth: int = None,
                        wff: WffData = None) -> BabyWakimoto:
    """Baby Wakimoto module for weight ``lam`` and p-character (xi, xi^pi).

    ``kappa=None`` (or kappa = kappa_c mod p) gives the critical-level module
    M / I_xi with b_{i,n} acting by lambda_{i,n}; ``lam`` is then either a
    tuple of lambda(h_i) (the graded case, lambda_{i,n} = 0 for n != 0) or a
    dict {(i, n): lambda_{i,n}}. Otherwise ``lam`` is a tuple of lambda(h_i)
    and the module is (M (x) pi^{kappa - kappa_c}(lambda)) / (I_xi (x) I_xi^pi).
    ``depth`` is accepted for symmetry with the enumeration routines and unused.
    """
    wff = wff or sl2_wff()
    lie = wff.lie
    rank = lie.rank
    pchar = PCharacter(dict(xi or {}), dict(xi_pi or {}))
    if isinstance(lam, dict):
        lam_t = {k: v for k, v in lam.items() if v % p}
    else:
        lam_t = {(i, 0): x for i, x in enumerate(lam) if x % p}
    critical = kappa is None or (kappa - wff.kappa_c) % p == 0
    _check_lambda(lam_t, pchar.xi_pi, rank, p, zero_mode_only=not critical)
    if critical:
        kappa = wff.kappa_c % p
        base = FreeFieldModule(lie, p, weyl=True, b_scalars=lam_t)
        pchar.validate(base)
        scalars = dict(pchar.xi)
    else:
        if any(n for (_, n) in lam_t):
            raise ValueError("off-critical modules take lambda(h_i) only")
        lam0 = tuple(lam_t.get((i, 0), 0) for i in range(rank))
        base = wakimoto_fock(lie, p, kappa, lam=lam0)
        pchar.validate(base)
        scalars = dict(pchar.xi)
        _, _, b = free_labels(lie)
        for (i, n), val in pchar.xi_pi.items():
            if n < 0:
                scalars[(b[i], n)] = val ** p
    return BabyWakimoto(RestrictedQuotient(base, scalars, kappa), lam, kappa, pchar, wff)


def build_baby_wakimoto_noncritical(lam, xi=None, xi_pi=None, kappa=0, p: int = 2,
                                    wff: WffData = None) -> BabyWakimoto:
    wff = wff or sl2_wff()
    if (kappa - wff.kappa_c) % p == 0:
        raise ValueError("kappa is critical mod p: use the critical-level constructor")
    return build_baby_wakimoto(lam, xi, xi_pi, kappa, p, wff=wff)


def minus_rho_module(p: int, wff: WffData = None) -> BabyWakimoto:
    """w(-rho): critical level, xi = 0, lambda = -rho."""
    wff = wff or sl2_wff()
    lam = tuple(-x for x in wff.lie.rho)
    return build_baby_wakimoto(lam, p=p, wff=wff)


# -- checks ---------------------------------------------------------------------

def verify_mathieu_character(p: int, depth: int, wff: WffData = None) -> CheckReport:
    """Character of w(-rho) relative to e^{-rho} equals the Mathieu product."""
    w = minus_rho_module(p, wff)
    rep = CheckReport(f"mathieu-character(p={p},N={depth})")
    rep.checked += 1
    ch = fock_character(w.module, depth, rho_shift=-1)
    target = mathieu_product(p, depth, w.lie)
    if not ch.same_coefficients(target):
        diff = {k: (ch.terms.get(k, 0), target.terms.get(k, 0))
                for k in set(ch.terms) | set(target.terms)
                if ch.terms.get(k, 0) != target.terms.get(k, 0)}
        rep.fail({"mismatch (module, product)": sorted(diff.items())[:10]})
    rep.details["depth0"] = {str(a): c for a, c in ch.at_depth(0).items()}
    rep.details["dims"] = {d: sum(ch.at_depth(d).values()) for d in range(depth + 1)}
    rep.details["coefficients"] = ch.to_json()
    return rep


def verify_g_relations(w: GModule, depth: int, mode_bound: int = 2) -> CheckReport:
    """[x_m, y_n] = [x, y]_{m+n} + m delta <x, y> kappa through the module's action."""
    lie, p = w.lie, w.p
    kappa = getattr(w, "kappa", getattr(w.module, "kappa", 0))
    rep = CheckReport(f"g-relations({w!r})")
    modes = range(-mode_bound, mode_bound + 1)
    for mono in w.basis(depth):
        v = {mono: 1}
        single = {(x, n): w.g_action(x, n, v) for x in lie.labels for n in modes}
        for (x, m), (y, n) in product(product(lie.labels, modes), repeat=2):
            rep.checked += 1
            out = w.g_action(x, m, single[(y, n)])
            add_into(out, w.g_action(y, n, single[(x, m)]), -1, p)
            terms, central = basis_bracket(lie, lie.index(x), m, lie.index(y), n)
            for (k, mode), c in terms:
                add_into(out, w.g_action(lie.labels[k], mode, v), -c, p)
            if central:
                add_into(out, v, -central * kappa, p)
            if out:
                rep.fail({"x": f"{x}_{m}", "y": f"{y}_{n}", "probe": v, "difference": out})
    return rep


def verify_well_defined(w: BabyWakimoto, depth: int, mode_bound: int = 2) -> CheckReport:
    """Every iota(x_n) acts on the quotient basis by a scalar, and M p-center modes too.

    With xi = xi^pi = 0 and lambda(h_i) in F_p the scalar is 0.
    """
    p, lie = w.p, w.lie
    rep = CheckReport(f"well-defined({w!r})")
    modes = range(-mode_bound, mode_bound + 1)
    zero_data = not any(v % p for v in w.pchar.xi.values()) and \
        not any(v % p for v in w.pchar.xi_pi.values())
    for mono in w.basis(depth):
        v = {mono: 1}
        for x in lie.labels:
            for n in modes:
                rep.checked += 1
                out = power_apply(lambda u: w.g_action(x, n, u), v, p)
                out = dict(out)
                for k, c in lie.ppower.get(lie.index(x), ()):
                    add_into(out, w.g_action(lie.labels[k], n * p, v), -c, p)
                keys = set(out) - {mono}
                if any(out[k] for k in keys):
                    rep.fail({"iota": f"{x}_{n}", "probe": v, "not_scalar": out})
                elif zero_data and out.get(mono, 0):
                    rep.fail({"iota": f"{x}_{n}", "probe": v, "scalar": out[mono]})
        q = w.module
        for lab in q.a_labels + q.as_labels:
            for n in modes:
                rep.checked += 1
                out = power_apply(lambda u: q.apply(lab, n, u), v, p)
                if zero_data and out:
                    rep.fail({"element": f"{lab}_{n}^p", "probe": v, "value": out})
    return rep


def _weight_spaces(w: GModule, depth: int) -> dict:
    spaces: dict = {}
    m = w.module
    for mono in w.basis(depth):
        key = (m.depth(mono), tuple(m.weight(mono)))
        spaces.setdefault(key, []).append(mono)
    return spaces


def _kernel(w: GModule, monos: list, conditions) -> list:
    """Basis of {v in span(monos) : g_action(x, n, v) = 0 for (x, n) in conditions}."""
    p = w.p
    rows_by_target: dict = {}
    for col, mono in enumerate(monos):
        for cond in conditions:
            out = w.g_action(cond[0], cond[1], {mono: 1})
            for tgt, c in out.items():
                rows_by_target.setdefault((cond, tgt), {})[col] = c % p
    rows = []
    for key in sorted(rows_by_target, key=repr):
        row = [0] * len(monos)
        for col, c in rows_by_target[key].items():
            row[col] = int(c)
        rows.append(row)
    if not rows:
        return [{mono: 1} for mono in monos]
    null = nullspace_mod(rows, len(monos), p)
    return [{monos[i]: c for i, c in enumerate(vec) if c} for vec in null]


def singular_vectors(w: GModule, depth: int, min_depth: int = 0) -> list:
    """Per weight space of delta-depth d in [min_depth, depth]: the kernel of e_0
    and of every x_n with 1 <= n <= d. Returns ``[(depth, weight, kernel_basis)]``
    for the weight spaces whose kernel is nonzero."""
    lie = w.lie
    e_labels = [lie.labels[lie.root_vectors[tuple(r)][0]] for r in lie.simple_roots]
    out = []
    for (d, wt), monos in sorted(_weight_spaces(w, depth).items()):
        if d < min_depth:
            continue
        conds = [(e, 0) for e in e_labels]
        conds += [(x, n) for x in lie.labels for n in range(1, d + 1)]
        ker = _kernel(w, monos, conds)
        if ker:
            out.append((d, wt, ker))
    return out


def singular_census(w: GModule, depth: int) -> dict:
    """Kernels split into the highest-weight line (depth 0) and anything deeper."""
    found = singular_vectors(w, depth)
    top = [(d, wt, k) for d, wt, k in found if d == 0]
    deeper = [(d, wt, k) for d, wt, k in found if d > 0]
    return {"depth0": top, "deeper": deeper}


def center_probe(kind: str = "VacuumV", p: int = 2, kappa=0, depth: int = 3,
                 data=None) -> dict:
    """Graded dimensions of {v : x_(n) v = 0, n >= 0} against those of z_0(V^kappa).

    Also verifies that explicit p-center vectors (products of iota-operators on
    |0>) lie in the commutant and span a space of the predicted dimension.
    """
    if kind != "VacuumV":
        raise ValueError("center_probe supports kind='VacuumV' only")
    w = vacuum_view(p, kappa, data)
    lie, m = w.lie, w.module
    z0 = pcenter_graded_dims(lie, p, depth)
    table = {}
    for d in range(depth + 1):
        comm = 0
        for (dd, wt), monos in sorted(_weight_spaces(w, d).items()):
            if dd != d:
                continue
            conds = [(x, n) for x in lie.labels for n in range(0, d + 1)]
            comm += len(_kernel(w, monos, conds))
        table[d] = {"commutant": comm, "z0": z0[d], "excess": comm - z0[d]}
    # explicit p-center vectors
    vecs = []
    gens = [(x, -r) for x in lie.labels for r in range(1, depth // p + 1)]
    for mono in m.basis_enumerate(depth // p):
        if not all(g in gens for g, _ in mono):
            continue
        v = m.vacuum
        for (x, n), e in mono:
            for _ in range(e):
                v = iota_operator(m, x, n, v)
        vecs.append((p * m.depth(mono), v))
    contained = True
    for d in range(depth + 1):
        here = [v for dd, v in vecs if dd == d]
        if not here:
            continue
        basis = sorted({k for v in here for k in v})
        rows = [[v.get(k, 0) for k in basis] for v in here]
        table[d]["z0_vectors_rank"] = rank_mod(rows, len(basis), p)
        for v in here:
            for x in lie.labels:
                for n in range(0, d + 1):
                    if m.apply(x, n, v):
                        contained = False
    return {"kind": kind, "p": p, "kappa": kappa, "depth": depth, "table": table,
            "z0_in_commutant": contained,
            "commutant_ge_z0": all(r["commutant"] >= r["z0"] for r in table.values())}
