"""p-center generators, restricted quotients and the free-field p-center images.

Operators of the form x_n^p - (x^[p])_{np} are always evaluated as honest
p-fold compositions of mode actions. Field-side quantities come from
:func:`~modvertex.fields.reconstruct_Y` or from closed-form field expressions,
so every check compares two independent computations.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from modvertex.fields import (DividedDeriv, Gen, NOP, PthPower, Scale, Sum, field_mode,
                              reconstruct_Y)
from modvertex.fock import (FreeFieldModule, Module, VacuumV, add_into, free_labels,
                            wakimoto_fock)
from modvertex.kernels import binom_mod
from modvertex.report import CheckReport
from modvertex.rootdata import FiniteLieData, sl2
from modvertex.wff import WffData, basis_images, sl2_wff


# -- iota -----------------------------------------------------------------

@dataclass(frozen=True)
class IotaState:
    """(x_{-r})^p|0> - (x^[p])_{-rp}|0> in V^kappa, remembering (x, r)."""

    vector: dict
    x: str
    r: int
    p: int

    @property
    def depth(self) -> int:
        return self.r * self.p


def iota_state(x, r: int, m: VacuumV) -> IotaState:
    if r < 1:
        raise ValueError("r must be >= 1")
    data, p = m.data, m.p
    lab = data.labels[data.index(x)]
    vec = m.vec((lab, -r, p))
    for k, c in data.ppower.get(data.index(lab), ()):
        add_into(vec, m.vec((data.labels[k], -r * p, 1)), -c, p)
    return IotaState(vec, lab, r, p)


def power_apply(op, v: dict, times: int) -> dict:
    for _ in range(times):
        if not v:
            break
        v = op(v)
    return v


def iota_operator(m: Module, x, n: int, v: dict) -> dict:
    """(x_n^p - (x^[p])_{np}) v for a module carrying the affine action directly."""
    data, p = m.data, m.p
    lab = data.labels[data.index(x)]
    out = power_apply(lambda w: m.apply(lab, n, w), v, p)
    out = dict(out)
    for k, c in data.ppower.get(data.index(lab), ()):
        add_into(out, m.apply(data.labels[k], n * p, v), -c, p)
    return out


def _matching(N: int, p: int, r: int):
    """n with generic mode N = p(n + r) - 1, or None."""
    if (N + 1) % p:
        return None
    return (N + 1) // p - r


def vacuum_probes(m: VacuumV, depth: int) -> list:
    return [{mono: 1} for mono in m.basis_enumerate(depth)]


def verify_state_field(p: int, kappa, depth: int, rs=(1, 2), mode_bound: int = 2,
                       data: FiniteLieData = None) -> CheckReport:
    """Mode-by-mode checks of the divided-power and p-power state-field formulas.

    For every basis x and r in ``rs``: Y(x_{-r}|0>) has mode (n + r - 1) equal
    to binom(-n-1, r-1) x_n; Y(x_{-rp}|0>) and Y(x_{-r}^p|0>) have mode
    p(n + r) - 1 equal to binom(-n-1, r-1) x_{np} and binom(-n-1, r-1) x_n^p,
    and vanish at every other mode. The p-power side of the second family is
    the nested normal ordered product (no fast path).
    """
    data = data or sl2()
    m = VacuumV(data, p, kappa)
    rep = CheckReport(f"state-field(p={p},kappa={kappa})")
    probes = vacuum_probes(m, depth)
    for lab, r in product(data.labels, rs):
        s1 = m.vec((lab, -r, 1))
        s2 = m.vec((lab, -r * p, 1))
        s3 = m.vec((lab, -r, p))
        for n in range(-mode_bound, mode_bound + 1):
            c = binom_mod(-n - 1, r - 1, p)
            for v in probes:
                rep.checked += 1
                lhs = reconstruct_Y(s1, n + r - 1, m, v)
                add_into(lhs, m.apply(lab, n, v), -c, p)
                if lhs:
                    rep.fail({"state": f"{lab}_-{r}", "n": n, "probe": v, "difference": lhs})
        lo, hi = p * (-mode_bound + r) - 1, p * (mode_bound + r) - 1
        for N in range(lo, hi + 1):
            n = _matching(N, p, r)
            c = binom_mod(-n - 1, r - 1, p) if n is not None else 0
            for v in probes:
                rep.checked += 2
                lhs = reconstruct_Y(s2, N, m, v)
                if c:
                    add_into(lhs, m.apply(lab, n * p, v), -c, p)
                if lhs:
                    rep.fail({"state": f"{lab}_-{r * p}", "N": N, "probe": v, "difference": lhs})
                lhs = reconstruct_Y(s3, N, m, v)
                if c:
                    add_into(lhs, power_apply(lambda w: m.apply(lab, n, w), v, p), -c, p)
                if lhs:
                    rep.fail({"state": f"({lab}_-{r})^p", "N": N, "probe": v, "difference": lhs})
    return rep


def verify_iota_commutes_Y(p: int, kappa, depth: int, rs=(1, 2), mode_bound: int = 2,
                           data: FiniteLieData = None) -> CheckReport:
    """Y(iota(x_{-r})|0>)_(N) = binom(-n-1, r-1) iota(x_n) at N = p(n+r) - 1, else 0."""
    data = data or sl2()
    m = VacuumV(data, p, kappa)
    rep = CheckReport(f"iota-commutes-Y(p={p},kappa={kappa})")
    probes = vacuum_probes(m, depth)
    for lab, r in product(data.labels, rs):
        st = iota_state(lab, r, m)
        lo, hi = p * (-mode_bound + r) - 1, p * (mode_bound + r) - 1
        for N in range(lo, hi + 1):
            n = _matching(N, p, r)
            c = binom_mod(-n - 1, r - 1, p) if n is not None else 0
            for v in probes:
                rep.checked += 1
                lhs = reconstruct_Y(st.vector, N, m, v)
                if c:
                    add_into(lhs, iota_operator(m, lab, n, v), -c, p)
                if lhs:
                    rep.fail({"x": lab, "r": r, "N": N, "probe": v, "difference": lhs})
    return rep


def verify_centrality(p: int, kappa, depth: int, mode_bound: int = 2,
                      data: FiniteLieData = None) -> CheckReport:
    """[x_n^p - (x^[p])_{np}, y_m] = 0 on V^kappa probes, all basis x, y."""
    data = data or sl2()
    m = VacuumV(data, p, kappa)
    rep = CheckReport(f"centrality(p={p},kappa={kappa})")
    modes = range(-mode_bound, mode_bound + 1)
    for v in vacuum_probes(m, depth):
        iv = {(x, n): iota_operator(m, x, n, v) for x in data.labels for n in modes}
        for (x, n), (y, k) in product(product(data.labels, modes), repeat=2):
            rep.checked += 1
            lhs = m.apply(y, k, iv[(x, n)])
            add_into(lhs, iota_operator(m, x, n, m.apply(y, k, v)), -1, p)
            if lhs:
                rep.fail({"iota": f"{x}_{n}", "y": f"{y}_{k}", "probe": v, "difference": lhs})
    return rep


# -- free-field p-centers ---------------------------------------------------------

def verify_free_pcenter(p: int, depth: int, level=1, mode_bound: int = 2,
                        zero_mode_cap: int = 3, data: FiniteLieData = None) -> CheckReport:
    """a_n^p and (a*_n)^p commute with all Weyl modes; b_n^p - b_{np} with all b modes."""
    data = data or sl2()
    mod = FreeFieldModule(data, p, weyl=True, level=level)
    rep = CheckReport(f"free-pcenter(p={p})")
    modes = range(-mode_bound, mode_bound + 1)
    probes = [{x: 1} for x in mod.basis_enumerate(depth, zero_mode_cap=zero_mode_cap)]
    a, a_star, b = free_labels(data)
    gens = [(lab, n) for lab in a + a_star + b for n in modes]

    def central_op(lab, n, v):
        out = power_apply(lambda w: mod.apply(lab, n, w), v, p)
        if lab in b:
            out = dict(out)
            add_into(out, mod.apply(lab, n * p, v), -1, p)
        return out

    for v in probes:
        for (z, n), (y, k) in product(gens, gens):
            rep.checked += 1
            lhs = mod.apply(y, k, central_op(z, n, v))
            add_into(lhs, central_op(z, n, mod.apply(y, k, v)), -1, p)
            if lhs:
                rep.fail({"central": f"{z}_{n}^p", "y": f"{y}_{k}", "probe": v})
    return rep


def pcenter_image_fields(p: int, kappa, data: WffData = None, variant: str = "pth-power") -> dict:
    """Closed-form fields for iota(e), iota(h), iota(f) under the free-field map.

    ``variant="first-power"`` replaces (d a*)^p by d a* in the eta term. That
    form is wrong for a formal level and exists only to be compared against.
    """
    data = data or sl2_wff()
    lie = data.lie
    if lie.rank != 1:
        raise ValueError("closed forms are tabulated for sl2 only")
    a, a_star, b = (lab[0] for lab in free_labels(lie))
    A, AS, B = Gen(a), Gen(a_star), Gen(b)
    r_b = Sum(PthPower(B), Scale(-1, DividedDeriv(p - 1, B)))
    beta_h = data.root_value(0, 0)
    eta = kappa ** p - kappa
    e_ix, f_ix = lie.root_vectors[tuple(lie.positive_roots[0])]
    eta = eta * lie.pairing(e_ix, f_ix)
    d_as = DividedDeriv(1, AS)
    eta_field = PthPower(d_as) if variant == "pth-power" else d_as
    return {
        "e": PthPower(A),
        "h": Sum(Scale(-beta_h, NOP(PthPower(AS), PthPower(A))), r_b),
        "f": Sum(Scale(-1, NOP(PthPower(AS), PthPower(AS), PthPower(A))),
                 Scale(eta, eta_field),
                 NOP(PthPower(AS), r_b)),
    }


def _free_probes(mod, depth, zero_mode_cap):
    return [{x: 1} for x in mod.basis_enumerate(depth, zero_mode_cap=zero_mode_cap)]


def verify_wff_pcenter_images(p: int, kappa, depth: int, mode_bound: int = 2,
                              zero_mode_cap: int = 3, comm_bound: int = 2,
                              data: WffData = None) -> CheckReport:
    """(x^w_n)^p - (x^[p]w)_{np} equals the closed-form p-center field's mode.

    Both sides act on M (x) pi probes of depth <= ``depth``. Additional
    sub-reports: commutation of the left side with a*, a and b modes, the
    eta coefficient and the R(b) contributions, and whether the first-power
    specialization (without the p-th power in the eta term) would also match.
    """
    data = data or sl2_wff()
    lie = data.lie
    mod = wakimoto_fock(lie, p, kappa)
    images = basis_images(kappa, data)
    closed = pcenter_image_fields(p, kappa, data)
    example = pcenter_image_fields(p, kappa, data, variant="first-power")
    rep = CheckReport(f"pcenter-images(p={p},kappa={kappa})")
    probes = _free_probes(mod, depth, zero_mode_cap)
    a, a_star, b = free_labels(lie)
    comm_gens = {"a*": a_star, "a": a, "b": b}
    comm_reports = {k: CheckReport(f"commutes-with-{k}") for k in comm_gens}
    example_ok = True

    def lhs_op(x, n, v):
        out = power_apply(lambda w: field_mode(images[x], n, mod, w), v, p)
        out = dict(out)
        for k, c in lie.ppower.get(lie.index(x), ()):
            add_into(out, field_mode(images[lie.labels[k]], n * p, mod, v), -c, p)
        return out

    for x in lie.labels:
        for n in range(-mode_bound, mode_bound + 1):
            N = n * p + p - 1
            for v in probes:
                rep.checked += 1
                lhs = lhs_op(x, n, v)
                diff = dict(lhs)
                add_into(diff, field_mode(closed[x], N, mod, v), -1, p)
                if diff:
                    rep.fail({"x": x, "n": n, "probe": v, "difference": diff})
                if example_ok and x == "f":
                    alt = dict(lhs)
                    add_into(alt, field_mode(example[x], N, mod, v), -1, p)
                    example_ok = not alt
        # the closed form is a function of z^p: other modes vanish
        for N in range(-mode_bound * p, mode_bound * p + p):
            if (N + 1) % p == 0:
                continue
            for v in probes:
                rep.checked += 1
                out = field_mode(closed[x], N, mod, v)
                if out:
                    rep.fail({"x": x, "nonfrobenius_mode": N, "probe": v, "value": out})
        # commutant checks on a smaller window
        for n in range(-comm_bound, comm_bound + 1):
            for kind, labs in comm_gens.items():
                sub = comm_reports[kind]
                for lab, k in product(labs, range(-comm_bound, comm_bound + 1)):
                    for v in probes:
                        sub.checked += 1
                        out = mod.apply(lab, k, lhs_op(x, n, v))
                        add_into(out, lhs_op(x, n, mod.apply(lab, k, v)), -1, p)
                        if out:
                            sub.fail({"x": f"{x}_{n}", "with": f"{lab}_{k}", "probe": v})
    for sub in comm_reports.values():
        rep.merge(sub)
        rep.details[sub.name] = {"passed": sub.passed, "checked": sub.checked}

    # isolated coefficients on the vacuum
    vac = mod.vacuum
    as_lab, b_lab = a_star[0], b[0]
    eta_mono = mod.mono((as_lab, -1, p))
    f_vac = lhs_op("f", -1, vac)
    eta_found = f_vac.get(eta_mono, 0)
    eta_expected = (kappa ** p - kappa) % p
    rep.details["eta"] = {"found": eta_found, "expected": eta_expected}
    if eta_found != eta_expected:
        rep.fail({"eta": eta_found, "expected": eta_expected})
    r_b_expected = mod.vec((b_lab, -1, p))
    add_into(r_b_expected, mod.vec((b_lab, -p, 1)), -1, p)
    h_vac = lhs_op("h", -1, vac)
    r_b_h = {mono: c for mono, c in h_vac.items() if not mod.split(mono)[0]}
    zero_as = (as_lab, 0)
    r_b_f = {}
    for mono, c in f_vac.items():
        mw, mb = mod.split(mono)
        if mw == ((zero_as, p),):
            r_b_f[mb] = c
    rep.details["R(b)"] = {"from_h": r_b_h, "from_f": r_b_f, "expected": r_b_expected}
    if r_b_h != r_b_expected or r_b_f != r_b_expected:
        rep.fail({"R(b)": {"h": r_b_h, "f": r_b_f}, "expected": r_b_expected})
    rep.details["eta_first_power_variant_matches"] = example_ok
    return rep


# -- restricted quotients ----------------------------------------------------------

class RestrictedQuotient(Module):
    """Quotient of a Fock-type module by (p-center element - scalar).

    Basis: monomials with every exponent < p. A p-th power of a creation
    generator g reduces as g^p -> s_g + g^[p], where s_g is the scalar
    assigned by ``scalars`` (default 0) and g^[p] is (x^[p])_{np} on V,
    b_{np} on the Heisenberg part and 0 on the Weyl part.
    ``kappa`` is stored independently of the scalars.
    """

    kind = "RestrictedQuotient"

    def __init__(self, base: Module, scalars: dict = None, kappa=None):
        super().__init__(base.data, base.p)
        self.base = base
        self.scalars = {k: v % self.p for k, v in (scalars or {}).items()}
        self.kappa = kappa if kappa is not None else getattr(base, "kappa", None)
        self._red: dict = {}
        for attr in ("kind_of", "a_labels", "as_labels", "b_labels"):
            if hasattr(base, attr):
                setattr(self, attr, getattr(base, attr))

    def __repr__(self):
        return f"RestrictedQuotient({self.base!r}, scalars={self.scalars})"

    def check_label(self, label):
        self.base.check_label(label)

    def conformal_weight(self, label):
        return self.base.conformal_weight(label)

    def gen_weight(self, label):
        return self.base.gen_weight(label)

    def generators(self, depth):
        return self.base.generators(depth)

    def order_key(self, gen):
        return self.base.order_key(gen)

    def split(self, mono):
        return self.base.split(mono)

    def basis_enumerate(self, depth, exp_cap=None, zero_mode_cap=None):
        cap = self.p if exp_cap is None else min(exp_cap, self.p)
        return self.base.basis_enumerate(depth, exp_cap=cap, zero_mode_cap=cap)

    def _shift(self, gen):
        """(label, mode) list with coefficients for g^[p], or ()."""
        label, mode = gen
        base = self.base
        if isinstance(base, VacuumV):
            d = base.data
            return tuple((d.labels[k], mode * self.p, c)
                         for k, c in d.ppower.get(d.index(label), ()))
        if isinstance(base, FreeFieldModule) and base.kind_of[label][0] == "b":
            return ((label, mode * self.p, 1),)
        return ()

    def reduce_mono(self, mono) -> dict:
        hit = self._red.get(mono)
        if hit is not None:
            return hit
        p = self.p
        for idx, (gen, e) in enumerate(mono):
            if e >= p:
                rest = _lower(mono, gen, p)
                out: dict = {}
                s = self.scalars.get(gen, 0)
                if s:
                    add_into(out, self.reduce_mono(rest), s, p)
                for lab, mode, c in self._shift(gen):
                    if isinstance(self.base, VacuumV):
                        # only g^p - g^[p] is central: g^[p] replaces g^p in place
                        word = [g for g, k in mono[:idx] for _ in range(k)]
                        word += [gen] * (e - p) + [(lab, mode)]
                        shifted = self.base.apply_word(word, {mono[idx + 1:]: 1})
                    else:
                        shifted = self.base.apply_mono(lab, mode, rest)
                    add_into(out, self.reduce_vec(shifted), c, p)
                break
        else:
            out = {mono: 1}
        self._red[mono] = out
        return out

    def reduce_vec(self, vec: dict) -> dict:
        out: dict = {}
        for mono, c in vec.items():
            add_into(out, self.reduce_mono(mono), c, self.p)
        return out

    def apply_mono(self, label, mode, mono):
        key = (label, mode, mono)
        hit = self._cache.get(key)
        if hit is None:
            hit = self.reduce_vec(self.base.apply_mono(label, mode, mono))
            self._cache[key] = hit
        return hit


def _lower(mono, gen, k):
    out = []
    for g, e in mono:
        if g == gen:
            if e - k:
                out.append((g, e - k))
        else:
            out.append((g, e))
    return tuple(out)


def restricted_quotient(m: Module, pchar: dict = None, kappa=None) -> RestrictedQuotient:
    return RestrictedQuotient(m, pchar, kappa)


def verify_quotient_scalars(q: RestrictedQuotient, depth: int, mode_bound: int = 2) -> CheckReport:
    """Every p-center mode acts on the quotient basis by its assigned scalar.

    Creation-side p-center elements act by their scalar; annihilation-side
    ones (n >= 0) act by 0, as do iota(x_n) on V.
    """
    p = q.p
    rep = CheckReport(f"quotient-scalars({q!r})")
    base = q.base
    probes = [{mono: 1} for mono in q.basis_enumerate(depth)]
    for v in probes:
        if isinstance(base, VacuumV):
            for lab in base.data.labels:
                for n in range(-mode_bound, mode_bound + 1):
                    rep.checked += 1
                    out = iota_operator(q, lab, n, v)
                    s = q.scalars.get((lab, n), 0) if n < 0 else 0
                    add_into(out, v, -s, p)
                    if out:
                        rep.fail({"iota": f"{lab}_{n}", "probe": v, "difference": out})
        else:
            for lab in base.kind_of:
                kind = base.kind_of[lab][0]
                if kind == "b" and not getattr(base, "b_fock", False):
                    continue
                for n in range(-mode_bound, mode_bound + 1):
                    rep.checked += 1
                    out = power_apply(lambda w: q.apply(lab, n, w), v, p)
                    out = dict(out)
                    if kind == "b":
                        add_into(out, q.apply(lab, n * p, v), -1, p)
                    creation = not base.is_annihilator(lab, n)
                    s = q.scalars.get((lab, n), 0) if creation else 0
                    if kind == "b" and n == 0:
                        lam = base.lam[base.kind_of[lab][1]]
                        s = (lam ** p - lam) % p
                    add_into(out, v, -s, p)
                    if out:
                        rep.fail({"element": f"{lab}_{n}", "probe": v, "difference": out})
    return rep


# -- graded dimension of the p-center -----------------------------------------------

def pcenter_graded_dims(data: FiniteLieData, p: int, depth: int) -> dict:
    """dim of z_0(V^kappa) in each delta-depth d <= depth.

    Counts multisets of iota-generators iota(x_n)|0>, n < 0, with total depth
    sum(-n) p = d: a PBW-style count in dim(g) colours of parts p*r.
    """
    dims = {d: 0 for d in range(depth + 1)}
    dims[0] = 1
    counts = [1] + [0] * depth
    for r in range(1, depth // p + 1):
        for _ in range(data.dim):
            part = r * p
            for d in range(part, depth + 1):
                counts[d] += counts[d - part]
    for d in range(depth + 1):
        dims[d] = counts[d]
    return dims


def pcenter_dims_by_enumeration(data: FiniteLieData, p: int, depth: int) -> dict:
    """Same count, from a basis enumeration of the polynomial ring in iota-generators."""
    gens = [(lab, -r) for lab in data.labels for r in range(1, depth // p + 1)]
    probe = VacuumV(data, p, 0)
    dims = {d: 0 for d in range(depth + 1)}
    for mono in probe.basis_enumerate(depth // p if depth >= 0 else -1):
        if all(g in gens for g, _ in mono):
            d = p * probe.depth(mono)
            if d <= depth:
                dims[d] += 1
    return dims
