"""Named verification suites shared by the CLI and the acceptance tests.

Each suite expands into independent jobs ``(suite, label, fn, kwargs)``; a job
returns a list of :class:`~modvertex.report.CheckReport`. Jobs are plain
module-level callables so they can be shipped to worker processes.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from modvertex.report import CheckReport
from modvertex.rootdata import sl2, verify_restricted
from modvertex.scalars import KPoly, Prime, fp_binom

SUITES = ("lucas", "restricted", "state-field", "iota-commute", "centrality", "wff-relations",
          "pcenter-images", "phi-pformula", "character", "singular", "center-probe")

DEFAULT_DEPTH = {
    "lucas": 0, "restricted": 0, "state-field": 5, "iota-commute": 5, "centrality": 5,
    "wff-relations": 4, "pcenter-images": 4, "phi-pformula": 0, "character": 8,
    "singular": 4, "center-probe": 3,
}
DEFAULT_P = {
    "lucas": (2, 3, 5, 7), "restricted": (2, 3, 5), "state-field": (2, 3),
    "iota-commute": (2, 3, 5), "centrality": (2, 3, 5), "wff-relations": (2, 3, 5),
    "pcenter-images": (2, 3), "phi-pformula": (2, 3, 5), "character": (2, 3, 5),
    "singular": (2, 3), "center-probe": (2,),
}
DEFAULT_KAPPA = {
    "wff-relations": ("0", "1", "kc"), "pcenter-images": ("0", "1", "formal"),
    "center-probe": ("0", "1"),
}
DEFAULT_MODE_BOUND = {"restricted": 4, "wff-relations": 3}


@dataclass
class SuiteConfig:
    suite: str
    p: tuple = ()
    kappa: tuple = ()
    depth: int = None
    mode_bound: int = None
    weight: int = None
    seed: int = 0
    extra_random: int = 0
    depth_cap: int = 8
    force: bool = False
    output: str = None
    threads: int = 1

    def suites(self) -> tuple:
        return SUITES if self.suite == "all" else (self.suite,)

    def primes(self, suite) -> tuple:
        return tuple(self.p) if self.p else DEFAULT_P[suite]

    def kappas(self, suite) -> tuple:
        return tuple(self.kappa) if self.kappa else DEFAULT_KAPPA.get(suite, ("1",))

    def depth_for(self, suite) -> int:
        return DEFAULT_DEPTH[suite] if self.depth is None else self.depth

    def mode_bound_for(self, suite, default=2) -> int:
        if self.mode_bound is not None:
            return self.mode_bound
        return DEFAULT_MODE_BOUND.get(suite, default)

    def validate(self) -> None:
        for s in self.suites():
            if s not in SUITES:
                raise ValueError(f"unknown suite {s!r}")
            for p in self.primes(s):
                Prime(p)
            d = self.depth_for(s)
            if d < 0 or d > self.depth_cap:
                raise ValueError(f"depth {d} outside [0, {self.depth_cap}] for suite {s}")
        if "pcenter-images" in self.suites() and not self.force:
            bad = [p for p in self.primes("pcenter-images") if p not in (2, 3)]
            if bad:
                raise ValueError(f"pcenter-images with p in {bad} is slow; pass --force to run it")
        if self.threads < 1:
            raise ValueError("thread count must be >= 1")

    def to_json(self) -> dict:
        return {"suite": self.suite, "p": list(self.p), "kappa": list(self.kappa),
                "depth": self.depth, "mode_bound": self.mode_bound, "weight": self.weight,
                "seed": self.seed, "extra_random": self.extra_random, "depth_cap": self.depth_cap}


def parse_kappa(token, p: int):
    """'formal' -> the indeterminate k, 'kc' -> the critical level, else an integer."""
    token = str(token)
    if token == "formal":
        return KPoly.kappa(p)
    if token in ("kc", "critical"):
        return (-sl2().dual_coxeter) % p
    return int(token) % p


# -- job bodies -------------------------------------------------------------------

def _exact_binom(b: int, a: int) -> int:
    num = 1
    for i in range(a):
        num *= b - i
    return int(Fraction(num, factorial(a)))


def job_lucas(p: int, seed: int = 0, extra_random: int = 0) -> list:
    rep = CheckReport(f"lucas(p={p})")
    pairs = [(b, a) for b in range(-50, 51) for a in range(0, 51)]
    rng = random.Random(seed)
    pairs += [(rng.randint(-10 ** 6, 10 ** 6), rng.randint(0, 60)) for _ in range(extra_random)]
    for b, a in pairs:
        rep.checked += 1
        if fp_binom(b, a, p).residue != _exact_binom(b, a) % p:
            rep.fail({"b": b, "a": a})
    return [rep]


def job_restricted(p: int, mode_bound: int) -> list:
    data = sl2()
    return [data.check_structure(), data.check_restricted(p),
            verify_restricted(data, p, mode_bound)]


def job_state_field(p: int, kappa, depth: int, mode_bound: int) -> list:
    from modvertex.fields import check_borcherds
    from modvertex.fock import VacuumV
    from modvertex.pcenter import verify_state_field

    out = [verify_state_field(p, kappa, depth, mode_bound=mode_bound)]
    m = VacuumV(sl2(), p, kappa)
    states = [{mono: 1} for mono in m.basis_enumerate(2)]
    probes = [{mono: 1} for mono in m.basis_enumerate(2)]
    rep = CheckReport(f"borcherds(p={p},kappa={kappa})")
    for a in states:
        for b in states:
            for mm in (-1, 0, 1):
                for nn in (-1, 0, 1):
                    rep.merge(check_borcherds(a, b, mm, nn, probes, m))
    out.append(rep)
    return out


def job_iota(p: int, kappa, depth: int, mode_bound: int) -> list:
    from modvertex.pcenter import verify_iota_commutes_Y
    return [verify_iota_commutes_Y(p, kappa, depth, mode_bound=mode_bound)]


def job_centrality(p: int, kappa, depth: int, mode_bound: int) -> list:
    from modvertex.pcenter import verify_centrality, verify_free_pcenter
    return [verify_centrality(p, kappa, depth, mode_bound=mode_bound),
            verify_free_pcenter(p, min(depth, 4), mode_bound=mode_bound)]


def job_wff(p: int, kappa, depth: int, mode_bound: int) -> list:
    from modvertex.wff import verify_wff_relations
    return [verify_wff_relations(p, kappa, mode_bound, depth)]


def job_pcenter_images(p: int, kappa, depth: int, mode_bound: int) -> list:
    from modvertex.pcenter import verify_wff_pcenter_images
    return [verify_wff_pcenter_images(p, kappa, depth, mode_bound=mode_bound)]


def job_phi(p: int) -> list:
    from modvertex.wff import verify_phi_pformula
    return [verify_phi_pformula(p)]


def job_character(p: int, depth: int) -> list:
    from modvertex.characters import verify_series_identities
    from modvertex.wakimoto import verify_mathieu_character
    return [verify_mathieu_character(p, depth), verify_series_identities(p, max(depth, 10))]


def job_singular(p: int, depth: int, weight=None) -> list:
    from modvertex.wakimoto import (build_baby_wakimoto, minus_rho_module, singular_census,
                                    singular_vectors, vacuum_view, verify_g_relations,
                                    verify_well_defined)
    w = minus_rho_module(p) if weight is None else build_baby_wakimoto((weight,), p=p)
    census = singular_census(w, depth)
    rep = CheckReport(f"singular-census({w!r},depth={depth})")
    rep.checked = 1
    if census["deeper"]:
        rep.fail({"singular": census["deeper"][:3]})
    top = [wt for d, wt, _ in census["depth0"]]
    if top != [(0,)] or len(census["depth0"][0][2]) != 1:
        rep.fail({"highest_weight_line": census["depth0"]})
    rep.details["depth0"] = census["depth0"]
    control = CheckReport(f"positive-control(V^0,p={p})")
    control.checked = 1
    found = singular_vectors(vacuum_view(p, 0), 1, min_depth=1)
    control.details["found"] = found
    e_line = {((("e", -1), 1),): 1}
    if not any(e_line in ker for _, _, ker in found):
        control.fail({"expected": "e_-1|0> singular at kappa = 0", "found": found})
    return [rep, control, verify_well_defined(w, min(depth, 3)),
            verify_g_relations(w, min(depth, 3))]


def job_center_probe(p: int, kappa, depth: int) -> list:
    from modvertex.wakimoto import center_probe
    res = center_probe("VacuumV", p, kappa, depth)
    rep = CheckReport(f"center-probe(p={p},kappa={kappa},depth={depth})")
    rep.checked = len(res["table"])
    rep.details = res
    if not res["commutant_ge_z0"] or not res["z0_in_commutant"]:
        rep.fail(res["table"])
    return [rep]


def expand_jobs(cfg: SuiteConfig) -> list:
    jobs = []
    for s in cfg.suites():
        d = cfg.depth_for(s)
        for p in cfg.primes(s):
            if s == "lucas":
                jobs.append((s, f"p={p}", job_lucas, dict(p=p, seed=cfg.seed,
                                                          extra_random=cfg.extra_random)))
            elif s == "restricted":
                jobs.append((s, f"p={p}", job_restricted,
                             dict(p=p, mode_bound=cfg.mode_bound_for(s))))
            elif s == "phi-pformula":
                jobs.append((s, f"p={p}", job_phi, dict(p=p)))
            elif s == "character":
                jobs.append((s, f"p={p}", job_character, dict(p=p, depth=d)))
            elif s == "singular":
                jobs.append((s, f"p={p}", job_singular, dict(p=p, depth=d, weight=cfg.weight)))
            else:
                fn = {"state-field": job_state_field, "iota-commute": job_iota,
                      "centrality": job_centrality, "wff-relations": job_wff,
                      "pcenter-images": job_pcenter_images,
                      "center-probe": job_center_probe}[s]
                seen = set()
                for tok in cfg.kappas(s):
                    kappa = parse_kappa(tok, p)
                    if kappa in seen and not isinstance(kappa, KPoly):
                        continue
                    seen.add(kappa)
                    kw = dict(p=p, kappa=kappa, depth=d)
                    if s != "center-probe":
                        kw["mode_bound"] = cfg.mode_bound_for(s)
                    jobs.append((s, f"p={p},kappa={kappa}", fn, kw))
    return jobs


def run_job(job):
    _, _, fn, kwargs = job
    return fn(**kwargs)
