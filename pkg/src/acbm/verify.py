"""Named invariant suites.

Each suite replays a block of the theory on seeded fixtures and returns
a CheckReport; one check per invariant, aggregated over fixtures.  The
CLI `verify` command and the test suite both drive these.
"""

from __future__ import annotations

import numpy as np
from gmpy2 import mpq

from . import sampling
from .checks import CheckReport
from .family import (
    AnsatzParams,
    FamilyParams,
    ansatz_torsion,
    canonical_torsion_closed,
    canonical_torsion_from_F,
    dual_torsion,
    hayden_Q,
    is_canonical_identity,
    naturality_check,
    phiB_delta,
    pi_family,
    plug,
    solve_natural_constraints,
    standard_torsion,
    torsion_family,
)
from .fundamental import build_class_F, classify_F, lee_forms, validate_F
from .liealg import (
    fundamental_from_nabla,
    jacobi_check,
    koszul_levi_civita,
    levi_civita_report,
    make_lie_algebra,
    survey_random_lie_algebras,
    verify_natural_connection,
)
from .linalg import rank_of
from .structure import (
    associated_metric,
    canonical_structure,
    change_basis,
    validate_structure,
)
from .taxonomy import (
    CLASS_IDS,
    class_predicate,
    class_subspace_basis,
    class_subspace_basis_literal,
    classify_torsion,
    sum_membership,
    torsion_forms,
    torsion_space_basis,
)
from .tensor import cyclic_sum, eq, first_nonzero, is_zero, pullback, zeros


class _Tally:
    __slots__ = ("total", "failed", "first_where")

    def __init__(self):
        self.total = 0
        self.failed = 0
        self.first_where = None

    def hit(self, ok: bool, where=None):
        self.total += 1
        if not ok:
            self.failed += 1
            if self.first_where is None:
                self.first_where = where


class _Suite:
    """Collects per-invariant tallies, flushes to a CheckReport."""

    def __init__(self, subject: str):
        self.report = CheckReport(subject=subject)
        self._tallies: dict[str, _Tally] = {}

    def hit(self, name: str, ok: bool, where=None):
        self._tallies.setdefault(name, _Tally()).hit(bool(ok), where)

    def hit_zero(self, name: str, residual):
        idx = first_nonzero(residual)
        self.hit(name, idx is None, idx)

    def done(self) -> CheckReport:
        for name, t in self._tallies.items():
            self.report.add(
                name,
                t.failed == 0,
                where=t.first_where,
                detail=f"{t.total - t.failed}/{t.total}",
            )
        return self.report


def suite_structure(n: int, count: int, seed: int = 0) -> CheckReport:
    su = _Suite("structure")
    s = canonical_structure(n)
    su.hit("reference structure satisfies all axioms", validate_structure(s).ok)

    s_assoc = associated_metric(s)
    su.hit("swapped-in associated metric satisfies all axioms",
           validate_structure(s_assoc).ok)
    ee = np.multiply.outer(s.eta, s.eta)
    back = associated_metric(s_assoc).g - (-(s.g - ee) + ee)
    su.hit_zero("double associate flips the horizontal metric", back)

    for k in range(count):
        P = sampling.unimodular(s.dim, seed * 1009 + k)
        s2 = change_basis(s, P)
        su.hit("axioms survive a basis change", validate_structure(s2).ok, where=(k,))
        lhs = associated_metric(s2).g
        rhs = pullback(pullback(s_assoc.g, P, 0), P, 1)
        su.hit_zero("associated metric transforms covariantly", lhs - rhs)
    return su.done()


def _tracewise_relation(forms, s) -> tuple[bool, bool]:
    """(horizontal relation holds, full-trace relation holds)."""
    phi2 = s.cached("phi2", lambda: np.tensordot(s.phi, s.phi, axes=([1], [0])))
    h = np.dot(s.phi.T, forms.theta_star_h) + np.dot(phi2.T, forms.theta_h)
    full = np.dot(s.phi.T, forms.theta_star_full) + np.dot(phi2.T, forms.theta_full)
    return is_zero(h), is_zero(full)


def suite_fundamental(n: int, count: int, seed: int = 0) -> CheckReport:
    su = _Suite("fundamental")
    s = canonical_structure(n)
    d = s.dim

    su.hit("zero tensor lies in every class",
           all(classify_F(zeros(d, d, d), s).values()))

    for k in range(count):
        base = seed * 2003 + k
        cd = sampling.main_class_data(s, base)
        f = build_class_F("MAIN", cd, s)
        rep = validate_F(f, s)
        su.hit("defining symmetries of the fundamental tensor", rep.ok, where=(k,))
        forms = lee_forms(f, s)
        su.hit("omega annihilates the distinguished vector",
               np.dot(forms.omega, s.xi) == 0, where=(k,))
        su.hit_zero("horizontal trace forms dualize exactly",
                    np.dot(s.g, forms.a) - forms.theta_h)
        su.hit_zero("starred trace form dualizes exactly",
                    np.dot(s.g, forms.a_star) - forms.theta_star_h)
        su.hit_zero("vertical trace form dualizes exactly",
                    np.dot(s.g, forms.a_hat) - forms.omega)
        hor, full = _tracewise_relation(forms, s)
        su.hit("horizontal trace relation", hor, where=(k,))
        su.hit("full-trace relation holds exactly when omega vanishes",
               full == is_zero(forms.omega), where=(k,))
        su.hit("mixed fixture recognized by its class test",
               classify_F(f, s)["MAIN"], where=(k,))

        tag = ("F1", "F4", "F5", "F11")[k % 4]
        cdp = sampling.class_data_random(tag, s, base)
        fp = build_class_F(tag, cdp, s)
        cls = classify_F(fp, s)
        su.hit("pure fixture recognized by its own class test", cls[tag], where=(k,))
        su.hit("pure fixture lies in the mixed class", cls["MAIN"], where=(k,))
        others = [t for t in ("F1", "F4", "F5", "F11") if t != tag]
        su.hit("pure fixture rejected by the other class tests",
               not any(cls[t] for t in others), where=(k,))
    return su.done()


def suite_family(n: int, count: int, seed: int = 0) -> CheckReport:
    su = _Suite("family")
    s = canonical_structure(n)
    pi = pi_family(s)

    named = {"pi1": pi.pi1, "pi2": pi.pi2, "pi3": pi.pi3, "pi4": pi.pi4, "pi5": pi.pi5}
    for _, blk in named.items():
        su.hit_zero("building blocks antisymmetric in the first pair",
                    blk + blk.transpose(1, 0, 2, 3))
        su.hit_zero("building blocks antisymmetric in the second pair",
                    blk + blk.transpose(0, 1, 3, 2))
        su.hit_zero("building blocks satisfy the cyclic first-slot identity",
                    blk + blk.transpose(1, 2, 0, 3) + blk.transpose(2, 0, 1, 3))
    bridge_l = pullback(pi.pi3 + pi.pi5, s.phi, 3)
    bridge_r = pi.pi1 - pi.pi2 - pi.pi4
    su.hit_zero("building-block bridge under the endomorphism", bridge_l - bridge_r)

    for k in range(count):
        base = seed * 3001 + k
        cd = sampling.main_class_data(s, base)
        f = build_class_F("MAIN", cd, s)
        forms = lee_forms(f, s)
        p = sampling.rand_alpha(base)
        t = torsion_family(p, forms, s)
        q = hayden_Q(t)
        su.hit("family member induces a compatible connection",
               naturality_check(q, f, s).ok, where=(k,))
        su.hit_zero("family torsion has vanishing cyclic sum", cyclic_sum(t))
        su.hit_zero("difference tensor is the torsion read backwards",
                    q - np.transpose(t, (2, 1, 0)))
        t_a = ansatz_torsion(AnsatzParams.from_alpha(p, n), forms, s)
        su.hit_zero("coefficient ansatz reproduces the family member", t - t_a)

        t0 = canonical_torsion_from_F(f, s)
        su.hit_zero("closed form of the distinguished torsion",
                    canonical_torsion_closed(forms, s) - t0)
        su.hit_zero("family at the distinguished parameters",
                    torsion_family(FamilyParams.canonical(n), forms, s) - t0)
        su.hit_zero("twist-difference route to the distinguished torsion",
                    phiB_delta(f, s).torsion() - t0)
        avg = (standard_torsion(forms, s) + dual_torsion(forms, s)) * mpq(1, 2)
        su.hit_zero("distinguished torsion is the mean of the special pair", avg - t0)
        su.hit("identity-based test matches tensor equality with the distinguished torsion",
               is_canonical_identity(t, s) == eq(t, t0), where=(k,))
        su.hit("identity-based test accepts the distinguished torsion",
               is_canonical_identity(t0, s), where=(k,))
    return su.done()


def suite_solver(n: int, count: int, seed: int = 0) -> CheckReport:
    su = _Suite("solver")
    s = canonical_structure(n)
    sol = solve_natural_constraints(s, sample_count=max(8, min(count, 40)), seed=seed)
    su.hit("solution space is four dimensional", sol.solution_dim == 4)
    su.hit("two coefficients never enter the torsion", sorted(sol.pinned) == [14, 15])

    e = [0] * 18

    def functional(*pairs):
        v = list(e)
        for j, c in pairs:
            v[j] = c
        return sol.functional_value(v)

    half = mpq(1, 2 * n)
    su.hit("coefficient 9 forced to 1/2n", functional((8, 1)) == half)
    su.hit("coefficient 4 forced to -1/2n", functional((3, 1)) == -half)
    su.hit("coefficient 18 forced to -1", functional((17, 1)) == -1)
    su.hit("difference of coefficients 2 and 7 forced to 1/2n",
           functional((1, 1), (6, -1)) == half)
    su.hit("sum of coefficients 1 and 8 forced to zero",
           functional((0, 1), (7, 1)) == 0)
    su.hit("difference of coefficients 5 and 12 forced to zero",
           functional((4, 1), (11, -1)) == 0)
    su.hit("sum of coefficients 6 and 11 forced to zero",
           functional((5, 1), (10, 1)) == 0)
    for j in (2, 9, 12, 13, 16):
        su.hit("isolated coefficients forced to zero", functional((j, 1)) == 0)

    for k in range(min(count, 10)):
        p = sampling.rand_alpha(seed * 4001 + k)
        su.hit("four-parameter members satisfy every constraint",
               sol.contains(AnsatzParams.from_alpha(p, n)), where=(k,))
    su.hit("distinguished member satisfies every constraint",
           sol.contains(AnsatzParams.from_alpha(FamilyParams.canonical(n), n)))
    return su.done()


def suite_taxonomy(n: int, count: int, seed: int = 0) -> CheckReport:
    su = _Suite("taxonomy")
    s = canonical_structure(n)
    d = s.dim

    space = torsion_space_basis(s)
    all_dims = 0
    flat = []
    for cid in CLASS_IDS:
        basis = class_subspace_basis(cid, s)
        all_dims += len(basis)
        flat.extend(b.reshape(d ** 3) for b in basis)
        su.hit("projector bases satisfy their own class conditions",
               all(class_predicate(cid, b, s) for b in basis))
        if d <= 5:
            lit = class_subspace_basis_literal(cid, s)
            su.hit("independent condition-solver route agrees in rank",
                   len(lit) == len(basis))
            joint = [b.reshape(d ** 3) for b in basis] + [b.reshape(d ** 3) for b in lit]
            su.hit("independent condition-solver route agrees in span",
                   rank_of(joint) == len(basis))
    su.hit("class subspaces decompose the torsion space",
           all_dims == len(space) and rank_of(flat) == len(space))

    for k in range(count):
        base = seed * 5003 + k
        cd = sampling.main_class_data(s, base)
        f = build_class_F("MAIN", cd, s)
        forms = lee_forms(f, s)
        t0 = canonical_torsion_from_F(f, s)
        su.hit("distinguished torsion lands in the three-class sum",
               sum_membership(t0, ("T13", "T31", "T41"), s).member, where=(k,))
        su.hit("special pair lands in the four-class sum",
               sum_membership(standard_torsion(forms, s),
                              ("T11", "T13", "T31", "T41"), s).member
               and sum_membership(dual_torsion(forms, s),
                                  ("T11", "T13", "T31", "T41"), s).member,
               where=(k,))

        tag, want = (("F1", "T13"), ("F4", "T31"), ("F5", "T31"), ("F11", "T41"))[k % 4]
        cdp = sampling.class_data_random(tag, s, base)
        fp = build_class_F(tag, cdp, s)
        t0p = canonical_torsion_from_F(fp, s)
        su.hit("pure classes map to their torsion classes",
               class_predicate(want, t0p, s), where=(k,))
        tf = torsion_forms(t0p, s)
        fl = lee_forms(fp, s)
        if tag == "F1":
            su.hit("first pure class keeps a nonzero trace form",
                   not is_zero(tf.t), where=(k,))
        elif tag == "F4":
            su.hit("second pure class kills the trace form",
                   is_zero(tf.t) and not is_zero(tf.t_star), where=(k,))
            su.hit("second pure class trace coefficient",
                   np.dot(tf.t_star, s.xi) == -np.dot(fl.theta_h, s.xi), where=(k,))
        elif tag == "F5":
            su.hit("third pure class kills the starred trace form",
                   is_zero(tf.t_star) and not is_zero(tf.t), where=(k,))
            su.hit("third pure class trace coefficient",
                   np.dot(tf.t, s.xi) == np.dot(fl.theta_star_h, s.xi), where=(k,))
        else:
            su.hit("fourth pure class collapses the trace onto the vertical form",
                   is_zero(tf.t_star) and not is_zero(tf.t_hat)
                   and eq(tf.t, tf.t_hat), where=(k,))
            su.hit_zero("fourth pure class vertical coefficient",
                        tf.t_hat + np.dot(s.phi.T, fl.omega))
    return su.done()


def _solvable_lie(n: int):
    """[xi, e_i] = e_i on every horizontal basis vector; Jacobi is immediate."""
    d = 2 * n + 1
    c = zeros(d, d, d)
    for i in range(d - 1):
        c[d - 1, i, i] = mpq(1)
        c[i, d - 1, i] = mpq(-1)
    return make_lie_algebra(d, c)


def _heisenberg(n: int):
    d = 2 * n + 1
    c = zeros(d, d, d)
    for i in range(n):
        c[2 * i, 2 * i + 1, d - 1] = mpq(1)
        c[2 * i + 1, 2 * i, d - 1] = mpq(-1)
    return make_lie_algebra(d, c)


def suite_liegroup(n: int, count: int, seed: int = 0) -> CheckReport:
    su = _Suite("liegroup")
    s = canonical_structure(n)
    d = s.dim

    fixtures = {
        "abelian": make_lie_algebra(d, zeros(d, d, d)),
        "solvable": _solvable_lie(n),
        "nilpotent": _heisenberg(n),
    }
    for name, lie in fixtures.items():
        su.hit("bracket tables satisfy the Jacobi identity",
               jacobi_check(lie).ok)
        gamma = koszul_levi_civita(lie, s)
        su.hit("torsion-free metric connection from the bracket",
               levi_civita_report(lie, s).ok)
        f = fundamental_from_nabla(gamma, s)
        su.hit("derived fundamental tensor satisfies its symmetries",
               validate_F(f, s).ok)

        eta_grad = -np.tensordot(gamma, s.eta, axes=([2], [0]))
        xi_grad = np.tensordot(gamma, s.xi, axes=([1], [0]))
        su.hit_zero("covariant derivative of the one-form matches the vector route",
                    eta_grad - np.tensordot(xi_grad, s.g, axes=([1], [0])))
        f_xi = np.tensordot(pullback(f, s.phi, 1), s.xi, axes=([2], [0]))
        su.hit_zero("one-form derivative recovered from the fundamental tensor",
                    eta_grad - f_xi)

        q0 = phiB_delta(f, s).q
        rep = verify_natural_connection(lie, s, q0)
        su.hit("twist-difference connection is parallel for the whole structure", rep.ok)
        forms = lee_forms(f, s)
        hor, full = _tracewise_relation(forms, s)
        su.hit("horizontal trace relation on derived tensors", hor)
        su.hit("full-trace relation on derived tensors tracks omega",
               full == is_zero(forms.omega))
        if classify_F(f, s)["MAIN"]:
            p = sampling.rand_alpha(seed * 6007 + 1)
            q = hayden_Q(torsion_family(p, forms, s))
            su.hit("family connections are parallel on mixed-class fixtures",
                   verify_natural_connection(lie, s, q).ok)
            t0 = canonical_torsion_from_F(f, s)
            su.hit_zero("distinguished torsion via the twist-difference route",
                        phiB_delta(f, s).torsion() - t0)

    if n == 1:
        recs = survey_random_lie_algebras(1, max(count, 20), seed=seed)
        su.hit("seeded bracket survey finds admissible algebras", len(recs) > 0)
        hits = {tag: 0 for tag in ("F1", "F4", "F5", "F11", "MAIN")}
        for r in recs:
            if r["f_zero"]:
                continue
            for tag in hits:
                if r["classes"].get(tag):
                    hits[tag] += 1
        su.hit("survey reaches the mixed class", hits["MAIN"] > 0)
        su.hit("survey reaches the purely vertical class", hits["F11"] > 0)
    return su.done()


SUITES = {
    "structure": suite_structure,
    "fundamental": suite_fundamental,
    "family": suite_family,
    "solver": suite_solver,
    "taxonomy": suite_taxonomy,
    "liegroup": suite_liegroup,
}


def run_suites(n: int, count: int, seed: int = 0, names=None) -> list[CheckReport]:
    chosen = list(SUITES) if names is None else list(names)
    out = []
    for name in chosen:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}")
        out.append(SUITES[name](n, count, seed))
    return out
