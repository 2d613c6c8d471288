"""Towers of cyclic ell-power covers and their Iwasawa invariants.

The characteristic series of a tower with voltage alpha is
f(T) = det(D - A_rho) where A_rho carries (1+T)^(alpha(s)) entries.  With
integer voltages every entry is an integer Laurent polynomial in u = 1 + T,
so f = P(u) / u^K for an integer polynomial P computed exactly by point
evaluation and Newton interpolation.  That finite object yields mu and
lambda exactly: mu is the minimal ell-valuation of the coefficients of P
(the basis change between powers of u and powers of T is unimodular, and
u^(-K) is a unit power series), and lambda(f) is the multiplicity of the
root u = 1 of P/ell^mu over F_ell.

Truncated ell-adic voltages take the generic route: a Berkowitz determinant
over the truncated series ring and windowed mu/lambda extraction with
adaptive cap growth.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .characters import Character, all_characters
from .cyclotomic import CyclotomicElement
from .errors import (DisconnectedError, GiwaError, PrecisionError,
                     ResourceLimitError, UnsupportedError, ValidationError)
from .graphs import (Multigraph, Orientation, bareiss_determinant,
                     euler_characteristic, is_connected, spanning_tree_count)
from .groups import FiniteGroup, cyclic, product
from .polys import interpolate_at_integers
from .series import (PadicTruncated, TruncatedPowerSeries, binomial_series,
                     mu_lambda, ord_int, ring_determinant)
from .voltage import (CoverMap, DerivedGraph, VoltageAssignment, derived_graph,
                      voltage_assignment, voltage_connectedness)

DEFAULT_CAP = 64
MAX_CAP = 2048
DEFAULT_VERTEX_CAP = 1000


class NotStabilizedError(GiwaError):
    """The valuation sequence has no 3-point suffix fitting mu*ell^n + lambda*n + nu."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            return False
        p += 1 if p == 2 else 2
    return True


@dataclass(frozen=True)
class Tower:
    """A base graph with a voltage into the ell-adic integers.

    Level n of the tower is the derived graph of the voltage reduced mod
    ell^n.  The base must have nonzero Euler characteristic; connectedness
    of the levels is certified separately (see certify_levels_connected).
    """

    graph: Multigraph
    orientation: Orientation
    ell: int
    values: dict = field(repr=False)   # orientation edge index -> int | PadicTruncated

    def __post_init__(self):
        if not _is_prime(self.ell):
            raise ValidationError(f"ell must be a prime, got {self.ell}")
        if euler_characteristic(self.graph) == 0:
            raise ValidationError(
                "tower base must have nonzero Euler characteristic")
        if not is_connected(self.graph):
            raise DisconnectedError("tower base must be connected")
        chosen = set(self.orientation.edges)
        if {d >> 1 for d in chosen} != set(range(self.graph.undirected_edge_count)):
            raise ValidationError("orientation must cover every undirected edge")
        for d in chosen:
            if d not in self.values:
                raise ValidationError(
                    f"missing voltage on {self.graph.edge_label(d)}")

    @property
    def exact(self) -> bool:
        return all(isinstance(v, int) for v in self.values.values())

    def value_mod(self, d: int, n: int) -> int:
        """The voltage of orientation edge d reduced mod ell^n."""
        v = self.values[d]
        mod = self.ell ** n
        if isinstance(v, int):
            return v % mod
        if v.precision < n:
            raise PrecisionError(
                f"voltage known mod {self.ell}^{v.precision} cannot be reduced mod {self.ell}^{n}")
        return v.value % mod


def tower(graph: Multigraph, ell: int, values_by_edge_id: Mapping,
          orientation: Orientation | None = None) -> Tower:
    """Build a tower from voltages keyed by undirected edge ids."""
    if orientation is None:
        orientation = graph.default_orientation()
    id_to_edge = {graph.edge_ids[d >> 1]: d for d in orientation}
    values = {}
    for eid, v in values_by_edge_id.items():
        if eid not in id_to_edge:
            raise ValidationError(f"voltage names unknown edge {eid!r}")
        values[id_to_edge[eid]] = v
    return Tower(graph=graph, orientation=orientation, ell=ell, values=values)


def level_group(t: Tower, n: int) -> FiniteGroup:
    return cyclic(t.ell ** n)


def level_assignment(t: Tower, n: int) -> VoltageAssignment:
    G = level_group(t, n)
    values = {d: t.value_mod(d, n) for d in t.orientation}
    return VoltageAssignment(graph=t.graph, orientation=t.orientation,
                             group=G, values=values)


def tower_level(t: Tower, n: int) -> DerivedGraph:
    """The level-n derived graph, with connectedness verified."""
    if n < 0:
        raise ValidationError("level must be >= 0")
    va = level_assignment(t, n)
    dg = derived_graph(va)
    if n > 0:
        ok, generated = voltage_connectedness(va)
        if not ok:
            raise DisconnectedError(
                f"level {n} is disconnected: voltages generate a subgroup of order "
                f"{len(generated)} inside Z/{t.ell}^{n}")
    return dg


def certify_levels_connected(t: Tower) -> bool:
    """All levels are connected iff level 1 is.

    The image subgroup of Z/ell^n is everything exactly when it is
    everything mod ell (Nakayama for cyclic ell-groups), so one check at
    level 1 certifies every level of the tower.
    """
    ok, _ = voltage_connectedness(level_assignment(t, 1))
    return ok


# ---------------------------------------------------------------------------
# Characteristic series


def _laurent_matrix(t: Tower) -> list:
    """Entries of D - A_rho as integer Laurent polynomials {exp: coeff} in u."""
    g = t.graph.vertex_count
    ent = [[dict() for _ in range(g)] for _ in range(g)]
    val = [0] * g
    for s in t.orientation:
        i, j = t.graph.origin[s], t.graph.terminus[s]
        a = t.values[s]
        val[i] += 1
        val[j] += 1
        ent[i][j][a] = ent[i][j].get(a, 0) - 1
        ent[j][i][-a] = ent[j][i].get(-a, 0) - 1
    for i in range(g):
        ent[i][i][0] = ent[i][i].get(0, 0) + val[i]
    return ent


@dataclass(frozen=True)
class LaurentDeterminant:
    """f = P(u) / u^K with P an exact integer polynomial, u = 1 + T."""

    coeffs: tuple      # monomial coefficients of P, low degree first
    shift: int         # K

    def series(self, cap: int) -> TruncatedPowerSeries:
        from .series import binomial_coefficients
        out = [0] * (cap + 1)
        for d, c in enumerate(self.coeffs):
            if c == 0:
                continue
            for k, b in enumerate(binomial_coefficients(d - self.shift, cap)):
                out[k] += c * b
        return TruncatedPowerSeries(out)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def mu(self, ell: int) -> int:
        if self.is_zero():
            raise ValidationError("mu of the zero series")
        return min(ord_int(c, ell) for c in self.coeffs if c != 0)

    def lambda_f(self, ell: int) -> int:
        """Multiplicity of the root u = 1 of P / ell^mu over F_ell.

        This equals lambda of the power series f since u^(-K) is a unit of
        the Iwasawa algebra and the T/u coefficient bases differ by a
        unimodular triangular matrix.
        """
        m = self.mu(ell)
        red = [(c // ell ** m) % ell for c in self.coeffs]
        mult = 0
        while any(red):
            # synthetic division by (u - 1) over F_ell
            acc = 0
            quot = [0] * len(red)
            for d in range(len(red) - 1, -1, -1):
                acc = (acc + red[d]) % ell
                quot[d] = acc
            if acc % ell != 0:
                break
            # remainder is acc at d = 0; acc == P(1); division valid iff 0
            red = quot[1:]
            mult += 1
        return mult


def _laurent_determinant(t: Tower) -> LaurentDeterminant:
    ent = _laurent_matrix(t)
    g = t.graph.vertex_count
    shift = 0
    degbound = 0
    for i in range(g):
        mn = min((min(d) for d in ent[i] if d), default=0)
        row_shift = max(0, -mn)
        shift += row_shift
        if row_shift:
            for j in range(g):
                ent[i][j] = {e + row_shift: c for e, c in ent[i][j].items()}
        degbound += max((max(d) for d in ent[i] if d), default=0)
    samples = []
    for x in range(degbound + 1):
        powers = {}
        M = []
        for i in range(g):
            row = []
            for j in range(g):
                acc = 0
                for e, c in ent[i][j].items():
                    p = powers.get(e)
                    if p is None:
                        p = x ** e
                        powers[e] = p
                    acc += c * p
                row.append(acc)
            M.append(row)
        samples.append(bareiss_determinant(M))
    coeffs = interpolate_at_integers(samples)
    return LaurentDeterminant(coeffs=tuple(coeffs), shift=shift)


def _assert_vanishes_at_origin(ld: LaurentDeterminant) -> None:
    # the constant term of f is P(1), which is det of a Laplacian, hence 0
    assert sum(ld.coeffs) == 0, "characteristic series must vanish at T = 0"


def characteristic_series(t: Tower, cap: int = DEFAULT_CAP) -> TruncatedPowerSeries:
    """f(T) = det(D - A_rho) through degree cap.

    Integer voltages use the exact Laurent-polynomial kernel; truncated
    ell-adic voltages build the series matrix and use the division-free
    determinant.
    """
    if t.exact:
        ld = _laurent_determinant(t)
        if not ld.is_zero():
            _assert_vanishes_at_origin(ld)
        return ld.series(cap)
    return _padic_characteristic_series(t, cap)


def _padic_cap_limit(ell: int, precision: int) -> int:
    """Largest cap leaving at least one certified digit after the k! division."""
    from .series import _ord_factorial
    m = 1
    while _ord_factorial(m + 1, ell) <= precision - 1:
        m += 1
    return m


def _padic_characteristic_series(t: Tower, cap: int) -> TruncatedPowerSeries:
    g = t.graph.vertex_count
    zero = TruncatedPowerSeries.zero(cap)
    M = [[zero for _ in range(g)] for _ in range(g)]
    val = [0] * g
    for s in t.orientation:
        i, j = t.graph.origin[s], t.graph.terminus[s]
        a = t.values[s]
        val[i] += 1
        val[j] += 1
        neg = -a if isinstance(a, int) else PadicTruncated(a.ell, a.precision, -a.value)
        M[i][j] = M[i][j] - binomial_series(a, cap)
        M[j][i] = M[j][i] - binomial_series(neg, cap)
    for i in range(g):
        M[i][i] = M[i][i] + val[i]
    return ring_determinant(M)


# ---------------------------------------------------------------------------
# Invariants


@dataclass(frozen=True)
class IwasawaData:
    mu: int
    lam: int                      # lambda of the tower = lambda(f) - 1
    nu: int | None = None
    n0: int | None = None

    def __str__(self):
        parts = [f"mu={self.mu}", f"lambda={self.lam}"]
        if self.nu is not None:
            parts.append(f"nu={self.nu}")
        if self.n0 is not None:
            parts.append(f"(n>={self.n0})")
        return " ".join(parts)


def iwasawa_invariants(t: Tower, cap: int = DEFAULT_CAP,
                       max_cap: int = MAX_CAP) -> IwasawaData:
    """mu and lambda of the tower, read off the characteristic series.

    lambda of the tower is lambda(f) - 1.  Exact integer voltages give
    certified answers from the finite Laurent form; truncated voltages grow
    the cap adaptively and report precision exhaustion honestly.
    """
    if not certify_levels_connected(t):
        raise DisconnectedError(
            "tower levels are disconnected; invariants are undefined")
    if t.exact:
        ld = _laurent_determinant(t)
        if ld.is_zero():
            raise ValidationError(
                "characteristic series is identically zero (degenerate voltage)")
        mu = ld.mu(t.ell)
        lam_f = ld.lambda_f(t.ell)
        return IwasawaData(mu=mu, lam=lam_f - 1)
    # truncated voltages: the cap is bounded by the precision budget, since
    # each binomial coefficient burns ord_ell(cap!) guard digits
    min_prec = min(v.precision for v in t.values.values())
    cap = min(cap, _padic_cap_limit(t.ell, min_prec))
    while True:
        f = _padic_characteristic_series(t, cap)
        try:
            mu, lam_f = mu_lambda(f, t.ell)
            return IwasawaData(mu=mu, lam=lam_f - 1)
        except PrecisionError:
            limit = min(max_cap, _padic_cap_limit(t.ell, min_prec))
            if cap >= limit:
                raise PrecisionError(
                    f"mu possibly positive beyond the working precision "
                    f"(cap {cap}, voltage precision {min_prec})")
            cap = min(2 * cap, limit)


def kappa_ord_sequence(t: Tower, n_max: int, factor: bool = False,
                       vertex_cap: int = DEFAULT_VERTEX_CAP) -> list:
    """[(n, kappa_n or None, ord_ell(kappa_n), factorization or None)] for n = 0..n_max.

    kappa is computed by the matrix-tree theorem on each level graph; levels
    whose vertex count would exceed the cap raise a resource error.
    """
    out = []
    for n in range(n_max + 1):
        n_vertices = t.graph.vertex_count * t.ell ** n
        if n_vertices > vertex_cap:
            raise ResourceLimitError(
                f"level {n} has {n_vertices} vertices, over the cap {vertex_cap} "
                f"(set GIWA_VERTEX_CAP to raise)")
        dg = tower_level(t, n)
        kappa = spanning_tree_count(dg.graph)
        ordk = ord_int(kappa, t.ell)
        fac = factor_integer(kappa) if factor else None
        out.append((n, kappa, 0 if ordk is None else ordk, fac))
    return out


def factor_integer(n: int, trial_limit: int = 1_000_000) -> list:
    """Trial-division factorization [(prime, exponent)]; large cofactors kept whole."""
    if n == 0:
        return [(0, 1)]
    out = []
    if n < 0:
        out.append((-1, 1))
        n = -n
    p = 2
    while p * p <= n and p <= trial_limit:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def format_factorization(factors: list) -> str:
    return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in factors) or "1"


def fit_iwasawa(ords: list, start_n: int, ell: int) -> tuple:
    """Fit ord(kappa_n) = mu ell^n + lambda n + nu on the largest suffix.

    Values must be consecutive in n starting at start_n.  mu is forced by
    second differences and must be a nonnegative integer, lambda and nu
    integers; at least three points must fit.  Returns (mu, lambda, nu, n0).
    """
    if len(ords) < 3:
        raise ValidationError("need at least three consecutive values")
    for i0 in range(len(ords) - 2):
        n0 = start_n + i0
        o = ords[i0:]
        d1 = o[1] - o[0]
        d2 = o[2] - o[1]
        denom = ell ** n0 * (ell - 1) ** 2
        mu, rem = divmod(d2 - d1, denom)
        if rem or mu < 0:
            continue
        lam = d1 - mu * ell ** n0 * (ell - 1)
        nu = o[0] - mu * ell ** n0 - lam * n0
        if all(o[i] == mu * ell ** (n0 + i) + lam * (n0 + i) + nu
               for i in range(len(o))):
            return mu, lam, nu, n0
    raise NotStabilizedError(
        "no 3-point suffix fits mu*ell^n + lambda*n + nu exactly")


# ---------------------------------------------------------------------------
# Pullback towers and the Kida identity


def lift_tower(t: Tower, p: CoverMap) -> Tower:
    """Pull the tower voltage back along a cover: orientation p^(-1)(S), value alpha o p."""
    chosen = set(t.orientation.edges)
    lifted = tuple(d for d in range(p.source.directed_edge_count)
                   if p.edge_map[d] in chosen)
    values = {d: t.values[p.edge_map[d]] for d in lifted}
    return Tower(graph=p.source, orientation=Orientation(lifted),
                 ell=t.ell, values=values)


def _is_ell_power(n: int, ell: int) -> bool:
    while n % ell == 0:
        n //= ell
    return n == 1


def certify_pullback_connected(t: Tower, va_beta: VoltageAssignment) -> tuple:
    """All pullback levels are connected iff the combined voltage generates G x Z/ell.

    For an ell-group G the Frattini quotient of G x Z/ell^m does not depend
    on m >= 1, so by the Burnside basis theorem one generation check at
    m = 1 certifies the whole tower.  Returns (ok, generated subgroup).
    """
    G = va_beta.group
    combined_group = product(G, cyclic(t.ell))
    values = {d: (va_beta.values[d], t.value_mod(d, 1)) for d in t.orientation}
    va = VoltageAssignment(graph=t.graph, orientation=t.orientation,
                           group=combined_group, values=values)
    return voltage_connectedness(va)


@dataclass(frozen=True)
class KidaReport:
    degree: int
    base: IwasawaData
    cover: IwasawaData
    mu_equivalence: bool
    formula_checked: bool | None     # None when mu_X > 0
    formula_holds: bool | None

    @property
    def ok(self) -> bool:
        if not self.mu_equivalence:
            return False
        return self.formula_holds is not False

    def identity_string(self) -> str:
        lhs = self.cover.lam + 1
        rhs = f"{self.degree} * ({self.base.lam} + 1)"
        mark = "ok" if self.formula_holds else "FAIL"
        return f"{lhs} = {rhs}  [{mark}]"


def kida_verify(t: Tower, beta_by_edge_id: Mapping, group: FiniteGroup) -> KidaReport:
    """Check the lambda identity for the pullback of the tower along an ell-cover.

    The cover is X(G, S, beta) for an ell-group G; both towers must have all
    levels connected.  mu vanishing must transfer both ways, and when the
    base mu is zero the identity lambda_Y + 1 = [Y:X](lambda_X + 1) is
    asserted.
    """
    if not _is_ell_power(group.order, t.ell):
        raise ValidationError(
            f"|G| = {group.order} is not a power of ell = {t.ell}")
    va_beta = voltage_assignment(t.graph, group, dict(beta_by_edge_id),
                                 t.orientation)
    upstairs = derived_graph(va_beta)
    connected, _ = voltage_connectedness(va_beta)
    if not connected:
        raise DisconnectedError("the covering graph X(G, S, beta) is disconnected")
    ok, generated = certify_pullback_connected(t, va_beta)
    if not ok:
        raise DisconnectedError(
            f"pullback tower disconnected: combined voltages generate "
            f"{len(generated)} of {group.order * t.ell} elements")
    base_inv = iwasawa_invariants(t)
    lifted = lift_tower(t, upstairs.projection)
    cover_inv = iwasawa_invariants(lifted)
    mu_equiv = (base_inv.mu == 0) == (cover_inv.mu == 0)
    if base_inv.mu == 0:
        holds = cover_inv.lam + 1 == group.order * (base_inv.lam + 1)
        return KidaReport(degree=group.order, base=base_inv, cover=cover_inv,
                          mu_equivalence=mu_equiv, formula_checked=True,
                          formula_holds=holds)
    return KidaReport(degree=group.order, base=base_inv, cover=cover_inv,
                      mu_equivalence=mu_equiv, formula_checked=None,
                      formula_holds=None)


# ---------------------------------------------------------------------------
# Twisted series and the factorization identity


def twisted_characteristic_series(t: Tower, va_beta: VoltageAssignment,
                                  psi: Character, cap: int = DEFAULT_CAP
                                  ) -> TruncatedPowerSeries:
    """f_psi = det(D - A_(psi,rho)) with entries psi(beta(s)) (1+T)^(alpha(s)) + ...

    The trivial character returns the plain characteristic series; the
    coefficients otherwise live in the cyclotomic ring of the character.
    """
    if va_beta.group.cyclic_factor_orders is None:
        raise UnsupportedError("twisted series need a declared abelian group")
    if va_beta.graph is not t.graph:
        raise ValidationError("beta must live on the tower base")
    g = t.graph.vertex_count
    zero = TruncatedPowerSeries.zero(cap)
    M = [[zero for _ in range(g)] for _ in range(g)]
    val = [0] * g
    for s in t.orientation:
        i, j = t.graph.origin[s], t.graph.terminus[s]
        a = t.values[s]
        if not isinstance(a, int):
            raise UnsupportedError("twisted series require exact integer voltages")
        b = va_beta.values[s]
        val[i] += 1
        val[j] += 1
        M[i][j] = M[i][j] - binomial_series(a, cap) * psi(b)
        M[j][i] = M[j][i] - binomial_series(-a, cap) * psi.value_at_inverse(b)
    for i in range(g):
        M[i][i] = M[i][i] + val[i]
    return ring_determinant(M)


@dataclass(frozen=True)
class FactorizationReport:
    cap: int
    passed: bool
    lhs: TruncatedPowerSeries
    rhs: TruncatedPowerSeries


def factorization_check(t: Tower, beta_by_edge_id: Mapping,
                        cap: int = DEFAULT_CAP) -> FactorizationReport:
    """f_(Y, alpha o p) = prod over all characters psi of f_psi, coefficient-exact.

    Restricted to cyclic covers of degree ell, the reduction step the
    lambda identity rests on.  The product is computed in Z[zeta_ell] and
    must collapse to rational integers.
    """
    G = cyclic(t.ell)
    va_beta = voltage_assignment(t.graph, G, dict(beta_by_edge_id), t.orientation)
    connected, _ = voltage_connectedness(va_beta)
    if not connected:
        raise DisconnectedError("X(Z/ell, S, beta) must be connected")
    ok, _ = certify_pullback_connected(t, va_beta)
    if not ok:
        raise DisconnectedError("pullback tower has disconnected levels")
    upstairs = derived_graph(va_beta)
    lhs = characteristic_series(lift_tower(t, upstairs.projection), cap)
    rhs = TruncatedPowerSeries.one(cap)
    for psi in all_characters(G):
        rhs = rhs * twisted_characteristic_series(t, va_beta, psi, cap)
    ints = []
    for c in rhs.coeffs:
        if isinstance(c, CyclotomicElement):
            ints.append(c.as_int())
        else:
            ints.append(c)
    rhs_int = TruncatedPowerSeries(ints)
    return FactorizationReport(cap=cap, passed=lhs == rhs_int, lhs=lhs, rhs=rhs_int)


# ---------------------------------------------------------------------------
# Uniform pro-ell towers over the SL2 congruence kernel


@dataclass(frozen=True)
class UniformTowerReport:
    ell: int
    level: int
    base: IwasawaData                  # invariants of the beta-tower over B4
    cover: IwasawaData                 # invariants over Y_n
    lambda_expected: int               # ell^(3n) (lambda + 1) - 1
    connectedness_certified: tuple     # m values checked explicitly
    all_levels_certified: bool

    @property
    def ok(self) -> bool:
        return (self.cover.mu == 0 and self.cover.lam == self.lambda_expected
                and self.all_levels_certified)


def uniform_tower_data(ell: int, level: int) -> tuple:
    """The bouquet-of-four construction: (graph, alpha assignment, tower).

    alpha sends the first three loops to the standard SL2 congruence-kernel
    generators at the given level and the fourth loop to the identity; the
    tower voltage is 0 on the first three loops and 1 on the fourth.
    """
    from .graphs import bouquet
    from .groups import sl2_level_quotient

    X = bouquet(4)
    quot = sl2_level_quotient(ell, level)
    G = quot.group
    from .groups import sl2_generators
    a1, a2, a3 = sl2_generators(ell, level)
    alpha = {"s1": a1, "s2": a2, "s3": a3, "s4": G.identity}
    va = voltage_assignment(X, G, alpha)
    t = tower(X, ell, {"s1": 0, "s2": 0, "s3": 0, "s4": 1})
    return X, va, t


def uniform_tower_check(ell: int, level: int, explicit_m: int = 2,
                        vertex_cap: int = DEFAULT_VERTEX_CAP) -> UniformTowerReport:
    """Verify lambda_n = ell^(3n)(lambda+1) - 1 for the SL2 congruence tower.

    Builds Y_n = X(G_n, S, alpha), certifies connectedness of every stage of
    the combined tower (explicitly for m <= explicit_m, and for all m by the
    Frattini argument at m = 1), and computes the invariants over Y_n via
    the pulled-back tower.
    """
    X, va, t = uniform_tower_data(ell, level)
    G = va.group
    if G.order * X.vertex_count > vertex_cap:
        raise ResourceLimitError(
            f"Y_{level} would have {G.order} vertices, over the cap {vertex_cap}")
    base_inv = iwasawa_invariants(t)

    connected, generated = voltage_connectedness(va)
    if not connected:
        raise DisconnectedError(
            f"Y_{level} is disconnected; generators span {len(generated)} elements")

    checked = []
    for m in range(1, explicit_m + 1):
        Gm = product(G, cyclic(ell ** m))
        values = {d: (va.values[d], t.value_mod(d, m)) for d in t.orientation}
        va_m = VoltageAssignment(graph=X, orientation=t.orientation,
                                 group=Gm, values=values)
        ok, _ = voltage_connectedness(va_m)
        if not ok:
            raise DisconnectedError(
                f"combined tower stage (n={level}, m={m}) is disconnected")
        checked.append(m)
    all_certified = 1 in checked      # m = 1 certifies every m (Frattini)

    upstairs = derived_graph(va)
    lifted = lift_tower(t, upstairs.projection)
    cover_inv = iwasawa_invariants(lifted)
    expected = ell ** (3 * level) * (base_inv.lam + 1) - 1
    return UniformTowerReport(ell=ell, level=level, base=base_inv,
                              cover=cover_inv, lambda_expected=expected,
                              connectedness_certified=tuple(checked),
                              all_levels_certified=all_certified)
