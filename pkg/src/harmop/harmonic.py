"""Fixed-point spaces of both actions, the three-route equality check for
the algebra of multiplier-harmonic operators, ergodic limit products, and the
ideal suite in the trace-class predual."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .groups import GroupTable, Subgroup
from .functions import (
    GroupFunction,
    Measure,
    convolution_matrix,
    convolve,
    convolve_measures,
    delta_function,
    in_p1,
    level_set_one,
)
from .linalg import (
    DEFAULT_TOL,
    Subspace,
    Tolerances,
    double_commutant,
    null_space,
    projector_distance,
    range_space,
)
from .actions import (
    Superoperator,
    bullet,
    left_regular,
    pi_quotient,
    schur_mask,
    theta,
    theta_hat,
    trace_pairing,
    _swap_matrix,
)


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


def _map_scale(mat: np.ndarray) -> float:
    """Reference norm for maps compared against the identity."""
    return max(1.0, float(np.abs(mat).sum(axis=1).max()))


def fixed_points(phi: Superoperator, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Fixed vectors of the superoperator over vectorized matrices."""
    dense = phi.dense()
    return null_space(dense - np.eye(dense.shape[0]), tol, scale=_map_scale(dense))


def harmonic_functions(mu: Measure, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """{phi : convolve(mu, phi) = phi}; its dimension is the index of the
    subgroup generated by the support of mu."""
    if not mu.is_probability(tol):
        raise ValueError("harmonic functions are defined for probability measures")
    c_mat = convolution_matrix(mu)
    return null_space(c_mat - np.eye(mu.group.order), tol, scale=_map_scale(c_mat))


def harmonic_functionals(sigma: GroupFunction, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Fixed points of the canonical multiplier action inside the span of the
    left translations: span{lambda(x) : sigma(x) = 1}, vectorized."""
    g = sigma.group
    level = sorted(level_set_one(sigma, tol))
    if not level:
        return Subspace.zero(g.order ** 2)
    rows = [left_regular(g, x).reshape(-1) for x in level]
    return Subspace.from_span(np.stack(rows), tol)


def harmonic_operators(sigma: GroupFunction, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Fixed points of the multiplier action on all operators."""
    return fixed_points(theta_hat(sigma), tol)


def _stripe_span(group: GroupTable, level) -> Subspace:
    """span{E_ab : a b^-1 in level}: operators supported on the level set."""
    n = group.order
    disp = group.table[:, group.inverse]
    flags = np.isin(disp, np.asarray(sorted(level), dtype=disp.dtype)).reshape(-1)
    cols = np.flatnonzero(flags)
    basis = np.zeros((n * n, len(cols)), dtype=complex)
    basis[cols, np.arange(len(cols))] = 1.0
    return Subspace(n * n, basis)


def _bimodule_span(group: GroupTable, level, tol: Tolerances) -> Subspace:
    """span{M_f lambda(x) : x in level, f arbitrary}, built from products."""
    n = group.order
    rows = []
    for x in sorted(level):
        lam = left_regular(group, x)
        for a in range(n):
            diag = np.zeros((n, n))
            diag[a, a] = 1.0
            rows.append((diag @ lam).reshape(-1))
    if not rows:
        return Subspace.zero(n * n)
    return Subspace.from_span(np.stack(rows), tol)


@dataclass(frozen=True)
class HarmonicReport:
    """Verdict of the three-route computation of the harmonic-operator algebra."""

    group_name: str
    parameter: str
    p1_mode: bool
    level_set: tuple[int, ...]
    dims: dict[str, int]
    expected_dim: int | None
    distances: dict[str, float]
    eq_tol: float

    @property
    def passed(self) -> bool:
        if any(d > self.eq_tol for d in self.distances.values()):
            return False
        if self.expected_dim is not None:
            return all(d == self.expected_dim for d in self.dims.values())
        return True


def verify_main_theorem(sigma: GroupFunction, tol: Tolerances = DEFAULT_TOL,
                        parameter: str = "sigma") -> HarmonicReport:
    """Compare three independent routes to the sigma-harmonic operators.

    (A) fixed points of the multiplier action, as a dense null space;
    (B) the von Neumann algebra generated by the fixed left translations and
        the diagonal, via the double-commutant engine;
    (C) the span of the matrix units supported on the level set of sigma.

    For sigma in P1(G) the three agree with dimension |G| * |level set|.  For
    general sigma the level set need not be a subgroup and (B) can overshoot,
    so only the inclusions span{M_f lambda(x)} <= (A) <= (C) are checked.
    """
    g = sigma.group
    n = g.order
    level = tuple(int(x) for x in sorted(level_set_one(sigma, tol)))
    p1 = in_p1(sigma, tol)
    fixed = harmonic_operators(sigma, tol)
    stripe = _stripe_span(g, level)
    if p1:
        gens = [left_regular(g, x) for x in level]
        for a in range(n):
            diag = np.zeros((n, n))
            diag[a, a] = 1.0
            gens.append(diag)
        algebra = double_commutant(gens, n, tol)
        dims = {
            "fixed_points": fixed.dim,
            "generated_algebra": algebra.dim,
            "stripe_span": stripe.dim,
        }
        distances = {
            "fixed_vs_algebra": projector_distance(fixed, algebra),
            "fixed_vs_stripe": projector_distance(fixed, stripe),
            "algebra_vs_stripe": projector_distance(algebra, stripe),
        }
        expected = n * len(level)
    else:
        span = _bimodule_span(g, level, tol)
        pa, ps, pc = fixed.projector, span.projector, stripe.projector
        dims = {
            "fixed_points": fixed.dim,
            "bimodule_span": span.dim,
            "stripe_span": stripe.dim,
        }
        distances = {
            "span_in_fixed": float(np.linalg.norm(ps @ pa - ps)),
            "fixed_in_stripe": float(np.linalg.norm(pa @ pc - pa)),
        }
        expected = None
    return HarmonicReport(
        group_name=g.name,
        parameter=parameter,
        p1_mode=p1,
        level_set=level,
        dims=dims,
        expected_dim=expected,
        distances=distances,
        eq_tol=tol.eq_tol,
    )


# ---------------------------------------------------------------------------
# limit products

@dataclass(frozen=True)
class LimitResult:
    value: object
    steps: int
    residual: float


def limit_product(mode: str, a, b, mu: Measure, max_n: int = 10_000,
                  stop_tol: float = 1e-8, tol: Tolerances = DEFAULT_TOL) -> LimitResult:
    """Ergodic product of two harmonic elements.

    Averages the sequence s_n = (n-th convolution power of mu) acting on the
    plain product of a and b, in the Cesaro sense, and stops once successive
    averages differ by at most stop_tol in max norm.  Plain limits can fail
    for periodic walks; Cesaro averages cannot on a finite group.

    mode="function": a, b are functions, s_n = convolve(mu^n, a*b).
    mode="operator": a, b are operators, s_n = Theta(mu)^n (a @ b).
    """
    if not mu.is_probability(tol):
        raise ValueError("limit products are defined for probability measures")
    g = mu.group
    if mode == "function":
        if not (isinstance(a, GroupFunction) and isinstance(b, GroupFunction)):
            raise ValueError("function mode expects GroupFunction inputs")
        for name, f in (("first", a), ("second", b)):
            if np.abs(convolve(mu, f).values - f.values).max() > tol.eq_tol:
                warnings.warn(f"{name} factor is not harmonic for this measure")
        product = GroupFunction(g, a.values * b.values)
        power = mu
        state = convolve(power, product).values
        average = state.copy()
        residual = float("inf")
        for n in range(2, max_n + 1):
            power = convolve_measures(power, mu)
            state = convolve(power, product).values
            step = (state - average) / n
            average = average + step
            residual = float(np.abs(step).max())
            if residual <= stop_tol:
                return LimitResult(GroupFunction(g, average), n, residual)
        raise ConvergenceError(
            f"no convergence within {max_n} steps (residual {residual:.3e})", residual
        )
    if mode == "operator":
        a = np.asarray(a, dtype=complex)
        b = np.asarray(b, dtype=complex)
        action = theta(mu)
        for name, t_mat in (("first", a), ("second", b)):
            if np.abs(action.apply(t_mat) - t_mat).max() > tol.eq_tol:
                warnings.warn(f"{name} factor is not harmonic for this measure")
        state = action.apply(a @ b)
        average = state.copy()
        residual = float("inf")
        for n in range(2, max_n + 1):
            state = action.apply(state)
            step = (state - average) / n
            average = average + step
            residual = float(np.abs(step).max())
            if residual <= stop_tol:
                return LimitResult(average, n, residual)
        raise ConvergenceError(
            f"no convergence within {max_n} steps (residual {residual:.3e})", residual
        )
    raise ValueError(f"mode must be 'function' or 'operator', got {mode!r}")


# ---------------------------------------------------------------------------
# ideals in the predual

def pre_annihilator_ideal(phi: Superoperator, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """range(pre_adjoint(phi) - id): the trace-class elements annihilating the
    fixed points; dimensions are complementary to fixed_points(phi)."""
    dense = phi.pre_adjoint().dense()
    return range_space(dense - np.eye(dense.shape[0]), tol, scale=_map_scale(dense))


def _offdiagonal_span(n: int) -> Subspace:
    cols = [a * n + b for a in range(n) for b in range(n) if a != b]
    basis = np.zeros((n * n, len(cols)), dtype=complex)
    basis[cols, np.arange(len(cols))] = 1.0
    return Subspace(n * n, basis)


def _traceless_span(n: int, tol: Tolerances) -> Subspace:
    return null_space(np.eye(n).reshape(1, -1), tol)


def bullet_closure_residual(group: GroupTable, ideal: Subspace,
                            tol: Tolerances = DEFAULT_TOL) -> float:
    """How far products under the predual multiplication leave the ideal.

    Spanning sets suffice by bilinearity.  For the arbitrary factor on the
    left, products factor through pi(omega), so one point mass per group
    element covers all matrix units; on the right, a basis element against a
    matrix unit E_cd is a scalar multiple of E_cd.
    """
    n = group.order
    proj = ideal.projector
    mats = [ideal.basis[:, k].reshape(n, n) for k in range(ideal.dim)]
    residual = 0.0
    products = []
    for z in range(n):
        mask_t = schur_mask(delta_function(group, z)).T
        products.extend((mask_t * mat).reshape(-1) for mat in mats)
    if products:
        stack = np.stack(products, axis=1)
        residual = float(np.linalg.norm(stack - proj @ stack, axis=0).max())
    unit_defect = np.linalg.norm(np.eye(n * n) - proj, axis=0)
    for mat in mats:
        scale = np.abs(schur_mask(pi_quotient(group, mat)).T).reshape(-1)
        residual = max(residual, float((scale * unit_defect).max()))
    return residual


@dataclass(frozen=True)
class IdealSuiteReport:
    group_name: str
    sigma_at_identity_is_one: bool
    dim_ideal: int
    dim_fixed: int
    dim_linfty_perp: int
    dim_traceless: int
    orthogonality_residual: float
    ideal_in_perp_residual: float | None
    perp_in_traceless_residual: float
    ideal_closure_residual: float
    perp_closure_residual: float
    quotient_formula_residual: float
    eq_tol: float

    @property
    def passed(self) -> bool:
        n2 = self.dim_traceless + 1
        residuals = [
            self.orthogonality_residual,
            self.perp_in_traceless_residual,
            self.ideal_closure_residual,
            self.perp_closure_residual,
            self.quotient_formula_residual,
        ]
        if self.ideal_in_perp_residual is not None:
            residuals.append(self.ideal_in_perp_residual)
        return self.dim_ideal + self.dim_fixed == n2 and all(
            r <= self.eq_tol for r in residuals
        )


def linfty_perp_suite(sigma: GroupFunction, tol: Tolerances = DEFAULT_TOL) -> IdealSuiteReport:
    """The ideal chain in the predual for the multiplier action of sigma.

    Computes the pre-annihilator of the harmonic operators, the annihilator of
    the multiplication operators (zero-diagonal matrices), and the traceless
    elements; verifies the inclusion chain when sigma(e) = 1, closure of both
    ideals under the predual product, orthogonality of the pre-annihilator
    against the fixed points, and the induced quotient product
    f . g = <f, 1> g on diagonal representatives.
    """
    g = sigma.group
    n = g.order
    action = theta_hat(sigma)
    ideal = pre_annihilator_ideal(action, tol)
    fixed = fixed_points(action, tol)
    perp = _offdiagonal_span(n)
    traceless = _traceless_span(n, tol)
    swap = _swap_matrix(n)
    pairings = ideal.basis.T @ (swap @ fixed.basis)
    orth = float(np.abs(pairings).max()) if pairings.size else 0.0
    sigma_e = abs(complex(sigma.values[g.identity]) - 1.0) <= tol.eq_tol
    pi_i, pi_p, pi_t = ideal.projector, perp.projector, traceless.projector
    ideal_in_perp = float(np.linalg.norm(pi_i @ pi_p - pi_i)) if sigma_e else None
    perp_in_traceless = float(np.linalg.norm(pi_p @ pi_t - pi_p))
    quotient = 0.0
    for x in range(n):
        f_mat = np.zeros((n, n), dtype=complex)
        f_mat[x, x] = 1.0
        for y in range(n):
            g_mat = np.zeros((n, n), dtype=complex)
            g_mat[y, y] = 1.0
            expected = trace_pairing(np.eye(n), f_mat) * g_mat
            quotient = max(quotient, float(np.abs(bullet(g, f_mat, g_mat) - expected).max()))
    return IdealSuiteReport(
        group_name=g.name,
        sigma_at_identity_is_one=sigma_e,
        dim_ideal=ideal.dim,
        dim_fixed=fixed.dim,
        dim_linfty_perp=perp.dim,
        dim_traceless=traceless.dim,
        orthogonality_residual=orth,
        ideal_in_perp_residual=ideal_in_perp,
        perp_in_traceless_residual=perp_in_traceless,
        ideal_closure_residual=bullet_closure_residual(g, ideal, tol),
        perp_closure_residual=bullet_closure_residual(g, perp, tol),
        quotient_formula_residual=quotient,
        eq_tol=tol.eq_tol,
    )


@dataclass(frozen=True)
class InvariantAlgebraReport:
    group_name: str
    subgroup: tuple[int, ...]
    orbit_count: int
    dim_invariant: int
    dim_commutant: int
    distance: float
    eq_tol: float

    @property
    def passed(self) -> bool:
        return (
            self.distance <= self.eq_tol
            and self.dim_invariant == self.orbit_count == self.dim_commutant
        )


def invariant_algebra(subgroup: Subgroup, tol: Tolerances = DEFAULT_TOL) -> InvariantAlgebraReport:
    """Functions invariant under left translation by a subgroup, as diagonal
    operators, against the commutant of {lambda(h)} united with the diagonal.
    The two must coincide, with dimension the number of orbits."""
    from .linalg import commutant

    g = subgroup.parent
    n = g.order
    cosets = subgroup.right_cosets()
    basis = np.zeros((n * n, len(cosets)), dtype=complex)
    for k, coset in enumerate(cosets):
        for y in coset:
            basis[y * n + y, k] = 1.0 / np.sqrt(len(coset))
    invariant = Subspace(n * n, basis)
    gens = [left_regular(g, h) for h in subgroup]
    for a in range(n):
        diag = np.zeros((n, n))
        diag[a, a] = 1.0
        gens.append(diag)
    comm = commutant(gens, n, tol)
    return InvariantAlgebraReport(
        group_name=g.name,
        subgroup=subgroup.members,
        orbit_count=len(cosets),
        dim_invariant=invariant.dim,
        dim_commutant=comm.dim,
        distance=projector_distance(invariant, comm),
        eq_tol=tol.eq_tol,
    )


def willis_ideal(mu: Measure, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """range(f -> f - f conv' mu), where conv' is the pre-adjoint of
    convolve(mu, .) under the bilinear pairing sum_x f(x) phi(x); the
    orthogonal complement of the harmonic functions in that pairing."""
    if not mu.is_probability(tol):
        raise ValueError("the ideal is defined for probability measures")
    n = mu.group.order
    c_mat = convolution_matrix(mu)
    return range_space(np.eye(n) - c_mat.T, tol, scale=_map_scale(c_mat))
