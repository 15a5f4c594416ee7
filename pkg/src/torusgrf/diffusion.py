"""Desk-scale 1D lognormal diffusion demo.

Solves -(a u')' = f on D = (-1/2, 1/2) with u(+-1/2) = 0 and a = exp(b),
b a sampled Gaussian field, using continuous piecewise-linear Galerkin
elements on a uniform mesh.  The coefficient is frozen at one value per
element (midpoint rule), the load uses the same midpoint quadrature, and
the solve is a banded tridiagonal factorization.  The classical a-priori
bound  |u|_{H1} <= ||f||_dual * exp(max|b|)  is exposed as a checkable
predicate: it is an identity-level consequence of coercivity, so failures
indicate solver bugs rather than bad luck.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .sampler import Representation, _substream

__all__ = ["Mesh1D", "FemSolution", "assemble_solve", "apriori_bound_check", "f_dual_norm", "mc_mean_field"]


@dataclass(frozen=True)
class Mesh1D:
    """Uniform mesh on D = (-delta/2, delta/2) with homogeneous Dirichlet ends."""

    n_elements: int
    delta: float = 1.0

    def __post_init__(self):
        if self.n_elements < 2:
            raise ValueError(f"need at least 2 elements, got {self.n_elements}")
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")

    @property
    def h(self) -> float:
        return self.delta / self.n_elements

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(-self.delta / 2.0, self.delta / 2.0, self.n_elements + 1)

    @property
    def midpoints(self) -> np.ndarray:
        """Element midpoints; the quadrature points for coefficient and load."""
        x = self.nodes
        return 0.5 * (x[:-1] + x[1:])


@dataclass
class FemSolution:
    """Nodal values (boundary nodes zero) and the H1-seminorm of u_h."""

    mesh: Mesh1D
    nodal_values: np.ndarray
    energy_norm: float

    def value_at_center(self) -> float:
        """u_h(0); requires an even element count so 0 is a node."""
        if self.mesh.n_elements % 2:
            raise ValueError("center value needs an even element count")
        return float(self.nodal_values[self.mesh.n_elements // 2])


def assemble_solve(log_field, f, mesh: Mesh1D) -> FemSolution:
    """Galerkin P1 solve of -(exp(b) u')' = f with b given at element midpoints."""
    b = np.asarray(log_field, dtype=float)
    if b.shape != (mesh.n_elements,):
        raise ValueError(f"log_field must have one value per element ({mesh.n_elements})")
    if not np.all(np.isfinite(b)):
        raise ValueError("log_field contains non-finite values")
    a = np.exp(b)
    h = mesh.h
    n = mesh.n_elements - 1  # interior unknowns

    diag = (a[:-1] + a[1:]) / h
    off = -a[1:-1] / h
    ab = np.zeros((3, n))
    ab[0, 1:] = off
    ab[1, :] = diag
    ab[2, :-1] = off

    fm = f(mesh.midpoints) if callable(f) else np.asarray(f, dtype=float)
    fm = np.broadcast_to(fm, (mesh.n_elements,))
    load = 0.5 * h * (fm[:-1] + fm[1:])

    interior = solve_banded((1, 1), ab, load)
    u = np.zeros(mesh.n_elements + 1)
    u[1:-1] = interior
    energy = float(np.sqrt(np.sum(np.diff(u) ** 2) / h))
    return FemSolution(mesh=mesh, nodal_values=u, energy_norm=energy)


def f_dual_norm(f, mesh: Mesh1D) -> float:
    """Discrete dual norm of the source: H1-seminorm of the b = 0 solve.

    This equals sup over V_h of <f, v> / |v|_{H1}, exactly the constant in
    the a-priori bound when tested against Galerkin solutions on this mesh.
    """
    return assemble_solve(np.zeros(mesh.n_elements), f, mesh).energy_norm


def apriori_bound_check(
    log_field, sol: FemSolution, f_dual: float, tol_fem: float = 1e-8
) -> bool:
    """True iff |u_h|_{H1} <= f_dual * exp(max|b|) * (1 + tol_fem)."""
    b = np.asarray(log_field, dtype=float)
    bound = f_dual * np.exp(np.abs(b).max()) * (1.0 + tol_fem)
    return bool(sol.energy_norm <= bound)


def mc_mean_field(
    rep: Representation,
    truncation,
    M: int,
    seed: int,
    mesh: Mesh1D,
    f=lambda x: np.ones_like(x),
):
    """Monte Carlo mean of the FEM solution over M field samples.

    Returns (mean nodal values, per-node standard error).  ``truncation``
    of None keeps the representation's own truncation; otherwise a reduced
    KL term count is applied by zeroing trailing rows of the basis.
    """
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    B = rep.basis_matrix(mesh.midpoints)
    if truncation is not None:
        if rep.kind != "kl":
            raise ValueError("per-call truncation override is only supported for KL")
        if not 1 <= truncation <= B.shape[0]:
            raise ValueError(f"truncation {truncation} outside [1, {B.shape[0]}]")
        B = B[:truncation]
    n = B.shape[0]

    total = np.zeros(mesh.n_elements + 1)
    total_sq = np.zeros(mesh.n_elements + 1)
    for i in range(M):
        y = _substream(seed, i).standard_normal(n)
        sol = assemble_solve(y @ B, f, mesh)
        total += sol.nodal_values
        total_sq += sol.nodal_values**2
    mean = total / M
    if M > 1:
        var = np.maximum(total_sq - M * mean**2, 0.0) / (M - 1)
        stderr = np.sqrt(var / M)
    else:
        stderr = np.full_like(mean, np.nan)
    return mean, stderr
