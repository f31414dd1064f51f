"""Independent numerical spectra for -psi'' + V psi = E psi (hbar = 2mu = 1).

Three solvers, none of which uses the closed forms:

* three-point finite differences with Dirichlet ends, eigenvalues by
  Sturm-sequence bisection (plus optional Richardson extrapolation);
* Numerov shooting from both ends, matched at the rightmost turning point;
* fourth-order Runge-Kutta shooting with complex Newton iteration, for
  non-Hermitian potentials.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded
from scipy.optimize import brentq

from .errors import LevelNotFound, NoConvergence, NonFiniteValue

_BISECT_TOL = 1e-10
_RESCALE = 1e150


@dataclass(frozen=True)
class Grid:
    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ValueError("grid needs x_min < x_max")
        if self.n_points < 3:
            raise ValueError("grid needs at least 3 points")

    @property
    def h(self):
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def x(self):
        return np.linspace(self.x_min, self.x_max, self.n_points)

    def refined(self):
        """Grid with exactly half the spacing."""
        return Grid(self.x_min, self.x_max, 2 * self.n_points - 1)

    @classmethod
    def symmetric(cls, half_width, n_points):
        return cls(-float(half_width), float(half_width), int(n_points))


@dataclass(frozen=True)
class TridiagonalHamiltonian:
    diagonal: np.ndarray
    off_diagonal: np.ndarray
    grid: Grid

    @property
    def size(self):
        return len(self.diagonal)


@dataclass(frozen=True)
class ComplexShootResult:
    E: complex
    residual: float
    iterations: int


def _sample(v, xs):
    vals = np.asarray(v(xs))
    if vals.shape != xs.shape:
        vals = np.broadcast_to(vals, xs.shape)
    if not np.all(np.isfinite(vals)):
        raise NonFiniteValue("potential is not finite on the grid")
    return vals


def discretize(v, g):
    """Three-point stencil of -d2/dx2 + V on the interior grid points."""
    xs = g.x[1:-1]
    vals = _sample(v, xs).astype(float)
    inv_h2 = 1.0 / g.h**2
    diag = 2.0 * inv_h2 + vals
    off = np.full(len(xs) - 1, -inv_h2)
    return TridiagonalHamiltonian(diag, off, g)


def sturm_count(h, shift):
    """Number of eigenvalues of h strictly below ``shift``."""
    d = h.diagonal.tolist()
    e2 = (h.off_diagonal**2).tolist()
    count = 0
    qv = d[0] - shift
    if qv < 0.0:
        count += 1
    tiny = 1e-300
    for i in range(1, len(d)):
        if qv == 0.0:
            qv = tiny
        qv = d[i] - shift - e2[i - 1] / qv
        if qv < 0.0:
            count += 1
    return count


def _gershgorin(h):
    off = np.abs(h.off_diagonal)
    radius = np.zeros_like(h.diagonal)
    radius[:-1] += off
    radius[1:] += off
    return float(np.min(h.diagonal - radius)), float(np.max(h.diagonal + radius))


def eigenvalues_below(h, e_max, tol=_BISECT_TOL):
    """All eigenvalues below e_max, ascending, by bisection on the Sturm count."""
    total = sturm_count(h, e_max)
    if total == 0:
        return []
    lo0, hi0 = _gershgorin(h)
    hi0 = min(hi0, e_max)
    out = []
    lo = lo0 - 1.0
    for j in range(total):
        # invariant: count(a) <= j < count(b)
        a, b = lo, hi0
        while b - a > tol:
            mid = 0.5 * (a + b)
            if sturm_count(h, mid) > j:
                b = mid
            else:
                a = mid
        value = 0.5 * (a + b)
        out.append(value)
        lo = a
    return out


def fd_levels(v, g, e_max, richardson=True):
    """Finite-difference levels below e_max, optionally Richardson-extrapolated.

    Extrapolation combines the grid with its halved-spacing refinement:
    E = (4 E_fine - E_coarse) / 3, which removes the O(h^2) stencil error.
    """
    coarse = eigenvalues_below(discretize(v, g), e_max)
    if not richardson:
        return coarse
    fine = eigenvalues_below(discretize(v, g.refined()), e_max)
    k = min(len(coarse), len(fine))
    return [(4.0 * fine[i] - coarse[i]) / 3.0 for i in range(k)]


def eigenvector(h, energy, iterations=4):
    """Eigenvector for a computed eigenvalue by inverse iteration.

    Returns values on the full grid (Dirichlet zeros at both ends),
    normalized to unit L2 norm with the trapezoid weight h.
    """
    n = h.size
    shift = energy + 1e-10 * max(1.0, abs(energy))
    ab = np.zeros((3, n))
    ab[0, 1:] = h.off_diagonal
    ab[1, :] = h.diagonal - shift
    ab[2, :-1] = h.off_diagonal
    # a fixed-seed random start overlaps every eigenvector (a constant start misses odd states)
    vec = np.random.default_rng(0).standard_normal(n)
    for _ in range(iterations):
        vec = solve_banded((1, 1), ab, vec)
        vec /= np.linalg.norm(vec)
    full = np.concatenate(([0.0], vec, [0.0]))
    full /= math.sqrt(np.sum(full**2) * h.grid.h)
    # fix the sign: positive lobe first
    idx = np.flatnonzero(np.abs(full) > 1e-6 * np.max(np.abs(full)))
    if idx.size and full[idx[0]] < 0.0:
        full = -full
    return full


def _numerov_weights(f, h):
    return 1.0 - h * h * f / 12.0


def _numerov_sweep(w, f, h, order, stop):
    """Run Numerov along ``order`` (index list) from Dirichlet data.

    Returns the node count and the (rescaled) values at indices ``stop``
    (a dict index -> value). Values share one cumulative scale factor.
    """
    keep = {}
    prev = 0.0
    cur = 1e-12
    nodes = 0
    i0, i1 = order[0], order[1]
    if i0 in stop:
        keep[i0] = prev
    if i1 in stop:
        keep[i1] = cur
    h2 = h * h
    for j in range(2, len(order)):
        im2, im1, i = order[j - 2], order[j - 1], order[j]
        nxt = (2.0 * cur * (1.0 + 5.0 * h2 * f[im1] / 12.0) - prev * w[im2]) / w[i]
        if nxt * cur < 0.0:
            nodes += 1
        prev, cur = cur, nxt
        if abs(cur) > _RESCALE:
            prev /= _RESCALE
            cur /= _RESCALE
            for key in keep:
                keep[key] /= _RESCALE
        if i in stop:
            keep[i] = cur
    return nodes, keep


def _outward_nodes(vals, h, energy):
    f = (vals - energy).tolist()
    w = _numerov_weights(np.asarray(f), h).tolist()
    nodes, _ = _numerov_sweep(w, f, h, list(range(len(f))), set())
    return nodes


def _matching_index(vals, energy):
    allowed = np.flatnonzero(vals < energy)
    if allowed.size == 0:
        return None
    return int(np.clip(allowed[-1], 2, len(vals) - 3))


def _wronskian(vals, h, energy, m):
    f = (vals - energy).tolist()
    w = _numerov_weights(np.asarray(f), h).tolist()
    n = len(f)
    _, left = _numerov_sweep(w, f, h, list(range(0, m + 2)), {m, m + 1})
    _, right = _numerov_sweep(w, f, h, list(range(n - 1, m - 1, -1)), {m, m + 1})
    l0, l1 = left[m], left[m + 1]
    r0, r1 = right[m], right[m + 1]
    norm = math.hypot(l0, l1) * math.hypot(r0, r1)
    return (l0 * r1 - l1 * r0) / norm


def numerov_shoot(v, g, n, e_max=None):
    """Energy of the n-th Dirichlet level by Numerov shooting.

    The level is first isolated by bisection on the node count of the
    outward solution (Sturm oscillation), then refined as the root of the
    normalized Wronskian mismatch at the rightmost classical turning point.
    """
    xs = g.x
    vals = _sample(v, xs).astype(float)
    h = g.h
    if e_max is None:
        e_max = float(min(vals[0], vals[-1]))
    e_lo = float(np.min(vals))
    count_b = _outward_nodes(vals, h, e_max)
    if count_b <= n:
        raise LevelNotFound(f"no level n={n} below {e_max}")
    # bisect until [a, b] holds exactly the n-th level: count(a) = n, count(b) = n + 1
    a, b, count_a = e_lo, e_max, 0
    for _ in range(200):
        if count_a == n and count_b == n + 1:
            break
        mid = 0.5 * (a + b)
        count = _outward_nodes(vals, h, mid)
        if count <= n:
            a, count_a = mid, count
        else:
            b, count_b = mid, count
    m = _matching_index(vals, 0.5 * (a + b))
    if m is None:
        raise LevelNotFound(f"no classically allowed region for level n={n}")
    fa = _wronskian(vals, h, a, m)
    fb = _wronskian(vals, h, b, m)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        raise LevelNotFound(f"matching function does not bracket level n={n}")
    return brentq(lambda e: _wronskian(vals, h, e, m), a, b, xtol=1e-14, rtol=1e-15, maxiter=200)


def _rk4_sweep(vals, half_vals, h, energy, indices):
    """RK4 for psi'' = (V - E) psi from Dirichlet data along ``indices``."""
    psi, dpsi = 0j, 1.0 + 0j
    step = h if indices[1] > indices[0] else -h
    for a, b in zip(indices[:-1], indices[1:]):
        va = vals[a] - energy
        vm = half_vals[min(a, b)] - energy
        vb = vals[b] - energy
        k1p, k1d = dpsi, va * psi
        k2p, k2d = dpsi + 0.5 * step * k1d, vm * (psi + 0.5 * step * k1p)
        k3p, k3d = dpsi + 0.5 * step * k2d, vm * (psi + 0.5 * step * k2p)
        k4p, k4d = dpsi + step * k3d, vb * (psi + step * k3p)
        psi = psi + step / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        dpsi = dpsi + step / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d)
    return psi, dpsi


def complex_shoot(v, g, e0, tol=1e-9, max_iter=50):
    """Complex eigenvalue near ``e0`` by two-sided RK4 shooting.

    Both solutions start from Dirichlet data at the grid ends and are
    matched at x = 0 (or the grid midpoint when 0 is not interior). Newton
    iteration drives the scale-free ratio

        W / (psi_L psi_R + psi_L' psi_R'),   W = psi_L psi_R' - psi_L' psi_R,

    to zero. Both numerator and denominator are analytic in E and grow at the
    same exponential rate, so the ratio stays O(1) while W itself does not.
    """
    xs = g.x
    h = g.h
    vals = np.asarray(v(xs), dtype=complex)
    half_vals = np.asarray(v(xs[:-1] + 0.5 * h), dtype=complex)
    if not (np.all(np.isfinite(vals)) and np.all(np.isfinite(half_vals))):
        raise NonFiniteValue("potential is not finite on the grid")
    vals, half_vals = vals.tolist(), half_vals.tolist()
    n = len(xs)
    m = int(np.argmin(np.abs(xs))) if xs[0] < 0.0 < xs[-1] else n // 2
    m = min(max(m, 1), n - 2)
    left_idx = list(range(0, m + 1))
    right_idx = list(range(n - 1, m - 1, -1))

    def mismatch(e):
        pl, dl = _rk4_sweep(vals, half_vals, h, e, left_idx)
        pr, dr = _rk4_sweep(vals, half_vals, h, e, right_idx)
        w = pl * dr - dl * pr
        ratio = w / (pl * pr + dl * dr)
        resid = abs(w) / (math.hypot(abs(pl), abs(dl)) * math.hypot(abs(pr), abs(dr)))
        return ratio, resid

    energy = complex(e0)
    best = (math.inf, energy)
    for it in range(1, max_iter + 1):
        val, resid = mismatch(energy)
        if resid < best[0]:
            best = (resid, energy)
        if resid < tol:
            return ComplexShootResult(E=energy, residual=resid, iterations=it)
        de = 1e-6 * max(1.0, abs(energy))
        plus, _ = mismatch(energy + de)
        minus, _ = mismatch(energy - de)
        deriv = (plus - minus) / (2.0 * de)
        if deriv == 0:
            break
        step = val / deriv
        energy = energy - step
        if abs(step) < 1e-14 * max(1.0, abs(energy)):
            _, resid = mismatch(energy)
            return ComplexShootResult(E=energy, residual=resid, iterations=it)
    raise NoConvergence(
        f"complex shooting did not converge from {e0}", best=ComplexShootResult(best[1], best[0], max_iter)
    )
