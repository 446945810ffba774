"""Bound formulas, equality characterisations, a naive oracle and a seeded
annealing search for configurations with many double normals."""

from __future__ import annotations

import enum
import itertools
import logging
import math
import warnings
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import least_squares
from sklearn.base import BaseEstimator

from .double_normal import Mode, as_mode, double_normal_graph
from .exceptions import BadParameter, BoundViolation, OutOfStatedRange, TooFewPoints, WrongSpace
from .geometry import PointSet, Space, Tolerance, as_space
from .graph import GeoGraph
from .spherical import delaunay_tiling, hull_faces, weak_gabriel

log = logging.getLogger(__name__)


class Theorem(str, enum.Enum):
    T1 = "t1"  # plane, weak: 3 floor(n/2)
    T1_STRICT = "t1s"  # plane, strict: n
    T2 = "t2"  # sphere, strict: 2n - 2
    T3 = "t3"  # sphere, weak: 17n/4 - 6
    GABRIEL = "gabriel"  # sphere, weak Gabriel edges: 15n/4 - 6


_ALIASES = {"t1-strict": "t1s", "gabriel-15/4": "gabriel"}

THEOREM_SPACE = {
    Theorem.T1: Space.PLANE,
    Theorem.T1_STRICT: Space.PLANE,
    Theorem.T2: Space.SPHERE,
    Theorem.T3: Space.SPHERE,
    Theorem.GABRIEL: Space.SPHERE,
}

MIN_N = {Theorem.T1: 3, Theorem.T1_STRICT: 3, Theorem.T2: 4, Theorem.T3: 8, Theorem.GABRIEL: 2}


def as_theorem(theorem) -> Theorem:
    if isinstance(theorem, Theorem):
        return theorem
    key = str(theorem).strip().lower()
    try:
        return Theorem(_ALIASES.get(key, key))
    except ValueError:
        raise BadParameter(f"unknown theorem {theorem!r}; expected one of {[t.value for t in Theorem]}") from None


def in_stated_range(theorem, n: int) -> bool:
    return n >= MIN_N[as_theorem(theorem)]


def bound_formula(theorem, n: int) -> Fraction:
    """Exact upper bound for ``n`` points.  Out-of-range ``n`` is evaluated
    anyway with an :class:`OutOfStatedRange` warning."""
    th = as_theorem(theorem)
    if int(n) != n or n < 0:
        raise BadParameter(f"n must be a non-negative integer, got {n!r}")
    n = int(n)
    if not in_stated_range(th, n):
        warnings.warn(f"{th.value} is only stated for n >= {MIN_N[th]} (got n={n})", OutOfStatedRange, stacklevel=2)
    if th is Theorem.T1:
        return Fraction(3 * (n // 2))
    if th is Theorem.T1_STRICT:
        return Fraction(n)
    if th is Theorem.T2:
        return Fraction(2 * n - 2)
    if th is Theorem.T3:
        return Fraction(17 * n, 4) - 6
    return Fraction(15 * n, 4) - 6


def diameter_bound(d: int, n: int) -> int:
    """Maximum number of diameter pairs: ``n`` in the plane (n >= 3),
    ``2n - 2`` in space (n >= 4)."""
    if d == 2:
        return n
    if d == 3:
        return 2 * n - 2
    raise BadParameter("diameter bounds are only provided for d = 2, 3")


# --------------------------------------------------------- characterisations


def circle_fit(X: np.ndarray):
    """Least-squares circle ``(centre, radius, max |residual| / radius)``."""
    A = np.c_[2 * X, np.ones(len(X))]
    b = (X**2).sum(axis=1)
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    c = sol[:2]
    r2 = sol[2] + c @ c
    r = math.sqrt(max(r2, 0.0))
    res = np.abs(np.linalg.norm(X - c, axis=1) - r)
    return c, r, float(res.max() / r) if r > 0 else math.inf


def centrally_symmetric(X: np.ndarray, centre, eps: float) -> bool:
    """Every point reflected through ``centre`` is again a point of ``X``."""
    R = 2 * np.asarray(centre) - X
    D = np.linalg.norm(R[:, None, :] - X[None, :, :], axis=2)
    scale = max(1.0, float(np.abs(X).max()))
    return bool((D.min(axis=1) <= eps * scale).all())


def planar_equality_predicates(V: PointSet) -> dict:
    X = V.points
    c, r, rel = circle_fit(X)
    eps = V.tol.concyclic_eps
    return {
        "concyclic": rel <= eps,
        "centrally_symmetric": centrally_symmetric(X, c, eps),
    }


def _is_rectangle(P: np.ndarray, eps: float) -> bool:
    diag = abs(np.linalg.norm(P[0] - P[2]) - np.linalg.norm(P[1] - P[3]))
    para = np.linalg.norm(P[0] + P[2] - P[1] - P[3])
    return bool(diag <= eps and para <= eps)


def _is_acute(P: np.ndarray, eps: float) -> bool:
    for i in range(3):
        u = P[(i + 1) % 3] - P[i]
        v = P[(i + 2) % 3] - P[i]
        ang = math.acos(max(-1.0, min(1.0, float(u @ v / (np.linalg.norm(u) * np.linalg.norm(v))))))
        if not ang < math.pi / 2 - eps:
            return False
    return True


def hull_equality_predicates(V: PointSet) -> dict:
    """Predicates describing the sphere equality cases on ``conv V``:
    faces are rectangles or acute triangles, each vertex lies on exactly
    three rectangles."""
    X, eps = V.points, V.tol.concyclic_eps
    faces = hull_faces(V)
    rect_per_vertex = Counter()
    n_rect = n_tri = 0
    all_acute, only_rect_tri = True, True
    for f in faces:
        P = X[list(f.vertices)]
        if len(P) == 4 and _is_rectangle(P, eps):
            n_rect += 1
            rect_per_vertex.update(f.vertices)
        elif len(P) == 3:
            n_tri += 1
            all_acute &= _is_acute(P, eps)
        else:
            only_rect_tri = False
    return {
        "origin_interior": bool(all(f.offset > V.tol.boundary_eps for f in faces)),
        "rectangles_and_triangles_only": only_rect_tri,
        "n_rectangles": n_rect,
        "n_triangles": n_tri,
        "triangles_acute": all_acute,
        "three_rectangles_per_vertex": all(rect_per_vertex[v] == 3 for v in range(V.n)),
    }


def sphere_weak_equality_predicates(V: PointSet) -> dict:
    anti = V.antipodal_index()
    out = {"centrally_symmetric": bool((anti >= 0).all())}
    out.update(hull_equality_predicates(V))
    return out


def gabriel_equality_predicates(V: PointSet, G: GeoGraph | None = None) -> dict:
    """Hull predicates plus: Gabriel edges are the Delaunay edges together
    with both diagonals of every quadrilateral face."""
    out = hull_equality_predicates(V)
    G = weak_gabriel(V) if G is None else G
    T = delaunay_tiling(V)
    expected = set(T.edges)
    for f in T.faces:
        if len(f) == 4:
            expected |= {tuple(sorted((f[0], f[2]))), tuple(sorted((f[1], f[3])))}
    out["edges_are_tiling_plus_diagonals"] = set(G.edges) == expected
    return out


_CHARACTERISATION_KEYS = {
    Theorem.T1: ("concyclic", "centrally_symmetric"),
    Theorem.T3: (
        "centrally_symmetric",
        "rectangles_and_triangles_only",
        "triangles_acute",
        "three_rectangles_per_vertex",
    ),
    Theorem.GABRIEL: (
        "origin_interior",
        "rectangles_and_triangles_only",
        "triangles_acute",
        "three_rectangles_per_vertex",
        "edges_are_tiling_plus_diagonals",
    ),
}


# --------------------------------------------------------------- bound report


@dataclass
class BoundReport:
    theorem: Theorem
    n: int
    bound: Fraction
    observed: int
    equality: bool
    in_range: bool
    characterization: dict | None = None
    witness: list | None = None

    @property
    def verdict(self) -> str:
        if not self.in_range:
            return "not-asserted"
        return "pass" if self.observed <= self.bound else "fail"

    @property
    def passed(self) -> bool:
        return self.verdict != "fail"

    @property
    def characterization_holds(self) -> bool | None:
        if self.characterization is None:
            return None
        keys = _CHARACTERISATION_KEYS.get(self.theorem, ())
        return all(bool(self.characterization.get(k)) for k in keys)

    def to_dict(self) -> dict:
        b = self.bound
        return {
            "theorem": self.theorem.value,
            "n": self.n,
            "bound": int(b) if b.denominator == 1 else str(b),
            "observed": self.observed,
            "equality": self.equality,
            "in_range": self.in_range,
            "characterization": self.characterization,
            "characterization_holds": self.characterization_holds,
            "verdict": self.verdict,
            "witness": self.witness,
        }

    def summary(self) -> str:
        b = self.bound
        bs = str(int(b)) if b.denominator == 1 else f"{b} (= {float(b):g})"
        line = f"{self.theorem.value}: n={self.n} observed={self.observed} bound={bs} -> {self.verdict}"
        if self.equality:
            line += f", equality (characterization {'holds' if self.characterization_holds else 'fails'})"
        return line


def observed_value(V: PointSet, theorem: Theorem) -> int:
    if theorem in (Theorem.T1, Theorem.T3):
        return double_normal_graph(V, Mode.WEAK).n_edges
    if theorem in (Theorem.T1_STRICT, Theorem.T2):
        return double_normal_graph(V, Mode.STRICT).n_edges
    return weak_gabriel(V).n_edges


def check_bound(V, theorem) -> BoundReport:
    """Compare the relevant count of ``V`` against the theorem's bound and,
    on equality, evaluate the equality characterisation."""
    th = as_theorem(theorem)
    need = THEOREM_SPACE[th]
    if isinstance(V, PointSet):
        if V.space is not need:
            raise WrongSpace(f"{th.value} needs {need.value} points, got {V.space.value}")
    else:
        V = PointSet.from_array(V, need)
    in_range = in_stated_range(th, V.n)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", OutOfStatedRange)
        bound = bound_formula(th, V.n)
    obs = observed_value(V, th)
    rep = BoundReport(th, V.n, bound, obs, equality=(obs == bound), in_range=in_range)
    if rep.equality:
        if th is Theorem.T1:
            rep.characterization = planar_equality_predicates(V)
        elif th is Theorem.T3:
            rep.characterization = sphere_weak_equality_predicates(V)
        elif th is Theorem.GABRIEL:
            rep.characterization = gabriel_equality_predicates(V)
        else:
            rep.characterization = {}
    if rep.verdict == "fail":
        rep.witness = V.points.tolist()
    return rep


# ------------------------------------------------------------------- oracle


def oracle_double_normals(V, mode="weak", space=None) -> GeoGraph:
    """Naive reference enumeration written with plain Python floats.

    Checks every pair against every point with the slab parameter
    ``t = (x - p).(q - p) / |q - p|^2``; shares no code with the fast path.
    """
    if isinstance(V, PointSet):
        pts, sp, eps = V.points.tolist(), V.space, V.tol.boundary_eps
    else:
        pts = [list(map(float, p)) for p in V]
        sp = as_space(space) if space is not None else {2: Space.PLANE, 3: Space.SPACE3}[len(pts[0])]
        eps = Tolerance().boundary_eps
    strict = as_mode(mode) is Mode.STRICT
    n = len(pts)
    if n < 2:
        raise TooFewPoints("need at least 2 points")
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            p, q = pts[i], pts[j]
            d = [b - a for a, b in zip(p, q)]
            dd = sum(c * c for c in d)
            ok = True
            for k in range(n):
                if k == i or k == j:
                    continue
                t = sum((x - a) * c for x, a, c in zip(pts[k], p, d)) / dd
                if strict:
                    if not (eps < t < 1 - eps):
                        ok = False
                        break
                elif t < -eps or t > 1 + eps:
                    ok = False
                    break
            if ok:
                edges.append((i, j))
    return GeoGraph(n, tuple(edges), sp)


# ------------------------------------------------------------------- search


def _slab_violation(X: np.ndarray, I: np.ndarray, J: np.ndarray) -> np.ndarray:
    """For each pair, how far (in slab units) the worst point sits outside."""
    D = X[J] - X[I]
    dd = (D * D).sum(axis=1)
    T = np.einsum("pnd,pd->pn", X[None, :, :] - X[I][:, None, :], D) / dd[:, None]
    return np.maximum(-T, T - 1.0).max(axis=1).clip(min=0.0)


@dataclass
class SearchState:
    space: Space
    n: int
    seed: int
    budget: int
    t0: float = 1.0
    cooling: float = 0.97
    t_min: float = 0.05
    step0: float = 0.2
    patience: int = 40
    bound: Fraction | None = None
    best_points: np.ndarray | None = None
    best_n: int = -1
    iterations: int = 0
    accepted: int = 0
    restarts: int = 0
    history: list = field(default_factory=list)  # (iteration, best_n)

    def to_dict(self) -> dict:
        return {
            "space": self.space.value,
            "n": self.n,
            "seed": self.seed,
            "budget": self.budget,
            "t0": self.t0,
            "cooling": self.cooling,
            "t_min": self.t_min,
            "step0": self.step0,
            "patience": self.patience,
            "bound": None if self.bound is None else str(self.bound),
            "best_n": self.best_n,
            "iterations": self.iterations,
            "accepted": self.accepted,
            "restarts": self.restarts,
            "history": [list(h) for h in self.history],
        }


class _SlabProblem:
    """Hinge residuals ``max(0, -t)`` and ``max(0, t - 1)`` for chosen pairs,
    with their exact Jacobian.  On the sphere the variables are unnormalised
    and every evaluation projects them back."""

    def __init__(self, space: Space, n: int, tol: Tolerance):
        self.space, self.n, self.d, self.tol = space, n, space.dim, tol
        self.I, self.J = np.triu_indices(n, 1)
        self._cols = np.arange(n)

    def normalize(self, X):
        if self.space is Space.SPHERE:
            return X / np.linalg.norm(X, axis=1)[:, None]
        X = X - X.mean(axis=0)
        return X / np.linalg.norm(X, axis=1).max()

    def _points(self, flat):
        Y = flat.reshape(self.n, self.d)
        return Y / np.linalg.norm(Y, axis=1)[:, None] if self.space is Space.SPHERE else Y

    def _slab(self, X, sel):
        I, J = self.I[sel], self.J[sel]
        D = X[J] - X[I]
        dd = (D * D).sum(axis=1)
        A = X[None, :, :] - X[I][:, None, :]
        return I, J, D, dd, A, np.einsum("pnd,pd->pn", A, D) / dd[:, None]

    def residuals(self, flat, sel):
        T = self._slab(self._points(flat), sel)[5]
        return np.concatenate([np.maximum(-T, 0).ravel(), np.maximum(T - 1, 0).ravel()])

    def jacobian(self, flat, sel):
        n, d, cols = self.n, self.d, self._cols
        X = self._points(flat)
        I, J, D, dd, A, T = self._slab(X, sel)
        P = len(sel)
        rows = np.arange(P)[:, None]
        G = np.zeros((P, n, n, d))  # d t[pair, point] / d X[vertex]
        G[rows, cols[None, :], cols[None, :], :] += (D / dd[:, None])[:, None, :]
        TD = T[..., None] * D[:, None, :]
        G[rows, cols[None, :], I[:, None], :] += (-D[:, None, :] - A + 2 * TD) / dd[:, None, None]
        G[rows, cols[None, :], J[:, None], :] += (A - 2 * TD) / dd[:, None, None]
        G[(cols[None, :] == I[:, None]) | (cols[None, :] == J[:, None])] = 0.0
        lo = (T < 0)[..., None, None]
        hi = (T > 1)[..., None, None]
        jac = np.concatenate([(-G * lo).reshape(P * n, n * d), (G * hi).reshape(P * n, n * d)])
        if self.space is Space.SPHERE:
            r = np.linalg.norm(flat.reshape(n, d), axis=1)
            proj = (np.eye(d)[None] - np.einsum("vi,vj->vij", X, X)) / r[:, None, None]
            jac = np.einsum("rvi,vij->rvj", jac.reshape(-1, n, d), proj).reshape(-1, n * d)
        return jac

    def violation(self, X):
        return _slab_violation(X, self.I, self.J)

    def count(self, X) -> int:
        return int((self.violation(X) <= self.tol.boundary_eps).sum())

    def separated(self, X) -> bool:
        dist = np.linalg.norm(X[self.I] - X[self.J], axis=1)
        return bool(dist.min() > 0.02 * dist.max())

    def snap(self, X, sel):
        """Least-squares move making every selected pair a double normal."""
        sol = least_squares(
            self.residuals, X.ravel(), jac=self.jacobian, args=(sel,),
            xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=60,
        )
        return self.normalize(sol.x.reshape(self.n, self.d))

    def grow(self, X, rounds: int | None = None, tries: int = 5, on_count=None):
        """Greedily add the least-violated pairs to the satisfied set."""
        eps = self.tol.boundary_eps
        N = self.count(X)
        for _ in range(len(self.I) if rounds is None else rounds):
            v = self.violation(X)
            tight = np.flatnonzero(v <= eps)
            improved = False
            for p in [p for p in np.argsort(v, kind="stable") if v[p] > eps][:tries]:
                Y = self.snap(X, np.append(tight, p))
                if not self.separated(Y):
                    continue
                M = self.count(Y)
                if on_count is not None:
                    on_count(Y, M)
                if M > N:
                    X, N, improved = Y, M, True
                    break
            if not improved:
                break
        return X, N


def random_search(
    space,
    n: int,
    budget: int,
    seed: int = 0,
    *,
    t0: float = 1.0,
    cooling: float = 0.97,
    t_min: float = 0.05,
    step0: float = 0.2,
    patience: int = 40,
    stop_at_bound: bool = True,
    tol: Tolerance | None = None,
) -> SearchState:
    """Annealed basin hopping for point sets with many double-normal pairs.

    One iteration perturbs every point by a Gaussian step (re-normalised on
    the sphere), then greedily snaps the least-violated pairs onto exact
    double normals by least squares.  The exact count, with the usual
    boundary tolerance, drives a Metropolis acceptance under geometric
    cooling; after ``patience`` iterations without progress the run restarts
    from fresh random points.  Plane runs start on the unit circle.

    Every counted state is compared with the theorem bound (plane: weak
    planar bound; sphere with n >= 8: weak sphere bound) and a violation
    raises :class:`BoundViolation` carrying the points and the seed.
    """
    space = as_space(space)
    if space is Space.SPACE3:
        raise WrongSpace("search runs in the plane or on the sphere")
    if int(n) != n or n < 3:
        raise BadParameter(f"n must be an integer >= 3, got {n!r}")
    if int(budget) != budget or budget < 1:
        raise BadParameter(f"budget must be a positive integer, got {budget!r}")
    n, budget = int(n), int(budget)
    tol = tol or Tolerance()
    th = Theorem.T1 if space is Space.PLANE else Theorem.T3
    bound = bound_formula(th, n) if in_stated_range(th, n) else None
    rng = np.random.default_rng(seed)
    prob = _SlabProblem(space, n, tol)
    st = SearchState(space, n, seed, budget, t0, cooling, t_min, step0, patience, bound)
    it = 0

    def record(X, N):
        if bound is not None and N > bound:
            raise BoundViolation(
                f"{N} double normals exceed the bound {bound} (seed={seed}, iteration={it})",
                witness={"points": X.tolist(), "seed": seed, "iteration": it, "count": N},
            )
        if N > st.best_n:
            st.best_n, st.best_points = N, X.copy()
            st.history.append((it, N))

    def fresh():
        if space is Space.PLANE:
            a = np.sort(rng.uniform(0.0, 2 * np.pi, n))
            X = prob.normalize(np.c_[np.cos(a), np.sin(a)])
        else:
            X = prob.normalize(rng.standard_normal((n, space.dim)))
        X, N = prob.grow(X, on_count=record)
        record(X, N)
        return X, N

    X, N = fresh()
    temp, run_best, stale = t0, N, 0
    while it < budget and not (stop_at_bound and bound is not None and st.best_n >= bound):
        it += 1
        st.iterations = it
        Y = prob.normalize(X + step0 * math.sqrt(temp / t0) * rng.standard_normal(X.shape))
        if prob.separated(Y):
            Y, M = prob.grow(Y, on_count=record)
            record(Y, M)
            if M >= N or rng.random() < math.exp((M - N) / temp):
                X, N = Y, M
                st.accepted += 1
        temp = max(t_min, temp * cooling)
        if N > run_best:
            run_best, stale = N, 0
        else:
            stale += 1
        if stale >= patience:
            st.restarts += 1
            X, N = fresh()
            temp, run_best, stale = t0, N, 0
    return st


class AnnealingSearch(BaseEstimator):
    """Estimator wrapper around :func:`random_search`.

    ``fit`` ignores its input; ``state_``, ``best_points_`` and ``best_n_``
    hold the result.
    """

    def __init__(self, space="plane", n=8, budget=20000, seed=0, t0=1.0, cooling=0.97, step0=0.2, patience=40):
        self.space = space
        self.n = n
        self.budget = budget
        self.seed = seed
        self.t0 = t0
        self.cooling = cooling
        self.step0 = step0
        self.patience = patience

    def fit(self, X=None, y=None):
        self.state_ = random_search(
            self.space,
            self.n,
            self.budget,
            self.seed,
            t0=self.t0,
            cooling=self.cooling,
            step0=self.step0,
            patience=self.patience,
        )
        self.best_points_ = self.state_.best_points
        self.best_n_ = self.state_.best_n
        return self

    def score(self, X=None, y=None):
        return float(self.best_n_)
