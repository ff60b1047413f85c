"""Exact linear-Gaussian structural equation models.

A model assigns ``V = sum(coef[(P, V)] * P) + noise_V`` to every node, with
independent centred Gaussian noise. Observational and interventional laws
are computed in closed form, so identities can be checked to machine
precision rather than by sampling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import GraphValidationError, PreconditionError, SingularBlockError
from .graph import Edge, GraphClass, Mark, MixedGraph, NodeSet

RIDGE = 1e-12


@dataclass(frozen=True)
class Gaussian:
    nodes: tuple[str, ...]
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        n = len(self.nodes)
        if self.mean.shape != (n,) or self.cov.shape != (n, n):
            raise ValueError("mean/cov shapes do not match the node list")
        if not np.allclose(self.cov, self.cov.T, atol=1e-12, rtol=0):
            raise ValueError("covariance is not symmetric")

    def index(self, names: Iterable[str]) -> list[int]:
        pos = {v: i for i, v in enumerate(self.nodes)}
        return [pos[v] for v in names]

    def marginal(self, names: Sequence[str]) -> "Gaussian":
        idx = self.index(names)
        return Gaussian(tuple(names), self.mean[idx], self.cov[np.ix_(idx, idx)])


@dataclass(frozen=True)
class LinearSEM:
    dag: MixedGraph
    coef: Mapping[tuple[str, str], float]
    noise_var: Mapping[str, float]

    def __post_init__(self):
        if self.dag.kind is not GraphClass.DAG:
            raise GraphValidationError("a linear SEM needs a DAG")
        if set(self.coef) != set(self.dag.directed_edges()):
            raise ValueError("coefficients must be keyed exactly by the DAG's edges")
        if set(self.noise_var) != set(self.dag.nodes) or min(self.noise_var.values(), default=1) <= 0:
            raise ValueError("every node needs a strictly positive noise variance")

    @classmethod
    def random(cls, dag: MixedGraph, rng: np.random.Generator,
               low: float = 0.1, high: float = 0.9) -> "LinearSEM":
        """Coefficients uniform on (low, high), unit noise variances."""
        coef = {e: float(rng.uniform(low, high)) for e in dag.directed_edges()}
        return cls(dag, coef, {v: 1.0 for v in dag.nodes})

    @classmethod
    def standardized(cls, dag: MixedGraph, coef: Mapping[tuple[str, str], float]) -> "LinearSEM":
        """Pick noise variances so that every variable has unit variance."""
        noise: dict[str, float] = {v: 1.0 for v in dag.nodes}
        # var(v) depends only on the noise of v and its ancestors, so one pass
        # in topological order fixes every variance in turn
        for v in topological_order(dag):
            cov = cls(dag, dict(coef), noise).matrices()[1]
            i = dag.nodes.index(v)
            resid = 1.0 - (cov[i, i] - noise[v])
            if resid <= 0:
                raise ValueError(f"coefficients too large to standardize {v}")
            noise[v] = resid
        return cls(dag, dict(coef), noise)

    def matrices(self, cut: Iterable[str] = ()) -> tuple[np.ndarray, np.ndarray]:
        """(B, cov) with B = (I - A)^-1 and cov = B D B^T; equations of ``cut`` removed."""
        nodes = self.dag.nodes
        pos = {v: i for i, v in enumerate(nodes)}
        cut = set(cut)
        n = len(nodes)
        A = np.zeros((n, n))
        for (u, v), c in self.coef.items():
            if v not in cut:
                A[pos[v], pos[u]] = c
        D = np.diag([0.0 if v in cut else self.noise_var[v] for v in nodes])
        B = np.linalg.solve(np.eye(n) - A, np.eye(n))
        return B, B @ D @ B.T


def topological_order(d: MixedGraph) -> list[str]:
    indeg = {v: len(d.parents(v)) for v in d.nodes}
    ready = sorted(v for v, k in indeg.items() if k == 0)
    out = []
    while ready:
        v = ready.pop(0)
        out.append(v)
        for c in d.children(v):
            indeg[c] -= 1
            if indeg[c] == 0:
                ready.append(c)
        ready.sort()
    return out


def observational_law(sem: LinearSEM) -> Gaussian:
    _, cov = sem.matrices()
    cov = (cov + cov.T) / 2
    return Gaussian(sem.dag.nodes, np.zeros(len(sem.dag.nodes)), cov)


def interventional_law(sem: LinearSEM, X: Sequence[str], x: Sequence[float]) -> Gaussian:
    """Law of the non-intervened nodes after setting X to the constants x."""
    X = list(X)
    x = np.asarray(x, dtype=float)
    if len(X) != len(x):
        raise ValueError("one value per intervened node")
    B, cov = sem.matrices(cut=X)
    nodes = sem.dag.nodes
    pos = {v: i for i, v in enumerate(nodes)}
    shift = np.zeros(len(nodes))
    for v, val in zip(X, x):
        shift[pos[v]] = val
    mean = B @ shift
    rest = [v for v in nodes if v not in set(X)]
    idx = [pos[v] for v in rest]
    sub = cov[np.ix_(idx, idx)]
    return Gaussian(tuple(rest), mean[idx], (sub + sub.T) / 2)


def _solve(block: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    if block.size == 0:
        return np.zeros((0,) + rhs.shape[1:])
    try:
        L = np.linalg.cholesky(block)
    except np.linalg.LinAlgError:
        try:
            L = np.linalg.cholesky(block + RIDGE * np.eye(len(block)))
        except np.linalg.LinAlgError as exc:
            raise SingularBlockError("conditioning block is singular") from exc
    tmp = np.linalg.solve(L, rhs)
    return np.linalg.solve(L.T, tmp)


def regression(gauss: Gaussian, on: Sequence[str]) -> tuple[list[str], np.ndarray, np.ndarray]:
    """(remaining nodes, coefficient matrix K, Schur-complement covariance).

    The conditional mean of the remaining nodes is ``mu2 + K (v - mu1)``.
    """
    on = list(on)
    rest = [v for v in gauss.nodes if v not in set(on)]
    i1, i2 = gauss.index(on), gauss.index(rest)
    S11 = gauss.cov[np.ix_(i1, i1)]
    S21 = gauss.cov[np.ix_(i2, i1)]
    S22 = gauss.cov[np.ix_(i2, i2)]
    K = _solve(S11, S21.T).T if on else np.zeros((len(rest), 0))
    cov = S22 - K @ S21.T
    return rest, K, (cov + cov.T) / 2


def condition(gauss: Gaussian, on: Sequence[str], values: Sequence[float]) -> Gaussian:
    """Conditional law of the other nodes given ``on = values``."""
    on = list(on)
    values = np.asarray(values, dtype=float)
    rest, K, cov = regression(gauss, on)
    mu1 = gauss.mean[gauss.index(on)]
    mu2 = gauss.mean[gauss.index(rest)]
    return Gaussian(tuple(rest), mu2 + K @ (values - mu1), cov)


# -- Wright path tracing --------------------------------------------------

def wright_covariance(sem: LinearSEM) -> np.ndarray:
    """Correlations of a standardized SEM as sums over collider-free paths."""
    d = sem.dag
    nodes = d.nodes
    n = len(nodes)
    out = np.eye(n)

    def coef(u, v):
        return sem.coef[(u, v)] if d.is_directed(u, v) else sem.coef[(v, u)]

    for i, a in enumerate(nodes):
        # DFS over simple paths from a; a path stays a trek while no collider appears
        stack = [((a,), 1.0, False)]
        while stack:
            path, prod, went_down = stack.pop()
            u = path[-1]
            for w in d.neighbors(u):
                if w in path:
                    continue
                down = d.is_directed(u, w)
                if went_down and not down:
                    continue  # u would be a collider
                p = prod * coef(u, w)
                j = nodes.index(w)
                if j > i:
                    out[i, j] += p
                    out[j, i] += p
                stack.append((path + (w,), p, went_down or down))
    return out


# -- adjustment identity ----------------------------------------------------

@dataclass(frozen=True)
class IdentityReport:
    max_mean_gap: float
    max_cov_gap: float
    trials: int
    seed: int
    gaps: tuple[tuple[float, float], ...] = field(default=(), repr=False)

    def holds(self, tol: float = 1e-8) -> bool:
        return self.max_mean_gap < tol and self.max_cov_gap < tol


def _affine(fn, dims: int) -> np.ndarray:
    """Columns [intercept, slope_1, ...] of an affine map evaluated at basis points."""
    base = np.asarray(fn(np.zeros(dims)))
    cols = [base]
    for k in range(dims):
        e = np.zeros(dims)
        e[k] = 1.0
        cols.append(np.asarray(fn(e)) - base)
    return np.column_stack(cols)


def identity_gap(sem: LinearSEM, X, Y, Z, S) -> tuple[float, float]:
    """Gaps between f(y | do(x), z) and the adjustment formula over S.

    Both sides are Gaussian in y with a mean affine in (x, z) and a constant
    covariance; the mean maps are compared coefficient by coefficient.
    """
    X, Y, Z, S = (sorted(v) for v in (X, Y, Z, S))
    nx, nz = len(X), len(Z)
    obs = observational_law(sem)

    def do_side(xz):
        law = interventional_law(sem, X, xz[:nx])
        cond = condition(law.marginal(Y + Z), Z, xz[nx:]) if Z else law.marginal(Y)
        return cond.mean, cond.cov

    # adjustment side: E[Y | x, z, s] with s integrated against f(s | z)
    rest, K, cov_y = regression(obs.marginal(Y + X + Z + S), X + Z + S)
    Kx, Kz, Ks = K[:, :nx], K[:, nx:nx + nz], K[:, nx + nz:]
    if S:
        s_rest, Ksz, cov_s = regression(obs.marginal(S + Z), Z)
    else:
        Ksz, cov_s = np.zeros((0, nz)), np.zeros((0, 0))

    def adj_side(xz):
        x, z = xz[:nx], xz[nx:]
        s_mean = Ksz @ z if S else np.zeros(0)
        return Kx @ x + Kz @ z + Ks @ s_mean

    dims = nx + nz
    m_do = _affine(lambda v: do_side(v)[0], dims)
    m_adj = _affine(adj_side, dims)
    c_do = do_side(np.zeros(dims))[1]
    c_adj = cov_y + Ks @ cov_s @ Ks.T
    return float(np.max(np.abs(m_do - m_adj))), float(np.max(np.abs(c_do - c_adj)))


def verify_adjustment_identity(dag: MixedGraph, X, Y, Z, S, trials: int = 100, seed: int = 0,
                               low: float = 0.1, high: float = 0.9) -> IdentityReport:
    """Check the adjustment identity under ``trials`` random coefficient draws."""
    sets = [dag.check_nodes(v) for v in (X, Y, Z, S)]
    for i in range(4):
        for j in range(i + 1, 4):
            if sets[i] & sets[j]:
                raise ValueError("X, Y, Z and S must be pairwise disjoint")
    rng = np.random.default_rng(seed)
    gaps = tuple(identity_gap(LinearSEM.random(dag, rng, low, high), *sets) for _ in range(trials))
    return IdentityReport(max((g[0] for g in gaps), default=0.0),
                          max((g[1] for g in gaps), default=0.0), trials, seed, gaps)


def verify_over_class(g: MixedGraph, X, Y, Z, S, trials: int = 100, seed: int = 0) -> IdentityReport:
    """Run the identity check in every DAG represented by a DAG or MPDAG."""
    from .oracle import enumerate_dag_extensions

    if g.kind is GraphClass.PAG:
        raise GraphValidationError("SEM verification needs a DAG or MPDAG")
    gaps: list[tuple[float, float]] = []
    for k, d in enumerate(enumerate_dag_extensions(g)):
        gaps += verify_adjustment_identity(d, X, Y, Z, S, trials, seed + k).gaps
    return IdentityReport(max(x[0] for x in gaps), max(x[1] for x in gaps), trials, seed, tuple(gaps))


# -- non-identifiability witness -------------------------------------------

@dataclass(frozen=True)
class WitnessReport:
    path: tuple[str, ...]
    law1: Gaussian
    law2: Gaussian
    effect1: float
    effect2: float
    gap: float
    observational_gap: float


def _chain_sem(nodes, path, reverse_first: bool, c: float) -> LinearSEM:
    edges = []
    for k, (u, v) in enumerate(zip(path, path[1:])):
        if k == 0 and reverse_first:
            u, v = v, u
        edges.append((u, v))
    dag = MixedGraph(nodes, [Edge.of(u, v, Mark.TAIL, Mark.ARROW) for u, v in edges], GraphClass.DAG)
    return LinearSEM.standardized(dag, {e: c for e in edges})


def nonidentifiability_witness(g: MixedGraph, X, Y, Z=(), coef: float = 0.5) -> WitnessReport:
    """Two path-only models with the same observational law but different effects.

    The path is the shortest proper possibly causal path from X to Y that
    starts with an undirected edge and avoids Z. One model orients it
    causally; the other reverses its first edge.
    """
    from .criterion import check_amenability, check_query
    from .paths import possibly_causal_paths

    X, Y, Z, _ = check_query(g, X, Y, Z)
    if g.kind is GraphClass.PAG:
        raise PreconditionError("graph-class", "the witness construction needs a DAG or MPDAG")
    if check_amenability(g, X, Y).satisfied:
        raise PreconditionError("amenable", "X and Y are amenable; no witness exists")
    cands = [p for p in possibly_causal_paths(g, X, Y, first_step=g.is_undirected)
             if not set(p.nodes) & Z]
    if not cands:
        raise PreconditionError("no-witness-path", "every offending path passes through Z")
    path = cands[0].nodes
    x, y = path[0], path[-1]
    sem1 = _chain_sem(g.nodes, path, False, coef)
    sem2 = _chain_sem(g.nodes, path, True, coef)
    obs_gap = float(np.max(np.abs(observational_law(sem1).cov - observational_law(sem2).cov)))
    zs = sorted(Z)

    def effect(sem):
        law = interventional_law(sem, [x], [1.0])
        if zs:
            law = condition(law, zs, np.zeros(len(zs)))
        return law, float(law.mean[law.index([y])[0]])

    law1, e1 = effect(sem1)
    law2, e2 = effect(sem2)
    return WitnessReport(path, law1, law2, e1, e2, abs(e1 - e2), obs_gap)
