"""PCA over binary project contexts and nearest-project ranking.

The covariance matrix (mean-centred, n-1 denominator, no scaling) is
eigen-decomposed with cyclic Jacobi rotations from :mod:`procrec.kernels`.
Rows are fitted in ascending game-name order so the model does not depend on
the order of the input matrix.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .context import ContextMatrix, ContextVector, append_context

JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
NEGATIVE_EIGEN_TOL = 1e-9
# entries within this of a column's largest magnitude tie for the sign choice
SIGN_TIE_TOL = 1e-12
# distances closer than this are treated as ties and ordered by game name
TIE_DECIMALS = 9
# rounding noise floor: smaller distances are reported as exactly 0
DISTANCE_FLOOR = 1e-12
# biplot export writes values below this magnitude as 0
EXPORT_ZERO = 1e-12


class PcaError(ValueError):
    pass


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PcaModel:
    ids: tuple[str, ...]
    games: tuple[str, ...]
    mean: np.ndarray
    eigenvalues: np.ndarray  # all of them, descending
    components: np.ndarray  # (n_variables, retained), orthonormal columns
    scores: np.ndarray  # (n_games, retained)
    sweeps: int = 0

    @property
    def n_components(self) -> int:
        return self.components.shape[1]

    @property
    def dimension(self) -> int:
        return self.components.shape[0]

    def score_of(self, game: str) -> np.ndarray:
        return self.scores[self.games.index(game)]

    def explained_variance_ratio(self) -> np.ndarray:
        total = float(self.eigenvalues.sum())
        if total == 0.0:
            return np.zeros(self.n_components)
        return self.eigenvalues[: self.n_components] / total

    def same_as(self, other: "PcaModel") -> bool:
        """Bit-for-bit equality of every array and label."""
        return (
            self.ids == other.ids
            and self.games == other.games
            and all(
                np.array_equal(a, b)
                for a, b in (
                    (self.mean, other.mean),
                    (self.eigenvalues, other.eigenvalues),
                    (self.components, other.components),
                    (self.scores, other.scores),
                )
            )
        )


def covariance(data: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Column means and the symmetric (n-1)-denominator covariance matrix."""
    data = np.asarray(data, dtype=np.float64)
    n = data.shape[0]
    mean = data.mean(axis=0)
    centred = data - mean
    cov = centred.T @ centred / (n - 1)
    return mean, (cov + cov.T) / 2.0


def orient(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is positive (first index on ties)."""
    out = vectors.copy()
    for j in range(out.shape[1]):
        mag = np.abs(out[:, j])
        i = int(np.flatnonzero(mag >= mag.max() - SIGN_TIE_TOL)[0])
        if out[i, j] < 0:
            out[:, j] = -out[:, j]
    return out


def symmetric_eigen(cov: np.ndarray) -> tuple[np.ndarray, np.ndarray, int]:
    """Descending eigenvalues and oriented eigenvector columns of ``cov``."""
    w, v, sweeps = kernels.jacobi_eigh(cov, JACOBI_TOL, JACOBI_MAX_SWEEPS)
    order = sorted(range(len(w)), key=lambda i: (-w[i], i))
    w = w[order]
    v = v[:, order]
    if w.size and w[-1] < -NEGATIVE_EIGEN_TOL:
        raise ArithmeticError(f"covariance has a negative eigenvalue {w[-1]:.3e}")
    w = np.where(w < 0.0, 0.0, w)
    return w, orient(v), sweeps


def fit_pca(matrix: ContextMatrix, retained_components: int = 2) -> PcaModel:
    n_rows, n_vars = len(matrix), len(matrix.ids)
    if n_rows < 2:
        raise PcaError(f"need at least 2 projects to fit PCA, got {n_rows}")
    if not 1 <= retained_components <= n_vars:
        raise PcaError(f"retained_components must be in 1..{n_vars}, got {retained_components}")

    rows = sorted(matrix.rows, key=lambda r: r.game)
    data = np.array([r.values for r in rows], dtype=np.float64)
    mean, cov = covariance(data)
    w, v, sweeps = symmetric_eigen(cov)
    comps = v[:, :retained_components]
    scores = (data - mean) @ comps
    return PcaModel(
        ids=matrix.ids,
        games=tuple(r.game for r in rows),
        mean=_frozen(mean),
        eigenvalues=_frozen(w),
        components=_frozen(comps),
        scores=_frozen(scores),
        sweeps=sweeps,
    )


def project(model: PcaModel, vector: ContextVector | Sequence[float] | np.ndarray) -> np.ndarray:
    x = vector.as_array() if isinstance(vector, ContextVector) else np.asarray(vector, dtype=np.float64)
    if x.shape != (model.dimension,):
        raise PcaError(f"vector has {x.size} values, model expects {model.dimension}")
    return (x - model.mean) @ model.components


@dataclass(frozen=True)
class SimilarityRanking:
    target: str
    neighbors: tuple[tuple[str, float], ...]

    @property
    def games(self) -> list[str]:
        return [g for g, _ in self.neighbors]

    def to_json(self) -> dict:
        return {
            "target": self.target,
            "neighbors": [{"game": g, "distance": d} for g, d in self.neighbors],
        }


def rank_points(
    target: str,
    coords: np.ndarray,
    games: Sequence[str],
    points: np.ndarray,
    k: int | None = 5,
    threshold: float | None = None,
) -> SimilarityRanking:
    """Order candidate points by Euclidean distance from ``coords``.

    With ``threshold`` set, every candidate within that distance is returned
    and ``k`` is ignored.
    """
    if threshold is None and (k is None or k < 1):
        raise PcaError(f"k must be >= 1, got {k}")
    keep = [i for i, g in enumerate(games) if g != target]
    if not keep:
        raise PcaError(f"no candidate projects besides {target!r}")
    pts = np.asarray(points, dtype=np.float64)[keep]
    dist = np.sqrt(kernels.squared_distances(pts, np.asarray(coords, dtype=np.float64)))
    dist[dist < DISTANCE_FLOOR] = 0.0
    ranked = sorted(
        ((games[i], float(d)) for i, d in zip(keep, dist)),
        key=lambda gd: (round(gd[1], TIE_DECIMALS), gd[0]),
    )
    if threshold is not None:
        ranked = [gd for gd in ranked if gd[1] <= threshold]
    else:
        ranked = ranked[:k]
    return SimilarityRanking(target, tuple(ranked))


def find_similar(
    model: PcaModel, target: ContextVector, k: int | None = 5, threshold: float | None = None
) -> SimilarityRanking:
    return rank_points(target.game, project(model, target), model.games, model.scores, k, threshold)


def rank_target(
    matrix: ContextMatrix,
    target: ContextVector,
    k: int | None = 5,
    components: int = 2,
    include_target: bool = True,
    threshold: float | None = None,
) -> tuple[PcaModel, SimilarityRanking]:
    """Fit with the target appended (default) or fit without it and project it."""
    base = ContextMatrix([r for r in matrix.rows if r.game != target.game], matrix.ids)
    fit_on = append_context(base, target) if include_target else base
    model = fit_pca(fit_on, components)
    return model, find_similar(model, target, k, threshold)


@dataclass(frozen=True)
class Biplot:
    scores: tuple[tuple[str, float, float], ...]
    loadings: tuple[tuple[str, float, float], ...]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("#scores\ngame,pc1,pc2\n")
        for name, a, b in self.scores:
            buf.write(f"{_csv_name(name)},{_fmt(a)},{_fmt(b)}\n")
        buf.write("#loadings\nvariable,pc1,pc2\n")
        for name, a, b in self.loadings:
            buf.write(f"{_csv_name(name)},{_fmt(a)},{_fmt(b)}\n")
        return buf.getvalue()


def _fmt(x: float) -> str:
    if abs(x) < EXPORT_ZERO or math.isnan(x):
        x = 0.0
    return f"{x:.9g}"


def _csv_name(name: str) -> str:
    if any(c in name for c in ',"\n'):
        return '"' + name.replace('"', '""') + '"'
    return name


def export_biplot(model: PcaModel) -> Biplot:
    if model.n_components < 2:
        raise PcaError("biplot needs at least 2 retained components")
    scores = tuple((g, float(s[0]), float(s[1])) for g, s in zip(model.games, model.scores))
    loadings = tuple(
        (vid, float(c[0]), float(c[1])) for vid, c in zip(model.ids, model.components)
    )
    return Biplot(scores, loadings)
