"""Adjacency spectra, clustering into multiplicities, energy per vertex, and
the closed-form spectra of the extremal families."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from os import PathLike
from typing import Sequence

import numpy as np

from .errors import BadArgs, Infeasible, NoConvergence, ParseError, UnknownFamily
from .graphcore import Graph, bipartition

DEFAULT_TOL = 1e-9
DEFAULT_CTOL = 1e-6

COMPUTED = "computed"
CLOSED_FORM = "closed_form"
USER_SUPPLIED = "user_supplied"


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues sorted in descending order."""

    values: tuple[float, ...]
    origin: str = COMPUTED
    label: str | None = None

    @classmethod
    def from_values(cls, values: Sequence[float], origin: str = USER_SUPPLIED, label: str | None = None):
        return cls(tuple(sorted((float(v) for v in values), reverse=True)), origin, label)

    def __len__(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


@dataclass(frozen=True)
class ClusteredSpectrum:
    pairs: tuple[tuple[float, int], ...]
    origin: str = COMPUTED

    @property
    def n(self) -> int:
        return sum(m for _, m in self.pairs)

    def multiplicities(self) -> tuple[int, ...]:
        return tuple(m for _, m in self.pairs)

    def expand(self) -> Spectrum:
        vals = [v for v, m in self.pairs for _ in range(m)]
        return Spectrum(tuple(sorted(vals, reverse=True)), self.origin)

    def __str__(self) -> str:
        return "{" + ", ".join(f"{v:.10g}^{m}" for v, m in self.pairs) + "}"


def eigenvalues(g: Graph, tol: float = DEFAULT_TOL) -> Spectrum:
    """All adjacency eigenvalues of g.

    Bipartite graphs go through the singular values of the biadjacency
    block, so the result is exactly symmetric about zero.  Other graphs use
    LAPACK's symmetric solver.
    """
    if tol <= 0:
        raise BadArgs("tol must be positive")
    n = g.n
    if n == 0:
        return Spectrum(())
    parts = bipartition(g)
    try:
        if parts is not None:
            left, right = parts
            if not left or not right:
                return Spectrum((0.0,) * n)
            a = g.adjacency_matrix(float)
            sv = np.linalg.svd(a[np.ix_(left, right)], compute_uv=False)
            pos = np.sort(sv)[::-1]
            zeros = np.zeros(n - 2 * len(pos))
            vals = np.concatenate([pos, zeros, -pos[::-1]])
        else:
            vals = np.linalg.eigvalsh(g.adjacency_matrix(float))[::-1]
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    return Spectrum(tuple(float(v) for v in vals), COMPUTED)


def cluster(s: Spectrum, ctol: float = DEFAULT_CTOL) -> ClusteredSpectrum:
    """Greedy merge of neighbouring sorted values whose gap is <= ctol."""
    if ctol <= 0:
        raise BadArgs("ctol must be positive")
    groups: list[list[float]] = []
    for v in s.values:
        if groups and groups[-1][-1] - v <= ctol:
            groups[-1].append(v)
        else:
            groups.append([v])
    return ClusteredSpectrum(tuple((math.fsum(g) / len(g), len(g)) for g in groups), s.origin)


def energy(s: Spectrum) -> float:
    return math.fsum(abs(v) for v in s.values)


def energy_per_vertex(s: Spectrum | ClusteredSpectrum) -> float:
    if isinstance(s, ClusteredSpectrum):
        n = s.n
        if n < 1:
            raise BadArgs("empty spectrum")
        return math.fsum(abs(v) * m for v, m in s.pairs) / n
    if len(s) < 1:
        raise BadArgs("empty spectrum")
    return energy(s) / len(s)


def graph_energy_per_vertex(g: Graph, tol: float = DEFAULT_TOL) -> float:
    return energy_per_vertex(eigenvalues(g, tol))


def closed_form_spectrum(family: str, q: int) -> ClusteredSpectrum:
    """Reference spectra for the incidence graphs of

    * ``projective_plane`` of order q,
    * ``semiplane_parallel``: AG(2, q) minus a parallel class,
    * ``semiplane_pencil``: AG(2, q) minus a pencil.

    Zero-multiplicity entries (small q) are dropped.
    """
    r = math.sqrt(q)
    if family == "projective_plane":
        pairs = [(q + 1.0, 1), (r, q * q + q), (-r, q * q + q), (-(q + 1.0), 1)]
    elif family == "semiplane_parallel":
        pairs = [(float(q), 1), (r, q * (q - 1)), (0.0, 2 * (q - 1)), (-r, q * (q - 1)), (-float(q), 1)]
    elif family == "semiplane_pencil":
        mult = q * q - q - 2
        pairs = [(float(q), 1), (r, mult), (1.0, q), (-1.0, q), (-r, mult), (-float(q), 1)]
    else:
        raise UnknownFamily(family)
    # q = 2 pencil: sqrt(2) has multiplicity 0; q = 1 never occurs
    pairs = [(v, m) for v, m in pairs if m > 0]
    pairs.sort(key=lambda vm: -vm[0])
    return ClusteredSpectrum(tuple(pairs), CLOSED_FORM)


def srg_spectrum(v: int, k: int, lam: int, mu: int) -> ClusteredSpectrum:
    """Spectrum of a strongly regular graph with parameters (v, k, lam, mu).

    Raises Infeasible when the eigenvalue multiplicities are negative or
    not integers.
    """
    if not v > k >= 1 or lam < 0 or mu < 0:
        raise Infeasible(f"bad parameters ({v}, {k}, {lam}, {mu})")
    disc = (lam - mu) ** 2 + 4 * (k - mu)
    if disc <= 0:
        raise Infeasible(f"parameters ({v}, {k}, {lam}, {mu}) give a degenerate discriminant")
    root = math.sqrt(disc)
    isq = math.isqrt(disc)
    if isq * isq == disc:
        # integral eigenvalues: keep them exact
        theta = (lam - mu + isq) / 2
        tau = (lam - mu - isq) / 2
    else:
        theta = (lam - mu + root) / 2
        tau = (lam - mu - root) / 2
    skew = (2 * k + (v - 1) * (lam - mu)) / root
    f = ((v - 1) - skew) / 2
    g = ((v - 1) + skew) / 2
    for mult in (f, g):
        if mult < -1e-9 or abs(mult - round(mult)) > 1e-9:
            raise Infeasible(f"parameters ({v}, {k}, {lam}, {mu}) give multiplicities {f:.6g}, {g:.6g}")
    pairs = [(float(k), 1), (theta, int(round(f))), (tau, int(round(g)))]
    return ClusteredSpectrum(tuple((val, m) for val, m in pairs if m > 0), CLOSED_FORM)


# -- spectrum files ----------------------------------------------------------


def parse_spectrum(text: str) -> Spectrum:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno) from exc
    if not isinstance(data, dict) or "eigenvalues" not in data:
        raise ParseError("spectrum file must be an object with key 'eigenvalues'")
    vals = data["eigenvalues"]
    if not isinstance(vals, list) or not vals:
        raise ParseError("'eigenvalues' must be a non-empty array")
    if not all(isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x) for x in vals):
        raise ParseError("'eigenvalues' must contain only finite numbers")
    label = data.get("label")
    if label is not None and not isinstance(label, str):
        raise ParseError("'label' must be a string")
    return Spectrum.from_values(vals, USER_SUPPLIED, label)


def read_spectrum(path: str | PathLike) -> Spectrum:
    with open(path, encoding="utf-8") as fh:
        return parse_spectrum(fh.read())


def write_spectrum(s: Spectrum, path: str | PathLike) -> None:
    data: dict = {"eigenvalues": list(s.values)}
    if s.label is not None:
        data["label"] = s.label
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=1)
        fh.write("\n")
