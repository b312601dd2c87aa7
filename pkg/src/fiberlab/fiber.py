"""Randomly driven symbolic fibers.

A fiber system pairs a coordinate action with a product (per-coordinate
i.i.d.) symbol distribution on a fiber alphabet.  Configurations are
uncountable objects, so they are realized lazily: the symbol at a
coordinate is a deterministic keyed hash of (seed, canonical coordinate),
drawn on first visit and reused on every revisit.  Probabilities of
orbit-name cylinders are handled in the log2 domain, with zero carried as
an explicit flag; exact rational values back the small-block code
constructions.
"""

from __future__ import annotations

import itertools
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import hashlib
import numpy as np

from .actions import ACTION_KINDS, driving_size, identity_coordinate
from .driving import DrivingTrajectory, MarkovChainSpec, _as_fraction, cylinder_prob
from .errors import InfiniteInformationError, ResourceLimitError
from .words import Alphabet

EXHAUSTIVE_CAP = 2 ** 24
SUM_TOL = 1e-12


@dataclass(frozen=True)
class FiberSystemSpec:
    """A coordinate action plus a fully supported symbol distribution."""

    action_kind: str
    fiber_alphabet: Alphabet
    p: tuple[Fraction, ...]

    def __post_init__(self):
        if self.action_kind not in ACTION_KINDS:
            raise ValueError(f"unknown action kind {self.action_kind!r}")
        p = tuple(_as_fraction(x) for x in self.p)
        object.__setattr__(self, "p", p)
        if len(p) != self.fiber_alphabet.size:
            raise ValueError("p must be indexed by the fiber alphabet")
        if any(x <= 0 for x in p):
            raise ValueError("every fiber symbol must have positive probability")
        if abs(float(sum(p)) - 1.0) > SUM_TOL:
            raise ValueError("p must sum to 1")

    @classmethod
    def from_dict(cls, data: dict) -> "FiberSystemSpec":
        return cls(data["action"], Alphabet(tuple(data["fiber_alphabet"])), tuple(data["p"]))

    def to_dict(self) -> dict:
        return {
            "action": self.action_kind,
            "fiber_alphabet": list(self.fiber_alphabet.symbols),
            "p": [str(x) for x in self.p],
        }

    def symbol_entropy(self) -> float:
        """Shannon entropy of the per-coordinate distribution, in bits."""
        return -sum(float(q) * math.log2(float(q)) for q in self.p)


@dataclass(frozen=True)
class LogProbability:
    """A probability in the log2 domain; zero is an explicit flag."""

    log2: float
    is_zero: bool = False

    @property
    def value(self) -> float:
        return 0.0 if self.is_zero else 2.0 ** self.log2


def _check_letters(kind: str, letters) -> list[int]:
    limit = driving_size(kind)
    out = [int(x) for x in letters]
    for x in out:
        if x < 0 or (limit is not None and x >= limit):
            raise ValueError(f"driving letter {x} is not valid for action {kind!r}")
    return out


def _driving_letters(driving) -> Sequence[int]:
    if isinstance(driving, DrivingTrajectory):
        return driving.letters
    return driving


class SampledConfiguration:
    """Lazy realization of a random configuration.

    Symbols are drawn per coordinate with a keyed blake2b hash of the
    canonical coordinate key, mapped through the inverse CDF of p in
    alphabet order, and memoized so a coordinate's symbol never changes.
    """

    def __init__(self, spec: FiberSystemSpec, seed: int):
        seed = int(seed)
        if not 0 <= seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        self.spec = spec
        self.seed = seed
        self.assignments: dict[bytes, int] = {}
        self._key = seed.to_bytes(8, "little")
        acc = 0.0
        self._thresholds = []
        for q in spec.p:
            acc += float(q)
            self._thresholds.append(acc)

    def symbol_at(self, coordinate) -> int:
        key = coordinate.key
        sym = self.assignments.get(key)
        if sym is None:
            digest = hashlib.blake2b(key, digest_size=8, key=self._key).digest()
            u = int.from_bytes(digest, "little") / 2.0 ** 64
            sym = min(bisect_right(self._thresholds, u), len(self._thresholds) - 1)
            self.assignments[key] = sym
        return sym


@dataclass(frozen=True)
class OrbitName:
    """The fiber symbols read while a configuration is driven along alpha."""

    fiber_spec: FiberSystemSpec
    driving: np.ndarray
    letters: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        if len(self.driving) != len(self.letters):
            raise ValueError("orbit name must be as long as its driving word")

    def __len__(self) -> int:
        return len(self.letters)


def emit_name(spec: FiberSystemSpec, alpha, seed: int) -> OrbitName:
    """Drive a lazily sampled configuration along alpha and read its name.

    The i-th symbol is the configuration's inscription at the coordinate
    reached by the first i letters; revisited coordinates reuse the stored
    symbol, so the name is always consistent.
    """
    letters = _check_letters(spec.action_kind, _driving_letters(alpha))
    config = SampledConfiguration(spec, seed)
    coord = identity_coordinate(spec.action_kind)
    out = np.empty(len(letters), dtype=np.int64)
    last = len(letters) - 1
    for i, a in enumerate(letters):
        out[i] = config.symbol_at(coord)
        if i != last:
            coord = coord.step(a)
    return OrbitName(spec, np.asarray(letters, dtype=np.int64), out, seed)


def coordinate_pattern(kind: str, u) -> tuple[int, ...]:
    """First-occurrence pattern of the coordinates read along u.

    pattern[i] is the smallest j with c_j = c_i; positions with
    pattern[i] == i are the first visits.  Conditional cylinder values
    depend on u only through this pattern.
    """
    letters = _check_letters(kind, u)
    coord = identity_coordinate(kind)
    first: dict[bytes, int] = {}
    pattern = []
    last = len(letters) - 1
    for i, a in enumerate(letters):
        pattern.append(first.setdefault(coord.key, i))
        if i != last:
            coord = coord.step(a)
    return tuple(pattern)


def conditional_cylinder_prob(spec: FiberSystemSpec, u, v) -> LogProbability:
    """Probability that the orbit driven by u reads the fiber word v.

    Zero when v assigns conflicting symbols to a revisited coordinate;
    otherwise the product of p over the distinct coordinates visited.
    """
    v = [int(x) for x in v]
    pattern = coordinate_pattern(spec.action_kind, u)
    if len(pattern) != len(v):
        raise ValueError("driving and fiber words must have equal length")
    log2 = 0.0
    logp = [math.log2(float(q)) for q in spec.p]
    for i, j in enumerate(pattern):
        if not 0 <= v[i] < spec.fiber_alphabet.size:
            raise ValueError(f"fiber letter {v[i]} out of range")
        if j == i:
            log2 += logp[v[i]]
        elif v[i] != v[j]:
            return LogProbability(0.0, is_zero=True)
    return LogProbability(log2)


def conditional_cylinder_fraction(spec: FiberSystemSpec, u, v) -> Fraction:
    """Exact rational companion of conditional_cylinder_prob."""
    v = [int(x) for x in v]
    pattern = coordinate_pattern(spec.action_kind, u)
    if len(pattern) != len(v):
        raise ValueError("driving and fiber words must have equal length")
    prob = Fraction(1)
    for i, j in enumerate(pattern):
        if j == i:
            prob *= spec.p[v[i]]
        elif v[i] != v[j]:
            return Fraction(0)
    return prob


def information_function(spec: FiberSystemSpec, alpha, omega) -> float:
    """Bits of information in the orbit-name cylinder, -log2 of its measure.

    Raises InfiniteInformationError on an inconsistent (zero-probability)
    prefix pair.  Names produced by emit_name are always consistent.
    """
    lp = conditional_cylinder_prob(spec, _driving_letters(alpha), omega)
    if lp.is_zero:
        raise InfiniteInformationError("prefix pair has zero probability")
    return -lp.log2


@dataclass(frozen=True)
class ExactAveragedEntropy:
    """Averaged entropy of the first n orbit symbols and its per-symbol rate."""

    n: int
    bits: float

    @property
    def rate(self) -> float:
        return self.bits / self.n


def _expected_distinct(driving_spec: MarkovChainSpec, kind: str, n: int) -> float:
    """Expected number of distinct coordinates among c_0 .. c_{n-1}.

    Enumerates the positive-probability driving words depth first; only
    the first n-1 letters move the coordinate, so the tree is cut there.
    """
    size = driving_spec.alphabet.size
    pi = [float(x) for x in driving_spec.pi]
    Pi = [[float(x) for x in row] for row in driving_spec.Pi]
    root = identity_coordinate(kind)
    counts = {root.key: 1}
    acc = 0.0

    def rec(coord, depth, prob, prev):
        nonlocal acc
        if depth == n - 1:
            acc += prob * len(counts)
            return
        for letter in range(size):
            q = pi[letter] if prev is None else Pi[prev][letter]
            if q == 0.0:
                continue
            nxt = coord.step(letter)
            key = nxt.key
            counts[key] = counts.get(key, 0) + 1
            rec(nxt, depth + 1, prob * q, letter)
            counts[key] -= 1
            if not counts[key]:
                del counts[key]

    rec(root, 0, 1.0, None)
    return acc


def _averaged_entropy_enumerated(spec: FiberSystemSpec, driving_spec: MarkovChainSpec, n: int) -> float:
    """Oracle path: the full double sum over driving and fiber words.

    For every driving word u of positive probability, every fiber word v
    is scored with its exact conditional cylinder probability; no use is
    made of the product-measure collapse.
    """
    size = driving_spec.alphabet.size
    fiber_size = spec.fiber_alphabet.size
    logp = np.array([math.log2(float(q)) for q in spec.p])
    V = np.array(list(itertools.product(range(fiber_size), repeat=n)), dtype=np.int64)
    total = 0.0
    for u in itertools.product(range(size), repeat=n):
        nu = float(cylinder_prob(driving_spec, u))
        if nu == 0.0:
            continue
        coord = identity_coordinate(spec.action_kind)
        groups: dict[bytes, list[int]] = {}
        for i, a in enumerate(u):
            groups.setdefault(coord.key, []).append(i)
            if i + 1 < n:
                coord = coord.step(a)
        mask = np.ones(len(V), dtype=bool)
        log2mu = np.zeros(len(V))
        for positions in groups.values():
            cols = V[:, positions]
            if len(positions) > 1:
                mask &= (cols == cols[:, :1]).all(axis=1)
            log2mu += logp[V[:, positions[0]]]
        mu = np.exp2(log2mu[mask])
        total -= nu * float((mu * log2mu[mask]).sum())
    return total


def exact_averaged_entropy(
    spec: FiberSystemSpec,
    driving_spec: MarkovChainSpec,
    n: int,
    method: str = "fast",
) -> ExactAveragedEntropy:
    """Exact averaged entropy of the first n orbit symbols, in bits.

    The "fast" method uses the product-measure collapse: the inner fiber
    sum for a driving word equals (distinct coordinates) * H(p), so the
    value is E[distinct] * H(p).  The "enumerate" method is the
    independent oracle summing -mu log2 mu over every (u, v) pair.  Both
    enforce desk-scale caps and raise ResourceLimitError beyond them.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    fixed = driving_size(spec.action_kind)
    if fixed is not None and driving_spec.alphabet.size != fixed:
        raise ValueError(f"action {spec.action_kind!r} requires a driving alphabet of size {fixed}")
    size = driving_spec.alphabet.size
    if method == "fast":
        if size ** n > EXHAUSTIVE_CAP:
            raise ResourceLimitError(f"{size}**{n} driving words exceed the exhaustive cap")
        bits = _expected_distinct(driving_spec, spec.action_kind, n) * spec.symbol_entropy()
    elif method == "enumerate":
        if (size * spec.fiber_alphabet.size) ** n > EXHAUSTIVE_CAP:
            raise ResourceLimitError("full (u, v) enumeration exceeds the exhaustive cap")
        bits = _averaged_entropy_enumerated(spec, driving_spec, n)
    else:
        raise ValueError(f"unknown method {method!r}")
    return ExactAveragedEntropy(n, bits)


@dataclass(frozen=True)
class SmbRow:
    seed: int
    horizon: int
    information_bits: float

    @property
    def rate(self) -> float:
        return self.information_bits / self.horizon


@dataclass(frozen=True)
class SmbReport:
    """Per-seed information rates at checkpoints, with the exact curve."""

    rows: list
    exact_curve: list

    def csv_rows(self):
        exact = dict(self.exact_curve)
        for row in self.rows:
            yield {
                "n": row.horizon,
                "J_n": row.information_bits,
                "J_n_over_n": row.rate,
                "exact_h_n": exact.get(row.horizon, ""),
                "seed": row.seed,
            }


def information_curve(spec: FiberSystemSpec, alpha, seed: int, checkpoints) -> list[SmbRow]:
    """Information of the sampled orbit name at the given horizons."""
    letters = _check_letters(spec.action_kind, _driving_letters(alpha))
    cps = sorted({int(c) for c in checkpoints if 1 <= int(c) <= len(letters)})
    config = SampledConfiguration(spec, seed)
    logp = [math.log2(float(q)) for q in spec.p]
    coord = identity_coordinate(spec.action_kind)
    seen: set[bytes] = set()
    bits = 0.0
    rows = []
    ci = 0
    last = len(letters) - 1
    for i, a in enumerate(letters):
        key = coord.key
        if key not in seen:
            seen.add(key)
            bits -= logp[config.symbol_at(coord)]
        if ci < len(cps) and i + 1 == cps[ci]:
            rows.append(SmbRow(seed, cps[ci], bits))
            ci += 1
        if i != last:
            coord = coord.step(a)
    return rows


def smb_convergence(
    spec: FiberSystemSpec,
    driving_spec: MarkovChainSpec,
    n: int,
    seeds: Sequence[int],
    checkpoints=None,
    exact_cap: int = 2 ** 16,
) -> SmbReport:
    """Sampled per-symbol information rates against the exact entropy curve.

    For each seed one trajectory and one configuration are sampled and
    J/n is reported at logarithmically spaced horizons.  Horizons whose
    exhaustive enumeration stays below exact_cap driving words also get
    the exact rate for comparison.
    """
    from .actions import default_checkpoints
    from .driving import sample_trajectory

    if checkpoints is None:
        checkpoints = default_checkpoints(n)
    rows = []
    for seed in seeds:
        trajectory = sample_trajectory(driving_spec, n, seed)
        rows.extend(information_curve(spec, trajectory, seed, checkpoints))
    size = driving_spec.alphabet.size
    exact_curve = []
    for c in sorted({int(c) for c in checkpoints if 1 <= int(c) <= n}):
        if size ** c <= exact_cap:
            exact_curve.append((c, exact_averaged_entropy(spec, driving_spec, c).rate))
    return SmbReport(rows, exact_curve)
