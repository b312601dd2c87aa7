"""Markov driving measures: cylinder probabilities, chain diagnostics,
trajectory sampling and the plain block coder.

Probabilities are held as exact fractions so that cylinder values and the
integer codeword lengths derived from them are free of float rounding.
All entropies and rates are reported in bits (binary logarithm).
"""

from __future__ import annotations

import math
import warnings
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import ModelMismatchError
from .kraft import shannon_length
from .words import Alphabet, Word

STATIONARY_TOL = 1e-10
SUM_TOL = 1e-12

Z2_GENERATOR_LABELS = ("+e1", "-e1", "+e2", "-e2")
F2_GENERATOR_LABELS = ("a", "A", "b", "B")


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, (float, np.floating)):
        return Fraction(float(x))
    raise ValueError(f"cannot interpret {x!r} as a probability")


@dataclass(frozen=True)
class MarkovChainSpec:
    """Initial vector pi and row-stochastic matrix Pi over a driving alphabet.

    A Bernoulli chain is the special case where every row of Pi equals one
    fixed distribution.
    """

    alphabet: Alphabet
    pi: tuple[Fraction, ...]
    Pi: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        s = self.alphabet.size
        pi = tuple(_as_fraction(x) for x in self.pi)
        Pi = tuple(tuple(_as_fraction(x) for x in row) for row in self.Pi)
        object.__setattr__(self, "pi", pi)
        object.__setattr__(self, "Pi", Pi)
        if len(pi) != s or any(len(row) != s for row in Pi) or len(Pi) != s:
            raise ValueError("pi and Pi must be indexed by the alphabet")
        if any(x < 0 for x in pi) or any(x < 0 for row in Pi for x in row):
            raise ValueError("probabilities must be nonnegative")
        if abs(float(sum(pi)) - 1.0) > SUM_TOL:
            raise ValueError("pi must sum to 1")
        for i, row in enumerate(Pi):
            if abs(float(sum(row)) - 1.0) > SUM_TOL:
                raise ValueError(f"row {i} of Pi must sum to 1")

    @classmethod
    def bernoulli(cls, alphabet: Alphabet, p: Sequence) -> "MarkovChainSpec":
        p = tuple(_as_fraction(x) for x in p)
        return cls(alphabet, p, tuple(p for _ in range(alphabet.size)))

    @classmethod
    def from_dict(cls, data: dict) -> "MarkovChainSpec":
        alphabet = Alphabet(tuple(data["alphabet"]))
        return cls(alphabet, tuple(data["pi"]), tuple(tuple(row) for row in data["Pi"]))

    def to_dict(self) -> dict:
        return {
            "alphabet": list(self.alphabet.symbols),
            "pi": [str(x) for x in self.pi],
            "Pi": [[str(x) for x in row] for row in self.Pi],
        }


def driving_preset(name: str) -> MarkovChainSpec:
    """Built-in driving measures: "z2-uniform" and "f2-markov".

    z2-uniform is the uniform Bernoulli measure on the four lattice
    generators.  f2-markov is the nearest-neighbour measure on the four
    free-group generators: uniform start, transition 1/3 to each letter
    other than the inverse of the current one, so exactly the words with
    no letter followed by its inverse carry positive probability.
    """
    if name == "z2-uniform":
        return MarkovChainSpec.bernoulli(Alphabet(Z2_GENERATOR_LABELS), (Fraction(1, 4),) * 4)
    if name == "f2-markov":
        alphabet = Alphabet(F2_GENERATOR_LABELS)
        inverse = (1, 0, 3, 2)
        rows = tuple(
            tuple(Fraction(0) if j == inverse[i] else Fraction(1, 3) for j in range(4))
            for i in range(4)
        )
        return MarkovChainSpec(alphabet, (Fraction(1, 4),) * 4, rows)
    raise ValueError(f"unknown driving preset {name!r}")


def _letters_of(word) -> tuple[int, ...]:
    if isinstance(word, Word):
        return word.letters
    if isinstance(word, DrivingTrajectory):
        return tuple(int(x) for x in word.letters)
    return tuple(int(x) for x in word)


def cylinder_prob(spec: MarkovChainSpec, v) -> Fraction:
    """Exact probability of the cylinder of all sequences extending v.

    The empty word has probability 1.
    """
    letters = _letters_of(v)
    if isinstance(v, Word) and v.alphabet != spec.alphabet:
        raise ValueError("word is over a different alphabet")
    s = spec.alphabet.size
    if any(not 0 <= x < s for x in letters):
        raise ValueError("letter index out of range for the driving alphabet")
    if not letters:
        return Fraction(1)
    prob = spec.pi[letters[0]]
    for a, b in zip(letters, letters[1:]):
        if prob == 0:
            return Fraction(0)
        prob *= spec.Pi[a][b]
    return prob


def is_stationary(spec: MarkovChainSpec) -> bool:
    """Whether pi is invariant under Pi (pi^T Pi = pi^T), within 1e-10."""
    s = spec.alphabet.size
    for j in range(s):
        acc = sum(float(spec.pi[i]) * float(spec.Pi[i][j]) for i in range(s))
        if abs(acc - float(spec.pi[j])) > STATIONARY_TOL:
            return False
    return True


def is_irreducible(spec: MarkovChainSpec) -> bool:
    """Whether the directed graph of positive transitions is strongly connected."""
    s = spec.alphabet.size
    forward = [[j for j in range(s) if spec.Pi[i][j] > 0] for i in range(s)]
    backward = [[j for j in range(s) if spec.Pi[j][i] > 0] for i in range(s)]

    def reaches_all(adjacency):
        seen = {0}
        stack = [0]
        while stack:
            for j in adjacency[stack.pop()]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        return len(seen) == s

    return reaches_all(forward) and reaches_all(backward)


def bufetov_condition(spec: MarkovChainSpec) -> bool:
    """Whether every pair of states has a common predecessor with positive
    transition probability to both (a checkable sufficient condition for
    ergodicity of the driven skew product)."""
    s = spec.alphabet.size
    successors = [frozenset(j for j in range(s) if spec.Pi[i][j] > 0) for i in range(s)]
    for a in range(s):
        for b in range(a, s):
            if not any(a in successors[d] and b in successors[d] for d in range(s)):
                return False
    return True


def entropy_rate(spec: MarkovChainSpec) -> float:
    """Entropy rate of the stationary chain in bits per symbol.

    Requires a stationary spec; 0*log(0) is taken as 0.
    """
    if not is_stationary(spec):
        raise ValueError("entropy rate requires a stationary chain")
    rate = 0.0
    for i in range(spec.alphabet.size):
        pi_i = float(spec.pi[i])
        if pi_i == 0.0:
            continue
        for q in spec.Pi[i]:
            qf = float(q)
            if qf > 0.0:
                rate -= pi_i * qf * math.log2(qf)
    return rate


@dataclass(frozen=True)
class DrivingTrajectory:
    """A sampled finite trajectory of the driving chain."""

    spec: MarkovChainSpec
    seed: int
    letters: np.ndarray

    def __len__(self) -> int:
        return len(self.letters)


def _cumulative(probs) -> list[float]:
    acc = 0.0
    out = []
    for p in probs:
        acc += float(p)
        out.append(acc)
    return out


def _pick(cumulative: list[float], u: float) -> int:
    return min(bisect_right(cumulative, u), len(cumulative) - 1)


def sample_trajectory(spec: MarkovChainSpec, n: int, seed: int) -> DrivingTrajectory:
    """Sample n letters, the first from pi and each next from the Pi row of
    the current state.

    The generator is numpy's PCG64 seeded with the given 64-bit seed; one
    uniform draw per letter is mapped through the inverse CDF in alphabet
    order, so trajectories are bitwise reproducible for equal seeds.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if not is_stationary(spec):
        warnings.warn("sampling from a non-stationary chain", stacklevel=2)
    rng = np.random.Generator(np.random.PCG64(seed))
    us = rng.random(n)
    letters = np.empty(n, dtype=np.int64)
    if n == 0:
        return DrivingTrajectory(spec, seed, letters)
    pi_cum = _cumulative(spec.pi)
    row_cums = [_cumulative(row) for row in spec.Pi]
    if all(row == spec.Pi[0] for row in spec.Pi) and spec.pi == spec.Pi[0]:
        # Bernoulli fast path, identical to the generic loop
        cum = np.array(pi_cum)
        letters = np.minimum(np.searchsorted(cum, us, side="right"), len(cum) - 1).astype(np.int64)
        return DrivingTrajectory(spec, seed, letters)
    state = _pick(pi_cum, us[0])
    letters[0] = state
    for i in range(1, n):
        state = _pick(row_cums[state], us[i])
        letters[i] = state
    return DrivingTrajectory(spec, seed, letters)


def block_code_details(spec: MarkovChainSpec, trajectory, k: int):
    """Total and ideal bit counts of the plain per-block Shannon coder.

    Full k-blocks cost ceil(-log2 nu[block]) bits; the n mod k remainder
    symbols are raw coded at ceil(log2 |alphabet|) bits each.  Returns
    (total_bits, ideal_bits, m, tail_bits).
    """
    if k < 1:
        raise ValueError("block length must be >= 1")
    letters = _letters_of(trajectory)
    n = len(letters)
    m = n // k
    lengths: dict[tuple[int, ...], int] = {}
    ideals: dict[tuple[int, ...], float] = {}
    total = 0
    ideal = 0.0
    for i in range(m):
        block = letters[i * k : (i + 1) * k]
        if block not in lengths:
            prob = cylinder_prob(spec, block)
            if prob == 0:
                raise ModelMismatchError(f"block {block} has zero probability under the chain")
            lengths[block] = shannon_length(prob)
            ideals[block] = -math.log2(float(prob))
        total += lengths[block]
        ideal += ideals[block]
    raw = (spec.alphabet.size - 1).bit_length()
    tail_bits = (n - m * k) * raw
    return total + tail_bits, ideal, m, tail_bits


def block_code_rate(spec: MarkovChainSpec, trajectory, k: int) -> float:
    """Bits per symbol spent by the plain block coder on the trajectory."""
    letters = _letters_of(trajectory)
    if len(letters) == 0:
        return 0.0
    total, _, _, _ = block_code_details(spec, letters, k)
    return total / len(letters)
