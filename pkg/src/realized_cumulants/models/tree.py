"""Finite-state discrete-time models with exact conditional cumulants."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..bell import N_MAX, bell_eval
from ..cumulants import conditional_cumulants_from_moments
from ..exceptions import CapacityError, ModelError
from ..paths import MultiPath
from .simulators import path_rng

__all__ = [
    "TreeModel",
    "CumulantTree",
    "tree_backward_induction",
    "tree_enumerate_paths",
    "tree_sample_paths",
    "increment_bell_residuals",
    "MAX_ENUMERATED_PATHS",
]

MAX_ENUMERATED_PATHS = 10**6
PROB_TOL = 1e-14


@dataclass
class TreeModel:
    """Finite-state tree on integer times ``0..depth``.

    Parameters
    ----------
    transitions : list
        ``transitions[t][i]`` is a list of ``(child_index, probability)``
        pairs for node ``i`` at time ``t``.
    payoffs : array_like
        Terminal random variable ``X``, one value per node at ``depth``.
    initial : array_like, optional
        Distribution over the nodes at time 0.  Defaults to a single root.
    labels : list, optional
        Free-form per-level node labels, kept only for round-tripping JSON.
    """

    transitions: list[list[list[tuple[int, float]]]]
    payoffs: np.ndarray
    initial: np.ndarray | None = None
    labels: list | None = field(default=None, repr=False)

    def __post_init__(self):
        self.payoffs = np.asarray(self.payoffs, dtype=float).reshape(-1)
        self.transitions = [
            [[(int(c), float(p)) for c, p in node] for node in level] for level in self.transitions
        ]
        if self.initial is None:
            n0 = len(self.transitions[0]) if self.transitions else self.payoffs.size
            if n0 != 1:
                raise ModelError("a multi-node initial level needs an explicit initial distribution")
            self.initial = np.ones(1)
        self.initial = np.asarray(self.initial, dtype=float).reshape(-1)
        self.validate()

    @property
    def depth(self) -> int:
        return len(self.transitions)

    def level_sizes(self) -> list[int]:
        sizes = [len(level) for level in self.transitions]
        sizes.append(self.payoffs.size)
        return sizes

    def validate(self) -> None:
        sizes = self.level_sizes()
        if sizes[0] != self.initial.size:
            raise ModelError("initial distribution size does not match level 0")
        if np.any(self.initial <= 0) or abs(self.initial.sum() - 1.0) > PROB_TOL:
            raise ModelError("initial probabilities must be positive and sum to 1")
        for t, level in enumerate(self.transitions):
            for i, node in enumerate(level):
                if not node:
                    raise ModelError(f"node ({t}, {i}) has no children")
                probs = [p for _, p in node]
                if min(probs) <= 0 or abs(sum(probs) - 1.0) > PROB_TOL:
                    raise ModelError(
                        f"transition probabilities at node ({t}, {i}) must be positive and sum to 1"
                    )
                for c, _ in node:
                    if not 0 <= c < sizes[t + 1]:
                        raise ModelError(f"node ({t}, {i}) points to missing child {c}")
        mass = self.level_mass(self.depth)
        if abs(mass.sum() - 1.0) > 1e-12:
            raise ModelError("total path probability does not sum to 1")

    def transition_matrix(self, t: int) -> np.ndarray:
        """Row-stochastic matrix from level ``t`` to level ``t + 1``."""
        sizes = self.level_sizes()
        mat = np.zeros((sizes[t], sizes[t + 1]))
        for i, node in enumerate(self.transitions[t]):
            for c, p in node:
                mat[i, c] += p
        return mat

    def reach(self, s: int, u: int) -> np.ndarray:
        """``reach(s, u)[i, j] = P(node j at u | node i at s)``."""
        if not 0 <= s <= u <= self.depth:
            raise ValueError(f"need 0 <= s <= u <= {self.depth}, got s={s}, u={u}")
        mat = np.eye(self.level_sizes()[s])
        for t in range(s, u):
            mat = mat @ self.transition_matrix(t)
        return mat

    def level_mass(self, t: int) -> np.ndarray:
        """Unconditional probability of each node at time ``t``."""
        return self.initial @ self.reach(0, t)

    def n_paths(self) -> int:
        counts = np.ones(self.payoffs.size, dtype=object)
        for level in reversed(self.transitions):
            counts = np.array([sum(counts[c] for c, _ in node) for node in level], dtype=object)
        return int(sum(counts))

    @classmethod
    def binomial_walk(cls, steps: int, up: float = 1.0, down: float = -1.0, p: float = 0.5,
                      start: float = 0.0) -> "TreeModel":
        """Recombining walk ``M_t``; node ``i`` at time ``t`` has made ``i`` up-moves.

        The payoff is ``M_steps``.  It is a martingale when ``p*up + (1-p)*down == 0``.
        """
        if steps < 0:
            raise ValueError("steps must be non-negative")
        transitions = [
            [[(i + 1, p), (i, 1.0 - p)] for i in range(t + 1)] for t in range(steps)
        ]
        payoffs = [start + i * up + (steps - i) * down for i in range(steps + 1)]
        labels = [[start + i * up + (t - i) * down for i in range(t + 1)] for t in range(steps + 1)]
        return cls(transitions, payoffs, labels=labels)

    def to_dict(self) -> dict:
        labels = self.labels
        if labels is None:
            labels = [list(range(n)) for n in self.level_sizes()]
        return {
            "depth": self.depth,
            "nodes": labels,
            "transitions": [[[[c, p] for c, p in node] for node in level] for level in self.transitions],
            "payoffs": self.payoffs.tolist(),
            "initial": self.initial.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TreeModel":
        try:
            model = cls(data["transitions"], data["payoffs"], data.get("initial"), data.get("nodes"))
        except (KeyError, TypeError) as exc:
            raise ModelError(f"malformed tree definition: {exc}") from exc
        if "depth" in data and int(data["depth"]) != model.depth:
            raise ModelError("declared depth does not match transitions")
        if "nodes" in data and [len(level) for level in data["nodes"]] != model.level_sizes():
            raise ModelError("declared nodes do not match transitions")
        return model

    @classmethod
    def load(cls, path) -> "TreeModel":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def dump(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2))


@dataclass
class CumulantTree:
    """Conditional moments and cumulants of the payoff at every node.

    ``moments[t]`` and ``cumulants[t]`` have shape ``(n_nodes_t, order)``;
    column ``k-1`` holds ``E[X^k | node]`` and ``X^(k)`` at that node.
    """

    order: int
    moments: list[np.ndarray]
    cumulants: list[np.ndarray]

    @property
    def depth(self) -> int:
        return len(self.cumulants) - 1


def tree_backward_induction(model: TreeModel, order: int, n_max: int | None = None) -> CumulantTree:
    """Conditional moments by backward expectation, cumulants node by node."""
    if n_max is None:
        n_max = N_MAX
    if not 1 <= order <= n_max:
        raise CapacityError(f"order must be in 1..{n_max}, got {order}")
    powers = np.arange(1, order + 1)
    moments = [None] * (model.depth + 1)
    moments[-1] = model.payoffs[:, None] ** powers
    for t in range(model.depth - 1, -1, -1):
        moments[t] = model.transition_matrix(t) @ moments[t + 1]
    cumulants = [conditional_cumulants_from_moments(m, n_max) for m in moments]
    # the terminal conditional law is a point mass
    cumulants[-1][:, 1:] = 0.0
    cumulants[-1][:, 0] = model.payoffs
    return CumulantTree(order, moments, cumulants)


def tree_enumerate_paths(model: TreeModel, ct: CumulantTree,
                         max_paths: int = MAX_ENUMERATED_PATHS) -> list[tuple[float, MultiPath]]:
    """Every trajectory with its probability, carrying ``X^(1..order)`` on grid ``0..depth``."""
    total = model.n_paths()
    if total > max_paths:
        raise CapacityError(f"tree has {total} paths, enumeration budget is {max_paths}")
    grid = np.arange(model.depth + 1, dtype=float)
    out = []

    def walk(t, node, prob, trail):
        trail = trail + [node]
        if t == model.depth:
            values = np.array([ct.cumulants[s][i] for s, i in enumerate(trail)])
            out.append((prob, MultiPath(grid, values)))
            return
        for c, p in model.transitions[t][node]:
            walk(t + 1, c, prob * p, trail)

    for root, p0 in enumerate(model.initial):
        walk(0, root, float(p0), [])
    return out


def increment_bell_residuals(model: TreeModel, ct: CumulantTree) -> np.ndarray:
    """Largest ``|E[B_k(X_u - X_t) | node]|`` over nodes and ``t <= u``, for each ``k``.

    Returns an array of length ``ct.order`` (entry ``k-1`` for ``B_k``).
    """
    worst = np.zeros(ct.order)
    for t in range(model.depth + 1):
        for u in range(t, model.depth + 1):
            reach = model.reach(t, u)
            diff = ct.cumulants[u][None, :, :] - ct.cumulants[t][:, None, :]
            for k in range(1, ct.order + 1):
                cond = np.einsum("ij,ij->i", reach, bell_eval(diff[..., :k]))
                worst[k - 1] = max(worst[k - 1], np.max(np.abs(cond)))
    return worst


def tree_sample_paths(model: TreeModel, ct: CumulantTree, n_paths: int, seed: int) -> list[MultiPath]:
    """Random trajectories; path ``i`` uses the stream of ``(seed, i)``."""
    grid = np.arange(model.depth + 1, dtype=float)
    out = []
    for pid in range(n_paths):
        rng = path_rng(seed, pid)
        node = int(rng.choice(model.initial.size, p=model.initial))
        trail = [ct.cumulants[0][node]]
        for t in range(model.depth):
            children = model.transitions[t][node]
            pick = rng.choice(len(children), p=[p for _, p in children])
            node = children[pick][0]
            trail.append(ct.cumulants[t + 1][node])
        out.append(MultiPath(grid, np.array(trail)))
    return out
