"""Search budgets and a level-synchronous frontier expander.

Frontier expansion may be spread over a thread pool, but results are merged
in frontier order so the outcome never depends on scheduling.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

DEFAULT_MAX_NODES = 10**6
DEFAULT_MAX_DEPTH = 10**4


@dataclass(frozen=True)
class SearchBudget:
    max_word_len: int
    max_nodes: int = DEFAULT_MAX_NODES
    max_depth: int = DEFAULT_MAX_DEPTH

    def __post_init__(self) -> None:
        if min(self.max_word_len, self.max_nodes, self.max_depth) <= 0:
            raise ValueError(f"budget values must be positive: {self}")

    def with_overrides(self, max_word_len=None, max_nodes=None, max_depth=None) -> SearchBudget:
        return SearchBudget(
            max_word_len if max_word_len is not None else self.max_word_len,
            max_nodes if max_nodes is not None else self.max_nodes,
            max_depth if max_depth is not None else self.max_depth,
        )


@dataclass(frozen=True)
class BudgetHit:
    nodes_expanded: int
    reason: str

    verdict = "budget-hit"


def expand_frontier(
    frontier: Sequence[T], expand: Callable[[T], R], threads: int = 1
) -> list[R]:
    if threads <= 1 or len(frontier) < 2 * threads:
        return [expand(node) for node in frontier]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(expand, frontier, chunksize=max(1, len(frontier) // (4 * threads))))
