"""Disjoint agent groups: union bookkeeping, the group queue, time division.

Agents enter the structure only through :meth:`GroupSet.union` (the Group()
calls fired on conflicts and bumps); agents never involved in a conflict stay
out of every group.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field


class GroupSet:
    """Union-find over agent ids, tracking which agents were ever grouped.

    ``frozen`` agents (forced assignments inside LaCAM) are excluded: unions
    involving them are ignored, so they behave like static obstacles.
    """

    def __init__(self, n: int, frozen: tuple[int, ...] | frozenset[int] = ()):
        self.n = n
        self._parent = list(range(n))
        self._members: dict[int, list[int]] = {}
        self._first_seq: dict[int, int] = {}
        self.touched: set[int] = set()
        self.frozen = frozenset(frozen)
        self._seq = 0

    def find(self, k: int) -> int:
        parent = self._parent
        root = k
        while parent[root] != root:
            root = parent[root]
        while parent[k] != root:
            parent[k], k = root, parent[k]
        return root

    def _touch(self, k: int) -> None:
        # An untouched agent is always its own root: unions require a touch.
        if k not in self.touched:
            self.touched.add(k)
            self._members[k] = [k]
            self._first_seq[k] = self._seq
            self._seq += 1

    def union(self, k: int, j: int) -> None:
        """Merge the groups of interacting agents ``k`` and ``j``. Idempotent."""
        if k == j:
            raise ValueError("an agent cannot be grouped with itself")
        if k in self.frozen or j in self.frozen:
            return
        self._touch(k)
        self._touch(j)
        rk, rj = self.find(k), self.find(j)
        if rk == rj:
            return
        if len(self._members[rk]) < len(self._members[rj]):
            rk, rj = rj, rk
        self._parent[rj] = rk
        self._members[rk].extend(self._members.pop(rj))
        self._first_seq[rk] = min(self._first_seq[rk], self._first_seq.pop(rj))

    def component(self, k: int) -> frozenset[int]:
        """All agents grouped (transitively) with ``k``; {k} if never grouped."""
        if k not in self.touched:
            return frozenset((k,))
        return frozenset(self._members[self.find(k)])

    def touched_components(self) -> list[list[int]]:
        """Current groups of ever-grouped agents, in group-creation order."""
        roots = sorted(self._members, key=lambda r: self._first_seq[r])
        return [list(self._members[r]) for r in roots]


@dataclass
class Group:
    """A disjoint agent group awaiting (re)planning.

    ``agents`` is the AoP in descending priority; ``fb`` is the best known
    f-sum for the group (the pruning incumbent) and only ever decreases.
    """

    agents: tuple[int, ...]
    fb: int
    agent_set: frozenset[int] = field(init=False)
    fb_history: list[int] = field(init=False)

    def __post_init__(self):
        self.agent_set = frozenset(self.agents)
        self.fb_history = [self.fb]

    def record_better(self, fb: int) -> None:
        if fb >= self.fb:
            raise AssertionError(f"group F_b must strictly decrease: {fb} >= {self.fb}")
        self.fb = fb
        self.fb_history.append(fb)


GroupQueue = deque  # of Group, pairwise agent-disjoint


def extract_groups(
    groupset: GroupSet,
    priorities: list[float],
    group_cost,
) -> list[Group]:
    """Build Groups from the union-find state after the instrumented PIBT pass.

    One Group per component of ever-grouped agents, members sorted by
    descending priority, F_b initialized by ``group_cost(members)`` (the
    group's f-sum under the incumbent plan).
    """
    out = []
    for members in groupset.touched_components():
        members.sort(key=lambda a: priorities[a], reverse=True)
        out.append(Group(agents=tuple(members), fb=group_cost(members)))
    return out


def time_per_group(k: int, queue: GroupQueue, time_left: float) -> float:
    """Share of ``time_left`` for a popped group of ``k`` agents.

    The popped group counts toward the denominator alongside the groups still
    queued, so a lone group receives everything.
    """
    if k < 1:
        raise ValueError("group must contain at least one agent")
    total = k + sum(len(g.agents) for g in queue)
    return time_left * k / total


def remove_not_disjoint_with(queue: GroupQueue, new_group: Group) -> None:
    """Drop queued groups overlapping ``new_group``, then enqueue it."""
    survivors = [g for g in queue if not (g.agent_set & new_group.agent_set)]
    queue.clear()
    queue.extend(survivors)
    queue.append(new_group)
