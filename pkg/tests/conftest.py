"""Shared oracles and generators for the test suite.

The rho oracle analyses deterministic systems purely through function
iteration, independently of the graph/solver machinery it is used to
check.
"""

from __future__ import annotations

import random

from bfds.core import System, step_parallel


class RhoOracle:
    """Functional-graph analysis of a deterministic (fixed + parallel) system."""

    def __init__(self, sys: System):
        n = sys.n
        J = (1,) * n
        self.n = n
        self.step = {c: step_parallel(sys, c, J) for c in range(1 << n)}
        self.preds = {c: set() for c in range(1 << n)}
        for c, d in self.step.items():
            self.preds[d].add(c)
        self.on_cycle = set()
        seen_global = {}
        for start in range(1 << n):
            if start in seen_global:
                continue
            order = []
            position = {}
            c = start
            while c not in position and c not in seen_global:
                position[c] = len(order)
                order.append(c)
                c = self.step[c]
            if c in position:
                for x in order[position[c]:]:
                    self.on_cycle.add(x)
            for x in order:
                seen_global[x] = True
        self.tail = {}
        self.cycle_len = {}
        for c in range(1 << n):
            steps = 0
            x = c
            while x not in self.on_cycle:
                x = self.step[x]
                steps += 1
            self.tail[c] = steps
            entry = x
            length = 1
            x = self.step[entry]
            while x != entry:
                x = self.step[x]
                length += 1
            self.cycle_len[c] = length

    def fixed_points(self):
        return sorted(c for c in self.step if self.step[c] == c)

    def gardens(self):
        return sorted(c for c in self.preds if not self.preds[c])

    def count_cycles(self) -> int:
        remaining = set(self.on_cycle)
        count = 0
        while remaining:
            c = remaining.pop()
            count += 1
            x = self.step[c]
            while x != c:
                remaining.discard(x)
                x = self.step[x]
        return count


def seeded_rng(salt: int = 0) -> random.Random:
    return random.Random(0xB0D5 + salt)
