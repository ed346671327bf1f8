"""Canonical set partitions, the unlabeled form of a coloring."""
from functools import lru_cache


def canonical(blocks):
    """Sort each block and order blocks by their minimum; drop empty blocks."""
    return tuple(sorted((tuple(sorted(b)) for b in blocks if b), key=lambda b: b[0]))


def set_partitions(items, max_blocks=None):
    """Yield every partition of ``items`` into at most ``max_blocks`` blocks.

    Partitions come out in canonical form, in restricted-growth-string order
    over the sorted items, so the sequence is deterministic.
    """
    items = sorted(items)
    if max_blocks is None:
        max_blocks = len(items)
    if not items:
        yield ()
        return
    blocks = []

    def rec(i):
        if i == len(items):
            yield tuple(tuple(b) for b in blocks)
            return
        x = items[i]
        for b in blocks:
            b.append(x)
            yield from rec(i + 1)
            b.pop()
        if len(blocks) < max_blocks:
            blocks.append([x])
            yield from rec(i + 1)
            blocks.pop()

    yield from rec(0)


@lru_cache(maxsize=None)
def bell(n):
    """The n-th Bell number (number of partitions of an n-set)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]
