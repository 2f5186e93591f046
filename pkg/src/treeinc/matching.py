"""Maximum bipartite matching (Hopcroft-Karp)."""

from __future__ import annotations

from collections import deque
from typing import Hashable, Iterable, Mapping


def bipartite_match(edges: Mapping[Hashable, Iterable[Hashable]]) -> tuple[dict, int]:
    """Maximum-cardinality matching of a bipartite graph.

    ``edges`` maps each left vertex to its right neighbours. Returns the
    matching as ``{left: right}`` and the number of augmenting paths used.
    Neighbour lists are scanned in the given order, so results are
    deterministic.
    """
    left = list(edges)
    adj = {u: list(dict.fromkeys(edges[u])) for u in left}
    match_l: dict = {}
    match_r: dict = {}
    augmentations = 0
    inf = len(left) + 1

    while True:
        # BFS layers from the free left vertices
        dist: dict = {}
        queue = deque()
        for u in left:
            if u not in match_l:
                dist[u] = 0
                queue.append(u)
        found = inf
        while queue:
            u = queue.popleft()
            if dist[u] >= found:
                continue
            for r in adj[u]:
                w = match_r.get(r)
                if w is None:
                    found = min(found, dist[u] + 1)
                elif w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if found == inf:
            break

        def augment(start) -> bool:
            # iterative DFS; path[i+1] is the partner of the right vertex taken from path[i]
            path = [start]
            iters = [iter(adj[start])]
            while path:
                x = path[-1]
                for r in iters[-1]:
                    w = match_r.get(r)
                    if w is None:
                        if dist[x] + 1 != found:
                            continue
                        rights = [match_l[y] for y in path[1:]] + [r]
                        for y, ry in zip(path, rights):
                            match_l[y] = ry
                            match_r[ry] = y
                        return True
                    if dist.get(w) == dist[x] + 1:
                        path.append(w)
                        iters.append(iter(adj[w]))
                        break
                else:
                    dist[x] = inf  # dead end for this phase
                    path.pop()
                    iters.pop()
            return False

        progressed = False
        for u in left:
            if u not in match_l and augment(u):
                augmentations += 1
                progressed = True
        if not progressed:
            break
    return match_l, augmentations


def saturates(edges: Mapping[Hashable, Iterable[Hashable]]) -> tuple[bool, dict, int]:
    """Whether a maximum matching covers every left vertex."""
    matching, aug = bipartite_match(edges)
    return len(matching) == len(edges), matching, aug
