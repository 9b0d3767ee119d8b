"""Independent brute-force oracles used to cross-check the engines.

Everything here recomputes results from first principles: affine maps on
the integer line for the dihedral metric, per-point breadth-first search
for transition sets.  None of it calls the worklist fixpoint or the
marker search.
"""

from __future__ import annotations

from dadw import Element, QuotientElement


def affine_compose(f, g):
    # f after g, both as (a, b) meaning x -> a*x + b
    return (f[0] * g[0], f[0] * g[1] + f[1])


def affine_inverse(f):
    a, b = f
    return (a, -a * b)


def affine_word_lengths(depth: int) -> dict:
    """Word lengths in {s, t} by breadth-first search over affine maps.

    s is x -> -x and t is x -> 1 - x; both are involutions, so plain
    left multiplication explores the whole ball.
    """
    s, t = (-1, 0), (-1, 1)
    dist = {(1, 0): 0}
    frontier = [(1, 0)]
    for d in range(1, depth + 1):
        nxt = []
        for f in frontier:
            for gen in (s, t):
                h = affine_compose(gen, f)
                if h not in dist:
                    dist[h] = d
                    nxt.append(h)
        frontier = nxt
    return dist


def brute_f_odometer(space, U, E, level: int, max_len: int) -> dict:
    """Transition set of U under E by per-start BFS over level states.

    Returns {element: frozenset of reachable level states}; the key set
    is the brute-force F(U, E) and each value is the attainability set
    read off at the chosen level.
    """
    spec = space.group
    G = space.level_group(level)
    ustates = frozenset(space.lift(space.canonical(U), level).states)
    steps = [(h, space.phi(level, h)) for h in E]
    ident = spec.element(spec.h_group.identity, QuotientElement(1, 0))
    found: dict = {}
    for s0 in ustates:
        seen = {(ident, s0)}
        frontier = [(ident, s0)]
        while frontier:
            nxt = []
            for g, st in frontier:
                found.setdefault(g, set()).add(st)
                for h, himg in steps:
                    g2 = spec.multiply(h, g)
                    if spec.word_length(spec.quotient_map(g2)) > max_len:
                        continue
                    st2 = G.mul(himg, st)
                    if st2 not in ustates:
                        continue
                    if (g2, st2) not in seen:
                        seen.add((g2, st2))
                        nxt.append((g2, st2))
            frontier = nxt
    return {g: frozenset(sts) for g, sts in found.items()}


def brute_f_subshift_z(space, U, E, window_len: int) -> set:
    """Transition set of U for an integer-line subshift by viewpoint BFS.

    Walks every admissible window of the given length with every anchor
    offset, stepping by the translations in E and demanding membership
    in U after each step.  Trajectories that run off the window are
    dropped, so the window length must dominate the walk span.
    """
    UL = space.canonical(U)
    lo, width, words = UL.lo, UL.width, frozenset(UL.words)
    admissible, exact = space.oracle.factors(window_len)
    assert exact, "oracle budget too small for the requested window"
    assert all(h.q.eps == 1 for h in E), "translation steps only"
    shifts = [h.q.k for h in E]
    found = set()
    for w in admissible:
        for c in range(window_len):
            if lo + c < 0 or lo + c + width > window_len:
                continue
            if w[lo + c : lo + c + width] not in words:
                continue
            seen = {0}
            frontier = [0]
            while frontier:
                nxt = []
                for pos in frontier:
                    found.add(pos)
                    for k in shifts:
                        pos2 = pos + k
                        if pos2 in seen:
                            continue
                        start = lo - pos2 + c
                        if start < 0 or start + width > window_len:
                            continue
                        if w[start : start + width] not in words:
                            continue
                        seen.add(pos2)
                        nxt.append(pos2)
                frontier = nxt
    h0 = space.group.h_group.identity
    return {Element(h0, QuotientElement(1, k)) for k in found}
