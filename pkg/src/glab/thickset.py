"""Thickness, genericity, and class-ball combinatorics on finite groups.

A symmetric subset P of G is N-thick when every length-N sequence
(g_1, ..., g_N) contains i < j with g_i^-1 g_j in P.  Equivalently the
"P-free" graph (edge between a and b iff a^-1 b is outside P) has no
clique of size N.  The minimal such N is ``max P-free clique + 1``; nothing
is 1-thick, and when the identity is outside P constant sequences are
P-free at every length, so the thickness is infinite.

Everything here is exact and deterministic at laboratory sizes: cliques by
branch-and-bound over bitmask adjacency (the first maximum found is the
lexicographically least), minimal covers by iterative deepening from the
counting bound.  Each routine reports concrete witnesses.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import CapExceeded, InputError, PropertyFailure
from .groupcore import (
    FiniteGroup,
    ball_mask,
    inverse_mask,
    is_subgroup_mask,
    is_symmetric_mask,
    product_mask,
    quotient_projection,
)

EXACT_CLIQUE_CAP = 5000


# --------------------------------------------------------------------------
# clique kernel


def _pack_bits(arr: np.ndarray) -> int:
    return int.from_bytes(np.packbits(arr, bitorder="little").tobytes(), "little")


def _max_clique(adj: list[int], n: int, cap: int | None = None) -> list[int]:
    """Maximum clique, lexicographically least among the maximum ones.

    Binary branching on the lowest candidate vertex, include-branch first;
    a branch is cut only when it cannot *strictly* beat the incumbent, so
    the first maximum recorded is the lex-least.  ``cap`` stops the search
    as soon as a clique of that size is known.
    """
    best: list[int] = []

    def extend(cur: list[int], cand: int):
        nonlocal best
        if cap is not None and len(best) >= cap:
            return
        if len(cur) + cand.bit_count() <= len(best):
            return
        if cand == 0:
            best = cur.copy()
            return
        v = (cand & -cand).bit_length() - 1
        cur.append(v)
        extend(cur, cand & adj[v])
        cur.pop()
        extend(cur, cand & ~(1 << v))

    extend([], (1 << n) - 1)
    return best


def _greedy_clique(adj: list[int], n: int) -> list[int]:
    out, cand = [], (1 << n) - 1
    while cand:
        v = (cand & -cand).bit_length() - 1
        out.append(v)
        cand &= adj[v]
    return out


# --------------------------------------------------------------------------
# thickness


def thickness(G: FiniteGroup, P: np.ndarray, exact_cap: int = EXACT_CLIQUE_CAP) -> dict:
    """Minimal N for which P is N-thick, with a maximal P-free witness.

    Returns ``{"value": int | inf, "witness": [...], "status": ...}``;
    status is "exact" below the clique cap and "lower_bound_only" above it
    (a greedy clique still certifies the reported value as a lower bound).
    The witness is a P-free sequence of length value - 1 (element indices);
    for infinite thickness it is the constant sequence [0, 0].
    """
    if not is_symmetric_mask(G, P):
        raise InputError("not_symmetric", "thickness needs P = P^-1")
    if not P[0]:
        return {"value": math.inf, "witness": [0, 0], "status": "exact"}
    n = G.order
    adj = []
    for a in range(n):
        quot = G.row(G.inv(a))  # quot[b] = a^-1 b
        free = ~P[quot]
        free[a] = False
        adj.append(_pack_bits(free))
    if n <= exact_cap:
        clique = _max_clique(adj, n)
        status = "exact"
    else:
        clique = _greedy_clique(adj, n)
        status = "lower_bound_only"
    witness = sorted(clique)
    for i, a in enumerate(witness):  # replay the defining property
        for b in witness[i + 1:]:
            assert not P[G.mul(G.inv(a), b)]
    return {"value": len(clique) + 1, "witness": witness, "status": status}


def intersection_thickness_bound(n: int, m: int) -> int:
    """Thickness bound for an intersection: an n-thick set meets an m-thick
    set in an R(n, m)-thick set (two-coloring of quotient pairs)."""
    return ramsey_bound(n, m)


def check_intersection_bound(G: FiniteGroup, P: np.ndarray, Q: np.ndarray) -> dict:
    tp = thickness(G, P)
    tq = thickness(G, Q)
    if math.isinf(tp["value"]) or math.isinf(tq["value"]):
        raise InputError("precondition_violation",
                         "intersection bound needs finite thickness")
    try:
        bound = ramsey_bound(tp["value"], tq["value"])
    except InputError as e:
        raise InputError("table_incomplete",
                         f"no tabulated Ramsey number for {e.details}") from e
    ti = thickness(G, P & Q)
    return {
        "thickness_P": tp["value"],
        "thickness_Q": tq["value"],
        "bound": bound,
        "thickness_intersection": ti["value"],
        "holds": bool(ti["value"] <= bound),
    }


# --------------------------------------------------------------------------
# Ramsey numbers (table-backed, with exhaustive checkers for the small ones)


_RAMSEY_TABLE = {
    (2, 2): 2, (2, 3): 3, (2, 4): 4, (2, 5): 5,
    (3, 3): 6, (3, 4): 9, (3, 5): 14, (4, 4): 18,
}


def ramsey_bound(n: int, m: int) -> int:
    if n < 2 or m < 2:
        raise InputError("invalid_parameters", "Ramsey table starts at (2,2)")
    key = (min(n, m), max(n, m))
    if key not in _RAMSEY_TABLE:
        raise InputError("out_of_table", f"R{key} is not tabulated", pair=key)
    return _RAMSEY_TABLE[key]


def ramsey_two_colorings_forced(N: int, s: int = 3, t: int = 3) -> bool:
    """True iff *every* red/blue coloring of K_N has a red K_s or blue K_t.

    Fully exhaustive over all 2^(N choose 2) colorings; meant for the
    (3,3) entries where that is 2^15 at most.
    """
    edges = [(i, j) for i in range(N) for j in range(i + 1, N)]
    eidx = {e: k for k, e in enumerate(edges)}
    cols = np.arange(1 << len(edges), dtype=np.int64)
    hit = np.zeros(len(cols), dtype=bool)
    from itertools import combinations
    for size, want_red in ((s, True), (t, False)):
        for verts in combinations(range(N), size):
            bits = [eidx[(a, b)] for a, b in combinations(verts, 2)]
            sub = np.zeros(len(cols), dtype=np.int64)
            for b in bits:
                sub += (cols >> b) & 1
            hit |= (sub == len(bits)) if want_red else (sub == 0)
    return bool(hit.all())


def ramsey_witness_graph(N: int, s: int, t: int) -> list[int] | None:
    """A graph on N vertices with clique < s and independence < t, or None.

    Vertex-incremental search: vertex k tries every adjacency mask into
    {0..k-1}, rejecting masks that complete an s-clique or a t-independent
    set (tracked incrementally as bitmasks, filtered with numpy).
    Returns adjacency bitmasks or None if no such graph exists — None at
    N = R(s,t) is exactly the arrow property.
    """
    cliques: list[list[int]] = [[] for _ in range(s)]    # by size 1..s-1
    indeps: list[list[int]] = [[] for _ in range(t)]
    adj: list[int] = []

    def dfs(k: int) -> list[int] | None:
        if k == N:
            return list(adj)
        masks = np.arange(1 << k, dtype=np.int64)
        bad = np.zeros(len(masks), dtype=bool)
        if cliques[s - 1]:
            cs = np.array(cliques[s - 1], dtype=np.int64)
            bad |= ((masks[:, None] & cs) == cs).any(axis=1)
        if indeps[t - 1]:
            ds = np.array(indeps[t - 1], dtype=np.int64)
            bad |= ((masks[:, None] & ds) == 0).any(axis=1)
        for m in map(int, masks[~bad]):
            added_c, added_i = [], []
            # snapshot lengths first: this vertex's additions must not feed
            # the larger sizes within the same update
            clens = [len(x) for x in cliques]
            ilens = [len(x) for x in indeps]
            for size in range(2, s):
                for c in cliques[size - 1][:clens[size - 1]]:
                    if c & m == c:
                        cliques[size].append(c | (1 << k))
                        added_c.append(size)
            for size in range(2, t):
                for d in indeps[size - 1][:ilens[size - 1]]:
                    if d & m == 0:
                        indeps[size].append(d | (1 << k))
                        added_i.append(size)
            cliques[1].append(1 << k)
            indeps[1].append(1 << k)
            adj.append(m)
            for i in range(k):
                if m >> i & 1:
                    adj[i] |= 1 << k
            got = dfs(k + 1)
            if got is not None:
                return got
            adj.pop()
            for i in range(k):
                adj[i] &= ~(1 << k)
            cliques[1].pop()
            indeps[1].pop()
            for size in reversed(added_c):
                cliques[size].pop()
            for size in reversed(added_i):
                indeps[size].pop()
        return None

    return dfs(0)


# --------------------------------------------------------------------------
# genericity and the generic-subgroup certificate


def genericity(G: FiniteGroup, P: np.ndarray, cap: int | None = None) -> dict:
    """Least m with m right-translates of P covering G, plus translators.

    Exact minimum cover: iterative deepening starting from the counting
    bound ceil(|G| / |P|); branching always on the lowest-index uncovered
    element, candidate translators in index order, so the reported
    translator tuple is canonical.
    """
    p_idx = [int(x) for x in np.nonzero(P)[0]]
    if not p_idx:
        raise InputError("invalid_parameters", "cannot cover with an empty set")
    n = G.order
    if cap is None:
        cap = n
    # x is covered by translate P*g  iff  g in P^-1 x
    pinv = [G.inv(a) for a in p_idx]
    full = (1 << n) - 1
    translate_cache: dict[int, int] = {}

    def translate(g: int) -> int:
        got = translate_cache.get(g)
        if got is None:
            got = 0
            for a in p_idx:
                got |= 1 << G.mul(a, g)
            translate_cache[g] = got
        return got

    def dfs(uncovered: int, chosen: list[int], depth: int, limit: int):
        if uncovered == 0:
            return list(chosen)
        if depth == limit or (limit - depth) * len(p_idx) < uncovered.bit_count():
            return None
        x = (uncovered & -uncovered).bit_length() - 1
        for g in sorted(G.mul(q, x) for q in pinv):
            chosen.append(g)
            got = dfs(uncovered & ~translate(g), chosen, depth + 1, limit)
            if got is not None:
                return got
            chosen.pop()
        return None

    lower = -(-n // len(p_idx))
    for m in range(lower, cap + 1):
        sol = dfs(full, [], 0, m)
        if sol is not None:
            covered = 0
            for g in sol:
                covered |= translate(g)
            assert covered == full
            return {"m": m, "translators": sol}
    raise CapExceeded("search_exhausted", f"no cover within {cap} translates",
                      cap=cap)


def generic_subgroup_certificate(G: FiniteGroup, P: np.ndarray) -> dict:
    """For e in P = P^-1 and P m-generic: P^(3m-2) is a subgroup of index <= m.

    Computes m exactly, takes the mask power, and machine-checks both the
    subgroup property and the index bound.
    """
    if not P[0] or not is_symmetric_mask(G, P):
        raise InputError("precondition_violation",
                         "certificate needs e in P and P symmetric")
    m = genericity(G, P)["m"]
    power = P.copy()
    for _ in range(3 * m - 3):
        power = product_mask(G, power, P)
    sub = is_subgroup_mask(G, power)
    index = G.order // int(power.sum()) if sub else None
    return {
        "m": m,
        "power_exponent": 3 * m - 2,
        "power_order": int(power.sum()),
        "is_subgroup": bool(sub),
        "index": index,
        "index_at_most_m": bool(sub and index <= m),
        "mask": power,
    }


def normal_core_probe(G: FiniteGroup, P: np.ndarray) -> dict:
    """Experimental: the largest normal subgroup inside P^(3m-2).

    Observation-only companion to :func:`generic_subgroup_certificate` —
    intersects the subgroup with all of its conjugates and reports the
    core's order and index.  No pass/fail semantics.
    """
    cert = generic_subgroup_certificate(G, P)
    if not cert["is_subgroup"]:
        return {"experimental": True, "core_order": None, "core_index": None,
                "certificate_m": cert["m"]}
    core = cert["mask"].copy()
    for g in range(G.order):
        conj = np.zeros(G.order, dtype=bool)
        for x in np.nonzero(core)[0]:
            conj[G.conj(int(x), g)] = True
        core &= conj
        if core.sum() == 1:
            break
    assert is_subgroup_mask(G, core)
    return {
        "experimental": True,
        "certificate_m": cert["m"],
        "power_order": cert["power_order"],
        "core_order": int(core.sum()),
        "core_index": G.order // int(core.sum()),
        "core_thickness": thickness(G, core)["value"] if core[0] else None,
    }


# --------------------------------------------------------------------------
# epimorphism transport


def preimage_thickness_check(Q: FiniteGroup, X: np.ndarray) -> dict:
    """f^-1[X] is N-thick iff X is: minimal thickness values must agree."""
    parent = Q._model.parent
    proj = quotient_projection(Q)
    pre = X[proj]
    tx = thickness(Q, X)
    tp = thickness(parent, pre)
    return {"thickness_image": tx["value"], "thickness_preimage": tp["value"],
            "holds": tx["value"] == tp["value"]}


def image_thickness_check(Q: FiniteGroup, Z: np.ndarray) -> dict:
    """Pushing a thick set through an epimorphism cannot raise its thickness."""
    parent = Q._model.parent
    proj = quotient_projection(Q)
    img = np.zeros(Q.order, dtype=bool)
    img[proj[np.nonzero(Z)[0]]] = True
    tz = thickness(parent, Z)
    ti = thickness(Q, img)
    return {"thickness_source": tz["value"], "thickness_image": ti["value"],
            "holds": ti["value"] <= tz["value"]}


# --------------------------------------------------------------------------
# power covers and class balls


def power_cover(G: FiniteGroup, P: np.ndarray, cap: int | None = None) -> dict:
    """Least n with P^n = G, or None with the stabilized union of powers.

    Detects cycling of the power sequence (e.g. parity-alternating sets)
    by hashing masks; the union of all powers seen is the closure under
    the generated subsemigroup.
    """
    if cap is None:
        cap = 4 * G.order + 4
    if P.sum() == 0:
        return {"n": None, "cycle": False, "closure_order": 0}
    seen: set[bytes] = set()
    cur = P.copy()
    closure = P.copy()
    k = 1
    while k <= cap:
        if cur.all():
            return {"n": k, "cycle": False, "closure_order": G.order}
        key = cur.tobytes()
        if key in seen:
            return {"n": None, "cycle": True, "closure_order": int(closure.sum())}
        seen.add(key)
        cur = product_mask(G, cur, P)
        closure |= cur
        k += 1
    raise CapExceeded("search_exhausted", f"no cover after {cap} powers", cap=cap)


def conjugation_ball_source(G: FiniteGroup, g: int) -> np.ndarray:
    """cl(g) union cl(g^-1) as a mask."""
    return G.class_mask(g) | G.class_mask(G.inv(g))


def gn_set(G: FiniteGroup, N: int) -> np.ndarray:
    """Elements whose symmetrized class N-ball already covers the group.

    g qualifies iff (cl(g) ∪ cl(g^-1))^{<=N} = G with the 0-ball = {e}.
    Constant on classes and inverse-closed, so evaluated once per
    class-inverse pair.
    """
    if N < 0:
        raise InputError("invalid_parameters", "ball radius must be >= 0")
    cid, reps = G.conjugacy_classes()
    out = np.zeros(G.order, dtype=bool)
    done: set[int] = set()
    for r in reps:
        if int(cid[r]) in done:
            continue
        source = conjugation_ball_source(G, r)
        done |= {int(cid[r]), int(cid[G.inv(r)])}
        if ball_mask(G, source, N).all():
            # the class and its inverse class share the source set, so they
            # qualify together
            out |= source
    return out


def gn_product_check(G: FiniteGroup, H: FiniteGroup, product: FiniteGroup,
                     N: int) -> dict:
    """Does gn_set distribute over a direct product at radius N?

    Compares gn_set(G x H, N) with gn_set(G, N) x gn_set(H, N).  Not a
    theorem in general (fails already for Z/3 x Z/3 at N = 2); reported
    as a checked proposition with a counterexample when false.
    """
    gn_g = gn_set(G, N)
    gn_h = gn_set(H, N)
    gn_p = gn_set(product, N)
    expected = np.zeros(product.order, dtype=bool)
    for i in range(product.order):
        fg, fh = product.elements[i]
        expected[i] = gn_g[G.index[fg]] and gn_h[H.index[fh]]
    holds = bool((gn_p == expected).all())
    counter = None
    if not holds:
        diff = int(np.nonzero(gn_p != expected)[0][0])
        counter = {"index": diff, "in_product_set": bool(gn_p[diff]),
                   "in_factor_product": bool(expected[diff])}
    return {"holds": holds, "size_product": int(gn_p.sum()),
            "size_expected": int(expected.sum()), "counterexample": counter}


def gn_image_check(Q: FiniteGroup, N: int) -> dict:
    """Epimorphic image law: f[gn_set(G, N)] ⊆ gn_set(Q, N)."""
    parent = Q._model.parent
    proj = quotient_projection(Q)
    src = gn_set(parent, N)
    img = np.zeros(Q.order, dtype=bool)
    img[proj[np.nonzero(src)[0]]] = True
    tgt = gn_set(Q, N)
    return {"holds": bool((img <= tgt).all()),
            "image_size": int(img.sum()), "target_size": int(tgt.sum())}


def bounded_simplicity_degree(G: FiniteGroup, cap: int | None = None) -> dict:
    """Worst-case class-ball radius needed to cover G, or a stuck witness.

    For every noncentral class, grows (cl ∪ cl^-1)^{<=n} until it covers G
    or stabilizes short; a stabilizing class yields value None plus the
    lowest-index witness element whose ball is stuck below |G|.
    """
    if cap is None:
        cap = G.order
    cid, reps = G.conjugacy_classes()
    center = G.center_mask()
    if all(center[r] for r in reps):
        raise InputError("degenerate_abelian",
                         "all classes are central; no class ball can move")
    worst = 0
    per_class = []
    for r in reps:
        if center[r]:
            continue
        source = conjugation_ball_source(G, r)
        cur = source.copy()
        cur[0] = True
        n = 1
        while not cur.all():
            nxt = cur | product_mask(G, cur, source)
            if (nxt == cur).all():
                return {"value": None, "witness": int(r),
                        "stabilized_order": int(cur.sum())}
            cur = nxt
            n += 1
            if n > cap:
                raise CapExceeded("search_exhausted",
                                  f"ball radius exceeded {cap}", cap=cap)
        per_class.append({"rep": int(r), "radius": n})
        worst = max(worst, n)
    return {"value": worst, "witness": None, "per_class": per_class}


def covering_number(G: FiniteGroup) -> dict:
    """Max over nontrivial classes of the least n with C^n = G.

    Only defined for simple nonabelian groups, which is verified first:
    the normal closure of every nontrivial class must be the whole group.
    """
    cid, reps = G.conjugacy_classes()
    if G.is_abelian() or G.order == 1:
        raise InputError("not_simple_nonabelian", "group is abelian")
    for r in reps[1:]:
        if not G.normal_closure_mask(G.class_mask(r)).all():
            raise InputError("not_simple_nonabelian",
                             f"class of element {r} generates a proper normal subgroup")
    worst = 0
    per_class = []
    for r in reps[1:]:
        C = G.class_mask(r)
        cur = C.copy()
        n = 1
        seen: set[bytes] = set()
        while not cur.all():
            key = cur.tobytes()
            if key in seen:
                raise PropertyFailure("search_exhausted",
                                      "class powers cycled below G")
            seen.add(key)
            cur = product_mask(G, cur, C)
            n += 1
        per_class.append({"rep": int(r), "power": n})
        worst = max(worst, n)
    return {"value": worst, "per_class": per_class}


def spread_length(G: FiniteGroup, S: np.ndarray, cap: int | None = None) -> dict:
    """Longest sequence with all pairwise quotients g_i^-1 g_j inside S.

    S must be symmetric (otherwise the pair condition depends on the
    ordering).  With the identity inside S repetition makes sequences
    unbounded, so the cap (default |G|) is returned with status "capped".
    """
    if cap is None:
        cap = G.order
    if S.sum() == 0:
        return {"value": 1, "witness": [0], "status": "exact"}
    if not is_symmetric_mask(G, S):
        raise InputError("not_symmetric", "spread needs a symmetric set")
    if S[0]:
        return {"value": cap, "witness": [0] * cap, "status": "capped"}
    n = G.order
    adj = []
    for a in range(n):
        quot = G.row(G.inv(a))
        inside = S[quot]
        inside[a] = False
        adj.append(_pack_bits(inside))
    clique = _max_clique(adj, n, cap=cap)
    witness = sorted(clique[:cap])
    for i, a in enumerate(witness):
        for b in witness[i + 1:]:
            assert S[G.mul(G.inv(a), b)]
    return {"value": len(witness), "witness": witness,
            "status": "exact" if len(clique) < cap else "capped"}
