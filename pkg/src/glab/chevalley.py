"""Generator calculus in SL_n(F_p): root elements, tori, transport solvers.

Matrices are row-major residue tuples (the same canonical form the group
engine uses for its SL family, so matrices index directly into enumerated
groups).  Roots of SL_n are ordered index pairs (i, j), 0-based, i != j;
(i, j) is positive iff i < j, its height is j - i, and for diagonal
t = diag(t_0, ..., t_{n-1}) the character value is alpha(t) = t_i / t_j.

The three families of verified relations:

* torus conjugation      t x_a(s) t^-1 = x_a(a(t) s)
* Weyl-torus action      t_a(u) x_b(s) t_a(u)^-1 = x_b(u^<b,a> s)
* ordered factorization  every upper unitriangular matrix is uniquely
  a product of root elements over the positive roots in height-then-lex
  order.

On top of these sit the two transport solvers (conjugation equations
[t, u'] = u in the upper and [v', t^-1] = v in the lower unitriangular
group), the prescribed-diagonal Gauss decomposition, and the conjugacy
class cube check for regular semisimple elements.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InputError, PropertyFailure
from .groupcore import (
    FiniteGroup,
    SLSpec,
    mat_det,
    mat_identity,
    mat_inverse,
    mat_mul,
    product_mask,
)

Root = tuple[int, int]
Mat = tuple[int, ...]


def positive_roots(n: int) -> list[Root]:
    """(i, j) with i < j, sorted by height j - i, then lexicographically."""
    roots = [(i, j) for i in range(n) for j in range(n) if i < j]
    roots.sort(key=lambda r: (r[1] - r[0], r))
    return roots


def negative_roots(n: int) -> list[Root]:
    return [(j, i) for (i, j) in positive_roots(n)]


def all_roots(n: int) -> list[Root]:
    return positive_roots(n) + negative_roots(n)


def _check_root(n: int, root: Root):
    i, j = root
    if not (0 <= i < n and 0 <= j < n) or i == j:
        raise InputError("invalid_root", f"{root} is not a root of SL_{n}",
                         root=root, n=n)


def root_pairing(beta: Root, alpha: Root) -> int:
    """<beta, alpha> for beta = e_i - e_j, alpha = e_k - e_l (type A)."""
    (i, j), (k, l) = beta, alpha
    return int(i == k) - int(i == l) - int(j == k) + int(j == l)


def x_elem(n: int, p: int, root: Root, s: int) -> Mat:
    _check_root(n, root)
    i, j = root
    m = list(mat_identity(n))
    m[i * n + j] = s % p
    return tuple(m)


def w_elem(n: int, p: int, root: Root, u: int) -> Mat:
    if u % p == 0:
        raise InputError("zero_parameter_for_w_or_t",
                         "w_alpha(u) needs an invertible u", u=u)
    i, j = root
    a = x_elem(n, p, root, u)
    b = x_elem(n, p, (j, i), -pow(u, -1, p))
    return mat_mul(mat_mul(a, b, n, p), a, n, p)


def t_elem(n: int, p: int, root: Root, u: int) -> Mat:
    if u % p == 0:
        raise InputError("zero_parameter_for_w_or_t",
                         "t_alpha(u) needs an invertible u", u=u)
    return mat_mul(w_elem(n, p, root, u),
                   mat_inverse(w_elem(n, p, root, 1), n, p), n, p)


def root_generator(n: int, p: int, kind: str, root: Root, s: int) -> Mat:
    """Dispatch for the three generator families: kind in {'x', 'w', 't'}."""
    if n < 2 or p < 2:
        raise InputError("invalid_parameters", "need n >= 2 and prime p")
    if kind == "x":
        return x_elem(n, p, root, s)
    if kind == "w":
        return w_elem(n, p, root, s)
    if kind == "t":
        return t_elem(n, p, root, s)
    raise InputError("invalid_parameters", f"unknown generator kind {kind!r}")


def is_diagonal(m: Mat, n: int) -> bool:
    return all(m[i * n + j] == 0 for i in range(n) for j in range(n) if i != j)


def diag_entries(m: Mat, n: int) -> tuple[int, ...]:
    if not is_diagonal(m, n):
        raise InputError("not_diagonal", "matrix is not diagonal")
    return tuple(m[i * n + i] for i in range(n))


def diag_matrix(entries: tuple[int, ...], p: int) -> Mat:
    n = len(entries)
    if math.prod(entries) % p != 1:
        raise InputError("invalid_parameters",
                         "diagonal entries must multiply to 1", entries=entries)
    if any(e % p == 0 for e in entries):
        raise InputError("invalid_parameters", "diagonal entries must be units")
    m = [0] * (n * n)
    for i, e in enumerate(entries):
        m[i * n + i] = e % p
    return tuple(m)


def root_value(t: Mat, root: Root, n: int, p: int) -> int:
    """alpha(t) = t_i / t_j for diagonal t."""
    d = diag_entries(t, n)
    i, j = root
    return (d[i] * pow(d[j], -1, p)) % p


def is_regular(t: Mat, n: int, p: int) -> bool:
    """Diagonal with pairwise distinct entries (so beta(t) != 1 for roots)."""
    d = diag_entries(t, n)
    return len(set(e % p for e in d)) == n


def regular_diagonals(n: int, p: int) -> list[Mat]:
    """All regular diagonal elements of SL_n(F_p), lexicographic order."""
    out = []

    def rec(prefix: list[int]):
        if len(prefix) == n - 1:
            last = pow(math.prod(prefix) if prefix else 1, -1, p)
            d = prefix + [last]
            if len(set(d)) == n:
                out.append(diag_matrix(tuple(d), p))
            return
        for e in range(1, p):
            rec(prefix + [e])

    rec([])
    return sorted(out)


def centralizer_in_unipotent_is_trivial(t: Mat, n: int, p: int) -> bool:
    """Brute cross-check of regularity: no nontrivial upper unitriangular
    matrix commutes with t.  Exponential in the number of positive roots;
    intended for small n, p."""
    roots = positive_roots(n)
    ident = mat_identity(n)

    def rec(k: int, acc: Mat) -> bool:
        if k == len(roots):
            return acc == ident or mat_mul(t, acc, n, p) != mat_mul(acc, t, n, p)
        return all(rec(k + 1, mat_mul(acc, x_elem(n, p, roots[k], s), n, p))
                   for s in range(p))

    return rec(0, ident)


# --------------------------------------------------------------------------
# ordered factorization of unitriangular matrices


def _is_unitriangular(m: Mat, n: int, sign: int) -> bool:
    for i in range(n):
        if m[i * n + i] != 1:
            return False
        for j in range(n):
            if (j > i if sign < 0 else j < i) and m[i * n + j] != 0:
                return False
    return True


def unipotent_factor(m: Mat, n: int, p: int, sign: int = 1) -> list[tuple[Root, int]]:
    """Coefficients of the ordered root-element factorization of ``m``.

    ``sign=+1`` factors an upper unitriangular matrix over the positive
    roots in height-then-lex order, ``sign=-1`` a lower one over the
    negative roots (same order of their positive counterparts).  The
    returned list covers every root in order, including zero coefficients;
    multiplying the factors back in order reproduces ``m`` exactly, which
    the function asserts before returning.
    """
    if not _is_unitriangular(m, n, sign):
        raise InputError("not_unitriangular",
                         "matrix is not unitriangular of the requested sign")
    roots = positive_roots(n) if sign > 0 else negative_roots(n)
    residual = m
    coeffs: list[tuple[Root, int]] = []
    for (i, j) in roots:
        s = residual[i * n + j] % p
        coeffs.append(((i, j), s))
        if s:
            residual = mat_mul(x_elem(n, p, (i, j), -s), residual, n, p)
    assert residual == mat_identity(n), "peeling must terminate at identity"
    check = mat_identity(n)
    for root, s in coeffs:
        check = mat_mul(check, x_elem(n, p, root, s), n, p)
    assert check == m
    return coeffs


def enumerate_unipotent_products(n: int, p: int) -> dict:
    """Verify the factorization map is a bijection onto the unitriangulars.

    Multiplies out all p^{#positive roots} coefficient tuples (vectorized,
    sharing prefixes) and checks the products are pairwise distinct upper
    unitriangular matrices — surjectivity then follows by counting.
    """
    roots = positive_roots(n)
    m = len(roots)
    prods = np.eye(n, dtype=np.int64)[None, :, :]
    for root in roots:
        xs = np.stack([np.array(x_elem(n, p, root, s), dtype=np.int64).reshape(n, n)
                       for s in range(p)])
        # (K, n, n) x (p, n, n) -> (K*p, n, n), prefix-major order
        prods = np.einsum("kij,sjl->ksil", prods, xs).reshape(-1, n, n) % p
    flat = prods.reshape(len(prods), n * n)
    distinct = len(np.unique(flat, axis=0))
    unitriangular = True
    iu = np.tril_indices(n, -1)
    unitriangular = bool((prods[:, iu[0], iu[1]] == 0).all()
                         and (prods[:, range(n), range(n)] == 1).all())
    return {
        "count": len(flat),
        "distinct": int(distinct),
        "expected": p**m,
        "bijective": bool(distinct == p**m and unitriangular),
    }


# --------------------------------------------------------------------------
# relation verification


def verify_torus_conjugation(n: int, p: int) -> dict:
    """t x_a(s) t^-1 = x_a(a(t) s) over every diagonal t, root a, scalar s."""
    checked = failures = 0
    for t in _all_diagonals(n, p):
        ti = mat_inverse(t, n, p)
        for root in all_roots(n):
            av = root_value(t, root, n, p)
            for s in range(p):
                lhs = mat_mul(mat_mul(t, x_elem(n, p, root, s), n, p), ti, n, p)
                rhs = x_elem(n, p, root, av * s)
                checked += 1
                failures += lhs != rhs
    return {"checked": checked, "failures": failures}


def verify_weyl_torus_action(n: int, p: int) -> dict:
    """t_a(u) x_b(s) t_a(u)^-1 = x_b(u^<b,a> s) over all roots a, b."""
    checked = failures = 0
    for alpha in all_roots(n):
        for u in range(1, p):
            ta = t_elem(n, p, alpha, u)
            tai = mat_inverse(ta, n, p)
            for beta in all_roots(n):
                k = root_pairing(beta, alpha)
                mult = pow(u, k, p) if k >= 0 else pow(pow(u, -1, p), -k, p)
                for s in range(p):
                    lhs = mat_mul(mat_mul(ta, x_elem(n, p, beta, s), n, p),
                                  tai, n, p)
                    checked += 1
                    failures += lhs != x_elem(n, p, beta, mult * s)
    return {"checked": checked, "failures": failures}


def commutator_structure_constants(n: int, p: int) -> dict:
    """Realized signs N in [x_a(s), x_b(u)] = x_{a+b}(N s u).

    For type A the nonzero cases are head-to-tail pairs: a = (i,j),
    b = (j,k) gives N = +1 on (i,k); a = (i,j), b = (k,i) gives N = -1 on
    (k,j).  Non-adjacent pairs (a+b not a root, a != -b) must commute.
    Everything is verified against matrix arithmetic for all s, u.
    """
    constants = {}
    failures = 0
    roots = all_roots(n)
    for a in roots:
        for b in roots:
            if a == b or (a[0] == b[1] and a[1] == b[0]):
                continue
            i, j = a
            k, l = b
            if j == k and i != l:
                target, expect = (i, l), 1
            elif l == i and k != j:
                target, expect = (k, j), -1
            else:
                target, expect = None, 0
            for s in range(p):
                for u in range(p):
                    xa, xb = x_elem(n, p, a, s), x_elem(n, p, b, u)
                    comm = mat_mul(
                        mat_mul(mat_inverse(xa, n, p), mat_inverse(xb, n, p), n, p),
                        mat_mul(xa, xb, n, p), n, p)
                    want = (x_elem(n, p, target, expect * s * u)
                            if target else mat_identity(n))
                    failures += comm != want
            if target:
                constants[f"{a}+{b}"] = expect
    return {"constants": constants, "failures": failures}


def _all_diagonals(n: int, p: int) -> list[Mat]:
    out = []

    def rec(prefix: list[int]):
        if len(prefix) == n - 1:
            last = pow(math.prod(prefix) if prefix else 1, -1, p)
            out.append(diag_matrix(tuple(prefix + [last]), p))
            return
        for e in range(1, p):
            rec(prefix + [e])

    rec([])
    return out


# --------------------------------------------------------------------------
# transport solvers


def _comm(a: Mat, b: Mat, n: int, p: int) -> Mat:
    return mat_mul(mat_mul(mat_inverse(a, n, p), mat_inverse(b, n, p), n, p),
                   mat_mul(a, b, n, p), n, p)


def _solve_transport(n: int, p: int, t: Mat, target: Mat, sign: int) -> Mat:
    """Layer-peeling solve of [t, u'] = u (sign +1) or [v', t^-1] = v (-1).

    Each pass recomputes the full residual, corrects the lowest nonzero
    height-layer coefficient-wise (the layer map acts diagonally there),
    and asserts strict height progress; the fixpoint is verified exactly.
    """
    if not is_regular(t, n, p):
        raise InputError("not_regular",
                         "transport needs a regular diagonal element")
    if not _is_unitriangular(target, n, sign):
        raise InputError("not_unitriangular",
                         "transport target has the wrong shape")
    ti = mat_inverse(t, n, p)
    sol = mat_identity(n)
    last_height = 0
    for _ in range(n):  # max height is n - 1; one extra pass asserts fixpoint
        value = _comm(t, sol, n, p) if sign > 0 else _comm(sol, ti, n, p)
        residual = mat_mul(mat_inverse(value, n, p), target, n, p)
        if residual == mat_identity(n):
            break
        layers = [(root, s) for root, s in unipotent_factor(residual, n, p, sign)
                  if s]
        h = min(abs(i - j) for (i, j), _ in layers)
        assert h > last_height, "transport peeling must make height progress"
        last_height = h
        for (i, j), s in layers:
            if abs(i - j) != h:
                continue
            av = root_value(t, (i, j), n, p)
            mult = (1 - pow(av, -1, p)) % p if sign > 0 else (av - 1) % p
            c = (s * pow(mult, -1, p)) % p
            sol = mat_mul(sol, x_elem(n, p, (i, j), c), n, p)
    final = _comm(t, sol, n, p) if sign > 0 else _comm(sol, ti, n, p)
    if final != target:
        raise PropertyFailure("search_exhausted",
                              "transport solve failed to converge")
    return sol


def transport_into_unipotent(n: int, p: int, t: Mat, target: Mat) -> Mat:
    """u' upper unitriangular with [t, u'] = target."""
    return _solve_transport(n, p, t, target, +1)


def transport_into_opposite(n: int, p: int, t: Mat, target: Mat) -> Mat:
    """v' lower unitriangular with [v', t^-1] = target."""
    return _solve_transport(n, p, t, target, -1)


# --------------------------------------------------------------------------
# Gauss decomposition with prescribed diagonal


def _leading_minors_nonzero(m: Mat, n: int, p: int) -> bool:
    for k in range(1, n + 1):
        sub = tuple(m[i * n + j] for i in range(k) for j in range(k))
        if mat_det(sub, k, p) == 0:
            return False
    return True


def _ldu(m: Mat, n: int, p: int) -> tuple[Mat, Mat, Mat]:
    """Unique L * D * U with L/U unit-triangular, for nonzero leading minors."""
    a = [[m[i * n + j] % p for j in range(n)] for i in range(n)]
    L = [[int(i == j) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = a[col][col] % p
        assert piv != 0
        inv = pow(piv, -1, p)
        for r in range(col + 1, n):
            f = (a[r][col] * inv) % p
            L[r][col] = f
            a[r] = [(x - f * y) % p for x, y in zip(a[r], a[col])]
    D = [a[i][i] % p for i in range(n)]
    U = [[(a[i][j] * pow(D[i], -1, p)) % p if j >= i else 0 for j in range(n)]
         for i in range(n)]
    Lm = tuple(L[i][j] % p for i in range(n) for j in range(n))
    Dm = tuple(D[i] if i == j else 0 for i in range(n) for j in range(n))
    Um = tuple(U[i][j] % p for i in range(n) for j in range(n))
    assert mat_mul(mat_mul(Lm, Dm, n, p), Um, n, p) == tuple(v % p for v in m)
    return Lm, Dm, Um


def gauss_prescribed(G: FiniteGroup, g: int, t: int) -> dict:
    """Conjugate g so its Gauss decomposition has diagonal exactly t.

    Walks conjugators x in element-index order; accepts the first with
    g^x having nonvanishing leading principal minors and LDU diagonal
    equal to t.  Returns the conjugator and the triangular factors, all
    re-verified by recomposition.  search_exhausted if no x works.
    """
    spec = G.spec
    if not isinstance(spec, SLSpec):
        raise InputError("group_mismatch", "gauss_prescribed needs an SL group")
    n, p = spec.n, spec.p
    if G.class_mask(g).sum() == 1:
        raise InputError("noncentral_required",
                         "central elements conjugate only to themselves")
    t_mat = G.elements[t]
    diag_entries(t_mat, n)  # not_diagonal if it is not
    for x in range(G.order):
        m = G.elements[G.conj(g, x)]
        if not _leading_minors_nonzero(m, n, p):
            continue
        L, D, U = _ldu(m, n, p)
        if D == t_mat:
            assert mat_mul(mat_mul(L, D, n, p), U, n, p) == m
            return {"x": x, "v": L, "t": D, "u": U, "conjugate": m}
    raise PropertyFailure("search_exhausted",
                          "no conjugate has the prescribed diagonal",
                          exhausted=True)


# --------------------------------------------------------------------------
# class cube


def class_cube(G: FiniteGroup, t: int) -> dict:
    """Powers of the conjugacy class of a regular element.

    Checks C^2 covers G minus the center and C^3 covers G, recording the
    least power whose class product reaches all of G.
    """
    spec = G.spec
    if not isinstance(spec, SLSpec):
        raise InputError("group_mismatch", "class_cube needs an SL group")
    if not is_regular(G.elements[t], spec.n, spec.p):
        raise InputError("not_regular", "class_cube needs a regular element")
    C = G.class_mask(t)
    Z = G.center_mask()
    C2 = product_mask(G, C, C)
    C3 = product_mask(G, C2, C)
    cur, k = C.copy(), 1
    min_power = None
    while k <= G.order:
        if cur.all():
            min_power = k
            break
        cur = product_mask(G, cur, C)
        k += 1
    return {
        "class_size": int(C.sum()),
        "square_covers_complement": bool((C2 | Z).all()),
        "cube_is_group": bool(C3.all()),
        "min_power": min_power,
    }


# --------------------------------------------------------------------------
# regular sequences from weighted tori


def _mult_order(s: int, p: int) -> int:
    k, x = 1, s % p
    while x != 1:
        x = (x * s) % p
        k += 1
    return k


def regular_sequence(family: str, rank: int, p: int, m: int) -> dict:
    """A geometric torus sequence whose pairwise quotients are all regular.

    Picks the least s >= 2 whose multiplicative order d avoids every
    congruence delta * w_beta = 0 mod d (1 <= delta < m, beta positive,
    w the lambda-weight of beta), then returns a(s^i) for i < m where
    a(u) is the product of simple-root torus elements t_alpha(u^lambda_alpha).
    Matrix output is the SL_{rank+1}(F_p) realization (type A only).
    """
    from . import rootsys
    if family.upper() != "A":
        raise InputError("unsupported_family_rank",
                         "matrix realization only for type A", family=family)
    R = rootsys.build_root_system(family, rank)
    lam = rootsys.lambda_weights(R)
    weights = [rootsys.root_weight(R, lam, b) for b in R.positive]
    if m < 1:
        raise InputError("invalid_parameters", "need m >= 1", m=m)
    n = rank + 1
    if m == 1:
        return {"s": 1, "order": 1, "lam": list(lam), "weights": weights,
                "elements": [mat_identity(n)]}
    chosen = None
    for s in range(2, p):
        d = _mult_order(s, p)
        if all((delta * w) % d for delta in range(1, m) for w in weights):
            chosen = (s, d)
            break
    if chosen is None:
        raise InputError("field_too_small",
                         f"no multiplicative order in F_{p} avoids the weights",
                         p=p, m=m)
    s, d = chosen
    simple_pairs = [(k, k + 1) for k in range(rank)]
    elements = []
    for i in range(m):
        u = pow(s, i, p)
        acc = mat_identity(n)
        for (root, l) in zip(simple_pairs, lam):
            acc = mat_mul(acc, t_elem(n, p, root, pow(u, l, p)), n, p)
        elements.append(acc)
    # pairwise quotients must be regular — that is the point of the weights
    for i in range(m):
        for j in range(m):
            if i != j:
                q = mat_mul(elements[i], mat_inverse(elements[j], n, p), n, p)
                assert is_regular(q, n, p)
    return {"s": s, "order": d, "lam": list(lam), "weights": weights,
            "elements": elements}
