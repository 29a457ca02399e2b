"""Finite group engine with deterministic element numbering.

Groups are described by small frozen spec objects (:class:`CycSpec`,
:class:`SymSpec`, :class:`SLSpec`, ...) and realized by :func:`build_group`
as :class:`FiniteGroup` instances: a list of canonical element forms plus
index-level multiplication.  Enumeration is a layered breadth-first search
from a fixed per-family generating set, with each new layer sorted by
canonical form.  Two consequences the rest of the toolkit relies on:

* the identity always has index 0;
* element indices — and therefore every witness, class representative and
  translator list derived from them — are identical across runs and
  platforms.

Subsets of a group are plain ``numpy`` boolean arrays over element indices;
the helpers at the bottom (:func:`product_mask`, :func:`inverse_mask`, ...)
implement the set arithmetic used by the combinatorial layers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Callable

import numpy as np

from .errors import CapExceeded, InputError, SpecSyntaxError

DEFAULT_ORDER_CAP = 100_000


# --------------------------------------------------------------------------
# group specs


@dataclass(frozen=True)
class CycSpec:
    modulus: int


@dataclass(frozen=True)
class AbSpec:
    moduli: tuple[int, ...]


@dataclass(frozen=True)
class SymSpec:
    degree: int


@dataclass(frozen=True)
class AltSpec:
    degree: int


@dataclass(frozen=True)
class SLSpec:
    n: int
    p: int


@dataclass(frozen=True)
class AffSpec:
    """F_p^n acted on by SL_n(F_p): pairs (v, f), (v,f)(u,g) = (v + f·u, fg)."""

    n: int
    p: int


@dataclass(frozen=True)
class CocycleExtSpec:
    """Central extension of ``base`` by Z/p along a 2-cocycle.

    ``values`` is the cocycle table h(x, y) flattened row-major over the
    *element indices of the built base group* (so the spec is only
    meaningful together with the deterministic enumeration of ``base``).
    """

    p: int
    base: "GroupSpec"
    values: tuple[int, ...]


@dataclass(frozen=True)
class QuotientSpec:
    """Quotient of ``parent`` by the normal subgroup listed by element form."""

    parent: "GroupSpec"
    normal_forms: tuple


@dataclass(frozen=True)
class ProductSpec:
    left: "GroupSpec"
    right: "GroupSpec"


GroupSpec = (
    CycSpec
    | AbSpec
    | SymSpec
    | AltSpec
    | SLSpec
    | AffSpec
    | CocycleExtSpec
    | QuotientSpec
    | ProductSpec
)


def _require(cond: bool, message: str, **details):
    if not cond:
        raise InputError("invalid_parameters", message, **details)


# --------------------------------------------------------------------------
# form-level arithmetic helpers (tuples in, tuples out; no group needed)


def perm_compose(a: tuple, b: tuple) -> tuple:
    """(a∘b)(x) = a(b(x)): apply b first.  Images are 0-based tuples."""
    return tuple(a[bx] for bx in b)


def perm_inverse(a: tuple) -> tuple:
    out = [0] * len(a)
    for i, ai in enumerate(a):
        out[ai] = i
    return tuple(out)


def mat_mul(a: tuple, b: tuple, n: int, p: int) -> tuple:
    out = [0] * (n * n)
    for i in range(n):
        row = i * n
        for k in range(n):
            aik = a[row + k]
            if aik:
                col = k * n
                for j in range(n):
                    out[row + j] += aik * b[col + j]
    return tuple(v % p for v in out)


def mat_identity(n: int) -> tuple:
    return tuple(1 if i == j else 0 for i in range(n) for j in range(n))


def mat_inverse(a: tuple, n: int, p: int) -> tuple:
    """Inverse mod p by Gauss-Jordan; raises if a is singular."""
    m = [[a[i * n + j] for j in range(n)] + [int(i == j) for j in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] % p), None)
        if piv is None:
            raise InputError("invalid_parameters", "singular matrix mod p")
        m[col], m[piv] = m[piv], m[col]
        inv_p = pow(m[col][col], -1, p)
        m[col] = [(v * inv_p) % p for v in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [(v - f * w) % p for v, w in zip(m[r], m[col])]
    return tuple(m[i][n + j] % p for i in range(n) for j in range(n))


def mat_det(a: tuple, n: int, p: int) -> int:
    m = [[a[i * n + j] % p for j in range(n)] for i in range(n)]
    det = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det = (det * m[col][col]) % p
        inv_p = pow(m[col][col], -1, p)
        for r in range(col + 1, n):
            if m[r][col]:
                f = (m[r][col] * inv_p) % p
                m[r] = [(v - f * w) % p for v, w in zip(m[r], m[col])]
    return det % p


# --------------------------------------------------------------------------
# per-family models: identity form, generator forms, multiplication, inverse


@dataclass
class _Model:
    identity: object
    generator_forms: list
    mul: Callable
    inv: Callable
    order_hint: int | None = None
    # quotient models carry their parent group for projection bookkeeping
    parent: "FiniteGroup | None" = None
    parent_projection: "np.ndarray | None" = None


def _cyc_model(spec: CycSpec) -> _Model:
    _require(spec.modulus >= 1, "Cyc modulus must be >= 1", modulus=spec.modulus)
    k = spec.modulus
    gens = [1 % k] if k > 1 else []
    return _Model(0, gens, lambda a, b: (a + b) % k, lambda a: (-a) % k,
                  order_hint=k)


def _ab_model(spec: AbSpec) -> _Model:
    _require(len(spec.moduli) >= 1 and all(m >= 1 for m in spec.moduli),
             "Ab moduli must all be >= 1", moduli=spec.moduli)
    mods = spec.moduli
    ident = tuple(0 for _ in mods)
    gens = []
    for i, m in enumerate(mods):
        if m > 1:
            gens.append(tuple(1 if j == i else 0 for j in range(len(mods))))
    mul = lambda a, b: tuple((x + y) % m for x, y, m in zip(a, b, mods))
    inv = lambda a: tuple((-x) % m for x, m in zip(a, mods))
    return _Model(ident, gens, mul, inv, order_hint=math.prod(mods))


def _sym_model(spec: SymSpec) -> _Model:
    n = spec.degree
    _require(n >= 1, "Sym degree must be >= 1", degree=n)
    ident = tuple(range(n))
    gens = []
    if n >= 2:
        gens.append((1, 0) + tuple(range(2, n)))
    if n >= 3:
        gens.append(tuple(range(1, n)) + (0,))
    return _Model(ident, gens, perm_compose, perm_inverse,
                  order_hint=math.factorial(n))


def _alt_model(spec: AltSpec) -> _Model:
    n = spec.degree
    _require(n >= 1, "Alt degree must be >= 1", degree=n)
    ident = tuple(range(n))
    gens = []
    if n >= 3:
        gens.append((1, 2, 0) + tuple(range(3, n)))
    if n >= 4:
        if n % 2 == 1:  # the n-cycle is even
            gens.append(tuple(range(1, n)) + (0,))
        else:  # (2,3,...,n): odd-length cycle, even permutation
            gens.append((0,) + tuple(range(2, n)) + (1,))
    return _Model(ident, gens, perm_compose, perm_inverse,
                  order_hint=max(1, math.factorial(n) // 2))


def _sl_order(n: int, p: int) -> int:
    q = p**n
    gl = math.prod(q - p**i for i in range(n))
    return gl // (p - 1)


def _sl_model(spec: SLSpec) -> _Model:
    n, p = spec.n, spec.p
    _require(n >= 2, "SL needs n >= 2", n=n)
    _require(p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1)),
             "SL needs a prime modulus", p=p)
    ident = mat_identity(n)
    gens = []
    for i in range(n):
        for j in range(n):
            if i != j:
                g = list(ident)
                g[i * n + j] = 1
                gens.append(tuple(g))
    return _Model(ident, gens,
                  lambda a, b: mat_mul(a, b, n, p),
                  lambda a: mat_inverse(a, n, p),
                  order_hint=_sl_order(n, p))


def _aff_model(spec: AffSpec) -> _Model:
    n, p = spec.n, spec.p
    sl = _sl_model(SLSpec(n, p))
    zero = tuple(0 for _ in range(n))
    ident = (zero, sl.identity)

    def apply(f: tuple, v: tuple) -> tuple:
        return tuple(sum(f[i * n + j] * v[j] for j in range(n)) % p
                     for i in range(n))

    def mul(a, b):
        (v, f), (u, g) = a, b
        return (tuple((x + y) % p for x, y in zip(v, apply(f, u))), sl.mul(f, g))

    def inv(a):
        v, f = a
        fi = sl.inv(f)
        return (tuple((-x) % p for x in apply(fi, v)), fi)

    gens = [(tuple(1 if j == i else 0 for j in range(n)), sl.identity)
            for i in range(n)]
    gens += [(zero, g) for g in sl.generator_forms]
    return _Model(ident, gens, mul, inv, order_hint=p**n * sl.order_hint)


def _cocycle_model(spec: CocycleExtSpec, cap: int) -> _Model:
    p = spec.p
    _require(p >= 2, "extension modulus must be >= 2", p=p)
    base = build_group(spec.base, cap=cap)
    m = base.order
    _require(len(spec.values) == m * m,
             "cocycle table must have |H|^2 entries",
             expected=m * m, got=len(spec.values))
    h = [v % p for v in spec.values]
    h11 = h[0]  # h(e, e): identity has index 0

    def mul(a, b):
        (x, xf), (y, yf) = a, b
        xi, yi = base.index[xf], base.index[yf]
        return ((x + y + h[xi * m + yi]) % p, base.elements[base.mul(xi, yi)])

    def inv(a):
        x, xf = a
        xi = base.index[xf]
        xinv = base.inv(xi)
        return ((-x - h[xi * m + xinv] - h11) % p, base.elements[xinv])

    ident = ((-h11) % p, base.elements[0])
    gens = [((1 - h11) % p, base.elements[0])]
    gens += [(0, base.elements[g]) for g in base.generators]
    return _Model(ident, gens, mul, inv, order_hint=p * m)


def _quotient_model(spec: QuotientSpec, cap: int) -> _Model:
    parent = build_group(spec.parent, cap=cap)
    try:
        normal = sorted(parent.index[f] for f in spec.normal_forms)
    except KeyError as e:
        raise InputError("group_mismatch",
                         f"normal subgroup form {e.args[0]!r} not in parent")
    nmask = np.zeros(parent.order, dtype=bool)
    nmask[normal] = True
    if not is_subgroup_mask(parent, nmask):
        raise InputError("not_normal", "listed forms are not a subgroup")
    for g in parent.generators:
        for x in normal:
            if not nmask[parent.conj(x, g)]:
                raise InputError("not_normal",
                                 "subgroup is not conjugation-invariant")
    # coset representative = lowest parent index in the coset
    rep_of = np.full(parent.order, -1, dtype=np.int64)
    for i in range(parent.order):
        if rep_of[i] < 0:
            coset = [parent.mul(i, k) for k in normal]
            rep_of[coset] = min(coset)

    def mul(a, b):
        pa, pb = parent.index[a], parent.index[b]
        return parent.elements[rep_of[parent.mul(pa, pb)]]

    def inv(a):
        return parent.elements[rep_of[parent.inv(parent.index[a])]]

    gens = []
    seen = set()
    for g in parent.generators:
        f = parent.elements[rep_of[g]]
        if f not in seen:
            seen.add(f)
            gens.append(f)
    projection = rep_of  # parent index -> parent index of coset rep
    return _Model(parent.elements[rep_of[0]], gens, mul, inv,
                  order_hint=parent.order // len(normal),
                  parent=parent, parent_projection=projection)


def _product_model(spec: ProductSpec, cap: int) -> _Model:
    left = build_group(spec.left, cap=cap)
    right = build_group(spec.right, cap=cap)
    lm, rm = left._model, right._model
    ident = (lm.identity, rm.identity)
    gens = [(g, rm.identity) for g in (left.elements[i] for i in left.generators)]
    gens += [(lm.identity, g) for g in (right.elements[i] for i in right.generators)]
    mul = lambda a, b: (lm.mul(a[0], b[0]), rm.mul(a[1], b[1]))
    inv = lambda a: (lm.inv(a[0]), rm.inv(a[1]))
    return _Model(ident, gens, mul, inv, order_hint=left.order * right.order)


def _model_for(spec: GroupSpec, cap: int) -> _Model:
    match spec:
        case CycSpec():
            return _cyc_model(spec)
        case AbSpec():
            return _ab_model(spec)
        case SymSpec():
            return _sym_model(spec)
        case AltSpec():
            return _alt_model(spec)
        case SLSpec():
            return _sl_model(spec)
        case AffSpec():
            return _aff_model(spec)
        case CocycleExtSpec():
            return _cocycle_model(spec, cap)
        case QuotientSpec():
            return _quotient_model(spec, cap)
        case ProductSpec():
            return _product_model(spec, cap)
    raise InputError("invalid_parameters", f"unknown group spec {spec!r}")


# --------------------------------------------------------------------------
# the group object


class FiniteGroup:
    """Concrete finite group: canonical forms + index-level arithmetic.

    Elements are addressed by index into ``elements``; index 0 is the
    identity.  ``mul_form``/``inv_form`` expose the raw form-level
    operations, which the CLI uses as an independent replay path when
    re-verifying witnesses.
    """

    def __init__(self, spec: GroupSpec, model: _Model, elements: list):
        self.spec = spec
        self._model = model
        self.elements = elements
        self.order = len(elements)
        self.index = {f: i for i, f in enumerate(elements)}
        gens = []
        for g in model.generator_forms:
            gi = self.index[g]
            if gi not in gens and gi != 0:
                gens.append(gi)
        self.generators = tuple(gens)
        self._inv_arr: np.ndarray | None = None
        self._rows: dict[int, np.ndarray] = {}
        self._classes = None
        self._center: np.ndarray | None = None
        self._derived: np.ndarray | None = None

    # -- arithmetic on indices

    def mul(self, a: int, b: int) -> int:
        return self.index[self._model.mul(self.elements[a], self.elements[b])]

    def inv(self, a: int) -> int:
        if self._inv_arr is None:
            self._inv_arr = np.array(
                [self.index[self._model.inv(f)] for f in self.elements],
                dtype=np.int64)
        return int(self._inv_arr[a])

    def mul_form(self, fa, fb):
        return self._model.mul(fa, fb)

    def inv_form(self, fa):
        return self._model.inv(fa)

    def conj(self, a: int, b: int) -> int:
        """a^b = b^-1 a b."""
        return self.mul(self.mul(self.inv(b), a), b)

    def comm(self, a: int, b: int) -> int:
        """[a, b] = a^-1 b^-1 a b."""
        return self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))

    def power(self, a: int, k: int) -> int:
        if k < 0:
            return self.power(self.inv(a), -k)
        acc, base = 0, a
        while k:
            if k & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            k >>= 1
        return acc

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.mul(x, a)
            k += 1
        return k

    def row(self, a: int) -> np.ndarray:
        """Cayley row: row(a)[b] = index of a*b.  Cached per element."""
        r = self._rows.get(a)
        if r is None:
            fa = self.elements[a]
            r = np.array([self.index[self._model.mul(fa, fb)]
                          for fb in self.elements], dtype=np.int64)
            self._rows[a] = r
        return r

    # -- structure

    def conjugacy_classes(self):
        """(class_id array, list of class representatives in index order)."""
        if self._classes is None:
            cid = np.full(self.order, -1, dtype=np.int64)
            reps = []
            for r in range(self.order):
                if cid[r] >= 0:
                    continue
                k = len(reps)
                reps.append(r)
                cid[r] = k
                stack = [r]
                while stack:
                    x = stack.pop()
                    for g in self.generators:
                        y = self.conj(x, g)
                        if cid[y] < 0:
                            cid[y] = k
                            stack.append(y)
            self._classes = (cid, reps)
        return self._classes

    def class_mask(self, a: int) -> np.ndarray:
        cid, _ = self.conjugacy_classes()
        return cid == cid[a]

    def center_mask(self) -> np.ndarray:
        if self._center is None:
            mask = np.ones(self.order, dtype=bool)
            for g in self.generators:
                mask &= np.array([self.mul(x, g) == self.mul(g, x)
                                  for x in range(self.order)])
            self._center = mask
        return self._center

    def subgroup_closure(self, seeds) -> np.ndarray:
        """Mask of the subgroup generated by the given element indices."""
        seeds = [s for s in np.atleast_1d(np.asarray(seeds, dtype=np.int64))]
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for s in seeds:
                    y = self.mul(x, int(s))
                    if not mask[y]:
                        mask[y] = True
                        nxt.append(y)
            frontier = nxt
        return mask

    def normal_closure_mask(self, seed_mask: np.ndarray) -> np.ndarray:
        conj_closed = seed_mask.copy()
        frontier = list(np.nonzero(seed_mask)[0])
        while frontier:
            nxt = []
            for x in frontier:
                for g in self.generators:
                    y = self.conj(int(x), g)
                    if not conj_closed[y]:
                        conj_closed[y] = True
                        nxt.append(y)
            frontier = nxt
        return self.subgroup_closure(np.nonzero(conj_closed)[0])

    def derived_mask(self) -> np.ndarray:
        """[G, G]: normal closure of commutators of generator pairs."""
        if self._derived is None:
            seeds = np.zeros(self.order, dtype=bool)
            for a in self.generators:
                for b in self.generators:
                    seeds[self.comm(a, b)] = True
            seeds[0] = True
            self._derived = self.normal_closure_mask(seeds)
        return self._derived

    def is_abelian(self) -> bool:
        return bool(self.center_mask().all())

    def is_perfect(self) -> bool:
        return bool(self.derived_mask().all())


def build_group(spec: GroupSpec, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Enumerate the group described by ``spec``.

    Layered BFS over right multiplication by the canonical generators; each
    layer is sorted by canonical form before being assigned indices, which
    pins the numbering.  Raises ``order_cap_exceeded`` once more than
    ``cap`` elements have been discovered.
    """
    model = _model_for(spec, cap)
    if model.order_hint is not None and model.order_hint > cap:
        raise CapExceeded("order_cap_exceeded",
                          f"group order {model.order_hint} exceeds cap {cap}",
                          cap=cap, order=model.order_hint)
    elements = [model.identity]
    index = {model.identity: 0}
    frontier = [model.identity]
    while frontier:
        layer = set()
        for f in frontier:
            for g in model.generator_forms:
                h = model.mul(f, g)
                if h not in index:
                    layer.add(h)
        frontier = sorted(layer)
        for h in frontier:
            index[h] = len(elements)
            elements.append(h)
            if len(elements) > cap:
                raise CapExceeded("order_cap_exceeded",
                                  f"enumeration exceeded cap {cap}", cap=cap)
    return FiniteGroup(spec, model, elements)


# --------------------------------------------------------------------------
# subset-mask arithmetic


def mask_from_indices(G: FiniteGroup, indices) -> np.ndarray:
    mask = np.zeros(G.order, dtype=bool)
    mask[np.asarray(list(indices), dtype=np.int64)] = True
    return mask


def inverse_mask(G: FiniteGroup, mask: np.ndarray) -> np.ndarray:
    out = np.zeros(G.order, dtype=bool)
    for a in np.nonzero(mask)[0]:
        out[G.inv(int(a))] = True
    return out


def product_mask(G: FiniteGroup, a_mask: np.ndarray, b_mask: np.ndarray) -> np.ndarray:
    """{a*b : a in A, b in B} as a mask; uses cached Cayley rows."""
    out = np.zeros(G.order, dtype=bool)
    b_idx = np.nonzero(b_mask)[0]
    if len(b_idx) == 0:
        return out
    for a in np.nonzero(a_mask)[0]:
        out[G.row(int(a))[b_idx]] = True
    return out


def power_masks(G: FiniteGroup, mask: np.ndarray, n: int) -> list[np.ndarray]:
    """[A^1, A^2, ..., A^n]."""
    assert n >= 1
    out = [mask.copy()]
    for _ in range(n - 1):
        out.append(product_mask(G, out[-1], mask))
    return out


def ball_mask(G: FiniteGroup, mask: np.ndarray, n: int) -> np.ndarray:
    """A^{<=n} = union of A^0..A^n, with A^0 = {e}."""
    out = np.zeros(G.order, dtype=bool)
    out[0] = True
    for _ in range(n):
        grown = out | product_mask(G, out, mask)
        if (grown == out).all():
            break
        out = grown
    return out


def is_subgroup_mask(G: FiniteGroup, mask: np.ndarray) -> bool:
    idx = np.nonzero(mask)[0]
    if len(idx) == 0 or not mask[0]:
        return False
    return all(mask[G.mul(int(a), int(b))] for a in idx for b in idx)


def is_symmetric_mask(G: FiniteGroup, mask: np.ndarray) -> bool:
    return bool((inverse_mask(G, mask) == mask).all())


def quotient_projection(Q: FiniteGroup) -> np.ndarray:
    """For a quotient group: array mapping parent index -> quotient index."""
    if Q._model.parent is None:
        raise InputError("group_mismatch", "projection needs a quotient group")
    parent = Q._model.parent
    rep_of = Q._model.parent_projection
    return np.array([Q.index[parent.elements[int(r)]] for r in rep_of],
                    dtype=np.int64)


# --------------------------------------------------------------------------
# abelian structure


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def abelian_invariants(G: FiniteGroup) -> tuple[int, ...]:
    """Invariant factors d_1 | d_2 | ... of an abelian group.

    Recovered from element-order statistics: for each prime p, the count of
    elements with x^{p^k} = e determines the conjugate of the p-part
    partition; parts are then combined across primes by divisibility.
    """
    if not G.is_abelian():
        raise InputError("not_abelian", "invariant factors need an abelian group")
    if G.order == 1:
        return ()
    partitions = {}
    for p in _prime_factors(G.order):
        logs = [0]  # log_p #{x : x^{p^k} = e}, starting at k = 0
        k = 1
        while True:
            cnt = sum(1 for x in range(G.order) if G.power(x, p**k) == 0)
            e = round(math.log(cnt, p))
            assert p**e == cnt, "order-dividing count must be a p-power"
            logs.append(e)
            if e == logs[-2]:
                break
            k += 1
        diffs = [logs[i + 1] - logs[i] for i in range(len(logs) - 1)]
        # diffs[k] = #{parts of the p-type partition >= k+1}; conjugate back
        parts = []
        for i, d in enumerate(diffs):
            parts += [i + 1] * (d - (diffs[i + 1] if i + 1 < len(diffs) else 0))
        partitions[p] = sorted(parts, reverse=True)
    width = max(len(v) for v in partitions.values())
    factors = []
    for j in range(width):
        f = 1
        for p, parts in partitions.items():
            if j < len(parts):
                f *= p ** parts[j]
        factors.append(f)
    return tuple(sorted(factors))


def abelianization_invariants(G: FiniteGroup) -> tuple[int, ...]:
    """Invariant factors of G/[G,G] (empty tuple when G is perfect)."""
    derived = G.derived_mask()
    if derived.all():
        return ()
    q = build_group(QuotientSpec(G.spec, tuple(G.elements[int(i)]
                                               for i in np.nonzero(derived)[0])))
    return abelian_invariants(q)


def surject_onto_prime_cyclic(G: FiniteGroup) -> tuple[int, np.ndarray]:
    """A surjection from an abelian group onto Z/p, p its least prime divisor.

    Returns ``(p, values)``: values[x] in {0..p-1}, a homomorphism onto Z/p.
    The kernel is grown deterministically from {x^p : x in G} by repeatedly
    adjoining the lowest-index outside element until the index drops to p.
    """
    if not G.is_abelian():
        raise InputError("not_abelian", "prime-cyclic surjection needs abelian G")
    if G.order == 1:
        raise InputError("trivial_group", "no proper quotient of the trivial group")
    p = _prime_factors(G.order)[0]
    kernel = np.zeros(G.order, dtype=bool)
    for x in range(G.order):
        kernel[G.power(x, p)] = True
    # in G / {x^p} every element has order dividing p, so each adjunction
    # multiplies the subgroup order by exactly p
    while G.order // int(kernel.sum()) > p:
        a = int(np.nonzero(~kernel)[0][0])
        coset = kernel.copy()
        acc = a
        for _ in range(p - 1):
            coset |= np.array([kernel[G.mul(G.inv(acc), x)] for x in range(G.order)])
            acc = G.mul(acc, a)
        kernel = coset
    assert G.order // int(kernel.sum()) == p
    a0 = int(np.nonzero(~kernel)[0][0])
    values = np.full(G.order, -1, dtype=np.int64)
    shift = 0
    for c in range(p):
        for x in np.nonzero(kernel)[0]:
            values[G.mul(shift, int(x))] = c
        shift = G.mul(shift, a0)
    assert (values >= 0).all()
    return p, values


# --------------------------------------------------------------------------
# reports


def commutator_width(G: FiniteGroup) -> int:
    """Least n with every element of [G,G] a product of n commutators."""
    comms = np.zeros(G.order, dtype=bool)
    for a in range(G.order):
        ra = G.row(a)
        ia = G.inv(a)
        for b in range(G.order):
            # [a,b] = (a^-1 b^-1)(a b)
            comms[G.mul(G.mul(ia, G.inv(b)), int(ra[b]))] = True
    derived = G.derived_mask()
    assert (comms <= derived).all()
    cur, n = comms.copy(), 1
    while not (derived <= cur).all():
        cur = product_mask(G, cur, comms)
        n += 1
        assert n <= G.order, "commutator covering must terminate"
    return n


def structure_report(G: FiniteGroup) -> dict:
    cid, reps = G.conjugacy_classes()
    return {
        "order": G.order,
        "num_classes": len(reps),
        "center_order": int(G.center_mask().sum()),
        "is_abelian": G.is_abelian(),
        "is_perfect": G.is_perfect(),
        "derived_order": int(G.derived_mask().sum()),
        "exponent": reduce(math.lcm, (G.element_order(r) for r in reps), 1),
        "abelianization": list(abelianization_invariants(G)),
    }


# --------------------------------------------------------------------------
# element text forms (used by the CLI and reports)


def _cycles_of(perm: tuple) -> list[list[int]]:
    seen, cycles = set(), []
    for s in range(len(perm)):
        if s in seen or perm[s] == s:
            continue
        cyc, x = [], s
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = perm[x]
        cycles.append(cyc)
    return cycles


def perm_to_text(perm: tuple) -> str:
    cycles = _cycles_of(perm)
    if not cycles:
        return "e"
    return "".join("(" + ",".join(str(x + 1) for x in c) + ")" for c in cycles)


def text_to_perm(text: str, degree: int) -> tuple:
    text = text.strip()
    if text in ("e", "()", "id"):
        return tuple(range(degree))
    images = list(range(degree))
    pos = 0
    touched = set()
    while pos < len(text):
        if text[pos] != "(":
            raise SpecSyntaxError(pos, "'('", text)
        close = text.find(")", pos)
        if close < 0:
            raise SpecSyntaxError(len(text), "')'", text)
        body = text[pos + 1:close]
        try:
            pts = [int(t) - 1 for t in body.split(",")]
        except ValueError:
            raise SpecSyntaxError(pos + 1, "comma-separated points", text)
        if any(x < 0 or x >= degree for x in pts):
            raise SpecSyntaxError(pos + 1, f"points in 1..{degree}", text)
        if len(set(pts)) != len(pts) or touched & set(pts):
            raise SpecSyntaxError(pos + 1, "disjoint cycles", text)
        touched |= set(pts)
        for i, x in enumerate(pts):
            images[x] = pts[(i + 1) % len(pts)]
        pos = close + 1
    return tuple(images)


def form_to_text(spec: GroupSpec, form) -> str:
    match spec:
        case CycSpec():
            return str(form)
        case AbSpec():
            return "(" + ",".join(str(x) for x in form) + ")"
        case SymSpec() | AltSpec():
            return perm_to_text(form)
        case SLSpec():
            return ",".join(str(x) for x in form)
        case AffSpec():
            vec = "(" + ",".join(str(x) for x in form[0]) + ")"
            return f"[{vec}|{','.join(str(x) for x in form[1])}]"
        case CocycleExtSpec(base=base):
            return f"[{form[0]}|{form_to_text(base, form[1])}]"
        case QuotientSpec(parent=parent):
            return form_to_text(parent, form)
        case ProductSpec(left=left, right=right):
            return f"[{form_to_text(left, form[0])}|{form_to_text(right, form[1])}]"
    raise InputError("invalid_parameters", f"unknown spec {spec!r}")


def _split_bracket_pair(text: str) -> tuple[str, str]:
    if not (text.startswith("[") and text.endswith("]")):
        raise SpecSyntaxError(0, "'[left|right]'", text)
    body = text[1:-1]
    depth = 0
    for i, ch in enumerate(body):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == "|" and depth == 0:
            return body[:i], body[i + 1:]
    raise SpecSyntaxError(len(text), "top-level '|'", text)


def text_to_form(spec: GroupSpec, text: str):
    text = text.strip()
    try:
        match spec:
            case CycSpec(modulus=k):
                return int(text) % k
            case AbSpec(moduli=mods):
                inner = text.strip()
                if inner.startswith("(") and inner.endswith(")"):
                    inner = inner[1:-1]
                vals = [int(t) for t in inner.split(",")]
                if len(vals) != len(mods):
                    raise SpecSyntaxError(0, f"{len(mods)} coordinates", text)
                return tuple(v % m for v, m in zip(vals, mods))
            case SymSpec(degree=n) | AltSpec(degree=n):
                return text_to_perm(text, n)
            case SLSpec(n=n, p=p):
                vals = [int(t) % p for t in text.split(",")]
                if len(vals) != n * n:
                    raise SpecSyntaxError(0, f"{n * n} entries", text)
                return tuple(vals)
            case AffSpec(n=n, p=p):
                l, r = _split_bracket_pair(text)
                vec = text_to_form(AbSpec(tuple(p for _ in range(n))), l)
                return (vec, text_to_form(SLSpec(n, p), r))
            case CocycleExtSpec(p=p, base=base):
                l, r = _split_bracket_pair(text)
                return (int(l) % p, text_to_form(base, r))
            case QuotientSpec(parent=parent):
                return text_to_form(parent, text)
            case ProductSpec(left=left, right=right):
                l, r = _split_bracket_pair(text)
                return (text_to_form(left, l), text_to_form(right, r))
    except ValueError:
        raise SpecSyntaxError(0, "integer literal", text)
    raise InputError("invalid_parameters", f"unknown spec {spec!r}")


def parse_element(G: FiniteGroup, text: str) -> int:
    """Element index from its text form; quotient input names a parent element."""
    form = text_to_form(G.spec, text)
    if isinstance(G.spec, QuotientSpec):
        parent = G._model.parent
        proj = G._model.parent_projection
        form = parent.elements[proj[parent.index[form]]]
    if form not in G.index:
        raise InputError("group_mismatch", f"element {text!r} not in the group")
    return G.index[form]


def element_text(G: FiniteGroup, i: int) -> str:
    return form_to_text(G.spec, G.elements[i])


# --------------------------------------------------------------------------
# group spec grammar:  Cyc(12) | Ab(4,2) | Sym(6) | Alt(5) | SL(2,5)
#                      | Aff(2,5) | Prod(A,B) | Quot(A,center) | Quot(A,gen(...))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, expected: str):
        raise SpecSyntaxError(self.pos, expected, self.text)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, ch: str):
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            self.error(f"'{ch}'")
        self.pos += 1

    def ident(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum()
                                             or self.text[self.pos] == "_"):
            self.pos += 1
        if self.pos == start:
            self.error("a name")
        return self.text[start:self.pos]

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] == "-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start or self.text[start:self.pos] == "-":
            self.error("an integer")
        return int(self.text[start:self.pos])

    def int_list(self) -> list[int]:
        out = [self.integer()]
        while True:
            self.skip_ws()
            if self.pos < len(self.text) and self.text[self.pos] == ",":
                self.pos += 1
                out.append(self.integer())
            else:
                return out

    def balanced_until(self, stops: str) -> str:
        """Consume text until a top-level stop character; return it."""
        start = self.pos
        depth = 0
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch in "([":
                depth += 1
            elif ch in ")]":
                if depth == 0:
                    break
                depth -= 1
            if depth == 0 and ch in stops:
                break
            self.pos += 1
        return self.text[start:self.pos]


def parse_group_spec(text: str) -> GroupSpec:
    p = _Parser(text)
    spec = _parse_group(p)
    p.skip_ws()
    if p.pos != len(text):
        p.error("end of input")
    return spec


def _parse_group(p: _Parser) -> GroupSpec:
    p.skip_ws()
    name_start = p.pos
    name = p.ident()
    p.expect("(")
    if name == "Cyc":
        spec = CycSpec(p.integer())
    elif name == "Ab":
        spec = AbSpec(tuple(p.int_list()))
    elif name == "Sym":
        spec = SymSpec(p.integer())
    elif name == "Alt":
        spec = AltSpec(p.integer())
    elif name in ("SL", "Aff"):
        n = p.integer()
        p.expect(",")
        q = p.integer()
        spec = SLSpec(n, q) if name == "SL" else AffSpec(n, q)
    elif name == "Prod":
        left = _parse_group(p)
        p.expect(",")
        right = _parse_group(p)
        spec = ProductSpec(left, right)
    elif name == "Quot":
        parent = _parse_group(p)
        p.expect(",")
        spec = _parse_quotient(p, parent)
    else:
        p.pos = name_start  # point at the unknown family name itself
        p.error("a group family (Cyc/Ab/Sym/Alt/SL/Aff/Prod/Quot)")
    p.expect(")")
    return spec


def _parse_quotient(p: _Parser, parent_spec: GroupSpec) -> QuotientSpec:
    p.skip_ws()
    parent = build_group(parent_spec)
    if p.text[p.pos:p.pos + 6] == "center":
        p.pos += 6
        idx = np.nonzero(parent.center_mask())[0]
    else:
        name = p.ident()
        if name != "gen":
            p.pos -= len(name)
            p.error("'center' or 'gen(...)'")
        p.expect("(")
        seeds = []
        while True:
            chunk = p.balanced_until(";)").strip()
            if chunk:
                seeds.append(parse_element(parent, chunk))
            p.skip_ws()
            if p.pos < len(p.text) and p.text[p.pos] == ";":
                p.pos += 1
                continue
            break
        p.expect(")")
        idx = np.nonzero(parent.normal_closure_mask(
            mask_from_indices(parent, seeds or [0])))[0]
    return QuotientSpec(parent_spec, tuple(parent.elements[int(i)] for i in idx))
