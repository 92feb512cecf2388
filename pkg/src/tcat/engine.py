"""Graphical-calculus engine over skeletal premodular data.

Objects are formal direct sums of tensor words of simple labels; morphisms
are stored per simple sector: the block of ``f : X -> Y`` at sector ``k`` is
the matrix of post-composition ``Hom(k, X) -> Hom(k, Y)`` in the left-combed
fusion-tree bases.  Composition is then plain per-sector matrix
multiplication, and all structure (tensor product, braiding, duality,
loops) is expressed through explicit recoupling matrices built from the
F-symbols.

The tree bases are normalized so that splitting followed by fusion along
the same tree is the identity on the channel ("orthonormal" convention);
with that choice the resolutions of identity carry quantum-dimension
weights exactly as in the usual premodular graphical calculus.

Everything here is a pure function of immutable inputs; recoupling
matrices are memoized on the category's private cache, so repeated calls
are bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .category import CategoryData, Scalar
from .errors import CompositionError, ShapeError

__all__ = [
    "ObjectExpr", "Morphism", "CasimirPair", "FusionTreeBasis",
    "as_object", "fusion_tree_basis", "identity", "zero_morphism",
    "random_morphism", "random_endomorphism", "compose", "compose_all",
    "tensor", "tensor_all", "braiding", "cup_cap", "quantum_trace",
    "trace_pairing", "partial_trace_right", "partial_trace_left",
    "hom_basis", "identity_resolution", "omega_loop", "zigzag_defects",
    "inclusion", "projection", "direct_sum", "distance", "defect_from_identity",
    "morphism_dump", "word_trees",
]

Word = tuple


# ----------------------------------------------------------------------
# objects
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ObjectExpr:
    """A formal direct sum of tensor words of simple labels.

    ``summands`` is an ordered tuple of ``(word, multiplicity)`` pairs; the
    empty word is the tensor unit.  Words never contain the unit label: it
    is stripped on construction (the unit coherence isomorphisms of the
    skeletal category are identities).
    """

    summands: tuple

    # -- constructors ---------------------------------------------------

    @staticmethod
    def word(letters, multiplicity: int = 1) -> "ObjectExpr":
        w = tuple(int(l) for l in letters if int(l) != 0)
        return ObjectExpr(((w, int(multiplicity)),))

    @staticmethod
    def simple(a: int) -> "ObjectExpr":
        return ObjectExpr.word((a,))

    @staticmethod
    def unit() -> "ObjectExpr":
        return ObjectExpr((((), 1),))

    @staticmethod
    def direct_sum(parts) -> "ObjectExpr":
        summands = []
        for p in parts:
            summands.extend(p.summands)
        return ObjectExpr(tuple(summands))

    @staticmethod
    def zero() -> "ObjectExpr":
        return ObjectExpr(())

    # -- structure ------------------------------------------------------

    def tensor(self, other: "ObjectExpr") -> "ObjectExpr":
        return ObjectExpr(tuple(
            (wa + wb, ma * mb)
            for (wa, ma) in self.summands for (wb, mb) in other.summands))

    def dual(self, cat: CategoryData) -> "ObjectExpr":
        return ObjectExpr(tuple(
            (tuple(cat.dual[l] for l in reversed(w)), m)
            for (w, m) in self.summands))

    def dim_sector(self, cat: CategoryData, k: int) -> int:
        return len(sector_basis(cat, self, k))

    def sector_dims(self, cat: CategoryData) -> dict:
        return {k: self.dim_sector(cat, k) for k in range(cat.n_labels)}

    def grading(self, cat: CategoryData) -> dict:
        """Multiplicity of each simple label, keyed by label id."""
        return {k: d for k, d in self.sector_dims(cat).items() if d}

    def is_zero(self, cat: CategoryData) -> bool:
        return all(d == 0 for d in self.sector_dims(cat).values())

    def describe(self, cat: CategoryData) -> str:
        if not self.summands:
            return "0"
        parts = []
        for w, m in self.summands:
            body = "1" if not w else "*".join(cat.label_name(l) for l in w)
            parts.append(body if m == 1 else f"{m}({body})")
        return " + ".join(parts)


def as_object(X) -> ObjectExpr:
    if isinstance(X, ObjectExpr):
        return X
    if isinstance(X, int):
        return ObjectExpr.simple(X)
    return ObjectExpr.word(tuple(X))


# ----------------------------------------------------------------------
# fusion trees and recoupling matrices
# ----------------------------------------------------------------------

def _cached(cat, key, builder):
    hit = cat._cache.get(key)
    if hit is None:
        hit = builder()
        cat._cache[key] = hit
    return hit


@dataclass(frozen=True)
class FusionTreeBasis:
    """The canonical left-combed tree basis of Hom(root, leaves).

    ``trees`` lists the internal-edge label chains in lexicographic order;
    this fixed choice is what makes morphism block matrices unambiguous.
    """

    root: int
    leaves: tuple
    trees: tuple

    def __len__(self):
        return len(self.trees)


def fusion_tree_basis(cat: CategoryData, leaves, root: int) -> FusionTreeBasis:
    w = tuple(int(l) for l in leaves if int(l) != 0)
    return FusionTreeBasis(root=root, leaves=w, trees=word_trees(cat, w, root))


def word_trees(cat: CategoryData, w: Word, k: int) -> tuple:
    """Left-combed trees of Hom(k, w): internal chains (c_2 .. c_{m-1})."""
    def build():
        m = len(w)
        if m == 0:
            return ((),) if k == 0 else ()
        if m == 1:
            return ((),) if w[0] == k else ()
        out = []

        def rec(pos, cur, acc):
            if pos == m - 1:
                if cat.ring.admissible(cur, w[pos], k):
                    out.append(tuple(acc))
                return
            for nxt in cat.ring.fusion(cur, w[pos]):
                acc.append(nxt)
                rec(pos + 1, nxt, acc)
                acc.pop()

        rec(1, w[0], [])
        return tuple(out)

    return _cached(cat, ("trees", w, k), build)


def _tails(cat: CategoryData, i: int, w: Word, k: int) -> tuple:
    """Chains from root i through the letters of w to k: (e_1 .. e_{l-1})."""
    def build():
        l = len(w)
        if l == 0:
            return ((),) if i == k else ()
        if l == 1:
            return ((),) if cat.ring.admissible(i, w[0], k) else ()
        out = []

        def rec(pos, cur, acc):
            if pos == l - 1:
                if cat.ring.admissible(cur, w[pos], k):
                    out.append(tuple(acc))
                return
            for nxt in cat.ring.fusion(cur, w[pos]):
                acc.append(nxt)
                rec(pos + 1, nxt, acc)
                acc.pop()

        rec(0, i, [])
        return tuple(out)

    return _cached(cat, ("tails", i, w, k), build)


def _tail_transform(cat: CategoryData, i: int, w: Word, k: int):
    """Change of basis between nested and combed continuations of a prefix.

    Returns ``(mat, rows, cols)`` where rows are the tails of
    ``_tails(cat, i, w, k)``, columns are pairs ``(j, tree)`` with
    ``N(i, j, k) = 1`` and ``tree`` a left-combed tree of Hom(j, w), and

        (id_i (x) tree) o split(k -> i j)  =  sum_tail  mat[tail, (j, tree)]
                                               x combed continuation.

    Built by peeling the last letter of ``w`` with one inverse F-move per
    step; this matrix is the engine's only source of F-symbol data.
    """
    def build():
        rows = _tails(cat, i, w, k)
        cols = []
        for j in range(cat.n_labels):
            if cat.ring.admissible(i, j, k):
                for t in word_trees(cat, w, j):
                    cols.append((j, t))
        mat = np.zeros((len(rows), len(cols)), dtype=complex)
        l = len(w)
        if l == 0 or l == 1:
            # both bases are the single trivial continuation
            for ri in range(len(rows)):
                for ci in range(len(cols)):
                    mat[ri, ci] = 1.0
            return mat, rows, tuple(cols)
        u, z = w[:-1], w[-1]
        row_index = {t: n for n, t in enumerate(rows)}
        sub_cache = {}
        for ci, (j, t) in enumerate(cols):
            jp = t[-1] if l >= 3 else w[0]       # root of the u-part of t
            tp = t[:-1] if l >= 3 else ()
            finv, f_rows, f_cols = cat.f.inverse(cat.ring, i, jp, z, k)
            if j not in f_rows:
                continue
            jrow = f_rows.index(j)
            for mcol, m in enumerate(f_cols):
                coeff = finv[jrow, mcol]
                if coeff == 0:
                    continue
                if (m,) not in sub_cache:
                    sub_cache[(m,)] = _tail_transform(cat, i, u, m)
                smat, srows, scols = sub_cache[(m,)]
                try:
                    sci = scols.index((jp, tp))
                except ValueError:
                    continue
                for sri, prefix in enumerate(srows):
                    v = smat[sri, sci]
                    if v == 0:
                        continue
                    full = prefix + (m,)
                    ri = row_index.get(full)
                    if ri is not None:
                        mat[ri, ci] += coeff * v
        return mat, rows, tuple(cols)

    return _cached(cat, ("tailT", i, w, k), build)


def sector_basis(cat: CategoryData, X: ObjectExpr, k: int) -> tuple:
    """Ordered basis of Hom(k, X): triples (summand, copy, tree)."""
    def build():
        out = []
        for si, (w, m) in enumerate(X.summands):
            trees = word_trees(cat, w, k)
            for c in range(m):
                for t in trees:
                    out.append((si, c, t))
        return tuple(out)

    return _cached(cat, ("basis", X.summands, k), build)


def _split_chain(w: Word, x: Word, chain: Word, k: int):
    """Split a combed chain on w + x into (prefix tree on w, root i, tail)."""
    wl, xl = len(w), len(x)
    if wl == 0:
        if xl <= 1:
            return (), 0, ()
        return (), 0, (x[0],) + chain
    if xl == 0:
        return chain, k, ()
    if wl == 1:
        return (), w[0], chain
    return chain[:wl - 2], chain[wl - 2], chain[wl - 1:]


def _product_transform(cat: CategoryData, X: ObjectExpr, Y: ObjectExpr, k: int):
    """Isomorphism  (+)_{i,j} Hom(k, i j) (x) Hom(i, X) (x) Hom(j, Y)
    -> Hom(k, X (x) Y)  in the combed bases.

    Returns ``(Q, cols, col_offset)`` where cols lists ``(i, j)`` channel
    pairs in label order and ``col_offset[(i, j)]`` is the slice start of
    that pair's ``Hom(i, X) x Hom(j, Y)`` block (bi outer, bj inner).
    """
    def build():
        XY = X.tensor(Y)
        rows = sector_basis(cat, XY, k)
        row_index = {b: n for n, b in enumerate(rows)}
        pairs = []
        offsets = {}
        off = 0
        bases_X = {i: sector_basis(cat, X, i) for i in range(cat.n_labels)}
        bases_Y = {j: sector_basis(cat, Y, j) for j in range(cat.n_labels)}
        for i in range(cat.n_labels):
            for j in range(cat.n_labels):
                if not cat.ring.admissible(i, j, k):
                    continue
                pairs.append((i, j))
                offsets[(i, j)] = off
                off += len(bases_X[i]) * len(bases_Y[j])
        ncols = off
        Q = np.zeros((len(rows), ncols), dtype=complex)
        nY = len(Y.summands)
        X_index = {i: {b: n for n, b in enumerate(bases_X[i])}
                   for i in range(cat.n_labels)}
        for rn, (sp, cp, chain) in enumerate(rows):
            alpha, beta = divmod(sp, nY)
            wa, ma = X.summands[alpha]
            xb, mb = Y.summands[beta]
            ca, cb = divmod(cp, mb)
            prefix, i, tail = _split_chain(wa, xb, chain, k)
            bi = X_index[i].get((alpha, ca, prefix))
            if bi is None:
                continue
            tmat, trows, tcols = _tail_transform(cat, i, xb, k)
            try:
                tr = trows.index(tail)
            except ValueError:
                continue
            for tc, (j, tree) in enumerate(tcols):
                v = tmat[tr, tc]
                if v == 0:
                    continue
                # locate (beta, cb, tree) within the Hom(j, Y) basis
                try:
                    bj = bases_Y[j].index((beta, cb, tree))
                except ValueError:
                    continue
                col = offsets[(i, j)] + bi * len(bases_Y[j]) + bj
                Q[rn, col] = v
        return Q, tuple(pairs), offsets

    return _cached(cat, ("Q", X.summands, Y.summands, k), build)


def _product_transform_inv(cat, X, Y, k):
    def build():
        Q, pairs, offsets = _product_transform(cat, X, Y, k)
        if Q.shape[0] != Q.shape[1]:
            raise ShapeError(
                f"recoupling matrix is not square at sector {k}: {Q.shape}")
        return np.linalg.inv(Q) if Q.size else Q.reshape(Q.shape[::-1])

    return _cached(cat, ("Qinv", X.summands, Y.summands, k), build)


# ----------------------------------------------------------------------
# morphisms
# ----------------------------------------------------------------------

@dataclass
class Morphism:
    """A morphism X -> Y as per-sector block matrices.

    ``blocks[k]`` maps Hom(k, X) -> Hom(k, Y); sectors where either space
    is zero-dimensional may be omitted.
    """

    cat: CategoryData
    source: ObjectExpr
    target: ObjectExpr
    blocks: dict

    def block(self, k: int) -> np.ndarray:
        b = self.blocks.get(k)
        if b is not None:
            return b
        return np.zeros((self.target.dim_sector(self.cat, k),
                         self.source.dim_sector(self.cat, k)), dtype=complex)

    def __add__(self, other: "Morphism") -> "Morphism":
        if self.source != other.source or self.target != other.target:
            raise CompositionError("cannot add morphisms with different objects")
        keys = set(self.blocks) | set(other.blocks)
        return Morphism(self.cat, self.source, self.target,
                        {k: self.block(k) + other.block(k) for k in keys})

    def __sub__(self, other: "Morphism") -> "Morphism":
        return self + (other * (-1.0))

    def __mul__(self, scalar) -> "Morphism":
        return Morphism(self.cat, self.source, self.target,
                        {k: b * complex(scalar) for k, b in self.blocks.items()})

    __rmul__ = __mul__

    def norm(self) -> float:
        """Max over sectors of the spectral norm of the blocks."""
        worst = 0.0
        for b in self.blocks.values():
            if b.size:
                worst = max(worst, float(np.linalg.norm(b, 2)))
        return worst

    def is_endomorphism(self) -> bool:
        return self.source == self.target

    def dump(self) -> str:
        return morphism_dump(self)


def morphism_dump(f: Morphism) -> str:
    """Structured-text debug dump (sector -> matrix), for golden tests."""
    cat = f.cat
    lines = [f"source: {f.source.describe(cat)}",
             f"target: {f.target.describe(cat)}"]
    for k in range(cat.n_labels):
        b = f.block(k)
        if b.size == 0:
            continue
        lines.append(f"sector {cat.label_name(k)}:")
        for row in b:
            lines.append("  [" + ", ".join(
                f"{v.real:+.12e}{v.imag:+.12e}j" for v in row) + "]")
    return "\n".join(lines)


def identity(cat: CategoryData, X: ObjectExpr) -> Morphism:
    X = as_object(X)
    blocks = {}
    for k in range(cat.n_labels):
        d = X.dim_sector(cat, k)
        if d:
            blocks[k] = np.eye(d, dtype=complex)
    return Morphism(cat, X, X, blocks)


def zero_morphism(cat: CategoryData, X: ObjectExpr, Y: ObjectExpr) -> Morphism:
    return Morphism(cat, as_object(X), as_object(Y), {})


def random_morphism(cat: CategoryData, X: ObjectExpr, Y: ObjectExpr,
                    rng: np.random.Generator) -> Morphism:
    X, Y = as_object(X), as_object(Y)
    blocks = {}
    for k in range(cat.n_labels):
        dt, ds = Y.dim_sector(cat, k), X.dim_sector(cat, k)
        if dt and ds:
            blocks[k] = (rng.standard_normal((dt, ds))
                         + 1j * rng.standard_normal((dt, ds)))
    return Morphism(cat, X, Y, blocks)


def random_endomorphism(cat, X, rng) -> Morphism:
    return random_morphism(cat, X, X, rng)


def compose(g: Morphism, f: Morphism) -> Morphism:
    """g after f."""
    if f.target != g.source:
        raise CompositionError(
            "cannot compose: inner objects differ "
            f"({f.target.summands} vs {g.source.summands})")
    cat = f.cat
    blocks = {}
    for k in range(cat.n_labels):
        dt = g.target.dim_sector(cat, k)
        ds = f.source.dim_sector(cat, k)
        if dt and ds:
            blocks[k] = g.block(k) @ f.block(k)
    return Morphism(cat, f.source, g.target, blocks)


def compose_all(*mors: Morphism) -> Morphism:
    out = mors[0]
    for m in mors[1:]:
        out = compose(out, m)
    return out


def distance(f: Morphism, g: Morphism) -> float:
    if f.source != g.source or f.target != g.target:
        raise ShapeError("cannot compare morphisms with different objects")
    return (f - g).norm()


def defect_from_identity(f: Morphism) -> float:
    if not f.is_endomorphism():
        raise ShapeError("identity defect of a non-endomorphism")
    return distance(f, identity(f.cat, f.source))


def tensor(f: Morphism, g: Morphism) -> Morphism:
    """Monoidal product, realized through recoupling onto combed bases."""
    cat = f.cat
    Xs, Ys = f.source, g.source
    Xt, Yt = f.target, g.target
    src = Xs.tensor(Ys)
    tgt = Xt.tensor(Yt)
    blocks = {}
    for k in range(cat.n_labels):
        ds = src.dim_sector(cat, k)
        dt = tgt.dim_sector(cat, k)
        if not ds or not dt:
            continue
        Qs_inv = _product_transform_inv(cat, Xs, Ys, k)
        Qt, pairs_t, off_t = _product_transform(cat, Xt, Yt, k)
        _, pairs_s, off_s = _product_transform(cat, Xs, Ys, k)
        mid = np.zeros((Qt.shape[1], Qs_inv.shape[0]), dtype=complex)
        for (i, j) in pairs_t:
            if (i, j) not in off_s:
                continue
            fb, gb = f.block(i), g.block(j)
            if fb.size == 0 or gb.size == 0:
                continue
            rt = off_t[(i, j)]
            rs = off_s[(i, j)]
            kr = np.kron(fb, gb)
            mid[rt:rt + kr.shape[0], rs:rs + kr.shape[1]] = kr
        blocks[k] = Qt @ mid @ Qs_inv
    return Morphism(cat, src, tgt, blocks)


def tensor_all(*mors: Morphism) -> Morphism:
    out = mors[0]
    for m in mors[1:]:
        out = tensor(out, m)
    return out


def braiding(cat: CategoryData, X, Y, inverse: bool = False) -> Morphism:
    """The braiding X (x) Y -> Y (x) X (or the inverse braiding c^{-1}_{Y,X}).

    Channel-wise this is the R-symbol action conjugated by the recoupling
    isomorphisms; naturality and the hexagons are theorems checked by the
    test-suite, not inputs.
    """
    X, Y = as_object(X), as_object(Y)
    src = X.tensor(Y)
    tgt = Y.tensor(X)
    blocks = {}
    for k in range(cat.n_labels):
        if not src.dim_sector(cat, k):
            continue
        Qs_inv = _product_transform_inv(cat, X, Y, k)
        Qt, pairs_t, off_t = _product_transform(cat, Y, X, k)
        _, pairs_s, off_s = _product_transform(cat, X, Y, k)
        mid = np.zeros((Qt.shape[1], Qs_inv.shape[0]), dtype=complex)
        for (i, j) in pairs_s:
            ni = len(sector_basis(cat, X, i))
            nj = len(sector_basis(cat, Y, j))
            if ni == 0 or nj == 0 or (j, i) not in off_t:
                continue
            if inverse:
                rv = cat.r.get(j, i, k)
                coeff = (1.0 / rv) if rv else 0j
            else:
                coeff = cat.r.get(i, j, k)
            rs = off_s[(i, j)]
            rt = off_t[(j, i)]
            for bi in range(ni):
                for bj in range(nj):
                    mid[rt + bj * ni + bi, rs + bi * nj + bj] = coeff
        blocks[k] = Qt @ mid @ Qs_inv
    return Morphism(cat, src, tgt, blocks)


# ----------------------------------------------------------------------
# duality: cups, caps, traces
# ----------------------------------------------------------------------

def _simple_coev(cat, a, right=False) -> Morphism:
    abar = cat.dual[a]
    if right:
        tgt = ObjectExpr.word((abar, a))
        scalar = cat.coev_right_scalar(a)
    else:
        tgt = ObjectExpr.word((a, abar))
        scalar = cat.coev_scalar(a)
    return Morphism(cat, ObjectExpr.unit(), tgt,
                    {0: np.array([[scalar]], dtype=complex)})


def _simple_ev(cat, a, right=False) -> Morphism:
    abar = cat.dual[a]
    if right:
        src = ObjectExpr.word((a, abar))
        scalar = cat.ev_right_scalar(a)
    else:
        src = ObjectExpr.word((abar, a))
        scalar = cat.ev_scalar(a)
    return Morphism(cat, src, ObjectExpr.unit(),
                    {0: np.array([[scalar]], dtype=complex)})


def _word_coev(cat, w: Word, right=False) -> Morphism:
    if len(w) == 0:
        return identity(cat, ObjectExpr.unit())
    a, u = w[0], w[1:]
    if right:
        # coev'(w): 1 -> w* (x) w, peeling the first letter outermost
        inner = _word_coev(cat, u, right=True)
        step = tensor(identity(cat, as_object(u).dual(cat)),
                      tensor(_simple_coev(cat, a, right=True),
                             identity(cat, ObjectExpr.word(u))))
        return compose(step, inner)
    inner = _word_coev(cat, u)
    step = tensor(identity(cat, ObjectExpr.simple(a)),
                  tensor(inner, identity(cat, ObjectExpr.simple(cat.dual[a]))))
    return compose(step, _simple_coev(cat, a))


def _word_ev(cat, w: Word, right=False) -> Morphism:
    if len(w) == 0:
        return identity(cat, ObjectExpr.unit())
    a, u = w[0], w[1:]
    if right:
        # ev'(w): w (x) w* -> 1, the first letter closes outermost
        step = tensor(identity(cat, ObjectExpr.simple(a)),
                      tensor(_word_ev(cat, u, right=True),
                             identity(cat, ObjectExpr.simple(cat.dual[a]))))
        return compose(_simple_ev(cat, a, right=True), step)
    step = tensor(identity(cat, as_object(u).dual(cat)),
                  tensor(_simple_ev(cat, a), identity(cat, ObjectExpr.word(u))))
    return compose(_word_ev(cat, u), step)


def inclusion(cat, X: ObjectExpr, si: int, copy: int) -> Morphism:
    """Canonical inclusion of the (si, copy) word summand into X."""
    w, _m = X.summands[si]
    src = ObjectExpr.word(w)
    blocks = {}
    for k in range(cat.n_labels):
        rows = sector_basis(cat, X, k)
        cols = sector_basis(cat, src, k)
        if not rows or not cols:
            continue
        mat = np.zeros((len(rows), len(cols)), dtype=complex)
        for cn, (_s0, _c0, tree) in enumerate(cols):
            mat[rows.index((si, copy, tree)), cn] = 1.0
        blocks[k] = mat
    return Morphism(cat, src, X, blocks)


def projection(cat, X: ObjectExpr, si: int, copy: int) -> Morphism:
    inc = inclusion(cat, X, si, copy)
    return Morphism(cat, X, inc.source,
                    {k: b.T.copy() for k, b in inc.blocks.items()})


def cup_cap(cat: CategoryData, X, kind: str) -> Morphism:
    """Duality morphisms of an object.

    kind = 'coev'  : 1 -> X (x) X*        kind = 'eval'  : X* (x) X -> 1
    kind = 'coev'' : 1 -> X* (x) X        kind = 'eval'' : X (x) X* -> 1

    The primed pair is induced by the pivotal structure; together the four
    satisfy the zig-zag identities and give the left/right quantum traces.
    """
    X = as_object(X)
    right = kind in ("coev'", "eval'")
    if kind not in ("coev", "eval", "coev'", "eval'"):
        raise ShapeError(f"unknown cup/cap kind {kind!r}")
    Xd = X.dual(cat)
    if kind.startswith("coev"):
        tgt = X.tensor(Xd) if not right else Xd.tensor(X)
        out = zero_morphism(cat, ObjectExpr.unit(), tgt)
        for si, (w, m) in enumerate(X.summands):
            base = _word_coev(cat, w, right=right)
            for c in range(m):
                if right:
                    emb = tensor(inclusion(cat, Xd, si, c), inclusion(cat, X, si, c))
                else:
                    emb = tensor(inclusion(cat, X, si, c), inclusion(cat, Xd, si, c))
                out = out + compose(emb, base)
        return out
    src = Xd.tensor(X) if not right else X.tensor(Xd)
    out = zero_morphism(cat, src, ObjectExpr.unit())
    for si, (w, m) in enumerate(X.summands):
        base = _word_ev(cat, w, right=right)
        for c in range(m):
            if right:
                prj = tensor(projection(cat, X, si, c), projection(cat, Xd, si, c))
            else:
                prj = tensor(projection(cat, Xd, si, c), projection(cat, X, si, c))
            out = out + compose(base, prj)
    return out


def quantum_trace(cat: CategoryData, f: Morphism, side: str = "left") -> Scalar:
    """Quantum trace of an endomorphism via explicit cup/cap closure."""
    if not f.is_endomorphism():
        raise ShapeError("quantum trace of a non-endomorphism")
    X = f.source
    if side == "left":
        loop = compose_all(cup_cap(cat, X, "eval'"),
                           tensor(f, identity(cat, X.dual(cat))),
                           cup_cap(cat, X, "coev"))
    elif side == "right":
        loop = compose_all(cup_cap(cat, X, "eval"),
                           tensor(identity(cat, X.dual(cat)), f),
                           cup_cap(cat, X, "coev'"))
    else:
        raise ShapeError(f"unknown trace side {side!r}")
    return complex(loop.block(0)[0, 0])


def partial_trace_right(cat, f: Morphism, X: ObjectExpr, J: ObjectExpr) -> Morphism:
    """Close the right factor of f : X (x) J -> X (x) J into a loop."""
    Jd = J.dual(cat)
    return compose_all(
        tensor(identity(cat, X), cup_cap(cat, J, "eval'")),
        tensor(f, identity(cat, Jd)),
        tensor(identity(cat, X), cup_cap(cat, J, "coev")))


def partial_trace_left(cat, f: Morphism, J: ObjectExpr, X: ObjectExpr) -> Morphism:
    """Close the left factor of f : J (x) X -> J (x) X into a loop."""
    Jd = J.dual(cat)
    return compose_all(
        tensor(cup_cap(cat, J, "eval"), identity(cat, X)),
        tensor(identity(cat, Jd), f),
        tensor(cup_cap(cat, J, "coev'"), identity(cat, X)))


def zigzag_defects(cat: CategoryData, X) -> list:
    """Residuals of the four zig-zag identities for an object."""
    X = as_object(X)
    Xd = X.dual(cat)
    id_X = identity(cat, X)
    id_Xd = identity(cat, Xd)
    z1 = compose(tensor(id_X, cup_cap(cat, X, "eval")),
                 tensor(cup_cap(cat, X, "coev"), id_X))
    z2 = compose(tensor(cup_cap(cat, X, "eval"), id_Xd),
                 tensor(id_Xd, cup_cap(cat, X, "coev")))
    z3 = compose(tensor(id_Xd, cup_cap(cat, X, "eval'")),
                 tensor(cup_cap(cat, X, "coev'"), id_Xd))
    z4 = compose(tensor(cup_cap(cat, X, "eval'"), id_X),
                 tensor(id_X, cup_cap(cat, X, "coev'")))
    return [defect_from_identity(z) for z in (z1, z2, z3, z4)]


# ----------------------------------------------------------------------
# dual bases and loops
# ----------------------------------------------------------------------

@dataclass
class CasimirPair:
    """Dual bases of Hom(X, i*) and Hom(i*, X) under the trace pairing.

    ``trace_pairing(dual_basis[a], basis[b]) = delta_ab`` within tolerance;
    the Gram matrix that was inverted during construction is reported
    through its condition number.
    """

    basis: list
    dual_basis: list
    gram_condition: float


def trace_pairing(cat, psi: Morphism, phi: Morphism) -> Scalar:
    """Tr(psi o phi) for phi : X -> Y, psi : Y -> X."""
    return quantum_trace(cat, compose(psi, phi))


def hom_basis(cat: CategoryData, X, i: int, rotation=None) -> CasimirPair:
    """Basis of Hom(X, i*) plus its trace-pairing dual in Hom(i*, X).

    The default basis is the canonical fusion-tree basis; ``rotation`` (an
    invertible matrix) mixes it, and the dual basis is recomputed through
    the Gram matrix, so downstream constructions can be checked for basis
    independence.
    """
    X = as_object(X)
    istar = cat.dual[i]
    tgt = ObjectExpr.simple(istar)
    n = X.dim_sector(cat, istar)
    if n == 0:
        return CasimirPair([], [], 1.0)
    basis = []
    candidates = []
    for l in range(n):
        row = np.zeros((1, n), dtype=complex)
        row[0, l] = 1.0
        basis.append(Morphism(cat, X, tgt, {istar: row}))
        col = np.zeros((n, 1), dtype=complex)
        col[l, 0] = 1.0
        candidates.append(Morphism(cat, tgt, X, {istar: col}))
    if rotation is not None:
        rot = np.asarray(rotation, dtype=complex)
        if rot.shape != (n, n):
            raise ShapeError(f"rotation must be {n}x{n}, got {rot.shape}")
        basis = [
            Morphism(cat, X, tgt,
                     {istar: sum(rot[a, l] * basis[l].block(istar)
                                 for l in range(n))})
            for a in range(n)
        ]
    gram = np.array([[trace_pairing(cat, candidates[m], basis[l])
                      for l in range(n)] for m in range(n)])
    coeffs = np.linalg.inv(gram).T
    duals = []
    for a in range(n):
        col = sum(coeffs[m, a] * candidates[m].block(istar) for m in range(n))
        duals.append(Morphism(cat, tgt, X, {istar: col}))
    return CasimirPair(basis, duals, float(np.linalg.cond(gram)))


def identity_resolution(cat: CategoryData, W) -> list:
    """Triples (i, phi_l, phi^l) with sum_i sum_l dim(i) phi^l o phi_l = id_W."""
    W = as_object(W)
    out = []
    for i in range(cat.n_labels):
        n = W.dim_sector(cat, i)
        if n == 0:
            continue
        d = cat.dim(i)
        tgt = ObjectExpr.simple(i)
        for l in range(n):
            row = np.zeros((1, n), dtype=complex)
            row[0, l] = 1.0
            col = np.zeros((n, 1), dtype=complex)
            col[l, 0] = 1.0 / d
            out.append((i,
                        Morphism(cat, W, tgt, {i: row}),
                        Morphism(cat, tgt, W, {i: col})))
    return out


def _loop_pass(cat, parts, j: int, mirror: bool) -> Morphism:
    """The strand j crosses the whole bundle front-to-back and returns.

    Parts with an attached half-braiding cross through it on the front
    pass; everything else uses the ambient braiding (or its inverse for
    the mirrored loop).
    """
    J = ObjectExpr.simple(j)
    exprs = [as_object(p[0]) for p in parts]
    W = ObjectExpr.unit()
    for e in exprs:
        W = W.tensor(e)
    back = braiding(cat, W, J, inverse=mirror)          # W (x) j -> j (x) W
    front = identity(cat, J.tensor(W))
    for idx, (expr, gamma) in enumerate(parts):
        P = exprs[idx]
        if gamma is not None:
            cross = (gamma.mats if hasattr(gamma, "mats") else gamma)[j]
        else:
            cross = braiding(cat, J, P, inverse=mirror)  # j (x) P -> P (x) j
        prefix = ObjectExpr.unit()
        for e in exprs[:idx]:
            prefix = prefix.tensor(e)
        suffix = ObjectExpr.unit()
        for e in exprs[idx + 1:]:
            suffix = suffix.tensor(e)
        step = tensor(tensor(identity(cat, prefix), cross),
                      identity(cat, suffix))
        front = compose(step, front)
    return compose(front, back)


def omega_loop(cat: CategoryData, strands, attachments=None,
               mirror: bool = False) -> Morphism:
    """Loop colored by the regular color around a bundle of strands.

    ``strands`` is an object or a list of objects; ``attachments``
    optionally maps a strand index to a half-braiding (anything whose
    ``[j]`` lookup gives the crossing j (x) P -> P (x) j), which replaces
    the ambient braiding where the loop crosses that strand on its front
    pass.  Returns

        sum_j dim(j) x (j-colored loop around the bundle)

    as an endomorphism of the concatenation.  ``mirror=True`` flips every
    ambient crossing, which by the sliding property must not change the
    value.
    """
    if isinstance(strands, (ObjectExpr, int)) or (
            isinstance(strands, (tuple, list))
            and all(isinstance(x, int) for x in strands)):
        strand_list = [as_object(strands)]
    else:
        strand_list = [as_object(s) for s in strands]
    attachments = attachments or {}
    parts = [(s, attachments.get(idx)) for idx, s in enumerate(strand_list)]
    W = ObjectExpr.unit()
    for p, _g in parts:
        W = W.tensor(p)
    total = zero_morphism(cat, W, W)
    for j in range(cat.n_labels):
        around = _loop_pass(cat, parts, j, mirror)
        closed = partial_trace_right(cat, around, W, ObjectExpr.simple(j))
        total = total + cat.dim(j) * closed
    return total


def direct_sum(mors) -> Morphism:
    """Block-diagonal direct sum of morphisms, in the given order."""
    cat = mors[0].cat
    src = ObjectExpr.direct_sum([m.source for m in mors])
    tgt = ObjectExpr.direct_sum([m.target for m in mors])
    blocks = {}
    for k in range(cat.n_labels):
        ds = src.dim_sector(cat, k)
        dt = tgt.dim_sector(cat, k)
        if not ds or not dt:
            continue
        mat = np.zeros((dt, ds), dtype=complex)
        ro = co = 0
        for m in mors:
            b = m.block(k)
            mat[ro:ro + b.shape[0], co:co + b.shape[1]] = b
            ro += b.shape[0]
            co += b.shape[1]
        blocks[k] = mat
    return Morphism(cat, src, tgt, blocks)
