"""Skeletal data of a premodular category.

A category is presented by a finite set of simple labels (0 is the tensor
unit), a multiplicity-free fusion ring, F-symbols (associator recoupling
coefficients), R-symbols (braiding eigenvalues) and per-label pivotal
coefficients.  The ground field is realized as complex double precision;
every equality check in the library is tolerance-mediated.

Conventions
-----------
* Fusion trees are left-combed; the F-move reads

      |((ab)_e c) -> d>  =  sum_f  F[a,b,c,d][e,f] |(a (bc)_f) -> d>

  so ``fmatrix(a, b, c, d)`` has rows indexed by channels ``e`` of ``a x b``
  and columns by channels ``f`` of ``b x c``.
* ``R[a, b, c]`` is the eigenvalue of the braiding ``a x b -> b x a`` on the
  fusion channel ``c``.
* Duality scalars are fixed by the gauge ``ev(a) = <a* a -> 0|`` and
  ``coev(a) = coev_scalar(a) |0 -> a a*>`` with
  ``coev_scalar(a) = 1 / F[a, a*, a, a][0, 0]``, which makes both zig-zag
  identities hold exactly.  The left quantum dimension is then
  ``dim(a) = t_a * coev_scalar(a)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidCategoryError, SchemaError

__all__ = [
    "Scalar", "SimpleLabel", "ToleranceCfg", "FusionRing", "FSymbolTable",
    "RSymbolTable", "PivotalCoeffs", "CategoryData", "ValidationReport",
    "ResidualEntry", "load_category", "loads_category", "serialize_category",
    "validate", "quantum_dim", "global_dim",
]

#: The ground field, realized as complex doubles.
Scalar = complex

SCHEMA_KEYS = {"name", "labels", "dual", "fusion", "F", "R", "pivotal", "tolerances"}


@dataclass(frozen=True)
class SimpleLabel:
    """A simple object type: contiguous integer id plus a display name."""

    id: int
    name: str


@dataclass(frozen=True)
class ToleranceCfg:
    """Numerical tolerances.

    ``eps_structural`` bounds axiom residuals (pentagon, hexagon, ...);
    ``eps_identity`` bounds composite-vs-identity checks.
    """

    eps_structural: float = 1e-10
    eps_identity: float = 1e-9

    def __post_init__(self):
        if not (0.0 < self.eps_structural <= self.eps_identity < 1.0):
            raise SchemaError(
                "tolerances must satisfy 0 < eps_structural <= eps_identity < 1, "
                f"got ({self.eps_structural}, {self.eps_identity})")


class FusionRing:
    """Multiplicity-free fusion coefficients ``N[i, j, k] in {0, 1}``."""

    def __init__(self, n_labels: int, triples):
        self.n_labels = n_labels
        N = np.zeros((n_labels, n_labels, n_labels), dtype=np.uint8)
        for (i, j, k) in triples:
            N[i, j, k] = 1
        self.N = N
        # fusion outcome lists, precomputed in label order
        self._outcomes = {
            (i, j): tuple(int(k) for k in range(n_labels) if N[i, j, k])
            for i in range(n_labels) for j in range(n_labels)
        }

    def fusion(self, i: int, j: int) -> tuple:
        """All channels k with N(i, j, k) = 1, in ascending label order."""
        return self._outcomes[(i, j)]

    def admissible(self, i: int, j: int, k: int) -> bool:
        return bool(self.N[i, j, k])

    def triples(self):
        n = self.n_labels
        return [(i, j, k) for i in range(n) for j in range(n)
                for k in range(n) if self.N[i, j, k]]


class FSymbolTable:
    """Sparse F-symbol storage with cached per-tree F-matrices and inverses.

    Keys are ``(a, b, c, d, e, f)``; absent admissible entries read as 0.
    """

    def __init__(self, entries: dict):
        self.entries = {tuple(int(x) for x in k): complex(v)
                        for k, v in entries.items()}
        self._mats: dict = {}
        self._invs: dict = {}

    def get(self, a, b, c, d, e, f) -> complex:
        return self.entries.get((a, b, c, d, e, f), 0j)

    def matrix(self, ring: FusionRing, a, b, c, d):
        """F-matrix for the tree (a, b, c) -> d: rows e in a*b, cols f in b*c."""
        key = (a, b, c, d)
        hit = self._mats.get(key)
        if hit is not None:
            return hit
        rows = [e for e in ring.fusion(a, b) if ring.admissible(e, c, d)]
        cols = [f for f in ring.fusion(b, c) if ring.admissible(a, f, d)]
        mat = np.array([[self.get(a, b, c, d, e, f) for f in cols]
                        for e in rows], dtype=complex).reshape(len(rows), len(cols))
        out = (mat, tuple(rows), tuple(cols))
        self._mats[key] = out
        return out

    def inverse(self, ring: FusionRing, a, b, c, d):
        """Inverse F-matrix: rows f in b*c, cols e in a*b."""
        key = (a, b, c, d)
        hit = self._invs.get(key)
        if hit is not None:
            return hit
        mat, rows, cols = self.matrix(ring, a, b, c, d)
        if mat.shape[0] != mat.shape[1]:
            raise InvalidCategoryError(
                f"F-matrix for {(a, b, c, d)} is not square: {mat.shape}")
        inv = np.linalg.inv(mat) if mat.size else mat.reshape(0, 0)
        out = (inv, cols, rows)
        self._invs[key] = out
        return out


class RSymbolTable:
    """Sparse R-symbol storage: ``(a, b, c) -> braiding eigenvalue``."""

    def __init__(self, entries: dict):
        self.entries = {tuple(int(x) for x in k): complex(v)
                        for k, v in entries.items()}

    def get(self, a, b, c) -> complex:
        return self.entries.get((a, b, c), 0j)


@dataclass
class PivotalCoeffs:
    """Per-label pivotal coefficients ``t_i`` and derived twists ``theta_i``.

    The twists are not stored in category files; they are recomputed from the
    R-symbols and duality scalars whenever a category is finalized.
    """

    t: tuple
    twists: tuple = ()


@dataclass(eq=False)
class CategoryData:
    """A complete skeletal premodular category, immutable after construction.

    All derived quantities (quantum dimensions, duality scalars, twists) are
    computed once in ``__post_init__``; operations elsewhere in the package
    treat instances as read-only and cache basis data in ``_cache``.
    """

    name: str
    labels: tuple
    dual: tuple
    ring: FusionRing
    f: FSymbolTable
    r: RSymbolTable
    piv: PivotalCoeffs
    tol: ToleranceCfg = field(default_factory=ToleranceCfg)
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        n = self.ring.n_labels
        if len(self.labels) != n or len(self.dual) != n:
            raise SchemaError("labels/dual length does not match fusion ring size")
        # duality gauge: ev(a) = <a* a|, coev(a) = (1/F[a,a*,a,a]_{00}) |a a*>
        coev = []
        for a in range(n):
            fa = self.f.get(a, self.dual[a], a, a, 0, 0)
            if abs(fa) == 0.0:
                raise InvalidCategoryError(
                    f"F[{a},{self.dual[a]},{a},{a}; 0,0] vanishes; "
                    "cannot normalize duality morphisms")
            coev.append(1.0 / fa)
        self._coev_scalar = tuple(coev)
        self._ev_scalar = tuple(1.0 + 0j for _ in range(n))
        dims = tuple(self.piv.t[a] * self._coev_scalar[a] for a in range(n))
        self.dims = dims
        self.total_dim = sum(d * d for d in dims)
        if abs(self.total_dim) < self.tol.eps_identity:
            raise InvalidCategoryError(
                f"global dimension of '{self.name}' vanishes within tolerance")
        twists = []
        for a in range(n):
            th = sum(self.dims[k] * self.r.get(a, a, k)
                     for k in self.ring.fusion(a, a)) / dims[a]
            twists.append(th)
        # never mutate the caller's coefficient object: twists derived here
        self.piv = PivotalCoeffs(t=self.piv.t, twists=tuple(twists))

    # -- small accessors used throughout the package --------------------

    @property
    def n_labels(self) -> int:
        return self.ring.n_labels

    def label_name(self, i: int) -> str:
        return self.labels[i].name

    def dim(self, i: int) -> complex:
        return self.dims[i]

    def coev_scalar(self, a: int) -> complex:
        """Coefficient of coev(a): 1 -> a (x) a* on the canonical tree."""
        return self._coev_scalar[a]

    def ev_scalar(self, a: int) -> complex:
        """Coefficient of ev(a): a* (x) a -> 1 on the canonical tree."""
        return self._ev_scalar[a]

    def coev_right_scalar(self, a: int) -> complex:
        """Coefficient of coev'(a): 1 -> a* (x) a."""
        return self._coev_scalar[self.dual[a]] / self.piv.t[a]

    def ev_right_scalar(self, a: int) -> complex:
        """Coefficient of ev'(a): a (x) a* -> 1."""
        return self.piv.t[a] * self._ev_scalar[self.dual[a]]

    def __repr__(self):
        return f"CategoryData(name={self.name!r}, n_labels={self.n_labels})"


# ----------------------------------------------------------------------
# validation
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ResidualEntry:
    name: str
    value: float
    threshold: float

    @property
    def ok(self) -> bool:
        return self.value < self.threshold


@dataclass
class ValidationReport:
    """Named residuals of the category axioms plus an overall verdict."""

    category: str
    entries: list

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def residual(self, name: str) -> float:
        for e in self.entries:
            if e.name == name:
                return e.value
        raise KeyError(name)

    def as_dict(self) -> dict:
        return {
            "category": self.category,
            "pass": self.ok,
            "residuals": {e.name: {"value": e.value, "threshold": e.threshold,
                                   "pass": e.ok}
                          for e in self.entries},
        }


def _pentagon_residual(cat: CategoryData) -> float:
    """Max deviation of the F-symbols from the pentagon equation.

    For every admissible labelling the two recoupling paths
    ((ab)c)d -> a(b(cd)) must agree:

        F[f,c,d,r][g,l] F[a,b,l,r][f,k]
            = sum_h F[a,b,c,g][f,h] F[a,h,d,r][g,k] F[b,c,d,k][h,l]
    """
    ring, F = cat.ring, cat.f
    n = ring.n_labels
    worst = 0.0
    rng = range(n)
    for a in rng:
        for b in rng:
            for c in rng:
                for d in rng:
                    for r in rng:
                        for fch in ring.fusion(a, b):
                            for g in ring.fusion(fch, c):
                                if not ring.admissible(g, d, r):
                                    continue
                                for l in ring.fusion(c, d):
                                    if not ring.admissible(fch, l, r):
                                        continue
                                    for k in ring.fusion(b, l):
                                        if not ring.admissible(a, k, r):
                                            continue
                                        lhs = (F.get(fch, c, d, r, g, l)
                                               * F.get(a, b, l, r, fch, k))
                                        rhs = sum(
                                            F.get(a, b, c, g, fch, h)
                                            * F.get(a, h, d, r, g, k)
                                            * F.get(b, c, d, k, h, l)
                                            for h in ring.fusion(b, c)
                                            if ring.admissible(a, h, g)
                                            and ring.admissible(h, d, k))
                                        worst = max(worst, abs(lhs - rhs))
    return worst


def _hexagon_residual(cat: CategoryData, inverse: bool) -> float:
    """Max deviation from the hexagon for the braiding (or its inverse).

    Braiding ``a`` past ``b (x) c`` in one step must match braiding past
    ``b`` then ``c`` with the associator in between:

        R[a,f->d] F[a,b,c,d][e,f]
            = R[a,b->e] sum_j F[b,a,c,d][e,j] R[a,c->j] Finv[b,c,a,d][j,f]

    with every R replaced by (R reversed)^-1 for the inverse braiding.
    """
    ring, F, R = cat.ring, cat.f, cat.r
    n = ring.n_labels

    def rsym(x, y, ch):
        if inverse:
            v = R.get(y, x, ch)
            return (1.0 / v) if v else 0j
        return R.get(x, y, ch)

    worst = 0.0
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    rows = [e for e in ring.fusion(a, b) if ring.admissible(e, c, d)]
                    cols = [f for f in ring.fusion(b, c) if ring.admissible(a, f, d)]
                    if not rows or not cols:
                        continue
                    finv, fi_rows, fi_cols = cat.f.inverse(ring, b, c, a, d)
                    for e in rows:
                        for f in cols:
                            lhs = rsym(a, f, d) * F.get(a, b, c, d, e, f)
                            rhs = 0j
                            for j in ring.fusion(a, c):
                                if not ring.admissible(b, j, d):
                                    continue
                                # Finv rows are channels of c*a ... use stored index lists
                                if j not in fi_rows or f not in fi_cols:
                                    continue
                                rhs += (F.get(b, a, c, d, e, j) * rsym(a, c, j)
                                        * finv[fi_rows.index(j), fi_cols.index(f)])
                            rhs *= rsym(a, b, e)
                            worst = max(worst, abs(lhs - rhs))
    return worst


def _unit_duality_residual(cat: CategoryData) -> float:
    """Unit axioms, duality axioms, and the triviality of unit F/R entries."""
    ring = cat.ring
    n = ring.n_labels
    worst = 0.0
    for i in range(n):
        for k in range(n):
            worst = max(worst, abs(float(ring.N[i, 0, k]) - (1.0 if i == k else 0.0)))
            worst = max(worst, abs(float(ring.N[0, i, k]) - (1.0 if i == k else 0.0)))
        for j in range(n):
            want = 1.0 if j == cat.dual[i] else 0.0
            worst = max(worst, abs(float(ring.N[i, j, 0]) - want))
    # ring associativity
    N = ring.N.astype(float)
    lhs = np.einsum("ijm,mkl->ijkl", N, N)
    rhs = np.einsum("jkm,iml->ijkl", N, N)
    worst = max(worst, float(np.abs(lhs - rhs).max()))
    # unit coherence: F-symbols with a unit leg and R-symbols with a unit
    # factor must be exactly 1 on admissible entries
    for (a, b, c, d, e, f), v in cat.f.entries.items():
        if 0 in (a, b, c):
            worst = max(worst, abs(v - 1.0))
    for (a, b, c), v in cat.r.entries.items():
        if a == 0 or b == 0:
            worst = max(worst, abs(v - 1.0))
    worst = max(worst, abs(cat.piv.t[0] - 1.0))
    return worst


def _f_condition_number(cat: CategoryData) -> float:
    ring = cat.ring
    n = ring.n_labels
    worst = 1.0
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    mat, rows, cols = cat.f.matrix(ring, a, b, c, d)
                    if mat.size == 0:
                        continue
                    if mat.shape[0] != mat.shape[1]:
                        return math.inf
                    worst = max(worst, float(np.linalg.cond(mat)))
    return worst


def _sphericality_residual(cat: CategoryData) -> float:
    """Left vs right quantum traces of seeded random sector endomorphisms."""
    from . import engine  # deferred: engine builds on this module

    rng = np.random.default_rng(20240801)
    worst = 0.0
    n = cat.n_labels
    words = [(a,) for a in range(1, n)] + \
            [(a, b) for a in range(1, n) for b in range(1, n)]
    words = words[:6] or [()]
    for w in words:
        X = engine.ObjectExpr.word(w)
        f = engine.random_endomorphism(cat, X, rng)
        left = engine.quantum_trace(cat, f, side="left")
        right = engine.quantum_trace(cat, f, side="right")
        worst = max(worst, abs(left - right))
    return worst


def _zigzag_residual(cat: CategoryData) -> float:
    from . import engine

    worst = 0.0
    for a in range(cat.n_labels):
        X = engine.ObjectExpr.simple(a)
        for m in engine.zigzag_defects(cat, X):
            worst = max(worst, m)
    return worst


def validate(cat: CategoryData) -> ValidationReport:
    """Check the category axioms; failures are report entries, never raises."""
    eps = cat.tol.eps_structural
    entries = [
        ResidualEntry("pentagon", _pentagon_residual(cat), eps),
        ResidualEntry("hexagon_forward", _hexagon_residual(cat, inverse=False), eps),
        ResidualEntry("hexagon_reverse", _hexagon_residual(cat, inverse=True), eps),
        ResidualEntry("unit_duality", _unit_duality_residual(cat), eps),
        ResidualEntry("sphericality", _sphericality_residual(cat), eps),
        ResidualEntry("zigzag", _zigzag_residual(cat), eps),
        ResidualEntry("f_condition", _f_condition_number(cat), 1e12),
        ResidualEntry("min_quantum_dim_inverse",
                      1.0 / min(abs(d) for d in cat.dims), 1.0 / cat.tol.eps_identity),
    ]
    return ValidationReport(category=cat.name, entries=entries)


# ----------------------------------------------------------------------
# quantum dimensions
# ----------------------------------------------------------------------

def quantum_dim(cat: CategoryData, X) -> Scalar:
    """Quantum dimension of an object: trace of its identity via eval o coev.

    Additive over direct sums and multiplicative over tensor words by
    construction of the duality morphisms.
    """
    from . import engine

    X = engine.as_object(X)
    return engine.quantum_trace(cat, engine.identity(cat, X))


def global_dim(cat: CategoryData) -> Scalar:
    """dim(Omega) = sum of squared quantum dimensions of the simples."""
    total = cat.total_dim
    if abs(total) < cat.tol.eps_identity:
        raise InvalidCategoryError(
            f"global dimension of '{cat.name}' vanishes within tolerance")
    return total


# ----------------------------------------------------------------------
# file schema
# ----------------------------------------------------------------------

def _require(doc: dict, key: str):
    if key not in doc:
        raise SchemaError(f"category document is missing required key '{key}'")
    return doc[key]


def loads_category(text: str) -> CategoryData:
    """Parse a category document from its serialized text form."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"category document is not valid JSON: {exc}") from exc
    return category_from_dict(doc)


def load_category(source) -> CategoryData:
    """Load a category from a path or file object; no axiom validation is run."""
    if hasattr(source, "read"):
        return loads_category(source.read())
    with open(source, "r", encoding="utf-8") as fh:
        return loads_category(fh.read())


def category_from_dict(doc: dict) -> CategoryData:
    if not isinstance(doc, dict):
        raise SchemaError("category document must be a mapping")
    unknown = set(doc) - SCHEMA_KEYS
    if unknown:
        raise SchemaError(f"unknown keys in category document: {sorted(unknown)}")
    name = _require(doc, "name")
    label_names = _require(doc, "labels")
    if not label_names:
        raise SchemaError("key 'labels' must list at least the tensor unit")
    n = len(label_names)
    labels = tuple(SimpleLabel(i, str(nm)) for i, nm in enumerate(label_names))

    dual = _require(doc, "dual")
    if len(dual) != n:
        raise SchemaError(f"key 'dual' must have length {n}, got {len(dual)}")
    dual = tuple(int(d) for d in dual)
    if any(not 0 <= d < n for d in dual):
        raise SchemaError("key 'dual' contains an out-of-range label id")
    if dual[0] != 0:
        raise SchemaError("unit must be self-dual (dual[0] must be 0)")
    for i, d in enumerate(dual):
        if dual[d] != i:
            raise SchemaError(f"key 'dual' is not an involution at label {i}")

    triples = []
    for rec in _require(doc, "fusion"):
        if len(rec) != 3:
            raise SchemaError(f"key 'fusion' entries must be [i,j,k] triples, got {rec}")
        i, j, k = (int(x) for x in rec)
        if not all(0 <= x < n for x in (i, j, k)):
            raise SchemaError(f"key 'fusion' contains out-of-range ids in {rec}")
        triples.append((i, j, k))
    ring = FusionRing(n, triples)

    for i in range(n):
        for k in range(n):
            if bool(ring.N[i, 0, k]) != (i == k) or bool(ring.N[0, i, k]) != (i == k):
                raise SchemaError("key 'fusion' violates the unit axiom "
                                  f"at labels ({i},{k})")
        for j in range(n):
            if bool(ring.N[i, j, 0]) != (j == dual[i]):
                raise SchemaError("key 'fusion' is inconsistent with key 'dual' "
                                  f"at labels ({i},{j})")

    f_entries = {}
    for rec in _require(doc, "F"):
        try:
            key = (int(rec["a"]), int(rec["b"]), int(rec["c"]),
                   int(rec["d"]), int(rec["e"]), int(rec["f"]))
            val = complex(float(rec["re"]), float(rec.get("im", 0.0)))
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"malformed record in key 'F': {rec}") from exc
        f_entries[key] = val
    f_table = FSymbolTable(f_entries)

    r_entries = {}
    for rec in _require(doc, "R"):
        try:
            key = (int(rec["a"]), int(rec["b"]), int(rec["c"]))
            val = complex(float(rec["re"]), float(rec.get("im", 0.0)))
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"malformed record in key 'R': {rec}") from exc
        r_entries[key] = val
    r_table = RSymbolTable(r_entries)

    # identity-forced entries must be explicit: unit-leg F and R symbols
    for a in range(n):
        for b in range(n):
            for c in ring.fusion(a, b):
                for key in [(0, a, b, c, a, c), (a, 0, b, c, a, b),
                            (a, b, 0, c, c, b)]:
                    if key not in f_table.entries:
                        aa, bb, cc, dd, ee, ff = key
                        raise SchemaError(
                            "key 'F' is missing the identity-forced entry "
                            f"{{a:{aa},b:{bb},c:{cc},d:{dd},e:{ee},f:{ff}}}")
        if (0, a, a) not in r_table.entries:
            raise SchemaError("key 'R' is missing the identity-forced entry "
                              f"{{a:0,b:{a},c:{a}}}")
        if (a, 0, a) not in r_table.entries:
            raise SchemaError("key 'R' is missing the identity-forced entry "
                              f"{{a:{a},b:0,c:{a}}}")

    piv_list = [None] * n
    for rec in _require(doc, "pivotal"):
        try:
            piv_list[int(rec["i"])] = complex(float(rec["re"]), float(rec.get("im", 0.0)))
        except (KeyError, TypeError, IndexError) as exc:
            raise SchemaError(f"malformed record in key 'pivotal': {rec}") from exc
    if any(v is None for v in piv_list):
        missing = [i for i, v in enumerate(piv_list) if v is None]
        raise SchemaError(f"key 'pivotal' is missing labels {missing}")
    piv = PivotalCoeffs(t=tuple(piv_list))

    tol_doc = doc.get("tolerances", {})
    tol = ToleranceCfg(
        eps_structural=float(tol_doc.get("structural", 1e-10)),
        eps_identity=float(tol_doc.get("identity", 1e-9)),
    )
    return CategoryData(name=str(name), labels=labels, dual=dual, ring=ring,
                        f=f_table, r=r_table, piv=piv, tol=tol)


def category_to_dict(cat: CategoryData) -> dict:
    f_records = [
        {"a": a, "b": b, "c": c, "d": d, "e": e, "f": f,
         "re": v.real, "im": v.imag}
        for (a, b, c, d, e, f), v in sorted(cat.f.entries.items())
    ]
    r_records = [
        {"a": a, "b": b, "c": c, "re": v.real, "im": v.imag}
        for (a, b, c), v in sorted(cat.r.entries.items())
    ]
    return {
        "name": cat.name,
        "labels": [l.name for l in cat.labels],
        "dual": list(cat.dual),
        "fusion": [list(t) for t in cat.ring.triples()],
        "F": f_records,
        "R": r_records,
        "pivotal": [{"i": i, "re": t.real, "im": t.imag}
                    for i, t in enumerate(cat.piv.t)],
        "tolerances": {"structural": cat.tol.eps_structural,
                       "identity": cat.tol.eps_identity},
    }


def serialize_category(cat: CategoryData) -> str:
    """Serialize to the category file schema; floats round-trip exactly."""
    return json.dumps(category_to_dict(cat), indent=2, sort_keys=True)
