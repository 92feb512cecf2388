"""Graphical-calculus engine: composition, tensor, braiding, duality, loops."""

import math

import numpy as np
import pytest

from tcat import ShapeError, CompositionError
from tcat import engine as E
from tcat.engine import ObjectExpr

PHI = (1 + math.sqrt(5)) / 2
RNG = np.random.default_rng(20240811)


def word(*ls):
    return ObjectExpr.word(ls)


# -- objects -------------------------------------------------------------

def test_unit_label_is_stripped_from_words():
    assert word(0) == ObjectExpr.unit()
    assert word(0, 1, 0) == word(1)


def test_sector_dims_count_fusion_trees(cats):
    cat = cats["fibonacci"]
    X = word(1, 1)          # tau tau = 1 + tau
    assert X.dim_sector(cat, 0) == 1
    assert X.dim_sector(cat, 1) == 1
    Y = word(1, 1, 1)       # tau^3 = 1 + 2 tau
    assert Y.dim_sector(cat, 0) == 1
    assert Y.dim_sector(cat, 1) == 2


def test_dual_reverses_and_dualizes(cats):
    cat = cats["vec_z3_modular"]
    assert word(1, 2, 1).dual(cat) == word(2, 1, 2)
    X = word(1, 1)
    assert X.dual(cat).dual(cat) == X


def test_fusion_tree_basis_enumeration(cats):
    cat = cats["fibonacci"]
    basis = E.fusion_tree_basis(cat, (1, 1, 1), 1)   # tau^3 -> tau
    assert basis.root == 1
    assert basis.leaves == (1, 1, 1)
    assert basis.trees == ((0,), (1,))               # lexicographic chains
    assert len(E.fusion_tree_basis(cat, (1, 1, 1), 0)) == 1


# -- composition ---------------------------------------------------------

def test_compose_identity_neutral(cats):
    cat = cats["ising"]
    X = word(1, 1)
    f = E.random_morphism(cat, X, X, RNG)
    assert E.distance(E.compose(E.identity(cat, X), f), f) == 0.0
    assert E.distance(E.compose(f, E.identity(cat, X)), f) == 0.0


def test_compose_matches_per_sector_matrix_oracle(cats):
    # independent oracle: composition of block morphisms is plain per-sector
    # matrix multiplication, checked with numpy directly
    cat = cats["fibonacci"]
    X = word(1, 1)
    f = E.random_morphism(cat, X, X, RNG)
    g = E.random_morphism(cat, X, X, RNG)
    h = E.compose(g, f)
    for k in range(cat.n_labels):
        assert np.allclose(h.block(k), g.block(k) @ f.block(k))


def test_compose_shape_mismatch_raises(cats):
    cat = cats["ising"]
    f = E.identity(cat, word(1))
    g = E.identity(cat, word(2))
    with pytest.raises(CompositionError):
        E.compose(g, f)


def test_braiding_inverse_pair(cats):
    for cat in cats.values():
        n = cat.n_labels
        X, Y = word(n - 1), word(n - 1, n - 1)
        fwd = E.braiding(cat, Y, X)                 # Y X -> X Y
        inv = E.braiding(cat, X, Y, inverse=True)   # X Y -> Y X, = c^{-1}_{Y,X}
        assert E.defect_from_identity(E.compose(inv, fwd)) < 1e-12


# -- tensor --------------------------------------------------------------

def test_tensor_unit_strictification(cats):
    cat = cats["ising"]
    X = word(1, 2)
    f = E.random_morphism(cat, X, X, RNG)
    assert E.distance(E.tensor(E.identity(cat, ObjectExpr.unit()), f), f) < 1e-13
    assert E.distance(E.tensor(f, E.identity(cat, ObjectExpr.unit())), f) < 1e-13


def test_tensor_sector_dims_fibonacci(cats):
    cat = cats["fibonacci"]
    t = E.tensor(E.identity(cat, word(1)), E.identity(cat, word(1)))
    assert t.block(0).shape == (1, 1)
    assert t.block(1).shape == (1, 1)
    assert E.defect_from_identity(t) < 1e-13


def test_interchange_law(cats):
    for name in ("ising", "fibonacci", "vec_z3_modular"):
        cat = cats[name]
        X, Y = word(1, 1), word(cat.n_labels - 1)
        a = E.random_morphism(cat, X, X, RNG)
        b = E.random_morphism(cat, X, X, RNG)
        c = E.random_morphism(cat, Y, Y, RNG)
        d = E.random_morphism(cat, Y, Y, RNG)
        lhs = E.tensor(E.compose(a, b), E.compose(c, d))
        rhs = E.compose(E.tensor(a, c), E.tensor(b, d))
        assert E.distance(lhs, rhs) < 1e-9


def test_tensor_associativity(cats):
    for cat in cats.values():
        n = cat.n_labels
        f = E.random_morphism(cat, word(n - 1), word(n - 1), RNG)
        g = E.random_morphism(cat, word(1), word(1), RNG)
        h = E.random_morphism(cat, word(n - 1), word(n - 1), RNG)
        assert E.distance(E.tensor(E.tensor(f, g), h),
                          E.tensor(f, E.tensor(g, h))) < 1e-12


# -- braiding ------------------------------------------------------------

def test_braiding_with_unit_is_identity(cats):
    for cat in cats.values():
        Y = word(cat.n_labels - 1)
        b = E.braiding(cat, ObjectExpr.unit(), Y)
        assert E.defect_from_identity(b) < 1e-13


def test_semion_braiding_eigenvalue(cats):
    cat = cats["semion"]
    b = E.braiding(cat, word(1), word(1))
    assert b.block(0)[0, 0] == pytest.approx(1j)


def test_transparent_double_braiding_vec_z2_sym(cats):
    cat = cats["vec_z2_sym"]
    X = word(1)
    dbl = E.compose(E.braiding(cat, X, X), E.braiding(cat, X, X))
    assert E.defect_from_identity(dbl) == pytest.approx(0.0, abs=1e-13)


def test_braiding_naturality(cats):
    for name in ("fibonacci", "ising", "semion"):
        cat = cats[name]
        X, Y = word(1, 1), word(cat.n_labels - 1)
        f = E.random_morphism(cat, X, X, RNG)
        g = E.random_morphism(cat, Y, Y, RNG)
        b = E.braiding(cat, X, Y)
        lhs = E.compose(b, E.tensor(f, g))
        rhs = E.compose(E.tensor(g, f), b)
        assert E.distance(lhs, rhs) < 1e-9


def test_hexagon_as_engine_composites(cats):
    for cat in cats.values():
        n = cat.n_labels
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    sa, sb, sc = word(a), word(b), word(c)
                    one = E.braiding(cat, sa, sb.tensor(sc))
                    two = E.compose(
                        E.tensor(E.identity(cat, sb), E.braiding(cat, sa, sc)),
                        E.tensor(E.braiding(cat, sa, sb), E.identity(cat, sc)))
                    assert E.distance(one, two) < 1e-12
                    # the inverse braiding resolves right-to-left
                    onei = E.braiding(cat, sb.tensor(sc), sa, inverse=True)
                    twoi = E.compose(
                        E.tensor(E.braiding(cat, sb, sa, inverse=True),
                                 E.identity(cat, sc)),
                        E.tensor(E.identity(cat, sb),
                                 E.braiding(cat, sc, sa, inverse=True)))
                    assert E.distance(onei, twoi) < 1e-12


# -- duality and traces --------------------------------------------------

def test_zigzag_identities(cats):
    for cat in cats.values():
        n = cat.n_labels
        objs = [word(a) for a in range(n)] + [word(n - 1, n - 1)]
        objs.append(ObjectExpr.direct_sum([word(n - 1), word(n - 1, n - 1)]))
        for X in objs:
            for r in E.zigzag_defects(cat, X):
                assert r < 1e-12


def test_trace_of_unit_and_zero(cats):
    cat = cats["ising"]
    assert E.quantum_trace(cat, E.identity(cat, ObjectExpr.unit())) == \
        pytest.approx(1.0)
    X = word(1, 1)
    assert E.quantum_trace(cat, E.zero_morphism(cat, X, X)) == 0.0


def test_trace_loop_matches_sector_formula(cats):
    # oracle: Tr f = sum_i dim(i) * tr(block_i), vs the explicit cup/cap loop
    cat = cats["ising"]
    X = word(1, 1, 1)
    f = E.random_endomorphism(cat, X, RNG)
    loop = E.quantum_trace(cat, f)
    formula = sum(cat.dim(k) * np.trace(f.block(k))
                  for k in range(cat.n_labels) if X.dim_sector(cat, k))
    assert loop == pytest.approx(complex(formula), abs=1e-10)


def test_trace_cyclicity(cats):
    cat = cats["fibonacci"]
    X = word(1, 1)
    f = E.random_morphism(cat, X, X, RNG)
    g = E.random_morphism(cat, X, X, RNG)
    assert E.quantum_trace(cat, E.compose(f, g)) == pytest.approx(
        E.quantum_trace(cat, E.compose(g, f)), abs=1e-10)


def test_trace_of_non_endomorphism_raises(cats):
    cat = cats["ising"]
    with pytest.raises(ShapeError):
        E.quantum_trace(cat, E.zero_morphism(cat, word(1), word(2)))


def test_loop_dimension_of_tau(cats):
    assert E.quantum_trace(
        cats["fibonacci"],
        E.identity(cats["fibonacci"], word(1))) == pytest.approx(PHI)


def test_coev_on_unit_is_scalar_one(cats):
    for cat in cats.values():
        c = E.cup_cap(cat, ObjectExpr.unit(), "coev")
        assert c.block(0)[0, 0] == pytest.approx(1.0)


def test_unknown_cup_kind_raises(cats):
    with pytest.raises(ShapeError):
        E.cup_cap(cats["ising"], word(1), "cap")


# -- dual bases ----------------------------------------------------------

def test_hom_basis_unit_case(cats):
    cat = cats["ising"]
    pair = E.hom_basis(cat, ObjectExpr.unit(), 0)
    assert len(pair.basis) == 1
    assert E.trace_pairing(cat, pair.dual_basis[0], pair.basis[0]) == \
        pytest.approx(1.0)


def test_hom_basis_fibonacci_count(cats):
    pair = E.hom_basis(cats["fibonacci"], word(1, 1), 1)
    assert len(pair.basis) == 1


def test_hom_basis_pairing_matrix_is_kronecker(cats):
    cat = cats["ising"]
    pair = E.hom_basis(cat, word(1, 1, 1), 1)  # sigma^3 contains sigma twice
    assert len(pair.basis) == 2
    gram = np.array([[E.trace_pairing(cat, pair.dual_basis[a], pair.basis[b])
                      for b in range(2)] for a in range(2)])
    assert np.allclose(gram, np.eye(2), atol=1e-10)
    assert math.isfinite(pair.gram_condition)


def test_hom_basis_rotation_keeps_duality(cats):
    cat = cats["ising"]
    rot = RNG.standard_normal((2, 2)) + 1j * RNG.standard_normal((2, 2))
    pair = E.hom_basis(cat, word(1, 1, 1), 1, rotation=rot)
    gram = np.array([[E.trace_pairing(cat, pair.dual_basis[a], pair.basis[b])
                      for b in range(2)] for a in range(2)])
    assert np.allclose(gram, np.eye(2), atol=1e-9)


def test_identity_resolution_unit(cats):
    cat = cats["semion"]
    triples = E.identity_resolution(cat, ObjectExpr.unit())
    assert len(triples) == 1
    i, lo, hi = triples[0]
    assert i == 0


@pytest.mark.parametrize("name,letters", [
    ("fibonacci", (1, 1)),
    ("ising", (1, 1)),
    ("ising", (1, 2, 1)),
    ("vec_z3_modular", (1, 2)),
])
def test_identity_resolution_reconstructs(cats, name, letters):
    cat = cats[name]
    W = word(*letters)
    acc = E.zero_morphism(cat, W, W)
    for i, lo, hi in E.identity_resolution(cat, W):
        acc = acc + cat.dim(i) * E.compose(hi, lo)
    assert E.defect_from_identity(acc) < 1e-9


# -- loops ---------------------------------------------------------------

def test_omega_loop_around_nothing_is_global_dim(cats):
    for cat in cats.values():
        loop = E.omega_loop(cat, ObjectExpr.unit())
        assert loop.block(0)[0, 0] == pytest.approx(complex(cat.total_dim))


def test_censorship_of_opacity_modular(cats):
    for name in ("semion", "fibonacci", "ising", "vec_z3_modular"):
        cat = cats[name]
        dim_omega = complex(cat.total_dim)
        for i in range(cat.n_labels):
            loop = E.omega_loop(cat, word(i))
            want = dim_omega if i == 0 else 0.0
            assert loop.block(i)[0, 0] == pytest.approx(want, abs=1e-9)


def test_censorship_fails_on_transparent_object(cats):
    cat = cats["vec_z2_sym"]
    loop = E.omega_loop(cat, word(1))
    assert loop.block(1)[0, 0] == pytest.approx(complex(cat.total_dim))


def test_sliding_mirror_invariance(cats):
    for cat in cats.values():
        n = cat.n_labels
        for X in (word(n - 1), word(n - 1, 1)):
            plain = E.omega_loop(cat, X)
            slid = E.omega_loop(cat, X, mirror=True)
            assert E.distance(plain, slid) < 1e-9


def test_sliding_across_morphism(cats):
    for name in ("fibonacci", "ising"):
        cat = cats[name]
        X = word(1, 1)
        f = E.random_endomorphism(cat, X, RNG)
        loop = E.omega_loop(cat, X)
        assert E.distance(E.compose(loop, f), E.compose(f, loop)) < 1e-9


def test_ribbon_regression_identity(cats):
    # eval . c_{X,Y} . c_{X,Y*} . c_{X,Y} . coev = c_{X,Y} on all simple pairs
    for cat in cats.values():
        n = cat.n_labels
        for x in range(n):
            for y in range(n):
                X, Y = word(x), word(y)
                Yd = Y.dual(cat)
                idX, idY, idYd = (E.identity(cat, o) for o in (X, Y, Yd))
                lhs = E.compose_all(
                    E.tensor(idY, E.tensor(E.cup_cap(cat, Y, "eval"), idX)),
                    E.tensor(idY, E.tensor(idYd, E.braiding(cat, X, Y))),
                    E.tensor(idY, E.tensor(E.braiding(cat, X, Yd), idY)),
                    E.tensor(E.braiding(cat, X, Y), E.tensor(idYd, idY)),
                    E.tensor(idX, E.tensor(E.cup_cap(cat, Y, "coev"), idY)))
                assert E.distance(lhs, E.braiding(cat, X, Y)) < 1e-9


# -- determinism and dumps ----------------------------------------------

def test_operations_are_deterministic(cats):
    cat = cats["ising"]
    b1 = E.braiding(cat, word(1, 1), word(1))
    b2 = E.braiding(cat, word(1, 1), word(1))
    for k in range(cat.n_labels):
        assert np.array_equal(b1.block(k), b2.block(k))
    l1 = E.omega_loop(cat, word(1))
    l2 = E.omega_loop(cat, word(1))
    for k in range(cat.n_labels):
        assert np.array_equal(l1.block(k), l2.block(k))


def test_morphism_dump_is_stable(cats):
    cat = cats["fibonacci"]
    d1 = E.braiding(cat, word(1), word(1)).dump()
    d2 = E.braiding(cat, word(1), word(1)).dump()
    assert d1 == d2
    assert "sector" in d1 and "source" in d1
