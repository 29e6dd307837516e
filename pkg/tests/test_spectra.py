import random

import numpy as np
import pytest

from cayleyspec import (
    ColorFunction,
    CyclicGroup,
    DihedralGroup,
    HypothesesViolated,
    InvalidAction,
    LayerNotInvariant,
    MetacyclicGroup,
    NotClassFunction,
    PermutationGroup,
    SemidirectProductGroup,
    adjacency_matrix,
    block_diagonalize,
    builtin_irreps,
    certify,
    check_split_hypotheses,
    cluster_eigenvalues,
    color_from_set,
    compare_spectra,
    irreps_cyclic,
    nonnormal_family,
    spectrum_metacyclic,
    spectrum_normal,
    spectrum_split,
)


def multiset(spectrum, digits=9):
    return sorted(
        (round(v.real, digits), round(v.imag, digits), c)
        for v, c in spectrum.multiset()
    )


def s4_distinct_class_color():
    group = PermutationGroup(
        [(1, 0, 2, 3), (1, 2, 3, 0)],
        normal_generators=[(1, 2, 0, 3), (1, 0, 3, 2)],
        complement_generators=[(1, 0, 2, 3)],
    )
    values = {}
    for weight, cls in enumerate(group.conjugacy_classes(), start=1):
        for g in cls.members:
            values[g] = weight
    return group, ColorFunction(group, values)


def order_42_fixture():
    d3 = DihedralGroup(3)
    group = SemidirectProductGroup(7, d3, [6, 1])
    subset = [(0, b) for b in range(1, 7)]
    subset += [(d3.index(h), 0) for h in d3.elements() if h[0] == 1]
    return group, color_from_set(group, subset), d3


def test_cluster_eigenvalues():
    values = [2, 1 + 1e-12, 1, 0, 1e-13]
    clusters = cluster_eigenvalues(values, tol=1e-9)
    assert [(round(v.real, 6), c) for v, c in clusters] == [(0, 2), (1, 2), (2, 1)]
    assert cluster_eigenvalues([], tol=1e-9) == []


def test_spectrum_normal_complete_graph():
    for n in (3, 5, 8):
        g = CyclicGroup(n)
        color = color_from_set(g, list(range(1, n)))
        spec = spectrum_normal(g, color, builtin_irreps(g))
        assert multiset(spec) == sorted([(n - 1, 0, 1), (-1, 0, n - 1)])


def test_spectrum_normal_c4_pair():
    g = CyclicGroup(4)
    spec = spectrum_normal(g, color_from_set(g, [1, 3]), builtin_irreps(g))
    # per label: 2cos(2 pi v/4)
    assert [round(l.eigenvalue.real, 12) for l in spec.lines] == [2, 0, -2, 0]


def test_spectrum_normal_full_support():
    g = DihedralGroup(4)
    color = ColorFunction(g, {e: 1 for e in g.elements()})
    spec = spectrum_normal(g, color, builtin_irreps(g))
    values = {line.labels[0]: line.eigenvalue for line in spec.lines}
    assert abs(values["A1"] - 8) < 1e-12
    for label, v in values.items():
        if label != "A1":
            assert abs(v) < 1e-12


def test_spectrum_normal_rejects_non_class_function():
    group, conn = nonnormal_family(7, 3, 2)
    color = color_from_set(group, conn.elements)
    with pytest.raises(NotClassFunction) as exc:
        spectrum_normal(group, color, builtin_irreps(group))
    g, x, conj, lhs, rhs = exc.value.witness
    assert group.conjugate(g, x) == conj
    assert color(g) == lhs and color(conj) == rhs and lhs != rhs


def test_spectrum_normal_eigenvectors_certify():
    group = MetacyclicGroup(7, 3, 2)
    union = [e for cls in group.conjugacy_classes() if cls.size == 3
             for e in cls.members]
    color = color_from_set(group, union)
    spec = spectrum_normal(group, color, builtin_irreps(group))
    assert spec.total_multiplicity == 21
    assert [l.multiplicity for l in spec.lines] == [1, 1, 1, 9, 9]
    adj = adjacency_matrix(group, color)
    assert certify(adj, spec, color, tol=1e-9).passed


def test_hypotheses_pass_on_family():
    group, conn = nonnormal_family(7, 3, 2)
    report = check_split_hypotheses(group, color_from_set(group, conn.elements))
    assert report.passed and report.witness_a is None and report.witness_b is None


def test_hypotheses_pass_on_abelian_product():
    rng = random.Random(3)
    group = SemidirectProductGroup(4, CyclicGroup(2), [1])
    values = {g: complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
              for g in group.elements()}
    report = check_split_hypotheses(group, ColorFunction(group, values))
    assert report.passed


def test_hypotheses_fail_on_s4_class_function():
    group, color = s4_distinct_class_color()
    assert color.is_class_function
    report = check_split_hypotheses(group, color)
    assert not report.condition_a
    assert not report.passed
    w = report.witness_a
    h, g, k = w.triple
    # direct re-evaluation of the recorded violation
    lhs = group.mul(h, group.conjugate(k, g))
    rhs = group.mul(h, k)
    assert lhs == w.lhs_element and rhs == w.rhs_element
    assert color(lhs) == w.lhs_value and color(rhs) == w.rhs_value
    assert w.lhs_value != w.rhs_value


def test_split_raises_and_force_overrides():
    d4 = DihedralGroup(4)
    color = color_from_set(d4, [(0, 1)])  # one rotation, orbit {k, k^3}
    h_irr = builtin_irreps(CyclicGroup(2))
    k_irr = irreps_cyclic(4)
    with pytest.raises(HypothesesViolated) as exc:
        spectrum_split(d4, color, h_irr, k_irr)
    assert exc.value.report.witness_a is not None
    forced = spectrum_split(d4, color, h_irr, k_irr, force=True)
    assert not forced.theorem_verified
    # residual certification decides: the formula is wrong here
    adj = adjacency_matrix(d4, color)
    assert not certify(adj, forced, color, tol=1e-9).passed


def test_split_prism_labels():
    group = MetacyclicGroup(3, 2, 2)
    color = color_from_set(group, [(0, 1), (0, 2), (1, 0)])
    spec = spectrum_split(group, color, builtin_irreps(CyclicGroup(2)),
                          irreps_cyclic(3))
    by_label = {(l.u, l.v): round(l.eigenvalue.real, 10) for l in spec.lines}
    assert by_label == {(0, 0): 3, (0, 1): 0, (0, 2): 0,
                        (1, 0): 1, (1, 1): -2, (1, 2): -2}
    assert multiset(spec) == sorted(
        [(3, 0, 1), (1, 0, 1), (0, 0, 2), (-2, 0, 2)])
    assert certify(adjacency_matrix(group, color), spec, color, 1e-9).passed


def test_split_order_42_lines():
    group, color, d3 = order_42_fixture()
    spec = spectrum_split(group, color, builtin_irreps(d3), irreps_cyclic(7))
    expect = {}
    for v in range(7):
        expect[("A1", f"chi_{v}")] = (9 if v == 0 else 2, 1)
        expect[("A2", f"chi_{v}")] = (3 if v == 0 else -4, 1)
        expect[("E1", f"chi_{v}")] = (6 if v == 0 else -1, 4)
    got = {l.labels: (round(l.eigenvalue.real, 9), l.multiplicity)
           for l in spec.lines}
    assert got == expect
    assert spec.total_multiplicity == 42

    line = next(l for l in spec.lines if l.labels == ("A2", "chi_1"))
    assert np.allclose(line.h_class_terms, [1, 2, -3])
    assert np.allclose(line.k_class_terms, [-1, 0, 1])

    adj = adjacency_matrix(group, color)
    report = certify(adj, spec, color, tol=1e-9)
    assert report.passed
    assert report.max_residual <= 1e-9 * 9


def test_split_representative_independence():
    group, color, d3 = order_42_fixture()
    spec = spectrum_split(group, color, builtin_irreps(d3), irreps_cyclic(7),
                          check_representatives=True)
    assert spec.total_multiplicity == 42


def test_split_zero_color():
    group = MetacyclicGroup(3, 2, 2)
    spec = spectrum_split(group, ColorFunction(group, {}),
                          builtin_irreps(CyclicGroup(2)), irreps_cyclic(3))
    assert all(line.eigenvalue == 0 for line in spec.lines)


def test_metacyclic_prism():
    spec = spectrum_metacyclic(3, 2, 2, [[1, 2], [0]])
    assert multiset(spec) == sorted([(3, 0, 1), (1, 0, 1), (0, 0, 2), (-2, 0, 2)])
    group = MetacyclicGroup(3, 2, 2)
    color = color_from_set(group, [(0, 1), (0, 2), (1, 0)])
    assert certify(adjacency_matrix(group, color), spec, color, 1e-9).passed


def test_metacyclic_six_cycle():
    spec = spectrum_metacyclic(6, 1, 1, [[1, 5]])
    assert multiset(spec) == sorted(
        [(2, 0, 1), (1, 0, 2), (-1, 0, 2), (-2, 0, 1)])


def test_metacyclic_family_7_3_2():
    spec = spectrum_metacyclic(7, 3, 2, [[1, 2, 3, 4, 5, 6], [0], [0]])
    assert multiset(spec) == sorted(
        [(8, 0, 1), (5, 0, 2), (1, 0, 6), (-2, 0, 12)])
    values = spec.eigenvalues_expanded()
    assert abs(sum(values)) < 1e-9
    assert abs(sum(v * v for v in values) - 168) < 1e-9


def test_metacyclic_layer_validation():
    with pytest.raises(LayerNotInvariant) as exc:
        spectrum_metacyclic(7, 3, 2, [[1], [0], [0]])
    assert exc.value.layer_index == 0 and exc.value.exponent == 1
    with pytest.raises(InvalidAction):
        spectrum_metacyclic(7, 3, 2, [[1, 2, 4]])


def test_split_equals_metacyclic_per_label():
    group, conn = nonnormal_family(7, 3, 2)
    color = color_from_set(group, conn.elements)
    a = spectrum_metacyclic(7, 3, 2, [[1, 2, 3, 4, 5, 6], [0], [0]])
    b = spectrum_split(group, color, builtin_irreps(CyclicGroup(3)),
                       irreps_cyclic(7))
    assert len(a.lines) == len(b.lines)
    for la, lb in zip(a.lines, b.lines):
        assert (la.u, la.v) == (lb.u, lb.v)
        assert abs(la.eigenvalue - lb.eigenvalue) <= 1e-10
    same, witness = compare_spectra(a, b, tol=1e-10)
    assert same and witness is None


def test_normal_agrees_with_split_on_class_functions():
    group = MetacyclicGroup(7, 3, 2)
    union = [e for cls in group.conjugacy_classes() if cls.size in (3, 7)
             for e in cls.members]
    color = color_from_set(group, union)
    a = spectrum_normal(group, color, builtin_irreps(group))
    b = spectrum_split(group, color, builtin_irreps(CyclicGroup(3)),
                       irreps_cyclic(7))
    same, witness = compare_spectra(a, b, tol=1e-9)
    assert same, witness


def test_block_diagonalize_prism():
    group = MetacyclicGroup(3, 2, 2)
    color = color_from_set(group, [(0, 1), (0, 2), (1, 0)])
    decomposition = block_diagonalize(group, color, builtin_irreps(group))
    assert decomposition.reconstruction_deviation <= 1e-11
    eigs = []
    for rho, values in zip(builtin_irreps(group),
                           decomposition.block_eigenvalues):
        assert values is not None  # degrees 1, 1, 2
        eigs.extend([v for v in values] * rho.degree)
    got = sorted(round(v.real, 9) for v in eigs)
    assert got == [-2, -2, 0, 0, 1, 3]


def test_block_diagonalize_homothety():
    group = DihedralGroup(4)
    union = [e for cls in group.conjugacy_classes() if cls.size == 2
             for e in cls.members]
    color = color_from_set(group, union)
    assert color.is_class_function
    decomposition = block_diagonalize(group, color, builtin_irreps(group))
    normal = spectrum_normal(group, color, builtin_irreps(group))
    for line, block in zip(normal.lines, decomposition.blocks):
        lam = line.eigenvalue
        assert np.max(np.abs(block.matrix - lam * np.eye(block.degree))) <= 1e-9


def test_block_diagonalize_identity_color():
    group = CyclicGroup(5)
    color = color_from_set(group, [0])
    decomposition = block_diagonalize(group, color, builtin_irreps(group))
    for block in decomposition.blocks:
        assert np.array_equal(block.matrix, np.eye(block.degree))
    assert decomposition.reconstruction_deviation <= 1e-12


def test_degree_three_blocks_not_extracted():
    group = MetacyclicGroup(7, 3, 2)
    color = color_from_set(group, [(0, 1), (0, 2), (0, 4)])
    decomposition = block_diagonalize(group, color, builtin_irreps(group))
    degrees = [rho.degree for rho in builtin_irreps(group)]
    for degree, values in zip(degrees, decomposition.block_eigenvalues):
        assert (values is None) == (degree >= 3)


def test_eigenvector_unit_norms():
    group, color, d3 = order_42_fixture()
    spec = spectrum_split(group, color, builtin_irreps(d3), irreps_cyclic(7))
    for line in spec.lines:
        assert line.eigenvectors.shape[0] == line.multiplicity
        norms = np.linalg.norm(line.eigenvectors, axis=1)
        assert np.max(np.abs(norms - 1)) <= 1e-12
