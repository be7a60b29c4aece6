"""Group arithmetic, span/coset structure, and the element-index bijection."""

import pytest
from hypothesis import given, strategies as st

from rainbowcat import group
from rainbowcat.errors import (
    InvalidElementError,
    InvalidGeneratorError,
    NotASubgroupError,
)
from rainbowcat.group import GroupParams

PARAMS = [GroupParams(2, 2), GroupParams(2, 3), GroupParams(3, 2), GroupParams(5, 1)]


def params_and_elem(n=1):
    return st.sampled_from(PARAMS).flatmap(
        lambda prm: st.tuples(
            st.just(prm), *[st.sampled_from(group.elements(prm)) for _ in range(n)]
        )
    )


class TestGroupParams:
    def test_rejects_composite_p(self):
        with pytest.raises(ValueError):
            GroupParams(4, 1)
        with pytest.raises(ValueError):
            GroupParams(1, 2)

    def test_rejects_nonpositive_k(self):
        with pytest.raises(ValueError):
            GroupParams(3, 0)

    def test_order_zero(self):
        prm = GroupParams(3, 2)
        assert prm.order == 9
        assert prm.zero == (0, 0)

    @given(params_and_elem())
    def test_index_element_roundtrip(self, t):
        prm, e = t
        assert prm.element(prm.index(e)) == e

    def test_index_is_lex_order(self):
        prm = GroupParams(3, 2)
        elems = group.elements(prm)
        assert [prm.index(e) for e in elems] == list(range(9))
        assert elems == tuple(sorted(elems))


class TestArithmetic:
    def test_add_examples(self):
        assert group.add(GroupParams(3, 2), (1, 2), (2, 2)) == (0, 1)
        assert group.add(GroupParams(5, 1), (4,), (1,)) == (0,)
        assert group.add(GroupParams(2, 3), (1, 0, 1), (1, 0, 1)) == (0, 0, 0)

    def test_add_rejects_bad_element(self):
        with pytest.raises(InvalidElementError):
            group.add(GroupParams(3, 2), (1, 2), (1, 2, 0))
        with pytest.raises(InvalidElementError):
            group.add(GroupParams(3, 2), (1, 3), (0, 0))

    def test_scale_examples(self):
        assert group.scale(GroupParams(5, 1), 2, (3,)) == (1,)
        assert group.scale(GroupParams(3, 2), 0, (1, 2)) == (0, 0)
        assert group.scale(GroupParams(7, 1), 6, (1,)) == (6,)

    @given(params_and_elem(2))
    def test_add_commutative(self, t):
        prm, e1, e2 = t
        assert group.add(prm, e1, e2) == group.add(prm, e2, e1)

    @given(params_and_elem(3))
    def test_add_associative(self, t):
        prm, e1, e2, e3 = t
        lhs = group.add(prm, group.add(prm, e1, e2), e3)
        assert lhs == group.add(prm, e1, group.add(prm, e2, e3))

    @given(params_and_elem())
    def test_identity_and_inverse(self, t):
        prm, e = t
        assert group.add(prm, e, prm.zero) == e
        assert group.add(prm, e, group.neg(prm, e)) == prm.zero
        assert group.sub(prm, e, e) == prm.zero

    @given(params_and_elem(), st.integers(-10, 10), st.integers(-10, 10))
    def test_scale_additive_in_scalar(self, t, c1, c2):
        prm, e = t
        assert group.scale(prm, c1 + c2, e) == group.add(
            prm, group.scale(prm, c1, e), group.scale(prm, c2, e)
        )


class TestSpan:
    def test_span_examples(self):
        prm = GroupParams(3, 2)
        assert group.span(prm, [(0, 1)]) == [(0, 0), (0, 1), (0, 2)]
        assert len(group.span(prm, [(0, 1), (1, 0)])) == 9
        prm2 = GroupParams(2, 3)
        assert group.span(prm2, [(1, 1, 0)]) == [(0, 0, 0), (1, 1, 0)]

    @given(params_and_elem())
    def test_span_of_nonzero_has_order_p(self, t):
        prm, e = t
        if e != prm.zero:
            assert len(group.span(prm, [e])) == prm.p

    def test_in_span(self):
        prm = GroupParams(3, 2)
        assert group.in_span(prm, (0, 2), (0, 1))
        assert not group.in_span(prm, (1, 0), (0, 1))
        assert group.in_span(GroupParams(5, 2), (3, 0), (1, 0))

    def test_in_span_rejects_zero_generator(self):
        with pytest.raises(InvalidGeneratorError):
            group.in_span(GroupParams(3, 2), (1, 0), (0, 0))

    def test_subgroup_basis_regenerates(self):
        prm = GroupParams(3, 2)
        sub = group.span(prm, [(1, 2)])
        basis = group.subgroup_basis(prm, sub)
        assert sorted(group.span(prm, basis)) == sorted(sub)


class TestCosets:
    def test_coset_examples(self):
        prm = GroupParams(3, 2)
        comps = group.cosets(prm, group.span(prm, [(0, 1)]))
        assert len(comps) == 3
        assert all(len(c) == 3 for c in comps)
        assert (0, 0) in comps[0]

        prm5 = GroupParams(5, 1)
        assert len(group.cosets(prm5, group.span(prm5, [(1,)]))) == 1

        prm22 = GroupParams(2, 2)
        whole = group.span(prm22, [(1, 0), (0, 1)])
        assert len(group.cosets(prm22, whole)) == 1

    def test_cosets_partition_group(self):
        prm = GroupParams(2, 3)
        comps = group.cosets(prm, group.span(prm, [(1, 1, 0)]))
        flat = [e for c in comps for e in c]
        assert sorted(flat) == sorted(group.elements(prm))
        assert len(set(flat)) == len(flat)

    def test_cosets_follow_generator_orientation(self):
        prm = GroupParams(5, 2)
        i = (1, 0)
        comps = group.cosets(prm, group.span(prm, [i]), generators=[i])
        for comp in comps:
            for m in range(1, 5):
                assert comp[m] == group.add(prm, comp[m - 1], i)

    def test_rejects_non_subgroup(self):
        prm = GroupParams(3, 2)
        with pytest.raises(NotASubgroupError):
            group.cosets(prm, [(0, 0), (0, 1)])


class TestMatrices:
    def test_invertibility(self):
        assert group.matrix_is_invertible([[1, 0], [0, 1]], 3)
        assert not group.matrix_is_invertible([[1, 2], [2, 4]], 3)
        assert group.matrix_is_invertible([[0, 1], [1, 0]], 2)

    def test_apply_matrix(self):
        prm = GroupParams(3, 2)
        assert group.apply_matrix(prm, [[0, 1], [1, 0]], (1, 2)) == (2, 1)


class TestJson:
    @given(params_and_elem())
    def test_element_json_roundtrip(self, t):
        prm, e = t
        assert group.element_from_json(prm, group.element_to_json(e)) == e

    def test_bad_payload(self):
        with pytest.raises(InvalidElementError):
            group.element_from_json(GroupParams(3, 2), [1])
