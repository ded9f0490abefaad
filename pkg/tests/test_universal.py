# tests/test_universal.py
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pi_crossed.ops import TruncationError, guarded_residual
from pi_crossed.universal import (
    GRID,
    TSTAR,
    Assignment,
    MalformedIndices,
    NormalForm,
    T,
    Word,
    band_symbol,
    element,
    evaluate,
    evaluate_word,
    gram_evidence,
    interval_flags,
    kernel_flags,
    monomial,
    monomial_word,
    normalize,
    pn,
    symbol,
)

words = st.lists(st.sampled_from(["v", "v*"]), max_size=6).map(lambda xs: Word(tuple(xs)))


def nf(text: str) -> NormalForm:
    return normalize(Word.parse(text))


class TestWord:
    def test_parse_powers(self):
        w = Word.parse("v v*^2 v^3")
        assert len(w) == 6
        assert w.degree == 2

    def test_empty_word_is_unit(self):
        assert str(Word()) == "1"
        assert normalize(Word()) == NormalForm.one()

    def test_adjoint_reverses_and_flips(self):
        assert Word.parse("v v v*").adjoint() == Word.parse("v v* v*")

    @pytest.mark.parametrize("text", ["w", "v^", "v**"])
    def test_bad_tokens(self, text):
        with pytest.raises(ValueError):
            Word.parse(text)


class TestNormalize:
    def test_letters(self):
        assert nf("v") == monomial(0, 1, 1)
        assert nf("v*") == monomial(1, 1, 0)

    @pytest.mark.parametrize(
        "lhs, rhs",
        [
            ("v v* v", "v"),
            ("v* v v*", "v*"),
            ("v^2 v*^2 v^2", "v^2"),
            ("v*^3 v^3 v*^3", "v*^3"),
        ],
    )
    def test_partial_isometry_relations(self, lhs, rhs):
        assert nf(lhs) == nf(rhs)

    def test_monomial_word_is_fixed(self):
        assert normalize(monomial_word(1, 3, 2)) == monomial(1, 3, 2)

    @given(words)
    def test_canonical_shape(self, w):
        ((s, m, t), c), = normalize(w).terms
        assert c == 1
        assert m >= max(s, t)
        assert t - s == w.degree

    @given(words, words)
    def test_product_matches_concatenation(self, a, b):
        assert normalize(a) * normalize(b) == normalize(a + b)

    @given(words)
    def test_adjoint_matches_word_adjoint(self, w):
        assert normalize(w).adjoint() == normalize(w.adjoint())

    @given(words)
    def test_grid_image_matches_word(self, w):
        assert guarded_residual(evaluate(normalize(w), GRID, 16), evaluate_word(w, GRID, 16)) == 0.0


class TestNormalForm:
    def test_linear_structure(self):
        x = nf("v") + 2 * nf("v*")
        assert (x - nf("v")).as_dict() == {(1, 1, 0): 2}
        assert not (x - x)
        assert (-x).as_dict()[(0, 1, 1)] == -1

    def test_budget(self):
        assert (nf("v^2 v*") + nf("v*")).budget == 2
        assert NormalForm().budget == 0

    def test_malformed_triple(self):
        with pytest.raises(MalformedIndices):
            NormalForm.from_mapping({(2, 1, 0): 1})

    def test_json_rows(self):
        x = nf("v^2") + 1j * nf("v* v")
        rows = x.to_json()
        assert [0, 2, 2, 1.0, 0.0] in rows
        assert NormalForm.from_json(rows) == x
        with pytest.raises(ValueError):
            NormalForm.from_json([[0, 1, 1, 1.0]])


class TestElements:
    def test_f_is_a_matrix_unit_under_T(self):
        image = evaluate(element("f", 1, 2, 3), T, 20)
        exact = image.matrix[:, image.guard()]
        assert exact[1, 2] == pytest.approx(1.0)
        assert np.count_nonzero(np.abs(exact) > 1e-12) == 1

    def test_kernel_flags_of_f_and_g(self):
        f = kernel_flags(element("f", 1, 1, 2), 16)
        assert not f.in_ker_phi_t and f.in_ker_phi_tstar and not f.in_i
        g = kernel_flags(element("g", 1, 1, 2), 16)
        assert g.in_ker_phi_t and not g.in_ker_phi_tstar

    def test_e_lies_in_both_kernels(self):
        e = element("e", 0, 0, 0)
        assert e
        assert kernel_flags(e, 16).in_i

    def test_unit_is_in_neither_kernel(self):
        flags = kernel_flags(NormalForm.one(), 8)
        assert not flags.in_ker_phi_t and not flags.in_ker_phi_tstar

    @pytest.mark.parametrize(
        "kind, indices",
        [("f", (-1, 0, 0)), ("e", (2, 0, 1)), ("x", (1, 1, 1)), ("g", (1, 1)), ("q", (1, 2))],
    )
    def test_malformed(self, kind, indices):
        with pytest.raises(MalformedIndices):
            element(kind, *indices)

    def test_guard_size_must_exceed_budget(self):
        with pytest.raises(TruncationError):
            kernel_flags(nf("v^4"), 4)


class TestSymbols:
    def test_symbol_of_letters(self):
        assert symbol(nf("v")).coefficient(1) == 1
        assert symbol(nf("v"), star=True).coefficient(-1) == 1

    def test_compact_elements_have_zero_symbol(self):
        assert not symbol(element("f", 1, 2, 2))
        assert not symbol(element("e", 1, 0, 1))

    def test_band_symbol_of_shift(self):
        est = band_symbol(evaluate(nf("v"), T, 30), 3)
        assert est.coefficient(1) == pytest.approx(1.0)
        assert est.coefficient(0) == 0
        assert est.max_deviation(symbol(nf("v"))) == pytest.approx(0.0)

    def test_band_needs_room(self):
        with pytest.raises(TruncationError):
            band_symbol(evaluate(nf("v"), T, 6), 5)


class TestRepresentations:
    def test_exact_compression_default_size(self):
        assert evaluate(nf("v"), pn(3)).dim == 4

    def test_assignments_validate(self):
        with pytest.raises(ValueError):
            Assignment("pn")
        with pytest.raises(ValueError):
            evaluate(nf("v"), T)

    def test_interval_flags(self):
        square = nf("v^2")
        below = interval_flags(square, 1)
        assert below.in_ker_q and below.in_ker_q_minus
        flags = interval_flags(square, 2)
        assert not flags.in_ker_q and flags.in_ker_q_minus

    def test_gram_rank_full_in_grid(self):
        triples = [(0, 0, 0), (0, 1, 1), (1, 1, 0), (0, 1, 0), (1, 1, 1)]
        assert not gram_evidence(triples).deficient

    def test_gram_rank_deficient_under_T(self):
        # v*v = 1 for an isometry
        evidence = gram_evidence([(0, 0, 0), (1, 1, 1)], assignment=T, size=12)
        assert evidence.deficient

    def test_tstar_is_adjoint_of_t(self):
        a = evaluate(nf("v"), TSTAR, 12)
        b = evaluate(nf("v*"), T, 12)
        assert guarded_residual(a, b) == 0.0
