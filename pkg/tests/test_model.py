"""Validation, open set condition, and word geometry."""

import json
from fractions import Fraction

import numpy as np
import pytest

from conftest import SYS1_RAW, SYS1P_RAW, edge, random_system
from lqcarpet import (FormatError, GifsValidationError, NotAdmissible,
                      check_rosc, compose_word, load_model, validate_gifs)


def codes(excinfo):
    return {v.code for v in excinfo.value.violations}


class TestValidate:
    def test_reference_system_is_valid(self, sys1):
        assert sys1.vertices == ("v",)
        assert [e.id for e in sys1.edges] == ["e1", "e2"]
        assert sys1.alpha_star == 0.25
        assert sys1.alpha_sup == 0.75
        assert sys1.p_star == sys1.p_sup == 0.5
        assert sys1.is_diagonal and sys1.is_single_vertex

    def test_string_numbers_kept_exact(self, sys1):
        e2 = sys1.edge("e2")
        assert e2.a_exact == Fraction(1, 4)
        assert e2.tx_exact == Fraction(3, 4)
        assert e2.a == 0.25

    def test_row_sum_violation(self):
        raw = {"vertices": ["v"], "edges": [
            edge("e1", "v", "v", "diagonal", 0.75, 0.25, 0.6),
            edge("e2", "v", "v", "diagonal", 0.25, 0.75, 0.6)]}
        with pytest.raises(GifsValidationError) as exc:
            validate_gifs(raw)
        assert codes(exc) == {"ProbabilityRowSum"}
        assert exc.value.violations[0].where == "v"

    def test_not_strongly_connected(self):
        raw = {"vertices": ["v1", "v2"], "edges": [
            edge("e1", "v1", "v2", "diagonal", 0.5, 0.5, 1.0),
            edge("e2", "v2", "v2", "diagonal", 0.5, 0.5, 1.0)]}
        with pytest.raises(GifsValidationError) as exc:
            validate_gifs(raw)
        assert "NotStronglyConnected" in codes(exc)

    def test_dangling_vertex(self):
        raw = {"vertices": ["v1", "v2"], "edges": [
            edge("e1", "v1", "v1", "diagonal", 0.5, 0.5, 1.0)]}
        with pytest.raises(GifsValidationError) as exc:
            validate_gifs(raw)
        assert "DanglingVertex" in codes(exc)

    def test_non_contraction(self):
        raw = {"vertices": ["v"], "edges": [
            edge("e1", "v", "v", "diagonal", 1.0, 0.5, 0.5),
            edge("e2", "v", "v", "diagonal", 0.5, 0.5, 0.5)]}
        with pytest.raises(GifsValidationError) as exc:
            validate_gifs(raw)
        assert "NonContraction" in codes(exc)

    def test_probability_range(self):
        raw = {"vertices": ["v"], "edges": [
            edge("e1", "v", "v", "diagonal", 0.5, 0.5, 1.5),
            edge("e2", "v", "v", "diagonal", 0.5, 0.5, -0.5)]}
        with pytest.raises(GifsValidationError) as exc:
            validate_gifs(raw)
        assert "ProbabilityRange" in codes(exc)

    @pytest.mark.parametrize("mutate", [
        lambda raw: raw["edges"][0].pop("a"),
        lambda raw: raw["edges"][0].update(kind="rotation"),
        lambda raw: raw["edges"][0].update({"from": "nope"}),
        lambda raw: raw["edges"][0].update(sign_a=2),
        lambda raw: raw["edges"][0].update(a="zero point five"),
        lambda raw: raw["edges"].append(dict(raw["edges"][0])),
        lambda raw: raw.update(vertices=[]),
    ])
    def test_structural_errors(self, mutate):
        raw = json.loads(json.dumps(SYS1_RAW))
        mutate(raw)
        with pytest.raises(FormatError):
            validate_gifs(raw)

    def test_load_model_bad_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{ not json")
        with pytest.raises(FormatError):
            load_model(path)

    def test_load_model_roundtrip(self, tmp_path):
        path = tmp_path / "sys1.json"
        path.write_text(json.dumps(SYS1_RAW))
        model = load_model(path)
        assert [e.id for e in model.edges] == ["e1", "e2"]


class TestRosc:
    def test_reference_passes(self, sys1):
        report = check_rosc(sys1)
        assert report.passed
        # exact rectangles: [0,3/4]x[0,1/4] and [3/4,1]x[1/4,1]
        assert sys1.edge("e2").rect(exact=True) == (
            Fraction(3, 4), Fraction(1), Fraction(1, 4), Fraction(1))

    def test_identical_edges_overlap(self):
        raw = {"vertices": ["v"], "edges": [
            edge("a", "v", "v", "diagonal", 0.5, 0.5, 0.5),
            edge("b", "v", "v", "diagonal", 0.5, 0.5, 0.5)]}
        report = check_rosc(validate_gifs(raw))
        assert not report.passed
        assert ("v", "a", "b") in report.overlap_pairs

    def test_containment_failure(self):
        raw = {"vertices": ["v"], "edges": [
            edge("a", "v", "v", "diagonal", 0.75, 0.5, 0.5, tx=0.5),
            edge("b", "v", "v", "diagonal", 0.25, 0.25, 0.5, ty=0.75)]}
        report = check_rosc(validate_gifs(raw))
        assert ("v", "a") in report.containment_failures

    def test_negative_sign_geometry(self):
        # sign -1 anchors the interval on the other side of tx
        raw = {"vertices": ["v"], "edges": [
            edge("a", "v", "v", "diagonal", 0.5, 0.5, 0.5,
                 tx="1/2", sign_a=-1),
            edge("b", "v", "v", "diagonal", 0.5, 0.5, 0.5,
                 tx="1/2", ty="1/2")]}
        report = check_rosc(validate_gifs(raw))
        assert report.passed

    def test_order_invariance(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            model = random_system(rng)
            raw = {"vertices": list(model.vertices), "edges": []}
            for e in model.edges:
                raw["edges"].append(edge(e.id, e.src, e.dst, e.kind, e.a,
                                         e.b, e.p, tx=e.tx, ty=e.ty))
            base = check_rosc(validate_gifs(raw))
            raw["edges"].reverse()
            flipped = check_rosc(validate_gifs(raw))
            assert base.passed == flipped.passed
            assert (set(frozenset(p[1:]) for p in base.overlap_pairs)
                    == set(frozenset(p[1:]) for p in flipped.overlap_pairs))


class TestComposeWord:
    def test_two_letter_word(self, sys1):
        geo = compose_word(sys1, ["e1", "e2"])
        assert geo.c == pytest.approx(3 / 16, abs=0)
        assert geo.d == pytest.approx(3 / 16, abs=0)
        assert geo.orientation == "diagonal"
        assert geo.p == 0.25
        assert geo.alpha1 == geo.alpha2 == pytest.approx(3 / 16)

    def test_anti_anti_matches_matrix_product(self, sys1p):
        # independent oracle: multiply the 2x2 matrices directly
        geo = compose_word(sys1p, ["e1", "e1"])
        t1 = sys1p.edge("e1").linear()
        prod = t1 @ t1
        assert np.allclose(prod, np.diag([3 / 16, 3 / 16]))
        assert geo.orientation == "diagonal"
        assert geo.c == pytest.approx(abs(prod[0, 0]))
        assert geo.d == pytest.approx(abs(prod[1, 1]))

    def test_empty_word_rejected(self, sys1):
        with pytest.raises(NotAdmissible):
            compose_word(sys1, [])

    def test_non_chaining_rejected(self, mixed_2v):
        with pytest.raises(NotAdmissible):
            compose_word(mixed_2v, ["e1", "e1"])   # u->w then u->w

    def test_unknown_edge_rejected(self, sys1):
        with pytest.raises(NotAdmissible):
            compose_word(sys1, ["nope"])

    def test_rect_exact_image(self, sys1):
        geo = compose_word(sys1, ["e2"])
        assert geo.rect == (0.75, 0.25, 1.0, 1.0)

    def test_composition_properties(self, mixed_2v):
        rng = np.random.default_rng(11)
        ids = [e.id for e in mixed_2v.edges]
        found = 0
        while found < 50:
            k1, k2 = int(rng.integers(1, 4)), int(rng.integers(1, 4))
            w1 = [ids[rng.integers(len(ids))] for _ in range(k1)]
            w2 = [ids[rng.integers(len(ids))] for _ in range(k2)]
            try:
                g1, g2 = compose_word(mixed_2v, w1), compose_word(mixed_2v, w2)
                g12 = compose_word(mixed_2v, w1 + w2)
            except NotAdmissible:
                continue
            found += 1
            # widths compose according to the orientation of the prefix
            if g1.orientation == "diagonal":
                assert g12.c == pytest.approx(g1.c * g2.c, rel=1e-12)
                assert g12.d == pytest.approx(g1.d * g2.d, rel=1e-12)
            else:
                assert g12.c == pytest.approx(g1.c * g2.d, rel=1e-12)
                assert g12.d == pytest.approx(g1.d * g2.c, rel=1e-12)
            assert g12.alpha1 * g12.alpha2 == pytest.approx(
                g12.c * g12.d, rel=1e-12)
            n = len(w1) + len(w2)
            assert mixed_2v.alpha_star ** n <= g12.alpha2 * (1 + 1e-12)
            assert g12.alpha2 <= mixed_2v.alpha_sup ** n * (1 + 1e-12)
