import numpy as np
import pytest

from polarscope.forms import classify_hyperplane
from polarscope.geometry import BudgetExceeded, gaussian
from polarscope.gf import field_make
from polarscope.polarspace import GeneratorSet, polar_space
from polarscope.pseudopolar import (
    SectionError,
    candidate_sections,
    check_alt,
    check_projective_pseudopolar,
    check_pseudopolar,
    check_strong_pseudopolar,
    dual_hyperoval_example,
    equivalence_harness,
    pseudo_point_degree,
    pseudo_size,
    quadric_in_symplectic,
    section_set,
    strong_point_profile,
    strong_spectrum,
    verify_embedded,
)

PARAMS = [(3, 2, (2, 1)), (3, 4, (2, 1)), (3, 2, (3, 1)), (4, 2, (2, 1)), (3, 3, (2, 2)),
          (4, 4, (3, 1)), (5, 3, (2, 2))]


@pytest.mark.parametrize("d,e2,ph", PARAMS)
def test_expected_counts_are_consistent(d, e2, ph):
    F = field_make(*ph)
    size = pseudo_size(d, e2, F)
    assert sum(strong_spectrum(d, e2, F, True)) == size
    assert sum(strong_spectrum(d, e2, F, False)) == size
    assert strong_spectrum(d, e2, F, True)[0] == 1
    assert strong_spectrum(d, e2, F, False)[0] == 0
    # members through a point, counted over an outside generator's planes
    assert sum(strong_point_profile(d, e2, F)) == pseudo_point_degree(d, e2, F)


def test_expected_counts_match_lower_space():
    # |S| equals the number of generators of the section polar space
    F = field_make(2)
    assert pseudo_size(3, 2, F) == polar_space("hyperbolic", 3, 2, 1).expected_generators()
    assert pseudo_size(3, 4, F) == polar_space("parabolic", 3, 2, 1).expected_generators()
    assert pseudo_size(3, 3, field_make(2, 2)) == polar_space(
        "hermitian-odd", 3, 2, 2).expected_generators()


def test_range_precondition():
    for fam, d in [("hyperbolic", 3), ("parabolic", 2), ("hermitian-odd", 3)]:
        P = polar_space(fam, d, 2, 2 if fam.startswith("hermitian") else 1)
        with pytest.raises(ValueError):
            check_pseudopolar(P, GeneratorSet(P, indices=[0]))


def test_section_passes_everything(q62, q62_section):
    S = q62_section
    for check in (check_strong_pseudopolar, check_pseudopolar, check_alt):
        rep = check(q62, S)
        assert rep.passed, rep.to_dict()
    strong = check_strong_pseudopolar(q62, S)
    assert strong["i"].observed == {"in": [(1, 7, 14, 8)], "out": [(0, 2, 12, 16)]}
    assert strong["iii"].observed == [(0, 0), (2, 4)]
    pseudo = check_pseudopolar(q62, S)
    assert [c.observed for c in pseudo.conditions][2:] == [30, [0, 6]]


def test_all_generators_fail_alt_literally(q62):
    S = GeneratorSet(q62, indices=range(q62.ngenerators))
    rep = check_alt(q62, S)
    assert not rep.passed and rep.failed == ["i"]
    assert rep["i"].observed == [14] and rep["i"].expected == 7
    assert rep["iii'"].vacuous and rep["iv'"].vacuous
    assert check_strong_pseudopolar(q62, S)["i"].vacuous


def test_single_deletion_names_condition_iii(q62, q62_section):
    S = GeneratorSet(q62, indices=q62_section.indices[1:])
    rep = check_pseudopolar(q62, S)
    assert not rep.passed
    assert rep["iii"].observed == 29 and rep["iii"].expected == 30
    strong = check_strong_pseudopolar(q62, S)
    w = strong["i"].witness
    assert w["kind"] == "generator" and len(w["rows"]) == 3


def test_verify_embedded_on_section(q62, q62_section):
    v = verify_embedded(q62, q62_section)
    assert v.is_polar_space and v.rank == 3 and v.param_half == 0
    assert v.point_count == v.expected_point_count == 35
    assert v.e_counts == [28] and v.e_count_ok
    assert v.secundum_degrees == [2]
    assert v.t_size is not None and all(a.passed for a in v.axioms)


def test_verify_embedded_rejects_random(q62):
    rng = np.random.default_rng(3)
    S = GeneratorSet(q62, indices=rng.choice(135, 30, replace=False))
    v = verify_embedded(q62, S)
    assert not v.is_polar_space
    assert not v.axiom(3).passed and v.axiom(3).witness is not None
    with pytest.raises(ValueError):
        verify_embedded(q62, GeneratorSet(q62, indices=[]))


def test_verify_embedded_without_materialising(q62, q62_section):
    v = verify_embedded(q62, q62_section, materialize=False)
    assert v.is_polar_space and v.t_size is None


def test_section_errors():
    P = polar_space("elliptic", 3, 2, 1)
    with pytest.raises(SectionError, match="tangent"):
        section_set(P, [0, 1, 0, 0, 0, 0, 0, 0])
    Q = polar_space("parabolic", 3, 2, 1)
    rank_drop = [1, 1, 1, 0, 0, 0, 0]
    assert classify_hyperplane(Q, rank_drop).tag == "rank-drop"
    with pytest.raises(SectionError, match="rank 2"):
        section_set(Q, rank_drop)


@pytest.mark.parametrize("d,ph,size", [(3, (2, 1), 30), (4, (2, 1), 270), (3, (2, 2), 170)])
def test_quadric_in_symplectic(d, ph, size):
    W, S = quadric_in_symplectic(d, field_make(*ph))
    assert len(S) == size == pseudo_size(d, 2, W.field)


def test_quadric_in_symplectic_needs_even_q():
    with pytest.raises(ValueError):
        quadric_in_symplectic(3, field_make(3))


def test_harness_small_and_deterministic(monkeypatch):
    W = polar_space("symplectic", 3, 2, 1)
    a = equivalence_harness(W, samples=6, seed=5)
    monkeypatch.setenv("POLARSCOPE_THREADS", "3")
    b = equivalence_harness(W, samples=6, seed=5)
    assert a.passed and a.to_dict() == b.to_dict()
    pos = a.positives[0]
    assert (pos.rank, pos.param_half, pos.point_count) == (3, 0, 35)


def test_harness_rejects_rows_outside_case_table():
    with pytest.raises(ValueError):
        equivalence_harness(polar_space("hyperbolic", 3, 2, 1), samples=1)
    with pytest.raises(BudgetExceeded):
        equivalence_harness(polar_space("elliptic", 3, 2, 1), samples=50, budget_seconds=1e-9)


@pytest.mark.parametrize("h", [1, 2])
def test_dual_hyperoval(h):
    F = field_make(2, h)
    q = F.q
    lines, rep = dual_hyperoval_example(F, 4)
    assert rep.passed and len(lines) == 2 * (q + 1)
    assert rep["i"].observed == [q + 1] and rep["iv"].observed == [0, 2]
    assert rep.extras["planes_meet_in"] == 1
    # two lines of one dual hyperoval meet, so some three lines form a triangle
    assert rep.extras["triangle"] is not None and rep.extras["classical_triangle"] is None
    assert rep.extras["classical_passes"] and rep.extras["classical_span_dim"] == 3


def test_dual_hyperoval_preconditions():
    with pytest.raises(ValueError):
        dual_hyperoval_example(field_make(3), 4)
    with pytest.raises(ValueError):
        dual_hyperoval_example(field_make(2), 3)


def test_projective_check_on_regulus_pair():
    P = polar_space("hyperbolic", 2, 3, 1)
    lines = [P.generator(i) for i in range(P.ngenerators)]
    rep = check_projective_pseudopolar(lines, 2, 2, P.field)
    assert rep.passed and rep.size == 2 * (gaussian(2, 1, 3))


def test_elliptic_section_counts():
    P = polar_space("elliptic", 3, 2, 1)
    _, cands = candidate_sections(P, 1, seed=0)
    _, S = next(cands)
    assert len(S) == 135
    rep = check_pseudopolar(P, S)
    assert rep.passed
    assert [c.observed for c in rep.conditions] == [[14], rep["ii"].observed, 135, [0, 15]]
    v = verify_embedded(P, S)
    assert v.is_polar_space and (v.rank, v.param_half, v.point_count) == (3, 2, 63)


def test_all_generators_fail_strong_ii(q62):
    rep = check_strong_pseudopolar(q62, GeneratorSet(q62, indices=range(135)))
    assert "ii" in rep.failed and rep["ii"].witness["kind"] == "point"


def test_swaps_break_i_or_iv(q62, q62_section):
    S = q62_section
    rng = np.random.default_rng(2)
    for _ in range(40):
        i = int(rng.integers(len(S)))
        j = int(rng.choice(S.complement()))
        T = GeneratorSet(q62, indices=np.append(np.delete(S.indices, i), j))
        failed = check_pseudopolar(q62, T).failed
        assert "i" in failed or "iv" in failed
        strong = check_strong_pseudopolar(q62, T)
        assert "i" in strong.failed


def test_dual_hyperoval_in_bigger_space():
    a = dual_hyperoval_example(field_make(2), 4)[1]
    b = dual_hyperoval_example(field_make(2), 5)[1]
    assert [c.to_dict() for c in a.conditions] == [c.to_dict() for c in b.conditions]
