import json
from fractions import Fraction

import pytest

import lampgeo as lg
from lampgeo import (
    BSFamily,
    BSNumber,
    Classification,
    DecompositionError,
    DomainError,
    GeneratorSet,
    LampConfig,
    LampFamily,
    Quad,
    QuadParams,
    SolFamily,
    classify,
    rotate,
)

L = LampConfig.of
LAMP2 = LampFamily(2)
BS2 = BSFamily(2)


def B(v):
    return BSNumber.from_fraction(Fraction(v), 2)


def lamp_quad(*dicts):
    return Quad(LAMP2, *(L(2, d) for d in dicts))


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def test_classify_lamp_parallelogram():
    q = lamp_quad({}, {0: 1}, {0: 1, 9: 1}, {9: 1})
    assert classify(q, QuadParams(2, 2 ** 8)).kind is Classification.PARALLELOGRAM
    res = classify(q, QuadParams(2, 2 ** 20))
    assert res.kind is Classification.NOT_QUADRILATERAL
    assert "diagonal" in res.reason


def test_classify_bs_parallelogram():
    q = Quad(BS2, B(0), B(1), B(65), B(64))
    assert classify(q, QuadParams(1, 63)).kind is Classification.PARALLELOGRAM


def test_classify_sol():
    fam = SolFamily(lg.sol_invariant_form(((2, 1), (1, 1))))
    # corners 0, v, v+w, w for v=(1,0), w=(34,21): sides have |f| = 1
    q = Quad(fam, (0, 0), (1, 0), (35, 21), (34, 21))
    assert classify(q, QuadParams(1, 45)).kind is Classification.PARALLELOGRAM
    assert classify(q, QuadParams(1, 46)).kind is Classification.NOT_QUADRILATERAL


def test_classify_duplicates():
    q = lamp_quad({}, {0: 1}, {}, {9: 1})
    res = classify(q, QuadParams(2, 4))
    assert res.kind is Classification.NOT_QUADRILATERAL
    assert "duplicate" in res.reason


def test_classify_genuine_quadrilateral_not_parallelogram():
    # boundary object: sides within 2^1, diagonals exactly 2^2, corner fails
    q = lamp_quad({}, {0: 1}, {0: 1, 1: 1, 2: 1}, {2: 1})
    res = classify(q, QuadParams(2, 4))
    assert res.kind is Classification.QUADRILATERAL


def test_rotate():
    q = lamp_quad({}, {0: 1}, {0: 1, 9: 1}, {9: 1})
    params = QuadParams(2, 2 ** 8)
    base = classify(q, params).kind
    r = q
    for _ in range(4):
        r = rotate(r)
        assert classify(r, params).kind is base or classify(r, params).kind is Classification.PARALLELOGRAM
    assert r == q  # rotate^4 = identity
    bad = lamp_quad({}, {0: 1}, {1: 1}, {5: 1})
    assert classify(bad, params).kind is Classification.NOT_QUADRILATERAL
    assert classify(rotate(bad), params).kind is Classification.NOT_QUADRILATERAL


def test_classify_translation_invariant():
    params = QuadParams(2, 2 ** 8)
    q = lamp_quad({}, {0: 1}, {0: 1, 9: 1}, {9: 1})
    c = L(2, {-4: 1, 2: 1})
    shifted = Quad(LAMP2, *(p + c for p in q.points))
    assert classify(shifted, params).kind is Classification.PARALLELOGRAM


def test_quad_params_validation():
    with pytest.raises(DomainError):
        QuadParams(4, 4)
    with pytest.raises(DomainError):
        QuadParams(0, 4)


# ---------------------------------------------------------------------------
# verifiers
# ---------------------------------------------------------------------------

def test_lamp_claim_small():
    rep = lg.verify_lamp_claim(1, 6)
    assert rep.violations == [] and not rep.vacuous and rep.count_checked > 0


def test_lamp_claim_relaxed_finds_spec_witness():
    rep = lg.verify_lamp_claim(2, 10, hypotheses="relaxed")
    witness = (L(2, {}), L(2, {0: 1}), L(2, {0: 1, 2: 1, 5: 1}), L(2, {5: 1}))
    quads = [tuple(v) for v in rep.violations]
    assert witness in quads
    # independently validate a violation against the boundary metrics
    a, b, d, c = witness
    assert lg.supp_gap(b, a).gap < 2 and lg.supp_gap(c, a).gap < 2
    assert lg.supp_gap(d, a).gap > 4 and lg.supp_gap(b, c).gap > 4
    assert a + d != b + c


def test_lamp_claim_n3():
    rep = lg.verify_lamp_claim(2, 10, n=3)
    assert rep.violations == [] and not rep.vacuous


def test_lamp_claim_chunks_deterministic():
    a = lg.verify_lamp_claim(2, 10, chunks=1)
    b = lg.verify_lamp_claim(2, 10, chunks=3)
    assert a.count_checked == b.count_checked
    assert a.violations == b.violations
    assert a.to_jsonable() == b.to_jsonable()


def test_lamp_claim_rejects_bad_modes():
    with pytest.raises(DomainError):
        lg.verify_lamp_claim(0, 6)
    with pytest.raises(DomainError):
        lg.verify_lamp_claim(1, 6, hypotheses="weird")


def test_taback_small():
    rep = lg.verify_taback(2, 1, 4, 64, (-3, 3))
    assert rep.violations == [] and not rep.vacuous
    assert rep.extras["side_relation_failures"] == []
    rep3 = lg.verify_taback(3, 2, 32, 100, (-2, 2))
    assert rep3.violations == [] and not rep3.vacuous


def test_taback_requires_separation():
    with pytest.raises(DomainError):
        lg.verify_taback(2, 3, 9, 64, (-2, 2))  # M = eps^2 rejected


def test_taback_sample_decompositions_recorded():
    rep = lg.verify_taback(2, 1, 4, 64, (-3, 3))
    assert rep.extras["sample_decompositions"]
    for sample in rep.extras["sample_decompositions"]:
        (r1, k1), (r2, k2), (r3, k3), (r4, k4) = [tuple(s) for s in sample["sides_rk"]]
        assert r1 == -r3 and r2 == -r4 and k1 == k3 and k2 == k4


def test_schwartz_small():
    ctx = lg.sol_invariant_form(((2, 1), (1, 1)))
    rep = lg.verify_schwartz(ctx, 1, 40, 25)
    assert rep.violations == [] and not rep.vacuous
    vac = lg.verify_schwartz(ctx, 1, 1000, 2)
    assert vac.vacuous and vac.count_checked == 0


def test_schwartz_below_threshold_is_informational():
    ctx = lg.sol_invariant_form(((2, 1), (1, 1)))
    rep = lg.verify_schwartz(ctx, 4, 5, 15)
    assert rep.count_checked > 0
    assert rep.violations  # below the rigidity threshold, so witnesses exist


def test_schwartz_calibration():
    ctx = lg.sol_invariant_form(((2, 1), (1, 1)))
    cal = lg.calibrate_schwartz(ctx, 1, 25)
    m_star = cal.extras["M_star"]
    assert m_star == cal.extras["max_nonparallelogram_min_diagonal"] + 1
    assert cal.violations == [] and not cal.vacuous
    if m_star > 1:
        below = lg.verify_schwartz(ctx, 1, m_star - 1, 25)
        assert below.violations  # M* is sharp


def test_report_jsonable_shape():
    rep = lg.verify_lamp_claim(1, 6)
    payload = rep.to_jsonable()
    assert list(payload)[:5] == ["params", "search_space", "count_checked", "violations", "vacuous"]
    assert "elapsed_ms" not in payload
    assert "elapsed_ms" in rep.to_jsonable(include_timing=True)
    json.dumps(payload)  # JSON-safe


# ---------------------------------------------------------------------------
# telescoping
# ---------------------------------------------------------------------------

def test_telescope_bs_example():
    q = Quad(BS2, B(0), B(1), B(4), B(3))
    sigma = GeneratorSet(BS2, (B(1), B(2)))
    chain = lg.telescope_decompose(q, sigma)
    values = [[p.value() for p in (c.p1, c.p2, c.p3, c.p4)] for c in chain]
    assert values == [[0, 1, 2, 1], [1, 2, 4, 3]]
    assert all(c.corner_holds() for c in chain)
    assert lg.telescoping_identity_holds(q, chain)


def test_telescope_lamp_single_step():
    q = Quad(LAMP2, L(2, {}), L(2, {0: 1}), L(2, {0: 1, 5: 1}), L(2, {5: 1}))
    chain = lg.telescope_decompose(q, GeneratorSet(LAMP2, (L(2, {5: 1}),)))
    assert chain == [q]
    assert lg.telescoping_identity_holds(q, chain)


def test_telescope_errors():
    q = Quad(BS2, B(0), B(1), B(4), B(3))
    with pytest.raises(DecompositionError) as exc:
        lg.telescope_decompose(q, GeneratorSet(BS2, ()))
    assert exc.value.residual == B(3)
    with pytest.raises(DecompositionError):
        lg.telescope_decompose(q, GeneratorSet(BS2, (B(2),)))  # residual 1 unreachable
    not_par = Quad(BS2, B(0), B(1), B(5), B(3))
    with pytest.raises(DomainError):
        lg.telescope_decompose(not_par, GeneratorSet(BS2, (B(1),)))


def test_telescope_longer_chain():
    q = Quad(BS2, B(2), B(3), B(14), B(13))  # c - a = 11 = 8 + 2 + 1
    sigma = GeneratorSet(BS2, tuple(B(2 ** j) for j in range(4)))
    chain = lg.telescope_decompose(q, sigma)
    assert len(chain) == 3
    assert all(c.corner_holds() for c in chain)
    assert lg.telescoping_identity_holds(q, chain)
    assert chain[-1].p3 == q.p3 and chain[-1].p4 == q.p4


def test_greedy_sum_duplicates_rejected():
    with pytest.raises(DomainError):
        GeneratorSet(BS2, (B(1), B(1)))


# ---------------------------------------------------------------------------
# generating sets
# ---------------------------------------------------------------------------

def test_sigma_admissible_bs():
    sigma = GeneratorSet(BS2, (B(1), B(2 ** 10)))
    assert lg.sigma_admissible(sigma, QuadParams(1, 2 ** 9)) is True


def test_sigma_admissible_lamp_witness():
    sigma = GeneratorSet(LAMP2, (L(2, {0: 1}), L(2, {1: 1})))
    witness = lg.sigma_admissible(sigma, QuadParams(2, 2 ** 4))
    assert witness == (L(2, {0: 1}), L(2, {1: 1}))


def test_sigma_admissible_singleton_vacuous():
    assert lg.sigma_admissible(GeneratorSet(BS2, (B(1),)), QuadParams(1, 4)) is True


def test_sigma_obstruction_single_lamps():
    sigma = GeneratorSet(LAMP2, tuple(L(2, {i: 1}) for i in range(8)))
    v, w = lg.lamp_sigma_obstruction(sigma, QuadParams(2, 32), (0, 8))
    quad = Quad(LAMP2, L(2, {}), v, v + w, w)
    assert classify(quad, QuadParams(2, 32)).kind is not Classification.PARALLELOGRAM


def test_sigma_obstruction_gap_one_generators():
    elems = [L(2, {i: 1, i + 1: 1}) for i in range(7)] + [L(2, {7: 1})]
    sigma = GeneratorSet(LAMP2, tuple(elems))
    v, w = lg.lamp_sigma_obstruction(sigma, QuadParams(2, 32), (0, 8))
    assert {v, w} <= set(elems)


def test_sigma_obstruction_errors():
    sigma = GeneratorSet(LAMP2, tuple(L(2, {i: 1}) for i in range(7)))
    with pytest.raises(DomainError, match="index 7"):
        lg.lamp_sigma_obstruction(sigma, QuadParams(2, 32), (0, 8))
    full = GeneratorSet(LAMP2, tuple(L(2, {i: 1}) for i in range(8)))
    with pytest.raises(DomainError, match="2\\*eps\\^2"):
        lg.lamp_sigma_obstruction(full, QuadParams(2, 8), (0, 8))
    outside = GeneratorSet(LAMP2, (L(2, {9: 1}),))
    with pytest.raises(DomainError, match="supported"):
        lg.lamp_sigma_obstruction(outside, QuadParams(2, 32), (0, 8))


def test_sigma_obstruction_n3_generation_check():
    fam3 = LampFamily(3)
    sigma = GeneratorSet(fam3, (L(3, {0: 1}), L(3, {1: 1})))
    v, w = lg.lamp_sigma_obstruction(sigma, QuadParams(3, 81), (0, 2))
    assert {v, w} == {L(3, {0: 1}), L(3, {1: 1})}
