import random
from fractions import Fraction

import pytest

from conftest import load_space, random_word
from qmtl.hypermetric import translate
from qmtl.translation import (
    candidate_hyperplanes,
    distinct_orbits,
    single_shot_k,
    translation_length_omega,
)

KNOWN = [
    ("dinf", "u v", "contact", Fraction(2)),
    ("dinf", "u v u v", "contact", Fraction(4)),
    ("dinf", "v u v", "contact", Fraction(0)),
    ("f2", "a b", "contact", Fraction(2)),
    ("f2", "a^2 b^-1", "contact", Fraction(2)),
    ("f2", "a", "contact", Fraction(0)),
    ("racg_path4", "a d", "crossing", Fraction(2)),
    ("racg_path4", "a d", "contact", Fraction(2)),
    ("raag_path3", "a c", "crossing", Fraction(0)),
    ("staircase_n3_w1_h1", "shift(1,1)", "crossing", Fraction(2)),
    ("staircase_n3_w1_h1", "shift(1,1)", "contact", Fraction(2, 3)),
    ("staircase_n4_w1_h1", "shift(1,1)", "contact", Fraction(1, 2)),
]


@pytest.mark.parametrize("name, word, mode, tau", KNOWN)
def test_known_translation_lengths(name, word, mode, tau):
    space = load_space(name)
    cert = translation_length_omega(space, space.isometry(word), mode)
    assert cert.tau == tau
    assert cert.elliptic == (tau == 0)
    if not cert.elliptic:
        assert cert.tau.denominator <= cert.witness_k <= cert.search_bound
        assert cert.witness_distance == cert.tau * cert.witness_k


def test_certificate_is_additive(f2):
    g = f2.isometry("a^2 b^-1")
    cert = translation_length_omega(f2, g, "contact", jmax=6)
    K, k = cert.witness_hyperplane, cert.witness_k
    base = f2.metric.displacement_value(K, g, k, "contact")
    for j in range(1, 7):
        assert f2.metric.displacement_value(K, g, j * k, "contact") == j * base


def test_conjugation_invariance(f2):
    rng = random.Random(99)
    g = f2.gp.parse("a b")
    for _ in range(5):
        c = random_word(f2.gp, rng, 3)
        h = f2.gp.mul_many(c, g, f2.gp.inv(c))
        cert = translation_length_omega(f2, f2.isometry(h), "contact")
        assert cert.tau == 2
        # the witness hyperplane lives on the conjugated axis
        K = cert.witness_hyperplane
        gi = f2.isometry(h)
        assert f2.metric.displacement_value(K, gi, cert.witness_k, "contact") == cert.witness_distance


def test_power_scales_tau(f2):
    base = translation_length_omega(f2, f2.isometry("a b"), "contact").tau
    cube = translation_length_omega(f2, f2.isometry("a b a b a b"), "contact").tau
    assert cube == 3 * base


def test_elliptic_certificate_hyperplane_is_periodic(path3):
    g = path3.isometry("a c a^-1")
    cert = translation_length_omega(path3, g, "crossing")
    assert cert.elliptic and cert.tau == 0
    K = cert.witness_hyperplane
    assert translate(path3.hs, g.power(cert.witness_k), K) == K


def test_statement_radius_agrees(dinf):
    g = dinf.isometry("u v")
    a = translation_length_omega(dinf, g, "contact")
    b = translation_length_omega(dinf, g, "contact", radius="statement")
    assert a.tau == b.tau
    with pytest.raises(ValueError):
        translation_length_omega(dinf, g, "contact", radius="huge")


def test_candidates_and_orbits():
    space = load_space("staircase_n3_w1_h1")
    g = space.isometry("shift(1,1)")
    cands, Q = candidate_hyperplanes(space, g, (0, 0), 1, 1)
    assert Q == 6
    assert len({c.fingerprint for c in cands}) == len(cands)
    reps = distinct_orbits(space, g, cands, 2 * Q + 1)
    # one vertical orbit and one horizontal orbit under the diagonal shift
    assert sorted(h.label for h in reps) == ["horizontal", "vertical"]
    assert reps[0] == cands[0]


def test_single_shot_k():
    assert single_shot_k(2, 1) == 24
    assert single_shot_k(3, 0) == 1
