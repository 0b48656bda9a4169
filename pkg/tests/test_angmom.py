import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Rational
from sympy.physics.wigner import wigner_3j as sym3j
from sympy.physics.wigner import wigner_6j as sym6j
from sympy.physics.wigner import wigner_9j as sym9j

from qls.angmom import AngularMomentumError, HalfInt, wigner3j, wigner6j, wigner9j


def h(t):
    """Twice-value integer to an exact Fraction."""
    return Fraction(t, 2)


def r(t):
    return Rational(t, 2)


def _sympy(fn, *args, **kw):
    # sympy raises on forbidden triads, where the symbol is zero
    try:
        return float(fn(*args, **kw))
    except ValueError:
        return 0.0


def _ok(x, y, z):
    return abs(x - y) <= z <= x + y and (x + y + z) % 2 == 0


def _rand_triad(rng, jmax2=8):
    while True:
        a, b = rng.randint(0, jmax2), rng.randint(0, jmax2)
        lo, hi = abs(a - b), min(a + b, jmax2)
        if lo <= hi:
            return a, b, rng.randrange(lo, hi + 1, 2)


def test_doc_values():
    assert wigner3j(1, 1, 0, 0, 0, 0).value == pytest.approx(-1 / math.sqrt(3), abs=1e-15)
    assert wigner6j(1, 1, 0, 1, 1, 0).value == pytest.approx(1 / 3, abs=1e-15)


def test_3j_against_sympy_random():
    rng = random.Random(11)
    checked = 0
    while checked < 300:
        a, b, c = _rand_triad(rng)
        ma = rng.randrange(-a, a + 1, 2)
        mb = rng.randrange(-b, b + 1, 2)
        mc = -ma - mb
        if abs(mc) > c:
            continue
        want = float(sym3j(r(a), r(b), r(c), r(ma), r(mb), r(mc)))
        got = wigner3j(h(a), h(b), h(c), h(ma), h(mb), h(mc)).value
        assert got == pytest.approx(want, abs=1e-14), (a, b, c, ma, mb, mc)
        checked += 1


def test_6j_against_sympy_random():
    rng = random.Random(12)
    for _ in range(200):
        a, b, c = _rand_triad(rng)
        d, e = rng.randint(0, 8), rng.randint(0, 8)
        f = rng.randint(0, 8)
        want = _sympy(sym6j, r(a), r(b), r(c), r(d), r(e), r(f))
        got = wigner6j(*(h(x) for x in (a, b, c, d, e, f))).value
        assert got == pytest.approx(want, abs=1e-14)


def test_9j_against_sympy_selected():
    rng = random.Random(13)
    n = 0
    while n < 40:
        a, b, c = _rand_triad(rng, 6)
        d, e, f = _rand_triad(rng, 6)
        g, hh = rng.randint(0, 6), rng.randint(0, 6)
        i = rng.randint(0, 6)
        want = _sympy(sym9j, *(r(x) for x in (a, b, c, d, e, f, g, hh, i)), prec=None)
        got = wigner9j(*(h(x) for x in (a, b, c, d, e, f, g, hh, i))).value
        assert got == pytest.approx(want, abs=1e-13)
        n += 1


def test_exact_form_reproduces_value():
    s = wigner6j(Fraction(1, 2), Fraction(1, 2), 1, 2, 2, Fraction(3, 2))
    rr, q = s.exact_form
    assert s.value == pytest.approx(float(rr) * math.sqrt(float(q)), rel=1e-15)


def test_3j_orthogonality_randomized():
    """sum_{m1 m2} (2 j3 + 1) (j1 j2 j3; m1 m2 m3)(j1 j2 j3'; m1 m2 m3') = delta delta."""
    rng = random.Random(21)
    for _ in range(25):
        a, b = rng.randint(0, 8), rng.randint(0, 8)
        for c in range(abs(a - b), a + b + 1, 2):
            for cp in range(abs(a - b), a + b + 1, 2):
                m3 = c if c == cp else min(c, cp)
                s = 0.0
                for ma in range(-a, a + 1, 2):
                    mb = -m3 - ma
                    if abs(mb) > b:
                        continue
                    s += (c + 1) * wigner3j(h(a), h(b), h(c), h(ma), h(mb), h(m3)).value * \
                        wigner3j(h(a), h(b), h(cp), h(ma), h(mb), h(m3)).value
                assert s == pytest.approx(1.0 if c == cp else 0.0, abs=1e-12)


def test_3j_second_orthogonality():
    rng = random.Random(22)
    for _ in range(15):
        a, b = rng.randint(0, 6), rng.randint(0, 6)
        pairs = [(ma, mb) for ma in range(-a, a + 1, 2) for mb in range(-b, b + 1, 2)]
        for (ma, mb), (ma2, mb2) in itertools.islice(itertools.product(pairs, pairs), 60):
            s = 0.0
            for c in range(abs(a - b), a + b + 1, 2):
                m3 = -ma - mb
                if m3 != -ma2 - mb2 or abs(m3) > c:
                    continue
                s += (c + 1) * wigner3j(h(a), h(b), h(c), h(ma), h(mb), h(m3)).value * \
                    wigner3j(h(a), h(b), h(c), h(ma2), h(mb2), h(m3)).value
            assert s == pytest.approx(1.0 if (ma, mb) == (ma2, mb2) else 0.0, abs=1e-12)


def test_6j_biedenharn_elliott_randomized():
    """sum_x (-1)^(S+x) (2x+1) {a b x; c d p}{c d x; e f q}{e f x; b a r} = {p q r; e a d}{p q r; f b c}."""
    rng = random.Random(31)
    def third(x, y, z, w):
        opts = [t for t in range(0, 9) if _ok(x, y, t) and _ok(z, w, t)]
        return rng.choice(opts) if opts else None

    checked = nonzero = 0
    while checked < 150:
        a, b, c, d, e, f = (rng.randint(0, 8) for _ in range(6))
        p, q, rr = third(a, d, c, b), third(c, f, e, d), third(e, a, b, f)
        if None in (p, q, rr):
            continue
        S2 = a + b + c + d + e + f + p + q + rr
        lhs = 0.0
        for x in range(0, 17):
            if (S2 + x) % 2:
                continue
            t = wigner6j(h(a), h(b), h(x), h(c), h(d), h(p)).value
            if t == 0:
                continue
            t *= wigner6j(h(c), h(d), h(x), h(e), h(f), h(q)).value
            t *= wigner6j(h(e), h(f), h(x), h(b), h(a), h(rr)).value
            lhs += (-1) ** ((S2 + x) // 2) * (x + 1) * t
        rhs = wigner6j(h(p), h(q), h(rr), h(e), h(a), h(d)).value * \
            wigner6j(h(p), h(q), h(rr), h(f), h(b), h(c)).value
        assert lhs == pytest.approx(rhs, abs=1e-12)
        checked += 1
        nonzero += rhs != 0
    assert nonzero >= 50


def test_6j_orthogonality():
    rng = random.Random(32)
    for _ in range(20):
        a, b, c, d = (rng.randint(0, 6) for _ in range(4))
        for f in range(0, 13):
            for f2 in range(0, 13):
                s = 0.0
                for x in range(0, 13):
                    s += (x + 1) * (f + 1) * wigner6j(h(a), h(b), h(x), h(c), h(d), h(f)).value * \
                        wigner6j(h(a), h(b), h(x), h(c), h(d), h(f2)).value
                want = 1.0 if f == f2 else 0.0
                # only meaningful where (a d f) and (c b f) are allowed triads
                ok = abs(a - d) <= f <= a + d and (a + d + f) % 2 == 0 and \
                    abs(c - b) <= f <= c + b and (c + b + f) % 2 == 0
                ok2 = abs(a - d) <= f2 <= a + d and (a + d + f2) % 2 == 0 and \
                    abs(c - b) <= f2 <= c + b and (c + b + f2) % 2 == 0
                if ok and ok2 and (a + b) % 2 == (c + d) % 2:
                    assert s == pytest.approx(want, abs=1e-12)


@pytest.mark.parametrize("args", [
    (1, 1, 1, 1, 0, 0),  # m sum nonzero
    (1, 1, 3, 0, 0, 0),  # triangle
    (1, 1, 1, 0, 0, 0),  # odd J with all m = 0
    (2, 1, 1, 3, -2, -1),  # |m| > j
])
def test_3j_selection_zeros_exact(args):
    s = wigner3j(*args)
    assert s.value == 0.0
    assert s.is_zero
    assert s.exact_form[0] == 0


def test_6j_9j_triad_zeros_exact():
    assert wigner6j(1, 1, 3, 1, 1, 1).value == 0.0
    assert wigner6j(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), 1, 1, 1).value == 0.0
    assert wigner9j(1, 1, 3, 1, 1, 1, 1, 1, 1).value == 0.0


def test_parity_error_and_negative_j():
    with pytest.raises(AngularMomentumError):
        wigner3j(1, 1, 1, Fraction(1, 2), 0, Fraction(-1, 2))
    with pytest.raises(AngularMomentumError):
        wigner6j(-1, 1, 1, 1, 1, 1)
    with pytest.raises(AngularMomentumError):
        wigner3j(0.3, 1, 1, 0, 0, 0)
    with pytest.raises(AngularMomentumError):
        wigner3j(True, 1, 1, 0, 0, 0)


def test_argument_types_agree():
    a = wigner3j(Fraction(3, 2), 1, Fraction(1, 2), Fraction(1, 2), 0, Fraction(-1, 2)).value
    b = wigner3j(1.5, 1, 0.5, 0.5, 0, -0.5).value
    c = wigner3j(HalfInt(3), HalfInt(2), HalfInt(1), HalfInt(1), HalfInt(0), HalfInt(-1)).value
    assert a == b == c


def test_halfint_arithmetic():
    x = HalfInt.of(Fraction(3, 2))
    assert str(x) == "3/2" and str(HalfInt(4)) == "2"
    assert (x + Fraction(1, 2)) == HalfInt(4)
    assert (-x).value == -1.5
    assert not x.is_integer


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8), st.data())
def test_3j_symmetries(a, b, c, data):
    ma = data.draw(st.sampled_from(range(-a, a + 1, 2)))
    mb = data.draw(st.sampled_from(range(-b, b + 1, 2)))
    mc = -ma - mb
    if abs(mc) > c or (c - mc) % 2:
        return
    v = wigner3j(h(a), h(b), h(c), h(ma), h(mb), h(mc)).value
    sign = -1 if ((a + b + c) // 2) % 2 and (a + b + c) % 2 == 0 else 1
    # cyclic permutation invariance
    assert wigner3j(h(b), h(c), h(a), h(mb), h(mc), h(ma)).value == pytest.approx(v, abs=1e-14)
    # odd permutation and m -> -m carry (-1)^{j1+j2+j3}
    if (a + b + c) % 2 == 0:
        assert wigner3j(h(b), h(a), h(c), h(mb), h(ma), h(mc)).value == pytest.approx(sign * v, abs=1e-14)
        assert wigner3j(h(a), h(b), h(c), h(-ma), h(-mb), h(-mc)).value == pytest.approx(sign * v, abs=1e-14)
