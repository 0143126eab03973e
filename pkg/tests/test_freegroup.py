from hypothesis import given, strategies as st

from torellicore import freegroup as fg

letter = st.tuples(st.sampled_from("abc"), st.sampled_from((-1, 1)))
word = st.lists(letter, max_size=12).map(fg.reduce)


def is_reduced(w):
    return all(not (x[0] == y[0] and x[1] == -y[1]) for x, y in zip(w, w[1:]))


@given(word, word, word)
def test_group_laws(u, v, w):
    assert is_reduced(fg.mul(u, v))
    assert fg.mul(fg.mul(u, v), w) == fg.mul(u, fg.mul(v, w))
    assert fg.mul(u, fg.inv(u)) == ()
    assert fg.inv(fg.mul(u, v)) == fg.mul(fg.inv(v), fg.inv(u))


@given(word, word)
def test_commutator_and_conjugate(g, h):
    assert fg.commutator(g, h) == fg.mul(fg.inv(g), fg.inv(h), g, h)
    assert fg.conjugate(h, g) == fg.mul(fg.inv(g), h, g)
    assert all(v == 0 for v in fg.exponent_sums(fg.commutator(g, h)).values())


@given(word, st.integers(-4, 4))
def test_power_exponent_sums(w, k):
    s, sk = fg.exponent_sums(w), fg.exponent_sums(fg.power(w, k))
    assert all(sk.get(n, 0) == k * s.get(n, 0) for n in "abc")


@given(word)
def test_collection_identity(w):
    order = {"a": 0, "b": 1, "c": 2}
    rest, items = fg.collect(w, order.__getitem__)
    assert [order[n] for n, _ in rest] == sorted(order[n] for n, _ in rest)
    parts = [fg.conjugate(fg.commutator((y,), (x,)), s) for y, x, s in items]
    assert fg.mul(rest, *parts) == fg.reduce(w)
    nonzero = lambda d: {k: v for k, v in d.items() if v}  # noqa: E731
    assert nonzero(fg.exponent_sums(rest)) == nonzero(fg.exponent_sums(w))


def test_letters_and_substitute():
    w = fg.letters([("a", 2), ("b", -1), ("b", 1), ("a", -1)])
    assert w == (("a", 1),)
    img = fg.substitute((("z", 1), ("z", -1), ("a", 1)), {"z": (("a", 1), ("b", 1))})
    assert img == (("a", 1),)
    assert fg.project((("a", 1), ("b", 1), ("a", -1)), "a") == ()
    assert fg.to_str(()) == "1" and fg.to_str((("a", -1),)) == "a^-1"
