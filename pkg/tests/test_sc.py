import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polarbench.channels import likelihood_rows_binary
from polarbench.kernels import (
    CodeSpec,
    encode,
    encode_unchecked,
    kernel_arikan,
    kernel_linear,
)
from polarbench.llrops import LlrContradiction
from polarbench.oracle import marginal_llr_bruteforce
from polarbench.sc import (
    UnsupportedCodeError,
    decode_sc_arikan,
    decode_sc_general,
    kernel_marginal_llr,
    scores_to_llr,
)

from conftest import G4, random_llr, spec_all_free


def test_sc_n4_trace_fixture(arikan):
    # frozen fixture: successive decision LLRs for lambda = (1.2, -0.7, 0.4, 2.1),
    # all coordinates free; cross-checked against exhaustive marginals
    spec = spec_all_free(arikan, 2)
    res = decode_sc_arikan(spec, np.array([1.2, -0.7, 0.4, 2.1]), trace=True)
    assert list(res.u_hat) == [1, 0, 1, 0]
    assert list(res.x_hat) == [0, 1, 0, 0]
    want = [-0.055766495865, 0.676413479009, -1.474714634122, 4.4]
    assert res.decision_llrs == pytest.approx(want, abs=1e-10)


def test_sc_matches_bruteforce_marginals(arikan, rng):
    # each successive-cancellation LLR equals the exact marginal given the
    # decisions made so far
    spec = CodeSpec(kernel=arikan, m=3, frozen={0: 0, 1: 0, 4: 1})
    for _ in range(5):
        llr = random_llr(rng, 8)
        res = decode_sc_arikan(spec, llr, trace=True)
        rows = likelihood_rows_binary(llr)
        decided = {}
        for i in range(8):
            want = marginal_llr_bruteforce(spec, rows, i, decided)
            assert res.decision_llrs[i] == pytest.approx(want[1], abs=1e-9)
            decided[i] = int(res.u_hat[i])
        assert np.array_equal(res.x_hat, encode_unchecked(arikan, res.u_hat))


def test_sc_respects_frozen(arikan, rng):
    spec = CodeSpec(kernel=arikan, m=3, frozen={0: 0, 2: 1, 5: 1})
    res = decode_sc_arikan(spec, random_llr(rng, 8))
    assert res.u_hat[0] == 0
    assert res.u_hat[2] == 1
    assert res.u_hat[5] == 1


def test_sc_noiseless_roundtrip(arikan, rng):
    spec = CodeSpec(kernel=arikan, m=4, frozen={i: 0 for i in range(8)})
    u = spec.assemble(rng.integers(0, 2, 8))
    x = encode(spec, u)
    llr = np.where(x == 0, 25.0, -25.0).astype(float)
    res = decode_sc_arikan(spec, llr)
    assert np.array_equal(res.u_hat, u)
    assert np.array_equal(res.x_hat, x)
    # min-sum agrees on clean evidence
    res_ms = decode_sc_arikan(spec, llr, min_sum=True)
    assert np.array_equal(res_ms.u_hat, u)


def test_sc_genie_mode(arikan, rng):
    spec = spec_all_free(arikan, 3)
    u = rng.integers(0, 2, 8)
    x = encode_unchecked(arikan, u)
    llr = np.where(x == 0, 30.0, -30.0).astype(float)
    res = decode_sc_arikan(spec, llr, genie_u=u)
    assert res.genie_errors is not None
    assert not res.genie_errors.any()
    # corrupt one observation hard: the genie keeps later stages on track,
    # errors are recorded but u_hat equals the genie word
    llr_bad = llr.copy()
    llr_bad[0] = -llr_bad[0]
    res_bad = decode_sc_arikan(spec, llr_bad, genie_u=u)
    assert np.array_equal(res_bad.u_hat, u)


def test_sc_contradiction_raises(arikan):
    # x0 surely 1, x1 surely 0, but u0 frozen to 0 makes them irreconcilable
    spec = CodeSpec(kernel=arikan, m=1, frozen={0: 0})
    with pytest.raises(LlrContradiction):
        decode_sc_arikan(spec, np.array([-np.inf, np.inf]))


def test_sc_input_validation(arikan, k4):
    spec = spec_all_free(arikan, 2)
    with pytest.raises(ValueError):
        decode_sc_arikan(spec, np.zeros(3))
    with pytest.raises(ValueError):
        decode_sc_arikan(spec_all_free(k4, 1), np.zeros(4))  # not the 2x2 kernel


def test_scores_to_llr_conventions():
    out = scores_to_llr(np.array([1.0, 0.5, 0.0, 2.0]))
    assert out[0] == 0.0
    assert out[1] == pytest.approx(np.log(2.0))
    assert out[2] == np.inf
    assert out[3] == pytest.approx(-np.log(2.0))
    out2 = scores_to_llr(np.array([0.0, 1.0]))
    assert out2[1] == -np.inf
    with pytest.raises(LlrContradiction):
        scores_to_llr(np.array([0.0, 0.0]))


def test_general_matches_arikan(arikan, rng):
    spec = CodeSpec(kernel=arikan, m=3, frozen={0: 0, 1: 0, 2: 0})
    for _ in range(10):
        llr = random_llr(rng, 8)
        ref = decode_sc_arikan(spec, llr)
        gen = decode_sc_general(spec, likelihood_rows_binary(llr))
        assert np.array_equal(gen.u_hat, ref.u_hat)
        assert np.array_equal(gen.x_hat, ref.x_hat)


def test_general_llr_values_match_arikan(arikan, rng):
    spec = spec_all_free(arikan, 2)
    llr = random_llr(rng, 4)
    ref = decode_sc_arikan(spec, llr, trace=True)
    gen = decode_sc_general(spec, likelihood_rows_binary(llr), trace=True)
    for (idx, width, vec), want in zip(gen.decisions, ref.decision_llrs):
        assert width == 1
        assert vec[1] == pytest.approx(want, abs=1e-9)


def test_general_binary_4x4_matches_bruteforce(k4, rng):
    # exact marginals are exponential in N; one word and the first half of
    # the decisions already exercise every prep depth
    spec = CodeSpec(kernel=k4, m=2, frozen={0: 0, 1: 0, 3: 1})
    llr = random_llr(rng, 16)
    rows = likelihood_rows_binary(llr)
    res = decode_sc_general(spec, rows, trace=True)
    decided = {}
    for idx, width, vec in res.decisions[:8]:
        assert width == 1
        want = marginal_llr_bruteforce(spec, rows, idx, decided)
        assert vec[1] == pytest.approx(want[1], abs=1e-8)
        decided[idx] = int(res.u_hat[idx])


def test_general_gf4_matches_bruteforce(rng):
    k = kernel_linear([[1, 0], [1, 1]], q=4)
    spec = CodeSpec(kernel=k, m=2, frozen={0: 0})
    for _ in range(3):
        rows = rng.random((4, 4)) + 0.01
        res = decode_sc_general(spec, rows, trace=True)
        decided = {}
        for idx, width, vec in res.decisions:
            want = marginal_llr_bruteforce(spec, rows, idx, decided)
            finite = np.isfinite(want)
            assert np.allclose(vec[finite], want[finite], atol=1e-8)
            decided[idx] = int(res.u_hat[idx])
        assert np.array_equal(res.x_hat, encode_unchecked(k, res.u_hat))


def test_general_noiseless_gf4(rng):
    k = kernel_linear([[1, 0], [1, 1]], q=4)
    spec = CodeSpec(kernel=k, m=3, frozen={i: 0 for i in range(4)})
    u = spec.assemble(rng.integers(0, 4, 4))
    x = encode(spec, u)
    rows = np.full((8, 4), 1e-9)
    rows[np.arange(8), x] = 1.0
    res = decode_sc_general(spec, rows)
    assert np.array_equal(res.u_hat, u)


def test_glue_group_joint_decision(rng):
    # 4x4 binary kernel with inputs 0,1 glued: they are decided jointly at m=1
    k = kernel_linear(G4, q=2, glue=[(0, 1), (2,), (3,)])
    spec = CodeSpec(kernel=k, m=1, frozen={})
    llr = random_llr(rng, 4, scale=3.0)
    rows = likelihood_rows_binary(llr)
    res = decode_sc_general(spec, rows, trace=True)
    widths = [w for _, w, _ in res.decisions]
    assert widths == [2, 1, 1]
    # the joint decision maximizes the exact group marginal
    want = kernel_marginal_llr(k, rows, 0, ())
    got_vec = res.decisions[0][2]
    assert np.allclose(got_vec, want, atol=1e-12)
    joint = 2 * res.u_hat[0] + res.u_hat[1]
    assert joint == np.argmax(-want + (want == 0) * 0)  # max score = min llr; 0 wins ties


def test_glue_group_noiseless_roundtrip(rng):
    k = kernel_linear(G4, q=2, glue=[(0, 1), (2,), (3,)])
    spec = CodeSpec(kernel=k, m=1, frozen={0: 0})
    u = spec.assemble(rng.integers(0, 2, 3))
    x = encode(spec, u)
    rows = likelihood_rows_binary(np.where(x == 0, 28.0, -28.0).astype(float))
    res = decode_sc_general(spec, rows)
    assert np.array_equal(res.u_hat, u)


def test_glue_beyond_depth_one_unsupported():
    k = kernel_linear(G4, q=2, glue=[(0, 1), (2,), (3,)])
    spec = CodeSpec(kernel=k, m=2, frozen={})
    with pytest.raises(UnsupportedCodeError):
        decode_sc_general(spec, np.ones((16, 2)))


def test_general_genie_mode(k4, rng):
    spec = spec_all_free(k4, 2)
    u = rng.integers(0, 2, 16)
    x = encode_unchecked(k4, u)
    rows = likelihood_rows_binary(np.where(x == 0, 30.0, -30.0).astype(float))
    res = decode_sc_general(spec, rows, genie_u=u)
    assert not res.genie_errors.any()
    assert np.array_equal(res.u_hat, u)


def test_general_contradiction_raises(arikan):
    spec = CodeSpec(kernel=arikan, m=1, frozen={0: 0})
    rows = np.array([[0.0, 1.0], [1.0, 0.0]])
    with pytest.raises(LlrContradiction):
        decode_sc_general(spec, rows)


def test_general_input_validation(arikan):
    spec = spec_all_free(arikan, 2)
    with pytest.raises(ValueError):
        decode_sc_general(spec, np.ones((3, 2)))
    with pytest.raises(ValueError):
        decode_sc_general(spec, -np.ones((4, 2)))


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.data())
def test_sc_noiseless_property(m, data):
    arikan = kernel_arikan()
    spec = spec_all_free(arikan, m)
    n = spec.n
    u = np.array(data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n)))
    x = encode_unchecked(arikan, u)
    llr = np.where(x == 0, 20.0, -20.0).astype(float)
    res = decode_sc_arikan(spec, llr)
    assert np.array_equal(res.u_hat, u)
