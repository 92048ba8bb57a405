import numpy as np
import pytest

from polarbench.channels import bsc, likelihood_rows_binary, transmit
from polarbench.kernels import CodeSpec, encode, kernel_linear
from polarbench.llrops import LlrContradiction
from polarbench.oracle import ml_decode
from polarbench.sc import UnsupportedCodeError, decode_sc_arikan
from polarbench.scl import Crc, decode_scl, decode_scl_arikan

from conftest import G4, random_llr, spec_all_free


def _bytes_to_bits(data: bytes) -> list[int]:
    return [(byte >> k) & 1 for byte in data for k in range(7, -1, -1)]


def test_crc8_standard_check_value():
    # CRC-8 with poly 0x07, zero init, no reflection: crc("123456789") = 0xF4
    crc = Crc()
    out = crc.compute(_bytes_to_bits(b"123456789"))
    assert len(out) == 8
    assert int("".join(map(str, out)), 2) == 0xF4


def test_crc_attach_check_roundtrip(rng):
    crc = Crc()
    for _ in range(20):
        data = rng.integers(0, 2, 24)
        payload = crc.attach(data)
        assert len(payload) == 32
        assert crc.check(payload)
        bad = payload.copy()
        flip = rng.integers(0, 32)
        bad[flip] ^= 1
        assert not crc.check(bad)


def test_crc_check_short_payload():
    assert not Crc().check([1, 0, 1])


def test_scl_list1_equals_sc(arikan, rng):
    spec = CodeSpec(kernel=arikan, m=4, frozen={i: 0 for i in range(7)})
    for _ in range(25):
        llr = random_llr(rng, 16)
        ref = decode_sc_arikan(spec, llr)
        res = decode_scl_arikan(spec, llr, 1)
        assert np.array_equal(res.u_hat, ref.u_hat)
        assert np.array_equal(res.x_hat, ref.x_hat)


def test_scl_saturated_equals_ml(arikan, rng):
    # with list_size >= q^K nothing is ever discarded, so the best survivor
    # is the maximum-likelihood word
    spec = CodeSpec(kernel=arikan, m=3, frozen={0: 0, 1: 0, 2: 0, 4: 0})
    for _ in range(25):
        rows = likelihood_rows_binary(random_llr(rng, 8))
        res = decode_scl(spec, rows, 16)
        u_ml, x_ml, _ = ml_decode(spec, rows)
        assert np.array_equal(res.u_hat, u_ml)
        assert np.array_equal(res.x_hat, x_ml)


def test_scl_probs_fixture(arikan):
    # two survivors with likelihood ratio 7:3 split the posterior 0.7 / 0.3
    spec = CodeSpec(kernel=arikan, m=1, frozen={0: 0})
    rows = np.array([[0.7, 0.3], [1.0, 1.0]])
    res = decode_scl(spec, rows, 2)
    assert res.u_list.tolist() == [[0, 0], [0, 1]]
    assert res.probs == pytest.approx([0.7, 0.3], abs=1e-12)
    assert res.best == 0


def test_scl_scores_sorted_and_normalized(arikan, rng):
    spec = spec_all_free(arikan, 3)
    res = decode_scl_arikan(spec, random_llr(rng, 8), 8)
    assert len(res.log_scores) == 8
    assert np.all(np.diff(res.log_scores) <= 1e-15)
    assert res.probs.sum() == pytest.approx(1.0)
    assert res.probs[0] == res.probs.max()
    # every listed word re-encodes consistently
    for u, x in zip(res.u_list, res.x_list):
        assert np.array_equal(encode(spec, u), x)


def test_scl_list_grows_with_free_decisions(arikan, rng):
    # occupancy doubles per free binary decision until it hits the cap
    spec = spec_all_free(arikan, 3)
    res = decode_scl_arikan(spec, random_llr(rng, 8), 4)
    assert res.u_list.shape == (4, 8)
    res_small = decode_scl_arikan(spec, random_llr(rng, 8), 3)
    assert res_small.u_list.shape == (3, 8)


def test_scl_ops_counter_monotone(arikan, rng):
    spec = CodeSpec(kernel=arikan, m=5, frozen={i: 0 for i in range(16)})
    llr = random_llr(rng, 32)
    ops = [decode_scl_arikan(spec, llr, m).ops for m in (1, 4, 8)]
    assert ops[0] > 0
    assert ops[0] < ops[1] < ops[2]


def test_scl_crc_filter_picks_first_passing(arikan):
    crc = Crc(width=2, poly=0x3)
    # N=4 all free, payload = 2 data bits + 2 crc bits
    spec = spec_all_free(arikan, 2)
    data = [1, 0]
    u = crc.attach(data)
    x = encode(spec, u)
    llr = np.where(x == 0, 4.0, -4.0).astype(float)
    res = decode_scl_arikan(spec, llr, 4, crc=crc)
    assert crc.check(res.u_hat)
    assert np.array_equal(res.u_hat, u)


def test_scl_crc_fallback_row_zero(arikan, rng):
    # a CRC no survivor satisfies: best falls back to the top-scoring row
    crc = Crc(width=8, poly=0x07)
    spec = spec_all_free(arikan, 1)  # K=2 < crc width, check always fails
    res = decode_scl_arikan(spec, random_llr(rng, 2), 2, crc=crc)
    assert res.best == 0


def test_scl_crc_filter_skips_failing_rows(arikan):
    # frozen fixture: the three best-scoring survivors all fail the CRC,
    # so filtering walks down to row 3
    crc = Crc(width=2, poly=0x3)
    spec = spec_all_free(arikan, 2)
    llr = np.array(
        [0.18859533164008996, -0.19815729493695283, 0.9606339756649231, 0.15735017572955956]
    )
    res = decode_scl_arikan(spec, llr, 4, crc=crc)
    assert res.u_list.tolist() == [[1, 0, 1, 0], [0, 1, 0, 1], [0, 0, 1, 0], [0, 0, 0, 0]]
    assert not crc.check(res.u_list[0])
    assert res.best == 3
    assert crc.check(res.u_hat)


def test_scl_end_to_end_crc_recovery(arikan):
    # CRC-aided list decoding over a noisy channel: decoded payload passes
    # the check in the overwhelming majority of frames
    crc = Crc()
    spec = CodeSpec(kernel=arikan, m=5, frozen={i: 0 for i in range(16)})
    info = spec.info_indices()
    rng = np.random.default_rng(99)
    ch = bsc(0.02)
    hits = 0
    for _ in range(30):
        payload = crc.attach(rng.integers(0, 2, 8))
        u = spec.assemble(payload)
        x = encode(spec, u)
        llr = transmit(ch, x, rng)
        res = decode_scl_arikan(spec, llr, 8, crc=crc)
        if np.array_equal(res.u_hat[info], payload):
            hits += 1
    assert hits >= 27


def test_scl_gf4_saturated_equals_ml(rng):
    k = kernel_linear([[1, 0], [1, 1]], q=4)
    spec = CodeSpec(kernel=k, m=2, frozen={0: 0, 1: 0})
    for _ in range(10):
        rows = rng.random((4, 4)) + 0.02
        res = decode_scl(spec, rows, 16)
        u_ml, _, _ = ml_decode(spec, rows)
        assert np.array_equal(res.u_hat, u_ml)


def test_scl_glue_saturated_equals_ml(rng):
    k = kernel_linear(G4, q=2, glue=[(0, 1), (2,), (3,)])
    spec = CodeSpec(kernel=k, m=1, frozen={0: 0})
    for _ in range(10):
        rows = likelihood_rows_binary(random_llr(rng, 4))
        res = decode_scl(spec, rows, 8)
        u_ml, _, _ = ml_decode(spec, rows)
        assert np.array_equal(res.u_hat, u_ml)


def test_scl_validation(arikan, k4):
    spec = spec_all_free(arikan, 2)
    with pytest.raises(ValueError):
        decode_scl(spec, np.ones((4, 2)), 0)
    with pytest.raises(ValueError):
        decode_scl(spec, np.ones((3, 2)), 2)
    glue_k = kernel_linear(G4, q=2, glue=[(0, 1), (2,), (3,)])
    with pytest.raises(UnsupportedCodeError):
        decode_scl(CodeSpec(kernel=glue_k, m=2, frozen={}), np.ones((16, 2)), 2)
    with pytest.raises(ValueError):
        decode_scl_arikan(spec_all_free(k4, 1), np.zeros(4), 2)
    with pytest.raises(ValueError):
        decode_scl(
            CodeSpec(kernel=kernel_linear([[1, 0], [1, 1]], q=4), m=1, frozen={}),
            np.ones((2, 4)),
            2,
            crc=Crc(),
        )


def test_scl_contradiction(arikan):
    spec = spec_all_free(arikan, 1)
    with pytest.raises(LlrContradiction):
        decode_scl(spec, np.array([[0.0, 0.0], [1.0, 1.0]]), 2)
