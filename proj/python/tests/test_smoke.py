# Copyright 2026 The jqpie Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import csv
import io
import math

import numpy as np
import pytest

import jqpie


def smooth(h, w):
    y, x = np.mgrid[0:h, 0:w]
    return np.round(127.5 + 100 * np.sin(x / 5.0) * np.cos(y / 7.0))


def test_dct_roundtrip():
    rng = np.random.default_rng(1)
    b = rng.uniform(0, 255, (8, 8))
    np.testing.assert_allclose(jqpie.idct2_block(jqpie.dct2_block(b)), b, atol=1e-9)


def test_zigzag_is_permutation():
    zz = jqpie.zigzag_permutation()
    assert sorted(zz) == list(range(64))
    assert zz[:3] == [0, 1, 8]


def test_qpie_state_is_normalized_pixels():
    img = smooth(8, 8)
    res = jqpie.simulate(img, method="qpie")
    expected = img.T.reshape(-1) / np.linalg.norm(img)
    np.testing.assert_allclose(res.state.real, expected, atol=1e-10)
    assert res.success_probability == pytest.approx(1.0)


def test_jqpie_r6_matches_classical_jpeg():
    img = smooth(16, 16)
    res = jqpie.simulate(img, method="jqpie", r=6)
    ref = jqpie.classical_decode(img, mode="jpeg", r=6)
    np.testing.assert_allclose(res.reconstructed, ref, atol=1e-8)
    assert 0.0 < res.success_probability <= 1.0
    assert np.linalg.norm(res.state) == pytest.approx(1.0)


def test_qf_jqpie_gate_exact_matches_operator():
    img = smooth(16, 8)
    a = jqpie.simulate(img, method="qf_jqpie", r=3, backend="operator")
    b = jqpie.simulate(img, method="qf_jqpie", r=3, backend="gate_exact")
    assert abs(np.vdot(a.state, b.state)) == pytest.approx(1.0, abs=1e-9)
    np.testing.assert_allclose(
        a.reconstructed, jqpie.classical_decode(img, mode="qf_oracle", r=3), atol=1e-8
    )


def test_raster_state_matches_qpie():
    img = smooth(16, 16)
    qf = jqpie.simulate(img, method="qf_jqpie", r=6)
    qp = jqpie.simulate(img, method="qpie")
    assert abs(np.vdot(qf.raster_state(), qp.state)) == pytest.approx(1.0, abs=1e-9)


def test_closed_form_resources():
    res = jqpie.closed_form_resources(4, 4, 3)
    stages = res["breakdown"]
    assert stages["state_prep"]["cx_count"] == 2**5 - 2
    assert stages["inverse_quantization"]["cx_count"] == 64
    assert stages["inverse_qdct"]["cx_count"] == 36
    assert res["cx_count"] == sum(s["cx_count"] for s in stages.values())


def test_metrics():
    img = smooth(16, 16)
    assert math.isinf(jqpie.psnr(img, img))
    assert jqpie.ssim(img, img) == pytest.approx(1.0)
    noisy = np.clip(img + 5, 0, 255)
    assert 20 < jqpie.psnr(img, noisy) < 40


def test_pgm_roundtrip_and_sweep(tmp_path):
    img = smooth(16, 16)
    path = tmp_path / "a.pgm"
    jqpie.save_pgm(img, path)
    np.testing.assert_array_equal(jqpie.load_image(path), img)

    text, summary = jqpie.run_sweep([tmp_path], methods=["jqpie"], r_set=[5, 2], threads=1)
    rows = list(csv.DictReader(io.StringIO(text)))
    assert [int(r["r"]) for r in rows] == [5, 2]
    assert all(r["error"] == "" for r in rows)
    assert [s["image"] for s in summary["images"]] == ["a.pgm"]


def test_qasm_export():
    q = jqpie.export_stage_qasm("inverse_quantization")
    assert q.startswith("OPENQASM 3")
    assert q.count("cx ") == 64


def test_bad_input_raises():
    with pytest.raises(ValueError):
        jqpie.simulate(np.zeros((8, 8)), method="qpie")
    with pytest.raises(ValueError):
        jqpie.simulate(smooth(8, 8), method="nope")
