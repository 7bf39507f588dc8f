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

"""Python bindings for the jqpie simulator core."""

from ._core import (
    CircuitError,
    ImageError,
    PipelineResult,
    SimError,
    classical_decode,
    closed_form_resources,
    dct2_block,
    export_stage_qasm,
    idct2_block,
    load_image,
    psnr,
    quant_table,
    run_sweep,
    save_pgm,
    simulate,
    sparsity_stats,
    ssim,
    state_prep_cost,
    state_prep_qasm,
    truncated_zigzag_map,
    zigzag_permutation,
)

__version__ = "0.1.0"

__all__ = [
    "CircuitError",
    "ImageError",
    "PipelineResult",
    "SimError",
    "classical_decode",
    "closed_form_resources",
    "dct2_block",
    "export_stage_qasm",
    "idct2_block",
    "load_image",
    "psnr",
    "quant_table",
    "run_sweep",
    "save_pgm",
    "simulate",
    "sparsity_stats",
    "ssim",
    "state_prep_cost",
    "state_prep_qasm",
    "truncated_zigzag_map",
    "zigzag_permutation",
]
