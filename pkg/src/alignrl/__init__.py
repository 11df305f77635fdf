"""alignrl: temporal-alignment history representations for small POMDPs.

A self-contained laboratory: a numpy-backed autodiff core, fast grayscale
memory-benchmark environments, a contrastive encoder that aligns
temporally-close observations, a dual-branch (instantaneous + history)
actor-critic trained with clipped-surrogate policy optimization, and a CLI
for training, evaluation, comparison, and embedding export.
"""

__version__ = "0.1.0"
