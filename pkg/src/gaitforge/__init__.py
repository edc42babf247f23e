"""gaitforge: data-driven bipedal gait modeling and push recovery.

Subpackages cover the full pipeline: polynomial gait generation
(:mod:`gaitforge.gait_model`), the rocking-block walking abstraction
(:mod:`gaitforge.rocking_block`), cellular-automaton state prediction
(:mod:`gaitforge.gait_ca`), sensor ingestion and kinematics
(:mod:`gaitforge.capture`), EMD-based features (:mod:`gaitforge.features`),
classifiers and validation (:mod:`gaitforge.learn`), and the fuzzy
push-recovery controller (:mod:`gaitforge.push_fuzzy`). The ``gaitforge``
command drives everything in batch.
"""

__version__ = "0.1.0"
