"""
Double-Sketch Recovery Lab
==========================

Monte Carlo experiments for recovering low-rank matrices and low-tubal-rank
tensors from two noisy sketches, one of the row space and one of the column space.

Purpose:
--------
Reproduces the noise-grid and tube-length experiments at desk scale, checks the
closed-form error bounds against empirical error frequencies and validates the
random-matrix facts the guarantees are built on.

Usage:
------
    python run.py matrix-exp --seed 7 --r 11 20 99 --out matrix.csv
    python run.py tensor-exp --seed 7 --n3 4 --n3-list 1 2 4 8 --format svg --out tensor.svg
    python run.py validate-lemmas --seed 7 --lemma all
    python run.py bound --variant robust --n1 100 --n2 100 --r 40 --r-low 10 \
        --delta1 0.05 --delta2 0.05 --epsilon 0.05 --z-norm 0.01 --z-tilde-norm 0.01

Architecture Components:
----------------------
- Core: seeded complex Gaussian / Haar sampling, LAPACK-backed SVD, QR, pseudo-inverse
- Tensors: t-product algebra and t-SVD through the mode-3 FFT
- Recovery: matrix double-sketch recovery (QR and naive forms) and its tensor version
- Entities: single-pass streaming sketch accumulator
- Analysis: error bound evaluators and Monte Carlo lemma validators
- Simulation: experiment specs, target generators, trial runners
- IO / UI: TNS1 tensor files, CSV/JSON result tables, SVG heatmaps
"""

import sys

from sketchlab.main import main

if __name__ == "__main__":
    sys.exit(main())
