"""Grayscale thresholding, fuzzy rule extraction and PSNR benchmarking.

Images are 2-D ``numpy.uint8`` arrays indexed ``[row, column]``.
"""

from ._core import (
    PgmError,
    add_noise,
    benchmark_csv,
    bimodal_phantom,
    binarize,
    compare,
    compute_threshold,
    extract,
    histogram,
    load_pgm,
    methods,
    save_pgm,
    threshold_report,
)

__all__ = [
    "PgmError",
    "add_noise",
    "benchmark_csv",
    "bimodal_phantom",
    "binarize",
    "compare",
    "compute_threshold",
    "extract",
    "histogram",
    "load_pgm",
    "methods",
    "save_pgm",
    "threshold_report",
]

__version__ = "0.1.0"
