import os
from pathlib import Path

import numpy as np
import pytest

from wavecoh import mix64

# Real-dataset discovery: tests that reproduce published numbers need the
# two source files locally (see README "Data" for the fetch commands).
DATA_DIR = Path(os.environ.get("WAVECOH_DATA", Path(__file__).resolve().parent.parent / "data"))
TSI_FILE = DATA_DIR / "nrl2_tsi_P1Y.csv"
AMO_FILE = DATA_DIR / "wang2017a_mv-amo.txt"

requires_tsi = pytest.mark.skipif(
    not TSI_FILE.exists(), reason=f"irradiance dataset not present at {TSI_FILE}"
)
requires_amo = pytest.mark.skipif(
    not AMO_FILE.exists(), reason=f"ocean-index dataset not present at {AMO_FILE}"
)


def seeded_noise(n, *key):
    """Deterministic standard-normal samples keyed by integers."""
    return np.random.default_rng(mix64(*key)).normal(size=n)
