"""Embedded reference datasets.

``pyke1965``: inter-occurrence times, in days, of British mining
accidents, listed in order of occurrence (n = 31).

``barlow1975``: failure times for right rear brakes on D9G-66A
Caterpillar tractors (n = 107).
"""

from __future__ import annotations

import numpy as np

PYKE1965 = (
    20, 106, 14, 78, 94, 20, 21, 136, 56, 232, 89, 33, 181, 424, 14,
    430, 155, 205, 117, 253, 86, 260, 213, 58, 276, 263, 246, 341, 1105,
    50, 136,
)

BARLOW1975 = (
    56, 83, 104, 116, 244, 305, 429, 452, 453, 503, 552, 614, 661, 673,
    683, 685, 753, 763, 806, 834, 838, 862, 897, 904, 981, 1007, 1008,
    1049, 1060, 1107, 1125, 1141, 1153, 1154, 1193, 1201, 1253, 1313,
    1329, 1347, 1454, 1464, 1490, 1491, 1532, 1549, 1568, 1574, 1586,
    1599, 1608, 1723, 1769, 1795, 1927, 1957, 2005, 2010, 2016, 2022,
    2037, 2065, 2096, 2139, 2150, 2156, 2160, 2190, 2210, 2220, 2248,
    2285, 2325, 2337, 2351, 2437, 2454, 2546, 2565, 2584, 2624, 2675,
    2701, 2755, 2877, 2879, 2922, 2986, 3092, 3160, 3185, 3191, 3439,
    3617, 3685, 3756, 3826, 3995, 4007, 4159, 4300, 4487, 5074, 5579,
    5623, 6869, 7739,
)

DATASETS = {"pyke1965": PYKE1965, "barlow1975": BARLOW1975}

_EXPECTED_LENGTHS = {"pyke1965": 31, "barlow1975": 107}

for _name, _values in DATASETS.items():
    if len(_values) != _EXPECTED_LENGTHS[_name]:
        raise RuntimeError(f"embedded dataset {_name} has wrong length")


def get_dataset(name):
    """Embedded dataset values as a float array."""
    try:
        return np.asarray(DATASETS[name], dtype=float)
    except KeyError:
        raise KeyError(
            f"unknown dataset {name!r}; available: {sorted(DATASETS)}"
        ) from None
