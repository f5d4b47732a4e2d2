#!/usr/bin/env python3
"""Generate the non-H2 FCIDUMP fixtures used by the test suite.

* hf_like.fcidump: a 2-spatial-orbital CAS(2,2)-style integral set chosen
  so that (i) the ground state is a correlated 2-electron singlet,
  (ii) the single-angle Trotter error changes sign along the Givens path,
  and (iii) the eta=2 combined energy stays between its constituents at
  every sweep angle.  The numbers were found by a randomized parameter
  scan filtered on those properties; they are frozen here verbatim.

* model3.fcidump / model4.fcidump: random-integral 3- and 4-spatial-
  orbital models with chemistry-like scales (diagonally dominant negative
  one-body part, 8-fold symmetric repulsion-like two-body part), fixed
  seeds.
"""
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from trotterkit.integrals import FcidumpData, write_fcidump

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

HF_LIKE = {
    "h": {(0, 0): -1.07619, (1, 1): 0.357632},
    "g": {  # chemists' (ij|kl), canonical keys
        (0, 0, 0, 0): 1.010826,
        (1, 1, 1, 1): 0.763955,
        (1, 1, 0, 0): 0.155229,
        (1, 0, 1, 0): 0.079569,
    },
    "core": 0.0,
}


def write_hf_like() -> None:
    data = FcidumpData(n_spatial=2, n_electrons=2, ms2=0, core_energy=HF_LIKE["core"])
    data.one_body.update(HF_LIKE["h"])
    data.two_body.update(HF_LIKE["g"])
    (FIXTURES / "hf_like.fcidump").write_text(write_fcidump(data))


def random_model(m: int, seed: int, core: float) -> FcidumpData:
    rng = np.random.default_rng(seed)
    data = FcidumpData(n_spatial=m, n_electrons=m, ms2=0, core_energy=core)
    for i in range(m):
        for j in range(i + 1):
            if i == j:
                data.one_body[(i, i)] = -1.0 - rng.uniform(0.0, 1.0)
            else:
                data.one_body[(i, j)] = rng.uniform(-0.2, 0.2)
    seen = set()
    for i in range(m):
        for j in range(m):
            for k in range(m):
                for l in range(m):
                    orbit = sorted(
                        [(i, j, k, l), (j, i, k, l), (i, j, l, k), (j, i, l, k),
                         (k, l, i, j), (l, k, i, j), (k, l, j, i), (l, k, j, i)]
                    )
                    key = orbit[-1]
                    if key in seen:
                        continue
                    seen.add(key)
                    a, b, c, d = key
                    if a == b == c == d:
                        val = 0.6 + rng.uniform(0.0, 0.3)
                    elif (a, b) == (c, d) or (a, b) == (d, c):
                        val = rng.uniform(0.05, 0.25)
                    elif a == b and c == d:
                        val = 0.3 + rng.uniform(0.0, 0.2)
                    else:
                        val = rng.uniform(-0.08, 0.08)
                    data.two_body[key] = val
    return data


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    write_hf_like()
    # seeds chosen for clearly non-degenerate ground states
    (FIXTURES / "model3.fcidump").write_text(write_fcidump(random_model(3, 91, 0.3)))
    (FIXTURES / "model4.fcidump").write_text(write_fcidump(random_model(4, 25, -0.5)))
    print("fixtures written to", FIXTURES)


if __name__ == "__main__":
    main()
