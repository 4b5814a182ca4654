#!/usr/bin/env python3
"""Download the four SNAP datasets used by the validation suite.

Files land in ./data (or the directory named by BTER_DATA_DIR) as plain
edge-list text; the acceptance tests and compare_models.py pick them up
from there. Re-running skips files that already exist.
"""

import gzip
import os
import sys
import urllib.request
from pathlib import Path

DATASETS = {
    "ca-AstroPh": "https://snap.stanford.edu/data/ca-AstroPh.txt.gz",
    "soc-Epinions1": "https://snap.stanford.edu/data/soc-Epinions1.txt.gz",
    "cit-HepPh": "https://snap.stanford.edu/data/cit-HepPh.txt.gz",
    "ca-CondMat": "https://snap.stanford.edu/data/ca-CondMat.txt.gz",
}


def main() -> int:
    data_dir = Path(os.environ.get("BTER_DATA_DIR", Path(__file__).parent.parent / "data"))
    data_dir.mkdir(parents=True, exist_ok=True)
    failures = 0
    for name, url in DATASETS.items():
        target = data_dir / f"{name}.txt"
        if target.is_file():
            print(f"{name}: already present")
            continue
        print(f"{name}: downloading {url}")
        try:
            with urllib.request.urlopen(url, timeout=60) as response:
                payload = gzip.decompress(response.read())
        except Exception as exc:  # noqa: BLE001 - report and keep going
            print(f"{name}: download failed ({exc})")
            failures += 1
            continue
        target.write_bytes(payload)
        print(f"{name}: wrote {target} ({len(payload)} bytes)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
