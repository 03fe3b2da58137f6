#!/usr/bin/env python3
"""Fetch SteinLib instance archives into data/ (network required).

The test suite never calls this; the one dataset-backed acceptance
check simply skips when the file is absent.  Grab the ALUE set (which
contains alue2087.stp) with:

    python scripts/fetch_steinlib.py --set alue
"""

import argparse
import gzip
import io
import tarfile
import urllib.request
from pathlib import Path

BASE_URL = "https://steinlib.zib.de/download"


def fetch(set_name: str, dest: Path) -> list[Path]:
    url = f"{BASE_URL}/{set_name.lower()}.tgz"
    print(f"downloading {url}")
    with urllib.request.urlopen(url, timeout=60) as resp:
        payload = resp.read()
    dest.mkdir(parents=True, exist_ok=True)
    written = []
    with tarfile.open(fileobj=io.BytesIO(payload), mode="r:gz") as tar:
        for member in tar.getmembers():
            if not member.isfile():
                continue
            name = Path(member.name).name
            if not (name.endswith(".stp") or name.endswith(".stp.gz")):
                continue
            data = tar.extractfile(member).read()
            if name.endswith(".gz"):
                data = gzip.decompress(data)
                name = name[: -len(".gz")]
            out = dest / name.lower()
            out.write_bytes(data)
            written.append(out)
    return written


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--set", default="alue", help="SteinLib set name (e.g. alue)")
    ap.add_argument(
        "--dest",
        type=Path,
        default=Path(__file__).resolve().parent.parent / "data",
    )
    args = ap.parse_args()
    files = fetch(args.set, args.dest)
    print(f"wrote {len(files)} file(s) to {args.dest}")
    for f in files:
        print(f"  {f.name}")


if __name__ == "__main__":
    main()
