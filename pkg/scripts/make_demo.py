#!/usr/bin/env python3
"""Materialize a ready-to-run demo setup for the bundled mini corpus.

Writes `manifest.csv` (file:// URLs pointing at the bundled documents) and
`config.json` into the target directory, so the whole pipeline can run
offline in mock mode:

    python3 scripts/make_demo.py demo/
    facts run --config demo/config.json
"""

import csv
import json
import sys
from pathlib import Path

CORPUS_DIR = Path(__file__).resolve().parent.parent / "tests" / "data" / "mini_corpus"


def main() -> None:
    target = Path(sys.argv[1] if len(sys.argv) > 1 else "demo")
    target.mkdir(parents=True, exist_ok=True)

    manifest = target / "manifest.csv"
    with manifest.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["source_id", "url", "title", "authors", "year", "source_note"])
        for doc in sorted(CORPUS_DIR.glob("d*.txt")):
            writer.writerow([
                doc.stem,
                doc.resolve().as_uri(),
                f"Mini document {doc.stem}",
                "Example, A.",
                "2024",
                "bundled mini corpus",
            ])

    config = {
        "question": "How will AI change education?",
        "manifest": str(manifest),
        "work_dir": str(target / "work"),
        "out_dir": str(target / "out"),
        "mock_mode": True,
        "lda": {"k": 3, "sweeps": 400, "burn_in": 100, "seed": 7},
    }
    (target / "config.json").write_text(
        json.dumps(config, indent=2) + "\n", encoding="utf-8"
    )
    print(f"demo inputs written to {target}/ — run: facts run --config {target}/config.json")


if __name__ == "__main__":
    main()
