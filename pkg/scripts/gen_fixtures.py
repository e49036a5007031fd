#!/usr/bin/env python3
"""Regenerate the committed fixture projects under fixtures/.

Run from the repository root:  python3 scripts/gen_fixtures.py
A test asserts the committed bytes match regeneration, which also pins the
canonical serialization.
"""

from pathlib import Path

from ttc import nets, save_project

MALFORMED = '{"format_version": 1, "index_types": [{"id": 1, "na'

FIXDIR = Path(__file__).resolve().parent.parent / "fixtures"


def main():
    FIXDIR.mkdir(exist_ok=True)
    for name, build in nets.FIXTURES.items():
        save_project(build(), FIXDIR / f"{name}.tnp")
        print(f"wrote {name}.tnp")
    (FIXDIR / "malformed.tnp").write_text(MALFORMED, encoding="utf-8")
    print("wrote malformed.tnp")


if __name__ == "__main__":
    main()
