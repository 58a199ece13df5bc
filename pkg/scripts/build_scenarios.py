"""Regenerate scenarios/*.json from the builders in olsrsim.library."""
import argparse
from pathlib import Path

from olsrsim.library import build_all


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "scenarios"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, spec in build_all().items():
        (out / f"{name}.json").write_text(spec.dumps())
        print(f"wrote {out / name}.json")


if __name__ == "__main__":
    main()
