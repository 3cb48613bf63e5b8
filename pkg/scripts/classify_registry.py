"""Classification reports for a set of registry functions, one JSON object per line."""
import argparse
import io

from schwarzmult.cli import run

DEFAULT_FNS = ("identity", "quad:0.1", "quad:0.3", "scaled-koebe:0.5", "scaled-koebe:0.9", "koebe")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fn", nargs="*", default=list(DEFAULT_FNS))
    ap.add_argument("--alpha", default="3")
    args = ap.parse_args()
    for spec in args.fn:
        buf = io.StringIO()
        code = run(["classify", "--fn", spec, "--alpha", args.alpha], buf)
        if code:
            raise SystemExit(code)
        print(buf.getvalue(), end="")


if __name__ == "__main__":
    main()
