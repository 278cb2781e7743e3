"""Command-line entry points ``plot-fig3`` and ``plot-fig4``.

    plot-fig3 --csv results.csv --out fig3.svg --refs sql=1000,hl=1e6,css1=11428.9,css2=50850
    plot-fig4 --csv results.csv --out fig4.svg --refs sql=12,fock=36,uniform=21

Exit codes: 0 success, 1 usage error (bad flags, bad CSV schema).
"""

import argparse
import sys

from .figures import FigureSpec, SchemaError, plot_fig3, plot_fig4


def _parse_refs(text):
    refs = {}
    if not text:
        return refs
    for piece in text.split(","):
        if "=" not in piece:
            raise ValueError(f"bad reference {piece!r}; expected key=value")
        key, val = piece.split("=", 1)
        refs[key.strip()] = float(val)
    return refs


def _build_parser(name, ref_keys):
    ap = argparse.ArgumentParser(
        prog=name,
        description=f"Render {name.split('-')[1]} from a dwmetro result CSV.",
    )
    ap.add_argument("--csv", required=True, help="input result table")
    ap.add_argument("--out", required=True, help="output image path (.svg and .png are both written)")
    ap.add_argument(
        "--refs",
        default="",
        help=f"comma-separated reference lines, e.g. {ref_keys[0]}=1000 (keys: {', '.join(ref_keys)})",
    )
    ap.add_argument("--log-y", action="store_true", help="logarithmic information axis")
    return ap


def _main(argv, name, ref_keys, plot):
    ap = _build_parser(name, ref_keys)
    args = ap.parse_args(argv)
    try:
        spec = FigureSpec(
            csv_path=args.csv,
            out_path=args.out,
            refs=_parse_refs(args.refs),
            log_y=args.log_y,
        )
        result = plot(spec)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"{name}: {exc}", file=sys.stderr)
        return 1
    print(f"{name}: {len(result.x)} point(s) -> {result.files[0]}, {result.files[1]}")
    return 0


def main_fig3(argv=None):
    from .figures import FIG3_REF_KEYS

    return _main(argv if argv is not None else sys.argv[1:], "plot-fig3", FIG3_REF_KEYS, plot_fig3)


def main_fig4(argv=None):
    from .figures import FIG4_REF_KEYS

    return _main(argv if argv is not None else sys.argv[1:], "plot-fig4", FIG4_REF_KEYS, plot_fig4)


if __name__ == "__main__":
    sys.exit(main_fig3())
