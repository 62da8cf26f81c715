"""Command line interface: segment inspection, page filtering, corpus
evaluation, profile validation, and serving the HTTP API.

Exit codes: 0 success, 1 input/validation error, 2 network error. Results
go to stdout or -o FILE (written atomically); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path

from .dom import InputTooLarge, parse_html, serialize_html
from .engine import FilterConfig, filter_page, report_to_json
from .evaluation import EvaluationError, render_table, results_to_json, run_corpus
from .fetch import FetchConfig, FetchError, fetch_url
from .profiles import ProfileBag, ProfileError, load_profile
from .segmentation import SegmenterConfig, segment_page, segments_to_json


class _UsageError(Exception):
    pass


class _InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: A003 - argparse API
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="segfilter", description=__doc__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    seg = sub.add_parser("segment", help="list a page's segments as JSON")
    seg.add_argument("page", help="HTML file to segment")
    seg.add_argument("-o", "--output", help="write JSON here instead of stdout")
    seg.add_argument("--wrap-width", type=int, default=80)
    seg.add_argument("--merge-threshold", type=float, default=2.0)
    seg.add_argument("--keep-empty", action="store_true",
                     help="keep segments with no text, links or images")

    flt = sub.add_parser("filter", help="filter a page against a profile")
    flt.add_argument("page", nargs="?", help="HTML file to filter")
    flt.add_argument("--url", help="fetch and filter this http(s) URL instead")
    flt.add_argument("--profile", required=True, help="profile JSON file")
    flt.add_argument("--threshold", type=int, default=None,
                     help="override the profile's display threshold")
    flt.add_argument("--mode", choices=["block", "linkhide"], default="block")
    flt.add_argument("--dummy-message", default="[segment blocked]")
    flt.add_argument("--unique-terms", action="store_true",
                     help="count each distinct keyword once per channel")
    flt.add_argument("--report", help="write the per-segment JSON score report here")
    flt.add_argument("-o", "--output", help="write filtered HTML here instead of stdout")

    ev = sub.add_parser("eval", help="evaluate a labeled corpus")
    ev.add_argument("--manifest", required=True, help="corpus manifest JSON")
    ev.add_argument("--profile", required=True, help="profile JSON file")
    ev.add_argument("--mode", choices=["block", "linkhide"], default="block")
    ev.add_argument("--json", action="store_true", help="emit JSON instead of a table")
    ev.add_argument("-o", "--output", help="write results here instead of stdout")

    chk = sub.add_parser("profile-check", help="validate a profile file")
    chk.add_argument("profile", help="profile JSON file")

    srv = sub.add_parser("serve", help="run the HTTP filtering service")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8000)
    return parser


def _read_file(path: str, what: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except FileNotFoundError:
        raise _InputError(f"{what} not found: {path}")
    except OSError as exc:
        raise _InputError(f"cannot read {what} {path}: {exc}")


def _load_profile_file(path: str) -> ProfileBag:
    return load_profile(_read_file(path, "profile"))


def _write_output(data: bytes, out_path: str | None) -> None:
    """Write results to stdout, or atomically (write then rename) to a file."""
    if out_path is None:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
        return
    target = Path(out_path)
    handle = tempfile.NamedTemporaryFile(
        dir=target.parent or Path("."), prefix=f".{target.name}.", delete=False
    )
    try:
        with handle:
            handle.write(data)
        os.replace(handle.name, target)
    except OSError:
        try:
            os.unlink(handle.name)
        except OSError:
            pass
        raise


def _cmd_segment(args: argparse.Namespace) -> int:
    cfg = SegmenterConfig(
        wrap_width=args.wrap_width,
        merge_threshold=args.merge_threshold,
        drop_empty=not args.keep_empty,
    )
    doc = parse_html(_read_file(args.page, "page file"), source_url=args.page)
    listing = segments_to_json(segment_page(doc, cfg))
    _write_output(listing.encode("utf-8") + b"\n", args.output)
    return 0


def _cmd_filter(args: argparse.Namespace) -> int:
    if (args.page is None) == (args.url is None):
        raise _UsageError("provide exactly one of PAGE or --url")
    bag = _load_profile_file(args.profile)
    if args.url is not None:
        fetch_cfg = FetchConfig(
            user_agent=os.environ.get("SEGFILTER_UA", FetchConfig().user_agent)
        )
        data = fetch_url(args.url, fetch_cfg)
        source = args.url
    else:
        data = _read_file(args.page, "page file")
        source = args.page
    doc = parse_html(data, source_url=source)
    fcfg = FilterConfig(
        mode=args.mode,
        dummy_message=args.dummy_message,
        threshold_override=args.threshold,
        unique_terms=args.unique_terms,
    )
    result = filter_page(doc, bag, fcfg=fcfg)
    _write_output(serialize_html(result.document), args.output)
    if args.report:
        _write_output(report_to_json(result).encode("utf-8") + b"\n", args.report)
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    bag = _load_profile_file(args.profile)
    if not Path(args.manifest).exists():
        raise _InputError(f"manifest not found: {args.manifest}")
    rows, summary, _ = run_corpus(
        args.manifest, bag, fcfg=FilterConfig(mode=args.mode)
    )
    if args.json:
        output = results_to_json(rows, summary) + "\n"
    else:
        output = render_table(rows, summary)
    _write_output(output.encode("utf-8"), args.output)
    return 0


def _cmd_profile_check(args: argparse.Namespace) -> int:
    bag = _load_profile_file(args.profile)
    print(
        f"profile OK: {len(bag.like)} like, {len(bag.unlike)} unlike, "
        f"threshold {bag.threshold}"
    )
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


def run(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise _UsageError("a subcommand is required (see --help)")
        handlers = {
            "segment": _cmd_segment,
            "filter": _cmd_filter,
            "eval": _cmd_eval,
            "profile-check": _cmd_profile_check,
            "serve": _cmd_serve,
        }
        return handlers[args.command](args)
    except _UsageError as exc:
        print(f"segfilter: error: {exc}", file=sys.stderr)
        return 1
    except (_InputError, ProfileError, EvaluationError, InputTooLarge, OSError) as exc:
        print(f"segfilter: {exc}", file=sys.stderr)
        return 1
    except FetchError as exc:
        print(f"segfilter: network error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse --help
        return int(exc.code or 0)


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
