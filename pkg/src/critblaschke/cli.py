"""Command-line entry point: ``forward``, ``invert``, ``verify`` and ``sample-metric``.

Exit codes: 0 success, 2 invalid input, 3 a critical root could not be
classified, 4 the inverse solver did not converge, 1 any other failure
(e.g. verify found a violated invariant).
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
import time
from pathlib import Path

from .critical import forward_phi
from .disk import BlaschkeProduct, PointMultiset
from .documents import (
    DocumentError,
    ProblemDocument,
    ResultDocument,
    emit_result,
    parse_problem,
    points_to_pairs,
)
from .errors import IndecisiveRoot, StepUnderflow
from .inverse import invert_phi

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_INDECISIVE = 3
EXIT_NONCONVERGED = 4

log = logging.getLogger("critblaschke")


class InputError(Exception):
    pass


def _read_problem(path: str, mode: str) -> ProblemDocument:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    doc = parse_problem(text)
    if doc.mode != mode:
        raise DocumentError(f"document mode is {doc.mode!r}, expected {mode!r}")
    return doc


def _write(path: str, text: str):
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from exc


def cmd_forward(doc: ProblemDocument) -> ResultDocument:
    start = time.perf_counter()
    zeros = PointMultiset(tuple(doc.complex_points()))
    res = forward_phi(zeros)
    return ResultDocument(
        mode="forward",
        input_points=points_to_pairs(zeros),
        output_points=points_to_pairs(res.critical_points),
        residual=max(res.residuals, default=0.0),
        converged=True,
        diagnostics={"steps_taken": 0, "step_rejections": 0, "runtime_ms": _ms(start)},
    )


def cmd_invert(doc: ProblemDocument, step: float | None = None, tol: float | None = None) -> ResultDocument:
    """Raises :class:`StepUnderflow`; its ``result`` attribute then holds the unconverged document."""
    start = time.perf_counter()
    overrides = {"corrector_tol": tol}
    if step is not None:
        cfg = doc.solver_config()
        overrides.update(initial_step=step, max_step=max(step, cfg.max_step), min_step=min(cfg.min_step, step))
    config = doc.solver_config(**overrides)
    target = PointMultiset(tuple(doc.complex_points()))
    try:
        report = invert_phi(target, config)
    except StepUnderflow as exc:
        rep = exc.report
        exc.result = _invert_result(target, rep.zeros, rep.residual, rep.steps_taken, rep.step_rejections, False, start)
        raise
    return _invert_result(target, report.zeros, report.match_distance, report.steps_taken,
                          report.step_rejections, report.converged, start)


def _invert_result(target, zeros, residual, steps, rejections, converged, start) -> ResultDocument:
    return ResultDocument(
        mode="invert",
        input_points=points_to_pairs(target),
        output_points=points_to_pairs(zeros),
        residual=float(residual),
        converged=bool(converged),
        diagnostics={"steps_taken": steps, "step_rejections": rejections, "runtime_ms": _ms(start)},
    )


def _ms(start: float) -> float:
    return round(1000.0 * (time.perf_counter() - start), 3)


def cmd_sample_metric(doc: ProblemDocument, grid: int, out: str, figure: bool = True) -> list[Path]:
    from .metrics import metric_grid

    if grid < 8:
        raise DocumentError("grid must be at least 8")
    f = BlaschkeProduct(PointMultiset(tuple(doc.complex_points())))
    samples = metric_grid(f, grid)
    out = Path(out)
    try:
        with out.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["re", "im", "sigma", "ratio"])
            for s in samples:
                w.writerow([repr(s.z.real), repr(s.z.imag), repr(s.sigma), repr(s.ratio)])
    except OSError as exc:
        raise InputError(f"cannot write {out}: {exc.strerror}") from exc
    written = [out]
    if figure:
        from .plotting import plot_metric_field

        crit = forward_phi(f.zeros).critical_points if f.d else ()
        written.append(plot_metric_field(samples, out.with_suffix(".png"), f.zeros, crit))
    return written


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="critblaschke", description="Blaschke products from prescribed critical points")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    fw = sub.add_parser("forward", help="critical points of the product with the given zeros")
    fw.add_argument("--in", dest="input", required=True)
    fw.add_argument("--out", required=True)

    inv = sub.add_parser("invert", help="zeros of the product with the given critical points")
    inv.add_argument("--in", dest="input", required=True)
    inv.add_argument("--out", required=True)
    inv.add_argument("--step", type=float, help="initial continuation step")
    inv.add_argument("--tol", type=float, help="corrector tolerance")

    ver = sub.add_parser("verify", help="seeded invariant suites; prints a JSON summary")
    ver.add_argument("--seed", type=int, required=True)
    ver.add_argument("--trials", type=int, required=True)
    ver.add_argument("--max-degree", type=int, required=True)
    ver.add_argument("--out", help="also write the summary here")

    sm = sub.add_parser("sample-metric", help="CSV of sigma and R over a lattice, plus a PNG map")
    sm.add_argument("--in", dest="input", required=True)
    sm.add_argument("--grid", type=int, required=True)
    sm.add_argument("--out", required=True)
    sm.add_argument("--no-figure", action="store_true", help="skip the PNG")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return _dispatch(args)
    except (DocumentError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except IndecisiveRoot as exc:
        print(f"error: cannot classify critical roots: {exc}", file=sys.stderr)
        return EXIT_INDECISIVE


def _dispatch(args) -> int:
    if args.command == "forward":
        doc = _read_problem(args.input, "forward")
        _write(args.out, emit_result(cmd_forward(doc)))
        return EXIT_OK

    if args.command == "invert":
        doc = _read_problem(args.input, "invert")
        if args.tol is not None and args.tol <= 0:
            raise DocumentError("--tol must be positive")
        if args.step is not None and not 0 < args.step <= 1:
            raise DocumentError("--step must lie in (0, 1]")
        try:
            result = cmd_invert(doc, args.step, args.tol)
        except StepUnderflow as exc:
            _write(args.out, emit_result(exc.result))
            print(f"error: solver did not converge: {exc}", file=sys.stderr)
            return EXIT_NONCONVERGED
        _write(args.out, emit_result(result))
        return EXIT_OK if result.converged else EXIT_NONCONVERGED

    if args.command == "verify":
        from .verify import run_verify, summary_json

        if args.trials < 1 or args.max_degree < 1:
            raise DocumentError("--trials and --max-degree must be at least 1")
        summary = run_verify(args.seed, args.trials, args.max_degree)
        text = summary_json(summary)
        sys.stdout.write(text)
        if args.out:
            _write(args.out, text)
        return EXIT_OK if summary["all_passed"] else EXIT_FAILED

    if args.command == "sample-metric":
        doc = _read_problem_any(args.input)
        cmd_sample_metric(doc, args.grid, args.out, figure=not args.no_figure)
        return EXIT_OK
    raise AssertionError(args.command)


def _read_problem_any(path: str) -> ProblemDocument:
    try:
        return parse_problem(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


if __name__ == "__main__":
    sys.exit(main())
