"""Command-line front end for the ``qdual`` binary.

Exit codes: 0 when every checked identity passes, 1 on a verification
failure, 2 on a usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from contextlib import contextmanager
from typing import Optional, Sequence

import numpy as np

from .config import BaseConfig, DEFAULT_TOLERANCES, GRAM_TOLERANCES, RunConfig, get_config, load_run_config, parse_complex
from .errors import ConfigError, DegreeExceedsN, QDualError, UnknownFamily, UnknownIdentity, UnknownKernel
from .invrel import INVERSE_KERNELS, bio_check, inverse_pair
from .qcore import PrecisionContext
from .registry import gram, identity_ids, get_identity, list_identities, verify
from .reports import (
	GRAM_FIELDS,
	INVERSE_FIELDS,
	LIST_FIELDS,
	VERIFY_FIELDS,
	ReportWriter,
	matrix_text,
	verification_pdf,
)


logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
FAMILY_FLAGS = ("a", "b", "c", "d", "alpha", "y", "N")
INVERSE_TOLERANCES = {"N": "INV-N", "M": "INV-M", "K": "INV-K", "fg-demo": "INV-FG"}


# -----------------------------
# Parser
# -----------------------------

def _common() -> argparse.ArgumentParser:
	common = argparse.ArgumentParser(add_help=False)
	common.add_argument("--precision", choices=("standard", "extended"), default=None,
						help="numeric backend (default: $QDUAL_PRECISION or standard)")
	common.add_argument("--format", dest="output", choices=("json", "csv", "text"), default=None)
	common.add_argument("--out", dest="out_path", default=None, help="write records to PATH instead of stdout")
	common.add_argument("--config", default=None, help="JSON run configuration")
	common.add_argument("--seed", type=int, default=None)
	common.add_argument("--log-level", default=None)
	return common


def _family_flags(parser: argparse.ArgumentParser) -> None:
	for name in FAMILY_FLAGS:
		parser.add_argument(f"--{name}", type=str, default=None)
	parser.add_argument("--q", type=str, default=None)


def build_parser() -> argparse.ArgumentParser:
	common = _common()
	parser = argparse.ArgumentParser(prog="qdual", description="q-series identity verification")
	sub = parser.add_subparsers(dest="command", required=True)

	sub.add_parser("list", parents=[common], help="list registered identities")

	p = sub.add_parser("verify", parents=[common], help="verify identities on random parameters")
	p.add_argument("ids", nargs="+", help='identity ids, or "all"')
	p.add_argument("--trials", type=int, default=None)
	p.add_argument("--tol", type=float, default=None)
	p.add_argument("--workers", type=int, default=None)
	p.add_argument("--exploratory", action="store_true", help='include exploratory identities in "all"')
	p.add_argument("--pdf", default=None, help="also write a PDF summary")
	p.add_argument("--domain", action="append", default=[], metavar="ID.PARAM=LO:HI")

	p = sub.add_parser("gram", parents=[common], help="Gram matrix of a polynomial family")
	p.add_argument("family")
	p.add_argument("--size", type=int, default=6)
	p.add_argument("--tol", type=float, default=None)
	_family_flags(p)

	p = sub.add_parser("inverse", parents=[common], help="check an inverse kernel pair")
	p.add_argument("kernel")
	p.add_argument("--size", type=int, default=None)
	p.add_argument("--tol", type=float, default=None)
	p.add_argument("--a", type=str, default="0.3")
	p.add_argument("--c", type=str, default="0.2")
	p.add_argument("--q", type=str, default="0.5")
	return parser


# -----------------------------
# Helpers
# -----------------------------

def scalar_flag(value):
	"""``re``, ``re+imi`` or ``[re, im]``; real values stay floats."""
	if value is None:
		return None
	z = parse_complex(value)
	return z.real if z.imag == 0 else z


def parse_domains(items: Sequence[str]) -> dict:
	domains: dict[str, dict] = {}
	for item in items:
		try:
			key, bounds = item.split("=", 1)
			identity_id, param = key.rsplit(".", 1)
			lo, hi = (float(v) for v in bounds.split(":"))
		except ValueError:
			raise ConfigError(f"--domain expects ID.PARAM=LO:HI, got {item!r}") from None
		if lo > hi:
			raise ConfigError(f"--domain {item}: empty range")
		domains.setdefault(identity_id.upper(), {})[param] = (lo, hi)
	return domains


def context_for(cfg: RunConfig) -> PrecisionContext:
	return PrecisionContext.from_config(get_config(cfg.precision))


def setup_logging(level: Optional[str]) -> None:
	level = (level or os.environ.get("QDUAL_LOG_LEVEL") or BaseConfig.LOG_LEVEL).upper()
	logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
						format="%(levelname)s %(name)s: %(message)s")


@contextmanager
def output_stream(path: Optional[str]):
	if path:
		with open(path, "w", encoding="utf-8", newline="") as fh:
			yield fh
	else:
		yield sys.stdout


def run_config(args: argparse.Namespace, default_output: str) -> RunConfig:
	overrides = {
		"precision": args.precision,
		"seed": args.seed,
		"output": args.output or default_output,
		"out_path": args.out_path,
		"trials": getattr(args, "trials", None),
		"workers": getattr(args, "workers", None),
	}
	if getattr(args, "exploratory", False):
		overrides["exploratory"] = True
	if getattr(args, "domain", None):
		overrides["domains"] = parse_domains(args.domain)
	return load_run_config(args.config, overrides)


# -----------------------------
# Commands
# -----------------------------

def cmd_list(args: argparse.Namespace) -> int:
	cfg = run_config(args, "text")
	rows = [{"id": i, "anchor": a, "domain": d} for i, a, d in list_identities()]
	with output_stream(cfg.out_path) as out:
		if cfg.output == "json":
			out.write(json.dumps(rows, indent=2) + "\n")
		else:
			writer = ReportWriter(out, cfg.output, LIST_FIELDS)
			for row in rows:
				writer.write(row)
			writer.close()
	return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
	cfg = run_config(args, "json")
	if [i for i in args.ids if i.lower() == "all"]:
		ids = identity_ids(exploratory=cfg.exploratory)
	else:
		ids = [get_identity(i).id for i in args.ids]
	if args.tol is not None:
		cfg.tolerances.update({i: args.tol for i in ids})
	ctx = context_for(cfg)

	reports = []
	failed = False
	with output_stream(cfg.out_path) as out:
		writer = ReportWriter(out, cfg.output, VERIFY_FIELDS)
		for identity_id in ids:
			report = verify(identity_id, trials=cfg.trials, seed=cfg.seed, ctx=ctx,
							tol=cfg.tolerance_for(identity_id), domain=cfg.domains.get(identity_id),
							workers=max(cfg.workers, 1))
			reports.append(report)
			writer.write(report.to_record())
			if not report.passed and not report.exploratory:
				failed = True
		writer.close()
	if args.pdf:
		verification_pdf(args.pdf, reports)
	return EXIT_FAIL if failed else EXIT_OK


def cmd_gram(args: argparse.Namespace) -> int:
	cfg = run_config(args, "text")
	if args.size < 1:
		raise ConfigError("--size must be at least 1")
	params = {k: int(v) if k == "N" else scalar_flag(v) for k, v in cfg.params.items()}
	for name in FAMILY_FLAGS:
		value = getattr(args, name)
		if value is not None:
			params[name] = int(value) if name == "N" else scalar_flag(value)
	params["q"] = scalar_flag(args.q) if args.q is not None else params.get("q", 0.5)
	logger.debug("gram %s with %s", args.family, params)
	report = gram(args.family, args.size, params, context_for(cfg))
	tol = args.tol if args.tol is not None else GRAM_TOLERANCES.get(report.family, 1e-8)

	with output_stream(cfg.out_path) as out:
		if cfg.output == "text":
			out.write(matrix_text(report.matrix, report.norms))
		writer = ReportWriter(out, cfg.output, GRAM_FIELDS)
		writer.write(report.to_record())
		writer.close()
	return EXIT_OK if report.max_offdiag_rel <= tol and report.max_diag_rel_err <= tol else EXIT_FAIL


def cmd_inverse(args: argparse.Namespace) -> int:
	cfg = run_config(args, "text")
	if args.kernel not in INVERSE_KERNELS:
		raise UnknownKernel.among(args.kernel, INVERSE_KERNELS)
	size = args.size if args.size is not None else BaseConfig.INVERSE_SIZES[args.kernel]
	if size < 1:
		raise ConfigError("--size must be at least 1")
	params = {"a": scalar_flag(args.a), "c": scalar_flag(args.c), "q": scalar_flag(args.q)}
	ctx = context_for(cfg)

	start = time.perf_counter()
	F, G = inverse_pair(args.kernel, params, ctx, np.random.default_rng(cfg.seed))
	forward, backward = bio_check(F, G, size), bio_check(G, F, size)
	record = {
		"kernel": args.kernel,
		"size": size,
		"forward_dev": forward,
		"backward_dev": backward,
		"precision": ctx.mode,
		"runtime_ms": round((time.perf_counter() - start) * 1e3, 3),
	}
	tol = args.tol if args.tol is not None else DEFAULT_TOLERANCES[INVERSE_TOLERANCES[args.kernel]]
	with output_stream(cfg.out_path) as out:
		writer = ReportWriter(out, cfg.output, INVERSE_FIELDS)
		writer.write(record)
		writer.close()
	return EXIT_OK if max(forward, backward) <= tol else EXIT_FAIL


COMMANDS = {"list": cmd_list, "verify": cmd_verify, "gram": cmd_gram, "inverse": cmd_inverse}


def main(argv: Optional[Sequence[str]] = None) -> int:
	parser = build_parser()
	try:
		args = parser.parse_args(argv)
	except SystemExit as e:
		return e.code if isinstance(e.code, int) else EXIT_USAGE
	setup_logging(args.log_level)
	try:
		return COMMANDS[args.command](args)
	except (UnknownIdentity, UnknownFamily, UnknownKernel, ConfigError, DegreeExceedsN, ValueError) as e:
		print(f"qdual: {e}", file=sys.stderr)
		return EXIT_USAGE
	except QDualError as e:
		print(f"qdual: {e.tag}: {e}", file=sys.stderr)
		return EXIT_FAIL
