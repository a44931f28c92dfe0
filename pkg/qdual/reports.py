"""Report writers: JSON Lines, CSV, plain text and a PDF summary."""

from __future__ import annotations

import csv
import io
import json
import math
from typing import IO, Iterable, Sequence

from reportlab.lib import colors
from reportlab.lib.pagesizes import A4
from reportlab.lib.styles import getSampleStyleSheet
from reportlab.platypus import Paragraph, SimpleDocTemplate, Spacer, Table, TableStyle


VERIFY_FIELDS = ("id", "trials", "passes", "worst_rel_err", "worst_params", "seed", "precision", "runtime_ms")
GRAM_FIELDS = ("family", "size", "max_offdiag_rel", "max_diag_rel_err", "precision", "runtime_ms")
INVERSE_FIELDS = ("kernel", "size", "forward_dev", "backward_dev", "precision", "runtime_ms")
LIST_FIELDS = ("id", "anchor", "domain")

TABLE_STYLE = TableStyle([
	('BACKGROUND', (0, 0), (-1, 0), colors.lightgrey),
	('BOX', (0, 0), (-1, -1), 0.5, colors.black),
	('GRID', (0, 0), (-1, -1), 0.25, colors.grey),
	('ALIGN', (1, 1), (-1, -1), 'CENTER'),
	('FONTNAME', (0, 0), (-1, 0), 'Helvetica-Bold'),
])


def _cell(value) -> str:
	if isinstance(value, dict):
		return json.dumps(value, sort_keys=True)
	if isinstance(value, float):
		return f"{value:.3g}" if math.isfinite(value) else str(value)
	if value is None:
		return "-"
	return str(value)


class ReportWriter:
	"""Serialises records to a single stream, one per call, in arrival order."""

	def __init__(self, stream: IO[str], fmt: str, fields: Sequence[str]):
		self.stream = stream
		self.fmt = fmt
		self.fields = tuple(fields)
		self._csv = None
		self._rows: list[dict] = []

	def write(self, record: dict) -> None:
		if self.fmt == "json":
			self.stream.write(json.dumps({k: record[k] for k in self.fields}) + "\n")
			self.stream.flush()
		elif self.fmt == "csv":
			if self._csv is None:
				self._csv = csv.writer(self.stream, lineterminator="\n")
				self._csv.writerow(self.fields)
			self._csv.writerow([
				json.dumps(record[k], sort_keys=True) if isinstance(record[k], dict) else record[k]
				for k in self.fields
			])
		else:
			self._rows.append(record)

	def close(self) -> None:
		if self.fmt == "text" and self._rows:
			self.stream.write(text_table(self._rows, self.fields))


def text_table(rows: Iterable[dict], fields: Sequence[str]) -> str:
	cells = [[_cell(row.get(k)) for k in fields] for row in rows]
	widths = [max([len(f)] + [len(r[i]) for r in cells]) for i, f in enumerate(fields)]
	lines = ["  ".join(f.ljust(w) for f, w in zip(fields, widths))]
	lines.append("  ".join("-" * w for w in widths))
	lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in cells]
	return "\n".join(lines) + "\n"


def matrix_text(matrix, norms=None) -> str:
	"""Gram block as rows of magnitudes, with the closed-form norms alongside."""
	out = io.StringIO()
	size = matrix.shape[0]
	for n in range(size):
		row = " ".join(f"{complex(matrix[n, m]).real: .6e}" for m in range(size))
		tail = f"   | norm {complex(norms[n]).real: .6e}" if norms is not None else ""
		out.write(row + tail + "\n")
	return out.getvalue()


def verification_pdf(path: str, reports, title: str = "q-series verification report") -> None:
	doc = SimpleDocTemplate(path, pagesize=A4, leftMargin=36, rightMargin=36, topMargin=36, bottomMargin=36)
	styles = getSampleStyleSheet()
	story = [Paragraph(f"<b>{title}</b>", styles['Title']), Spacer(1, 12)]

	reports = list(reports)
	if reports:
		first = reports[0]
		meta = f"Seed: <b>{first.seed}</b> &nbsp;&nbsp; Precision: <b>{first.precision}</b>"
		story.append(Paragraph(meta, styles['Normal']))
		story.append(Spacer(1, 6))

	data = [["Identity", "Passes", "Trials", "Worst rel. error", "Tolerance", "Status"]]
	for r in reports:
		status = "exploratory" if r.exploratory else ("pass" if r.passed else "FAIL")
		data.append([r.id, r.passes, r.trials, _cell(r.worst_rel_err), _cell(r.tolerance), status])
	table = Table(data, hAlign='LEFT')
	table.setStyle(TABLE_STYLE)
	story.append(Paragraph("<b>Summary</b>", styles['Heading2']))
	story.append(table)

	failures = [(r.id, t) for r in reports for t in r.diagnostics if t.error]
	if failures:
		story.append(Spacer(1, 12))
		story.append(Paragraph("<b>Trials stopped by an evaluation error</b>", styles['Heading2']))
		rows = [["Identity", "Trial", "Error"]] + [[i, t.index, t.error] for i, t in failures]
		err_table = Table(rows, hAlign='LEFT', colWidths=[160, 60, 260])
		err_table.setStyle(TABLE_STYLE)
		story.append(err_table)

	doc.build(story)
