import csv
import io
from collections.abc import Iterable
from pathlib import Path

from app.usecases.decomposition import TraceRecord

TRACE_COLUMNS = ("iteration", "dU", "dV", "dW", "inner_flags")


def format_inner_flags(record: TraceRecord) -> str:
    return f"v={int(record.v_converged)};u={int(record.u_converged)}"


def encode_trace(trace: Iterable[TraceRecord]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(TRACE_COLUMNS)
    for record in trace:
        writer.writerow(
            [
                record.iteration,
                repr(record.du),
                repr(record.dv),
                repr(record.dw),
                format_inner_flags(record),
            ],
        )
    return buffer.getvalue()


def write_trace(trace: Iterable[TraceRecord], path: str | Path) -> None:
    Path(path).write_text(encode_trace(trace), encoding="utf-8")
