"""CSV records of runs and sweeps.

Floats are written with repr, which round-trips doubles and never depends
on the locale. Missing values are empty fields.
"""
import csv
from typing import IO, Iterable, Iterator, Sequence

import numpy as np

from campc.models import SimulationTrace
from settings.bench import RUN_COLUMNS, SWEEP_COLUMNS


def _format(value) -> str:
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def run_rows(n: int, trace: SimulationTrace) -> Iterator[dict]:
    for record in trace.records:
        yield {
            'n': n,
            'step': record.k,
            'presolve_time': record.timings.presolve,
            'qp_time': record.timings.qp_solve,
            'total_time': record.timings.total,
            'retained_fraction': record.retained_fraction,
            'max_input_delta': record.input_delta,
        }


def sweep_row(n: int, mode: str, trace: SimulationTrace) -> dict:
    if not trace.steps:
        return {'n': n, 'mode': mode, 'steps': 0}

    total = trace.timings('total')
    return {
        'n': n,
        'mode': mode,
        'steps': trace.steps,
        'max_total_time': float(total.max()),
        'max_presolve_time': float(trace.timings('presolve').max()),
        'max_qp_time': float(trace.timings('qp_solve').max()),
        'mean_total_time': float(total.mean()),
        'max_retained_fraction': float(trace.retained_fractions.max()),
    }


def write_csv(stream: IO, rows: Iterable[dict], columns: Sequence[str] = RUN_COLUMNS):
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_format(row.get(column)) for column in columns])


def write_sweep(stream: IO, rows: Iterable[dict]):
    write_csv(stream, rows, SWEEP_COLUMNS)
