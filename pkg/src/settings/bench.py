import multiprocessing
import os


_cpu_workers = max(multiprocessing.cpu_count() - 1, 1)

WORKERS = int(os.getenv('CAMPC_WORKERS', _cpu_workers))

DEFAULT_SCENARIO = os.getenv(
    'CAMPC_SCENARIO',
    os.path.join(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))),
                 'scenarios', 'hyperthermia.json'),
)

RUN_COLUMNS = (
    'n',
    'step',
    'presolve_time',
    'qp_time',
    'total_time',
    'retained_fraction',
    'max_input_delta',
)

SWEEP_COLUMNS = (
    'n',
    'mode',
    'steps',
    'max_total_time',
    'max_presolve_time',
    'max_qp_time',
    'mean_total_time',
    'max_retained_fraction',
)

MODES = ('campc', 'full')
