import os


LOG_LEVEL = os.getenv('CAMPC_LOG_LEVEL', 'INFO').upper()

THREADS = max(int(os.getenv('CAMPC_THREADS', os.cpu_count() or 1)), 1)

# below this many surviving rows the ellipse tests run on the calling thread
PARALLEL_ROWS = int(os.getenv('CAMPC_PARALLEL_ROWS', 8192))
