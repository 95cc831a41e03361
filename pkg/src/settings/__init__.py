from settings import app
from settings import bench
from settings import solvers


__all__ = (
    'app',
    'bench',
    'solvers',
)
