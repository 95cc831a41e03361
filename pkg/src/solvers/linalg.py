"""Dense linear algebra kernels."""
import numpy as np
import scipy.linalg

from settings.solvers import SYMMETRY_TOL

from .exc import InvalidProblem, NotPositiveDefinite, NumericalFailure


def as_matrix(value, name: str = 'matrix') -> np.ndarray:
    matrix = np.atleast_2d(np.asarray(value, dtype=float))
    if matrix.ndim != 2:
        raise InvalidProblem(f'{name} must be two dimensional, got shape {matrix.shape}')
    if not np.all(np.isfinite(matrix)):
        raise InvalidProblem(f'{name} has non-finite entries')
    return matrix


def as_vector(value, name: str = 'vector') -> np.ndarray:
    vector = np.atleast_1d(np.asarray(value, dtype=float))
    if vector.ndim != 1:
        raise InvalidProblem(f'{name} must be one dimensional, got shape {vector.shape}')
    return vector


def is_symmetric(H: np.ndarray, tol: float = SYMMETRY_TOL) -> bool:
    scale = max(np.abs(H).max(initial=0.0), 1.0)
    return H.shape[0] == H.shape[1] and np.abs(H - H.T).max(initial=0.0) <= tol * scale


def cholesky_lower(H) -> np.ndarray:
    """Return the lower triangular G with G @ G.T == H."""
    H = as_matrix(H, 'H')
    if not is_symmetric(H):
        raise NotPositiveDefinite(f'Matrix of shape {H.shape} is not symmetric')

    try:
        G = np.linalg.cholesky(H)
    except np.linalg.LinAlgError as e:
        raise NotPositiveDefinite(f'Matrix of shape {H.shape} is not positive definite') from e
    return G


def matrix_exponential(M) -> np.ndarray:
    """Scaling and squaring with a degree 13 Pade approximant."""
    M = as_matrix(M, 'M')
    if M.shape[0] != M.shape[1]:
        raise InvalidProblem(f'Matrix exponential needs a square matrix, got {M.shape}')

    E = scipy.linalg.expm(M)
    if not np.all(np.isfinite(E)):
        raise NumericalFailure('Matrix exponential overflowed')
    return E
