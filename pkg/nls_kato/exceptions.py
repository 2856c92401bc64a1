"""
Custom exceptions for the nls_kato package.

All exceptions inherit from NLSKatoError so callers can catch
everything with a single except clause if needed.
"""


class NLSKatoError(Exception):
    """Base exception for all nls_kato errors."""


class NLSDomainError(NLSKatoError, ValueError):
    """Raised when an argument lies outside the mathematical domain of an
    operation (a singular point, an excluded exponent, a zero field).

    Example::

        try:
            eval_potential(spec, 0.0)
        except NLSDomainError as e:
            print(f"Singular point: {e}")
    """


class NLSDivergenceError(NLSKatoError, ArithmeticError):
    """Raised when an integral or a norm is infinite.

    Example::

        try:
            yukawa_lq_norm_closed(spec, q=3.0)
        except NLSDivergenceError as e:
            print(f"Norm diverges: {e}")
    """


class NLSConfigurationError(NLSKatoError, ValueError):
    """Raised for invalid grids, mismatched fields or malformed
    configuration files.

    Example::

        try:
            RadialGrid(r_max=20.0, n_points=16)
        except NLSConfigurationError as e:
            print(f"Bad grid: {e}")
    """


class NLSSolverError(NLSKatoError, RuntimeError):
    """Raised when a numerical procedure fails to produce a valid result
    (non-monotone ground state, root finder without a bracket).

    Example::

        try:
            gs = solve_ground_state(2.0, grid)
        except NLSSolverError as e:
            print(f"Shooting failed: {e}")
    """


class NLSCacheError(NLSKatoError):
    """Raised when a cached ground state is unreadable, belongs to a
    different key, or its lock cannot be acquired in time.

    Example::

        try:
            gs = load_ground_state(path, key)
        except NLSCacheError:
            gs = solve_ground_state(key.alpha, grid)
    """


class NLSSerializationError(NLSKatoError):
    """Raised when a trajectory or summary cannot be encoded or decoded.

    Example::

        try:
            payload = serialize(trajectory, method="msgpack")
        except NLSSerializationError as e:
            print(f"Cannot encode: {e}")
    """
