"""Application configuration."""
import os
from dotenv import load_dotenv

load_dotenv()


class Config:
    """Solver defaults, overridable from the environment or a .env file."""
    LOG_LEVEL = os.getenv('KGRING_LOG_LEVEL', 'WARNING')

    # Transcendental root scans
    SCAN_POINTS = int(os.getenv('KGRING_SCAN_POINTS', 10000))
    ENDPOINT_GUARD = float(os.getenv('KGRING_ENDPOINT_GUARD', 1e-6))  # fraction of mu
    ROOT_RESIDUAL = float(os.getenv('KGRING_ROOT_RESIDUAL', 1e-12))  # fraction of mu

    # Finite-difference oracle
    ORACLE_POINTS = int(os.getenv('KGRING_ORACLE_POINTS', 4000))
    ORACLE_EXTENT = float(os.getenv('KGRING_ORACLE_EXTENT', 60.0))  # box size in decay lengths
    ORACLE_REFINEMENT_TOL = float(os.getenv('KGRING_ORACLE_REFINEMENT_TOL', 1e-3))
    ORACLE_ENERGY_SAMPLES = int(os.getenv('KGRING_ORACLE_ENERGY_SAMPLES', 64))
    ANGULAR_POINTS = int(os.getenv('KGRING_ANGULAR_POINTS', 2000))

    # Quadrature
    QUAD_RTOL = float(os.getenv('KGRING_QUAD_RTOL', 1e-9))
    QUAD_MAX_EVALS = int(os.getenv('KGRING_QUAD_MAX_EVALS', 2 ** 20))

    # Output
    CSV_DIGITS = int(os.getenv('KGRING_CSV_DIGITS', 15))

    @classmethod
    def tolerance_keys(cls):
        """Names a run configuration may override, in lower case."""
        return {
            'scan_points', 'endpoint_guard', 'root_residual', 'oracle_points',
            'oracle_extent', 'oracle_refinement_tol', 'oracle_energy_samples',
            'angular_points', 'quad_rtol', 'quad_max_evals',
        }

    @classmethod
    def defaults(cls):
        """Current values of the overridable keys."""
        return {key: getattr(cls, key.upper()) for key in cls.tolerance_keys()}
