"""
Dependency Injection Containers for the SGML solver.
Uses dependency-injector for IoC container management.
"""

from dependency_injector import containers, providers

from apps.cycle.models import SolverConfig
from apps.cycle.services import SGMLSolver, SolverInterface
from apps.kernels.executor import executor_resource
from apps.oracle.services import ReferenceSolver, ReferenceSolverInterface


class KernelsContainer(containers.DeclarativeContainer):
    """Container for kernel execution."""

    config = providers.Configuration()

    # One executor and thread pool until resources shut down
    executor = providers.Resource(
        executor_resource,
        threads=config.threads,
    )


class AppContainer(containers.DeclarativeContainer):
    """Main application container."""

    config = providers.Configuration()

    # Kernels container
    kernels = providers.Container(
        KernelsContainer,
        config=config.kernels,
    )

    solver_config = providers.Factory(
        SolverConfig,
        n_r=config.n_r,
        tol=config.tol,
        max_cycles=config.max_cycles,
        safety=config.safety,
        stagnation_cycles=config.stagnation_cycles,
    )

    solver: providers.Provider[SolverInterface] = providers.Factory(
        SGMLSolver,
        executor=kernels.executor,
    )

    oracle: providers.Provider[ReferenceSolverInterface] = providers.Factory(
        ReferenceSolver,
        max_unknowns=config.oracle_max_unknowns,
    )


# Global container instance
container = AppContainer()


def configure_container(**overrides):
    """Configure the container with settings; non-None keyword arguments win."""
    from apps.core.conf import settings

    values = {
        "threads": getattr(settings, "SGML_THREADS", 1),
        "n_r": getattr(settings, "SGML_NR", 2),
        "tol": getattr(settings, "SGML_TOL", 1e-12),
        "max_cycles": getattr(settings, "SGML_MAX_CYCLES", 50),
        "safety": getattr(settings, "SGML_SAFETY", 0.9),
        "stagnation_cycles": getattr(settings, "SGML_STAGNATION_CYCLES", 3),
        "oracle_max_unknowns": getattr(settings, "SGML_ORACLE_MAX_UNKNOWNS", 40_000),
    }
    values.update({key: value for key, value in overrides.items() if value is not None})
    threads = values.pop("threads")

    container.shutdown_resources()
    container.config.from_dict({**values, "kernels": {"threads": threads}})
