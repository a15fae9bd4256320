"""
Command configuration for the SGML solver.
"""

from apps.cli_io.commands import (
    BenchCommand,
    CapacitorCommand,
    ConvergenceCommand,
    DeformCommand,
    TrifoilCommand,
)
from apps.cli_io.registry import command

commandpatterns = [
    command("convergence", ConvergenceCommand),
    command("deform", DeformCommand),
    command("trifoil", TrifoilCommand),
    command("capacitor", CapacitorCommand),
    command("bench", BenchCommand),
]
