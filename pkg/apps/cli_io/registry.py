"""
Name-to-command routing for the command line.
"""

from dataclasses import dataclass

from .commands import BaseCommand


@dataclass(frozen=True)
class CommandPattern:
    name: str
    command: type[BaseCommand]


def command(name: str, command_class: type[BaseCommand]) -> CommandPattern:
    return CommandPattern(name, command_class)
