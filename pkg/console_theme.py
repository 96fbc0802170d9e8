from typing import Iterable, Mapping

from rich import box
from rich.console import Console
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table
from rich.theme import Theme

# Cyan for parameters, green/red for pass/fail
CONICAL_THEME = Theme({
    "info": "cyan",
    "warning": "yellow",
    "error": "bold red",
    "success": "bold green",
    "primary": "bold cyan",
    "dim": "dim white",
    "metric": "bright_cyan",
    "value": "bright_white",
})

# Data goes to stdout; everything human-facing goes to stderr
console = Console(theme=CONICAL_THEME, stderr=True)


def print_banner(title: str, subtitle: str = ""):
    """Print a command banner."""
    body = f"[primary]{title}[/primary]"
    if subtitle:
        body += f"\n[dim]{subtitle}[/dim]"
    console.print(Panel(body, border_style="cyan", box=box.ROUNDED))


def print_info(message: str):
    console.print(f"[info]i[/info]  {escape(message)}")


def print_success(message: str):
    console.print(f"[success]✓[/success]  {escape(message)}")


def print_error(message: str):
    console.print(f"[error]✗[/error]  {escape(message)}")


def print_warning(message: str):
    console.print(f"[warning]![/warning]  {escape(message)}")


def print_parameter_table(title: str, params: Mapping[str, object]):
    """Print command parameters as a two-column table."""
    table = Table(title=f"[primary]{title}[/primary]", border_style="cyan", box=box.SIMPLE,
                  show_header=True, header_style="bold cyan")
    table.add_column("Parameter", style="cyan")
    table.add_column("Value", style="value")
    for key, value in params.items():
        table.add_row(key, f"{value:.6g}" if isinstance(value, float) else str(value))
    console.print(table)


def print_check_table(results: Iterable) -> int:
    """
    Print verification results.

    Args:
        results: CheckResult-like objects with name, passed and detail

    Returns:
        Number of failed checks
    """
    table = Table(title="[primary]VERIFICATION[/primary]", border_style="cyan", box=box.SIMPLE,
                  show_header=True, header_style="bold cyan")
    table.add_column("Check", style="cyan")
    table.add_column("Status")
    table.add_column("Detail", style="dim")

    failed = 0
    for result in results:
        status = "[success]PASS[/success]" if result.passed else "[error]FAIL[/error]"
        failed += 0 if result.passed else 1
        table.add_row(result.name, status, result.detail)

    console.print(table)
    return failed
