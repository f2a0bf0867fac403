import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when != "call":
                continue
            props = dict(rep.user_properties)
            if "criterion" in props:
                lines.append((props["criterion"], outcome.upper(), props.get("title", ""), props.get("seconds")))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for num, outcome, title, secs in sorted(lines):
        t = f" ({secs:.2f} s)" if secs is not None else ""
        terminalreporter.write_line(f"criterion {num:2d}: {outcome} {title}{t}")
