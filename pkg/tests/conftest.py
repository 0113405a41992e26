from helpers import ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, secs, limit, detail in sorted(ACCEPTANCE, key=lambda r: r[0]):
        status = "PASS" if ok else "FAIL"
        line = f"criterion {number}: {status}  {title}  ({secs:.2f}s, limit {limit:g}s)"
        if detail:
            line += f"  {detail}"
        terminalreporter.write_line(line)
