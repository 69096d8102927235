ACCEPTANCE: dict[int, str] = {}


def record(n: int, ok: bool, detail: str, seconds: float, limit: float) -> str:
    status = "PASS" if ok else "FAIL"
    line = f"ACCEPTANCE {n}: {status}  {detail}  [{seconds:.2f}s, limit {limit:g}s]"
    ACCEPTANCE[n] = line
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
